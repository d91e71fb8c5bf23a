//! Exact trajectory sampling (Gillespie's direct method) and moment
//! estimates over independent trajectories.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{active_match_counts, CTMCSpec};
use crate::algebra::Observable;
use crate::graph::Graph;
use crate::rewriting::{apply_rule, nth_match};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("t_max must be a positive finite time, got {0}")]
    Horizon(f64),
    #[error("grid time {0} lies outside [0, t_max]")]
    GridOutOfRange(f64),
    #[error("grid must be sorted")]
    GridUnsorted,
    #[error("need at least {need} trajectories, got {got}")]
    TooFewTrajectories { need: usize, got: usize },
}

/// Sampling parameters. Trajectory `k` draws from the ChaCha8 stream `k` of
/// `seed`, so results do not depend on scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub t_max: f64,
    pub n_traj: usize,
    pub grid: Vec<f64>,
    /// A trajectory whose state exceeds this many vertices plus edges is
    /// stopped and flagged.
    pub max_size: usize,
    /// Keep every jump (time, rule, new state).
    pub record_jumps: bool,
}

pub const DEFAULT_MAX_SIZE: usize = 10_000;

impl SimConfig {
    pub fn new(seed: u64, t_max: f64, n_traj: usize, grid: Vec<f64>) -> Result<Self, ConfigError> {
        let cfg = SimConfig {
            seed,
            t_max,
            n_traj,
            grid,
            max_size: DEFAULT_MAX_SIZE,
            record_jumps: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(ConfigError::Horizon(self.t_max));
        }
        if let Some(&t) = self.grid.iter().find(|t| !(**t >= 0.0 && **t <= self.t_max)) {
            return Err(ConfigError::GridOutOfRange(t));
        }
        if self.grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(ConfigError::GridUnsorted);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpRecord {
    pub time: f64,
    pub rule: usize,
    pub state: Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TrajectoryFlag {
    /// The state grew past the size guard at this time.
    Runaway { time: f64, size: usize },
    /// The total exit rate stopped being a finite number.
    RateOverflow { time: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub index: usize,
    /// `samples[g][o]` is observable `o` at grid time `g`. A flagged
    /// trajectory has rows only for the grid times it reached.
    pub samples: Vec<Vec<f64>>,
    pub jumps: Vec<JumpRecord>,
    pub jump_count: usize,
    pub flag: Option<TrajectoryFlag>,
    pub final_state: Graph,
}

/// Samples trajectory `stream` of `cfg.seed`.
pub fn simulate_trajectory(
    spec: &CTMCSpec,
    cfg: &SimConfig,
    observables: &[Observable],
    stream: u64,
) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut state = spec.initial().clone();
    let mut t = 0.0;
    let mut next_grid = 0;
    let mut samples = Vec::with_capacity(cfg.grid.len());
    let mut jumps = Vec::new();
    let mut jump_count = 0;
    let mut flag = None;
    let observe = |g: &Graph| observables.iter().map(|o| o.eigenvalue(g) as f64).collect::<Vec<_>>();

    loop {
        let counts = active_match_counts(spec, &state);
        let rates: Vec<f64> = counts.iter().zip(spec.rules()).map(|(&n, r)| r.rate * n as f64).collect();
        let total: f64 = rates.iter().sum();
        if !total.is_finite() {
            flag = Some(TrajectoryFlag::RateOverflow { time: t });
            break;
        }
        let t_next = if total > 0.0 {
            t + rng.sample::<f64, _>(Exp1) / total
        } else {
            f64::INFINITY
        };
        while next_grid < cfg.grid.len() && cfg.grid[next_grid] < t_next {
            samples.push(observe(&state));
            next_grid += 1;
        }
        if t_next > cfg.t_max {
            break;
        }
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = rates.len() - 1;
        for (j, &r) in rates.iter().enumerate() {
            if u < r {
                chosen = j;
                break;
            }
            u -= r;
        }
        // rounding can run past the last active rule
        while rates[chosen] == 0.0 {
            chosen -= 1;
        }
        let rule = &spec.rules()[chosen].rule;
        let mt = nth_match(rule, &state, rng.gen_range(0..counts[chosen])).expect("match index in range");
        state = apply_rule(rule, &mt).result().clone();
        t = t_next;
        jump_count += 1;
        if cfg.record_jumps {
            jumps.push(JumpRecord { time: t, rule: chosen, state: state.clone() });
        }
        let size = state.vertex_count() + state.edge_count();
        if size > cfg.max_size {
            flag = Some(TrajectoryFlag::Runaway { time: t, size });
            break;
        }
    }
    Trajectory { index: stream as usize, samples, jumps, jump_count, flag, final_state: state }
}

/// All `cfg.n_traj` trajectories, in index order. Runs on the rayon pool.
pub fn simulate_trajectories(spec: &CTMCSpec, cfg: &SimConfig, observables: &[Observable]) -> Vec<Trajectory> {
    (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|k| simulate_trajectory(spec, cfg, observables, k))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub t: f64,
    pub observable: String,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Sample statistics per grid time and observable. Flagged trajectories
/// are excluded and counted in `flagged`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries {
    pub rows: Vec<MomentRow>,
    pub flagged: usize,
}

impl MomentSeries {
    pub fn get(&self, t: f64, observable: &str) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.t == t && r.observable == observable)
    }

    /// CSV with header `t,observable,mean,variance,stderr,n`; numbers are
    /// printed in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,observable,mean,variance,stderr,n\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{}", r.t, r.observable, r.mean, r.variance, r.stderr, r.n)
                .expect("writing to a string");
        }
        out
    }
}

pub fn moments_from_trajectories(
    trajectories: &[Trajectory],
    grid: &[f64],
    names: &[String],
) -> MomentSeries {
    let good: Vec<&Trajectory> = trajectories.iter().filter(|t| t.flag.is_none()).collect();
    let mut rows = Vec::new();
    for (g, &t) in grid.iter().enumerate() {
        for (o, name) in names.iter().enumerate() {
            let values: Vec<f64> = good.iter().map(|tr| tr.samples[g][o]).collect();
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let variance = if n > 1 {
                values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            rows.push(MomentRow {
                t,
                observable: name.clone(),
                mean,
                variance,
                stderr: (variance / n as f64).sqrt(),
                n,
            });
        }
    }
    MomentSeries { rows, flagged: trajectories.len() - good.len() }
}

/// Runs the trajectories and summarises the named observables.
pub fn estimate_moments(
    spec: &CTMCSpec,
    cfg: &SimConfig,
    observables: &[(String, Observable)],
) -> Result<MomentSeries, ConfigError> {
    cfg.validate()?;
    if cfg.n_traj < 2 {
        return Err(ConfigError::TooFewTrajectories { need: 2, got: cfg.n_traj });
    }
    let obs: Vec<Observable> = observables.iter().map(|(_, o)| o.clone()).collect();
    let names: Vec<String> = observables.iter().map(|(n, _)| n.clone()).collect();
    let trajectories = simulate_trajectories(spec, cfg, &obs);
    Ok(moments_from_trajectories(&trajectories, &cfg.grid, &names))
}
