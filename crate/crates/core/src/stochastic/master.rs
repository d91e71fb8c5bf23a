//! The master equation on a truncated state space.
//!
//! States reachable from the initial graph are explored breadth first up to
//! a cap. Transitions that would leave the explored set feed a separate
//! absorbing leak state, so no probability is silently lost. The resulting
//! finite chain is solved by uniformization.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use super::CTMCSpec;
use crate::algebra::{Observable, StateVector};
use crate::canon::{canonical_form, CanonicalForm};
use crate::graph::Graph;
use crate::rewriting::{apply_rule, matches};

#[derive(Debug, Error, PartialEq)]
pub enum MasterError {
    #[error("state cap must be at least 1")]
    ZeroCap,
    #[error("time {0} is not a finite non-negative number")]
    BadTime(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterConfig {
    /// Maximal number of explored states.
    pub cap: usize,
    /// A solution whose leaked mass exceeds this is flagged unreliable.
    pub leak_threshold: f64,
}

impl Default for MasterConfig {
    fn default() -> Self {
        MasterConfig { cap: 30, leak_threshold: 1e-8 }
    }
}

/// The generator restricted to explored states.
#[derive(Debug, Clone)]
pub struct Generator {
    pub states: Vec<Graph>,
    pub keys: Vec<CanonicalForm>,
    /// Off-diagonal rates `x → y`, `x ≠ y`.
    pub transitions: Vec<BTreeMap<usize, f64>>,
    /// Rate of jumps to states outside the explored set.
    pub leak: Vec<f64>,
    /// Total rate of matches that rewrite the state into itself.
    pub self_loops: Vec<f64>,
    /// Diagonal entries.
    pub diagonal: Vec<f64>,
}

impl Generator {
    pub fn build(spec: &CTMCSpec, cap: usize) -> Result<Self, MasterError> {
        if cap == 0 {
            return Err(MasterError::ZeroCap);
        }
        let mut states = vec![spec.initial().clone()];
        let mut keys = vec![canonical_form(spec.initial())];
        let mut index: HashMap<CanonicalForm, usize> = HashMap::from([(keys[0].clone(), 0)]);
        let mut transitions = Vec::new();
        let mut leak = Vec::new();
        let mut self_loops = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut out: BTreeMap<usize, f64> = BTreeMap::new();
            let (mut escaped, mut stay) = (0.0, 0.0);
            let state = states[x].clone();
            for r in spec.rules() {
                if r.rate == 0.0 {
                    continue;
                }
                for mt in matches(&r.rule, &state) {
                    let result = apply_rule(&r.rule, &mt).result().clone();
                    let key = canonical_form(&result);
                    let target = match index.get(&key) {
                        Some(&y) => Some(y),
                        None if states.len() < cap => {
                            let y = states.len();
                            index.insert(key.clone(), y);
                            states.push(result);
                            keys.push(key);
                            queue.push_back(y);
                            Some(y)
                        }
                        None => None,
                    };
                    match target {
                        Some(y) if y == x => stay += r.rate,
                        Some(y) => *out.entry(y).or_default() += r.rate,
                        None => escaped += r.rate,
                    }
                }
            }
            // states are processed in discovery order, so x == transitions.len()
            transitions.push(out);
            leak.push(escaped);
            self_loops.push(stay);
        }
        let diagonal = transitions
            .iter()
            .zip(&leak)
            .map(|(out, l)| -(out.values().sum::<f64>() + l))
            .collect();
        Ok(Generator { states, keys, transitions, leak, self_loops, diagonal })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `row sum + leak` for state `x`, zero up to rounding.
    pub fn row_defect(&self, x: usize) -> f64 {
        self.transitions[x].values().sum::<f64>() + self.leak[x] + self.diagonal[x]
    }

    /// Total rate of all matches in state `x`, self-loops included.
    pub fn exit_rate(&self, x: usize) -> f64 {
        -self.diagonal[x] + self.self_loops[x]
    }

    /// `p ↦ p + pQ/Λ` on explored states plus the leak.
    fn uniformized_step(&self, p: &[f64], leaked: f64, lambda: f64) -> (Vec<f64>, f64) {
        let mut next: Vec<f64> = p.iter().zip(&self.diagonal).map(|(pi, d)| pi * (1.0 + d / lambda)).collect();
        let mut leaked = leaked;
        for (x, out) in self.transitions.iter().enumerate() {
            if p[x] == 0.0 {
                continue;
            }
            for (&y, &rate) in out {
                next[y] += p[x] * rate / lambda;
            }
            leaked += p[x] * self.leak[x] / lambda;
        }
        (next, leaked)
    }

    /// Advances `(p, leaked)` by `dt`.
    fn advance(&self, p: &[f64], leaked: f64, dt: f64) -> (Vec<f64>, f64) {
        let lambda = self.diagonal.iter().fold(0.0f64, |m, d| m.max(-d));
        if lambda == 0.0 || dt == 0.0 {
            return (p.to_vec(), leaked);
        }
        // keep Λ·h moderate so the Poisson weights stay representable
        let pieces = (lambda * dt / 20.0).ceil().max(1.0) as usize;
        let h = dt / pieces as f64;
        let mut state = (p.to_vec(), leaked);
        for _ in 0..pieces {
            let mean = lambda * h;
            let mut weight = (-mean).exp();
            let mut term = state.clone();
            let mut acc: (Vec<f64>, f64) = (term.0.iter().map(|v| v * weight).collect(), term.1 * weight);
            let mut covered = weight;
            let mut k = 0usize;
            while 1.0 - covered > 1e-15 && k < 10_000 {
                k += 1;
                term = self.uniformized_step(&term.0, term.1, lambda);
                weight *= mean / k as f64;
                covered += weight;
                for (a, v) in acc.0.iter_mut().zip(&term.0) {
                    *a += weight * v;
                }
                acc.1 += weight * term.1;
            }
            state = acc;
        }
        state
    }
}

/// Distributions at requested times.
#[derive(Debug, Clone)]
pub struct MasterSolution {
    pub generator: Generator,
    pub times: Vec<f64>,
    /// `probabilities[k][x]` at `times[k]`.
    pub probabilities: Vec<Vec<f64>>,
    pub leaked: Vec<f64>,
    pub leak_threshold: f64,
}

impl MasterSolution {
    /// True when the leaked mass stayed under the threshold at every time.
    pub fn reliable(&self) -> bool {
        self.leaked.iter().all(|&l| l <= self.leak_threshold)
    }

    pub fn state_vector(&self, k: usize) -> StateVector<f64> {
        let mut s = StateVector::zero();
        for (key, &p) in self.generator.keys.iter().zip(&self.probabilities[k]) {
            s.add_term(key.clone(), p);
        }
        s
    }

    /// Expected value of the observable at `times[k]`, over explored states.
    pub fn mean(&self, observable: &Observable, k: usize) -> f64 {
        self.generator
            .states
            .iter()
            .zip(&self.probabilities[k])
            .map(|(g, p)| p * observable.eigenvalue(g) as f64)
            .sum()
    }
}

/// Solves the truncated master equation from the initial state of `spec`.
pub fn integrate_master_truncated(
    spec: &CTMCSpec,
    times: &[f64],
    cfg: MasterConfig,
) -> Result<MasterSolution, MasterError> {
    if let Some(&t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(MasterError::BadTime(t));
    }
    let generator = Generator::build(spec, cfg.cap)?;
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let mut probabilities = vec![Vec::new(); times.len()];
    let mut leaked = vec![0.0; times.len()];
    let mut p = vec![0.0; generator.len()];
    p[0] = 1.0;
    let (mut t, mut l) = (0.0, 0.0);
    for k in order {
        (p, l) = generator.advance(&p, l, times[k] - t);
        t = times[k];
        probabilities[k] = p.clone();
        leaked[k] = l;
    }
    Ok(MasterSolution { generator, times: times.to_vec(), probabilities, leaked, leak_threshold: cfg.leak_threshold })
}
