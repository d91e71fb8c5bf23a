//! Continuous-time Markov chains generated by rewriting rules with
//! mass-action rates: every match of rule `j` fires at rate `κ_j`.

mod master;
mod reference;
mod ssa;

pub use master::{integrate_master_truncated, Generator, MasterConfig, MasterError, MasterSolution};
pub use reference::{
    reference_edge_mean, reference_edge_mean_curve, reference_vertex_mgf, stationary_edge_mean,
    vertex_factorial_moment, vertex_mean, vertex_variance, EdgeModel, ReferenceError, VertexModel,
};
pub use ssa::{
    estimate_moments, moments_from_trajectories, simulate_trajectory, simulate_trajectories,
    ConfigError, JumpRecord, DEFAULT_MAX_SIZE, MomentRow, MomentSeries, SimConfig, Trajectory, TrajectoryFlag,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rewriting::match_count;
use crate::rule::{library, LinearRule};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model has no rules")]
    NoRules,
    #[error("rule {name}: rate {rate} is not a finite non-negative number")]
    BadRate { name: String, rate: f64 },
    #[error("rule {0}: unknown library rule")]
    UnknownRule(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A rule with its base rate.
#[derive(Debug, Clone)]
pub struct RatedRule {
    pub name: String,
    pub rule: LinearRule,
    pub rate: f64,
}

/// Rules with base rates and an initial state.
#[derive(Debug, Clone)]
pub struct CTMCSpec {
    rules: Vec<RatedRule>,
    initial: Graph,
}

impl CTMCSpec {
    pub fn new(rules: Vec<RatedRule>, initial: Graph) -> Result<Self, ModelError> {
        if rules.is_empty() {
            return Err(ModelError::NoRules);
        }
        if let Some(r) = rules.iter().find(|r| !(r.rate.is_finite() && r.rate >= 0.0)) {
            return Err(ModelError::BadRate { name: r.name.clone(), rate: r.rate });
        }
        Ok(CTMCSpec { rules, initial })
    }

    /// Vertex creation and deletion only, from `initial`.
    pub fn vertex_model(nu_plus: f64, nu_minus: f64, initial: Graph) -> Result<Self, ModelError> {
        Self::new(
            vec![
                rated("v+", library::vertex_create(), nu_plus),
                rated("v-", library::vertex_delete(), nu_minus),
            ],
            initial,
        )
    }

    /// Vertex and edge creation and deletion.
    pub fn random_graph_model(
        nu_plus: f64,
        nu_minus: f64,
        eps_plus: f64,
        eps_minus: f64,
        initial: Graph,
    ) -> Result<Self, ModelError> {
        Self::new(
            vec![
                rated("v+", library::vertex_create(), nu_plus),
                rated("v-", library::vertex_delete(), nu_minus),
                rated("e+", library::edge_create(), eps_plus),
                rated("e-", library::edge_delete(), eps_minus),
            ],
            initial,
        )
    }

    pub fn rules(&self) -> &[RatedRule] {
        &self.rules
    }

    pub fn initial(&self) -> &Graph {
        &self.initial
    }

    pub fn with_initial(&self, initial: Graph) -> Self {
        CTMCSpec { rules: self.rules.clone(), initial }
    }

    /// Parses a model file, see [`ModelFile`].
    pub fn from_json(s: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

fn rated(name: &str, rule: LinearRule, rate: f64) -> RatedRule {
    RatedRule { name: name.to_string(), rule, rate }
}

/// Wire form of a model:
///
/// ```json
/// {"rules": [{"name": "v+", "rule": "v+", "rate": 2.0},
///            {"name": "mine", "rule": {"output": .., "context": .., "input": .., "o": .., "i": ..}, "rate": 1}],
///  "initial": {"vertices": [], "edges": []}}
/// ```
/// A string `rule` names a library rule; `initial` defaults to the empty graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub rules: Vec<ModelRule>,
    #[serde(default)]
    pub initial: Option<Graph>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelRule {
    pub name: String,
    pub rule: RuleSource,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum RuleSource {
    Library(String),
    Inline(Box<LinearRule>),
}

// Untagged derive buffers the input, which loses the integer keys of the
// morphism maps; going through a JSON value keeps them.
impl<'de> Deserialize<'de> for RuleSource {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(name) => Ok(RuleSource::Library(name)),
            value => serde_json::from_value(value).map(|r| RuleSource::Inline(Box::new(r))).map_err(serde::de::Error::custom),
        }
    }
}

impl TryFrom<ModelFile> for CTMCSpec {
    type Error = ModelError;

    fn try_from(file: ModelFile) -> Result<Self, ModelError> {
        let rules = file
            .rules
            .into_iter()
            .map(|r| {
                let rule = match r.rule {
                    RuleSource::Library(name) => {
                        library::by_name(&name).ok_or(ModelError::UnknownRule(name))?
                    }
                    RuleSource::Inline(rule) => *rule,
                };
                Ok(RatedRule { name: r.name, rule, rate: r.rate })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        CTMCSpec::new(rules, file.initial.unwrap_or_else(Graph::empty))
    }
}

/// Rate of each rule in state `x`: `κ_j · |matches(p_j, x)|`.
pub fn propensities(spec: &CTMCSpec, x: &Graph) -> Vec<(usize, f64)> {
    active_match_counts(spec, x)
        .into_iter()
        .zip(&spec.rules)
        .enumerate()
        .map(|(j, (n, r))| (j, r.rate * n as f64))
        .collect()
}

/// Match counts per rule, skipping the enumeration for rules of rate zero.
fn active_match_counts(spec: &CTMCSpec, x: &Graph) -> Vec<usize> {
    spec.rules
        .iter()
        .map(|r| if r.rate == 0.0 { 0 } else { match_count(&r.rule, x) })
        .collect()
}

/// Total exit rate of `x`.
pub fn exit_rate(spec: &CTMCSpec, x: &Graph) -> f64 {
    propensities(spec, x).iter().map(|(_, r)| r).sum()
}
