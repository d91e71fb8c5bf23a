pub mod algebra;
pub mod canon;
pub mod cli;
pub mod constructions;
pub mod graph;
pub mod monos;
pub mod random;
pub mod rewriting;
pub mod rule;
pub mod stochastic;
pub mod suites;
pub mod verify;
