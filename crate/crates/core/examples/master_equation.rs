//! Truncated master equation for vertex birth and death.

use sqpo::algebra::Observable;
use sqpo::graph::Graph;
use sqpo::stochastic::{integrate_master_truncated, CTMCSpec, MasterConfig};

fn main() {
    let spec = CTMCSpec::vertex_model(1.0, 1.0, Graph::empty()).unwrap();
    let times = [0.0, 1.0, 2.0, 5.0];
    let sol = integrate_master_truncated(&spec, &times, MasterConfig::default()).unwrap();
    println!("{} states explored, reliable: {}", sol.generator.len(), sol.reliable());
    for (k, t) in times.iter().enumerate() {
        println!(
            "t={t}: E[V] = {:.10} (exact {:.10}), leaked {:.2e}",
            sol.mean(&Observable::vertices(), k),
            1.0 - (-t).exp(),
            sol.leaked[k]
        );
    }
}
