//! Stochastic simulation of the random graph model against the reference curves.

use sqpo::algebra::Observable;
use sqpo::graph::Graph;
use sqpo::stochastic::{estimate_moments, reference_edge_mean, vertex_mean, CTMCSpec, EdgeModel, SimConfig};

fn main() {
    let (nu_plus, nu_minus, eps_plus, eps_minus) = (2.0, 1.0, 1.0, 0.5);
    let spec = CTMCSpec::random_graph_model(nu_plus, nu_minus, eps_plus, eps_minus, Graph::empty()).unwrap();
    let grid = vec![0.5, 1.0, 2.0, 4.0];
    let cfg = SimConfig::new(11, 4.0, 2000, grid.clone()).unwrap();
    let observables = [("V".to_string(), Observable::vertices()), ("E".to_string(), Observable::edges())];
    let moments = estimate_moments(&spec, &cfg, &observables).unwrap();
    let edge_model = EdgeModel::new(nu_plus, nu_minus, eps_plus, eps_minus, 0.0, 0.0).unwrap();
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "t", "V ssa", "V exact", "E ssa", "E exact");
    for &t in &grid {
        println!(
            "{t:>5} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            moments.get(t, "V").unwrap().mean,
            vertex_mean(t, nu_plus, nu_minus, 0.0).unwrap(),
            moments.get(t, "E").unwrap().mean,
            reference_edge_mean(t, &edge_model).unwrap()
        );
    }
    println!("flagged trajectories: {}", moments.flagged);
}
