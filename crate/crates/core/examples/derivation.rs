//! A direct derivation with the edge-deleting rule on every match of a host.

use sqpo::graph::Graph;
use sqpo::rewriting::{apply_rule, matches};
use sqpo::rule::library;

fn main() {
    let host = Graph::from_edge_list(3, &[(0, 1), (1, 2), (1, 2)]);
    let rule = library::vertex_delete();
    println!("host: {}", host.to_json());
    for (n, mt) in matches(&rule, &host).iter().enumerate() {
        let d = apply_rule(&rule, mt);
        println!(
            "match {n} at vertex {}: result {} vertices, {} edges",
            mt.m.map_vertex(0),
            d.result().vertex_count(),
            d.result().edge_count()
        );
    }
    let rule = library::edge_delete_keep_target();
    for mt in matches(&rule, &host) {
        let d = apply_rule(&rule, &mt);
        println!("E-01 on edge {}: {}", mt.m.map_edge(0), d.result().to_json());
    }
}
