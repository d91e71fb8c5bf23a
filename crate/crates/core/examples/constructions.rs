//! Pushouts, pullbacks and final pullback complements, each checked
//! against its universal property by brute force.

use sqpo::constructions::{final_pullback_complement, pullback, pushout};
use sqpo::graph::{Graph, GraphMorphism};
use sqpo::verify::{verify_square, Square, SquareKind};

fn main() {
    // glue two edges along their common target vertex
    let k = Graph::discrete(1);
    let a = Graph::from_edge_list(2, &[(0, 1)]);
    let f = GraphMorphism::new(k.clone(), a.clone(), [(0, 1)].into(), [].into()).unwrap();
    let po = pushout(&f, &f);
    println!("pushout of two edges over a vertex: {}", po.foot().to_json());
    let square = Square::new(f.clone(), f.clone(), po.left.clone(), po.right.clone());
    println!("  universal property: {:?}", verify_square(SquareKind::Pushout, &square));

    let pb = pullback(&po.left, &po.right);
    println!("pullback of the two legs back: {}", pb.apex().to_json());

    // delete vertex 1 of the edge 0 -> 1 inside a triangle with a loop on 1
    let x = Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]);
    let i_graph = Graph::discrete(1);
    let i = GraphMorphism::initial(&i_graph);
    let m = GraphMorphism::new(i_graph, x.clone(), [(0, 1)].into(), [].into()).unwrap();
    let (k_leg, kbar) = final_pullback_complement(&i, &m);
    println!("final pullback complement after deleting vertex 1: {}", kbar.dom().to_json());
    let square = Square::new(i, k_leg, m, kbar);
    println!("  universal property: {:?}", verify_square(SquareKind::Fpc, &square));
}
