//! Products and commutators of edge rules, with their coefficients.

use sqpo::algebra::ProductTable;
use sqpo::algebra::RuleAlgebraElement;
use sqpo::rule::library;

fn main() {
    let mut table = ProductTable::new();
    let e_plus = RuleAlgebraElement::basis(&library::edge_create());
    let e_minus = RuleAlgebraElement::basis(&library::edge_delete());
    let v_minus = RuleAlgebraElement::basis(&library::vertex_delete());
    println!("e- * e+ =\n{}", table.product(&e_minus, &e_plus).dump());
    println!("[e-, e+] =\n{}", table.commutator(&e_minus, &e_plus).dump());
    println!("[v-, e+] =\n{}", table.commutator(&v_minus, &e_plus).dump());
}
