//! Vertex creation and deletion satisfy the canonical commutation relation,
//! and act on discrete graphs like x and d/dx.

use num_rational::BigRational;
use num_traits::One;
use sqpo::algebra::{represent, ExactState, RuleAlgebraElement};
use sqpo::graph::Graph;
use sqpo::rule::library;

fn main() {
    let create = RuleAlgebraElement::basis(&library::vertex_create());
    let delete = RuleAlgebraElement::basis(&library::vertex_delete());
    let commutator = delete.commutator(&create);
    println!("[v-, v+] =\n{}", commutator.dump());
    assert_eq!(commutator, RuleAlgebraElement::unit());

    for n in 0..5 {
        let s = ExactState::discrete(n);
        let down = represent(&delete, &s);
        let up = represent(&create, &s);
        println!(
            "n={n}: v- gives {} copies of n-1, v+ gives {} copy of n+1",
            if n > 0 { down.coefficient(&Graph::discrete(n - 1)) } else { BigRational::from_integer(0.into()) },
            up.coefficient(&Graph::discrete(n + 1))
        );
        assert!(up.coefficient(&Graph::discrete(n + 1)).is_one());
    }
}
