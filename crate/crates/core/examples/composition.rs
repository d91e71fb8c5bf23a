//! Sequential composition: all admissible overlaps of two rules.

use sqpo::rewriting::{admissible_overlaps, compose_rules};
use sqpo::rule::library;

fn main() {
    let p2 = library::vertex_delete();
    let p1 = library::create_vertices(2);
    for ov in admissible_overlaps(&p2, &p1) {
        let r = compose_rules(&p2, &ov, &p1);
        println!(
            "overlap on {} vertices: composite deletes {} and creates {} vertices",
            ov.apex().vertex_count(),
            r.input().vertex_count() - r.context().vertex_count(),
            r.output().vertex_count() - r.context().vertex_count()
        );
    }
}
