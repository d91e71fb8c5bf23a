//! Seeded generators of small graphs and rules for property tests.

use rand::Rng;

use crate::graph::{Graph, Id};
use crate::rule::LinearRule;

/// Size limits for generated objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Shape {
    pub const fn new(max_vertices: usize, max_edges: usize) -> Self {
        Shape { max_vertices, max_edges }
    }
}

/// A graph with up to `shape.max_vertices` vertices and `shape.max_edges`
/// edges; loops and parallel edges allowed.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> Graph {
    let n = rng.gen_range(0..=shape.max_vertices);
    let mut g = Graph::discrete(n);
    if n > 0 {
        for _ in 0..rng.gen_range(0..=shape.max_edges) {
            let s = rng.gen_range(0..n) as Id;
            let t = rng.gen_range(0..n) as Id;
            g.add_edge(s, t);
        }
    }
    g
}

/// Adds up to `extra_vertices` vertices and then edges to `g` until it has
/// at most `shape.max_edges` edges. New edges may touch old vertices.
fn grow<R: Rng + ?Sized>(rng: &mut R, g: &Graph, shape: Shape) -> Graph {
    let mut out = g.clone();
    let room = shape.max_vertices.saturating_sub(out.vertex_count());
    for _ in 0..rng.gen_range(0..=room) {
        out.add_vertex();
    }
    let vertices: Vec<Id> = out.vertices().collect();
    if !vertices.is_empty() {
        let room = shape.max_edges.saturating_sub(out.edge_count());
        for _ in 0..rng.gen_range(0..=room) {
            let s = vertices[rng.gen_range(0..vertices.len())];
            let t = vertices[rng.gen_range(0..vertices.len())];
            out.add_edge(s, t);
        }
    }
    out
}

/// A rule whose output and input each fit in `shape`.
pub fn random_rule<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> LinearRule {
    let context = random_graph(rng, shape);
    let output = grow(rng, &context, shape);
    let input = grow(rng, &context, shape);
    LinearRule::from_inclusions(output, context, input).expect("context is a subgraph of both sides")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_fit_their_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = Shape::new(3, 2);
        for _ in 0..200 {
            let r = random_rule(&mut rng, shape);
            for g in [r.output(), r.context(), r.input()] {
                assert!(g.vertex_count() <= 3 && g.edge_count() <= 2);
            }
        }
    }

    #[test]
    fn same_seed_same_rules() {
        let shape = Shape::new(3, 3);
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            (0..20).map(|_| random_rule(&mut rng, shape)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b: Vec<_> = (0..20).map(|_| random_rule(&mut rng, shape)).collect();
        assert_eq!(a, b);
    }
}
