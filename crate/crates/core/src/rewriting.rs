//! Direct derivations and sequential composition of linear rules.

use std::collections::BTreeSet;

use crate::constructions::{final_pullback_complement, pullback, pushout, pushout_complement};
use crate::graph::{Graph, GraphMorphism, Id, Span};
use crate::monos::{count_monos, enumerate_monos, for_each_mono};
use crate::rule::LinearRule;

/// A match `m: I → X` of a rule's input into a host; the host is `m.cod()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub m: GraphMorphism,
}

impl Match {
    pub fn host(&self) -> &Graph {
        self.m.cod()
    }
}

/// Every match of `p` into `x`, in the deterministic order of
/// [`enumerate_monos`].
pub fn matches(p: &LinearRule, x: &Graph) -> Vec<Match> {
    enumerate_monos(p.input(), x).into_iter().map(|m| Match { m }).collect()
}

pub fn match_count(p: &LinearRule, x: &Graph) -> usize {
    count_monos(p.input(), x)
}

/// The `index`-th match in [`matches`] order, without building the others.
pub fn nth_match(p: &LinearRule, x: &Graph, index: usize) -> Option<Match> {
    let mut seen = 0;
    let mut found = None;
    for_each_mono(p.input(), x, |vmap, emap| {
        if seen == index {
            found = Some((vmap.clone(), emap.clone()));
        }
        seen += 1;
    });
    found.map(|(vmap, emap)| Match {
        m: GraphMorphism::new_unchecked(p.input().clone(), x.clone(), vmap, emap),
    })
}

/// ```text
///   O <--o-- K --i--> I
///   |        |        |
///  m*        k        m
///   v        v        v
///   X' <-o'- K̄ --i'-> X
/// ```
/// The left square is a pushout, the right one a final pullback complement.
#[derive(Debug, Clone)]
pub struct DirectDerivation {
    pub rule: LinearRule,
    pub m: GraphMorphism,
    pub k: GraphMorphism,
    pub i_prime: GraphMorphism,
    pub o_prime: GraphMorphism,
    pub comatch: GraphMorphism,
}

impl DirectDerivation {
    pub fn host(&self) -> &Graph {
        self.m.cod()
    }

    pub fn intermediate(&self) -> &Graph {
        self.k.cod()
    }

    pub fn result(&self) -> &Graph {
        self.o_prime.cod()
    }
}

/// Applies `p` along `mt`: delete by final pullback complement, then glue
/// in the output by pushout. Total on every match.
pub fn apply_rule(p: &LinearRule, mt: &Match) -> DirectDerivation {
    assert_eq!(mt.m.dom(), p.input(), "match must start at the rule input");
    let (k, i_prime) = final_pullback_complement(p.i(), &mt.m);
    let glued = pushout(&k, p.o());
    DirectDerivation {
        rule: p.clone(),
        m: mt.m.clone(),
        k,
        i_prime,
        o_prime: glued.left,
        comatch: glued.right,
    }
}

/// A span `I₂ ←m2− M −m1→ O₁` of monos relating the input of the second
/// rule to the output of the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub m2: GraphMorphism,
    pub m1: GraphMorphism,
}

impl Overlap {
    pub fn apex(&self) -> &Graph {
        self.m2.dom()
    }

    pub fn as_span(&self) -> Span {
        Span { left: self.m2.clone(), right: self.m1.clone() }
    }
}

/// Every subgraph of `g` (as a vertex set and an edge set on it), in a
/// fixed order.
pub fn subgraphs(g: &Graph) -> Vec<Graph> {
    let vertices: Vec<Id> = g.vertices().collect();
    let edges: Vec<(Id, Id, Id)> = g.edges().collect();
    assert!(vertices.len() < 32 && edges.len() < 32, "graph too large for subgraph enumeration");
    let mut out = Vec::new();
    for vmask in 0u32..(1 << vertices.len()) {
        let vset: BTreeSet<Id> = vertices
            .iter()
            .enumerate()
            .filter(|(b, _)| vmask >> b & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let inner: Vec<Id> = edges
            .iter()
            .filter(|(_, s, t)| vset.contains(s) && vset.contains(t))
            .map(|&(e, _, _)| e)
            .collect();
        for emask in 0u32..(1 << inner.len()) {
            let eset: BTreeSet<Id> = inner
                .iter()
                .enumerate()
                .filter(|(b, _)| emask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(g.subgraph(&vset, &eset));
        }
    }
    out
}

/// Whether the overlap admits the pushout complement that makes it an
/// admissible match of `p2` into `p1`.
pub fn is_admissible(p2: &LinearRule, overlap: &Overlap, p1: &LinearRule) -> bool {
    let n = pushout(&overlap.m2, &overlap.m1);
    pushout_complement(p1.o(), &n.right).is_some()
        && overlap.m2.cod() == p2.input()
        && overlap.m1.cod() == p1.output()
}

/// All admissible overlaps of `p2` into `p1`.
///
/// Each concrete subgraph `M ⊆ I₂` is paired with every mono `M → O₁`, so
/// two overlaps that differ only by an automorphism of `O₁` are both
/// listed. This is the count that the rule algebra product sums over.
pub fn admissible_overlaps(p2: &LinearRule, p1: &LinearRule) -> Vec<Overlap> {
    let mut out = Vec::new();
    for sub in subgraphs(p2.input()) {
        let m2 = GraphMorphism::inclusion(&sub, p2.input()).expect("subgraph includes");
        for m1 in enumerate_monos(&sub, p1.output()) {
            let n = pushout(&m2, &m1);
            if pushout_complement(p1.o(), &n.right).is_some() {
                out.push(Overlap { m2: m2.clone(), m1 });
            }
        }
    }
    out
}

/// The composite `p2 ∘_m p1` along an admissible overlap.
///
/// ```text
///  O₂ ← K₂ → I₂       O₁ ← K₁ → I₁
///  ↓    ↓     ↘ N₂₁ ↙     ↓    ↓
///  O₂₁ ← K̄₂  ──→ ←──  K̄₁ → I₂₁
///          ↖   K₂₁   ↗
/// ```
/// `N₂₁` is the pushout of the overlap; `K̄₁` its pushout complement along
/// `o₁`, `K̄₂` the final pullback complement along `i₂`. `K₂₁` is the
/// pullback of `K̄₂ → N₂₁ ← K̄₁`.
pub fn compose_rules(p2: &LinearRule, overlap: &Overlap, p1: &LinearRule) -> LinearRule {
    assert_eq!(overlap.m2.cod(), p2.input(), "overlap must land in the input of p2");
    assert_eq!(overlap.m1.cod(), p1.output(), "overlap must land in the output of p1");
    let n = pushout(&overlap.m2, &overlap.m1);
    let (n2, n1) = (n.left, n.right);
    let (k1, o1_prime) =
        pushout_complement(p1.o(), &n1).expect("compose_rules needs an admissible overlap");
    let i1_prime = pushout(&k1, p1.i()).left;
    let (k2, i2_prime) = final_pullback_complement(p2.i(), &n2);
    let o2_prime = pushout(&k2, p2.o()).left;
    let k21 = pullback(&i2_prime, &o1_prime);
    let o21 = k21.left.then(&o2_prime).expect("composable");
    let i21 = k21.right.then(&i1_prime).expect("composable");
    LinearRule::new(o21, i21).expect("legs share the pullback apex")
}

/// Every composite of `p2` after `p1`, one per admissible overlap.
pub fn composites(p2: &LinearRule, p1: &LinearRule) -> Vec<LinearRule> {
    admissible_overlaps(p2, p1)
        .iter()
        .map(|ov| compose_rules(p2, ov, p1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonical_form, graphs_isomorphic};
    use crate::rule::library::*;
    use crate::verify::{verify_square, Square, SquareKind};

    #[test]
    fn match_counts() {
        let path = Graph::from_edge_list(2, &[(0, 1)]);
        assert_eq!(matches(&vertex_delete(), &path).len(), 2);
        assert_eq!(matches(&edge_create(), &Graph::discrete(3)).len(), 6);
        assert_eq!(matches(&vertex_create(), &path).len(), 1);
        let m = nth_match(&edge_create(), &Graph::discrete(3), 4).unwrap();
        assert_eq!(m, matches(&edge_create(), &Graph::discrete(3))[4]);
        assert!(nth_match(&edge_create(), &Graph::discrete(3), 6).is_none());
    }

    #[test]
    fn vertex_deletion_removes_incident_edge() {
        let x = Graph::from_edge_list(2, &[(0, 1)]);
        let d = apply_rule(&vertex_delete(), &matches(&vertex_delete(), &x)[0]);
        assert_eq!(d.result().vertex_count(), 1);
        assert_eq!(d.result().edge_count(), 0);
    }

    #[test]
    fn identity_rule_leaves_host_alone() {
        let x = Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 2)]);
        let p = edge_identity();
        for mt in matches(&p, &x) {
            assert!(graphs_isomorphic(apply_rule(&p, &mt).result(), &x));
        }
    }

    #[test]
    fn vertex_creation_on_empty_graph() {
        let d = apply_rule(&vertex_create(), &matches(&vertex_create(), &Graph::empty())[0]);
        assert_eq!(d.result(), &Graph::discrete(1));
    }

    #[test]
    fn derivation_squares_verify() {
        let x = Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)]);
        for p in [vertex_delete(), edge_delete(), edge_delete_keep_target(), edge_create()] {
            for mt in matches(&p, &x) {
                let d = apply_rule(&p, &mt);
                let fpc = Square::new(p.i().clone(), d.k.clone(), d.m.clone(), d.i_prime.clone());
                assert!(verify_square(SquareKind::Fpc, &fpc).holds());
                let po = Square::new(p.o().clone(), d.k.clone(), d.comatch.clone(), d.o_prime.clone());
                assert!(verify_square(SquareKind::Pushout, &po).holds());
            }
        }
    }

    #[test]
    fn vertex_delete_after_two_creations_has_three_overlaps() {
        let ov = admissible_overlaps(&vertex_delete(), &create_vertices(2));
        assert_eq!(ov.len(), 3);
        let forms: Vec<_> = ov
            .iter()
            .map(|o| compose_rules(&vertex_delete(), o, &create_vertices(2)).canonical_form())
            .collect();
        let empty_overlap = discrete_rule(2, 1).canonical_form();
        let full_overlap = create_vertices(1).canonical_form();
        assert_eq!(forms.iter().filter(|f| **f == empty_overlap).count(), 1);
        assert_eq!(forms.iter().filter(|f| **f == full_overlap).count(), 2);
    }

    #[test]
    fn empty_input_has_only_the_trivial_overlap() {
        let ov = admissible_overlaps(&vertex_create(), &edge_create());
        assert_eq!(ov.len(), 1);
        assert!(ov[0].apex().is_empty());
    }

    #[test]
    fn dangling_overlap_is_excluded() {
        assert_eq!(admissible_overlaps(&edge_create(), &vertex_delete()).len(), 1);
        assert_eq!(admissible_overlaps(&vertex_delete(), &edge_delete()).len(), 3);
        let p1 = vertex_create();
        // gluing a→b onto the freshly created vertex leaves the edge dangling
        let ov = admissible_overlaps(&edge_delete(), &p1);
        let brute = subgraphs(edge_delete().input())
            .into_iter()
            .flat_map(|s| {
                let m2 = GraphMorphism::inclusion(&s, edge_delete().input()).unwrap();
                enumerate_monos(&s, p1.output())
                    .into_iter()
                    .map(move |m1| Overlap { m2: m2.clone(), m1 })
            })
            .filter(|o| brute_force_poc_exists(p1.o(), &pushout(&o.m2, &o.m1).right))
            .count();
        assert_eq!(ov.len(), brute);
        assert_eq!(ov.len(), 1);
    }

    /// Searches every subgraph of `N` for a pushout complement.
    fn brute_force_poc_exists(o: &GraphMorphism, n: &GraphMorphism) -> bool {
        let big = n.cod();
        subgraphs(big).into_iter().any(|kbar| {
            let Ok(out) = GraphMorphism::inclusion(&kbar, big) else { return false };
            let vmap = o.dom().vertices().map(|v| (v, n.map_vertex(o.map_vertex(v)))).collect();
            let emap = o.dom().edges().map(|(e, _, _)| (e, n.map_edge(o.map_edge(e)))).collect();
            let Ok(k) = GraphMorphism::new(o.dom().clone(), kbar.clone(), vmap, emap) else {
                return false;
            };
            let sq = Square::new(o.clone(), k, n.clone(), out);
            verify_square(SquareKind::Pushout, &sq).holds()
        })
    }

    #[test]
    fn delete_after_create_over_full_overlap_is_unit() {
        let ov = admissible_overlaps(&vertex_delete(), &vertex_create());
        let full: Vec<_> = ov.iter().filter(|o| o.apex().vertex_count() == 1).collect();
        assert_eq!(full.len(), 1);
        let r = compose_rules(&vertex_delete(), full[0], &vertex_create());
        assert_eq!(r.canonical_form(), LinearRule::unit().canonical_form());
    }

    #[test]
    fn unit_rule_composes_to_the_other_rule() {
        for p in [edge_create(), vertex_delete(), edge_delete_keep_source()] {
            let left = composites(&LinearRule::unit(), &p);
            let right = composites(&p, &LinearRule::unit());
            assert_eq!(left.len(), 1);
            assert_eq!(right.len(), 1);
            assert_eq!(left[0].canonical_form(), p.canonical_form());
            assert_eq!(right[0].canonical_form(), p.canonical_form());
        }
    }

    #[test]
    fn composite_over_empty_overlap_is_disjoint_union() {
        let r = composites(&vertex_delete(), &create_vertices(2))
            .into_iter()
            .find(|r| r.input().vertex_count() == 1)
            .unwrap();
        assert_eq!(canonical_form(r.output()), canonical_form(&Graph::discrete(2)));
        assert!(r.context().is_empty());
    }

    #[test]
    fn subgraph_count() {
        // • • with one edge: vertex subsets 4, the full one has 2 edge choices
        assert_eq!(subgraphs(&Graph::from_edge_list(2, &[(0, 1)])).len(), 5);
    }
}
