//! Pushouts, pullbacks, pushout complements and final pullback complements
//! along monomorphisms.
//!
//! Outputs reuse ids from one of the inputs where possible and otherwise
//! allocate fresh ids above the largest one in use, so every construction is
//! a deterministic function of its inputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Cospan, Graph, GraphMorphism, Id, Span};

/// Pushout of `f: K → B` and `g: K → C`.
///
/// The pushout object keeps the ids of `B`; elements of `C` outside the
/// image of `g` are appended with fresh ids. Returns the cospan
/// `B → P ← C`.
pub fn pushout(f: &GraphMorphism, g: &GraphMorphism) -> Cospan {
    assert_eq!(f.dom(), g.dom(), "pushout legs must share their domain");
    let b = f.cod();
    let c = g.cod();
    let mut p = b.clone();

    // g(k) is identified with f(k); everything else in C is new.
    let mut cv: BTreeMap<Id, Id> = g
        .vmap()
        .iter()
        .map(|(k, &gk)| (gk, f.map_vertex(*k)))
        .collect();
    let mut next = b.next_vertex_id();
    for v in c.vertices() {
        cv.entry(v).or_insert_with(|| {
            let id = next;
            next += 1;
            p.insert_vertex(id);
            id
        });
    }
    let mut ce: BTreeMap<Id, Id> = g
        .emap()
        .iter()
        .map(|(k, &gk)| (gk, f.map_edge(*k)))
        .collect();
    let mut next = b.next_edge_id();
    for (e, s, t) in c.edges() {
        if ce.contains_key(&e) {
            continue;
        }
        p.insert_edge(next, cv[&s], cv[&t]);
        ce.insert(e, next);
        next += 1;
    }

    let left = GraphMorphism::new_unchecked(
        b.clone(),
        p.clone(),
        b.vertices().map(|v| (v, v)).collect(),
        b.edges().map(|(e, _, _)| (e, e)).collect(),
    );
    let right = GraphMorphism::new_unchecked(c.clone(), p, cv, ce);
    Cospan { left, right }
}

/// Pullback of `f: B → D` and `g: C → D`: the elements on which the images
/// agree. The apex is a subgraph of `B` (same ids); returns `B ← P → C`.
pub fn pullback(f: &GraphMorphism, g: &GraphMorphism) -> Span {
    assert_eq!(f.cod(), g.cod(), "pullback legs must share their codomain");
    let b = f.dom();
    let c = g.dom();
    let g_inv_v: BTreeMap<Id, Id> = g.vmap().iter().map(|(&x, &d)| (d, x)).collect();
    let g_inv_e: BTreeMap<Id, Id> = g.emap().iter().map(|(&x, &d)| (d, x)).collect();

    let to_c_v: BTreeMap<Id, Id> = b
        .vertices()
        .filter_map(|v| g_inv_v.get(&f.map_vertex(v)).map(|&w| (v, w)))
        .collect();
    let to_c_e: BTreeMap<Id, Id> = b
        .edges()
        .filter_map(|(e, _, _)| g_inv_e.get(&f.map_edge(e)).map(|&w| (e, w)))
        .collect();
    let p = b.subgraph(
        &to_c_v.keys().copied().collect(),
        &to_c_e.keys().copied().collect(),
    );
    let left = GraphMorphism::new_unchecked(
        p.clone(),
        b.clone(),
        p.vertices().map(|v| (v, v)).collect(),
        p.edges().map(|(e, _, _)| (e, e)).collect(),
    );
    let right = GraphMorphism::new_unchecked(p, c.clone(), to_c_v, to_c_e);
    Span { left, right }
}

/// Pushout complement of `o: K → O` and `n: O → N`.
///
/// Exists iff no edge of `N` outside the image of `n` touches a vertex of
/// `n(O ∖ o(K))`. The complement is the subgraph `N ∖ n(O ∖ o(K))` with the
/// ids of `N`; returns `(k: K → K̄, K̄ → N)`.
pub fn pushout_complement(
    o: &GraphMorphism,
    n: &GraphMorphism,
) -> Option<(GraphMorphism, GraphMorphism)> {
    assert_eq!(o.cod(), n.dom(), "pushout complement needs composable morphisms");
    let big = n.cod();
    let kept_o_vertices = o.vertex_image();
    let kept_o_edges = o.edge_image();
    let removed_vertices: BTreeSet<Id> = n
        .vmap()
        .iter()
        .filter(|(v, _)| !kept_o_vertices.contains(v))
        .map(|(_, &w)| w)
        .collect();
    let removed_edges: BTreeSet<Id> = n
        .emap()
        .iter()
        .filter(|(e, _)| !kept_o_edges.contains(e))
        .map(|(_, &f)| f)
        .collect();
    let image_edges = n.edge_image();
    let dangling = big.edges().any(|(e, s, t)| {
        !image_edges.contains(&e)
            && (removed_vertices.contains(&s) || removed_vertices.contains(&t))
    });
    if dangling {
        return None;
    }
    let vertices: BTreeSet<Id> = big.vertices().filter(|v| !removed_vertices.contains(v)).collect();
    let edges: BTreeSet<Id> = big
        .edges()
        .map(|(e, _, _)| e)
        .filter(|e| !removed_edges.contains(e))
        .collect();
    let complement = big.subgraph(&vertices, &edges);
    Some(complement_legs(o, n, complement))
}

/// Final pullback complement of `i: K → I` and `m: I → X`.
///
/// `K̄` has vertices `V_X ∖ m[V_I ∖ V_K]` and the edges of
/// `E_X ∖ m[E_I ∖ E_K]` whose endpoints both survive; it keeps the ids of
/// `X`. Returns `(k: K → K̄, K̄ → X)`.
pub fn final_pullback_complement(
    i: &GraphMorphism,
    m: &GraphMorphism,
) -> (GraphMorphism, GraphMorphism) {
    assert_eq!(i.cod(), m.dom(), "FPC needs composable morphisms");
    let x = m.cod();
    let kept_vertices = i.vertex_image();
    let kept_edges = i.edge_image();
    let deleted_vertices: BTreeSet<Id> = m
        .vmap()
        .iter()
        .filter(|(v, _)| !kept_vertices.contains(v))
        .map(|(_, &w)| w)
        .collect();
    let deleted_edges: BTreeSet<Id> = m
        .emap()
        .iter()
        .filter(|(e, _)| !kept_edges.contains(e))
        .map(|(_, &f)| f)
        .collect();
    let vertices: BTreeSet<Id> = x.vertices().filter(|v| !deleted_vertices.contains(v)).collect();
    let edges: BTreeSet<Id> = x
        .edges()
        .filter(|(e, s, t)| {
            !deleted_edges.contains(e) && vertices.contains(s) && vertices.contains(t)
        })
        .map(|(e, _, _)| e)
        .collect();
    let complement = x.subgraph(&vertices, &edges);
    complement_legs(i, m, complement)
}

/// Legs `K → K̄ → X` for a complement `K̄ ⊆ X` of `K → I → X`.
fn complement_legs(
    first: &GraphMorphism,
    second: &GraphMorphism,
    complement: Graph,
) -> (GraphMorphism, GraphMorphism) {
    let k = first.dom();
    let vmap = k
        .vertices()
        .map(|v| (v, second.map_vertex(first.map_vertex(v))))
        .collect();
    let emap = k
        .edges()
        .map(|(e, _, _)| (e, second.map_edge(first.map_edge(e))))
        .collect();
    let into = GraphMorphism::new_unchecked(k.clone(), complement.clone(), vmap, emap);
    let out = GraphMorphism::new_unchecked(
        complement.clone(),
        second.cod().clone(),
        complement.vertices().map(|v| (v, v)).collect(),
        complement.edges().map(|(e, _, _)| (e, e)).collect(),
    );
    (into, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::graphs_isomorphic;

    fn vmono(dom: &Graph, cod: &Graph, pairs: &[(Id, Id)], edges: &[(Id, Id)]) -> GraphMorphism {
        GraphMorphism::new(
            dom.clone(),
            cod.clone(),
            pairs.iter().copied().collect(),
            edges.iter().copied().collect(),
        )
        .unwrap()
    }

    #[test]
    fn pushout_along_identity() {
        let k = Graph::discrete(1);
        let b = Graph::from_edge_list(2, &[(0, 1)]);
        let f = vmono(&k, &b, &[(0, 1)], &[]);
        let id = GraphMorphism::identity(&k);
        let po = pushout(&f, &id);
        assert_eq!(po.foot(), &b);
        assert_eq!(po.left, GraphMorphism::identity(&b));
        assert_eq!(po.right, f);
    }

    #[test]
    fn pushout_of_disjoint_vertices() {
        let one = Graph::discrete(1);
        let po = pushout(&GraphMorphism::initial(&one), &GraphMorphism::initial(&one));
        assert!(graphs_isomorphic(po.foot(), &Graph::discrete(2)));
    }

    #[test]
    fn pushout_glues_paths() {
        let k = Graph::discrete(1);
        let b = Graph::from_edge_list(2, &[(0, 1)]);
        let c = Graph::from_edge_list(2, &[(0, 1)]);
        let f = vmono(&k, &b, &[(0, 0)], &[]); // K is the source in B
        let g = vmono(&k, &c, &[(0, 1)], &[]); // K is the target in C
        let po = pushout(&f, &g);
        let path = Graph::from_edge_list(3, &[(0, 1), (1, 2)]);
        assert!(graphs_isomorphic(po.foot(), &path));
        assert_eq!(po.left.then(&GraphMorphism::identity(po.foot())).unwrap(), po.left);
        assert_eq!(f.then(&po.left).unwrap(), g.then(&po.right).unwrap());
    }

    #[test]
    fn pullback_of_equal_monos() {
        let b = Graph::discrete(1);
        let d = Graph::from_edge_list(2, &[(0, 1)]);
        let f = vmono(&b, &d, &[(0, 1)], &[]);
        let pb = pullback(&f, &f);
        assert_eq!(pb.apex(), &b);
        assert_eq!(pb.left, GraphMorphism::identity(&b));
        assert_eq!(pb.right, GraphMorphism::identity(&b));
    }

    #[test]
    fn pullback_of_disjoint_images_is_empty() {
        let one = Graph::discrete(1);
        let d = Graph::discrete(2);
        let pb = pullback(&vmono(&one, &d, &[(0, 0)], &[]), &vmono(&one, &d, &[(0, 1)], &[]));
        assert!(pb.apex().is_empty());
    }

    #[test]
    fn pullback_of_paths_sharing_a_vertex() {
        let d = Graph::from_edge_list(3, &[(0, 1), (1, 2)]);
        let e = Graph::from_edge_list(2, &[(0, 1)]);
        let f = vmono(&e, &d, &[(0, 0), (1, 1)], &[(0, 0)]);
        let g = vmono(&e, &d, &[(0, 1), (1, 2)], &[(0, 1)]);
        let pb = pullback(&f, &g);
        assert!(graphs_isomorphic(pb.apex(), &Graph::discrete(1)));
        assert_eq!(pb.left.map_vertex(1), 1);
        assert_eq!(pb.right.map_vertex(1), 0);
    }

    #[test]
    fn pushout_complement_cases() {
        // n identity: complement is K itself
        let k = Graph::discrete(1);
        let o_graph = Graph::from_edge_list(2, &[(0, 1)]);
        let o = vmono(&k, &o_graph, &[(0, 0)], &[]);
        let (kk, out) = pushout_complement(&o, &GraphMorphism::identity(&o_graph)).unwrap();
        assert!(graphs_isomorphic(kk.cod(), &k));
        assert_eq!(kk.then(&out).unwrap(), o);

        // dangling edge blocks the complement
        let empty = Graph::empty();
        let one = Graph::discrete(1);
        let edge = Graph::from_edge_list(2, &[(0, 1)]);
        let n = vmono(&one, &edge, &[(0, 0)], &[]);
        assert!(pushout_complement(&GraphMorphism::initial(&one), &n).is_none());

        // two isolated vertices: the other one remains
        let two = Graph::discrete(2);
        let n = vmono(&one, &two, &[(0, 0)], &[]);
        let (_, out) = pushout_complement(&GraphMorphism::initial(&one), &n).unwrap();
        assert_eq!(out.dom(), &Graph::new([1], []).unwrap());
        let _ = empty;
    }

    #[test]
    fn fpc_along_identity() {
        let x = Graph::from_edge_list(3, &[(0, 1), (1, 2)]);
        let i = Graph::discrete(1);
        let m = vmono(&i, &x, &[(0, 2)], &[]);
        let (k, out) = final_pullback_complement(&GraphMorphism::identity(&i), &m);
        assert_eq!(out.dom(), &x);
        assert_eq!(k, m);
    }

    #[test]
    fn fpc_deletes_incident_edges() {
        let one = Graph::discrete(1);
        let edge = Graph::from_edge_list(2, &[(0, 1)]);
        let m = vmono(&one, &edge, &[(0, 0)], &[]);
        let (_, out) = final_pullback_complement(&GraphMorphism::initial(&one), &m);
        assert_eq!(out.dom(), &Graph::new([1], []).unwrap());

        let two_cycle = Graph::from_edge_list(2, &[(0, 1), (1, 0)]);
        let m = vmono(&one, &two_cycle, &[(0, 0)], &[]);
        let (_, out) = final_pullback_complement(&GraphMorphism::initial(&one), &m);
        assert_eq!(out.dom(), &Graph::new([1], []).unwrap());
    }
}
