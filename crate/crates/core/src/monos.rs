//! Enumeration of injective homomorphisms (monomorphisms) between graphs.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, GraphMorphism, Id};

/// Every monomorphism `a → x`, each distinct as a map.
///
/// Vertices of `a` are assigned in a connectivity-first order, candidates
/// are tried in increasing id order, and edge assignments are enumerated
/// last, so the output order is a deterministic function of the inputs.
pub fn enumerate_monos(a: &Graph, x: &Graph) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    for_each_mono(a, x, |vmap, emap| {
        out.push(GraphMorphism::new_unchecked(
            a.clone(),
            x.clone(),
            vmap.clone(),
            emap.clone(),
        ));
    });
    out
}

/// Number of monomorphisms `a → x`, without materialising them.
pub fn count_monos(a: &Graph, x: &Graph) -> usize {
    let mut n = 0;
    for_each_mono(a, x, |_, _| n += 1);
    n
}

/// Calls `visit` with the vertex and edge maps of every mono `a → x`.
pub fn for_each_mono<F>(a: &Graph, x: &Graph, mut visit: F)
where
    F: FnMut(&BTreeMap<Id, Id>, &BTreeMap<Id, Id>),
{
    if a.vertex_count() > x.vertex_count() || a.edge_count() > x.edge_count() {
        return;
    }
    let pattern = Pattern::new(a);
    let host = Host::new(x);
    let mut assignment: Vec<Option<Id>> = vec![None; pattern.order.len()];
    let mut used = BTreeSet::new();
    pattern.assign_vertices(&host, 0, &mut assignment, &mut used, &mut |assignment| {
        let vmap: BTreeMap<Id, Id> = pattern
            .order
            .iter()
            .zip(assignment.iter())
            .map(|(&v, w)| (v, w.expect("complete assignment")))
            .collect();
        pattern.assign_edges(&host, &vmap, &mut visit);
    });
}

struct Pattern {
    /// Vertices in assignment order.
    order: Vec<Id>,
    /// For each position, the edges to earlier-or-equal positions:
    /// `(other position, pattern edge count other→v, count v→other)`.
    constraints: Vec<Vec<(usize, usize, usize)>>,
    /// Edge groups keyed by `(src, trg)` in the pattern.
    groups: BTreeMap<(Id, Id), Vec<Id>>,
}

impl Pattern {
    fn new(a: &Graph) -> Self {
        let mut neighbours: BTreeMap<Id, BTreeSet<Id>> =
            a.vertices().map(|v| (v, BTreeSet::new())).collect();
        let mut groups: BTreeMap<(Id, Id), Vec<Id>> = BTreeMap::new();
        for (e, s, t) in a.edges() {
            neighbours.get_mut(&s).unwrap().insert(t);
            neighbours.get_mut(&t).unwrap().insert(s);
            groups.entry((s, t)).or_default().push(e);
        }
        // Greedy order: most links into the already ordered set, then degree, then id.
        let mut order: Vec<Id> = Vec::with_capacity(a.vertex_count());
        let mut placed = BTreeSet::new();
        while order.len() < a.vertex_count() {
            let next = a
                .vertices()
                .filter(|v| !placed.contains(v))
                .max_by_key(|v| {
                    let links = neighbours[v].intersection(&placed).count();
                    (links, neighbours[v].len(), std::cmp::Reverse(*v))
                })
                .expect("unplaced vertex exists");
            placed.insert(next);
            order.push(next);
        }
        let position: BTreeMap<Id, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut constraints = vec![Vec::new(); order.len()];
        for (i, &v) in order.iter().enumerate() {
            for (j, &u) in order.iter().enumerate().take(i + 1) {
                let into = groups.get(&(u, v)).map_or(0, Vec::len);
                let from = groups.get(&(v, u)).map_or(0, Vec::len);
                if into + from > 0 {
                    constraints[i].push((j, into, from));
                }
            }
        }
        debug_assert_eq!(position.len(), order.len());
        Pattern { order, constraints, groups }
    }

    fn assign_vertices(
        &self,
        host: &Host,
        depth: usize,
        assignment: &mut Vec<Option<Id>>,
        used: &mut BTreeSet<Id>,
        done: &mut dyn FnMut(&[Option<Id>]),
    ) {
        if depth == self.order.len() {
            done(assignment);
            return;
        }
        for &w in &host.vertices {
            if used.contains(&w) {
                continue;
            }
            let fits = self.constraints[depth].iter().all(|&(j, into, from)| {
                let u = if j == depth { w } else { assignment[j].expect("earlier position") };
                host.count(u, w) >= into && host.count(w, u) >= from
            });
            if !fits {
                continue;
            }
            assignment[depth] = Some(w);
            used.insert(w);
            self.assign_vertices(host, depth + 1, assignment, used, done);
            used.remove(&w);
            assignment[depth] = None;
        }
    }

    fn assign_edges<F>(&self, host: &Host, vmap: &BTreeMap<Id, Id>, visit: &mut F)
    where
        F: FnMut(&BTreeMap<Id, Id>, &BTreeMap<Id, Id>),
    {
        let groups: Vec<(&Vec<Id>, &[Id])> = self
            .groups
            .iter()
            .map(|(&(s, t), edges)| (edges, host.parallel(vmap[&s], vmap[&t])))
            .collect();
        let mut emap = BTreeMap::new();
        let mut used = BTreeSet::new();
        assign_edge_groups(&groups, 0, 0, &mut emap, &mut used, vmap, visit);
    }
}

fn assign_edge_groups<F>(
    groups: &[(&Vec<Id>, &[Id])],
    group: usize,
    index: usize,
    emap: &mut BTreeMap<Id, Id>,
    used: &mut BTreeSet<Id>,
    vmap: &BTreeMap<Id, Id>,
    visit: &mut F,
) where
    F: FnMut(&BTreeMap<Id, Id>, &BTreeMap<Id, Id>),
{
    if group == groups.len() {
        visit(vmap, emap);
        return;
    }
    let (pattern_edges, host_edges) = groups[group];
    if index == pattern_edges.len() {
        assign_edge_groups(groups, group + 1, 0, emap, used, vmap, visit);
        return;
    }
    let e = pattern_edges[index];
    for &f in host_edges {
        if used.insert(f) {
            emap.insert(e, f);
            assign_edge_groups(groups, group, index + 1, emap, used, vmap, visit);
            emap.remove(&e);
            used.remove(&f);
        }
    }
}

struct Host {
    vertices: Vec<Id>,
    parallel: BTreeMap<(Id, Id), Vec<Id>>,
}

impl Host {
    fn new(x: &Graph) -> Self {
        let mut parallel: BTreeMap<(Id, Id), Vec<Id>> = BTreeMap::new();
        for (e, s, t) in x.edges() {
            parallel.entry((s, t)).or_default().push(e);
        }
        Host { vertices: x.vertices().collect(), parallel }
    }

    fn parallel(&self, s: Id, t: Id) -> &[Id] {
        self.parallel.get(&(s, t)).map_or(&[], Vec::as_slice)
    }

    fn count(&self, s: Id, t: Id) -> usize {
        self.parallel(s, t).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: every injective vertex map, every injective edge map,
    /// filtered by the homomorphism condition.
    fn brute_force_count(a: &Graph, x: &Graph) -> usize {
        fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in injections(k - 1, n) {
                for i in 0..n {
                    if !p.contains(&i) {
                        let mut q = p.clone();
                        q.push(i);
                        out.push(q);
                    }
                }
            }
            out
        }
        let av: Vec<Id> = a.vertices().collect();
        let xv: Vec<Id> = x.vertices().collect();
        let ae: Vec<(Id, Id, Id)> = a.edges().collect();
        let xe: Vec<(Id, Id, Id)> = x.edges().collect();
        let mut count = 0;
        for vp in injections(av.len(), xv.len()) {
            let vm: BTreeMap<Id, Id> = av.iter().zip(&vp).map(|(&v, &i)| (v, xv[i])).collect();
            for ep in injections(ae.len(), xe.len()) {
                let ok = ae.iter().zip(&ep).all(|(&(_, s, t), &i)| {
                    let (_, hs, ht) = xe[i];
                    vm[&s] == hs && vm[&t] == ht
                });
                if ok {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn single_vertex_into_edge() {
        let a = Graph::discrete(1);
        let x = Graph::from_edge_list(2, &[(0, 1)]);
        assert_eq!(enumerate_monos(&a, &x).len(), 2);
    }

    #[test]
    fn empty_pattern_has_one_mono() {
        let x = Graph::from_edge_list(3, &[(0, 1), (1, 1)]);
        let monos = enumerate_monos(&Graph::empty(), &x);
        assert_eq!(monos.len(), 1);
        assert_eq!(monos[0], GraphMorphism::initial(&x));
    }

    #[test]
    fn edge_into_three_cycle() {
        let a = Graph::from_edge_list(2, &[(0, 1)]);
        let x = Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(brute_force_count(&a, &x), 3);
        assert_eq!(enumerate_monos(&a, &x).len(), 3);
    }

    #[test]
    fn multigraph_counts_match_brute_force() {
        let cases = [
            (Graph::from_edge_list(2, &[(0, 1), (0, 1)]), Graph::from_edge_list(3, &[(0, 1), (0, 1), (0, 1), (1, 2)])),
            (Graph::from_edge_list(1, &[(0, 0)]), Graph::from_edge_list(2, &[(0, 0), (0, 0), (1, 1)])),
            (Graph::from_edge_list(3, &[(0, 1)]), Graph::from_edge_list(4, &[(0, 1), (2, 3), (3, 2)])),
            (Graph::discrete(2), Graph::discrete(3)),
        ];
        for (a, x) in &cases {
            assert_eq!(enumerate_monos(a, x).len(), brute_force_count(a, x), "{a} into {x}");
            assert_eq!(count_monos(a, x), brute_force_count(a, x));
        }
    }

    #[test]
    fn order_is_deterministic() {
        let a = Graph::discrete(2);
        let x = Graph::from_edge_list(3, &[(0, 1)]);
        assert_eq!(enumerate_monos(&a, &x), enumerate_monos(&a, &x));
    }
}
