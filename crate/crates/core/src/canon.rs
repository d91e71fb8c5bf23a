//! Canonical labelling of vertex- and edge-coloured multigraphs.
//!
//! The canonical code of a graph is the lexicographically smallest encoding
//! over all leaves of an individualization-refinement search tree. Leaves
//! with equal codes yield automorphisms, which prune sibling branches. The
//! search is exact at every size; refinement and pruning only affect speed.
//!
//! Plain graphs, linear rules (as a coloured union of the span) and other
//! small diagrams are all reduced to a [`ColoredGraph`] before labelling.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{Graph, Id};

/// Sorted `(neighbour cell, edge count)` pairs of one vertex.
type Signature = Vec<(usize, u32)>;

/// A multigraph on vertices `0..n` with colours on vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub vertex_colors: Vec<u32>,
    /// `(src, trg, colour)`
    pub edges: Vec<(usize, usize, u32)>,
}

/// An isomorphism-invariant key. Equal keys iff isomorphic inputs.
///
/// The key is the encoding `[n, m, vertex colours.., (src, trg, colour)..]`
/// of the canonically relabelled graph, with edges sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn words(&self) -> &[u32] {
        &self.0
    }

    /// Big-endian byte encoding of the key.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_be_bytes()).collect()
    }

    /// The canonical representative encoded by this key.
    pub fn decode(&self) -> ColoredGraph {
        let n = self.0[0] as usize;
        let m = self.0[1] as usize;
        let vertex_colors = self.0[2..2 + n].to_vec();
        let edges = self.0[2 + n..]
            .chunks_exact(3)
            .map(|c| (c[0] as usize, c[1] as usize, c[2]))
            .collect::<Vec<_>>();
        debug_assert_eq!(edges.len(), m);
        ColoredGraph { vertex_colors, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    pub fn edge_count(&self) -> usize {
        self.0[1] as usize
    }
}

impl fmt::Display for CanonicalForm {
    /// `n|colours|s>t:c,...`, with colour lists omitted when all zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.decode();
        write!(f, "{}", g.vertex_colors.len())?;
        let plain = g.vertex_colors.iter().all(|&c| c == 0) && g.edges.iter().all(|e| e.2 == 0);
        if !plain {
            write!(f, "|")?;
            for (i, c) in g.vertex_colors.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, "|")?;
        for (i, (s, t, c)) in g.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if plain {
                write!(f, "{s}>{t}")?;
            } else {
                write!(f, "{s}>{t}:{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({self})")
    }
}

/// A canonical key together with the relabelling that produced it.
#[derive(Debug, Clone)]
pub struct Labelling {
    pub form: CanonicalForm,
    /// `position[v]` is the canonical index of input vertex `v`.
    pub position: Vec<usize>,
}

impl ColoredGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_colors.len()
    }

    fn encode(&self, order: &[usize], position: &[usize]) -> Vec<u32> {
        let mut code = Vec::with_capacity(2 + order.len() + 3 * self.edges.len());
        code.push(order.len() as u32);
        code.push(self.edges.len() as u32);
        code.extend(order.iter().map(|&v| self.vertex_colors[v]));
        let mut edges: Vec<[u32; 3]> = self
            .edges
            .iter()
            .map(|&(s, t, c)| [position[s] as u32, position[t] as u32, c])
            .collect();
        edges.sort_unstable();
        code.extend(edges.into_iter().flatten());
        code
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_labelling().form
    }

    pub fn canonical_labelling(&self) -> Labelling {
        let n = self.vertex_count();
        let mut search = Search::new(self);
        let mut initial: Vec<(u32, usize)> =
            (0..n).map(|v| (self.vertex_colors[v], v)).collect();
        initial.sort_unstable();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for (c, v) in initial {
            match cells.last_mut() {
                Some(cell) if self.vertex_colors[cell[0]] == c => cell.push(v),
                _ => cells.push(vec![v]),
            }
        }
        search.run(cells, &mut Vec::new());
        let (code, order) = search.best.expect("search visits at least one leaf");
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Labelling { form: CanonicalForm(code), position }
    }
}

struct Search<'a> {
    graph: &'a ColoredGraph,
    out_adj: Vec<Vec<(usize, u32)>>,
    in_adj: Vec<Vec<(usize, u32)>>,
    first: Option<(Vec<u32>, Vec<usize>, Vec<usize>)>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

/// Outcome of exploring a subtree.
enum Flow {
    Continue,
    /// Unwind to the given depth: the remainder of every subtree below it is
    /// the image of an already explored one under an automorphism.
    BackjumpTo(usize),
}

impl<'a> Search<'a> {
    fn new(graph: &'a ColoredGraph) -> Self {
        let n = graph.vertex_count();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(s, t, c) in &graph.edges {
            out_adj[s].push((t, c));
            in_adj[t].push((s, c));
        }
        Search {
            graph,
            out_adj,
            in_adj,
            first: None,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    /// Splits cells by neighbourhood signatures until the partition is equitable.
    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        let n = self.graph.vertex_count();
        let mut cell_of = vec![0usize; n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let before = cells.len();
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Signature, Signature, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut out: Vec<(usize, u32)> =
                            self.out_adj[v].iter().map(|&(t, c)| (cell_of[t], c)).collect();
                        let mut inn: Vec<(usize, u32)> =
                            self.in_adj[v].iter().map(|&(s, c)| (cell_of[s], c)).collect();
                        out.sort_unstable();
                        inn.sort_unstable();
                        (out, inn, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 || keyed[i].1 != keyed[start].1
                    {
                        next.push(keyed[start..i].iter().map(|k| k.2).collect());
                        start = i;
                    }
                }
            }
            *cells = next;
            if cells.len() == before {
                return;
            }
        }
    }

    fn run(&mut self, mut cells: Vec<Vec<usize>>, path: &mut Vec<usize>) -> Flow {
        self.refine(&mut cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(cells.into_iter().flatten().collect(), path);
        };
        let depth = path.len();
        let candidates = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored.is_empty() && self.same_orbit_as_any(v, &explored, path) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(candidates.iter().copied().filter(|&u| u != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            let flow = self.run(child, path);
            path.pop();
            if let Flow::BackjumpTo(level) = flow {
                if level < depth {
                    return flow;
                }
            }
        }
        Flow::Continue
    }

    fn leaf(&mut self, order: Vec<usize>, path: &[usize]) -> Flow {
        let n = order.len();
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let code = self.graph.encode(&order, &position);
        let Some((first_code, first_order, first_path)) = &self.first else {
            self.first = Some((code.clone(), order.clone(), path.to_vec()));
            self.best = Some((code, order));
            return Flow::Continue;
        };
        if &code == first_code {
            let auto = automorphism(first_order, &order);
            let diverge = first_path
                .iter()
                .zip(path)
                .position(|(a, b)| a != b)
                .unwrap_or(path.len().min(first_path.len()));
            self.automorphisms.push(auto);
            return Flow::BackjumpTo(diverge);
        }
        let (best_code, best_order) = self.best.as_ref().expect("set with first");
        match code.cmp(best_code) {
            std::cmp::Ordering::Less => self.best = Some((code, order)),
            std::cmp::Ordering::Equal => {
                let auto = automorphism(best_order, &order);
                self.automorphisms.push(auto);
            }
            std::cmp::Ordering::Greater => {}
        }
        Flow::Continue
    }

    /// Orbit test under the automorphisms found so far that fix `path` pointwise.
    fn same_orbit_as_any(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.graph.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for auto in &self.automorphisms {
            if path.iter().any(|&p| auto[p] != p) {
                continue;
            }
            any = true;
            #[allow(clippy::needless_range_loop)]
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, auto[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == root)
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        perm[a] = b;
    }
    perm
}

/// Reduces a plain graph to a colourless [`ColoredGraph`], returning the
/// vertex ids in index order.
pub fn graph_to_colored(g: &Graph) -> (ColoredGraph, Vec<Id>) {
    let ids: Vec<Id> = g.vertices().collect();
    let index: BTreeMap<Id, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let cg = ColoredGraph {
        vertex_colors: vec![0; ids.len()],
        edges: g.edges().map(|(_, s, t)| (index[&s], index[&t], 0)).collect(),
    };
    (cg, ids)
}

/// Canonical key of a graph. Equal iff the graphs are isomorphic.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    graph_to_colored(g).0.canonical_form()
}

pub fn graphs_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.edge_count() == h.edge_count()
        && canonical_form(g) == canonical_form(h)
}

/// The canonical representative of a graph key: vertices `0..n`, edges
/// numbered in key order.
pub fn decode_graph(form: &CanonicalForm) -> Graph {
    let cg = form.decode();
    let edges: Vec<(Id, Id)> = cg.edges.iter().map(|&(s, t, _)| (s as Id, t as Id)).collect();
    Graph::from_edge_list(cg.vertex_count(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permute(g: &Graph, perm: &[Id]) -> Graph {
        Graph::new(
            g.vertices().map(|v| perm[v as usize]),
            g.edges().map(|(e, s, t)| (e + 10, perm[s as usize], perm[t as usize])),
        )
        .unwrap()
    }

    #[test]
    fn permuted_ids_are_isomorphic() {
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]);
        let h = permute(&g, &[3, 0, 2, 1]);
        assert!(graphs_isomorphic(&g, &h));
        assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn edge_count_distinguishes() {
        assert!(!graphs_isomorphic(&Graph::discrete(2), &Graph::from_edge_list(2, &[(0, 1)])));
    }

    #[test]
    fn single_reversed_edge_distinguishes() {
        // a→b→c→d versus a→b←c→d
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]);
        let h = Graph::from_edge_list(4, &[(0, 1), (2, 1), (2, 3)]);
        assert!(!graphs_isomorphic(&g, &h));
    }

    #[test]
    fn decode_round_trip() {
        let g = Graph::from_edge_list(3, &[(0, 1), (0, 1), (2, 2)]);
        let f = canonical_form(&g);
        let d = decode_graph(&f);
        assert!(graphs_isomorphic(&g, &d));
        assert_eq!(canonical_form(&d), f);
    }

    #[test]
    fn large_symmetric_graphs_are_fast() {
        let g = Graph::discrete(40);
        let f = canonical_form(&g);
        assert_eq!(f.vertex_count(), 40);
        // star with 12 leaves and a directed 12-cycle
        let star: Vec<(Id, Id)> = (1..13).map(|i| (0, i)).collect();
        let s = Graph::from_edge_list(13, &star);
        let cycle: Vec<(Id, Id)> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
        let c = Graph::from_edge_list(12, &cycle);
        assert_eq!(canonical_form(&s), canonical_form(&permute(&s, &[5, 0, 1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12])));
        assert_eq!(canonical_form(&c), canonical_form(&permute(&c, &[3, 4, 5, 6, 7, 8, 9, 10, 11, 0, 1, 2])));
    }

    #[test]
    fn display_is_compact() {
        let g = Graph::from_edge_list(2, &[(0, 1)]);
        let s = canonical_form(&g).to_string();
        assert!(s == "2|0>1" || s == "2|1>0", "{s}");
    }
}
