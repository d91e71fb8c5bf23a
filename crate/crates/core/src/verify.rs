//! Brute-force checks of universal properties.
//!
//! This is a test oracle. It deliberately does not reuse the constructions
//! in [`crate::constructions`]: commuting squares are checked against every
//! competitor diagram built from a bounded family of small graphs, with
//! arbitrary (not necessarily injective) homomorphisms, and mediators are
//! counted by exhaustive enumeration.
//!
//! The default competitor family is every graph with at most two vertices
//! and four edges, up to isomorphism. It contains the representable graphs
//! (a vertex, an edge, a loop), which detect pullbacks and final pullback
//! complements, and the two-vertex graphs with one edge per ordered pair and
//! the one-vertex graphs with two loops, which separate elements and so
//! detect pushouts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::canon::canonical_form;
use crate::graph::{Graph, GraphMorphism, Id};

/// A graph homomorphism that need not be injective.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hom {
    pub vmap: BTreeMap<Id, Id>,
    pub emap: BTreeMap<Id, Id>,
}

impl Hom {
    fn then(&self, next: &Hom) -> Hom {
        Hom {
            vmap: self.vmap.iter().map(|(&a, b)| (a, next.vmap[b])).collect(),
            emap: self.emap.iter().map(|(&a, b)| (a, next.emap[b])).collect(),
        }
    }
}

impl From<&GraphMorphism> for Hom {
    fn from(m: &GraphMorphism) -> Self {
        Hom { vmap: m.vmap().clone(), emap: m.emap().clone() }
    }
}

/// Every homomorphism `a → x`.
pub fn all_homs(a: &Graph, x: &Graph) -> Vec<Hom> {
    let av: Vec<Id> = a.vertices().collect();
    let xv: Vec<Id> = x.vertices().collect();
    let ae: Vec<(Id, Id, Id)> = a.edges().collect();
    let mut out = Vec::new();
    let mut vmap = BTreeMap::new();
    fn vertices(
        av: &[Id],
        xv: &[Id],
        ae: &[(Id, Id, Id)],
        x: &Graph,
        vmap: &mut BTreeMap<Id, Id>,
        out: &mut Vec<Hom>,
    ) {
        if vmap.len() == av.len() {
            let choices: Vec<Vec<Id>> = ae
                .iter()
                .map(|&(_, s, t)| {
                    x.edges()
                        .filter(|&(_, xs, xt)| xs == vmap[&s] && xt == vmap[&t])
                        .map(|(f, _, _)| f)
                        .collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                return;
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                out.push(Hom {
                    vmap: vmap.clone(),
                    emap: ae.iter().zip(&idx).zip(&choices).map(|((e, &i), c)| (e.0, c[i])).collect(),
                });
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        return;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        let v = av[vmap.len()];
        for &w in xv {
            vmap.insert(v, w);
            // prune on edges among assigned vertices
            let ok = ae.iter().all(|&(_, s, t)| match (vmap.get(&s), vmap.get(&t)) {
                (Some(&ms), Some(&mt)) => x.edges().any(|(_, xs, xt)| xs == ms && xt == mt),
                _ => true,
            });
            if ok {
                vertices(av, xv, ae, x, vmap, out);
            }
            vmap.remove(&v);
        }
    }
    vertices(&av, &xv, &ae, x, &mut vmap, &mut out);
    out
}

/// All graphs with at most `max_vertices` vertices and `max_edges` edges,
/// one per isomorphism class, in a deterministic order.
pub fn enumerate_graphs(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    let mut all = Vec::new();
    let mut frontier = Vec::new();
    for n in 0..=max_vertices {
        let g = Graph::discrete(n);
        seen.insert(canonical_form(&g));
        frontier.push(g.clone());
        all.push(g);
    }
    for _ in 0..max_edges {
        let mut next = Vec::new();
        for g in &frontier {
            let vs: Vec<Id> = g.vertices().collect();
            for &s in &vs {
                for &t in &vs {
                    let mut h = g.clone();
                    h.add_edge(s, t);
                    if seen.insert(canonical_form(&h)) {
                        next.push(h.clone());
                        all.push(h);
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

/// A commutative square
///
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C -bottom-> D
/// ```
#[derive(Debug, Clone)]
pub struct Square {
    pub top: GraphMorphism,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
    pub bottom: GraphMorphism,
}

impl Square {
    pub fn new(
        top: GraphMorphism,
        left: GraphMorphism,
        right: GraphMorphism,
        bottom: GraphMorphism,
    ) -> Self {
        Square { top, left, right, bottom }
    }

    fn objects(&self) -> [&Graph; 4] {
        [self.top.dom(), self.top.cod(), self.left.cod(), self.right.cod()]
    }

    fn well_formed(&self) -> bool {
        self.top.dom() == self.left.dom()
            && self.top.cod() == self.right.dom()
            && self.left.cod() == self.bottom.dom()
            && self.right.cod() == self.bottom.cod()
    }

    fn commutes(&self) -> bool {
        let a = Hom::from(&self.top).then(&Hom::from(&self.right));
        let b = Hom::from(&self.left).then(&Hom::from(&self.bottom));
        a == b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareKind {
    Pullback,
    Pushout,
    /// `(left, bottom)` is the final pullback complement of `(top, right)`.
    Fpc,
}

impl fmt::Display for SquareKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareKind::Pullback => "pullback",
            SquareKind::Pushout => "pushout",
            SquareKind::Fpc => "fpc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
    /// The search would exceed the configured bound.
    Inconclusive(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    /// Competitor graphs have at most this many vertices...
    pub competitor_vertices: usize,
    /// ...and at most this many edges.
    pub competitor_edges: usize,
    /// Squares with a larger object are not checked.
    pub max_object_size: usize,
    /// Budget on enumerated homomorphisms per check.
    pub max_work: u64,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound {
            competitor_vertices: 2,
            competitor_edges: 4,
            max_object_size: 12,
            max_work: 20_000_000,
        }
    }
}

impl SearchBound {
    /// Competitors with at most two vertices and one edge: the representable
    /// graphs (a vertex, an edge) and a few more. Enough for pullbacks and
    /// final pullback complements, not for pushouts.
    pub fn representables() -> Self {
        SearchBound { competitor_vertices: 2, competitor_edges: 1, ..Self::default() }
    }
}

/// Checks squares against a fixed competitor family.
pub struct Verifier {
    bound: SearchBound,
    competitors: Vec<Graph>,
}

impl Verifier {
    pub fn new(bound: SearchBound) -> Self {
        Verifier {
            competitors: enumerate_graphs(bound.competitor_vertices, bound.competitor_edges),
            bound,
        }
    }

    pub fn bound(&self) -> SearchBound {
        self.bound
    }

    pub fn verify(&self, kind: SquareKind, square: &Square) -> Verdict {
        if !square.well_formed() {
            return Verdict::Fails("square objects do not line up".into());
        }
        if !square.commutes() {
            return Verdict::Fails("square does not commute".into());
        }
        if let Some(g) = square
            .objects()
            .into_iter()
            .find(|g| g.vertex_count() + g.edge_count() > self.bound.max_object_size)
        {
            return Verdict::Inconclusive(format!(
                "object with {} elements exceeds the bound of {}",
                g.vertex_count() + g.edge_count(),
                self.bound.max_object_size
            ));
        }
        let mut work = Work { used: 0, limit: self.bound.max_work };
        let result = match kind {
            SquareKind::Pullback => self.check_pullback(square, &mut work),
            SquareKind::Pushout => self.check_pushout(square, &mut work),
            SquareKind::Fpc => self
                .check_pullback(square, &mut work)
                .and_then(|()| self.check_fpc(square, &mut work)),
        };
        match result {
            Ok(()) => Verdict::Holds,
            Err(Stop::Failed(why)) => Verdict::Fails(why),
            Err(Stop::Budget) => Verdict::Inconclusive(format!(
                "search exceeded {} enumerated homomorphisms",
                self.bound.max_work
            )),
        }
    }

    fn check_pullback(&self, sq: &Square, work: &mut Work) -> Result<(), Stop> {
        let (a, b, c) = (sq.top.dom(), sq.top.cod(), sq.left.cod());
        let (top, left, right, bottom) = homs(sq);
        for e in &self.competitors {
            let to_b = work.homs(e, b)?;
            let to_c = work.homs(e, c)?;
            let mut mediators: HashMap<(Hom, Hom), usize> = HashMap::new();
            for u in work.homs(e, a)? {
                *mediators.entry((u.then(&top), u.then(&left))).or_default() += 1;
            }
            for p in &to_b {
                let pr = p.then(&right);
                for q in &to_c {
                    if pr != q.then(&bottom) {
                        continue;
                    }
                    let count = mediators.get(&(p.clone(), q.clone())).copied().unwrap_or(0);
                    if count != 1 {
                        return Err(Stop::Failed(format!(
                            "cone from {e} has {count} mediators into the apex"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_pushout(&self, sq: &Square, work: &mut Work) -> Result<(), Stop> {
        let (b, c, d) = (sq.top.cod(), sq.left.cod(), sq.right.cod());
        let (top, left, right, bottom) = homs(sq);
        for q_obj in &self.competitors {
            let from_b = work.homs(b, q_obj)?;
            let from_c = work.homs(c, q_obj)?;
            let mut mediators: HashMap<(Hom, Hom), usize> = HashMap::new();
            for u in work.homs(d, q_obj)? {
                *mediators.entry((right.then(&u), bottom.then(&u))).or_default() += 1;
            }
            for p in &from_b {
                let tp = top.then(p);
                for q in &from_c {
                    if tp != left.then(q) {
                        continue;
                    }
                    let count = mediators.get(&(p.clone(), q.clone())).copied().unwrap_or(0);
                    if count != 1 {
                        return Err(Stop::Failed(format!(
                            "cocone into {q_obj} has {count} mediators out of the corner"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Finality: for every `z: F → D`, pullback `(x, y)` of `(right, z)` and
    /// `w: E → A` with `top ∘ w = x`, there is exactly one `w*: F → C` with
    /// `bottom ∘ w* = z` and `w* ∘ y = left ∘ w`.
    fn check_fpc(&self, sq: &Square, work: &mut Work) -> Result<(), Stop> {
        let (a, b, c, d) = (sq.top.dom(), sq.top.cod(), sq.left.cod(), sq.right.cod());
        let (top, left, right, bottom) = homs(sq);
        for f in &self.competitors {
            let f_to_c = work.homs(f, c)?;
            for z in work.homs(f, d)? {
                let (e, x, y) = hom_pullback(b, &right, f, &z);
                let star: Vec<&Hom> = f_to_c.iter().filter(|w| w.then(&bottom) == z).collect();
                for w in work.homs(&e, a)? {
                    if w.then(&top) != x {
                        continue;
                    }
                    let lw = w.then(&left);
                    let count = star.iter().filter(|ws| y.then(ws) == lw).count();
                    if count != 1 {
                        return Err(Stop::Failed(format!(
                            "competitor over {f} has {count} mediators into the complement"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(SearchBound::default())
    }
}

/// Checks `square` with the default bound.
pub fn verify_square(kind: SquareKind, square: &Square) -> Verdict {
    static DEFAULT: OnceLock<Verifier> = OnceLock::new();
    DEFAULT.get_or_init(Verifier::default).verify(kind, square)
}

enum Stop {
    Failed(String),
    Budget,
}

struct Work {
    used: u64,
    limit: u64,
}

impl Work {
    fn homs(&mut self, a: &Graph, x: &Graph) -> Result<Vec<Hom>, Stop> {
        let hs = all_homs(a, x);
        self.used += hs.len() as u64 + 1;
        if self.used > self.limit {
            Err(Stop::Budget)
        } else {
            Ok(hs)
        }
    }
}

fn homs(sq: &Square) -> (Hom, Hom, Hom, Hom) {
    (
        Hom::from(&sq.top),
        Hom::from(&sq.left),
        Hom::from(&sq.right),
        Hom::from(&sq.bottom),
    )
}

/// Set-level pullback of arbitrary homomorphisms `c: B → D`, `z: F → D`.
fn hom_pullback(b: &Graph, c: &Hom, f: &Graph, z: &Hom) -> (Graph, Hom, Hom) {
    let mut vertices = Vec::new();
    let mut vpair = BTreeMap::new();
    for bv in b.vertices() {
        for fv in f.vertices() {
            if c.vmap[&bv] == z.vmap[&fv] {
                let id = vertices.len() as Id;
                vertices.push((bv, fv));
                vpair.insert((bv, fv), id);
            }
        }
    }
    let mut edges = Vec::new();
    for (be, bs, bt) in b.edges() {
        for (fe, fs, ft) in f.edges() {
            if c.emap[&be] == z.emap[&fe] {
                edges.push(((be, fe), vpair[&(bs, fs)], vpair[&(bt, ft)]));
            }
        }
    }
    let e = Graph::new(
        0..vertices.len() as Id,
        edges.iter().enumerate().map(|(i, &(_, s, t))| (i as Id, s, t)),
    )
    .expect("pullback pairs are consistent");
    let x = Hom {
        vmap: vertices.iter().enumerate().map(|(i, p)| (i as Id, p.0)).collect(),
        emap: edges.iter().enumerate().map(|(i, (p, _, _))| (i as Id, p.0)).collect(),
    };
    let y = Hom {
        vmap: vertices.iter().enumerate().map(|(i, p)| (i as Id, p.1)).collect(),
        emap: edges.iter().enumerate().map(|(i, (p, _, _))| (i as Id, p.1)).collect(),
    };
    (e, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_census() {
        // one vertex with k loops, k = 0..=2
        assert_eq!(enumerate_graphs(1, 2).len(), 1 + 3);
        // ≤2 vertices, ≤1 edge: ∅, •, ••, •↺, •→•, •↺ •
        assert_eq!(enumerate_graphs(2, 1).len(), 6);
    }

    #[test]
    fn hom_counts() {
        let edge = Graph::from_edge_list(2, &[(0, 1)]);
        let lp = Graph::from_edge_list(1, &[(0, 0)]);
        // an edge maps to the terminal loop in exactly one way
        assert_eq!(all_homs(&edge, &lp).len(), 1);
        assert_eq!(all_homs(&lp, &edge).len(), 0);
        assert_eq!(all_homs(&Graph::discrete(2), &Graph::discrete(3)).len(), 9);
    }

    #[test]
    fn non_commuting_square_fails() {
        let one = Graph::discrete(1);
        let two = Graph::discrete(2);
        let f0 = GraphMorphism::new(one.clone(), two.clone(), [(0, 0)].into(), BTreeMap::new()).unwrap();
        let f1 = GraphMorphism::new(one.clone(), two.clone(), [(0, 1)].into(), BTreeMap::new()).unwrap();
        let id = GraphMorphism::identity(&one);
        let sq = Square::new(id.clone(), id, f0, f1);
        assert!(matches!(verify_square(SquareKind::Pullback, &sq), Verdict::Fails(_)));
    }

    #[test]
    fn oversized_square_is_inconclusive() {
        let g = Graph::discrete(20);
        let id = GraphMorphism::identity(&g);
        let sq = Square::new(id.clone(), id.clone(), id.clone(), id);
        assert!(matches!(verify_square(SquareKind::Pushout, &sq), Verdict::Inconclusive(_)));
    }
}
