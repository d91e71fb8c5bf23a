//! Finite directed multigraphs and monomorphisms between them.
//!
//! Vertex ids and edge ids live in separate namespaces: vertex `0` and edge
//! `0` may coexist. All morphisms in this crate are injective and are checked
//! to be so on construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque element identifier.
pub type Id = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(Id),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(Id),
    #[error("edge {edge} has source {vertex}, which is not a vertex")]
    DanglingSource { edge: Id, vertex: Id },
    #[error("edge {edge} has target {vertex}, which is not a vertex")]
    DanglingTarget { edge: Id, vertex: Id },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("vertex {0} of the domain is not mapped")]
    UnmappedVertex(Id),
    #[error("edge {0} of the domain is not mapped")]
    UnmappedEdge(Id),
    #[error("vertex map sends {0} to {1}, which is not a vertex of the codomain")]
    BadVertexImage(Id, Id),
    #[error("edge map sends {0} to {1}, which is not an edge of the codomain")]
    BadEdgeImage(Id, Id),
    #[error("map mentions {0}, which is not an element of the domain")]
    ExtraneousKey(Id),
    #[error("edge {0} is not mapped compatibly with its source or target")]
    NotHomomorphic(Id),
    #[error("vertex map is not injective (two vertices map to {0})")]
    VertexCollision(Id),
    #[error("edge map is not injective (two edges map to {0})")]
    EdgeCollision(Id),
    #[error("morphisms are not composable")]
    NotComposable,
}

/// The wire form of a graph, `{"vertices":[..],"edges":[{"id":n,"src":n,"trg":n}]}`.
///
/// A `RawGraph` may violate the graph invariants; [`validate_graph`] reports
/// the first violation and [`Graph::try_from`] only accepts valid ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<Id>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: Id,
    pub src: Id,
    pub trg: Id,
}

/// Checks the graph invariants and reports the first violation found.
pub fn validate_graph(raw: &RawGraph) -> Result<(), GraphError> {
    let mut vertices = BTreeSet::new();
    for &v in &raw.vertices {
        if !vertices.insert(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
    }
    let mut edges = BTreeSet::new();
    for e in &raw.edges {
        if !edges.insert(e.id) {
            return Err(GraphError::DuplicateEdge(e.id));
        }
        if !vertices.contains(&e.src) {
            return Err(GraphError::DanglingSource { edge: e.id, vertex: e.src });
        }
        if !vertices.contains(&e.trg) {
            return Err(GraphError::DanglingTarget { edge: e.id, vertex: e.trg });
        }
    }
    Ok(())
}

/// A finite directed multigraph.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    vertices: BTreeSet<Id>,
    edges: BTreeMap<Id, (Id, Id)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        validate_graph(&raw)?;
        Ok(Graph {
            vertices: raw.vertices.into_iter().collect(),
            edges: raw.edges.into_iter().map(|e| (e.id, (e.src, e.trg))).collect(),
        })
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        g.to_raw()
    }
}

impl Graph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex ids and `(edge id, src, trg)` triples.
    pub fn new(
        vertices: impl IntoIterator<Item = Id>,
        edges: impl IntoIterator<Item = (Id, Id, Id)>,
    ) -> Result<Self, GraphError> {
        RawGraph {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().map(|(id, src, trg)| RawEdge { id, src, trg }).collect(),
        }
        .try_into()
    }

    /// The graph with vertices `0..n` and no edges.
    pub fn discrete(n: usize) -> Self {
        Graph {
            vertices: (0..n as Id).collect(),
            edges: BTreeMap::new(),
        }
    }

    /// Vertices `0..n` and edges numbered in the order given.
    pub fn from_edge_list(n: usize, edges: &[(Id, Id)]) -> Self {
        Self::new(
            0..n as Id,
            edges.iter().enumerate().map(|(k, &(s, t))| (k as Id, s, t)),
        )
        .expect("edge list refers to vertices outside 0..n")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Id> + '_ {
        self.vertices.iter().copied()
    }

    /// Edges as `(id, src, trg)`, ordered by id.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (Id, Id, Id)> + '_ {
        self.edges.iter().map(|(&e, &(s, t))| (e, s, t))
    }

    pub fn has_vertex(&self, v: Id) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: Id) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: Id) -> Option<(Id, Id)> {
        self.edges.get(&e).copied()
    }

    pub fn src(&self, e: Id) -> Option<Id> {
        self.endpoints(e).map(|(s, _)| s)
    }

    pub fn trg(&self, e: Id) -> Option<Id> {
        self.endpoints(e).map(|(_, t)| t)
    }

    /// One more than the largest vertex id, or 0 for a vertex-free graph.
    pub fn next_vertex_id(&self) -> Id {
        self.vertices.last().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> Id {
        self.edges.keys().last().map_or(0, |e| e + 1)
    }

    pub fn add_vertex(&mut self) -> Id {
        let v = self.next_vertex_id();
        self.vertices.insert(v);
        v
    }

    /// Adds an edge between existing vertices, returning its id.
    pub fn add_edge(&mut self, src: Id, trg: Id) -> Id {
        assert!(self.has_vertex(src) && self.has_vertex(trg), "endpoints must exist");
        let e = self.next_edge_id();
        self.edges.insert(e, (src, trg));
        e
    }

    pub(crate) fn insert_vertex(&mut self, v: Id) {
        self.vertices.insert(v);
    }

    pub(crate) fn insert_edge(&mut self, e: Id, src: Id, trg: Id) {
        debug_assert!(self.has_vertex(src) && self.has_vertex(trg));
        self.edges.insert(e, (src, trg));
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self.vertices().collect(),
            edges: self.edges().map(|(id, src, trg)| RawEdge { id, src, trg }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graphs always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// The subgraph on the given vertices and edges. Edges whose endpoints are
    /// not retained are dropped.
    pub fn subgraph(&self, vertices: &BTreeSet<Id>, edges: &BTreeSet<Id>) -> Graph {
        let vertices: BTreeSet<Id> =
            self.vertices.intersection(vertices).copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|(e, (s, t))| {
                edges.contains(e) && vertices.contains(s) && vertices.contains(t)
            })
            .map(|(&e, &st)| (e, st))
            .collect();
        Graph { vertices, edges }
    }

    /// Number of edges from `s` to `t`.
    pub fn multiplicity(&self, s: Id, t: Id) -> usize {
        self.edges.values().filter(|&&st| st == (s, t)).count()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph{{V={:?}, E=[", self.vertices)?;
        for (i, (e, s, t)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}:{s}->{t}")?;
        }
        write!(f, "]}}")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The wire form of a morphism, `{"vmap":{..},"emap":{..}}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawMorphism {
    pub vmap: BTreeMap<Id, Id>,
    pub emap: BTreeMap<Id, Id>,
}

/// An injective graph homomorphism.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GraphMorphism {
    dom: Graph,
    cod: Graph,
    vmap: BTreeMap<Id, Id>,
    emap: BTreeMap<Id, Id>,
}

impl GraphMorphism {
    /// Checks totality, the homomorphism condition and injectivity.
    pub fn new(
        dom: Graph,
        cod: Graph,
        vmap: BTreeMap<Id, Id>,
        emap: BTreeMap<Id, Id>,
    ) -> Result<Self, MorphismError> {
        for &v in vmap.keys() {
            if !dom.has_vertex(v) {
                return Err(MorphismError::ExtraneousKey(v));
            }
        }
        for &e in emap.keys() {
            if !dom.has_edge(e) {
                return Err(MorphismError::ExtraneousKey(e));
            }
        }
        let mut seen = BTreeSet::new();
        for v in dom.vertices() {
            let w = *vmap.get(&v).ok_or(MorphismError::UnmappedVertex(v))?;
            if !cod.has_vertex(w) {
                return Err(MorphismError::BadVertexImage(v, w));
            }
            if !seen.insert(w) {
                return Err(MorphismError::VertexCollision(w));
            }
        }
        let mut seen = BTreeSet::new();
        for (e, s, t) in dom.edges() {
            let f = *emap.get(&e).ok_or(MorphismError::UnmappedEdge(e))?;
            let (fs, ft) = cod.endpoints(f).ok_or(MorphismError::BadEdgeImage(e, f))?;
            if fs != vmap[&s] || ft != vmap[&t] {
                return Err(MorphismError::NotHomomorphic(e));
            }
            if !seen.insert(f) {
                return Err(MorphismError::EdgeCollision(f));
            }
        }
        Ok(GraphMorphism { dom, cod, vmap, emap })
    }

    pub(crate) fn new_unchecked(
        dom: Graph,
        cod: Graph,
        vmap: BTreeMap<Id, Id>,
        emap: BTreeMap<Id, Id>,
    ) -> Self {
        let m = GraphMorphism { dom, cod, vmap, emap };
        debug_assert!(
            GraphMorphism::new(m.dom.clone(), m.cod.clone(), m.vmap.clone(), m.emap.clone())
                .is_ok(),
            "constructed an invalid morphism: {m:?}"
        );
        m
    }

    pub fn from_raw(dom: Graph, cod: Graph, raw: RawMorphism) -> Result<Self, MorphismError> {
        Self::new(dom, cod, raw.vmap, raw.emap)
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            dom: g.clone(),
            cod: g.clone(),
            vmap: g.vertices().map(|v| (v, v)).collect(),
            emap: g.edges().map(|(e, _, _)| (e, e)).collect(),
        }
    }

    /// The inclusion of a subgraph sharing ids with its supergraph.
    pub fn inclusion(sub: &Graph, sup: &Graph) -> Result<Self, MorphismError> {
        Self::new(
            sub.clone(),
            sup.clone(),
            sub.vertices().map(|v| (v, v)).collect(),
            sub.edges().map(|(e, _, _)| (e, e)).collect(),
        )
    }

    /// The unique morphism out of the empty graph.
    pub fn initial(cod: &Graph) -> Self {
        GraphMorphism {
            dom: Graph::empty(),
            cod: cod.clone(),
            vmap: BTreeMap::new(),
            emap: BTreeMap::new(),
        }
    }

    pub fn dom(&self) -> &Graph {
        &self.dom
    }

    pub fn cod(&self) -> &Graph {
        &self.cod
    }

    pub fn vmap(&self) -> &BTreeMap<Id, Id> {
        &self.vmap
    }

    pub fn emap(&self) -> &BTreeMap<Id, Id> {
        &self.emap
    }

    pub fn map_vertex(&self, v: Id) -> Id {
        self.vmap[&v]
    }

    pub fn map_edge(&self, e: Id) -> Id {
        self.emap[&e]
    }

    pub fn vertex_image(&self) -> BTreeSet<Id> {
        self.vmap.values().copied().collect()
    }

    pub fn edge_image(&self) -> BTreeSet<Id> {
        self.emap.values().copied().collect()
    }

    /// `self` followed by `next`, i.e. `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
        if self.cod != next.dom {
            return Err(MorphismError::NotComposable);
        }
        Ok(GraphMorphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            vmap: self.vmap.iter().map(|(&v, w)| (v, next.vmap[w])).collect(),
            emap: self.emap.iter().map(|(&e, f)| (e, next.emap[f])).collect(),
        })
    }

    /// Whether this morphism is bijective.
    pub fn is_iso(&self) -> bool {
        self.dom.vertex_count() == self.cod.vertex_count()
            && self.dom.edge_count() == self.cod.edge_count()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphMorphism> {
        self.is_iso().then(|| GraphMorphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            vmap: self.vmap.iter().map(|(&a, &b)| (b, a)).collect(),
            emap: self.emap.iter().map(|(&a, &b)| (b, a)).collect(),
        })
    }

    pub fn to_raw(&self) -> RawMorphism {
        RawMorphism {
            vmap: self.vmap.clone(),
            emap: self.emap.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("morphisms always serialize")
    }
}

impl fmt::Debug for GraphMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphMorphism")
            .field("dom", &self.dom)
            .field("cod", &self.cod)
            .field("vmap", &self.vmap)
            .field("emap", &self.emap)
            .finish()
    }
}

/// Two morphisms out of a common apex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

impl Span {
    pub fn new(left: GraphMorphism, right: GraphMorphism) -> Result<Self, MorphismError> {
        if left.dom() != right.dom() {
            return Err(MorphismError::NotComposable);
        }
        Ok(Span { left, right })
    }

    pub fn apex(&self) -> &Graph {
        self.left.dom()
    }
}

/// Two morphisms into a common foot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cospan {
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

impl Cospan {
    pub fn new(left: GraphMorphism, right: GraphMorphism) -> Result<Self, MorphismError> {
        if left.cod() != right.cod() {
            return Err(MorphismError::NotComposable);
        }
        Ok(Cospan { left, right })
    }

    pub fn foot(&self) -> &Graph {
        self.left.cod()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_valid() {
        let raw = RawGraph { vertices: vec![], edges: vec![] };
        assert_eq!(validate_graph(&raw), Ok(()));
    }

    #[test]
    fn single_edge_is_valid() {
        let raw = RawGraph {
            vertices: vec![0, 1],
            edges: vec![RawEdge { id: 0, src: 0, trg: 1 }],
        };
        assert_eq!(validate_graph(&raw), Ok(()));
    }

    #[test]
    fn dangling_source_is_reported() {
        let raw = RawGraph {
            vertices: vec![1],
            edges: vec![RawEdge { id: 4, src: 7, trg: 1 }],
        };
        assert_eq!(
            validate_graph(&raw),
            Err(GraphError::DanglingSource { edge: 4, vertex: 7 })
        );
    }

    #[test]
    fn id_collisions_are_reported() {
        let raw = RawGraph { vertices: vec![3, 3], edges: vec![] };
        assert_eq!(validate_graph(&raw), Err(GraphError::DuplicateVertex(3)));
        let raw = RawGraph {
            vertices: vec![0],
            edges: vec![RawEdge { id: 0, src: 0, trg: 0 }, RawEdge { id: 0, src: 0, trg: 0 }],
        };
        assert_eq!(validate_graph(&raw), Err(GraphError::DuplicateEdge(0)));
    }

    #[test]
    fn vertex_and_edge_ids_are_separate_namespaces() {
        let g = Graph::new([0, 1], [(0, 0, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn json_wire_format() {
        let g = Graph::new([2, 5], [(1, 5, 2), (0, 2, 2)]).unwrap();
        let json = g.to_json();
        assert_eq!(
            json,
            r#"{"vertices":[2,5],"edges":[{"id":0,"src":2,"trg":2},{"id":1,"src":5,"trg":2}]}"#
        );
        assert_eq!(Graph::from_json(&json).unwrap(), g);
        assert!(Graph::from_json(r#"{"vertices":[0],"edges":[{"id":0,"src":0,"trg":9}]}"#).is_err());
    }

    #[test]
    fn morphism_json_wire_format() {
        let a = Graph::discrete(1);
        let b = Graph::from_edge_list(2, &[(0, 1)]);
        let m = GraphMorphism::new(a, b, [(0, 1)].into(), BTreeMap::new()).unwrap();
        assert_eq!(m.to_json(), r#"{"vmap":{"0":1},"emap":{}}"#);
    }

    #[test]
    fn morphism_checks() {
        let edge = Graph::from_edge_list(2, &[(0, 1)]);
        let two = Graph::discrete(2);
        // non-injective
        assert_eq!(
            GraphMorphism::new(two.clone(), Graph::discrete(1), [(0, 0), (1, 0)].into(), BTreeMap::new()),
            Err(MorphismError::VertexCollision(0))
        );
        // not homomorphic: reversed edge
        assert_eq!(
            GraphMorphism::new(edge.clone(), edge.clone(), [(0, 1), (1, 0)].into(), [(0, 0)].into()),
            Err(MorphismError::NotHomomorphic(0))
        );
        assert_eq!(
            GraphMorphism::new(edge.clone(), two, [(0, 0), (1, 1)].into(), [(0, 0)].into()),
            Err(MorphismError::BadEdgeImage(0, 0))
        );
        let id = GraphMorphism::identity(&edge);
        assert_eq!(id.then(&id).unwrap(), id);
        assert_eq!(id.inverse().unwrap(), id);
    }
}
