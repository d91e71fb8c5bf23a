//! Linear rules `O ←o K →i I` (read right to left: input `I`, output `O`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{CanonicalForm, ColoredGraph};
use crate::graph::{Graph, GraphMorphism, Id, MorphismError, RawMorphism};

/// Element colours of the coloured union of a rule.
const IN_CONTEXT: u32 = 0;
const OUTPUT_ONLY: u32 = 1;
const INPUT_ONLY: u32 = 2;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("leg {leg}: {source}")]
    Leg { leg: &'static str, source: MorphismError },
    #[error("leg {0} does not start at the context graph")]
    ContextMismatch(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A span of monomorphisms `O ← K → I`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearRule {
    o: GraphMorphism,
    i: GraphMorphism,
}

impl LinearRule {
    pub fn new(o: GraphMorphism, i: GraphMorphism) -> Result<Self, RuleError> {
        if o.dom() != i.dom() {
            return Err(RuleError::ContextMismatch("i"));
        }
        Ok(LinearRule { o, i })
    }

    /// `O ⊇ K ⊆ I` given as graphs sharing ids, with inclusion legs.
    pub fn from_inclusions(output: Graph, context: Graph, input: Graph) -> Result<Self, RuleError> {
        let o = GraphMorphism::inclusion(&context, &output)
            .map_err(|source| RuleError::Leg { leg: "o", source })?;
        let i = GraphMorphism::inclusion(&context, &input)
            .map_err(|source| RuleError::Leg { leg: "i", source })?;
        Self::new(o, i)
    }

    /// The identity rule `M ← M → M`.
    pub fn identity(m: &Graph) -> Self {
        let id = GraphMorphism::identity(m);
        LinearRule { o: id.clone(), i: id }
    }

    /// `∅ ← ∅ → ∅`, the unit of the rule algebra.
    pub fn unit() -> Self {
        Self::identity(&Graph::empty())
    }

    pub fn output(&self) -> &Graph {
        self.o.cod()
    }

    pub fn context(&self) -> &Graph {
        self.o.dom()
    }

    pub fn input(&self) -> &Graph {
        self.i.cod()
    }

    pub fn o(&self) -> &GraphMorphism {
        &self.o
    }

    pub fn i(&self) -> &GraphMorphism {
        &self.i
    }

    pub fn is_identity(&self) -> bool {
        self.o.is_iso() && self.i.is_iso()
    }

    /// The coloured union `O +_K I`, colouring context elements, output-only
    /// and input-only elements apart. Two rules are isomorphic iff their
    /// coloured unions are.
    pub fn to_colored(&self) -> ColoredGraph {
        let mut colors = Vec::new();
        let mut k_index = BTreeMap::new();
        for v in self.context().vertices() {
            k_index.insert(v, colors.len());
            colors.push(IN_CONTEXT);
        }
        let side_index = |leg: &GraphMorphism, color: u32, colors: &mut Vec<u32>| {
            let inv: BTreeMap<Id, Id> = leg.vmap().iter().map(|(&k, &x)| (x, k)).collect();
            let mut index = BTreeMap::new();
            for v in leg.cod().vertices() {
                let at = match inv.get(&v) {
                    Some(k) => k_index[k],
                    None => {
                        colors.push(color);
                        colors.len() - 1
                    }
                };
                index.insert(v, at);
            }
            index
        };
        let o_index = side_index(&self.o, OUTPUT_ONLY, &mut colors);
        let i_index = side_index(&self.i, INPUT_ONLY, &mut colors);

        let mut edges: Vec<(usize, usize, u32)> = self
            .context()
            .edges()
            .map(|(_, s, t)| (k_index[&s], k_index[&t], IN_CONTEXT))
            .collect();
        for (leg, index, color) in [(&self.o, &o_index, OUTPUT_ONLY), (&self.i, &i_index, INPUT_ONLY)] {
            let image = leg.edge_image();
            for (e, s, t) in leg.cod().edges() {
                if !image.contains(&e) {
                    edges.push((index[&s], index[&t], color));
                }
            }
        }
        ColoredGraph { vertex_colors: colors, edges }
    }

    /// Key of the isomorphism class of the whole span.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.to_colored().canonical_form()
    }

    /// The canonical representative of a rule key.
    pub fn decode(form: &CanonicalForm) -> LinearRule {
        let cg = form.decode();
        let pick = |keep: &dyn Fn(u32) -> bool| {
            Graph::new(
                cg.vertex_colors
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| keep(c))
                    .map(|(v, _)| v as Id),
                cg.edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| keep(e.2))
                    .map(|(k, &(s, t, _))| (k as Id, s as Id, t as Id)),
            )
            .expect("a rule key decodes to consistent graphs")
        };
        let output = pick(&|c| c != INPUT_ONLY);
        let context = pick(&|c| c == IN_CONTEXT);
        let input = pick(&|c| c != OUTPUT_ONLY);
        LinearRule::from_inclusions(output, context, input).expect("a rule key decodes to a span")
    }

    pub fn to_raw(&self) -> RawRule {
        RawRule {
            output: self.output().clone(),
            context: self.context().clone(),
            input: self.input().clone(),
            o: self.o.to_raw(),
            i: self.i.to_raw(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("rules always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, RuleError> {
        let raw: RawRule = serde_json::from_str(s)?;
        raw.try_into()
    }
}

impl fmt::Debug for LinearRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?} <-{:?}- {:?} -{:?}-> {:?})",
            self.output(),
            self.o.vmap(),
            self.context(),
            self.i.vmap(),
            self.input()
        )
    }
}

/// Wire form `{"output":G,"context":G,"input":G,"o":morphism,"i":morphism}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRule {
    pub output: Graph,
    pub context: Graph,
    pub input: Graph,
    pub o: RawMorphism,
    pub i: RawMorphism,
}

impl TryFrom<RawRule> for LinearRule {
    type Error = RuleError;

    fn try_from(raw: RawRule) -> Result<Self, RuleError> {
        let o = GraphMorphism::from_raw(raw.context.clone(), raw.output, raw.o)
            .map_err(|source| RuleError::Leg { leg: "o", source })?;
        let i = GraphMorphism::from_raw(raw.context, raw.input, raw.i)
            .map_err(|source| RuleError::Leg { leg: "i", source })?;
        LinearRule::new(o, i)
    }
}

impl Serialize for LinearRule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearRule {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        RawRule::deserialize(deserializer)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// The rules of the random graph model and the rules that appear in its
/// commutator calculations.
pub mod library {
    use super::*;

    fn edge() -> Graph {
        Graph::from_edge_list(2, &[(0, 1)])
    }

    /// Vertex creation `• ← ∅ → ∅`.
    pub fn vertex_create() -> LinearRule {
        LinearRule::from_inclusions(Graph::discrete(1), Graph::empty(), Graph::empty()).unwrap()
    }

    /// Vertex deletion `∅ ← ∅ → •`.
    pub fn vertex_delete() -> LinearRule {
        LinearRule::from_inclusions(Graph::empty(), Graph::empty(), Graph::discrete(1)).unwrap()
    }

    /// Edge creation `•→• ← • • → • •`.
    pub fn edge_create() -> LinearRule {
        LinearRule::from_inclusions(edge(), Graph::discrete(2), Graph::discrete(2)).unwrap()
    }

    /// Edge deletion `• • ← • • → •→•`.
    pub fn edge_delete() -> LinearRule {
        LinearRule::from_inclusions(Graph::discrete(2), Graph::discrete(2), edge()).unwrap()
    }

    /// Deletes the source of an edge, keeping its target: `b ← b → a→b`.
    pub fn edge_delete_keep_target() -> LinearRule {
        let b = Graph::new([1], []).unwrap();
        LinearRule::from_inclusions(b.clone(), b, edge()).unwrap()
    }

    /// Deletes the target of an edge, keeping its source: `a ← a → a→b`.
    pub fn edge_delete_keep_source() -> LinearRule {
        let a = Graph::new([0], []).unwrap();
        LinearRule::from_inclusions(a.clone(), a, edge()).unwrap()
    }

    /// The vertex-counting identity rule `• ← • → •`.
    pub fn vertex_identity() -> LinearRule {
        LinearRule::identity(&Graph::discrete(1))
    }

    /// The edge-counting identity rule on `•→•`.
    pub fn edge_identity() -> LinearRule {
        LinearRule::identity(&edge())
    }

    /// Creates `n` isolated vertices: `•ⁿ ← ∅ → ∅`.
    pub fn create_vertices(n: usize) -> LinearRule {
        discrete_rule(n, 0)
    }

    /// `•^out ← ∅ → •^inp`.
    pub fn discrete_rule(out: usize, inp: usize) -> LinearRule {
        LinearRule::from_inclusions(Graph::discrete(out), Graph::empty(), Graph::discrete(inp))
            .unwrap()
    }

    /// Named rules shipped in `data/rules.json`.
    pub fn named() -> Vec<(&'static str, LinearRule)> {
        vec![
            ("v+", vertex_create()),
            ("v-", vertex_delete()),
            ("e+", edge_create()),
            ("e-", edge_delete()),
            ("E-01", edge_delete_keep_target()),
            ("E-10", edge_delete_keep_source()),
            ("id_vertex", vertex_identity()),
            ("id_edge", edge_identity()),
        ]
    }

    /// Looks up a shipped rule by name.
    pub fn by_name(name: &str) -> Option<LinearRule> {
        named().into_iter().find(|(n, _)| *n == name).map(|(_, r)| r)
    }

    /// The JSON rules file, as shipped.
    pub const RULES_JSON: &str = include_str!("../data/rules.json");

    /// Parses a rules file `{"name": rule, ..}`.
    pub fn parse_rules_file(s: &str) -> Result<BTreeMap<String, LinearRule>, RuleError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn shipped_rules_file_matches_constructors() {
        let parsed = parse_rules_file(RULES_JSON).unwrap();
        assert_eq!(parsed.len(), named().len());
        for (name, rule) in named() {
            assert_eq!(parsed[name], rule, "{name}");
        }
    }

    #[test]
    fn rule_json_round_trip() {
        let r = edge_delete_keep_target();
        assert_eq!(LinearRule::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn canonical_form_identifies_isomorphic_rules_only() {
        assert_eq!(
            edge_delete_keep_target().canonical_form(),
            LinearRule::decode(&edge_delete_keep_target().canonical_form()).canonical_form()
        );
        assert_ne!(
            edge_delete_keep_target().canonical_form(),
            edge_delete_keep_source().canonical_form()
        );
        // same O, K, I graphs, different legs
        assert_ne!(vertex_create().canonical_form(), vertex_delete().canonical_form());
        let relabelled = LinearRule::from_inclusions(
            Graph::new([7, 3], [(5, 3, 7)]).unwrap(),
            Graph::new([7, 3], []).unwrap(),
            Graph::new([7, 3], []).unwrap(),
        )
        .unwrap();
        assert_eq!(relabelled.canonical_form(), edge_create().canonical_form());
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let a = GraphMorphism::identity(&Graph::discrete(1));
        let b = GraphMorphism::identity(&Graph::discrete(2));
        assert!(matches!(LinearRule::new(a, b), Err(RuleError::ContextMismatch(_))));
    }
}
