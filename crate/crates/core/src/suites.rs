//! Property suites over generated inputs: algebraic laws of the rule
//! algebra, the representation, and the final pullback complement
//! construction. Shared by the `verify` command and the test suite.

use std::collections::HashSet;
use std::fmt;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{represent, ExactState, Observable, ProductTable, RuleAlgebraElement};
use crate::canon::{ColoredGraph, CanonicalForm};
use crate::constructions::final_pullback_complement;
use crate::graph::{Graph, GraphMorphism, Id};
use crate::random::{random_graph, random_rule, Shape};
use crate::rewriting::{match_count, subgraphs};
use crate::rule::{library, LinearRule};
use crate::verify::{enumerate_graphs, SearchBound, Square, SquareKind, Verdict, Verifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fpc,
    Assoc,
    Concurrency,
    Jump,
    Unit,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Unit, Suite::Jump, Suite::Concurrency, Suite::Assoc, Suite::Fpc];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fpc => "fpc",
            Suite::Assoc => "assoc",
            Suite::Concurrency => "concurrency",
            Suite::Jump => "jump",
            Suite::Unit => "unit",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Largest host graph: vertices for random hosts, vertices and edges
    /// for the exhaustive census.
    pub size_bound: usize,
    pub n_random: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { size_bound: 4, n_random: 100, seed: 7 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub checked: usize,
    pub failures: Vec<String>,
    pub inconclusive: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.inconclusive.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn verdict(&mut self, v: Verdict, describe: impl FnOnce() -> String) {
        self.checked += 1;
        match v {
            Verdict::Holds => {}
            Verdict::Fails(why) => self.failures.push(format!("{}: {why}", describe())),
            Verdict::Inconclusive(why) => self.inconclusive.push(format!("{}: {why}", describe())),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: SuiteConfig) -> SuiteReport {
    match suite {
        Suite::Fpc => fpc_census(cfg.size_bound, cfg.size_bound).report,
        Suite::Assoc => associativity(cfg.n_random, cfg.seed),
        Suite::Concurrency => homomorphism(cfg.n_random, cfg.seed, cfg.size_bound),
        Suite::Jump => jump_closure(cfg.n_random, cfg.seed, cfg.size_bound),
        Suite::Unit => unit_laws(cfg.n_random, cfg.seed),
    }
}

/// Rules with at most three vertices and two edges on each side.
pub fn small_rule_library() -> Vec<LinearRule> {
    let mut rules: Vec<LinearRule> = library::named().into_iter().map(|(_, r)| r).collect();
    let three = Graph::discrete(3);
    let path = Graph::from_edge_list(3, &[(0, 1), (1, 2)]);
    let collider = Graph::from_edge_list(3, &[(0, 1), (2, 1)]);
    rules.push(LinearRule::from_inclusions(path.clone(), three.clone(), three.clone()).unwrap());
    rules.push(LinearRule::from_inclusions(collider, three.clone(), path.clone()).unwrap());
    rules.push(
        LinearRule::from_inclusions(
            Graph::from_edge_list(1, &[(0, 0)]),
            Graph::discrete(1),
            Graph::discrete(1),
        )
        .unwrap(),
    );
    let middle = Graph::new([1], []).unwrap();
    rules.push(LinearRule::from_inclusions(middle.clone(), middle, path).unwrap());
    rules.push(library::discrete_rule(1, 1));
    rules.push(library::discrete_rule(2, 1));
    rules
}

fn describe(r: &LinearRule) -> String {
    r.canonical_form().to_string()
}

/// Both association orders agree on every library triple and on
/// `n_random` random triples.
pub fn associativity(n_random: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::default();
    let mut table = ProductTable::new();
    let lib = small_rule_library();
    let mut triples: Vec<[LinearRule; 3]> = Vec::new();
    for a in &lib {
        for b in &lib {
            for c in &lib {
                triples.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        let shape = Shape::new(3, 3);
        triples.push([random_rule(&mut rng, shape), random_rule(&mut rng, shape), random_rule(&mut rng, shape)]);
    }
    for [a, b, c] in &triples {
        let (a, b, c) = (RuleAlgebraElement::basis(a), RuleAlgebraElement::basis(b), RuleAlgebraElement::basis(c));
        let ab = table.product(&a, &b);
        let left = table.product(&ab, &c);
        let bc = table.product(&b, &c);
        let right = table.product(&a, &bc);
        report.check(left == right, || format!("(ab)c != a(bc) for {a:?}, {b:?}, {c:?}"));
    }
    report
}

/// `ρ(a ⊙ b)|X⟩ = ρ(a) ρ(b)|X⟩` for random rules and hosts.
pub fn homomorphism(n_random: usize, seed: u64, max_host_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = ProductTable::new();
    for _ in 0..n_random {
        let a = random_rule(&mut rng, Shape::new(3, 2));
        let b = random_rule(&mut rng, Shape::new(3, 2));
        let x = random_graph(&mut rng, Shape::new(max_host_vertices, max_host_vertices));
        let (da, db) = (RuleAlgebraElement::basis(&a), RuleAlgebraElement::basis(&b));
        let state = ExactState::basis(&x);
        let lhs = represent(&table.product(&da, &db), &state);
        let rhs = represent(&da, &represent(&db, &state));
        report.check(lhs == rhs, || {
            format!("rho(a*b) != rho(a)rho(b) for a={}, b={}, X={x}", describe(&a), describe(&b))
        });
    }
    report
}

/// `⟨|ρ(δ(p))|X⟩ = |matches(p, X)| = ⟨|O_I |X⟩` for random rules and hosts.
pub fn jump_closure(n_random: usize, seed: u64, max_host_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        let p = random_rule(&mut rng, Shape::new(3, 3));
        let x = random_graph(&mut rng, Shape::new(max_host_vertices, max_host_vertices + 1));
        let state = ExactState::basis(&x);
        let jumped = represent(&RuleAlgebraElement::basis(&p), &state).projection();
        let observed = Observable::new(p.input().clone()).apply(&state).projection();
        let count = match_count(&p, &x);
        report.check(jumped.to_usize() == Some(count) && observed == jumped, || {
            format!("projection {jumped} vs {count} matches for p={}, X={x}", describe(&p))
        });
    }
    report
}

/// The unit of the algebra is a two-sided unit and acts as the identity.
pub fn unit_laws(n_random: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::default();
    let unit = RuleAlgebraElement::unit();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rules = small_rule_library();
    rules.extend((0..n_random).map(|_| random_rule(&mut rng, Shape::new(3, 3))));
    for p in &rules {
        let r = RuleAlgebraElement::basis(p);
        report.check(unit.product(&r) == r && r.product(&unit) == r, || {
            format!("unit law fails for {}", describe(p))
        });
    }
    for _ in 0..n_random.max(1) {
        let x = random_graph(&mut rng, Shape::new(4, 4));
        let s = ExactState::basis(&x);
        report.check(represent(&unit, &s) == s, || format!("unit does not fix |{x}⟩"));
    }
    report
}

/// A chain `K ⊆ I ⊆ X` of subgraphs.
#[derive(Debug, Clone)]
pub struct Chain {
    pub k: Graph,
    pub i: Graph,
    pub x: Graph,
}

impl Chain {
    /// `X` with its elements coloured by the first of `K`, `I`, `X` that
    /// contains them. Two chains are isomorphic iff these are.
    fn colored(&self) -> ColoredGraph {
        let vertices: Vec<Id> = self.x.vertices().collect();
        let pos = |v: Id| vertices.binary_search(&v).expect("vertex of X");
        let vcol = |v: Id| if self.k.has_vertex(v) { 0 } else if self.i.has_vertex(v) { 1 } else { 2 };
        let ecol = |e: Id| if self.k.has_edge(e) { 0 } else if self.i.has_edge(e) { 1 } else { 2 };
        ColoredGraph {
            vertex_colors: vertices.iter().map(|&v| vcol(v)).collect(),
            edges: self.x.edges().map(|(e, s, t)| (pos(s), pos(t), ecol(e))).collect(),
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.colored().canonical_form()
    }

    pub fn legs(&self) -> (GraphMorphism, GraphMorphism) {
        (
            GraphMorphism::inclusion(&self.k, &self.i).expect("K ⊆ I"),
            GraphMorphism::inclusion(&self.i, &self.x).expect("I ⊆ X"),
        )
    }
}

/// Every chain `K ⊆ I ⊆ X` with `X` within the bounds, one per isomorphism
/// class of chains.
pub fn enumerate_chains(max_vertices: usize, max_edges: usize) -> Vec<Chain> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in enumerate_graphs(max_vertices, max_edges) {
        for i in subgraphs(&x) {
            for k in subgraphs(&i) {
                let chain = Chain { k, i: i.clone(), x: x.clone() };
                if seen.insert(chain.canonical_form()) {
                    out.push(chain);
                }
            }
        }
    }
    out
}

/// Subgraphs `D ⊆ X` whose intersection with `I` is exactly `K`, i.e. the
/// complements that make the square a pullback of inclusions.
pub fn pullback_complements(chain: &Chain) -> Vec<Graph> {
    subgraphs(&chain.x)
        .into_iter()
        .filter(|d| {
            chain.i.vertices().all(|v| d.has_vertex(v) == chain.k.has_vertex(v))
                && chain.i.edges().all(|(e, _, _)| d.has_edge(e) == chain.k.has_edge(e))
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct FpcCensus {
    pub chains: usize,
    pub candidates: usize,
    pub report: SuiteReport,
}

/// For every chain within the bounds: the constructed complement passes the
/// brute-force finality check, and among all pullback complements it is the
/// only one that does.
///
/// Finality of a square of graphs is decided by the representable
/// competitors, so the census checks against [`SearchBound::representables`].
pub fn fpc_census(max_vertices: usize, max_edges: usize) -> FpcCensus {
    let verifier = Verifier::new(SearchBound::representables());
    let chains = enumerate_chains(max_vertices, max_edges);
    let mut census = FpcCensus { chains: chains.len(), ..Default::default() };
    for chain in &chains {
        let (i, m) = chain.legs();
        let (k, out) = final_pullback_complement(&i, &m);
        let constructed = out.dom().clone();
        let square = Square::new(i.clone(), k, m.clone(), out);
        census.report.verdict(verifier.verify(SquareKind::Fpc, &square), || {
            format!("constructed complement of {} ⊆ {} ⊆ {}", chain.k, chain.i, chain.x)
        });
        let mut finals = Vec::new();
        for d in pullback_complements(chain) {
            census.candidates += 1;
            let kd = GraphMorphism::inclusion(&chain.k, &d).expect("K ⊆ D");
            let dx = GraphMorphism::inclusion(&d, &chain.x).expect("D ⊆ X");
            if verifier.verify(SquareKind::Fpc, &Square::new(i.clone(), kd, m.clone(), dx)).holds() {
                finals.push(d);
            }
        }
        census.report.check(finals == [constructed], || {
            format!(
                "brute force found {} final complements of {} ⊆ {} ⊆ {}",
                finals.len(),
                chain.k,
                chain.i,
                chain.x
            )
        });
    }
    census
}
