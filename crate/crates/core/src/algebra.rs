//! The rule algebra: formal linear combinations of rule isomorphism classes
//! with the composition product, and its action on graph state vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::canon::{canonical_form, decode_graph, CanonicalForm};
use crate::graph::Graph;
use crate::monos::count_monos;
use crate::rewriting::{apply_rule, composites, matches};
use crate::rule::LinearRule;

/// A finite combination `Σ c_p δ(p)` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RuleAlgebraElement {
    terms: BTreeMap<CanonicalForm, BigRational>,
}

impl RuleAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `δ(p)`.
    pub fn basis(p: &LinearRule) -> Self {
        Self::from_key(p.canonical_form(), BigRational::one())
    }

    /// `δ(∅ ← ∅ → ∅)`, the multiplicative unit.
    pub fn unit() -> Self {
        Self::basis(&LinearRule::unit())
    }

    pub fn from_key(key: CanonicalForm, coefficient: BigRational) -> Self {
        let mut r = Self::zero();
        r.add_term(key, coefficient);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalForm, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of `δ(p)`.
    pub fn coefficient(&self, p: &LinearRule) -> BigRational {
        self.terms.get(&p.canonical_form()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, key: CanonicalForm, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old + coefficient,
            None => coefficient,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RuleAlgebraElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `self ⊙ other`: `self` acts after `other`.
    pub fn product(&self, other: &Self) -> Self {
        ProductTable::new().product(self, other)
    }

    /// `[self, other] = self ⊙ other − other ⊙ self`.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut table = ProductTable::new();
        table.commutator(self, other)
    }

    /// One `key<TAB>coefficient` line per term, in key order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, c) in &self.terms {
            out.push_str(&format!("{k}\t{c}\n"));
        }
        out
    }
}

impl fmt::Debug for RuleAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}·δ[{k}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &RuleAlgebraElement {
    type Output = RuleAlgebraElement;

    fn add(self, rhs: Self) -> RuleAlgebraElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Neg for &RuleAlgebraElement {
    type Output = RuleAlgebraElement;

    fn neg(self) -> RuleAlgebraElement {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &RuleAlgebraElement {
    type Output = RuleAlgebraElement;

    fn sub(self, rhs: Self) -> RuleAlgebraElement {
        self + &(-rhs)
    }
}

/// Memoised products of basis elements.
#[derive(Default)]
pub struct ProductTable {
    cache: HashMap<(CanonicalForm, CanonicalForm), Vec<(CanonicalForm, usize)>>,
}

impl ProductTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `δ(p2) ⊙ δ(p1)` as (composite class, multiplicity) pairs.
    pub fn basis_product(&mut self, p2: &CanonicalForm, p1: &CanonicalForm) -> &[(CanonicalForm, usize)] {
        self.cache
            .entry((p2.clone(), p1.clone()))
            .or_insert_with(|| {
                let mut counts: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
                for r in composites(&LinearRule::decode(p2), &LinearRule::decode(p1)) {
                    *counts.entry(r.canonical_form()).or_default() += 1;
                }
                counts.into_iter().collect()
            })
    }

    pub fn product(&mut self, a: &RuleAlgebraElement, b: &RuleAlgebraElement) -> RuleAlgebraElement {
        let mut out = RuleAlgebraElement::zero();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let weight = ca * cb;
                for (k, n) in self.basis_product(ka, kb) {
                    out.add_term(k.clone(), &weight * BigRational::from_integer(BigInt::from(*n)));
                }
            }
        }
        out
    }

    pub fn commutator(&mut self, a: &RuleAlgebraElement, b: &RuleAlgebraElement) -> RuleAlgebraElement {
        &self.product(a, b) - &self.product(b, a)
    }
}

/// Scalars a state vector can carry.
pub trait Coefficient: Clone + Num + fmt::Debug {
    fn from_rational(r: &BigRational) -> Self;

    fn from_count(n: usize) -> Self;
}

impl Coefficient for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Coefficient for f64 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        n as f64
    }
}

/// A finite combination `Σ ψ_X |X⟩` of graph isomorphism classes.
#[derive(Clone, PartialEq)]
pub struct StateVector<C: Coefficient> {
    terms: BTreeMap<CanonicalForm, C>,
}

pub type ExactState = StateVector<BigRational>;

impl<C: Coefficient> Default for StateVector<C> {
    fn default() -> Self {
        StateVector { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> StateVector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `|X⟩`.
    pub fn basis(x: &Graph) -> Self {
        let mut s = Self::zero();
        s.add_term(canonical_form(x), C::one());
        s
    }

    /// `|n⟩`, the discrete graph on `n` vertices.
    pub fn discrete(n: usize) -> Self {
        Self::basis(&Graph::discrete(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalForm, &C)> {
        self.terms.iter()
    }

    /// Coefficient of `|x⟩`.
    pub fn coefficient(&self, x: &Graph) -> C {
        self.terms.get(&canonical_form(x)).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, key: CanonicalForm, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    /// `⟨|ψ⟩ = Σ ψ_X`.
    pub fn projection(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    /// `Σ_X ψ_X ω₁(X)⋯ω_n(X)`.
    pub fn correlator(&self, observables: &[Observable]) -> C {
        let mut total = C::zero();
        for (k, psi) in &self.terms {
            let x = decode_graph(k);
            let mut term = psi.clone();
            for o in observables {
                term = term * C::from_count(o.eigenvalue(&x));
            }
            total = total + term;
        }
        total
    }
}

impl<C: Coefficient> fmt::Debug for StateVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c:?}|{k}⟩")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `ρ(δ(p))|X⟩ = Σ_{m ∈ matches(p, X)} |p_m(X)⟩`.
pub fn represent_rule<C: Coefficient>(p: &LinearRule, x: &Graph) -> StateVector<C> {
    let mut out = StateVector::zero();
    for mt in matches(p, x) {
        out.add_term(canonical_form(apply_rule(p, &mt).result()), C::one());
    }
    out
}

/// The canonical representation, extended bilinearly.
pub fn represent<C: Coefficient>(r: &RuleAlgebraElement, s: &StateVector<C>) -> StateVector<C> {
    let mut out = StateVector::zero();
    for (rk, rc) in &r.terms {
        let p = LinearRule::decode(rk);
        let rc = C::from_rational(rc);
        for (xk, psi) in &s.terms {
            let weight = rc.clone() * psi.clone();
            for (yk, n) in represent_rule::<C>(&p, &decode_graph(xk)).terms {
                out.add_term(yk, weight.clone() * n);
            }
        }
    }
    out
}

/// A motif-counting observable `O_M`, the representation of `δ(M ← M → M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    pub motif: Graph,
}

impl Observable {
    pub fn new(motif: Graph) -> Self {
        Observable { motif }
    }

    /// Counts vertices.
    pub fn vertices() -> Self {
        Self::new(Graph::discrete(1))
    }

    /// Counts edges.
    pub fn edges() -> Self {
        Self::new(Graph::from_edge_list(2, &[(0, 1)]))
    }

    pub fn rule(&self) -> LinearRule {
        LinearRule::identity(&self.motif)
    }

    /// Number of embeddings of the motif into `x`.
    pub fn eigenvalue(&self, x: &Graph) -> usize {
        count_monos(&self.motif, x)
    }

    pub fn apply<C: Coefficient>(&self, s: &StateVector<C>) -> StateVector<C> {
        let mut out = StateVector::zero();
        for (k, c) in &s.terms {
            out.add_term(k.clone(), c.clone() * C::from_count(self.eigenvalue(&decode_graph(k))));
        }
        out
    }
}
