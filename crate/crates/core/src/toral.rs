//! Extensions `1 -> T^d -> H -> π -> 1` presented by an action and a
//! normalized 2-cocycle, with exact arithmetic on torsion points.
//!
//! An element is a pair `(t, p)` with `t` a point of the torus `R^d / Z^d`
//! (rational coordinates in `[0, 1)`) and `p` an element of `π`. The product
//! is `(t1, p1)(t2, p2) = (t1 + α(p1) t2 + c(p1, p2), p1 p2)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::group::{finite_catalog, FiniteGroup};
use crate::linalg::{format_rational, frac, lcm_denominators, rat, IntMatrix, Rational};

/// A vector in the Lie algebra `V = Q^d`, never reduced.
pub type VectorV = Vec<Rational>;

/// A torsion point of `R^d / Z^d`, coordinates kept in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorusPoint(Vec<Rational>);

impl TorusPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        TorusPoint(coords.iter().map(frac).collect())
    }

    pub fn zero(d: usize) -> Self {
        TorusPoint(vec![Rational::zero(); d])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint::new(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Rational) -> TorusPoint {
        TorusPoint::new(self.0.iter().map(|a| a * k).collect())
    }

    /// Order of the point in the torus: the lcm of coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        lcm_denominators(&self.0)
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for q in &self.0 {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }
}

/// `(t, p)` with `t` on the torus and `p` a component index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ToralElement {
    pub component: usize,
    pub torus: TorusPoint,
}

impl ToralElement {
    pub fn new(torus: TorusPoint, component: usize) -> Self {
        ToralElement { component, torus }
    }
}

impl fmt::Display for ToralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.torus, self.component)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ToralGroup {
    name: Option<String>,
    pi: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
    cocycle: Vec<TorusPoint>,
}

impl fmt::Debug for ToralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "ToralGroup({n})"),
            None => write!(f, "ToralGroup(|π| = {}, d = {})", self.pi.order(), self.rank),
        }
    }
}

/// Builds and validates a toral group. `cocycle[p][q]` is `c(p, q)`.
///
/// Checks, in order: shapes, unimodularity, the homomorphism property of the
/// action, normalization of the cocycle, and the twisted cocycle identity.
pub fn make_toral_group(
    pi: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
    cocycle: Vec<Vec<TorusPoint>>,
) -> Result<ToralGroup> {
    let n = pi.order();
    if action.len() != n {
        return Err(Error::DimensionMismatch(format!("{} action matrices for |π| = {n}", action.len())));
    }
    for (p, m) in action.iter().enumerate() {
        if m.rows() != rank || m.cols() != rank {
            return Err(Error::DimensionMismatch(format!(
                "action matrix of {p} is {}x{}, expected {rank}x{rank}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if cocycle.len() != n || cocycle.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("cocycle table must be |π| x |π|".into()));
    }
    if let Some(t) = cocycle.iter().flatten().find(|t| t.dim() != rank) {
        return Err(Error::DimensionMismatch(format!("cocycle value {t} is not of dimension {rank}")));
    }
    if let Some(p) = action.iter().position(|m| !m.is_unimodular()) {
        return Err(Error::ActionNotUnimodular(p));
    }
    if action[0] != IntMatrix::identity(rank) {
        return Err(Error::ActionNotHomomorphism { p: 0, q: 0 });
    }
    for p in pi.elements() {
        for q in pi.elements() {
            if action[p].mul(&action[q])? != action[pi.mul(p, q)] {
                return Err(Error::ActionNotHomomorphism { p, q });
            }
        }
    }
    for p in pi.elements() {
        if !cocycle[0][p].is_zero() {
            return Err(Error::CocycleNotNormalized { p: 0, q: p });
        }
        if !cocycle[p][0].is_zero() {
            return Err(Error::CocycleNotNormalized { p, q: 0 });
        }
    }
    let h = ToralGroup { name: None, pi, rank, action, cocycle: cocycle.into_iter().flatten().collect() };
    let pi = &h.pi;
    for p in pi.elements() {
        for q in pi.elements() {
            for r in pi.elements() {
                let lhs = h.act_torus(p, h.c(q, r)).add(h.c(p, pi.mul(q, r)));
                let rhs = h.c(pi.mul(p, q), r).add(h.c(p, q));
                if lhs != rhs {
                    return Err(Error::CocycleIdentityFails { p, q, r });
                }
            }
        }
    }
    Ok(h)
}

impl ToralGroup {
    /// Semidirect product `T^d ⋊ π` (zero cocycle).
    pub fn split(pi: Arc<FiniteGroup>, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        let n = pi.order();
        make_toral_group(pi, rank, action, vec![vec![TorusPoint::zero(rank); n]; n])
    }

    /// A finite group viewed as a toral group of rank 0.
    pub fn finite(pi: Arc<FiniteGroup>) -> Self {
        let n = pi.order();
        Self::split(pi, 0, vec![IntMatrix::zeros(0, 0); n]).expect("rank-0 toral group")
    }

    pub fn torus(rank: usize) -> Self {
        Self::split(Arc::new(FiniteGroup::trivial()), rank, vec![IntMatrix::identity(rank)]).expect("torus")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn pi(&self) -> &Arc<FiniteGroup> {
        &self.pi
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, p: usize) -> &IntMatrix {
        &self.action[p]
    }

    /// `c(p, q)`
    pub fn c(&self, p: usize, q: usize) -> &TorusPoint {
        &self.cocycle[p * self.pi.order() + q]
    }

    pub fn cocycle_table(&self) -> Vec<Vec<TorusPoint>> {
        self.cocycle.chunks(self.pi.order()).map(<[TorusPoint]>::to_vec).collect()
    }

    /// Whether the action is trivial and the cocycle vanishes on the torus,
    /// i.e. conjugation by torus elements never moves anything.
    pub fn action_is_trivial(&self) -> bool {
        let id = IntMatrix::identity(self.rank);
        self.action.iter().all(|m| *m == id)
    }

    /// lcm of the denominators of all cocycle values.
    pub fn cocycle_denominator(&self) -> BigInt {
        self.cocycle.iter().fold(BigInt::one(), |acc, t| num_integer::Integer::lcm(&acc, &t.denominator()))
    }

    pub fn act(&self, p: usize, v: &[Rational]) -> VectorV {
        self.action[p].mul_rational_vec(v).expect("action dimension")
    }

    pub fn act_torus(&self, p: usize, t: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.act(p, t.coords()))
    }

    pub fn identity(&self) -> ToralElement {
        ToralElement::new(TorusPoint::zero(self.rank), 0)
    }

    pub fn contains(&self, a: &ToralElement) -> bool {
        a.component < self.pi.order()
            && a.torus.dim() == self.rank
            && a.torus.coords().iter().all(|q| *q >= Rational::zero() && *q < Rational::one())
    }

    pub fn element(&self, t: &[Rational], p: usize) -> ToralElement {
        ToralElement::new(TorusPoint::new(t.to_vec()), p)
    }

    /// Unchecked product.
    pub fn mul(&self, a: &ToralElement, b: &ToralElement) -> ToralElement {
        let t = a.torus.add(&self.act_torus(a.component, &b.torus)).add(self.c(a.component, b.component));
        ToralElement::new(t, self.pi.mul(a.component, b.component))
    }

    /// Unchecked inverse, `(t, p)^{-1} = (-α(p^{-1}) t - c(p^{-1}, p), p^{-1})`.
    pub fn inv(&self, a: &ToralElement) -> ToralElement {
        let pinv = self.pi.inv(a.component);
        let t = self.act_torus(pinv, &a.torus).neg().sub(self.c(pinv, a.component));
        ToralElement::new(t, pinv)
    }

    /// `h a h^{-1}`
    pub fn conj(&self, h: &ToralElement, a: &ToralElement) -> ToralElement {
        self.mul(&self.mul(h, a), &self.inv(h))
    }

    pub fn elem_mul(&self, a: &ToralElement, b: &ToralElement) -> Result<ToralElement> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::ParentMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub fn elem_inv(&self, a: &ToralElement) -> Result<ToralElement> {
        if !self.contains(a) {
            return Err(Error::ParentMismatch);
        }
        Ok(self.inv(a))
    }

    fn check_dim(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch(format!("vector of length {} in rank {}", v.len(), self.rank)));
        }
        Ok(())
    }

    /// `exp(v) = (v mod Z^d, e)`
    pub fn exp_map(&self, v: &[Rational]) -> Result<ToralElement> {
        self.check_dim(v)?;
        Ok(self.exp(v))
    }

    pub(crate) fn exp(&self, v: &[Rational]) -> ToralElement {
        ToralElement::new(TorusPoint::new(v.to_vec()), 0)
    }

    /// `ad(h)(v) = α(p) v` for `h = (t, p)`.
    pub fn ad_action(&self, h: &ToralElement, v: &[Rational]) -> Result<VectorV> {
        self.check_dim(v)?;
        if !self.contains(h) {
            return Err(Error::ParentMismatch);
        }
        Ok(self.act(h.component, v))
    }

    /// Verifies the crossed-module axioms of `(H, V, exp, ad)` on a grid of
    /// torsion samples with denominators up to `max_denominator`.
    pub fn check_crossed_module(&self, max_denominator: u32) -> CrossedModuleReport {
        let vs = sample_vectors(self.rank, max_denominator, 4096);
        let coarse = sample_vectors(self.rank, max_denominator.min(4), 64);
        let torus_samples = sample_vectors(self.rank, 2, 16);
        let hs: Vec<ToralElement> = self
            .pi
            .elements()
            .flat_map(|p| torus_samples.iter().map(move |t| (t.clone(), p)))
            .map(|(t, p)| self.element(&t, p))
            .collect();

        let mut checks = Vec::new();

        let mut axiom_i = Check::new("exp(ad(h)(v)) = h exp(v) h^-1");
        'outer: for h in &hs {
            for v in &vs {
                axiom_i.samples += 1;
                let lhs = self.exp(&self.act(h.component, v));
                let rhs = self.conj(h, &self.exp(v));
                if lhs != rhs {
                    axiom_i.fail(format!("h = {h}, v = {}", show_vector(v)));
                    break 'outer;
                }
            }
        }
        checks.push(axiom_i);

        let mut axiom_ii = Check::new("ad(exp(v))(w) = w");
        'outer: for v in &vs {
            for w in &coarse {
                axiom_ii.samples += 1;
                if self.act(self.exp(v).component, w) != *w {
                    axiom_ii.fail(format!("v = {}, w = {}", show_vector(v), show_vector(w)));
                    break 'outer;
                }
            }
        }
        checks.push(axiom_ii);

        let mut hom = Check::new("exp(v + w) = exp(v) exp(w)");
        'outer: for v in &vs {
            for w in &coarse {
                hom.samples += 1;
                let sum: VectorV = v.iter().zip(w).map(|(a, b)| a + b).collect();
                if self.exp(&sum) != self.mul(&self.exp(v), &self.exp(w)) {
                    hom.fail(format!("v = {}, w = {}", show_vector(v), show_vector(w)));
                    break 'outer;
                }
            }
        }
        checks.push(hom);

        let mut kernel = Check::new("exp(v) = e iff v is integral");
        for v in &vs {
            kernel.samples += 1;
            let shifted: VectorV = v.iter().map(|x| x + Rational::one()).collect();
            let integral = v.iter().all(crate::linalg::is_integral);
            if (self.exp(v) == self.identity()) != integral || self.exp(&shifted) != self.exp(v) {
                kernel.fail(format!("v = {}", show_vector(v)));
                break;
            }
        }
        checks.push(kernel);

        CrossedModuleReport { passed: checks.iter().all(|c| c.passed), max_denominator, checks }
    }
}

fn show_vector(v: &[Rational]) -> String {
    TorusPoint(v.to_vec()).to_string()
}

/// Rationals `a/b` in `[0, 1)` with `1 <= b <= max_den`, in lowest terms.
pub fn unit_fractions(max_den: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max_den.max(1) as i64)
        .flat_map(|b| (0..b).map(move |a| rat(a, b)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All vectors with coordinates in [`unit_fractions`], or, when that set is
/// larger than `cap`, those with at most two nonzero coordinates.
pub fn sample_vectors(d: usize, max_den: u32, cap: usize) -> Vec<VectorV> {
    let fr = unit_fractions(max_den);
    let full = (fr.len() as f64).powi(d as i32);
    let mut out: Vec<VectorV> = vec![vec![]];
    if full <= cap as f64 {
        for _ in 0..d {
            out = out.iter().flat_map(|v| fr.iter().map(move |q| [v.clone(), vec![q.clone()]].concat())).collect();
        }
        return out;
    }
    out.clear();
    for i in 0..d {
        for j in i..d {
            for a in &fr {
                for b in &fr {
                    if i == j && b != a {
                        continue;
                    }
                    let mut v = vec![Rational::zero(); d];
                    v[i] = a.clone();
                    v[j] = b.clone();
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.to_string(), passed: true, samples: 0, witness: None }
    }

    pub fn fail(&mut self, witness: String) {
        self.passed = false;
        self.witness = Some(witness);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CrossedModuleReport {
    pub passed: bool,
    pub max_denominator: u32,
    pub checks: Vec<Check>,
}

fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

fn m1(x: i64) -> IntMatrix {
    IntMatrix::from_rows(&[vec![x]]).expect("1x1")
}

/// Named toral groups: `U1`, `T2`, `O2`, `Pin2`, `T2swap`, and every finite
/// catalog group (`Z<n>`, `S3`, ...) as a rank-0 group.
pub fn toral_catalog(name: &str) -> Option<ToralGroup> {
    let name = name.trim();
    let h = match name {
        "U1" | "SO2" => ToralGroup::torus(1),
        "T2" => ToralGroup::torus(2),
        "O2" => ToralGroup::split(z2(), 1, vec![m1(1), m1(-1)]).ok()?,
        "Pin2" => {
            let half = TorusPoint::new(vec![rat(1, 2)]);
            let zero = TorusPoint::zero(1);
            make_toral_group(
                z2(),
                1,
                vec![m1(1), m1(-1)],
                vec![vec![zero.clone(), zero.clone()], vec![zero, half]],
            )
            .ok()?
        }
        "T2swap" => {
            let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).ok()?;
            ToralGroup::split(z2(), 2, vec![IntMatrix::identity(2), swap]).ok()?
        }
        _ => ToralGroup::finite(Arc::new(finite_catalog(name)?)),
    };
    Some(h.with_name(name))
}

/// Names listed by `toral_catalog` that have a positive-rank torus.
pub const TORAL_CATALOG: &[&str] = &["U1", "T2", "O2", "Pin2", "T2swap"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn o2() -> ToralGroup {
        toral_catalog("O2").unwrap()
    }

    fn pin2() -> ToralGroup {
        toral_catalog("Pin2").unwrap()
    }

    fn el(h: &ToralGroup, t: &[Rational], p: usize) -> ToralElement {
        h.element(t, p)
    }

    #[test]
    fn catalog_validates() {
        for name in TORAL_CATALOG.iter().chain(&["Z3", "S3", "Z1"]) {
            let h = toral_catalog(name).unwrap();
            assert!(h.check_crossed_module(8).passed, "{name}");
        }
    }

    #[test]
    fn pin2_with_third_is_rejected() {
        // (σ, σ, σ): α(σ)c(σ,σ) - c(e,σ) + c(σ,e) - c(σ,σ) = -2q, which is
        // integral only for q in {0, 1/2}
        let third = TorusPoint::new(vec![rat(1, 3)]);
        let zero = TorusPoint::zero(1);
        let err = make_toral_group(z2(), 1, vec![m1(1), m1(-1)], vec![vec![zero.clone(), zero.clone()], vec![zero, third]])
            .unwrap_err();
        assert_eq!(err, Error::CocycleIdentityFails { p: 1, q: 1, r: 1 });
    }

    #[test]
    fn construction_errors() {
        let zero = TorusPoint::zero(1);
        let table = vec![vec![zero.clone(); 2]; 2];
        assert_eq!(make_toral_group(z2(), 1, vec![m1(1), m1(2)], table.clone()), Err(Error::ActionNotUnimodular(1)));
        assert_eq!(
            make_toral_group(z2(), 1, vec![m1(-1), m1(-1)], table.clone()),
            Err(Error::ActionNotHomomorphism { p: 0, q: 0 })
        );
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let t3 = vec![vec![zero.clone(); 3]; 3];
        assert!(matches!(
            make_toral_group(z3, 1, vec![m1(1), m1(-1), m1(-1)], t3),
            Err(Error::ActionNotHomomorphism { .. })
        ));
        let mut bad = table;
        bad[1][0] = TorusPoint::new(vec![rat(1, 2)]);
        assert_eq!(make_toral_group(z2(), 1, vec![m1(1), m1(-1)], bad), Err(Error::CocycleNotNormalized { p: 1, q: 0 }));
    }

    #[test]
    fn o2_reflection_inverts_torus() {
        let h = o2();
        let s = el(&h, &[int(0)], 1);
        let t = el(&h, &[rat(1, 4)], 0);
        assert_eq!(h.conj(&s, &t), el(&h, &[rat(3, 4)], 0));
        assert_eq!(h.ad_action(&el(&h, &[rat(1, 3)], 1), &[rat(5, 2)]).unwrap(), vec![rat(-5, 2)]);
    }

    #[test]
    fn pin2_square_and_inverse() {
        let h = pin2();
        let s = el(&h, &[int(0)], 1);
        assert_eq!(h.mul(&s, &s), el(&h, &[rat(1, 2)], 0));
        assert_eq!(h.inv(&s), el(&h, &[rat(1, 2)], 1));
    }

    #[test]
    fn exp_reduces() {
        let h = toral_catalog("U1").unwrap();
        assert_eq!(h.exp_map(&[rat(3, 2)]).unwrap(), el(&h, &[rat(1, 2)], 0));
        assert_eq!(h.exp_map(&[int(0)]).unwrap(), h.identity());
        assert!(h.exp_map(&[int(0), int(0)]).is_err());
    }

    #[test]
    fn associativity_and_inverses_on_grid() {
        for name in TORAL_CATALOG {
            let h = toral_catalog(name).unwrap();
            let ts = sample_vectors(h.rank(), 4, 64);
            let els: Vec<ToralElement> =
                h.pi().elements().flat_map(|p| ts.iter().map(move |t| (t.clone(), p))).map(|(t, p)| el(&h, &t, p)).collect();
            let small: Vec<&ToralElement> = els.iter().step_by(3).collect();
            for a in &small {
                let ai = h.elem_inv(a).unwrap();
                assert_eq!(h.mul(a, &ai), h.identity());
                assert_eq!(h.mul(&ai, a), h.identity());
                for b in &small {
                    for c in small.iter().step_by(2) {
                        assert_eq!(h.mul(&h.mul(a, b), c), h.mul(a, &h.mul(b, c)), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn ad_factors_through_components() {
        let h = toral_catalog("T2swap").unwrap();
        let v = vec![rat(1, 3), rat(-2, 5)];
        for t in sample_vectors(2, 3, 100) {
            assert_eq!(h.ad_action(&el(&h, &t, 1), &v).unwrap(), vec![rat(-2, 5), rat(1, 3)]);
            assert_eq!(h.ad_action(&el(&h, &t, 0), &v).unwrap(), v);
        }
    }

    #[test]
    fn parent_mismatch() {
        let h = o2();
        let foreign = ToralElement::new(TorusPoint::zero(2), 0);
        assert_eq!(h.elem_mul(&foreign, &h.identity()), Err(Error::ParentMismatch));
        let bad_component = ToralElement::new(TorusPoint::zero(1), 5);
        assert_eq!(h.elem_inv(&bad_component), Err(Error::ParentMismatch));
    }

    #[test]
    fn unit_fraction_grid() {
        assert_eq!(unit_fractions(4).len(), 6);
        assert_eq!(sample_vectors(2, 2, 100).len(), 4);
        let sparse = sample_vectors(5, 8, 100);
        assert!(sparse.iter().all(|v| v.iter().filter(|x| !x.is_zero()).count() <= 2));
    }
}
