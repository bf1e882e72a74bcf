//! Points `(ζ, ν)` of the space of simplicial maps from the nerve of `G`
//! into the crossed-module nerve, and the deformation retraction onto the
//! points with `ν = 0`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::group_nerve::edge_products;
use super::simplex::NerveSimplex;
use crate::cochain::{contracting_homotopy, Coefficients, Cochain, Representation};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, FiniteHom};
use crate::linalg::Rational;
use crate::mapping::ToralHom;
use crate::toral::{Check, ToralElement, ToralGroup, VectorV};

/// `ζ: G -> H` and `ν: G x G -> V` satisfying
///
/// 1. `ζ(e) = e`, `ν(g, e) = 0 = ν(e, g)`;
/// 2. `ζ(g1 g2) = exp(ν(g1, g2)) ζ(g1) ζ(g2)`;
/// 3. `ν(g1 g2, g3) + ν(g1, g2) = ν(g1, g2 g3) + ad(ζ(g1)) ν(g2, g3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocyclePair {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<ToralGroup>,
    pub zeta: Vec<ToralElement>,
    /// `ν(g1, g2)` at index `g1 * |G| + g2`.
    pub nu: Vec<VectorV>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PairReport {
    pub passed: bool,
    pub conditions: Vec<Check>,
    /// Component homomorphism `G -> π`, certified when every condition holds.
    pub gamma: Option<Vec<usize>>,
    /// Whether `ν` vanishes identically.
    pub in_e0: bool,
}

impl CocyclePair {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<ToralGroup>, zeta: Vec<ToralElement>, nu: Vec<VectorV>) -> Result<Self> {
        let n = source.order();
        if zeta.len() != n || nu.len() != n * n {
            return Err(Error::DimensionMismatch("ζ needs |G| values and ν needs |G|^2".into()));
        }
        if zeta.iter().any(|z| !target.contains(z)) {
            return Err(Error::ParentMismatch);
        }
        if nu.iter().any(|v| v.len() != target.rank()) {
            return Err(Error::DimensionMismatch(format!("ν values must have length {}", target.rank())));
        }
        Ok(CocyclePair { source, target, zeta, nu })
    }

    /// `(φ, 0)` for a homomorphism `φ`.
    pub fn from_hom(phi: &ToralHom) -> Self {
        let g = phi.source().clone();
        let n = g.order();
        let zeta = g.elements().map(|x| phi.apply(x)).collect();
        let nu = vec![vec![Rational::zero(); phi.target.rank()]; n * n];
        CocyclePair { source: g, target: phi.target.clone(), zeta, nu }
    }

    /// `ζ = exp(μ) φ` and `ν = λ - dμ`, for a vector 1-cochain `μ` and an
    /// integral 2-cocycle `λ` of `α ∘ γ`.
    pub fn twisted(phi: &ToralHom, mu: &Cochain, lambda: &Cochain) -> Result<Self> {
        let h = &phi.target;
        let g = phi.source().clone();
        if mu.degree() != 1 || lambda.degree() != 2 || lambda.kind() != Coefficients::Lattice {
            return Err(Error::WrongCoefficients("expected a 1-cochain and a lattice 2-cochain".into()));
        }
        let zeta = g.elements().map(|x| h.mul(&h.exp(&mu.value_or_zero(x)), &phi.apply(x))).collect();
        let dmu = mu.with_kind(Coefficients::Vector)?.coboundary();
        let mut nu = Vec::with_capacity(g.order() * g.order());
        for a in g.elements() {
            for b in g.elements() {
                let (x, y) = if a == 0 || b == 0 {
                    (vec![Rational::zero(); h.rank()], vec![Rational::zero(); h.rank()])
                } else {
                    (lambda.value(&[a, b]), dmu.value(&[a, b]))
                };
                nu.push(x.iter().zip(&y).map(|(l, m)| l - m).collect());
            }
        }
        CocyclePair::new(g, h.clone(), zeta, nu)
    }

    pub fn nu(&self, a: usize, b: usize) -> &VectorV {
        &self.nu[a * self.source.order() + b]
    }

    pub fn is_e0(&self) -> bool {
        self.nu.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Component of `ζ`, as an image array.
    pub fn components(&self) -> Vec<usize> {
        self.zeta.iter().map(|z| z.component).collect()
    }

    /// `ν` as a vector 2-cochain for `α ∘ γ`.
    fn nu_cochain(&self, rep: Arc<Representation>) -> Result<Cochain> {
        Cochain::from_fn(rep, 2, Coefficients::Vector, |t| self.nu(t[0], t[1]).clone())
    }
}

pub fn validate_pair(p: &CocyclePair) -> PairReport {
    let g = &p.source;
    let h = &p.target;
    let zero = vec![Rational::zero(); h.rank()];

    let mut c1 = Check::new("normalization");
    c1.samples = 1 + 2 * g.order();
    if p.zeta[0] != h.identity() {
        c1.fail("ζ(e) is not the identity".into());
    } else if let Some(x) = g.elements().find(|&x| *p.nu(x, 0) != zero || *p.nu(0, x) != zero) {
        c1.fail(format!("ν does not vanish at ({x}, e) or (e, {x})"));
    }

    let mut c2 = Check::new("ζ(g1 g2) = exp(ν(g1, g2)) ζ(g1) ζ(g2)");
    'outer: for a in g.elements() {
        for b in g.elements() {
            c2.samples += 1;
            let rhs = h.mul(&h.mul(&h.exp(p.nu(a, b)), &p.zeta[a]), &p.zeta[b]);
            if p.zeta[g.mul(a, b)] != rhs {
                c2.fail(format!("({a}, {b})"));
                break 'outer;
            }
        }
    }

    let mut c3 = Check::new("ν(g1 g2, g3) + ν(g1, g2) = ν(g1, g2 g3) + ad(ζ(g1)) ν(g2, g3)");
    'outer: for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                c3.samples += 1;
                let moved = h.act(p.zeta[a].component, p.nu(b, c));
                let lhs: VectorV = p.nu(g.mul(a, b), c).iter().zip(p.nu(a, b)).map(|(x, y)| x + y).collect();
                let rhs: VectorV = p.nu(a, g.mul(b, c)).iter().zip(&moved).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    c3.fail(format!("({a}, {b}, {c})"));
                    break 'outer;
                }
            }
        }
    }

    let passed = c1.passed && c2.passed && c3.passed;
    let gamma = passed.then(|| p.components());
    PairReport { passed, conditions: vec![c1, c2, c3], gamma, in_e0: p.is_e0() }
}

/// The simplex with `h_ij = ζ(g_ij)` and `v_ijk = ν(g_ij, g_jk)` for the
/// simplex `(g_1, .., g_n)` of the nerve of `G`.
pub fn pair_to_simplex(p: &CocyclePair, tuple: &[usize]) -> Result<NerveSimplex> {
    let report = validate_pair(p);
    if !report.passed {
        return Err(Error::InvalidPair(failure_text(&report)));
    }
    if tuple.iter().any(|&x| x >= p.source.order()) {
        return Err(Error::DimensionMismatch(format!("{tuple:?} is not a tuple of group elements")));
    }
    let prod = edge_products(&p.source, tuple);
    let n = tuple.len();
    let at = |i: usize, j: usize| prod[i * (n + 1) + j];
    Ok(NerveSimplex::from_fn(
        p.target.clone(),
        n,
        |i, j| p.zeta[at(i, j)].clone(),
        |i, j, k| p.nu(at(i, j), at(j, k)).clone(),
    ))
}

fn failure_text(r: &PairReport) -> String {
    r.conditions
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("{} fails at {}", c.name, c.witness.clone().unwrap_or_default()))
        .unwrap_or_default()
}

/// `K_t(ζ, ν) = (exp(t Hν) ζ, ν - t dHν)` for `t` in `[0, 1]`.
pub fn retract(p: &CocyclePair, t: &Rational) -> Result<CocyclePair> {
    if *t < Rational::zero() || *t > Rational::one() {
        return Err(Error::InvalidOption(format!("retraction time {t} is outside [0, 1]")));
    }
    let report = validate_pair(p);
    if !report.passed {
        return Err(Error::InvalidPair(failure_text(&report)));
    }
    let g = &p.source;
    let h = &p.target;
    let gamma = FiniteHom::new(g.clone(), h.pi().clone(), p.components())?;
    let rep = Arc::new(Representation::pullback(h, &gamma));
    let nu = p.nu_cochain(rep)?;
    let hnu = contracting_homotopy(&nu)?;
    let dhnu = hnu.coboundary();
    let zeta = g
        .elements()
        .map(|x| {
            let shift: VectorV = hnu.value_or_zero(x).iter().map(|a| a * t).collect();
            h.mul(&h.exp(&shift), &p.zeta[x])
        })
        .collect();
    let mut nu_t = Vec::with_capacity(p.nu.len());
    for a in g.elements() {
        for b in g.elements() {
            if a == 0 || b == 0 {
                nu_t.push(p.nu(a, b).clone());
            } else {
                let corr = dhnu.value(&[a, b]);
                nu_t.push(p.nu(a, b).iter().zip(&corr).map(|(x, y)| x - y * t).collect());
            }
        }
    }
    CocyclePair::new(g.clone(), h.clone(), zeta, nu_t)
}
