//! Homomorphisms from a finite group into a toral group, up to conjugacy.
//!
//! For each `γ: G -> π` (one per `π`-conjugacy orbit) the lifts of `γ` are
//! the torus 1-cochains `t` with `dt = -γ*c`. They exist iff the pulled-back
//! class vanishes, and then form a torsor under `Z^1(G, T)`. Conjugating by
//! a torus element shifts `t` by a degree-1 coboundary, so classes over a
//! fixed `γ` are `H^1(G, T)`-many before the stabilizer of `γ` in `π` is
//! taken into account.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cochain::{
    pulled_back_cocycle, torus_class_vanishes, z1_torus_structure, Coefficients, Cochain, DegreeZeroSolver,
    Representation,
};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{all_subgroups, conjugacy_orbits, enumerate_finite_homs, same_group, FiniteGroup, FiniteHom, HomOrbit};
use crate::linalg::{frac, int, IntMatrix, Rational};
use crate::toral::{ToralElement, ToralGroup, TorusPoint};

/// `φ(g) = (t(g), γ(g))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToralHom {
    pub target: Arc<ToralGroup>,
    pub gamma: FiniteHom,
    /// `t(g)` for every element of `G`, `t(e) = 0`.
    pub torus: Vec<TorusPoint>,
}

impl ToralHom {
    pub fn new(target: Arc<ToralGroup>, gamma: FiniteHom, torus: Vec<TorusPoint>) -> Result<Self> {
        if !same_group(&gamma.target, target.pi()) {
            return Err(Error::SignatureMismatch);
        }
        let g = gamma.source.clone();
        if torus.len() != g.order() || torus.iter().any(|t| t.dim() != target.rank()) {
            return Err(Error::DimensionMismatch("one torus point per source element expected".into()));
        }
        let phi = ToralHom { target, gamma, torus };
        if !phi.torus[0].is_zero() {
            return Err(Error::NotAHomomorphism("identity has a nonzero torus part".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                if phi.target.mul(&phi.apply(a), &phi.apply(b)) != phi.apply(g.mul(a, b)) {
                    return Err(Error::NotAHomomorphism(format!("fails at ({a}, {b})")));
                }
            }
        }
        Ok(phi)
    }

    /// Builds `φ` from `γ` and a torus 1-cochain for `α∘γ`.
    pub fn from_cochain(target: Arc<ToralGroup>, gamma: FiniteHom, t: &Cochain) -> Result<Self> {
        let g = gamma.source.clone();
        let torus =
            g.elements().map(|x| if x == 0 { TorusPoint::zero(target.rank()) } else { TorusPoint::new(t.value(&[x])) }).collect();
        Self::new(target, gamma, torus)
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<ToralGroup>) -> Self {
        let torus = vec![TorusPoint::zero(target.rank()); source.order()];
        let gamma = FiniteHom::trivial(source, target.pi().clone());
        ToralHom { target, gamma, torus }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.gamma.source
    }

    pub fn apply(&self, g: usize) -> ToralElement {
        ToralElement::new(self.torus[g].clone(), self.gamma.apply(g))
    }

    /// Torus parts of the non-identity elements, in cochain storage order.
    pub fn torus_values(&self) -> Vec<Rational> {
        self.torus[1..].iter().flat_map(|t| t.coords().iter().cloned()).collect()
    }

    /// `g -> h φ(g) h^{-1}`
    pub fn conjugate_by(&self, h: &ToralElement) -> ToralHom {
        let images: Vec<ToralElement> = self.source().elements().map(|g| self.target.conj(h, &self.apply(g))).collect();
        let gamma = FiniteHom {
            source: self.gamma.source.clone(),
            target: self.gamma.target.clone(),
            images: images.iter().map(|e| e.component).collect(),
        };
        ToralHom { target: self.target.clone(), gamma, torus: images.into_iter().map(|e| e.torus).collect() }
    }

    /// `φ ∘ ι` for an injective homomorphism `ι: K -> G` given by its images.
    pub fn precompose(&self, k: Arc<FiniteGroup>, embedding: &[usize]) -> Result<ToralHom> {
        let gamma = FiniteHom::new(k, self.gamma.target.clone(), embedding.iter().map(|&x| self.gamma.apply(x)).collect())?;
        let torus = embedding.iter().map(|&x| self.torus[x].clone()).collect();
        ToralHom::new(self.target.clone(), gamma, torus)
    }

    pub fn same_signature(&self, other: &ToralHom) -> bool {
        same_group(self.source(), other.source()) && *self.target == *other.target
    }

    /// Sort key: `γ` images, then torus coordinates.
    pub fn sort_key(&self) -> (Vec<usize>, Vec<TorusPoint>) {
        (self.gamma.images.clone(), self.torus.clone())
    }

    pub fn rep(&self) -> Arc<Representation> {
        Arc::new(Representation::pullback(&self.target, &self.gamma))
    }
}

/// `h` with `h φ h^{-1} = ψ`, or `None` if the two are not conjugate.
///
/// For every `p` carrying `γ_φ` to `γ_ψ`, the remaining torus equation
/// `d^0 s = t_ψ - t_{pφp^{-1}}` is decided exactly by Smith normal form.
pub fn conjugacy_test(phi: &ToralHom, psi: &ToralHom) -> Result<Option<ToralElement>> {
    if !phi.same_signature(psi) {
        return Err(Error::SignatureMismatch);
    }
    let h = &phi.target;
    let pi = h.pi();
    let solver = DegreeZeroSolver::new(psi.rep());
    for p in pi.elements() {
        if phi.gamma.conjugate_by(p).images != psi.gamma.images {
            continue;
        }
        let moved = phi.conjugate_by(&ToralElement::new(TorusPoint::zero(h.rank()), p));
        let w: Vec<Rational> = psi.torus_values().iter().zip(moved.torus_values()).map(|(a, b)| a - b).collect();
        if let Some(s) = solver.solve(&w) {
            let conj = h.mul(&h.exp(&s), &ToralElement::new(TorusPoint::zero(h.rank()), p));
            if phi.conjugate_by(&conj) != *psi {
                return Err(Error::Internal("conjugator failed verification".into()));
            }
            return Ok(Some(conj));
        }
    }
    Ok(None)
}

/// Order, commutativity and (for abelian groups) invariant factors of a
/// component group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub order: u64,
    pub abelian: Option<bool>,
    pub invariant_factors: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerPresentation {
    /// Dimension of the identity component.
    pub torus_rank: usize,
    /// Columns span the Lie algebra of the identity component inside `Z^d`.
    pub torus_lattice: IntMatrix,
    /// Generators of the component group.
    pub component_reps: Vec<ToralElement>,
    pub component_group_order: u64,
    /// One element per component (identity component first) when the
    /// component group is small enough.
    pub component_elements: Option<Vec<ToralElement>>,
    pub component_table: Option<FiniteGroup>,
    pub component_summary: GroupSummary,
    /// Components of `π` met by the centralizer.
    pub pi_image: Vec<usize>,
}

/// Coordinates of an invariant torus point in the component group of the
/// invariant subtorus `T^G = ⊕ Z/e_i × (torus)`.
fn component_key(solver: &DegreeZeroSolver, s: &[Rational]) -> Vec<Rational> {
    let x = solver.v_inv().mul_rational_vec(s).expect("dimension");
    x[..solver.rank()].iter().map(frac).collect()
}

/// Centralizer of `φ(G)` in `H`.
pub fn centralizer(phi: &ToralHom, limits: &Limits) -> Result<CentralizerPresentation> {
    let h = &phi.target;
    let d = h.rank();
    let solver = DegreeZeroSolver::new(phi.rep());
    let r = solver.rank();
    let zero = TorusPoint::zero(d);

    let mut cosets: Vec<(usize, TorusPoint)> = Vec::new();
    for p in h.pi().elements() {
        if phi.gamma.conjugate_by(p).images != phi.gamma.images {
            continue;
        }
        let moved = phi.conjugate_by(&ToralElement::new(zero.clone(), p));
        let w: Vec<Rational> = phi.torus_values().iter().zip(moved.torus_values()).map(|(a, b)| a - b).collect();
        if let Some(s) = solver.solve(&w) {
            cosets.push((p, TorusPoint::new(s)));
        }
    }

    let factors: Vec<BigInt> = solver.invariant_factors();
    let torus_gens: Vec<(TorusPoint, BigInt)> = factors
        .iter()
        .enumerate()
        .filter(|(_, e)| !num_traits::One::is_one(*e))
        .map(|(i, e)| {
            let mut x = vec![Rational::zero(); d];
            x[i] = Rational::new(1.into(), e.clone());
            (TorusPoint::new(solver.v().mul_rational_vec(&x).expect("dimension")), e.clone())
        })
        .collect();
    let torus_components: BigInt = torus_gens.iter().map(|(_, e)| e.clone()).product();
    let order_big = torus_components * BigInt::from(cosets.len());
    let order = order_big.to_u64().ok_or_else(|| Error::size_limit("component group order", u128::MAX, u64::MAX as u128))?;

    let mut component_reps: Vec<ToralElement> = torus_gens.iter().map(|(t, _)| ToralElement::new(t.clone(), 0)).collect();
    component_reps.extend(cosets.iter().skip(1).map(|(p, s)| ToralElement::new(s.clone(), *p)));
    for c in &component_reps {
        for g in phi.source().elements() {
            let x = phi.apply(g);
            if h.conj(c, &x) != x {
                return Err(Error::Internal(format!("centralizer element {c} does not commute with φ({g})")));
            }
        }
    }

    let (component_elements, component_table) = if order as usize <= limits.component_table {
        let mut elements = Vec::with_capacity(order as usize);
        for (p, s) in &cosets {
            let mut digits = vec![BigInt::zero(); torus_gens.len()];
            loop {
                let mut t = s.clone();
                for ((g, _), a) in torus_gens.iter().zip(&digits) {
                    t = t.add(&g.scale(&Rational::from_integer(a.clone())));
                }
                elements.push(ToralElement::new(t, *p));
                let mut i = 0;
                while i < digits.len() {
                    digits[i] += 1;
                    if digits[i] < torus_gens[i].1 {
                        break;
                    }
                    digits[i] = BigInt::zero();
                    i += 1;
                }
                if i == digits.len() {
                    break;
                }
            }
        }
        let coset_of: HashMap<usize, &TorusPoint> = cosets.iter().map(|(p, s)| (*p, s)).collect();
        let key = |e: &ToralElement| -> Result<(usize, Vec<Rational>)> {
            let s = coset_of
                .get(&e.component)
                .ok_or_else(|| Error::Internal("product left the centralizer".into()))?;
            Ok((e.component, component_key(&solver, e.torus.sub(s).coords())))
        };
        let index: HashMap<(usize, Vec<Rational>), usize> =
            elements.iter().enumerate().map(|(i, e)| Ok((key(e)?, i))).collect::<Result<_>>()?;
        if index.len() != elements.len() {
            return Err(Error::Internal("component representatives collide".into()));
        }
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let k = key(&h.mul(a, b))?;
                table[i][j] = *index.get(&k).ok_or_else(|| Error::Internal("component product not found".into()))?;
            }
        }
        let group = FiniteGroup::from_table(&table).map_err(|e| Error::Internal(format!("component table: {e}")))?;
        (Some(elements), Some(group))
    } else {
        (None, None)
    };

    let component_summary = match &component_table {
        Some(g) => {
            let inv = g.abelian_invariants();
            GroupSummary { order, abelian: Some(inv.is_some()), invariant_factors: inv }
        }
        None => GroupSummary { order, abelian: None, invariant_factors: None },
    };

    Ok(CentralizerPresentation {
        torus_rank: d - r,
        torus_lattice: solver.fixed_lattice(),
        component_reps,
        component_group_order: order,
        component_elements,
        component_table,
        component_summary,
        pi_image: cosets.iter().map(|(p, _)| *p).collect(),
    })
}

/// Everything needed to put homomorphisms `G -> H` into canonical form.
pub struct HomClassifier {
    source: Arc<FiniteGroup>,
    target: Arc<ToralGroup>,
    gammas: Vec<FiniteHom>,
    orbits: Vec<HomOrbit>,
    orbit_of: HashMap<Vec<usize>, usize>,
    solvers: Vec<DegreeZeroSolver>,
    limits: Limits,
}

impl HomClassifier {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<ToralGroup>, limits: &Limits) -> Result<Self> {
        if source.order() > limits.cochain_group_order {
            return Err(Error::size_limit(
                "source group order",
                source.order() as u128,
                limits.cochain_group_order as u128,
            ));
        }
        let gammas = enumerate_finite_homs(&source, target.pi(), limits)?;
        let orbits = conjugacy_orbits(target.pi(), &gammas)?;
        let mut orbit_of = HashMap::new();
        for (k, o) in orbits.iter().enumerate() {
            for &m in &o.members {
                orbit_of.insert(gammas[m].images.clone(), k);
            }
        }
        let solvers = orbits
            .iter()
            .map(|o| DegreeZeroSolver::new(Arc::new(Representation::pullback(&target, &gammas[o.representative]))))
            .collect();
        Ok(HomClassifier { source, target, gammas, orbits, orbit_of, solvers, limits: limits.clone() })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ToralGroup> {
        &self.target
    }

    /// Orbit representatives `γ_0`, in increasing order.
    pub fn gamma_representatives(&self) -> Vec<&FiniteHom> {
        self.orbits.iter().map(|o| &self.gammas[o.representative]).collect()
    }

    fn component_element(&self, p: usize) -> ToralElement {
        ToralElement::new(TorusPoint::zero(self.target.rank()), p)
    }

    /// The canonical representative of the class of `φ`: `γ` is moved to the
    /// least member of its orbit, then the torus part is the least Smith
    /// normal form over the stabilizer of that `γ`.
    pub fn canonical_form(&self, phi: &ToralHom) -> Result<ToralHom> {
        if !same_group(phi.source(), &self.source) || *phi.target != *self.target {
            return Err(Error::SignatureMismatch);
        }
        let k = *self
            .orbit_of
            .get(&phi.gamma.images)
            .ok_or_else(|| Error::Internal("γ missing from the enumeration".into()))?;
        let orbit = &self.orbits[k];
        let gamma0 = &self.gammas[orbit.representative];
        let pi = self.target.pi();
        let p = pi
            .elements()
            .find(|&p| phi.gamma.conjugate_by(p).images == gamma0.images)
            .ok_or_else(|| Error::Internal("no element moves γ to its orbit representative".into()))?;
        let moved = phi.conjugate_by(&self.component_element(p));
        let solver = &self.solvers[k];
        let best = orbit
            .stabilizer
            .iter()
            .map(|&q| solver.canonical(&moved.conjugate_by(&self.component_element(q)).torus_values()))
            .min()
            .expect("stabilizer contains the identity");
        let t = Cochain::from_values(solver.rep().clone(), 1, Coefficients::Torus, best)?;
        ToralHom::from_cochain(self.target.clone(), gamma0.clone(), &t)
    }

    /// Canonical representatives of all classes, sorted.
    pub fn class_representatives(&self) -> Result<Vec<ToralHom>> {
        let mut out = Vec::new();
        for (k, orbit) in self.orbits.iter().enumerate() {
            let gamma0 = &self.gammas[orbit.representative];
            let rep = self.solvers[k].rep().clone();
            let nu = pulled_back_cocycle(&self.target, gamma0, &rep).scale(&int(-1))?;
            let Some(mu) = torus_class_vanishes(&nu)? else {
                continue;
            };
            let z1 = z1_torus_structure(&rep, &self.limits)?;
            let mut seen = BTreeSet::new();
            for z in &z1.classes {
                let lift = ToralHom::from_cochain(self.target.clone(), gamma0.clone(), &mu.add(z)?)
                    .map_err(|e| Error::ObstructionSolverFailure(format!("lift is not a homomorphism: {e}")))?;
                let canon = self.canonical_form(&lift)?;
                if seen.insert(canon.torus.clone()) {
                    out.push(canon);
                }
            }
        }
        out.sort_by_key(ToralHom::sort_key);
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct HomClass {
    pub representative: ToralHom,
    pub centralizer: CentralizerPresentation,
    /// Number of components of the orbit `H / C_H(φ)`.
    pub orbit_component_count: usize,
    /// Dimension of the orbit `H / C_H(φ)`.
    pub orbit_dimension: usize,
}

/// All conjugacy classes of homomorphisms `G -> H` with their centralizers.
pub fn enumerate_hom_classes(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, limits: &Limits) -> Result<Vec<HomClass>> {
    let classifier = HomClassifier::new(g.clone(), h.clone(), limits)?;
    classifier
        .class_representatives()?
        .into_iter()
        .map(|phi| {
            let centralizer = centralizer(&phi, limits)?;
            let orbit_component_count = h.pi().order() / centralizer.pi_image.len();
            let orbit_dimension = h.rank() - centralizer.torus_rank;
            Ok(HomClass { representative: phi, centralizer, orbit_component_count, orbit_dimension })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MappingSpaceReport {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<ToralGroup>,
    pub classes: Vec<HomClass>,
    /// Components of the based mapping space, `Σ` orbit components.
    pub based_components: usize,
    /// Components of the unbased mapping space, one per class.
    pub unbased_components: usize,
}

pub fn mapping_space_report(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, limits: &Limits) -> Result<MappingSpaceReport> {
    let classes = enumerate_hom_classes(g, h, limits)?;
    let based_components = classes.iter().map(|c| c.orbit_component_count).sum();
    let unbased_components = classes.len();
    Ok(MappingSpaceReport { source: g.clone(), target: h.clone(), classes, based_components, unbased_components })
}

#[derive(Clone, Debug)]
pub struct FixedPointEntry {
    /// Elements of the subgroup inside `G`, sorted.
    pub subgroup: Vec<usize>,
    pub report: MappingSpaceReport,
}

/// One mapping-space report per conjugacy class of subgroups of `G`, in
/// order of increasing subgroup order.
pub fn fixed_points_report(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, limits: &Limits) -> Result<Vec<FixedPointEntry>> {
    let subs = all_subgroups(g, true, limits)?;
    subs.subgroups
        .into_iter()
        .map(|s| {
            let (k, _) = g.subgroup_as_group(&s)?;
            let report = mapping_space_report(&Arc::new(k), h, limits)?;
            Ok(FixedPointEntry { subgroup: s, report })
        })
        .collect()
}

/// A failed restriction: restricting `class` of the entry for `from` along
/// `to` gave a homomorphism conjugate to no listed class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionFailure {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionCheck {
    pub pairs_checked: usize,
    pub restrictions_checked: usize,
    pub failures: Vec<RestrictionFailure>,
}

/// Restricts every class representative for `G'` along every listed
/// `G'' <= G'` (up to conjugacy in `G`) and checks that the result is
/// conjugate to a representative listed for `G''`.
pub fn check_restrictions(g: &FiniteGroup, entries: &[FixedPointEntry]) -> Result<RestrictionCheck> {
    let mut check = RestrictionCheck { pairs_checked: 0, restrictions_checked: 0, failures: vec![] };
    for big in entries {
        let pos: BTreeMap<usize, usize> = big.subgroup.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        for small in entries {
            let Some(x) = crate::group::conjugate_into(g, &small.subgroup, &big.subgroup) else {
                continue;
            };
            check.pairs_checked += 1;
            let embedding: Vec<usize> = small.subgroup.iter().map(|&y| pos[&g.conj(x, y)]).collect();
            for (ci, class) in big.report.classes.iter().enumerate() {
                check.restrictions_checked += 1;
                let restricted = class.representative.precompose(small.report.source.clone(), &embedding)?;
                let mut hits = 0;
                for c in &small.report.classes {
                    if conjugacy_test(&restricted, &c.representative)?.is_some() {
                        hits += 1;
                    }
                }
                if hits != 1 {
                    check.failures.push(RestrictionFailure { from: big.subgroup.clone(), to: small.subgroup.clone(), class: ci });
                }
            }
        }
    }
    Ok(check)
}
