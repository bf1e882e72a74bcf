//! Normalized twisted cochains on a finite group.
//!
//! An `n`-cochain assigns a vector to every `n`-tuple of non-identity
//! elements; tuples containing the identity evaluate to zero. Values live in
//! `Z^d`, `Q^d` or `(Q/Z)^d`, twisted by an integral representation.
//!
//! The coboundary in degree `n >= 1` is the bar differential
//!
//! ```text
//! (df)(g1..g{n+1}) = g1·f(g2..) + Σ_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g1..gn)
//! ```
//!
//! and in degree 0 it is `(dt)(g) = t - g·t`, which makes degree-1
//! coboundaries exactly the shifts produced by conjugating with a torus
//! element.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, Serializer};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, FiniteHom};
use crate::linalg::smith::{smith_with, SmithWork, Track};
use crate::linalg::{
    cokernel_structure, frac, is_integral, kernel_lattice, kernel_with_coordinates, rank, solve_integer,
    AbelianGroupStructure, IntMatrix, Rational,
};
use crate::toral::ToralGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Lattice,
    Vector,
    Torus,
}

/// A homomorphism `G -> GL_d(Z)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    rank: usize,
    matrices: Vec<IntMatrix>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(|G| = {}, d = {})", self.group.order(), self.rank)
    }
}

impl Representation {
    pub fn new(group: Arc<FiniteGroup>, rank: usize, matrices: Vec<IntMatrix>) -> Result<Self> {
        if matrices.len() != group.order() || matrices.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(Error::DimensionMismatch("one d x d matrix per group element expected".into()));
        }
        if let Some(p) = matrices.iter().position(|m| !m.is_unimodular()) {
            return Err(Error::ActionNotUnimodular(p));
        }
        if matrices[0] != IntMatrix::identity(rank) {
            return Err(Error::ActionNotHomomorphism { p: 0, q: 0 });
        }
        for p in group.elements() {
            for q in group.elements() {
                if matrices[p].mul(&matrices[q])? != matrices[group.mul(p, q)] {
                    return Err(Error::ActionNotHomomorphism { p, q });
                }
            }
        }
        Ok(Representation { group, rank, matrices })
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let matrices = vec![IntMatrix::identity(rank); group.order()];
        Representation { group, rank, matrices }
    }

    /// `α ∘ γ` for a toral group `H` and `γ: G -> π`.
    pub fn pullback(h: &ToralGroup, gamma: &FiniteHom) -> Self {
        let matrices = gamma.images.iter().map(|&p| h.action(p).clone()).collect();
        Representation { group: gamma.source.clone(), rank: h.rank(), matrices }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.matrices[g]
    }

    pub fn act(&self, g: usize, v: &[Rational]) -> Vec<Rational> {
        self.matrices[g].mul_rational_vec(v).expect("representation dimension")
    }

    pub fn is_trivial(&self) -> bool {
        let id = IntMatrix::identity(self.rank);
        self.matrices.iter().all(|m| *m == id)
    }
}

/// Iterates over all `n`-tuples of non-identity elements in storage order
/// (first entry most significant).
pub fn nonidentity_tuples(order: usize, n: usize) -> Vec<Vec<usize>> {
    let m = order.saturating_sub(1);
    let count = m.pow(n as u32);
    (0..count)
        .map(|mut idx| {
            let mut t = vec![0; n];
            for slot in t.iter_mut().rev() {
                *slot = idx % m + 1;
                idx /= m;
            }
            t
        })
        .collect()
}

fn tuple_index(order: usize, tuple: &[usize]) -> Option<usize> {
    let m = order - 1;
    let mut idx = 0;
    for &g in tuple {
        if g == 0 {
            return None;
        }
        idx = idx * m + (g - 1);
    }
    Some(idx)
}

/// Number of stored values in a normalized `n`-cochain.
pub fn cochain_len(order: usize, n: usize, d: usize) -> usize {
    (order - 1).pow(n as u32) * d
}

#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    kind: Coefficients,
    rep: Arc<Representation>,
    values: Vec<Rational>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(degree {}, {:?}, {:?})", self.degree, self.kind, self.to_map())
    }
}

fn normalize(kind: Coefficients, q: Rational) -> Result<Rational> {
    match kind {
        Coefficients::Torus => Ok(frac(&q)),
        Coefficients::Lattice if !is_integral(&q) => {
            Err(Error::WrongCoefficients(format!("non-integral value {q} in a lattice cochain")))
        }
        _ => Ok(q),
    }
}

impl Cochain {
    pub fn zero(rep: Arc<Representation>, degree: usize, kind: Coefficients) -> Self {
        let len = cochain_len(rep.group.order(), degree, rep.rank);
        Cochain { degree, kind, rep, values: vec![Rational::zero(); len] }
    }

    /// Builds a cochain from its flat value array (storage order, `d`
    /// coordinates per tuple). Torus values are reduced mod 1.
    pub fn from_values(rep: Arc<Representation>, degree: usize, kind: Coefficients, values: Vec<Rational>) -> Result<Self> {
        let len = cochain_len(rep.group.order(), degree, rep.rank);
        if values.len() != len {
            return Err(Error::DimensionMismatch(format!("{} values for a cochain of size {len}", values.len())));
        }
        let values = values.into_iter().map(|q| normalize(kind, q)).collect::<Result<_>>()?;
        Ok(Cochain { degree, kind, rep, values })
    }

    /// Builds a cochain by evaluating `f` on every non-identity tuple.
    pub fn from_fn(
        rep: Arc<Representation>,
        degree: usize,
        kind: Coefficients,
        mut f: impl FnMut(&[usize]) -> Vec<Rational>,
    ) -> Result<Self> {
        let d = rep.rank;
        let mut values = Vec::with_capacity(cochain_len(rep.group.order(), degree, d));
        for t in nonidentity_tuples(rep.group.order(), degree) {
            let v = f(&t);
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!("value of length {} at {t:?}, expected {d}", v.len())));
            }
            values.extend(v);
        }
        Self::from_values(rep, degree, kind, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> Coefficients {
        self.kind
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Value at a tuple; zero when the tuple contains the identity.
    pub fn value(&self, tuple: &[usize]) -> Vec<Rational> {
        assert_eq!(tuple.len(), self.degree, "tuple length must equal the degree");
        let d = self.rep.rank;
        match tuple_index(self.rep.group.order(), tuple) {
            Some(i) => self.values[i * d..(i + 1) * d].to_vec(),
            None => vec![Rational::zero(); d],
        }
    }

    /// Degree-1 value at `g`, zero at the identity.
    pub fn value_or_zero(&self, g: usize) -> Vec<Rational> {
        if g == 0 {
            vec![Rational::zero(); self.rep.rank]
        } else {
            self.value(&[g])
        }
    }

    /// Same values, different coefficient kind (values reduced as needed).
    pub fn with_kind(&self, kind: Coefficients) -> Result<Cochain> {
        Self::from_values(self.rep.clone(), self.degree, kind, self.values.clone())
    }

    fn combine(&self, other: &Cochain, sign: i64) -> Result<Cochain> {
        if self.degree != other.degree || self.rep != other.rep {
            return Err(Error::SignatureMismatch);
        }
        let s = Rational::from_integer(sign.into());
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b * &s).collect();
        Self::from_values(self.rep.clone(), self.degree, self.kind, values)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, -1)
    }

    pub fn scale(&self, k: &Rational) -> Result<Cochain> {
        Self::from_values(self.rep.clone(), self.degree, self.kind, self.values.iter().map(|x| x * k).collect())
    }

    pub fn coboundary(&self) -> Cochain {
        let g = self.rep.group.clone();
        let n = self.degree;
        let d = self.rep.rank;
        let mut values = Vec::with_capacity(cochain_len(g.order(), n + 1, d));
        for t in nonidentity_tuples(g.order(), n + 1) {
            let mut acc: Vec<Rational> = if n == 0 {
                let s = self.value(&[]);
                let moved = self.rep.act(t[0], &s);
                s.iter().zip(&moved).map(|(a, b)| a - b).collect()
            } else {
                self.rep.act(t[0], &self.value(&t[1..]))
            };
            if n > 0 {
                for i in 1..=n {
                    let mut merged = Vec::with_capacity(n);
                    merged.extend_from_slice(&t[..i - 1]);
                    merged.push(g.mul(t[i - 1], t[i]));
                    merged.extend_from_slice(&t[i + 1..]);
                    let v = self.value(&merged);
                    for (a, b) in acc.iter_mut().zip(&v) {
                        if i % 2 == 1 {
                            *a -= b;
                        } else {
                            *a += b;
                        }
                    }
                }
                let last = self.value(&t[..n]);
                for (a, b) in acc.iter_mut().zip(&last) {
                    if (n + 1) % 2 == 1 {
                        *a -= b;
                    } else {
                        *a += b;
                    }
                }
            }
            values.extend(acc);
        }
        Cochain::from_values(self.rep.clone(), n + 1, self.kind, values).expect("coboundary stays in its coefficient kind")
    }

    /// A tuple where the coboundary is nonzero, if any.
    pub fn cocycle_witness(&self) -> Option<Vec<usize>> {
        let dc = self.coboundary();
        let d = self.rep.rank.max(1);
        let bad = dc.values.iter().position(|x| !x.is_zero())?;
        nonidentity_tuples(self.rep.group.order(), self.degree + 1).into_iter().nth(bad / d)
    }

    pub fn is_cocycle(&self) -> bool {
        self.rep.rank == 0 || self.cocycle_witness().is_none()
    }

    /// `{ "(g1,g2)": ["num/den", ...], ... }`
    pub fn to_map(&self) -> BTreeMap<String, Vec<String>> {
        let d = self.rep.rank;
        nonidentity_tuples(self.rep.group.order(), self.degree)
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                let key = format!("({})", t.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
                (key, crate::linalg::format_vector(&self.values[i * d..(i + 1) * d]))
            })
            .collect()
    }
}

impl Serialize for Cochain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

/// Integer matrix of the coboundary `C^n -> C^{n+1}` in storage coordinates.
pub fn coboundary_matrix(rep: &Representation, n: usize) -> IntMatrix {
    let order = rep.group.order();
    let d = rep.rank;
    let rows = cochain_len(order, n + 1, d);
    let cols = cochain_len(order, n, d);
    let mut m = IntMatrix::zeros(rows, cols);
    let add_block = |m: &mut IntMatrix, row_tuple: usize, col_tuple: Option<usize>, block: &IntMatrix, sign: i64| {
        if let Some(c) = col_tuple {
            for i in 0..d {
                for j in 0..d {
                    let x = block.get(i, j);
                    if !x.is_zero() {
                        m.add_to(row_tuple * d + i, c * d + j, &(x * sign));
                    }
                }
            }
        }
    };
    let id = IntMatrix::identity(d);
    for (r, t) in nonidentity_tuples(order, n + 1).iter().enumerate() {
        if n == 0 {
            add_block(&mut m, r, Some(0), &id, 1);
            add_block(&mut m, r, Some(0), rep.matrix(t[0]), -1);
            continue;
        }
        add_block(&mut m, r, tuple_index(order, &t[1..]), rep.matrix(t[0]), 1);
        for i in 1..=n {
            let mut merged = Vec::with_capacity(n);
            merged.extend_from_slice(&t[..i - 1]);
            merged.push(rep.group.mul(t[i - 1], t[i]));
            merged.extend_from_slice(&t[i + 1..]);
            add_block(&mut m, r, tuple_index(order, &merged), &id, if i % 2 == 1 { -1 } else { 1 });
        }
        add_block(&mut m, r, tuple_index(order, &t[..n]), &id, if (n + 1) % 2 == 1 { -1 } else { 1 });
    }
    m
}

fn check_size(rep: &Representation, degree: usize, limits: &Limits) -> Result<()> {
    let order = rep.group.order();
    if order > limits.cochain_group_order {
        return Err(Error::size_limit("group order for cochain complexes", order as u128, limits.cochain_group_order as u128));
    }
    if degree > limits.max_cohomology_degree {
        return Err(Error::size_limit("cohomological degree", degree as u128, limits.max_cohomology_degree as u128));
    }
    Ok(())
}

/// `Hν(g) = (1/|G|) Σ_x x^{-1}·ν(x, g)`, defined for vector coefficients.
pub fn contracting_homotopy(nu: &Cochain) -> Result<Cochain> {
    if nu.kind != Coefficients::Vector {
        return Err(Error::WrongCoefficients(format!("averaging needs vector coefficients, got {:?}", nu.kind)));
    }
    if nu.degree != 2 {
        return Err(Error::WrongCoefficients(format!("averaging is defined on 2-cochains, got degree {}", nu.degree)));
    }
    let g = nu.rep.group.clone();
    let d = nu.rep.rank;
    let n = Rational::from_integer(BigInt::from(g.order()));
    Cochain::from_fn(nu.rep.clone(), 1, Coefficients::Vector, |t| {
        let mut acc = vec![Rational::zero(); d];
        for x in 1..g.order() {
            let v = nu.rep.act(g.inv(x), &nu.value(&[x, t[0]]));
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
        acc.into_iter().map(|a| a / &n).collect()
    })
}

/// `H^n(G, Z^d)` for the normalized bar complex.
pub fn cohomology_lattice(rep: &Representation, n: usize, limits: &Limits) -> Result<AbelianGroupStructure> {
    check_size(rep, n, limits)?;
    let dn = coboundary_matrix(rep, n);
    if n == 0 {
        return Ok(AbelianGroupStructure { free_rank: dn.cols() - rank(&dn), torsion: vec![] });
    }
    let (k, l) = kernel_with_coordinates(&dn);
    if k.cols() == 0 {
        return Ok(AbelianGroupStructure::trivial());
    }
    let prev = coboundary_matrix(rep, n - 1);
    Ok(cokernel_structure(&l.mul(&prev)?))
}

fn lift_to_unit_interval(c: &Cochain) -> Cochain {
    Cochain { degree: c.degree, kind: Coefficients::Vector, rep: c.rep.clone(), values: c.values.iter().map(frac).collect() }
}

/// Decides whether a torus 2-cocycle is a coboundary and, if so, returns a
/// torus 1-cochain `μ` with `dμ = ν`.
pub fn torus_class_vanishes(nu: &Cochain) -> Result<Option<Cochain>> {
    if nu.kind != Coefficients::Torus || nu.degree != 2 {
        return Err(Error::WrongCoefficients("expected a torus 2-cochain".into()));
    }
    torus_class_vanishes_with_lift(nu, &lift_to_unit_interval(nu))
}

/// As [`torus_class_vanishes`], with an explicit rational lift of `ν`.
pub fn torus_class_vanishes_with_lift(nu: &Cochain, lift: &Cochain) -> Result<Option<Cochain>> {
    if nu.kind != Coefficients::Torus || nu.degree != 2 || lift.kind != Coefficients::Vector || lift.degree != 2 {
        return Err(Error::WrongCoefficients("expected a torus 2-cochain and a vector lift".into()));
    }
    if lift.with_kind(Coefficients::Torus)? != *nu {
        return Err(Error::WrongCoefficients("lift does not reduce to the given cochain".into()));
    }
    if nu.rep.rank == 0 {
        return Ok(Some(Cochain::zero(nu.rep.clone(), 1, Coefficients::Torus)));
    }
    if let Some(witness) = nu.cocycle_witness() {
        return Err(Error::NotACocycle { witness });
    }
    let omega = lift.coboundary();
    if !omega.values.iter().all(is_integral) {
        return Err(Error::ObstructionSolverFailure("coboundary of the lift is not integral".into()));
    }
    let omega_int: Vec<BigInt> = omega.values.iter().map(|q| q.to_integer()).collect();
    let d2 = coboundary_matrix(&nu.rep, 2);
    let Some(lambda) = solve_integer(&d2, &omega_int)? else {
        return Ok(None);
    };
    let corrected: Vec<Rational> =
        lift.values.iter().zip(&lambda).map(|(a, b)| a - Rational::from_integer(b.clone())).collect();
    let corrected = Cochain::from_values(nu.rep.clone(), 2, Coefficients::Vector, corrected)?;
    let mu = contracting_homotopy(&corrected)?.with_kind(Coefficients::Torus)?;
    if mu.coboundary() != *nu {
        return Err(Error::ObstructionSolverFailure("averaged cochain does not cobound".into()));
    }
    Ok(Some(mu))
}

/// Structure of the torus 1-cocycles `Z^1(G, T)`.
#[derive(Clone, Debug)]
pub struct Z1Structure {
    /// Dimension of the identity component of `Z^1(G, T)`, which is the
    /// space of coboundaries.
    pub torus_rank: usize,
    /// `H^1(G, T)`, computed as `H^2(G, Z^d)`.
    pub h1: AbelianGroupStructure,
    /// One torus 1-cocycle per class of `H^1(G, T)`, the zero class first.
    pub classes: Vec<Cochain>,
}

/// `Z^1(G, T)` up to coboundaries, through the isomorphism
/// `H^1(G, T) -> H^2(G, Z^d)` whose inverse sends an integral cocycle `ω` to
/// `Hω mod Z^d`.
pub fn z1_torus_structure(rep: &Arc<Representation>, limits: &Limits) -> Result<Z1Structure> {
    check_size(rep, 2, limits)?;
    let zero = Cochain::zero(rep.clone(), 1, Coefficients::Torus);
    if rep.rank == 0 || rep.group.order() == 1 {
        return Ok(Z1Structure { torus_rank: 0, h1: AbelianGroupStructure::trivial(), classes: vec![zero] });
    }
    let torus_rank = rank(&coboundary_matrix(rep, 0));
    let d1 = coboundary_matrix(rep, 1);
    let d2 = coboundary_matrix(rep, 2);
    let (k, l) = kernel_with_coordinates(&d2);
    let x = l.mul(&d1)?;
    let w = smith_with(&x, Track { u_inv: true, ..Track::NONE });
    if w.rank < x.rows() {
        return Err(Error::ObstructionSolverFailure("H^2(G, Z^d) has a free part".into()));
    }
    let u_inv = w.u_inv();
    let gens: Vec<(Vec<BigInt>, BigInt)> = (0..w.rank)
        .filter(|&i| !w.diag(i).is_one())
        .map(|i| (k.mul_vec(&u_inv.column(i)).expect("kernel coordinates"), w.diag(i).clone()))
        .collect();
    let h1 = AbelianGroupStructure { free_rank: 0, torsion: gens.iter().map(|(_, e)| e.clone()).collect() };

    let total: usize = gens.iter().map(|(_, e)| usize::try_from(e).unwrap_or(usize::MAX)).product();
    if total as u128 > limits.oracle_states {
        return Err(Error::size_limit("|H^1(G, T)|", total as u128, limits.oracle_states));
    }
    let mut classes = Vec::with_capacity(total);
    let mut digits = vec![BigInt::zero(); gens.len()];
    loop {
        let mut omega = vec![Rational::zero(); k.rows()];
        for ((g, _), a) in gens.iter().zip(&digits) {
            for (o, x) in omega.iter_mut().zip(g) {
                *o += Rational::from_integer(x * a);
            }
        }
        let omega = Cochain::from_values(rep.clone(), 2, Coefficients::Vector, omega)?;
        let z = contracting_homotopy(&omega)?.with_kind(Coefficients::Torus)?;
        if !z.is_cocycle() {
            return Err(Error::ObstructionSolverFailure("H^1 representative is not a cocycle".into()));
        }
        classes.push(z);
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(Z1Structure { torus_rank, h1, classes });
            }
            digits[i] += 1;
            if digits[i] < gens[i].1 {
                break;
            }
            digits[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Exact solver for `d^0 s ≡ w (mod Z^{(|G|-1)d})`, based on the Smith form
/// `U D0 V = diag(e_1, .., e_r)` of the degree-0 coboundary matrix.
pub struct DegreeZeroSolver {
    rep: Arc<Representation>,
    work: SmithWork,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl DegreeZeroSolver {
    pub fn new(rep: Arc<Representation>) -> Self {
        let d0 = coboundary_matrix(&rep, 0);
        let work = smith_with(&d0, Track::ALL);
        let (u, u_inv, v, v_inv) = (work.u(), work.u_inv(), work.v(), work.v_inv());
        DegreeZeroSolver { rep, work, u, u_inv, v, v_inv }
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    /// Rank of the degree-0 coboundary, the dimension of torus-conjugation
    /// orbits.
    pub fn rank(&self) -> usize {
        self.work.rank
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.work.invariant_factors()
    }

    pub fn v(&self) -> &IntMatrix {
        &self.v
    }

    pub fn v_inv(&self) -> &IntMatrix {
        &self.v_inv
    }

    fn transformed(&self, w: &[Rational]) -> Vec<Rational> {
        self.u.mul_rational_vec(w).expect("cochain dimension")
    }

    /// Some `s in Q^d` with `d^0 s ≡ w mod Z`, or `None`.
    pub fn solve(&self, w: &[Rational]) -> Option<Vec<Rational>> {
        let y = self.transformed(w);
        let r = self.work.rank;
        if !y[r..].iter().all(is_integral) {
            return None;
        }
        let x: Vec<Rational> = (0..self.rep.rank)
            .map(|i| if i < r { &y[i] / Rational::from_integer(self.work.diag(i).clone()) } else { Rational::zero() })
            .collect();
        Some(self.v.mul_rational_vec(&x).expect("dimension"))
    }

    /// A normal form for `w` modulo `B^1 + Z`: two cochains have equal
    /// normal forms iff they differ by a torus-conjugation shift.
    pub fn canonical(&self, w: &[Rational]) -> Vec<Rational> {
        let mut y = self.transformed(w);
        for (i, q) in y.iter_mut().enumerate() {
            *q = if i < self.work.rank { Rational::zero() } else { frac(q) };
        }
        self.u_inv.mul_rational_vec(&y).expect("dimension").iter().map(frac).collect()
    }

    /// Lattice of `s in Z^d` with `d^0 s = 0`, i.e. the fixed sublattice.
    pub fn fixed_lattice(&self) -> IntMatrix {
        self.v.column_slice(self.work.rank..self.rep.rank)
    }
}

/// `Z`-basis of the sublattice fixed by every matrix of `rep`.
pub fn fixed_sublattice(rep: &Representation) -> IntMatrix {
    kernel_lattice(&coboundary_matrix(rep, 0))
}

/// Torus-valued `γ*c`: `(g1, g2) -> c(γ g1, γ g2)`.
pub fn pulled_back_cocycle(h: &ToralGroup, gamma: &FiniteHom, rep: &Arc<Representation>) -> Cochain {
    Cochain::from_fn(rep.clone(), 2, Coefficients::Torus, |t| {
        h.c(gamma.apply(t[0]), gamma.apply(t[1])).coords().to_vec()
    })
    .expect("cocycle dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::toral::toral_catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn sign_rep(g: Arc<FiniteGroup>) -> Arc<Representation> {
        let m = |x: i64| IntMatrix::from_rows(&[vec![x]]).unwrap();
        Arc::new(Representation::new(g, 1, vec![m(1), m(-1)]).unwrap())
    }

    fn random_cochain(rng: &mut ChaCha8Rng, rep: &Arc<Representation>, n: usize, kind: Coefficients) -> Cochain {
        let len = cochain_len(rep.group().order(), n, rep.rank());
        let values = (0..len)
            .map(|_| match kind {
                Coefficients::Lattice => int(rng.gen_range(-5..=5)),
                _ => rat(rng.gen_range(-20..=20), rng.gen_range(1..=8)),
            })
            .collect();
        Cochain::from_values(rep.clone(), n, kind, values).unwrap()
    }

    #[test]
    fn degree_zero_on_inversion() {
        let rep = sign_rep(z2());
        let t = Cochain::from_values(rep, 0, Coefficients::Vector, vec![rat(1, 3)]).unwrap();
        assert_eq!(t.coboundary().value(&[1]), vec![rat(2, 3)]);
    }

    #[test]
    fn degree_one_constant_trivial_action() {
        let rep = Arc::new(Representation::trivial(z2(), 1));
        let mu = Cochain::from_values(rep, 1, Coefficients::Vector, vec![rat(2, 7)]).unwrap();
        assert_eq!(mu.coboundary().value(&[1, 1]), vec![rat(4, 7)]);
    }

    #[test]
    fn d_squared_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let swap = crate::toral::toral_catalog("T2swap").unwrap();
        let sign = crate::group::enumerate_finite_homs(&s3, swap.pi(), &Limits::default()).unwrap()[1].clone();
        let reps = [
            Arc::new(Representation::trivial(Arc::new(FiniteGroup::cyclic(3)), 2)),
            sign_rep(z2()),
            Arc::new(Representation::pullback(&swap, &sign)),
        ];
        for rep in &reps {
            for kind in [Coefficients::Lattice, Coefficients::Vector, Coefficients::Torus] {
                for n in 0..=2 {
                    let c = random_cochain(&mut rng, rep, n, kind);
                    assert!(c.coboundary().coboundary().is_zero(), "{rep:?} {kind:?} {n}");
                    let via_matrix = coboundary_matrix(rep, n).mul_rational_vec(c.values()).unwrap();
                    let direct = c.coboundary();
                    let expected = Cochain::from_values(rep.clone(), n + 1, kind, via_matrix).unwrap();
                    assert_eq!(direct, expected);
                }
            }
        }
    }

    #[test]
    fn homotopy_inverts_coboundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = sign_rep(z2());
        for _ in 0..20 {
            let mu = random_cochain(&mut rng, &rep, 1, Coefficients::Vector);
            let nu = mu.coboundary();
            assert_eq!(contracting_homotopy(&nu).unwrap().coboundary(), nu);
        }
        let triv = Arc::new(Representation::trivial(z2(), 1));
        let nu = Cochain::from_values(triv, 2, Coefficients::Vector, vec![rat(3, 5)]).unwrap();
        let h = contracting_homotopy(&nu).unwrap();
        assert_eq!(h.value(&[1]), vec![rat(3, 10)]);
        assert_eq!(h.coboundary(), nu);
        assert!(matches!(contracting_homotopy(&nu.with_kind(Coefficients::Torus).unwrap()), Err(Error::WrongCoefficients(_))));
    }

    #[test]
    fn cohomology_small_cases() {
        let lim = Limits::default();
        let triv = Representation::trivial(z2(), 1);
        assert!(cohomology_lattice(&triv, 1, &lim).unwrap().is_trivial());
        assert_eq!(cohomology_lattice(&triv, 2, &lim).unwrap().torsion, vec![BigInt::from(2)]);
        assert_eq!(cohomology_lattice(&triv, 0, &lim).unwrap().free_rank, 1);
        let sign = sign_rep(z2());
        assert_eq!(cohomology_lattice(&sign, 1, &lim).unwrap().torsion, vec![BigInt::from(2)]);
        assert!(cohomology_lattice(&sign, 2, &lim).unwrap().is_trivial());
        assert_eq!(cohomology_lattice(&sign, 0, &lim).unwrap().free_rank, 0);
        assert!(matches!(cohomology_lattice(&triv, 4, &lim), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn pin2_obstruction_does_not_vanish() {
        let h = toral_catalog("Pin2").unwrap();
        let gamma = FiniteHom::new(z2(), h.pi().clone(), vec![0, 1]).unwrap();
        let rep = Arc::new(Representation::pullback(&h, &gamma));
        let nu = pulled_back_cocycle(&h, &gamma, &rep);
        assert!(nu.is_cocycle());
        assert_eq!(torus_class_vanishes(&nu).unwrap(), None);
        // exhaustive: dμ(σ,σ) = μ(σ) - μ(e) - μ(σ) = 0 for every μ
        for a in 0..16 {
            let mu = Cochain::from_values(rep.clone(), 1, Coefficients::Torus, vec![rat(a, 16)]).unwrap();
            assert_ne!(mu.coboundary(), nu);
        }
    }

    #[test]
    fn half_class_vanishes_for_trivial_action() {
        let rep = Arc::new(Representation::trivial(z2(), 1));
        let nu = Cochain::from_values(rep, 2, Coefficients::Torus, vec![rat(1, 2)]).unwrap();
        let mu = torus_class_vanishes(&nu).unwrap().unwrap();
        assert_eq!(mu.coboundary(), nu);
        assert!(mu.value(&[1]) == vec![rat(1, 4)] || mu.value(&[1]) == vec![rat(3, 4)]);
    }

    #[test]
    fn vanishing_rejects_non_cocycles() {
        let rep = Arc::new(Representation::trivial(Arc::new(FiniteGroup::cyclic(3)), 1));
        let nu = Cochain::from_fn(rep, 2, Coefficients::Torus, |t| vec![if t == [1, 1] { rat(1, 7) } else { int(0) }]).unwrap();
        assert!(matches!(torus_class_vanishes(&nu), Err(Error::NotACocycle { .. })));
    }

    #[test]
    fn z1_examples() {
        let lim = Limits::default();
        let z = z1_torus_structure(&sign_rep(z2()), &lim).unwrap();
        assert_eq!((z.torus_rank, z.classes.len()), (1, 1));
        let triv = Arc::new(Representation::trivial(z2(), 1));
        let z = z1_torus_structure(&triv, &lim).unwrap();
        assert_eq!((z.torus_rank, z.classes.len()), (0, 2));
        let values: Vec<Vec<Rational>> = z.classes.iter().map(|c| c.value(&[1])).collect();
        assert_eq!(values, vec![vec![int(0)], vec![rat(1, 2)]]);
        let one = Arc::new(Representation::trivial(Arc::new(FiniteGroup::trivial()), 1));
        assert_eq!(z1_torus_structure(&one, &lim).unwrap().classes.len(), 1);
    }

    #[test]
    fn degree_zero_solver() {
        let rep = sign_rep(z2());
        let solver = DegreeZeroSolver::new(rep.clone());
        let s = solver.solve(&[rat(1, 4)]).unwrap();
        let ds = Cochain::from_values(rep.clone(), 0, Coefficients::Torus, s).unwrap().coboundary();
        assert_eq!(ds.value(&[1]), vec![rat(1, 4)]);
        assert_eq!(solver.canonical(&[rat(1, 4)]), vec![int(0)]);

        let triv = Arc::new(Representation::trivial(z2(), 1));
        let solver = DegreeZeroSolver::new(triv);
        assert!(solver.solve(&[rat(1, 2)]).is_none());
        assert!(solver.solve(&[int(0)]).is_some());
        assert_eq!(solver.canonical(&[rat(3, 2)]), vec![rat(1, 2)]);
        assert_eq!(solver.fixed_lattice().cols(), 1);
    }
}
