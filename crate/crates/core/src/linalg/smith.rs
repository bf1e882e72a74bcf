//! Smith normal form over the integers and what falls out of it: integer
//! solving, kernel lattices and cokernel structure.
//!
//! The pivot is always an entry of smallest nonzero absolute value in the
//! active submatrix. Transform matrices (and their inverses) are tracked only
//! when a caller asks for them, since the bar-complex matrices can have a few
//! hundred rows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ... | d_rank`, all nonnegative, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `d_1, ..., d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.d.rows(), self.d.cols())
    }
}

/// Finitely generated abelian group `Z^free_rank + sum Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub torsion: Vec<BigInt>,
}

fn serialize_factors<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match num_traits::ToPrimitive::to_i64(x) {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure { free_rank: 0, torsion: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn divisibility_holds(&self) -> bool {
        self.torsion.iter().all(|t| *t >= BigInt::from(2))
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const NONE: Track = Track { u: false, u_inv: false, v: false, v_inv: false };
    pub const ALL: Track = Track { u: true, u_inv: true, v: true, v_inv: true };
}

/// Raw result of an elimination run; transforms present only if tracked.
pub(crate) struct SmithWork {
    pub d: Vec<Vec<BigInt>>,
    pub u: Option<Vec<Vec<BigInt>>>,
    pub u_inv: Option<Vec<Vec<BigInt>>>,
    pub v: Option<Vec<Vec<BigInt>>>,
    pub v_inv: Option<Vec<Vec<BigInt>>>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

impl SmithWork {
    pub fn diag(&self, i: usize) -> &BigInt {
        &self.d[i][i]
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }

    fn take(m: Option<Vec<Vec<BigInt>>>, n: usize) -> IntMatrix {
        IntMatrix::from_row_vecs(m.expect("transform was not tracked"), n)
    }

    pub fn u(&self) -> IntMatrix {
        Self::take(self.u.clone(), self.rows)
    }

    pub fn u_inv(&self) -> IntMatrix {
        Self::take(self.u_inv.clone(), self.rows)
    }

    pub fn v(&self) -> IntMatrix {
        Self::take(self.v.clone(), self.cols)
    }

    pub fn v_inv(&self) -> IntMatrix {
        Self::take(self.v_inv.clone(), self.cols)
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Eliminator {
    a: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
    u: Option<Vec<Vec<BigInt>>>,
    u_inv: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    v_inv: Option<Vec<Vec<BigInt>>>,
}

impl Eliminator {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(i, j);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt, from_col: usize) {
        if q.is_zero() {
            return;
        }
        let (d, s) = pair_mut(&mut self.a, dst, src);
        for j in from_col..self.n {
            if !s[j].is_zero() {
                d[j] += q * &s[j];
            }
        }
        if let Some(u) = &mut self.u {
            let (d, s) = pair_mut(u, dst, src);
            for (x, y) in d.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
        if let Some(ui) = &mut self.u_inv {
            // U^{-1} <- U^{-1} (I - q e_dst e_src^T): col_src -= q col_dst
            for row in ui.iter_mut() {
                if !row[dst].is_zero() {
                    let t = q * &row[dst];
                    row[src] -= t;
                }
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt, from_row: usize) {
        if q.is_zero() {
            return;
        }
        for row in self.a[from_row..].iter_mut() {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[src].is_zero() {
                    let t = q * &row[src];
                    row[dst] += t;
                }
            }
        }
        if let Some(vi) = &mut self.v_inv {
            // V^{-1} <- (I - q e_src e_dst^T) V^{-1}: row_src -= q row_dst
            let (s, d) = pair_mut(vi, src, dst);
            for (x, y) in s.iter_mut().zip(d.iter()) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }

    /// Smallest nonzero |a_ij| over i >= k, j >= k; stops early on a unit.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in k..self.m {
            for j in k..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if ax.is_one() {
                    return Some((i, j));
                }
                if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(mut self) -> SmithWork {
        let mut k = 0;
        while k < self.m.min(self.n) {
            let Some((pi, pj)) = self.find_pivot(k) else { break };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let mut clean = true;
                for i in k + 1..self.m {
                    if self.a[i][k].is_zero() {
                        continue;
                    }
                    let q = self.a[i][k].div_floor(&self.a[k][k]);
                    self.add_row(i, k, &-q, k);
                    if !self.a[i][k].is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..self.n {
                    if self.a[k][j].is_zero() {
                        continue;
                    }
                    let q = self.a[k][j].div_floor(&self.a[k][k]);
                    self.add_col(j, k, &-q, k);
                    if !self.a[k][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // move the smallest remainder in row/column k onto the pivot
                    let mut best = (k, k, self.a[k][k].abs());
                    for i in k + 1..self.m {
                        let x = self.a[i][k].abs();
                        if !x.is_zero() && x < best.2 {
                            best = (i, k, x);
                        }
                    }
                    for j in k + 1..self.n {
                        let x = self.a[k][j].abs();
                        if !x.is_zero() && x < best.2 {
                            best = (k, j, x);
                        }
                    }
                    self.swap_rows(k, best.0);
                    self.swap_cols(k, best.1);
                    continue;
                }
                let pivot = self.a[k][k].clone();
                let offender = (k + 1..self.m).find(|&i| {
                    (k + 1..self.n).any(|j| !(&self.a[i][j] % &pivot).is_zero())
                });
                match offender {
                    Some(i) => self.add_row(k, i, &BigInt::one(), k),
                    None => break,
                }
            }
            if self.a[k][k].is_negative() {
                self.negate_row(k);
            }
            k += 1;
        }
        SmithWork {
            d: self.a,
            u: self.u,
            u_inv: self.u_inv,
            v: self.v,
            v_inv: self.v_inv,
            rank: k,
            rows: self.m,
            cols: self.n,
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

pub(crate) fn smith_with(a: &IntMatrix, track: Track) -> SmithWork {
    let (m, n) = (a.rows(), a.cols());
    Eliminator {
        a: a.to_rows(),
        m,
        n,
        u: track.u.then(|| identity_rows(m)),
        u_inv: track.u_inv.then(|| identity_rows(m)),
        v: track.v.then(|| identity_rows(n)),
        v_inv: track.v_inv.then(|| identity_rows(n)),
    }
    .run()
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let w = smith_with(a, Track { u: true, v: true, ..Track::NONE });
    SmithDecomposition {
        u: w.u(),
        v: w.v(),
        d: IntMatrix::from_row_vecs(w.d, a.cols()),
        rank: w.rank,
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_with(a, Track::NONE).rank
}

/// Some integer `x` with `A x = b`, or `None` if there is no integral
/// solution.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let w = smith_with(a, Track { u: true, v: true, ..Track::NONE });
    let ub = w.u().mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < w.rank {
            let (q, r) = c.div_rem(w.diag(i));
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Ok(None);
        }
    }
    let x = w.v().mul_vec(&y)?;
    if a.mul_vec(&x)? != b {
        return Err(Error::Internal("integer solve failed substitution check".into()));
    }
    Ok(Some(x))
}

/// Z-basis of `{x : A x = 0}` as the columns of the result.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    kernel_with_coordinates(a).0
}

/// Kernel basis `K` together with an integer left inverse `L` (`L K = I`),
/// which expresses kernel vectors in `K`-coordinates.
pub fn kernel_with_coordinates(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let w = smith_with(a, Track { v: true, v_inv: true, ..Track::NONE });
    let n = a.cols();
    let k = w.v().column_slice(w.rank..n);
    let l = w.v_inv().row_slice(w.rank..n);
    (k, l)
}

/// Structure of `Z^rows / image(A)`.
pub fn cokernel_structure(a: &IntMatrix) -> AbelianGroupStructure {
    let w = smith_with(a, Track::NONE);
    let torsion = w
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    AbelianGroupStructure { free_rank: a.rows() - w.rank, torsion }
}
