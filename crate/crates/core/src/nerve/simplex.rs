//! Simplices of the crossed-module nerve and their free coordinates.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::toral::{ToralElement, ToralGroup, VectorV};

/// An `n`-simplex of the nerve of the crossed module `(H, V)`: elements
/// `h_ij` for `i <= j` and vectors `v_ijk` for `i <= j <= k`, subject to
///
/// 1. `h_ii = e`, `v_iij = v_ijj = 0`;
/// 2. `h_ik = exp(v_ijk) h_ij h_jk`;
/// 3. `v_ikl + v_ijk = v_ijl + α(h_ij) v_jkl`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveSimplex {
    parent: Arc<ToralGroup>,
    level: usize,
    h: Vec<ToralElement>,
    v: Vec<VectorV>,
}

/// The free coordinates `h_0i` (`1 <= i <= n`) and `v_0ij` (`1 <= i < j <= n`,
/// lexicographic order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveCoordinates {
    pub level: usize,
    pub h0: Vec<ToralElement>,
    pub v0: Vec<VectorV>,
}

impl NerveCoordinates {
    pub fn zero(h: &ToralGroup, level: usize) -> Self {
        NerveCoordinates {
            level,
            h0: vec![h.identity(); level],
            v0: vec![vec![Rational::zero(); h.rank()]; level * level.saturating_sub(1) / 2],
        }
    }

    /// Position of `v_0ij` in `v0`.
    pub fn pair_index(level: usize, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i < j && j <= level);
        (1..i).map(|a| level - a).sum::<usize>() + (j - i - 1)
    }
}

/// Which of the three nerve identities failed, with the indices involved.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityFailure {
    pub identity: u8,
    pub indices: Vec<usize>,
}

impl NerveSimplex {
    /// Builds a simplex from closures over index pairs and triples, without
    /// checking the identities.
    pub fn from_fn(
        parent: Arc<ToralGroup>,
        level: usize,
        mut h: impl FnMut(usize, usize) -> ToralElement,
        mut v: impl FnMut(usize, usize, usize) -> VectorV,
    ) -> Self {
        let m = level + 1;
        let mut hs = Vec::with_capacity(m * m);
        let mut vs = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                hs.push(if i <= j { h(i, j) } else { parent.identity() });
            }
        }
        let zero = vec![Rational::zero(); parent.rank()];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    vs.push(if i <= j && j <= k { v(i, j, k) } else { zero.clone() });
                }
            }
        }
        NerveSimplex { parent, level, h: hs, v: vs }
    }

    pub fn parent(&self) -> &Arc<ToralGroup> {
        &self.parent
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn h(&self, i: usize, j: usize) -> &ToralElement {
        assert!(i <= j && j <= self.level, "h index ({i}, {j}) out of range");
        &self.h[i * (self.level + 1) + j]
    }

    pub fn v(&self, i: usize, j: usize, k: usize) -> &VectorV {
        assert!(i <= j && j <= k && k <= self.level, "v index ({i}, {j}, {k}) out of range");
        let m = self.level + 1;
        &self.v[(i * m + j) * m + k]
    }

    /// Replaces one `v_ijk`, for building perturbed test data.
    pub fn set_v(&mut self, i: usize, j: usize, k: usize, value: VectorV) {
        assert!(i <= j && j <= k && k <= self.level);
        let m = self.level + 1;
        self.v[(i * m + j) * m + k] = value;
    }

    pub fn set_h(&mut self, i: usize, j: usize, value: ToralElement) {
        assert!(i <= j && j <= self.level);
        self.h[i * (self.level + 1) + j] = value;
    }

    /// The first failing identity, if any.
    pub fn check(&self) -> Option<IdentityFailure> {
        let hg = &self.parent;
        let n = self.level;
        let zero = vec![Rational::zero(); hg.rank()];
        for i in 0..=n {
            if *self.h(i, i) != hg.identity() {
                return Some(IdentityFailure { identity: 1, indices: vec![i, i] });
            }
            for j in i..=n {
                if *self.v(i, i, j) != zero || *self.v(i, j, j) != zero {
                    return Some(IdentityFailure { identity: 1, indices: vec![i, j] });
                }
            }
        }
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    let rhs = hg.mul(&hg.mul(&hg.exp(self.v(i, j, k)), self.h(i, j)), self.h(j, k));
                    if *self.h(i, k) != rhs {
                        return Some(IdentityFailure { identity: 2, indices: vec![i, j, k] });
                    }
                }
            }
        }
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    for l in k..=n {
                        let moved = hg.act(self.h(i, j).component, self.v(j, k, l));
                        let lhs: VectorV = self.v(i, k, l).iter().zip(self.v(i, j, k)).map(|(a, b)| a + b).collect();
                        let rhs: VectorV = self.v(i, j, l).iter().zip(&moved).map(|(a, b)| a + b).collect();
                        if lhs != rhs {
                            return Some(IdentityFailure { identity: 3, indices: vec![i, j, k, l] });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_none()
    }

    /// Pulls the simplex back along a monotone map `[m] -> [n]` given by its
    /// values `delta[0..=m]`: `(δx)_ij = x_{δ(i) δ(j)}`.
    pub fn simplicial_operator(&self, delta: &[usize]) -> Result<NerveSimplex> {
        if delta.is_empty() || delta.windows(2).any(|w| w[0] > w[1]) || delta.iter().any(|&x| x > self.level) {
            return Err(Error::NotMonotone(delta.to_vec()));
        }
        Ok(NerveSimplex::from_fn(
            self.parent.clone(),
            delta.len() - 1,
            |i, j| self.h(delta[i], delta[j]).clone(),
            |i, j, k| self.v(delta[i], delta[j], delta[k]).clone(),
        ))
    }

    /// `d_i`, omitting vertex `i`.
    pub fn face(&self, i: usize) -> NerveSimplex {
        assert!(self.level >= 1 && i <= self.level);
        let delta: Vec<usize> = (0..=self.level).filter(|&x| x != i).collect();
        self.simplicial_operator(&delta).expect("face map is monotone")
    }

    /// `s_i`, repeating vertex `i`.
    pub fn degeneracy(&self, i: usize) -> NerveSimplex {
        assert!(i <= self.level);
        let delta: Vec<usize> = (0..=self.level + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
        self.simplicial_operator(&delta).expect("degeneracy map is monotone")
    }

    pub fn coordinates(&self) -> NerveCoordinates {
        let n = self.level;
        let h0 = (1..=n).map(|i| self.h(0, i).clone()).collect();
        let v0 = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).map(|(i, j)| self.v(0, i, j).clone()).collect();
        NerveCoordinates { level: n, h0, v0 }
    }

    /// The unique simplex with the given coordinates, solving identity (2)
    /// for `h_ij` and identity (3) for `v_ijk`.
    pub fn from_coordinates(parent: Arc<ToralGroup>, c: &NerveCoordinates) -> Result<NerveSimplex> {
        let n = c.level;
        if c.h0.len() != n || c.v0.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch(format!("coordinate counts do not match level {n}")));
        }
        let d = parent.rank();
        if c.h0.iter().any(|x| !parent.contains(x)) {
            return Err(Error::ParentMismatch);
        }
        if c.v0.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!("coordinate vectors must have length {d}")));
        }
        let hg = parent.clone();
        let zero = vec![Rational::zero(); d];
        let h0 = |i: usize| if i == 0 { hg.identity() } else { c.h0[i - 1].clone() };
        let v0 = |i: usize, j: usize| -> VectorV {
            if i == 0 || i == j {
                zero.clone()
            } else {
                c.v0[NerveCoordinates::pair_index(n, i, j)].clone()
            }
        };
        Ok(NerveSimplex::from_fn(
            parent,
            n,
            |i, j| {
                if i == j {
                    hg.identity()
                } else {
                    let e = hg.inv(&hg.exp(&v0(i, j)));
                    hg.mul(&hg.mul(&hg.inv(&h0(i)), &e), &h0(j))
                }
            },
            |i, j, k| {
                if i == 0 {
                    return v0(j, k);
                }
                let sum: VectorV = v0(j, k).iter().zip(v0(i, j)).zip(v0(i, k)).map(|((a, b), c)| a + b - c).collect();
                hg.act(hg.pi().inv(h0(i).component), &sum)
            },
        ))
    }
}
