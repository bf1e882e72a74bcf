//! Matching maps `N_n -> M_n`: how far a simplex is determined by its faces.
//!
//! * `n = 1`: faces are points, every `h_01` fills.
//! * `n = 2`: fillers are the `v_012` with `exp(v_012) = h_02 h_12^{-1} h_01^{-1}`,
//!   a torsor under `ker(exp) = Z^d` when that element lies in the torus.
//! * `n = 3`: all data of a filler is already on the faces; it is a filler
//!   iff `v_023 + v_012 - α(h_01) v_123 - v_013 = 0`. For compatible faces
//!   this expression is always integral.
//! * `n >= 4`: the faces determine a unique filler.

use std::sync::Arc;

use num_traits::Zero;

use super::simplex::NerveSimplex;
use crate::error::{Error, Result};
use crate::linalg::{frac, IntMatrix, Rational};
use crate::toral::{ToralElement, ToralGroup, VectorV};

/// The faces `d_0 x, .., d_n x` of a simplex.
pub fn matching_tuple(s: &NerveSimplex) -> Vec<NerveSimplex> {
    assert!(s.level() >= 1, "matching tuples start at level 1");
    (0..=s.level()).map(|i| s.face(i)).collect()
}

/// Checks the matching condition `d_i x_j = d_{j-1} x_i` for `i < j`.
pub fn check_compatible(faces: &[NerveSimplex]) -> Result<()> {
    let n = faces.len().checked_sub(1).ok_or_else(|| Error::IncompatibleFaces("no faces".into()))?;
    if n == 0 {
        return Err(Error::IncompatibleFaces("a matching tuple needs at least two faces".into()));
    }
    if faces.iter().any(|f| f.level() != n - 1) {
        return Err(Error::IncompatibleFaces(format!("all faces must have level {}", n - 1)));
    }
    if faces.iter().any(|f| **f.parent() != **faces[0].parent()) {
        return Err(Error::IncompatibleFaces("faces live in different groups".into()));
    }
    if n == 1 {
        return Ok(());
    }
    for j in 0..=n {
        for i in 0..j {
            if faces[j].face(i) != faces[i].face(j - 1) {
                return Err(Error::IncompatibleFaces(format!("d_{i} x_{j} differs from d_{} x_{i}", j - 1)));
            }
        }
    }
    Ok(())
}

/// `h_02 h_12^{-1} h_01^{-1}`, the element `exp(v_012)` must equal.
pub fn level_two_defect(h: &ToralGroup, h01: &ToralElement, h02: &ToralElement, h12: &ToralElement) -> ToralElement {
    h.mul(&h.mul(h02, &h.inv(h12)), &h.inv(h01))
}

/// `v_023 + v_012 - α(h_01) v_123 - v_013` for level-3 data.
pub fn level_three_expression(s: &NerveSimplex) -> VectorV {
    let h = s.parent();
    let moved = h.act(s.h(0, 1).component, s.v(1, 2, 3));
    (0..h.rank())
        .map(|i| &s.v(0, 2, 3)[i] + &s.v(0, 1, 2)[i] - &moved[i] - &s.v(0, 1, 3)[i])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingSolution {
    /// Level 1: every element of `H` is a filler.
    AnyElement,
    /// Level 2: `base` (with `v_012` in `[0, 1)^d`) plus any translate of
    /// `v_012` by the columns of `lattice`.
    Torsor { base: NerveSimplex, lattice: IntMatrix },
    /// Level 2 with `h_02 h_12^{-1} h_01^{-1}` outside the torus, or any
    /// level `>= 3`: the explicit list of fillers (at most one).
    Fillers(Vec<NerveSimplex>),
}

impl MatchingSolution {
    /// Number of fillers, `None` when infinite.
    pub fn count(&self) -> Option<usize> {
        match self {
            MatchingSolution::Fillers(v) => Some(v.len()),
            MatchingSolution::Torsor { lattice, .. } if lattice.cols() == 0 => Some(1),
            _ => None,
        }
    }
}

/// Where `(i, j)` sits inside the face omitting vertex `l`.
fn in_face(l: usize, x: usize) -> usize {
    if x < l {
        x
    } else {
        x - 1
    }
}

fn omitted_vertex(n: usize, used: &[usize]) -> Option<usize> {
    (0..=n).find(|l| !used.contains(l))
}

/// All fillers of a compatible matching tuple of level `n = faces.len() - 1`.
pub fn solve_matching(parent: &Arc<ToralGroup>, faces: &[NerveSimplex]) -> Result<MatchingSolution> {
    check_compatible(faces)?;
    if **faces[0].parent() != **parent {
        return Err(Error::IncompatibleFaces("faces do not belong to the given group".into()));
    }
    let n = faces.len() - 1;
    if n == 1 {
        return Ok(MatchingSolution::AnyElement);
    }
    let zero = vec![Rational::zero(); parent.rank()];
    let h_at = |i: usize, j: usize| -> ToralElement {
        let l = omitted_vertex(n, &[i, j]).expect("some vertex is omitted");
        faces[l].h(in_face(l, i), in_face(l, j)).clone()
    };
    if n == 2 {
        let defect = level_two_defect(parent, &h_at(0, 1), &h_at(0, 2), &h_at(1, 2));
        if defect.component != 0 {
            return Ok(MatchingSolution::Fillers(vec![]));
        }
        let v012: VectorV = defect.torus.coords().iter().map(frac).collect();
        let base = NerveSimplex::from_fn(parent.clone(), 2, h_at, |i, j, k| {
            if i < j && j < k {
                v012.clone()
            } else {
                zero.clone()
            }
        });
        if !base.is_valid() {
            return Ok(MatchingSolution::Fillers(vec![]));
        }
        return Ok(MatchingSolution::Torsor { base, lattice: IntMatrix::identity(parent.rank()) });
    }
    let candidate = assemble(parent, faces);
    if candidate.is_valid() {
        Ok(MatchingSolution::Fillers(vec![candidate]))
    } else {
        Ok(MatchingSolution::Fillers(vec![]))
    }
}

/// For `n >= 3`, the unique candidate simplex whose entries are read off the
/// faces (every index pair and triple misses some vertex). It is a filler
/// iff it satisfies the nerve identities.
pub fn assemble(parent: &Arc<ToralGroup>, faces: &[NerveSimplex]) -> NerveSimplex {
    let n = faces.len() - 1;
    assert!(n >= 3, "faces determine every entry only from level 3 on");
    NerveSimplex::from_fn(
        parent.clone(),
        n,
        |i, j| {
            let l = omitted_vertex(n, &[i, j]).expect("some vertex is omitted");
            faces[l].h(in_face(l, i), in_face(l, j)).clone()
        },
        |i, j, k| {
            let l = omitted_vertex(n, &[i, j, k]).expect("some vertex is omitted");
            faces[l].v(in_face(l, i), in_face(l, j), in_face(l, k)).clone()
        },
    )
}
