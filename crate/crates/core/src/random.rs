//! Seeded generators for test data: rational vectors, toral elements, nerve
//! coordinates, cochains, cocycles and valid cocycle pairs.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochain::{coboundary_matrix, cochain_len, Coefficients, Cochain, Representation};
use crate::error::Result;
use crate::linalg::{kernel_lattice, rat, Rational};
use crate::mapping::ToralHom;
use crate::nerve::{CocyclePair, NerveCoordinates, NerveSimplex};
use crate::toral::{ToralElement, ToralGroup, VectorV};

/// Default number of samples per level or target.
pub const DEFAULT_SAMPLES: usize = 50;
/// Default bound on generated denominators.
pub const DEFAULT_MAX_DENOMINATOR: u32 = 8;
pub const DEFAULT_SEED: u64 = 0x5eed;

pub struct Sampler {
    rng: ChaCha8Rng,
    max_den: i64,
}

impl Sampler {
    pub fn new(seed: u64, max_denominator: u32) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_den: i64::from(max_denominator.max(1)) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational in `[-2, 2]` with denominator at most the bound.
    pub fn rational(&mut self) -> Rational {
        let den = self.rng.gen_range(1..=self.max_den);
        rat(self.rng.gen_range(-2 * den..=2 * den), den)
    }

    /// A rational in `[0, 1)`.
    pub fn unit_rational(&mut self) -> Rational {
        let den = self.rng.gen_range(1..=self.max_den);
        rat(self.rng.gen_range(0..den), den)
    }

    pub fn vector(&mut self, d: usize) -> VectorV {
        (0..d).map(|_| self.rational()).collect()
    }

    pub fn element(&mut self, h: &ToralGroup) -> ToralElement {
        let t: VectorV = (0..h.rank()).map(|_| self.unit_rational()).collect();
        let p = self.rng.gen_range(0..h.pi().order());
        h.element(&t, p)
    }

    pub fn coordinates(&mut self, h: &ToralGroup, level: usize) -> NerveCoordinates {
        NerveCoordinates {
            level,
            h0: (0..level).map(|_| self.element(h)).collect(),
            v0: (0..level * level.saturating_sub(1) / 2).map(|_| self.vector(h.rank())).collect(),
        }
    }

    pub fn simplex(&mut self, h: &Arc<ToralGroup>, level: usize) -> NerveSimplex {
        let c = self.coordinates(h, level);
        NerveSimplex::from_coordinates(h.clone(), &c).expect("generated coordinates are well formed")
    }

    pub fn cochain(&mut self, rep: &Arc<Representation>, degree: usize, kind: Coefficients) -> Cochain {
        let len = cochain_len(rep.group().order(), degree, rep.rank());
        let values = (0..len)
            .map(|_| match kind {
                Coefficients::Lattice => Rational::from_integer(BigInt::from(self.rng.gen_range(-3..=3))),
                _ => self.rational(),
            })
            .collect();
        Cochain::from_values(rep.clone(), degree, kind, values).expect("length matches")
    }

    /// Integral combination of a basis of the `n`-cocycle lattice, with
    /// coefficients in `[-3, 3]`.
    pub fn lattice_cocycle(&mut self, rep: &Arc<Representation>, degree: usize) -> Cochain {
        let basis = kernel_lattice(&coboundary_matrix(rep, degree));
        self.combine(rep, degree, Coefficients::Lattice, &basis, |s| {
            Rational::from_integer(BigInt::from(s.rng.gen_range(-3..=3)))
        })
    }

    /// `dμ` plus a rational combination of cocycle-lattice generators.
    pub fn vector_cocycle(&mut self, rep: &Arc<Representation>, degree: usize) -> Cochain {
        assert!(degree >= 1);
        let basis = kernel_lattice(&coboundary_matrix(rep, degree));
        let extra = self.combine(rep, degree, Coefficients::Vector, &basis, |s| s.rational());
        let mu = self.cochain(rep, degree - 1, Coefficients::Vector);
        mu.coboundary().add(&extra).expect("same shape")
    }

    fn combine(
        &mut self,
        rep: &Arc<Representation>,
        degree: usize,
        kind: Coefficients,
        basis: &crate::linalg::IntMatrix,
        mut coeff: impl FnMut(&mut Self) -> Rational,
    ) -> Cochain {
        let mut values = vec![Rational::from_integer(BigInt::from(0)); basis.rows()];
        for j in 0..basis.cols() {
            let k = coeff(self);
            for (i, v) in values.iter_mut().enumerate() {
                *v += &k * Rational::from_integer(basis.get(i, j).clone());
            }
        }
        Cochain::from_values(rep.clone(), degree, kind, values).expect("basis has cochain length")
    }

    /// A valid pair `(exp(μ) ψ, λ - dμ)` where `ψ` is a random conjugate of
    /// one of `homs`.
    pub fn pair(&mut self, homs: &[ToralHom]) -> Result<CocyclePair> {
        let phi = &homs[self.rng.gen_range(0..homs.len())];
        let x = self.element(&phi.target);
        let psi = phi.conjugate_by(&x);
        let rep = psi.rep();
        let mu = self.cochain(&rep, 1, Coefficients::Vector);
        let lambda = self.lattice_cocycle(&rep, 2);
        CocyclePair::twisted(&psi, &mu, &lambda)
    }
}
