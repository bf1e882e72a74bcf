//! Randomized and exhaustive verification of the nerve combinatorics for a
//! given toral group: coordinates, simplicial identities, matching maps and
//! the latching shape of a group nerve. Also exercises the deformation
//! retraction of cocycle pairs.

use std::sync::Arc;

use num_traits::Zero;

use super::group_nerve::{all_tuples, degenerate_simplices};
use super::matching::{assemble, level_three_expression, matching_tuple, solve_matching, MatchingSolution};
use super::pair::{retract, validate_pair, CocyclePair};
use super::simplex::{NerveCoordinates, NerveSimplex};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::linalg::{int, is_integral, rat, Rational};
use crate::mapping::ToralHom;
use crate::random::Sampler;
use crate::toral::{Check, ToralElement, ToralGroup, VectorV};

#[derive(Clone, Debug)]
pub struct NerveCheckOptions {
    pub levels: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_denominator: u32,
}

impl Default for NerveCheckOptions {
    fn default() -> Self {
        NerveCheckOptions {
            levels: 5,
            samples: crate::random::DEFAULT_SAMPLES,
            seed: crate::random::DEFAULT_SEED,
            max_denominator: crate::random::DEFAULT_MAX_DENOMINATOR,
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct NerveCheckReport {
    pub passed: bool,
    pub levels: usize,
    pub samples: usize,
    pub checks: Vec<Check>,
}

fn record(c: &mut Check, ok: bool, witness: impl FnOnce() -> String) {
    c.samples += 1;
    if !ok && c.passed {
        c.fail(witness());
    }
}

fn unit(d: usize, q: Rational) -> VectorV {
    (0..d).map(|i| if i == 0 { q.clone() } else { Rational::zero() }).collect()
}

/// Elements of `H` whose torus coordinates lie in `(1/2)Z`.
fn half_grid(h: &ToralGroup) -> Vec<ToralElement> {
    let halves = [rat(0, 1), rat(1, 2)];
    let mut pts: Vec<VectorV> = vec![vec![]];
    for _ in 0..h.rank() {
        pts = pts.iter().flat_map(|p| halves.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
    }
    h.pi().elements().flat_map(|c| pts.iter().map(move |t| h.element(t, c))).collect()
}

fn half_vectors(d: usize) -> Vec<VectorV> {
    let vals = [rat(-1, 2), rat(0, 1), rat(1, 2), rat(1, 1)];
    let mut out: Vec<VectorV> = vec![vec![]];
    for _ in 0..d {
        out = out.iter().flat_map(|p| vals.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

/// Both round trips for one coordinate tuple.
fn round_trip(h: &Arc<ToralGroup>, c: &NerveCoordinates, check: &mut Check, invariants: &mut Check) -> Result<()> {
    let s = NerveSimplex::from_coordinates(h.clone(), c)?;
    record(invariants, s.is_valid(), || format!("level {}: {:?}", c.level, s.check()));
    record(check, s.coordinates() == *c, || format!("coordinates not recovered at level {}", c.level));
    let back = NerveSimplex::from_coordinates(h.clone(), &s.coordinates())?;
    record(check, back == s, || format!("simplex not recovered at level {}", c.level));
    Ok(())
}

fn simplicial_identities(s: &NerveSimplex, c: &mut Check) {
    let n = s.level();
    for j in 0..=n {
        for i in 0..j {
            if n >= 2 {
                record(c, s.face(j).face(i) == s.face(i).face(j - 1), || format!("d_{i} d_{j} at level {n}"));
            }
        }
    }
    for j in 0..=n {
        for i in 0..=j {
            record(c, s.degeneracy(j).degeneracy(i) == s.degeneracy(i).degeneracy(j + 1), || {
                format!("s_{i} s_{j} at level {n}")
            });
        }
    }
    for j in 0..=n {
        let sj = s.degeneracy(j);
        for i in 0..=n + 1 {
            let lhs = sj.face(i);
            let rhs = if i == j || i == j + 1 {
                s.clone()
            } else if i < j {
                s.face(i).degeneracy(j - 1)
            } else {
                s.face(i - 1).degeneracy(j)
            };
            record(c, lhs == rhs, || format!("d_{i} s_{j} at level {n}"));
        }
    }
    let ops_valid = (0..=n).all(|i| s.degeneracy(i).is_valid()) && (n == 0 || (0..=n).all(|i| s.face(i).is_valid()));
    record(c, ops_valid, || format!("a face or degeneracy of a level-{n} simplex is invalid"));
}

/// Replaces `v_012` inside the face `d_3` of a level-3 matching tuple.
fn perturb_last_face(faces: &[NerveSimplex], w: &VectorV) -> Vec<NerveSimplex> {
    let mut out = faces.to_vec();
    let v: VectorV = out[3].v(0, 1, 2).iter().zip(w).map(|(a, b)| a + b).collect();
    out[3].set_v(0, 1, 2, v);
    out
}

pub fn nerve_check(h: &Arc<ToralGroup>, g: &FiniteGroup, opts: &NerveCheckOptions) -> Result<NerveCheckReport> {
    let mut sampler = Sampler::new(opts.seed, opts.max_denominator);
    let d = h.rank();
    let mut coords = Check::new("coordinate round trip");
    let mut invariants = Check::new("reconstructed simplices satisfy identities (1)-(3)");
    let mut simplicial = Check::new("simplicial identities");
    let mut m1 = Check::new("matching n = 1: every element fills");
    let mut m2 = Check::new("matching n = 2: fillers form a Z^d-torsor");
    let mut m3 = Check::new("matching n = 3: filler iff the expression vanishes, expression integral on valid faces");
    let mut m4 = Check::new("matching n >= 4: unique filler");
    let mut latching = Check::new("latching: degenerate simplices of NG are the tuples containing e");

    let grid = half_grid(h);
    let vectors = half_vectors(d);
    for a in &grid {
        round_trip(h, &NerveCoordinates { level: 1, h0: vec![a.clone()], v0: vec![] }, &mut coords, &mut invariants)?;
    }
    if grid.len() * grid.len() * vectors.len() <= 20_000 {
        for a in &grid {
            for b in &grid {
                for v in &vectors {
                    let c = NerveCoordinates { level: 2, h0: vec![a.clone(), b.clone()], v0: vec![v.clone()] };
                    round_trip(h, &c, &mut coords, &mut invariants)?;
                }
            }
        }
    }

    for level in 1..=opts.levels {
        for _ in 0..opts.samples {
            let c = sampler.coordinates(h, level);
            round_trip(h, &c, &mut coords, &mut invariants)?;
            let s = NerveSimplex::from_coordinates(h.clone(), &c)?;
            simplicial_identities(&s, &mut simplicial);
            let faces = matching_tuple(&s);
            let sol = solve_matching(h, &faces)?;
            match level {
                1 => record(&mut m1, sol == MatchingSolution::AnyElement, || format!("{sol:?}")),
                2 => {
                    let ok = match &sol {
                        MatchingSolution::Torsor { base, lattice } => {
                            lattice.cols() == d
                                && base.is_valid()
                                && matching_tuple(base) == faces
                                && s.v(0, 1, 2).iter().zip(base.v(0, 1, 2)).all(|(a, b)| is_integral(&(a - b)))
                        }
                        _ => false,
                    };
                    record(&mut m2, ok, || "the sampled simplex is not in the returned torsor".into());
                    if d > 0 {
                        let mut shifted = s.clone();
                        let v: VectorV = s.v(0, 1, 2).iter().zip(unit(d, int(1))).map(|(a, b)| a + b).collect();
                        shifted.set_v(0, 1, 2, v);
                        record(&mut m2, shifted.is_valid() && matching_tuple(&shifted) == faces, || {
                            "an integer translate of v_012 is not a filler".into()
                        });
                    }
                }
                3 => {
                    let found = sol == MatchingSolution::Fillers(vec![s.clone()]);
                    record(&mut m3, found, || "faces of a simplex do not give back that simplex".into());
                    if d > 0 {
                        for w in [unit(d, int(1)), unit(d, rat(1, 3)), unit(d, rat(-2, 1))] {
                            let pf = perturb_last_face(&faces, &w);
                            let expr = level_three_expression(&assemble(h, &pf));
                            let faces_valid = pf.iter().all(NerveSimplex::is_valid);
                            let exists = solve_matching(h, &pf)?.count() == Some(1);
                            let zero = expr.iter().all(Zero::is_zero);
                            record(&mut m3, exists == zero && faces_valid == expr.iter().all(is_integral), || {
                                format!("perturbation {w:?}: expression {expr:?}, filler {exists}")
                            });
                        }
                    }
                }
                _ => {
                    let ok = sol.count() == Some(1) && sol == MatchingSolution::Fillers(vec![s.clone()]);
                    record(&mut m4, ok, || format!("level {level}: {:?} fillers", sol.count()));
                }
            }
        }
    }

    for n in 1..=opts.levels.min(4) {
        if g.order().pow(n as u32) > 20_000 {
            break;
        }
        let degenerate = degenerate_simplices(g, n);
        for t in all_tuples(g.order(), n) {
            record(&mut latching, degenerate.contains(&t) == t.contains(&0), || format!("{t:?}"));
        }
    }

    let mut checks = vec![coords, invariants, simplicial, m1];
    if opts.levels >= 2 {
        checks.push(m2);
    }
    if opts.levels >= 3 {
        checks.push(m3);
    }
    if opts.levels >= 4 {
        checks.push(m4);
    }
    checks.push(latching);
    Ok(NerveCheckReport {
        passed: checks.iter().all(|c| c.passed),
        levels: opts.levels,
        samples: opts.samples,
        checks,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RetractExample {
    pub gamma: Vec<usize>,
    pub zeta: Vec<String>,
    pub nu: Vec<Vec<String>>,
    pub zeta_retracted: Vec<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RetractReport {
    pub passed: bool,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub example: Option<RetractExample>,
}

fn example(p: &CocyclePair, end: &CocyclePair) -> RetractExample {
    RetractExample {
        gamma: p.components(),
        zeta: p.zeta.iter().map(ToString::to_string).collect(),
        nu: p.nu.iter().map(|v| v.iter().map(crate::linalg::format_rational).collect()).collect(),
        zeta_retracted: end.zeta.iter().map(ToString::to_string).collect(),
    }
}

/// Runs the deformation retraction `K_t` on random valid pairs built from
/// the class representatives `homs`, checking `K_0 = id`, that `K_t` stays
/// in the same component and fixes `ν = 0`, and that `K_1` lands there.
pub fn retract_check(homs: &[ToralHom], samples: usize, seed: u64, max_denominator: u32) -> Result<RetractReport> {
    let mut sampler = Sampler::new(seed, max_denominator);
    let mut k0 = Check::new("K_0 is the identity");
    let mut path = Check::new("K_t stays valid with constant component");
    let mut end = Check::new("K_1 has ν = 0 and multiplicative ζ");
    let mut fixed = Check::new("K_t fixes pairs with ν = 0");
    let times = [rat(0, 1), rat(1, 4), rat(1, 2), rat(2, 3), rat(1, 1)];
    let mut first = None;
    if homs.is_empty() {
        return Ok(RetractReport { passed: true, samples: 0, checks: vec![k0, path, end, fixed], example: None });
    }
    for _ in 0..samples {
        let p = sampler.pair(homs)?;
        let gamma = validate_pair(&p).gamma;
        record(&mut k0, retract(&p, &times[0])? == p, || "K_0(p) differs from p".into());
        for t in &times[1..] {
            let q = retract(&p, t)?;
            let r = validate_pair(&q);
            record(&mut path, r.passed && r.gamma == gamma, || format!("at t = {t}"));
        }
        let last = retract(&p, &times[4])?;
        let r = validate_pair(&last);
        record(&mut end, r.passed && r.in_e0, || format!("ν is nonzero after retraction: {:?}", last.nu));
        for t in &times {
            record(&mut fixed, retract(&last, t)? == last, || format!("moved at t = {t}"));
        }
        if first.is_none() {
            first = Some(example(&p, &last));
        }
    }
    let checks = vec![k0, path, end, fixed];
    Ok(RetractReport { passed: checks.iter().all(|c| c.passed), samples, checks, example: first })
}
