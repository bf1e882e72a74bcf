use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use toralmap::cochain::{
    cochain_len, torus_class_vanishes, Coefficients, Cochain, Representation,
};
use toralmap::group::{conjugacy_orbits, enumerate_finite_homs, finite_catalog, FiniteGroup, FiniteHom};
use toralmap::linalg::{int, is_integral, rat, IntMatrix, Rational};
use toralmap::mapping::{centralizer, check_restrictions, enumerate_hom_classes, fixed_points_report};
use toralmap::nerve::{retract, validate_pair, NerveSimplex};
use toralmap::random::Sampler;
use toralmap::toral::{toral_catalog, ToralElement, ToralGroup, TorusPoint};
use toralmap::Limits;

const FINITE: &[&str] = &["Z1", "Z2", "Z3", "Z4", "Z6", "V4", "S3", "D4", "Q8", "A4"];
const TARGETS: &[&str] = &["U1", "T2", "O2", "Pin2", "T2swap"];

fn finite(name: &str) -> Arc<FiniteGroup> {
    Arc::new(finite_catalog(name).unwrap())
}

fn toral(name: &str) -> Arc<ToralGroup> {
    Arc::new(toral_catalog(name).unwrap())
}

fn sign_rep(g: &Arc<FiniteGroup>) -> Arc<Representation> {
    let z2 = finite("Z2");
    let homs = enumerate_finite_homs(g, &z2, &Limits::default()).unwrap();
    let chi = homs.iter().find(|h| h.images.contains(&1)).unwrap_or(&homs[0]);
    let mats = g.elements().map(|x| IntMatrix::from_rows(&[vec![if chi.images[x] == 1 { -1 } else { 1 }]]).unwrap()).collect();
    Arc::new(Representation::new(g.clone(), 1, mats).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inversion_is_an_antiautomorphism(idx in 0..FINITE.len(), a in 0usize..64, b in 0usize..64) {
        let g = finite(FINITE[idx]);
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert_eq!(g.inv(g.inv(a)), a);
        prop_assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
    }

    #[test]
    fn hom_enumeration_and_orbits(i in 0..FINITE.len(), j in 0..FINITE.len()) {
        let (g, p) = (finite(FINITE[i]), finite(FINITE[j]));
        let homs = enumerate_finite_homs(&g, &p, &Limits::default()).unwrap();
        for h in &homs {
            prop_assert!(FiniteHom::new(g.clone(), p.clone(), h.images.clone()).is_ok());
        }
        let orbits = conjugacy_orbits(&p, &homs).unwrap();
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        prop_assert_eq!(total, homs.len());
        for o in &orbits {
            prop_assert_eq!(p.order() % o.members.len(), 0);
        }
    }

    #[test]
    fn toral_multiplication_is_associative(
        idx in 0..TARGETS.len(),
        seed in any::<u64>(),
    ) {
        let h = toral(TARGETS[idx]);
        let mut s = Sampler::new(seed, 6);
        let (a, b, c) = (s.element(&h), s.element(&h), s.element(&h));
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
        prop_assert_eq!(h.mul(&a, &h.inv(&a)), h.identity());
    }

    #[test]
    fn exp_is_a_homomorphism_with_integral_kernel(
        idx in 0..TARGETS.len(),
        v in proptest::collection::vec((-12i64..=12, 1i64..=4), 2),
        w in proptest::collection::vec((-12i64..=12, 1i64..=4), 2),
    ) {
        let h = toral(TARGETS[idx]);
        let d = h.rank();
        let v: Vec<Rational> = v.iter().take(d).map(|&(a, b)| rat(a, b)).collect();
        let w: Vec<Rational> = w.iter().take(d).map(|&(a, b)| rat(a, b)).collect();
        let sum: Vec<Rational> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert_eq!(h.exp_map(&sum).unwrap(), h.mul(&h.exp_map(&v).unwrap(), &h.exp_map(&w).unwrap()));
        prop_assert_eq!(h.exp_map(&v).unwrap() == h.identity(), v.iter().all(is_integral));
    }

    #[test]
    fn ad_factors_through_components(idx in 0..TARGETS.len(), seed in any::<u64>()) {
        let h = toral(TARGETS[idx]);
        let mut s = Sampler::new(seed, 6);
        let x = s.element(&h);
        let v = s.vector(h.rank());
        let bare = ToralElement::new(TorusPoint::zero(h.rank()), x.component);
        prop_assert_eq!(h.ad_action(&x, &v).unwrap(), h.ad_action(&bare, &v).unwrap());
    }

    #[test]
    fn coboundary_squares_to_zero(gi in 0..4usize, signed in any::<bool>(), kind in 0..3usize, n in 0..3usize, seed in any::<u64>()) {
        let g = finite(["Z2", "Z3", "V4", "S3"][gi]);
        let rep = if signed { sign_rep(&g) } else { Arc::new(Representation::trivial(g.clone(), 1)) };
        let kind = [Coefficients::Lattice, Coefficients::Vector, Coefficients::Torus][kind];
        let c = Sampler::new(seed, 6).cochain(&rep, n, kind);
        prop_assert!(c.coboundary().coboundary().is_zero());
    }

    #[test]
    fn nerve_round_trip(idx in 0..TARGETS.len(), level in 1usize..=5, seed in any::<u64>()) {
        let h = toral(TARGETS[idx]);
        let c = Sampler::new(seed, 8).coordinates(&h, level);
        let s = NerveSimplex::from_coordinates(h.clone(), &c).unwrap();
        prop_assert!(s.is_valid());
        prop_assert_eq!(s.coordinates(), c);
    }

    #[test]
    fn retraction_path_stays_in_its_component(idx in 0..TARGETS.len(), seed in any::<u64>(), t in 0i64..=12) {
        let g = finite("Z4");
        let h = toral(TARGETS[idx]);
        let homs: Vec<_> = enumerate_hom_classes(&g, &h, &Limits::default()).unwrap().into_iter().map(|c| c.representative).collect();
        let p = Sampler::new(seed, 8).pair(&homs).unwrap();
        let before = validate_pair(&p);
        let q = retract(&p, &rat(t, 12)).unwrap();
        let after = validate_pair(&q);
        prop_assert!(before.passed && after.passed);
        prop_assert_eq!(before.gamma, after.gamma);
    }
}

/// Every torus 2-cocycle on a small grid: either the returned `μ` cobounds
/// it, or no `μ` on a finer grid does.
#[test]
fn torus_vanishing_is_decided_exactly() {
    let cases = [("Z2", false, 4i64, 8i64), ("Z2", true, 4, 8), ("Z3", false, 3, 6), ("Z3", true, 3, 6)];
    for (name, signed, den, search) in cases {
        let g = finite(name);
        let rep = if signed { sign_rep(&g) } else { Arc::new(Representation::trivial(g.clone(), 1)) };
        let len2 = cochain_len(g.order(), 2, 1);
        let len1 = cochain_len(g.order(), 1, 1);
        let mut coboundaries = BTreeSet::new();
        for idx in 0..search.pow(len1 as u32) {
            let vals = digits(idx, search, len1).into_iter().map(|k| rat(k, search)).collect();
            let mu = Cochain::from_values(rep.clone(), 1, Coefficients::Torus, vals).unwrap();
            coboundaries.insert(mu.coboundary().values().to_vec());
        }
        let mut vanishing = 0;
        let mut total = 0;
        for idx in 0..den.pow(len2 as u32) {
            let vals = digits(idx, den, len2).into_iter().map(|k| rat(k, den)).collect();
            let nu = Cochain::from_values(rep.clone(), 2, Coefficients::Torus, vals).unwrap();
            if !nu.is_cocycle() {
                continue;
            }
            total += 1;
            match torus_class_vanishes(&nu).unwrap() {
                Some(mu) => {
                    assert_eq!(mu.coboundary(), nu, "{name}");
                    vanishing += 1;
                }
                None => assert!(!coboundaries.contains(nu.values()), "{name}: missed a cobounding μ"),
            }
        }
        assert!(total > 0);
        if signed && name == "Z2" {
            assert_eq!((vanishing, total), (1, 2));
        }
        if !signed {
            assert_eq!(vanishing, total, "H^2({name}, T) vanishes");
        }
    }
}

fn digits(mut idx: i64, base: i64, len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

#[test]
fn centralizer_elements_commute_with_the_image() {
    let limits = Limits::default();
    let mut sampler = Sampler::new(77, 6);
    for gname in ["Z2", "Z3", "Z4", "V4", "S3"] {
        let g = finite(gname);
        for &hname in TARGETS {
            let h = toral(hname);
            for class in enumerate_hom_classes(&g, &h, &limits).unwrap() {
                let phi = &class.representative;
                let z = centralizer(phi, &limits).unwrap();
                assert_eq!(class.orbit_component_count * z.pi_image.len(), h.pi().order());
                let lattice = &z.torus_lattice;
                for i in 0..z.component_reps.len() {
                    for j in 0..z.component_reps.len() {
                        let x: Vec<Rational> = (0..lattice.cols()).map(|_| sampler.unit_rational()).collect();
                        let t = lattice.mul_rational_vec(&x).unwrap();
                        let y = h.mul(&h.mul(&h.element(&t, 0), &z.component_reps[i]), &z.component_reps[j]);
                        for a in g.elements() {
                            let f = phi.apply(a);
                            assert_eq!(h.mul(&y, &f), h.mul(&f, &y), "{gname} -> {hname}");
                        }
                    }
                }
                if let Some(elems) = &z.component_elements {
                    let comps: BTreeSet<usize> = elems.iter().map(|e| e.component).collect();
                    assert_eq!(comps, z.pi_image.iter().copied().collect::<BTreeSet<_>>());
                }
            }
        }
    }
}

/// For a torus target, conjugation is trivial, so classes are exactly the
/// homomorphisms, all of which have values of denominator dividing `exp(G)`.
#[test]
fn abelian_targets_have_one_class_per_homomorphism() {
    let limits = Limits::default();
    for gname in ["Z2", "Z3", "Z4", "Z6", "V4", "S3", "Q8"] {
        let g = finite(gname);
        let e = g.exponent() as i64;
        for (hname, d) in [("U1", 1usize), ("T2", 2)] {
            let h = toral(hname);
            let slots = g.order() - 1;
            if (e as u64).pow((slots * d) as u32) > 2_000_000 {
                continue;
            }
            let mut count = 0;
            for idx in 0..e.pow((slots * d) as u32) {
                let ks = digits(idx, e, slots * d);
                let value = |x: usize| -> Vec<Rational> {
                    if x == 0 {
                        vec![int(0); d]
                    } else {
                        (0..d).map(|k| rat(ks[(x - 1) * d + k], e)).collect()
                    }
                };
                let ok = g.elements().all(|a| {
                    g.elements().all(|b| {
                        let lhs = value(g.mul(a, b));
                        let rhs: Vec<Rational> = value(a).iter().zip(value(b)).map(|(x, y)| x + y).collect();
                        lhs.iter().zip(&rhs).all(|(x, y)| is_integral(&(x - y)))
                    })
                });
                count += usize::from(ok);
            }
            let classes = enumerate_hom_classes(&g, &h, &limits).unwrap().len();
            assert_eq!(classes, count, "{gname} -> {hname}");
        }
    }
}

#[test]
fn restrictions_are_listed_for_several_sources() {
    let limits = Limits::default();
    for (gname, hname) in [("S3", "O2"), ("V4", "O2"), ("Z6", "Pin2"), ("D4", "O2")] {
        let g = finite(gname);
        let entries = fixed_points_report(&g, &toral(hname), &limits).unwrap();
        let check = check_restrictions(&g, &entries).unwrap();
        assert!(check.failures.is_empty(), "{gname} -> {hname}: {:?}", check.failures);
        assert!(check.restrictions_checked > 0);
    }
}
