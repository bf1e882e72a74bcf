//! Acceptance gate. Runs six criteria, prints one PASS/FAIL line for each,
//! and exits nonzero if any criterion fails or exceeds its time budget.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use toralmap::cochain::{cohomology_lattice, contracting_homotopy, Representation};
use toralmap::group::{enumerate_finite_homs, FiniteGroup};
use toralmap::linalg::{int, rat, IntMatrix};
use toralmap::mapping::{fixed_points_report, HomClassifier, ToralHom};
use toralmap::nerve::{
    level_three_expression, matching::assemble, matching_tuple, retract, solve_matching, validate_pair, CocyclePair,
    MatchingSolution, NerveSimplex,
};
use toralmap::random::Sampler;
use toralmap::report::{hom_report, oracle_map_report};
use toralmap::toral::{toral_catalog, ToralElement, ToralGroup, TorusPoint, TORAL_CATALOG};
use toralmap::Limits;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog(name: &str) -> Arc<ToralGroup> {
    Arc::new(toral_catalog(name).unwrap())
}

fn groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("Z2", Arc::new(FiniteGroup::cyclic(2))),
        ("Z3", Arc::new(FiniteGroup::cyclic(3))),
        ("Z4", Arc::new(FiniteGroup::cyclic(4))),
        ("Z2xZ2", Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)))),
        ("S3", Arc::new(FiniteGroup::symmetric(3))),
    ]
}

/// A surjection onto `{±1}` as a list of signs, all `+1` when none exists.
fn sign_character(g: &Arc<FiniteGroup>) -> Vec<i64> {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let homs = enumerate_finite_homs(g, &z2, &Limits::default()).unwrap();
    let chosen = homs.iter().find(|h| h.images.iter().any(|&x| x == 1));
    g.elements().map(|x| if chosen.is_some_and(|h| h.images[x] == 1) { -1 } else { 1 }).collect()
}

fn representations(g: &Arc<FiniteGroup>) -> Vec<(&'static str, Arc<Representation>)> {
    let sign = sign_character(g);
    let m = |rows: Vec<Vec<i64>>| IntMatrix::from_rows(&rows).unwrap();
    let sign_mats = sign.iter().map(|&s| m(vec![vec![s]])).collect();
    let swap_mats =
        sign.iter().map(|&s| if s == 1 { m(vec![vec![1, 0], vec![0, 1]]) } else { m(vec![vec![0, 1], vec![1, 0]]) }).collect();
    vec![
        ("trivial", Arc::new(Representation::trivial(g.clone(), 1))),
        ("sign", Arc::new(Representation::new(g.clone(), 1, sign_mats).unwrap())),
        ("swap", Arc::new(Representation::new(g.clone(), 2, swap_mats).unwrap())),
    ]
}

fn contracting_homotopy_criterion() -> Outcome {
    let mut sampler = Sampler::new(1001, 8);
    let mut total = 0;
    for (gname, g) in groups() {
        for (rname, rep) in representations(&g) {
            for i in 0..200 {
                let nu = sampler.vector_cocycle(&rep, 2);
                ensure(nu.is_cocycle(), || format!("{gname}/{rname}: sample {i} is not a cocycle"))?;
                let back = contracting_homotopy(&nu).map_err(|e| e.to_string())?.coboundary();
                ensure(back == nu, || format!("{gname}/{rname}: dH(ν) != ν for sample {i}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} cocycles, dH = id exactly"))
}

fn multiplicative(p: &CocyclePair) -> bool {
    let (g, h) = (&p.source, &p.target);
    g.elements().all(|a| g.elements().all(|b| p.zeta[g.mul(a, b)] == h.mul(&p.zeta[a], &p.zeta[b])))
}

fn retraction_criterion() -> Outcome {
    let limits = Limits::default();
    let sources = [Arc::new(FiniteGroup::cyclic(4)), Arc::new(FiniteGroup::symmetric(3))];
    let times = [rat(1, 5), rat(1, 2), rat(5, 6)];
    let mut sampler = Sampler::new(2002, 8);
    let mut count = 0;
    for &name in TORAL_CATALOG {
        let h = catalog(name);
        for (k, g) in sources.iter().enumerate() {
            let homs = HomClassifier::new(g.clone(), h.clone(), &limits).unwrap().class_representatives().unwrap();
            for i in 0..50 {
                let p = sampler.pair(&homs).map_err(|e| e.to_string())?;
                let gamma = p.components();
                let tag = || format!("{name}, source {k}, sample {i}");
                ensure(validate_pair(&p).passed, || format!("{}: generated pair invalid", tag()))?;
                ensure(retract(&p, &int(0)).unwrap() == p, || format!("{}: K_0 != id", tag()))?;
                for t in &times {
                    let q = retract(&p, t).unwrap();
                    ensure(validate_pair(&q).passed && q.components() == gamma, || format!("{}: K_{t} leaves E_γ", tag()))?;
                }
                let end = retract(&p, &int(1)).unwrap();
                ensure(end.nu.iter().all(|v| v.iter().all(Zero::is_zero)), || format!("{}: ν_1 != 0", tag()))?;
                ensure(multiplicative(&end), || format!("{}: ζ_1 not multiplicative", tag()))?;
                ensure(end.components() == gamma, || format!("{}: component changed", tag()))?;
                let e0 = CocyclePair::from_hom(&homs[i % homs.len()].conjugate_by(&sampler.element(&h)));
                for t in times.iter().chain([&int(0), &int(1)]) {
                    ensure(retract(&e0, t).unwrap() == e0, || format!("{}: K_{t} moves a point of E^0", tag()))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} pairs over {} targets", TORAL_CATALOG.len()))
}

fn oracle_criterion() -> Outcome {
    let limits = Limits::default();
    let z22 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let matrix: Vec<(&str, FiniteGroup, &str, Option<usize>)> = vec![
        ("Z2", FiniteGroup::cyclic(2), "O2", Some(3)),
        ("Z2", FiniteGroup::cyclic(2), "Pin2", Some(2)),
        ("Z3", FiniteGroup::cyclic(3), "O2", None),
        ("Z4", FiniteGroup::cyclic(4), "U1", Some(4)),
        ("Z2xZ2", z22, "O2", None),
        ("S3", FiniteGroup::symmetric(3), "O2", None),
    ];
    let mut summary = Vec::new();
    for (gname, g, hname, expected) in matrix {
        let g = Arc::new(g);
        let h = catalog(hname);
        let hom = hom_report(&g, &h, None, &limits).map_err(|e| e.to_string())?;
        let o16 = oracle_map_report(&g, &h, 16, None, &limits).map_err(|e| e.to_string())?;
        let o32 = oracle_map_report(&g, &h, 32, None, &limits).map_err(|e| e.to_string())?;
        if let Some(n) = expected {
            ensure(hom.classes.len() == n, || format!("{gname} -> {hname}: {} classes, expected {n}", hom.classes.len()))?;
        }
        ensure(hom.comparable() == o16.comparable(), || format!("{gname} -> {hname}: hom and oracle(16) differ"))?;
        ensure(o16.comparable() == o32.comparable(), || format!("{gname} -> {hname}: oracle unstable from 16 to 32"))?;
        ensure(hom.based_components == o16.based_components, || format!("{gname} -> {hname}: based components differ"))?;
        summary.push(format!("{gname}->{hname}:{}", hom.classes.len()));
    }
    Ok(summary.join(" "))
}

fn nerve_criterion() -> Outcome {
    let mut sampler = Sampler::new(4004, 8);
    let mut filled = 0;
    let mut refused = 0;
    for name in ["U1", "O2", "Pin2", "T2swap"] {
        let h = catalog(name);
        let d = h.rank();
        for level in 1..=5 {
            for i in 0..50 {
                let c = sampler.coordinates(&h, level);
                let s = NerveSimplex::from_coordinates(h.clone(), &c).unwrap();
                ensure(s.is_valid(), || format!("{name} level {level}: reconstructed simplex invalid"))?;
                ensure(s.coordinates() == c, || format!("{name} level {level}: coordinates not recovered"))?;
                let again = NerveSimplex::from_coordinates(h.clone(), &s.coordinates()).unwrap();
                ensure(again == s, || format!("{name} level {level}: simplex not recovered"))?;
                let faces = matching_tuple(&s);
                let sol = solve_matching(&h, &faces).unwrap();
                if level == 3 {
                    let shifts = [int(0), int(1), rat(1, 3), int(-2), rat(5, 2)];
                    let w = &shifts[i % shifts.len()];
                    let mut pf = faces.clone();
                    let v: Vec<_> = (0..d).map(|k| if k == 0 { &s.v(0, 1, 2)[0] + w } else { s.v(0, 1, 2)[k].clone() }).collect();
                    pf[3].set_v(0, 1, 2, v);
                    let expr = level_three_expression(&assemble(&h, &pf));
                    let expected: Vec<_> = (0..d).map(|k| if k == 0 { w.clone() } else { int(0) }).collect();
                    ensure(expr == expected, || format!("{name}: expression {expr:?} for shift {w}"))?;
                    let faces_valid = pf.iter().all(NerveSimplex::is_valid);
                    ensure(faces_valid == w.is_integer(), || format!("{name}: face validity wrong for shift {w}"))?;
                    let n = solve_matching(&h, &pf).unwrap().count();
                    ensure(n == Some(usize::from(w.is_zero())), || format!("{name}: {n:?} fillers for shift {w}"))?;
                    if w.is_zero() {
                        filled += 1;
                    } else {
                        refused += 1;
                    }
                }
                if level >= 4 {
                    ensure(sol == MatchingSolution::Fillers(vec![s.clone()]), || {
                        format!("{name} level {level}: filler not unique or not the original")
                    })?;
                }
            }
        }
    }
    Ok(format!("round trip levels 1-5, n = 3 filled {filled} and refused {refused}, unique fillers at n = 4, 5"))
}

/// Smith diagonal of an `i128` matrix by pivoting on the smallest entry,
/// normalized to invariant factors. Panics on overflow.
fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            if q != 0 {
                for j in t..cols {
                    a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j]).unwrap()).unwrap();
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            if q != 0 {
                for row in a.iter_mut().skip(t) {
                    row[j] = row[j].checked_sub(q.checked_mul(row[t]).unwrap()).unwrap();
                }
            }
            clean &= a[t][j] == 0;
        }
        if clean {
            diag.push(p.abs());
            t += 1;
        }
    }
    // (a, b) -> (gcd, lcm) until the divisibility chain holds.
    let gcd = |mut x: i128, mut y: i128| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (x, y) = (diag[i], diag[j]);
            let g = gcd(x, y);
            diag[i] = g;
            diag[j] = x / g * y;
        }
    }
    diag
}

/// `H^n(G, Z^d)` from the unnormalized bar complex, as (free rank, torsion).
fn bar_cohomology(g: &FiniteGroup, action: &[Vec<Vec<i128>>], n: usize) -> (usize, Vec<i128>) {
    let m = g.order();
    let d = action[0].len();
    let tuples = |k: usize| -> Vec<Vec<usize>> {
        (0..m.pow(k as u32))
            .map(|mut x| {
                let mut t = vec![0; k];
                for s in t.iter_mut().rev() {
                    *s = x % m;
                    x /= m;
                }
                t
            })
            .collect()
    };
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * m + x);
    let differential = |k: usize| -> Vec<Vec<i128>> {
        let src = m.pow(k as u32) * d;
        let mut out = vec![vec![0i128; src]; m.pow(k as u32 + 1) * d];
        for (r, t) in tuples(k + 1).iter().enumerate() {
            let mut add = |col_tuple: &[usize], mat: Option<&Vec<Vec<i128>>>, sign: i128| {
                let c = index(col_tuple);
                for i in 0..d {
                    for j in 0..d {
                        let x = mat.map_or(i128::from(i == j), |a| a[i][j]);
                        out[r * d + i][c * d + j] += sign * x;
                    }
                }
            };
            add(&t[1..], Some(&action[t[0]]), 1);
            for i in 1..=k {
                let mut merged = t[..i - 1].to_vec();
                merged.push(g.mul(t[i - 1], t[i]));
                merged.extend_from_slice(&t[i + 1..]);
                add(&merged, None, if i % 2 == 1 { -1 } else { 1 });
            }
            add(&t[..k], None, if (k + 1) % 2 == 1 { -1 } else { 1 });
        }
        out
    };
    let dn = smith_diagonal(differential(n));
    let cochains = m.pow(n as u32) * d;
    let kernel = cochains - dn.len();
    if n == 0 {
        return (kernel, vec![]);
    }
    let prev = smith_diagonal(differential(n - 1));
    (kernel - prev.len(), prev.into_iter().filter(|&x| x > 1).collect())
}

fn library_cohomology(rep: &Representation, n: usize) -> (usize, Vec<i128>) {
    let a = cohomology_lattice(rep, n, &Limits::default()).unwrap();
    (a.free_rank, a.torsion.iter().map(|t| t.to_i128().unwrap()).collect())
}

fn cohomology_criterion() -> Outcome {
    for m in 1..=6usize {
        let g = Arc::new(FiniteGroup::cyclic(m));
        let rep = Representation::trivial(g.clone(), 1);
        let action = vec![vec![vec![1i128]]; m];
        for n in 0..=3 {
            let classical: (usize, Vec<i128>) = match n {
                0 => (1, vec![]),
                _ if n % 2 == 1 || m == 1 => (0, vec![]),
                _ => (0, vec![m as i128]),
            };
            let oracle = bar_cohomology(&g, &action, n);
            let lib = library_cohomology(&rep, n);
            ensure(oracle == classical, || format!("bar oracle H^{n}(Z/{m}) = {oracle:?}, expected {classical:?}"))?;
            ensure(lib == classical, || format!("H^{n}(Z/{m}) = {lib:?}, expected {classical:?}"))?;
        }
    }
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let sign = Representation::new(
        z2.clone(),
        1,
        vec![IntMatrix::from_rows(&[vec![1]]).unwrap(), IntMatrix::from_rows(&[vec![-1]]).unwrap()],
    )
    .unwrap();
    let action = vec![vec![vec![1i128]], vec![vec![-1i128]]];
    for (n, expected) in [(1, (0, vec![2i128])), (2, (0, vec![]))] {
        let oracle = bar_cohomology(&z2, &action, n);
        let lib = library_cohomology(&sign, n);
        ensure(oracle == expected && lib == expected, || format!("H^{n}(Z/2, Z-): library {lib:?}, oracle {oracle:?}"))?;
    }
    Ok("H^n(Z/m, Z) for m <= 6, n <= 3 and H^1, H^2(Z/2, Z-) agree with the bar-complex oracle".into())
}

/// Searches conjugators `(s, p)` with `s` on the grid `(1/den)Z^d`.
fn grid_conjugate(h: &ToralGroup, a: &ToralHom, b: &ToralHom, den: i64) -> bool {
    let d = h.rank();
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        points = points.iter().flat_map(|p| (0..den).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    h.pi().elements().any(|p| {
        points.iter().any(|pt| {
            let x = ToralElement::new(TorusPoint::new(pt.iter().map(|&k| rat(k, den)).collect()), p);
            a.conjugate_by(&x).torus == b.torus && a.conjugate_by(&x).gamma.images == b.gamma.images
        })
    })
}

fn fixed_point_criterion() -> Outcome {
    let limits = Limits::default();
    let g = Arc::new(FiniteGroup::cyclic(4));
    let h = catalog("O2");
    let entries = fixed_points_report(&g, &h, &limits).map_err(|e| e.to_string())?;
    ensure(entries.len() == 3, || format!("{} subgroup classes, expected 3", entries.len()))?;
    let mut checked = 0;
    for big in &entries {
        let pos: BTreeMap<usize, usize> = big.subgroup.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        for small in &entries {
            if !small.subgroup.iter().all(|x| pos.contains_key(x)) {
                continue;
            }
            let embedding: Vec<usize> = small.subgroup.iter().map(|x| pos[x]).collect();
            for class in &big.report.classes {
                let r = class.representative.precompose(small.report.source.clone(), &embedding).map_err(|e| e.to_string())?;
                let hits = small.report.classes.iter().filter(|c| grid_conjugate(&h, &r, &c.representative, 64)).count();
                ensure(hits == 1, || {
                    format!("restriction from {:?} to {:?} meets {hits} listed classes", big.subgroup, small.subgroup)
                })?;
                checked += 1;
            }
        }
    }
    let counts: Vec<usize> = entries.iter().map(|e| e.report.classes.len()).collect();
    Ok(format!("{checked} restrictions land in exactly one listed class; classes per subgroup {counts:?}"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 6] = [
        ("1 contracting homotopy", 10, contracting_homotopy_criterion),
        ("2 deformation retraction", 10, retraction_criterion),
        ("3 hom-class oracle equivalence", 60, oracle_criterion),
        ("4 nerve combinatorics", 10, nerve_criterion),
        ("5 cohomology regression", 10, cohomology_criterion),
        ("6 fixed-point report", 30, fixed_point_criterion),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(budget);
        let verdict = match &result {
            Ok(_) if elapsed <= limit => "PASS",
            _ => "FAIL",
        };
        let detail = match result {
            Ok(s) if elapsed <= limit => s,
            Ok(s) => format!("{s}; over the {budget}s budget"),
            Err(e) => e,
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {name}: {verdict} ({:.2}s, limit {budget}s) {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
