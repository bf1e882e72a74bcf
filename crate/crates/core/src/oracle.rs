//! Brute-force cross-check for homomorphism classes.
//!
//! Everything here is plain exhaustion over finite grids of torsion points
//! with machine-integer arithmetic: no cohomology and no Smith forms.
//!
//! Homomorphisms are enumerated with torus values in `(1/L) Z^d / Z^d` where
//! `L = N |G|`, and classified by conjugating with every element of the finer
//! grid `(1/M) Z^d / Z^d` (`M = 2 |G| L`). Conjugating by a torus element
//! moves values by coboundaries, which generally have larger denominators
//! than the values themselves, hence the finer grid. Centralizers are
//! measured by counting grid elements at `M` and `2M`: the count grows by
//! `2^r` for a torus of rank `r`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, FiniteHom};
use crate::linalg::{rat, Rational};
use crate::mapping::ToralHom;
use crate::toral::{ToralGroup, TorusPoint};

type Elem = (Vec<i64>, usize);

/// A toral group restricted to the points of `(1/k) Z^d / Z^d`.
struct Grid {
    k: i64,
    d: usize,
    pi: Arc<FiniteGroup>,
    action: Vec<Vec<Vec<i64>>>,
    cocycle: Vec<Vec<i64>>,
}

impl Grid {
    fn new(h: &ToralGroup, k: i64) -> Result<Self> {
        let n = h.pi().order();
        let action = (0..n)
            .map(|p| h.action(p).to_i64_rows().ok_or_else(|| Error::InvalidOption("action entries too large".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut cocycle = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let scaled = h
                    .c(p, q)
                    .coords()
                    .iter()
                    .map(|x| {
                        let y = x * Rational::from_integer(k.into());
                        if !y.is_integer() {
                            return Err(Error::InvalidOption(format!(
                                "grid 1/{k} does not contain the cocycle value {x}"
                            )));
                        }
                        y.to_integer().to_i64().ok_or_else(|| Error::InvalidOption("grid too fine".into()))
                    })
                    .collect::<Result<Vec<i64>>>()?;
                cocycle.push(scaled);
            }
        }
        Ok(Grid { k, d: h.rank(), pi: h.pi().clone(), action, cocycle })
    }

    fn act(&self, p: usize, x: &[i64]) -> Vec<i64> {
        self.action[p].iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>()).collect()
    }

    fn reduce(&self, mut x: Vec<i64>) -> Vec<i64> {
        for v in x.iter_mut() {
            *v = v.rem_euclid(self.k);
        }
        x
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.pi.order();
        let moved = self.act(a.1, &b.0);
        let c = &self.cocycle[a.1 * n + b.1];
        let t = (0..self.d).map(|i| a.0[i] + moved[i] + c[i]).collect();
        (self.reduce(t), self.pi.mul(a.1, b.1))
    }

    fn inv(&self, a: &Elem) -> Elem {
        let n = self.pi.order();
        let pinv = self.pi.inv(a.1);
        let moved = self.act(pinv, &a.0);
        let c = &self.cocycle[pinv * n + a.1];
        let t = (0..self.d).map(|i| -moved[i] - c[i]).collect();
        (self.reduce(t), pinv)
    }

    fn conj(&self, h: &Elem, a: &Elem) -> Elem {
        self.mul(&self.mul(h, a), &self.inv(h))
    }

    /// Elements whose torus coordinates are multiples of `step`.
    fn elements(&self, step: i64) -> Vec<Elem> {
        let per = self.k / step;
        let mut tori: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..self.d {
            tori = tori.iter().flat_map(|t| (0..per).map(move |i| [t.clone(), vec![i * step]].concat())).collect();
        }
        self.pi.elements().flat_map(|p| tori.iter().map(move |t| (t.clone(), p))).collect()
    }
}

#[derive(Clone, Debug)]
pub struct OracleClass {
    pub representative: ToralHom,
    /// Number of enumerated homomorphisms in the class.
    pub size: usize,
    /// `log2` of the growth of the centralizer count from `M` to `2M`;
    /// `None` if the growth is not a power of two.
    pub torus_rank: Option<usize>,
    pub component_order: Option<u64>,
    pub orbit_component_count: usize,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub max_denominator: u64,
    pub hom_grid: u64,
    pub conjugator_grid: u64,
    pub hom_count: usize,
    pub classes: Vec<OracleClass>,
}

impl OracleReport {
    pub fn based_components(&self) -> usize {
        self.classes.iter().map(|c| c.orbit_component_count).sum()
    }
}

fn to_toral_hom(h: &Arc<ToralGroup>, g: &Arc<FiniteGroup>, k: i64, images: &[Elem]) -> Result<ToralHom> {
    let gamma = FiniteHom::new(g.clone(), h.pi().clone(), images.iter().map(|e| e.1).collect())?;
    let torus = images.iter().map(|e| TorusPoint::new(e.0.iter().map(|&x| rat(x, k)).collect())).collect();
    ToralHom::new(h.clone(), gamma, torus)
}

/// Enumerates and classifies all homomorphisms `G -> H` with torus values in
/// `(1/(N|G|)) Z^d`. `N` must be a multiple of every cocycle denominator.
pub fn oracle_report(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, max_denominator: u64, limits: &Limits) -> Result<OracleReport> {
    if max_denominator == 0 {
        return Err(Error::InvalidOption("the denominator bound must be positive".into()));
    }
    let c_den = h.cocycle_denominator().to_u64().unwrap_or(u64::MAX);
    if max_denominator % c_den != 0 {
        return Err(Error::InvalidOption(format!(
            "the denominator bound {max_denominator} is not a multiple of the cocycle denominator {c_den}"
        )));
    }
    let order = g.order() as u64;
    let l = max_denominator * order;
    let m = 2 * order * l;
    let d = h.rank() as u32;
    let n_pi = h.pi().order() as u128;
    let gens = g.greedy_generators();
    let per_gen = (l as u128).saturating_pow(d).saturating_mul(n_pi);
    let candidates = per_gen.saturating_pow(gens.len() as u32);
    let conjugators = ((2 * m) as u128).saturating_pow(d).saturating_mul(n_pi).saturating_mul(order as u128);
    for (what, size) in [("oracle homomorphism candidates", candidates), ("oracle conjugator work", conjugators)] {
        if size > limits.oracle_states {
            return Err(Error::size_limit(what, size, limits.oracle_states));
        }
    }
    let m = i64::try_from(m).map_err(|_| Error::InvalidOption("denominator bound too large".into()))?;
    let l = l as i64;
    let grid = Grid::new(h, m)?;
    let fine = Grid::new(h, 2 * m)?;

    // enumerate: generator images from the coarse grid, closed up by BFS
    let pool = grid.elements(m / l);
    let identity: Elem = (vec![0; h.rank()], 0);
    let mut homs: Vec<Vec<Elem>> = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'enumerate: loop {
        let mut images: Vec<Option<Elem>> = vec![None; g.order()];
        images[0] = Some(identity.clone());
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (s, &c) in gens.iter().zip(&choice) {
                let y = g.mul(x, *s);
                let v = grid.mul(images[x].as_ref().expect("visited"), &pool[c]);
                match &images[y] {
                    None => {
                        images[y] = Some(v);
                        queue.push_back(y);
                    }
                    Some(w) if *w != v => {
                        ok = false;
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        if ok {
            homs.push(images.into_iter().map(|e| e.expect("generators span G")).collect());
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                break 'enumerate;
            }
            choice[i] += 1;
            if choice[i] < pool.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    homs.sort();
    homs.dedup();

    let index: HashMap<&Vec<Elem>, usize> = homs.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let conjugators = grid.elements(1);
    let mut class_of = vec![usize::MAX; homs.len()];
    let mut classes = Vec::new();
    for i in 0..homs.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let k = classes.len();
        let mut size = 0;
        for c in &conjugators {
            let moved: Vec<Elem> = homs[i].iter().map(|x| grid.conj(c, x)).collect();
            if let Some(&j) = index.get(&moved) {
                if class_of[j] == usize::MAX {
                    class_of[j] = k;
                    size += 1;
                } else if class_of[j] != k {
                    return Err(Error::Internal("oracle classes overlap".into()));
                }
            }
        }

        let count = |gr: &Grid, scale: i64| -> (u64, Vec<bool>) {
            let phi: Vec<Elem> = homs[i].iter().map(|(t, p)| (t.iter().map(|x| x * scale).collect(), *p)).collect();
            let mut hit = vec![false; h.pi().order()];
            let mut n = 0;
            for c in gr.elements(1) {
                if phi.iter().all(|x| gr.conj(&c, x) == *x) {
                    n += 1;
                    hit[c.1] = true;
                }
            }
            (n, hit)
        };
        let (coarse_count, hit) = count(&grid, 1);
        let (fine_count, _) = count(&fine, 2);
        let ratio = fine_count / coarse_count;
        let torus_rank = (fine_count % coarse_count == 0 && ratio.is_power_of_two()).then(|| ratio.trailing_zeros() as usize);
        let component_order = torus_rank.and_then(|r| {
            let cell = (m as u64).checked_pow(r as u32)?;
            (coarse_count % cell == 0).then(|| coarse_count / cell)
        });
        let met = hit.iter().filter(|&&b| b).count();
        classes.push(OracleClass {
            representative: to_toral_hom(h, g, m, &homs[i])?,
            size,
            torus_rank,
            component_order,
            orbit_component_count: h.pi().order() / met,
        });
    }
    Ok(OracleReport {
        max_denominator,
        hom_grid: l as u64,
        conjugator_grid: m as u64,
        hom_count: homs.len(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toral::toral_catalog;

    fn run(g: usize, h: &str, n: u64) -> OracleReport {
        let g = Arc::new(FiniteGroup::cyclic(g));
        let h = Arc::new(toral_catalog(h).unwrap());
        oracle_report(&g, &h, n, &Limits::default()).unwrap()
    }

    #[test]
    fn z2_into_o2() {
        let r = run(2, "O2", 8);
        assert_eq!(r.classes.len(), 3);
        let data: Vec<(Option<usize>, Option<u64>)> = r.classes.iter().map(|c| (c.torus_rank, c.component_order)).collect();
        assert!(data.contains(&(Some(1), Some(2))));
        assert!(data.contains(&(Some(0), Some(4))));
        assert_eq!(r.based_components(), 3);
    }

    #[test]
    fn z2_into_pin2() {
        let r = run(2, "Pin2", 8);
        assert_eq!(r.classes.len(), 2);
        assert!(r.classes.iter().all(|c| c.representative.gamma.images == vec![0, 0]));
    }

    #[test]
    fn z4_into_u1() {
        let r = run(4, "U1", 4);
        assert_eq!(r.classes.len(), 4);
        assert_eq!(r.hom_count, 4);
    }

    #[test]
    fn rejects_coarse_grid() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let h = Arc::new(toral_catalog("Pin2").unwrap());
        assert!(matches!(oracle_report(&g, &h, 3, &Limits::default()), Err(Error::InvalidOption(_))));
        let lim = Limits { oracle_states: 10, ..Limits::default() };
        assert!(matches!(oracle_report(&g, &h, 2, &lim), Err(Error::SizeLimitExceeded { .. })));
    }
}
