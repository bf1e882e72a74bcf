//! Finite groups given by multiplication tables.
//!
//! Elements are the dense indices `0..order` and the identity is always `0`.
//! The group law is `table[a][b] = a * b`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// Checks the group axioms on a square table and returns the validated group.
///
/// Checks run in a fixed order (range, identity, inverses, associativity) and
/// the first failure is reported with a witness.
pub fn validate_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotClosed("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotClosed(format!("row {i} has length {}, expected {n}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(Error::NotClosed(format!("entry {x} in row {i} is out of range")));
        }
    }
    for x in 0..n {
        if table[0][x] != x || table[x][0] != x {
            return Err(Error::NoIdentity);
        }
    }
    let mut inverses = vec![0; n];
    for x in 0..n {
        match (0..n).find(|&y| table[x][y] == 0 && table[y][x] == 0) {
            Some(y) => inverses[x] = y,
            None => return Err(Error::NoInverse(x)),
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for c in 0..n {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(Error::NotAssociative { a, b, c });
                }
            }
        }
    }
    Ok(FiniteGroup { order: n, table: table.concat(), inverses, labels: None })
}

impl FiniteGroup {
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        validate_group(table)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        validate_group(&table).expect("cyclic table is a group")
    }

    /// `A x B` with element `(a, b)` stored at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let table: Vec<Vec<usize>> = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        validate_group(&table).expect("direct product is a group")
    }

    /// Symmetric group on `n` letters, elements sorted lexicographically as
    /// permutations.
    pub fn symmetric(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = if n < 2 {
            vec![]
        } else {
            let mut cycle: Vec<usize> = (1..n).collect();
            cycle.push(0);
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            vec![swap, cycle]
        };
        Self::from_permutations(&gens, n.max(1), usize::MAX).expect("symmetric group")
    }

    /// Dihedral group of order `2n`, the symmetries of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 2);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl], n, usize::MAX).expect("dihedral group")
    }

    pub fn quaternion() -> Self {
        let i = vec![1, 2, 3, 0, 5, 6, 7, 4];
        let j = vec![4, 7, 6, 5, 2, 1, 0, 3];
        Self::from_permutations(&[i, j], 8, usize::MAX).expect("quaternion group")
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], 4, usize::MAX).expect("A4")
    }

    /// The subgroup of `Sym(degree)` generated by `generators`, materialized
    /// with its elements in lexicographic order (identity first). The product
    /// is composition, `(a * b)(x) = a(b(x))`.
    pub fn from_permutations(generators: &[Vec<usize>], degree: usize, cap: usize) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Parse(format!("{g:?} is not a permutation of {degree} letters")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let mut elements = BTreeSet::new();
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose(&x, g);
                if elements.insert(y.clone()) {
                    if elements.len() > cap {
                        return Err(Error::size_limit("permutation group order", elements.len() as u128, cap as u128));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let labels = elements
            .iter()
            .map(|p| format!("({})", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
            .collect();
        validate_group(&table)?.with_labels(labels)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `h g h^{-1}`
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Exponent: lcm of element orders.
    pub fn exponent(&self) -> usize {
        self.elements().fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    /// Invariant factors `d_1 | d_2 | ...` (all at least 2) of an abelian
    /// group, read off from counts of elements of prime-power order.
    /// `None` for non-abelian groups.
    pub fn abelian_invariants(&self) -> Option<Vec<usize>> {
        if !self.is_abelian() {
            return None;
        }
        let orders: Vec<usize> = self.elements().map(|g| self.element_order(g)).collect();
        let mut n = self.order;
        let mut prime_parts: Vec<Vec<usize>> = Vec::new();
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                // m[k] = number of cyclic factors of order at least p^k
                let count = |q: usize| orders.iter().filter(|&&o| q % o == 0).count();
                let mut m = vec![usize::MAX];
                let (mut prev, mut q) = (1, p);
                loop {
                    let c = count(q);
                    if c == prev {
                        break;
                    }
                    m.push((c / prev).ilog(p) as usize);
                    prev = c;
                    q *= p;
                }
                let mut powers = Vec::new();
                for k in 1..m.len() {
                    let exactly = m[k] - m.get(k + 1).copied().unwrap_or(0);
                    powers.extend(std::iter::repeat(p.pow(k as u32)).take(exactly));
                }
                powers.sort_unstable_by(|a, b| b.cmp(a));
                prime_parts.push(powers);
            }
            p += 1;
        }
        let len = prime_parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<usize> = (0..len)
            .map(|i| prime_parts.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        Some(factors)
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A generating set built greedily: scan elements in index order and keep
    /// those not already in the span. The result is irredundant.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for g in 1..self.order {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated_subgroup(&gens);
                if span.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Whether the sorted element list is closed under products and inverses.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        elements.binary_search(&0).is_ok()
            && elements.iter().all(|&a| {
                elements.binary_search(&self.inv(a)).is_ok()
                    && elements.iter().all(|&b| elements.binary_search(&self.mul(a, b)).is_ok())
            })
    }

    /// Materializes a subgroup (sorted element list) as a group in its own
    /// right. Returns the group and the embedding `index -> parent element`.
    pub fn subgroup_as_group(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(elements) {
            return Err(Error::NotClosed(format!("{elements:?} is not a subgroup")));
        }
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let mut g = validate_group(&table)?;
        if let Some(l) = &self.labels {
            g = g.with_labels(elements.iter().map(|&x| l[x].clone()).collect())?;
        }
        Ok((g, elements.to_vec()))
    }
}

/// A homomorphism between finite groups, stored as its image array.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub images: Vec<usize>,
}

impl FiniteHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::NotAHomomorphism("image array has the wrong shape".into()));
        }
        if images[0] != 0 {
            return Err(Error::NotAHomomorphism("identity is not mapped to identity".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotAHomomorphism(format!("fails at ({a}, {b})")));
                }
            }
        }
        Ok(FiniteHom { source, target, images })
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let images = vec![0; source.order()];
        FiniteHom { source, target, images }
    }

    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    /// `g -> p * hom(g) * p^{-1}`
    pub fn conjugate_by(&self, p: usize) -> FiniteHom {
        let images = self.images.iter().map(|&x| self.target.conj(p, x)).collect();
        FiniteHom { source: self.source.clone(), target: self.target.clone(), images }
    }

    pub fn same_signature(&self, other: &FiniteHom) -> bool {
        same_group(&self.source, &other.source) && same_group(&self.target, &other.target)
    }
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.table == b.table
}

/// All homomorphisms `G -> P`, sorted lexicographically by image array.
///
/// Backtracks over images of a greedy generating set of `G`, propagating each
/// partial assignment over the subgroup generated so far.
pub fn enumerate_finite_homs(g: &Arc<FiniteGroup>, p: &Arc<FiniteGroup>, limits: &Limits) -> Result<Vec<FiniteHom>> {
    let size = g.order() as u128 * p.order() as u128;
    if size > limits.hom_product {
        return Err(Error::size_limit("|G|*|P| for homomorphism enumeration", size, limits.hom_product));
    }
    let gens = g.greedy_generators();
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; g.order()];
    images[0] = 0;
    extend_homs(g, p, &gens, 0, &mut images, &mut out);
    out.sort();
    Ok(out
        .into_iter()
        .map(|images| FiniteHom { source: g.clone(), target: p.clone(), images })
        .collect())
}

fn extend_homs(
    g: &FiniteGroup,
    p: &FiniteGroup,
    gens: &[usize],
    depth: usize,
    images: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == gens.len() {
        out.push(images.clone());
        return;
    }
    let s = gens[depth];
    for candidate in p.elements() {
        let mut trial = images.clone();
        if propagate(g, p, &gens[..=depth], s, candidate, &mut trial) {
            extend_homs(g, p, gens, depth + 1, &mut trial, out);
        }
    }
}

/// Assigns `s -> image` and closes the assignment under right multiplication
/// by the given generators. Returns false on a conflict.
fn propagate(g: &FiniteGroup, p: &FiniteGroup, gens: &[usize], s: usize, image: usize, map: &mut [usize]) -> bool {
    let gens_images: Vec<(usize, usize)> = gens
        .iter()
        .map(|&x| (x, if x == s { image } else { map[x] }))
        .collect();
    let mut queue: VecDeque<usize> = (0..g.order()).filter(|&x| map[x] != usize::MAX).collect();
    while let Some(x) = queue.pop_front() {
        for &(y, fy) in &gens_images {
            let xy = g.mul(x, y);
            let v = p.mul(map[x], fy);
            if map[xy] == usize::MAX {
                map[xy] = v;
                queue.push_back(xy);
            } else if map[xy] != v {
                return false;
            }
        }
    }
    true
}

/// One orbit of the conjugation action of `P` on a list of homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomOrbit {
    /// Indices into the input list, ascending.
    pub members: Vec<usize>,
    /// Index of the lexicographically least member.
    pub representative: usize,
    /// Elements of `P` fixing the representative.
    pub stabilizer: Vec<usize>,
}

/// Partitions `homs` into `P`-conjugation orbits. Orbits are listed in order
/// of their representatives. Homomorphisms whose conjugates are missing from
/// the list are still grouped correctly with whatever is present.
pub fn conjugacy_orbits(p: &FiniteGroup, homs: &[FiniteHom]) -> Result<Vec<HomOrbit>> {
    if let Some(first) = homs.first() {
        if homs.iter().any(|h| !h.same_signature(first)) || first.target.table != p.table {
            return Err(Error::MixedSignature);
        }
    }
    let index: HashMap<&[usize], usize> = homs.iter().enumerate().map(|(i, h)| (h.images.as_slice(), i)).collect();
    let mut seen = vec![false; homs.len()];
    let mut orbits = Vec::new();
    for i in 0..homs.len() {
        if seen[i] {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut stabilizer = Vec::new();
        for x in p.elements() {
            let c = homs[i].conjugate_by(x);
            if c.images == homs[i].images {
                stabilizer.push(x);
            }
            if let Some(&j) = index.get(c.images.as_slice()) {
                members.insert(j);
                seen[j] = true;
            }
        }
        let members: Vec<usize> = members.into_iter().collect();
        let representative = *members.iter().min_by_key(|&&j| &homs[j].images).expect("orbit contains its seed");
        let stabilizer = if representative == i {
            stabilizer
        } else {
            p.elements()
                .filter(|&x| homs[representative].conjugate_by(x).images == homs[representative].images)
                .collect()
        };
        orbits.push(HomOrbit { members, representative, stabilizer });
    }
    orbits.sort_by(|a, b| homs[a.representative].images.cmp(&homs[b.representative].images));
    Ok(orbits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupList {
    pub parent: Arc<FiniteGroup>,
    /// Sorted element lists, ordered by (order, elements).
    pub subgroups: Vec<Vec<usize>>,
    pub up_to_conjugacy: bool,
}

/// Every subgroup of `G` (or one per conjugacy class), found by closing
/// subgroups under one extra element at a time starting from the trivial one.
pub fn all_subgroups(g: &Arc<FiniteGroup>, up_to_conjugacy: bool, limits: &Limits) -> Result<SubgroupList> {
    if g.order() > limits.subgroup_order {
        return Err(Error::size_limit("group order for subgroup enumeration", g.order() as u128, limits.subgroup_order as u128));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = vec![0];
    found.insert(trivial.clone());
    let mut queue = VecDeque::from([trivial]);
    while let Some(h) = queue.pop_front() {
        for x in g.elements() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let k = g.generated_subgroup(&gens);
            if found.insert(k.clone()) {
                queue.push_back(k);
            }
        }
    }
    let mut subgroups: Vec<Vec<usize>> = found.into_iter().collect();
    subgroups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    if up_to_conjugacy {
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in subgroups {
            if covered.contains(&s) {
                continue;
            }
            for x in g.elements() {
                let mut c: Vec<usize> = s.iter().map(|&y| g.conj(x, y)).collect();
                c.sort_unstable();
                covered.insert(c);
            }
            reps.push(s);
        }
        subgroups = reps;
    }
    Ok(SubgroupList { parent: g.clone(), subgroups, up_to_conjugacy })
}

/// An element `x` with `x H x^{-1}` contained in `K`, if any.
pub fn conjugate_into(g: &FiniteGroup, h: &[usize], k: &[usize]) -> Option<usize> {
    g.elements().find(|&x| h.iter().all(|&y| k.binary_search(&g.conj(x, y)).is_ok()))
}

/// Named finite groups: `Z<n>`, `trivial`, `Z2xZ2` (alias `V4`), `S3`, `S4`,
/// `D<n>` (order `2n`), `Q8`, `A4`.
pub fn finite_catalog(name: &str) -> Option<FiniteGroup> {
    let name = name.trim();
    match name {
        "trivial" | "1" => return Some(FiniteGroup::trivial()),
        "Z2xZ2" | "V4" => return Some(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        "S3" => return Some(FiniteGroup::symmetric(3)),
        "S4" => return Some(FiniteGroup::symmetric(4)),
        "Q8" => return Some(FiniteGroup::quaternion()),
        "A4" => return Some(FiniteGroup::alternating4()),
        _ => {}
    }
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    if let Some(n) = parse("Z").filter(|&n| (1..=1024).contains(&n)) {
        return Some(FiniteGroup::cyclic(n));
    }
    if let Some(n) = parse("D").filter(|&n| (2..=64).contains(&n)) {
        return Some(FiniteGroup::dihedral(n));
    }
    None
}

/// Orbit sizes keyed by representative, handy for reports.
pub fn orbit_sizes(orbits: &[HomOrbit]) -> BTreeMap<usize, usize> {
    orbits.iter().map(|o| (o.representative, o.members.len())).collect()
}
