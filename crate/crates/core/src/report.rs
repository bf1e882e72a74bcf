//! Serializable reports shared by the command-line front end and tests.
//!
//! JSON objects come out with sorted keys and rationals as `"num/den"`
//! strings, so identical inputs give byte-identical reports.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{cohomology_lattice, pulled_back_cocycle, torus_class_vanishes, z1_torus_structure, Representation};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{conjugacy_orbits, enumerate_finite_homs, FiniteGroup};
use crate::linalg::{int, AbelianGroupStructure};
use crate::mapping::{
    check_restrictions, fixed_points_report, mapping_space_report, GroupSummary, HomClass, HomClassifier, MappingSpaceReport,
    RestrictionCheck,
};
use crate::oracle::{oracle_report, OracleReport};
use crate::toral::{ToralGroup, TorusPoint};

pub const HIGHER_HOMOTOPY_NOTE: &str = "every component has vanishing homotopy groups above degree 2";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerReport {
    pub torus_rank: Option<usize>,
    pub component_order: Option<u64>,
    pub component_table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    /// Images of `γ: G -> π`.
    pub gamma: Vec<usize>,
    /// Torus coordinates of `φ(g)` for every `g`.
    pub torus_part: Vec<TorusPoint>,
    pub centralizer: CentralizerReport,
    /// `π_1` of the component: the component group of the centralizer.
    pub pi1: Option<GroupSummary>,
    /// `π_2` of the component is free abelian of this rank.
    pub pi2_rank: Option<usize>,
    /// Number of based components lying over this class.
    pub orbit_component_count: usize,
}

impl ClassReport {
    /// The fields both `hom` and `oracle` determine.
    pub fn comparable(&self) -> (Vec<usize>, Vec<TorusPoint>, Option<usize>, Option<u64>, usize) {
        (
            self.gamma.clone(),
            self.torus_part.clone(),
            self.centralizer.torus_rank,
            self.centralizer.component_order,
            self.orbit_component_count,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInfo {
    pub name: Option<String>,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetInfo {
    pub name: Option<String>,
    pub rank: usize,
    pub component_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleInfo {
    pub max_denominator: u64,
    pub hom_grid: u64,
    pub conjugator_grid: u64,
    pub hom_count: usize,
    pub class_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub source: GroupInfo,
    pub target: TargetInfo,
    pub classes: Vec<ClassReport>,
    pub based_components: usize,
    pub unbased_components: usize,
    pub note: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleInfo>,
}

impl MapReport {
    pub fn comparable(&self) -> Vec<(Vec<usize>, Vec<TorusPoint>, Option<usize>, Option<u64>, usize)> {
        self.classes.iter().map(ClassReport::comparable).collect()
    }
}

fn target_info(h: &ToralGroup) -> TargetInfo {
    TargetInfo { name: h.name().map(str::to_string), rank: h.rank(), component_order: h.pi().order() }
}

fn class_report(c: &HomClass) -> ClassReport {
    let z = &c.centralizer;
    ClassReport {
        gamma: c.representative.gamma.images.clone(),
        torus_part: c.representative.torus.clone(),
        centralizer: CentralizerReport {
            torus_rank: Some(z.torus_rank),
            component_order: Some(z.component_group_order),
            component_table: z.component_table.as_ref().map(FiniteGroup::table_rows),
        },
        pi1: Some(z.component_summary.clone()),
        pi2_rank: Some(z.torus_rank),
        orbit_component_count: c.orbit_component_count,
    }
}

pub fn map_report(r: &MappingSpaceReport, source_name: Option<&str>) -> MapReport {
    MapReport {
        source: GroupInfo { name: source_name.map(str::to_string), order: r.source.order() },
        target: target_info(&r.target),
        classes: r.classes.iter().map(class_report).collect(),
        based_components: r.based_components,
        unbased_components: r.unbased_components,
        note: HIGHER_HOMOTOPY_NOTE,
        oracle: None,
    }
}

pub fn hom_report(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, source_name: Option<&str>, limits: &Limits) -> Result<MapReport> {
    Ok(map_report(&mapping_space_report(g, h, limits)?, source_name))
}

/// The brute-force oracle in the `hom` schema, with representatives moved
/// to the same canonical form as `hom` uses.
pub fn oracle_map_report(
    g: &Arc<FiniteGroup>,
    h: &Arc<ToralGroup>,
    max_denominator: u64,
    source_name: Option<&str>,
    limits: &Limits,
) -> Result<MapReport> {
    let r: OracleReport = oracle_report(g, h, max_denominator, limits)?;
    let classifier = HomClassifier::new(g.clone(), h.clone(), limits)?;
    let mut classes = Vec::with_capacity(r.classes.len());
    for c in &r.classes {
        let canon = classifier.canonical_form(&c.representative)?;
        let report = ClassReport {
            gamma: canon.gamma.images.clone(),
            torus_part: canon.torus.clone(),
            centralizer: CentralizerReport { torus_rank: c.torus_rank, component_order: c.component_order, component_table: None },
            pi1: c.component_order.map(|order| GroupSummary { order, abelian: None, invariant_factors: None }),
            pi2_rank: c.torus_rank,
            orbit_component_count: c.orbit_component_count,
        };
        classes.push((report, c.size));
    }
    classes.sort_by(|a, b| (&a.0.gamma, &a.0.torus_part).cmp(&(&b.0.gamma, &b.0.torus_part)));
    let oracle = OracleInfo {
        max_denominator: r.max_denominator,
        hom_grid: r.hom_grid,
        conjugator_grid: r.conjugator_grid,
        hom_count: r.hom_count,
        class_sizes: classes.iter().map(|c| c.1).collect(),
    };
    Ok(MapReport {
        source: GroupInfo { name: source_name.map(str::to_string), order: g.order() },
        target: target_info(h),
        unbased_components: classes.len(),
        based_components: r.based_components(),
        classes: classes.into_iter().map(|c| c.0).collect(),
        note: HIGHER_HOMOTOPY_NOTE,
        oracle: Some(oracle),
    })
}

fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "?".to_string(), ToString::to_string)
}

impl fmt::Display for MapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tname = self.target.name.clone().unwrap_or_else(|| "H".into());
        let sname = self.source.name.clone().unwrap_or_else(|| "G".into());
        writeln!(f, "Hom({sname}, {tname}) / {tname}: {} classes", self.classes.len())?;
        writeln!(f, "|G| = {}, rank H = {}, |π_0 H| = {}", self.source.order, self.target.rank, self.target.component_order)?;
        for (i, c) in self.classes.iter().enumerate() {
            writeln!(f, "class {i}: γ = {:?}", c.gamma)?;
            let torus: Vec<String> = c.torus_part.iter().map(ToString::to_string).collect();
            writeln!(f, "  torus part: {}", torus.join(" "))?;
            writeln!(
                f,
                "  centralizer: torus rank {}, {} components",
                opt(&c.centralizer.torus_rank),
                opt(&c.centralizer.component_order)
            )?;
            writeln!(f, "  π_2 rank {}, based components over this class: {}", opt(&c.pi2_rank), c.orbit_component_count)?;
        }
        writeln!(f, "based components: {}", self.based_components)?;
        writeln!(f, "unbased components: {}", self.unbased_components)?;
        if let Some(o) = &self.oracle {
            writeln!(
                f,
                "oracle: N = {}, hom grid 1/{}, conjugator grid 1/{}, {} homomorphisms enumerated",
                o.max_denominator, o.hom_grid, o.conjugator_grid, o.hom_count
            )?;
        }
        write!(f, "note: {}", self.note)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointItem {
    pub subgroup: Vec<usize>,
    pub subgroup_order: usize,
    pub report: MapReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointsReport {
    pub entries: Vec<FixedPointItem>,
    pub restriction: RestrictionCheck,
}

pub fn fixed_points(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, limits: &Limits) -> Result<FixedPointsReport> {
    let entries = fixed_points_report(g, h, limits)?;
    let restriction = check_restrictions(g, &entries)?;
    let entries = entries
        .iter()
        .map(|e| FixedPointItem { subgroup: e.subgroup.clone(), subgroup_order: e.subgroup.len(), report: map_report(&e.report, None) })
        .collect();
    Ok(FixedPointsReport { entries, restriction })
}

impl fmt::Display for FixedPointsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "subgroup {:?} (order {}): {} classes, {} based components",
                e.subgroup, e.subgroup_order, e.report.unbased_components, e.report.based_components
            )?;
        }
        let r = &self.restriction;
        write!(
            f,
            "restriction compatibility: {} ({} subgroup pairs, {} restrictions, {} failures)",
            if r.failures.is_empty() { "pass" } else { "FAIL" },
            r.pairs_checked,
            r.restrictions_checked,
            r.failures.len()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyEntry {
    /// Images of `γ: G -> π` defining the coefficients `α ∘ γ`.
    pub gamma: Vec<usize>,
    /// `H^n(G, Z^d)` for `n = 0, 1, ...`.
    pub lattice: Vec<AbelianGroupStructure>,
    /// Whether `γ^* c` vanishes, so that `γ` lifts to a homomorphism.
    pub obstruction_vanishes: bool,
    /// `H^1(G, T)`, which classifies lifts when they exist.
    pub h1_torus: AbelianGroupStructure,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub source_order: usize,
    pub rank: usize,
    pub entries: Vec<CohomologyEntry>,
}

/// Cohomology of `G` with coefficients `Z^d` twisted by `α ∘ γ`, for one `γ`
/// per conjugacy orbit in `Hom(G, π)`.
pub fn cohomology(g: &Arc<FiniteGroup>, h: &Arc<ToralGroup>, max_degree: usize, limits: &Limits) -> Result<CohomologyReport> {
    if max_degree > limits.max_cohomology_degree {
        return Err(Error::size_limit("cohomological degree", max_degree as u128, limits.max_cohomology_degree as u128));
    }
    let homs = enumerate_finite_homs(g, h.pi(), limits)?;
    let orbits = conjugacy_orbits(h.pi(), &homs)?;
    let mut entries = Vec::new();
    for orbit in &orbits {
        let gamma = &homs[orbit.representative];
        let rep = Arc::new(Representation::pullback(h, gamma));
        let lattice = (0..=max_degree).map(|n| cohomology_lattice(&rep, n, limits)).collect::<Result<Vec<_>>>()?;
        let nu = pulled_back_cocycle(h, gamma, &rep).scale(&int(-1))?;
        let obstruction_vanishes = torus_class_vanishes(&nu)?.is_some();
        let h1_torus = z1_torus_structure(&rep, limits)?.h1;
        entries.push(CohomologyEntry { gamma: gamma.images.clone(), lattice, obstruction_vanishes, h1_torus });
    }
    Ok(CohomologyReport { source_order: g.order(), rank: h.rank(), entries })
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|G| = {}, coefficients Z^{}", self.source_order, self.rank)?;
        let mut out = String::new();
        for e in &self.entries {
            let groups: Vec<String> = e.lattice.iter().enumerate().map(|(n, a)| format!("H^{n} = {a}")).collect();
            let _ = writeln!(out, "γ = {:?}: {}", e.gamma, groups.join(", "));
            let _ = writeln!(
                out,
                "  lifts to a homomorphism: {}, H^1(G, T) = {}",
                if e.obstruction_vanishes { "yes" } else { "no" },
                e.h1_torus
            );
        }
        write!(f, "{}", out.trim_end())
    }
}

/// Text form of any report made of named checks.
pub fn checks_text(title: &str, passed: bool, checks: &[crate::toral::Check]) -> String {
    let mut out = format!("{title}: {}\n", if passed { "pass" } else { "FAIL" });
    for c in checks {
        let _ = write!(out, "  [{}] {} ({} samples)", if c.passed { "pass" } else { "FAIL" }, c.name, c.samples);
        if let Some(w) = &c.witness {
            let _ = write!(out, ": {w}");
        }
        out.push('\n');
    }
    out.trim_end().to_string()
}

/// Pretty JSON with sorted object keys.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}
