//! Group definition files (JSON or TOML) and `catalog:NAME` references.
//!
//! A finite group is either `{"table": [[...]]}` or
//! `{"permutation_generators": [[...]], "degree": n}`, with optional
//! `"labels"`. A toral group is
//!
//! ```text
//! {"component_group": <inline definition, file path or catalog reference>,
//!  "rank": d,
//!  "action": {"p": [[d x d integers]]},
//!  "cocycle": {"(p,q)": ["num/den", ...]}}
//! ```
//!
//! Missing action entries are the identity matrix and missing cocycle
//! entries are zero.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{finite_catalog, FiniteGroup};
use crate::linalg::{parse_rational, IntMatrix};
use crate::toral::{make_toral_group, toral_catalog, ToralGroup, TorusPoint};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDef {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Reference(String),
    Inline(GroupDef),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToralDef {
    #[serde(default)]
    pub name: Option<String>,
    pub component_group: GroupRef,
    pub rank: usize,
    #[serde(default)]
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub cocycle: BTreeMap<String, Vec<String>>,
}

fn parse_document<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    if is_toml {
        toml::from_str(text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

impl GroupDef {
    pub fn build(&self, limits: &Limits) -> Result<FiniteGroup> {
        let g = match (&self.table, &self.permutation_generators) {
            (Some(t), None) => {
                if t.len() > limits.component_table {
                    return Err(Error::size_limit("group table", t.len() as u128, limits.component_table as u128));
                }
                FiniteGroup::from_table(t)?
            }
            (None, Some(gens)) => {
                let degree = self.degree.ok_or_else(|| Error::Parse("permutation_generators needs \"degree\"".into()))?;
                FiniteGroup::from_permutations(gens, degree, limits.component_table)?
            }
            _ => return Err(Error::Parse("give exactly one of \"table\" or \"permutation_generators\"".into())),
        };
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

fn catalog_name(reference: &str) -> Option<&str> {
    reference.strip_prefix("catalog:")
}

/// Resolves a finite group from `catalog:NAME`, a file path, or a bare
/// catalog name. Existing files take precedence over bare names.
pub fn load_finite(reference: &str, limits: &Limits) -> Result<FiniteGroup> {
    load_finite_relative(reference, None, limits)
}

fn load_finite_relative(reference: &str, base: Option<&Path>, limits: &Limits) -> Result<FiniteGroup> {
    if let Some(name) = catalog_name(reference) {
        return finite_catalog(name).ok_or_else(|| Error::Parse(format!("unknown catalog group {name:?}")));
    }
    let path = resolve(reference, base);
    if path.exists() {
        let def: GroupDef = parse_document(&read(&path)?, &path)?;
        return def.build(limits);
    }
    finite_catalog(reference).ok_or_else(|| Error::Parse(format!("{reference:?} is neither a file nor a catalog group")))
}

fn resolve(reference: &str, base: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(reference);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("cocycle key {key:?} is not of the form \"(p,q)\"")))?;
    let mut parts = inner.split(',').map(|s| s.trim().parse::<usize>());
    match (parts.next(), parts.next(), parts.next()) {
        (Some(Ok(p)), Some(Ok(q)), None) => Ok((p, q)),
        _ => Err(Error::Parse(format!("cocycle key {key:?} is not of the form \"(p,q)\""))),
    }
}

impl ToralDef {
    pub fn build(&self, base: Option<&Path>, limits: &Limits) -> Result<ToralGroup> {
        let pi = match &self.component_group {
            GroupRef::Inline(def) => def.build(limits)?,
            GroupRef::Reference(r) => load_finite_relative(r, base, limits)?,
        };
        let n = pi.order();
        let d = self.rank;
        let mut action = vec![IntMatrix::identity(d); n];
        for (key, rows) in &self.action {
            let p: usize = key.trim().parse().map_err(|_| Error::Parse(format!("action key {key:?} is not an element index")))?;
            if p >= n {
                return Err(Error::Parse(format!("action key {p} is not an element of a group of order {n}")));
            }
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::DimensionMismatch(format!("action of {p} must be a {d} x {d} matrix")));
            }
            action[p] = IntMatrix::from_rows(rows)?;
        }
        let mut cocycle = vec![vec![TorusPoint::zero(d); n]; n];
        for (key, coords) in &self.cocycle {
            let (p, q) = parse_pair_key(key)?;
            if p >= n || q >= n {
                return Err(Error::Parse(format!("cocycle key {key} is out of range for a group of order {n}")));
            }
            if coords.len() != d {
                return Err(Error::DimensionMismatch(format!("cocycle value at {key} must have {d} coordinates")));
            }
            let v = coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            cocycle[p][q] = TorusPoint::new(v);
        }
        let h = make_toral_group(Arc::new(pi), d, action, cocycle)?;
        Ok(match &self.name {
            Some(name) => h.with_name(name.clone()),
            None => h,
        })
    }
}

/// Resolves a toral group. Files with a `component_group` key are toral
/// definitions; other group files are finite groups of rank 0.
pub fn load_toral(reference: &str, limits: &Limits) -> Result<ToralGroup> {
    if let Some(name) = catalog_name(reference) {
        return toral_catalog(name).ok_or_else(|| Error::Parse(format!("unknown catalog group {name:?}")));
    }
    let path = PathBuf::from(reference);
    if path.exists() {
        let text = read(&path)?;
        let is_toral = text.contains("component_group");
        if is_toral {
            let def: ToralDef = parse_document(&text, &path)?;
            return def.build(path.parent(), limits);
        }
        let def: GroupDef = parse_document(&text, &path)?;
        return Ok(ToralGroup::finite(Arc::new(def.build(limits)?)));
    }
    toral_catalog(reference).ok_or_else(|| Error::Parse(format!("{reference:?} is neither a file nor a catalog group")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn scratch(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("toralmap-defs-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn table_and_permutation_files() {
        let dir = scratch("finite");
        let l = Limits::default();
        let t = write(&dir, "z3.json", r#"{"table": [[0,1,2],[1,2,0],[2,0,1]], "labels": ["e","a","b"]}"#);
        let g = load_finite(t.to_str().unwrap(), &l).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.label(1), "a");
        let p = write(&dir, "s3.toml", "permutation_generators = [[1,0,2],[1,2,0]]\ndegree = 3\n");
        assert_eq!(load_finite(p.to_str().unwrap(), &l).unwrap().order(), 6);
        let bad = write(&dir, "bad.json", r#"{"table": [[0,1],[0,1]]}"#);
        assert!(load_finite(bad.to_str().unwrap(), &l).is_err());
    }

    #[test]
    fn catalog_references() {
        let l = Limits::default();
        assert_eq!(load_finite("catalog:S3", &l).unwrap().order(), 6);
        assert_eq!(load_toral("catalog:O2", &l).unwrap().rank(), 1);
        assert_eq!(load_toral("Z4", &l).unwrap().rank(), 0);
        assert!(matches!(load_toral("catalog:nope", &l), Err(Error::Parse(_))));
    }

    #[test]
    fn toral_file_matches_catalog_o2() {
        let dir = scratch("toral");
        let l = Limits::default();
        let p = write(&dir, "o2.json", r#"{"component_group": "catalog:Z2", "rank": 1, "action": {"1": [[-1]]}}"#);
        let h = load_toral(p.to_str().unwrap(), &l).unwrap();
        let o2 = toral_catalog("O2").unwrap();
        assert_eq!(h.action(1), o2.action(1));
        assert_eq!(h.cocycle_table(), o2.cocycle_table());
    }

    #[test]
    fn toral_toml_with_cocycle() {
        let dir = scratch("pin");
        let l = Limits::default();
        let text = "rank = 1\n[component_group]\ntable = [[0,1],[1,0]]\n[action]\n\"1\" = [[-1]]\n[cocycle]\n\"(1,1)\" = [\"1/2\"]\n";
        let p = write(&dir, "pin2.toml", text);
        let h = load_toral(p.to_str().unwrap(), &l).unwrap();
        assert_eq!(h.c(1, 1).coords(), &[rat(1, 2)]);
        let bad = write(&dir, "pin3.toml", &text.replace("1/2", "1/3"));
        assert!(matches!(load_toral(bad.to_str().unwrap(), &l), Err(Error::CocycleIdentityFails { .. })));
    }
}
