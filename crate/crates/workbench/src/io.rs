//! JSON input files and their conversion to core types.
//!
//! Complex numbers are `[re, im]` pairs. Errors name the file and the
//! offending field, e.g. `theta.json: matrices[2]: expected 2 rows, found 3`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indrep::gt::{ChainLevel, SubgroupChain};
use indrep::linalg::CMatrix;
use indrep::rep::UnitaryRep;
use indrep::{FiniteGroup, Matrix, Rep, Subgroup};
use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{WbError, WbResult};

/// `{"order": n, "cayley": [[...]], "labels": [...]}`; `cayley[a][b] = a·b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// `{"label": s, "degree": d, "matrices": [ρ(0), ρ(1), …]}`, each `d×d` of `[re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub label: String,
    pub degree: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

/// An irreps file holds either one representation or `{"irreps": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepListFile {
    pub irreps: Vec<RepFile>,
}

/// An element given by index or by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ElementRef>>,
    /// Irreps of the level, matrices listed over its members in ascending order.
    #[serde(default)]
    pub irreps: Vec<RepFile>,
}

/// `{"levels": [...]}` bottom-up; the first level is `K`, the last is `G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub levels: Vec<LevelFile>,
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> WbResult<D> {
    let text = fs::read_to_string(path).map_err(|e| WbError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    parse_json(path, &text)
}

pub fn parse_json<D: DeserializeOwned>(path: &Path, text: &str) -> WbResult<D> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        WbError::Load { path: path.to_path_buf(), field, message: e.into_inner().to_string() }
    })
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> WbResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| WbError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn load_err(path: &Path, field: impl Into<String>, message: impl Into<String>) -> WbError {
    WbError::Load { path: path.to_path_buf(), field: field.into(), message: message.into() }
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self { order: g.order(), cayley: g.cayley_table(), labels: g.labels().map(|l| l.to_vec()) }
    }

    pub fn to_group(&self, path: &Path) -> WbResult<Arc<FiniteGroup>> {
        if self.cayley.len() != self.order {
            return Err(load_err(path, "order", format!("order {} but the Cayley table has {} rows", self.order, self.cayley.len())));
        }
        if let Some((r, row)) = self.cayley.iter().enumerate().find(|(_, row)| row.len() != self.order) {
            return Err(load_err(path, format!("cayley[{r}]"), format!("expected {} entries, found {}", self.order, row.len())));
        }
        let g = FiniteGroup::from_cayley(self.cayley.clone()).map_err(|e| load_err(path, "cayley", e.to_string()))?;
        let g = match &self.labels {
            Some(l) => g.with_labels(l.clone()).map_err(|e| load_err(path, "labels", e.to_string()))?,
            None => g,
        };
        Ok(Arc::new(g))
    }
}

impl RepFile {
    pub fn from_rep(r: &Rep) -> Self {
        let d = r.degree();
        let matrices = r
            .matrices()
            .iter()
            .map(|m| (0..d).map(|i| (0..d).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
            .collect();
        Self { label: r.label().to_string(), degree: d, matrices }
    }

    /// Builds the representation on `group`; `field` prefixes error paths.
    pub fn to_rep(&self, group: &Arc<FiniteGroup>, path: &Path, field: &str) -> WbResult<Rep> {
        let d = self.degree;
        if self.matrices.len() != group.order() {
            return Err(load_err(path, format!("{field}matrices"), format!("expected {} matrices (one per element), found {}", group.order(), self.matrices.len())));
        }
        let mut mats = Vec::with_capacity(self.matrices.len());
        for (g, m) in self.matrices.iter().enumerate() {
            if m.len() != d {
                return Err(load_err(path, format!("{field}matrices[{g}]"), format!("expected {d} rows, found {}", m.len())));
            }
            if let Some((r, row)) = m.iter().enumerate().find(|(_, row)| row.len() != d) {
                return Err(load_err(path, format!("{field}matrices[{g}][{r}]"), format!("expected {d} entries, found {}", row.len())));
            }
            mats.push(CMatrix::from_fn(d, d, |i, j| Complex::new(m[i][j][0], m[i][j][1])));
        }
        UnitaryRep::from_matrices(group.clone(), mats, self.label.clone()).map_err(|e| load_err(path, format!("{field}matrices"), e.to_string()))
    }
}

/// Reads one or several representations from each file, in order.
pub fn load_reps(paths: &[PathBuf], group: &Arc<FiniteGroup>) -> WbResult<Vec<Rep>> {
    let mut out = Vec::new();
    for path in paths {
        let value: serde_json::Value = read_json(path)?;
        if value.get("irreps").is_some() {
            let list: RepListFile = parse_json(path, &value.to_string())?;
            for (i, r) in list.irreps.iter().enumerate() {
                out.push(r.to_rep(group, path, &format!("irreps[{i}]."))?);
            }
        } else {
            let r: RepFile = parse_json(path, &value.to_string())?;
            out.push(r.to_rep(group, path, "")?);
        }
    }
    Ok(out)
}

pub fn load_rep(path: &Path, group: &Arc<FiniteGroup>) -> WbResult<Rep> {
    let r: RepFile = read_json(path)?;
    r.to_rep(group, path, "")
}

/// Resolves an element by index or label.
pub fn resolve_element(group: &FiniteGroup, e: &ElementRef) -> Option<usize> {
    match e {
        ElementRef::Index(i) => (*i < group.order()).then_some(*i),
        ElementRef::Label(l) => match group.labels() {
            Some(labels) => labels.iter().position(|x| x == l),
            None => l.parse::<usize>().ok().filter(|&i| i < group.order()),
        },
    }
}

/// `--subgroup` argument: comma- or space-separated generators (indices or labels).
/// An empty list gives the trivial subgroup.
pub fn parse_subgroup(group: &Arc<FiniteGroup>, spec: &str) -> WbResult<Subgroup> {
    let mut gens = Vec::new();
    for tok in spec.split([',', ' ']).map(str::trim).filter(|t| !t.is_empty()) {
        let e = match tok.parse::<usize>() {
            Ok(i) => ElementRef::Index(i),
            Err(_) => ElementRef::Label(tok.to_string()),
        };
        let g = resolve_element(group, &e).ok_or_else(|| WbError::Args(format!("--subgroup: unknown element '{tok}'")))?;
        gens.push(g);
    }
    Subgroup::generated(group, &gens).map_err(|e| WbError::Args(format!("--subgroup: {e}")))
}

impl ChainFile {
    pub fn from_chain(chain: &SubgroupChain<f64>) -> Self {
        let levels = chain
            .levels()
            .iter()
            .map(|l| LevelFile {
                elements: Some(l.subgroup.members().iter().map(|&m| ElementRef::Index(m)).collect()),
                generators: None,
                irreps: l.irreps.iter().map(RepFile::from_rep).collect(),
            })
            .collect();
        Self { levels }
    }

    pub fn to_chain(&self, group: &Arc<FiniteGroup>, theta: &Rep, path: &Path) -> WbResult<SubgroupChain<f64>> {
        let mut levels = Vec::with_capacity(self.levels.len());
        for (l, level) in self.levels.iter().enumerate() {
            let resolve = |refs: &[ElementRef], key: &str| -> WbResult<Vec<usize>> {
                refs.iter()
                    .enumerate()
                    .map(|(i, e)| resolve_element(group, e).ok_or_else(|| load_err(path, format!("levels[{l}].{key}[{i}]"), format!("unknown element {e:?}"))))
                    .collect()
            };
            let sub = match (&level.elements, &level.generators) {
                (Some(e), None) => Subgroup::from_elements(group, &resolve(e, "elements")?),
                (None, Some(g)) => Subgroup::generated(group, &resolve(g, "generators")?),
                _ => return Err(load_err(path, format!("levels[{l}]"), "exactly one of 'elements' or 'generators' is required")),
            }
            .map_err(|e| load_err(path, format!("levels[{l}]"), e.to_string()))?;
            let irreps = level
                .irreps
                .iter()
                .enumerate()
                .map(|(i, r)| r.to_rep(sub.group(), path, &format!("levels[{l}].irreps[{i}].")))
                .collect::<WbResult<Vec<_>>>()?;
            levels.push(ChainLevel { subgroup: sub, irreps });
        }
        SubgroupChain::new(levels, theta.clone()).map_err(|e| load_err(path, "levels", e.to_string()))
    }
}

/// `[re, im]` pairs for JSON output.
pub fn complex_pair(z: Complex<f64>) -> [f64; 2] {
    [z.re, z.im]
}

pub fn matrix_json(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| complex_pair(m[(i, j)])).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use indrep::corpus;

    #[test]
    fn group_roundtrip() {
        let s3 = corpus::symmetric::<f64>(3).unwrap();
        let f = GroupFile::from_group(&s3.group);
        let text = serde_json::to_string(&f).unwrap();
        let back: GroupFile = parse_json(Path::new("g.json"), &text).unwrap();
        assert_eq!(*back.to_group(Path::new("g.json")).unwrap(), *s3.group);
    }

    #[test]
    fn rep_roundtrip() {
        let d4 = corpus::dihedral4::<f64>().unwrap();
        for r in &d4.irreps {
            let f = RepFile::from_rep(r);
            let back = f.to_rep(&d4.group, Path::new("r.json"), "").unwrap();
            assert_eq!(back.max_matrix_diff(r), Some(0.0));
        }
    }

    #[test]
    fn errors_name_the_field() {
        let p = Path::new("g.json");
        let e = parse_json::<GroupFile>(p, r#"{"order": 2, "cayley": [[0, 1], [1, "x"]]}"#).unwrap_err();
        assert!(e.to_string().contains("cayley[1][1]"), "{e}");
        let e = parse_json::<GroupFile>(p, r#"{"order": 2, "cayley": [[0, 1], [1, 0]], "lables": []}"#).unwrap_err();
        assert!(e.to_string().contains("lables"), "{e}");
        let f: GroupFile = parse_json(p, r#"{"order": 3, "cayley": [[0, 1], [1, 0]]}"#).unwrap();
        assert!(f.to_group(p).unwrap_err().to_string().contains("order"));
        let f: GroupFile = parse_json(p, r#"{"order": 2, "cayley": [[0, 1], [0, 0]]}"#).unwrap();
        assert!(f.to_group(p).unwrap_err().to_string().contains("cayley"));
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let r = RepFile { label: "x".into(), degree: 1, matrices: vec![vec![vec![[1.0, 0.0]]], vec![vec![[1.0, 0.0], [0.0, 0.0]]]] };
        assert!(r.to_rep(&z2, Path::new("r.json"), "").unwrap_err().to_string().contains("matrices[1][0]"));
    }

    #[test]
    fn subgroup_by_label_or_index() {
        let s3 = corpus::symmetric::<f64>(3).unwrap();
        let a = parse_subgroup(&s3.group, "(12)").unwrap();
        let b = parse_subgroup(&s3.group, &s3.element("(12)").unwrap().to_string()).unwrap();
        assert_eq!(a.members(), b.members());
        assert_eq!(parse_subgroup(&s3.group, "").unwrap().order(), 1);
        assert!(parse_subgroup(&s3.group, "(14)").is_err());
    }
}
