//! Jobs: resolved inputs plus the pipelines behind each subcommand.

use std::path::PathBuf;
use std::sync::Arc;

use indrep::commutant::verify_commutant;
use indrep::frobenius::{decompose_induced, verify_decomposition, verify_frobenius_identities, InducedRep};
use indrep::gt::{enumerate_paths, realize_path, validate_chain, verify_gt_main, verify_induction_in_stages};
use indrep::hecke::HeckeAlgebra;
use indrep::linalg::norm;
use indrep::rep::{character_from_diagonal, verify_schur_relations};
use indrep::{Chain, Decomposition, FiniteGroup, Rep, Report, Subgroup};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Context, WbError, WbResult};
use crate::io::{self, complex_pair, matrix_json};
use crate::oracle::{oracle_suite, OracleBlock};
use crate::output::{RunReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Decompose,
    HeckeReport,
    GtReport,
    VerifyAll,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Decompose => "decompose",
            Task::HeckeReport => "hecke-report",
            Task::GtReport => "gt-report",
            Task::VerifyAll => "verify-all",
        }
    }
}

/// Everything a run needs, by file reference.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub group: PathBuf,
    /// Generators of `K`, by index or label.
    pub subgroup: String,
    pub theta: PathBuf,
    pub irreps: Vec<PathBuf>,
    /// Irreps of `K`, optional; used to complete adapted bases.
    pub k_irreps: Vec<PathBuf>,
    pub chain: Option<PathBuf>,
    pub v_index: usize,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

/// Resolved inputs.
#[derive(Debug, Clone)]
pub struct Job {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub subgroup: Subgroup,
    pub theta: Rep,
    pub irreps: Vec<Rep>,
    pub k_irreps: Option<Vec<Rep>>,
    pub chain: Option<Chain>,
    pub v_index: usize,
    pub tol: f64,
    pub seed: u64,
    /// Random probes per property (intertwiners, commutant and Hecke elements).
    pub samples: usize,
    /// Unit vectors per irrep in the character reconstruction sweep.
    pub unit_vector_samples: usize,
}

pub const DEFAULT_TOL: f64 = indrep::TAU;
pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_UNIT_VECTOR_SAMPLES: usize = 5;

impl Job {
    pub fn load(spec: &JobSpec) -> WbResult<Self> {
        let gf: io::GroupFile = io::read_json(&spec.group)?;
        let group = gf.to_group(&spec.group)?;
        let subgroup = io::parse_subgroup(&group, &spec.subgroup)?;
        let theta = io::load_rep(&spec.theta, subgroup.group())?;
        let irreps = io::load_reps(&spec.irreps, &group)?;
        let k_irreps = if spec.k_irreps.is_empty() { None } else { Some(io::load_reps(&spec.k_irreps, subgroup.group())?) };
        let chain = match &spec.chain {
            Some(p) => {
                let cf: io::ChainFile = io::read_json(p)?;
                Some(cf.to_chain(&group, &theta, p)?)
            }
            None => None,
        };
        let name = spec.group.file_stem().map_or_else(|| "job".into(), |s| s.to_string_lossy().into_owned());
        let job = Self {
            name,
            group,
            subgroup,
            theta,
            irreps,
            k_irreps,
            chain,
            v_index: spec.v_index,
            tol: spec.tol,
            seed: spec.seed,
            samples: spec.samples,
            unit_vector_samples: DEFAULT_UNIT_VECTOR_SAMPLES,
        };
        job.validate()?;
        Ok(job)
    }

    /// In-memory job with default tolerance, seed and sample counts.
    pub fn from_parts(name: &str, subgroup: Subgroup, theta: Rep, irreps: Vec<Rep>, k_irreps: Option<Vec<Rep>>, chain: Option<Chain>) -> WbResult<Self> {
        let job = Self {
            name: name.into(),
            group: subgroup.parent().clone(),
            subgroup,
            theta,
            irreps,
            k_irreps,
            chain,
            v_index: 0,
            tol: DEFAULT_TOL,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            unit_vector_samples: DEFAULT_UNIT_VECTOR_SAMPLES,
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> WbResult<()> {
        if !(self.tol > 0.0) {
            return Err(WbError::Args(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.samples == 0 {
            return Err(WbError::Args("--samples must be at least 1".into()));
        }
        if self.theta.group() != self.subgroup.group() {
            return Err(WbError::Args("theta is not a representation of the subgroup".into()));
        }
        if let Some(r) = self.irreps.iter().find(|r| r.group() != &self.group) {
            return Err(WbError::Args(format!("irrep '{}' is not a representation of the group", r.label())));
        }
        if self.v_index >= self.theta.degree() {
            return Err(WbError::Args(format!("--v-index {} out of range for a theta of degree {}", self.v_index, self.theta.degree())));
        }
        if let Some(chain) = &self.chain {
            if chain.group() != &self.group {
                return Err(WbError::Args("the chain lives in a different group".into()));
            }
            if chain.k().members() != self.subgroup.members() {
                return Err(WbError::Args("the bottom level of the chain must be the subgroup K".into()));
            }
        }
        Ok(())
    }

    /// A dedicated stream per block, so blocks can run in any order.
    fn rng(&self, block: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(block);
        rng
    }

    fn induced(&self) -> WbResult<InducedRep<f64>> {
        InducedRep::new(&self.theta, &self.subgroup).ctx("frobenius/induce")
    }

    fn decomposition(&self) -> WbResult<Decomposition> {
        decompose_induced(&self.induced()?, &self.irreps).ctx("frobenius/decompose_induced")
    }

    fn hecke(&self, dec: Decomposition) -> WbResult<HeckeAlgebra<f64>> {
        HeckeAlgebra::new(dec, self.v_index, &self.irreps, self.k_irreps.as_deref()).ctx("hecke/build")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupEcho {
    pub order: usize,
    pub abelian: bool,
    pub classes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepEcho {
    pub label: String,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub name: String,
    pub group: GroupEcho,
    pub subgroup: Vec<String>,
    pub theta: RepEcho,
    pub irreps: Vec<RepEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_irreps: Option<Vec<RepEcho>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<usize>>,
    pub v_index: usize,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

fn echo(r: &Rep) -> RepEcho {
    RepEcho { label: r.label().into(), degree: r.degree() }
}

impl Job {
    pub fn inputs(&self) -> Inputs {
        Inputs {
            name: self.name.clone(),
            group: GroupEcho { order: self.group.order(), abelian: self.group.is_abelian(), classes: self.group.conjugacy_classes().len() },
            subgroup: self.subgroup.members().iter().map(|&m| self.group.label(m)).collect(),
            theta: echo(&self.theta),
            irreps: self.irreps.iter().map(echo).collect(),
            k_irreps: self.k_irreps.as_ref().map(|ks| ks.iter().map(echo).collect()),
            chain: self.chain.as_ref().map(|c| c.levels().iter().map(|l| l.subgroup.order()).collect()),
            v_index: self.v_index,
            tol: self.tol,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchurBlock {
    pub irreps: Vec<String>,
    pub unit_vectors_per_irrep: usize,
}

/// Orthogonality and convolution relations over every ordered irrep pair, and the character rebuilt from the
/// diagonal coefficient of random unit vectors.
pub fn schur_checks(irreps: &[Rep], unit_vectors: usize, seed: u64, tol: f64) -> WbResult<Report> {
    let pairs: Vec<(usize, usize)> = (0..irreps.len()).flat_map(|a| (0..irreps.len()).map(move |b| (a, b))).collect();
    let parts: Vec<Report> = pairs.par_iter().map(|&(a, b)| verify_schur_relations(&irreps[a], &irreps[b], tol)).collect();
    let mut report = Report::new();
    for (&(a, b), r) in pairs.iter().zip(parts) {
        report.absorb(&format!("pair[{},{}]", irreps[a].label(), irreps[b].label()), r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    for sigma in irreps {
        let chi = sigma.character();
        let mut worst = indrep::report::MaxResidual::new();
        for s in 0..unit_vectors {
            let v: Vec<Complex<f64>> = (0..sigma.degree()).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let n = norm(&v);
            let w: Vec<Complex<f64>> = v.into_iter().map(|z| z / n).collect();
            let rebuilt = character_from_diagonal(sigma, &w).ctx("rep/character_from_diagonal")?;
            worst.observe(rebuilt.max_abs_diff(&chi), || format!("sample {s}"));
        }
        report.push(worst.into_check(format!("unit_vectors[{}]/character_from_diagonal", sigma.label()), tol));
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Constituent {
    pub label: String,
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomBasisJson {
    pub label: String,
    pub elements: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeBlock {
    pub dim_induced: usize,
    pub index: usize,
    pub d_theta: usize,
    pub constituents: Vec<Constituent>,
    pub commutant_dim: usize,
    pub hom_bases: Vec<HomBasisJson>,
}

fn decompose_block(dec: &Decomposition) -> DecomposeBlock {
    DecomposeBlock {
        dim_induced: dec.induced.dim(),
        index: dec.induced.index(),
        d_theta: dec.induced.d_theta(),
        constituents: dec.entries.iter().map(|e| Constituent { label: e.label().into(), degree: e.d_sigma(), multiplicity: e.multiplicity }).collect(),
        commutant_dim: dec.commutant_dim(),
        hom_bases: dec.entries.iter().map(|e| HomBasisJson { label: e.label().into(), elements: e.basis.elements.iter().map(matrix_json).collect() }).collect(),
    }
}

/// Frobenius identities per irrep, the isotypic decomposition, and the commutant.
fn decompose_checks(job: &Job, dec: &Decomposition) -> WbResult<Report> {
    let ind = &dec.induced;
    let parts: Vec<WbResult<Report>> = job
        .irreps
        .par_iter()
        .enumerate()
        .map(|(i, sigma)| {
            let mut rng = job.rng(100 + i as u64);
            verify_frobenius_identities(ind, sigma, job.samples, &mut rng, job.tol).ctx("frobenius/verify_frobenius_identities")
        })
        .collect();
    let mut report = Report::new();
    for (sigma, r) in job.irreps.iter().zip(parts) {
        report.absorb(&format!("frobenius[{}]", sigma.label()), r?);
    }
    report.absorb("decomposition", verify_decomposition(dec, job.tol).ctx("frobenius/verify_decomposition")?);
    let mut rng = job.rng(2);
    report.absorb("commutant", verify_commutant(dec, job.samples, &mut rng, job.tol).ctx("commutant/verify_commutant")?);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassValue {
    pub class: String,
    pub size: usize,
    pub curtis_fossum: [f64; 2],
    pub character: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeConstituent {
    pub label: String,
    pub multiplicity: usize,
    pub characters: Vec<ClassValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeBlock {
    pub v: Vec<[f64; 2]>,
    pub psi: Vec<[f64; 2]>,
    pub dimension: usize,
    pub commutative: bool,
    pub constituents: Vec<HeckeConstituent>,
}

fn hecke_block(h: &HeckeAlgebra<f64>) -> WbResult<HeckeBlock> {
    let g = h.group();
    let classes = g.conjugacy_classes();
    let mut constituents = Vec::new();
    for (s, e) in h.dec.entries.iter().enumerate() {
        let table = h.curtis_fossum_table(s).ctx("hecke/curtis_fossum_table")?;
        let chi = e.sigma.character_values();
        let characters = classes
            .representatives()
            .into_iter()
            .enumerate()
            .map(|(c, x)| ClassValue { class: g.label(x), size: classes.class(c).len(), curtis_fossum: complex_pair(table[x]), character: complex_pair(chi[x]) })
            .collect();
        constituents.push(HeckeConstituent { label: e.label().into(), multiplicity: e.multiplicity, characters });
    }
    Ok(HeckeBlock {
        v: h.psi.v().iter().copied().map(complex_pair).collect(),
        psi: h.psi.values().values().iter().copied().map(complex_pair).collect(),
        dimension: h.dec.commutant_dim(),
        commutative: h.dec.entries.iter().all(|e| e.multiplicity <= 1),
        constituents,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelJson {
    pub order: usize,
    pub irreps: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathJson {
    pub sigma: String,
    pub labels: Vec<String>,
    pub l: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GtBlock {
    pub levels: Vec<LevelJson>,
    /// Per step, `(upper, lower)` label pairs.
    pub edges: Vec<Vec<(String, String)>>,
    pub paths: Vec<PathJson>,
}

fn gt_run(job: &Job, chain: &Chain) -> WbResult<(GtBlock, Report)> {
    let diagram = validate_chain(chain).ctx("gt/validate_chain")?;
    let mut paths = Vec::new();
    for sigma in diagram.top() {
        for p in enumerate_paths(&diagram, sigma.label()) {
            let real = realize_path(chain, &diagram, &p).ctx("gt/realize_path")?;
            paths.push(PathJson { sigma: sigma.label().into(), labels: p.labels.clone(), l: matrix_json(&real.l) });
        }
    }
    let block = GtBlock {
        levels: diagram
            .levels
            .iter()
            .zip(chain.levels())
            .map(|(j, l)| LevelJson { order: l.subgroup.order(), irreps: j.iter().map(|r| r.label().to_string()).collect() })
            .collect(),
        edges: diagram.adjacency(),
        paths,
    };
    let mut report = Report::new();
    for top in 1..chain.len() {
        for middle in 0..top {
            let r = verify_induction_in_stages(chain, middle, top, job.tol).ctx("gt/induction_in_stages")?;
            report.absorb(&format!("stages[H{}<H{}]", middle + 1, top + 1), r);
        }
    }
    let parts: Vec<WbResult<Report>> =
        diagram.top().par_iter().map(|s| verify_gt_main(chain, &diagram, s.label(), job.tol).ctx("gt/verify_gt_main")).collect();
    for (s, r) in diagram.top().iter().zip(parts) {
        report.absorb(&format!("paths[{}]", s.label()), r?);
    }
    Ok((block, report))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur: Option<SchurBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decompose: Option<DecomposeBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hecke: Option<HeckeBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gt: Option<GtBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracles: Option<OracleBlock>,
}

/// Runs `task`. Blocks draw from independent seeded streams and are
/// assembled in a fixed order, so the report does not depend on scheduling.
pub fn run(job: &Job, task: Task) -> WbResult<RunReport> {
    let mut results = Results::default();
    let mut checks = Report::new();
    let wants = |t: Task| task == t || task == Task::VerifyAll;

    if task == Task::VerifyAll {
        results.schur = Some(SchurBlock { irreps: job.irreps.iter().map(|r| r.label().to_string()).collect(), unit_vectors_per_irrep: job.unit_vector_samples });
        checks.absorb("schur", schur_checks(&job.irreps, job.unit_vector_samples, job.seed, job.tol)?);
    }
    let dec = job.decomposition()?;
    if wants(Task::Decompose) {
        results.decompose = Some(decompose_block(&dec));
        checks.absorb("decompose", decompose_checks(job, &dec)?);
    }
    let hecke = if wants(Task::HeckeReport) { Some(job.hecke(dec.clone())?) } else { None };
    if task == Task::VerifyAll {
        let (block, r) = oracle_suite(job, &dec, hecke.as_ref())?;
        results.oracles = Some(block);
        checks.absorb("oracle", r);
    }
    if let Some(h) = &hecke {
        results.hecke = Some(hecke_block(h)?);
        let mut rng = job.rng(3);
        checks.absorb("hecke", h.verify(job.samples, &mut rng, job.tol).ctx("hecke/verify")?);
    }
    if wants(Task::GtReport) {
        match &job.chain {
            Some(chain) => {
                let (block, r) = gt_run(job, chain)?;
                results.gt = Some(block);
                checks.absorb("gt", r);
            }
            None if task == Task::GtReport => return Err(WbError::Args("gt-report needs --chain".into())),
            None => {}
        }
    }
    Ok(RunReport::new(task, job.inputs(), results, checks))
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }
}
