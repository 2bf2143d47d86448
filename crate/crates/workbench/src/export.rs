//! Writes the bundled corpus as input files, one directory per job.

use std::fs;
use std::path::{Path, PathBuf};

use indrep::corpus::{self, symmetric_chain, CorpusPair};

use crate::error::{Context, WbError, WbResult};
use crate::io::{write_json, ChainFile, GroupFile, RepFile, RepListFile};

/// One exported job: its directory and the arguments that run it.
#[derive(Debug, Clone)]
pub struct ExportedJob {
    pub name: String,
    pub dir: PathBuf,
    pub args: Vec<String>,
}

pub fn slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

fn export_pair(root: &Path, p: &CorpusPair<f64>) -> WbResult<ExportedJob> {
    let dir = root.join(slug(&p.name));
    fs::create_dir_all(&dir).map_err(|e| WbError::Io { path: dir.clone(), message: e.to_string() })?;
    write_json(&dir.join("group.json"), &GroupFile::from_group(&p.group.group))?;
    write_json(&dir.join("irreps.json"), &RepListFile { irreps: p.group.irreps.iter().map(RepFile::from_rep).collect() })?;
    write_json(&dir.join("theta.json"), &RepFile::from_rep(&p.theta))?;
    write_json(&dir.join("k-irreps.json"), &RepListFile { irreps: p.k_irreps.iter().map(RepFile::from_rep).collect() })?;
    let members: Vec<String> = p.subgroup.members().iter().map(|m| m.to_string()).collect();
    let mut args = vec![
        "--group".into(),
        dir.join("group.json").display().to_string(),
        "--subgroup".into(),
        members.join(","),
        "--theta".into(),
        dir.join("theta.json").display().to_string(),
        "--irreps".into(),
        dir.join("irreps.json").display().to_string(),
        "--k-irreps".into(),
        dir.join("k-irreps.json").display().to_string(),
    ];
    // S_1 ≤ … ≤ S_n chains sit on the trivial-K pairs of S_3 and S_4.
    if p.subgroup.order() == 1 && p.theta.degree() == 1 {
        if let Some(n) = p.group.name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 3) {
            let chain = symmetric_chain::<f64>(n, "trivial").ctx("corpus/symmetric_chain")?;
            write_json(&dir.join("chain.json"), &ChainFile::from_chain(&chain))?;
            args.push("--chain".into());
            args.push(dir.join("chain.json").display().to_string());
        }
    }
    Ok(ExportedJob { name: p.name.clone(), dir, args })
}

/// Exports every standard pair and writes `jobs.txt` with one argument line per job.
pub fn export_corpus(root: &Path) -> WbResult<Vec<ExportedJob>> {
    fs::create_dir_all(root).map_err(|e| WbError::Io { path: root.to_path_buf(), message: e.to_string() })?;
    let pairs = corpus::standard_pairs::<f64>().ctx("corpus/standard_pairs")?;
    let jobs = pairs.iter().map(|p| export_pair(root, p)).collect::<WbResult<Vec<_>>>()?;
    let listing: String = jobs.iter().map(|j| format!("{}\t{}\n", j.name, j.args.join(" "))).collect();
    let path = root.join("jobs.txt");
    fs::write(&path, listing).map_err(|e| WbError::Io { path, message: e.to_string() })?;
    Ok(jobs)
}
