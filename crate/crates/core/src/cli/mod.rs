//! Library side of the command-line tool: configuration, output files and
//! manifest replay.

pub mod config;
pub mod manifest;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub use config::{Command, ConfigSources, Plan};
pub use manifest::{RunManifest, MANIFEST_FILE};

use crate::error::{Error, Result};
use crate::experiment::{run_conditions, Detail, SweepResults};

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const TRACE_FILE: &str = "trace.csv";
pub const LEXICON_FILE: &str = "lexicon.csv";
pub const LEARNER_STATE_FILE: &str = "learner_state.csv";

/// Runs `f` on a dedicated pool of `jobs` threads, or the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::config("jobs", "must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("jobs", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_plan(plan: &Plan, detail: Detail, jobs: Option<usize>) -> Result<SweepResults> {
    with_jobs(jobs, || {
        run_conditions(&plan.base, &plan.conditions(), detail)
    })?
}

fn output_roles(detail: Detail) -> Vec<(&'static str, &'static str)> {
    let mut roles = vec![("results", RESULTS_FILE), ("aggregate", AGGREGATE_FILE)];
    if detail.trace {
        roles.push(("trace", TRACE_FILE));
    }
    if detail.state {
        roles.push(("lexicon", LEXICON_FILE));
        roles.push(("learner_state", LEARNER_STATE_FILE));
    }
    roles
}

fn render_role(role: &str, results: &SweepResults, dims: usize) -> Result<Vec<u8>> {
    match role {
        "results" => output::render_results(results),
        "aggregate" => output::render_aggregate(results),
        "trace" => output::render_trace(results),
        "lexicon" => output::render_lexicons(results, dims),
        "learner_state" => output::render_learner_states(results, dims),
        other => Err(Error::invalid(format!("unknown output role `{other}`"))),
    }
}

/// Writes the manifest, then runs the plan and writes every output into
/// `out_dir`.
pub fn execute(
    plan: &Plan,
    out_dir: &Path,
    detail: Detail,
    jobs: Option<usize>,
) -> Result<RunManifest> {
    fs::create_dir_all(out_dir)?;
    let created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = RunManifest {
        plan: plan.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        created_unix,
        outputs: output_roles(detail)
            .into_iter()
            .map(|(r, f)| (r.to_string(), f.to_string()))
            .collect(),
    };
    fs::write(out_dir.join(MANIFEST_FILE), manifest.render())?;

    let results = run_plan(plan, detail, jobs)?;
    for (role, file) in &manifest.outputs {
        fs::write(
            out_dir.join(file),
            render_role(role, &results, plan.base.dims)?,
        )?;
    }
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayCheck {
    pub file: PathBuf,
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub manifest: RunManifest,
    pub checks: Vec<ReplayCheck>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.identical)
    }
}

/// Re-runs a manifest and compares each regenerated output byte for byte
/// with the recorded file. A missing recorded file counts as a mismatch.
pub fn replay(manifest_path: &Path, jobs: Option<usize>) -> Result<ReplayReport> {
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::Manifest {
        path: manifest_path.to_path_buf(),
        message: e.to_string(),
    })?;
    let manifest = RunManifest::parse(&text, manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let detail = Detail {
        trace: manifest.outputs.iter().any(|(r, _)| r == "trace"),
        state: manifest
            .outputs
            .iter()
            .any(|(r, _)| r == "lexicon" || r == "learner_state"),
    };
    let results = run_plan(&manifest.plan, detail, jobs)?;
    let mut checks = Vec::new();
    for (role, file) in &manifest.outputs {
        let fresh = render_role(role, &results, manifest.plan.base.dims)?;
        let path = dir.join(file);
        let identical = fs::read(&path).map(|old| old == fresh).unwrap_or(false);
        checks.push(ReplayCheck {
            file: path,
            identical,
        });
    }
    Ok(ReplayReport { manifest, checks })
}
