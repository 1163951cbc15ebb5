//! Manifests: lists of command runs with expected values, checked concurrently.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ordmult::{Error, Result};

use crate::format::point;
use crate::{Outcome, Summary, VerifyArgs, EXIT_INEXACT, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub name: String,
    /// Parameters of the sphere example, checked against the scene's own values.
    #[serde(default)]
    pub sphere_parameters: Option<BTreeMap<String, String>>,
    #[serde(rename = "job")]
    pub jobs: Vec<Job>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub name: String,
    pub command: String,
    /// Path relative to the manifest; omitted for commands without an input file.
    #[serde(default)]
    pub input: Option<String>,
    #[serde(default)]
    pub args: Vec<String>,
    /// Expected exit status of the command, 0 by default.
    #[serde(default)]
    pub status: i32,
    #[serde(default)]
    pub expect: Expect,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default)]
    pub value: Option<ExpectedValue>,
    #[serde(default)]
    pub exact: Option<bool>,
    /// Each listed part must be reported with this value; unlisted parts are not checked.
    #[serde(default)]
    pub parts: BTreeMap<String, u64>,
    #[serde(default)]
    pub witness_nu: Option<Vec<i64>>,
    /// The full vertex list, in the printed order.
    #[serde(default)]
    pub vertices: Option<Vec<Vec<i64>>>,
    /// Normals that must appear among the facet normals.
    #[serde(default)]
    pub normals_include: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ExpectedValue {
    Int(u64),
    Text(String),
}

impl std::fmt::Display for ExpectedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpectedValue::Int(v) => write!(f, "{v}"),
            ExpectedValue::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JobResult {
    pub name: String,
    pub passed: bool,
    pub status: i32,
    pub mismatches: Vec<String>,
    pub summary: Summary,
}

pub fn load(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let m: Manifest = toml::from_str(&text).map_err(|e| Error::Input(format!("manifest: {e}")))?;
    if m.jobs.is_empty() {
        return Err(Error::Input("manifest has no jobs".into()));
    }
    for (i, j) in m.jobs.iter().enumerate() {
        if m.jobs[..i].iter().any(|k| k.name == j.name) {
            return Err(Error::Input(format!("job name '{}' repeated", j.name)));
        }
        if j.command == "verify" {
            return Err(Error::Input(format!("job '{}': manifests cannot run verify", j.name)));
        }
    }
    Ok(m)
}

fn job_args(j: &Job, dir: &Path) -> Vec<String> {
    let mut v = vec!["ordmult".to_string(), j.command.clone()];
    if let Some(input) = &j.input {
        v.push(dir.join(input).to_string_lossy().into_owned());
    }
    v.extend(j.args.iter().map(|a| {
        // Flags taking paths, e.g. --scene, are resolved like the input.
        a.strip_prefix("@").map_or_else(|| a.clone(), |p| dir.join(p).to_string_lossy().into_owned())
    }));
    v
}

fn compare(j: &Job, o: &Outcome) -> Vec<String> {
    let mut bad = Vec::new();
    if o.code != j.status {
        bad.push(format!("exit status {} (expected {}){}", o.code, j.status, first_line(&o.stderr)));
    }
    let s = &o.summary;
    let e = &j.expect;
    if let Some(v) = &e.value {
        let want = v.to_string();
        match &s.value {
            Some(got) if *got == want => {}
            got => bad.push(format!("value {} (expected {want})", got.as_deref().unwrap_or("none"))),
        }
    }
    if let Some(x) = e.exact {
        if s.exact != Some(x) {
            bad.push(format!("exact {:?} (expected {x})", s.exact));
        }
    }
    for (k, v) in &e.parts {
        match s.parts.get(k) {
            Some(g) if g == v => {}
            Some(g) => bad.push(format!("part '{k}' = {g} (expected {v})")),
            None => bad.push(format!("part '{k}' missing (expected {v})")),
        }
    }
    if let Some(w) = &e.witness_nu {
        if s.witness_nu.as_ref() != Some(w) {
            bad.push(format!("witness nu {} (expected {})", s.witness_nu.as_deref().map_or("none".into(), point), point(w)));
        }
    }
    if let Some(v) = &e.vertices {
        if &s.vertices != v {
            bad.push(format!("vertices {} (expected {})", crate::format::points(&s.vertices), crate::format::points(v)));
        }
    }
    for n in &e.normals_include {
        if !s.normals.contains(n) {
            bad.push(format!("facet normal {} missing", point(n)));
        }
    }
    bad
}

fn first_line(s: &str) -> String {
    s.lines().next().map_or(String::new(), |l| format!(": {l}"))
}

/// Runs every job, concurrently, and returns the results in manifest order.
pub fn run_jobs(m: &Manifest, dir: &Path) -> Vec<JobResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = m.jobs.iter().map(|j| scope.spawn(move || crate::run_args(job_args(j, dir)))).collect();
        handles
            .into_iter()
            .zip(&m.jobs)
            .map(|(h, j)| {
                let o = h.join().unwrap_or_else(|_| Outcome {
                    code: EXIT_INTERNAL,
                    stdout: String::new(),
                    stderr: "job thread panicked".into(),
                    summary: Summary::default(),
                });
                let mismatches = compare(j, &o);
                JobResult { name: j.name.clone(), passed: mismatches.is_empty(), status: o.code, mismatches, summary: o.summary }
            })
            .collect()
    })
}

fn check_sphere_parameters(m: &Manifest, dir: &Path) -> Result<Vec<String>> {
    let Some(want) = &m.sphere_parameters else {
        return Ok(vec![]);
    };
    let mut bad = Vec::new();
    for j in &m.jobs {
        let uses_scene = j.command == "ordered" || (j.command == "spheres" && j.args.iter().any(|a| a == "--scene"));
        if !uses_scene {
            continue;
        }
        let path = match (&j.input, j.command.as_str()) {
            (Some(i), "ordered") => dir.join(i),
            _ => match j.args.iter().position(|a| a == "--scene").and_then(|k| j.args.get(k + 1)) {
                Some(p) => dir.join(p.trim_start_matches('@')),
                None => continue,
            },
        };
        let scene = ordmult::scene::Scene::load(&path)?;
        if let Some(got) = &scene.sphere_parameters {
            if got != want {
                bad.push(format!("job '{}': scene sphere parameters differ from the manifest", j.name));
            }
        }
    }
    Ok(bad)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    manifest: String,
    passed: usize,
    failed: usize,
    problems: &'a [String],
    jobs: &'a [JobResult],
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let path: PathBuf = match (&a.input, &a.manifest) {
        (Some(p), None) | (None, Some(p)) => p.clone(),
        (Some(_), Some(_)) => return Err(Error::Input("give the manifest once".into())),
        (None, None) => return Err(Error::Input("no manifest given".into())),
    };
    let m = load(&path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let problems = check_sphere_parameters(&m, &dir)?;
    let results = run_jobs(&m, &dir);
    let passed = results.iter().filter(|r| r.passed).count();
    let failed = results.len() - passed;
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{} {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name));
        for x in &r.mismatches {
            text.push_str(&format!("     {x}\n"));
        }
    }
    for p in &problems {
        text.push_str(&format!("FAIL {p}\n"));
    }
    text.push_str(&format!("{passed} of {} jobs passed\n", results.len()));
    // Worst outcome decides: input problems, then internal failures, then mismatches.
    let failing: Vec<&JobResult> = results.iter().filter(|r| !r.passed).collect();
    let code = if failing.is_empty() && problems.is_empty() {
        EXIT_OK
    } else if failing.iter().any(|r| r.status == EXIT_INPUT && r.status != job_status(&m, &r.name)) {
        EXIT_INPUT
    } else if failing.iter().any(|r| r.status == EXIT_INTERNAL) {
        EXIT_INTERNAL
    } else {
        EXIT_INEXACT
    };
    let report = VerifyReport { manifest: m.name.clone(), passed, failed, problems: &problems, jobs: &results };
    let stdout = if a.json {
        let mut s = serde_json::to_string_pretty(&report).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        s
    } else {
        text
    };
    Ok(Outcome { code, stdout, stderr: String::new(), summary: Summary { value: Some(passed.to_string()), ..Default::default() } })
}

fn job_status(m: &Manifest, name: &str) -> i32 {
    m.jobs.iter().find(|j| j.name == name).map_or(0, |j| j.status)
}
