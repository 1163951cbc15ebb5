//! The individual commands.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use ordmult::lattice::{newton_diagram, LatticeDiagram};
use ordmult::mult::{certified_mult, curve_order_estimate, projected_mult_along_z, MultResult, SampleCheck};
use ordmult::parse::parse_poly;
use ordmult::scene::{Ledger, Scene};
use ordmult::spheres::{self, SpherePipeline, SphereParams, SphereReport};
use ordmult::system::{parse_field, parse_point, System};
use ordmult::{Error, Result, SparsePoly};

use crate::format::{self, point, points};
use crate::{CurveOrdArgs, Mult0Args, NdArgs, OrderedArgs, Outcome, SpheresArgs, Summary};

fn load_system(path: &Path, field: Option<&str>) -> Result<System> {
    let sys = System::load(path)?;
    match field {
        Some(f) => {
            let mut spec = sys.spec.clone();
            spec.field = f.to_string();
            System::from_spec(spec)
        }
        None => Ok(sys),
    }
}

fn render(json: bool, report: &impl Serialize, text: String) -> Result<String> {
    if json {
        let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(format!("serializing the report: {e}")))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(text)
    }
}

#[derive(Serialize)]
struct FaceReport {
    dim: usize,
    normal: Vec<i64>,
    min: i64,
    vertices: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct DiagramReport {
    name: String,
    vars: Vec<String>,
    vertices: Vec<Vec<i64>>,
    faces: Vec<FaceReport>,
    facet_normals: Vec<Vec<i64>>,
}

fn diagram_report(name: &str, vars: &[String], d: &LatticeDiagram) -> DiagramReport {
    let mut vertices = d.vertices().to_vec();
    format::grlex_sort(&mut vertices);
    let mut faces: Vec<FaceReport> = d
        .faces()
        .iter()
        .filter(|f| f.dim > 0)
        .map(|f| {
            let mut v = f.vertices.clone();
            format::grlex_sort(&mut v);
            FaceReport { dim: f.dim, normal: f.normal.clone(), min: f.min, vertices: v }
        })
        .collect();
    faces.sort_by(|a, b| (b.dim, &a.normal).cmp(&(a.dim, &b.normal)));
    let mut facet_normals: Vec<Vec<i64>> = d.facet_normals().into_iter().map(|w| w.0).collect();
    facet_normals.sort();
    DiagramReport { name: name.into(), vars: vars.to_vec(), vertices, faces, facet_normals }
}

fn diagram_text(r: &DiagramReport, out: &mut String) {
    out.push_str(&format!("{}  ({})\n", r.name, r.vars.join(", ")));
    out.push_str(&format!("  vertices: {}\n", points(&r.vertices)));
    if r.faces.is_empty() {
        out.push_str("  compact faces: none beyond vertices\n");
    } else {
        out.push_str("  compact faces:\n");
        for f in &r.faces {
            out.push_str(&format!("    dim {}  normal {}  min {}  vertices {}\n", f.dim, point(&f.normal), f.min, points(&f.vertices)));
        }
    }
    out.push_str(&format!("  facet normals: {}\n", if r.facet_normals.is_empty() { "none".into() } else { points(&r.facet_normals) }));
}

fn support_diagram(f: &SparsePoly, idx: &[usize]) -> Result<LatticeDiagram> {
    if f.is_zero() {
        return Err(Error::Domain("the zero polynomial has no Newton diagram".into()));
    }
    let pts: Vec<Vec<i64>> = f.terms().keys().map(|e| idx.iter().map(|&i| e[i] as i64).collect()).collect();
    let mut pts = pts;
    pts.sort();
    pts.dedup();
    newton_diagram(&pts)
}

pub fn nd(a: &NdArgs) -> Result<Outcome> {
    let (vars, named): (Vec<String>, Vec<(String, SparsePoly)>) = match (&a.input, a.exprs.is_empty()) {
        (Some(path), true) => {
            let sys = load_system(path, a.field.as_deref())?;
            let names: Vec<String> = if a.polys.is_empty() { sys.names.clone() } else { a.polys.clone() };
            let named = names.iter().map(|n| Ok((n.clone(), sys.poly(n)?.clone()))).collect::<Result<_>>()?;
            (sys.vars.clone(), named)
        }
        (None, false) => {
            let vars = match &a.vars {
                Some(v) => format::coords(v),
                None => return Err(Error::Input("--expr needs --vars".into())),
            };
            let field = parse_field(a.field.as_deref().unwrap_or("Q"))?;
            let named = a
                .exprs
                .iter()
                .enumerate()
                .map(|(i, e)| Ok((format!("expr{}", i + 1), parse_poly(e, &vars, field)?)))
                .collect::<Result<_>>()?;
            (vars, named)
        }
        (Some(_), false) => return Err(Error::Input("give either a system file or --expr, not both".into())),
        (None, true) => return Err(Error::Input("nothing to draw: give a system file or --expr".into())),
    };
    if named.is_empty() {
        return Err(Error::Input("no polynomials selected".into()));
    }
    let idx: Vec<usize> = match &a.project {
        Some(p) => format::index_set(p, vars.len())?,
        None => (0..vars.len()).collect(),
    };
    let pvars: Vec<String> = idx.iter().map(|&i| vars[i].clone()).collect();
    let diagrams: Vec<(String, LatticeDiagram)> = named.iter().map(|(n, f)| Ok((n.clone(), support_diagram(f, &idx)?))).collect::<Result<_>>()?;
    let mut reports: Vec<DiagramReport> = diagrams.iter().map(|(n, d)| diagram_report(n, &pvars, d)).collect();
    if a.sum {
        let mut s = diagrams[0].1.clone();
        for (_, d) in &diagrams[1..] {
            s = s.minkowski_sum(d)?;
        }
        let name = diagrams.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(" + ");
        reports.push(diagram_report(&name, &pvars, &s));
    }
    let last = reports.last().unwrap();
    let summary = if a.sum || reports.len() == 1 {
        Summary { vertices: last.vertices.clone(), normals: last.facet_normals.clone(), ..Default::default() }
    } else {
        Summary::default()
    };
    let mut text = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        diagram_text(r, &mut text);
    }
    Ok(Outcome::ok(render(a.json, &reports, text)?, summary))
}

fn star_parts(r: &MultResult) -> BTreeMap<String, u64> {
    let mut parts = BTreeMap::new();
    for t in &r.breakdown {
        for s in &t.star_terms {
            *parts.entry(point(&s.nu)).or_insert(0) += s.min as u64 * s.mixed_volume;
        }
    }
    parts
}

fn mult_summary(r: &MultResult) -> Summary {
    Summary {
        value: Some(r.value.to_string()),
        exact: Some(r.exact),
        parts: star_parts(r),
        witness_nu: r.witness.as_ref().map(|w| w.nu.clone()),
        ..Default::default()
    }
}

#[derive(Serialize)]
struct Mult0Report {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    project: Option<usize>,
    result: MultResult,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    samples: Vec<SampleCheck>,
}

pub fn mult0(a: &Mult0Args) -> Result<Outcome> {
    let sys = load_system(&a.input, a.field.as_deref())?;
    let polys: Vec<SparsePoly> = if a.polys.is_empty() {
        sys.polys.clone()
    } else {
        a.polys.iter().map(|n| sys.poly(n).cloned()).collect::<Result<_>>()?
    };
    let cli_samples: Vec<Vec<String>> = a.samples.iter().map(|s| format::coords(s)).collect();
    let projection: Option<(usize, Vec<Vec<String>>)> = if a.at_origin {
        if a.project.is_some() {
            return Err(Error::Input("--at-origin conflicts with --project".into()));
        }
        None
    } else if let Some(p) = &a.project {
        let idx = format::index_set(p, sys.nvars())?;
        if idx.iter().enumerate().any(|(j, &i)| i != j) {
            return Err(Error::Input(format!("--project {p}: Z must be V(x_1..x_k), i.e. the index set 1..k")));
        }
        let file = sys.spec.projection.as_ref().map(|s| s.samples.clone()).unwrap_or_default();
        Some((idx.len(), if cli_samples.is_empty() { file } else { cli_samples.clone() }))
    } else {
        sys.spec.projection.as_ref().map(|s| (s.k, if cli_samples.is_empty() { s.samples.clone() } else { cli_samples.clone() }))
    };
    if projection.is_none() && !cli_samples.is_empty() {
        return Err(Error::Input("--sample needs --project".into()));
    }
    let report = match projection {
        Some((k, samples)) => {
            let pts = samples.iter().map(|s| parse_point(s, sys.field)).collect::<Result<Vec<_>>>()?;
            let r = projected_mult_along_z(&polys, k, &pts)?;
            Mult0Report { mode: "projected", project: Some(k), result: r.result, samples: r.samples }
        }
        None => Mult0Report { mode: "origin", project: None, result: certified_mult(&polys)?, samples: vec![] },
    };
    let mut text = match report.project {
        Some(k) => format!("multiplicity along V({})\n", sys.vars[..k].join(", ")),
        None => "multiplicity at the origin\n".to_string(),
    };
    format::mult_result(&report.result, &mut text);
    for s in &report.samples {
        text.push_str(&format!(
            "sample ({}): vertex coefficients nonzero {}, torus condition {}\n",
            s.sample.join(", "),
            yes(s.vertex_coefficients_nonzero),
            yes(s.torus_condition)
        ));
    }
    let summary = mult_summary(&report.result);
    Ok(Outcome::ok(render(a.json, &report, text)?, summary))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct CurveReport {
    target: String,
    family: Vec<Vec<usize>>,
    hypothesis_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    result: MultResult,
}

pub fn curve_ord(a: &CurveOrdArgs) -> Result<Outcome> {
    let sys = load_system(&a.input, a.field.as_deref())?;
    let target = match (&a.target, &sys.spec.curve) {
        (Some(t), _) => t.clone(),
        (None, Some(c)) => c.target.clone(),
        (None, None) => return Err(Error::Input("no --target and no [curve] section".into())),
    };
    let family = match (&a.family, &sys.spec.curve) {
        (Some(f), _) => format::family(f)?,
        (None, Some(c)) => c.family.clone(),
        (None, None) => vec![],
    };
    let fam0 = sys.family0(&family)?;
    let mut polys = sys.polys.clone();
    if let Some(s) = &a.shift {
        let p = parse_point(&format::coords(s), sys.field)?;
        polys = polys.iter().map(|f| f.shift(&p)).collect::<Result<_>>()?;
    }
    if let Some(m) = &a.substitution {
        let m = format::matrix(m)?;
        polys = polys.iter().map(|f| f.linear_substitute(&m)).collect::<Result<_>>()?;
    }
    let f = polys.remove(sys.index_of(&target)?);
    let report = match curve_order_estimate(&f, &polys, &fam0) {
        Ok(r) => CurveReport { target, family, hypothesis_passed: true, failure: None, result: r },
        Err(Error::Hypothesis(h)) => CurveReport { target, family, hypothesis_passed: false, failure: Some(h.summary()), result: h.unchecked.clone() },
        Err(e) => return Err(e),
    };
    let fam_text: Vec<String> = report.family.iter().map(|s| format!("{{{}}}", s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))).collect();
    let mut text = format!("order of {} on the curve, family [{}]\n", report.target, fam_text.join(", "));
    if let Some(msg) = &report.failure {
        text.push_str(&format!("hypothesis check failed: {msg}\nunchecked bound follows\n"));
    }
    format::mult_result(&report.result, &mut text);
    let summary = mult_summary(&report.result);
    Ok(Outcome::ok(render(a.json, &report, text)?, summary))
}

fn ledger_text(l: &Ledger) -> String {
    let mut t = format!("scene: {}\ntotal intersection number: {}\n", l.scene, l.total_intersection_number);
    if let Some(i) = l.first_index {
        t.push_str(&format!("first index: {i}\n"));
    }
    t.push_str("components:\n");
    for c in &l.components {
        let kind = if c.excess { "excess" } else { "isolated" };
        t.push_str(&format!("  {} (codim {}, {kind}): {}{}\n", c.name, c.codim, c.total, if c.exact { "" } else { " (not exact)" }));
        for term in &c.terms {
            let tup: Vec<String> = term.tuple.iter().map(|k| k.to_string()).collect();
            t.push_str(&format!(
                "    tuple ({}): local {} x degree {} = {}  [{}]\n",
                tup.join(","),
                term.local.value,
                term.degree,
                term.product,
                term.local.source
            ));
        }
    }
    if !l.excluded.is_empty() {
        t.push_str("excluded points:\n");
        for e in &l.excluded {
            t.push_str(&format!("  {}: {}  [{}]\n", e.name, e.value, e.source));
        }
    }
    let mut removed: Vec<String> = l.components.iter().filter(|c| c.excess).map(|c| c.total.to_string()).collect();
    removed.extend(l.excluded.iter().map(|e| e.value.to_string()));
    let mut formula = l.total_intersection_number.to_string();
    for r in &removed {
        formula.push_str(&format!(" - {r}"));
    }
    t.push_str(&format!("isolated count: {formula} = {}\n", l.isolated_count));
    let c = &l.conservation;
    t.push_str(&format!(
        "conservation: components sum to {} of {} ({})\n",
        c.sum,
        c.total,
        if c.balanced { "balanced".to_string() } else { format!("gap {}", c.gap) }
    ));
    t.push_str(&format!("exact: {}\n", l.exact));
    t
}

pub fn ordered(a: &OrderedArgs) -> Result<Outcome> {
    let scene = Scene::load(&a.scene)?;
    let ledger = scene.ledger_with(&SpherePipeline::default())?;
    let mut parts: BTreeMap<String, u64> = ledger.components.iter().map(|c| (c.name.clone(), c.total)).collect();
    for e in &ledger.excluded {
        parts.insert(format!("excluded:{}", e.name), e.value);
    }
    parts.insert("conservation:sum".into(), ledger.conservation.sum);
    parts.insert("total".into(), ledger.total_intersection_number);
    let summary = Summary { value: Some(ledger.isolated_count.to_string()), exact: Some(ledger.exact), parts, ..Default::default() };
    let text = ledger_text(&ledger);
    Ok(Outcome::ok(render(a.json, &ledger, text)?, summary))
}

#[derive(Serialize)]
struct LocalPoint {
    u1: String,
    diagrams: Vec<DiagramReport>,
    hypothesis_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    estimate: MultResult,
    exact_order: u64,
}

#[derive(Serialize)]
struct SpheresOutput {
    report: SphereReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    local_points: Vec<LocalPoint>,
}

/// Truncation degree for the local expansions at w = 0.
const LOCAL_DEGREE: u32 = 6;

const LOCAL_VARS: [&str; 3] = ["v2", "w", "z2"];

fn sphere_params(a: &SpheresArgs) -> Result<SphereParams> {
    let mut m = match &a.scene {
        Some(p) => Scene::load(p)?.sphere_parameters.ok_or_else(|| Error::Input(format!("{}: no sphere_parameters", p.display())))?,
        None => SphereParams::bundled().as_strings(),
    };
    for kv in &a.params {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Input(format!("--param '{kv}': expected name=value")))?;
        let k = k.trim();
        if !m.contains_key(k) {
            return Err(Error::Input(format!("unknown sphere parameter '{k}'")));
        }
        m.insert(k.to_string(), v.trim().to_string());
    }
    SphereParams::from_strings(&m)
}

fn local_point(p: &SphereParams, sign: i64, exact_order: u64) -> Result<LocalPoint> {
    let e = spheres::w_zero_expansions(p, sign, LOCAL_DEGREE)?;
    let vars: Vec<String> = LOCAL_VARS.iter().map(|s| s.to_string()).collect();
    let all: Vec<usize> = (0..3).collect();
    let d2 = support_diagram(&e[0], &all)?;
    let d3 = support_diagram(&e[1], &all)?;
    let diagrams = vec![
        diagram_report("f2'", &vars, &d2),
        diagram_report("f3'", &vars, &d3),
        diagram_report("f2' + f3'", &vars, &d2.minkowski_sum(&d3)?),
    ];
    let (hypothesis_passed, failure, estimate) = match curve_order_estimate(&e[2], &e[..2], &[vec![1]]) {
        Ok(r) => (true, None, r),
        Err(Error::Hypothesis(h)) => (false, Some(h.summary()), h.unchecked.clone()),
        Err(e) => return Err(e),
    };
    Ok(LocalPoint { u1: if sign > 0 { "i".into() } else { "-i".into() }, diagrams, hypothesis_passed, failure, estimate, exact_order })
}

/// The expansions of f2, f3, f4 at the point u1 = i, w = 0 as a system file.
pub fn local_system_toml(p: &SphereParams) -> Result<String> {
    let e = spheres::w_zero_expansions(p, 1, LOCAL_DEGREE)?;
    let vars: Vec<String> = LOCAL_VARS.iter().map(|s| s.to_string()).collect();
    let mut t = String::from("# Local expansions on S' at u1 = i, w = 0, truncated above total degree 6.\n");
    t.push_str("field = \"Qi\"\nvars = [\"v2\", \"w\", \"z2\"]\n");
    for (name, f) in ["f2", "f3", "f4"].iter().zip(&e) {
        t.push_str(&format!("\n[[poly]]\nname = \"{name}\"\nexpr = \"{}\"\n", f.to_string_with(&vars)));
    }
    t.push_str("\n[curve]\ntarget = \"f4\"\nfamily = [[2]]\n");
    Ok(t)
}

fn spheres_text(r: &SphereReport, locals: &[LocalPoint]) -> String {
    let mut t = String::from("parameters:");
    for (k, v) in r.parameters.as_strings() {
        t.push_str(&format!(" {k}={v}"));
    }
    t.push_str("\ngates:\n");
    for g in &r.gates {
        t.push_str(&format!("  [{}] {}: {}\n", if g.passed { "pass" } else { "FAIL" }, g.name, g.detail));
    }
    let c = &r.circle;
    t.push_str(&format!(
        "circle: multiplicity {} (lower {}, upper {}) x degree {} = {}\n",
        c.value, c.lower, c.upper, c.degree, c.total
    ));
    t.push_str(&format!(
        "tangency: h31 on the circle is minus a square: {}; distinct points: {}\n",
        yes(r.tangency_square),
        r.tangency_points
    ));
    t.push_str("point sums:\n");
    for p in &r.points {
        t.push_str(&format!("  {}: {}  [{}]\n", p.name, p.value, p.method));
    }
    let w: Vec<String> = r.w_zero_points.iter().map(|k| k.to_string()).collect();
    t.push_str(&format!("orders at the w = 0 points: [{}]\n", w.join(", ")));
    let mut formula = format!("{} - {}", r.bezout, c.total);
    for p in &r.points {
        formula.push_str(&format!(" - {}", p.value));
    }
    t.push_str(&format!("isolated count: {formula} = {}\n", r.isolated));
    t.push_str(&format!("affine quotient dimension: {}\n", r.affine_count));
    for lp in locals {
        t.push_str(&format!("\nlocal diagrams at u1 = {}, w = 0 in (v2, w, z2):\n", lp.u1));
        for d in &lp.diagrams {
            diagram_text(d, &mut t);
        }
        match &lp.failure {
            Some(f) => t.push_str(&format!("newton estimate: hypothesis check failed: {f}\n")),
            None => t.push_str("newton estimate: hypothesis check passed\n"),
        }
        format::mult_result(&lp.estimate, &mut t);
        t.push_str(&format!("exact local order: {}\n", lp.exact_order));
    }
    t.push_str(&format!("all checks passed: {}\n", r.passed));
    t
}

pub fn spheres(a: &SpheresArgs) -> Result<Outcome> {
    let p = sphere_params(a)?;
    let report = spheres::run(&p)?;
    let mut locals = Vec::new();
    if a.local_diagrams {
        for (k, sign) in [1, -1].into_iter().enumerate() {
            locals.push(local_point(&p, sign, report.w_zero_points.get(k).copied().unwrap_or(0))?);
        }
    }
    if let Some(path) = &a.emit_local_system {
        std::fs::write(path, local_system_toml(&p)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    }
    let mut parts: BTreeMap<String, u64> = report.points.iter().map(|p| (p.name.clone(), p.value)).collect();
    parts.insert(spheres::CIRCLE.into(), report.circle.total);
    parts.insert("affine".into(), report.affine_count);
    parts.insert("bezout".into(), report.bezout);
    parts.insert("failed-gates".into(), report.gates.iter().filter(|g| !g.passed).count() as u64);
    let summary = Summary { value: Some(report.isolated.to_string()), exact: Some(report.passed), parts, ..Default::default() };
    let text = spheres_text(&report, &locals);
    let out = SpheresOutput { report, local_points: locals };
    Ok(Outcome::ok(render(a.json, &out, text)?, summary))
}
