//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! All values are exact integers (tolerance 0). Each job must finish within
//! JOB_BUDGET; property suites run the case counts pinned below.

mod support;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use ordmult::field::{Coeff, Field};
use ordmult::mult::{certified_mult, curve_order_estimate, diagram_of, mult_star_0, projected_mult_along_z, MultResult};
use ordmult::scene::{Ledger, Scene};
use ordmult::spheres::{self, SphereParams, SpherePipeline};
use ordmult::system::System;
use ordmult::{Error, SparsePoly};

use support::properties as props;

const JOB_BUDGET: Duration = Duration::from_secs(5);
const TOLERANCE: u64 = 0;

const MIXED_VOLUME_CASES: u32 = 200;
const MULT0_CASES: u32 = 100;
const CHAIN_CASES: u32 = 100;
const TORUS_CASES: u32 = 100;
const REBASE_CASES: u32 = 50;

type Check = Result<String, String>;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn system(rel: &str) -> Result<System, String> {
    System::load(&data(rel)).map_err(|e| e.to_string())
}

fn ledger(rel: &str) -> Result<Ledger, String> {
    let s = Scene::load(&data(rel)).map_err(|e| e.to_string())?;
    s.ledger_with(&SpherePipeline::default()).map_err(|e| e.to_string())
}

fn timed<T>(what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    let t = Instant::now();
    let r = f()?;
    let dt = t.elapsed();
    if dt > JOB_BUDGET {
        return Err(format!("{what} took {:.2} s (budget {} s)", dt.as_secs_f64(), JOB_BUDGET.as_secs()));
    }
    Ok(r)
}

fn same(what: &str, got: u64, want: u64) -> Result<(), String> {
    if got.abs_diff(want) <= TOLERANCE {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn finite(r: &MultResult) -> Result<u64, String> {
    r.value.finite().ok_or_else(|| "value is infinite".to_string())
}

fn star_terms(r: &MultResult) -> Vec<(Vec<i64>, i64, u64)> {
    r.breakdown.iter().flat_map(|t| t.star_terms.iter().map(|s| (s.nu.clone(), s.min, s.mixed_volume))).collect()
}

fn component(l: &Ledger, name: &str) -> Result<u64, String> {
    l.components.iter().find(|c| c.name == name).map(|c| c.total).ok_or_else(|| format!("no component '{name}' in {}", l.scene))
}

/// Runs the built binary and returns (status, stdout).
fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ordmult")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let mut v: Vec<&str> = args.to_vec();
    v.push("--json");
    let (code, out) = cli(&v)?;
    if code != 0 {
        return Err(format!("ordmult {} exited with {code}", args.join(" ")));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let sys = system("systems/quartic-triple-chart-y.toml")?;
    let order = ["f3", "f2", "f1"];
    let fs: Vec<SparsePoly> = order.iter().map(|n| sys.poly(n).cloned()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let g: Vec<_> = fs.iter().map(|f| diagram_of(f)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let (star, terms) = mult_star_0(&g).map_err(|e| e.to_string())?;
    same("mult*_0", star, 14)?;
    let t: Vec<(Vec<i64>, i64, u64)> = terms.iter().map(|s| (s.nu.clone(), s.min, s.mixed_volume)).collect();
    if t != vec![(vec![1, 4, 4], 7, 2)] {
        return Err(format!("expected the single term 7 x 2 at (1,4,4), got {t:?}"));
    }
    let r = timed("mult0", || certified_mult(&fs).map_err(|e| e.to_string()))?;
    same("mult_0", finite(&r)?, 14)?;
    if !r.exact || r.breakdown.len() != 1 {
        return Err(format!("expected one certified term, got exact = {} with {} terms", r.exact, r.breakdown.len()));
    }
    let j = cli_json(&["mult0", data("systems/quartic-triple-chart-y.toml").to_str().unwrap(), "--poly", "f3", "--poly", "f2", "--poly", "f1", "--exact"])?;
    if j["result"]["value"] != 14 || j["result"]["exact"] != true {
        return Err(format!("CLI reported {}", j["result"]));
    }
    Ok("14 = 7 x 2 at nu = (1,4,4), non-degeneracy certified".into())
}

fn criterion_2() -> Check {
    let sys = system("systems/quartic-pair-qi.toml")?;
    let one = |k: i64| Coeff::from_int(Field::Qi, k);
    let r = timed("projected mult", || projected_mult_along_z(&sys.polys, 2, &[vec![one(0), one(0), one(1)]]).map_err(|e| e.to_string()))?;
    same("multiplicity along V(x,y)", finite(&r.result)?, 2)?;
    if !r.result.exact {
        return Err("projection estimate not certified at the sample".into());
    }
    let l = timed("ledger", || ledger("scenes/quartic-triple.json"))?;
    let z = l.components.iter().find(|c| c.name == "Z").ok_or("no Z")?;
    let t = &z.terms[0];
    same("local factor", t.local.value, 2)?;
    same("degree", t.degree, 4)?;
    same("ordered multiplicity", z.total, 8)?;
    Ok("multiplicity along V(x,y) = 2, ordered multiplicity 2 x 4 = 8".into())
}

fn curve(sys: &System, shift: Option<Vec<Coeff>>, subst: Option<Vec<Vec<i64>>>) -> Result<MultResult, String> {
    let mut ps = sys.polys.clone();
    if let Some(p) = shift {
        ps = ps.iter().map(|f| f.shift(&p)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    }
    if let Some(m) = subst {
        ps = ps.iter().map(|f| f.linear_substitute(&m)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    }
    let f = ps.remove(2);
    timed("curve order", || curve_order_estimate(&f, &ps, &[vec![2]]).map_err(|e| e.to_string()))
}

fn criterion_3() -> Check {
    let q = system("systems/quartic-triple.toml")?;
    let r = curve(&q, None, None)?;
    same("case (i)", finite(&r)?, 4)?;
    if star_terms(&r) != vec![(vec![1, 3, 1], 2, 2)] || !r.exact {
        return Err(format!("case (i) terms {:?}", star_terms(&r)));
    }
    let qi = system("systems/quartic-triple-qi.toml")?;
    for s in [2, -2] {
        let p = vec![Coeff::zero(Field::Qi), Coeff::zero(Field::Qi), &Coeff::imag_unit(Field::Qi).unwrap() * &Coeff::from_int(Field::Qi, s)];
        let r = curve(&qi, Some(p), None)?;
        same("case (ii)", finite(&r)?, 0)?;
    }
    let mut sum = 0;
    for s in [2, -2] {
        let p = vec![Coeff::zero(Field::Q), Coeff::zero(Field::Q), Coeff::from_int(Field::Q, s)];
        let r = curve(&q, Some(p), Some(vec![vec![1, -1, 0], vec![0, 1, 0], vec![0, 0, 1]]))?;
        if !r.exact {
            return Err("case (iii) not certified".into());
        }
        same("case (iii) per point", finite(&r)?, 1)?;
        sum += finite(&r)?;
    }
    same("case (iii) sum", sum, 2)?;
    let z = system("systems/quartic-triple-chart-z.toml")?;
    let r = curve(&z, None, None)?;
    same("case (iv)", finite(&r)?, 6)?;
    if star_terms(&r) != vec![(vec![2, 2, 1], 2, 1), (vec![3, 4, 5], 4, 1)] || !r.exact {
        return Err(format!("case (iv) terms {:?}", star_terms(&r)));
    }
    Ok("4 (2 x 2 at (1,3,1)); 0 at z = 2i, -2i; 1 + 1 = 2 after x' = x + y; 6 = 2 x 1 + 4 x 1".into())
}

fn criterion_4() -> Check {
    let l = timed("ledger", || ledger("scenes/quartic-triple.json"))?;
    same("total", l.total_intersection_number, 64)?;
    same("Z", component(&l, "Z")?, 8)?;
    same("O", component(&l, "O")?, 4)?;
    same("z = +-2i", component(&l, "P(z=2i)")? + component(&l, "P(z=-2i)")?, 0)?;
    same("z = +-2", component(&l, "P(z=2)")? + component(&l, "P(z=-2)")?, 2)?;
    same("Pz", component(&l, "Pz")?, 6)?;
    let py = l.excluded.iter().find(|e| e.name == "Py").ok_or("no excluded Py")?;
    same("Py", py.value, 14)?;
    same("isolated count", l.isolated_count, 30)?;
    if !l.exact {
        return Err("ledger not exact".into());
    }
    let (code, out) = cli(&["ordered", data("scenes/quartic-triple.json").to_str().unwrap()])?;
    if code != 0 || !out.contains("isolated count: 64 - 8 - 4 - 1 - 0 - 1 - 0 - 6 - 14 = 30") {
        return Err(format!("CLI ledger (exit {code}) lacks the expected count line"));
    }
    Ok("64 - 8 - 4 - 0 - 2 - 6 - 14 = 30".into())
}

fn criterion_5() -> Check {
    let r = timed("sphere pipeline", || spheres::run(&SphereParams::bundled()).map_err(|e| e.to_string()))?;
    if let Some(g) = r.gates.iter().find(|g| !g.passed) {
        return Err(format!("gate failed: {}: {}", g.name, g.detail));
    }
    same("circle", r.circle.total, 8)?;
    let sums: Vec<u64> = r.points.iter().map(|p| p.value).collect();
    if sums != vec![8, 0, 4] {
        return Err(format!("curve-order sums {sums:?}"));
    }
    same("count", r.isolated, 12)?;
    same("affine quotient dimension", r.affine_count, 12)?;
    let l = timed("sphere ledger", || ledger("scenes/sphere-tangents.json"))?;
    same("scene count", l.isolated_count, 12)?;
    Ok(format!("32 - 8 - 8 - 0 - 4 = 12; {} gates pass; direct affine count 12", r.gates.len()))
}

fn criterion_6() -> Check {
    let l = timed("ledger", || ledger("scenes/monomial-curve.json"))?;
    same("curve order", component(&l, "P0")?, 6)?;
    same("point at infinity", component(&l, "Pinf")?, 1)?;
    let z = l.components.iter().find(|c| c.name == "Z").ok_or("no Z")?;
    same("local factor along Z", z.terms[0].local.value, 1)?;
    same("degree of Z", z.terms[0].degree, 4)?;
    same("count", l.isolated_count, 13)?;
    same("total", l.total_intersection_number, 24)?;
    Ok("3 x 2 x 4 - 4 - 6 - 1 = 13".into())
}

fn criterion_7() -> Check {
    let a = timed("ledger", || ledger("scenes/two-lines-cubics.json"))?;
    same("V(x0)", component(&a, "V(x0)")?, 6)?;
    same("V(x1)", component(&a, "V(x1)")?, 3)?;
    let b = timed("ledger", || ledger("scenes/two-lines-quadric.json"))?;
    same("V(x0)", component(&b, "V(x0)")?, 2)?;
    same("V(x0,x1)", component(&b, "V(x0,x1)")?, 4)?;
    for l in [&a, &b] {
        if !l.conservation.balanced {
            return Err(format!("{}: conservation gap {}", l.scene, l.conservation.gap));
        }
    }
    same("sum", a.conservation.sum, 9)?;
    same("sum", b.conservation.sum, 6)?;
    Ok("{V(x0):6, V(x1):3} sums to 9; {V(x0):2, V(x0,x1):4} sums to 6".into())
}

fn criterion_8() -> Check {
    let sys = system("systems/degenerate-edge.toml")?;
    let (f, rest) = sys.split_target("f").map_err(|e| e.to_string())?;
    match curve_order_estimate(&f, &rest, &[vec![0, 1]]) {
        Err(Error::Hypothesis(h)) => {
            same("bound", finite(&h.unchecked)?, 4)?;
            if h.unchecked.exact {
                return Err("bound flagged exact".into());
            }
            let w = h.unchecked.witness.as_ref().ok_or("no witness")?;
            if w.nu != vec![1, 1, 1] {
                return Err(format!("witness at {:?}", w.nu));
            }
            let (code, _) = cli(&["curve-ord", data("systems/degenerate-edge.toml").to_str().unwrap(), "--exact"])?;
            if code != 1 {
                return Err(format!("CLI exit {code} with --exact, expected 1"));
            }
            Ok(format!("bound 4 with exact = false, witness {}", w.describe()))
        }
        Ok(r) => Err(format!("hypothesis check passed with value {}", r.value)),
        Err(e) => Err(e.to_string()),
    }
}

fn criterion_9() -> Check {
    let suites: [(&str, fn(u32) -> Result<u32, String>, u32); 5] = [
        ("mixed volume", props::mixed_volume_suite, MIXED_VOLUME_CASES),
        ("mult_0 vs corank", props::mult0_suite, MULT0_CASES),
        ("monomial chain vs staircase", props::monomial_chain_suite, CHAIN_CASES),
        ("torus root vs F_p scan", props::torus_root_suite, TORUS_CASES),
        ("face mixed volume rebase", props::face_rebase_suite, REBASE_CASES),
    ];
    let mut parts = Vec::new();
    for (name, suite, cases) in suites {
        let n = suite(cases).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name} {n}"));
    }
    Ok(parts.join(", "))
}

fn criterion_10() -> Check {
    // The deformation semantics of ordered multiplicity are not exercised; the
    // layer is accepted on conservation and the closed-form examples above.
    for s in ["scenes/two-lines-cubics.json", "scenes/two-lines-quadric.json"] {
        let l = ledger(s)?;
        if !l.conservation.balanced {
            return Err(format!("{}: components sum to {} of {}", l.scene, l.conservation.sum, l.conservation.total));
        }
    }
    let m = data("manifest.toml");
    let t = Instant::now();
    let (code, first) = cli(&["verify", m.to_str().unwrap()])?;
    let dt = t.elapsed();
    if code != 0 {
        return Err(format!("manifest verification failed:\n{first}"));
    }
    let (_, second) = cli(&["verify", m.to_str().unwrap()])?;
    if first != second {
        return Err("two manifest runs printed different output".into());
    }
    let jobs = first.lines().filter(|l| l.starts_with("PASS")).count();
    Ok(format!(
        "deformation semantics out of scope (not reproduced); conservation holds on the complete scenes; manifest {jobs} jobs pass in {:.2} s, output deterministic",
        dt.as_secs_f64()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("mult_0 at the point at infinity of the y-axis", criterion_1),
        ("projection estimate along the z-axis", criterion_2),
        ("curve orders of the third quartic", criterion_3),
        ("affine count for three quartics", criterion_4),
        ("tangent lines to four spheres", criterion_5),
        ("surfaces through a monomial curve", criterion_6),
        ("ordered multiplicity tables", criterion_7),
        ("degenerate edge negative control", criterion_8),
        ("property suites", criterion_9),
        ("reproducibility scope", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({secs:.2} s): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.2} s): {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
