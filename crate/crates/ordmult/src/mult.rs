//! Multiplicities from Newton diagrams: mult*_0, mult_0 and its certification, the
//! estimate along a coordinate subvariety, and the curve-order bound.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::field::Coeff;
use crate::lattice::{newton_diagram, project, LatticeDiagram, Point};
use crate::mixed_volume::face_mixed_volume;
use crate::nondegeneracy::{
    face_covectors, nondegenerate_at_origin, nonempty_subsets, restrict_poly, star_k_nondegenerate,
    torus_root_parameter_locus, DegeneracyWitness,
};
use crate::poly::SparsePoly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultValue {
    Finite(u64),
    Infinite,
}

impl MultValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            MultValue::Finite(v) => Some(*v),
            MultValue::Infinite => None,
        }
    }

    fn mul(self, o: MultValue) -> MultValue {
        match (self, o) {
            (MultValue::Finite(0), _) | (_, MultValue::Finite(0)) => MultValue::Finite(0),
            (MultValue::Finite(a), MultValue::Finite(b)) => MultValue::Finite(a * b),
            _ => MultValue::Infinite,
        }
    }

    fn add(self, o: MultValue) -> MultValue {
        match (self, o) {
            (MultValue::Finite(a), MultValue::Finite(b)) => MultValue::Finite(a + b),
            _ => MultValue::Infinite,
        }
    }
}

impl fmt::Display for MultValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultValue::Finite(v) => write!(f, "{v}"),
            MultValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for MultValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MultValue::Finite(v) => s.serialize_u64(*v),
            MultValue::Infinite => s.serialize_str("inf"),
        }
    }
}

/// One summand min_{G_1}(nu) * mv'_nu(...) of mult*_0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarTerm {
    pub nu: Vec<i64>,
    pub min: i64,
    pub mixed_volume: u64,
}

/// One summand over a coordinate subset: mult*_0 of the restrictions times mult_0 of
/// the projections.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetTerm {
    /// 0-based coordinate indices.
    pub subset: Vec<usize>,
    pub star: MultValue,
    pub star_terms: Vec<StarTerm>,
    pub projected: MultValue,
    pub contribution: MultValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultResult {
    pub value: MultValue,
    pub exact: bool,
    pub witness: Option<DegeneracyWitness>,
    pub breakdown: Vec<SubsetTerm>,
    pub notes: Vec<String>,
}

impl MultResult {
    fn bound(value: MultValue, breakdown: Vec<SubsetTerm>) -> Self {
        MultResult { value, exact: false, witness: None, breakdown, notes: vec![] }
    }
}

fn check_diagrams(gammas: &[LatticeDiagram]) -> Result<usize> {
    let n = gammas.len();
    if gammas.iter().any(|g| g.dim() != n) {
        return Err(Error::Input(format!("expected {n} diagrams in dimension {n}")));
    }
    Ok(n)
}

/// mult*_0(G_1, ..., G_n), realized over the facet normals of G_2 + ... + G_n.
pub fn mult_star_0(gammas: &[LatticeDiagram]) -> Result<(u64, Vec<StarTerm>)> {
    let n = check_diagrams(gammas)?;
    if n == 0 {
        return Ok((1, vec![]));
    }
    if gammas.iter().any(|g| g.is_empty()) {
        return Err(Error::Domain("empty diagram".into()));
    }
    if n == 1 {
        let (m, _) = gammas[0].min_face(&[1])?;
        return Ok((m as u64, vec![StarTerm { nu: vec![1], min: m, mixed_volume: 1 }]));
    }
    let mut sum = gammas[1].clone();
    for g in &gammas[2..] {
        sum = sum.minkowski_sum(g)?;
    }
    let mut total = 0u64;
    let mut terms = Vec::new();
    for w in sum.facet_normals() {
        let nu = w.0;
        let faces: Vec<Vec<Point>> = gammas[1..].iter().map(|g| g.face_for(&nu).map(|f| f.vertices)).collect::<Result<_>>()?;
        let mv = face_mixed_volume(&nu, &faces)?;
        let (m, _) = gammas[0].min_face(&nu)?;
        if mv > 0 {
            total += m as u64 * mv as u64;
            terms.push(StarTerm { nu, min: m, mixed_volume: mv as u64 });
        }
    }
    Ok((total, terms))
}

type Memo = HashMap<Vec<Vec<Point>>, MultValue>;

fn touches(g: &LatticeDiagram, idx: &[usize]) -> bool {
    !g.restrict(idx).is_empty()
}

fn t_set(gammas: &[LatticeDiagram], idx: &[usize]) -> Vec<usize> {
    (0..gammas.len()).filter(|&j| touches(&gammas[j], idx)).collect()
}

fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

fn projected(g: &LatticeDiagram, idx: &[usize]) -> Result<LatticeDiagram> {
    newton_diagram(&project(g.support(), idx))
}

fn mult0_inner(gammas: &[LatticeDiagram], memo: &mut Memo, breakdown: Option<&mut Vec<SubsetTerm>>) -> Result<MultValue> {
    let n = check_diagrams(gammas)?;
    if n == 0 {
        return Ok(MultValue::Finite(1));
    }
    if gammas.iter().any(|g| g.is_empty()) {
        return Ok(MultValue::Infinite);
    }
    if gammas.iter().any(|g| g.contains_origin()) {
        return Ok(MultValue::Finite(0));
    }
    let key: Vec<Vec<Point>> = gammas.iter().map(|g| g.vertices().to_vec()).collect();
    if breakdown.is_none() {
        if let Some(v) = memo.get(&key) {
            return Ok(*v);
        }
    }
    let subsets = nonempty_subsets(n);
    let ts: Vec<Vec<usize>> = subsets.iter().map(|i| t_set(gammas, i)).collect();
    if subsets.iter().zip(&ts).any(|(i, t)| t.len() < i.len()) {
        memo.insert(key, MultValue::Infinite);
        return Ok(MultValue::Infinite);
    }
    let mut total = MultValue::Finite(0);
    let mut terms = Vec::new();
    for (idx, t) in subsets.iter().zip(&ts) {
        if t.len() != idx.len() || t[0] != 0 {
            continue;
        }
        let restricted: Vec<LatticeDiagram> = t.iter().map(|&j| gammas[j].restrict(idx)).collect();
        let (star, star_terms) = mult_star_0(&restricted)?;
        let rest = complement(n, idx);
        let proj: Vec<LatticeDiagram> =
            (0..n).filter(|j| !t.contains(j)).map(|j| projected(&gammas[j], &rest)).collect::<Result<_>>()?;
        let pv = mult0_inner(&proj, memo, None)?;
        let c = MultValue::Finite(star).mul(pv);
        total = total.add(c);
        terms.push(SubsetTerm { subset: idx.clone(), star: MultValue::Finite(star), star_terms, projected: pv, contribution: c });
    }
    memo.insert(key, total);
    if let Some(b) = breakdown {
        *b = terms;
    }
    Ok(total)
}

/// mult_0 of a tuple of diagrams: the lower bound for the intersection multiplicity at
/// the origin of any system with these diagrams.
pub fn mult_0(gammas: &[LatticeDiagram]) -> Result<MultResult> {
    let mut memo = Memo::new();
    let mut breakdown = Vec::new();
    let v = mult0_inner(gammas, &mut memo, Some(&mut breakdown))?;
    Ok(MultResult::bound(v, breakdown))
}

pub fn diagram_of(f: &SparsePoly) -> Result<LatticeDiagram> {
    if f.is_zero() {
        return Ok(LatticeDiagram::empty(f.nvars()));
    }
    newton_diagram(&f.terms().keys().map(|e| e.iter().map(|&a| a as i64).collect()).collect::<Vec<Point>>())
}

fn check_square(polys: &[SparsePoly]) -> Result<usize> {
    let n = polys.len();
    if n == 0 {
        return Err(Error::Input("empty system".into()));
    }
    let field = polys[0].field();
    for p in polys {
        if p.nvars() != n {
            return Err(Error::Input(format!("expected {n} polynomials in {n} variables")));
        }
        p.ensure_field(field)?;
    }
    Ok(n)
}

/// mult_0 of the Newton diagrams, with exactness decided by the non-degeneracy condition.
pub fn certified_mult(polys: &[SparsePoly]) -> Result<MultResult> {
    check_square(polys)?;
    let gammas: Vec<LatticeDiagram> = polys.iter().map(diagram_of).collect::<Result<_>>()?;
    let mut r = mult_0(&gammas)?;
    match r.value {
        MultValue::Infinite => {
            r.exact = true;
            r.notes.push("diagram multiplicity is infinite".into());
        }
        MultValue::Finite(0) => {
            r.exact = true;
            r.notes.push("some polynomial does not vanish at the origin".into());
        }
        MultValue::Finite(_) => {
            let nd = nondegenerate_at_origin(polys)?;
            r.exact = nd.nondegenerate;
            r.witness = nd.witness;
        }
    }
    Ok(r)
}

/// Per-sample outcome of the two projection conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCheck {
    pub sample: Vec<String>,
    pub vertex_coefficients_nonzero: bool,
    pub torus_condition: bool,
    pub witness: Option<DegeneracyWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectedReport {
    pub result: MultResult,
    pub samples: Vec<SampleCheck>,
    /// Near a certifying sample, V(f_1..f_k) has the single component Z.
    pub unique_component: bool,
}

fn split_checked(polys: &[SparsePoly], k: usize) -> Result<(usize, Vec<BTreeMap<Vec<u32>, SparsePoly>>)> {
    if polys.len() != k || k == 0 {
        return Err(Error::Input(format!("expected {k} polynomials")));
    }
    let n = polys[0].nvars();
    if n < k {
        return Err(Error::Input("fewer variables than equations".into()));
    }
    let field = polys[0].field();
    for p in polys {
        if p.nvars() != n {
            return Err(Error::Input("polynomials live in different rings".into()));
        }
        p.ensure_field(field)?;
    }
    Ok((n, polys.iter().map(|p| p.split_leading(k)).collect()))
}

fn head_diagram(split: &BTreeMap<Vec<u32>, SparsePoly>, k: usize) -> Result<LatticeDiagram> {
    if split.is_empty() {
        return Ok(LatticeDiagram::empty(k));
    }
    newton_diagram(&split.keys().map(|e| e.iter().map(|&a| a as i64).collect()).collect::<Vec<Point>>())
}

fn specialize(split: &BTreeMap<Vec<u32>, SparsePoly>, k: usize, a: &[Coeff]) -> SparsePoly {
    let field = a.first().map(|c| c.field()).unwrap_or_else(|| split.values().next().unwrap().field());
    SparsePoly::from_terms(k, field, split.iter().map(|(e, c)| (e.clone(), c.eval(a))))
}

/// Multiplicity along Z = V(x_1, ..., x_k) from the projected diagrams of the f_j, with
/// exactness certified at sample points of Z (full coordinates, first k zero).
pub fn projected_mult_along_z(polys: &[SparsePoly], k: usize, samples: &[Vec<Coeff>]) -> Result<ProjectedReport> {
    let (n, splits) = split_checked(polys, k)?;
    if samples.is_empty() {
        return Err(Error::Input("no sample points on Z given".into()));
    }
    let field = polys[0].field();
    let gammas: Vec<LatticeDiagram> = splits.iter().map(|s| head_diagram(s, k)).collect::<Result<_>>()?;
    let mut result = mult_0(&gammas)?;
    let mut checks = Vec::new();
    for s in samples {
        if s.len() != n || s[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::Input("sample point must lie on Z (first k coordinates zero)".into()));
        }
        if s.iter().any(|c| c.field() != field) {
            return Err(Error::Input("sample point over the wrong field".into()));
        }
        let a = &s[k..];
        let vertex_ok = splits
            .iter()
            .zip(&gammas)
            .all(|(sp, g)| g.vertices().iter().all(|v| !sp[&v.iter().map(|&x| x as u32).collect::<Vec<u32>>()].eval(a).is_zero()));
        let (torus_ok, witness) = if vertex_ok {
            let spec: Vec<SparsePoly> = splits.iter().map(|sp| specialize(sp, k, a)).collect();
            let nd = nondegenerate_at_origin(&spec)?;
            (nd.nondegenerate, nd.witness)
        } else {
            (false, None)
        };
        checks.push(SampleCheck {
            sample: s.iter().map(|c| c.to_string()).collect(),
            vertex_coefficients_nonzero: vertex_ok,
            torus_condition: torus_ok,
            witness,
        });
    }
    let good = result.value.finite().is_some() && checks.iter().any(|c| c.vertex_coefficients_nonzero && c.torus_condition);
    result.exact = good;
    if !good {
        result.witness = checks.iter().find_map(|c| c.witness.clone());
    }
    Ok(ProjectedReport { result, samples: checks, unique_component: good })
}

/// A closed subset of Z where the projection conditions may fail, as an ideal in the
/// coordinates of Z.
#[derive(Clone, Debug, PartialEq)]
pub struct BadLocusPiece {
    pub reason: String,
    pub ideal: Vec<SparsePoly>,
}

/// The closed subsets of Z where a projected vertex coefficient vanishes or an
/// initial-form system acquires a torus root.
pub fn projection_bad_locus(polys: &[SparsePoly], k: usize) -> Result<Vec<BadLocusPiece>> {
    let (n, splits) = split_checked(polys, k)?;
    let field = polys[0].field();
    let gammas: Vec<LatticeDiagram> = splits.iter().map(|s| head_diagram(s, k)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (j, (sp, g)) in splits.iter().zip(&gammas).enumerate() {
        for v in g.vertices() {
            let e: Vec<u32> = v.iter().map(|&x| x as u32).collect();
            let c = &sp[&e];
            if c.total_degree() != Some(0) {
                out.push(BadLocusPiece { reason: format!("coefficient of vertex {:?} of f{} vanishes", v, j + 1), ideal: vec![c.clone()] });
            }
        }
    }
    for idx in nonempty_subsets(k) {
        // f^{[k]}_j restricted to K^I, in variables (x_I, z).
        let mut map: Vec<usize> = idx.clone();
        map.extend(k..n);
        let restricted: Vec<SparsePoly> = polys
            .iter()
            .map(|p| {
                let r = p.filter(|e| (0..k).all(|i| e[i] == 0 || idx.contains(&i)));
                SparsePoly::from_terms(map.len(), field, r.terms().iter().map(|(e, c)| (map.iter().map(|&i| e[i]).collect(), c.clone())))
            })
            .filter(|p| !p.is_zero())
            .collect();
        if restricted.is_empty() {
            continue;
        }
        let heads: Vec<SparsePoly> = restricted
            .iter()
            .map(|p| SparsePoly::from_terms(idx.len(), field, p.split_leading(idx.len()).into_keys().map(|e| (e, Coeff::one(field)))))
            .collect();
        for (nu, _) in face_covectors(&heads, idx.len())? {
            let init: Vec<SparsePoly> = restricted
                .iter()
                .map(|p| {
                    let m = p.terms().keys().map(|e| e[..idx.len()].iter().zip(&nu).map(|(&a, &w)| a as i64 * w).sum::<i64>()).min().unwrap();
                    p.filter(|e| e[..idx.len()].iter().zip(&nu).map(|(&a, &w)| a as i64 * w).sum::<i64>() == m)
                })
                .collect();
            let locus = torus_root_parameter_locus(&init, n - k)?;
            if locus.iter().any(|g| g.total_degree() == Some(0)) {
                continue;
            }
            let i1: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            out.push(BadLocusPiece { reason: format!("initial forms for I = {i1:?}, nu = {nu:?} have a torus root"), ideal: locus });
        }
    }
    Ok(out)
}

/// Closure of a collection of index sets under taking subsets.
pub fn subset_closure(family: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in family {
        let m = s.len();
        for mask in 0u32..(1 << m) {
            let mut sub: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
            sub.sort();
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetCheck {
    pub subset: Vec<usize>,
    pub t: Vec<usize>,
    /// |t_I| >= |I| - 1
    pub count_condition: bool,
    /// (*, |t_I| - 1)-non-degeneracy of the restrictions.
    pub nondegeneracy_condition: bool,
    pub witness: Option<DegeneracyWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Newton0Report {
    pub ok: bool,
    pub checks: Vec<SubsetCheck>,
}

impl Newton0Report {
    pub fn failures(&self) -> impl Iterator<Item = &SubsetCheck> {
        self.checks.iter().filter(|c| !c.count_condition || !c.nondegeneracy_condition)
    }
}

fn t_poly(polys: &[SparsePoly], idx: &[usize]) -> Vec<usize> {
    (0..polys.len()).filter(|&j| !polys[j].restrict_to_subspace(idx).is_zero()).collect()
}

/// Checks the curve hypotheses on f_1..f_{n-1} for every nonempty I outside the closure of `family`.
pub fn check_newton0_star(polys: &[SparsePoly], family: &[Vec<usize>]) -> Result<Newton0Report> {
    let n = polys.len() + 1;
    if polys.iter().any(|p| p.nvars() != n) {
        return Err(Error::Input(format!("expected {} polynomials in {n} variables", n - 1)));
    }
    if family.iter().flatten().any(|&i| i >= n) {
        return Err(Error::Input("index set out of range".into()));
    }
    let closed = subset_closure(family);
    let mut checks = Vec::new();
    for idx in nonempty_subsets(n) {
        if closed.contains(&idx) {
            continue;
        }
        let t = t_poly(polys, &idx);
        let count_ok = t.len() + 1 >= idx.len();
        let (nd_ok, witness) = if t.is_empty() {
            (true, None)
        } else {
            let r: Vec<SparsePoly> = t.iter().map(|&j| restrict_poly(&polys[j], &idx)).collect();
            let rep = star_k_nondegenerate(&r, t.len() as i64 - 1)?;
            let w = rep.witness.map(|mut w| {
                w.subset = idx.clone();
                w
            });
            (rep.nondegenerate, w)
        };
        checks.push(SubsetCheck { subset: idx, t, count_condition: count_ok, nondegeneracy_condition: nd_ok, witness });
    }
    Ok(Newton0Report { ok: checks.iter().all(|c| c.count_condition && c.nondegeneracy_condition), checks })
}

/// A failed hypothesis check with the bound computed as if it had passed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisFailure {
    pub report: Newton0Report,
    pub unchecked: MultResult,
}

impl HypothesisFailure {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for c in self.report.failures() {
            let i: Vec<String> = c.subset.iter().map(|k| (k + 1).to_string()).collect();
            let cond = if !c.count_condition { "|t_I| >= |I| - 1" } else { "(*, |t_I| - 1)-non-degeneracy" };
            let w = c.witness.as_ref().map(|w| format!(" ({})", w.describe())).unwrap_or_default();
            parts.push(format!("I = {{{}}}: {cond} fails{w}", i.join(",")));
        }
        format!("{}; unchecked bound {}", parts.join("; "), self.unchecked.value)
    }
}

/// Lower bound for ord(f|C) where C is cut out by f_1..f_{n-1} off the coordinate
/// subspaces K^I, I in `family` (0-based index sets).
pub fn curve_order_estimate(f: &SparsePoly, polys: &[SparsePoly], family: &[Vec<usize>]) -> Result<MultResult> {
    let n = polys.len() + 1;
    if f.nvars() != n {
        return Err(Error::Input(format!("expected polynomials in {n} variables")));
    }
    let field = f.field();
    for p in polys {
        p.ensure_field(field)?;
    }
    let report = check_newton0_star(polys, family)?;
    let closed = subset_closure(family);
    let gammas: Vec<LatticeDiagram> = polys.iter().map(diagram_of).collect::<Result<_>>()?;
    let gf = diagram_of(f)?;
    let mut memo = Memo::new();
    let mut total = MultValue::Finite(0);
    let mut terms = Vec::new();
    let mut tset = Vec::new();
    for idx in nonempty_subsets(n) {
        if closed.contains(&idx) {
            continue;
        }
        let t = t_poly(polys, &idx);
        if t.len() + 1 != idx.len() {
            continue;
        }
        tset.push((idx.clone(), t.clone()));
        let mut restricted = vec![gf.restrict(&idx)];
        restricted.extend(t.iter().map(|&j| gammas[j].restrict(&idx)));
        let (star, star_terms) = if restricted[0].is_empty() {
            (MultValue::Infinite, vec![])
        } else {
            let (s, st) = mult_star_0(&restricted)?;
            (MultValue::Finite(s), st)
        };
        let rest = complement(n, &idx);
        let proj: Vec<LatticeDiagram> =
            (0..n - 1).filter(|j| !t.contains(j)).map(|j| projected(&gammas[j], &rest)).collect::<Result<_>>()?;
        let pv = mult0_inner(&proj, &mut memo, None)?;
        let c = star.mul(pv);
        total = total.add(c);
        terms.push(SubsetTerm { subset: idx, star, star_terms, projected: pv, contribution: c });
    }
    let mut result = MultResult::bound(total, terms);
    if !report.ok {
        let failing = report.failures().next().cloned();
        result.witness = failing.and_then(|c| c.witness.clone()).map(|w| affected_term(w, &result.breakdown, polys));
        return Err(Error::Hypothesis(Box::new(HypothesisFailure { report, unchecked: result })));
    }
    let mut exact = true;
    for (idx, _) in &tset {
        let mut r: Vec<SparsePoly> = polys.iter().map(|p| restrict_poly(p, idx)).filter(|p| !p.is_zero()).collect();
        let fr = restrict_poly(f, idx);
        if fr.is_zero() {
            continue;
        }
        r.push(fr);
        let rep = star_k_nondegenerate(&r, idx.len() as i64)?;
        if !rep.nondegenerate {
            exact = false;
            result.witness = rep.witness.map(|mut w| {
                w.subset = idx.clone();
                w
            });
            break;
        }
    }
    result.exact = exact;
    if tset.is_empty() {
        result.notes.push("no index set contributes".into());
    }
    Ok(result)
}

/// Points a hypothesis witness at the bound term whose facet contains the degenerate face.
fn affected_term(mut w: DegeneracyWitness, terms: &[SubsetTerm], polys: &[SparsePoly]) -> DegeneracyWitness {
    let Some(term) = terms.iter().find(|t| t.subset == w.subset) else { return w };
    let t = t_poly(polys, &w.subset);
    let restricted: Vec<SparsePoly> = t.iter().map(|&j| restrict_poly(&polys[j], &w.subset)).collect();
    let Ok(sum) = restricted
        .iter()
        .map(diagram_of)
        .try_fold(None::<LatticeDiagram>, |acc, d| -> Result<Option<LatticeDiagram>> {
            let d = d?;
            Ok(Some(match acc {
                None => d,
                Some(a) => a.minkowski_sum(&d)?,
            }))
        })
    else {
        return w;
    };
    let Some(sum) = sum else { return w };
    let Ok(face) = sum.face_for(&w.nu) else { return w };
    for st in &term.star_terms {
        if let Ok(big) = sum.face_for(&st.nu) {
            if face.vertices.iter().all(|v| big.vertices.contains(v)) && st.nu != w.nu {
                w.face_nu = Some(std::mem::replace(&mut w.nu, st.nu.clone()));
                break;
            }
        }
    }
    w
}
