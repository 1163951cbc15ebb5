//! Torus roots of initial-form systems and the non-degeneracy predicates built on them.

use serde::Serialize;

use crate::field::{Coeff, Field};
use crate::groebner::{eliminate, groebner_basis, is_unit, MonomialOrder};
use crate::lattice::{newton_diagram, Point};
use crate::poly::SparsePoly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum WitnessProof {
    /// A common root with all coordinates nonzero.
    Point(Vec<String>),
    /// The saturated ideal is not the unit ideal; no explicit point was found.
    IdealNotUnit,
}

/// A face system (coordinate subspace I, covector nu) with a common torus root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyWitness {
    /// 0-based coordinate indices.
    pub subset: Vec<usize>,
    pub nu: Vec<i64>,
    pub proof: WitnessProof,
    /// Covector of the face where the torus root was found, when it differs from `nu`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_nu: Option<Vec<i64>>,
}

impl DegeneracyWitness {
    pub fn describe(&self) -> String {
        let i: Vec<String> = self.subset.iter().map(|k| (k + 1).to_string()).collect();
        let nu: Vec<String> = self.nu.iter().map(|k| k.to_string()).collect();
        let p = match &self.proof {
            WitnessProof::Point(v) => format!("torus root ({})", v.join(", ")),
            WitnessProof::IdealNotUnit => "ideal-not-unit".into(),
        };
        let face = match &self.face_nu {
            Some(f) => format!(" (degenerate face nu = ({}))", f.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")),
            None => String::new(),
        };
        format!("I = {{{}}}, nu = ({}){}, {}", i.join(","), nu.join(","), face, p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusRoot {
    pub exists: bool,
    pub point: Option<Vec<Coeff>>,
}

fn check_system(polys: &[SparsePoly]) -> Result<(usize, Field)> {
    let first = polys.first().ok_or_else(|| Error::Input("vacuous system: no polynomials".into()))?;
    let (n, f) = (first.nvars(), first.field());
    for p in polys {
        if p.nvars() != n {
            return Err(Error::Input("polynomials live in different rings".into()));
        }
        p.ensure_field(f)?;
    }
    Ok((n, f))
}

/// The ideal (polys, u*x_1*...*x_n - 1) in variables (u, x).
fn torus_ideal(polys: &[SparsePoly], n: usize, field: Field) -> Vec<SparsePoly> {
    let map: Vec<usize> = (1..=n).collect();
    let mut ext: Vec<SparsePoly> = polys.iter().map(|p| p.embed(n + 1, &map)).collect();
    let e = vec![1u32; n + 1];
    ext.push(&SparsePoly::monomial(e, Coeff::one(field)) - &SparsePoly::one(n + 1, field));
    ext
}

fn small_values(field: Field) -> Vec<Coeff> {
    match field {
        Field::Fp(p) => (1..p.min(12)).map(|v| Coeff::Fp(v, p)).collect(),
        _ => {
            let mut v: Vec<Coeff> = [1, -1, 2, -2, 3, -3].iter().map(|&k| Coeff::from_int(field, k)).collect();
            let half = Coeff::from_int(field, 2).inv().unwrap();
            v.push(half.clone());
            v.push(-&half);
            if field == Field::Qi {
                let i = Coeff::imag_unit(field).unwrap();
                for k in [1, -1, 2, -2] {
                    v.push(&i * &Coeff::from_int(field, k));
                }
            }
            v
        }
    }
}

/// Searches a small grid of nonzero points for a common root.
pub fn search_torus_point(polys: &[SparsePoly], limit: usize) -> Option<Vec<Coeff>> {
    let n = polys.first()?.nvars();
    let vals = small_values(polys[0].field());
    let total = vals.len().checked_pow(n as u32)?;
    if total > limit {
        return None;
    }
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let pt: Vec<Coeff> = idx.iter().map(|&k| vals[k].clone()).collect();
        if polys.iter().all(|p| p.eval(&pt).is_zero()) {
            return Some(pt);
        }
        for d in idx.iter_mut() {
            *d += 1;
            if *d < vals.len() {
                break;
            }
            *d = 0;
        }
    }
    None
}

/// Whether the polynomials have a common root in the torus over the algebraic closure.
pub fn has_torus_root(polys: &[SparsePoly]) -> Result<TorusRoot> {
    let (n, field) = check_system(polys)?;
    let polys: Vec<SparsePoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.iter().any(|p| p.total_degree() == Some(0)) {
        return Ok(TorusRoot { exists: false, point: None });
    }
    if polys.is_empty() || n == 0 {
        return Ok(TorusRoot { exists: true, point: Some(vec![]) });
    }
    let gb = groebner_basis(&torus_ideal(&polys, n, field), MonomialOrder::GrevLex)?;
    if is_unit(&gb) {
        return Ok(TorusRoot { exists: false, point: None });
    }
    Ok(TorusRoot { exists: true, point: search_torus_point(&polys, 20_000) })
}

/// For systems in variables (x, z) with the last k variables as parameters, generators of
/// the ideal of parameter values over which the x-system has a torus root.
pub fn torus_root_parameter_locus(polys: &[SparsePoly], k: usize) -> Result<Vec<SparsePoly>> {
    let (n, field) = check_system(polys)?;
    if k > n {
        return Err(Error::Input("more parameters than variables".into()));
    }
    let m = n - k;
    let map: Vec<usize> = (1..=n).collect();
    let mut ext: Vec<SparsePoly> = polys.iter().map(|p| p.embed(n + 1, &map)).collect();
    let mut e = vec![0u32; n + 1];
    for v in e.iter_mut().take(m + 1) {
        *v = 1;
    }
    ext.push(&SparsePoly::monomial(e, Coeff::one(field)) - &SparsePoly::one(n + 1, field));
    eliminate(&ext, m + 1)
}

/// Index sets in increasing size, then lexicographically.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << n)).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Restricts f to K^I and expresses it in the coordinates of I.
pub fn restrict_poly(f: &SparsePoly, idx: &[usize]) -> SparsePoly {
    let r = f.restrict_to_subspace(idx);
    SparsePoly::from_terms(idx.len(), f.field(), r.terms().iter().map(|(e, c)| (idx.iter().map(|&i| e[i]).collect(), c.clone())))
}

fn support_points(f: &SparsePoly) -> Vec<Point> {
    f.terms().keys().map(|e| e.iter().map(|&a| a as i64).collect()).collect()
}

/// Representative covectors for all compact faces of dimension <= max_dim of the summed
/// diagram, with the face dimension.
pub fn face_covectors(polys: &[SparsePoly], max_dim: usize) -> Result<Vec<(Vec<i64>, usize)>> {
    let mut sum = newton_diagram(&support_points(&polys[0]))?;
    for p in &polys[1..] {
        sum = sum.minkowski_sum(&newton_diagram(&support_points(p))?)?;
    }
    Ok(sum.faces().iter().filter(|f| f.dim <= max_dim).map(|f| (f.normal.clone(), f.dim)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondegReport {
    pub nondegenerate: bool,
    pub witness: Option<DegeneracyWitness>,
    /// Number of face systems checked.
    pub checked: usize,
}

fn check_faces(
    polys: &[SparsePoly],
    subset: &[usize],
    max_dim: usize,
    checked: &mut usize,
) -> Result<Option<DegeneracyWitness>> {
    for (nu, _) in face_covectors(polys, max_dim)? {
        let init: Vec<SparsePoly> = polys.iter().map(|p| p.initial_form(&nu)).collect::<Result<_>>()?;
        *checked += 1;
        let r = has_torus_root(&init)?;
        if r.exists {
            let proof = match r.point {
                Some(p) => WitnessProof::Point(p.iter().map(|c| c.to_string()).collect()),
                None => WitnessProof::IdealNotUnit,
            };
            return Ok(Some(DegeneracyWitness { subset: subset.to_vec(), nu, proof, face_nu: None }));
        }
    }
    Ok(None)
}

/// For every coordinate subspace K^I and every covector centered at the origin, the
/// initial forms of the restrictions f_j|K^I that do not vanish identically have no
/// common torus root.
pub fn nondegenerate_at_origin(polys: &[SparsePoly]) -> Result<NondegReport> {
    let (n, _) = check_system(polys)?;
    let mut checked = 0;
    for idx in nonempty_subsets(n) {
        let restricted: Vec<SparsePoly> = polys.iter().map(|f| restrict_poly(f, &idx)).filter(|f| !f.is_zero()).collect();
        if restricted.is_empty() {
            continue;
        }
        if let Some(w) = check_faces(&restricted, &idx, idx.len(), &mut checked)? {
            return Ok(NondegReport { nondegenerate: false, witness: Some(w), checked });
        }
    }
    Ok(NondegReport { nondegenerate: true, witness: None, checked })
}

/// Non-degeneracy restricted to covectors whose initial face of the summed support has
/// dimension at most k. A negative k is vacuously satisfied.
pub fn star_k_nondegenerate(polys: &[SparsePoly], k: i64) -> Result<NondegReport> {
    let (n, _) = check_system(polys)?;
    if k < 0 {
        return Ok(NondegReport { nondegenerate: true, witness: None, checked: 0 });
    }
    if polys.iter().any(|p| p.is_zero()) {
        return Err(Error::Domain("zero polynomial in a non-degeneracy check".into()));
    }
    let mut checked = 0;
    let all: Vec<usize> = (0..n).collect();
    let w = check_faces(polys, &all, k as usize, &mut checked)?;
    Ok(NondegReport { nondegenerate: w.is_none(), witness: w, checked })
}

/// Exhaustive scan of (F_p^*)^n. A true answer implies a torus root over the closure of F_p.
pub fn brute_force_torus_scan(polys: &[SparsePoly], p: u64) -> Result<bool> {
    let (n, _) = check_system(polys)?;
    Field::prime(p)?;
    let red: Vec<SparsePoly> = polys.iter().map(|f| f.reduce_mod(p)).collect::<Result<_>>()?;
    let mut pt: Vec<u64> = vec![1; n];
    loop {
        let c: Vec<Coeff> = pt.iter().map(|&v| Coeff::Fp(v, p)).collect();
        if red.iter().all(|f| f.eval(&c).is_zero()) {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            pt[i] += 1;
            if pt[i] < p {
                break;
            }
            pt[i] = 1;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ps(v: &str, fs: &[&str], field: Field) -> Vec<SparsePoly> {
        let vars: Vec<String> = v.split(',').map(String::from).collect();
        fs.iter().map(|f| parse_poly(f, &vars, field).unwrap()).collect()
    }

    #[test]
    fn trivial_systems() {
        let r = has_torus_root(&ps("x", &["x - 1"], Field::Q)).unwrap();
        assert!(r.exists);
        assert_eq!(r.point, Some(vec![Coeff::from_int(Field::Q, 1)]));
        assert!(!has_torus_root(&ps("x", &["1"], Field::Q)).unwrap().exists);
        assert!(!has_torus_root(&ps("x,y", &["x*y"], Field::Q)).unwrap().exists);
        assert!(has_torus_root(&[]).is_err());
    }

    #[test]
    fn parameter_locus() {
        let l = torus_root_parameter_locus(&ps("x,y,z", &["x*y + y^2", "2*x*z^2 + y*(4 + z^2)"], Field::Q), 1).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0], ps("z", &["z^2 - 4"], Field::Q)[0]);
    }

    #[test]
    fn scans() {
        assert!(brute_force_torus_scan(&ps("x,y", &["x + y"], Field::Q), 3).unwrap());
        assert!(!brute_force_torus_scan(&ps("x", &["x - 1", "x - 2"], Field::Q), 5).unwrap());
    }

    #[test]
    fn nonapp_star_condition() {
        let f = ps("x,y,z", &["(x - y + z)*(x + y - z)", "x - y - 2*z"], Field::Q);
        let r = star_k_nondegenerate(&f, 2).unwrap();
        assert!(!r.nondegenerate);
        assert_eq!(r.witness.unwrap().nu, vec![1, 1, 1]);
        assert!(star_k_nondegenerate(&f, -1).unwrap().nondegenerate);
    }

    #[test]
    fn coordinate_functions() {
        let f = ps("x", &["x"], Field::Q);
        assert!(nondegenerate_at_origin(&f).unwrap().nondegenerate);
        let g = ps("x,y", &["x^2 + y^2", "x + y"], Field::Q);
        assert!(nondegenerate_at_origin(&g).unwrap().nondegenerate);
        let h = ps("x,y", &["x^2 - y^2", "x - y"], Field::Q);
        let r = nondegenerate_at_origin(&h).unwrap();
        assert!(!r.nondegenerate);
        assert_eq!(r.witness.unwrap().nu, vec![1, 1]);
    }
}
