//! Exact lattice volumes and mixed volumes.

use std::collections::BTreeSet;

use crate::hull::cone_facets;
use crate::intmat::{coordinates, det, perp_lattice_basis, rank};
use crate::lattice::Point;
use crate::{Error, Result};

fn affine_rank(pts: &[&Vec<i128>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<i128>> = pts[1..].iter().map(|p| p.iter().zip(pts[0].iter()).map(|(a, b)| a - b).collect()).collect();
    rank(&rows)
}

fn to128(pts: &[Point]) -> Vec<Vec<i128>> {
    let s: BTreeSet<Vec<i128>> = pts.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
    s.into_iter().collect()
}

/// Facet vertex-index sets of a full-dimensional polytope, or None if it is not full-dimensional.
fn facet_sets(pts: &[Vec<i128>]) -> Option<Vec<BTreeSet<usize>>> {
    let gens: Vec<Vec<i128>> = pts.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect();
    let f = cone_facets(&gens)?;
    Some(f.into_iter().map(|c| c.tight.into_iter().collect()).collect())
}

/// Pulling triangulation of the face with point set `face` (affine dimension k).
fn triangulate(pts: &[Vec<i128>], facets: &[BTreeSet<usize>], face: &BTreeSet<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    let v0 = *face.iter().next().unwrap();
    if k == 0 {
        out.push(vec![v0]);
        return;
    }
    let mut subs: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for f in facets {
        let s: BTreeSet<usize> = face.intersection(f).copied().collect();
        if s.len() < k || s.contains(&v0) || s.len() == face.len() {
            continue;
        }
        let refs: Vec<&Vec<i128>> = s.iter().map(|&i| &pts[i]).collect();
        if affine_rank(&refs) == k - 1 {
            subs.insert(s);
        }
    }
    for s in subs {
        let mut inner = Vec::new();
        triangulate(pts, facets, &s, k - 1, &mut inner);
        for mut simplex in inner {
            simplex.push(v0);
            out.push(simplex);
        }
    }
}

/// n! times the Euclidean volume of conv(points); 0 when lower-dimensional.
pub fn normalized_volume(points: &[Point]) -> i128 {
    let pts = to128(points);
    let Some(n) = pts.first().map(|p| p.len()) else { return 0 };
    if n == 0 {
        return 1;
    }
    let Some(facets) = facet_sets(&pts) else { return 0 };
    let all: BTreeSet<usize> = (0..pts.len()).collect();
    let mut simplices = Vec::new();
    triangulate(&pts, &facets, &all, n, &mut simplices);
    simplices
        .iter()
        .map(|s| {
            let m: Vec<Vec<i128>> = s[1..].iter().map(|&i| pts[i].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect()).collect();
            det(&m).abs()
        })
        .sum()
}

/// Vertices of conv(points).
pub fn polytope_vertices(points: &[Point]) -> Vec<Point> {
    let pts = to128(points);
    let Some(n) = pts.first().map(|p| p.len()) else { return vec![] };
    if pts.len() <= 1 || n == 0 {
        return points.iter().take(1).cloned().collect();
    }
    let gens: Vec<Vec<i128>> = pts.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect();
    let keep: Vec<usize> = match cone_facets(&gens) {
        Some(f) => (0..pts.len())
            .filter(|&i| {
                let rows: Vec<Vec<i128>> = f.iter().filter(|c| c.tight.contains(&i)).map(|c| c.normal.clone()).collect();
                rank(&rows) == n
            })
            .collect(),
        // Lower-dimensional: keep everything, callers only need a generating set.
        None => (0..pts.len()).collect(),
    };
    keep.into_iter().map(|i| pts[i].iter().map(|&x| x as i64).collect()).collect()
}

pub fn minkowski_points(a: &[Point], b: &[Point]) -> Vec<Point> {
    let mut s = BTreeSet::new();
    for p in a {
        for q in b {
            s.insert(p.iter().zip(q).map(|(x, y)| x + y).collect::<Point>());
        }
    }
    polytope_vertices(&s.into_iter().collect::<Vec<_>>())
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Mixed volume normalized so that mv(P, ..., P) = n! vol(P).
pub fn mixed_volume(polys: &[Vec<Point>]) -> Result<i128> {
    let n = polys.len();
    if polys.iter().any(|p| p.is_empty()) {
        return Err(Error::Input("empty polytope in mixed volume".into()));
    }
    if polys.iter().any(|p| p.iter().any(|x| x.len() != n)) {
        return Err(Error::Input(format!("mixed volume of {n} polytopes needs dimension {n}")));
    }
    if n == 0 {
        return Ok(1);
    }
    let polys: Vec<Vec<Point>> = polys.iter().map(|p| polytope_vertices(p)).collect();
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let mut sum: Vec<Point> = vec![vec![0; n]];
        for (i, p) in polys.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = minkowski_points(&sum, p);
            }
        }
        let v = normalized_volume(&sum);
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        total += sign * v;
    }
    // Each normalized volume is n! vol; the inclusion-exclusion sum of Euclidean volumes is the answer.
    let f = factorial(n);
    if total % f != 0 {
        return Err(Error::Internal("mixed volume is not integral".into()));
    }
    Ok(total / f)
}

/// Hermite basis of the lattice orthogonal to nu.
pub fn lattice_basis_of_perp(nu: &[i64]) -> Result<Vec<Vec<i64>>> {
    if nu.iter().all(|&x| x == 0) {
        return Err(Error::Input("covector is zero".into()));
    }
    let v: Vec<i128> = nu.iter().map(|&x| x as i128).collect();
    Ok(perp_lattice_basis(&v).into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect())
}

/// Coordinates of face points (translated to the origin) in a lattice basis of nu-perp.
pub fn face_coordinates(basis: &[Vec<i64>], nu: &[i64], face: &[Point]) -> Result<Vec<Point>> {
    let b: Vec<Vec<i128>> = basis.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let base = &face[0];
    face.iter()
        .map(|p| {
            let d: Vec<i128> = p.iter().zip(base).map(|(a, c)| (a - c) as i128).collect();
            let dot: i128 = d.iter().zip(nu).map(|(a, &c)| a * c as i128).sum();
            if dot != 0 {
                return Err(Error::Domain("face/normal mismatch".into()));
            }
            let c = coordinates(&b, &d).ok_or_else(|| Error::Domain("face/normal mismatch".into()))?;
            c.iter()
                .map(|q| {
                    if q.is_integer() {
                        Ok(q.to_integer() as i64)
                    } else {
                        Err(Error::Internal("non-integral coordinates in a lattice basis".into()))
                    }
                })
                .collect()
        })
        .collect()
}

/// (n-1)-dimensional mixed volume of faces lying in translates of nu-perp.
pub fn face_mixed_volume(nu: &[i64], faces: &[Vec<Point>]) -> Result<i128> {
    face_mixed_volume_in_basis(nu, &lattice_basis_of_perp(nu)?, faces)
}

pub fn face_mixed_volume_in_basis(nu: &[i64], basis: &[Vec<i64>], faces: &[Vec<Point>]) -> Result<i128> {
    let n = nu.len();
    if faces.len() + 1 != n {
        return Err(Error::Input(format!("expected {} faces, got {}", n - 1, faces.len())));
    }
    if faces.iter().any(|f| f.is_empty() || f.iter().any(|p| p.len() != n)) {
        return Err(Error::Input("faces must be nonempty and of ambient dimension".into()));
    }
    let mapped: Vec<Vec<Point>> = faces.iter().map(|f| face_coordinates(basis, nu, f)).collect::<Result<_>>()?;
    mixed_volume(&mapped)
}
