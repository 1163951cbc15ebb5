//! Newton diagrams: supports, vertices and compact faces with positive normals.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::hull::cone_facets;
use crate::intmat::{primitive, rank};
use crate::{Error, Result};

pub type Point = Vec<i64>;

/// Integer covector defining a weighted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightCovector(pub Vec<i64>);

impl WeightCovector {
    pub fn primitive(&self) -> WeightCovector {
        let v: Vec<i128> = self.0.iter().map(|&x| x as i128).collect();
        WeightCovector(primitive(&v).into_iter().map(|x| x as i64).collect())
    }

    pub fn is_centered(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn dot(&self, p: &[i64]) -> i64 {
        dot(&self.0, p)
    }
}

impl std::fmt::Display for WeightCovector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_centered(nu: &[i64], n: usize) -> Result<()> {
    if nu.len() != n {
        return Err(Error::Input(format!("covector has length {} in dimension {n}", nu.len())));
    }
    if nu.iter().any(|&x| x <= 0) {
        return Err(Error::Domain(
            "weighted order is not centered at the origin (a coordinate is not positive)".into(),
        ));
    }
    Ok(())
}

/// A compact face of a Newton diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Primitive inner normal with all coordinates positive.
    pub normal: Vec<i64>,
    /// Minimum of the normal over the support.
    pub min: i64,
    /// Support points on the face.
    pub points: Vec<Point>,
    pub vertices: Vec<Point>,
    pub dim: usize,
}

/// Newton diagram of a finite support in Z^n_{>=0}. An empty diagram is allowed
/// and arises from restrictions that miss the coordinate subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeDiagram {
    n: usize,
    support: Vec<Point>,
    vertices: Vec<Point>,
    faces: Vec<Face>,
    /// Inequalities a.x >= b describing conv(support) + R^n_{>=0}.
    #[serde(skip)]
    halfspaces: Vec<(Vec<i64>, i64)>,
}

fn affine_dim(pts: &[Point]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<i128>> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b) as i128).collect()).collect();
    rank(&rows)
}

/// Points not dominated coordinatewise by another point.
fn minimal_points(pts: &BTreeSet<Point>) -> Vec<Point> {
    pts.iter()
        .filter(|p| !pts.iter().any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect()
}

impl LatticeDiagram {
    pub fn empty(n: usize) -> Self {
        LatticeDiagram { n, support: vec![], vertices: vec![], faces: vec![], halfspaces: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn contains_origin(&self) -> bool {
        self.support.iter().any(|p| p.iter().all(|&x| x == 0))
    }

    /// Whether p lies in conv(support) + R^n_{>=0}.
    pub fn dominates(&self, p: &[i64]) -> bool {
        !self.is_empty() && self.halfspaces.iter().all(|(a, b)| dot(a, p) >= *b)
    }

    /// Minimum of <nu, .> over the support and the set where it is attained.
    pub fn min_face(&self, nu: &[i64]) -> Result<(i64, Vec<Point>)> {
        check_centered(nu, self.n)?;
        if self.is_empty() {
            return Err(Error::Domain("empty diagram".into()));
        }
        let m = self.support.iter().map(|p| dot(nu, p)).min().unwrap();
        Ok((m, self.support.iter().filter(|p| dot(nu, p) == m).cloned().collect()))
    }

    /// Primitive positive normals of the (n-1)-dimensional compact faces.
    pub fn facet_normals(&self) -> Vec<WeightCovector> {
        if self.n == 0 {
            return vec![];
        }
        self.faces.iter().filter(|f| f.dim + 1 == self.n).map(|f| WeightCovector(f.normal.clone())).collect()
    }

    /// Diagram of the support points lying in R^I, expressed in the coordinates I
    /// (0-based, in the given order). Empty when no support point lies in R^I.
    pub fn restrict(&self, idx: &[usize]) -> LatticeDiagram {
        let pts: Vec<Point> = self
            .support
            .iter()
            .filter(|p| p.iter().enumerate().all(|(i, &a)| a == 0 || idx.contains(&i)))
            .map(|p| idx.iter().map(|&i| p[i]).collect())
            .collect();
        if pts.is_empty() {
            LatticeDiagram::empty(idx.len())
        } else {
            newton_diagram(&pts).expect("nonempty support")
        }
    }

    /// Minkowski sum of two diagrams.
    pub fn minkowski_sum(&self, o: &LatticeDiagram) -> Result<LatticeDiagram> {
        if self.n != o.n {
            return Err(Error::Input("dimension mismatch in Minkowski sum".into()));
        }
        if self.is_empty() || o.is_empty() {
            return Err(Error::Domain("empty diagram".into()));
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &o.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        newton_diagram(&pts)
    }

    /// Face with the given normal: In_nu(support) with its dimension.
    pub fn face_for(&self, nu: &[i64]) -> Result<Face> {
        let (m, pts) = self.min_face(nu)?;
        let verts: Vec<Point> = self.vertices.iter().filter(|v| dot(nu, v) == m).cloned().collect();
        let dim = affine_dim(&verts);
        Ok(Face { normal: nu.to_vec(), min: m, points: pts, vertices: verts, dim })
    }
}

/// Coordinatewise projection of a support onto the coordinates I.
pub fn project(support: &[Point], idx: &[usize]) -> Vec<Point> {
    let s: BTreeSet<Point> = support.iter().map(|p| idx.iter().map(|&i| p[i]).collect()).collect();
    s.into_iter().collect()
}

/// Newton diagram of a finite nonempty support in Z^n_{>=0}.
pub fn newton_diagram(support: &[Point]) -> Result<LatticeDiagram> {
    let first = support.first().ok_or_else(|| Error::Domain("empty diagram".into()))?;
    let n = first.len();
    let set: BTreeSet<Point> = support.iter().cloned().collect();
    if set.iter().any(|p| p.len() != n || p.iter().any(|&x| x < 0)) {
        return Err(Error::Input("support points must be nonnegative and of equal length".into()));
    }
    let support: Vec<Point> = set.iter().cloned().collect();
    if n == 0 {
        return Ok(LatticeDiagram { n, support: support.clone(), vertices: support, faces: vec![], halfspaces: vec![] });
    }
    let mins = minimal_points(&set);
    let mut gens: Vec<Vec<i128>> = mins.iter().map(|p| std::iter::once(1).chain(p.iter().map(|&x| x as i128)).collect()).collect();
    for i in 0..n {
        gens.push((0..=n).map(|j| (j == i + 1) as i128).collect());
    }
    let facets = cone_facets(&gens).ok_or_else(|| Error::Internal("orthant hull is not full-dimensional".into()))?;
    let m = mins.len();
    // Drop the facet at infinity (normal (1,0,...,0)).
    let facets: Vec<_> = facets.into_iter().filter(|f| f.normal[1..].iter().any(|&x| x != 0)).collect();
    let vertices: Vec<usize> = (0..m)
        .filter(|&i| {
            let rows: Vec<Vec<i128>> = facets.iter().filter(|f| f.tight.contains(&i)).map(|f| f.normal.clone()).collect();
            rank(&rows) == n
        })
        .collect();
    let halfspaces: Vec<(Vec<i64>, i64)> =
        facets.iter().map(|f| (f.normal[1..].iter().map(|&x| x as i64).collect(), -(f.normal[0] as i64))).collect();
    let fsets: Vec<BTreeSet<usize>> =
        facets.iter().map(|f| f.tight.iter().copied().filter(|i| vertices.contains(i)).collect()).collect();
    // Vertex sets of all faces: closure of facet vertex sets under intersection.
    let mut cands: BTreeSet<BTreeSet<usize>> = fsets.iter().filter(|s| !s.is_empty()).cloned().collect();
    loop {
        let cur: Vec<BTreeSet<usize>> = cands.iter().cloned().collect();
        let mut added = false;
        for a in 0..cur.len() {
            for b in a + 1..cur.len() {
                let i: BTreeSet<usize> = cur[a].intersection(&cur[b]).copied().collect();
                if !i.is_empty() && cands.insert(i) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut faces = Vec::new();
    for vs in &cands {
        let mut sum = vec![0i128; n];
        for (f, s) in facets.iter().zip(&fsets) {
            if vs.is_subset(s) {
                for k in 0..n {
                    sum[k] += f.normal[k + 1];
                }
            }
        }
        if sum.iter().any(|&x| x <= 0) {
            continue;
        }
        let nu: Vec<i64> = primitive(&sum).into_iter().map(|x| x as i64).collect();
        let verts: Vec<Point> = vs.iter().map(|&i| mins[i].clone()).collect();
        let mval = dot(&nu, &verts[0]);
        let pts: Vec<Point> = support.iter().filter(|p| dot(&nu, p) == mval).cloned().collect();
        faces.push(Face { dim: affine_dim(&verts), normal: nu, min: mval, points: pts, vertices: verts });
    }
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.normal.cmp(&b.normal)));
    Ok(LatticeDiagram { n, support, vertices: vertices.iter().map(|&i| mins[i].clone()).collect(), faces, halfspaces })
}
