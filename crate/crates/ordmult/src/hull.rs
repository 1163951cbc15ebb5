//! Facets of a full-dimensional polyhedral cone by the double description method.

use crate::intmat::{det, primitive, rank};

/// Facet of cone(G): inner normal y with <y, g> >= 0 on all generators, and the
/// indices of the generators on which it is tight.
#[derive(Clone, Debug)]
pub struct ConeFacet {
    pub normal: Vec<i128>,
    pub tight: Vec<usize>,
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x.checked_mul(*y).expect("overflow in hull arithmetic")).sum()
}

/// Facets of the cone spanned by `gens` (rows in Z^d). Returns None when the
/// generators do not span R^d.
pub fn cone_facets(gens: &[Vec<i128>]) -> Option<Vec<ConeFacet>> {
    let d = gens.first()?.len();
    if rank(gens) < d {
        return None;
    }
    // Greedy basis of d independent generators.
    let mut basis: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut trial: Vec<Vec<i128>> = basis.iter().map(|&j| gens[j].clone()).collect();
        trial.push(g.clone());
        if rank(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    let m: Vec<Vec<i128>> = basis.iter().map(|&j| gens[j].clone()).collect();
    let dm = det(&m);
    let sgn = dm.signum();
    // Ray j = column j of adj(m), oriented so that <ray_j, g_j> > 0.
    let mut rays: Vec<Vec<i128>> = (0..d)
        .map(|j| {
            let col: Vec<i128> = (0..d)
                .map(|i| {
                    // adj[i][j] = (-1)^{i+j} det(minor removing row j, column i)
                    let minor: Vec<Vec<i128>> = (0..d)
                        .filter(|&r| r != j)
                        .map(|r| (0..d).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor) * sgn
                })
                .collect();
            primitive(&col)
        })
        .collect();
    let mut processed: Vec<usize> = basis.clone();
    for (gi, g) in gens.iter().enumerate() {
        if basis.contains(&gi) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| dot(r, g)).collect();
        if vals.iter().all(|&v| v >= 0) {
            processed.push(gi);
            continue;
        }
        let zero_sets: Vec<Vec<usize>> =
            rays.iter().map(|r| processed.iter().copied().filter(|&k| dot(r, &gens[k]) == 0).collect()).collect();
        let mut next: Vec<Vec<i128>> = Vec::new();
        for (r, &v) in rays.iter().zip(&vals) {
            if v >= 0 {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if vals[p] <= 0 {
                continue;
            }
            for q in 0..rays.len() {
                if vals[q] >= 0 {
                    continue;
                }
                let common: Vec<usize> = zero_sets[p].iter().copied().filter(|k| zero_sets[q].contains(k)).collect();
                if common.len() + 2 < d {
                    continue;
                }
                let rows: Vec<Vec<i128>> = common.iter().map(|&k| gens[k].clone()).collect();
                if rank(&rows) != d - 2 {
                    continue;
                }
                let nr: Vec<i128> = (0..d)
                    .map(|t| {
                        vals[p].checked_mul(rays[q][t]).expect("overflow") - vals[q].checked_mul(rays[p][t]).expect("overflow")
                    })
                    .collect();
                let nr = primitive(&nr);
                if !next.contains(&nr) {
                    next.push(nr);
                }
            }
        }
        rays = next;
        processed.push(gi);
    }
    Some(
        rays.into_iter()
            .map(|r| {
                let tight = (0..gens.len()).filter(|&k| dot(&r, &gens[k]) == 0).collect();
                ConeFacet { normal: r, tight }
            })
            .collect(),
    )
}
