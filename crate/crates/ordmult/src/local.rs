//! Local lengths of zero-dimensional pieces, with a stabilization certificate.
//!
//! For an ideal I and an ideal Q with V(I) ∩ V(Q) finite, the dimensions of
//! K[x]/(I + Q^N) increase with N. Once two consecutive values agree,
//! Q^N ⊆ I + Q^(N+1), so by Nakayama Q^N ⊆ I locally at every point of V(Q),
//! and the common value is the sum of the local lengths of I at those points.

use serde::Serialize;

use crate::field::Coeff;
use crate::groebner::{groebner_basis, normal_form, quotient_dimension, saturate, MonomialOrder};
use crate::poly::SparsePoly;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StableLength {
    pub length: u64,
    /// The power N with dim(I + Q^N) = dim(I + Q^(N+1)).
    pub power: u32,
    /// dim K[x]/(I + Q^k) for k = 1..=power+1.
    pub dims: Vec<u64>,
}

/// Generators of Q^k: products over multisets of k generators.
pub fn power_generators(q: &[SparsePoly], k: u32) -> Vec<SparsePoly> {
    let Some(first) = q.first() else {
        return vec![];
    };
    // (product, smallest index allowed next)
    let mut cur = vec![(SparsePoly::one(first.nvars(), first.field()), 0usize)];
    for _ in 0..k {
        cur = cur
            .iter()
            .flat_map(|(p, s)| q.iter().enumerate().skip(*s).map(move |(j, g)| (p * g, j)))
            .collect();
    }
    cur.into_iter().map(|(p, _)| p).collect()
}

fn dim_with(ideal: &[SparsePoly], extra: &[SparsePoly]) -> Result<Option<u64>> {
    let gens: Vec<SparsePoly> = ideal.iter().chain(extra).cloned().collect();
    let gb = groebner_basis(&gens, MonomialOrder::GrevLex)?;
    Ok(quotient_dimension(&gb, MonomialOrder::GrevLex).map(|d| d as u64))
}

/// Sum of the local lengths of K[x]/I at the points of V(I) ∩ V(Q).
pub fn stable_length(ideal: &[SparsePoly], q: &[SparsePoly], max_power: u32) -> Result<StableLength> {
    if q.is_empty() {
        return Err(Error::Input("the localizing ideal has no generators".into()));
    }
    let mut dims = Vec::new();
    for k in 1..=max_power + 1 {
        let qk = power_generators(q, k);
        let d = dim_with(ideal, &qk)?
            .ok_or_else(|| Error::Domain("V(I) ∩ V(Q) is not finite".into()))?;
        dims.push(d);
        if dims.len() >= 2 && dims[dims.len() - 2] == d {
            return Ok(StableLength { length: d, power: k - 1, dims });
        }
    }
    Err(Error::Domain(format!("local length did not stabilize up to power {max_power} (dims {dims:?})")))
}

/// Ideal of a point: (x_i - p_i).
pub fn point_ideal(point: &[Coeff]) -> Vec<SparsePoly> {
    let n = point.len();
    point
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let f = c.field();
            &SparsePoly::var(n, i, f) - &SparsePoly::constant(n, c.clone())
        })
        .collect()
}

/// Local length of K[x]/I at a single point.
pub fn length_at_point(ideal: &[SparsePoly], point: &[Coeff], max_power: u32) -> Result<StableLength> {
    stable_length(ideal, &point_ideal(point), max_power)
}

/// Rank of the Jacobian matrix of `polys` at `point`.
pub fn jacobian_rank(polys: &[SparsePoly], point: &[Coeff]) -> usize {
    let n = point.len();
    let mut rows: Vec<Vec<Coeff>> = polys.iter().map(|f| (0..n).map(|i| f.partial(i).eval(point)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether every element of `a` lies in the ideal generated by `b`.
pub fn ideal_within(a: &[SparsePoly], b: &[SparsePoly]) -> Result<bool> {
    let gb = groebner_basis(b, MonomialOrder::GrevLex)?;
    Ok(a.iter().all(|f| normal_form(f, &gb, MonomialOrder::GrevLex).is_zero()))
}

/// Reduced Gröbner basis (grevlex) of I : g^infinity.
pub fn saturation_basis(ideal: &[SparsePoly], g: &SparsePoly) -> Result<Vec<SparsePoly>> {
    let gens = saturate(ideal, g)?;
    groebner_basis(&gens, MonomialOrder::GrevLex)
}

/// Whether f is in the radical of I, by the Rabinowitsch trick.
pub fn in_radical(ideal: &[SparsePoly], f: &SparsePoly) -> Result<bool> {
    let gb = saturation_basis(ideal, f)?;
    Ok(crate::groebner::is_unit(&gb))
}
