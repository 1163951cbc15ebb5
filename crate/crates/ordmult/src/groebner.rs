//! Buchberger's algorithm with the product and chain criteria.

use std::cmp::Ordering;

use crate::field::{Coeff, Field};
use crate::poly::{Exponent, SparsePoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Block order: the first k variables compared by grevlex, ties broken by grevlex on the rest.
    Elim(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elim(k) => grevlex(&a[..*k], &b[..*k]).then_with(|| grevlex(&a[*k..], &b[*k..])),
        }
    }
}

/// Polynomial as a list of terms sorted by decreasing monomial order.
#[derive(Clone, Debug)]
struct Poly {
    terms: Vec<(Exponent, Coeff)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quot(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

struct Ring {
    field: Field,
    order: MonomialOrder,
}

impl Ring {
    fn from_sparse(&self, p: &SparsePoly) -> Poly {
        let mut terms: Vec<(Exponent, Coeff)> = p.terms().iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        Poly { terms }
    }

    fn monic(&self, p: &mut Poly) {
        if let Some(inv) = p.terms.first().and_then(|t| t.1.inv()) {
            for t in p.terms.iter_mut() {
                t.1 = &t.1 * &inv;
            }
        }
    }

    /// p - c * x^m * g
    fn sub_mul(&self, p: &Poly, c: &Coeff, m: &[u32], g: &Poly) -> Poly {
        let mut out = Vec::with_capacity(p.terms.len() + g.terms.len());
        let mut i = 0;
        let shifted: Vec<(Exponent, Coeff)> =
            g.terms.iter().map(|(e, d)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c * d)).collect();
        let mut j = 0;
        while i < p.terms.len() || j < shifted.len() {
            let ord = if i == p.terms.len() {
                Ordering::Less
            } else if j == shifted.len() {
                Ordering::Greater
            } else {
                self.order.cmp(&p.terms[i].0, &shifted[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(p.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), -&shifted[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &p.terms[i].1 - &shifted[j].1;
                    if !v.is_zero() {
                        out.push((p.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    /// Full reduction modulo monic basis elements.
    fn reduce(&self, p: &Poly, g: &[Poly]) -> Poly {
        let mut f = p.clone();
        let mut pos = 0;
        while pos < f.terms.len() {
            let (e, c) = f.terms[pos].clone();
            match g.iter().find(|h| divides(&h.terms[0].0, &e)) {
                Some(h) => {
                    let m = quot(&e, &h.terms[0].0);
                    f = self.sub_mul(&f, &c, &m, h);
                }
                None => pos += 1,
            }
        }
        f
    }

    fn spoly(&self, a: &Poly, b: &Poly) -> Poly {
        let l = lcm(&a.terms[0].0, &b.terms[0].0);
        let one = Coeff::one(self.field);
        let ma = quot(&l, &a.terms[0].0);
        let mb = quot(&l, &b.terms[0].0);
        let zero = Poly { terms: vec![] };
        let pa = self.sub_mul(&zero, &(-&one), &ma, a);
        self.sub_mul(&pa, &one, &mb, b)
    }

    fn to_sparse(&self, n: usize, p: &Poly) -> SparsePoly {
        SparsePoly::from_terms(n, self.field, p.terms.iter().cloned())
    }
}

fn check_inputs(polys: &[SparsePoly]) -> Result<(usize, Field)> {
    let first = polys.first().ok_or_else(|| Error::Input("empty polynomial list".into()))?;
    let (n, f) = (first.nvars(), first.field());
    for p in polys {
        if p.nvars() != n {
            return Err(Error::Input("polynomials live in different rings".into()));
        }
        p.ensure_field(f)?;
    }
    Ok((n, f))
}

/// Reduced Gröbner basis (monic, sorted by leading monomial). The unit ideal gives [1].
pub fn groebner_basis(polys: &[SparsePoly], order: MonomialOrder) -> Result<Vec<SparsePoly>> {
    let (n, field) = check_inputs(polys)?;
    let ring = Ring { field, order };
    let mut basis: Vec<Poly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut done: std::collections::HashSet<(usize, usize)> = Default::default();
    let add = |p: Poly, basis: &mut Vec<Poly>, pairs: &mut Vec<(usize, usize)>| {
        pairs.extend((0..basis.len()).map(|i| (i, basis.len())));
        basis.push(p);
    };
    let mut input: Vec<Poly> = polys.iter().map(|p| ring.from_sparse(p)).filter(|p| !p.terms.is_empty()).collect();
    input.sort_by(|a, b| order.cmp(&a.terms[0].0, &b.terms[0].0));
    for p in input {
        let mut r = ring.reduce(&p, &basis);
        if r.terms.is_empty() {
            continue;
        }
        ring.monic(&mut r);
        add(r, &mut basis, &mut pairs);
    }
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm first.
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lcm(&basis[a.0].terms[0].0, &basis[a.1].terms[0].0);
                let lb = lcm(&basis[b.0].terms[0].0, &basis[b.1].terms[0].0);
                order.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        done.insert((i, j));
        let (li, lj) = (&basis[i].terms[0].0, &basis[j].terms[0].0);
        let l = lcm(li, lj);
        // Product criterion.
        if li.iter().zip(lj.iter()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // Chain criterion.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k].terms[0].0, &l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = ring.spoly(&basis[i], &basis[j]);
        let mut r = ring.reduce(&s, &basis);
        if r.terms.is_empty() {
            continue;
        }
        ring.monic(&mut r);
        if r.terms[0].0.iter().all(|&x| x == 0) {
            return Ok(vec![SparsePoly::one(n, field)]);
        }
        add(r, &mut basis, &mut pairs);
    }
    // Interreduce the elements with minimal leading monomials.
    let mut mins: Vec<Poly> = Vec::new();
    for (k, p) in basis.iter().enumerate() {
        let lm = &p.terms[0].0;
        let dominated = basis.iter().enumerate().any(|(m, q)| {
            m != k && divides(&q.terms[0].0, lm) && (q.terms[0].0 != *lm || m < k)
        });
        if !dominated {
            mins.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(mins.len());
    for k in 0..mins.len() {
        let others: Vec<Poly> = mins.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, q)| q.clone()).collect();
        let mut r = Poly { terms: vec![mins[k].terms[0].clone()] };
        let tail = Poly { terms: mins[k].terms[1..].to_vec() };
        let t = ring.reduce(&tail, &others);
        r.terms.extend(t.terms);
        ring.monic(&mut r);
        out.push(r);
    }
    out.sort_by(|a, b| order.cmp(&a.terms[0].0, &b.terms[0].0));
    Ok(out.iter().map(|p| ring.to_sparse(n, p)).collect())
}

/// Normal form of f modulo a Gröbner basis for `order`.
pub fn normal_form(f: &SparsePoly, gb: &[SparsePoly], order: MonomialOrder) -> SparsePoly {
    let ring = Ring { field: f.field(), order };
    let g: Vec<Poly> = gb.iter().map(|p| ring.from_sparse(p)).collect();
    let r = ring.reduce(&ring.from_sparse(f), &g);
    ring.to_sparse(f.nvars(), &r)
}

pub fn is_unit(gb: &[SparsePoly]) -> bool {
    gb.iter().any(|g| g.total_degree() == Some(0))
}

/// Ideal membership of f in (gens).
pub fn ideal_contains(gens: &[SparsePoly], f: &SparsePoly) -> Result<bool> {
    let gb = groebner_basis(gens, MonomialOrder::GrevLex)?;
    Ok(normal_form(f, &gb, MonomialOrder::GrevLex).is_zero())
}

/// Generators of the ideal intersected with the subring in the variables k.. (returned in
/// the remaining n-k variables).
pub fn eliminate(polys: &[SparsePoly], k: usize) -> Result<Vec<SparsePoly>> {
    let (n, _) = check_inputs(polys)?;
    let gb = groebner_basis(polys, MonomialOrder::Elim(k))?;
    let map: Vec<usize> = (k..n).collect();
    Ok(gb
        .into_iter()
        .filter(|g| g.terms().keys().all(|e| e[..k].iter().all(|&x| x == 0)))
        .map(|g| project_vars(&g, &map))
        .collect())
}

fn project_vars(p: &SparsePoly, keep: &[usize]) -> SparsePoly {
    SparsePoly::from_terms(keep.len(), p.field(), p.terms().iter().map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone())))
}

/// Generators of the saturation (I : g^infinity), via an auxiliary variable.
pub fn saturate(polys: &[SparsePoly], g: &SparsePoly) -> Result<Vec<SparsePoly>> {
    let (n, field) = check_inputs(polys)?;
    let map: Vec<usize> = (1..=n).collect();
    let mut ext: Vec<SparsePoly> = polys.iter().map(|p| p.embed(n + 1, &map)).collect();
    let u = SparsePoly::var(n + 1, 0, field);
    ext.push(&(&u * &g.embed(n + 1, &map)) - &SparsePoly::one(n + 1, field));
    eliminate(&ext, 1)
}

/// Vector-space dimension of K[x]/I for a zero-dimensional ideal given by a Gröbner
/// basis, or None when the ideal is not zero-dimensional.
pub fn quotient_dimension(gb: &[SparsePoly], order: MonomialOrder) -> Option<usize> {
    if gb.is_empty() {
        return None;
    }
    let n = gb[0].nvars();
    if is_unit(gb) {
        return Some(0);
    }
    let ring = Ring { field: gb[0].field(), order };
    let lms: Vec<Exponent> = gb.iter().map(|g| ring.from_sparse(g).terms[0].0.clone()).collect();
    // Each variable needs a pure power among the leading monomials.
    let mut bounds = vec![0u32; n];
    for (i, b) in bounds.iter_mut().enumerate() {
        *b = lms
            .iter()
            .filter(|m| m.iter().enumerate().all(|(j, &x)| j == i || x == 0) && m[i] > 0)
            .map(|m| m[i])
            .min()?;
    }
    let mut count = 0usize;
    let mut e = vec![0u32; n];
    loop {
        if !lms.iter().any(|m| divides(m, &e)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            e[i] += 1;
            if e[i] < bounds[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}
