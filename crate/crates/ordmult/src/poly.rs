//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::field::{Coeff, Field};
use crate::lattice::{self, LatticeDiagram};
use crate::{Error, Result};

pub type Exponent = Vec<u32>;

/// Polynomial in a fixed number of variables; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Exponent, Coeff>,
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn weight(e: &[u32], nu: &[i64]) -> i64 {
    e.iter().zip(nu).map(|(&a, &w)| a as i64 * w).sum()
}

impl SparsePoly {
    pub fn zero(nvars: usize, field: Field) -> Self {
        SparsePoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Self::constant(nvars, Coeff::one(field))
    }

    pub fn var(nvars: usize, i: usize, field: Field) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Coeff::one(field))
    }

    pub fn monomial(exp: Exponent, c: Coeff) -> Self {
        let mut p = SparsePoly::zero(exp.len(), c.field());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, field: Field, terms: impl IntoIterator<Item = (Exponent, Coeff)>) -> Self {
        let mut p = SparsePoly::zero(nvars, field);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Coeff {
        self.terms.get(e).cloned().unwrap_or_else(|| Coeff::zero(self.field))
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        SparsePoly::from_terms(self.nvars, self.field, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn mul_monomial(&self, m: &[u32], c: &Coeff) -> Self {
        let mut p = SparsePoly::zero(self.nvars, self.field);
        if c.is_zero() {
            return p;
        }
        for (e, v) in &self.terms {
            let ne: Exponent = e.iter().zip(m).map(|(a, b)| a + b).collect();
            p.terms.insert(ne, v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = SparsePoly::one(self.nvars, self.field);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// Terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Self {
        SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| degree(e) <= d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn ensure_field(&self, f: Field) -> Result<()> {
        if self.field != f {
            return Err(Error::Input(format!(
                "field mismatch: polynomial over {} used where {} is required",
                self.field.name(),
                f.name()
            )));
        }
        Ok(())
    }

    /// Minimum of <nu, alpha> over the support.
    pub fn weighted_order(&self, nu: &[i64]) -> Option<i64> {
        self.terms.keys().map(|e| weight(e, nu)).min()
    }

    /// Sum of the terms of minimal nu-weight.
    pub fn initial_form(&self, nu: &[i64]) -> Result<Self> {
        lattice::check_centered(nu, self.nvars)?;
        let m = self.weighted_order(nu).ok_or_else(|| Error::Domain("initial form of zero".into()))?;
        Ok(self.filter(|e| weight(e, nu) == m))
    }

    /// Terms whose exponents lie on the face In_nu(S) of a diagram S.
    pub fn relative_initial_form(&self, s: &LatticeDiagram, nu: &[i64]) -> Result<Self> {
        lattice::check_centered(nu, self.nvars)?;
        if s.dim() != self.nvars {
            return Err(Error::Input("dimension mismatch between polynomial and diagram".into()));
        }
        if s.is_empty() {
            if self.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::Domain("support not contained in the diagram's orthant hull".into()));
        }
        let (m, _) = s.min_face(nu)?;
        for e in self.terms.keys() {
            let p: Vec<i64> = e.iter().map(|&a| a as i64).collect();
            if !s.dominates(&p) {
                return Err(Error::Domain("support not contained in the diagram's orthant hull".into()));
            }
        }
        Ok(self.filter(|e| weight(e, nu) == m))
    }

    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Sets the variables outside `idx` (0-based) to zero.
    pub fn restrict_to_subspace(&self, idx: &[usize]) -> Self {
        self.filter(|e| e.iter().enumerate().all(|(i, &a)| a == 0 || idx.contains(&i)))
    }

    /// Composition: variable i is replaced by `images[i]`; all images share a ring.
    pub fn substitute(&self, images: &[SparsePoly]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = SparsePoly::zero(m, self.field);
        let mut powers: Vec<Vec<SparsePoly>> = images.iter().map(|g| vec![SparsePoly::one(m, self.field), g.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = SparsePoly::constant(m, c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers[i].len() <= a as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][a as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// f(x + point).
    pub fn shift(&self, point: &[Coeff]) -> Result<Self> {
        if point.len() != self.nvars {
            return Err(Error::Input("shift point has the wrong length".into()));
        }
        for c in point {
            if c.field() != self.field {
                return Err(Error::Input(format!("shift coordinate {c} is not in {}", self.field.name())));
            }
        }
        let images: Vec<SparsePoly> = (0..self.nvars)
            .map(|i| &SparsePoly::var(self.nvars, i, self.field) + &SparsePoly::constant(self.nvars, point[i].clone()))
            .collect();
        Ok(self.substitute(&images))
    }

    /// x_i := sum_j m[i][j] y_j for a unimodular integer matrix m.
    pub fn linear_substitute(&self, m: &[Vec<i64>]) -> Result<Self> {
        let n = self.nvars;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::Input("substitution matrix must be n x n".into()));
        }
        let d = crate::intmat::det(&m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect::<Vec<_>>());
        if d.abs() != 1 {
            return Err(Error::Input(format!("substitution matrix is not unimodular (det {d})")));
        }
        Ok(self.substitute(&self.linear_images(m)))
    }

    fn linear_images(&self, m: &[Vec<i64>]) -> Vec<SparsePoly> {
        let n = self.nvars;
        (0..n)
            .map(|i| {
                let mut g = SparsePoly::zero(n, self.field);
                for (j, &v) in m[i].iter().enumerate() {
                    g = &g + &SparsePoly::var(n, j, self.field).scale(&Coeff::from_int(self.field, v));
                }
                g
            })
            .collect()
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        let mut s = Coeff::zero(self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = &t * &point[i].pow(a);
                }
            }
            s = &s + &t;
        }
        s
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = SparsePoly::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                p.add_term(ne, c * &Coeff::from_int(self.field, e[i] as i64));
            }
        }
        p
    }

    /// Order in t of f(t^{a_1}, ..., t^{a_n}); None when the pullback vanishes.
    pub fn monomial_curve_order(&self, a: &[u64]) -> Option<u64> {
        let mut pull: BTreeMap<u64, Coeff> = BTreeMap::new();
        for (e, c) in &self.terms {
            let w: u64 = e.iter().zip(a).map(|(&x, &y)| x as u64 * y).sum();
            let v = pull.remove(&w).map(|v| &v + c).unwrap_or_else(|| c.clone());
            if !v.is_zero() {
                pull.insert(w, v);
            }
        }
        pull.keys().next().copied()
    }

    /// Adds a homogenizing variable as the last coordinate.
    pub fn homogenize(&self) -> Self {
        let d = self.total_degree().unwrap_or(0);
        SparsePoly::from_terms(
            self.nvars + 1,
            self.field,
            self.terms.iter().map(|(e, c)| {
                let mut ne = e.clone();
                ne.push(d - degree(e));
                (ne, c.clone())
            }),
        )
    }

    /// Removes variable i by setting it to one.
    pub fn dehomogenize(&self, i: usize) -> Self {
        SparsePoly::from_terms(
            self.nvars - 1,
            self.field,
            self.terms.iter().map(|(e, c)| {
                let mut ne = e.clone();
                ne.remove(i);
                (ne, c.clone())
            }),
        )
    }

    /// Reinterprets the polynomial in a larger ring, placing variable i at position map[i].
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        SparsePoly::from_terms(
            nvars,
            self.field,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; nvars];
                for (i, &a) in e.iter().enumerate() {
                    ne[map[i]] += a;
                }
                (ne, c.clone())
            }),
        )
    }

    /// Coefficients of the monomials in the first k variables, as polynomials in the rest.
    pub fn split_leading(&self, k: usize) -> BTreeMap<Exponent, SparsePoly> {
        let mut out: BTreeMap<Exponent, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let head = e[..k].to_vec();
            let tail = e[k..].to_vec();
            out.entry(head)
                .or_insert_with(|| SparsePoly::zero(self.nvars - k, self.field))
                .add_term(tail, c.clone());
        }
        out
    }

    pub fn map_coeffs(&self, field: Field, f: impl Fn(&Coeff) -> Result<Coeff>) -> Result<Self> {
        let mut p = SparsePoly::zero(self.nvars, field);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c)?);
        }
        Ok(p)
    }

    /// Embeds rational coefficients into Q(i).
    pub fn to_gaussian(&self) -> Result<Self> {
        self.map_coeffs(Field::Qi, |c| match c {
            Coeff::Q(a) => Ok(Coeff::Qi(a.clone(), num_rational::BigRational::from_integer(0.into()))),
            Coeff::Qi(..) => Ok(c.clone()),
            Coeff::Fp(..) => Err(Error::Input("cannot embed F_p into Q(i)".into())),
        })
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        self.map_coeffs(Field::Fp(p), |c| c.reduce_mod(p))
    }

    /// Terms in graded-lex order, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| degree(b.0).cmp(&degree(a.0)).then_with(|| b.0.cmp(a.0)));
        v
    }

    /// Canonical text in the input grammar, terms in graded-lex order.
    pub fn to_string_with(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], a) })
                .collect();
            let (neg, mag) = split_sign(c);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Splits a coefficient into sign and printable magnitude.
fn split_sign(c: &Coeff) -> (bool, String) {
    use num_traits::Signed;
    match c {
        Coeff::Q(a) => (a.is_negative(), Coeff::Q(a.abs()).to_string()),
        Coeff::Qi(a, b) if b.is_zero() => (a.is_negative(), Coeff::Q(a.abs()).to_string()),
        Coeff::Qi(a, b) if a.is_zero() => (b.is_negative(), Coeff::Qi(a.clone(), b.abs()).to_string()),
        _ => (false, c.to_string()),
    }
}

pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&default_vars(self.nvars)))
    }
}

fn check_ring(a: &SparsePoly, b: &SparsePoly) {
    assert_eq!(a.nvars, b.nvars, "polynomials in different rings");
    assert_eq!(a.field, b.field, "polynomials over different fields");
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, o: &SparsePoly) -> SparsePoly {
        check_ring(self, o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, o: &SparsePoly) -> SparsePoly {
        check_ring(self, o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, o: &SparsePoly) -> SparsePoly {
        check_ring(self, o);
        let mut r = SparsePoly::zero(self.nvars, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }
}
