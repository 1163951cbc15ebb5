//! Exact coefficient fields: Q, Q(i) and F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    /// Gaussian rationals Q(i), i^2 = -1.
    Qi,
    /// Prime field F_p.
    Fp(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, Error> {
        if is_prime(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::Input(format!("modulus {p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Fp(p) => *p,
            _ => 0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Q => "Q".into(),
            Field::Qi => "Qi".into(),
            Field::Fp(p) => format!("Fp {p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A field element tagged with its field. Mixing fields in one operation panics;
/// public entry points check field agreement first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Qi(BigRational, BigRational),
    Fp(u64, u64),
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut bb = (b % p) as u128;
    let pp = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % pp;
        }
        bb = bb * bb % pp;
        e >>= 1;
    }
    b = r as u64;
    b
}

fn rat_mod(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let den = q.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(((num as u128) * (mod_pow(den, p - 2, p) as u128) % (p as u128)) as u64)
}

impl Coeff {
    pub fn zero(f: Field) -> Coeff {
        Coeff::from_int(f, 0)
    }

    pub fn one(f: Field) -> Coeff {
        Coeff::from_int(f, 1)
    }

    pub fn from_int(f: Field, n: i64) -> Coeff {
        match f {
            Field::Q => Coeff::Q(rat(n)),
            Field::Qi => Coeff::Qi(rat(n), rat(0)),
            Field::Fp(p) => Coeff::Fp((n.rem_euclid(p as i64)) as u64, p),
        }
    }

    /// Embeds a rational; fails over F_p when p divides the denominator.
    pub fn from_rational(f: Field, q: &BigRational) -> Result<Coeff, Error> {
        match f {
            Field::Q => Ok(Coeff::Q(q.clone())),
            Field::Qi => Ok(Coeff::Qi(q.clone(), rat(0))),
            Field::Fp(p) => rat_mod(q, p)
                .map(|v| Coeff::Fp(v, p))
                .ok_or_else(|| Error::Input(format!("{p} divides the denominator of {q}"))),
        }
    }

    /// The imaginary unit; only exists over Q(i).
    pub fn imag_unit(f: Field) -> Result<Coeff, Error> {
        match f {
            Field::Qi => Ok(Coeff::Qi(rat(0), rat(1))),
            _ => Err(Error::Input(format!("i is not an element of {}", f.name()))),
        }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Coeff {
        Coeff::Qi(re, im)
    }

    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Q,
            Coeff::Qi(..) => Field::Qi,
            Coeff::Fp(_, p) => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(a) => a.is_zero(),
            Coeff::Qi(a, b) => a.is_zero() && b.is_zero(),
            Coeff::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(a) => a.is_one(),
            Coeff::Qi(a, b) => a.is_one() && b.is_zero(),
            Coeff::Fp(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Q(a) => Coeff::Q(a.recip()),
            Coeff::Qi(a, b) => {
                let n = a * a + b * b;
                Coeff::Qi(a / &n, -(b / &n))
            }
            Coeff::Fp(v, p) => Coeff::Fp(mod_pow(*v, p - 2, *p), *p),
        })
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut r = Coeff::one(self.field());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Returns the value as a rational if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Coeff::Q(a) => Some(a.clone()),
            Coeff::Qi(a, b) if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Reduction modulo p, for coefficients in Q (or Q(i) with zero imaginary part).
    pub fn reduce_mod(&self, p: u64) -> Result<Coeff, Error> {
        match self {
            Coeff::Fp(v, q) if *q == p => Ok(Coeff::Fp(*v, p)),
            _ => {
                let r = self
                    .as_rational()
                    .ok_or_else(|| Error::Input("coefficient is not rational".into()))?;
                Coeff::from_rational(Field::Fp(p), &r)
            }
        }
    }

    /// Square root when the element is a perfect square in its field
    /// (rationals and Gaussian rationals only).
    pub fn sqrt_exact(&self) -> Option<Coeff> {
        match self {
            Coeff::Q(a) => rat_sqrt(a).map(Coeff::Q),
            Coeff::Qi(a, b) => {
                // (x + yi)^2 = a + bi with x^2 = (|z| + a)/2.
                let m = rat_sqrt(&(a * a + b * b))?;
                let two = rat(2);
                let x2 = (&m + a) / &two;
                let x = rat_sqrt(&x2)?;
                if x.is_zero() {
                    let y = rat_sqrt(&((&m - a) / &two))?;
                    return Some(Coeff::Qi(rat(0), y));
                }
                let y = b / (&x * &two);
                Some(Coeff::Qi(x, y))
            }
            Coeff::Fp(..) => None,
        }
    }

    fn check(&self, o: &Coeff) {
        assert_eq!(self.field(), o.field(), "field mismatch in coefficient arithmetic");
    }
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

fn rat_sqrt(q: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(int_sqrt(q.numer())?, int_sqrt(q.denom())?))
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        self.check(o);
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Qi(a, b), Coeff::Qi(c, d)) => Coeff::Qi(a + c, b + d),
            (Coeff::Fp(a, p), Coeff::Fp(b, _)) => Coeff::Fp(((*a as u128 + *b as u128) % *p as u128) as u64, *p),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        self + &(-o)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Qi(a, b) => Coeff::Qi(-a, -b),
            Coeff::Fp(a, p) => Coeff::Fp(if *a == 0 { 0 } else { p - a }, *p),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        self.check(o);
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Qi(a, b), Coeff::Qi(c, d)) => Coeff::Qi(a * c - b * d, a * d + b * c),
            (Coeff::Fp(a, p), Coeff::Fp(b, _)) => Coeff::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p),
            _ => unreachable!(),
        }
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(a) => write!(f, "{}", fmt_rat(a)),
            Coeff::Qi(a, b) => {
                if b.is_zero() {
                    write!(f, "{}", fmt_rat(a))
                } else if a.is_zero() {
                    if b.is_one() {
                        write!(f, "i")
                    } else if (-b).is_one() {
                        write!(f, "-i")
                    } else {
                        write!(f, "{}*i", fmt_rat(b))
                    }
                } else {
                    let sign = if b.is_negative() { "-" } else { "+" };
                    let bb = b.abs();
                    if bb.is_one() {
                        write!(f, "({} {} i)", fmt_rat(a), sign)
                    } else {
                        write!(f, "({} {} {}*i)", fmt_rat(a), sign, fmt_rat(&bb))
                    }
                }
            }
            Coeff::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_inverse() {
        let z = Coeff::Qi(rat(3), rat(4));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
    }

    #[test]
    fn fp_inverse_and_rationals() {
        let f = Field::prime(7).unwrap();
        let h = Coeff::from_rational(f, &BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(h, Coeff::Fp(4, 7));
        assert!(Coeff::from_rational(f, &BigRational::new(1.into(), 7.into())).is_err());
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn gaussian_sqrt() {
        let z = Coeff::Qi(rat(-3), rat(4));
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
        let m = Coeff::Qi(rat(-4), rat(0));
        let r = m.sqrt_exact().unwrap();
        assert_eq!(&r * &r, m);
    }
}
