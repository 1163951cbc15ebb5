//! Common tangent lines to four spheres in affine 3-space, counted in Plücker
//! coordinates on P^5 as the Bézout number minus the contributions of the
//! imaginary circle Z at infinity and of points on it.
//!
//! Coordinates: affine (u1, u2, v1, v2, w), homogenized by z. The first sphere
//! is the unit sphere at the origin and the second is centred on the third axis.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use crate::field::{Coeff, Field};
use crate::groebner::{groebner_basis, is_unit, normal_form, quotient_dimension, MonomialOrder};
use crate::local::{ideal_within, length_at_point, saturation_basis, stable_length, StableLength};
use crate::parse::parse_poly;
use crate::poly::SparsePoly;
use crate::scene::{ExternalFactors, LocalFactor, Scene};
use crate::{Error, Result};

pub const AFFINE_VARS: [&str; 5] = ["u1", "u2", "v1", "v2", "w"];
/// Chart w != 0: (u1, u2, v1, v2, z) divided by w.
pub const CHART_W_VARS: [&str; 5] = ["u1", "u2", "v1", "v2", "z"];
/// Chart u2 != 0: (u1, v1, v2, w, z) divided by u2.
pub const CHART_U2_VARS: [&str; 5] = ["u1", "v1", "v2", "w", "z"];

const PARAM_NAMES: [&str; 10] = ["b3", "c1", "c2", "c3", "d1", "d2", "d3", "r2", "r3", "r4"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereParams {
    #[serde(serialize_with = "ser_map")]
    values: BTreeMap<String, BigRational>,
}

fn ser_map<S: serde::Serializer>(m: &BTreeMap<String, BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &v.to_string())?;
    }
    map.end()
}

impl SphereParams {
    /// Parameters b3, c1..c3, d1..d3, r2..r4 as rational strings.
    pub fn from_strings(m: &BTreeMap<String, String>) -> Result<SphereParams> {
        let mut values = BTreeMap::new();
        for k in m.keys() {
            if !PARAM_NAMES.contains(&k.as_str()) {
                return Err(Error::Input(format!("unknown sphere parameter '{k}'")));
            }
        }
        for k in PARAM_NAMES {
            let s = m.get(k).ok_or_else(|| Error::Input(format!("missing sphere parameter '{k}'")))?;
            let c = crate::system::parse_coeff(s, Field::Q).map_err(|e| Error::Input(format!("sphere parameter '{k}': {e}")))?;
            values.insert(k.to_string(), c.as_rational().expect("rational"));
        }
        Ok(SphereParams { values })
    }

    /// The bundled instantiation.
    pub fn bundled() -> SphereParams {
        let m: BTreeMap<String, String> = [
            ("b3", "1"),
            ("c1", "1"),
            ("c2", "2"),
            ("c3", "2"),
            ("d1", "3"),
            ("d2", "-1"),
            ("d3", "2"),
            ("r2", "2"),
            ("r3", "3"),
            ("r4", "2"),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        Self::from_strings(&m).unwrap()
    }

    pub fn get(&self, k: &str) -> &BigRational {
        &self.values[k]
    }

    fn s(&self, k: &str) -> String {
        format!("({})", self.values[k])
    }

    pub fn as_strings(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }
}

fn vars(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn tangency(centre: [&str; 3], r: &str) -> String {
    let [a1, a2, a3] = centre;
    format!(
        "(w - ({a2}*v1 - {a1}*v2))^2 + (u1 + {a3}*v1 - {a1})^2 + (u2 + {a3}*v2 - {a2})^2 - {r}^2*(v1^2 + v2^2 + 1)"
    )
}

/// f0..f4 in the affine coordinates (u1, u2, v1, v2, w).
pub fn affine_system(p: &SphereParams) -> Vec<SparsePoly> {
    let v = vars(&AFFINE_VARS);
    let s = |k: &str| p.s(k);
    let exprs = [
        "w - u2*v1 + u1*v2".to_string(),
        tangency(["0", "0", "0"], "1"),
        tangency(["0", "0", &s("b3")], &s("r2")),
        tangency([&s("c1"), &s("c2"), &s("c3")], &s("r3")),
        tangency([&s("d1"), &s("d2"), &s("d3")], &s("r4")),
    ];
    exprs.iter().map(|e| parse_poly(e, &v, Field::Q).expect("sphere system parses")).collect()
}

/// Homogenizes each polynomial to degree 2 (every f_i is a quadric) with z last.
fn homogenized(p: &SphereParams) -> Vec<SparsePoly> {
    affine_system(p).iter().map(|f| f.homogenize()).collect()
}

/// The system on the chart w != 0, in the variables CHART_W_VARS.
pub fn chart_w(p: &SphereParams) -> Vec<SparsePoly> {
    homogenized(p).iter().map(|f| f.dehomogenize(4)).collect()
}

/// The system on the chart u2 != 0, in the variables CHART_U2_VARS.
pub fn chart_u2(p: &SphereParams) -> Vec<SparsePoly> {
    homogenized(p).iter().map(|f| f.dehomogenize(1)).collect()
}

fn q_poly(e: &str, v: &[&str]) -> SparsePoly {
    parse_poly(e, &vars(v), Field::Q).expect("fixed expression parses")
}

/// Ideal of Z on the chart w != 0.
pub fn circle_ideal_w() -> Vec<SparsePoly> {
    ["z", "v1", "v2", "1 + u1^2 + u2^2"].iter().map(|e| q_poly(e, &CHART_W_VARS)).collect()
}

/// Ideal of Z ∩ {u2 = 0} on the chart w != 0.
pub fn circle_u2_zero_ideal() -> Vec<SparsePoly> {
    ["z", "v1", "v2", "u2", "1 + u1^2"].iter().map(|e| q_poly(e, &CHART_W_VARS)).collect()
}

/// Ideal of Z ∩ {w = 0} on the chart u2 != 0.
pub fn circle_w_zero_ideal() -> Vec<SparsePoly> {
    ["z", "v1", "v2", "w", "1 + u1^2"].iter().map(|e| q_poly(e, &CHART_U2_VARS)).collect()
}

/// Ideal of Z on the chart u2 != 0.
pub fn circle_ideal_u2() -> Vec<SparsePoly> {
    ["z", "v1", "v2", "1 + u1^2 + w^2"].iter().map(|e| q_poly(e, &CHART_U2_VARS)).collect()
}

/// h_{k,1} = (k1 u1 + k2 u2)^2 + (k3 u2 + k1)^2 + (k3 u1 - k2)^2 on the chart w != 0, for k = c or d.
pub fn h1(p: &SphereParams, k: char) -> SparsePoly {
    let (a, b, c) = (p.s(&format!("{k}1")), p.s(&format!("{k}2")), p.s(&format!("{k}3")));
    q_poly(&format!("({a}*u1 + {b}*u2)^2 + ({c}*u2 + {a})^2 + ({c}*u1 - {b})^2"), &CHART_W_VARS)
}

#[derive(Clone, Debug, Serialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn gate(name: &str, passed: bool, detail: impl Into<String>) -> Gate {
    Gate { name: name.into(), passed, detail: detail.into() }
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleFactor {
    /// From (f2, f3) ⊆ (f0, f1, v0, v1^2) locally along Z.
    pub lower: u64,
    /// Length of (f0..f3, u1 - p1) at a point of Z; bounds the multiplicity along Z from above.
    pub upper: u64,
    pub slice_point: Vec<String>,
    pub slice: StableLength,
    pub value: u64,
    pub degree: u64,
    pub total: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSum {
    pub name: String,
    pub value: u64,
    /// How the value was obtained.
    pub method: String,
    pub certificate: Option<StableLength>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub parameters: SphereParams,
    pub bezout: u64,
    pub circle: CircleFactor,
    pub points: Vec<PointSum>,
    pub isolated: u64,
    /// dim K[u1,u2,v1,v2,w]/(f0..f4), computed directly.
    pub affine_count: u64,
    /// h_{3,1} restricted to Z is minus the square of c1 u2 - c2 u1 - c3.
    pub tangency_square: bool,
    /// Number of points of Z ∩ V(h_{3,1}) on the chart w != 0, without multiplicity.
    pub tangency_points: u64,
    /// Exact order of f4 on C at each point of Z with w = 0 (u1 = i, then u1 = -i).
    pub w_zero_points: Vec<u64>,
    pub gates: Vec<Gate>,
    pub passed: bool,
}

impl SphereReport {
    pub fn point_sum(&self, name: &str) -> Option<u64> {
        self.points.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

pub const POINTS_U2_NONZERO: &str = "points-u2-nonzero";
pub const POINTS_U2_ZERO: &str = "points-u2-zero";
pub const POINTS_W_ZERO: &str = "points-w-zero";
pub const CIRCLE: &str = "circle";

const MAX_POWER: u32 = 12;

fn reduces_to_zero(fs: &[SparsePoly], ideal: &[SparsePoly]) -> Result<bool> {
    ideal_within(fs, ideal)
}

fn unit_ideal(gens: &[SparsePoly]) -> Result<bool> {
    Ok(is_unit(&groebner_basis(gens, MonomialOrder::GrevLex)?))
}

fn leading_forms(p: &SphereParams) -> Vec<SparsePoly> {
    affine_system(p).iter().map(|f| f.filter(|e| e.iter().sum::<u32>() == 2)).collect()
}

/// 2 x 2 minors of the Jacobian of (f, g).
fn minors(f: &SparsePoly, g: &SparsePoly) -> Vec<SparsePoly> {
    let n = f.nvars();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(&(&f.partial(i) * &g.partial(j)) - &(&f.partial(j) * &g.partial(i)));
        }
    }
    out
}

fn smooth_along(f: &SparsePoly, g: &SparsePoly, circle: &[SparsePoly]) -> Result<bool> {
    let mut gens: Vec<SparsePoly> = circle.to_vec();
    gens.extend(minors(f, g));
    unit_ideal(&gens)
}

/// Residual curve (f0..f3) : g^infinity for two generic g in the ideal of Z; both must agree.
fn residual_curve(fs: &[SparsePoly], circle: &[SparsePoly]) -> Result<(Vec<SparsePoly>, bool)> {
    let combo = |w: [i64; 4]| {
        circle.iter().zip(w).fold(SparsePoly::zero(fs[0].nvars(), Field::Q), |acc, (q, c)| &acc + &q.scale(&Coeff::from_int(Field::Q, c)))
    };
    let a = saturation_basis(fs, &combo([1, 2, -3, 5]))?;
    let b = saturation_basis(fs, &combo([3, -1, 4, 2]))?;
    let same = a == b;
    Ok((a, same))
}

fn with(gens: &[SparsePoly], f: &SparsePoly) -> Vec<SparsePoly> {
    let mut v = gens.to_vec();
    v.push(f.clone());
    v
}

/// Runs every computation and check of the count for one parameter instantiation.
pub fn run(p: &SphereParams) -> Result<SphereReport> {
    let mut gates = Vec::new();
    gates.push(gate("b3 nonzero", p.get("b3") != &BigRational::from_integer(0.into()), format!("b3 = {}", p.get("b3"))));

    // At infinity the leading forms only vanish where v1 = v2 = 0.
    let ld = leading_forms(p);
    for (k, name) in [(2usize, "v1"), (3, "v2")] {
        let v = SparsePoly::var(5, k, Field::Q);
        let unit = is_unit(&saturation_basis(&ld, &v)?);
        gates.push(gate(
            &format!("no common zero at infinity with {name} != 0"),
            unit,
            format!("saturation of the leading forms by {name} is {}", if unit { "the unit ideal" } else { "proper" }),
        ));
    }

    let fw = chart_w(p);
    let fu = chart_u2(p);
    let zw = circle_ideal_w();
    let zu = circle_ideal_u2();
    gates.push(gate("Z lies on every F_i", reduces_to_zero(&fw, &zw)? && reduces_to_zero(&fu, &zu)?, "f_i reduce to 0 modulo the ideal of Z on both charts"));
    gates.push(gate(
        "S = V(f0, f1) is smooth along Z",
        smooth_along(&fw[0], &fw[1], &zw)? && smooth_along(&fu[0], &fu[1], &zu)?,
        "the 2 x 2 minors of the Jacobian of (f0, f1) have no common zero on Z",
    ));

    // Multiplicity of (f0..f3) along Z on the chart w != 0.
    let v0 = q_poly("u1*v1 + u2*v2", &CHART_W_VARS);
    let v1 = q_poly("v1", &CHART_W_VARS);
    let unit_s = q_poly("u2*(1 - v1^2 - v2^2)", &CHART_W_VARS);
    let regular = saturation_basis(&[fw[0].clone(), fw[1].clone(), v0.clone(), v1.clone()], &unit_s)?;
    let params_generate = zw.iter().all(|q| normal_form(q, &regular, MonomialOrder::GrevLex).is_zero())
        && reduces_to_zero(&[fw[0].clone(), fw[1].clone(), v0.clone(), v1.clone()], &zw)?;
    let doubled = saturation_basis(&[fw[0].clone(), fw[1].clone(), v0.clone(), &v1 * &v1], &unit_s)?;
    let contained = fw[2..4].iter().all(|f| normal_form(f, &doubled, MonomialOrder::GrevLex).is_zero());
    let lower = if params_generate && contained { 2 } else { 1 };
    gates.push(gate(
        "f2, f3 lie in (f0, f1, v0, v1^2) along Z",
        params_generate && contained,
        "after saturating by u2 (1 - v1^2 - v2^2); (f0, f1, v0, v1) generate the ideal of Z there",
    ));

    let qi = |s: &str| crate::system::parse_coeff(s, Field::Qi);
    let slice_point_s = ["5/4*i", "3/4", "0", "0", "0"];
    let slice_point: Vec<Coeff> = slice_point_s.iter().map(|s| qi(s)).collect::<Result<_>>()?;
    let mut slice_ideal: Vec<SparsePoly> = fw[..4].iter().map(|f| f.to_gaussian()).collect::<Result<_>>()?;
    let u1 = SparsePoly::var(5, 0, Field::Qi);
    slice_ideal.push(&u1 - &SparsePoly::constant(5, slice_point[0].clone()));
    let slice = length_at_point(&slice_ideal, &slice_point, MAX_POWER)?;
    let upper = slice.length;
    // The slice u1 = p1 meets Z transversally at the point: the tangent (-u2, u1) has u1-part -3/4.
    gates.push(gate("multiplicity bounds along Z agree", lower == upper, format!("lower {lower}, upper {upper}")));
    let degree: u64 = 2 * 2;
    let circle = CircleFactor {
        lower,
        upper,
        slice_point: slice_point_s.iter().map(|s| s.to_string()).collect(),
        slice,
        value: upper,
        degree,
        total: upper * degree,
    };

    // Points of Z on the residual curve.
    let (cw, same_w) = residual_curve(&fw[..4], &zw)?;
    let (cu, same_u) = residual_curve(&fu[..4], &zu)?;
    gates.push(gate("residual curve does not depend on the saturating element", same_w && same_u, "two generic elements of the ideal of Z give the same reduced basis on both charts"));
    let jw = with(&cw, &fw[4]);
    let all_w = stable_length(&jw, &zw, MAX_POWER)?;
    let zero_u2 = stable_length(&jw, &circle_u2_zero_ideal(), MAX_POWER)?;
    let zero_w = stable_length(&with(&cu, &fu[4]), &circle_w_zero_ideal(), MAX_POWER)?;
    let points = vec![
        PointSum {
            name: POINTS_U2_NONZERO.into(),
            value: all_w.length - zero_u2.length,
            method: format!("sum over Z on the chart w != 0 ({}) minus the points with u2 = 0", all_w.length),
            certificate: Some(all_w),
        },
        PointSum { name: POINTS_U2_ZERO.into(), value: zero_u2.length, method: "length of C + f4 at Z ∩ {u2 = 0}".into(), certificate: Some(zero_u2) },
        PointSum { name: POINTS_W_ZERO.into(), value: zero_w.length, method: "length of C + f4 at Z ∩ {w = 0}, chart u2 != 0".into(), certificate: Some(zero_w) },
    ];

    let cu_qi: Vec<SparsePoly> = with(&cu, &fu[4]).iter().map(|f| f.to_gaussian()).collect::<Result<_>>()?;
    let mut w_zero_points = Vec::new();
    for sign in [1, -1] {
        let i = &Coeff::imag_unit(Field::Qi)? * &Coeff::from_int(Field::Qi, sign);
        let mut pt = vec![Coeff::zero(Field::Qi); 5];
        pt[0] = i;
        w_zero_points.push(length_at_point(&cu_qi, &pt, MAX_POWER)?.length);
    }
    gates.push(gate(
        "points with w = 0 add up",
        w_zero_points.iter().sum::<u64>() == points[2].value,
        format!("{w_zero_points:?} at u1 = i, -i"),
    ));

    let h31 = h1(p, 'c');
    let h41 = h1(p, 'd');
    gates.push(gate("h_{4,1} has no zero on Z ∩ V(h_{3,1})", unit_ideal(&with(&with(&zw, &h31), &h41))?, "checked on the chart w != 0"));
    gates.push(gate("h_{3,1} has no zero on Z ∩ {u2 = 0}", unit_ideal(&with(&circle_u2_zero_ideal(), &h31))?, "checked on the chart w != 0"));
    let line = q_poly(&format!("{}*u2 - {}*u1 - {}", p.s("c1"), p.s("c2"), p.s("c3")), &CHART_W_VARS);
    let gz = groebner_basis(&zw, MonomialOrder::GrevLex)?;
    let tangency_square = normal_form(&(&h31 + &(&line * &line)), &gz, MonomialOrder::GrevLex).is_zero();
    let tangency_points = quotient_dimension(&groebner_basis(&with(&zw, &line), MonomialOrder::GrevLex)?, MonomialOrder::GrevLex)
        .ok_or_else(|| Error::Internal("Z ∩ V(line) is not finite".into()))? as u64;

    let affine_gb = groebner_basis(&affine_system(p), MonomialOrder::GrevLex)?;
    let affine = quotient_dimension(&affine_gb, MonomialOrder::GrevLex);
    gates.push(gate("affine solutions are isolated", affine.is_some(), "f0..f4 define a zero-dimensional affine scheme"));
    let affine_count = affine.unwrap_or(0) as u64;

    let bezout: u64 = 32;
    let removed = circle.total + points.iter().map(|p| p.value).sum::<u64>();
    let isolated = bezout
        .checked_sub(removed)
        .ok_or_else(|| Error::Domain(format!("excess contributions {removed} exceed the Bézout number")))?;
    gates.push(gate("count agrees with the affine quotient dimension", isolated == affine_count, format!("{isolated} vs {affine_count}")));
    let passed = gates.iter().all(|g| g.passed);
    Ok(SphereReport { parameters: p.clone(), bezout, circle, points, isolated, affine_count, tangency_square, tangency_points, w_zero_points, gates, passed })
}

/// Expansions of f2, f3, f4 on S' = V(f0, f1) near the point of Z with w = 0 and
/// u1 = sign * i (chart u2 != 0), in the local coordinates (v2, w, z'') with
/// z'' = z + u1 v2 w, truncated above total degree `degree`.
pub fn w_zero_expansions(p: &SphereParams, sign: i64, degree: u32) -> Result<Vec<SparsePoly>> {
    let f = Field::Qi;
    let fs: Vec<SparsePoly> = chart_u2(p).iter().map(|g| g.to_gaussian()).collect::<Result<_>>()?;
    let x = |k| SparsePoly::var(3, k, f);
    let (v2, w, zz) = (x(0), x(1), x(2));
    let i = SparsePoly::constant(3, &Coeff::imag_unit(f)? * &Coeff::from_int(f, sign));
    let one = SparsePoly::one(3, f);
    let images = |u: &SparsePoly| {
        let z = &zz - &(&(u * &v2) * &w).truncate(degree);
        let v1 = &(&z * &w) + &(u * &v2);
        (z.truncate(degree), v1.truncate(degree))
    };
    // u1 = sign * i * sqrt(1 + w^2 - v1^2 - v2^2 - z^2); each pass fixes one more degree.
    let mut u = i.clone();
    for _ in 0..=degree {
        let (z, v1) = images(&u);
        let e = (&(&(&w * &w) - &(&v1 * &v1)) - &(&(&v2 * &v2) + &(&z * &z))).truncate(degree);
        u = (&i * &sqrt_one_plus(&e, degree, &one)).truncate(degree);
    }
    let (z, v1) = images(&u);
    let subst = [u, v1, v2.clone(), w.clone(), z];
    let local: Vec<SparsePoly> = fs.iter().map(|g| g.substitute(&subst).truncate(degree)).collect();
    if !local[0].is_zero() || !local[1].is_zero() {
        return Err(Error::Internal("series solution does not satisfy f0 = f1 = 0".into()));
    }
    Ok(local[2..].to_vec())
}

/// Truncated binomial series of sqrt(1 + e) for e without constant term.
fn sqrt_one_plus(e: &SparsePoly, degree: u32, one: &SparsePoly) -> SparsePoly {
    let f = e.field();
    let mut out = one.clone();
    let mut power = one.clone();
    // binom(1/2, k)
    let mut c = BigRational::from_integer(1.into());
    let half = BigRational::new(1.into(), 2.into());
    for k in 1..=degree {
        c = &c * &(&half - BigRational::from_integer((k - 1).into())) / BigRational::from_integer(k.into());
        power = (&power * e).truncate(degree);
        if power.is_zero() {
            break;
        }
        out = &out + &power.scale(&Coeff::from_rational(f, &c).expect("rational"));
    }
    out
}

/// Evaluates "sphere" scene directives with the parameters stored in the scene.
#[derive(Default)]
pub struct SpherePipeline {
    cache: std::cell::RefCell<Option<SphereReport>>,
}

impl SpherePipeline {
    pub fn report(&self, scene: &Scene) -> Result<SphereReport> {
        if let Some(r) = self.cache.borrow().as_ref() {
            return Ok(r.clone());
        }
        let params = match &scene.sphere_parameters {
            Some(m) => SphereParams::from_strings(m)?,
            None => return Err(Error::Input("scene uses sphere directives but has no sphere_parameters".into())),
        };
        let r = run(&params)?;
        *self.cache.borrow_mut() = Some(r.clone());
        Ok(r)
    }
}

impl ExternalFactors for SpherePipeline {
    fn sphere(&self, scene: &Scene, part: &str) -> Result<LocalFactor> {
        let r = self.report(scene)?;
        let (value, source) = match part {
            CIRCLE => (r.circle.value, format!("multiplicity along Z (bounds {} and {})", r.circle.lower, r.circle.upper)),
            _ => match r.points.iter().find(|p| p.name == part) {
                Some(pt) => (pt.value, pt.method.clone()),
                None => return Err(Error::Input(format!("unknown sphere part '{part}' (expected {CIRCLE}, {POINTS_U2_NONZERO}, {POINTS_U2_ZERO} or {POINTS_W_ZERO})"))),
            },
        };
        Ok(LocalFactor { value, exact: r.passed, source })
    }
}
