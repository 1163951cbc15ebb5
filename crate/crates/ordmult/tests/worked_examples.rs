use ordmult::field::{Coeff, Field};
use ordmult::mult::{certified_mult, curve_order_estimate, diagram_of, mult_0, mult_star_0, projected_mult_along_z, MultValue};
use ordmult::parse::parse_poly;
use ordmult::{Error, SparsePoly};

fn polys(vars: &str, field: Field, fs: &[&str]) -> Vec<SparsePoly> {
    let v: Vec<String> = vars.split(',').map(String::from).collect();
    fs.iter().map(|f| parse_poly(f, &v, field).unwrap()).collect()
}

const F1: &str = "x^4 + x*y + y^2*(1 - y + 7*y*z)";
const F2: &str = "2*x*z^2 + y*(1 - y)*(4 + z^2)";
const F3: &str = "x^2*(5 + 8*x*z) + y*(1 - y + 3*z^3)";

fn chart_y() -> Vec<SparsePoly> {
    polys(
        "x,z,w",
        Field::Q,
        &[
            "x^4 + x*w^2 + w^2 - w + 7*z",
            "2*x*z^2*w + (w - 1)*(4*w^2 + z^2)",
            "x^2*(5*w^2 + 8*x*z) + w^3 - w^2 + 3*z^3",
        ],
    )
}

#[test]
fn point_at_infinity_on_y_axis() {
    let f = chart_y();
    let g: Vec<_> = [2, 1, 0].iter().map(|&i| diagram_of(&f[i]).unwrap()).collect();
    let (v, terms) = mult_star_0(&g).unwrap();
    assert_eq!(v, 14);
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0].nu.clone(), terms[0].min, terms[0].mixed_volume), (vec![1, 4, 4], 7, 2));
    let m = mult_0(&g).unwrap();
    assert_eq!(m.value, MultValue::Finite(14));
    assert_eq!(m.breakdown.len(), 1);
    assert_eq!(m.breakdown[0].subset, vec![0, 1, 2]);
    let c = certified_mult(&f).unwrap();
    assert_eq!((c.value, c.exact), (MultValue::Finite(14), true));
}

#[test]
fn multiplicity_along_z_axis() {
    let f = polys("x,y,z", Field::Qi, &[F1, F2]);
    let q = |n: i64| Coeff::from_int(Field::Qi, n);
    let r = projected_mult_along_z(&f, 2, &[vec![q(0), q(0), q(1)]]).unwrap();
    assert_eq!(r.result.value, MultValue::Finite(2));
    assert!(r.result.exact);
    for bad in [0, 2, -2] {
        let r = projected_mult_along_z(&f, 2, &[vec![q(0), q(0), q(bad)]]).unwrap();
        assert!(!r.result.exact, "z = {bad}");
    }
    let two_i = &Coeff::imag_unit(Field::Qi).unwrap() * &q(2);
    let r = projected_mult_along_z(&f, 2, &[vec![q(0), q(0), two_i]]).unwrap();
    assert!(!r.result.exact);
}

#[test]
fn curve_order_case_origin() {
    let f = polys("x,y,z", Field::Q, &[F1, F2, F3]);
    let r = curve_order_estimate(&f[2], &f[..2], &[vec![2]]).unwrap();
    assert_eq!((r.value, r.exact), (MultValue::Finite(4), true));
    let st = &r.breakdown[0].star_terms;
    assert_eq!(st.len(), 1);
    assert_eq!((st[0].nu.clone(), st[0].min, st[0].mixed_volume), (vec![1, 3, 1], 2, 2));
}

#[test]
fn curve_order_case_imaginary_points() {
    let f = polys("x,y,z", Field::Qi, &[F1, F2, F3]);
    for s in [2, -2] {
        let p = vec![Coeff::zero(Field::Qi), Coeff::zero(Field::Qi), &Coeff::imag_unit(Field::Qi).unwrap() * &Coeff::from_int(Field::Qi, s)];
        let g: Vec<SparsePoly> = f.iter().map(|h| h.shift(&p).unwrap()).collect();
        let r = curve_order_estimate(&g[2], &g[..2], &[vec![2]]).unwrap();
        assert_eq!((r.value, r.exact), (MultValue::Finite(0), true));
    }
}

#[test]
fn curve_order_case_real_points() {
    let f = polys("x,y,z", Field::Q, &[F1, F2, F3]);
    for s in [2, -2] {
        let p = vec![Coeff::zero(Field::Q), Coeff::zero(Field::Q), Coeff::from_int(Field::Q, s)];
        let g: Vec<SparsePoly> = f.iter().map(|h| h.shift(&p).unwrap()).collect();
        assert!(matches!(curve_order_estimate(&g[2], &g[..2], &[vec![2]]), Err(Error::Hypothesis(_))));
        // x = x' - y
        let m = vec![vec![1, -1, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let h: Vec<SparsePoly> = g.iter().map(|p| p.linear_substitute(&m).unwrap()).collect();
        let r = curve_order_estimate(&h[2], &h[..2], &[vec![2]]).unwrap();
        assert_eq!((r.value, r.exact), (MultValue::Finite(1), true), "z = {s}");
    }
}

#[test]
fn curve_order_case_infinity() {
    let f = polys(
        "x,y,w",
        Field::Q,
        &[
            "x^4 + x*y*w^2 + y^2*(w^2 - y*w + 7*y)",
            "2*x*w + y*(w - y)*(4*w^2 + 1)",
            "x^2*(5*w^2 + 8*x) + y*(w^3 - y*w^2 + 3)",
        ],
    );
    let r = curve_order_estimate(&f[2], &f[..2], &[vec![2]]).unwrap();
    assert_eq!((r.value, r.exact), (MultValue::Finite(6), true));
    let terms: Vec<(Vec<i64>, i64, u64)> = r.breakdown[0].star_terms.iter().map(|t| (t.nu.clone(), t.min, t.mixed_volume)).collect();
    assert_eq!(terms, vec![(vec![2, 2, 1], 2, 1), (vec![3, 4, 5], 4, 1)]);
}

#[test]
fn curve_order_negative_control() {
    let f = polys("x,y,z", Field::Q, &["(x - y + z)*(x + y - z)", "x - y - 2*z", "x^2 + 3*y^2 + 5*z^2"]);
    match curve_order_estimate(&f[2], &f[..2], &[vec![0, 1]]) {
        Err(Error::Hypothesis(h)) => {
            assert_eq!(h.unchecked.value, MultValue::Finite(4));
            assert!(!h.unchecked.exact);
            let w = h.unchecked.witness.clone().unwrap();
            assert_eq!(w.nu, vec![1, 1, 1]);
            assert_eq!(w.face_nu, Some(vec![1, 1, 2]));
        }
        other => panic!("expected a hypothesis failure, got {other:?}"),
    }
}
