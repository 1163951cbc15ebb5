//! Randomized suites, each checked against an oracle written here.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use ordmult::field::Field;
use ordmult::mixed_volume::{face_mixed_volume, face_mixed_volume_in_basis, lattice_basis_of_perp, mixed_volume};
use ordmult::monomial::monomial_ideal_chain;
use ordmult::mult::{certified_mult, MultValue};
use ordmult::nondegeneracy::has_torus_root;
use ordmult::parse::parse_poly;
use ordmult::SparsePoly;

type Point = Vec<i64>;

/// Runs `cases` accepted cases with a fixed seed; returns the number run.
pub fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, max_global_rejects: 20 * cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map(|_| cases).map_err(|e| e.to_string())
}

// ---------- mixed volumes ----------

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Twice the area of the convex hull (monotone chain).
fn twice_area(pts: &[Point]) -> i64 {
    let mut p: Vec<Point> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let mut hull: Vec<Point> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for q in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q.clone());
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n).map(|i| hull[i][0] * hull[(i + 1) % n][1] - hull[(i + 1) % n][0] * hull[i][1]).sum::<i64>().abs()
}

fn msum(a: &[Point], b: &[Point]) -> Vec<Point> {
    let mut out = Vec::new();
    for p in a {
        for q in b {
            out.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

fn polytope(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(0i64..=4, n), 1..=5)
}

fn tuple_of_polytopes() -> impl Strategy<Value = (Vec<Vec<Point>>, Vec<Point>, Vec<i64>, u32)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            prop::collection::vec(polytope(n), n),
            polytope(n),
            prop::collection::vec(-3i64..=3, n),
            any::<u32>(),
        )
    })
}

fn mv(ps: &[Vec<Point>]) -> i128 {
    mixed_volume(ps).expect("mixed volume")
}

fn permanent3(m: &[[i64; 3]; 3]) -> i64 {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().map(|s| m[0][s[0]] * m[1][s[1]] * m[2][s[2]]).sum()
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn bx(s: [i64; 3]) -> Vec<Point> {
    let mut v = Vec::new();
    for a in [0, s[0]] {
        for b in [0, s[1]] {
            for c in [0, s[2]] {
                v.push(vec![a, b, c]);
            }
        }
    }
    v
}

/// Symmetry, translation invariance and multiadditivity on random tuples, and the
/// closed forms: area formula in the plane, permanents for boxes, determinants for segments.
pub fn mixed_volume_suite(cases: u32) -> Result<u32, String> {
    run(cases, tuple_of_polytopes(), |(ps, extra, shift, seed)| {
        let n = ps.len();
        let base = mv(&ps);
        prop_assert!(base >= 0);
        let mut perm: Vec<Vec<Point>> = ps.clone();
        perm.rotate_left(seed as usize % n);
        if seed % 2 == 1 {
            perm.swap(0, n - 1);
        }
        prop_assert_eq!(mv(&perm), base, "symmetry");
        let mut moved = ps.clone();
        let k = seed as usize % n;
        moved[k] = ps[k].iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        prop_assert_eq!(mv(&moved), base, "translation");
        let mut split = ps.clone();
        split[0] = msum(&ps[0], &extra);
        let mut other = ps.clone();
        other[0] = extra.clone();
        prop_assert_eq!(mv(&split), base + mv(&other), "multiadditivity");
        if n == 2 {
            let a = twice_area(&msum(&ps[0], &ps[1])) - twice_area(&ps[0]) - twice_area(&ps[1]);
            prop_assert_eq!(a % 2, 0);
            prop_assert_eq!(base, (a / 2) as i128, "planar area formula");
        } else {
            let sides: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| ps[i][0][j] + 1));
            let boxes: Vec<Vec<Point>> = sides.iter().map(|s| bx(*s)).collect();
            prop_assert_eq!(mv(&boxes), permanent3(&sides) as i128, "boxes");
            let dirs: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| ps[i].last().unwrap()[j] - shift[j]));
            let segs: Vec<Vec<Point>> = dirs.iter().map(|d| vec![vec![0, 0, 0], d.to_vec()]).collect();
            prop_assert_eq!(mv(&segs), det3(&dirs).abs() as i128, "segments");
        }
        Ok(())
    })
}

// ---------- face mixed volumes under a change of lattice basis ----------

fn unimodular(m: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % m, j % m);
        if i == j {
            u.swap(i, (i + 1) % m);
            continue;
        }
        for k in 0..m {
            u[i][k] += c * u[j][k];
        }
    }
    u
}

fn face_instance() -> impl Strategy<Value = (Vec<i64>, Vec<(Point, Vec<Vec<i64>>)>, Vec<(usize, usize, i64)>)> {
    (3usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=4, n),
            prop::collection::vec((prop::collection::vec(-2i64..=4, n), prop::collection::vec(prop::collection::vec(-2i64..=2, n - 1), 1..=4)), n - 1),
            prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..=6),
        )
    })
}

/// face_mixed_volume does not depend on the lattice basis of nu-perp.
pub fn face_rebase_suite(cases: u32) -> Result<u32, String> {
    run(cases, face_instance(), |(nu, faces, ops)| {
        let n = nu.len();
        let basis = lattice_basis_of_perp(&nu).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(basis.len(), n - 1);
        for b in &basis {
            prop_assert_eq!(b.iter().zip(&nu).map(|(a, c)| a * c).sum::<i64>(), 0);
        }
        let pts: Vec<Vec<Point>> = faces
            .iter()
            .map(|(off, cs)| cs.iter().map(|c| (0..n).map(|k| off[k] + (0..n - 1).map(|j| c[j] * basis[j][k]).sum::<i64>()).collect()).collect())
            .collect();
        let a = face_mixed_volume(&nu, &pts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let u = unimodular(n - 1, &ops);
        let rebased: Vec<Vec<i64>> = u.iter().map(|row| (0..n).map(|k| (0..n - 1).map(|j| row[j] * basis[j][k]).sum()).collect()).collect();
        let b = face_mixed_volume_in_basis(&nu, &rebased, &pts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(a, b);
        // The same faces written in lattice coordinates directly.
        let coords: Vec<Vec<Point>> = faces.iter().map(|(_, cs)| cs.clone()).collect();
        prop_assert_eq!(a, mv(&coords));
        Ok(())
    })
}

// ---------- mult_0 against a power-series corank ----------

const PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

fn rank_mod(rows: &[Vec<i64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow(m[rank][c], p - 2);
        for x in m[rank].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in c..cols {
                    let t = (f as u128 * m[rank][k] as u128 % p as u128) as u64;
                    m[r][k] = (m[r][k] + p - t) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// dim K[x,y] / ((f, g) + (x,y)^N), by linear algebra on truncated multiples.
fn truncated_corank(fs: &[Vec<((u32, u32), i64)>], n: u32) -> u64 {
    let monos: Vec<(u32, u32)> = (0..n).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
    let col = |e: (u32, u32)| monos.iter().position(|&m| m == e);
    let mut rows = Vec::new();
    for f in fs {
        for &(a, b) in &monos {
            let mut row = vec![0i64; monos.len()];
            let mut any = false;
            for &((i, j), c) in f {
                if let Some(k) = col((i + a, j + b)) {
                    row[k] += c;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    let r = PRIMES.iter().map(|&p| rank_mod(&rows, p)).max().unwrap_or(0);
    (monos.len() - r) as u64
}

/// Local multiplicity at the origin once the truncated coranks stabilize.
fn power_series_multiplicity(fs: &[Vec<((u32, u32), i64)>], start: u32, limit: u32) -> Option<u64> {
    let mut prev = truncated_corank(fs, start.max(1));
    for n in start.max(1) + 1..=limit {
        let d = truncated_corank(fs, n);
        if d == prev {
            return Some(d);
        }
        prev = d;
    }
    None
}

fn plane_poly() -> impl Strategy<Value = Vec<((u32, u32), i64)>> {
    let mono = (0u32..=4, 0u32..=4).prop_filter("degree 1..=4", |(i, j)| (1..=4).contains(&(i + j)));
    let coeff = prop_oneof![-7i64..=-1, 1i64..=7];
    prop::collection::vec((mono, coeff), 1..=4)
}

fn to_poly(t: &[((u32, u32), i64)]) -> SparsePoly {
    let vars = vec!["x".to_string(), "y".to_string()];
    let s: Vec<String> = t.iter().map(|((i, j), c)| format!("({c})*x^{i}*y^{j}")).collect();
    parse_poly(&s.join(" + "), &vars, Field::Q).expect("generated polynomial parses")
}

/// Certified mult_0 of random plane systems equals the stabilized corank.
pub fn mult0_suite(cases: u32) -> Result<u32, String> {
    run(cases, (plane_poly(), plane_poly()), |(f, g)| {
        let ps = [to_poly(&f), to_poly(&g)];
        prop_assume!(!ps[0].is_zero() && !ps[1].is_zero());
        let r = certified_mult(&ps).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let v = match r.value {
            MultValue::Finite(v) if r.exact => v,
            _ => return Err(TestCaseError::reject("not certified")),
        };
        let m = power_series_multiplicity(&[f.clone(), g.clone()], v as u32 + 1, v as u32 + 12);
        prop_assert_eq!(m, Some(v), "f = {:?}, g = {:?}", f, g);
        Ok(())
    })
}

// ---------- monomial ideal chains against standard-monomial enumeration ----------

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Membership in (f2) + (intersection of the components (x_k^{a_k}) of (f1) not hit by f2).
fn in_chain_ideal(f1: &[u32], f2: &[u32], m: &[u32]) -> bool {
    if divides(f2, m) {
        return true;
    }
    let kept: Vec<usize> = (0..f1.len()).filter(|&k| f1[k] > 0 && f2[k] == 0).collect();
    kept.is_empty() || kept.iter().all(|&k| m[k] >= f1[k])
}

const BIG: u32 = 40;

fn local_count(f1: &[u32], f2: &[u32], prime: &BTreeSet<usize>, bound: u32) -> u64 {
    let n = f1.len();
    let vars: Vec<usize> = prime.iter().copied().collect();
    let mut count = 0;
    let mut e = vec![0u32; vars.len()];
    loop {
        let mut m = vec![BIG; n];
        for (i, &k) in vars.iter().enumerate() {
            m[k] = e[i];
        }
        if !in_chain_ideal(f1, f2, &m) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == vars.len() {
                return count;
            }
            e[i] += 1;
            if e[i] < bound {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

fn contains_ideal(f1: &[u32], f2: &[u32], prime: &BTreeSet<usize>) -> bool {
    let n = f1.len();
    let m: Vec<u32> = (0..n).map(|k| if prime.contains(&k) { 0 } else { BIG }).collect();
    !in_chain_ideal(f1, f2, &m)
}

fn monomial_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (2usize..=3).prop_flat_map(|n| {
        let m = prop::collection::vec(0u32..=3, n).prop_filter("nonconstant", |v| v.iter().any(|&x| x > 0));
        (m.clone(), m)
    })
}

/// Minimal primes and local lengths of the chain ideal, by enumeration.
pub fn monomial_chain_suite(cases: u32) -> Result<u32, String> {
    run(cases, monomial_pair(), |(f1, f2)| {
        let n = f1.len();
        let r = monomial_ideal_chain(&[f1.clone(), f2.clone()]).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let subsets: Vec<BTreeSet<usize>> = (1u32..(1 << n)).map(|mask| (0..n).filter(|k| mask & (1 << k) != 0).collect()).collect();
        let over: Vec<&BTreeSet<usize>> = subsets.iter().filter(|s| contains_ideal(&f1, &f2, s)).collect();
        let minimal: BTreeSet<Vec<usize>> =
            over.iter().filter(|s| !over.iter().any(|t| t.len() < s.len() && t.is_subset(s))).map(|s| s.iter().copied().collect()).collect();
        let reported: BTreeSet<Vec<usize>> = r.lengths.iter().map(|(p, _)| p.clone()).collect();
        prop_assert_eq!(&reported, &minimal, "minimal primes of the chain ideal for {:?}, {:?}", f1, f2);
        for (p, l) in &r.lengths {
            let s: BTreeSet<usize> = p.iter().copied().collect();
            let a = local_count(&f1, &f2, &s, 8);
            prop_assert_eq!(a, local_count(&f1, &f2, &s, 12), "finite length at a minimal prime");
            prop_assert_eq!(*l, a, "length at {:?} for {:?}, {:?}", p, f1, f2);
        }
        let all: Vec<usize> = (0..n).collect();
        if !minimal.contains(&all) {
            prop_assert_eq!(r.length_at(&all), 0);
        }
        Ok(())
    })
}

// ---------- torus roots against a scan of (F_p^*)^n ----------

const SCAN_PRIME: u64 = 7;

fn fp_poly(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=3, nvars), 1u64..SCAN_PRIME), 1..=3)
}

fn fp_system() -> impl Strategy<Value = Vec<Vec<(Vec<u32>, u64)>>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(fp_poly(n), n..=n + 1))
}

fn fp_to_poly(t: &[(Vec<u32>, u64)], field: Field) -> SparsePoly {
    let n = t[0].0.len();
    let vars: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let s: Vec<String> = t
        .iter()
        .map(|(e, c)| {
            let m: Vec<String> = e.iter().enumerate().map(|(k, a)| format!("x{}^{a}", k + 1)).collect();
            format!("{c}*{}", m.join("*"))
        })
        .collect();
    parse_poly(&s.join(" + "), &vars, field).expect("generated polynomial parses")
}

fn scan(polys: &[Vec<(Vec<u32>, u64)>], n: usize) -> bool {
    let eval = |t: &Vec<(Vec<u32>, u64)>, x: &[u64]| {
        t.iter().fold(0u64, |acc, (e, c)| {
            let v = e.iter().zip(x).fold(*c, |a, (&k, &xi)| a * xi.pow(k) % SCAN_PRIME);
            (acc + v) % SCAN_PRIME
        })
    };
    let mut x = vec![1u64; n];
    loop {
        if polys.iter().all(|t| eval(t, &x) == 0) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            x[i] += 1;
            if x[i] < SCAN_PRIME {
                break;
            }
            x[i] = 1;
            i += 1;
        }
    }
}

/// A root found by the scan forces a torus root; a reported witness is a root.
pub fn torus_root_suite(cases: u32) -> Result<u32, String> {
    let field = Field::prime(SCAN_PRIME).expect("prime");
    run(cases, fp_system(), move |sys| {
        let n = sys[0][0].0.len();
        let polys: Vec<SparsePoly> = sys.iter().map(|t| fp_to_poly(t, field)).collect();
        let r = has_torus_root(&polys).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let found = scan(&sys, n);
        if found {
            prop_assert!(r.exists, "scan found a root the decision missed: {:?}", sys);
        }
        if let Some(pt) = &r.point {
            prop_assert!(r.exists);
            prop_assert!(pt.iter().all(|c| !c.is_zero()));
            prop_assert!(polys.iter().all(|f| f.eval(pt).is_zero()));
        }
        if !r.exists {
            prop_assert!(!found);
        }
        Ok(())
    })
}

