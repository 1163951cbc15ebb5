//! Small exact integer linear algebra: determinants, ranks, Hermite forms and
//! lattice bases of hyperplanes.

use num_integer::Integer;
use num_rational::Ratio;

pub type Q128 = Ratio<i128>;

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

pub fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

/// Divides by the gcd of the entries (zero vector unchanged).
pub fn primitive(v: &[i128]) -> Vec<i128> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over Q.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| primitive(r)).collect();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                let row: Vec<i128> = (0..cols).map(|j| a[i][j] * x - a[r][j] * y).collect();
                a[i] = primitive(&row);
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Row Hermite normal form of an integer matrix; zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| a[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c] != 0 {
                    let q = Integer::div_floor(&a[i][c], &a[r][c]);
                    for j in 0..cols {
                        a[i][j] -= q * a[r][j];
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for j in 0..cols {
                a[r][j] = -a[r][j];
            }
        }
        for i in 0..r {
            let q = Integer::div_floor(&a[i][c], &a[r][c]);
            if q != 0 {
                for j in 0..cols {
                    a[i][j] -= q * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// A basis of the lattice {x in Z^n : <nu, x> = 0}, in Hermite normal form.
pub fn perp_lattice_basis(nu: &[i128]) -> Vec<Vec<i128>> {
    let n = nu.len();
    // Column operations on the row vector nu, tracked in u (columns of u are images of e_j).
    let mut v = nu.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&j| v[j] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&j| v[j].abs()).unwrap();
        for &j in &nz {
            if j != p {
                let q = Integer::div_floor(&v[j], &v[p]);
                v[j] -= q * v[p];
                for row in u.iter_mut() {
                    row[j] -= q * row[p];
                }
            }
        }
    }
    let basis: Vec<Vec<i128>> = (0..n).filter(|&j| v[j] == 0).map(|j| u.iter().map(|row| row[j]).collect()).collect();
    hermite_rows(&basis)
}

/// Coordinates of p in the basis given by the rows of b, if p lies in their rational span.
pub fn coordinates(b: &[Vec<i128>], p: &[i128]) -> Option<Vec<Q128>> {
    let k = b.len();
    let n = p.len();
    // Solve b^T c = p by Gaussian elimination over Q.
    let mut a: Vec<Vec<Q128>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q128> = (0..k).map(|j| Q128::from_integer(b[j][i])).collect();
            row.push(Q128::from_integer(p[i]));
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(q) = (r..n).find(|&i| a[i][c] != Q128::from_integer(0)) else { continue };
        a.swap(r, q);
        let lead = a[r][c];
        for j in 0..=k {
            a[r][j] /= lead;
        }
        for i in 0..n {
            if i != r && a[i][c] != Q128::from_integer(0) {
                let f = a[i][c];
                for j in 0..=k {
                    let t = a[r][j] * f;
                    a[i][j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if (r..n).any(|i| a[i][k] != Q128::from_integer(0)) {
        return None;
    }
    let mut c = vec![Q128::from_integer(0); k];
    for (i, &pc) in piv.iter().enumerate() {
        c[pc] = a[i][k];
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 0);
    }

    #[test]
    fn perp_bases() {
        assert_eq!(perp_lattice_basis(&[0, 0, 1]), vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let b = perp_lattice_basis(&[1, 1]);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
        let nu = [1, 4, 4];
        let b = perp_lattice_basis(&nu);
        for r in &b {
            assert_eq!(r.iter().zip(&nu).map(|(a, b)| a * b).sum::<i128>(), 0);
        }
        // nu with a completing vector gives a unimodular matrix.
        let m = vec![vec![1, 0, 0], b[0].clone(), b[1].clone()];
        assert_eq!(det(&m).abs(), 1);
    }

    #[test]
    fn hermite_form() {
        let h = hermite_rows(&[vec![2, 4], vec![3, 5]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
    }
}
