//! Parsing of small command-line values and text rendering helpers.

use ordmult::mult::{MultResult, SubsetTerm};
use ordmult::{Error, Result};

pub fn point(p: &[i64]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

pub fn points(ps: &[Vec<i64>]) -> String {
    ps.iter().map(|p| point(p)).collect::<Vec<_>>().join(" ")
}

/// Graded-lex order on exponent vectors.
pub fn grlex_sort(ps: &mut [Vec<i64>]) {
    ps.sort_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
}

/// "1,3" -> [0, 2]; checks the range 1..=n and rejects repeats.
pub fn index_set(s: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let k: usize = t.parse().map_err(|_| Error::Input(format!("bad variable index '{t}'")))?;
        if k == 0 || k > n {
            return Err(Error::Input(format!("variable index {k} out of range 1..{n}")));
        }
        if out.contains(&(k - 1)) {
            return Err(Error::Input(format!("variable index {k} repeated")));
        }
        out.push(k - 1);
    }
    if out.is_empty() {
        return Err(Error::Input(format!("empty index set '{s}'")));
    }
    Ok(out)
}

/// "1,2;3" -> [[1,2],[3]] (1-based, unchecked). An empty string is the empty family.
pub fn family(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad index '{x}' in family '{s}'"))))
                .collect()
        })
        .collect()
}

/// "1,-1,0;0,1,0;0,0,1" -> rows.
pub fn matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Input(format!("bad matrix entry '{x}'"))))
                .collect()
        })
        .collect()
}

pub fn coords(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).collect()
}

fn subset(idx: &[usize]) -> String {
    let s: Vec<String> = idx.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", s.join(","))
}

pub fn subset_term(t: &SubsetTerm, out: &mut String) {
    out.push_str(&format!(
        "  I = {}: mult* {} x projected {} = {}\n",
        subset(&t.subset),
        t.star,
        t.projected,
        t.contribution
    ));
    for s in &t.star_terms {
        out.push_str(&format!("    nu = {}: min {} x mixed volume {} = {}\n", point(&s.nu), s.min, s.mixed_volume, s.min as u64 * s.mixed_volume));
    }
}

pub fn mult_result(r: &MultResult, out: &mut String) {
    out.push_str(&format!("value: {}\nexact: {}\n", r.value, r.exact));
    if r.breakdown.is_empty() {
        out.push_str("breakdown: none\n");
    } else {
        out.push_str("breakdown:\n");
        for t in &r.breakdown {
            subset_term(t, out);
        }
    }
    match &r.witness {
        Some(w) => out.push_str(&format!("witness: {}\n", w.describe())),
        None => out.push_str("witness: none\n"),
    }
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
}
