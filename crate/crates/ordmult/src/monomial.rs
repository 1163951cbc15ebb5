//! Monomial ideals: irreducible decomposition, the ideal chain of ordered
//! intersections, and localized lengths at minimal primes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::{Error, Result};

pub type Monomial = Vec<u32>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// A monomial ideal stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let gens: BTreeSet<Monomial> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.len() != nvars) {
            return Err(Error::Input(format!("monomial {g:?} does not have {nvars} exponents")));
        }
        let all: Vec<Monomial> = gens.into_iter().collect();
        let gens = all
            .iter()
            .enumerate()
            .filter(|(i, g)| !all.iter().enumerate().any(|(j, h)| j != *i && divides(h, g) && (h != *g || j < *i)))
            .map(|(_, g)| g.clone())
            .collect();
        Ok(MonomialIdeal { nvars, gens })
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![] }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![vec![0; nvars]] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, m))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        Self::new(self.nvars, self.gens.iter().chain(&other.gens).cloned()).unwrap()
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut out = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                out.push(lcm(a, b));
            }
        }
        Self::new(self.nvars, out).unwrap()
    }

    /// Variables of a prime (x_k : k in set) containing the ideal's radical, as a set of indices.
    pub fn radical_support(&self) -> BTreeSet<usize> {
        self.gens.iter().flat_map(|g| g.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)).collect()
    }

    /// Irredundant decomposition into ideals generated by pure powers of variables.
    pub fn irreducible_components(&self) -> Vec<MonomialIdeal> {
        if self.is_unit() {
            return vec![];
        }
        let mut done: BTreeSet<MonomialIdeal> = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(i) = stack.pop() {
            if i.is_unit() {
                continue;
            }
            let Some(m) = i.gens.iter().find(|g| g.iter().filter(|&&e| e > 0).count() > 1) else {
                done.insert(i);
                continue;
            };
            let k = m.iter().position(|&e| e > 0).unwrap();
            let mut pure = vec![0; self.nvars];
            pure[k] = m[k];
            let mut rest = m.clone();
            rest[k] = 0;
            stack.push(Self::new(self.nvars, i.gens.iter().cloned().chain([pure])).unwrap());
            stack.push(Self::new(self.nvars, i.gens.iter().cloned().chain([rest])).unwrap());
        }
        let comps: Vec<MonomialIdeal> = done.into_iter().collect();
        comps
            .iter()
            .enumerate()
            .filter(|(i, a)| !comps.iter().enumerate().any(|(j, b)| j != *i && a.contains_ideal(b) && (*a != b || j < *i)))
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// Minimal primes as sets of variable indices.
    pub fn minimal_primes(&self) -> Vec<BTreeSet<usize>> {
        let primes: BTreeSet<BTreeSet<usize>> = self.irreducible_components().iter().map(|c| c.radical_support()).collect();
        let primes: Vec<_> = primes.into_iter().collect();
        primes.iter().filter(|p| !primes.iter().any(|q| q != *p && q.is_subset(p))).cloned().collect()
    }

    /// Length of the localization at the prime generated by the variables in `prime`:
    /// the remaining variables are set to 1 and standard monomials are counted.
    /// None when the prime is not minimal over the ideal (infinite length) or the localization is zero.
    pub fn localized_length(&self, prime: &BTreeSet<usize>) -> Option<u64> {
        let vars: Vec<usize> = prime.iter().copied().collect();
        let local: Vec<Monomial> = self
            .gens
            .iter()
            .map(|g| vars.iter().map(|&i| g[i]).collect())
            .collect();
        let li = MonomialIdeal::new(vars.len(), local).unwrap();
        if li.is_unit() {
            return Some(0);
        }
        staircase_count(&li)
    }
}

/// Number of standard monomials of a monomial ideal, None if infinite.
pub fn staircase_count(ideal: &MonomialIdeal) -> Option<u64> {
    let n = ideal.nvars;
    let mut bounds = vec![u32::MAX; n];
    for g in &ideal.gens {
        let nz: Vec<usize> = (0..n).filter(|&i| g[i] > 0).collect();
        match nz.as_slice() {
            [] => return Some(0),
            [i] => bounds[*i] = bounds[*i].min(g[*i]),
            _ => {}
        }
    }
    if bounds.iter().any(|&b| b == u32::MAX) {
        return None;
    }
    Some(count_below(&ideal.gens, &bounds, &mut vec![0; n], 0))
}

fn count_below(gens: &[Monomial], bounds: &[u32], cur: &mut Vec<u32>, k: usize) -> u64 {
    if k == bounds.len() {
        return u64::from(!gens.iter().any(|g| divides(g, cur)));
    }
    let mut total = 0;
    for e in 0..bounds[k] {
        cur[k] = e;
        // Prune: once the prefix with zero tail is in the ideal, larger e stay in it.
        let prefix_in = gens.iter().any(|g| divides(&g[..=k], &cur[..=k]) && g[k + 1..].iter().all(|&x| x == 0));
        if prefix_in {
            break;
        }
        total += count_below(gens, bounds, cur, k + 1);
    }
    cur[k] = 0;
    total
}

/// The chain I^(1) ⊆ ... ⊆ I^(ρ) for monomials f_1..f_m along the increasing tuple `tuple` (0-based indices into `fs`).
#[derive(Clone, Debug, Serialize)]
pub struct ChainResult {
    pub steps: Vec<MonomialIdeal>,
    pub lengths: Vec<(Vec<usize>, u64)>,
}

impl ChainResult {
    pub fn ideal(&self) -> &MonomialIdeal {
        self.steps.last().unwrap()
    }

    pub fn length_at(&self, prime: &[usize]) -> u64 {
        self.lengths.iter().find(|(p, _)| p == prime).map(|(_, l)| *l).unwrap_or(0)
    }
}

pub fn monomial_ideal_chain_in(fs: &[Monomial], tuple: &[usize]) -> Result<ChainResult> {
    let Some(n) = fs.first().map(|f| f.len()) else {
        return Err(Error::Input("no monomials".into()));
    };
    if fs.iter().any(|f| f.len() != n) {
        return Err(Error::Input("monomials must have the same number of variables".into()));
    }
    if tuple.is_empty() || tuple.windows(2).any(|w| w[0] >= w[1]) || *tuple.last().unwrap() >= fs.len() {
        return Err(Error::Input(format!("index tuple {tuple:?} must be nonempty, increasing and in range")));
    }
    let principal = |f: &Monomial| MonomialIdeal::new(n, [f.clone()]).unwrap();
    let mut cur = principal(&fs[tuple[0]]);
    let mut steps = vec![cur.clone()];
    for &ij in &tuple[1..] {
        let mut kept = MonomialIdeal::unit(n);
        for q in cur.irreducible_components() {
            let p = q.radical_support();
            let hits = |f: &Monomial| f.iter().enumerate().any(|(k, &e)| e > 0 && p.contains(&k));
            if fs[..ij].iter().all(hits) && !hits(&fs[ij]) {
                kept = kept.intersection(&q);
            }
        }
        cur = principal(&fs[ij]).sum(&kept);
        steps.push(cur.clone());
    }
    let lengths = cur
        .minimal_primes()
        .into_iter()
        .map(|p| {
            let l = cur.localized_length(&p).unwrap_or(0);
            (p.into_iter().collect(), l)
        })
        .collect();
    Ok(ChainResult { steps, lengths })
}

/// The chain for monomials given in tuple order.
pub fn monomial_ideal_chain(fs: &[Monomial]) -> Result<ChainResult> {
    let t: Vec<usize> = (0..fs.len()).collect();
    monomial_ideal_chain_in(fs, &t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition() {
        let i = MonomialIdeal::new(2, [vec![1, 2]]).unwrap();
        let c = i.irreducible_components();
        assert_eq!(c.len(), 2);
        assert!(c.contains(&MonomialIdeal::new(2, [vec![1, 0]]).unwrap()));
        assert!(c.contains(&MonomialIdeal::new(2, [vec![0, 2]]).unwrap()));
        let j = MonomialIdeal::new(2, [vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(j.irreducible_components().len(), 2);
        assert_eq!(staircase_count(&j), Some(3));
        assert_eq!(MonomialIdeal::new(2, [vec![1, 1], vec![1, 0]]).unwrap().gens(), &[vec![1, 0]]);
    }

    #[test]
    fn chain_two_divisors() {
        let r = monomial_ideal_chain(&[vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(r.ideal().gens(), &[vec![0, 2], vec![2, 0]]);
        assert_eq!(r.lengths, vec![(vec![0, 1], 4)]);
    }

    #[test]
    fn pure_powers() {
        let r = monomial_ideal_chain(&[vec![3, 0, 0], vec![0, 2, 0], vec![0, 0, 5]]).unwrap();
        assert_eq!(r.lengths, vec![(vec![0, 1, 2], 30)]);
    }

    #[test]
    fn localized() {
        let i = MonomialIdeal::new(3, [vec![2, 0, 1], vec![0, 3, 4]]).unwrap();
        let p: BTreeSet<usize> = [0, 1].into();
        assert_eq!(i.localized_length(&p), Some(6));
        let q: BTreeSet<usize> = [2].into();
        assert_eq!(i.localized_length(&q), Some(1));
    }
}
