//! Declarative scenes and the ordered-intersection ledger.
//!
//! A scene lists divisors F_1..F_n as formal sums of named irreducible
//! components, named subvarieties with codimensions, which subvarieties lie in
//! which supports, the irreducible components of W ∩ supp(F_i), and degree
//! data. Distinguished components are found by the set-theoretic recursion over
//! these tables; local factors come from table values or computation directives.
//! Divisor indices in scene files are 1-based.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::monomial::monomial_ideal_chain_in;
use crate::mult::{certified_mult, curve_order_estimate, projected_mult_along_z, MultValue};
use crate::system::{parse_point, System, SystemSpec};
use crate::{Error, Result};

/// Name of the ambient variety in ledgers.
pub const AMBIENT: &str = "X";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentMult {
    pub name: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    #[serde(default)]
    pub name: Option<String>,
    /// Empty for the zero divisor.
    #[serde(default)]
    pub components: Vec<ComponentMult>,
    /// Degree d when L_i = O(d) on projective space; feeds the degree calculator.
    #[serde(default)]
    pub degree: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubvarietySpec {
    pub name: String,
    pub codim: usize,
    #[serde(default)]
    pub degree: Option<u64>,
    /// Other subvarieties containing this one.
    #[serde(default)]
    pub lies_on: Vec<String>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Membership {
    pub subvariety: String,
    pub divisors: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionEntry {
    pub subvariety: String,
    pub divisor: usize,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeEntry {
    pub subvariety: String,
    pub indices: Vec<usize>,
    pub value: u64,
}

/// A polynomial system given inline or as a path relative to the scene file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Path(String),
    Inline(SystemSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Directive {
    /// Monomials f_1..f_n in local coordinates; the factor is the localized
    /// length of the ideal chain at the prime generated by `prime` (1-based variables).
    MonomialChain { monomials: Vec<Vec<u32>>, prime: Vec<usize> },
    /// Intersection multiplicity of a complete intersection: at the origin, or
    /// along V(x_1..x_k) when `project` is set.
    CompleteIntersection {
        system: SystemRef,
        #[serde(default)]
        polys: Option<Vec<String>>,
        #[serde(default)]
        project: Option<usize>,
        #[serde(default)]
        samples: Vec<Vec<String>>,
    },
    /// factor × order of the target along the monomial curve t -> (t^w_1, ..., t^w_n).
    ParametrizedCurve { factor: u64, system: SystemRef, target: String, weights: Vec<u64> },
    /// Newton-diagram estimate of the order of the target on the residual curve.
    CurveEstimate {
        system: SystemRef,
        target: String,
        family: Vec<Vec<usize>>,
        #[serde(default)]
        shift: Option<Vec<String>>,
        #[serde(default)]
        substitution: Option<Vec<Vec<i64>>>,
    },
    /// A value established by an external pipeline run during evaluation.
    Sphere { part: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalFactorEntry {
    pub subvariety: String,
    pub tuple: Vec<usize>,
    #[serde(default)]
    pub value: Option<u64>,
    #[serde(default)]
    pub directive: Option<Directive>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcludedPoint {
    pub name: String,
    #[serde(default)]
    pub value: Option<u64>,
    #[serde(default)]
    pub directive: Option<Directive>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub name: String,
    pub n: usize,
    pub total_intersection_number: u64,
    pub divisors: Vec<DivisorSpec>,
    #[serde(default)]
    pub subvarieties: Vec<SubvarietySpec>,
    #[serde(default)]
    pub membership: Vec<Membership>,
    #[serde(default)]
    pub intersections: Vec<IntersectionEntry>,
    #[serde(default)]
    pub degrees: Vec<DegreeEntry>,
    #[serde(default)]
    pub local_factors: Vec<LocalFactorEntry>,
    /// Isolated points removed from the count, e.g. points at infinity for an affine count.
    #[serde(default)]
    pub excluded_points: Vec<ExcludedPoint>,
    /// Parameters for the sphere pipeline, when the scene uses sphere directives.
    #[serde(default)]
    pub sphere_parameters: Option<BTreeMap<String, String>>,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DistinguishedComponent {
    pub name: String,
    pub codim: usize,
    /// Type tuples, 1-based.
    pub tuples: Vec<Vec<usize>>,
    /// Lies in a positive-dimensional component of the intersection of supports.
    pub excess: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFactor {
    pub value: u64,
    pub exact: bool,
    pub source: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleTerm {
    pub tuple: Vec<usize>,
    pub local: LocalFactor,
    pub degree: u64,
    pub product: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderedMultiplicity {
    pub name: String,
    pub codim: usize,
    pub excess: bool,
    pub terms: Vec<TupleTerm>,
    pub total: u64,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcludedValue {
    pub name: String,
    pub value: u64,
    pub exact: bool,
    pub source: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conservation {
    pub balanced: bool,
    pub sum: u64,
    pub total: u64,
    pub gap: i128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ledger {
    pub scene: String,
    pub total_intersection_number: u64,
    pub first_index: Option<usize>,
    pub components: Vec<OrderedMultiplicity>,
    pub excluded: Vec<ExcludedValue>,
    pub isolated_count: u64,
    pub conservation: Conservation,
    pub exact: bool,
}

/// Hook for directives evaluated outside this module.
pub trait ExternalFactors {
    fn sphere(&self, scene: &Scene, part: &str) -> Result<LocalFactor>;
}

pub struct NoExternal;

impl ExternalFactors for NoExternal {
    fn sphere(&self, _: &Scene, part: &str) -> Result<LocalFactor> {
        Err(Error::Input(format!("sphere directive '{part}' needs the sphere pipeline")))
    }
}

struct Tables {
    codim: BTreeMap<String, usize>,
    members: BTreeMap<String, BTreeSet<usize>>,
    inter: BTreeMap<(String, usize), BTreeSet<String>>,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        let s: Scene = serde_json::from_str(text).map_err(|e| Error::Input(format!("scene file: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let mut s = Self::from_json(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf);
        Ok(s)
    }

    /// The smallest index (1-based) of a nonzero divisor.
    pub fn first_index(&self) -> Option<usize> {
        self.divisors.iter().position(|d| !d.components.is_empty()).map(|i| i + 1)
    }

    fn check_index(&self, i: usize, what: &str) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::Input(format!("{what}: divisor index {i} out of range 1..{}", self.n)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Input("scene dimension must be positive".into()));
        }
        if self.divisors.len() != self.n {
            return Err(Error::Input(format!("scene has dimension {} but {} divisors", self.n, self.divisors.len())));
        }
        self.tables().map(|_| ())
    }

    fn tables(&self) -> Result<Tables> {
        let mut codim: BTreeMap<String, usize> = BTreeMap::new();
        codim.insert(AMBIENT.into(), 0);
        for s in &self.subvarieties {
            if s.codim == 0 || s.codim > self.n {
                return Err(Error::Input(format!("subvariety '{}': codimension {} out of range 1..{}", s.name, s.codim, self.n)));
            }
            if codim.insert(s.name.clone(), s.codim).is_some() {
                return Err(Error::Input(format!("subvariety '{}' declared twice", s.name)));
            }
        }
        let known = |name: &str, what: &str| -> Result<()> {
            if codim.contains_key(name) {
                Ok(())
            } else {
                Err(Error::Input(format!("{what}: unknown subvariety '{name}'")))
            }
        };
        let mut members: BTreeMap<String, BTreeSet<usize>> = codim.keys().map(|k| (k.clone(), BTreeSet::new())).collect();
        // Zero divisors have full support.
        let zero: BTreeSet<usize> = (1..=self.n).filter(|&i| self.divisors[i - 1].components.is_empty()).collect();
        for set in members.values_mut() {
            set.extend(&zero);
        }
        for (i, d) in self.divisors.iter().enumerate() {
            for c in &d.components {
                known(&c.name, &format!("divisor {}", i + 1))?;
                if codim[&c.name] != 1 {
                    return Err(Error::Input(format!("divisor {}: component '{}' is not of codimension 1", i + 1, c.name)));
                }
                if c.multiplicity == 0 {
                    return Err(Error::Input(format!("divisor {}: component '{}' has multiplicity 0", i + 1, c.name)));
                }
                members.get_mut(&c.name).unwrap().insert(i + 1);
            }
        }
        for m in &self.membership {
            known(&m.subvariety, "membership")?;
            for &i in &m.divisors {
                self.check_index(i, &format!("membership of '{}'", m.subvariety))?;
            }
            members.get_mut(&m.subvariety).unwrap().extend(&m.divisors);
        }
        let mut inter: BTreeMap<(String, usize), BTreeSet<String>> = BTreeMap::new();
        for e in &self.intersections {
            known(&e.subvariety, "intersection table")?;
            self.check_index(e.divisor, &format!("intersection of '{}'", e.subvariety))?;
            for c in &e.components {
                known(c, &format!("intersection of '{}' with divisor {}", e.subvariety, e.divisor))?;
                if codim[c] != codim[&e.subvariety] + 1 {
                    return Err(Error::Input(format!(
                        "intersection of '{}' (codim {}) with divisor {}: component '{}' has codim {}",
                        e.subvariety, codim[&e.subvariety], e.divisor, c, codim[c]
                    )));
                }
            }
            let key = (e.subvariety.clone(), e.divisor);
            if inter.insert(key, e.components.iter().cloned().collect()).is_some() {
                return Err(Error::Input(format!("intersection of '{}' with divisor {} listed twice", e.subvariety, e.divisor)));
            }
        }
        for s in &self.subvarieties {
            for y in &s.lies_on {
                known(y, &format!("'{}' lies on", s.name))?;
                if codim[y] >= s.codim {
                    return Err(Error::Input(format!("'{}' lies on '{}' of no smaller codimension", s.name, y)));
                }
            }
        }
        // Containment propagates support membership.
        loop {
            let mut changed = false;
            for ((w, i), comps) in &inter {
                let mut add = members[w].clone();
                add.insert(*i);
                for c in comps {
                    let m = members.get_mut(c).unwrap();
                    let before = m.len();
                    m.extend(&add);
                    changed |= m.len() != before;
                }
            }
            for s in &self.subvarieties {
                for y in &s.lies_on {
                    let add = members[y].clone();
                    let m = members.get_mut(&s.name).unwrap();
                    let before = m.len();
                    m.extend(&add);
                    changed |= m.len() != before;
                }
            }
            if !changed {
                break;
            }
        }
        for d in &self.degrees {
            known(&d.subvariety, "degree table")?;
            for &i in &d.indices {
                self.check_index(i, &format!("degree of '{}'", d.subvariety))?;
            }
        }
        for l in &self.local_factors {
            known(&l.subvariety, "local factor table")?;
            for &i in &l.tuple {
                self.check_index(i, &format!("local factor of '{}'", l.subvariety))?;
            }
            if l.value.is_some() == l.directive.is_some() {
                return Err(Error::Input(format!("local factor of '{}' {:?} needs exactly one of value and directive", l.subvariety, l.tuple)));
            }
        }
        for p in &self.excluded_points {
            if p.value.is_some() == p.directive.is_some() {
                return Err(Error::Input(format!("excluded point '{}' needs exactly one of value and directive", p.name)));
            }
        }
        Ok(Tables { codim, members, inter })
    }

    /// Components of Z^(ρ) for one tuple (1-based indices).
    fn recursion(&self, t: &Tables, tuple: &[usize]) -> Result<BTreeSet<String>> {
        let member = |z: &str, i: usize| t.members[z].contains(&i);
        let rho = tuple.len();
        let mut cur: BTreeSet<String> = [AMBIENT.to_string()].into();
        for j in 0..rho {
            let ij = tuple[j];
            let mut cands: BTreeSet<String> = BTreeSet::new();
            for w in &cur {
                if w == AMBIENT {
                    cands.extend(self.divisors[ij - 1].components.iter().map(|c| c.name.clone()));
                } else if self.divisors[ij - 1].components.is_empty() {
                    cands.insert(w.clone());
                } else {
                    let key = (w.clone(), ij);
                    let comps = t.inter.get(&key).ok_or_else(|| {
                        Error::Input(format!("scene inconsistency: missing intersection entry for '{w}' with divisor {ij} (needed by tuple {tuple:?})"))
                    })?;
                    cands.extend(comps.iter().cloned());
                }
            }
            cur = if j + 1 < rho {
                let next = tuple[j + 1];
                cands
                    .into_iter()
                    .filter(|c| tuple[j + 1..].iter().all(|&k| !member(c, k)) && (ij + 1..next).all(|i| member(c, i)))
                    .collect()
            } else {
                cands.into_iter().filter(|c| (1..=self.n).all(|i| member(c, i))).collect()
            };
            if cur.is_empty() {
                break;
            }
        }
        Ok(cur)
    }

    /// All distinguished components with their type tuples.
    pub fn distinguished_components(&self) -> Result<Vec<DistinguishedComponent>> {
        let t = self.tables()?;
        let Some(istar) = self.first_index() else {
            return Ok(vec![DistinguishedComponent { name: AMBIENT.into(), codim: 0, tuples: vec![vec![]], excess: true }]);
        };
        let rest: Vec<usize> = (istar + 1..=self.n).collect();
        let mut found: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut tuple = vec![istar];
            tuple.extend(rest.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i));
            for z in self.recursion(&t, &tuple)? {
                if t.codim[&z] != tuple.len() {
                    return Err(Error::Internal(format!("component '{z}' of tuple {tuple:?} has codimension {}", t.codim[&z])));
                }
                found.entry(z).or_default().push(tuple.clone());
            }
        }
        let positive: BTreeSet<String> = found.keys().filter(|z| t.codim[*z] < self.n).cloned().collect();
        let lies: BTreeMap<&str, &Vec<String>> = self.subvarieties.iter().map(|s| (s.name.as_str(), &s.lies_on)).collect();
        let mut out: Vec<DistinguishedComponent> = found
            .into_iter()
            .map(|(name, mut tuples)| {
                tuples.sort();
                let codim = t.codim[&name];
                let excess = codim < self.n || lies.get(name.as_str()).is_some_and(|l| l.iter().any(|y| positive.contains(y)));
                DistinguishedComponent { name, codim, tuples, excess }
            })
            .collect();
        out.sort_by(|a, b| (a.codim, &a.name).cmp(&(b.codim, &b.name)));
        Ok(out)
    }

    fn resolve_system(&self, r: &SystemRef) -> Result<System> {
        match r {
            SystemRef::Inline(s) => System::from_spec(s.clone()),
            SystemRef::Path(p) => {
                let path = match &self.base_dir {
                    Some(d) => d.join(p),
                    None => PathBuf::from(p),
                };
                System::load(&path)
            }
        }
    }

    fn evaluate(&self, d: &Directive, ext: &dyn ExternalFactors) -> Result<LocalFactor> {
        match d {
            Directive::MonomialChain { .. } => Err(Error::Input("a monomial-chain directive needs a type tuple".into())),
            Directive::CompleteIntersection { system, polys, project, samples } => {
                let s = self.resolve_system(system)?;
                let fs = match polys {
                    Some(names) => names.iter().map(|n| s.poly(n).cloned()).collect::<Result<Vec<_>>>()?,
                    None => s.polys.clone(),
                };
                let (r, source) = match project {
                    Some(k) => {
                        let pts = samples.iter().map(|p| parse_point(p, s.field)).collect::<Result<Vec<_>>>()?;
                        (projected_mult_along_z(&fs, *k, &pts)?.result, format!("multiplicity along V(x_1..x_{k})"))
                    }
                    None => (certified_mult(&fs)?, "multiplicity at the origin".to_string()),
                };
                finite(r.value, r.exact, source)
            }
            Directive::ParametrizedCurve { factor, system, target, weights } => {
                let s = self.resolve_system(system)?;
                let f = s.poly(target)?;
                if weights.len() != s.nvars() || weights.iter().any(|&w| w == 0) {
                    return Err(Error::Input(format!("curve weights {weights:?} must be {} positive integers", s.nvars())));
                }
                let o = f.monomial_curve_order(weights).ok_or_else(|| Error::Domain(format!("'{target}' vanishes on the curve")))?;
                Ok(LocalFactor { value: factor * o, exact: true, source: format!("{factor} x order {o} along the monomial curve {weights:?}") })
            }
            Directive::CurveEstimate { system, target, family, shift, substitution } => {
                let s = self.resolve_system(system)?;
                let fam = s.family0(family)?;
                let mut polys = s.polys.clone();
                if let Some(p) = shift {
                    let pt = parse_point(p, s.field)?;
                    polys = polys.iter().map(|f| f.shift(&pt)).collect::<Result<_>>()?;
                }
                if let Some(m) = substitution {
                    polys = polys.iter().map(|f| f.linear_substitute(m)).collect::<Result<_>>()?;
                }
                let t = s.index_of(target)?;
                let f = polys.remove(t);
                let r = curve_order_estimate(&f, &polys, &fam)?;
                finite(r.value, r.exact, "curve order from Newton diagrams".into())
            }
            Directive::Sphere { part } => ext.sphere(self, part),
        }
    }

    fn local_factor_with(&self, t: &Tables, z: &str, tuple: &[usize], ext: &dyn ExternalFactors) -> Result<LocalFactor> {
        if let Some(e) = self.local_factors.iter().find(|e| e.subvariety == z && e.tuple == tuple) {
            if let Some(v) = e.value {
                return Ok(LocalFactor { value: v, exact: true, source: "table".into() });
            }
            let d = e.directive.as_ref().unwrap();
            if let Directive::MonomialChain { monomials, prime } = d {
                return monomial_factor(monomials, prime, tuple);
            }
            return self.evaluate(d, ext);
        }
        if z == AMBIENT {
            return Ok(LocalFactor { value: 1, exact: true, source: "ambient".into() });
        }
        if t.codim[z] == 1 && tuple.len() == 1 {
            let m = self.divisors[tuple[0] - 1].components.iter().find(|c| c.name == z).map_or(0, |c| c.multiplicity);
            return Ok(LocalFactor { value: m, exact: true, source: format!("order of f_{} along {z}", tuple[0]) });
        }
        Err(Error::Input(format!(
            "local factor unavailable for '{z}' with tuple {tuple:?} (general primary decomposition out of scope); supply a value or directive"
        )))
    }

    pub fn local_factor(&self, z: &str, tuple: &[usize]) -> Result<LocalFactor> {
        self.local_factor_with(&self.tables()?, z, tuple, &NoExternal)
    }

    /// deg_{i'}(Z) for the complement i' of the tuple.
    pub fn degree(&self, z: &str, tuple: &[usize]) -> Result<u64> {
        let comp: Vec<usize> = (1..=self.n).filter(|i| !tuple.contains(i)).collect();
        if comp.is_empty() {
            return Ok(1);
        }
        if z == AMBIENT {
            return Ok(self.total_intersection_number);
        }
        if let Some(d) = self.degrees.iter().find(|d| d.subvariety == z && d.indices == comp) {
            return Ok(d.value);
        }
        let zdeg = self.subvarieties.iter().find(|s| s.name == z).and_then(|s| s.degree);
        let ds: Option<Vec<u64>> = comp.iter().map(|&i| self.divisors[i - 1].degree).collect();
        match (zdeg, ds) {
            (Some(a), Some(ds)) => Ok(a * ds.iter().product::<u64>()),
            _ => Err(Error::Input(format!("missing degree entry for '{z}' with indices {comp:?}"))),
        }
    }

    pub fn ordered_multiplicity_with(&self, z: &DistinguishedComponent, ext: &dyn ExternalFactors) -> Result<OrderedMultiplicity> {
        let t = self.tables()?;
        let mut terms = Vec::new();
        for tuple in &z.tuples {
            let local = self.local_factor_with(&t, &z.name, tuple, ext)?;
            let degree = self.degree(&z.name, tuple)?;
            terms.push(TupleTerm { tuple: tuple.clone(), product: local.value * degree, local, degree });
        }
        Ok(OrderedMultiplicity {
            name: z.name.clone(),
            codim: z.codim,
            excess: z.excess,
            total: terms.iter().map(|t| t.product).sum(),
            exact: terms.iter().all(|t| t.local.exact),
            terms,
        })
    }

    pub fn ordered_multiplicity(&self, name: &str) -> Result<OrderedMultiplicity> {
        let comps = self.distinguished_components()?;
        let z = comps.iter().find(|c| c.name == name).ok_or_else(|| Error::Input(format!("'{name}' is not a distinguished component")))?;
        self.ordered_multiplicity_with(z, &NoExternal)
    }

    pub fn ledger(&self) -> Result<Ledger> {
        self.ledger_with(&NoExternal)
    }

    pub fn ledger_with(&self, ext: &dyn ExternalFactors) -> Result<Ledger> {
        let comps = self.distinguished_components()?;
        let components: Vec<OrderedMultiplicity> = comps.iter().map(|z| self.ordered_multiplicity_with(z, ext)).collect::<Result<_>>()?;
        let excluded: Vec<ExcludedValue> = self
            .excluded_points
            .iter()
            .map(|p| {
                let f = match (&p.value, &p.directive) {
                    (Some(v), _) => LocalFactor { value: *v, exact: true, source: "table".into() },
                    (None, Some(d)) => self.evaluate(d, ext)?,
                    _ => unreachable!(),
                };
                Ok(ExcludedValue { name: p.name.clone(), value: f.value, exact: f.exact, source: f.source })
            })
            .collect::<Result<_>>()?;
        let excess: u64 = components.iter().filter(|c| c.excess).map(|c| c.total).sum();
        let removed = excess + excluded.iter().map(|e| e.value).sum::<u64>();
        let isolated_count = self
            .total_intersection_number
            .checked_sub(removed)
            .ok_or_else(|| Error::Domain(format!("inconsistent scene: excess contributions {removed} exceed the total {}", self.total_intersection_number)))?;
        let sum: u64 = components.iter().map(|c| c.total).sum();
        let conservation = Conservation {
            balanced: sum == self.total_intersection_number,
            sum,
            total: self.total_intersection_number,
            gap: self.total_intersection_number as i128 - sum as i128,
        };
        Ok(Ledger {
            scene: self.name.clone(),
            total_intersection_number: self.total_intersection_number,
            first_index: self.first_index(),
            exact: components.iter().all(|c| c.exact) && excluded.iter().all(|e| e.exact),
            components,
            excluded,
            isolated_count,
            conservation,
        })
    }

    /// Σ_Z mult^ord = total, for complete scenes.
    pub fn conservation_check(&self) -> Result<Conservation> {
        Ok(self.ledger()?.conservation)
    }
}

fn finite(v: MultValue, exact: bool, source: String) -> Result<LocalFactor> {
    match v {
        MultValue::Finite(x) => Ok(LocalFactor { value: x, exact, source }),
        MultValue::Infinite => Err(Error::Domain(format!("{source} is infinite"))),
    }
}

fn monomial_factor(monomials: &[Vec<u32>], prime: &[usize], tuple: &[usize]) -> Result<LocalFactor> {
    let nv = monomials.first().map_or(0, |m| m.len());
    if prime.iter().any(|&k| k == 0 || k > nv) {
        return Err(Error::Input(format!("prime variables {prime:?} out of range 1..{nv}")));
    }
    if tuple.iter().any(|&i| i > monomials.len()) {
        return Err(Error::Input(format!("tuple {tuple:?} needs {} monomials", tuple.iter().max().unwrap())));
    }
    let t0: Vec<usize> = tuple.iter().map(|i| i - 1).collect();
    let r = monomial_ideal_chain_in(monomials, &t0)?;
    let mut p: Vec<usize> = prime.iter().map(|k| k - 1).collect();
    p.sort();
    Ok(LocalFactor { value: r.length_at(&p), exact: true, source: format!("monomial ideal chain at the prime of variables {prime:?}") })
}

/// Degree of a complete-intersection-style subvariety: deg(Z) Π d_i.
pub fn projective_degree(deg_z: u64, divisor_degrees: &[u64]) -> u64 {
    deg_z * divisor_degrees.iter().product::<u64>()
}
