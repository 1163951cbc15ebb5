//! Polynomial systems: a field, named variables and named polynomials.
//!
//! System files are TOML:
//!
//! ```toml
//! field = "Q"            # Q | Qi | Fp 7
//! vars = ["x", "y", "z"]
//!
//! [[poly]]
//! name = "f1"
//! expr = "x^4 + x*y + y^2"
//!
//! [curve]                # optional: the designated polynomial and the excess family
//! target = "f3"
//! family = [[3]]         # 1-based variable indices
//!
//! [projection]           # optional: excess component V(x_1..x_k) and sample points
//! k = 2
//! samples = [["0", "0", "1"]]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::field::{Coeff, Field};
use crate::parse::parse_poly;
use crate::poly::SparsePoly;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NamedExpr {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveSpec {
    pub target: String,
    #[serde(default)]
    pub family: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProjectionSpec {
    pub k: usize,
    #[serde(default)]
    pub samples: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub field: String,
    pub vars: Vec<String>,
    #[serde(rename = "poly")]
    pub polys: Vec<NamedExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionSpec>,
}

#[derive(Clone, Debug)]
pub struct System {
    pub field: Field,
    pub vars: Vec<String>,
    pub names: Vec<String>,
    pub polys: Vec<SparsePoly>,
    pub spec: SystemSpec,
}

pub fn parse_field(s: &str) -> Result<Field> {
    let t: String = s.chars().filter(|c| !c.is_whitespace() && !"()_".contains(*c)).collect();
    match t.as_str() {
        "Q" => Ok(Field::Q),
        "Qi" | "Q[i]" => Ok(Field::Qi),
        _ => {
            let digits = t.strip_prefix("Fp").or_else(|| t.strip_prefix("GF")).or_else(|| t.strip_prefix('F'));
            match digits.and_then(|d| d.parse::<u64>().ok()) {
                Some(p) => Field::prime(p),
                None => Err(Error::Input(format!("unknown field '{s}' (expected Q, Qi or Fp <prime>)"))),
            }
        }
    }
}

/// Parses a constant such as "3/4", "-2*i" or "1 + i".
pub fn parse_coeff(s: &str, field: Field) -> Result<Coeff> {
    let p = parse_poly(s, &[], field)?;
    Ok(p.constant_term())
}

pub fn parse_point(coords: &[String], field: Field) -> Result<Vec<Coeff>> {
    coords.iter().map(|c| parse_coeff(c, field)).collect()
}

impl System {
    pub fn from_spec(spec: SystemSpec) -> Result<System> {
        let field = parse_field(&spec.field)?;
        if spec.vars.is_empty() {
            return Err(Error::Input("system declares no variables".into()));
        }
        for (i, v) in spec.vars.iter().enumerate() {
            if spec.vars[..i].contains(v) {
                return Err(Error::Input(format!("variable '{v}' declared twice")));
            }
            if field == Field::Qi && v == "i" {
                return Err(Error::Input("'i' is the imaginary unit over Qi and cannot be a variable".into()));
            }
        }
        let mut names = Vec::new();
        let mut polys = Vec::new();
        for p in &spec.polys {
            if names.contains(&p.name) {
                return Err(Error::Input(format!("polynomial '{}' declared twice", p.name)));
            }
            let f = parse_poly(&p.expr, &spec.vars, field).map_err(|e| Error::Input(format!("polynomial '{}': {e}", p.name)))?;
            names.push(p.name.clone());
            polys.push(f);
        }
        Ok(System { field, vars: spec.vars.clone(), names, polys, spec })
    }

    pub fn from_toml(text: &str) -> Result<System> {
        let spec: SystemSpec = toml::from_str(text).map_err(|e| Error::Input(format!("system file: {e}")))?;
        Self::from_spec(spec)
    }

    pub fn load(path: &Path) -> Result<System> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::Input(format!("no polynomial named '{name}'")))
    }

    pub fn poly(&self, name: &str) -> Result<&SparsePoly> {
        Ok(&self.polys[self.index_of(name)?])
    }

    /// The designated polynomial and the remaining ones, in file order.
    pub fn split_target(&self, target: &str) -> Result<(SparsePoly, Vec<SparsePoly>)> {
        let t = self.index_of(target)?;
        let rest = self.polys.iter().enumerate().filter(|(i, _)| *i != t).map(|(_, p)| p.clone()).collect();
        Ok((self.polys[t].clone(), rest))
    }

    /// Converts a 1-based family of variable index sets to 0-based, checking ranges.
    pub fn family0(&self, family: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
        family
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&i| {
                        if i == 0 || i > self.nvars() {
                            Err(Error::Input(format!("variable index {i} out of range 1..{}", self.nvars())))
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}
