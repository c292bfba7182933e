//! JSON documents for polynomials, grids and evaluation tables.
//!
//! Field elements and the modulus are written as decimal strings so that
//! values up to `2^62` survive tools that parse numbers as doubles. Plain JSON
//! numbers are accepted on input.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algo::{EvalTable, Grid};
use crate::combinat::TrimmedIndex;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::poly::{SparsePoly, TrimmedPoly};

/// A `u64` carried as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimal(pub u64);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct DecimalVisitor;

        impl Visitor<'_> for DecimalVisitor {
            type Value = Decimal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or a decimal string")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Decimal, E> {
                Ok(Decimal(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Decimal, E> {
                u64::try_from(v)
                    .map(Decimal)
                    .map_err(|_| E::custom(format!("negative value {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Decimal, E> {
                v.trim()
                    .parse()
                    .map(Decimal)
                    .map_err(|_| E::custom(format!("invalid decimal integer {v:?}")))
            }
        }

        d.deserialize_any(DecimalVisitor)
    }
}

impl From<FieldElement> for Decimal {
    fn from(e: FieldElement) -> Self {
        Decimal(e.value())
    }
}

fn modulus(p: Decimal) -> Result<PrimeModulus> {
    PrimeModulus::new(p.0).map_err(|e| Error::Validation(format!("field modulus \"p\": {e}")))
}

fn element(m: PrimeModulus, v: Decimal, what: impl FnOnce() -> String) -> Result<FieldElement> {
    m.canonical(v.0)
        .map_err(|_| Error::Validation(format!("{}: {} is not in [0, {m})", what(), v.0)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exp: TrimmedIndex,
    pub coeff: Decimal,
}

/// `{"p": "65537", "n": 3, "d": 2, "D": 4, "terms": [{"exp": [1,0,2], "coeff": "7"}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparsePolyDoc {
    pub p: Decimal,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub total: i64,
    pub terms: Vec<TermDoc>,
}

impl SparsePolyDoc {
    pub fn from_sparse(s: &SparsePoly) -> Self {
        Self {
            p: Decimal(s.modulus.value()),
            n: s.n,
            d: s.d,
            total: s.total,
            terms: s
                .terms
                .iter()
                .map(|(l, c)| TermDoc {
                    exp: l.clone(),
                    coeff: (*c).into(),
                })
                .collect(),
        }
    }

    pub fn to_sparse(&self) -> Result<SparsePoly> {
        let m = modulus(self.p)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    t.exp.clone(),
                    element(m, t.coeff, || format!("coefficient of term {}", t.exp))?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(SparsePoly {
            n: self.n,
            d: self.d,
            total: self.total,
            modulus: m,
            terms,
        })
    }

    pub fn to_poly(&self) -> Result<TrimmedPoly> {
        TrimmedPoly::from_sparse(&self.to_sparse()?)
    }
}

/// `{"p": "...", "n": 2, "d": 1, "nodes": [["0","1"],["0","1"]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub p: Decimal,
    pub n: usize,
    pub d: usize,
    pub nodes: Vec<Vec<Decimal>>,
}

impl GridDoc {
    pub fn from_grid(g: &Grid) -> Self {
        Self {
            p: Decimal(g.modulus().value()),
            n: g.n(),
            d: g.d(),
            nodes: g
                .nodes()
                .iter()
                .map(|row| row.iter().map(|&z| z.into()).collect())
                .collect(),
        }
    }

    pub fn to_grid(&self) -> Result<Grid> {
        let m = modulus(self.p)?;
        if self.nodes.len() != self.n {
            return Err(Error::Validation(format!(
                "grid declares n = {} but lists {} node rows",
                self.n,
                self.nodes.len()
            )));
        }
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &z)| element(m, z, || format!("node z[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Grid::new(self.d, m, nodes)
    }
}

/// `{"p": "...", "n": 2, "d": 1, "D": 1, "values": ["2","0","1"]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalTableDoc {
    pub p: Decimal,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub total: i64,
    pub values: Vec<Decimal>,
}

impl EvalTableDoc {
    pub fn from_table(t: &EvalTable) -> Self {
        Self {
            p: Decimal(t.modulus().value()),
            n: t.n(),
            d: t.d(),
            total: t.total(),
            values: t.values().iter().map(|&v| v.into()).collect(),
        }
    }

    pub fn to_table(&self) -> Result<EvalTable> {
        let m = modulus(self.p)?;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| element(m, v, || format!("value {i}")))
            .collect::<Result<_>>()?;
        EvalTable::new(self.n, self.d, self.total, m, values)
    }
}
