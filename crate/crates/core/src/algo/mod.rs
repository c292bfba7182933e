//! Trimmed multipoint evaluation and interpolation on grids, plus the
//! reference algorithms they are checked against.

pub mod counting;
mod eval;
mod interp;
mod naive;
mod yates;

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinat::TrimmedIndex;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::poly::normalize_total;

pub use counting::{run_counted, Counted, OpCounter, OpCounts};
pub use eval::{trimmed_eval, trimmed_eval_with};
pub use interp::{trimmed_interp, trimmed_interp_with};
pub use naive::{naive_trimmed_eval, naive_trimmed_eval_with};
pub use yates::{full_cube_position, yates_eval, yates_eval_with};

/// Per-variable node sets `z[i][0..=d]`; the grid point for index `l` is
/// `(z[0][l_1], ..., z[n-1][l_n])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    d: usize,
    modulus: PrimeModulus,
    nodes: Vec<Vec<FieldElement>>,
}

impl Grid {
    /// Checks `p >= d + 1` and that every row has `d + 1` distinct nodes.
    pub fn new(d: usize, modulus: PrimeModulus, nodes: Vec<Vec<FieldElement>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Usage(
                "individual degree d must be at least 1".into(),
            ));
        }
        if modulus.value() < d as u64 + 1 {
            return Err(Error::FieldTooSmall {
                p: modulus.value(),
                needed: d + 1,
            });
        }
        for (var, row) in nodes.iter().enumerate() {
            if row.len() != d + 1 {
                return Err(Error::Shape(format!(
                    "variable {var} has {} nodes, expected d + 1 = {}",
                    row.len(),
                    d + 1
                )));
            }
            if let Some(z) = row.iter().find(|z| z.modulus() != modulus) {
                return Err(Error::ModulusMismatch {
                    left: modulus.value(),
                    right: z.modulus().value(),
                });
            }
            let mut seen = HashMap::with_capacity(row.len());
            for (j, z) in row.iter().enumerate() {
                if let Some(&first) = seen.get(&z.value()) {
                    return Err(Error::DuplicateNode {
                        var,
                        first,
                        second: j,
                    });
                }
                seen.insert(z.value(), j);
            }
        }
        Ok(Self { d, modulus, nodes })
    }

    /// `z[i][j] = j`.
    pub fn sequential(n: usize, d: usize, modulus: PrimeModulus) -> Result<Self> {
        let row: Vec<_> = (0..=d as u64).map(|j| modulus.elem(j)).collect();
        Self::new(d, modulus, vec![row; n])
    }

    /// Each row is `d + 1` distinct residues sampled uniformly with a seeded generator.
    pub fn random(n: usize, d: usize, modulus: PrimeModulus, seed: u64) -> Result<Self> {
        if modulus.value() < d as u64 + 1 {
            return Err(Error::FieldTooSmall {
                p: modulus.value(),
                needed: d + 1,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = modulus.value();
        let nodes = (0..n)
            .map(|_| {
                if p <= (1 << 20) {
                    sample(&mut rng, p as usize, d + 1)
                        .into_iter()
                        .map(|x| modulus.elem(x as u64))
                        .collect()
                } else {
                    distinct_large(&mut rng, p, d + 1)
                        .into_iter()
                        .map(|x| modulus.elem(x))
                        .collect()
                }
            })
            .collect();
        Self::new(d, modulus, nodes)
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn nodes(&self) -> &[Vec<FieldElement>] {
        &self.nodes
    }

    /// Node row of variable `var` (0-based).
    pub fn row(&self, var: usize) -> &[FieldElement] {
        &self.nodes[var]
    }

    pub fn point(&self, l: &TrimmedIndex) -> Vec<FieldElement> {
        l.exponents()
            .iter()
            .zip(&self.nodes)
            .map(|(&e, row)| row[e as usize])
            .collect()
    }

    pub(crate) fn check_compatible(&self, n: usize, d: usize, modulus: PrimeModulus) -> Result<()> {
        if self.n() != n || self.d != d || self.modulus != modulus {
            return Err(Error::Shape(format!(
                "grid has (n={}, d={}, p={}) but the input has (n={n}, d={d}, p={modulus})",
                self.n(),
                self.d,
                self.modulus
            )));
        }
        Ok(())
    }
}

fn distinct_large(rng: &mut ChaCha8Rng, p: u64, count: usize) -> Vec<u64> {
    use rand::Rng;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(0..p);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Values `alpha_l` for every trimmed index `l`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTable {
    n: usize,
    d: usize,
    total: i64,
    modulus: PrimeModulus,
    values: Vec<FieldElement>,
}

impl EvalTable {
    pub fn new(
        n: usize,
        d: usize,
        total: i64,
        modulus: PrimeModulus,
        values: Vec<FieldElement>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::Usage(
                "individual degree d must be at least 1".into(),
            ));
        }
        let total = normalize_total(n, d, total);
        let expected = crate::combinat::ebc_cum(n, total, d)? as usize;
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} values for (n={n}, d={d}, D={total}), got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: v.modulus().value(),
            });
        }
        Ok(Self {
            n,
            d,
            total,
            modulus,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn total(&self) -> i64 {
        self.total
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn into_values(self) -> Vec<FieldElement> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
