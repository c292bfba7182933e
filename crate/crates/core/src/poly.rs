//! Dense trimmed polynomials.
//!
//! A [`TrimmedPoly`] with parameters `(n, d, D)` stores one coefficient per
//! index of `enumerate_trimmed(n, d, D)`, in canonical order. [`SparsePoly`]
//! is the term-list form used for I/O.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::{enumerate_trimmed, rank, EbcTable, TrimmedIndex};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldOps, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimmedPoly {
    n: usize,
    d: usize,
    total: i64,
    modulus: PrimeModulus,
    coeffs: Vec<FieldElement>,
}

/// Normalizes a total degree bound to `min(total, n*d)`; negative budgets stay negative.
pub fn normalize_total(n: usize, d: usize, total: i64) -> i64 {
    total.min((n * d) as i64)
}

fn check_degree(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Usage(
            "individual degree d must be at least 1".into(),
        ));
    }
    Ok(())
}

impl TrimmedPoly {
    pub fn new(
        n: usize,
        d: usize,
        total: i64,
        modulus: PrimeModulus,
        coeffs: Vec<FieldElement>,
    ) -> Result<Self> {
        check_degree(d)?;
        let total = normalize_total(n, d, total);
        let expected = crate::combinat::ebc_cum(n, total, d)? as usize;
        if coeffs.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} coefficients for (n={n}, d={d}, D={total}), got {}",
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: c.modulus().value(),
            });
        }
        Ok(Self {
            n,
            d,
            total,
            modulus,
            coeffs,
        })
    }

    pub fn zero(n: usize, d: usize, total: i64, modulus: PrimeModulus) -> Result<Self> {
        check_degree(d)?;
        let total = normalize_total(n, d, total);
        let len = crate::combinat::ebc_cum(n, total, d)? as usize;
        Ok(Self {
            n,
            d,
            total,
            modulus,
            coeffs: vec![modulus.zero(); len],
        })
    }

    /// Coefficients drawn uniformly from `F_p` by a ChaCha generator seeded with `seed`.
    pub fn random(
        n: usize,
        d: usize,
        total: i64,
        modulus: PrimeModulus,
        seed: u64,
    ) -> Result<Self> {
        let mut poly = Self::zero(n, d, total, modulus)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = modulus.value();
        for c in &mut poly.coeffs {
            *c = modulus.elem(rng.gen_range(0..p));
        }
        Ok(poly)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The normalized total degree bound.
    pub fn total(&self) -> i64 {
        self.total
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [FieldElement] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub(crate) fn table(&self) -> Result<EbcTable> {
        EbcTable::for_instance(self.n, self.d, self.total)
    }

    /// Builds the dense form; every term must be in range and appear once.
    pub fn from_sparse(s: &SparsePoly) -> Result<Self> {
        let mut poly = Self::zero(s.n, s.d, s.total, s.modulus)?;
        if poly.is_empty() {
            if let Some((l, _)) = s.terms.first() {
                return Err(Error::Validation(format!(
                    "term {l}: the total degree bound {} admits no monomials",
                    s.total
                )));
            }
            return Ok(poly);
        }
        let table = poly.table()?;
        let mut seen = HashSet::new();
        for (l, c) in &s.terms {
            l.validate(s.n, s.d, poly.total)
                .map_err(|e| Error::Validation(format!("term {l}: {e}")))?;
            if !seen.insert(l) {
                return Err(Error::Validation(format!(
                    "term {l}: duplicate exponent vector"
                )));
            }
            if c.modulus() != s.modulus {
                return Err(Error::Validation(format!(
                    "term {l}: coefficient belongs to F_{}, expected F_{}",
                    c.modulus(),
                    s.modulus
                )));
            }
            poly.coeffs[rank(&table, l, s.n, poly.total)?] = *c;
        }
        Ok(poly)
    }

    /// Nonzero terms in canonical order.
    pub fn to_sparse(&self) -> SparsePoly {
        let terms = enumerate_trimmed(self.n, self.d, self.total)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l, *c))
            .collect();
        SparsePoly {
            n: self.n,
            d: self.d,
            total: self.total,
            modulus: self.modulus,
            terms,
        }
    }

    /// Writes `P = sum_i P_i * X_n^i` and returns `P_0, ..., P_d`; `P_i` has
    /// `n - 1` variables and total degree bound `D - i`.
    pub fn split_top(&self) -> Result<Vec<TrimmedPoly>> {
        if self.n == 0 {
            return Err(Error::Usage(
                "cannot split a polynomial in zero variables".into(),
            ));
        }
        let table = self.table()?;
        let mut parts = Vec::with_capacity(self.d + 1);
        let mut at = 0;
        for i in 0..=self.d as i64 {
            let len = table.size(self.n - 1, self.total - i);
            parts.push(TrimmedPoly {
                n: self.n - 1,
                d: self.d,
                total: normalize_total(self.n - 1, self.d, self.total - i),
                modulus: self.modulus,
                coeffs: self.coeffs[at..at + len].to_vec(),
            });
            at += len;
        }
        debug_assert_eq!(at, self.coeffs.len());
        Ok(parts)
    }

    /// Inverse of [`split_top`](Self::split_top): `sum_i parts[i] * X_n^i`.
    pub fn join_top(parts: &[TrimmedPoly], total: i64) -> Result<TrimmedPoly> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("join_top needs d + 1 parts".into()))?;
        let (m, d, modulus) = (first.n, first.d, first.modulus);
        if parts.len() != d + 1 {
            return Err(Error::Shape(format!(
                "join_top needs d + 1 = {} parts, got {}",
                d + 1,
                parts.len()
            )));
        }
        let n = m + 1;
        let total = normalize_total(n, d, total);
        let mut coeffs = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            let want = normalize_total(m, d, total - i as i64);
            let want_len = crate::combinat::ebc_cum(m, want, d)? as usize;
            if part.n != m || part.d != d || part.modulus != modulus {
                return Err(Error::Shape(format!("part {i} has mismatched parameters")));
            }
            if part.coeffs.len() != want_len {
                return Err(Error::Shape(format!(
                    "part {i} has total degree bound {}, expected {want}",
                    part.total
                )));
            }
            coeffs.extend_from_slice(&part.coeffs);
        }
        TrimmedPoly::new(n, d, total, modulus, coeffs)
    }

    /// Term-by-term evaluation at `x` with exponentiation by squaring.
    pub fn eval_point(&self, x: &[FieldElement]) -> Result<FieldElement> {
        naive_eval_point(&self.modulus, self, x)
    }
}

/// Independent evaluation oracle: `sum_l c_l * prod_i x_i^{l_i}`, skipping
/// zero coefficients. Each nonzero term costs `n` multiplications plus those
/// of the `n` powers.
pub fn naive_eval_point<F: FieldOps>(
    ops: &F,
    poly: &TrimmedPoly,
    x: &[FieldElement],
) -> Result<FieldElement> {
    if x.len() != poly.n {
        return Err(Error::Shape(format!(
            "point has {} coordinates, polynomial has {} variables",
            x.len(),
            poly.n
        )));
    }
    if let Some(xi) = x.iter().find(|xi| xi.modulus() != poly.modulus) {
        return Err(Error::ModulusMismatch {
            left: poly.modulus.value(),
            right: xi.modulus().value(),
        });
    }
    let exps = enumerate_trimmed(poly.n, poly.d, poly.total);
    Ok(eval_terms(ops, &exps, &poly.coeffs, x))
}

pub(crate) fn eval_terms<F: FieldOps>(
    ops: &F,
    exps: &[TrimmedIndex],
    coeffs: &[FieldElement],
    x: &[FieldElement],
) -> FieldElement {
    let mut acc = ops.zero();
    for (l, &c) in exps.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let mut term = c;
        for (&xi, &e) in x.iter().zip(l.exponents()) {
            term = ops.mul(term, ops.pow(xi, e as u64));
        }
        acc = ops.add(acc, term);
    }
    acc
}

/// Term-list form of a trimmed polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub n: usize,
    pub d: usize,
    pub total: i64,
    pub modulus: PrimeModulus,
    pub terms: Vec<(TrimmedIndex, FieldElement)>,
}

impl SparsePoly {
    pub fn new(n: usize, d: usize, total: i64, modulus: PrimeModulus) -> Self {
        Self {
            n,
            d,
            total,
            modulus,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, exps: &[u32], coeff: u64) -> Self {
        self.terms
            .push((TrimmedIndex(exps.to_vec()), self.modulus.elem(coeff)));
        self
    }
}
