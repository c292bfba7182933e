//! Small dense matrices over `F_p`: Vandermonde construction, pivot-free
//! triangular factorizations, inversion and truncated triangular products.

use serde::Serialize;

use crate::combinat::for_each_embedded_run;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldOps, PrimeModulus};
use crate::poly::TrimmedPoly;

/// Row-major `m x m` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    size: usize,
    entries: Vec<FieldElement>,
}

impl SquareMatrix {
    pub fn from_entries(size: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::Shape(format!(
                "a {size}x{size} matrix needs {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        Ok(Self { size, entries })
    }

    /// Builds a matrix from small integer rows reduced modulo `p`.
    pub fn from_rows(modulus: PrimeModulus, rows: &[&[u64]]) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::Shape(
                    "rows must all have length equal to the row count".into(),
                ));
            }
            entries.extend(row.iter().map(|&v| modulus.elem(v)));
        }
        Ok(Self { size, entries })
    }

    pub fn identity(size: usize, modulus: PrimeModulus) -> Self {
        let mut entries = vec![modulus.zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = modulus.one();
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.size + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.size + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| self.get(i, j).is_zero()))
    }

    pub fn mul<F: FieldOps>(&self, ops: &F, other: &SquareMatrix) -> Result<SquareMatrix> {
        if self.size != other.size {
            return Err(Error::Shape(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.size, other.size
            )));
        }
        let m = self.size;
        let mut out = vec![ops.zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = ops.zero();
                for t in 0..m {
                    acc = ops.mul_add(acc, self.get(i, t), other.get(t, j));
                }
                out[i * m + j] = acc;
            }
        }
        Ok(SquareMatrix {
            size: m,
            entries: out,
        })
    }

    pub fn mul_vec<F: FieldOps>(&self, ops: &F, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.size {
            return Err(Error::Shape(format!(
                "vector of length {} against a {}x{} matrix",
                v.len(),
                self.size,
                self.size
            )));
        }
        Ok((0..self.size)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ops.zero(), |acc, (&a, &x)| ops.mul_add(acc, a, x))
            })
            .collect())
    }

    /// `J M J` with `J` the exchange matrix (reverses row and column order).
    fn reversed(&self) -> SquareMatrix {
        let m = self.size;
        let mut out = self.clone();
        for i in 0..m {
            for j in 0..m {
                out.set(i, j, self.get(m - 1 - i, m - 1 - j));
            }
        }
        out
    }

    /// Rows as JSON arrays of decimal strings, for debug dumps.
    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.size)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
            .collect();
        serde_json::json!(rows)
    }
}

/// Debug view of a pair of factors.
#[derive(Debug, Serialize)]
struct FactorDump {
    lower: serde_json::Value,
    upper: serde_json::Value,
}

/// `M = lower * upper` with `lower` unit lower triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuFactors {
    pub lower: SquareMatrix,
    pub upper: SquareMatrix,
}

/// `M = upper * lower` with `upper` unit upper triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlFactors {
    pub upper: SquareMatrix,
    pub lower: SquareMatrix,
}

impl LuFactors {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FactorDump {
            lower: self.lower.to_json_rows(),
            upper: self.upper.to_json_rows(),
        })
        .expect("plain JSON values")
    }
}

/// `V[i][j] = nodes[i]^j`.
pub fn build_vandermonde<F: FieldOps>(ops: &F, nodes: &[FieldElement]) -> SquareMatrix {
    let m = nodes.len();
    let mut entries = Vec::with_capacity(m * m);
    for &z in nodes {
        for j in 0..m {
            entries.push(ops.pow(z, j as u64));
        }
    }
    SquareMatrix { size: m, entries }
}

/// Doolittle factorization by Gaussian elimination without pivoting.
///
/// Fails with [`Error::SingularOrNonLu`] at the first zero pivot. For a
/// Vandermonde matrix this happens exactly when two nodes coincide.
pub fn lu_decompose<F: FieldOps>(ops: &F, m: &SquareMatrix) -> Result<LuFactors> {
    let size = m.size;
    let mut upper = m.clone();
    let mut lower = SquareMatrix::identity(size, ops.modulus());
    for c in 0..size {
        let pivot = upper.get(c, c);
        if pivot.is_zero() {
            return Err(Error::SingularOrNonLu { step: c });
        }
        let pivot_inv = ops.inv(pivot)?;
        for r in c + 1..size {
            let below = upper.get(r, c);
            if below.is_zero() {
                continue;
            }
            let factor = ops.mul(below, pivot_inv);
            lower.set(r, c, factor);
            upper.set(r, c, ops.zero());
            for j in c + 1..size {
                let v = ops.sub(upper.get(r, j), ops.mul(factor, upper.get(c, j)));
                upper.set(r, j, v);
            }
        }
    }
    Ok(LuFactors { lower, upper })
}

/// Pivot-free factorization `M = upper * lower`, obtained from the LU
/// factorization of the index-reversed matrix.
pub fn ul_decompose<F: FieldOps>(ops: &F, m: &SquareMatrix) -> Result<UlFactors> {
    let lu = lu_decompose(ops, &m.reversed())?;
    Ok(UlFactors {
        upper: lu.lower.reversed(),
        lower: lu.upper.reversed(),
    })
}

/// Gauss-Jordan inversion with partial pivoting.
pub fn invert<F: FieldOps>(ops: &F, m: &SquareMatrix) -> Result<SquareMatrix> {
    let size = m.size;
    let mut a = m.clone();
    let mut inv = SquareMatrix::identity(size, ops.modulus());
    for c in 0..size {
        let pivot_row = (c..size)
            .find(|&r| !a.get(r, c).is_zero())
            .ok_or(Error::Singular)?;
        if pivot_row != c {
            for j in 0..size {
                a.entries.swap(c * size + j, pivot_row * size + j);
                inv.entries.swap(c * size + j, pivot_row * size + j);
            }
        }
        let scale = ops.inv(a.get(c, c))?;
        for j in 0..size {
            a.set(c, j, ops.mul(a.get(c, j), scale));
            inv.set(c, j, ops.mul(inv.get(c, j), scale));
        }
        for r in 0..size {
            if r == c {
                continue;
            }
            let factor = a.get(r, c);
            if factor.is_zero() {
                continue;
            }
            for j in 0..size {
                a.set(r, j, ops.sub(a.get(r, j), ops.mul(factor, a.get(c, j))));
                inv.set(r, j, ops.sub(inv.get(r, j), ops.mul(factor, inv.get(c, j))));
            }
        }
    }
    Ok(inv)
}

/// Entries a triangular matrix can act on: scalars, or polynomials viewed as
/// coefficient vectors.
pub trait LinearEntry: Sized {
    /// The zero entry with the same shape as `self`.
    fn zero_like(&self) -> Self;

    /// `self += c * other`. For polynomials, `other`'s support must embed into `self`'s.
    fn add_scaled<F: FieldOps>(&mut self, ops: &F, c: FieldElement, other: &Self) -> Result<()>;
}

impl LinearEntry for FieldElement {
    fn zero_like(&self) -> Self {
        self.modulus().zero()
    }

    fn add_scaled<F: FieldOps>(&mut self, ops: &F, c: FieldElement, other: &Self) -> Result<()> {
        *self = ops.mul_add(*self, c, *other);
        Ok(())
    }
}

impl LinearEntry for TrimmedPoly {
    fn zero_like(&self) -> Self {
        TrimmedPoly::zero(self.n(), self.d(), self.total(), self.modulus())
            .expect("shape of an existing polynomial")
    }

    fn add_scaled<F: FieldOps>(&mut self, ops: &F, c: FieldElement, other: &Self) -> Result<()> {
        if other.n() != self.n() || other.d() != self.d() || other.modulus() != self.modulus() {
            return Err(Error::Shape("polynomials with different parameters".into()));
        }
        if other.total() > self.total() {
            return Err(Error::Shape(format!(
                "cannot add a degree-{} polynomial into a degree-{} slot",
                other.total(),
                self.total()
            )));
        }
        let table = self.table()?;
        let (small, big, m) = (other.total(), self.total(), self.n());
        let src = other.coeffs();
        let dst = self.coeffs_mut();
        for_each_embedded_run(&table, m, small, big, |s, b, len| {
            for (y, &x) in dst[b..b + len].iter_mut().zip(&src[s..s + len]) {
                *y = ops.mul_add(*y, c, x);
            }
        });
        Ok(())
    }
}

fn check_truncation(size: usize, len: usize, k: usize) -> Result<()> {
    if k >= size || len < k + 1 {
        return Err(Error::Shape(format!(
            "truncation k = {k} needs k < {size} and at least {} entries, got {len}",
            k + 1
        )));
    }
    Ok(())
}

/// `out[i] = sum_{j=i..=k} U[i][j] * v[j]` for `0 <= i <= k`.
pub fn apply_upper_truncated<F: FieldOps, T: LinearEntry>(
    ops: &F,
    upper: &SquareMatrix,
    v: &[T],
    k: usize,
) -> Result<Vec<T>> {
    check_truncation(upper.size, v.len(), k)?;
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut acc = v[i].zero_like();
        for (j, x) in v.iter().enumerate().take(k + 1).skip(i) {
            acc.add_scaled(ops, upper.get(i, j), x)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `out[i] = sum_{j=0..=i} L[i][j] * v[j]` for `0 <= i <= k`.
pub fn apply_lower_truncated<F: FieldOps, T: LinearEntry>(
    ops: &F,
    lower: &SquareMatrix,
    v: &[T],
    k: usize,
) -> Result<Vec<T>> {
    check_truncation(lower.size, v.len(), k)?;
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut acc = v[i].zero_like();
        for (j, x) in v.iter().enumerate().take(i + 1) {
            acc.add_scaled(ops, lower.get(i, j), x)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Scalar form of [`apply_lower_truncated`] writing into `out`, with `k = out.len() - 1`.
#[inline]
pub(crate) fn lower_truncated_into<F: FieldOps>(
    ops: &F,
    lower: &SquareMatrix,
    v: &[FieldElement],
    out: &mut [FieldElement],
) {
    for (i, o) in out.iter_mut().enumerate() {
        let row = lower.row(i);
        let mut acc = ops.zero();
        for j in 0..=i {
            acc = ops.mul_add(acc, row[j], v[j]);
        }
        *o = acc;
    }
}
