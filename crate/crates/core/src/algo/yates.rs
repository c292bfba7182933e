use crate::combinat::{enumerate_trimmed, TrimmedIndex};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldOps};
use crate::linalg::{build_vandermonde, SquareMatrix};
use crate::poly::TrimmedPoly;

use super::Grid;

/// Mixed-radix position of `l` in the full cube `{0..=d}^n`, with `l_1` least significant.
pub fn full_cube_position(l: &TrimmedIndex, d: usize) -> usize {
    l.exponents()
        .iter()
        .rev()
        .fold(0usize, |acc, &e| acc * (d + 1) + e as usize)
}

/// Yates' full-grid evaluation of a polynomial with `D = n*d`.
///
/// Returns `P(Z_l)` for all `(d+1)^n` grid points, indexed by [`full_cube_position`].
pub fn yates_eval(poly: &TrimmedPoly, grid: &Grid) -> Result<Vec<FieldElement>> {
    yates_eval_with(&poly.modulus(), poly, grid)
}

pub fn yates_eval_with<F: FieldOps>(
    ops: &F,
    poly: &TrimmedPoly,
    grid: &Grid,
) -> Result<Vec<FieldElement>> {
    let (n, d) = (poly.n(), poly.d());
    grid.check_compatible(n, d, poly.modulus())?;
    if poly.total() != (n * d) as i64 {
        return Err(Error::Usage(format!(
            "full-grid evaluation needs D = n*d = {}, got D = {}",
            n * d,
            poly.total()
        )));
    }
    let mut coeffs = vec![ops.zero(); poly.len()];
    for (l, &c) in enumerate_trimmed(n, d, poly.total())
        .iter()
        .zip(poly.coeffs())
    {
        coeffs[full_cube_position(l, d)] = c;
    }
    let vandermonde: Vec<SquareMatrix> = (0..n)
        .map(|i| build_vandermonde(ops, grid.row(i)))
        .collect();
    let mut out = vec![ops.zero(); coeffs.len()];
    kronecker(ops, &vandermonde, n, d, &coeffs, &mut out);
    Ok(out)
}

/// `out = (V_1 (x) ... (x) V_m) a` by splitting on the most significant variable.
fn kronecker<F: FieldOps>(
    ops: &F,
    vandermonde: &[SquareMatrix],
    m: usize,
    d: usize,
    a: &[FieldElement],
    out: &mut [FieldElement],
) {
    if m == 0 {
        out[0] = a[0];
        return;
    }
    let block = a.len() / (d + 1);
    let mut parts = vec![ops.zero(); a.len()];
    for (src, dst) in a.chunks_exact(block).zip(parts.chunks_exact_mut(block)) {
        kronecker(ops, vandermonde, m - 1, d, src, dst);
    }
    let v = &vandermonde[m - 1];
    for q in 0..block {
        for j in 0..=d {
            let mut acc = ops.zero();
            for i in 0..=d {
                acc = ops.mul_add(acc, v.get(j, i), parts[i * block + q]);
            }
            out[j * block + q] = acc;
        }
    }
}
