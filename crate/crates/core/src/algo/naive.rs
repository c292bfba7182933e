use crate::combinat::enumerate_trimmed;
use crate::error::{Error, Result};
use crate::field::FieldOps;
use crate::poly::{eval_terms, TrimmedPoly};

use super::{EvalTable, Grid};

/// Reference evaluator: evaluates every nonzero term at every trimmed grid
/// point, `O(N^2 n log d)` field operations.
pub fn naive_trimmed_eval(poly: &TrimmedPoly, grid: &Grid) -> Result<EvalTable> {
    naive_trimmed_eval_with(&poly.modulus(), poly, grid)
}

pub fn naive_trimmed_eval_with<F: FieldOps>(
    ops: &F,
    poly: &TrimmedPoly,
    grid: &Grid,
) -> Result<EvalTable> {
    let (n, d, total, modulus) = (poly.n(), poly.d(), poly.total(), poly.modulus());
    grid.check_compatible(n, d, modulus)?;
    if ops.modulus() != modulus {
        return Err(Error::ModulusMismatch {
            left: ops.modulus().value(),
            right: modulus.value(),
        });
    }
    let exps = enumerate_trimmed(n, d, total);
    let values = exps
        .iter()
        .map(|l| eval_terms(ops, &exps, poly.coeffs(), &grid.point(l)))
        .collect();
    EvalTable::new(n, d, total, modulus, values)
}
