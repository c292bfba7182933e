use crate::combinat::{for_each_embedded_run, for_each_shifted_rank, EbcTable, WalkScratch};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldOps};
use crate::linalg::{build_vandermonde, invert, lower_truncated_into, ul_decompose, UlFactors};
use crate::poly::TrimmedPoly;

use super::{EvalTable, Grid};

/// The unique polynomial with individual degree `d` and total degree `D`
/// taking the value `table[l]` at every trimmed grid point `Z_l`.
pub fn trimmed_interp(table: &EvalTable, grid: &Grid) -> Result<TrimmedPoly> {
    trimmed_interp_with(&table.modulus(), table, grid)
}

/// [`trimmed_interp`] with an explicit field handle.
///
/// Per variable, `V^-1 = A * B` with `A` upper and `B` lower triangular. The
/// values are mapped through the truncated lower factor (each output only
/// needs values at indices up to its own), the `d + 1` slices are
/// interpolated recursively, and the upper factor recombines the slices into
/// `P_0, ..., P_d`, keeping the budget of `P_i` at `D - i`.
pub fn trimmed_interp_with<F: FieldOps>(
    ops: &F,
    evals: &EvalTable,
    grid: &Grid,
) -> Result<TrimmedPoly> {
    let (n, d, total, modulus) = (evals.n(), evals.d(), evals.total(), evals.modulus());
    grid.check_compatible(n, d, modulus)?;
    if ops.modulus() != modulus {
        return Err(Error::ModulusMismatch {
            left: ops.modulus().value(),
            right: modulus.value(),
        });
    }
    let mut coeffs = vec![modulus.zero(); evals.len()];
    if total >= 0 {
        let table = EbcTable::for_instance(n, d, total)?;
        let factors: Vec<UlFactors> = (0..n)
            .map(|var| {
                let v = build_vandermonde(ops, grid.row(var));
                let v_inv =
                    invert(ops, &v).expect("Vandermonde matrix on distinct nodes is invertible");
                ul_decompose(ops, &v_inv)
                    .expect("inverse Vandermonde matrix has a pivot-free UL factorization")
            })
            .collect();
        let mut run = Interpolator::new(ops, &table, &factors, n, total);
        run.interp(n, total, evals.values(), &mut coeffs);
    }
    TrimmedPoly::new(n, d, total, modulus, coeffs)
}

struct Interpolator<'a, F> {
    ops: &'a F,
    table: &'a EbcTable,
    factors: &'a [UlFactors],
    /// Level `m` holds the transformed values `beta` of the current call.
    scratch: Vec<Vec<FieldElement>>,
    offsets: Vec<Vec<usize>>,
    walk: WalkScratch,
    gather: Vec<FieldElement>,
    prod: Vec<FieldElement>,
}

impl<'a, F: FieldOps> Interpolator<'a, F> {
    fn new(
        ops: &'a F,
        table: &'a EbcTable,
        factors: &'a [UlFactors],
        n: usize,
        total: i64,
    ) -> Self {
        let d = table.d();
        let zero = ops.zero();
        Self {
            ops,
            table,
            factors,
            scratch: (0..=n).map(|m| vec![zero; table.size(m, total)]).collect(),
            offsets: vec![vec![0; d + 2]; n + 1],
            walk: WalkScratch::default(),
            gather: vec![zero; d + 1],
            prod: vec![zero; d + 1],
        }
    }

    fn interp(&mut self, m: usize, budget: i64, values: &[FieldElement], out: &mut [FieldElement]) {
        if budget < 0 {
            return;
        }
        let d = self.table.d();
        let budget = budget.min((m * d) as i64);
        if m == 0 {
            out[0] = values[0];
            return;
        }
        let ops = self.ops;
        let table = self.table;
        let factors = self.factors;
        let ul = &factors[m - 1];
        let top = (d as i64).min(budget) as usize;

        let mut off = std::mem::take(&mut self.offsets[m]);
        off[0] = 0;
        for i in 0..=d {
            off[i + 1] = off[i] + table.size(m - 1, budget - i as i64);
        }

        // beta_(l', j) = sum_{h <= j} B[j][h] * alpha_(l', h) for j <= k.
        let mut beta = std::mem::take(&mut self.scratch[m]);
        let len = off[d + 1];
        beta[..len].copy_from_slice(&values[..len]);
        {
            let Self {
                walk, gather, prod, ..
            } = &mut *self;
            for_each_shifted_rank(table, m - 1, budget, walk, |ranks| {
                let k = ranks.len() - 1;
                for (h, &r) in ranks.iter().enumerate() {
                    gather[h] = beta[off[h] + r];
                }
                lower_truncated_into(ops, &ul.lower, &gather[..=k], &mut prod[..=k]);
                for (j, &r) in ranks.iter().enumerate() {
                    beta[off[j] + r] = prod[j];
                }
            });
        }

        for j in 0..=top {
            self.interp(
                m - 1,
                budget - j as i64,
                &beta[off[j]..off[j + 1]],
                &mut out[off[j]..off[j + 1]],
            );
        }
        self.scratch[m] = beta;

        // P_i = sum_{j >= i} A[i][j] * Q_j, in place: block i only reads blocks j >= i,
        // and blocks are finalized in increasing order.
        for i in 0..=top {
            let (head, tail) = out.split_at_mut(off[i + 1]);
            let pi = &mut head[off[i]..];
            let diag = ul.upper.get(i, i);
            for y in pi.iter_mut() {
                *y = ops.mul(diag, *y);
            }
            for j in i + 1..=top {
                let c = ul.upper.get(i, j);
                let qj = &tail[off[j] - off[i + 1]..off[j + 1] - off[i + 1]];
                for_each_embedded_run(
                    table,
                    m - 1,
                    budget - j as i64,
                    budget - i as i64,
                    |s, b, l| {
                        for (y, &x) in pi[b..b + l].iter_mut().zip(&qj[s..s + l]) {
                            *y = ops.mul_add(*y, c, x);
                        }
                    },
                );
            }
        }
        self.offsets[m] = off;
    }
}
