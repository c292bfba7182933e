use crate::combinat::{for_each_embedded_run, for_each_shifted_rank, EbcTable, WalkScratch};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldOps};
use crate::linalg::{build_vandermonde, lower_truncated_into, lu_decompose, LuFactors};
use crate::poly::TrimmedPoly;

use super::{EvalTable, Grid};

/// Evaluates `poly` at every trimmed grid point `Z_l`, `sum(l) <= D`.
///
/// The result is in canonical order, the same order as the coefficients.
pub fn trimmed_eval(poly: &TrimmedPoly, grid: &Grid) -> Result<EvalTable> {
    trimmed_eval_with(&poly.modulus(), poly, grid)
}

/// [`trimmed_eval`] with an explicit field handle (e.g. a counting one).
pub fn trimmed_eval_with<F: FieldOps>(
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
    let mut values = vec![modulus.zero(); poly.len()];
    if total >= 0 {
        let table = EbcTable::for_instance(n, d, total)?;
        // LU factors depend only on the node row, so every call at one depth shares them.
        let factors: Vec<LuFactors> = (0..n)
            .map(|var| {
                lu_decompose(ops, &build_vandermonde(ops, grid.row(var)))
                    .expect("grid rows hold distinct nodes, so every pivot is nonzero")
            })
            .collect();
        let mut run = Evaluator::new(ops, &table, &factors, n, total);
        run.eval(n, total, poly.coeffs(), &mut values);
    }
    EvalTable::new(n, d, total, modulus, values)
}

struct Evaluator<'a, F> {
    ops: &'a F,
    table: &'a EbcTable,
    factors: &'a [LuFactors],
    /// Level `m` holds `Q_0, ..., Q_d` of the current call with `m` variables.
    scratch: Vec<Vec<FieldElement>>,
    offsets: Vec<Vec<usize>>,
    walk: WalkScratch,
    gather: Vec<FieldElement>,
    prod: Vec<FieldElement>,
}

impl<'a, F: FieldOps> Evaluator<'a, F> {
    fn new(
        ops: &'a F,
        table: &'a EbcTable,
        factors: &'a [LuFactors],
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

    fn eval(&mut self, m: usize, budget: i64, coeffs: &[FieldElement], out: &mut [FieldElement]) {
        if budget < 0 {
            return;
        }
        let d = self.table.d();
        let budget = budget.min((m * d) as i64);
        if m == 0 {
            out[0] = coeffs[0];
            return;
        }
        let ops = self.ops;
        let table = self.table;
        let factors = self.factors;
        let lu = &factors[m - 1];
        // Blocks i > top have negative budget and are empty.
        let top = (d as i64).min(budget) as usize;

        let mut off = std::mem::take(&mut self.offsets[m]);
        off[0] = 0;
        for i in 0..=d {
            off[i + 1] = off[i] + table.size(m - 1, budget - i as i64);
        }

        // Q_j = sum_{i >= j} U[j][i] * P_i. P_i has budget D - i <= D - j and
        // is embedded into Q_j's layout run by run.
        let mut q = std::mem::take(&mut self.scratch[m]);
        let len = off[d + 1];
        q[..len].fill(ops.zero());
        for j in 0..=top {
            let qj = &mut q[off[j]..off[j + 1]];
            for i in j..=top {
                let c = lu.upper.get(j, i);
                let pi = &coeffs[off[i]..off[i + 1]];
                for_each_embedded_run(
                    table,
                    m - 1,
                    budget - i as i64,
                    budget - j as i64,
                    |s, b, l| {
                        for (y, &x) in qj[b..b + l].iter_mut().zip(&pi[s..s + l]) {
                            *y = ops.mul_add(*y, c, x);
                        }
                    },
                );
            }
        }

        for j in 0..=top {
            self.eval(
                m - 1,
                budget - j as i64,
                &q[off[j]..off[j + 1]],
                &mut out[off[j]..off[j + 1]],
            );
        }
        self.scratch[m] = q;

        // For each l' with k = min(d, D - sum(l')):
        // P(Z_(l', j)) = sum_{i <= j} L[j][i] * Q_i(Z_l'), j = 0..=k.
        // Block j of `out` holds Q_j's values and is overwritten in place.
        let Self {
            walk, gather, prod, ..
        } = &mut *self;
        for_each_shifted_rank(table, m - 1, budget, walk, |ranks| {
            let k = ranks.len() - 1;
            for (i, &r) in ranks.iter().enumerate() {
                gather[i] = out[off[i] + r];
            }
            lower_truncated_into(ops, &lu.lower, &gather[..=k], &mut prod[..=k]);
            for (j, &r) in ranks.iter().enumerate() {
                out[off[j] + r] = prod[j];
            }
        });
        self.offsets[m] = off;
    }
}
