//! Embedded invariant suites run by `trimmed-mpe selftest`.

use crate::algo::{
    full_cube_position, naive_trimmed_eval, trimmed_eval, trimmed_interp, yates_eval, EvalTable,
    Grid,
};
use crate::combinat::{ebc, enumerate_trimmed, rank, unrank, EbcTable};
use crate::field::PrimeModulus;
use crate::linalg::{build_vandermonde, lu_decompose};
use crate::poly::TrimmedPoly;

pub const SUITE_NAMES: &[&str] = &[
    "extended-pascal",
    "lu-reconstruction",
    "rank-unrank",
    "yates-consistency",
    "oracle-equivalence",
    "round-trip",
];

type Check = std::result::Result<(), String>;

/// Runs one named suite. Unknown names fail.
pub fn run_suite(name: &str) -> Check {
    match name {
        "extended-pascal" => extended_pascal(),
        "lu-reconstruction" => lu_reconstruction(),
        "rank-unrank" => rank_unrank(),
        "yates-consistency" => yates_consistency(),
        "oracle-equivalence" => oracle_equivalence(),
        "round-trip" => round_trip(),
        other => Err(format!("unknown suite {other:?}")),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn extended_pascal() -> Check {
    for n in 1..=8usize {
        for d in 1..=5usize {
            for k in 0..=(n * d + d) as i64 {
                let lhs = lift(ebc(n, k, d))?;
                let mut rhs = 0;
                for j in 0..=d as i64 {
                    rhs += lift(ebc(n - 1, k - j, d))?;
                }
                ensure(lhs == rhs, || {
                    format!("ebc({n},{k},{d}) = {lhs} but the recurrence gives {rhs}")
                })?;
            }
        }
    }
    Ok(())
}

fn lu_reconstruction() -> Check {
    let f = lift(PrimeModulus::new(65537))?;
    for trial in 0..50u64 {
        let d = 1 + (trial % 8) as usize;
        let grid = lift(Grid::random(1, d, f, trial))?;
        let v = build_vandermonde(&f, grid.row(0));
        let lu = lift(lu_decompose(&f, &v))?;
        ensure(
            lu.lower.is_lower_triangular() && lu.upper.is_upper_triangular(),
            || format!("trial {trial}: factors are not triangular"),
        )?;
        ensure((0..=d).all(|i| lu.lower.get(i, i) == f.one()), || {
            format!("trial {trial}: L is not unit lower triangular")
        })?;
        ensure(lift(lu.lower.mul(&f, &lu.upper))? == v, || {
            format!("trial {trial}: L*U != V")
        })?;
        let mut nodes = grid.row(0).to_vec();
        nodes[d] = nodes[0];
        ensure(
            lu_decompose(&f, &build_vandermonde(&f, &nodes)).is_err(),
            || format!("trial {trial}: duplicated node was not rejected"),
        )?;
    }
    Ok(())
}

fn rank_unrank() -> Check {
    for n in 0..=5usize {
        for d in 1..=3usize {
            for total in 0..=(n * d) as i64 {
                let table = lift(EbcTable::for_instance(n, d, total))?;
                for (r, l) in enumerate_trimmed(n, d, total).iter().enumerate() {
                    ensure(lift(rank(&table, l, n, total))? == r, || {
                        format!("rank({l}) != {r}")
                    })?;
                    ensure(&lift(unrank(&table, r, n, total))? == l, || {
                        format!("unrank({r}) != {l}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn yates_consistency() -> Check {
    let f = lift(PrimeModulus::new(65537))?;
    for n in 1..=3usize {
        for d in 1..=3usize {
            let seed = (n * 10 + d) as u64;
            let total = (n * d) as i64;
            let poly = lift(TrimmedPoly::random(n, d, total, f, seed))?;
            let grid = lift(Grid::random(n, d, f, seed + 1))?;
            let trimmed = lift(trimmed_eval(&poly, &grid))?;
            let full = lift(yates_eval(&poly, &grid))?;
            for (l, v) in enumerate_trimmed(n, d, total).iter().zip(trimmed.values()) {
                ensure(full[full_cube_position(l, d)] == *v, || {
                    format!("n={n} d={d}: trimmed and Yates disagree at {l}")
                })?;
            }
        }
    }
    Ok(())
}

fn small_sweep(mut check: impl FnMut(usize, usize, i64, PrimeModulus, u64) -> Check) -> Check {
    for p in [5u64, 65537] {
        let f = lift(PrimeModulus::new(p))?;
        for n in 1..=3usize {
            for d in 1..=3usize {
                for total in [0, ((n * d) as i64 + 1) / 2, (n * d) as i64] {
                    check(
                        n,
                        d,
                        total,
                        f,
                        p ^ (n * 100 + d * 10) as u64 ^ (total as u64) << 20,
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    small_sweep(|n, d, total, f, seed| {
        let poly = lift(TrimmedPoly::random(n, d, total, f, seed))?;
        let grid = lift(Grid::random(n, d, f, seed + 1))?;
        ensure(
            lift(trimmed_eval(&poly, &grid))? == lift(naive_trimmed_eval(&poly, &grid))?,
            || format!("p={f} n={n} d={d} D={total}: trimmed_eval differs from the oracle"),
        )
    })
}

fn round_trip() -> Check {
    small_sweep(|n, d, total, f, seed| {
        let poly = lift(TrimmedPoly::random(n, d, total, f, seed))?;
        let grid = lift(Grid::random(n, d, f, seed + 1))?;
        let table = lift(trimmed_eval(&poly, &grid))?;
        ensure(lift(trimmed_interp(&table, &grid))? == poly, || {
            format!("p={f} n={n} d={d} D={total}: interp(eval(P)) != P")
        })?;
        let values = lift(TrimmedPoly::random(n, d, total, f, seed + 2))?.into_coeffs();
        let table = lift(EvalTable::new(n, d, total, f, values))?;
        let back = lift(trimmed_eval(&lift(trimmed_interp(&table, &grid))?, &grid))?;
        ensure(back == table, || {
            format!("p={f} n={n} d={d} D={total}: eval(interp(a)) != a")
        })
    })
}
