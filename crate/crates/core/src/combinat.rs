//! Extended binomial coefficients and the canonical trimmed index order.
//!
//! `ebc(n, k, d)` counts exponent vectors in `{0..=d}^n` summing to `k`, and
//! `ebc_cum(n, D, d)` counts those summing to at most `D`. Trimmed index sets
//! are enumerated in *last-variable-major* order: primarily by the last
//! exponent ascending, then recursively on the remaining prefix. Under this
//! order every slice `P_i` of a polynomial (the coefficient of `X_n^i`) is a
//! contiguous block, and so is every block of evaluations with fixed last
//! coordinate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts above this bound are rejected; such instances cannot be materialized anyway.
pub const COUNT_LIMIT: u64 = 1 << 63;

/// Memoized table of `ebc(m, k, d)` and `ebc_cum(m, k, d)` for
/// `0 <= m <= n_max`, `0 <= k <= total_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EbcTable {
    n_max: usize,
    d: usize,
    total_max: usize,
    exact: Vec<u64>,
    cumulative: Vec<u64>,
}

impl EbcTable {
    pub fn new(n_max: usize, d: usize, total_max: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Usage(
                "individual degree d must be at least 1".into(),
            ));
        }
        let width = total_max + 1;
        let cells = (n_max + 1)
            .checked_mul(width)
            .ok_or_else(|| Error::Capacity("table dimensions overflow".into()))?;
        let mut exact = vec![0u64; cells];
        let mut cumulative = vec![0u64; cells];
        exact[0] = 1;
        for m in 1..=n_max {
            for k in 0..=total_max {
                let mut sum = 0u64;
                for j in 0..=d.min(k) {
                    sum = sum
                        .checked_add(exact[(m - 1) * width + k - j])
                        .ok_or_else(|| overflow(m, k, d))?;
                }
                exact[m * width + k] = sum;
            }
        }
        for m in 0..=n_max {
            let mut run = 0u64;
            for k in 0..=total_max {
                run = run
                    .checked_add(exact[m * width + k])
                    .filter(|&r| r <= COUNT_LIMIT)
                    .ok_or_else(|| overflow(m, k, d))?;
                cumulative[m * width + k] = run;
            }
        }
        Ok(Self {
            n_max,
            d,
            total_max,
            exact,
            cumulative,
        })
    }

    /// Table covering every budget an `(n, d, total)` instance and its
    /// recursion can ask for.
    pub fn for_instance(n: usize, d: usize, total: i64) -> Result<Self> {
        let total = total.clamp(0, (n * d) as i64) as usize;
        Self::new(n, d, total)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn total_max(&self) -> usize {
        self.total_max
    }

    /// `ebc(m, k, d)`; zero outside `0 <= k <= m*d`.
    pub fn exact(&self, m: usize, k: i64) -> u64 {
        assert!(
            m <= self.n_max,
            "m = {m} exceeds table bound {}",
            self.n_max
        );
        if k < 0 || k as usize > m * self.d {
            return 0;
        }
        let k = k as usize;
        assert!(
            k <= self.total_max,
            "k = {k} exceeds table bound {}",
            self.total_max
        );
        self.exact[m * (self.total_max + 1) + k]
    }

    /// `ebc_cum(m, k, d)`; zero for negative `k`, `(d+1)^m` for `k >= m*d`.
    pub fn cumulative(&self, m: usize, k: i64) -> u64 {
        assert!(
            m <= self.n_max,
            "m = {m} exceeds table bound {}",
            self.n_max
        );
        if k < 0 {
            return 0;
        }
        let k = (k as usize).min(m * self.d);
        assert!(
            k <= self.total_max,
            "k = {k} exceeds table bound {}",
            self.total_max
        );
        self.cumulative[m * (self.total_max + 1) + k]
    }

    /// Length of the trimmed layout `(m, budget)` as a `usize`.
    #[inline]
    pub fn size(&self, m: usize, budget: i64) -> usize {
        self.cumulative(m, budget) as usize
    }
}

fn overflow(m: usize, k: usize, d: usize) -> Error {
    Error::Capacity(format!(
        "extended binomial count for m={m}, k={k}, d={d} exceeds 2^63"
    ))
}

/// `ebc(n, k, d)`: the number of `l` in `{0..=d}^n` with `sum(l) = k`.
pub fn ebc(n: usize, k: i64, d: usize) -> Result<u64> {
    if k < 0 || k as usize > n * d {
        if d == 0 {
            return Err(Error::Usage(
                "individual degree d must be at least 1".into(),
            ));
        }
        return Ok(0);
    }
    Ok(EbcTable::new(n, d, k as usize)?.exact(n, k))
}

/// `ebc_cum(n, total, d)`: the number of `l` in `{0..=d}^n` with `sum(l) <= total`.
pub fn ebc_cum(n: usize, total: i64, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::Usage(
            "individual degree d must be at least 1".into(),
        ));
    }
    if total < 0 {
        return Ok(0);
    }
    Ok(EbcTable::for_instance(n, d, total)?.cumulative(n, total))
}

/// An exponent vector `(l_1, ..., l_n)`; indexes both monomials and grid points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrimmedIndex(pub Vec<u32>);

impl TrimmedIndex {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Checks `l_i <= d` and `sum(l) <= total`.
    pub fn validate(&self, n: usize, d: usize, total: i64) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidIndex(format!(
                "{self} has {} entries, expected {n}",
                self.0.len()
            )));
        }
        if let Some(i) = self.0.iter().position(|&e| e as usize > d) {
            return Err(Error::InvalidIndex(format!(
                "{self}: exponent {} of variable {} exceeds individual degree {d}",
                self.0[i],
                i + 1
            )));
        }
        if self.total() as i64 > total {
            return Err(Error::InvalidIndex(format!(
                "{self}: total degree {} exceeds bound {total}",
                self.total()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for TrimmedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All of `{l in {0..=d}^n : sum(l) <= total}` in canonical order.
pub fn enumerate_trimmed(n: usize, d: usize, total: i64) -> Vec<TrimmedIndex> {
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let mut buf = vec![0u32; n];
    enumerate_into(n, d, total, &mut buf, &mut out);
    out
}

fn enumerate_into(m: usize, d: usize, budget: i64, buf: &mut [u32], out: &mut Vec<TrimmedIndex>) {
    if m == 0 {
        out.push(TrimmedIndex(buf.to_vec()));
        return;
    }
    for c in 0..=(d as i64).min(budget) {
        buf[m - 1] = c as u32;
        enumerate_into(m - 1, d, budget - c, buf, out);
    }
    buf[m - 1] = 0;
}

/// Position of `index` in `enumerate_trimmed(n, d, total)`.
pub fn rank(table: &EbcTable, index: &TrimmedIndex, n: usize, total: i64) -> Result<usize> {
    let d = table.d();
    index.validate(n, d, total)?;
    let mut budget = total;
    let mut pos = 0u64;
    for m in (1..=n).rev() {
        let c = index.0[m - 1] as i64;
        for t in 0..c {
            pos += table.cumulative(m - 1, budget - t);
        }
        budget -= c;
    }
    Ok(pos as usize)
}

/// The `r`-th index of `enumerate_trimmed(n, d, total)`.
pub fn unrank(table: &EbcTable, r: usize, n: usize, total: i64) -> Result<TrimmedIndex> {
    let len = table.cumulative(n, total);
    if r as u64 >= len {
        return Err(Error::InvalidIndex(format!(
            "rank {r} out of range for a trimmed set of size {len}"
        )));
    }
    let d = table.d() as i64;
    let mut rem = r as u64;
    let mut budget = total;
    let mut exps = vec![0u32; n];
    for m in (1..=n).rev() {
        let mut c = 0i64;
        loop {
            let block = table.cumulative(m - 1, budget - c);
            if rem < block {
                break;
            }
            rem -= block;
            c += 1;
            debug_assert!(c <= d);
        }
        exps[m - 1] = c as u32;
        budget -= c;
    }
    Ok(TrimmedIndex(exps))
}

/// Reusable state for [`for_each_shifted_rank`].
#[derive(Debug, Default, Clone)]
pub struct WalkScratch {
    base: Vec<usize>,
    rem: Vec<i64>,
}

/// Visits every `l'` of the trimmed layout `(m, budget)` in canonical order.
///
/// For each `l'` the callback receives `ranks` with `ranks[t]` equal to the
/// position of `l'` in layout `(m, budget - t)`, for `t = 0..=k` where
/// `k = min(d, budget - sum(l'))`. These are exactly the layouts in which `l'`
/// exists.
pub fn for_each_shifted_rank<F>(
    table: &EbcTable,
    m: usize,
    budget: i64,
    scratch: &mut WalkScratch,
    mut f: F,
) where
    F: FnMut(&[usize]),
{
    if budget < 0 {
        return;
    }
    let w = table.d() + 1;
    scratch.base.clear();
    scratch.base.resize((m + 1) * w, 0);
    scratch.rem.clear();
    scratch.rem.resize((m + 1) * w, 0);
    for t in 0..w {
        scratch.rem[m * w + t] = budget - t as i64;
    }
    walk(table, m, &mut scratch.base, &mut scratch.rem, &mut f);
}

fn walk<F: FnMut(&[usize])>(
    table: &EbcTable,
    j: usize,
    base: &mut [usize],
    rem: &mut [i64],
    f: &mut F,
) {
    let d = table.d();
    let w = d + 1;
    if j == 0 {
        let k = (rem[0].min(d as i64)) as usize;
        f(&base[..=k]);
        return;
    }
    let (base_lo, base_hi) = base.split_at_mut(j * w);
    let (rem_lo, rem_hi) = rem.split_at_mut(j * w);
    let cur_base = &mut base_hi[..w];
    let cur_rem = &rem_hi[..w];
    let child = (j - 1) * w;
    let cmax = cur_rem[0].min(d as i64);
    for c in 0..=cmax {
        for t in 0..w {
            base_lo[child + t] = cur_base[t];
            rem_lo[child + t] = cur_rem[t] - c;
        }
        walk(table, j - 1, base_lo, rem_lo, f);
        for t in 0..w {
            cur_base[t] += table.size(j - 1, cur_rem[t] - c);
        }
    }
}

/// Decomposes the embedding of layout `(m, small)` into layout `(m, big)`
/// (`small <= big`) into maximal contiguous runs, calling
/// `f(small_start, big_start, len)` for each run in order.
pub fn for_each_embedded_run<F>(table: &EbcTable, m: usize, small: i64, big: i64, mut f: F)
where
    F: FnMut(usize, usize, usize),
{
    debug_assert!(small <= big);
    embed(table, m, small, big, 0, 0, &mut f);
}

fn embed<F: FnMut(usize, usize, usize)>(
    table: &EbcTable,
    m: usize,
    small: i64,
    big: i64,
    small_at: usize,
    big_at: usize,
    f: &mut F,
) {
    let full = (m * table.d()) as i64;
    let (small, big) = (small.min(full), big.min(full));
    if small < 0 {
        return;
    }
    if small == big {
        f(small_at, big_at, table.size(m, small));
        return;
    }
    let (mut s, mut b) = (small_at, big_at);
    for c in 0..=(table.d() as i64).min(small) {
        embed(table, m - 1, small - c, big - c, s, b, f);
        s += table.size(m - 1, small - c);
        b += table.size(m - 1, big - c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u32]) -> TrimmedIndex {
        TrimmedIndex(v.to_vec())
    }

    fn brute_ebc(n: usize, k: i64, d: usize) -> u64 {
        let mut count = 0;
        let total = (d + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut s = 0i64;
            for _ in 0..n {
                s += (c % (d + 1)) as i64;
                c /= d + 1;
            }
            if s == k {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn ebc_examples() {
        assert_eq!(ebc(3, 2, 1).unwrap(), 3);
        assert_eq!(ebc(2, 2, 2).unwrap(), 3);
        assert_eq!(ebc(0, 0, 3).unwrap(), 1);
        assert_eq!(ebc(3, 7, 2).unwrap(), 0);
        assert_eq!(ebc(3, -1, 2).unwrap(), 0);
    }

    #[test]
    fn ebc_matches_brute_force() {
        for n in 0..=5 {
            for d in 1..=3 {
                for k in -1..=(n * d + 1) as i64 {
                    assert_eq!(
                        ebc(n, k, d).unwrap(),
                        brute_ebc(n, k, d),
                        "n={n} k={k} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn ebc_cum_examples() {
        assert_eq!(ebc_cum(2, 1, 1).unwrap(), 3);
        for n in 0..=4 {
            for d in 1..=3 {
                assert_eq!(
                    ebc_cum(n, (n * d) as i64, d).unwrap(),
                    (d as u64 + 1).pow(n as u32)
                );
            }
        }
        assert_eq!(ebc_cum(3, -1, 2).unwrap(), 0);
        // Budgets above n*d clamp to the full cube.
        assert_eq!(ebc_cum(2, 10, 1).unwrap(), 4);
    }

    #[test]
    fn zero_degree_is_rejected() {
        assert!(matches!(EbcTable::new(2, 0, 2), Err(Error::Usage(_))));
        assert!(ebc_cum(2, 1, 0).is_err());
    }

    #[test]
    fn overflow_is_a_capacity_error() {
        // (d+1)^n = 2^64 > 2^63
        assert!(matches!(EbcTable::new(64, 1, 64), Err(Error::Capacity(_))));
        assert!(EbcTable::new(62, 1, 62).is_ok());
    }

    #[test]
    fn pascal_and_recursion_size_identities() {
        for d in 1..=5 {
            let table = EbcTable::new(8, d, 8 * d).unwrap();
            for n in 1..=8 {
                for k in 0..=(n * d) as i64 {
                    let window: u64 = (0..=d as i64).map(|j| table.exact(n - 1, k - j)).sum();
                    assert_eq!(table.exact(n, k), window);
                    let cum: u64 = (0..=d as i64).map(|j| table.cumulative(n - 1, k - j)).sum();
                    assert_eq!(table.cumulative(n, k), cum);
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_trimmed(2, 1, 1),
            vec![idx(&[0, 0]), idx(&[1, 0]), idx(&[0, 1])]
        );
        assert_eq!(
            enumerate_trimmed(1, 2, 2),
            vec![idx(&[0]), idx(&[1]), idx(&[2])]
        );
        assert_eq!(enumerate_trimmed(0, 3, 2), vec![idx(&[])]);
        assert!(enumerate_trimmed(2, 2, -1).is_empty());
    }

    #[test]
    fn enumeration_is_exactly_the_trimmed_set_in_block_order() {
        for n in 0..=5 {
            for d in 1..=3 {
                for total in 0..=(n * d) as i64 {
                    let table = EbcTable::for_instance(n, d, total).unwrap();
                    let list = enumerate_trimmed(n, d, total);
                    assert_eq!(list.len() as u64, table.cumulative(n, total));
                    let mut sorted = list.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), list.len());
                    for l in &list {
                        l.validate(n, d, total).unwrap();
                    }
                    // Every vector of the full cube with small enough sum is present.
                    assert_eq!(
                        list.len() as u64,
                        (0..=total).map(|k| brute_ebc(n, k, d)).sum::<u64>()
                    );
                    if n == 0 {
                        continue;
                    }
                    let mut start = 0usize;
                    for j in 0..=d {
                        let len = table.size(n - 1, total - j as i64);
                        for (pos, l) in list.iter().enumerate() {
                            let inside = pos >= start && pos < start + len;
                            assert_eq!(l.0[n - 1] as usize == j, inside);
                        }
                        start += len;
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let table = EbcTable::for_instance(2, 1, 1).unwrap();
        assert_eq!(rank(&table, &idx(&[0, 1]), 2, 1).unwrap(), 2);
        assert_eq!(rank(&table, &idx(&[0, 0]), 2, 1).unwrap(), 0);
        assert_eq!(unrank(&table, 2, 2, 1).unwrap(), idx(&[0, 1]));
        assert_eq!(unrank(&table, 0, 2, 1).unwrap(), idx(&[0, 0]));
        let table = EbcTable::for_instance(1, 3, 3).unwrap();
        assert_eq!(unrank(&table, 3, 1, 3).unwrap(), idx(&[3]));
    }

    #[test]
    fn rank_rejects_invalid_input() {
        let table = EbcTable::for_instance(2, 2, 2).unwrap();
        assert!(rank(&table, &idx(&[3, 0]), 2, 2).is_err());
        assert!(rank(&table, &idx(&[2, 1]), 2, 2).is_err());
        assert!(rank(&table, &idx(&[1]), 2, 2).is_err());
        assert!(unrank(&table, 6, 2, 2).is_err());
    }

    #[test]
    fn rank_unrank_bijection() {
        for n in 0..=5 {
            for d in 1..=3 {
                for total in 0..=(n * d) as i64 {
                    let table = EbcTable::for_instance(n, d, total).unwrap();
                    for (r, l) in enumerate_trimmed(n, d, total).iter().enumerate() {
                        assert_eq!(rank(&table, l, n, total).unwrap(), r);
                        assert_eq!(&unrank(&table, r, n, total).unwrap(), l);
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_ranks_agree_with_rank() {
        let mut scratch = WalkScratch::default();
        for m in 0..=4 {
            for d in 1..=3 {
                for budget in 0..=(m * d + d) as i64 {
                    let table = EbcTable::new(m, d, budget as usize).unwrap();
                    let list = enumerate_trimmed(m, d, budget);
                    let mut visited = 0;
                    for_each_shifted_rank(&table, m, budget, &mut scratch, |ranks| {
                        let l = &list[visited];
                        let k = (budget - l.total() as i64).min(d as i64) as usize;
                        assert_eq!(ranks.len(), k + 1);
                        for (t, &r) in ranks.iter().enumerate() {
                            assert_eq!(r, rank(&table, l, m, budget - t as i64).unwrap());
                        }
                        visited += 1;
                    });
                    assert_eq!(visited, list.len());
                }
            }
        }
    }

    #[test]
    fn embedded_runs_map_indices() {
        for m in 0..=4 {
            for d in 1..=3 {
                let top = (m * d) as i64;
                let table = EbcTable::new(m, d, top as usize).unwrap();
                for big in 0..=top {
                    for small in -1..=big {
                        let mut covered = 0;
                        let small_list = enumerate_trimmed(m, d, small);
                        for_each_embedded_run(&table, m, small, big, |s, b, len| {
                            assert_eq!(s, covered);
                            for i in 0..len {
                                let l = &small_list[s + i];
                                assert_eq!(rank(&table, l, m, big).unwrap(), b + i);
                            }
                            covered += len;
                        });
                        assert_eq!(covered, small_list.len());
                    }
                }
            }
        }
    }
}
