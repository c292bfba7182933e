use std::hint::black_box;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::algo::{
    naive_trimmed_eval_with, run_counted, trimmed_eval_with, yates_eval_with, Grid, OpCounts,
};
use crate::combinat::ebc_cum;
use crate::error::{Error, Result};
use crate::field::{FieldOps, PrimeModulus};
use crate::poly::TrimmedPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Trimmed,
    Naive,
    Yates,
}

impl Algo {
    pub fn tag(self) -> &'static str {
        match self {
            Algo::Trimmed => "trimmed",
            Algo::Naive => "naive",
            Algo::Yates => "yates",
        }
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "trimmed" => Ok(Algo::Trimmed),
            "naive" => Ok(Algo::Naive),
            "yates" => Ok(Algo::Yates),
            other => Err(format!(
                "unknown algorithm {other:?} (expected trimmed, naive or yates)"
            )),
        }
    }
}

/// Comma-separated algorithm list; empty lists are rejected.
pub fn parse_algos(s: &str) -> std::result::Result<Vec<Algo>, String> {
    let mut algos = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let a: Algo = part.parse()?;
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    if algos.is_empty() {
        return Err("--algos must name at least one algorithm".into());
    }
    Ok(algos)
}

/// How `D` is chosen for a given `(n, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalSpec {
    /// `D = ceil(n*d*num/den)`
    Fraction(u64, u64),
    Absolute(i64),
}

impl TotalSpec {
    pub fn resolve(self, n: usize, d: usize) -> i64 {
        match self {
            TotalSpec::Fraction(num, den) => ((n * d) as u64 * num).div_ceil(den) as i64,
            TotalSpec::Absolute(t) => t,
        }
    }
}

impl FromStr for TotalSpec {
    type Err = String;

    /// `nd`, `nd/4`, `3nd/4`, `1/2` (fractions of `nd`) or a plain integer.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("invalid D value {s:?}");
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim().parse::<u64>().map_err(|_| bad())?)),
            None => (t, None),
        };
        let (num, of_nd) = match num.strip_suffix("nd") {
            Some(rest) => (rest.trim(), true),
            None => (num, false),
        };
        let num = match (num.is_empty(), of_nd) {
            (true, true) => 1,
            (true, false) => return Err(bad()),
            (false, _) => num.parse::<i64>().map_err(|_| bad())?,
        };
        match (of_nd, den) {
            (_, Some(0)) => Err(bad()),
            (false, None) => Ok(TotalSpec::Absolute(num)),
            (_, den) if num >= 0 => Ok(TotalSpec::Fraction(num as u64, den.unwrap_or(1))),
            _ => Err(bad()),
        }
    }
}

/// Parameter grid: `n=2..10;d=1..3;D=nd/4,nd/2,nd`. `D` defaults to `nd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub totals: Vec<TotalSpec>,
}

fn parse_ints(key: &str, v: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid value {s:?} for {key}"))
        };
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {item:?} for {key}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    if out.is_empty() {
        return Err(format!("no values for {key}"));
    }
    Ok(out)
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (mut ns, mut ds, mut totals) = (None, None, None);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("sweep entry {part:?} is not key=value"))?;
            match key.trim() {
                "n" => ns = Some(parse_ints("n", value)?),
                "d" => ds = Some(parse_ints("d", value)?),
                "D" => {
                    totals = Some(
                        value
                            .split(',')
                            .map(str::parse)
                            .collect::<std::result::Result<Vec<TotalSpec>, _>>()?,
                    )
                }
                other => return Err(format!("unknown sweep key {other:?} (expected n, d or D)")),
            }
        }
        let ds = ds.ok_or("sweep needs d=...")?;
        if ds.contains(&0) {
            return Err("d must be at least 1".into());
        }
        Ok(Sweep {
            ns: ns.ok_or("sweep needs n=...")?,
            ds,
            totals: totals.unwrap_or_else(|| vec![TotalSpec::Fraction(1, 1)]),
        })
    }
}

impl Sweep {
    /// `(n, d, D)` triples in sweep order, without repeats.
    pub fn instances(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &d in &self.ds {
                for spec in &self.totals {
                    let inst = (n, d, spec.resolve(n, d));
                    if !out.contains(&inst) {
                        out.push(inst);
                    }
                }
            }
        }
        out
    }
}

/// One CSV row. Skipped rows leave the measurement columns empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: &'static str,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub total: i64,
    pub p: u64,
    #[serde(rename = "N")]
    pub size: Option<u64>,
    pub wall_time_ns: Option<u128>,
    pub mul: Option<u64>,
    pub add: Option<u64>,
    pub inv: Option<u64>,
    #[serde(rename = "mul_per_Nn")]
    pub mul_per_nn: String,
}

pub(super) struct Config {
    pub modulus: PrimeModulus,
    pub seed: u64,
    pub naive_limit: u64,
    pub max_size: u64,
}

fn evaluate<F: FieldOps>(algo: Algo, ops: &F, poly: &TrimmedPoly, grid: &Grid) -> Result<usize> {
    Ok(match algo {
        Algo::Trimmed => black_box(trimmed_eval_with(ops, poly, grid)?).len(),
        Algo::Naive => black_box(naive_trimmed_eval_with(ops, poly, grid)?).len(),
        Algo::Yates => black_box(yates_eval_with(ops, poly, grid)?).len(),
    })
}

/// Counted run followed by an uncounted timed run.
fn measure(algo: Algo, poly: &TrimmedPoly, grid: &Grid) -> Result<(u128, OpCounts)> {
    let modulus = poly.modulus();
    let (res, counts) = run_counted(modulus, |ops| evaluate(algo, ops, poly, grid));
    res?;
    let start = Instant::now();
    evaluate(algo, &modulus, poly, grid)?;
    Ok((start.elapsed().as_nanos(), counts))
}

fn skip_reason(
    algo: Algo,
    n: usize,
    d: usize,
    total: i64,
    size: u64,
    cfg: &Config,
) -> Option<String> {
    if size > cfg.max_size {
        return Some(format!("N = {size} exceeds --max-size {}", cfg.max_size));
    }
    match algo {
        Algo::Naive if size > cfg.naive_limit => Some(format!(
            "N = {size} exceeds --naive-limit {}",
            cfg.naive_limit
        )),
        Algo::Yates if total != (n * d) as i64 => Some(format!("yates needs D = nd = {}", n * d)),
        _ => None,
    }
}

fn instance_seed(seed: u64, n: usize, d: usize, total: i64) -> u64 {
    let mut h = seed ^ 0x51_7c_c1_b7_27_22_0a_95;
    for x in [n as u64, d as u64, total as u64] {
        h = (h ^ x).wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(super) fn run_sweep(
    sweep: &Sweep,
    algos: &[Algo],
    cfg: &Config,
    err: &mut dyn Write,
) -> Result<Vec<BenchRecord>> {
    let p = cfg.modulus.value();
    if let Some(&d) = sweep.ds.iter().find(|&&d| p < d as u64 + 1) {
        return Err(Error::FieldTooSmall { p, needed: d + 1 });
    }
    let mut records = Vec::new();
    for (n, d, total) in sweep.instances() {
        let size = ebc_cum(n, total, d).ok();
        let record = |algo: Algo| BenchRecord {
            algo: algo.tag(),
            n,
            d,
            total,
            p,
            size,
            wall_time_ns: None,
            mul: None,
            add: None,
            inv: None,
            mul_per_nn: "skipped".into(),
        };
        let Some(size) = size else {
            let _ = writeln!(
                err,
                "skipping n={n} d={d} D={total}: term count exceeds 2^63"
            );
            records.extend(algos.iter().map(|&a| record(a)));
            continue;
        };
        let seed = instance_seed(cfg.seed, n, d, total);
        let mut instance = None;
        for &algo in algos {
            if let Some(why) = skip_reason(algo, n, d, total, size, cfg) {
                let _ = writeln!(err, "skipping {} n={n} d={d} D={total}: {why}", algo.tag());
                records.push(record(algo));
                continue;
            }
            if instance.is_none() {
                let poly = TrimmedPoly::random(n, d, total, cfg.modulus, seed)?;
                let grid = Grid::random(n, d, cfg.modulus, seed.wrapping_add(1))?;
                instance = Some((poly, grid));
            }
            let (poly, grid) = instance.as_ref().expect("instance built above");
            let (ns, counts) = measure(algo, poly, grid)?;
            let denom = size as u128 * n as u128;
            records.push(BenchRecord {
                wall_time_ns: Some(ns),
                mul: Some(counts.mul),
                add: Some(counts.add),
                inv: Some(counts.inv),
                mul_per_nn: if denom == 0 {
                    String::new()
                } else {
                    format!("{:.6}", counts.mul as f64 / denom as f64)
                },
                ..record(algo)
            });
        }
    }
    Ok(records)
}
