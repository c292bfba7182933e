//! Field-operation counting.

use std::cell::Cell;

use serde::Serialize;

use crate::error::Result;
use crate::field::{FieldElement, FieldOps, PrimeModulus};

/// Counters for one run. Subtractions and negations count as additions.
#[derive(Debug, Default)]
pub struct OpCounter {
    mul: Cell<u64>,
    add: Cell<u64>,
    inv: Cell<u64>,
}

/// Snapshot of an [`OpCounter`].
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub mul: u64,
    pub add: u64,
    pub inv: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.mul + self.add + self.inv
    }
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            mul: self.mul.get(),
            add: self.add.get(),
            inv: self.inv.get(),
        }
    }

    pub fn reset(&self) {
        self.mul.set(0);
        self.add.set(0);
        self.inv.set(0);
    }

    #[inline]
    fn bump(cell: &Cell<u64>) {
        cell.set(cell.get() + 1);
    }
}

/// A [`FieldOps`] implementation that records every operation in an [`OpCounter`].
#[derive(Debug, Clone, Copy)]
pub struct Counted<'a> {
    modulus: PrimeModulus,
    counter: &'a OpCounter,
}

impl<'a> Counted<'a> {
    pub fn new(modulus: PrimeModulus, counter: &'a OpCounter) -> Self {
        Self { modulus, counter }
    }
}

impl FieldOps for Counted<'_> {
    fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        OpCounter::bump(&self.counter.add);
        self.modulus.add(a, b)
    }

    #[inline]
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        OpCounter::bump(&self.counter.add);
        self.modulus.sub(a, b)
    }

    #[inline]
    fn neg(&self, a: FieldElement) -> FieldElement {
        OpCounter::bump(&self.counter.add);
        self.modulus.neg(a)
    }

    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        OpCounter::bump(&self.counter.mul);
        self.modulus.mul(a, b)
    }

    fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        OpCounter::bump(&self.counter.inv);
        self.modulus.inv(a)
    }
}

/// Runs `task` against a fresh counting field handle and returns its result
/// with the operation counts.
pub fn run_counted<R>(
    modulus: PrimeModulus,
    task: impl FnOnce(&Counted<'_>) -> R,
) -> (R, OpCounts) {
    let counter = OpCounter::new();
    let ops = Counted::new(modulus, &counter);
    let out = task(&ops);
    (out, counter.counts())
}
