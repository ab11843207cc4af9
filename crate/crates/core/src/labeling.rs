//! Seeded random edge labelings.
//!
//! A label is a pure function of `(seed, edge)`, so it never changes once
//! observed and every run can be replayed from the seed alone.

use serde::{Deserialize, Serialize};

use crate::graph::CanonicalEdge;

/// The splitmix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Stable keyed hash of a sequence of words.
pub fn mix(seed: u64, words: &[u64]) -> u64 {
    let mut h = splitmix64(seed ^ 0x5151_5151_dead_beef);
    for &w in words {
        h = splitmix64(h ^ w);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelDomain {
    /// Subdivision labels: 1 keeps the edge, 2 subdivides it.
    Tau,
    /// Parity labels: `eq` or `neq`.
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    One,
    Two,
    Eq,
    Neq,
}

/// Per-edge parity used by two-colouring: 1 means the endpoints must differ.
pub trait EdgeParity {
    fn parity(&self, e: CanonicalEdge) -> u8;
}

/// Every edge demands different colours.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlainParity;

impl EdgeParity for PlainParity {
    fn parity(&self, _e: CanonicalEdge) -> u8 {
        1
    }
}

impl<F: Fn(CanonicalEdge) -> u8> EdgeParity for F {
    fn parity(&self, e: CanonicalEdge) -> u8 {
        self(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabeling {
    pub seed: u64,
    pub domain: LabelDomain,
}

impl EdgeLabeling {
    pub fn new(seed: u64, domain: LabelDomain) -> Self {
        EdgeLabeling { seed, domain }
    }

    pub fn tau(seed: u64) -> Self {
        Self::new(seed, LabelDomain::Tau)
    }

    pub fn lambda(seed: u64) -> Self {
        Self::new(seed, LabelDomain::Lambda)
    }

    /// Fair coin keyed by three words.
    pub fn coin_for_key(&self, a: u64, b: u64, c: u64) -> bool {
        mix(self.seed, &[a, b, c]) >> 63 == 1
    }

    /// Label of an edge between objects with hash keys `a` and `b`.
    pub fn label_keys(&self, a: u64, b: u64, mult: u32) -> Label {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let heads = self.coin_for_key(lo, hi, mult as u64);
        match (self.domain, heads) {
            (LabelDomain::Tau, false) => Label::One,
            (LabelDomain::Tau, true) => Label::Two,
            (LabelDomain::Lambda, false) => Label::Eq,
            (LabelDomain::Lambda, true) => Label::Neq,
        }
    }

    pub fn label(&self, e: CanonicalEdge) -> Label {
        self.label_keys(e.u as u64, e.v as u64, e.mult)
    }

    /// Generalized parity: `neq` and `1` are odd, `eq` and `2` are even.
    pub fn parity_of(label: Label) -> u8 {
        match label {
            Label::One | Label::Neq => 1,
            Label::Two | Label::Eq => 0,
        }
    }
}

impl EdgeParity for EdgeLabeling {
    fn parity(&self, e: CanonicalEdge) -> u8 {
        EdgeLabeling::parity_of(self.label(e))
    }
}
