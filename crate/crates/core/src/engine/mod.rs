//! Enumerated finite groups.
//!
//! A group is described by a [`GroupOracle`]: a multiplication rule over dense
//! integer codes. [`Group::realize`] enumerates the closure of a generating
//! set, checks the group axioms on samples, and then serves the structural
//! queries (series, Frattini coordinates, socle data) used by the Beauville
//! decision procedures in [`search`].
//!
//! Conventions are fixed throughout: `[x, y] = x⁻¹y⁻¹xy` and `x^g = g⁻¹xg`.

mod group;
mod search;
mod set;
mod socle;

pub use group::{Config, Group, RankInfo, SeriesKind, Subgroup};
pub use search::{
    beauville_search_exhaustive, beauville_search_random, beauville_verify, beauville_verify_literal, disjoint_pair,
    signature_witnesses, BeauvilleReport, Method, Signature, Structure, Verdict,
};
pub use set::ElementSet;
pub use socle::{canonical_prime_subgroup, socle_elements, SocleIndex};

/// Dense code of one group element.
pub type Code = u32;

/// A multiplication rule on a finite code space `0..code_space()`.
///
/// Implementations must be deterministic and pure; the engine calls them
/// from several threads.
pub trait GroupOracle: Send + Sync {
    fn code_space(&self) -> u64;
    fn identity(&self) -> Code;
    fn mul(&self, a: Code, b: Code) -> Code;
    fn inv(&self, a: Code) -> Code;

    /// Human-readable form of an element, also accepted by [`GroupOracle::parse`].
    fn format(&self, a: Code) -> String {
        a.to_string()
    }

    /// Parses the literal form produced by [`GroupOracle::format`].
    fn parse(&self, text: &str) -> Option<Code> {
        text.trim().parse().ok().filter(|&c: &Code| (c as u64) < self.code_space())
    }
}

/// Mixed-radix encoding of coordinate tuples into dense codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radix {
    radices: Vec<u32>,
}

impl Radix {
    pub fn new(radices: Vec<u32>) -> Self {
        Radix { radices }
    }

    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn space(&self) -> u64 {
        self.radices.iter().map(|&r| r as u64).product()
    }

    /// First coordinate is the most significant digit.
    pub fn encode(&self, digits: &[u32]) -> Code {
        debug_assert_eq!(digits.len(), self.radices.len());
        let mut code: u64 = 0;
        for (&d, &r) in digits.iter().zip(&self.radices) {
            debug_assert!(d < r);
            code = code * r as u64 + d as u64;
        }
        code as Code
    }

    pub fn decode_into(&self, code: Code, out: &mut [u32]) {
        let mut c = code as u64;
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = (c % r as u64) as u32;
            c /= r as u64;
        }
    }

    pub fn decode(&self, code: Code) -> Vec<u32> {
        let mut out = vec![0; self.radices.len()];
        self.decode_into(code, &mut out);
        out
    }
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}

/// Modular inverse of `a` modulo `m` when it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}
