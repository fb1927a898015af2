use serde::{Deserialize, Serialize};

use super::PcPresentation;
use crate::error::{Error, Result};

/// Named presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Builtin {
    /// `⟨a, b, c | a^{p²} = b^{p²} = c^p = [b,c] = 1, [a,b] = c, [a,c] = b^{rp}⟩`.
    H34 { p: u64, r: u64 },
    /// `C_{p^e} ⋊ C_{p^f}`, `a^b = a^s`.
    MetacyclicSplit { p: u64, e: u32, f: u32, s: u64 },
    /// `C_{p^e} ⋊ C_p` with `a^b = a^{1+p^{e-1}}`.
    MetacyclicModular { p: u64, e: u32 },
}

pub fn builtin(spec: Builtin) -> Result<PcPresentation> {
    match spec {
        Builtin::H34 { p, r } => h34(p, r),
        Builtin::MetacyclicSplit { p, e, f, s } => metacyclic_split(p, e, f, s),
        Builtin::MetacyclicModular { p, e } => metacyclic_modular(p, e),
    }
}

fn odd_prime(p: u64) -> Result<()> {
    if p < 3 || !crate::engine::is_prime(p) {
        return Err(Error::Parameter(format!("expected an odd prime, got {p}")));
    }
    Ok(())
}

fn order(p: u64, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64)
        .map(|q| q as u32)
        .ok_or_else(|| Error::Parameter(format!("{p}^{e} is too large")))
}

/// The groups of order `p^5` named `H_3`, `H_4`; the two isomorphism types
/// correspond to the quadratic residue class of `r` mod `p`.
pub fn h34(p: u64, r: u64) -> Result<PcPresentation> {
    odd_prime(p)?;
    if r.is_multiple_of(p) {
        return Err(Error::Parameter(format!("r = {r} is divisible by p = {p}")));
    }
    let q = order(p, 2)?;
    let mut pres = PcPresentation::new(p);
    let a = pres.push_generator("a", q);
    let b = pres.push_generator("b", q);
    let c = pres.push_generator("c", p as u32);
    pres.set_commutator(a, b, vec![(c, 1)], 0)?;
    pres.set_commutator(a, c, vec![(b, (r % p * p) as i64)], 0)?;
    Ok(pres)
}

/// `⟨b⟩ ⋉ ⟨a⟩` with `|a| = p^e`, `|b| = p^f` and `a^b = a^s`; `s` must have
/// multiplicative order dividing `p^f` mod `p^e`.
pub fn metacyclic_split(p: u64, e: u32, f: u32, s: u64) -> Result<PcPresentation> {
    odd_prime(p)?;
    let (qa, qb) = (order(p, e)?, order(p, f)?);
    let m = qa as u64;
    let mut x = 1u64;
    for _ in 0..qb {
        x = x * (s % m) % m;
    }
    if s.is_multiple_of(p) || x != 1 % m {
        return Err(Error::Parameter(format!("a ↦ a^{s} is not an automorphism of order dividing {qb}")));
    }
    let mut pres = PcPresentation::new(p);
    let b = pres.push_generator("b", qb);
    let a = pres.push_generator("a", qa);
    pres.set_conjugate(a, b, vec![(a, (s % m) as i64)], 0)?;
    Ok(pres)
}

pub fn metacyclic_modular(p: u64, e: u32) -> Result<PcPresentation> {
    if e < 2 {
        return Err(Error::Parameter("the modular group needs e >= 2".into()));
    }
    metacyclic_split(p, e, 1, 1 + p.pow(e - 1))
}
