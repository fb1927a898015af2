use std::sync::Arc;

use super::named::{a_series, b_series, distinguished_level, zm};
use super::{NottinghamQuotient, QuotientSpec, TruncSeries};
use crate::engine::{Code, Config, Group, Structure};
use crate::error::{Error, Result};

/// The classification of Beauville quotients as a closed formula.
pub fn nottingham_verdict(spec: QuotientSpec) -> bool {
    match spec {
        QuotientSpec::Full { p, k } => {
            let min_k = if p == 3 { 6 } else { 3 };
            k >= min_k && distinguished_level(p as u64, k as u64).is_none()
        }
        QuotientSpec::Diamond { p, m, alpha } => {
            let min_m = if p == 3 { 2 } else { 1 };
            m >= min_m && matches!(alpha, Some(a) if a % p != 0)
        }
    }
}

/// Realizes a quotient with `u = a`, `v = b` as generators.
pub fn realize_quotient(spec: QuotientSpec, config: Config) -> Result<(Arc<NottinghamQuotient>, Group)> {
    let q = Arc::new(NottinghamQuotient::new(spec)?);
    let k = q.truncation();
    let u = q.encode(&a_series(q.p(), k)?);
    let v = q.encode(&b_series(q.p(), k)?);
    let group = Group::realize(q.clone(), vec![u, v], vec!["u".into(), "v".into()], config)?;
    Ok((q, group))
}

/// Codes of `u` and `v` in a realized quotient.
pub fn named_generators(q: &NottinghamQuotient) -> (Code, Code) {
    let k = q.truncation();
    (q.encode(&a_series(q.p(), k).expect("odd prime")), q.encode(&b_series(q.p(), k).expect("odd prime")))
}

/// `{u, v}` and `{uv^2, uv^4}`, the structure used for `p ≥ 5`.
pub fn standard_structure(q: &NottinghamQuotient, g: &Group) -> Structure {
    let (u, v) = named_generators(q);
    let uv2 = g.mul(u, g.pow(v, 2));
    let uv4 = g.mul(u, g.pow(v, 4));
    Structure { pair1: (u, v), pair2: (uv2, uv4) }
}

/// An element of the layer `N_{z_m-1}/N_{z_m+1}` of `G = N/N_{z_m+1}` that is
/// not of the form `[x, g]`; the least such code.
pub fn find_uncovered_witness(g: &Group, q: &NottinghamQuotient, x: Code) -> Result<Code> {
    let (p, k) = (q.p(), q.truncation());
    let z = k - 1;
    if !matches!(q.spec(), QuotientSpec::Full { .. }) || distinguished_level(p as u64, z as u64).is_none() {
        return Err(Error::Parameter(format!("N/N_{k} is not the bottom of a distinguished diamond")));
    }
    let image = g.commutator_image_set(x);
    let mut layer = Vec::new();
    for c1 in 0..p as i64 {
        for c2 in 0..p as i64 {
            if c1 == 0 && c2 == 0 {
                continue;
            }
            layer.push(q.encode(&TruncSeries::from_terms(p, k, &[(z, c1), (z + 1, c2)])));
        }
    }
    layer.sort_unstable();
    layer
        .into_iter()
        .find(|&w| !image.contains(w))
        .ok_or_else(|| Error::Integrity(format!("the commutators [{}, g] cover the bottom diamond", g.format(x))))
}

/// For `p = 3`: `{u, v}` and `{(uw)^{-1}, vz}` in `N/N_{z_m+1}`, with `w`, `z`
/// central witnesses outside the commutator images of `u` and `v`.
pub fn uncovered_structure(q: &NottinghamQuotient, g: &Group) -> Result<(Structure, TruncSeries, TruncSeries)> {
    let (u, v) = named_generators(q);
    let w = find_uncovered_witness(g, q, u)?;
    let z = find_uncovered_witness(g, q, v)?;
    let x2 = g.inv(g.mul(u, w));
    let y2 = g.mul(v, z);
    Ok((Structure { pair1: (u, v), pair2: (x2, y2) }, q.decode(w), q.decode(z)))
}

/// Lifts a structure `{u, v}`, `{(uw)^{-1}, vz}` to another quotient by
/// reading `w` and `z` as series there.
pub fn lift_structure(target: &NottinghamQuotient, g: &Group, w: &TruncSeries, z: &TruncSeries) -> Structure {
    let (u, v) = named_generators(target);
    let w = target.encode(w);
    let z = target.encode(z);
    Structure { pair1: (u, v), pair2: (g.inv(g.mul(u, w)), g.mul(v, z)) }
}

/// The `m` whose bottom quotient `N/N_{z_m+1}` sits just below `N/N_k`, i.e.
/// the largest `m ≥ 1` with `z_m + 1 ≤ k`.
pub fn base_level(p: u64, k: u64) -> Option<u32> {
    (1..64).take_while(|&m| zm(p, m) < k).last()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_formula() {
        assert!(!nottingham_verdict(QuotientSpec::Full { p: 5, k: 7 }));
        assert!(nottingham_verdict(QuotientSpec::Full { p: 5, k: 8 }));
        assert!(nottingham_verdict(QuotientSpec::Full { p: 3, k: 6 }));
        assert!(!nottingham_verdict(QuotientSpec::Full { p: 3, k: 5 }));
        assert!(!nottingham_verdict(QuotientSpec::Full { p: 3, k: 14 }));
        assert!(nottingham_verdict(QuotientSpec::Diamond { p: 5, m: 1, alpha: Some(3) }));
        assert!(!nottingham_verdict(QuotientSpec::Diamond { p: 5, m: 1, alpha: Some(0) }));
        assert!(!nottingham_verdict(QuotientSpec::Diamond { p: 5, m: 1, alpha: None }));
        assert!(!nottingham_verdict(QuotientSpec::Diamond { p: 3, m: 1, alpha: Some(1) }));
    }

    #[test]
    fn base_levels() {
        assert_eq!(base_level(3, 9), Some(1));
        assert_eq!(base_level(3, 15), Some(2));
        assert_eq!(base_level(5, 8), Some(1));
        assert_eq!(base_level(5, 7), None);
    }
}
