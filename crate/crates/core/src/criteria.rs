//! Power structure of finite p-groups and the criteria built on it: the
//! semi-`p^i`-abelian test, potency and centrality flags, the power-criterion
//! verdict, and two machine-checkable non-existence certificates.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{Code, Group, RankInfo, SeriesKind};
use crate::error::{Error, Result};

/// Orders of the agemo and omega subgroups, `i = 0..=e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct PowerProfile {
    pub p: u64,
    /// `exp G = p^e`.
    pub e: u32,
    /// `|G^{p^i}|`.
    pub agemo_orders: Vec<u64>,
    /// `|Ω_i(G)|`.
    pub omega_orders: Vec<u64>,
    /// `|{g : g^{p^i} = 1}|`.
    pub omega_set_sizes: Vec<u64>,
    pub class: usize,
}

impl PowerProfile {
    /// `|G^{p^{e-1}}|` (the whole group when `e = 0`).
    pub fn top_agemo(&self) -> u64 {
        self.agemo_orders[self.e.saturating_sub(1) as usize]
    }
}

fn p_group(g: &Group) -> Result<u64> {
    g.prime().ok_or_else(|| Error::Unsupported(format!("group of order {} is not a p-group", g.order())))
}

pub fn power_profile(g: &Group) -> Result<PowerProfile> {
    let p = p_group(g)?;
    let e = g.exponent_log().unwrap_or(0);
    let mut agemo_orders = Vec::new();
    let mut omega_orders = Vec::new();
    let mut omega_set_sizes = Vec::new();
    for i in 0..=e {
        let q = p.pow(i);
        agemo_orders.push(g.power_subgroup(q).order());
        let set = g.omega_set(q);
        omega_set_sizes.push(set.len() as u64);
        omega_orders.push(g.omega_subgroup(q).order());
    }
    let class = g.nilpotency_class().unwrap_or(0);
    Ok(PowerProfile { p, e, agemo_orders, omega_orders, omega_set_sizes, class })
}

/// Outcome of a semi-`p^i`-abelian test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum SemiAbelian {
    True,
    /// `x^{p^i} = y^{p^i}` and `(xy⁻¹)^{p^i} = 1` disagree on this pair.
    False {
        x: Code,
        y: Code,
    },
    Untested,
}

/// Tests `x^{p^i} = y^{p^i} ⇔ (xy⁻¹)^{p^i} = 1` for all `x, y`.
///
/// Writing `S = {s : s^{p^i} = 1}`, the condition says that every fiber of
/// `x ↦ x^{p^i}` is the coset-like set `Sx`. That is checked exactly with
/// `|G|·|S|` products whenever this is at most the square of the configured
/// threshold, which covers every group the plain pair sweep would. Larger
/// groups get the necessary conditions (SA1), (SA2) and a seeded pair sample.
pub fn is_semi_pi_abelian(g: &Group, i: u32) -> Result<SemiAbelian> {
    let p = p_group(g)?;
    let q = p.checked_pow(i).ok_or_else(|| Error::Parameter(format!("p^{i} overflows")))?;
    let id = g.identity();
    let elems = g.element_list();
    let pw = power_table(g, q);
    let s: Vec<Code> = elems.iter().copied().filter(|&x| pw[x as usize] == id).collect();
    let limit = g.config().semi_abelian_threshold;
    let work = g.order().saturating_mul(s.len() as u64);
    if work <= limit.saturating_mul(limit) {
        return Ok(fiber_test(g, &pw, &s));
    }
    // (SA1): the set S is a subgroup.
    if let Some((x, y)) = non_closed_pair(g, &s) {
        // x^{p^i} = 1 = (y⁻¹)^{p^i}, while x(y⁻¹)⁻¹ = xy lies outside S.
        return Ok(SemiAbelian::False { x, y: g.inv(y) });
    }
    // (SA2): |{x^{p^i}}| = |G : S|.
    let values: HashSet<Code> = elems.iter().map(|&x| pw[x as usize]).collect();
    if values.len() as u64 * s.len() as u64 != g.order() {
        let x = fiber_size_violation(g, &pw, s.len());
        return Ok(fiber_test_at(g, &pw, &s, x).unwrap_or(SemiAbelian::Untested));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.config().seed ^ i as u64);
    for _ in 0..g.config().semi_abelian_threshold {
        let x = elems[rng.gen_range(0..elems.len())];
        let y = if rng.gen_bool(0.5) {
            g.mul(s[rng.gen_range(0..s.len())], x)
        } else {
            elems[rng.gen_range(0..elems.len())]
        };
        if !pair_ok(g, &pw, x, y) {
            return Ok(SemiAbelian::False { x, y });
        }
    }
    Ok(SemiAbelian::Untested)
}

fn power_table(g: &Group, q: u64) -> Vec<Code> {
    let mut pw = vec![0; g.code_space() as usize];
    let vals: Vec<Code> = g.element_list().par_iter().map(|&x| g.pow(x, q)).collect();
    for (&x, v) in g.element_list().iter().zip(vals) {
        pw[x as usize] = v;
    }
    pw
}

fn pair_ok(g: &Group, pw: &[Code], x: Code, y: Code) -> bool {
    let same = pw[x as usize] == pw[y as usize];
    let unit = pw[g.mul(x, g.inv(y)) as usize] == g.identity();
    same == unit
}

fn fiber_test(g: &Group, pw: &[Code], s: &[Code]) -> SemiAbelian {
    let elems = g.element_list();
    let mut sizes = std::collections::HashMap::new();
    for &x in elems {
        *sizes.entry(pw[x as usize]).or_insert(0usize) += 1;
    }
    if let Some(&x) = elems.iter().find(|&&x| sizes[&pw[x as usize]] != s.len()) {
        return fiber_test_at(g, pw, s, x).expect("fiber of the wrong size has a witness");
    }
    // Every fiber has |S| elements, so Sx ⊆ fiber(x) forces equality.
    let bad = elems.par_iter().find_first(|&&x| s.iter().any(|&t| pw[g.mul(t, x) as usize] != pw[x as usize]));
    match bad {
        Some(&x) => fiber_test_at(g, pw, s, x).expect("bad element has a witness"),
        None => SemiAbelian::True,
    }
}

/// A violating pair `(x, y)` for a fixed `x`, if there is one.
fn fiber_test_at(g: &Group, pw: &[Code], s: &[Code], x: Code) -> Option<SemiAbelian> {
    let id = g.identity();
    for &t in s {
        let y = g.mul(t, x);
        if pw[y as usize] != pw[x as usize] {
            // xy⁻¹ = t⁻¹ has trivial power, the powers differ.
            return Some(SemiAbelian::False { x, y });
        }
    }
    let fx = pw[x as usize];
    g.element_list()
        .iter()
        .find(|&&y| pw[y as usize] == fx && pw[g.mul(x, g.inv(y)) as usize] != id)
        .map(|&y| SemiAbelian::False { x, y })
}

fn fiber_size_violation(g: &Group, pw: &[Code], size: usize) -> Code {
    let mut sizes = std::collections::HashMap::new();
    for &x in g.element_list() {
        *sizes.entry(pw[x as usize]).or_insert(0usize) += 1;
    }
    *g.element_list().iter().find(|&&x| sizes[&pw[x as usize]] != size).expect("sizes differ somewhere")
}

fn non_closed_pair(g: &Group, s: &[Code]) -> Option<(Code, Code)> {
    let set: HashSet<Code> = s.iter().copied().collect();
    let mut h = g.trivial_subgroup();
    for &x in s {
        g.extend(&mut h, x);
    }
    if h.order() as usize == s.len() {
        return None;
    }
    s.iter().find_map(|&x| s.iter().find(|&&y| !set.contains(&g.mul(x, y))).map(|&y| (x, y)))
}

/// Structural flags of a p-group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CriteriaFlags {
    pub semi_pe1_abelian: SemiAbelian,
    pub potent: bool,
    pub powerful: bool,
    pub p_central: bool,
    pub generalised_p_central: bool,
    pub class_lt_p: bool,
}

pub fn classify(g: &Group) -> Result<CriteriaFlags> {
    let p = p_group(g)?;
    let e = g.exponent_log().unwrap_or(0);
    let lcs = g.series(SeriesKind::LowerCentral);
    let term = |i: usize| lcs.get(i - 1).map(|h| h.set.clone());
    let contained =
        |h: Option<crate::engine::ElementSet>, k: &crate::engine::Subgroup| h.is_none_or(|h| h.is_subset(&k.set));
    let (potent, powerful, p_central, generalised) = if p == 2 {
        let g4 = g.power_subgroup(4);
        let omega2 = g.omega_subgroup(4);
        let pc = g.in_upper_central(&omega2, 1);
        let pw = contained(term(2), &g4);
        (pw, pw, g.in_upper_central(&g.omega_subgroup(2), 1), pc)
    } else {
        let gp = g.power_subgroup(p);
        let omega1 = g.omega_subgroup(p);
        (
            contained(term(p as usize - 1), &gp),
            contained(term(2), &gp),
            g.in_upper_central(&omega1, 1),
            g.in_upper_central(&omega1, p as usize - 2),
        )
    };
    let class = g.nilpotency_class().unwrap_or(usize::MAX);
    let semi = if e <= 1 { SemiAbelian::True } else { is_semi_pi_abelian(g, e - 1)? };
    Ok(CriteriaFlags {
        semi_pe1_abelian: semi,
        potent,
        powerful,
        p_central,
        generalised_p_central: generalised,
        class_lt_p: (class as u64) < p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremA {
    Yes,
    No,
    NotApplicable,
}

/// Which hypothesis let the criterion apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    SemiAbelian,
    ClassBelowP,
    Potent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TheoremAReport {
    pub verdict: TheoremA,
    pub hypothesis: Option<Hypothesis>,
    pub top_agemo: u64,
}

/// For a 2-generator p-group that is semi-`p^{e-1}`-abelian (class `< p`
/// suffices) or potent: Beauville iff `p ≥ 5` and `|G^{p^{e-1}}| ≥ p²`.
pub fn theorem_a_verdict(g: &Group, flags: &CriteriaFlags) -> Result<TheoremAReport> {
    let p = p_group(g)?;
    if g.rank_info() != RankInfo::Two {
        return Err(Error::Rank { index: g.order() / g.frattini().order(), expected: p * p });
    }
    let e = g.exponent_log().unwrap_or(0);
    let top_agemo = g.power_subgroup(p.pow(e.saturating_sub(1))).order();
    let hypothesis = if flags.semi_pe1_abelian == SemiAbelian::True {
        Some(Hypothesis::SemiAbelian)
    } else if flags.class_lt_p {
        Some(Hypothesis::ClassBelowP)
    } else if flags.potent {
        Some(Hypothesis::Potent)
    } else {
        None
    };
    let verdict = match hypothesis {
        None => TheoremA::NotApplicable,
        Some(_) if p >= 5 && top_agemo >= p * p => TheoremA::Yes,
        Some(_) => TheoremA::No,
    };
    Ok(TheoremAReport { verdict, hypothesis, top_agemo })
}

/// Whether `⟨a^{p^{e-1}}⟩` and `⟨b^{p^{e-1}}⟩` are nontrivial and different.
pub fn easy_detecting(g: &Group, a: Code, b: Code) -> Result<bool> {
    let p = p_group(g)?;
    let e = g.exponent_log().unwrap_or(0);
    let q = p.pow(e.saturating_sub(1));
    let (x, y) = (g.pow(a, q), g.pow(b, q));
    let id = g.identity();
    if x == id || y == id {
        return Ok(false);
    }
    Ok(!cyclic_members(g, x).contains(&y))
}

fn cyclic_members(g: &Group, x: Code) -> Vec<Code> {
    let id = g.identity();
    let mut out = vec![id];
    let mut c = x;
    while c != id {
        out.push(c);
        c = g.mul(c, x);
    }
    out
}

/// A replayable proof that a group is not Beauville.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Elements of order `≤ p^{e-1}` lie in the union of the two maximal
    /// subgroups over these lines of `G/Φ(G)`, and `|G^{p^{e-1}}| = p`.
    PropNegative {
        lines: (usize, usize),
    },
    /// `⟨z⟩` is central of order `p` and lies in `⟨g⟩` for every `g` outside
    /// the maximal subgroup over `line`.
    CyclicObstruction {
        z: Code,
        line: usize,
    },
    ExhaustedSignatures,
}

fn two_generator_p_group(g: &Group) -> Option<u64> {
    let p = g.prime()?;
    (g.rank_info() == RankInfo::Two && g.has_frattini_coords()).then_some(p)
}

/// Looks for two maximal subgroups covering `Ω_{{e-1}}(G)` when
/// `|G^{p^{e-1}}| = p`.
pub fn negative_certificate(g: &Group) -> Option<Certificate> {
    let p = two_generator_p_group(g)?;
    let e = g.exponent_log()?;
    if e == 0 || g.power_subgroup(p.pow(e - 1)).order() != p {
        return None;
    }
    let lo = g.log_orders()?;
    let mut hit = vec![false; p as usize + 1];
    for x in g.elements() {
        if (lo[x as usize] as u32) < e {
            if let Some(l) = g.line_of(x) {
                hit[l] = true;
            }
        }
    }
    let lines: Vec<usize> = (0..=p as usize).filter(|&l| hit[l]).collect();
    let pair = match lines.as_slice() {
        [] => (0, 1),
        [a] => (*a, if *a == 0 { 1 } else { 0 }),
        [a, b] => (*a, *b),
        _ => return None,
    };
    Some(Certificate::PropNegative { lines: pair })
}

/// Looks for a central `⟨z⟩` of order `p` and a maximal subgroup `M` with
/// `⟨z⟩ ≤ ⟨g⟩` for all `g ∉ M`.
pub fn cyclic_obstruction(g: &Group) -> Option<Certificate> {
    let p = two_generator_p_group(g)?;
    let lines = p as usize + 1;
    // Per line: the socle of ⟨g⟩ (as its least generator) if it is the same
    // for every g on that line, `None` once two differ.
    let mut socle: Vec<Option<Option<Code>>> = vec![None; lines];
    for x in g.elements() {
        let Some(l) = g.line_of(x) else { continue };
        if matches!(socle[l], Some(None)) {
            continue;
        }
        let s = crate::engine::canonical_prime_subgroup(g, socle_generator(g, p, x));
        socle[l] = match socle[l] {
            None => Some(Some(s)),
            Some(Some(t)) if t == s => Some(Some(t)),
            _ => Some(None),
        };
    }
    for skip in 0..lines {
        let mut common = None;
        let mut ok = true;
        for (l, entry) in socle.iter().enumerate() {
            if l == skip {
                continue;
            }
            match (entry, common) {
                (Some(Some(s)), None) => common = Some(*s),
                (Some(Some(s)), Some(c)) if *s == c => {}
                _ => ok = false,
            }
        }
        if let (true, Some(z)) = (ok, common) {
            if g.gens().iter().all(|&s| g.mul(s, z) == g.mul(z, s)) {
                return Some(Certificate::CyclicObstruction { z, line: skip });
            }
        }
    }
    None
}

/// The element `x^{o(x)/p}`.
fn socle_generator(g: &Group, p: u64, x: Code) -> Code {
    g.pow(x, g.element_order(x) / p)
}

/// Re-checks a certificate against its defining conditions by direct
/// computation, without the shortcuts used to find it.
pub fn replay_certificate(g: &Group, cert: &Certificate) -> bool {
    let Some(p) = two_generator_p_group(g) else { return false };
    let Ok(maximals) = g.maximal_subgroups() else { return false };
    let id = g.identity();
    match *cert {
        Certificate::PropNegative { lines: (a, b) } => {
            if a == b || a > p as usize || b > p as usize {
                return false;
            }
            let exp = g.elements().map(|x| g.element_order(x)).max().unwrap_or(1);
            let q = exp / p;
            if exp == 1 || g.power_subgroup(q).order() != p {
                return false;
            }
            g.elements().filter(|&x| g.pow(x, q) == id).all(|x| maximals[a].contains(x) || maximals[b].contains(x))
        }
        Certificate::CyclicObstruction { z, line } => {
            if line > p as usize || z == id || g.pow(z, p) != id || !g.contains(z) {
                return false;
            }
            if !g.elements().all(|x| g.mul(x, z) == g.mul(z, x)) {
                return false;
            }
            let zs = cyclic_members(g, z);
            g.elements().filter(|&x| !maximals[line].contains(x)).all(|x| {
                let c = cyclic_members(g, x);
                zs.iter().all(|s| c.contains(s))
            })
        }
        Certificate::ExhaustedSignatures => false,
    }
}

/// Whether a structure of a quotient lifts: the orders of `x, y, xy` are
/// preserved and the lift is accepted by the verifier.
pub fn lift_preserves_orders(quotient: &Group, group: &Group, images: [Code; 3], lifts: [Code; 3]) -> bool {
    images.iter().zip(&lifts).all(|(&a, &b)| quotient.element_order(a) == group.element_order(b))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::Abelian;
    use crate::engine::Config;

    fn abelian(n: u32) -> Group {
        let a = Arc::new(Abelian::new(n));
        let gens = a.generators().to_vec();
        Group::realize(a, gens, vec!["a".into(), "b".into()], Config::default()).unwrap()
    }

    /// Pair sweep straight from the definition.
    fn naive_semi(g: &Group, q: u64) -> bool {
        let id = g.identity();
        g.elements().all(|x| g.elements().all(|y| (g.pow(x, q) == g.pow(y, q)) == (g.pow(g.mul(x, g.inv(y)), q) == id)))
    }

    #[test]
    fn cyclic_profile() {
        let g = abelian(25);
        let prof = power_profile(&g).unwrap();
        assert_eq!(prof.e, 2);
        assert_eq!(prof.agemo_orders, vec![625, 25, 1]);
        assert_eq!(prof.omega_orders, vec![1, 25, 625]);
        assert_eq!(prof.omega_set_sizes, prof.omega_orders);
        assert_eq!(prof.class, 1);
    }

    #[test]
    fn abelian_flags() {
        let g = abelian(5);
        let f = classify(&g).unwrap();
        assert!(f.potent && f.powerful && f.p_central && f.generalised_p_central && f.class_lt_p);
        assert_eq!(f.semi_pe1_abelian, SemiAbelian::True);
        assert_eq!(is_semi_pi_abelian(&abelian(9), 1).unwrap(), SemiAbelian::True);
        assert!(naive_semi(&abelian(9), 3));
    }

    #[test]
    fn abelian_certificates() {
        assert_eq!(negative_certificate(&abelian(5)), None);
        assert_eq!(cyclic_obstruction(&abelian(5)), None);
        assert_eq!(cyclic_obstruction(&abelian(9)), None);
        assert!(!replay_certificate(&abelian(5), &Certificate::ExhaustedSignatures));
    }

    #[test]
    fn easy_detecting_diagonal() {
        let g = abelian(25);
        let a = g.gens()[0];
        let b = g.gens()[1];
        assert!(easy_detecting(&g, a, g.mul(a, b)).unwrap());
        assert!(!easy_detecting(&g, a, g.pow(a, 2)).unwrap());
    }
}
