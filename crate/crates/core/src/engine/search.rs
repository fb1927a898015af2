use std::collections::{BTreeMap, HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::socle::{canonical_prime_subgroup, socle_elements};
use super::{Code, Group, RankInfo, SocleIndex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    VerifiedStructure,
    Certificate,
    /// A structural criterion on power subgroups.
    Criterion,
    Randomized,
}

/// Two generating pairs `(x1, y1)`, `(x2, y2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Structure {
    pub pair1: (Code, Code),
    pub pair2: (Code, Code),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeauvilleReport {
    pub verdict: Verdict,
    pub witness: Option<Structure>,
    pub certificate: Option<String>,
    pub method: Method,
}

impl BeauvilleReport {
    pub fn yes(witness: Structure, method: Method) -> Self {
        BeauvilleReport { verdict: Verdict::Yes, witness: Some(witness), certificate: None, method }
    }

    pub fn no(certificate: impl Into<String>, method: Method) -> Self {
        BeauvilleReport { verdict: Verdict::No, witness: None, certificate: Some(certificate.into()), method }
    }

    pub fn unknown(method: Method) -> Self {
        BeauvilleReport { verdict: Verdict::Unknown, witness: None, certificate: None, method }
    }
}

/// Sorted, deduplicated socle-orbit ids of `{x, y, xy}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    len: u8,
    ids: [u32; 6],
}

impl Signature {
    pub fn from_ids(list: impl IntoIterator<Item = u32>) -> Signature {
        let mut sig = Signature { len: 0, ids: [u32::MAX; 6] };
        for id in list {
            if !sig.as_slice().contains(&id) {
                assert!((sig.len as usize) < 6, "signature overflow");
                sig.ids[sig.len as usize] = id;
                sig.len += 1;
            }
        }
        sig.ids[..sig.len as usize].sort_unstable();
        sig
    }

    pub fn of(index: &SocleIndex, x: Code, y: Code, xy: Code) -> Signature {
        Signature::from_ids(index.ids(x).iter().chain(index.ids(y)).chain(index.ids(xy)).copied())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.ids[..self.len as usize]
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.as_slice().iter().all(|i| !other.as_slice().contains(i))
    }

    /// Nonempty subsets, as sorted id lists.
    fn subsets(&self) -> impl Iterator<Item = (u32, Vec<u32>)> + '_ {
        let n = self.len as u32;
        (1u32..1 << n).map(move |mask| {
            let sub: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.ids[i as usize]).collect();
            (mask.count_ones(), sub)
        })
    }
}

/// Whether `(x1, y1), (x2, y2)` is a Beauville structure: both pairs generate
/// and no conjugate of `⟨x1⟩, ⟨y1⟩, ⟨x1y1⟩` meets a conjugate of
/// `⟨x2⟩, ⟨y2⟩, ⟨x2y2⟩` nontrivially.
pub fn beauville_verify(g: &Group, pair1: (Code, Code), pair2: (Code, Code)) -> bool {
    let all = [pair1.0, pair1.1, pair2.0, pair2.1];
    if !all.iter().all(|&c| g.contains(c)) {
        return false;
    }
    if !g.generates(pair1.0, pair1.1) || !g.generates(pair2.0, pair2.1) {
        return false;
    }
    let trip1 = [pair1.0, pair1.1, g.mul(pair1.0, pair1.1)];
    let trip2 = [pair2.0, pair2.1, g.mul(pair2.0, pair2.1)];
    if let Some(index) = g.socle_index_if_built() {
        let s1 = Signature::of(index, trip1[0], trip1[1], trip1[2]);
        let s2 = Signature::of(index, trip2[0], trip2[1], trip2[2]);
        return s1.is_disjoint(&s2);
    }
    // Close the prime-order subgroups of pair 1 under conjugation and check
    // that none of pair 2's appear.
    let seeds: Vec<Code> =
        trip1.iter().flat_map(|&c| socle_elements(g, c)).map(|s| canonical_prime_subgroup(g, s)).collect();
    let orbit = prime_subgroup_orbit(g, &seeds);
    trip2.iter().flat_map(|&c| socle_elements(g, c)).all(|s| !orbit.contains(&canonical_prime_subgroup(g, s)))
}

/// Canonical codes of all conjugates of the given prime-order subgroups.
fn prime_subgroup_orbit(g: &Group, seeds: &[Code]) -> HashSet<Code> {
    let ginv: Vec<Code> = g.gens().iter().map(|&x| g.inv(x)).collect();
    let mut seen: HashSet<Code> = seeds.iter().copied().collect();
    let mut stack: Vec<Code> = seen.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for (&x, &xi) in g.gens().iter().zip(&ginv) {
            let t = canonical_prime_subgroup(g, g.mul(g.mul(xi, s), x));
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen
}

/// [`beauville_verify`] computed from the literal sets `Σ(x, y)`.
pub fn beauville_verify_literal(g: &Group, pair1: (Code, Code), pair2: (Code, Code)) -> bool {
    if !g.generates(pair1.0, pair1.1) || !g.generates(pair2.0, pair2.1) {
        return false;
    }
    let s1 = g.sigma_set(pair1.0, pair1.1);
    let s2 = g.sigma_set(pair2.0, pair2.1);
    s1.intersection_len(&s2) == 1
}

/// Decides the Beauville property by sweeping every generating pair up to
/// conjugacy and looking for two disjoint signatures.
pub fn beauville_search_exhaustive(g: &Group) -> Result<BeauvilleReport> {
    let threshold = g.config().exhaustive_threshold;
    if g.order() > threshold {
        return Err(Error::Threshold { order: g.order(), threshold });
    }
    match g.rank_info() {
        RankInfo::Trivial | RankInfo::Cyclic => return Ok(BeauvilleReport::no("cyclic", Method::Certificate)),
        RankInfo::Other => return Ok(BeauvilleReport::no("not-two-generated", Method::Certificate)),
        RankInfo::Two => {}
    }
    let witnesses = signature_witnesses(g);
    match disjoint_pair(&witnesses) {
        Some((a, b)) => {
            Ok(BeauvilleReport::yes(Structure { pair1: witnesses[&a], pair2: witnesses[&b] }, Method::Exhaustive))
        }
        None => Ok(BeauvilleReport::no("exhausted-signatures", Method::Exhaustive)),
    }
}

/// Every signature of a generating pair, with its least witness pair.
pub fn signature_witnesses(g: &Group) -> BTreeMap<Signature, (Code, Code)> {
    let index = g.socle_index();
    let class_reps: Vec<Code> = if g.has_frattini_coords() {
        g.class_reps().into_iter().filter(|&x| g.frattini_coords(x) != Some((0, 0))).collect()
    } else {
        g.class_reps()
    };
    let ys: Vec<Code> = if g.has_frattini_coords() {
        g.elements().filter(|&y| g.frattini_coords(y) != Some((0, 0))).collect()
    } else {
        g.element_list().to_vec()
    };
    let merged: HashMap<Signature, (Code, Code)> = class_reps
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Signature, (Code, Code)>, &x| {
            for &y in &ys {
                if !g.generates(x, y) {
                    continue;
                }
                let sig = Signature::of(index, x, y, g.mul(x, y));
                acc.entry(sig).and_modify(|w| *w = (*w).min((x, y))).or_insert((x, y));
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (sig, w) in b {
                a.entry(sig).and_modify(|v| *v = (*v).min(w)).or_insert(w);
            }
            a
        });
    merged.into_iter().collect()
}

/// Least pair of disjoint signatures, by inclusion-exclusion over subset counts.
pub fn disjoint_pair<V>(sigs: &BTreeMap<Signature, V>) -> Option<(Signature, Signature)> {
    let mut counts: HashMap<Vec<u32>, i64> = HashMap::new();
    for sig in sigs.keys() {
        for (_, sub) in sig.subsets() {
            *counts.entry(sub).or_default() += 1;
        }
    }
    let total = sigs.len() as i64;
    for a in sigs.keys() {
        let meeting: i64 = a.subsets().map(|(k, sub)| if k % 2 == 1 { counts[&sub] } else { -counts[&sub] }).sum();
        if meeting < total {
            let b = sigs.keys().find(|b| a.is_disjoint(b))?;
            return Some((*a, *b));
        }
    }
    None
}

/// Samples pairs of generating pairs from a seeded ChaCha8 stream. Never
/// answers `No`.
pub fn beauville_search_random(g: &Group, seed: u64, budget: u64) -> BeauvilleReport {
    if !matches!(g.rank_info(), RankInfo::Two) {
        return BeauvilleReport::unknown(Method::Randomized);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = |rng: &mut ChaCha8Rng| loop {
        let x = g.random_element(rng);
        let y = g.random_element(rng);
        if g.generates(x, y) {
            return (x, y);
        }
    };
    for _ in 0..budget {
        let p1 = pair(&mut rng);
        let p2 = pair(&mut rng);
        if beauville_verify(g, p1, p2) {
            return BeauvilleReport::yes(Structure { pair1: p1, pair2: p2 }, Method::Randomized);
        }
    }
    BeauvilleReport::unknown(Method::Randomized)
}
