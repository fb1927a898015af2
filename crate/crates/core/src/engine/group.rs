use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::socle::SocleIndex;
use super::{prime_divisors, Code, ElementSet, GroupOracle};
use crate::error::{Error, Result};

/// Inverses are tabulated up to this order; above it they are computed on demand.
const INVERSE_CACHE_LIMIT: u64 = 1 << 20;

/// Tunable limits shared by every analysis of one realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub element_budget: u64,
    pub exhaustive_threshold: u64,
    pub semi_abelian_threshold: u64,
    pub axiom_samples: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            element_budget: 8_000_000,
            exhaustive_threshold: 20_000,
            semi_abelian_threshold: 10_000,
            axiom_samples: 64,
            seed: 0x5eed_b0a7,
        }
    }
}

/// A subgroup as an element set together with a generating list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub set: ElementSet,
    pub gens: Vec<Code>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.set.len() as u64
    }

    pub fn contains(&self, c: Code) -> bool {
        self.set.contains(c)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    UpperCentral,
    Derived,
    Frattini,
    Center,
}

/// Shape of `G/Φ(G)` as seen from the generating set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankInfo {
    Trivial,
    Cyclic,
    /// Every Sylow quotient of `G/Φ(G)` is elementary abelian of rank 2.
    Two,
    /// `G/Φ(G)` is neither cyclic nor `(Z/r)²`.
    Other,
}

/// An enumerated finite group. Immutable after [`Group::realize`]; all caches
/// are filled lazily and are safe to share between threads.
pub struct Group {
    oracle: Arc<dyn GroupOracle>,
    gens: Vec<Code>,
    word_gens: Vec<Code>,
    names: Vec<String>,
    order: u64,
    primes: Vec<u64>,
    members: Option<ElementSet>,
    coords: Option<Vec<u32>>,
    config: Config,
    element_list: OnceLock<Vec<Code>>,
    inverses: OnceLock<Vec<Code>>,
    power_map: OnceLock<Vec<Code>>,
    log_orders: OnceLock<Vec<u8>>,
    frattini: OnceLock<Subgroup>,
    socle: OnceLock<SocleIndex>,
    classes: OnceLock<Vec<Code>>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group").field("order", &self.order).field("gens", &self.names).finish_non_exhaustive()
    }
}

impl Group {
    /// Enumerates the closure of `gens` under the oracle and checks the group
    /// axioms on seeded samples.
    pub fn realize(oracle: Arc<dyn GroupOracle>, gens: Vec<Code>, names: Vec<String>, config: Config) -> Result<Group> {
        let space = oracle.code_space();
        if space > u32::MAX as u64 {
            return Err(Error::Resource { what: "code space".into(), needed: space, budget: u32::MAX as u64 });
        }
        if let Some(&g) = gens.iter().find(|&&g| g as u64 >= space) {
            return Err(Error::Integrity(format!("generator code {g} outside code space {space}")));
        }
        let names =
            if names.len() == gens.len() { names } else { (0..gens.len()).map(|i| format!("g{}", i + 1)).collect() };

        let mut walk = bfs(oracle.as_ref(), &gens, config.element_budget)?;
        let order = walk.order.len() as u64;
        let primes = prime_divisors(order);
        let radical: u64 = primes.iter().product();

        // Frattini labels need a generating pair; with more generators, look
        // for a pair among them that already generates.
        let mut pair = None;
        if gens.len() == 2 {
            pair = Some((0, 1));
        } else if gens.len() > 2 {
            'outer: for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    let w = bfs(oracle.as_ref(), &[gens[i], gens[j]], config.element_budget)?;
                    if w.order.len() as u64 == order {
                        walk = w;
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
        }
        let coords = match pair {
            Some(_) if order > 1 && radical < (1 << 16) => {
                frattini_labels(&walk.order, &walk.succ, space, radical as u32)
            }
            _ => None,
        };
        let (gens, names, word_gens) = match pair {
            Some((i, j)) => (vec![gens[i], gens[j]], names, gens),
            None => (gens.clone(), names, gens),
        };

        let members = (order != space).then_some(walk.visited);
        let group = Group {
            oracle,
            gens,
            word_gens,
            names,
            order,
            primes,
            members,
            coords,
            config,
            element_list: OnceLock::new(),
            inverses: OnceLock::new(),
            power_map: OnceLock::new(),
            log_orders: OnceLock::new(),
            frattini: OnceLock::new(),
            socle: OnceLock::new(),
            classes: OnceLock::new(),
        };
        group.check_axioms()?;
        Ok(group)
    }

    fn check_axioms(&self) -> Result<()> {
        let id = self.identity();
        if self.oracle.mul(id, id) != id {
            return Err(Error::Integrity("identity is not idempotent".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        for _ in 0..self.config.axiom_samples {
            let [a, b, c] = [0; 3].map(|_| self.random_element(&mut rng));
            let lhs = self.mul(self.mul(a, b), c);
            let rhs = self.mul(a, self.mul(b, c));
            if lhs != rhs {
                return Err(Error::Integrity(format!(
                    "associativity fails on ({}, {}, {})",
                    self.format(a),
                    self.format(b),
                    self.format(c)
                )));
            }
            if self.mul(a, id) != a || self.mul(id, a) != a {
                return Err(Error::Integrity(format!("identity law fails at {}", self.format(a))));
            }
            let ai = self.oracle.inv(a);
            if self.mul(a, ai) != id || self.mul(ai, a) != id {
                return Err(Error::Integrity(format!("inverse law fails at {}", self.format(a))));
            }
        }
        Ok(())
    }

    pub fn oracle(&self) -> &Arc<dyn GroupOracle> {
        &self.oracle
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn code_space(&self) -> u64 {
        self.oracle.code_space()
    }

    pub fn gens(&self) -> &[Code] {
        &self.gens
    }

    /// Names of the generators as supplied, usable in element words.
    pub fn gen_names(&self) -> &[String] {
        &self.names
    }

    /// Generators as supplied to [`Group::realize`], in the order of
    /// [`Group::gen_names`].
    pub fn word_gens(&self) -> &[Code] {
        &self.word_gens
    }

    /// Distinct primes dividing the order.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The prime `p` when the group is a nontrivial `p`-group.
    pub fn prime(&self) -> Option<u64> {
        match self.primes[..] {
            [p] => Some(p),
            _ => None,
        }
    }

    pub fn radical(&self) -> u64 {
        self.primes.iter().product()
    }

    #[inline]
    pub fn identity(&self) -> Code {
        self.oracle.identity()
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        self.oracle.mul(a, b)
    }

    pub fn inv(&self, a: Code) -> Code {
        if self.order <= INVERSE_CACHE_LIMIT {
            let table = self.inverses.get_or_init(|| {
                let mut t = vec![0; self.code_space() as usize];
                let elems = self.element_list();
                let inv: Vec<Code> = elems.par_iter().map(|&g| self.oracle.inv(g)).collect();
                for (&g, &h) in elems.iter().zip(&inv) {
                    t[g as usize] = h;
                }
                t
            });
            table[a as usize]
        } else {
            self.oracle.inv(a)
        }
    }

    pub fn pow(&self, g: Code, mut n: u64) -> Code {
        let mut base = g;
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `x^g = g⁻¹xg`.
    pub fn conj(&self, x: Code, g: Code) -> Code {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[x, y] = x⁻¹y⁻¹xy`.
    pub fn comm(&self, x: Code, y: Code) -> Code {
        let xi = self.inv(x);
        let yi = self.inv(y);
        self.mul(self.mul(xi, yi), self.mul(x, y))
    }

    pub fn format(&self, a: Code) -> String {
        self.oracle.format(a)
    }

    pub fn contains(&self, c: Code) -> bool {
        match &self.members {
            None => (c as u64) < self.order,
            Some(m) => m.contains(c),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Code> + '_ {
        let n = if self.members.is_none() { self.order as Code } else { 0 };
        (0..n).chain(self.members.iter().flat_map(|m| m.iter()))
    }

    /// All element codes in ascending order.
    pub fn element_list(&self) -> &[Code] {
        self.element_list.get_or_init(|| self.elements().collect())
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Code {
        match &self.members {
            None => rng.gen_range(0..self.order) as Code,
            Some(_) => {
                let list = self.element_list();
                list[rng.gen_range(0..list.len())]
            }
        }
    }

    /// Evaluates a word given as `(generator index, exponent)` factors.
    pub fn word(&self, factors: &[(usize, i64)]) -> Code {
        let mut acc = self.identity();
        for &(i, e) in factors {
            let g = if e < 0 { self.inv(self.word_gens[i]) } else { self.word_gens[i] };
            acc = self.mul(acc, self.pow(g, e.unsigned_abs()));
        }
        acc
    }

    /// Parses `u v^2 (uv)` style words over the generator names, or a literal
    /// element in the oracle's own format.
    pub fn parse_element(&self, text: &str) -> Option<Code> {
        if let Some(c) = self.oracle.parse(text) {
            return self.contains(c).then_some(c);
        }
        let mut acc = self.identity();
        for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().ok()?),
                None => (token, 1),
            };
            if name == "1" {
                continue;
            }
            let i = self.names.iter().position(|n| n == name)?;
            let g = if exp < 0 { self.inv(self.word_gens[i]) } else { self.word_gens[i] };
            acc = self.mul(acc, self.pow(g, exp.unsigned_abs()));
        }
        Some(acc)
    }

    // ---- element orders -------------------------------------------------

    /// `g ↦ g^p` for every element of a `p`-group.
    pub fn power_map(&self) -> Option<&[Code]> {
        let p = self.prime()?;
        Some(self.power_map.get_or_init(|| {
            let mut map = vec![0; self.code_space() as usize];
            let elems = self.element_list();
            let powers: Vec<Code> = elems.par_iter().map(|&g| self.pow(g, p)).collect();
            for (&g, &h) in elems.iter().zip(&powers) {
                map[g as usize] = h;
            }
            map
        }))
    }

    /// `log_p` of every element order, for `p`-groups.
    pub fn log_orders(&self) -> Option<&[u8]> {
        let pmap = self.power_map()?;
        Some(self.log_orders.get_or_init(|| {
            let mut lo = vec![u8::MAX; self.code_space() as usize];
            lo[self.identity() as usize] = 0;
            let mut chain = Vec::new();
            for g in self.elements() {
                let mut x = g;
                while lo[x as usize] == u8::MAX {
                    chain.push(x);
                    x = pmap[x as usize];
                }
                let mut v = lo[x as usize];
                while let Some(y) = chain.pop() {
                    v += 1;
                    lo[y as usize] = v;
                }
            }
            lo
        }))
    }

    /// Smallest `n ≥ 1` with `g^n = 1`.
    pub fn element_order(&self, g: Code) -> u64 {
        if let (Some(p), Some(lo)) = (self.prime(), self.log_orders.get()) {
            return p.pow(lo[g as usize] as u32);
        }
        if let Some(p) = self.prime() {
            let id = self.identity();
            let mut x = g;
            let mut n = 1;
            while x != id {
                x = self.pow(x, p);
                n *= p;
            }
            return n;
        }
        let mut n = self.order;
        for &q in &self.primes {
            while n.is_multiple_of(q) && self.pow(g, n / q) == self.identity() {
                n /= q;
            }
        }
        n
    }

    /// `e` with `exp G = p^e`, for `p`-groups.
    pub fn exponent_log(&self) -> Option<u32> {
        let lo = self.log_orders()?;
        Some(self.elements().map(|g| lo[g as usize] as u32).max().unwrap_or(0))
    }

    /// Exponent of the group (least common multiple of element orders).
    pub fn exponent(&self) -> u64 {
        if let (Some(p), Some(e)) = (self.prime(), self.exponent_log()) {
            return p.pow(e);
        }
        let mut exp = 1u64;
        for g in self.elements() {
            let o = self.element_order(g);
            exp = exp / gcd(exp, o) * o;
        }
        exp
    }

    // ---- subgroups ------------------------------------------------------

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { set: ElementSet::from_codes(self.code_space(), [self.identity()]), gens: Vec::new() }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { set: ElementSet::from_codes(self.code_space(), self.elements()), gens: self.gens.clone() }
    }

    /// Adds `x` to the generators of `h` and closes.
    pub fn extend(&self, h: &mut Subgroup, x: Code) {
        if h.set.contains(x) {
            return;
        }
        h.gens.push(x);
        let mut queue: VecDeque<Code> = h.set.iter().collect();
        while let Some(a) = queue.pop_front() {
            for &s in &h.gens {
                let b = self.mul(a, s);
                if h.set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
    }

    /// Subgroup generated by `seeds`; with `normal`, the normal closure.
    pub fn subgroup_closure(&self, seeds: &[Code], normal: bool) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for &s in seeds {
            self.extend(&mut h, s);
        }
        if normal {
            self.normalize(&mut h);
        }
        h
    }

    fn normalize(&self, h: &mut Subgroup) {
        let ginv: Vec<Code> = self.gens.iter().map(|&g| self.inv(g)).collect();
        let mut i = 0;
        while i < h.gens.len() {
            let s = h.gens[i];
            for (&g, &gi) in self.gens.iter().zip(&ginv) {
                let c = self.mul(self.mul(gi, s), g);
                self.extend(h, c);
            }
            i += 1;
        }
    }

    /// Subgroup generated by `{g^n : g ∈ G}`.
    pub fn power_subgroup(&self, n: u64) -> Subgroup {
        let mut h = self.trivial_subgroup();
        let powers = self.power_values(n);
        for x in powers.iter() {
            self.extend(&mut h, x);
        }
        h
    }

    /// The set `{g^n : g ∈ G}`.
    pub fn power_values(&self, n: u64) -> ElementSet {
        let mut set = ElementSet::new(self.code_space());
        if let (Some(p), Some(pmap)) = (self.prime(), self.power_map()) {
            let mut k = n;
            let mut steps = 0;
            while k > 1 && k.is_multiple_of(p) {
                k /= p;
                steps += 1;
            }
            if k == 1 {
                for g in self.elements() {
                    let mut x = g;
                    for _ in 0..steps {
                        x = pmap[x as usize];
                    }
                    set.insert(x);
                }
                return set;
            }
        }
        let vals: Vec<Code> = self.element_list().par_iter().map(|&g| self.pow(g, n)).collect();
        for v in vals {
            set.insert(v);
        }
        set
    }

    /// `{g : g^n = 1}` as a set.
    pub fn omega_set(&self, n: u64) -> ElementSet {
        let id = self.identity();
        if let (Some(p), Some(lo)) = (self.prime(), self.log_orders()) {
            let mut v = 0u32;
            let mut k = n;
            while k.is_multiple_of(p) {
                k /= p;
                v += 1;
            }
            return ElementSet::from_codes(self.code_space(), self.elements().filter(|&g| lo[g as usize] as u32 <= v));
        }
        ElementSet::from_codes(self.code_space(), self.elements().filter(|&g| self.pow(g, n) == id))
    }

    /// Subgroup generated by the elements of order dividing `n`.
    pub fn omega_subgroup(&self, n: u64) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for x in self.omega_set(n).iter() {
            self.extend(&mut h, x);
        }
        h
    }

    pub fn centralizer_set(&self, of: &[Code]) -> ElementSet {
        ElementSet::from_codes(
            self.code_space(),
            self.elements().filter(|&g| of.iter().all(|&x| self.mul(g, x) == self.mul(x, g))),
        )
    }

    pub fn center(&self) -> Subgroup {
        let set = self.centralizer_set(&self.gens);
        self.subgroup_from_set(set)
    }

    /// Wraps a set already known to be a subgroup, picking generators greedily.
    pub fn subgroup_from_set(&self, set: ElementSet) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for x in set.iter() {
            if h.set.len() == set.len() {
                break;
            }
            self.extend(&mut h, x);
        }
        debug_assert!(h.set == set, "set is not closed under multiplication");
        h
    }

    /// `[H, G]` for a normal subgroup `H` given by its normal generators.
    fn commutator_with_group(&self, h: &Subgroup) -> Subgroup {
        let seeds: Vec<Code> =
            h.gens.iter().flat_map(|&x| self.gens.iter().map(move |&g| (x, g))).map(|(x, g)| self.comm(x, g)).collect();
        self.subgroup_closure(&seeds, true)
    }

    /// Whether the normal subgroup `N` lies in `Z_k(G)`, tested as `[N, G, …, G] = 1`
    /// with `k` copies of `G`.
    pub fn in_upper_central(&self, n: &Subgroup, k: usize) -> bool {
        let mut cur = n.clone();
        for _ in 0..k {
            if cur.order() == 1 {
                break;
            }
            cur = self.commutator_with_group(&cur);
        }
        cur.order() == 1
    }

    /// `Φ(H) = H′H^r` for a normal subgroup `H`, `r` the radical of `|G|`.
    fn frattini_of(&self, h: &Subgroup) -> Subgroup {
        let r = self.radical();
        let mut seeds = Vec::new();
        for (i, &x) in h.gens.iter().enumerate() {
            seeds.push(self.pow(x, r));
            for &y in &h.gens[i + 1..] {
                seeds.push(self.comm(x, y));
            }
        }
        self.subgroup_closure(&seeds, true)
    }

    pub fn frattini(&self) -> &Subgroup {
        self.frattini.get_or_init(|| self.frattini_of(&self.whole()))
    }

    pub fn series(&self, kind: SeriesKind) -> Vec<Subgroup> {
        let mut out = Vec::new();
        match kind {
            SeriesKind::LowerCentral | SeriesKind::Derived | SeriesKind::Frattini => {
                let mut cur = self.whole();
                loop {
                    let next = match kind {
                        SeriesKind::LowerCentral => self.commutator_with_group(&cur),
                        SeriesKind::Derived => {
                            let seeds: Vec<Code> = cur
                                .gens
                                .iter()
                                .enumerate()
                                .flat_map(|(i, &x)| cur.gens[i + 1..].iter().map(move |&y| (x, y)))
                                .map(|(x, y)| self.comm(x, y))
                                .collect();
                            self.subgroup_closure(&seeds, true)
                        }
                        _ => self.frattini_of(&cur),
                    };
                    let stalled = next.order() == cur.order();
                    out.push(cur);
                    if stalled {
                        break;
                    }
                    cur = next;
                }
            }
            SeriesKind::UpperCentral => {
                let mut cur = self.trivial_subgroup();
                loop {
                    let next_set = ElementSet::from_codes(
                        self.code_space(),
                        self.elements().filter(|&g| self.gens.iter().all(|&s| cur.contains(self.comm(g, s)))),
                    );
                    let stalled = next_set.len() == cur.set.len();
                    out.push(cur);
                    if stalled {
                        break;
                    }
                    cur = self.subgroup_from_set(next_set);
                }
            }
            SeriesKind::Center => out.push(self.center()),
        }
        out
    }

    /// Nilpotency class, or `None` when the lower central series stalls above 1.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let lcs = self.series(SeriesKind::LowerCentral);
        let last = lcs.last()?;
        (last.order() == 1).then(|| lcs.len().saturating_sub(1))
    }

    // ---- Frattini quotient ----------------------------------------------

    pub fn rank_info(&self) -> RankInfo {
        if self.order == 1 {
            return RankInfo::Trivial;
        }
        if self.coords.is_some() {
            return RankInfo::Two;
        }
        let index = self.order / self.frattini().order();
        let r = self.radical();
        if index == r {
            RankInfo::Cyclic
        } else if index == r * r {
            RankInfo::Two
        } else {
            RankInfo::Other
        }
    }

    /// Coordinates of `g` in `G/Φ(G) ≅ (Z/r)²` with the generator pair as basis.
    pub fn frattini_coords(&self, g: Code) -> Option<(u32, u32)> {
        let r = self.radical() as u32;
        self.coords.as_ref().map(|c| {
            let v = c[g as usize];
            (v / r, v % r)
        })
    }

    pub fn has_frattini_coords(&self) -> bool {
        self.coords.is_some()
    }

    /// Whether `x, y` generate the group.
    pub fn generates(&self, x: Code, y: Code) -> bool {
        if let (Some((a, b)), Some((c, d))) = (self.frattini_coords(x), self.frattini_coords(y)) {
            let r = self.radical() as i64;
            let det = (a as i64 * d as i64 - b as i64 * c as i64).rem_euclid(r);
            return gcd(det as u64, r as u64) == 1;
        }
        self.subgroup_closure(&[x, y], false).order() == self.order
    }

    /// Index `0..=p` of the line of `G/Φ(G)` through the image of `g`
    /// (`None` for `g ∈ Φ(G)`). Lines `0..p` are spanned by `(1, λ)`, line `p`
    /// by `(0, 1)`.
    pub fn line_of(&self, g: Code) -> Option<usize> {
        let p = self.prime()? as i64;
        let (a, b) = self.frattini_coords(g)?;
        match (a, b) {
            (0, 0) => None,
            (0, _) => Some(p as usize),
            (a, b) => {
                let ai = super::mod_inverse(a as i64, p)?;
                Some(((b as i64 * ai) % p) as usize)
            }
        }
    }

    /// The `p + 1` maximal subgroups, as preimages of the lines of `G/Φ(G)`.
    pub fn maximal_subgroups(&self) -> Result<Vec<ElementSet>> {
        let p = self.prime().ok_or_else(|| Error::Unsupported("maximal subgroups of a non-p-group".into()))?;
        if self.coords.is_none() {
            let index = self.order / self.frattini().order();
            return Err(Error::Rank { index, expected: p * p });
        }
        let mut out = vec![ElementSet::new(self.code_space()); p as usize + 1];
        for g in self.elements() {
            match self.line_of(g) {
                None => out.iter_mut().for_each(|m| {
                    m.insert(g);
                }),
                Some(l) => {
                    out[l].insert(g);
                }
            }
        }
        Ok(out)
    }

    // ---- conjugacy --------------------------------------------------------

    /// Conjugacy orbit of `x` under the generators.
    pub fn conjugacy_orbit(&self, x: Code) -> ElementSet {
        let ginv: Vec<Code> = self.gens.iter().map(|&g| self.inv(g)).collect();
        let mut orbit = ElementSet::from_codes(self.code_space(), [x]);
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            for (&g, &gi) in self.gens.iter().zip(&ginv) {
                let z = self.mul(self.mul(gi, y), g);
                if orbit.insert(z) {
                    queue.push(z);
                }
            }
        }
        orbit
    }

    /// `{[x, g] : g ∈ G}`, obtained as `x⁻¹ · class(x)`.
    pub fn commutator_image_set(&self, x: Code) -> ElementSet {
        let xi = self.inv(x);
        ElementSet::from_codes(self.code_space(), self.conjugacy_orbit(x).iter().map(|y| self.mul(xi, y)))
    }

    /// Conjugacy class representative (least code) of every element.
    pub fn class_map(&self) -> &[Code] {
        self.classes.get_or_init(|| {
            let ginv: Vec<Code> = self.gens.iter().map(|&g| self.inv(g)).collect();
            let mut uf = UnionFind::new(self.code_space() as usize);
            for x in self.elements() {
                for (&g, &gi) in self.gens.iter().zip(&ginv) {
                    uf.union(x, self.mul(self.mul(gi, x), g));
                }
            }
            let mut rep = vec![Code::MAX; self.code_space() as usize];
            for x in self.elements() {
                let r = uf.find(x) as usize;
                if rep[r] == Code::MAX {
                    rep[r] = x;
                }
            }
            let mut map = vec![0; self.code_space() as usize];
            for x in self.elements() {
                map[x as usize] = rep[uf.find(x) as usize];
            }
            map
        })
    }

    pub fn class_reps(&self) -> Vec<Code> {
        let map = self.class_map();
        self.elements().filter(|&x| map[x as usize] == x).collect()
    }

    pub fn socle_index(&self) -> &SocleIndex {
        self.socle.get_or_init(|| SocleIndex::build(self))
    }

    pub fn socle_index_if_built(&self) -> Option<&SocleIndex> {
        self.socle.get()
    }

    /// Literal `Σ(x, y)`: the conjugates of `⟨x⟩`, `⟨y⟩` and `⟨xy⟩` by every element.
    pub fn sigma_set(&self, x: Code, y: Code) -> ElementSet {
        let mut out = ElementSet::new(self.code_space());
        let id = self.identity();
        for z in [x, y, self.mul(x, y)] {
            let mut cyclic = vec![id];
            let mut c = z;
            while c != id {
                cyclic.push(c);
                c = self.mul(c, z);
            }
            for g in self.elements() {
                let gi = self.inv(g);
                for &c in &cyclic {
                    out.insert(self.mul(self.mul(gi, c), g));
                }
            }
        }
        out
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Labels every element by the exponent sums of a path from the identity,
/// reduced mod `r`, and checks that the labelling is a homomorphism onto
/// `(Z/r)²`. `order` lists the elements in discovery order and `succ[i]`
/// holds the two successors of `order[i]`.
struct Walk {
    visited: ElementSet,
    order: Vec<Code>,
    succ: Vec<[Code; 2]>,
}

/// Breadth-first closure from the identity. With exactly two generators the
/// successor codes are kept so Frattini labels can be derived afterwards.
fn bfs(oracle: &dyn GroupOracle, gens: &[Code], budget: u64) -> Result<Walk> {
    let space = oracle.code_space();
    let id = oracle.identity();
    let track = gens.len() == 2;
    let mut visited = ElementSet::new(space);
    visited.insert(id);
    let mut order = vec![id];
    let mut succ = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let g = order[head];
        head += 1;
        let mut s = [0; 2];
        for (i, &x) in gens.iter().enumerate() {
            let h = oracle.mul(g, x);
            if track {
                s[i] = h;
            }
            if visited.insert(h) {
                if visited.len() as u64 > budget {
                    return Err(Error::Resource { what: "group closure".into(), needed: visited.len() as u64, budget });
                }
                order.push(h);
            }
        }
        if track {
            succ.push(s);
        }
    }
    Ok(Walk { visited, order, succ })
}

fn frattini_labels(order: &[Code], succ: &[[Code; 2]], space: u64, r: u32) -> Option<Vec<u32>> {
    let mut lab = vec![u32::MAX; space as usize];
    lab[order[0] as usize] = 0;
    let step = |v: u32, i: usize| -> u32 {
        let (a, b) = (v / r, v % r);
        if i == 0 {
            ((a + 1) % r) * r + b
        } else {
            a * r + (b + 1) % r
        }
    };
    for (k, &g) in order.iter().enumerate() {
        let v = lab[g as usize];
        debug_assert_ne!(v, u32::MAX);
        for (i, &h) in succ[k].iter().enumerate() {
            let w = step(v, i);
            let slot = &mut lab[h as usize];
            if *slot == u32::MAX {
                *slot = w;
            } else if *slot != w {
                return None;
            }
        }
    }
    Some(lab)
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}
