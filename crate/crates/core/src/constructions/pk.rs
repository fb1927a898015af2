use serde::{Deserialize, Serialize};

use super::cyclo::{ideal_subgroup, Cyclotomic, HowellBasis};
use crate::engine::{Code, GroupOracle, Radix};
use crate::error::{Error, Result};

/// Tables of `ζ^j` on coset codes are kept up to this many entries.
const ZETA_TABLE_LIMIT: u64 = 1 << 24;

/// A nonsplit cyclic extension of `A/N` by `⟨u⟩`, `u^{p^k} = z`, with
/// `N = (ζ-1)^{d(e-1)+m}` and `z` the class of `(ζ-1)^{d(e-1)+m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub p: u64,
    pub k: u32,
    pub e: u32,
    pub m: u32,
}

/// `C_{p^k} ⋉ A/N` with `A = Z_p[ζ]` and `N = (ζ-1)^s`, or one of its
/// nonsplit cyclic extensions. Elements are pairs `(j, h)` with
/// `(j, h)(j', h') = (j + j', ζ^{j'}h + h')`, plus the central carry `z`
/// when `j + j'` wraps past `p^k`.
#[derive(Debug, Clone)]
pub struct CyclicExtension {
    ring: Cyclotomic,
    ideal: HowellBasis,
    radix: Radix,
    s: u64,
    pk: u64,
    cosets: u64,
    carry: Option<Code>,
    zeta: Option<Vec<Vec<Code>>>,
}

impl CyclicExtension {
    /// The split quotient `P_k/N`, `N = (ζ-1)^s`. The coefficient ring is
    /// `Z/p^e` with `e` minimal such that `e·d ≥ s`.
    pub fn split(p: u64, k: u32, s: u64) -> Result<Self> {
        let probe = Cyclotomic::new(p, k, 1)?;
        let d = probe.rank() as u64;
        let e = s.div_ceil(d).max(1) as u32;
        Self::build(Cyclotomic::new(p, k, e)?, s, None)
    }

    pub fn nonsplit(spec: ExtensionSpec) -> Result<Self> {
        let ExtensionSpec { p, k, e, m } = spec;
        if e <= k || m < 1 {
            return Err(Error::Parameter(format!("extension needs e > k and m >= 1 (got k={k}, e={e}, m={m})")));
        }
        let ring = Cyclotomic::new(p, k, e)?;
        let d = ring.rank() as u64;
        if m as u64 > d {
            return Err(Error::Parameter(format!("m = {m} exceeds the rank {d}")));
        }
        let s = d * (e as u64 - 1) + m as u64;
        let z = ring.uniformizer_pow(s - 1);
        Self::build(ring, s, Some(z))
    }

    fn build(ring: Cyclotomic, s: u64, carry: Option<Vec<u64>>) -> Result<Self> {
        let ideal = ideal_subgroup(&ring, s);
        let radix = ideal.coset_radix();
        let cosets = radix.space();
        let pk = ring.p().pow(ring.k());
        let space = pk.checked_mul(cosets).filter(|&n| n <= u32::MAX as u64);
        let space = space.ok_or_else(|| Error::Resource {
            what: "cyclic extension code space".into(),
            needed: pk.saturating_mul(cosets),
            budget: u32::MAX as u64,
        })?;
        let mut ext = CyclicExtension { ring, ideal, radix, s, pk, cosets, carry: None, zeta: None };
        ext.carry = carry.map(|z| ext.coset_code(&z));
        if space <= ZETA_TABLE_LIMIT {
            let mut tables = vec![(0..cosets as Code).collect::<Vec<_>>()];
            for j in 1..pk as usize {
                let prev = &tables[j - 1];
                let next: Vec<Code> = (0..cosets as Code)
                    .map(|h| ext.coset_code(&ext.ring.mul_zeta(&ext.coset(prev[h as usize]))))
                    .collect();
                tables.push(next);
            }
            ext.zeta = Some(tables);
        }
        Ok(ext)
    }

    pub fn ring(&self) -> &Cyclotomic {
        &self.ring
    }

    pub fn ideal(&self) -> &HowellBasis {
        &self.ideal
    }

    /// The `s` with `N = (ζ-1)^s`.
    pub fn depth(&self) -> u64 {
        self.s
    }

    pub fn is_split(&self) -> bool {
        self.carry.is_none()
    }

    /// `|A/N|`.
    pub fn coset_count(&self) -> u64 {
        self.cosets
    }

    /// Code of the class of `x ∈ A`.
    pub fn coset_code(&self, x: &[u64]) -> Code {
        let rep = self.ideal.reduce(x);
        let digits: Vec<u32> = rep.iter().map(|&c| c as u32).collect();
        self.radix.encode(&digits)
    }

    /// Canonical representative of a coset code.
    pub fn coset(&self, h: Code) -> Vec<u64> {
        self.radix.decode(h).into_iter().map(u64::from).collect()
    }

    pub fn element(&self, j: u64, h: &[u64]) -> Code {
        ((j % self.pk) * self.cosets) as Code + self.coset_code(h)
    }

    pub fn split_code(&self, c: Code) -> (u64, Code) {
        (c as u64 / self.cosets, (c as u64 % self.cosets) as Code)
    }

    /// `t` (or `u`) and `a_1 = φ⁻¹(1)`.
    pub fn generators(&self) -> Vec<Code> {
        vec![self.element(1, &self.ring.zero()), self.element(0, &self.ring.constant(1))]
    }

    fn zeta_pow(&self, j: u64, h: Code) -> Code {
        match &self.zeta {
            Some(t) => t[j as usize][h as usize],
            None => {
                let mut x = self.coset(h);
                for _ in 0..j {
                    x = self.ring.mul_zeta(&x);
                }
                self.coset_code(&x)
            }
        }
    }

    fn add_cosets(&self, a: Code, b: Code) -> Code {
        self.coset_code(&self.ring.add(&self.coset(a), &self.coset(b)))
    }
}

impl GroupOracle for CyclicExtension {
    fn code_space(&self) -> u64 {
        self.pk * self.cosets
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, a: Code, b: Code) -> Code {
        let (j, h) = self.split_code(a);
        let (j2, h2) = self.split_code(b);
        let mut sum = self.add_cosets(self.zeta_pow(j2, h), h2);
        if let Some(z) = self.carry {
            if j + j2 >= self.pk {
                sum = self.add_cosets(sum, z);
            }
        }
        (((j + j2) % self.pk) * self.cosets) as Code + sum
    }

    fn inv(&self, a: Code) -> Code {
        // a^{-1} = a^{|a| - 1}; |a| divides p^k·|A/N|.
        let n = self.code_space();
        let mut acc = self.identity();
        let mut base = a;
        let mut e = n - 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn format(&self, a: Code) -> String {
        let (j, h) = self.split_code(a);
        let list: Vec<String> = self.coset(h).iter().map(|c| c.to_string()).collect();
        format!("({j};[{}])", list.join(","))
    }

    /// Accepts `(j;[c0,c1,…])` with `h = Σ c_i ζ^i`; `h` is reduced mod `N`.
    fn parse(&self, text: &str) -> Option<Code> {
        let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (j, h) = inner.split_once(';')?;
        let j: u64 = j.trim().parse().ok()?;
        let h = h.trim().strip_prefix('[')?.strip_suffix(']')?;
        let mut coeffs = Vec::new();
        for part in h.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            coeffs.push(part.parse::<i64>().ok()?);
        }
        Some(self.element(j, &self.ring.from_poly(&coeffs)))
    }
}
