use serde::{Deserialize, Serialize};

use super::named::zm;
use super::series::compose_slices;
use super::TruncSeries;
use crate::engine::{Code, GroupOracle};
use crate::error::{Error, Result};

/// Which finite quotient of the Nottingham group to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuotientSpec {
    /// `N/N_k`.
    Full { p: u32, k: u32 },
    /// `N/W` for an intermediate `W` of the diamond `N_{z_m-1}/N_{z_m+1}`:
    /// `W = ⟨e_α, N_{z_m+1}⟩` for `alpha = Some(α)`, `W = N_{z_m}` for `None`.
    Diamond { p: u32, m: u32, alpha: Option<u32> },
}

impl QuotientSpec {
    pub fn p(&self) -> u32 {
        match *self {
            QuotientSpec::Full { p, .. } | QuotientSpec::Diamond { p, .. } => p,
        }
    }

    /// `log_p` of the group order.
    pub fn log_order(&self) -> u32 {
        match *self {
            QuotientSpec::Full { k, .. } => k.saturating_sub(1),
            QuotientSpec::Diamond { p, m, .. } => zm(p as u64, m) as u32 - 1,
        }
    }
}

/// Multiplication oracle for a Nottingham quotient. Elements are series
/// `t + a_2t^2 + … + a_Kt^K`; the code lists the stored coefficients in base
/// `p`, `a_2` most significant.
#[derive(Debug, Clone)]
pub struct NottinghamQuotient {
    spec: QuotientSpec,
    p: u32,
    k: usize,
    /// Degrees whose coefficients are stored, ascending.
    degrees: Vec<usize>,
    /// For diamonds with finite α: `(z, α)`; the coefficient at `z` is zeroed.
    diamond: Option<(usize, u32)>,
    space: u64,
}

impl NottinghamQuotient {
    pub fn new(spec: QuotientSpec) -> Result<Self> {
        let p = spec.p();
        if p == 2 || !crate::engine::is_prime(p as u64) {
            return Err(Error::Parameter(format!("Nottingham quotients need an odd prime, got {p}")));
        }
        let (k, degrees, diamond): (usize, Vec<usize>, _) = match spec {
            QuotientSpec::Full { k, .. } => {
                if k < 1 {
                    return Err(Error::Parameter("N/N_k needs k >= 1".into()));
                }
                let k = k as usize;
                (k, (2..=k).collect(), None)
            }
            QuotientSpec::Diamond { m, alpha, .. } => {
                if m == 0 {
                    return Err(Error::Parameter("diamond quotients need m >= 1".into()));
                }
                let z = zm(p as u64, m) as usize;
                match alpha {
                    None => (z, (2..=z).collect(), None),
                    Some(a) if a < p => {
                        let degrees = (2..=z + 1).filter(|&d| d != z).collect();
                        (z + 1, degrees, Some((z, a)))
                    }
                    Some(a) => return Err(Error::Parameter(format!("alpha {a} is not in F_{p}"))),
                }
            }
        };
        let space = (p as u64).checked_pow(degrees.len() as u32).filter(|&s| s <= u32::MAX as u64);
        let space = space.ok_or_else(|| Error::Resource {
            what: "Nottingham quotient code space".into(),
            needed: u64::MAX,
            budget: u32::MAX as u64,
        })?;
        Ok(NottinghamQuotient { spec, p, k, degrees, diamond, space })
    }

    pub fn spec(&self) -> QuotientSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Truncation degree `K` of the representing series.
    pub fn truncation(&self) -> usize {
        self.k
    }

    /// Puts a raw coefficient vector (`c[i]` at `t^i`, length `K+1`) into
    /// canonical coset form.
    fn canonicalize(&self, c: &mut [u32]) {
        if let Some((z, alpha)) = self.diamond {
            // f · e_α^j = f + j t^z + j(α + 2a_2) t^{z+1}  (mod t^{z+2})
            let p = self.p as u64;
            let j = (p - c[z] as u64) % p;
            let shift = (alpha as u64 + 2 * c[2] as u64) % p;
            c[z + 1] = ((c[z + 1] as u64 + j * shift) % p) as u32;
            c[z] = 0;
        }
    }

    fn encode_raw(&self, c: &[u32]) -> Code {
        let mut code = 0u64;
        for &d in &self.degrees {
            code = code * self.p as u64 + c[d] as u64;
        }
        code as Code
    }

    fn decode_raw(&self, code: Code, c: &mut [u32]) {
        let mut x = code as u64;
        for &d in self.degrees.iter().rev() {
            c[d] = (x % self.p as u64) as u32;
            x /= self.p as u64;
        }
        c[0] = 0;
        c[1] = 1;
    }

    /// Image of a series; it is reduced or zero-padded to the truncation first.
    pub fn encode(&self, f: &TruncSeries) -> Code {
        let mut g = f.with_truncation(self.k);
        self.canonicalize(g.raw_mut());
        self.encode_raw(g.raw())
    }

    /// Canonical representative of a code.
    pub fn decode(&self, code: Code) -> TruncSeries {
        let mut f = TruncSeries::identity(self.p, self.k);
        self.decode_raw(code, f.raw_mut());
        f
    }
}

impl GroupOracle for NottinghamQuotient {
    fn code_space(&self) -> u64 {
        self.space
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, a: Code, b: Code) -> Code {
        let n = self.k + 1;
        if n > 64 {
            let f = self.decode(a).compose_unchecked(&self.decode(b));
            return self.encode(&f);
        }
        let mut fa = [0u32; 64];
        let mut fb = [0u32; 64];
        let mut out = [0u32; 64];
        self.decode_raw(a, &mut fa[..n]);
        self.decode_raw(b, &mut fb[..n]);
        compose_slices(self.p, &fa[..n], &fb[..n], &mut out[..n]);
        self.canonicalize(&mut out[..n]);
        self.encode_raw(&out[..n])
    }

    fn inv(&self, a: Code) -> Code {
        self.encode(&self.decode(a).invert())
    }

    fn format(&self, a: Code) -> String {
        let f = self.decode(a);
        let list: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
        format!("[{}]", list.join(","))
    }

    /// Accepts `[a2,a3,…]` (missing trailing coefficients are zero).
    fn parse(&self, text: &str) -> Option<Code> {
        let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
        let mut coeffs = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            coeffs.push(part.parse::<i64>().ok()?);
        }
        if coeffs.len() > self.k.saturating_sub(1) {
            return None;
        }
        Some(self.encode(&TruncSeries::from_coeffs(self.p, self.k, &coeffs)))
    }
}
