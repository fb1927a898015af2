use std::fmt;

use crate::error::{Error, Result};

/// `f(t) = t + a_2 t^2 + … + a_K t^K` over `F_p`, taken mod `t^{K+1}`.
///
/// The group law is substitution: `f · g = f(g(t))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    p: u32,
    // c[i] is the coefficient of t^i; c[0] = 0 and c[1] = 1.
    c: Vec<u32>,
}

impl TruncSeries {
    pub fn identity(p: u32, k: usize) -> Self {
        assert!(k >= 1, "truncation degree must be at least 1");
        let mut c = vec![0; k + 1];
        c[1] = 1;
        TruncSeries { p, c }
    }

    /// From `a_2, …, a_K`; entries are reduced mod `p`.
    pub fn from_coeffs(p: u32, k: usize, coeffs: &[i64]) -> Self {
        let mut f = Self::identity(p, k);
        for (i, &a) in coeffs.iter().enumerate().take(k.saturating_sub(1)) {
            f.c[i + 2] = a.rem_euclid(p as i64) as u32;
        }
        f
    }

    /// From `(degree, coefficient)` terms above `t`.
    pub fn from_terms(p: u32, k: usize, terms: &[(usize, i64)]) -> Self {
        let mut f = Self::identity(p, k);
        for &(d, a) in terms {
            if (2..=k).contains(&d) {
                f.c[d] = ((f.c[d] as i64 + a).rem_euclid(p as i64)) as u32;
            }
        }
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Truncation degree `K`.
    pub fn k(&self) -> usize {
        self.c.len() - 1
    }

    /// Coefficient of `t^i` (zero beyond the truncation).
    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// `a_2, …, a_K`.
    pub fn coeffs(&self) -> &[u32] {
        &self.c[2..]
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.c
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u32] {
        &mut self.c
    }

    pub fn is_identity(&self) -> bool {
        self.c[2..].iter().all(|&a| a == 0)
    }

    /// Reduction mod `t^{k+1}`, or zero-padding when `k` is larger.
    pub fn with_truncation(&self, k: usize) -> Self {
        let mut f = Self::identity(self.p, k);
        let n = k.min(self.k());
        f.c[2..=n].copy_from_slice(&self.c[2..=n]);
        f
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.k() != other.k() {
            return Err(Error::Shape(format!(
                "series over (p={}, K={}) and (p={}, K={})",
                self.p,
                self.k(),
                other.p,
                other.k()
            )));
        }
        Ok(())
    }

    /// The product `f(g(t))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_shape(g)?;
        Ok(self.compose_unchecked(g))
    }

    pub(crate) fn compose_unchecked(&self, g: &Self) -> Self {
        let mut out = vec![0; self.c.len()];
        compose_slices(self.p, &self.c, &g.c, &mut out);
        TruncSeries { p: self.p, c: out }
    }

    /// Compositional inverse, solved one degree at a time.
    pub fn invert(&self) -> Self {
        let k = self.k();
        let mut h = Self::identity(self.p, k);
        let mut img = vec![0; k + 1];
        for n in 2..=k {
            compose_slices(self.p, &self.c[..=n], &h.c[..=n], &mut img[..=n]);
            // f(h + δt^n) = f(h) + δt^n mod t^{n+1}.
            h.c[n] = (h.c[n] + self.p - img[n]) % self.p;
        }
        h
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.k());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        acc
    }

    /// `[f, g] = f⁻¹ g⁻¹ f g`.
    pub fn commutator(&self, g: &Self) -> Result<Self> {
        self.check_shape(g)?;
        let fi = self.invert();
        let gi = g.invert();
        Ok(fi.compose_unchecked(&gi).compose_unchecked(&self.compose_unchecked(g)))
    }

    /// The `k` with `f ∈ N_k ∖ N_{k+1}`, i.e. one less than the degree of the
    /// first nonzero coefficient above `t`. `None` stands for the identity.
    pub fn filtration_degree(&self) -> Option<usize> {
        (2..self.c.len()).find(|&i| self.c[i] != 0).map(|i| i - 1)
    }

    /// The fixture line `p K a2 … aK`.
    pub fn to_fixture(&self) -> String {
        let mut s = format!("{} {}", self.p, self.k());
        for a in self.coeffs() {
            s.push(' ');
            s.push_str(&a.to_string());
        }
        s
    }

    pub fn from_fixture(line: &str) -> Result<Self> {
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|w| w.parse::<i64>().map_err(|_| Error::Parameter(format!("bad number {w:?}"))))
            .collect::<Result<_>>()?;
        let [p, k, rest @ ..] = nums.as_slice() else {
            return Err(Error::Parameter("fixture line needs p and K".into()));
        };
        if *p < 2 || *k < 1 || rest.len() as i64 != k - 1 {
            return Err(Error::Parameter(format!("fixture line {line:?} has the wrong shape")));
        }
        Ok(Self::from_coeffs(*p as u32, *k as usize, rest))
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod t^{}, p={})", self, self.k() + 1, self.p)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t")?;
        for (i, &a) in self.c.iter().enumerate().skip(2) {
            match a {
                0 => {}
                1 => write!(f, "+t^{i}")?,
                a => write!(f, "+{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `out = f(g(t))` mod `t^{n}` with `n = out.len()`; both inputs have
/// `c[0] = 0`, `c[1] = 1` and at least `n` entries.
///
/// Horner's rule from the top coefficient, carrying only the precision each
/// stage still needs: the stage for `a_i` is multiplied by `g^{i-1}` later,
/// so it is needed mod `t^{n-i+1}`.
pub(crate) fn compose_slices(p: u32, f: &[u32], g: &[u32], out: &mut [u32]) {
    let n = out.len();
    let k = n - 1;
    let pp = p as u64;
    let mut h = [0u64; 64];
    let mut next = [0u64; 64];
    let h: &mut [u64] = if n <= 64 { &mut h[..n] } else { return compose_slices_heap(p, f, g, out) };
    let next: &mut [u64] = &mut next[..n];
    // h = a_K, known mod t^1.
    h[0] = f[k] as u64;
    for i in (1..k).rev() {
        let prec = k + 1 - i;
        for m in 0..prec {
            let mut acc = 0u64;
            for j in 1..=m {
                acc += g[j] as u64 * h[m - j];
            }
            next[m] = acc % pp;
        }
        next[0] = (next[0] + f[i] as u64) % pp;
        h[..prec].copy_from_slice(&next[..prec]);
    }
    out[0] = 0;
    for m in 1..n {
        let mut acc = 0u64;
        for j in 1..=m {
            acc += g[j] as u64 * h[m - j];
        }
        out[m] = (acc % pp) as u32;
    }
}

fn compose_slices_heap(p: u32, f: &[u32], g: &[u32], out: &mut [u32]) {
    let n = out.len();
    let k = n - 1;
    let pp = p as u64;
    let mut h = vec![0u64; n];
    let mut next = vec![0u64; n];
    h[0] = f[k] as u64;
    for i in (1..k).rev() {
        let prec = k + 1 - i;
        for m in 0..prec {
            next[m] = (1..=m).map(|j| g[j] as u64 * h[m - j]).sum::<u64>() % pp;
        }
        next[0] = (next[0] + f[i] as u64) % pp;
        h[..prec].copy_from_slice(&next[..prec]);
    }
    out[0] = 0;
    for m in 1..n {
        out[m] = ((1..=m).map(|j| g[j] as u64 * h[m - j]).sum::<u64>() % pp) as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct expansion `Σ a_i g^i` with full polynomial powers.
    fn naive_compose(f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
        let p = f.p as u64;
        let k = f.k();
        let mut out = vec![0u64; k + 1];
        let mut power = vec![0u64; k + 1];
        power[0] = 1;
        for i in 1..=k {
            let mut next = vec![0u64; k + 1];
            for a in 0..=k {
                for b in 0..=k - a {
                    next[a + b] = (next[a + b] + power[a] * g.c[b] as u64) % p;
                }
            }
            power = next;
            for d in 0..=k {
                out[d] = (out[d] + f.c[i] as u64 * power[d]) % p;
            }
        }
        TruncSeries { p: f.p, c: out.into_iter().map(|x| x as u32).collect() }
    }

    #[test]
    fn substitution_example() {
        let f = TruncSeries::from_coeffs(5, 3, &[1, 0]);
        let g = TruncSeries::from_coeffs(5, 3, &[0, 1]);
        assert_eq!(f.compose(&g).unwrap(), TruncSeries::from_coeffs(5, 3, &[1, 1]));
    }

    #[test]
    fn compose_matches_naive_expansion() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for &(p, k) in &[(3u32, 8usize), (5, 10), (7, 6), (3, 70)] {
            for _ in 0..20 {
                let f = TruncSeries::from_coeffs(p, k, &(2..=k).map(|_| next()).collect::<Vec<_>>());
                let g = TruncSeries::from_coeffs(p, k, &(2..=k).map(|_| next()).collect::<Vec<_>>());
                assert_eq!(f.compose(&g).unwrap(), naive_compose(&f, &g));
            }
        }
    }

    #[test]
    fn geometric_series_inverse() {
        let f = TruncSeries::from_coeffs(5, 3, &[1, 1]);
        assert_eq!(f.invert(), TruncSeries::from_coeffs(5, 3, &[-1, 1]));
        let id = TruncSeries::identity(5, 6);
        assert_eq!(id.invert(), id);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let f = TruncSeries::identity(5, 3);
        let g = TruncSeries::identity(5, 4);
        assert!(matches!(f.compose(&g), Err(Error::Shape(_))));
    }

    #[test]
    fn filtration_degrees() {
        assert_eq!(TruncSeries::from_terms(5, 6, &[(4, 2)]).filtration_degree(), Some(3));
        assert_eq!(TruncSeries::identity(5, 6).filtration_degree(), None);
    }

    #[test]
    fn fixture_round_trip() {
        let f = TruncSeries::from_coeffs(3, 5, &[1, 2, 0, 1]);
        assert_eq!(f.to_fixture(), "3 5 1 2 0 1");
        assert_eq!(TruncSeries::from_fixture(&f.to_fixture()).unwrap(), f);
        assert!(TruncSeries::from_fixture("3 5 1 2").is_err());
    }
}
