use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::named::{a_series, b_series, f_lambda, mul_trunc, zm};
use super::TruncSeries;
use crate::error::Result;

/// Order of the factors in the group law used by a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `f · g = f(g(t))`.
    #[default]
    Substitution,
    /// `f · g = g(f(t))`; only used to confirm the suites notice the swap.
    Mirrored,
}

impl Law {
    pub fn product(self, f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
        match self {
            Law::Substitution => f.compose_unchecked(g),
            Law::Mirrored => g.compose_unchecked(f),
        }
    }

    pub fn pow(self, f: &TruncSeries, n: u64) -> TruncSeries {
        // Powers of one element do not depend on the factor order.
        f.pow(n)
    }

    pub fn commutator(self, f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
        let fi = f.invert();
        let gi = g.invert();
        self.product(&self.product(&fi, &gi), &self.product(f, g))
    }
}

/// Outcome of one property suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), cases: 0, violations: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.failures.len() < 10 {
                self.failures.push(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

/// `M_{i,j}` = coefficient of `t^j` in `f(t)^i`, for `1 ≤ i, j ≤ n`
/// (stored 0-based).
pub fn transfer_matrix(f: &TruncSeries, n: usize) -> Vec<Vec<u64>> {
    let p = f.p() as u64;
    let base: Vec<u64> = (0..=n).map(|j| f.coeff(j) as u64).collect();
    let mut power = vec![0u64; n + 1];
    power[0] = 1;
    let mut rows = Vec::with_capacity(n);
    for _ in 1..=n {
        power = mul_trunc(p, &power, &base, n + 1);
        rows.push(power[1..=n].to_vec());
    }
    rows
}

fn mat_mul(p: u64, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in i..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in k..n {
                out[i][j] = (out[i][j] + x * b[k][j]) % p;
            }
        }
    }
    out
}

/// Coefficient of `t^n` in `f^{p^r}`, read off as entry `(1, n)` of `M^{p^r}`.
pub fn transfer_matrix_power(f: &TruncSeries, r: u32, n: usize) -> u32 {
    let p = f.p() as u64;
    let m = transfer_matrix(f, n);
    let mut e = p.pow(r);
    let mut base = m;
    let mut acc: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(p, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(p, &base, &base);
        }
    }
    acc[0][n - 1] as u32
}

/// `t + (1-λ)^m t^{z_m} - (1-λ)^{m+1} t^{z_m+1}` mod `t^{z_m+2}`.
pub fn pm_power_closed_form(p: u32, lambda: i64, m: u32) -> TruncSeries {
    let z = zm(p as u64, m) as usize;
    let pp = p as i64;
    let one_minus = (1 - lambda).rem_euclid(pp);
    let pw = |e: u32| (0..e).fold(1i64, |acc, _| acc * one_minus % pp);
    TruncSeries::from_terms(p, z + 1, &[(z, pw(m)), (z + 1, -pw(m + 1))])
}

fn random_in_layer(rng: &mut ChaCha8Rng, p: u32, k: usize, level: usize) -> TruncSeries {
    // An element of N_level: coefficients a_{level+1}, …, a_K free.
    let terms: Vec<(usize, i64)> = (level + 1..=k).map(|d| (d, rng.gen_range(0..p) as i64)).collect();
    TruncSeries::from_terms(p, k, &terms)
}

/// All elements of `N_level / N_k`.
fn layer_elements(p: u32, k: usize, level: usize) -> impl Iterator<Item = TruncSeries> {
    let free = k.saturating_sub(level);
    let count = (p as u64).pow(free as u32);
    (0..count).map(move |mut code| {
        let mut terms = Vec::with_capacity(free);
        for d in (level + 1..=k).rev() {
            terms.push((d, (code % p as u64) as i64));
            code /= p as u64;
        }
        TruncSeries::from_terms(p, k, &terms)
    })
}

/// Subgroup generated by `seeds`, closed under the given law.
fn closure(
    law: Law,
    k: usize,
    p: u32,
    seeds: impl IntoIterator<Item = TruncSeries>,
    limit: usize,
) -> Option<HashSet<TruncSeries>> {
    let mut set: HashSet<TruncSeries> = HashSet::new();
    set.insert(TruncSeries::identity(p, k));
    let mut gens: Vec<TruncSeries> = Vec::new();
    for s in seeds {
        if set.contains(&s) {
            continue;
        }
        gens.push(s);
        let mut frontier: Vec<TruncSeries> = set.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = law.product(&x, g);
                if set.insert(y.clone()) {
                    if set.len() > limit {
                        return None;
                    }
                    frontier.push(y);
                }
            }
        }
    }
    Some(set)
}

/// Whether a subgroup of `N/N_K` (as a set) equals the image of `N_level`.
fn is_layer(set: &HashSet<TruncSeries>, p: u32, k: usize, level: usize) -> bool {
    let expected = (p as u64).pow(k.saturating_sub(level) as u32);
    set.len() as u64 == expected && set.iter().all(|f| f.filtration_degree().is_none_or(|d| d >= level))
}

const ENUMERATION_LIMIT: u64 = 400_000;

/// `N_k^p = N_{pk+r}` (`r = k mod p`) in `N/N_K`, `K = min(pk+r+3, cap)`.
pub fn power_formula_suite(
    primes: &[u32],
    max_k: usize,
    cap: usize,
    samples: usize,
    law: Law,
    seed: u64,
) -> SuiteResult {
    let mut res = SuiteResult::new("powers of N_k");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in primes {
        for k in 1..=max_k {
            let r = k % p as usize;
            let target = p as usize * k + r;
            let trunc = (target + 3).min(cap);
            if trunc <= k {
                continue;
            }
            let pw = |f: &TruncSeries| law.pow(f, p as u64);
            let total = (p as u64).pow((trunc - k) as u32);
            let powers: Vec<TruncSeries> = if total <= ENUMERATION_LIMIT {
                layer_elements(p, trunc, k).map(|f| pw(&f)).collect()
            } else {
                (0..samples).map(|_| pw(&random_in_layer(&mut rng, p, trunc, k))).collect()
            };
            let level = target.min(trunc);
            let inside = powers.iter().all(|f| f.filtration_degree().is_none_or(|d| d >= level));
            let generated = closure(law, trunc, p, powers, 1 << 20);
            let ok = inside && generated.as_ref().is_some_and(|s| is_layer(s, p, trunc, level));
            res.record(ok, || format!("p={p} k={k} K={trunc}: p-th powers do not generate N_{target}"));
        }
    }
    res
}

/// `[N_k, N_l] = N_{k+l}`, or `N_{k+l+1}` when `k ≡ l (mod p)`.
pub fn commutator_formula_suite(
    primes: &[u32],
    max_k: usize,
    cap: usize,
    samples: usize,
    law: Law,
    seed: u64,
) -> SuiteResult {
    let mut res = SuiteResult::new("commutators of N_k, N_l");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in primes {
        for k in 1..=max_k {
            for l in k..=max_k {
                let target = k + l + ((k % p as usize == l % p as usize) as usize);
                let trunc = (target + 3).min(cap);
                let comms: Vec<TruncSeries> = (0..samples)
                    .map(|_| {
                        let f = random_in_layer(&mut rng, p, trunc, k);
                        let g = random_in_layer(&mut rng, p, trunc, l);
                        law.commutator(&f, &g)
                    })
                    .collect();
                let level = target.min(trunc);
                let inside = comms.iter().all(|f| f.filtration_degree().is_none_or(|d| d >= level));
                let generated = closure(law, trunc, p, comms, 1 << 20);
                let ok = inside && generated.as_ref().is_some_and(|s| is_layer(s, p, trunc, level));
                res.record(ok, || format!("p={p} k={k} l={l} K={trunc}: commutators do not generate N_{target}"));
            }
        }
    }
    res
}

/// Closed form of `f_λ^{p^m}` against repeated composition and against
/// transfer-matrix powering.
pub fn closed_form_suite(primes: &[u32], levels: &[u32]) -> SuiteResult {
    let mut res = SuiteResult::new("p^m-th powers of f_lambda");
    for &p in primes {
        for &m in levels {
            let z = zm(p as u64, m) as usize;
            for lambda in 0..p as i64 {
                let f = f_lambda(p, z + 1, lambda).expect("odd prime");
                let mut power = f.clone();
                for _ in 0..m {
                    let mut next = TruncSeries::identity(p, z + 1);
                    for _ in 0..p {
                        next = next.compose_unchecked(&power);
                    }
                    power = next;
                }
                let closed = pm_power_closed_form(p, lambda, m);
                res.record(power == closed, || format!("p={p} m={m} λ={lambda}: {power} vs {closed}"));
                let by_matrix = (2..=z + 1).all(|n| transfer_matrix_power(&f, m, n) == power.coeff(n));
                res.record(by_matrix, || format!("p={p} m={m} λ={lambda}: transfer matrix disagrees"));
            }
        }
    }
    res
}

/// `(fg)^{p^l} ≡ f^{p^l} (mod N_{z_{k+l}+1})` for `f ∈ N_{z_k-1}`, `g ∈ N_{z_k+1}`.
pub fn all_elements_suite(primes: &[u32], max_sum: u32, samples: usize, law: Law, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("powers modulo N_{z_{k+l}+1}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in primes {
        for k in 0..max_sum {
            for l in 1..=max_sum - k {
                let trunc = zm(p as u64, k + l) as usize + 1;
                let zk = zm(p as u64, k) as usize;
                let e = (p as u64).pow(l);
                for _ in 0..samples {
                    let f = random_in_layer(&mut rng, p, trunc, zk - 1);
                    let g = random_in_layer(&mut rng, p, trunc, zk + 1);
                    let lhs = law.pow(&law.product(&f, &g), e);
                    let rhs = law.pow(&f, e);
                    res.record(lhs == rhs, || format!("p={p} k={k} l={l}: f={f} g={g}"));
                }
            }
        }
    }
    res
}

/// `a^p = b^p = 1` at every truncation in `2..=max_k`.
pub fn order_p_suite(primes: &[u32], max_k: usize) -> SuiteResult {
    let mut res = SuiteResult::new("a and b have order p");
    for &p in primes {
        for k in 2..=max_k {
            let a = a_series(p, k).expect("odd prime");
            let b = b_series(p, k).expect("odd prime");
            let ok = a.pow(p as u64).is_identity()
                && b.pow(p as u64).is_identity()
                && !a.is_identity()
                && (k < 3 || !b.is_identity());
            res.record(ok, || format!("p={p} K={k}"));
        }
    }
    res
}

/// The product law against a term-by-term expansion of `f(g(t))`.
pub fn product_law_suite(primes: &[u32], k: usize, samples: usize, law: Law, seed: u64) -> SuiteResult {
    let mut res = SuiteResult::new("product is substitution");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in primes {
        for _ in 0..samples {
            let f = random_in_layer(&mut rng, p, k, 1);
            let g = random_in_layer(&mut rng, p, k, 1);
            let expected = substitute(&f, &g);
            let got = law.product(&f, &g);
            res.record(got == expected, || format!("p={p}: f={f} g={g}"));
        }
    }
    res
}

/// `Σ a_i g^i` with explicit powers of `g`.
fn substitute(f: &TruncSeries, g: &TruncSeries) -> TruncSeries {
    let p = f.p() as u64;
    let k = f.k();
    let gv: Vec<u64> = (0..=k).map(|i| g.coeff(i) as u64).collect();
    let mut power = vec![0u64; k + 1];
    power[0] = 1;
    let mut out = vec![0i64; k + 1];
    for i in 1..=k {
        power = mul_trunc(p, &power, &gv, k + 1);
        for d in 0..=k {
            out[d] = (out[d] + (f.coeff(i) as u64 * power[d] % p) as i64) % p as i64;
        }
    }
    TruncSeries::from_coeffs(f.p(), k, &out[2..])
}

/// Every suite with the default parameters.
pub fn run_all(law: Law, seed: u64) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        product_law_suite(&[3, 5, 7], 12, 100, law, seed),
        power_formula_suite(&[3, 5], 8, 15, 400, law, seed),
        commutator_formula_suite(&[3, 5], 8, 15, 60, law, seed),
        closed_form_suite(&[3, 5, 7], &[1, 2]),
        all_elements_suite(&[3, 5], 2, 100, law, seed),
        order_p_suite(&[3, 5, 7], 60),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_matrix_examples() {
        let f = f_lambda(3, 6, 0).unwrap();
        assert_eq!(transfer_matrix_power(&f, 1, 5), 1);
        assert_eq!(transfer_matrix_power(&f, 1, 6), 2);
        for n in 2..=6 {
            assert_eq!(transfer_matrix_power(&f, 0, n), f.coeff(n));
        }
    }

    #[test]
    fn transfer_rows_are_powers() {
        let f = TruncSeries::from_coeffs(5, 6, &[1, 2, 3, 4, 0]);
        let m = transfer_matrix(&f, 6);
        for j in 1..=6 {
            assert_eq!(m[0][j - 1], f.coeff(j) as u64);
        }
        for i in 0..6 {
            assert_eq!(m[i][i], 1);
            assert!(m[i][..i].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn closed_form_examples() {
        let f = pm_power_closed_form(5, 0, 1);
        assert_eq!(f, TruncSeries::from_terms(5, 8, &[(7, 1), (8, -1)]));
        assert!(pm_power_closed_form(5, 1, 2).is_identity());
        let g = pm_power_closed_form(3, 2, 1);
        assert_eq!((g.coeff(5), g.coeff(6)), (2, 2));
    }

    #[test]
    fn substitution_law_passes_and_mirror_fails() {
        assert!(product_law_suite(&[5], 8, 20, Law::Substitution, 1).passed());
        assert!(!product_law_suite(&[5], 8, 20, Law::Mirrored, 1).passed());
    }

    #[test]
    fn small_suites_pass() {
        assert!(closed_form_suite(&[3, 5], &[1]).passed());
        assert!(order_p_suite(&[3, 5], 20).passed());
        assert!(power_formula_suite(&[3], 3, 10, 50, Law::Substitution, 3).passed());
        assert!(commutator_formula_suite(&[5], 3, 10, 40, Law::Substitution, 3).passed());
        assert!(all_elements_suite(&[3], 1, 20, Law::Substitution, 3).passed());
    }
}
