use super::TruncSeries;
use crate::engine::mod_inverse;
use crate::error::{Error, Result};

/// `z_m = p^m + p^{m-1} + … + p + 2`, with `z_0 = 2`.
pub fn zm(p: u64, m: u32) -> u64 {
    (1..=m).map(|i| p.pow(i)).sum::<u64>() + 2
}

/// `s(i) = i + 1 + ⌊(i-2)/(p-1)⌋`, so that `γ_i(N) = N_{s(i)}` for `i ≥ 2`.
pub fn gamma_index(p: u64, i: u64) -> u64 {
    assert!(i >= 2, "gamma_index needs i >= 2");
    i + 1 + (i - 2) / (p - 1)
}

/// The `m` with `k = z_m`, if any (`m ≥ 1`).
pub fn distinguished_level(p: u64, k: u64) -> Option<u32> {
    (1..64).map(|m| (m, zm(p, m))).take_while(|&(_, z)| z <= k).find(|&(_, z)| z == k).map(|(m, _)| m)
}

fn need_odd(p: u32) -> Result<()> {
    if p == 2 || !crate::engine::is_prime(p as u64) {
        return Err(Error::Unsupported(format!("Nottingham elements need an odd prime, got {p}")));
    }
    Ok(())
}

/// `a(t) = t(1-t)^{-1} = t + t^2 + t^3 + …`.
pub fn a_series(p: u32, k: usize) -> Result<TruncSeries> {
    need_odd(p)?;
    Ok(TruncSeries::from_coeffs(p, k, &vec![1; k.saturating_sub(1)]))
}

/// `b(t) = t(1-2t^2)^{-1/2} = t + t^3 + …`, the order-`p` element of
/// `N_2 ∖ N_3`. The square root `y(s) = (1-2s)^{-1/2}` is found by Newton
/// iteration on `y^2(1-2s) = 1`, `y ≡ 1 (mod s)`, and then `s = t^2`.
pub fn b_series(p: u32, k: usize) -> Result<TruncSeries> {
    need_odd(p)?;
    let y = inverse_sqrt_one_minus_2t(p, k.div_ceil(2));
    let terms: Vec<(usize, i64)> = y.iter().enumerate().skip(1).map(|(i, &c)| (2 * i + 1, c as i64)).collect();
    Ok(TruncSeries::from_terms(p, k, &terms))
}

/// Power series `y` mod `t^k` with `y^2 (1 - 2t) = 1`.
pub(crate) fn inverse_sqrt_one_minus_2t(p: u32, k: usize) -> Vec<u64> {
    let pp = p as u64;
    let half = mod_inverse(2, p as i64).expect("p is odd") as u64;
    let mut y = vec![0u64; k.max(1)];
    y[0] = 1;
    let mut prec = 1;
    while prec < k {
        prec = (2 * prec).min(k);
        // y ← y (3 - (1-2t) y^2) / 2
        let y2 = mul_trunc(pp, &y[..prec], &y[..prec], prec);
        let mut q = vec![0u64; prec];
        for i in 0..prec {
            let prev = if i > 0 { y2[i - 1] } else { 0 };
            q[i] = (y2[i] + 2 * (pp - prev)) % pp;
        }
        let mut three_minus = vec![0u64; prec];
        for i in 0..prec {
            three_minus[i] = (pp - q[i]) % pp;
        }
        three_minus[0] = (three_minus[0] + 3) % pp;
        let prod = mul_trunc(pp, &y[..prec], &three_minus, prec);
        for i in 0..prec {
            y[i] = prod[i] * half % pp;
        }
    }
    y.truncate(k);
    y
}

pub(crate) fn mul_trunc(p: u64, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// `f_λ(t) = t + t^2 + λt^3`.
pub fn f_lambda(p: u32, k: usize, lambda: i64) -> Result<TruncSeries> {
    need_odd(p)?;
    Ok(TruncSeries::from_terms(p, k, &[(2, 1), (3, lambda)]))
}

/// `e_α(t) = t + t^{z} + αt^{z+1}`.
pub fn e_alpha(p: u32, k: usize, z: usize, alpha: i64) -> Result<TruncSeries> {
    need_odd(p)?;
    Ok(TruncSeries::from_terms(p, k, &[(z, 1), (z + 1, alpha)]))
}

/// `e(t) = t + t^{jp+2}` and `f(t) = t + t^{jp+3}` for the diamond
/// `N_{jp+1}/N_{jp+3}`.
pub fn depth_one_pair(p: u32, k: usize, j: usize) -> Result<(TruncSeries, TruncSeries)> {
    need_odd(p)?;
    let d = j * p as usize + 2;
    Ok((TruncSeries::from_terms(p, k, &[(d, 1)]), TruncSeries::from_terms(p, k, &[(d + 1, 1)])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_functions() {
        assert_eq!(zm(5, 1), 7);
        assert_eq!(zm(3, 2), 14);
        assert_eq!(zm(7, 0), 2);
        for p in [3, 5, 7, 11] {
            assert_eq!(gamma_index(p, 2), 3);
        }
        assert_eq!(distinguished_level(5, 7), Some(1));
        assert_eq!(distinguished_level(3, 14), Some(2));
        assert_eq!(distinguished_level(3, 6), None);
    }

    #[test]
    fn a_is_geometric() {
        let a = a_series(5, 5).unwrap();
        assert_eq!(a.coeffs(), &[1, 1, 1, 1]);
        assert!(a_series(2, 5).is_err());
    }

    #[test]
    fn b_satisfies_its_equation() {
        // Independent check: y^2 (1 - 2t) = 1 with y = b(t)/t.
        for p in [3u32, 5, 7, 11] {
            let k = 12;
            let b = b_series(p, 2 * k).unwrap();
            let y: Vec<u64> = (0..k).map(|i| b.coeff(2 * i + 1) as u64).collect();
            assert!((0..=2 * k).step_by(2).all(|i| b.coeff(i) == 0));
            let y2 = mul_trunc(p as u64, &y, &y, k);
            let lhs = mul_trunc(p as u64, &y2, &[1, (2 * p as u64 - 2) % p as u64], k);
            assert_eq!(lhs[0], 1);
            assert!(lhs[1..].iter().all(|&c| c == 0), "p={p}: {lhs:?}");
        }
    }

    #[test]
    fn b_small_case() {
        // (1-2s)^{-1/2} = 1 + s + (3/2)s^2 + (5/2)s^3 + …; over F_3 that is
        // 1 + s + 0s^2 + s^3.
        let b = b_series(3, 7).unwrap();
        assert_eq!(b.coeffs(), &[0, 1, 0, 0, 0, 1]);
        assert_eq!(b.filtration_degree(), Some(2));
    }

    #[test]
    fn f_lambda_zero() {
        assert_eq!(f_lambda(5, 4, 0).unwrap().coeffs(), &[1, 0, 0]);
    }
}
