use crate::engine::{Code, GroupOracle, Radix};
use crate::error::{Error, Result};

/// `⟨b⟩ ⋉ A` with `A = C_p^{p-2} × C_{p²}²` and `b` of order `p²` acting by
/// `α(a_i) = a_i a_{i+1}` (`i ≤ p-3`), `α(a_{p-2}) = a_{p-2} a_{p-1}^p`,
/// `α(a_{p-1}) = a_{p-1} a_p`, `α(a_p) = a_p`; `a^b = α(a)`.
///
/// Elements are `(i, v)` with `v` the exponents of `a_1, …, a_p`; the code
/// puts `i` first.
#[derive(Debug, Clone)]
pub struct PotentExample {
    p: u64,
    radix: Radix,
    /// `α^j` as a matrix on exponent vectors, `j = 0..p²`.
    powers: Vec<Vec<Vec<u64>>>,
}

impl PotentExample {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !crate::engine::is_prime(p) {
            return Err(Error::Parameter(format!("the potent example needs a prime p >= 5, got {p}")));
        }
        let n = p as usize;
        let mut radices = vec![(p * p) as u32];
        radices.extend(std::iter::repeat_n(p as u32, n - 2));
        radices.extend([(p * p) as u32; 2]);
        let radix = Radix::new(radices);
        // Column i holds α(a_{i+1}).
        let mut alpha = vec![vec![0u64; n]; n];
        for (i, row) in alpha.iter_mut().enumerate() {
            row[i] = 1;
        }
        for i in 0..n - 3 {
            alpha[i + 1][i] = 1;
        }
        alpha[n - 2][n - 3] = p;
        alpha[n - 1][n - 2] = 1;
        let mut ex = PotentExample { p, radix, powers: vec![identity(n)] };
        for j in 1..(p * p) as usize {
            let next = ex.compose(&alpha, &ex.powers[j - 1]);
            ex.powers.push(next);
        }
        if ex.compose(&alpha, &ex.powers[(p * p) as usize - 1]) != identity(n) || ex.powers[p as usize] == identity(n) {
            return Err(Error::Integrity("α does not have order p²".into()));
        }
        Ok(ex)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn modulus(&self, row: usize) -> u64 {
        if row + 2 >= self.p as usize {
            self.p * self.p
        } else {
            self.p
        }
    }

    fn compose(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.len();
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            let m = self.modulus(i);
            for j in 0..n {
                out[i][j] = (0..n).map(|l| a[i][l] * b[l][j]).sum::<u64>() % m;
            }
        }
        out
    }

    fn apply(&self, j: u64, v: &[u32]) -> Vec<u32> {
        let mat = &self.powers[j as usize];
        (0..v.len())
            .map(|i| ((0..v.len()).map(|l| mat[i][l] * v[l] as u64).sum::<u64>() % self.modulus(i)) as u32)
            .collect()
    }

    /// `b^i a_1^{v_1} ⋯ a_p^{v_p}`.
    pub fn element(&self, i: u64, v: &[i64]) -> Code {
        let mut digits = vec![(i % (self.p * self.p)) as u32];
        for (r, &x) in v.iter().enumerate() {
            digits.push(x.rem_euclid(self.modulus(r) as i64) as u32);
        }
        self.radix.encode(&digits)
    }

    /// `a_i` for `i = 1..=p`.
    pub fn a(&self, i: usize) -> Code {
        let mut v = vec![0; self.p as usize];
        v[i - 1] = 1;
        self.element(0, &v)
    }

    pub fn b(&self) -> Code {
        self.element(1, &vec![0; self.p as usize])
    }

    /// `b`, `a_1` and `a_{p-1}`. The group is not 2-generated: `α` only
    /// reaches `a_{p-1}^p` from `a_{p-2}`, so `a_{p-1}` survives in `G/Φ(G)`.
    pub fn generators(&self) -> Vec<Code> {
        vec![self.b(), self.a(1), self.a(self.p as usize - 1)]
    }
}

fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

impl GroupOracle for PotentExample {
    fn code_space(&self) -> u64 {
        self.radix.space()
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, x: Code, y: Code) -> Code {
        let a = self.radix.decode(x);
        let b = self.radix.decode(y);
        let moved = self.apply(b[0] as u64, &a[1..]);
        let mut digits = vec![(a[0] + b[0]) % self.radix.radices()[0]];
        for (r, (&u, &w)) in moved.iter().zip(&b[1..]).enumerate() {
            digits.push(((u as u64 + w as u64) % self.modulus(r)) as u32);
        }
        self.radix.encode(&digits)
    }

    fn inv(&self, x: Code) -> Code {
        // (i, v)^{-1} = (-i, -α^{-i}(v)), and α^{-i} = α^{p²-i}.
        let a = self.radix.decode(x);
        let pp = self.p * self.p;
        let back = (pp - a[0] as u64) % pp;
        let moved = self.apply(back, &a[1..]);
        let neg: Vec<i64> = moved.iter().map(|&c| -(c as i64)).collect();
        self.element(back, &neg)
    }

    fn format(&self, x: Code) -> String {
        let d = self.radix.decode(x);
        let v: Vec<String> = d[1..].iter().map(|c| c.to_string()).collect();
        format!("({};[{}])", d[0], v.join(","))
    }

    fn parse(&self, text: &str) -> Option<Code> {
        let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (i, v) = inner.split_once(';')?;
        let i: u64 = i.trim().parse().ok()?;
        let v = v.trim().strip_prefix('[')?.strip_suffix(']')?;
        let v: Vec<i64> = v.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
        (v.len() == self.p as usize).then(|| self.element(i, &v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(g: &PotentExample, x: Code, n: u64) -> Code {
        (0..n).fold(g.identity(), |acc, _| g.mul(acc, x))
    }

    #[test]
    fn action_is_alpha() {
        let g = PotentExample::new(5).unwrap();
        let b = g.b();
        let bi = g.inv(b);
        let conj = |x| g.mul(g.mul(bi, x), b);
        assert_eq!(conj(g.a(1)), g.mul(g.a(1), g.a(2)));
        assert_eq!(conj(g.a(3)), g.mul(g.a(3), power(&g, g.a(4), 5)));
        assert_eq!(conj(g.a(4)), g.mul(g.a(4), g.a(5)));
        assert_eq!(conj(g.a(5)), g.a(5));
        assert_eq!(g.code_space(), 5u64.pow(9));
    }

    #[test]
    fn semi_abelian_witness() {
        let g = PotentExample::new(5).unwrap();
        let x = g.mul(g.b(), g.a(1));
        let y = g.mul(g.b(), g.a(5));
        assert_eq!(power(&g, x, 5), power(&g, y, 5));
        let d = power(&g, g.mul(x, g.inv(y)), 5);
        assert_eq!(d, g.inv(power(&g, g.a(5), 5)));
        assert_ne!(d, g.identity());
    }

    #[test]
    fn rejects_small_primes() {
        assert!(PotentExample::new(3).is_err());
        assert!(PotentExample::new(9).is_err());
    }
}
