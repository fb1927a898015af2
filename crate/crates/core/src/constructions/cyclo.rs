use crate::engine::Radix;
use crate::error::{Error, Result};

/// `(Z/p^e)[X]/Φ_{p^k}(X)`, a finite image of `Z_p[ζ]`. Elements are
/// coefficient vectors of length `d = p^{k-1}(p-1)` in the basis `1, X, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    p: u64,
    k: u32,
    e: u32,
    d: usize,
    modulus: u64,
}

impl Cyclotomic {
    pub fn new(p: u64, k: u32, e: u32) -> Result<Self> {
        if p == 2 || !crate::engine::is_prime(p) || k == 0 || e == 0 {
            return Err(Error::Parameter(format!("cyclotomic ring needs odd p, k >= 1, e >= 1 (got {p}, {k}, {e})")));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|&m| m < 1 << 31)
            .ok_or_else(|| Error::Parameter(format!("coefficient modulus {p}^{e} is too large")))?;
        let d = (p.pow(k - 1) * (p - 1)) as usize;
        Ok(Cyclotomic { p, k, e, d, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Rank `d = p^{k-1}(p-1)`.
    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.d]
    }

    pub fn constant(&self, c: i64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c.rem_euclid(self.modulus as i64) as u64;
        v
    }

    /// Reduces an arbitrary integer polynomial mod `Φ_{p^k}` and `p^e`.
    pub fn from_poly(&self, coeffs: &[i64]) -> Vec<u64> {
        let m = self.modulus as i64;
        let mut c: Vec<i64> = coeffs.iter().map(|x| x.rem_euclid(m)).collect();
        // X^{p^{k-1}(p-1)} = -(1 + X^{p^{k-1}} + … + X^{p^{k-1}(p-2)}).
        let step = self.p.pow(self.k - 1) as usize;
        for n in (self.d..c.len()).rev() {
            let a = c[n];
            if a == 0 {
                continue;
            }
            c[n] = 0;
            let base = n - self.d;
            for i in 0..self.p as usize - 1 {
                let t = base + i * step;
                c[t] = (c[t] - a).rem_euclid(m);
            }
        }
        c.resize(self.d, 0);
        c.into_iter().map(|x| x as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.modulus - y) % self.modulus).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0i64; 2 * self.d];
        let m = self.modulus;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x * y) % m) as i64;
            }
        }
        self.from_poly(&prod)
    }

    /// Multiplication by `ζ`.
    pub fn mul_zeta(&self, a: &[u64]) -> Vec<u64> {
        let mut c = vec![0i64; self.d + 1];
        for (i, &x) in a.iter().enumerate() {
            c[i + 1] = x as i64;
        }
        self.from_poly(&c)
    }

    pub fn pow(&self, a: &[u64], mut n: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.constant(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// `(ζ - 1)^s`.
    pub fn uniformizer_pow(&self, s: u64) -> Vec<u64> {
        self.pow(&self.from_poly(&[-1, 1]), s)
    }

    /// Coefficients in the basis `1, (X-1), (X-1)^2, …` (a Taylor shift).
    pub fn to_pi_basis(&self, a: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut c = a.to_vec();
        // Repeated synthetic division by (X - 1).
        for i in 0..self.d {
            for j in (i..self.d - 1).rev() {
                c[j] = (c[j] + c[j + 1]) % m;
            }
        }
        c
    }

    /// `(ζ-1)`-adic valuation, `None` for zero. Values `≥ e·d` are not
    /// visible at this precision.
    pub fn valuation(&self, a: &[u64]) -> Option<u64> {
        self.to_pi_basis(a)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(j, &c)| self.d as u64 * vp(self.p, c) as u64 + j as u64)
            .min()
    }
}

fn vp(p: u64, mut x: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Echelon basis with the Howell property of a submodule of `(Z/p^e)^d`.
/// Each row has a pivot `p^v` in a column where all later rows vanish.
#[derive(Debug, Clone)]
pub struct HowellBasis {
    p: u64,
    e: u32,
    modulus: u64,
    d: usize,
    /// `(pivot column, pivot valuation, row)`, in pivot column order.
    rows: Vec<(usize, u32, Vec<u64>)>,
}

impl HowellBasis {
    pub fn new(p: u64, e: u32, d: usize, generators: Vec<Vec<u64>>) -> Self {
        let modulus = p.pow(e);
        let mut pool: Vec<Vec<u64>> = generators.into_iter().map(|r| r.iter().map(|x| x % modulus).collect()).collect();
        let mut rows = Vec::new();
        for col in 0..d {
            let best =
                pool.iter().enumerate().filter(|(_, r)| r[col] != 0).min_by_key(|(_, r)| vp(p, r[col])).map(|(i, _)| i);
            let Some(i) = best else { continue };
            let mut pivot = pool.swap_remove(i);
            let v = vp(p, pivot[col]);
            let unit = pivot[col] / p.pow(v);
            let inv = inverse_mod(unit, modulus);
            for x in pivot.iter_mut() {
                *x = *x * inv % modulus;
            }
            for r in pool.iter_mut() {
                if r[col] != 0 {
                    let q = r[col] / p.pow(v);
                    for (x, y) in r.iter_mut().zip(&pivot) {
                        *x = (*x + modulus - q * y % modulus) % modulus;
                    }
                }
            }
            // The annihilator multiple keeps the Howell property.
            if v > 0 {
                let f = p.pow(e - v);
                let extra: Vec<u64> = pivot.iter().map(|x| x * f % modulus).collect();
                if extra.iter().any(|&x| x != 0) {
                    pool.push(extra);
                }
            }
            pool.retain(|r| r.iter().any(|&x| x != 0));
            rows.push((col, v, pivot));
        }
        let mut basis = HowellBasis { p, e, modulus, d, rows };
        basis.back_substitute();
        basis
    }

    fn back_substitute(&mut self) {
        for i in 0..self.rows.len() {
            let (col, v, _) = self.rows[i];
            let step = self.p.pow(v);
            let pivot = self.rows[i].2.clone();
            for j in 0..i {
                let x = self.rows[j].2[col];
                let q = x / step;
                if q > 0 {
                    for (a, b) in self.rows[j].2.iter_mut().zip(&pivot) {
                        *a = (*a + self.modulus - q * b % self.modulus) % self.modulus;
                    }
                }
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|(_, _, r)| r.as_slice())
    }

    /// Canonical representative of the coset `x + span`.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let mut x = x.to_vec();
        for (col, v, row) in &self.rows {
            let q = x[*col] / self.p.pow(*v);
            if q > 0 {
                for (a, b) in x.iter_mut().zip(row) {
                    *a = (*a + self.modulus - q * b % self.modulus) % self.modulus;
                }
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }

    /// `log_p` of the order of the span.
    pub fn log_order(&self) -> u32 {
        self.rows.iter().map(|(_, v, _)| self.e - v).sum()
    }

    /// Mixed radix over canonical representatives: a pivot column with
    /// pivot `p^v` ranges over `0..p^v`, a free column over `0..p^e`.
    pub fn coset_radix(&self) -> Radix {
        let mut radices = vec![self.modulus as u32; self.d];
        for (col, v, _) in &self.rows {
            radices[*col] = self.p.pow(*v) as u32;
        }
        Radix::new(radices)
    }
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    crate::engine::mod_inverse(a as i64, m as i64).expect("unit") as u64
}

/// `(ζ-1)^s R` in the additive group of the ring.
pub fn ideal_subgroup(ring: &Cyclotomic, s: u64) -> HowellBasis {
    let pi_s = ring.uniformizer_pow(s);
    let mut gens = Vec::with_capacity(ring.rank());
    let mut row = pi_s;
    for _ in 0..ring.rank() {
        let next = ring.mul_zeta(&row);
        gens.push(row);
        row = next;
    }
    HowellBasis::new(ring.p(), ring.e(), ring.rank(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_has_order_pk() {
        for (p, k) in [(5, 1), (3, 2), (7, 1)] {
            let r = Cyclotomic::new(p, k, 2).unwrap();
            let mut x = r.constant(1);
            for i in 1..=p.pow(k) {
                x = r.mul_zeta(&x);
                assert_eq!(x == r.constant(1), i == p.pow(k), "p={p} k={k} i={i}");
            }
        }
        assert_eq!(Cyclotomic::new(5, 1, 1).unwrap().rank(), 4);
        assert_eq!(Cyclotomic::new(3, 2, 1).unwrap().rank(), 6);
    }

    #[test]
    fn p_is_a_uniformizer_power() {
        let r = Cyclotomic::new(5, 1, 3).unwrap();
        assert_eq!(r.valuation(&r.constant(5)), Some(4));
        assert_eq!(r.valuation(&r.from_poly(&[-5, 5])), Some(5));
        assert_eq!(r.valuation(&r.from_poly(&[1, -2, 1])), Some(2));
        assert_eq!(r.valuation(&r.zero()), None);
        // (ζ-1)^4 / 5 is a unit.
        let pi4 = r.uniformizer_pow(4);
        assert_eq!(r.valuation(&pi4), Some(4));
        assert!(ideal_subgroup(&r, 4).contains(&r.constant(5)));
        assert!(!ideal_subgroup(&r, 5).contains(&r.constant(5)));
    }

    #[test]
    fn valuation_is_additive() {
        let r = Cyclotomic::new(5, 1, 4).unwrap();
        let mut seed = 11u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            (seed >> 40) as i64
        };
        for _ in 0..200 {
            let a = r.from_poly(&[next(), next(), next(), next()]);
            let b = r.from_poly(&[next(), next(), next(), next()]);
            let (Some(va), Some(vb)) = (r.valuation(&a), r.valuation(&b)) else { continue };
            if va + vb < 16 {
                assert_eq!(r.valuation(&r.mul(&a, &b)), Some(va + vb));
            }
        }
    }

    #[test]
    fn ideal_indices() {
        let r = Cyclotomic::new(5, 1, 2).unwrap();
        for s in 0..=8u32 {
            let n = ideal_subgroup(&r, s as u64);
            assert_eq!(n.log_order(), 8 - s, "s={s}");
            // Stable under ζ.
            for row in n.rows() {
                assert!(n.contains(&r.mul_zeta(row)));
            }
            let radix = n.coset_radix();
            assert_eq!(radix.space(), 5u64.pow(s));
        }
        assert_eq!(ideal_subgroup(&r, 0).reduce(&r.constant(3)), r.zero());
    }

    #[test]
    fn reduce_is_canonical() {
        let r = Cyclotomic::new(5, 1, 2).unwrap();
        let n = ideal_subgroup(&r, 5);
        let x = r.from_poly(&[3, 1, 4, 1]);
        let y = r.add(&x, &r.mul(&r.uniformizer_pow(5), &r.from_poly(&[2, 7, 1, 8])));
        assert_eq!(n.reduce(&x), n.reduce(&y));
        assert_ne!(n.reduce(&x), n.reduce(&r.add(&x, &r.constant(1))));
    }
}
