//! Nilpotent Lie rings of class at most 4 over `Z/p^e`, turned into groups
//! by the truncated Baker–Campbell–Hausdorff series.

use serde::{Deserialize, Serialize};

use crate::engine::{mod_inverse, Code, GroupOracle, Radix};
use crate::error::{Error, Result};

/// A finite Lie ring given by structure constants on a basis with additive
/// orders `p^{m_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieRing {
    p: u64,
    names: Vec<String>,
    exps: Vec<u32>,
    /// Everything is computed mod `p^E`, `E = max m_i`, then reduced.
    modulus: u64,
    /// `table[i][j]` = coordinates of `[b_i, b_j]`.
    table: Vec<Vec<Vec<u64>>>,
}

pub type LieVec = Vec<u64>;

impl LieRing {
    /// Builds a ring from `(name, m_i)` and brackets `([b_i, b_j], coords)`
    /// for `i ≠ j`; the opposite bracket is filled in by antisymmetry.
    pub fn new(p: u64, basis: &[(&str, u32)], brackets: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        if !crate::engine::is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        let n = basis.len();
        let e = basis.iter().map(|&(_, m)| m).max().unwrap_or(1).max(1);
        let modulus =
            p.checked_pow(e).filter(|&m| m < 1 << 31).ok_or_else(|| Error::Parameter("modulus too large".into()))?;
        let mut ring = LieRing {
            p,
            names: basis.iter().map(|&(s, _)| s.to_string()).collect(),
            exps: basis.iter().map(|&(_, m)| m).collect(),
            modulus,
            table: vec![vec![vec![0; n]; n]; n],
        };
        for (i, j, coords) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || coords.len() != n {
                return Err(Error::Parameter(format!("bracket [{i},{j}] is out of range")));
            }
            if i == j {
                return Err(Error::Integrity(format!("[{0},{0}] must vanish", ring.names[i])));
            }
            let v = ring.reduce_signed(coords);
            let neg = ring.neg(&v);
            ring.table[i][j] = v;
            ring.table[j][i] = neg;
        }
        ring.validate()?;
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Additive orders `p^{m_i}`.
    pub fn orders(&self) -> Vec<u64> {
        self.exps.iter().map(|&m| self.p.pow(m)).collect()
    }

    /// `log_p |L|`.
    pub fn log_order(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `e` with `p^e` the exponent of the additive group.
    pub fn exponent_log(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn zero(&self) -> LieVec {
        vec![0; self.dim()]
    }

    pub fn basis(&self, i: usize) -> LieVec {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    fn reduce(&self, mut v: LieVec) -> LieVec {
        for (x, &m) in v.iter_mut().zip(&self.exps) {
            *x %= self.p.pow(m);
        }
        v
    }

    pub fn reduce_signed(&self, v: &[i64]) -> LieVec {
        self.reduce(v.iter().map(|&x| x.rem_euclid(self.modulus as i64) as u64).collect())
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> LieVec {
        self.reduce(x.iter().zip(y).map(|(a, b)| (a + b) % self.modulus).collect())
    }

    pub fn neg(&self, x: &[u64]) -> LieVec {
        self.reduce(x.iter().map(|a| (self.modulus - a % self.modulus) % self.modulus).collect())
    }

    pub fn scale(&self, k: i64, x: &[u64]) -> LieVec {
        let k = k.rem_euclid(self.modulus as i64) as u64;
        self.reduce(x.iter().map(|a| a * k % self.modulus).collect())
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[u64], y: &[u64]) -> LieVec {
        let n = self.dim();
        let mut out = vec![0u64; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || i == j {
                    continue;
                }
                let c = xi * yj % self.modulus;
                for (o, &t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = (*o + c * t) % self.modulus;
                }
            }
        }
        self.reduce(out)
    }

    /// Left-normed `[x_1, x_2, …, x_k] = [[x_1, x_2], …, x_k]`.
    pub fn bracket_left(&self, xs: &[&[u64]]) -> LieVec {
        let mut acc = xs[0].to_vec();
        for x in &xs[1..] {
            acc = self.bracket(&acc, x);
        }
        acc
    }

    /// Nilpotency class: the length of the lower central series.
    pub fn class(&self) -> usize {
        let n = self.dim();
        let mut term: Vec<LieVec> = (0..n).map(|i| self.basis(i)).collect();
        let mut c = 0;
        while term.iter().any(|v| v.iter().any(|&x| x != 0)) {
            c += 1;
            if c > n + 1 {
                break;
            }
            let mut next = Vec::new();
            for v in &term {
                for i in 0..n {
                    let w = self.bracket(v, &self.basis(i));
                    if w.iter().any(|&x| x != 0) {
                        next.push(w);
                    }
                }
            }
            term = next;
        }
        c
    }

    /// Antisymmetry, compatibility with the additive orders, and the Jacobi
    /// identity on basis triples.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (self.basis(i), self.basis(j));
                if self.add(&self.bracket(&bi, &bj), &self.bracket(&bj, &bi)) != self.zero() {
                    return Err(Error::Integrity(format!("[{0},{1}] ≠ -[{1},{0}]", self.names[i], self.names[j])));
                }
                let ord = self.p.pow(self.exps[i]) as i64;
                if self.scale(ord, &self.table[i][j]) != self.zero() {
                    return Err(Error::Integrity(format!(
                        "[{}, {}] is not killed by the order of {}",
                        self.names[i], self.names[j], self.names[i]
                    )));
                }
                for k in 0..n {
                    let bk = self.basis(k);
                    let s = self.add(
                        &self.add(&self.bracket_left(&[&bi, &bj, &bk]), &self.bracket_left(&[&bj, &bk, &bi])),
                        &self.bracket_left(&[&bk, &bi, &bj]),
                    );
                    if s != self.zero() {
                        return Err(Error::Integrity(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `x + y + ½[x,y] + (1/12)([x,[x,y]] + [y,[y,x]]) − (1/24)[y,[x,[x,y]]]`.
    pub fn bch(&self, x: &[u64], y: &[u64]) -> Result<LieVec> {
        if self.p < 5 {
            return Err(Error::Unsupported(format!("BCH needs 2 and 3 invertible, p = {}", self.p)));
        }
        let m = self.modulus as i64;
        let inv = |d: i64| mod_inverse(d, m).expect("p >= 5");
        let xy = self.bracket(x, y);
        let x_xy = self.bracket(x, &xy);
        let y_yx = self.neg(&self.bracket(y, &xy));
        let y_x_xy = self.bracket(y, &x_xy);
        let mut out = self.add(x, y);
        out = self.add(&out, &self.scale(inv(2), &xy));
        out = self.add(&out, &self.scale(inv(12), &self.add(&x_xy, &y_yx)));
        out = self.add(&out, &self.scale(-inv(24), &y_x_xy));
        Ok(out)
    }

    /// The `n`-th BCH power of `x` equals `n·x`.
    pub fn power_multiple_check(&self, x: &[u64], n: u64) -> Result<bool> {
        let mut acc = self.zero();
        for _ in 0..n {
            acc = self.bch(&acc, x)?;
        }
        Ok(acc == self.scale((n % self.modulus) as i64, x))
    }

    /// Whether `⟨p^{e-1}a⟩` and `⟨p^{e-1}b⟩` are nontrivial and different,
    /// `p^e` the additive exponent.
    pub fn lie_easy_detect(&self, a: &[u64], b: &[u64]) -> bool {
        let q = self.p.pow(self.exponent_log().saturating_sub(1)) as i64;
        let (u, v) = (self.scale(q, a), self.scale(q, b));
        if u == self.zero() || v == self.zero() {
            return false;
        }
        !(0..self.p as i64).any(|k| self.scale(k, &u) == v)
    }

    /// The text form read by [`parse_lie_ring`].
    pub fn to_text(&self) -> String {
        let mut out = format!("p {}\n", self.p);
        for (n, &m) in self.names.iter().zip(&self.exps) {
            out.push_str(&format!("basis {n} {}\n", self.p.pow(m)));
        }
        for i in 0..self.dim() {
            for j in 0..i {
                let v = &self.table[i][j];
                if v.iter().all(|&x| x == 0) {
                    continue;
                }
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c != 0)
                    .map(|(k, &c)| if c == 1 { self.names[k].clone() } else { format!("{c}*{}", self.names[k]) })
                    .collect();
                out.push_str(&format!("bracket [{},{}] = {}\n", self.names[i], self.names[j], terms.join(" + ")));
            }
        }
        out
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// Reads `p <prime>`, `basis <name> <additive order>` and
/// `bracket [<x>,<y>] = <linear combination>` lines, e.g. `= 5*b - d`.
pub fn parse_lie_ring(text: &str) -> Result<LieRing> {
    let mut p = None;
    let mut basis: Vec<(String, u32)> = Vec::new();
    let mut brackets: Vec<(usize, usize, Vec<i64>, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let col = raw.find(kw).unwrap_or(0) + 1;
        match kw {
            "p" => {
                let v: u64 = rest.trim().parse().map_err(|_| syntax(line, col, "expected a prime"))?;
                if !crate::engine::is_prime(v) {
                    return Err(syntax(line, col, format!("{v} is not prime")));
                }
                p = Some(v);
            }
            "basis" => {
                let p = p.ok_or_else(|| syntax(line, col, "`p` must come first"))?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, ord] = parts[..] else { return Err(syntax(line, col, "expected `basis <name> <order>`")) };
                let mut q: u64 = ord.parse().map_err(|_| syntax(line, col, "expected an additive order"))?;
                let mut m = 0;
                while q > 1 && q.is_multiple_of(p) {
                    q /= p;
                    m += 1;
                }
                if q != 1 || m == 0 {
                    return Err(syntax(line, col, format!("{ord} is not a power of {p}")));
                }
                if basis.iter().any(|(n, _)| n == name) {
                    return Err(syntax(line, col, format!("basis element {name} declared twice")));
                }
                basis.push((name.to_string(), m));
            }
            "bracket" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(line, col, "expected `=`"))?;
                let inner = lhs
                    .trim()
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| syntax(line, col, "expected `[x,y]`"))?;
                let (x, y) = inner.split_once(',').ok_or_else(|| syntax(line, col, "expected `[x,y]`"))?;
                let find = |s: &str| basis.iter().position(|(n, _)| n == s.trim());
                let i = find(x).ok_or_else(|| syntax(line, col, format!("unknown basis element {x:?}")))?;
                let j = find(y).ok_or_else(|| syntax(line, col, format!("unknown basis element {y:?}")))?;
                let coords = parse_combination(rhs, &basis, line, col)?;
                brackets.push((i, j, coords, line));
            }
            other => return Err(syntax(line, col, format!("unknown keyword {other:?}"))),
        }
    }
    let p = p.ok_or_else(|| syntax(1, 1, "missing `p <prime>` line"))?;
    let refs: Vec<(&str, u32)> = basis.iter().map(|(n, m)| (n.as_str(), *m)).collect();
    let list: Vec<(usize, usize, Vec<i64>)> = brackets.into_iter().map(|(i, j, c, _)| (i, j, c)).collect();
    LieRing::new(p, &refs, &list)
}

fn parse_combination(text: &str, basis: &[(String, u32)], line: usize, col: usize) -> Result<Vec<i64>> {
    let mut coords = vec![0i64; basis.len()];
    let t = text.trim();
    if t == "0" {
        return Ok(coords);
    }
    let mut spaced = String::new();
    for ch in t.chars() {
        if ch == '+' || ch == '-' {
            spaced.push(' ');
        }
        spaced.push(ch);
    }
    for term in spaced.split_whitespace() {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            continue;
        }
        let (coef, name) = match body.split_once('*') {
            Some((c, n)) => {
                (c.parse::<i64>().map_err(|_| syntax(line, col, format!("bad coefficient in {term:?}")))?, n)
            }
            None => {
                let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
                let c = if digits == 0 { 1 } else { body[..digits].parse().expect("digits") };
                (c, &body[digits..])
            }
        };
        let k = basis
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| syntax(line, col, format!("unknown basis element {name:?}")))?;
        coords[k] += sign * coef;
    }
    Ok(coords)
}

/// The rings `L_1` (class 3) and `L_2` (class 4) of order `p^6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LieBuiltin {
    L1,
    L2,
}

/// `L_1 = ⟨a, b | p²a, pb − [b,a,a], p-class 3⟩` on the basis
/// `a, b, c = [b,a], d = [b,a,b]`; here `[c,a] = pb` and `pc = 0`.
///
/// `L_2 = ⟨a, b | pa − [b,a,a,a], pb − [b,a,a,a], [b,a,a,b],
/// [b,a,b,b] + [b,a,a,a], p-class 4⟩` on the basis `x1 = a`, `x2 = b − a`,
/// `x3 = [b,a]`, `x4 = [b,a,a]`, `x5 = [b,a,b]`; Jacobi forces
/// `[b,a,b,a] = 0`, and `pa = pb = [b,a,a,a]`.
pub fn builtin_lie(which: LieBuiltin, p: u64) -> Result<LieRing> {
    if p < 5 {
        return Err(Error::Parameter(format!("the builtin Lie rings need p >= 5, got {p}")));
    }
    let pp = p as i64;
    match which {
        LieBuiltin::L1 => LieRing::new(
            p,
            &[("a", 2), ("b", 2), ("c", 1), ("d", 1)],
            &[(1, 0, vec![0, 0, 1, 0]), (2, 0, vec![0, pp, 0, 0]), (2, 1, vec![0, 0, 0, 1])],
        ),
        LieBuiltin::L2 => LieRing::new(
            p,
            &[("x1", 2), ("x2", 1), ("x3", 1), ("x4", 1), ("x5", 1)],
            &[
                (1, 0, vec![0, 0, 1, 0, 0]),
                (2, 0, vec![0, 0, 0, 1, 0]),
                (2, 1, vec![0, 0, 0, -1, 1]),
                (3, 0, vec![pp, 0, 0, 0, 0]),
                (3, 1, vec![-pp, 0, 0, 0, 0]),
                (4, 1, vec![-pp, 0, 0, 0, 0]),
            ],
        ),
    }
}

/// The generators `a`, `b` of a builtin ring as vectors.
pub fn builtin_generators(which: LieBuiltin, ring: &LieRing) -> (LieVec, LieVec) {
    match which {
        LieBuiltin::L1 => (ring.basis(0), ring.basis(1)),
        LieBuiltin::L2 => (ring.basis(0), ring.add(&ring.basis(0), &ring.basis(1))),
    }
}

/// The group on the underlying set of a Lie ring with the BCH product.
#[derive(Debug, Clone)]
pub struct LieGroup {
    ring: LieRing,
    radix: Radix,
}

impl LieGroup {
    pub fn new(ring: LieRing) -> Result<Self> {
        if ring.p() < 5 {
            return Err(Error::Unsupported("BCH groups need p >= 5".into()));
        }
        if ring.class() > 4 {
            return Err(Error::Unsupported(format!("class {} is beyond the truncated BCH series", ring.class())));
        }
        let radix = Radix::new(ring.orders().iter().map(|&q| q as u32).collect());
        if radix.space() > u32::MAX as u64 {
            return Err(Error::Resource { what: "Lie ring".into(), needed: radix.space(), budget: u32::MAX as u64 });
        }
        Ok(LieGroup { ring, radix })
    }

    pub fn ring(&self) -> &LieRing {
        &self.ring
    }

    pub fn encode(&self, v: &[u64]) -> Code {
        let digits: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        self.radix.encode(&digits)
    }

    pub fn decode(&self, c: Code) -> LieVec {
        self.radix.decode(c).into_iter().map(u64::from).collect()
    }
}

impl GroupOracle for LieGroup {
    fn code_space(&self) -> u64 {
        self.radix.space()
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, a: Code, b: Code) -> Code {
        let z = self.ring.bch(&self.decode(a), &self.decode(b)).expect("checked at construction");
        self.encode(&z)
    }

    fn inv(&self, a: Code) -> Code {
        self.encode(&self.ring.neg(&self.decode(a)))
    }

    fn format(&self, a: Code) -> String {
        let v = self.decode(a);
        let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("<{}>", list.join(","))
    }

    fn parse(&self, text: &str) -> Option<Code> {
        let inner = text.trim().strip_prefix('<')?.strip_suffix('>')?;
        let v: Vec<i64> = inner.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
        (v.len() == self.ring.dim()).then(|| self.encode(&self.ring.reduce_signed(&v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        for p in [5, 7, 11] {
            let l1 = builtin_lie(LieBuiltin::L1, p).unwrap();
            assert_eq!(l1.log_order(), 6);
            assert_eq!(l1.class(), 3);
            let (a, b) = builtin_generators(LieBuiltin::L1, &l1);
            // pb = [b, a, a]
            assert_eq!(l1.scale(p as i64, &b), l1.bracket_left(&[&b, &a, &a]));
            assert!(l1.lie_easy_detect(&a, &b));

            let l2 = builtin_lie(LieBuiltin::L2, p).unwrap();
            assert_eq!(l2.log_order(), 6);
            assert_eq!(l2.class(), 4);
            let (a, b) = builtin_generators(LieBuiltin::L2, &l2);
            let baaa = l2.bracket_left(&[&b, &a, &a, &a]);
            assert_ne!(baaa, l2.zero());
            assert_eq!(l2.scale(p as i64, &a), baaa);
            assert_eq!(l2.scale(p as i64, &b), baaa);
            assert_eq!(l2.bracket_left(&[&b, &a, &a, &b]), l2.zero());
            let babb = l2.bracket_left(&[&b, &a, &b, &b]);
            assert_eq!(l2.add(&babb, &baaa), l2.zero());
            assert!(!l2.lie_easy_detect(&a, &b));
        }
    }

    #[test]
    fn class_two_bch() {
        let ring = LieRing::new(5, &[("x", 1), ("y", 1), ("z", 1)], &[(0, 1, vec![0, 0, 1])]).unwrap();
        let (x, y) = (ring.basis(0), ring.basis(1));
        assert_eq!(ring.bch(&x, &y).unwrap(), vec![1, 1, 3]);
        assert_eq!(ring.bch(&x, &ring.neg(&x)).unwrap(), ring.zero());
        assert_eq!(ring.bch(&x, &ring.zero()).unwrap(), x);
        assert_eq!(ring.bracket(&x, &x), ring.zero());
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [y,x] = z, [z,x] = y on a three-dimensional ring is not nilpotent
        // and breaks Jacobi with [z,y] = x.
        let bad = LieRing::new(
            5,
            &[("x", 1), ("y", 1), ("z", 1)],
            &[(1, 0, vec![0, 0, 1]), (2, 0, vec![0, 1, 0]), (2, 1, vec![1, 1, 0])],
        );
        assert!(matches!(bad, Err(Error::Integrity(_))));
    }

    #[test]
    fn text_round_trip() {
        let l2 = builtin_lie(LieBuiltin::L2, 7).unwrap();
        let again = parse_lie_ring(&l2.to_text()).unwrap();
        assert_eq!(again, l2);
        let parsed = parse_lie_ring("p 5\nbasis a 25\nbasis b 25\nbasis c 5\nbasis d 5\nbracket [b,a] = c\nbracket [c,a] = 5b\nbracket [c,b] = d\n").unwrap();
        assert_eq!(parsed, builtin_lie(LieBuiltin::L1, 5).unwrap());
        assert!(matches!(parse_lie_ring("p 5\nbasis a 6\n"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn abelian_easy_detect() {
        let ring = LieRing::new(5, &[("a", 2), ("b", 2)], &[]).unwrap();
        assert!(ring.lie_easy_detect(&ring.basis(0), &ring.basis(1)));
        assert_eq!(ring.class(), 1);
    }
}
