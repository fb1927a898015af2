//! Power-conjugate presentations of finite p-groups and their collectors.
//!
//! A presentation lists generators `g_1, …, g_n` with relative orders
//! `p^{e_i}`, power relations `g_i^{p^{e_i}} = w` and conjugation relations
//! `g_j^{g_i} = w` for `i < j`, where every right-hand side only involves
//! generators after `g_i`. Elements are normal words `g_1^{x_1} ⋯ g_n^{x_n}`.

mod builtin;
mod parse;

use std::sync::Arc;

use crate::engine::{Code, Config, Group, GroupOracle, Radix};
use crate::error::{Error, Result};

pub use builtin::{builtin, h34, metacyclic_modular, metacyclic_split, Builtin};
pub use parse::parse_presentation;

/// Rewriting steps allowed for one product.
pub const COLLECTION_BUDGET: u64 = 1_000_000;

/// Conjugates by `g_i^k` are tabulated for relative orders up to this size.
const POWER_TABLE_LIMIT: u32 = 1 << 12;

/// A word as `(generator index, exponent)` factors.
pub type Word = Vec<(usize, i64)>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PcPresentation {
    p: u64,
    names: Vec<String>,
    orders: Vec<u32>,
    power: Vec<Option<Word>>,
    /// `(j, i, w)`: `g_j^{g_i} = w`.
    conj: Vec<(usize, usize, Word)>,
}

impl PcPresentation {
    pub fn new(p: u64) -> Self {
        PcPresentation { p, ..Default::default() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Relative orders `p^{e_i}`.
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn push_generator(&mut self, name: &str, order: u32) -> usize {
        self.names.push(name.to_string());
        self.orders.push(order);
        self.power.push(None);
        self.names.len() - 1
    }

    fn check_above(&self, i: usize, word: &Word, line: usize, what: &str) -> Result<()> {
        match word.iter().find(|&&(g, _)| g <= i) {
            Some(&(g, _)) => Err(Error::IllOrdered {
                line,
                message: format!("{what} may only use generators after {}, found {}", self.names[i], self.names[g]),
            }),
            None => Ok(()),
        }
    }

    /// `g_i^{p^{e_i}} = word`.
    pub fn set_power(&mut self, i: usize, word: Word, line: usize) -> Result<()> {
        self.check_above(i, &word, line, "a power relation")?;
        self.power[i] = Some(word);
        Ok(())
    }

    /// `g_j^{g_i} = word` with `i < j`.
    pub fn set_conjugate(&mut self, j: usize, i: usize, word: Word, line: usize) -> Result<()> {
        if j <= i {
            return Err(Error::IllOrdered {
                line,
                message: format!("{}^{} conjugates by a later generator", self.names[j], self.names[i]),
            });
        }
        self.check_above(i, &word, line, "a conjugation relation")?;
        self.conj.retain(|&(a, b, _)| (a, b) != (j, i));
        self.conj.push((j, i, word));
        Ok(())
    }

    /// `[x, y] = word`, stored as `x^y = x·word` when `x` comes later and as
    /// `y^x = y·word⁻¹` otherwise.
    pub fn set_commutator(&mut self, x: usize, y: usize, word: Word, line: usize) -> Result<()> {
        if x == y {
            return Err(Error::IllOrdered { line, message: "commutator of a generator with itself".into() });
        }
        let lower = x.min(y);
        self.check_above(lower, &word, line, "a commutator relation")?;
        if x > y {
            let mut rhs = vec![(x, 1)];
            rhs.extend(word);
            self.set_conjugate(x, y, rhs, line)
        } else {
            let mut rhs = vec![(y, 1)];
            rhs.extend(word.iter().rev().map(|&(g, e)| (g, -e)));
            self.set_conjugate(y, x, rhs, line)
        }
    }

    /// `Π p^{e_i}`.
    pub fn order(&self) -> u64 {
        self.orders.iter().map(|&r| r as u64).product()
    }

    /// The presentation in the text grammar.
    pub fn to_text(&self) -> String {
        let word = |w: &Word| {
            if w.is_empty() {
                return "1".to_string();
            }
            let parts: Vec<String> = w
                .iter()
                .map(|&(g, e)| if e == 1 { self.names[g].clone() } else { format!("{}^{e}", self.names[g]) })
                .collect();
            parts.join(" ")
        };
        let mut out = format!("p {}\n", self.p);
        for (n, r) in self.names.iter().zip(&self.orders) {
            out.push_str(&format!("gen {n} {r}\n"));
        }
        for (i, w) in self.power.iter().enumerate() {
            if let Some(w) = w {
                out.push_str(&format!("pow {} = {}\n", self.names[i], word(w)));
            }
        }
        for (j, i, w) in &self.conj {
            out.push_str(&format!("conj {}^{} = {}\n", self.names[*j], self.names[*i], word(w)));
        }
        out
    }
}

/// Collection from the left over exponent vectors.
#[derive(Debug, Clone)]
pub struct Collector {
    orders: Vec<u32>,
    power: Vec<Vec<u32>>,
    /// `conj[i][k][j]`: normal form of `g_j^{g_i^k}` for `j > i`; only
    /// `k = 1` is kept when `p^{e_i}` is large.
    conj: Vec<Vec<Vec<Vec<u32>>>>,
    inverse: Vec<Vec<u32>>,
    budget: u64,
}

impl Collector {
    /// Normalizes all relations from the last generator upwards; the
    /// relations of `g_i` only need the collector on `g_{i+1}, …, g_n`.
    pub fn new(pres: &PcPresentation) -> Result<Self> {
        let n = pres.len();
        let mut c = Collector {
            orders: pres.orders.clone(),
            power: vec![vec![0; n]; n],
            conj: vec![Vec::new(); n],
            inverse: vec![vec![0; n]; n],
            budget: COLLECTION_BUDGET,
        };
        for i in (0..n).rev() {
            let pw = pres.power[i].clone().unwrap_or_default();
            c.power[i] = c.collect(&pw)?;
            let mut first = vec![vec![0; n]; n];
            for (j, slot) in first.iter_mut().enumerate().skip(i + 1) {
                let w = pres
                    .conj
                    .iter()
                    .find(|&&(a, b, _)| (a, b) == (j, i))
                    .map(|(_, _, w)| w.clone())
                    .unwrap_or_else(|| vec![(j, 1)]);
                *slot = c.collect(&w)?;
            }
            let mut table = vec![c.unit_table(i), first];
            if c.orders[i] <= POWER_TABLE_LIMIT {
                for k in 2..c.orders[i] as usize {
                    // g_j^{g_i^k} = (g_j^{g_i^{k-1}})^{g_i}, computed letter by letter.
                    let mut next = vec![vec![0; n]; n];
                    for (j, slot) in next.iter_mut().enumerate().skip(i + 1) {
                        let mut steps = 0;
                        for (l, &e) in table[k - 1][j].iter().enumerate() {
                            for _ in 0..e {
                                c.multiply_into(slot, &table[1][l], &mut steps)?;
                            }
                        }
                    }
                    table.push(next);
                }
            }
            c.conj[i] = table;
            let mut inv = vec![0; n];
            inv[i] = c.orders[i] - 1;
            let tail = c.invert(&c.power[i])?;
            c.multiply_into(&mut inv, &tail, &mut 0)?;
            c.inverse[i] = inv;
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Normal form of a word in the generators and their inverses.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<Vec<u32>> {
        let mut x = vec![0; self.len()];
        let mut steps = 0;
        for &(g, e) in word {
            let letter = if e >= 0 { self.unit(g) } else { self.inverse[g].clone() };
            for _ in 0..e.unsigned_abs() {
                self.multiply_into(&mut x, &letter, &mut steps)?;
            }
        }
        Ok(x)
    }

    fn unit_table(&self, i: usize) -> Vec<Vec<u32>> {
        (0..self.len()).map(|j| if j > i { self.unit(j) } else { vec![0; self.len()] }).collect()
    }

    fn unit(&self, g: usize) -> Vec<u32> {
        let mut v = vec![0; self.len()];
        v[g] = 1;
        v
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        let mut out = x.to_vec();
        self.multiply_into(&mut out, y, &mut 0)?;
        Ok(out)
    }

    /// `(g_1^{x_1} ⋯ g_n^{x_n})^{-1} = (g_n^{-1})^{x_n} ⋯ (g_1^{-1})^{x_1}`.
    pub fn invert(&self, x: &[u32]) -> Result<Vec<u32>> {
        let mut out = vec![0; self.len()];
        let mut steps = 0;
        for j in (0..self.len()).rev() {
            for _ in 0..x[j] {
                self.multiply_into(&mut out, &self.inverse[j], &mut steps)?;
            }
        }
        Ok(out)
    }

    fn multiply_into(&self, x: &mut [u32], y: &[u32], steps: &mut u64) -> Result<()> {
        for (j, &k) in y.iter().enumerate() {
            if k > 0 {
                self.multiply_gen_power(x, j, k, steps)?;
            }
        }
        Ok(())
    }

    fn multiply_gen_power(&self, x: &mut [u32], i: usize, k: u32, steps: &mut u64) -> Result<()> {
        if x[i + 1..].iter().all(|&t| t == 0) {
            *steps += 1;
            self.bump(x, i, k, steps)?;
            return Ok(());
        }
        if (k as usize) < self.conj[i].len() {
            return self.multiply_gen(x, i, k, steps);
        }
        for _ in 0..k {
            self.multiply_gen(x, i, 1, steps)?;
        }
        Ok(())
    }

    /// Adds `k` to the exponent of `g_i`, whose tail is trivial.
    fn bump(&self, x: &mut [u32], i: usize, k: u32, steps: &mut u64) -> Result<()> {
        x[i] += k;
        if x[i] >= self.orders[i] {
            x[i] -= self.orders[i];
            self.multiply_into(x, &self.power[i], steps)?;
        }
        Ok(())
    }

    /// `x · g_i^k = (g_1^{x_1} ⋯ g_i^{x_i + k}) · t^{g_i^k}`, `t` the tail after `g_i`.
    fn multiply_gen(&self, x: &mut [u32], i: usize, k: u32, steps: &mut u64) -> Result<()> {
        *steps += 1;
        if *steps > self.budget {
            return Err(Error::Divergence(*steps));
        }
        let tail: Vec<u32> = x[i + 1..].to_vec();
        x[i + 1..].iter_mut().for_each(|t| *t = 0);
        self.bump(x, i, k, steps)?;
        let images = &self.conj[i][k as usize];
        for (off, &t) in tail.iter().enumerate() {
            for _ in 0..t {
                self.multiply_into(x, &images[i + 1 + off], steps)?;
            }
        }
        Ok(())
    }
}

/// Multiplication oracle over normal words; `g_1` is the most significant
/// digit of the code.
#[derive(Debug, Clone)]
pub struct PcGroup {
    pres: PcPresentation,
    collector: Collector,
    radix: Radix,
}

impl PcGroup {
    pub fn new(pres: PcPresentation) -> Result<Self> {
        let collector = Collector::new(&pres)?;
        let radix = Radix::new(pres.orders.clone());
        if radix.space() > u32::MAX as u64 {
            return Err(Error::Resource {
                what: "pc code space".into(),
                needed: radix.space(),
                budget: u32::MAX as u64,
            });
        }
        Ok(PcGroup { pres, collector, radix })
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn collector(&self) -> &Collector {
        &self.collector
    }

    pub fn encode(&self, x: &[u32]) -> Code {
        self.radix.encode(x)
    }

    pub fn decode(&self, c: Code) -> Vec<u32> {
        self.radix.decode(c)
    }

    /// Code of a word such as `"a^2 b^-1"`.
    pub fn word(&self, text: &str) -> Result<Code> {
        let w = parse::parse_word(&self.pres, text, 1, 1)?;
        Ok(self.encode(&self.collector.collect(&w)?))
    }

    pub fn generators(&self) -> Vec<Code> {
        (0..self.pres.len()).map(|i| self.encode(&self.collector.unit(i))).collect()
    }
}

impl GroupOracle for PcGroup {
    fn code_space(&self) -> u64 {
        self.radix.space()
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, a: Code, b: Code) -> Code {
        let x = self.decode(a);
        let y = self.decode(b);
        match self.collector.multiply(&x, &y) {
            Ok(z) => self.encode(&z),
            Err(e) => panic!("collection failed on a consistent-looking presentation: {e}"),
        }
    }

    fn inv(&self, a: Code) -> Code {
        match self.collector.invert(&self.decode(a)) {
            Ok(z) => self.encode(&z),
            Err(e) => panic!("collection failed on a consistent-looking presentation: {e}"),
        }
    }

    /// Normal word such as `a^2*b*c^4`, or `1`.
    fn format(&self, a: Code) -> String {
        let x = self.decode(a);
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                let n = &self.pres.names[i];
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn parse(&self, text: &str) -> Option<Code> {
        self.word(text).ok()
    }
}

/// Enumerates the group from all generators and checks that it has
/// `Π p^{e_i}` elements; the realization also spot-checks associativity.
pub fn consistency_check(pres: &PcPresentation) -> bool {
    let Ok(oracle) = PcGroup::new(pres.clone()) else { return false };
    if pres.is_empty() {
        return true;
    }
    let oracle = Arc::new(oracle);
    let gens = oracle.generators();
    let names = pres.names.clone();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        Group::realize(oracle, gens, names, Config::default()).map(|g| g.order())
    }));
    matches!(result, Ok(Ok(order)) if order == pres.order())
}

/// Realizes a presentation, using all its generators as the word generators.
pub fn realize(pres: PcPresentation, config: Config) -> Result<(Arc<PcGroup>, Group)> {
    let oracle = Arc::new(PcGroup::new(pres)?);
    let gens = oracle.generators();
    let names = oracle.presentation().names.clone();
    let group = Group::realize(oracle.clone(), gens, names, config)?;
    Ok((oracle, group))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H3: &str = "p 5\ngen a 25\ngen b 25\ngen c 5\ncomm [a,b] = c\ncomm [a,c] = b^5\n";

    #[test]
    fn parses_h3() {
        let pres = parse_presentation(H3).unwrap();
        assert_eq!(pres.orders(), &[25, 25, 5]);
        assert_eq!(pres.order(), 3125);
        let again = parse_presentation(&pres.to_text()).unwrap();
        assert_eq!(again.to_text(), pres.to_text());
    }

    #[test]
    fn collects_small_words() {
        let g = PcGroup::new(parse_presentation(H3).unwrap()).unwrap();
        let c = g.collector();
        // ba = ab[b,a] = abc⁻¹.
        assert_eq!(c.collect(&[(1, 1), (0, 1)]).unwrap(), vec![1, 1, 4]);
        // c^a = c[c,a] = c(b^5)⁻¹, i.e. b^20 c.
        assert_eq!(c.collect(&[(0, -1), (2, 1), (0, 1)]).unwrap(), vec![0, 20, 1]);
        assert_eq!(c.collect(&[(0, 25)]).unwrap(), vec![0, 0, 0]);
        assert_eq!(g.format(g.word("b a").unwrap()), "a*b*c^4");
    }

    #[test]
    fn trivial_and_rejected_presentations() {
        let pres = parse_presentation("p 3\n").unwrap();
        assert!(pres.is_empty());
        assert!(consistency_check(&pres));
        let err = parse_presentation("p 5\ngen a 5\ngen b 5\ngen c 5\ncomm [b,c] = a\n").unwrap_err();
        assert!(matches!(err, Error::IllOrdered { line: 5, .. }), "{err:?}");
        let err = parse_presentation("p 5\ngen a 6\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err:?}");
        let err = parse_presentation("p 5\ngen a 5\npow a = b\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, column: 9, .. }), "{err:?}");
    }

    #[test]
    fn h3_is_consistent() {
        assert!(consistency_check(&parse_presentation(H3).unwrap()));
    }

    #[test]
    fn inconsistent_fixture() {
        // c has relative order 25 but the relations force c^5 = 1: a commutes
        // with b^5 because b^5 is central, and [a, b]^5 = [a, b^5] = 1.
        let text = "p 5\ngen a 5\ngen b 25\ngen c 25\ncomm [a,b] = c\n";
        assert!(!consistency_check(&parse_presentation(text).unwrap()));
    }
}
