use crate::engine::{Code, GroupOracle};

/// `C_n × C_n` under componentwise addition; `(a, b)` has code `a·n + b`.
#[derive(Debug, Clone)]
pub struct Abelian {
    n: u32,
}

impl Abelian {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "C_0 is not finite");
        Abelian { n }
    }

    pub fn element(&self, a: u32, b: u32) -> Code {
        (a % self.n) * self.n + b % self.n
    }

    /// The standard generators `(1, 0)` and `(0, 1)`.
    pub fn generators(&self) -> Vec<Code> {
        vec![self.element(1, 0), self.element(0, 1)]
    }
}

impl GroupOracle for Abelian {
    fn code_space(&self) -> u64 {
        self.n as u64 * self.n as u64
    }

    fn identity(&self) -> Code {
        0
    }

    fn mul(&self, a: Code, b: Code) -> Code {
        let n = self.n;
        self.element(a / n + b / n, a % n + b % n)
    }

    fn inv(&self, a: Code) -> Code {
        let n = self.n;
        self.element(n - a / n, n - a % n)
    }

    fn format(&self, a: Code) -> String {
        format!("({},{})", a / self.n, a % self.n)
    }

    fn parse(&self, text: &str) -> Option<Code> {
        let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (a, b) = inner.split_once(',')?;
        let a: u32 = a.trim().parse().ok()?;
        let b: u32 = b.trim().parse().ok()?;
        (a < self.n && b < self.n).then(|| self.element(a, b))
    }
}
