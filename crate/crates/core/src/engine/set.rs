use super::Code;

/// A set of element codes backed by a bitmap over the code space.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet {
    words: Vec<u64>,
    len: usize,
}

impl ElementSet {
    pub fn new(space: u64) -> Self {
        ElementSet { words: vec![0; space.div_ceil(64) as usize], len: 0 }
    }

    pub fn from_codes(space: u64, codes: impl IntoIterator<Item = Code>) -> Self {
        let mut set = Self::new(space);
        for c in codes {
            set.insert(c);
        }
        set
    }

    #[inline]
    pub fn contains(&self, c: Code) -> bool {
        let i = c as usize;
        self.words.get(i >> 6).is_some_and(|w| w & (1u64 << (i & 63)) != 0)
    }

    /// Returns true if the code was not present before.
    #[inline]
    pub fn insert(&mut self, c: Code) -> bool {
        let i = c as usize;
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(other.words.iter().chain(std::iter::repeat(&0))).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &ElementSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Code> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((wi as u32) * 64 + b)
            })
        })
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter().take(32)).finish()?;
        if self.len > 32 {
            write!(f, " (+{} more)", self.len - 32)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_iterate() {
        let mut s = ElementSet::new(200);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(64);
        s.insert(199);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 199]);
        assert_eq!(s.len(), 3);
        assert!(!s.contains(4));
        assert!(!s.contains(10_000));
    }

    #[test]
    fn subset_and_intersection() {
        let a = ElementSet::from_codes(100, [1, 2, 3]);
        let b = ElementSet::from_codes(100, [1, 2, 3, 50]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.intersection_len(&b), 3);
    }
}
