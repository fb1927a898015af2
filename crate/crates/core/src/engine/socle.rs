use super::group::UnionFind;
use super::{Code, Group};

/// For every element `g ≠ 1`, the conjugacy-orbit ids of the prime-order
/// subgroups of `⟨g⟩` (exactly one id in a `p`-group).
///
/// Two cyclic subgroups meet nontrivially exactly when they share a subgroup
/// of prime order, so comparing ids decides whether conjugates of two cyclic
/// subgroups intersect.
#[derive(Debug, Clone)]
pub struct SocleIndex {
    offsets: Vec<u32>,
    ids: Vec<u32>,
    count: usize,
    single: bool,
}

impl SocleIndex {
    pub fn build(group: &Group) -> SocleIndex {
        let space = group.code_space() as usize;
        let id = group.identity();
        let mut canon = vec![Code::MAX; space];

        // Prime-order elements reached from each g, as (g, s) pairs.
        let mut socle_of: Vec<(Code, Code)> = Vec::new();
        if let (Some(_), Some(pmap), Some(lo)) = (group.prime(), group.power_map(), group.log_orders()) {
            let mut soc = vec![Code::MAX; space];
            let mut by_level: Vec<Vec<Code>> = Vec::new();
            for g in group.elements() {
                let l = lo[g as usize] as usize;
                if by_level.len() <= l {
                    by_level.resize(l + 1, Vec::new());
                }
                by_level[l].push(g);
            }
            for (l, level) in by_level.iter().enumerate().skip(1) {
                for &g in level {
                    soc[g as usize] = if l == 1 { g } else { soc[pmap[g as usize] as usize] };
                    socle_of.push((g, soc[g as usize]));
                }
            }
        } else {
            for g in group.elements().filter(|&g| g != id) {
                let o = group.element_order(g);
                for q in super::prime_divisors(o) {
                    socle_of.push((g, group.pow(g, o / q)));
                }
            }
        }
        socle_of.sort_unstable();

        let mut canonical = |s: Code| -> Code {
            if canon[s as usize] == Code::MAX {
                let c = canonical_prime_subgroup(group, s);
                canon[s as usize] = c;
            }
            canon[s as usize]
        };
        let mut reps: Vec<Code> = socle_of.iter().map(|&(_, s)| canonical(s)).collect();

        let mut uf = UnionFind::new(space);
        let mut distinct = reps.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let ginv: Vec<Code> = group.gens().iter().map(|&g| group.inv(g)).collect();
        for &s in &distinct {
            for (&g, &gi) in group.gens().iter().zip(&ginv) {
                let t = group.mul(group.mul(gi, s), g);
                uf.union(s, canonical(t));
            }
        }

        let mut dense = vec![u32::MAX; space];
        let mut count = 0;
        for &s in &distinct {
            let r = uf.find(s) as usize;
            if dense[r] == u32::MAX {
                dense[r] = count;
                count += 1;
            }
        }
        for r in reps.iter_mut() {
            *r = dense[uf.find(*r) as usize];
        }

        let mut offsets = vec![0u32; space + 1];
        for &(g, _) in &socle_of {
            offsets[g as usize + 1] += 1;
        }
        let single = offsets.iter().all(|&n| n <= 1);
        for i in 0..space {
            offsets[i + 1] += offsets[i];
        }
        // socle_of is sorted by element, so reps is already in CSR order; the
        // ids of one element are kept sorted and deduplicated.
        let mut ids = reps;
        for g in 0..space {
            let (a, b) = (offsets[g] as usize, offsets[g + 1] as usize);
            ids[a..b].sort_unstable();
        }
        SocleIndex { offsets, ids, count: count as usize, single }
    }

    /// Orbit ids of the prime-order subgroups of `⟨g⟩`; empty for the identity.
    pub fn ids(&self, g: Code) -> &[u32] {
        let g = g as usize;
        &self.ids[self.offsets[g] as usize..self.offsets[g + 1] as usize]
    }

    /// Number of conjugacy classes of prime-order subgroups.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Whether every element has at most one id (true for `p`-groups).
    pub fn is_single(&self) -> bool {
        self.single
    }
}

/// The least code among the generators of the prime-order subgroup `⟨s⟩`.
pub fn canonical_prime_subgroup(group: &Group, s: Code) -> Code {
    let id = group.identity();
    let mut best = s;
    let mut c = group.mul(s, s);
    while c != id && c != s {
        best = best.min(c);
        c = group.mul(c, s);
    }
    best
}

/// The prime-order elements `g^{o/q}` for each prime `q` dividing `o(g)`.
pub fn socle_elements(group: &Group, g: Code) -> Vec<Code> {
    let o = group.element_order(g);
    super::prime_divisors(o).into_iter().map(|q| group.pow(g, o / q)).collect()
}
