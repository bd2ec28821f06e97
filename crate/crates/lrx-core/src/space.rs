//! Dense indexing of the state spaces.
//!
//! Permutations get Lehmer ranks (factorial number system), which order S_n
//! lexicographically. Balanced strings get combinadic ranks. Exact pipelines
//! store per-state data in flat arrays indexed by rank.

use crate::error::{Error, Result};
use crate::graph::{CosetState, GraphKind, GraphSpec};
use crate::perm::Permutation;

pub(crate) const MAX_FULL_N: usize = 20;

/// Lehmer ranking of S_n. Rank order equals lexicographic order on one-line
/// notation, with the identity at rank 0.
pub struct FullSpace {
    n: usize,
    fact: Vec<u64>,
}

impl FullSpace {
    pub fn new(n: usize) -> Result<FullSpace> {
        if !(2..=MAX_FULL_N).contains(&n) {
            return Err(Error::InvalidConfig(format!(
                "ranked permutation space supports 2 <= n <= {MAX_FULL_N}, got {n}"
            )));
        }
        let mut fact = vec![1u64; n + 1];
        for i in 1..=n {
            fact[i] = fact[i - 1] * i as u64;
        }
        Ok(FullSpace { n, fact })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.fact[self.n]
    }

    pub fn rank(&self, entries: &[u16]) -> u64 {
        debug_assert_eq!(entries.len(), self.n);
        let mut r = 0u64;
        for i in 0..self.n {
            let mut smaller_right = 0u64;
            for j in i + 1..self.n {
                if entries[j] < entries[i] {
                    smaller_right += 1;
                }
            }
            r += smaller_right * self.fact[self.n - 1 - i];
        }
        r
    }

    pub fn rank_perm(&self, p: &Permutation) -> u64 {
        self.rank(p.entries())
    }

    pub fn unrank_into(&self, mut r: u64, out: &mut [u16]) {
        debug_assert_eq!(out.len(), self.n);
        debug_assert!(r < self.size());
        let mut avail = [0u16; MAX_FULL_N];
        for (v, slot) in avail.iter_mut().enumerate().take(self.n) {
            *slot = v as u16;
        }
        let mut len = self.n;
        for (i, slot) in out.iter_mut().enumerate() {
            let f = self.fact[self.n - 1 - i];
            let d = (r / f) as usize;
            r %= f;
            *slot = avail[d];
            for t in d..len - 1 {
                avail[t] = avail[t + 1];
            }
            len -= 1;
        }
    }

    pub fn unrank(&self, r: u64) -> Permutation {
        let mut out = vec![0u16; self.n];
        self.unrank_into(r, &mut out);
        Permutation::from_entries(out).expect("unrank produces a permutation")
    }

    /// Ranks of the L, R, X images of the state at rank `r`, in that order.
    pub fn neighbor_ranks(&self, r: u64) -> [u64; 3] {
        let n = self.n;
        let mut p = [0u16; MAX_FULL_N];
        let mut q = [0u16; MAX_FULL_N];
        self.unrank_into(r, &mut p[..n]);
        for i in 0..n {
            q[i] = p[(i + 1) % n];
        }
        let l = self.rank(&q[..n]);
        for i in 0..n {
            q[i] = p[(i + n - 1) % n];
        }
        let rr = self.rank(&q[..n]);
        q[..n].copy_from_slice(&p[..n]);
        q.swap(0, 1);
        let x = self.rank(&q[..n]);
        [l, rr, x]
    }
}

/// Combinadic ranking of the n-choose-n/2 balanced strings.
pub struct CosetSpace {
    n: usize,
    half: usize,
    // binom[i][j] = C(i, j), j <= half
    binom: Vec<Vec<u64>>,
}

impl CosetSpace {
    pub fn new(n: usize) -> Result<CosetSpace> {
        if n < 4 || n % 2 != 0 || n > 63 {
            return Err(Error::InvalidConfig(format!(
                "coset space needs even n in 4..=63, got {n}"
            )));
        }
        let half = n / 2;
        let mut binom = vec![vec![0u64; half + 1]; n + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for i in 1..=n {
            for j in 1..=half {
                let prev = &binom[i - 1];
                binom[i][j] = prev[j - 1] + prev[j];
            }
        }
        Ok(CosetSpace { n, half, binom })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.binom[self.n][self.half]
    }

    pub fn rank_mask(&self, mask: u64) -> u64 {
        debug_assert_eq!(mask.count_ones() as usize, self.half);
        let mut r = 0u64;
        let mut i = 1usize;
        let mut bits = mask;
        while bits != 0 {
            let pos = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            r += self.binom[pos][i];
            i += 1;
        }
        r
    }

    pub fn rank(&self, s: &CosetState) -> u64 {
        self.rank_mask(s.mask())
    }

    pub fn unrank_mask(&self, mut r: u64) -> u64 {
        let mut mask = 0u64;
        for i in (1..=self.half).rev() {
            // largest p with C(p, i) <= r
            let mut p = i - 1;
            while p + 1 < self.n && self.binom[p + 1][i] <= r {
                p += 1;
            }
            mask |= 1u64 << p;
            r -= self.binom[p][i];
        }
        debug_assert_eq!(r, 0);
        mask
    }

    pub fn unrank(&self, r: u64) -> CosetState {
        CosetState::from_mask(self.unrank_mask(r), self.n).expect("unrank produces a valid state")
    }

    pub fn neighbor_masks(&self, mask: u64) -> [u64; 3] {
        let n = self.n as u32;
        let l = (mask >> 1) | ((mask & 1) << (n - 1));
        let top = (mask >> (n - 1)) & 1;
        let r = ((mask << 1) & ((1u64 << n) - 1)) | top;
        let b0 = mask & 1;
        let b1 = (mask >> 1) & 1;
        let x = (mask & !0b11) | (b0 << 1) | b1;
        [l, r, x]
    }

    pub fn neighbor_ranks(&self, r: u64) -> [u64; 3] {
        let mask = self.unrank_mask(r);
        let [l, rr, x] = self.neighbor_masks(mask);
        [self.rank_mask(l), self.rank_mask(rr), self.rank_mask(x)]
    }
}

/// Rank-indexed view of whichever space a spec names.
pub(crate) enum Space {
    Full(FullSpace),
    Coset(CosetSpace),
}

impl Space {
    pub fn for_spec(spec: &GraphSpec) -> Result<Space> {
        spec.validate()?;
        match spec.kind {
            GraphKind::FullCayley => Ok(Space::Full(FullSpace::new(spec.n)?)),
            GraphKind::Coset => Ok(Space::Coset(CosetSpace::new(spec.n)?)),
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            Space::Full(s) => s.size(),
            Space::Coset(s) => s.size(),
        }
    }

    pub fn neighbor_ranks(&self, r: u64) -> [u64; 3] {
        match self {
            Space::Full(s) => s.neighbor_ranks(r),
            Space::Coset(s) => s.neighbor_ranks(r),
        }
    }

    /// Rank of the canonical start: identity or the sorted balanced string.
    pub fn start_rank(&self) -> u64 {
        match self {
            Space::Full(s) => s.rank_perm(&Permutation::identity(s.n())),
            Space::Coset(s) => s.rank(&CosetState::start(s.n()).expect("valid n")),
        }
    }

    pub fn label(&self, r: u64) -> String {
        match self {
            Space::Full(s) => s.unrank(r).to_string(),
            Space::Coset(s) => s.unrank(r).to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lehmer_rank_is_lexicographic() {
        let s = FullSpace::new(3).unwrap();
        let order: Vec<String> = (0..6).map(|r| s.unrank(r).to_string()).collect();
        assert_eq!(
            order,
            vec!["0,1,2", "0,2,1", "1,0,2", "1,2,0", "2,0,1", "2,1,0"]
        );
        assert_eq!(s.rank_perm(&Permutation::identity(3)), 0);
    }

    #[test]
    fn rank_unrank_round_trip_s7() {
        let s = FullSpace::new(7).unwrap();
        for r in 0..s.size() {
            assert_eq!(s.rank_perm(&s.unrank(r)), r);
        }
    }

    #[test]
    fn neighbor_ranks_match_moves() {
        use crate::perm::GeneratorMove::{L, R, X};
        let s = FullSpace::new(5).unwrap();
        for r in (0..s.size()).step_by(7) {
            let p = s.unrank(r);
            let [lr, rr, xr] = s.neighbor_ranks(r);
            assert_eq!(s.unrank(lr), p.apply_move(L));
            assert_eq!(s.unrank(rr), p.apply_move(R));
            assert_eq!(s.unrank(xr), p.apply_move(X));
        }
    }

    #[test]
    fn coset_rank_round_trip() {
        for n in [4, 6, 8, 10] {
            let s = CosetSpace::new(n).unwrap();
            let mut seen = std::collections::HashSet::new();
            for r in 0..s.size() {
                let state = s.unrank(r);
                assert_eq!(s.rank(&state), r);
                assert!(seen.insert(state.mask()));
            }
            assert_eq!(seen.len() as u64, s.size());
        }
    }

    #[test]
    fn coset_sizes_are_central_binomials() {
        assert_eq!(CosetSpace::new(4).unwrap().size(), 6);
        assert_eq!(CosetSpace::new(6).unwrap().size(), 20);
        assert_eq!(CosetSpace::new(12).unwrap().size(), 924);
    }

    #[test]
    fn coset_neighbor_ranks_match_moves() {
        use crate::perm::GeneratorMove::{L, R, X};
        let s = CosetSpace::new(8).unwrap();
        for r in 0..s.size() {
            let state = s.unrank(r);
            let [lr, rr, xr] = s.neighbor_ranks(r);
            assert_eq!(s.unrank(lr), state.apply_move(L));
            assert_eq!(s.unrank(rr), state.apply_move(R));
            assert_eq!(s.unrank(xr), state.apply_move(X));
        }
    }
}
