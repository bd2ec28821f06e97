//! The two searchable spaces and their generator structure.
//!
//! `FullCayley` is the graph on all of S_n with moves L, R, X acting on
//! one-line permutations. `Coset` is the quotient on balanced binary strings:
//! each permutation maps to the string marking which positions hold values
//! >= n/2, and the same three moves act on the strings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{hash_state, mix64, GeneratorMove, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    FullCayley,
    Coset,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::FullCayley => write!(f, "full"),
            GraphKind::Coset => write!(f, "coset"),
        }
    }
}

/// Which graph to work on, plus the X-trick pruning flag.
///
/// With `x_trick` enabled the X edge is omitted from states whose first two
/// positions are already in order, halving the branching on half the states
/// while keeping at least one geodesic to the sorted state intact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub n: usize,
    pub x_trick: bool,
}

impl GraphSpec {
    pub fn full(n: usize) -> Result<GraphSpec> {
        let spec = GraphSpec {
            kind: GraphKind::FullCayley,
            n,
            x_trick: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn coset(n: usize) -> Result<GraphSpec> {
        let spec = GraphSpec {
            kind: GraphKind::Coset,
            n,
            x_trick: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_x_trick(mut self, on: bool) -> GraphSpec {
        self.x_trick = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GraphKind::FullCayley => {
                if self.n < 2 {
                    return Err(Error::InvalidConfig(format!(
                        "full graph needs n >= 2, got {}",
                        self.n
                    )));
                }
            }
            GraphKind::Coset => {
                if self.n < 4 || self.n % 2 != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "coset graph needs even n >= 4, got {}",
                        self.n
                    )));
                }
                if self.n > 63 {
                    return Err(Error::Resource(format!(
                        "coset strings limited to n <= 63, got {}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Balanced binary string of length n, stored with bit i of `mask` holding
/// position i.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CosetState {
    mask: u64,
    n: u8,
}

impl CosetState {
    pub fn from_mask(mask: u64, n: usize) -> Result<CosetState> {
        if !(4..=63).contains(&n) || n % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "coset state needs even n in 4..=63, got {n}"
            )));
        }
        if mask >> n != 0 {
            return Err(Error::InvalidInput("mask has bits beyond n".into()));
        }
        if mask.count_ones() as usize != n / 2 {
            return Err(Error::InvalidInput(format!(
                "coset state needs exactly {} ones, got {}",
                n / 2,
                mask.count_ones()
            )));
        }
        Ok(CosetState { mask, n: n as u8 })
    }

    /// The sorted-side start state: n/2 zeros followed by n/2 ones.
    pub fn start(n: usize) -> Result<CosetState> {
        let half = n / 2;
        CosetState::from_mask(((1u64 << half) - 1) << half, n)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.mask >> i) & 1 == 1
    }

    pub fn apply_move(&self, mv: GeneratorMove) -> CosetState {
        let n = self.n as u32;
        let mask = self.mask;
        let bits = match mv {
            GeneratorMove::L => (mask >> 1) | ((mask & 1) << (n - 1)),
            GeneratorMove::R => {
                let top = (mask >> (n - 1)) & 1;
                ((mask << 1) & ((1u64 << n) - 1)) | top
            }
            GeneratorMove::X => {
                let b0 = mask & 1;
                let b1 = (mask >> 1) & 1;
                (mask & !0b11) | (b0 << 1) | b1
            }
        };
        CosetState {
            mask: bits,
            n: self.n,
        }
    }
}

impl fmt::Display for CosetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n as usize {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CosetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CosetState({self})")
    }
}

impl FromStr for CosetState {
    type Err = Error;

    fn from_str(s: &str) -> Result<CosetState> {
        let s = s.trim();
        let mut mask = 0u64;
        if s.len() > 63 {
            return Err(Error::InvalidInput("coset string longer than 63".into()));
        }
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => mask |= 1 << i,
                '0' => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "coset strings are over 0/1, found {c:?}"
                    )))
                }
            }
        }
        CosetState::from_mask(mask, s.len())
    }
}

// Lexicographic order on the displayed string, not numeric order on the mask.
impl Ord for CosetState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.mask.reverse_bits() >> (64 - self.n as u32);
        let b = other.mask.reverse_bits() >> (64 - other.n as u32);
        self.n.cmp(&other.n).then(a.cmp(&b))
    }
}

impl PartialOrd for CosetState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A state either graph's moves act on.
pub trait LrxState: Clone + Eq + std::hash::Hash + Send + Sync {
    fn apply(&self, mv: GeneratorMove) -> Self;
    /// True when the first two positions are already in order, which is the
    /// condition under which the X-trick prunes the X edge.
    fn first_two_sorted(&self) -> bool;
    fn state_hash(&self, seed: u64) -> u64;
}

impl LrxState for Permutation {
    fn apply(&self, mv: GeneratorMove) -> Permutation {
        self.apply_move(mv)
    }

    fn first_two_sorted(&self) -> bool {
        self.entries()[0] < self.entries()[1]
    }

    fn state_hash(&self, seed: u64) -> u64 {
        hash_state(self, seed)
    }
}

impl LrxState for CosetState {
    fn apply(&self, mv: GeneratorMove) -> CosetState {
        self.apply_move(mv)
    }

    fn first_two_sorted(&self) -> bool {
        !self.bit(0) || self.bit(1)
    }

    fn state_hash(&self, seed: u64) -> u64 {
        mix64(self.mask ^ mix64(seed ^ (self.n as u64) ^ 0x636f_7365_7400_0000))
    }
}

/// Out-edges in fixed (L, R, X) order, honoring the spec's X-trick flag.
pub fn neighbors<S: LrxState>(state: &S, spec: &GraphSpec) -> Vec<(GeneratorMove, S)> {
    let mut out = Vec::with_capacity(3);
    out.push((GeneratorMove::L, state.apply(GeneratorMove::L)));
    out.push((GeneratorMove::R, state.apply(GeneratorMove::R)));
    if !(spec.x_trick && state.first_two_sorted()) {
        out.push((GeneratorMove::X, state.apply(GeneratorMove::X)));
    }
    out
}

/// The antidiagonal reflection `p[i] = (1 - i) mod n`, the unique farthest
/// state from the identity.
pub fn longest_element(n: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "reflection states need n >= 3, got {n}"
        )));
    }
    let entries = (0..n).map(|i| ((1 + n - (i % n)) % n) as u16).collect();
    Permutation::from_entries(entries)
}

/// All n dihedral reflections `r_k[i] = (k - i) mod n`, in order of k.
/// `longest_element(n)` is the k = 1 member.
pub fn dihedral_long_elements(n: usize) -> Result<Vec<Permutation>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "reflection states need n >= 3, got {n}"
        )));
    }
    (0..n)
        .map(|k| {
            let entries = (0..n).map(|i| ((k + n - i) % n) as u16).collect();
            Permutation::from_entries(entries)
        })
        .collect()
}

/// Quotient map onto balanced strings: position i maps to 1 when it holds a
/// value in the upper half {n/2, .., n-1}.
pub fn coset_project(p: &Permutation) -> Result<CosetState> {
    let n = p.n();
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "coset projection needs even n, got {n}"
        )));
    }
    let half = (n / 2) as u16;
    let mut mask = 0u64;
    for (i, &v) in p.entries().iter().enumerate() {
        if v >= half {
            mask |= 1 << i;
        }
    }
    CosetState::from_mask(mask, n)
}

/// A long coset string: four blocks of alternating ones and zeros with
/// lengths floor((n+i)/4), i = 0..3. Its distance comes within O(n) of the
/// coset diameter once its cyclic shifts are scanned, but it is generally
/// not a farthest state itself.
pub fn coset_long_element(n: usize) -> Result<CosetState> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "coset states need even n >= 4, got {n}"
        )));
    }
    let blocks = [(n / 4, true), ((n + 1) / 4, false), ((n + 2) / 4, true), ((n + 3) / 4, false)];
    let mut mask = 0u64;
    let mut pos = 0;
    for (len, one) in blocks {
        for _ in 0..len {
            if one {
                mask |= 1 << pos;
            }
            pos += 1;
        }
    }
    debug_assert_eq!(pos, n);
    CosetState::from_mask(mask, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorMove::{L, R, X};

    #[test]
    fn spec_validation() {
        assert!(GraphSpec::full(2).is_ok());
        assert!(GraphSpec::full(1).is_err());
        assert!(GraphSpec::coset(6).is_ok());
        assert!(GraphSpec::coset(5).is_err());
        assert!(GraphSpec::coset(2).is_err());
    }

    #[test]
    fn spec_serializes_stably() {
        let spec = GraphSpec::coset(8).unwrap().with_x_trick(true);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"coset","n":8,"x_trick":true}"#);
        let back: GraphSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn coset_moves_shift_the_string() {
        let s: CosetState = "0101".parse().unwrap();
        assert_eq!(s.apply_move(L).to_string(), "1010");
        assert_eq!(s.apply_move(R).to_string(), "1010");
        assert_eq!(s.apply_move(X).to_string(), "1001");
        let t: CosetState = "0011".parse().unwrap();
        assert_eq!(t.apply_move(X), t);
    }

    #[test]
    fn coset_state_validation() {
        assert!("0110".parse::<CosetState>().is_ok());
        assert!("0111".parse::<CosetState>().is_err());
        assert!("01".parse::<CosetState>().is_err());
        assert!("01a0".parse::<CosetState>().is_err());
    }

    #[test]
    fn coset_ordering_is_lexicographic_on_strings() {
        let a: CosetState = "0011".parse().unwrap();
        let b: CosetState = "0101".parse().unwrap();
        let c: CosetState = "1100".parse().unwrap();
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn projection_commutes_with_moves_on_all_of_s6() {
        // coset_project(apply_move(p, g)) == apply_move(coset_project(p), g)
        fn rec(prefix: &mut Vec<u16>, rest: &mut Vec<u16>) {
            if rest.is_empty() {
                let p = Permutation::from_entries(prefix.clone()).unwrap();
                let proj = coset_project(&p).unwrap();
                for mv in [L, R, X] {
                    assert_eq!(
                        coset_project(&p.apply_move(mv)).unwrap(),
                        proj.apply_move(mv),
                        "failed at {p} move {mv}"
                    );
                }
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                prefix.push(v);
                rec(prefix, rest);
                prefix.pop();
                rest.insert(i, v);
            }
        }
        rec(&mut Vec::new(), &mut (0..6).collect());
    }

    #[test]
    fn projection_of_identity_is_start() {
        for n in [4, 6, 8, 10] {
            assert_eq!(
                coset_project(&Permutation::identity(n)).unwrap(),
                CosetState::start(n).unwrap()
            );
        }
        assert_eq!(CosetState::start(6).unwrap().to_string(), "000111");
    }

    #[test]
    fn reflection_states() {
        assert_eq!(longest_element(5).unwrap().to_string(), "1,0,4,3,2");
        assert_eq!(longest_element(4).unwrap().to_string(), "1,0,3,2");
        assert!(longest_element(2).is_err());

        let dihedral = dihedral_long_elements(4).unwrap();
        assert_eq!(dihedral.len(), 4);
        assert_eq!(dihedral[1], longest_element(4).unwrap());
        assert_eq!(dihedral[3].to_string(), "3,2,1,0");
        // each is an involution
        for r in &dihedral {
            assert_eq!(r.compose(r), Permutation::identity(4));
        }
    }

    #[test]
    fn long_coset_strings() {
        assert_eq!(coset_long_element(6).unwrap().to_string(), "101100");
        assert_eq!(coset_long_element(8).unwrap().to_string(), "11001100");
        assert_eq!(coset_long_element(10).unwrap().to_string(), "1100111000");
    }

    #[test]
    fn x_trick_prunes_sorted_prefixes() {
        let spec = GraphSpec::full(4).unwrap().with_x_trick(true);
        let sorted = Permutation::identity(4);
        assert_eq!(neighbors(&sorted, &spec).len(), 2);
        let unsorted = sorted.apply_move(X);
        assert_eq!(neighbors(&unsorted, &spec).len(), 3);

        let cs = GraphSpec::coset(4).unwrap().with_x_trick(true);
        // ties count as sorted, so both equal-bit prefixes are pruned
        let tied: CosetState = "0011".parse().unwrap();
        assert_eq!(neighbors(&tied, &cs).len(), 2);
        let tied_ones: CosetState = "1100".parse().unwrap();
        assert_eq!(neighbors(&tied_ones, &cs).len(), 2);
        let descending: CosetState = "1010".parse().unwrap();
        assert_eq!(neighbors(&descending, &cs).len(), 3);
    }

    #[test]
    fn neighbor_order_is_fixed() {
        let spec = GraphSpec::full(4).unwrap();
        let p = Permutation::identity(4);
        let moves: Vec<_> = neighbors(&p, &spec).into_iter().map(|(m, _)| m).collect();
        assert_eq!(moves, vec![L, R, X]);
    }
}
