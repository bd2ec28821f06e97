//! Permutation states, the three generator moves, move words, bit packing and
//! seeded hashing.
//!
//! A state is a permutation of {0, .., n-1} in one-line notation. The moves
//! act on the contents: `L` shifts every entry one position left (cyclically),
//! `R` shifts right, `X` swaps the entries at positions 0 and 1.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorMove {
    L,
    R,
    X,
}

impl GeneratorMove {
    pub const ALL: [GeneratorMove; 3] = [GeneratorMove::L, GeneratorMove::R, GeneratorMove::X];

    /// The move undoing this one. `X` is an involution, `L` and `R` cancel.
    pub fn inverse(self) -> GeneratorMove {
        match self {
            GeneratorMove::L => GeneratorMove::R,
            GeneratorMove::R => GeneratorMove::L,
            GeneratorMove::X => GeneratorMove::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            GeneratorMove::L => 'L',
            GeneratorMove::R => 'R',
            GeneratorMove::X => 'X',
        }
    }

    pub fn from_char(c: char) -> Result<GeneratorMove> {
        match c {
            'L' => Ok(GeneratorMove::L),
            'R' => Ok(GeneratorMove::R),
            'X' => Ok(GeneratorMove::X),
            _ => Err(Error::InvalidInput(format!("unknown move character {c:?}"))),
        }
    }
}

impl fmt::Display for GeneratorMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A sequence of moves, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<GeneratorMove>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn from_moves(moves: Vec<GeneratorMove>) -> Word {
        Word(moves)
    }

    pub fn moves(&self) -> &[GeneratorMove] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, mv: GeneratorMove) {
        self.0.push(mv);
    }

    /// The word that replays the path backwards: reversed order, each move inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|m| m.inverse()).collect())
    }

    /// Number of `X` moves in the word.
    pub fn swap_count(&self) -> usize {
        self.0.iter().filter(|m| **m == GeneratorMove::X).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for mv in &self.0 {
            write!(f, "{}", mv.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.trim()
            .chars()
            .map(GeneratorMove::from_char)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl FromIterator<GeneratorMove> for Word {
    fn from_iter<I: IntoIterator<Item = GeneratorMove>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

/// Permutation in one-line notation. `entries()[i]` is the value at position i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        assert!((2..=u16::MAX as usize).contains(&n), "need 2 <= n <= 65535");
        Permutation {
            entries: (0..n as u16).collect(),
        }
    }

    /// Validates that `entries` is a permutation of {0, .., n-1} with n >= 2.
    pub fn from_entries(entries: Vec<u16>) -> Result<Permutation> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "permutation needs at least 2 entries, got {n}"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &entries {
            if v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "entry {v} out of range for n = {n}"
                )));
            }
            if seen[v as usize] {
                return Err(Error::InvalidInput(format!("duplicate entry {v}")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { entries })
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut p = Permutation::identity(n);
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            p.entries.swap(i, j);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn apply_move(&self, mv: GeneratorMove) -> Permutation {
        let mut v = self.entries.clone();
        match mv {
            GeneratorMove::L => v.rotate_left(1),
            GeneratorMove::R => v.rotate_right(1),
            GeneratorMove::X => v.swap(0, 1),
        }
        Permutation { entries: v }
    }

    /// Applies every move of `w` in order. Rotations are tracked as an offset
    /// so the cost is one pass over the word plus one materialization.
    pub fn apply_word(&self, w: &Word) -> Permutation {
        let n = self.n();
        let mut v = self.entries.clone();
        let mut off = 0usize;
        for &mv in w.moves() {
            match mv {
                GeneratorMove::L => off = if off + 1 == n { 0 } else { off + 1 },
                GeneratorMove::R => off = if off == 0 { n - 1 } else { off - 1 },
                GeneratorMove::X => {
                    let j = if off + 1 == n { 0 } else { off + 1 };
                    v.swap(off, j);
                }
            }
        }
        v.rotate_left(off);
        Permutation { entries: v }
    }

    /// Function composition: `(self ∘ other)[i] = self[other[i]]`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        let entries = other.entries.iter().map(|&i| self.entries[i as usize]).collect();
        Permutation { entries }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.n()];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v as usize] = i as u16;
        }
        Permutation { entries: inv }
    }

    /// Number of pairs i < j with p[i] > p[j].
    pub fn inversion_count(&self) -> u64 {
        let mut count = 0u64;
        for i in 0..self.entries.len() {
            for j in i + 1..self.entries.len() {
                if self.entries[i] > self.entries[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Permutation> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u16>()
                    .map_err(|e| Error::InvalidInput(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_entries(entries)
    }
}

/// Permutation packed at 4 bits per entry into a single 64-bit block. Only
/// valid for n <= 16.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PackedState {
    bits: u64,
    n: u8,
}

impl PackedState {
    pub fn pack(p: &Permutation) -> Option<PackedState> {
        if p.n() > 16 {
            return None;
        }
        let mut bits = 0u64;
        for (i, &v) in p.entries().iter().enumerate() {
            bits |= (v as u64) << (4 * i);
        }
        Some(PackedState {
            bits,
            n: p.n() as u8,
        })
    }

    pub fn from_entries(entries: &[u16]) -> Option<PackedState> {
        if entries.len() > 16 || entries.len() < 2 {
            return None;
        }
        let mut bits = 0u64;
        for (i, &v) in entries.iter().enumerate() {
            bits |= (v as u64) << (4 * i);
        }
        Some(PackedState {
            bits,
            n: entries.len() as u8,
        })
    }

    pub fn unpack(&self) -> Permutation {
        let entries = (0..self.n as usize)
            .map(|i| ((self.bits >> (4 * i)) & 0xF) as u16)
            .collect();
        Permutation { entries }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn apply_move(&self, mv: GeneratorMove) -> PackedState {
        let n = self.n as u32;
        let bits = match mv {
            GeneratorMove::L => {
                (self.bits >> 4) | ((self.bits & 0xF) << (4 * (n - 1)))
            }
            GeneratorMove::R => {
                let top = (self.bits >> (4 * (n - 1))) & 0xF;
                let mask = if n == 16 { u64::MAX } else { (1u64 << (4 * n)) - 1 };
                ((self.bits << 4) & mask) | top
            }
            GeneratorMove::X => {
                (self.bits & !0xFFu64) | ((self.bits & 0xF) << 4) | ((self.bits >> 4) & 0xF)
            }
        };
        PackedState { bits, n: self.n }
    }

    /// Seeded hash, consistent with [`hash_state`] on the unpacked value.
    pub fn hash_with(&self, seed: u64) -> u64 {
        mix64(self.bits ^ mix64(seed ^ self.n as u64))
    }
}

/// SplitMix64 finalizer. Bijective on u64, which makes the packed-state hash
/// collision-free within a fixed n.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded 64-bit state hash. n <= 16 routes through the packed form; larger
/// permutations fold entry by entry.
pub fn hash_state(p: &Permutation, seed: u64) -> u64 {
    match PackedState::pack(p) {
        Some(packed) => packed.hash_with(seed),
        None => hash_entries(p.entries(), seed),
    }
}

pub(crate) fn hash_entries(entries: &[u16], seed: u64) -> u64 {
    if let Some(packed) = PackedState::from_entries(entries) {
        return packed.hash_with(seed);
    }
    let mut h = mix64(seed ^ entries.len() as u64);
    for &v in entries {
        h = mix64(h ^ (v as u64).wrapping_add(0x9e37_79b9_7f4a_7c15));
    }
    h
}
