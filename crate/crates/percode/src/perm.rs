//! Permutations of coordinate positions `0 .. n-1`.
//!
//! A permutation sends coordinate `i` to position `self.image(i)`; acting on
//! a packed word, bit `i` of the input becomes bit `image(i)` of the output.

use std::fmt;

/// A permutation of `{0 .. n-1}` stored as an image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    map: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { map: (0..n as u8).collect() }
    }

    /// Build from an image table; returns `None` unless it is a bijection.
    pub fn from_images(map: Vec<u8>) -> Option<Self> {
        let n = map.len();
        if n > crate::word::MAX_LEN {
            return None;
        }
        let mut seen = [false; crate::word::MAX_LEN];
        for &v in &map {
            if (v as usize) >= n || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm { map })
    }

    /// The transposition of `a` and `b` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.map.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Image of the point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.map
    }

    /// Apply to a packed word: bit `i` of `w` moves to bit `image(i)`.
    pub fn apply_word(&self, w: u32) -> u32 {
        let mut rest = w;
        let mut out = 0;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.map[i];
        }
        out
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm { map: other.map.iter().map(|&i| self.map[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0u8; self.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v as usize] = i as u8;
        }
        Perm { map }
    }

    /// Byte-sliced lookup table for words of length at most 16; one table
    /// build amortizes over many `apply_word` calls in orbit enumerations.
    pub fn word_table(&self) -> PermTable {
        assert!(self.len() <= 16, "word tables only cover n <= 16");
        let mut lo = [0u16; 256];
        let mut hi = [0u16; 256];
        for b in 0..256u32 {
            lo[b as usize] = self.apply_word(b & crate::word::mask(self.len().min(8))) as u16;
            if self.len() > 8 {
                let high = (b << 8) & crate::word::mask(self.len());
                hi[b as usize] = self.apply_word(high) as u16;
            }
        }
        PermTable { lo, hi }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.map)
    }
}

/// Precomputed byte-sliced application of one permutation to 16-bit words.
pub struct PermTable {
    lo: [u16; 256],
    hi: [u16; 256],
}

impl PermTable {
    #[inline]
    pub fn apply(&self, w: u32) -> u32 {
        (self.lo[(w & 0xff) as usize] | self.hi[(w >> 8) as usize]) as u32
    }
}
