//! Binary words of fixed length packed into a machine word.
//!
//! Bit `i` of the backing `u32` is coordinate `i`, so the word `1110000`
//! of length 7 (coordinate 0 written leftmost) is stored as `0b0000111`.
//! All distance and weight computations reduce to XOR and popcount.

use std::fmt;
use std::str::FromStr;

use crate::code::CodeError;

/// Largest supported word length.
pub const MAX_LEN: usize = 31;

/// A vector over F2 with explicit length `1 ..= 31`.
///
/// Ordering is by length first, then by the numeric value of the bits;
/// the numeric order on equal-length words is the storage order used
/// everywhere in this crate.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword {
    len: u8,
    bits: u32,
}

impl Codeword {
    /// Build a word from packed bits. Panics if `len` is out of range or a
    /// bit at position `>= len` is set.
    pub fn new(bits: u32, len: usize) -> Self {
        assert!((1..=MAX_LEN).contains(&len), "word length {len} out of range");
        assert!(bits & !mask(len) == 0, "bits {bits:#b} exceed word length {len}");
        Codeword { len: len as u8, bits }
    }

    /// The all-zero word.
    pub fn zero(len: usize) -> Self {
        Codeword::new(0, len)
    }

    /// The all-one word.
    pub fn all_ones(len: usize) -> Self {
        Codeword::new(mask(len), len)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// The word length `n`; never zero, so there is no `is_empty`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Hamming weight: the number of nonzero coordinates.
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Hamming distance. Panics when the lengths differ.
    pub fn distance(self, other: Codeword) -> u32 {
        assert_eq!(self.len, other.len, "distance between words of different length");
        (self.bits ^ other.bits).count_ones()
    }

    /// Coordinate value at position `i`.
    pub fn get(self, i: usize) -> bool {
        assert!(i < self.len());
        self.bits >> i & 1 == 1
    }

    /// The word with coordinate `i` flipped.
    pub fn flip(self, i: usize) -> Codeword {
        assert!(i < self.len());
        Codeword { len: self.len, bits: self.bits ^ (1 << i) }
    }

    /// Coordinate-wise sum (XOR). Panics when the lengths differ.
    pub fn xor(self, other: Codeword) -> Codeword {
        assert_eq!(self.len, other.len, "xor between words of different length");
        Codeword { len: self.len, bits: self.bits ^ other.bits }
    }

    /// The radius-1 ball around `self`: the word itself plus its `n`
    /// single-coordinate flips, `n + 1` words in total.
    pub fn ball(self) -> Vec<Codeword> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(self);
        for i in 0..self.len() {
            out.push(self.flip(i));
        }
        out
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Codeword {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, CodeError> {
        if !(1..=MAX_LEN).contains(&s.len()) {
            return Err(CodeError::BadWord(s.to_string()));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(CodeError::BadWord(s.to_string())),
            }
        }
        Ok(Codeword::new(bits, s.len()))
    }
}

/// Low `len` bits set.
pub(crate) fn mask(len: usize) -> u32 {
    debug_assert!(len <= MAX_LEN);
    (1u32 << len) - 1
}
