//! Elements of the wreath product acting on codes: a coordinate permutation
//! together with a translation word.
//!
//! The element `(π, x)` sends a word `c` to `π(c + x)`, so the coordinate at
//! position `i` of `c + x` ends up at position `π(i)`. Codes map setwise.

use crate::perm::Perm;
use crate::word::Codeword;
use crate::Code;

/// A code equivalence `(π, x)`: permute coordinates by `π` after adding the
/// translation `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Equivalence {
    perm: Perm,
    translation: Codeword,
}

impl Equivalence {
    pub fn new(perm: Perm, translation: Codeword) -> Self {
        assert_eq!(perm.len(), translation.len(), "permutation/translation length mismatch");
        Equivalence { perm, translation }
    }

    pub fn identity(n: usize) -> Self {
        Equivalence { perm: Perm::identity(n), translation: Codeword::zero(n) }
    }

    /// A pure coordinate permutation.
    pub fn from_perm(perm: Perm) -> Self {
        let n = perm.len();
        Equivalence { perm, translation: Codeword::zero(n) }
    }

    /// A pure translation.
    pub fn from_translation(x: Codeword) -> Self {
        Equivalence { perm: Perm::identity(x.len()), translation: x }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn translation(&self) -> Codeword {
        self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.translation.is_zero()
    }

    /// Image of a single word.
    pub fn apply_word(&self, w: Codeword) -> Codeword {
        assert_eq!(w.len(), self.n());
        Codeword::new(self.perm.apply_word(w.bits() ^ self.translation.bits()), w.len())
    }

    /// Image of a code; the result is re-sorted into storage order.
    pub fn apply(&self, code: &Code) -> Code {
        assert_eq!(code.len_n(), self.n(), "equivalence/code length mismatch");
        let x = self.translation.bits();
        Code::new(
            code.len_n(),
            code.raw_words().iter().map(|&w| self.perm.apply_word(w ^ x)).collect(),
        )
    }

    /// Group law matching `apply`: `compose(a, b).apply(c) = a.apply(b.apply(c))`.
    pub fn compose(&self, other: &Equivalence) -> Equivalence {
        assert_eq!(self.n(), other.n());
        let perm = self.perm.compose(&other.perm);
        let pulled = other.perm.inverse().apply_word(self.translation.bits());
        Equivalence {
            perm,
            translation: Codeword::new(other.translation.bits() ^ pulled, self.n()),
        }
    }

    pub fn inverse(&self) -> Equivalence {
        Equivalence {
            perm: self.perm.inverse(),
            translation: Codeword::new(self.perm.apply_word(self.translation.bits()), self.n()),
        }
    }
}
