//! Binary codes: deduplicated sorted sets of equal-length words, with the
//! derived operations the classification needs (minimum distance, perfection
//! test, parity extension, puncturing, shortening, kernel) and the shared
//! text file format.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::OnceLock;

use thiserror::Error;

use crate::word::{mask, Codeword, MAX_LEN};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid word {0:?}")]
    BadWord(String),
    #[error("line {line}: {msg}")]
    BadFormat { line: usize, msg: String },
    #[error("word {0:?} does not match code length {1}")]
    LengthMismatch(String, usize),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

/// Desired parity of the total weight after extending a code.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// A binary code: sorted, duplicate-free words of common length.
///
/// The sort order is by numeric word value, which doubles as the total order
/// on codes (two codes compare by their sorted word lists, shorter-length
/// codes first). The minimum distance is cached after first computation.
pub struct Code {
    len: u8,
    words: Vec<u32>,
    min_dist: OnceLock<u32>,
}

impl Code {
    /// Build from packed words; sorts and deduplicates. Panics if a word has
    /// bits beyond `len`.
    pub fn new(len: usize, mut words: Vec<u32>) -> Self {
        assert!((1..=MAX_LEN).contains(&len), "code length {len} out of range");
        for &w in &words {
            assert!(w & !mask(len) == 0, "word {w:#b} exceeds code length {len}");
        }
        words.sort_unstable();
        words.dedup();
        Code { len: len as u8, words, min_dist: OnceLock::new() }
    }

    /// Build from codewords, which must all have length `len`.
    pub fn from_codewords(
        len: usize,
        words: impl IntoIterator<Item = Codeword>,
    ) -> Result<Self, CodeError> {
        let mut raw = Vec::new();
        for w in words {
            if w.len() != len {
                return Err(CodeError::LengthMismatch(w.to_string(), len));
            }
            raw.push(w.bits());
        }
        Ok(Code::new(len, raw))
    }

    pub fn empty(len: usize) -> Self {
        Code::new(len, Vec::new())
    }

    /// Word length `n`.
    pub fn len_n(&self) -> usize {
        self.len as usize
    }

    /// Number of codewords `M`.
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The packed words in ascending numeric order.
    pub fn raw_words(&self) -> &[u32] {
        &self.words
    }

    pub fn word(&self, i: usize) -> Codeword {
        Codeword::new(self.words[i], self.len_n())
    }

    pub fn iter(&self) -> impl Iterator<Item = Codeword> + '_ {
        self.words.iter().map(|&w| Codeword::new(w, self.len_n()))
    }

    pub fn contains(&self, w: Codeword) -> bool {
        w.len() == self.len_n() && self.contains_bits(w.bits())
    }

    pub fn contains_bits(&self, bits: u32) -> bool {
        self.words.binary_search(&bits).is_ok()
    }

    /// Position of `bits` in storage order.
    pub fn index_of(&self, bits: u32) -> Option<usize> {
        self.words.binary_search(&bits).ok()
    }

    /// Minimum pairwise Hamming distance. Panics on codes with fewer than
    /// two words.
    pub fn min_distance(&self) -> u32 {
        assert!(self.size() >= 2, "min_distance needs at least two words");
        *self.min_dist.get_or_init(|| {
            let mut best = u32::MAX;
            for (i, &a) in self.words.iter().enumerate() {
                for &b in &self.words[i + 1..] {
                    best = best.min((a ^ b).count_ones());
                }
            }
            best
        })
    }

    /// True iff the radius-1 balls around the codewords partition the whole
    /// space F2^n.
    pub fn is_perfect(&self) -> bool {
        let n = self.len_n();
        if self.size().checked_mul(n + 1) != Some(1usize << n) {
            return false;
        }
        // Balls are disjoint iff pairwise distances exceed 2; together with
        // the cardinality check that is a full partition. For small n mark an
        // explicit coverage bitmap instead, which also exercises disjointness.
        if n <= 20 {
            let mut covered = vec![false; 1 << n];
            for &w in &self.words {
                for v in std::iter::once(w).chain((0..n).map(|i| w ^ (1 << i))) {
                    if covered[v as usize] {
                        return false;
                    }
                    covered[v as usize] = true;
                }
            }
            covered.iter().all(|&c| c)
        } else {
            self.min_distance() >= 3
        }
    }

    /// Append a parity coordinate at index `n` so that every word's total
    /// weight gets the requested parity.
    pub fn extend_parity(&self, parity: Parity) -> Code {
        let n = self.len_n();
        assert!(n < MAX_LEN, "extension exceeds maximum length");
        let want_odd_bit = |w: u32| match parity {
            Parity::Even => w.count_ones() % 2 == 1,
            Parity::Odd => w.count_ones().is_multiple_of(2),
        };
        Code::new(
            n + 1,
            self.words.iter().map(|&w| if want_odd_bit(w) { w | 1 << n } else { w }).collect(),
        )
    }

    /// Delete coordinate `i`; the higher coordinates close ranks.
    pub fn puncture(&self, i: usize) -> Code {
        let n = self.len_n();
        assert!(i < n, "puncture coordinate {i} out of range");
        assert!(n >= 2, "cannot puncture a length-1 code");
        let low = mask(i);
        Code::new(n - 1, self.words.iter().map(|&w| (w & low) | (w >> (i + 1)) << i).collect())
    }

    /// Keep the words with the given value at coordinate `i`, then delete
    /// that coordinate.
    pub fn shorten(&self, i: usize, value: bool) -> Code {
        let n = self.len_n();
        assert!(i < n, "shorten coordinate {i} out of range");
        let keep = Code::new(
            n,
            self.words.iter().copied().filter(|&w| (w >> i & 1 == 1) == value).collect(),
        );
        keep.puncture(i)
    }

    /// Translate by `x`: the code `C + x`.
    pub fn translate(&self, x: Codeword) -> Code {
        assert_eq!(x.len(), self.len_n());
        self.translate_bits(x.bits())
    }

    pub(crate) fn translate_bits(&self, x: u32) -> Code {
        Code::new(self.len_n(), self.words.iter().map(|&w| w ^ x).collect())
    }

    /// All translations fixing the code: `{x : C + x = C}`, a linear
    /// subspace containing the zero word. For the empty code only the zero
    /// translation is reported.
    pub fn kernel(&self) -> Vec<Codeword> {
        let n = self.len_n();
        if self.is_empty() {
            return vec![Codeword::zero(n)];
        }
        // A fixing translation maps the first codeword into the code, so it
        // is of the form w ^ first for some codeword w.
        let first = self.words[0];
        let mut out = Vec::new();
        'cand: for &w in &self.words {
            let x = w ^ first;
            for &v in &self.words {
                if !self.contains_bits(v ^ x) {
                    continue 'cand;
                }
            }
            out.push(Codeword::new(x, n));
        }
        out.sort_unstable();
        out
    }

    /// Write the shared text format: header `n M`, then one sorted bit-string
    /// line per word. Byte-stable so files can be diffed.
    pub fn write_text(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "{} {}", self.len_n(), self.size())?;
        for word in self.iter() {
            writeln!(w, "{word}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("format is ascii")
    }

    /// Read the text format. `#` starts a comment; blank lines are skipped.
    /// Words must be strictly ascending, as written by `write_text`.
    pub fn read_text(r: impl BufRead) -> Result<Code, CodeError> {
        let mut lines = content_lines(r);
        let (line_no, header) = lines
            .next()
            .transpose()?
            .ok_or(CodeError::BadFormat { line: 0, msg: "missing header".into() })?;
        let mut parts = header.split_whitespace();
        let bad_header = |msg: &str| CodeError::BadFormat { line: line_no, msg: msg.into() };
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad_header("expected `n M` header"))?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad_header("expected `n M` header"))?;
        if parts.next().is_some() {
            return Err(bad_header("trailing tokens in header"));
        }
        if !(1..=MAX_LEN).contains(&n) {
            return Err(bad_header("length out of range"));
        }
        let mut words = Vec::with_capacity(m);
        for _ in 0..m {
            let (line_no, text) = lines
                .next()
                .transpose()?
                .ok_or(CodeError::BadFormat { line: 0, msg: format!("expected {m} words") })?;
            let word: Codeword = text.parse().map_err(|_| CodeError::BadFormat {
                line: line_no,
                msg: format!("bad word {text:?}"),
            })?;
            if word.len() != n {
                return Err(CodeError::BadFormat {
                    line: line_no,
                    msg: "word length mismatch".into(),
                });
            }
            if let Some(&prev) = words.last() {
                if prev >= word.bits() {
                    return Err(CodeError::BadFormat {
                        line: line_no,
                        msg: "words not strictly ascending".into(),
                    });
                }
            }
            words.push(word.bits());
        }
        Ok(Code::new(n, words))
    }
}

/// Iterator over `(1-based line number, trimmed content)` skipping blank
/// lines and `#` comments.
pub(crate) fn content_lines(
    r: impl BufRead,
) -> impl Iterator<Item = Result<(usize, String), io::Error>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e)),
        Ok(line) => {
            let text = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            let text = text.trim();
            if text.is_empty() {
                None
            } else {
                Some(Ok((i + 1, text.to_string())))
            }
        }
    })
}

impl Clone for Code {
    fn clone(&self) -> Self {
        Code { len: self.len, words: self.words.clone(), min_dist: self.min_dist.clone() }
    }
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for Code {}

impl std::hash::Hash for Code {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.words.hash(state);
    }
}

impl PartialOrd for Code {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The total order used throughout the classification: compare lengths, then
/// the sorted word lists lexicographically.
impl Ord for Code {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.words.cmp(&other.words))
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, M={})", self.len_n(), self.size())
    }
}
