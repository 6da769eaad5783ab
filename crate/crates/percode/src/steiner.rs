//! Steiner systems represented as constant-weight codes.
//!
//! An `S(t, k, v)` is stored as a code of length `v` whose words all have
//! weight `k`, such that every weight-`t` word has its support contained in
//! the support of exactly one block. The weight-3 (weight-4) words of a
//! translated (extended) 1-perfect code form such a system; those
//! neighborhood systems are both the raw material of the classification and
//! a source of equivalence invariants.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::code::{content_lines, Code};
use crate::word::Codeword;

#[derive(Debug, Error)]
pub enum SteinerError {
    #[error("word {0} is not a codeword of the given code")]
    NotACodeword(Codeword),
    #[error("weight-{w} words of the translated code do not form an S({t},{k},{v})")]
    NotASystem { w: u32, t: usize, k: usize, v: usize },
    #[error("record {record}: {msg}")]
    BadRecord { record: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

/// A verified Steiner system `S(t, k, v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SteinerSystem {
    t: usize,
    k: usize,
    v: usize,
    blocks: Code,
}

impl SteinerSystem {
    /// Verify and wrap a block code. Returns `None` when the covering
    /// property fails.
    pub fn new(blocks: Code, t: usize, k: usize, v: usize) -> Option<Self> {
        if verify_steiner(&blocks, t, k, v) {
            Some(SteinerSystem { t, k, v, blocks })
        } else {
            None
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The order of the system.
    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &Code {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.size()
    }

    /// Number of unordered block triples with pairwise Hamming distance 4.
    /// Only meaningful (and only allowed) for quadruple systems.
    pub fn triangle_count(&self) -> u64 {
        assert_eq!(self.k, 4, "triangles are defined for quadruple systems");
        triangle_count_of_blocks(self.blocks.raw_words())
    }

    /// Per-block triangle memberships, in block storage order. A finer
    /// invariant than the plain count: compare as a sorted multiset.
    pub fn triangles_per_block(&self) -> Vec<u32> {
        assert_eq!(self.k, 4, "triangles are defined for quadruple systems");
        triangles_per_block(self.blocks.raw_words())
    }
}

/// Triangle count of an arbitrary block list (no Steiner property needed):
/// unordered triples of words with pairwise distance 4.
pub fn triangle_count(blocks: &Code) -> u64 {
    triangle_count_of_blocks(blocks.raw_words())
}

/// Per-block triangle memberships of an arbitrary block list, in storage
/// order.
pub fn block_triangle_profile(blocks: &Code) -> Vec<u32> {
    triangles_per_block(blocks.raw_words())
}

/// Check the defining property: all words of weight `k`, and every weight-`t`
/// word of F2^v covered by the support of exactly one block.
pub fn verify_steiner(blocks: &Code, t: usize, k: usize, v: usize) -> bool {
    if blocks.len_n() != v || t > k || k > v {
        return false;
    }
    if blocks.iter().any(|b| b.weight() as usize != k) {
        return false;
    }
    if let Some(expected) = expected_block_count(t, k, v) {
        if blocks.size() != expected {
            return false;
        }
    }
    // Walk all t-subsets of the v coordinates and count covering blocks.
    let mut subset = vec![0usize; t];
    check_subsets(blocks.raw_words(), &mut subset, 0, 0, v)
}

fn check_subsets(
    blocks: &[u32],
    subset: &mut [usize],
    depth: usize,
    first: usize,
    v: usize,
) -> bool {
    if depth == subset.len() {
        let mask: u32 = subset.iter().map(|&i| 1u32 << i).sum();
        return blocks.iter().filter(|&&b| b & mask == mask).count() == 1;
    }
    for i in first..v {
        subset[depth] = i;
        if !check_subsets(blocks, subset, depth + 1, i + 1, v) {
            return false;
        }
    }
    true
}

/// `C(v,t) / C(k,t)` when it is an integer.
pub fn expected_block_count(t: usize, k: usize, v: usize) -> Option<usize> {
    let num = binomial(v, t);
    let den = binomial(k, t);
    (den != 0 && num.is_multiple_of(den)).then(|| (num / den) as usize)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The neighborhood system of a code at one of its codewords: the weight-`w`
/// words of `C + x`, verified as an `S(w-1, w, n)`.
///
/// For a 1-perfect code use `w = 3` (triple system); for an extended
/// 1-perfect code use `w = 4` (quadruple system). A verification failure
/// signals a corrupt input code.
pub fn neighborhood_system(
    code: &Code,
    x: Codeword,
    w: u32,
) -> Result<SteinerSystem, SteinerError> {
    if !code.contains(x) {
        return Err(SteinerError::NotACodeword(x));
    }
    let v = code.len_n();
    let translated = code.translate(x);
    let blocks = Code::new(
        v,
        translated.raw_words().iter().copied().filter(|b| b.count_ones() == w).collect(),
    );
    let (t, k) = (w as usize - 1, w as usize);
    SteinerSystem::new(blocks, t, k, v).ok_or(SteinerError::NotASystem { w, t, k, v })
}

pub(crate) fn triangle_count_of_blocks(blocks: &[u32]) -> u64 {
    let mut count = 0u64;
    for_each_triangle(blocks, |_, _, _| count += 1);
    count
}

pub(crate) fn triangles_per_block(blocks: &[u32]) -> Vec<u32> {
    let mut per_block = vec![0u32; blocks.len()];
    for_each_triangle(blocks, |i, j, k| {
        per_block[i] += 1;
        per_block[j] += 1;
        per_block[k] += 1;
    });
    per_block
}

/// Visit every unordered block triple `i < j < k` with pairwise distance 4,
/// via bitset rows of the distance-4 adjacency graph.
fn for_each_triangle(blocks: &[u32], mut visit: impl FnMut(usize, usize, usize)) {
    let adj = distance4_adjacency(blocks);
    let words = adj.words_per_row;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if !adj.get(i, j) {
                continue;
            }
            let ri = &adj.bits[i * words..(i + 1) * words];
            let rj = &adj.bits[j * words..(j + 1) * words];
            // common neighbors k of i and j with k > j
            for w in j / 64..words {
                let mut common = ri[w] & rj[w];
                if w == j / 64 {
                    common &= u64::MAX.checked_shl((j % 64 + 1) as u32).unwrap_or(0);
                }
                while common != 0 {
                    let k = w * 64 + common.trailing_zeros() as usize;
                    common &= common - 1;
                    visit(i, j, k);
                }
            }
        }
    }
}

struct Adjacency {
    bits: Vec<u64>,
    words_per_row: usize,
}

impl Adjacency {
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }
}

fn distance4_adjacency(blocks: &[u32]) -> Adjacency {
    let words = blocks.len().div_ceil(64).max(1);
    let mut bits = vec![0u64; blocks.len() * words];
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if (blocks[i] ^ blocks[j]).count_ones() == 4 {
                bits[i * words + j / 64] |= 1 << (j % 64);
                bits[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    Adjacency { bits, words_per_row: words }
}

/// Streaming reader for a block catalog: one system per line, blocks as
/// comma-separated point lists separated by spaces, `#` starting comments.
/// Each record is verified; errors carry the 1-based record index. Systems
/// are yielded one at a time, so arbitrarily large catalogs stream.
pub struct CatalogReader {
    lines: Box<dyn Iterator<Item = Result<(usize, String), io::Error>> + Send>,
    t: usize,
    k: usize,
    v: usize,
    record: usize,
}

impl CatalogReader {
    pub fn new(reader: impl BufRead + Send + 'static, t: usize, k: usize, v: usize) -> Self {
        CatalogReader { lines: Box::new(content_lines(reader)), t, k, v, record: 0 }
    }
}

impl Iterator for CatalogReader {
    type Item = Result<SteinerSystem, SteinerError>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = match self.lines.next()? {
            Ok((_, text)) => text,
            Err(e) => return Some(Err(e.into())),
        };
        self.record += 1;
        Some(parse_record(&line, self.record, self.t, self.k, self.v))
    }
}

fn parse_record(
    line: &str,
    record: usize,
    t: usize,
    k: usize,
    v: usize,
) -> Result<SteinerSystem, SteinerError> {
    let bad = |msg: String| SteinerError::BadRecord { record, msg };
    let mut words = Vec::new();
    for block_text in line.split_whitespace() {
        let mut bits = 0u32;
        let mut count = 0usize;
        for point_text in block_text.split(',') {
            let p: usize =
                point_text.parse().map_err(|_| bad(format!("bad point {point_text:?}")))?;
            if p >= v {
                return Err(bad(format!("point {p} out of range for order {v}")));
            }
            if bits >> p & 1 == 1 {
                return Err(bad(format!("repeated point {p} in block {block_text:?}")));
            }
            if count > 0 && bits >> p != 0 {
                return Err(bad(format!("points not ascending in block {block_text:?}")));
            }
            bits |= 1 << p;
            count += 1;
        }
        if count != k {
            return Err(bad(format!("block {block_text:?} has {count} points, expected {k}")));
        }
        words.push(bits);
    }
    if let Some(expected) = expected_block_count(t, k, v) {
        if words.len() != expected {
            return Err(bad(format!("{} blocks, expected {expected}", words.len())));
        }
    }
    let blocks = Code::new(v, words);
    SteinerSystem::new(blocks, t, k, v).ok_or_else(|| bad(format!("not a valid S({t},{k},{v})")))
}

/// Write systems in the catalog format, blocks in code storage order,
/// points ascending within a block.
pub fn write_catalog<'a>(
    mut w: impl Write,
    systems: impl IntoIterator<Item = &'a SteinerSystem>,
) -> io::Result<()> {
    for sys in systems {
        let mut first = true;
        for block in sys.blocks().iter() {
            if !first {
                write!(w, " ")?;
            }
            first = false;
            let points: Vec<String> = block.support().map(|p| p.to_string()).collect();
            write!(w, "{}", points.join(","))?;
        }
        writeln!(w)?;
    }
    Ok(())
}
