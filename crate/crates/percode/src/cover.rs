//! Exact-cover enumeration and the reduction from "complete a partial
//! 1-perfect code" to exact cover.
//!
//! The solver is Algorithm X over dancing links: choose the column with the
//! fewest remaining covers (ties to the lowest element index), try each of
//! its rows, recurse. Completing a code works on the instance whose universe
//! is the set of words not yet covered by the partial code's radius-1 balls
//! and whose subsets are the balls that avoid the partial code entirely.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::code::{content_lines, Code};
use crate::word::Codeword;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("subset {subset} contains element {element} outside universe of size {universe}")]
    ElementOutOfRange { subset: usize, element: usize, universe: usize },
    #[error("codewords {0} and {1} are at distance < 3, balls overlap")]
    BallsOverlap(Codeword, Codeword),
    #[error("completion is only supported for lengths up to 20, got {0}")]
    LengthTooLarge(usize),
    #[error("line {line}: {msg}")]
    BadFormat { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

/// An exact-cover instance: a dense universe `0 .. universe_size` and a
/// collection of subsets, each carrying an opaque label (for code
/// completion, the packed ball-center word).
#[derive(Clone, Debug)]
pub struct ExactCoverInstance {
    universe_size: usize,
    subsets: Vec<Vec<u32>>,
    labels: Vec<u32>,
}

impl ExactCoverInstance {
    /// Build an instance; subsets are sorted and deduplicated. Labels default
    /// to the subset index.
    pub fn new(universe_size: usize, subsets: Vec<Vec<u32>>) -> Result<Self, CoverError> {
        let labels = (0..subsets.len() as u32).collect();
        Self::with_labels(universe_size, subsets, labels)
    }

    pub fn with_labels(
        universe_size: usize,
        mut subsets: Vec<Vec<u32>>,
        labels: Vec<u32>,
    ) -> Result<Self, CoverError> {
        assert_eq!(subsets.len(), labels.len(), "one label per subset");
        for (i, subset) in subsets.iter_mut().enumerate() {
            subset.sort_unstable();
            subset.dedup();
            if let Some(&e) = subset.last() {
                if e as usize >= universe_size {
                    return Err(CoverError::ElementOutOfRange {
                        subset: i,
                        element: e as usize,
                        universe: universe_size,
                    });
                }
            }
        }
        Ok(ExactCoverInstance { universe_size, subsets, labels })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn num_subsets(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, i: usize) -> &[u32] {
        &self.subsets[i]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    /// Parse the instance file format: header `universe_size num_subsets`,
    /// then one subset per line as space-separated element indices.
    pub fn read(r: impl BufRead) -> Result<Self, CoverError> {
        let mut lines = content_lines(r);
        let (line, header) = lines
            .next()
            .transpose()?
            .ok_or(CoverError::BadFormat { line: 0, msg: "missing header".into() })?;
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| {
            parts
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or(CoverError::BadFormat { line, msg: format!("expected {name} in header") })
        };
        let universe = field("universe_size")?;
        let count = field("num_subsets")?;
        let mut subsets = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, text) = lines.next().transpose()?.ok_or(CoverError::BadFormat {
                line: 0,
                msg: format!("expected {count} subsets"),
            })?;
            let subset: Result<Vec<u32>, _> = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| CoverError::BadFormat {
                        line,
                        msg: format!("bad element {t:?}"),
                    })
                })
                .collect();
            subsets.push(subset?);
        }
        Self::new(universe, subsets)
    }

    pub fn write(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "{} {}", self.universe_size, self.subsets.len())?;
        for subset in &self.subsets {
            let items: Vec<String> = subset.iter().map(|e| e.to_string()).collect();
            writeln!(w, "{}", items.join(" "))?;
        }
        Ok(())
    }
}

/// Search statistics: one node per entry into the branching step, root
/// included, so any completed search reports at least one node.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: u64,
}

/// Enumerate every exact cover, invoking `visitor` once per solution with
/// the sorted subset indices. Enumeration is exhaustive, duplicate-free and
/// deterministic; an infeasible instance just reports zero solutions.
pub fn solve_all(inst: &ExactCoverInstance, mut visitor: impl FnMut(&[usize])) -> SearchStats {
    let mut dlx = Dlx::new(inst);
    let mut stats = SearchStats::default();
    let mut partial = Vec::new();
    dlx.search(&mut partial, &mut stats, &mut visitor);
    stats
}

// Dancing-links node arena. Nodes 1..=columns are column heads; node 0 is
// the root of the column-head list. Row nodes follow, linked circularly in
// both axes.
struct Dlx {
    right: Vec<u32>,
    left: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    // column head index for row nodes; remaining-count for column heads
    col: Vec<u32>,
    count: Vec<u32>,
    row_of: Vec<u32>,
}

impl Dlx {
    fn new(inst: &ExactCoverInstance) -> Self {
        let columns = inst.universe_size();
        let mut node_count = 1 + columns;
        for s in &inst.subsets {
            node_count += s.len();
        }
        let mut dlx = Dlx {
            right: vec![0; node_count],
            left: vec![0; node_count],
            up: vec![0; node_count],
            down: vec![0; node_count],
            col: vec![0; node_count],
            count: vec![0; 1 + columns],
            row_of: vec![u32::MAX; node_count],
        };
        // header row: root 0 followed by column heads 1..=columns
        for i in 0..=columns as u32 {
            let next = if i as usize == columns { 0 } else { i + 1 };
            dlx.right[i as usize] = next;
            dlx.left[next as usize] = i;
            dlx.up[i as usize] = i;
            dlx.down[i as usize] = i;
        }
        let mut next = 1 + columns;
        for (r, subset) in inst.subsets.iter().enumerate() {
            let first = next;
            for &e in subset {
                let head = 1 + e as usize;
                let node = next;
                next += 1;
                dlx.col[node] = head as u32;
                dlx.row_of[node] = r as u32;
                dlx.count[head] += 1;
                // insert above the column head (append to column)
                let tail = dlx.up[head] as usize;
                dlx.up[node] = tail as u32;
                dlx.down[node] = head as u32;
                dlx.down[tail] = node as u32;
                dlx.up[head] = node as u32;
                // horizontal circular link within the row
                if node == first {
                    dlx.left[node] = node as u32;
                    dlx.right[node] = node as u32;
                } else {
                    let prev = node - 1;
                    let head_node = first;
                    dlx.right[node] = head_node as u32;
                    dlx.left[node] = prev as u32;
                    dlx.right[prev] = node as u32;
                    dlx.left[head_node] = node as u32;
                }
            }
        }
        dlx
    }

    fn cover(&mut self, head: usize) {
        let (l, r) = (self.left[head] as usize, self.right[head] as usize);
        self.right[l] = r as u32;
        self.left[r] = l as u32;
        let mut i = self.down[head] as usize;
        while i != head {
            let mut j = self.right[i] as usize;
            while j != i {
                let (u, d) = (self.up[j] as usize, self.down[j] as usize);
                self.down[u] = d as u32;
                self.up[d] = u as u32;
                self.count[self.col[j] as usize] -= 1;
                j = self.right[j] as usize;
            }
            i = self.down[i] as usize;
        }
    }

    fn uncover(&mut self, head: usize) {
        let mut i = self.up[head] as usize;
        while i != head {
            let mut j = self.left[i] as usize;
            while j != i {
                let (u, d) = (self.up[j] as usize, self.down[j] as usize);
                self.down[u] = j as u32;
                self.up[d] = j as u32;
                self.count[self.col[j] as usize] += 1;
                j = self.left[j] as usize;
            }
            i = self.up[i] as usize;
        }
        let (l, r) = (self.left[head] as usize, self.right[head] as usize);
        self.right[l] = head as u32;
        self.left[r] = head as u32;
    }

    fn search(
        &mut self,
        partial: &mut Vec<usize>,
        stats: &mut SearchStats,
        visitor: &mut impl FnMut(&[usize]),
    ) {
        stats.nodes += 1;
        if self.right[0] == 0 {
            stats.solutions += 1;
            let mut rows = partial.clone();
            rows.sort_unstable();
            visitor(&rows);
            return;
        }
        // column with the fewest remaining covers; walking from the root
        // visits columns in ascending element order, so ties break low
        let mut best = usize::MAX;
        let mut min = u32::MAX;
        let mut h = self.right[0] as usize;
        while h != 0 {
            if self.count[h] < min {
                min = self.count[h];
                best = h;
                if min == 0 {
                    break;
                }
            }
            h = self.right[h] as usize;
        }
        if min == 0 {
            return;
        }
        self.cover(best);
        let mut i = self.down[best] as usize;
        while i != best {
            partial.push(self.row_of[i] as usize);
            let mut j = self.right[i] as usize;
            while j != i {
                self.cover(self.col[j] as usize);
                j = self.right[j] as usize;
            }
            self.search(partial, stats, visitor);
            let mut j = self.left[i] as usize;
            while j != i {
                self.uncover(self.col[j] as usize);
                j = self.left[j] as usize;
            }
            partial.pop();
            i = self.down[i] as usize;
        }
        self.uncover(best);
    }
}

/// Reduce completion of a partial 1-perfect code to exact cover.
///
/// The universe is `F2^n` minus the balls of the partial code, densely
/// re-indexed in ascending word order; there is one subset per word whose
/// ball avoids every ball of the partial code, labeled with that word.
/// The partial code's balls must already be disjoint.
pub fn build_completion_instance(
    partial: &Code,
    n: usize,
) -> Result<ExactCoverInstance, CoverError> {
    assert_eq!(partial.len_n(), n, "partial code length mismatch");
    if n > 20 {
        return Err(CoverError::LengthTooLarge(n));
    }
    let words = partial.raw_words();
    for (i, &a) in words.iter().enumerate() {
        for &b in &words[i + 1..] {
            if (a ^ b).count_ones() < 3 {
                return Err(CoverError::BallsOverlap(Codeword::new(a, n), Codeword::new(b, n)));
            }
        }
    }
    // coverage bitmap of the partial code's balls
    let space = 1usize << n;
    let mut covered = vec![false; space];
    for &w in words {
        covered[w as usize] = true;
        for i in 0..n {
            covered[(w ^ (1 << i)) as usize] = true;
        }
    }
    // dense universe indices for uncovered words
    let mut index = vec![u32::MAX; space];
    let mut universe = 0u32;
    for w in 0..space {
        if !covered[w] {
            index[w] = universe;
            universe += 1;
        }
    }
    // candidate centers: words whose whole ball is uncovered
    let mut subsets = Vec::new();
    let mut labels = Vec::new();
    'cand: for x in 0..space as u32 {
        if covered[x as usize] {
            continue;
        }
        for i in 0..n {
            if covered[(x ^ (1 << i)) as usize] {
                continue 'cand;
            }
        }
        let mut subset = Vec::with_capacity(n + 1);
        subset.push(index[x as usize]);
        for i in 0..n {
            subset.push(index[(x ^ (1 << i)) as usize]);
        }
        subsets.push(subset);
        labels.push(x);
    }
    ExactCoverInstance::with_labels(universe as usize, subsets, labels)
}

/// Every way of augmenting `partial` to a 1-perfect code of length `n`.
/// Each returned code contains the partial code; the list is exhaustive and
/// duplicate-free.
pub fn complete_to_perfect(
    partial: &Code,
    n: usize,
) -> Result<(Vec<Code>, SearchStats), CoverError> {
    let inst = build_completion_instance(partial, n)?;
    let mut codes = Vec::new();
    let stats = solve_all(&inst, |rows| {
        let mut words = partial.raw_words().to_vec();
        words.extend(rows.iter().map(|&r| inst.label(r)));
        let code = Code::new(n, words);
        debug_assert!(code.is_perfect(), "completion must be 1-perfect");
        codes.push(code);
    });
    Ok((codes, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Parity;
    use crate::hamming::{extended_hamming, hamming};
    use crate::steiner::neighborhood_system;

    fn solve_collect(inst: &ExactCoverInstance) -> (Vec<Vec<usize>>, SearchStats) {
        let mut sols = Vec::new();
        let stats = solve_all(inst, |s| sols.push(s.to_vec()));
        (sols, stats)
    }

    #[test]
    fn hand_enumerated_example() {
        // S = {0,1,2}, U = {{0,1},{2},{1,2},{0}}
        let inst =
            ExactCoverInstance::new(3, vec![vec![0, 1], vec![2], vec![1, 2], vec![0]]).unwrap();
        let (mut sols, stats) = solve_collect(&inst);
        sols.sort();
        assert_eq!(sols, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(stats.solutions, 2);
        assert!(stats.nodes >= 1);
    }

    #[test]
    fn uncoverable_element_means_no_solutions() {
        let inst = ExactCoverInstance::new(2, vec![vec![0]]).unwrap();
        let (sols, stats) = solve_collect(&inst);
        assert!(sols.is_empty());
        assert_eq!(stats.solutions, 0);
        assert!(stats.nodes >= 1);
    }

    #[test]
    fn empty_universe_has_the_empty_solution() {
        let inst = ExactCoverInstance::new(0, vec![]).unwrap();
        let (sols, _) = solve_collect(&inst);
        assert_eq!(sols, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn element_out_of_range_is_rejected() {
        assert!(matches!(
            ExactCoverInstance::new(2, vec![vec![0, 2]]),
            Err(CoverError::ElementOutOfRange { subset: 0, element: 2, .. })
        ));
    }

    #[test]
    fn determinism() {
        let inst = ExactCoverInstance::new(
            4,
            vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3], vec![3]],
        )
        .unwrap();
        let a = solve_collect(&inst);
        let b = solve_collect(&inst);
        assert_eq!(a, b);
    }

    /// Brute-force oracle: try all 2^|U| subset selections.
    fn brute_force(inst: &ExactCoverInstance) -> Vec<Vec<usize>> {
        let m = inst.num_subsets();
        assert!(m <= 20);
        let mut found = Vec::new();
        for pick in 0u32..1 << m {
            let mut seen = vec![false; inst.universe_size()];
            let mut ok = true;
            'rows: for r in 0..m {
                if pick >> r & 1 == 0 {
                    continue;
                }
                for &e in inst.subset(r) {
                    if seen[e as usize] {
                        ok = false;
                        break 'rows;
                    }
                    seen[e as usize] = true;
                }
            }
            if ok && seen.iter().all(|&s| s) {
                found.push((0..m).filter(|&r| pick >> r & 1 == 1).collect());
            }
        }
        found.sort();
        found
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        // a deterministic mini-sweep; the full randomized suite lives in the
        // acceptance tests
        let cases: Vec<(usize, Vec<Vec<u32>>)> = vec![
            (1, vec![vec![0]]),
            (3, vec![vec![0], vec![1], vec![2], vec![0, 1, 2]]),
            (4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 2], vec![1, 3]]),
            (5, vec![vec![0, 1, 2], vec![3, 4], vec![0, 3], vec![1, 2, 4], vec![2, 4]]),
        ];
        for (universe, subsets) in cases {
            let inst = ExactCoverInstance::new(universe, subsets).unwrap();
            let (mut sols, _) = solve_collect(&inst);
            sols.sort();
            assert_eq!(sols, brute_force(&inst));
        }
    }

    #[test]
    fn punctured_sqs8_seed_completes_uniquely_to_hamming() {
        // {0} plus the SQS(8) blocks, punctured at the last coordinate:
        // 15 words of length 7, exactly one ball (center 1111111) missing
        let ext = extended_hamming(3);
        let q = neighborhood_system(&ext, Codeword::zero(8), 4).unwrap();
        let mut words = vec![0u32];
        words.extend(q.blocks().raw_words());
        let seed = Code::new(8, words).puncture(7);
        assert_eq!(seed.size(), 15);

        let inst = build_completion_instance(&seed, 7).unwrap();
        assert_eq!(inst.universe_size(), 8);

        let (codes, stats) = complete_to_perfect(&seed, 7).unwrap();
        assert_eq!(codes.len(), 1);
        assert_eq!(stats.solutions, 1);
        assert!(codes[0].is_perfect());
        assert!(codes[0].contains_bits(0b1111111));
        // the unique completion is the Hamming code itself (the seed was
        // drawn from it)
        assert_eq!(codes[0], hamming(3));
        // re-extending recovers the extended Hamming code
        assert_eq!(codes[0].extend_parity(Parity::Even), ext);
    }

    #[test]
    fn full_code_yields_one_empty_solution() {
        let (codes, stats) = complete_to_perfect(&hamming(3), 7).unwrap();
        assert_eq!(codes.len(), 1);
        assert_eq!(codes[0], hamming(3));
        assert_eq!(stats.solutions, 1);
    }

    #[test]
    fn infeasible_partial_yields_empty_list() {
        // no 1-perfect code of length 5 exists (6 does not divide 32)
        let partial = Code::new(5, vec![0]);
        let (codes, stats) = complete_to_perfect(&partial, 5).unwrap();
        assert!(codes.is_empty());
        assert_eq!(stats.solutions, 0);
    }

    #[test]
    fn overlapping_balls_are_rejected() {
        let partial = Code::new(7, vec![0b0000000, 0b0000011]);
        assert!(matches!(
            build_completion_instance(&partial, 7),
            Err(CoverError::BallsOverlap(_, _))
        ));
    }

    #[test]
    fn instance_file_roundtrip() {
        let inst = ExactCoverInstance::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let mut buf = Vec::new();
        inst.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 2\n0 1\n2\n");
        let back = ExactCoverInstance::read(std::io::Cursor::new(buf)).unwrap();
        let (a, _) = solve_collect(&inst);
        let (b, _) = solve_collect(&back);
        assert_eq!(a, b);
    }
}
