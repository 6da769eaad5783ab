//! Color refinement for a code seen as a coordinate/codeword incidence
//! structure.
//!
//! The refiner keeps an ordered partition of the coordinates. One round
//! computes a signature per codeword (the popcount profile over the current
//! coordinate cells, hashed in cell order), groups the codewords into
//! classes by signature, and then re-colors each coordinate by how many
//! words of each class carry it. Rounds repeat until no cell splits.
//!
//! All signatures hash only label-independent data (cell positions, class
//! ordinals, counts), so the refinement commutes with coordinate
//! relabeling. Hash collisions merely coarsen the refinement; correctness
//! of the surrounding search never depends on signature discrimination.

const WORD_SEED: u64 = 0x8c90_2e1d_35f4_9d21;
const COORD_SEED: u64 = 0x51ab_77c3_9b1e_0453;
const INV_SEED: u64 = 0xd6e8_feb8_6659_fd93;

/// splitmix64 finalizer over an accumulating state.
#[inline]
pub(crate) fn mix(h: u64, v: u64) -> u64 {
    let mut x = h ^ v.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub(crate) struct Refiner<'a> {
    n: usize,
    words: &'a [u32],
    seeds: Option<&'a [u64]>,
    wsig: Vec<u64>,
    class_of: Vec<u32>,
    class_sigs: Vec<u64>,
    counts: Vec<u32>,
    csig: Vec<u64>,
}

impl<'a> Refiner<'a> {
    pub fn new(n: usize, words: &'a [u32], seeds: Option<&'a [u64]>) -> Self {
        if let Some(s) = seeds {
            assert_eq!(s.len(), words.len(), "one seed per word");
        }
        Refiner {
            n,
            words,
            seeds,
            wsig: vec![0; words.len()],
            class_of: vec![0; words.len()],
            class_sigs: Vec::new(),
            counts: Vec::new(),
            csig: vec![0; n],
        }
    }

    /// Refine `cells` in place to a fixpoint and return the node invariant.
    pub fn refine(&mut self, cells: &mut Vec<Vec<u8>>) -> u64 {
        loop {
            self.word_classes(cells);
            self.coordinate_signatures();
            if !split_cells(cells, &self.csig) {
                break;
            }
        }
        // node invariant: cell structure plus word class profile, in
        // canonical order
        let mut inv = INV_SEED;
        for cell in cells.iter() {
            inv = mix(inv, cell.len() as u64);
            inv = mix(inv, self.csig[cell[0] as usize]);
        }
        let mut class_sizes = vec![0u32; self.class_sigs.len()];
        for &c in &self.class_of {
            class_sizes[c as usize] += 1;
        }
        inv = mix(inv, self.class_sigs.len() as u64);
        for (&sig, &size) in self.class_sigs.iter().zip(&class_sizes) {
            inv = mix(inv, size as u64);
            inv = mix(inv, sig);
        }
        inv
    }

    /// Group words into classes by their popcount profile over the cells.
    fn word_classes(&mut self, cells: &[Vec<u8>]) {
        let masks: Vec<u32> =
            cells.iter().map(|cell| cell.iter().fold(0u32, |m, &i| m | 1 << i)).collect();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut h = match self.seeds {
                Some(s) => mix(WORD_SEED, s[wi]),
                None => WORD_SEED,
            };
            for &m in &masks {
                h = mix(h, (w & m).count_ones() as u64);
            }
            self.wsig[wi] = h;
        }
        self.class_sigs.clear();
        self.class_sigs.extend_from_slice(&self.wsig);
        self.class_sigs.sort_unstable();
        self.class_sigs.dedup();
        for (wi, &sig) in self.wsig.iter().enumerate() {
            self.class_of[wi] = self.class_sigs.binary_search(&sig).unwrap() as u32;
        }
    }

    /// Color each coordinate by its per-class incidence counts.
    fn coordinate_signatures(&mut self) {
        let nc = self.class_sigs.len().max(1);
        self.counts.clear();
        self.counts.resize(self.n * nc, 0);
        for (wi, &w) in self.words.iter().enumerate() {
            let j = self.class_of[wi] as usize;
            let mut rest = w;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.counts[i * nc + j] += 1;
            }
        }
        for i in 0..self.n {
            let mut h = COORD_SEED;
            for j in 0..nc {
                h = mix(h, self.counts[i * nc + j] as u64);
            }
            self.csig[i] = h;
        }
    }
}

/// Split every cell by coordinate signature; fragments are ordered by
/// ascending signature value, members ascending within a fragment. Returns
/// true when some cell split.
fn split_cells(cells: &mut Vec<Vec<u8>>, csig: &[u64]) -> bool {
    let mut changed = false;
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells.drain(..) {
        if cell.len() == 1 {
            out.push(cell);
            continue;
        }
        let mut keys: Vec<u64> = cell.iter().map(|&i| csig[i as usize]).collect();
        keys.sort_unstable();
        keys.dedup();
        if keys.len() == 1 {
            out.push(cell);
            continue;
        }
        changed = true;
        for key in keys {
            let frag: Vec<u8> = cell.iter().copied().filter(|&i| csig[i as usize] == key).collect();
            out.push(frag);
        }
    }
    *cells = out;
    changed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refine_once(n: usize, words: &[u32]) -> (Vec<Vec<u8>>, u64) {
        let mut cells = vec![(0..n as u8).collect::<Vec<u8>>()];
        let mut refiner = Refiner::new(n, words, None);
        let inv = refiner.refine(&mut cells);
        (cells, inv)
    }

    #[test]
    fn splits_by_column_weight() {
        // coordinate 0 appears twice, coordinate 1 once, coordinate 2 never:
        // three distinct colors (fragment order is signature order, not
        // count order)
        let (mut cells, _) = refine_once(3, &[0b001, 0b011]);
        assert_eq!(cells.len(), 3);
        cells.sort();
        assert_eq!(cells, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn regular_structure_stays_coarse() {
        // every coordinate in exactly one word: refinement cannot split
        let (cells, _) = refine_once(4, &[0b0011, 0b1100]);
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn invariant_is_relabeling_independent() {
        let words = [0b00111u32, 0b11001, 0b10110];
        // relabel coordinates by the permutation 0->4,1->3,2->2,3->1,4->0
        let relabeled: Vec<u32> = words
            .iter()
            .map(|&w| {
                let mut out = 0u32;
                for i in 0..5 {
                    if w >> i & 1 == 1 {
                        out |= 1 << (4 - i);
                    }
                }
                out
            })
            .collect();
        let (cells_a, inv_a) = refine_once(5, &words);
        let (cells_b, inv_b) = refine_once(5, &relabeled);
        assert_eq!(inv_a, inv_b);
        let sizes = |cells: &[Vec<u8>]| cells.iter().map(|c| c.len()).collect::<Vec<_>>();
        assert_eq!(sizes(&cells_a), sizes(&cells_b));
    }
}
