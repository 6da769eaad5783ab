//! Individualization-refinement search for a canonical labeling of a code
//! under coordinate permutations, in the McKay style.
//!
//! The tree branches only on coordinates: each node refines the current
//! ordered partition, then individualizes every vertex of the first
//! smallest non-singleton cell (ascending order). A discrete partition is a
//! leaf; it induces a permutation and hence a relabeled copy of the code.
//!
//! The canonical labeling is the leaf maximizing the path invariant
//! sequence, ties broken by the numerically smallest relabeled code. Three
//! prunings keep the tree small, none of which can change that extremum:
//!
//! - invariant pruning: a node whose invariant prefix is lexicographically
//!   below the current best (and differs from the first path, which is kept
//!   alive for automorphism discovery) cannot contain the extremal leaf;
//! - automorphism pruning: children in one orbit of the discovered
//!   automorphisms fixing the current path pointwise have isomorphic
//!   subtrees, so only one is explored;
//! - leaf collisions: a leaf whose relabeled code was seen before yields an
//!   automorphism, and the search backjumps to the deepest common ancestor
//!   of the two paths, the rest being symmetric to explored ground.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::group::UnionFind;
use crate::perm::Perm;

use super::refine::Refiner;

pub(crate) struct CanonOutcome {
    /// The canonically relabeled code, sorted.
    pub canon_words: Vec<u32>,
    /// Permutation carrying the input onto `canon_words`.
    pub cert: Perm,
    /// Generators of the symmetry group of the input (permutations fixing
    /// the word set).
    pub automorphisms: Vec<Perm>,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

/// Canonically label `words` (sorted, deduplicated, length `n`), optionally
/// seeding the refinement with a per-word invariant.
pub(crate) fn canonize(n: usize, words: &[u32], seeds: Option<&[u64]>) -> CanonOutcome {
    debug_assert!(words.windows(2).all(|w| w[0] < w[1]), "words must be sorted");
    let mut searcher = Searcher {
        n,
        words,
        refiner: Refiner::new(n, words, seeds),
        first: None,
        best: None,
        leaves: HashMap::new(),
        autos: Vec::new(),
        nodes: 0,
        inv_prefix: Vec::new(),
        path: Vec::new(),
    };
    let root_cells = vec![(0..n as u8).collect::<Vec<u8>>()];
    searcher.descend(root_cells);
    let best = searcher.best.expect("search always visits at least one leaf");
    CanonOutcome {
        canon_words: best.code,
        cert: best.perm,
        automorphisms: searcher.autos,
        nodes: searcher.nodes,
    }
}

struct Leaf {
    inv: Vec<u64>,
    code: Vec<u32>,
    perm: Perm,
}

struct StoredLeaf {
    perm: Perm,
    path: Vec<u8>,
}

enum Flow {
    Continue,
    /// Unwind until `path.len()` equals the payload, then move to the next
    /// child there.
    JumpTo(usize),
}

struct Searcher<'a> {
    n: usize,
    words: &'a [u32],
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    leaves: HashMap<Vec<u32>, StoredLeaf>,
    autos: Vec<Perm>,
    nodes: u64,
    inv_prefix: Vec<u64>,
    path: Vec<u8>,
}

/// Compare an invariant prefix against a complete leaf invariant. For an
/// incomplete prefix, a strict prefix match is still undecided (`Equal`);
/// for a complete one it loses to any extension.
fn cmp_prefix(cur: &[u64], leaf: &[u64], cur_complete: bool) -> Ordering {
    let k = cur.len().min(leaf.len());
    for i in 0..k {
        match cur[i].cmp(&leaf[i]) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    match cur.len().cmp(&leaf.len()) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => Ordering::Greater,
        Ordering::Less => {
            if cur_complete {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        }
    }
}

impl<'a> Searcher<'a> {
    fn descend(&mut self, mut cells: Vec<Vec<u8>>) -> Flow {
        self.nodes += 1;
        let inv = self.refiner.refine(&mut cells);
        self.inv_prefix.push(inv);
        let flow = self.node_body(cells);
        self.inv_prefix.pop();
        flow
    }

    fn node_body(&mut self, cells: Vec<Vec<u8>>) -> Flow {
        let discrete = cells.iter().all(|c| c.len() == 1);
        let vs_first = self
            .first
            .as_ref()
            .map(|f| cmp_prefix(&self.inv_prefix, &f.inv, discrete))
            .unwrap_or(Ordering::Equal);
        let vs_best = self
            .best
            .as_ref()
            .map(|b| cmp_prefix(&self.inv_prefix, &b.inv, discrete))
            .unwrap_or(Ordering::Greater);
        if !discrete && vs_first != Ordering::Equal && vs_best == Ordering::Less {
            return Flow::Continue;
        }
        if discrete {
            return self.handle_leaf(&cells, vs_first, vs_best);
        }

        // first smallest non-singleton cell
        let (target, _) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .expect("non-discrete partition has a non-singleton cell");
        let members = cells[target].clone();
        let mut explored: Vec<u8> = Vec::new();
        for &v in &members {
            if self.orbit_pruned(&explored, v) {
                continue;
            }
            explored.push(v);
            let mut child_cells = Vec::with_capacity(cells.len() + 1);
            for (i, cell) in cells.iter().enumerate() {
                if i == target {
                    child_cells.push(vec![v]);
                    child_cells.push(cell.iter().copied().filter(|&u| u != v).collect());
                } else {
                    child_cells.push(cell.clone());
                }
            }
            self.path.push(v);
            let flow = self.descend(child_cells);
            self.path.pop();
            if let Flow::JumpTo(depth) = flow {
                if depth < self.path.len() {
                    return Flow::JumpTo(depth);
                }
                debug_assert_eq!(depth, self.path.len());
                // abandon this child only; siblings may still matter
            }
        }
        Flow::Continue
    }

    fn handle_leaf(&mut self, cells: &[Vec<u8>], vs_first: Ordering, vs_best: Ordering) -> Flow {
        let mut images = vec![0u8; self.n];
        for (pos, cell) in cells.iter().enumerate() {
            images[cell[0] as usize] = pos as u8;
        }
        let perm = Perm::from_images(images).expect("discrete partition is a bijection");
        let mut code: Vec<u32> = self.words.iter().map(|&w| perm.apply_word(w)).collect();
        code.sort_unstable();

        if let Some(stored) = self.leaves.get(&code) {
            // same relabeled code: the two leaf permutations differ by an
            // automorphism of the input
            let auto = stored.perm.inverse().compose(&perm);
            debug_assert!(fixes_words(self.words, &auto));
            let lcp = self.path.iter().zip(&stored.path).take_while(|(a, b)| a == b).count();
            if !auto.is_identity() && !self.autos.contains(&auto) {
                self.autos.push(auto);
            }
            self.consider_best(code, perm, vs_best);
            return Flow::JumpTo(lcp);
        }
        self.leaves
            .insert(code.clone(), StoredLeaf { perm: perm.clone(), path: self.path.clone() });
        if self.first.is_none() {
            self.first =
                Some(Leaf { inv: self.inv_prefix.clone(), code: code.clone(), perm: perm.clone() });
        }
        let _ = vs_first;
        self.consider_best(code, perm, vs_best);
        Flow::Continue
    }

    /// Install the leaf as the new best when its key (invariant sequence,
    /// then smallest relabeled code) wins.
    fn consider_best(&mut self, code: Vec<u32>, perm: Perm, vs_best: Ordering) {
        let better = match &self.best {
            None => true,
            Some(best) => match vs_best {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => code < best.code,
            },
        };
        if better {
            self.best = Some(Leaf { inv: self.inv_prefix.clone(), code, perm });
        }
    }

    /// Skip `v` when a discovered automorphism fixing the current path
    /// pointwise maps an already-explored sibling onto it.
    fn orbit_pruned(&mut self, explored: &[u8], v: u8) -> bool {
        if explored.is_empty() || self.autos.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.n);
        for g in &self.autos {
            if self.path.iter().all(|&p| g.image(p as usize) == p as usize) {
                for i in 0..self.n {
                    uf.union(i, g.image(i));
                }
            }
        }
        let rv = uf.find(v as usize);
        explored.iter().any(|&a| uf.find(a as usize) == rv)
    }
}

fn fixes_words(words: &[u32], g: &Perm) -> bool {
    let mut image: Vec<u32> = words.iter().map(|&w| g.apply_word(w)).collect();
    image.sort_unstable();
    image == words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_order;

    fn canon_of(n: usize, words: &[u32]) -> CanonOutcome {
        let mut sorted = words.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        canonize(n, &sorted, None)
    }

    /// all coordinate permutations of a word list, for small n
    fn brute_sym_order(n: usize, words: &[u32]) -> u128 {
        let mut count = 0u128;
        let mut idx: Vec<u8> = (0..n as u8).collect();
        let mut sorted = words.to_vec();
        sorted.sort_unstable();
        permute_all(&mut idx, 0, &mut |images| {
            let p = Perm::from_images(images.to_vec()).unwrap();
            let mut im: Vec<u32> = sorted.iter().map(|&w| p.apply_word(w)).collect();
            im.sort_unstable();
            if im == sorted {
                count += 1;
            }
        });
        count
    }

    fn permute_all(items: &mut Vec<u8>, k: usize, visit: &mut impl FnMut(&[u8])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute_all(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn certificate_maps_input_to_canonical_form() {
        let words = vec![0b00011u32, 0b00110, 0b11000];
        let out = canon_of(5, &words);
        let mut mapped: Vec<u32> = words.iter().map(|&w| out.cert.apply_word(w)).collect();
        mapped.sort_unstable();
        assert_eq!(mapped, out.canon_words);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let words = vec![0b001011u32, 0b010110, 0b101100, 0b000111];
        let base = canon_of(6, &words);
        // a few explicit permutations
        for images in [vec![5u8, 4, 3, 2, 1, 0], vec![1, 2, 3, 4, 5, 0], vec![2, 0, 1, 5, 3, 4]] {
            let p = Perm::from_images(images).unwrap();
            let relabeled: Vec<u32> = words.iter().map(|&w| p.apply_word(w)).collect();
            let out = canon_of(6, &relabeled);
            assert_eq!(out.canon_words, base.canon_words);
        }
    }

    #[test]
    fn symmetry_generators_are_complete_on_small_codes() {
        let cases: Vec<(usize, Vec<u32>)> = vec![
            (4, vec![0b0011, 0b1100]),
            (5, vec![0b00001, 0b00011, 0b00111]),
            (6, vec![0b000111, 0b111000, 0b010101]),
            (5, vec![]),
            (5, vec![0b10101]),
            (6, vec![0b000011, 0b001100, 0b110000, 0b111111]),
        ];
        for (n, words) in cases {
            let out = canon_of(n, &words);
            let order = group_order(n, &out.automorphisms);
            let brute = brute_sym_order(n, &words);
            assert_eq!(order, brute, "n={n} words={words:?}");
        }
    }

    #[test]
    fn empty_code_symmetry_is_full_symmetric_group() {
        let out = canon_of(5, &[]);
        assert_eq!(group_order(5, &out.automorphisms), 120);
        assert!(out.canon_words.is_empty());
    }
}
