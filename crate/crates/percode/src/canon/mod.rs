//! Canonical forms and groups of codes.
//!
//! Two canonical representatives are computed. The isomorphism
//! representative is invariant under coordinate permutations and comes with
//! generators of the symmetry group `Sym(C)` (permutations fixing the code).
//! The equivalence representative minimizes the isomorphism representative
//! over all codeword translates, which makes it invariant under the whole
//! wreath-product action; the sweep over translates simultaneously yields
//! generators, order and orbits of the full automorphism group `Aut(C)`.
//!
//! Two codewords lie in one `Aut(C)` orbit exactly when their translates
//! have equal isomorphism representatives, so the sweep only labels one
//! codeword per orbit, growing the orbit partition as automorphisms surface.

mod refine;
mod search;

use std::collections::HashMap;

use crate::code::Code;
use crate::equiv::Equivalence;
use crate::group::{group_order, orbits, UnionFind};
use crate::perm::Perm;
use crate::word::Codeword;

use refine::mix;

/// Canonical isomorphism representative of a code.
pub struct Isomorph {
    /// The representative: a relabeled copy of the input, identical for all
    /// inputs in one isomorphism class.
    pub representative: Code,
    /// Certificate permutation: applying it to the input gives the
    /// representative.
    pub cert: Perm,
    /// Generators of `Sym(C)` of the input.
    pub sym_gens: Vec<Perm>,
    /// Exact order of `Sym(C)`.
    pub sym_order: u128,
    /// Search-tree nodes spent.
    pub nodes: u64,
}

/// Canonical equivalence representative plus the full group data of a code.
pub struct CodeAnalysis {
    /// Isomorphism-level data of the input code.
    pub isomorph: Isomorph,
    /// Canonical equivalence class representative.
    pub representative: Code,
    /// Certificate: applying it to the input gives `representative`.
    pub certificate: Equivalence,
    /// Generators of `Aut(C)`.
    pub aut_gens: Vec<Equivalence>,
    /// Exact `|Aut(C)|`, always divisible by `|Sym(C)|` and by the kernel
    /// size.
    pub aut_order: u128,
    /// Size of the kernel (translations fixing the code).
    pub ker_size: usize,
    /// Orbits of `Aut(C)` on the codewords, as indices into the input's
    /// word list, ordered by smallest member.
    pub codeword_orbits: Vec<Vec<usize>>,
    /// Orbits of `Aut(C)` on the coordinates.
    pub coordinate_orbits: Vec<Vec<usize>>,
}

impl CodeAnalysis {
    pub fn sym_order(&self) -> u128 {
        self.isomorph.sym_order
    }
}

/// Per-word refinement seeds: how many triangles (triples of codewords at
/// pairwise distance 4) each codeword sits in, hashed. Translation-invariant
/// because distances are, so the seed of a word `w` in `C + x` equals the
/// seed of `w + x` in `C`. Worth its cost only on large regular codes.
fn seed_policy(n: usize, size: usize) -> bool {
    n >= 12 && size >= 256
}

/// Triangle participation per codeword, indexed like `words`.
pub fn triangle_seeds(words: &[u32]) -> Vec<u64> {
    let m = words.len();
    let row_len = m.div_ceil(64).max(1);
    let mut adj = vec![0u64; m * row_len];
    for i in 0..m {
        for j in i + 1..m {
            if (words[i] ^ words[j]).count_ones() == 4 {
                adj[i * row_len + j / 64] |= 1 << (j % 64);
                adj[j * row_len + i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut seeds = vec![0u64; m];
    let mut neighbors = Vec::new();
    let mut induced: Vec<u64> = Vec::new();
    for x in 0..m {
        neighbors.clear();
        let row = &adj[x * row_len..(x + 1) * row_len];
        for (wi, &bits) in row.iter().enumerate() {
            let mut rest = bits;
            while rest != 0 {
                neighbors.push(wi * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        let d = neighbors.len();
        let ind_len = d.div_ceil(64).max(1);
        induced.clear();
        induced.resize(d * ind_len, 0);
        for (a, &na) in neighbors.iter().enumerate() {
            let ra = &adj[na * row_len..(na + 1) * row_len];
            for (b, &nb) in neighbors.iter().enumerate() {
                if ra[nb / 64] >> (nb % 64) & 1 == 1 {
                    induced[a * ind_len + b / 64] |= 1 << (b % 64);
                }
            }
        }
        // triangles within the neighborhood, each counted once (a < b < c)
        let mut triangles = 0u64;
        for a in 0..d {
            let ra = &induced[a * ind_len..(a + 1) * ind_len];
            for b in a + 1..d {
                if ra[b / 64] >> (b % 64) & 1 == 0 {
                    continue;
                }
                let rb = &induced[b * ind_len..(b + 1) * ind_len];
                for w in b / 64..ind_len {
                    let mut common = ra[w] & rb[w];
                    if w == b / 64 {
                        common &= u64::MAX.checked_shl((b % 64 + 1) as u32).unwrap_or(0);
                    }
                    triangles += common.count_ones() as u64;
                }
            }
        }
        seeds[x] = mix(0x7261_6e6b_5f73_6565, triangles);
    }
    seeds
}

/// Canonical isomorphism representative with `Sym(C)` generators. A pure
/// deterministic function of the code: equal on every relabeling of the
/// input.
pub fn canonical_isomorph(code: &Code) -> Isomorph {
    let seeds = seed_policy(code.len_n(), code.size()).then(|| triangle_seeds(code.raw_words()));
    isomorph_with_seeds(code, seeds.as_deref())
}

fn isomorph_with_seeds(code: &Code, seeds: Option<&[u64]>) -> Isomorph {
    let out = search::canonize(code.len_n(), code.raw_words(), seeds);
    let representative = Code::new(code.len_n(), out.canon_words);
    debug_assert_eq!(
        Equivalence::from_perm(out.cert.clone()).apply(code),
        representative,
        "certificate must map the input onto the representative"
    );
    let sym_order = group_order(code.len_n(), &out.automorphisms);
    Isomorph {
        representative,
        cert: out.cert,
        sym_gens: out.automorphisms,
        sym_order,
        nodes: out.nodes,
    }
}

/// Full analysis: canonical equivalence representative, certificate, and the
/// automorphism group with its orbits. Panics on the empty code.
pub fn analyze(code: &Code) -> CodeAnalysis {
    analysis_impl(code, false).expect("full analysis never rejects")
}

/// Like [`analyze`], but bails out with `None` as soon as some codeword
/// translate canonizes strictly below the code itself — exactly the failure
/// of the canonical-extension condition that the classification pipeline
/// tests. Requires a code containing the zero word; `Some` implies the
/// equivalence representative equals the isomorphism representative.
pub fn analyze_if_canonical(code: &Code) -> Option<CodeAnalysis> {
    assert!(code.contains_bits(0), "canonical-extension test expects 0 in the code");
    analysis_impl(code, true)
}

fn analysis_impl(code: &Code, reject_noncanonical: bool) -> Option<CodeAnalysis> {
    assert!(!code.is_empty(), "cannot analyze the empty code");
    let n = code.len_n();
    // translate a nonzero code so that it contains 0; conjugating back only
    // changes translation parts, never permutation parts or orders
    let shift = code.word(0);
    let zeroed = if shift.is_zero() { code.clone() } else { code.translate(shift) };
    let analysis0 = analysis_zero_based(&zeroed, reject_noncanonical)?;
    if shift.is_zero() {
        return Some(analysis0);
    }
    // the sweep ran on the zero-based translate; its equivalence-level data
    // carries over, but Sym is not translation-invariant, so the input needs
    // its own isomorphism pass
    let own_isomorph = canonical_isomorph(code);
    let to_zeroed = Equivalence::from_translation(shift);
    let certificate = analysis0.certificate.compose(&to_zeroed);
    debug_assert_eq!(certificate.apply(code), analysis0.representative);
    let conj = |e: &Equivalence| -> Equivalence {
        let pulled = e.perm().inverse().apply_word(shift.bits());
        Equivalence::new(
            e.perm().clone(),
            Codeword::new(e.translation().bits() ^ shift.bits() ^ pulled, n),
        )
    };
    let aut_gens: Vec<Equivalence> = analysis0.aut_gens.iter().map(conj).collect();
    debug_assert!(aut_gens.iter().all(|g| g.apply(code) == *code));
    // word index i of `code` corresponds to the word bits ^ shift in the
    // zero-based copy
    let remap: Vec<Vec<usize>> = analysis0
        .codeword_orbits
        .iter()
        .map(|orbit| {
            let mut ids: Vec<usize> = orbit
                .iter()
                .map(|&i| {
                    code.index_of(zeroed.raw_words()[i] ^ shift.bits())
                        .expect("translate permutes the word set")
                })
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    let mut codeword_orbits = remap;
    codeword_orbits.sort_by_key(|o| o[0]);
    debug_assert_eq!(analysis0.aut_order % own_isomorph.sym_order, 0);
    Some(CodeAnalysis {
        isomorph: own_isomorph,
        certificate,
        aut_gens,
        codeword_orbits,
        ..analysis0
    })
}

fn analysis_zero_based(code: &Code, reject_noncanonical: bool) -> Option<CodeAnalysis> {
    let n = code.len_n();
    let m = code.size();
    let words = code.raw_words();
    let seeds = seed_policy(n, m).then(|| triangle_seeds(words));
    let base = isomorph_with_seeds(code, seeds.as_deref());

    let mut aut_gens: Vec<Equivalence> = Vec::new();
    let mut uf = UnionFind::new(m);
    let add_aut = |e: Equivalence, uf: &mut UnionFind, gens: &mut Vec<Equivalence>| {
        debug_assert_eq!(e.apply(code), *code, "harvested element must fix the code");
        for (i, &w) in words.iter().enumerate() {
            let image = e.apply_word(Codeword::new(w, n));
            let j = code.index_of(image.bits()).expect("automorphism permutes the code");
            uf.union(i, j);
        }
        gens.push(e);
    };
    for g in &base.sym_gens {
        add_aut(Equivalence::from_perm(g.clone()), &mut uf, &mut aut_gens);
    }

    // Sweep one representative per (currently known) orbit. Every orbit ends
    // up with exactly one entry in `reps`: equal canonical forms merge the
    // classes on sight, so the final partition is the true orbit partition
    // even if intermediate generator knowledge is incomplete.
    let mut reps: HashMap<Vec<u32>, (usize, Perm)> = HashMap::new();
    let mut processed: Vec<usize> = Vec::new();
    let mut best: Option<(Code, Equivalence)> = None;
    for i in 0..m {
        let done = {
            let ri = uf.find(i);
            processed.iter().any(|&p| uf.find(p) == ri)
        };
        if done {
            continue;
        }
        processed.push(i);
        let x = words[i];
        let iso_x = if x == 0 {
            IsoParts {
                canon: base.representative.raw_words().to_vec(),
                cert: base.cert.clone(),
                autos: Vec::new(),
            }
        } else {
            let mut translated: Vec<u32> = words.iter().map(|&w| w ^ x).collect();
            translated.sort_unstable();
            let tr_seeds: Option<Vec<u64>> = seeds.as_ref().map(|s| {
                translated
                    .iter()
                    .map(|&w| s[code.index_of(w ^ x).expect("translate stays in the code")])
                    .collect()
            });
            let out = search::canonize(n, &translated, tr_seeds.as_deref());
            IsoParts { canon: out.canon_words, cert: out.cert, autos: out.automorphisms }
        };
        // Sym(C + x) elements lift to Aut(C) elements (pi, x + pi^-1(x))
        for pi in &iso_x.autos {
            let trans = x ^ pi.inverse().apply_word(x);
            add_aut(Equivalence::new(pi.clone(), Codeword::new(trans, n)), &mut uf, &mut aut_gens);
        }
        match reps.get(&iso_x.canon) {
            Some((j, cert_j)) => {
                // pi maps C + x onto C + x_j, yielding an automorphism
                let pi = cert_j.inverse().compose(&iso_x.cert);
                let trans = x ^ pi.inverse().apply_word(words[*j]);
                add_aut(Equivalence::new(pi, Codeword::new(trans, n)), &mut uf, &mut aut_gens);
            }
            None => {
                if reject_noncanonical && iso_x.canon.as_slice() < base.representative.raw_words() {
                    return None;
                }
                let cand = Code::new(n, iso_x.canon.clone());
                let cert = Equivalence::new(iso_x.cert.clone(), Codeword::new(x, n));
                if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                    best = Some((cand, cert));
                }
                reps.insert(iso_x.canon, (i, iso_x.cert));
            }
        }
    }

    let (representative, certificate) = best.expect("nonempty code has a representative");
    debug_assert_eq!(certificate.apply(code), representative);

    // |Aut| = |Sym| * |orbit of the zero word|; the zero word's orbit is the
    // set of translations occurring in Aut(C)
    let zero_idx = code.index_of(0).expect("zero-based analysis");
    let zero_root = uf.find(zero_idx);
    let t_size = (0..m).filter(|&i| uf.find(i) == zero_root).count();
    let aut_order = base.sym_order.checked_mul(t_size as u128).expect("group order fits in u128");
    let ker_size = code.kernel().len();
    debug_assert_eq!(aut_order % base.sym_order, 0);
    assert!(
        aut_order.is_multiple_of(ker_size as u128),
        "kernel order must divide the automorphism order"
    );

    let codeword_orbits = uf.classes();
    let pi_parts: Vec<Perm> = aut_gens.iter().map(|e| e.perm().clone()).collect();
    let coordinate_orbits = orbits(n, &pi_parts);

    Some(CodeAnalysis {
        isomorph: base,
        representative,
        certificate,
        aut_gens,
        aut_order,
        ker_size,
        codeword_orbits,
        coordinate_orbits,
    })
}

struct IsoParts {
    canon: Vec<u32>,
    cert: Perm,
    autos: Vec<Perm>,
}

/// An equivalence-invariant fingerprint: equal for equivalent codes,
/// distinct fingerprints certify inequivalence (the converse direction does
/// not hold). Combines the pairwise distance distribution with the sorted
/// multiset of per-word triangle participations.
pub fn invariant_fingerprint(code: &Code) -> u64 {
    let words = code.raw_words();
    let n = code.len_n();
    let mut hist = vec![0u64; n + 1];
    for (i, &a) in words.iter().enumerate() {
        for &b in &words[i + 1..] {
            hist[(a ^ b).count_ones() as usize] += 1;
        }
    }
    let mut tri = triangle_seeds(words);
    tri.sort_unstable();
    let mut h = mix(0x66_69_6e_67_65_72, n as u64);
    h = mix(h, words.len() as u64);
    for &c in &hist {
        h = mix(h, c);
    }
    for &t in &tri {
        h = mix(h, t);
    }
    h
}
