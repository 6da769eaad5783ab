//! Shared helpers for the integration suites: random objects and the
//! brute-force oracles that everything canonical is validated against.

#![allow(dead_code)]

use rand::Rng;

use percode::{Code, Codeword, Equivalence, Perm};

pub fn random_word(rng: &mut impl Rng, n: usize) -> u32 {
    rng.gen_range(0..1u32 << n)
}

pub fn random_code(rng: &mut impl Rng, n: usize, size: usize) -> Code {
    let mut words = Vec::new();
    while words.len() < size.min(1 << n) {
        words.push(random_word(rng, n));
        words.sort_unstable();
        words.dedup();
    }
    Code::new(n, words)
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Perm {
    let mut images: Vec<u8> = (0..n as u8).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Perm::from_images(images).unwrap()
}

pub fn random_equiv(rng: &mut impl Rng, n: usize) -> Equivalence {
    Equivalence::new(random_perm(rng, n), Codeword::new(random_word(rng, n), n))
}

/// Visit every permutation of `0..n`.
pub fn for_each_perm(n: usize, visit: &mut impl FnMut(&Perm)) {
    let mut items: Vec<u8> = (0..n as u8).collect();
    permute_rec(&mut items, 0, visit);
}

fn permute_rec(items: &mut Vec<u8>, k: usize, visit: &mut impl FnMut(&Perm)) {
    if k == items.len() {
        visit(&Perm::from_images(items.clone()).unwrap());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_rec(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// `|Aut(C)|` by exhausting the full wreath product, with a per-permutation
/// word table to keep the n=8 case quick.
pub fn brute_aut_order(code: &Code) -> u128 {
    let n = code.len_n();
    assert!(n <= 16);
    let words = code.raw_words();
    let mut count = 0u128;
    let mut image = vec![0u32; words.len()];
    for_each_perm(n, &mut |p| {
        let table = p.word_table();
        for x in 0..1u32 << n {
            for (slot, &w) in image.iter_mut().zip(words) {
                *slot = table.apply(w ^ x);
            }
            image.sort_unstable();
            if image == words {
                count += 1;
            }
        }
    });
    count
}

/// `|Sym(C)|` by exhausting all permutations.
pub fn brute_sym_order(code: &Code) -> u128 {
    let words = code.raw_words();
    let mut count = 0u128;
    let mut image = vec![0u32; words.len()];
    for_each_perm(code.len_n(), &mut |p| {
        for (slot, &w) in image.iter_mut().zip(words) {
            *slot = p.apply_word(w);
        }
        image.sort_unstable();
        if image == words {
            count += 1;
        }
    });
    count
}

/// Equivalence test by exhausting the full wreath product.
pub fn brute_equivalent(a: &Code, b: &Code) -> bool {
    if a.len_n() != b.len_n() || a.size() != b.size() {
        return false;
    }
    let n = a.len_n();
    let words_a = a.raw_words();
    let words_b = b.raw_words();
    let mut found = false;
    let mut image = vec![0u32; words_a.len()];
    for_each_perm(n, &mut |p| {
        if found {
            return;
        }
        let table = p.word_table();
        for x in 0..1u32 << n {
            for (slot, &w) in image.iter_mut().zip(words_a) {
                *slot = table.apply(w ^ x);
            }
            image.sort_unstable();
            if image == words_b {
                found = true;
                return;
            }
        }
    });
    found
}

/// Depth-first enumeration of all codes of length `n`, size `m`, minimum
/// distance at least `d`, containing the zero word.
pub fn enumerate_codes_with_zero(n: usize, m: usize, d: u32) -> Vec<Code> {
    let mut out = Vec::new();
    let mut chosen = vec![0u32];
    dfs_codes(n, m, d, 1, &mut chosen, &mut out);
    out
}

fn dfs_codes(n: usize, m: usize, d: u32, next: u32, chosen: &mut Vec<u32>, out: &mut Vec<Code>) {
    if chosen.len() == m {
        out.push(Code::new(n, chosen.clone()));
        return;
    }
    // not enough candidates left to finish
    let space = 1u32 << n;
    if (space - next) as usize + chosen.len() < m {
        return;
    }
    for w in next..space {
        if chosen.iter().all(|&c| (c ^ w).count_ones() >= d) {
            chosen.push(w);
            dfs_codes(n, m, d, w + 1, chosen, out);
            chosen.pop();
        }
    }
}
