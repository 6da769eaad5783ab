//! Randomized and exhaustive oracle suites: everything canonical is checked
//! against plain enumeration over the wreath product, and the desk-scale
//! classification is compared with a from-scratch brute-force
//! classification.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use percode::canon::{analyze, canonical_isomorph, invariant_fingerprint};
use percode::code::Parity;
use percode::hamming::extended_hamming;
use percode::pipeline::{run, PipelineConfig};
use percode::steiner::{neighborhood_system, verify_steiner};
use percode::{Code, Codeword, Equivalence};

#[test]
fn hamming_group_orders_match_the_published_values() {
    let ext16 = analyze(&extended_hamming(4));
    assert_eq!(ext16.aut_order, 660_602_880);
    assert_eq!(ext16.sym_order(), 322_560);
    // one coordinate orbit of size 16: every puncturing gives the same
    // perfect code
    assert_eq!(ext16.coordinate_orbits.len(), 1);
    assert_eq!(ext16.coordinate_orbits[0].len(), 16);

    let h15 = analyze(&percode::hamming::hamming(4));
    assert_eq!(h15.aut_order, 41_287_680);
    assert_eq!(h15.sym_order(), 20_160);
}

#[test]
fn boolean_sqs16_extensions_contain_extended_hamming() {
    let q = neighborhood_system(&extended_hamming(4), Codeword::zero(16), 4).unwrap();
    let exts = percode::pipeline::extensions_of(&q, 0).unwrap();
    assert!(exts.iter().any(|e| *e == extended_hamming(4)));
}

#[test]
fn orbit_stabilizer_product_on_explicit_orbits() {
    // |Aut(C)| times the number of distinct codes in the equivalence orbit
    // equals the wreath order n! * 2^n
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f72626974);
    for _ in 0..20 {
        let n = rng.gen_range(3..=5usize);
        let size = rng.gen_range(1..=6usize);
        let code = random_code(&mut rng, n, size);
        let mut orbit = std::collections::HashSet::new();
        for_each_perm(n, &mut |p| {
            for x in 0..1u32 << n {
                let e = Equivalence::new(p.clone(), Codeword::new(x, n));
                orbit.insert(e.apply(&code));
            }
        });
        let wreath: u128 = (1..=n as u128).product::<u128>() * (1 << n);
        assert_eq!(analyze(&code).aut_order * orbit.len() as u128, wreath);
    }
}

#[test]
fn canon_matches_brute_force_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f7261636c65);
    for trial in 0..300 {
        let n = rng.gen_range(3..=6usize);
        let size = rng.gen_range(1..=10usize);
        let code = random_code(&mut rng, n, size);
        let analysis = analyze(&code);
        assert_eq!(
            analysis.aut_order,
            brute_aut_order(&code),
            "trial {trial}: |Aut| mismatch on {:?}",
            code.raw_words()
        );
        assert_eq!(
            analysis.sym_order(),
            brute_sym_order(&code),
            "trial {trial}: |Sym| mismatch on {:?}",
            code.raw_words()
        );
    }
}

#[test]
fn desk_scale_matches_brute_force_classification() {
    // every (8,16,4) code containing the zero word, by depth-first
    // construction
    let all = enumerate_codes_with_zero(8, 16, 4);
    assert_eq!(all.len(), 30);

    // oracle deduplication by exhaustive wreath-product equivalence
    let mut oracle_reps: Vec<&Code> = Vec::new();
    for code in &all {
        if !oracle_reps.iter().any(|r| brute_equivalent(r, code)) {
            oracle_reps.push(code);
        }
    }
    assert_eq!(oracle_reps.len(), 1, "all (8,16,4) codes form one class");
    assert!(brute_equivalent(oracle_reps[0], &extended_hamming(3)));

    // the pipeline classifies the same single class, and its accepted
    // representative is equivalent to each enumerated code (completeness)
    let q = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let report = run([Ok(q)].into_iter(), &PipelineConfig::new(8)).unwrap();
    assert_eq!(report.extended_classes().len(), 1);
    let accepted_rep = analyze(&report.extended_classes()[0].code).representative;
    for code in &all {
        assert_eq!(analyze(code).representative, accepted_rep);
    }
}

#[test]
fn same_orbit_codewords_have_isomorphic_neighborhoods() {
    let ext = extended_hamming(3);
    let analysis = analyze(&ext);
    // single codeword orbit: all neighborhood systems isomorphic
    assert_eq!(analysis.codeword_orbits.len(), 1);
    let base =
        canonical_isomorph(neighborhood_system(&ext, Codeword::zero(8), 4).unwrap().blocks())
            .representative;
    for i in [1usize, 5, 11] {
        let sys = neighborhood_system(&ext, ext.word(i), 4).unwrap();
        assert_eq!(canonical_isomorph(sys.blocks()).representative, base);
    }
}

#[test]
fn neighborhoods_of_pipeline_outputs_verify() {
    let q16 = neighborhood_system(&extended_hamming(4), Codeword::zero(16), 4).unwrap();
    let report = run([Ok(q16)].into_iter(), &PipelineConfig::new(16)).unwrap();
    for class in report.extended_classes() {
        // sample a few codewords; each neighborhood must verify as S(3,4,16)
        for i in [0usize, 100, 2000] {
            let sys = neighborhood_system(&class.code, class.code.word(i), 4).unwrap();
            assert_eq!(sys.block_count(), 140);
        }
    }
    for class in &report.perfect {
        let sys = neighborhood_system(&class.code, Codeword::zero(15), 3).unwrap();
        assert_eq!(sys.block_count(), 35);
    }
}

fn small_code_strategy() -> impl Strategy<Value = Code> {
    (3usize..=7).prop_flat_map(|n| {
        proptest::collection::vec(0u32..(1 << n), 1..=10).prop_map(move |words| Code::new(n, words))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn group_action_composes(code in small_code_strategy()) {
        let n = code.len_n();
        let runner = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_equiv(&mut rng, n), random_equiv(&mut rng, n))
        };
        let (a, b) = runner(code.raw_words().iter().map(|&w| w as u64).sum());
        prop_assert_eq!(a.compose(&b).apply(&code), a.apply(&b.apply(&code)));
        prop_assert_eq!(a.inverse().apply(&a.apply(&code)), code.clone());
        prop_assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn kernel_is_subspace(code in small_code_strategy()) {
        let n = code.len_n();
        let kernel = code.kernel();
        prop_assert!(kernel.contains(&Codeword::zero(n)));
        for &a in &kernel {
            for &b in &kernel {
                prop_assert!(kernel.contains(&a.xor(b)));
            }
            // definition check: every kernel word fixes the code
            prop_assert_eq!(code.translate(a), code.clone());
        }
    }

    #[test]
    fn parity_extension_roundtrips(code in small_code_strategy()) {
        let n = code.len_n();
        prop_assert_eq!(code.extend_parity(Parity::Even).puncture(n), code.clone());
        prop_assert_eq!(code.extend_parity(Parity::Odd).puncture(n), code.clone());
    }

    #[test]
    fn isomorph_representative_is_permutation_invariant(code in small_code_strategy()) {
        let n = code.len_n();
        let base = canonical_isomorph(&code).representative;
        let runner = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_perm(&mut rng, n)
        };
        let p = runner(code.raw_words().first().copied().unwrap_or(1) as u64);
        let image = Equivalence::from_perm(p).apply(&code);
        prop_assert_eq!(canonical_isomorph(&image).representative, base);
    }

    #[test]
    fn fingerprint_never_splits_a_class(code in small_code_strategy()) {
        let n = code.len_n();
        let mut rng = ChaCha8Rng::seed_from_u64(code.size() as u64);
        let e = random_equiv(&mut rng, n);
        prop_assert_eq!(invariant_fingerprint(&e.apply(&code)), invariant_fingerprint(&code));
    }

    #[test]
    fn triangle_count_is_permutation_invariant(
        seeds in proptest::collection::vec(0u64..u64::MAX, 2..=16),
    ) {
        // random constant-weight-4 words of length 8
        let blocks: Vec<u32> = seeds
            .iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let mut w = 0u32;
                while w.count_ones() < 4 {
                    w |= 1 << rng.gen_range(0..8);
                }
                w
            })
            .collect();
        let code = Code::new(8, blocks);
        let mut rng = ChaCha8Rng::seed_from_u64(seeds[0]);
        let p = random_perm(&mut rng, 8);
        let image = Equivalence::from_perm(p).apply(&code);
        prop_assert_eq!(
            percode::steiner::triangle_count(&image),
            percode::steiner::triangle_count(&code)
        );
        let mut a = percode::steiner::block_triangle_profile(&code);
        let mut b = percode::steiner::block_triangle_profile(&image);
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn classified_perfect_codes_shorten_equivalently_at_both_values() {
    // value-0 and value-1 shortenings at any coordinate are equivalent for
    // every classified perfect representative (self-complementarity)
    let q8 = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let report8 = run([Ok(q8)].into_iter(), &PipelineConfig::new(8)).unwrap();
    let q16 = neighborhood_system(&extended_hamming(4), Codeword::zero(16), 4).unwrap();
    let report16 = run([Ok(q16)].into_iter(), &PipelineConfig::new(16)).unwrap();
    for report in [&report8, &report16] {
        for class in &report.perfect {
            let i = class.code.len_n() - 1;
            let zero = analyze(&class.code.shorten(i, false));
            let one = analyze(&class.code.shorten(i, true));
            assert_eq!(zero.representative, one.representative);
        }
    }
}

#[test]
fn verify_steiner_accepts_all_pipeline_neighborhoods() {
    let q = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let report = run([Ok(q)].into_iter(), &PipelineConfig::new(8)).unwrap();
    for class in report.extended_classes() {
        for x in class.code.iter() {
            let blocks = Code::new(
                8,
                class
                    .code
                    .translate(x)
                    .raw_words()
                    .iter()
                    .copied()
                    .filter(|w| w.count_ones() == 4)
                    .collect(),
            );
            assert!(verify_steiner(&blocks, 3, 4, 8));
        }
    }
}
