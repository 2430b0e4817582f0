mod common;

use proptest::prelude::*;
use rand::Rng;
use sphere_sections::braid::*;

fn word_strategy(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let gen = (1..n as i32, any::<bool>()).prop_map(|(i, pos)| if pos { i } else { -i });
    prop::collection::vec(gen, 0..max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
}

fn positive_word(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(1..n as i32, 1..max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
}

/// Apply one defining relation, a free insertion, or a free cancellation at
/// a random place, when one applies.
fn rewrite(letters: &mut Vec<i32>, n: usize, rng: &mut impl Rng) {
    let len = letters.len();
    match rng.gen_range(0..4) {
        0 => {
            let at = rng.gen_range(0..=len);
            let g = rng.gen_range(1..n as i32);
            letters.splice(at..at, [g, -g]);
        }
        1 => {
            if let Some(at) = (0..len.saturating_sub(1)).find(|&j| letters[j] == -letters[j + 1]) {
                letters.drain(at..at + 2);
            }
        }
        2 => {
            let starts: Vec<usize> = (0..len.saturating_sub(2))
                .filter(|&j| {
                    let (a, b, c) = (letters[j], letters[j + 1], letters[j + 2]);
                    a == c && a.signum() == b.signum() && (a.abs() - b.abs()).abs() == 1
                })
                .collect();
            if !starts.is_empty() {
                let j = starts[rng.gen_range(0..starts.len())];
                let (a, b) = (letters[j], letters[j + 1]);
                letters[j..j + 3].copy_from_slice(&[b, a, b]);
            }
        }
        _ => {
            let starts: Vec<usize> = (0..len.saturating_sub(1))
                .filter(|&j| (letters[j].abs() - letters[j + 1].abs()).abs() > 1)
                .collect();
            if !starts.is_empty() {
                let j = starts[rng.gen_range(0..starts.len())];
                letters.swap(j, j + 1);
            }
        }
    }
}

/// Position of each strand after `w`, by following swaps directly.
fn end_positions(w: &BraidWord) -> Vec<usize> {
    let mut at: Vec<usize> = (0..w.strands()).collect();
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize;
        at.swap(i - 1, i);
    }
    let mut pos = vec![0; w.strands()];
    for (p, &s) in at.iter().enumerate() {
        pos[s] = p;
    }
    pos
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn permutation_is_homomorphism(w1 in word_strategy(6, 30), w2 in word_strategy(6, 30)) {
        let w = w1.compose(&w2).unwrap();
        prop_assert_eq!(permutation_of(&w), permutation_of(&w1).compose(&permutation_of(&w2)));
    }

    #[test]
    fn normal_form_is_idempotent(w in word_strategy(5, 40)) {
        let nf = normal_form(&w);
        prop_assert_eq!(normal_form(&nf.to_word()), nf.clone());
        prop_assert!(equal_in_artin(&nf.to_word(), &w).unwrap());
    }

    #[test]
    fn inverse_cancels(w in word_strategy(5, 30)) {
        prop_assert!(normal_form(&w.compose(&w.inverse()).unwrap()).is_identity());
    }

    #[test]
    fn ledger_is_additive(a in prop::collection::vec(-3i64..4, 3), c in -2i64..3, t in -3i64..4,
                          w1 in word_strategy(4, 20), w2 in word_strategy(4, 20)) {
        let phi = BraidWord::new(3, vec![1, 2, 2]).unwrap();
        let v = CablingVector::new(phi, a, c, t).unwrap();
        let l1 = exponent_ledger(&v, &w1).unwrap();
        let l2 = exponent_ledger(&v, &w2).unwrap();
        let l12 = exponent_ledger(&v, &w1.compose(&w2).unwrap()).unwrap();
        let pos = end_positions(&w1);
        for s in 0..4 {
            prop_assert_eq!(l12[s], l1[s] + l2[pos[s]]);
        }
    }

    #[test]
    fn cable_is_homomorphism(a in prop::collection::vec(-2i64..3, 2), c in -1i64..2, t in -2i64..3,
                             w1 in word_strategy(3, 6), w2 in word_strategy(3, 6)) {
        let v = CablingVector::new(BraidWord::new(2, vec![1, 1]).unwrap(), a, c, t).unwrap();
        let lhs = cable(&v, &w1.compose(&w2).unwrap()).unwrap();
        let rhs = cable(&v, &w1).unwrap().compose(&cable(&v, &w2).unwrap()).unwrap();
        prop_assert_eq!(lhs.letters(), rhs.letters());
    }
}

#[test]
fn rewrites_preserve_normal_form() {
    let mut rng = common::rng(11);
    for trial in 0..200 {
        let n = rng.gen_range(3..7);
        let len = rng.gen_range(0..25);
        let mut letters: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..n as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let original = BraidWord::new(n, letters.clone()).unwrap();
        for _ in 0..30 {
            rewrite(&mut letters, n, &mut rng);
        }
        let rewritten = BraidWord::new(n, letters).unwrap();
        assert_eq!(normal_form(&original), normal_form(&rewritten), "trial {trial}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn different_permutations_give_different_forms(w1 in positive_word(5, 15), w2 in positive_word(5, 15)) {
        prop_assume!(permutation_of(&w1) != permutation_of(&w2));
        prop_assert_ne!(normal_form(&w1), normal_form(&w2));
        prop_assert!(!equal_in_artin(&w1, &w2).unwrap());
    }
}

#[test]
fn identity_suite_holds_for_small_n() {
    for n in 3..=8 {
        let suite = identity_suite(n).unwrap();
        // n−2 conjugations by α₀, n−3 by α₁, three full-twist identities
        assert_eq!(suite.len(), (n - 2) + (n - 3) + 3, "n = {n}");
        for check in suite {
            assert!(check.holds, "n = {n}: {}", check.name);
        }
    }
}

#[test]
fn alpha_powers_agree_in_b3() {
    let a = BraidWord::new(3, vec![1, 2, 1, 2, 1, 2]).unwrap();
    let b = BraidWord::new(3, vec![1, 2, 2, 1, 2, 2]).unwrap();
    assert_eq!(normal_form(&a), normal_form(&b));
    assert!(!equal_in_artin(&BraidWord::generator(3, 1, true).unwrap(), &BraidWord::generator(3, 2, true).unwrap()).unwrap());
}

/// A random `φ ∈ B_{k−1,1}`: a word in which the last strand only takes
/// full turns around the others.
fn random_phi(rng: &mut impl Rng, k: usize) -> BraidWord {
    let mut letters = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        if k > 2 && rng.gen_bool(0.5) {
            let g = rng.gen_range(1..k as i32 - 1);
            letters.push(if rng.gen_bool(0.5) { g } else { -g });
        } else {
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            let top = (k - 1) as i32;
            letters.extend([e * top, e * top]);
        }
    }
    BraidWord::new(k, letters).unwrap()
}

#[test]
fn cabling_respects_relations() {
    let mut rng = common::rng(5);
    for n in [3usize, 4] {
        for k in [2usize, 3] {
            for _ in 0..5 {
                let a: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-2..3)).collect();
                let v = CablingVector::new(random_phi(&mut rng, k), a, rng.gen_range(-2..3), rng.gen_range(-2..3)).unwrap();
                for i in 1..n as i32 - 1 {
                    let l = cable(&v, &BraidWord::new(n, vec![i, i + 1, i]).unwrap()).unwrap();
                    let r = cable(&v, &BraidWord::new(n, vec![i + 1, i, i + 1]).unwrap()).unwrap();
                    assert!(equal_in_artin(&l, &r).unwrap(), "braid relation n={n} k={k} i={i} v={v:?}");
                }
                if n == 4 {
                    let l = cable(&v, &BraidWord::new(4, vec![1, 3]).unwrap()).unwrap();
                    let r = cable(&v, &BraidWord::new(4, vec![3, 1]).unwrap()).unwrap();
                    assert!(equal_in_artin(&l, &r).unwrap(), "commutation k={k} v={v:?}");
                }
            }
        }
    }
}

#[test]
fn cable_of_empty_word_is_empty() {
    let v = CablingVector::sphere_compatible(3, 1, vec![1, -1]).unwrap();
    assert!(cable(&v, &BraidWord::identity(3)).unwrap().is_empty());
}

#[test]
fn cabled_generator_permutation() {
    // n = 3, k = 2, φ = σ₁² is pure, so only the block swap remains.
    let v = CablingVector::new(BraidWord::new(2, vec![1, 1]).unwrap(), vec![1, 2], -1, 3).unwrap();
    let p = permutation_of(&cable(&v, &BraidWord::new(3, vec![1]).unwrap()).unwrap());
    assert_eq!(p.images(), &[2, 3, 0, 1, 4, 5]);
}

#[test]
fn relation_ledger_concentrates_on_first_strand() {
    for n in 3..=6 {
        let v = CablingVector::sphere_compatible(n, 1, vec![0; n - 1]).unwrap();
        let ledger = exponent_ledger(&v, &relation_word(n).unwrap()).unwrap();
        let mut expected = vec![0; n];
        expected[0] = 2 * ((n - 1) * (n - 2)) as i64;
        assert_eq!(ledger, expected, "n = {n}");
    }
    let v = CablingVector::sphere_compatible(3, 1, vec![2, -1]).unwrap();
    assert_eq!(exponent_ledger(&v, &BraidWord::identity(3)).unwrap(), vec![0, 0, 0]);
}

#[test]
fn cabled_relation_matches_target() {
    let v = CablingVector::sphere_compatible(3, 1, vec![0, 0]).unwrap();
    assert_eq!(v.k(), 3);
    assert_eq!(v.phi().letters(), &[1, 2, 2]);
    let r = relation_word(3).unwrap();
    let lhs = cable(&v, &r).unwrap();
    let target = cabled_relation_target(3, 3).unwrap();
    assert_eq!(permutation_of(&lhs), permutation_of(&target));
    assert!(equal_in_artin(&lhs, &target).unwrap());
}

#[test]
fn word_parser_positions() {
    let w = BraidWord::parse(4, " 1 -2  3").unwrap();
    assert_eq!(w.letters(), &[1, -2, 3]);
    match BraidWord::parse(3, "1 2 x") {
        Err(sphere_sections::Error::Parse { position, .. }) => assert_eq!(position, 4),
        other => panic!("{other:?}"),
    }
    assert!(BraidWord::parse(3, "1 3").is_err());
    assert!(BraidWord::parse(3, "0").is_err());
}
