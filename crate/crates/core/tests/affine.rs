use coxlab::affine::{AffineElement, AffineGroup};
use coxlab::{CoxError, CoxeterSystem, Gen, Label};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn models() -> [AffineGroup; 2] {
    [AffineGroup::a1_tilde(), AffineGroup::a2_tilde()]
}

#[test]
fn coxeter_relations_hold_in_the_models() {
    for g in models() {
        let sys = g.system();
        for s in 0..sys.rank() {
            for t in 0..sys.rank() {
                let st = g.from_word(&[s as Gen, t as Gen]);
                match sys.m(s, t) {
                    Label::Finite(m) => assert_eq!(g.order(&st), Some(m as u64)),
                    Label::Infinite => assert_eq!(g.order(&st), None),
                }
            }
        }
    }
}

#[test]
fn model_ball_matches_word_ball() {
    // the models are faithful, so sphere sizes agree with the word engine's
    // count of reduced words up to the braid moves, computed here by Tits reduction
    for g in models() {
        let spheres = g.ball(6);
        let n = g.system().rank() as Gen;
        let mut words: Vec<Vec<Gen>> = vec![vec![]];
        let mut seen = std::collections::HashSet::from([g.identity()]);
        for r in 1..=6 {
            let mut next = Vec::new();
            for w in &words {
                for s in 0..n {
                    let mut u = w.clone();
                    u.push(s);
                    let x = g.from_word(&u);
                    if seen.insert(x) {
                        next.push(u);
                    }
                }
            }
            assert_eq!(next.len(), spheres[r].len());
            for u in &next {
                let reduced = coxlab::tits::reduce(g.system(), u, 1 << 16).unwrap();
                assert_eq!(reduced.len(), r);
            }
            words = next;
        }
    }
}

#[test]
fn sign_character_has_index_two() {
    for g in models() {
        let r = g.kernel_index(6);
        assert_eq!(r.index, 2);
        assert!(r.multiplicative && r.normal);
        for (k, sphere) in g.ball(6).iter().enumerate() {
            for x in sphere {
                assert_eq!(g.epsilon(x).sign, if k % 2 == 0 { 1 } else { -1 });
            }
        }
    }
}

#[test]
fn exact_reflection_length_matches_bounded_search() {
    for g in models() {
        for x in g.ball(6).into_iter().flatten() {
            let r = g.reflection_length_search(&x, 12).unwrap();
            assert!(r.exact, "{x}: {r:?}");
        }
    }
    let a1 = AffineGroup::a1_tilde();
    let t = AffineElement { v: vec![1], q: 0 };
    assert_eq!(a1.reflection_length(&t).unwrap(), 2);
    let r = a1.reflection_length_search(&AffineElement { v: vec![9], q: 0 }, 2).unwrap();
    assert_eq!((r.lower, r.upper), (2, None));
}

#[test]
fn reflection_length_is_bounded() {
    let a1 = AffineGroup::a1_tilde().reflection_length_profile(8).unwrap();
    assert_eq!(a1.max_per_radius[8], 2);
    assert!(a1.stable);
    let a2 = AffineGroup::a2_tilde().reflection_length_profile(8).unwrap();
    assert!(a2.stable);
    assert!(a2.max_per_radius[8] <= 4);
    let gen = AffineGroup::a2_tilde().involution_generation_check(6).unwrap();
    assert!(gen.holds);
    assert_eq!(gen.bound, 4);
    let gen = AffineGroup::a1_tilde().involution_generation_check(6).unwrap();
    assert_eq!((gen.holds, gen.bound), (true, 2));
    let id = AffineGroup::a1_tilde().reflection_length(&AffineGroup::a1_tilde().identity()).unwrap();
    assert_eq!(id, 0);
}

#[test]
fn interpretation_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in models() {
        let r = g.interpret(6, 500, 12, &mut rng).unwrap();
        assert_eq!(r.mismatches, 0);
        assert_eq!(r.parameters.len(), g.finite_order() * g.dim() * g.dim());
    }
}

#[test]
fn custom_models() {
    let text = "generators a b\nm a b inf\ndim 1\nelement e 1\nelement s -1\ngen a s 0\ngen b s 1\n";
    let g = AffineGroup::parse_custom(text).unwrap();
    assert_eq!(g.reflection_length_profile(6).unwrap().max_per_radius[6], 2);
    let not_hom = "generators a b\nm a b inf\ndim 1\nelement e 1\nelement s -1\ntable e e s\ntable s s s\ngen a s 0\ngen b s 1";
    assert!(matches!(AffineGroup::parse_custom(not_hom), Err(CoxError::Invalid(_))));
    let bad_letter = "generators a b\nm a b inf\ndim 1\nelement e 1\nelement s -1\ngen a s 0\ngen x s 1";
    assert!(matches!(AffineGroup::parse_custom(bad_letter), Err(CoxError::UnknownLetter(_))));
    assert!(AffineGroup::a1_tilde().parse_element("ax").is_err());
    let _ = CoxeterSystem::universal(2);
}

proptest! {
    #[test]
    fn semidirect_axioms(w1 in prop::collection::vec(0u8..3, 0..12), w2 in prop::collection::vec(0u8..3, 0..12), w3 in prop::collection::vec(0u8..3, 0..12)) {
        let g = AffineGroup::a2_tilde();
        let (x, y, z) = (g.from_word(&w1), g.from_word(&w2), g.from_word(&w3));
        prop_assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)));
        prop_assert!(g.multiply(&x, &g.invert(&x)).is_identity());
        let mut w = w1.clone();
        w.extend(&w2);
        prop_assert_eq!(g.from_word(&w), g.multiply(&x, &y));
    }
}
