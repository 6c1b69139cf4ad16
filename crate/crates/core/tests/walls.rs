use coxlab::walls::{ReflectionSubgroup, Sign};
use coxlab::{Ball, CoxeterSystem, Gen, GroupElement};
use proptest::prelude::*;

fn samples() -> Vec<CoxeterSystem> {
    vec![
        CoxeterSystem::universal(2),
        CoxeterSystem::universal(3),
        CoxeterSystem::right_angled(4, &[(0, 1), (1, 2), (2, 3)]),
        CoxeterSystem::right_angled(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    ]
}

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(0..rank as Gen, 0..=max_len)
}

#[test]
fn reflections_flip_sides_on_ball() {
    for sys in samples() {
        let ball = Ball::new(&sys, 4).unwrap();
        let refls: Vec<_> = ball
            .iter()
            .filter(|x| sys.is_reflection(x) && x.len() <= 5)
            .map(|x| sys.reflection(x).unwrap())
            .collect();
        for t in &refls {
            for w in ball.iter() {
                let tw = sys.multiply(&t.element, w);
                assert_ne!(sys.side_of(t, w), sys.side_of(t, &tw));
            }
            assert_eq!(sys.side_of(t, &GroupElement::identity()), Sign::Plus);
        }
    }
}

#[test]
fn wall_distance_matches_exhaustive_minimum() {
    for sys in samples() {
        let small = Ball::new(&sys, 3).unwrap();
        let refls: Vec<_> = small
            .iter()
            .filter(|x| sys.is_reflection(x))
            .map(|x| sys.reflection(x).unwrap())
            .collect();
        for t in &refls {
            for u in &refls {
                let d = sys.wall_distance(t, u);
                let radius = t.conjugator.len() + u.conjugator.len() + 2;
                let ball = Ball::new(&sys, radius).unwrap();
                assert_eq!(sys.wall_distance_in_ball(t, u, &ball), Some(d));
                assert_eq!(d, sys.wall_distance(u, t));
                if sys.reflections_commute(t, u) {
                    assert_eq!(d, 0);
                }
            }
        }
    }
}

fn random_reflections(sys: &CoxeterSystem, specs: &[(Gen, Vec<Gen>)]) -> Vec<coxlab::walls::Reflection> {
    specs
        .iter()
        .map(|(s, h)| {
            let s = *s % sys.rank() as Gen;
            let h: Vec<Gen> = h.iter().map(|g| g % sys.rank() as Gen).collect();
            sys.reflection_conjugate(s, &sys.normalize(&h))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_generators_are_geometric_and_generate(
        which in 0usize..4,
        specs in prop::collection::vec((0u8..8, word_strategy(8, 3)), 1..=4),
        chamber in word_strategy(8, 2),
    ) {
        let sys = &samples()[which];
        let t = random_reflections(sys, &specs);
        let e = GroupElement::identity();
        let r = sys.canonical_generators(&t, &e).unwrap();
        prop_assert!(r.len() <= t.len());
        prop_assert!(sys.is_geometric_set(&r).geometric);
        let u = ReflectionSubgroup { generators: r.clone() };
        for x in &t {
            prop_assert!(u.contains(sys, &x.element));
        }
        let c = sys.normalize(&chamber.iter().map(|g| g % sys.rank() as Gen).collect::<Vec<_>>());
        let rc = sys.canonical_generators(&t, &c).unwrap();
        prop_assert_eq!(rc.len(), r.len());
        // R_U(c) is R_U(e) moved by the element of U carrying the domain at e to c
        let shift = u.fold(sys, &c);
        let uu = sys.multiply(&c, &sys.inverse(&shift.representative));
        prop_assert!(u.contains(sys, &uu));
        for x in &r {
            prop_assert!(rc.iter().any(|y| y.element == sys.conjugate(&x.element, &uu)));
        }
    }

    #[test]
    fn folding_is_idempotent_and_lands_in_domain(
        which in 0usize..4,
        specs in prop::collection::vec((0u8..8, word_strategy(8, 2)), 1..=3),
        w in word_strategy(8, 6),
    ) {
        let sys = &samples()[which];
        let t = random_reflections(sys, &specs);
        let u = ReflectionSubgroup::new(sys, &t).unwrap();
        let w = sys.normalize(&w.iter().map(|g| g % sys.rank() as Gen).collect::<Vec<_>>());
        let f = u.fold(sys, &w);
        prop_assert_eq!(u.representative(sys, &f.representative), f.representative.clone());
        for r in &u.generators {
            prop_assert_eq!(sys.side_of(r, &f.representative), Sign::Plus);
        }
        let mut back = f.representative.clone();
        for &i in f.steps.iter().rev() {
            back = sys.multiply(&u.generators[i].element, &back);
        }
        prop_assert_eq!(back, w);
    }
}

#[test]
fn domain_is_convex_in_small_balls() {
    let u3 = CoxeterSystem::universal(3);
    let gens: Vec<_> = ["a", "bcb", "cac"].iter().map(|w| u3.reflection_from_word(w).unwrap()).collect();
    let u = ReflectionSubgroup::new(&u3, &gens).unwrap();
    let e = GroupElement::identity();
    let dom = u.domain_ball(&u3, &e, 5);
    let inside: std::collections::HashSet<_> = dom.iter().cloned().collect();
    // every geodesic from e to a member stays inside: all prefixes are members
    for d in &dom {
        for k in 0..d.len() {
            let prefix = u3.normalize(&d.letters()[..k]);
            assert!(inside.contains(&prefix));
        }
    }
    for r in &u.generators {
        let panel_hit = dom.iter().any(|w| {
            let rw = u3.multiply(&r.element, w);
            u3.on_wall(r, w) && !inside.contains(&rw)
        });
        assert!(panel_hit, "generator without a boundary panel");
    }
}
