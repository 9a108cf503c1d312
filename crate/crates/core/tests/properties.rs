mod common;

use chaintool_core::chain::{classify_prechain, higman_thompson_certificate, ChainStatus};
use chaintool_core::constructions::{
    chain_from_class_a, standard_generators, standard_three_chain,
};
use chaintool_core::rational::{format_rational, int, parse_rational, rat};
use chaintool_core::{IntervalSet, OpenInterval, PlMap, Rational};
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

fn open_interval() -> impl Strategy<Value = OpenInterval> {
    (small_rational(), 1i64..=20, 1i64..=4)
        .prop_map(|(lo, w, d)| OpenInterval::finite(lo.clone(), lo + rat(w, d)).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn pl_group_laws(f in pl_map(), g in pl_map(), h in pl_map(), x in small_rational()) {
        group_laws(&f, &g, &h, &x)?;
    }

    #[test]
    fn support_is_equivariant(f in pl_map(), g in pl_map()) {
        support_equivariance(&f, &g)?;
    }

    #[test]
    fn canonical_form_decides_equality(f in pl_map(), g in pl_map(), extra in small_rational()) {
        canonical_equality(&f, &g, &extra)?;
    }

    #[test]
    fn moving_right_is_closed_under_composition(f in pl_map(), g in pl_map()) {
        moves_right_closure(&f, &g)?;
    }

    #[test]
    fn word_evaluation_is_a_homomorphism(
        u in word(3, 6),
        v in word(3, 6),
        maps in prop::collection::vec(pl_map(), 3),
    ) {
        word_homomorphism(&u, &v, &maps)?;
    }

    #[test]
    fn blowup_group_laws(
        u in word(3, 5),
        v in word(3, 5),
        w in word(3, 5),
        y in small_rational(),
        m in pl_map(),
    ) {
        blowup_laws(&blowup_system(), &u, &v, &w, &y, &m)?;
    }

    #[test]
    fn orbits_are_deterministic(
        subset in prop::collection::vec(any::<bool>(), 5),
        x in small_rational(),
        budget in 1usize..60,
    ) {
        orbit_determinism(&subset, &x, budget)?;
    }

    #[test]
    fn b_times_small_bump_is_in_class_a(g in bump_in(rat(1, 4), rat(1, 2))) {
        class_a_closure(&g)?;
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn pl_json_round_trips(f in pl_map()) {
        let s = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<PlMap>(&s).unwrap(), f);
    }

    #[test]
    fn interval_set_operations_match_membership(
        a in prop::collection::vec(open_interval(), 0..4),
        b in prop::collection::vec(open_interval(), 0..4),
        x in small_rational(),
    ) {
        let (sa, sb) = (IntervalSet::from_intervals(a.clone()), IntervalSet::from_intervals(b.clone()));
        let in_a = a.iter().any(|iv| iv.contains(&x));
        let in_b = b.iter().any(|iv| iv.contains(&x));
        prop_assert_eq!(sa.contains(&x), in_a);
        prop_assert_eq!(sa.union(&sb).contains(&x), in_a || in_b);
        prop_assert_eq!(sa.intersect(&sb).contains(&x), in_a && in_b);
        prop_assert!(sa.intersect(&sb).is_subset(&sa));
        prop_assert!(sa.parts().windows(2).all(|w| w[0].hi <= w[1].lo));
    }

    #[test]
    fn class_a_chains_certify_and_stabilize_monotonically(
        g1 in bump_in(rat(1, 4), rat(1, 2)),
        g2 in bump_in(rat(1, 4), rat(1, 2)),
        n in 1i64..4,
    ) {
        let (_, b) = standard_generators();
        let c = chain_from_class_a(&[b.compose(&g1), b.compose(&g2)]).unwrap();
        prop_assert!(c.system.status() >= ChainStatus::ChainCertified);
        let now = higman_thompson_certificate(&c.system.powered(n).unwrap()).unwrap().holds;
        let next = higman_thompson_certificate(&c.system.powered(n + 1).unwrap()).unwrap().holds;
        prop_assert!(!now || next);
    }

    #[test]
    fn chains_are_order_sensitive(perm in Just(vec![0usize, 1, 2]).prop_shuffle(), n in 1i64..4) {
        let chain: Vec<PlMap> = standard_three_chain().iter().map(|f| f.pow(n)).collect();
        let permuted: Vec<PlMap> = perm.iter().map(|&i| chain[i].clone()).collect();
        let sys = classify_prechain(permuted).unwrap();
        prop_assert_eq!(sys.is_prechain(), perm == vec![0, 1, 2]);
    }

    #[test]
    fn translation_orbits_are_arithmetic(x in small_rational(), budget in 1usize..40) {
        let (a, _) = standard_generators();
        let o = chaintool_core::dynamics::orbit(&[a], &x, budget).unwrap();
        prop_assert_eq!(o.points.len(), budget);
        let steps: Vec<Rational> = o.points.windows(2).map(|w| &w[1] - &w[0]).collect();
        prop_assert!(steps.iter().all(|s| *s == int(1)));
    }
}
