//! Strategies and property bodies shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use chaintool_core::blowup::{bl_word_eval, make_blowup_system, BlowupElement, BlowupSystem};
use chaintool_core::constructions::{
    class_a_membership, standard_generators, standard_three_chain,
};
use chaintool_core::dynamics::orbit;
use chaintool_core::rational::{int, rat};
use chaintool_core::{PlMap, Rational, Word};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn positive_step() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn slope() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![
        rat(1, 3),
        rat(1, 2),
        rat(2, 3),
        int(1),
        int(1),
        rat(3, 2),
        int(2),
        int(3),
    ])
}

/// A random increasing PL homeomorphism with up to five knots.
pub fn pl_map() -> impl Strategy<Value = PlMap> {
    (
        -4i64..=4,
        -4i64..=4,
        prop::collection::vec((positive_step(), positive_step()), 0..5),
        slope(),
        slope(),
    )
        .prop_map(|(x0, y0, steps, l, r)| {
            let mut knots = vec![(int(x0), int(y0))];
            for (dx, dy) in steps {
                let (x, y) = knots.last().unwrap().clone();
                knots.push((x + dx, y + dy));
            }
            PlMap::new(knots, l, r).unwrap()
        })
}

/// A random map that is the identity outside `(lo, hi)` and moves points of it.
pub fn bump_in(lo: Rational, hi: Rational) -> impl Strategy<Value = PlMap> {
    (1usize..4)
        .prop_flat_map(|k| {
            (
                prop::collection::btree_set(1i64..32, k),
                prop::collection::btree_set(1i64..32, k),
            )
        })
        .prop_filter("sizes must match", |(xs, ys)| {
            xs.len() == ys.len() && xs != ys
        })
        .prop_map(move |(xs, ys): (BTreeSet<i64>, BTreeSet<i64>)| {
            let width = &hi - &lo;
            let at = |u: i64| &lo + &width * rat(u, 32);
            let mut knots = vec![(lo.clone(), lo.clone())];
            knots.extend(xs.iter().zip(&ys).map(|(&x, &y)| (at(x), at(y))));
            knots.push((hi.clone(), hi.clone()));
            PlMap::new(knots, int(1), int(1)).unwrap()
        })
}

pub fn word(alphabet: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..alphabet, -3i64..=3), 0..=max_len).prop_map(Word::new)
}

/// Probe points: every knot of every map, their images, midpoints, and far points.
pub fn probes(maps: &[&PlMap]) -> Vec<Rational> {
    let mut pts: BTreeSet<Rational> = BTreeSet::new();
    for m in maps {
        for (x, y) in m.knots() {
            pts.insert(x.clone());
            pts.insert(y.clone());
        }
    }
    let v: Vec<Rational> = pts.iter().cloned().collect();
    for w in v.windows(2) {
        pts.insert((&w[0] + &w[1]) / int(2));
    }
    let lo = v.first().cloned().unwrap_or_else(|| int(0));
    let hi = v.last().cloned().unwrap_or_else(|| int(0));
    pts.insert(lo - int(100));
    pts.insert(hi + int(100));
    pts.into_iter().collect()
}

pub fn group_laws(f: &PlMap, g: &PlMap, h: &PlMap, x: &Rational) -> Check {
    prop_assert_eq!(f.compose(g).compose(h), f.compose(&g.compose(h)));
    prop_assert!(f.compose(&f.inverse()).is_identity());
    prop_assert!(f.inverse().compose(f).is_identity());
    prop_assert_eq!(&PlMap::identity().compose(f), f);
    prop_assert_eq!(&f.compose(&PlMap::identity()), f);
    prop_assert_eq!(f.compose(g).eval(x), f.eval(&g.eval(x)));
    prop_assert_eq!(f.inverse().eval(&f.eval(x)), x.clone());
    prop_assert_eq!(f.eval_inverse(&f.eval(x)), x.clone());
    prop_assert_eq!(f.pow(3), f.compose(f).compose(f));
    prop_assert_eq!(f.pow(-2), f.inverse().compose(&f.inverse()));
    let y = x + int(1);
    prop_assert!(f.eval(x) < f.eval(&y));
    Ok(())
}

pub fn support_equivariance(f: &PlMap, g: &PlMap) -> Check {
    let conj = f.conjugate_by(g);
    prop_assert_eq!(conj.support(), f.support().image(g));
    for x in probes(&[f]) {
        prop_assert_eq!(f.support().contains(&x), f.eval(&x) != x, "at {}", x);
    }
    Ok(())
}

pub fn canonical_equality(f: &PlMap, g: &PlMap, extra: &Rational) -> Check {
    // Re-expressing f with a redundant knot gives the same canonical value.
    let mut knots = f.knots().to_vec();
    if !knots.iter().any(|(x, _)| x == extra) {
        knots.push((extra.clone(), f.eval(extra)));
        knots.sort();
        let again = PlMap::new(knots, f.left_slope().clone(), f.right_slope().clone()).unwrap();
        prop_assert_eq!(&again, f);
    }
    let agree = probes(&[f, g]).iter().all(|x| f.eval(x) == g.eval(x))
        && f.left_slope() == g.left_slope()
        && f.right_slope() == g.right_slope();
    prop_assert_eq!(agree, f == g);
    prop_assert_eq!(f.compose(g).compose(&g.inverse()), f.clone());
    Ok(())
}

pub fn moves_right_closure(f: &PlMap, g: &PlMap) -> Check {
    let oracle = |m: &PlMap| probes(&[m]).iter().all(|x| m.eval(x) >= *x);
    prop_assert_eq!(f.moves_right(), oracle(f));
    if f.moves_right() && g.moves_right() {
        prop_assert!(f.compose(g).moves_right());
    }
    Ok(())
}

pub fn word_homomorphism(u: &Word, v: &Word, maps: &[PlMap]) -> Check {
    let uv = u.mul(v).evaluate(maps).unwrap();
    prop_assert_eq!(
        &uv,
        &u.evaluate(maps)
            .unwrap()
            .compose(&v.evaluate(maps).unwrap())
    );
    // Letter-by-letter evaluation ignores free reduction.
    let mut naive = PlMap::identity();
    for &(i, e) in u.factors().iter().chain(v.factors()) {
        naive = naive.compose(&maps[i].pow(e));
    }
    prop_assert_eq!(&naive, &uv);
    prop_assert!(u.mul(&u.inverse()).is_empty());
    let n = maps.len();
    let conj = u.conjugate_by(v);
    prop_assert_eq!(conj.exponent_sum(n).unwrap(), u.exponent_sum(n).unwrap());
    prop_assert!(Word::commutator(u, v)
        .exponent_sum(n)
        .unwrap()
        .iter()
        .all(|&e| e == 0));
    let json = serde_json::to_string(u).unwrap();
    prop_assert_eq!(&serde_json::from_str::<Word>(&json).unwrap(), u);
    Ok(())
}

pub fn blowup_system() -> BlowupSystem {
    make_blowup_system(int(1)).unwrap()
}

pub fn blowup_laws(
    sys: &BlowupSystem,
    u: &Word,
    v: &Word,
    w: &Word,
    y: &Rational,
    m: &PlMap,
) -> Check {
    let (x1, x2, x3) = (
        bl_word_eval(sys, u).unwrap(),
        bl_word_eval(sys, v).unwrap(),
        bl_word_eval(sys, w).unwrap(),
    );
    prop_assert_eq!(x1.mul(&x2).mul(&x3), x1.mul(&x2.mul(&x3)));
    prop_assert!(x1.mul(&x1.inverse()).is_identity());
    prop_assert!(x1.inverse().mul(&x1).is_identity());
    prop_assert_eq!(&BlowupElement::identity().mul(&x1), &x1);
    prop_assert_eq!(bl_word_eval(sys, &u.mul(v)).unwrap(), x1.mul(&x2));
    let product = x1.mul(&x2);
    prop_assert_eq!(product.base(), &x1.base().compose(x2.base()));
    let d = BlowupElement::delta(y.clone());
    let e = BlowupElement::delta(y + int(1));
    prop_assert!(BlowupElement::commutator(&d, &e).is_identity());
    let lifted = BlowupElement::lift(m.clone());
    prop_assert_eq!(
        BlowupElement::commutator(&d, &lifted).is_identity(),
        m.eval(y) == *y
    );
    let json = serde_json::to_string(&x1).unwrap();
    prop_assert_eq!(serde_json::from_str::<BlowupElement>(&json).unwrap(), x1);
    Ok(())
}

pub fn orbit_determinism(subset: &[bool], x: &Rational, budget: usize) -> Check {
    let chain = standard_three_chain();
    let (a, b) = standard_generators();
    let pool = [chain, vec![a, b]].concat();
    let gens: Vec<PlMap> = pool
        .into_iter()
        .zip(subset)
        .filter(|(_, &k)| k)
        .map(|(g, _)| g)
        .collect();
    let first = orbit(&gens, x, budget).unwrap();
    let second = orbit(&gens, x, budget).unwrap();
    prop_assert_eq!(&first, &second);
    prop_assert!(first.points.len() <= budget);
    prop_assert!(first.points.windows(2).all(|w| w[0] < w[1]));
    for (p, w) in first.visit_order.iter().zip(&first.words) {
        prop_assert_eq!(&w.apply(&gens, x).unwrap(), p);
    }
    if first.frontier_exhausted {
        for p in &first.points {
            for g in &gens {
                prop_assert!(first.points.binary_search(&g.eval(p)).is_ok());
                prop_assert!(first.points.binary_search(&g.eval_inverse(p)).is_ok());
            }
        }
    }
    Ok(())
}

pub fn class_a_closure(g: &PlMap) -> Check {
    let (_, b) = standard_generators();
    prop_assert!(class_a_membership(&b.compose(g)).member);
    Ok(())
}
