//! Orbits and desk-scale witnesses for the dynamics of chain groups.
//!
//! Nothing here decides minimality. [`gap_report`] is a finite-resolution
//! probe, and every witness returned by the searches has already been
//! re-verified exactly against the claimed inclusion or disjointness.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::chain::ChainSystem;
use crate::error::{Error, Result};
use crate::interval::{IntervalSet, OpenInterval};
use crate::pl::PlMap;
use crate::rational::{int, serde_rational, to_decimal, ExtPoint, Rational};
use crate::words::Word;

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClosedInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadParameters(format!("[{lo}, {hi}] is empty")));
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn image(&self, f: &PlMap) -> ClosedInterval {
        ClosedInterval {
            lo: f.eval(&self.lo),
            hi: f.eval(&self.hi),
        }
    }

    /// Whether `[lo, hi]` sits inside the open interval.
    pub fn inside(&self, b: &OpenInterval) -> bool {
        b.contains(&self.lo) && b.contains(&self.hi)
    }
}

/// A finite piece of `G·x`, grown breadth-first by word length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSample {
    #[serde(with = "serde_rational")]
    pub base_point: Rational,
    /// Sorted ascending.
    #[serde(serialize_with = "ser_rationals")]
    pub points: Vec<Rational>,
    /// Points in the order the search reached them.
    #[serde(serialize_with = "ser_rationals")]
    pub visit_order: Vec<Rational>,
    /// A shortest word reaching each point of `visit_order`.
    pub words: Vec<Word>,
    pub frontier_exhausted: bool,
    pub word_length_bound: u64,
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl OrbitSample {
    /// `exact,decimal` rows in ascending order, decimals to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exact,decimal\n");
        for p in &self.points {
            out.push_str(&format!("{p},{}\n", to_decimal(p, 12)));
        }
        out
    }

    pub fn word_for(&self, x: &Rational) -> Option<&Word> {
        self.visit_order
            .iter()
            .position(|p| p == x)
            .map(|i| &self.words[i])
    }
}

// Letters in tie-break order: index ascending, positive before negative.
fn letters(gens: &[PlMap]) -> Vec<(usize, i64, PlMap)> {
    gens.iter()
        .enumerate()
        .flat_map(|(i, g)| [(i, 1, g.clone()), (i, -1, g.inverse())])
        .collect()
}

/// Breadth-first orbit of `x` stopping after `budget` points or when no new
/// point can be reached.
pub fn orbit(gens: &[PlMap], x: &Rational, budget: usize) -> Result<OrbitSample> {
    if budget == 0 {
        return Err(Error::BadParameters("orbit budget must be positive".into()));
    }
    let letters = letters(gens);
    let mut seen: HashSet<Rational> = HashSet::from([x.clone()]);
    let mut visit_order = vec![x.clone()];
    let mut words = vec![Word::empty()];
    let mut levels = vec![0u64];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut full = budget == 1;
    let mut exhausted = true;

    'search: while let Some(k) = queue.pop_front() {
        for (i, e, g) in &letters {
            let y = g.eval(&visit_order[k]);
            if seen.contains(&y) {
                continue;
            }
            if full {
                exhausted = false;
                break 'search;
            }
            seen.insert(y.clone());
            words.push(Word::gen_pow(*i, *e).mul(&words[k]));
            levels.push(levels[k] + 1);
            visit_order.push(y);
            queue.push_back(visit_order.len() - 1);
            full = visit_order.len() == budget;
        }
    }
    let mut points = visit_order.clone();
    points.sort();
    Ok(OrbitSample {
        base_point: x.clone(),
        points,
        visit_order,
        words,
        frontier_exhausted: exhausted,
        word_length_bound: *levels.last().expect("nonempty"),
    })
}

/// A shortest word (in tie-break order) with `w(x) = target`, of length at most `depth`.
pub fn orbit_word(gens: &[PlMap], x: &Rational, target: &Rational, depth: u64) -> Option<Word> {
    let letters = letters(gens);
    let mut seen: HashMap<Rational, Word> = HashMap::from([(x.clone(), Word::empty())]);
    let mut frontier = vec![x.clone()];
    if x == target {
        return Some(Word::empty());
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            let w = seen[p].clone();
            for (i, e, g) in &letters {
                let y = g.eval(p);
                if seen.contains_key(&y) {
                    continue;
                }
                let wy = Word::gen_pow(*i, *e).mul(&w);
                if &y == target {
                    return Some(wy);
                }
                seen.insert(y.clone(), wy);
                next.push(y);
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// Largest spacing between consecutive sampled points inside a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub window: ClosedInterval,
    #[serde(with = "serde_rational")]
    pub max_gap: Rational,
    /// Left end of the first gap of maximal size.
    #[serde(with = "serde_rational")]
    pub gap_location: Rational,
    pub points_in_window: usize,
}

/// Heuristic probe: gaps shrink with the budget for minimal actions but
/// need not for exceptional ones.
pub fn gap_report(sample: &OrbitSample, window: &ClosedInterval) -> Result<GapReport> {
    let (first, last) = match (sample.points.first(), sample.points.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptyWindow("the sample is empty".into())),
    };
    if &window.lo < first || &window.hi > last {
        return Err(Error::EmptyWindow(format!(
            "window [{}, {}] leaves the sampled hull [{first}, {last}]",
            window.lo, window.hi
        )));
    }
    let inside: Vec<&Rational> = sample
        .points
        .iter()
        .filter(|p| window.contains(p))
        .collect();
    if inside.len() < 2 {
        return Err(Error::EmptyWindow(format!(
            "only {} sampled point(s) in [{}, {}]",
            inside.len(),
            window.lo,
            window.hi
        )));
    }
    let mut best = (inside[1] - inside[0], inside[0].clone());
    for w in inside.windows(2).skip(1) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0].clone());
        }
    }
    Ok(GapReport {
        window: window.clone(),
        max_gap: best.0,
        gap_location: best.1,
        points_in_window: inside.len(),
    })
}

/// An element `u` with `u(A) ⊆ B`, and the exact images of the pieces of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoTransWitness {
    pub word: Word,
    pub images: Vec<ClosedInterval>,
}

impl CoTransWitness {
    pub fn recheck(&self, gens: &[PlMap], a: &[ClosedInterval], b: &OpenInterval) -> Result<bool> {
        let u = self.word.evaluate(gens)?;
        Ok(a.iter().all(|piece| piece.image(&u).inside(b)))
    }
}

fn support_of_group(sys: &ChainSystem) -> IntervalSet {
    sys.supports()
        .iter()
        .fold(IntervalSet::empty(), |acc, s| acc.union(s))
}

fn closed_inside(set: &IntervalSet, a: &ClosedInterval) -> bool {
    set.parts().iter().any(|iv| a.inside(iv))
}

/// `f_n ⋯ f_1` as a word.
fn full_product(n: usize) -> Word {
    Word::new((0..n).rev().map(|k| (k, 1)))
}

/// Searches for `u` with `u(A) ⊆ B`: first `f_0^ℓ H^{-m}` with `H = f_{n-1} ⋯ f_0`,
/// then `f_k^{±ℓ} H^m` with `ℓ, |m| <= depth`, then a breadth-first search of words of length at
/// most `depth` over the images of the endpoints of `A`.
pub fn co_transitivity_witness(
    sys: &ChainSystem,
    a: &[ClosedInterval],
    b: &OpenInterval,
    depth: u64,
) -> Result<CoTransWitness> {
    let gens = sys.generators();
    if gens.is_empty() {
        return Err(Error::FewerThanTwoGenerators);
    }
    let supp = support_of_group(sys);
    if let Some(bad) = a.iter().find(|piece| !closed_inside(&supp, piece)) {
        return Err(Error::Precondition(format!(
            "[{}, {}] is not inside the support {supp}",
            bad.lo, bad.hi
        )));
    }
    let not_found = || Error::NotFound {
        what: "co-transitivity witness".into(),
        bound: depth,
    };
    if supp.intersect(&IntervalSet::single(b.clone())).is_empty() {
        return Err(not_found());
    }
    let found = |word: Word| -> Result<CoTransWitness> {
        let u = word.evaluate(gens)?;
        let images: Vec<ClosedInterval> = a.iter().map(|p| p.image(&u)).collect();
        debug_assert!(images.iter().all(|im| im.inside(b)));
        Ok(CoTransWitness { word, images })
    };
    if a.iter().all(|p| p.inside(b)) {
        return found(Word::empty());
    }

    let endpoints: Vec<Rational> = a
        .iter()
        .flat_map(|p| [p.lo.clone(), p.hi.clone()])
        .collect();
    let hits = |pts: &[Rational]| pts.iter().all(|x| b.contains(x));
    let d = depth as i64;
    let h = full_product(gens.len()).evaluate(gens)?;
    let (h_inv, inverses): (PlMap, Vec<PlMap>) =
        (h.inverse(), gens.iter().map(PlMap::inverse).collect());

    // Images of the endpoints under H^m for m in -d..=d, indexed by m + d.
    let mut shifted = vec![Vec::new(); 2 * d as usize + 1];
    shifted[d as usize] = endpoints.clone();
    for m in 1..=d as usize {
        shifted[d as usize + m] = shifted[d as usize + m - 1]
            .iter()
            .map(|x| h.eval(x))
            .collect();
        shifted[d as usize - m] = shifted[d as usize - m + 1]
            .iter()
            .map(|x| h_inv.eval(x))
            .collect();
    }
    // f_0^l H^-m first, then every f_k^(±l) H^m.
    let mut tries: Vec<(i64, usize, i64)> = (0..=d).map(|m| (-m, 0, 1)).collect();
    let mut ms: Vec<i64> = (-d..=d).collect();
    ms.sort_by_key(|m| (m.abs(), -m));
    for m in ms {
        for k in 0..gens.len() {
            tries.extend([(m, k, 1), (m, k, -1)]);
        }
    }
    for (m, k, sign) in tries {
        let base = &shifted[(m + d) as usize];
        let map = if sign > 0 { &gens[k] } else { &inverses[k] };
        let mut pts = base.clone();
        for l in 0..=d {
            if hits(&pts) {
                let word = Word::gen_pow(k, sign * l).mul(&full_product(gens.len()).pow(m));
                return found(word);
            }
            pts = pts.iter().map(|x| map.eval(x)).collect();
        }
    }

    // Breadth-first over endpoint states.
    const STATE_CAP: usize = 200_000;
    let letters = letters(gens);
    let mut seen: HashSet<Vec<Rational>> = HashSet::from([endpoints.clone()]);
    let mut frontier = vec![(endpoints, Word::empty())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (pts, w) in &frontier {
            for (i, e, g) in &letters {
                let image: Vec<Rational> = pts.iter().map(|x| g.eval(x)).collect();
                if seen.contains(&image) {
                    continue;
                }
                let wy = Word::gen_pow(*i, *e).mul(w);
                if hits(&image) {
                    return found(wy);
                }
                if seen.len() < STATE_CAP {
                    seen.insert(image.clone());
                    next.push((image, wy));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(not_found())
}

/// `u` with `S ∩ u⁻¹ t u(S) = ∅` for `S = supp r ∪ supp s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HigmanWitness {
    pub word: Word,
    pub s: IntervalSet,
    /// `u⁻¹ t u (S)`.
    pub moved: IntervalSet,
}

/// Finds `u` by pushing the hull of `S` into a small interval `B` with
/// `B ∩ t(B) = ∅`.
pub fn higman_triple_witness(
    sys: &ChainSystem,
    r: &Word,
    s: &Word,
    t: &Word,
    depth: u64,
) -> Result<HigmanWitness> {
    let gens = sys.generators();
    let (rm, sm, tm) = (r.evaluate(gens)?, s.evaluate(gens)?, t.evaluate(gens)?);
    if rm.is_identity() || sm.is_identity() || tm.is_identity() {
        return Err(Error::Precondition("r, s and t must be nontrivial".into()));
    }
    let set = rm.support().union(&sm.support());
    let hull = match set.hull() {
        Some(h) if h.is_bounded() => h,
        _ => {
            return Err(Error::Precondition(format!(
                "supp r ∪ supp s = {set} is not bounded"
            )))
        }
    };
    let witness = |word: Word| -> Result<Option<HigmanWitness>> {
        let u = word.evaluate(gens)?;
        let moved = set.image(&u).image(&tm).image(&u.inverse());
        Ok(set.is_disjoint(&moved).then(|| HigmanWitness {
            word,
            s: set.clone(),
            moved,
        }))
    };
    if let Some(w) = witness(Word::empty())? {
        return Ok(w);
    }

    let p = tm.moved_point().expect("t is nontrivial");
    let mut eps = int(1);
    let b = loop {
        let (lo, hi) = (&p - &eps, &p + &eps);
        if tm.eval(&lo) >= hi || tm.eval(&hi) <= lo {
            break OpenInterval::finite(lo, hi).expect("eps > 0");
        }
        eps /= int(2);
    };
    let a = ClosedInterval::new(
        hull.lo.finite().expect("bounded").clone(),
        hull.hi.finite().expect("bounded").clone(),
    )?;
    let u = co_transitivity_witness(sys, &[a], &b, depth)?;
    witness(u.word)?.ok_or_else(|| Error::NotFound {
        what: "Higman witness".into(),
        bound: depth,
    })
}

/// A word in the commutator subgroup agreeing with `g` on `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreeWitness {
    pub word: Word,
    pub exponent_sum: Vec<i64>,
    /// Points of `A` where agreement was checked exactly.
    #[serde(serialize_with = "ser_rationals")]
    pub test_points: Vec<Rational>,
}

/// Endpoints of `A`, knots of either map inside `A`, and midpoints between them.
pub fn agreement_test_points(f: &PlMap, g: &PlMap, a: &ClosedInterval) -> Vec<Rational> {
    let mut pts: Vec<Rational> = [a.lo.clone(), a.hi.clone()]
        .into_iter()
        .chain(
            f.knots()
                .iter()
                .chain(g.knots())
                .map(|(x, _)| x.clone())
                .filter(|x| a.contains(x)),
        )
        .collect();
    pts.sort();
    pts.dedup();
    let mids: Vec<Rational> = pts.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
    pts.extend(mids);
    pts.sort();
    pts
}

/// Builds `u = (∏ h_i s_i⁻¹ h_i⁻¹) g` for `g = s_1 ⋯ s_k`, where each `h_i`
/// pushes `supp s_i` into an end zone `J` or `K` of the support that misses
/// every partial image `s_j ⋯ s_k(A)`.
pub fn agree_on_compact_in_commutator(
    sys: &ChainSystem,
    g: &Word,
    a: &ClosedInterval,
    depth: u64,
) -> Result<AgreeWitness> {
    let gens = sys.generators();
    let n = gens.len();
    if n == 0 || !sys.is_prechain() {
        return Err(Error::NotPrechain(
            "agreement needs a classified chain system".into(),
        ));
    }
    if !closed_inside(&support_of_group(sys), a) {
        return Err(Error::Precondition(format!(
            "[{}, {}] is not inside the support",
            a.lo, a.hi
        )));
    }
    let gm = g.evaluate(gens)?;
    let letters = g.letters();

    // Partial images s_j ⋯ s_k(A), j = k+1 (A itself) down to 1.
    let mut image = a.clone();
    let (mut left, mut right) = (a.lo.clone(), a.hi.clone());
    for &(i, e) in letters.iter().rev() {
        image = image.image(&gens[i].pow(e));
        left = left.min(image.lo.clone());
        right = right.max(image.hi.clone());
    }
    let (first, last) = (sys.interval(0), sys.interval(n - 1));
    let j_zone = OpenInterval::new(
        first.lo.clone(),
        first.hi.clone().min(ExtPoint::Finite(left)),
    );
    let k_zone = OpenInterval::new(
        last.lo.clone().max(ExtPoint::Finite(right)),
        last.hi.clone(),
    );

    let h = full_product(n).evaluate(gens)?;
    let h_inv = h.inverse();
    let mut conjugators: Vec<Word> = Vec::with_capacity(letters.len());
    for &(i, _) in &letters {
        let supp = sys.interval(i).clone();
        let mut found = None;
        let (mut down, mut up) = (supp.clone(), supp.clone());
        for m in 0..=depth as i64 {
            if j_zone.as_ref().is_some_and(|j| j.contains_interval(&down)) {
                found = Some(full_product(n).pow(-m));
                break;
            }
            if k_zone.as_ref().is_some_and(|k| k.contains_interval(&up)) {
                found = Some(full_product(n).pow(m));
                break;
            }
            down = down.image(&h_inv);
            up = up.image(&h);
        }
        if found.is_none() && supp.is_bounded() {
            let closure = ClosedInterval::new(
                supp.lo.finite().expect("bounded").clone(),
                supp.hi.finite().expect("bounded").clone(),
            )?;
            for zone in [&j_zone, &k_zone].into_iter().flatten() {
                if let Ok(w) = co_transitivity_witness(sys, std::slice::from_ref(&closure), zone, depth) {
                    found = Some(w.word);
                    break;
                }
            }
        }
        conjugators.push(found.ok_or_else(|| Error::NotFound {
            what: format!("conjugator moving supp f_{i} into an end zone"),
            bound: depth,
        })?);
    }
    let mut word = Word::empty();
    for (&(i, e), h_i) in letters.iter().zip(&conjugators) {
        word = word.mul(&Word::gen_pow(i, -e).conjugate_by(h_i));
    }
    let word = word.mul(g);

    let exponent_sum = word.exponent_sum(n)?;
    let um = word.evaluate(gens)?;
    let test_points = agreement_test_points(&um, &gm, a);
    if exponent_sum.iter().any(|&e| e != 0) || test_points.iter().any(|x| um.eval(x) != gm.eval(x))
    {
        return Err(Error::NotFound {
            what: "agreeing commutator word".into(),
            bound: depth,
        });
    }
    Ok(AgreeWitness {
        word,
        exponent_sum,
        test_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::classify_prechain;
    use crate::constructions::{standard_generators, standard_three_chain};
    use crate::rational::rat;

    fn std3() -> ChainSystem {
        classify_prechain(standard_three_chain()).unwrap()
    }

    fn closed(lo: Rational, hi: Rational) -> ClosedInterval {
        ClosedInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn translation_orbit() {
        let (a, b) = standard_generators();
        let o = orbit(&[a], &int(0), 7).unwrap();
        assert_eq!(o.points, (-3..=3).map(int).collect::<Vec<_>>());
        assert_eq!(o.word_length_bound, 3);
        assert!(!o.frontier_exhausted);
        let fixed = orbit(std::slice::from_ref(&b), &int(-1), 5).unwrap();
        assert_eq!(fixed.points, vec![int(-1)]);
        assert!(fixed.frontier_exhausted);
        assert!(orbit(std::slice::from_ref(&b), &int(-1), 1).unwrap().frontier_exhausted);
        assert!(orbit(&[b], &int(-1), 0).is_err());
    }

    #[test]
    fn chain_orbit_of_one() {
        let gens = standard_three_chain();
        let early = orbit(&gens, &int(1), 5).unwrap();
        assert_eq!(
            early.points,
            vec![rat(1, 2), int(1), rat(3, 2), rat(7, 4), int(2)]
        );
        let o = orbit(&gens, &int(1), 8).unwrap();
        assert_eq!(o.visit_order[7], int(0));
        for p in [int(0), rat(1, 2), rat(3, 2), int(2)] {
            assert!(o.points.contains(&p), "missing {p}");
        }
        for (p, w) in o.visit_order.iter().zip(&o.words) {
            assert_eq!(&w.apply(&gens, &int(1)).unwrap(), p);
        }
        assert_eq!(o.word_for(&int(0)), Some(&Word::new([(0, -1), (1, -1)])));
        assert_eq!(
            orbit(&gens, &int(1), 100).unwrap(),
            orbit(&gens, &int(1), 100).unwrap()
        );
    }

    #[test]
    fn orbit_csv() {
        let (a, _) = standard_generators();
        let csv = orbit(
            &[a.clone()
                .conjugate_by(&PlMap::affine(rat(1, 3), int(0)).unwrap())],
            &int(0),
            3,
        )
        .unwrap()
        .to_csv();
        assert_eq!(
            csv,
            "exact,decimal\n-1/3,-0.333333333333\n0,0\n1/3,0.333333333333\n"
        );
    }

    #[test]
    fn orbit_word_finds_zero() {
        let gens = standard_three_chain();
        assert_eq!(
            orbit_word(&gens, &int(1), &int(0), 2),
            Some(Word::new([(0, -1), (1, -1)]))
        );
        assert_eq!(orbit_word(&gens, &int(1), &int(0), 1), None);
    }

    #[test]
    fn gaps() {
        let (a, _) = standard_generators();
        let o = orbit(&[a], &int(0), 5).unwrap();
        let g = gap_report(&o, &closed(int(0), int(2))).unwrap();
        assert_eq!((g.max_gap, g.gap_location), (int(1), int(0)));
        let single = orbit(&[standard_generators().1], &int(-1), 3).unwrap();
        assert!(matches!(
            gap_report(&single, &closed(int(-1), int(-1))),
            Err(Error::EmptyWindow(_))
        ));
        assert!(gap_report(&o, &closed(int(0), int(5))).is_err());
    }

    #[test]
    fn dense_looking_orbit() {
        let o = orbit(&standard_three_chain(), &int(1), 10_000).unwrap();
        assert_eq!(o.points.len(), 10_000);
        let g = gap_report(&o, &closed(rat(1, 4), rat(7, 4))).unwrap();
        assert!(g.max_gap < rat(1, 8), "max gap {}", g.max_gap);
    }

    #[test]
    fn co_transitivity() {
        let sys = std3();
        let a = [closed(int(0), rat(3, 2))];
        let b = OpenInterval::finite(rat(1, 2), rat(3, 2)).unwrap();
        let w = co_transitivity_witness(&sys, &a, &b, 32).unwrap();
        assert!(w.recheck(sys.generators(), &a, &b).unwrap());
        assert!(w.images.iter().all(|im| im.inside(&b)));

        let inner = [closed(rat(3, 4), int(1))];
        assert!(co_transitivity_witness(&sys, &inner, &b, 4)
            .unwrap()
            .word
            .is_empty());

        let two = classify_prechain(standard_three_chain()[1..].to_vec()).unwrap();
        let far = OpenInterval::finite(int(-5), int(-4)).unwrap();
        assert!(matches!(
            co_transitivity_witness(&two, &[closed(int(1), rat(3, 2))], &far, 8),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn higman_triple() {
        let sys = std3();
        let c = Word::commutator(&Word::gen(0), &Word::gen(1));
        let w = higman_triple_witness(&sys, &c, &c, &c, 32).unwrap();
        assert!(w.s.is_disjoint(&w.moved));

        // t already carries S off itself.
        let (a, _) = standard_generators();
        let bump = PlMap::new(
            vec![(int(0), int(0)), (rat(1, 2), rat(3, 4)), (int(1), int(1))],
            int(1),
            int(1),
        )
        .unwrap();
        let far = ChainSystem::new(vec![bump, a]);
        let w =
            higman_triple_witness(&far, &Word::gen(0), &Word::gen(0), &Word::gen(1), 4).unwrap();
        assert!(w.word.is_empty());

        assert!(matches!(
            higman_triple_witness(&sys, &Word::gen(0), &c, &c, 8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn agree_on_compact() {
        let sys = std3();
        let a = closed(rat(1, 2), rat(3, 2));
        let w = agree_on_compact_in_commutator(&sys, &Word::gen(1), &a, 32).unwrap();
        assert_eq!(w.exponent_sum, vec![0, 0, 0]);
        let (u, f1) = (
            w.word.evaluate(sys.generators()).unwrap(),
            &sys.generators()[1],
        );
        for x in &w.test_points {
            assert_eq!(u.eval(x), f1.eval(x));
        }
        assert!(agree_on_compact_in_commutator(&sys, &Word::empty(), &a, 4)
            .unwrap()
            .word
            .is_empty());
        let g = Word::new([(0, 2), (2, -1), (1, 1)]);
        let w = agree_on_compact_in_commutator(&sys, &g, &closed(int(-1), int(3)), 32).unwrap();
        assert!(w.word.has_zero_exponent_sum());

        let two = classify_prechain(standard_three_chain()[1..].to_vec()).unwrap();
        assert!(matches!(
            agree_on_compact_in_commutator(&two, &Word::gen(0), &closed(int(-1), int(1)), 4),
            Err(Error::Precondition(_))
        ));
    }
}
