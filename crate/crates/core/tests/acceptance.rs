//! One PASS/FAIL line per acceptance criterion, each under its runtime bound.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chaintool_core::blowup::{make_blowup_system, verify_claims, BlowupElement};
use chaintool_core::chain::{
    classify_prechain, higman_thompson_certificate, stabilize, two_chain_f_certificate,
    verify_fn_relators, verify_two_chain_relators, ChainStatus, Target,
};
use chaintool_core::constructions::{
    class_a_membership, embed_compactly_supported, extend_chain, standard_generators,
    standard_three_chain,
};
use chaintool_core::dynamics::{
    agree_on_compact_in_commutator, co_transitivity_witness, higman_triple_witness, ClosedInterval,
};
use chaintool_core::rational::{int, rat};
use chaintool_core::words::{check_relators, lamplighter_translates_disjoint, relators};
use chaintool_core::{ExtPoint, OpenInterval, PlMap, RelatorFamily, Word};
use common::*;
use num_traits::ToPrimitive;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<(), String>;

fn ensure(cond: bool, what: &str) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn interval(lo: ExtPoint, hi: ExtPoint) -> OpenInterval {
    OpenInterval::new(lo, hi).unwrap()
}

fn criterion_1() -> Outcome {
    let (a, b) = standard_generators();
    ensure(a.eval(&int(0)) == int(1), "a(0) = 1")?;
    ensure(b.eval(&rat(1, 2)) == int(1), "b(1/2) = 1")?;
    ensure(b.eval(&int(-3)) == int(-3), "b(-3) = -3")
}

fn criterion_2() -> Outcome {
    let f = standard_three_chain();
    let fin = |n| ExtPoint::Finite(int(n));
    let expected = [
        interval(ExtPoint::NegInf, fin(1)),
        interval(fin(0), fin(2)),
        interval(fin(1), ExtPoint::PosInf),
    ];
    for (g, iv) in f.iter().zip(&expected) {
        ensure(
            g.support().as_single() == Some(iv),
            &format!("support {iv}"),
        )?;
    }
    ensure(
        classify_prechain(f.clone()).map_err(err)?.is_prechain(),
        "prechain",
    )?;
    ensure(f[1].eval(&f[0].eval(&int(0))) == int(1), "f_1 f_0 (0) = 1")?;
    ensure(f[2].eval(&f[1].eval(&int(1))) == int(2), "f_2 f_1 (1) = 2")
}

fn criterion_3() -> Outcome {
    let (a, b) = standard_generators();
    let rels = relators(&RelatorFamily::F).map_err(err)?;
    ensure(
        check_relators(&rels, &[a, b]).map_err(err)?.all_pass(),
        "F relators on (a, b)",
    )?;
    let f = standard_three_chain();
    for i in 0..2 {
        ensure(
            two_chain_f_certificate(&f[i], &f[i + 1])
                .map_err(err)?
                .holds,
            "pair certificate",
        )?;
        let r = verify_two_chain_relators(&f[i], &f[i + 1], 4).map_err(err)?;
        ensure(
            r.relators.all_pass(),
            &format!("two-chain relators on pair {i}"),
        )?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let sys = classify_prechain(standard_three_chain()).map_err(err)?;
    ensure(
        !higman_thompson_certificate(&sys).map_err(err)?.holds,
        "N = 1 fails",
    )?;
    let squared = sys.powered(2).map_err(err)?;
    ensure(
        higman_thompson_certificate(&squared).map_err(err)?.holds,
        "N = 2 holds",
    )?;
    let st = stabilize(&sys, Target::HigmanThompson, 64).map_err(err)?;
    ensure(st.minimal_n() == Some(2), "minimal N = 2")?;
    // Independent orbit evaluation.
    let f = standard_three_chain();
    let once = f[2].eval(&f[1].eval(&f[0].eval(&int(0))));
    let twice = f[2]
        .pow(2)
        .eval(&f[1].pow(2).eval(&f[0].pow(2).eval(&int(0))));
    ensure(
        once < int(2) && twice >= int(2),
        "f_2²f_1²f_0²(0) >= 2 > f_2f_1f_0(0)",
    )?;
    ensure(
        verify_fn_relators(&squared, 6).map_err(err)?.all_pass(),
        "F_3 relators, j <= 6",
    )
}

fn criterion_5() -> Outcome {
    let sys = classify_prechain(standard_three_chain()).map_err(err)?;
    let ext = extend_chain(&sys, 64).map_err(err)?;
    let out = &ext.construction.system;
    ensure(out.len() == 4, "four generators")?;
    let again = classify_prechain(out.generators().to_vec()).map_err(err)?;
    ensure(again.is_prechain(), "prechain")?;
    for w in out.generators().windows(2) {
        ensure(
            two_chain_f_certificate(&w[0], &w[1]).map_err(err)?.holds,
            "consecutive certificate",
        )?;
    }
    ensure(
        ext.history
            .iter()
            .filter(|(_, ok)| *ok)
            .map(|(m, _)| *m)
            .min()
            == Some(ext.m),
        "minimal M",
    )?;
    ensure(
        out.interval(1).lo == sys.interval(1).lo,
        "left endpoints of e and q coincide",
    )?;
    ensure(
        ext.construction
            .provenance_reproduces(sys.generators())
            .map_err(err)?,
        "provenance words reproduce the outputs",
    )
}

fn criterion_6() -> Outcome {
    let (_, b) = standard_generators();
    ensure(class_a_membership(&b).member, "b is in class A")?;
    let mut runner = TestRunner::deterministic();
    let small = bump_in(rat(1, 4), rat(1, 2));
    for _ in 0..50 {
        let g = small.new_tree(&mut runner).map_err(err)?.current();
        ensure(
            class_a_membership(&b.compose(&g)).member,
            &format!("b·g in class A for g = {g}"),
        )?;
    }
    let k1 = bump_in(int(-3), int(1))
        .new_tree(&mut runner)
        .map_err(err)?
        .current();
    let k2 = bump_in(rat(1, 3), int(5))
        .new_tree(&mut runner)
        .map_err(err)?
        .current();
    let e = embed_compactly_supported(&[k1.clone(), k2.clone()]).map_err(err)?;
    let sys = &e.construction.system;
    ensure(sys.len() == 4, "embedding has four generators")?;
    ensure(
        sys.status() >= ChainStatus::ChainCertified,
        "embedding is certified",
    )?;
    ensure(e.verify(&[k1, k2]).map_err(err)?, "recovered inputs")
}

fn criterion_7() -> Outcome {
    let sys = make_blowup_system(int(1)).map_err(err)?;
    let r = verify_claims(&sys).map_err(err)?;
    ensure(r.claim1.holds, "claim 1")?;
    let c2 = &r.claim2.element;
    ensure(
        r.claim2.holds
            && c2.in_kernel()
            && c2.shift().len() == 1
            && c2.shift().values().all(|&k| k == 1),
        "claim 2: one copy of h over the identity",
    )?;
    let w = r.claim3.witness.as_ref().ok_or("claim 3 witness")?;
    ensure(r.claim3.holds, "claim 3")?;
    let expected = BlowupElement::new([(int(1), 1), (int(0), -1)], PlMap::identity());
    ensure(w.element == expected, "(δ_1 − δ_0, id)")?;
    ensure(w.path.len() == 2, "path of length 2")?;
    let f = sys.base().generators();
    let (step, inner) = (w.path.factors()[1], w.path.factors()[0]);
    let mid = f[step.0].pow(step.1).eval(&int(1));
    ensure(
        mid == rat(1, 2) && f[inner.0].pow(inner.1).eval(&mid) == int(0),
        "1 ↦ 1/2 ↦ 0",
    )
}

fn criterion_8() -> Outcome {
    let c = standard_three_chain();
    let f = PlMap::commutator(&c[0], &c[1]);
    let hull = f.support().hull().ok_or("nontrivial commutator")?;
    let (lo, hi) = match (hull.lo.finite(), hull.hi.finite()) {
        (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
        _ => return Err("support is not compact".into()),
    };
    let n = (hi - lo).floor().to_integer().to_i64().ok_or("diameter")? + 1;
    let (a, _) = standard_generators();
    let rels = relators(&RelatorFamily::Lamplighter { n, kmax: 3 }).map_err(err)?;
    ensure(
        check_relators(&rels, &[a.clone(), f.clone()])
            .map_err(err)?
            .all_pass(),
        "relators up to kmax = 3",
    )?;
    ensure(
        lamplighter_translates_disjoint(&a.pow(n), &f),
        "translates of the support are disjoint",
    )
}

fn criterion_9() -> Outcome {
    let sys = classify_prechain(standard_three_chain()).map_err(err)?;
    let a = [ClosedInterval::new(int(0), rat(3, 2)).map_err(err)?];
    let b = OpenInterval::finite(rat(1, 2), rat(3, 2)).ok_or("B")?;
    let w = co_transitivity_witness(&sys, &a, &b, 32).map_err(err)?;
    ensure(
        w.recheck(sys.generators(), &a, &b).map_err(err)?,
        "u(A) ⊆ B",
    )?;

    let c = Word::commutator(&Word::gen(0), &Word::gen(1));
    let h = higman_triple_witness(&sys, &c, &c, &c, 32).map_err(err)?;
    let u = h.word.evaluate(sys.generators()).map_err(err)?;
    let t = c.evaluate(sys.generators()).map_err(err)?;
    let moved = h.s.image(&u).image(&t).image(&u.inverse());
    ensure(h.s.is_disjoint(&moved), "S ∩ u⁻¹tu(S) = ∅")?;

    let window = ClosedInterval::new(rat(1, 2), rat(3, 2)).map_err(err)?;
    let g = Word::gen(1);
    let agree = agree_on_compact_in_commutator(&sys, &g, &window, 32).map_err(err)?;
    ensure(
        agree
            .word
            .exponent_sum(3)
            .map_err(err)?
            .iter()
            .all(|&e| e == 0),
        "zero exponent sum",
    )?;
    let um = agree.word.evaluate(sys.generators()).map_err(err)?;
    let gm = g.evaluate(sys.generators()).map_err(err)?;
    ensure(
        agree.test_points.iter().all(|x| um.eval(x) == gm.eval(x)),
        "agreement with f_1 on A",
    )
}

fn criterion_10() -> Outcome {
    let cases = || {
        TestRunner::new(Config {
            cases: 1000,
            failure_persistence: None,
            ..Config::default()
        })
    };
    let bl = blowup_system();
    cases()
        .run(
            &(pl_map(), pl_map(), pl_map(), small_rational()),
            |(f, g, h, x)| group_laws(&f, &g, &h, &x),
        )
        .map_err(|e| format!("group laws: {e}"))?;
    cases()
        .run(&(pl_map(), pl_map()), |(f, g)| support_equivariance(&f, &g))
        .map_err(|e| format!("support equivariance: {e}"))?;
    cases()
        .run(&(pl_map(), pl_map(), small_rational()), |(f, g, x)| {
            canonical_equality(&f, &g, &x)
        })
        .map_err(|e| format!("canonical equality: {e}"))?;
    cases()
        .run(
            &(
                word(3, 6),
                word(3, 6),
                proptest::collection::vec(pl_map(), 3),
            ),
            |(u, v, m)| word_homomorphism(&u, &v, &m),
        )
        .map_err(|e| format!("word homomorphism: {e}"))?;
    cases()
        .run(
            &(
                word(3, 5),
                word(3, 5),
                word(3, 5),
                small_rational(),
                pl_map(),
            ),
            |(u, v, w, y, m)| blowup_laws(&bl, &u, &v, &w, &y, &m),
        )
        .map_err(|e| format!("blow-up group laws: {e}"))?;
    cases()
        .run(
            &(
                proptest::collection::vec(proptest::bool::ANY, 5),
                small_rational(),
                1usize..60,
            ),
            |(s, x, n)| orbit_determinism(&s, &x, n),
        )
        .map_err(|e| format!("orbit determinism: {e}"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("standard generators", Duration::from_millis(1), criterion_1),
        ("standard 3-chain", Duration::from_millis(10), criterion_2),
        (
            "F relators and two-chain family",
            Duration::from_millis(100),
            criterion_3,
        ),
        (
            "stabilization and F_3 relators",
            Duration::from_secs(1),
            criterion_4,
        ),
        ("chain extension", Duration::from_secs(5), criterion_5),
        ("class A and embedding", Duration::from_secs(5), criterion_6),
        ("blow-up claims", Duration::from_millis(100), criterion_7),
        ("lamplighter", Duration::from_secs(1), criterion_8),
        ("witness machinery", Duration::from_secs(30), criterion_9),
        ("property suites", Duration::from_secs(60), criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= *bound) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {bound:?} bound)"),
            (Err(why), _) => format!("FAIL ({why})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {verdict} [{elapsed:.2?} / {bound:?}]",
            i + 1
        );
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
