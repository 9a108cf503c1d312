//! One function per subcommand. Each returns the human-readable text, the
//! structured result, and whether every requested check passed.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chaintool_core::blowup::{make_blowup_system, verify_claims};
use chaintool_core::chain::{
    classify_prechain, stabilize_bounded, verify_fn_relators, verify_two_chain_relators,
    CertResult, CertWitness, ChainStatus, ChainSystem, StabilizationOutcome, Target,
};
use chaintool_core::constructions::{
    embed_compactly_supported, extend_chain_bounded, standard_generators,
};
use chaintool_core::dynamics::{
    agree_on_compact_in_commutator, co_transitivity_witness, gap_report, higman_triple_witness,
    orbit,
};
use chaintool_core::rational::{parse_rational, to_decimal};
use chaintool_core::words::{
    check_relators, lamplighter_translates_disjoint, relators, RelatorReport,
};
use chaintool_core::{PlMap, RelatorFamily};
use serde_json::{json, Value};

use crate::files::{self, parse_closed, parse_open, parse_word, Loaded, Provenance};
use crate::svg;

pub struct Outcome {
    pub passed: bool,
    pub text: String,
    pub result: Value,
}

/// Every input file read, in order, for the report digest.
#[derive(Default)]
pub struct Inputs(pub Vec<Vec<u8>>);

impl Inputs {
    pub fn load(&mut self, path: &Path) -> Result<Loaded> {
        let loaded = files::load(path)?;
        self.0.push(loaded.bytes.clone());
        Ok(loaded)
    }

    fn system(&mut self, path: &Path) -> Result<ChainSystem> {
        let loaded = self.load(path)?;
        Ok(classify_prechain(loaded.generators)?)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn describe_cert(c: &CertResult) -> String {
    match &c.witness {
        CertWitness::TwoChain { y, gf_y, z, .. } => {
            format!("g f({y}) = {gf_y} vs z = {z} ({})", if c.holds { "holds" } else { "fails" })
        }
        CertWitness::HigmanThompson { source_lo, source_hi, image_lo, image_hi, target_lo, target_hi } => format!(
            "({source_lo}, {source_hi}] ↦ ({image_lo}, {image_hi}] vs [{target_lo}, {target_hi}) ({})",
            if c.holds { "meets" } else { "misses" }
        ),
    }
}

fn relator_summary(r: &RelatorReport) -> String {
    let ok = r.checks.iter().filter(|c| c.holds).count();
    let mut s = format!("{ok}/{} hold", r.checks.len());
    if let Some(bad) = r.failures().next() {
        let [x, y] = bad.witness.clone().unwrap_or_default();
        let _ = write!(s, "; first failure {} moves {x} to {y}", bad.relator);
    }
    s
}

pub fn verify(inputs: &mut Inputs, path: &Path, require_fn: bool, bound: usize) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    let mut text = String::new();
    let supports: Vec<String> = sys.supports().iter().map(|s| s.to_string()).collect();
    writeln!(text, "generators: {}", sys.len())?;
    writeln!(text, "supports: {}", supports.join(" "))?;
    if !sys.is_prechain() {
        let why = sys.diagnostic().unwrap_or("unknown");
        writeln!(
            text,
            "prechain: no ({why}); chain-certified: no; F_n-certified: no"
        )?;
        let result =
            json!({ "status": sys.status(), "diagnostic": why, "supports": sys.supports() });
        return Ok(Outcome {
            passed: false,
            text,
            result,
        });
    }
    let cert = sys.certify()?;
    let status = cert.system.status();
    let chain = status >= ChainStatus::ChainCertified;
    let ht = cert.higman_thompson.holds;
    let fn_report = if ht {
        Some(verify_fn_relators(&cert.system, bound.max(sys.len()))?)
    } else {
        None
    };
    let fn_ok = fn_report.as_ref().is_some_and(|r| r.all_pass());
    let fn_label = if fn_ok {
        format!("yes (n={})", sys.len())
    } else {
        "no".into()
    };
    writeln!(
        text,
        "prechain: yes; chain-certified: {}; F_n-certified: {fn_label}",
        yes(chain)
    )?;
    for (i, c) in cert.pairs.iter().enumerate() {
        writeln!(text, "pair f{i}, f{}: {}", i + 1, describe_cert(c))?;
    }
    writeln!(
        text,
        "F_n criterion: {}",
        describe_cert(&cert.higman_thompson)
    )?;
    if let Some(r) = &fn_report {
        writeln!(
            text,
            "F_{} relators (j <= {}): {}",
            sys.len(),
            bound.max(sys.len()),
            relator_summary(r)
        )?;
    }
    let mut germs = Vec::new();
    for (i, g) in sys.generators().iter().enumerate() {
        let d = g.germs();
        writeln!(
            text,
            "germs f{i}: left {}, right {}",
            d.left_tail, d.right_tail
        )?;
        germs.push(json!({
            "left": { "slope": d.left_tail.slope.to_string(), "intercept": d.left_tail.intercept.to_string() },
            "right": { "slope": d.right_tail.slope.to_string(), "intercept": d.right_tail.intercept.to_string() },
        }));
    }
    let result = json!({
        "status": status,
        "prechain": true,
        "chain_certified": chain,
        "fn_certified": fn_ok,
        "supports": sys.supports(),
        "pairs": cert.pairs,
        "higman_thompson": cert.higman_thompson,
        "fn_relators": fn_report,
        "germs": germs,
    });
    Ok(Outcome {
        passed: chain && (!require_fn || fn_ok),
        text,
        result,
    })
}

pub fn stabilize(
    inputs: &mut Inputs,
    path: &Path,
    target: Target,
    max_n: u64,
    out: Option<PathBuf>,
    limit: Option<u64>,
) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    let st = stabilize_bounded(&sys, target, max_n, limit)?;
    let history: Vec<Value> = st
        .history
        .iter()
        .map(|(n, ok)| json!({ "n": n, "holds": ok }))
        .collect();
    let n = match st.outcome {
        StabilizationOutcome::Found { n } => n,
        StabilizationOutcome::NotFound { n_max } => {
            bail!("not found: no exponent N <= {n_max} passes")
        }
    };
    let system = st.system.as_ref().context("stabilized system")?;
    let out = out.unwrap_or_else(|| files::sibling(path, &format!("pow{n}")));
    files::write_system(&out, system.generators(), None)?;
    let text = format!(
        "minimal N: {n}\nholds at N+1: {}\nwrote {}\n",
        yes(st.holds_at_next == Some(true)),
        out.display()
    );
    let result = json!({
        "target": target,
        "minimal_n": n,
        "history": history,
        "holds_at_next": st.holds_at_next,
        "output": out.display().to_string(),
    });
    Ok(Outcome {
        passed: true,
        text,
        result,
    })
}

pub fn extend(
    inputs: &mut Inputs,
    path: &Path,
    max_m: u64,
    out: Option<PathBuf>,
    limit: Option<u64>,
) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    if sys.len() < 3 {
        bail!(
            "too few generators: extension needs at least 3, got {}; build a chain from class-A maps instead (see `embed`)",
            sys.len()
        );
    }
    let ext = extend_chain_bounded(&sys, max_m, limit)?;
    let c = &ext.construction;
    let out = out.unwrap_or_else(|| files::sibling(path, "extended"));
    let provenance = Provenance {
        alphabet: c.alphabet.clone(),
        words: c.provenance.clone(),
    };
    files::write_system(&out, c.system.generators(), Some(provenance))?;
    let mut text = format!("M: {}\ngenerators: {}\n", ext.m, c.system.len());
    for (i, w) in c.provenance.iter().enumerate() {
        writeln!(text, "f{i}' = {w}")?;
    }
    writeln!(text, "wrote {}", out.display())?;
    let result = json!({
        "m": ext.m,
        "history": ext.history.iter().map(|(m, ok)| json!({ "m": m, "holds": ok })).collect::<Vec<_>>(),
        "status": c.system.status(),
        "alphabet": c.alphabet,
        "provenance": c.provenance,
        "generators": c.system.generators(),
        "output": out.display().to_string(),
    });
    Ok(Outcome {
        passed: true,
        text,
        result,
    })
}

pub fn embed(inputs: &mut Inputs, paths: &[PathBuf], out: Option<PathBuf>) -> Result<Outcome> {
    let mut gens = Vec::new();
    for p in paths {
        gens.extend(inputs.load(p)?.generators);
    }
    let e = embed_compactly_supported(&gens)?;
    let c = &e.construction;
    let first = paths.first().context("at least one input file")?;
    let out = out.unwrap_or_else(|| files::sibling(first, "embedded"));
    let provenance = Provenance {
        alphabet: c.alphabet.clone(),
        words: c.provenance.clone(),
    };
    files::write_system(&out, c.system.generators(), Some(provenance))?;
    let certified = c.system.status() >= ChainStatus::ChainCertified;
    let recovered = e.verify(&gens)?;
    let mut text = format!(
        "squeeze: {}\ngenerators: {}\nchain-certified: {}\n",
        e.squeeze,
        c.system.len(),
        yes(certified)
    );
    for (i, w) in e.recovered.iter().enumerate() {
        writeln!(text, "input {i} (squeezed) = {w}")?;
    }
    writeln!(
        text,
        "recovered inputs: {}\nwrote {}",
        yes(recovered),
        out.display()
    )?;
    let result = json!({
        "squeeze": e.squeeze,
        "status": c.system.status(),
        "alphabet": c.alphabet,
        "provenance": c.provenance,
        "recovered": e.recovered,
        "generators": c.system.generators(),
        "output": out.display().to_string(),
    });
    Ok(Outcome {
        passed: certified && recovered,
        text,
        result,
    })
}

pub fn blowup(marked: &str, claims: bool) -> Result<Outcome> {
    let sys = make_blowup_system(parse_rational(marked)?)?;
    let mut text = String::new();
    for (i, g) in sys.generators().iter().enumerate() {
        writeln!(text, "g{i} = {g}")?;
    }
    if !claims {
        let result = json!({ "marked_point": marked, "generators": sys.generators() });
        return Ok(Outcome {
            passed: true,
            text,
            result,
        });
    }
    let r = verify_claims(&sys)?;
    writeln!(
        text,
        "claim 1: {} (base system {})",
        pass(r.claim1.holds),
        serde_json::to_value(r.claim1.status)?
            .as_str()
            .unwrap_or("?")
    )?;
    writeln!(
        text,
        "claim 2: {} ({} = {})",
        pass(r.claim2.holds),
        r.claim2.word,
        r.claim2.element
    )?;
    match &r.claim3.witness {
        Some(w) => writeln!(
            text,
            "claim 3: {} ([h, w] = {} with w = {})",
            pass(r.claim3.holds),
            w.element,
            w.path
        )?,
        None => writeln!(text, "claim 3: FAIL (no witness)")?,
    }
    Ok(Outcome {
        passed: r.all_hold(),
        text,
        result: serde_json::to_value(&r)?,
    })
}

pub fn orbit_cmd(
    inputs: &mut Inputs,
    path: &Path,
    point: &str,
    budget: usize,
    csv: Option<PathBuf>,
    window: Option<String>,
) -> Result<Outcome> {
    let gens = inputs.load(path)?.generators;
    let o = orbit(&gens, &parse_rational(point)?, budget)?;
    let body = o.to_csv();
    let mut text = String::new();
    match &csv {
        Some(p) => {
            fs::write(p, &body).with_context(|| format!("cannot write {}", p.display()))?;
            writeln!(
                text,
                "points: {}\nword length bound: {}\nfrontier exhausted: {}\nwrote {}",
                o.points.len(),
                o.word_length_bound,
                yes(o.frontier_exhausted),
                p.display()
            )?;
        }
        None => text.push_str(&body),
    }
    let gaps = match window {
        Some(w) => {
            let g = gap_report(&o, &parse_closed(&w)?)?;
            let line = format!(
                "max gap in [{}, {}]: {} (≈{}) at {} [heuristic]",
                g.window.lo,
                g.window.hi,
                g.max_gap,
                to_decimal(&g.max_gap, 12),
                g.gap_location
            );
            if csv.is_some() {
                writeln!(text, "{line}")?;
            } else {
                eprintln!("{line}");
            }
            Some(g)
        }
        None => None,
    };
    let result = json!({
        "base_point": o.base_point.to_string(),
        "points": o.points.len(),
        "word_length_bound": o.word_length_bound,
        "frontier_exhausted": o.frontier_exhausted,
        "gap": gaps,
        "csv": csv.map(|p| p.display().to_string()),
    });
    Ok(Outcome {
        passed: true,
        text,
        result,
    })
}

pub fn co_trans(
    inputs: &mut Inputs,
    path: &Path,
    a: &[String],
    b: &str,
    depth: u64,
) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    let a = a
        .iter()
        .map(|s| parse_closed(s))
        .collect::<Result<Vec<_>>>()?;
    let b = parse_open(b)?;
    let w = co_transitivity_witness(&sys, &a, &b, depth)?;
    let ok = w.recheck(sys.generators(), &a, &b)?;
    let mut text = format!("u = {}\n", w.word);
    for (src, im) in a.iter().zip(&w.images) {
        writeln!(
            text,
            "u[{}, {}] = [{}, {}] ⊆ {b}",
            src.lo, src.hi, im.lo, im.hi
        )?;
    }
    writeln!(text, "recheck: {}", pass(ok))?;
    Ok(Outcome {
        passed: ok,
        text,
        result: serde_json::to_value(&w)?,
    })
}

pub fn higman(
    inputs: &mut Inputs,
    path: &Path,
    r: &str,
    s: &str,
    t: &str,
    depth: u64,
) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    let (r, s, t) = (parse_word(r)?, parse_word(s)?, parse_word(t)?);
    let w = higman_triple_witness(&sys, &r, &s, &t, depth)?;
    let u = w.word.evaluate(sys.generators())?;
    let tm = t.evaluate(sys.generators())?;
    let ok =
        w.s.is_disjoint(&w.s.image(&u).image(&tm).image(&u.inverse()));
    let text = format!(
        "u = {}\nS = {}\nu⁻¹tu(S) = {}\ndisjoint: {}\n",
        w.word,
        w.s,
        w.moved,
        pass(ok)
    );
    Ok(Outcome {
        passed: ok,
        text,
        result: serde_json::to_value(&w)?,
    })
}

pub fn agree(inputs: &mut Inputs, path: &Path, g: &str, a: &str, depth: u64) -> Result<Outcome> {
    let sys = inputs.system(path)?;
    let g = parse_word(g)?;
    let a = parse_closed(a)?;
    let w = agree_on_compact_in_commutator(&sys, &g, &a, depth)?;
    let (um, gm) = (
        w.word.evaluate(sys.generators())?,
        g.evaluate(sys.generators())?,
    );
    let ok = w.exponent_sum.iter().all(|&e| e == 0)
        && w.test_points.iter().all(|x| um.eval(x) == gm.eval(x));
    let text = format!(
        "u = {}\nexponent sum: {:?}\nagrees with g at {} test points of [{}, {}]: {}\n",
        w.word,
        w.exponent_sum,
        w.test_points.len(),
        a.lo,
        a.hi,
        pass(ok)
    );
    Ok(Outcome {
        passed: ok,
        text,
        result: serde_json::to_value(&w)?,
    })
}

fn relator_outcome(label: &str, report: RelatorReport, extra: Value) -> Result<Outcome> {
    let text = format!("{label}: {}\n", relator_summary(&report));
    let passed = report.all_pass();
    Ok(Outcome {
        passed,
        text,
        result: json!({ "relators": report, "extra": extra }),
    })
}

pub fn relators_f(inputs: &mut Inputs, path: Option<&Path>) -> Result<Outcome> {
    let pair = match path {
        Some(p) => inputs.load(p)?.generators,
        None => {
            let (a, b) = standard_generators();
            vec![a, b]
        }
    };
    if pair.len() != 2 {
        bail!(
            "the F relators need exactly two maps (a, b), got {}",
            pair.len()
        );
    }
    relator_outcome(
        "F relators",
        check_relators(&relators(&RelatorFamily::F)?, &pair)?,
        Value::Null,
    )
}

pub fn relators_fn(inputs: &mut Inputs, path: &Path, bound: usize) -> Result<Outcome> {
    let sys = inputs.system(path)?.certify()?.system;
    let report = verify_fn_relators(&sys, bound)?;
    relator_outcome(
        &format!("F_{} relators (j <= {bound})", sys.len()),
        report,
        Value::Null,
    )
}

pub fn relators_lamplighter(
    inputs: &mut Inputs,
    path: &Path,
    n: i64,
    kmax: usize,
) -> Result<Outcome> {
    let pair = inputs.load(path)?.generators;
    let [x, y]: [PlMap; 2] = pair
        .try_into()
        .map_err(|v: Vec<PlMap>| anyhow::anyhow!("expected two maps (x, y), got {}", v.len()))?;
    let report = check_relators(
        &relators(&RelatorFamily::Lamplighter { n, kmax })?,
        &[x.clone(), y.clone()],
    )?;
    let all_k = lamplighter_translates_disjoint(&x.pow(n), &y);
    let mut out = relator_outcome(
        &format!("lamplighter relators (N = {n}, k <= {kmax})"),
        report,
        json!({ "all_k": all_k }),
    )?;
    writeln!(
        out.text,
        "translates of supp y disjoint (all k): {}",
        yes(all_k)
    )?;
    Ok(out)
}

pub fn relators_two_chain(inputs: &mut Inputs, path: &Path, kmax: u32) -> Result<Outcome> {
    let gens = inputs.load(path)?.generators;
    if gens.len() < 2 {
        bail!("need at least two maps");
    }
    let mut text = String::new();
    let mut passed = true;
    let mut reports = Vec::new();
    for (i, w) in gens.windows(2).enumerate() {
        let r = verify_two_chain_relators(&w[0], &w[1], kmax)?;
        passed &= r.all_pass();
        writeln!(
            text,
            "pair f{i}, f{}: {}; supports disjoint: {}",
            i + 1,
            relator_summary(&r.relators),
            yes(r.disjoint.iter().all(|&d| d))
        )?;
        reports.push(r);
    }
    Ok(Outcome {
        passed,
        text,
        result: json!({ "pairs": reports }),
    })
}

pub fn plot(inputs: &mut Inputs, path: &Path, out: &Path, graphs: bool) -> Result<Outcome> {
    let loaded = inputs.load(path)?;
    if loaded.generators.is_empty() {
        bail!("nothing to plot: the generator list is empty");
    }
    let svg = svg::render(&loaded.generators, graphs || loaded.single_map);
    fs::write(out, &svg).with_context(|| format!("cannot write {}", out.display()))?;
    let text = format!(
        "wrote {} ({} maps)\n",
        out.display(),
        loaded.generators.len()
    );
    Ok(Outcome {
        passed: true,
        text,
        result: json!({ "output": out.display().to_string(), "bytes": svg.len() }),
    })
}
