//! Constructive procedures producing chain systems.
//!
//! * [`chain_from_class_a`] turns `g_1, …, g_n ∈ 𝒜` (together with the
//!   translation `a`) into an `(n+1)`-chain generating the same group.
//! * [`embed_compactly_supported`] squeezes compactly supported maps into
//!   `(1/4, 1/2)` and feeds `b·g_i` and `b` to the class-𝒜 construction.
//! * [`extend_chain`] turns an `n`-chain into an `(n+1)`-chain generating the
//!   same group.
//!
//! Every output generator comes with a provenance word over the inputs, and
//! every construction re-evaluates its words before returning.

use serde::Serialize;

use crate::chain::{classify_prechain, ChainStatus, ChainSystem};
use crate::error::{Error, Result};
use crate::interval::OpenInterval;
use crate::pl::PlMap;
use crate::rational::{int, rat, serde_rational, ExtPoint, Rational};
use crate::words::Word;

/// `a(x) = x + 1` and `b` (identity on `x <= 0`, `2x` on `(0, 1)`, `x + 1` on `x >= 1`).
pub fn standard_generators() -> (PlMap, PlMap) {
    let a = PlMap::translation(int(1));
    let b = PlMap::new(vec![(int(0), int(0)), (int(1), int(2))], int(1), int(1))
        .expect("b is increasing");
    (a, b)
}

/// `f_0 = b⁻¹a`, `f_1 = a b⁻¹ a⁻¹ b`, `f_2 = a b a⁻¹`: the class-𝒜 chain for `(b, b)`.
pub fn standard_three_chain() -> Vec<PlMap> {
    let (a, b) = standard_generators();
    vec![
        b.inverse().compose(&a),
        a.compose(&b.inverse()).compose(&a.inverse()).compose(&b),
        a.compose(&b).compose(&a.inverse()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassAClause {
    /// `g(x) = x` for `x <= 0`.
    LeftIdentity,
    /// `x < g(x) < x + 1` for `0 < x < 1`.
    Interior,
    /// `g(x) = x + 1` for `x >= 1`.
    RightTranslation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassAViolation {
    pub clause: ClassAClause,
    #[serde(with = "serde_rational")]
    pub point: Rational,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassAReport {
    pub member: bool,
    pub violation: Option<ClassAViolation>,
}

/// Exact membership test for the class 𝒜.
pub fn class_a_membership(g: &PlMap) -> ClassAReport {
    let violation = left_clause(g)
        .or_else(|| interior_clause(g))
        .or_else(|| right_clause(g));
    ClassAReport {
        member: violation.is_none(),
        violation,
    }
}

fn left_clause(g: &PlMap) -> Option<ClassAViolation> {
    let zero = int(0);
    let mut probes: Vec<Rational> = g
        .knots()
        .iter()
        .map(|(x, _)| x.clone())
        .filter(|x| *x <= zero)
        .collect();
    probes.push(zero.clone());
    // Pins down the tail slope once the knots are fixed.
    probes.push(probes.iter().min().expect("nonempty") - int(1));
    probes.into_iter().find_map(|p| {
        let v = g.eval(&p);
        (v != p).then_some(ClassAViolation {
            clause: ClassAClause::LeftIdentity,
            point: p,
            value: v,
        })
    })
}

fn right_clause(g: &PlMap) -> Option<ClassAViolation> {
    let one = int(1);
    let mut probes = vec![one.clone()];
    probes.extend(
        g.knots()
            .iter()
            .map(|(x, _)| x.clone())
            .filter(|x| *x >= one),
    );
    probes.push(probes.iter().max().expect("nonempty") + int(1));
    probes.into_iter().find_map(|p| {
        let v = g.eval(&p);
        (v != &p + int(1)).then_some(ClassAViolation {
            clause: ClassAClause::RightTranslation,
            point: p,
            value: v,
        })
    })
}

// Displacement is affine between consecutive test points, so strict bounds
// at interior knots and midpoints plus weak bounds at 0 and 1 settle the
// whole open interval.
fn interior_clause(g: &PlMap) -> Option<ClassAViolation> {
    let (zero, one) = (int(0), int(1));
    let mut pts = vec![zero.clone()];
    pts.extend(
        g.knots()
            .iter()
            .map(|(x, _)| x.clone())
            .filter(|x| *x > zero && *x < one),
    );
    pts.push(one.clone());
    let mut probes: Vec<(Rational, bool)> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let strict = i != 0 && i != pts.len() - 1;
        probes.push((p.clone(), strict));
        if let Some(q) = pts.get(i + 1) {
            probes.push(((p + q) / int(2), true));
        }
    }
    probes.into_iter().find_map(|(p, strict)| {
        let v = g.eval(&p);
        let d = &v - &p;
        let ok = if strict {
            d > zero && d < one
        } else {
            d >= zero && d <= one
        };
        (!ok).then_some(ClassAViolation {
            clause: ClassAClause::Interior,
            point: p,
            value: v,
        })
    })
}

/// A constructed chain system with one provenance word per generator.
#[derive(Clone, Debug)]
pub struct Construction {
    pub system: ChainSystem,
    /// Names of the letters the provenance words are written in.
    pub alphabet: Vec<String>,
    pub provenance: Vec<Word>,
}

impl Construction {
    /// Re-evaluates every provenance word against `inputs` (in alphabet order).
    pub fn provenance_reproduces(&self, inputs: &[PlMap]) -> Result<bool> {
        for (w, g) in self.provenance.iter().zip(self.system.generators()) {
            if &w.evaluate(inputs)? != g {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Provenance words of the class-𝒜 chain over the alphabet `(g_1, …, g_n, a)`.
pub fn class_a_chain_words(n: usize) -> Vec<Word> {
    let a = n;
    let g = |i: usize| i - 1; // 1-based g_i
    let conj = |i: usize, e: i64, k: i64| Word::gen_pow(g(i), e).conjugate_by(&Word::gen_pow(a, k));
    if n == 0 {
        return Vec::new();
    }
    let mut words = vec![Word::new([(g(1), -1), (a, 1)])];
    for i in 1..n {
        words.push(conj(i + 1, -1, i as i64).mul(&conj(i, 1, i as i64 - 1)));
    }
    words.push(conj(n, 1, n as i64 - 1));
    words
}

/// Words over the chain `f_0, …, f_n` recovering `a` and `g_1, …, g_n`:
/// `a = f_n ⋯ f_0` and `g_i = a^{1-i} (f_n ⋯ f_i) a^{i-1}`.
pub fn class_a_recovery_words(n: usize) -> (Word, Vec<Word>) {
    let tail = |i: usize| Word::new((i..=n).rev().map(|k| (k, 1)));
    let a = tail(0);
    let gs = (1..=n)
        .map(|i| tail(i).conjugate_by(&a.pow(1 - i as i64)))
        .collect();
    (a, gs)
}

/// The `(n+1)`-chain `f_0, …, f_n` built from `g_1, …, g_n ∈ 𝒜`:
/// `f_0 = g_1⁻¹a`, `f_i = (a^i g_{i+1}⁻¹ a^{-i})(a^{i-1} g_i a^{1-i})`,
/// `f_n = a^{n-1} g_n a^{1-n}`.
///
/// Supports are checked to be `(-∞, 1)`, `(i-1, i+1)` and `(n-1, ∞)`, and
/// `f_{i+1} f_i(i) = i + 1` is checked for `1 <= i <= n-1`.
pub fn chain_from_class_a(gs: &[PlMap]) -> Result<Construction> {
    if gs.is_empty() {
        return Err(Error::BadParameters("need at least one class-A map".into()));
    }
    if let Some(i) = gs.iter().position(|g| !class_a_membership(g).member) {
        return Err(Error::NotInClassA(i));
    }
    let n = gs.len();
    let (a, _) = standard_generators();
    let mut alphabet_maps = gs.to_vec();
    alphabet_maps.push(a);
    let words = class_a_chain_words(n);
    let maps = words
        .iter()
        .map(|w| w.evaluate(&alphabet_maps))
        .collect::<Result<Vec<_>>>()?;

    for (i, f) in maps.iter().enumerate() {
        let lo = if i == 0 {
            ExtPoint::NegInf
        } else {
            ExtPoint::Finite(int(i as i64 - 1))
        };
        let hi = if i == n {
            ExtPoint::PosInf
        } else {
            ExtPoint::Finite(int(i as i64 + 1))
        };
        let expected = OpenInterval::new(lo, hi).expect("nonempty");
        if f.support().as_single() != Some(&expected) {
            return Err(Error::NotCertified(format!(
                "support of f_{i} is {}, expected {expected}",
                f.support()
            )));
        }
    }
    for i in 1..n {
        let x = int(i as i64);
        let y = maps[i + 1].eval(&maps[i].eval(&x));
        if y != int(i as i64 + 1) {
            return Err(Error::NotCertified(format!(
                "f_{}f_{i}({i}) = {y}, expected {}",
                i + 1,
                i + 1
            )));
        }
    }
    let system = classify_prechain(maps)?.certify()?.system;
    if system.status() < ChainStatus::ChainCertified {
        return Err(Error::NotCertified(format!(
            "class-A chain failed certification: {:?}",
            system.diagnostic()
        )));
    }
    let mut alphabet: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
    alphabet.push("a".into());
    Ok(Construction {
        system,
        alphabet,
        provenance: words,
    })
}

/// Result of [`embed_compactly_supported`].
#[derive(Clone, Debug)]
pub struct Embedding {
    /// The `(n+2)`-chain; provenance is over `(g_1', …, g_n', b, a)` where
    /// `g_i' = c g_i c⁻¹`.
    pub construction: Construction,
    /// The affine squeeze `c` carrying the supports into `(1/4, 1/2)`.
    pub squeeze: PlMap,
    /// Words over the output chain evaluating to `c g_i c⁻¹`.
    pub recovered: Vec<Word>,
}

impl Embedding {
    /// Checks that each recovered word evaluates to the conjugated input.
    pub fn verify(&self, gens: &[PlMap]) -> Result<bool> {
        let chain = self.construction.system.generators();
        for (w, g) in self.recovered.iter().zip(gens) {
            if w.evaluate(chain)? != g.conjugate_by(&self.squeeze) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Embeds `⟨gens⟩` (all with bounded support) into an `(n+2)`-chain group.
pub fn embed_compactly_supported(gens: &[PlMap]) -> Result<Embedding> {
    let supports: Vec<_> = gens.iter().map(PlMap::support).collect();
    if let Some(i) = supports.iter().position(|s| !s.is_bounded()) {
        return Err(Error::UnboundedSupport(i));
    }
    let lo = supports.iter().filter_map(|s| s.hull()).map(|h| h.lo).min();
    let hi = supports.iter().filter_map(|s| s.hull()).map(|h| h.hi).max();
    let squeeze = match (lo, hi) {
        (Some(ExtPoint::Finite(lo)), Some(ExtPoint::Finite(hi))) => {
            // [lo, hi] onto [1/4, 1/2]
            let slope = rat(1, 4) / (&hi - &lo);
            let intercept = rat(1, 4) - &slope * &lo;
            PlMap::affine(slope, intercept)?
        }
        _ => PlMap::identity(),
    };
    let (_, b) = standard_generators();
    let squeezed: Vec<PlMap> = gens.iter().map(|g| g.conjugate_by(&squeeze)).collect();
    let mut class_a: Vec<PlMap> = squeezed.iter().map(|g| b.compose(g)).collect();
    class_a.push(b.clone());
    let inner = chain_from_class_a(&class_a)?;

    // Rewrite provenance from (b·g_1', …, b·g_n', b, a) to (g_1', …, g_n', b, a).
    let n = gens.len();
    let images: Vec<Word> = (0..n)
        .map(|i| Word::new([(n, 1), (i, 1)]))
        .chain([Word::gen(n), Word::gen(n + 1)])
        .collect();
    let provenance = inner
        .provenance
        .iter()
        .map(|w| w.substitute(&images))
        .collect::<Result<Vec<_>>>()?;
    let mut alphabet: Vec<String> = (1..=n).map(|i| format!("c·g{i}·c⁻¹")).collect();
    alphabet.extend(["b".to_string(), "a".to_string()]);

    // g_i' = b⁻¹ (b g_i') over the output chain.
    let (_, class_a_words) = class_a_recovery_words(n + 1);
    let b_word = class_a_words[n].clone();
    let recovered = (0..n)
        .map(|i| b_word.inverse().mul(&class_a_words[i]))
        .collect();

    let embedding = Embedding {
        construction: Construction {
            system: inner.system,
            alphabet,
            provenance,
        },
        squeeze,
        recovered,
    };
    if !embedding.verify(gens)? {
        return Err(Error::NotCertified(
            "recovered words do not reproduce the inputs".into(),
        ));
    }
    Ok(embedding)
}

/// Result of [`extend_chain`].
#[derive(Clone, Debug)]
pub struct Extension {
    /// Provenance is over the input generators.
    pub construction: Construction,
    pub m: u64,
    /// Exponents tried, in order, with whether the candidate certified.
    pub history: Vec<(u64, bool)>,
}

/// Provenance words for `(f_1, …, f_{n-3}, d, e, f^M, r)` with
/// `p, q, r = f_{n-2}, f_{n-1}, f_n`, `d = q^{-M} p q^M`,
/// `f = (pr)^M q (pr)^{-M}` and `e = f^{-M} q f^M`.
pub fn extension_words(n: usize, m: i64) -> Vec<Word> {
    let (p, q, r) = (n - 3, n - 2, n - 1);
    let pr = Word::new([(p, 1), (r, 1)]);
    let d = Word::gen(p).conjugate_by(&Word::gen_pow(q, -m));
    let f = Word::gen(q).conjugate_by(&pr.pow(m));
    let e = Word::gen(q).conjugate_by(&f.pow(-m));
    let mut words: Vec<Word> = (0..n - 3).map(Word::gen).collect();
    words.extend([d, e, f.pow(m), Word::gen(r)]);
    words
}

/// Rewrites an `n`-chain (`n >= 3`) as an `(n+1)`-chain generating the same
/// group, using the smallest `M <= m_max` for which the result certifies.
pub fn extend_chain(sys: &ChainSystem, m_max: u64) -> Result<Extension> {
    extend_chain_bounded(sys, m_max, None)
}

pub fn extend_chain_bounded(
    sys: &ChainSystem,
    m_max: u64,
    height_limit: Option<u64>,
) -> Result<Extension> {
    let n = sys.len();
    if n < 3 {
        return Err(Error::TooFewGenerators { needed: 3, got: n });
    }
    let certified = sys.certify()?.system;
    if certified.status() < ChainStatus::ChainCertified {
        return Err(Error::NotCertified("input is not a certified chain".into()));
    }
    let q_left = certified.interval(n - 2).lo.clone();
    let mut history = Vec::new();
    for m in 1..=m_max {
        let words = extension_words(n, m as i64);
        let maps = words
            .iter()
            .map(|w| w.evaluate(certified.generators()))
            .collect::<Result<Vec<_>>>()?;
        for g in &maps {
            g.check_height(height_limit)?;
        }
        let candidate = classify_prechain(maps)?;
        let ok = candidate.is_prechain() && {
            let cert = candidate.certify()?;
            let e_left = &cert.system.interval(n - 2).lo;
            if cert.system.status() >= ChainStatus::ChainCertified && *e_left == q_left {
                history.push((m, true));
                let mut alphabet: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();
                alphabet.truncate(n);
                let construction = Construction {
                    system: cert.system,
                    alphabet,
                    provenance: words,
                };
                if !construction.provenance_reproduces(certified.generators())? {
                    return Err(Error::NotCertified(
                        "provenance words do not reproduce".into(),
                    ));
                }
                return Ok(Extension {
                    construction,
                    m,
                    history,
                });
            }
            false
        };
        history.push((m, ok));
    }
    Err(Error::NotFound {
        what: "chain extension exponent M".into(),
        bound: m_max,
    })
}
