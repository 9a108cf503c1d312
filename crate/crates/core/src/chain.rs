//! Prechain classification and the dynamical certificates for chain groups.
//!
//! A prechain system is an ordered list `f_1, …, f_n` of maps whose supports
//! are single intervals forming a chain, with strictly increasing left
//! endpoints and every `f_i` moving points to the right. Two sufficient
//! criteria upgrade it:
//!
//! * each consecutive pair satisfies `g f(y) >= z` where `supp f = (x, z)` and
//!   `supp g = (y, w)`, so each pair generates a copy of `F`;
//! * the image of `supp f_1 ∖ supp f_2` under `f_n ⋯ f_1` meets
//!   `supp f_n ∖ supp f_{n-1}`, so the whole group is `F_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{IntervalSet, OpenInterval};
use crate::pl::PlMap;
use crate::rational::{serde_rational, ExtPoint, Rational};
use crate::words::{check_relators, relators, RelatorFamily, RelatorReport, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainStatus {
    Unclassified,
    Prechain,
    ChainCertified,
    HigmanThompsonCertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Chain,
    HigmanThompson,
}

/// An ordered generator list with cached supports and a classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSystem {
    generators: Vec<PlMap>,
    supports: Vec<IntervalSet>,
    status: ChainStatus,
    diagnostic: Option<String>,
}

impl ChainSystem {
    /// An unclassified system.
    pub fn new(generators: Vec<PlMap>) -> Self {
        let supports = generators.iter().map(PlMap::support).collect();
        ChainSystem {
            generators,
            supports,
            status: ChainStatus::Unclassified,
            diagnostic: None,
        }
    }

    pub fn generators(&self) -> &[PlMap] {
        &self.generators
    }

    pub fn supports(&self) -> &[IntervalSet] {
        &self.supports
    }

    pub fn status(&self) -> ChainStatus {
        self.status
    }

    /// Why classification failed, if it did.
    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_prechain(&self) -> bool {
        self.status >= ChainStatus::Prechain
    }

    /// The single-interval support of generator `i`. Only valid on prechains.
    pub fn interval(&self, i: usize) -> &OpenInterval {
        self.supports[i]
            .as_single()
            .expect("prechain supports are single intervals")
    }

    /// Replaces each generator by its `n`-th power and reclassifies.
    pub fn powered(&self, n: i64) -> Result<ChainSystem> {
        classify_prechain(self.generators.iter().map(|g| g.pow(n)).collect())
    }

    fn require_prechain(&self) -> Result<()> {
        if self.is_prechain() {
            Ok(())
        } else {
            Err(Error::NotPrechain(
                self.diagnostic
                    .clone()
                    .unwrap_or_else(|| "system was not classified".into()),
            ))
        }
    }

    /// Runs every certificate and records the strongest status reached.
    pub fn certify(&self) -> Result<Certification> {
        self.require_prechain()?;
        let pairs = (0..self.len() - 1)
            .map(|i| two_chain_f_certificate(&self.generators[i], &self.generators[i + 1]))
            .collect::<Result<Vec<_>>>()?;
        let higman_thompson = higman_thompson_certificate(self)?;
        let chain = pairs.iter().all(|c| c.holds);
        let status = match (chain, higman_thompson.holds) {
            (true, true) => ChainStatus::HigmanThompsonCertified,
            (true, false) => ChainStatus::ChainCertified,
            _ => ChainStatus::Prechain,
        };
        let mut system = self.clone();
        system.status = status;
        Ok(Certification {
            system,
            pairs,
            higman_thompson,
        })
    }
}

/// Result of [`ChainSystem::certify`].
#[derive(Clone, Debug)]
pub struct Certification {
    pub system: ChainSystem,
    pub pairs: Vec<CertResult>,
    pub higman_thompson: CertResult,
}

/// The exact inequality instance a certificate was decided on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertWitness {
    /// `g(f(y))` compared with `z`.
    TwoChain {
        #[serde(with = "serde_rational")]
        y: Rational,
        #[serde(with = "serde_rational")]
        f_y: Rational,
        #[serde(with = "serde_rational")]
        gf_y: Rational,
        #[serde(with = "serde_rational")]
        z: Rational,
    },
    /// Image `(image_lo, image_hi]` of `(source_lo, source_hi]` under
    /// `f_n ⋯ f_1`, compared with `[target_lo, target_hi)`.
    HigmanThompson {
        source_lo: ExtPoint,
        #[serde(with = "serde_rational")]
        source_hi: Rational,
        image_lo: ExtPoint,
        #[serde(with = "serde_rational")]
        image_hi: Rational,
        #[serde(with = "serde_rational")]
        target_lo: Rational,
        target_hi: ExtPoint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertResult {
    pub holds: bool,
    pub witness: CertWitness,
}

impl CertResult {
    /// Re-evaluates the witness against `gens` (the pair `[f, g]` for a
    /// two-chain certificate, the whole system otherwise).
    pub fn recheck(&self, gens: &[PlMap]) -> bool {
        match &self.witness {
            CertWitness::TwoChain { y, f_y, gf_y, z } => {
                let [f, g] = gens else { return false };
                let fy = f.eval(y);
                let gfy = g.eval(&fy);
                &fy == f_y && &gfy == gf_y && (gfy >= *z) == self.holds
            }
            CertWitness::HigmanThompson {
                source_lo,
                source_hi,
                image_lo,
                image_hi,
                target_lo,
                target_hi,
            } => {
                let lo = gens.iter().fold(source_lo.clone(), |p, g| g.eval_ext(&p));
                let hi = gens.iter().fold(source_hi.clone(), |p, g| g.eval(&p));
                &lo == image_lo
                    && &hi == image_hi
                    && closures_meet(&lo, &hi, target_lo, target_hi) == self.holds
            }
        }
    }
}

// [lo, hi] ∩ [target_lo, target_hi] ≠ ∅
fn closures_meet(lo: &ExtPoint, hi: &Rational, target_lo: &Rational, target_hi: &ExtPoint) -> bool {
    let left = lo.clone().max(ExtPoint::Finite(target_lo.clone()));
    let right = target_hi.clone().min(ExtPoint::Finite(hi.clone()));
    left <= right
}

/// Checks that a list of single intervals is a chain: only consecutive
/// members meet, and each consecutive intersection is a proper nonempty
/// subinterval of both.
pub fn is_chain_of_intervals(sets: &[IntervalSet]) -> Result<bool> {
    let ivs = sets
        .iter()
        .enumerate()
        .map(|(i, s)| s.as_single().ok_or(Error::NotSingleInterval(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(chain_violation(&ivs).is_none())
}

fn chain_violation(ivs: &[&OpenInterval]) -> Option<String> {
    for i in 0..ivs.len() {
        for k in (i + 2)..ivs.len() {
            if ivs[i].intersect(ivs[k]).is_some() {
                return Some(format!("supports {i} and {k} intersect"));
            }
        }
    }
    for i in 0..ivs.len().saturating_sub(1) {
        let (a, b) = (ivs[i], ivs[i + 1]);
        match a.intersect(b) {
            None => return Some(format!("supports {i} and {} do not intersect", i + 1)),
            Some(c) if &c == a || &c == b => {
                return Some(format!(
                    "intersection of supports {i} and {} is not proper in both",
                    i + 1
                ))
            }
            Some(_) => {}
        }
    }
    None
}

/// Classifies `maps` against the prechain conditions. On failure the
/// returned system is unclassified and carries the first violated condition.
pub fn classify_prechain(maps: Vec<PlMap>) -> Result<ChainSystem> {
    if maps.len() < 2 {
        return Err(Error::FewerThanTwoGenerators);
    }
    let mut sys = ChainSystem::new(maps);
    match prechain_violation(&sys) {
        Some(why) => sys.diagnostic = Some(why),
        None => sys.status = ChainStatus::Prechain,
    }
    Ok(sys)
}

fn prechain_violation(sys: &ChainSystem) -> Option<String> {
    let mut ivs = Vec::with_capacity(sys.len());
    for (i, s) in sys.supports.iter().enumerate() {
        match s.as_single() {
            Some(iv) => ivs.push(iv),
            None if s.is_empty() => return Some(format!("generator {i} is the identity")),
            None => {
                return Some(format!(
                    "support of generator {i} has {} components",
                    s.len()
                ))
            }
        }
    }
    if let Some(i) = sys.generators.iter().position(|g| !g.moves_right()) {
        return Some(format!(
            "generator {i} does not move every point to the right"
        ));
    }
    if let Some(i) = (0..ivs.len() - 1).find(|&i| ivs[i].lo >= ivs[i + 1].lo) {
        return Some(format!(
            "left endpoints of supports {i} and {} are not increasing",
            i + 1
        ));
    }
    chain_violation(&ivs)
}

/// `⟨f, g⟩ ≅ F` whenever `g f(y) >= z`, for `supp f = (x, z)`,
/// `supp g = (y, w)` and `x < y < z < w`, both maps moving right.
pub fn two_chain_f_certificate(f: &PlMap, g: &PlMap) -> Result<CertResult> {
    let (sf, sg) = (f.support(), g.support());
    let (Some(jf), Some(jg)) = (sf.as_single(), sg.as_single()) else {
        return Err(Error::BadSupportShape(
            "supports must be single intervals".into(),
        ));
    };
    let (x, z) = (&jf.lo, &jf.hi);
    let (y, w) = (&jg.lo, &jg.hi);
    if !(x < y && y < z && z < w) {
        return Err(Error::BadSupportShape(format!(
            "need x < y < z < w, got {jf} and {jg}"
        )));
    }
    if !f.moves_right() || !g.moves_right() {
        return Err(Error::BadSupportShape(
            "both maps must move points to the right".into(),
        ));
    }
    // y and z are finite because x < y < z < w.
    let y = y.finite().expect("finite").clone();
    let z = z.finite().expect("finite").clone();
    let f_y = f.eval(&y);
    let gf_y = g.eval(&f_y);
    Ok(CertResult {
        holds: gf_y >= z,
        witness: CertWitness::TwoChain { y, f_y, gf_y, z },
    })
}

/// The `F_n` criterion on a prechain system. `supp f_1 ∖ supp f_2` is taken
/// as `(∂⁻J_1, ∂⁻J_2]` and `supp f_n ∖ supp f_{n-1}` as `[∂⁺J_{n-1}, ∂⁺J_n)`;
/// touching closures count as meeting.
pub fn higman_thompson_certificate(sys: &ChainSystem) -> Result<CertResult> {
    sys.require_prechain()?;
    let n = sys.len();
    let source_lo = sys.interval(0).lo.clone();
    let source_hi = sys.interval(1).lo.finite().expect("finite").clone();
    let target_lo = sys.interval(n - 2).hi.finite().expect("finite").clone();
    let target_hi = sys.interval(n - 1).hi.clone();
    let image_lo = sys
        .generators
        .iter()
        .fold(source_lo.clone(), |p, g| g.eval_ext(&p));
    let image_hi = sys
        .generators
        .iter()
        .fold(source_hi.clone(), |p, g| g.eval(&p));
    let holds = closures_meet(&image_lo, &image_hi, &target_lo, &target_hi);
    Ok(CertResult {
        holds,
        witness: CertWitness::HigmanThompson {
            source_lo,
            source_hi,
            image_lo,
            image_hi,
            target_lo,
            target_hi,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum StabilizationOutcome {
    Found { n: u64 },
    NotFound { n_max: u64 },
}

#[derive(Clone, Debug)]
pub struct StabilizationResult {
    pub outcome: StabilizationOutcome,
    pub target: Target,
    /// Exponents tried, in order, with the criterion outcome at each.
    pub history: Vec<(u64, bool)>,
    /// Whether the criteria still hold at `n + 1` (monotonicity re-check).
    pub holds_at_next: Option<bool>,
    /// The powered, certified system at the minimal exponent.
    pub system: Option<ChainSystem>,
}

impl StabilizationResult {
    pub fn minimal_n(&self) -> Option<u64> {
        match self.outcome {
            StabilizationOutcome::Found { n } => Some(n),
            StabilizationOutcome::NotFound { .. } => None,
        }
    }
}

fn meets_target(cert: &Certification, target: Target) -> bool {
    match target {
        Target::Chain => cert.system.status >= ChainStatus::ChainCertified,
        Target::HigmanThompson => cert.system.status == ChainStatus::HigmanThompsonCertified,
    }
}

/// Smallest `N <= n_max` for which the `N`-th powers pass the target criteria.
pub fn stabilize(sys: &ChainSystem, target: Target, n_max: u64) -> Result<StabilizationResult> {
    stabilize_bounded(sys, target, n_max, None)
}

/// [`stabilize`] with an optional bound on the bit size of powered maps.
pub fn stabilize_bounded(
    sys: &ChainSystem,
    target: Target,
    n_max: u64,
    height_limit: Option<u64>,
) -> Result<StabilizationResult> {
    sys.require_prechain()?;
    let mut history = Vec::new();
    for n in 1..=n_max {
        let powered = sys.powered(n as i64)?;
        for g in powered.generators() {
            g.check_height(height_limit)?;
        }
        let cert = powered.certify()?;
        let ok = meets_target(&cert, target);
        history.push((n, ok));
        if ok {
            let next = sys.powered(n as i64 + 1)?.certify()?;
            return Ok(StabilizationResult {
                outcome: StabilizationOutcome::Found { n },
                target,
                history,
                holds_at_next: Some(meets_target(&next, target)),
                system: Some(cert.system),
            });
        }
    }
    Ok(StabilizationResult {
        outcome: StabilizationOutcome::NotFound { n_max },
        target,
        history,
        holds_at_next: None,
        system: None,
    })
}

/// Words for the elements `h_0, h_1, …` over the system's generators:
/// `h_i = f_{i+1}⁻¹ ⋯ f_n⁻¹` for `i < n` (so `h_{n-1} = f_n⁻¹`), and
/// `h_{r + q(n-1)} = h_0^{-q} h_r h_0^q` for `1 <= r <= n-1`.
pub fn fn_witness_words(n: usize, count: usize) -> Vec<Word> {
    let mut words: Vec<Word> = (0..n.min(count))
        .map(|i| Word::new((i..n).map(|k| (k, -1))))
        .collect();
    let h0 = words[0].clone();
    for j in n..count {
        let q = ((j - 1) / (n - 1)) as i64;
        let r = j - q as usize * (n - 1);
        words.push(words[r].conjugate_by(&h0.pow(-q)));
    }
    words
}

/// The maps `h_0, …, h_{count-1}` realizing the infinite `F_n` presentation
/// on a system that passes the `F_n` criterion.
pub fn fn_witness_generators(sys: &ChainSystem, count: usize) -> Result<Vec<PlMap>> {
    sys.require_prechain()?;
    if !higman_thompson_certificate(sys)?.holds {
        return Err(Error::NotCertified("the F_n criterion fails".into()));
    }
    let n = sys.len();
    if count < n {
        return Err(Error::BadParameters(format!(
            "count {count} is below the generator count {n}"
        )));
    }
    fn_witness_words(n, count)
        .iter()
        .map(|w| w.evaluate(sys.generators()))
        .collect()
}

/// Exact check of `h_i⁻¹ h_j h_i = h_{j+n-1}` for `0 <= i < j <= bound`.
pub fn verify_fn_relators(sys: &ChainSystem, bound: usize) -> Result<RelatorReport> {
    let n = sys.len();
    let hs = fn_witness_generators(sys, bound + n)?;
    check_relators(&relators(&RelatorFamily::Fn { n, bound })?, &hs)
}

/// Exact checks behind the two-chain certificate for `k = 1..=k_max`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoChainRelatorReport {
    /// `[f, (gf)^k g (gf)^{-k}] = 1` over the alphabet `(f, g)`.
    pub relators: RelatorReport,
    /// `supp f ∩ (gf)^k(supp g) = ∅`, one entry per `k`.
    pub disjoint: Vec<bool>,
}

impl TwoChainRelatorReport {
    pub fn all_pass(&self) -> bool {
        self.relators.all_pass() && self.disjoint.iter().all(|&d| d)
    }
}

pub fn two_chain_relator_words(k_max: u32) -> Vec<Word> {
    let (f, g) = (0, 1);
    let gf = Word::new([(g, 1), (f, 1)]);
    (1..=k_max as i64)
        .map(|k| Word::commutator(&Word::gen(f), &Word::gen(g).conjugate_by(&gf.pow(k))))
        .collect()
}

pub fn verify_two_chain_relators(
    f: &PlMap,
    g: &PlMap,
    k_max: u32,
) -> Result<TwoChainRelatorReport> {
    let pair = [f.clone(), g.clone()];
    let relators = check_relators(&two_chain_relator_words(k_max), &pair)?;
    let gf = g.compose(f);
    let (sf, sg) = (f.support(), g.support());
    let mut disjoint = Vec::new();
    let mut power = PlMap::identity();
    for _ in 0..k_max {
        power = gf.compose(&power);
        disjoint.push(sf.is_disjoint(&sg.image(&power)));
    }
    Ok(TwoChainRelatorReport { relators, disjoint })
}
