//! An exact algebraic model of the blow-up of the standard 3-chain along the
//! orbit of a marked point.
//!
//! Each orbit point `y` is replaced by an interval carrying a transported
//! copy of an inserted map `h`. With linear identifications between these
//! intervals, every element of the blown-up group is a pair `(t, w)`: a
//! finitely supported integer function `t` on the orbit (how many copies of
//! `h` sit over each point) and the base map `w`. The law is
//!
//! `(t₁, w₁)(t₂, w₂) = (t₁ + w₁·t₂, w₁w₂)` with `(w·t)(y) = t(w⁻¹(y))`,
//!
//! so projecting to the base is a homomorphism whose kernel is `{(t, id)}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{classify_prechain, ChainStatus, ChainSystem};
use crate::constructions::standard_three_chain;
use crate::dynamics::orbit_word;
use crate::error::{Error, Result};
use crate::pl::PlMap;
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupElement {
    shift: BTreeMap<Rational, i64>,
    base: PlMap,
}

impl BlowupElement {
    /// Zero coefficients are dropped.
    pub fn new(shift: impl IntoIterator<Item = (Rational, i64)>, base: PlMap) -> Self {
        let mut t = BTreeMap::new();
        for (y, k) in shift {
            *t.entry(y).or_insert(0) += k;
        }
        t.retain(|_, k| *k != 0);
        BlowupElement { shift: t, base }
    }

    pub fn identity() -> Self {
        BlowupElement {
            shift: BTreeMap::new(),
            base: PlMap::identity(),
        }
    }

    /// `(δ_y, id)`.
    pub fn delta(y: Rational) -> Self {
        Self::new([(y, 1)], PlMap::identity())
    }

    pub fn lift(base: PlMap) -> Self {
        BlowupElement {
            shift: BTreeMap::new(),
            base,
        }
    }

    pub fn shift(&self) -> &BTreeMap<Rational, i64> {
        &self.shift
    }

    pub fn base(&self) -> &PlMap {
        &self.base
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_empty() && self.base.is_identity()
    }

    /// Lies over the identity of the base.
    pub fn in_kernel(&self) -> bool {
        self.base.is_identity()
    }

    /// The single orbit point carrying coefficient 1, if that is all there is.
    pub fn single_delta(&self) -> Option<&Rational> {
        match self.shift.iter().collect::<Vec<_>>().as_slice() {
            [(y, 1)] => Some(*y),
            _ => None,
        }
    }

    fn transport<'a>(
        w: &PlMap,
        t: &'a BTreeMap<Rational, i64>,
    ) -> impl Iterator<Item = (Rational, i64)> + 'a {
        let w = w.clone();
        t.iter().map(move |(y, k)| (w.eval(y), *k))
    }

    pub fn mul(&self, other: &BlowupElement) -> BlowupElement {
        let shift = self
            .shift
            .iter()
            .map(|(y, k)| (y.clone(), *k))
            .chain(Self::transport(&self.base, &other.shift));
        Self::new(shift.collect::<Vec<_>>(), self.base.compose(&other.base))
    }

    pub fn inverse(&self) -> BlowupElement {
        let inv = self.base.inverse();
        let shift: Vec<_> = Self::transport(&inv, &self.shift)
            .map(|(y, k)| (y, -k))
            .collect();
        Self::new(shift, inv)
    }

    pub fn pow(&self, n: i64) -> BlowupElement {
        let step = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&step))
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &BlowupElement, y: &BlowupElement) -> BlowupElement {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }
}

impl fmt::Display for BlowupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_empty() {
            write!(f, "(0, ")?;
        } else {
            write!(f, "(")?;
            for (i, (y, k)) in self.shift.iter().enumerate() {
                let sign = if *k < 0 {
                    "-"
                } else if i > 0 {
                    "+"
                } else {
                    ""
                };
                let k = k.unsigned_abs();
                let sep = if i > 0 { " " } else { "" };
                let coeff = if k == 1 { String::new() } else { k.to_string() };
                write!(f, "{sep}{sign}{coeff}δ_{y}")?;
            }
            write!(f, ", ")?;
        }
        if self.base.is_identity() {
            write!(f, "id)")
        } else {
            write!(f, "{})", self.base)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    shift: Vec<[String; 2]>,
    base: PlMap,
}

impl Serialize for BlowupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            shift: self
                .shift
                .iter()
                .map(|(y, k)| [format_rational(y), k.to_string()])
                .collect(),
            base: self.base.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlowupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(d)?;
        let shift = raw
            .shift
            .iter()
            .map(|[y, k]| {
                let y = parse_rational(y).map_err(D::Error::custom)?;
                let k: i64 = k
                    .trim()
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad coefficient {k:?}")))?;
                Ok((y, k))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(BlowupElement::new(shift, raw.base))
    }
}

/// The blown-up 3-chain: `g_0 = (0, f_0)`, `g_1 = (δ_p, f_1)`, `g_2 = (0, f_2)`
/// for the marked point `p`.
#[derive(Clone, Debug)]
pub struct BlowupSystem {
    base: ChainSystem,
    marked_point: Rational,
    generators: Vec<BlowupElement>,
}

impl BlowupSystem {
    pub fn base(&self) -> &ChainSystem {
        &self.base
    }

    pub fn marked_point(&self) -> &Rational {
        &self.marked_point
    }

    pub fn generators(&self) -> &[BlowupElement] {
        &self.generators
    }

    /// `(δ_p, id)`, the inserted map over the marked point.
    pub fn h(&self) -> BlowupElement {
        BlowupElement::delta(self.marked_point.clone())
    }
}

/// `p` must be fixed by `f_0` and `f_2` and moved by `f_1`; on the standard
/// 3-chain only `p = 1` qualifies.
pub fn make_blowup_system(marked_point: Rational) -> Result<BlowupSystem> {
    let base = classify_prechain(standard_three_chain())?;
    let f = base.generators();
    let p = &marked_point;
    for i in [0, 2] {
        if &f[i].eval(p) != p {
            return Err(Error::BadMarkedPoint(format!(
                "f_{i}({p}) = {} ≠ {p}",
                f[i].eval(p)
            )));
        }
    }
    if &f[1].eval(p) == p {
        return Err(Error::BadMarkedPoint(format!("f_1 fixes {p}")));
    }
    let generators = vec![
        BlowupElement::lift(f[0].clone()),
        BlowupElement::new([(p.clone(), 1)], f[1].clone()),
        BlowupElement::lift(f[2].clone()),
    ];
    let sys = BlowupSystem {
        base,
        marked_point,
        generators,
    };
    let h = sys.h();
    for i in [0, 2] {
        if !BlowupElement::commutator(&h, &sys.generators[i]).is_identity() {
            return Err(Error::BadMarkedPoint(format!(
                "h does not commute with g_{i}"
            )));
        }
    }
    Ok(sys)
}

/// Evaluates a word over `(g_0, g_1, g_2)` with the group law.
pub fn bl_word_eval(sys: &BlowupSystem, word: &Word) -> Result<BlowupElement> {
    let mut out = BlowupElement::identity();
    for &(i, e) in word.factors() {
        let g = sys.generators.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: sys.generators.len(),
        })?;
        out = out.mul(&g.pow(e));
    }
    Ok(out)
}

/// `g_1 g_0 g_2 g_1 (g_2 g_1 g_0)⁻¹`.
pub fn claim_two_word() -> Word {
    Word::new([(1, 1), (0, 1), (2, 1), (1, 1), (0, -1), (1, -1), (2, -1)])
}

/// A commutator in `G` lying over the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    pub element: BlowupElement,
    /// Base word `w` over `(f_0, f_1, f_2)` carrying the marked point to 0.
    pub path: Word,
    /// Word over `(g_0, g_1, g_2)` for `(δ_p, id)`.
    pub h_word: Word,
    /// `[h, w]` over `(g_0, g_1, g_2)`.
    pub word: Word,
}

/// Finds `w` with `w(p) = 0` by orbit search and returns `[h, w] = (δ_p − δ_0, id)`.
pub fn kernel_commutator_witness(sys: &BlowupSystem, depth: u64) -> Result<KernelWitness> {
    if depth < 2 {
        return Err(Error::BadParameters("depth must be at least 2".into()));
    }
    let not_found = || Error::NotFound {
        what: "kernel commutator witness".into(),
        bound: depth,
    };
    let f = sys.base.generators();
    let p = &sys.marked_point;
    let c = bl_word_eval(sys, &claim_two_word())?;
    let label = c
        .single_delta()
        .filter(|_| c.in_kernel())
        .ok_or_else(not_found)?
        .clone();
    let v = orbit_word(f, &label, p, depth).ok_or_else(not_found)?;
    let h_word = claim_two_word().conjugate_by(&v);
    let path = orbit_word(f, p, &int(0), depth).ok_or_else(not_found)?;
    let word = Word::commutator(&h_word, &path);
    let element = bl_word_eval(sys, &word)?;
    let expected = BlowupElement::new([(p.clone(), 1), (int(0), -1)], PlMap::identity());
    if element != expected {
        return Err(not_found());
    }
    Ok(KernelWitness {
        element,
        path,
        h_word,
        word,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimOne {
    pub holds: bool,
    pub status: ChainStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimTwo {
    pub holds: bool,
    pub word: Word,
    pub element: BlowupElement,
    /// Orbit point carrying the single copy of `h`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub label: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimThree {
    pub holds: bool,
    pub witness: Option<KernelWitness>,
    pub exponent_sum: Option<Vec<i64>>,
}

fn ser_opt_rational<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub claim1: ClaimOne,
    pub claim2: ClaimTwo,
    pub claim3: ClaimThree,
}

impl ClaimsReport {
    pub fn all_hold(&self) -> bool {
        self.claim1.holds && self.claim2.holds && self.claim3.holds
    }
}

/// Claim 1: the base generators form a certified 3-chain.
/// Claim 2: [`claim_two_word`] is a single copy of `h` over the identity.
/// Claim 3: a commutator word in the generators gives a nontrivial kernel element.
pub fn verify_claims(sys: &BlowupSystem) -> Result<ClaimsReport> {
    let status = sys.base.certify()?.system.status();
    let bases: Vec<PlMap> = sys.generators.iter().map(|g| g.base().clone()).collect();
    let claim1 = ClaimOne {
        holds: status >= ChainStatus::ChainCertified && bases == sys.base.generators(),
        status,
    };

    let word = claim_two_word();
    let element = bl_word_eval(sys, &word)?;
    let label = element
        .single_delta()
        .filter(|_| element.in_kernel())
        .cloned();
    let claim2 = ClaimTwo {
        holds: label.is_some(),
        word,
        element,
        label,
    };

    let claim3 = match kernel_commutator_witness(sys, 8) {
        Ok(w) => {
            let sums = w.word.exponent_sum(3)?;
            let holds =
                w.element.in_kernel() && !w.element.is_identity() && sums.iter().all(|&e| e == 0);
            ClaimThree {
                holds,
                witness: Some(w),
                exponent_sum: Some(sums),
            }
        }
        Err(Error::NotFound { .. }) => ClaimThree {
            holds: false,
            witness: None,
            exponent_sum: None,
        },
        Err(e) => return Err(e),
    };
    Ok(ClaimsReport {
        claim1,
        claim2,
        claim3,
    })
}
