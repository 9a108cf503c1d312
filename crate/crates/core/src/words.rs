//! Freely reduced words over an indexed alphabet, stored in run-length form.
//!
//! A word `[(i₁, e₁), …, (i_k, e_k)]` stands for `g_{i₁}^{e₁} ⋯ g_{i_k}^{e_k}`
//! and evaluates with the rightmost factor applied first. Commutators are
//! `[u, v] = u v u⁻¹ v⁻¹`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pl::PlMap;
use crate::rational::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(factors: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (i, e) in factors {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == i => {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((i, e)),
            }
        }
        Word { factors: out }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(i: usize) -> Self {
        Word {
            factors: vec![(i, 1)],
        }
    }

    pub fn gen_pow(i: usize, e: i64) -> Self {
        Word::new([(i, e)])
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Length in letters, i.e. the sum of `|exponent|`.
    pub fn len(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// The word spelled out one letter at a time, left to right.
    pub fn letters(&self) -> Vec<(usize, i64)> {
        self.factors
            .iter()
            .flat_map(|&(i, e)| std::iter::repeat_n((i, e.signum()), e.unsigned_abs() as usize))
            .collect()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::new(self.factors.iter().chain(other.factors.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            factors: self.factors.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c w c⁻¹`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.mul(self).mul(&c.inverse())
    }

    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.factors.iter().map(|(i, _)| *i).max()
    }

    /// Applies `f` to every generator index.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::new(self.factors.iter().map(|&(i, e)| (f(i), e)))
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut out = Word::empty();
        for &(i, e) in &self.factors {
            let img = images.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: images.len(),
            })?;
            out = out.mul(&img.pow(e));
        }
        Ok(out)
    }

    fn check_indices(&self, len: usize) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= len => Err(Error::IndexOutOfRange { index: i, len }),
            _ => Ok(()),
        }
    }

    /// Evaluates the word on PL maps; the rightmost factor acts first.
    pub fn evaluate(&self, assignment: &[PlMap]) -> Result<PlMap> {
        self.check_indices(assignment.len())?;
        Ok(self.factors.iter().fold(PlMap::identity(), |acc, &(i, e)| {
            acc.compose(&assignment[i].pow(e))
        }))
    }

    /// Image of a single point, without building the composite map.
    pub fn apply(&self, assignment: &[PlMap], x: &Rational) -> Result<Rational> {
        self.check_indices(assignment.len())?;
        let mut y = x.clone();
        for &(i, e) in self.factors.iter().rev() {
            let g = &assignment[i];
            for _ in 0..e.unsigned_abs() {
                y = if e > 0 {
                    g.eval(&y)
                } else {
                    g.eval_inverse(&y)
                };
            }
        }
        Ok(y)
    }

    /// Summed exponents per generator.
    pub fn exponent_sum(&self, alphabet_size: usize) -> Result<Vec<i64>> {
        self.check_indices(alphabet_size)?;
        let mut v = vec![0i64; alphabet_size];
        for &(i, e) in &self.factors {
            v[i] += e;
        }
        Ok(v)
    }

    pub fn has_zero_exponent_sum(&self) -> bool {
        let n = self.max_index().map_or(0, |i| i + 1);
        self.exponent_sum(n)
            .map(|v| v.iter().all(|&e| e == 0))
            .unwrap_or(false)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (i, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "g{i}")?;
            } else {
                write!(f, "g{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self
            .factors
            .iter()
            .map(|(i, e)| [i.to_string(), e.to_string()])
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<[String; 2]> = Vec::deserialize(d)?;
        let factors = v
            .iter()
            .map(|[i, e]| {
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad index {i:?}")))?;
                let e: i64 = e
                    .trim()
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad exponent {e:?}")))?;
                Ok((i, e))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Ok(Word::new(factors))
    }
}

/// Families of relators that the crate knows how to instantiate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelatorFamily {
    /// `[b⁻¹a, aᵏ b a⁻ᵏ]` for `k = 1, 2` over the alphabet `(a, b)`.
    F,
    /// `g_i⁻¹ g_j g_i = g_{j+n-1}` for `0 <= i < j <= bound`.
    Fn { n: usize, bound: usize },
    /// `[x^{iN} y x^{-iN}, x^{jN} y x^{-jN}]` for `0 <= i < j <= kmax` over `(x, y)`.
    Lamplighter { n: i64, kmax: usize },
}

pub fn relators(family: &RelatorFamily) -> Result<Vec<Word>> {
    match *family {
        RelatorFamily::F => {
            let (a, b) = (0, 1);
            let u = Word::new([(b, -1), (a, 1)]);
            Ok((1..=2)
                .map(|k| Word::commutator(&u, &Word::gen(b).conjugate_by(&Word::gen_pow(a, k))))
                .collect())
        }
        RelatorFamily::Fn { n, bound } => {
            if n < 2 || bound < n {
                return Err(Error::BadParameters(format!(
                    "Fn needs n >= 2 and bound >= n (got n={n}, bound={bound})"
                )));
            }
            let mut out = Vec::new();
            for i in 0..bound {
                for j in (i + 1)..=bound {
                    out.push(Word::new([(i, -1), (j, 1), (i, 1), (j + n - 1, -1)]));
                }
            }
            Ok(out)
        }
        RelatorFamily::Lamplighter { n, kmax } => {
            if n < 1 || kmax < 1 {
                return Err(Error::BadParameters(format!(
                    "lamplighter needs N >= 1 and kmax >= 1 (got N={n}, kmax={kmax})"
                )));
            }
            let (x, y) = (0, 1);
            let lamp = |i: usize| Word::gen(y).conjugate_by(&Word::gen_pow(x, i as i64 * n));
            let mut out = Vec::new();
            for i in 0..kmax {
                for j in (i + 1)..=kmax {
                    out.push(Word::commutator(&lamp(i), &lamp(j)));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorCheck {
    pub relator: Word,
    pub holds: bool,
    /// A point moved by the evaluated relator, with its image.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorReport {
    pub checks: Vec<RelatorCheck>,
}

impl RelatorReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelatorCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Exact identity check of each relator under the assignment.
pub fn check_relators(relators: &[Word], assignment: &[PlMap]) -> Result<RelatorReport> {
    let mut checks = Vec::with_capacity(relators.len());
    for r in relators {
        let m = r.evaluate(assignment)?;
        let witness = m.moved_point().map(|x| {
            let y = m.eval(&x);
            [x.to_string(), y.to_string()]
        });
        checks.push(RelatorCheck {
            relator: r.clone(),
            holds: witness.is_none(),
            witness,
        });
    }
    Ok(RelatorReport { checks })
}

/// Certifies every lamplighter relator over `(x, y)` at once: `x` is a
/// translation by at least the diameter of the bounded support of `y`, so
/// the translates `x^k(supp y)`, `k != 0`, all miss `supp y`.
pub fn lamplighter_translates_disjoint(x: &PlMap, y: &PlMap) -> bool {
    let shift = match (x.breakpoint_count(), x.germs().left_tail.translation()) {
        (0, Some(t)) => t.abs(),
        _ => return false,
    };
    match y.support().hull() {
        Some(h) => match (h.lo.finite(), h.hi.finite()) {
            (Some(lo), Some(hi)) => !shift.is_zero() && hi - lo <= shift,
            _ => false,
        },
        None => true,
    }
}
