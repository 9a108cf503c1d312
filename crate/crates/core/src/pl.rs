//! Finitely piecewise-linear increasing homeomorphisms of the real line.
//!
//! A [`PlMap`] is a list of knots `(x, y)` joined by segments, extended by an
//! affine tail on each side. Every constructor returns the canonical form, in
//! which no knot separates two pieces with the same slope, so two maps are
//! equal as functions exactly when they are equal as values.
//!
//! Composition follows function notation: `f.compose(&g)` is `x ↦ f(g(x))`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{IntervalSet, OpenInterval};
use crate::rational::{format_rational, height_bits, int, parse_rational, ExtPoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PlMapJson", into = "PlMapJson")]
pub struct PlMap {
    knots: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
}

/// `x ↦ slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineMap {
    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }

    /// Translation amount, if the slope is one.
    pub fn translation(&self) -> Option<&Rational> {
        self.slope.is_one().then_some(&self.intercept)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ {}·x + {}", self.slope, self.intercept)
    }
}

/// The affine behaviour of a map near `-∞` and near `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermData {
    pub left_tail: AffineMap,
    pub right_tail: AffineMap,
}

impl PlMap {
    /// Builds the canonical map through `knots` with the given tail slopes.
    ///
    /// Knots must be sorted by `x`; every implied slope must be positive.
    pub fn new(
        knots: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::EmptyKnots);
        }
        if !left_slope.is_positive() {
            return Err(Error::NonMonotone(format!(
                "left slope {left_slope} is not positive"
            )));
        }
        if !right_slope.is_positive() {
            return Err(Error::NonMonotone(format!(
                "right slope {right_slope} is not positive"
            )));
        }
        for (i, w) in knots.windows(2).enumerate() {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x1 <= x0 || y1 <= y0 {
                return Err(Error::NonMonotone(format!(
                    "segment {i} from ({x0}, {y0}) to ({x1}, {y1}) has non-positive slope"
                )));
            }
        }
        Ok(Self::canonical(knots, left_slope, right_slope))
    }

    pub fn identity() -> Self {
        PlMap {
            knots: vec![(int(0), int(0))],
            left_slope: int(1),
            right_slope: int(1),
        }
    }

    /// `x ↦ slope·x + intercept`; `slope` must be positive.
    pub fn affine(slope: Rational, intercept: Rational) -> Result<Self> {
        Self::new(vec![(int(0), intercept)], slope.clone(), slope)
    }

    pub fn translation(t: Rational) -> Self {
        PlMap {
            knots: vec![(int(0), t)],
            left_slope: int(1),
            right_slope: int(1),
        }
    }

    // Drops knots where the incoming and outgoing slopes agree. Input must be
    // valid (sorted, increasing).
    fn canonical(knots: Vec<(Rational, Rational)>, left: Rational, right: Rational) -> Self {
        let k = knots.len();
        let mut slopes = Vec::with_capacity(k + 1);
        slopes.push(left.clone());
        for w in knots.windows(2) {
            slopes.push((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0));
        }
        slopes.push(right.clone());
        let kept: Vec<(Rational, Rational)> = knots
            .iter()
            .enumerate()
            .filter(|(i, _)| slopes[*i] != slopes[*i + 1])
            .map(|(_, kn)| kn.clone())
            .collect();
        if kept.is_empty() {
            // Affine: anchor the single knot at x = 0.
            let (x1, y1) = &knots[0];
            let y0 = y1 - &left * x1;
            return PlMap {
                knots: vec![(int(0), y0)],
                left_slope: left,
                right_slope: right,
            };
        }
        PlMap {
            knots: kept,
            left_slope: left,
            right_slope: right,
        }
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn left_slope(&self) -> &Rational {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &Rational {
        &self.right_slope
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Number of genuine breakpoints (0 for affine maps).
    pub fn breakpoint_count(&self) -> usize {
        if self.left_slope == self.right_slope && self.knots.len() == 1 {
            0
        } else {
            self.knots.len()
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let k = self.knots.len();
        let (x1, y1) = &self.knots[0];
        if x <= x1 {
            return y1 + &self.left_slope * (x - x1);
        }
        let (xk, yk) = &self.knots[k - 1];
        if x >= xk {
            return yk + &self.right_slope * (x - xk);
        }
        // knots[i].x <= x < knots[i+1].x
        let i = self.knots.partition_point(|(kx, _)| kx <= x) - 1;
        let (xa, ya) = &self.knots[i];
        let (xb, yb) = &self.knots[i + 1];
        ya + (yb - ya) * (x - xa) / (xb - xa)
    }

    /// Image of an extended point; the ends of the line are fixed.
    pub fn eval_ext(&self, p: &ExtPoint) -> ExtPoint {
        match p {
            ExtPoint::Finite(x) => ExtPoint::Finite(self.eval(x)),
            other => other.clone(),
        }
    }

    /// Evaluates the inverse map without building it.
    pub fn eval_inverse(&self, y: &Rational) -> Rational {
        let k = self.knots.len();
        let (x1, y1) = &self.knots[0];
        if y <= y1 {
            return x1 + (y - y1) / &self.left_slope;
        }
        let (xk, yk) = &self.knots[k - 1];
        if y >= yk {
            return xk + (y - yk) / &self.right_slope;
        }
        let i = self.knots.partition_point(|(_, ky)| ky <= y) - 1;
        let (xa, ya) = &self.knots[i];
        let (xb, yb) = &self.knots[i + 1];
        xa + (xb - xa) * (y - ya) / (yb - ya)
    }

    /// `x ↦ self(g(x))`.
    pub fn compose(&self, g: &PlMap) -> PlMap {
        let mut xs: BTreeSet<Rational> = g.knots.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(self.knots.iter().map(|(x, _)| g.eval_inverse(x)));
        let knots = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&g.eval(&x));
                (x, y)
            })
            .collect();
        Self::canonical(
            knots,
            &self.left_slope * &g.left_slope,
            &self.right_slope * &g.right_slope,
        )
    }

    pub fn inverse(&self) -> PlMap {
        Self::canonical(
            self.knots
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
            self.left_slope.recip(),
            self.right_slope.recip(),
        )
    }

    /// `n`-fold composite; negative `n` uses the inverse.
    pub fn pow(&self, n: i64) -> PlMap {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PlMap::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// `g ∘ self ∘ g⁻¹`, whose support is `g(supp self)`.
    pub fn conjugate_by(&self, g: &PlMap) -> PlMap {
        g.compose(self).compose(&g.inverse())
    }

    /// `[f, g] = f g f⁻¹ g⁻¹`.
    pub fn commutator(f: &PlMap, g: &PlMap) -> PlMap {
        f.compose(g).compose(&f.inverse()).compose(&g.inverse())
    }

    /// The open set `{x : f(x) ≠ x}`.
    pub fn support(&self) -> IntervalSet {
        let fixed = self.fixed_pieces();
        let mut parts = Vec::new();
        let mut cursor = ExtPoint::NegInf;
        let mut cursor_closed = false;
        for (lo, hi) in fixed {
            if !(cursor_closed && cursor == lo) {
                if let Some(iv) = OpenInterval::new(cursor.clone(), lo.clone()) {
                    parts.push(iv);
                }
            }
            cursor = hi;
            cursor_closed = true;
        }
        if cursor != ExtPoint::PosInf {
            if let Some(iv) = OpenInterval::new(cursor, ExtPoint::PosInf) {
                parts.push(iv);
            }
        }
        IntervalSet::from_intervals(parts)
    }

    // Closed pieces of the fixed-point set, sorted and merged. Infinite
    // endpoints mean the piece is unbounded on that side.
    fn fixed_pieces(&self) -> Vec<(ExtPoint, ExtPoint)> {
        let mut pieces: Vec<(ExtPoint, ExtPoint)> = Vec::new();
        let point = |x: Rational| (ExtPoint::Finite(x.clone()), ExtPoint::Finite(x));
        let k = self.knots.len();
        let disp: Vec<Rational> = self.knots.iter().map(|(x, y)| y - x).collect();
        let one = Rational::one();

        let (x1, _) = &self.knots[0];
        if self.left_slope == one {
            if disp[0].is_zero() {
                pieces.push((ExtPoint::NegInf, ExtPoint::Finite(x1.clone())));
            }
        } else {
            let root = x1 - &disp[0] / (&self.left_slope - &one);
            if &root <= x1 {
                pieces.push(point(root));
            }
        }

        for i in 0..k.saturating_sub(1) {
            let (xa, xb) = (&self.knots[i].0, &self.knots[i + 1].0);
            let (da, db) = (&disp[i], &disp[i + 1]);
            if da.is_zero() && db.is_zero() {
                pieces.push((ExtPoint::Finite(xa.clone()), ExtPoint::Finite(xb.clone())));
            } else if da.is_zero() {
                pieces.push(point(xa.clone()));
            } else if db.is_zero() {
                pieces.push(point(xb.clone()));
            } else if da.is_positive() != db.is_positive() {
                let root = xa + (xb - xa) * da / (da - db);
                pieces.push(point(root));
            }
        }

        let (xk, _) = &self.knots[k - 1];
        if self.right_slope == one {
            if disp[k - 1].is_zero() {
                pieces.push((ExtPoint::Finite(xk.clone()), ExtPoint::PosInf));
            }
        } else {
            let root = xk - &disp[k - 1] / (&self.right_slope - &one);
            if &root >= xk {
                pieces.push(point(root));
            }
        }

        pieces.sort();
        let mut merged: Vec<(ExtPoint, ExtPoint)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        merged
    }

    /// `f(x) >= x` for every real `x`.
    pub fn moves_right(&self) -> bool {
        self.left_slope <= Rational::one()
            && self.right_slope >= Rational::one()
            && self.knots.iter().all(|(x, y)| y >= x)
    }

    pub fn germs(&self) -> GermData {
        let (x1, y1) = &self.knots[0];
        let (xk, yk) = &self.knots[self.knots.len() - 1];
        GermData {
            left_tail: AffineMap {
                slope: self.left_slope.clone(),
                intercept: y1 - &self.left_slope * x1,
            },
            right_tail: AffineMap {
                slope: self.right_slope.clone(),
                intercept: yk - &self.right_slope * xk,
            },
        }
    }

    /// A point moved by the map, if it is not the identity.
    pub fn moved_point(&self) -> Option<Rational> {
        self.support().parts().first().map(|iv| iv.sample_point())
    }

    /// Largest bit length among all numerators and denominators.
    pub fn height_bits(&self) -> u64 {
        self.knots
            .iter()
            .flat_map(|(x, y)| [height_bits(x), height_bits(y)])
            .chain([
                height_bits(&self.left_slope),
                height_bits(&self.right_slope),
            ])
            .max()
            .unwrap_or(0)
    }

    /// Fails with `DenominatorLimit` when the map has grown past `limit` bits.
    pub fn check_height(&self, limit: Option<u64>) -> Result<()> {
        match limit {
            Some(limit) => {
                let bits = self.height_bits();
                if bits > limit {
                    Err(Error::DenominatorLimit { bits, limit })
                } else {
                    Ok(())
                }
            }
            None => Ok(()),
        }
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[slope {}] ", self.left_slope)?;
        for (i, (x, y)) in self.knots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, " [slope {}]", self.right_slope)
    }
}

#[derive(Serialize, Deserialize)]
struct PlMapJson {
    knots: Vec<[String; 2]>,
    left_slope: String,
    right_slope: String,
}

impl From<PlMap> for PlMapJson {
    fn from(m: PlMap) -> Self {
        PlMapJson {
            knots: m
                .knots
                .iter()
                .map(|(x, y)| [format_rational(x), format_rational(y)])
                .collect(),
            left_slope: format_rational(&m.left_slope),
            right_slope: format_rational(&m.right_slope),
        }
    }
}

impl TryFrom<PlMapJson> for PlMap {
    type Error = Error;

    fn try_from(j: PlMapJson) -> Result<Self> {
        let knots = j
            .knots
            .iter()
            .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()?;
        PlMap::new(
            knots,
            parse_rational(&j.left_slope)?,
            parse_rational(&j.right_slope)?,
        )
    }
}
