//! Truncated generalized power series over the lattice {mα + nβ}.
//!
//! A [`FracSeries`] stores coefficients c_{mn} of (x−a)^{mα+nβ} (or
//! (b−x)^{mα+nβ} for a left series) together with a cutoff: an upper bound
//! on the exponents it retains. Every operator keeps the invariant that the
//! terms at or below the cutoff are exact given an exact input.

mod eval;
mod json;
mod ops;
mod taylor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

pub use eval::Evaluation;
pub use json::{SeriesDoc, TermDoc};
pub use ops::{caputo_power_rule, Truncated};

/// Two lattice exponents closer than this are the same exponent.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Which endpoint the series is expanded at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Expansion at the left endpoint `a`, basis (x−a)^μ, operators act on [a, x].
    Right,
    /// Expansion at the right endpoint `b`, basis (b−x)^μ, operators act on [x, b].
    Left,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

/// Fractional indices α (and optionally β) plus the expansion point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracIndexPair {
    alpha: f64,
    beta: Option<f64>,
    base: f64,
    side: Side,
}

impl FracIndexPair {
    pub fn new(alpha: f64, beta: Option<f64>, base: f64, side: Side) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(FracError::Domain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if let Some(beta) = beta {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(FracError::Domain(format!(
                    "beta must be positive, got {beta}"
                )));
            }
        }
        if !base.is_finite() {
            return Err(FracError::Domain(format!(
                "base must be finite, got {base}"
            )));
        }
        Ok(FracIndexPair {
            alpha,
            beta,
            base,
            side,
        })
    }

    /// Single-index right series at `base`.
    pub fn single(alpha: f64, base: f64) -> Result<Self> {
        Self::new(alpha, None, base, Side::Right)
    }

    /// Two-index right series at `base`.
    pub fn two_index(alpha: f64, beta: f64, base: f64) -> Result<Self> {
        Self::new(alpha, Some(beta), base, Side::Right)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(self, side: Side) -> Self {
        FracIndexPair { side, ..self }
    }

    pub fn with_base(self, base: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, base, self.side)
    }

    /// The exponent mα + nβ of a lattice key.
    pub fn exponent(&self, key: ExponentKey) -> f64 {
        let beta_part = match self.beta {
            Some(beta) => key.n as f64 * beta,
            None => 0.0,
        };
        key.m as f64 * self.alpha + beta_part
    }

    /// Writes `value` as m'α + n'β with m', n' ≥ 0, preferring the smallest n'.
    pub fn lattice_key(&self, value: f64) -> Option<ExponentKey> {
        if !value.is_finite() || value < -EXPONENT_TOL {
            return None;
        }
        let tol = EXPONENT_TOL * value.abs().max(1.0);
        let max_n = match self.beta {
            Some(beta) => ((value + tol) / beta).floor() as i32,
            None => 0,
        };
        (0..=max_n.max(0)).find_map(|n| {
            let rest = value - self.beta.map_or(0.0, |b| n as f64 * b);
            let m = (rest / self.alpha).round();
            let key = ExponentKey::new(m as i32, n);
            (m >= 0.0 && (self.exponent(key) - value).abs() <= tol).then_some(key)
        })
    }

    /// Like [`lattice_key`](Self::lattice_key) but with a lattice error.
    pub fn require_lattice_key(&self, value: f64) -> Result<ExponentKey> {
        self.lattice_key(value).ok_or(FracError::Lattice {
            value,
            alpha: self.alpha,
            beta: self.beta,
        })
    }

    pub(crate) fn ensure_same(&self, other: &FracIndexPair) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(FracError::Incompatible(format!(
                "index pairs differ: {self} vs {other}"
            )))
        }
    }
}

impl fmt::Display for FracIndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}", self.alpha)?;
        if let Some(beta) = self.beta {
            write!(f, ", beta={beta}")?;
        }
        write!(f, ", base={}, {:?})", self.base, self.side)
    }
}

/// Lattice index (m, n) of the exponent mα + nβ.
///
/// Series built by the constructors use m, n ≥ 0; derivatives can push a
/// component negative (D^α of (x−a)^{nβ} sits at (−1, n)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentKey {
    pub m: i32,
    pub n: i32,
}

impl ExponentKey {
    pub const ZERO: ExponentKey = ExponentKey { m: 0, n: 0 };

    pub const fn new(m: i32, n: i32) -> Self {
        ExponentKey { m, n }
    }
}

impl Add for ExponentKey {
    type Output = ExponentKey;

    fn add(self, rhs: ExponentKey) -> ExponentKey {
        ExponentKey::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl Sub for ExponentKey {
    type Output = ExponentKey;

    fn sub(self, rhs: ExponentKey) -> ExponentKey {
        ExponentKey::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl Neg for ExponentKey {
    type Output = ExponentKey;

    fn neg(self) -> ExponentKey {
        ExponentKey::new(-self.m, -self.n)
    }
}

impl fmt::Display for ExponentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// One term of a series in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub key: ExponentKey,
    pub exponent: f64,
    pub coefficient: f64,
}

/// Truncated series Σ c_{mn}(x−a)^{mα+nβ} with an exponent cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SeriesDoc", try_from = "SeriesDoc")]
pub struct FracSeries {
    indices: FracIndexPair,
    terms: BTreeMap<ExponentKey, f64>,
    cutoff: f64,
}

impl FracSeries {
    /// The zero series.
    pub fn zero(indices: FracIndexPair, cutoff: f64) -> Result<Self> {
        if cutoff.is_nan() || cutoff == f64::INFINITY {
            return Err(FracError::Domain(format!(
                "cutoff must be finite, got {cutoff}"
            )));
        }
        Ok(FracSeries {
            indices,
            terms: BTreeMap::new(),
            cutoff,
        })
    }

    /// The constant series `value`.
    pub fn constant(indices: FracIndexPair, value: f64, cutoff: f64) -> Result<Self> {
        let mut series = Self::zero(indices, cutoff)?;
        series.insert(ExponentKey::ZERO, value)?;
        Ok(series)
    }

    /// Builds a series from explicit terms; duplicate keys are rejected.
    pub fn from_terms<I>(indices: FracIndexPair, cutoff: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentKey, f64)>,
    {
        let mut series = Self::zero(indices, cutoff)?;
        for (key, c) in terms {
            if series.terms.contains_key(&key) {
                return Err(FracError::Format(format!("duplicate exponent key {key}")));
            }
            series.insert(key, c)?;
        }
        Ok(series)
    }

    /// Sets the coefficient of `key`, checking the series invariants.
    pub fn insert(&mut self, key: ExponentKey, coefficient: f64) -> Result<()> {
        if !coefficient.is_finite() {
            return Err(FracError::Domain(format!(
                "coefficient of {key} is not finite ({coefficient})"
            )));
        }
        if self.indices.beta.is_none() && key.n != 0 {
            return Err(FracError::Incompatible(format!(
                "key {key} uses beta but the series has a single index"
            )));
        }
        let exponent = self.indices.exponent(key);
        if exponent > self.cutoff + EXPONENT_TOL * self.cutoff.abs().max(1.0) {
            return Err(FracError::Domain(format!(
                "exponent {exponent} of {key} exceeds the cutoff {}",
                self.cutoff
            )));
        }
        self.terms.insert(key, coefficient);
        Ok(())
    }

    /// Inserts without checks; callers guarantee the invariants.
    pub(crate) fn insert_unchecked(&mut self, key: ExponentKey, coefficient: f64) {
        self.terms.insert(key, coefficient);
    }

    pub(crate) fn accumulate(&mut self, key: ExponentKey, coefficient: f64) {
        *self.terms.entry(key).or_insert(0.0) += coefficient;
    }

    pub fn indices(&self) -> &FracIndexPair {
        &self.indices
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient stored under `key` (zero when absent).
    pub fn coefficient(&self, key: ExponentKey) -> f64 {
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, key: ExponentKey) -> bool {
        self.terms.contains_key(&key)
    }

    pub fn exponent(&self, key: ExponentKey) -> f64 {
        self.indices.exponent(key)
    }

    /// Terms in canonical order: ascending exponent, ties by (m, n).
    pub fn terms(&self) -> Vec<Term> {
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(&key, &coefficient)| Term {
                key,
                exponent: self.indices.exponent(key),
                coefficient,
            })
            .collect();
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent).then(a.key.cmp(&b.key)));
        terms
    }

    /// Coefficients summed over keys whose exponents coincide, ascending.
    ///
    /// Distinct keys can land on the same exponent when β is a rational
    /// multiple of α; this is the view in which such series are compared.
    pub fn by_exponent(&self) -> Vec<(f64, f64)> {
        group_by_exponent(
            self.terms()
                .into_iter()
                .map(|t| (t.exponent, t.coefficient)),
        )
        .into_iter()
        .map(|(exponent, members)| (exponent, members.iter().sum()))
        .collect()
    }

    /// True iff some retained term has a negative exponent.
    pub fn is_singular_at_base(&self) -> bool {
        self.terms
            .keys()
            .any(|&key| self.indices.exponent(key) < -EXPONENT_TOL)
    }

    /// Drops every term above `cutoff` (which must not exceed the current one).
    pub fn truncate(&self, cutoff: f64) -> FracSeries {
        let cutoff = cutoff.min(self.cutoff);
        let tol = EXPONENT_TOL * cutoff.abs().max(1.0);
        FracSeries {
            indices: self.indices,
            terms: self
                .terms
                .iter()
                .filter(|(&key, _)| self.indices.exponent(key) <= cutoff + tol)
                .map(|(&k, &c)| (k, c))
                .collect(),
            cutoff,
        }
    }

    /// Same coefficients on a different expansion point.
    pub fn rebased(&self, base: f64) -> Result<FracSeries> {
        Ok(FracSeries {
            indices: self.indices.with_base(base)?,
            terms: self.terms.clone(),
            cutoff: self.cutoff,
        })
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (ExponentKey, f64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }
}

/// Groups `(exponent, value)` pairs whose exponents agree within
/// [`EXPONENT_TOL`]. The representative exponent is the first of each group.
pub fn group_by_exponent<I>(items: I) -> Vec<(f64, Vec<f64>)>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut items: Vec<(f64, f64)> = items.into_iter().collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for (exponent, value) in items {
        match groups.last_mut() {
            Some((last, members)) if exponents_coincide(*last, exponent) => members.push(value),
            _ => groups.push((exponent, vec![value])),
        }
    }
    groups
}

pub fn exponents_coincide(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_TOL * a.abs().max(b.abs()).max(1.0)
}
