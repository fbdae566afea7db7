//! Order-by-order residuals of series substituted into an equation.
//!
//! An equation is assembled as a list of component series whose sum should
//! vanish. Each exponent of the sum is compared with the largest component
//! contribution at that exponent, and only exponents at or below the smallest
//! component cutoff are judged: above it some dropped term could have
//! contributed.

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::series::{group_by_exponent, FracIndexPair, FracSeries, Truncated, EXPONENT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualOrder {
    pub exponent: f64,
    /// Sum of all components at this exponent.
    pub value: f64,
    /// Largest |component| at this exponent.
    pub scale: f64,
    /// Whether the exponent is at or below `exact_through`.
    pub exact: bool,
}

impl ResidualOrder {
    /// |value| / scale, or 0 when nothing contributes.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub series: FracSeries,
    pub orders: Vec<ResidualOrder>,
    pub exact_through: f64,
    /// Terms dropped past the cutoff while assembling the components.
    pub dropped: usize,
}

impl Residual {
    /// Largest relative residual over the exact orders.
    pub fn max_relative(&self) -> f64 {
        self.exact_orders()
            .map(ResidualOrder::relative)
            .fold(0.0, f64::max)
    }

    /// True iff every exact order is within `tol` of zero, relative to its scale.
    pub fn vanishes(&self, tol: f64) -> bool {
        self.first_failure(tol).is_none()
    }

    pub fn first_failure(&self, tol: f64) -> Option<&ResidualOrder> {
        self.exact_orders().find(|o| o.relative() > tol)
    }

    pub fn exact_orders(&self) -> impl Iterator<Item = &ResidualOrder> {
        self.orders.iter().filter(|o| o.exact)
    }
}

/// Collects the components of an equation `Σ components = 0`.
#[derive(Debug, Clone)]
pub struct ResidualBuilder {
    indices: FracIndexPair,
    parts: Vec<FracSeries>,
    dropped: usize,
}

impl ResidualBuilder {
    pub fn new(indices: FracIndexPair) -> Self {
        ResidualBuilder {
            indices,
            parts: Vec::new(),
            dropped: 0,
        }
    }

    pub fn push(&mut self, component: FracSeries) -> Result<&mut Self> {
        if component.indices() != &self.indices {
            return Err(FracError::Incompatible(format!(
                "residual component on {} does not match {}",
                component.indices(),
                self.indices
            )));
        }
        self.parts.push(component);
        Ok(self)
    }

    pub fn push_truncated(&mut self, component: Truncated) -> Result<&mut Self> {
        self.dropped += component.dropped;
        self.push(component.series)
    }

    pub fn finish(&self) -> Result<Residual> {
        let exact_through = self
            .parts
            .iter()
            .map(FracSeries::cutoff)
            .fold(f64::INFINITY, f64::min);
        if exact_through == f64::INFINITY {
            return Err(FracError::Parameter(
                "a residual needs at least one component".into(),
            ));
        }
        let mut series = FracSeries::zero(self.indices, exact_through)?;
        for part in &self.parts {
            series = series.add(part)?;
        }

        let contributions = self.parts.iter().flat_map(|p| {
            p.terms()
                .into_iter()
                .map(|t| (t.exponent, t.coefficient))
                .collect::<Vec<_>>()
        });
        let limit = exact_through + EXPONENT_TOL * exact_through.abs().max(1.0);
        let orders = group_by_exponent(contributions)
            .into_iter()
            .map(|(exponent, members)| ResidualOrder {
                exponent,
                value: members.iter().sum(),
                scale: members.iter().fold(0.0, |acc, c| acc.max(c.abs())),
                exact: exponent <= limit,
            })
            .collect();
        Ok(Residual {
            series,
            orders,
            exact_through,
            dropped: self.dropped,
        })
    }
}
