//! Scalar functions of arc length on a uniform grid, with analytic
//! derivatives from a quintic spline interpolant.

use std::io::{self, Write};

use thiserror::Error;

use crate::spline::SplineFit;

/// Highest derivative order the interpolant provides directly; deeper
/// requests go through [`ScalarField::derivative`], which refits.
pub const DIRECT_DEPTH: u32 = 4;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("need at least 8 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample {0} is not finite")]
    NonFinite(usize),
    #[error("domain is empty or inverted")]
    InvalidDomain,
    #[error("fields are on different grids")]
    GridMismatch,
}

/// Smooth scalar function of arc length over [0, L) (periodic) or [a, b]
/// (open), sampled uniformly and interpolated by a quintic spline.
///
/// Evaluation clamps open fields to their domain and wraps periodic ones.
/// `lineage` counts how many derivative orders separate the samples from
/// primary data; it grows when a field is refit from derivative samples
/// and gates the accuracy warnings downstream.
#[derive(Clone, Debug)]
pub struct ScalarField {
    samples: Vec<f64>,
    start: f64,
    step: f64,
    periodic: bool,
    lineage: u32,
    fit: SplineFit,
}

impl ScalarField {
    /// Field over one period [0, L) from samples at s_i = i·L/n.
    pub fn periodic(samples: Vec<f64>, period: f64) -> Result<Self, FieldError> {
        if !(period > 0.0) {
            return Err(FieldError::InvalidDomain);
        }
        check_samples(&samples)?;
        let step = period / samples.len() as f64;
        let fit = SplineFit::periodic(&samples);
        Ok(ScalarField { samples, start: 0.0, step, periodic: true, lineage: 0, fit })
    }

    /// Field over [start, end] from samples at s_i = start + i·(end−start)/(n−1).
    pub fn open(samples: Vec<f64>, start: f64, end: f64) -> Result<Self, FieldError> {
        if !(end > start) {
            return Err(FieldError::InvalidDomain);
        }
        check_samples(&samples)?;
        let step = (end - start) / (samples.len() - 1) as f64;
        let fit = SplineFit::open(&samples);
        Ok(ScalarField { samples, start, step, periodic: false, lineage: 0, fit })
    }

    /// Periodic field sampled from a closure.
    pub fn periodic_fn(n: usize, period: f64, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        let step = period / n as f64;
        Self::periodic((0..n).map(|i| f(i as f64 * step)).collect(), period)
    }

    /// Open field sampled from a closure.
    pub fn open_fn(
        n: usize,
        start: f64,
        end: f64,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, FieldError> {
        let step = (end - start) / (n - 1) as f64;
        Self::open((0..n).map(|i| f(start + i as f64 * step)).collect(), start, end)
    }

    /// New field on this field's grid from replacement samples, keeping
    /// the larger of `lineage` and this field's own.
    pub fn with_samples(&self, samples: Vec<f64>, lineage: u32) -> Self {
        assert_eq!(samples.len(), self.samples.len());
        let fit = if self.periodic { SplineFit::periodic(&samples) } else { SplineFit::open(&samples) };
        ScalarField { samples, lineage: lineage.max(self.lineage), fit, ..*self }
    }

    /// Pointwise map of the samples onto the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_samples(self.samples.iter().map(|&v| f(v)).collect(), self.lineage)
    }

    pub fn value(&self, s: f64) -> f64 {
        self.fit.eval((s - self.start) / self.step, 0)
    }

    /// m-th derivative at s, directly from the interpolant; m ≤ 4.
    pub fn derivative_value(&self, s: f64, m: u32) -> f64 {
        assert!(m <= DIRECT_DEPTH, "direct evaluation stops at order {DIRECT_DEPTH}");
        self.fit.eval((s - self.start) / self.step, m as usize) / self.step.powi(m as i32)
    }

    /// m-th derivative as a new field, refit from derivative samples.
    ///
    /// Each refit draws on smoothed data rather than primary samples, so
    /// repeated application loses accuracy; a warning records when the
    /// combined depth exceeds what one interpolant can certify.
    pub fn derivative(&self, m: u32) -> Self {
        let mut current = self.clone();
        let mut remaining = m;
        while remaining > 0 {
            let take = remaining.min(DIRECT_DEPTH);
            let samples: Vec<f64> =
                current.positions().map(|s| current.derivative_value(s, take)).collect();
            let lineage = current.lineage + take;
            if lineage > DIRECT_DEPTH {
                log::warn!(
                    "derivative depth {lineage} exceeds the interpolant's direct range {DIRECT_DEPTH}; \
                     values now come from resampled, smoothed data"
                );
            }
            current = current.with_samples(samples, lineage);
            remaining -= take;
        }
        current
    }

    /// First derivative as a new field, built by eighth-order differences
    /// of the samples instead of differentiating the fit. On smooth data
    /// this keeps the derivative samples consistent with the originals to
    /// near machine precision; near the ends of an open grid, where the
    /// stencil does not fit, the fit's derivative fills in.
    pub fn sampled_derivative(&self) -> Self {
        const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let n = self.samples.len();
        if n < 9 {
            return self.derivative(1);
        }
        let derivs: Vec<f64> = (0..n)
            .map(|i| {
                if !self.periodic && (i < 4 || i + 4 >= n) {
                    let s = self.start + i as f64 * self.step;
                    return self.derivative_value(s, 1);
                }
                let mut sum = 0.0;
                for (j, c) in D1.iter().enumerate() {
                    sum += (self.samples[(i + j + 1) % n] - self.samples[(i + n - j - 1) % n]) * c;
                }
                sum / self.step
            })
            .collect();
        self.with_samples(derivs, self.lineage + 1)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn lineage(&self) -> u32 {
        self.lineage
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    /// Domain end: period L for periodic fields, last grid point otherwise.
    pub fn end(&self) -> f64 {
        if self.periodic {
            self.start + self.step * self.samples.len() as f64
        } else {
            self.start + self.step * (self.samples.len() - 1) as f64
        }
    }

    /// Grid positions s_i.
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(move |i| self.start + i as f64 * self.step)
    }

    /// Integral over the whole domain, exact for the interpolant because
    /// the quadrature panels align with the spline cells.
    pub fn integral(&self) -> f64 {
        let cells = if self.periodic { self.samples.len() } else { self.samples.len() - 1 };
        crate::numeric::integrate(|s| self.value(s), self.start, self.end(), cells)
    }

    /// True when two fields share grid geometry and periodicity.
    pub fn same_grid(&self, other: &ScalarField) -> bool {
        self.samples.len() == other.samples.len()
            && self.periodic == other.periodic
            && (self.start - other.start).abs() < 1e-12
            && (self.step - other.step).abs() < 1e-12 * self.step.abs().max(1.0)
    }

    /// Write the field as `s,value` CSV lines.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "s,value")?;
        for (s, v) in self.positions().zip(&self.samples) {
            writeln!(out, "{s},{v}")?;
        }
        Ok(())
    }
}

fn check_samples(samples: &[f64]) -> Result<(), FieldError> {
    if samples.len() < 8 {
        return Err(FieldError::TooFewSamples(samples.len()));
    }
    if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
        return Err(FieldError::NonFinite(bad));
    }
    Ok(())
}
