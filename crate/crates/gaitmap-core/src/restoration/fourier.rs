//! Truncated Fourier series over normalized phase.
//!
//! Coefficient layout is `[a0, a1, b1, a2, b2, ...]` for
//! `f(t) = a0 + sum_j a_j cos(TAU j t) + b_j sin(TAU j t)`, `t` in cycles.
//! Fitting is least squares on uniformly spaced samples; on a uniform grid
//! the design is orthogonal, so coefficients match the classic DFT-based
//! formulas to rounding error.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A periodic curve stored as truncated Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    coeffs: Vec<f64>,
}

impl FourierSeries {
    /// Fits a series of harmonic `order` to samples assumed uniform on
    /// `[0, 1)` (sample `i` at phase `i / n`).
    ///
    /// Requires `2*order + 1 <= n`; otherwise [`Error::OrderTooHigh`].
    pub fn fit(samples: &[f64], order: usize) -> Result<Self> {
        let n = samples.len();
        let terms = 2 * order + 1;
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if terms > n {
            return Err(Error::OrderTooHigh { order, n });
        }
        let design = DMatrix::from_fn(n, terms, |i, c| basis(c, i as f64 / n as f64));
        let rhs = DVector::from_column_slice(samples);
        let qr = design.qr();
        let q = qr.q();
        let r = qr.r();
        let theta = r
            .solve_upper_triangular(&(q.transpose() * rhs))
            .ok_or(Error::OrderTooHigh { order, n })?;
        Ok(FourierSeries {
            coeffs: theta.as_slice().to_vec(),
        })
    }

    /// Rebuilds a series from a stored coefficient vector
    /// (`[a0, a1, b1, ...]`, odd length).
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 == 0 {
            return Err(Error::InvalidParams(
                "fourier coefficients must have odd length [a0, a1, b1, ...]".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams(
                "fourier coefficients must be finite".into(),
            ));
        }
        Ok(FourierSeries { coeffs })
    }

    /// Harmonic order.
    pub fn order(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Coefficients in `[a0, a1, b1, ...]` layout.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluates the series at a phase (any real; the basis is periodic).
    pub fn eval(&self, phase: f64) -> f64 {
        let mut acc = self.coeffs[0];
        for j in 1..=self.order() {
            let angle = TAU * j as f64 * phase;
            acc += self.coeffs[2 * j - 1] * angle.cos() + self.coeffs[2 * j] * angle.sin();
        }
        acc
    }

    /// Samples the series on an `n`-point uniform phase grid.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.eval(i as f64 / n as f64)).collect()
    }

    /// RMS residual against samples on the fit grid.
    pub fn rms_residual(&self, samples: &[f64]) -> f64 {
        if samples.is_empty() {
            return 0.0;
        }
        let n = samples.len();
        let ss: f64 = samples
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let e = v - self.eval(i as f64 / n as f64);
                e * e
            })
            .sum();
        (ss / n as f64).sqrt()
    }
}

fn basis(column: usize, phase: f64) -> f64 {
    if column == 0 {
        return 1.0;
    }
    let j = column.div_ceil(2);
    let angle = TAU * j as f64 * phase;
    if column % 2 == 1 {
        angle.cos()
    } else {
        angle.sin()
    }
}
