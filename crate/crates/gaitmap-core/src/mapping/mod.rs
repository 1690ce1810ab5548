//! Affine upper-to-lower feature mapping and its least-squares identification.
//!
//! The driven lower-limb feature vector is modelled as `y = T x + b` with
//! `T` a 4x4 gain matrix and `b` a 4-vector offset, both in degrees.
//! [`identify`] stacks training pairs into the design matrix
//! `Phi = [x_i^T 1]` (m x 5) and solves the four independent least-squares
//! problems column-wise via QR. A design condition number above
//! [`CONDITION_LIMIT`] aborts identification: the corpus does not excite
//! four independent feature directions and the fit would be meaningless.
//!
//! [`residual_stats`] reports per-component residual mean and population
//! standard deviation of `T x_i + b - y_i`; at the least-squares optimum on
//! the training set the means vanish to machine precision because the
//! design contains an intercept column.

pub mod io;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::features::{LowerFeature, UpperFeature};

/// Condition-number ceiling for the design and reference matrices.
pub const CONDITION_LIMIT: f64 = 1e8;

/// Minimum training pairs for a 5-parameter-per-component fit.
pub const MIN_TRAINING_PAIRS: usize = 5;

/// Affine map from upper features to lower features, degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    /// Row-major gain matrix: `t[r]` produces output component `r`.
    pub t: [[f64; 4]; 4],
    /// Offset vector.
    pub b: [f64; 4],
}

impl LinearMap {
    /// Applies the map to a raw feature vector.
    pub fn apply(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut y = self.b;
        for (out, row) in y.iter_mut().zip(&self.t) {
            for (coeff, value) in row.iter().zip(x) {
                *out += coeff * value;
            }
        }
        y
    }
}

/// Residual statistics of a fitted map on a pair set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStats {
    /// Per-component residual mean, degrees.
    pub mean: [f64; 4],
    /// Per-component population standard deviation, degrees.
    pub std: [f64; 4],
    /// Number of pairs the statistics describe.
    pub count: usize,
}

/// Stacks upper features into design rows `(x1, x2, x3, x4, 1)`.
pub fn assemble_design(xs: &[UpperFeature]) -> Vec<[f64; 5]> {
    xs.iter()
        .map(|x| {
            let v = x.values;
            [v[0], v[1], v[2], v[3], 1.0]
        })
        .collect()
}

fn check_aligned(xs: &[UpperFeature], ys: &[LowerFeature]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParams(format!(
            "feature pair mismatch: {} upper vs {} lower",
            xs.len(),
            ys.len()
        )));
    }
    for (x, y) in xs.iter().zip(ys) {
        if x.cycle_index != y.cycle_index {
            return Err(Error::InvalidParams(format!(
                "unaligned pair: upper cycle {} vs lower cycle {}",
                x.cycle_index, y.cycle_index
            )));
        }
    }
    Ok(())
}

/// Identifies `(T, b)` from aligned feature pairs by least squares.
///
/// Requires at least [`MIN_TRAINING_PAIRS`] pairs and a design condition
/// number below [`CONDITION_LIMIT`]. Returns the map together with its
/// training residual statistics.
pub fn identify(xs: &[UpperFeature], ys: &[LowerFeature]) -> Result<(LinearMap, ResidualStats)> {
    check_aligned(xs, ys)?;
    let m = xs.len();
    if m < MIN_TRAINING_PAIRS {
        return Err(Error::TooFewSamples {
            needed: MIN_TRAINING_PAIRS,
            got: m,
        });
    }

    let rows = assemble_design(xs);
    let phi = DMatrix::from_fn(m, 5, |r, c| rows[r][c]);

    let cond = condition_number(&phi);
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::RankDeficient { cond });
    }

    let qr = phi.clone().qr();
    let q = qr.q();
    let r = qr.r();

    let mut t = [[0.0f64; 4]; 4];
    let mut b = [0.0f64; 4];
    for component in 0..4 {
        let rhs = DVector::from_fn(m, |i, _| ys[i].values[component]);
        let qtb = q.transpose() * rhs;
        let theta = r
            .solve_upper_triangular(&qtb)
            .ok_or(Error::RankDeficient { cond })?;
        t[component].copy_from_slice(&theta.as_slice()[..4]);
        b[component] = theta[4];
    }

    let map = LinearMap { t, b };
    let stats = residual_stats(&map, xs, ys)?;
    Ok((map, stats))
}

/// Condition number (ratio of extreme singular values) of a matrix.
pub(crate) fn condition_number(matrix: &DMatrix<f64>) -> f64 {
    let svd = matrix.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Applies a fitted map to one upper feature vector.
pub fn apply_map(map: &LinearMap, x: &UpperFeature) -> [f64; 4] {
    map.apply(&x.values)
}

/// Residual mean and population std of `map` on aligned pairs.
///
/// Needs at least two pairs for a meaningful deviation.
pub fn residual_stats(
    map: &LinearMap,
    xs: &[UpperFeature],
    ys: &[LowerFeature],
) -> Result<ResidualStats> {
    check_aligned(xs, ys)?;
    let m = xs.len();
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    let mut mean = [0.0f64; 4];
    let mut std = [0.0f64; 4];
    for component in 0..4 {
        let residuals: Vec<f64> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| map.apply(&x.values)[component] - y.values[component])
            .collect();
        let (mu, sigma) = crate::stats::mean_std(&residuals);
        mean[component] = mu;
        std[component] = sigma;
    }
    Ok(ResidualStats {
        mean,
        std,
        count: m,
    })
}
