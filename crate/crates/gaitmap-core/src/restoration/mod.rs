//! Reference-based trajectory restoration.
//!
//! A mapped lower feature vector `y'` fixes only four scalars per cycle;
//! the full hip and knee curves are rebuilt from four *reference* cycles
//! harvested from training data:
//!
//! 1. [`cluster_features`] groups training cycles by k-means on their
//!    feature vectors (paired 8-dim concatenation by default, pooled 4-dim
//!    as an alternative).
//! 2. [`select_representative`] keeps the four largest clusters (ties to
//!    the lower cluster id), averaging member lower-feature vectors and
//!    member curves into raw references.
//! 3. [`fit_reference_curve`] compresses each raw reference curve into a
//!    truncated Fourier series.
//! 4. [`solve_weights`] solves the 4x4 system `R a = y'` (columns of `R`
//!    are the reference vectors), and [`restore_curve`] blends reference
//!    curves with those weights: `y(t) = sum_k a_k f_k(t)`.
//!
//! Restoration is exact on the reference vectors themselves and affine in
//! `y'`, so any mapped vector inside the references' span restores to a
//! curve whose features reproduce `y'` up to curve-fit truncation error.

pub mod fourier;
pub mod io;
mod kmeans;

pub use fourier::FourierSeries;
pub use kmeans::{kmeans, ClusterModel, MAX_ITERATIONS, MAX_RESTARTS};

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::features::{LowerFeature, UpperFeature};
use crate::gait::GaitCycle;
use crate::joints::JointId;
use crate::mapping::CONDITION_LIMIT;

/// Default cluster count for reference harvesting.
pub const DEFAULT_CLUSTERS: usize = 9;

/// Default Fourier order for reference curves.
pub const DEFAULT_FIT_ORDER: usize = 6;

/// How upper and lower features combine into clustering points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MergeStrategy {
    /// One 8-dim point per cycle: `(x; y)` concatenated.
    #[default]
    PairedConcat,
    /// Two 4-dim points per cycle: `x` and `y` pooled into one cloud.
    Pooled,
}

impl MergeStrategy {
    /// Name used by CLI flags and config files.
    pub fn name(self) -> &'static str {
        match self {
            MergeStrategy::PairedConcat => "paired",
            MergeStrategy::Pooled => "pooled",
        }
    }

    /// Inverse of [`MergeStrategy::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paired" => Some(MergeStrategy::PairedConcat),
            "pooled" => Some(MergeStrategy::Pooled),
            _ => None,
        }
    }
}

/// Clusters aligned feature pairs into `k` groups.
///
/// With [`MergeStrategy::PairedConcat`] point `i` is the 8-dim
/// concatenation of pair `i`; with [`MergeStrategy::Pooled`] the cloud
/// holds all upper vectors first, then all lower vectors (2m points), and
/// pair `i`'s cluster is read from its lower point `m + i`.
pub fn cluster_features(
    xs: &[UpperFeature],
    ys: &[LowerFeature],
    k: usize,
    seed: u64,
    strategy: MergeStrategy,
) -> Result<ClusterModel> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParams(format!(
            "feature pair mismatch: {} upper vs {} lower",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let points: Vec<Vec<f64>> = match strategy {
        MergeStrategy::PairedConcat => xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let mut p = Vec::with_capacity(8);
                p.extend_from_slice(&x.values);
                p.extend_from_slice(&y.values);
                p
            })
            .collect(),
        MergeStrategy::Pooled => xs
            .iter()
            .map(|x| x.values.to_vec())
            .chain(ys.iter().map(|y| y.values.to_vec()))
            .collect(),
    };
    kmeans(&points, k, seed)
}

/// Per-pair cluster ids from a model built by [`cluster_features`].
///
/// Infers the merge strategy from the assignment count: `m` assignments
/// mean paired points, `2m` mean pooled (pair id from the lower half).
fn pair_assignments(model: &ClusterModel, n_pairs: usize) -> Result<Vec<usize>> {
    if model.assignments.len() == n_pairs {
        Ok(model.assignments.clone())
    } else if model.assignments.len() == 2 * n_pairs {
        Ok(model.assignments[n_pairs..].to_vec())
    } else {
        Err(Error::InvalidParams(format!(
            "cluster model covers {} points but {} pairs were given",
            model.assignments.len(),
            n_pairs
        )))
    }
}

/// Raw reference material before Fourier fitting: mean feature vectors and
/// mean member curves of the four largest clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct RawReferences {
    /// Mean lower-feature vector per reference, largest cluster first.
    pub vectors: [[f64; 4]; 4],
    /// Mean hip curve per reference (phase grid of the training cycles).
    pub hip_curves: [Vec<f64>; 4],
    /// Mean knee curve per reference.
    pub knee_curves: [Vec<f64>; 4],
    /// Member count per selected cluster.
    pub member_counts: [usize; 4],
}

/// Selects the four largest clusters and averages their members.
///
/// `cycles` must contain the training cycles the features were extracted
/// from (matched by cycle index). Tie-breaks on cluster size go to the
/// lower cluster id; the references are ordered largest-first. Fails with
/// [`Error::TooFewClusters`] when fewer than four clusters are non-empty
/// and with [`Error::SingularReferenceMatrix`] when the mean vectors do
/// not span four directions (condition number above the shared limit).
pub fn select_representative(
    model: &ClusterModel,
    ys: &[LowerFeature],
    cycles: &[GaitCycle],
) -> Result<RawReferences> {
    let assignments = pair_assignments(model, ys.len())?;
    let mut sizes: Vec<(usize, usize)> = (0..model.k)
        .map(|c| (c, assignments.iter().filter(|&&a| a == c).count()))
        .collect();
    let non_empty = sizes.iter().filter(|(_, n)| *n > 0).count();
    if non_empty < 4 {
        return Err(Error::TooFewClusters {
            needed: 4,
            got: non_empty,
        });
    }
    // largest first, ties to the lower cluster id
    sizes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let n_grid = cycles
        .first()
        .map(GaitCycle::n_grid)
        .ok_or(Error::EmptyInput)?;
    let mut vectors = [[0.0f64; 4]; 4];
    let mut hip_curves: [Vec<f64>; 4] = Default::default();
    let mut knee_curves: [Vec<f64>; 4] = Default::default();
    let mut member_counts = [0usize; 4];

    for (slot, &(cluster, size)) in sizes.iter().take(4).enumerate() {
        let mut vec_sum = [0.0f64; 4];
        let mut hip_sum = vec![0.0f64; n_grid];
        let mut knee_sum = vec![0.0f64; n_grid];
        for (i, y) in ys.iter().enumerate() {
            if assignments[i] != cluster {
                continue;
            }
            let cycle = cycles
                .iter()
                .find(|c| c.index == y.cycle_index)
                .ok_or_else(|| {
                    Error::InvalidParams(format!("no training cycle with index {}", y.cycle_index))
                })?;
            for (s, v) in vec_sum.iter_mut().zip(&y.values) {
                *s += v;
            }
            for (s, v) in hip_sum.iter_mut().zip(cycle.curve(JointId::Hip)) {
                *s += v;
            }
            for (s, v) in knee_sum.iter_mut().zip(cycle.curve(JointId::Knee)) {
                *s += v;
            }
        }
        let scale = 1.0 / size as f64;
        for v in vec_sum.iter_mut() {
            *v *= scale;
        }
        vectors[slot] = vec_sum;
        hip_curves[slot] = hip_sum.into_iter().map(|v| v * scale).collect();
        knee_curves[slot] = knee_sum.into_iter().map(|v| v * scale).collect();
        member_counts[slot] = size;
    }

    let raw = RawReferences {
        vectors,
        hip_curves,
        knee_curves,
        member_counts,
    };
    check_reference_condition(&raw.vectors)?;
    Ok(raw)
}

fn reference_matrix(vectors: &[[f64; 4]; 4]) -> Matrix4<f64> {
    // reference vectors are the columns
    Matrix4::from_fn(|r, c| vectors[c][r])
}

fn check_reference_condition(vectors: &[[f64; 4]; 4]) -> Result<()> {
    let matrix = reference_matrix(vectors);
    let svd = matrix.svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if min <= 0.0 || max / min > CONDITION_LIMIT {
        return Err(Error::SingularReferenceMatrix);
    }
    Ok(())
}

/// Fits one raw reference curve into a Fourier series of `order`.
pub fn fit_reference_curve(curve: &[f64], order: usize) -> Result<FourierSeries> {
    FourierSeries::fit(curve, order)
}

/// Four reference feature vectors with fitted hip and knee curves.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    vectors: [[f64; 4]; 4],
    hip: [FourierSeries; 4],
    knee: [FourierSeries; 4],
}

impl ReferenceSet {
    /// Builds a set from raw references, fitting curves at `order`.
    pub fn from_raw(raw: &RawReferences, order: usize) -> Result<Self> {
        let fit4 = |curves: &[Vec<f64>; 4]| -> Result<[FourierSeries; 4]> {
            Ok([
                fit_reference_curve(&curves[0], order)?,
                fit_reference_curve(&curves[1], order)?,
                fit_reference_curve(&curves[2], order)?,
                fit_reference_curve(&curves[3], order)?,
            ])
        };
        ReferenceSet::new(raw.vectors, fit4(&raw.hip_curves)?, fit4(&raw.knee_curves)?)
    }

    /// Assembles a set from parts, revalidating the reference matrix.
    pub fn new(
        vectors: [[f64; 4]; 4],
        hip: [FourierSeries; 4],
        knee: [FourierSeries; 4],
    ) -> Result<Self> {
        check_reference_condition(&vectors)?;
        let order = hip[0].order();
        if hip.iter().chain(&knee).any(|s| s.order() != order) {
            return Err(Error::InvalidParams(
                "reference curves disagree on fourier order".into(),
            ));
        }
        Ok(ReferenceSet { vectors, hip, knee })
    }

    pub fn vectors(&self) -> &[[f64; 4]; 4] {
        &self.vectors
    }

    pub fn hip_series(&self, k: usize) -> &FourierSeries {
        &self.hip[k]
    }

    pub fn knee_series(&self, k: usize) -> &FourierSeries {
        &self.knee[k]
    }

    /// Fourier order shared by all reference curves.
    pub fn fit_order(&self) -> usize {
        self.hip[0].order()
    }

    /// Condition number of the reference matrix.
    pub fn condition_number(&self) -> f64 {
        let svd = reference_matrix(&self.vectors).svd(false, false);
        svd.singular_values.max() / svd.singular_values.min()
    }
}

/// Blend weights over the four references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestorationWeights {
    pub a: [f64; 4],
    /// Set when the reference matrix condition number exceeds the shared
    /// limit; the solution is then numerically fragile.
    pub ill_conditioned: bool,
}

/// Solves `R a = y'` for the blend weights.
///
/// The reference matrix was validated at construction; this re-checks the
/// residual so silent NaN/inf propagation cannot slip through.
pub fn solve_weights(y_prime: &[f64; 4], refs: &ReferenceSet) -> Result<RestorationWeights> {
    if y_prime.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams(
            "mapped feature vector must be finite".into(),
        ));
    }
    let r = reference_matrix(&refs.vectors);
    let rhs = Vector4::from_column_slice(y_prime);
    let a = r.lu().solve(&rhs).ok_or(Error::SingularReferenceMatrix)?;
    let residual = (r * a - rhs).norm();
    let scale = rhs.norm().max(1.0);
    if !residual.is_finite() || residual > 1e-9 * scale {
        return Err(Error::SingularReferenceMatrix);
    }
    Ok(RestorationWeights {
        a: [a[0], a[1], a[2], a[3]],
        ill_conditioned: refs.condition_number() > CONDITION_LIMIT,
    })
}

/// Restored hip and knee values at one phase.
pub fn restore_at(weights: &RestorationWeights, refs: &ReferenceSet, phase: f64) -> (f64, f64) {
    let mut hip = 0.0;
    let mut knee = 0.0;
    for k in 0..4 {
        hip += weights.a[k] * refs.hip[k].eval(phase);
        knee += weights.a[k] * refs.knee[k].eval(phase);
    }
    (hip, knee)
}

/// Restores full hip and knee curves on an `n`-point phase grid.
pub fn restore_curve(
    weights: &RestorationWeights,
    refs: &ReferenceSet,
    n: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut hip = Vec::with_capacity(n);
    let mut knee = Vec::with_capacity(n);
    for i in 0..n {
        let (h, k) = restore_at(weights, refs, i as f64 / n as f64);
        hip.push(h);
        knee.push(k);
    }
    (hip, knee)
}

/// Four hand-made references sharing one unit shape per joint:
/// `f_k = mean_k + span_k * s(t)`. Shared shapes make extraction affine
/// in the weights, which the pipeline tests exploit.
#[cfg(test)]
pub(crate) fn shared_shape_references() -> ReferenceSet {
    use std::f64::consts::TAU;
    let hip_shape = |t: f64| (TAU * t).sin();
    let knee_shape = |t: f64| (TAU * (t + 0.05)).sin();
    let n = 100;
    let sample = |f: &dyn Fn(f64) -> f64, mean: f64, span: f64| -> Vec<f64> {
        (0..n)
            .map(|i| mean + span * f(i as f64 / n as f64))
            .collect()
    };
    let hip_params = [(18.0, 22.0), (21.0, 24.0), (14.0, 19.0), (24.0, 27.0)];
    let knee_params = [(-55.0, 48.0), (-50.0, 45.0), (-60.0, 51.0), (-47.0, 42.0)];
    let mut vectors = [[0.0; 4]; 4];
    let mut hip = Vec::new();
    let mut knee = Vec::new();
    for k in 0..4 {
        let (hm, hs) = hip_params[k];
        let (km, ks) = knee_params[k];
        vectors[k] = [hm - hs, hm + hs, km + ks, km - ks];
        hip.push(FourierSeries::fit(&sample(&hip_shape, hm, hs), 6).unwrap());
        knee.push(FourierSeries::fit(&sample(&knee_shape, km, ks), 6).unwrap());
    }
    ReferenceSet::new(
        vectors,
        [
            hip[0].clone(),
            hip[1].clone(),
            hip[2].clone(),
            hip[3].clone(),
        ],
        [
            knee[0].clone(),
            knee[1].clone(),
            knee[2].clone(),
            knee[3].clone(),
        ],
    )
    .unwrap()
}
