//! Shared fixtures for the integration tests.
//!
//! Two kinds of ground truth live here: the published reference operator
//! and cluster vectors, frozen as a fixed oracle, and a harmonic "shape
//! family" generator. Members of one family share a single periodic shape
//! per joint and differ only through an affine `mean + span * shape(t)`
//! re-scaling, so any convex blend of members is again a family member and
//! its extrema are the same blend of the members' extrema. That closure
//! property is what lets round-trip tests state exact expectations.
#![allow(dead_code)]

use std::f64::consts::TAU;

use gaitmap_core::{FourierSeries, LinearMap, ReferenceSet};

/// Published reference map used as a fixed oracle across the test suite.
pub fn oracle_map() -> LinearMap {
    LinearMap {
        t: [
            [0.0946, -0.1917, 1.6623, -0.0483],
            [-0.0151, -0.1066, 1.3587, 0.0959],
            [0.2514, -0.1003, -1.5821, 0.2368],
            [0.0907, -0.1945, -1.0221, -0.0946],
        ],
        b: [3.0487, 40.2068, -3.3855, -89.9575],
    }
}

/// Published reference feature vectors used as a fixed oracle, in the
/// lower-limb component order (hip trough, hip peak, knee peak, knee
/// trough), degrees.
pub fn oracle_vectors() -> [[f64; 4]; 4] {
    [
        [-4.0344, 39.8672, -8.0813, -102.6813],
        [-0.9446, 43.0250, -5.5536, -99.4214],
        [-3.3208, 42.1188, -7.9562, -105.1646],
        [3.1625, 45.8825, -8.2300, -102.1600],
    ]
}

/// Periodic harmonic mix `sum_j c[j] * sin(TAU * (j+1) * (t - shift))`.
///
/// Every term integrates to zero over a period and sums to zero over any
/// uniform grid that divides the period, so a sampled shape has exactly
/// zero mean regardless of `shift`.
#[derive(Debug, Clone)]
pub struct HarmonicShape {
    pub coeffs: Vec<f64>,
    pub shift: f64,
}

impl HarmonicShape {
    pub fn new(coeffs: &[f64], shift: f64) -> Self {
        HarmonicShape {
            coeffs: coeffs.to_vec(),
            shift,
        }
    }

    /// Shape value at cycle position `t` (period 1).
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * (TAU * (j + 1) as f64 * (t - self.shift)).sin())
            .sum()
    }

    /// `n` uniform samples over one period, `t = i / n`.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.eval(i as f64 / n as f64)).collect()
    }

    /// Panics unless the sampled shape has exactly one interior local
    /// minimum and maximum; family tests rely on unimodal shapes so that
    /// extremum selection cannot jump between competing candidates.
    pub fn assert_unimodal(&self, n: usize) {
        let s = self.sample(n);
        let mut minima = 0;
        let mut maxima = 0;
        for i in 1..n - 1 {
            if s[i] < s[i - 1] && s[i] < s[i + 1] {
                minima += 1;
            }
            if s[i] > s[i - 1] && s[i] > s[i + 1] {
                maxima += 1;
            }
        }
        assert!(
            minima == 1 && maxima == 1,
            "shape must be unimodal on the grid, found {minima} minima / {maxima} maxima"
        );
    }
}

/// Hip shape: dominant fundamental, mild second and third harmonics, and a
/// small seventh harmonic that an order-six fit cannot represent — the fit
/// residual of family curves is therefore honestly nonzero. The slight
/// negative shift puts a rising zero crossing just before `t = 0`, so the
/// shape starts barely positive.
pub fn hip_shape() -> HarmonicShape {
    HarmonicShape::new(&[1.0, 0.10, 0.04, 0.0, 0.0, 0.0, 0.012], -0.003)
}

/// Knee shape; same construction, different mix and lead.
pub fn knee_shape() -> HarmonicShape {
    HarmonicShape::new(&[1.0, 0.14, 0.05, 0.0, 0.0, 0.0, 0.015], 0.05)
}

/// Shoulder shape for upper-limb family corpora.
pub fn shoulder_shape() -> HarmonicShape {
    HarmonicShape::new(&[1.0, 0.10, 0.0, 0.0, 0.0, 0.0, 0.010], 0.02)
}

/// Elbow shape for upper-limb family corpora.
pub fn elbow_shape() -> HarmonicShape {
    HarmonicShape::new(&[1.0, 0.12, 0.04, 0.0, 0.0, 0.0, 0.010], 0.06)
}

/// Hip `(mean, span)` parameters of the four family members, degrees.
/// Deliberately non-round: round values risk accidental rational
/// dependence between members, which makes the reference matrix singular.
pub const FAMILY_HIP_PARAMS: [(f64, f64); 4] =
    [(18.3, 22.1), (21.7, 19.4), (14.2, 24.8), (24.9, 26.3)];

/// Knee `(mean, span)` parameters of the four family members, degrees.
pub const FAMILY_KNEE_PARAMS: [(f64, f64); 4] =
    [(-54.6, 47.9), (-49.3, 51.6), (-60.8, 44.2), (-47.1, 41.3)];

/// One family member curve on an `n`-point grid.
pub fn family_curve(shape: &HarmonicShape, mean: f64, span: f64, n: usize) -> Vec<f64> {
    shape.sample(n).iter().map(|s| mean + span * s).collect()
}

/// Reference set whose members share the hip and knee shapes.
///
/// Reference vectors are the grid extrema of the raw member curves, in
/// feature order (hip trough, hip peak, knee peak, knee trough); curves are
/// fitted at `order`. Returns the set together with the largest curve-fit
/// RMS residual across all eight member curves, which is the natural
/// accuracy scale for restoration round trips.
pub fn family_reference_set(order: usize, n: usize) -> (ReferenceSet, f64) {
    let hip = hip_shape();
    let knee = knee_shape();
    hip.assert_unimodal(n);
    knee.assert_unimodal(n);

    let grid_min = |c: &[f64]| c.iter().copied().fold(f64::INFINITY, f64::min);
    let grid_max = |c: &[f64]| c.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut vectors = [[0.0; 4]; 4];
    let mut hip_fits = Vec::with_capacity(4);
    let mut knee_fits = Vec::with_capacity(4);
    let mut worst_rms = 0.0_f64;
    for k in 0..4 {
        let (hm, hs) = FAMILY_HIP_PARAMS[k];
        let (km, ks) = FAMILY_KNEE_PARAMS[k];
        let hip_curve = family_curve(&hip, hm, hs, n);
        let knee_curve = family_curve(&knee, km, ks, n);
        vectors[k] = [
            grid_min(&hip_curve),
            grid_max(&hip_curve),
            grid_max(&knee_curve),
            grid_min(&knee_curve),
        ];
        let hip_fit = FourierSeries::fit(&hip_curve, order).unwrap();
        let knee_fit = FourierSeries::fit(&knee_curve, order).unwrap();
        worst_rms = worst_rms
            .max(hip_fit.rms_residual(&hip_curve))
            .max(knee_fit.rms_residual(&knee_curve));
        hip_fits.push(hip_fit);
        knee_fits.push(knee_fit);
    }
    let into4 = |v: Vec<FourierSeries>| -> [FourierSeries; 4] { v.try_into().unwrap() };
    let refs = ReferenceSet::new(vectors, into4(hip_fits), into4(knee_fits)).unwrap();
    (refs, worst_rms)
}

/// Reference set carrying the published oracle vectors with family-shaped
/// curves, for tests that exercise weight recovery on published numbers.
pub fn oracle_reference_set(order: usize, n: usize) -> ReferenceSet {
    let (family, _) = family_reference_set(order, n);
    let series = |k: usize, hip: bool| -> FourierSeries {
        if hip {
            family.hip_series(k).clone()
        } else {
            family.knee_series(k).clone()
        }
    };
    ReferenceSet::new(
        oracle_vectors(),
        [
            series(0, true),
            series(1, true),
            series(2, true),
            series(3, true),
        ],
        [
            series(0, false),
            series(1, false),
            series(2, false),
            series(3, false),
        ],
    )
    .unwrap()
}
