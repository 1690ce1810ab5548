//! Closed-loop integration test.
//!
//! The corpus is built so that every stage has an exact expectation:
//!
//! * all four joints of one cycle are `mean + span * shape(t)` over shared
//!   shapes, sampled at exactly 110 samples per cycle, so every raw cycle
//!   is the same curve family member at identical sample phases;
//! * the hip mean is constant and each hip cycle starts a hair above it
//!   and ends below it, so segmentation must land every boundary exactly
//!   on a constructed cycle edge;
//! * lower-limb parameters are affine in the upper-limb parameters, so an
//!   exact affine feature map exists and identification residuals collapse
//!   to numerical dust;
//! * the restoration references share the lower-limb shapes, so the
//!   restored trajectory equals the true one up to the reference curve-fit
//!   residual — which bounds the end-to-end amplitude error.

mod common;

use gaitmap_core::features::permissive_band;
use gaitmap_core::{
    build_lower_feature, build_upper_feature, error_report, identify, run_pipeline, segment_cycles,
    synthesize_recording, GaitRecording, JointMap, SimulationConfig, SynthParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Samples per constructed cycle at 100 Hz; the 1.1 s period matches the
/// default nominal playback period, so emission curves are warp-free.
const SPC: usize = 110;
const SAMPLE_RATE: f64 = 100.0;
const N_CYCLES: usize = 26;
/// Constant hip mean; segmentation tracks its ascending crossings.
const HIP_MEAN: f64 = 18.5;

/// Builds the affinely-locked recording. Per cycle, the four upper-limb
/// parameters jitter independently; the lower-limb parameters are fixed
/// affine combinations of them.
fn build_recording(seed: u64) -> GaitRecording {
    let shoulder = common::shoulder_shape().sample(SPC);
    let elbow = common::elbow_shape().sample(SPC);
    let hip = common::hip_shape().sample(SPC);
    let knee = common::knee_shape().sample(SPC);
    // the hip shape must start barely above its mean and come back from
    // below, placing an ascending mean crossing exactly at every sample
    // index that is a multiple of SPC
    assert!(hip[0] > 0.0 && hip[0] < 0.05);
    assert!(*hip.last().unwrap() < -0.01);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = JointMap::from_fn(|_| Vec::with_capacity(N_CYCLES * SPC));
    for _ in 0..N_CYCLES {
        let sm = rng.random_range(3.0..7.0);
        let ss = rng.random_range(18.0..22.0);
        let em = rng.random_range(-28.0..-22.0);
        let es = rng.random_range(13.0..17.0);
        // lower-limb parameters locked to the upper ones
        let hip_span = 10.0 + 0.45 * ss + 0.12 * es;
        let knee_mean = -70.0 + 0.4 * sm - 0.3 * em;
        let knee_span = 30.0 + 0.8 * ss + 0.3 * es;

        let joints = [
            (gaitmap_core::JointId::Shoulder, &shoulder, sm, ss),
            (gaitmap_core::JointId::Elbow, &elbow, em, es),
            (gaitmap_core::JointId::Hip, &hip, HIP_MEAN, hip_span),
            (gaitmap_core::JointId::Knee, &knee, knee_mean, knee_span),
        ];
        for (joint, shape, mean, span) in joints {
            samples[joint].extend(shape.iter().map(|s| mean + span * s));
        }
    }
    GaitRecording::from_samples(samples, SAMPLE_RATE).unwrap()
}

#[test]
fn closed_loop_pipeline_reproduces_the_lower_trajectories() {
    let recording = build_recording(9090);
    let band = permissive_band();
    let config = SimulationConfig::default();
    assert_eq!(
        config.nominal_period_s,
        SPC as f64 / SAMPLE_RATE,
        "corpus is built for the default nominal period"
    );

    // segmentation must recover the constructed boundaries exactly
    let cycles = segment_cycles(&recording, &config.segment).unwrap();
    assert_eq!(cycles.len(), N_CYCLES - 2);
    for cycle in &cycles {
        assert_eq!(
            cycle.start_sample % SPC,
            0,
            "cycle {} start drifted",
            cycle.index
        );
        assert_eq!(
            cycle.end_sample - cycle.start_sample,
            SPC,
            "cycle {} length drifted",
            cycle.index
        );
    }

    // identification: the affine lock makes residuals numerical dust
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for cycle in &cycles {
        xs.push(build_upper_feature(cycle, &band).unwrap());
        ys.push(build_lower_feature(cycle, &band).unwrap());
    }
    let (map, residuals) = identify(&xs, &ys).unwrap();
    for r in 0..4 {
        assert!(
            residuals.mean[r].abs() <= 1e-9 && residuals.std[r] <= 1e-9,
            "component {r} residuals ({}, {}) are not exact",
            residuals.mean[r],
            residuals.std[r],
        );
    }

    // the full loop: restored trajectories must match the originals to
    // curve-fit accuracy, with zero measured lag
    let (refs, worst_rms) = common::family_reference_set(6, config.segment.n_grid);
    let tol = 2.0 * worst_rms;
    let output = run_pipeline(&recording, &band, &map, &refs, &config).unwrap();
    assert!(output.skipped.is_empty());
    assert_eq!(output.emissions.len(), cycles.len());
    assert_eq!(output.repaired_samples, 0);
    assert!(output.emissions.iter().all(|e| !e.ill_conditioned));

    let report = error_report(&output, &cycles).unwrap();
    assert_eq!(report.pairs, cycles.len());
    assert!(
        report.phase.mean.abs() <= 1e-12 && report.phase.std <= 1e-12,
        "phase error ({}, {}) should be zero",
        report.phase.mean,
        report.phase.std
    );
    for (joint, stats) in [
        ("hip", report.amplitude_hip),
        ("knee", report.amplitude_knee),
    ] {
        assert!(
            stats.mean.abs() <= tol,
            "{joint} amplitude mean {} exceeds fit accuracy {tol}",
            stats.mean
        );
        assert!(
            stats.std <= tol,
            "{joint} amplitude std {} exceeds fit accuracy {tol}",
            stats.std
        );
    }

    // the loop is bit-for-bit deterministic
    let again = run_pipeline(&recording, &band, &map, &refs, &config).unwrap();
    assert_eq!(output, again);
}

#[test]
fn synthetic_recordings_survive_the_loop_with_mild_noise() {
    // the generator corpus is no curve family, so this only pins sane
    // behaviour: everything segments, maps, restores, and reports finite
    // numbers under light measurement noise
    let params = SynthParams {
        n_cycles: 24,
        noise_std: 0.5,
        seed: 31,
        ..SynthParams::default()
    };
    let (recording, _) = synthesize_recording(&params).unwrap();
    let band = permissive_band();
    let config = SimulationConfig::default();
    let cycles = segment_cycles(&recording, &config.segment).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for cycle in &cycles {
        if let (Ok(x), Ok(y)) = (
            build_upper_feature(cycle, &band),
            build_lower_feature(cycle, &band),
        ) {
            xs.push(x);
            ys.push(y);
        }
    }
    assert!(xs.len() >= 15);
    let (map, _) = identify(&xs, &ys).unwrap();
    let (refs, _) = common::family_reference_set(6, config.segment.n_grid);
    let output = run_pipeline(&recording, &band, &map, &refs, &config).unwrap();
    assert!(output.emissions.len() >= 15);
    let report = error_report(&output, &cycles).unwrap();
    for stats in [
        report.phase,
        report.amplitude_hip,
        report.amplitude_knee,
        report.phase_difference,
        report.phase_difference_baseline,
    ] {
        assert!(stats.mean.is_finite() && stats.std.is_finite());
    }
    assert!(report.phase.mean.abs() <= 0.5);
}
