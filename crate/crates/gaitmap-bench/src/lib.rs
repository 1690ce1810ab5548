//! Shared fixtures for the pipeline benchmarks.
//!
//! Training a full pipeline (change-rate band, linear map, reference set)
//! is expensive enough that each benchmark should build it once, outside
//! the timed loop. These helpers run the same flow the `identify` command
//! uses, from a fixed seed, so timings stay comparable across runs.

use gaitmap_core::features::{despike_recording, estimate_change_rate};
use gaitmap_core::{
    build_lower_feature, build_upper_feature, cluster_features, fit_band, fit_phase_windows,
    identify, segment_cycles, select_representative, synthesize_recording, ChangeRateBand,
    GaitCycle, GaitRecording, JointId, JointMap, LinearMap, LowerFeature, MergeStrategy,
    ReferenceSet, SegmentConfig, SynthParams, UpperFeature,
};

/// Synthetic session with mild noise and a fixed seed.
pub fn recording(n_cycles: usize) -> GaitRecording {
    let params = SynthParams {
        n_cycles,
        noise_std: 0.5,
        seed: 4242,
        ..SynthParams::default()
    };
    synthesize_recording(&params).expect("synthesis").0
}

/// Change-rate band fitted on a recording, plus the despiked cycles.
pub fn train_band(recording: &GaitRecording) -> (ChangeRateBand, Vec<GaitCycle>) {
    let config = SegmentConfig::default();
    let raw_cycles = segment_cycles(recording, &config).expect("segmentation");
    let mut pooled = JointMap::from_fn(|_| Vec::new());
    for cycle in &raw_cycles {
        let rate_hz = cycle.n_grid() as f64 / cycle.period;
        for joint in JointId::ALL {
            pooled[joint]
                .extend(estimate_change_rate(cycle.curve(joint), rate_hz).expect("change rates"));
        }
    }
    let band = fit_band(&pooled, 2.0, 98.0).expect("band fit");
    let (clean, _) = despike_recording(recording, &band).expect("despike");
    let cycles = segment_cycles(&clean, &config).expect("re-segmentation");
    let band = fit_phase_windows(&cycles, &band).expect("phase windows");
    (band, cycles)
}

/// Everything the training flow produces, plus the inputs it consumed.
pub struct Trained {
    pub recording: GaitRecording,
    pub band: ChangeRateBand,
    pub cycles: Vec<GaitCycle>,
    pub xs: Vec<UpperFeature>,
    pub ys: Vec<LowerFeature>,
    pub map: LinearMap,
    pub refs: ReferenceSet,
}

/// Runs the full training flow on a fresh fixed-seed recording.
pub fn trained(n_cycles: usize) -> Trained {
    let recording = recording(n_cycles);
    let (band, cycles) = train_band(&recording);
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
    let (map, _) = identify(&xs, &ys).expect("identification");
    let model = cluster_features(&xs, &ys, 4, 7, MergeStrategy::PairedConcat).expect("clustering");
    let raw = select_representative(&model, &ys, &cycles).expect("representatives");
    let refs = ReferenceSet::from_raw(&raw, 6).expect("reference fit");
    Trained {
        recording,
        band,
        cycles,
        xs,
        ys,
        map,
        refs,
    }
}
