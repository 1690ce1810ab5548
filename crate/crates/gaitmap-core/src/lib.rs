//! Core algorithms for upper-to-lower limb gait coordination mapping.
//!
//! The pipeline turns a four-joint angle recording into a driven lower-limb
//! trajectory in five stages:
//!
//! 1. [`gait`] — segment the recording into cycles on hip zero crossings and
//!    resample every cycle onto a fixed phase grid; includes a seeded
//!    synthetic generator with ground-truth sidecars.
//! 2. [`features`] — reduce each cycle to trough/peak feature vectors with a
//!    change-rate band that rejects disturbance-corrupted extrema.
//! 3. [`mapping`] — identify the affine map from upper features to lower
//!    features by least squares and evaluate residual statistics.
//! 4. [`restoration`] — cluster training features, keep four reference
//!    feature vectors with Fourier-fitted reference curves, and rebuild full
//!    lower-limb trajectories as weighted reference combinations.
//! 5. [`simulation`] — run the one-cycle-lag pipeline over a recording and
//!    quantify phase and amplitude errors against the recorded lower limbs.
//!
//! Shared vocabulary types ([`JointId`], [`JointMap`], recordings, cycles,
//! features, maps, references) are re-exported at the crate root.

pub mod error;
pub mod features;
pub mod gait;
pub mod joints;
pub mod mapping;
pub mod restoration;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
pub use features::{
    build_lower_feature, build_upper_feature, extract_extrema, fit_band, fit_phase_windows,
    ChangeRateBand, JointBand, LowerFeature, PhaseWindow, UpperFeature,
};
pub use gait::synth::{synthesize_recording, CycleMeta, SynthParams};
pub use gait::{
    resample_cycle, segment_cycles, GaitCycle, GaitRecording, JointTrace, SegmentConfig,
};
pub use joints::{JointId, JointMap};
pub use mapping::{apply_map, identify, residual_stats, LinearMap, ResidualStats};
pub use restoration::{
    cluster_features, fit_reference_curve, restore_curve, select_representative, solve_weights,
    ClusterModel, FourierSeries, MergeStrategy, RawReferences, ReferenceSet, RestorationWeights,
};
pub use simulation::{
    amplitude_error, circular_lag, error_report, phase_difference, phase_error, run_pipeline,
    ErrorReport, PipelineOutput, SimulationConfig, Stats,
};
