//! One module per subcommand; each exposes its clap `Args` and a `run`.

pub mod analyze;
pub mod identify;
pub mod plot;
pub mod simulate;
pub mod synth;
