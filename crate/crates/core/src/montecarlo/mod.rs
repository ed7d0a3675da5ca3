//! Monte Carlo paths of the Lévy process, the Lamperti time change, and
//! empirical hitting and occupation statistics.
//!
//! Every path draws from its own ChaCha8 stream selected by the path index,
//! so results do not depend on how paths are spread over worker threads.

mod config;
mod estimators;
mod lamperti;
mod skeleton;
mod stats;
mod verify;

pub use config::{SimConfig, SimMode, SimulableProcess, DEFAULT_RETURN_TOLERANCE};
pub use estimators::{
    estimate_hitting, estimate_occupation, estimate_overshoot, estimate_ruin, run, run_with_workers, stop_level,
    EnsembleSummary, PathEnsemble, PathOutcome,
};
pub use lamperti::{lamperti_transform, LampertiPath};
pub use skeleton::{path_rng, simulate_levy_skeleton, Skeleton};
pub use stats::{empirical_laplace, empirical_laplace_values, ks_two_sample, KsResult, LaplaceEstimate, MIN_KS_SAMPLE};
pub use verify::{derived_seed, verify_mc, EntranceProbe, McCriterion, McReport, McVerifyOptions};
