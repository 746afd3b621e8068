//! Credit-guided Bayesian optimization.
//!
//! A Matérn-5/2 Gaussian process surrogate, an optimum proxy built from joint
//! posterior paths, per-observation credits derived from it, and acquisitions
//! that reweight UCB or Thompson scores by the resulting credit field.

pub mod acquisition;
pub mod benchmarks;
pub mod credit;
pub mod design;
pub mod error;
pub mod gp;
pub mod hyper;
pub mod metrics;
mod optim;
pub mod optimizer;

pub use acquisition::{AcquisitionKind, AcquisitionSpec};
pub use benchmarks::Benchmark;
pub use error::{Error, Result};
pub use gp::{fit_posterior, GpPosterior, KernelParams, ObservationSet};
pub use hyper::{fit_hyperparams, MleConfig};
pub use metrics::{aggregate, regret_traces, Aggregate, RegretTrace, Stat};
pub use optimizer::{bo_step, run, BoState, RunConfig, RunResult};
