//! Age of information versus packet delay in single-server update systems.
//!
//! The crate simulates a renewal stream of update packets through a single
//! server (or an infinite-server reference station) under a chosen
//! scheduling discipline and service-time law, measures time-average age,
//! mean delay and delay variance exactly from the simulated sample path, and
//! compares the results against closed-form and Monte-Carlo baselines.
//!
//! Modules, bottom up:
//!
//! - [`distributions`]: service and inter-generation laws with mean `1/mu`.
//! - [`disciplines`]: FCFS, LCFS preemptive-resume, LCFS non-preemptive and
//!   infinite-server stations.
//! - [`des`]: the event loop, coupled random streams, replication.
//! - [`metrics`]: age sawtooth integration, delay statistics, batch means.
//! - [`oracles`]: minimum age, G/G/inf age, P-K delay, D/D/1 age, limit tables.
//! - [`experiments`]: sweeps, Pareto frontiers, scalarized picks and output files.
//!
//! ```
//! use aoi_tradeoff::prelude::*;
//!
//! let arrival = ArrivalProcess::poisson(0.5).unwrap();
//! let service = ServiceDistribution::pareto(0.8, 2.5).unwrap();
//! let trace = run_simulation(&arrival, &service, Discipline::LcfsPreemptiveResume, 20_000, 0.1, 7).unwrap();
//! let report = MetricsReport::from_trace(&trace).unwrap();
//! assert!(report.avg_age >= a_min(&arrival) - 3.0 * report.ci_halfwidth_age);
//! ```

pub mod des;
pub mod disciplines;
pub mod distributions;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod oracles;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::des::{replicate, run_simulation, ExperimentPoint, SimulationTrace};
    pub use crate::disciplines::{Discipline, Packet};
    pub use crate::distributions::{
        ArrivalFamily, ArrivalProcess, DurationSampler, Extended, ServiceDistribution, ServiceFamily,
        ServiceSpec,
    };
    pub use crate::experiments::{pareto_frontier, run_suite, scalarized_pick, FrontierPoint, Objective, SweepConfig};
    pub use crate::metrics::MetricsReport;
    pub use crate::oracles::{a_min, dd1_age, gginf_age_estimate, pk_delay};
}
