//! Built-in gamblers for the two self-referential families, their movement
//! schedules, and the tracking check that ties head positions to parity bets.

pub mod baseline;
pub mod fparity;
pub mod phi_tracker;
pub mod schedule;
pub mod tracking;

pub use baseline::{build_baseline, BaselineParity};
pub use fparity::build_f_parity;
pub use phi_tracker::{build_phi_tracker, PhiTracker, PhiTrackerParams, TrackerState};
pub use schedule::{
    check_schedule, oracle_horizon, scheduled_position, ModeSchedule, Pace, Provenance, ScheduleFailure,
};
pub use tracking::{verify_tracking, TrackingLog, TrackingRecord, TrackingReport, TrackingViolation, ViolationKind};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GamblerError {
    #[error("no movement schedule tracks the references ({detail}); literal: {literal}; derived: {derived}")]
    ScheduleInfeasible {
        literal: String,
        derived: String,
        detail: String,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
