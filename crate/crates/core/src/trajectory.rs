//! Time-stamped path samples with event annotations, shared by the ODE
//! integrator and the stochastic simulator.

use crate::Point3;

/// Why a path stopped (or what happened along the way).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Entered the buffer around the drift singularity.
    SigmaHit,
    /// Came within the origin guard radius.
    OriginApproach,
    /// Reached the time horizon.
    Horizon,
    /// A state component became non-finite; the path is aborted, never propagated.
    NonFinite,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::SigmaHit => "sigma_hit",
            EventKind::OriginApproach => "origin_approach",
            EventKind::Horizon => "horizon",
            EventKind::NonFinite => "non_finite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma_hit" => Some(EventKind::SigmaHit),
            "origin_approach" => Some(EventKind::OriginApproach),
            "horizon" => Some(EventKind::Horizon),
            "non_finite" => Some(EventKind::NonFinite),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

/// A sampled path. `states` always carries three components; `dimension`
/// records whether the third is meaningful. For planar paths an optional
/// `(u, v)` trace is attached sample by sample (`None` where the coordinate
/// inversion is undefined, e.g. on the singularity).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Point3>,
    pub dimension: usize,
    pub events: Vec<Event>,
    pub uv_trace: Option<Vec<Option<(f64, f64)>>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Point3 {
        *self.states.last().expect("trajectory has at least one sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one sample")
    }

    /// The event that ended the path, if any.
    pub fn terminal_event(&self) -> Option<Event> {
        self.events.last().copied()
    }

    /// True when the path ran to the horizon without hitting a guard.
    pub fn survived(&self) -> bool {
        matches!(self.terminal_event(), Some(e) if e.kind == EventKind::Horizon)
    }
}
