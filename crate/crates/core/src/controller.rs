//! Reference-strategy schedules for the RT term.
//!
//! [`SccpController`] is the adaptive schedule. Every `m` iterations it
//! evaluates the exploitability `eps` of the current profile and, in
//! priority order:
//!
//! * **exploit**: `eps <= eps_min / 2` sets `eps_min = eps`, adopts the
//!   current profile as reference and sets `w = 2`;
//! * **keep**: `eps <= eps_min` and `k >= T` does the same with `w = 1`;
//! * **explore**: `k >= 2T` adopts the current profile with `w = 0.5`
//!   without touching `eps_min`.
//!
//! Every transition starts a new subproblem and resets the counter `k`.
//! By default `k` counts player updates, two per iteration, so `T` and `2T`
//! are measured in player updates; [`CounterUnit::Iteration`] counts whole
//! iterations instead.
//!
//! [`FixedSchedule`] replaces the reference every `T` counter units with
//! `w = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::EXPLOITABILITY_FLOOR;
use crate::treeplex::BehaviorStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Exploit,
    Keep,
    Explore,
    /// Scheduled reference replacement of a fixed-interval run.
    Restart,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Exploit => "exploit",
            Phase::Keep => "keep",
            Phase::Explore => "explore",
            Phase::Restart => "restart",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exploit" => Ok(Phase::Exploit),
            "keep" => Ok(Phase::Keep),
            "explore" => Ok(Phase::Explore),
            "restart" => Ok(Phase::Restart),
            _ => Err(Error::Trace(format!("unknown phase `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CounterUnit {
    #[default]
    PlayerUpdate,
    Iteration,
}

impl CounterUnit {
    fn per_iteration(self) -> u64 {
        match self {
            CounterUnit::PlayerUpdate => 2,
            CounterUnit::Iteration => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEvent {
    pub iteration: u64,
    pub phase: Phase,
    pub exploitability: f64,
    /// `eps_min` just before the transition.
    pub previous_min: f64,
    /// Counter value when the finished subproblem ended.
    pub span: u64,
    /// Index of the subproblem that starts with this event.
    pub sccp: u64,
    pub weight: f64,
}

/// Outcome of one [`SccpController::tick`].
#[derive(Debug, Clone, Default)]
pub struct Tick {
    /// Exploitability computed during this tick, if any.
    pub exploitability: Option<f64>,
    pub event: Option<PhaseEvent>,
}

fn checked_eps(eps: f64) -> Result<f64> {
    if !eps.is_finite() {
        return Err(Error::NonFinite("exploitability".into()));
    }
    if eps < EXPLOITABILITY_FLOOR {
        return Err(Error::NegativeExploitability(eps));
    }
    Ok(eps.max(0.0))
}

#[derive(Debug, Clone)]
pub struct SccpController {
    reference: [BehaviorStrategy; 2],
    eps_min: f64,
    k: u64,
    interval: u64,
    cadence: u64,
    weight: f64,
    sccp: u64,
    unit: CounterUnit,
    log: Vec<PhaseEvent>,
}

impl SccpController {
    /// `initial` is both the first reference and the profile whose
    /// exploitability `initial_eps` seeds `eps_min`.
    pub fn new(
        initial: [BehaviorStrategy; 2],
        initial_eps: f64,
        interval: u64,
        cadence: u64,
        unit: CounterUnit,
    ) -> Result<Self> {
        if interval == 0 || cadence == 0 {
            return Err(Error::Config("SCCP interval T and cadence m must be at least 1".into()));
        }
        Ok(Self {
            reference: initial,
            eps_min: checked_eps(initial_eps)?,
            k: 0,
            interval,
            cadence,
            weight: 1.0,
            sccp: 1,
            unit,
            log: Vec::new(),
        })
    }

    pub fn reference(&self) -> &[BehaviorStrategy; 2] {
        &self.reference
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn eps_min(&self) -> f64 {
        self.eps_min
    }

    pub fn counter(&self) -> u64 {
        self.k
    }

    pub fn sccp(&self) -> u64 {
        self.sccp
    }

    pub fn interval(&self) -> u64 {
        self.interval
    }

    pub fn log(&self) -> &[PhaseEvent] {
        &self.log
    }

    /// Advances `k` for one completed iteration.
    pub fn record_iteration(&mut self) {
        self.k += self.unit.per_iteration();
    }

    /// Checks for a phase transition after iteration `t`. `eps_fn` is only
    /// called on cadence and receives the current profile.
    pub fn tick<F>(&mut self, t: u64, current: [&BehaviorStrategy; 2], eps_fn: F) -> Result<Tick>
    where
        F: FnOnce([&BehaviorStrategy; 2]) -> Result<f64>,
    {
        if t == 0 || !t.is_multiple_of(self.cadence) {
            return Ok(Tick::default());
        }
        let eps = checked_eps(eps_fn(current)?)?;
        let t_units = self.interval;
        let phase = if eps <= self.eps_min / 2.0 {
            Some(Phase::Exploit)
        } else if eps <= self.eps_min && self.k >= t_units {
            Some(Phase::Keep)
        } else if self.k >= 2 * t_units {
            Some(Phase::Explore)
        } else {
            None
        };
        let Some(phase) = phase else {
            return Ok(Tick { exploitability: Some(eps), event: None });
        };
        let previous_min = self.eps_min;
        self.weight = match phase {
            Phase::Exploit => 2.0,
            Phase::Keep => 1.0,
            _ => 0.5,
        };
        if phase != Phase::Explore {
            self.eps_min = eps;
        }
        self.reference = [current[0].clone(), current[1].clone()];
        let span = std::mem::take(&mut self.k);
        self.sccp += 1;
        let event = PhaseEvent {
            iteration: t,
            phase,
            exploitability: eps,
            previous_min,
            span,
            sccp: self.sccp,
            weight: self.weight,
        };
        self.log.push(event.clone());
        Ok(Tick { exploitability: Some(eps), event: Some(event) })
    }
}

/// True iff every consecutive pair of exploit events at least halves the
/// accepted exploitability.
pub fn halving_schedule_check(log: &[PhaseEvent]) -> bool {
    let accepted: Vec<f64> = log.iter().filter(|e| e.phase == Phase::Exploit).map(|e| e.exploitability).collect();
    accepted.windows(2).all(|w| w[1] <= w[0] / 2.0)
}

/// Reference replaced by the current profile whenever the counter reaches
/// `interval`, with `w = 1` throughout. The counter uses the same units as
/// [`SccpController`].
#[derive(Debug, Clone)]
pub struct FixedSchedule {
    reference: [BehaviorStrategy; 2],
    interval: u64,
    k: u64,
    sccp: u64,
    unit: CounterUnit,
    log: Vec<PhaseEvent>,
}

impl FixedSchedule {
    pub fn new(initial: [BehaviorStrategy; 2], interval: u64, unit: CounterUnit) -> Result<Self> {
        if interval == 0 {
            return Err(Error::Config("SCCP interval T must be at least 1".into()));
        }
        Ok(Self { reference: initial, interval, k: 0, sccp: 1, unit, log: Vec::new() })
    }

    pub fn reference(&self) -> &[BehaviorStrategy; 2] {
        &self.reference
    }

    pub fn sccp(&self) -> u64 {
        self.sccp
    }

    pub fn counter(&self) -> u64 {
        self.k
    }

    pub fn log(&self) -> &[PhaseEvent] {
        &self.log
    }

    /// Advances the counter for iteration `t` and restarts once it reaches
    /// the interval.
    pub fn tick(&mut self, t: u64, current: [&BehaviorStrategy; 2]) -> Option<PhaseEvent> {
        self.k += self.unit.per_iteration();
        if self.k < self.interval {
            return None;
        }
        self.reference = [current[0].clone(), current[1].clone()];
        self.sccp += 1;
        let event = PhaseEvent {
            iteration: t,
            phase: Phase::Restart,
            exploitability: f64::NAN,
            previous_min: f64::NAN,
            span: std::mem::take(&mut self.k),
            sccp: self.sccp,
            weight: 1.0,
        };
        self.log.push(event.clone());
        Some(event)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(p: f64) -> [BehaviorStrategy; 2] {
        let s = BehaviorStrategy { probs: vec![1.0, p, 1.0 - p] };
        [s.clone(), s]
    }

    fn controller(eps_min: f64, k: u64, interval: u64) -> SccpController {
        let mut c = SccpController::new(profile(0.5), eps_min, interval, 1, CounterUnit::PlayerUpdate).unwrap();
        c.k = k;
        c
    }

    fn tick_with(c: &mut SccpController, eps: f64) -> Option<PhaseEvent> {
        let cur = profile(0.9);
        c.tick(1, [&cur[0], &cur[1]], |_| Ok(eps)).unwrap().event
    }

    #[test]
    fn exploit_phase() {
        let mut c = controller(0.1, 0, 5);
        let e = tick_with(&mut c, 0.04).unwrap();
        assert_eq!(e.phase, Phase::Exploit);
        assert_eq!((c.weight(), c.eps_min(), c.counter(), c.sccp()), (2.0, 0.04, 0, 2));
        assert_eq!(c.reference()[0].probs, profile(0.9)[0].probs);
    }

    #[test]
    fn keep_phase() {
        let mut c = controller(0.1, 9, 5);
        let e = tick_with(&mut c, 0.08).unwrap();
        assert_eq!(e.phase, Phase::Keep);
        assert_eq!(e.span, 9);
        assert_eq!((c.weight(), c.eps_min(), c.counter()), (1.0, 0.08, 0));
    }

    #[test]
    fn keep_needs_interval() {
        let mut c = controller(0.1, 4, 5);
        assert!(tick_with(&mut c, 0.08).is_none());
        assert_eq!(c.counter(), 4);
    }

    #[test]
    fn explore_phase_keeps_eps_min() {
        let mut c = controller(0.1, 10, 5);
        let e = tick_with(&mut c, 0.2).unwrap();
        assert_eq!(e.phase, Phase::Explore);
        assert_eq!((c.weight(), c.eps_min(), c.counter()), (0.5, 0.1, 0));
    }

    #[test]
    fn cadence_skips_evaluation() {
        let mut c = SccpController::new(profile(0.5), 1.0, 5, 3, CounterUnit::PlayerUpdate).unwrap();
        let cur = profile(0.2);
        let tick = c.tick(2, [&cur[0], &cur[1]], |_| panic!("evaluated off cadence")).unwrap();
        assert!(tick.exploitability.is_none());
        let tick = c.tick(3, [&cur[0], &cur[1]], |_| Ok(0.1)).unwrap();
        assert_eq!(tick.exploitability, Some(0.1));
    }

    #[test]
    fn counter_units() {
        let mut a = SccpController::new(profile(0.5), 1.0, 5, 1, CounterUnit::PlayerUpdate).unwrap();
        let mut b = SccpController::new(profile(0.5), 1.0, 5, 1, CounterUnit::Iteration).unwrap();
        a.record_iteration();
        b.record_iteration();
        assert_eq!((a.counter(), b.counter()), (2, 1));
    }

    #[test]
    fn negative_exploitability_is_an_error() {
        let mut c = controller(0.1, 0, 5);
        let cur = profile(0.5);
        assert!(matches!(
            c.tick(1, [&cur[0], &cur[1]], |_| Ok(-1e-6)),
            Err(Error::NegativeExploitability(_))
        ));
        // within the floor: clamped to zero
        let t = c.tick(1, [&cur[0], &cur[1]], |_| Ok(-1e-12)).unwrap();
        assert_eq!(t.exploitability, Some(0.0));
    }

    fn exploit_log(values: &[f64]) -> Vec<PhaseEvent> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| PhaseEvent {
                iteration: i as u64 + 1,
                phase: Phase::Exploit,
                exploitability: v,
                previous_min: f64::NAN,
                span: 1,
                sccp: i as u64 + 2,
                weight: 2.0,
            })
            .collect()
    }

    #[test]
    fn halving_check() {
        assert!(halving_schedule_check(&exploit_log(&[0.1, 0.05, 0.02])));
        assert!(!halving_schedule_check(&exploit_log(&[0.1, 0.06])));
    }

    #[test]
    fn fixed_schedule_restarts_on_interval() {
        let cur = profile(0.7);
        // 5 player updates: restarts after iteration 3 (k = 6)
        let mut f = FixedSchedule::new(profile(0.5), 5, CounterUnit::PlayerUpdate).unwrap();
        assert!(f.tick(1, [&cur[0], &cur[1]]).is_none());
        assert!(f.tick(2, [&cur[0], &cur[1]]).is_none());
        let e = f.tick(3, [&cur[0], &cur[1]]).unwrap();
        assert_eq!((e.phase, e.sccp, e.span), (Phase::Restart, 2, 6));
        assert_eq!(f.reference()[1].probs, cur[1].probs);
        assert_eq!(f.counter(), 0);

        let mut f = FixedSchedule::new(profile(0.5), 2, CounterUnit::Iteration).unwrap();
        assert!(f.tick(1, [&cur[0], &cur[1]]).is_none());
        assert!(f.tick(2, [&cur[0], &cur[1]]).is_some());
        assert!(FixedSchedule::new(profile(0.5), 0, CounterUnit::Iteration).is_err());
    }

    #[test]
    fn unit_interval_restarts_every_iteration() {
        let cur = profile(0.7);
        let mut f = FixedSchedule::new(profile(0.5), 1, CounterUnit::PlayerUpdate).unwrap();
        assert!((1..=4).all(|t| f.tick(t, [&cur[0], &cur[1]]).is_some()));
    }
}
