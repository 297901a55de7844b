//! Executing one configured run.

use std::path::Path;
use std::time::Instant;

use super::config::{Eval, ExperimentConfig, ResolvedConfig, RtMode, SolverParams};
use super::trace::{TraceRow, TraceWriter};
use crate::baselines::BaselineSolver;
use crate::controller::{FixedSchedule, PhaseEvent, SccpController};
use crate::engine::{Engine, RtTerm};
use crate::error::Result;
use crate::games::Game;
use crate::metrics::exploitability;
use crate::treeplex::{BehaviorStrategy, SequenceStrategy};

/// Result of one run: resolved config, trace and final evaluated profile.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub rows: Vec<TraceRow>,
    pub events: Vec<PhaseEvent>,
    /// The profile exploitability was last measured on (current or averaged).
    pub final_strategies: [BehaviorStrategy; 2],
}

impl RunRecord {
    pub fn final_exploitability(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.exploitability)
    }

    /// Rows without wall-clock, one line each.
    pub fn deterministic_trace(&self) -> Vec<String> {
        self.rows.iter().map(TraceRow::deterministic_part).collect()
    }
}

enum Schedule {
    Off,
    Fixed { schedule: FixedSchedule, mu: f64 },
    Adaptive { controller: SccpController, mu: f64 },
}

enum Driver<'g> {
    Regret { engine: Engine<'g>, schedule: Schedule },
    Baseline(BaselineSolver<'g>),
}

fn profile_eps(game: &Game, q: [&SequenceStrategy; 2]) -> Result<f64> {
    Ok(exploitability(game, q[0], q[1])?.value)
}

impl<'g> Driver<'g> {
    fn new(game: &'g Game, resolved: &ResolvedConfig) -> Result<Self> {
        let c = &resolved.config;
        Ok(match resolved.solver {
            SolverParams::Regret { kind, rt } => {
                let engine = Engine::new(game, kind, c.averaging);
                let initial = engine.strategy_profile();
                let schedule = match rt {
                    None => Schedule::Off,
                    Some(rt) => match rt.mode {
                        RtMode::Off => Schedule::Off,
                        RtMode::Fixed => Schedule::Fixed { schedule: FixedSchedule::new(initial, rt.interval, c.counter)?, mu: rt.mu },
                        RtMode::Adaptive => {
                            let eps = profile_eps(game, engine.sequences())?;
                            let controller = SccpController::new(initial, eps, rt.interval, c.cadence, c.counter)?;
                            Schedule::Adaptive { controller, mu: rt.mu }
                        }
                    },
                };
                Driver::Regret { engine, schedule }
            }
            SolverParams::Baseline(params) => Driver::Baseline(BaselineSolver::new(game, params)?),
        })
    }

    /// Runs iteration `t`; returns a phase event and any exploitability of
    /// the current profile computed along the way.
    fn step(&mut self, game: &Game, t: u64) -> Result<(Option<PhaseEvent>, Option<f64>)> {
        match self {
            Driver::Regret { engine, schedule } => match schedule {
                Schedule::Off => {
                    engine.iterate_once(None)?;
                    Ok((None, None))
                }
                Schedule::Fixed { schedule, mu } => {
                    engine.iterate_once(Some(RtTerm { mu: *mu, weight: 1.0, reference: schedule.reference() }))?;
                    Ok((schedule.tick(t, engine.strategies()), None))
                }
                Schedule::Adaptive { controller, mu } => {
                    let term = RtTerm { mu: *mu, weight: controller.weight(), reference: controller.reference() };
                    engine.iterate_once(Some(term))?;
                    controller.record_iteration();
                    let q = engine.sequences();
                    let tick = controller.tick(t, engine.strategies(), |_| profile_eps(game, q))?;
                    Ok((tick.event, tick.exploitability))
                }
            },
            Driver::Baseline(solver) => {
                solver.iterate_once()?;
                Ok((None, None))
            }
        }
    }

    fn sccp_and_weight(&self) -> (u64, f64) {
        match self {
            Driver::Regret { schedule: Schedule::Fixed { schedule, .. }, .. } => (schedule.sccp(), 1.0),
            Driver::Regret { schedule: Schedule::Adaptive { controller, .. }, .. } => {
                (controller.sccp(), controller.weight())
            }
            _ => (0, 0.0),
        }
    }

    fn current(&self) -> ([&SequenceStrategy; 2], [&BehaviorStrategy; 2]) {
        match self {
            Driver::Regret { engine, .. } => (engine.sequences(), engine.strategies()),
            Driver::Baseline(s) => (s.sequences(), s.strategies()),
        }
    }

    fn evaluate(&self, game: &Game, eval: Eval, cached_last: Option<f64>) -> Result<(f64, [BehaviorStrategy; 2])> {
        if let (Eval::Avg, Driver::Regret { engine, .. }) = (eval, self) {
            if engine.iteration() > 0 {
                let q = engine.average_strategy()?;
                let eps = profile_eps(game, [&q[0], &q[1]])?;
                return Ok((eps, engine.average_behavior()?));
            }
        }
        let (q, sigma) = self.current();
        let eps = match cached_last {
            Some(e) => e,
            None => profile_eps(game, q)?,
        };
        Ok((eps, [sigma[0].clone(), sigma[1].clone()]))
    }

    fn events(&self) -> Vec<PhaseEvent> {
        match self {
            Driver::Regret { schedule: Schedule::Fixed { schedule, .. }, .. } => schedule.log().to_vec(),
            Driver::Regret { schedule: Schedule::Adaptive { controller, .. }, .. } => controller.log().to_vec(),
            _ => Vec::new(),
        }
    }
}

/// Runs `resolved` on an already built game, streaming rows to `sink`.
///
/// Row 0 is the initial profile. Afterwards a row is written every `stride`
/// iterations, on every phase event and at the final iteration.
pub fn run_on(game: &Game, resolved: &ResolvedConfig, mut sink: Option<&mut TraceWriter>) -> Result<RunRecord> {
    let c = &resolved.config;
    let start = Instant::now();
    let mut driver = Driver::new(game, resolved)?;
    let mut rows = Vec::new();
    let mut emit = |row: TraceRow, rows: &mut Vec<TraceRow>| -> Result<()> {
        if let Some(w) = sink.as_deref_mut() {
            w.push(&row)?;
        }
        rows.push(row);
        Ok(())
    };

    let (eps, mut last_profile) = driver.evaluate(game, resolved.eval, None)?;
    let (sccp, weight) = driver.sccp_and_weight();
    emit(TraceRow { iter: 0, exploitability: eps, sccp, phase: None, weight, wall_ms: 0 }, &mut rows)?;

    for t in 1..=c.iters {
        let (event, eps_now) = driver.step(game, t)?;
        if t % c.stride == 0 || event.is_some() || t == c.iters {
            let cached = if resolved.eval == Eval::Last { eps_now } else { None };
            let (eps, profile) = driver.evaluate(game, resolved.eval, cached)?;
            last_profile = profile;
            let (sccp, weight) = driver.sccp_and_weight();
            let row = TraceRow {
                iter: t,
                exploitability: eps,
                sccp,
                phase: event.map(|e| e.phase),
                weight,
                wall_ms: start.elapsed().as_millis() as u64,
            };
            emit(row, &mut rows)?;
        }
    }
    Ok(RunRecord { config: resolved.snapshot(), rows, events: driver.events(), final_strategies: last_profile })
}

/// Path of the config snapshot stored next to a trace.
pub fn snapshot_path(csv: &Path) -> std::path::PathBuf {
    csv.with_extension("cfg")
}

/// Resolves, builds and runs `config`. When `config.out` is set the trace is
/// written there incrementally, with the resolved config next to it.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    let resolved = config.resolve()?;
    let game = config.game.build(config.seed)?;
    match &config.out {
        Some(path) => {
            let mut writer = TraceWriter::create(path)?;
            std::fs::write(snapshot_path(path), resolved.snapshot().to_text())?;
            run_on(&game, &resolved, Some(&mut writer))
        }
        None => run_on(&game, &resolved, None),
    }
}
