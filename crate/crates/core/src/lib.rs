//! Regret-minimization solvers for two-player zero-sum normal-form and
//! extensive-form games, with a focus on last-iterate convergence.
//!
//! Games are held in sequence form ([`treeplex::Treeplex`] plus a sparse
//! payoff list, see [`games::Game`]). The [`engine`] runs CFR-style
//! bottom-up passes with per-infoset regret minimizers from
//! [`minimizers`], optionally adding a reward-transformation term
//! `w * mu * (sigma - sigma_ref)` to each local loss. The adaptive
//! reference/weight schedule lives in [`controller`], exploitability in
//! [`metrics`], the multiplicative-weights comparison algorithms in
//! [`baselines`], and experiment plumbing (configs, traces, sweeps, plots)
//! in [`harness`].

pub mod baselines;
pub mod controller;
pub mod engine;
mod error;
pub mod games;
pub mod harness;
pub mod metrics;
pub mod minimizers;
pub mod treeplex;

pub use error::{Error, Result};
pub use games::{game_stats, Game, GameSpec, GameStats};
pub use treeplex::{BehaviorStrategy, Player, SequenceStrategy, Treeplex};
