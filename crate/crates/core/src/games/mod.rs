//! Benchmark games in sequence form.
//!
//! A [`Game`] is a pair of treeplexes plus a sparse payoff list. Each entry
//! holds player 1's utility at the terminal reached by a pair of sequences,
//! already multiplied by the chance probability of reaching it, so the
//! expected utility of a profile is the bilinear form `q1^T U q2`.

mod builder;
mod goofspiel;
mod kuhn;
mod leduc;
mod liars_dice;
mod matrix;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::treeplex::{Player, SequenceStrategy, Treeplex};

pub use builder::{build_game, Node, Rules};
pub use goofspiel::{build_goofspiel, Goofspiel};
pub use kuhn::{build_kuhn, Kuhn};
pub use leduc::{build_leduc, Leduc};
pub use liars_dice::{build_liars_dice, LiarsDice};
pub use matrix::{build_matrix_game, matrix_from_rows, random_matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffEntry {
    pub seq1: usize,
    pub seq2: usize,
    /// Player 1 utility times chance reach. Player 2 receives the negation.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct Game {
    pub name: String,
    treeplexes: [Treeplex; 2],
    payoffs: Vec<PayoffEntry>,
}

impl Game {
    pub fn new(name: impl Into<String>, t1: Treeplex, t2: Treeplex, payoffs: Vec<PayoffEntry>) -> Result<Self> {
        for e in &payoffs {
            if e.seq1 >= t1.num_sequences() || e.seq2 >= t2.num_sequences() {
                return Err(Error::InvalidTreeplex(format!(
                    "payoff entry ({}, {}) references a missing sequence",
                    e.seq1, e.seq2
                )));
            }
            if !e.value.is_finite() {
                return Err(Error::NonFinite("payoff entry".into()));
            }
        }
        Ok(Self { name: name.into(), treeplexes: [t1, t2], payoffs })
    }

    pub fn treeplex(&self, player: Player) -> &Treeplex {
        &self.treeplexes[player.index()]
    }

    pub fn payoffs(&self) -> &[PayoffEntry] {
        &self.payoffs
    }

    /// `(U q2)` for player 1 or `(-U^T q1)` for player 2: the utility of each of
    /// `player`'s sequences against the opponent's realization plan, before
    /// any child propagation.
    pub fn sequence_utilities(&self, player: Player, q_opp: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        match player {
            Player::One => {
                for e in &self.payoffs {
                    out[e.seq1] += e.value * q_opp[e.seq2];
                }
            }
            Player::Two => {
                for e in &self.payoffs {
                    out[e.seq2] -= e.value * q_opp[e.seq1];
                }
            }
        }
    }

    /// Expected utility of player 1, `q1^T U q2`.
    pub fn expected_value(&self, q1: &SequenceStrategy, q2: &SequenceStrategy) -> f64 {
        self.payoffs.iter().map(|e| e.value * q1.q[e.seq1] * q2.q[e.seq2]).sum()
    }
}

/// Which benchmark game to build, parsed from ids such as `kuhn:3`,
/// `leduc:3`, `goofspiel:4`, `liarsdice:6` or `matrix:10x10:0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameSpec {
    Matrix { rows: usize, cols: usize, seed: Option<u64> },
    Kuhn(usize),
    Leduc(usize),
    Goofspiel(usize),
    LiarsDice(usize),
}

impl GameSpec {
    /// Builds the game. `default_seed` is used by matrix ids without a seed.
    pub fn build(&self, default_seed: u64) -> Result<Game> {
        match *self {
            GameSpec::Matrix { rows, cols, seed } => build_matrix_game(rows, cols, seed.unwrap_or(default_seed)),
            GameSpec::Kuhn(n) => build_kuhn(n),
            GameSpec::Leduc(n) => build_leduc(n),
            GameSpec::Goofspiel(k) => build_goofspiel(k),
            GameSpec::LiarsDice(k) => build_liars_dice(k),
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, GameSpec::Matrix { .. })
    }
}

impl FromStr for GameSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGame(s.to_string());
        let mut parts = s.trim().split(':');
        let kind = parts.next().ok_or_else(bad)?;
        let size = parts.next().ok_or_else(bad)?;
        let extra = parts.next();
        if parts.next().is_some() {
            return Err(bad());
        }
        let num = |v: &str| v.parse::<usize>().map_err(|_| bad());
        let spec = match kind {
            "matrix" => {
                let (r, c) = size.split_once('x').ok_or_else(bad)?;
                let seed = extra.map(|v| v.parse::<u64>().map_err(|_| bad())).transpose()?;
                GameSpec::Matrix { rows: num(r)?, cols: num(c)?, seed }
            }
            _ if extra.is_some() => return Err(bad()),
            "kuhn" => GameSpec::Kuhn(num(size)?),
            "leduc" => GameSpec::Leduc(num(size)?),
            "goofspiel" => GameSpec::Goofspiel(num(size)?),
            "liarsdice" => GameSpec::LiarsDice(num(size)?),
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSpec::Matrix { rows, cols, seed: Some(s) } => write!(f, "matrix:{rows}x{cols}:{s}"),
            GameSpec::Matrix { rows, cols, seed: None } => write!(f, "matrix:{rows}x{cols}"),
            GameSpec::Kuhn(n) => write!(f, "kuhn:{n}"),
            GameSpec::Leduc(n) => write!(f, "leduc:{n}"),
            GameSpec::Goofspiel(k) => write!(f, "goofspiel:{k}"),
            GameSpec::LiarsDice(k) => write!(f, "liarsdice:{k}"),
        }
    }
}

/// Size statistics summed over both players. Sequence counts include each
/// player's empty sequence; leaves are payoff entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameStats {
    pub infosets: usize,
    pub sequences: usize,
    pub leaves: usize,
}

impl fmt::Display for GameStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "infosets={} sequences={} leaves={}", self.infosets, self.sequences, self.leaves)
    }
}

pub fn game_stats(game: &Game) -> GameStats {
    let t = &game.treeplexes;
    GameStats {
        infosets: t[0].num_infosets() + t[1].num_infosets(),
        sequences: t[0].num_sequences() + t[1].num_sequences(),
        leaves: game.payoffs.len(),
    }
}
