use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::games::{Game, PayoffEntry};
use crate::treeplex::{Player, Treeplex};

/// Entries of a random `rows x cols` payoff matrix, uniform in `[-1, 1)`.
///
/// Values come from `ChaCha8Rng::seed_from_u64(seed)` drawing `f64`s in
/// row-major order, each mapped by `2u - 1`.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| (0..cols).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect())
        .collect()
}

/// A normal-form game from player 1's payoff rows.
pub fn matrix_from_rows(name: impl Into<String>, rows: &[Vec<f64>]) -> Result<Game> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::UnsupportedParameter("payoff matrix must be non-empty and rectangular".into()));
    }
    let payoffs = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, &value)| PayoffEntry { seq1: i + 1, seq2: j + 1, value })
        })
        .collect();
    Game::new(name, Treeplex::single(Player::One, n)?, Treeplex::single(Player::Two, m)?, payoffs)
}

pub fn build_matrix_game(rows: usize, cols: usize, seed: u64) -> Result<Game> {
    if rows == 0 || cols == 0 {
        return Err(Error::UnsupportedParameter(format!("matrix dimensions must be positive, got {rows}x{cols}")));
    }
    matrix_from_rows(format!("matrix:{rows}x{cols}:{seed}"), &random_matrix(rows, cols, seed))
}
