//! Best responses, exploitability and strategy distances.

use crate::error::{Error, Result};
use crate::games::Game;
use crate::treeplex::{BehaviorStrategy, Player, SequenceStrategy, Treeplex};

/// Values below zero but above this floor are rounding noise and reported as 0.
pub const EXPLOITABILITY_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone)]
pub struct ExploitabilityReport {
    /// `max_{q1'} q1'^T U q2 - min_{q2'} q1^T U q2'`.
    pub value: f64,
    /// Best-response utility of each player against the other's strategy.
    pub best_response_values: [f64; 2],
    pub best_responses: [BehaviorStrategy; 2],
}

/// Best-response utility of `player` against `q_opp` and a pure strategy
/// attaining it. Ties go to the lowest action index.
pub fn best_response_value(game: &Game, player: Player, q_opp: &SequenceStrategy) -> Result<(f64, BehaviorStrategy)> {
    let t = game.treeplex(player);
    let opp = game.treeplex(player.opponent());
    if q_opp.q.len() != opp.num_sequences() {
        return Err(Error::DimensionMismatch { expected: opp.num_sequences(), found: q_opp.q.len() });
    }
    let mut util = vec![0.0; t.num_sequences()];
    game.sequence_utilities(player, &q_opp.q, &mut util);
    let mut probs = vec![0.0; t.num_sequences()];
    probs[0] = 1.0;
    for node in t.infosets() {
        let mut best = node.first_seq;
        for s in node.seqs() {
            if util[s] > util[best] {
                best = s;
            }
        }
        probs[best] = 1.0;
        util[node.parent_seq] += util[best];
    }
    Ok((util[0], BehaviorStrategy { probs }))
}

/// Exploitability of a sequence-form profile.
pub fn exploitability(game: &Game, q1: &SequenceStrategy, q2: &SequenceStrategy) -> Result<ExploitabilityReport> {
    let (v1, br1) = best_response_value(game, Player::One, q2)?;
    let (v2, br2) = best_response_value(game, Player::Two, q1)?;
    let mut value = v1 + v2;
    if (EXPLOITABILITY_FLOOR..0.0).contains(&value) {
        value = 0.0;
    }
    Ok(ExploitabilityReport { value, best_response_values: [v1, v2], best_responses: [br1, br2] })
}

/// Exploitability of a behavior profile.
pub fn behavior_exploitability(game: &Game, profile: [&BehaviorStrategy; 2]) -> Result<f64> {
    let q1 = game.treeplex(Player::One).behavior_to_sequence(profile[0])?;
    let q2 = game.treeplex(Player::Two).behavior_to_sequence(profile[1])?;
    Ok(exploitability(game, &q1, &q2)?.value)
}

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// Euclidean distance between two sequence-form strategies.
pub fn strategy_distance(q: &SequenceStrategy, other: &SequenceStrategy) -> Result<f64> {
    same_len(q.q.len(), other.q.len())?;
    Ok(q.q.iter().zip(&other.q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}

/// Euclidean distance between behavior strategies over all infoset entries.
pub fn behavior_distance(sigma: &BehaviorStrategy, other: &BehaviorStrategy) -> Result<f64> {
    same_len(sigma.probs.len(), other.probs.len())?;
    let sq: f64 = sigma.probs.iter().zip(&other.probs).skip(1).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(sq.sqrt())
}

/// `sum_I reach(pI) * ||sigma(I) - other(I)||_2`, with `reach` a sequence-form
/// strategy supplying the infoset weights.
pub fn weighted_behavior_distance(
    t: &Treeplex,
    reach: &SequenceStrategy,
    sigma: &BehaviorStrategy,
    other: &BehaviorStrategy,
) -> Result<f64> {
    for len in [reach.q.len(), sigma.probs.len(), other.probs.len()] {
        same_len(t.num_sequences(), len)?;
    }
    Ok(t.infosets()
        .iter()
        .map(|node| {
            let d: f64 = node.seqs().map(|s| (sigma.probs[s] - other.probs[s]).powi(2)).sum();
            reach.q[node.parent_seq] * d.sqrt()
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{build_matrix_game, matrix_from_rows};
    use crate::treeplex::tests::two_level;

    fn seq(v: &[f64]) -> SequenceStrategy {
        SequenceStrategy { q: v.to_vec() }
    }

    #[test]
    fn rock_paper_scissors_uniform_is_equilibrium() {
        let g = matrix_from_rows(
            "rps",
            &[vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]],
        )
        .unwrap();
        let u = seq(&[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert!(exploitability(&g, &u, &u).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn matching_pennies_pure_row() {
        let g = matrix_from_rows("mp", &[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let r = exploitability(&g, &seq(&[1.0, 1.0, 0.0]), &seq(&[1.0, 0.5, 0.5])).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.best_response_values, [0.0, 1.0]);
        assert_eq!(r.best_responses[1].probs, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn one_by_one_game_has_zero_exploitability() {
        let g = build_matrix_game(1, 1, 7).unwrap();
        let q = seq(&[1.0, 1.0]);
        assert_eq!(exploitability(&g, &q, &q).unwrap().value, 0.0);
    }

    #[test]
    fn matrix_best_response_is_max_entry() {
        let g = matrix_from_rows("m", &[vec![0.2, 0.9], vec![0.5, -0.3], vec![0.1, 0.1]]).unwrap();
        let q2 = seq(&[1.0, 0.4, 0.6]);
        let (v, br) = best_response_value(&g, Player::One, &q2).unwrap();
        let want = [0.2 * 0.4 + 0.9 * 0.6, 0.5 * 0.4 - 0.3 * 0.6, 0.1];
        assert!((v - want.iter().cloned().fold(f64::MIN, f64::max)).abs() < 1e-15);
        assert_eq!(br.probs, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn ties_break_to_lowest_index() {
        let g = matrix_from_rows("m", &[vec![1.0], vec![1.0]]).unwrap();
        let (_, br) = best_response_value(&g, Player::One, &seq(&[1.0, 1.0])).unwrap();
        assert_eq!(br.probs, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn distances() {
        let a = BehaviorStrategy { probs: vec![1.0, 1.0, 0.0] };
        let b = BehaviorStrategy { probs: vec![1.0, 0.0, 1.0] };
        assert_eq!(behavior_distance(&a, &a).unwrap(), 0.0);
        assert!((behavior_distance(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(strategy_distance(&seq(&[1.0]), &seq(&[1.0, 0.0])).is_err());

        // root (seqs 1,2) reached with weight 1, child (seqs 3,4) with q(1) = 0.25
        let t = two_level();
        let reach = seq(&[1.0, 0.25, 0.75, 0.125, 0.125]);
        let s1 = BehaviorStrategy { probs: vec![1.0, 0.5, 0.5, 1.0, 0.0] };
        let s2 = BehaviorStrategy { probs: vec![1.0, 0.25, 0.75, 0.0, 1.0] };
        // root: sqrt(2 * 0.0625) = 0.353553..; child: sqrt(2) * 0.25
        let want = (0.125f64).sqrt() + 0.25 * 2f64.sqrt();
        assert!((weighted_behavior_distance(&t, &reach, &s1, &s2).unwrap() - want).abs() < 1e-15);
    }
}
