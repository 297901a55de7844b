use crate::error::{Error, Result};
use crate::games::builder::{build_game, Node, Rules};
use crate::games::Game;
use crate::treeplex::Player;

/// Two-player Goofspiel with cards `1..=k`.
///
/// The prize deck is shuffled (each round reveals a uniformly random
/// remaining prize). Both players bid simultaneously, modeled as player 1
/// moving first with player 2 not observing that bid; after the round both
/// bids become public. The higher bid wins the prize, ties split it, and the
/// payoff is the score difference.
#[derive(Debug, Clone, Copy)]
pub struct Goofspiel {
    pub cards: usize,
}

#[derive(Debug, Clone, Default)]
pub struct GoofState {
    prizes: Vec<usize>,
    bids: [Vec<usize>; 2],
    pending: Option<usize>,
}

fn join(v: &[usize]) -> String {
    v.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(",")
}

impl Goofspiel {
    fn hand(&self, played: &[usize]) -> Vec<usize> {
        (0..self.cards).filter(|c| !played.contains(c)).collect()
    }
}

impl Rules for Goofspiel {
    type State = GoofState;

    fn name(&self) -> String {
        format!("goofspiel:{}", self.cards)
    }

    fn root(&self) -> GoofState {
        GoofState::default()
    }

    fn expand(&self, s: &GoofState) -> Node<GoofState> {
        let round = s.bids[1].len();
        if round == self.cards {
            let diff: f64 = (0..round)
                .map(|r| {
                    let value = (s.prizes[r] + 1) as f64;
                    match s.bids[0][r].cmp(&s.bids[1][r]) {
                        std::cmp::Ordering::Greater => value,
                        std::cmp::Ordering::Less => -value,
                        std::cmp::Ordering::Equal => 0.0,
                    }
                })
                .sum();
            return Node::Terminal(diff);
        }
        if s.prizes.len() == round {
            let left = self.hand(&s.prizes);
            let p = 1.0 / left.len() as f64;
            let outcomes = left
                .into_iter()
                .map(|c| {
                    let mut next = s.clone();
                    next.prizes.push(c);
                    (p, next)
                })
                .collect();
            return Node::Chance(outcomes);
        }
        let (player, me) = match s.pending {
            None => (Player::One, 0),
            Some(_) => (Player::Two, 1),
        };
        let infoset = format!("{}|{}|{}", join(&s.prizes), join(&s.bids[me]), join(&s.bids[1 - me]));
        let actions = self
            .hand(&s.bids[me])
            .into_iter()
            .map(|c| {
                let mut next = s.clone();
                match s.pending {
                    None => next.pending = Some(c),
                    Some(b1) => {
                        next.bids[0].push(b1);
                        next.bids[1].push(c);
                        next.pending = None;
                    }
                }
                next
            })
            .collect();
        Node::Decision { player, infoset, actions }
    }
}

pub fn build_goofspiel(k: usize) -> Result<Game> {
    if k < 2 {
        return Err(Error::UnsupportedParameter(format!("goofspiel needs at least 2 cards, got {k}")));
    }
    build_game(&Goofspiel { cards: k })
}
