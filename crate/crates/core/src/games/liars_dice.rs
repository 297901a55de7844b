use crate::error::{Error, Result};
use crate::games::builder::{build_game, Node, Rules};
use crate::games::Game;
use crate::treeplex::Player;

/// Liar's Dice with one `k`-sided die per player.
///
/// Bids `(quantity, face)` with quantity in `{1, 2}` are ordered by
/// quantity, then face. Player 1 must open with a bid; afterwards the player
/// to move either raises to any strictly higher bid or calls the previous
/// bid a lie. A true bid scores +1 for the bidder, a false one +1 for the
/// caller.
#[derive(Debug, Clone, Copy)]
pub struct LiarsDice {
    pub faces: usize,
}

#[derive(Debug, Clone, Default)]
pub struct DiceState {
    dice: Option<(usize, usize)>,
    bids: Vec<usize>,
    called: bool,
}

impl LiarsDice {
    fn num_bids(&self) -> usize {
        2 * self.faces
    }

    /// (quantity, face) of bid index `b`.
    fn bid(&self, b: usize) -> (usize, usize) {
        (b / self.faces + 1, b % self.faces)
    }
}

impl Rules for LiarsDice {
    type State = DiceState;

    fn name(&self) -> String {
        format!("liarsdice:{}", self.faces)
    }

    fn root(&self) -> DiceState {
        DiceState::default()
    }

    fn expand(&self, s: &DiceState) -> Node<DiceState> {
        let Some((d1, d2)) = s.dice else {
            let k = self.faces;
            let p = 1.0 / (k * k) as f64;
            let outcomes = (0..k * k)
                .map(|i| (p, DiceState { dice: Some((i / k, i % k)), ..Default::default() }))
                .collect();
            return Node::Chance(outcomes);
        };
        // the player who made the last bid
        let bidder = (s.bids.len() + 1) % 2;
        if s.called {
            let (quantity, face) = self.bid(*s.bids.last().unwrap());
            let count = [d1, d2].iter().filter(|&&d| d == face).count();
            let bidder_wins = count >= quantity;
            let p1_wins = bidder_wins == (bidder == 0);
            return Node::Terminal(if p1_wins { 1.0 } else { -1.0 });
        }
        let actor = s.bids.len() % 2;
        let next_bid = s.bids.last().map_or(0, |b| b + 1);
        let mut actions: Vec<DiceState> = (next_bid..self.num_bids())
            .map(|b| {
                let mut next = s.clone();
                next.bids.push(b);
                next
            })
            .collect();
        if !s.bids.is_empty() {
            actions.push(DiceState { called: true, ..s.clone() });
        }
        let die = if actor == 0 { d1 } else { d2 };
        let history: Vec<String> = s.bids.iter().map(|b| b.to_string()).collect();
        let player = if actor == 0 { Player::One } else { Player::Two };
        Node::Decision { player, infoset: format!("{die}:{}", history.join(",")), actions }
    }
}

pub fn build_liars_dice(k: usize) -> Result<Game> {
    if k < 2 {
        return Err(Error::UnsupportedParameter(format!("liar's dice needs at least 2 faces, got {k}")));
    }
    build_game(&LiarsDice { faces: k })
}
