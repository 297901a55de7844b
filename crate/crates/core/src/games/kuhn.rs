use crate::error::{Error, Result};
use crate::games::builder::{build_game, Node, Rules};
use crate::games::Game;
use crate::treeplex::Player;

/// Kuhn poker with `n` cards: ante 1, a single bet of 1, higher card wins.
#[derive(Debug, Clone, Copy)]
pub struct Kuhn {
    pub cards: usize,
}

#[derive(Debug, Clone)]
pub struct KuhnState {
    deal: Option<(usize, usize)>,
    history: String,
}

impl KuhnState {
    fn then(&self, action: char) -> Self {
        let mut history = self.history.clone();
        history.push(action);
        Self { deal: self.deal, history }
    }
}

impl Rules for Kuhn {
    type State = KuhnState;

    fn name(&self) -> String {
        format!("kuhn:{}", self.cards)
    }

    fn root(&self) -> KuhnState {
        KuhnState { deal: None, history: String::new() }
    }

    fn expand(&self, s: &KuhnState) -> Node<KuhnState> {
        let Some((c1, c2)) = s.deal else {
            let n = self.cards;
            let p = 1.0 / (n * (n - 1)) as f64;
            let outcomes = (0..n)
                .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                .map(|d| (p, KuhnState { deal: Some(d), history: String::new() }))
                .collect();
            return Node::Chance(outcomes);
        };
        let showdown = |stake: f64| if c1 > c2 { stake } else { -stake };
        let decide = |player: Player, card: usize, actions: [char; 2]| Node::Decision {
            player,
            infoset: format!("{card}:{}", s.history),
            actions: actions.iter().map(|&a| s.then(a)).collect(),
        };
        // p = check, b = bet, f = fold, c = call
        match s.history.as_str() {
            "" => decide(Player::One, c1, ['p', 'b']),
            "p" => decide(Player::Two, c2, ['p', 'b']),
            "b" => decide(Player::Two, c2, ['f', 'c']),
            "pb" => decide(Player::One, c1, ['f', 'c']),
            "pp" => Node::Terminal(showdown(1.0)),
            "bc" | "pbc" => Node::Terminal(showdown(2.0)),
            "bf" => Node::Terminal(1.0),
            "pbf" => Node::Terminal(-1.0),
            h => unreachable!("kuhn history {h}"),
        }
    }
}

pub fn build_kuhn(n: usize) -> Result<Game> {
    if n < 2 {
        return Err(Error::UnsupportedParameter(format!("kuhn needs at least 2 cards, got {n}")));
    }
    build_game(&Kuhn { cards: n })
}
