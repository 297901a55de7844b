use crate::error::{Error, Result};
use crate::games::builder::{build_game, Node, Rules};
use crate::games::Game;
use crate::treeplex::Player;

/// Leduc poker with `ranks` ranks and two suits. Ante 1; two betting rounds
/// with raise sizes 2 and 4 and at most two raises (bet plus re-raise) per
/// round; one public card is dealt between the rounds. A private card that
/// pairs the public card wins, otherwise the higher rank wins.
#[derive(Debug, Clone, Copy)]
pub struct Leduc {
    pub ranks: usize,
}

const MAX_RAISES: usize = 2;

#[derive(Debug, Clone)]
pub struct LeducState {
    private: [Option<usize>; 2],
    public: Option<usize>,
    round: usize,
    history: [String; 2],
    contrib: [f64; 2],
    folded: Option<usize>,
}

impl Leduc {
    fn remaining(&self, s: &LeducState) -> Vec<(usize, usize)> {
        (0..self.ranks)
            .map(|r| {
                let used = s.private.iter().filter(|c| **c == Some(r)).count();
                (r, 2 - used)
            })
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    fn deal(&self, s: &LeducState, place: impl Fn(&mut LeducState, usize)) -> Node<LeducState> {
        let left = self.remaining(s);
        let total: usize = left.iter().map(|&(_, n)| n).sum();
        let outcomes = left
            .into_iter()
            .map(|(r, n)| {
                let mut next = s.clone();
                place(&mut next, r);
                (n as f64 / total as f64, next)
            })
            .collect();
        Node::Chance(outcomes)
    }

    fn showdown(s: &LeducState) -> f64 {
        let (a, b, p) = (s.private[0].unwrap(), s.private[1].unwrap(), s.public.unwrap());
        let pot = s.contrib[0];
        if a == b {
            0.0
        } else if a == p {
            pot
        } else if b == p {
            -pot
        } else if a > b {
            pot
        } else {
            -pot
        }
    }
}

fn round_over(h: &str) -> bool {
    h == "kk" || h.ends_with('c')
}

impl Rules for Leduc {
    type State = LeducState;

    fn name(&self) -> String {
        format!("leduc:{}", self.ranks)
    }

    fn root(&self) -> LeducState {
        LeducState {
            private: [None, None],
            public: None,
            round: 0,
            history: [String::new(), String::new()],
            contrib: [1.0, 1.0],
            folded: None,
        }
    }

    fn expand(&self, s: &LeducState) -> Node<LeducState> {
        if s.private[0].is_none() {
            return self.deal(s, |n, r| n.private[0] = Some(r));
        }
        if s.private[1].is_none() {
            return self.deal(s, |n, r| n.private[1] = Some(r));
        }
        if let Some(p) = s.folded {
            return Node::Terminal(if p == 0 { -s.contrib[0] } else { s.contrib[1] });
        }
        let h = &s.history[s.round];
        if round_over(h) {
            if s.round == 1 {
                return Node::Terminal(Self::showdown(s));
            }
            return self.deal(s, |n, r| {
                n.public = Some(r);
                n.round = 1;
            });
        }

        let actor = h.len() % 2;
        let facing_bet = h.ends_with('r');
        let raises = h.matches('r').count();
        let bet = if s.round == 0 { 2.0 } else { 4.0 };
        let mut moves: Vec<char> = if facing_bet { vec!['f', 'c'] } else { vec!['k'] };
        if raises < MAX_RAISES {
            moves.push('r');
        }
        let actions = moves
            .into_iter()
            .map(|m| {
                let mut next = s.clone();
                next.history[s.round].push(m);
                match m {
                    'f' => next.folded = Some(actor),
                    'c' => next.contrib[actor] = next.contrib[1 - actor],
                    'r' => next.contrib[actor] = next.contrib[1 - actor] + bet,
                    _ => {}
                }
                next
            })
            .collect();
        let public = s.public.map_or("-".to_string(), |p| p.to_string());
        let player = if actor == 0 { Player::One } else { Player::Two };
        Node::Decision {
            player,
            infoset: format!("{}:{public}:{}|{}", s.private[actor].unwrap(), s.history[0], s.history[1]),
            actions,
        }
    }
}

pub fn build_leduc(ranks: usize) -> Result<Game> {
    if ranks < 2 {
        return Err(Error::UnsupportedParameter(format!("leduc needs at least 2 ranks, got {ranks}")));
    }
    build_game(&Leduc { ranks })
}
