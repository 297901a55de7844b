use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::games::{Game, PayoffEntry};
use crate::treeplex::{InfosetNode, Player, Treeplex};

/// One node of a game tree as seen by [`build_game`].
pub enum Node<S> {
    /// Player 1's utility; player 2 gets the negation.
    Terminal(f64),
    Chance(Vec<(f64, S)>),
    /// `infoset` identifies the information set; histories sharing it must
    /// offer the same number of actions and follow the same own sequence.
    Decision { player: Player, infoset: String, actions: Vec<S> },
}

/// Rules of a two-player zero-sum game with perfect recall.
pub trait Rules {
    type State;

    fn name(&self) -> String;
    fn root(&self) -> Self::State;
    fn expand(&self, state: &Self::State) -> Node<Self::State>;
}

struct PendingInfoset {
    parent_seq: usize,
    first_seq: usize,
    num_actions: usize,
    label: String,
}

#[derive(Default)]
struct PendingPlayer {
    ids: HashMap<String, usize>,
    infosets: Vec<PendingInfoset>,
    num_sequences: usize,
}

impl PendingPlayer {
    fn new() -> Self {
        Self { num_sequences: 1, ..Default::default() }
    }

    fn visit(&mut self, key: String, parent_seq: usize, num_actions: usize) -> Result<usize> {
        if let Some(&id) = self.ids.get(&key) {
            let info = &self.infosets[id];
            if info.parent_seq != parent_seq || info.num_actions != num_actions {
                return Err(Error::InvalidTreeplex(format!(
                    "infoset `{key}` violates perfect recall or has inconsistent actions"
                )));
            }
            return Ok(info.first_seq);
        }
        let first_seq = self.num_sequences;
        self.num_sequences += num_actions;
        self.ids.insert(key.clone(), self.infosets.len());
        self.infosets.push(PendingInfoset { parent_seq, first_seq, num_actions, label: key });
        Ok(first_seq)
    }

    /// Reverses discovery order (parents are discovered before their
    /// descendants) and renumbers sequences. Returns the treeplex and the
    /// pending-to-final sequence map.
    fn finish(self, player: Player) -> Result<(Treeplex, Vec<usize>)> {
        let n = self.infosets.len();
        let mut seq_map = vec![0usize; self.num_sequences];
        let mut next = 1;
        for info in self.infosets.iter().rev() {
            for a in 0..info.num_actions {
                seq_map[info.first_seq + a] = next + a;
            }
            next += info.num_actions;
        }
        let mut nodes: Vec<InfosetNode> = self
            .infosets
            .into_iter()
            .rev()
            .map(|info| InfosetNode {
                parent_seq: seq_map[info.parent_seq],
                first_seq: seq_map[info.first_seq],
                num_actions: info.num_actions,
                children: vec![Vec::new(); info.num_actions],
                label: info.label,
            })
            .collect();
        let mut owner = vec![(usize::MAX, 0usize); next];
        for (id, node) in nodes.iter().enumerate() {
            for a in 0..node.num_actions {
                owner[node.first_seq + a] = (id, a);
            }
        }
        for id in 0..n {
            let p = nodes[id].parent_seq;
            if p != 0 {
                let (parent, a) = owner[p];
                nodes[parent].children[a].push(id);
            }
        }
        let t = Treeplex::new(player, nodes, next)?;
        Ok((t, seq_map))
    }
}

struct Builder<'r, R: Rules> {
    rules: &'r R,
    players: [PendingPlayer; 2],
    payoffs: HashMap<(usize, usize), f64>,
    order: Vec<(usize, usize)>,
}

impl<R: Rules> Builder<'_, R> {
    fn walk(&mut self, state: &R::State, reach: f64, seqs: [usize; 2]) -> Result<()> {
        match self.rules.expand(state) {
            Node::Terminal(u) => {
                let key = (seqs[0], seqs[1]);
                let slot = self.payoffs.entry(key).or_insert_with(|| {
                    self.order.push(key);
                    0.0
                });
                *slot += reach * u;
            }
            Node::Chance(outcomes) => {
                for (p, next) in &outcomes {
                    self.walk(next, reach * p, seqs)?;
                }
            }
            Node::Decision { player, infoset, actions } => {
                let i = player.index();
                let first = self.players[i].visit(infoset, seqs[i], actions.len())?;
                for (a, next) in actions.iter().enumerate() {
                    let mut child = seqs;
                    child[i] = first + a;
                    self.walk(next, reach, child)?;
                }
            }
        }
        Ok(())
    }
}

/// Enumerates the full game tree of `rules` into sequence form.
pub fn build_game<R: Rules>(rules: &R) -> Result<Game> {
    let mut b = Builder {
        rules,
        players: [PendingPlayer::new(), PendingPlayer::new()],
        payoffs: HashMap::new(),
        order: Vec::new(),
    };
    b.walk(&rules.root(), 1.0, [0, 0])?;
    let Builder { players: [p1, p2], payoffs, order, .. } = b;
    let (t1, m1) = p1.finish(Player::One)?;
    let (t2, m2) = p2.finish(Player::Two)?;
    let mut entries: Vec<PayoffEntry> = order
        .into_iter()
        .map(|(s1, s2)| PayoffEntry { seq1: m1[s1], seq2: m2[s2], value: payoffs[&(s1, s2)] })
        .collect();
    entries.sort_by_key(|e| (e.seq1, e.seq2));
    Game::new(rules.name(), t1, t2, entries)
}
