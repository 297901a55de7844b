//! Sequence-form decision spaces.
//!
//! A [`Treeplex`] stores one player's infosets in bottom-up order: every
//! infoset appears after all infosets below it, so a forward pass over
//! [`Treeplex::infosets`] visits children before parents and a reverse pass
//! is top-down. Sequence 0 is the empty sequence; the sequences of infoset
//! `I` are the contiguous range `I.first_seq .. I.first_seq + I.num_actions`.
//!
//! Strategies are stored flat over sequence indices. For a behavior
//! strategy slot `s = Ia` holds `sigma(I, a)` and slot 0 holds 1.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Tolerance on simplex sums and flow conservation.
pub const FLOW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfosetNode {
    /// Sequence leading to this infoset (0 when the player has not acted yet).
    pub parent_seq: usize,
    pub first_seq: usize,
    pub num_actions: usize,
    /// `children[a]` lists the infosets immediately reachable after action `a`.
    pub children: Vec<Vec<usize>>,
    pub label: String,
}

impl InfosetNode {
    pub fn seqs(&self) -> Range<usize> {
        self.first_seq..self.first_seq + self.num_actions
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Treeplex {
    player: Player,
    infosets: Vec<InfosetNode>,
    num_sequences: usize,
}

/// One violated treeplex invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeplexIssue {
    SequenceCount { expected: usize, found: usize },
    NoActions { infoset: usize },
    SequenceRange { infoset: usize },
    SequenceOwnership { seq: usize, owners: usize },
    ParentOutOfRange { infoset: usize, parent_seq: usize },
    ChildOutOfRange { infoset: usize, child: usize },
    ChildMismatch { infoset: usize, action: usize, child: usize },
    MissingChild { infoset: usize, child: usize },
    ChildrenArity { infoset: usize },
    Cycle { infoset: usize },
    Ordering { infoset: usize, parent_infoset: usize },
}

impl fmt::Display for TreeplexIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TreeplexIssue::*;
        match self {
            SequenceCount { expected, found } => {
                write!(f, "sequence count {found}, expected 1 + sum |A(I)| = {expected}")
            }
            NoActions { infoset } => write!(f, "infoset {infoset} has no actions"),
            SequenceRange { infoset } => {
                write!(f, "infoset {infoset} owns sequences outside the valid range")
            }
            SequenceOwnership { seq, owners } => {
                write!(f, "sequence {seq} is owned by {owners} (infoset, action) pairs")
            }
            ParentOutOfRange { infoset, parent_seq } => {
                write!(f, "infoset {infoset} has invalid parent sequence {parent_seq}")
            }
            ChildOutOfRange { infoset, child } => {
                write!(f, "infoset {infoset} lists unknown child {child}")
            }
            ChildMismatch { infoset, action, child } => write!(
                f,
                "infoset {infoset} lists child {child} under action {action}, \
                 but the child's parent sequence differs"
            ),
            MissingChild { infoset, child } => {
                write!(f, "infoset {child} hangs below infoset {infoset} but is not listed")
            }
            ChildrenArity { infoset } => {
                write!(f, "infoset {infoset} has a children list of the wrong length")
            }
            Cycle { infoset } => write!(f, "infoset {infoset} lies on a parent cycle"),
            Ordering { infoset, parent_infoset } => write!(
                f,
                "infoset {infoset} appears after its parent infoset {parent_infoset}"
            ),
        }
    }
}

impl Treeplex {
    /// Builds a treeplex and rejects it if any invariant is violated.
    pub fn new(player: Player, infosets: Vec<InfosetNode>, num_sequences: usize) -> Result<Self> {
        let t = Self::from_raw(player, infosets, num_sequences);
        let issues = t.validate();
        if issues.is_empty() {
            Ok(t)
        } else {
            let msg: Vec<String> = issues.iter().map(ToString::to_string).collect();
            Err(Error::InvalidTreeplex(msg.join("; ")))
        }
    }

    /// Builds a treeplex without checking it. Use [`Treeplex::validate`] afterwards.
    pub fn from_raw(player: Player, infosets: Vec<InfosetNode>, num_sequences: usize) -> Self {
        Self { player, infosets, num_sequences }
    }

    /// A single decision point with `n` actions (one player of a matrix game).
    pub fn single(player: Player, n: usize) -> Result<Self> {
        let node = InfosetNode {
            parent_seq: 0,
            first_seq: 1,
            num_actions: n,
            children: vec![Vec::new(); n],
            label: "root".into(),
        };
        Self::new(player, vec![node], n + 1)
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn infosets(&self) -> &[InfosetNode] {
        &self.infosets
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn num_sequences(&self) -> usize {
        self.num_sequences
    }

    /// The infoset owning sequence `seq`, if any.
    pub fn owner_of(&self, seq: usize) -> Option<usize> {
        self.infosets.iter().position(|i| i.seqs().contains(&seq))
    }

    /// Reports every violated invariant; an empty report means the treeplex is valid.
    pub fn validate(&self) -> Vec<TreeplexIssue> {
        let mut issues = Vec::new();
        let n_seq = self.num_sequences;
        let expected = 1 + self.infosets.iter().map(|i| i.num_actions).sum::<usize>();
        if expected != n_seq {
            issues.push(TreeplexIssue::SequenceCount { expected, found: n_seq });
        }

        let mut owners = vec![0usize; n_seq];
        let mut owner_of = vec![usize::MAX; n_seq];
        for (id, node) in self.infosets.iter().enumerate() {
            if node.num_actions == 0 {
                issues.push(TreeplexIssue::NoActions { infoset: id });
            }
            if node.first_seq == 0 || node.first_seq + node.num_actions > n_seq {
                issues.push(TreeplexIssue::SequenceRange { infoset: id });
                continue;
            }
            for s in node.seqs() {
                owners[s] += 1;
                owner_of[s] = id;
            }
        }
        for (seq, &count) in owners.iter().enumerate().skip(1) {
            if count != 1 {
                issues.push(TreeplexIssue::SequenceOwnership { seq, owners: count });
            }
        }

        for (id, node) in self.infosets.iter().enumerate() {
            if node.parent_seq >= n_seq {
                issues.push(TreeplexIssue::ParentOutOfRange { infoset: id, parent_seq: node.parent_seq });
            }
            if node.children.len() != node.num_actions {
                issues.push(TreeplexIssue::ChildrenArity { infoset: id });
            }
            for (a, kids) in node.children.iter().enumerate() {
                for &c in kids {
                    match self.infosets.get(c) {
                        None => issues.push(TreeplexIssue::ChildOutOfRange { infoset: id, child: c }),
                        Some(child) if child.parent_seq != node.first_seq + a => {
                            issues.push(TreeplexIssue::ChildMismatch { infoset: id, action: a, child: c })
                        }
                        Some(_) => {}
                    }
                }
            }
        }

        // Every infoset hanging below a sequence must be listed as a child there.
        for (id, node) in self.infosets.iter().enumerate() {
            let p = node.parent_seq;
            if p == 0 || p >= n_seq || owner_of[p] == usize::MAX {
                continue;
            }
            let parent = &self.infosets[owner_of[p]];
            let a = p - parent.first_seq;
            let listed = parent.children.get(a).is_some_and(|kids| kids.contains(&id));
            if !listed {
                issues.push(TreeplexIssue::MissingChild { infoset: owner_of[p], child: id });
            }
        }

        // Walk parent chains: detect cycles, then check bottom-up ordering.
        let parent_infoset = |id: usize| -> Option<usize> {
            let p = self.infosets[id].parent_seq;
            if p == 0 || p >= n_seq || owner_of[p] == usize::MAX {
                None
            } else {
                Some(owner_of[p])
            }
        };
        for id in 0..self.infosets.len() {
            let mut cur = id;
            let mut steps = 0;
            let mut cyclic = false;
            while let Some(next) = parent_infoset(cur) {
                steps += 1;
                if next == id || steps > self.infosets.len() {
                    cyclic = true;
                    break;
                }
                cur = next;
            }
            if cyclic {
                issues.push(TreeplexIssue::Cycle { infoset: id });
            } else if let Some(par) = parent_infoset(id) {
                if par <= id {
                    issues.push(TreeplexIssue::Ordering { infoset: id, parent_infoset: par });
                }
            }
        }
        issues
    }

    /// Behavior strategy playing uniformly at every infoset.
    pub fn uniform_strategy(&self) -> BehaviorStrategy {
        let mut probs = vec![0.0; self.num_sequences];
        if let Some(p) = probs.first_mut() {
            *p = 1.0;
        }
        for node in &self.infosets {
            let u = 1.0 / node.num_actions as f64;
            probs[node.seqs()].fill(u);
        }
        BehaviorStrategy { probs }
    }

    /// Sequence-form realization of a behavior strategy: `q(Ia) = q(pI) * sigma(I, a)`.
    pub fn behavior_to_sequence(&self, sigma: &BehaviorStrategy) -> Result<SequenceStrategy> {
        self.check_len(sigma.probs.len())?;
        let mut q = vec![0.0; self.num_sequences];
        self.behavior_to_sequence_into(&sigma.probs, &mut q);
        Ok(SequenceStrategy { q })
    }

    /// Unchecked version writing into a caller-provided buffer.
    pub(crate) fn behavior_to_sequence_into(&self, sigma: &[f64], q: &mut [f64]) {
        q[0] = 1.0;
        for node in self.infosets.iter().rev() {
            let reach = q[node.parent_seq];
            for s in node.seqs() {
                q[s] = reach * sigma[s];
            }
        }
    }

    /// Behavior strategy of a sequence-form strategy. Infosets that are never
    /// reached (`q(pI) = 0`) get the uniform distribution.
    pub fn sequence_to_behavior(&self, q: &SequenceStrategy) -> Result<BehaviorStrategy> {
        self.check_len(q.q.len())?;
        self.check_flow(&q.q)?;
        let mut probs = vec![0.0; self.num_sequences];
        probs[0] = 1.0;
        for node in &self.infosets {
            let mass: f64 = q.q[node.seqs()].iter().sum();
            if mass > 0.0 {
                for s in node.seqs() {
                    probs[s] = q.q[s] / mass;
                }
            } else {
                probs[node.seqs()].fill(1.0 / node.num_actions as f64);
            }
        }
        Ok(BehaviorStrategy { probs })
    }

    /// Checks that `sigma` is a simplex at every infoset.
    pub fn check_behavior(&self, sigma: &BehaviorStrategy) -> Result<()> {
        self.check_len(sigma.probs.len())?;
        for (id, node) in self.infosets.iter().enumerate() {
            let slice = &sigma.probs[node.seqs()];
            let sum: f64 = slice.iter().sum();
            if slice.iter().any(|&p| p.is_nan() || p < 0.0) || (sum - 1.0).abs() > FLOW_TOLERANCE {
                return Err(Error::FlowViolation { infoset: id, residual: sum - 1.0 });
            }
        }
        Ok(())
    }

    /// Checks `q(empty) = 1`, `q >= 0` and `sum_a q(Ia) = q(pI)` within [`FLOW_TOLERANCE`].
    pub fn check_flow(&self, q: &[f64]) -> Result<()> {
        self.check_len(q.len())?;
        if (q[0] - 1.0).abs() > FLOW_TOLERANCE {
            return Err(Error::FlowViolation { infoset: usize::MAX, residual: q[0] - 1.0 });
        }
        for (id, node) in self.infosets.iter().enumerate() {
            let slice = &q[node.seqs()];
            let residual = slice.iter().sum::<f64>() - q[node.parent_seq];
            if slice.iter().any(|&x| x.is_nan() || x < -FLOW_TOLERANCE) || residual.abs() > FLOW_TOLERANCE {
                return Err(Error::FlowViolation { infoset: id, residual });
            }
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.num_sequences {
            return Err(Error::DimensionMismatch { expected: self.num_sequences, found: len });
        }
        Ok(())
    }
}

/// Per-infoset action distributions, stored flat over sequence indices.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorStrategy {
    pub probs: Vec<f64>,
}

impl BehaviorStrategy {
    pub fn at<'a>(&'a self, node: &InfosetNode) -> &'a [f64] {
        &self.probs[node.seqs()]
    }

    pub fn at_mut<'a>(&'a mut self, node: &InfosetNode) -> &'a mut [f64] {
        &mut self.probs[node.seqs()]
    }
}

/// Sequence-form strategy `q`, indexed by sequence with `q[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStrategy {
    pub q: Vec<f64>,
}
