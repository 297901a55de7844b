//! CFR-style traversal with per-infoset regret minimizers and an optional
//! reward-transformation (RT) term.
//!
//! Each player update walks the treeplex bottom-up. At infoset `I` the
//! counterfactual loss `l(I)` already contains the values of the child
//! infosets; the RT term `w * mu * (sigma(I) - sigma_ref(I))` is added only
//! to the loss fed to the local minimizer, while the value passed up to the
//! parent sequence is the plain `<sigma(I), l(I)>`. Players update in
//! alternation: player 1 against `q2^t`, then player 2 against `q1^{t+1}`.

use crate::error::{Error, Result};
use crate::games::Game;
use crate::minimizers::{accumulate_in_place, immediate_regret_into, strategy_in_place, MinimizerKind};
use crate::treeplex::{BehaviorStrategy, Player, SequenceStrategy, Treeplex};

/// How iterates are weighted in the running average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AveragingScheme {
    Uniform,
    Linear,
    #[default]
    Quadratic,
}

impl AveragingScheme {
    pub fn weight(self, t: u64) -> f64 {
        let t = t as f64;
        match self {
            AveragingScheme::Uniform => 1.0,
            AveragingScheme::Linear => t,
            AveragingScheme::Quadratic => t * t,
        }
    }
}

/// The RT term applied during one iteration.
#[derive(Debug, Clone, Copy)]
pub struct RtTerm<'a> {
    pub mu: f64,
    /// Adaptive multiplier on `mu`.
    pub weight: f64,
    /// Reference behavior strategy of each player.
    pub reference: &'a [BehaviorStrategy; 2],
}

/// Per-sequence immediate losses `-(U_i q_opp)` of `player`.
pub fn direct_losses(game: &Game, player: Player, q_opp: &SequenceStrategy) -> Vec<f64> {
    let mut out = vec![0.0; game.treeplex(player).num_sequences()];
    direct_losses_into(game, player, &q_opp.q, &mut out);
    out
}

pub(crate) fn direct_losses_into(game: &Game, player: Player, q_opp: &[f64], out: &mut [f64]) {
    game.sequence_utilities(player, q_opp, out);
    for x in out.iter_mut() {
        *x = -*x;
    }
}

/// Counterfactual losses of `player` against `q_opp`, indexed by sequence:
/// `l(Ia) = -(U q_opp)(Ia) + sum over children I' of <sigma(I'), l(I')>`.
/// Slot 0 ends up holding the player's total expected loss.
pub fn counterfactual_losses(
    game: &Game,
    player: Player,
    q_opp: &SequenceStrategy,
    sigma: &BehaviorStrategy,
) -> Result<Vec<f64>> {
    let t = game.treeplex(player);
    let opp = game.treeplex(player.opponent());
    if q_opp.q.len() != opp.num_sequences() {
        return Err(Error::DimensionMismatch { expected: opp.num_sequences(), found: q_opp.q.len() });
    }
    if sigma.probs.len() != t.num_sequences() {
        return Err(Error::DimensionMismatch { expected: t.num_sequences(), found: sigma.probs.len() });
    }
    let mut cf = direct_losses(game, player, q_opp);
    for node in t.infosets() {
        let v: f64 = node.seqs().map(|s| sigma.probs[s] * cf[s]).sum();
        cf[node.parent_seq] += v;
    }
    Ok(cf)
}

/// `loss + w * mu * (sigma - reference)`.
pub fn rt_loss(loss: &[f64], sigma: &[f64], reference: &[f64], mu: f64, w: f64) -> Vec<f64> {
    let mut out = vec![0.0; loss.len()];
    rt_loss_into(loss, sigma, reference, w * mu, &mut out);
    out
}

fn rt_loss_into(loss: &[f64], sigma: &[f64], reference: &[f64], scale: f64, out: &mut [f64]) {
    for i in 0..loss.len() {
        out[i] = loss[i] + scale * (sigma[i] - reference[i]);
    }
}

#[derive(Debug, Clone)]
struct PlayerState {
    sigma: BehaviorStrategy,
    q: SequenceStrategy,
    cumulative: Vec<f64>,
    last_regret: Vec<f64>,
    avg_sum: Vec<f64>,
}

impl PlayerState {
    fn new(t: &Treeplex) -> Self {
        let sigma = t.uniform_strategy();
        let q = t.behavior_to_sequence(&sigma).expect("uniform strategy matches its treeplex");
        let n = t.num_sequences();
        Self { sigma, q, cumulative: vec![0.0; n], last_regret: vec![0.0; n], avg_sum: vec![0.0; n] }
    }
}

/// How often (in iterations) strategies and regrets are checked for NaN/inf.
pub const FINITE_CHECK_INTERVAL: u64 = 1000;

/// Solver state for one run over a shared game.
#[derive(Debug, Clone)]
pub struct Engine<'g> {
    game: &'g Game,
    kind: MinimizerKind,
    averaging: AveragingScheme,
    players: [PlayerState; 2],
    weight_sum: f64,
    t: u64,
    cf: Vec<f64>,
    hat: Vec<f64>,
    regret: Vec<f64>,
}

impl<'g> Engine<'g> {
    /// Starts from the uniform strategy with zero regrets.
    pub fn new(game: &'g Game, kind: MinimizerKind, averaging: AveragingScheme) -> Self {
        let players = [PlayerState::new(game.treeplex(Player::One)), PlayerState::new(game.treeplex(Player::Two))];
        let width = Player::BOTH.iter().map(|&p| game.treeplex(p).num_sequences()).max().unwrap_or(1);
        let widest = Player::BOTH
            .iter()
            .flat_map(|&p| game.treeplex(p).infosets().iter().map(|i| i.num_actions))
            .max()
            .unwrap_or(1);
        Self {
            game,
            kind,
            averaging,
            players,
            weight_sum: 0.0,
            t: 0,
            cf: vec![0.0; width],
            hat: vec![0.0; widest],
            regret: vec![0.0; widest],
        }
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn kind(&self) -> MinimizerKind {
        self.kind
    }

    /// Number of completed iterations.
    pub fn iteration(&self) -> u64 {
        self.t
    }

    /// Current (last-iterate) behavior strategies.
    pub fn strategies(&self) -> [&BehaviorStrategy; 2] {
        [&self.players[0].sigma, &self.players[1].sigma]
    }

    pub fn strategy_profile(&self) -> [BehaviorStrategy; 2] {
        [self.players[0].sigma.clone(), self.players[1].sigma.clone()]
    }

    /// Current sequence-form strategies.
    pub fn sequences(&self) -> [&SequenceStrategy; 2] {
        [&self.players[0].q, &self.players[1].q]
    }

    /// Cumulative regret of `player`, indexed by sequence.
    pub fn cumulative_regret(&self, player: Player) -> &[f64] {
        &self.players[player.index()].cumulative
    }

    /// One alternating iteration. The iterate played by each player before
    /// its update enters the running average with weight `w(t)`.
    pub fn iterate_once(&mut self, rt: Option<RtTerm<'_>>) -> Result<()> {
        self.t += 1;
        let w = self.averaging.weight(self.t);
        self.weight_sum += w;
        for player in Player::BOTH {
            self.update_player(player, rt, w);
        }
        if self.t.is_multiple_of(FINITE_CHECK_INTERVAL) {
            self.check_finite()?;
        }
        Ok(())
    }

    fn update_player(&mut self, player: Player, rt: Option<RtTerm<'_>>, avg_weight: f64) {
        let i = player.index();
        let treeplex = self.game.treeplex(player);
        let n = treeplex.num_sequences();
        let (me, opp) = {
            let (a, b) = self.players.split_at_mut(1);
            if i == 0 {
                (&mut a[0], &b[0])
            } else {
                (&mut b[0], &a[0])
            }
        };
        let cf = &mut self.cf[..n];
        direct_losses_into(self.game, player, &opp.q.q, cf);

        let rt = rt.filter(|r| r.mu * r.weight != 0.0);
        for node in treeplex.infosets() {
            let seqs = node.seqs();
            let k = node.num_actions;
            let sigma = &mut me.sigma.probs[seqs.clone()];
            let loss = &cf[seqs.clone()];
            let value: f64 = sigma.iter().zip(loss).map(|(s, l)| s * l).sum();

            let regret = &mut self.regret[..k];
            match rt {
                Some(rt) => {
                    let hat = &mut self.hat[..k];
                    let reference = &rt.reference[i].probs[seqs.clone()];
                    rt_loss_into(loss, sigma, reference, rt.weight * rt.mu, hat);
                    immediate_regret_into(hat, sigma, regret);
                }
                None => immediate_regret_into(loss, sigma, regret),
            }
            let cumulative = &mut me.cumulative[seqs.clone()];
            accumulate_in_place(self.kind, self.t, cumulative, regret);
            let last = &mut me.last_regret[seqs.clone()];
            last.copy_from_slice(regret);
            strategy_in_place(self.kind, cumulative, last, sigma);

            cf[node.parent_seq] += value;
        }

        for (acc, q) in me.avg_sum.iter_mut().zip(&me.q.q) {
            *acc += avg_weight * q;
        }
        treeplex.behavior_to_sequence_into(&me.sigma.probs, &mut me.q.q);
    }

    fn check_finite(&self) -> Result<()> {
        for (i, p) in self.players.iter().enumerate() {
            if p.sigma.probs.iter().chain(&p.cumulative).any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("player {} state at iteration {}", i + 1, self.t)));
            }
        }
        Ok(())
    }

    /// Weighted average of the iterates played so far, renormalized so that
    /// flow conservation holds exactly.
    pub fn average_strategy(&self) -> Result<[SequenceStrategy; 2]> {
        let [b1, b2] = self.average_behavior()?;
        Ok([
            self.game.treeplex(Player::One).behavior_to_sequence(&b1)?,
            self.game.treeplex(Player::Two).behavior_to_sequence(&b2)?,
        ])
    }

    pub fn average_behavior(&self) -> Result<[BehaviorStrategy; 2]> {
        if self.t == 0 {
            return Err(Error::NoIterations);
        }
        let avg = |i: usize| -> Result<BehaviorStrategy> {
            let q = SequenceStrategy { q: self.players[i].avg_sum.iter().map(|x| x / self.weight_sum).collect() };
            self.game.treeplex(Player::BOTH[i]).sequence_to_behavior(&q)
        };
        Ok([avg(0)?, avg(1)?])
    }
}
