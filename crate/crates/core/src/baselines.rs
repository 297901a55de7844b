//! Multiplicative-weights comparison algorithms.
//!
//! These are comparison-grade implementations of MWU, OMWU, Reg-OMWU and
//! R-NaD on a single simplex ([`MwuState`]) and their dilated counterparts
//! over a treeplex ([`DilatedState`], driven by [`BaselineSolver`]).
//!
//! The dilated step is the closed-form proximal step of the dilated entropy
//! `sum_I beta_I * sum_a x(Ia) log(x(Ia) / x(pI))`. Walking bottom-up, infoset
//! `I` sees `L(Ia) = g(Ia) + sum_{I' in C(I,a)} V(I')`, updates
//! `sigma'(I) ∝ sigma(I) * exp(-eta L(I) / beta_I)` and passes
//! `V(I) = -(beta_I / eta) * log sum_a sigma(I,a) exp(-eta L(Ia) / beta_I)`
//! to its parent sequence. On a single infoset this is exactly MWU.
//!
//! Strategies are kept as log-weights so they stay strictly positive.

use std::fmt;
use std::str::FromStr;

use crate::engine::direct_losses_into;
use crate::error::{Error, Result};
use crate::games::Game;
use crate::treeplex::{BehaviorStrategy, Player, SequenceStrategy, Treeplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Mwu,
    Omwu,
    /// OMWU with an entropy pull towards the uniform strategy.
    RegOmwu,
    /// MWU with an entropy pull towards a reference refreshed every `T`
    /// player updates.
    Rnad,
}

impl BaselineKind {
    pub fn optimistic(self) -> bool {
        matches!(self, BaselineKind::Omwu | BaselineKind::RegOmwu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DilationScheme {
    #[default]
    AllOnes,
    /// `beta_I = 1 + height of the subtree below I`.
    Depth,
}

impl FromStr for DilationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-ones" | "ones" => Ok(DilationScheme::AllOnes),
            "depth" => Ok(DilationScheme::Depth),
            _ => Err(Error::Config(format!("unknown dilation scheme `{s}`"))),
        }
    }
}

impl fmt::Display for DilationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DilationScheme::AllOnes => "all-ones",
            DilationScheme::Depth => "depth",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineParams {
    pub kind: BaselineKind,
    pub eta: f64,
    /// Regularization weight (Reg-OMWU and R-NaD only).
    pub mu_b: f64,
    /// R-NaD reference refresh interval in player updates.
    pub interval: u64,
    pub dilation: DilationScheme,
}

impl BaselineParams {
    pub fn new(kind: BaselineKind, eta: f64) -> Self {
        Self { kind, eta, mu_b: 0.0, interval: 1, dilation: DilationScheme::AllOnes }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::UnsupportedParameter(format!("learning rate must be positive, got {}", self.eta)));
        }
        if !(self.mu_b.is_finite() && self.mu_b >= 0.0) {
            return Err(Error::UnsupportedParameter(format!("mu_b must be nonnegative, got {}", self.mu_b)));
        }
        if self.interval == 0 {
            return Err(Error::UnsupportedParameter("reference interval must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_finite(what: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(())
}

/// Sets `out = log_sigma - scaled_loss` normalized in log space and returns
/// the log-partition `log sum_a exp(log_sigma_a - scaled_loss_a)`.
fn log_softmax_step(log_sigma: &[f64], scaled_loss: &[f64], out: &mut [f64]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    for ((o, l), s) in out.iter_mut().zip(log_sigma).zip(scaled_loss) {
        *o = l - s;
        max = max.max(*o);
    }
    let lse = max + out.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
    for o in out.iter_mut() {
        *o -= lse;
    }
    lse
}

/// Single-simplex learner state.
#[derive(Debug, Clone, PartialEq)]
pub struct MwuState {
    log_sigma: Vec<f64>,
    prev_loss: Vec<f64>,
    log_reference: Vec<f64>,
    pub eta: f64,
    pub mu_b: f64,
    pub interval: u64,
}

impl MwuState {
    /// Uniform start; the R-NaD reference also starts uniform.
    pub fn new(num_actions: usize, eta: f64, mu_b: f64, interval: u64) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::UnsupportedParameter("simplex needs at least one action".into()));
        }
        Self::from_strategy(&vec![1.0 / num_actions as f64; num_actions], eta, mu_b, interval)
    }

    /// Starts from a strictly positive distribution.
    pub fn from_strategy(sigma: &[f64], eta: f64, mu_b: f64, interval: u64) -> Result<Self> {
        let mut params = BaselineParams::new(BaselineKind::Mwu, eta);
        params.mu_b = mu_b;
        params.interval = interval;
        params.validate()?;
        if sigma.is_empty() || sigma.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::UnsupportedParameter("strategy must be strictly positive".into()));
        }
        let total: f64 = sigma.iter().sum();
        let log_sigma: Vec<f64> = sigma.iter().map(|p| (p / total).ln()).collect();
        Ok(Self {
            prev_loss: vec![0.0; sigma.len()],
            log_reference: log_sigma.clone(),
            log_sigma,
            eta,
            mu_b,
            interval,
        })
    }

    pub fn strategy(&self) -> Vec<f64> {
        self.log_sigma.iter().map(|l| l.exp()).collect()
    }

    pub fn log_strategy(&self) -> &[f64] {
        &self.log_sigma
    }

    pub fn prev_loss(&self) -> &[f64] {
        &self.prev_loss
    }

    pub fn reference(&self) -> Vec<f64> {
        self.log_reference.iter().map(|l| l.exp()).collect()
    }

    fn check(&self, loss: &[f64]) -> Result<()> {
        if loss.len() != self.log_sigma.len() {
            return Err(Error::DimensionMismatch { expected: self.log_sigma.len(), found: loss.len() });
        }
        check_finite("loss", loss)
    }

    fn advance(&self, loss: &[f64], optimistic: bool) -> MwuState {
        let scaled: Vec<f64> = if optimistic {
            loss.iter().zip(&self.prev_loss).map(|(l, p)| self.eta * (2.0 * l - p)).collect()
        } else {
            loss.iter().map(|l| self.eta * l).collect()
        };
        let mut next = self.clone();
        log_softmax_step(&self.log_sigma, &scaled, &mut next.log_sigma);
        next.prev_loss.copy_from_slice(loss);
        next
    }

    fn regularized(&self, loss: &[f64], log_anchor: &[f64]) -> Vec<f64> {
        loss.iter().zip(&self.log_sigma).zip(log_anchor).map(|((l, s), a)| l + self.mu_b * (s - a)).collect()
    }
}

/// `sigma' ∝ sigma * exp(-eta * loss)`.
pub fn mwu_step(state: &MwuState, loss: &[f64]) -> Result<MwuState> {
    state.check(loss)?;
    Ok(state.advance(loss, false))
}

/// `sigma' ∝ sigma * exp(-eta * (2 loss - prev_loss))`.
pub fn omwu_step(state: &MwuState, loss: &[f64]) -> Result<MwuState> {
    state.check(loss)?;
    Ok(state.advance(loss, true))
}

/// OMWU on `loss + mu_b * (log sigma - log uniform)`.
pub fn reg_omwu_step(state: &MwuState, loss: &[f64]) -> Result<MwuState> {
    state.check(loss)?;
    let n = loss.len() as f64;
    let uniform = vec![-n.ln(); loss.len()];
    Ok(state.advance(&state.regularized(loss, &uniform), true))
}

/// MWU on `loss + mu_b * (log sigma - log sigma_ref)`. `t` is the number of
/// player updates completed so far; the reference is refreshed to the
/// current strategy whenever `t` is a positive multiple of the interval.
pub fn rnad_step(state: &MwuState, loss: &[f64], t: u64) -> Result<MwuState> {
    state.check(loss)?;
    let mut base = state.clone();
    if t > 0 && t.is_multiple_of(state.interval) {
        base.log_reference.clone_from(&base.log_sigma);
    }
    let reg = base.regularized(loss, &base.log_reference);
    Ok(base.advance(&reg, false))
}

/// Per-infoset dilation weights in treeplex order.
pub fn dilation_weights(t: &Treeplex, scheme: DilationScheme) -> Vec<f64> {
    match scheme {
        DilationScheme::AllOnes => vec![1.0; t.num_infosets()],
        DilationScheme::Depth => {
            let mut height = vec![0usize; t.num_infosets()];
            for (id, node) in t.infosets().iter().enumerate() {
                height[id] = node.children.iter().flatten().map(|&c| height[c] + 1).max().unwrap_or(0);
            }
            height.into_iter().map(|h| 1.0 + h as f64).collect()
        }
    }
}

/// Treeplex learner state. All vectors are indexed by sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatedState {
    log_sigma: Vec<f64>,
    prev_loss: Vec<f64>,
    log_reference: Vec<f64>,
    beta: Vec<f64>,
    sigma: BehaviorStrategy,
}

impl DilatedState {
    pub fn new(t: &Treeplex, scheme: DilationScheme) -> Self {
        let sigma = t.uniform_strategy();
        let log_sigma: Vec<f64> = sigma.probs.iter().map(|p| p.ln()).collect();
        Self {
            prev_loss: vec![0.0; t.num_sequences()],
            log_reference: log_sigma.clone(),
            log_sigma,
            beta: dilation_weights(t, scheme),
            sigma,
        }
    }

    pub fn strategy(&self) -> &BehaviorStrategy {
        &self.sigma
    }

    pub fn reference(&self) -> BehaviorStrategy {
        BehaviorStrategy { probs: self.log_reference.iter().map(|l| l.exp()).collect() }
    }

    pub fn dilation(&self) -> &[f64] {
        &self.beta
    }

    pub fn refresh_reference(&mut self) {
        self.log_reference.clone_from(&self.log_sigma);
    }

    /// One update on the per-sequence loss `loss` (for a game, `-(U q_opp)`
    /// of this player).
    pub fn step(&mut self, t: &Treeplex, params: &BaselineParams, loss: &[f64]) -> Result<()> {
        let n = t.num_sequences();
        if loss.len() != n || self.log_sigma.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: loss.len() });
        }
        check_finite("loss", loss)?;
        let mut g = loss.to_vec();
        if params.mu_b != 0.0 {
            match params.kind {
                BaselineKind::RegOmwu => {
                    for (node, beta) in t.infosets().iter().zip(&self.beta) {
                        let log_u = -(node.num_actions as f64).ln();
                        for s in node.seqs() {
                            g[s] += params.mu_b * beta * (self.log_sigma[s] - log_u);
                        }
                    }
                }
                BaselineKind::Rnad => {
                    for (node, beta) in t.infosets().iter().zip(&self.beta) {
                        for s in node.seqs() {
                            g[s] += params.mu_b * beta * (self.log_sigma[s] - self.log_reference[s]);
                        }
                    }
                }
                BaselineKind::Mwu | BaselineKind::Omwu => {}
            }
        }
        let mut total: Vec<f64> = if params.kind.optimistic() {
            g.iter().zip(&self.prev_loss).map(|(a, b)| 2.0 * a - b).collect()
        } else {
            g.clone()
        };
        let mut scaled = Vec::new();
        let mut next = self.log_sigma.clone();
        for (node, &beta) in t.infosets().iter().zip(&self.beta) {
            let seqs = node.seqs();
            scaled.clear();
            scaled.extend(total[seqs.clone()].iter().map(|l| params.eta * l / beta));
            let lse = log_softmax_step(&self.log_sigma[seqs.clone()], &scaled, &mut next[seqs]);
            total[node.parent_seq] -= beta / params.eta * lse;
        }
        check_finite("dilated strategy", &next)?;
        self.log_sigma = next;
        for (p, l) in self.sigma.probs.iter_mut().zip(&self.log_sigma).skip(1) {
            *p = l.exp();
        }
        self.prev_loss = g;
        Ok(())
    }
}

/// Dilated OMWU step with all-ones or custom dilation as stored in `state`.
pub fn domwu_step(t: &Treeplex, state: &DilatedState, loss: &[f64], eta: f64) -> Result<DilatedState> {
    let params = BaselineParams::new(BaselineKind::Omwu, eta);
    params.validate()?;
    let mut next = state.clone();
    next.step(t, &params, loss)?;
    Ok(next)
}

/// Alternating-update driver for the dilated baselines.
#[derive(Debug, Clone)]
pub struct BaselineSolver<'g> {
    game: &'g Game,
    params: BaselineParams,
    players: [DilatedState; 2],
    q: [SequenceStrategy; 2],
    updates: u64,
    t: u64,
    loss: Vec<f64>,
}

impl<'g> BaselineSolver<'g> {
    pub fn new(game: &'g Game, params: BaselineParams) -> Result<Self> {
        params.validate()?;
        let players = Player::BOTH.map(|p| DilatedState::new(game.treeplex(p), params.dilation));
        let q = Player::BOTH.map(|p| {
            let t = game.treeplex(p);
            t.behavior_to_sequence(&t.uniform_strategy()).expect("uniform strategy matches its treeplex")
        });
        Ok(Self { game, params, players, q, updates: 0, t: 0, loss: Vec::new() })
    }

    pub fn params(&self) -> &BaselineParams {
        &self.params
    }

    pub fn iteration(&self) -> u64 {
        self.t
    }

    pub fn strategies(&self) -> [&BehaviorStrategy; 2] {
        [self.players[0].strategy(), self.players[1].strategy()]
    }

    pub fn sequences(&self) -> [&SequenceStrategy; 2] {
        [&self.q[0], &self.q[1]]
    }

    pub fn state(&self, player: Player) -> &DilatedState {
        &self.players[player.index()]
    }

    /// Player 1 updates against `q2`, then player 2 against the new `q1`.
    pub fn iterate_once(&mut self) -> Result<()> {
        self.t += 1;
        for player in Player::BOTH {
            let i = player.index();
            let t = self.game.treeplex(player);
            if self.params.kind == BaselineKind::Rnad && self.updates > 0 && self.updates.is_multiple_of(self.params.interval) {
                for p in &mut self.players {
                    p.refresh_reference();
                }
            }
            self.loss.resize(t.num_sequences(), 0.0);
            direct_losses_into(self.game, player, &self.q[1 - i].q, &mut self.loss);
            self.players[i].step(t, &self.params, &self.loss)?;
            t.behavior_to_sequence_into(&self.players[i].strategy().probs, &mut self.q[i].q);
            self.updates += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{build_kuhn, matrix_from_rows};
    use crate::metrics::exploitability;
    use crate::treeplex::tests::two_level;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn constant_loss_leaves_strategy_unchanged() {
        let s = MwuState::from_strategy(&[0.2, 0.3, 0.5], 0.7, 0.0, 1).unwrap();
        let next = mwu_step(&s, &[4.0, 4.0, 4.0]).unwrap();
        assert!(close(&next.strategy(), &[0.2, 0.3, 0.5], 1e-15));
    }

    #[test]
    fn tiny_learning_rate_is_nearly_static() {
        let s = MwuState::from_strategy(&[0.2, 0.8], 1e-12, 0.0, 1).unwrap();
        let next = omwu_step(&s, &[1.0, -1.0]).unwrap();
        assert!(close(&next.strategy(), &[0.2, 0.8], 1e-11));
    }

    #[test]
    fn mwu_matches_hand_computation() {
        let s = MwuState::new(2, 0.5, 0.0, 1).unwrap();
        let next = mwu_step(&s, &[1.0, 0.0]).unwrap();
        let e = (-0.5f64).exp();
        assert!(close(&next.strategy(), &[e / (1.0 + e), 1.0 / (1.0 + e)], 1e-15));
        assert_eq!(next.prev_loss(), &[1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let s = MwuState::new(2, 0.5, 0.0, 1).unwrap();
        assert!(mwu_step(&s, &[1.0]).is_err());
        assert!(matches!(mwu_step(&s, &[f64::NAN, 0.0]), Err(Error::NonFinite(_))));
        assert!(MwuState::new(2, 0.0, 0.0, 1).is_err());
        assert!(MwuState::from_strategy(&[1.0, 0.0], 0.1, 0.0, 1).is_err());
    }

    #[test]
    fn huge_losses_stay_interior() {
        let s = MwuState::new(3, 1.0, 0.0, 1).unwrap();
        let next = mwu_step(&s, &[1e6, 0.0, -1e6]).unwrap();
        assert!(next.log_strategy().iter().all(|l| l.is_finite()));
        assert!(next.strategy().iter().sum::<f64>() - 1.0 < 1e-12);
    }

    #[test]
    fn regularizers_vanish_at_their_anchor() {
        let loss = [0.3, -0.1, 0.5];
        let u = MwuState::new(3, 0.4, 0.7, 5).unwrap();
        assert_eq!(reg_omwu_step(&u, &loss).unwrap(), omwu_step(&u, &loss).unwrap());
        // sigma equals its own reference right after a refresh
        let s = MwuState::from_strategy(&[0.1, 0.6, 0.3], 0.4, 0.7, 5).unwrap();
        let a = rnad_step(&s, &loss, 5).unwrap();
        let b = mwu_step(&s, &loss).unwrap();
        assert!(close(&a.strategy(), &b.strategy(), 1e-15));
    }

    #[test]
    fn matching_pennies_omwu_converges() {
        let g = matrix_from_rows("mp", &[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let mut s = BaselineSolver::new(&g, BaselineParams::new(BaselineKind::Omwu, 0.1)).unwrap();
        // start off the equilibrium so there is something to converge from
        s.players[0] = DilatedState::new(g.treeplex(Player::One), DilationScheme::AllOnes);
        s.players[0].log_sigma = vec![0.0, 0.9f64.ln(), 0.1f64.ln()];
        s.players[0].sigma.probs = vec![1.0, 0.9, 0.1];
        s.q[0].q = vec![1.0, 0.9, 0.1];
        for _ in 0..10_000 {
            s.iterate_once().unwrap();
        }
        let [q1, q2] = s.sequences();
        assert!(exploitability(&g, q1, q2).unwrap().value < 1e-3);
    }

    #[test]
    fn single_infoset_dilated_step_is_omwu() {
        let t = Treeplex::single(Player::One, 3).unwrap();
        let mut d = DilatedState::new(&t, DilationScheme::AllOnes);
        let mut m = MwuState::new(3, 0.3, 0.0, 1).unwrap();
        for loss in [[0.5, -0.2, 0.1], [1.0, 0.3, -0.7], [0.0, 0.2, 0.4]] {
            let seq = [0.0, loss[0], loss[1], loss[2]];
            d = domwu_step(&t, &d, &seq, 0.3).unwrap();
            m = omwu_step(&m, &loss).unwrap();
            assert!(close(&d.strategy().probs[1..], &m.strategy(), 1e-15));
        }
    }

    #[test]
    fn dilated_step_matches_treeplex_softmax() {
        // child infoset 0 under sequence 1 of root infoset 1
        let t = two_level();
        let d = DilatedState::new(&t, DilationScheme::AllOnes);
        let loss = [0.0, 0.2, -0.1, 0.4, 0.8];
        let eta = 0.5;
        let next = domwu_step(&t, &d, &loss, eta).unwrap();
        // first optimistic step: the loss enters twice, the prediction is 0
        let l = loss.map(|x| 2.0 * x);
        let child = [0.5 * (-eta * l[3]).exp(), 0.5 * (-eta * l[4]).exp()];
        let z = child[0] + child[1];
        let v = -z.ln() / eta;
        let root = [0.5 * (-eta * (l[1] + v)).exp(), 0.5 * (-eta * l[2]).exp()];
        let r = root[0] + root[1];
        let want = [1.0, root[0] / r, root[1] / r, child[0] / z, child[1] / z];
        assert!(close(&next.strategy().probs, &want, 1e-15), "{:?} {want:?}", next.strategy().probs);
    }

    #[test]
    fn depth_dilation_weights() {
        let t = two_level();
        assert_eq!(dilation_weights(&t, DilationScheme::Depth), vec![1.0, 2.0]);
        assert_eq!(dilation_weights(&t, DilationScheme::AllOnes), vec![1.0, 1.0]);
    }

    #[test]
    fn rnad_refreshes_every_interval() {
        let g = build_kuhn(3).unwrap();
        let mut p = BaselineParams::new(BaselineKind::Rnad, 0.2);
        p.mu_b = 0.05;
        p.interval = 4;
        let mut s = BaselineSolver::new(&g, p).unwrap();
        s.iterate_once().unwrap();
        // two updates so far: reference still uniform
        let uniform = g.treeplex(Player::One).uniform_strategy();
        assert!(close(&s.state(Player::One).reference().probs, &uniform.probs, 1e-15));
        s.iterate_once().unwrap();
        s.iterate_once().unwrap();
        // refreshed before update 5 to the strategy after update 4
        assert_ne!(s.state(Player::One).reference().probs, uniform.probs);
    }

    #[test]
    fn kuhn_domwu_trace_decreases() {
        // The last iterate oscillates on its way down, so compare the
        // average level of the two halves of the trace.
        let g = build_kuhn(3).unwrap();
        let mut s = BaselineSolver::new(&g, BaselineParams::new(BaselineKind::Omwu, 0.127)).unwrap();
        let eps = |s: &BaselineSolver| {
            let [q1, q2] = s.sequences();
            exploitability(&g, q1, q2).unwrap().value
        };
        let start = eps(&s);
        let mut trace = Vec::new();
        for i in 1..=1000 {
            s.iterate_once().unwrap();
            if i % 50 == 0 {
                trace.push(eps(&s));
            }
        }
        let (early, late) = trace.split_at(trace.len() / 2);
        let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean(late) < mean(early), "{trace:?}");
        assert!(*trace.last().unwrap() < start / 4.0);
    }

    proptest! {
        #[test]
        fn shift_invariance(
            p in prop::collection::vec(0.01f64..1.0, 2..6),
            c in -50.0f64..50.0,
            seed in prop::collection::vec(-1.0f64..1.0, 6),
        ) {
            let loss: Vec<f64> = seed[..p.len()].to_vec();
            let shifted: Vec<f64> = loss.iter().map(|l| l + c).collect();
            let s = MwuState::from_strategy(&p, 0.3, 0.0, 1).unwrap();
            let a = mwu_step(&s, &loss).unwrap().strategy();
            let b = mwu_step(&s, &shifted).unwrap().strategy();
            prop_assert!(close(&a, &b, 1e-12));
            let a = omwu_step(&s, &loss).unwrap().strategy();
            let b = omwu_step(&s, &shifted).unwrap().strategy();
            prop_assert!(close(&a, &b, 1e-12));
        }

        #[test]
        fn zero_mu_equivalences(
            losses in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..20),
        ) {
            let mut reg = MwuState::new(3, 0.5, 0.0, 3).unwrap();
            let mut omwu = reg.clone();
            let mut rnad = reg.clone();
            let mut mwu = reg.clone();
            for (t, l) in losses.iter().enumerate() {
                reg = reg_omwu_step(&reg, l).unwrap();
                omwu = omwu_step(&omwu, l).unwrap();
                rnad = rnad_step(&rnad, l, t as u64).unwrap();
                mwu = mwu_step(&mwu, l).unwrap();
                prop_assert!(close(&reg.strategy(), &omwu.strategy(), 1e-12));
                prop_assert!(close(&rnad.strategy(), &mwu.strategy(), 1e-12));
            }
        }

        #[test]
        fn updates_stay_strictly_interior(
            losses in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 5), 1..30),
            mu in 0.0f64..0.25,
        ) {
            // The regularizer enters explicitly, which is only stable while
            // eta * mu_b * beta stays well below one.
            let t = two_level();
            for kind in [BaselineKind::Mwu, BaselineKind::Omwu, BaselineKind::RegOmwu, BaselineKind::Rnad] {
                let mut p = BaselineParams::new(kind, 0.8);
                p.mu_b = mu;
                let mut d = DilatedState::new(&t, DilationScheme::Depth);
                for l in &losses {
                    d.step(&t, &p, l).unwrap();
                    prop_assert!(d.strategy().probs.iter().all(|&x| x > 0.0));
                    prop_assert!(t.check_behavior(d.strategy()).is_ok());
                }
            }
        }
    }
}
