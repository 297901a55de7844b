//! Local regret minimizers run at every information set.
//!
//! The slice-level functions ([`accumulate_in_place`],
//! [`strategy_in_place`]) are what the engine calls on its flat per-sequence
//! buffers; [`RegretState`] wraps them for standalone use.

use crate::error::{Error, Result};

/// Which regret-matching variant to run.
///
/// `Drm` discounts positive cumulative regret by `t^alpha / (t^alpha + 1)`
/// and negative cumulative regret by `t^beta / (t^beta + 1)`. An exponent of
/// `+inf` means weight 1 and `-inf` weight 0, so `(inf, inf)` is RM and
/// `(inf, -inf)` is RM+.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinimizerKind {
    Rm,
    RmPlus,
    Drm { alpha: f64, beta: f64 },
    /// Predictive RM+ using the last immediate regret as the prediction.
    PrmPlus,
}

impl MinimizerKind {
    pub fn uses_prediction(&self) -> bool {
        matches!(self, MinimizerKind::PrmPlus)
    }
}

/// Discount factor `t^e / (t^e + 1)`, with `+inf -> 1` and `-inf -> 0`.
pub fn discount(t: u64, exponent: f64) -> f64 {
    if exponent == f64::INFINITY {
        1.0
    } else if exponent == f64::NEG_INFINITY {
        0.0
    } else {
        let p = (t as f64).powf(exponent);
        p / (p + 1.0)
    }
}

/// `r = <loss, sigma> 1 - loss`.
pub fn immediate_regret(loss: &[f64], sigma: &[f64]) -> Result<Vec<f64>> {
    if loss.len() != sigma.len() {
        return Err(Error::DimensionMismatch { expected: sigma.len(), found: loss.len() });
    }
    let mut r = vec![0.0; loss.len()];
    immediate_regret_into(loss, sigma, &mut r);
    Ok(r)
}

pub(crate) fn immediate_regret_into(loss: &[f64], sigma: &[f64], out: &mut [f64]) {
    let value: f64 = loss.iter().zip(sigma).map(|(l, s)| l * s).sum();
    for (o, l) in out.iter_mut().zip(loss) {
        *o = value - l;
    }
}

/// Adds the immediate regret `r` to `cumulative` according to `kind`.
/// `t` is the 1-based index of this update (used by DRM discounting).
pub fn accumulate_in_place(kind: MinimizerKind, t: u64, cumulative: &mut [f64], r: &[f64]) {
    match kind {
        MinimizerKind::Rm => {
            for (c, x) in cumulative.iter_mut().zip(r) {
                *c += x;
            }
        }
        MinimizerKind::RmPlus | MinimizerKind::PrmPlus => {
            for (c, x) in cumulative.iter_mut().zip(r) {
                *c = (*c + x).max(0.0);
            }
        }
        MinimizerKind::Drm { alpha, beta } => {
            let pos = discount(t, alpha);
            let neg = discount(t, beta);
            for (c, x) in cumulative.iter_mut().zip(r) {
                let v = *c + x;
                *c = pos * v.max(0.0) + neg * v.min(0.0);
            }
        }
    }
}

/// Regret-matching strategy: normalize the positive part of `cumulative`
/// (plus `prediction` for PRM+), or play uniformly when it is zero.
pub fn strategy_in_place(kind: MinimizerKind, cumulative: &[f64], prediction: &[f64], out: &mut [f64]) {
    let mut total = 0.0;
    for (i, o) in out.iter_mut().enumerate() {
        let mut v = cumulative[i];
        if kind.uses_prediction() {
            v += prediction[i];
        }
        *o = v.max(0.0);
        total += *o;
    }
    if total > 0.0 {
        for o in out.iter_mut() {
            *o /= total;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// Cumulative regret of one infoset.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretState {
    pub cumulative: Vec<f64>,
    /// Most recent immediate regret (the PRM+ prediction).
    pub last_regret: Vec<f64>,
    /// Number of updates applied so far.
    pub t: u64,
}

impl RegretState {
    pub fn new(num_actions: usize) -> Self {
        Self { cumulative: vec![0.0; num_actions], last_regret: vec![0.0; num_actions], t: 0 }
    }

    pub fn accumulate(&mut self, r: &[f64], kind: MinimizerKind) -> Result<()> {
        if r.len() != self.cumulative.len() {
            return Err(Error::DimensionMismatch { expected: self.cumulative.len(), found: r.len() });
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("immediate regret".into()));
        }
        self.t += 1;
        accumulate_in_place(kind, self.t, &mut self.cumulative, r);
        self.last_regret.copy_from_slice(r);
        Ok(())
    }

    pub fn strategy(&self, kind: MinimizerKind) -> Vec<f64> {
        let mut out = vec![0.0; self.cumulative.len()];
        strategy_in_place(kind, &self.cumulative, &self.last_regret, &mut out);
        out
    }
}

/// Closed-form online-mirror-descent step equivalent to the regret-matching
/// family: `theta + eta r`, clipped for RM+, and multiplied componentwise by
/// the sign-selected discount for DRM. PRM+ is treated like RM+.
pub fn omd_oracle_step(state: &RegretState, r: &[f64], kind: MinimizerKind, eta: f64) -> RegretState {
    let t = state.t + 1;
    let moved: Vec<f64> = state.cumulative.iter().zip(r).map(|(th, x)| th + eta * x).collect();
    let cumulative = match kind {
        MinimizerKind::Rm => moved,
        MinimizerKind::RmPlus | MinimizerKind::PrmPlus => moved.iter().map(|v| v.max(0.0)).collect(),
        MinimizerKind::Drm { alpha, beta } => {
            let weights: Vec<f64> = moved
                .iter()
                .map(|&v| if v > 0.0 { discount(t, alpha) } else { discount(t, beta) })
                .collect();
            weights.iter().zip(&moved).map(|(w, v)| w * v).collect()
        }
    };
    RegretState { cumulative, last_regret: r.to_vec(), t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn single_agent_first_regret() {
        let loss = [-1.0, 0.0, 1e6];
        let r = immediate_regret(&loss, &[1.0 / 3.0; 3]).unwrap();
        // <l, sigma> = 999999 / 3 = 333333
        assert!((r[0] - 333_334.0).abs() < 1e-6);
        assert!((r[1] - 333_333.0).abs() < 1e-6);
        assert!((r[2] + 666_667.0).abs() < 1e-6);
        let mut s = RegretState::new(3);
        s.accumulate(&r, MinimizerKind::RmPlus).unwrap();
        assert_eq!(s.cumulative.iter().map(|x| x.round()).collect::<Vec<_>>(), vec![333_334.0, 333_333.0, 0.0]);
    }

    #[test]
    fn constant_loss_has_zero_regret() {
        let r = immediate_regret(&[2.5; 4], &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(immediate_regret(&[1.0], &[0.5, 0.5]).is_err());
        assert!(RegretState::new(2).accumulate(&[1.0], MinimizerKind::Rm).is_err());
    }

    #[test]
    fn non_finite_regret_rejected() {
        let mut s = RegretState::new(2);
        assert!(matches!(s.accumulate(&[f64::NAN, 0.0], MinimizerKind::RmPlus), Err(Error::NonFinite(_))));
    }

    #[test]
    fn rm_plus_clips() {
        let mut s = RegretState { cumulative: vec![1.0, -2.0], last_regret: vec![0.0; 2], t: 0 };
        s.accumulate(&[-2.0, 1.0], MinimizerKind::RmPlus).unwrap();
        assert_eq!(s.cumulative, vec![0.0, 0.0]);
    }

    #[test]
    fn drm_first_step_halves() {
        assert_eq!(discount(1, 1.0), 0.5);
        let mut s = RegretState::new(2);
        s.accumulate(&[2.0, -4.0], MinimizerKind::Drm { alpha: 1.0, beta: 1.0 }).unwrap();
        assert_eq!(s.cumulative, vec![1.0, -2.0]);
        assert_eq!(discount(7, INF), 1.0);
        assert_eq!(discount(7, f64::NEG_INFINITY), 0.0);
        // t^0 / (t^0 + 1) = 1/2 for every t
        assert_eq!(discount(1000, 0.0), 0.5);
    }

    #[test]
    fn strategy_examples() {
        let kind = MinimizerKind::RmPlus;
        let zero = RegretState::new(3);
        assert_eq!(zero.strategy(kind), vec![1.0 / 3.0; 3]);
        let s = RegretState { cumulative: vec![2.0, 1.0, -1.0], last_regret: vec![0.0; 3], t: 1 };
        let p = s.strategy(MinimizerKind::Rm);
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && (p[1] - 1.0 / 3.0).abs() < 1e-15 && p[2] == 0.0);
        let s = RegretState { cumulative: vec![4.71e5, 6.81e-2, 0.0], last_regret: vec![0.0; 3], t: 1 };
        let p = s.strategy(kind);
        assert!((p[0] - 0.999_999_86).abs() < 1e-8, "{}", p[0]);
    }

    #[test]
    fn prm_plus_uses_prediction() {
        let s = RegretState { cumulative: vec![1.0, 0.0], last_regret: vec![-1.0, 1.0], t: 1 };
        assert_eq!(s.strategy(MinimizerKind::PrmPlus), vec![0.0, 1.0]);
        assert_eq!(s.strategy(MinimizerKind::RmPlus), vec![1.0, 0.0]);
    }

    #[test]
    fn rm_oracle_zero_regret_is_identity() {
        let s = RegretState { cumulative: vec![0.3, -0.7], last_regret: vec![0.0; 2], t: 3 };
        let next = omd_oracle_step(&s, &[0.0, 0.0], MinimizerKind::Rm, 1.0);
        assert_eq!(next.cumulative, s.cumulative);
    }

    fn kinds() -> impl Strategy<Value = MinimizerKind> {
        prop_oneof![
            Just(MinimizerKind::Rm),
            Just(MinimizerKind::RmPlus),
            Just(MinimizerKind::PrmPlus),
            (0.0f64..3.0, -1.0f64..1.0).prop_map(|(a, b)| MinimizerKind::Drm { alpha: a.max(b), beta: b }),
            Just(MinimizerKind::Drm { alpha: INF, beta: f64::NEG_INFINITY }),
        ]
    }

    proptest! {
        #[test]
        fn regret_orthogonal_to_strategy(
            loss in prop::collection::vec(-10.0f64..10.0, 1..8),
            raw in prop::collection::vec(0.01f64..1.0, 8),
        ) {
            let raw = &raw[..loss.len()];
            let total: f64 = raw.iter().sum();
            let sigma: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let r = immediate_regret(&loss, &sigma).unwrap();
            let dot: f64 = r.iter().zip(&sigma).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-12);
        }

        #[test]
        fn strategy_is_simplex(
            kind in kinds(),
            cum in prop::collection::vec(-5.0f64..5.0, 1..8),
        ) {
            let s = RegretState { last_regret: vec![0.5; cum.len()], cumulative: cum, t: 4 };
            let p = s.strategy(kind);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn plus_variants_stay_nonnegative(
            kind in prop_oneof![Just(MinimizerKind::RmPlus), Just(MinimizerKind::PrmPlus)],
            steps in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..20),
        ) {
            let mut s = RegretState::new(3);
            for r in &steps {
                s.accumulate(r, kind).unwrap();
                prop_assert!(s.cumulative.iter().all(|&x| x >= 0.0));
            }
        }

        #[test]
        fn accumulate_matches_oracle(
            kind in kinds(),
            steps in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 4), 1..30),
        ) {
            let mut fast = RegretState::new(4);
            let mut slow = RegretState::new(4);
            for r in &steps {
                fast.accumulate(r, kind).unwrap();
                slow = omd_oracle_step(&slow, r, kind, 1.0);
                for (a, b) in fast.cumulative.iter().zip(&slow.cumulative) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn drm_infinite_exponents_is_rm_plus(
            steps in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..50),
        ) {
            let mut a = RegretState::new(3);
            let mut b = RegretState::new(3);
            for r in &steps {
                a.accumulate(r, MinimizerKind::RmPlus).unwrap();
                b.accumulate(r, MinimizerKind::Drm { alpha: INF, beta: f64::NEG_INFINITY }).unwrap();
                prop_assert_eq!(&a.cumulative, &b.cumulative);
            }
        }
    }
}
