//! Experiment configuration: algorithm ids, flat `key=value` files and the
//! hyperparameter defaults shipped for the benchmark games.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::baselines::{BaselineKind, DilationScheme};
use crate::controller::CounterUnit;
use crate::engine::AveragingScheme;
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::minimizers::MinimizerKind;

/// Regret-matching variant behind an algorithm id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Rm,
    RmPlus,
    Drm,
    PrmPlus,
}

/// How the RT reference is managed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RtMode {
    Off,
    /// Reference replaced every `T` counter units, `w = 1`.
    Fixed,
    /// Exploit/keep/explore controller.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    Regret { family: Family, rt: RtMode },
    Baseline(BaselineKind),
}

/// A parsed algorithm id; displays as the id it was parsed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Algorithm {
    id: &'static str,
    pub kind: AlgorithmKind,
}

const ALGORITHMS: &[(&str, AlgorithmKind)] = {
    use AlgorithmKind::{Baseline, Regret};
    use Family::*;
    use RtMode::*;
    &[
        ("rm", Regret { family: Rm, rt: Off }),
        ("cfr", Regret { family: Rm, rt: Off }),
        ("rm+", Regret { family: RmPlus, rt: Off }),
        ("cfr+", Regret { family: RmPlus, rt: Off }),
        ("drm", Regret { family: Drm, rt: Off }),
        ("dcfr", Regret { family: Drm, rt: Off }),
        ("prm+", Regret { family: PrmPlus, rt: Off }),
        ("pcfr+", Regret { family: PrmPlus, rt: Off }),
        ("rt-rm+", Regret { family: RmPlus, rt: Fixed }),
        ("rt-cfr+", Regret { family: RmPlus, rt: Fixed }),
        ("rt-drm", Regret { family: Drm, rt: Fixed }),
        ("rt-dcfr", Regret { family: Drm, rt: Fixed }),
        ("adp-rt-rm+", Regret { family: RmPlus, rt: Adaptive }),
        ("adp-rt-cfr+", Regret { family: RmPlus, rt: Adaptive }),
        ("adp-rt-drm", Regret { family: Drm, rt: Adaptive }),
        ("adp-rt-dcfr", Regret { family: Drm, rt: Adaptive }),
        ("mwu", Baseline(BaselineKind::Mwu)),
        ("omwu", Baseline(BaselineKind::Omwu)),
        ("domwu", Baseline(BaselineKind::Omwu)),
        ("reg-omwu", Baseline(BaselineKind::RegOmwu)),
        ("reg-domwu", Baseline(BaselineKind::RegOmwu)),
        ("rnad", Baseline(BaselineKind::Rnad)),
    ]
};

impl Algorithm {
    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn all_ids() -> impl Iterator<Item = &'static str> {
        ALGORITHMS.iter().map(|(id, _)| *id)
    }

    pub fn rt_mode(&self) -> RtMode {
        match self.kind {
            AlgorithmKind::Regret { rt, .. } => rt,
            AlgorithmKind::Baseline(_) => RtMode::Off,
        }
    }

    /// Whether the default evaluation is the averaged strategy.
    pub fn averages_by_default(&self) -> bool {
        matches!(self.kind, AlgorithmKind::Regret { rt: RtMode::Off, .. })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ALGORITHMS
            .iter()
            .find(|(id, _)| *id == s)
            .map(|&(id, kind)| Algorithm { id, kind })
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id)
    }
}

/// Which strategy exploitability is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    Last,
    Avg,
}

impl FromStr for Eval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(Eval::Last),
            "avg" => Ok(Eval::Avg),
            _ => Err(Error::Config(format!("eval must be `last` or `avg`, got `{s}`"))),
        }
    }
}

impl fmt::Display for Eval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eval::Last => "last",
            Eval::Avg => "avg",
        })
    }
}

fn parse_averaging(s: &str) -> Result<AveragingScheme> {
    match s {
        "uniform" => Ok(AveragingScheme::Uniform),
        "linear" => Ok(AveragingScheme::Linear),
        "quadratic" => Ok(AveragingScheme::Quadratic),
        _ => Err(Error::Config(format!("unknown averaging scheme `{s}`"))),
    }
}

fn averaging_name(a: AveragingScheme) -> &'static str {
    match a {
        AveragingScheme::Uniform => "uniform",
        AveragingScheme::Linear => "linear",
        AveragingScheme::Quadratic => "quadratic",
    }
}

fn parse_counter(s: &str) -> Result<CounterUnit> {
    match s {
        "player-update" => Ok(CounterUnit::PlayerUpdate),
        "iteration" => Ok(CounterUnit::Iteration),
        _ => Err(Error::Config(format!("counter must be `player-update` or `iteration`, got `{s}`"))),
    }
}

fn counter_name(c: CounterUnit) -> &'static str {
    match c {
        CounterUnit::PlayerUpdate => "player-update",
        CounterUnit::Iteration => "iteration",
    }
}

/// One run's configuration. Unset hyperparameters fall back to
/// [`table_defaults`] in [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub game: GameSpec,
    pub algo: Algorithm,
    pub mu: Option<f64>,
    pub interval: Option<u64>,
    pub cadence: u64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub mu_b: Option<f64>,
    pub iters: u64,
    pub stride: u64,
    pub seed: u64,
    pub eval: Option<Eval>,
    pub averaging: AveragingScheme,
    pub counter: CounterUnit,
    pub dilation: DilationScheme,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_ITERS: u64 = 1000;
pub const DEFAULT_STRIDE: u64 = 10;
pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_BETA: f64 = 0.0;

impl ExperimentConfig {
    pub fn new(game: GameSpec, algo: Algorithm) -> Self {
        Self {
            game,
            algo,
            mu: None,
            interval: None,
            cadence: 1,
            alpha: None,
            beta: None,
            eta: None,
            mu_b: None,
            iters: DEFAULT_ITERS,
            stride: DEFAULT_STRIDE,
            seed: 0,
            eval: None,
            averaging: AveragingScheme::Quadratic,
            counter: CounterUnit::PlayerUpdate,
            dilation: DilationScheme::AllOnes,
            out: None,
        }
    }

    /// Sets one `key=value` field.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
        }
        match key.trim() {
            "game" => self.game = value.parse()?,
            "algo" => self.algo = value.parse()?,
            "mu" => self.mu = Some(num(key, value)?),
            "T" => self.interval = Some(num(key, value)?),
            "m" => self.cadence = num(key, value)?,
            "alpha" => self.alpha = Some(num(key, value)?),
            "beta" => self.beta = Some(num(key, value)?),
            "eta" => self.eta = Some(num(key, value)?),
            "mu_b" => self.mu_b = Some(num(key, value)?),
            "iters" => self.iters = num(key, value)?,
            "stride" => self.stride = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "eval" => self.eval = Some(value.parse()?),
            "averaging" => self.averaging = parse_averaging(value)?,
            "counter" => self.counter = parse_counter(value)?,
            "dilation" => self.dilation = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat `key=value` document. Blank lines and `#` comments are
    /// ignored; `game` and `algo` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let get = |k: &str| pairs.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        let game = get("game").ok_or_else(|| Error::Config("missing `game`".into()))?.parse()?;
        let algo = get("algo").ok_or_else(|| Error::Config("missing `algo`".into()))?.parse()?;
        let mut config = Self::new(game, algo);
        for (k, v) in &pairs {
            config.set(k, v)?;
        }
        Ok(config)
    }

    /// Serializes every set field, one `key=value` per line, in a fixed order.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("game={}", self.game), format!("algo={}", self.algo)];
        let mut opt = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                lines.push(format!("{k}={v}"));
            }
        };
        opt("mu", self.mu.map(|v| v.to_string()));
        opt("T", self.interval.map(|v| v.to_string()));
        opt("m", Some(self.cadence.to_string()));
        opt("alpha", self.alpha.map(|v| v.to_string()));
        opt("beta", self.beta.map(|v| v.to_string()));
        opt("eta", self.eta.map(|v| v.to_string()));
        opt("mu_b", self.mu_b.map(|v| v.to_string()));
        opt("iters", Some(self.iters.to_string()));
        opt("stride", Some(self.stride.to_string()));
        opt("seed", Some(self.seed.to_string()));
        opt("eval", self.eval.map(|v| v.to_string()));
        opt("averaging", Some(averaging_name(self.averaging).to_string()));
        opt("counter", Some(counter_name(self.counter).to_string()));
        opt("dilation", Some(self.dilation.to_string()));
        opt("out", self.out.as_ref().map(|p| p.display().to_string()));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }

    /// Fills unset hyperparameters from the defaults table and checks that
    /// the chosen algorithm has everything it needs.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.cadence == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        let defaults = table_defaults(&self.algo, &self.game, self.seed);
        let need_f = |name: &str, v: Option<f64>, d: Option<f64>| -> Result<f64> {
            v.or(d).ok_or_else(|| {
                Error::Config(format!("`{}` needs `{name}` on {} (no default)", self.algo, self.game))
            })
        };
        let solver = match self.algo.kind {
            AlgorithmKind::Regret { family, rt } => {
                let kind = match family {
                    Family::Rm => MinimizerKind::Rm,
                    Family::RmPlus => MinimizerKind::RmPlus,
                    Family::PrmPlus => MinimizerKind::PrmPlus,
                    Family::Drm => MinimizerKind::Drm {
                        alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
                        beta: self.beta.unwrap_or(DEFAULT_BETA),
                    },
                };
                let rt = match rt {
                    RtMode::Off => None,
                    _ => {
                        let mu = need_f("mu", self.mu, defaults.mu)?;
                        let interval = self.interval.or(defaults.interval).ok_or_else(|| {
                            Error::Config(format!("`{}` needs `T` on {} (no default)", self.algo, self.game))
                        })?;
                        if !(mu.is_finite() && mu >= 0.0) {
                            return Err(Error::Config(format!("mu must be nonnegative, got {mu}")));
                        }
                        if interval == 0 {
                            return Err(Error::Config("T must be at least 1".into()));
                        }
                        Some(RtParams { mode: rt, mu, interval })
                    }
                };
                SolverParams::Regret { kind, rt }
            }
            AlgorithmKind::Baseline(kind) => {
                let eta = need_f("eta", self.eta, defaults.eta)?;
                let (mu_b, interval) = match kind {
                    BaselineKind::Mwu | BaselineKind::Omwu => (0.0, 1),
                    BaselineKind::RegOmwu => (need_f("mu_b", self.mu_b, defaults.mu_b)?, 1),
                    BaselineKind::Rnad => {
                        let interval = self.interval.or(defaults.interval).ok_or_else(|| {
                            Error::Config(format!("`{}` needs `T` on {} (no default)", self.algo, self.game))
                        })?;
                        (need_f("mu_b", self.mu_b, defaults.mu_b)?, interval)
                    }
                };
                let params = crate::baselines::BaselineParams { kind, eta, mu_b, interval, dilation: self.dilation };
                params.validate()?;
                SolverParams::Baseline(params)
            }
        };
        let eval = self.eval.unwrap_or(if self.algo.averages_by_default() { Eval::Avg } else { Eval::Last });
        if eval == Eval::Avg && matches!(solver, SolverParams::Baseline(_)) {
            return Err(Error::Config("baselines only support eval=last".into()));
        }
        Ok(ResolvedConfig { config: self.clone(), solver, eval })
    }
}

/// Parses `key=value` lines, keeping order.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got `{line}`", no + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtParams {
    pub mode: RtMode,
    pub mu: f64,
    pub interval: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverParams {
    Regret { kind: MinimizerKind, rt: Option<RtParams> },
    Baseline(crate::baselines::BaselineParams),
}

/// A config with every hyperparameter settled.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub solver: SolverParams,
    pub eval: Eval,
}

impl ResolvedConfig {
    /// The config with resolved values written back, as stored next to a trace.
    pub fn snapshot(&self) -> ExperimentConfig {
        let mut c = self.config.clone();
        c.eval = Some(self.eval);
        match self.solver {
            SolverParams::Regret { kind, rt } => {
                if let MinimizerKind::Drm { alpha, beta } = kind {
                    c.alpha = Some(alpha);
                    c.beta = Some(beta);
                }
                if let Some(rt) = rt {
                    c.mu = Some(rt.mu);
                    c.interval = Some(rt.interval);
                }
            }
            SolverParams::Baseline(p) => {
                c.eta = Some(p.eta);
                if p.kind != BaselineKind::Mwu && p.kind != BaselineKind::Omwu {
                    c.mu_b = Some(p.mu_b);
                }
                if p.kind == BaselineKind::Rnad {
                    c.interval = Some(p.interval);
                }
            }
        }
        c
    }
}

/// Hyperparameters from the published tuning tables, where available.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Defaults {
    pub mu: Option<f64>,
    pub interval: Option<u64>,
    pub eta: Option<f64>,
    pub mu_b: Option<f64>,
}

/// Column of the tuning tables a game falls into.
fn table_column(game: &GameSpec, seed: u64) -> Option<usize> {
    match *game {
        GameSpec::Matrix { rows: 10, cols: 10, seed: s } => {
            let s = s.unwrap_or(seed);
            (s < 4).then_some(s as usize)
        }
        GameSpec::Kuhn(3) => Some(4),
        GameSpec::Leduc(3) => Some(5),
        GameSpec::Goofspiel(4) => Some(6),
        GameSpec::LiarsDice(6) => Some(7),
        _ => None,
    }
}

// (T, mu) per column: matrix seeds 0..4, then kuhn:3, leduc:3, goofspiel:4, liarsdice:6.
const RT_PLUS: [(u64, f64); 8] =
    [(10, 0.5), (30, 0.1), (20, 0.1), (20, 0.1), (5, 0.1), (125, 0.001), (30, 0.005), (1, 0.1)];
const RT_DRM: [(u64, f64); 8] =
    [(5, 0.5), (20, 0.1), (20, 0.1), (20, 0.1), (5, 0.05), (125, 0.001), (20, 0.005), (1, 0.1)];
const ADP_RT_PLUS: [(u64, f64); 8] =
    [(20, 0.1), (40, 0.05), (20, 0.05), (30, 0.05), (5, 0.05), (200, 0.01), (15, 0.1), (1, 0.01)];
const ADP_RT_DRM: [(u64, f64); 8] =
    [(20, 0.1), (20, 0.05), (20, 0.05), (20, 0.05), (5, 0.05), (150, 0.01), (10, 0.1), (1, 0.01)];
const OMWU_ETA: [f64; 8] = [0.379, 0.379, 0.263, 0.379, 0.127, 0.127, 0.014, 0.127];
// (eta, mu_b)
const REG_OMWU: [(f64, f64); 8] = [
    (0.379, 0.1),
    (0.379, 0.1),
    (0.263, 0.1),
    (0.379, 0.05),
    (0.127, 1e-7),
    (0.112, 0.001),
    (0.127, 1e-4),
    (0.078, 0.01),
];
// (eta, T, mu_b)
const RNAD: [(f64, u64, f64); 8] = [
    (1.128, 30, 0.1),
    (1.128, 30, 0.1),
    (0.784, 30, 0.05),
    (0.784, 20, 0.1),
    (0.236, 10, 0.05),
    (0.263, 20, 0.1),
    (0.029, 10, 0.01),
    (0.263, 10, 0.05),
];

/// Tuned defaults for `algo` on `game`; empty when the game is not one of
/// the benchmark instances. `seed` selects the matrix column for matrix ids
/// without an explicit seed.
pub fn table_defaults(algo: &Algorithm, game: &GameSpec, seed: u64) -> Defaults {
    let Some(col) = table_column(game, seed) else {
        return Defaults::default();
    };
    let rt = |(t, mu): (u64, f64)| Defaults { mu: Some(mu), interval: Some(t), ..Defaults::default() };
    match algo.kind {
        AlgorithmKind::Regret { family, rt: mode } => match (family, mode) {
            (Family::RmPlus, RtMode::Fixed) => rt(RT_PLUS[col]),
            (Family::Drm, RtMode::Fixed) => rt(RT_DRM[col]),
            (Family::RmPlus, RtMode::Adaptive) => rt(ADP_RT_PLUS[col]),
            (Family::Drm, RtMode::Adaptive) => rt(ADP_RT_DRM[col]),
            _ => Defaults::default(),
        },
        AlgorithmKind::Baseline(kind) => match kind {
            BaselineKind::Mwu | BaselineKind::Omwu => Defaults { eta: Some(OMWU_ETA[col]), ..Defaults::default() },
            BaselineKind::RegOmwu => {
                let (eta, mu_b) = REG_OMWU[col];
                Defaults { eta: Some(eta), mu_b: Some(mu_b), ..Defaults::default() }
            }
            BaselineKind::Rnad => {
                let (eta, t, mu_b) = RNAD[col];
                Defaults { eta: Some(eta), interval: Some(t), mu_b: Some(mu_b), ..Defaults::default() }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algo(s: &str) -> Algorithm {
        s.parse().unwrap()
    }

    #[test]
    fn algorithm_ids_round_trip() {
        for id in Algorithm::all_ids() {
            assert_eq!(algo(id).to_string(), id);
        }
        assert!(matches!("cfr++".parse::<Algorithm>(), Err(Error::UnknownAlgorithm(_))));
    }

    #[test]
    fn defaults_follow_tables() {
        let kuhn = GameSpec::Kuhn(3);
        let d = table_defaults(&algo("adp-rt-cfr+"), &kuhn, 0);
        assert_eq!((d.interval, d.mu), (Some(5), Some(0.05)));
        let d = table_defaults(&algo("adp-rt-dcfr"), &GameSpec::Leduc(3), 0);
        assert_eq!((d.interval, d.mu), (Some(150), Some(0.01)));
        let m = GameSpec::Matrix { rows: 10, cols: 10, seed: None };
        let d = table_defaults(&algo("adp-rt-drm"), &m, 1);
        assert_eq!((d.interval, d.mu), (Some(20), Some(0.05)));
        let d = table_defaults(&algo("rnad"), &GameSpec::Goofspiel(4), 0);
        assert_eq!((d.eta, d.interval, d.mu_b), (Some(0.029), Some(10), Some(0.01)));
        assert_eq!(table_defaults(&algo("rt-cfr+"), &GameSpec::Kuhn(4), 0), Defaults::default());
    }

    #[test]
    fn resolve_requires_parameters_without_defaults() {
        let c = ExperimentConfig::new(GameSpec::Kuhn(4), algo("rt-cfr+"));
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
        let mut c = c;
        c.mu = Some(0.1);
        c.interval = Some(3);
        assert!(c.resolve().is_ok());
    }

    #[test]
    fn eval_defaults() {
        let g = GameSpec::Kuhn(3);
        assert_eq!(ExperimentConfig::new(g.clone(), algo("cfr+")).resolve().unwrap().eval, Eval::Avg);
        assert_eq!(ExperimentConfig::new(g.clone(), algo("rt-cfr+")).resolve().unwrap().eval, Eval::Last);
        assert_eq!(ExperimentConfig::new(g.clone(), algo("domwu")).resolve().unwrap().eval, Eval::Last);
        let mut c = ExperimentConfig::new(g, algo("pcfr+"));
        c.eval = Some(Eval::Last);
        assert_eq!(c.resolve().unwrap().eval, Eval::Last);
    }

    #[test]
    fn zero_stride_is_rejected() {
        let mut c = ExperimentConfig::new(GameSpec::Kuhn(3), algo("cfr+"));
        c.stride = 0;
        assert!(c.resolve().is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "# comment\ngame=leduc:3\nalgo=rt-dcfr\nmu=0.001\nT=125\nalpha=1.5\niters=50\neval=last\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.alpha, Some(1.5));
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
        assert!(ExperimentConfig::parse("algo=cfr+\n").is_err());
        assert!(ExperimentConfig::parse("game=kuhn:3\nalgo=cfr+\nbogus=1\n").is_err());
        assert!(ExperimentConfig::parse("game=kuhn:3\nalgo=cfr+\niters\n").is_err());
    }
}
