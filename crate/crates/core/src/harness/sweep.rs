//! Cartesian hyperparameter sweeps.
//!
//! A grid file uses the run config keys, with comma-separated lists for the
//! values to sweep:
//!
//! ```text
//! game=matrix:10x10:1
//! algo=adp-rt-drm
//! T=10,20,40
//! mu=0.5,0.1,0.05
//! iters=2000
//! ```

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::{parse_pairs, ExperimentConfig};
use super::run::{run, RunRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<(String, Vec<String>)>,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self> {
        let mut axes: Vec<(String, Vec<String>)> = Vec::new();
        for (k, v) in parse_pairs(text)? {
            let values: Vec<String> = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            if values.is_empty() {
                return Err(Error::Config(format!("grid key `{k}` has no values")));
            }
            match axes.iter_mut().find(|(key, _)| *key == k) {
                Some(axis) => axis.1.extend(values),
                None => axes.push((k, values)),
            }
        }
        if axes.is_empty() {
            return Err(Error::Config("empty grid".into()));
        }
        Ok(Self { axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every point of the grid as a config, last axis varying fastest.
    pub fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let mut out = Vec::with_capacity(self.len());
        for index in 0..self.len() {
            let mut rem = index;
            let mut choice = vec![0; self.axes.len()];
            for (slot, (_, values)) in choice.iter_mut().zip(&self.axes).rev() {
                *slot = rem % values.len();
                rem /= values.len();
            }
            let text: String = self.axes.iter().zip(&choice).map(|((k, v), &c)| format!("{k}={}\n", v[c])).collect();
            out.push(ExperimentConfig::parse(&text)?);
        }
        Ok(out)
    }
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub config: ExperimentConfig,
    /// Per-run failures are kept as messages so the sweep can go on.
    pub result: std::result::Result<RunRecord, String>,
}

fn run_name(index: usize, c: &ExperimentConfig) -> String {
    let raw = format!("{index:03}_{}_{}", c.game, c.algo);
    raw.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' { ch } else { '_' }).collect()
}

/// Runs every grid point in parallel. With `out_dir`, each run writes
/// `<out_dir>/<name>.csv` (and its config snapshot) and a `summary.csv` is
/// written at the end.
pub fn sweep(grid: &Grid, out_dir: Option<&Path>) -> Result<Vec<SweepOutcome>> {
    let mut configs = grid.configs()?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for (i, c) in configs.iter_mut().enumerate() {
            c.out = Some(dir.join(format!("{}.csv", run_name(i, c))));
        }
    }
    let outcomes: Vec<SweepOutcome> = configs
        .into_par_iter()
        .map(|config| {
            let result = run(&config).map_err(|e| e.to_string());
            SweepOutcome { config, result }
        })
        .collect();
    if let Some(dir) = out_dir {
        std::fs::write(dir.join("summary.csv"), summary_csv(&outcomes))?;
    }
    Ok(outcomes)
}

/// Index of the successful run with the lowest final exploitability for
/// each game, in order of first appearance.
pub fn best_per_game(outcomes: &[SweepOutcome]) -> Vec<(String, usize)> {
    let mut best: Vec<(String, usize)> = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let Ok(record) = &o.result else { continue };
        let eps = record.final_exploitability();
        let game = o.config.game.to_string();
        match best.iter_mut().find(|(g, _)| *g == game) {
            Some(entry) => {
                let current = outcomes[entry.1].result.as_ref().map(|r| r.final_exploitability()).unwrap_or(f64::NAN);
                if eps < current {
                    entry.1 = i;
                }
            }
            None => best.push((game, i)),
        }
    }
    best
}

/// One line per run: game, algo, resolved parameters, final exploitability
/// or the error message.
pub fn summary_csv(outcomes: &[SweepOutcome]) -> String {
    let mut s = String::from("run,game,algo,params,final_exploitability,status\n");
    for (i, o) in outcomes.iter().enumerate() {
        let (config, eps, status) = match &o.result {
            Ok(r) => (&r.config, format!("{:e}", r.final_exploitability()), "ok".to_string()),
            Err(e) => (&o.config, String::new(), format!("error: {}", e.replace([',', '\n'], ";"))),
        };
        let params: Vec<String> = config
            .to_text()
            .lines()
            .filter(|l| !l.starts_with("game=") && !l.starts_with("algo=") && !l.starts_with("out="))
            .map(str::to_string)
            .collect();
        let _ = writeln!(s, "{i},{},{},{},{eps},{status}", config.game, config.algo, params.join(" "));
    }
    s
}
