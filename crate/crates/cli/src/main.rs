use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rtregret::harness::plot::{write_svg, Series};
use rtregret::harness::{best_per_game, output_path, read_csv, run, sweep, ExperimentConfig, Grid, OUT_DIR_ENV};
use rtregret::{game_stats, GameSpec};

#[derive(Parser)]
#[command(name = "rtregret", version, about = "Regret-minimization solvers and benchmark harness")]
struct Cli {
    /// Root directory for relative output paths.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_root: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one game and write its exploitability trace.
    Solve(Box<SolveArgs>),
    /// Run every point of a parameter grid.
    Sweep {
        /// Grid file: run config keys with comma-separated value lists.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print information set, sequence and leaf counts of a game.
    Stats {
        #[arg(long)]
        game: GameSpec,
    },
    /// Draw trace CSVs as one log-scale SVG.
    Plot {
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Base config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long = "T")]
    interval: Option<String>,
    #[arg(long = "m")]
    cadence: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    mu_b: Option<String>,
    #[arg(long)]
    iters: Option<String>,
    #[arg(long)]
    stride: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    eval: Option<String>,
    /// Any other config key, as `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    extra: Vec<String>,
    /// Trace CSV; the resolved config is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SolveArgs {
    fn to_config(&self, root: Option<&Path>) -> Result<ExperimentConfig> {
        let mut text = match &self.config {
            Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
            None => String::new(),
        };
        let flags = [
            ("game", &self.game),
            ("algo", &self.algo),
            ("mu", &self.mu),
            ("T", &self.interval),
            ("m", &self.cadence),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("eta", &self.eta),
            ("mu_b", &self.mu_b),
            ("iters", &self.iters),
            ("stride", &self.stride),
            ("seed", &self.seed),
            ("eval", &self.eval),
        ];
        text.push('\n');
        for (key, value) in flags {
            if let Some(v) = value {
                text.push_str(&format!("{key}={v}\n"));
            }
        }
        for pair in &self.extra {
            if !pair.contains('=') {
                bail!("--set expects KEY=VALUE, got `{pair}`");
            }
            text.push_str(pair);
            text.push('\n');
        }
        let mut config = ExperimentConfig::parse(&text)?;
        if let Some(out) = &self.out {
            config.out = Some(output_path(root, out));
        } else if let Some(out) = config.out.take() {
            config.out = Some(output_path(root, &out));
        }
        Ok(config)
    }
}

fn solve(args: &SolveArgs, root: Option<&Path>) -> Result<()> {
    let config = args.to_config(root)?;
    let record = run(&config)?;
    let last = record.rows.last().context("empty trace")?;
    println!(
        "{} {}: exploitability {:e} after {} iterations ({} phase events, {} ms)",
        config.game,
        config.algo,
        last.exploitability,
        last.iter,
        record.events.len(),
        last.wall_ms
    );
    if let Some(out) = &config.out {
        println!("trace written to {}", out.display());
    }
    Ok(())
}

fn run_sweep(grid_path: &Path, out_dir: &Path) -> Result<()> {
    let text = std::fs::read_to_string(grid_path).with_context(|| format!("reading {}", grid_path.display()))?;
    let grid = Grid::parse(&text)?;
    let outcomes = sweep(&grid, Some(out_dir))?;
    let failed = outcomes.iter().filter(|o| o.result.is_err()).count();
    println!("{} runs, {} failed; summary in {}", outcomes.len(), failed, out_dir.join("summary.csv").display());
    for (game, i) in best_per_game(&outcomes) {
        if let Ok(record) = &outcomes[i].result {
            let params = record.config.to_text().lines().filter(|l| !l.starts_with("out=")).collect::<Vec<_>>().join(" ");
            println!("best for {game}: {:e} with {params}", record.final_exploitability());
        }
    }
    Ok(())
}

fn plot(inputs: &[PathBuf], out: &Path) -> Result<()> {
    let traces = inputs
        .iter()
        .map(|p| read_csv(p).with_context(|| format!("reading {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let series: Vec<Series<'_>> = inputs
        .iter()
        .zip(&traces)
        .map(|(p, rows)| Series {
            label: p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            rows,
        })
        .collect();
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_svg(out, &series)?;
    println!("plot written to {}", out.display());
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let root = cli.out_root.as_deref();
    match &cli.command {
        Command::Solve(args) => solve(args, root),
        Command::Sweep { config, out_dir } => run_sweep(config, &output_path(root, out_dir)),
        Command::Stats { game } => {
            let stats = game_stats(&game.build(0)?);
            println!("{game}: {stats}");
            Ok(())
        }
        Command::Plot { inputs, out } => plot(inputs, &output_path(root, out)),
    }
}
