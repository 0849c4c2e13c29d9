//! Subcommand argument types and handlers.
//!
//! Handlers return [`CliError`], whose variants map onto the process exit
//! codes: 1 for I/O failures, 2 for unusable arguments or inputs, 3 for
//! data that parses but cannot be combined (length or plan mismatches).

use clap::{Args, ValueEnum};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

use mzsim_core::cipher::{partition_by_coins, CoinHistory};
use mzsim_core::mixtures::{fringe_contrast, lambda_pm, rho_bar_coin, rho_bar_gaussian, NoiseModel};
use mzsim_core::trials::{aggregate, run_experiment, ExperimentPlan, Mode};

use crate::csvio;
use crate::manifest::RunManifest;
use crate::svg::render_counts_svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    DataMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::DataMismatch(_) => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Randomized,
    Noisy,
    RandomizedNoisy,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Randomized => Mode::Randomized,
            ModeArg::Noisy => Mode::Noisy,
            ModeArg::RandomizedNoisy => Mode::RandomizedNoisy,
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// What varies per trial: nothing, the coin, the phase, or both.
    #[arg(long, value_enum, default_value_t = ModeArg::Ideal)]
    pub mode: ModeArg,

    /// Nominal phase of the first setting, in radians.
    #[arg(long, default_value_t = 0.0)]
    pub phi_start: f64,

    /// Phase increment between settings, in radians.
    #[arg(long, default_value_t = std::f64::consts::TAU / 32.0)]
    pub phi_step: f64,

    /// Number of phase settings.
    #[arg(long, default_value_t = 33)]
    pub settings: usize,

    /// Trials per setting.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    /// Phase-noise standard deviation (noisy modes only).
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,

    /// Seed for all random draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Directory for records.csv, counts.csv, manifest.txt (and coins.txt
    /// in coin-randomized modes).
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,

    /// Re-run the plan stored in an existing manifest, ignoring the plan
    /// flags above; output still goes to --out-dir.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let plan = match &args.from_manifest {
        Some(path) => {
            let text = read_file(path)?;
            let manifest = RunManifest::from_text(&text)
                .map_err(|e| CliError::Usage(format!("manifest {}: {e}", path.display())))?;
            manifest.plan
        }
        None => ExperimentPlan {
            mode: args.mode.into(),
            phi_start: args.phi_start,
            phi_step: args.phi_step,
            n_settings: args.settings,
            trials_per_setting: args.trials,
            sigma: args.sigma,
            seed: args.seed,
        },
    };
    plan.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let (records, counts) = run_experiment(&plan);

    fs::create_dir_all(&args.out_dir).map_err(|source| CliError::Io {
        context: format!("creating {}", args.out_dir.display()),
        source,
    })?;
    write_file(&args.out_dir.join("records.csv"), &csvio::records_to_csv(&records))?;
    write_file(&args.out_dir.join("counts.csv"), &csvio::counts_to_csv(&counts))?;

    let coins_name = if plan.mode.randomizes_coin() {
        let coins = CoinHistory::from_records(&records)
            .expect("coin-randomized records all carry coins");
        write_file(&args.out_dir.join("coins.txt"), &format!("{coins}\n"))?;
        Some("coins.txt".to_string())
    } else {
        None
    };

    let manifest = RunManifest {
        plan,
        tool: "mzsim".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        records: "records.csv".to_string(),
        counts: "counts.csv".to_string(),
        coins: coins_name,
    };
    write_file(&args.out_dir.join("manifest.txt"), &manifest.to_text())?;

    println!(
        "wrote {} records ({} settings x {} trials, mode {}) to {}",
        records.len(),
        plan.n_settings,
        plan.trials_per_setting,
        plan.mode,
        args.out_dir.display()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct DecryptArgs {
    /// records.csv from a coin-randomized run.
    #[arg(long)]
    pub records: PathBuf,

    /// Coin history used as the key: a single line of H/T characters.
    #[arg(long)]
    pub coins: PathBuf,

    /// Directory for heads_counts.csv and tails_counts.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

pub fn cmd_decrypt(args: &DecryptArgs) -> Result<(), CliError> {
    let records = csvio::records_from_csv(&read_file(&args.records)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.records.display())))?;
    if records.iter().all(|r| r.coin.is_none()) {
        return Err(CliError::Usage(format!(
            "{}: records carry no coin values; nothing to decrypt",
            args.records.display()
        )));
    }

    let coins: CoinHistory = read_file(&args.coins)?
        .parse()
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.coins.display())))?;

    let (heads, tails) = partition_by_coins(&records, &coins).map_err(|e| {
        CliError::DataMismatch(format!(
            "coin history does not fit the records ({e}); decryption impossible"
        ))
    })?;
    let heads_counts = aggregate(&heads)
        .map_err(|e| CliError::DataMismatch(e.to_string()))?;
    let tails_counts = aggregate(&tails)
        .map_err(|e| CliError::DataMismatch(e.to_string()))?;

    fs::create_dir_all(&args.out_dir).map_err(|source| CliError::Io {
        context: format!("creating {}", args.out_dir.display()),
        source,
    })?;
    write_file(&args.out_dir.join("heads_counts.csv"), &csvio::counts_to_csv(&heads_counts))?;
    write_file(&args.out_dir.join("tails_counts.csv"), &csvio::counts_to_csv(&tails_counts))?;

    println!(
        "decrypted {} records into {} heads / {} tails trials; counts written to {}",
        records.len(),
        heads.len(),
        tails.len(),
        args.out_dir.display()
    );
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Fair-coin mixture of the two device orientations.
    Coin,
    /// Gaussian phase noise on the heads device.
    Gaussian,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// Mixture family to tabulate.
    #[arg(long, value_enum, default_value_t = ModelArg::Coin)]
    pub model: ModelArg,

    /// Single phase for the coin model; suppresses the sweep.
    #[arg(long)]
    pub phi: Option<f64>,

    #[arg(long, default_value_t = 0.0)]
    pub phi_start: f64,

    #[arg(long, default_value_t = std::f64::consts::TAU / 32.0)]
    pub phi_step: f64,

    /// Mean phase for the gaussian model.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,

    /// Single noise width for the gaussian model; suppresses the sweep.
    #[arg(long)]
    pub sigma: Option<f64>,

    #[arg(long, default_value_t = 0.0)]
    pub sigma_start: f64,

    #[arg(long, default_value_t = 0.125)]
    pub sigma_step: f64,

    /// Number of sweep points.
    #[arg(long, default_value_t = 33)]
    pub steps: usize,

    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_entropy(args: &EntropyArgs) -> Result<(), CliError> {
    if args.steps == 0 {
        return Err(CliError::Usage("steps must be at least 1".into()));
    }
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::Usage(format!("{name} must be finite, got {v}")))
        }
    };

    let mut out = String::new();
    match args.model {
        ModelArg::Coin => {
            let phis: Vec<f64> = match args.phi {
                Some(phi) => vec![finite("phi", phi)?],
                None => {
                    finite("phi-start", args.phi_start)?;
                    finite("phi-step", args.phi_step)?;
                    (0..args.steps)
                        .map(|i| args.phi_start + args.phi_step * i as f64)
                        .collect()
                }
            };
            out.push_str("phi,lambda_plus,lambda_minus,entropy_bits\n");
            for phi in phis {
                let (lp, lm) = lambda_pm(phi);
                let s = rho_bar_coin(phi).von_neumann_entropy();
                out.push_str(&format!("{phi},{lp},{lm},{s}\n"));
            }
        }
        ModelArg::Gaussian => {
            let mu = finite("mu", args.mu)?;
            let sigmas: Vec<f64> = match args.sigma {
                Some(sigma) => vec![finite("sigma", sigma)?],
                None => {
                    finite("sigma-start", args.sigma_start)?;
                    finite("sigma-step", args.sigma_step)?;
                    (0..args.steps)
                        .map(|i| args.sigma_start + args.sigma_step * i as f64)
                        .collect()
                }
            };
            if let Some(bad) = sigmas.iter().find(|s| **s < 0.0) {
                return Err(CliError::Usage(format!("sigma must be non-negative, got {bad}")));
            }
            out.push_str("mu,sigma,contrast,entropy_bits\n");
            for sigma in sigmas {
                let noise = NoiseModel::new(mu, sigma);
                let contrast = fringe_contrast(&noise);
                let s = rho_bar_gaussian(&noise).von_neumann_entropy();
                out.push_str(&format!("{mu},{sigma},{contrast},{s}\n"));
            }
        }
    }

    match &args.out {
        Some(path) => write_file(path, &out)?,
        None => print!("{out}"),
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// counts.csv produced by simulate or decrypt.
    #[arg(long)]
    pub counts: PathBuf,

    /// Output SVG path.
    #[arg(long)]
    pub out: PathBuf,

    /// Overlay the noise-free expectation n(1 +- cos phi)/2.
    #[arg(long)]
    pub overlay: bool,
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let table = csvio::counts_from_csv(&read_file(&args.counts)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.counts.display())))?;
    if table.rows.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: counts file has no data rows",
            args.counts.display()
        )));
    }
    write_file(&args.out, &render_counts_svg(&table, args.overlay))?;
    println!("wrote {} ({} settings)", args.out.display(), table.rows.len());
    Ok(())
}
