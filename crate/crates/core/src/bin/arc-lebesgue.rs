use arc_lebesgue::electrostatics::{perturbation_probe, total_energy, ChargeConfig, EnergyOptions};
use arc_lebesgue::experiment::{
    run_collision_scan, run_midpoint_witness, run_sweep, write_level_curve_csv, CollisionScanOptions,
    MzSweepOptions, SweepConfig,
};
use arc_lebesgue::lebesgue::lebesgue_constant;
use arc_lebesgue::mz::{worst_mz_ratio_with, WitnessSet};
use arc_lebesgue::nodes::{
    build_family, fejer_nodes_gamma0_rotated, fekete_nodes, read_nodes_csv, write_nodes_csv, FeketeOptions,
};
use arc_lebesgue::{CurveKind, Error, FamilyKind, LebesgueOptions, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "arc-lebesgue",
    version,
    about = "Interpolation experiments on the L-shaped arc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Chebyshev,
    Equispaced,
    FejerGamma0,
    AdjustedFejerGamma0,
    FeketeCircle,
    FeketeGamma0,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Chebyshev => FamilyKind::Chebyshev,
            Family::Equispaced => FamilyKind::Equispaced,
            Family::FejerGamma0 => FamilyKind::FejerGamma0,
            Family::AdjustedFejerGamma0 => FamilyKind::AdjustedFejerGamma0,
            Family::FeketeCircle => FamilyKind::FeketeCircle,
            Family::FeketeGamma0 => FamilyKind::FeketeGamma0,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessArg {
    Lagrange,
    Random,
    Both,
}

impl From<WitnessArg> for WitnessSet {
    fn from(w: WitnessArg) -> Self {
        match w {
            WitnessArg::Lagrange => WitnessSet::Lagrange,
            WitnessArg::Random => WitnessSet::Random,
            WitnessArg::Both => WitnessSet::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Circle,
    Gamma0,
}

#[derive(Subcommand)]
enum Command {
    /// Write a node family as CSV.
    Nodes {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Rotation of the Fejér grid (fejer-gamma0 only).
        #[arg(long, allow_hyphen_values = true)]
        rotation: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lebesgue constant of one family.
    Lebesgue {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        samples_per_gap: usize,
        #[arg(long, default_value_t = 1e-9)]
        refine_tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Lebesgue (and optionally MZ) sweep over a list of degrees.
    Sweep {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long)]
        with_collisions: Option<usize>,
        #[arg(long, requires = "p")]
        mz: bool,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// TOML file with sweep settings; flags given on the command line
        /// take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Worst modified Marcinkiewicz-Zygmund ratio of one family.
    Mz {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "both")]
        witness: WitnessArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Collision degrees of the raw Fejér grid with their Lebesgue constants.
    Collisions {
        #[arg(long)]
        j_max: usize,
        #[arg(long)]
        n_max: usize,
        /// Skip Lebesgue constants above this degree.
        #[arg(long)]
        lebesgue_n_max: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Field energy of unit charges on the circle.
    Energy {
        /// `roots-of-unity` or a node CSV file of points on the unit circle.
        #[arg(long)]
        config: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "trials")]
        perturb: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: PathBuf,
    },
    /// Fekete points by coordinate ascent.
    Fekete {
        #[arg(long, value_enum)]
        curve: CurveArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lebesgue function at the midpoint of the first two grid angles.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Samples of a level curve as CSV.
    Level {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => {
            let mut f = create(p)?;
            writeln!(f, "{text}")?;
            f.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("ARC_LEBESGUE_THREADS") else {
        return Ok(());
    };
    let k: usize = v.trim().parse().map_err(|_| {
        Error::Invalid(format!(
            "ARC_LEBESGUE_THREADS must be a positive integer, got '{v}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k.max(1))
        .build_global()
        .map_err(|e| Error::Invalid(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Nodes {
            family,
            n,
            rotation,
            out,
        } => {
            let kind = FamilyKind::from(family);
            let fam = match rotation {
                Some(r) if kind == FamilyKind::FejerGamma0 => fejer_nodes_gamma0_rotated(n, r)?,
                Some(_) => {
                    return Err(Error::Invalid("--rotation applies to fejer-gamma0 only".into()));
                }
                None => build_family(kind, n, &FeketeOptions::default())?,
            };
            for w in fam.warnings() {
                eprintln!("warning: {w}");
            }
            write_nodes_csv(&fam, create(&out)?)
        }
        Command::Lebesgue {
            family,
            n,
            samples_per_gap,
            refine_tol,
            json,
        } => {
            let fam = build_family(family.into(), n, &FeketeOptions::default())?;
            let opts = LebesgueOptions {
                samples_per_gap,
                refine_tol,
                ..LebesgueOptions::default()
            };
            emit_json(&lebesgue_constant(&fam, &opts)?, json.as_deref())
        }
        Command::Sweep {
            family,
            n_list,
            with_collisions,
            mz,
            p,
            out_dir,
            config,
            seed,
        } => {
            let mut cfg = match (&config, family, &n_list) {
                (Some(path), _, _) => SweepConfig::load(path)?,
                (None, Some(f), Some(list)) => SweepConfig::new(f.into(), list.clone()),
                _ => {
                    return Err(Error::Invalid(
                        "sweep needs --family and --n-list, or --config".into(),
                    ))
                }
            };
            if let Some(f) = family {
                cfg.family = f.into();
            }
            if let Some(list) = n_list {
                cfg.n_list = list;
            }
            if with_collisions.is_some() {
                cfg.with_collisions = with_collisions;
            }
            if let (true, Some(p)) = (mz, p) {
                cfg.mz = Some(MzSweepOptions {
                    p,
                    witness: WitnessSet::Both,
                });
            }
            if let Some(dir) = out_dir {
                cfg.out_dir = dir;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let outcome = run_sweep(&cfg)?;
            for r in outcome.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("n = {}: {}", r.n, r.error.as_deref().unwrap_or_default());
            }
            emit_json(&outcome.summary, None)
        }
        Command::Mz {
            family,
            n,
            p,
            witness,
            seed,
            json,
        } => {
            let fam = build_family(family.into(), n, &FeketeOptions::default())?;
            emit_json(
                &worst_mz_ratio_with(&fam, n, p, witness.into(), seed)?,
                json.as_deref(),
            )
        }
        Command::Collisions {
            j_max,
            n_max,
            lebesgue_n_max,
            out,
        } => {
            let mut opts = CollisionScanOptions::new(j_max, n_max);
            if let Some(m) = lebesgue_n_max {
                opts.lebesgue_n_max = m;
            }
            let scan = run_collision_scan(&opts)?;
            scan.write_csv(create(&out)?)?;
            #[derive(Serialize)]
            struct Summary {
                rows: usize,
                reference_median: f64,
                c2: f64,
                witness_exponent: Option<f64>,
                spikes: Vec<usize>,
            }
            emit_json(
                &Summary {
                    rows: scan.rows.len(),
                    reference_median: scan.reference_median,
                    c2: scan.c2,
                    witness_exponent: scan.witness_exponent,
                    spikes: scan.spikes().map(|r| r.n).collect(),
                },
                None,
            )
        }
        Command::Energy {
            config,
            n,
            perturb,
            trials,
            seed,
            json,
        } => {
            let opts = EnergyOptions::default();
            if config == "roots-of-unity" {
                let n = n.ok_or_else(|| Error::Invalid("--n is required for roots-of-unity".into()))?;
                match (perturb, trials) {
                    (Some(sigma), Some(t)) => {
                        emit_json(&perturbation_probe(n, sigma, t, seed, &opts)?, Some(&json))
                    }
                    _ => emit_json(
                        &total_energy(&ChargeConfig::roots_of_unity(n), &opts)?,
                        Some(&json),
                    ),
                }
            } else {
                if perturb.is_some() {
                    return Err(Error::Invalid("--perturb applies to roots-of-unity only".into()));
                }
                let fam = read_nodes_csv(BufReader::new(File::open(&config)?), Some(CurveKind::UnitCircle))?;
                if let Some(n) = n.filter(|&n| n + 1 != fam.len()) {
                    return Err(Error::LengthMismatch {
                        expected: n + 1,
                        got: fam.len(),
                    });
                }
                let charges = ChargeConfig::new(fam.points, config.clone())?;
                emit_json(&total_energy(&charges, &opts)?, Some(&json))
            }
        }
        Command::Fekete {
            curve,
            n,
            restarts,
            iters,
            seed,
            out,
        } => {
            let kind = match curve {
                CurveArg::Circle => CurveKind::UnitCircle,
                CurveArg::Gamma0 => CurveKind::Gamma0,
            };
            let res = fekete_nodes(
                kind,
                n,
                &FeketeOptions {
                    restarts,
                    iters,
                    seed,
                },
            )?;
            write_nodes_csv(&res.family, create(&out)?)?;
            if !res.converged {
                eprintln!(
                    "warning: optimizer stopped after {} sweeps without converging",
                    res.sweeps
                );
            }
            println!("log_product = {:.16e}", res.log_product);
            Ok(())
        }
        Command::Witness { n, json } => emit_json(&run_midpoint_witness(n)?, json.as_deref()),
        Command::Level { m, samples, out } => write_level_curve_csv(m, samples, create(&out)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
