use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use i2i_core::Error;
use i2i_harness::config::{ExperimentConfig, TaskId};
use i2i_harness::csvio::{fmt_f64, write_csv};
use i2i_harness::report::emit_plotdata;
use i2i_harness::runner::{
    craft_universal, gen_dataset, load_model, run_experiment, standard_comments, train_model,
    universal_vi,
};

/// Attack and defense benchmarking for image-to-image restoration models.
#[derive(Parser)]
#[command(name = "i2i", version)]
struct Cli {
    /// Path to a key=value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set epsilons=4,8
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write clean/degraded image pairs and a manifest
    GenData {
        /// denoise, super_resolve, or deblur
        #[arg(long)]
        task: String,
        /// Number of pairs (default: the images config value)
        #[arg(long)]
        count: Option<usize>,
        /// Output directory (default: <out_dir>/data/<task>)
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Train task models and save weights
    Train {
        /// Train a single task instead of all configured tasks
        #[arg(long)]
        task: Option<String>,
        /// Train the hardened twin on attacked batches
        #[arg(long)]
        adversarial: bool,
    },
    /// Run the attack grid without defenses
    Attack,
    /// Craft universal perturbations and report held-out scores
    Universal,
    /// Cross-model transferability grid only
    Transfer,
    /// Run the attack grid including all configured defenses
    Defend,
    /// Convert aggregate CSVs to plot-ready .dat files
    Report {
        /// Directory holding the CSVs (default: out_dir)
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Full pipeline output: results, aggregates, transfer grid
    RunExperiment,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 2,
        Error::Numeric(_) => 4,
        _ => 3,
    }
}

fn build_config(cli: &Cli) -> i2i_core::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    for ov in &cli.overrides {
        let (key, value) = ov.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("override {ov:?} is not of the form key=value"))
        })?;
        cfg.apply(key.trim(), value.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_task(s: &str) -> i2i_core::Result<TaskId> {
    TaskId::parse(s)
}

fn run(cli: Cli) -> i2i_core::Result<()> {
    let cfg = build_config(&cli)?;
    match cli.cmd {
        Cmd::GenData { task, count, dir } => {
            let task = parse_task(&task)?;
            let count = count.unwrap_or(cfg.images);
            let dir = dir.unwrap_or_else(|| cfg.out_dir.join("data").join(task.label()));
            let report = gen_dataset(&cfg, task, count, &dir)?;
            println!(
                "wrote {} files to {} (manifest {})",
                report.files_written,
                dir.display(),
                report.manifest.display()
            );
        }
        Cmd::Train { task, adversarial } => {
            let tasks = match task {
                Some(t) => vec![parse_task(&t)?],
                None => cfg.tasks.clone(),
            };
            for t in tasks {
                let s = train_model(&cfg, t, adversarial)?;
                println!(
                    "{}: final mse {:.4}, val psnr {:.2} dB in -> {:.2} dB out, weights {}",
                    t.label(),
                    s.final_loss,
                    s.val_psnr_degraded,
                    s.val_psnr_output,
                    s.weights.display()
                );
            }
        }
        Cmd::Attack => {
            let mut cfg = cfg;
            cfg.defenses.clear();
            let out = run_experiment(&cfg)?;
            println!("{} rows -> {}", out.rows, out.results.display());
        }
        Cmd::Universal => {
            let mut rows = Vec::new();
            for &task in &cfg.tasks {
                let model = load_model(&cfg, task)?;
                let delta = craft_universal(&cfg, task, &model)?;
                let vi = universal_vi(&cfg, task, &model, &delta)?;
                println!(
                    "{}: universal eps {} held-out mean vi {:.4}",
                    task.label(),
                    fmt_f64(cfg.universal_epsilon),
                    vi
                );
                rows.push(vec![
                    task.label().to_string(),
                    fmt_f64(cfg.universal_epsilon),
                    fmt_f64(vi),
                ]);
            }
            let path = cfg.out_dir.join("universal.csv");
            std::fs::create_dir_all(&cfg.out_dir)?;
            write_csv(
                &path,
                &standard_comments(&cfg),
                &[
                    "model".to_string(),
                    "epsilon".to_string(),
                    "mean_vi".to_string(),
                ],
                &rows,
            )?;
            println!("wrote {}", path.display());
        }
        Cmd::Transfer => {
            let models: Vec<_> = cfg
                .tasks
                .iter()
                .map(|&t| Ok((t, load_model(&cfg, t)?)))
                .collect::<i2i_core::Result<_>>()?;
            let grid = i2i_harness::runner::transfer_matrix(&cfg, &models)?;
            let mut header = vec!["source".to_string()];
            header.extend(models.iter().map(|(t, _)| t.label().to_string()));
            let path = cfg.out_dir.join("transfer_grid.csv");
            std::fs::create_dir_all(&cfg.out_dir)?;
            write_csv(&path, &standard_comments(&cfg), &header, &grid)?;
            println!("wrote {}", path.display());
        }
        Cmd::Defend => {
            let out = run_experiment(&cfg)?;
            println!("{} rows -> {}", out.rows, out.results.display());
        }
        Cmd::Report { dir } => {
            let dir = dir.unwrap_or_else(|| cfg.out_dir.clone());
            for path in emit_plotdata(&dir)? {
                println!("wrote {}", path.display());
            }
        }
        Cmd::RunExperiment => {
            let out = run_experiment(&cfg)?;
            println!("{} rows -> {}", out.rows, out.results.display());
            println!("aggregates: {}", out.vi_by_attack.display());
            println!("            {}", out.vi_by_band.display());
            println!("            {}", out.vi_by_defense.display());
            println!("            {}", out.transfer_grid.display());
            println!("timings:    {}", out.timings.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
