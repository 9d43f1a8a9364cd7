//! Deterministic experiment execution: dataset generation, model training,
//! attack/defense sweeps, and CSV emission.
//!
//! Every random draw is seeded by an FNV-1a hash of a readable key string
//! (config seed plus cell coordinates), so any grid cell can be recomputed
//! in isolation and two runs of the same config produce identical bytes.
//! Wall-clock times go to a separate timings file, never into results.

use std::path::{Path, PathBuf};
use std::time::Instant;

use i2i_core::attacks::{attack_universal, run_attack, AttackBudget, UniversalMethod};
use i2i_core::dataset::{degrade, make_pairs, patches, split_indices};
use i2i_core::defenses::{adversarial_train, defended_forward, AdversarialTrainConfig, Defense};
use i2i_core::metrics::{psnr, ssim, vulnerability_index, SSIM_WINDOW};
use i2i_core::models::{
    build_model, load_weights, save_weights, train, ImageToImageModel, TrainConfig,
};
use i2i_core::netpbm::write_pgm;
use i2i_core::tensor::clamp_pixels;
use i2i_core::{Error, Result, Rng, Tensor};

use crate::config::{DefenseId, ExperimentConfig, TaskId};
use crate::csvio::{fmt_f64, write_csv};
use crate::{fnv1a, VERSION};

/// Seed for a named stream: stable across runs, insensitive to evaluation
/// order, unique per coordinate tuple.
pub fn derived_seed(cfg_seed: u64, parts: &[&str]) -> u64 {
    let key = format!("{cfg_seed}/{}", parts.join("/"));
    fnv1a(key.as_bytes())
}

/// Comment block shared by all output files.
pub fn standard_comments(cfg: &ExperimentConfig) -> Vec<String> {
    vec![
        format!("i2i-harness {VERSION}"),
        format!("config {}", cfg.hash()),
        format!(
            "defaults: iterations={} jpeg_quality={} resize=[{},{}] bits={} universal_epsilon={}",
            cfg.iterations,
            cfg.jpeg_quality,
            fmt_f64(cfg.resize_lo),
            fmt_f64(cfg.resize_hi),
            cfg.bits,
            fmt_f64(cfg.universal_epsilon),
        ),
    ]
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))
}

// --- dataset ----------------------------------------------------------------

/// Clean eval scenes are shared across tasks so cross-model comparisons see
/// the same content; only the degradation differs.
fn clean_eval_patches(cfg: &ExperimentConfig, stream: &str, count: usize) -> Vec<Tensor> {
    patches(
        derived_seed(cfg.seed, &["patches", stream]),
        count,
        cfg.patch,
    )
}

fn degraded_input(
    cfg: &ExperimentConfig,
    task: TaskId,
    stream: &str,
    idx: usize,
    clean: &Tensor,
) -> Result<Tensor> {
    let mut rng = Rng::new(derived_seed(
        cfg.seed,
        &["degrade", stream, task.label(), &idx.to_string()],
    ));
    degrade(&task.task(), clean, &mut rng)
}

/// (model input, ground-truth target) pairs for evaluation.
pub fn eval_pairs(
    cfg: &ExperimentConfig,
    task: TaskId,
    stream: &str,
    count: usize,
) -> Result<Vec<(Tensor, Tensor)>> {
    let cleans = clean_eval_patches(cfg, stream, count);
    let mut out = Vec::with_capacity(count);
    for (i, clean) in cleans.into_iter().enumerate() {
        let x = degraded_input(cfg, task, stream, i, &clean)?;
        out.push((x, clean));
    }
    Ok(out)
}

pub struct GenReport {
    pub files_written: usize,
    pub manifest: PathBuf,
}

/// Writes `count` clean/degraded PGM pairs plus a manifest naming them and
/// the degradation parameters.
pub fn gen_dataset(
    cfg: &ExperimentConfig,
    task: TaskId,
    count: usize,
    dir: &Path,
) -> Result<GenReport> {
    ensure_dir(dir)?;
    let pairs = eval_pairs(cfg, task, "gen", count)?;
    let mut lines = Vec::new();
    for (i, (x, clean)) in pairs.iter().enumerate() {
        let clean_name = format!("clean_{i:03}.pgm");
        let degraded_name = format!("degraded_{i:03}.pgm");
        write_pgm(&dir.join(&clean_name), clean)?;
        write_pgm(&dir.join(&degraded_name), x)?;
        lines.push(format!("{i} {clean_name} {degraded_name}"));
    }
    let task_desc = match task.task() {
        i2i_core::models::Task::Denoise { sigma } => format!("denoise sigma={}", fmt_f64(sigma)),
        i2i_core::models::Task::SuperResolve { scale } => format!("super_resolve scale={scale}"),
        i2i_core::models::Task::Deblur {
            blur_sigma,
            kernel_size,
        } => {
            format!("deblur sigma={} kernel={kernel_size}", fmt_f64(blur_sigma))
        }
    };
    let mut manifest = String::new();
    manifest.push_str(&format!("# i2i-harness {VERSION}\n"));
    manifest.push_str(&format!("# config {}\n", cfg.hash()));
    manifest.push_str(&format!(
        "# task {task_desc} seed {} count {count} patch {}\n",
        cfg.seed, cfg.patch
    ));
    manifest.push_str("# index clean degraded\n");
    for l in &lines {
        manifest.push_str(l);
        manifest.push('\n');
    }
    let manifest_path = dir.join("manifest.txt");
    std::fs::write(&manifest_path, manifest)?;
    Ok(GenReport {
        files_written: 2 * count + 1,
        manifest: manifest_path,
    })
}

// --- training ---------------------------------------------------------------

pub fn model_path(cfg: &ExperimentConfig, task: TaskId) -> PathBuf {
    cfg.out_dir
        .join("models")
        .join(format!("{}.i2iw", task.label()))
}

fn adversarial_model_path(cfg: &ExperimentConfig, task: TaskId) -> PathBuf {
    cfg.out_dir
        .join("models")
        .join(format!("{}_adv.i2iw", task.label()))
}

pub struct TrainSummary {
    pub task: TaskId,
    pub final_loss: f64,
    pub val_psnr_degraded: f64,
    pub val_psnr_output: f64,
    pub weights: PathBuf,
}

fn training_pairs(cfg: &ExperimentConfig, task: TaskId) -> Result<Vec<(Tensor, Tensor)>> {
    let cleans = patches(
        derived_seed(cfg.seed, &["patches", "train", task.label()]),
        cfg.train_count,
        cfg.patch,
    );
    let mut rng = Rng::new(derived_seed(cfg.seed, &["degrade", "train", task.label()]));
    make_pairs(&task.task(), &cleans, &mut rng)
}

/// Validation PSNRs: degraded input vs target, and model output vs target.
fn validation_psnrs(model: &ImageToImageModel, val: &[(Tensor, Tensor)]) -> Result<(f64, f64)> {
    let mut in_sum = 0.0;
    let mut out_sum = 0.0;
    for (x, target) in val {
        in_sum += psnr(x, target)?;
        out_sum += psnr(&clamp_pixels(&model.forward(x)?), target)?;
    }
    let n = val.len() as f64;
    Ok((in_sum / n, out_sum / n))
}

/// Trains one task's model and writes its weights plus a loss-curve CSV.
/// `adversarial` switches to the hardened twin: same init seed, same data
/// order, attacked batch prefixes.
pub fn train_model(
    cfg: &ExperimentConfig,
    task: TaskId,
    adversarial: bool,
) -> Result<TrainSummary> {
    let all = training_pairs(cfg, task)?;
    let (train_idx, val_idx) =
        split_indices(all.len(), derived_seed(cfg.seed, &["split", task.label()]));
    let train_set: Vec<(Tensor, Tensor)> = train_idx.iter().map(|&i| all[i].clone()).collect();
    let val_set: Vec<(Tensor, Tensor)> = val_idx.iter().map(|&i| all[i].clone()).collect();

    let mut model = build_model(
        task.task(),
        cfg.depth,
        cfg.width,
        &mut Rng::new(derived_seed(cfg.seed, &["init", task.label()])),
    )?;
    let train_cfg = TrainConfig {
        epochs: cfg.train_epochs_for(task),
        batch_size: cfg.train_batch,
        ..TrainConfig::default()
    };
    let mut rng = Rng::new(derived_seed(cfg.seed, &["train", task.label()]));
    let report = if adversarial {
        adversarial_train(
            &mut model,
            &train_set,
            &train_cfg,
            &AdversarialTrainConfig::default(),
            &mut rng,
        )?
    } else {
        train(&mut model, &train_set, &train_cfg, &mut rng, None)?
    };

    let weights = if adversarial {
        adversarial_model_path(cfg, task)
    } else {
        model_path(cfg, task)
    };
    ensure_dir(weights.parent().unwrap())?;
    save_weights(&model, &weights)?;

    let loss_rows: Vec<Vec<String>> = report
        .epoch_loss
        .iter()
        .enumerate()
        .map(|(e, l)| vec![e.to_string(), fmt_f64(*l)])
        .collect();
    let suffix = if adversarial { "_adv" } else { "" };
    write_csv(
        &weights.with_file_name(format!("{}{suffix}_loss.csv", task.label())),
        &standard_comments(cfg),
        &["epoch".to_string(), "mse".to_string()],
        &loss_rows,
    )?;

    let (val_in, val_out) = validation_psnrs(&model, &val_set)?;
    Ok(TrainSummary {
        task,
        final_loss: *report.epoch_loss.last().unwrap(),
        val_psnr_degraded: val_in,
        val_psnr_output: val_out,
        weights,
    })
}

/// Loads trained weights, or explains which command creates them.
pub fn load_model(cfg: &ExperimentConfig, task: TaskId) -> Result<ImageToImageModel> {
    let path = model_path(cfg, task);
    if !path.exists() {
        return Err(Error::WeightFormat {
            offset: 0,
            reason: format!(
                "no trained weights at {}; run `i2i train --task {}` first",
                path.display(),
                task.label()
            ),
        });
    }
    Ok(load_weights(&path)?.with_task(task.task()))
}

pub fn load_adversarial_model(cfg: &ExperimentConfig, task: TaskId) -> Result<ImageToImageModel> {
    let path = adversarial_model_path(cfg, task);
    if !path.exists() {
        return Err(Error::WeightFormat {
            offset: 0,
            reason: format!(
                "no adversarially trained weights at {}; run `i2i train --task {} --adversarial` first",
                path.display(),
                task.label()
            ),
        });
    }
    Ok(load_weights(&path)?.with_task(task.task()))
}

// --- sweep ------------------------------------------------------------------

/// One line of results.csv. Wall time is tracked separately so result bytes
/// stay deterministic.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub model: String,
    pub attack: String,
    pub defense: String,
    pub epsilon: f64,
    pub band_ratio: String,
    pub image: usize,
    pub q_i: f64,
    pub q_o: f64,
    pub vi: f64,
    pub ssim_i: Option<f64>,
    pub ssim_o: Option<f64>,
    pub vi_ssim: Option<f64>,
}

fn opt_field(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn band_ratio_label(label: &str) -> String {
    label
        .strip_prefix("freq_")
        .map(str::to_string)
        .unwrap_or_default()
}

pub struct ExperimentOutputs {
    pub results: PathBuf,
    pub vi_by_attack: PathBuf,
    pub vi_by_band: PathBuf,
    pub vi_by_defense: PathBuf,
    pub transfer_grid: PathBuf,
    pub timings: PathBuf,
    pub rows: usize,
}

struct AttackArtifact {
    x_attacked: Tensor,
    q_i: f64,
    ssim_i: f64,
}

/// VI of `model` under a defense for one precomputed artifact.
fn defended_scores(
    model: &ImageToImageModel,
    x: &Tensor,
    art: &AttackArtifact,
    defense: Defense,
    rng: &mut Rng,
) -> Result<(f64, f64, f64, Option<f64>)> {
    let y_clean = clamp_pixels(&defended_forward(model, x, defense, rng)?);
    let y_attacked = clamp_pixels(&defended_forward(model, &art.x_attacked, defense, rng)?);
    let q_o = psnr(&y_clean, &y_attacked)?;
    let ssim_o = ssim(&y_clean, &y_attacked)?;
    let vi = art.q_i / q_o;
    let vi_ssim = if ssim_o.abs() > 1e-12 {
        Some(art.ssim_i / ssim_o)
    } else {
        None
    };
    Ok((q_o, vi, ssim_o, vi_ssim))
}

/// Runs the full sweep grid and writes every output CSV. Returns paths and
/// the data row count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutputs> {
    cfg.validate()?;
    ensure_dir(&cfg.out_dir)?;
    let attack_cells = cfg.attack_instances()?;
    let models: Vec<(TaskId, ImageToImageModel)> = cfg
        .tasks
        .iter()
        .map(|&t| Ok((t, load_model(cfg, t)?)))
        .collect::<Result<_>>()?;

    let mut rows: Vec<ResultRow> = Vec::new();
    let mut timing_rows: Vec<Vec<String>> = Vec::new();
    let ssim_ok = cfg.patch >= SSIM_WINDOW;

    for (task, model) in &models {
        let pairs = eval_pairs(cfg, *task, "eval", cfg.images)?;
        for cell in &attack_cells {
            for &eps in &cfg.epsilons {
                let t0 = Instant::now();
                let budget = AttackBudget::new(eps, cfg.iterations)?;
                let mut artifacts = Vec::with_capacity(pairs.len());
                for (i, (x, _)) in pairs.iter().enumerate() {
                    let mut rng = Rng::new(derived_seed(
                        cfg.seed,
                        &[
                            "attack",
                            task.label(),
                            &cell.label,
                            &fmt_f64(eps),
                            &i.to_string(),
                        ],
                    ));
                    let outcome = run_attack(model, x, cell.method, &budget, &mut rng)?;
                    artifacts.push(AttackArtifact {
                        q_i: outcome.quality.psnr_input,
                        ssim_i: if ssim_ok {
                            ssim(x, &outcome.x_attacked)?
                        } else {
                            f64::NAN
                        },
                        x_attacked: outcome.x_attacked,
                    });
                }
                let mut defense_ids: Vec<Option<DefenseId>> = vec![None];
                defense_ids.extend(cfg.defenses.iter().copied().map(Some));
                for def_id in &defense_ids {
                    let def_label = def_id.map_or("none", |d| d.label());
                    let defense = def_id.map_or(Defense::None, |d| cfg.defense(d));
                    for (i, (x, _)) in pairs.iter().enumerate() {
                        let art = &artifacts[i];
                        let mut rng = Rng::new(derived_seed(
                            cfg.seed,
                            &[
                                "defense",
                                task.label(),
                                &cell.label,
                                def_label,
                                &fmt_f64(eps),
                                &i.to_string(),
                            ],
                        ));
                        let (q_o, vi, ssim_o, vi_ssim) =
                            defended_scores(model, x, art, defense, &mut rng)?;
                        rows.push(ResultRow {
                            model: task.label().to_string(),
                            attack: cell.label.clone(),
                            defense: def_label.to_string(),
                            epsilon: eps,
                            band_ratio: band_ratio_label(&cell.label),
                            image: i,
                            q_i: art.q_i,
                            q_o,
                            vi,
                            ssim_i: ssim_ok.then_some(art.ssim_i),
                            ssim_o: ssim_ok.then_some(ssim_o),
                            vi_ssim: if ssim_ok { vi_ssim } else { None },
                        });
                    }
                }
                timing_rows.push(vec![
                    task.label().to_string(),
                    cell.label.clone(),
                    fmt_f64(eps),
                    format!("{:.3}", t0.elapsed().as_secs_f64() * 1e3),
                ]);
            }
        }
    }

    rows.sort_by(|a, b| {
        (&a.model, &a.attack, &a.defense)
            .cmp(&(&b.model, &b.attack, &b.defense))
            .then(a.epsilon.total_cmp(&b.epsilon))
            .then(a.image.cmp(&b.image))
    });

    let comments = standard_comments(cfg);
    let out = &cfg.out_dir;
    let results_path = out.join("results.csv");
    let header: Vec<String> = [
        "model",
        "attack",
        "defense",
        "epsilon",
        "band_ratio",
        "image",
        "q_i",
        "q_o",
        "vi",
        "ssim_i",
        "ssim_o",
        "vi_ssim",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.model.clone(),
                r.attack.clone(),
                r.defense.clone(),
                fmt_f64(r.epsilon),
                r.band_ratio.clone(),
                r.image.to_string(),
                fmt_f64(r.q_i),
                fmt_f64(r.q_o),
                fmt_f64(r.vi),
                opt_field(r.ssim_i),
                opt_field(r.ssim_o),
                opt_field(r.vi_ssim),
            ]
        })
        .collect();
    write_csv(&results_path, &comments, &header, &body)?;

    let vi_by_attack = out.join("vi_by_attack.csv");
    write_csv(
        &vi_by_attack,
        &comments,
        &str_vec(&["attack", "model", "epsilon", "mean_vi", "mean_vi_ssim"]),
        &aggregate_attack(&rows),
    )?;
    let vi_by_band = out.join("vi_by_band.csv");
    write_csv(
        &vi_by_band,
        &comments,
        &str_vec(&["band_ratio", "model", "epsilon", "mean_vi"]),
        &aggregate_band(&rows),
    )?;

    let clean_psnrs = clean_defense_psnrs(cfg, &models)?;
    let vi_by_defense = out.join("vi_by_defense.csv");
    write_csv(
        &vi_by_defense,
        &comments,
        &str_vec(&[
            "defense",
            "model",
            "attack",
            "epsilon",
            "mean_vi",
            "mean_clean_psnr",
        ]),
        &aggregate_defense(&rows, &clean_psnrs),
    )?;

    let transfer_path = out.join("transfer_grid.csv");
    let transfer_rows = if attack_cells.is_empty() {
        Vec::new()
    } else {
        transfer_matrix(cfg, &models)?
    };
    let mut transfer_header = vec!["source".to_string()];
    transfer_header.extend(models.iter().map(|(t, _)| t.label().to_string()));
    write_csv(&transfer_path, &comments, &transfer_header, &transfer_rows)?;

    let timings_path = out.join("timings.csv");
    write_csv(
        &timings_path,
        &comments,
        &str_vec(&["model", "attack", "epsilon", "wall_ms"]),
        &timing_rows,
    )?;

    Ok(ExperimentOutputs {
        results: results_path,
        vi_by_attack,
        vi_by_band,
        vi_by_defense,
        transfer_grid: transfer_path,
        timings: timings_path,
        rows: rows.len(),
    })
}

fn str_vec(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Group rows by key, average the chosen value, keep first-seen key order
/// after a sort of the keys themselves.
fn group_mean<K: Ord + Clone, F: Fn(&ResultRow) -> Option<(K, f64)>>(
    rows: &[ResultRow],
    f: F,
) -> Vec<(K, f64)> {
    let mut acc: std::collections::BTreeMap<K, (f64, usize)> = std::collections::BTreeMap::new();
    for r in rows {
        if let Some((k, v)) = f(r) {
            let e = acc.entry(k).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(k, (s, n))| (k, s / n as f64))
        .collect()
}

fn aggregate_attack(rows: &[ResultRow]) -> Vec<Vec<String>> {
    let vi = group_mean(rows, |r| {
        (r.defense == "none").then(|| {
            (
                (r.attack.clone(), r.model.clone(), r.epsilon.to_bits()),
                r.vi,
            )
        })
    });
    let vi_ssim = group_mean(rows, |r| match (r.defense.as_str(), r.vi_ssim) {
        ("none", Some(v)) => Some(((r.attack.clone(), r.model.clone(), r.epsilon.to_bits()), v)),
        _ => None,
    });
    let ssim_map: std::collections::BTreeMap<_, f64> = vi_ssim.into_iter().collect();
    vi.into_iter()
        .map(|((attack, model, eps_bits), mean_vi)| {
            let key = (attack.clone(), model.clone(), eps_bits);
            vec![
                attack,
                model,
                fmt_f64(f64::from_bits(eps_bits)),
                fmt_f64(mean_vi),
                ssim_map.get(&key).map(|v| fmt_f64(*v)).unwrap_or_default(),
            ]
        })
        .collect()
}

fn aggregate_band(rows: &[ResultRow]) -> Vec<Vec<String>> {
    group_mean(rows, |r| {
        (r.defense == "none" && !r.band_ratio.is_empty()).then(|| {
            (
                (r.band_ratio.clone(), r.model.clone(), r.epsilon.to_bits()),
                r.vi,
            )
        })
    })
    .into_iter()
    .map(|((band, model, eps_bits), mean_vi)| {
        vec![
            band,
            model,
            fmt_f64(f64::from_bits(eps_bits)),
            fmt_f64(mean_vi),
        ]
    })
    .collect()
}

/// Mean PSNR of defended clean outputs against ground truth, per
/// (defense, model); the clean-performance cost a defense pays.
fn clean_defense_psnrs(
    cfg: &ExperimentConfig,
    models: &[(TaskId, ImageToImageModel)],
) -> Result<std::collections::BTreeMap<(String, String), f64>> {
    let mut out = std::collections::BTreeMap::new();
    for (task, model) in models {
        let pairs = eval_pairs(cfg, *task, "eval", cfg.images)?;
        let mut defense_ids: Vec<Option<DefenseId>> = vec![None];
        defense_ids.extend(cfg.defenses.iter().copied().map(Some));
        for def_id in &defense_ids {
            let def_label = def_id.map_or("none", |d| d.label());
            let defense = def_id.map_or(Defense::None, |d| cfg.defense(d));
            let mut sum = 0.0;
            for (i, (x, target)) in pairs.iter().enumerate() {
                let mut rng = Rng::new(derived_seed(
                    cfg.seed,
                    &["clean-defense", task.label(), def_label, &i.to_string()],
                ));
                let y = clamp_pixels(&defended_forward(model, x, defense, &mut rng)?);
                sum += psnr(target, &y)?;
            }
            out.insert(
                (def_label.to_string(), task.label().to_string()),
                sum / pairs.len() as f64,
            );
        }
    }
    Ok(out)
}

fn aggregate_defense(
    rows: &[ResultRow],
    clean: &std::collections::BTreeMap<(String, String), f64>,
) -> Vec<Vec<String>> {
    group_mean(rows, |r| {
        Some((
            (
                r.defense.clone(),
                r.model.clone(),
                r.attack.clone(),
                r.epsilon.to_bits(),
            ),
            r.vi,
        ))
    })
    .into_iter()
    .map(|((defense, model, attack, eps_bits), mean_vi)| {
        let clean_psnr = clean
            .get(&(defense.clone(), model.clone()))
            .map(|v| fmt_f64(*v))
            .unwrap_or_default();
        vec![
            defense,
            model,
            attack,
            fmt_f64(f64::from_bits(eps_bits)),
            fmt_f64(mean_vi),
            clean_psnr,
        ]
    })
    .collect()
}

// --- universal / transfer ---------------------------------------------------

/// Universal perturbation for one model, crafted on a dedicated image set
/// disjoint from the eval stream.
pub fn craft_universal(
    cfg: &ExperimentConfig,
    task: TaskId,
    model: &ImageToImageModel,
) -> Result<Tensor> {
    let craft = eval_pairs(cfg, task, "craft", cfg.images)?;
    let inputs: Vec<&Tensor> = craft.iter().map(|(x, _)| x).collect();
    let budget = AttackBudget::new(cfg.universal_epsilon, cfg.iterations)?;
    let mut rng = Rng::new(derived_seed(cfg.seed, &["universal", task.label()]));
    attack_universal(model, &inputs, &budget, UniversalMethod::Ifgsm, &mut rng)
}

/// Mean VI of `model` on its eval stream under a fixed shared perturbation.
pub fn universal_vi(
    cfg: &ExperimentConfig,
    task: TaskId,
    model: &ImageToImageModel,
    delta: &Tensor,
) -> Result<f64> {
    let pairs = eval_pairs(cfg, task, "eval", cfg.images)?;
    let mut sum = 0.0;
    for (x, _) in &pairs {
        let x_attacked = clamp_pixels(&x.add(delta)?);
        let (_, score) = vulnerability_index(model, x, &x_attacked)?;
        sum += score.vi;
    }
    Ok(sum / pairs.len() as f64)
}

/// Source x target grid of mean VI: row s carries model s's universal delta
/// applied to every target model's own eval inputs.
pub fn transfer_matrix(
    cfg: &ExperimentConfig,
    models: &[(TaskId, ImageToImageModel)],
) -> Result<Vec<Vec<String>>> {
    let mut deltas = Vec::new();
    for (task, model) in models {
        deltas.push(craft_universal(cfg, *task, model)?);
    }
    let mut grid = Vec::new();
    for (s, (src_task, _)) in models.iter().enumerate() {
        let mut row = vec![src_task.label().to_string()];
        for (t_task, t_model) in models {
            row.push(fmt_f64(universal_vi(cfg, *t_task, t_model, &deltas[s])?));
        }
        grid.push(row);
    }
    Ok(grid)
}
