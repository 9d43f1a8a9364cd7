//! End-to-end acceptance sweep. Trains the three task models once, then
//! checks every property and ordinal the project promises, printing one
//! verdict line per criterion. Failures are collected and asserted at the
//! end so a red criterion never hides the others.

use std::path::Path;
use std::process::Command;

use i2i_core::attacks::{run_attack, AttackBudget, AttackMethod};
use i2i_core::frequency::{dct2, idct2, out_of_band_energy, Band, FrequencyMask};
use i2i_core::metrics::{psnr, ssim, PSNR_CAP, SSIM_WINDOW};
use i2i_core::models::build_model;
use i2i_core::tensor::clamp_pixels;
use i2i_core::{Rng, Tensor};

use i2i_harness::config::{DefenseId, ExperimentConfig, TaskId};
use i2i_harness::csvio::{column_index, read_csv, CsvFile};
use i2i_harness::runner::{
    derived_seed, eval_pairs, load_adversarial_model, load_model, run_experiment, train_model,
};

struct Verdict {
    n: u32,
    pass: bool,
    detail: String,
}

fn verdict(n: u32, pass: bool, detail: String) -> Verdict {
    Verdict { n, pass, detail }
}

fn random_image(rng: &mut Rng, h: usize, w: usize) -> Tensor {
    let data: Vec<f64> = (0..h * w).map(|_| rng.uniform_in(0.0, 255.0)).collect();
    Tensor::from_vec(&[h, w, 1], data).unwrap()
}

/// Mean of the named numeric column over rows matching `filter`.
fn column_mean<F: Fn(&[String]) -> bool>(csv: &CsvFile, col: &str, filter: F) -> Option<f64> {
    let ci = column_index(csv, col).ok()?;
    let vals: Vec<f64> = csv
        .rows
        .iter()
        .filter(|r| filter(r))
        .map(|r| r[ci].parse::<f64>().unwrap())
        .collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

fn field<'a>(csv: &CsvFile, row: &'a [String], col: &str) -> &'a str {
    &row[column_index(csv, col).unwrap()]
}

// --- criterion 1: analytic gradients vs central differences ---------------

fn check_gradients() -> Verdict {
    let h = 1e-3;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for (i, task) in [TaskId::Denoise, TaskId::SuperResolve, TaskId::Deblur]
        .iter()
        .enumerate()
    {
        let mut rng = Rng::new(900 + i as u64);
        let model = build_model(task.task(), 4, 8, &mut rng).unwrap();
        let x = random_image(&mut rng, 8, 8);
        let y0 = model.forward(&x).unwrap();
        // objective: sum(f(x) * y0) with y0 held constant, so the analytic
        // gradient is J^T y0 and the network is piecewise linear in x
        let grad = model.input_gradient(&x, &y0).unwrap();
        for i in 0..x.len() {
            let bump = |s: f64| {
                let mut d = x.data().to_vec();
                d[i] += s;
                Tensor::from_vec(x.shape(), d).unwrap()
            };
            let xp = bump(h);
            let xm = bump(-h);
            let (yp, tp) = model.forward_traced(&xp).unwrap();
            let (ym, tm) = model.forward_traced(&xm).unwrap();
            // a ReLU kink lies between the two evaluation points iff any
            // activation is zero on one side and nonzero on the other
            let kinked = tp.activations.iter().zip(&tm.activations).any(|(a, b)| {
                a.data()
                    .iter()
                    .zip(b.data())
                    .any(|(&u, &v)| (u == 0.0) != (v == 0.0))
            });
            if kinked {
                skipped += 1;
                continue;
            }
            let dot =
                |y: &Tensor| -> f64 { y.data().iter().zip(y0.data()).map(|(a, b)| a * b).sum() };
            let fd = (dot(&yp) - dot(&ym)) / (2.0 * h);
            let g = grad.data()[i];
            let denom = g.abs().max(fd.abs());
            if denom > 1e-12 {
                worst = worst.max((g - fd).abs() / denom);
            }
            checked += 1;
        }
    }
    verdict(
        1,
        worst < 1e-5 && checked >= 100,
        format!("worst relative error {worst:.2e} over {checked} coordinates ({skipped} kink-adjacent skipped)"),
    )
}

// --- criterion 2: transform oracle ----------------------------------------

fn check_transforms(worst_out_of_band: f64) -> Verdict {
    let mut rng = Rng::new(2024);
    let mut worst_round = 0.0f64;
    let mut worst_parseval = 0.0f64;
    for _ in 0..100 {
        let h = 1 + (rng.next_u64() % 96) as usize;
        let w = 1 + (rng.next_u64() % 96) as usize;
        let x = random_image(&mut rng, h, w);
        let coeffs = dct2(&x).unwrap();
        let back = idct2(&coeffs).unwrap();
        worst_round = worst_round.max(back.sub(&x).unwrap().max_abs());
        let ex: f64 = x.data().iter().map(|v| v * v).sum();
        let ec: f64 = coeffs.data().iter().map(|v| v * v).sum();
        worst_parseval = worst_parseval.max((ex - ec).abs() / ex.max(1e-30));
    }
    verdict(
        2,
        worst_round < 1e-9 && worst_parseval < 1e-9 && worst_out_of_band < 1e-9,
        format!(
            "roundtrip {worst_round:.2e}, Parseval {worst_parseval:.2e}, out-of-band {worst_out_of_band:.2e}"
        ),
    )
}

// --- criterion 3: budget invariant -----------------------------------------

struct BudgetSweep {
    violations: usize,
    cells: usize,
    worst_out_of_band: f64,
}

fn check_budgets(cfg: &ExperimentConfig, sr: &i2i_core::models::ImageToImageModel) -> BudgetSweep {
    let methods: [(&str, AttackMethod); 5] = [
        ("random", AttackMethod::RandomUniform),
        ("ifgsm", AttackMethod::Ifgsm),
        ("fda", AttackMethod::Fda),
        (
            "freq_low",
            AttackMethod::Frequency {
                band: Band::Low,
                ratio: 0.25,
            },
        ),
        (
            "freq_high",
            AttackMethod::Frequency {
                band: Band::High,
                ratio: 0.25,
            },
        ),
    ];
    let pairs = eval_pairs(cfg, TaskId::SuperResolve, "eval", cfg.images).unwrap();
    let mut violations = 0;
    let mut cells = 0;
    let mut worst_oob = 0.0f64;
    for &(label, method) in &methods {
        for &eps in &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
            // the bound is per-step-count independent; a short run keeps the
            // sweep fast while still exercising every method
            let budget = AttackBudget::new(eps, 4).unwrap();
            for (i, (x, _)) in pairs.iter().enumerate() {
                let mut rng = Rng::new(derived_seed(
                    cfg.seed,
                    &["acceptance-budget", label, &eps.to_string(), &i.to_string()],
                ));
                let out = run_attack(sr, x, method, &budget, &mut rng).unwrap();
                cells += 1;
                if out.x_attacked.sub(x).unwrap().max_abs() > eps + 1e-9 {
                    violations += 1;
                }
                if out
                    .x_attacked
                    .data()
                    .iter()
                    .any(|&v| !(0.0..=255.0).contains(&v))
                {
                    violations += 1;
                }
                if let AttackMethod::Frequency { band, ratio } = method {
                    let mask = FrequencyMask::new(band, ratio, x.shape()[0], x.shape()[1]).unwrap();
                    worst_oob = worst_oob.max(out_of_band_energy(&out.delta, &mask).unwrap());
                }
            }
        }
    }
    BudgetSweep {
        violations,
        cells,
        worst_out_of_band: worst_oob,
    }
}

// --- criterion 10: byte-identical reruns ------------------------------------

fn check_determinism(dir: &Path) -> Verdict {
    let bin = env!("CARGO_BIN_EXE_i2i");
    let out_dir = dir.join("c10");
    let cfg_path = dir.join("c10.cfg");
    std::fs::write(
        &cfg_path,
        format!(
            "tasks = super_resolve\ndepth = 2\nwidth = 4\npatch = 16\nimages = 2\n\
             train_count = 12\ntrain_epochs_super_resolve = 1\ntrain_batch = 4\n\
             epsilons = 4\niterations = 2\nattacks = random,ifgsm\ndefenses = bit_reduce\n\
             out_dir = {}\n",
            out_dir.display()
        ),
    )
    .unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(bin)
            .args(["--config", cfg_path.to_str().unwrap()])
            .args(args)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{} failed: {}",
            args[0],
            String::from_utf8_lossy(&out.stderr)
        );
    };
    run(&["train"]);
    let files = [
        "results.csv",
        "vi_by_attack.csv",
        "vi_by_band.csv",
        "vi_by_defense.csv",
        "transfer_grid.csv",
    ];
    run(&["run-experiment"]);
    let first: Vec<Vec<u8>> = files
        .iter()
        .map(|f| std::fs::read(out_dir.join(f)).unwrap())
        .collect();
    run(&["run-experiment"]);
    let mut diffs = Vec::new();
    for (f, a) in files.iter().zip(&first) {
        if &std::fs::read(out_dir.join(f)).unwrap() != a {
            diffs.push(*f);
        }
    }
    verdict(
        10,
        diffs.is_empty(),
        if diffs.is_empty() {
            format!("two runs byte-identical over {} files", files.len())
        } else {
            format!("files differ between runs: {diffs:?}")
        },
    )
}

// --- criterion 11: metric fixtures ------------------------------------------

fn check_metric_fixtures() -> Verdict {
    let a = Tensor::from_vec(
        &[16, 16, 1],
        (0..256).map(|i| ((i * 31 + 7) % 200) as f64).collect(),
    )
    .unwrap();
    let identical = psnr(&a, &a).unwrap();
    let shifted = a.map(|v| v + 16.0);
    let offset = psnr(&a, &shifted).unwrap();
    let zeros = Tensor::zeros(&[8, 8, 1]);
    let full = Tensor::full(&[8, 8, 1], 255.0);
    let extremes = psnr(&zeros, &full).unwrap();
    let self_ssim = ssim(&a, &a).unwrap();

    // deterministic fixture pair scored against a direct, non-separable
    // windowed implementation
    let fa = fixture_image(|y, x| ((y * 7 + x * 13) % 256) as f64);
    let fb = fixture_image(|y, x| {
        (((y * 7 + x * 13) % 256) as f64 + 12.0 * ((y + 2 * x) as f64 * 0.37).sin())
            .clamp(0.0, 255.0)
    });
    let fast = ssim(&fa, &fb).unwrap();
    let slow = ssim_direct(&fa, &fb);
    let pass = identical == PSNR_CAP
        && (offset - 24.05).abs() <= 0.01
        && extremes == 0.0
        && self_ssim == 1.0
        && (fast - slow).abs() < 1e-6;
    verdict(
        11,
        pass,
        format!(
            "identical {identical} dB, +16 {offset:.4} dB, extremes {extremes} dB, self-SSIM {self_ssim}, reference gap {:.2e}",
            (fast - slow).abs()
        ),
    )
}

fn fixture_image(f: impl Fn(usize, usize) -> f64) -> Tensor {
    let mut data = Vec::with_capacity(32 * 32);
    for y in 0..32 {
        for x in 0..32 {
            data.push(f(y, x));
        }
    }
    Tensor::from_vec(&[32, 32, 1], data).unwrap()
}

/// Windowed SSIM with an explicit 2-D Gaussian, no separable filtering.
fn ssim_direct(a: &Tensor, b: &Tensor) -> f64 {
    let (sigma, k1, k2, peak) = (1.5, 0.01, 0.03, 255.0);
    let (h, w) = (a.shape()[0], a.shape()[1]);
    let half = SSIM_WINDOW / 2;
    let mut win = vec![0.0; SSIM_WINDOW * SSIM_WINDOW];
    let mut sum = 0.0;
    for y in 0..SSIM_WINDOW {
        for x in 0..SSIM_WINDOW {
            let dy = y as f64 - half as f64;
            let dx = x as f64 - half as f64;
            let v = (-(dy * dy + dx * dx) / (2.0 * sigma * sigma)).exp();
            win[y * SSIM_WINDOW + x] = v;
            sum += v;
        }
    }
    for v in &mut win {
        *v /= sum;
    }
    let c1 = (k1 * peak) * (k1 * peak);
    let c2 = (k2 * peak) * (k2 * peak);
    let mut acc = 0.0;
    let mut count = 0usize;
    for cy in half..h - half {
        for cx in half..w - half {
            let (mut ma, mut mb) = (0.0, 0.0);
            for dy in 0..SSIM_WINDOW {
                for dx in 0..SSIM_WINDOW {
                    let wgt = win[dy * SSIM_WINDOW + dx];
                    let (py, px) = (cy + dy - half, cx + dx - half);
                    ma += wgt * a.data()[py * w + px];
                    mb += wgt * b.data()[py * w + px];
                }
            }
            let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
            for dy in 0..SSIM_WINDOW {
                for dx in 0..SSIM_WINDOW {
                    let wgt = win[dy * SSIM_WINDOW + dx];
                    let (py, px) = (cy + dy - half, cx + dx - half);
                    let da = a.data()[py * w + px] - ma;
                    let db = b.data()[py * w + px] - mb;
                    va += wgt * da * da;
                    vb += wgt * db * db;
                    cov += wgt * da * db;
                }
            }
            acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
                / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            count += 1;
        }
    }
    acc / count as f64
}

// --- the sweep ---------------------------------------------------------------

#[test]
fn acceptance_criteria() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig {
        out_dir: tmp.path().join("out"),
        ..Default::default()
    };

    for t in [TaskId::Denoise, TaskId::SuperResolve, TaskId::Deblur] {
        train_model(&cfg, t, false).unwrap();
    }
    train_model(&cfg, TaskId::SuperResolve, true).unwrap();
    let sr = load_model(&cfg, TaskId::SuperResolve).unwrap();
    let adv = load_adversarial_model(&cfg, TaskId::SuperResolve).unwrap();

    let mut verdicts = Vec::new();

    verdicts.push(check_gradients());

    let sweep = check_budgets(&cfg, &sr);
    verdicts.push(check_transforms(sweep.worst_out_of_band));
    verdicts.push(verdict(
        3,
        sweep.violations == 0,
        format!(
            "{} violations across {} attack outcomes (5 methods x 6 budgets x {} images)",
            sweep.violations, sweep.cells, cfg.images
        ),
    ));

    // shared sweep: both baseline attacks at eps 8 and 16 on all models, plus
    // the universal transfer grid, straight through the product pipeline
    cfg.attacks = vec!["random".into(), "ifgsm".into()];
    cfg.epsilons = vec![8.0, 16.0];
    cfg.defenses = Vec::new();
    run_experiment(&cfg).unwrap();
    let results = read_csv(&cfg.out_dir.join("results.csv")).unwrap();
    let grid = read_csv(&cfg.out_dir.join("transfer_grid.csv")).unwrap();

    let base = |attack: &str, model: &str, eps: &str| {
        column_mean(&results, "vi", |r| {
            field(&results, r, "attack") == attack
                && field(&results, r, "model") == model
                && field(&results, r, "epsilon") == eps
                && field(&results, r, "defense") == "none"
        })
        .unwrap()
    };

    // criterion 4
    let rand_vi: Vec<(&str, f64)> = ["denoise", "super_resolve", "deblur"]
        .iter()
        .map(|m| (*m, base("random", m, "8")))
        .collect();
    verdicts.push(verdict(
        4,
        rand_vi.iter().all(|(_, v)| (0.8..=1.3).contains(v)),
        format!(
            "mean VI(random, eps 8): {}",
            rand_vi
                .iter()
                .map(|(m, v)| format!("{m} {v:.3}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));

    // criterion 5
    let ifgsm_den = base("ifgsm", "denoise", "8");
    let ifgsm_sr = base("ifgsm", "super_resolve", "8");
    let ifgsm_deb = base("ifgsm", "deblur", "8");
    let win_rate = |model: &str| {
        let vi_of = |attack: &str| -> Vec<f64> {
            let (ai, mi, ei, di, ii, vi_col) = (
                column_index(&results, "attack").unwrap(),
                column_index(&results, "model").unwrap(),
                column_index(&results, "epsilon").unwrap(),
                column_index(&results, "defense").unwrap(),
                column_index(&results, "image").unwrap(),
                column_index(&results, "vi").unwrap(),
            );
            let mut rows: Vec<(usize, f64)> = results
                .rows
                .iter()
                .filter(|r| r[ai] == attack && r[mi] == model && r[ei] == "8" && r[di] == "none")
                .map(|r| (r[ii].parse().unwrap(), r[vi_col].parse().unwrap()))
                .collect();
            rows.sort_by_key(|&(i, _)| i);
            rows.into_iter().map(|(_, v)| v).collect()
        };
        let (i, r) = (vi_of("ifgsm"), vi_of("random"));
        i.iter().zip(&r).filter(|(a, b)| a > b).count() as f64 / i.len() as f64
    };
    let (wr_sr, wr_deb) = (win_rate("super_resolve"), win_rate("deblur"));
    verdicts.push(verdict(
        5,
        ifgsm_sr > 1.5
            && ifgsm_deb > 1.5
            && ifgsm_den < ifgsm_sr
            && ifgsm_den < ifgsm_deb
            && wr_sr >= 0.9
            && wr_deb >= 0.9,
        format!(
            "mean VI(ifgsm, eps 8): denoise {ifgsm_den:.3} (lowest), super_resolve {ifgsm_sr:.3}, deblur {ifgsm_deb:.3}; per-image wins over random: sr {:.0}%, deblur {:.0}%",
            wr_sr * 100.0,
            wr_deb * 100.0
        ),
    ));

    // criterion 7: the eps-16 slice of the same sweep plus the transfer grid
    let rand16 = base("random", "super_resolve", "16");
    let ifgsm16 = base("ifgsm", "super_resolve", "16");
    let (mut diag, mut off) = (Vec::new(), Vec::new());
    let mut universal_sr = f64::NAN;
    for row in &grid.rows {
        let source = &row[0];
        for (ti, target) in grid.header.iter().enumerate().skip(1) {
            let v: f64 = row[ti].parse().unwrap();
            if source == target {
                diag.push(v);
                if target == "super_resolve" {
                    universal_sr = v;
                }
            } else {
                off.push(v);
            }
        }
    }
    let diag_mean = diag.iter().sum::<f64>() / diag.len() as f64;
    let off_mean = off.iter().sum::<f64>() / off.len() as f64;
    verdicts.push(verdict(
        7,
        rand16 < universal_sr && universal_sr < ifgsm16 && diag_mean >= off_mean,
        format!(
            "sr at eps 16: random {rand16:.3} < universal held-out {universal_sr:.3} < per-image {ifgsm16:.3}; grid diagonal {diag_mean:.3} vs off-diagonal {off_mean:.3}"
        ),
    ));

    // criterion 6: band attacks at r = 1/4
    cfg.tasks = vec![TaskId::SuperResolve, TaskId::Deblur];
    cfg.attacks = vec!["freq_low@1/4".into(), "freq_high@1/4".into()];
    cfg.epsilons = vec![8.0];
    run_experiment(&cfg).unwrap();
    let bands = read_csv(&cfg.out_dir.join("vi_by_band.csv")).unwrap();
    let band = |which: &str, model: &str| {
        column_mean(&bands, "mean_vi", |r| {
            field(&bands, r, "band_ratio") == which && field(&bands, r, "model") == model
        })
        .unwrap()
    };
    let (deb_low, deb_high) = (band("low@1/4", "deblur"), band("high@1/4", "deblur"));
    let (sr_low, sr_high) = (
        band("low@1/4", "super_resolve"),
        band("high@1/4", "super_resolve"),
    );
    verdicts.push(verdict(
        6,
        deb_low > deb_high && sr_high > sr_low,
        format!(
            "deblur low {deb_low:.3} vs high {deb_high:.3}; super_resolve high {sr_high:.3} vs low {sr_low:.3}"
        ),
    ));

    // criterion 8: defense sweep on the super-resolver
    cfg.tasks = vec![TaskId::SuperResolve];
    cfg.attacks = vec!["ifgsm".into()];
    cfg.defenses = vec![
        DefenseId::Jpeg,
        DefenseId::Resize,
        DefenseId::BitReduce,
        DefenseId::SelfEnsemble,
    ];
    run_experiment(&cfg).unwrap();
    let defended = read_csv(&cfg.out_dir.join("vi_by_defense.csv")).unwrap();
    let def = |name: &str, col: &str| {
        column_mean(&defended, col, |r| field(&defended, r, "defense") == name).unwrap()
    };
    let none_vi = def("none", "mean_vi");
    let none_clean = def("none", "mean_clean_psnr");

    // the adversarially trained twin joins the defense table via direct probes
    let pairs = eval_pairs(&cfg, TaskId::SuperResolve, "eval", cfg.images).unwrap();
    let budget = AttackBudget::new(8.0, cfg.iterations).unwrap();
    let mut adv_vi_sum = 0.0;
    let mut adv_clean = 0.0;
    let mut plain_clean_direct = 0.0;
    for (i, (x, target)) in pairs.iter().enumerate() {
        let mut rng = Rng::new(derived_seed(cfg.seed, &["acceptance-adv", &i.to_string()]));
        let out = run_attack(&adv, x, AttackMethod::Ifgsm, &budget, &mut rng).unwrap();
        adv_vi_sum += out.score.vi;
        adv_clean += psnr(target, &clamp_pixels(&adv.forward(x).unwrap())).unwrap();
        plain_clean_direct += psnr(target, &clamp_pixels(&sr.forward(x).unwrap())).unwrap();
    }
    let n = pairs.len() as f64;
    let adv_vi = adv_vi_sum / n;
    let adv_clean = adv_clean / n;
    let plain_clean = plain_clean_direct / n;

    let table: Vec<(&str, f64, f64)> = vec![
        (
            "jpeg",
            def("jpeg", "mean_vi"),
            def("jpeg", "mean_clean_psnr"),
        ),
        (
            "resize",
            def("resize", "mean_vi"),
            def("resize", "mean_clean_psnr"),
        ),
        (
            "bit_reduce",
            def("bit_reduce", "mean_vi"),
            def("bit_reduce", "mean_clean_psnr"),
        ),
        (
            "self_ensemble",
            def("self_ensemble", "mean_vi"),
            def("self_ensemble", "mean_clean_psnr"),
        ),
        ("adversarial_training", adv_vi, adv_clean),
    ];
    let all_lower = table.iter().all(|(_, vi, _)| *vi < none_vi);
    let reduction = |name: &str| none_vi - table.iter().find(|(d, ..)| *d == name).unwrap().1;
    let jpeg_largest_transform =
        reduction("jpeg") > reduction("resize") && reduction("jpeg") > reduction("bit_reduce");
    let self_cost = none_clean - def("self_ensemble", "mean_clean_psnr");
    let self_smallest_cost = table
        .iter()
        .filter(|(d, ..)| *d != "self_ensemble")
        .all(|(_, _, clean)| self_cost < none_clean - clean);
    verdicts.push(verdict(
        8,
        all_lower && jpeg_largest_transform && self_smallest_cost,
        format!(
            "VI vs none {none_vi:.3}: {}; jpeg reduction largest among transforms: {jpeg_largest_transform}; self-ensemble clean cost {self_cost:+.2} dB smallest: {self_smallest_cost}",
            table
                .iter()
                .map(|(d, vi, _)| format!("{d} {vi:.3}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));

    // criterion 9
    verdicts.push(verdict(
        9,
        adv_vi < ifgsm_sr && (adv_clean - plain_clean).abs() < 2.0,
        format!(
            "adversarial twin VI {adv_vi:.3} vs plain {ifgsm_sr:.3}; clean PSNR {adv_clean:.2} vs {plain_clean:.2} dB (gap {:.2})",
            (adv_clean - plain_clean).abs()
        ),
    ));

    verdicts.push(check_determinism(tmp.path()));
    verdicts.push(check_metric_fixtures());

    verdicts.sort_by_key(|v| v.n);
    let mut failed = Vec::new();
    for v in &verdicts {
        println!(
            "criterion {}: {} - {}",
            v.n,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.pass {
            failed.push(v.n);
        }
    }
    assert!(
        failed.is_empty(),
        "acceptance criteria failed: {failed:?} (see verdict lines above)"
    );
}
