//! Experiment configuration: a flat `key = value` file, comma-separated
//! lists, `#` comments. Every run embeds the config's canonical hash in its
//! output headers so results can be traced back to exact settings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use i2i_core::attacks::AttackMethod;
use i2i_core::defenses::Defense;
use i2i_core::frequency::Band;
use i2i_core::models::Task;
use i2i_core::{Error, Result};

use crate::fnv1a;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskId {
    Denoise,
    SuperResolve,
    Deblur,
}

impl TaskId {
    pub fn label(&self) -> &'static str {
        match self {
            TaskId::Denoise => "denoise",
            TaskId::SuperResolve => "super_resolve",
            TaskId::Deblur => "deblur",
        }
    }

    pub fn parse(s: &str) -> Result<TaskId> {
        match s {
            "denoise" => Ok(TaskId::Denoise),
            "super_resolve" => Ok(TaskId::SuperResolve),
            "deblur" => Ok(TaskId::Deblur),
            _ => Err(Error::InvalidArgument(format!(
                "unknown task '{s}' (expected denoise, super_resolve, or deblur)"
            ))),
        }
    }

    pub fn task(&self) -> Task {
        match self {
            TaskId::Denoise => Task::denoise_default(),
            TaskId::SuperResolve => Task::super_resolve_default(),
            TaskId::Deblur => Task::deblur_default(),
        }
    }
}

/// A band ratio with the spelling it had in the config, kept for stable
/// attack labels ("freq_low@1/8" rather than "freq_low@0.125").
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSpec {
    pub label: String,
    pub value: f64,
}

impl RatioSpec {
    pub fn parse(s: &str) -> Result<RatioSpec> {
        let value = if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad ratio '{s}'")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad ratio '{s}'")))?;
            if d == 0.0 {
                return Err(Error::InvalidArgument(format!("bad ratio '{s}'")));
            }
            n / d
        } else {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad ratio '{s}'")))?
        };
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "ratio '{s}' must lie in (0, 1]"
            )));
        }
        Ok(RatioSpec {
            label: s.trim().to_string(),
            value,
        })
    }
}

/// One fully specified attack cell of the sweep grid.
#[derive(Debug, Clone)]
pub struct AttackInstance {
    pub label: String,
    pub method: AttackMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefenseId {
    Jpeg,
    Resize,
    BitReduce,
    SelfEnsemble,
}

impl DefenseId {
    pub fn label(&self) -> &'static str {
        match self {
            DefenseId::Jpeg => "jpeg",
            DefenseId::Resize => "resize",
            DefenseId::BitReduce => "bit_reduce",
            DefenseId::SelfEnsemble => "self_ensemble",
        }
    }

    pub fn parse(s: &str) -> Result<DefenseId> {
        match s {
            "jpeg" => Ok(DefenseId::Jpeg),
            "resize" => Ok(DefenseId::Resize),
            "bit_reduce" => Ok(DefenseId::BitReduce),
            "self_ensemble" => Ok(DefenseId::SelfEnsemble),
            _ => Err(Error::InvalidArgument(format!(
                "unknown defense '{s}' (expected jpeg, resize, bit_reduce, or self_ensemble)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub tasks: Vec<TaskId>,
    pub depth: usize,
    pub width: usize,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub iterations: usize,
    pub ratios: Vec<RatioSpec>,
    pub attacks: Vec<String>,
    pub defenses: Vec<DefenseId>,
    pub images: usize,
    pub patch: usize,
    pub train_count: usize,
    pub train_epochs_denoise: usize,
    pub train_epochs_super_resolve: usize,
    pub train_epochs_deblur: usize,
    pub train_batch: usize,
    pub universal_epsilon: f64,
    pub jpeg_quality: u8,
    pub resize_lo: f64,
    pub resize_hi: f64,
    pub bits: u32,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            tasks: vec![TaskId::Denoise, TaskId::SuperResolve, TaskId::Deblur],
            depth: 4,
            width: 8,
            seed: 1,
            epsilons: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            iterations: 50,
            ratios: ["1/8", "2/8", "3/8", "4/8"]
                .iter()
                .map(|s| RatioSpec::parse(s).unwrap())
                .collect(),
            attacks: ["random", "ifgsm", "fda", "freq_low", "freq_high"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            defenses: vec![
                DefenseId::Jpeg,
                DefenseId::Resize,
                DefenseId::BitReduce,
                DefenseId::SelfEnsemble,
            ],
            images: 50,
            patch: 48,
            train_count: 600,
            // Per-task epoch counts: each task converges at its own rate, and
            // the attack amplification it exhibits depends on how far its
            // restoration quality has come. These lengths put every model in
            // its characteristic regime without overfitting the denoiser.
            train_epochs_denoise: 8,
            train_epochs_super_resolve: 12,
            train_epochs_deblur: 30,
            train_batch: 16,
            universal_epsilon: 16.0,
            jpeg_quality: 75,
            resize_lo: 0.8,
            resize_hi: 1.2,
            bits: 5,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(value: &str, f: F) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(f)
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value '{value}' for {key}")))
}

impl ExperimentConfig {
    /// Parses flat `key = value` text over the defaults. Unknown keys are
    /// errors so typos cannot silently fall back to defaults.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        let mut seen: HashMap<String, u32> = HashMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("line {}: expected 'key = value'", ln + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            *seen.entry(key.to_string()).or_insert(0) += 1;
            cfg.apply(key, value)
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", ln + 1)))?;
        }
        if let Some((key, _)) = seen.iter().find(|(_, &n)| n > 1) {
            return Err(Error::InvalidArgument(format!(
                "duplicate config key '{key}'"
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::parse(&text)
    }

    /// Applies one key. Used by both the file parser and CLI flag overrides.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "tasks" => self.tasks = parse_list(value, TaskId::parse)?,
            "depth" => self.depth = parse_num(key, value)?,
            "width" => self.width = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "epsilons" => self.epsilons = parse_list(value, |s| parse_num("epsilons", s))?,
            "iterations" => self.iterations = parse_num(key, value)?,
            "ratios" => self.ratios = parse_list(value, RatioSpec::parse)?,
            "attacks" => {
                self.attacks = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            "defenses" => self.defenses = parse_list(value, DefenseId::parse)?,
            "images" => self.images = parse_num(key, value)?,
            "patch" => self.patch = parse_num(key, value)?,
            "train_count" => self.train_count = parse_num(key, value)?,
            "train_epochs_denoise" => self.train_epochs_denoise = parse_num(key, value)?,
            "train_epochs_super_resolve" => {
                self.train_epochs_super_resolve = parse_num(key, value)?
            }
            "train_epochs_deblur" => self.train_epochs_deblur = parse_num(key, value)?,
            "train_batch" => self.train_batch = parse_num(key, value)?,
            "universal_epsilon" => self.universal_epsilon = parse_num(key, value)?,
            "jpeg_quality" => self.jpeg_quality = parse_num(key, value)?,
            "resize_lo" => self.resize_lo = parse_num(key, value)?,
            "resize_hi" => self.resize_hi = parse_num(key, value)?,
            "bits" => self.bits = parse_num(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown config key '{key}'"
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.tasks.is_empty() {
            return Err(Error::InvalidArgument("tasks list is empty".into()));
        }
        if self.depth < 2 || self.width < 4 {
            return Err(Error::InvalidArgument(format!(
                "model needs depth >= 2 and width >= 4, got {}x{}",
                self.depth, self.width
            )));
        }
        if self.epsilons.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
            return Err(Error::InvalidArgument(
                "epsilons must be positive and finite".into(),
            ));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be nonzero".into()));
        }
        if self.images == 0 || self.train_count == 0 {
            return Err(Error::InvalidArgument(
                "image counts must be nonzero".into(),
            ));
        }
        if self.patch < 16 || !self.patch.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "patch size must be even and at least 16, got {}",
                self.patch
            )));
        }
        if self.train_epochs_denoise == 0
            || self.train_epochs_super_resolve == 0
            || self.train_epochs_deblur == 0
            || self.train_batch == 0
        {
            return Err(Error::InvalidArgument(
                "epoch counts and train_batch must be nonzero".into(),
            ));
        }
        if self.universal_epsilon <= 0.0 || !self.universal_epsilon.is_finite() {
            return Err(Error::InvalidArgument(
                "universal_epsilon must be positive and finite".into(),
            ));
        }
        if !(1..=100).contains(&self.jpeg_quality) {
            return Err(Error::InvalidArgument(format!(
                "jpeg_quality must be 1..=100, got {}",
                self.jpeg_quality
            )));
        }
        if !(1..=7).contains(&self.bits) {
            return Err(Error::InvalidArgument(format!(
                "bits must be 1..=7, got {}",
                self.bits
            )));
        }
        if !(0.5..=1.5).contains(&self.resize_lo)
            || !(0.5..=1.5).contains(&self.resize_hi)
            || self.resize_lo > self.resize_hi
        {
            return Err(Error::InvalidArgument(format!(
                "resize range [{}, {}] must sit inside [0.5, 1.5]",
                self.resize_lo, self.resize_hi
            )));
        }
        self.attack_instances()?;
        Ok(())
    }

    /// Expands the attack list into concrete grid cells: bare `freq_low` /
    /// `freq_high` fan out over the ratio list, `freq_low@1/4` stays single.
    pub fn attack_instances(&self) -> Result<Vec<AttackInstance>> {
        let mut out = Vec::new();
        for id in &self.attacks {
            match id.as_str() {
                "random" => out.push(AttackInstance {
                    label: id.clone(),
                    method: AttackMethod::RandomUniform,
                }),
                "ifgsm" => out.push(AttackInstance {
                    label: id.clone(),
                    method: AttackMethod::Ifgsm,
                }),
                "fda" => out.push(AttackInstance {
                    label: id.clone(),
                    method: AttackMethod::Fda,
                }),
                other => {
                    let (base, band) = if let Some(rest) = other.strip_prefix("freq_low") {
                        (rest, Band::Low)
                    } else if let Some(rest) = other.strip_prefix("freq_high") {
                        (rest, Band::High)
                    } else {
                        return Err(Error::InvalidArgument(format!(
                            "unknown attack '{other}' (expected random, ifgsm, fda, freq_low[@r], freq_high[@r])"
                        )));
                    };
                    let band_name = match band {
                        Band::Low => "freq_low",
                        Band::High => "freq_high",
                    };
                    if base.is_empty() {
                        for r in &self.ratios {
                            out.push(AttackInstance {
                                label: format!("{band_name}@{}", r.label),
                                method: AttackMethod::Frequency {
                                    band,
                                    ratio: r.value,
                                },
                            });
                        }
                    } else if let Some(spec) = base.strip_prefix('@') {
                        let r = RatioSpec::parse(spec)?;
                        out.push(AttackInstance {
                            label: format!("{band_name}@{}", r.label),
                            method: AttackMethod::Frequency {
                                band,
                                ratio: r.value,
                            },
                        });
                    } else {
                        return Err(Error::InvalidArgument(format!("unknown attack '{other}'")));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn train_epochs_for(&self, task: TaskId) -> usize {
        match task {
            TaskId::Denoise => self.train_epochs_denoise,
            TaskId::SuperResolve => self.train_epochs_super_resolve,
            TaskId::Deblur => self.train_epochs_deblur,
        }
    }

    pub fn defense(&self, id: DefenseId) -> Defense {
        match id {
            DefenseId::Jpeg => Defense::Jpeg {
                quality: self.jpeg_quality,
            },
            DefenseId::Resize => Defense::RandomResize {
                lo: self.resize_lo,
                hi: self.resize_hi,
            },
            DefenseId::BitReduce => Defense::BitReduce { bits: self.bits },
            DefenseId::SelfEnsemble => Defense::SelfEnsemble,
        }
    }

    /// Canonical serialization: fixed key order, one `key = value` per line.
    /// The config hash is the FNV-1a of this text, so semantically equal
    /// configs hash equal regardless of source formatting.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let join = |items: Vec<String>| items.join(",");
        let _ = writeln!(
            s,
            "tasks = {}",
            join(self.tasks.iter().map(|t| t.label().to_string()).collect())
        );
        let _ = writeln!(s, "depth = {}", self.depth);
        let _ = writeln!(s, "width = {}", self.width);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(
            s,
            "epsilons = {}",
            join(self.epsilons.iter().map(|e| format!("{e}")).collect())
        );
        let _ = writeln!(s, "iterations = {}", self.iterations);
        let _ = writeln!(
            s,
            "ratios = {}",
            join(self.ratios.iter().map(|r| r.label.clone()).collect())
        );
        let _ = writeln!(s, "attacks = {}", join(self.attacks.clone()));
        let _ = writeln!(
            s,
            "defenses = {}",
            join(
                self.defenses
                    .iter()
                    .map(|d| d.label().to_string())
                    .collect()
            )
        );
        let _ = writeln!(s, "images = {}", self.images);
        let _ = writeln!(s, "patch = {}", self.patch);
        let _ = writeln!(s, "train_count = {}", self.train_count);
        let _ = writeln!(s, "train_epochs_denoise = {}", self.train_epochs_denoise);
        let _ = writeln!(
            s,
            "train_epochs_super_resolve = {}",
            self.train_epochs_super_resolve
        );
        let _ = writeln!(s, "train_epochs_deblur = {}", self.train_epochs_deblur);
        let _ = writeln!(s, "train_batch = {}", self.train_batch);
        let _ = writeln!(s, "universal_epsilon = {}", self.universal_epsilon);
        let _ = writeln!(s, "jpeg_quality = {}", self.jpeg_quality);
        let _ = writeln!(s, "resize_lo = {}", self.resize_lo);
        let _ = writeln!(s, "resize_hi = {}", self.resize_hi);
        let _ = writeln!(s, "bits = {}", self.bits);
        s
    }

    /// 16-hex-digit fingerprint of the canonical text. out_dir is excluded:
    /// the same experiment written elsewhere is still the same experiment.
    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a(self.canonical_text().as_bytes()))
    }
}
