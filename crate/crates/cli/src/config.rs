//! Run configuration: command-line flags over an optional TOML file over
//! built-in defaults, validated before anything is computed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use leastgrad_core::barrier::BARRIER_DEPTH_CAP;
use leastgrad_core::solver::{default_band_width, Coupling, MAX_EXPERIMENT_DEPTH, MIN_RESOLUTION};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::number::fmt17;

/// Deepest barrier the renderer draws.
pub const RENDER_DEPTH_CAP: usize = 8;

/// Deepest barrier the geometry suite checks.
pub const VERIFY_DEPTH_CAP: usize = 8;

/// Largest grid the solver accepts.
pub const MAX_RESOLUTION: usize = 8192;

pub const DEFAULT_RESOLUTION: usize = 512;
pub const DEFAULT_ITERS: usize = 20_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Construct,
    Render,
    Verify,
    Solve,
    Experiment,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::Render => "render",
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::Experiment => "experiment",
        }
    }

    fn default_depth(self) -> usize {
        match self {
            Command::Construct | Command::Render => 2,
            Command::Verify => 6,
            Command::Solve => 0,
            Command::Experiment => 4,
        }
    }

    fn depth_range(self) -> (usize, usize) {
        match self {
            Command::Construct => (1, BARRIER_DEPTH_CAP),
            Command::Render => (1, RENDER_DEPTH_CAP),
            Command::Verify => (1, VERIFY_DEPTH_CAP),
            Command::Solve | Command::Experiment => (0, MAX_EXPERIMENT_DEPTH),
        }
    }

    fn default_out(self) -> Option<PathBuf> {
        match self {
            Command::Construct => Some("geometry.json".into()),
            Command::Render => Some("barrier.svg".into()),
            Command::Verify => None,
            Command::Solve => Some("solve.csv".into()),
            Command::Experiment => Some("experiment.csv".into()),
        }
    }

    fn solves(self) -> bool {
        matches!(self, Command::Solve | Command::Experiment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cantor,
    Geometry,
    Lemma31,
    Lemma32,
    Lemma33,
    Chain,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cantor => "cantor",
            Suite::Geometry => "geometry",
            Suite::Lemma31 => "lemma31",
            Suite::Lemma32 => "lemma32",
            Suite::Lemma33 => "lemma33",
            Suite::Chain => "chain",
            Suite::All => "all",
        }
    }

    /// The concrete suites this selector stands for.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Cantor,
                Suite::Geometry,
                Suite::Lemma31,
                Suite::Lemma32,
                Suite::Lemma33,
                Suite::Chain,
            ],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingChoice {
    #[default]
    Circle,
    Band,
}

impl CouplingChoice {
    pub fn name(self) -> &'static str {
        match self {
            CouplingChoice::Circle => "circle",
            CouplingChoice::Band => "band",
        }
    }
}

impl From<CouplingChoice> for Coupling {
    fn from(c: CouplingChoice) -> Self {
        match c {
            CouplingChoice::Circle => Coupling::Circle,
            CouplingChoice::Band => Coupling::Band,
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall through to the config
/// file and then to the defaults.
#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct Flags {
    /// Cantor depth n; the largest n for `experiment`, the geometry depth for `verify`.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Grid cells across the diameter of the disk.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Width of the boundary band, in disk units.
    #[arg(long = "band-width")]
    pub band_width: Option<f64>,
    /// Iteration budget of each solve.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Output file; `verify` prints its report to stdout when unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check suite for `verify`.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Draw W / T_k / Bot labels in `render`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub labels: Option<bool>,
    /// How the solver charges the jump to the boundary trace.
    #[arg(long, value_enum)]
    pub coupling: Option<CouplingChoice>,
    /// Seed of the random trials in `verify`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a config file; the names match the flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub depth: Option<usize>,
    pub resolution: Option<usize>,
    pub band_width: Option<f64>,
    pub iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub suite: Option<Suite>,
    pub labels: Option<bool>,
    pub coupling: Option<CouplingChoice>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// A fully resolved and validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub depth: usize,
    pub resolution: usize,
    pub band_width: f64,
    pub iters: usize,
    pub out: Option<PathBuf>,
    pub suite: Suite,
    pub labels: bool,
    pub coupling: CouplingChoice,
    pub seed: u64,
}

impl RunConfig {
    /// Merges `flags`, the file they name and the defaults, then validates.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::merge(command, flags, &file)
    }

    /// Like [`RunConfig::resolve`] with the file already parsed.
    pub fn merge(command: Command, flags: &Flags, file: &FileConfig) -> Result<Self> {
        reject_foreign_flags(command, flags)?;
        let resolution = flags.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION);
        let config = RunConfig {
            command,
            depth: flags.depth.or(file.depth).unwrap_or(command.default_depth()),
            resolution,
            band_width: flags
                .band_width
                .or(file.band_width)
                .unwrap_or_else(|| default_band_width(resolution)),
            iters: flags.iters.or(file.iters).unwrap_or(DEFAULT_ITERS),
            out: flags.out.clone().or_else(|| file.out.clone()).or(command.default_out()),
            suite: flags.suite.or(file.suite).unwrap_or(Suite::All),
            labels: flags.labels.or(file.labels).unwrap_or(false),
            coupling: flags.coupling.or(file.coupling).unwrap_or_default(),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.command.depth_range();
        if self.depth < lo || self.depth > hi {
            return Err(CliError::usage(format!(
                "{}: --depth must lie in {lo}..={hi}, got {}",
                self.command.name(),
                self.depth
            )));
        }
        if self.command.solves() {
            if self.resolution < MIN_RESOLUTION || self.resolution > MAX_RESOLUTION {
                return Err(CliError::usage(format!(
                    "--resolution must lie in {MIN_RESOLUTION}..={MAX_RESOLUTION}, got {}",
                    self.resolution
                )));
            }
            let min_band = 2.0 / self.resolution as f64;
            if !(self.band_width >= min_band && self.band_width <= 0.5) {
                return Err(CliError::usage(format!(
                    "--band-width must lie in [2/resolution, 0.5] = [{min_band}, 0.5], got {}",
                    self.band_width
                )));
            }
            if self.iters == 0 {
                return Err(CliError::usage("--iters must be at least 1"));
            }
        }
        Ok(())
    }

    /// One line naming every setting that shapes the output; written into
    /// each output header.
    pub fn provenance(&self) -> String {
        let mut line = format!(
            "leastgrad {} {} --depth {}",
            env!("CARGO_PKG_VERSION"),
            self.command.name(),
            self.depth
        );
        match self.command {
            Command::Construct => {}
            Command::Render => {
                let _ = write!(line, " --labels {}", self.labels);
            }
            Command::Verify => {
                let _ = write!(line, " --suite {} --seed {}", self.suite.name(), self.seed);
            }
            Command::Solve | Command::Experiment => {
                let _ = write!(
                    line,
                    " --resolution {} --band-width {} --iters {} --coupling {}",
                    self.resolution,
                    fmt17(self.band_width),
                    self.iters,
                    self.coupling.name()
                );
            }
        }
        line
    }
}

fn reject_foreign_flags(command: Command, flags: &Flags) -> Result<()> {
    let solves = command.solves();
    let foreign = [
        (flags.resolution.is_some() && !solves, "--resolution"),
        (flags.band_width.is_some() && !solves, "--band-width"),
        (flags.iters.is_some() && !solves, "--iters"),
        (flags.coupling.is_some() && !solves, "--coupling"),
        (flags.suite.is_some() && command != Command::Verify, "--suite"),
        (flags.seed.is_some() && command != Command::Verify, "--seed"),
        (flags.labels.is_some() && command != Command::Render, "--labels"),
    ];
    match foreign.iter().find(|(set, _)| *set) {
        Some((_, flag)) => Err(CliError::usage(format!("{flag} does not apply to {}", command.name()))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = FileConfig::parse("depth = 3\nresolution = 128\niters = 50\n").unwrap();
        let flags = Flags {
            depth: Some(1),
            ..Flags::default()
        };
        let c = RunConfig::merge(Command::Solve, &flags, &file).unwrap();
        assert_eq!((c.depth, c.resolution, c.iters), (1, 128, 50));
        assert_eq!(c.band_width, default_band_width(128));
        assert_eq!(c.out, Some(PathBuf::from("solve.csv")));
        let d = RunConfig::merge(Command::Solve, &Flags::default(), &FileConfig::default()).unwrap();
        assert_eq!((d.depth, d.resolution, d.iters), (0, DEFAULT_RESOLUTION, DEFAULT_ITERS));
    }

    #[test]
    fn out_of_range_settings_are_usage_errors() {
        let none = FileConfig::default();
        let with = |f: Flags, c: Command| RunConfig::merge(c, &f, &none).map_err(|e| e.exit_code());
        assert_eq!(
            with(
                Flags {
                    depth: Some(0),
                    ..Flags::default()
                },
                Command::Construct
            ),
            Err(2)
        );
        assert_eq!(
            with(
                Flags {
                    depth: Some(13),
                    ..Flags::default()
                },
                Command::Construct
            ),
            Err(2)
        );
        assert_eq!(
            with(
                Flags {
                    depth: Some(9),
                    ..Flags::default()
                },
                Command::Render
            ),
            Err(2)
        );
        assert_eq!(
            with(
                Flags {
                    depth: Some(7),
                    ..Flags::default()
                },
                Command::Experiment
            ),
            Err(2)
        );
        assert_eq!(
            with(
                Flags {
                    resolution: Some(32),
                    ..Flags::default()
                },
                Command::Solve
            ),
            Err(2)
        );
        assert_eq!(
            with(
                Flags {
                    iters: Some(0),
                    ..Flags::default()
                },
                Command::Solve
            ),
            Err(2)
        );
        let narrow = Flags {
            resolution: Some(64),
            band_width: Some(0.01),
            ..Flags::default()
        };
        assert_eq!(with(narrow, Command::Solve), Err(2));
        let nan = Flags {
            band_width: Some(f64::NAN),
            ..Flags::default()
        };
        assert_eq!(with(nan, Command::Solve), Err(2));
        assert_eq!(
            with(
                Flags {
                    suite: Some(Suite::Cantor),
                    ..Flags::default()
                },
                Command::Solve
            ),
            Err(2)
        );
        assert!(with(
            Flags {
                depth: Some(12),
                ..Flags::default()
            },
            Command::Construct
        )
        .is_ok());
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        assert!(FileConfig::parse("depht = 3\n").is_err());
        let f = FileConfig::parse("suite = \"lemma33\"\ncoupling = \"band\"\nlabels = true\n").unwrap();
        assert_eq!(f.suite, Some(Suite::Lemma33));
        assert_eq!(f.coupling, Some(CouplingChoice::Band));
        assert_eq!(f.labels, Some(true));
    }

    #[test]
    fn provenance_leaves_out_the_output_path() {
        let a = Flags {
            depth: Some(2),
            resolution: Some(64),
            out: Some("a.csv".into()),
            ..Flags::default()
        };
        let b = Flags {
            out: Some("b.csv".into()),
            ..a.clone()
        };
        let none = FileConfig::default();
        let pa = RunConfig::merge(Command::Experiment, &a, &none).unwrap().provenance();
        let pb = RunConfig::merge(Command::Experiment, &b, &none).unwrap().provenance();
        assert_eq!(pa, pb);
        assert!(pa.contains("--resolution 64 --band-width 6.2500000000000000e-2"));
    }
}
