use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::adapt::AdaptParams;
use crate::error::{invalid, Error, Result};
use crate::fem::MmsProblem;
use crate::mesh::{load_mesh, SimplicialMesh};
use crate::transient::NormalizationParams;

/// Where the first fixed-point iteration gets its mesh from.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialMesh {
    /// `nx × ny` cells on the problem domain.
    Uniform { nx: usize, ny: usize },
    File(PathBuf),
}

/// Parameters of one global fixed-point run.
///
/// Every field can be set from a flat `key = value` file or from
/// `--key value` flags; dashes and underscores in keys are interchangeable.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointConfig {
    pub n_i: usize,
    pub n_t: usize,
    pub n_avg: f64,
    pub n_fp: usize,
    pub p: f64,
    /// Gradation bound; `None` disables gradation.
    pub beta: Option<f64>,
    /// Size clamps; `None` picks `diameter/1e5` and `diameter/2`.
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
    /// Restart every interval from the exact solution instead of transferring.
    pub cancel_transfer_error: bool,
    pub seed: u64,
    pub initial_mesh: InitialMesh,
    pub problem: MmsProblem,
    pub max_passes: usize,
    pub output: Option<PathBuf>,
    /// Write SVG snapshots of every adapted mesh (needs `output`).
    pub svg: bool,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            n_i: 4,
            n_t: 20,
            n_avg: 4000.0,
            n_fp: 5,
            p: 2.0,
            beta: Some(1.8),
            h_min: None,
            h_max: None,
            cancel_transfer_error: false,
            seed: 0,
            initial_mesh: InitialMesh::Uniform { nx: 40, ny: 20 },
            problem: MmsProblem::default(),
            max_passes: AdaptParams::default().max_passes,
            output: None,
            svg: true,
        }
    }
}

/// Keys accepted by [`FixedPointConfig::set`].
pub const CONFIG_KEYS: &[&str] = &[
    "n_i",
    "n_t",
    "n_avg",
    "n_fp",
    "p",
    "beta",
    "h_min",
    "h_max",
    "cancel_transfer_error",
    "seed",
    "init_nx",
    "init_ny",
    "init_mesh",
    "c",
    "delta",
    "t_final",
    "max_passes",
    "output",
    "svg",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value for {key}: {value:?}")))
}

fn parse_opt(key: &str, value: &str) -> Result<Option<f64>> {
    match value {
        "none" | "auto" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl FixedPointConfig {
    /// Sets one field from its textual key and value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "n_i" => self.n_i = parse(&key, value)?,
            "n_t" => self.n_t = parse(&key, value)?,
            "n_avg" => self.n_avg = parse(&key, value)?,
            "n_fp" => self.n_fp = parse(&key, value)?,
            "p" => self.p = parse(&key, value)?,
            "beta" => self.beta = parse_opt(&key, value)?,
            "h_min" => self.h_min = parse_opt(&key, value)?,
            "h_max" => self.h_max = parse_opt(&key, value)?,
            "cancel_transfer_error" => self.cancel_transfer_error = parse(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "init_nx" | "init_ny" => {
                let n: usize = parse(&key, value)?;
                let (mut nx, mut ny) = match self.initial_mesh {
                    InitialMesh::Uniform { nx, ny } => (nx, ny),
                    InitialMesh::File(_) => (40, 20),
                };
                if key == "init_nx" {
                    nx = n;
                } else {
                    ny = n;
                }
                self.initial_mesh = InitialMesh::Uniform { nx, ny };
            }
            "init_mesh" => self.initial_mesh = InitialMesh::File(PathBuf::from(value)),
            "c" => self.problem.c = parse(&key, value)?,
            "delta" => self.problem.delta = parse(&key, value)?,
            "t_final" => self.problem.t_final = parse(&key, value)?,
            "max_passes" => self.max_passes = parse(&key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "svg" => self.svg = parse(&key, value)?,
            _ => return invalid(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    /// Applies a `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, path: impl AsRef<Path>) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { path: path.as_ref().to_path_buf(), line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            self.set(k, v).map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// The config as `key = value` lines that [`FixedPointConfig::apply_text`]
    /// reads back.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("none".to_string(), |x| x.to_string());
        let mut s = String::new();
        let _ = writeln!(s, "n_i = {}", self.n_i);
        let _ = writeln!(s, "n_t = {}", self.n_t);
        let _ = writeln!(s, "n_avg = {}", self.n_avg);
        let _ = writeln!(s, "n_fp = {}", self.n_fp);
        let _ = writeln!(s, "p = {}", self.p);
        let _ = writeln!(s, "beta = {}", opt(self.beta));
        let _ = writeln!(s, "h_min = {}", opt(self.h_min));
        let _ = writeln!(s, "h_max = {}", opt(self.h_max));
        let _ = writeln!(s, "cancel_transfer_error = {}", self.cancel_transfer_error);
        let _ = writeln!(s, "seed = {}", self.seed);
        match &self.initial_mesh {
            InitialMesh::Uniform { nx, ny } => {
                let _ = writeln!(s, "init_nx = {nx}\ninit_ny = {ny}");
            }
            InitialMesh::File(p) => {
                let _ = writeln!(s, "init_mesh = {}", p.display());
            }
        }
        let _ = writeln!(s, "c = {}", self.problem.c);
        let _ = writeln!(s, "delta = {}", self.problem.delta);
        let _ = writeln!(s, "t_final = {}", self.problem.t_final);
        let _ = writeln!(s, "max_passes = {}", self.max_passes);
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output = {}", o.display());
        }
        let _ = writeln!(s, "svg = {}", self.svg);
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_i < 1 || self.n_t < 1 || self.n_fp < 1 {
            return invalid(format!(
                "need n_I, n_T, n_fp ≥ 1, got {}, {}, {}",
                self.n_i, self.n_t, self.n_fp
            ));
        }
        if !(self.n_avg > 0.0 && self.n_avg.is_finite()) {
            return invalid(format!("N_avg must be positive, got {}", self.n_avg));
        }
        if let InitialMesh::Uniform { nx, ny } = self.initial_mesh {
            if nx == 0 || ny == 0 {
                return invalid("initial mesh needs nx, ny ≥ 1");
            }
        }
        MmsProblem::new(self.problem.c, self.problem.delta, self.problem.t_final)?;
        self.adapt_params().validate()?;
        self.normalization(1.0).validate()
    }

    /// Constant time step `T/(n_I n_T)`.
    pub fn dt(&self) -> f64 {
        self.problem.t_final / (self.n_i * self.n_t) as f64
    }

    /// Start time of interval `i` (and end time of interval `i − 1`).
    pub fn interval_start(&self, i: usize) -> f64 {
        self.problem.t_final * i as f64 / self.n_i as f64
    }

    pub fn initial_mesh(&self) -> Result<SimplicialMesh> {
        match &self.initial_mesh {
            InitialMesh::Uniform { nx, ny } => SimplicialMesh::structured_rect(*nx, *ny, MmsProblem::DOMAIN),
            InitialMesh::File(p) => load_mesh(p),
        }
    }

    pub fn normalization(&self, diameter: f64) -> NormalizationParams {
        let mut np = NormalizationParams::new(self.n_avg, self.n_i, self.n_t, diameter);
        np.p = self.p;
        np.beta = self.beta;
        np.seed = self.seed;
        let (lo, hi) = np.clamp.unwrap_or((diameter / 1e5, diameter / 2.0));
        np.clamp = Some((self.h_min.unwrap_or(lo), self.h_max.unwrap_or(hi)));
        np
    }

    pub fn adapt_params(&self) -> AdaptParams {
        AdaptParams { max_passes: self.max_passes, seed: self.seed, ..AdaptParams::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut cfg = FixedPointConfig::default();
        cfg.set("n-i", "8").unwrap();
        cfg.set("beta", "none").unwrap();
        cfg.set("init_nx", "12").unwrap();
        cfg.set("output", "/tmp/x").unwrap();
        let mut back = FixedPointConfig::default();
        back.apply_text(&cfg.to_text(), "cfg").unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.initial_mesh, InitialMesh::Uniform { nx: 12, ny: 20 });
    }

    #[test]
    fn comments_blank_lines_and_errors() {
        let mut cfg = FixedPointConfig::default();
        cfg.apply_text("# header\n\nn_t = 2  # steps\nn_avg=1000\n", "cfg").unwrap();
        assert_eq!((cfg.n_t, cfg.n_avg), (2, 1000.0));
        assert!((cfg.dt() - 1.0 / 8.0).abs() < 1e-15);
        match cfg.apply_text("n_t = 2\nbogus = 1\n", "cfg") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(cfg.apply_text("n_t 2\n", "cfg").is_err());
        assert!(cfg.set("n_t", "two").is_err());
    }

    #[test]
    fn validation() {
        assert!(FixedPointConfig::default().validate().is_ok());
        for (k, v) in [("n_i", "0"), ("n_fp", "0"), ("n_avg", "-1"), ("delta", "0"), ("beta", "1"), ("init_nx", "0")] {
            let mut cfg = FixedPointConfig::default();
            cfg.set(k, v).unwrap();
            assert!(cfg.validate().is_err(), "{k} = {v}");
        }
    }

    #[test]
    fn every_key_is_settable() {
        let samples = [
            ("n_i", "2"),
            ("n_t", "3"),
            ("n_avg", "10"),
            ("n_fp", "1"),
            ("p", "4"),
            ("beta", "1.5"),
            ("h_min", "0.001"),
            ("h_max", "1"),
            ("cancel_transfer_error", "true"),
            ("seed", "9"),
            ("init_nx", "4"),
            ("init_ny", "4"),
            ("init_mesh", "m.mesh"),
            ("c", "0.5"),
            ("delta", "0.1"),
            ("t_final", "2"),
            ("max_passes", "3"),
            ("output", "out"),
            ("svg", "false"),
        ];
        assert_eq!(samples.len(), CONFIG_KEYS.len());
        let mut cfg = FixedPointConfig::default();
        for (k, v) in samples {
            assert!(CONFIG_KEYS.contains(&k));
            cfg.set(k, v).unwrap();
        }
        assert_eq!(cfg.initial_mesh, InitialMesh::File("m.mesh".into()));
    }
}
