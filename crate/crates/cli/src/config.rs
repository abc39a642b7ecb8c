//! Run configuration: parsing of flag values and `key=value` config files.
//!
//! Precedence is flag, then config file, then built-in default.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thermoqubit::observables::GridSpec;
use thermoqubit::thermal::CUTOFF_CAP;
use thermoqubit::{PhysicalAmplitudes, ThermalParams, Truncation, DEFAULT_TAIL_TOL};

use crate::CliError;

/// Off-norm beyond which input amplitudes are normalized with a warning.
pub const NORMALIZE_WARN_TOL: f64 = 1e-6;

pub const CONFIG_KEYS: [&str; 8] = [
    "amps",
    "nbar-range",
    "nbar",
    "cutoff",
    "tail-tol",
    "grid",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffChoice {
    Auto,
    Fixed(usize),
}

/// Inclusive, evenly spaced `n̄` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NBarRange {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl NBarRange {
    pub fn values(&self) -> Vec<f64> {
        let span = self.end - self.start;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.end
                } else {
                    self.start + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Raw string settings, keyed as on the command line without the leading dashes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSettings(pub BTreeMap<String, String>);

impl RawSettings {
    pub fn parse_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(Self(map))
    }

    /// Entries of `over` replace entries of `self`.
    pub fn overlay(mut self, over: RawSettings) -> Self {
        self.0.extend(over.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }
}

/// Fully parsed settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub amps: PhysicalAmplitudes,
    /// Squared norm of the amplitudes as given, before normalization.
    pub input_norm_sqr: f64,
    pub n_bar_range: NBarRange,
    pub n_bar: Option<f64>,
    pub cutoff: CutoffChoice,
    pub tail_tol: f64,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            amps: PhysicalAmplitudes::showcase(),
            input_norm_sqr: 1.0,
            n_bar_range: NBarRange {
                start: 0.0,
                end: 2.0,
                steps: 50,
            },
            n_bar: None,
            cutoff: CutoffChoice::Auto,
            tail_tol: DEFAULT_TAIL_TOL,
            grid: GridSpec::default(),
            out: None,
            format: Format::Csv,
        }
    }
}

impl SweepConfig {
    pub fn from_settings(raw: &RawSettings) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(s) = raw.get("amps") {
            let (amps, norm_sqr) = parse_amps(s)?;
            cfg.amps = amps;
            cfg.input_norm_sqr = norm_sqr;
        }
        if let Some(s) = raw.get("nbar-range") {
            cfg.n_bar_range = parse_nbar_range(s)?;
        }
        if let Some(s) = raw.get("nbar") {
            cfg.n_bar = Some(parse_nbar(s)?);
        }
        if let Some(s) = raw.get("cutoff") {
            cfg.cutoff = parse_cutoff(s)?;
        }
        if let Some(s) = raw.get("tail-tol") {
            cfg.tail_tol = parse_f64("tail-tol", s)?;
            if !(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0) {
                return Err(CliError::Config(format!(
                    "tail-tol must lie in (0, 1), got {s}"
                )));
            }
        }
        if let Some(s) = raw.get("grid") {
            cfg.grid = parse_grid(s)?;
        }
        if let Some(s) = raw.get("out") {
            cfg.out = Some(PathBuf::from(s));
        }
        if let Some(s) = raw.get("format") {
            cfg.format = match s {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => {
                    return Err(CliError::Config(format!(
                        "format must be csv or json, got `{other}`"
                    )))
                }
            };
        }
        Ok(cfg)
    }

    pub fn needs_normalize_warning(&self) -> bool {
        (self.input_norm_sqr - 1.0).abs() > NORMALIZE_WARN_TOL
    }

    pub fn truncation(&self, params: &ThermalParams) -> Result<Truncation, CliError> {
        Ok(match self.cutoff {
            CutoffChoice::Auto => Truncation::auto(params, self.tail_tol)?,
            CutoffChoice::Fixed(n) => Truncation::new(n, self.tail_tol)?,
        })
    }
}

fn parse_f64(what: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{what}: cannot parse `{s}` as a number")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

fn parse_nbar(s: &str) -> Result<f64, CliError> {
    let v = parse_f64("nbar", s)?;
    if v < 0.0 {
        return Err(CliError::Config(format!(
            "nbar must be non-negative, got {s}"
        )));
    }
    Ok(v)
}

/// Four reals `x,y,z,w`, or eight numbers read as `re,im` pairs.
pub fn parse_amps(s: &str) -> Result<(PhysicalAmplitudes, f64), CliError> {
    let values = s
        .split(',')
        .map(|v| parse_f64("amps", v))
        .collect::<Result<Vec<_>, _>>()?;
    let amps: Vec<Complex64> = match values.len() {
        4 => values.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
        8 => values
            .chunks(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect(),
        n => {
            return Err(CliError::Config(format!(
                "amps needs 4 reals or 8 re,im values, got {n}"
            )))
        }
    };
    let (normalized, norm_sqr) =
        PhysicalAmplitudes::normalized(amps[0], amps[1], amps[2], amps[3])?;
    Ok((normalized, norm_sqr))
}

pub fn parse_nbar_range(s: &str) -> Result<NBarRange, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "nbar-range must be start:end:steps, got `{s}`"
        )));
    }
    let start = parse_f64("nbar-range start", parts[0])?;
    let end = parse_f64("nbar-range end", parts[1])?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("nbar-range steps: cannot parse `{}`", parts[2])))?;
    if start < 0.0 || end < 0.0 {
        return Err(CliError::Config(
            "nbar-range bounds must be non-negative".into(),
        ));
    }
    if steps < 2 {
        return Err(CliError::Config("nbar-range needs at least 2 steps".into()));
    }
    if end <= start {
        return Err(CliError::Config("nbar-range end must exceed start".into()));
    }
    Ok(NBarRange { start, end, steps })
}

pub fn parse_cutoff(s: &str) -> Result<CutoffChoice, CliError> {
    if s.trim() == "auto" {
        return Ok(CutoffChoice::Auto);
    }
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cutoff must be an integer or `auto`, got `{s}`")))?;
    if n > CUTOFF_CAP {
        return Err(CliError::Config(format!(
            "cutoff {n} exceeds the cap of {CUTOFF_CAP}"
        )));
    }
    Ok(CutoffChoice::Fixed(n))
}

/// `qmin:qmax:nq,pmin:pmax:np`.
pub fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        return Err(CliError::Config(format!(
            "grid must be qmin:qmax:nq,pmin:pmax:np, got `{s}`"
        )));
    }
    let axis = |a: &str| -> Result<(f64, f64, usize), CliError> {
        let p: Vec<&str> = a.split(':').collect();
        if p.len() != 3 {
            return Err(CliError::Config(format!(
                "grid axis must be min:max:n, got `{a}`"
            )));
        }
        let n = p[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("grid points: cannot parse `{}`", p[2])))?;
        Ok((parse_f64("grid", p[0])?, parse_f64("grid", p[1])?, n))
    };
    let (q_min, q_max, nq) = axis(axes[0])?;
    let (p_min, p_max, np) = axis(axes[1])?;
    let spec = GridSpec {
        q_min,
        q_max,
        nq,
        p_min,
        p_max,
        np,
        length_scale: 1.0,
    };
    spec.validate()?;
    Ok(spec)
}
