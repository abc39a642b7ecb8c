//! The sweep and grid subcommands.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thermoqubit::observables::{
    fidelity_closed_form_value, mandel_closed_form_value, wigner_closed_form_grid,
    wigner_from_density_adaptive, wigner_negativity, CLOSED_FORM_SCALE, DEFAULT_GRID_TOL,
};
use thermoqubit::{
    bogoliubov_factors, fidelity_numeric, mandel_numeric, thermal_state_density_expansion, Error,
    PhysicalAmplitudes,
};

use crate::config::{Format, SweepConfig};
use crate::output::{fmt_sci, json_f64, json_opt, to_pretty_json, with_suffix, write_text, Table};
use crate::CliError;

/// Dead band around zero inside which `Q` counts as Poissonian.
pub const POISSON_BAND: f64 = 1e-9;

/// Allowed rise between consecutive fidelity samples.
pub const MONOTONE_TOL: f64 = 1e-10;

/// Wigner grids at these `n̄` when none is given.
pub const DEFAULT_WIGNER_NBARS: [f64; 2] = [0.1, 10.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRow {
    pub n_bar: f64,
    pub numeric: f64,
    pub closed_form: f64,
}

pub fn fidelity_rows(cfg: &SweepConfig) -> Result<Vec<FidelityRow>, CliError> {
    cfg.n_bar_range
        .values()
        .into_par_iter()
        .map(|n_bar| {
            let params = bogoliubov_factors(n_bar)?;
            let trunc = cfg.truncation(&params)?;
            Ok(FidelityRow {
                n_bar,
                numeric: fidelity_numeric(&cfg.amps, &params, &trunc)?,
                closed_form: fidelity_closed_form_value(&cfg.amps, &params),
            })
        })
        .collect()
}

/// First `(n̄_prev, n̄_next)` where the fidelity rises by more than [`MONOTONE_TOL`].
pub fn first_rise(rows: &[FidelityRow]) -> Option<(f64, f64)> {
    rows.windows(2)
        .find(|w| w[1].numeric > w[0].numeric + MONOTONE_TOL)
        .map(|w| (w[0].n_bar, w[1].n_bar))
}

pub fn fidelity_table(rows: &[FidelityRow]) -> Table {
    let mut t = Table::new(vec![
        "n_bar",
        "fidelity_numeric",
        "fidelity_closed_form",
        "discrepancy",
    ]);
    for r in rows {
        t.push(vec![
            fmt_sci(r.n_bar),
            fmt_sci(r.numeric),
            fmt_sci(r.closed_form),
            fmt_sci((r.numeric - r.closed_form).abs()),
        ]);
    }
    t
}

/// Writes the fidelity sweep. Fails after writing if the default amplitudes
/// produce a rising fidelity.
pub fn cmd_sweep_fidelity(cfg: &SweepConfig) -> Result<(), CliError> {
    let rows = fidelity_rows(cfg)?;
    write_table(cfg, &fidelity_table(&rows))?;
    if let Some((a, b)) = first_rise(&rows) {
        if cfg.amps == PhysicalAmplitudes::showcase() {
            return Err(CliError::Check(format!(
                "fidelity increases between n_bar = {} and {}",
                fmt_sci(a),
                fmt_sci(b)
            )));
        }
        eprintln!(
            "warning: fidelity increases between n_bar = {} and {}",
            fmt_sci(a),
            fmt_sci(b)
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Sub,
    Poisson,
    Super,
    Undefined,
}

impl Regime {
    pub fn classify(q: Option<f64>) -> Self {
        match q {
            None => Regime::Undefined,
            Some(q) if q.abs() < POISSON_BAND => Regime::Poisson,
            Some(q) if q < 0.0 => Regime::Sub,
            Some(_) => Regime::Super,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Sub => "sub",
            Regime::Poisson => "poisson",
            Regime::Super => "super",
            Regime::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelRow {
    pub n_bar: f64,
    pub numeric: Option<f64>,
    pub closed_form: Option<f64>,
    pub regime: Regime,
}

fn defined(r: Result<f64, Error>) -> Result<Option<f64>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedMandel) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn mandel_rows(cfg: &SweepConfig) -> Result<Vec<MandelRow>, CliError> {
    cfg.n_bar_range
        .values()
        .into_par_iter()
        .map(|n_bar| {
            let params = bogoliubov_factors(n_bar)?;
            let trunc = cfg.truncation(&params)?;
            let numeric = defined(mandel_numeric(&cfg.amps, &params, &trunc))?;
            let closed_form = defined(mandel_closed_form_value(&cfg.amps, &params))?;
            Ok(MandelRow {
                n_bar,
                numeric,
                closed_form,
                regime: Regime::classify(numeric),
            })
        })
        .collect()
}

pub fn mandel_table(rows: &[MandelRow]) -> Table {
    let mut t = Table::new(vec![
        "n_bar",
        "q_numeric",
        "q_closed_form",
        "discrepancy",
        "regime",
    ]);
    let nan = f64::NAN;
    for r in rows {
        let discrepancy = match (r.numeric, r.closed_form) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => nan,
        };
        t.push(vec![
            fmt_sci(r.n_bar),
            fmt_sci(r.numeric.unwrap_or(nan)),
            fmt_sci(r.closed_form.unwrap_or(nan)),
            fmt_sci(discrepancy),
            r.regime.as_str().to_string(),
        ]);
    }
    t
}

pub fn cmd_sweep_mandel(cfg: &SweepConfig) -> Result<(), CliError> {
    let rows = mandel_rows(cfg)?;
    write_table(cfg, &mandel_table(&rows))
}

fn write_table(cfg: &SweepConfig, table: &Table) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_pretty_json(&table.to_json()),
    };
    write_text(cfg.out.as_deref(), &text)
}

/// Numeric and closed-form grids for one temperature, with summary metadata.
#[derive(Debug, Clone)]
pub struct WignerExport {
    pub table: Table,
    pub metadata: Value,
}

pub fn wigner_export(cfg: &SweepConfig, n_bar: f64) -> Result<WignerExport, CliError> {
    let params = bogoliubov_factors(n_bar)?;
    let trunc = cfg.truncation(&params)?;
    let rho = thermal_state_density_expansion(&cfg.amps, &params, &trunc)?;
    let numeric = wigner_from_density_adaptive(&rho, &cfg.grid, DEFAULT_GRID_TOL)?;
    let closed = if cfg.amps.is_real() {
        Some(wigner_closed_form_grid(
            &cfg.amps,
            &params,
            &numeric.spec,
            trunc.cutoff(),
        )?)
    } else {
        None
    };

    let mut table = Table::new(vec!["q", "p", "w_numeric", "w_closed_form"]);
    let mut max_discrepancy: Option<f64> = closed.as_ref().map(|_| 0.0);
    for ((i, j), &w) in numeric.values.indexed_iter() {
        let wc = closed.as_ref().map(|c| c.values[[i, j]]);
        if let (Some(m), Some(c)) = (max_discrepancy.as_mut(), wc) {
            *m = m.max((w - c).abs());
        }
        table.push(vec![
            fmt_sci(numeric.spec.q(i)),
            fmt_sci(numeric.spec.p(j)),
            fmt_sci(w),
            fmt_sci(wc.unwrap_or(f64::NAN)),
        ]);
    }

    let spec = &numeric.spec;
    let amps: Vec<Value> = cfg
        .amps
        .as_array()
        .iter()
        .map(|c| json!([json_f64(c.re), json_f64(c.im)]))
        .collect();
    let metadata = json!({
        "n_bar": json_f64(n_bar),
        "cutoff": trunc.cutoff(),
        "tail_tol": json_f64(trunc.tail_tol()),
        "amps": amps,
        "grid": {
            "q_min": json_f64(spec.q_min),
            "q_max": json_f64(spec.q_max),
            "nq": spec.nq,
            "p_min": json_f64(spec.p_min),
            "p_max": json_f64(spec.p_max),
            "np": spec.np,
            "length_scale": json_f64(spec.length_scale),
            "widened": spec.half_width() > cfg.grid.half_width(),
        },
        "normalization_constant": json_f64(CLOSED_FORM_SCALE),
        "trace": json_f64(rho.trace().re),
        "integrated_total": json_f64(numeric.integral()),
        "closed_form_integrated_total": json_opt(closed.as_ref().map(|c| c.integral())),
        "negativity_volume": json_f64(wigner_negativity(&numeric)),
        "max_discrepancy": json_opt(max_discrepancy),
    });
    Ok(WignerExport { table, metadata })
}

/// Temperatures the grid command runs at.
pub fn wigner_nbars(cfg: &SweepConfig) -> Vec<f64> {
    match cfg.n_bar {
        Some(v) => vec![v],
        None => DEFAULT_WIGNER_NBARS.to_vec(),
    }
}

/// Output paths for one temperature: the data file and, for CSV, its sidecar.
pub fn wigner_paths(cfg: &SweepConfig, n_bar: f64, several: bool) -> (PathBuf, Option<PathBuf>) {
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let base = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("wigner.{ext}")));
    let data = if several {
        with_suffix(&base, &format!("_nbar{n_bar}"))
    } else {
        base
    };
    let sidecar = (cfg.format == Format::Csv).then(|| data.with_extension("json"));
    (data, sidecar)
}

pub fn cmd_wigner_grid(cfg: &SweepConfig) -> Result<Vec<PathBuf>, CliError> {
    let nbars = wigner_nbars(cfg);
    let several = nbars.len() > 1;
    let mut written = Vec::new();
    for n_bar in nbars {
        let export = wigner_export(cfg, n_bar)?;
        let (data, sidecar) = wigner_paths(cfg, n_bar, several);
        match sidecar {
            Some(side) => {
                write_text(Some(&data), &export.table.to_csv())?;
                write_text(Some(&side), &to_pretty_json(&export.metadata))?;
                written.push(data);
                written.push(side);
            }
            None => {
                let mut doc = Map::new();
                doc.insert("metadata".into(), export.metadata);
                doc.insert("points".into(), export.table.to_json());
                write_text(Some(&data), &to_pretty_json(&Value::Object(doc)))?;
                written.push(data);
            }
        }
    }
    Ok(written)
}

/// Parses a CSV written by the sweep commands back into columns.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{} is empty", path.display())))?
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NBarRange;

    #[test]
    fn regime_dead_band() {
        assert_eq!(Regime::classify(Some(-0.45)), Regime::Sub);
        assert_eq!(Regime::classify(Some(5e-10)), Regime::Poisson);
        assert_eq!(Regime::classify(Some(-5e-10)), Regime::Poisson);
        assert_eq!(Regime::classify(Some(0.2)), Regime::Super);
        assert_eq!(Regime::classify(None), Regime::Undefined);
    }

    #[test]
    fn rise_detection() {
        let row = |n_bar, numeric| FidelityRow {
            n_bar,
            numeric,
            closed_form: 0.0,
        };
        assert_eq!(first_rise(&[row(0.0, 1.0), row(0.1, 0.9)]), None);
        assert_eq!(
            first_rise(&[row(0.0, 1.0), row(0.1, 0.9), row(0.2, 0.95)]),
            Some((0.1, 0.2))
        );
    }

    #[test]
    fn vacuum_mandel_row_is_undefined() {
        let cfg = SweepConfig {
            amps: PhysicalAmplitudes::real(1.0, 0.0, 0.0, 0.0).unwrap(),
            n_bar_range: NBarRange {
                start: 0.0,
                end: 0.5,
                steps: 2,
            },
            ..SweepConfig::default()
        };
        let rows = mandel_rows(&cfg).unwrap();
        assert_eq!(rows[0].regime, Regime::Undefined);
        assert_eq!(rows[1].regime, Regime::Super);
        let csv = mandel_table(&rows).to_csv();
        assert!(csv
            .lines()
            .nth(1)
            .unwrap()
            .ends_with("nan,nan,nan,undefined"));
    }

    #[test]
    fn wigner_paths_get_suffixes() {
        let cfg = SweepConfig {
            out: Some(PathBuf::from("dir/w.csv")),
            ..SweepConfig::default()
        };
        let (data, side) = wigner_paths(&cfg, 0.1, true);
        assert_eq!(data, PathBuf::from("dir/w_nbar0.1.csv"));
        assert_eq!(side, Some(PathBuf::from("dir/w_nbar0.1.json")));
        let (data, _) = wigner_paths(&cfg, 10.0, false);
        assert_eq!(data, PathBuf::from("dir/w.csv"));
    }
}
