//! The `verify` suite: cross-checks between independent constructions and the
//! invariants of every module, collected into one report.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thermoqubit::gate::LogicalState;
use thermoqubit::observables::{
    fidelity_closed_form_value, mandel_closed_form_value, wigner_closed_form, GridSpec,
    DEFAULT_GRID_TOL,
};
use thermoqubit::tfd::{product_state, DOUBLED_SPACE_CUTOFF_CAP};
use thermoqubit::{
    bogoliubov_factors, cnot_logical, decode, doubled_space_density, encode, evolve_half_period,
    fidelity_numeric, gate_thermalization_residual, half_period_gate_matrix, lift, mandel_numeric,
    number_operator, thermal_state_density_expansion, thermal_state_density_operator,
    thermal_vacuum_density, thermal_vacuum_state, wigner_from_density,
    wigner_from_density_adaptive, wigner_negativity, Error, FockMatrix, FockVector, Mode,
    PhysicalAmplitudes, ThermalParams, Truncation,
};

use crate::output::{fmt_sci, json_opt};

/// Temperatures the per-temperature checks run at.
pub const VERIFY_NBARS: [f64; 5] = [0.0, 0.1, 0.3, 1.0, 10.0];
/// Temperatures at which closed forms are compared with the numerics.
pub const CLOSED_FORM_NBARS: [f64; 4] = [0.0, 0.1, 0.3, 1.0];
pub const GATE_NBARS: [f64; 3] = [0.0, 0.2, 0.5];
pub const GATE_CUTOFF: usize = 40;
pub const BOSE_EINSTEIN_NBARS: [f64; 4] = [0.1, 0.5, 1.0, 5.0];

pub const AGREEMENT_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-9;
pub const EXACT_TOL: f64 = 1e-12;
pub const GATE_RESIDUAL_TOL: f64 = 1e-8;
pub const BOGOLIUBOV_TOL: f64 = 1e-10;
pub const MANDEL_TOL: f64 = 1e-9;
pub const PHASE_TOL: f64 = 1e-10;
pub const MONOTONE_TOL: f64 = 1e-10;
pub const PARITY_TOL: f64 = 1e-10;
pub const NEGATIVITY_RATIO: f64 = 0.1;

const SEED: u64 = 20_240_229;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Informational: computed and recorded, never a failure.
    Reported,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Reported => "reported",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub n_bar: Option<f64>,
    pub status: Status,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    fn at_most(name: &str, n_bar: Option<f64>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            n_bar,
            status: if value <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            value: Some(value),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    fn reported(
        name: &str,
        n_bar: Option<f64>,
        value: Option<f64>,
        detail: Option<String>,
    ) -> Self {
        Self {
            name: name.into(),
            n_bar,
            status: Status::Reported,
            value,
            tolerance: None,
            detail,
        }
    }

    fn skipped(name: &str, n_bar: Option<f64>, reason: String) -> Self {
        Self {
            name: name.into(),
            n_bar,
            status: Status::Skipped,
            value: None,
            tolerance: None,
            detail: Some(reason),
        }
    }

    fn failed(name: &str, n_bar: Option<f64>, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            n_bar,
            status: Status::Fail,
            value: None,
            tolerance: None,
            detail: Some(err.to_string()),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    /// `name` plus `@n_bar=…` when the check is per-temperature.
    pub fn label(&self) -> String {
        match self.n_bar {
            Some(n) => format!("{}@n_bar={n}", self.name),
            None => self.name.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "n_bar": json_opt(self.n_bar),
            "status": self.status.as_str(),
            "value": json_opt(self.value),
            "tolerance": json_opt(self.tolerance),
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn find(&self, name: &str, n_bar: Option<f64>) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| c.name == name && c.n_bar == n_bar)
    }

    pub fn to_json(&self) -> Value {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        json!({
            "passed": self.passed(),
            "failed_checks": self.failures().iter().map(|c| c.label()).collect::<Vec<_>>(),
            "summary": {
                "pass": count(Status::Pass),
                "fail": count(Status::Fail),
                "skipped": count(Status::Skipped),
                "reported": count(Status::Reported),
            },
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Pushes the outcome of a fallible check, turning errors into failures.
fn push(out: &mut Vec<Check>, name: &str, n_bar: Option<f64>, r: Result<Check, Error>) {
    out.push(r.unwrap_or_else(|e| Check::failed(name, n_bar, e)));
}

pub fn run_verify(amps: &PhysicalAmplitudes, tail_tol: f64) -> VerifyReport {
    let mut checks = Vec::new();
    for n_bar in VERIFY_NBARS {
        per_temperature(&mut checks, amps, n_bar, tail_tol);
    }
    closed_forms(&mut checks, amps, tail_tol);
    fidelity_checks(&mut checks, amps, tail_tol);
    mandel_checks(&mut checks, amps, tail_tol);
    wigner_checks(&mut checks, amps, tail_tol);
    gate_checks(&mut checks, amps);
    VerifyReport { checks }
}

fn auto(n_bar: f64, tail_tol: f64) -> Result<(ThermalParams, Truncation), Error> {
    let params = bogoliubov_factors(n_bar)?;
    let trunc = Truncation::auto(&params, tail_tol)?;
    Ok((params, trunc))
}

fn density_checks(out: &mut Vec<Check>, label: &str, rho: &FockMatrix, n_bar: f64, tail_tol: f64) {
    let nb = Some(n_bar);
    out.push(Check::at_most(
        &format!("tfd.{label}.hermiticity"),
        nb,
        rho.hermiticity_defect(),
        HERMITIAN_TOL,
    ));
    out.push(Check::at_most(
        &format!("tfd.{label}.trace"),
        nb,
        (rho.trace().re - 1.0).abs(),
        tail_tol + 1e-12,
    ));
    let min_eig = rho.min_eigenvalue();
    out.push(
        Check::at_most(
            &format!("tfd.{label}.min_eigenvalue"),
            nb,
            (-min_eig).max(0.0),
            EIGEN_TOL,
        )
        .with_detail(format!("minimum eigenvalue {}", fmt_sci(min_eig))),
    );
}

fn per_temperature(out: &mut Vec<Check>, amps: &PhysicalAmplitudes, n_bar: f64, tail_tol: f64) {
    let nb = Some(n_bar);
    let (params, trunc) = match auto(n_bar, tail_tol) {
        Ok(v) => v,
        Err(e) => {
            out.push(Check::failed("tfd.truncation", nb, e));
            return;
        }
    };
    let expansion = thermal_state_density_expansion(amps, &params, &trunc);
    let operator = thermal_state_density_operator(amps, &params, &trunc);
    let doubled_fits = trunc.cutoff() + 4 <= DOUBLED_SPACE_CUTOFF_CAP;
    let doubled = doubled_fits.then(|| doubled_space_density(amps, &params, &trunc));

    match (&expansion, &operator) {
        (Ok(e), Ok(o)) => push(
            out,
            "tfd.expansion_vs_operator",
            nb,
            e.max_abs_diff(o)
                .map(|d| Check::at_most("tfd.expansion_vs_operator", nb, d, AGREEMENT_TOL)),
        ),
        (Err(e), _) | (_, Err(e)) => out.push(Check::failed("tfd.expansion_vs_operator", nb, e)),
    }
    let skip_reason = || {
        format!(
            "doubled space needs cutoff {} > {DOUBLED_SPACE_CUTOFF_CAP}",
            trunc.cutoff() + 4
        )
    };
    for (name, other) in [
        ("tfd.expansion_vs_doubled", &expansion),
        ("tfd.operator_vs_doubled", &operator),
    ] {
        match (&doubled, other) {
            (None, _) => out.push(Check::skipped(name, nb, skip_reason())),
            (Some(Ok(d)), Ok(o)) => push(
                out,
                name,
                nb,
                d.max_abs_diff(o)
                    .map(|v| Check::at_most(name, nb, v, AGREEMENT_TOL)),
            ),
            (Some(Err(e)), _) | (_, Err(e)) => out.push(Check::failed(name, nb, e)),
        }
    }
    if let Ok(rho) = &expansion {
        density_checks(out, "expansion", rho, n_bar, tail_tol);
    }
    if let Ok(rho) = &operator {
        density_checks(out, "operator", rho, n_bar, tail_tol);
    }
    match &doubled {
        Some(Ok(rho)) => density_checks(out, "doubled", rho, n_bar, tail_tol),
        Some(Err(_)) => {}
        None => out.push(Check::skipped("tfd.doubled.density", nb, skip_reason())),
    }

    if n_bar > 0.0 {
        push(
            out,
            "tfd.thermal_vacuum_decreasing",
            nb,
            (|| {
                let rho = thermal_vacuum_density(&params, &trunc)?;
                let worst = (0..rho.dim() - 1)
                    .map(|n| rho[(n + 1, n + 1)].re - rho[(n, n)].re)
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(Check {
                    status: if worst < 0.0 {
                        Status::Pass
                    } else {
                        Status::Fail
                    },
                    ..Check::reported("tfd.thermal_vacuum_decreasing", nb, Some(worst), None)
                })
            })(),
        );
    }

    if doubled_fits {
        push(
            out,
            "tfd.purification_moments",
            nb,
            (|| {
                let vacuum = thermal_vacuum_state(&params, &trunc)?;
                let rho = thermal_vacuum_density(&params, &trunc)?;
                let n_op = number_operator(trunc.cutoff());
                let n_sq = n_op.matmul(&n_op)?;
                let mut worst: f64 = 0.0;
                for op in [&n_op, &n_sq] {
                    let doubled = lift(op, Mode::Original)?;
                    let lhs = vacuum.inner(&doubled.apply(&vacuum)?)?.re;
                    worst = worst.max((lhs - rho.expectation(op)?.re).abs());
                }
                Ok(Check::at_most(
                    "tfd.purification_moments",
                    nb,
                    worst,
                    AGREEMENT_TOL,
                ))
            })(),
        );
    } else {
        out.push(Check::skipped(
            "tfd.purification_moments",
            nb,
            skip_reason(),
        ));
    }

    push(
        out,
        "observables.fidelity.global_phase",
        nb,
        (|| {
            let f0 = fidelity_numeric(amps, &params, &trunc)?;
            let f1 = fidelity_numeric(&amps.with_global_phase(1.234), &params, &trunc)?;
            Ok(Check::at_most(
                "observables.fidelity.global_phase",
                nb,
                (f0 - f1).abs(),
                PHASE_TOL,
            ))
        })(),
    );

    if let Ok(rho) = &expansion {
        push(
            out,
            "observables.wigner.normalization",
            nb,
            (|| {
                let grid =
                    wigner_from_density_adaptive(rho, &GridSpec::default(), DEFAULT_GRID_TOL)?;
                Ok(Check::at_most(
                    "observables.wigner.normalization",
                    nb,
                    (grid.integral() - rho.trace().re).abs(),
                    DEFAULT_GRID_TOL,
                )
                .with_detail(format!("half-width {}", grid.spec.half_width())))
            })(),
        );
        push(
            out,
            "observables.wigner.parity_origin",
            nb,
            (|| {
                let w0 = wigner_at_origin(rho)?;
                let parity: f64 = (0..rho.dim())
                    .map(|n| {
                        if n % 2 == 0 {
                            rho[(n, n)].re
                        } else {
                            -rho[(n, n)].re
                        }
                    })
                    .sum();
                Ok(Check::at_most(
                    "observables.wigner.parity_origin",
                    nb,
                    (w0 - parity / PI).abs(),
                    PARITY_TOL,
                ))
            })(),
        );
    }
}

fn wigner_at_origin(rho: &FockMatrix) -> Result<f64, Error> {
    let spec = GridSpec {
        q_min: 0.0,
        q_max: 1.0,
        nq: 2,
        p_min: 0.0,
        p_max: 1.0,
        np: 2,
        length_scale: 1.0,
    };
    Ok(wigner_from_density(rho, &spec)?.values[[0, 0]])
}

fn closed_forms(out: &mut Vec<Check>, amps: &PhysicalAmplitudes, tail_tol: f64) {
    for n_bar in CLOSED_FORM_NBARS {
        let nb = Some(n_bar);
        let (params, trunc) = match auto(n_bar, tail_tol) {
            Ok(v) => v,
            Err(e) => {
                out.push(Check::failed("observables.closed_form", nb, e));
                continue;
            }
        };

        push(
            out,
            "observables.fidelity.closed_form_discrepancy",
            nb,
            (|| {
                let numeric = fidelity_numeric(amps, &params, &trunc)?;
                let closed = fidelity_closed_form_value(amps, &params);
                Ok(Check::reported(
                    "observables.fidelity.closed_form_discrepancy",
                    nb,
                    Some((numeric - closed).abs()),
                    Some(format!(
                        "numeric {}, closed form {}",
                        fmt_sci(numeric),
                        fmt_sci(closed)
                    )),
                ))
            })(),
        );

        let name = "observables.mandel.closed_form_discrepancy";
        match (
            mandel_numeric(amps, &params, &trunc),
            mandel_closed_form_value(amps, &params),
        ) {
            (Ok(numeric), Ok(closed)) => {
                let diff = (numeric - closed).abs();
                let detail = format!(
                    "numeric {}, closed form {}",
                    fmt_sci(numeric),
                    fmt_sci(closed)
                );
                let check = if n_bar == 0.0 {
                    Check::at_most(name, nb, diff, MANDEL_TOL)
                } else {
                    Check::reported(name, nb, Some(diff), None)
                };
                out.push(check.with_detail(detail));
            }
            (Err(Error::UndefinedMandel), _) | (_, Err(Error::UndefinedMandel)) => {
                out.push(Check::reported(
                    name,
                    nb,
                    None,
                    Some("undefined: zero mean photon number".into()),
                ))
            }
            (Err(e), _) | (_, Err(e)) => out.push(Check::failed(name, nb, e)),
        }

        let name = "observables.wigner.closed_form_discrepancy";
        if amps.is_real() {
            push(
                out,
                name,
                nb,
                (|| {
                    let cmp = wigner_closed_form(amps, &params, &GridSpec::default(), &trunc)?;
                    Ok(Check::reported(
                        name,
                        nb,
                        Some(cmp.max_abs_discrepancy),
                        Some(format!(
                            "integrated |difference| {}, closed-form integral {}",
                            fmt_sci(cmp.integrated_abs_discrepancy),
                            fmt_sci(cmp.report.value_closed_form.unwrap_or(f64::NAN))
                        )),
                    ))
                })(),
            );
        } else {
            out.push(Check::skipped(
                name,
                nb,
                "closed form needs real amplitudes".into(),
            ));
        }
    }
}

fn random_amplitudes(rng: &mut ChaCha8Rng) -> PhysicalAmplitudes {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (a, b, d, e) = (c(), c(), c(), c());
    PhysicalAmplitudes::normalized(a, b, d, e)
        .expect("nonzero draw")
        .0
}

fn random_logical(rng: &mut ChaCha8Rng) -> LogicalState {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let raw = [c(), c(), c(), c()];
    let norm = raw.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    LogicalState::from_array(raw.map(|v| v / norm))
}

/// Largest `n̄` on `[0, 2]` below which `F > level`, by bisection.
pub fn fidelity_threshold(
    amps: &PhysicalAmplitudes,
    level: f64,
    tail_tol: f64,
) -> Result<f64, Error> {
    let f = |n_bar: f64| -> Result<f64, Error> {
        let (params, trunc) = auto(n_bar, tail_tol)?;
        fidelity_numeric(amps, &params, &trunc)
    };
    let (mut lo, mut hi) = (0.0, 2.0);
    if f(hi)? > level {
        return Ok(hi);
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn fidelity_checks(out: &mut Vec<Check>, amps: &PhysicalAmplitudes, tail_tol: f64) {
    push(
        out,
        "observables.fidelity.zero_temperature",
        None,
        (|| {
            let params = bogoliubov_factors(0.0)?;
            let trunc = Truncation::new(8, tail_tol)?;
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let mut sets = vec![*amps];
            sets.extend((0..20).map(|_| random_amplitudes(&mut rng)));
            let mut worst: f64 = 0.0;
            for a in &sets {
                worst = worst.max((fidelity_numeric(a, &params, &trunc)? - 1.0).abs());
            }
            Ok(Check::at_most(
                "observables.fidelity.zero_temperature",
                None,
                worst,
                EXACT_TOL,
            )
            .with_detail(format!("{} amplitude sets", sets.len())))
        })(),
    );

    push(
        out,
        "observables.fidelity.monotone",
        None,
        (|| {
            let mut prev = f64::INFINITY;
            let mut worst_rise = f64::NEG_INFINITY;
            for i in 0..100 {
                let n_bar = 2.0 * i as f64 / 99.0;
                let (params, trunc) = auto(n_bar, tail_tol)?;
                let f = fidelity_numeric(amps, &params, &trunc)?;
                if prev.is_finite() {
                    worst_rise = worst_rise.max(f - prev);
                }
                prev = f;
            }
            Ok(Check::at_most(
                "observables.fidelity.monotone",
                None,
                worst_rise.max(0.0),
                MONOTONE_TOL,
            )
            .with_detail("100 points on [0, 2]".into()))
        })(),
    );

    push(
        out,
        "observables.fidelity.threshold_0.7",
        None,
        (|| {
            let threshold = fidelity_threshold(amps, 0.7, tail_tol)?;
            Ok(Check::reported(
                "observables.fidelity.threshold_0.7",
                None,
                Some(threshold),
                Some("largest n_bar with F > 0.7".into()),
            ))
        })(),
    );
}

/// Sign changes of `Q` on `[0, 1]` and the bisected location of the first.
pub fn mandel_crossings(
    amps: &PhysicalAmplitudes,
    tail_tol: f64,
) -> Result<(usize, Option<f64>), Error> {
    let q = |n_bar: f64| -> Result<f64, Error> {
        let (params, trunc) = auto(n_bar, tail_tol)?;
        mandel_numeric(amps, &params, &trunc)
    };
    let samples: Vec<(f64, f64)> = (0..=100)
        .map(|i| {
            let n = i as f64 / 100.0;
            q(n).map(|v| (n, v))
        })
        .collect::<Result<_, _>>()?;
    let changes: Vec<(f64, f64)> = samples
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let location = match changes.first() {
        Some(&(mut lo, mut hi)) => {
            let negative_at_lo = q(lo)? < 0.0;
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if (q(mid)? < 0.0) == negative_at_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
        None => None,
    };
    Ok((changes.len(), location))
}

fn mandel_checks(out: &mut Vec<Check>, amps: &PhysicalAmplitudes, tail_tol: f64) {
    if *amps == PhysicalAmplitudes::showcase() {
        push(
            out,
            "observables.mandel.pure_state",
            Some(0.0),
            (|| {
                let params = bogoliubov_factors(0.0)?;
                let trunc = Truncation::new(8, tail_tol)?;
                let q = mandel_numeric(amps, &params, &trunc)?;
                Ok(Check::at_most(
                    "observables.mandel.pure_state",
                    Some(0.0),
                    (q + 0.45).abs(),
                    MANDEL_TOL,
                ))
            })(),
        );
        push(
            out,
            "observables.mandel.zero_crossing",
            None,
            (|| {
                let (count, at) = mandel_crossings(amps, tail_tol)?;
                let ok = count == 1 && at.is_some_and(|n| (0.2..=0.4).contains(&n));
                Ok(Check {
                    status: if ok { Status::Pass } else { Status::Fail },
                    ..Check::reported(
                        "observables.mandel.zero_crossing",
                        None,
                        at,
                        Some(format!("{count} sign change(s) on [0, 1]")),
                    )
                })
            })(),
        );
    }
    let vacuum = PhysicalAmplitudes::real(1.0, 0.0, 0.0, 0.0).expect("normalized");
    for n_bar in BOSE_EINSTEIN_NBARS {
        let nb = Some(n_bar);
        push(
            out,
            "observables.mandel.bose_einstein",
            nb,
            (|| {
                let (params, trunc) = auto(n_bar, tail_tol)?;
                let q = mandel_numeric(&vacuum, &params, &trunc)?;
                Ok(Check::at_most(
                    "observables.mandel.bose_einstein",
                    nb,
                    (q - n_bar).abs(),
                    MANDEL_TOL,
                ))
            })(),
        );
    }
}

fn fock_projector(n: usize, cutoff: usize) -> Result<FockMatrix, Error> {
    Ok(FockMatrix::projector(&FockVector::number_state(n, cutoff)?))
}

fn wigner_checks(out: &mut Vec<Check>, amps: &PhysicalAmplitudes, tail_tol: f64) {
    push(
        out,
        "observables.wigner.vacuum_peak",
        None,
        (|| {
            let w = wigner_at_origin(&fock_projector(0, 4)?)?;
            Ok(Check::at_most(
                "observables.wigner.vacuum_peak",
                None,
                (w - 1.0 / PI).abs(),
                PARITY_TOL,
            ))
        })(),
    );
    push(
        out,
        "observables.wigner.single_photon_trough",
        None,
        (|| {
            let w = wigner_at_origin(&fock_projector(1, 4)?)?;
            Ok(Check::at_most(
                "observables.wigner.single_photon_trough",
                None,
                (w + 1.0 / PI).abs(),
                PARITY_TOL,
            ))
        })(),
    );
    push(
        out,
        "observables.wigner.linearity",
        None,
        (|| {
            let a = fock_projector(1, 6)?;
            let b = FockMatrix::projector(&amps.to_fock_vector(6)?);
            let t = 0.3;
            let mix = a
                .scale(Complex64::new(t, 0.0))
                .add(&b.scale(Complex64::new(1.0 - t, 0.0)))?;
            let spec = GridSpec::square(4.0, 33);
            let wa = wigner_from_density(&a, &spec)?;
            let wb = wigner_from_density(&b, &spec)?;
            let wm = wigner_from_density(&mix, &spec)?;
            let worst = wm
                .values
                .iter()
                .zip(wa.values.iter().zip(wb.values.iter()))
                .map(|(m, (x, y))| (m - (t * x + (1.0 - t) * y)).abs())
                .fold(0.0, f64::max);
            Ok(Check::at_most(
                "observables.wigner.linearity",
                None,
                worst,
                EXACT_TOL,
            ))
        })(),
    );
    push(
        out,
        "observables.wigner.negativity_ordering",
        None,
        (|| {
            let negativity = |n_bar: f64| -> Result<f64, Error> {
                let (params, trunc) = auto(n_bar, tail_tol)?;
                let rho = thermal_state_density_expansion(amps, &params, &trunc)?;
                let grid =
                    wigner_from_density_adaptive(&rho, &GridSpec::default(), DEFAULT_GRID_TOL)?;
                Ok(wigner_negativity(&grid))
            };
            let cold = negativity(0.1)?;
            let hot = negativity(10.0)?;
            let ratio = if cold > 0.0 {
                hot / cold
            } else {
                f64::INFINITY
            };
            let ok = cold > hot && ratio < NEGATIVITY_RATIO;
            Ok(Check {
                status: if ok { Status::Pass } else { Status::Fail },
                ..Check::reported(
                    "observables.wigner.negativity_ordering",
                    None,
                    Some(ratio),
                    Some(format!(
                        "negativity {} at n_bar=0.1, {} at n_bar=10",
                        fmt_sci(cold),
                        fmt_sci(hot)
                    )),
                )
            }
            .with_tolerance(NEGATIVITY_RATIO))
        })(),
    );
}

impl Check {
    fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }
}

fn gate_checks(out: &mut Vec<Check>, amps: &PhysicalAmplitudes) {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let basis = LogicalState::basis(i);
        let got = decode(&evolve_half_period(&encode(&basis)));
        worst = worst.max(got.max_abs_diff(&cnot_logical(&basis)));
    }
    out.push(Check::at_most("gate.truth_table", None, worst, EXACT_TOL));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut conj, mut inverse): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let s = random_logical(&mut rng);
        conj = conj.max(decode(&evolve_half_period(&encode(&s))).max_abs_diff(&cnot_logical(&s)));
        inverse = inverse.max(decode(&encode(&s)).max_abs_diff(&s));
    }
    out.push(
        Check::at_most("gate.random_states", None, conj, EXACT_TOL)
            .with_detail("100 random logical states".into()),
    );
    out.push(Check::at_most(
        "gate.encode_decode_inverse",
        None,
        inverse,
        EXACT_TOL,
    ));

    push(
        out,
        "gate.half_period_matrix",
        None,
        (|| {
            let cutoff = 8;
            let gate = half_period_gate_matrix(cutoff)?;
            let p = encode(&LogicalState::basis(2));
            let lhs = gate.apply(&p.to_fock_vector(cutoff)?)?;
            let rhs = evolve_half_period(&p).to_fock_vector(cutoff)?;
            Ok(Check::at_most(
                "gate.half_period_matrix",
                None,
                lhs.distance(&rhs)?,
                EXACT_TOL,
            ))
        })(),
    );

    // The gate maps amps_in to amps: U_L is an involution.
    let amps_in = evolve_half_period(amps);
    for n_bar in GATE_NBARS {
        let nb = Some(n_bar);
        push(
            out,
            "tfd.gate_thermalization_residual",
            nb,
            (|| {
                let params = bogoliubov_factors(n_bar)?;
                let trunc = Truncation::new(GATE_CUTOFF, 1e-10)?;
                let gate = half_period_gate_matrix(GATE_CUTOFF)?;
                let r = gate_thermalization_residual(&gate, &amps_in, &params, &trunc)?;
                Ok(Check::at_most(
                    "tfd.gate_thermalization_residual",
                    nb,
                    r,
                    GATE_RESIDUAL_TOL,
                ))
            })(),
        );
    }
    push(
        out,
        "tfd.gate_identity_residual",
        Some(0.5),
        (|| {
            let params = bogoliubov_factors(0.5)?;
            let trunc = Truncation::new(20, 1e-10)?;
            let id = FockMatrix::identity(20, 1)?;
            let r = gate_thermalization_residual(&id, amps, &params, &trunc)?;
            Ok(Check::at_most(
                "tfd.gate_identity_residual",
                Some(0.5),
                r,
                EXACT_TOL,
            ))
        })(),
    );

    bogoliubov_checks(out);
}

/// Reduction of `U(β)|0,0̃⟩` at `θ = asinh(√0.5)` against the geometric law.
fn bogoliubov_checks(out: &mut Vec<Check>) {
    let nb = Some(0.5);
    push(
        out,
        "tfd.bogoliubov_reduction",
        nb,
        (|| {
            let params = bogoliubov_factors(0.5)?;
            let trunc = Truncation::auto(&params, 1e-12)?;
            let vacuum = thermal_vacuum_state(&params, &trunc)?;
            let reduced = vacuum.reduced_density(Mode::Original)?;
            let geometric = thermal_vacuum_density(&params, &trunc)?;
            let diff = reduced.max_abs_diff(&geometric)?;
            Ok(
                Check::at_most("tfd.bogoliubov_reduction", nb, diff, BOGOLIUBOV_TOL)
                    .with_detail(format!("theta {}", fmt_sci(params.theta()))),
            )
        })(),
    );
    push(
        out,
        "tfd.bogoliubov_mean_occupation",
        nb,
        (|| {
            let params = bogoliubov_factors(0.5)?;
            let trunc = Truncation::auto(&params, 1e-12)?;
            let vacuum = thermal_vacuum_state(&params, &trunc)?;
            let n_op = lift(&number_operator(trunc.cutoff()), Mode::Original)?;
            let mean = vacuum.inner(&n_op.apply(&vacuum)?)?.re;
            Ok(Check::at_most(
                "tfd.bogoliubov_mean_occupation",
                nb,
                (mean - 0.5).abs(),
                BOGOLIUBOV_TOL,
            ))
        })(),
    );
    push(
        out,
        "tfd.product_state_layout",
        None,
        (|| {
            let a = FockVector::number_state(2, 4)?;
            let b = FockVector::number_state(3, 4)?;
            let two = FockVector::two_mode_number_state(2, 3, 4)?;
            Ok(Check::at_most(
                "tfd.product_state_layout",
                None,
                product_state(&a, &b)?.distance(&two)?,
                0.0,
            ))
        })(),
    );
}
