//! Mandel parameter `Q = (⟨N²⟩ − ⟨N⟩² − ⟨N⟩) / ⟨N⟩`.
//!
//! `Q < 0` is sub-Poissonian, `Q = 0` Poissonian and `Q > 0` super-Poissonian.

use crate::error::{Error, Result};
use crate::fock::number_operator;
use crate::observables::{ObservableReport, ReportParams};
use crate::tfd::{thermal_state_density_expansion, PhysicalAmplitudes};
use crate::thermal::{ThermalParams, Truncation};

pub fn mandel_numeric(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<f64> {
    let rho = thermal_state_density_expansion(amps, params, trunc)?;
    let n_op = number_operator(trunc.cutoff());
    let n_sq = n_op.matmul(&n_op)?;
    let mean = rho.expectation(&n_op)?.re;
    let second = rho.expectation(&n_sq)?.re;
    if mean.is_nan() || mean <= 0.0 {
        return Err(Error::UndefinedMandel);
    }
    Ok((second - mean * mean - mean) / mean)
}

/// The coefficients `c₁ … c₈` of the reference closed form, as written.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelCoefficients {
    pub c: [f64; 8],
}

impl MandelCoefficients {
    pub fn new(amps: &PhysicalAmplitudes) -> Self {
        let (x, y, z, w) = (
            amps.x.norm_sqr(),
            amps.y.norm_sqr(),
            amps.z.norm_sqr(),
            amps.w.norm_sqr(),
        );
        let c1 = x + y + z + w;
        let c2 = y + 2.0 * z + 4.0 * w;
        let c3 = x * x
            + 2.0 * x * y
            + 2.0 * x * z
            + 2.0 * x * w
            + y * y
            + 2.0 * y * z
            + 2.0 * y * w
            + z * z
            + 2.0 * z * w
            + w * w;
        let c4 = x * y
            + y * y
            + 3.0 * y * z
            + 5.0 * y * w
            + 2.0 * x * z
            + 2.0 * z * z
            + 6.0 * z * w
            + 4.0 * x * w
            + 4.0 * w * w;
        let c5 = y * y + 4.0 * y * z + 8.0 * y * w + 4.0 * z * z + 16.0 * z * w + 16.0 * w * w;
        let c6 = x + y + 4.0 * y + 7.0 * z + 8.0 * w;
        let c7 = x + y + w + z;
        let c8 = y + 4.0 * z + 16.0 * w;
        Self {
            c: [c1, c2, c3, c4, c5, c6, c7, c8],
        }
    }

    /// `c_i` with the reference 1-based numbering.
    pub fn get(&self, i: usize) -> f64 {
        self.c[i - 1]
    }
}

/// The reference closed form
/// `Q = [(c₆−c₄)u²v² + (c₇−c₃)v⁴ + (c₈−c₅)u⁴ − c₁v² − c₂u²] / (c₁v² + c₂u²)`.
pub fn mandel_closed_form_value(amps: &PhysicalAmplitudes, params: &ThermalParams) -> Result<f64> {
    let c = MandelCoefficients::new(amps);
    let u2 = params.u().powi(2);
    let v2 = params.v().powi(2);
    let denominator = c.get(1) * v2 + c.get(2) * u2;
    if denominator == 0.0 {
        return Err(Error::UndefinedMandel);
    }
    let numerator = (c.get(6) - c.get(4)) * u2 * v2
        + (c.get(7) - c.get(3)) * v2 * v2
        + (c.get(8) - c.get(5)) * u2 * u2
        - c.get(1) * v2
        - c.get(2) * u2;
    Ok(numerator / denominator)
}

/// Numeric Mandel parameter alongside the closed form and their discrepancy.
pub fn mandel_closed_form(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<ObservableReport> {
    let closed = mandel_closed_form_value(amps, params)?;
    let numeric = mandel_numeric(amps, params, trunc)?;
    Ok(ObservableReport::new(
        numeric,
        Some(closed),
        ReportParams::new(amps, params, trunc),
    ))
}
