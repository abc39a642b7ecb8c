//! Fidelity `F = √⟨Ψ|ρ_Ψ(β)|Ψ⟩` between the pure state and its thermalized mixture.

use num_complex::Complex64;

use crate::error::Result;
use crate::observables::{ObservableReport, ReportParams};
use crate::tfd::{thermal_state_density_expansion, PhysicalAmplitudes};
use crate::thermal::{pow0, ThermalParams, Truncation};

pub fn fidelity_numeric(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<f64> {
    let rho = thermal_state_density_expansion(amps, params, trunc)?;
    let psi = amps.to_fock_vector(trunc.cutoff())?;
    let overlap = psi.inner(&rho.apply(&psi)?)?;
    Ok(overlap.re.max(0.0).sqrt())
}

/// The reference term list for `F`, evaluated as written (`k₁^{n=m}` read as
/// `k₁^m`, `0⁰ = 1`). The square root is taken of the real part of the sum.
pub fn fidelity_closed_form_value(amps: &PhysicalAmplitudes, params: &ThermalParams) -> f64 {
    let PhysicalAmplitudes { x, y, z, w } = *amps;
    let (x2, y2, z2, w2) = (x.norm_sqr(), y.norm_sqr(), z.norm_sqr(), w.norm_sqr());
    let u = params.u();
    let k = params.k();
    let k1 = params.k1();
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let s24 = 24f64.sqrt();
    let r = |v: f64| Complex64::new(v, 0.0);

    // (coefficient, power of k₁)
    let terms: [(Complex64, usize); 26] = [
        (r(x2 * x2), 0),
        (r(x2 * y2 / u), 0),
        (r(x2 * z2 / (s2 * u.powi(2))), 0),
        (r(x2 * w2 / (s24 * u.powi(4))), 0),
        (r(x2 * y2 / u), 0),
        (r(x2 * x2 * y2 / u.powi(2)), 1),
        (r(y2 * y2 / u.powi(2)), 0),
        (x * z * (s2 * y2 / u), 1),
        (r(y2 * z2 / u.powi(3)), 0),
        (r(s24 * y2 * w2 / (s24 * u.powi(5))), 0),
        (r(s2 * x2 * z2 / u.powi(2)), 0),
        (x.conj() * z.conj() * y * y * (s2 / u), 1),
        (r(y2 * z2 / u.powi(3)), 0),
        (r(x2 * z2), 2),
        (r(2.0 * y2 * z2 / u.powi(2)), 1),
        (r(z2 * z2 / u.powi(4)), 2),
        (x * w * (s6 * z2 / u.powi(2)), 2),
        (r(s6 * z2 * w2 / (s24 * u.powi(6))), 0),
        (x * w.conj() * (s24 / (s24 * u.powi(4))), 0),
        (r(s24 * z2 * w2 / (s24 * u.powi(5))), 0),
        (x * x * z * z * w.conj() * (s6 / u.powi(4)), 2),
        (r(2.0 * s6 * z2 * w2 / (s24 * u.powi(4))), 0),
        (r(x2 * w2), 4),
        (r(4.0 * y2 * w2 / u.powi(2)), 3),
        (r(z2 * w2 / (2.0 * u.powi(4))), 2),
        (r(24.0 * w2 * w2 / (24.0 * u.powi(8))), 0),
    ];
    let sum: Complex64 = terms
        .iter()
        .map(|&(c, power)| c * (k * pow0(k1, power)))
        .sum();
    sum.re.sqrt()
}

/// Numeric fidelity alongside the closed form and their discrepancy.
pub fn fidelity_closed_form(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<ObservableReport> {
    let numeric = fidelity_numeric(amps, params, trunc)?;
    let closed = fidelity_closed_form_value(amps, params);
    Ok(ObservableReport::new(
        numeric,
        closed.is_finite().then_some(closed),
        ReportParams::new(amps, params, trunc),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfd::thermal_state_density_operator;
    use crate::thermal::bogoliubov_factors;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_temperature_fidelity_is_one() {
        let p = bogoliubov_factors(0.0).unwrap();
        let trunc = Truncation::fixed(8).unwrap();
        let f = fidelity_numeric(&PhysicalAmplitudes::showcase(), &p, &trunc).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_fidelity_is_root_k() {
        let p = bogoliubov_factors(1.0).unwrap();
        let trunc = Truncation::auto(&p, 1e-10).unwrap();
        let amps = PhysicalAmplitudes::real(1.0, 0.0, 0.0, 0.0).unwrap();
        let f = fidelity_numeric(&amps, &p, &trunc).unwrap();
        assert_abs_diff_eq!(f, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn numeric_matches_operator_path() {
        let p = bogoliubov_factors(0.5).unwrap();
        let amps = PhysicalAmplitudes::showcase();
        let trunc = Truncation::auto(&p, 1e-10).unwrap();
        let rho = thermal_state_density_operator(&amps, &p, &trunc).unwrap();
        let psi = amps.to_fock_vector(trunc.cutoff()).unwrap();
        let oracle = psi.inner(&rho.apply(&psi).unwrap()).unwrap().re.sqrt();
        let f = fidelity_numeric(&amps, &p, &trunc).unwrap();
        assert_abs_diff_eq!(f, oracle, epsilon = 1e-10);
    }

    #[test]
    fn invariant_under_global_phase() {
        let p = bogoliubov_factors(0.4).unwrap();
        let trunc = Truncation::auto(&p, 1e-10).unwrap();
        let amps = PhysicalAmplitudes::showcase();
        let f0 = fidelity_numeric(&amps, &p, &trunc).unwrap();
        let f1 = fidelity_numeric(&amps.with_global_phase(1.234), &p, &trunc).unwrap();
        assert_abs_diff_eq!(f0, f1, epsilon = 1e-10);
    }

    #[test]
    fn closed_form_single_term_limit() {
        let p = bogoliubov_factors(0.0).unwrap();
        let amps = PhysicalAmplitudes::real(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(fidelity_closed_form_value(&amps, &p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_report_at_zero_temperature() {
        let p = bogoliubov_factors(0.0).unwrap();
        let trunc = Truncation::fixed(8).unwrap();
        let report = fidelity_closed_form(&PhysicalAmplitudes::showcase(), &p, &trunc).unwrap();
        assert_abs_diff_eq!(report.value_numeric, 1.0, epsilon = 1e-12);
        let closed = report.value_closed_form.unwrap();
        assert_eq!(report.abs_discrepancy, Some((closed - 1.0).abs()));
    }
}
