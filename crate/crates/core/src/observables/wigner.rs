//! Wigner quasi-probability function on a rectangular phase-space grid.
//!
//! Units are ħ = 1 with oscillator length `b` (default 1); a grid point
//! `(q, p)` is evaluated at the dimensionless `Q = q/b`, `P = b·p`. The output
//! is normalized so that `∫ W dq dp = tr ρ`.
//!
//! The numeric path sums the Fock-basis kernel against the density matrix:
//! with `α = (Q + iP)/√2` and `m = n + d`,
//!
//! ```text
//! W_{|m⟩⟨n|} = (1/π) (−1)ⁿ √(n!/m!) (2ᾱ)^d e^{−2|α|²} L_n^d(4|α|²)
//! ```
//!
//! and `W_{|n⟩⟨m|}` is its conjugate. The Laguerre factors are evaluated as
//! normalized Laguerre functions, so wide grids do not overflow.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockMatrix;
use crate::observables::laguerre::{laguerre_function_series, scaled_laguerre_series};
use crate::observables::{ObservableReport, ReportParams};
use crate::tfd::{thermal_state_density_expansion, PhysicalAmplitudes};
use crate::thermal::{pow0, ThermalParams, Truncation};

/// Factor taking the reference closed form to the unit-trace convention.
///
/// The reference expression omits the `1/(2πħ)` prefactor of the Wigner
/// transform; its `|x|²` family is exactly `2π` times the thermal Gaussian.
pub const CLOSED_FORM_SCALE: f64 = 1.0 / (2.0 * PI);

/// Allowed `|∫W − tr ρ|` before a grid is widened.
pub const DEFAULT_GRID_TOL: f64 = 1e-6;

/// Widening stops once the grid reaches this half-width.
pub const MAX_HALF_WIDTH: f64 = 32.0;

const IMAGINARY_TOL: f64 = 1e-10;

/// Rectangular grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub nq: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
    pub length_scale: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(8.0, 257)
    }
}

impl GridSpec {
    /// `[−half_width, half_width]²` with `points` samples per axis.
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            nq: points,
            p_min: -half_width,
            p_max: half_width,
            np: points,
            length_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = [
            self.q_min,
            self.q_max,
            self.p_min,
            self.p_max,
            self.length_scale,
        ];
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite bound".into()));
        }
        if self.q_min >= self.q_max || self.p_min >= self.p_max {
            return Err(Error::InvalidGrid("empty range".into()));
        }
        if self.nq < 2 || self.np < 2 {
            return Err(Error::InvalidGrid(
                "need at least two points per axis".into(),
            ));
        }
        if self.length_scale <= 0.0 {
            return Err(Error::InvalidGrid("length scale must be positive".into()));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dq() * self.dp()
    }

    pub fn q(&self, i: usize) -> f64 {
        if i + 1 == self.nq {
            self.q_max
        } else {
            self.q_min + i as f64 * self.dq()
        }
    }

    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.np {
            self.p_max
        } else {
            self.p_min + j as f64 * self.dp()
        }
    }

    pub fn half_width(&self) -> f64 {
        [self.q_min, self.q_max, self.p_min, self.p_max]
            .iter()
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// Same resolution with every bound multiplied by `factor`.
    pub fn widened(&self, factor: f64) -> Self {
        Self {
            q_min: self.q_min * factor,
            q_max: self.q_max * factor,
            p_min: self.p_min * factor,
            p_max: self.p_max * factor,
            ..*self
        }
    }

    fn dimensionless(&self, i: usize, j: usize) -> (f64, f64) {
        (self.q(i) / self.length_scale, self.p(j) * self.length_scale)
    }
}

/// How grid values relate to the state's trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `∫ W dq dp = tr ρ`.
    UnitTrace,
}

/// Wigner values `W(q_i, p_j)` stored as `values[[i, j]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub values: Array2<f64>,
    pub cell_area: f64,
    pub normalization: Normalization,
}

impl WignerGrid {
    fn from_rows(spec: GridSpec, rows: Vec<Vec<f64>>) -> Self {
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let values = Array2::from_shape_vec((spec.nq, spec.np), flat).expect("grid shape");
        Self {
            cell_area: spec.cell_area(),
            spec,
            values,
            normalization: Normalization::UnitTrace,
        }
    }

    /// Riemann sum `Σ W · Δq Δp`.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.cell_area
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(q, p, W)` in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .indexed_iter()
            .map(|((i, j), &w)| (self.spec.q(i), self.spec.p(j), w))
    }
}

/// One diagonal band of a density matrix: `lower[n] = ρ_{n+d,n}`, `upper[n] = ρ_{n,n+d}`.
struct Band {
    offset: usize,
    lower: Vec<Complex64>,
    upper: Vec<Complex64>,
}

fn bands_of(rho: &FockMatrix) -> Vec<Band> {
    let dim = rho.dim();
    (0..dim)
        .filter_map(|d| {
            let len = dim - d;
            let lower: Vec<Complex64> = (0..len).map(|n| rho[(n + d, n)]).collect();
            let upper: Vec<Complex64> = (0..len).map(|n| rho[(n, n + d)]).collect();
            let zero = |v: &Vec<Complex64>| v.iter().all(|z| z.re == 0.0 && z.im == 0.0);
            if zero(&lower) && zero(&upper) {
                None
            } else {
                Some(Band {
                    offset: d,
                    lower,
                    upper,
                })
            }
        })
        .collect()
}

/// Complex Wigner value at dimensionless `(Q, P)`.
fn kernel_sum(bands: &[Band], q: f64, p: f64) -> Complex64 {
    let x = 2.0 * (q * q + p * p);
    let phi = p.atan2(q);
    let mut total = Complex64::new(0.0, 0.0);
    for band in bands {
        let d = band.offset;
        let psi = laguerre_function_series(band.lower.len() - 1, d, x);
        let phase = Complex64::from_polar(1.0, -(d as f64) * phi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &f) in psi.iter().enumerate() {
            let sign = if n % 2 == 0 { f } else { -f };
            if d == 0 {
                acc += band.lower[n] * sign;
            } else {
                acc += (band.lower[n] * phase + band.upper[n] * phase.conj()) * sign;
            }
        }
        total += acc;
    }
    total / PI
}

/// Wigner function of a single-mode density matrix on the given grid.
pub fn wigner_from_density(rho: &FockMatrix, spec: &GridSpec) -> Result<WignerGrid> {
    rho.require_single_mode()?;
    spec.validate()?;
    let bands = bands_of(rho);
    let rows: Vec<Result<Vec<f64>>> = (0..spec.nq)
        .into_par_iter()
        .map(|i| {
            (0..spec.np)
                .map(|j| {
                    let (q, p) = spec.dimensionless(i, j);
                    let w = kernel_sum(&bands, q, p);
                    if w.im.abs() > IMAGINARY_TOL {
                        Err(Error::ComplexWigner {
                            residue: w.im.abs(),
                        })
                    } else {
                        Ok(w.re)
                    }
                })
                .collect()
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(WignerGrid::from_rows(*spec, rows))
}

/// Like [`wigner_from_density`], doubling the grid bounds (same point count)
/// until `|∫W − tr ρ| < grid_tol`, up to a half-width of [`MAX_HALF_WIDTH`].
pub fn wigner_from_density_adaptive(
    rho: &FockMatrix,
    spec: &GridSpec,
    grid_tol: f64,
) -> Result<WignerGrid> {
    let trace = rho.trace().re;
    let mut spec = *spec;
    loop {
        let grid = wigner_from_density(rho, &spec)?;
        let integral = grid.integral();
        if (integral - trace).abs() < grid_tol {
            return Ok(grid);
        }
        if spec.half_width() * 2.0 > MAX_HALF_WIDTH + 1e-12 {
            return Err(Error::GridWideningExhausted {
                integral,
                trace,
                grid_tol,
                half_width: spec.half_width(),
            });
        }
        spec = spec.widened(2.0);
    }
}

/// `Σ max(0, −W) Δq Δp`.
pub fn wigner_negativity(grid: &WignerGrid) -> f64 {
    grid.values.iter().map(|&w| (-w).max(0.0)).sum::<f64>() * grid.cell_area
}

/// The reference closed form, evaluated term by term with `n = 0..=cutoff`
/// and multiplied by [`CLOSED_FORM_SCALE`].
pub fn wigner_closed_form_grid(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    spec: &GridSpec,
    cutoff: usize,
) -> Result<WignerGrid> {
    if !amps.is_real() {
        return Err(Error::ComplexAmplitudes);
    }
    spec.validate()?;
    let rows: Vec<Vec<f64>> = (0..spec.nq)
        .into_par_iter()
        .map(|i| {
            (0..spec.np)
                .map(|j| {
                    let (q, p) = spec.dimensionless(i, j);
                    closed_form_point(amps, params, cutoff, q, p) * CLOSED_FORM_SCALE
                })
                .collect()
        })
        .collect();
    Ok(WignerGrid::from_rows(*spec, rows))
}

fn closed_form_point(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    cutoff: usize,
    q: f64,
    p: f64,
) -> f64 {
    let (x, y, z, w) = (amps.x.re, amps.y.re, amps.z.re, amps.w.re);
    let u = params.u();
    let k = params.k();
    let k1 = params.k1();
    let s = q * q + p * p;
    let arg = 2.0 * s;
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();

    // e^{−s} L_m^d(2s)
    let l0 = scaled_laguerre_series(cutoff + 4, 0, arg, -s);
    let l1 = scaled_laguerre_series(cutoff + 1, 1, arg, -s);
    let l2 = scaled_laguerre_series(cutoff + 2, 2, arg, -s);
    let l3 = scaled_laguerre_series(cutoff + 1, 3, arg, -s);
    let l4 = scaled_laguerre_series(cutoff, 4, arg, -s);

    let quad_diff = q * q - p * p;
    let xw_poly = q * q + p * p - 6.0 * q * q * p * p;
    let cubic = q * q * q - 3.0 * q * p * p;

    let mut sum = 0.0;
    for n in 0..=cutoff {
        let nf = n as f64;
        let braces = 2.0 * x * x * l0[n] - 2.0 * y * y / u * (nf + 1.0) * l0[n + 1]
            + z * z * (nf + 1.0) * (nf + 2.0) / u.powi(4) * l0[n + 2]
            + 2.0 * w * w * (nf + 1.0) * (nf + 2.0) * (nf + 3.0) * (nf + 4.0) / (24.0 * u.powi(8))
                * l0[n + 4]
            + 4.0 * s2 * x * y / u * q * l1[n]
            + 4.0 * s2 * x * z / u.powi(2) * quad_diff * l2[n]
            + 4.0 * s6 * x * w / (3.0 * u.powi(4)) * xw_poly * l4[n]
            - 4.0 * (nf + 1.0) * y * z / u.powi(3) * q * l1[n + 1]
            + 4.0 * s3 * (nf + 1.0) * y * w / (3.0 * u.powi(5)) * cubic * l3[n + 1]
            + 2.0 * s3 * (nf + 1.0) * (nf + 2.0) * w * z / (3.0 * u.powi(6))
                * quad_diff
                * l2[n + 2];
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += pow0(k1, n) * sign * braces;
    }
    k * sum
}

/// Closed-form grid compared against the numeric grid on the same points.
#[derive(Debug, Clone)]
pub struct WignerComparison {
    pub closed_form: WignerGrid,
    pub numeric: WignerGrid,
    pub max_abs_discrepancy: f64,
    /// `Σ |W_closed − W_numeric| Δq Δp`.
    pub integrated_abs_discrepancy: f64,
    /// Integrals of the two grids as numeric / closed-form values.
    pub report: ObservableReport,
}

pub fn wigner_closed_form(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    spec: &GridSpec,
    trunc: &Truncation,
) -> Result<WignerComparison> {
    let closed_form = wigner_closed_form_grid(amps, params, spec, trunc.cutoff())?;
    let rho = thermal_state_density_expansion(amps, params, trunc)?;
    let numeric = wigner_from_density(&rho, spec)?;
    let diffs = closed_form
        .values
        .iter()
        .zip(numeric.values.iter())
        .map(|(a, b)| (a - b).abs());
    let (max_abs, total) = diffs.fold((0.0f64, 0.0), |(m, t), d| (m.max(d), t + d));
    let report = ObservableReport::new(
        numeric.integral(),
        Some(closed_form.integral()),
        ReportParams::new(amps, params, trunc),
    );
    Ok(WignerComparison {
        max_abs_discrepancy: max_abs,
        integrated_abs_discrepancy: total * numeric.cell_area,
        closed_form,
        numeric,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockVector;
    use crate::tfd::thermal_vacuum_density;
    use crate::thermal::bogoliubov_factors;
    use approx::assert_abs_diff_eq;

    fn origin_only() -> GridSpec {
        GridSpec {
            q_min: 0.0,
            q_max: 1.0,
            nq: 2,
            p_min: 0.0,
            p_max: 1.0,
            np: 2,
            length_scale: 1.0,
        }
    }

    fn fock_projector(n: usize, cutoff: usize) -> FockMatrix {
        FockMatrix::projector(&FockVector::number_state(n, cutoff).unwrap())
    }

    #[test]
    fn vacuum_and_single_photon_at_origin() {
        let g = wigner_from_density(&fock_projector(0, 4), &origin_only()).unwrap();
        assert_abs_diff_eq!(g.values[[0, 0]], 1.0 / PI, epsilon = 1e-14);
        let g = wigner_from_density(&fock_projector(1, 4), &origin_only()).unwrap();
        assert_abs_diff_eq!(g.values[[0, 0]], -1.0 / PI, epsilon = 1e-14);
    }

    #[test]
    fn fock_state_profile() {
        // W_n(q, p) = (−1)ⁿ/π e^{−r²} L_n(2r²)
        let spec = GridSpec::square(3.0, 13);
        let g = wigner_from_density(&fock_projector(3, 6), &spec).unwrap();
        for (q, p, w) in g.points() {
            let r2 = q * q + p * p;
            let expected = -(-r2).exp() * crate::observables::laguerre_assoc(3, 0, 2.0 * r2) / PI;
            assert_abs_diff_eq!(w, expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn thermal_state_is_gaussian() {
        let params = bogoliubov_factors(2.0).unwrap();
        let trunc = Truncation::auto(&params, 1e-12).unwrap();
        let rho = thermal_vacuum_density(&params, &trunc).unwrap();
        let spec = GridSpec::square(6.0, 25);
        let g = wigner_from_density(&rho, &spec).unwrap();
        let width = 2.0 * params.n_bar() + 1.0;
        for (q, p, w) in g.points() {
            let expected = (-(q * q + p * p) / width).exp() / (PI * width);
            assert_abs_diff_eq!(w, expected, epsilon = 1e-11);
        }
    }

    #[test]
    fn coherent_superposition_displaces_in_the_right_direction() {
        // (|0⟩ + i|1⟩)/√2 has ⟨q⟩ = 0 and ⟨p⟩ = 1/√2 · √2 · ... > 0
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut data = ndarray::Array1::zeros(3);
        data[0] = Complex64::new(h, 0.0);
        data[1] = Complex64::new(0.0, h);
        let psi = FockVector::from_array(data, 2, 1).unwrap();
        let rho = FockMatrix::projector(&psi);
        let spec = GridSpec::square(8.0, 161);
        let g = wigner_from_density(&rho, &spec).unwrap();
        let (mut mq, mut mp) = (0.0, 0.0);
        for (q, p, w) in g.points() {
            mq += q * w * g.cell_area;
            mp += p * w * g.cell_area;
        }
        // ⟨a⟩ = i/2, so ⟨q⟩ = √2 Re⟨a⟩ = 0 and ⟨p⟩ = √2 Im⟨a⟩ = 1/√2
        assert_abs_diff_eq!(mq, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mp, h, epsilon = 1e-10);
    }

    #[test]
    fn origin_equals_scaled_parity() {
        let params = bogoliubov_factors(0.3).unwrap();
        let trunc = Truncation::auto(&params, 1e-10).unwrap();
        let rho = thermal_state_density_expansion(&PhysicalAmplitudes::showcase(), &params, &trunc)
            .unwrap();
        let g = wigner_from_density(&rho, &origin_only()).unwrap();
        let parity: f64 = (0..rho.dim())
            .map(|n| {
                if n % 2 == 0 {
                    rho[(n, n)].re
                } else {
                    -rho[(n, n)].re
                }
            })
            .sum();
        assert_abs_diff_eq!(g.values[[0, 0]], parity / PI, epsilon = 1e-10);
    }

    #[test]
    fn linear_in_the_density_matrix() {
        let a = fock_projector(1, 5);
        let b = FockMatrix::projector(&PhysicalAmplitudes::showcase().to_fock_vector(5).unwrap());
        let t = 0.3;
        let mix = a
            .scale(Complex64::new(t, 0.0))
            .add(&b.scale(Complex64::new(1.0 - t, 0.0)))
            .unwrap();
        let spec = GridSpec::square(4.0, 33);
        let wa = wigner_from_density(&a, &spec).unwrap();
        let wb = wigner_from_density(&b, &spec).unwrap();
        let wm = wigner_from_density(&mix, &spec).unwrap();
        let expected = &wa.values * t + &wb.values * (1.0 - t);
        let worst = (&wm.values - &expected)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-12);
    }

    #[test]
    fn rejects_two_mode_and_non_hermitian_input() {
        let two = FockMatrix::identity(2, 2).unwrap();
        assert!(matches!(
            wigner_from_density(&two, &origin_only()),
            Err(Error::ModeCount { .. })
        ));
        let mut data = Array2::zeros((3, 3));
        data[[1, 0]] = Complex64::new(1.0, 0.0);
        let skew = FockMatrix::from_array(data, 2, 1).unwrap();
        let spec = GridSpec::square(2.0, 5);
        assert!(matches!(
            wigner_from_density(&skew, &spec),
            Err(Error::ComplexWigner { .. })
        ));
    }

    #[test]
    fn normalization_of_showcase_state() {
        let params = bogoliubov_factors(0.3).unwrap();
        let trunc = Truncation::auto(&params, 1e-10).unwrap();
        let rho = thermal_state_density_expansion(&PhysicalAmplitudes::showcase(), &params, &trunc)
            .unwrap();
        let g = wigner_from_density(&rho, &GridSpec::default()).unwrap();
        assert_abs_diff_eq!(g.integral(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn adaptive_grid_widens_for_hot_states() {
        let params = bogoliubov_factors(10.0).unwrap();
        let trunc = Truncation::auto(&params, 1e-10).unwrap();
        let rho = thermal_vacuum_density(&params, &trunc).unwrap();
        let spec = GridSpec::square(8.0, 129);
        assert!((wigner_from_density(&rho, &spec).unwrap().integral() - 1.0).abs() > 1e-6);
        let g = wigner_from_density_adaptive(&rho, &spec, DEFAULT_GRID_TOL).unwrap();
        assert!(g.spec.half_width() > 8.0);
        assert_abs_diff_eq!(g.integral(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn adaptive_grid_gives_up_past_the_cap() {
        let rho = fock_projector(0, 4);
        let spec = GridSpec::square(0.5, 5);
        assert!(matches!(
            wigner_from_density_adaptive(&rho, &spec, 1e-12),
            Err(Error::GridWideningExhausted { .. })
        ));
    }

    #[test]
    fn negativity_examples() {
        let spec = GridSpec::square(6.0, 201);
        let vac = wigner_from_density(&fock_projector(0, 4), &spec).unwrap();
        assert!(wigner_negativity(&vac) < 1e-12);

        let one = wigner_from_density(&fock_projector(1, 4), &spec).unwrap();
        let coarse = wigner_negativity(&one);
        let fine = wigner_negativity(
            &wigner_from_density(&fock_projector(1, 4), &GridSpec::square(6.0, 401)).unwrap(),
        );
        // ∫_{r² < 1/2} (1/π) e^{−r²} (1 − 2r²) dq dp = 2e^{−1/2} − 1
        let exact = 2.0 * (-0.5f64).exp() - 1.0;
        assert!(coarse > 0.0);
        assert!((coarse - fine).abs() / fine < 0.01);
        assert!((fine - exact).abs() / exact < 0.01);
    }

    #[test]
    fn closed_form_vacuum_family_matches_thermal_gaussian() {
        let amps = PhysicalAmplitudes::real(1.0, 0.0, 0.0, 0.0).unwrap();
        for n_bar in [0.0, 0.3, 2.0] {
            let params = bogoliubov_factors(n_bar).unwrap();
            let trunc = Truncation::auto(&params, 1e-12).unwrap();
            let cmp =
                wigner_closed_form(&amps, &params, &GridSpec::square(5.0, 21), &trunc).unwrap();
            assert!(
                cmp.max_abs_discrepancy < 1e-10,
                "n̄ = {n_bar}: {}",
                cmp.max_abs_discrepancy
            );
        }
    }

    #[test]
    fn closed_form_rejects_complex_amplitudes() {
        let amps = PhysicalAmplitudes::showcase().with_global_phase(0.5);
        let params = bogoliubov_factors(0.1).unwrap();
        assert_eq!(
            wigner_closed_form_grid(&amps, &params, &origin_only(), 10).unwrap_err(),
            Error::ComplexAmplitudes
        );
    }
}
