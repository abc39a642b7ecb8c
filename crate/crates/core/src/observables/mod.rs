//! Temperature diagnostics of the thermalized state.
//!
//! Each observable has a numeric path, computed from the density matrix, and a
//! transcription of the reference closed form. The closed forms are never
//! trusted: they are evaluated as written and compared against the numeric
//! value in an [`ObservableReport`].

pub mod fidelity;
pub mod laguerre;
pub mod mandel;
pub mod wigner;

use num_complex::Complex64;

use crate::tfd::PhysicalAmplitudes;
use crate::thermal::{ThermalParams, Truncation};

pub use fidelity::{fidelity_closed_form, fidelity_closed_form_value, fidelity_numeric};
pub use laguerre::{laguerre_assoc, laguerre_function_series, scaled_laguerre_series};
pub use mandel::{
    mandel_closed_form, mandel_closed_form_value, mandel_numeric, MandelCoefficients,
};
pub use wigner::{
    wigner_closed_form, wigner_closed_form_grid, wigner_from_density, wigner_from_density_adaptive,
    wigner_negativity, GridSpec, Normalization, WignerComparison, WignerGrid, CLOSED_FORM_SCALE,
    DEFAULT_GRID_TOL, MAX_HALF_WIDTH,
};

/// Inputs an observable was evaluated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportParams {
    pub amps: [Complex64; 4],
    pub n_bar: f64,
    pub cutoff: usize,
    pub tail_tol: f64,
}

impl ReportParams {
    pub fn new(amps: &PhysicalAmplitudes, params: &ThermalParams, trunc: &Truncation) -> Self {
        Self {
            amps: amps.as_array(),
            n_bar: params.n_bar(),
            cutoff: trunc.cutoff(),
            tail_tol: trunc.tail_tol(),
        }
    }
}

/// Numeric value next to its closed-form counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableReport {
    pub value_numeric: f64,
    pub value_closed_form: Option<f64>,
    pub abs_discrepancy: Option<f64>,
    pub params: ReportParams,
}

impl ObservableReport {
    pub fn new(value_numeric: f64, value_closed_form: Option<f64>, params: ReportParams) -> Self {
        Self {
            value_numeric,
            value_closed_form,
            abs_discrepancy: value_closed_form.map(|c| (value_numeric - c).abs()),
            params,
        }
    }
}
