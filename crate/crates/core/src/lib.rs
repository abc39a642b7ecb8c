//! Thermofield dynamics of a single bosonic mode that encodes two logical qubits.
//!
//! The mode holds the physical state `x|0⟩ + y|1⟩ + z|2⟩ + w|4⟩`. At finite
//! temperature the state is thermalized through a Bogoliubov transformation on
//! a doubled (original ⊗ tilde) Fock space; [`tfd`] builds the resulting
//! density matrix three independent ways and [`observables`] measures how much
//! of the encoded state survives.
//!
//! ```
//! use thermoqubit::{bogoliubov_factors, fidelity_numeric, PhysicalAmplitudes, Truncation};
//!
//! let params = bogoliubov_factors(0.1).unwrap();
//! let trunc = Truncation::auto(&params, 1e-10).unwrap();
//! let f = fidelity_numeric(&PhysicalAmplitudes::showcase(), &params, &trunc).unwrap();
//! assert!(f > 0.8 && f < 0.9);
//! ```

pub mod error;
pub mod expm;
pub mod fock;
pub mod gate;
pub mod observables;
pub mod tfd;
pub mod thermal;

pub use error::{Error, Result};
pub use expm::matrix_exponential;
pub use fock::{
    build_ladder, composite_index, lift, number_operator, partial_trace, tensor_product,
    FockMatrix, FockVector, Mode,
};
pub use gate::{
    cnot_logical, decode, encode, evolve_half_period, half_period_gate_matrix, LogicalState,
};
pub use observables::{
    fidelity_closed_form, fidelity_numeric, mandel_closed_form, mandel_numeric, wigner_closed_form,
    wigner_from_density, wigner_from_density_adaptive, wigner_negativity, GridSpec,
    ObservableReport, WignerGrid,
};
pub use tfd::{
    bogoliubov_unitary, doubled_space_density, gate_thermalization_residual,
    thermal_state_density_expansion, thermal_state_density_operator, thermal_vacuum_density,
    thermal_vacuum_state, thermalized_state, PhysicalAmplitudes,
};
pub use thermal::{
    beta_omega_for, bogoliubov_factors, mean_occupation, ThermalParams, Truncation,
    DEFAULT_TAIL_TOL,
};
