use thiserror::Error;

use crate::fock::Mode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cutoff must be at least {min}, got {cutoff}")]
    InvalidCutoff { cutoff: usize, min: usize },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("expected a {expected}-mode operand, got {actual}-mode")]
    ModeCount { expected: usize, actual: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("beta*omega must be positive, got {0}")]
    NonPositiveBetaOmega(f64),

    #[error("mean occupation must be finite and non-negative, got {0}")]
    InvalidOccupation(f64),

    #[error("tail tolerance must lie in (0, 1), got {0}")]
    InvalidTailTolerance(f64),

    #[error(
        "cutoff {cutoff} too small for n_bar = {n_bar}: tail mass {tail_mass:e} exceeds {tail_tol:e}"
    )]
    CutoffInsufficient {
        cutoff: usize,
        n_bar: f64,
        tail_mass: f64,
        tail_tol: f64,
    },

    #[error(
        "n_bar = {n_bar} needs a cutoff above the cap of {cap} at tail tolerance {tail_tol:e}"
    )]
    CutoffCapExceeded {
        n_bar: f64,
        tail_tol: f64,
        cap: usize,
    },

    #[error("doubled-space cutoff {cutoff} exceeds the dense limit of {cap}")]
    DoubledSpaceTooLarge { cutoff: usize, cap: usize },

    #[error("amplitudes are not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("gate is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("Mandel parameter undefined: mean photon number is zero")]
    UndefinedMandel,

    #[error("closed-form Wigner function requires real amplitudes")]
    ComplexAmplitudes,

    #[error("cannot keep mode {keep:?} of a single-mode operator")]
    NothingToTrace { keep: Mode },

    #[error("Wigner function has imaginary residue {residue:e}; density matrix is not Hermitian")]
    ComplexWigner { residue: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "Wigner grid normalization {integral} still differs from trace {trace} beyond {grid_tol:e} at half-width {half_width}"
    )]
    GridWideningExhausted {
        integral: f64,
        trace: f64,
        grid_tol: f64,
        half_width: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
