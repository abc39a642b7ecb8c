//! Thermofield dynamics of a single bosonic mode.
//!
//! The thermal vacuum `|0(β)⟩ = U(β)|0,0̃⟩` purifies the Bose–Einstein state
//! in the doubled space. A pure superposition `x|0⟩ + y|1⟩ + z|2⟩ + w|4⟩` is
//! thermalized by replacing each `|n⟩` with `|n(β)⟩ = (a†)ⁿ|0(β)⟩ / (√n! uⁿ)`.
//! Its single-mode density matrix can be reached three ways, all built here:
//!
//! * [`thermal_state_density_expansion`]: the sixteen explicit Fock-basis
//!   series of the expanded density operator;
//! * [`thermal_state_density_operator`]: `f ρ_β f†` with the polynomial
//!   `f = x + y a†/u + z (a†)²/(√2 u²) + w (a†)⁴/(√4! u⁴)`;
//! * [`doubled_space_density`]: the reduction of `|Ψ(β)⟩` after building the
//!   Bogoliubov unitary explicitly.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::fock::{build_ladder, composite_index, lift, FockMatrix, FockVector, Mode};
use crate::thermal::{shifted_tail_mass, vacuum_tail_mass, ThermalParams, Truncation};

/// Fock levels carrying the four physical amplitudes.
pub const AMPLITUDE_LEVELS: [usize; 4] = [0, 1, 2, 4];

const NORM_TOL: f64 = 1e-12;

/// Amplitudes `(x, y, z, w)` on the Fock states `|0⟩, |1⟩, |2⟩, |4⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalAmplitudes {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub w: Complex64,
}

impl PhysicalAmplitudes {
    /// Checks normalization to within `1e-12`.
    pub fn new(x: Complex64, y: Complex64, z: Complex64, w: Complex64) -> Result<Self> {
        let amps = Self { x, y, z, w };
        let norm_sqr = amps.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(amps)
    }

    pub fn real(x: f64, y: f64, z: f64, w: f64) -> Result<Self> {
        Self::new(x.into(), y.into(), z.into(), w.into())
    }

    /// Rescales to unit norm. Returns the amplitudes and the original `‖·‖²`.
    pub fn normalized(
        x: Complex64,
        y: Complex64,
        z: Complex64,
        w: Complex64,
    ) -> Result<(Self, f64)> {
        let raw = Self { x, y, z, w };
        let norm_sqr = raw.norm_sqr();
        if !norm_sqr.is_finite() || norm_sqr <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let s = Complex64::new(norm_sqr.sqrt().recip(), 0.0);
        Ok((
            Self {
                x: x * s,
                y: y * s,
                z: z * s,
                w: w * s,
            },
            norm_sqr,
        ))
    }

    /// `x = 0.2, y = 0.3, z = 0.6, w = √0.51`.
    pub fn showcase() -> Self {
        Self {
            x: 0.2.into(),
            y: 0.3.into(),
            z: 0.6.into(),
            w: 0.51f64.sqrt().into(),
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.as_array().iter().all(|c| c.im == 0.0)
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let p = Complex64::from_polar(1.0, phi);
        Self {
            x: self.x * p,
            y: self.y * p,
            z: self.z * p,
            w: self.w * p,
        }
    }

    /// `(level, amplitude)` pairs.
    pub fn levels(&self) -> impl Iterator<Item = (usize, Complex64)> {
        AMPLITUDE_LEVELS.into_iter().zip(self.as_array())
    }

    /// The pure state `x|0⟩ + y|1⟩ + z|2⟩ + w|4⟩`.
    pub fn to_fock_vector(&self, cutoff: usize) -> Result<FockVector> {
        let mut data = ndarray::Array1::zeros(cutoff + 1);
        for (level, amp) in self.levels() {
            if level > cutoff {
                return Err(Error::InvalidCutoff { cutoff, min: level });
            }
            data[level] = amp;
        }
        FockVector::from_array(data, cutoff, 1)
    }

    /// Trace weight of the thermalized state above the cutoff.
    pub fn tail_mass(&self, params: &ThermalParams, cutoff: usize) -> f64 {
        self.levels()
            .map(|(level, amp)| amp.norm_sqr() * shifted_tail_mass(params, level, cutoff))
            .sum()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Geometric thermal state `k Σ k₁ⁿ |n⟩⟨n|` truncated at the cutoff.
pub fn thermal_vacuum_density(params: &ThermalParams, trunc: &Truncation) -> Result<FockMatrix> {
    trunc.check_tail(params, vacuum_tail_mass(params, trunc.cutoff()))?;
    Ok(FockMatrix::from_diagonal(
        trunc.cutoff(),
        (0..=trunc.cutoff()).map(|n| params.thermal_weight(n)),
    ))
}

/// One series `coefficient · Σₙ k k₁ⁿ weight(n) |n+ket⟩⟨n+bra|`.
struct SeriesTerm {
    ket: usize,
    bra: usize,
    coefficient: Complex64,
    weight: fn(f64) -> f64,
}

/// Density matrix of the thermalized state assembled from its sixteen
/// Fock-basis series, each truncated where its ket or bra leaves the space.
pub fn thermal_state_density_expansion(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<FockMatrix> {
    let cutoff = trunc.cutoff();
    trunc.check_tail(params, amps.tail_mass(params, cutoff))?;

    let PhysicalAmplitudes { x, y, z, w } = *amps;
    let (xc, yc, zc, wc) = (x.conj(), y.conj(), z.conj(), w.conj());
    let u = params.u();
    let s2 = 2f64.sqrt();
    let s24 = 24f64.sqrt();

    let terms = [
        SeriesTerm {
            ket: 0,
            bra: 0,
            coefficient: real(x.norm_sqr()),
            weight: |_| 1.0,
        },
        SeriesTerm {
            ket: 1,
            bra: 0,
            coefficient: xc * y / u,
            weight: |n| (n + 1.0).sqrt(),
        },
        SeriesTerm {
            ket: 2,
            bra: 0,
            coefficient: xc * z / (s2 * u.powi(2)),
            weight: |n| ((n + 1.0) * (n + 2.0)).sqrt(),
        },
        SeriesTerm {
            ket: 4,
            bra: 0,
            coefficient: xc * w / (s24 * u.powi(4)),
            weight: |n| ((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 0,
            bra: 1,
            coefficient: yc * x / u,
            weight: |n| (n + 1.0).sqrt(),
        },
        SeriesTerm {
            ket: 1,
            bra: 1,
            coefficient: real(y.norm_sqr() / u.powi(2)),
            weight: |n| n + 1.0,
        },
        SeriesTerm {
            ket: 2,
            bra: 1,
            coefficient: yc * z / (s2 * u.powi(3)),
            weight: |n| (n + 1.0) * (n + 2.0).sqrt(),
        },
        SeriesTerm {
            ket: 4,
            bra: 1,
            coefficient: yc * w / (s24 * u.powi(5)),
            weight: |n| (n + 1.0) * ((n + 2.0) * (n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 0,
            bra: 2,
            coefficient: zc * x / (s2 * u.powi(2)),
            weight: |n| ((n + 1.0) * (n + 2.0)).sqrt(),
        },
        SeriesTerm {
            ket: 1,
            bra: 2,
            coefficient: zc * y / (s2 * u.powi(3)),
            weight: |n| (n + 1.0) * (n + 2.0).sqrt(),
        },
        SeriesTerm {
            ket: 2,
            bra: 2,
            coefficient: real(z.norm_sqr() / (2.0 * u.powi(4))),
            weight: |n| (n + 1.0) * (n + 2.0),
        },
        SeriesTerm {
            ket: 4,
            bra: 2,
            coefficient: zc * w / (s2 * s24 * u.powi(6)),
            weight: |n| (n + 1.0) * (n + 2.0) * ((n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 0,
            bra: 4,
            coefficient: wc * x / (s24 * u.powi(4)),
            weight: |n| ((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 1,
            bra: 4,
            coefficient: wc * y / (s24 * u.powi(5)),
            weight: |n| (n + 1.0) * ((n + 2.0) * (n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 2,
            bra: 4,
            coefficient: wc * z / (s24 * s2 * u.powi(6)),
            weight: |n| (n + 1.0) * (n + 2.0) * ((n + 3.0) * (n + 4.0)).sqrt(),
        },
        SeriesTerm {
            ket: 4,
            bra: 4,
            coefficient: real(w.norm_sqr() / (24.0 * u.powi(8))),
            weight: |n| (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0),
        },
    ];

    let mut data = ndarray::Array2::zeros((cutoff + 1, cutoff + 1));
    for term in &terms {
        let top = term.ket.max(term.bra);
        for n in 0..=cutoff.saturating_sub(top) {
            let value = params.thermal_weight(n) * (term.weight)(n as f64);
            data[[n + term.ket, n + term.bra]] += term.coefficient * value;
        }
    }
    FockMatrix::from_array(data, cutoff, 1)
}

/// `f ρ_β f†` with `f` the creation-operator polynomial of the state.
///
/// Built with four spare levels so `(a†)⁴` never clips a retained entry, then
/// cropped back to the requested cutoff.
pub fn thermal_state_density_operator(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<FockMatrix> {
    let cutoff = trunc.cutoff();
    trunc.check_tail(params, amps.tail_mass(params, cutoff))?;

    let work = cutoff + 4;
    let (_, raising) = build_ladder(work)?;
    let rho_beta = FockMatrix::from_diagonal(work, (0..=work).map(|n| params.thermal_weight(n)));
    let f = creation_polynomial(amps, params, &raising)?;
    f.matmul(&rho_beta)?.matmul(&f.adjoint())?.crop(cutoff)
}

/// `x + y a†/u + z (a†)²/(√2 u²) + w (a†)⁴/(√4! u⁴)`.
fn creation_polynomial(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    raising: &FockMatrix,
) -> Result<FockMatrix> {
    let u = params.u();
    let mut f = FockMatrix::zeros(raising.cutoff(), 1)?;
    let mut power = FockMatrix::identity(raising.cutoff(), 1)?;
    let mut level = 0;
    for (target, amp) in amps.levels() {
        while level < target {
            power = power.matmul(raising)?;
            level += 1;
        }
        let norm = factorial(level).sqrt() * u.powi(level as i32);
        f = f.add(&power.scale(amp / norm))?;
    }
    Ok(f)
}

/// Largest per-mode cutoff for which doubled-space operators are built densely.
pub const DOUBLED_SPACE_CUTOFF_CAP: usize = 64;

/// `U(β) = exp(θ (a†ã† − aã))` on the doubled space.
///
/// The real generator gives `U(β)|0,0̃⟩ = sech θ Σ tanhⁿθ |n,ñ⟩` with
/// nonnegative coefficients, matching the geometric thermal state.
pub fn bogoliubov_unitary(params: &ThermalParams, trunc: &Truncation) -> Result<FockMatrix> {
    let cutoff = trunc.cutoff();
    if cutoff > DOUBLED_SPACE_CUTOFF_CAP {
        return Err(Error::DoubledSpaceTooLarge {
            cutoff,
            cap: DOUBLED_SPACE_CUTOFF_CAP,
        });
    }
    trunc.check_tail(params, vacuum_tail_mass(params, cutoff))?;
    let theta = params.theta();
    let d = cutoff + 1;
    let mut generator = Array2::zeros((d * d, d * d));
    for n in 0..cutoff {
        for m in 0..cutoff {
            let amp = real(theta * (((n + 1) * (m + 1)) as f64).sqrt());
            let lower = composite_index(n, m, cutoff);
            let upper = composite_index(n + 1, m + 1, cutoff);
            generator[[upper, lower]] = amp;
            generator[[lower, upper]] = -amp;
        }
    }
    let generator = FockMatrix::from_array(generator, cutoff, 2)?;
    matrix_exponential(&generator)
}

/// `|0(β)⟩ = U(β)|0,0̃⟩`.
pub fn thermal_vacuum_state(params: &ThermalParams, trunc: &Truncation) -> Result<FockVector> {
    let u = bogoliubov_unitary(params, trunc)?;
    u.apply(&FockVector::two_mode_number_state(0, 0, trunc.cutoff())?)
}

/// `|0(β)⟩, |1(β)⟩, |2(β)⟩, |4(β)⟩` in the doubled space.
pub fn thermal_number_states(
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<[FockVector; 4]> {
    let vacuum = thermal_vacuum_state(params, trunc)?;
    let (_, ad) = build_ladder(trunc.cutoff())?;
    let raise = lift(&ad, Mode::Original)?;
    let u = params.u();

    let mut current = vacuum.clone();
    let mut level = 0;
    let mut states = Vec::with_capacity(4);
    for target in AMPLITUDE_LEVELS {
        while level < target {
            current = raise.apply(&current)?;
            level += 1;
        }
        let norm = factorial(level).sqrt() * u.powi(level as i32);
        states.push(current.scale(real(norm.recip())));
    }
    Ok(states.try_into().expect("four levels"))
}

/// `|Ψ(β)⟩ = x|0(β)⟩ + y|1(β)⟩ + z|2(β)⟩ + w|4(β)⟩`.
pub fn thermalized_state(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<FockVector> {
    let states = thermal_number_states(params, trunc)?;
    let mut psi = FockVector::zeros(trunc.cutoff(), 2)?;
    for (state, amp) in states.iter().zip(amps.as_array()) {
        psi = psi.add(&state.scale(amp))?;
    }
    Ok(psi)
}

/// Single-mode reduction of `|Ψ(β)⟩`, built with four spare levels on both
/// modes and cropped back to the requested cutoff.
pub fn doubled_space_density(
    amps: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<FockMatrix> {
    let cutoff = trunc.cutoff();
    trunc.check_tail(params, amps.tail_mass(params, cutoff))?;
    let padded = trunc.with_cutoff(cutoff + 4);
    thermalized_state(amps, params, &padded)?
        .reduced_density(Mode::Original)?
        .crop(cutoff)
}

/// Tolerance on `‖G†G − I‖` accepted for gates.
pub const GATE_UNITARITY_TOL: f64 = 1e-10;

/// Norm of `U_L(β)|ψ′(β)⟩ − U(β)|ψ, 0̃⟩`, where `U_L(β) = U(β)(U_L ⊗ I)U†(β)`,
/// `|ψ′(β)⟩ = U(β)|ψ′, 0̃⟩` and `|ψ⟩ = U_L|ψ′⟩`.
///
/// The operators are applied to vectors one at a time, so the doubled-space
/// gate is never formed as a matrix.
pub fn gate_thermalization_residual(
    gate: &FockMatrix,
    amps_in: &PhysicalAmplitudes,
    params: &ThermalParams,
    trunc: &Truncation,
) -> Result<f64> {
    gate.require_single_mode()?;
    if gate.cutoff() != trunc.cutoff() {
        return Err(Error::CutoffMismatch {
            left: gate.cutoff(),
            right: trunc.cutoff(),
        });
    }
    let deviation = gate.unitarity_defect();
    if deviation.is_nan() || deviation > GATE_UNITARITY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let cutoff = trunc.cutoff();
    let bogoliubov = bogoliubov_unitary(params, trunc)?;
    let bogoliubov_dag = bogoliubov.adjoint();
    let gate_doubled = lift(gate, Mode::Original)?;

    let tilde_vacuum = FockVector::number_state(0, cutoff)?;
    let psi_in = amps_in.to_fock_vector(cutoff)?;
    let psi_out = gate.apply(&psi_in)?;
    let doubled_in = product_state(&psi_in, &tilde_vacuum)?;
    let doubled_out = product_state(&psi_out, &tilde_vacuum)?;

    let thermal_in = bogoliubov.apply(&doubled_in)?;
    let lhs = bogoliubov.apply(&gate_doubled.apply(&bogoliubov_dag.apply(&thermal_in)?)?)?;
    let rhs = bogoliubov.apply(&doubled_out)?;
    lhs.distance(&rhs)
}

/// `|φ⟩ ⊗ |χ̃⟩`.
pub fn product_state(original: &FockVector, tilde: &FockVector) -> Result<FockVector> {
    if original.mode_count() != 1 || tilde.mode_count() != 1 {
        return Err(Error::ModeCount {
            expected: 1,
            actual: 2,
        });
    }
    if original.cutoff() != tilde.cutoff() {
        return Err(Error::CutoffMismatch {
            left: original.cutoff(),
            right: tilde.cutoff(),
        });
    }
    let cutoff = original.cutoff();
    let d = cutoff + 1;
    let data = ndarray::Array1::from_shape_fn(d * d, |i| tilde[i / d] * original[i % d]);
    FockVector::from_array(data, cutoff, 2)
}
