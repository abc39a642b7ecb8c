//! Temperature scalars of the thermal vacuum and the Fock cutoff policy.

use crate::error::{Error, Result};

/// Default bound on the trace weight discarded by truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Hard ceiling on automatically selected cutoffs.
pub const CUTOFF_CAP: usize = 512;

/// Largest photon number added on top of the thermal vacuum (the `|4⟩` leg).
pub const MAX_SHIFT: usize = 4;

/// `n̄ = 1 / (e^{βω} − 1)`.
pub fn mean_occupation(beta_omega: f64) -> Result<f64> {
    if beta_omega.is_nan() || beta_omega <= 0.0 {
        return Err(Error::NonPositiveBetaOmega(beta_omega));
    }
    Ok(1.0 / beta_omega.exp_m1())
}

/// Inverse of [`mean_occupation`]: `βω = ln(1 + 1/n̄)`. Zero occupation maps to `+∞`.
pub fn beta_omega_for(n_bar: f64) -> Result<f64> {
    if !n_bar.is_finite() || n_bar < 0.0 {
        return Err(Error::InvalidOccupation(n_bar));
    }
    if n_bar == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 / n_bar).ln_1p())
}

/// Temperature-dependent scalars of a single thermalized mode.
///
/// `u = cosh θ = √(1 + n̄)` and `v = sinh θ = √n̄`; the thermal vacuum reduces
/// to the geometric distribution `k · k₁ⁿ` with `k = 1/(1+n̄)` and
/// `k₁ = n̄/(1+n̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    beta_omega: f64,
    n_bar: f64,
    u: f64,
    v: f64,
    theta: f64,
}

impl ThermalParams {
    pub fn from_occupation(n_bar: f64) -> Result<Self> {
        bogoliubov_factors(n_bar)
    }

    pub fn from_beta_omega(beta_omega: f64) -> Result<Self> {
        let n_bar = mean_occupation(beta_omega)?;
        let mut params = bogoliubov_factors(n_bar)?;
        params.beta_omega = beta_omega;
        Ok(params)
    }

    pub fn zero_temperature() -> Self {
        Self {
            beta_omega: f64::INFINITY,
            n_bar: 0.0,
            u: 1.0,
            v: 0.0,
            theta: 0.0,
        }
    }

    pub fn beta_omega(&self) -> f64 {
        self.beta_omega
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `k = 1 / (1 + n̄)`, the vacuum weight of the thermal distribution.
    pub fn k(&self) -> f64 {
        1.0 / (1.0 + self.n_bar)
    }

    /// `k₁ = n̄ / (1 + n̄)`, the geometric ratio (equals `tanh² θ`).
    pub fn k1(&self) -> f64 {
        self.n_bar / (1.0 + self.n_bar)
    }

    /// `k · k₁ⁿ` with `0⁰ = 1`.
    pub fn thermal_weight(&self, n: usize) -> f64 {
        self.k() * pow0(self.k1(), n)
    }
}

/// `base^exp` with the convention `0⁰ = 1`.
pub(crate) fn pow0(base: f64, exp: usize) -> f64 {
    if exp == 0 {
        1.0
    } else {
        base.powi(exp as i32)
    }
}

/// Bogoliubov factors for a given mean occupation.
pub fn bogoliubov_factors(n_bar: f64) -> Result<ThermalParams> {
    let beta_omega = beta_omega_for(n_bar)?;
    let v = n_bar.sqrt();
    Ok(ThermalParams {
        beta_omega,
        n_bar,
        u: (1.0 + n_bar).sqrt(),
        v,
        theta: v.asinh(),
    })
}

/// Trace weight above `cutoff` of the thermal vacuum: `k₁^{cutoff+1}`.
pub fn vacuum_tail_mass(params: &ThermalParams, cutoff: usize) -> f64 {
    pow0(params.k1(), cutoff + 1)
}

/// Trace weight above `cutoff` of the `shift`-photon-added thermal state
/// `(a†)^s ρ_β a^s / (s! u^{2s})`, whose occupation `m = n + s` carries weight
/// `C(n+s, s) k^{s+1} k₁ⁿ`.
pub fn shifted_tail_mass(params: &ThermalParams, shift: usize, cutoff: usize) -> f64 {
    if cutoff < shift {
        return 1.0;
    }
    let k = params.k();
    let k1 = params.k1();
    if k1 == 0.0 {
        return 0.0;
    }
    let first = cutoff - shift + 1;
    let s = shift as f64;
    // log of the first neglected term
    let log_binom: f64 = (1..=shift)
        .map(|i| ((first + i) as f64 / i as f64).ln())
        .sum();
    let mut term = (log_binom + (s + 1.0) * k.ln() + first as f64 * k1.ln()).exp();
    let mut total = 0.0;
    let mut n = first as f64;
    loop {
        total += term;
        let ratio = k1 * (n + 1.0 + s) / (n + 1.0);
        term *= ratio;
        n += 1.0;
        if term == 0.0 || (ratio < 1.0 && term < total * 1e-17) {
            break;
        }
    }
    total
}

/// A cutoff together with the tail tolerance it must honor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    cutoff: usize,
    tail_tol: f64,
}

impl Truncation {
    pub fn new(cutoff: usize, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidTailTolerance(tail_tol));
        }
        if cutoff < MAX_SHIFT {
            return Err(Error::InvalidCutoff {
                cutoff,
                min: MAX_SHIFT,
            });
        }
        Ok(Self { cutoff, tail_tol })
    }

    /// Fixed cutoff with [`DEFAULT_TAIL_TOL`].
    pub fn fixed(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, DEFAULT_TAIL_TOL)
    }

    /// Smallest cutoff at which even the four-photon-added component of a
    /// thermalized state loses less than `tail_tol` of its trace.
    pub fn auto(params: &ThermalParams, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidTailTolerance(tail_tol));
        }
        for cutoff in MAX_SHIFT..=CUTOFF_CAP {
            if shifted_tail_mass(params, MAX_SHIFT, cutoff) < tail_tol {
                return Ok(Self { cutoff, tail_tol });
            }
        }
        Err(Error::CutoffCapExceeded {
            n_bar: params.n_bar(),
            tail_tol,
            cap: CUTOFF_CAP,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        Self {
            cutoff,
            tail_tol: self.tail_tol,
        }
    }

    pub(crate) fn check_tail(&self, params: &ThermalParams, tail_mass: f64) -> Result<()> {
        if tail_mass < self.tail_tol {
            Ok(())
        } else {
            Err(Error::CutoffInsufficient {
                cutoff: self.cutoff,
                n_bar: params.n_bar(),
                tail_mass,
                tail_tol: self.tail_tol,
            })
        }
    }
}
