//! CNOT on two logical qubits stored in one bosonic mode.
//!
//! Logical basis states map onto Fock states as
//!
//! ```text
//! |00⟩_L → |0⟩      |10⟩_L → (|4⟩ + |1⟩)/√2
//! |01⟩_L → |2⟩      |11⟩_L → (|4⟩ − |1⟩)/√2
//! ```
//!
//! Free evolution under `H = ω a†a` for half a period multiplies `|n⟩` by
//! `(−1)ⁿ`, flipping only the `|1⟩` amplitude, which swaps `|10⟩_L` and
//! `|11⟩_L`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockMatrix;
use crate::tfd::PhysicalAmplitudes;

/// Amplitudes on `|00⟩_L, |01⟩_L, |10⟩_L, |11⟩_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalState {
    pub c00: Complex64,
    pub c01: Complex64,
    pub c10: Complex64,
    pub c11: Complex64,
}

impl LogicalState {
    pub fn new(c00: Complex64, c01: Complex64, c10: Complex64, c11: Complex64) -> Result<Self> {
        let s = Self { c00, c01, c10, c11 };
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(s)
    }

    /// Computational basis state; `index` is the two-bit label `0b(control)(target)`.
    pub fn basis(index: usize) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); 4];
        c[index & 3] = Complex64::new(1.0, 0.0);
        Self::from_array(c)
    }

    pub fn from_array(c: [Complex64; 4]) -> Self {
        Self {
            c00: c[0],
            c01: c[1],
            c10: c[2],
            c11: c[3],
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c00, self.c01, self.c10, self.c11]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &LogicalState) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Swaps the `|10⟩_L` and `|11⟩_L` amplitudes.
pub fn cnot_logical(s: &LogicalState) -> LogicalState {
    LogicalState {
        c10: s.c11,
        c11: s.c10,
        ..*s
    }
}

/// Logical amplitudes to Fock amplitudes on `|0⟩, |1⟩, |2⟩, |4⟩`.
pub fn encode(s: &LogicalState) -> PhysicalAmplitudes {
    PhysicalAmplitudes {
        x: s.c00,
        y: (s.c10 - s.c11) * FRAC_1_SQRT_2,
        z: s.c01,
        w: (s.c10 + s.c11) * FRAC_1_SQRT_2,
    }
}

/// Inverse of [`encode`].
pub fn decode(p: &PhysicalAmplitudes) -> LogicalState {
    LogicalState {
        c00: p.x,
        c01: p.z,
        c10: (p.w + p.y) * FRAC_1_SQRT_2,
        c11: (p.w - p.y) * FRAC_1_SQRT_2,
    }
}

/// `cₙ → (−1)ⁿ cₙ` on the occupied levels.
pub fn evolve_half_period(p: &PhysicalAmplitudes) -> PhysicalAmplitudes {
    PhysicalAmplitudes { y: -p.y, ..*p }
}

/// `exp(−iπ a†a)` as the diagonal `(−1)ⁿ`.
pub fn half_period_gate_matrix(cutoff: usize) -> Result<FockMatrix> {
    if cutoff < 4 {
        return Err(Error::InvalidCutoff { cutoff, min: 4 });
    }
    Ok(FockMatrix::from_diagonal(
        cutoff,
        (0..=cutoff).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &PhysicalAmplitudes, b: &PhysicalAmplitudes, tol: f64) -> bool {
        a.as_array()
            .iter()
            .zip(b.as_array())
            .all(|(x, y)| (x - y).norm() < tol)
    }

    fn logical_state() -> impl Strategy<Value = LogicalState> {
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                let raw: Vec<Complex64> = v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
                let n = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                LogicalState::from_array([raw[0] / n, raw[1] / n, raw[2] / n, raw[3] / n])
            })
    }

    #[test]
    fn cnot_truth_table() {
        assert_eq!(
            cnot_logical(&LogicalState::basis(0b10)),
            LogicalState::basis(0b11)
        );
        assert_eq!(
            cnot_logical(&LogicalState::basis(0b11)),
            LogicalState::basis(0b10)
        );
        assert_eq!(
            cnot_logical(&LogicalState::basis(0b00)),
            LogicalState::basis(0b00)
        );
        assert_eq!(
            cnot_logical(&LogicalState::basis(0b01)),
            LogicalState::basis(0b01)
        );
    }

    #[test]
    fn encode_basis_states() {
        let h = FRAC_1_SQRT_2;
        let p = encode(&LogicalState::basis(0b10));
        assert!(close(
            &p,
            &PhysicalAmplitudes {
                x: c(0.0),
                y: c(h),
                z: c(0.0),
                w: c(h)
            },
            1e-15
        ));
        let p = encode(&LogicalState::basis(0b00));
        assert_eq!(
            p,
            PhysicalAmplitudes {
                x: c(1.0),
                y: c(0.0),
                z: c(0.0),
                w: c(0.0)
            }
        );
        let p = encode(&LogicalState::basis(0b01));
        assert_eq!(p.z, c(1.0));
    }

    #[test]
    fn decode_examples() {
        let h = FRAC_1_SQRT_2;
        let s = decode(&PhysicalAmplitudes {
            x: c(0.0),
            y: c(h),
            z: c(0.0),
            w: c(h),
        });
        assert!(s.max_abs_diff(&LogicalState::basis(0b10)) < 1e-15);
        let s = decode(&PhysicalAmplitudes {
            x: c(1.0),
            y: c(0.0),
            z: c(0.0),
            w: c(0.0),
        });
        assert_eq!(s, LogicalState::basis(0b00));
    }

    #[test]
    fn half_period_flips_one_photon_amplitude() {
        let p = PhysicalAmplitudes {
            x: c(0.0),
            y: c(1.0),
            z: c(0.0),
            w: c(0.0),
        };
        assert_eq!(evolve_half_period(&p).y, c(-1.0));
        let back = decode(&evolve_half_period(&encode(&LogicalState::basis(0b10))));
        assert!(back.max_abs_diff(&LogicalState::basis(0b11)) < 1e-15);
    }

    #[test]
    fn gate_matrix_entries_and_action() {
        let g = half_period_gate_matrix(6).unwrap();
        assert_eq!(g[(1, 1)], c(-1.0));
        assert_eq!(g[(4, 4)], c(1.0));
        let p = encode(&LogicalState::basis(0b10));
        let out = g.apply(&p.to_fock_vector(6).unwrap()).unwrap();
        let expected = evolve_half_period(&p).to_fock_vector(6).unwrap();
        assert_eq!(out, expected);
        assert!(half_period_gate_matrix(3).is_err());
    }

    proptest! {
        #[test]
        fn cnot_is_involution(s in logical_state()) {
            prop_assert!(cnot_logical(&cnot_logical(&s)).max_abs_diff(&s) == 0.0);
        }

        #[test]
        fn encode_is_isometry_and_decode_inverts(s in logical_state()) {
            let p = encode(&s);
            prop_assert!((p.norm_sqr() - s.norm_sqr()).abs() < 1e-14);
            prop_assert!(decode(&p).max_abs_diff(&s) < 1e-14);
        }

        #[test]
        fn half_period_conjugates_to_cnot(s in logical_state()) {
            let via_fock = decode(&evolve_half_period(&encode(&s)));
            prop_assert!(via_fock.max_abs_diff(&cnot_logical(&s)) < 1e-12);
            let twice = evolve_half_period(&evolve_half_period(&encode(&s)));
            prop_assert_eq!(twice, encode(&s));
        }
    }
}
