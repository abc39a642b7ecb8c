//! Truncated single- and two-mode Fock spaces.
//!
//! A single mode with cutoff `N` spans `|0⟩..|N⟩`. The doubled (thermofield)
//! space is the tensor product of the original mode with its tilde copy, both
//! truncated at the same cutoff. Two-mode basis states are laid out with the
//! original mode fastest:
//!
//! ```text
//! index(|n, ñ⟩) = ñ · (N + 1) + n
//! ```
//!
//! Operators are stored densely; the largest spaces used here are a few
//! thousand states.

use std::ops::Index;

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which factor of the doubled space an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Original,
    Tilde,
}

/// Composite index of `|n, ñ⟩` in a two-mode space with the given cutoff.
#[inline]
pub fn composite_index(n: usize, n_tilde: usize, cutoff: usize) -> usize {
    n_tilde * (cutoff + 1) + n
}

fn check_mode_count(mode_count: usize) -> Result<()> {
    match mode_count {
        1 | 2 => Ok(()),
        other => Err(Error::ModeCount {
            expected: 1,
            actual: other,
        }),
    }
}

fn space_dim(cutoff: usize, mode_count: usize) -> usize {
    (cutoff + 1).pow(mode_count as u32)
}

/// Dense complex operator on a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    data: Array2<Complex64>,
    cutoff: usize,
    mode_count: usize,
}

impl FockMatrix {
    pub fn zeros(cutoff: usize, mode_count: usize) -> Result<Self> {
        check_mode_count(mode_count)?;
        let dim = space_dim(cutoff, mode_count);
        Ok(Self {
            data: Array2::zeros((dim, dim)),
            cutoff,
            mode_count,
        })
    }

    pub fn identity(cutoff: usize, mode_count: usize) -> Result<Self> {
        check_mode_count(mode_count)?;
        let dim = space_dim(cutoff, mode_count);
        Ok(Self {
            data: Array2::eye(dim),
            cutoff,
            mode_count,
        })
    }

    /// Wraps a raw matrix, checking that its shape matches the space.
    pub fn from_array(data: Array2<Complex64>, cutoff: usize, mode_count: usize) -> Result<Self> {
        check_mode_count(mode_count)?;
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let dim = space_dim(cutoff, mode_count);
        if rows != dim {
            return Err(Error::DimensionMismatch {
                left: rows,
                right: dim,
            });
        }
        Ok(Self {
            data,
            cutoff,
            mode_count,
        })
    }

    /// Single-mode diagonal operator. Missing trailing entries are zero.
    pub fn from_diagonal<I>(cutoff: usize, diagonal: I) -> Self
    where
        I: IntoIterator<Item = f64>,
    {
        let mut data = Array2::zeros((cutoff + 1, cutoff + 1));
        for (n, value) in diagonal.into_iter().take(cutoff + 1).enumerate() {
            data[[n, n]] = Complex64::new(value, 0.0);
        }
        Self {
            data,
            cutoff,
            mode_count: 1,
        }
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn projector(state: &FockVector) -> Self {
        let v = state.data();
        let dim = v.len();
        let data = Array2::from_shape_fn((dim, dim), |(i, j)| v[i] * v[j].conj());
        Self {
            data,
            cutoff: state.cutoff(),
            mode_count: state.mode_count(),
        }
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    fn check_same_space(&self, other: &FockMatrix) -> Result<()> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeCount {
                expected: self.mode_count,
                actual: other.mode_count,
            });
        }
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &FockMatrix) -> Result<FockMatrix> {
        self.check_same_space(other)?;
        Ok(Self {
            data: self.data.dot(&other.data),
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        })
    }

    pub fn add(&self, other: &FockMatrix) -> Result<FockMatrix> {
        self.check_same_space(other)?;
        Ok(Self {
            data: &self.data + &other.data,
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        })
    }

    pub fn sub(&self, other: &FockMatrix) -> Result<FockMatrix> {
        self.check_same_space(other)?;
        Ok(Self {
            data: &self.data - &other.data,
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        })
    }

    pub fn scale(&self, factor: Complex64) -> FockMatrix {
        Self {
            data: &self.data * factor,
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FockMatrix {
        Self {
            data: self.data.t().mapv(|z| z.conj()),
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    /// `tr(self · op)` without forming the product.
    pub fn expectation(&self, op: &FockMatrix) -> Result<Complex64> {
        self.check_same_space(op)?;
        let mut acc = ZERO;
        for (row, op_col) in self.data.outer_iter().zip(op.data.axis_iter(Axis(1))) {
            acc += row.dot(&op_col);
        }
        Ok(acc)
    }

    pub fn apply(&self, state: &FockVector) -> Result<FockVector> {
        if self.mode_count != state.mode_count || self.cutoff != state.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: state.dim(),
            });
        }
        Ok(FockVector {
            data: self.data.dot(&state.data),
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        })
    }

    pub fn max_abs_diff(&self, other: &FockMatrix) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let product = self.adjoint().data.dot(&self.data);
        product
            .indexed_iter()
            .map(|((i, j), z)| if i == j { (z - ONE).norm() } else { z.norm() })
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Restricts a single-mode operator to `|0⟩..|new_cutoff⟩`.
    pub fn crop(&self, new_cutoff: usize) -> Result<FockMatrix> {
        self.require_single_mode()?;
        if new_cutoff > self.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: new_cutoff,
            });
        }
        let keep = new_cutoff + 1;
        Ok(Self {
            data: self.data.slice(ndarray::s![..keep, ..keep]).to_owned(),
            cutoff: new_cutoff,
            mode_count: 1,
        })
    }

    /// Smallest eigenvalue of a Hermitian operator (the Hermitian part is used).
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        let hermitian = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            (self.data[[i, j]] + self.data[[j, i]].conj()) * 0.5
        });
        nalgebra::SymmetricEigen::new(hermitian)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn require_single_mode(&self) -> Result<()> {
        if self.mode_count != 1 {
            return Err(Error::ModeCount {
                expected: 1,
                actual: self.mode_count,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for FockMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[[row, col]]
    }
}

/// Dense state vector on a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    data: Array1<Complex64>,
    cutoff: usize,
    mode_count: usize,
}

impl FockVector {
    pub fn zeros(cutoff: usize, mode_count: usize) -> Result<Self> {
        check_mode_count(mode_count)?;
        Ok(Self {
            data: Array1::zeros(space_dim(cutoff, mode_count)),
            cutoff,
            mode_count,
        })
    }

    /// Single-mode number state `|n⟩`.
    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::InvalidCutoff { cutoff, min: n });
        }
        let mut v = Self::zeros(cutoff, 1)?;
        v.data[n] = ONE;
        Ok(v)
    }

    /// Two-mode number state `|n, ñ⟩`.
    pub fn two_mode_number_state(n: usize, n_tilde: usize, cutoff: usize) -> Result<Self> {
        let top = n.max(n_tilde);
        if top > cutoff {
            return Err(Error::InvalidCutoff { cutoff, min: top });
        }
        let mut v = Self::zeros(cutoff, 2)?;
        v.data[composite_index(n, n_tilde, cutoff)] = ONE;
        Ok(v)
    }

    pub fn from_array(data: Array1<Complex64>, cutoff: usize, mode_count: usize) -> Result<Self> {
        check_mode_count(mode_count)?;
        let dim = space_dim(cutoff, mode_count);
        if data.len() != dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim,
            });
        }
        Ok(Self {
            data,
            cutoff,
            mode_count,
        })
    }

    pub fn data(&self) -> &Array1<Complex64> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.dim() != other.dim() || self.mode_count != other.mode_count {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: Complex64) -> FockVector {
        Self {
            data: &self.data * factor,
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        if self.dim() != other.dim() || self.mode_count != other.mode_count {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data + &other.data,
            cutoff: self.cutoff,
            mode_count: self.mode_count,
        })
    }

    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Reduced density matrix of one mode of a two-mode pure state.
    pub fn reduced_density(&self, keep: Mode) -> Result<FockMatrix> {
        if self.mode_count != 2 {
            return Err(Error::NothingToTrace { keep });
        }
        let d = self.cutoff + 1;
        // amplitudes[[n_tilde, n]] with the original mode along columns
        let amplitudes = self
            .data
            .view()
            .into_shape_with_order((d, d))
            .expect("two-mode vector has (cutoff+1)^2 entries");
        let kept = match keep {
            Mode::Original => amplitudes.t(),
            Mode::Tilde => amplitudes.view(),
        };
        let conj = kept.mapv(|z| z.conj());
        let reduced = kept.dot(&conj.t());
        FockMatrix::from_array(reduced, self.cutoff, 1)
    }
}

impl Index<usize> for FockVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// Lowering and raising operators `(a, a†)` on a mode truncated at `cutoff`.
///
/// `a†` acting on `|cutoff⟩` gives zero: amplitude pushed past the cutoff is
/// discarded.
pub fn build_ladder(cutoff: usize) -> Result<(FockMatrix, FockMatrix)> {
    if cutoff == 0 {
        return Err(Error::InvalidCutoff { cutoff, min: 1 });
    }
    let mut lowering = FockMatrix::zeros(cutoff, 1)?;
    for n in 1..=cutoff {
        lowering.data[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let raising = lowering.adjoint();
    Ok((lowering, raising))
}

/// `N̂ = a†a`, built directly as `diag(0, 1, …, cutoff)`.
pub fn number_operator(cutoff: usize) -> FockMatrix {
    FockMatrix::from_diagonal(cutoff, (0..=cutoff).map(|n| n as f64))
}

/// `A ⊗ B` with `A` on the original mode and `B` on the tilde mode.
pub fn tensor_product(a: &FockMatrix, b: &FockMatrix) -> Result<FockMatrix> {
    a.require_single_mode()?;
    b.require_single_mode()?;
    if a.cutoff != b.cutoff {
        return Err(Error::CutoffMismatch {
            left: a.cutoff,
            right: b.cutoff,
        });
    }
    let cutoff = a.cutoff;
    let d = cutoff + 1;
    let mut out = FockMatrix::zeros(cutoff, 2)?;
    for ((bt, bt_col), b_val) in b.data.indexed_iter() {
        if *b_val == ZERO {
            continue;
        }
        for ((n, n_col), a_val) in a.data.indexed_iter() {
            if *a_val == ZERO {
                continue;
            }
            out.data[[bt * d + n, bt_col * d + n_col]] = a_val * b_val;
        }
    }
    Ok(out)
}

/// Lifts a single-mode operator into the doubled space on the given mode.
pub fn lift(op: &FockMatrix, mode: Mode) -> Result<FockMatrix> {
    op.require_single_mode()?;
    let id = FockMatrix::identity(op.cutoff, 1)?;
    match mode {
        Mode::Original => tensor_product(op, &id),
        Mode::Tilde => tensor_product(&id, op),
    }
}

/// Traces out the mode that is not `keep`.
pub fn partial_trace(rho: &FockMatrix, keep: Mode) -> Result<FockMatrix> {
    if rho.mode_count != 2 {
        return Err(Error::NothingToTrace { keep });
    }
    let cutoff = rho.cutoff;
    let d = cutoff + 1;
    let mut out = FockMatrix::zeros(cutoff, 1)?;
    for i in 0..d {
        for j in 0..d {
            let mut acc = ZERO;
            for t in 0..d {
                acc += match keep {
                    Mode::Original => {
                        rho.data[[composite_index(i, t, cutoff), composite_index(j, t, cutoff)]]
                    }
                    Mode::Tilde => {
                        rho.data[[composite_index(t, i, cutoff), composite_index(t, j, cutoff)]]
                    }
                };
            }
            out.data[[i, j]] = acc;
        }
    }
    Ok(out)
}
