//! Optical elements of the two-path device and the two device orientations.
//!
//! A device is always the product `S2' * Phi * S1`: an entry splitter, a
//! relative phase between the paths, and an exit splitter that is either
//! used as built (`S2`) or traversed in reverse. Reversing a lossless
//! splitter transposes its matrix, so flipping the standard exit splitter
//! turns the closed device `S2 Phi S1` into `S1 Phi S1` without any new
//! composition rule.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

use crate::qmath::{Matrix2, QmathError, StateVector2, EXACT_TOL};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum InterferometerError {
    #[error("splitter coefficient is NaN or infinite")]
    NonFinite,
    #[error("splitter coefficients give |r|^2 + |t|^2 = {norm}, expected 1 within 1e-12")]
    InvalidSplitter { norm: f64 },
    #[error("matrix does not have the lossless-splitter structure [[r, t], [-conj(t), conj(r)]]")]
    NotSplitterForm,
}

/// Lossless beam splitter, stored as the two independent coefficients of
/// its unitary `[[r, t], [-conj(t), conj(r)]]` (determinant 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    r_ll: Complex64,
    t_lr: Complex64,
}

impl BeamSplitter {
    /// Builds a splitter from the `L -> L` reflection and `R -> L`
    /// transmission coefficients; requires `|r|^2 + |t|^2 = 1`.
    pub fn new(r_ll: Complex64, t_lr: Complex64) -> Result<Self, InterferometerError> {
        if !r_ll.is_finite() || !t_lr.is_finite() {
            return Err(InterferometerError::NonFinite);
        }
        let norm = r_ll.norm_sqr() + t_lr.norm_sqr();
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(InterferometerError::InvalidSplitter { norm });
        }
        Ok(Self { r_ll, t_lr })
    }

    /// Symmetric 50/50 splitter `(1/sqrt 2) [[1, 1], [-1, 1]]`.
    pub fn standard_s1() -> Self {
        Self {
            r_ll: Complex64::new(FRAC_1_SQRT_2, 0.0),
            t_lr: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    /// Inverse of [`standard_s1`](Self::standard_s1):
    /// `(1/sqrt 2) [[1, -1], [1, 1]]`.
    pub fn standard_s2() -> Self {
        Self {
            r_ll: Complex64::new(FRAC_1_SQRT_2, 0.0),
            t_lr: Complex64::new(-FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn r_ll(&self) -> Complex64 {
        self.r_ll
    }

    pub fn t_lr(&self) -> Complex64 {
        self.t_lr
    }

    pub fn r_rr(&self) -> Complex64 {
        self.r_ll.conj()
    }

    pub fn t_rl(&self) -> Complex64 {
        -self.t_lr.conj()
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(self.r_ll, self.t_lr, -self.t_lr.conj(), self.r_ll.conj())
    }

    /// Recovers a splitter from a full matrix, rejecting matrices without
    /// the `[[r, t], [-conj(t), conj(r)]]` structure.
    pub fn from_matrix(m: &Matrix2) -> Result<Self, InterferometerError> {
        if (m.m11() - m.m00().conj()).norm() > EXACT_TOL
            || (m.m10() + m.m01().conj()).norm() > EXACT_TOL
        {
            return Err(InterferometerError::NotSplitterForm);
        }
        Self::new(m.m00(), m.m01())
    }

    /// The same physical splitter traversed in the opposite direction,
    /// which transposes its matrix.
    pub fn reverse_orientation(&self) -> Result<Self, InterferometerError> {
        Self::from_matrix(&self.matrix().transpose())
    }
}

/// Per-path phase plates `diag(e^{i theta_L}, e^{i theta_R})`; only the
/// difference `phi = theta_R - theta_L` affects detection probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifter {
    theta_l: f64,
    theta_r: f64,
}

impl PhaseShifter {
    pub fn new(theta_l: f64, theta_r: f64) -> Self {
        assert!(theta_l.is_finite() && theta_r.is_finite(), "phases must be finite");
        Self { theta_l, theta_r }
    }

    /// Puts the whole relative phase on the `R` arm: `theta_L = 0`.
    pub fn from_phi(phi: f64) -> Self {
        Self::new(0.0, phi)
    }

    pub fn theta_l(&self) -> f64 {
        self.theta_l
    }

    pub fn theta_r(&self) -> f64 {
        self.theta_r
    }

    pub fn phi(&self) -> f64 {
        self.theta_r - self.theta_l
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2::diagonal(Complex64::cis(self.theta_l), Complex64::cis(self.theta_r))
    }
}

/// A complete device: entry splitter, phase stage, exit splitter, and the
/// orientation of the exit splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConfig {
    pub splitter_1: BeamSplitter,
    pub phase: PhaseShifter,
    pub splitter_2: BeamSplitter,
    /// When set, the exit splitter is traversed in reverse (transposed).
    pub splitter_2_reversed: bool,
}

impl DeviceConfig {
    /// Standard closed interferometer `S2 Phi S1`; the exit splitter undoes
    /// the entry one at `phi = 0`.
    pub fn heads(phase: PhaseShifter) -> Self {
        Self {
            splitter_1: BeamSplitter::standard_s1(),
            phase,
            splitter_2: BeamSplitter::standard_s2(),
            splitter_2_reversed: false,
        }
    }

    /// "Tails" device: the same exit splitter traversed in reverse, so the
    /// product becomes `S2^T Phi S1 = S1 Phi S1`.
    pub fn tails(phase: PhaseShifter) -> Self {
        Self {
            splitter_1: BeamSplitter::standard_s1(),
            phase,
            splitter_2: BeamSplitter::standard_s2(),
            splitter_2_reversed: true,
        }
    }

    pub fn device_matrix(&self) -> Matrix2 {
        let s2 = if self.splitter_2_reversed {
            self.splitter_2.matrix().transpose()
        } else {
            self.splitter_2.matrix()
        };
        s2 * self.phase.matrix() * self.splitter_1.matrix()
    }

    pub fn final_state(&self, input: &StateVector2) -> Result<StateVector2, QmathError> {
        self.device_matrix().apply(input)
    }
}

/// `(P(D_L), P(D_R))` for a final state: the squared amplitude magnitudes.
pub fn detection_probabilities(state: &StateVector2) -> (f64, f64) {
    (state.amp_l().norm_sqr(), state.amp_r().norm_sqr())
}

/// Closed-form final state of the heads device on `|L>` input with
/// `theta_L = 0`: `(1/2) (1 + e^{i phi}, 1 - e^{i phi})`.
pub fn psi_heads(phi: f64) -> StateVector2 {
    let e = Complex64::cis(phi);
    StateVector2::new_unchecked(0.5 * (Complex64::ONE + e), 0.5 * (Complex64::ONE - e))
}

/// Closed-form final state of the tails device on `|L>` input with
/// `theta_L = 0`: `(1/2) (1 - e^{i phi}, -(1 + e^{i phi}))`.
pub fn psi_tails(phi: f64) -> StateVector2 {
    let e = Complex64::cis(phi);
    StateVector2::new_unchecked(0.5 * (Complex64::ONE - e), -0.5 * (Complex64::ONE + e))
}
