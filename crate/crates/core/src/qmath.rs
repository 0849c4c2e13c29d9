//! Exact 2x2 complex linear algebra over the two-path Hilbert space.
//!
//! States are expressed in the path basis `{|L>, |R>}`. Everything here is
//! closed-form: no iterative solvers, no heap allocation. All numeric
//! tolerances used across the workspace are defined in this module so that
//! "exact" means the same thing everywhere.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for algebraic identities that only accumulate rounding error
/// (norms, traces, unitarity residuals, closed-form comparisons).
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for norm drift through chains of matrix-vector evolutions.
pub const EVOLVE_TOL: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros when evaluating
/// `x -> -x log2 x`, where the limit at zero is zero.
const EIGENVALUE_FLOOR: f64 = 1e-15;

/// Components smaller than this count as "zero" when picking the pivot for
/// the eigenvector phase convention.
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum QmathError {
    #[error("component is NaN or infinite")]
    NonFinite,
    #[error("state norm {norm} differs from 1 by more than 1e-12")]
    NotNormalized { norm: f64 },
    #[error("evolution changed the norm by {drift:e} (limit 1e-9)")]
    NonUnitaryEvolution { drift: f64 },
    #[error("matrix is not Hermitian within 1e-12")]
    NotHermitian,
    #[error("trace {trace} differs from 1 by more than 1e-12")]
    InvalidTrace { trace: f64 },
    #[error("smallest eigenvalue {lambda_min} is below -1e-12")]
    NotPositiveSemidefinite { lambda_min: f64 },
}

pub type Result<T> = std::result::Result<T, QmathError>;

/// Normalized pure state `a_L |L> + a_R |R>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector2 {
    a_l: Complex64,
    a_r: Complex64,
}

impl StateVector2 {
    /// Builds a state, rejecting non-finite or unnormalized amplitudes.
    pub fn new(a_l: Complex64, a_r: Complex64) -> Result<Self> {
        if !a_l.is_finite() || !a_r.is_finite() {
            return Err(QmathError::NonFinite);
        }
        let norm = (a_l.norm_sqr() + a_r.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(QmathError::NotNormalized { norm });
        }
        Ok(Self { a_l, a_r })
    }

    /// For internal construction of states that are normalized by
    /// construction (unitary images, closed-form amplitudes).
    pub(crate) fn new_unchecked(a_l: Complex64, a_r: Complex64) -> Self {
        debug_assert!(((a_l.norm_sqr() + a_r.norm_sqr()).sqrt() - 1.0).abs() < EVOLVE_TOL);
        Self { a_l, a_r }
    }

    /// Basis state `|L>`.
    pub fn basis_l() -> Self {
        Self { a_l: Complex64::ONE, a_r: Complex64::ZERO }
    }

    /// Basis state `|R>`.
    pub fn basis_r() -> Self {
        Self { a_l: Complex64::ZERO, a_r: Complex64::ONE }
    }

    pub fn amp_l(&self) -> Complex64 {
        self.a_l
    }

    pub fn amp_r(&self) -> Complex64 {
        self.a_r
    }

    pub fn norm(&self) -> f64 {
        (self.a_l.norm_sqr() + self.a_r.norm_sqr()).sqrt()
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.a_l.conj() * other.a_l + self.a_r.conj() * other.a_r
    }

    /// `|<self|other>|^2`; equals 1 exactly when the states agree up to a
    /// global phase, which is the right equality notion for pure states.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Rank-one projector `|self><self|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix2 {
        // Hermitian and trace-1 up to rounding by construction, which can
        // sit slightly outside the strict constructor tolerance for states
        // that drifted through long evolutions; build directly.
        DensityMatrix2::from_entries_unchecked(
            Complex64::new(self.a_l.norm_sqr(), 0.0),
            self.a_l * self.a_r.conj(),
            self.a_r * self.a_l.conj(),
            Complex64::new(self.a_r.norm_sqr(), 0.0),
        )
    }
}

/// General 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    m00: Complex64,
    m01: Complex64,
    m10: Complex64,
    m11: Complex64,
}

impl Matrix2 {
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        assert!(
            m00.is_finite() && m01.is_finite() && m10.is_finite() && m11.is_finite(),
            "matrix entries must be finite"
        );
        Self { m00, m01, m10, m11 }
    }

    pub fn identity() -> Self {
        Self::diagonal(Complex64::ONE, Complex64::ONE)
    }

    pub fn diagonal(d0: Complex64, d1: Complex64) -> Self {
        Self::new(d0, Complex64::ZERO, Complex64::ZERO, d1)
    }

    pub fn m00(&self) -> Complex64 {
        self.m00
    }

    pub fn m01(&self) -> Complex64 {
        self.m01
    }

    pub fn m10(&self) -> Complex64 {
        self.m10
    }

    pub fn m11(&self) -> Complex64 {
        self.m11
    }

    pub fn transpose(&self) -> Self {
        Self { m00: self.m00, m01: self.m10, m10: self.m01, m11: self.m11 }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            m00: self.m00.conj(),
            m01: self.m10.conj(),
            m10: self.m01.conj(),
            m11: self.m11.conj(),
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { m00: z * self.m00, m01: z * self.m01, m10: z * self.m10, m11: z * self.m11 }
    }

    /// Applies the matrix to a state, rejecting evolutions that fail to
    /// preserve the norm within `EVOLVE_TOL`.
    pub fn apply(&self, state: &StateVector2) -> Result<StateVector2> {
        let a_l = self.m00 * state.a_l + self.m01 * state.a_r;
        let a_r = self.m10 * state.a_l + self.m11 * state.a_r;
        let drift = ((a_l.norm_sqr() + a_r.norm_sqr()).sqrt() - state.norm()).abs();
        if drift > EVOLVE_TOL {
            return Err(QmathError::NonUnitaryEvolution { drift });
        }
        Ok(StateVector2 { a_l, a_r })
    }

    /// Checks `M^dagger M = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        assert!(tol > 0.0, "tolerance must be positive");
        let g = self.adjoint() * *self;
        let residual = [
            (g.m00 - Complex64::ONE).norm(),
            g.m01.norm(),
            g.m10.norm(),
            (g.m11 - Complex64::ONE).norm(),
        ];
        residual.iter().all(|r| *r <= tol)
    }

    /// Largest entrywise absolute difference; convenient for closed-form
    /// comparisons in tests.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.m00 - other.m00).norm(),
            (self.m01 - other.m01).norm(),
            (self.m10 - other.m10).norm(),
            (self.m11 - other.m11).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl std::ops::Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        Matrix2 {
            m00: self.m00 * rhs.m00 + self.m01 * rhs.m10,
            m01: self.m00 * rhs.m01 + self.m01 * rhs.m11,
            m10: self.m10 * rhs.m00 + self.m11 * rhs.m10,
            m11: self.m10 * rhs.m01 + self.m11 * rhs.m11,
        }
    }
}

/// Hermitian, trace-1, positive-semidefinite 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m00: Complex64,
    m01: Complex64,
    m10: Complex64,
    m11: Complex64,
}

impl DensityMatrix2 {
    /// Builds a density matrix, enforcing Hermiticity, unit trace, and
    /// positive semidefiniteness within `EXACT_TOL`.
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Result<Self> {
        if !m00.is_finite() || !m01.is_finite() || !m10.is_finite() || !m11.is_finite() {
            return Err(QmathError::NonFinite);
        }
        if m00.im.abs() > EXACT_TOL
            || m11.im.abs() > EXACT_TOL
            || (m10 - m01.conj()).norm() > EXACT_TOL
        {
            return Err(QmathError::NotHermitian);
        }
        let trace = m00.re + m11.re;
        if (trace - 1.0).abs() > EXACT_TOL {
            return Err(QmathError::InvalidTrace { trace });
        }
        let (_, lambda_min) = hermitian_eigenvalues(m00.re, m11.re, m01);
        if lambda_min < -EXACT_TOL {
            return Err(QmathError::NotPositiveSemidefinite { lambda_min });
        }
        Ok(Self { m00, m01, m10, m11 })
    }

    pub fn from_matrix(m: &Matrix2) -> Result<Self> {
        Self::new(m.m00, m.m01, m.m10, m.m11)
    }

    /// For internal construction of matrices that satisfy the density
    /// constraints by construction (projectors, convex mixtures).
    pub(crate) fn from_entries_unchecked(
        m00: Complex64,
        m01: Complex64,
        m10: Complex64,
        m11: Complex64,
    ) -> Self {
        debug_assert!((m00.re + m11.re - 1.0).abs() < EVOLVE_TOL);
        debug_assert!((m10 - m01.conj()).norm() < EVOLVE_TOL);
        Self { m00, m01, m10, m11 }
    }

    pub fn m00(&self) -> Complex64 {
        self.m00
    }

    pub fn m01(&self) -> Complex64 {
        self.m01
    }

    pub fn m10(&self) -> Complex64 {
        self.m10
    }

    pub fn m11(&self) -> Complex64 {
        self.m11
    }

    pub fn trace(&self) -> f64 {
        self.m00.re + self.m11.re
    }

    pub fn as_matrix(&self) -> Matrix2 {
        Matrix2::new(self.m00, self.m01, self.m10, self.m11)
    }

    /// Frobenius distance `sqrt(sum |a_ij - b_ij|^2)`.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        ((self.m00 - other.m00).norm_sqr()
            + (self.m01 - other.m01).norm_sqr()
            + (self.m10 - other.m10).norm_sqr()
            + (self.m11 - other.m11).norm_sqr())
        .sqrt()
    }

    /// Closed-form spectral decomposition with `lambda_plus >= lambda_minus`.
    pub fn eig_hermitian(&self) -> EigenPair2 {
        let a = self.m00.re;
        let d = self.m11.re;
        let b = self.m01;
        let (lambda_plus, lambda_minus) = hermitian_eigenvalues(a, d, b);

        if lambda_plus - lambda_minus <= EXACT_TOL {
            // Degenerate spectrum: every basis is an eigenbasis; return the
            // path basis.
            return EigenPair2 {
                lambda_plus,
                lambda_minus,
                v_plus: StateVector2::basis_l(),
                v_minus: StateVector2::basis_r(),
            };
        }

        // For eigenvalue x, both (x - d, conj(b)) and (b, x - a) solve the
        // eigenproblem; pick the better-conditioned one.
        let (v0, v1) = if (lambda_plus - d).abs() >= (lambda_plus - a).abs() {
            (Complex64::new(lambda_plus - d, 0.0), b.conj())
        } else {
            (b, Complex64::new(lambda_plus - a, 0.0))
        };
        let inv_norm = 1.0 / (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        let v_plus = phase_fixed(v0 * inv_norm, v1 * inv_norm);
        // The orthogonal complement is the remaining eigenvector; taking it
        // directly keeps the pair orthonormal to machine precision.
        let v_minus = phase_fixed(-v_plus.a_r.conj(), v_plus.a_l.conj());

        EigenPair2 { lambda_plus, lambda_minus, v_plus, v_minus }
    }

    /// Von Neumann entropy `-sum lambda_i log2 lambda_i` in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        let eig = self.eig_hermitian();
        entropy_term(eig.lambda_plus) + entropy_term(eig.lambda_minus)
    }
}

/// Eigendecomposition of a Hermitian 2x2 matrix, ordered `lambda_plus >=
/// lambda_minus`. Eigenvectors are unit-norm with the first component whose
/// magnitude exceeds 1e-12 rotated to be real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair2 {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: StateVector2,
    pub v_minus: StateVector2,
}

/// Eigenvalues of `[[a, b], [conj(b), d]]` via the half-trace form
/// `tr/2 +- sqrt((a - d)^2/4 + |b|^2)`, which avoids the cancellation in
/// `tr^2 - 4 det`.
fn hermitian_eigenvalues(a: f64, d: f64, b: Complex64) -> (f64, f64) {
    let half_trace = 0.5 * (a + d);
    let radius = ((0.5 * (a - d)).powi(2) + b.norm_sqr()).sqrt();
    (half_trace + radius, half_trace - radius)
}

fn phase_fixed(v0: Complex64, v1: Complex64) -> StateVector2 {
    let pivot = if v0.norm() > PIVOT_TOL { v0 } else { v1 };
    // Multiplying by conj(pivot)/|pivot| rotates the pivot onto the
    // positive real axis; the imaginary part cancels exactly in IEEE
    // arithmetic.
    let phase = pivot.conj() / pivot.norm();
    StateVector2::new_unchecked(v0 * phase, v1 * phase)
}

fn entropy_term(lambda: f64) -> f64 {
    let lambda = lambda.clamp(0.0, 1.0);
    if lambda < EIGENVALUE_FLOOR {
        0.0
    } else {
        -lambda * lambda.log2()
    }
}
