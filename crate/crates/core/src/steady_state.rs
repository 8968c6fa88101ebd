//! Stability of the drift matrix and the steady-state covariance matrix.

use nalgebra::{DMatrix, Matrix6, SMatrix, SVector, Schur, SymmetricEigen};
use serde::Serialize;

use crate::model::{DiffusionMatrix, DriftMatrix};
use crate::{Error, Result};

/// Abscissae above this value count as unstable.
pub const STABILITY_MARGIN: f64 = -1e-12;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;
const DIVERGENCE_LIMIT: f64 = 1e12;

/// Symmetrized second moments `V_ij = <u_i u_j + u_j u_i>/2` of the
/// quadratures `(x_a, y_a, x_m, y_m, q, p)`. The vacuum is `I/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix6<f64>);

impl CovarianceMatrix {
    /// Wraps `m` after symmetrizing it.
    pub fn new(m: Matrix6<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn vacuum() -> Self {
        Self(Matrix6::identity() * 0.5)
    }

    pub fn as_matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_iterator(6, 6, self.0.iter().copied())
    }

    /// Smallest eigenvalue of the Hermitian matrix `V + (i/2)Ω`; nonnegative
    /// for a state that satisfies the uncertainty principle.
    pub fn physicality_margin(&self) -> f64 {
        uncertainty_margin(&self.to_dmatrix())
    }
}

/// Block-diagonal symplectic form `⊕ [[0, 1], [-1, 0]]` on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Smallest eigenvalue of `V + (i/2)Ω` for any even-dimensional `V`.
///
/// The Hermitian matrix `X + iY` has the same spectrum (doubled) as the real
/// symmetric `[[X, -Y], [Y, X]]`.
pub fn uncertainty_margin(v: &DMatrix<f64>) -> f64 {
    let n = v.nrows();
    let half_omega = symplectic_form(n / 2) * 0.5;
    let mut real = DMatrix::zeros(2 * n, 2 * n);
    real.view_mut((0, 0), (n, n)).copy_from(v);
    real.view_mut((n, n), (n, n)).copy_from(v);
    real.view_mut((0, n), (n, n)).copy_from(&(-&half_omega));
    real.view_mut((n, 0), (n, n)).copy_from(&half_omega);
    let real = (&real + real.transpose()) * 0.5;
    SymmetricEigen::new(real).eigenvalues.min()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// Largest real part among the eigenvalues of the drift matrix.
    pub spectral_abscissa: f64,
}

/// Eigenvalues of a real 6×6 matrix via its real Schur form.
pub fn drift_eigenvalues(a: &Matrix6<f64>) -> Result<Vec<nalgebra::Complex<f64>>> {
    let schur = Schur::try_new(*a, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Hurwitz test on the spectral abscissa. Equivalent to the Routh-Hurwitz
/// determinant conditions for this real system.
pub fn check_stability(a: &DriftMatrix) -> Result<StabilityVerdict> {
    let eig = drift_eigenvalues(a.as_matrix())?;
    let abscissa = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if !abscissa.is_finite() {
        return Err(Error::NumericalFailure(
            "non-finite eigenvalue of drift matrix".into(),
        ));
    }
    Ok(StabilityVerdict {
        stable: abscissa < STABILITY_MARGIN,
        spectral_abscissa: abscissa,
    })
}

fn require_stable(a: &DriftMatrix) -> Result<StabilityVerdict> {
    let verdict = check_stability(a)?;
    if !verdict.stable {
        return Err(Error::Unstable {
            abscissa: verdict.spectral_abscissa,
        });
    }
    Ok(verdict)
}

type Big = SMatrix<f64, 36, 36>;
type BigVec = SVector<f64, 36>;

/// `I⊗A + A⊗I`, the column-major vectorization of `V ↦ A V + V Aᵀ`.
fn lyapunov_operator(a: &Matrix6<f64>) -> Big {
    let id = Matrix6::<f64>::identity();
    id.kronecker(a) + a.kronecker(&id)
}

/// Solves `A V + V Aᵀ = -D` by a dense 36×36 LU solve on `vec(V)`.
pub fn solve_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    require_stable(a)?;
    let op = lyapunov_operator(a.as_matrix());
    let rhs = -BigVec::from_column_slice(d.as_matrix().as_slice());
    let lu = op.lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure("singular Lyapunov operator".into()))?;
    // one round of iterative refinement
    let r = rhs - op * x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure(
            "non-finite Lyapunov solution".into(),
        ));
    }
    Ok(CovarianceMatrix::new(Matrix6::from_column_slice(
        x.as_slice(),
    )))
}

/// `‖A V + V Aᵀ + D‖_F / ‖D‖_F`.
pub fn lyapunov_residual(a: &DriftMatrix, v: &CovarianceMatrix, d: &DiffusionMatrix) -> f64 {
    let (a, v, d) = (a.as_matrix(), v.as_matrix(), d.as_matrix());
    let r = a * v + v * a.transpose() + d;
    r.norm() / d.norm()
}

/// Horizon and step for [`integrate_lyapunov`] derived from the spectrum of `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSchedule {
    pub horizon: f64,
    pub step: f64,
}

impl IntegrationSchedule {
    pub fn for_drift(a: &DriftMatrix) -> Result<Self> {
        let eig = drift_eigenvalues(a.as_matrix())?;
        let abscissa = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        if abscissa >= STABILITY_MARGIN {
            return Err(Error::Unstable { abscissa });
        }
        let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rate = abscissa.abs();
        // RK4 needs h·|λ_i + λ_j| inside its stability region (≈ 2.8)
        let step = (0.1 / rate).min(0.5 / radius) * 0.999;
        Ok(Self {
            horizon: 20.0 / rate,
            step,
        })
    }
}

fn lyapunov_rhs(
    a: &Matrix6<f64>,
    at: &Matrix6<f64>,
    v: &Matrix6<f64>,
    d: &Matrix6<f64>,
) -> Matrix6<f64> {
    a * v + v * at + d
}

/// Integrates `dV/dt = A V + V Aᵀ + D` from `V(0) = I/2` to `horizon` with
/// classical fourth-order Runge-Kutta steps no longer than `step`.
pub fn integrate_lyapunov(
    a: &DriftMatrix,
    d: &DiffusionMatrix,
    horizon: f64,
    step: f64,
) -> Result<CovarianceMatrix> {
    let verdict = require_stable(a)?;
    let rate = verdict.spectral_abscissa.abs();
    if !(step > 0.0 && step < 0.1 / rate) {
        return Err(Error::InvalidArgument(format!(
            "step {step} must be in (0, {})",
            0.1 / rate
        )));
    }
    if !horizon.is_finite() || horizon < 20.0 / rate {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be at least {}",
            20.0 / rate
        )));
    }

    let steps = (horizon / step).ceil() as usize;
    let h = horizon / steps as f64;
    let (a, d) = (a.as_matrix(), d.as_matrix());
    let at = a.transpose();
    let mut v = Matrix6::identity() * 0.5;
    for n in 0..steps {
        let k1 = lyapunov_rhs(a, &at, &v, d);
        let k2 = lyapunov_rhs(a, &at, &(v + k1 * (0.5 * h)), d);
        let k3 = lyapunov_rhs(a, &at, &(v + k2 * (0.5 * h)), d);
        let k4 = lyapunov_rhs(a, &at, &(v + k3 * h), d);
        v += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        v = (v + v.transpose()) * 0.5;
        if v.iter()
            .any(|x| !x.is_finite() || x.abs() > DIVERGENCE_LIMIT)
        {
            return Err(Error::Diverged {
                time: (n + 1) as f64 * h,
            });
        }
    }
    Ok(CovarianceMatrix::new(v))
}
