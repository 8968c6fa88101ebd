//! Gaussian entanglement measures of the three-mode steady state.
//!
//! Bipartite entanglement is measured by the logarithmic negativity
//! `E_N = max[0, -ln(2 ν̃₋)]`, where `ν̃₋` is the smallest symplectic
//! eigenvalue of the partially transposed covariance matrix (vacuum = `I/2`).
//! The contangle is `E_N²`, and genuine tripartite entanglement is witnessed
//! by a positive minimum residual contangle
//! `min_i [C_{i|jk} - C_{i|j} - C_{i|k}]`.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::model::{build_diffusion, build_drift, SystemParams};
use crate::steady_state::{
    check_stability, lyapunov_residual, solve_lyapunov, symplectic_form, CovarianceMatrix,
};
use crate::{Error, Result};

/// Logarithmic negativities below this are round-off around `ν̃₋ = 1/2`.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

/// Residual contangles above `-MONOGAMY_TOLERANCE` are treated as zero.
pub const MONOGAMY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModeLabel {
    /// Cavity photons, quadratures `(x_a, y_a)`.
    A,
    /// Kittel-mode magnons, quadratures `(x_m, y_m)`.
    M,
    /// Mechanical resonator, quadratures `(q, p)`.
    B,
}

impl ModeLabel {
    pub const ALL: [ModeLabel; 3] = [ModeLabel::A, ModeLabel::M, ModeLabel::B];

    pub fn index(self) -> usize {
        match self {
            ModeLabel::A => 0,
            ModeLabel::M => 1,
            ModeLabel::B => 2,
        }
    }

    /// Row/column indices of the mode's position-like and momentum-like
    /// quadratures in the 6×6 covariance matrix.
    pub fn quadratures(self) -> (usize, usize) {
        (2 * self.index(), 2 * self.index() + 1)
    }

    fn others(self) -> (ModeLabel, ModeLabel) {
        match self {
            ModeLabel::A => (ModeLabel::M, ModeLabel::B),
            ModeLabel::M => (ModeLabel::A, ModeLabel::B),
            ModeLabel::B => (ModeLabel::A, ModeLabel::M),
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeLabel::A => "a",
            ModeLabel::M => "m",
            ModeLabel::B => "b",
        };
        f.write_str(s)
    }
}

/// A split `first | second` of disjoint, nonempty mode sets. Modes not in
/// either cell are traced out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    first: Vec<ModeLabel>,
    second: Vec<ModeLabel>,
}

impl Bipartition {
    pub fn new(first: &[ModeLabel], second: &[ModeLabel]) -> Result<Self> {
        let mut first = first.to_vec();
        let mut second = second.to_vec();
        first.sort();
        first.dedup();
        second.sort();
        second.dedup();
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidArgument(
                "bipartition cells must be nonempty".into(),
            ));
        }
        if first.iter().any(|m| second.contains(m)) {
            return Err(Error::InvalidArgument(
                "bipartition cells must be disjoint".into(),
            ));
        }
        Ok(Self { first, second })
    }

    /// `i | j` between two single modes.
    pub fn pair(i: ModeLabel, j: ModeLabel) -> Result<Self> {
        Self::new(&[i], &[j])
    }

    /// `i | jk`, one mode against the other two.
    pub fn one_vs_rest(i: ModeLabel) -> Self {
        let (j, k) = i.others();
        Self {
            first: vec![i],
            second: vec![j, k],
        }
    }

    pub fn first(&self) -> &[ModeLabel] {
        &self.first
    }

    pub fn second(&self) -> &[ModeLabel] {
        &self.second
    }

    fn modes(&self) -> Vec<ModeLabel> {
        let mut all: Vec<_> = self.first.iter().chain(&self.second).copied().collect();
        all.sort();
        all
    }
}

/// Symplectic eigenvalues of a `2n × 2n` covariance matrix, ascending.
///
/// Computed as the square roots of the (pairwise degenerate) eigenvalues of
/// the symmetric matrix `-(√V Ω √V)²`, which share their spectrum with
/// `(iΩV)²`. `V` must be positive definite.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n != v.ncols() || n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "covariance must be square with even dimension, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let sym = (v + v.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, 1e-15, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    if eig.eigenvalues.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::NumericalFailure(
            "covariance matrix is not positive definite".into(),
        ));
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let k = &root * symplectic_form(n / 2) * &root;
    let gram = k.transpose() * &k;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(gram, 1e-15, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let mut squares: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    squares.sort_by(f64::total_cmp);
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Rows/columns of `v` belonging to `modes`, in the given order.
fn reduce(v: &CovarianceMatrix, modes: &[ModeLabel]) -> DMatrix<f64> {
    let idx: Vec<usize> = modes
        .iter()
        .flat_map(|m| {
            let (x, y) = m.quadratures();
            [x, y]
        })
        .collect();
    let full = v.as_matrix();
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])])
}

/// Partial transposition: flips the sign of the momentum quadrature of each
/// listed mode, `V ↦ P V P`.
pub fn partial_transpose(v: &CovarianceMatrix, modes: &[ModeLabel]) -> Result<CovarianceMatrix> {
    let mut listed = modes.to_vec();
    listed.sort();
    listed.dedup();
    if listed.is_empty() || listed.len() == ModeLabel::ALL.len() {
        return Err(Error::InvalidArgument(
            "partial transpose needs a nonempty proper subset of modes".into(),
        ));
    }
    let mut m = *v.as_matrix();
    for mode in listed {
        let (_, y) = mode.quadratures();
        m.row_mut(y).neg_mut();
        m.column_mut(y).neg_mut();
    }
    Ok(CovarianceMatrix::new(m))
}

pub fn log_negativity(v: &CovarianceMatrix, partition: &Bipartition) -> Result<f64> {
    let modes = partition.modes();
    let mut reduced = reduce(v, &modes);
    for (pos, mode) in modes.iter().enumerate() {
        if partition.first().contains(mode) {
            reduced.row_mut(2 * pos + 1).neg_mut();
            reduced.column_mut(2 * pos + 1).neg_mut();
        }
    }
    let nu_min = symplectic_eigenvalues(&reduced)?[0];
    let e = -(2.0 * nu_min).ln();
    Ok(if e < NEGATIVITY_FLOOR { 0.0 } else { e })
}

pub fn contangle(v: &CovarianceMatrix, partition: &Bipartition) -> Result<f64> {
    let e = log_negativity(v, partition)?;
    Ok(e * e)
}

/// `C_{i|jk} - C_{i|j} - C_{i|k}` for `focus = i`.
pub fn residual_contangle(v: &CovarianceMatrix, focus: ModeLabel) -> Result<f64> {
    let (j, k) = focus.others();
    let whole = contangle(v, &Bipartition::one_vs_rest(focus))?;
    let with_j = contangle(v, &Bipartition::pair(focus, j)?)?;
    let with_k = contangle(v, &Bipartition::pair(focus, k)?)?;
    Ok(whole - with_j - with_k)
}

/// Minimum of the three residual contangles. Negatives within
/// [`MONOGAMY_TOLERANCE`] are clamped to zero; larger violations are returned
/// as they are.
pub fn min_residual_contangle(v: &CovarianceMatrix) -> Result<f64> {
    let mut min = f64::INFINITY;
    for focus in [ModeLabel::M, ModeLabel::B, ModeLabel::A] {
        min = min.min(residual_contangle(v, focus)?);
    }
    if min < 0.0 && min > -MONOGAMY_TOLERANCE {
        min = 0.0;
    }
    Ok(min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementMeasures {
    pub e_ab: f64,
    pub e_am: f64,
    pub e_mb: f64,
    pub r_min: f64,
    /// `r_min` is negative beyond [`MONOGAMY_TOLERANCE`].
    pub monogamy_violation: bool,
}

impl EntanglementMeasures {
    pub fn from_covariance(v: &CovarianceMatrix) -> Result<Self> {
        use ModeLabel::{A, B, M};
        let r_min = min_residual_contangle(v)?;
        let measures = Self {
            e_ab: log_negativity(v, &Bipartition::pair(A, B)?)?,
            e_am: log_negativity(v, &Bipartition::pair(A, M)?)?,
            e_mb: log_negativity(v, &Bipartition::pair(M, B)?)?,
            r_min,
            monogamy_violation: r_min < 0.0,
        };
        if [measures.e_ab, measures.e_am, measures.e_mb, r_min]
            .iter()
            .any(|x| !x.is_finite())
        {
            return Err(Error::NumericalFailure(
                "non-finite entanglement measure".into(),
            ));
        }
        Ok(measures)
    }
}

/// Stability and entanglement of one signed parameter point. Unstable points
/// carry no covariance-derived values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub kerr: f64,
    pub stable: bool,
    pub spectral_abscissa: f64,
    pub lyapunov_residual: Option<f64>,
    pub physicality_margin: Option<f64>,
    pub measures: Option<EntanglementMeasures>,
}

impl EntanglementReport {
    /// Runs drift → stability → Lyapunov → measures for `params` as given
    /// (the sign of `K` is respected).
    pub fn analyze(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let a = build_drift(params);
        let verdict = check_stability(&a)?;
        let mut report = Self {
            kerr: params.kerr,
            stable: verdict.stable,
            spectral_abscissa: verdict.spectral_abscissa,
            lyapunov_residual: None,
            physicality_margin: None,
            measures: None,
        };
        if !verdict.stable {
            return Ok(report);
        }
        let d = build_diffusion(params);
        let v = solve_lyapunov(&a, &d)?;
        report.lyapunov_residual = Some(lyapunov_residual(&a, &v, &d));
        report.physicality_margin = Some(v.physicality_margin());
        report.measures = Some(EntanglementMeasures::from_covariance(&v)?);
        Ok(report)
    }
}
