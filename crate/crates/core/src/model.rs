//! Physical parameters and the linear-dynamics matrices built from them.

use std::f64::consts::PI;

use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// One configuration of the hybrid cavity-magnon-mechanics system.
///
/// Every rate, coupling and detuning is measured in units of the mechanical
/// frequency, so `omega_b` is normally `1.0`. The `*_abs` fields carry the
/// absolute angular frequencies (rad/s) that set the thermal occupations.
///
/// The sign of `kerr` encodes the direction of the static field: positive for
/// a field along the `[100]` crystal axis, negative for `[110]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    pub omega_b: f64,
    pub omega_b_abs: f64,
    pub omega_a_abs: f64,
    pub omega_m_abs: f64,
    pub kappa_a: f64,
    pub gamma_m: f64,
    pub gamma_b: f64,
    pub g_m: f64,
    pub g_b: f64,
    #[serde(alias = "K")]
    pub kerr: f64,
    #[serde(alias = "Delta_m")]
    pub delta_m: f64,
    #[serde(alias = "Delta_a_tilde")]
    pub delta_a_tilde: f64,
    /// Bath temperature in kelvin.
    pub temperature: f64,
}

impl Default for SystemParams {
    /// The working point used throughout the figures: `K = κ_a`, `Δ_m = -ω_b`.
    fn default() -> Self {
        Self {
            omega_b: 1.0,
            omega_b_abs: 2.0 * PI * 10.0e6,
            omega_a_abs: 2.0 * PI * 10.0e9,
            omega_m_abs: 2.0 * PI * 10.0e9,
            kappa_a: 0.4,
            gamma_m: 0.4,
            gamma_b: 1.0e-5,
            g_m: 0.5,
            g_b: 0.5,
            kerr: 0.4,
            delta_m: -1.0,
            delta_a_tilde: 1.0,
            temperature: 0.010,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("omega_b", self.omega_b),
            ("omega_b_abs", self.omega_b_abs),
            ("omega_a_abs", self.omega_a_abs),
            ("omega_m_abs", self.omega_m_abs),
            ("kappa_a", self.kappa_a),
            ("gamma_m", self.gamma_m),
            ("gamma_b", self.gamma_b),
            ("g_m", self.g_m),
            ("g_b", self.g_b),
            ("kerr", self.kerr),
            ("delta_m", self.delta_m),
            ("delta_a_tilde", self.delta_a_tilde),
            ("temperature", self.temperature),
        ];
        if let Some((name, _)) = all.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
        let positive = [
            ("omega_b", self.omega_b),
            ("omega_b_abs", self.omega_b_abs),
            ("omega_a_abs", self.omega_a_abs),
            ("omega_m_abs", self.omega_m_abs),
            ("kappa_a", self.kappa_a),
            ("gamma_m", self.gamma_m),
            ("gamma_b", self.gamma_b),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| *v <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be > 0, got {v}"
            )));
        }
        let nonnegative = [
            ("g_m", self.g_m),
            ("g_b", self.g_b),
            ("temperature", self.temperature),
        ];
        if let Some((name, v)) = nonnegative.iter().find(|(_, v)| *v < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be >= 0, got {v}"
            )));
        }
        Ok(())
    }

    /// Kerr-induced magnon frequency shift `Δ_K = 2K`.
    pub fn kerr_shift(&self) -> f64 {
        2.0 * self.kerr
    }

    /// Effective magnon detuning `Δ̃_m = Δ_m + Δ_K`.
    pub fn effective_magnon_detuning(&self) -> f64 {
        self.delta_m + self.kerr_shift()
    }

    /// `Δ̃_m + Δ_K/2`, which enters the drift matrix at `(y_m, x_m)`.
    pub fn magnon_detuning_plus(&self) -> f64 {
        self.effective_magnon_detuning() + 0.5 * self.kerr_shift()
    }

    /// `Δ̃_m - Δ_K/2`, which enters the drift matrix at `(x_m, y_m)`.
    pub fn magnon_detuning_minus(&self) -> f64 {
        self.effective_magnon_detuning() - 0.5 * self.kerr_shift()
    }

    /// Same configuration with the static field reversed.
    pub fn flipped(&self) -> Self {
        Self {
            kerr: -self.kerr,
            ..*self
        }
    }

    /// Same configuration with `K` replaced by `sign · |K|`.
    pub fn with_direction(&self, positive: bool) -> Self {
        let magnitude = self.kerr.abs();
        Self {
            kerr: if positive { magnitude } else { -magnitude },
            ..*self
        }
    }

    /// Thermal occupations `(n̄_a, n̄_m, n̄_b)`.
    pub fn occupations(&self) -> (f64, f64, f64) {
        (
            thermal_occupation(self.omega_a_abs, self.temperature),
            thermal_occupation(self.omega_m_abs, self.temperature),
            thermal_occupation(self.omega_b_abs, self.temperature),
        )
    }
}

/// Bose-Einstein mean occupation `1 / (exp(ħω / k_B T) - 1)` of a mode with
/// angular frequency `omega_abs` (rad/s) in a bath at `temperature` kelvin.
pub fn thermal_occupation(omega_abs: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_abs / (K_B * temperature);
    // expm1 saturates to +inf for large x, giving an exact 0
    1.0 / x.exp_m1()
}

/// Effective two-magnon strength `K = 2 K₀ N_m`.
pub fn kerr_strength(k0: f64, magnon_number: f64) -> Result<f64> {
    if magnon_number.is_nan() || magnon_number < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "magnon number must be >= 0, got {magnon_number}"
        )));
    }
    Ok(2.0 * k0 * magnon_number)
}

pub fn flip_direction(params: &SystemParams) -> SystemParams {
    params.flipped()
}

/// Drift matrix of the quadrature dynamics `u̇ = A u + f`, ordered
/// `(x_a, y_a, x_m, y_m, q, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(pub Matrix6<f64>);

impl DriftMatrix {
    pub fn as_matrix(&self) -> &Matrix6<f64> {
        &self.0
    }
}

/// Diagonal noise matrix of the input noises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(pub Matrix6<f64>);

impl DiffusionMatrix {
    pub fn as_matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn from_diagonal(diag: [f64; 6]) -> Self {
        let mut m = Matrix6::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        Self(m)
    }
}

pub fn build_drift(params: &SystemParams) -> DriftMatrix {
    let p = params;
    let da = p.delta_a_tilde;
    let dm_plus = p.magnon_detuning_plus();
    let dm_minus = p.magnon_detuning_minus();
    #[rustfmt::skip]
    let a = Matrix6::new(
        -p.kappa_a,  da,        0.0,        p.g_m,      0.0,        0.0,
        -da,         -p.kappa_a, -p.g_m,    0.0,        p.g_b,      0.0,
        0.0,         p.g_m,     -p.gamma_m, dm_minus,   0.0,        0.0,
        -p.g_m,      0.0,       -dm_plus,   -p.gamma_m, 0.0,        0.0,
        0.0,         0.0,       0.0,        0.0,        0.0,        p.omega_b,
        p.g_b,       0.0,       0.0,        0.0,        -p.omega_b, -p.gamma_b,
    );
    DriftMatrix(a)
}

pub fn build_diffusion(params: &SystemParams) -> DiffusionMatrix {
    let (n_a, n_m, n_b) = params.occupations();
    let cavity = params.kappa_a * (2.0 * n_a + 1.0);
    let magnon = params.gamma_m * (2.0 * n_m + 1.0);
    let mechanics = params.gamma_b * (2.0 * n_b + 1.0);
    DiffusionMatrix::from_diagonal([cavity, cavity, magnon, magnon, 0.0, mechanics])
}
