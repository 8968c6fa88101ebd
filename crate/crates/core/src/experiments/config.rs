use std::path::Path;

use clap::Args;
use serde::Deserialize;

use crate::model::SystemParams;
use crate::{Error, Result};

/// Optional overrides of every [`SystemParams`] field, shared by the config
/// file (flat TOML table) and the command-line flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    /// Mechanical frequency in internal units (normally 1)
    #[arg(long)]
    pub omega_b: Option<f64>,
    /// Absolute mechanical angular frequency, rad/s
    #[arg(long)]
    pub omega_b_abs: Option<f64>,
    /// Absolute cavity angular frequency, rad/s
    #[arg(long)]
    pub omega_a_abs: Option<f64>,
    /// Absolute magnon angular frequency, rad/s
    #[arg(long)]
    pub omega_m_abs: Option<f64>,
    #[arg(long)]
    pub kappa_a: Option<f64>,
    #[arg(long)]
    pub gamma_m: Option<f64>,
    #[arg(long)]
    pub gamma_b: Option<f64>,
    #[arg(long)]
    pub g_m: Option<f64>,
    #[arg(long)]
    pub g_b: Option<f64>,
    /// Effective Kerr strength K (sign = field direction where it matters)
    #[arg(long = "kerr", visible_alias = "K", allow_hyphen_values = true)]
    #[serde(alias = "K")]
    pub kerr: Option<f64>,
    /// Bare magnon detuning Δ_m
    #[arg(
        long = "delta-m",
        visible_alias = "Delta_m",
        allow_hyphen_values = true
    )]
    #[serde(alias = "Delta_m")]
    pub delta_m: Option<f64>,
    /// Effective cavity detuning Δ̃_a
    #[arg(
        long = "delta-a-tilde",
        visible_alias = "Delta_a_tilde",
        allow_hyphen_values = true
    )]
    #[serde(alias = "Delta_a_tilde")]
    pub delta_a_tilde: Option<f64>,
    /// Bath temperature, kelvin
    #[arg(long, visible_alias = "T")]
    pub temperature: Option<f64>,
}

impl ParamOverrides {
    pub fn apply(&self, base: &SystemParams) -> SystemParams {
        let mut p = *base;
        let pairs: [(&mut f64, Option<f64>); 13] = [
            (&mut p.omega_b, self.omega_b),
            (&mut p.omega_b_abs, self.omega_b_abs),
            (&mut p.omega_a_abs, self.omega_a_abs),
            (&mut p.omega_m_abs, self.omega_m_abs),
            (&mut p.kappa_a, self.kappa_a),
            (&mut p.gamma_m, self.gamma_m),
            (&mut p.gamma_b, self.gamma_b),
            (&mut p.g_m, self.g_m),
            (&mut p.g_b, self.g_b),
            (&mut p.kerr, self.kerr),
            (&mut p.delta_m, self.delta_m),
            (&mut p.delta_a_tilde, self.delta_a_tilde),
            (&mut p.temperature, self.temperature),
        ];
        for (slot, value) in pairs {
            if let Some(v) = value {
                *slot = v;
            }
        }
        p
    }

    /// Fields set in `other` win over fields set in `self`.
    pub fn overridden_by(&self, other: &ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            omega_b: other.omega_b.or(self.omega_b),
            omega_b_abs: other.omega_b_abs.or(self.omega_b_abs),
            omega_a_abs: other.omega_a_abs.or(self.omega_a_abs),
            omega_m_abs: other.omega_m_abs.or(self.omega_m_abs),
            kappa_a: other.kappa_a.or(self.kappa_a),
            gamma_m: other.gamma_m.or(self.gamma_m),
            gamma_b: other.gamma_b.or(self.gamma_b),
            g_m: other.g_m.or(self.g_m),
            g_b: other.g_b.or(self.g_b),
            kerr: other.kerr.or(self.kerr),
            delta_m: other.delta_m.or(self.delta_m),
            delta_a_tilde: other.delta_a_tilde.or(self.delta_a_tilde),
            temperature: other.temperature.or(self.temperature),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }
}

pub fn load_config(path: &Path) -> Result<ParamOverrides> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
    ParamOverrides::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_table_with_aliases() {
        let o = ParamOverrides::parse("K = -0.2\nDelta_m = -0.8\ntemperature = 0.05\ng_m = 0.3\n")
            .unwrap();
        let p = o.apply(&SystemParams::default());
        assert_eq!(
            (p.kerr, p.delta_m, p.temperature, p.g_m),
            (-0.2, -0.8, 0.05, 0.3)
        );
        assert_eq!(p.kappa_a, SystemParams::default().kappa_a);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ParamOverrides::parse("kapa_a = 0.1\n").is_err());
        assert!(ParamOverrides::parse("[section]\nkappa_a = 0.1\n").is_err());
    }

    #[test]
    fn later_overrides_win() {
        let file = ParamOverrides {
            kerr: Some(0.1),
            g_b: Some(0.2),
            ..Default::default()
        };
        let cli = ParamOverrides {
            kerr: Some(0.3),
            ..Default::default()
        };
        let merged = file.overridden_by(&cli);
        assert_eq!((merged.kerr, merged.g_b), (Some(0.3), Some(0.2)));
    }
}
