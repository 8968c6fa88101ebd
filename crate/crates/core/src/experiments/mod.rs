//! Parameter sweeps over `Δ_m`, `K` or `T`, and the figure presets.

mod config;
mod output;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::EntanglementReport;
use crate::model::SystemParams;
use crate::nonreciprocity::{bidirectional_report, BidirectionalReport, ContrastRatios};
use crate::{Error, Result};

pub use config::{load_config, ParamOverrides};
pub use output::{format_float, render_report, CSV_HEADER};

/// Default number of grid points per sweep.
pub const DEFAULT_COUNT: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVariable {
    /// Bare magnon detuning, units of `ω_b`.
    DeltaM,
    /// Kerr magnitude `|K|`, units of `ω_b`.
    Kerr,
    /// Bath temperature, kelvin.
    Temperature,
}

impl SweepVariable {
    /// Name written in the `sweep_var` CSV column.
    pub fn column_name(self) -> &'static str {
        match self {
            SweepVariable::DeltaM => "Delta_m",
            SweepVariable::Kerr => "K",
            SweepVariable::Temperature => "T",
        }
    }

    fn apply(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = *base;
        match self {
            SweepVariable::DeltaM => p.delta_m = value,
            SweepVariable::Kerr => p.kerr = value,
            SweepVariable::Temperature => p.temperature = value,
        }
        p
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Delta_m" | "delta_m" | "delta-m" | "dm" => Ok(SweepVariable::DeltaM),
            "K" | "k" | "kerr" => Ok(SweepVariable::Kerr),
            "T" | "t" | "temperature" => Ok(SweepVariable::Temperature),
            other => Err(Error::InvalidArgument(format!(
                "unknown sweep variable {other:?} (expected Delta_m, K or T)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Directions {
    #[default]
    Both,
    Positive,
    Negative,
}

impl FromStr for Directions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(Directions::Both),
            "positive" | "pos" | "+" => Ok(Directions::Positive),
            "negative" | "neg" | "-" => Ok(Directions::Negative),
            other => Err(Error::InvalidArgument(format!(
                "unknown direction set {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Spacing {
    #[default]
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub base: SystemParams,
    pub directions: Directions,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        count: usize,
        base: SystemParams,
    ) -> Self {
        let spacing = match variable {
            SweepVariable::Temperature => Spacing::Logarithmic,
            _ => Spacing::Linear,
        };
        Self {
            variable,
            start,
            stop,
            count,
            spacing,
            base,
            directions: Directions::Both,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidArgument(format!(
                "count must be >= 2, got {}",
                self.count
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidArgument(format!(
                "need finite start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.spacing == Spacing::Logarithmic && self.start <= 0.0 {
            return Err(Error::InvalidArgument(
                "logarithmic grid needs start > 0".into(),
            ));
        }
        if self.variable == SweepVariable::Temperature && self.start < 0.0 {
            return Err(Error::InvalidArgument(
                "temperature grid must be nonnegative".into(),
            ));
        }
        self.base.validate()
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Logarithmic => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub forward: Option<EntanglementReport>,
    pub backward: Option<EntanglementReport>,
    pub ratios: ContrastRatios,
    pub error: Option<String>,
}

impl SweepRow {
    fn any_stable(&self) -> bool {
        [&self.forward, &self.backward]
            .iter()
            .any(|r| r.is_some_and(|r| r.stable))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

fn evaluate_row(spec: &SweepSpec, value: f64) -> SweepRow {
    let params = spec.variable.apply(&spec.base, value);
    let mut row = SweepRow {
        value,
        forward: None,
        backward: None,
        ratios: ContrastRatios::default(),
        error: None,
    };
    let outcome = match spec.directions {
        Directions::Both => bidirectional_report(&params).map(|r| {
            row.forward = Some(r.forward);
            row.backward = Some(r.backward);
            row.ratios = r.ratios;
        }),
        Directions::Positive => {
            EntanglementReport::analyze(&params.with_direction(true)).map(|r| row.forward = Some(r))
        }
        Directions::Negative => EntanglementReport::analyze(&params.with_direction(false))
            .map(|r| row.backward = Some(r)),
    };
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row
}

/// Evaluates every grid point of `spec` on the global thread pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with_workers(spec, None)
}

/// Like [`run_sweep`] but on a dedicated pool of `workers` threads. Output is
/// independent of the worker count.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let grid = spec.grid();
    let compute = || -> Vec<SweepRow> { grid.par_iter().map(|&x| evaluate_row(spec, x)).collect() };
    let rows = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(compute),
        None => compute(),
    };
    if !rows.iter().any(SweepRow::any_stable) {
        return Err(Error::AllPointsUnstable { points: rows.len() });
    }
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

/// Full bidirectional evaluation of one point.
pub fn evaluate_point(params: &SystemParams) -> Result<BidirectionalReport> {
    bidirectional_report(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 6] = [
        FigurePreset::Fig2,
        FigurePreset::Fig3,
        FigurePreset::Fig4a,
        FigurePreset::Fig4b,
        FigurePreset::Fig4c,
        FigurePreset::Fig4d,
    ];

    pub fn spec(self) -> SweepSpec {
        let base = SystemParams::default();
        let kappa = base.kappa_a;
        match self {
            FigurePreset::Fig2 | FigurePreset::Fig4a => SweepSpec::new(
                SweepVariable::DeltaM,
                -2.0,
                0.0,
                DEFAULT_COUNT,
                SystemParams {
                    kerr: kappa,
                    ..base
                },
            ),
            FigurePreset::Fig3 | FigurePreset::Fig4b => SweepSpec::new(
                SweepVariable::Kerr,
                0.0,
                1.2 * kappa,
                DEFAULT_COUNT,
                SystemParams {
                    delta_m: -1.0,
                    ..base
                },
            ),
            FigurePreset::Fig4c => SweepSpec::new(
                SweepVariable::Temperature,
                1e-4,
                0.5,
                DEFAULT_COUNT,
                SystemParams {
                    delta_m: -0.8,
                    kerr: kappa,
                    ..base
                },
            ),
            FigurePreset::Fig4d => SweepSpec::new(
                SweepVariable::Temperature,
                1e-4,
                0.5,
                DEFAULT_COUNT,
                SystemParams {
                    delta_m: -1.0,
                    kerr: 0.8 * kappa,
                    ..base
                },
            ),
        }
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(FigurePreset::Fig2),
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4a" => Ok(FigurePreset::Fig4a),
            "fig4b" => Ok(FigurePreset::Fig4b),
            "fig4c" => Ok(FigurePreset::Fig4c),
            "fig4d" => Ok(FigurePreset::Fig4d),
            other => Err(Error::InvalidArgument(format!(
                "unknown figure preset {other:?}"
            ))),
        }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4a => "fig4a",
            FigurePreset::Fig4b => "fig4b",
            FigurePreset::Fig4c => "fig4c",
            FigurePreset::Fig4d => "fig4d",
        };
        f.write_str(s)
    }
}

pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    Ok(name.parse::<FigurePreset>()?.spec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_caption_values() {
        let s = figure_preset("fig2").unwrap();
        let b = s.base;
        assert_eq!(s.variable, SweepVariable::DeltaM);
        assert_eq!((b.kappa_a, b.gamma_m, b.g_m, b.g_b), (0.4, 0.4, 0.5, 0.5));
        assert_eq!(
            (b.delta_a_tilde, b.temperature, b.kerr, b.gamma_b),
            (1.0, 0.010, 0.4, 1e-5)
        );
        assert_eq!(b.omega_a_abs, b.omega_m_abs);
        assert!((b.omega_a_abs / (2.0 * std::f64::consts::PI) - 10e9).abs() < 1e-3);
        assert!((b.omega_b_abs / (2.0 * std::f64::consts::PI) - 10e6).abs() < 1e-6);

        let s = figure_preset("fig3").unwrap();
        assert_eq!((s.variable, s.base.delta_m), (SweepVariable::Kerr, -1.0));
        assert_eq!((s.start, s.stop), (0.0, 1.2 * 0.4));
        assert_eq!(figure_preset("fig4b").unwrap(), s);
        assert_eq!(
            figure_preset("fig4a").unwrap(),
            figure_preset("fig2").unwrap()
        );

        let s = figure_preset("fig4c").unwrap();
        assert_eq!(s.variable, SweepVariable::Temperature);
        assert_eq!((s.base.delta_m, s.base.kerr), (-0.8, 0.4));

        let s = figure_preset("fig4d").unwrap();
        assert_eq!(s.variable, SweepVariable::Temperature);
        assert_eq!(s.spacing, Spacing::Logarithmic);
        assert_eq!(s.base.delta_m, -1.0);
        assert!((s.base.kerr - 0.8 * 0.4).abs() < 1e-15);

        assert!(figure_preset("fig5").is_err());
    }

    #[test]
    fn grid_endpoints() {
        let s = SweepSpec::new(
            SweepVariable::DeltaM,
            -2.0,
            0.0,
            201,
            SystemParams::default(),
        );
        let g = s.grid();
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], -2.0);
        assert_eq!(g[100], -1.0);
        assert_eq!(g[200], 0.0);

        let s = SweepSpec::new(
            SweepVariable::Temperature,
            1e-3,
            1.0,
            4,
            SystemParams::default(),
        );
        let g = s.grid();
        for (x, e) in g.iter().zip([1e-3, 1e-2, 1e-1, 1.0]) {
            assert!((x / e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_validation() {
        let base = SystemParams::default();
        assert!(SweepSpec::new(SweepVariable::DeltaM, 0.0, 1.0, 1, base)
            .validate()
            .is_err());
        assert!(SweepSpec::new(SweepVariable::DeltaM, 1.0, 0.0, 5, base)
            .validate()
            .is_err());
        assert!(
            SweepSpec::new(SweepVariable::Temperature, 0.0, 1.0, 5, base)
                .validate()
                .is_err()
        );
        let bad = SystemParams {
            kappa_a: -1.0,
            ..base
        };
        assert!(SweepSpec::new(SweepVariable::DeltaM, 0.0, 1.0, 5, bad)
            .validate()
            .is_err());
    }

    #[test]
    fn all_unstable_sweep_is_an_error() {
        let base = SystemParams {
            g_b: 3.0,
            delta_a_tilde: -1.0,
            ..SystemParams::default()
        };
        let spec = SweepSpec::new(SweepVariable::DeltaM, -1.0, -0.9, 3, base);
        assert!(matches!(
            run_sweep(&spec),
            Err(Error::AllPointsUnstable { points: 3 })
        ));
    }

    #[test]
    fn single_direction_sweep() {
        let mut spec = SweepSpec::new(
            SweepVariable::DeltaM,
            -1.2,
            -0.8,
            5,
            SystemParams::default(),
        );
        spec.directions = Directions::Positive;
        let res = run_sweep(&spec).unwrap();
        for row in &res.rows {
            assert!(row.forward.is_some() && row.backward.is_none());
            assert_eq!(row.ratios, ContrastRatios::default());
        }
    }
}
