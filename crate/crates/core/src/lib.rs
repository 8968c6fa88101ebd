//! Steady-state Gaussian entanglement in a driven cavity-magnon optomechanical
//! system with a magnon Kerr nonlinearity, and its nonreciprocity under
//! reversal of the static magnetic field.
//!
//! The pipeline for one parameter point is
//!
//! 1. [`model`]: build the drift matrix `A` and diffusion matrix `D` of the
//!    linearized quadrature dynamics `u = (x_a, y_a, x_m, y_m, q, p)`;
//! 2. [`steady_state`]: check that `A` is Hurwitz and solve
//!    `A V + V Aᵀ = -D` for the covariance matrix `V`;
//! 3. [`entanglement`]: logarithmic negativities, contangles and the minimum
//!    residual contangle of `V`;
//! 4. [`nonreciprocity`]: repeat for both field directions (`K → -K`) and
//!    form the bidirectional contrast ratios.
//!
//! [`experiments`] drives parameter sweeps and the figure presets.
//!
//! All rates, couplings and detunings are expressed in units of the
//! mechanical frequency `ω_b`; absolute angular frequencies are only used for
//! thermal occupations.

pub mod entanglement;
pub mod experiments;
pub mod model;
pub mod nonreciprocity;
pub mod steady_state;

mod error;

pub use entanglement::{EntanglementMeasures, EntanglementReport, ModeLabel};
pub use error::{Error, Result};
pub use model::{DiffusionMatrix, DriftMatrix, SystemParams};
pub use nonreciprocity::{BidirectionalReport, ContrastRatios};
pub use steady_state::{CovarianceMatrix, StabilityVerdict};
