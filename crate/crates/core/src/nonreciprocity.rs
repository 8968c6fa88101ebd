//! Bidirectional contrast of entanglement under reversal of the static field.

use serde::Serialize;

use crate::entanglement::{EntanglementMeasures, EntanglementReport};
use crate::model::SystemParams;
use crate::{Error, Result};

/// `|e₊ - e₋| / (e₊ + e₋)`, with `0/0 = 0`.
pub fn contrast_ratio(e_plus: f64, e_minus: f64) -> Result<f64> {
    if !(e_plus >= 0.0 && e_minus >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "contrast ratio needs nonnegative measures, got ({e_plus}, {e_minus})"
        )));
    }
    let sum = e_plus + e_minus;
    if sum == 0.0 {
        return Ok(0.0);
    }
    Ok(((e_plus - e_minus).abs() / sum).min(1.0))
}

/// Contrast ratios for the three bipartite measures and `R_min`. `None`
/// means undefined (an unstable direction, or a negative `R_min`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ContrastRatios {
    pub c_ab: Option<f64>,
    pub c_am: Option<f64>,
    pub c_mb: Option<f64>,
    pub c_r: Option<f64>,
}

impl ContrastRatios {
    pub fn between(forward: &EntanglementMeasures, backward: &EntanglementMeasures) -> Self {
        Self {
            c_ab: contrast_ratio(forward.e_ab, backward.e_ab).ok(),
            c_am: contrast_ratio(forward.e_am, backward.e_am).ok(),
            c_mb: contrast_ratio(forward.e_mb, backward.e_mb).ok(),
            c_r: contrast_ratio(forward.r_min, backward.r_min).ok(),
        }
    }

    pub fn as_array(&self) -> [Option<f64>; 4] {
        [self.c_ab, self.c_am, self.c_mb, self.c_r]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BidirectionalReport {
    /// Base parameters with `K` replaced by `|K|`.
    pub params: SystemParams,
    /// Field along `[100]`, `Δ_K > 0`.
    pub forward: EntanglementReport,
    /// Field along `[110]`, `Δ_K < 0`.
    pub backward: EntanglementReport,
    pub ratios: ContrastRatios,
    pub diagnostic: Option<String>,
}

/// Evaluates `+|K|` and `-|K|` for `params` and compares them.
pub fn bidirectional_report(params: &SystemParams) -> Result<BidirectionalReport> {
    params.validate()?;
    let base = params.with_direction(true);
    let (forward, backward) = rayon::join(
        || EntanglementReport::analyze(&base),
        || EntanglementReport::analyze(&base.flipped()),
    );
    let (forward, backward) = (forward?, backward?);

    let mut diagnostic = None;
    let ratios = match (&forward.measures, &backward.measures) {
        (Some(f), Some(b)) => {
            if f.monogamy_violation || b.monogamy_violation {
                diagnostic = Some(format!(
                    "monogamy violation: R_min(+) = {:e}, R_min(-) = {:e}",
                    f.r_min, b.r_min
                ));
            }
            ContrastRatios::between(f, b)
        }
        _ => {
            let which: Vec<&str> = [(&forward, "positive"), (&backward, "negative")]
                .iter()
                .filter(|(r, _)| !r.stable)
                .map(|(_, name)| *name)
                .collect();
            diagnostic = Some(format!("unstable direction(s): {}", which.join(", ")));
            ContrastRatios::default()
        }
    };

    Ok(BidirectionalReport {
        params: base,
        forward,
        backward,
        ratios,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn contrast_examples() {
        assert_eq!(contrast_ratio(0.2, 0.2).unwrap(), 0.0);
        assert_eq!(contrast_ratio(0.3, 0.0).unwrap(), 1.0);
        assert!((contrast_ratio(0.2, 0.1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(contrast_ratio(0.0, 0.0).unwrap(), 0.0);
        assert!(contrast_ratio(-0.1, 0.2).is_err());
        assert!(contrast_ratio(0.1, f64::NAN).is_err());
    }

    #[test]
    fn zero_kerr_is_reciprocal() {
        let p = SystemParams {
            kerr: 0.0,
            ..SystemParams::default()
        };
        let r = bidirectional_report(&p).unwrap();
        assert_eq!(r.forward.measures, r.backward.measures);
        assert_eq!(r.ratios.as_array(), [Some(0.0); 4]);
    }

    #[test]
    fn sign_of_input_kerr_is_ignored() {
        let p = SystemParams::default();
        let a = bidirectional_report(&p).unwrap();
        let b = bidirectional_report(&p.flipped()).unwrap();
        assert_eq!(a, b);
        assert!(a.forward.kerr > 0.0 && a.backward.kerr < 0.0);
    }

    #[test]
    fn weak_kerr_breaks_reciprocity() {
        let p = SystemParams {
            kerr: 0.2 * 0.4,
            ..SystemParams::default()
        };
        let r = bidirectional_report(&p).unwrap();
        for c in r.ratios.as_array() {
            assert!(c.unwrap() > 0.0);
        }
    }

    #[test]
    fn unstable_direction_leaves_ratios_undefined() {
        // blue-detuned, strongly coupled cavity
        let p = SystemParams {
            g_b: 3.0,
            delta_a_tilde: -1.0,
            ..SystemParams::default()
        };
        let r = bidirectional_report(&p).unwrap();
        assert_eq!(r.ratios, ContrastRatios::default());
        assert!(r.diagnostic.is_some());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn contrast_bounds_and_symmetry(x in 0.0f64..10.0, y in 0.0f64..10.0, lambda in 1e-3f64..1e3) {
            let c = contrast_ratio(x, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert_eq!(c, contrast_ratio(y, x).unwrap());
            let scaled = contrast_ratio(lambda * x, lambda * y).unwrap();
            prop_assert!((scaled - c).abs() < 1e-12);
        }
    }
}
