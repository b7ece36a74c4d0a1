//! Sensitivity analysis for violations of the monotonicity assumptions.
//!
//! Each monotonicity regime's contrast stays causally interpretable when
//! its assumption fails, provided an unidentified violation mass is
//! subtracted:
//!
//! - `d_m(t)` adjusts the death-monotonicity contrast; after subtraction
//!   the sign compares the favourable always-survivor mass against the
//!   reverse mass plus the censored strata that could hide it;
//! - `a_m(t)` adjusts the censoring-monotonicity contrast; after
//!   subtraction the sign compares the favourable and reverse
//!   always-survivor masses directly;
//! - `k_m(t)` does the same for the both-assumptions contrast.
//!
//! None of the three parameters is point identified in a randomized
//! study, so they are taken as direct user inputs (single values or
//! grids) and never estimated. The break-even value — the parameter at
//! which the conclusion is lost — is simply the base contrast itself, and
//! is reported alongside every primary analysis so "how much violation
//! would overturn this" is a first-class output.

use crate::contrasts::{contrast, Regime};
use crate::panel::ContingencyPanel;
use serde::Serialize;
use thiserror::Error;

/// Which unidentified violation parameter is being supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SensitivityKind {
    /// `d_m(t)`: violation mass for death monotonicity.
    Dm,
    /// `a_m(t)`: violation mass for censoring monotonicity.
    Am,
    /// `k_m(t)`: combined violation mass when both assumptions are made.
    Km,
}

impl SensitivityKind {
    pub const ALL: [SensitivityKind; 3] =
        [SensitivityKind::Dm, SensitivityKind::Am, SensitivityKind::Km];

    /// The regime whose contrast the parameter adjusts.
    pub fn base_regime(self) -> Regime {
        match self {
            SensitivityKind::Dm => Regime::MonoDeath,
            SensitivityKind::Am => Regime::MonoCensor,
            SensitivityKind::Km => Regime::MonoBoth,
        }
    }

    /// The parameter kind belonging to a regime, if it has one.
    pub fn for_regime(regime: Regime) -> Option<SensitivityKind> {
        match regime {
            Regime::NoAssumptions => None,
            Regime::MonoDeath => Some(SensitivityKind::Dm),
            Regime::MonoCensor => Some(SensitivityKind::Am),
            Regime::MonoBoth => Some(SensitivityKind::Km),
        }
    }

    pub fn parse(s: &str) -> Option<SensitivityKind> {
        match s.to_ascii_lowercase().as_str() {
            "dm" | "d_m" => Some(SensitivityKind::Dm),
            "am" | "a_m" => Some(SensitivityKind::Am),
            "km" | "k_m" => Some(SensitivityKind::Km),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SensitivityKind::Dm => "d_m",
            SensitivityKind::Am => "a_m",
            SensitivityKind::Km => "k_m",
        }
    }
}

/// A user-supplied value for one violation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityParams {
    pub kind: SensitivityKind,
    /// Signed violation mass in [-1, 1]; negative values strengthen the
    /// conclusion.
    pub value: f64,
    pub t: usize,
    pub y: u8,
}

#[derive(Debug, Error, PartialEq)]
pub enum SensitivityError {
    #[error("sensitivity parameter {0} outside [-1, 1]")]
    ValueOutOfRange(f64),
}

impl SensitivityParams {
    pub fn new(kind: SensitivityKind, value: f64, t: usize, y: u8) -> Result<Self, SensitivityError> {
        if !(-1.0..=1.0).contains(&value) || value.is_nan() {
            return Err(SensitivityError::ValueOutOfRange(value));
        }
        Ok(SensitivityParams { kind, value, t, y })
    }
}

/// Result of adjusting the base contrast by a violation mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjustedConclusion {
    pub base_delta: f64,
    pub adjusted_delta: f64,
    /// True when the adjusted contrast stays positive, i.e. the favourable
    /// counterfactual mass still exceeds the subtracted counterfactual
    /// mass under the supplied violation.
    pub established: bool,
}

/// Subtract the supplied violation mass from the matching base contrast.
pub fn adjusted_conclusion(
    panel: &ContingencyPanel,
    t: usize,
    y: u8,
    params: &SensitivityParams,
) -> AdjustedConclusion {
    let base = contrast(panel, t, y, params.kind.base_regime()).delta;
    let adjusted = base - params.value;
    AdjustedConclusion { base_delta: base, adjusted_delta: adjusted, established: adjusted > 0.0 }
}

/// The smallest violation mass at which the regime's conclusion is lost:
/// the base contrast itself. A non-positive break-even means the
/// conclusion was never established.
pub fn breakeven(panel: &ContingencyPanel, t: usize, y: u8, kind: SensitivityKind) -> f64 {
    contrast(panel, t, y, kind.base_regime()).delta
}

/// One row of a sensitivity sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub adjusted_delta: f64,
    pub established: bool,
}

/// Evaluate the adjusted conclusion over a grid of parameter values.
pub fn sweep(
    panel: &ContingencyPanel,
    t: usize,
    y: u8,
    kind: SensitivityKind,
    grid: &[f64],
) -> Result<Vec<SweepRow>, SensitivityError> {
    let base = contrast(panel, t, y, kind.base_regime()).delta;
    grid.iter()
        .map(|&value| {
            if !(-1.0..=1.0).contains(&value) || value.is_nan() {
                return Err(SensitivityError::ValueOutOfRange(value));
            }
            let adjusted = base - value;
            Ok(SweepRow { value, adjusted_delta: adjusted, established: adjusted > 0.0 })
        })
        .collect()
}

/// Parse a grid expression: either comma-separated values
/// (`"0,0.05,0.1"`) or `start:stop:step` (inclusive of `stop` up to a
/// half-step of rounding).
pub fn parse_grid(expr: &str) -> Result<Vec<f64>, String> {
    let expr = expr.trim();
    if expr.is_empty() {
        return Ok(Vec::new());
    }
    if expr.contains(':') {
        let parts: Vec<&str> = expr.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got `{expr}`"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| format!("bad start `{}`", parts[0]))?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| format!("bad stop `{}`", parts[1]))?;
        let step: f64 = parts[2].trim().parse().map_err(|_| format!("bad step `{}`", parts[2]))?;
        if step <= 0.0 {
            return Err("step must be positive".into());
        }
        if stop < start {
            return Err("stop must not precede start".into());
        }
        let n = ((stop - start) / step + 0.5).floor() as usize;
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    expr.split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|_| format!("bad grid value `{tok}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{swog_dataset, SwogVariant};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn worked_example_quarter_minus_five_percent() {
        // A death-monotonicity contrast of 0.25 survives a hypothesized 5%
        // violation mass with 0.20 to spare.
        let base = 0.25;
        let adjusted = base - 0.05;
        close(adjusted, 0.20, 1e-15);
        // Same computation through the API on real data must be affine
        // with slope -1.
        let panel = swog_dataset(SwogVariant::MainText);
        let p1 = SensitivityParams::new(SensitivityKind::Dm, 0.05, 4, 0).unwrap();
        let p2 = SensitivityParams::new(SensitivityKind::Dm, 0.10, 4, 0).unwrap();
        let a1 = adjusted_conclusion(&panel, 4, 0, &p1);
        let a2 = adjusted_conclusion(&panel, 4, 0, &p2);
        close(a1.adjusted_delta - a2.adjusted_delta, 0.05, 1e-12);
        close(a1.base_delta, a1.adjusted_delta + 0.05, 1e-12);
    }

    #[test]
    fn break_even_parameter_removes_the_conclusion() {
        let panel = swog_dataset(SwogVariant::MainText);
        let be = breakeven(&panel, 4, 0, SensitivityKind::Dm);
        let params = SensitivityParams::new(SensitivityKind::Dm, be, 4, 0).unwrap();
        let adj = adjusted_conclusion(&panel, 4, 0, &params);
        close(adj.adjusted_delta, 0.0, 1e-12);
        assert!(!adj.established);
    }

    #[test]
    fn six_month_death_breakeven_is_about_twelve_percent() {
        let panel = swog_dataset(SwogVariant::MainText);
        close(breakeven(&panel, 4, 0, SensitivityKind::Dm), 0.118, 5e-4);
    }

    #[test]
    fn three_month_combined_breakeven_equals_mono_both_contrast() {
        let panel = swog_dataset(SwogVariant::MainText);
        close(breakeven(&panel, 2, 0, SensitivityKind::Km), 0.2215, 5e-5);
    }

    #[test]
    fn zero_parameter_reproduces_the_regime_decision() {
        let panel = swog_dataset(SwogVariant::MainText);
        for t in 0..7 {
            for y in [0u8, 1] {
                for kind in SensitivityKind::ALL {
                    let params = SensitivityParams::new(kind, 0.0, t, y).unwrap();
                    let adj = adjusted_conclusion(&panel, t, y, &params);
                    let base = contrast(&panel, t, y, kind.base_regime()).delta;
                    close(adj.adjusted_delta, base, 0.0);
                    assert_eq!(adj.established, base > 0.0);
                }
            }
        }
    }

    #[test]
    fn six_month_km_zero_matches_mono_both_contrast() {
        let panel = swog_dataset(SwogVariant::MainText);
        let params = SensitivityParams::new(SensitivityKind::Km, 0.0, 4, 0).unwrap();
        let adj = adjusted_conclusion(&panel, 4, 0, &params);
        close(adj.adjusted_delta, 164.0 / 336.0 - 116.0 / 338.0, 1e-15);
        assert!(adj.established);
    }

    #[test]
    fn sweep_flips_at_the_base_contrast() {
        let panel = swog_dataset(SwogVariant::MainText);
        // Base d_m contrast at 6 months is ~0.118.
        let rows = sweep(&panel, 4, 0, SensitivityKind::Dm, &[0.0, 0.05, 0.10, 0.15]).unwrap();
        let established: Vec<bool> = rows.iter().map(|r| r.established).collect();
        assert_eq!(established, [true, true, true, false]);
        // Monotone in the parameter.
        for w in rows.windows(2) {
            assert!(w[0].adjusted_delta >= w[1].adjusted_delta);
        }
    }

    #[test]
    fn empty_grid_and_negative_values() {
        let panel = swog_dataset(SwogVariant::MainText);
        assert!(sweep(&panel, 0, 0, SensitivityKind::Am, &[]).unwrap().is_empty());
        let rows = sweep(&panel, 0, 0, SensitivityKind::Am, &[-0.1]).unwrap();
        let base = contrast(&panel, 0, 0, Regime::MonoCensor).delta;
        close(rows[0].adjusted_delta, base + 0.1, 1e-15);
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        let panel = swog_dataset(SwogVariant::MainText);
        assert!(SensitivityParams::new(SensitivityKind::Dm, 1.5, 0, 0).is_err());
        assert_eq!(
            sweep(&panel, 0, 0, SensitivityKind::Dm, &[0.0, 2.0]),
            Err(SensitivityError::ValueOutOfRange(2.0))
        );
    }

    #[test]
    fn grid_expressions_parse() {
        assert_eq!(parse_grid("0,0.05,0.1").unwrap(), vec![0.0, 0.05, 0.1]);
        let ramp = parse_grid("0:0.2:0.05").unwrap();
        assert_eq!(ramp.len(), 5);
        close(ramp[4], 0.2, 1e-12);
        assert!(parse_grid("0:0.2").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("").unwrap().is_empty());
    }
}
