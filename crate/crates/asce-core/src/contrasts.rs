//! Observable contrasts that witness individual-level always-survivor
//! causal effects, one per monotonicity regime.
//!
//! For a direction `y` the control-arm event is `{Y = 1-y, S = 1}` and the
//! treatment-arm event is the union of that cell with the cells a
//! potentially effect-bearing always survivor could hide in under the
//! regime's assumptions:
//!
//! - no assumptions: `{Y=1-y,S=1} ∪ {Y=2,S=0} ∪ {Y=3,S=2}`;
//! - death monotonicity: drop `{Y=2,S=0}`;
//! - censoring monotonicity: drop `{Y=3,S=2}`;
//! - both: the bare cell.
//!
//! The signed difference of the two proportions is the contrast; its
//! positive part lower-bounds the excess, over the whole randomized
//! population, of always survivors for whom treatment moves the outcome to
//! `y` over those it moves to `1-y`. Because each regime drops a
//! non-negative subtrahend, the contrasts are ordered:
//! no-assumptions ≤ single-monotonicity ≤ both.
//!
//! The monotonicity assumptions themselves are never verifiable, but they
//! are falsifiable; [`falsify_mono_death`] and [`falsify_mono_censor`]
//! compute the observable slack in the implied inequalities. A
//! non-negative slack only fails to falsify — it does not certify the
//! assumption.

use crate::panel::{Arm, ContingencyPanel, OutcomeCode, SurvivalCode};
use serde::Serialize;

/// Identification regime: which monotonicity assumptions are asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// Randomization and consistency only.
    NoAssumptions,
    /// No one dies (uncensored) under treatment who would live uncensored
    /// under control.
    MonoDeath,
    /// No one is censored under treatment who would live uncensored under
    /// control.
    MonoCensor,
    /// Both monotonicity assumptions.
    MonoBoth,
}

impl Regime {
    pub const ALL: [Regime; 4] =
        [Regime::NoAssumptions, Regime::MonoDeath, Regime::MonoCensor, Regime::MonoBoth];

    /// The treatment-arm union event for direction `y`.
    pub fn union_cells(self, y: u8) -> Vec<(OutcomeCode, SurvivalCode)> {
        let base = (OutcomeCode::from_binary(1 - y), SurvivalCode::Alive);
        let dead = (OutcomeCode::Dead, SurvivalCode::Dead);
        let censored = (OutcomeCode::Censored, SurvivalCode::Censored);
        match self {
            Regime::NoAssumptions => vec![base, dead, censored],
            Regime::MonoDeath => vec![base, censored],
            Regime::MonoCensor => vec![base, dead],
            Regime::MonoBoth => vec![base],
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "none" | "no-assumptions" => Some(Regime::NoAssumptions),
            "mono-death" | "death" => Some(Regime::MonoDeath),
            "mono-censor" | "censor" => Some(Regime::MonoCensor),
            "both" | "mono-both" => Some(Regime::MonoBoth),
            _ => None,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Regime::NoAssumptions => "no monotonicity assumptions",
            Regime::MonoDeath => "death monotonicity",
            Regime::MonoCensor => "censoring monotonicity",
            Regime::MonoBoth => "death and censoring monotonicity",
        }
    }
}

/// One observable contrast: the difference between the control-arm event
/// proportion and the treatment-arm union-event proportion, with the
/// integer counts behind each side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastResult {
    pub t: usize,
    pub y: u8,
    pub regime: Regime,
    /// `p0 - p1`, the signed contrast.
    pub delta: f64,
    /// `max(delta, 0)`: the population-scale lower bound.
    pub lower_bound: f64,
    pub p0: f64,
    pub p1: f64,
    pub k0: u64,
    pub n0: u64,
    pub k1: u64,
    pub n1: u64,
}

/// Compute the regime's contrast at one timepoint and direction.
///
/// `y` is the outcome value treatment is hypothesized to cause among
/// always survivors (the control-arm event then carries `1-y`).
pub fn contrast(panel: &ContingencyPanel, t: usize, y: u8, regime: Regime) -> ContrastResult {
    assert!(y <= 1, "direction must be 0 or 1");
    assert!(t < panel.grid().len(), "timepoint out of range");
    let n0 = panel.arm_size(Arm::Control);
    let n1 = panel.arm_size(Arm::Treatment);
    assert!(n0 > 0 && n1 > 0, "contrast requires both arms non-empty");
    let k0 = panel.count(Arm::Control, t, OutcomeCode::from_binary(1 - y), SurvivalCode::Alive);
    let k1: u64 =
        regime.union_cells(y).iter().map(|&(cy, cs)| panel.count(Arm::Treatment, t, cy, cs)).sum();
    let p0 = k0 as f64 / n0 as f64;
    let p1 = k1 as f64 / n1 as f64;
    let delta = p0 - p1;
    ContrastResult { t, y, regime, delta, lower_bound: delta.max(0.0), p0, p1, k0, n0, k1, n1 }
}

/// The sum-minus-one form of the no-assumptions condition:
/// `P(Y=y,S=1|X=1) + P(Y=1-y,S=1|X=0) - 1`.
///
/// Agrees with `contrast(.., Regime::NoAssumptions).delta` exactly when
/// the treatment arm's cells account for every randomized individual;
/// otherwise the difference form is larger by the unaccounted mass.
pub fn theorem_sum_form(panel: &ContingencyPanel, t: usize, y: u8) -> f64 {
    assert!(y <= 1, "direction must be 0 or 1");
    let n0 = panel.arm_size(Arm::Control) as f64;
    let n1 = panel.arm_size(Arm::Treatment) as f64;
    let treated =
        panel.count(Arm::Treatment, t, OutcomeCode::from_binary(y), SurvivalCode::Alive) as f64;
    let control =
        panel.count(Arm::Control, t, OutcomeCode::from_binary(1 - y), SurvivalCode::Alive) as f64;
    treated / n1 + control / n0 - 1.0
}

/// Minimum number of always-survivors-with-effect implied at population
/// scale: `floor(lower_bound * n_total)`. Floor, not round — the bound is
/// a minimum.
pub fn headcount(lower_bound: f64, n_total: u64) -> u64 {
    if lower_bound <= 0.0 {
        return 0;
    }
    (lower_bound * n_total as f64).floor() as u64
}

/// Verdict of a monotonicity falsification check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FalsificationCheck {
    /// `1 - (sum of the two proportions)`; the assumption is falsified
    /// exactly when this is negative.
    pub slack: f64,
    pub consistent: bool,
}

/// Death-monotonicity check: the assumption implies
/// `P(S=0|X=1) + P(S=1|X=0) <= 1`. A non-negative slack fails to falsify
/// the assumption; it does not guarantee it holds.
pub fn falsify_mono_death(panel: &ContingencyPanel, t: usize) -> FalsificationCheck {
    let n0 = panel.arm_size(Arm::Control) as f64;
    let n1 = panel.arm_size(Arm::Treatment) as f64;
    let dead_treated = panel.survival_count(Arm::Treatment, t, SurvivalCode::Dead) as f64 / n1;
    let alive_control = panel.survival_count(Arm::Control, t, SurvivalCode::Alive) as f64 / n0;
    let slack = 1.0 - (dead_treated + alive_control);
    FalsificationCheck { slack, consistent: slack >= 0.0 }
}

/// Censoring-monotonicity check: the assumption implies
/// `P(S=2|X=1) + P(S=1|X=0) <= 1`. Same one-sided interpretation.
pub fn falsify_mono_censor(panel: &ContingencyPanel, t: usize) -> FalsificationCheck {
    let n0 = panel.arm_size(Arm::Control) as f64;
    let n1 = panel.arm_size(Arm::Treatment) as f64;
    let censored_treated =
        panel.survival_count(Arm::Treatment, t, SurvivalCode::Censored) as f64 / n1;
    let alive_control = panel.survival_count(Arm::Control, t, SurvivalCode::Alive) as f64 / n0;
    let slack = 1.0 - (censored_treated + alive_control);
    FalsificationCheck { slack, consistent: slack >= 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{swog_dataset, ContingencyPanel, SwogVariant, TimeGrid};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn no_assumptions_contrast_at_three_months() {
        let panel = swog_dataset(SwogVariant::Appendix);
        let c = contrast(&panel, 2, 0, Regime::NoAssumptions);
        assert_eq!((c.k0, c.n0, c.k1, c.n1), (146, 336, 95, 338));
        close(c.delta, 146.0 / 336.0 - 95.0 / 338.0, 1e-15);
        close(c.delta, 0.1534, 1e-4);
        close(c.lower_bound, c.delta, 0.0);
    }

    #[test]
    fn mono_both_contrast_at_three_months() {
        let panel = swog_dataset(SwogVariant::MainText);
        let c = contrast(&panel, 2, 0, Regime::MonoBoth);
        assert_eq!(c.k1, 72);
        close(c.delta, 146.0 / 336.0 - 72.0 / 338.0, 1e-15);
        close(c.delta, 0.2215, 5e-5);
    }

    #[test]
    fn mono_censor_contrast_at_one_month() {
        let panel = swog_dataset(SwogVariant::MainText);
        let c = contrast(&panel, 0, 0, Regime::MonoCensor);
        assert_eq!(c.k1, 9); // 6 progressed + 3 dead
        close(c.delta, 40.0 / 336.0 - 9.0 / 338.0, 1e-15);
        close(c.delta, 0.0924, 5e-5);
    }

    #[test]
    fn all_mass_on_deaths_gives_nonpositive_delta() {
        let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
        let panel = ContingencyPanel::from_counts(
            grid,
            50,
            50,
            &[
                (Arm::Control, 0, OutcomeCode::Dead, SurvivalCode::Dead, 50),
                (Arm::Treatment, 0, OutcomeCode::Dead, SurvivalCode::Dead, 50),
            ],
        )
        .unwrap();
        let c = contrast(&panel, 0, 1, Regime::MonoCensor);
        close(c.delta, -1.0, 1e-15); // -P(Y=2,S=0 | X=1)
        assert_eq!(c.lower_bound, 0.0);
    }

    #[test]
    fn regime_ordering_holds_on_every_swog_cell() {
        let panel = swog_dataset(SwogVariant::MainText);
        for t in 0..7 {
            for y in [0u8, 1] {
                let none = contrast(&panel, t, y, Regime::NoAssumptions).delta;
                let death = contrast(&panel, t, y, Regime::MonoDeath).delta;
                let censor = contrast(&panel, t, y, Regime::MonoCensor).delta;
                let both = contrast(&panel, t, y, Regime::MonoBoth).delta;
                assert!(none <= death + 1e-15);
                assert!(none <= censor + 1e-15);
                assert!(death <= both + 1e-15);
                assert!(censor <= both + 1e-15);
            }
        }
    }

    #[test]
    fn difference_form_equals_sum_form_when_cells_are_complete() {
        // The appendix variant's cells account for every individual at
        // every timepoint, so the two formulations coincide exactly.
        let panel = swog_dataset(SwogVariant::Appendix);
        for t in 0..7 {
            for y in [0u8, 1] {
                let diff = contrast(&panel, t, y, Regime::NoAssumptions).delta;
                let sum = theorem_sum_form(&panel, t, y);
                close(diff, sum, 1e-12);
            }
        }
        // The main-text variant leaves 27 treated individuals unaccounted
        // at 18 months; the difference form exceeds the sum form by
        // exactly that mass.
        let main = swog_dataset(SwogVariant::MainText);
        let diff = contrast(&main, 6, 0, Regime::NoAssumptions).delta;
        let sum = theorem_sum_form(&main, 6, 0);
        close(diff - sum, 27.0 / 338.0, 1e-12);
    }

    #[test]
    fn headcounts_match_published_narrative_arithmetic() {
        assert_eq!(headcount(0.07, 674), 47);
        assert_eq!(headcount(0.0, 674), 0);
        assert_eq!(headcount(-0.2, 674), 0);
        // floor, not round
        assert_eq!(headcount(0.15, 674), 101);
        assert_eq!(headcount(0.999, 1000), 999);
    }

    #[test]
    fn swog_fails_to_falsify_both_monotonicity_assumptions() {
        for variant in [SwogVariant::MainText, SwogVariant::Appendix] {
            let panel = swog_dataset(variant);
            for t in 0..7 {
                assert!(falsify_mono_death(&panel, t).consistent, "death check t={t}");
                assert!(falsify_mono_censor(&panel, t).consistent, "censor check t={t}");
            }
        }
    }

    #[test]
    fn constructed_violation_is_falsified() {
        // P(S=0|X=1)=0.7 and P(S=1|X=0)=0.5 cannot coexist with death
        // monotonicity.
        let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
        let panel = ContingencyPanel::from_counts(
            grid,
            10,
            10,
            &[
                (Arm::Treatment, 0, OutcomeCode::Dead, SurvivalCode::Dead, 7),
                (Arm::Treatment, 0, OutcomeCode::Absent, SurvivalCode::Alive, 3),
                (Arm::Control, 0, OutcomeCode::Absent, SurvivalCode::Alive, 5),
                (Arm::Control, 0, OutcomeCode::Dead, SurvivalCode::Dead, 5),
            ],
        )
        .unwrap();
        let check = falsify_mono_death(&panel, 0);
        assert!(!check.consistent);
        close(check.slack, -0.2, 1e-12);
    }

    #[test]
    fn degenerate_panels_give_full_slack() {
        // No deaths in the treated arm, no survivors in the control arm.
        let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
        let panel = ContingencyPanel::from_counts(
            grid,
            10,
            10,
            &[
                (Arm::Treatment, 0, OutcomeCode::Absent, SurvivalCode::Alive, 10),
                (Arm::Control, 0, OutcomeCode::Dead, SurvivalCode::Dead, 10),
            ],
        )
        .unwrap();
        close(falsify_mono_death(&panel, 0).slack, 1.0, 1e-15);
        // Zero censoring: the censor slack reduces to 1 - P(S=1|X=0).
        close(falsify_mono_censor(&panel, 0).slack, 1.0, 1e-15);
        let grid2 = TimeGrid::new(vec!["t1".into()]).unwrap();
        let half_alive = ContingencyPanel::from_counts(
            grid2,
            10,
            10,
            &[
                (Arm::Treatment, 0, OutcomeCode::Absent, SurvivalCode::Alive, 10),
                (Arm::Control, 0, OutcomeCode::Absent, SurvivalCode::Alive, 4),
                (Arm::Control, 0, OutcomeCode::Dead, SurvivalCode::Dead, 6),
            ],
        )
        .unwrap();
        close(falsify_mono_censor(&half_alive, 0).slack, 1.0 - 0.4, 1e-15);
    }

    #[test]
    fn contrast_bounds_are_in_range() {
        let panel = swog_dataset(SwogVariant::MainText);
        for t in 0..7 {
            for y in [0u8, 1] {
                for regime in Regime::ALL {
                    let c = contrast(&panel, t, y, regime);
                    assert!(c.k0 <= c.n0 && c.k1 <= c.n1);
                    assert!((-1.0..=1.0).contains(&c.delta));
                    assert_eq!(c.lower_bound, c.delta.max(0.0));
                }
            }
        }
    }
}
