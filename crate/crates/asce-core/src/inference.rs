//! Frequentist testing machinery: one-sided two-proportion Wald tests
//! with optional continuity correction, two-sided 95/99% confidence
//! intervals, Bonferroni multiplicity control, and the whole-time-grid
//! analysis that regenerates the published result tables.
//!
//! The null for direction `y` at time `t` is that the control-arm event
//! proportion does not exceed the treatment-arm union-event proportion;
//! rejecting it witnesses always survivors whose outcome the treatment
//! moves. Sample sizes here are in the hundreds, so the normal reference
//! distribution is the default; a Welch t variant is available for
//! small-sample sensitivity.
//!
//! Continuity correction defaults on for both p-values and intervals —
//! that convention is the one the published tables round from. With it
//! on, the z statistic shrinks `|estimate|` by `(1/n0 + 1/n1)/2` (floored
//! at zero) and each interval widens by the same amount on both sides.

use crate::contrasts::{contrast, ContrastResult, Regime};
use crate::normal::{std_normal_cdf, Z_95, Z_99};
use crate::panel::ContingencyPanel;
use crate::sensitivity::SensitivityKind;
use crate::student::{student_t_cdf, student_t_quantile};
use serde::Serialize;
use thiserror::Error;

/// Reference distribution for the test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum TestVariant {
    #[default]
    Normal,
    /// Welch–Satterthwaite t; indistinguishable from normal at the sample
    /// sizes of the embedded trial.
    StudentT,
}

/// A single one-sided two-proportion test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    /// `k0/n0 - k1/n1`, uncorrected.
    pub estimate: f64,
    pub se: f64,
    /// Continuity-corrected statistic when the correction is on.
    pub z: f64,
    pub p_one_sided: f64,
    pub ci95: (f64, f64),
    pub ci99: (f64, f64),
    pub continuity: bool,
    /// Significance threshold after multiplicity correction; equals the
    /// raw level for a standalone test.
    pub alpha_adjusted: f64,
    pub variant: TestVariant,
}

impl TestResult {
    pub fn significant(&self) -> bool {
        self.p_one_sided < self.alpha_adjusted
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("event count {k} exceeds arm size {n}")]
    CountOutOfRange { k: u64, n: u64 },
    #[error("arm sizes must be positive")]
    EmptyArm,
    #[error("both cell variances are zero (k=0 or k=n in each arm); the Wald statistic is undefined (estimate {estimate})")]
    DegenerateVariance { estimate: f64 },
    #[error("significance level must lie in (0,1), got {0}")]
    BadAlpha(f64),
    #[error("multiplicity must be at least 1")]
    BadMultiplicity,
}

/// Bonferroni-adjusted significance threshold: `alpha / m`.
pub fn bonferroni(alpha: f64, m: usize) -> Result<f64, InferenceError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(InferenceError::BadAlpha(alpha));
    }
    if m < 1 {
        return Err(InferenceError::BadMultiplicity);
    }
    Ok(alpha / m as f64)
}

/// One-sided Wald test for `H0: p0 <= p1` against `p0 > p1`, with
/// two-sided 95/99% intervals for `p0 - p1`. Unpooled variance.
pub fn wald_diff_test(
    k0: u64,
    n0: u64,
    k1: u64,
    n1: u64,
    continuity: bool,
    alpha: f64,
) -> Result<TestResult, InferenceError> {
    wald_diff_test_with(k0, n0, k1, n1, continuity, alpha, TestVariant::Normal)
}

/// [`wald_diff_test`] with an explicit reference distribution.
pub fn wald_diff_test_with(
    k0: u64,
    n0: u64,
    k1: u64,
    n1: u64,
    continuity: bool,
    alpha: f64,
    variant: TestVariant,
) -> Result<TestResult, InferenceError> {
    if n0 == 0 || n1 == 0 {
        return Err(InferenceError::EmptyArm);
    }
    if k0 > n0 {
        return Err(InferenceError::CountOutOfRange { k: k0, n: n0 });
    }
    if k1 > n1 {
        return Err(InferenceError::CountOutOfRange { k: k1, n: n1 });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(InferenceError::BadAlpha(alpha));
    }
    let (n0f, n1f) = (n0 as f64, n1 as f64);
    let p0 = k0 as f64 / n0f;
    let p1 = k1 as f64 / n1f;
    let estimate = p0 - p1;
    let v0 = p0 * (1.0 - p0) / n0f;
    let v1 = p1 * (1.0 - p1) / n1f;
    let se = (v0 + v1).sqrt();
    if se == 0.0 {
        return Err(InferenceError::DegenerateVariance { estimate });
    }
    let cc = if continuity { 0.5 * (1.0 / n0f + 1.0 / n1f) } else { 0.0 };
    let corrected = estimate.signum() * (estimate.abs() - cc).max(0.0);
    let z = corrected / se;
    let (p_one_sided, q95, q99) = match variant {
        TestVariant::Normal => (1.0 - std_normal_cdf(z), Z_95, Z_99),
        TestVariant::StudentT => {
            let df = (v0 + v1).powi(2) / (v0 * v0 / (n0f - 1.0) + v1 * v1 / (n1f - 1.0));
            (
                1.0 - student_t_cdf(z, df),
                student_t_quantile(0.975, df),
                student_t_quantile(0.995, df),
            )
        }
    };
    let half95 = q95 * se + cc;
    let half99 = q99 * se + cc;
    Ok(TestResult {
        estimate,
        se,
        z,
        p_one_sided,
        ci95: (estimate - half95, estimate + half95),
        ci99: (estimate - half99, estimate + half99),
        continuity,
        alpha_adjusted: alpha,
        variant,
    })
}

/// One analyzed timepoint: the contrast, its test, significance under the
/// multiplicity-adjusted level, and the break-even sensitivity value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub t: usize,
    pub time_label: String,
    pub contrast: ContrastResult,
    pub test: TestResult,
    pub significant: bool,
    /// Minimum number of always-survivors-with-effect at population scale
    /// (floor of `lower_bound * (n0 + n1)`).
    pub headcount: u64,
    /// Violation mass at which the regime's conclusion is lost; absent for
    /// the no-assumptions regime, which has no violation parameter.
    pub breakeven: Option<f64>,
}

/// The full time-grid analysis for one regime and direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisTable {
    pub regime: Regime,
    pub y: u8,
    pub alpha: f64,
    /// Number of tests (timepoints) the Bonferroni correction divides by.
    pub m: usize,
    pub alpha_adjusted: f64,
    pub continuity: bool,
    pub rows: Vec<AnalysisRow>,
    pub mono_death_consistent: bool,
    pub mono_censor_consistent: bool,
}

/// Run one Wald test per timepoint with the regime's union-event counts,
/// flagging each row against `alpha / m`.
pub fn analyze_timegrid(
    panel: &ContingencyPanel,
    regime: Regime,
    y: u8,
    alpha: f64,
    continuity: bool,
) -> Result<AnalysisTable, InferenceError> {
    analyze_timegrid_with(panel, regime, y, alpha, continuity, TestVariant::Normal, true)
}

/// [`analyze_timegrid`] with an explicit reference distribution and the
/// option to disable multiplicity correction.
pub fn analyze_timegrid_with(
    panel: &ContingencyPanel,
    regime: Regime,
    y: u8,
    alpha: f64,
    continuity: bool,
    variant: TestVariant,
    correct_multiplicity: bool,
) -> Result<AnalysisTable, InferenceError> {
    let m = panel.grid().len();
    let alpha_adjusted = if correct_multiplicity { bonferroni(alpha, m)? } else { alpha };
    let n_total = panel.arm_size(crate::panel::Arm::Control)
        + panel.arm_size(crate::panel::Arm::Treatment);
    let mut rows = Vec::with_capacity(m);
    let mut mono_death_consistent = true;
    let mut mono_censor_consistent = true;
    for t in 0..m {
        let c = contrast(panel, t, y, regime);
        let mut test =
            wald_diff_test_with(c.k0, c.n0, c.k1, c.n1, continuity, alpha, variant)?;
        test.alpha_adjusted = alpha_adjusted;
        let significant = test.significant();
        let breakeven = SensitivityKind::for_regime(regime).map(|_| c.delta);
        rows.push(AnalysisRow {
            t,
            time_label: panel.grid().label(t).to_string(),
            headcount: crate::contrasts::headcount(c.lower_bound, n_total),
            contrast: c,
            test,
            significant,
            breakeven,
        });
        mono_death_consistent &= crate::contrasts::falsify_mono_death(panel, t).consistent;
        mono_censor_consistent &= crate::contrasts::falsify_mono_censor(panel, t).consistent;
    }
    Ok(AnalysisTable {
        regime,
        y,
        alpha,
        m,
        alpha_adjusted,
        continuity,
        rows,
        mono_death_consistent,
        mono_censor_consistent,
    })
}

/// Display convention for p-values: four decimals with a `<0.0001` floor.
pub fn format_p(p: f64) -> String {
    if p < 1e-4 {
        "<0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}

/// Two-decimal display that never prints a negative zero.
pub fn format_2dp(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

impl AnalysisTable {
    /// Markdown in the published layout: one column per timepoint, one row
    /// per statistic.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Regime: {} (direction y={}, alpha={}, Bonferroni threshold {:.4}, continuity {})\n\n",
            self.regime.describe(),
            self.y,
            self.alpha,
            self.alpha_adjusted,
            if self.continuity { "on" } else { "off" },
        ));
        let header: Vec<String> = self.rows.iter().map(|r| r.time_label.clone()).collect();
        out.push_str(&format!("| | {} |\n", header.join(" | ")));
        out.push_str(&format!("|---|{}\n", "---|".repeat(self.rows.len())));
        let cells = |name: &str, f: &dyn Fn(&AnalysisRow) -> String| {
            format!(
                "| {} | {} |\n",
                name,
                self.rows.iter().map(f).collect::<Vec<_>>().join(" | ")
            )
        };
        out.push_str(&cells("Estimate", &|r| format_2dp(r.test.estimate)));
        out.push_str(&cells("95% CI", &|r| {
            format!("({}, {})", format_2dp(r.test.ci95.0), format_2dp(r.test.ci95.1))
        }));
        out.push_str(&cells("99% CI", &|r| {
            format!("({}, {})", format_2dp(r.test.ci99.0), format_2dp(r.test.ci99.1))
        }));
        out.push_str(&cells("p-value", &|r| format_p(r.test.p_one_sided)));
        out.push_str(&cells("Significant", &|r| {
            if r.significant { "yes" } else { "no" }.to_string()
        }));
        out.push_str(&cells("Headcount ≥", &|r| r.headcount.to_string()));
        if self.rows.iter().any(|r| r.breakeven.is_some()) {
            out.push_str(&cells("Break-even", &|r| {
                r.breakeven.map(|b| format!("{b:.4}")).unwrap_or_default()
            }));
        }
        match self.regime {
            Regime::MonoDeath => out.push_str(&falsification_note(
                "death monotonicity",
                self.mono_death_consistent,
            )),
            Regime::MonoCensor => out.push_str(&falsification_note(
                "censoring monotonicity",
                self.mono_censor_consistent,
            )),
            Regime::MonoBoth => {
                out.push_str(&falsification_note(
                    "death monotonicity",
                    self.mono_death_consistent,
                ));
                out.push_str(&falsification_note(
                    "censoring monotonicity",
                    self.mono_censor_consistent,
                ));
            }
            Regime::NoAssumptions => {}
        }
        out
    }

    /// Tidy TSV: one row per timepoint.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "t\ttime\testimate\tse\tci95_lo\tci95_hi\tci99_lo\tci99_hi\tp_one_sided\tsignificant\theadcount\tbreakeven\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\n",
                r.t + 1,
                r.time_label,
                r.test.estimate,
                r.test.se,
                r.test.ci95.0,
                r.test.ci95.1,
                r.test.ci99.0,
                r.test.ci99.1,
                format_p(r.test.p_one_sided),
                r.significant,
                r.headcount,
                r.breakeven.map(|b| format!("{b:.6}")).unwrap_or_default(),
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("analysis table serializes")
    }
}

fn falsification_note(name: &str, consistent: bool) -> String {
    if consistent {
        format!(
            "\nData are consistent with {name} at every timepoint: we fail to falsify the assumption (this does not guarantee it holds).\n"
        )
    } else {
        format!("\nWARNING: the data falsify {name} at one or more timepoints.\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{swog_dataset, SwogVariant};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn three_month_no_assumptions_row_matches_published_table() {
        // Without correction the point estimate and interval centre are
        // unchanged; the published interval rounds from the corrected one.
        let plain = wald_diff_test(146, 336, 95, 338, false, 0.05).unwrap();
        close(plain.estimate, 0.1534, 1e-4);
        close(plain.ci95.0, 0.082, 5e-4);
        close(plain.ci95.1, 0.225, 5e-4);
        assert!(plain.p_one_sided < 1e-4);

        let corrected = wald_diff_test(146, 336, 95, 338, true, 0.05).unwrap();
        close(corrected.ci95.0, 0.0790, 5e-4);
        close(corrected.ci95.1, 0.2279, 5e-4);
    }

    #[test]
    fn continuity_correction_reproduces_published_small_p_values() {
        // 1 month, no assumptions: union count 18.
        let t4 = wald_diff_test(40, 336, 18, 338, true, 0.05).unwrap();
        close(t4.p_one_sided, 0.0018, 3e-4);
        // 1 month, death monotonicity: union count 15.
        let t5 = wald_diff_test(40, 336, 15, 338, true, 0.05).unwrap();
        close(t5.p_one_sided, 0.0003, 2e-4);
    }

    #[test]
    fn six_month_mono_both_row() {
        let r = wald_diff_test(164, 336, 116, 338, true, 0.05).unwrap();
        close(r.estimate, 0.1449, 5e-5);
        assert_eq!(format_2dp(r.estimate), "0.14");
        assert!(r.p_one_sided < 1e-4);
        close(r.ci95.0, 0.07, 0.005);
        close(r.ci95.1, 0.22, 0.005);
    }

    #[test]
    fn degenerate_variance_is_an_error() {
        assert_eq!(
            wald_diff_test(0, 10, 0, 10, false, 0.05),
            Err(InferenceError::DegenerateVariance { estimate: 0.0 })
        );
        assert!(matches!(
            wald_diff_test(10, 10, 10, 10, false, 0.05),
            Err(InferenceError::DegenerateVariance { .. })
        ));
        assert_eq!(
            wald_diff_test(11, 10, 0, 10, false, 0.05),
            Err(InferenceError::CountOutOfRange { k: 11, n: 10 })
        );
    }

    #[test]
    fn zero_estimate_without_correction_gives_p_half() {
        let r = wald_diff_test(5, 10, 50, 100, false, 0.05).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.p_one_sided, 0.5);
    }

    #[test]
    fn bonferroni_thresholds() {
        close(bonferroni(0.05, 7).unwrap(), 0.05 / 7.0, 1e-15);
        close(bonferroni(0.05, 7).unwrap(), 0.00714, 5e-5);
        assert_eq!(bonferroni(0.05, 1).unwrap(), 0.05);
        close(bonferroni(0.01, 7).unwrap(), 0.01 / 7.0, 1e-15);
        assert!(bonferroni(1.5, 7).is_err());
        assert!(bonferroni(0.05, 0).is_err());
    }

    #[test]
    fn intervals_nest_and_centre_on_the_estimate() {
        for (k0, k1) in [(40u64, 18u64), (146, 95), (147, 273), (121, 294)] {
            for continuity in [false, true] {
                let r = wald_diff_test(k0, 336, k1, 338, continuity, 0.05).unwrap();
                assert!(r.ci99.0 < r.ci95.0 && r.ci95.1 < r.ci99.1);
                close(0.5 * (r.ci95.0 + r.ci95.1), r.estimate, 1e-12);
                close(0.5 * (r.ci99.0 + r.ci99.1), r.estimate, 1e-12);
            }
        }
    }

    #[test]
    fn p_value_shift_from_continuity_is_bounded_on_every_swog_cell() {
        let panel = swog_dataset(SwogVariant::MainText);
        for t in 0..7 {
            for regime in Regime::ALL {
                let c = contrast(&panel, t, 0, regime);
                let off = wald_diff_test(c.k0, c.n0, c.k1, c.n1, false, 0.05).unwrap();
                let on = wald_diff_test(c.k0, c.n0, c.k1, c.n1, true, 0.05).unwrap();
                // The corrected statistic moves by at most cc/se, so the
                // p-value moves by at most the CDF mass over that window.
                let cc = 0.5 * (1.0 / 336.0 + 1.0 / 338.0);
                let max_shift = crate::normal::std_normal_cdf(off.z.abs())
                    - crate::normal::std_normal_cdf(off.z.abs() - cc / off.se);
                assert!(
                    (on.p_one_sided - off.p_one_sided).abs() <= max_shift + 1e-12,
                    "t={t} regime {regime:?}"
                );
            }
        }
    }

    #[test]
    fn analyze_swog_no_assumptions_matches_published_significance_pattern() {
        let panel = swog_dataset(SwogVariant::MainText);
        let table = analyze_timegrid(&panel, Regime::NoAssumptions, 0, 0.05, true).unwrap();
        let flags: Vec<bool> = table.rows.iter().map(|r| r.significant).collect();
        assert_eq!(flags, [true, true, true, true, false, false, false]);
        assert!(table.mono_death_consistent && table.mono_censor_consistent);
    }

    #[test]
    fn analyze_swog_mono_death_significant_through_six_months() {
        let panel = swog_dataset(SwogVariant::MainText);
        let table = analyze_timegrid(&panel, Regime::MonoDeath, 0, 0.05, true).unwrap();
        let flags: Vec<bool> = table.rows.iter().map(|r| r.significant).collect();
        assert_eq!(flags, [true, true, true, true, true, false, false]);
    }

    #[test]
    fn analyze_swog_mono_censor_significant_through_four_months() {
        let panel = swog_dataset(SwogVariant::MainText);
        let table = analyze_timegrid(&panel, Regime::MonoCensor, 0, 0.05, true).unwrap();
        let flags: Vec<bool> = table.rows.iter().map(|r| r.significant).collect();
        assert_eq!(flags, [true, true, true, true, false, false, false]);
    }

    #[test]
    fn student_t_variant_is_indistinguishable_at_trial_scale() {
        let normal = wald_diff_test(146, 336, 95, 338, true, 0.05).unwrap();
        let t = wald_diff_test_with(146, 336, 95, 338, true, 0.05, TestVariant::StudentT)
            .unwrap();
        close(normal.p_one_sided, t.p_one_sided, 1e-5);
        close(normal.ci95.0, t.ci95.0, 5e-4);
        close(normal.ci95.1, t.ci95.1, 5e-4);
    }

    #[test]
    fn renders_share_numbers_across_formats() {
        let panel = swog_dataset(SwogVariant::MainText);
        let table = analyze_timegrid(&panel, Regime::MonoBoth, 0, 0.05, true).unwrap();
        let md = table.to_markdown();
        let tsv = table.to_tsv();
        let json = table.to_json();
        assert!(md.contains("0.22"));
        assert!(tsv.contains("3 months"));
        let rows = json["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 7);
        close(rows[2]["test"]["estimate"].as_f64().unwrap(), 0.2215, 5e-5);
    }

    #[test]
    fn p_display_convention() {
        assert_eq!(format_p(0.00009), "<0.0001");
        assert_eq!(format_p(0.0018), "0.0018");
        assert_eq!(format_p(0.51), "0.5100");
        assert_eq!(format_2dp(-0.0003), "0.00");
    }
}
