//! Conjugate Dirichlet–Multinomial posterior over the observed cell
//! probabilities, pushed through any contrast.
//!
//! Each arm's four allowed cells get an independent Dirichlet prior;
//! observed counts update it in closed form, and posterior draws are
//! normalized independent Gamma(alpha + count, 1) variates. Applying a
//! regime's contrast to every draw gives the posterior distribution of
//! that contrast, summarized by central credible intervals and
//! `P(contrast > 0 | data)` — the Bayesian cousin of the one-sided test.
//!
//! Only identified cells carry a posterior. The unidentified sensitivity
//! masses remain user inputs everywhere in this crate; putting a prior on
//! them would manufacture information the design does not contain. The
//! construction here is the standard conjugate one, configurable through
//! `alpha` and reported in every output.
//!
//! Gamma sampling is squeeze-free Marsaglia–Tsang: for shape `a >= 1`,
//! with `d = a - 1/3`, `c = 1/(3 sqrt(d))`, propose `d(1+cx)^3` for
//! standard normal `x` and accept when
//! `ln u < x^2/2 + d - dv + d ln v`; shapes below 1 boost through
//! `Gamma(a+1) * U^(1/a)`. Draws are fully determined by the
//! [`SeededRng`] stream.

use crate::contrasts::Regime;
use crate::generalized::GeneralizedPanel;
use crate::outcome_set::OutcomeSet;
use crate::panel::{Arm, ContingencyPanel, ALLOWED_CELLS};
use crate::rng::SeededRng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BayesError {
    #[error("prior mass must be positive and finite, got {0}")]
    ImproperPrior(f64),
    #[error("need at least one posterior draw")]
    NoDraws,
    #[error("time index {t} out of range ({len} timepoints)")]
    TimeOutOfRange { t: usize, len: usize },
}

/// Per-arm Dirichlet prior over the four allowed observed cells, in the
/// canonical order `[(0,1), (1,1), (2,0), (3,2)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletPrior {
    pub alpha_control: [f64; 4],
    pub alpha_treatment: [f64; 4],
}

impl DirichletPrior {
    /// The same mass on every cell of both arms.
    pub fn uniform(alpha: f64) -> Result<Self, BayesError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(BayesError::ImproperPrior(alpha));
        }
        Ok(DirichletPrior { alpha_control: [alpha; 4], alpha_treatment: [alpha; 4] })
    }

    pub fn new(alpha_control: [f64; 4], alpha_treatment: [f64; 4]) -> Result<Self, BayesError> {
        for &a in alpha_control.iter().chain(alpha_treatment.iter()) {
            if !(a > 0.0 && a.is_finite()) {
                return Err(BayesError::ImproperPrior(a));
            }
        }
        Ok(DirichletPrior { alpha_control, alpha_treatment })
    }

    fn for_arm(&self, arm: Arm) -> &[f64; 4] {
        match arm {
            Arm::Control => &self.alpha_control,
            Arm::Treatment => &self.alpha_treatment,
        }
    }
}

/// Marsaglia–Tsang gamma variate with unit scale.
pub fn sample_gamma(rng: &mut SeededRng, shape: f64) -> f64 {
    assert!(shape > 0.0 && shape.is_finite(), "gamma shape must be positive");
    if shape < 1.0 {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a).
        let g = sample_gamma(rng, shape + 1.0);
        return g * rng.uniform_open().powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (3.0 * d.sqrt());
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform_open();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v;
        }
    }
}

/// Dirichlet draw: normalized independent gamma variates.
fn sample_dirichlet(rng: &mut SeededRng, alphas: &[f64]) -> Vec<f64> {
    let draws: Vec<f64> = alphas.iter().map(|&a| sample_gamma(rng, a)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|g| g / total).collect()
}

/// Posterior draws of the per-arm cell probability vectors at one
/// timepoint, in the canonical cell order. Arms are independent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorDraws {
    pub control: Vec<[f64; 4]>,
    pub treatment: Vec<[f64; 4]>,
    pub seed: u64,
    pub stream: u64,
}

pub fn posterior_draws(
    panel: &ContingencyPanel,
    t: usize,
    prior: &DirichletPrior,
    n_draws: usize,
    rng: &mut SeededRng,
) -> Result<PosteriorDraws, BayesError> {
    if n_draws == 0 {
        return Err(BayesError::NoDraws);
    }
    if t >= panel.grid().len() {
        return Err(BayesError::TimeOutOfRange { t, len: panel.grid().len() });
    }
    let posterior_alpha = |arm: Arm| -> [f64; 4] {
        let mut alphas = *prior.for_arm(arm);
        for (i, &(y, s)) in ALLOWED_CELLS.iter().enumerate() {
            alphas[i] += panel.count(arm, t, y, s) as f64;
        }
        alphas
    };
    let a0 = posterior_alpha(Arm::Control);
    let a1 = posterior_alpha(Arm::Treatment);
    let mut control = Vec::with_capacity(n_draws);
    let mut treatment = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let d0 = sample_dirichlet(rng, &a0);
        let d1 = sample_dirichlet(rng, &a1);
        control.push([d0[0], d0[1], d0[2], d0[3]]);
        treatment.push([d1[0], d1[1], d1[2], d1[3]]);
    }
    Ok(PosteriorDraws { control, treatment, seed: rng.seed(), stream: rng.stream() })
}

/// Summary of a scalar posterior sample: moments, central credible
/// intervals, and the posterior probability of a positive value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorSummary {
    pub mean: f64,
    pub median: f64,
    pub ci50: (f64, f64),
    pub ci95: (f64, f64),
    pub ci99: (f64, f64),
    pub prob_positive: f64,
    pub n_draws: usize,
    pub seed: u64,
    pub stream: u64,
}

/// Sorted-sample quantile with linear interpolation.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Summarize draws of a scalar quantity.
pub fn summarize(draws: &[f64], seed: u64, stream: u64) -> Result<PosteriorSummary, BayesError> {
    if draws.is_empty() {
        return Err(BayesError::NoDraws);
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let positives = sorted.iter().filter(|&&v| v > 0.0).count();
    Ok(PosteriorSummary {
        mean,
        median: quantile(&sorted, 0.5),
        ci50: (quantile(&sorted, 0.25), quantile(&sorted, 0.75)),
        ci95: (quantile(&sorted, 0.025), quantile(&sorted, 0.975)),
        ci99: (quantile(&sorted, 0.005), quantile(&sorted, 0.995)),
        prob_positive: positives as f64 / n as f64,
        n_draws: n,
        seed,
        stream,
    })
}

/// Posterior distribution of a regime's contrast at one timepoint.
///
/// Each posterior draw of the two cell-probability vectors is pushed
/// through the same union-difference formula the point estimate uses.
pub fn posterior_contrast(
    panel: &ContingencyPanel,
    t: usize,
    y: u8,
    regime: Regime,
    prior: &DirichletPrior,
    n_draws: usize,
    rng: &mut SeededRng,
) -> Result<PosteriorSummary, BayesError> {
    assert!(y <= 1, "direction must be 0 or 1");
    let draws = posterior_draws(panel, t, prior, n_draws, rng)?;
    let cell_index = |cy: crate::panel::OutcomeCode, cs: crate::panel::SurvivalCode| -> usize {
        ALLOWED_CELLS
            .iter()
            .position(|&(y0, s0)| (y0, s0) == (cy, cs))
            .expect("union cells are allowed cells")
    };
    let control_idx =
        cell_index(crate::panel::OutcomeCode::from_binary(1 - y), crate::panel::SurvivalCode::Alive);
    let union_idx: Vec<usize> =
        regime.union_cells(y).iter().map(|&(cy, cs)| cell_index(cy, cs)).collect();
    let deltas: Vec<f64> = draws
        .control
        .iter()
        .zip(draws.treatment.iter())
        .map(|(c, tr)| c[control_idx] - union_idx.iter().map(|&i| tr[i]).sum::<f64>())
        .collect();
    summarize(&deltas, draws.seed, draws.stream)
}

/// Posterior for the monotone-regime threshold contrast on a generalized
/// panel: each arm gets a Dirichlet over {in-set alive-observed,
/// out-of-set alive-observed, dead-observed, missing}; the contrast is
/// `p0[in y_b] - p1[in y_a]`. Missing-cell content stays a sensitivity
/// input: the posterior never allocates it to outcomes.
pub fn posterior_generalized_monotone(
    panel: &GeneralizedPanel,
    t: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
    alpha: f64,
    n_draws: usize,
    rng: &mut SeededRng,
) -> Result<PosteriorSummary, BayesError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(BayesError::ImproperPrior(alpha));
    }
    if n_draws == 0 {
        return Err(BayesError::NoDraws);
    }
    if t >= panel.labels().len() {
        return Err(BayesError::TimeOutOfRange { t, len: panel.labels().len() });
    }
    let cells = |arm: u8, set: &OutcomeSet| -> [f64; 4] {
        let in_set = panel.alive_observed_in_count(arm, t, set) as f64;
        let alive = panel.alive_observed_count(arm, t) as f64;
        [
            alpha + in_set,
            alpha + (alive - in_set),
            alpha + panel.dead_observed_count(arm, t) as f64,
            alpha + panel.missing_count(arm, t) as f64,
        ]
    };
    let a0 = cells(0, y_b);
    let a1 = cells(1, y_a);
    let mut deltas = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let d0 = sample_dirichlet(rng, &a0);
        let d1 = sample_dirichlet(rng, &a1);
        deltas.push(d0[0] - d1[0]);
    }
    summarize(&deltas, rng.seed(), rng.stream())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{swog_dataset, SwogVariant};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn sample_sd(draws: &[f64]) -> f64 {
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    }

    #[test]
    fn gamma_moments_match_theory() {
        let mut rng = SeededRng::new(5, 0);
        for shape in [0.4, 1.0, 2.5, 9.0] {
            let n = 40_000;
            let draws: Vec<f64> = (0..n).map(|_| sample_gamma(&mut rng, shape)).collect();
            let mean = draws.iter().sum::<f64>() / n as f64;
            let var = sample_sd(&draws).powi(2);
            close(mean, shape, 4.0 * (shape / n as f64).sqrt() + 0.02);
            close(var, shape, 10.0 * shape / (n as f64).sqrt() + 0.1);
        }
    }

    #[test]
    fn posterior_mean_matches_conjugate_closed_form() {
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng = SeededRng::new(42, 0);
        let n_draws = 20_000;
        let draws = posterior_draws(&panel, 2, &prior, n_draws, &mut rng).unwrap();
        // Control progressed-alive cell at 3 months: (146 + 1) / (336 + 4).
        let cell: Vec<f64> = draws.control.iter().map(|d| d[1]).collect();
        let expected = 147.0 / 340.0;
        let mc_se = sample_sd(&cell) / (n_draws as f64).sqrt();
        close(cell.iter().sum::<f64>() / n_draws as f64, expected, 3.0 * mc_se);
    }

    #[test]
    fn fixed_seed_replays_identically() {
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng1 = SeededRng::new(7, 3);
        let mut rng2 = SeededRng::new(7, 3);
        let a = posterior_draws(&panel, 0, &prior, 200, &mut rng1).unwrap();
        let b = posterior_draws(&panel, 0, &prior, 200, &mut rng2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn large_alpha_concentrates_at_prior_proportions() {
        // A huge prior mass on one cell swamps the data: the posterior
        // draw for that cell approaches its prior share.
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::new([1e8, 1.0, 1.0, 1.0], [1.0; 4]).unwrap();
        let mut rng = SeededRng::new(11, 0);
        let draws = posterior_draws(&panel, 0, &prior, 500, &mut rng).unwrap();
        for d in &draws.control {
            assert!(d[0] > 0.999, "cell prob {d:?}");
        }
    }

    #[test]
    fn three_month_contrast_is_almost_surely_positive() {
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng = SeededRng::new(42, 1);
        let summary = posterior_contrast(
            &panel,
            2,
            0,
            Regime::NoAssumptions,
            &prior,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(summary.prob_positive > 0.999, "prob_positive {}", summary.prob_positive);
        close(summary.mean, 0.153, 0.01);
    }

    #[test]
    fn six_month_contrast_is_a_coin_flip() {
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng = SeededRng::new(42, 2);
        let summary = posterior_contrast(
            &panel,
            4,
            0,
            Regime::NoAssumptions,
            &prior,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            (0.3..=0.7).contains(&summary.prob_positive),
            "prob_positive {}",
            summary.prob_positive
        );
    }

    #[test]
    fn credible_intervals_nest_and_probabilities_are_probabilities() {
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng = SeededRng::new(9, 0);
        for t in [0, 3, 6] {
            let s =
                posterior_contrast(&panel, t, 0, Regime::MonoBoth, &prior, 4000, &mut rng)
                    .unwrap();
            assert!(s.ci50.0 >= s.ci95.0 && s.ci50.1 <= s.ci95.1);
            assert!(s.ci95.0 >= s.ci99.0 && s.ci95.1 <= s.ci99.1);
            assert!((0.0..=1.0).contains(&s.prob_positive));
            assert!(s.ci50.0 <= s.median && s.median <= s.ci50.1);
        }
    }

    #[test]
    fn posterior_sd_shrinks_like_root_count() {
        // Scaling all counts by k shrinks the posterior SD like 1/sqrt(k).
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let sd_at_scale = |k: u64| -> f64 {
            use crate::panel::{Arm, ContingencyPanel, OutcomeCode, SurvivalCode, TimeGrid};
            let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
            let panel = ContingencyPanel::from_counts(
                grid,
                100 * k,
                100 * k,
                &[
                    (Arm::Control, 0, OutcomeCode::Present, SurvivalCode::Alive, 40 * k),
                    (Arm::Control, 0, OutcomeCode::Absent, SurvivalCode::Alive, 50 * k),
                    (Arm::Control, 0, OutcomeCode::Dead, SurvivalCode::Dead, 10 * k),
                    (Arm::Treatment, 0, OutcomeCode::Present, SurvivalCode::Alive, 25 * k),
                    (Arm::Treatment, 0, OutcomeCode::Absent, SurvivalCode::Alive, 65 * k),
                    (Arm::Treatment, 0, OutcomeCode::Dead, SurvivalCode::Dead, 10 * k),
                ],
            )
            .unwrap();
            let mut rng = SeededRng::new(31, k);
            let draws = posterior_draws(&panel, 0, &prior, 8000, &mut rng).unwrap();
            let deltas: Vec<f64> = draws
                .control
                .iter()
                .zip(draws.treatment.iter())
                .map(|(c, t)| c[1] - t[1])
                .collect();
            sample_sd(&deltas)
        };
        let sd1 = sd_at_scale(1);
        let sd4 = sd_at_scale(4);
        let sd16 = sd_at_scale(16);
        let r4 = sd4 / sd1;
        let r16 = sd16 / sd1;
        assert!((0.35..=0.65).contains(&r4), "sd ratio at 4x: {r4}");
        assert!((0.17..=0.33).contains(&r16), "sd ratio at 16x: {r16}");
    }

    #[test]
    fn qol_monotone_posterior_tracks_the_point_estimate() {
        let panel = crate::generalized::swog_qol_dataset();
        let mut rng = SeededRng::new(19, 0);
        let s = posterior_generalized_monotone(
            &panel,
            0,
            &OutcomeSet::greater_than(70.0),
            &OutcomeSet::greater_than(70.0),
            1.0,
            20_000,
            &mut rng,
        )
        .unwrap();
        close(s.mean, 0.0489, 0.01);
        assert!((0.8..1.0).contains(&s.prob_positive), "prob_positive {}", s.prob_positive);
    }

    #[test]
    fn improper_priors_and_empty_draws_are_rejected() {
        assert_eq!(DirichletPrior::uniform(0.0), Err(BayesError::ImproperPrior(0.0)));
        assert!(DirichletPrior::uniform(-1.0).is_err());
        let panel = swog_dataset(SwogVariant::MainText);
        let prior = DirichletPrior::uniform(1.0).unwrap();
        let mut rng = SeededRng::new(1, 0);
        assert_eq!(
            posterior_draws(&panel, 0, &prior, 0, &mut rng),
            Err(BayesError::NoDraws)
        );
        assert!(matches!(
            posterior_draws(&panel, 99, &prior, 10, &mut rng),
            Err(BayesError::TimeOutOfRange { .. })
        ));
    }
}
