//! Detection, bounding, and stress-testing of individual-level
//! "always survivor" causal effects in randomized trials where the outcome
//! can be truncated by death or lost to censoring.
//!
//! The library is organized around an observed-data model and a
//! counterfactual model that are kept deliberately separate:
//!
//! - [`panel`] holds per-arm, per-timepoint contingency counts over the
//!   joint categorical (outcome, survival) coding, including the embedded
//!   SWOG prostate-cancer trial dataset.
//! - [`contrasts`] computes the four observable contrasts (one per
//!   monotonicity regime), their non-negative lower bounds, headcount
//!   translations, and the falsification checks for the monotonicity
//!   assumptions themselves.
//! - [`inference`] provides one-sided two-proportion Wald tests with
//!   optional continuity correction, 95/99% confidence intervals, and
//!   Bonferroni control across the time grid.
//! - [`sensitivity`] adjusts each regime's contrast by a user-supplied
//!   violation mass and reports break-even values at which a conclusion
//!   is lost.
//! - [`generalized`] extends everything to real-valued outcomes with
//!   explicit missingness indicators, including the embedded
//!   quality-of-life dataset and its threshold analyses.
//! - [`oracle`] is a brute-force counterfactual engine over the sixteen
//!   response types (and their generalized form with missingness); it
//!   verifies every identity and bound the other modules rely on, and
//!   samples finite populations reproducibly.
//! - [`bayes`] places a conjugate Dirichlet posterior over the observed
//!   cell probabilities and pushes it through any contrast.
//! - [`report`] regenerates the published SWOG result tables and diffs
//!   them against the stored reference values.
//!
//! All types are immutable after construction and safe to share across
//! threads; all randomized computations are driven by an explicit
//! counter-based [`rng::SeededRng`] so results replay byte-identically.

pub mod bayes;
pub mod contrasts;
pub mod generalized;
pub mod inference;
pub mod normal;
pub mod oracle;
pub mod outcome_set;
pub mod panel;
pub mod report;
pub mod rng;
pub mod sensitivity;
pub mod student;

pub use contrasts::{contrast, headcount, ContrastResult, Regime};
pub use inference::{analyze_timegrid, bonferroni, wald_diff_test, AnalysisTable, TestResult};
pub use panel::{load_counts_csv, swog_dataset, Arm, ContingencyPanel, SwogVariant};
