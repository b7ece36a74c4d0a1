//! Real-valued outcomes with explicit missingness indicators.
//!
//! Instead of folding death and censoring into extra outcome levels, this
//! model keeps the outcome real-valued and tracks observation status
//! separately: survival `S ∈ {0,1}` and response indicators `RS`/`RY`
//! whose product `R = RS·RY` says whether the (Y, S) pair was recorded at
//! all. A dead individual's outcome is undefined (written `★`). The four
//! observable cell kinds are:
//!
//! - alive and fully observed, with its outcome value;
//! - dead and observed (`S=0, R=1`);
//! - everything missing (`R=0` through `RS=0`);
//! - survival observed alive but outcome missing (`RS=1, RY=0`) — still
//!   `R=0`, kept distinct only so data can mirror the `RS`/`RY`
//!   decomposition.
//!
//! All bound computations use the coarse `R` only, so the last two kinds
//! pool into the `R=0` margin.
//!
//! Outcome regions enter through [`OutcomeSet`] values `y_a` (treated
//! side) and `y_b` (control side). The plain, normalized and conditional
//! bounds witness individuals with `Y₁ ∈ y_a` and `Y₀ ∉ y_b` among
//! always survivors. The monotone bound targets the reverse direction —
//! individuals pushed *out of* `y_a` by treatment who would be in `y_b`
//! under control — matching the threshold analyses of the embedded
//! quality-of-life dataset, where the question is whether treatment costs
//! patients a quality score above the threshold.
//!
//! The two sensitivity results take the unidentified `R=0` cell masses
//! (and, for the two-timepoint version, the cross-world terms
//! `r(t_L,t_U)` and `P(S₁(t_U)≠1, S₀(t_L)=1)`) as explicit parameters.
//! With exact parameters the two-timepoint expression is an identity for
//! the principal-stratum contrast, not merely a bound.

use crate::outcome_set::OutcomeSet;
use serde::Serialize;
use thiserror::Error;

/// Observation status of one group of individuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GeneralizedStatus {
    /// Alive, fully observed, with the recorded outcome value.
    ObservedAlive(f64),
    /// Dead and observed: `S=0, R=1`; the outcome is undefined.
    Dead,
    /// Nothing recorded: `RS=0`, hence `R=0`.
    MissingAll,
    /// Alive with survival recorded but outcome missing: `RS=1, RY=0`,
    /// hence `R=0`.
    MissingOutcomeOnly,
}

impl GeneralizedStatus {
    fn is_missing(self) -> bool {
        matches!(self, GeneralizedStatus::MissingAll | GeneralizedStatus::MissingOutcomeOnly)
    }
}

/// A cell of the generalized panel: one status at one (arm, timepoint)
/// with a count of individuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralizedCell {
    pub status: GeneralizedStatus,
    pub arm: u8,
    pub t: usize,
    pub count: u64,
}

/// Per-arm, per-timepoint generalized observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedPanel {
    labels: Vec<String>,
    n0: u64,
    n1: u64,
    cells: Vec<GeneralizedCell>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneralizedError {
    #[error("arm code {0} must be 0 or 1")]
    BadArm(u8),
    #[error("time index {t} out of range ({len} timepoints)")]
    TimeOutOfRange { t: usize, len: usize },
    #[error("unknown timepoint `{requested}`; available: {available}")]
    UnknownTimepoint { requested: String, available: String },
    #[error("normalizing mass is not positive ({0}); the bound is undefined")]
    UndefinedBound(f64),
    #[error("sensitivity parameter {name} = {value} outside its admissible range")]
    BadParam { name: &'static str, value: f64 },
    #[error("no observed alive-and-recorded mass in the control arm; the normalized bound is undefined")]
    NoControlSurvivors,
    #[error("duplicate time label `{0}`")]
    DuplicateTimeLabel(String),
    #[error("empty time grid")]
    EmptyGrid,
}

/// A per-(arm, timepoint) cell-sum discrepancy, reported as a warning.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedRowMismatch {
    pub arm: u8,
    pub t: usize,
    pub expected: u64,
    pub actual: u64,
}

impl GeneralizedPanel {
    pub fn new(
        labels: Vec<String>,
        n0: u64,
        n1: u64,
        cells: Vec<GeneralizedCell>,
    ) -> Result<Self, GeneralizedError> {
        if labels.is_empty() {
            return Err(GeneralizedError::EmptyGrid);
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(GeneralizedError::DuplicateTimeLabel(l.clone()));
            }
        }
        for c in &cells {
            if c.arm > 1 {
                return Err(GeneralizedError::BadArm(c.arm));
            }
            if c.t >= labels.len() {
                return Err(GeneralizedError::TimeOutOfRange { t: c.t, len: labels.len() });
            }
        }
        Ok(GeneralizedPanel { labels, n0, n1, cells })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arm_size(&self, arm: u8) -> u64 {
        if arm == 0 {
            self.n0
        } else {
            self.n1
        }
    }

    pub fn cells(&self) -> &[GeneralizedCell] {
        &self.cells
    }

    /// Resolve a time label the same way the categorical panel does.
    pub fn resolve(&self, key: &str) -> Result<usize, GeneralizedError> {
        let key = key.trim();
        if let Some(i) = self.labels.iter().position(|l| l == key) {
            return Ok(i);
        }
        for suffix in ["month", "months", "week", "weeks"] {
            let candidate = format!("{key} {suffix}");
            if let Some(i) = self.labels.iter().position(|l| *l == candidate) {
                return Ok(i);
            }
        }
        Err(GeneralizedError::UnknownTimepoint {
            requested: key.to_string(),
            available: self.labels.join(", "),
        })
    }

    fn sum_where<F: Fn(&GeneralizedCell) -> bool>(&self, pred: F) -> u64 {
        self.cells.iter().filter(|c| pred(c)).map(|c| c.count).sum()
    }

    /// Count of alive, fully observed individuals with outcome in `set`.
    pub fn alive_observed_in_count(&self, arm: u8, t: usize, set: &OutcomeSet) -> u64 {
        self.sum_where(|c| {
            c.arm == arm
                && c.t == t
                && matches!(c.status, GeneralizedStatus::ObservedAlive(y) if set.contains(y))
        })
    }

    pub fn alive_observed_count(&self, arm: u8, t: usize) -> u64 {
        self.sum_where(|c| {
            c.arm == arm && c.t == t && matches!(c.status, GeneralizedStatus::ObservedAlive(_))
        })
    }

    pub fn dead_observed_count(&self, arm: u8, t: usize) -> u64 {
        self.sum_where(|c| c.arm == arm && c.t == t && matches!(c.status, GeneralizedStatus::Dead))
    }

    pub fn missing_count(&self, arm: u8, t: usize) -> u64 {
        self.sum_where(|c| c.arm == arm && c.t == t && c.status.is_missing())
    }

    /// `P(Y ∈ set, S=1, R=1 | X=arm)` at time `t`.
    pub fn p_alive_observed_in(&self, arm: u8, t: usize, set: &OutcomeSet) -> f64 {
        self.alive_observed_in_count(arm, t, set) as f64 / self.arm_size(arm) as f64
    }

    /// `P(S=1, R=1 | X=arm)` at time `t`.
    pub fn p_alive_observed(&self, arm: u8, t: usize) -> f64 {
        self.alive_observed_count(arm, t) as f64 / self.arm_size(arm) as f64
    }

    /// `P(S=0, R=1 | X=arm)` at time `t`.
    pub fn p_dead_observed(&self, arm: u8, t: usize) -> f64 {
        self.dead_observed_count(arm, t) as f64 / self.arm_size(arm) as f64
    }

    /// `P(R=0 | X=arm)` at time `t`.
    pub fn p_missing(&self, arm: u8, t: usize) -> f64 {
        self.missing_count(arm, t) as f64 / self.arm_size(arm) as f64
    }

    /// Cell sums that disagree with the arm sizes, as warnings.
    pub fn validate(&self) -> Vec<GeneralizedRowMismatch> {
        let mut out = Vec::new();
        for arm in [0u8, 1] {
            for t in 0..self.labels.len() {
                let actual = self.sum_where(|c| c.arm == arm && c.t == t);
                let expected = self.arm_size(arm);
                if actual != expected {
                    out.push(GeneralizedRowMismatch { arm, t, expected, actual });
                }
            }
        }
        out
    }

    /// Serialize to the binned `arm,time,status,y,count` CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("arm,time,status,y,count\n");
        let mut ordered = self.cells.clone();
        ordered.sort_by(|a, b| {
            (a.arm, a.t, status_rank(a.status))
                .partial_cmp(&(b.arm, b.t, status_rank(b.status)))
                .unwrap()
        });
        for c in &ordered {
            let (status, y) = match c.status {
                GeneralizedStatus::ObservedAlive(y) => ("alive", format!("{y}")),
                GeneralizedStatus::Dead => ("dead", String::new()),
                GeneralizedStatus::MissingAll => ("missing", String::new()),
                GeneralizedStatus::MissingOutcomeOnly => ("missing_outcome", String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.arm, self.labels[c.t], status, y, c.count
            ));
        }
        out
    }
}

fn status_rank(s: GeneralizedStatus) -> (u8, f64) {
    match s {
        GeneralizedStatus::ObservedAlive(y) => (0, y),
        GeneralizedStatus::Dead => (1, 0.0),
        GeneralizedStatus::MissingOutcomeOnly => (2, 0.0),
        GeneralizedStatus::MissingAll => (3, 0.0),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneralizedCsvError {
    #[error("missing header `arm,time,status,y` or `arm,time,status,y,count`")]
    MissingHeader,
    #[error("no data rows")]
    NoDataRows,
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("{0}")]
    Panel(GeneralizedError),
}

/// Parse individual-record (`arm,time,status,y`) or pre-binned
/// (`arm,time,status,y,count`) CSV. `y` must be present exactly for
/// `alive` rows. Arm sizes are the per-arm totals at the first timepoint
/// unless declared with `#n0=`/`#n1=` preamble rows.
pub fn load_generalized_csv(text: &str) -> Result<GeneralizedPanel, GeneralizedCsvError> {
    let mut n0: Option<u64> = None;
    let mut n1: Option<u64> = None;
    let mut binned: Option<bool> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut cells: Vec<GeneralizedCell> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("n0=") {
                n0 = v.trim().parse().ok();
            } else if let Some(v) = rest.strip_prefix("n1=") {
                n1 = v.trim().parse().ok();
            }
            continue;
        }
        if binned.is_none() {
            let normalized: Vec<String> =
                line.split(',').map(|f| f.trim().to_ascii_lowercase()).collect();
            binned = match normalized.len() {
                4 if normalized == ["arm", "time", "status", "y"] => Some(false),
                5 if normalized == ["arm", "time", "status", "y", "count"] => Some(true),
                _ => return Err(GeneralizedCsvError::MissingHeader),
            };
            continue;
        }
        let is_binned = binned.unwrap();
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        let expected = if is_binned { 5 } else { 4 };
        if fields.len() != expected {
            return Err(GeneralizedCsvError::Row {
                line: line_no,
                message: format!("expected {expected} fields, got {}", fields.len()),
            });
        }
        let arm: u8 = fields[0].parse().map_err(|_| GeneralizedCsvError::Row {
            line: line_no,
            message: format!("bad arm `{}`", fields[0]),
        })?;
        if arm > 1 {
            return Err(GeneralizedCsvError::Row {
                line: line_no,
                message: format!("arm must be 0 or 1, got {arm}"),
            });
        }
        let time = fields[1].to_string();
        let status_tok = fields[2].to_ascii_lowercase();
        let y_tok = fields[3];
        let count: u64 = if is_binned {
            fields[4].parse().map_err(|_| GeneralizedCsvError::Row {
                line: line_no,
                message: format!("bad count `{}`", fields[4]),
            })?
        } else {
            1
        };
        let status = match status_tok.as_str() {
            "alive" => {
                let y: f64 = y_tok.parse().map_err(|_| GeneralizedCsvError::Row {
                    line: line_no,
                    message: format!("alive rows need a numeric outcome, got `{y_tok}`"),
                })?;
                GeneralizedStatus::ObservedAlive(y)
            }
            "dead" | "missing" | "missing_outcome" => {
                if !y_tok.is_empty() {
                    return Err(GeneralizedCsvError::Row {
                        line: line_no,
                        message: format!("status `{status_tok}` must leave y empty, got `{y_tok}`"),
                    });
                }
                match status_tok.as_str() {
                    "dead" => GeneralizedStatus::Dead,
                    "missing" => GeneralizedStatus::MissingAll,
                    _ => GeneralizedStatus::MissingOutcomeOnly,
                }
            }
            other => {
                return Err(GeneralizedCsvError::Row {
                    line: line_no,
                    message: format!(
                        "unknown status `{other}` (expected alive, dead, missing, missing_outcome)"
                    ),
                })
            }
        };
        if !labels.contains(&time) {
            labels.push(time.clone());
        }
        let t = labels.iter().position(|l| *l == time).unwrap();
        cells.push(GeneralizedCell { status, arm, t, count });
    }

    if binned.is_none() {
        return Err(GeneralizedCsvError::MissingHeader);
    }
    if cells.is_empty() {
        return Err(GeneralizedCsvError::NoDataRows);
    }
    let sum_at = |arm: u8, t: usize| -> u64 {
        cells.iter().filter(|c| c.arm == arm && c.t == t).map(|c| c.count).sum()
    };
    let n0 = n0.unwrap_or_else(|| sum_at(0, 0));
    let n1 = n1.unwrap_or_else(|| sum_at(1, 0));
    GeneralizedPanel::new(labels, n0, n1, cells).map_err(GeneralizedCsvError::Panel)
}

/// Unidentified masses for the missing-data sensitivity analyses. Every
/// field is a probability mass the observed data cannot pin down; all
/// default to zero. Names read as the event they weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct MissingSensitivityParams {
    /// `P(Y ∈ y_a, S=1, R=0 | X=1)` at the analysis time.
    pub y_a_alive_unobserved_treated: f64,
    /// `P(Y ∉ y_b, S=1, R=0 | X=0)` at `t` (or `t_L`).
    pub not_y_b_alive_unobserved_control: f64,
    /// `P(Y ∉ y_a, S=1, R=0 | X=1)` at `t_U` (two-timepoint analysis).
    pub not_y_a_alive_unobserved_treated: f64,
    /// `P(S=1, R=0 | X=1)`: normalizer term.
    pub alive_unobserved_treated: f64,
    /// `P(S=1, R=0 | X=0)` at `t_L`: normalizer term.
    pub alive_unobserved_control: f64,
    /// `P(S=0, R=0 | X=0)`: normalizer term.
    pub dead_unobserved_control: f64,
    /// `r(t_L, t_U) = P(Y₁(t_U)=★, Y₀(t_L)∉y_b, S₁(t_U)=0, S₀(t_L)=1)
    ///  - P(Y₁(t_U)∉y_a, Y₀(t_L)=★, S₁(t_U)=1, S₀(t_L)=0)`.
    pub r_value: f64,
    /// `P(S₁(t_U) ≠ 1, S₀(t_L) = 1)`: normalizer term for the
    /// two-timepoint analysis.
    pub survivor_mismatch: f64,
}

impl MissingSensitivityParams {
    pub fn validate(&self) -> Result<(), GeneralizedError> {
        let props = [
            ("y_a_alive_unobserved_treated", self.y_a_alive_unobserved_treated),
            ("not_y_b_alive_unobserved_control", self.not_y_b_alive_unobserved_control),
            ("not_y_a_alive_unobserved_treated", self.not_y_a_alive_unobserved_treated),
            ("alive_unobserved_treated", self.alive_unobserved_treated),
            ("alive_unobserved_control", self.alive_unobserved_control),
            ("dead_unobserved_control", self.dead_unobserved_control),
            ("survivor_mismatch", self.survivor_mismatch),
        ];
        for (name, value) in props {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(GeneralizedError::BadParam { name, value });
            }
        }
        if !(-1.0..=1.0).contains(&self.r_value) || self.r_value.is_nan() {
            return Err(GeneralizedError::BadParam { name: "r_value", value: self.r_value });
        }
        Ok(())
    }
}

/// The observed quantities every bound formula consumes, however they
/// were produced — a panel's cell counts or the margins a counterfactual
/// distribution implies. Control-side fields are read at `t_L`,
/// treated-side at `t_U` (the same `t` in single-timepoint analyses).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    /// `P(Y ∈ y_a, S=1, R=1 | X=1)`.
    pub in_a_alive_observed_treated: f64,
    /// `P(Y ∈ y_b, S=1, R=1 | X=0)`.
    pub in_b_alive_observed_control: f64,
    /// `P(S=1, R=1 | X=1)`.
    pub alive_observed_treated: f64,
    /// `P(S=1, R=1 | X=0)`.
    pub alive_observed_control: f64,
    /// `P(S=0, R=1 | X=0)`.
    pub dead_observed_control: f64,
    /// `P(R=0 | X=1)`.
    pub missing_treated: f64,
    /// `P(R=0 | X=0)`.
    pub missing_control: f64,
}

impl BoundInputs {
    /// Read the margins from a panel, control side at `t_l` and treated
    /// side at `t_u`.
    pub fn from_panel_two_times(
        panel: &GeneralizedPanel,
        t_l: usize,
        t_u: usize,
        y_a: &OutcomeSet,
        y_b: &OutcomeSet,
    ) -> Self {
        BoundInputs {
            in_a_alive_observed_treated: panel.p_alive_observed_in(1, t_u, y_a),
            in_b_alive_observed_control: panel.p_alive_observed_in(0, t_l, y_b),
            alive_observed_treated: panel.p_alive_observed(1, t_u),
            alive_observed_control: panel.p_alive_observed(0, t_l),
            dead_observed_control: panel.p_dead_observed(0, t_l),
            missing_treated: panel.p_missing(1, t_u),
            missing_control: panel.p_missing(0, t_l),
        }
    }

    pub fn from_panel(
        panel: &GeneralizedPanel,
        t: usize,
        y_a: &OutcomeSet,
        y_b: &OutcomeSet,
    ) -> Self {
        Self::from_panel_two_times(panel, t, t, y_a, y_b)
    }
}

/// `P(Y∈y_a,S=1,R=1|X=1) + P(Y∉y_b,S=1,R=1|X=0) - 1` on explicit margins.
pub fn lb_plain_from(m: &BoundInputs) -> f64 {
    let control_not_in = m.alive_observed_control - m.in_b_alive_observed_control;
    m.in_a_alive_observed_treated + control_not_in - 1.0
}

/// [`lb_normalized`] on explicit margins.
pub fn lb_normalized_from(m: &BoundInputs) -> Result<f64, GeneralizedError> {
    let denom = m.alive_observed_treated - m.missing_control - m.dead_observed_control;
    if denom <= 0.0 {
        return Err(GeneralizedError::UndefinedBound(denom));
    }
    Ok(lb_plain_from(m) / denom)
}

/// `P(Y∈y_a,S=1,R=1|X=1) + P(Y∉y_b,S=1,R=1|X=0) - 1`: a lower bound on
/// the excess of always survivors with `Y₁∈y_a, Y₀∉y_b` over those with
/// `Y₁∉y_a, Y₀∈y_b` (whether observed or not).
pub fn lb_plain(panel: &GeneralizedPanel, t: usize, y_a: &OutcomeSet, y_b: &OutcomeSet) -> f64 {
    lb_plain_from(&BoundInputs::from_panel(panel, t, y_a, y_b))
}

/// [`lb_plain`] divided by
/// `P(S=1,R=1|X=1) - P(R=0|X=0) - P(S=0,R=1|X=0)`, a lower bound on the
/// same contrast conditioned on both potential states being alive and
/// observed.
pub fn lb_normalized(
    panel: &GeneralizedPanel,
    t: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
) -> Result<f64, GeneralizedError> {
    lb_normalized_from(&BoundInputs::from_panel(panel, t, y_a, y_b))
}

/// Outcome of the conditional-on-survivors bound: its precondition (a
/// strictly positive plain bound) may simply not hold, which is a
/// statement about the data rather than a numeric failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConditionalBound {
    Applicable { value: f64 },
    NotApplicable { lb_plain: f64 },
}

/// [`lb_conditional`] on explicit margins.
pub fn lb_conditional_from(m: &BoundInputs) -> Result<ConditionalBound, GeneralizedError> {
    let plain = lb_plain_from(m);
    if plain <= 0.0 {
        return Ok(ConditionalBound::NotApplicable { lb_plain: plain });
    }
    let denom = m.alive_observed_treated + m.missing_treated - m.dead_observed_control;
    if denom <= 0.0 {
        return Err(GeneralizedError::UndefinedBound(denom));
    }
    Ok(ConditionalBound::Applicable { value: plain / denom })
}

/// When [`lb_plain`] is positive, dividing by
/// `P(S=1,R=1|X=1) + P(R=0|X=1) - P(S=0,R=1|X=0)` lower-bounds the
/// contrast conditioned on being an always survivor.
pub fn lb_conditional(
    panel: &GeneralizedPanel,
    t: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
) -> Result<ConditionalBound, GeneralizedError> {
    lb_conditional_from(&BoundInputs::from_panel(panel, t, y_a, y_b))
}

/// The monotone-regime bound with the integer counts behind it, so a
/// Wald interval can be attached directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneBound {
    /// `P(Y∈y_b,S=1,R=1|X=0) - P(Y∈y_a,S=1,R=1|X=1)`.
    pub raw: f64,
    /// `raw / P(S=1,R=1|X=0)`.
    pub normalized: f64,
    pub k0: u64,
    pub n0: u64,
    pub k1: u64,
    pub n1: u64,
}

/// [`lb_monotone`] on explicit margins (no counts attached).
pub fn lb_monotone_from(m: &BoundInputs) -> Result<SensitivityBound, GeneralizedError> {
    let raw = m.in_b_alive_observed_control - m.in_a_alive_observed_treated;
    if m.alive_observed_control <= 0.0 {
        return Err(GeneralizedError::NoControlSurvivors);
    }
    Ok(SensitivityBound { raw, normalized: raw / m.alive_observed_control })
}

/// Under the monotonicity assumption that nobody loses the fully-observed
/// alive state by switching from control to treatment (no
/// `(S₁,R₁)≠(1,1)` with `(S₀,R₀)=(1,1)`), the raw value lower-bounds the
/// excess, among always-alive-and-observed individuals, of those with
/// `Y₁∉y_a, Y₀∈y_b` over those with `Y₁∈y_a, Y₀∉y_b` (minus the
/// mass of the latter kind whose control observation is missing). The
/// caller asserts the regime; it is not checkable from one dataset.
pub fn lb_monotone(
    panel: &GeneralizedPanel,
    t: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
) -> Result<MonotoneBound, GeneralizedError> {
    let k0 = panel.alive_observed_in_count(0, t, y_b);
    let k1 = panel.alive_observed_in_count(1, t, y_a);
    let n0 = panel.arm_size(0);
    let n1 = panel.arm_size(1);
    let bound = lb_monotone_from(&BoundInputs::from_panel(panel, t, y_a, y_b))?;
    Ok(MonotoneBound { raw: bound.raw, normalized: bound.normalized, k0, n0, k1, n1 })
}

/// Raw and normalized values of a sensitivity-adjusted bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityBound {
    pub raw: f64,
    pub normalized: f64,
}

/// [`lb_missing_sensitivity`] on explicit margins.
pub fn lb_missing_sensitivity_from(
    m: &BoundInputs,
    params: &MissingSensitivityParams,
) -> Result<SensitivityBound, GeneralizedError> {
    params.validate()?;
    let raw = lb_plain_from(m)
        + params.y_a_alive_unobserved_treated
        + params.not_y_b_alive_unobserved_control;
    let denom = m.alive_observed_treated + params.alive_unobserved_treated
        - m.dead_observed_control
        - params.dead_unobserved_control;
    if denom <= 0.0 {
        return Err(GeneralizedError::UndefinedBound(denom));
    }
    Ok(SensitivityBound { raw, normalized: raw / denom })
}

/// Missing-data sensitivity analysis: add the hypothesized `R=0` cell
/// masses to [`lb_plain`]. The raw value lower-bounds the all-`R`
/// always-survivor contrast; the normalized value divides by the
/// hypothesized `P(S=1|X=1) - P(S=0|X=0)` built from identified and
/// supplied terms.
pub fn lb_missing_sensitivity(
    panel: &GeneralizedPanel,
    t: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
    params: &MissingSensitivityParams,
) -> Result<SensitivityBound, GeneralizedError> {
    lb_missing_sensitivity_from(&BoundInputs::from_panel(panel, t, y_a, y_b), params)
}

/// Two-timepoint missing-data and monotonicity sensitivity analysis.
///
/// Control-arm terms are read at `t_l`, treatment-arm terms at `t_u`
/// (`t_l == t_u` is the single-time case). With exact parameters the raw
/// value *equals* the cross-time principal-stratum contrast
/// `P(Y₁(t_U)∈y_a, Y₀(t_L)∉y_b, S₁(t_U)=1, S₀(t_L)=1) -
///  P(Y₁(t_U)∉y_a, Y₀(t_L)∈y_b, S₁(t_U)=1, S₀(t_L)=1)`,
/// and the normalized value equals that contrast divided by
/// `P(S₁(t_U)=1, S₀(t_L)=1)`.
pub fn mono_sensitivity_two_times(
    panel: &GeneralizedPanel,
    t_l: usize,
    t_u: usize,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
    params: &MissingSensitivityParams,
) -> Result<SensitivityBound, GeneralizedError> {
    mono_sensitivity_two_times_from(
        &BoundInputs::from_panel_two_times(panel, t_l, t_u, y_a, y_b),
        params,
    )
}

/// [`mono_sensitivity_two_times`] on explicit margins (control side
/// already read at `t_L`, treated side at `t_U`).
pub fn mono_sensitivity_two_times_from(
    m: &BoundInputs,
    params: &MissingSensitivityParams,
) -> Result<SensitivityBound, GeneralizedError> {
    params.validate()?;
    let control_not_in_b_observed = m.alive_observed_control - m.in_b_alive_observed_control;
    let treated_not_in_a_observed = m.alive_observed_treated - m.in_a_alive_observed_treated;
    let raw = control_not_in_b_observed + params.not_y_b_alive_unobserved_control
        - treated_not_in_a_observed
        - params.not_y_a_alive_unobserved_treated
        - params.r_value;
    let denom =
        m.alive_observed_control + params.alive_unobserved_control - params.survivor_mismatch;
    if denom <= 0.0 {
        return Err(GeneralizedError::UndefinedBound(denom));
    }
    Ok(SensitivityBound { raw, normalized: raw / denom })
}

/// Expected-excess headcount in the display convention of the published
/// analyses: the estimate is first rounded to two decimals, then scaled
/// by the population and rounded to the nearest individual. Distinct from
/// [`crate::contrasts::headcount`], which floors the exact product
/// because its input is a guaranteed minimum.
pub fn expected_excess_headcount(estimate: f64, n_total: u64) -> i64 {
    let display = (estimate * 100.0).round() / 100.0;
    (display * n_total as f64).round() as i64
}

const QOL_LABEL: &str = "12 weeks";

/// The embedded quality-of-life dataset: scores at 12 weeks for the same
/// trial (338 treated, 336 control). Alive-and-observed patients are
/// binned by the two published thresholds; the representative values 80,
/// 73 and 60 stand for the bins (>75, (70,75], ≤70) so that membership in
/// `(70,inf)` and `(75,inf)` reproduces the published cell counts
/// exactly. The `R=0` column decomposes into outcome-only missingness
/// (RS=1, RY=0) and full missingness.
pub fn swog_qol_dataset() -> GeneralizedPanel {
    use GeneralizedStatus::*;
    let mk = |status, arm, count| GeneralizedCell { status, arm, t: 0, count };
    GeneralizedPanel::new(
        vec![QOL_LABEL.to_string()],
        336,
        338,
        vec![
            // treated: 63 above 75, 10 in (70,75], 136 at or below 70
            mk(ObservedAlive(80.0), 1, 63),
            mk(ObservedAlive(73.0), 1, 10),
            mk(ObservedAlive(60.0), 1, 136),
            mk(Dead, 1, 13),
            mk(MissingOutcomeOnly, 1, 23),
            mk(MissingAll, 1, 93),
            // control: 71 above 75, 18 in (70,75], 89 at or below 70
            mk(ObservedAlive(80.0), 0, 71),
            mk(ObservedAlive(73.0), 0, 18),
            mk(ObservedAlive(60.0), 0, 89),
            mk(Dead, 0, 11),
            mk(MissingOutcomeOnly, 0, 30),
            mk(MissingAll, 0, 117),
        ],
    )
    .expect("static data is valid")
}
