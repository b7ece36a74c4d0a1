//! Observed-data model: categorical codings of the (outcome, survival)
//! pair, per-arm per-timepoint contingency counts, structural validation,
//! CSV ingestion, and the embedded SWOG trial dataset.
//!
//! The outcome of a surviving individual is binary, but death and
//! censoring each get their own level so that one categorical variable
//! carries the full observed state:
//!
//! | code | outcome `Y`        | survival `S`      |
//! |------|--------------------|-------------------|
//! | 0    | outcome absent     | dead              |
//! | 1    | outcome present    | alive             |
//! | 2    | dead               | censored/missing  |
//! | 3    | censored/missing   |                   |
//!
//! Only four joint cells are logically possible: (0,1), (1,1), (2,0),
//! (3,2). Everything else is a structural zero and is reported as a hard
//! validation error. Counts are stored as exact integers; probabilities
//! are always computed as ratios on demand so no rounding is baked in.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Categorical outcome code: 0 absent, 1 present, 2 dead, 3 censored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OutcomeCode {
    Absent,
    Present,
    Dead,
    Censored,
}

impl OutcomeCode {
    pub const ALL: [OutcomeCode; 4] = [
        OutcomeCode::Absent,
        OutcomeCode::Present,
        OutcomeCode::Dead,
        OutcomeCode::Censored,
    ];

    pub fn code(self) -> u8 {
        match self {
            OutcomeCode::Absent => 0,
            OutcomeCode::Present => 1,
            OutcomeCode::Dead => 2,
            OutcomeCode::Censored => 3,
        }
    }

    pub fn from_code(code: u8) -> Result<Self, PanelError> {
        match code {
            0 => Ok(OutcomeCode::Absent),
            1 => Ok(OutcomeCode::Present),
            2 => Ok(OutcomeCode::Dead),
            3 => Ok(OutcomeCode::Censored),
            other => Err(PanelError::UnknownOutcomeCode(other)),
        }
    }

    /// The binary outcome `y` as an outcome code; panics unless `y` is 0 or 1.
    pub fn from_binary(y: u8) -> Self {
        match y {
            0 => OutcomeCode::Absent,
            1 => OutcomeCode::Present,
            _ => panic!("binary outcome direction must be 0 or 1, got {y}"),
        }
    }
}

/// Survival code: 0 dead, 1 alive, 2 censored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SurvivalCode {
    Dead,
    Alive,
    Censored,
}

impl SurvivalCode {
    pub const ALL: [SurvivalCode; 3] =
        [SurvivalCode::Dead, SurvivalCode::Alive, SurvivalCode::Censored];

    pub fn code(self) -> u8 {
        match self {
            SurvivalCode::Dead => 0,
            SurvivalCode::Alive => 1,
            SurvivalCode::Censored => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Self, PanelError> {
        match code {
            0 => Ok(SurvivalCode::Dead),
            1 => Ok(SurvivalCode::Alive),
            2 => Ok(SurvivalCode::Censored),
            other => Err(PanelError::UnknownSurvivalCode(other)),
        }
    }
}

/// Randomized treatment arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Arm {
    Control,
    Treatment,
}

impl Arm {
    pub const ALL: [Arm; 2] = [Arm::Control, Arm::Treatment];

    pub fn code(self) -> u8 {
        match self {
            Arm::Control => 0,
            Arm::Treatment => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Self, PanelError> {
        match code {
            0 => Ok(Arm::Control),
            1 => Ok(Arm::Treatment),
            other => Err(PanelError::UnknownArmCode(other)),
        }
    }
}

/// The four joint (outcome, survival) cells that are logically possible.
pub const ALLOWED_CELLS: [(OutcomeCode, SurvivalCode); 4] = [
    (OutcomeCode::Absent, SurvivalCode::Alive),
    (OutcomeCode::Present, SurvivalCode::Alive),
    (OutcomeCode::Dead, SurvivalCode::Dead),
    (OutcomeCode::Censored, SurvivalCode::Censored),
];

/// Whether a joint (outcome, survival) cell is logically possible.
pub fn cell_allowed(y: OutcomeCode, s: SurvivalCode) -> bool {
    structural_zero_condition(y, s).is_none()
}

/// Which of the four structural-zero conditions forbids the cell, if any.
pub fn structural_zero_condition(y: OutcomeCode, s: SurvivalCode) -> Option<&'static str> {
    let (y, s) = (y.code(), s.code());
    if s == 2 && y != 3 {
        Some("s=2 and y≠3")
    } else if y == 3 && s != 2 {
        Some("y=3 and s≠2")
    } else if s == 0 && y != 2 {
        Some("s=0 and y≠2")
    } else if y == 2 && s != 0 {
        Some("y=2 and s≠0")
    } else {
        None
    }
}

/// Ordered timepoint labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimeGrid {
    labels: Vec<String>,
}

impl TimeGrid {
    pub fn new(labels: Vec<String>) -> Result<Self, PanelError> {
        if labels.is_empty() {
            return Err(PanelError::EmptyTimeGrid);
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(PanelError::DuplicateTimeLabel(l.clone()));
            }
        }
        Ok(TimeGrid { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, t: usize) -> &str {
        &self.labels[t]
    }

    /// Resolve a user-supplied timepoint: an exact label match first, then
    /// the `"N month"`/`"N months"` shorthand for a bare number.
    pub fn resolve(&self, key: &str) -> Result<usize, PanelError> {
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
        Err(PanelError::UnknownTimepoint {
            requested: key.to_string(),
            available: self.labels.join(", "),
        })
    }
}

/// Per-arm, per-timepoint contingency counts over the joint (Y, S) cells.
///
/// Counts may occupy forbidden cells (e.g. when loaded from faulty data);
/// [`validate_panel`] reports them. Arm sizes of zero are representable so
/// that tiny sampled populations can be tabulated, but probability queries
/// on an empty arm fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyPanel {
    grid: TimeGrid,
    n0: u64,
    n1: u64,
    /// Flat row-major counts: `[arm][t][y][s]`.
    counts: Vec<u64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PanelError {
    #[error("unknown outcome code {0} (expected 0..=3)")]
    UnknownOutcomeCode(u8),
    #[error("unknown survival code {0} (expected 0..=2)")]
    UnknownSurvivalCode(u8),
    #[error("unknown arm code {0} (expected 0 or 1)")]
    UnknownArmCode(u8),
    #[error("time grid must have at least one timepoint")]
    EmptyTimeGrid,
    #[error("duplicate time label `{0}`")]
    DuplicateTimeLabel(String),
    #[error("unknown timepoint `{requested}`; available: {available}")]
    UnknownTimepoint { requested: String, available: String },
    #[error("time index {t} out of range (grid has {len} timepoints)")]
    TimeOutOfRange { t: usize, len: usize },
    #[error("arm {arm:?} has size zero; empirical proportions are undefined")]
    DegenerateArm { arm: Arm },
}

impl ContingencyPanel {
    /// Build a panel from explicit cell counts. Cells not mentioned are zero.
    pub fn from_counts(
        grid: TimeGrid,
        n0: u64,
        n1: u64,
        entries: &[(Arm, usize, OutcomeCode, SurvivalCode, u64)],
    ) -> Result<Self, PanelError> {
        let nt = grid.len();
        let mut counts = vec![0u64; 2 * nt * 4 * 3];
        for &(arm, t, y, s, c) in entries {
            if t >= nt {
                return Err(PanelError::TimeOutOfRange { t, len: nt });
            }
            counts[Self::index(nt, arm, t, y, s)] += c;
        }
        Ok(ContingencyPanel { grid, n0, n1, counts })
    }

    fn index(nt: usize, arm: Arm, t: usize, y: OutcomeCode, s: SurvivalCode) -> usize {
        ((arm.code() as usize * nt + t) * 4 + y.code() as usize) * 3 + s.code() as usize
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn arm_size(&self, arm: Arm) -> u64 {
        match arm {
            Arm::Control => self.n0,
            Arm::Treatment => self.n1,
        }
    }

    pub fn count(&self, arm: Arm, t: usize, y: OutcomeCode, s: SurvivalCode) -> u64 {
        self.counts[Self::index(self.grid.len(), arm, t, y, s)]
    }

    /// Sum of all cell counts (allowed or not) for one arm at one time.
    pub fn cell_sum(&self, arm: Arm, t: usize) -> u64 {
        let mut acc = 0;
        for y in OutcomeCode::ALL {
            for s in SurvivalCode::ALL {
                acc += self.count(arm, t, y, s);
            }
        }
        acc
    }

    /// Marginal count of a survival state at one time, summing outcomes.
    pub fn survival_count(&self, arm: Arm, t: usize, s: SurvivalCode) -> u64 {
        OutcomeCode::ALL.iter().map(|&y| self.count(arm, t, y, s)).sum()
    }

    /// Serialize to the `arm,time,y,s,count` CSV schema, with `#n0=`/`#n1=`
    /// preamble rows. All four allowed cells are written for every
    /// (arm, time); forbidden cells are written only if they hold counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#n0={}\n#n1={}\n", self.n0, self.n1));
        out.push_str("arm,time,y,s,count\n");
        for arm in Arm::ALL {
            for t in 0..self.grid.len() {
                for y in OutcomeCode::ALL {
                    for s in SurvivalCode::ALL {
                        let c = self.count(arm, t, y, s);
                        if cell_allowed(y, s) || c > 0 {
                            out.push_str(&format!(
                                "{},{},{},{},{}\n",
                                arm.code(),
                                self.grid.label(t),
                                y.code(),
                                s.code(),
                                c
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// JSON export mirroring the CSV schema.
    pub fn to_json(&self) -> serde_json::Value {
        let mut rows = Vec::new();
        for arm in Arm::ALL {
            for t in 0..self.grid.len() {
                for y in OutcomeCode::ALL {
                    for s in SurvivalCode::ALL {
                        let c = self.count(arm, t, y, s);
                        if cell_allowed(y, s) || c > 0 {
                            rows.push(serde_json::json!({
                                "arm": arm.code(),
                                "time": self.grid.label(t),
                                "y": y.code(),
                                "s": s.code(),
                                "count": c,
                            }));
                        }
                    }
                }
            }
        }
        serde_json::json!({
            "n0": self.n0,
            "n1": self.n1,
            "times": self.grid.labels(),
            "counts": rows,
        })
    }
}

/// One structural-zero violation found in a panel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralViolation {
    pub arm: Arm,
    pub t: usize,
    pub y: u8,
    pub s: u8,
    pub count: u64,
    pub condition: &'static str,
}

impl fmt::Display for StructuralViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "arm {} t={} cell (y={}, s={}) holds {} but is forbidden ({})",
            self.arm.code(),
            self.t,
            self.y,
            self.s,
            self.count,
            self.condition
        )
    }
}

/// One (arm, timepoint) whose cell counts do not add up to the arm size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowSumMismatch {
    pub arm: Arm,
    pub t: usize,
    pub expected: u64,
    pub actual: u64,
}

impl fmt::Display for RowSumMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "arm {} t={}: cell sum {} ≠ arm size {}",
            self.arm.code(),
            self.t,
            self.actual,
            self.expected
        )
    }
}

/// Outcome of [`validate_panel`]: hard errors (structural zeros violated)
/// and soft warnings (cell sums that disagree with the arm size).
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ValidationReport {
    pub errors: Vec<StructuralViolation>,
    pub warnings: Vec<RowSumMismatch>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }
}

/// Check every cell of the panel against the four structural-zero
/// conditions, and every (arm, timepoint) cell sum against the arm size.
/// Row-sum mismatches are warnings, not errors, so datasets with known
/// bookkeeping gaps stay loadable.
pub fn validate_panel(panel: &ContingencyPanel) -> ValidationReport {
    let mut report = ValidationReport::default();
    for arm in Arm::ALL {
        for t in 0..panel.grid().len() {
            for y in OutcomeCode::ALL {
                for s in SurvivalCode::ALL {
                    let c = panel.count(arm, t, y, s);
                    if c > 0 {
                        if let Some(condition) = structural_zero_condition(y, s) {
                            report.errors.push(StructuralViolation {
                                arm,
                                t,
                                y: y.code(),
                                s: s.code(),
                                count: c,
                                condition,
                            });
                        }
                    }
                }
            }
            let actual = panel.cell_sum(arm, t);
            let expected = panel.arm_size(arm);
            if actual != expected {
                report.warnings.push(RowSumMismatch { arm, t, expected, actual });
            }
        }
    }
    report
}

/// Empirical cell proportion `count(x,t,y,s) / n_x`.
///
/// Forbidden cells yield 0 for valid panels since they hold no counts.
pub fn empirical_prob(
    panel: &ContingencyPanel,
    y: OutcomeCode,
    s: SurvivalCode,
    x: Arm,
    t: usize,
) -> Result<f64, PanelError> {
    if t >= panel.grid().len() {
        return Err(PanelError::TimeOutOfRange { t, len: panel.grid().len() });
    }
    let n = panel.arm_size(x);
    if n == 0 {
        return Err(PanelError::DegenerateArm { arm: x });
    }
    Ok(panel.count(x, t, y, s) as f64 / n as f64)
}

#[derive(Debug, Error, PartialEq)]
pub enum CsvError {
    #[error("line {line}: expected 5 fields `arm,time,y,s,count`, got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: {source}")]
    BadCode {
        line: usize,
        #[source]
        source: PanelError,
    },
    #[error("line {line}: invalid integer `{value}` in column {column}")]
    BadInteger { line: usize, value: String, column: &'static str },
    #[error("line {line}: negative count {value}")]
    NegativeCount { line: usize, value: i64 },
    #[error("missing header row `arm,time,y,s,count`")]
    MissingHeader,
    #[error("no data rows")]
    NoDataRows,
    #[error("invalid preamble row `{0}` (expected #n0=<int> or #n1=<int>)")]
    BadPreamble(String),
    #[error("arm {arm} has inconsistent per-timepoint sums ({first} vs {second}); declare #n0/#n1 explicitly")]
    InconsistentArmSizes { arm: u8, first: u64, second: u64 },
    #[error("structural-zero violation in data: {0}")]
    Structural(String),
    #[error("{0}")]
    Panel(PanelError),
}

/// Parse the `arm,time,y,s,count` schema.
///
/// Optional preamble rows `#n0=<int>` / `#n1=<int>` declare the arm sizes;
/// without them each arm's size is inferred from its per-timepoint cell
/// sums, which must then be constant across timepoints. Timepoints are
/// ordered by first appearance. Duplicate cell rows accumulate. Rows that
/// land in a structurally forbidden cell fail the load.
pub fn load_counts_csv(text: &str) -> Result<ContingencyPanel, CsvError> {
    let mut n0: Option<u64> = None;
    let mut n1: Option<u64> = None;
    let mut header_seen = false;
    let mut time_order: Vec<String> = Vec::new();
    let mut rows: Vec<(Arm, String, OutcomeCode, SurvivalCode, u64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("n0=") {
                n0 = Some(v.trim().parse::<u64>().map_err(|_| CsvError::BadPreamble(line.into()))?);
            } else if let Some(v) = rest.strip_prefix("n1=") {
                n1 = Some(v.trim().parse::<u64>().map_err(|_| CsvError::BadPreamble(line.into()))?);
            } else {
                return Err(CsvError::BadPreamble(line.into()));
            }
            continue;
        }
        if !header_seen {
            let normalized: Vec<String> =
                line.split(',').map(|f| f.trim().to_ascii_lowercase()).collect();
            if normalized != ["arm", "time", "y", "s", "count"] {
                return Err(CsvError::MissingHeader);
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        if fields.len() != 5 {
            return Err(CsvError::FieldCount { line: line_no, got: fields.len() });
        }
        let arm_code: u8 = fields[0].parse().map_err(|_| CsvError::BadInteger {
            line: line_no,
            value: fields[0].into(),
            column: "arm",
        })?;
        let arm = Arm::from_code(arm_code).map_err(|source| CsvError::BadCode { line: line_no, source })?;
        let time = fields[1].to_string();
        let y_code: u8 = fields[2].parse().map_err(|_| CsvError::BadInteger {
            line: line_no,
            value: fields[2].into(),
            column: "y",
        })?;
        let y = OutcomeCode::from_code(y_code)
            .map_err(|source| CsvError::BadCode { line: line_no, source })?;
        let s_code: u8 = fields[3].parse().map_err(|_| CsvError::BadInteger {
            line: line_no,
            value: fields[3].into(),
            column: "s",
        })?;
        let s = SurvivalCode::from_code(s_code)
            .map_err(|source| CsvError::BadCode { line: line_no, source })?;
        let count_signed: i64 = fields[4].parse().map_err(|_| CsvError::BadInteger {
            line: line_no,
            value: fields[4].into(),
            column: "count",
        })?;
        if count_signed < 0 {
            return Err(CsvError::NegativeCount { line: line_no, value: count_signed });
        }
        if !time_order.contains(&time) {
            time_order.push(time.clone());
        }
        rows.push((arm, time, y, s, count_signed as u64));
    }

    if !header_seen {
        return Err(CsvError::MissingHeader);
    }
    if rows.is_empty() {
        return Err(CsvError::NoDataRows);
    }

    let grid = TimeGrid::new(time_order.clone()).map_err(CsvError::Panel)?;
    let entries: Vec<(Arm, usize, OutcomeCode, SurvivalCode, u64)> = rows
        .iter()
        .map(|(arm, time, y, s, c)| {
            let t = time_order.iter().position(|l| l == time).expect("time registered");
            (*arm, t, *y, *s, *c)
        })
        .collect();

    // Infer undeclared arm sizes from per-timepoint sums.
    let mut sums: BTreeMap<(u8, usize), u64> = BTreeMap::new();
    for &(arm, t, _, _, c) in &entries {
        *sums.entry((arm.code(), t)).or_insert(0) += c;
    }
    let mut inferred = [n0, n1];
    for arm in Arm::ALL {
        if inferred[arm.code() as usize].is_none() {
            let mut arm_sums =
                (0..grid.len()).map(|t| sums.get(&(arm.code(), t)).copied().unwrap_or(0));
            let first = arm_sums.next().unwrap_or(0);
            for s in arm_sums {
                if s != first {
                    return Err(CsvError::InconsistentArmSizes {
                        arm: arm.code(),
                        first,
                        second: s,
                    });
                }
            }
            inferred[arm.code() as usize] = Some(first);
        }
    }

    let panel = ContingencyPanel::from_counts(
        grid,
        inferred[0].unwrap(),
        inferred[1].unwrap(),
        &entries,
    )
    .map_err(CsvError::Panel)?;

    let report = validate_panel(&panel);
    if let Some(first) = report.errors.first() {
        return Err(CsvError::Structural(first.to_string()));
    }
    Ok(panel)
}

/// Which 18-month death count the embedded SWOG panel carries for the
/// treatment arm. The published record is internally inconsistent: the
/// main result tables reproduce under 139, while the archival appendix
/// tables list 166 (and only those column sums reach the full arm size).
/// Both are shipped; neither is guessed to be the intended truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SwogVariant {
    MainText,
    Appendix,
}

impl SwogVariant {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "main_text" | "main" | "maintext" => Some(SwogVariant::MainText),
            "appendix" => Some(SwogVariant::Appendix),
            _ => None,
        }
    }
}

const SWOG_LABELS: [&str; 7] = [
    "1 month",
    "2 months",
    "3 months",
    "4 months",
    "6 months",
    "12 months",
    "18 months",
];

// (Y=1,S=1): alive, outcome present (cancer progressed)
const SWOG_PROGRESSED_T: [u64; 7] = [6, 30, 72, 86, 116, 175, 144];
const SWOG_PROGRESSED_C: [u64; 7] = [40, 94, 146, 150, 164, 147, 121];
// (Y=0,S=1): alive, outcome absent
const SWOG_NOT_PROGRESSED_T: [u64; 7] = [320, 289, 243, 221, 172, 65, 17];
const SWOG_NOT_PROGRESSED_C: [u64; 7] = [278, 219, 160, 146, 109, 58, 14];
// (Y=2,S=0): dead (the treatment arm's 18-month count is the disputed one)
const SWOG_DEAD_T_MAIN: [u64; 7] = [3, 10, 14, 22, 41, 88, 139];
const SWOG_DEAD_T_APPENDIX: [u64; 7] = [3, 10, 14, 22, 41, 88, 166];
const SWOG_DEAD_C: [u64; 7] = [3, 8, 15, 25, 47, 114, 182];
// (Y=3,S=2): censored
const SWOG_CENSORED_T: [u64; 7] = [9, 9, 9, 9, 9, 10, 11];
const SWOG_CENSORED_C: [u64; 7] = [15, 15, 15, 15, 16, 17, 19];

/// The embedded SWOG prostate-cancer trial dataset: 338 treated
/// (docetaxel) and 336 control (mitoxantrone) patients, with cancer
/// progression as the outcome at 1, 2, 3, 4, 6, 12 and 18 months.
pub fn swog_dataset(variant: SwogVariant) -> ContingencyPanel {
    let dead_t = match variant {
        SwogVariant::MainText => &SWOG_DEAD_T_MAIN,
        SwogVariant::Appendix => &SWOG_DEAD_T_APPENDIX,
    };
    let grid = TimeGrid::new(SWOG_LABELS.iter().map(|s| s.to_string()).collect())
        .expect("static labels are unique");
    let mut entries = Vec::with_capacity(7 * 8);
    for t in 0..7 {
        entries.push((Arm::Treatment, t, OutcomeCode::Present, SurvivalCode::Alive, SWOG_PROGRESSED_T[t]));
        entries.push((Arm::Control, t, OutcomeCode::Present, SurvivalCode::Alive, SWOG_PROGRESSED_C[t]));
        entries.push((Arm::Treatment, t, OutcomeCode::Absent, SurvivalCode::Alive, SWOG_NOT_PROGRESSED_T[t]));
        entries.push((Arm::Control, t, OutcomeCode::Absent, SurvivalCode::Alive, SWOG_NOT_PROGRESSED_C[t]));
        entries.push((Arm::Treatment, t, OutcomeCode::Dead, SurvivalCode::Dead, dead_t[t]));
        entries.push((Arm::Control, t, OutcomeCode::Dead, SurvivalCode::Dead, SWOG_DEAD_C[t]));
        entries.push((Arm::Treatment, t, OutcomeCode::Censored, SurvivalCode::Censored, SWOG_CENSORED_T[t]));
        entries.push((Arm::Control, t, OutcomeCode::Censored, SurvivalCode::Censored, SWOG_CENSORED_C[t]));
    }
    ContingencyPanel::from_counts(grid, 336, 338, &entries).expect("static data is in range")
}

/// Total enrollment of the SWOG trial, used for headcount translations.
pub const SWOG_TOTAL_ENROLLED: u64 = 674;

#[cfg(test)]
mod tests {
    use super::*;

    fn one_cell_panel(y: OutcomeCode, s: SurvivalCode) -> ContingencyPanel {
        let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
        ContingencyPanel::from_counts(grid, 10, 10, &[(Arm::Treatment, 0, y, s, 3)]).unwrap()
    }

    #[test]
    fn forbidden_cell_reports_named_condition() {
        let panel = one_cell_panel(OutcomeCode::Present, SurvivalCode::Dead);
        let report = validate_panel(&panel);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].condition, "s=0 and y≠2");
    }

    #[test]
    fn eight_of_twelve_cells_are_forbidden() {
        let mut forbidden = 0;
        for y in OutcomeCode::ALL {
            for s in SurvivalCode::ALL {
                if !cell_allowed(y, s) {
                    forbidden += 1;
                }
            }
        }
        assert_eq!(forbidden, 8);
    }

    #[test]
    fn main_text_variant_warns_only_at_18_months_treated() {
        let panel = swog_dataset(SwogVariant::MainText);
        let report = validate_panel(&panel);
        assert!(report.errors.is_empty());
        assert_eq!(report.warnings.len(), 1);
        let w = &report.warnings[0];
        assert_eq!((w.arm, w.t, w.expected, w.actual), (Arm::Treatment, 6, 338, 311));
    }

    #[test]
    fn appendix_variant_is_clean() {
        let report = validate_panel(&swog_dataset(SwogVariant::Appendix));
        assert!(report.is_clean(), "unexpected findings: {report:?}");
    }

    #[test]
    fn empirical_probabilities_match_table_counts() {
        let panel = swog_dataset(SwogVariant::Appendix);
        let p = empirical_prob(&panel, OutcomeCode::Present, SurvivalCode::Alive, Arm::Control, 2)
            .unwrap();
        assert!((p - 146.0 / 336.0).abs() < 1e-15);
        assert!((p - 0.43452).abs() < 5e-6);
        let censored =
            empirical_prob(&panel, OutcomeCode::Censored, SurvivalCode::Censored, Arm::Treatment, 0)
                .unwrap();
        assert!((censored - 9.0 / 338.0).abs() < 1e-15);
    }

    #[test]
    fn forbidden_cells_have_zero_probability() {
        let panel = swog_dataset(SwogVariant::Appendix);
        for t in 0..7 {
            for arm in Arm::ALL {
                for y in OutcomeCode::ALL {
                    for s in SurvivalCode::ALL {
                        if !cell_allowed(y, s) {
                            assert_eq!(empirical_prob(&panel, y, s, arm, t).unwrap(), 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn empirical_prob_rejects_empty_arm() {
        let grid = TimeGrid::new(vec!["t1".into()]).unwrap();
        let panel = ContingencyPanel::from_counts(grid, 0, 5, &[]).unwrap();
        assert_eq!(
            empirical_prob(&panel, OutcomeCode::Absent, SurvivalCode::Alive, Arm::Control, 0),
            Err(PanelError::DegenerateArm { arm: Arm::Control })
        );
    }

    #[test]
    fn swog_variants_differ_only_in_disputed_cell() {
        let main = swog_dataset(SwogVariant::MainText);
        let app = swog_dataset(SwogVariant::Appendix);
        assert_eq!(main.count(Arm::Treatment, 6, OutcomeCode::Dead, SurvivalCode::Dead), 139);
        assert_eq!(app.count(Arm::Treatment, 6, OutcomeCode::Dead, SurvivalCode::Dead), 166);
        assert_eq!(
            main.count(Arm::Control, 4, OutcomeCode::Censored, SurvivalCode::Censored),
            16
        );
        assert_eq!(
            app.count(Arm::Control, 4, OutcomeCode::Censored, SurvivalCode::Censored),
            16
        );
        for arm in Arm::ALL {
            for t in 0..7 {
                for y in OutcomeCode::ALL {
                    for s in SurvivalCode::ALL {
                        if (arm, t, y) != (Arm::Treatment, 6, OutcomeCode::Dead) {
                            assert_eq!(main.count(arm, t, y, s), app.count(arm, t, y, s));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        for variant in [SwogVariant::MainText, SwogVariant::Appendix] {
            let panel = swog_dataset(variant);
            let loaded = load_counts_csv(&panel.to_csv()).unwrap();
            assert_eq!(panel, loaded);
        }
    }

    #[test]
    fn csv_rejects_empty_body() {
        assert_eq!(load_counts_csv("arm,time,y,s,count\n"), Err(CsvError::NoDataRows));
    }

    #[test]
    fn csv_rejects_forbidden_cell_rows() {
        let text = "#n0=5\n#n1=5\narm,time,y,s,count\n0,t1,2,1,3\n";
        match load_counts_csv(text) {
            Err(CsvError::Structural(msg)) => assert!(msg.contains("y=2, s=1"), "{msg}"),
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_negative_counts_and_bad_codes() {
        assert!(matches!(
            load_counts_csv("arm,time,y,s,count\n0,t1,1,1,-2\n"),
            Err(CsvError::NegativeCount { .. })
        ));
        assert!(matches!(
            load_counts_csv("arm,time,y,s,count\n0,t1,7,1,2\n"),
            Err(CsvError::BadCode { .. })
        ));
        assert!(matches!(
            load_counts_csv("arm,time,y,s,count\n0,t1,1,1\n"),
            Err(CsvError::FieldCount { .. })
        ));
    }

    #[test]
    fn csv_infers_constant_arm_sizes_and_rejects_inconsistent_ones() {
        let ok = "arm,time,y,s,count\n0,a,1,1,4\n0,b,0,1,4\n1,a,1,1,2\n1,b,1,1,2\n";
        let panel = load_counts_csv(ok).unwrap();
        assert_eq!(panel.arm_size(Arm::Control), 4);
        assert_eq!(panel.arm_size(Arm::Treatment), 2);

        let bad = "arm,time,y,s,count\n0,a,1,1,4\n0,b,0,1,5\n1,a,1,1,2\n1,b,1,1,2\n";
        assert!(matches!(load_counts_csv(bad), Err(CsvError::InconsistentArmSizes { .. })));
    }

    #[test]
    fn csv_accepts_crlf_and_blank_lines() {
        let text = "#n0=3\r\n#n1=3\r\narm,time,y,s,count\r\n\r\n0,t1,1,1,3\r\n1,t1,0,1,3\r\n";
        let panel = load_counts_csv(text).unwrap();
        assert_eq!(panel.count(Arm::Control, 0, OutcomeCode::Present, SurvivalCode::Alive), 3);
    }

    #[test]
    fn timepoint_resolution_accepts_label_and_month_shorthand() {
        let panel = swog_dataset(SwogVariant::Appendix);
        assert_eq!(panel.grid().resolve("3 months").unwrap(), 2);
        assert_eq!(panel.grid().resolve("6").unwrap(), 4);
        assert_eq!(panel.grid().resolve("1").unwrap(), 0);
        assert!(panel.grid().resolve("5").is_err());
    }
}
