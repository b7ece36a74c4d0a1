//! Brute-force counterfactual engine.
//!
//! A joint distribution over the sixteen possible response types
//! (Y₁, Y₀, S₁, S₀) determines, through randomization and consistency,
//! exactly what each arm would show. That makes every identification
//! claim in this crate an executable identity: compute the observable
//! contrast from the induced margins, compute the counterfactual
//! expression directly from the type probabilities, and compare. The
//! sixteen types, in their canonical order:
//!
//! | ω  | Y₁ Y₀ S₁ S₀ |   | ω  | Y₁ Y₀ S₁ S₀ |
//! |----|-------------|---|----|-------------|
//! | 1  | 1  1  1  1  |   | 9  | 2  2  0  0  |
//! | 2  | 0  1  1  1  |   | 10 | 3  3  2  2  |
//! | 3  | 1  0  1  1  |   | 11 | 3  1  2  1  |
//! | 4  | 0  0  1  1  |   | 12 | 3  0  2  1  |
//! | 5  | 2  1  0  1  |   | 13 | 3  2  2  0  |
//! | 6  | 2  0  0  1  |   | 14 | 1  3  1  2  |
//! | 7  | 1  2  1  0  |   | 15 | 0  3  1  2  |
//! | 8  | 0  2  1  0  |   | 16 | 2  3  0  2  |
//!
//! Death monotonicity forbids types 5–6; censoring monotonicity forbids
//! types 11–12.
//!
//! The generalized engine does the same over finite-support distributions
//! of (Y₁, Y₀, S₁, S₀, R₁, R₀) with real (or undefined) outcomes, and
//! both engines can sample finite randomized populations for end-to-end
//! consistency checks.

use crate::contrasts::Regime;
use crate::generalized::{
    lb_conditional_from, lb_missing_sensitivity_from, lb_monotone_from, lb_normalized_from,
    lb_plain_from, mono_sensitivity_two_times_from, BoundInputs, ConditionalBound,
    MissingSensitivityParams,
};
use crate::outcome_set::OutcomeSet;
use crate::panel::{Arm, ContingencyPanel, OutcomeCode, SurvivalCode, TimeGrid};
use crate::rng::SeededRng;
use crate::sensitivity::SensitivityKind;
use serde::Serialize;
use thiserror::Error;

/// The sixteen response types as (Y₁, Y₀, S₁, S₀) code quadruples,
/// indexed by ω − 1.
pub const RESPONSE_TYPES: [(u8, u8, u8, u8); 16] = [
    (1, 1, 1, 1),
    (0, 1, 1, 1),
    (1, 0, 1, 1),
    (0, 0, 1, 1),
    (2, 1, 0, 1),
    (2, 0, 0, 1),
    (1, 2, 1, 0),
    (0, 2, 1, 0),
    (2, 2, 0, 0),
    (3, 3, 2, 2),
    (3, 1, 2, 1),
    (3, 0, 2, 1),
    (3, 2, 2, 0),
    (1, 3, 1, 2),
    (0, 3, 1, 2),
    (2, 3, 0, 2),
];

/// Types excluded by death monotonicity (1-based ω).
pub const DEATH_MONO_EXCLUDED: [usize; 2] = [5, 6];
/// Types excluded by censoring monotonicity (1-based ω).
pub const CENSOR_MONO_EXCLUDED: [usize; 2] = [11, 12];

/// Probability tolerance for the executable identities: sums of at most
/// sixteen doubles cancel analytically, so anything beyond summation
/// noise is a real defect.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("probabilities must be non-negative; type {omega} has {value}")]
    NegativeProbability { omega: usize, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("regime {regime:?} requires zero mass on types {offending:?}")]
    RegimePrecondition { regime: Regime, offending: Vec<usize> },
    #[error("cannot constrain all sixteen types to zero")]
    AllTypesConstrained,
    #[error("type index {0} out of range 1..=16")]
    BadTypeIndex(usize),
    #[error("population size must be at least 1")]
    EmptyPopulation,
    #[error("treatment allocation probability must lie strictly inside (0,1)")]
    BadAllocation,
}

/// A full joint distribution over the sixteen response types.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualDistribution {
    probs: [f64; 16],
}

impl CounterfactualDistribution {
    pub fn new(probs: [f64; 16]) -> Result<Self, OracleError> {
        for (i, &p) in probs.iter().enumerate() {
            if p.is_nan() || p < 0.0 {
                return Err(OracleError::NegativeProbability { omega: i + 1, value: p });
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > IDENTITY_TOL {
            return Err(OracleError::NotNormalized(total));
        }
        Ok(CounterfactualDistribution { probs })
    }

    /// All mass on one type (1-based ω).
    pub fn point_mass(omega: usize) -> Result<Self, OracleError> {
        if !(1..=16).contains(&omega) {
            return Err(OracleError::BadTypeIndex(omega));
        }
        let mut probs = [0.0; 16];
        probs[omega - 1] = 1.0;
        Ok(CounterfactualDistribution { probs })
    }

    pub fn uniform() -> Self {
        CounterfactualDistribution { probs: [1.0 / 16.0; 16] }
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.probs
    }

    /// `P(Y₁=y₁, Y₀=y₀, S₁=s₁, S₀=s₀)`: zero unless the quadruple is one
    /// of the sixteen possible types.
    pub fn pc(&self, y1: u8, y0: u8, s1: u8, s0: u8) -> f64 {
        RESPONSE_TYPES
            .iter()
            .position(|&(a, b, c, d)| (a, b, c, d) == (y1, y0, s1, s0))
            .map_or(0.0, |i| self.probs[i])
    }

    /// 1-based type indices carrying positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..16).filter(|&i| self.probs[i] > 0.0).map(|i| i + 1).collect()
    }

    /// Serialize as a 16-line `type_index,probability` CSV in canonical
    /// type order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type_index,probability\n");
        for (i, p) in self.probs.iter().enumerate() {
            out.push_str(&format!("{},{:.17}\n", i + 1, p));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut probs = [f64::NAN; 16];
        let mut header = false;
        for line in text.lines() {
            let line = line.trim_end_matches('\r').trim();
            if line.is_empty() {
                continue;
            }
            if !header {
                if !line.eq_ignore_ascii_case("type_index,probability") {
                    return Err("missing `type_index,probability` header".into());
                }
                header = true;
                continue;
            }
            let (idx, p) =
                line.split_once(',').ok_or_else(|| format!("malformed row `{line}`"))?;
            let idx: usize = idx.trim().parse().map_err(|_| format!("bad type index `{idx}`"))?;
            if !(1..=16).contains(&idx) {
                return Err(format!("type index {idx} out of range"));
            }
            probs[idx - 1] = p.trim().parse().map_err(|_| format!("bad probability `{p}`"))?;
        }
        if probs.iter().any(|p| p.is_nan()) {
            return Err("missing rows: all sixteen types are required".into());
        }
        CounterfactualDistribution::new(probs).map_err(|e| e.to_string())
    }

    fn check_regime(&self, regime: Regime) -> Result<(), OracleError> {
        let mut required: Vec<usize> = Vec::new();
        match regime {
            Regime::NoAssumptions => {}
            Regime::MonoDeath => required.extend(DEATH_MONO_EXCLUDED),
            Regime::MonoCensor => required.extend(CENSOR_MONO_EXCLUDED),
            Regime::MonoBoth => {
                required.extend(DEATH_MONO_EXCLUDED);
                required.extend(CENSOR_MONO_EXCLUDED);
            }
        }
        let offending: Vec<usize> =
            required.into_iter().filter(|&omega| self.probs[omega - 1] > 0.0).collect();
        if offending.is_empty() {
            Ok(())
        } else {
            Err(OracleError::RegimePrecondition { regime, offending })
        }
    }
}

/// Exact observed-cell probabilities `P(Y=y, S=s | X=x)` implied by a
/// counterfactual distribution under randomization and consistency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedMargins {
    /// Indexed `[arm][y][s]`.
    cells: [[[f64; 3]; 4]; 2],
}

impl ObservedMargins {
    pub fn get(&self, arm: Arm, y: OutcomeCode, s: SurvivalCode) -> f64 {
        self.cells[arm.code() as usize][y.code() as usize][s.code() as usize]
    }

    fn get_codes(&self, arm: u8, y: u8, s: u8) -> f64 {
        self.cells[arm as usize][y as usize][s as usize]
    }
}

/// Push a counterfactual distribution through randomization and
/// consistency: the treated arm shows (Y₁, S₁), the control arm (Y₀, S₀).
pub fn observed_margins(cdist: &CounterfactualDistribution) -> ObservedMargins {
    let mut cells = [[[0.0; 3]; 4]; 2];
    for (i, &(y1, y0, s1, s0)) in RESPONSE_TYPES.iter().enumerate() {
        let p = cdist.probs[i];
        cells[1][y1 as usize][s1 as usize] += p;
        cells[0][y0 as usize][s0 as usize] += p;
    }
    ObservedMargins { cells }
}

/// The regime's observable contrast computed from exact margins: the same
/// union-difference formula `contrasts::contrast` applies to counts.
pub fn margin_contrast(margins: &ObservedMargins, y: u8, regime: Regime) -> f64 {
    assert!(y <= 1);
    let control = margins.get_codes(0, 1 - y, 1);
    let union: f64 = regime
        .union_cells(y)
        .iter()
        .map(|&(cy, cs)| margins.get_codes(1, cy.code(), cs.code()))
        .sum();
    control - union
}

/// One verified identity: an observable route and a counterfactual route
/// to the same number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

impl IdentityCheck {
    fn of(lhs: f64, rhs: f64) -> Self {
        IdentityCheck { lhs, rhs, abs_diff: (lhs - rhs).abs() }
    }

    pub fn holds(&self) -> bool {
        self.abs_diff <= IDENTITY_TOL
    }
}

/// Check that the regime's margin contrast equals its counterfactual
/// decomposition, type by type.
///
/// The right-hand sides, for direction `y` (writing `p(a,b,c,d)` for the
/// type probability):
///
/// - no assumptions: `p(y,1-y,1,1) - [p(1-y,y,1,1) + p(2,y,0,1) +
///   p(1-y,2,1,0) + p(2,2,0,0) + p(3,3,2,2) + p(3,y,2,1) + p(3,2,2,0) +
///   p(1-y,3,1,2) + p(2,3,0,2)]`;
/// - death monotonicity (types 5–6 empty): drop the `p(2,y,0,1)`,
///   `p(2,2,0,0)`, `p(2,3,0,2)` terms;
/// - censoring monotonicity (types 11–12 empty): drop `p(3,3,2,2)`,
///   `p(3,y,2,1)`, `p(3,2,2,0)`;
/// - both: `p(y,1-y,1,1) - [p(1-y,y,1,1) + p(1-y,2,1,0) + p(1-y,3,1,2)]`.
pub fn verify_proposition(
    cdist: &CounterfactualDistribution,
    regime: Regime,
    y: u8,
) -> Result<IdentityCheck, OracleError> {
    assert!(y <= 1);
    cdist.check_regime(regime)?;
    let margins = observed_margins(cdist);
    let lhs = margin_contrast(&margins, y, regime);
    let p = |a, b, c, d| cdist.pc(a, b, c, d);
    let ny = 1 - y;
    let forward = p(y, ny, 1, 1);
    let bracket = match regime {
        Regime::NoAssumptions => {
            p(ny, y, 1, 1)
                + p(2, y, 0, 1)
                + p(ny, 2, 1, 0)
                + p(2, 2, 0, 0)
                + p(3, 3, 2, 2)
                + p(3, y, 2, 1)
                + p(3, 2, 2, 0)
                + p(ny, 3, 1, 2)
                + p(2, 3, 0, 2)
        }
        Regime::MonoDeath => {
            p(ny, y, 1, 1)
                + p(ny, 2, 1, 0)
                + p(3, 3, 2, 2)
                + p(3, y, 2, 1)
                + p(3, 2, 2, 0)
                + p(ny, 3, 1, 2)
        }
        Regime::MonoCensor => {
            p(ny, y, 1, 1)
                + p(ny, 2, 1, 0)
                + p(2, y, 0, 1)
                + p(2, 2, 0, 0)
                + p(ny, 3, 1, 2)
                + p(2, 3, 0, 2)
        }
        Regime::MonoBoth => p(ny, y, 1, 1) + p(ny, 2, 1, 0) + p(ny, 3, 1, 2),
    };
    Ok(IdentityCheck::of(lhs, forward - bracket))
}

/// One verified bound: the observable contrast, its counterfactual
/// target, and the non-negative slack between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub contrast: f64,
    pub target: f64,
    pub slack: f64,
    /// `P(Y₁=y, Y₀=1-y, S₁=1, S₀=1)`, which `max(contrast, 0)` must not
    /// exceed.
    pub forward_mass: f64,
    pub holds: bool,
}

/// Check the regime's lower-bound claims. For the no-assumptions and
/// death-monotonicity regimes the target is the risk difference among
/// always survivors observed *or censored*:
/// `p(y,1-y,1,1) - [p(1-y,y,1,1) + p(3,3,2,2) + p(3,y,2,1) + p(1-y,3,1,2)]`;
/// the censoring and both regimes state only the bound on the observed
/// forward mass `p(y,1-y,1,1)` itself. In every regime
/// `max(contrast, 0) <= p(y,1-y,1,1)` must also hold.
pub fn verify_corollary_bounds(
    cdist: &CounterfactualDistribution,
    regime: Regime,
    y: u8,
) -> Result<BoundCheck, OracleError> {
    assert!(y <= 1);
    cdist.check_regime(regime)?;
    let margins = observed_margins(cdist);
    let contrast = margin_contrast(&margins, y, regime);
    let p = |a, b, c, d| cdist.pc(a, b, c, d);
    let ny = 1 - y;
    let forward_mass = p(y, ny, 1, 1);
    let target = match regime {
        Regime::NoAssumptions | Regime::MonoDeath => {
            forward_mass - (p(ny, y, 1, 1) + p(3, 3, 2, 2) + p(3, y, 2, 1) + p(ny, 3, 1, 2))
        }
        Regime::MonoCensor | Regime::MonoBoth => forward_mass,
    };
    let slack = target - contrast;
    let holds = slack >= -IDENTITY_TOL && contrast.max(0.0) <= forward_mass + IDENTITY_TOL;
    Ok(BoundCheck { contrast, target, slack, forward_mass, holds })
}

/// The three violation parameters computed from a counterfactual
/// distribution, per their defining expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrueSensitivityParams {
    pub dm: f64,
    pub am: f64,
    pub km: f64,
}

/// `d_m`, `a_m`, `k_m` read directly off the type probabilities.
pub fn true_sensitivity_params(
    cdist: &CounterfactualDistribution,
    y: u8,
) -> TrueSensitivityParams {
    assert!(y <= 1);
    let p = |a, b, c, d| cdist.pc(a, b, c, d);
    let ny = 1 - y;
    TrueSensitivityParams {
        dm: p(2, ny, 0, 1) - p(ny, 2, 1, 0) - p(3, 2, 2, 0),
        am: p(3, ny, 2, 1)
            - p(ny, 2, 1, 0)
            - p(ny, 3, 1, 2)
            - p(2, y, 0, 1)
            - p(2, 2, 0, 0)
            - p(2, 3, 0, 2),
        km: p(2, ny, 0, 1) + p(3, ny, 2, 1) - p(ny, 2, 1, 0) - p(ny, 3, 1, 2),
    }
}

/// Report of the three sensitivity identities for one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityIdentityReport {
    pub params: TrueSensitivityParams,
    pub dm_check: IdentityCheck,
    pub am_check: IdentityCheck,
    pub km_check: IdentityCheck,
}

impl SensitivityIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.dm_check.holds() && self.am_check.holds() && self.km_check.holds()
    }
}

/// Verify that subtracting the true violation parameter from each
/// regime's margin contrast recovers the exact counterfactual expression
/// (no monotonicity needed):
///
/// - death form minus `d_m` equals
///   `p(y,1-y,1,1) - [p(1-y,y,1,1) + p(3,3,2,2) + p(3,y,2,1) + p(1-y,3,1,2)]`;
/// - censoring form minus `a_m` and both-form minus `k_m` each equal
///   `p(y,1-y,1,1) - p(1-y,y,1,1)`.
pub fn verify_sensitivity_identities(
    cdist: &CounterfactualDistribution,
    y: u8,
) -> SensitivityIdentityReport {
    assert!(y <= 1);
    let margins = observed_margins(cdist);
    let params = true_sensitivity_params(cdist, y);
    let p = |a, b, c, d| cdist.pc(a, b, c, d);
    let ny = 1 - y;
    let dm_rhs =
        p(y, ny, 1, 1) - (p(ny, y, 1, 1) + p(3, 3, 2, 2) + p(3, y, 2, 1) + p(ny, 3, 1, 2));
    let direct_rhs = p(y, ny, 1, 1) - p(ny, y, 1, 1);
    let contrast = |kind: SensitivityKind| margin_contrast(&margins, y, kind.base_regime());
    SensitivityIdentityReport {
        params,
        dm_check: IdentityCheck::of(contrast(SensitivityKind::Dm) - params.dm, dm_rhs),
        am_check: IdentityCheck::of(contrast(SensitivityKind::Am) - params.am, direct_rhs),
        km_check: IdentityCheck::of(contrast(SensitivityKind::Km) - params.km, direct_rhs),
    }
}

/// Dirichlet(1) draw over the unconstrained types: independent standard
/// exponentials, normalized. Constrained (1-based) types get exactly zero.
pub fn random_cdist(
    rng: &mut SeededRng,
    constraints: &[usize],
) -> Result<CounterfactualDistribution, OracleError> {
    for &c in constraints {
        if !(1..=16).contains(&c) {
            return Err(OracleError::BadTypeIndex(c));
        }
    }
    let free: Vec<usize> = (1..=16).filter(|i| !constraints.contains(i)).collect();
    if free.is_empty() {
        return Err(OracleError::AllTypesConstrained);
    }
    let mut probs = [0.0; 16];
    let mut total = 0.0;
    for &i in &free {
        let e = rng.exponential();
        probs[i - 1] = e;
        total += e;
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    CounterfactualDistribution::new(probs)
}

/// Boundary-heavy generator: a Dirichlet(1) draw over a random subset of
/// the unconstrained types (at least one, at most `max_support`). Bounds
/// are tight at vertices, so sparse supports probe the hard cases.
pub fn random_cdist_sparse(
    rng: &mut SeededRng,
    constraints: &[usize],
    max_support: usize,
) -> Result<CounterfactualDistribution, OracleError> {
    let free: Vec<usize> = (1..=16).filter(|i| !constraints.contains(i)).collect();
    if free.is_empty() {
        return Err(OracleError::AllTypesConstrained);
    }
    let size = 1 + (rng.below(max_support.min(free.len()) as u64) as usize);
    let mut chosen = free;
    // Partial Fisher-Yates: the first `size` entries end up random.
    for i in 0..size {
        let j = i + rng.below((chosen.len() - i) as u64) as usize;
        chosen.swap(i, j);
    }
    chosen.truncate(size);
    let mut probs = [0.0; 16];
    let mut total = 0.0;
    for &i in &chosen {
        let e = rng.exponential();
        probs[i - 1] = e;
        total += e;
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    CounterfactualDistribution::new(probs)
}

/// Simulate a finite randomized population: each individual draws a
/// response type, is assigned an arm, and contributes their consistent
/// observed (Y, S) cell. The returned single-timepoint panel has the
/// realized arm sizes.
pub fn sample_population(
    cdist: &CounterfactualDistribution,
    n: u64,
    p_treat: f64,
    rng: &mut SeededRng,
) -> Result<ContingencyPanel, OracleError> {
    if n == 0 {
        return Err(OracleError::EmptyPopulation);
    }
    if !(p_treat > 0.0 && p_treat < 1.0) {
        return Err(OracleError::BadAllocation);
    }
    let mut cumulative = [0.0; 16];
    let mut acc = 0.0;
    for (slot, p) in cumulative.iter_mut().zip(cdist.probs.iter()) {
        acc += p;
        *slot = acc;
    }
    let mut counts = [[[0u64; 3]; 4]; 2];
    let (mut n0, mut n1) = (0u64, 0u64);
    for _ in 0..n {
        let u = rng.uniform();
        let mut ty = 15;
        for (i, &c) in cumulative.iter().enumerate() {
            if u < c {
                ty = i;
                break;
            }
        }
        let (y1, y0, s1, s0) = RESPONSE_TYPES[ty];
        if rng.bernoulli(p_treat) {
            n1 += 1;
            counts[1][y1 as usize][s1 as usize] += 1;
        } else {
            n0 += 1;
            counts[0][y0 as usize][s0 as usize] += 1;
        }
    }
    let grid = TimeGrid::new(vec!["t1".to_string()]).expect("one label");
    let mut entries = Vec::new();
    for (arm_idx, arm) in [(0usize, Arm::Control), (1, Arm::Treatment)] {
        for y in OutcomeCode::ALL {
            for s in SurvivalCode::ALL {
                let c = counts[arm_idx][y.code() as usize][s.code() as usize];
                if c > 0 {
                    entries.push((arm, 0, y, s, c));
                }
            }
        }
    }
    Ok(ContingencyPanel::from_counts(grid, n0, n1, &entries).expect("static grid"))
}

// ---------------------------------------------------------------------------
// Generalized engine: finite-support distributions with missingness.
// ---------------------------------------------------------------------------

/// A potential outcome value: real when alive, undefined when dead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PotentialOutcome {
    Real(f64),
    /// The undefined value of a dead individual's outcome.
    Star,
}

impl PotentialOutcome {
    pub fn is_in(&self, set: &OutcomeSet) -> bool {
        match self {
            PotentialOutcome::Real(y) => set.contains(*y),
            PotentialOutcome::Star => false,
        }
    }
}

/// One support point of a generalized counterfactual distribution. When a
/// two-timepoint analysis is in play, the treated-side coordinates are
/// read at `t_U` and the control-side at `t_L`; for single-timepoint
/// analyses both sides refer to the same `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenAtom {
    pub y1: PotentialOutcome,
    pub y0: PotentialOutcome,
    pub s1: bool,
    pub s0: bool,
    pub r1: bool,
    pub r0: bool,
    pub prob: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenOracleError {
    #[error("atom {index}: outcome must be Star exactly when dead")]
    StarMismatch { index: usize },
    #[error("atom {index} has negative probability {prob}")]
    NegativeProbability { index: usize, prob: f64 },
    #[error("atom probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("the monotone regime forbids atoms with (S₁,R₁)≠(1,1) and (S₀,R₀)=(1,1); atom {index} violates it")]
    MonotoneRegimeViolated { index: usize },
}

/// A finite-support joint distribution over (Y₁, Y₀, S₁, S₀, R₁, R₀).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedCfDistribution {
    atoms: Vec<GenAtom>,
}

impl GeneralizedCfDistribution {
    pub fn new(atoms: Vec<GenAtom>) -> Result<Self, GenOracleError> {
        let mut total = 0.0;
        for (index, a) in atoms.iter().enumerate() {
            let y1_ok = matches!(a.y1, PotentialOutcome::Star) == !a.s1;
            let y0_ok = matches!(a.y0, PotentialOutcome::Star) == !a.s0;
            if !y1_ok || !y0_ok {
                return Err(GenOracleError::StarMismatch { index });
            }
            if a.prob.is_nan() || a.prob < 0.0 {
                return Err(GenOracleError::NegativeProbability { index, prob: a.prob });
            }
            total += a.prob;
        }
        if (total - 1.0).abs() > IDENTITY_TOL {
            return Err(GenOracleError::NotNormalized(total));
        }
        Ok(GeneralizedCfDistribution { atoms })
    }

    pub fn atoms(&self) -> &[GenAtom] {
        &self.atoms
    }

    /// Total mass of atoms satisfying a predicate.
    pub fn mass<F: Fn(&GenAtom) -> bool>(&self, pred: F) -> f64 {
        self.atoms.iter().filter(|a| pred(a)).map(|a| a.prob).sum()
    }

    /// The observed margins each arm would show, as bound inputs.
    pub fn implied_margins(&self, y_a: &OutcomeSet, y_b: &OutcomeSet) -> BoundInputs {
        BoundInputs {
            in_a_alive_observed_treated: self.mass(|a| a.s1 && a.r1 && a.y1.is_in(y_a)),
            in_b_alive_observed_control: self.mass(|a| a.s0 && a.r0 && a.y0.is_in(y_b)),
            alive_observed_treated: self.mass(|a| a.s1 && a.r1),
            alive_observed_control: self.mass(|a| a.s0 && a.r0),
            dead_observed_control: self.mass(|a| !a.s0 && a.r0),
            missing_treated: self.mass(|a| !a.r1),
            missing_control: self.mass(|a| !a.r0),
        }
    }

    /// The exact values of every unidentified sensitivity parameter.
    pub fn exact_params(&self, y_a: &OutcomeSet, y_b: &OutcomeSet) -> MissingSensitivityParams {
        MissingSensitivityParams {
            y_a_alive_unobserved_treated: self.mass(|a| a.s1 && !a.r1 && a.y1.is_in(y_a)),
            not_y_b_alive_unobserved_control: self.mass(|a| a.s0 && !a.r0 && !a.y0.is_in(y_b)),
            not_y_a_alive_unobserved_treated: self.mass(|a| a.s1 && !a.r1 && !a.y1.is_in(y_a)),
            alive_unobserved_treated: self.mass(|a| a.s1 && !a.r1),
            alive_unobserved_control: self.mass(|a| a.s0 && !a.r0),
            dead_unobserved_control: self.mass(|a| !a.s0 && !a.r0),
            r_value: self.mass(|a| !a.s1 && a.s0 && !a.y0.is_in(y_b))
                - self.mass(|a| a.s1 && !a.s0 && !a.y1.is_in(y_a)),
            survivor_mismatch: self.mass(|a| !a.s1 && a.s0),
        }
    }

    fn check_monotone_regime(&self) -> Result<(), GenOracleError> {
        for (index, a) in self.atoms.iter().enumerate() {
            if a.prob > 0.0 && !(a.s1 && a.r1) && (a.s0 && a.r0) {
                return Err(GenOracleError::MonotoneRegimeViolated { index });
            }
        }
        Ok(())
    }
}

/// One direction check of a generalized bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenBoundCheck {
    pub bound: f64,
    pub target: f64,
    pub slack: f64,
    pub holds: bool,
}

impl GenBoundCheck {
    fn lower_bound(bound: f64, target: f64) -> Self {
        let slack = target - bound;
        GenBoundCheck { bound, target, slack, holds: slack >= -IDENTITY_TOL }
    }

    fn identity(bound: f64, target: f64) -> Self {
        let slack = target - bound;
        GenBoundCheck { bound, target, slack, holds: slack.abs() <= IDENTITY_TOL }
    }
}

/// Everything [`verify_generalized_bounds`] checked for one distribution.
/// Checks that do not apply (undefined denominators, inapplicable
/// preconditions, regime violations) are `None` and reported by name in
/// `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct GeneralizedBoundReport {
    pub plain: Option<GenBoundCheck>,
    pub plain_observed: Option<GenBoundCheck>,
    pub normalized: Option<GenBoundCheck>,
    pub conditional: Option<GenBoundCheck>,
    pub monotone_raw: Option<GenBoundCheck>,
    pub monotone_normalized: Option<GenBoundCheck>,
    pub missing_raw: Option<GenBoundCheck>,
    pub missing_normalized: Option<GenBoundCheck>,
    pub two_time_raw: Option<GenBoundCheck>,
    pub two_time_normalized: Option<GenBoundCheck>,
    pub skipped: Vec<String>,
}

impl GeneralizedBoundReport {
    pub fn all_hold(&self) -> bool {
        [
            &self.plain,
            &self.plain_observed,
            &self.normalized,
            &self.conditional,
            &self.monotone_raw,
            &self.monotone_normalized,
            &self.missing_raw,
            &self.missing_normalized,
            &self.two_time_raw,
            &self.two_time_normalized,
        ]
        .into_iter()
        .flatten()
        .all(|c| c.holds)
    }
}

/// Check every generalized bound and sensitivity identity against
/// brute-force sums over the distribution's support.
///
/// The monotone checks run only when the distribution satisfies the
/// monotone regime; sensitivity checks use the exact parameters computed
/// from the distribution itself. The two-timepoint expression must agree
/// exactly; the missing-data expression must hold as a bound (it is an
/// equality precisely when no atom mixes survival states — that defect
/// mass is what the bound gives away).
pub fn verify_generalized_bounds(
    gdist: &GeneralizedCfDistribution,
    y_a: &OutcomeSet,
    y_b: &OutcomeSet,
) -> GeneralizedBoundReport {
    let m = gdist.implied_margins(y_a, y_b);
    let mut report = GeneralizedBoundReport::default();

    let forward_observed =
        gdist.mass(|a| a.s1 && a.r1 && a.s0 && a.r0 && a.y1.is_in(y_a) && !a.y0.is_in(y_b));
    let reverse_observed =
        gdist.mass(|a| a.s1 && a.r1 && a.s0 && a.r0 && !a.y1.is_in(y_a) && a.y0.is_in(y_b));
    let reverse_any_r = gdist.mass(|a| a.s1 && a.s0 && !a.y1.is_in(y_a) && a.y0.is_in(y_b));
    let forward_joint = gdist.mass(|a| a.s1 && a.s0 && a.y1.is_in(y_a) && !a.y0.is_in(y_b));
    let target_observed = forward_observed - reverse_any_r;
    let target_joint = forward_joint - reverse_any_r;
    let both_alive = gdist.mass(|a| a.s1 && a.s0);
    let both_alive_observed = gdist.mass(|a| a.s1 && a.r1 && a.s0 && a.r0);

    let plain = lb_plain_from(&m);
    report.plain_observed = Some(GenBoundCheck::lower_bound(plain, target_observed));
    report.plain = Some(GenBoundCheck::lower_bound(plain, target_joint));

    // The normalized expression bounds the contrast conditional on being
    // alive and observed under both assignments: the reverse mass in that
    // target is restricted to fully observed pairs. (Counting unobserved
    // reverse pairs against it is refutable: mass can sit at Y₁∉y_a,
    // Y₀∈y_b with R₁=0, inflating the would-be target's denominator gap.)
    match lb_normalized_from(&m) {
        Ok(norm) if both_alive_observed > 0.0 => {
            report.normalized = Some(GenBoundCheck::lower_bound(
                norm,
                (forward_observed - reverse_observed) / both_alive_observed,
            ));
        }
        Ok(_) => report.skipped.push("normalized: empty observed always-survivor stratum".into()),
        Err(e) => report.skipped.push(format!("normalized: {e}")),
    }

    match lb_conditional_from(&m) {
        Ok(ConditionalBound::Applicable { value }) if both_alive > 0.0 => {
            report.conditional = Some(GenBoundCheck::lower_bound(value, target_joint / both_alive));
        }
        Ok(ConditionalBound::Applicable { .. }) => {
            report.skipped.push("conditional: empty always-survivor stratum".into())
        }
        Ok(ConditionalBound::NotApplicable { .. }) => {
            report.skipped.push("conditional: plain bound not positive".into())
        }
        Err(e) => report.skipped.push(format!("conditional: {e}")),
    }

    match gdist.check_monotone_regime() {
        Ok(()) => match lb_monotone_from(&m) {
            Ok(b) => {
                // Under the asserted regime the raw value lower-bounds the
                // reverse-direction observed contrast minus the
                // missing-control leak term.
                let forward_mono = gdist
                    .mass(|a| a.s1 && a.r1 && a.s0 && a.r0 && !a.y1.is_in(y_a) && a.y0.is_in(y_b));
                let reverse_mono = gdist
                    .mass(|a| a.s1 && a.r1 && a.s0 && a.r0 && a.y1.is_in(y_a) && !a.y0.is_in(y_b));
                let leak = gdist
                    .mass(|a| a.s1 && a.r1 && a.s0 && !a.r0 && a.y1.is_in(y_a) && !a.y0.is_in(y_b));
                let target = forward_mono - reverse_mono - leak;
                report.monotone_raw = Some(GenBoundCheck::lower_bound(b.raw, target));
                if both_alive_observed > 0.0 {
                    report.monotone_normalized = Some(GenBoundCheck::lower_bound(
                        b.normalized,
                        (forward_mono - reverse_mono) / both_alive_observed,
                    ));
                } else {
                    report
                        .skipped
                        .push("monotone normalized: empty observed always-survivor stratum".into());
                }
            }
            Err(e) => report.skipped.push(format!("monotone: {e}")),
        },
        Err(e) => report.skipped.push(format!("monotone: {e}")),
    }

    let exact = gdist.exact_params(y_a, y_b);
    match lb_missing_sensitivity_from(&m, &exact) {
        Ok(b) => {
            report.missing_raw = Some(GenBoundCheck::lower_bound(b.raw, target_joint));
            if b.raw >= 0.0 && both_alive > 0.0 {
                report.missing_normalized =
                    Some(GenBoundCheck::lower_bound(b.normalized, target_joint / both_alive));
            } else {
                report.skipped.push("missing normalized: raw bound negative".into());
            }
        }
        Err(e) => report.skipped.push(format!("missing: {e}")),
    }

    match mono_sensitivity_two_times_from(&m, &exact) {
        Ok(b) => {
            report.two_time_raw = Some(GenBoundCheck::identity(b.raw, target_joint));
            if both_alive > 0.0 {
                report.two_time_normalized =
                    Some(GenBoundCheck::identity(b.normalized, target_joint / both_alive));
            } else {
                report.skipped.push("two-time normalized: empty survivor stratum".into());
            }
        }
        Err(e) => report.skipped.push(format!("two-time: {e}")),
    }

    report
}

/// Constraints for the random generalized-distribution generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenConstraint {
    /// Unconstrained joint states.
    None,
    /// No atom with `(S₁,R₁) ≠ (1,1)` and `(S₀,R₀) = (1,1)`.
    Monotone,
    /// Everybody survives under both assignments (missingness still free);
    /// on such supports the missing-data bound is an exact identity.
    AllAlive,
}

/// Random finite-support generalized distribution: up to `max_support`
/// atoms with outcomes on the integer grid `0..y_levels`, Dirichlet(1)
/// weights.
pub fn random_generalized_cdist(
    rng: &mut SeededRng,
    max_support: usize,
    y_levels: u32,
    constraint: GenConstraint,
) -> GeneralizedCfDistribution {
    let size = 1 + rng.below(max_support as u64) as usize;
    let mut atoms = Vec::with_capacity(size);
    let mut total = 0.0;
    for _ in 0..size {
        let (s1, s0, r1, r0) = loop {
            let (s1, s0) = match constraint {
                GenConstraint::AllAlive => (true, true),
                _ => (rng.bernoulli(0.8), rng.bernoulli(0.8)),
            };
            let (r1, r0) = (rng.bernoulli(0.75), rng.bernoulli(0.75));
            if constraint == GenConstraint::Monotone && !(s1 && r1) && (s0 && r0) {
                continue;
            }
            break (s1, s0, r1, r0);
        };
        let draw_y = |rng: &mut SeededRng, alive: bool| {
            if alive {
                PotentialOutcome::Real(rng.below(y_levels as u64) as f64)
            } else {
                PotentialOutcome::Star
            }
        };
        let y1 = draw_y(rng, s1);
        let y0 = draw_y(rng, s0);
        let prob = rng.exponential();
        total += prob;
        atoms.push(GenAtom { y1, y0, s1, s0, r1, r0, prob });
    }
    for a in atoms.iter_mut() {
        a.prob /= total;
    }
    GeneralizedCfDistribution::new(atoms).expect("generator emits valid atoms")
}
