//! Measurable subsets of the real line, as finite unions of disjoint
//! intervals.
//!
//! These play the role of the outcome regions `y_a` / `y_b` in the
//! real-valued analyses. Endpoints carry an open/closed flag each so that
//! thresholds on integer-valued scores are exact: `(70, inf)` is "strictly
//! above 70", `[70, inf)` is "at least 70". Membership is total on the
//! reals; the empty union is the empty set.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// One interval with independently open or closed endpoints. Unbounded
/// ends use `-inf` / `inf` (which are always treated as open).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub lo_open: bool,
    pub hi: f64,
    pub hi_open: bool,
}

impl Interval {
    pub fn new(lo: f64, lo_open: bool, hi: f64, hi_open: bool) -> Result<Self, OutcomeSetError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(OutcomeSetError::NanEndpoint);
        }
        let lo_open = lo_open || lo == f64::NEG_INFINITY;
        let hi_open = hi_open || hi == f64::INFINITY;
        if lo > hi || (lo == hi && (lo_open || hi_open)) {
            return Err(OutcomeSetError::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, lo_open, hi, hi_open })
    }

    pub fn contains(&self, y: f64) -> bool {
        let above = if self.lo_open { y > self.lo } else { y >= self.lo };
        let below = if self.hi_open { y < self.hi } else { y <= self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        let fmt_ep = |v: f64| {
            if v == f64::INFINITY {
                "inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v}")
            }
        };
        write!(f, "{}{},{}{}", open, fmt_ep(self.lo), fmt_ep(self.hi), close)
    }
}

/// A finite union of disjoint intervals, sorted by lower endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct OutcomeSet {
    intervals: Vec<Interval>,
}

#[derive(Debug, Error, PartialEq)]
pub enum OutcomeSetError {
    #[error("interval endpoint is NaN")]
    NanEndpoint,
    #[error("interval ({lo}, {hi}) is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("intervals overlap or touch out of order near {at}")]
    Overlap { at: f64 },
    #[error("cannot parse outcome set `{0}`; expected e.g. (70,inf), [0,1), or unions joined by `;`")]
    Parse(String),
}

impl OutcomeSet {
    /// The empty set.
    pub fn empty() -> Self {
        OutcomeSet { intervals: Vec::new() }
    }

    /// The whole real line.
    pub fn all() -> Self {
        OutcomeSet {
            intervals: vec![Interval {
                lo: f64::NEG_INFINITY,
                lo_open: true,
                hi: f64::INFINITY,
                hi_open: true,
            }],
        }
    }

    /// `(a, inf)`.
    pub fn greater_than(a: f64) -> Self {
        OutcomeSet {
            intervals: vec![Interval { lo: a, lo_open: true, hi: f64::INFINITY, hi_open: true }],
        }
    }

    /// `[a, inf)`.
    pub fn at_least(a: f64) -> Self {
        OutcomeSet {
            intervals: vec![Interval { lo: a, lo_open: false, hi: f64::INFINITY, hi_open: true }],
        }
    }

    /// `(-inf, a)`.
    pub fn less_than(a: f64) -> Self {
        OutcomeSet {
            intervals: vec![Interval { lo: f64::NEG_INFINITY, lo_open: true, hi: a, hi_open: true }],
        }
    }

    /// `(-inf, a]`.
    pub fn at_most(a: f64) -> Self {
        OutcomeSet {
            intervals: vec![Interval {
                lo: f64::NEG_INFINITY,
                lo_open: true,
                hi: a,
                hi_open: false,
            }],
        }
    }

    /// Build from intervals, sorting and rejecting overlaps.
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Result<Self, OutcomeSetError> {
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("no NaN endpoints"));
        for pair in intervals.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let disjoint = a.hi < b.lo || (a.hi == b.lo && (a.hi_open || b.lo_open));
            if !disjoint {
                return Err(OutcomeSetError::Overlap { at: b.lo });
            }
        }
        Ok(OutcomeSet { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty_set(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, y: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(y))
    }

    /// Parse expressions like `(70,inf)`, `(-inf,75]`, `[0,1)`, the words
    /// `empty` / `all`, or unions joined by `;`.
    pub fn parse(expr: &str) -> Result<Self, OutcomeSetError> {
        let expr = expr.trim();
        match expr.to_ascii_lowercase().as_str() {
            "empty" | "{}" => return Ok(OutcomeSet::empty()),
            "all" | "r" => return Ok(OutcomeSet::all()),
            _ => {}
        }
        let mut intervals = Vec::new();
        for part in expr.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            intervals.push(parse_interval(part)?);
        }
        if intervals.is_empty() {
            return Err(OutcomeSetError::Parse(expr.to_string()));
        }
        OutcomeSet::from_intervals(intervals)
    }
}

impl fmt::Display for OutcomeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.intervals.iter().map(|iv| iv.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn parse_interval(part: &str) -> Result<Interval, OutcomeSetError> {
    let bytes = part.as_bytes();
    if bytes.len() < 5 {
        return Err(OutcomeSetError::Parse(part.to_string()));
    }
    let lo_open = match bytes[0] {
        b'(' => true,
        b'[' => false,
        _ => return Err(OutcomeSetError::Parse(part.to_string())),
    };
    let hi_open = match bytes[bytes.len() - 1] {
        b')' => true,
        b']' => false,
        _ => return Err(OutcomeSetError::Parse(part.to_string())),
    };
    let inner = &part[1..part.len() - 1];
    let pieces: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
    if pieces.len() != 2 {
        return Err(OutcomeSetError::Parse(part.to_string()));
    }
    let lo = parse_endpoint(pieces[0]).ok_or_else(|| OutcomeSetError::Parse(part.to_string()))?;
    let hi = parse_endpoint(pieces[1]).ok_or_else(|| OutcomeSetError::Parse(part.to_string()))?;
    Interval::new(lo, lo_open, hi, hi_open)
}

fn parse_endpoint(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => tok.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_membership_is_exact_on_integers() {
        let above70 = OutcomeSet::greater_than(70.0);
        assert!(!above70.contains(70.0));
        assert!(above70.contains(71.0));
        let at_least = OutcomeSet::at_least(70.0);
        assert!(at_least.contains(70.0));
        let upto75 = OutcomeSet::at_most(75.0);
        assert!(upto75.contains(75.0));
        assert!(!upto75.contains(75.0001));
    }

    #[test]
    fn parse_round_trips_threshold_expressions() {
        assert_eq!(OutcomeSet::parse("(70,inf)").unwrap(), OutcomeSet::greater_than(70.0));
        assert_eq!(OutcomeSet::parse("(-inf,75]").unwrap(), OutcomeSet::at_most(75.0));
        let u = OutcomeSet::parse("[0,1); [5,inf)").unwrap();
        assert!(u.contains(0.0) && !u.contains(1.0) && u.contains(6.0) && !u.contains(3.0));
        assert_eq!(OutcomeSet::parse("all").unwrap(), OutcomeSet::all());
        assert!(OutcomeSet::parse("empty").unwrap().is_empty_set());
        assert!(OutcomeSet::parse("(1,0)").is_err());
        assert!(OutcomeSet::parse("(a,b)").is_err());
    }

    #[test]
    fn overlapping_unions_are_rejected_and_touching_closed_ends_too() {
        let a = Interval::new(0.0, false, 2.0, false).unwrap();
        let b = Interval::new(2.0, false, 3.0, true).unwrap();
        assert!(OutcomeSet::from_intervals(vec![a, b]).is_err());
        let c = Interval::new(2.0, true, 3.0, true).unwrap();
        assert!(OutcomeSet::from_intervals(vec![a, c]).is_ok());
    }

    #[test]
    fn empty_and_universal_sets() {
        assert!(!OutcomeSet::empty().contains(0.0));
        assert!(OutcomeSet::all().contains(f64::MAX));
        assert!(OutcomeSet::all().contains(-1e300));
    }

    #[test]
    fn display_is_parseable() {
        for expr in ["(70,inf)", "(-inf,75]", "[0,1)"] {
            let set = OutcomeSet::parse(expr).unwrap();
            let back = OutcomeSet::parse(&set.to_string()).unwrap();
            assert_eq!(set, back);
        }
    }
}
