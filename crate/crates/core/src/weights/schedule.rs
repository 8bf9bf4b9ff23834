//! Iteration-dependent, degree-selective weight schedules.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::p2::{p2_encode, P2Weight};
use super::WeightError;

/// Message weights `w^(l)` for `l = 0..max_iters`, applied to the incoming
/// check messages of VNs whose degree is in `target_degrees`. All other VNs
/// use weight 1.
///
/// Values are exact rationals and may be invalid; [`WeightSchedule::validate`]
/// reports problems and [`WeightSchedule::compile`] turns a usable schedule
/// into shift-and-add form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSchedule {
    pub q: u8,
    pub target_degrees: BTreeSet<usize>,
    pub values: Vec<Ratio<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    UnsupportedQ(u8),
    NonPositive { iteration: usize, value: Ratio<i64> },
    NonMonotone { iteration: usize, previous: Ratio<i64>, value: Ratio<i64> },
    Unrepresentable { iteration: usize, value: Ratio<i64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = |r: &Ratio<i64>| super::p2::format_ratio(*r);
        match self {
            Violation::Empty => write!(f, "schedule has no iterations"),
            Violation::UnsupportedQ(q) => write!(f, "q = {q} is not one of 2, 3, 4"),
            Violation::NonPositive { iteration, value } => {
                write!(f, "iteration {iteration}: weight {} is not positive", d(value))
            }
            Violation::NonMonotone {
                iteration,
                previous,
                value,
            } => write!(
                f,
                "iteration {iteration}: weight {} is below the previous weight {}",
                d(value),
                d(previous)
            ),
            Violation::Unrepresentable { iteration, value } => write!(
                f,
                "iteration {iteration}: weight {} is not a sum of at most three powers of two in 2^-3..2^2",
                d(value)
            ),
        }
    }
}

impl WeightSchedule {
    pub fn new(q: u8, target_degrees: BTreeSet<usize>, values: Vec<Ratio<i64>>) -> Self {
        WeightSchedule {
            q,
            target_degrees,
            values,
        }
    }

    /// Weight 1 for every iteration.
    pub fn unit(q: u8, target_degrees: BTreeSet<usize>, max_iters: usize) -> Self {
        Self::new(q, target_degrees, vec![Ratio::from_integer(1); max_iters])
    }

    pub fn max_iters(&self) -> usize {
        self.values.len()
    }

    /// Checks positivity, monotonicity and shift-add representability.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.values.is_empty() {
            out.push(Violation::Empty);
        }
        if !(2..=4).contains(&self.q) {
            out.push(Violation::UnsupportedQ(self.q));
        }
        for (iteration, &value) in self.values.iter().enumerate() {
            if value <= Ratio::from_integer(0) {
                out.push(Violation::NonPositive { iteration, value });
                continue;
            }
            if iteration > 0 && value < self.values[iteration - 1] {
                out.push(Violation::NonMonotone {
                    iteration,
                    previous: self.values[iteration - 1],
                    value,
                });
            }
            if p2_encode(value).is_err() {
                out.push(Violation::Unrepresentable { iteration, value });
            }
        }
        out
    }

    /// Converts every weight to shift-and-add form.
    ///
    /// Monotonicity is not required here; it is a constraint on the search,
    /// not on what the decoder can execute.
    pub fn compile(&self) -> Result<CompiledSchedule, WeightError> {
        let per_iteration = self
            .values
            .iter()
            .map(|&v| p2_encode(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CompiledSchedule {
            target_degrees: self.target_degrees.clone(),
            per_iteration,
        })
    }

    pub fn to_json(&self) -> String {
        let file = ScheduleFile {
            q: self.q,
            target_degrees: self.target_degrees.iter().copied().collect(),
            weights: self
                .values
                .iter()
                .map(|&v| super::p2::format_ratio(v))
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, WeightError> {
        let file: ScheduleFile =
            serde_json::from_str(text).map_err(|e| WeightError::Json(e.to_string()))?;
        let values = file
            .weights
            .iter()
            .map(|s| parse_decimal(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightSchedule {
            q: file.q,
            target_degrees: file.target_degrees.into_iter().collect(),
            values,
        })
    }
}

/// On-disk schedule: weights are exact decimal strings.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    q: u8,
    target_degrees: Vec<usize>,
    weights: Vec<String>,
}

/// A schedule in the form the decoder executes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledSchedule {
    pub target_degrees: BTreeSet<usize>,
    pub per_iteration: Vec<P2Weight>,
}

impl CompiledSchedule {
    pub fn max_iters(&self) -> usize {
        self.per_iteration.len()
    }

    /// Weight for a VN of degree `degree` at iteration `iteration`; `None`
    /// means the VN is not weighted.
    pub fn lookup(&self, degree: usize, iteration: usize) -> Option<&P2Weight> {
        if self.target_degrees.contains(&degree) {
            self.per_iteration.get(iteration)
        } else {
            None
        }
    }
}

const TABLE1_Q2: [&str; 12] = [
    "1.0", "1.0", "1.0", "1.0", "1.5", "1.75", "1.75", "1.75", "1.75", "2.5", "3.0", "3.0",
];
const TABLE1_Q3: [&str; 12] = [
    "1.0", "1.0", "1.0", "1.0", "1.25", "1.25", "1.25", "1.25", "1.5", "1.5", "1.5", "1.5",
];

/// The published degree-3 schedules for the 802.3ca EPON code, 12 iterations.
pub fn load_table1(q: u8) -> Result<WeightSchedule, WeightError> {
    let raw = match q {
        2 => &TABLE1_Q2,
        3 => &TABLE1_Q3,
        _ => return Err(WeightError::NoPublishedSchedule(q)),
    };
    let values = raw
        .iter()
        .map(|s| parse_decimal(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightSchedule::new(q, BTreeSet::from([3]), values))
}

/// Parses a plain decimal string (`"1.75"`, `"-2"`, `"0.125"`) exactly.
pub fn parse_decimal(text: &str) -> Result<Ratio<i64>, WeightError> {
    let bad = || WeightError::Decimal(text.to_string());
    let s = text.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if int_part.len() > 9 || frac_part.len() > 9 {
        return Err(bad());
    }
    let int: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
    let frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    let denom = 10i64.pow(frac_part.len() as u32);
    let value = Ratio::new(int * denom + frac, denom);
    Ok(if negative { -value } else { value })
}

/// Exact decimal rendering with at least one fractional digit, or `None`
/// when the expansion does not terminate within 18 digits.
pub fn format_decimal(value: Ratio<i64>) -> Option<String> {
    let (numer, denom) = (*value.numer(), *value.denom());
    let sign = if numer < 0 { "-" } else { "" };
    let numer = numer.unsigned_abs() as u128;
    let denom = denom as u128;
    let int = numer / denom;
    let mut rem = numer % denom;
    let mut digits = String::new();
    while rem != 0 {
        if digits.len() == 18 {
            return None;
        }
        rem *= 10;
        digits.push(char::from(b'0' + (rem / denom) as u8));
        rem %= denom;
    }
    if digits.is_empty() {
        digits.push('0');
    }
    Some(format!("{sign}{int}.{digits}"))
}
