//! Weights written as a sum of at most three signed powers of two.
//!
//! Multiplying by such a weight needs only shifts and adds. Exponents are
//! limited to `-3..=2`, so every weight is a multiple of 1/8 and at most
//! `4 + 2 + 1 = 7`.

use std::fmt;

use num_rational::Ratio;

use super::WeightError;

pub const MIN_EXPONENT: i8 = -3;
pub const MAX_EXPONENT: i8 = 2;
pub const MAX_TERMS: usize = 3;
/// Weights are integer multiples of `1 / EIGHTHS`.
pub const EIGHTHS: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct P2Term {
    pub negative: bool,
    pub exponent: i8,
}

impl P2Term {
    pub const fn plus(exponent: i8) -> Self {
        P2Term {
            negative: false,
            exponent,
        }
    }

    pub const fn minus(exponent: i8) -> Self {
        P2Term {
            negative: true,
            exponent,
        }
    }

    fn eighths(self) -> i64 {
        let magnitude = 1i64 << (self.exponent - MIN_EXPONENT);
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Canonical shift-and-add weight: 1..=3 terms, distinct exponents sorted
/// descending, positive total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct P2Weight {
    terms: [P2Term; MAX_TERMS],
    len: u8,
}

impl P2Weight {
    pub fn new(terms: &[P2Term]) -> Result<Self, WeightError> {
        if terms.is_empty() || terms.len() > MAX_TERMS {
            return Err(WeightError::TermCount(terms.len()));
        }
        let mut sorted = terms.to_vec();
        sorted.sort_by(|a, b| b.exponent.cmp(&a.exponent));
        for t in &sorted {
            if !(MIN_EXPONENT..=MAX_EXPONENT).contains(&t.exponent) {
                return Err(WeightError::ExponentRange(t.exponent));
            }
        }
        if sorted.windows(2).any(|w| w[0].exponent == w[1].exponent) {
            return Err(WeightError::RepeatedExponent);
        }
        let mut out = P2Weight {
            terms: [P2Term::plus(0); MAX_TERMS],
            len: sorted.len() as u8,
        };
        out.terms[..sorted.len()].copy_from_slice(&sorted);
        if out.eighths() <= 0 {
            return Err(WeightError::NonPositive(format_ratio(out.value())));
        }
        Ok(out)
    }

    /// The unit weight `2^0`.
    pub fn one() -> Self {
        P2Weight::new(&[P2Term::plus(0)]).expect("2^0 is canonical")
    }

    pub fn terms(&self) -> &[P2Term] {
        &self.terms[..self.len as usize]
    }

    /// Value times 8.
    pub fn eighths(&self) -> i64 {
        self.terms().iter().map(|t| t.eighths()).sum()
    }

    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.eighths(), EIGHTHS)
    }

    pub fn is_unsigned(&self) -> bool {
        self.terms().iter().all(|t| !t.negative)
    }

    /// Multiplies `x_halves / 2` by the weight, returning sixteenths.
    ///
    /// Each term contributes `x_halves << (exponent + 3)`, so the product is
    /// exact and uses only shifts and adds.
    #[inline]
    pub fn apply(&self, x_halves: i32) -> i32 {
        let mut acc = 0i32;
        for t in self.terms() {
            let shifted = x_halves << (t.exponent - MIN_EXPONENT) as u32;
            if t.negative {
                acc -= shifted;
            } else {
                acc += shifted;
            }
        }
        acc
    }
}

impl fmt::Display for P2Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms().iter().enumerate() {
            match (i, t.negative) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            write!(f, "2^{}", t.exponent)?;
        }
        Ok(())
    }
}

/// Decomposes a positive multiple of 1/8 into at most three signed powers of two.
///
/// The plain binary expansion is used when it has at most three ones;
/// otherwise the shortest signed decomposition with the fewest negative
/// terms is returned.
pub fn p2_encode(value: Ratio<i64>) -> Result<P2Weight, WeightError> {
    let unrepresentable = || WeightError::Unrepresentable(format_ratio(value));
    if value <= Ratio::from_integer(0) {
        return Err(WeightError::NonPositive(format_ratio(value)));
    }
    let scaled = value * EIGHTHS;
    if !scaled.is_integer() {
        return Err(unrepresentable());
    }
    let k = scaled.to_integer();
    let top = 1i64 << (MAX_EXPONENT - MIN_EXPONENT + 1);
    if k >= top {
        return Err(unrepresentable());
    }
    if k.count_ones() as usize <= MAX_TERMS {
        let terms: Vec<P2Term> = (0..=(MAX_EXPONENT - MIN_EXPONENT))
            .rev()
            .filter(|bit| k & (1 << bit) != 0)
            .map(|bit| P2Term::plus(bit + MIN_EXPONENT))
            .collect();
        return P2Weight::new(&terms);
    }
    signed_search(k).ok_or_else(unrepresentable)
}

/// Every canonical term list with 1..=3 distinct exponents, in a fixed order.
pub fn all_decompositions() -> Vec<P2Weight> {
    let exps: Vec<i8> = (MIN_EXPONENT..=MAX_EXPONENT).rev().collect();
    let mut out = Vec::new();
    let mut push = |terms: &[P2Term]| {
        if let Ok(w) = P2Weight::new(terms) {
            out.push(w);
        }
    };
    let signs = [false, true];
    for (i, &a) in exps.iter().enumerate() {
        for &sa in &signs {
            let ta = P2Term { negative: sa, exponent: a };
            push(&[ta]);
            for (j, &b) in exps.iter().enumerate().skip(i + 1) {
                for &sb in &signs {
                    let tb = P2Term { negative: sb, exponent: b };
                    push(&[ta, tb]);
                    for &c in exps.iter().skip(j + 1) {
                        for &sc in &signs {
                            push(&[ta, tb, P2Term { negative: sc, exponent: c }]);
                        }
                    }
                }
            }
        }
    }
    out
}

fn signed_search(k: i64) -> Option<P2Weight> {
    all_decompositions()
        .into_iter()
        .filter(|w| w.eighths() == k)
        .min_by_key(|w| (w.terms().len(), w.terms().iter().filter(|t| t.negative).count()))
}

pub(crate) fn format_ratio(r: Ratio<i64>) -> String {
    super::schedule::format_decimal(r).unwrap_or_else(|| format!("{}/{}", r.numer(), r.denom()))
}
