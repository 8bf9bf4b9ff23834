//! Sign-magnitude values shared by the channel quantizer and the SP-MS decoder.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of `x`; zero (of either sign bit) maps to `Plus`.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Sign of a nonzero integer, or `tie` when `x == 0`.
    pub fn of_int_or(x: i32, tie: Sign) -> Sign {
        match x.signum() {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => tie,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    /// Hard decision: `Plus` is bit 0, `Minus` is bit 1.
    pub fn bit(self) -> u8 {
        self.is_negative() as u8
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A message from a finite sign-magnitude alphabet.
///
/// Magnitude zero keeps its sign: `+0` and `-0` are different symbols, so a
/// message always carries a hard decision and never degenerates to an
/// erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantizedMessage {
    pub sign: Sign,
    pub magnitude: u8,
}

impl QuantizedMessage {
    pub const fn new(sign: Sign, magnitude: u8) -> Self {
        QuantizedMessage { sign, magnitude }
    }

    /// Signed integer value; both zeros map to 0.
    pub fn value(self) -> i32 {
        self.sign.to_i32() * i32::from(self.magnitude)
    }
}

impl Neg for QuantizedMessage {
    type Output = QuantizedMessage;
    fn neg(self) -> QuantizedMessage {
        QuantizedMessage::new(-self.sign, self.magnitude)
    }
}

impl fmt::Display for QuantizedMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_negative() { '-' } else { '+' };
        write!(f, "{s}{}", self.magnitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_zero_is_distinct() {
        let p = QuantizedMessage::new(Sign::Plus, 0);
        let m = QuantizedMessage::new(Sign::Minus, 0);
        assert_ne!(p, m);
        assert_eq!(p.value(), m.value());
        assert_eq!(-p, m);
        assert_eq!(m.to_string(), "-0");
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
        assert_eq!(Sign::of(0.0), Sign::Plus);
        assert_eq!(Sign::of(-0.0), Sign::Plus);
        assert_eq!(Sign::of_int_or(0, Sign::Minus), Sign::Minus);
        assert_eq!(Sign::of_int_or(-3, Sign::Plus), Sign::Minus);
        assert_eq!(Sign::Minus.bit(), 1);
    }
}
