//! Scalar SP-MS update rules in exact fixed point.
//!
//! VN sums are held in sixteenths: channel values are integers, the
//! sign-preserving term is a half-integer, and a shift-add weight with
//! exponent >= -3 maps halves to sixteenths without rounding.

use crate::message::{QuantizedMessage, Sign};
use crate::weights::P2Weight;

use super::{max_magnitude, DecodeError, OffsetTable, ZeroSumPolicy};

/// Fixed-point fraction bits of a VN sum.
pub(crate) const SUM_FRACTION_BITS: u32 = 4;

/// `w * x_halves / 2` in sixteenths; `None` is the unweighted rule.
#[inline]
pub(crate) fn scale_halves(weight: Option<&P2Weight>, x_halves: i32) -> i32 {
    match weight {
        Some(w) => w.apply(x_halves),
        None => x_halves << (SUM_FRACTION_BITS - 1),
    }
}

/// `I_n + w (mu/2 + sum)` in sixteenths.
#[inline]
pub(crate) fn vn_sum(channel: QuantizedMessage, mu: Sign, message_sum: i32, weight: Option<&P2Weight>) -> i32 {
    let halves = mu.to_i32() + 2 * message_sum;
    (channel.value() << SUM_FRACTION_BITS) + scale_halves(weight, halves)
}

#[inline]
pub(crate) fn zero_sum_sign(policy: ZeroSumPolicy, channel: QuantizedMessage, mu: Sign) -> Sign {
    match policy {
        ZeroSumPolicy::ChannelThenMu if channel.magnitude > 0 => channel.sign,
        _ => mu,
    }
}

/// Saturation with offset applied to a sum in sixteenths.
#[inline]
pub(crate) fn saturate(sum: i32, tie: Sign, max_mag: u8, offsets: &OffsetTable) -> QuantizedMessage {
    let sign = Sign::of_int_or(sum, tie);
    let floored = sum.unsigned_abs() >> SUM_FRACTION_BITS;
    let magnitude = floored
        .saturating_sub(offsets.offset(floored))
        .min(u32::from(max_mag));
    QuantizedMessage::new(sign, magnitude as u8)
}

fn check_q(q: u8) -> Result<u8, DecodeError> {
    if (2..=4).contains(&q) {
        Ok(max_magnitude(q))
    } else {
        Err(DecodeError::UnsupportedQ(q))
    }
}

/// Saturates a real value to the q-bit alphabet:
/// sign of `m_s`, magnitude `min(max(floor|m_s| - phi, 0), 2^(q-1) - 1)`.
///
/// An exact zero gets sign `+`; the decoder never calls this with zero.
pub fn psi(m_s: f64, q: u8, offsets: &OffsetTable) -> Result<QuantizedMessage, DecodeError> {
    if !m_s.is_finite() {
        return Err(DecodeError::NonFinite(m_s));
    }
    let max_mag = check_q(q)?;
    let floored = m_s.abs().floor().min(f64::from(u32::MAX)) as u32;
    let magnitude = floored
        .saturating_sub(offsets.offset(floored))
        .min(u32::from(max_mag));
    Ok(QuantizedMessage::new(Sign::of(m_s), magnitude as u8))
}

fn vn_update(
    channel: QuantizedMessage,
    incoming: &[QuantizedMessage],
    mu: Sign,
    weight: Option<&P2Weight>,
    q: u8,
    offsets: &OffsetTable,
) -> Result<QuantizedMessage, DecodeError> {
    let max_mag = check_q(q)?;
    if incoming.is_empty() {
        return Err(DecodeError::EmptyIncoming);
    }
    let message_sum: i32 = incoming.iter().map(|m| m.value()).sum();
    let sum = vn_sum(channel, mu, message_sum, weight);
    let tie = zero_sum_sign(ZeroSumPolicy::default(), channel, mu);
    Ok(saturate(sum, tie, max_mag, offsets))
}

/// Weighted VN-to-CN update `Psi(I_n + w (mu/2 + sum of extrinsic messages))`.
pub fn vn_update_spms(
    channel: QuantizedMessage,
    incoming: &[QuantizedMessage],
    mu: Sign,
    weight: &P2Weight,
    q: u8,
    offsets: &OffsetTable,
) -> Result<QuantizedMessage, DecodeError> {
    vn_update(channel, incoming, mu, Some(weight), q, offsets)
}

/// The original SP-MS VN update, without any weight arithmetic.
pub fn vn_update_unweighted(
    channel: QuantizedMessage,
    incoming: &[QuantizedMessage],
    mu: Sign,
    q: u8,
    offsets: &OffsetTable,
) -> Result<QuantizedMessage, DecodeError> {
    vn_update(channel, incoming, mu, None, q, offsets)
}

/// Min-sum check update: product of signs, minimum magnitude.
pub fn cn_update_minsum(incoming: &[QuantizedMessage]) -> Result<QuantizedMessage, DecodeError> {
    let first = incoming.first().ok_or(DecodeError::EmptyIncoming)?;
    Ok(incoming[1..].iter().fold(*first, |acc, m| {
        QuantizedMessage::new(acc.sign * m.sign, acc.magnitude.min(m.magnitude))
    }))
}

/// Hard decision from `I_n + w (mu_n/2 + sum of all incoming messages)`:
/// 0 when positive, 1 when negative, zero resolved by the channel sign and
/// then `mu_n`.
pub fn tentative_decision(
    channel: QuantizedMessage,
    all_incoming: &[QuantizedMessage],
    mu: Sign,
    weight: Option<&P2Weight>,
) -> u8 {
    let message_sum: i32 = all_incoming.iter().map(|m| m.value()).sum();
    let sum = vn_sum(channel, mu, message_sum, weight);
    Sign::of_int_or(sum, zero_sum_sign(ZeroSumPolicy::default(), channel, mu)).bit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::p2_encode;
    use num_rational::Ratio;

    fn m(v: i32) -> QuantizedMessage {
        QuantizedMessage::new(if v < 0 { Sign::Minus } else { Sign::Plus }, v.unsigned_abs() as u8)
    }

    fn w(n: i64, d: i64) -> P2Weight {
        p2_encode(Ratio::new(n, d)).unwrap()
    }

    #[test]
    fn psi_examples() {
        let zero = OffsetTable::zero();
        assert_eq!(psi(0.5, 2, &zero).unwrap(), QuantizedMessage::new(Sign::Plus, 0));
        assert_eq!(psi(-9.5, 3, &zero).unwrap(), m(-3));
        let t = OffsetTable::from_pairs([(4, 1)]);
        assert_eq!(psi(4.5, 3, &t).unwrap(), m(3));
        assert_eq!(psi(0.0, 3, &zero).unwrap(), m(0));
        assert!(matches!(psi(f64::NAN, 3, &zero), Err(DecodeError::NonFinite(_))));
        assert!(matches!(psi(1.0, 5, &zero), Err(DecodeError::UnsupportedQ(5))));
    }

    #[test]
    fn offsets_clamp_at_zero() {
        let t = OffsetTable::from_pairs([(1, 5)]);
        assert_eq!(psi(-1.5, 4, &t).unwrap(), QuantizedMessage::new(Sign::Minus, 0));
    }

    #[test]
    fn vn_update_examples() {
        let zero = OffsetTable::zero();
        // s = 3 + (-1 + 0.5) = 2.5
        let out = vn_update_spms(m(3), &[m(-1)], Sign::Plus, &P2Weight::one(), 3, &zero).unwrap();
        assert_eq!(out, m(2));
        assert_eq!(vn_update_unweighted(m(3), &[m(-1)], Sign::Plus, 3, &zero).unwrap(), out);
        // s = 0 + (-0.5 + 0) = -0.5: the sign-preserving term decides.
        let out = vn_update_spms(m(0), &[m(0), m(0)], Sign::Minus, &P2Weight::one(), 3, &zero).unwrap();
        assert_eq!(out, QuantizedMessage::new(Sign::Minus, 0));
        // s = -2 + 1.75 * 3.5 = 4.125, saturated at q = 2.
        let out = vn_update_spms(m(-2), &[m(1), m(1), m(1)], Sign::Plus, &w(7, 4), 2, &zero).unwrap();
        assert_eq!(out, m(1));
        assert!(matches!(
            vn_update_unweighted(m(1), &[], Sign::Plus, 2, &zero),
            Err(DecodeError::EmptyIncoming)
        ));
    }

    #[test]
    fn exact_zero_sum_uses_channel_then_mu() {
        let zero = OffsetTable::zero();
        // -1 + 2 * (0.5 + 0) = 0 -> channel sign.
        let out = vn_update_spms(m(-1), &[m(0)], Sign::Plus, &w(2, 1), 3, &zero).unwrap();
        assert_eq!(out, QuantizedMessage::new(Sign::Minus, 0));
        // With a zero-magnitude channel value the sum is w times a half-odd
        // integer and cannot vanish; the policy still falls back to mu.
        let ch = QuantizedMessage::new(Sign::Plus, 0);
        assert_eq!(zero_sum_sign(ZeroSumPolicy::ChannelThenMu, ch, Sign::Minus), Sign::Minus);
        assert_eq!(zero_sum_sign(ZeroSumPolicy::ChannelThenMu, m(-2), Sign::Plus), Sign::Minus);
        assert_eq!(zero_sum_sign(ZeroSumPolicy::Mu, m(-2), Sign::Plus), Sign::Plus);
    }

    #[test]
    fn cn_update_examples() {
        assert_eq!(cn_update_minsum(&[m(2), m(-3)]).unwrap(), m(-2));
        assert_eq!(cn_update_minsum(&[m(0), m(5)]).unwrap(), m(0));
        let neg_zero = QuantizedMessage::new(Sign::Minus, 0);
        assert_eq!(cn_update_minsum(&[neg_zero, m(5)]).unwrap(), neg_zero);
        assert_eq!(cn_update_minsum(&[]), Err(DecodeError::EmptyIncoming));
    }

    #[test]
    fn tentative_examples() {
        assert_eq!(tentative_decision(m(7), &[m(0), m(0), m(0)], Sign::Plus, None), 0);
        // -1 + 3 * (0.5 + 4) = 12.5
        assert_eq!(tentative_decision(m(-1), &[m(2), m(1), m(1)], Sign::Plus, Some(&w(3, 1))), 0);
        assert_eq!(tentative_decision(m(-1), &[m(2), m(1), m(1)], Sign::Plus, None), 0);
        assert_eq!(tentative_decision(m(-7), &[m(1), m(1), m(1)], Sign::Plus, None), 1);
    }
}
