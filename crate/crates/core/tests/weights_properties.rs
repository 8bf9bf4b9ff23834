mod common;

use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;

use common::*;
use spms_core::channel::{ChannelConfig, QuantizerConfig, SnrKind};
use spms_core::decoder::{build_frame_decoder, DecoderConfig};
use spms_core::montecarlo::{run_point_with, StoppingRule};
use spms_core::weights::{
    all_decompositions, default_value_set, load_table1, optimize, p2_encode, OptimizerConfig, Violation,
    WeightSchedule,
};

/// Largest |mu/2 + sum| in halves for a degree-12 VN at q = 4.
const MAX_HALVES: i32 = 1 + 2 * 12 * 7;

#[test]
fn shift_add_products_are_exact_over_reachable_range() {
    let mut weights: Vec<_> = default_value_set().into_iter().map(|v| p2_encode(v).unwrap()).collect();
    weights.extend(all_decompositions());
    for w in &weights {
        for x in -MAX_HALVES..=MAX_HALVES {
            let exact = w.value() * Ratio::new(i64::from(x), 2) * 16;
            assert!(exact.is_integer());
            assert_eq!(i64::from(w.apply(x)), exact.to_integer(), "{w} * {x}/2");
        }
    }
}

fn significant_bits(v: Ratio<i64>) -> u32 {
    let mut k = (v * 8).to_integer();
    while k % 2 == 0 {
        k /= 2;
    }
    64 - k.leading_zeros()
}

#[test]
fn published_schedules() {
    let q2 = load_table1(2).unwrap();
    let q3 = load_table1(3).unwrap();
    assert_eq!(q2.values[9], Ratio::new(5, 2));
    assert!(q3.values[..4].iter().all(|&v| v == Ratio::from_integer(1)));
    assert!(q2.values[..4].iter().all(|&v| v == Ratio::from_integer(1)));
    for s in [&q2, &q3] {
        assert!(s.validate().is_empty());
        assert_eq!(s.max_iters(), 12);
        assert_eq!(s.target_degrees, BTreeSet::from([3]));
        for &v in &s.values {
            let w = p2_encode(v).unwrap();
            assert!(w.is_unsigned() && w.terms().len() <= 3);
            assert!(significant_bits(v) <= 3);
        }
    }
    assert!(load_table1(4).is_err());
}

#[test]
fn schedule_json_roundtrip_is_exact() {
    let s = load_table1(2).unwrap();
    let text = s.to_json();
    assert!(text.contains("\"2.5\"") && text.contains("\"1.75\""));
    assert_eq!(WeightSchedule::from_json(&text).unwrap(), s);
    assert!(WeightSchedule::from_json(&text.replace("\"q\"", "\"extra\": 1, \"q\"")).is_err());
}

#[test]
fn validation_reports_each_problem() {
    let r = |n, d| Ratio::new(n, d);
    let s = WeightSchedule::new(2, BTreeSet::from([3]), vec![r(1, 1), r(3, 4), r(29, 16), r(0, 1)]);
    let v = s.validate();
    assert!(v.iter().any(|x| matches!(x, Violation::NonMonotone { iteration: 1, .. })));
    assert!(v.iter().any(|x| matches!(x, Violation::Unrepresentable { iteration: 2, .. })));
    assert!(v.iter().any(|x| matches!(x, Violation::NonPositive { iteration: 3, .. })));
}

fn optimizer_setup() -> (spms_core::code_graph::TannerGraph, ChannelConfig, QuantizerConfig) {
    let g = code_1024(3);
    let channel = ChannelConfig::new(4.5, 0.826, SnrKind::Ebn0, 17).unwrap();
    (g, channel, QuantizerConfig::new(0.75).unwrap())
}

#[test]
fn single_candidate_is_all_ones_and_scores_like_unweighted() {
    let (g, channel, quant) = optimizer_setup();
    let base = DecoderConfig::sp_ms(2);
    let oc = OptimizerConfig::new(1, 60, 5);
    let result = optimize(&g, &base, &channel, &quant, &oc).unwrap();
    assert_eq!(result.best_index, 0);
    assert!(result.best.values.iter().all(|&v| v == Ratio::from_integer(1)));
    let plain = run_point_with(
        g.n_vars(),
        || build_frame_decoder(&g, &base, &quant).unwrap(),
        &channel,
        &StoppingRule::fixed(60).unwrap(),
        0,
    )
    .unwrap();
    assert_eq!(result.score, plain.fer);
    assert_eq!(result.all_scores[0].bit_errors, plain.bit_errors);
}

#[test]
fn search_beats_unweighted_in_the_floor_and_is_deterministic() {
    let (g, channel, quant) = optimizer_setup();
    let base = DecoderConfig::sp_ms(2);
    let oc = OptimizerConfig::new(12, 80, 9);
    let a = optimize(&g, &base, &channel, &quant, &oc).unwrap();
    assert!(a.best.validate().is_empty());
    assert!(a.score < a.all_scores[0].score, "best {} vs ones {}", a.score, a.all_scores[0].score);
    let b = optimize(&g, &base, &channel, &quant, &oc).unwrap();
    assert_eq!(a.best, b.best);
    assert_eq!(a.all_scores, b.all_scores);
}

proptest! {
    #[test]
    fn encode_is_exact_and_canonical(k in 1i64..64) {
        let v = Ratio::new(k, 8);
        if let Ok(w) = p2_encode(v) {
            prop_assert_eq!(w.value(), v);
            let exps: Vec<i8> = w.terms().iter().map(|t| t.exponent).collect();
            prop_assert!(exps.windows(2).all(|p| p[0] > p[1]));
            prop_assert!(w.terms().len() <= 3);
        }
    }

    #[test]
    fn apply_is_linear(k in 1i64..64, x in -MAX_HALVES..=MAX_HALVES, y in -MAX_HALVES..=MAX_HALVES) {
        if let Ok(w) = p2_encode(Ratio::new(k, 8)) {
            prop_assert_eq!(w.apply(x + y), w.apply(x) + w.apply(y));
            prop_assert_eq!(w.apply(-x), -w.apply(x));
        }
    }
}
