mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::*;
use spms_core::code_graph::{
    construct_peg, degree_report, gf2_rank, girth, load_alist, select_nodes_by_degree, write_alist, AlistMatrix,
    GraphError,
};

#[test]
fn peg_1024_report_and_roundtrip() {
    let g = code_1024(7);
    let report = degree_report(&g);
    assert_eq!(report.vn_degrees, BTreeMap::from([(3, 742), (6, 252), (11, 15), (12, 15)]));
    assert_eq!(report.n_checks(), 178);
    assert!((report.rate - (1.0 - 178.0 / 1024.0)).abs() < 1e-12);
    let text = write_alist(&g);
    let back = load_alist(&text).unwrap();
    assert_eq!(back, g);
    assert_eq!(write_alist(&back), text);
    assert!(girth(&g).unwrap() >= 6);
}

#[test]
fn desk_code_has_expected_shape() {
    let g = desk_code();
    let report = degree_report(&g);
    assert_eq!(report.vn_degrees, desk_counts());
    assert!((report.rate - 0.826).abs() < 0.001);
    assert!((report.vn_fraction(3) - 0.7246).abs() < 0.0001);
    let spread: Vec<usize> = report.cn_degrees.keys().copied().collect();
    assert!(spread.last().unwrap() - spread.first().unwrap() <= 2);
    assert_eq!(gf2_rank(&g), 356);
}

#[test]
fn proportioned_codes_have_girth_six() {
    for seed in 0..3 {
        assert!(girth(&code_1024(seed)).unwrap() >= 6, "seed {seed}");
    }
    assert!(girth(&desk_code()).unwrap() >= 6);
}

#[test]
fn selector_returns_degree_three_nodes() {
    let g = code_1024(1);
    let picked = select_nodes_by_degree(&g, &BTreeSet::from([3]));
    assert_eq!(picked.len(), 742);
    assert!(picked.iter().all(|&v| g.vn_degree(v) == 3));
    assert!(picked.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn malformed_alist_reports_position() {
    // The third VN lists check 3 of 2.
    let text = "3 2\n2 3\n2 2 2\n3 3\n1 2\n1 2\n1 3\n1 2 3\n1 2 3\n";
    match load_alist(text) {
        Err(GraphError::Alist { line, .. }) => assert_eq!(line, 7),
        other => panic!("unexpected {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn peg_graphs_roundtrip_and_match_counts(n in 16usize..120, seed in any::<u64>(), frac in 0.3f64..0.9) {
        let threes = ((n as f64) * frac) as usize;
        let counts = BTreeMap::from([(3, threes), (4, n - threes)]);
        let m = n / 3;
        let g = construct_peg(n, &counts, m, seed).unwrap();
        prop_assert!(g.is_consistent());
        prop_assert_eq!(degree_report(&g).vn_degrees, counts.into_iter().filter(|&(_, c)| c > 0).collect::<BTreeMap<_, _>>());
        let back = load_alist(&write_alist(&g)).unwrap();
        prop_assert_eq!(&back, &g);
        let parsed = AlistMatrix::parse(&write_alist(&g)).unwrap();
        prop_assert_eq!(parsed.n_edges(), g.n_edges());
        prop_assert!(gf2_rank(&g) <= m);
    }

    #[test]
    fn edge_views_agree(n in 16usize..80, seed in any::<u64>()) {
        let g = construct_peg(n, &BTreeMap::from([(3, n)]), n / 2, seed).unwrap();
        let mut from_cn: Vec<(usize, usize)> = (0..g.n_checks())
            .flat_map(|c| g.cn_neighbors(c).map(move |v| (v, c)).collect::<Vec<_>>())
            .collect();
        from_cn.sort();
        let mut from_vn: Vec<(usize, usize)> = g.edges().collect();
        from_vn.sort();
        prop_assert_eq!(from_cn, from_vn);
        for e in 0..g.n_edges() {
            let (v, c) = g.edge_endpoints(e);
            prop_assert_eq!(g.edge_index(v, c), Some(e));
        }
    }
}
