use excess_atlas_core::asymptotics::{dominant_term_log, term_magnitudes, theta_form_log};
use excess_atlas_core::graph_gf::{
    connected_series, sgpos_series, unicycle_series, AnchoredRecurrence,
};
use excess_atlas_core::modular::connected_counts_crt;
use excess_atlas_core::oracle::{enum_graphs, enum_graphs_with_edges, GraphPredicate};
use excess_atlas_core::patchworks::sgpos_via_patchworks;
use excess_atlas_core::ExactRational;
use num_bigint::BigInt;

#[test]
fn positive_excess_graphs_match_brute_force() {
    let sg = sgpos_series(5, 7).unwrap();
    for n in 1..=7usize {
        let t = enum_graphs(n, &[GraphPredicate::PositiveExcessComponents]).unwrap();
        for m in n..=n * (n - 1) / 2 {
            let k = (m - n) as i64;
            let brute = t.count(GraphPredicate::PositiveExcessComponents, m).unwrap();
            let brute = ExactRational::from_integer(BigInt::from(brute));
            let got = if k <= 5 { sg.count(n, k) } else { continue };
            assert_eq!(got, brute, "n={n} m={m}");
        }
    }
}

#[test]
fn unicycles_match_brute_force() {
    let (_, v) = unicycle_series(7);
    for n in 1..=7usize {
        let t = enum_graphs(n, &[GraphPredicate::UnicyclicConnected]).unwrap();
        let brute = t.total(GraphPredicate::UnicyclicConnected).unwrap();
        assert_eq!(v.egf_count(n), ExactRational::from_integer(BigInt::from(brute)));
    }
}

#[test]
fn eight_vertices_by_edge_count() {
    let gf = connected_series(8, 2).unwrap();
    for m in 7..=10 {
        let t = enum_graphs_with_edges(8, m, &[GraphPredicate::Connected]).unwrap();
        let brute = t.count(GraphPredicate::Connected, m).unwrap();
        assert_eq!(gf.count(8, m as i64 - 8), ExactRational::from_integer(BigInt::from(brute)));
    }
}

#[test]
fn modular_route_agrees_with_big_integer_recurrence() {
    let rec = AnchoredRecurrence::new(36, 50);
    let cells: Vec<(usize, i64)> = vec![(36, -1), (36, 0), (30, 7), (36, 14), (25, 25)];
    let counts = connected_counts_crt(&cells).unwrap();
    for (&(n, k), c) in cells.iter().zip(&counts) {
        let m = (n as i64 + k) as usize;
        assert_eq!(BigInt::from(c.clone()), rec.count(n, m).unwrap(), "n={n} k={k}");
    }
}

#[test]
fn patchwork_route_to_sgpos() {
    for k in 1..=3 {
        sgpos_via_patchworks(k, 10).unwrap();
    }
}

#[test]
fn dominant_term_tracks_exact_counts() {
    let counts = connected_counts_crt(&[(60, 30)]).unwrap();
    let exact = excess_atlas_core::asymptotics::LogMagnitude::from_biguint(&counts[0]);
    let d = dominant_term_log(60, 30).unwrap();
    let r = exact.ratio(&d);
    assert!(r > 0.8 && r < 1.0, "ratio {r}");
    // the Θ form differs from D by a factor depending only on k/n
    let gap = |n: u64| {
        theta_form_log(n, n / 2).unwrap().ln_abs() - dominant_term_log(n, n / 2).unwrap().ln_abs()
    };
    let (a, b) = (gap(400), gap(800));
    assert!((a - b).abs() < 0.01, "gaps {a} {b}");
}

#[test]
fn term_sizes_fall_off() {
    let t = term_magnitudes(20, 3).unwrap();
    assert!(t.first_composition_dominates());
    let slices = t.slices.unwrap();
    assert_eq!(slices.len(), 4);
    assert!(slices[0].relative == 1.0);
}
