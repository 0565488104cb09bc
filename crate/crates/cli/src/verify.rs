use clap::ValueEnum;
use excess_atlas_core::asymptotics::{
    appendix_bound_checks, c1_fit, dnk1_check, dnk2_check, hessian, hessian_fd, ratio_point,
    s_value, saddle_residuals, solve_saddle,
};
use excess_atlas_core::graph_gf::{
    connected_series, mgpos_series, sgpos_series, tree_series, unicycle_series,
    wright_polynomial, AnchoredRecurrence, GfPipeline,
};
use excess_atlas_core::oracle::{enum_graphs, enum_multigraphs, preimage_count, GraphPredicate, MultigraphPredicate};
use excess_atlas_core::patchworks::{
    core_series, enumerate_patchworks_no_isolated, mindeg3_multigraphs,
    patchwork_factorization_check, sgpos_via_patchworks,
};
use excess_atlas_core::series::binomial;
use excess_atlas_core::{ExactRational, TruncatedSeries};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::sweep::connected_counts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Series,
    Patchworks,
    Identities,
    Asymptotics,
    Appendix,
    All,
}

pub struct CheckOutcome {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

type Check = (String, fn() -> Result<String, String>);

fn fail(msg: impl ToString) -> String {
    msg.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: &BigUint) -> ExactRational {
    ExactRational::from_integer(BigInt::from(v.clone()))
}

fn r(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

fn sample_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| r((n as i64 % 5) - 2, n as i64 + 1)).truncate(order)
}

fn unit_sample(order: usize) -> TruncatedSeries {
    let mut f = sample_series(order);
    f.set_coeff(0, ExactRational::one());
    f
}

fn exp_log_round_trip() -> Result<String, String> {
    let order = 24;
    let f = unit_sample(order);
    ensure(f.log().map_err(fail)?.exp().map_err(fail)? == f, || "exp(log f) != f".into())?;
    let mut g = sample_series(order);
    g.set_coeff(0, ExactRational::zero());
    ensure(g.exp().map_err(fail)?.log().map_err(fail)? == g, || "log(exp g) != g".into())?;
    Ok(format!("order {order}"))
}

fn rational_powers() -> Result<String, String> {
    let order = 24;
    let f = unit_sample(order);
    let half = f.pow_rational(&r(1, 2)).map_err(fail)?;
    ensure(half.mul(&half) == f, || "f^(1/2) f^(1/2) != f".into())?;
    let a = f.pow_rational(&r(-3, 2)).map_err(fail)?;
    let b = f.pow_rational(&r(3, 2)).map_err(fail)?;
    ensure(a.mul(&b) == TruncatedSeries::one(order), || "f^(-3/2) f^(3/2) != 1".into())?;
    ensure(f.mul(&f.inverse().map_err(fail)?) == TruncatedSeries::one(order), || "f / f != 1".into())?;
    Ok(format!("order {order}"))
}

fn tree_fixed_point() -> Result<String, String> {
    let order = 30;
    let t = tree_series(order);
    let z = TruncatedSeries::monomial(ExactRational::one(), 1, order);
    let rhs = z.mul(&t.exp().map_err(fail)?);
    ensure(t == rhs, || "T != z e^T".into())?;
    Ok(format!("order {order}"))
}

fn cayley() -> Result<String, String> {
    let gf = connected_series(30, -1).map_err(fail)?;
    let rec = AnchoredRecurrence::new(50, 49);
    for n in 2..=50usize {
        let expected = BigInt::from(n).pow((n - 2) as u32);
        ensure(rec.count(n, n - 1).map_err(fail)? == expected, || format!("recurrence n={n}"))?;
        if n <= 30 {
            ensure(gf.count(n, -1) == ExactRational::from_integer(expected), || format!("GF n={n}"))?;
        }
    }
    Ok("GF n ≤ 30, recurrence n ≤ 50".into())
}

fn oracle_closure() -> Result<String, String> {
    let gf = connected_series(7, 14).map_err(fail)?;
    let rec = AnchoredRecurrence::new(7, 21);
    for n in 1..=7usize {
        let table = enum_graphs(n, &[GraphPredicate::Connected]).map_err(fail)?;
        for m in 0..=n * (n - 1) / 2 {
            let brute = table.count(GraphPredicate::Connected, m).unwrap_or_default();
            let k = m as i64 - n as i64;
            let g = if k >= -1 { gf.count(n, k) } else { ExactRational::zero() };
            let c = rec.count(n, m).map_err(fail)?;
            ensure(BigInt::from(brute.clone()) == c && int(&brute) == g, || {
                format!("n={n} m={m}: brute {brute}, recurrence {c}, GF {g}")
            })?;
        }
    }
    Ok("63 cells".into())
}

fn composition_identity() -> Result<String, String> {
    let pipe = GfPipeline::new(30, 8).map_err(fail)?;
    for k in 1..=8 {
        for cert in pipe.exact_csg_identity_all(k).map_err(fail)? {
            ensure(cert.holds, || {
                format!("n={} k={}: {} vs {}", cert.n, cert.k, cert.composition_value, cert.csg)
            })?;
        }
    }
    Ok("exact".into())
}

fn wright() -> Result<String, String> {
    let order = 40;
    let sg = sgpos_series(6, order).map_err(fail)?;
    let mut degrees = Vec::new();
    for k in 1..=6usize {
        let q = wright_polynomial(k, order).map_err(|e| format!("k={k}: {e}"))?;
        ensure(&q.reconstruct(order).map_err(fail)? == sg.get(k as i64).unwrap(), || format!("k={k}"))?;
        degrees.push(q.degree().to_string());
    }
    Ok(format!("degrees {}", degrees.join(" ")))
}

fn majorant() -> Result<String, String> {
    let order = 20;
    let sg = sgpos_series(4, order).map_err(fail)?;
    ensure(mgpos_series(0, order).map_err(fail)? == TruncatedSeries::one(order), || "mg>0_0 != 1".into())?;
    for k in 1..=4usize {
        let mg = mgpos_series(k, order).map_err(fail)?;
        let s = sg.get(k as i64).unwrap();
        for n in 0..=order {
            ensure(mg.coeff(n) >= s.coeff(n), || format!("k={k} n={n}"))?;
        }
    }
    Ok("k ≤ 4, n ≤ 20".into())
}

fn projection() -> Result<String, String> {
    let w = enum_multigraphs(4, 5, &[MultigraphPredicate::Simple]).map_err(fail)?;
    for n in 1..=4u64 {
        for m in 0..=5u64 {
            let graphs = binomial(n * (n - 1) / 2, m);
            ensure(w.weight(n as usize, m as usize) == int(&graphs), || format!("n={n} m={m}"))?;
        }
    }
    let pre = preimage_count(3, &[(0, 1), (1, 2)]);
    ensure(pre == 8, || format!("path on 3 vertices has {pre} preimages"))?;
    Ok("path on 3 vertices: 8 preimages".into())
}

fn positive_excess() -> Result<String, String> {
    let sg = sgpos_series(5, 7).map_err(fail)?;
    for n in 1..=7usize {
        let t = enum_graphs(n, &[GraphPredicate::PositiveExcessComponents]).map_err(fail)?;
        for m in n..=(n * (n - 1) / 2).min(n + 5) {
            let brute = t.count(GraphPredicate::PositiveExcessComponents, m).unwrap_or_default();
            ensure(sg.count(n, (m - n) as i64) == int(&brute), || format!("n={n} m={m}"))?;
        }
    }
    Ok("n ≤ 7".into())
}

fn modular_route() -> Result<String, String> {
    let rec = AnchoredRecurrence::new(40, 60);
    let cells: Vec<(usize, i64)> = (1..=40)
        .flat_map(|n| [(n, -1), (n, n as i64 / 2)])
        .filter(|&(n, k)| n as i64 + k <= (n * (n - 1) / 2) as i64)
        .collect();
    let counts = connected_counts(&cells).map_err(fail)?;
    for (&(n, k), c) in cells.iter().zip(&counts) {
        let m = (n as i64 + k) as usize;
        ensure(BigInt::from(c.clone()) == rec.count(n, m).map_err(fail)?, || format!("n={n} k={k}"))?;
    }
    Ok(format!("{} cells", cells.len()))
}

fn factorization() -> Result<String, String> {
    for ell in 0..=1 {
        ensure(patchwork_factorization_check(ell, 4).map_err(fail)?, || format!("l={ell}"))?;
    }
    let p0 = enumerate_patchworks_no_isolated(0).map_err(fail)?;
    ensure(p0.z_degree() == 0 && p0.coeff(0, 0).is_one(), || "P_0* != 1".into())?;
    Ok("P_0* = 1".into())
}

fn core_brute_force() -> Result<String, String> {
    let cores = core_series(6, 9).map_err(fail)?;
    for n in 1..=6usize {
        let table = enum_graphs(n, &[GraphPredicate::MinDegree2]).map_err(fail)?;
        for m in 0..=n * (n - 1) / 2 {
            let brute = table.count(GraphPredicate::MinDegree2, m).unwrap_or_default();
            let k = m as i64 - n as i64;
            let got = if k >= 0 { cores.count(n, k) } else { ExactRational::zero() };
            ensure(int(&brute) == got, || format!("n={n} m={m}: brute {brute}, series {got}"))?;
        }
    }
    Ok("k ≤ 9".into())
}

fn core_composition() -> Result<String, String> {
    let order = 12;
    let cores = core_series(order, 3).map_err(fail)?;
    let sg = sgpos_series(3, order).map_err(fail)?;
    let t = tree_series(order);
    let ev = unicycle_series(order).1.exp().map_err(fail)?;
    for k in 0..=3i64 {
        let lhs = cores.get(k).unwrap().compose(&t).map_err(fail)?;
        ensure(lhs == sg.get(k).unwrap().mul(&ev), || format!("k={k}"))?;
    }
    for k in 1..=3 {
        sgpos_via_patchworks(k, 10).map_err(fail)?;
    }
    Ok("k ≤ 3".into())
}

fn mindeg3() -> Result<String, String> {
    let mut sizes = Vec::new();
    for k in 1..=2usize {
        let entries = mindeg3_multigraphs(k).map_err(fail)?;
        ensure(!entries.is_empty(), || format!("none for k={k}"))?;
        for e in &entries {
            let (n, m) = (e.graph.n(), e.graph.m());
            ensure(n <= 2 * k && m <= 3 * k, || format!("k={k}: n={n} m={m}"))?;
        }
        sizes.push(entries.len().to_string());
    }
    Ok(format!("{} shapes", sizes.join(" + ")))
}

fn ratios() -> impl Iterator<Item = f64> {
    (0..50).map(|i| 0.05 * (10.0f64 / 0.05).powf(i as f64 / 49.0))
}

fn saddle_residual() -> Result<String, String> {
    let mut worst = 0.0f64;
    for ratio in ratios() {
        worst = worst.max(solve_saddle(ratio).map_err(fail)?.residual.abs());
    }
    ensure(worst < 1e-12, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn saddle_conditions() -> Result<String, String> {
    let mut worst = 0.0f64;
    for ratio in ratios() {
        let s = solve_saddle(ratio).map_err(fail)?;
        let c = saddle_residuals(&s, 1e-2).map_err(fail)?;
        worst = worst.max((c.zeta_residual * ratio).abs()).max((c.lambda_residual / 2.0).abs());
    }
    ensure(worst < 1e-8, || format!("max relative gap {worst:e}"))?;
    Ok(format!("max relative gap {worst:.1e}"))
}

fn hessian_closed_form() -> Result<String, String> {
    let mut worst = 0.0f64;
    for ratio in ratios() {
        let s = solve_saddle(ratio).map_err(fail)?;
        let h = hessian(&s, 1.0 / ratio);
        let fd = hessian_fd(&s, 1e-2).map_err(fail)?;
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max(((h[a][b] - fd[a][b]) / h[a][b]).abs());
            }
        }
    }
    ensure(worst < 1e-5, || format!("max relative gap {worst:e}"))?;
    Ok(format!("max relative gap {worst:.1e}"))
}

fn dominant_parts() -> Result<String, String> {
    let mut worst = 0.0f64;
    for ratio in ratios() {
        let n = 1000u64;
        let k = ((ratio * n as f64).round() as u64).max(1);
        worst = worst
            .max(dnk1_check(n, k).map_err(fail)?.relative)
            .max(dnk2_check(n, k).map_err(fail)?.relative);
    }
    ensure(worst < 1e-8, || format!("max relative gap {worst:e}"))?;
    Ok(format!("max relative gap {worst:.1e}"))
}

fn ratio_points() -> Result<Vec<excess_atlas_core::asymptotics::RatioPoint>, String> {
    let ns = [20u64, 40, 80, 160];
    let cells: Vec<(usize, i64)> = ns.iter().map(|&n| (n as usize, n as i64)).collect();
    let counts = connected_counts(&cells).map_err(fail)?;
    ns.iter().zip(&counts).map(|(&n, c)| ratio_point(n, n, c).map_err(fail)).collect()
}

fn one_over_n_rate() -> Result<String, String> {
    let pts = ratio_points()?;
    let (a, b) = (pts[2].scaled_error().abs(), pts[3].scaled_error().abs());
    let variation = (b - a).abs() / a;
    ensure(variation < 0.25, || format!("variation {:.1}%", 100.0 * variation))?;
    Ok(format!("r(80) = {:.5}, r(160) = {:.5}, variation {:.1}%", pts[2].ratio, pts[3].ratio, 100.0 * variation))
}

fn c1_consistency() -> Result<String, String> {
    let fit = c1_fit(&ratio_points()?).map_err(fail)?;
    let rel = fit.uncertainty / fit.estimate.abs();
    ensure(rel < 0.10, || format!("c1 = {:.3} ± {:.3}", fit.estimate, fit.uncertainty))?;
    Ok(format!("c1 = {:.3} ± {:.3}", fit.estimate, fit.uncertainty))
}

fn s_base_values() -> Result<String, String> {
    for k in 1..=150 {
        ensure(s_value(1, 0, k).map_err(fail)?.value.is_one(), || format!("S_{{1,0,{k}}}"))?;
    }
    let v = s_value(2, 0, 2).map_err(fail)?.value;
    ensure(v == r(7, 3), || format!("S_{{2,0,2}} = {v}"))?;
    Ok("exact".into())
}

fn checks(suite: Suite) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let mut add = |s: Suite, name: &str, f: fn() -> Result<String, String>| {
        if suite == s || suite == Suite::All {
            out.push((name.to_string(), f));
        }
    };
    add(Suite::Series, "round-trip exp/log", exp_log_round_trip);
    add(Suite::Series, "rational powers and inverses", rational_powers);
    add(Suite::Series, "tree function T = z e^T", tree_fixed_point);
    add(Suite::Series, "Cayley counts n^{n-2}", cayley);
    add(Suite::Identities, "brute-force connected counts = recurrence = GF (n ≤ 7)", oracle_closure);
    add(Suite::Identities, "exact CSG composition identity n≤30 k≤8", composition_identity);
    add(Suite::Identities, "Wright polynomials k ≤ 6 at order 40", wright);
    add(Suite::Identities, "multigraph majorant mg>0_k ≥ sg>0_k", majorant);
    add(Suite::Identities, "multigraph weights project to graph counts (n ≤ 4, m ≤ 5)", projection);
    add(Suite::Identities, "positive-excess graphs = sg>0 (n ≤ 7)", positive_excess);
    add(Suite::Identities, "modular route = big-integer recurrence (n ≤ 40)", modular_route);
    add(Suite::Patchworks, "patchwork factorization l ≤ 1 to z^4", factorization);
    add(Suite::Patchworks, "core series = min-degree-2 brute force (n ≤ 6)", core_brute_force);
    add(Suite::Patchworks, "Core_k(T) = e^V sg>0_k (k ≤ 3, n ≤ 12)", core_composition);
    add(Suite::Patchworks, "min-degree-3 multigraphs k ≤ 2 have n ≤ 2k, m ≤ 3k", mindeg3);
    add(Suite::Asymptotics, "saddle equation residual < 1e-12 on [0.05, 10]", saddle_residual);
    add(Suite::Asymptotics, "finite-difference saddle conditions", saddle_conditions);
    add(Suite::Asymptotics, "Hessian closed form", hessian_closed_form);
    add(Suite::Asymptotics, "exponential and polynomial parts of D_{n,k}", dominant_parts);
    add(Suite::Asymptotics, "1/n convergence rate at k/n = 1", one_over_n_rate);
    add(Suite::Asymptotics, "c1 extrapolation self-consistent within 10%", c1_consistency);
    add(Suite::Appendix, "S_{1,0,k} = 1 and S_{2,0,2} = 7/3", s_base_values);
    out
}

/// Run a suite; checks run in parallel, results come back in listing order.
pub fn run(suite: Suite) -> Vec<CheckOutcome> {
    let mut outcomes: Vec<CheckOutcome> = checks(suite)
        .into_par_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => CheckOutcome { name, ok: true, detail },
            Err(detail) => CheckOutcome { name, ok: false, detail },
        })
        .collect();
    if matches!(suite, Suite::Appendix | Suite::All) {
        match appendix_bound_checks(200) {
            Ok(report) => outcomes.extend(report.checks.into_iter().map(|c| CheckOutcome {
                ok: c.holds,
                detail: match c.witness {
                    Some(w) => format!("{}; first violation (q, d, k) = {w:?}", c.detail),
                    None => c.detail,
                },
                name: c.name,
            })),
            Err(e) => outcomes.push(CheckOutcome {
                name: "double factorial sum bounds".into(),
                ok: false,
                detail: e.to_string(),
            }),
        }
    }
    outcomes
}
