//! Patchworks, cores and the patchwork route to `sg>0_k`.
//!
//! A patchwork is a set of loops and double edges whose union is a
//! multigraph. `P(z, w, u)` counts patchworks with `u` marking parts, `w`
//! edges and `z` vertices (weights `1/(2^m m! n!)`); `P_l(z, u)` is its
//! excess-`l` part and `P_l = P_0 P_l*` where `P_l*` counts patchworks in
//! which every part shares a vertex with another part.
//!
//! # Enumeration of `P_l*`
//!
//! Only the *support* of a patchwork matters for its weight: the set of
//! vertices carrying loops and the set of vertex pairs carrying parallel
//! edges. Summing over all multiplicities and all part families on a fixed
//! support factorizes: a loop slot with `λ` loops carries
//! `u^λ w^λ / (2^λ λ!)` and a pair slot with `μ` parallel edges carries
//! `cov(μ, u) w^μ / μ!`, where `cov` counts covers of the `μ` edges by
//! 2-subsets (edge covers of `K_μ`). Parts are isolated exactly when their
//! slot is the only slot on its vertices, so an isolated loop slot needs
//! `λ >= 2` and an isolated pair slot needs `μ >= 3`.
//!
//! With `d_v` slots on vertex `v`, the excess is at least
//! `sum_v (d_v - 1) + #isolated slots`. A vertex of `d_v >= 2` pays for
//! itself and at most `d_v` single-slot neighbours, and other single-slot
//! vertices pay at least `1/2`, so `n <= 3l`. The support search prunes
//! partial supports with `3 * sum_touched (d_v - 1) + #untouched > 3 l`,
//! which is the same amortization applied to a partial assignment. This is
//! stronger than the `n <= 4l` budget of the reduct argument (at most `2l`
//! vertices of degree `>= 3`, at most `l` removed degree-2 double edges
//! with 2 vertices each), and the enumerator asserts that the boundary
//! `n = 4l` contributes nothing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph_gf::{kernel_base, sgpos_series, tree_series, unicycle_series, ExcessIndexedSeries};
use crate::multigraph::{for_each_labeled_multigraph, patchworks_on, SmallMultigraph};
use crate::series::{
    binomial, double_factorial_odd, factorial, rat, rat_int, BivariateTruncated, ExactRational,
    TruncatedSeries,
};

/// Largest excess for which `P_l*` is enumerated with symbolic `u`.
pub const MAX_PATCHWORK_EXCESS: usize = 3;
/// Largest vertex count for which the support search runs without an
/// excess cap.
pub const MAX_UNCAPPED_VERTICES: usize = 6;

/// Polynomial in `u`, coefficients by increasing power.
pub type UPoly = Vec<ExactRational>;

fn upoly_trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn upoly_add(a: &[ExactRational], b: &[ExactRational]) -> UPoly {
    let mut out = vec![ExactRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    upoly_trim(out)
}

fn upoly_mul(a: &[ExactRational], b: &[ExactRational]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ExactRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    upoly_trim(out)
}

fn upoly_scale(a: &[ExactRational], c: &ExactRational) -> UPoly {
    upoly_trim(a.iter().map(|x| x * c).collect())
}

fn upoly_eval(a: &[ExactRational], u: &ExactRational) -> ExactRational {
    a.iter()
        .rev()
        .fold(ExactRational::zero(), |acc, c| acc * u + c)
}

/// Coefficient arithmetic for the slot series: exact rationals (a fixed
/// value of `u`) or polynomials in `u`.
trait SlotCoeff: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn constant(r: &ExactRational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn is_nil(&self) -> bool;
}

impl SlotCoeff for ExactRational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn constant(r: &ExactRational) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl SlotCoeff for UPoly {
    fn nil() -> Self {
        Vec::new()
    }
    fn unit() -> Self {
        vec![ExactRational::one()]
    }
    fn constant(r: &ExactRational) -> Self {
        upoly_trim(vec![r.clone()])
    }
    fn plus(&self, other: &Self) -> Self {
        upoly_add(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        upoly_mul(self, other)
    }
    fn is_nil(&self) -> bool {
        self.is_empty()
    }
}

/// Covers of `μ` labeled edges by 2-subsets, `u` marking the number of
/// 2-subsets: `sum_j (-1)^j C(μ, j) (1+u)^{C(μ-j, 2)}`.
pub fn cover_polynomial(mu: usize) -> UPoly {
    let mut out = Vec::new();
    for j in 0..=mu {
        let e = ((mu - j) * (mu - j).saturating_sub(1) / 2) as u64;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let c = BigInt::from(binomial(mu as u64, j as u64)) * sign;
        let term: UPoly = (0..=e)
            .map(|i| rat_int(BigInt::from(binomial(e, i)) * &c))
            .collect();
        out = upoly_add(&out, &term);
    }
    out
}

/// `cov(μ, -1) = (-1)^μ (1 - μ)`.
pub fn cover_count_at_minus_one(mu: usize) -> ExactRational {
    let v = 1 - mu as i64;
    rat(if mu % 2 == 0 { v } else { -v }, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum SlotKind {
    Loop,
    LoopIsolated,
    Pair,
    PairIsolated,
}

const SLOT_KINDS: [SlotKind; 4] = [
    SlotKind::Loop,
    SlotKind::LoopIsolated,
    SlotKind::Pair,
    SlotKind::PairIsolated,
];

/// Labeled supports on `n` vertices grouped by how many slots of each kind
/// they contain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportKey {
    pub n: usize,
    pub loops: usize,
    pub isolated_loops: usize,
    pub pairs: usize,
    pub isolated_pairs: usize,
}

impl SupportKey {
    fn exponent(&self, kind: SlotKind) -> usize {
        match kind {
            SlotKind::Loop => self.loops,
            SlotKind::LoopIsolated => self.isolated_loops,
            SlotKind::Pair => self.pairs,
            SlotKind::PairIsolated => self.isolated_pairs,
        }
    }

    /// Smallest excess of a patchwork on a support of this kind.
    pub fn min_excess(&self) -> i64 {
        let min_edges = self.loops + 2 * self.isolated_loops + 2 * self.pairs + 3 * self.isolated_pairs;
        min_edges as i64 - self.n as i64
    }
}

/// Counts of non-isolated supports by [`SupportKey`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportCensus {
    counts: BTreeMap<SupportKey, BigUint>,
}

impl SupportCensus {
    pub fn iter(&self) -> impl Iterator<Item = (&SupportKey, &BigUint)> {
        self.counts.iter()
    }

    pub fn max_vertices(&self) -> Option<usize> {
        self.counts.keys().map(|k| k.n).max()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

struct SupportSearch {
    n: usize,
    excess_cap: usize,
    degree: Vec<usize>,
    loops: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    counts: BTreeMap<SupportKey, u64>,
}

impl SupportSearch {
    fn feasible(&self) -> bool {
        let committed: usize = self.degree.iter().filter(|&&d| d > 0).map(|&d| d - 1).sum();
        let untouched = self.degree.iter().filter(|&&d| d == 0).count();
        3 * committed + untouched <= 3 * self.excess_cap
    }

    fn record(&mut self) {
        let mut key = SupportKey {
            n: self.n,
            loops: 0,
            isolated_loops: 0,
            pairs: 0,
            isolated_pairs: 0,
        };
        for v in 0..self.n {
            if self.loops[v] {
                if self.degree[v] == 1 {
                    key.isolated_loops += 1;
                } else {
                    key.loops += 1;
                }
            }
        }
        for &(a, b) in &self.pairs {
            if self.degree[a] == 1 && self.degree[b] == 1 {
                key.isolated_pairs += 1;
            } else {
                key.pairs += 1;
            }
        }
        if key.min_excess() <= self.excess_cap as i64 {
            *self.counts.entry(key).or_insert(0) += 1;
        }
    }

    /// Decide the slot at position `pos` of vertex `v`: position 0 is the
    /// loop at `v`, position `j > v` is the pair `(v, j)`.
    fn run(&mut self, v: usize, pos: usize) {
        if v == self.n {
            self.record();
            return;
        }
        if pos == self.n {
            if self.degree[v] > 0 {
                self.run(v + 1, v + 1);
            }
            return;
        }
        let next = pos + 1;
        // skip this slot
        self.run_checked(v, next);
        // take this slot
        if pos == v {
            self.loops[v] = true;
            self.degree[v] += 1;
            self.run_checked(v, next);
            self.degree[v] -= 1;
            self.loops[v] = false;
        } else {
            self.pairs.push((v, pos));
            self.degree[v] += 1;
            self.degree[pos] += 1;
            self.run_checked(v, next);
            self.degree[v] -= 1;
            self.degree[pos] -= 1;
            self.pairs.pop();
        }
    }

    fn run_checked(&mut self, v: usize, pos: usize) {
        if self.feasible() {
            self.run(v, pos);
        }
    }
}

/// Supports on exactly `n` labeled vertices whose patchworks can have
/// excess at most `excess_cap`.
pub fn support_census_at(n: usize, excess_cap: usize) -> SupportCensus {
    let mut search = SupportSearch {
        n,
        excess_cap,
        degree: vec![0; n],
        loops: vec![false; n],
        pairs: Vec::new(),
        counts: BTreeMap::new(),
    };
    if n == 0 {
        // the empty support is the empty patchwork, which has excess 0 and
        // no parts; it belongs to P_0 and not to the non-isolated family
        return SupportCensus::default();
    }
    if search.feasible() {
        search.run(0, 0);
    }
    SupportCensus {
        counts: search
            .counts
            .into_iter()
            .map(|(k, c)| (k, BigUint::from(c)))
            .collect(),
    }
}

/// Slot series truncated at `w^{w_max}` with memoized powers.
struct SlotSeries<C: SlotCoeff> {
    w_max: usize,
    base: BTreeMap<SlotKind, Vec<C>>,
    powers: BTreeMap<(SlotKind, usize), Vec<C>>,
}

impl<C: SlotCoeff> SlotSeries<C> {
    fn new(w_max: usize, lambda_term: impl Fn(usize) -> C, mu_term: impl Fn(usize) -> C) -> Self {
        let mut base = BTreeMap::new();
        for kind in SLOT_KINDS {
            let start = match kind {
                SlotKind::Loop => 1,
                SlotKind::LoopIsolated => 2,
                SlotKind::Pair => 2,
                SlotKind::PairIsolated => 3,
            };
            let series = (0..=w_max)
                .map(|j| {
                    if j < start {
                        C::nil()
                    } else if matches!(kind, SlotKind::Loop | SlotKind::LoopIsolated) {
                        lambda_term(j)
                    } else {
                        mu_term(j)
                    }
                })
                .collect();
            base.insert(kind, series);
        }
        Self {
            w_max,
            base,
            powers: BTreeMap::new(),
        }
    }

    fn mul(&self, a: &[C], b: &[C]) -> Vec<C> {
        let mut out = vec![C::nil(); self.w_max + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_nil() {
                continue;
            }
            for (j, y) in b[..=self.w_max - i].iter().enumerate() {
                if !y.is_nil() {
                    out[i + j] = out[i + j].plus(&x.times(y));
                }
            }
        }
        out
    }

    fn power(&mut self, kind: SlotKind, e: usize) -> Vec<C> {
        if let Some(p) = self.powers.get(&(kind, e)) {
            return p.clone();
        }
        let p = if e == 0 {
            let mut one = vec![C::nil(); self.w_max + 1];
            one[0] = C::unit();
            one
        } else {
            let prev = self.power(kind, e - 1);
            self.mul(&prev, &self.base[&kind])
        };
        self.powers.insert((kind, e), p.clone());
        p
    }

    fn product(&mut self, key: &SupportKey) -> Vec<C> {
        let mut acc = self.power(SLOT_KINDS[0], key.exponent(SLOT_KINDS[0]));
        for kind in &SLOT_KINDS[1..] {
            let p = self.power(*kind, key.exponent(*kind));
            acc = self.mul(&acc, &p);
        }
        acc
    }
}

fn loop_term_symbolic(lambda: usize) -> UPoly {
    // u^λ / (2^λ λ!)
    let mut p = vec![ExactRational::zero(); lambda + 1];
    p[lambda] = ExactRational::new(
        BigInt::one(),
        BigInt::from(2u32).pow(lambda as u32) * BigInt::from(factorial(lambda as u64)),
    );
    p
}

fn pair_term_symbolic(mu: usize) -> UPoly {
    let inv = ExactRational::new(BigInt::one(), BigInt::from(factorial(mu as u64)));
    upoly_scale(&cover_polynomial(mu), &inv)
}

fn loop_term_at(lambda: usize, u: &ExactRational) -> ExactRational {
    upoly_eval(&loop_term_symbolic(lambda), u)
}

fn pair_term_at(mu: usize, u: &ExactRational) -> ExactRational {
    let cov = if *u == rat(-1, 1) {
        cover_count_at_minus_one(mu)
    } else {
        upoly_eval(&cover_polynomial(mu), u)
    };
    cov / rat_int(BigInt::from(factorial(mu as u64)))
}

/// `P_l*(z, u)` as a polynomial in `z` with coefficients in `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchworkPolynomial {
    excess: usize,
    coeffs: Vec<UPoly>,
}

impl PatchworkPolynomial {
    pub fn excess(&self) -> usize {
        self.excess
    }

    /// Coefficient polynomials in `u`, indexed by the power of `z`.
    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize, j: usize) -> ExactRational {
        self.coeffs
            .get(n)
            .and_then(|p| p.get(j))
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn z_degree(&self) -> usize {
        self.coeffs.iter().rposition(|p| !p.is_empty()).unwrap_or(0)
    }

    /// Specialize `u` and return the `z`-series truncated at `order`.
    pub fn eval_u(&self, u: &ExactRational, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(order, |n| {
            self.coeffs
                .get(n)
                .map(|p| upoly_eval(p, u))
                .unwrap_or_else(ExactRational::zero)
        })
    }
}

fn census_to_star<C: SlotCoeff>(
    census: &SupportCensus,
    excess: usize,
    slots: &mut SlotSeries<C>,
    n_max: usize,
) -> Vec<C> {
    let mut out = vec![C::nil(); n_max + 1];
    for (key, count) in census.iter() {
        if key.n > n_max || key.min_excess() > excess as i64 {
            continue;
        }
        let series = slots.product(key);
        let c = &series[key.n + excess];
        if c.is_nil() {
            continue;
        }
        let weight = ExactRational::new(
            BigInt::from(count.clone()),
            BigInt::from(factorial(key.n as u64)),
        );
        out[key.n] = out[key.n].plus(&c.times(&C::constant(&weight)));
    }
    out
}

/// Non-isolated patchworks of excess `excess` on at most `n_max` vertices.
fn star_census(excess: usize, n_max: usize) -> Vec<SupportCensus> {
    (0..=n_max).map(|n| support_census_at(n, excess)).collect()
}

/// `P_l*(z, u)` by exhaustive support search over `n = 0..=4l` vertices.
pub fn enumerate_patchworks_no_isolated(excess: usize) -> Result<PatchworkPolynomial> {
    enumerate_patchworks_no_isolated_with_bound(excess, 4 * excess)
}

/// As [`enumerate_patchworks_no_isolated`] with an explicit vertex bound;
/// raising the bound above `4l` must not change the result.
pub fn enumerate_patchworks_no_isolated_with_bound(
    excess: usize,
    n_bound: usize,
) -> Result<PatchworkPolynomial> {
    if excess > MAX_PATCHWORK_EXCESS {
        return Err(Error::CostGuard {
            what: "patchwork excess",
            value: excess as u64,
            cap: MAX_PATCHWORK_EXCESS as u64,
        });
    }
    if excess == 0 {
        return Ok(PatchworkPolynomial {
            excess,
            coeffs: vec![vec![ExactRational::one()]],
        });
    }
    let censuses = star_census(excess, n_bound);
    let mut slots = SlotSeries::<UPoly>::new(n_bound + excess, loop_term_symbolic, pair_term_symbolic);
    let mut coeffs = vec![Vec::new(); n_bound + 1];
    for census in &censuses {
        let part = census_to_star(census, excess, &mut slots, n_bound);
        for (dst, c) in coeffs.iter_mut().zip(part) {
            *dst = upoly_add(dst, &c);
        }
    }
    if n_bound >= 4 * excess && !coeffs[4 * excess].is_empty() {
        return Err(Error::IdentityViolation(format!(
            "non-isolated patchwork of excess {excess} found on {} vertices",
            4 * excess
        )));
    }
    let deg = coeffs.iter().rposition(|p| !p.is_empty()).unwrap_or(0);
    coeffs.truncate(deg + 1);
    Ok(PatchworkPolynomial { excess, coeffs })
}

/// `P_l*(z, u)` at a fixed `u` for every `l <= excess_max`, truncated at
/// `z^n_max`. Needs `excess_max <= 3` or `n_max <= 6`.
pub fn patchwork_star_at(
    excess_max: usize,
    n_max: usize,
    u: &ExactRational,
) -> Result<Vec<TruncatedSeries>> {
    if excess_max > MAX_PATCHWORK_EXCESS && n_max > MAX_UNCAPPED_VERTICES {
        return Err(Error::CostGuard {
            what: "patchwork vertices beyond the excess cap",
            value: n_max as u64,
            cap: MAX_UNCAPPED_VERTICES as u64,
        });
    }
    let n_cap = n_max.min(4 * excess_max);
    let censuses = star_census(excess_max, n_cap);
    let u_val = u.clone();
    let u_val2 = u.clone();
    let mut slots = SlotSeries::<ExactRational>::new(
        n_cap + excess_max,
        move |l| loop_term_at(l, &u_val),
        move |m| pair_term_at(m, &u_val2),
    );
    let mut out = Vec::with_capacity(excess_max + 1);
    out.push(TruncatedSeries::one(n_max));
    for excess in 1..=excess_max {
        let mut acc = vec![ExactRational::zero(); n_max + 1];
        for census in &censuses {
            let part = census_to_star(census, excess, &mut slots, n_cap);
            for (dst, c) in acc.iter_mut().zip(part) {
                *dst += c;
            }
        }
        out.push(TruncatedSeries::from_coeffs(acc));
    }
    Ok(out)
}

/// `P_0(z, u) = exp(u z/2 + u z^2/4)` with coefficients in `u`.
pub fn isolated_patchworks(order: usize) -> Vec<UPoly> {
    // exp of g(z) = u (z/2 + z^2/4): n e_n = sum_{i=1,2} i g_i e_{n-i}
    let g = [
        Vec::new(),
        vec![ExactRational::zero(), rat(1, 2)],
        vec![ExactRational::zero(), rat(1, 4)],
    ];
    let mut e: Vec<UPoly> = vec![vec![ExactRational::one()]];
    for n in 1..=order {
        let mut acc = Vec::new();
        for i in 1..=2.min(n) {
            let term = upoly_scale(&upoly_mul(&g[i], &e[n - i]), &rat(i as i64, 1));
            acc = upoly_add(&acc, &term);
        }
        e.push(upoly_scale(&acc, &rat(1, n as i64)));
    }
    e
}

fn z_poly_mul(a: &[UPoly], b: &[UPoly], order: usize) -> Vec<UPoly> {
    let mut out = vec![Vec::new(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = upoly_add(&out[i + j], &upoly_mul(x, y));
        }
    }
    out
}

/// All patchworks of excess `excess` on `n <= z_order` vertices by brute
/// force over labeled multigraphs, as `z`-coefficients in `u`.
/// With `non_isolated_only`, keep patchworks without isolated parts.
pub fn patchworks_brute_force(
    excess: usize,
    z_order: usize,
    non_isolated_only: bool,
) -> Result<Vec<UPoly>> {
    if z_order + excess > 6 || z_order > 4 {
        return Err(Error::CostGuard {
            what: "brute-force patchwork edges",
            value: (z_order + excess) as u64,
            cap: 6,
        });
    }
    let mut out = vec![Vec::new(); z_order + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        let m = n + excess;
        let mut by_parts: BTreeMap<usize, u64> = BTreeMap::new();
        for_each_labeled_multigraph(n, m, |g: &SmallMultigraph| {
            if n == 0 {
                if m == 0 {
                    *by_parts.entry(0).or_insert(0) += 1;
                }
                return;
            }
            for (parts, isolated) in patchworks_on(g) {
                if non_isolated_only && isolated > 0 {
                    continue;
                }
                *by_parts.entry(parts).or_insert(0) += 1;
            }
        });
        let denom = BigInt::from(2u32).pow(m as u32)
            * BigInt::from(factorial(m as u64))
            * BigInt::from(factorial(n as u64));
        let mut poly = Vec::new();
        for (parts, count) in by_parts {
            let mut mono = vec![ExactRational::zero(); parts + 1];
            mono[parts] = ExactRational::new(BigInt::from(count), denom.clone());
            poly = upoly_add(&poly, &mono);
        }
        *slot = poly;
    }
    Ok(out)
}

/// Compare the full brute-force enumeration of excess-`l` patchworks with
/// `P_0 * P_l*` up to `z^z_order`.
pub fn patchwork_factorization_check(excess: usize, z_order: usize) -> Result<bool> {
    if excess > 2 {
        return Err(Error::CostGuard {
            what: "full patchwork enumeration excess",
            value: excess as u64,
            cap: 2,
        });
    }
    let full = patchworks_brute_force(excess, z_order, false)?;
    let star = enumerate_patchworks_no_isolated(excess)?;
    let product = z_poly_mul(&isolated_patchworks(z_order), star.coeffs(), z_order);
    Ok((0..=z_order).all(|n| full[n] == product[n]))
}

/// A multigraph of minimum degree at least 3 together with the number of
/// labeled multigraphs (edge labels and orientations) with the same shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDegreeThreeEntry {
    pub graph: SmallMultigraph,
    pub labeled_count: BigUint,
}

/// All multigraphs (up to edge labels and orientations, on labeled
/// vertices) with minimum degree at least 3 and excess at most `k`.
/// The search is not told about the handshake bound: it scans
/// `n <= 2k + 2` vertices and `m <= n + k` edges.
pub fn mindeg3_multigraphs(k: usize) -> Result<Vec<MinDegreeThreeEntry>> {
    if k == 0 {
        return Err(Error::Domain("excess bound must be at least 1".into()));
    }
    if k > 2 {
        return Err(Error::CostGuard {
            what: "min-degree-3 multigraph excess",
            value: k as u64,
            cap: 2,
        });
    }
    let mut out = Vec::new();
    for n in 1..=2 * k + 2 {
        let mut slots = Vec::new();
        for v in 0..n {
            slots.push((v, v));
            for w in v + 1..n {
                slots.push((v, w));
            }
        }
        for m in 1..=n + k {
            let mut mult = vec![0usize; slots.len()];
            let mut degree = vec![0usize; n];
            mindeg3_rec(&slots, 0, m, &mut mult, &mut degree, &mut |mult| {
                out.push(mindeg3_entry(n, &slots, mult));
            });
        }
    }
    Ok(out)
}

fn mindeg3_rec(
    slots: &[(usize, usize)],
    idx: usize,
    remaining: usize,
    mult: &mut Vec<usize>,
    degree: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if idx == slots.len() {
        if remaining == 0 && degree.iter().all(|&d| d >= 3) {
            emit(mult);
        }
        return;
    }
    let (a, b) = slots[idx];
    // once the last slot of vertex a is decided its degree is final
    let closes_vertex = idx + 1 == slots.len() || slots[idx + 1].0 != a;
    for c in 0..=remaining {
        mult[idx] = c;
        if a == b {
            degree[a] += 2 * c;
        } else {
            degree[a] += c;
            degree[b] += c;
        }
        if !closes_vertex || degree[a] >= 3 {
            mindeg3_rec(slots, idx + 1, remaining - c, mult, degree, emit);
        }
        if a == b {
            degree[a] -= 2 * c;
        } else {
            degree[a] -= c;
            degree[b] -= c;
        }
    }
    mult[idx] = 0;
}

fn mindeg3_entry(n: usize, slots: &[(usize, usize)], mult: &[usize]) -> MinDegreeThreeEntry {
    let mut endpoints = Vec::new();
    let mut denom = BigUint::one();
    let mut non_loops = 0u32;
    for (&(a, b), &c) in slots.iter().zip(mult) {
        for _ in 0..c {
            endpoints.push((a + 1, b + 1));
        }
        denom *= factorial(c as u64);
        if a != b {
            non_loops += c as u32;
        }
    }
    let m = endpoints.len() as u64;
    let labeled_count = factorial(m) * BigUint::from(2u32).pow(non_loops) / denom;
    MinDegreeThreeEntry {
        graph: SmallMultigraph::new(n, &endpoints).expect("endpoints in range"),
        labeled_count,
    }
}

fn substitute_z_exp_x(p: &TruncatedSeries, x_order: usize) -> BivariateTruncated {
    // z^n -> z^n e^{n x}: slice j holds n^j / j! p_n
    BivariateTruncated::from_slices(
        (0..=x_order)
            .map(|j| {
                let jf = rat_int(BigInt::from(factorial(j as u64)));
                TruncatedSeries::from_fn(p.order(), |n| {
                    if p.coeff_ref(n).is_zero() {
                        return ExactRational::zero();
                    }
                    p.coeff(n) * rat_int(BigInt::from(n).pow(j as u32)) / &jf
                })
            })
            .collect(),
    )
}

/// The `l`-th term of the core expansion
/// `(2(k-l)-1)!! [x^{2(k-l)}] P_l(z e^x, -1) (1 - z h(x))^{-(k-l+1/2)}`
/// for every `0 <= l <= k`, given `P_l*(z, -1)`.
pub fn core_terms(k: usize, order: usize, stars: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    if stars.len() <= k {
        return Err(Error::OutOfRange {
            index: k,
            max: stars.len().saturating_sub(1),
        });
    }
    let p0 = TruncatedSeries::from_fn(order, |n| match n {
        1 => rat(-1, 2),
        2 => rat(-1, 4),
        _ => ExactRational::zero(),
    })
    .exp()?;
    let z = TruncatedSeries::monomial(ExactRational::one(), 1, order);
    let mut out = Vec::with_capacity(k + 1);
    for (ell, star) in stars.iter().enumerate().take(k + 1) {
        let r = k - ell;
        let x_order = 2 * r;
        let p_ell = p0.mul(&star.truncate(order));
        let substituted = substitute_z_exp_x(&p_ell, x_order);
        let exponent = -rat(2 * r as i64 + 1, 2);
        let denom = kernel_base(&z, x_order).pow_rational(&exponent)?;
        let slice = substituted.mul(&denom).extract(x_order)?;
        out.push(slice.scale(&rat_int(BigInt::from(double_factorial_odd(r as u64)))));
    }
    Ok(out)
}

/// `Core_k(z)` for `0 <= k <= k_max`: graphs of minimum degree at least 2.
pub fn core_series(n_max: usize, k_max: usize) -> Result<ExcessIndexedSeries> {
    let stars = patchwork_star_at(k_max, n_max, &rat(-1, 1))?;
    let entries = (0..=k_max)
        .map(|k| {
            let terms = core_terms(k, n_max, &stars)?;
            Ok(terms
                .iter()
                .fold(TruncatedSeries::zero(n_max), |acc, t| &acc + t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExcessIndexedSeries::new(0, entries))
}

/// `MCore_k(z) = (2k-1)!! [x^{2k}] (1 - z h(x))^{-(k+1/2)}`: multigraphs of
/// minimum degree at least 2 with multigraph weights.
pub fn multicore_series(k: usize, order: usize) -> Result<TruncatedSeries> {
    let z = TruncatedSeries::monomial(ExactRational::one(), 1, order);
    let exponent = -rat(2 * k as i64 + 1, 2);
    let slice = kernel_base(&z, 2 * k).pow_rational(&exponent)?.extract(2 * k)?;
    Ok(slice.scale(&rat_int(BigInt::from(double_factorial_odd(k as u64)))))
}

/// `sg>0_k = e^{-V} Core_k(T)`, checked against the exponential route.
pub fn sgpos_via_patchworks(k: usize, order: usize) -> Result<TruncatedSeries> {
    let cores = core_series(order, k)?;
    let t = tree_series(order);
    let (_, v) = unicycle_series(order);
    let composed = cores.get(k as i64).unwrap().compose(&t)?;
    let result = composed.mul(&(-&v).exp()?);
    let reference = sgpos_series(k, order)?;
    if reference.get(k as i64).unwrap() != &result {
        return Err(Error::IdentityViolation(format!(
            "patchwork and exponential routes disagree for sg>0_{k} at order {order}"
        )));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gf::{mgpos_series, GfPipeline};

    /// `P_l(z, u)` from the closed form
    /// `P(z, w, u) = e^{-z} sum_n A^{C(n,2)} B^n z^n / n!` with
    /// `A = e^{-w} sum_μ (1+u)^{C(μ,2)} w^μ/μ!` and `B = e^{u w/2}`.
    fn closed_form_patchworks(excess: usize, z_order: usize) -> Vec<UPoly> {
        let w_max = z_order + excess;
        let wmul = |a: &[UPoly], b: &[UPoly]| -> Vec<UPoly> {
            let mut out = vec![Vec::new(); w_max + 1];
            for i in 0..=w_max {
                for j in 0..=w_max - i {
                    out[i + j] = upoly_add(&out[i + j], &upoly_mul(&a[i], &b[j]));
                }
            }
            out
        };
        let exp_minus_w: Vec<UPoly> = (0..=w_max)
            .map(|j| {
                let s = if j % 2 == 0 { 1 } else { -1 };
                vec![rat(s, 1) / rat_int(BigInt::from(factorial(j as u64)))]
            })
            .collect();
        let sum_mu: Vec<UPoly> = (0..=w_max)
            .map(|mu| {
                let e = (mu * mu.saturating_sub(1) / 2) as u64;
                let f = rat_int(BigInt::from(factorial(mu as u64)));
                (0..=e)
                    .map(|i| rat_int(BigInt::from(binomial(e, i))) / &f)
                    .collect()
            })
            .collect();
        let a = wmul(&exp_minus_w, &sum_mu);
        let b: Vec<UPoly> = (0..=w_max).map(|j| loop_term_symbolic(j)).collect();
        let mut one = vec![Vec::new(); w_max + 1];
        one[0] = vec![ExactRational::one()];
        // inner[n] = A^{C(n,2)} B^n / n! as a w-series
        let mut inner = Vec::with_capacity(z_order + 1);
        for n in 0..=z_order {
            let mut acc = one.clone();
            for _ in 0..n * n.saturating_sub(1) / 2 {
                acc = wmul(&acc, &a);
            }
            for _ in 0..n {
                acc = wmul(&acc, &b);
            }
            let inv = rat(1, 1) / rat_int(BigInt::from(factorial(n as u64)));
            inner.push(acc.iter().map(|c| upoly_scale(c, &inv)).collect::<Vec<_>>());
        }
        // e^{-z} adds vertices without edges
        let mut out = vec![Vec::new(); z_order + 1];
        for n in 0..=z_order {
            for i in 0..=n {
                let s = if i % 2 == 0 { 1 } else { -1 };
                let c = rat(s, 1) / rat_int(BigInt::from(factorial(i as u64)));
                out[n] = upoly_add(&out[n], &upoly_scale(&inner[n - i][n + excess], &c));
            }
        }
        out
    }

    #[test]
    fn cover_polynomials() {
        assert_eq!(cover_polynomial(0), vec![rat(1, 1)]);
        assert!(cover_polynomial(1).is_empty());
        assert_eq!(cover_polynomial(2), vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(cover_polynomial(3), vec![rat(0, 1), rat(0, 1), rat(3, 1), rat(1, 1)]);
        for mu in 0..8 {
            assert_eq!(upoly_eval(&cover_polynomial(mu), &rat(-1, 1)), cover_count_at_minus_one(mu));
        }
    }

    #[test]
    fn cover_polynomial_matches_enumeration() {
        // edge covers of K_μ by brute force over subsets of its edges
        for mu in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..mu)
                .flat_map(|i| (i + 1..mu).map(move |j| (i, j)))
                .collect();
            let mut counts = vec![0i64; pairs.len() + 1];
            for subset in 0u32..(1 << pairs.len()) {
                let mut seen = 0u32;
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if subset >> i & 1 == 1 {
                        seen |= 1 << a | 1 << b;
                    }
                }
                if seen == (1 << mu) - 1 {
                    counts[subset.count_ones() as usize] += 1;
                }
            }
            let expected = upoly_trim(counts.iter().map(|&c| rat(c, 1)).collect());
            assert_eq!(cover_polynomial(mu), expected, "mu={mu}");
        }
    }

    #[test]
    fn star_of_excess_zero_is_one() {
        let p = enumerate_patchworks_no_isolated(0).unwrap();
        assert_eq!(p.coeffs(), &[vec![rat(1, 1)]]);
    }

    #[test]
    fn star_of_excess_one() {
        let p = enumerate_patchworks_no_isolated(1).unwrap();
        // two loops on one vertex
        assert_eq!(p.coeff(1, 2), rat(1, 8));
        assert_eq!(p.coeffs()[1], vec![rat(0, 1), rat(0, 1), rat(1, 8)]);
        assert!(p.z_degree() <= 3);
        let wider = enumerate_patchworks_no_isolated_with_bound(1, 6).unwrap();
        assert_eq!(wider, p);
    }

    #[test]
    fn star_matches_closed_form() {
        let p0 = isolated_patchworks(9);
        for excess in 1..=2 {
            let star = enumerate_patchworks_no_isolated(excess).unwrap();
            let closed = closed_form_patchworks(excess, 4 * excess);
            let product = z_poly_mul(&p0, star.coeffs(), 4 * excess);
            assert_eq!(product, closed, "excess {excess}");
        }
    }

    #[test]
    fn isolated_family_closed_form() {
        let closed = closed_form_patchworks(0, 5);
        assert_eq!(isolated_patchworks(5), closed);
        // u z^2: the two single double edges and the two-loop pair
        assert_eq!(closed[2][1], rat(1, 4));
    }

    #[test]
    fn brute_force_excess_zero() {
        let bf = patchworks_brute_force(0, 4, false).unwrap();
        assert_eq!(bf, isolated_patchworks(4));
        let star = enumerate_patchworks_no_isolated(1).unwrap();
        let bf_star = patchworks_brute_force(1, 4, true).unwrap();
        for (n, p) in bf_star.iter().enumerate() {
            assert_eq!(p, star.coeffs().get(n).unwrap_or(&Vec::new()), "n={n}");
        }
    }

    #[test]
    fn factorization_small() {
        assert!(patchwork_factorization_check(0, 4).unwrap());
        assert!(patchwork_factorization_check(1, 3).unwrap());
        assert!(patchwork_factorization_check(3, 1).is_err());
    }

    #[test]
    fn specialized_star_matches_symbolic() {
        let stars = patchwork_star_at(3, 12, &rat(-1, 1)).unwrap();
        for excess in 1..=3 {
            let sym = enumerate_patchworks_no_isolated(excess).unwrap();
            assert_eq!(stars[excess], sym.eval_u(&rat(-1, 1), 12), "excess {excess}");
        }
        assert!(patchwork_star_at(5, 8, &rat(-1, 1)).is_err());
    }

    #[test]
    fn core_small_values() {
        let cores = core_series(6, 2).unwrap();
        assert_eq!(cores.count(3, 0), rat(1, 1));
        assert_eq!(cores.count(5, 0), rat(12, 1));
        assert_eq!(cores.count(4, 2), rat(1, 1));
        assert!(cores.all_counts_nonnegative_integers());
    }

    #[test]
    fn multicore_matches_majorant_relation() {
        let order = 12;
        let t = tree_series(order);
        let (mv, _) = unicycle_series(order);
        for k in 0..=2 {
            let lhs = multicore_series(k, order).unwrap().compose(&t).unwrap();
            let rhs = mgpos_series(k, order).unwrap().mul(&mv.exp().unwrap());
            assert_eq!(lhs, rhs, "k={k}");
        }
    }

    #[test]
    fn patchwork_route_small() {
        assert!(sgpos_via_patchworks(1, 10).is_ok());
        let pipe = GfPipeline::new(8, 2).unwrap();
        let via = sgpos_via_patchworks(2, 8).unwrap();
        assert_eq!(&via, pipe.sgpos().get(2).unwrap());
    }

    #[test]
    fn mindeg3_small() {
        let found = mindeg3_multigraphs(1).unwrap();
        assert!(found.iter().all(|e| e.graph.n() <= 2 && e.graph.m() <= 3));
        let double_loop = SmallMultigraph::new(1, &[(1, 1), (1, 1)]).unwrap();
        assert!(found.iter().any(|e| e.graph == double_loop));
        let triple = SmallMultigraph::new(2, &[(1, 2), (1, 2), (1, 2)]).unwrap();
        let entry = found.iter().find(|e| e.graph == triple).unwrap();
        assert_eq!(entry.labeled_count, BigUint::from(8u32));
        assert!(mindeg3_multigraphs(0).is_err());
    }
}
