//! Generating functions of graph families graded by excess.
//!
//! Conventions: a graph family `F` has `F(z, w) = sum w^m z^n / n!` and its
//! excess-`k` part is `F_k(z) = [y^k] F(z/y, y)`, so `n! [z^n] F_k` counts
//! members with `n` vertices and `n + k` edges.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{
    binomial, double_factorial_odd, excess_edge_kernel, factorial, rat, rat_int,
    BivariateTruncated, ExactRational, TruncatedSeries,
};

/// `SG(z, w) = sum_n (1+w)^{C(n,2)} z^n/n!`, one `w`-polynomial per `n`.
///
/// Every slice is truncated at the common `w`-degree `n_max + k_max`. A
/// uniform degree is what makes the logarithm exact: the product of slices
/// `s` and `n-s` feeds degree `n + k` from arbitrarily high degrees of the
/// smaller slice, so a per-slice cap of `n + k_max` would drop terms.
#[derive(Clone, Debug)]
pub struct GradedGraphGF {
    n_max: usize,
    w_degree: usize,
    slices: Vec<Vec<BigUint>>,
}

impl GradedGraphGF {
    pub fn new(n_max: usize, k_max: i64) -> Self {
        let w_degree = (n_max as i64 + k_max).max(0) as usize;
        let slices = (0..=n_max)
            .map(|n| {
                let edges = (n * n.saturating_sub(1) / 2) as u64;
                (0..=w_degree as u64).map(|j| binomial(edges, j)).collect()
            })
            .collect();
        Self {
            n_max,
            w_degree,
            slices,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn w_degree(&self) -> usize {
        self.w_degree
    }

    /// Number of graphs with `n` vertices and `m` edges.
    pub fn count(&self, n: usize, m: usize) -> &BigUint {
        &self.slices[n][m]
    }

    /// The same series with `w` as the slicing variable.
    pub fn to_bivariate(&self) -> BivariateTruncated {
        let inv_fact: Vec<ExactRational> = (0..=self.n_max)
            .map(|n| BigRational::new(BigInt::one(), BigInt::from(factorial(n as u64))))
            .collect();
        BivariateTruncated::from_slices(
            (0..=self.w_degree)
                .map(|j| {
                    TruncatedSeries::from_fn(self.n_max, |n| {
                        rat_int(BigInt::from(self.slices[n][j].clone())) * &inv_fact[n]
                    })
                })
                .collect(),
        )
    }
}

/// A family of `z`-series indexed by excess `k_min..=k_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessIndexedSeries {
    k_min: i64,
    entries: Vec<TruncatedSeries>,
}

impl ExcessIndexedSeries {
    pub fn new(k_min: i64, entries: Vec<TruncatedSeries>) -> Self {
        assert!(!entries.is_empty());
        Self { k_min, entries }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.entries.len() as i64 - 1
    }

    pub fn order(&self) -> usize {
        self.entries.iter().map(TruncatedSeries::order).min().unwrap()
    }

    pub fn get(&self, k: i64) -> Option<&TruncatedSeries> {
        if k < self.k_min {
            return None;
        }
        self.entries.get((k - self.k_min) as usize)
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    /// `n! [z^n] F_k` as an exact rational (an integer for graph families).
    pub fn count(&self, n: usize, k: i64) -> ExactRational {
        self.get(k)
            .map(|s| s.egf_count(n))
            .unwrap_or_else(ExactRational::zero)
    }

    /// `n! [z^n] F_k` as an integer, or `None` if it is not integral.
    pub fn integer_count(&self, n: usize, k: i64) -> Option<BigInt> {
        let c = self.count(n, k);
        c.is_integer().then(|| c.to_integer())
    }

    pub fn all_counts_nonnegative_integers(&self) -> bool {
        self.entries.iter().all(TruncatedSeries::has_nonnegative_integer_counts)
    }
}

/// `T(z)`, the EGF of rooted labeled trees: `[z^n] T = n^{n-1}/n!`.
pub fn tree_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            return ExactRational::zero();
        }
        let num = BigUint::from(n as u64).pow(n as u32 - 1);
        BigRational::new(num.into(), factorial(n as u64).into())
    })
}

/// Multi-unicycles `MV = 1/2 log(1/(1-T))` and unicycles `V = MV - T/2 - T^2/4`.
pub fn unicycle_series(order: usize) -> (TruncatedSeries, TruncatedSeries) {
    let t = tree_series(order);
    let one_minus_t = &TruncatedSeries::one(order) - &t;
    let mv = one_minus_t
        .log()
        .expect("1 - T has constant term 1")
        .scale(&rat(-1, 2));
    let v = &(&mv - &t.scale(&rat(1, 2))) - &t.mul(&t).scale(&rat(1, 4));
    (mv, v)
}

/// `CSG_k(z)` for `-1 <= k <= k_max`, truncated at `z^n_max`, through
/// `CSG(z, w) = log SG(z, w)`.
pub fn connected_series(n_max: usize, k_max: i64) -> Result<ExcessIndexedSeries> {
    if n_max == 0 || k_max < -1 {
        return Err(Error::Domain(format!(
            "connected_series needs n_max >= 1 and k_max >= -1 (got {n_max}, {k_max})"
        )));
    }
    let sg = GradedGraphGF::new(n_max, k_max);
    let csg = sg.to_bivariate().log()?;
    let entries = (-1..=k_max)
        .map(|k| {
            TruncatedSeries::from_fn(n_max, |n| {
                let m = n as i64 + k;
                if m < 0 {
                    ExactRational::zero()
                } else {
                    csg.coeff(m as usize, n)
                }
            })
        })
        .collect();
    Ok(ExcessIndexedSeries::new(-1, entries))
}

/// Connected labeled graph counts `c(n, m)` from the recurrence anchored on
/// the component of vertex 1:
/// `c(n,m) = g(n,m) - sum_{s<n} C(n-1,s-1) sum_j c(s,j) g(n-s,m-j)` with
/// `g(n,m) = C(C(n,2), m)`.
#[derive(Clone, Debug)]
pub struct AnchoredRecurrence {
    n_max: usize,
    m_max: usize,
    table: Vec<Vec<BigInt>>,
}

impl AnchoredRecurrence {
    pub fn new(n_max: usize, m_max: usize) -> Self {
        let edges = |n: usize| n * n.saturating_sub(1) / 2;
        let graphs: Vec<Vec<BigInt>> = (0..=n_max)
            .map(|n| {
                (0..=m_max)
                    .map(|m| BigInt::from(binomial(edges(n) as u64, m as u64)))
                    .collect()
            })
            .collect();
        let mut table = vec![vec![BigInt::zero(); m_max + 1]; n_max + 1];
        for n in 1..=n_max {
            let binoms: Vec<BigInt> = (0..n)
                .map(|i| BigInt::from(binomial(n as u64 - 1, i as u64)))
                .collect();
            let m_top = edges(n).min(m_max);
            for m in (n - 1).min(m_top + 1)..=m_top {
                let mut acc = graphs[n][m].clone();
                for s in 1..n {
                    let rest = n - s;
                    let lo = (s - 1).max(m.saturating_sub(edges(rest)));
                    let hi = edges(s).min(m);
                    if lo > hi {
                        continue;
                    }
                    let mut inner = BigInt::zero();
                    for j in lo..=hi {
                        let c = &table[s][j];
                        if !c.is_zero() {
                            inner += c * &graphs[rest][m - j];
                        }
                    }
                    acc -= inner * &binoms[s - 1];
                }
                table[n][m] = acc;
            }
        }
        Self {
            n_max,
            m_max,
            table,
        }
    }

    pub fn count(&self, n: usize, m: usize) -> Result<BigInt> {
        let edges = n * n.saturating_sub(1) / 2;
        if m > edges {
            return Err(Error::OutOfRange { index: m, max: edges });
        }
        if n > self.n_max || m > self.m_max {
            return Err(Error::OutOfRange {
                index: n.max(m),
                max: self.n_max.min(self.m_max),
            });
        }
        Ok(self.table[n][m].clone())
    }
}

/// One-shot `c(n, m)` through [`AnchoredRecurrence`].
pub fn connected_recurrence_count(n: usize, m: usize) -> Result<BigInt> {
    let edges = n * n.saturating_sub(1) / 2;
    if m > edges {
        return Err(Error::OutOfRange { index: m, max: edges });
    }
    AnchoredRecurrence::new(n, m).count(n, m)
}

/// `sg>0_l(z)` for `0 <= l <= k_max`: graphs of excess `l` all of whose
/// components have positive excess, from `sum_l sg>0_l y^l = exp(sum_{k>0} CSG_k y^k)`.
pub fn sgpos_from_csg(csg: &ExcessIndexedSeries, k_max: usize) -> Result<ExcessIndexedSeries> {
    let order = csg.order();
    let mut slices = vec![TruncatedSeries::zero(order)];
    for k in 1..=k_max as i64 {
        let entry = csg.get(k).ok_or(Error::OutOfRange {
            index: k as usize,
            max: csg.k_max().max(0) as usize,
        })?;
        slices.push(entry.truncate(order));
    }
    let e = BivariateTruncated::from_slices(slices).exp()?;
    Ok(ExcessIndexedSeries::new(0, e.slices().to_vec()))
}

pub fn sgpos_series(k_max: usize, order: usize) -> Result<ExcessIndexedSeries> {
    let csg = connected_series(order.max(1), k_max as i64)?;
    sgpos_from_csg(&csg, k_max)
}

/// `1 - T(z) h(x)` with `h(x) = (e^x - 1 - x)/(x^2/2)`.
pub(crate) fn kernel_base(t: &TruncatedSeries, x_order: usize) -> BivariateTruncated {
    let h = excess_edge_kernel(x_order);
    BivariateTruncated::from_z(&TruncatedSeries::one(t.order()), x_order)
        .add(&BivariateTruncated::separable(&-t, &h))
}

/// The multigraph majorant
/// `mg>0_k = (2k-1)!! [x^{2k}] e^{-MV(z)} (1 - T(z) h(x))^{-(k+1/2)}`.
pub fn mgpos_series(k: usize, order: usize) -> Result<TruncatedSeries> {
    let t = tree_series(order);
    let x_order = 2 * k;
    let exponent = -(rat(2 * k as i64 + 1, 2));
    let powered = kernel_base(&t, x_order).pow_rational(&exponent)?;
    let e_minus_mv = (&TruncatedSeries::one(order) - &t).pow_rational(&rat(1, 2))?;
    let slice = powered.extract(x_order)?;
    Ok(slice
        .mul(&e_minus_mv)
        .scale(&rat_int(BigInt::from(double_factorial_odd(k as u64)))))
}

/// `Q_k` with `sg>0_k(z) = Q_k(T(z)) / (1 - T(z))^{3k}`, coefficients in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrightPolynomial {
    k: usize,
    coeffs: Vec<ExactRational>,
}

impl WrightPolynomial {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// `Q_k(T(z)) / (1 - T(z))^{3k}` truncated at `order`.
    pub fn reconstruct(&self, order: usize) -> Result<TruncatedSeries> {
        let t = tree_series(order);
        let numerator = poly_in_series(&self.coeffs, &t);
        let denom = (&TruncatedSeries::one(order) - &t).pow_usize(3 * self.k);
        numerator.div(&denom)
    }
}

fn poly_in_series(coeffs: &[ExactRational], t: &TruncatedSeries) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(t.order());
    for c in coeffs.iter().rev() {
        acc = acc.mul(t);
        acc.set_coeff(0, acc.coeff(0) + c);
    }
    acc
}

/// Rewrite `sg>0_k (1-T)^{3k}` in the basis `{T^j}`.
///
/// `T = z + O(z^2)`, so the change of basis is triangular: the next
/// coefficient is read off the lowest surviving power of `z`. The candidate
/// degree is capped at `min(10k, order - k - 1)`; anything left above the cap
/// is an identity violation.
pub fn wright_polynomial_from(sgpos_k: &TruncatedSeries, k: usize) -> Result<WrightPolynomial> {
    if k == 0 {
        return Err(Error::Domain("Wright polynomials are defined for k >= 1".into()));
    }
    let order = sgpos_k.order();
    let t = tree_series(order);
    let one_minus_t = &TruncatedSeries::one(order) - &t;
    let mut remainder = sgpos_k.mul(&one_minus_t.pow_usize(3 * k));
    let cap = (10 * k).min(order.saturating_sub(k + 1));
    let mut coeffs = Vec::new();
    let mut t_power = TruncatedSeries::one(order);
    for j in 0..=cap {
        let c = remainder.coeff(j);
        if !c.is_zero() {
            remainder = &remainder - &t_power.scale(&c);
        }
        coeffs.push(c);
        t_power = t_power.mul(&t);
    }
    if let Some(bad) = remainder.coeffs().iter().position(|c| !c.is_zero()) {
        return Err(Error::IdentityViolation(format!(
            "Wright rewrite for k={k} leaves remainder at z^{bad} (cap {cap}, order {order})"
        )));
    }
    let deg = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    coeffs.truncate(deg + 1);
    Ok(WrightPolynomial { k, coeffs })
}

pub fn wright_polynomial(k: usize, order: usize) -> Result<WrightPolynomial> {
    let sg = sgpos_series(k, order)?;
    wright_polynomial_from(sg.get(k as i64).unwrap(), k)
}

pub(crate) fn poly_mul(a: &[ExactRational], b: &[ExactRational]) -> Vec<ExactRational> {
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
    out
}

fn poly_add_into(acc: &mut Vec<ExactRational>, p: &[ExactRational]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ExactRational::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

/// Compositions of `total` into `parts` parts, each in `1..=max_part`, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn rec(
        total: usize,
        parts: usize,
        max_part: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if total < parts || total > parts * max_part {
            return;
        }
        for first in 1..=max_part.min(total) {
            prefix.push(first);
            rec(total - first, parts - 1, max_part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, max_part, &mut Vec::new(), &mut out);
    out
}

/// `R_{q,r}(t) = sum over compositions k_1 + ... + k_{q-1} = r (k_j >= 1) of prod Q_{k_j}(t)`.
///
/// `wright[j]` must hold `Q_{j+1}` for every `j < r`.
pub fn wright_product_polynomial(
    q: usize,
    r: usize,
    wright: &[WrightPolynomial],
) -> Result<Vec<ExactRational>> {
    if q == 0 {
        return Err(Error::Domain("q must be at least 1".into()));
    }
    if r + 1 < q {
        return Err(Error::Domain(format!("R_{{q,r}} needs r >= q-1 (q={q}, r={r})")));
    }
    if r > wright.len() {
        return Err(Error::OutOfRange {
            index: r,
            max: wright.len(),
        });
    }
    let mut acc = Vec::new();
    if q == 1 {
        if r == 0 {
            acc.push(ExactRational::one());
        }
        return Ok(acc);
    }
    for comp in compositions(r, q - 1, r) {
        let mut prod = vec![ExactRational::one()];
        for &kj in &comp {
            prod = poly_mul(&prod, wright[kj - 1].coeffs());
        }
        poly_add_into(&mut acc, &prod);
    }
    Ok(acc)
}

/// Outcome of one evaluation of the composition identity for `CSG_{n,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCertificate {
    pub n: usize,
    pub k: usize,
    /// `sum_q (-1)^{q+1}/q sum_{compositions} n! [z^n] prod sg>0_{k_j}`.
    pub composition_value: ExactRational,
    /// `n! [z^n] CSG_k` from the logarithm of `SG`.
    pub csg: ExactRational,
    pub holds: bool,
}

/// Exact generating-function pipeline up to `z^order` and excess `k_max`:
/// `CSG_k` from the logarithm of `SG`, `sg>0_l` from the exponential of the
/// positive-excess part.
#[derive(Clone, Debug)]
pub struct GfPipeline {
    csg: ExcessIndexedSeries,
    sgpos: ExcessIndexedSeries,
}

impl GfPipeline {
    pub fn new(order: usize, k_max: usize) -> Result<Self> {
        let csg = connected_series(order.max(1), k_max as i64)?;
        let sgpos = sgpos_from_csg(&csg, k_max)?;
        Ok(Self { csg, sgpos })
    }

    pub fn csg(&self) -> &ExcessIndexedSeries {
        &self.csg
    }

    pub fn sgpos(&self) -> &ExcessIndexedSeries {
        &self.sgpos
    }

    pub fn order(&self) -> usize {
        self.csg.order()
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k as i64 > self.sgpos.k_max() {
            return Err(Error::OutOfRange {
                index: k,
                max: self.sgpos.k_max() as usize,
            });
        }
        Ok(())
    }

    /// Composition terms of the identity grouped by `(q, r)` with
    /// `r = k - max_j k_j`; each value already carries `(-1)^{q+1}/q`.
    pub fn composition_terms(&self, k: usize) -> Result<BTreeMap<(usize, usize), TruncatedSeries>> {
        self.check_k(k)?;
        let order = self.order();
        let mut products: BTreeMap<Vec<usize>, TruncatedSeries> = BTreeMap::new();
        let mut terms: BTreeMap<(usize, usize), TruncatedSeries> = BTreeMap::new();
        for q in 1..=k {
            let sign = if q % 2 == 1 { rat(1, q as i64) } else { rat(-1, q as i64) };
            for comp in compositions(k, q, k - q + 1) {
                let mut key = comp.clone();
                key.sort_unstable();
                let prod = products
                    .entry(key.clone())
                    .or_insert_with(|| {
                        key.iter().fold(TruncatedSeries::one(order), |acc, &kj| {
                            acc.mul(self.sgpos.get(kj as i64).unwrap())
                        })
                    })
                    .scale(&sign);
                let r = k - comp.iter().copied().max().unwrap();
                let slot = terms.entry((q, r)).or_insert_with(|| TruncatedSeries::zero(order));
                *slot = &*slot + &prod;
            }
        }
        Ok(terms)
    }

    /// The right-hand side of the composition identity as a series in `z`.
    pub fn composition_series(&self, k: usize) -> Result<TruncatedSeries> {
        let order = self.order();
        Ok(self
            .composition_terms(k)?
            .values()
            .fold(TruncatedSeries::zero(order), |acc, s| &acc + s))
    }

    pub fn exact_csg_identity(&self, n: usize, k: usize) -> Result<IdentityCertificate> {
        if n == 0 || n > self.order() {
            return Err(Error::OutOfRange {
                index: n,
                max: self.order(),
            });
        }
        let series = self.composition_series(k)?;
        Ok(self.certificate_from(&series, n, k))
    }

    /// Check the identity for every `1 <= n <= order` at once.
    pub fn exact_csg_identity_all(&self, k: usize) -> Result<Vec<IdentityCertificate>> {
        let series = self.composition_series(k)?;
        Ok((1..=self.order())
            .map(|n| self.certificate_from(&series, n, k))
            .collect())
    }

    fn certificate_from(&self, series: &TruncatedSeries, n: usize, k: usize) -> IdentityCertificate {
        let composition_value = series.egf_count(n);
        let csg = self.csg.count(n, k as i64);
        let holds = composition_value == csg && csg.is_integer() && !csg.is_negative();
        IdentityCertificate {
            n,
            k,
            composition_value,
            csg,
            holds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> ExactRational {
        rat_int(BigInt::from(v))
    }

    #[test]
    fn tree_counts_and_fixed_point() {
        let order = 12;
        let t = tree_series(order);
        let counts: Vec<_> = (1..=4).map(|n| t.egf_count(n)).collect();
        assert_eq!(counts, vec![int(1), int(2), int(9), int(64)]);
        assert!(t.coeff(0).is_zero());
        // fixed-point iteration T <- z e^T from T = 0
        let z = TruncatedSeries::monomial(int(1), 1, order);
        let mut iter = TruncatedSeries::zero(order);
        for _ in 0..=order {
            iter = z.mul(&iter.exp().unwrap());
        }
        assert_eq!(iter, t);
        let residual = &t - &z.mul(&t.exp().unwrap());
        assert!(residual.is_zero());
    }

    #[test]
    fn unicycle_values() {
        let (mv, v) = unicycle_series(10);
        assert_eq!(mv.coeff(1), rat(1, 2));
        assert_eq!(v.egf_count(3), int(1));
        assert_eq!(v.egf_count(4), int(15));
        assert!(v.coeff(1).is_zero() && v.coeff(2).is_zero());
    }

    #[test]
    fn connected_small_values() {
        let csg = connected_series(6, 3).unwrap();
        assert_eq!(csg.count(3, -1), int(3));
        assert_eq!(csg.count(4, -1), int(16));
        assert_eq!(csg.count(5, -1), int(125));
        assert_eq!(csg.count(4, 0), int(15));
        assert_eq!(csg.count(4, 1), int(6));
        assert_eq!(csg.count(4, 2), int(1));
        assert!(csg.all_counts_nonnegative_integers());
    }

    #[test]
    fn connected_series_rejects_bad_input() {
        assert!(connected_series(0, 2).is_err());
        assert!(connected_series(4, -2).is_err());
    }

    #[test]
    fn recurrence_small_values() {
        assert_eq!(connected_recurrence_count(4, 3).unwrap(), BigInt::from(16));
        assert_eq!(connected_recurrence_count(3, 3).unwrap(), BigInt::from(1));
        assert_eq!(connected_recurrence_count(1, 0).unwrap(), BigInt::from(1));
        assert_eq!(connected_recurrence_count(4, 2).unwrap(), BigInt::zero());
        assert!(connected_recurrence_count(4, 7).is_err());
    }

    #[test]
    fn recurrence_matches_series() {
        let csg = connected_series(9, 6).unwrap();
        let rec = AnchoredRecurrence::new(9, 15);
        for n in 1..=9usize {
            for k in -1..=6i64 {
                let m = n as i64 + k;
                if m < 0 || m as usize > n * (n - 1) / 2 {
                    continue;
                }
                assert_eq!(
                    rat_int(rec.count(n, m as usize).unwrap()),
                    csg.count(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn sgpos_base_cases() {
        let pipe = GfPipeline::new(12, 3).unwrap();
        assert_eq!(pipe.sgpos().get(0).unwrap(), &TruncatedSeries::one(12));
        assert_eq!(pipe.sgpos().get(1).unwrap(), pipe.csg().get(1).unwrap());
        assert!(pipe.sgpos().all_counts_nonnegative_integers());
    }

    #[test]
    fn majorant_base_and_domination() {
        assert_eq!(mgpos_series(0, 10).unwrap(), TruncatedSeries::one(10));
        let sg = sgpos_series(2, 14).unwrap();
        for k in 1..=2 {
            let mg = mgpos_series(k, 14).unwrap();
            for n in 0..=14 {
                assert!(mg.coeff(n) >= sg.get(k as i64).unwrap().coeff(n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn wright_q1_known_form() {
        let q1 = wright_polynomial(1, 30).unwrap();
        // Q_1(t) = t^4 (6 - t) / 24
        let mut expected = vec![ExactRational::zero(); 6];
        expected[4] = rat(1, 4);
        expected[5] = rat(-1, 24);
        assert_eq!(q1.coeffs(), expected.as_slice());
        assert_eq!(q1.reconstruct(30).unwrap(), sgpos_series(1, 30).unwrap().get(1).unwrap().clone());
        assert!(q1.coeffs()[0].is_zero());
        assert_eq!(wright_polynomial(1, 20).unwrap().degree(), q1.degree());
        assert!(wright_polynomial_from(&TruncatedSeries::one(5), 0).is_err());
    }

    #[test]
    fn wright_rewrite_detects_non_polynomial() {
        // 1/(1-2z) is not of the form Q(T)/(1-T)^3 with small Q
        let bogus = TruncatedSeries::from_fn(20, |n| rat_int(BigInt::from(2).pow(n as u32)));
        assert!(matches!(
            wright_polynomial_from(&bogus, 1),
            Err(Error::IdentityViolation(_))
        ));
    }

    #[test]
    fn product_polynomials() {
        let w: Vec<_> = (1..=2).map(|k| wright_polynomial(k, 24).unwrap()).collect();
        assert_eq!(wright_product_polynomial(1, 0, &w).unwrap(), vec![int(1)]);
        assert_eq!(wright_product_polynomial(2, 1, &w).unwrap(), w[0].coeffs().to_vec());
        assert_eq!(
            wright_product_polynomial(3, 2, &w).unwrap(),
            poly_mul(w[0].coeffs(), w[0].coeffs())
        );
        assert!(wright_product_polynomial(3, 1, &w).is_err());
    }

    #[test]
    fn compositions_lexicographic() {
        assert_eq!(
            compositions(4, 2, 3),
            vec![vec![1, 3], vec![2, 2], vec![3, 1]]
        );
        assert_eq!(compositions(3, 3, 1), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3, 5).is_empty());
    }

    #[test]
    fn identity_small_cases() {
        let pipe = GfPipeline::new(10, 3).unwrap();
        let cert = pipe.exact_csg_identity(4, 2).unwrap();
        assert!(cert.holds);
        assert_eq!(cert.csg, int(1));
        for k in 1..=3 {
            assert!(pipe.exact_csg_identity_all(k).unwrap().iter().all(|c| c.holds));
        }
        assert!(pipe.exact_csg_identity(4, 0).is_err());
        assert!(pipe.exact_csg_identity(11, 1).is_err());
        let terms = pipe.composition_terms(1).unwrap();
        assert_eq!(terms.len(), 1);
    }

    #[test]
    fn sg_reassembles_from_connected() {
        // exp(sum_k CSG_k(z) y^k) graded back gives SG: the coefficient of
        // z^n y^{m-n} is C(C(n,2), m).
        let n_max = 6;
        let csg = connected_series(n_max, 5).unwrap();
        let sg = GradedGraphGF::new(n_max, 5);
        // exp over w with the (z, w) convention: CSG(z,w) = sum_k w^k CSG_k(zw)
        let w_deg = sg.w_degree();
        let slices: Vec<TruncatedSeries> = (0..=w_deg)
            .map(|j| {
                TruncatedSeries::from_fn(n_max, |n| {
                    let k = j as i64 - n as i64;
                    if k < -1 || k > 5 {
                        ExactRational::zero()
                    } else {
                        csg.get(k).unwrap().coeff(n)
                    }
                })
            })
            .collect();
        let back = BivariateTruncated::from_slices(slices).exp().unwrap();
        for n in 0..=n_max {
            for m in 0..=w_deg {
                assert_eq!(
                    back.coeff(m, n) * rat_int(BigInt::from(factorial(n as u64))),
                    rat_int(BigInt::from(sg.count(n, m).clone())),
                    "n={n} m={m}"
                );
            }
        }
    }
}
