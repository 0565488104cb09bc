//! Truncated power series over exact rationals.
//!
//! [`TruncatedSeries`] is univariate in `z`. [`BivariateTruncated`] stores a
//! series in `(z, x)` as one `z`-series per power of `x`; the second variable
//! is a plain (ordinary) counting variable, so slice `j` is the exact
//! coefficient of `x^j`. Every operation is exact: nothing is ever rounded.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

pub(crate) fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rat_int(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(2k-1)!! = (2k)!/(2^k k!)`, with `(-1)!! = 1` for `k = 0`.
pub fn double_factorial_odd(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * (2 * j - 1))
}

/// Table of `(2j-1)!!` for `j = 0..=k`.
pub fn double_factorial_table(k: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(BigUint::one());
    for j in 1..=k as u64 {
        let next = out.last().unwrap() * (2 * j - 1);
        out.push(next);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A power series in `z` truncated after `z^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExactRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![ExactRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ExactRational::one(), order)
    }

    pub fn constant(c: ExactRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * z^power`, truncated.
    pub fn monomial(c: ExactRational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Build from explicit coefficients; the order is `coeffs.len() - 1`.
    ///
    /// An empty vector yields the zero series of order 0.
    pub fn from_coeffs(mut coeffs: Vec<ExactRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ExactRational::zero());
        }
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> ExactRational) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// `1/(1-z)` truncated at `order`.
    pub fn geometric(order: usize) -> Self {
        Self::from_fn(order, |_| ExactRational::one())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// `[z^n]`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> ExactRational {
        self.coeffs.get(n).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn coeff_ref(&self, n: usize) -> &ExactRational {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: ExactRational) {
        self.coeffs[n] = c;
    }

    /// `n! [z^n]`, the labeled count carried by an exponential generating function.
    pub fn egf_count(&self, n: usize) -> ExactRational {
        self.coeff(n) * rat_int(BigInt::from(factorial(n as u64)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, ExactRational::zero());
        Self { coeffs }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self::from_fn(n - 1, |i| &self.coeffs[i + 1] * rat_int(BigInt::from(i + 1)))
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![ExactRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow_usize(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(f)` for `f(0) = 0`, from `(e^f)' = f' e^f`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm(format!("{}", self.coeffs[0])));
        }
        let n = self.order();
        let weighted: Vec<ExactRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * rat_int(BigInt::from(k)))
            .collect();
        let mut out = vec![ExactRational::zero(); n + 1];
        out[0] = ExactRational::one();
        for m in 1..=n {
            let mut acc = ExactRational::zero();
            for k in 1..=m {
                if !weighted[k].is_zero() && !out[m - k].is_zero() {
                    acc += &weighted[k] * &out[m - k];
                }
            }
            out[m] = acc / rat_int(BigInt::from(m));
        }
        Ok(Self { coeffs: out })
    }

    /// `log(f)` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne(format!("{}", self.coeffs[0])));
        }
        let n = self.order();
        let mut out = vec![ExactRational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * rat_int(BigInt::from(m));
            for k in 1..m {
                if !out[k].is_zero() && !self.coeffs[m - k].is_zero() {
                    acc -= &out[k] * rat_int(BigInt::from(k)) * &self.coeffs[m - k];
                }
            }
            out[m] = acc / rat_int(BigInt::from(m));
        }
        Ok(Self { coeffs: out })
    }

    /// `f^alpha = exp(alpha log f)` for `f(0) = 1`.
    pub fn pow_rational(&self, alpha: &ExactRational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne(format!("{}", self.coeffs[0])));
        }
        if alpha.is_zero() {
            return Ok(Self::one(self.order()));
        }
        self.log()?.scale(alpha).exp()
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        self.pow_rational(&-ExactRational::one())
    }

    /// Division `self / denom`; the denominator needs an invertible constant term.
    pub fn div(&self, denom: &Self) -> Result<Self> {
        let c0 = denom.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::Domain("division by a series with zero constant term".into()));
        }
        let normalized = denom.scale(&c0.recip());
        Ok(self.mul(&normalized.inverse()?).scale(&c0.recip()))
    }

    /// `self(inner(z))` for `inner(0) = 0`, by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm(format!("{}", inner.coeffs[0])));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs.iter().take(order + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// True when every coefficient `n!·[z^n]` is a non-negative integer.
    pub fn has_nonnegative_integer_counts(&self) -> bool {
        (0..=self.order()).all(|n| {
            let c = self.egf_count(n);
            c.is_integer() && !c.is_negative()
        })
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |i| &self.coeffs[i] + &rhs.coeffs[i])
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |i| &self.coeffs[i] - &rhs.coeffs[i])
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// A series in `(z, x)`: one [`TruncatedSeries`] in `z` per power of `x`,
/// all sharing the same `z`-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateTruncated {
    slices: Vec<TruncatedSeries>,
}

impl BivariateTruncated {
    pub fn zero(x_order: usize, z_order: usize) -> Self {
        Self {
            slices: vec![TruncatedSeries::zero(z_order); x_order + 1],
        }
    }

    pub fn one(x_order: usize, z_order: usize) -> Self {
        let mut s = Self::zero(x_order, z_order);
        s.slices[0] = TruncatedSeries::one(z_order);
        s
    }

    /// Build from slices; all slices are truncated to the smallest `z`-order.
    pub fn from_slices(slices: Vec<TruncatedSeries>) -> Self {
        assert!(!slices.is_empty(), "at least one x-slice is required");
        let z_order = slices.iter().map(TruncatedSeries::order).min().unwrap();
        Self {
            slices: slices.into_iter().map(|s| s.truncate(z_order)).collect(),
        }
    }

    /// A series that only depends on `z`.
    pub fn from_z(f: &TruncatedSeries, x_order: usize) -> Self {
        let mut s = Self::zero(x_order, f.order());
        s.slices[0] = f.clone();
        s
    }

    /// `f(z) * g(x)` where `g` is given by its `x`-coefficients.
    pub fn separable(f: &TruncatedSeries, g: &[ExactRational]) -> Self {
        Self {
            slices: g.iter().map(|c| f.scale(c)).collect(),
        }
    }

    pub fn x_order(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn z_order(&self) -> usize {
        self.slices[0].order()
    }

    pub fn slices(&self) -> &[TruncatedSeries] {
        &self.slices
    }

    /// The `z`-series `[x^j] f`.
    pub fn extract(&self, j: usize) -> Result<TruncatedSeries> {
        self.slices.get(j).cloned().ok_or(Error::OutOfRange {
            index: j,
            max: self.x_order(),
        })
    }

    pub fn coeff(&self, x_power: usize, z_power: usize) -> ExactRational {
        self.slices
            .get(x_power)
            .map(|s| s.coeff(z_power))
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self {
            slices: self.slices.iter().map(|s| s.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let x_order = self.x_order().min(other.x_order());
        Self::from_slices((0..=x_order).map(|j| &self.slices[j] + &other.slices[j]).collect())
    }

    /// Multiply every `x`-slice by the same `z`-series.
    pub fn mul_z(&self, f: &TruncatedSeries) -> Self {
        Self {
            slices: self.slices.iter().map(|s| s.mul(f)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let x_order = self.x_order().min(other.x_order());
        let z_order = self.z_order().min(other.z_order());
        let mut out = Self::zero(x_order, z_order);
        for i in 0..=x_order {
            if self.slices[i].is_zero() {
                continue;
            }
            for j in 0..=(x_order - i) {
                if other.slices[j].is_zero() {
                    continue;
                }
                let prod = self.slices[i].mul(&other.slices[j]);
                out.slices[i + j] = &out.slices[i + j] + &prod;
            }
        }
        out
    }

    /// `log f` for `[z^0 x^0] f = 1`, by the logarithmic derivative in `x`.
    pub fn log(&self) -> Result<Self> {
        let f0 = &self.slices[0];
        let g0 = f0.log()?;
        let inv0 = f0.inverse()?;
        let m = self.x_order();
        let mut g = Vec::with_capacity(m + 1);
        g.push(g0);
        for j in 1..=m {
            let mut acc = self.slices[j].scale(&rat_int(BigInt::from(j)));
            for i in 1..j {
                if g[i].is_zero() || self.slices[j - i].is_zero() {
                    continue;
                }
                let term = g[i].mul(&self.slices[j - i]).scale(&rat_int(BigInt::from(i)));
                acc = &acc - &term;
            }
            g.push(acc.mul(&inv0).scale(&rat(1, j as i64)));
        }
        Ok(Self { slices: g })
    }

    /// `exp g` for `[z^0 x^0] g = 0`.
    pub fn exp(&self) -> Result<Self> {
        let e0 = self.slices[0].exp()?;
        let m = self.x_order();
        let mut e = Vec::with_capacity(m + 1);
        e.push(e0);
        for j in 1..=m {
            let mut acc = TruncatedSeries::zero(self.z_order());
            for i in 1..=j {
                if self.slices[i].is_zero() {
                    continue;
                }
                let term = self.slices[i].mul(&e[j - i]).scale(&rat_int(BigInt::from(i)));
                acc = &acc + &term;
            }
            e.push(acc.scale(&rat(1, j as i64)));
        }
        Ok(Self { slices: e })
    }

    /// `f^alpha` for `[z^0 x^0] f = 1`.
    pub fn pow_rational(&self, alpha: &ExactRational) -> Result<Self> {
        if alpha.is_zero() {
            if !self.slices[0].coeff_ref(0).is_one() {
                return Err(Error::ConstantTermNotOne(format!("{}", self.slices[0].coeff_ref(0))));
            }
            return Ok(Self::one(self.x_order(), self.z_order()));
        }
        self.log()?.scale(alpha).exp()
    }
}

/// Plain `x`-coefficients of `(e^x - 1 - x)/(x^2/2)`: `[x^j] = 2/(j+2)!`.
pub fn excess_edge_kernel(x_order: usize) -> Vec<ExactRational> {
    (0..=x_order)
        .map(|j| {
            BigRational::new(
                BigInt::from(2u32),
                BigInt::from(factorial(j as u64 + 2)),
            )
        })
        .collect()
}

/// Plain `x`-coefficients of `e^{c x}`.
pub fn exp_coeffs(c: &ExactRational, x_order: usize) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(x_order + 1);
    let mut term = ExactRational::one();
    out.push(term.clone());
    for j in 1..=x_order {
        term = term * c / rat_int(BigInt::from(j));
        out.push(term.clone());
    }
    out
}

/// Exact conversion of an integral rational to a big integer.
pub fn to_integer(r: &ExactRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

#[cfg(test)]
fn gcd_is_one(r: &ExactRational) -> bool {
    use num_integer::Integer;
    r.numer().gcd(r.denom()).is_one() && r.denom().is_positive()
}
