use core::cmp::Ordering;
use core::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::series::ExactRational;

/// A real number stored as a sign and the natural log of its magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMagnitude {
    sign: i8,
    log_abs: f64,
}

impl LogMagnitude {
    pub const ZERO: Self = Self {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_abs: 0.0,
    };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// A positive number given by its natural log.
    pub fn from_ln(log_abs: f64) -> Self {
        Self { sign: 1, log_abs }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x < 0.0 { -1 } else { 1 },
                log_abs: libm::log(libm::fabs(x)),
            }
        }
    }

    /// Exact integer to log form: the top 64 bits carry the mantissa and
    /// the discarded bits become a multiple of `ln 2`.
    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return Self::ZERO;
        }
        let bits = n.bits();
        if bits <= 64 {
            return Self::from_ln(libm::log(n.to_u64().unwrap() as f64));
        }
        let shift = bits - 64;
        let top = (n >> shift).to_u64().unwrap() as f64;
        Self::from_ln(libm::log(top) + shift as f64 * core::f64::consts::LN_2)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let m = Self::from_biguint(n.magnitude());
        match n.sign() {
            Sign::Minus => Self { sign: -1, ..m },
            _ => m,
        }
    }

    pub fn from_rational(r: &ExactRational) -> Self {
        Self::from_bigint(r.numer()) / Self::from_bigint(r.denom())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_abs / core::f64::consts::LN_10
    }

    /// The value as an `f64`; overflows to infinity for huge magnitudes.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * libm::exp(self.log_abs)
    }

    pub fn powf(&self, e: f64) -> Self {
        assert!(self.sign >= 0, "real powers need a non-negative base");
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self::from_ln(self.log_abs * e)
    }

    /// `self / other` as an ordinary float, e.g. exact count over asymptotic term.
    pub fn ratio(&self, other: &Self) -> f64 {
        (*self / *other).to_f64()
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log_abs
            .partial_cmp(&other.log_abs)
            .unwrap_or(Ordering::Equal)
    }
}

impl Mul for LogMagnitude {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogMagnitude {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "division by zero");
        Self::new(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

impl PartialOrd for LogMagnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_abs.partial_cmp(&other.log_abs),
                _ => other.log_abs.partial_cmp(&self.log_abs),
            },
            ord => Some(ord),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::factorial;

    #[test]
    fn small_and_large_integers() {
        let a = LogMagnitude::from_biguint(&BigUint::from(1000u32));
        assert!(libm::fabs(a.log10_abs() - 3.0) < 1e-14);
        let big = BigUint::from(10u32).pow(400);
        let l = LogMagnitude::from_biguint(&big);
        assert!(libm::fabs(l.log10_abs() - 400.0) < 1e-12);
        assert_eq!(LogMagnitude::from_biguint(&BigUint::zero()).sign(), 0);
    }

    #[test]
    fn factorial_matches_lgamma() {
        let f = LogMagnitude::from_biguint(&factorial(300));
        let lg = libm::lgamma(301.0);
        assert!(libm::fabs(f.ln_abs() - lg) < 1e-12 * lg);
    }

    #[test]
    fn arithmetic_and_order() {
        let a = LogMagnitude::from_f64(-4.0);
        let b = LogMagnitude::from_f64(2.0);
        let p = a * b;
        assert_eq!(p.sign(), -1);
        assert!(libm::fabs(p.to_f64() + 8.0) < 1e-12);
        assert!(libm::fabs((a / b).to_f64() + 2.0) < 1e-12);
        assert!(a < b);
        assert!(LogMagnitude::from_f64(3.0) > b);
        assert!(LogMagnitude::from_f64(-3.0) < LogMagnitude::from_f64(-2.0));
        assert!(libm::fabs(b.powf(3.0).to_f64() - 8.0) < 1e-12);
    }
}
