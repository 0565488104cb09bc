use crate::error::{Error, Result};
use crate::series::{double_factorial_odd, factorial};

use super::log_magnitude::LogMagnitude;
use super::saddle::{eval_a_b, hessian, solve_saddle, SaddlePoint};
use super::{kernel_h, ln_e2x_minus_1_minus_2xex, ln_expm1_minus_x, ln_two_sinh_half};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn check_nk(n: u64, k: u64) -> Result<(f64, f64)> {
    if n == 0 || k == 0 {
        return Err(Error::Domain(
            "the dominant term needs n >= 1 and k >= 1 (positive k/n)".into(),
        ));
    }
    Ok((n as f64, k as f64))
}

/// `log D_{n,k}` from the closed form
/// `n^{n+k} / sqrt(2πn) * (2 sinh(λ/2) / λ^{1+k/n})^n * (e^λ - 1 - λ)
///  e^{-(1+k/(2n))λ} / sqrt(λ/2 (e^{2λ} - 1 - 2λ e^λ))`.
pub fn dominant_term_log(n: u64, k: u64) -> Result<LogMagnitude> {
    let (nf, kf) = check_nk(n, k)?;
    let s = solve_saddle(kf / nf)?;
    Ok(LogMagnitude::from_ln(dominant_ln(nf, kf, &s)))
}

fn dominant_ln(nf: f64, kf: f64, s: &SaddlePoint) -> f64 {
    let l = s.lambda;
    (nf + kf) * libm::log(nf) - 0.5 * (LN_2PI + libm::log(nf))
        + nf * (ln_two_sinh_half(l) - (1.0 + kf / nf) * libm::log(l))
        + ln_expm1_minus_x(l)
        - (1.0 + kf / (2.0 * nf)) * l
        - 0.5 * (libm::log(l / 2.0) + ln_e2x_minus_1_minus_2xex(l))
}

/// `log` of `(1/k) n! (2k-1)!! / ((1 - T(ζ) h(λ))^k ζ^n λ^{2k})` with exact
/// factorials.
pub fn theta_form_log(n: u64, k: u64) -> Result<LogMagnitude> {
    let (nf, kf) = check_nk(n, k)?;
    let s = solve_saddle(kf / nf)?;
    let ln_fact = LogMagnitude::from_biguint(&factorial(n)).ln_abs();
    let ln_df = LogMagnitude::from_biguint(&double_factorial_odd(k)).ln_abs();
    let base = 1.0 - s.tzeta * kernel_h(s.lambda);
    if !(base > 0.0) {
        return Err(Error::Singularity("1 - T h(λ) is not positive".into()));
    }
    Ok(LogMagnitude::from_ln(
        -libm::log(kf) + ln_fact + ln_df
            - kf * libm::log(base)
            - nf * libm::log(s.zeta)
            - 2.0 * kf * libm::log(s.lambda),
    ))
}

/// Both sides of an identity in log space and their relative gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub relative: f64,
}

impl IdentityResidual {
    fn new(lhs: f64, rhs: f64) -> Self {
        let scale = libm::fabs(lhs).max(libm::fabs(rhs)).max(1.0);
        Self {
            lhs,
            rhs,
            relative: libm::fabs(lhs - rhs) / scale,
        }
    }
}

/// Exponential part: `log[(2k/n)^k e^{-n-k} B^k / (ζ^n λ^{2k})]` against
/// `n log(2 sinh(λ/2) / λ^{1+k/n})`.
pub fn dnk1_check(n: u64, k: u64) -> Result<IdentityResidual> {
    let (nf, kf) = check_nk(n, k)?;
    let s = solve_saddle(kf / nf)?;
    let (_, b) = eval_a_b(&s)?;
    let lhs = kf * libm::log(2.0 * kf / nf) - nf - kf + kf * libm::log(b)
        - nf * libm::log(s.zeta)
        - 2.0 * kf * libm::log(s.lambda);
    let rhs = nf * (ln_two_sinh_half(s.lambda) - (1.0 + kf / nf) * libm::log(s.lambda));
    Ok(IdentityResidual::new(lhs, rhs))
}

/// Constant and polynomial part:
/// `log[sqrt(2πn) sqrt 2 A / (2πk sqrt(det H))]` against
/// `log[(e^λ-1-λ) e^{-(1+k/(2n))λ} / (sqrt(2πn) sqrt(λ/2 (e^{2λ}-1-2λe^λ)))]`.
pub fn dnk2_check(n: u64, k: u64) -> Result<IdentityResidual> {
    let (nf, kf) = check_nk(n, k)?;
    let s = solve_saddle(kf / nf)?;
    let (a, _) = eval_a_b(&s)?;
    let h = hessian(&s, nf / kf);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if !(det > 0.0) {
        return Err(Error::Singularity("Hessian determinant is not positive".into()));
    }
    let lhs = 0.5 * (LN_2PI + libm::log(nf)) + 0.5 * core::f64::consts::LN_2 + libm::log(a)
        - (LN_2PI + libm::log(kf))
        - 0.5 * libm::log(det);
    let l = s.lambda;
    let rhs = -0.5 * (LN_2PI + libm::log(nf)) + ln_expm1_minus_x(l)
        - (1.0 + kf / (2.0 * nf)) * l
        - 0.5 * (libm::log(l / 2.0) + ln_e2x_minus_1_minus_2xex(l));
    Ok(IdentityResidual::new(lhs, rhs))
}

/// `n! (2k-1)!! / (n^{n+k} (2k/n)^k e^{-n-k} sqrt(2πn) sqrt 2)`, which tends
/// to 1 as `n` grows with `k/n` fixed.
pub fn stirling_ratio(n: u64, k: u64) -> Result<f64> {
    let (nf, kf) = check_nk(n, k)?;
    let exact = LogMagnitude::from_biguint(&factorial(n)).ln_abs()
        + LogMagnitude::from_biguint(&double_factorial_odd(k)).ln_abs();
    let approx = (nf + kf) * libm::log(nf) + kf * libm::log(2.0 * kf / nf) - nf - kf
        + 0.5 * (LN_2PI + libm::log(nf))
        + 0.5 * core::f64::consts::LN_2;
    Ok(libm::exp(exact - approx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_at_ratio_one() {
        assert!(dnk1_check(40, 40).unwrap().relative < 1e-10);
        assert!(dnk2_check(40, 40).unwrap().relative < 1e-8);
    }

    #[test]
    fn dominant_positive_and_finite() {
        let d = dominant_term_log(1000, 1000).unwrap();
        assert_eq!(d.sign(), 1);
        assert!(d.log10_abs().is_finite() && d.log10_abs() > 100.0);
        assert!(dominant_term_log(10, 0).is_err());
        assert!(theta_form_log(20, 20).unwrap().ln_abs().is_finite());
    }

    #[test]
    fn stirling_ratio_tends_to_one() {
        let a = stirling_ratio(20, 20).unwrap();
        let b = stirling_ratio(320, 320).unwrap();
        assert!(libm::fabs(b - 1.0) < libm::fabs(a - 1.0));
        assert!(libm::fabs(b - 1.0) < 1e-3);
    }
}
