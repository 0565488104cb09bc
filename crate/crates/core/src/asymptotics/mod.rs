//! Saddle-point asymptotics of connected graphs with `k/n` fixed, plus the
//! exact sequences and diagnostics that support them.
//!
//! The dominant term `D_{n,k}` is evaluated in log space through
//! [`LogMagnitude`]; counts of the exact pipelines are converted with
//! [`LogMagnitude::from_biguint`].

mod dominant;
mod fit;
mod log_magnitude;
mod saddle;
mod s_sequence;
mod terms;

pub use dominant::{
    dnk1_check, dnk2_check, dominant_term_log, stirling_ratio, theta_form_log, IdentityResidual,
};
pub use fit::{c1_fit, c1_fit_exact, ratio_point, C1Estimate, RatioPoint};
pub use log_magnitude::LogMagnitude;
pub use saddle::{
    eval_a_b, hessian, hessian_fd, saddle_map, saddle_residuals, solve_saddle, tree_function,
    SaddlePoint, SaddleResiduals,
};
pub use s_sequence::{
    appendix_bound_checks, double_factorial_convolution, s_value, AppendixReport, BoundCheck,
    SSequenceValue,
};
pub use terms::{term_magnitudes, CompositionTerm, SliceTerm, TermMagnitudes};

/// `(e^x - 1 - x) / (x^2/2)`, by its Taylor polynomial for `|x| < 1e-3`.
pub fn kernel_h(x: f64) -> f64 {
    if libm::fabs(x) < 1e-3 {
        1.0 + x / 3.0 + x * x / 12.0 + x * x * x / 60.0 + x * x * x * x / 360.0
    } else {
        (libm::expm1(x) - x) / (x * x / 2.0)
    }
}

/// `ln(e^x - 1 - x)` for `x > 0` without overflow.
pub(crate) fn ln_expm1_minus_x(x: f64) -> f64 {
    if x < 1.0 {
        libm::log(x * x / 2.0 * kernel_h(x))
    } else {
        x + libm::log1p(-libm::exp(-x) * (1.0 + x))
    }
}

/// `ln(e^{2x} - 1 - 2x e^x)` for `x > 0`.
pub(crate) fn ln_e2x_minus_1_minus_2xex(x: f64) -> f64 {
    if x < 0.05 {
        // e^{2x} - 1 - 2x e^x = sum_j (2^j - 2j) x^j / j!
        let series = 1.0
            + x * (1.0 + x * (11.0 / 20.0 + x * (13.0 / 60.0 + x * (19.0 / 280.0 + x / 56.0))));
        libm::log(x * x * x / 3.0 * series)
    } else {
        2.0 * x + libm::log1p(-libm::exp(-2.0 * x) - 2.0 * x * libm::exp(-x))
    }
}

/// `ln(2 sinh(x/2))` for `x > 0`.
pub(crate) fn ln_two_sinh_half(x: f64) -> f64 {
    if x < 1.0 {
        libm::log(2.0 * libm::sinh(x / 2.0))
    } else {
        x / 2.0 + libm::log1p(-libm::exp(-x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_continuity() {
        for &x in &[1e-3 * 0.999, 1e-3 * 1.001] {
            let direct = (libm::expm1(x) - x) / (x * x / 2.0);
            assert!(libm::fabs(kernel_h(x) - direct) < 1e-9);
        }
        assert_eq!(kernel_h(0.0), 1.0);
    }

    #[test]
    fn log_helpers_agree_with_direct_forms() {
        for &x in &[0.01, 0.04, 0.06, 0.5, 2.0, 7.0] {
            let a = libm::log(libm::exp(x) - 1.0 - x);
            assert!(libm::fabs(ln_expm1_minus_x(x) - a) < 1e-9 * libm::fabs(a).max(1.0));
            let b = libm::log(libm::exp(2.0 * x) - 1.0 - 2.0 * x * libm::exp(x));
            let tol = 1e-9;
            assert!(libm::fabs(ln_e2x_minus_1_minus_2xex(x) - b) < tol * libm::fabs(b).max(1.0), "x={x}");
            let c = libm::log(libm::exp(x / 2.0) - libm::exp(-x / 2.0));
            assert!(libm::fabs(ln_two_sinh_half(x) - c) < 1e-12 * libm::fabs(c).max(1.0));
        }
    }
}
