use alloc::format;

use crate::error::{Error, Result};

use super::kernel_h;

/// Solution of the saddle equations for a given `k/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddlePoint {
    pub ratio: f64,
    pub lambda: f64,
    /// `T(ζ) = λ / (e^λ - 1)`.
    pub tzeta: f64,
    /// `ζ = T(ζ) e^{-T(ζ)}`.
    pub zeta: f64,
    /// `λ/2 (e^λ+1)/(e^λ-1) - (ratio + 1)` at the returned `λ`.
    pub residual: f64,
}

/// `λ/2 (e^λ+1)/(e^λ-1) - 1`, increasing from 0 at `λ = 0`.
pub fn saddle_map(lambda: f64) -> f64 {
    if lambda < 1e-4 {
        let l2 = lambda * lambda;
        return l2 / 12.0 - l2 * l2 / 720.0;
    }
    lambda / 2.0 / libm::tanh(lambda / 2.0) - 1.0
}

fn saddle_map_derivative(lambda: f64) -> f64 {
    if lambda < 1e-4 {
        return lambda / 6.0 - lambda * lambda * lambda / 180.0;
    }
    let s = libm::sinh(lambda / 2.0);
    0.5 / libm::tanh(lambda / 2.0) - lambda / 4.0 / (s * s)
}

pub fn solve_saddle(ratio: f64) -> Result<SaddlePoint> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::Domain(format!("k/n must be positive and finite (got {ratio})")));
    }
    let mut lo = 1e-6f64;
    let mut hi = 30.0f64;
    if saddle_map(lo) > ratio {
        lo = 0.0;
    }
    while saddle_map(hi) < ratio {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if saddle_map(mid) < ratio {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi.max(1e-300) {
            break;
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..8 {
        let d = saddle_map_derivative(lambda);
        if d <= 0.0 {
            break;
        }
        let step = (saddle_map(lambda) - ratio) / d;
        let next = lambda - step;
        if !(next > 0.0) {
            break;
        }
        lambda = next;
        if libm::fabs(step) <= 1e-16 * lambda {
            break;
        }
    }
    let tzeta = if lambda < 1e-8 {
        1.0 - lambda / 2.0
    } else {
        lambda / libm::expm1(lambda)
    };
    let zeta = tzeta * libm::exp(-tzeta);
    Ok(SaddlePoint {
        ratio,
        lambda,
        tzeta,
        zeta,
        residual: saddle_map(lambda) - ratio,
    })
}

/// The tree function on `0 <= z <= 1/e`: the root of `T = z e^T` in `[0, 1]`.
pub fn tree_function(z: f64) -> Result<f64> {
    let edge = libm::exp(-1.0);
    if !(0.0..=edge).contains(&z) {
        return Err(Error::Domain(format!("T(z) needs 0 <= z <= 1/e (got {z})")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    // Newton on f(T) = T e^{-T} - z, increasing on [0, 1)
    let mut t = if z < 0.3 { z } else { 1.0 - libm::sqrt(2.0 * (1.0 - z / edge)) };
    for _ in 0..100 {
        let e = libm::exp(-t);
        let f = t * e - z;
        let d = (1.0 - t) * e;
        if d <= 0.0 {
            break;
        }
        let next = (t - f / d).clamp(0.0, 1.0);
        if libm::fabs(next - t) < 1e-16 {
            t = next;
            break;
        }
        t = next;
    }
    Ok(t)
}

/// `A(ζ, λ)` and `B(ζ, λ) = 1 / (1 - T(ζ) h(λ))` at the saddle.
pub fn eval_a_b(s: &SaddlePoint) -> Result<(f64, f64)> {
    let t = s.tzeta;
    if !(t < 1.0) {
        return Err(Error::Singularity(format!("T(ζ) = {t} is not below 1")));
    }
    let denom = 1.0 - t * kernel_h(s.lambda);
    if !(denom > 0.0) {
        return Err(Error::Singularity(format!("1 - T h(λ) = {denom}")));
    }
    let b = 1.0 / denom;
    let el = libm::exp(s.lambda);
    let a = libm::exp(-t * el / 2.0 - t * t * el * el / 4.0 + t / 2.0 + t * t / 4.0)
        * libm::sqrt((1.0 - t) * b);
    Ok((a, b))
}

/// Closed form of the Hessian of `(t1, t2) -> log B(e^{t1}, e^{t2})` at the
/// saddle, in terms of `n/k`.
pub fn hessian(s: &SaddlePoint, n_over_k: f64) -> [[f64; 2]; 2] {
    let t = s.tzeta;
    let h11 = n_over_k / ((1.0 - t) * (1.0 - t)) + n_over_k * n_over_k;
    let h12 = 2.0 / (1.0 - t) + 2.0 * n_over_k;
    let h22 = s.lambda * (1.0 - t) * n_over_k + 2.0 * s.lambda;
    [[h11, h12], [h12, h22]]
}

fn log_b(t1: f64, t2: f64) -> Result<f64> {
    let t = tree_function(libm::exp(t1))?;
    let inner = 1.0 - t * kernel_h(libm::exp(t2));
    if !(inner > 0.0) {
        return Err(Error::Singularity(format!("1 - T h = {inner}")));
    }
    Ok(-libm::log(inner))
}

/// Ridders' extrapolation of a symmetric difference quotient `est(h)` whose
/// error is a series in `h^2`, starting from `h0`.
fn extrapolate(est: &dyn Fn(f64) -> Result<f64>, h0: f64) -> Result<f64> {
    const SHRINK: f64 = 1.4;
    const ROWS: usize = 10;
    let mut table = [[0.0f64; ROWS]; ROWS];
    let mut h = h0;
    table[0][0] = est(h)?;
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..ROWS {
        h /= SHRINK;
        table[0][i] = est(h)?;
        let mut fac = SHRINK * SHRINK;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let e = libm::fabs(table[j][i] - table[j - 1][i])
                .max(libm::fabs(table[j][i] - table[j - 1][i - 1]));
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if libm::fabs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err {
            break;
        }
    }
    Ok(best)
}

/// Steps in `log ζ` must keep `ζ` below `1/e`.
fn zeta_step(x: f64, step: f64, reach: f64) -> f64 {
    let room = -1.0 - x;
    if room > 0.0 {
        step.min(room / (reach + 1.0))
    } else {
        step
    }
}

/// Finite-difference Hessian of `log B(e^{t1}, e^{t2})` at `(log ζ, log λ)`,
/// extrapolated to zero step.
pub fn hessian_fd(s: &SaddlePoint, step: f64) -> Result<[[f64; 2]; 2]> {
    let (x, y) = (libm::log(s.zeta), libm::log(s.lambda));
    let f = |dx: f64, dy: f64| log_b(x + dx, y + dy);
    let f0 = f(0.0, 0.0)?;
    let hx = zeta_step(x, step, 1.0);
    let h11 = extrapolate(&|h| Ok((f(h, 0.0)? - 2.0 * f0 + f(-h, 0.0)?) / (h * h)), hx)?;
    let h22 = extrapolate(&|h| Ok((f(0.0, h)? - 2.0 * f0 + f(0.0, -h)?) / (h * h)), step)?;
    let h12 = extrapolate(
        &|h| Ok((f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h)),
        hx,
    )?;
    Ok([[h11, h12], [h12, h22]])
}

/// Finite-difference values of `ζ ∂_ζ B / B` and `λ ∂_λ B / B`, next to
/// their targets `n/k` and `2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleResiduals {
    pub zeta_condition: f64,
    pub lambda_condition: f64,
    pub zeta_residual: f64,
    pub lambda_residual: f64,
}

pub fn saddle_residuals(s: &SaddlePoint, step: f64) -> Result<SaddleResiduals> {
    let (x, y) = (libm::log(s.zeta), libm::log(s.lambda));
    let hx = zeta_step(x, step, 1.0);
    let zeta_condition = extrapolate(&|h| Ok((log_b(x + h, y)? - log_b(x - h, y)?) / (2.0 * h)), hx)?;
    let lambda_condition =
        extrapolate(&|h| Ok((log_b(x, y + h)? - log_b(x, y - h)?) / (2.0 * h)), step)?;
    let n_over_k = 1.0 / s.ratio;
    Ok(SaddleResiduals {
        zeta_condition,
        lambda_condition,
        zeta_residual: zeta_condition - n_over_k,
        lambda_residual: lambda_condition - 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_roots() {
        let one = solve_saddle(1.0).unwrap();
        assert!(libm::fabs(one.lambda - 3.83) < 0.01);
        assert!(libm::fabs(one.residual) < 1e-12);
        let half = solve_saddle(0.5).unwrap();
        assert!(libm::fabs(half.lambda - 2.58) < 0.01);
        assert!(solve_saddle(1e-9).unwrap().lambda < 1e-3);
        assert!(solve_saddle(0.0).is_err());
        assert!(solve_saddle(-1.0).is_err());
    }

    #[test]
    fn bracket_widens_for_large_ratio() {
        let s = solve_saddle(40.0).unwrap();
        assert!(s.lambda > 30.0);
        assert!(libm::fabs(s.residual) < 1e-12);
    }

    #[test]
    fn tree_function_values() {
        let t = tree_function(0.2).unwrap();
        assert!(libm::fabs(t - 0.2 * libm::exp(t)) < 1e-15);
        assert!(libm::fabs(tree_function(libm::exp(-1.0)).unwrap() - 1.0) < 1e-7);
        assert!(tree_function(0.5).is_err());
    }

    #[test]
    fn a_and_b_positive() {
        let s = solve_saddle(1.0).unwrap();
        let (a, b) = eval_a_b(&s).unwrap();
        assert!(a > 0.0 && b > 1.0);
        let again = eval_a_b(&solve_saddle(1.0).unwrap()).unwrap();
        assert_eq!((a, b), again);
    }

    #[test]
    fn hessian_positive_definite() {
        let s = solve_saddle(1.0).unwrap();
        let h = hessian(&s, 1.0);
        assert!(h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0);
    }

    #[test]
    fn finite_differences_match_closed_forms() {
        let s = solve_saddle(0.7).unwrap();
        let r = saddle_residuals(&s, 1e-2).unwrap();
        assert!(libm::fabs(r.zeta_residual) < 1e-9 && libm::fabs(r.lambda_residual) < 1e-9);
        let h = hessian(&s, 1.0 / 0.7);
        let fd = hessian_fd(&s, 1e-2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(libm::fabs(h[a][b] - fd[a][b]) < 1e-7 * libm::fabs(h[a][b]));
            }
        }
    }
}
