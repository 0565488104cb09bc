use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::modular::connected_counts_crt;

use super::dominant::dominant_term_log;
use super::log_magnitude::LogMagnitude;

/// `r(n) = CSG_{n,k} / D_{n,k}` at one size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioPoint {
    pub n: u64,
    pub k: u64,
    pub ratio: f64,
}

impl RatioPoint {
    /// `n (r(n) - 1)`.
    pub fn scaled_error(&self) -> f64 {
        self.n as f64 * (self.ratio - 1.0)
    }
}

pub fn ratio_point(n: u64, k: u64, exact: &BigUint) -> Result<RatioPoint> {
    let d = dominant_term_log(n, k)?;
    Ok(RatioPoint {
        n,
        k,
        ratio: LogMagnitude::from_biguint(exact).ratio(&d),
    })
}

/// Empirical `c1` in `r(n) = 1 + c1/n + O(1/n^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct C1Estimate {
    /// Polynomial extrapolation of `n (r(n) - 1)` to `1/n = 0` through all points.
    pub estimate: f64,
    /// Largest distance from `estimate` among lower-order extrapolations.
    pub uncertainty: f64,
    pub variants: Vec<f64>,
    pub points: Vec<RatioPoint>,
}

/// Neville's scheme evaluated at 0.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p: Vec<f64> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Richardson-style extrapolation of `n (r(n) - 1)` in `h = 1/n`.
pub fn c1_fit(points: &[RatioPoint]) -> Result<C1Estimate> {
    if points.len() < 3 {
        return Err(Error::Domain("c1 extrapolation needs at least 3 sizes".into()));
    }
    if points.windows(2).any(|w| w[0].n >= w[1].n) {
        return Err(Error::Domain("sizes must be strictly increasing".into()));
    }
    let hs: Vec<f64> = points.iter().map(|p| 1.0 / p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(RatioPoint::scaled_error).collect();
    let estimate = extrapolate_to_zero(&hs, &ys);
    let mut variants = Vec::new();
    let len = points.len();
    // lower-order extrapolations on the largest sizes, plus the raw last value
    for width in (1..len).rev() {
        variants.push(extrapolate_to_zero(&hs[len - width..], &ys[len - width..]));
    }
    let uncertainty = variants
        .iter()
        .map(|v| libm::fabs(v - estimate))
        .fold(0.0, f64::max);
    Ok(C1Estimate {
        estimate,
        uncertainty,
        variants,
        points: points.to_vec(),
    })
}

/// `c1_fit` on exact counts from the modular edge-insertion route; `k = ratio n`
/// must be an integer for every `n`.
pub fn c1_fit_exact(ratio_num: u64, ratio_den: u64, n_list: &[u64]) -> Result<C1Estimate> {
    if ratio_num == 0 || ratio_den == 0 {
        return Err(Error::Domain("ratio must be positive".into()));
    }
    let mut cells = Vec::new();
    for &n in n_list {
        if (n * ratio_num) % ratio_den != 0 {
            return Err(Error::Domain(alloc::format!(
                "k = {ratio_num}/{ratio_den} * {n} is not an integer"
            )));
        }
        cells.push((n as usize, (n * ratio_num / ratio_den) as i64));
    }
    let counts = connected_counts_crt(&cells)?;
    let points = cells
        .iter()
        .zip(&counts)
        .map(|(&(n, k), c)| ratio_point(n as u64, k as u64, c))
        .collect::<Result<Vec<_>>>()?;
    c1_fit(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn synthetic(c1: f64, c2: f64, ns: &[u64]) -> Vec<RatioPoint> {
        ns.iter()
            .map(|&n| {
                let x = n as f64;
                RatioPoint {
                    n,
                    k: n,
                    ratio: 1.0 + c1 / x + c2 / (x * x),
                }
            })
            .collect()
    }

    #[test]
    fn recovers_synthetic_constant() {
        let fit = c1_fit(&synthetic(-3.0, 7.0, &[10, 20, 40])).unwrap();
        assert!(libm::fabs(fit.estimate + 3.0) < 1e-9);
        assert_eq!(fit.variants.len(), 2);
    }

    #[test]
    fn refuses_short_or_unsorted_input() {
        assert!(c1_fit(&synthetic(1.0, 0.0, &[10, 20])).is_err());
        assert!(c1_fit(&synthetic(1.0, 0.0, &[20, 10, 40])).is_err());
        assert!(c1_fit_exact(1, 2, &[3, 4, 6]).is_err());
    }

    #[test]
    fn small_exact_ratios_increase() {
        let cells = vec![(10usize, 10i64), (20, 20)];
        let counts = connected_counts_crt(&cells).unwrap();
        let r10 = ratio_point(10, 10, &counts[0]).unwrap();
        let r20 = ratio_point(20, 20, &counts[1]).unwrap();
        assert!(r10.ratio < r20.ratio && r20.ratio < 1.0);
    }
}
