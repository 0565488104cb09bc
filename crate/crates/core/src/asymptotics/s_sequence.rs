use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{double_factorial_table, ExactRational};

use super::log_magnitude::LogMagnitude;

/// `S_{q,d,k} = sum over k_1 + ... + k_q = k, 0 <= k_j <= k - d, of
/// prod (2k_j - 1)!! / (2k - 1)!!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSequenceValue {
    pub q: u64,
    pub d: u64,
    pub k: u64,
    pub value: ExactRational,
}

/// The numerator of `S_{q,d,k}` with cap `k - d`: a sum of products of
/// double factorials over capped compositions, by dynamic programming over
/// (parts used, running sum).
pub fn double_factorial_convolution(q: usize, cap: usize, k: usize) -> BigUint {
    let df = double_factorial_table(k);
    let mut dp = vec![BigUint::zero(); k + 1];
    dp[0] = BigUint::one();
    for _ in 0..q {
        let mut next = vec![BigUint::zero(); k + 1];
        for (s, slot) in next.iter_mut().enumerate() {
            for j in 0..=cap.min(s) {
                if !dp[s - j].is_zero() {
                    *slot += &df[j] * &dp[s - j];
                }
            }
        }
        dp = next;
    }
    core::mem::take(&mut dp[k])
}

pub fn s_value(q: u64, d: u64, k: u64) -> Result<SSequenceValue> {
    if q == 0 || d > k {
        return Err(Error::Domain(format!("S_{{q,d,k}} needs q >= 1 and d <= k (q={q}, d={d}, k={k})")));
    }
    let num = double_factorial_convolution(q as usize, (k - d) as usize, k as usize);
    let den = double_factorial_table(k as usize)[k as usize].clone();
    Ok(SSequenceValue {
        q,
        d,
        k,
        value: ExactRational::new(BigInt::from(num), BigInt::from(den)),
    })
}

/// One inequality family checked over a range.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub name: String,
    pub holds: bool,
    /// Largest value of the left side over the range (normalized as named).
    pub max_observed: f64,
    pub bound: f64,
    /// First violation `(q, d, k)` if any.
    pub witness: Option<(u64, u64, u64)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixReport {
    pub k_max: u64,
    pub checks: Vec<BoundCheck>,
}

impl AppendixReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub const APPENDIX_K_CAP: u64 = 200;
const THREE_Q_RANGE: usize = 150;
const TAIL_RANGE: (usize, usize) = (40, 150);
const TAIL_SUM_RANGE: usize = 80;

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    LogMagnitude::from_biguint(num).ratio(&LogMagnitude::from_biguint(den))
}

fn poly_mul_trunc(a: &[BigUint], b: &[BigUint], deg: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Check the inequalities on the S-sequences and the double factorial sums
/// for `k <= k_max` (each family has its own range, capped by `k_max`).
pub fn appendix_bound_checks(k_max: u64) -> Result<AppendixReport> {
    if k_max > APPENDIX_K_CAP {
        return Err(Error::CostGuard {
            what: "S-sequence range",
            value: k_max,
            cap: APPENDIX_K_CAP,
        });
    }
    let km = k_max as usize;
    let df = double_factorial_table(km.max(1));
    let mut checks = Vec::new();

    // S_{q,0,k} <= 3q: coefficients of F^q with F = sum (2j-1)!! x^j
    {
        let top = km.min(THREE_Q_RANGE);
        let mut power = vec![BigUint::zero(); top + 1];
        power[0] = BigUint::one();
        let mut worst = 0.0f64;
        let mut witness = None;
        let mut last_bad = 0usize;
        for q in 1..=top {
            power = poly_mul_trunc(&power, &df[..=top], top);
            for k in q..=top {
                let lhs = &power[k];
                let rhs = BigUint::from(3 * q as u64) * &df[k];
                worst = worst.max(ratio_f64(lhs, &df[k]) / q as f64);
                if *lhs > rhs {
                    witness.get_or_insert((q as u64, 0, k as u64));
                    last_bad = last_bad.max(k);
                }
            }
        }
        checks.push(BoundCheck {
            name: format!("S_{{q,0,k}} ≤ 3q (k ≤ {top})"),
            holds: witness.is_none(),
            max_observed: worst,
            bound: 3.0,
            witness,
            detail: format!("max S_{{q,0,k}}/q = {worst:.6}; holds for all k ≥ {}", last_bad + 1),
        });
    }

    // S_{q,k-d,k} <= 2^{-k}: parts capped at d
    {
        let (lo, hi) = (TAIL_RANGE.0, km.min(TAIL_RANGE.1));
        let mut worst = 0.0f64;
        let mut witness = None;
        for d in 0..=3usize {
            let base: Vec<BigUint> = df[..=d.min(hi)].to_vec();
            let mut power = vec![BigUint::zero(); hi + 1];
            power[0] = BigUint::one();
            for q in 1..=hi {
                power = poly_mul_trunc(&power, &base, hi);
                for k in lo.max(q)..=hi {
                    let lhs = &power[k] << k;
                    worst = worst.max(ratio_f64(&lhs, &df[k]));
                    if lhs > df[k] {
                        witness.get_or_insert((q as u64, (k - d) as u64, k as u64));
                    }
                }
            }
        }
        checks.push(BoundCheck {
            name: format!("S_{{q,k-d,k}} ≤ 2^-k (d ≤ 3, {lo} ≤ k ≤ {hi})"),
            holds: witness.is_none(),
            max_observed: worst,
            bound: 1.0,
            witness,
            detail: format!("max 2^k S_{{q,k-d,k}} = {worst:.3e}"),
        });
    }

    // k^d sum_{r=d}^{k-d} (2(k-r)-1)!! (2r-1)!! / (2k-1)!! stays bounded
    for d in 0..=3usize {
        let bound = f64::from(1u32 << (d + 2));
        let mut worst = 0.0f64;
        let mut witness = None;
        for k in (2 * d).max(1)..=km {
            let mut sum = BigUint::zero();
            for r in d..=k - d {
                sum += &df[k - r] * &df[r];
            }
            let v = ratio_f64(&sum, &df[k]) * libm::pow(k as f64, d as f64);
            worst = worst.max(v);
            if v > bound {
                witness.get_or_insert((0, d as u64, k as u64));
            }
        }
        checks.push(BoundCheck {
            name: format!("k^{d} · Σ_{{r={d}}}^{{k-{d}}} (2(k-r)-1)!!(2r-1)!!/(2k-1)!! bounded (k ≤ {km})"),
            holds: witness.is_none(),
            max_observed: worst,
            bound,
            witness,
            detail: format!("max = {worst:.6}, bound {bound}"),
        });
    }

    // k^{d+1} sum_{q=d+5}^{k} S_{q,q-1,k} / q stays bounded
    {
        let top = km.min(TAIL_SUM_RANGE);
        // tail[k] accumulates sum_q S_{q,q-1,k}/q for each d through q >= d + 5
        let mut per_q: Vec<Vec<f64>> = vec![vec![0.0; top + 1]; top + 1];
        for cap in 1..=top {
            let base: Vec<BigUint> = df[..=cap].to_vec();
            let mut power = vec![BigUint::zero(); top + 1];
            power[0] = BigUint::one();
            for q in 1..=top {
                power = poly_mul_trunc(&power, &base, top);
                // S_{q,q-1,k} has cap k - q + 1
                let k = cap + q - 1;
                if k > top {
                    break;
                }
                per_q[q][k] = ratio_f64(&power[k], &df[k]);
            }
        }
        for d in 0..=2usize {
            let bound = libm::pow(4.0, (d + 1) as f64);
            let mut worst = 0.0f64;
            let mut witness = None;
            for k in (d + 5)..=top {
                let sum: f64 = ((d + 5)..=k).map(|q| per_q[q][k] / q as f64).sum();
                let v = sum * libm::pow(k as f64, (d + 1) as f64);
                worst = worst.max(v);
                if v > bound {
                    witness.get_or_insert((0, d as u64, k as u64));
                }
            }
            checks.push(BoundCheck {
                name: format!("k^{} · Σ_{{q≥{}}} S_{{q,q-1,k}}/q bounded (k ≤ {top})", d + 1, d + 5),
                holds: witness.is_none(),
                max_observed: worst,
                bound,
                witness,
                detail: format!("max = {worst:.6}, bound {bound}"),
            });
        }
    }

    Ok(AppendixReport { k_max, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn base_values() {
        for k in 1..12 {
            assert_eq!(s_value(1, 0, k).unwrap().value, rat(1, 1));
        }
        assert_eq!(s_value(2, 0, 2).unwrap().value, rat(7, 3));
        assert_eq!(s_value(3, 4, 4).unwrap().value, rat(0, 1));
        assert!(s_value(0, 0, 3).is_err());
        assert!(s_value(2, 5, 3).is_err());
    }

    #[test]
    fn brute_force_small() {
        // direct sum over compositions
        let df = double_factorial_table(8);
        for k in 0..=6usize {
            for q in 1..=3usize {
                for cap in 0..=k {
                    let mut total = BigUint::zero();
                    let mut idx = vec![0usize; q];
                    loop {
                        if idx.iter().sum::<usize>() == k {
                            total += idx.iter().fold(BigUint::one(), |acc, &j| acc * &df[j]);
                        }
                        let mut p = 0;
                        while p < q && idx[p] == cap {
                            idx[p] = 0;
                            p += 1;
                        }
                        if p == q {
                            break;
                        }
                        idx[p] += 1;
                    }
                    assert_eq!(double_factorial_convolution(q, cap, k), total);
                }
            }
        }
    }

    #[test]
    fn small_report_holds() {
        let report = appendix_bound_checks(50).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert!(appendix_bound_checks(201).is_err());
    }
}
