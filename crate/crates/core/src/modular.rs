//! Connected graph counts modulo word-size primes, reassembled by CRT.
//!
//! `C(z, w) = log SG(z, w)` satisfies
//! `(1 + w) dC/dw = (θ²C + (θC)² - θC) / 2` with `θ = z d/dz`, because
//! `(1+w)^{C(n,2)}` is an eigenvector of `(1+w) d/dw` with eigenvalue
//! `(θ² - θ)/2`. Reading off `w^m z^n / n!` gives the edge-insertion recurrence
//!
//! `(m+1) c(n, m+1) = (n² - n - 2m)/2 c(n, m)
//!     + 1/2 sum_s C(n, s) s (n-s) sum_j c(s, j) c(n-s, m-j)`
//!
//! started from `c(n, n-2) = 0`. Only small integers are ever inverted, so
//! it runs verbatim modulo any large prime.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::binomial;

/// Residues are kept below 2^56 so that 2^16 raw products fit in a `u128`.
pub const PRIME_BITS: u32 = 56;
const LAZY_TERMS: usize = 1 << 15;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest `count` primes below `2^PRIME_BITS`, in decreasing order.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = (1u64 << PRIME_BITS) - 1;
    while out.len() < count {
        if is_prime_u64(candidate) {
            out.push(candidate);
        }
        candidate -= 2;
    }
    out
}

/// Enough primes for the CRT to recover any connected count with at most
/// `n_max` vertices and excess at most `k_max`.
pub fn primes_for_table(n_max: usize, k_max: i64) -> Vec<u64> {
    let mut bits = 1u64;
    for n in 1..=n_max {
        let edges = (n * (n - 1) / 2) as u64;
        let m = (n as i64 + k_max).clamp(0, edges as i64) as u64;
        // C(E, j) increases up to j = E/2 and bounds every count with j edges
        let m = m.min(edges / 2);
        bits = bits.max(binomial(edges, m).bits());
    }
    let usable = (PRIME_BITS - 1) as u64;
    word_primes((bits / usable + 2) as usize)
}

/// `c(n, n + e) mod p` for `1 <= n <= n_max`, `-1 <= e <= k_max`, stored as
/// `rows[n][e + 1]`.
pub fn connected_table_mod(n_max: usize, k_max: i64, p: u64) -> Result<Vec<Vec<u64>>> {
    if k_max < -1 {
        return Err(Error::Domain("excess must be at least -1".into()));
    }
    if p >= 1 << PRIME_BITS || !is_prime_u64(p) || (p as u128) <= (n_max as u128).pow(2) {
        return Err(Error::Domain("modulus must be a large prime below 2^56".into()));
    }
    let width = (k_max + 2) as usize;
    let max_excess = |n: usize| (n * n.saturating_sub(1) / 2) as i64 - n as i64;
    let mut rows = vec![vec![0u64; width]; n_max + 1];
    if n_max == 0 {
        return Ok(rows);
    }
    rows[1][0] = 1;
    let half = inv_mod(2, p);
    let mut binom_row = vec![1u64, 1];
    let mut conv = vec![0u128; width];
    let mut conv_reduced = vec![0u64; width];
    for n in 2..=n_max {
        let mut next = vec![1u64; n + 1];
        for s in 1..n {
            next[s] = (binom_row[s - 1] + binom_row[s]) % p;
        }
        binom_row = next;
        // sum_s C(n,s) s (n-s) (row_s * row_{n-s}), folded over s <-> n-s
        let mut pair_sum = vec![0u64; width];
        for s in 1..=n / 2 {
            let r = n - s;
            let weight = {
                let w = mul_mod(binom_row[s], (s * r) as u64 % p, p);
                if s == r { w } else { (2 * w as u128 % p as u128) as u64 }
            };
            let top_s = (max_excess(s).min(k_max) + 1) as usize;
            let top_r = (max_excess(r).min(k_max) + 1) as usize;
            conv.iter_mut().for_each(|c| *c = 0);
            for (a, &x) in rows[s][..=top_s].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                // excess (a-1) + (b-1) = e stored at e + 1 = a + b - 1
                let b_hi = top_r.min(width - a);
                for (b, &y) in rows[r][..=b_hi].iter().enumerate() {
                    if a + b == 0 || a + b > width {
                        continue;
                    }
                    conv[a + b - 1] += x as u128 * y as u128;
                }
                if a % LAZY_TERMS == LAZY_TERMS - 1 {
                    conv.iter_mut().for_each(|c| *c %= p as u128);
                }
            }
            for (dst, c) in conv_reduced.iter_mut().zip(&conv) {
                *dst = (*c % p as u128) as u64;
            }
            for (acc, &c) in pair_sum.iter_mut().zip(&conv_reduced) {
                *acc = (*acc + mul_mod(weight, c, p)) % p;
            }
        }
        // pair_sum[idx] is indexed by the excess e with idx = e + 1; the
        // edge count m = n + e and the step builds c(n, m + 1).
        let nn = n as u64;
        let mut current = 0u64; // c(n, n - 2)
        let mut current_pair = {
            // components of excess -1 each, total excess -2
            let mut acc = 0u64;
            for s in 1..=n / 2 {
                let r = n - s;
                let w = mul_mod(binom_row[s], (s * r) as u64 % p, p);
                let w = if s == r { w } else { (2 * w as u128 % p as u128) as u64 };
                acc = (acc + mul_mod(w, mul_mod(rows[s][0], rows[r][0], p), p)) % p;
            }
            acc
        };
        let top = max_excess(n).min(k_max);
        for e in -2..top {
            let m = nn as i64 + e;
            let lin = {
                let coeff = (nn * nn - nn) as i128 - 2 * m as i128;
                let c = coeff.rem_euclid(p as i128) as u64;
                mul_mod(c, current, p)
            };
            let total = mul_mod((lin + current_pair) % p, half, p);
            current = mul_mod(total, inv_mod((m + 1) as u64 % p, p), p);
            let idx = (e + 2) as usize;
            rows[n][idx] = current;
            current_pair = if idx < width { pair_sum[idx] } else { 0 };
        }
    }
    Ok(rows)
}

/// Chinese remaindering of residues into the least non-negative value.
pub fn crt_combine(residues: &[u64], primes: &[u64]) -> BigUint {
    let mut value = BigUint::zero();
    let mut modulus = BigUint::from(1u32);
    for (&r, &p) in residues.iter().zip(primes) {
        let current = (&value % p).to_u64().unwrap();
        let m_mod = (&modulus % p).to_u64().unwrap();
        let diff = (r + p - current) % p;
        let t = mul_mod(diff, inv_mod(m_mod, p), p);
        value += &modulus * t;
        modulus *= p;
    }
    value
}

/// Exact connected counts for the requested `(n, excess)` cells through
/// [`connected_table_mod`] and CRT, one prime after another.
pub fn connected_counts_crt(cells: &[(usize, i64)]) -> Result<Vec<BigUint>> {
    let n_max = cells.iter().map(|c| c.0).max().unwrap_or(0);
    let k_max = cells.iter().map(|c| c.1).max().unwrap_or(-1);
    if cells.iter().any(|&(n, e)| n == 0 || e < -1) {
        return Err(Error::Domain("cells need n >= 1 and excess >= -1".into()));
    }
    let primes = primes_for_table(n_max, k_max);
    let mut residues = vec![Vec::with_capacity(primes.len()); cells.len()];
    for &p in &primes {
        let table = connected_table_mod(n_max, k_max, p)?;
        for (slot, &(n, e)) in residues.iter_mut().zip(cells) {
            slot.push(table[n][(e + 1) as usize]);
        }
    }
    Ok(residues.iter().map(|r| crt_combine(r, &primes)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gf::AnchoredRecurrence;
    use num_bigint::BigInt;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64((1 << 61) - 1));
        let ps = word_primes(3);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p < 1 << PRIME_BITS));
    }

    #[test]
    fn crt_recovers_large_value() {
        let primes = word_primes(4);
        let value = BigUint::from(3u32).pow(120);
        let residues: Vec<u64> = primes.iter().map(|&p| (&value % p).to_u64().unwrap()).collect();
        assert_eq!(crt_combine(&residues, &primes), value);
    }

    #[test]
    fn small_table_values() {
        let p = word_primes(1)[0];
        let t = connected_table_mod(5, 2, p).unwrap();
        assert_eq!(t[4][0], 16);
        assert_eq!(t[4][1], 15);
        assert_eq!(t[4][2], 6);
        assert_eq!(t[4][3], 1);
        assert_eq!(t[3][1], 1);
        assert_eq!(t[3][2], 0);
        assert_eq!(t[5][0], 125);
        assert_eq!(t[1][1], 0);
    }

    #[test]
    fn matches_anchored_recurrence() {
        let n_max = 24;
        let k_max = 20i64;
        let rec = AnchoredRecurrence::new(n_max, n_max + k_max as usize);
        let cells: Vec<(usize, i64)> = (1..=n_max)
            .flat_map(|n| (-1..=k_max).map(move |e| (n, e)))
            .collect();
        let values = connected_counts_crt(&cells).unwrap();
        for (&(n, e), v) in cells.iter().zip(&values) {
            let m = (n as i64 + e) as usize;
            let expected = if m > n * (n - 1) / 2 {
                BigInt::zero()
            } else {
                rec.count(n, m).unwrap()
            };
            assert_eq!(BigInt::from(v.clone()), expected, "n={n} e={e}");
        }
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(connected_table_mod(5, 2, 15).is_err());
        assert!(connected_table_mod(5, -2, word_primes(1)[0]).is_err());
    }
}
