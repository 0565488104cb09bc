use excess_atlas_core::asymptotics::{s_value, solve_saddle, LogMagnitude};
use excess_atlas_core::graph_gf::compositions;
use excess_atlas_core::series::factorial;
use excess_atlas_core::{ExactRational, TruncatedSeries};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

const ORDER: usize = 6;

fn small_rational() -> impl Strategy<Value = ExactRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ExactRational::new(BigInt::from(n), BigInt::from(d)))
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(small_rational(), ORDER + 1).prop_map(TruncatedSeries::from_coeffs)
}

/// Series with constant term 1.
fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    series().prop_map(|mut s| {
        s.set_coeff(0, ExactRational::from_integer(1.into()));
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn exp_inverts_log(f in unit_series()) {
        let back = f.log().unwrap().exp().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn log_turns_products_into_sums(f in unit_series(), g in unit_series()) {
        let lhs = f.mul(&g).log().unwrap();
        let rhs = &f.log().unwrap() + &g.log().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_powers_add(f in unit_series(), a in small_rational(), b in small_rational()) {
        let lhs = f.pow_rational(&a).unwrap().mul(&f.pow_rational(&b).unwrap());
        let rhs = f.pow_rational(&(a + b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_inverse(f in unit_series()) {
        prop_assert_eq!(f.mul(&f.inverse().unwrap()), TruncatedSeries::one(ORDER));
    }

    #[test]
    fn s_sequence_decreases_in_d(q in 1u64..6, k in 1u64..14, d in 0u64..13) {
        prop_assume!(d < k);
        let wide = s_value(q, d, k).unwrap().value;
        let narrow = s_value(q, d + 1, k).unwrap().value;
        prop_assert!(narrow <= wide);
    }

    #[test]
    fn lambda_increases_with_ratio(a in 0.01f64..20.0, b in 0.01f64..20.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(solve_saddle(lo).unwrap().lambda < solve_saddle(hi).unwrap().lambda);
    }

    #[test]
    fn log_magnitude_of_factorials(n in 0u64..400, m in 0u64..400) {
        let a = LogMagnitude::from_biguint(&factorial(n));
        let b = LogMagnitude::from_biguint(&factorial(m));
        let prod = LogMagnitude::from_biguint(&(factorial(n) * factorial(m)));
        let scale = prod.ln_abs().abs().max(1.0);
        prop_assert!(((a * b).ln_abs() - prod.ln_abs()).abs() < 1e-12 * scale);
    }

    #[test]
    fn compositions_are_capped_and_complete(total in 0usize..9, parts in 1usize..4, cap in 0usize..9) {
        let all = compositions(total, parts, cap);
        for c in &all {
            prop_assert_eq!(c.len(), parts);
            prop_assert_eq!(c.iter().sum::<usize>(), total);
            prop_assert!(c.iter().all(|&x| (1..=cap).contains(&x)));
        }
        let brute = (0..(cap + 1).pow(parts as u32))
            .filter(|code| {
                let mut code = *code;
                let mut sum = 0;
                let mut positive = true;
                for _ in 0..parts {
                    let digit = code % (cap + 1);
                    positive &= digit > 0;
                    sum += digit;
                    code /= cap + 1;
                }
                positive && sum == total
            })
            .count();
        prop_assert_eq!(all.len(), brute);
    }
}

#[test]
fn biguint_round_trip_through_log_form() {
    let big: BigUint = factorial(1000);
    let lm = LogMagnitude::from_biguint(&big);
    // ln 1000! by Stirling with two correction terms
    let n = 1000f64;
    let stirling = n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n)
        - 1.0 / (360.0 * n * n * n);
    assert!((lm.ln_abs() - stirling).abs() < 1e-9);
}
