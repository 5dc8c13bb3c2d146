//! Cross-module invariants, mostly property-based.

use proptest::prelude::*;

use linkform::arith::{
    ext_gcd, factorize, gcd, is_square_unit_mod, jacobi, legendre, Symbol,
};
use linkform::cohomology::{smith_normal_form, IntMatrix2x2};
use linkform::oracle::{brute_coker, brute_legendre, brute_square_unit, brute_unit_square_table};

fn odd_primes_below(bound: u64) -> Vec<u64> {
    (3..bound).filter(|&p| linkform::arith::is_prime(p as u128)).collect()
}

#[test]
fn symbols_match_enumeration_for_all_small_primes() {
    // jacobi(x, p) = legendre(x, p) = enumeration, for every residue.
    for p in odd_primes_below(1000) {
        let table = brute_unit_square_table(p);
        for x in 0..p {
            let expected = if x == 0 {
                Symbol::Zero
            } else if table[x as usize] {
                Symbol::PlusOne
            } else {
                Symbol::MinusOne
            };
            assert_eq!(legendre(x as i128, p as u128).unwrap(), expected, "({x}/{p})");
            assert_eq!(jacobi(x as i128, p as i128).unwrap(), expected, "({x}/{p})");
        }
    }
}

#[test]
fn brute_legendre_agrees_on_negatives() {
    for p in [5u64, 13, 17, 101] {
        for x in -30i128..30 {
            assert_eq!(brute_legendre(x, p), legendre(x, p as u128).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn legendre_is_multiplicative(
        idx in 0usize..168,
        x in -5000i128..5000,
        y in -5000i128..5000,
    ) {
        let primes = odd_primes_below(1000);
        let p = primes[idx % primes.len()] as u128;
        let lhs = legendre(x * y, p).unwrap();
        let rhs = legendre(x, p).unwrap() * legendre(y, p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_is_multiplicative_in_both_arguments(
        x in -3000i128..3000,
        y in -3000i128..3000,
        m in (1i128..400).prop_map(|k| 2 * k + 1),
        n in (1i128..400).prop_map(|k| 2 * k + 1),
    ) {
        let top = jacobi(x * y, m).unwrap();
        prop_assert_eq!(top, jacobi(x, m).unwrap() * jacobi(y, m).unwrap());
        let bottom = jacobi(x, m * n).unwrap();
        prop_assert_eq!(bottom, jacobi(x, m).unwrap() * jacobi(x, n).unwrap());
    }

    #[test]
    fn ext_gcd_always_certifies(x in -1_000_000i128..1_000_000, y in -1_000_000i128..1_000_000) {
        prop_assume!(x != 0 || y != 0);
        let (g, u, v) = ext_gcd(x, y).unwrap();
        prop_assert_eq!(u * x + v * y, g);
        prop_assert_eq!(g, gcd(x, y));
        prop_assert!(g > 0);
    }

    #[test]
    fn factorize_recombines(n in prop::num::i64::ANY) {
        prop_assume!(n != 0);
        let f = factorize(n as i128).unwrap();
        prop_assert_eq!(f.recombine(), n as i128);
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn snf_transform_identity_holds_broadly(
        m11 in -10_000i128..=10_000, m12 in -10_000i128..=10_000,
        m21 in -10_000i128..=10_000, m22 in -10_000i128..=10_000,
    ) {
        let m = IntMatrix2x2::new(m11, m12, m21, m22);
        // smith_normal_form asserts left·M·right = diag internally
        let snf = smith_normal_form(&m);
        prop_assert_eq!((snf.d1 * snf.d2).unsigned_abs(), m.det().unsigned_abs());
    }
}

proptest! {
    #[test]
    fn square_unit_decision_matches_brute(x in 1i128..5000, n in 2i128..5000) {
        prop_assume!(gcd(x, n) == 1);
        let fast = is_square_unit_mod(x, n).unwrap().is_square();
        prop_assert_eq!(fast, brute_square_unit(x, n).unwrap());
    }

    #[test]
    fn snf_cokernels_match_enumeration(
        m11 in -20i128..=20, m12 in -20i128..=20,
        m21 in -20i128..=20, m22 in -20i128..=20,
    ) {
        let m = IntMatrix2x2::new(m11, m12, m21, m22);
        let snf = smith_normal_form(&m);
        let brute = brute_coker(&m);
        prop_assert_eq!(snf.cokernel_order(), brute.order);
        prop_assert_eq!(snf.cokernel_cyclic(), brute.cyclic);
    }
}
