use acyc_core::exactnum::arith::mod_pow;
use acyc_core::exactnum::{CycInt, PadicCtx, PadicNum, Poly};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cyc(m: u64, coeffs: &[i64]) -> CycInt {
    let terms: Vec<(u64, BigInt)> = coeffs.iter().enumerate().map(|(e, &c)| (e as u64, BigInt::from(c))).collect();
    CycInt::from_exponents(m, &terms)
}

fn cyc_strategy() -> impl Strategy<Value = CycInt> {
    (prop::sample::select(vec![1u64, 3, 4, 5, 8, 12, 15]), prop::collection::vec(-5i64..=5, 1..8))
        .prop_map(|(m, c)| cyc(m, &c))
}

fn padic_strategy(p: u64, d: u32, prec: u32) -> impl Strategy<Value = PadicNum> {
    (any::<i64>(), any::<i64>()).prop_map(move |(a, b)| {
        let ctx = PadicCtx::new(p, d, prec).unwrap();
        PadicNum::new(&ctx, BigInt::from(a), if d == 2 { BigInt::from(b) } else { BigInt::from(0) })
    })
}

/// Multiplication mod Φ_5 by schoolbook product and reduction x^4 = −(1+x+x²+x³).
fn brute_mod_phi5(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut prod = vec![0i64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    // x^5 = 1 first, then x^4 = −(1+x+x²+x³)
    let mut r = [0i64; 5];
    for (i, c) in prod.iter().enumerate() {
        r[i % 5] += c;
    }
    (0..4).map(|i| r[i] - r[4]).collect()
}

#[test]
fn embed_square_descend_matches_direct_square() {
    // ζ_5 + ζ_5⁴
    let x = cyc(5, &[0, 1, 0, 0, 1]);
    let sq15 = x.embed(15).unwrap().pow(2).descend();
    let direct = x.pow(2);
    assert_eq!(sq15.conductor(), 5);
    assert_eq!(sq15, direct);
    let xr = [-1i64, 0, -1, -1]; // ζ + ζ⁴ reduced mod Φ_5
    let want = brute_mod_phi5(&xr, &xr);
    let got: Vec<i64> = direct
        .embed(5)
        .unwrap()
        .coeffs()
        .iter()
        .map(|c| i64::try_from(c.clone()).unwrap())
        .collect();
    assert_eq!(got, want);
}

#[test]
fn one_embeds_to_one() {
    for m in [3u64, 5, 12, 20] {
        assert!(CycInt::one().embed(m).unwrap().is_one());
    }
    assert!(CycInt::zeta(3, 1).embed(10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cyc_ring_axioms(a in cyc_strategy(), b in cyc_strategy(), c in cyc_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn embed_is_ring_hom(a in cyc_strategy(), b in cyc_strategy()) {
        let t = 120;
        let lhs = (&a * &b).embed(t).unwrap();
        let rhs = &a.embed(t).unwrap() * &b.embed(t).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs.descend(), (&a * &b).descend());
    }

    #[test]
    fn padic_ring_axioms(a in padic_strategy(5, 2, 8), b in padic_strategy(5, 2, 8), c in padic_strategy(5, 2, 8)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn padic_ring_axioms_at_two(a in padic_strategy(2, 2, 10), b in padic_strategy(2, 2, 10), c in padic_strategy(2, 2, 10)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn teichmuller_multiplicative(a in padic_strategy(7, 2, 6), b in padic_strategy(7, 2, 6)) {
        prop_assume!(a.is_unit() && b.is_unit());
        let lhs = &a.teichmuller().unwrap() * &b.teichmuller().unwrap();
        prop_assert_eq!(lhs, (&a * &b).teichmuller().unwrap());
    }

    #[test]
    fn teichmuller_is_root_of_unity(a in padic_strategy(5, 1, 7)) {
        prop_assume!(a.is_unit());
        let w = a.teichmuller().unwrap();
        prop_assert!(w.pow(4).unwrap().is_one());
        prop_assert_eq!(w.truncate(1), a.truncate(1));
        prop_assert!((&a * &w.inv().unwrap() - PadicNum::one(a.ctx())).valuation() >= 1);
    }

    #[test]
    fn precision_contract(a in padic_strategy(5, 2, 12), b in padic_strategy(5, 2, 12)) {
        // computing at precision 12 then truncating agrees with computing at precision 5
        let lo = |x: &PadicNum| x.truncate(5);
        prop_assert_eq!(lo(&(&a * &b)), &lo(&a) * &lo(&b));
        prop_assert_eq!(lo(&(&a + &b)), &lo(&a) + &lo(&b));
        if b.is_unit() {
            prop_assert_eq!(lo(&a.div(&b).unwrap()), lo(&a).div(&lo(&b)).unwrap());
        }
    }

    #[test]
    fn poly_ring_axioms(a in prop::collection::vec(-9i64..9, 0..5), b in prop::collection::vec(-9i64..9, 0..5), c in prop::collection::vec(-9i64..9, 0..5)) {
        let p = |v: &Vec<i64>| Poly::new(v.iter().map(|&x| BigInt::from(x)).collect());
        let (a, b, c) = (p(&a), p(&b), p(&c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!(a.mul(&b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }
    }
}

#[test]
fn teichmuller_of_two_against_iteration() {
    let ctx = PadicCtx::new(5, 1, 4).unwrap();
    let w = PadicNum::from_int(&ctx, 2).teichmuller().unwrap();
    let mut y = 2u64;
    for _ in 0..4 {
        y = mod_pow(y, 5, 625);
    }
    assert_eq!(w, PadicNum::from_int(&ctx, y as i64));
    assert_eq!(y % 5, 2);
}
