use acyc_core::exactnum::arith::primes_up_to;
use acyc_core::exactnum::{CycFrac, CycInt, Poly};
use acyc_core::normrel::{
    congruence_check_inert, congruence_check_split, congruence_check_split_mutated, euler_p, euler_p_inert, euler_q,
    normrel_rhs, p_tilde, HeckeDatum, Laurent, Mutation, NormRelError,
};

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(a: i64, b: i64) -> CycFrac {
    CycFrac::ratio(a, b)
}

fn poly(cs: &[CycFrac]) -> Poly<CycFrac> {
    Poly::new(cs.to_vec())
}

fn root(rng: &mut ChaCha8Rng) -> (u64, i64) {
    let n = rng.gen_range(1..=12u64);
    (n, rng.gen_range(0..n as i64))
}

fn zeta((n, t): (u64, i64)) -> CycInt {
    CycInt::zeta(n, t)
}

fn weights(rng: &mut ChaCha8Rng) -> (i64, i64, i64) {
    loop {
        let k = 2 * rng.gen_range(1..=6);
        let l = rng.gen_range(2..=12);
        let m = rng.gen_range(2..=12);
        if (l - m) % 2 == 0 && k <= l + m && l <= k + m && m <= k + l {
            return (k, l, m);
        }
    }
}

fn random_datum(rng: &mut ChaCha8Rng, split: bool) -> HeckeDatum {
    let primes = primes_up_to(97);
    let q = primes[rng.gen_range(0..primes.len())];
    let (k, l, m) = weights(rng);
    let bound = (2.0 * (q as f64).powf((k - 1) as f64 / 2.0)).floor().min(1e15) as i64 - 1;
    let a = rng.gen_range(-bound..=bound);
    let a_q = if rng.gen_bool(0.3) {
        // a unit multiple keeps every conjugate inside the bound
        &CycInt::from_int(a) * &zeta(root(rng))
    } else {
        CycInt::from_int(a)
    };
    let e1 = root(rng);
    let e2 = root(rng);
    HeckeDatum {
        q,
        split,
        a_q,
        k,
        l,
        m,
        psi1_q: zeta(root(rng)),
        psi1_qbar: zeta(root(rng)),
        psi2_q: zeta(root(rng)),
        psi2_qbar: zeta(root(rng)),
        eta1_q: zeta(e1),
        eta1_qbar: zeta((e1.0, -e1.1)),
        eta2_q: zeta(e2),
        eta2_qbar: zeta((e2.0, -e2.1)),
    }
}

#[test]
fn split_euler_factor_examples() {
    let d = HeckeDatum::trivial(5, true, 2, 2, 2);
    assert_eq!(euler_p(&d, 1).unwrap(), poly(&[r(1, 1), r(0, 1), r(1, 5)]));
    assert_eq!(euler_p(&HeckeDatum::trivial(5, false, 2, 2, 2), 1), Err(NormRelError::InertDatum));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let d = random_datum(&mut rng, true);
        let q = BigInt::from(d.q);
        let p = euler_p(&d, 1).unwrap();
        let qk2 = CycFrac::new(CycInt::one(), num_traits::pow(q.clone(), (d.k / 2) as usize)).unwrap();
        let a = CycFrac::from_cyc(d.a_q.clone());
        let eta = CycFrac::from_cyc(d.eta1_q.clone());
        let want = poly(&[
            r(1, 1),
            -(&(&a * &eta) * &qk2),
            &(&eta * &eta) * &CycFrac::new(CycInt::one(), q.clone()).unwrap(),
        ]);
        assert_eq!(p, want);
        assert_eq!(p.coeff(0), Some(&r(1, 1)));
        let mut d2 = d.clone();
        d2.eta2_q = d.eta1_q.clone();
        d2.eta2_qbar = d.eta1_qbar.clone();
        assert_eq!(euler_p(&d2, 2).unwrap(), p);
    }
}

fn det2_char(m: [[CycFrac; 2]; 2]) -> Poly<CycFrac> {
    // det(1 − X·M)
    let one = r(1, 1);
    let tr = &m[0][0] + &m[1][1];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    poly(&[one, -tr, det])
}

fn mat_sq(m: &[[CycFrac; 2]; 2]) -> [[CycFrac; 2]; 2] {
    let e = |i: usize, j: usize| &(&m[i][0] * &m[0][j]) + &(&m[i][1] * &m[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

#[test]
fn inert_euler_factor_matches_induced_block() {
    let d = HeckeDatum::trivial(3, false, 2, 2, 2);
    assert_eq!(euler_p_inert(&d).unwrap(), poly(&[r(1, 1), r(2, 3), r(1, 9)]));
    assert_eq!(euler_p_inert(&HeckeDatum::trivial(3, true, 2, 2, 2)), Err(NormRelError::SplitDatum));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let mut d = random_datum(&mut rng, false);
        let weil = (2.0 * (d.q as f64).sqrt()).floor() as i64;
        d.a_q = CycInt::from_int(rng.gen_range(-20..=20i64).clamp(-weil, weil));
        let qk2 = num_traits::pow(BigInt::from(d.q), (d.k / 2) as usize);
        // Frob_q on the normalized dual: char poly t² − (a/q^{k/2})t + 1/q
        let m = [
            [r(0, 1), CycFrac::ratio(-1, d.q as i64)],
            [r(1, 1), CycFrac::new(d.a_q.clone(), qk2).unwrap()],
        ];
        assert_eq!(euler_p_inert(&d).unwrap(), det2_char(mat_sq(&m)), "{d:?}");
        let mut d2 = d.clone();
        d2.eta1_q = CycInt::zeta(7, 3);
        assert_eq!(euler_p_inert(&d2).unwrap(), euler_p_inert(&d).unwrap());
    }
}

#[test]
fn q_polynomial_examples() {
    let d = HeckeDatum::trivial(5, true, 2, 2, 2);
    let q = euler_q(&d, 1).unwrap();
    // q^r(1−q)/q^{l+m−2} with r = 0 and l + m − 2 = 2
    assert_eq!(q, Laurent::from_terms([(0, r(-4, 25)), (-1, r(-1, 1)), (1, r(-1, 1))]));
    let op = normrel_rhs(&d, 1).unwrap();
    assert_eq!(op, q);
    assert_eq!(op.eval_at_one(), r(-54, 25));
}

#[test]
fn q_polynomial_against_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let d = random_datum(&mut rng, true);
        for i in [1u8, 2] {
            let q = euler_q(&d, i).unwrap();
            let op = normrel_rhs(&d, i).unwrap();
            assert_eq!(q, op);
            // independent evaluation at Frob ↦ 1
            let qq = d.q as i64;
            let w = CycFrac::from_int(num_traits::pow(BigInt::from(qq), (d.k / 2 - 1) as usize));
            let (eta, eta_bar, pp) = if i == 1 {
                (&d.eta1_q, &d.eta1_qbar, &d.psi1_q * &d.psi2_qbar)
            } else {
                (&d.eta2_q, &d.eta2_qbar, &d.psi1_q * &d.psi2_q)
            };
            let e = d.r() - (d.l + d.m - 2);
            let qe = if e >= 0 {
                CycFrac::from_int(num_traits::pow(BigInt::from(qq), e as usize))
            } else {
                CycFrac::new(CycInt::one(), num_traits::pow(BigInt::from(qq), (-e) as usize)).unwrap()
            };
            let want = &(&(&CycFrac::from_cyc(d.a_q.clone()) + &(&(&CycFrac::from_int(1 - qq) * &qe) * &CycFrac::from_cyc(pp)))
                - &(&w * &CycFrac::from_cyc(eta.clone())))
                - &(&w * &CycFrac::from_cyc(eta_bar.clone()));
            assert_eq!(op.eval_at_one(), want);
            // 𝔮 ↔ 𝔮̄ with X ↔ X^{-1} only moves the ψ constant
            let s = euler_q(&d.swap_primes(), i).unwrap().invert();
            let diff = s.sub(&q);
            assert!(diff.terms().all(|(e, _)| e == 0));
        }
    }
}

#[test]
fn trivial_split_congruence() {
    let d = HeckeDatum::trivial(5, true, 2, 2, 2);
    let cert = congruence_check_split(&d, 1).unwrap();
    assert_eq!(cert.modulus, 4);
    // (q−1)/q^{(l+m+2)/2} = 4/125
    assert_eq!(cert.quotients, vec![(0, r(-1, 5)), (1, r(1, 125))]);
    let diff: Vec<_> = (0..3)
        .map(|e| cert.p_tilde.coeff(e).cloned().unwrap_or(r(0, 1)) - cert.p.coeff(e).cloned().unwrap_or(r(0, 1)))
        .collect();
    assert_eq!(diff, vec![r(-4, 5), r(4, 125), r(0, 1)]);
}

#[test]
fn split_congruence_batch() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let d = random_datum(&mut rng, true);
        for i in [1u8, 2] {
            let cert = congruence_check_split(&d, i).unwrap_or_else(|e| panic!("{e}: {d:?}"));
            assert!(cert.quotients.iter().all(|(e, _)| *e == 0 || *e == 1));
        }
    }
}

#[test]
fn mutations_are_caught() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    while count < 100 {
        let d = random_datum(&mut rng, true);
        if d.q == 2 {
            continue;
        }
        assert!(congruence_check_split_mutated(&d, 1, Some(Mutation::DropUNormalization)).is_err());
        assert!(matches!(
            congruence_check_split_mutated(&d, 1, Some(Mutation::DropOneMinusQ)),
            Err(NormRelError::NotDivisible { degree: 1, .. })
        ));
        assert_ne!(p_tilde(&d, 1, Some(Mutation::DropOneMinusQ)).unwrap(), p_tilde(&d, 1, None).unwrap());
        count += 1;
    }
}

#[test]
fn inert_congruence_examples() {
    let d = HeckeDatum::trivial(3, false, 2, 2, 2);
    let cert = congruence_check_inert(&d).unwrap();
    assert_eq!(cert.middle, r(-16, 3));
    assert_eq!(cert.rhs, r(-16, 3));
    assert_eq!(cert.quotients[1], r(0, 1));
    let d = HeckeDatum::trivial(3, false, 2, 4, 2);
    let cert = congruence_check_inert(&d).unwrap();
    // (4/3)(2 + 9 + 1) − 16/3 = 32/3
    assert_eq!(&cert.middle - &cert.rhs, r(32, 3));
    assert_eq!(cert.quotients[1], r(4, 3));
    assert!(matches!(
        congruence_check_inert(&HeckeDatum::trivial(3, false, 3, 2, 2)),
        Err(NormRelError::Parity { .. })
    ));
    assert!(matches!(
        congruence_check_inert(&HeckeDatum::trivial(3, false, 2, 3, 2)),
        Err(NormRelError::Parity { .. })
    ));
}

#[test]
fn inert_congruence_batch() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let d = random_datum(&mut rng, false);
        congruence_check_inert(&d).unwrap_or_else(|e| panic!("{e}: {d:?}"));
    }
}

#[test]
fn invalid_data() {
    let mut d = HeckeDatum::trivial(5, true, 2, 2, 2);
    d.a_q = CycInt::from_int(5);
    assert_eq!(euler_p(&d, 1), Err(NormRelError::WeilBound));
    let mut d = HeckeDatum::trivial(5, true, 2, 2, 2);
    d.eta1_qbar = CycInt::zeta(3, 1);
    assert_eq!(euler_q(&d, 1), Err(NormRelError::NotAnticyclotomic));
    assert_eq!(euler_p(&HeckeDatum::trivial(5, true, 2, 2, 8), 1), Err(NormRelError::Unbalanced { k: 2, l: 2, m: 8 }));
    assert_eq!(euler_p(&HeckeDatum::trivial(5, true, 2, 2, 2), 3), Err(NormRelError::BadIndex(3)));
    assert_eq!(euler_p(&HeckeDatum::trivial(6, true, 2, 2, 2), 1), Err(NormRelError::NotPrime(6)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn p_shape_and_congruence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_datum(&mut rng, true);
        let p = euler_p(&d, 1).unwrap();
        prop_assert_eq!(p.coeff(0), Some(&r(1, 1)));
        let eta = CycFrac::from_cyc(d.eta1_q.clone());
        prop_assert_eq!(p.coeff(2), Some(&(&(&eta * &eta) * &r(1, d.q as i64))));
        prop_assert!(congruence_check_split(&d, 1).is_ok());
        let inert = HeckeDatum { split: false, ..d };
        prop_assert!(congruence_check_inert(&inert).is_ok());
    }
}
