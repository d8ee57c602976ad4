use acyc_core::exactnum::arith::{is_fundamental_discriminant, kronecker, primes_up_to};
use acyc_core::quadfield::{class_group, ideals_of_norm, QuadField, QuadIdeal, QuadInt};
use proptest::prelude::*;

/// Class number of a fundamental discriminant d < −4 via h = −(1/|d|) Σ χ(n)·n.
fn analytic_class_number(d: i64) -> u64 {
    let m = -d;
    let s: i64 = (1..m).map(|n| kronecker(d, n as u64) as i64 * n).sum();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    (-s * w / 2 / m) as u64
}

/// Reduced-form count by plain triple loops.
fn brute_form_count(d: i64) -> u64 {
    let mut n = 0;
    let lim = (-d);
    for a in 1..=lim {
        if 3 * a * a > -d {
            break;
        }
        for b in -a..=a {
            for c in a..=lim {
                if b * b - 4 * a * c != d {
                    continue;
                }
                let g = gcd(gcd(a, b.abs()), c);
                let reduced = b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0);
                if g == 1 && reduced {
                    n += 1;
                }
            }
        }
    }
    n
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn class_numbers_agree_with_oracles() {
    for d in 4..=400u64 {
        if !is_fundamental_discriminant(-(d as i64)) {
            continue;
        }
        let k = QuadField::new(d).unwrap();
        let h = class_group(k.maximal_order()).unwrap().class_number();
        assert_eq!(h, brute_form_count(-(d as i64)), "D={d}");
        if d > 4 {
            assert_eq!(h, analytic_class_number(-(d as i64)), "D={d}");
        }
    }
}

#[test]
fn ring_class_numbers_match_formula() {
    // h(O_f) = h_K·f·Π(1 − χ(q)/q) / [O_K^× : O_f^×]
    for (d, f) in [(7u64, 2u64), (7, 5), (7, 25), (23, 3), (4, 3), (3, 7), (7, 11)] {
        let k = QuadField::new(d).unwrap();
        let hk = class_group(k.maximal_order()).unwrap().class_number();
        let mut num = hk * f;
        let mut den = 1;
        for q in primes_up_to(f).into_iter().filter(|q| f % q == 0) {
            num *= (q as i64 - kronecker(k.disc(), q) as i64) as u64;
            den *= q;
        }
        let idx = k.units().len() as u64 / 2;
        let want = num / den / idx;
        let got = class_group(k.order(f).unwrap()).unwrap().class_number();
        assert_eq!(got, want, "D={d} f={f}");
    }
}

/// Sublattices of index n of Z² closed under multiplication by ω.
fn sublattice_ideal_count(k: QuadField, n: i64) -> usize {
    let d = k.disc();
    let n0 = (d * d - d) / 4;
    let times_w = |u: i64, v: i64| (-v * n0, u + v * d);
    let inside = |a: i64, b: i64, c: i64, (u, v): (i64, i64)| v % c == 0 && (u - (v / c) * b) % a == 0;
    let mut count = 0;
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let c = n / a;
        for b in 0..a {
            if inside(a, b, c, times_w(a, 0)) && inside(a, b, c, times_w(b, c)) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn ideal_counts_match_sublattice_oracle() {
    for d in [7u64, 23, 4] {
        let k = QuadField::new(d).unwrap();
        for n in 1..=500u64 {
            let got = ideals_of_norm(k.maximal_order(), n, None).len();
            assert_eq!(got, sublattice_ideal_count(k, n as i64), "D={d} n={n}");
        }
    }
}

#[test]
fn ideals_of_norm_respect_modulus() {
    let k = QuadField::new(7).unwrap();
    let o = k.maximal_order();
    let p11 = match k.splitting(11).unwrap() {
        acyc_core::quadfield::Splitting::Split(a, _) => a,
        _ => unreachable!(),
    };
    let all = ideals_of_norm(o, 11 * 11 * 2, None);
    let coprime = ideals_of_norm(o, 11 * 11 * 2, Some(&p11));
    assert_eq!(all.len(), 6);
    assert_eq!(coprime.len(), 2);
    assert!(coprime.iter().all(|i| i.is_coprime_to(&p11)));
}

#[test]
fn split_density() {
    let k = QuadField::new(23).unwrap();
    let ps: Vec<u64> = primes_up_to(10_000).into_iter().filter(|&q| q != 23).collect();
    let split = ps.iter().filter(|&&q| k.splitting(q).unwrap().is_split()).count();
    let inert = ps.iter().filter(|&&q| k.splitting(q).unwrap().is_inert()).count();
    assert_eq!(split + inert, ps.len());
    let half = ps.len() as f64 / 2.0;
    assert!((split as f64 - half).abs() < 0.1 * half);
}

fn elem() -> impl Strategy<Value = QuadInt> {
    (-12i64..12, -12i64..12).prop_filter("nonzero", |(u, v)| *u != 0 || *v != 0).prop_map(|(u, v)| QuadInt::new(u, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn class_map_is_homomorphism(x in elem(), y in elem(), s in 1u64..60, t in 1u64..60) {
        let k = QuadField::new(23).unwrap();
        let o = k.maximal_order();
        let cg = class_group(o).unwrap();
        // random ideals: (x)·p_s and (y)·p_t with p a prime ideal above the s-th/t-th prime
        let pick = |i: u64| -> QuadIdeal {
            let q = primes_up_to(400).into_iter().filter(|&q| q != 23).nth(i as usize).unwrap();
            k.splitting(q).unwrap().primes()[0].clone()
        };
        let a = QuadIdeal::principal(o, x).mul(&pick(s)).unwrap();
        let b = QuadIdeal::principal(o, y).mul(&pick(t)).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.norm(), a.norm() * b.norm());
        let lhs = cg.class_of(&ab).unwrap();
        let rhs = cg.group().op(&cg.class_of(&a).unwrap(), &cg.class_of(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
        // conjugation inverts classes
        let inv = cg.class_of(&a.conj()).unwrap();
        prop_assert!(cg.group().is_identity(&cg.group().op(&inv, &cg.class_of(&a).unwrap())));
    }

    #[test]
    fn class_map_on_nonmaximal_order(s in 0usize..40, t in 0usize..40) {
        let k = QuadField::new(7).unwrap();
        let o = k.order(5).unwrap();
        let cg = class_group(o).unwrap();
        let pick = |i: usize| -> QuadIdeal {
            let q = primes_up_to(1000).into_iter().filter(|&q| q != 7 && q != 5 && k.kronecker(q) == 1).nth(i).unwrap();
            k.splitting(q).unwrap().primes()[0].restrict(5).unwrap()
        };
        let (a, b) = (pick(s), pick(t));
        let lhs = cg.class_of(&a.mul(&b).unwrap()).unwrap();
        let rhs = cg.group().op(&cg.class_of(&a).unwrap(), &cg.class_of(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
