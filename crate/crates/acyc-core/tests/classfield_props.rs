use acyc_core::classfield::{frobenius, ClassEval, RayClassGroup, RingClassGroup, SigmaMaps};
use acyc_core::exactnum::abelian::FiniteAbelianGroup;
use acyc_core::exactnum::arith::{factorize, kronecker, primes_up_to};
use acyc_core::quadfield::{class_group, ideals_of_norm, QuadField, QuadIdeal, QuadInt};
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Norm of u + vω written out from ω² = dω − n0.
fn norm(d: i64, u: i64, v: i64) -> i64 {
    let n0 = (d * d - d) / 4;
    u * u + d * u * v + n0 * v * v
}

fn mul(d: i64, (a, b): (i64, i64), (c, e): (i64, i64), n: i64) -> (i64, i64) {
    let n0 = (d * d - d) / 4;
    let u = a * c - n0 * b * e;
    let v = a * e + b * c + d * b * e;
    (u.rem_euclid(n), v.rem_euclid(n))
}

/// (O/n)^× by enumeration: order and exponent of the quotient by the image of O^×.
fn units_mod_n(d_k: u64, n: i64) -> (u64, u64) {
    let d = -(d_k as i64);
    let mut image: Vec<(i64, i64)> = Vec::new();
    for u in -3..=3i64 {
        for v in -3..=3i64 {
            if norm(d, u, v) == 1 {
                image.push((u.rem_euclid(n), v.rem_euclid(n)));
            }
        }
    }
    image.sort();
    image.dedup();
    let mut elems = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if gcd(norm(d, u, v), n) == 1 {
                elems.push((u, v));
            }
        }
    }
    // exponent of the quotient: least e with x^e in the unit image for all x
    let in_image = |x: (i64, i64)| image.contains(&x);
    let mut exponent = 1u64;
    for &x in &elems {
        let mut y = x;
        let mut k = 1u64;
        while !in_image(y) {
            y = mul(d, y, x, n);
            k += 1;
        }
        exponent = lcm(exponent, k);
    }
    ((elems.len() / image.len()) as u64, exponent)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as i64, b as i64) as u64 * b
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

#[test]
fn ray_class_orders_match_enumeration() {
    for d_k in [3u64, 4, 7, 8, 15, 23] {
        let k = QuadField::new(d_k).unwrap();
        let h = class_group(k.maximal_order()).unwrap().class_number();
        for n in 1..=24i64 {
            let ray = RayClassGroup::of_integer(k, n as u64, None).unwrap();
            let (q, _) = units_mod_n(d_k, n);
            assert_eq!(ray.full_group().order(), h * q, "D={d_k} n={n}");
        }
    }
}

#[test]
fn ray_class_examples_for_seven() {
    let k = QuadField::new(7).unwrap();
    assert_eq!(RayClassGroup::of_integer(k, 1, Some(5)).unwrap().group().order(), 1);
    assert_eq!(RayClassGroup::of_integer(k, 5, Some(5)).unwrap().group().order(), 1);
    let r25 = RayClassGroup::of_integer(k, 25, Some(5)).unwrap();
    let (q, e) = units_mod_n(7, 25);
    assert_eq!(r25.group().order(), p_part(q, 5));
    // exponent of the 5-part read off the enumeration
    assert_eq!(r25.group().exponent(), p_part(e, 5));
    assert_eq!(r25.group().invariants(), &[5, 5]);
}

/// h(O_n) = h_K·n·Π(1 − (d|q)/q) / [O_K^× : O_n^×].
fn ring_class_formula(d_k: u64, n: u64) -> u64 {
    let d = -(d_k as i64);
    let h = class_group(QuadField::new(d_k).unwrap().maximal_order()).unwrap().class_number();
    let mut num = h * n;
    for (q, _) in factorize(n) {
        num = num / q * (q as i64 - kronecker(d, q) as i64) as u64;
    }
    let w = match d_k {
        3 => 6,
        4 => 4,
        _ => 2,
    };
    if n > 1 {
        num / (w / 2)
    } else {
        num
    }
}

#[test]
fn ring_class_orders_match_formula() {
    for d_k in [3u64, 4, 7, 23] {
        let k = QuadField::new(d_k).unwrap();
        for n in 1..=40u64 {
            let full = RingClassGroup::new(k, n, None).unwrap();
            assert_eq!(full.group().order(), ring_class_formula(d_k, n), "D={d_k} n={n}");
            for p in [5u64, 7] {
                let part = RingClassGroup::new(k, n, Some(p)).unwrap();
                assert_eq!(part.group().order(), p_part(ring_class_formula(d_k, n), p));
            }
        }
    }
    let k = QuadField::new(7).unwrap();
    assert_eq!(RingClassGroup::new(k, 2, None).unwrap().group().order(), 1);
    assert_eq!(RingClassGroup::new(k, 25, Some(5)).unwrap().group().order(), 5);
}

#[test]
fn sigma_maps_exist_when_tau_is_bijective() {
    let k = QuadField::new(7).unwrap();
    let s = SigmaMaps::new(k, 5, 1, 1, 1).unwrap();
    assert_eq!(s.ring().group().order(), 1);
    assert_eq!(s.sigma_hom().src.order(), 1);
    let s = SigmaMaps::new(k, 5, 2, 1, 1).unwrap();
    assert_eq!(s.ring().group().order(), 1);

    // smallest split c whose ray group H(𝔠) has a nontrivial 5-part
    let c = (2..200u64)
        .filter(|&c| c % 5 != 0 && c % 7 != 0)
        .find(|&c| {
            factorize(c).iter().all(|&(l, _)| kronecker(-7, l) == 1)
                && SigmaMaps::new(k, 5, c, 1, 1).unwrap().left().group().order() > 1
        })
        .unwrap();
    assert_eq!(c, 11);
    let s = SigmaMaps::new(k, 5, c, 1, 1).unwrap();
    assert!(s.sigma_hom().is_surjective());
}

#[test]
fn square_root_on_cyclic_five() {
    let g = FiniteAbelianGroup::cyclic(5);
    let ab = g.op(&g.reduce(&[2]), &g.reduce(&[4]));
    assert_eq!(g.sqrt(&ab).unwrap(), vec![3]);
}

fn configs() -> Vec<SigmaMaps> {
    let k = QuadField::new(7).unwrap();
    [(11, 1, 1), (1, 1, 19), (11, 1, 19), (1, 11, 1), (2, 1, 3)]
        .iter()
        .map(|&(c, np, nm)| SigmaMaps::new(k, 5, c, np, nm).unwrap())
        .collect()
}

#[test]
fn ideal_frobenius_table() {
    for s in configs() {
        let k = s.field();
        let (c, np, nm) = s.levels();
        let bad = 5 * 7 * c * np * nm;
        let ring = s.ring();
        let g = ring.group();
        let ok = k.maximal_order();
        let mut split = 0;
        let mut inert = 0;
        for q in primes_up_to(2000) {
            if bad % q == 0 {
                continue;
            }
            let sp = k.splitting(q).unwrap();
            if sp.is_split() {
                if split >= 25 {
                    continue;
                }
                split += 1;
                let ps = sp.primes();
                let (qq, qb) = (&ps[0], &ps[1]);
                let l = |i: &QuadIdeal| s.left().eval(i).unwrap();
                let r = |i: &QuadIdeal| s.right().eval(i).unwrap();
                let fr = frobenius(qq, ring).unwrap().elem;
                let fr_inv = g.inv(&fr);
                let qi = QuadIdeal::principal(ok, QuadInt::int(q as i64));
                let one = g.identity();
                assert_eq!(s.sigma(&l(&qi), &r(&qi)), one);
                assert_eq!(s.sigma(&l(qq), &r(qq)), fr_inv);
                assert_eq!(s.sigma(&l(qb), &r(qb)), fr);
                assert_eq!(s.sigma(&l(qq), &r(qb)), one);
                assert_eq!(s.sigma_conj(&l(&qi), &l(&qi)), one);
                assert_eq!(s.sigma_conj(&l(qq), &l(qb)), fr_inv);
                assert_eq!(s.sigma_conj(&l(qb), &l(qq)), fr);
                assert_eq!(s.sigma_conj(&l(qq), &l(qq)), one);
                // Frob_𝔮 Frob_𝔮̄ = 1 in H[cn]
                let fb = frobenius(qb, ring).unwrap().elem;
                assert!(g.is_identity(&g.op(&fr, &fb)));
            } else if sp.is_inert() {
                if inert >= 12 {
                    continue;
                }
                inert += 1;
                let qi = &sp.primes()[0];
                let x = s.left().eval(qi).unwrap();
                let y = s.right().eval(qi).unwrap();
                assert!(g.is_identity(&s.sigma(&x, &y)));
                assert!(g.is_identity(&s.sigma_conj(&x, &x)));
            }
        }
        assert!(split >= 20 && inert >= 10);
    }
}

#[test]
fn frobenius_of_principal_one_mod_modulus_is_trivial() {
    let k = QuadField::new(7).unwrap();
    let ray = RayClassGroup::of_integer(k, 11, Some(5)).unwrap();
    let ok = k.maximal_order();
    for t in 1..30i64 {
        let a = QuadInt::new(1 + 11 * t, 11 * (t % 4));
        let f = frobenius(&QuadIdeal::principal(ok, a), &ray).unwrap();
        assert!(ray.group().is_identity(&f.elem));
    }
    let bad = QuadIdeal::principal(ok, QuadInt::int(11));
    assert!(frobenius(&bad, &ray).is_err());
}

#[test]
fn conjugation_is_an_involution() {
    for s in configs() {
        let back = s.right().hom_via(s.left(), |i| i.conj()).unwrap();
        let twice = s.conjugation().then(&back);
        for x in s.left().group().elements() {
            assert_eq!(twice.apply(&x), x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_commutes_with_classes(n in 1u64..400, pick in 0usize..8) {
        let s = &CONFIGS.with(|c| c.clone())[pick % 5];
        let modulus = s.left().modulus().clone();
        let ideals = ideals_of_norm(s.field().maximal_order(), n, Some(&modulus));
        prop_assume!(!ideals.is_empty());
        let a = &ideals[pick % ideals.len()];
        let lhs = s.right().eval(&a.conj()).unwrap();
        let rhs = s.conjugation().apply(&s.left().eval(a).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ray_classes_are_multiplicative(i in 0usize..10_000, j in 0usize..10_000) {
        let (ray, pool) = RAY.with(|r| r.clone());
        let a = &pool[i % pool.len()];
        let b = &pool[j % pool.len()];
        let g = ray.group();
        let ab = ray.eval(&a.mul(b).unwrap()).unwrap();
        prop_assert_eq!(ab, g.op(&ray.eval(a).unwrap(), &ray.eval(b).unwrap()));
    }
}

thread_local! {
    static CONFIGS: Vec<SigmaMaps> = configs();
    static RAY: (RayClassGroup, Vec<QuadIdeal>) = {
        let ray = RayClassGroup::of_integer(QuadField::new(23).unwrap(), 15, None).unwrap();
        let ok = ray.field().maximal_order();
        let pool = (1..300).flat_map(|n| ideals_of_norm(ok, n, Some(ray.modulus()))).collect();
        (ray, pool)
    };
}
