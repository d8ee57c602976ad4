use acyc_core::classfield::{ClassEval, RayClassGroup};
use acyc_core::exactnum::{Character, CycInt, FiniteAbelianGroup, GroupElem, GroupHom, PadicCtx, PadicNum, Ring};
use acyc_core::iwasawa::{AnticycProjection, Cyclo, GroupRing, IwasawaError, SquareGroup};
use acyc_core::quadfield::{QuadField, QuadIdeal, QuadInt};

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 5;

fn level_group(n: u32) -> FiniteAbelianGroup {
    let q = P.pow(n);
    FiniteAbelianGroup::from_invariants(vec![q, q]).unwrap()
}

/// `(x, y) ↦ (x, −y)`: a cyclotomic and an anticyclotomic direction.
fn inert_conj(g: &FiniteAbelianGroup) -> GroupHom {
    GroupHom::new(g.clone(), g.clone(), vec![vec![1, 0], vec![0, -1]]).unwrap()
}

/// `(x, y) ↦ (y, x)`.
fn swap_conj(g: &FiniteAbelianGroup) -> GroupHom {
    GroupHom::new(g.clone(), g.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap()
}

fn reduction(n: u32) -> GroupHom {
    GroupHom::new(level_group(n), level_group(n - 1), vec![vec![1, 0], vec![0, 1]]).unwrap()
}

fn zp(prec: u32) -> PadicCtx {
    PadicCtx::new(P, 2, prec).unwrap()
}

fn random_elem(rng: &mut ChaCha8Rng, g: &FiniteAbelianGroup) -> GroupElem {
    g.invariants().iter().map(|&d| rng.gen_range(0..d as i64)).collect()
}

fn random_ring_elem(rng: &mut ChaCha8Rng, g: &FiniteAbelianGroup, ctx: &PadicCtx, terms: usize) -> GroupRing<PadicNum> {
    let mut x = GroupRing::zero(g, PadicNum::zero(ctx));
    for _ in 0..terms {
        let c = PadicNum::new(ctx, BigInt::from(rng.gen_range(-40..40)), BigInt::from(rng.gen_range(-40..40)));
        x.add_term(&random_elem(rng, g), c);
    }
    x
}

fn is_hom_exhaustive(h: &GroupHom) {
    let gens = h.src.generators();
    for g in h.src.elements() {
        for e in &gens {
            assert_eq!(h.apply(&h.src.op(&g, e)), h.dst.op(&h.apply(&g), &h.apply(e)));
        }
    }
}

#[test]
fn sigma_examples_and_involution() {
    for n in 1..=3 {
        let g = level_group(n);
        let sq = SquareGroup::new(&g);
        let one = BigInt::from(1);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..50 {
            let gamma = random_elem(&mut rng, &g);
            let diag = sq.sigma(&sq.tensor(&gamma, &gamma, one.clone())).unwrap();
            assert_eq!(diag, sq.tensor(&gamma, &g.identity(), one.clone()));
            let anti = sq.sigma(&sq.tensor(&gamma, &g.inv(&gamma), one.clone())).unwrap();
            assert_eq!(anti, sq.tensor(&g.identity(), &gamma, one.clone()));
        }
        let s = sq.sigma_hom().unwrap();
        // the exponent matrix ½((1,1),(1,−1)) squares to ½·I
        assert_eq!(s.then(&s), sq.halving_hom().unwrap(), "level {n}");
        assert_ne!(s.then(&s), GroupHom::identity(sq.group()));
        assert_eq!(s.then(&sq.sigma_inverse_hom().unwrap()), GroupHom::identity(sq.group()));
        assert!(s.is_bijective());
        if n <= 2 {
            is_hom_exhaustive(&s);
        }
    }
    let even = FiniteAbelianGroup::cyclic(10);
    assert!(matches!(SquareGroup::new(&even).sigma_hom(), Err(IwasawaError::EvenOrder(10))));
}

#[test]
fn maps_are_ring_homs_at_level_three() {
    let g = level_group(3);
    let ctx = zp(6);
    let sq = SquareGroup::new(&g);
    let tau = AnticycProjection::new(inert_conj(&g)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let x = random_ring_elem(&mut rng, sq.group(), &ctx, 6);
        let y = random_ring_elem(&mut rng, sq.group(), &ctx, 6);
        let xy = x.mul(&y).unwrap();
        let s = |z: &GroupRing<PadicNum>| sq.sigma(z).unwrap();
        assert_eq!(s(&xy), s(&x).mul(&s(&y)).unwrap());
        assert_eq!(s(&x.add(&y).unwrap()), s(&x).add(&s(&y)).unwrap());
        assert_eq!(s(&x).push_forward(&sq.sigma_inverse_hom().unwrap()).unwrap(), x);
        let a = |z: &GroupRing<PadicNum>| sq.anticyc_project(&tau, z).unwrap();
        assert_eq!(a(&xy), a(&x).mul(&a(&y)).unwrap());
        let u = random_ring_elem(&mut rng, &g, &ctx, 8);
        let v = random_ring_elem(&mut rng, &g, &ctx, 8);
        assert_eq!(tau.apply(&u.mul(&v).unwrap()).unwrap(), tau.apply(&u).unwrap().mul(&tau.apply(&v).unwrap()).unwrap());
        assert_eq!(tau.apply(&u).unwrap().augmentation(), u.augmentation());
        // 6^{125} has order 125 in (Z/5⁶)^×
        let base = PadicNum::from_int(&ctx, 6).pow(125).unwrap();
        let chi = |h: &GroupElem| base.pow(h[0] + 2 * h[1]).unwrap();
        assert_eq!(
            u.mul(&v).unwrap().twist_by(chi),
            u.twist_by(chi).mul(&v.twist_by(chi)).unwrap()
        );
    }
}

#[test]
fn tau_examples() {
    for conj in [inert_conj as fn(&FiniteAbelianGroup) -> GroupHom, swap_conj] {
        let g = level_group(2);
        let c = conj(&g);
        let tau = AnticycProjection::new(c.clone()).unwrap();
        is_hom_exhaustive(tau.hom());
        let one = BigInt::from(1);
        for gamma in g.elements() {
            let cg = c.apply(&gamma);
            let norm = g.op(&gamma, &cg);
            let x = GroupRing::monomial(&g, &norm, one.clone());
            assert_eq!(tau.apply(&x).unwrap(), GroupRing::one(&g, &one));
            let minus = g.op(&gamma, &g.inv(&cg));
            let y = tau.apply(&GroupRing::monomial(&g, &minus, one.clone())).unwrap();
            assert_eq!(y, GroupRing::monomial(&g, &minus, one.clone()));
            assert!(tau.is_minus(&tau.hom().apply(&gamma)));
            assert_eq!(g.elem_order(&tau.hom().apply(&minus)), g.elem_order(&minus));
        }
    }
}

#[test]
fn tau_on_ray_class_group() {
    let k = QuadField::new(7).unwrap();
    let m = QuadIdeal::principal(k.maximal_order(), QuadInt::int(25));
    let ray = RayClassGroup::new(k, &m, Some(P)).unwrap();
    let conj = ray.hom_via(&ray, |i| i.conj()).unwrap();
    let g = ray.group().clone();
    assert_eq!(g.invariants(), &[5, 5]);
    assert_eq!(conj.then(&conj), GroupHom::identity(&g));
    let tau = AnticycProjection::new(conj.clone()).unwrap();
    // the minus part of Γ at this level is cyclic of order 5
    let image: std::collections::BTreeSet<_> = g.elements().iter().map(|x| tau.hom().apply(x)).collect();
    assert_eq!(image.len(), 5);
    for x in &image {
        assert!(tau.is_minus(x));
    }
}

#[test]
fn twist_examples() {
    let g = FiniteAbelianGroup::cyclic(25);
    let ctx = zp(6);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_ring_elem(&mut rng, &g, &ctx, 10);
    assert_eq!(x.twist_by(|_| PadicNum::one(&ctx)), x);
    let gamma = vec![3];
    let mono = GroupRing::monomial(&g, &gamma, PadicNum::one(&ctx));
    let t = mono.twist_by(|h| if h == &gamma { PadicNum::from_int(&ctx, 1 + P as i64) } else { PadicNum::one(&ctx) });
    assert_eq!(t, GroupRing::monomial(&g, &gamma, PadicNum::from_int(&ctx, 6)));
    // evaluation at the trivial character after twisting by α is evaluation at α
    let alpha = |h: &GroupElem| PadicNum::from_int(&ctx, 6).pow(h[0]).unwrap();
    let twisted = x.twist_by(alpha);
    assert_eq!(twisted.eval_with(|_| PadicNum::one(&ctx)), x.eval_with(alpha));
}

#[test]
fn twist_evaluation_is_exhaustive_on_level_two() {
    let g = FiniteAbelianGroup::cyclic(25);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = GroupRing::from_terms(
        &g,
        BigInt::from(0),
        (0..12).map(|_| (vec![rng.gen_range(0..25)], BigInt::from(rng.gen_range(-9..10)))),
    );
    let chars = Character::all(&g);
    for alpha in &chars {
        let tw = x.twist_by_char(alpha).unwrap();
        for chi in &chars {
            assert_eq!(tw.eval_char_cyclo(chi).unwrap(), x.eval_char(&chi.mul(alpha)).unwrap());
        }
    }
}

fn cyclo_to_cycint(x: &Cyclo<BigInt>) -> CycInt {
    CycInt::from_coeffs(x.order(), x.coeffs().to_vec()).unwrap()
}

#[test]
fn character_evaluation() {
    let g = FiniteAbelianGroup::cyclic(5);
    let one = BigInt::from(1);
    let gamma = vec![1];
    let aug_zero = GroupRing::from_terms(&g, BigInt::from(0), [(gamma.clone(), one.clone()), (vec![0], BigInt::from(-1))]);
    assert!(aug_zero.eval_char(&Character::trivial(&g)).unwrap().is_zero_elem());
    let chi = Character::new(&g, &[1]);
    let v = GroupRing::monomial(&g, &gamma, one.clone()).eval_char(&chi).unwrap();
    assert_eq!(cyclo_to_cycint(&v), CycInt::zeta(5, 1));
    // over Z_{25}: ζ_5 stays formal, coefficients carry the precision
    let ctx = zp(4);
    let w = GroupRing::monomial(&g, &gamma, PadicNum::from_int(&ctx, 7)).eval_char(&chi).unwrap();
    assert_eq!(w, Cyclo::zeta(5, 1, &PadicNum::one(&ctx)).mul_ref(&Cyclo::constant(5, PadicNum::from_int(&ctx, 7))));
    let other = FiniteAbelianGroup::cyclic(25);
    assert_eq!(GroupRing::one(&other, &one).eval_char(&chi), Err(IwasawaError::LevelMismatch));
}

#[test]
fn evaluation_is_multiplicative() {
    let g = FiniteAbelianGroup::from_invariants(vec![5, 25]).unwrap();
    let ctx = zp(5);
    let chars = Character::all(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let x = random_ring_elem(&mut rng, &g, &ctx, 3);
        let y = random_ring_elem(&mut rng, &g, &ctx, 3);
        let chi = &chars[rng.gen_range(0..chars.len())];
        let lhs = x.mul(&y).unwrap().eval_char(chi).unwrap();
        let rhs = x.eval_char(chi).unwrap().mul_ref(&y.eval_char(chi).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn anticyc_project_examples() {
    let g = level_group(2);
    let sq = SquareGroup::new(&g);
    let one = BigInt::from(1);
    for conj in [inert_conj(&g), swap_conj(&g)] {
        let tau = AnticycProjection::new(conj.clone()).unwrap();
        for gamma in g.elements().into_iter().step_by(7) {
            let cg = conj.apply(&gamma);
            let x = sq.tensor(&gamma, &cg, one.clone());
            let want = sq.tensor(&g.identity(), &tau.hom().apply(&gamma), one.clone());
            assert_eq!(sq.anticyc_project(&tau, &x).unwrap(), want);
            let n = g.op(&gamma, &cg);
            let d = sq.anticyc_project(&tau, &sq.tensor(&n, &n, one.clone())).unwrap();
            for (e, _) in d.terms() {
                assert_eq!(sq.split(e).1, g.identity());
            }
        }
    }
}

#[test]
fn level_maps_commute() {
    let ctx = zp(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=3 {
        let (gh, gl) = (level_group(n), level_group(n - 1));
        let pi = reduction(n);
        let (sqh, sql) = (SquareGroup::new(&gh), SquareGroup::new(&gl));
        let pi2 = sqh.level_map(&sql, &pi).unwrap();
        let tauh = AnticycProjection::new(inert_conj(&gh)).unwrap();
        let taul = AnticycProjection::new(inert_conj(&gl)).unwrap();
        for _ in 0..30 {
            let x = random_ring_elem(&mut rng, sqh.group(), &ctx, 5);
            assert_eq!(sqh.sigma(&x).unwrap().push_forward(&pi2).unwrap(), sql.sigma(&x.push_forward(&pi2).unwrap()).unwrap());
            assert_eq!(
                sqh.anticyc_project(&tauh, &x).unwrap().push_forward(&pi2).unwrap(),
                sql.anticyc_project(&taul, &x.push_forward(&pi2).unwrap()).unwrap()
            );
            let u = random_ring_elem(&mut rng, &gh, &ctx, 6);
            assert_eq!(
                tauh.apply(&u).unwrap().push_forward(&pi).unwrap(),
                taul.apply(&u.push_forward(&pi).unwrap()).unwrap()
            );
            let alpha_low = |h: &GroupElem| PadicNum::from_int(&ctx, 6).pow(h[0] - h[1]).unwrap();
            let alpha_high = |h: &GroupElem| alpha_low(&pi.apply(h));
            assert_eq!(
                u.twist_by(alpha_high).push_forward(&pi).unwrap(),
                u.push_forward(&pi).unwrap().twist_by(alpha_low)
            );
            let chi = Character::new(&gl, &[rng.gen_range(0..25), rng.gen_range(0..25)]);
            let lifted = chi.pullback(&pi);
            let a = u.push_forward(&pi).unwrap().eval_char(&chi).unwrap();
            let b = u.eval_char(&lifted).unwrap();
            // same value, written in R[ζ_{p^{n−1}}] and R[ζ_{p^n}]
            let zeta_low = gl.exponent();
            let zeta_high = gh.exponent();
            let emb = |v: &Cyclo<PadicNum>| {
                v.coeffs().iter().enumerate().fold(Cyclo::constant(zeta_high, PadicNum::zero(&ctx)), |acc, (j, c)| {
                    acc.add_ref(
                        &Cyclo::zeta(zeta_high, (j as u64 * zeta_high / zeta_low) as i64, &PadicNum::one(&ctx))
                            .mul_ref(&Cyclo::constant(zeta_high, c.clone())),
                    )
                })
            };
            assert_eq!(emb(&a), b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_is_an_invertible_ring_hom(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = level_group(rng.gen_range(1..=2));
        let sq = SquareGroup::new(&g);
        let ctx = zp(4);
        let x = random_ring_elem(&mut rng, sq.group(), &ctx, 4);
        let y = random_ring_elem(&mut rng, sq.group(), &ctx, 4);
        let sx = sq.sigma(&x).unwrap();
        prop_assert_eq!(sq.sigma(&sx).unwrap(), x.push_forward(&sq.halving_hom().unwrap()).unwrap());
        prop_assert_eq!(sx.push_forward(&sq.sigma_inverse_hom().unwrap()).unwrap(), x.clone());
        prop_assert_eq!(sq.sigma(&x.mul(&y).unwrap()).unwrap(), sx.mul(&sq.sigma(&y).unwrap()).unwrap());
        prop_assert_eq!(sx.augmentation(), x.augmentation());
    }
}
