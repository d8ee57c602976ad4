//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any line fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use acyc::pipeline::{interpolation_ratios, RunConfig};
use acyc::report::Report;
use acyc::sampling::{congruence_batch, random_datum};
use acyc_core::classfield::{frobenius, ClassEval, SigmaMaps};
use acyc_core::exactnum::arith::{is_fundamental_discriminant, primes_up_to};
use acyc_core::exactnum::{Character, FiniteAbelianGroup, GroupElem, GroupHom, PadicCtx, PadicNum};
use acyc_core::heckechar::{characters_mod, AvatarCharacter, HeckeCharacter, Psi0};
use acyc_core::iwasawa::{GroupRing, SquareGroup};
use acyc_core::lfun::{rankin_series, LSeries};
use acyc_core::normrel::{congruence_check_split_mutated, Mutation};
use acyc_core::quadfield::{class_group, QuadField, QuadIdeal, QuadInt};
use acyc_core::quatgross::{class_set_and_brandt, gross_points};
use acyc_core::thetamods::{hecke_eigenvalue, hecke_tq, p_deplete, theta_series, theta_series_padic, LambdaThetaFamily};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLASS_GROUP_MAX_D: i64 = 2000;
const CLASS_GROUP_BUDGET: Duration = Duration::from_secs(60);
const THETA_PREC: usize = 500;
const THETA_MIN_CHARS: usize = 10;
const FROB_MIN_SPLIT: usize = 20;
const FROB_MIN_INERT: usize = 10;
const CONGRUENCE_SAMPLES: usize = 1000;
const CONGRUENCE_BUDGET: Duration = Duration::from_secs(120);
const FAMILY_DIGITS: u32 = 6;
const FAMILY_PREC: usize = 300;
const BRANDT_BUDGET: Duration = Duration::from_secs(300);
const TRACE_BUDGET: Duration = Duration::from_secs(600);
const RATIO_SPREAD: f64 = 1e-3;
const RATIO_MIN_CHARS: usize = 3;
const RATIO_DRIFT: f64 = 1e-6;
const FACTORIZATION_REL: f64 = 1e-10;
const FACTORIZATION_LEN: usize = 40000;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn rational_coeffs(name: &str) -> (u64, Vec<i64>) {
    let f = acyc::newform::NewformFile::load(&data(name)).unwrap();
    (f.level, f.rational().unwrap())
}

/// Reduced primitive forms of discriminant −d, counted from `b² + d = 4ac`.
fn reduced_forms(d: i64) -> u64 {
    let mut n = 0;
    let mut a = 1;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) == 1 {
                n += 1;
            }
        }
        a += 1;
    }
    n
}

fn class_groups() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for d in 4..=CLASS_GROUP_MAX_D {
        if !is_fundamental_discriminant(-d) {
            continue;
        }
        let h = class_group(QuadField::new(d as u64).unwrap().maximal_order()).unwrap().class_number();
        ensure(h == reduced_forms(d), format!("D = {d}: {h} vs {}", reduced_forms(d)))?;
        count += 1;
    }
    let t = start.elapsed();
    ensure(t < CLASS_GROUP_BUDGET, format!("{t:?} over budget"))?;
    Ok(format!("{count} discriminants 3 < D ≤ {CLASS_GROUP_MAX_D}, {:.1}s", t.as_secs_f64()))
}

fn prime_above(k: QuadField, p: u64) -> QuadIdeal {
    k.splitting(p).unwrap().primes()[0].clone()
}

fn int_ideal(k: QuadField, n: i64) -> QuadIdeal {
    QuadIdeal::principal(k.maximal_order(), QuadInt::int(n))
}

fn theta_eigenforms() -> Outcome {
    let k7 = QuadField::new(7).unwrap();
    let k11 = QuadField::new(11).unwrap();
    let k23 = QuadField::new(23).unwrap();
    let mut pool: Vec<HeckeCharacter> = Vec::new();
    pool.extend(characters_mod(k7, (0, 0), &int_ideal(k7, 1)).unwrap());
    pool.extend(characters_mod(k7, (-1, 0), &prime_above(k7, 7)).unwrap());
    pool.extend(characters_mod(k7, (-2, 0), &prime_above(k7, 7)).unwrap());
    pool.extend(characters_mod(k11, (-1, 0), &prime_above(k11, 11)).unwrap());
    pool.extend(characters_mod(k23, (0, 0), &int_ideal(k23, 1)).unwrap());
    ensure(pool.len() >= THETA_MIN_CHARS, format!("only {} characters", pool.len()))?;
    let mut checks = 0;
    for psi in &pool {
        let th = theta_series(psi, THETA_PREC).unwrap();
        for q in primes_up_to(50) {
            if th.level.is_multiple_of(q) {
                continue;
            }
            let tq = hecke_tq(&th, q).unwrap();
            let lam = hecke_eigenvalue(psi, q).unwrap();
            ensure(tq.precision() == THETA_PREC / q as usize, "precision of T_q")?;
            for n in 0..=tq.precision() {
                ensure(tq.coeff(n) == &(&lam * th.coeff(n)), format!("D = {} q = {q} n = {n}", psi.field().d_k()))?;
            }
            checks += 1;
        }
    }
    Ok(format!("{} characters, {checks} (ψ, q) pairs, precision ⌊{THETA_PREC}/q⌋", pool.len()))
}

fn frobenius_table() -> Outcome {
    let k = QuadField::new(7).unwrap();
    let mut lines = 0;
    let mut configs = 0;
    for (c, np, nm) in [(11, 1, 1), (1, 1, 19), (11, 1, 19), (1, 11, 1)] {
        let s = SigmaMaps::new(k, 5, c, np, nm).unwrap();
        let ring = s.ring();
        let g = ring.group();
        let one = g.identity();
        let bad = 5 * 7 * c * np * nm;
        let (mut split, mut inert) = (0, 0);
        for q in primes_up_to(2000) {
            if bad % q == 0 {
                continue;
            }
            let sp = k.splitting(q).unwrap();
            let l = |i: &QuadIdeal| s.left().eval(i).unwrap();
            let r = |i: &QuadIdeal| s.right().eval(i).unwrap();
            if sp.is_split() && split < FROB_MIN_SPLIT {
                let ps = sp.primes();
                let (qq, qb) = (&ps[0], &ps[1]);
                let qi = int_ideal(k, q as i64);
                let fr = frobenius(qq, ring).unwrap().elem;
                let fr_inv = g.inv(&fr);
                let table = [
                    (s.sigma(&l(&qi), &r(&qi)), &one),
                    (s.sigma(&l(qq), &r(qq)), &fr_inv),
                    (s.sigma(&l(qb), &r(qb)), &fr),
                    (s.sigma(&l(qq), &r(qb)), &one),
                    (s.sigma_conj(&l(&qi), &l(&qi)), &one),
                    (s.sigma_conj(&l(qq), &l(qb)), &fr_inv),
                    (s.sigma_conj(&l(qb), &l(qq)), &fr),
                    (s.sigma_conj(&l(qq), &l(qq)), &one),
                ];
                for (i, (got, want)) in table.iter().enumerate() {
                    ensure(got == *want, format!("(c, n⁺, n⁻) = ({c}, {np}, {nm}) q = {q} entry {}", i + 1))?;
                }
                split += 1;
                lines += 8;
            } else if sp.is_inert() && inert < FROB_MIN_INERT {
                let qi = &sp.primes()[0];
                ensure(g.is_identity(&s.sigma(&l(qi), &r(qi))), format!("inert q = {q}"))?;
                ensure(g.is_identity(&s.sigma_conj(&l(qi), &l(qi))), format!("inert q = {q}"))?;
                inert += 1;
                lines += 2;
            }
        }
        ensure(split >= FROB_MIN_SPLIT && inert >= FROB_MIN_INERT, format!("too few primes in config {configs}"))?;
        configs += 1;
    }
    Ok(format!("{configs} configurations, {lines} table entries, ≥ {FROB_MIN_SPLIT} split and ≥ {FROB_MIN_INERT} inert each"))
}

fn congruences() -> Outcome {
    let start = Instant::now();
    let out = congruence_batch(2 * CONGRUENCE_SAMPLES, 7);
    ensure(out.failures.is_empty(), format!("{} failures, first {:?}", out.failures.len(), out.failures.first()))?;
    ensure(out.split_total == CONGRUENCE_SAMPLES && out.inert_total == CONGRUENCE_SAMPLES, "batch sizes")?;
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut mutants = 0;
    while mutants < 100 {
        let d = random_datum(&mut rng, true);
        if d.q == 2 {
            continue;
        }
        for m in [Mutation::DropUNormalization, Mutation::DropOneMinusQ] {
            ensure(congruence_check_split_mutated(&d, 1, Some(m)).is_err(), format!("mutant {m:?} survived at q = {}", d.q))?;
            mutants += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < CONGRUENCE_BUDGET, format!("{t:?} over budget"))?;
    Ok(format!(
        "{}/{} split, {}/{} inert, {mutants} mutants rejected, {:.1}s",
        out.split_ok,
        out.split_total,
        out.inert_ok,
        out.inert_total,
        t.as_secs_f64()
    ))
}

fn family_round_trip() -> Outcome {
    let k = QuadField::new(7).unwrap();
    let psi0 = Psi0::new(k, 5, FAMILY_DIGITS).unwrap();
    let emb = psi0.avatar().embedding().clone();
    let p0 = psi0.character().clone();
    let odd = characters_mod(k, (-1, 0), &prime_above(k, 7)).unwrap();
    let seeds = [(p0.clone(), 2), (p0.pow(2), 3), (odd[0].clone(), 2), (odd[1].mul(&p0).unwrap(), 3)];
    let res = |f: &acyc_core::thetamods::QExpansion<PadicNum>| -> Vec<PadicNum> {
        f.coeffs().iter().map(|x| x.truncate(FAMILY_DIGITS)).collect()
    };
    for (psi, nu0) in &seeds {
        let fam = LambdaThetaFamily::through(psi, &psi0, FAMILY_PREC).unwrap();
        let spec = fam.specialize(*nu0).unwrap();
        let av = AvatarCharacter::new(psi.clone(), emb.clone()).unwrap();
        let direct = p_deplete(&theta_series_padic(&av, FAMILY_PREC).unwrap(), 5);
        ensure(res(&spec) == res(&direct), format!("ν₀ = {nu0}"))?;
    }
    Ok(format!("{} seeds, mod 5^{FAMILY_DIGITS}, q-precision {FAMILY_PREC}", seeds.len()))
}

fn iwasawa_maps() -> Outcome {
    let one = BigInt::from(1);
    let mut notes = Vec::new();
    for n in 1..=3u32 {
        let q = 5u64.pow(n);
        let g = FiniteAbelianGroup::from_invariants(vec![q, q]).unwrap();
        let sq = SquareGroup::new(&g);
        let s = sq.sigma_hom().unwrap();
        let src = &s.src;
        let gens = src.generators();
        let elems: Vec<GroupElem> = if n <= 2 {
            src.elements()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..2000).map(|_| src.invariants().iter().map(|&d| rng.gen_range(0..d as i64)).collect()).collect()
        };
        for x in &elems {
            for e in &gens {
                ensure(s.apply(&src.op(x, e)) == s.dst.op(&s.apply(x), &s.apply(e)), format!("σ not a hom at level {n}"))?;
            }
        }
        ensure(s.then(&sq.sigma_inverse_hom().unwrap()) == GroupHom::identity(sq.group()), "σ⁻¹∘σ ≠ id")?;
        let gamma: GroupElem = vec![1, 0];
        let diag = sq.sigma(&sq.tensor(&gamma, &gamma, one.clone())).unwrap();
        ensure(diag == sq.tensor(&gamma, &g.identity(), one.clone()), "σ([γ]⊗[γ]) ≠ [γ]⊗1")?;
        if s.then(&s) != GroupHom::identity(sq.group()) {
            notes.push(n);
        }
    }
    let g = FiniteAbelianGroup::cyclic(25);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = GroupRing::from_terms(
        &g,
        BigInt::from(0),
        (0..12).map(|_| (vec![rng.gen_range(0..25)], BigInt::from(rng.gen_range(-9..10)))),
    );
    let chars = Character::all(&g);
    for alpha in &chars {
        let tw = x.twist_by_char(alpha).unwrap();
        for chi in &chars {
            ensure(tw.eval_char_cyclo(chi).unwrap() == x.eval_char(&chi.mul(alpha)).unwrap(), "twist evaluation")?;
        }
    }
    let ctx = PadicCtx::new(5, 2, 6).unwrap();
    let g3 = FiniteAbelianGroup::from_invariants(vec![125, 125]).unwrap();
    let sq3 = SquareGroup::new(&g3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let elem = |rng: &mut ChaCha8Rng| {
        let mut z = GroupRing::zero(sq3.group(), PadicNum::zero(&ctx));
        for _ in 0..5 {
            let h: GroupElem = sq3.group().invariants().iter().map(|&d| rng.gen_range(0..d as i64)).collect();
            z.add_term(&h, PadicNum::from_int(&ctx, rng.gen_range(-40..40)));
        }
        z
    };
    for _ in 0..30 {
        let (a, b) = (elem(&mut rng), elem(&mut rng));
        let s = |z: &GroupRing<PadicNum>| sq3.sigma(z).unwrap();
        ensure(s(&a.mul(&b).unwrap()) == s(&a).mul(&s(&b)).unwrap(), "σ not multiplicative at level 3")?;
    }
    if notes.is_empty() {
        Ok("σ² = id, homomorphism and twist identities hold".into())
    } else {
        Err(format!(
            "σ² ≠ id at levels {notes:?}: the prescribed σ squares to the halving map; homomorphism, σ⁻¹∘σ = id and twist identities hold"
        ))
    }
}

fn brandt() -> Outcome {
    let start = Instant::now();
    let int = |x: i64| BigRational::from_integer(x.into());
    let sys = class_set_and_brandt(11, 1, 13).unwrap();
    ensure(sys.class_number() == 2, "h(11, 1) ≠ 2")?;
    ensure(sys.mass() == BigRational::new(5.into(), 12.into()), format!("mass(11, 1) = {}", sys.mass()))?;
    let b2 = sys.brandt_matrix(2).unwrap();
    // eigenvalues {3, −2}: trace 1, determinant −6
    ensure(b2[0][0] + b2[1][1] == 1 && b2[0][0] * b2[1][1] - b2[0][1] * b2[1][0] == -6, format!("B(2) = {b2:?}"))?;
    ensure(class_set_and_brandt(2, 1, 13).unwrap().class_number() == 1, "h(2, 1) ≠ 1")?;
    let run = class_set_and_brandt(3, 11, 13).unwrap();
    ensure(run.mass() == run.expected_mass(), "running mass formula")?;
    let (_, a) = rational_coeffs("33a.txt");
    let ingest: BTreeMap<u64, i64> = [2u64, 5, 7, 13].iter().map(|&q| (q, a[q as usize])).collect();
    let v = run.eigenvector(&ingest, 33 * 5).unwrap();
    for (&q, &aq) in &ingest {
        let b = run.brandt_matrix(q).unwrap();
        for i in 0..v.len() {
            let bv: BigRational = (0..v.len()).map(|j| int(b[i][j]) * &v[j]).sum();
            ensure(bv == int(aq) * &v[i], format!("B({q})v ≠ a_q v"))?;
        }
    }
    for sys in [&sys, &run] {
        let primes: Vec<u64> = sys.primes().collect();
        for &q in &primes {
            for &r in &primes {
                let (x, y) = (sys.brandt_matrix(q).unwrap(), sys.brandt_matrix(r).unwrap());
                let h = x.len();
                for i in 0..h {
                    for j in 0..h {
                        let xy: i64 = (0..h).map(|k| x[i][k] * y[k][j]).sum();
                        let yx: i64 = (0..h).map(|k| y[i][k] * x[k][j]).sum();
                        ensure(xy == yx, format!("B({q}), B({r}) do not commute"))?;
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < BRANDT_BUDGET, format!("{t:?} over budget"))?;
    let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    Ok(format!("h = 2, mass 5/12, B(2) ~ {{3, −2}}; h = 1; running eigenvector ({}); {:.1}s", v.join(", "), t.as_secs_f64()))
}

fn trace_relations() -> Outcome {
    let start = Instant::now();
    let sys = class_set_and_brandt(3, 11, 13).unwrap();
    let (_, a) = rational_coeffs("33a.txt");
    let ingest: BTreeMap<u64, i64> = [2u64, 7, 13].iter().map(|&q| (q, a[q as usize])).collect();
    let v = sys.eigenvector(&ingest, 33 * 5).unwrap();
    let e = sys.eisenstein();
    let tower = gross_points(&sys, QuadField::new(7).unwrap(), 1, 5, 3).unwrap();
    let mut checked = 0;
    for n in 0..=2 {
        for (vec, ap, name) in [(&v, a[5], "f"), (&e, 6, "Eisenstein")] {
            let rep = tower.trace_relation_check(n, vec, ap).unwrap();
            ensure(rep.holds(), format!("level {n}, {name}: {} failures", rep.failures.len()))?;
            checked += rep.checked;
        }
    }
    let t = start.elapsed();
    ensure(t < TRACE_BUDGET, format!("{t:?} over budget"))?;
    Ok(format!("{checked} point checks at n = 0, 1, 2 (f and Eisenstein), {:.1}s", t.as_secs_f64()))
}

fn ratio_column(r: &Report, col: &str) -> Vec<String> {
    let t = &r.tables[0];
    let i = t.headers.iter().position(|h| h == col).unwrap();
    t.rows.iter().map(|row| row[i].clone()).collect()
}

fn interpolation() -> Outcome {
    let mut cfg = RunConfig::running(data("33a.txt"));
    cfg.level = 1;
    let loose = interpolation_ratios(&cfg).map_err(|e| e.to_string())?;
    cfg.l_tolerance = 1e-12;
    let tight = interpolation_ratios(&cfg).map_err(|e| e.to_string())?;
    let spread: f64 = tight.get("ratio spread").unwrap().parse().unwrap();
    let ratios: Vec<f64> = ratio_column(&tight, "ratio").iter().filter_map(|s| s.parse().ok()).collect();
    ensure(ratios.len() >= RATIO_MIN_CHARS, format!("only {} nonzero characters", ratios.len()))?;
    ensure(spread < RATIO_SPREAD, format!("spread {spread:e}"))?;
    let zeros: usize = tight.get("one-sided zeros").unwrap().parse().unwrap();
    ensure(zeros == 0, format!("{zeros} one-sided zeros"))?;
    let (l1, l2) = (ratio_column(&loose, "L(f/K,χ,1)"), ratio_column(&tight, "L(f/K,χ,1)"));
    for (x, y) in l1.iter().zip(&l2) {
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        ensure((x - y).abs() <= RATIO_DRIFT * y.abs().max(1.0), format!("L drifts: {x} vs {y}"))?;
    }
    Ok(format!("{} characters, ratio {:.10}, spread {spread:.1e}, stable under tighter truncation", ratios.len(), ratios[0]))
}

fn factorization() -> Outcome {
    let (level, a) = rational_coeffs("33a.txt");
    let k = QuadField::new(7).unwrap();
    let len = FACTORIZATION_LEN;
    let rs = rankin_series(&a, level, k, |_| Some(Complex64::new(1.0, 0.0)), 7, len).map_err(|e| e.to_string())?;
    let lk = rs.central_value(1e-12).map_err(|e| e.to_string())?;
    let lf = LSeries::newform(&a[..=len], level).unwrap().central_value(1e-14).map_err(|e| e.to_string())?;
    let lt = LSeries::quadratic_twist(&a[..=len], level, k).unwrap().central_value(1e-14).map_err(|e| e.to_string())?;
    let rel = (lk.value - lf.value * lt.value).norm() / lk.value.norm();
    ensure(rel < FACTORIZATION_REL, format!("relative error {rel:e}"))?;
    Ok(format!(
        "L(f/K,1) = {:.12} = {:.12} × {:.12}, relative error {rel:.1e}",
        lk.value.re, lf.value.re, lt.value.re
    ))
}

fn run_cli(args: &[&str], cache: &std::path::Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_acyc"))
        .args(args)
        .env("ACYC_CACHE_DIR", cache)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let form = data("33a.txt");
    let form = form.to_str().unwrap();
    let warm = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cold1 = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cold8 = tempfile::tempdir().map_err(|e| e.to_string())?;
    let base = ["bk-criterion", "--newform", form];
    let first = run_cli(&base, warm.path())?;
    let second = run_cli(&base, warm.path())?;
    let one = run_cli(&["--workers", "1", "bk-criterion", "--newform", form], cold1.path())?;
    let eight = run_cli(&["--workers", "8", "bk-criterion", "--newform", form], cold8.path())?;
    ensure(first == second, "cold and cached runs differ")?;
    ensure(first == one, "1-worker run differs")?;
    ensure(first == eight, "8-worker run differs")?;
    let text = String::from_utf8_lossy(&first);
    let verdict = text.lines().find(|l| l.starts_with("verdict")).unwrap_or("no verdict").to_string();
    Ok(format!("4 runs byte-identical ({} bytes); {verdict}", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("class groups vs reduced forms", class_groups),
        ("theta series are Hecke eigenforms", theta_eigenforms),
        ("Frobenius table", frobenius_table),
        ("norm-relation congruences", congruences),
        ("family specialization round trip", family_round_trip),
        ("Iwasawa maps", iwasawa_maps),
        ("Brandt matrices", brandt),
        ("Gross-point trace relations", trace_relations),
        ("interpolation ratios", interpolation),
        ("trivial-character factorization", factorization),
        ("bk-criterion determinism", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
