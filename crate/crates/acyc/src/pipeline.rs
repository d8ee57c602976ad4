//! End-to-end computations behind the subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use acyc_core::classfield::{ring_projection, ClassEval, RingClassGroup};
use acyc_core::exactnum::abelian::{Character, GroupElem, GroupHom};
use acyc_core::exactnum::arith::{factorize, is_prime, is_squarefree, kronecker, mod_inv, primes_up_to};
use acyc_core::exactnum::CycInt;
use acyc_core::heckechar::{find_gamma, AnticycSplit, AnticycTower};
use acyc_core::lfun::{interpolation_ratio_check, rankin_series, CentralValue};
use acyc_core::quadfield::{class_group, QuadField, QuadIdeal};
use acyc_core::quatgross::{
    class_set_and_brandt, gross_points, inversion_symmetry, primitive_integral, theta_element, BrandtSystem, GrossTower,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::newform::NewformFile;
use crate::report::{Report, Table};
use crate::CliError;

/// Which Brandt eigenvector feeds the Gross points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigen {
    Newform,
    Eisenstein,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub newform: PathBuf,
    pub d_k: u64,
    pub p: u64,
    pub c: u64,
    /// `χ_t` as exponents on the invariant factors of `Pic(O_c)`.
    pub tame: Vec<i64>,
    /// `χ^-` as an exponent on the generator of `Γ_n`.
    pub wild: i64,
    pub level: u32,
    /// `χ` has infinity type `(−j, j)`.
    pub j: i64,
    pub q_max: u64,
    pub l_tolerance: f64,
    pub eigen: Eigen,
    pub force: bool,
    pub cache: Cache,
}

impl RunConfig {
    pub fn running(newform: PathBuf) -> Self {
        RunConfig {
            newform,
            d_k: 7,
            p: 5,
            c: 1,
            tame: Vec::new(),
            wild: 1,
            level: 2,
            j: 1,
            q_max: 13,
            l_tolerance: 1e-10,
            eigen: Eigen::Newform,
            force: false,
            cache: Cache::disabled(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Checklist {
    pub items: Vec<CheckItem>,
}

impl Checklist {
    fn push(&mut self, name: &'static str, passed: bool, witness: impl Into<String>) {
        self.items.push(CheckItem { name, passed, witness: witness.into() });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.items.iter().filter(|i| !i.passed).map(|i| i.name).collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("assumptions", &["check", "status", "witness"]);
        for i in &self.items {
            t.push([i.name, if i.passed { "pass" } else { "FAIL" }, i.witness.as_str()]);
        }
        t
    }
}

/// `N_f = N⁺·N⁻` with `N⁺` split and `N⁻` inert in `K`.
pub fn heegner_split(level: u64, field: QuadField) -> Result<(u64, u64), String> {
    let (mut plus, mut minus) = (1, 1);
    for (l, e) in factorize(level) {
        if e > 1 {
            return Err(format!("{l}^{e} divides N_f"));
        }
        match field.kronecker(l) {
            1 => plus *= l,
            -1 => minus *= l,
            _ => return Err(format!("{l} ramifies in K")),
        }
    }
    Ok((minus, plus))
}

fn legendre(a: i64, p: u64) -> i32 {
    kronecker(a.rem_euclid(p as i64), p)
}

/// Twelve decimals with `-0.000…` printed as `0.000…`.
fn fixed12(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') { s.trim_start_matches('-').to_string() } else { s }
}

/// Cache traffic goes to stderr so reports stay byte-identical.
fn note_hit(kind: &str, hit: bool) {
    if hit {
        eprintln!("cache hit: {kind}");
    }
}

fn show(q: Option<u64>) -> String {
    q.map_or("none".to_string(), |q| q.to_string())
}

/// Primes witnessing that the mod-`p` image is neither in a Borel, a split or non-split
/// Cartan normalizer, nor exceptional.
fn image_witnesses(a: &[i64], level: u64, p: u64) -> [Option<u64>; 3] {
    let mut out = [None; 3];
    let bound = (a.len() as u64 - 1).min(1000);
    for q in primes_up_to(bound) {
        if level.is_multiple_of(q) || q == p {
            continue;
        }
        let aq = a[q as usize];
        let disc = aq * aq - 4 * q as i64;
        match legendre(disc, p) {
            -1 => out[0] = out[0].or(Some(q)),
            1 => out[1] = out[1].or(Some(q)),
            _ => {}
        }
        let qi = mod_inv(q as i64, p as i64).expect("q ≠ p");
        let u = (aq * aq).rem_euclid(p as i64) * qi % p as i64;
        if ![0, 1, 2, 4].contains(&u) {
            out[2] = out[2].or(Some(q));
        }
    }
    out
}

/// Every hypothesis of the non-vanishing criterion, with the computed witness.
pub fn checklist(cfg: &RunConfig, form: &NewformFile, a: &[i64]) -> Result<Checklist, CliError> {
    let field = QuadField::new(cfg.d_k)?;
    let (p, c, n_f, k) = (cfg.p, cfg.c, form.level, form.weight as i64);
    let mut list = Checklist::default();

    let bad = 6 * n_f * cfg.d_k;
    list.push("p prime, p ∤ 6·N_f·D_K", is_prime(p) && !bad.is_multiple_of(p), format!("6·N_f·D_K = {bad}"));
    let inert = is_prime(p) && field.kronecker(p) == -1;
    list.push("p inert in K", inert, format!("(−{}/{p}) = {}", cfg.d_k, if is_prime(p) { field.kronecker(p) } else { 0 }));

    let good: Vec<u64> = primes_up_to((a.len() as u64 - 1).min(1000)).into_iter().filter(|q| n_f % q != 0).collect();
    let zeros = good.iter().filter(|&&q| a[q as usize] == 0).count();
    let [nonsplit, split, exc] = image_witnesses(a, n_f, p);
    let big = zeros * 10 < good.len() && nonsplit.is_some() && split.is_some() && exc.is_some();
    list.push(
        "f not CM, big image at p",
        big,
        format!(
            "a_q = 0 for {zeros}/{} good q ≤ 1000; witness q = {}/{}/{}",
            good.len(),
            show(nonsplit),
            show(split),
            show(exc)
        ),
    );
    let ordinary = a.get(p as usize).is_some_and(|ap| ap % p as i64 != 0);
    let distinguished = ordinary && (k - 1) % (p as i64 - 1) != 0;
    list.push(
        "residual image irreducible and p-distinguished",
        nonsplit.is_some() && distinguished,
        format!("irreducible mod {p} at q = {}; a_p = {}", show(nonsplit), a.get(p as usize).copied().unwrap_or(0)),
    );
    let h = class_group(field.maximal_order())?.class_number();
    list.push("p ∤ h_K", h % p != 0, format!("h_K = {h}"));
    let bound = (k - 2).max(cfg.j + 1);
    list.push("p > max(k − 2, j + 1)", p as i64 > bound, format!("max = {bound}"));
    list.push("N_f squarefree", is_squarefree(n_f), format!("N_f = {n_f}"));

    let split_only = factorize(c).iter().all(|&(l, _)| field.kronecker(l) == 1);
    let coprime = num_integer::gcd(c, p * cfg.d_k * n_f) == 1;
    let gamma = if split_only && coprime {
        let ring = RingClassGroup::new(field, c, None)?;
        let chi_t = Character::new(ring.full_group(), &pad(&cfg.tame, ring.full_group().rank()));
        find_gamma(field, c, &chi_t)?
    } else {
        None
    };
    list.push(
        "c split-only, coprime to p·D_K·N_f, χ_t = γ/γ^c",
        split_only && coprime && gamma.is_some(),
        format!("c = {c}; γ = {}", gamma.as_ref().map_or("none".to_string(), |g| format!("{:?}", g.exps()))),
    );
    list.push("f ordinary at p", ordinary, format!("a_p mod p = {}", a.get(p as usize).map_or(0, |x| x.rem_euclid(p as i64))));
    let heeg = heegner_split(n_f, field);
    let heeg_ok = matches!(heeg, Ok((m, _)) if is_prime(m));
    list.push(
        "N_f = N⁺N⁻, N⁻ a single inert prime",
        heeg_ok,
        match heeg {
            Ok((m, pl)) => format!("N⁻ = {m}, N⁺ = {pl}"),
            Err(e) => e,
        },
    );

    let delta = if heeg_ok && list.items[0].passed {
        delta_search(a, n_f, field, p, c, cfg.l_tolerance, &cfg.cache)?
    } else {
        None
    };
    list.push(
        "auxiliary δ with L(f/K, δ², 1) ≠ 0",
        delta.is_some(),
        delta.map_or("none found for split ℓ ≤ 50".to_string(), |d| d.describe()),
    );
    Ok(list)
}

fn pad(v: &[i64], n: usize) -> Vec<i64> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

/// A ring class character of `Pic(O_m)` as a table on the full group.
#[derive(Clone, Debug)]
pub struct RingChar {
    pub ring: RingClassGroup,
    pub values: BTreeMap<GroupElem, Complex64>,
}

impl RingChar {
    fn on_ideal(&self, q: &QuadIdeal) -> Option<Complex64> {
        self.ring.eval(q).ok().map(|g| self.values[&g])
    }
}

/// Smallest `m | M` through which `chi` factors, with its descent to `Pic(O_m)`.
pub fn primitive_descent(field: QuadField, ring: &RingClassGroup, chi: &Character) -> Result<RingChar, CliError> {
    let big = ring.conductor();
    let mut divisors = acyc_core::exactnum::arith::divisors(big);
    divisors.sort();
    for m in divisors {
        let small = RingClassGroup::new(field, m, None)?;
        let pi = ring_projection(ring, &small)?;
        if let Some(values) = descend(chi, &pi) {
            return Ok(RingChar { ring: small, values });
        }
    }
    unreachable!("m = M always works")
}

fn descend(chi: &Character, pi: &GroupHom) -> Option<BTreeMap<GroupElem, Complex64>> {
    let mut values: BTreeMap<GroupElem, i64> = BTreeMap::new();
    for g in pi.src.elements() {
        let v = chi.value_exp(&g);
        match values.insert(pi.apply(&g), v) {
            Some(w) if w != v => return None,
            _ => {}
        }
    }
    let e = chi.group().exponent() as f64;
    Some(
        values
            .into_iter()
            .map(|(g, v)| (g, Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * v as f64 / e)))
            .collect(),
    )
}

/// `L(f/K, χ, 1)` for a primitive ring class character.
pub fn central_value(a: &[i64], level: u64, field: QuadField, chi: &RingChar, tol: f64) -> Result<CentralValue, CliError> {
    let m = chi.ring.conductor();
    let theta_level = field.d_k() * m * m;
    let len = a.len() - 1;
    let series = rankin_series(a, level, field, |q| chi.on_ideal(q), theta_level, len)?;
    let need = series.needed_length(tol * 1e-3).min(len);
    let series = rankin_series(&a[..=need], level, field, |q| chi.on_ideal(q), theta_level, need)?;
    Ok(series.central_value(tol)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaWitness {
    pub ell: u64,
    pub exponent: u32,
    pub delta: Vec<i64>,
    pub square_conductor: u64,
    pub value: f64,
    pub residual: f64,
}

impl DeltaWitness {
    pub fn describe(&self) -> String {
        format!(
            "δ = {:?} on Pic(O_{}^{}), δ² of conductor {}: L = {:.12} (residual {:.1e})",
            self.delta, self.ell, self.exponent, self.square_conductor, self.value, self.residual
        )
    }
}

/// First nontrivial `δ` of `ℓ`-power conductor (ℓ split, prime to `p·N_f·D_K·c`) with
/// `|L(f/K, δ², 1)|` above `1e3·tol`.
pub fn delta_search(
    a: &[i64],
    level: u64,
    field: QuadField,
    p: u64,
    c: u64,
    tol: f64,
    cache: &Cache,
) -> Result<Option<DeltaWitness>, CliError> {
    let key = format!("delta|{a_hash}|{level}|{}|{p}|{c}|{tol:e}", field.d_k(), a_hash = coeff_digest(a));
    let (found, hit) = cache.get_or_compute("delta", &key, || -> Result<Option<DeltaWitness>, CliError> {
        for ell in primes_up_to(50) {
            if field.kronecker(ell) != 1 || (p * level * field.d_k() * c).is_multiple_of(ell) {
                continue;
            }
            for e in 1..=3u32 {
                let ring = RingClassGroup::new(field, ell.pow(e), None)?;
                let chars: Vec<Character> = Character::all(ring.full_group()).into_iter().filter(|d| !d.is_trivial()).collect();
                let rows: Vec<Result<(Vec<i64>, u64, CentralValue), CliError>> = chars
                    .par_iter()
                    .map(|d| {
                        let sq = primitive_descent(field, &ring, &d.mul(d))?;
                        let v = central_value(a, level, field, &sq, tol)?;
                        Ok((d.exps().to_vec(), sq.ring.conductor(), v))
                    })
                    .collect();
                for r in rows {
                    let (delta, m, v) = r?;
                    if v.value.norm() > 1e3 * tol {
                        return Ok(Some(DeltaWitness {
                            ell,
                            exponent: e,
                            delta,
                            square_conductor: m,
                            value: v.value.re,
                            residual: v.residual,
                        }));
                    }
                }
            }
        }
        Ok(None)
    })?;
    note_hit("delta", hit);
    Ok(found)
}

fn coeff_digest(a: &[i64]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for x in a {
        h.update(x.to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// `v_p(N(x)) / [Q(ζ):Q]` as a reduced fraction, or `None` for zero.
pub fn valuation(x: &CycInt, p: u64) -> Option<BigRational> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut norm = x.norm().abs();
    let mut v = 0i64;
    while norm.is_multiple_of(&p) {
        norm /= &p;
        v += 1;
    }
    Some(BigRational::new(v.into(), BigInt::from(acyc_core::exactnum::arith::euler_phi(x.conductor()))))
}

/// Brandt data and the chosen eigenvector for the definite algebra of discriminant `N⁻`.
pub fn brandt_and_eigenvector(
    n_minus: u64,
    n_plus: u64,
    q_max: u64,
    a: Option<&[i64]>,
    p: u64,
) -> Result<(BrandtSystem, Vec<BigRational>), CliError> {
    let sys = class_set_and_brandt(n_minus, n_plus, q_max)?;
    let v = match a {
        Some(a) => {
            let level = n_minus * n_plus;
            let ap: BTreeMap<u64, i64> =
                sys.primes().filter(|q| !(level * p).is_multiple_of(*q)).map(|q| (q, a[q as usize])).collect();
            sys.eigenvector(&ap, level * p)?
        }
        None => sys.eisenstein(),
    };
    Ok((sys, v))
}

pub struct Prepared {
    pub form: NewformFile,
    pub a: Vec<i64>,
    pub field: QuadField,
    pub checklist: Checklist,
    pub n_minus: u64,
    pub n_plus: u64,
    pub tower: GrossTower,
    pub v: Vec<BigInt>,
}

/// Load, validate, run the checklist and build the Gross tower up to `cfg.level`.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let form = NewformFile::load(&cfg.newform)?;
    form.validate(2000)?;
    let a = form.rational()?;
    let field = QuadField::new(cfg.d_k)?;
    let checklist = checklist(cfg, &form, &a)?;
    let structural = ["p prime, p ∤ 6·N_f·D_K", "p inert in K", "N_f = N⁺N⁻, N⁻ a single inert prime"];
    let failed = checklist.failed();
    if !failed.is_empty() && (!cfg.force || failed.iter().any(|f| structural.contains(f))) {
        return Err(CliError::Assumption(failed.join("; ")));
    }
    let (n_minus, n_plus) = heegner_split(form.level, field).map_err(CliError::Assumption)?;
    let eig = match cfg.eigen {
        Eigen::Newform => Some(a.as_slice()),
        Eigen::Eisenstein => None,
    };
    let (sys, v) = brandt_and_eigenvector(n_minus, n_plus, cfg.q_max, eig, cfg.p)?;
    let tower = gross_points(&sys, field, cfg.c, cfg.p, cfg.level)?;
    Ok(Prepared { form, a, field, checklist, n_minus, n_plus, tower, v: primitive_integral(&v) })
}

/// `χ_t` on `Pic(O_c)` pulled back to `Pic(O_{cp^n})` along the tower.
fn pulled_back_tame(tower: &GrossTower, tame: &[i64], n: u32) -> Result<Character, CliError> {
    let g0 = tower.level(0)?.ring().full_group().clone();
    let mut chi = Character::new(&g0, &pad(tame, g0.rank()));
    for m in 1..=n {
        chi = chi.pullback(tower.level(m)?.down_map().expect("down map above level 0"));
    }
    Ok(chi)
}

pub const VERDICT_OK: &str = "non-vanishing hypothesis numerically satisfied";
pub const VERDICT_ZERO: &str = "inconclusive (value ≡ 0 at available precision)";
pub const VERDICT_DEGENERATE: &str = "inconclusive/degenerate (Eisenstein eigenvector)";

/// Θ_n evaluated at every `χ_t·χ^-` and the verdict at the configured `χ^-`.
pub fn bk_criterion(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = prepare(cfg)?;
    let n = cfg.level;
    let theta = theta_element(&prep.tower, &prep.v, n, 0)?;
    let anti = AnticycTower::new(prep.field, cfg.p, cfg.c, n)?;
    let tame = pulled_back_tame(&prep.tower, &cfg.tame, n)?;
    let wild_order = anti.wild_order() as i64;
    let rows: Vec<(i64, CycInt, Option<BigRational>)> = (0..wild_order)
        .into_par_iter()
        .map(|w| {
            let zero = vec![0; anti.delta_orders().len()];
            let chi = anti.recombine(&AnticycSplit { tame: zero, wild: w }).mul(&tame);
            let x = theta.eval(&chi);
            let v = valuation(&x, cfg.p);
            (w, x, v)
        })
        .collect();

    let mut r = Report::new("bk-criterion");
    r.fact("newform", &prep.form.label);
    r.fact("N_f", prep.form.level);
    r.fact("weight", prep.form.weight);
    r.fact("D_K", cfg.d_k);
    r.fact("p", cfg.p);
    r.fact("c", cfg.c);
    r.fact("level n", n);
    r.fact("chi_t", format!("{:?}", pad(&cfg.tame, prep.tower.level(0)?.ring().full_group().rank())));
    r.fact("chi^- exponent", cfg.wild);
    r.fact("N^-", prep.n_minus);
    r.fact("N^+", prep.n_plus);
    let sys = prep.tower.system();
    r.fact("ideal classes", sys.class_number());
    r.fact("weights", format!("{:?}", sys.weights()));
    r.fact("eigenvector", format!("{:?}", prep.v.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
    r.fact(
        "Gross points per level",
        format!("{:?}", (0..=n).map(|m| prep.tower.level(m).map(|l| l.points().len())).collect::<Result<Vec<_>, _>>()?),
    );
    r.fact("Pic(O_cp^n)", format!("{:?}", theta.group().invariants()));
    r.fact("Gamma_n order", wild_order);
    r.fact("alpha exponent", theta.alpha_exponent());
    r.fact(
        "inversion symmetry",
        inversion_symmetry(&theta).map_or("none".to_string(), |(s, g)| format!("sign {s}, shift {g:?}")),
    );
    let forced = !prep.checklist.passed();
    r.fact("assumptions", if forced { "FORCED past failures" } else { "all pass" });

    let selected = rows.iter().find(|(w, _, _)| *w == cfg.wild.rem_euclid(wild_order));
    let verdict = match (cfg.eigen, selected) {
        (Eigen::Eisenstein, _) => VERDICT_DEGENERATE.to_string(),
        (_, Some((_, x, Some(v)))) if !x.is_zero() => {
            format!("{VERDICT_OK} at precision {}^{n} (valuation {v})", cfg.p)
        }
        _ => VERDICT_ZERO.to_string(),
    };
    r.fact("verdict", verdict);
    r.fact("Selmer rank one", "implied by the criterion when it holds; not computed here");

    r.tables.push(prep.checklist.table());
    let mut t = Table::new("values", &["chi^-", "zero", "valuation", "norm"]);
    for (w, x, v) in &rows {
        t.push([
            w.to_string(),
            x.is_zero().to_string(),
            v.as_ref().map_or("-".to_string(), |v| v.to_string()),
            x.norm().to_string(),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRowData {
    pub label: String,
    pub theta_abs2: f64,
    pub valuation: Option<String>,
    pub l_value: f64,
    pub residual: f64,
}

/// Level-`n` characters of exact conductor `cp^n`: `|χ(Θ_n)|²` against `L(f/K, χ, 1)`.
pub fn interpolation_ratios(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = prepare(cfg)?;
    let n = cfg.level;
    if n == 0 {
        return Err(CliError::Input("ratio check needs level ≥ 1".into()));
    }
    let theta = theta_element(&prep.tower, &prep.v, n, 0)?;
    let lvl = prep.tower.level(n)?;
    let ring = lvl.ring().clone();
    let below = prep.tower.level(n - 1)?.ring().clone();
    let pi = ring_projection(&ring, &below)?;
    let chars: Vec<Character> =
        Character::all(theta.group()).into_iter().filter(|chi| descend(chi, &pi).is_none()).collect();
    let key = format!(
        "ratios|{}|{}|{}|{}|{}|{n}|{:?}|{:e}",
        coeff_digest(&prep.a),
        prep.form.level,
        cfg.d_k,
        cfg.p,
        cfg.c,
        prep.v,
        cfg.l_tolerance
    );
    let (rows, hit) = cfg.cache.get_or_compute("ratios", &key, || -> Result<Vec<RatioRowData>, CliError> {
        chars
            .par_iter()
            .map(|chi| {
                let x = theta.eval(chi);
                let th = x.to_complex().norm_sqr();
                let prim = primitive_descent(prep.field, &ring, chi)?;
                let l = central_value(&prep.a, prep.form.level, prep.field, &prim, cfg.l_tolerance)?;
                Ok(RatioRowData {
                    label: format!("{:?}", chi.exps()),
                    theta_abs2: th,
                    valuation: valuation(&x, cfg.p).map(|v| v.to_string()),
                    l_value: l.value.re,
                    residual: l.residual,
                })
            })
            .collect()
    })?;
    note_hit("ratios", hit);
    let batch: Vec<(String, f64, f64)> = rows.iter().map(|r| (r.label.clone(), r.theta_abs2, r.l_value)).collect();
    let report = interpolation_ratio_check(&batch, 1e-8)?;
    let mut r = Report::new("interpolation-ratios");
    r.fact("newform", &prep.form.label);
    r.fact("level n", n);
    r.fact("characters", rows.len());
    r.fact("ratio spread", format!("{:.3e}", report.spread));
    r.fact("one-sided zeros", report.mismatches);
    let mut t = Table::new("ratios", &["character", "|Θ|²", "valuation", "L(f/K,χ,1)", "ratio", "fe residual"]);
    for (row, rr) in rows.iter().zip(&report.rows) {
        t.push([
            row.label.clone(),
            format!("{:.10}", row.theta_abs2),
            row.valuation.clone().unwrap_or_else(|| "-".into()),
            fixed12(row.l_value),
            rr.ratio.map_or("-".to_string(), |x| format!("{x:.12}")),
            format!("{:.1e}", row.residual),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

/// Central values for every character of `Pic(O_m)`.
pub fn lvalue_table(form: &NewformFile, d_k: u64, m: u64, tol: f64) -> Result<Report, CliError> {
    let a = form.rational()?;
    let field = QuadField::new(d_k)?;
    let ring = RingClassGroup::new(field, m, None)?;
    let chars = Character::all(ring.full_group());
    let rows: Vec<Result<(Character, u64, CentralValue), CliError>> = chars
        .par_iter()
        .map(|chi| {
            let prim = primitive_descent(field, &ring, chi)?;
            let v = central_value(&a, form.level, field, &prim, tol)?;
            Ok((chi.clone(), prim.ring.conductor(), v))
        })
        .collect();
    let mut r = Report::new("lvalue");
    r.fact("newform", &form.label);
    r.fact("D_K", d_k);
    r.fact("ring class conductor", m);
    r.fact("Pic(O_m)", format!("{:?}", ring.full_group().invariants()));
    let mut t = Table::new("lvalues", &["character", "conductor", "L(f/K,χ,1)", "root number", "fe residual", "tail"]);
    for row in rows {
        let (chi, cond, v) = row?;
        t.push([
            format!("{:?}", chi.exps()),
            cond.to_string(),
            fixed12(v.value.re),
            format!("{:.6}", v.root_number.re),
            format!("{:.1e}", v.residual),
            format!("{:.1e}", v.tail),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}
