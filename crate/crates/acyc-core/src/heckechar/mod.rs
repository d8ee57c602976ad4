//! Algebraic Hecke characters of imaginary quadratic fields.
//!
//! A character of infinity type `(a, b)` and modulus `𝔣` satisfies
//! `ψ((α)) = ε(α)·α^{-a}·ᾱ^{-b}` for `α` prime to `𝔣`. When `h_K = 1` it is stored
//! as the character `ε` of `(O/𝔣)^×`; otherwise only norm-power types `a = b` are
//! supported and `ψ = χ·N^{-a}` with `χ` a ray class character.

pub mod anticyc;
pub mod avatar;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::classfield::{ClassFieldError, RayClassGroup};
use crate::exactnum::abelian::Character;
use crate::exactnum::{CycFrac, CycInt, ExactError};
use crate::quadfield::{QuadError, QuadField, QuadIdeal, QuadInt};

pub use anticyc::{find_gamma, AnticycSplit, AnticycTower};
pub use avatar::{AvatarCharacter, PadicEmbedding, Psi0};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("infinity type ({a}, {b}) needs h_K = 1 unless a = b")]
    UnsupportedInfinityType { a: i64, b: i64 },
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,
    #[error("characters live on different fields")]
    FieldMismatch,
    #[error("p = {0} must be inert in K")]
    NotInert(u64),
    #[error("p = {0} ramifies in K")]
    Ramified(u64),
    #[error("expected exactly one ψ₀, found {0}")]
    Psi0Count(usize),
    #[error("root of unity of order {0} is not in the p-adic coefficient field")]
    RootOutsideField(u64),
    #[error("character is not anticyclotomic")]
    NotAnticyclotomic,
    #[error(transparent)]
    ClassField(#[from] ClassFieldError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `K ↪ Q(ζ_{|d|})` through the Gauss sum `Σ (d|a) ζ^a = √d`.
#[derive(Clone, Debug)]
pub struct KEmbedding {
    conductor: u64,
    omega: CycInt,
}

impl KEmbedding {
    pub fn new(field: QuadField) -> Self {
        let d = field.disc();
        let m = d.unsigned_abs();
        let mut g = CycInt::zero();
        for a in 1..=m {
            let k = crate::exactnum::arith::kronecker(d, a);
            if k != 0 {
                g = g + CycInt::zeta(m, a as i64) * CycInt::from_int(k);
            }
        }
        let omega = (CycInt::from_int(d) + g).div_exact_int(&BigInt::from(2)).expect("ω is integral");
        KEmbedding { conductor: m, omega }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn embed(&self, x: QuadInt) -> CycInt {
        CycInt::from_int(x.u) + &self.omega * &CycInt::from_int(x.v)
    }
}

/// The modulus data shared by all characters of a given modulus.
#[derive(Debug)]
pub struct CharSpace {
    field: QuadField,
    modulus: QuadIdeal,
    ray: RayClassGroup,
    emb: KEmbedding,
    /// Units `u = ζ_w^t` as `(u, t)`.
    units: Vec<(QuadInt, i64)>,
    w: u64,
}

impl CharSpace {
    pub fn new(field: QuadField, modulus: &QuadIdeal) -> Result<Arc<Self>, HeckeError> {
        let ray = RayClassGroup::new(field, modulus, None)?;
        let units = field.units();
        let w = units.len() as u64;
        let units = units
            .into_iter()
            .map(|u| {
                let z = field.to_complex(u);
                let t = libm::round(libm::atan2(z.im, z.re) * w as f64 / (2.0 * core::f64::consts::PI)) as i64;
                (u, t.rem_euclid(w as i64))
            })
            .collect();
        Ok(Arc::new(CharSpace { field, modulus: ray.modulus().clone(), ray, emb: KEmbedding::new(field), units, w }))
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    pub fn ray(&self) -> &RayClassGroup {
        &self.ray
    }

    pub fn embedding(&self) -> &KEmbedding {
        &self.emb
    }

    fn principal_units(&self) -> bool {
        self.ray.class_number() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Finite {
    /// `ε` on `(O/𝔣)^×` (class number one).
    Units(Character),
    /// Ray class character `χ` with `ψ = χ·N^{-a}`.
    Ray(Character),
}

/// Exact value `ζ_m^t · (K-part)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeValue {
    pub root_order: u64,
    pub root_exp: i64,
    pub k_part: KPart,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KPart {
    /// `α^{-a} ᾱ^{-b}`.
    Monomial { alpha: QuadInt, a: i64, b: i64 },
    /// `N^e`.
    NormPower { norm: u64, e: i64 },
}

impl HeckeValue {
    pub fn root(&self) -> CycInt {
        CycInt::zeta(self.root_order, self.root_exp)
    }

    pub fn to_cyc(&self, emb: &KEmbedding, field: QuadField) -> CycFrac {
        let root = CycFrac::from_cyc(self.root());
        let k = match &self.k_part {
            KPart::Monomial { alpha, a, b } => {
                // α^{-a} ᾱ^{-b} = α^{x} ᾱ^{y} / N(α)^{z}
                let (a, b) = (*a, *b);
                let x = (-a).max(0) + b.max(0);
                let y = (-b).max(0) + a.max(0);
                let z = a.max(0) + b.max(0);
                let num = emb.embed(*alpha).pow(x as u32) * emb.embed(field.conj(*alpha)).pow(y as u32);
                let den = num_traits::pow(BigInt::from(field.norm(*alpha)), z as usize);
                CycFrac::new(num, den).expect("nonzero norm")
            }
            KPart::NormPower { norm, e } => {
                let n = num_traits::pow(BigInt::from(*norm), e.unsigned_abs() as usize);
                if *e >= 0 {
                    CycFrac::from_int(n)
                } else {
                    CycFrac::new(CycInt::one(), n).expect("nonzero norm")
                }
            }
        };
        &root * &k
    }

    pub fn to_complex(&self, field: QuadField) -> Complex64 {
        let ang = 2.0 * core::f64::consts::PI * self.root_exp as f64 / self.root_order as f64;
        let r = Complex64::new(libm::cos(ang), libm::sin(ang));
        let k = match &self.k_part {
            KPart::Monomial { alpha, a, b } => {
                let z = field.to_complex(*alpha);
                z.powi(-*a as i32) * z.conj().powi(-*b as i32)
            }
            KPart::NormPower { norm, e } => Complex64::new(libm::pow(*norm as f64, *e as f64), 0.0),
        };
        r * k
    }
}

/// An algebraic Hecke character with explicit finite-order data.
#[derive(Clone)]
pub struct HeckeCharacter {
    space: Arc<CharSpace>,
    a: i64,
    b: i64,
    finite: Finite,
}

impl fmt::Debug for HeckeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeCharacter")
            .field("d_k", &self.space.field.d_k())
            .field("modulus", &self.space.modulus.hnf())
            .field("infinity_type", &(self.a, self.b))
            .field("finite", &self.finite)
            .finish()
    }
}

impl PartialEq for HeckeCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.space.field == other.space.field
            && self.space.modulus == other.space.modulus
            && (self.a, self.b) == (other.a, other.b)
            && self.finite == other.finite
    }
}

impl Eq for HeckeCharacter {}

/// All characters of infinity type `(a, b)` defined modulo `𝔣`.
pub fn characters_mod(
    field: QuadField,
    infinity_type: (i64, i64),
    modulus: &QuadIdeal,
) -> Result<Vec<HeckeCharacter>, HeckeError> {
    let space = CharSpace::new(field, modulus)?;
    characters_in(&space, infinity_type)
}

fn characters_in(space: &Arc<CharSpace>, (a, b): (i64, i64)) -> Result<Vec<HeckeCharacter>, HeckeError> {
    if space.principal_units() {
        let g = space.ray.unit_group().clone();
        let e = g.exponent() as i128;
        let w = space.w as i128;
        let mut out = Vec::new();
        for eps in Character::all(&g) {
            // ε(u) = u^{a-b}
            let ok = space.units.iter().all(|&(u, t)| {
                let te = eps.value_exp(&space.ray.unit_log(u).expect("units are prime to 𝔣")) as i128;
                (te * w - t as i128 * (a - b) as i128 * e).rem_euclid(e * w) == 0
            });
            if ok {
                out.push(HeckeCharacter { space: space.clone(), a, b, finite: Finite::Units(eps) });
            }
        }
        Ok(out)
    } else {
        if a != b {
            return Err(HeckeError::UnsupportedInfinityType { a, b });
        }
        Ok(Character::all(space.ray.full_group())
            .into_iter()
            .map(|chi| HeckeCharacter { space: space.clone(), a, b, finite: Finite::Ray(chi) })
            .collect())
    }
}

/// Characters of infinity type `(a, b)` and conductor exactly `𝔣`.
pub fn enumerate_characters(
    field: QuadField,
    infinity_type: (i64, i64),
    conductor: &QuadIdeal,
) -> Result<Vec<HeckeCharacter>, HeckeError> {
    let all = characters_mod(field, infinity_type, conductor)?;
    let mut out = Vec::new();
    for psi in all {
        if psi.is_primitive()? {
            out.push(psi);
        }
    }
    Ok(out)
}

/// `Π 𝔭^{e}` in `O_K`.
fn from_factors(field: QuadField, factors: &[(QuadIdeal, u32)]) -> Result<QuadIdeal, QuadError> {
    let mut acc = QuadIdeal::unit(field.maximal_order());
    for (p, e) in factors {
        acc = acc.mul(&p.pow(*e))?;
    }
    Ok(acc)
}

fn factor(ideal: &QuadIdeal) -> Vec<(QuadIdeal, u32)> {
    ideal.prime_divisors().into_iter().map(|p| {
        let e = ideal.valuation_at(&p);
        (p, e)
    }).collect()
}

/// Least common multiple of two `O_K`-ideals.
pub fn ideal_lcm(x: &QuadIdeal, y: &QuadIdeal) -> Result<QuadIdeal, QuadError> {
    let mut fs = factor(x);
    for (p, e) in factor(y) {
        match fs.iter_mut().find(|(q, _)| *q == p) {
            Some((_, f)) => *f = (*f).max(e),
            None => fs.push((p, e)),
        }
    }
    from_factors(x.field(), &fs)
}

impl HeckeCharacter {
    pub fn field(&self) -> QuadField {
        self.space.field
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.space.modulus
    }

    pub fn space(&self) -> &Arc<CharSpace> {
        &self.space
    }

    pub fn infinity_type(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    /// Order of the roots of unity in the finite part.
    pub fn root_order(&self) -> u64 {
        match &self.finite {
            Finite::Units(c) | Finite::Ray(c) => c.group().exponent(),
        }
    }

    /// Order of the finite-order part.
    pub fn finite_order(&self) -> u64 {
        match &self.finite {
            Finite::Units(c) | Finite::Ray(c) => c.order(),
        }
    }

    /// `t` with `ε(α) = ζ_m^t`, `m = root_order()`.
    pub fn eps_exp(&self, alpha: QuadInt) -> Result<i64, HeckeError> {
        match &self.finite {
            Finite::Units(eps) => {
                let l = self.space.ray.unit_log(alpha).ok_or(HeckeError::NotCoprime)?;
                Ok(eps.value_exp(&l))
            }
            Finite::Ray(chi) => {
                let i = QuadIdeal::principal(self.space.field.maximal_order(), alpha);
                let c = self.space.ray.eval_full(&i).map_err(|_| HeckeError::NotCoprime)?;
                Ok(chi.value_exp(&c))
            }
        }
    }

    /// `ψ(𝔞)` in factored form.
    pub fn eval(&self, ideal: &QuadIdeal) -> Result<HeckeValue, HeckeError> {
        if !self.space.ray.is_coprime(ideal) {
            return Err(HeckeError::NotCoprime);
        }
        let m = self.root_order();
        match &self.finite {
            Finite::Units(eps) => {
                let ideal = if ideal.order().conductor() == 1 { ideal.clone() } else { ideal.extend() };
                let g = ideal.generator().ok_or(QuadError::NotPrincipal)?;
                let l = self.space.ray.unit_log(g).ok_or(HeckeError::NotCoprime)?;
                Ok(HeckeValue {
                    root_order: m,
                    root_exp: eps.value_exp(&l),
                    k_part: KPart::Monomial { alpha: g, a: self.a, b: self.b },
                })
            }
            Finite::Ray(chi) => {
                let c = self.space.ray.eval_full(ideal)?;
                Ok(HeckeValue {
                    root_order: m,
                    root_exp: chi.value_exp(&c),
                    k_part: KPart::NormPower { norm: ideal.norm(), e: -self.a },
                })
            }
        }
    }

    /// `ψ(𝔞)` as an element of a cyclotomic field.
    pub fn value(&self, ideal: &QuadIdeal) -> Result<CycFrac, HeckeError> {
        Ok(self.eval(ideal)?.to_cyc(&self.space.emb, self.space.field))
    }

    pub fn value_complex(&self, ideal: &QuadIdeal) -> Result<Complex64, HeckeError> {
        Ok(self.eval(ideal)?.to_complex(self.space.field))
    }

    /// Restriction `χ` of `ψ((n)) = n^{-a-b}·χ(n)` to `Z`, as `t` with `χ(n) = ζ_m^t`.
    pub fn rational_exp(&self, n: i64) -> Option<i64> {
        self.eps_exp(QuadInt::int(n)).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0
            && self.b == 0
            && match &self.finite {
                Finite::Units(c) | Finite::Ray(c) => c.is_trivial(),
            }
    }

    /// Residues `x` of `(O/𝔣)^×` with `x ≡ 1 mod 𝔡`.
    fn kernel_residues(&self, d: &QuadIdeal) -> Vec<QuadInt> {
        let k = self.space.field;
        self.space
            .modulus
            .residues()
            .into_iter()
            .filter(|&x| self.space.ray.unit_log(x).is_some() && d.contains(k.sub(x, QuadInt::int(1))))
            .collect()
    }

    /// Conductor of the finite part.
    pub fn conductor(&self) -> Result<QuadIdeal, HeckeError> {
        let mut fs = factor(&self.space.modulus);
        for i in 0..fs.len() {
            while fs[i].1 > 0 {
                fs[i].1 -= 1;
                let smaller = from_factors(self.space.field, &fs)?;
                let trivial = self
                    .kernel_residues(&smaller)
                    .into_iter()
                    .all(|x| self.eps_exp(x).map(|t| t == 0).unwrap_or(false));
                if !trivial {
                    fs[i].1 += 1;
                    break;
                }
            }
        }
        Ok(from_factors(self.space.field, &fs)?)
    }

    pub fn is_primitive(&self) -> Result<bool, HeckeError> {
        Ok(self.conductor()? == self.space.modulus)
    }

    /// The same character viewed modulo a multiple `𝔣'` of `𝔣`.
    pub fn lift_to(&self, space: &Arc<CharSpace>) -> Result<HeckeCharacter, HeckeError> {
        self.rebuild(space, (self.a, self.b), |ch, x| ch.eps_exp(x), |ch, i| Ok(ch.eval(i)?.root_exp))
    }

    /// Builds a character on `space` from the finite values of `self`.
    fn rebuild<E, R>(&self, space: &Arc<CharSpace>, inf: (i64, i64), eps_at: E, ray_at: R) -> Result<HeckeCharacter, HeckeError>
    where
        E: Fn(&HeckeCharacter, QuadInt) -> Result<i64, HeckeError>,
        R: Fn(&HeckeCharacter, &QuadIdeal) -> Result<i64, HeckeError>,
    {
        if space.field != self.space.field {
            return Err(HeckeError::FieldMismatch);
        }
        let m = self.root_order();
        let finite = if space.principal_units() {
            let g = space.ray.unit_group();
            let ts = space.ray.unit_generators().into_iter().map(|x| eps_at(self, x)).collect::<Result<Vec<_>, _>>()?;
            Finite::Units(Character::from_values(g, m, &ts)?)
        } else {
            let g = space.ray.full_group();
            let mut ts = Vec::with_capacity(g.rank());
            for k in 0..g.rank() {
                let mut t = 0i64;
                for (ideal, e) in space.ray.generator_word(k) {
                    t += e * ray_at(self, &ideal)?;
                }
                ts.push(t.rem_euclid(m as i64));
            }
            Finite::Ray(Character::from_values(g, m, &ts)?)
        };
        Ok(HeckeCharacter { space: space.clone(), a: inf.0, b: inf.1, finite })
    }

    fn finite_char(&self) -> &Character {
        match &self.finite {
            Finite::Units(c) | Finite::Ray(c) => c,
        }
    }

    fn with_finite(&self, c: Character) -> Finite {
        match &self.finite {
            Finite::Units(_) => Finite::Units(c),
            Finite::Ray(_) => Finite::Ray(c),
        }
    }

    /// `ψ₁ψ₂` on the least common modulus.
    pub fn mul(&self, other: &HeckeCharacter) -> Result<HeckeCharacter, HeckeError> {
        if self.space.field != other.space.field {
            return Err(HeckeError::FieldMismatch);
        }
        let m = ideal_lcm(&self.space.modulus, &other.space.modulus)?;
        let space = if m == self.space.modulus {
            self.space.clone()
        } else if m == other.space.modulus {
            other.space.clone()
        } else {
            CharSpace::new(self.space.field, &m)?
        };
        let x = self.lift_to(&space)?;
        let y = other.lift_to(&space)?;
        let c = x.finite_char().mul(y.finite_char());
        Ok(HeckeCharacter { space, a: x.a + y.a, b: x.b + y.b, finite: x.with_finite(c) })
    }

    pub fn inverse(&self) -> HeckeCharacter {
        HeckeCharacter {
            space: self.space.clone(),
            a: -self.a,
            b: -self.b,
            finite: self.with_finite(self.finite_char().inv()),
        }
    }

    /// `ψ^𝐜(𝔞) = ψ(𝔞̄)`.
    pub fn conj(&self) -> Result<HeckeCharacter, HeckeError> {
        let k = self.space.field;
        let space = CharSpace::new(k, &self.space.modulus.conj())?;
        self.rebuild(
            &space,
            (self.b, self.a),
            |ch, x| ch.eps_exp(k.conj(x)),
            |ch, i| Ok(ch.eval(&i.conj())?.root_exp),
        )
    }

    /// `ψ·N^{-t}`, of infinity type `(a+t, b+t)`.
    pub fn norm_twist(&self, t: i64) -> HeckeCharacter {
        HeckeCharacter { space: self.space.clone(), a: self.a + t, b: self.b + t, finite: self.finite.clone() }
    }

    /// `ψ^k`.
    pub fn pow(&self, k: i64) -> HeckeCharacter {
        HeckeCharacter {
            space: self.space.clone(),
            a: self.a * k,
            b: self.b * k,
            finite: self.with_finite(self.finite_char().pow(k)),
        }
    }
}

/// `ψ((α))` straight from the defining formula, for tests and oracles.
pub fn principal_value(psi: &HeckeCharacter, alpha: QuadInt) -> Result<CycFrac, HeckeError> {
    let t = psi.eps_exp(alpha)?;
    let (a, b) = psi.infinity_type();
    let k = match psi.finite {
        Finite::Units(_) => KPart::Monomial { alpha, a, b },
        Finite::Ray(_) => KPart::NormPower { norm: psi.field().norm(alpha) as u64, e: -a },
    };
    let v = HeckeValue { root_order: psi.root_order(), root_exp: t, k_part: k };
    Ok(v.to_cyc(&psi.space.emb, psi.field()))
}
