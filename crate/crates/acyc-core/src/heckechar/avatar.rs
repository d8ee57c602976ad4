//! `p`-adic avatars and the character `ψ₀`.

use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{characters_mod, HeckeCharacter, HeckeError, HeckeValue, KPart};
use crate::exactnum::{PadicCtx, PadicNum};
use crate::quadfield::{class_group, QuadField, QuadIdeal, QuadInt};

/// A fixed `ι_p : K(μ_{p^f−1}) ↪ Q_{p^f}` at precision `p^n`.
#[derive(Clone, Debug)]
pub struct PadicEmbedding {
    field: QuadField,
    ctx: PadicCtx,
    omega: PadicNum,
    /// Teichmüller lift of a generator of the residue field.
    zeta: PadicNum,
}

impl PadicEmbedding {
    /// `p` inert uses `Q_{p²}`; `p` split uses `Q_p` through the first prime above `p`.
    pub fn new(field: QuadField, p: u64, prec: u32) -> Result<Self, HeckeError> {
        let sp = field.splitting(p)?;
        if sp.is_ramified() || p == 2 {
            return Err(HeckeError::Ramified(p));
        }
        let degree = if sp.is_inert() { 2 } else { 1 };
        let ctx = PadicCtx::new(p, degree, prec)?;
        let d = field.disc();
        let s = PadicNum::from_int(&ctx, d).sqrt().ok_or(HeckeError::Ramified(p))?;
        let half = PadicNum::from_int(&ctx, 2).inv()?;
        let mut omega = &(&PadicNum::from_int(&ctx, d) + &s) * &half;
        if sp.is_split() {
            // pick the root reducing to ω mod the first prime above p
            let first = &sp.primes()[0];
            let r0 = (0..p as i64).find(|&r| first.contains(QuadInt::new(-r, 1))).expect("ω has a residue");
            let red = omega.truncate(1).residue_index() as i64;
            if red != r0 {
                omega = &(&PadicNum::from_int(&ctx, d) - &s) * &half;
            }
        }
        let zeta = PadicNum::residue_generator(&ctx).teichmuller()?;
        Ok(PadicEmbedding { field, ctx, omega, zeta })
    }

    pub fn ctx(&self) -> &PadicCtx {
        &self.ctx
    }

    pub fn embed(&self, x: QuadInt) -> PadicNum {
        &PadicNum::from_int(&self.ctx, x.u) + &(&self.omega * &PadicNum::from_int(&self.ctx, x.v))
    }

    /// `ι_p(ζ_m^t)` with `ι_p(ζ_m) = ζ^{(q−1)/m}`.
    pub fn root(&self, m: u64, t: i64) -> Result<PadicNum, HeckeError> {
        let t = t.rem_euclid(m as i64);
        let g = num_integer::gcd(m, t as u64).max(1);
        let (m, t) = (m / g, t / g as i64);
        let q1 = self.ctx.residue_size() - 1;
        if !q1.is_multiple_of(m) {
            return Err(HeckeError::RootOutsideField(m));
        }
        let e = ((q1 / m) as i128 * t as i128).rem_euclid(q1 as i128);
        Ok(self.zeta.pow_u(&BigInt::from(e)))
    }

    pub fn value(&self, v: &HeckeValue) -> Result<PadicNum, HeckeError> {
        let r = self.root(v.root_order, v.root_exp)?;
        let k = match &v.k_part {
            KPart::Monomial { alpha, a, b } => {
                let x = self.embed(*alpha).pow(-*a)?;
                let y = self.embed(self.field.conj(*alpha)).pow(-*b)?;
                &x * &y
            }
            KPart::NormPower { norm, e } => PadicNum::from_int(&self.ctx, *norm).pow(*e)?,
        };
        Ok(&r * &k)
    }
}

/// `ψ̂ = ι_p ∘ ψ` on ideals prime to `𝔣p`.
#[derive(Clone, Debug)]
pub struct AvatarCharacter {
    psi: HeckeCharacter,
    emb: PadicEmbedding,
}

impl AvatarCharacter {
    pub fn new(psi: HeckeCharacter, emb: PadicEmbedding) -> Result<Self, HeckeError> {
        let m = psi.finite_order();
        if !(emb.ctx.residue_size() - 1).is_multiple_of(m) {
            return Err(HeckeError::RootOutsideField(m));
        }
        Ok(AvatarCharacter { psi, emb })
    }

    pub fn character(&self) -> &HeckeCharacter {
        &self.psi
    }

    pub fn embedding(&self) -> &PadicEmbedding {
        &self.emb
    }

    pub fn eval(&self, ideal: &QuadIdeal) -> Result<PadicNum, HeckeError> {
        if ideal.norm().is_multiple_of(self.emb.ctx.p) {
            return Err(HeckeError::NotCoprime);
        }
        self.emb.value(&self.psi.eval(ideal)?)
    }

    /// `ψ̂((α))`.
    pub fn eval_principal(&self, alpha: QuadInt) -> Result<PadicNum, HeckeError> {
        let ok = self.psi.field().maximal_order();
        self.eval(&QuadIdeal::principal(ok, alpha))
    }
}

/// The character `ψ₀` of infinity type `(−1, 0)` and conductor `(p)` whose avatar
/// takes values in `1 + pZ_{p²}`.
#[derive(Clone, Debug)]
pub struct Psi0 {
    avatar: AvatarCharacter,
}

impl Psi0 {
    pub fn new(field: QuadField, p: u64, prec: u32) -> Result<Self, HeckeError> {
        let sp = field.splitting(p)?;
        if !sp.is_inert() {
            return Err(HeckeError::NotInert(p));
        }
        let h = class_group(field.maximal_order())?.class_number();
        if h % p == 0 {
            return Err(crate::classfield::ClassFieldError::PDividesClassNumber { p, h }.into());
        }
        if p < 5 {
            return Err(crate::classfield::ClassFieldError::SmallPrime(p).into());
        }
        let ok = field.maximal_order();
        let modulus = QuadIdeal::principal(ok, QuadInt::int(p as i64));
        let emb = PadicEmbedding::new(field, p, prec)?;
        let mut found: Vec<AvatarCharacter> = Vec::new();
        for psi in characters_mod(field, (-1, 0), &modulus)? {
            let av = AvatarCharacter::new(psi, emb.clone())?;
            let gens = av.psi.space().ray().unit_generators();
            let mut ok_all = true;
            for g in gens {
                if !av.eval_principal(g)?.truncate(1).is_one() {
                    ok_all = false;
                    break;
                }
            }
            if ok_all {
                found.push(av);
            }
        }
        if found.len() != 1 {
            return Err(HeckeError::Psi0Count(found.len()));
        }
        Ok(Psi0 { avatar: found.pop().expect("one survivor") })
    }

    pub fn character(&self) -> &HeckeCharacter {
        &self.avatar.psi
    }

    pub fn avatar(&self) -> &AvatarCharacter {
        &self.avatar
    }

    pub fn p(&self) -> u64 {
        self.avatar.emb.ctx.p
    }

    /// `⟨α⟩ = α·ω(α)^{-1}`, the avatar on `(α)`.
    pub fn angle(&self, alpha: QuadInt) -> Result<PadicNum, HeckeError> {
        self.avatar.eval_principal(alpha)
    }
}
