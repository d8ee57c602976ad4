//! The Λ-adic theta family `Σ ξψ₀(𝔞)[𝔞] q^{N𝔞}` truncated at `p^n`.
//!
//! The class `[𝔞]` in `Γ_∞` is recorded through its image `ψ̂₀(𝔞) mod p^n`, so each
//! coefficient is a finite sum `Σ c_γ [γ]` keyed by that residue.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{level_and_nebentypus, QExpansion, ThetaError};
use crate::exactnum::{PadicCtx, PadicNum};
use crate::heckechar::{AvatarCharacter, HeckeCharacter, HeckeError, Psi0};
use crate::quadfield::ideals_of_norm;

type Key = (BigInt, BigInt);

#[derive(Clone, Debug)]
pub struct LambdaThetaFamily {
    xi: HeckeCharacter,
    ctx: PadicCtx,
    level: u64,
    /// `coeffs[m]` maps `ψ̂₀(𝔞) mod p^n` to the summed `ι_p(ξψ₀(𝔞))`.
    coeffs: Vec<BTreeMap<Key, PadicNum>>,
}

impl LambdaThetaFamily {
    /// Family through `ψ` of weight `ν₀`, with `ξ = ψ·ψ₀^{1−ν₀}`.
    pub fn through(psi: &HeckeCharacter, psi0: &Psi0, b: usize) -> Result<Self, ThetaError> {
        let (a, bb) = psi.infinity_type();
        if bb != 0 || a > 0 {
            return Err(ThetaError::BadInfinityType(a, bb));
        }
        let nu0 = 1 - a;
        let xi = psi.mul(&psi0.character().pow(1 - nu0))?;
        Self::new(&xi, psi0, b)
    }

    /// `ξ` must have infinity type `(0, 0)`.
    pub fn new(xi: &HeckeCharacter, psi0: &Psi0, b: usize) -> Result<Self, ThetaError> {
        let (a, bb) = xi.infinity_type();
        if (a, bb) != (0, 0) {
            return Err(ThetaError::BadInfinityType(a, bb));
        }
        let key_av = psi0.avatar();
        let ctx = key_av.embedding().ctx().clone();
        let xi_psi0 = xi.mul(psi0.character())?;
        let av = AvatarCharacter::new(xi_psi0.clone(), key_av.embedding().clone())?;
        let ok = xi.field().maximal_order();
        let p = ctx.p;
        let mut coeffs = Vec::with_capacity(b + 1);
        for m in 0..=b {
            let mut row: BTreeMap<Key, PadicNum> = BTreeMap::new();
            if m > 0 && !(m as u64).is_multiple_of(p) {
                for i in ideals_of_norm(ok, m as u64, Some(xi_psi0.modulus())) {
                    let key = key_av.eval(&i)?;
                    let v = av.eval(&i)?;
                    let slot = row.entry(parts(&key)).or_insert_with(|| PadicNum::zero(&ctx));
                    *slot = &*slot + &v;
                }
                row.retain(|_, v| !v.is_zero());
            }
            coeffs.push(row);
        }
        let (level, _) = level_and_nebentypus(&xi_psi0);
        Ok(LambdaThetaFamily { xi: xi.clone(), ctx, level, coeffs })
    }

    pub fn xi(&self) -> &HeckeCharacter {
        &self.xi
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn p_precision(&self) -> u32 {
        self.ctx.prec
    }

    /// Number of group elements carrying the coefficient of `q^m`.
    pub fn support(&self, m: usize) -> usize {
        self.coeffs[m].len()
    }

    /// The same family at a lower `p`-adic precision.
    pub fn reduce(&self, prec: u32) -> Self {
        let prec = prec.min(self.ctx.prec);
        let ctx = self.ctx.with_prec(prec);
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut out: BTreeMap<Key, PadicNum> = BTreeMap::new();
                for (k, v) in row {
                    let key = parts(&PadicNum::new(&ctx, k.0.clone(), k.1.clone()));
                    let v = PadicNum::new(&ctx, v.parts().0.clone(), v.parts().1.clone());
                    let slot = out.entry(key).or_insert_with(|| PadicNum::zero(&ctx));
                    *slot = &*slot + &v;
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        LambdaThetaFamily { xi: self.xi.clone(), ctx, level: self.level, coeffs }
    }

    /// Apply `γ ↦ ψ̂₀(γ)^{ν−2}` to every coefficient.
    pub fn specialize(&self, nu: i64) -> Result<QExpansion<PadicNum>, ThetaError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut c = PadicNum::zero(&self.ctx);
                for (k, v) in row {
                    let g = PadicNum::new(&self.ctx, k.0.clone(), k.1.clone());
                    c = &c + &(v * &g.pow(nu - 2).map_err(HeckeError::from)?);
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>, ThetaError>>()?;
        Ok(QExpansion::new(nu, self.level, None, coeffs))
    }
}

fn parts(x: &PadicNum) -> Key {
    let (a, b) = x.parts();
    (a.clone(), b.clone())
}
