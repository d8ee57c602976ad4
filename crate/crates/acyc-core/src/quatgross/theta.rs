//! Finite-level theta elements `Θ_n = α^{-n}·Σ_σ v(x_n^σ)[σ]` and their character values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::gross::GrossTower;
use super::QuatError;
use crate::exactnum::abelian::{Character, FiniteAbelianGroup, GroupElem, GroupHom};
use crate::exactnum::arith::euler_phi;
use crate::exactnum::{CycInt, PadicNum};
use crate::heckechar::{AnticycSplit, AnticycTower};
use crate::iwasawa::GroupRing;

/// The unregularized sum `Σ_σ v(x_n^σ)[σ] ∈ Z[Pic(O_{cp^n})]`; the regularization
/// `α^{-n}` is kept separately as [`ThetaElement::alpha_exponent`].
#[derive(Clone, Debug)]
pub struct ThetaElement {
    level: u32,
    orbit: usize,
    coeffs: GroupRing<BigInt>,
}

/// `χ(Θ_n)` as an exact cyclotomic integer, times `α^{alpha_exponent}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildValue {
    pub exact: CycInt,
    pub alpha_exponent: i64,
    /// Level of the truncation; values are exact there.
    pub precision: u32,
    /// `v_p(N(exact)) / [Q(ζ):Q]`, absent for zero.
    pub valuation: Option<BigRational>,
}

impl WildValue {
    pub fn is_nonzero(&self) -> bool {
        !self.exact.is_zero()
    }
}

pub fn theta_element(tower: &GrossTower, v: &[BigInt], n: u32, orbit: usize) -> Result<ThetaElement, QuatError> {
    let lvl = tower.level(n)?;
    let group = lvl.ring().full_group();
    let coeffs = GroupRing::from_terms(
        group,
        BigInt::zero(),
        lvl.orbit(orbit).iter().map(|(g, &i)| (g.clone(), v[lvl.points()[i].class].clone())),
    );
    Ok(ThetaElement { level: n, orbit, coeffs })
}

impl ThetaElement {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn orbit(&self) -> usize {
        self.orbit
    }

    pub fn coeffs(&self) -> &GroupRing<BigInt> {
        &self.coeffs
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.coeffs.group()
    }

    pub fn alpha_exponent(&self) -> i64 {
        -(self.level as i64)
    }

    pub fn eval(&self, chi: &Character) -> CycInt {
        let mut acc = CycInt::zero();
        for (g, c) in self.coeffs.terms() {
            acc = &acc + &(&CycInt::from(c.clone()) * &chi.value(g));
        }
        acc
    }

    /// `[g]·Θ`.
    pub fn translate(&self, g: &[i64]) -> ThetaElement {
        let grp = self.group().clone();
        let coeffs =
            GroupRing::from_terms(&grp, BigInt::zero(), self.coeffs.terms().map(|(h, c)| (grp.op(h, g), c.clone())));
        ThetaElement { level: self.level, orbit: self.orbit, coeffs }
    }

    /// `α^{-n}·Θ` with coefficients in the context of `alpha`.
    pub fn regularized(&self, alpha: &PadicNum) -> Result<GroupRing<PadicNum>, QuatError> {
        let ctx = alpha.ctx().clone();
        let scale = alpha.pow(self.alpha_exponent())?;
        Ok(self.coeffs.map_coeffs(|c| &PadicNum::from_int(&ctx, c.clone()) * &scale))
    }
}

/// `[τ'] ↦ Σ_{π(τ) = τ'} [τ]`.
fn inflate(lower: &GroupRing<BigInt>, pi: &GroupHom) -> GroupRing<BigInt> {
    GroupRing::from_terms(
        &pi.src,
        BigInt::zero(),
        pi.src.elements().into_iter().map(|g| {
            let c = lower.coeff(&pi.apply(&g));
            (g, c)
        }),
    )
}

/// Corestriction identity read off from the trace relation:
/// `π_*Θ'_{n+1} = a_p·Θ'_n − ξ(Θ'_{n−1})` for `n ≥ 1` and `π_*Θ'_1 = a_p·Θ'_0`,
/// where `Θ'` is unregularized and `ξ` sums over fibres.
pub fn corestriction_check(tower: &GrossTower, v: &[BigInt], a_p: i64, n: u32, orbit: usize) -> Result<bool, QuatError> {
    let upper = theta_element(tower, v, n + 1, orbit)?;
    let mid = theta_element(tower, v, n, orbit)?;
    let pi = tower.level(n + 1)?.down_map().expect("down map above level 0");
    let lhs = upper.coeffs.push_forward(pi)?;
    let mut rhs = mid.coeffs.scale(&BigInt::from(a_p));
    if n > 0 {
        let lower = theta_element(tower, v, n - 1, orbit)?;
        let pi_mid = tower.level(n)?.down_map().expect("down map above level 0");
        rhs = rhs.sub(&inflate(&lower.coeffs, pi_mid))?;
    }
    Ok(lhs.sub(&rhs)?.is_zero())
}

/// `(s, g₀)` with `ι(Θ) = s·[g₀]·Θ`, where `ι` inverts group elements.
pub fn inversion_symmetry(theta: &ThetaElement) -> Option<(i8, GroupElem)> {
    let grp = theta.group();
    let elems = grp.elements();
    for g0 in &elems {
        for s in [1i8, -1] {
            let sb = BigInt::from(s);
            let ok = elems.iter().all(|h| {
                // coefficient of h in ι(Θ) is c(h^{-1}); in s[g0]Θ it is s·c(h − g0)
                theta.coeffs.coeff(&grp.inv(h)) == &sb * theta.coeffs.coeff(&grp.op(h, &grp.inv(g0)))
            });
            if ok {
                return Some((s, g0.clone()));
            }
        }
    }
    None
}

/// `(χ_t·χ^-)(Θ_n)` with `χ^-` given by its exponent on the generator of `Γ_n` and
/// `χ_t` by exponents on the factors of `Δ`.
pub fn eval_wild(theta: &ThetaElement, tower: &AnticycTower, wild: i64, tame: &[i64]) -> Result<WildValue, QuatError> {
    if tower.level() != theta.level {
        return Err(QuatError::LevelTooLow { have: theta.level, want: tower.level() });
    }
    if tower.group() != theta.group() {
        return Err(QuatError::Unidentified);
    }
    let chi = tower.recombine(&AnticycSplit { tame: tame.to_vec(), wild });
    let exact = theta.eval(&chi);
    let valuation = (!exact.is_zero()).then(|| {
        let p = BigInt::from(tower.p());
        let mut norm = exact.norm();
        let mut v = 0i64;
        while !norm.is_zero() && norm.is_multiple_of(&p) {
            norm /= &p;
            v += 1;
        }
        BigRational::new(BigInt::from(v), BigInt::from(euler_phi(exact.conductor())))
    });
    Ok(WildValue { exact, alpha_exponent: theta.alpha_exponent(), precision: theta.level, valuation })
}
