//! The maps `τ` and `σ` that glue two ray class groups into a ring class group.

use alloc::vec::Vec;

use num_integer::Integer;

use super::{ClassEval, ClassFieldError, RayClassGroup, RingClassGroup};
use crate::exactnum::abelian::{FiniteAbelianGroup, GroupElem, GroupHom, ProductGroup};
use crate::exactnum::arith::factorize;
use crate::quadfield::{class_group, QuadField, QuadIdeal, QuadInt};

/// Level data `(c, n⁺, n⁻)` with chosen split ideals `𝔠 | c`, `𝔫⁺ | n⁺`.
#[derive(Clone, Debug)]
pub struct SigmaMaps {
    field: QuadField,
    p: u64,
    c: u64,
    n_plus: u64,
    n_minus: u64,
    c_frak: QuadIdeal,
    n_frak: QuadIdeal,
    left: RayClassGroup,
    right: RayClassGroup,
    ring: RingClassGroup,
    to_a: GroupHom,
    to_b: GroupHom,
    left_to_m: GroupHom,
    right_to_m: GroupHom,
    tau_plus: GroupHom,
    gluing: GroupHom,
    to_ring: GroupHom,
    conj: GroupHom,
    m_group: FiniteAbelianGroup,
    ab: ProductGroup,
    cn_pair: ProductGroup,
}

/// `f × g : G → A × B`.
fn pair_hom(f: &GroupHom, g: &GroupHom) -> (ProductGroup, GroupHom) {
    let prod = ProductGroup::new(alloc::vec![f.dst.clone(), g.dst.clone()]);
    let images = f
        .src
        .generators()
        .iter()
        .map(|e| prod.combine(&[f.apply(e), g.apply(e)]))
        .collect();
    let h = GroupHom::new(f.src.clone(), prod.group().clone(), images).expect("pair of homs");
    (prod, h)
}

/// Product of the first prime above each `ℓ^e ‖ n`; all `ℓ` must split.
fn split_ideal(field: QuadField, n: u64) -> Result<QuadIdeal, ClassFieldError> {
    let mut acc = QuadIdeal::unit(field.maximal_order());
    for (l, e) in factorize(n) {
        let sp = field.splitting(l)?;
        if !sp.is_split() {
            return Err(ClassFieldError::NotSplitOnly(n));
        }
        acc = acc.mul(&sp.primes()[0].pow(e))?;
    }
    Ok(acc)
}

impl SigmaMaps {
    pub fn new(field: QuadField, p: u64, c: u64, n_plus: u64, n_minus: u64) -> Result<Self, ClassFieldError> {
        if p < 5 {
            return Err(ClassFieldError::SmallPrime(p));
        }
        let h = class_group(field.maximal_order())?.class_number();
        if h % p == 0 {
            return Err(ClassFieldError::PDividesClassNumber { p, h });
        }
        let n = n_plus * n_minus;
        let bad = p * field.d_k();
        for m in [c, n_plus, n_minus] {
            if m.gcd(&bad) != 1 {
                return Err(ClassFieldError::BadLevel(m));
            }
        }
        if c.gcd(&n) != 1 || n_plus.gcd(&n_minus) != 1 {
            return Err(ClassFieldError::BadLevel(c * n));
        }
        if factorize(n_minus).iter().any(|&(l, e)| e > 1 || field.kronecker(l) != -1) {
            return Err(ClassFieldError::BadLevel(n_minus));
        }
        let ok = field.maximal_order();
        let c_frak = split_ideal(field, c)?;
        let n_frak = split_ideal(field, n_plus)?;
        let cn_frak = c_frak.mul(&n_frak)?;
        let nm = QuadIdeal::principal(ok, QuadInt::int(n_minus as i64));
        let pm = Some(p);

        let left = RayClassGroup::new(field, &cn_frak.mul(&nm)?, pm)?;
        let right = RayClassGroup::new(field, &cn_frak.conj().mul(&nm)?, pm)?;
        let a = RayClassGroup::new(field, &cn_frak, pm)?;
        let b = RayClassGroup::new(field, &cn_frak.conj(), pm)?;
        let m = RayClassGroup::of_integer(field, n_minus, pm)?;
        let cn_plus = RayClassGroup::of_integer(field, c * n_plus, pm)?;
        let cn = RayClassGroup::of_integer(field, c * n, pm)?;
        let ring = RingClassGroup::new(field, c * n, pm)?;

        let (ab, split_plus) = pair_hom(&cn_plus.hom_to(&a)?, &cn_plus.hom_to(&b)?);
        let tau_plus = split_plus.inverse()?;
        let (cn_pair, split_cn) = pair_hom(&cn.hom_to(&cn_plus)?, &cn.hom_to(&m)?);
        let gluing = split_cn.inverse()?;

        Ok(SigmaMaps {
            field,
            p,
            c,
            n_plus,
            n_minus,
            to_a: left.hom_to(&a)?,
            to_b: right.hom_to(&b)?,
            left_to_m: left.hom_to(&m)?,
            right_to_m: right.hom_to(&m)?,
            conj: left.hom_via(&right, |i| i.conj())?,
            to_ring: cn.hom_to(&ring)?,
            m_group: m.group().clone(),
            c_frak,
            n_frak,
            left,
            right,
            ring,
            tau_plus,
            gluing,
            ab,
            cn_pair,
        })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(c, n⁺, n⁻)`.
    pub fn levels(&self) -> (u64, u64, u64) {
        (self.c, self.n_plus, self.n_minus)
    }

    /// `𝔠` and `𝔫⁺`.
    pub fn chosen_ideals(&self) -> (&QuadIdeal, &QuadIdeal) {
        (&self.c_frak, &self.n_frak)
    }

    /// `H(𝔠𝔫⁺(n⁻))`.
    pub fn left(&self) -> &RayClassGroup {
        &self.left
    }

    /// `H(𝔠̄𝔫̄⁺(n⁻))`.
    pub fn right(&self) -> &RayClassGroup {
        &self.right
    }

    /// `H[cn]`.
    pub fn ring(&self) -> &RingClassGroup {
        &self.ring
    }

    /// Complex conjugation `H(𝔠𝔫⁺(n⁻)) → H(𝔠̄𝔫̄⁺(n⁻))`.
    pub fn conjugation(&self) -> &GroupHom {
        &self.conj
    }

    pub fn sigma(&self, x: &[i64], y: &[i64]) -> GroupElem {
        let z = self.tau_plus.apply(&self.ab.combine(&[self.to_a.apply(x), self.to_b.apply(y)]));
        let m = &self.m_group;
        let w = m.op(&self.left_to_m.apply(x), &self.right_to_m.apply(y));
        let half = m.sqrt(&w).expect("odd order");
        let u = self.gluing.apply(&self.cn_pair.combine(&[z, half]));
        self.to_ring.apply(&u)
    }

    /// `σ^𝐜(x, y) = σ(x, 𝐜(y))` with both arguments in `H(𝔠𝔫⁺(n⁻))`.
    pub fn sigma_conj(&self, x: &[i64], y: &[i64]) -> GroupElem {
        self.sigma(x, &self.conj.apply(y))
    }

    /// `σ` as a homomorphism on `H(𝔠𝔫⁺(n⁻)) × H(𝔠̄𝔫̄⁺(n⁻))`.
    pub fn sigma_hom(&self) -> GroupHom {
        self.product_hom(&self.right, |x, y| self.sigma(x, y))
    }

    pub fn sigma_conj_hom(&self) -> GroupHom {
        self.product_hom(&self.left, |x, y| self.sigma_conj(x, y))
    }

    fn product_hom<F>(&self, second: &RayClassGroup, f: F) -> GroupHom
    where
        F: Fn(&[i64], &[i64]) -> GroupElem,
    {
        let prod = ProductGroup::new(alloc::vec![self.left.group().clone(), second.group().clone()]);
        let images: Vec<GroupElem> = prod
            .group()
            .generators()
            .iter()
            .map(|e| {
                let parts = prod.split(e);
                f(&parts[0], &parts[1])
            })
            .collect();
        GroupHom::new(prod.group().clone(), self.ring.group().clone(), images).expect("σ is a homomorphism")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_levels() {
        let k = QuadField::new(7).unwrap();
        assert!(matches!(SigmaMaps::new(k, 3, 1, 1, 1), Err(ClassFieldError::SmallPrime(3))));
        assert!(matches!(SigmaMaps::new(k, 5, 5, 1, 1), Err(ClassFieldError::BadLevel(5))));
        assert!(matches!(SigmaMaps::new(k, 5, 3, 1, 1), Err(ClassFieldError::NotSplitOnly(3))));
        assert!(matches!(SigmaMaps::new(k, 5, 1, 1, 9), Err(ClassFieldError::BadLevel(9))));
        assert!(SigmaMaps::new(k, 5, 1, 1, 3).is_ok());
    }

    #[test]
    fn sigma_is_onto_ring_class_group() {
        let k = QuadField::new(7).unwrap();
        let s = SigmaMaps::new(k, 5, 11, 1, 1).unwrap();
        assert_eq!(s.ring().group().order(), 5);
        assert!(s.sigma_hom().is_surjective());
    }
}
