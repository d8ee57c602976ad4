//! Finite-level group rings `O[G]` standing in for `O[[Γ_∞]]` and `O[[Γ^-]]`,
//! with the automorphism `σ`, the projection `τ`, twists and character evaluation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::exactnum::cyclo::cyclotomic_poly;
use crate::exactnum::{Character, ExactError, FiniteAbelianGroup, GroupElem, GroupHom, ProductGroup, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IwasawaError {
    #[error("group of even order {0} has no canonical square roots")]
    EvenOrder(u64),
    #[error("elements live in different groups")]
    GroupMismatch,
    #[error("character is defined on a different level")]
    LevelMismatch,
    #[error("expected a product of two copies of one group")]
    NotASquare,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `Σ c_j ζ_m^j` reduced modulo `Φ_m`, over any coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Cyclo<R: Ring> {
    m: u64,
    c: Vec<R>,
}

impl<R: Ring> Cyclo<R> {
    pub fn constant(m: u64, x: R) -> Self {
        let zero = x.zero_like();
        let n = cyclotomic_poly(m).len() - 1;
        let mut c = vec![zero; n];
        c[0] = x;
        Cyclo { m, c }
    }

    /// `ζ_m^t` with coefficients shaped like `template`.
    pub fn zeta(m: u64, t: i64, template: &R) -> Self {
        let mut c = vec![template.zero_like(); m as usize];
        c[t.rem_euclid(m as i64) as usize] = template.one_like();
        Self::reduced(m, c)
    }

    fn reduced(m: u64, mut c: Vec<R>) -> Self {
        let phi = cyclotomic_poly(m);
        let n = phi.len() - 1;
        for top in (n..c.len()).rev() {
            if c[top].is_zero_elem() {
                continue;
            }
            let lead = c[top].clone();
            // subtract lead·x^{top−n}·Φ_m
            for (j, &a) in phi.iter().enumerate().take(n) {
                let t = small_multiple(&lead, a);
                let i = top - n + j;
                c[i] = c[i].sub_ref(&t);
            }
            c[top] = lead.zero_like();
        }
        c.truncate(n.max(1));
        Cyclo { m, c }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }
}

fn small_multiple<R: Ring>(x: &R, k: i64) -> R {
    let mut acc = x.zero_like();
    for _ in 0..k.unsigned_abs() {
        acc = acc.add_ref(x);
    }
    if k < 0 {
        acc.neg_ref()
    } else {
        acc
    }
}

impl<R: Ring> Ring for Cyclo<R> {
    fn zero_like(&self) -> Self {
        Cyclo { m: self.m, c: self.c.iter().map(|x| x.zero_like()).collect() }
    }
    fn one_like(&self) -> Self {
        Self::constant(self.m, self.c[0].one_like())
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_elem())
    }
    fn add_ref(&self, o: &Self) -> Self {
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a.add_ref(b)).collect() }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub_ref(b)).collect() }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let zero = self.c[0].zero_like();
        let mut c = vec![zero; self.c.len() + o.c.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::reduced(self.m, c)
    }
    fn neg_ref(&self) -> Self {
        Cyclo { m: self.m, c: self.c.iter().map(|x| x.neg_ref()).collect() }
    }
}

/// An element `Σ c_g [g]` of `R[G]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRing<R: Ring> {
    group: FiniteAbelianGroup,
    zero: R,
    coeffs: BTreeMap<GroupElem, R>,
}

impl<R: Ring> GroupRing<R> {
    pub fn zero(group: &FiniteAbelianGroup, zero: R) -> Self {
        GroupRing { group: group.clone(), zero, coeffs: BTreeMap::new() }
    }

    /// `c·[g]`.
    pub fn monomial(group: &FiniteAbelianGroup, g: &[i64], c: R) -> Self {
        let mut x = Self::zero(group, c.zero_like());
        x.add_term(g, c);
        x
    }

    pub fn one(group: &FiniteAbelianGroup, template: &R) -> Self {
        Self::monomial(group, &group.identity(), template.one_like())
    }

    pub fn from_terms(group: &FiniteAbelianGroup, zero: R, terms: impl IntoIterator<Item = (GroupElem, R)>) -> Self {
        let mut x = Self::zero(group, zero);
        for (g, c) in terms {
            x.add_term(&g, c);
        }
        x
    }

    pub fn add_term(&mut self, g: &[i64], c: R) {
        let g = self.group.reduce(g);
        let zero = self.zero.clone();
        let slot = self.coeffs.entry(g.clone()).or_insert(zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero_elem() {
            self.coeffs.remove(&g);
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeff(&self, g: &[i64]) -> R {
        self.coeffs.get(&self.group.reduce(g)).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &R)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, o: &Self) -> Result<(), IwasawaError> {
        if self.group != o.group {
            return Err(IwasawaError::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, IwasawaError> {
        self.check(o)?;
        let mut out = self.clone();
        for (g, c) in &o.coeffs {
            out.add_term(g, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, IwasawaError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg_ref())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, IwasawaError> {
        self.check(o)?;
        let mut out = Self::zero(&self.group, self.zero.clone());
        for (g, a) in &self.coeffs {
            for (h, b) in &o.coeffs {
                out.add_term(&self.group.op(g, h), a.mul_ref(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map_coeffs(|x| x.mul_ref(c))
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> GroupRing<S> {
        let zero = f(&self.zero);
        GroupRing::from_terms(&self.group, zero, self.coeffs.iter().map(|(g, c)| (g.clone(), f(c))))
    }

    /// `Σ c_g`.
    pub fn augmentation(&self) -> R {
        self.coeffs.values().fold(self.zero.clone(), |acc, c| acc.add_ref(c))
    }

    /// `[g] ↦ [h(g)]`.
    pub fn push_forward(&self, h: &GroupHom) -> Result<Self, IwasawaError> {
        if h.src != self.group {
            return Err(IwasawaError::GroupMismatch);
        }
        Ok(GroupRing::from_terms(&h.dst, self.zero.clone(), self.coeffs.iter().map(|(g, c)| (h.apply(g), c.clone()))))
    }

    /// `Σ c_g f(g)` for an `R`-valued function on `G`.
    pub fn eval_with(&self, f: impl Fn(&GroupElem) -> R) -> R {
        self.coeffs.iter().fold(self.zero.clone(), |acc, (g, c)| acc.add_ref(&c.mul_ref(&f(g))))
    }

    /// `[g] ↦ α(g)[g]`.
    pub fn twist_by(&self, alpha: impl Fn(&GroupElem) -> R) -> Self {
        GroupRing::from_terms(&self.group, self.zero.clone(), self.coeffs.iter().map(|(g, c)| (g.clone(), c.mul_ref(&alpha(g)))))
    }

    /// `Σ c_g χ(g)` in `R[ζ_m]`, `m` the exponent of `G`.
    pub fn eval_char(&self, chi: &Character) -> Result<Cyclo<R>, IwasawaError> {
        if chi.group() != &self.group {
            return Err(IwasawaError::LevelMismatch);
        }
        let m = self.group.exponent();
        Ok(self.coeffs.iter().fold(Cyclo::constant(m, self.zero.clone()), |acc, (g, c)| {
            let z = Cyclo::zeta(m, chi.value_exp(g), &self.zero);
            acc.add_ref(&Cyclo::constant(m, c.clone()).mul_ref(&z))
        }))
    }

    /// `[g] ↦ χ(g)[g]` with coefficients moved into `R[ζ_m]`.
    pub fn twist_by_char(&self, chi: &Character) -> Result<GroupRing<Cyclo<R>>, IwasawaError> {
        if chi.group() != &self.group {
            return Err(IwasawaError::LevelMismatch);
        }
        let m = self.group.exponent();
        let lifted = self.map_coeffs(|c| Cyclo::constant(m, c.clone()));
        Ok(lifted.twist_by(|g| Cyclo::zeta(m, chi.value_exp(g), &self.zero)))
    }
}

impl<R: Ring> GroupRing<Cyclo<R>> {
    /// Evaluation when the coefficients already carry roots of unity of the same order.
    pub fn eval_char_cyclo(&self, chi: &Character) -> Result<Cyclo<R>, IwasawaError> {
        if chi.group() != &self.group {
            return Err(IwasawaError::LevelMismatch);
        }
        let m = self.group.exponent();
        let base = self.zero.c[0].clone();
        Ok(self.eval_with(|g| Cyclo::zeta(m, chi.value_exp(g), &base)))
    }
}

/// `x ↦ x·(e+1)/2`, the square root on a group of odd exponent `e`.
fn half(g: &FiniteAbelianGroup) -> Result<i64, IwasawaError> {
    let e = g.exponent();
    if e.is_multiple_of(2) {
        return Err(IwasawaError::EvenOrder(g.order()));
    }
    Ok(e.div_ceil(2) as i64)
}

/// `G × G` for a fixed `G`, with `σ([γ]⊗[δ]) = [γ^{1/2}δ^{1/2}]⊗[γ^{1/2}δ^{−1/2}]`.
#[derive(Clone, Debug)]
pub struct SquareGroup {
    factor: FiniteAbelianGroup,
    product: ProductGroup,
}

impl SquareGroup {
    pub fn new(g: &FiniteAbelianGroup) -> Self {
        SquareGroup { factor: g.clone(), product: ProductGroup::new(vec![g.clone(), g.clone()]) }
    }

    pub fn factor(&self) -> &FiniteAbelianGroup {
        &self.factor
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.product.group()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> GroupElem {
        self.product.combine(&[a.to_vec(), b.to_vec()])
    }

    pub fn split(&self, x: &[i64]) -> (GroupElem, GroupElem) {
        let mut parts = self.product.split(x);
        let b = parts.pop().expect("two factors");
        (parts.pop().expect("two factors"), b)
    }

    /// `[a]⊗[b]` as a group-ring element.
    pub fn tensor<R: Ring>(&self, a: &[i64], b: &[i64], c: R) -> GroupRing<R> {
        GroupRing::monomial(self.group(), &self.pair(a, b), c)
    }

    /// Build `G × G → G' × G'` from a map on pairs.
    fn hom_on_pairs(
        &self,
        dst: &SquareGroup,
        f: impl Fn(&GroupElem, &GroupElem) -> (GroupElem, GroupElem),
    ) -> Result<GroupHom, IwasawaError> {
        let images = self
            .group()
            .generators()
            .iter()
            .map(|x| {
                let (a, b) = self.split(x);
                let (u, v) = f(&a, &b);
                dst.pair(&u, &v)
            })
            .collect();
        Ok(GroupHom::new(self.group().clone(), dst.group().clone(), images)?)
    }

    pub fn sigma_hom(&self) -> Result<GroupHom, IwasawaError> {
        let g = &self.factor;
        let h = half(g)?;
        self.hom_on_pairs(self, |a, b| (g.scale(&g.op(a, b), h), g.scale(&g.op(a, &g.inv(b)), h)))
    }

    pub fn sigma<R: Ring>(&self, x: &GroupRing<R>) -> Result<GroupRing<R>, IwasawaError> {
        x.push_forward(&self.sigma_hom()?)
    }

    /// `σ^{-1}([γ]⊗[δ]) = [γδ]⊗[γδ^{-1}]`; note `σ²` is `[γ]⊗[δ] ↦ [γ^{1/2}]⊗[δ^{1/2}]`, not the identity.
    pub fn sigma_inverse_hom(&self) -> Result<GroupHom, IwasawaError> {
        let g = &self.factor;
        half(g)?;
        self.hom_on_pairs(self, |a, b| (g.op(a, b), g.op(a, &g.inv(b))))
    }

    /// `[γ]⊗[δ] ↦ [γ^{1/2}]⊗[δ^{1/2}]`.
    pub fn halving_hom(&self) -> Result<GroupHom, IwasawaError> {
        let g = &self.factor;
        let h = half(g)?;
        self.hom_on_pairs(self, |a, b| (g.scale(a, h), g.scale(b, h)))
    }

    /// `(τ, τ) ∘ σ` into `O[G^-] ⊗ O[G^-]` (realized inside `G × G`).
    pub fn anticyc_project<R: Ring>(&self, tau: &AnticycProjection, x: &GroupRing<R>) -> Result<GroupRing<R>, IwasawaError> {
        if tau.group() != &self.factor {
            return Err(IwasawaError::GroupMismatch);
        }
        let t = tau.hom();
        let tt = self.hom_on_pairs(self, |a, b| (t.apply(a), t.apply(b)))?;
        x.push_forward(&self.sigma_hom()?.then(&tt))
    }

    /// `(π, π)` for a level map `π : G → G'`.
    pub fn level_map(&self, dst: &SquareGroup, pi: &GroupHom) -> Result<GroupHom, IwasawaError> {
        self.hom_on_pairs(dst, |a, b| (pi.apply(a), pi.apply(b)))
    }
}

/// `τ : γ ↦ γ^{1/2}(γ^𝐜)^{−1/2}`, landing in the minus part of `G` under `𝐜`.
#[derive(Clone, Debug)]
pub struct AnticycProjection {
    conj: GroupHom,
    tau: GroupHom,
}

impl AnticycProjection {
    pub fn new(conj: GroupHom) -> Result<Self, IwasawaError> {
        if conj.src != conj.dst {
            return Err(IwasawaError::GroupMismatch);
        }
        let g = conj.src.clone();
        let h = half(&g)?;
        let images = g.generators().iter().map(|x| g.scale(&g.op(x, &g.inv(&conj.apply(x))), h)).collect();
        let tau = GroupHom::new(g.clone(), g, images)?;
        Ok(AnticycProjection { conj, tau })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.conj.src
    }

    pub fn conj(&self) -> &GroupHom {
        &self.conj
    }

    pub fn hom(&self) -> &GroupHom {
        &self.tau
    }

    pub fn apply<R: Ring>(&self, x: &GroupRing<R>) -> Result<GroupRing<R>, IwasawaError> {
        x.push_forward(&self.tau)
    }

    /// Whether `g^𝐜 = g^{-1}`.
    pub fn is_minus(&self, g: &[i64]) -> bool {
        let grp = self.group();
        grp.op(&self.conj.apply(g), g) == grp.identity()
    }
}
