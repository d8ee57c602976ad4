//! Euler-factor polynomials at a prime `q` and the congruences that let norm
//! relations for `Q_{1,𝔮}` be traded for the Euler factor `P_{1,𝔮}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Float;

use crate::exactnum::arith::is_prime;
use crate::exactnum::{CycFrac, CycInt, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormRelError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation needs a split prime")]
    InertDatum,
    #[error("operation needs an inert prime")]
    SplitDatum,
    #[error("weights ({k}, {l}, {m}) need k even and l ≡ m mod 2")]
    Parity { k: i64, l: i64, m: i64 },
    #[error("weights ({k}, {l}, {m}) are not balanced")]
    Unbalanced { k: i64, l: i64, m: i64 },
    #[error("a_q violates the Weil bound")]
    WeilBound,
    #[error("η(𝔮)·η(𝔮̄) ≠ 1")]
    NotAnticyclotomic,
    #[error("character slot index must be 1 or 2, got {0}")]
    BadIndex(u8),
    #[error("coefficient of X^{degree} is not divisible by {modulus}")]
    NotDivisible { degree: i64, modulus: u64 },
    #[error("P̃ − P differs from the expected two-term shape at X^{0}")]
    ShapeMismatch(i64),
}

/// Local data at `q`: Fourier coefficient, weights and character values.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeDatum {
    pub q: u64,
    pub split: bool,
    pub a_q: CycInt,
    pub k: i64,
    pub l: i64,
    pub m: i64,
    pub psi1_q: CycInt,
    pub psi1_qbar: CycInt,
    pub psi2_q: CycInt,
    pub psi2_qbar: CycInt,
    pub eta1_q: CycInt,
    pub eta1_qbar: CycInt,
    pub eta2_q: CycInt,
    pub eta2_qbar: CycInt,
}

impl HeckeDatum {
    /// Everything trivial: `a_q = 0`, characters `1`.
    pub fn trivial(q: u64, split: bool, k: i64, l: i64, m: i64) -> Self {
        let one = CycInt::one();
        HeckeDatum {
            q,
            split,
            a_q: CycInt::zero(),
            k,
            l,
            m,
            psi1_q: one.clone(),
            psi1_qbar: one.clone(),
            psi2_q: one.clone(),
            psi2_qbar: one.clone(),
            eta1_q: one.clone(),
            eta1_qbar: one.clone(),
            eta2_q: one.clone(),
            eta2_qbar: one,
        }
    }

    pub fn validate(&self) -> Result<(), NormRelError> {
        let (k, l, m) = (self.k, self.l, self.m);
        if !is_prime(self.q) {
            return Err(NormRelError::NotPrime(self.q));
        }
        if k.is_odd() || (l - m).is_odd() {
            return Err(NormRelError::Parity { k, l, m });
        }
        if k < 2 || l < 2 || m < 2 || k > l + m || l > k + m || m > k + l {
            return Err(NormRelError::Unbalanced { k, l, m });
        }
        if !self.within_weil_bound() {
            return Err(NormRelError::WeilBound);
        }
        if self.split {
            for (x, y) in [(&self.eta1_q, &self.eta1_qbar), (&self.eta2_q, &self.eta2_qbar)] {
                if !(x * y).is_one() {
                    return Err(NormRelError::NotAnticyclotomic);
                }
            }
        }
        Ok(())
    }

    fn within_weil_bound(&self) -> bool {
        let bound = 2.0 * Float::powf(self.q as f64, (self.k - 1) as f64 / 2.0) * (1.0 + 1e-12);
        let n = self.a_q.conductor().max(1);
        (1..=n)
            .filter(|j| j.gcd(&n) == 1)
            .all(|j| Complex64::norm(self.a_q.galois(j as i64).to_complex()) <= bound)
    }

    /// `r = (k + l + m − 6)/2`.
    pub fn r(&self) -> i64 {
        (self.k + self.l + self.m - 6) / 2
    }

    fn eta(&self, i: u8) -> Result<(&CycInt, &CycInt), NormRelError> {
        match i {
            1 => Ok((&self.eta1_q, &self.eta1_qbar)),
            2 => Ok((&self.eta2_q, &self.eta2_qbar)),
            _ => Err(NormRelError::BadIndex(i)),
        }
    }

    /// `ψ₁(𝔮)ψ₂(𝔮̄)` for `i = 1`, `ψ₁(𝔮)ψ₂(𝔮)` for `i = 2`.
    fn psi_product(&self, i: u8) -> Result<CycInt, NormRelError> {
        match i {
            1 => Ok(&self.psi1_q * &self.psi2_qbar),
            2 => Ok(&self.psi1_q * &self.psi2_q),
            _ => Err(NormRelError::BadIndex(i)),
        }
    }

    /// The datum seen from `𝔮̄`.
    pub fn swap_primes(&self) -> Self {
        HeckeDatum {
            psi1_q: self.psi1_qbar.clone(),
            psi1_qbar: self.psi1_q.clone(),
            psi2_q: self.psi2_qbar.clone(),
            psi2_qbar: self.psi2_q.clone(),
            eta1_q: self.eta1_qbar.clone(),
            eta1_qbar: self.eta1_q.clone(),
            eta2_q: self.eta2_qbar.clone(),
            eta2_qbar: self.eta2_q.clone(),
            ..self.clone()
        }
    }
}

/// `q^e` for any integer `e`.
fn qpow(q: u64, e: i64) -> CycFrac {
    let p = num_traits::pow(BigInt::from(q), e.unsigned_abs() as usize);
    if e >= 0 {
        CycFrac::from_int(p)
    } else {
        CycFrac::ratio(1, p)
    }
}

fn cf(x: &CycInt) -> CycFrac {
    CycFrac::from_cyc(x.clone())
}

/// `Σ c_e X^e` with `e ∈ Z`; also used for elements of `Z[Frob^{±1}]`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, CycFrac>,
}

impl Laurent {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, CycFrac)>) -> Self {
        let mut out = Laurent::default();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: CycFrac) {
        let slot = self.terms.entry(e).or_insert_with(|| CycFrac::from_int(0));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> CycFrac {
        self.terms.get(&e).cloned().unwrap_or_else(|| CycFrac::from_int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycFrac)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// `X ↦ X^{-1}`.
    pub fn invert(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn shift(&self, s: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect() }
    }

    pub fn scale(&self, c: &CycFrac) -> Self {
        Laurent::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    pub fn eval_at_one(&self) -> CycFrac {
        self.terms.values().fold(CycFrac::from_int(0), |acc, c| &acc + c)
    }

    pub fn to_poly(&self) -> Option<Poly<CycFrac>> {
        if self.terms.keys().any(|&e| e < 0) {
            return None;
        }
        let deg = self.terms.keys().max().copied().unwrap_or(0);
        Some(Poly::new((0..=deg).map(|e| self.coeff(e)).collect()))
    }

    pub fn from_poly(p: &Poly<CycFrac>) -> Self {
        Laurent::from_terms(p.coeffs().iter().enumerate().map(|(e, c)| (e as i64, c.clone())))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

/// `P_{i,𝔮}(X) = 1 − a_q η_i(𝔮) X / q^{k/2} + η_i(𝔮)² X² / q`.
pub fn euler_p(d: &HeckeDatum, i: u8) -> Result<Poly<CycFrac>, NormRelError> {
    d.validate()?;
    if !d.split {
        return Err(NormRelError::InertDatum);
    }
    let (eta, _) = d.eta(i)?;
    let lin = -(&(&cf(&d.a_q) * &cf(eta)) * &qpow(d.q, -d.k / 2));
    let quad = &cf(&(eta * eta)) * &qpow(d.q, -1);
    Ok(Poly::new(vec![CycFrac::from_int(1), lin, quad]))
}

/// `P_{1,(q)}(X) = 1 − a_q² X / q^k + 2X/q + X²/q²`.
pub fn euler_p_inert(d: &HeckeDatum) -> Result<Poly<CycFrac>, NormRelError> {
    d.validate()?;
    if d.split {
        return Err(NormRelError::SplitDatum);
    }
    let a2 = cf(&(&d.a_q * &d.a_q));
    let lin = &(-(&a2 * &qpow(d.q, -d.k))) + &(&CycFrac::from_int(2) * &qpow(d.q, -1));
    Ok(Poly::new(vec![CycFrac::from_int(1), lin, qpow(d.q, -2)]))
}

/// The constant `q^r(1−q)/q^{l+m−2}·ψ₁(𝔮)ψ₂(·)` shared by `Q` and the operator.
fn shift_constant(d: &HeckeDatum, i: u8) -> Result<CycFrac, NormRelError> {
    let c = &CycFrac::from_int(1 - d.q as i64) * &qpow(d.q, d.r() - (d.l + d.m - 2));
    Ok(&c * &cf(&d.psi_product(i)?))
}

/// `Q_{i,𝔮}(X) = a_q + q^r(1−q)/q^{l+m−2}·ψψ − q^{k/2−1}η_i(𝔮)X^{-1} − q^{k/2−1}η_i(𝔮̄)X`.
pub fn euler_q(d: &HeckeDatum, i: u8) -> Result<Laurent, NormRelError> {
    d.validate()?;
    if !d.split {
        return Err(NormRelError::InertDatum);
    }
    let (eta, eta_bar) = d.eta(i)?;
    let w = qpow(d.q, d.k / 2 - 1);
    Ok(Laurent::from_terms([
        (0, cf(&d.a_q)),
        (0, shift_constant(d, i)?),
        (-1, -(&w * &cf(eta))),
        (1, -(&w * &cf(eta_bar))),
    ]))
}

/// The corestriction factor as an element of `Z[Frob_𝔮^{±1}]` (exponent ↦ coefficient).
pub fn normrel_rhs(d: &HeckeDatum, i: u8) -> Result<Laurent, NormRelError> {
    d.validate()?;
    if !d.split {
        return Err(NormRelError::InertDatum);
    }
    let (eta, eta_bar) = d.eta(i)?;
    let w = qpow(d.q, d.k / 2 - 1);
    let mut op = Laurent::from_terms([(0, cf(&d.a_q))]);
    op.add_term(-1, -(&w * &cf(eta)));
    op.add_term(1, -(&w * &cf(eta_bar)));
    op.add_term(0, shift_constant(d, i)?);
    Ok(op)
}

/// Deliberate corruptions of the `P̃` construction, for mutation tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `u_𝔮 = −η(𝔮)` instead of `−η(𝔮)/q^{k/2}`.
    DropUNormalization,
    /// The `(1−q)` factor in `Q` replaced by `1`.
    DropOneMinusQ,
}

/// `P̃(X) = u_𝔮·X·Q(X^{-1})` with `u_𝔮 = −η_i(𝔮)/q^{k/2}`.
pub fn p_tilde(d: &HeckeDatum, i: u8, mutation: Option<Mutation>) -> Result<Poly<CycFrac>, NormRelError> {
    let mut q = euler_q(d, i)?;
    if mutation == Some(Mutation::DropOneMinusQ) {
        let c = shift_constant(d, i)?;
        let without = c.div_in_localization(&BigInt::from(1 - d.q as i64), &BigInt::from(d.q)).expect("exact");
        q = q.sub(&Laurent::from_terms([(0, c)]));
        q.add_term(0, without);
    }
    let (eta, _) = d.eta(i)?;
    let u = match mutation {
        Some(Mutation::DropUNormalization) => -cf(eta),
        _ => -(&cf(eta) * &qpow(d.q, -d.k / 2)),
    };
    let lp = q.invert().shift(1).scale(&u);
    Ok(lp.to_poly().expect("u·X·Q(X^{-1}) is a polynomial"))
}

/// Evidence for `P̃ ≡ P mod m`: `P̃ − P = m·Σ c_e X^e` with each `c_e ∈ Z[ζ][1/q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceCertificate {
    pub modulus: u64,
    pub p: Poly<CycFrac>,
    pub p_tilde: Poly<CycFrac>,
    pub quotients: Vec<(i64, CycFrac)>,
}

fn certify(diff: &Laurent, m: u64, q: u64) -> Result<Vec<(i64, CycFrac)>, NormRelError> {
    diff.terms()
        .map(|(e, c)| {
            c.div_in_localization(&BigInt::from(m), &BigInt::from(q))
                .map(|x| (e, x))
                .ok_or(NormRelError::NotDivisible { degree: e, modulus: m })
        })
        .collect()
}

/// `P̃ − P = (1−q)/q + (q−1)/q^{(l+m+2)/2}·ψψ·η_i(𝔮)·X`, and both terms are divisible by `q − 1`.
pub fn congruence_check_split(d: &HeckeDatum, i: u8) -> Result<CongruenceCertificate, NormRelError> {
    congruence_check_split_mutated(d, i, None)
}

pub fn congruence_check_split_mutated(
    d: &HeckeDatum,
    i: u8,
    mutation: Option<Mutation>,
) -> Result<CongruenceCertificate, NormRelError> {
    let p = euler_p(d, i)?;
    let pt = p_tilde(d, i, mutation)?;
    let diff = Laurent::from_poly(&pt).sub(&Laurent::from_poly(&p));
    let q = d.q;
    let (eta, _) = d.eta(i)?;
    let expected = Laurent::from_terms([
        (0, &CycFrac::from_int(1 - q as i64) * &qpow(q, -1)),
        (1, &(&CycFrac::from_int(q as i64 - 1) * &qpow(q, -(d.l + d.m + 2) / 2)) * &cf(&(&d.psi_product(i)? * eta))),
    ]);
    let quotients = certify(&diff, q - 1, q)?;
    if let Some((e, _)) = diff.sub(&expected).terms().next() {
        return Err(NormRelError::ShapeMismatch(e));
    }
    Ok(CongruenceCertificate { modulus: q - 1, p, p_tilde: pt, quotients })
}

/// Quotients by `q² − 1` of the two differences in the inert congruence chain.
#[derive(Clone, Debug, PartialEq)]
pub struct InertCertificate {
    pub lhs: CycFrac,
    pub middle: CycFrac,
    pub rhs: CycFrac,
    pub quotients: [CycFrac; 2],
}

/// `−P(1) ≡ a_q² − (q+1)²/q ≡ a_q² − (q+1)/q·q^{k−2}(q−1+q^{l−2}+q^{m−2}) mod (q²−1)`.
pub fn congruence_check_inert(d: &HeckeDatum) -> Result<InertCertificate, NormRelError> {
    let p = euler_p_inert(d)?;
    let q = d.q;
    let lhs = -p.coeffs().iter().fold(CycFrac::from_int(0), |acc, c| &acc + c);
    let a2 = cf(&(&d.a_q * &d.a_q));
    let q1 = CycFrac::from_int(q as i64 + 1);
    let middle = &a2 - &(&(&q1 * &q1) * &qpow(q, -1));
    let bracket = &(&(&CycFrac::from_int(q as i64 - 1) + &qpow(q, d.l - 2)) + &qpow(q, d.m - 2)) * &qpow(q, d.k - 2);
    let rhs = &a2 - &(&(&q1 * &qpow(q, -1)) * &bracket);
    let m = q * q - 1;
    let (bm, bq) = (BigInt::from(m), BigInt::from(q));
    let first = (&lhs - &middle).div_in_localization(&bm, &bq).ok_or(NormRelError::NotDivisible { degree: 0, modulus: m })?;
    let second = (&middle - &rhs).div_in_localization(&bm, &bq).ok_or(NormRelError::NotDivisible { degree: 0, modulus: m })?;
    Ok(InertCertificate { lhs, middle, rhs, quotients: [first, second] })
}
