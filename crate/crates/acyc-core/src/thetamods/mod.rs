//! q-expansions: theta series of Hecke characters, Hecke operators, p-depletion,
//! the Λ-adic theta family and the Rankin factorization check.

pub mod family;

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::exactnum::arith::{is_prime, kronecker};
use crate::exactnum::poly::Ring;
use crate::exactnum::{CycFrac, CycInt, PadicNum, Poly};
use crate::heckechar::{AvatarCharacter, HeckeCharacter, HeckeError};
use crate::quadfield::{ideals_of_norm, QuadIdeal};

pub use family::LambdaThetaFamily;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error("infinity type ({0}, {1}) is not of the form (1−ν, 0) with ν ≥ 1")]
    BadInfinityType(i64, i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} divides the level {level}")]
    QDividesLevel { q: u64, level: u64 },
    #[error("precision {have} is too small for T_{q}")]
    ShortPrecision { q: u64, have: usize },
    #[error("q = {0} ramifies in K or divides a conductor")]
    BadRankinPrime(u64),
    #[error("expansion carries no nebentypus")]
    NoNebentypus,
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// A Dirichlet character mod `N` as a table of exponents `χ(n) = ζ_m^t` (`None` off the units).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nebentypus {
    modulus: u64,
    order: u64,
    table: Vec<Option<i64>>,
}

impl Nebentypus {
    pub fn trivial(modulus: u64) -> Self {
        let table = (0..modulus).map(|n| if n.gcd(&modulus) == 1 { Some(0) } else { None }).collect();
        Nebentypus { modulus, order: 1, table }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self, n: i64) -> Option<i64> {
        self.table[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, n: i64) -> CycInt {
        match self.exp(n) {
            Some(t) => CycInt::zeta(self.order, t),
            None => CycInt::zero(),
        }
    }

    /// Smallest modulus through which the character factors.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        crate::exactnum::arith::divisors(n)
            .into_iter()
            .find(|&d| {
                (1..n).filter(|&x| x.gcd(&n) == 1).all(|x| x % d != 1 % d || self.table[x as usize] == Some(0))
            })
            .unwrap_or(n)
    }
}

/// `Σ a_n q^n` to precision `B` (coefficients `a_0 … a_B`).
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<R: Ring> {
    pub weight: i64,
    pub level: u64,
    pub nebentypus: Option<Nebentypus>,
    coeffs: Vec<R>,
}

impl<R: Ring> QExpansion<R> {
    pub fn new(weight: i64, level: u64, nebentypus: Option<Nebentypus>, coeffs: Vec<R>) -> Self {
        QExpansion { weight, level, nebentypus, coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn truncate(&self, b: usize) -> Self {
        QExpansion { coeffs: self.coeffs[..=b.min(self.precision())].to_vec(), ..self.clone() }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> QExpansion<S> {
        QExpansion {
            weight: self.weight,
            level: self.level,
            nebentypus: self.nebentypus.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    /// `f(q^m)`.
    pub fn reindex(&self, m: usize) -> Self {
        let b = self.precision();
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..=b).map(|n| if n % m == 0 { self.coeffs[n / m].clone() } else { zero.clone() }).collect();
        QExpansion { level: self.level * m as u64, coeffs, ..self.clone() }
    }
}

/// Coefficients with `p | n` set to zero.
pub fn p_deplete<R: Ring>(f: &QExpansion<R>, p: u64) -> QExpansion<R> {
    let zero = f.coeffs[0].zero_like();
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| if (n as u64).is_multiple_of(p) { zero.clone() } else { c.clone() })
        .collect();
    QExpansion { coeffs, level: f.level.lcm(&(p * p)), ..f.clone() }
}

fn weight_of(psi: &HeckeCharacter) -> Result<i64, ThetaError> {
    let (a, b) = psi.infinity_type();
    if b != 0 || a > 0 {
        return Err(ThetaError::BadInfinityType(a, b));
    }
    Ok(1 - a)
}

/// `N_ψ = N(𝔣)·D_K` and `χ_ψ = χ·ε_K` where `ψ((n)) = n^{ν−1}χ(n)`.
pub fn level_and_nebentypus(psi: &HeckeCharacter) -> (u64, Nebentypus) {
    let k = psi.field();
    let level = psi.modulus().norm() * k.d_k();
    let m = psi.root_order();
    let order = m.lcm(&2);
    let table = (0..level)
        .map(|n| {
            if n.gcd(&level) != 1 {
                return None;
            }
            let t = psi.rational_exp(n as i64)? * (order / m) as i64;
            let s = if kronecker(k.disc(), n) == -1 { (order / 2) as i64 } else { 0 };
            Some((t + s).rem_euclid(order as i64))
        })
        .collect();
    (level, Nebentypus { modulus: level, order, table })
}

/// `θ_ψ = Σ_{(𝔞,𝔣)=1} ψ(𝔞) q^{N(𝔞)}` to precision `B`.
pub fn theta_series(psi: &HeckeCharacter, b: usize) -> Result<QExpansion<CycFrac>, ThetaError> {
    let weight = weight_of(psi)?;
    let (level, neb) = level_and_nebentypus(psi);
    let ok = psi.field().maximal_order();
    let mut coeffs = vec![CycFrac::from_int(0); b + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        for a in ideals_of_norm(ok, n as u64, Some(psi.modulus())) {
            *c = &*c + &psi.value(&a)?;
        }
    }
    Ok(QExpansion::new(weight, level, Some(neb), coeffs))
}

/// `Σ_{(𝔞, 𝔣p)=1} ψ̂(𝔞) q^{N(𝔞)}`.
pub fn theta_series_padic(avatar: &AvatarCharacter, b: usize) -> Result<QExpansion<PadicNum>, ThetaError> {
    let psi = avatar.character();
    let weight = weight_of(psi)?;
    let (level, neb) = level_and_nebentypus(psi);
    let ctx = avatar.embedding().ctx().clone();
    let p = ctx.p;
    let ok = psi.field().maximal_order();
    let mut coeffs = vec![PadicNum::zero(&ctx); b + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        if (n as u64).is_multiple_of(p) {
            continue;
        }
        for a in ideals_of_norm(ok, n as u64, Some(psi.modulus())) {
            *c = &*c + &avatar.eval(&a)?;
        }
    }
    Ok(QExpansion::new(weight, level, Some(neb), coeffs))
}

/// `a_n(T_q f) = a_{nq} + χ(q) q^{ν−1} a_{n/q}`, to precision `⌊B/q⌋`.
pub fn hecke_tq(f: &QExpansion<CycFrac>, q: u64) -> Result<QExpansion<CycFrac>, ThetaError> {
    if !is_prime(q) {
        return Err(ThetaError::NotPrime(q));
    }
    if f.level.is_multiple_of(q) {
        return Err(ThetaError::QDividesLevel { q, level: f.level });
    }
    let b = f.precision();
    if (b as u64) < q {
        return Err(ThetaError::ShortPrecision { q, have: b });
    }
    let neb = f.nebentypus.as_ref().ok_or(ThetaError::NoNebentypus)?;
    let qk = num_traits::pow(num_bigint::BigInt::from(q), (f.weight - 1) as usize);
    let chi_q = CycFrac::from_cyc(neb.value(q as i64) * CycInt::from(qk));
    let out_b = b / q as usize;
    let coeffs = (0..=out_b)
        .map(|n| {
            let mut c = f.coeffs[n * q as usize].clone();
            if n % q as usize == 0 {
                c = &c + &(&chi_q * &f.coeffs[n / q as usize]);
            }
            c
        })
        .collect();
    Ok(QExpansion::new(f.weight, f.level, f.nebentypus.clone(), coeffs))
}

/// `Σ_{N(𝔮)=q, (𝔮,𝔣)=1} ψ(𝔮)`.
pub fn hecke_eigenvalue(psi: &HeckeCharacter, q: u64) -> Result<CycFrac, ThetaError> {
    let ok = psi.field().maximal_order();
    let mut s = CycFrac::from_int(0);
    for a in ideals_of_norm(ok, q, Some(psi.modulus())) {
        s = &s + &psi.value(&a)?;
    }
    Ok(s)
}

fn poly_from_roots(roots: &[CycFrac]) -> Poly<CycFrac> {
    roots.iter().fold(Poly::constant(CycFrac::from_int(1)), |acc, r| {
        acc.mul(&Poly::new(vec![CycFrac::from_int(1), -r]))
    })
}

/// `det(1 − X·M)` for a 4×4 matrix by Leibniz expansion.
fn char_det4(m: &[[CycFrac; 4]; 4]) -> Poly<CycFrac> {
    let entry = |i: usize, j: usize| {
        let d = if i == j { CycFrac::from_int(1) } else { CycFrac::from_int(0) };
        Poly::new(vec![d, -&m[i][j]])
    };
    let mut total = Poly::zero();
    let mut perm = [0usize, 1, 2, 3];
    for _ in 0..24 {
        let mut term = Poly::constant(CycFrac::from_int(1));
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&entry(i, j));
        }
        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        total = if inversions % 2 == 0 { total.add(&term) } else { total.sub(&term) };
        next_permutation(&mut perm);
    }
    total
}

fn next_permutation(a: &mut [usize; 4]) {
    let Some(i) = (0..3).rev().find(|&i| a[i] < a[i + 1]) else {
        a.reverse();
        return;
    };
    let j = (i + 1..4).rev().find(|&j| a[j] > a[i]).expect("successor");
    a.swap(i, j);
    a[i + 1..].reverse();
}

/// Frobenius at an inert `q` on `Ind_K^Q ψ`, in the basis `(v, Frob·v)`.
fn induced_block(psi_q: &CycFrac) -> [[CycFrac; 2]; 2] {
    let z = CycFrac::from_int(0);
    let o = CycFrac::from_int(1);
    [[z.clone(), psi_q.clone()], [o, z]]
}

/// Compares `det(1 − X·Frob_q)` on `Ind ψ₁ ⊗ Ind ψ₂` with the product over `Ind ψ₁ψ₂ ⊕ Ind ψ₁ψ₂^𝐜`.
pub fn rankin_factorization_check(psi1: &HeckeCharacter, psi2: &HeckeCharacter, q: u64) -> Result<bool, ThetaError> {
    let k = psi1.field();
    if !is_prime(q) || k.d_k().is_multiple_of(q) {
        return Err(ThetaError::BadRankinPrime(q));
    }
    let eta1 = psi1.mul(psi2)?;
    let eta2 = psi1.mul(&psi2.conj()?)?;
    let sp = k.splitting(q).map_err(HeckeError::from)?;
    let primes = sp.primes();
    let bad = |i: &QuadIdeal| {
        [psi1, psi2, &eta1, &eta2].iter().any(|c| !c.space().ray().is_coprime(i))
    };
    if primes.iter().any(bad) {
        return Err(ThetaError::BadRankinPrime(q));
    }
    if sp.is_split() {
        let (a, b) = (&primes[0], &primes[1]);
        let x = [psi1.value(a)?, psi1.value(b)?];
        let y = [psi2.value(a)?, psi2.value(b)?];
        let mut tensor = Vec::new();
        for xi in &x {
            for yj in &y {
                tensor.push(xi * yj);
            }
        }
        let lhs = poly_from_roots(&tensor);
        let rhs = poly_from_roots(&[eta1.value(a)?, eta1.value(b)?]).mul(&poly_from_roots(&[eta2.value(a)?, eta2.value(b)?]));
        Ok(lhs == rhs)
    } else {
        let qq = &primes[0];
        let a = induced_block(&psi1.value(qq)?);
        let b = induced_block(&psi2.value(qq)?);
        let mut m: [[CycFrac; 4]; 4] = core::array::from_fn(|_| core::array::from_fn(|_| CycFrac::from_int(0)));
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = &a[i / 2][j / 2] * &b[i % 2][j % 2];
            }
        }
        let lhs = char_det4(&m);
        let blk = |v: CycFrac| Poly::new(vec![CycFrac::from_int(1), CycFrac::from_int(0), -v]);
        let rhs = blk(eta1.value(qq)?).mul(&blk(eta2.value(qq)?));
        Ok(lhs == rhs)
    }
}
