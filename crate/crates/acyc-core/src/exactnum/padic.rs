//! Truncated p-adic integers in `Z_p` and in the unramified quadratic extension.
//!
//! The quadratic model is `Z_p[θ]/(θ² − r)` with `r` the least positive
//! quadratic non-residue mod `p`; that choice is what cache metadata records.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{kronecker, mod_pow};
use super::ExactError;

/// Default working precision exponent.
pub const DEFAULT_PRECISION: u32 = 20;

/// Parameters of a residue ring `O/p^n` with `O` of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicCtx {
    pub p: u64,
    pub degree: u32,
    pub prec: u32,
}

impl PadicCtx {
    pub fn new(p: u64, degree: u32, prec: u32) -> Result<Self, ExactError> {
        if !super::arith::is_prime(p) {
            return Err(ExactError::NotPrime(p));
        }
        if degree != 1 && degree != 2 {
            return Err(ExactError::UnsupportedDegree(degree));
        }
        if prec == 0 {
            return Err(ExactError::ZeroPrecision);
        }
        Ok(PadicCtx { p, degree, prec })
    }

    pub fn modulus(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.prec as usize)
    }

    /// `θ² = r` for the quadratic model (for `p = 2`, `θ² = θ − 1` is used instead).
    pub fn theta_square(&self) -> i64 {
        quadratic_nonresidue(self.p)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        PadicCtx { prec, ..self.clone() }
    }

    /// `p^d` (size of the residue field).
    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.degree)
    }
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn quadratic_nonresidue(p: u64) -> i64 {
    if p == 2 {
        return -1;
    }
    (2..p as i64).find(|&r| kronecker(r, p) == -1).expect("odd prime has a non-residue")
}

/// Residue `a + bθ` modulo `p^n` (with `b = 0` in degree 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicNum {
    ctx: PadicCtx,
    a: BigInt,
    b: BigInt,
}

impl PadicNum {
    pub fn new(ctx: &PadicCtx, a: BigInt, b: BigInt) -> Self {
        let m = ctx.modulus();
        let b = if ctx.degree == 1 { BigInt::zero() } else { b.mod_floor(&m) };
        PadicNum { ctx: ctx.clone(), a: a.mod_floor(&m), b }
    }

    pub fn from_int<T: Into<BigInt>>(ctx: &PadicCtx, v: T) -> Self {
        Self::new(ctx, v.into(), BigInt::zero())
    }

    pub fn zero(ctx: &PadicCtx) -> Self {
        Self::from_int(ctx, 0)
    }

    pub fn one(ctx: &PadicCtx) -> Self {
        Self::from_int(ctx, 1)
    }

    /// The generator `θ` of the quadratic model.
    pub fn theta(ctx: &PadicCtx) -> Result<Self, ExactError> {
        if ctx.degree != 2 {
            return Err(ExactError::UnsupportedDegree(ctx.degree));
        }
        Ok(Self::new(ctx, BigInt::zero(), BigInt::one()))
    }

    pub fn ctx(&self) -> &PadicCtx {
        &self.ctx
    }

    pub fn parts(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Valuation, capped at the precision.
    pub fn valuation(&self) -> u32 {
        let p = BigInt::from(self.ctx.p);
        let v = |x: &BigInt| -> u32 {
            if x.is_zero() {
                return self.ctx.prec;
            }
            let mut x = x.clone();
            let mut k = 0;
            while (&x % &p).is_zero() {
                x /= &p;
                k += 1;
            }
            k
        };
        v(&self.a).min(v(&self.b))
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == 0
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        let prec = prec.min(self.ctx.prec);
        Self::new(&self.ctx.with_prec(prec), self.a.clone(), self.b.clone())
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.ctx.p, other.ctx.p, "mixed primes");
        assert_eq!(self.ctx.degree, other.ctx.degree, "mixed degrees");
        if self.ctx.prec == other.ctx.prec {
            (self.clone(), other.clone())
        } else {
            let n = self.ctx.prec.min(other.ctx.prec);
            (self.truncate(n), other.truncate(n))
        }
    }

    /// Norm to `Z_p` (degree 2) or the value itself.
    pub fn norm(&self) -> BigInt {
        if self.ctx.degree == 1 {
            return self.a.clone();
        }
        let r = BigInt::from(self.ctx.theta_square());
        (&self.a * &self.a - r * &self.b * &self.b).mod_floor(&self.ctx.modulus())
    }

    /// Galois conjugate `θ ↦ −θ` (Frobenius of the unramified extension).
    pub fn frobenius(&self) -> Self {
        Self::new(&self.ctx, self.a.clone(), -self.b.clone())
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if !self.is_unit() {
            return Err(ExactError::NonUnit);
        }
        let m = self.ctx.modulus();
        let n = self.norm();
        let ninv = mod_inverse_big(&n, &m).ok_or(ExactError::NonUnit)?;
        if self.ctx.degree == 1 {
            return Ok(Self::from_int(&self.ctx, ninv));
        }
        let conj = self.frobenius();
        Ok(Self::new(&self.ctx, conj.a * &ninv, conj.b * &ninv))
    }

    /// Division; the divisor must be a unit (division by `p` is not supported).
    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if !other.is_unit() {
            return Err(ExactError::DivisionByP);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow_u(&self, e: &BigInt) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        let mut e = e.clone();
        let two = BigInt::from(2);
        while e.is_positive() {
            if e.is_odd() {
                acc = &acc * &base;
            }
            base = &base * &base;
            e /= &two;
        }
        acc
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        if e >= 0 {
            Ok(self.pow_u(&BigInt::from(e)))
        } else {
            Ok(self.inv()?.pow_u(&BigInt::from(-e)))
        }
    }

    /// Teichmüller representative `ω(x)`.
    pub fn teichmuller(&self) -> Result<Self, ExactError> {
        if !self.is_unit() {
            return Err(ExactError::NonUnit);
        }
        let q = BigInt::from(self.ctx.residue_size());
        let mut y = self.clone();
        for _ in 0..self.ctx.prec {
            y = y.pow_u(&q);
        }
        Ok(y)
    }

    /// `⟨x⟩ = x·ω(x)^{-1}`, a principal unit.
    pub fn principal_part(&self) -> Result<Self, ExactError> {
        let w = self.teichmuller()?;
        self.div(&w)
    }

    /// A square root if one exists (odd `p`, unit radicand).
    pub fn sqrt(&self) -> Option<Self> {
        let p = self.ctx.p;
        if p == 2 || !self.is_unit() {
            return None;
        }
        let res = self.truncate(1);
        let ctx1 = res.ctx.clone();
        let mut root = None;
        'search: for a in 0..p {
            for b in 0..if ctx1.degree == 2 { p } else { 1 } {
                let c = PadicNum::new(&ctx1, BigInt::from(a), BigInt::from(b));
                if &c * &c == res {
                    root = Some(c);
                    break 'search;
                }
            }
        }
        let r0 = root?;
        let mut y = PadicNum::new(&self.ctx, r0.a, r0.b);
        let half = PadicNum::from_int(&self.ctx, 2).inv().ok()?;
        for _ in 0..=self.ctx.prec {
            // Newton step y ← (y + x/y)/2
            let q = self.div(&y).ok()?;
            y = &(&y + &q) * &half;
        }
        Some(y)
    }

    /// A generator of the residue field's multiplicative group, lifted as a small integer pair.
    pub fn residue_generator(ctx: &PadicCtx) -> Self {
        let p = ctx.p;
        let q = ctx.residue_size();
        let ctx1 = ctx.with_prec(1);
        let order = q - 1;
        let primes: Vec<u64> = super::arith::factorize(order).into_iter().map(|(l, _)| l).collect();
        for idx in 1..q {
            let (a, b) = (idx % p, idx / p);
            let g = PadicNum::new(&ctx1, BigInt::from(a), BigInt::from(b));
            if g.is_zero() {
                continue;
            }
            let ok = primes
                .iter()
                .all(|l| !g.pow_u(&BigInt::from(order / l)).is_one());
            if ok {
                return PadicNum::new(ctx, BigInt::from(a), BigInt::from(b));
            }
        }
        unreachable!("finite field has a generator")
    }

    /// Reduction to the residue field as an index `a + b·p` with `0 ≤ a, b < p`.
    pub fn residue_index(&self) -> u64 {
        let p = BigInt::from(self.ctx.p);
        let a = self.a.mod_floor(&p).to_u64().unwrap();
        let b = self.b.mod_floor(&p).to_u64().unwrap();
        a + b * self.ctx.p
    }

    /// Fermat-style check helper: `x^{p^d-1}` mod p equals 1 for units.
    pub fn residue_order_divides(&self, n: u64) -> bool {
        self.truncate(1).pow_u(&BigInt::from(n)).is_one()
    }
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `x^e mod p` helper for small residue computations.
pub fn small_pow(x: u64, e: u64, p: u64) -> u64 {
    mod_pow(x, e, p)
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.degree == 1 {
            write!(f, "{} + O({}^{})", self.a, self.ctx.p, self.ctx.prec)
        } else {
            write!(f, "{} + {}*t + O({}^{})", self.a, self.b, self.ctx.p, self.ctx.prec)
        }
    }
}

impl<'a> Add<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn add(self, rhs: &'a PadicNum) -> PadicNum {
        let (x, y) = self.common(rhs);
        PadicNum::new(&x.ctx, x.a + y.a, x.b + y.b)
    }
}

impl<'a> Sub<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn sub(self, rhs: &'a PadicNum) -> PadicNum {
        let (x, y) = self.common(rhs);
        PadicNum::new(&x.ctx, x.a - y.a, x.b - y.b)
    }
}

impl<'a> Mul<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn mul(self, rhs: &'a PadicNum) -> PadicNum {
        let (x, y) = self.common(rhs);
        if x.ctx.degree == 1 {
            return PadicNum::new(&x.ctx, &x.a * &y.a, BigInt::zero());
        }
        if x.ctx.p == 2 {
            // θ² = θ − 1
            let bb = &x.b * &y.b;
            let a = &x.a * &y.a - &bb;
            let b = &x.a * &y.b + &x.b * &y.a + bb;
            return PadicNum::new(&x.ctx, a, b);
        }
        let r = BigInt::from(x.ctx.theta_square());
        let a = &x.a * &y.a + r * &x.b * &y.b;
        let b = &x.a * &y.b + &x.b * &y.a;
        PadicNum::new(&x.ctx, a, b)
    }
}

impl Neg for &PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        PadicNum::new(&self.ctx, -self.a.clone(), -self.b.clone())
    }
}

impl Neg for PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        -&self
    }
}

macro_rules! forward_padic {
    ($tr:ident, $f:ident) => {
        impl $tr<PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $f(self, rhs: PadicNum) -> PadicNum {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $f(self, rhs: &'a PadicNum) -> PadicNum {
                (&self).$f(rhs)
            }
        }
    };
}
forward_padic!(Add, add);
forward_padic!(Sub, sub);
forward_padic!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_of_two_mod_625() {
        let ctx = PadicCtx::new(5, 1, 4).unwrap();
        let x = PadicNum::from_int(&ctx, 2);
        let w = x.teichmuller().unwrap();
        // oracle: iterate y ↦ y^5 starting at 2, 4 times, in plain integers mod 625
        let mut y: u64 = 2;
        for _ in 0..4 {
            y = mod_pow(y, 5, 625);
        }
        assert_eq!(w, PadicNum::from_int(&ctx, y as i64));
        assert!(w.pow(4).unwrap().is_one());
        assert_eq!(w.truncate(1), x.truncate(1));
    }

    #[test]
    fn teichmuller_fixed_points() {
        let ctx = PadicCtx::new(5, 2, 6).unwrap();
        let one = PadicNum::one(&ctx);
        assert_eq!(one.teichmuller().unwrap(), one);
        let m1 = -PadicNum::one(&ctx);
        assert_eq!(m1.teichmuller().unwrap(), m1);
        assert!(PadicNum::from_int(&ctx, 5).teichmuller().is_err());
    }

    #[test]
    fn quadratic_model_inverse() {
        let ctx = PadicCtx::new(7, 2, 8).unwrap();
        let x = PadicNum::new(&ctx, BigInt::from(3), BigInt::from(5));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(PadicNum::from_int(&ctx, 7).inv().is_err());
    }

    #[test]
    fn square_roots() {
        let ctx = PadicCtx::new(5, 2, 10).unwrap();
        let m7 = PadicNum::from_int(&ctx, -7);
        let s = m7.sqrt().unwrap();
        assert_eq!(&s * &s, m7);
    }

    #[test]
    fn residue_generator_has_full_order() {
        let ctx = PadicCtx::new(5, 2, 3).unwrap();
        let g = PadicNum::residue_generator(&ctx);
        assert!(g.residue_order_divides(24));
        assert!(!g.residue_order_divides(12));
        assert!(!g.residue_order_divides(8));
    }
}
