//! Imaginary quadratic fields, their orders and ideals.
//!
//! Elements of `O_K` are written `u + v·ω` with `ω = (disc + √disc)/2`; the order of
//! conductor `f` is `{u + vω : f | v}`.

pub mod forms;
pub mod ideal;

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::exactnum::arith::{is_fundamental_discriminant, is_prime, kronecker};
use crate::exactnum::ExactError;

pub use forms::{class_group, reduced_forms, BinaryForm, ClassGroup};
pub use ideal::{ideals_of_norm, QuadIdeal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("-{0} is not a negative fundamental discriminant")]
    NotFundamental(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ideals belong to different orders")]
    MixedOrders,
    #[error("ideal is not coprime to the conductor {0}")]
    NotInvertible(u64),
    #[error("ideal is not principal")]
    NotPrincipal,
    #[error("conductor {0} must be positive")]
    BadConductor(u64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `u + v·ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QuadInt {
    pub u: i64,
    pub v: i64,
}

impl QuadInt {
    pub const fn new(u: i64, v: i64) -> Self {
        QuadInt { u, v }
    }

    pub const fn int(u: i64) -> Self {
        QuadInt { u, v: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u, self.v) {
            (u, 0) => write!(f, "{u}"),
            (0, v) => write!(f, "{v}w"),
            (u, v) if v < 0 => write!(f, "{u}{v}w"),
            (u, v) => write!(f, "{u}+{v}w"),
        }
    }
}

/// `K = Q(√−D_K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadField {
    d_k: u64,
}

impl QuadField {
    /// Field of discriminant `−d_k`.
    pub fn new(d_k: u64) -> Result<Self, QuadError> {
        if d_k < 3 || !is_fundamental_discriminant(-(d_k as i64)) {
            return Err(QuadError::NotFundamental(d_k));
        }
        Ok(QuadField { d_k })
    }

    pub fn d_k(&self) -> u64 {
        self.d_k
    }

    pub fn disc(&self) -> i64 {
        -(self.d_k as i64)
    }

    /// `N(ω) = (disc² − disc)/4`.
    fn omega_norm(&self) -> i128 {
        let d = self.disc() as i128;
        (d * d - d) / 4
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let (au, av, bu, bv) = (a.u as i128, a.v as i128, b.u as i128, b.v as i128);
        let vv = av * bv;
        let u = au * bu - vv * self.omega_norm();
        let v = au * bv + av * bu + vv * self.disc() as i128;
        QuadInt::new(narrow(u), narrow(v))
    }

    pub fn add(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        QuadInt::new(a.u + b.u, a.v + b.v)
    }

    pub fn sub(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        QuadInt::new(a.u - b.u, a.v - b.v)
    }

    pub fn scale(&self, a: QuadInt, k: i64) -> QuadInt {
        QuadInt::new(a.u * k, a.v * k)
    }

    pub fn pow(&self, a: QuadInt, mut e: u32) -> QuadInt {
        let mut acc = QuadInt::int(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        acc
    }

    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(a.u + a.v * self.disc(), -a.v)
    }

    pub fn norm(&self, a: QuadInt) -> i128 {
        let (u, v) = (a.u as i128, a.v as i128);
        u * u + self.disc() as i128 * u * v + self.omega_norm() * v * v
    }

    pub fn trace(&self, a: QuadInt) -> i64 {
        2 * a.u + a.v * self.disc()
    }

    /// `a/b` if it is integral.
    pub fn div_exact(&self, a: QuadInt, b: QuadInt) -> Option<QuadInt> {
        let n = self.norm(b);
        if n == 0 {
            return None;
        }
        let t = self.mul(a, self.conj(b));
        if t.u as i128 % n != 0 || t.v as i128 % n != 0 {
            return None;
        }
        Some(QuadInt::new(narrow(t.u as i128 / n), narrow(t.v as i128 / n)))
    }

    /// Units of `O_K`.
    pub fn units(&self) -> Vec<QuadInt> {
        let mut out = Vec::new();
        for v in -2..=2 {
            for u in -3..=3 {
                let x = QuadInt::new(u, v);
                if self.norm(x) == 1 {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Embedding with `√disc` in the upper half plane.
    pub fn to_complex(&self, a: QuadInt) -> Complex64 {
        let s = libm::sqrt(self.d_k as f64);
        Complex64::new(a.u as f64 + a.v as f64 * self.disc() as f64 / 2.0, a.v as f64 * s / 2.0)
    }

    pub fn kronecker(&self, q: u64) -> i32 {
        kronecker(self.disc(), q)
    }

    pub fn splitting(&self, q: u64) -> Result<Splitting, QuadError> {
        if !is_prime(q) {
            return Err(QuadError::NotPrime(q));
        }
        let ps = ideal::primes_above(*self, q);
        Ok(match self.kronecker(q) {
            1 => Splitting::Split(ps[0].clone(), ps[1].clone()),
            0 => Splitting::Ramified(ps[0].clone()),
            _ => Splitting::Inert(ps[0].clone()),
        })
    }

    pub fn maximal_order(&self) -> QuadOrder {
        QuadOrder { field: *self, f: 1 }
    }

    pub fn order(&self, f: u64) -> Result<QuadOrder, QuadError> {
        if f == 0 {
            return Err(QuadError::BadConductor(f));
        }
        Ok(QuadOrder { field: *self, f })
    }
}

pub(crate) fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("quadratic integer coordinate overflow")
}

/// Decomposition of a rational prime; the first prime of a split pair has the
/// lexicographically smaller Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split(QuadIdeal, QuadIdeal),
    Inert(QuadIdeal),
    Ramified(QuadIdeal),
}

impl Splitting {
    pub fn is_split(&self) -> bool {
        matches!(self, Splitting::Split(..))
    }

    pub fn is_inert(&self) -> bool {
        matches!(self, Splitting::Inert(..))
    }

    pub fn is_ramified(&self) -> bool {
        matches!(self, Splitting::Ramified(..))
    }

    pub fn primes(&self) -> Vec<QuadIdeal> {
        match self {
            Splitting::Split(a, b) => alloc::vec![a.clone(), b.clone()],
            Splitting::Inert(a) | Splitting::Ramified(a) => alloc::vec![a.clone()],
        }
    }
}

/// `O_f = Z + f·O_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadOrder {
    field: QuadField,
    f: u64,
}

impl QuadOrder {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    pub fn disc(&self) -> i64 {
        (self.f * self.f) as i64 * self.field.disc()
    }

    pub fn contains(&self, a: QuadInt) -> bool {
        a.v % self.f as i64 == 0
    }

    pub fn units(&self) -> Vec<QuadInt> {
        self.field.units().into_iter().filter(|&u| self.contains(u)).collect()
    }

    pub fn unit_ideal(&self) -> QuadIdeal {
        QuadIdeal::unit(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_q_sqrt_minus_7() {
        let k = QuadField::new(7).unwrap();
        let w = QuadInt::new(0, 1);
        // ω = (−7+√−7)/2 has norm 14 and trace −7
        assert_eq!(k.norm(w), 14);
        assert_eq!(k.trace(w), -7);
        let a = QuadInt::new(3, -2);
        let b = QuadInt::new(-1, 5);
        assert_eq!(k.norm(k.mul(a, b)), k.norm(a) * k.norm(b));
        assert_eq!(k.div_exact(k.mul(a, b), b), Some(a));
        assert_eq!(k.units().len(), 2);
        assert_eq!(QuadField::new(3).unwrap().units().len(), 6);
        assert_eq!(QuadField::new(4).unwrap().units().len(), 4);
        assert!(QuadField::new(12).is_err());
    }

    #[test]
    fn splitting_examples() {
        let k = QuadField::new(7).unwrap();
        assert!(k.splitting(5).unwrap().is_inert());
        assert!(k.splitting(7).unwrap().is_ramified());
        match k.splitting(11).unwrap() {
            Splitting::Split(a, b) => {
                assert_eq!(a.norm(), 11);
                assert_eq!(b.norm(), 11);
                assert_ne!(a, b);
            }
            _ => panic!("11 splits in Q(√−7)"),
        }
        assert!(k.splitting(2).unwrap().is_split());
        assert!(k.splitting(9).is_err());
    }
}
