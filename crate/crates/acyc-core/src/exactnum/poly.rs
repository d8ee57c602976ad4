//! Univariate polynomials over the exact coefficient rings.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclo::{CycFrac, CycInt};
use super::padic::PadicNum;
use super::ExactError;

/// The operations `Poly` needs from its coefficients.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

/// Coefficient rings with decidable divisibility.
pub trait Divisibility: Ring {
    fn divides(d: &Self, x: &Self) -> Result<bool, ExactError>;
}

macro_rules! ring_via_ops {
    ($t:ty, $zero:expr, $one:expr, $isz:expr) => {
        impl Ring for $t {
            fn zero_like(&self) -> Self {
                $zero(self)
            }
            fn one_like(&self) -> Self {
                $one(self)
            }
            fn is_zero_elem(&self) -> bool {
                $isz(self)
            }
            fn add_ref(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
            fn neg_ref(&self) -> Self {
                -self
            }
        }
    };
}

ring_via_ops!(BigInt, |_: &BigInt| BigInt::zero(), |_: &BigInt| BigInt::one(), |x: &BigInt| x.is_zero());
ring_via_ops!(
    BigRational,
    |_: &BigRational| BigRational::zero(),
    |_: &BigRational| BigRational::one(),
    |x: &BigRational| x.is_zero()
);
ring_via_ops!(CycInt, |_: &CycInt| CycInt::zero(), |_: &CycInt| CycInt::one(), |x: &CycInt| x.is_zero());
ring_via_ops!(
    CycFrac,
    |_: &CycFrac| CycFrac::from_int(0),
    |_: &CycFrac| CycFrac::from_int(1),
    |x: &CycFrac| x.is_zero()
);
ring_via_ops!(
    PadicNum,
    |x: &PadicNum| PadicNum::zero(x.ctx()),
    |x: &PadicNum| PadicNum::one(x.ctx()),
    |x: &PadicNum| x.is_zero()
);

impl Divisibility for BigInt {
    fn divides(d: &Self, x: &Self) -> Result<bool, ExactError> {
        if d.is_zero() {
            return Ok(x.is_zero());
        }
        Ok((x % d).is_zero())
    }
}

impl Divisibility for CycInt {
    fn divides(d: &Self, x: &Self) -> Result<bool, ExactError> {
        if d.is_zero() {
            return Ok(x.is_zero());
        }
        CycInt::divides(d, x)
    }
}

impl Divisibility for BigRational {
    fn divides(_d: &Self, _x: &Self) -> Result<bool, ExactError> {
        Err(ExactError::UndecidableDivisibility)
    }
}

/// Dense polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::new(alloc::vec![c])
    }

    /// `c·X^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let z = c.zero_like();
        let mut v = alloc::vec![z; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `X^k` (`None` past the degree).
    pub fn coeff(&self, k: usize) -> Option<&R> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(match (self.coeffs.get(k), o.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = alloc::vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> Option<R> {
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next()?.clone();
        for c in it {
            acc = acc.mul_ref(x).add_ref(c);
        }
        Some(acc)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<R: Divisibility> Poly<R> {
    /// Whether `d` divides every coefficient.
    pub fn divisible_by(&self, d: &R) -> Result<bool, ExactError> {
        for c in &self.coeffs {
            if !R::divides(d, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `d | f` coefficientwise.
pub fn poly_divides<R: Divisibility>(d: &R, f: &Poly<R>) -> Result<bool, ExactError> {
    f.divisible_by(d)
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> Poly<BigInt> {
        Poly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn integer_divisibility() {
        assert!(poly_divides(&BigInt::from(4), &zp(&[8, 0, 4])).unwrap());
        assert!(poly_divides(&BigInt::from(10), &zp(&[-10])).unwrap());
        assert!(!poly_divides(&BigInt::from(3), &zp(&[3, 1])).unwrap());
    }

    #[test]
    fn cyclotomic_coefficients() {
        let f = Poly::new(alloc::vec![CycInt::zeta(3, 1) - CycInt::zeta(3, 2)]);
        assert!(!poly_divides(&CycInt::from_int(2), &f).unwrap());
    }

    #[test]
    fn rationals_are_rejected() {
        let f = Poly::new(alloc::vec![BigRational::one()]);
        assert!(matches!(
            poly_divides(&BigRational::one(), &f),
            Err(ExactError::UndecidableDivisibility)
        ));
    }

    #[test]
    fn degree_adds() {
        let a = zp(&[1, 2, 3]);
        let b = zp(&[0, 1]);
        assert_eq!(a.mul(&b).degree(), Some(3));
        assert_eq!(a.eval(&BigInt::from(2)), Some(BigInt::from(17)));
    }
}
