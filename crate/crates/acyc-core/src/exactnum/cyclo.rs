//! Cyclotomic integers `Z[ζ_m]` in the power basis modulo `Φ_m`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{euler_phi, factorize};
use super::ExactError;

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // Φ_m = Π_{d|m} (x^d − 1)^{μ(m/d)}; multiply the μ = +1 factors, divide by the rest.
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for d in super::arith::divisors(m) {
        let mu = moebius(m / d);
        if mu == 0 {
            continue;
        }
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        if mu == 1 {
            num = poly_mul_i64(&num, &f);
        } else {
            den = poly_mul_i64(&den, &f);
        }
    }
    poly_div_exact_i64(&num, &den)
}

fn moebius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn poly_mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_div_exact_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic up to sign (±1 leading)
    let mut r = num.to_vec();
    let dl = den.len() - 1;
    let lead = den[dl];
    let mut q = vec![0i64; num.len() - dl];
    for k in (0..q.len()).rev() {
        let c = r[k + dl] / lead;
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Canonical conductor: `Q(ζ_m) = Q(ζ_{m/2})` when `m ≡ 2 mod 4`.
fn canonical_conductor(m: u64) -> u64 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// An element of `Z[ζ_m]`.
#[derive(Clone, Debug)]
pub struct CycInt {
    m: u64,
    c: Vec<BigInt>,
}

impl CycInt {
    pub fn zero() -> Self {
        CycInt { m: 1, c: vec![BigInt::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        CycInt { m: 1, c: vec![v.into()] }
    }

    /// `ζ_m^k`.
    pub fn zeta(m: u64, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let mc = canonical_conductor(m);
        let kk = k.rem_euclid(m as i64) as u64;
        if mc != m {
            // ζ_m = −ζ_{m/2}^{(m/2+1)/2}
            let h = mc;
            let e = (kk * h.div_ceil(2)) % h;
            let base = Self::from_exponents(h, &[(e, BigInt::one())]);
            return if kk % 2 == 1 { -base } else { base };
        }
        Self::from_exponents(m, &[(kk, BigInt::one())])
    }

    /// Builds `Σ c_e ζ_m^e` and reduces.
    pub fn from_exponents(m: u64, terms: &[(u64, BigInt)]) -> Self {
        let mc = canonical_conductor(m);
        if mc != m {
            let mut acc = CycInt::zero();
            for (e, c) in terms {
                acc = acc + CycInt::zeta(m, *e as i64) * CycInt::from_int(c.clone());
            }
            return acc;
        }
        let mut full = vec![BigInt::zero(); m as usize];
        for (e, c) in terms {
            full[(*e % m) as usize] += c;
        }
        CycInt { m, c: reduce_mod_phi(full, m) }
    }

    /// Power-basis coefficients for an already-reduced vector of length φ(m).
    pub fn from_coeffs(m: u64, coeffs: Vec<BigInt>) -> Result<Self, ExactError> {
        if m % 4 == 2 || m == 0 {
            return Err(ExactError::BadConductor(m));
        }
        if coeffs.len() as u64 != euler_phi(m) {
            return Err(ExactError::BadConductor(m));
        }
        Ok(CycInt { m, c: coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// Rational integer value if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<BigInt> {
        let d = self.descend();
        if d.m == 1 {
            Some(d.c[0].clone())
        } else {
            None
        }
    }

    /// Image in `Q(ζ_target)`; `target` must be a multiple of the conductor.
    pub fn embed(&self, target: u64) -> Result<CycInt, ExactError> {
        let t = canonical_conductor(target);
        if !t.is_multiple_of(self.m) {
            return Err(ExactError::ConductorMismatch { from: self.m, to: target });
        }
        if t == self.m {
            return Ok(self.clone());
        }
        let k = t / self.m;
        let terms: Vec<(u64, BigInt)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u64 * k, c.clone()))
            .collect();
        Ok(Self::from_exponents(t, &terms))
    }

    fn lift_pair(a: &CycInt, b: &CycInt) -> (CycInt, CycInt) {
        if a.m == b.m {
            return (a.clone(), b.clone());
        }
        let l = canonical_conductor(lcm(a.m, b.m));
        (a.embed(l).unwrap(), b.embed(l).unwrap())
    }

    /// Representative at the smallest conductor whose field contains the value.
    pub fn descend(&self) -> CycInt {
        let mut cur = self.clone();
        'outer: loop {
            if cur.m == 1 {
                return cur;
            }
            for (l, e) in factorize(cur.m) {
                if let Some(next) = cur.try_drop_prime(l, e) {
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    fn try_drop_prime(&self, l: u64, e: u32) -> Option<CycInt> {
        let m = self.m;
        if l == 2 && e == 2 {
            // m = 4k, k odd: drop the whole 2-part
            return self.try_drop_coprime(4);
        }
        if e >= 2 {
            // Φ_m(x) = Φ_{m/l}(x^l): the subfield is spanned by exponents ≡ 0 mod l
            let mut out = Vec::with_capacity(self.c.len() / l as usize);
            for (j, c) in self.c.iter().enumerate() {
                if (j as u64).is_multiple_of(l) {
                    out.push(c.clone());
                } else if !c.is_zero() {
                    return None;
                }
            }
            return Some(CycInt { m: m / l, c: out });
        }
        self.try_drop_coprime(l)
    }

    /// Descent from `m = m'·l'` with gcd(m', l') = 1 via the tensor basis.
    fn try_drop_coprime(&self, lp: u64) -> Option<CycInt> {
        let m = self.m;
        let mp = m / lp;
        // ζ_m = ζ_{m'}^a ζ_{l'}^b with a·l' + b·m' ≡ 1 (mod m)
        let g = (lp as i64).extended_gcd(&(mp as i64));
        let a = g.x.rem_euclid(mp as i64) as u64;
        let b = g.y.rem_euclid(lp as i64) as u64;
        let phi_l = euler_phi(lp) as usize;
        let mut grid = vec![vec![BigInt::zero(); lp as usize]; mp as usize];
        for (e, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = e as u64;
            grid[((e * a) % mp) as usize][((e * b) % lp) as usize] += c;
        }
        // reduce along z modulo Φ_{l'}
        let phil = cyclotomic_poly(lp);
        let mut zcomp = vec![vec![BigInt::zero(); mp as usize]; phi_l];
        for (ya, row) in grid.into_iter().enumerate() {
            let red = reduce_dense_i64(row, &phil);
            for (zi, v) in red.into_iter().enumerate() {
                zcomp[zi][ya] = v;
            }
        }
        let mut parts = zcomp.into_iter().map(|row| reduce_mod_phi(row, mp));
        let head = parts.next().unwrap();
        if parts.any(|r| r.iter().any(|x| !x.is_zero())) {
            return None;
        }
        Some(CycInt { m: mp, c: head })
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism `ζ_m ↦ ζ_m^a`.
    pub fn galois(&self, a: i64) -> CycInt {
        let m = self.m;
        let a = a.rem_euclid(m as i64) as u64;
        debug_assert_eq!(a.gcd(&m), 1);
        let terms: Vec<(u64, BigInt)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| ((j as u64 * a) % m, c.clone()))
            .collect();
        Self::from_exponents(m, &terms)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycInt {
        self.galois(-1)
    }

    /// Product of the Galois conjugates other than the identity.
    fn conjugate_cofactor(&self) -> CycInt {
        let m = self.m;
        let mut acc = CycInt::one();
        for a in 2..m.max(2) {
            if a.gcd(&m) == 1 {
                acc = &acc * &self.galois(a as i64);
            }
        }
        acc
    }

    /// Absolute norm to `Q`.
    pub fn norm(&self) -> BigInt {
        let n = self * &self.conjugate_cofactor();
        n.as_integer().expect("norm lies in Z")
    }

    /// True iff `d` divides every power-basis coefficient.
    pub fn divisible_by_int(&self, d: &BigInt) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        self.c.iter().all(|x| (x % d).is_zero())
    }

    pub fn div_exact_int(&self, d: &BigInt) -> Option<CycInt> {
        if !self.divisible_by_int(d) {
            return None;
        }
        Some(CycInt { m: self.m, c: self.c.iter().map(|x| x / d).collect() })
    }

    /// `self / d` when it lies in `Z[ζ]`.
    pub fn div_exact(&self, d: &CycInt) -> Result<Option<CycInt>, ExactError> {
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (x, dd) = Self::lift_pair(self, d);
        let cof = dd.conjugate_cofactor();
        let n = (&dd * &cof).as_integer().expect("norm lies in Z");
        Ok((&x * &cof).div_exact_int(&n))
    }

    pub fn divides(d: &CycInt, x: &CycInt) -> Result<bool, ExactError> {
        Ok(x.div_exact(d)?.is_some())
    }

    /// Complex value under `ζ_m ↦ e^{2πi/m}`.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.m as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = 2.0 * core::f64::consts::PI * j as f64 / m;
            let v = c.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::new(v * libm::cos(t), v * libm::sin(t));
        }
        acc
    }

    /// If the value is a root of unity, returns `k` with value `= ζ_{2m}^k`.
    pub fn root_of_unity_exponent(&self) -> Option<(u64, u64)> {
        let n = if self.m % 2 == 1 { 2 * self.m } else { self.m };
        (0..n).find(|&k| *self == CycInt::zeta(n, k as i64)).map(|k| (n, k))
    }

    /// Largest absolute coefficient, for size bookkeeping.
    pub fn height(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

fn reduce_dense_i64(mut full: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let deg = phi.len() - 1;
    for k in (deg..full.len()).rev() {
        if full[k].is_zero() {
            continue;
        }
        let c = core::mem::take(&mut full[k]);
        for (j, p) in phi.iter().enumerate().take(deg) {
            if *p != 0 {
                full[k - deg + j] -= &c * *p;
            }
        }
    }
    full.truncate(deg);
    while full.len() < deg {
        full.push(BigInt::zero());
    }
    full
}

fn reduce_mod_phi(full: Vec<BigInt>, m: u64) -> Vec<BigInt> {
    reduce_dense_i64(full, &cyclotomic_poly(m))
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycInt::lift_pair(self, other);
        a.c == b.c
    }
}
impl Eq for CycInt {}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z{}^{j}", self.m)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &'a CycInt) -> CycInt {
        let (a, b) = CycInt::lift_pair(self, rhs);
        CycInt { m: a.m, c: a.c.iter().zip(b.c.iter()).map(|(x, y)| x + y).collect() }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &'a CycInt) -> CycInt {
        let (a, b) = CycInt::lift_pair(self, rhs);
        CycInt { m: a.m, c: a.c.iter().zip(b.c.iter()).map(|(x, y)| x - y).collect() }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &'a CycInt) -> CycInt {
        if self.m == 1 {
            return CycInt { m: rhs.m, c: rhs.c.iter().map(|x| x * &self.c[0]).collect() };
        }
        if rhs.m == 1 {
            return CycInt { m: self.m, c: self.c.iter().map(|x| x * &rhs.c[0]).collect() };
        }
        let (a, b) = CycInt::lift_pair(self, rhs);
        let m = a.m as usize;
        let mut full = vec![BigInt::zero(); m];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                full[(i + j) % m] += x * y;
            }
        }
        CycInt { m: a.m, c: reduce_mod_phi(full, a.m) }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { m: self.m, c: self.c.iter().map(|x| -x).collect() }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $f(self, rhs: CycInt) -> CycInt {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a CycInt> for CycInt {
            type Output = CycInt;
            fn $f(self, rhs: &'a CycInt) -> CycInt {
                (&self).$f(rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl From<i64> for CycInt {
    fn from(v: i64) -> Self {
        CycInt::from_int(v)
    }
}

impl From<BigInt> for CycInt {
    fn from(v: BigInt) -> Self {
        CycInt::from_int(v)
    }
}

/// An element of `Z[ζ_m][1/q]`-style fractions: `num / den` with `den > 0`.
#[derive(Clone, Debug)]
pub struct CycFrac {
    num: CycInt,
    den: BigInt,
}

impl CycFrac {
    pub fn new(num: CycInt, den: BigInt) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let mut g = den.clone();
        for c in num.coeffs() {
            g = g.gcd(c);
        }
        if g.is_zero() || g.is_one() {
            return Ok(CycFrac { num, den });
        }
        Ok(CycFrac { num: num.div_exact_int(&g).unwrap(), den: den / g })
    }

    pub fn from_cyc(x: CycInt) -> Self {
        CycFrac { num: x, den: BigInt::one() }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::from_cyc(CycInt::from_int(v))
    }

    /// `a / b` for integers.
    pub fn ratio<T: Into<BigInt>, U: Into<BigInt>>(a: T, b: U) -> Self {
        Self::new(CycInt::from_int(a), b.into()).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &CycInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn conj(&self) -> Self {
        CycFrac { num: self.num.conj(), den: self.den.clone() }
    }

    /// Whether the denominator is a power of `q` (membership in `Z[ζ][1/q]`).
    pub fn is_q_integral(&self, q: &BigInt) -> bool {
        let mut d = self.den.clone();
        while !d.is_one() {
            let (qq, r) = d.div_rem(q);
            if !r.is_zero() {
                return false;
            }
            d = qq;
        }
        true
    }

    /// `self / d` as an element of `Z[ζ][1/q]`, if it lies there.
    pub fn div_in_localization(&self, d: &BigInt, q: &BigInt) -> Option<CycFrac> {
        if d.is_zero() {
            return None;
        }
        let out = CycFrac::new(self.num.clone(), &self.den * d).ok()?;
        if out.is_q_integral(q) {
            Some(out)
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        CycFrac { num: self.num.pow(e), den: num_traits::pow(self.den.clone(), e as usize) }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.num.to_complex() / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for CycFrac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &CycInt::from_int(other.den.clone()) == &other.num * &CycInt::from_int(self.den.clone())
    }
}
impl Eq for CycFrac {}

impl fmt::Display for CycFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a CycFrac> for &'a CycFrac {
    type Output = CycFrac;
    fn add(self, rhs: &'a CycFrac) -> CycFrac {
        let num = &self.num * &CycInt::from_int(rhs.den.clone()) + &rhs.num * &CycInt::from_int(self.den.clone());
        CycFrac::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Sub<&'a CycFrac> for &'a CycFrac {
    type Output = CycFrac;
    fn sub(self, rhs: &'a CycFrac) -> CycFrac {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycFrac> for &'a CycFrac {
    type Output = CycFrac;
    fn mul(self, rhs: &'a CycFrac) -> CycFrac {
        CycFrac::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &CycFrac {
    type Output = CycFrac;
    fn neg(self) -> CycFrac {
        CycFrac { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for CycFrac {
    type Output = CycFrac;
    fn neg(self) -> CycFrac {
        -&self
    }
}

macro_rules! forward_frac {
    ($tr:ident, $f:ident) => {
        impl $tr<CycFrac> for CycFrac {
            type Output = CycFrac;
            fn $f(self, rhs: CycFrac) -> CycFrac {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a CycFrac> for CycFrac {
            type Output = CycFrac;
            fn $f(self, rhs: &'a CycFrac) -> CycFrac {
                (&self).$f(rhs)
            }
        }
    };
}
forward_frac!(Add, add);
forward_frac!(Sub, sub);
forward_frac!(Mul, mul);
