//! Definite quaternion orders, Brandt matrices, Gross points and finite-level
//! theta elements for weight-2 forms.

mod brandt;
mod gross;
pub mod lattice;
mod theta;

pub use brandt::{class_set_and_brandt, primitive_integral, BrandtSystem, IdealClass, Neighbor, THETA_PRECISION};
pub use gross::{gross_points, GrossLevel, GrossPoint, GrossTower, NeighborSplit, TraceReport};
pub use theta::{corestriction_check, eval_wild, inversion_symmetry, theta_element, ThetaElement, WildValue};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::exactnum::arith::{factorize, is_prime, is_squarefree};
use lattice::{eval_form, Form4, Lattice, Vec4};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuatError {
    #[error("N^- = {0} is not a prime (only prime discriminants are supported)")]
    NotAdmissible(u64),
    #[error("N^+ = {0} must be squarefree and prime to N^-")]
    BadLevel(u64),
    #[error("basis does not close under multiplication")]
    NotAnOrder,
    #[error("{0} divides the discriminant or level")]
    BadPrime(u64),
    #[error("{found} neighbors at {q}, expected {expected}")]
    NeighborCount { q: u64, found: usize, expected: usize },
    #[error("mass {found} differs from {expected}")]
    MassMismatch { found: BigRational, expected: BigRational },
    #[error("no joint eigenvector for the supplied coefficients")]
    NoEigenvector,
    #[error("joint eigenspace has dimension {0}")]
    AmbiguousEigenspace(usize),
    #[error("Heegner condition fails at {prime}: {reason}")]
    Heegner { prime: u64, reason: &'static str },
    #[error("{found} optimal embeddings, Eichler's formula gives {expected}")]
    EmbeddingCount { found: usize, expected: usize },
    #[error("class-group action is not free on Gross points")]
    NotFree,
    #[error("neighbor structure broken at level {0}")]
    Neighbors(u32),
    #[error("a_p = {0} is not a p-adic unit")]
    NonOrdinary(i64),
    #[error("level {have} is below the requested {want}")]
    LevelTooLow { have: u32, want: u32 },
    #[error("ideal class not found")]
    Unidentified,
    #[error(transparent)]
    Exact(#[from] crate::exactnum::ExactError),
    #[error(transparent)]
    Quad(#[from] crate::quadfield::QuadError),
    #[error(transparent)]
    ClassField(#[from] crate::classfield::ClassFieldError),
    #[error(transparent)]
    Iwasawa(#[from] crate::iwasawa::IwasawaError),
    #[error(transparent)]
    Hecke(#[from] crate::heckechar::HeckeError),
}

/// Element of `B` written in the basis of the maximal order, with a common denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatQuat {
    pub den: i128,
    pub num: Vec4,
}

impl RatQuat {
    pub fn new(num: Vec4, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let mut g = den.abs();
        for x in num {
            g = g.gcd(&x);
        }
        let s = if den < 0 { -g } else { g };
        RatQuat { den: den / s, num: num.map(|x| x / s) }
    }

    pub fn integral(num: Vec4) -> Self {
        RatQuat { den: 1, num }
    }

    pub fn as_integral(&self) -> Option<Vec4> {
        (self.den == 1).then_some(self.num)
    }
}

/// An Eichler order of squarefree level `N^+` inside a maximal order of the
/// definite algebra ramified at the prime `N^-` and `∞`.
///
/// Coordinates are always taken in the basis of the maximal order `O_0`; the
/// Eichler order is a sublattice of index `N^+`.
#[derive(Clone, Debug)]
pub struct QuaternionOrder {
    n_minus: u64,
    n_plus: u64,
    alg: (i64, i64),
    mult: [[Vec4; 4]; 4],
    conj: [Vec4; 4],
    trace: Vec4,
    gram: Form4,
    one: Vec4,
    eichler: Lattice,
}

type RatVec = [BigRational; 4];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn std_mul(a: i64, b: i64, x: &RatVec, y: &RatVec) -> RatVec {
    let a = BigRational::from_integer(a.into());
    let b = BigRational::from_integer(b.into());
    let ab = &a * &b;
    [
        &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
        &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
        &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
        &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
    ]
}

fn invert4(m: &[RatVec; 4]) -> Option<[RatVec; 4]> {
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..4 {
        let pr = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let p = a[col][col].clone();
        for k in 0..4 {
            a[col][k] = &a[col][k] / &p;
            inv[col][k] = &inv[col][k] / &p;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..4 {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                    let t = &f * &inv[col][k];
                    inv[r][k] -= t;
                }
            }
        }
    }
    let mut out: [RatVec; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = inv[i][j].clone();
        }
    }
    Some(out)
}

fn to_int(x: &BigRational) -> Option<i128> {
    x.is_integer().then(|| x.to_integer().to_i128()).flatten()
}

/// Algebra `(a, b)` and a maximal-order basis in `1, i, j, k` coordinates.
fn maximal_basis(p: u64) -> Result<((i64, i64), [RatVec; 4]), QuatError> {
    let pi = p as i64;
    let v = |x: [(i64, i64); 4]| -> RatVec { x.map(|(n, d)| rat(n, d)) };
    if p == 2 {
        return Ok((
            (-1, -1),
            [v([(1, 1), (0, 1), (0, 1), (0, 1)]), v([(0, 1), (1, 1), (0, 1), (0, 1)]), v([(0, 1), (0, 1), (1, 1), (0, 1)]), v([(1, 2), (1, 2), (1, 2), (1, 2)])],
        ));
    }
    if p % 4 == 3 {
        return Ok((
            (-1, -pi),
            [v([(1, 1), (0, 1), (0, 1), (0, 1)]), v([(0, 1), (1, 1), (0, 1), (0, 1)]), v([(1, 2), (0, 1), (1, 2), (0, 1)]), v([(0, 1), (1, 2), (0, 1), (1, 2)])],
        ));
    }
    if p % 8 == 5 {
        return Ok((
            (-2, -pi),
            [v([(1, 1), (0, 1), (0, 1), (0, 1)]), v([(1, 2), (0, 1), (1, 2), (1, 2)]), v([(0, 1), (1, 4), (1, 2), (1, 4)]), v([(0, 1), (0, 1), (0, 1), (1, 1)])],
        ));
    }
    // p ≡ 1 mod 8: (−p, −q) with q ≡ 3 mod 4 and p a non-residue mod q
    let q = (3..)
        .step_by(4)
        .find(|&q: &u64| is_prime(q) && crate::exactnum::arith::kronecker(pi, q) == -1)
        .expect("a non-residue prime exists");
    let qi = q as i64;
    let c = (0..qi).find(|&c| (c * c * pi + 1) % qi == 0).expect("−1/p is a square mod q");
    Ok((
        (-pi, -qi),
        [v([(1, 2), (0, 1), (1, 2), (0, 1)]), v([(0, 1), (1, 2), (0, 1), (1, 2)]), v([(0, 1), (0, 1), (1, qi), (c, qi)]), v([(0, 1), (0, 1), (0, 1), (1, 1)])],
    ))
}

impl QuaternionOrder {
    pub fn new(n_minus: u64, n_plus: u64) -> Result<Self, QuatError> {
        if !is_prime(n_minus) {
            return Err(QuatError::NotAdmissible(n_minus));
        }
        if n_plus == 0 || !is_squarefree(n_plus) || n_plus.is_multiple_of(n_minus) {
            return Err(QuatError::BadLevel(n_plus));
        }
        let (alg, basis) = maximal_basis(n_minus)?;
        let inv = invert4(&basis).ok_or(QuatError::NotAnOrder)?;
        let coords = |x: &RatVec| -> Option<Vec4> {
            let mut c = [0i128; 4];
            for (j, cj) in c.iter_mut().enumerate() {
                let mut s = BigRational::zero();
                for i in 0..4 {
                    s += &x[i] * &inv[i][j];
                }
                *cj = to_int(&s)?;
            }
            Some(c)
        };
        let mut mult = [[[0; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                mult[a][b] = coords(&std_mul(alg.0, alg.1, &basis[a], &basis[b])).ok_or(QuatError::NotAnOrder)?;
            }
        }
        let mut conj = [[0; 4]; 4];
        let mut trace = [0; 4];
        for a in 0..4 {
            let e = &basis[a];
            let c: RatVec = [e[0].clone(), -&e[1], -&e[2], -&e[3]];
            conj[a] = coords(&c).ok_or(QuatError::NotAnOrder)?;
            trace[a] = to_int(&(&e[0] * BigRational::from_integer(2.into()))).ok_or(QuatError::NotAnOrder)?;
        }
        let one = coords(&[BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::zero()])
            .ok_or(QuatError::NotAnOrder)?;
        let mut o = QuaternionOrder {
            n_minus,
            n_plus,
            alg,
            mult,
            conj,
            trace,
            gram: [[0; 4]; 4],
            one,
            eichler: Lattice::standard(),
        };
        let mut gram = [[0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut ea = [0; 4];
                let mut eb = [0; 4];
                ea[a] = 1;
                eb[b] = 1;
                gram[a][b] = o.trd(&o.mul(&ea, &o.conj(&eb)));
            }
        }
        o.gram = gram;
        if o.discriminant(&Lattice::standard()) != Some(n_minus as i128) {
            return Err(QuatError::NotAnOrder);
        }
        for (ell, _) in factorize(n_plus) {
            o.eichler = o.refine_at(&o.eichler, ell as i128);
        }
        Ok(o)
    }

    /// Cut out the Borel at `ℓ`: `{y : εyε ≡ 0 mod ℓ}` for a nonzero nilpotent `ε`.
    fn refine_at(&self, lat: &Lattice, ell: i128) -> Lattice {
        let mut eps = None;
        'search: for c0 in 0..ell {
            for c1 in 0..ell {
                for c2 in 0..ell {
                    for c3 in 0..ell {
                        let e = [c0, c1, c2, c3];
                        if e == [0; 4] {
                            continue;
                        }
                        if self.trd(&e) % ell == 0 && self.nrd(&e) % ell == 0 {
                            eps = Some(e);
                            break 'search;
                        }
                    }
                }
            }
        }
        let eps = eps.expect("O_0/ℓ is a matrix algebra");
        let images = lat.rows().map(|r| self.mul(&self.mul(&eps, &r), &eps));
        lat.kernel_mod(&images, ell)
    }

    pub fn n_minus(&self) -> u64 {
        self.n_minus
    }

    pub fn n_plus(&self) -> u64 {
        self.n_plus
    }

    /// `(a, b)` with `i² = a`, `j² = b`.
    pub fn algebra(&self) -> (i64, i64) {
        self.alg
    }

    pub fn eichler(&self) -> &Lattice {
        &self.eichler
    }

    pub fn gram(&self) -> &Form4 {
        &self.gram
    }

    pub fn one(&self) -> Vec4 {
        self.one
    }

    pub fn scalar(&self, s: i128) -> Vec4 {
        self.one.map(|x| x * s)
    }

    pub fn mul(&self, x: &Vec4, y: &Vec4) -> Vec4 {
        let mut z = [0; 4];
        for a in 0..4 {
            if x[a] == 0 {
                continue;
            }
            for b in 0..4 {
                if y[b] == 0 {
                    continue;
                }
                let c = x[a] * y[b];
                for k in 0..4 {
                    z[k] += c * self.mult[a][b][k];
                }
            }
        }
        z
    }

    pub fn conj(&self, x: &Vec4) -> Vec4 {
        let mut z = [0; 4];
        for a in 0..4 {
            for k in 0..4 {
                z[k] += x[a] * self.conj[a][k];
            }
        }
        z
    }

    pub fn trd(&self, x: &Vec4) -> i128 {
        (0..4).map(|a| x[a] * self.trace[a]).sum()
    }

    pub fn nrd(&self, x: &Vec4) -> i128 {
        eval_form(&self.gram, x, x) / 2
    }

    pub fn mul_rat(&self, x: &RatQuat, y: &RatQuat) -> RatQuat {
        RatQuat::new(self.mul(&x.num, &y.num), x.den * y.den)
    }

    pub fn conj_rat(&self, x: &RatQuat) -> RatQuat {
        RatQuat::new(self.conj(&x.num), x.den)
    }

    pub fn trd_rat(&self, x: &RatQuat) -> BigRational {
        BigRational::new(self.trd(&x.num).into(), x.den.into())
    }

    pub fn nrd_rat(&self, x: &RatQuat) -> BigRational {
        BigRational::new(self.nrd(&x.num).into(), (x.den * x.den).into())
    }

    pub fn add_rat(&self, x: &RatQuat, y: &RatQuat) -> RatQuat {
        let mut n = [0; 4];
        for k in 0..4 {
            n[k] = x.num[k] * y.den + y.num[k] * x.den;
        }
        RatQuat::new(n, x.den * y.den)
    }

    /// `u + v·x`.
    pub fn affine(&self, u: i128, v: i128, x: &RatQuat) -> RatQuat {
        self.add_rat(&RatQuat::integral(self.scalar(u)), &RatQuat::new(x.num.map(|c| c * v), x.den))
    }

    /// Lattice spanned by all products `a·b`.
    pub fn product(&self, l: &Lattice, r: &Lattice) -> Lattice {
        let mut gens = Vec::with_capacity(16);
        for a in l.rows() {
            for b in r.rows() {
                gens.push(self.mul(a, b));
            }
        }
        Lattice::from_gens(&gens).expect("product of full lattices has full rank")
    }

    pub fn conj_lattice(&self, l: &Lattice) -> Lattice {
        Lattice::from_gens(&l.rows().map(|r| self.conj(&r))).expect("conjugation is invertible")
    }

    /// gcd of the reduced norms on `l`.
    pub fn norm_of(&self, l: &Lattice) -> i128 {
        let b = l.rows();
        let mut g = 0i128;
        for i in 0..4 {
            g = g.gcd(&self.nrd(&b[i]));
            for j in i + 1..4 {
                g = g.gcd(&eval_form(&self.gram, &b[i], &b[j]));
            }
        }
        g
    }

    /// Reduced discriminant of an order given as a lattice.
    pub fn discriminant(&self, l: &Lattice) -> Option<i128> {
        let b = l.rows();
        let mut m = [[0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = eval_form(&self.gram, &b[i], &b[j]);
            }
        }
        let d = det4(&m);
        let r = isqrt_i128(d);
        (r * r == d).then_some(r)
    }

    pub fn is_order(&self, l: &Lattice) -> bool {
        l.contains(&self.one) && l.rows().iter().all(|a| l.rows().iter().all(|b| l.contains(&self.mul(a, b))))
    }

    /// Smallest `d` with `d·x ∈ L/den`.
    pub fn conductor_in(&self, x: &RatQuat, lat: &Lattice, den: i128) -> Option<u64> {
        let y = x.num.map(|c| c * den);
        let det = lat.det();
        let mut ds: Vec<i128> = Vec::new();
        let bound = det * x.den;
        let mut d = 1;
        while d * d <= bound {
            if bound % d == 0 {
                ds.push(d);
                ds.push(bound / d);
            }
            d += 1;
        }
        let ds: BTreeSet<i128> = ds.into_iter().collect();
        for d in ds {
            let v = y.map(|c| c * d);
            if v.iter().all(|c| c % x.den == 0) && lat.contains(&v.map(|c| c / x.den)) {
                return u64::try_from(d).ok();
            }
        }
        None
    }
}

fn det4(m: &[[i128; 4]; 4]) -> i128 {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..4 {
        let Some(pr) = (col..4).find(|&r| !a[r][col].is_zero()) else { return 0 };
        if pr != col {
            a.swap(col, pr);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..4 {
            let f = &a[r][col] / &p;
            for k in col..4 {
                let t = &f * &a[col][k];
                a[r][k] -= t;
            }
        }
    }
    det.to_integer().to_i128().expect("small determinant")
}

fn isqrt_i128(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = Float::sqrt(n as f64) as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

