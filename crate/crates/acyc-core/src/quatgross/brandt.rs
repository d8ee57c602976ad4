//! Right ideal classes of an Eichler order and their Brandt matrices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice::{eval_form, short_vectors, Lattice, Vec4};
use super::{QuatError, QuaternionOrder, RatQuat};
use crate::exactnum::arith::{factorize, is_prime};

/// Number of norm-form coefficients compared before the exact isometry test.
pub const THETA_PRECISION: i128 = 50;

/// One right ideal class, with its left order `O_L(I) = I·Ī / nrd(I)`.
#[derive(Clone, Debug)]
pub struct IdealClass {
    ideal: Lattice,
    norm: i128,
    left: Lattice,
    units: Vec<RatQuat>,
    theta: Vec<u32>,
}

impl IdealClass {
    fn new(order: &QuaternionOrder, ideal: Lattice) -> Self {
        let norm = order.norm_of(&ideal);
        let left = order.product(&ideal, &order.conj_lattice(&ideal));
        let target = 2 * norm * norm;
        let mut units: Vec<RatQuat> = short_vectors(&left, order.gram(), target)
            .into_iter()
            .filter(|v| eval_form(order.gram(), v, v) == target)
            .map(|v| RatQuat::new(v, norm))
            .collect();
        units.sort();
        let mut theta = vec![0u32; THETA_PRECISION as usize + 1];
        for v in short_vectors(&ideal, order.gram(), 2 * norm * THETA_PRECISION) {
            let n = eval_form(order.gram(), &v, &v) / 2;
            if n % norm == 0 {
                theta[(n / norm) as usize] += 1;
            }
        }
        IdealClass { ideal, norm, left, units, theta }
    }

    pub fn ideal(&self) -> &Lattice {
        &self.ideal
    }

    pub fn norm(&self) -> i128 {
        self.norm
    }

    /// `(L, d)` with `O_L(I) = L/d`.
    pub fn left_order(&self) -> (&Lattice, i128) {
        (&self.left, self.norm)
    }

    pub fn units(&self) -> &[RatQuat] {
        &self.units
    }

    /// `w = |O_L(I)^×| / 2`.
    pub fn weight(&self) -> u64 {
        self.units.len() as u64 / 2
    }

    /// Representation numbers of `nrd/nrd(I)` up to [`THETA_PRECISION`].
    pub fn theta(&self) -> &[u32] {
        &self.theta
    }

    pub fn left_contains(&self, x: &RatQuat) -> bool {
        let v = x.num.map(|c| c * self.norm);
        v.iter().all(|c| c % x.den == 0) && self.left.contains(&v.map(|c| c / x.den))
    }
}

/// A `q`-neighbor `J` of a class representative together with its class and a
/// witness `z ∈ J·Ī_k` of norm `nrd(J)·nrd(I_k)`, so that `J = (z/nrd(I_k))·I_k`.
#[derive(Clone, Debug)]
pub struct Neighbor {
    pub ideal: Lattice,
    pub norm: i128,
    pub class: usize,
    pub witness: Vec4,
}

#[derive(Clone, Debug)]
pub struct BrandtSystem {
    order: QuaternionOrder,
    explore: u64,
    classes: Vec<IdealClass>,
    matrices: BTreeMap<u64, Vec<Vec<i64>>>,
}

fn smallest_good_prime(n: u64) -> u64 {
    (2..).find(|&q| is_prime(q) && !n.is_multiple_of(q)).expect("primes are infinite")
}

/// Class set by neighbor traversal from the Eichler order, plus `B(q)` for primes `q ≤ q_max`.
pub fn class_set_and_brandt(n_minus: u64, n_plus: u64, q_max: u64) -> Result<BrandtSystem, QuatError> {
    let order = QuaternionOrder::new(n_minus, n_plus)?;
    BrandtSystem::build(order, q_max)
}

impl BrandtSystem {
    pub fn build(order: QuaternionOrder, q_max: u64) -> Result<Self, QuatError> {
        let level = order.n_minus() * order.n_plus();
        let explore = smallest_good_prime(level);
        let mut sys = BrandtSystem {
            classes: vec![IdealClass::new(&order, order.eichler().clone())],
            order,
            explore,
            matrices: BTreeMap::new(),
        };
        let mut next = 0;
        while next < sys.classes.len() {
            let (base, norm) = (sys.classes[next].ideal.clone(), sys.classes[next].norm);
            for j in sys.raw_neighbors(&base, norm, explore)? {
                let nj = norm * explore as i128;
                if sys.identify_filtered(&j, nj).is_none() {
                    sys.classes.push(IdealClass::new(&sys.order, j));
                }
            }
            next += 1;
        }
        let (found, expected) = (sys.mass(), sys.expected_mass());
        if found != expected {
            return Err(QuatError::MassMismatch { found, expected });
        }
        for q in (2..=q_max).filter(|&q| is_prime(q) && !level.is_multiple_of(q)) {
            let m = sys.compute_matrix(q)?;
            sys.matrices.insert(q, m);
        }
        Ok(sys)
    }

    pub fn order(&self) -> &QuaternionOrder {
        &self.order
    }

    pub fn classes(&self) -> &[IdealClass] {
        &self.classes
    }

    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    /// Prime used for the class-set traversal.
    pub fn exploration_prime(&self) -> u64 {
        self.explore
    }

    pub fn weights(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.weight()).collect()
    }

    /// `Σ 1/|O_i^×|`.
    pub fn mass(&self) -> BigRational {
        self.classes
            .iter()
            .map(|c| BigRational::new(BigInt::one(), BigInt::from(c.units.len())))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `(1/24)·∏_{ℓ|N^-}(ℓ−1)·∏_{ℓ|N^+}(ℓ+1)`.
    pub fn expected_mass(&self) -> BigRational {
        let mut num = BigInt::one();
        for (l, _) in factorize(self.order.n_minus()) {
            num *= l - 1;
        }
        for (l, _) in factorize(self.order.n_plus()) {
            num *= l + 1;
        }
        BigRational::new(num, BigInt::from(24))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.matrices.keys().copied()
    }

    /// `B(q)_{ij}` = number of `q`-neighbors of `I_i` in the class of `I_j`.
    pub fn brandt_matrix(&self, q: u64) -> Option<&Vec<Vec<i64>>> {
        self.matrices.get(&q)
    }

    pub fn compute_matrix(&self, q: u64) -> Result<Vec<Vec<i64>>, QuatError> {
        let h = self.classes.len();
        let mut m = vec![vec![0i64; h]; h];
        for (i, row) in m.iter_mut().enumerate() {
            for nb in self.neighbors(i, q)? {
                row[nb.class] += 1;
            }
        }
        Ok(m)
    }

    /// The `q+1` neighbors of `I_i`, each identified with a class representative.
    pub fn neighbors(&self, i: usize, q: u64) -> Result<Vec<Neighbor>, QuatError> {
        let c = &self.classes[i];
        let norm = c.norm * q as i128;
        self.raw_neighbors(&c.ideal, c.norm, q)?
            .into_iter()
            .map(|j| {
                let (class, witness) = self.identify(&j, norm).ok_or(QuatError::Unidentified)?;
                Ok(Neighbor { ideal: j, norm, class, witness })
            })
            .collect()
    }

    fn raw_neighbors(&self, ideal: &Lattice, norm: i128, q: u64) -> Result<Vec<Lattice>, QuatError> {
        let level = self.order.n_minus() * self.order.n_plus();
        if !is_prime(q) || level.is_multiple_of(q) {
            return Err(QuatError::BadPrime(q));
        }
        let qi = q as i128;
        let scaled: Vec<Vec4> = ideal.rows().iter().map(|r| r.map(|x| x * qi)).collect();
        let target = ideal.det() * qi * qi;
        let mut seen = BTreeSet::new();
        let mut c = [0i128; 4];
        for lead in 0..4 {
            // representatives of lines: first nonzero coordinate equal to 1
            let free = 3 - lead;
            for code in 0..qi.pow(free as u32) {
                c.fill(0);
                c[lead] = 1;
                let mut t = code;
                for k in lead + 1..4 {
                    c[k] = t % qi;
                    t /= qi;
                }
                let x = ideal.combine(&c);
                if self.order.nrd(&x) % (norm * qi) != 0 {
                    continue;
                }
                let mut gens = scaled.clone();
                for o in self.order.eichler().rows() {
                    gens.push(self.order.mul(&x, o));
                }
                let j = Lattice::from_gens(&gens).expect("contains qI");
                if j.det() == target {
                    seen.insert(j);
                }
            }
        }
        if seen.len() != q as usize + 1 {
            return Err(QuatError::NeighborCount { q, found: seen.len(), expected: q as usize + 1 });
        }
        Ok(seen.into_iter().collect())
    }

    /// Class of a right ideal `J` of norm `nj`, with the witness of [`Neighbor`].
    pub fn identify(&self, j: &Lattice, nj: i128) -> Option<(usize, Vec4)> {
        self.classes.iter().enumerate().find_map(|(k, c)| self.isomorphism(c, j, nj).map(|z| (k, z)))
    }

    /// Same as [`BrandtSystem::identify`], comparing norm-form theta series first.
    pub fn identify_filtered(&self, j: &Lattice, nj: i128) -> Option<(usize, Vec4)> {
        let probe = IdealClass::new(&self.order, j.clone());
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.theta == probe.theta)
            .find_map(|(k, c)| self.isomorphism(c, j, nj).map(|z| (k, z)))
    }

    fn isomorphism(&self, c: &IdealClass, j: &Lattice, nj: i128) -> Option<Vec4> {
        let l = self.order.product(j, &self.order.conj_lattice(&c.ideal));
        let target = 2 * nj * c.norm;
        let g = self.order.gram();
        short_vectors(&l, g, target).into_iter().filter(|v| eval_form(g, v, v) == target).min()
    }

    /// The constant function, an eigenvector of every `B(q)` with eigenvalue `q + 1`.
    pub fn eisenstein(&self) -> Vec<BigRational> {
        vec![BigRational::one(); self.classes.len()]
    }

    /// Joint eigenvector of `B(q)` with eigenvalues `a_q` for every tabulated `q ∤ exclude`,
    /// normalized so that its first nonzero coordinate divided by `w_i` is `1`.
    pub fn eigenvector(&self, a: &BTreeMap<u64, i64>, exclude: u64) -> Result<Vec<BigRational>, QuatError> {
        let h = self.classes.len();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (&q, m) in &self.matrices {
            if exclude.is_multiple_of(q) {
                continue;
            }
            let Some(&aq) = a.get(&q) else { continue };
            for (i, r) in m.iter().enumerate() {
                rows.push(
                    (0..h)
                        .map(|j| BigRational::from_integer(BigInt::from(r[j] - if i == j { aq } else { 0 })))
                        .collect(),
                );
            }
        }
        let kernel = nullspace(rows, h);
        match kernel.len() {
            0 => Err(QuatError::NoEigenvector),
            1 => {
                let mut v = kernel.into_iter().next().expect("one vector");
                let w = self.weights();
                let i = v.iter().position(|x| !x.is_zero()).expect("nonzero kernel vector");
                let s = BigRational::from_integer(BigInt::from(w[i])) / &v[i];
                for x in v.iter_mut() {
                    *x = &*x * &s;
                }
                Ok(v)
            }
            d => Err(QuatError::AmbiguousEigenspace(d)),
        }
    }
}

/// Clear denominators and common factors; the first nonzero entry becomes positive.
pub fn primitive_integral(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(BigInt::one);
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

fn nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, pr);
        let p = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &p;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for k in 0..n {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}
