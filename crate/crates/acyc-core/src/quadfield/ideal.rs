//! Ideals as Hermite-normal-form lattices in `O_K` coordinates.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;

use super::{narrow, QuadError, QuadField, QuadInt, QuadOrder};
use crate::exactnum::arith::{factorize, sqrt_mod};

/// Integral ideal of an order `O_f`, stored as the lattice `Z·(a,0) + Z·(b,c)`
/// with `a, c > 0` and `0 ≤ b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    order: QuadOrder,
    a: i64,
    b: i64,
    c: i64,
    norm: u64,
}

impl PartialOrd for QuadIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, self.norm, self.a, self.b, self.c).cmp(&(other.order, other.norm, other.a, other.b, other.c))
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", QuadInt::new(self.a, 0), QuadInt::new(self.b, self.c))
    }
}

/// HNF of the lattice spanned by `vs` (must have rank 2).
fn hnf(vs: &[(i128, i128)]) -> (i128, i128, i128) {
    let mut vs: Vec<(i128, i128)> = vs.iter().copied().filter(|&(u, v)| u != 0 || v != 0).collect();
    // Euclid on the second coordinate
    loop {
        let nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].1 != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| vs[i].1.abs()).unwrap();
        let (pu, pv) = vs[piv];
        for &i in &nz {
            if i != piv {
                let q = vs[i].1.div_floor(&pv);
                vs[i].0 -= q * pu;
                vs[i].1 -= q * pv;
            }
        }
    }
    let piv = (0..vs.len()).find(|&i| vs[i].1 != 0).expect("lattice of rank 2");
    let (mut b, mut c) = vs[piv];
    if c < 0 {
        b = -b;
        c = -c;
    }
    let a = vs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != piv)
        .fold(0i128, |g, (_, &(u, _))| g.gcd(&u));
    assert!(a != 0, "lattice of rank 2");
    (a, b.mod_floor(&a), c)
}

impl QuadIdeal {
    fn from_lattice(order: QuadOrder, vs: &[(i128, i128)]) -> QuadIdeal {
        let (a, b, c) = hnf(vs);
        let norm = (a * c) as u64 / order.conductor();
        QuadIdeal { order, a: narrow(a), b: narrow(b), c: narrow(c), norm }
    }

    pub fn unit(order: QuadOrder) -> QuadIdeal {
        QuadIdeal { order, a: 1, b: 0, c: order.conductor() as i64, norm: 1 }
    }

    /// Ideal of `order` generated by `gens` (each must lie in the order).
    pub fn from_gens(order: QuadOrder, gens: &[QuadInt]) -> QuadIdeal {
        let k = order.field();
        let fw = QuadInt::new(0, order.conductor() as i64);
        let mut vs = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            debug_assert!(order.contains(g));
            let h = k.mul(g, fw);
            vs.push((g.u as i128, g.v as i128));
            vs.push((h.u as i128, h.v as i128));
        }
        Self::from_lattice(order, &vs)
    }

    pub fn principal(order: QuadOrder, g: QuadInt) -> QuadIdeal {
        Self::from_gens(order, &[g])
    }

    /// Lattice with basis `(a,0), (b,c)` in `O_K` coordinates, reduced to HNF.
    pub fn from_basis(order: QuadOrder, a: i64, b: i64, c: i64) -> QuadIdeal {
        Self::from_lattice(order, &[(a as i128, 0), (b as i128, c as i128)])
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    pub fn field(&self) -> QuadField {
        self.order.field()
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// Hermite basis `(a, b, c)`.
    pub fn hnf(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn basis(&self) -> [QuadInt; 2] {
        [QuadInt::new(self.a, 0), QuadInt::new(self.b, self.c)]
    }

    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }

    pub fn contains(&self, x: QuadInt) -> bool {
        if x.v % self.c != 0 {
            return false;
        }
        let j = x.v / self.c;
        (x.u as i128 - j as i128 * self.b as i128) % self.a as i128 == 0
    }

    /// Containment of ideals: `self ⊆ other`.
    pub fn is_contained_in(&self, other: &QuadIdeal) -> bool {
        self.basis().iter().all(|&x| other.contains(x))
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<QuadIdeal, QuadError> {
        if self.order != other.order {
            return Err(QuadError::MixedOrders);
        }
        let k = self.field();
        let mut vs = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                let z = k.mul(x, y);
                vs.push((z.u as i128, z.v as i128));
            }
        }
        Ok(Self::from_lattice(self.order, &vs))
    }

    pub fn pow(&self, e: u32) -> QuadIdeal {
        let mut acc = QuadIdeal::unit(self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    pub fn add(&self, other: &QuadIdeal) -> Result<QuadIdeal, QuadError> {
        if self.order != other.order {
            return Err(QuadError::MixedOrders);
        }
        let vs: Vec<(i128, i128)> = self
            .basis()
            .iter()
            .chain(other.basis().iter())
            .map(|x| (x.u as i128, x.v as i128))
            .collect();
        Ok(Self::from_lattice(self.order, &vs))
    }

    pub fn is_coprime_to(&self, other: &QuadIdeal) -> bool {
        self.add(other).map(|s| s.is_unit()).unwrap_or(false)
    }

    /// Complex conjugate ideal.
    pub fn conj(&self) -> QuadIdeal {
        let k = self.field();
        let vs: Vec<(i128, i128)> = self
            .basis()
            .iter()
            .map(|&x| {
                let y = k.conj(x);
                (y.u as i128, y.v as i128)
            })
            .collect();
        Self::from_lattice(self.order, &vs)
    }

    /// `I ∩ O_g` for an ideal of `O_K` (or of `O_f`, `f | g`) coprime to `g`.
    pub fn restrict(&self, g: u64) -> Result<QuadIdeal, QuadError> {
        let f = self.order.conductor();
        if !g.is_multiple_of(f) {
            return Err(QuadError::MixedOrders);
        }
        if self.norm.gcd(&g) != 1 {
            return Err(QuadError::NotInvertible(g));
        }
        let target = self.field().order(g)?;
        let step = g as i64 / (self.c.gcd(&(g as i64)));
        Ok(Self::from_basis(target, self.a, self.b * step, self.c * step))
    }

    /// `I·O_K`.
    pub fn extend(&self) -> QuadIdeal {
        let k = self.field();
        let ok = k.maximal_order();
        let gens: Vec<QuadInt> = self.basis().to_vec();
        QuadIdeal::from_gens(ok, &gens)
    }

    /// Generator when the ideal is principal in its order.
    pub fn generator(&self) -> Option<QuadInt> {
        let k = self.field();
        let mut b1 = QuadInt::new(self.a, 0);
        let mut b2 = QuadInt::new(self.b, self.c);
        loop {
            if k.norm(b2) < k.norm(b1) {
                core::mem::swap(&mut b1, &mut b2);
            }
            let n1 = k.norm(b1);
            let t = k.trace(k.mul(b1, k.conj(b2))) as i128;
            let mu = narrow((t + n1).div_floor(&(2 * n1)));
            if mu == 0 {
                break;
            }
            b2 = k.sub(b2, k.scale(b1, mu));
        }
        if k.norm(b1) == self.norm as i128 {
            Some(b1)
        } else {
            None
        }
    }

    /// Canonical residue of `x` modulo the ideal (`0 ≤ v < c`, `0 ≤ u < a`).
    pub fn reduce(&self, x: QuadInt) -> QuadInt {
        let j = x.v.div_floor(&self.c);
        let v = x.v - j * self.c;
        let u = (x.u as i128 - j as i128 * self.b as i128).mod_floor(&(self.a as i128));
        QuadInt::new(u as i64, v)
    }

    /// Complete residue system of `O_K` (or `O_f`) modulo the ideal.
    pub fn residues(&self) -> Vec<QuadInt> {
        let f = self.order.conductor() as i64;
        let mut out = Vec::with_capacity(self.norm as usize);
        let mut v = 0;
        while v < self.c {
            for u in 0..self.a {
                out.push(QuadInt::new(u, v));
            }
            v += f;
        }
        out
    }

    /// Prime ideals of `O_K` dividing the extension of this ideal, sorted.
    pub fn prime_divisors(&self) -> Vec<QuadIdeal> {
        let ext = self.extend();
        let mut out = Vec::new();
        for (q, _) in factorize(ext.norm) {
            for p in primes_above(self.field(), q) {
                if ext.is_contained_in(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Exponent of the prime `p` (of `O_K`) in this `O_K`-ideal.
    pub fn valuation_at(&self, p: &QuadIdeal) -> u32 {
        let mut cur = self.clone();
        let mut k = 0;
        while cur.is_contained_in(p) && !cur.is_unit() {
            // cur·p̄/N(p) = cur·p^{-1}
            let t = cur.mul(&p.conj()).expect("same order");
            let n = p.norm as i128;
            let vs: Vec<(i128, i128)> = t.basis().iter().map(|x| (x.u as i128 / n, x.v as i128 / n)).collect();
            cur = Self::from_lattice(cur.order, &vs);
            k += 1;
        }
        k
    }
}

/// Prime ideals of `O_K` above `q`, lexicographically smallest Hermite basis first.
pub(crate) fn primes_above(k: QuadField, q: u64) -> Vec<QuadIdeal> {
    let ok = k.maximal_order();
    let d = k.disc() as i128;
    let qq = q as i128;
    // roots of x² − disc·x + (disc² − disc)/4 mod q
    let n0 = (d * d - d) / 4;
    let roots: Vec<i64> = if q == 2 {
        (0..2).filter(|&r| (r * r - d * r + n0).rem_euclid(2) == 0).map(|r| r as i64).collect()
    } else {
        let disc_mod = d.rem_euclid(qq) as u64;
        match sqrt_mod(disc_mod, q) {
            None => Vec::new(),
            Some(s) => {
                let inv2 = (qq + 1) / 2;
                let mut rs: Vec<i64> = [s as i128, -(s as i128)]
                    .iter()
                    .map(|&sv| (((d + sv) * inv2).rem_euclid(qq)) as i64)
                    .collect();
                rs.dedup();
                rs
            }
        }
    };
    if roots.is_empty() {
        return vec![QuadIdeal::principal(ok, QuadInt::int(q as i64))];
    }
    // (q, ω − r) has Hermite basis (q, 0), (−r mod q, 1)
    let mut ps: Vec<QuadIdeal> = roots
        .iter()
        .map(|&r| QuadIdeal::from_basis(ok, q as i64, -r, 1))
        .collect();
    ps.sort_by_key(|p| p.hnf());
    ps.dedup();
    ps
}

/// All ideals of `order` of norm `n` coprime to the conductor and to `modulus`.
pub fn ideals_of_norm(order: QuadOrder, n: u64, modulus: Option<&QuadIdeal>) -> Vec<QuadIdeal> {
    let k = order.field();
    let f = order.conductor();
    if n == 0 || n.gcd(&f) != 1 {
        return Vec::new();
    }
    let bad: Vec<QuadIdeal> = modulus.map(|m| m.prime_divisors()).unwrap_or_default();
    let ok = k.maximal_order();
    let mut acc = vec![QuadIdeal::unit(ok)];
    for (q, e) in factorize(n) {
        let ps: Vec<QuadIdeal> = primes_above(k, q).into_iter().filter(|p| !bad.contains(p)).collect();
        let mut local = Vec::new();
        match ps.len() {
            2 if ps[0].norm == q => {
                for i in 0..=e {
                    local.push(ps[0].pow(i).mul(&ps[1].pow(e - i)).expect("same order"));
                }
            }
            1 if ps[0].norm == q => local.push(ps[0].pow(e)),
            1 if e % 2 == 0 => local.push(ps[0].pow(e / 2)),
            _ => {}
        }
        if local.is_empty() {
            return Vec::new();
        }
        acc = acc
            .iter()
            .flat_map(|x| local.iter().map(move |y| x.mul(y).expect("same order")))
            .collect();
    }
    let mut out: Vec<QuadIdeal> = acc
        .into_iter()
        .map(|i| if f == 1 { i } else { i.restrict(f).expect("coprime to conductor") })
        .collect();
    out.sort();
    out
}
