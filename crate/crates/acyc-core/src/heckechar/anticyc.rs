//! Anticyclotomic characters: the tame/wild splitting and the search for `γ` with `γ/γ^𝐜 = χ_t`.

use alloc::vec::Vec;

use alloc::collections::BTreeSet;

use super::HeckeError;
use crate::classfield::{ClassEval, RayClassGroup, RingClassGroup};
use crate::exactnum::abelian::{Character, FiniteAbelianGroup, GroupElem};
use crate::exactnum::arith::{mod_inv, primes_up_to};
use crate::quadfield::{QuadField, QuadIdeal};

/// `𝒢_n = Pic(O_{cp^n})` with the fixed splitting `𝒢_n ≅ Δ × Γ_n`.
///
/// `Γ_n` is the `p`-part of the Smith factor with the largest `p`-power order (the
/// last one on ties); `Δ` collects every other factor together with the prime-to-`p`
/// part of that one.
#[derive(Clone, Debug)]
pub struct AnticycTower {
    p: u64,
    c: u64,
    level: u32,
    ring: RingClassGroup,
    wild_index: Option<usize>,
    wild_order: u64,
    delta_orders: Vec<u64>,
}

/// `χ = (χ_t, χ^-)`: exponents on the cyclic factors of `Δ` and on the generator of `Γ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticycSplit {
    pub tame: Vec<i64>,
    pub wild: i64,
}

impl AnticycTower {
    pub fn new(field: QuadField, p: u64, c: u64, level: u32) -> Result<Self, HeckeError> {
        let ring = RingClassGroup::new(field, c * p.pow(level), None)?;
        let inv = ring.group().invariants().to_vec();
        let ppart = |d: u64| {
            let mut q = 1;
            let mut d = d;
            while d.is_multiple_of(p) {
                d /= p;
                q *= p;
            }
            q
        };
        let mut wild_index = None;
        let mut wild_order = 1;
        for (i, &d) in inv.iter().enumerate() {
            if ppart(d) > 1 && ppart(d) >= wild_order {
                wild_order = ppart(d);
                wild_index = Some(i);
            }
        }
        let mut delta_orders: Vec<u64> =
            inv.iter().enumerate().filter(|(i, _)| Some(*i) != wild_index).map(|(_, &d)| d).collect();
        if let Some(i) = wild_index {
            delta_orders.push(inv[i] / wild_order);
        }
        Ok(AnticycTower { p, c, level, ring, wild_index, wild_order, delta_orders })
    }

    pub fn ring(&self) -> &RingClassGroup {
        &self.ring
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.ring.group()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn tame_conductor(&self) -> u64 {
        self.c
    }

    /// `|Γ_n|`.
    pub fn wild_order(&self) -> u64 {
        self.wild_order
    }

    /// Orders of the cyclic factors of `Δ`.
    pub fn delta_orders(&self) -> &[u64] {
        &self.delta_orders
    }

    /// The generator of `Γ_n` inside `𝒢_n`.
    pub fn wild_generator(&self) -> GroupElem {
        let g = self.group();
        let mut e = g.identity();
        if let Some(i) = self.wild_index {
            e[i] = (g.invariants()[i] / self.wild_order) as i64;
        }
        e
    }

    pub fn split(&self, chi: &Character) -> AnticycSplit {
        let x = chi.exps();
        let mut tame = Vec::with_capacity(self.delta_orders.len());
        for (i, &xi) in x.iter().enumerate() {
            if Some(i) != self.wild_index {
                tame.push(xi);
            }
        }
        let mut wild = 0;
        if let Some(i) = self.wild_index {
            let u = self.delta_orders[self.delta_orders.len() - 1];
            tame.push(x[i].rem_euclid(u as i64));
            wild = x[i].rem_euclid(self.wild_order as i64);
        }
        AnticycSplit { tame, wild }
    }

    pub fn recombine(&self, s: &AnticycSplit) -> Character {
        let g = self.group();
        let mut exps = Vec::with_capacity(g.rank());
        let mut t = s.tame.iter();
        for i in 0..g.rank() {
            if Some(i) == self.wild_index {
                continue;
            }
            exps.push(*t.next().expect("tame factor"));
        }
        if let Some(i) = self.wild_index {
            let u = self.delta_orders[self.delta_orders.len() - 1] as i64;
            let q = self.wild_order as i64;
            let tu = s.tame[s.tame.len() - 1].rem_euclid(u);
            // CRT: x ≡ wild mod q, x ≡ tu mod u
            let x = if u == 1 {
                s.wild.rem_euclid(q)
            } else {
                let k = ((tu - s.wild) * mod_inv(q, u).expect("coprime")).rem_euclid(u);
                s.wild.rem_euclid(q) + q * k
            };
            exps.insert(i, x);
        }
        Character::new(g, &exps)
    }

    /// Character of `𝒢_n` matching `f(𝔮) = ζ_m^t` on small prime ideals `𝔮` prime to the conductor.
    pub fn character_from_ideals<F>(&self, f: F) -> Result<Character, HeckeError>
    where
        F: Fn(&QuadIdeal) -> Result<(u64, i64), HeckeError>,
    {
        let field = self.ring.field();
        let cond = self.ring.conductor() * field.d_k();
        let g = self.group().clone();
        let mut span: BTreeSet<GroupElem> = BTreeSet::new();
        span.insert(g.identity());
        let mut samples = Vec::new();
        for q in primes_up_to(5000) {
            if cond.is_multiple_of(q) {
                continue;
            }
            for pr in field.splitting(q)?.primes() {
                let cls = self.ring.eval(&pr)?;
                samples.push((cls.clone(), f(&pr)?));
                if !span.contains(&cls) {
                    let mut frontier: Vec<GroupElem> = span.iter().cloned().collect();
                    while let Some(x) = frontier.pop() {
                        let y = g.op(&x, &cls);
                        if span.insert(y.clone()) {
                            frontier.push(y);
                        }
                    }
                }
            }
            if span.len() as u64 == g.order() && samples.len() >= 12 {
                break;
            }
        }
        for chi in Character::all(&g) {
            let e = g.exponent() as i128;
            let ok = samples.iter().all(|(cls, (m, t))| {
                let a = chi.value_exp(cls) as i128 * *m as i128;
                let b = *t as i128 * e;
                (a - b).rem_euclid(e * *m as i128) == 0
            });
            if ok {
                return Ok(chi);
            }
        }
        Err(HeckeError::NotAnticyclotomic)
    }
}

/// A ray class character `γ` of modulus `c·O_K` with `γ/γ^𝐜 = χ_t` on `Pic(O_c)`, or `None`.
pub fn find_gamma(field: QuadField, c: u64, chi_t: &Character) -> Result<Option<Character>, HeckeError> {
    let ray = RayClassGroup::of_integer(field, c, None)?;
    let ring = RingClassGroup::new(field, c, None)?;
    if chi_t.group() != ring.group() {
        return Err(HeckeError::NotAnticyclotomic);
    }
    let to_ring = ray.hom_to(&ring)?;
    let conj = ray.hom_via(&ray, |i| i.conj())?;
    let target = chi_t.pullback(&to_ring);
    for gamma in Character::all(ray.group()) {
        if gamma.mul(&gamma.pullback(&conj).inv()) == target {
            return Ok(Some(gamma));
        }
    }
    Ok(None)
}
