//! Ray and ring class groups of imaginary quadratic fields, their maximal
//! `p`-quotients, and the maps between them.

pub mod sigma;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::exactnum::abelian::{DiscreteLog, FiniteAbelianGroup, GroupElem, GroupHom, Presentation};
use crate::exactnum::arith::primes_up_to;
use crate::exactnum::ExactError;
use crate::quadfield::forms::compose;
use crate::quadfield::{class_group, BinaryForm, ClassGroup, QuadError, QuadField, QuadIdeal, QuadInt};

pub use sigma::SigmaMaps;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassFieldError {
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,
    #[error("p = {p} divides the class number {h}")]
    PDividesClassNumber { p: u64, h: u64 },
    #[error("p = {0} is too small (need p ≥ 5)")]
    SmallPrime(u64),
    #[error("{0} is not a product of primes split in K")]
    NotSplitOnly(u64),
    #[error("{0} is not coprime to p·D_K")]
    BadLevel(u64),
    #[error("no small prime ideals generate the class group")]
    NoClassGenerators,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Anything that assigns group elements to ideal classes.
pub trait ClassEval {
    fn group(&self) -> &FiniteAbelianGroup;
    fn eval(&self, ideal: &QuadIdeal) -> Result<GroupElem, ClassFieldError>;
}

/// Maximal `p`-quotient data: prime, quotient, kept Smith indices.
#[derive(Clone, Debug)]
struct PQuotient {
    group: FiniteAbelianGroup,
    kept: Vec<u64>,
}

fn p_quotient(full: &FiniteAbelianGroup, p: Option<u64>) -> Option<PQuotient> {
    p.map(|p| {
        let (group, kept) = full.p_part(p);
        PQuotient { group, kept }
    })
}

/// Ray class group `Cl_𝔪` of `O_K`, optionally reduced to its maximal `p`-quotient.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    field: QuadField,
    modulus: QuadIdeal,
    bad_primes: Vec<QuadIdeal>,
    units: DiscreteLog<QuadInt>,
    class_dlog: DiscreteLog<BinaryForm>,
    class_gens: Vec<QuadIdeal>,
    pres: Presentation,
    gen_ideals: Vec<QuadIdeal>,
    quotient: Option<PQuotient>,
}

impl RayClassGroup {
    pub fn new(field: QuadField, modulus: &QuadIdeal, p: Option<u64>) -> Result<Self, ClassFieldError> {
        let ok = field.maximal_order();
        let modulus = if modulus.order() == ok { modulus.clone() } else { modulus.extend() };
        let bad_primes = modulus.prime_divisors();
        let is_unit = |x: QuadInt| !bad_primes.iter().any(|p| p.contains(x));
        let m = modulus.clone();
        let residues: Vec<QuadInt> = modulus.residues().into_iter().filter(|&x| is_unit(x)).collect();
        let n_units = residues.len();
        let units = DiscreteLog::build(m.reduce(QuadInt::int(1)), residues, n_units, |a, b| m.reduce(field.mul(*a, *b)))?;

        // class group generated by small primes coprime to the modulus
        let cg = class_group(ok)?;
        let h = cg.class_number() as usize;
        let disc = ok.disc();
        let mut cand_ideal: BTreeMap<BinaryForm, QuadIdeal> = BTreeMap::new();
        let mut cands = Vec::new();
        for q in primes_up_to(20_000) {
            if cands.len() > 4 * h + 8 {
                break;
            }
            // 𝔤̄ must be prime to the modulus too
            if field.kronecker(q) == -1 || modulus.norm() % q == 0 {
                continue;
            }
            for pr in field.splitting(q)?.primes() {
                let f = BinaryForm::from_ideal(&pr)?.reduce();
                cand_ideal.entry(f).or_insert(pr);
                cands.push(f);
            }
        }
        let class_dlog = DiscreteLog::build(BinaryForm::principal(disc), cands, h, |a, b| compose(ok, a, b))
            .map_err(|_| ClassFieldError::NoClassGenerators)?;
        let class_gens: Vec<QuadIdeal> = class_dlog.gens.iter().map(|f| cand_ideal[f].clone()).collect();

        let t = units.gens.len();
        let s = class_gens.len();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for r in &units.relations {
            let mut row = r.clone();
            row.resize(t + s, 0);
            rows.push(row);
        }
        for u in field.units() {
            let mut row = units.log_gens(&m.reduce(u)).expect("unit residue").clone();
            row.resize(t + s, 0);
            rows.push(row);
        }
        let log_res = |x: QuadInt| -> Vec<i64> { units.log_gens(&m.reduce(x)).expect("coprime residue").clone() };
        for (j, rel) in class_dlog.relations.iter().enumerate() {
            // 𝔤_j^{e_j} Π 𝔤̄_i^{c_i} = (β)
            let mut jid = class_gens[j].pow(rel[j] as u32);
            let mut unit_part = vec![0i64; t];
            for i in 0..j {
                let c = -rel[i];
                if c == 0 {
                    continue;
                }
                jid = jid.mul(&class_gens[i].conj().pow(c as u32))?;
                let ln = log_res(QuadInt::int(class_gens[i].norm() as i64));
                for (x, y) in unit_part.iter_mut().zip(ln) {
                    *x += c * y;
                }
            }
            let beta = jid.generator().ok_or(QuadError::NotPrincipal)?;
            for (x, y) in unit_part.iter_mut().zip(log_res(beta)) {
                *x -= y;
            }
            let mut row = unit_part;
            row.extend(rel.iter().copied());
            row.resize(t + s, 0);
            rows.push(row);
        }
        let pres = Presentation::from_relations(t + s, &rows)?;
        let mut gen_ideals: Vec<QuadIdeal> = units.gens.iter().map(|&a| QuadIdeal::principal(ok, a)).collect();
        gen_ideals.extend(class_gens.iter().cloned());
        let quotient = p_quotient(&pres.group, p);
        Ok(RayClassGroup { field, modulus, bad_primes, units, class_dlog, class_gens, pres, gen_ideals, quotient })
    }

    /// Ray class group modulo `n·O_K`.
    pub fn of_integer(field: QuadField, n: u64, p: Option<u64>) -> Result<Self, ClassFieldError> {
        let m = QuadIdeal::principal(field.maximal_order(), QuadInt::int(n as i64));
        Self::new(field, &m, p)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    /// Full ray class group (before any `p`-quotient).
    pub fn full_group(&self) -> &FiniteAbelianGroup {
        &self.pres.group
    }

    /// `(O/𝔪)^×` as computed.
    pub fn unit_group(&self) -> &FiniteAbelianGroup {
        self.units.group()
    }

    /// Smith coordinates of `x mod 𝔪` in `(O/𝔪)^×`, if `x` is a unit there.
    pub fn unit_log(&self, x: QuadInt) -> Option<GroupElem> {
        self.units.log(&self.modulus.reduce(x))
    }

    /// Representatives in `O_K` of the Smith generators of `(O/𝔪)^×`.
    pub fn unit_generators(&self) -> Vec<QuadInt> {
        let g = self.units.group();
        (0..g.rank())
            .map(|k| {
                let word = self.units.presentation.snf_generator_in_gens(k);
                word.iter().zip(self.units.gens.iter()).fold(QuadInt::int(1), |acc, (&e, &x)| {
                    let e = e.rem_euclid(g.exponent() as i64) as u32;
                    self.modulus.reduce(self.field.mul(acc, self.field.pow(x, e)))
                })
            })
            .collect()
    }

    /// `h_K`.
    pub fn class_number(&self) -> u64 {
        self.class_dlog.group().order()
    }

    pub fn is_coprime(&self, ideal: &QuadIdeal) -> bool {
        let e = if ideal.order().conductor() == 1 { ideal.clone() } else { ideal.extend() };
        !self.bad_primes.iter().any(|p| e.is_contained_in(p))
    }

    /// Class in the full ray class group.
    pub fn eval_full(&self, ideal: &QuadIdeal) -> Result<GroupElem, ClassFieldError> {
        if !self.is_coprime(ideal) {
            return Err(ClassFieldError::NotCoprime);
        }
        let ideal = if ideal.order().conductor() == 1 { ideal.clone() } else { ideal.extend() };
        let form = BinaryForm::from_ideal(&ideal)?.reduce();
        let k = self.class_dlog.log_gens(&form).expect("tabulated class").clone();
        let mut j = ideal;
        let t = self.units.gens.len();
        let mut exps = vec![0i64; t + k.len()];
        let log_res = |x: QuadInt| self.units.log_gens(&self.modulus.reduce(x)).expect("coprime residue").clone();
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            j = j.mul(&self.class_gens[i].conj().pow(ki as u32))?;
            for (x, y) in exps.iter_mut().zip(log_res(QuadInt::int(self.class_gens[i].norm() as i64))) {
                *x -= ki * y;
            }
            exps[t + i] += ki;
        }
        let gamma = j.generator().ok_or(QuadError::NotPrincipal)?;
        for (x, y) in exps.iter_mut().zip(log_res(gamma)) {
            *x += y;
        }
        Ok(self.pres.coords(&exps))
    }

    fn project(&self, x: GroupElem) -> GroupElem {
        match &self.quotient {
            Some(q) => self.pres.group.project_p(&q.group, &q.kept, &x),
            None => x,
        }
    }

    /// Representative ideals and exponents for the `k`-th Smith generator of [`ClassEval::group`].
    pub fn generator_word(&self, k: usize) -> Vec<(QuadIdeal, i64)> {
        let full_idx = match &self.quotient {
            Some(q) => q.kept[k] as usize,
            None => k,
        };
        self.pres
            .snf_generator_in_gens(full_idx)
            .into_iter()
            .zip(self.gen_ideals.iter())
            .filter(|(e, _)| *e != 0)
            .map(|(e, i)| (i.clone(), e))
            .collect()
    }

    /// Homomorphism `self → dst` induced by `𝔞 ↦ f(𝔞)` on ideals.
    pub fn hom_via<F>(&self, dst: &dyn ClassEval, f: F) -> Result<GroupHom, ClassFieldError>
    where
        F: Fn(&QuadIdeal) -> QuadIdeal,
    {
        let g = self.group().clone();
        let mut images = Vec::with_capacity(g.rank());
        for k in 0..g.rank() {
            let mut acc = dst.group().identity();
            for (ideal, e) in self.generator_word(k) {
                let v = dst.eval(&f(&ideal))?;
                acc = dst.group().op(&acc, &dst.group().scale(&v, e));
            }
            images.push(acc);
        }
        Ok(GroupHom::new(g, dst.group().clone(), images)?)
    }

    /// Natural map to another class group whose modulus divides this one.
    pub fn hom_to(&self, dst: &dyn ClassEval) -> Result<GroupHom, ClassFieldError> {
        self.hom_via(dst, |i| i.clone())
    }
}

impl ClassEval for RayClassGroup {
    fn group(&self) -> &FiniteAbelianGroup {
        match &self.quotient {
            Some(q) => &q.group,
            None => &self.pres.group,
        }
    }

    fn eval(&self, ideal: &QuadIdeal) -> Result<GroupElem, ClassFieldError> {
        Ok(self.project(self.eval_full(ideal)?))
    }
}

/// `Pic(O_n)`, optionally reduced to its maximal `p`-quotient.
#[derive(Clone, Debug)]
pub struct RingClassGroup {
    field: QuadField,
    conductor: u64,
    classes: ClassGroup,
    quotient: Option<PQuotient>,
}

impl RingClassGroup {
    pub fn new(field: QuadField, n: u64, p: Option<u64>) -> Result<Self, ClassFieldError> {
        let classes = class_group(field.order(n)?)?;
        let quotient = p_quotient(classes.group(), p);
        Ok(RingClassGroup { field, conductor: n, classes, quotient })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn full_group(&self) -> &FiniteAbelianGroup {
        self.classes.group()
    }

    pub fn classes(&self) -> &ClassGroup {
        &self.classes
    }
}

impl ClassEval for RingClassGroup {
    fn group(&self) -> &FiniteAbelianGroup {
        match &self.quotient {
            Some(q) => &q.group,
            None => self.classes.group(),
        }
    }

    fn eval(&self, ideal: &QuadIdeal) -> Result<GroupElem, ClassFieldError> {
        let n = self.conductor;
        let i = if ideal.order().conductor() == n {
            ideal.clone()
        } else {
            let e = if ideal.order().conductor() == 1 { ideal.clone() } else { ideal.extend() };
            e.restrict(n).map_err(|_| ClassFieldError::NotCoprime)?
        };
        let x = self.classes.class_of(&i)?;
        Ok(match &self.quotient {
            Some(q) => self.classes.group().project_p(&q.group, &q.kept, &x),
            None => x,
        })
    }
}

/// The norm map `Pic(O_n) → Pic(O_m)` for `m | n`, read off from split primes.
pub fn ring_projection(src: &RingClassGroup, dst: &RingClassGroup) -> Result<GroupHom, ClassFieldError> {
    let field = src.field;
    let gs = src.full_group();
    let gd = dst.full_group();
    let bad = src.conductor() * field.d_k();
    let mut table: BTreeMap<GroupElem, GroupElem> = BTreeMap::new();
    table.insert(gs.identity(), gd.identity());
    let mut bound = 50;
    while table.len() < gs.order() as usize {
        for q in primes_up_to(bound) {
            if bad.is_multiple_of(q) || field.kronecker(q) != 1 {
                continue;
            }
            let prime = field.splitting(q)?.primes()[0].clone();
            let a = src.eval(&prime)?;
            let b = dst.eval(&prime)?;
            let mut frontier: Vec<(GroupElem, GroupElem)> = table.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
            while let Some((x, y)) = frontier.pop() {
                let nx = gs.op(&x, &a);
                if !table.contains_key(&nx) {
                    let ny = gd.op(&y, &b);
                    table.insert(nx.clone(), ny.clone());
                    frontier.push((nx, ny));
                }
            }
            if table.len() == gs.order() as usize {
                break;
            }
        }
        bound *= 2;
    }
    let images = (0..gs.rank())
        .map(|k| {
            let mut e = gs.identity();
            e[k] = 1;
            table[&gs.reduce(&e)].clone()
        })
        .collect();
    Ok(GroupHom::new(gs.clone(), gd.clone(), images)?)
}

/// Element of a class group standing for a Frobenius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinSymbol {
    pub elem: GroupElem,
}

/// `Frob_𝔮` with the geometric normalization: the class of `𝔮` is `Frob_𝔮^{-1}`.
pub fn frobenius(q: &QuadIdeal, target: &dyn ClassEval) -> Result<ArtinSymbol, ClassFieldError> {
    let c = target.eval(q)?;
    Ok(ArtinSymbol { elem: target.group().inv(&c) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k7() -> QuadField {
        QuadField::new(7).unwrap()
    }

    #[test]
    fn small_ray_class_groups() {
        let k = k7();
        assert_eq!(RayClassGroup::of_integer(k, 1, Some(5)).unwrap().group().order(), 1);
        assert_eq!(RayClassGroup::of_integer(k, 5, Some(5)).unwrap().group().order(), 1);
        let r25 = RayClassGroup::of_integer(k, 25, Some(5)).unwrap();
        assert_eq!(r25.group().invariants(), &[5, 5]);
        assert_eq!(r25.full_group().order(), 300);
    }

    #[test]
    fn ring_class_groups() {
        let k = k7();
        assert_eq!(RingClassGroup::new(k, 1, Some(5)).unwrap().group().order(), 1);
        assert_eq!(RingClassGroup::new(k, 2, None).unwrap().group().order(), 1);
        assert_eq!(RingClassGroup::new(k, 25, Some(5)).unwrap().group().order(), 5);
        assert_eq!(RingClassGroup::new(k, 11, Some(5)).unwrap().group().order(), 5);
    }

    #[test]
    fn ray_to_ring_projection_is_onto() {
        let k = k7();
        let ray = RayClassGroup::of_integer(k, 11, Some(5)).unwrap();
        let ring = RingClassGroup::new(k, 11, Some(5)).unwrap();
        let h = ray.hom_to(&ring).unwrap();
        assert!(h.is_surjective());
    }

    #[test]
    fn ray_class_of_nontrivial_class_group() {
        let k = QuadField::new(23).unwrap();
        let ray = RayClassGroup::of_integer(k, 5, None).unwrap();
        // h = 3, |(O/5)^×| = 24, units ±1
        assert_eq!(ray.full_group().order(), 3 * 24 / 2);
        let p2 = &k.splitting(2).unwrap().primes()[0];
        let p3 = &k.splitting(3).unwrap().primes()[0];
        let a = ray.eval(p2).unwrap();
        let b = ray.eval(p3).unwrap();
        let ab = ray.eval(&p2.mul(p3).unwrap()).unwrap();
        assert_eq!(ray.group().op(&a, &b), ab);
    }
}
