//! Gross points of conductor `c·p^n`: optimal embeddings up to unit conjugation,
//! the `Pic(O_{cp^n})` action and the `p`-neighbor tree structure.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::brandt::{BrandtSystem, Neighbor};
use super::lattice::{eval_form, short_vectors, Lattice, Vec4};
use super::{QuatError, RatQuat};
use crate::classfield::{ring_projection, RingClassGroup};
use crate::exactnum::abelian::{GroupElem, GroupHom};
use crate::exactnum::arith::factorize;
use crate::quadfield::{QuadField, QuadIdeal, QuadInt};

/// Class index and the image `x = φ(ω)` of the standard generator of `O_K`,
/// conjugated into a canonical position under `O_i^×`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrossPoint {
    pub class: usize,
    pub x: RatQuat,
}

#[derive(Clone, Debug)]
pub struct GrossLevel {
    n: u32,
    conductor: u64,
    ring: RingClassGroup,
    points: Vec<GrossPoint>,
    index: BTreeMap<GrossPoint, usize>,
    labels: Vec<(usize, GroupElem)>,
    orbits: Vec<BTreeMap<GroupElem, usize>>,
    down: Option<GroupHom>,
}

impl GrossLevel {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn ring(&self) -> &RingClassGroup {
        &self.ring
    }

    pub fn points(&self) -> &[GrossPoint] {
        &self.points
    }

    pub fn position(&self, x: &GrossPoint) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `(orbit, σ)` with `points[i] = σ·base(orbit)`.
    pub fn label(&self, i: usize) -> &(usize, GroupElem) {
        &self.labels[i]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit(&self, o: usize) -> &BTreeMap<GroupElem, usize> {
        &self.orbits[o]
    }

    pub fn base(&self, o: usize) -> usize {
        self.orbits[o][&self.ring.full_group().identity()]
    }

    /// `Pic(O_{cp^n}) → Pic(O_{cp^{n-1}})`.
    pub fn down_map(&self) -> Option<&GroupHom> {
        self.down.as_ref()
    }
}

/// Neighbors of a level-`n` point sorted by the level they land on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborSplit {
    pub up: Vec<GrossPoint>,
    pub down: Vec<GrossPoint>,
}

#[derive(Clone, Debug)]
pub struct TraceReport {
    pub level: u32,
    pub checked: usize,
    pub failures: Vec<usize>,
}

impl TraceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct GrossTower {
    sys: BrandtSystem,
    field: QuadField,
    c: u64,
    p: u64,
    p_neighbors: Vec<Vec<Neighbor>>,
    levels: Vec<GrossLevel>,
}

fn heegner_check(sys: &BrandtSystem, field: QuadField, c: u64, p: u64) -> Result<(), QuatError> {
    let o = sys.order();
    for (l, _) in factorize(o.n_minus()) {
        if field.kronecker(l) != -1 {
            return Err(QuatError::Heegner { prime: l, reason: "divides N^- but is not inert" });
        }
    }
    for (l, _) in factorize(o.n_plus()) {
        if field.kronecker(l) != 1 {
            return Err(QuatError::Heegner { prime: l, reason: "divides N^+ but does not split" });
        }
    }
    if field.kronecker(p) != -1 {
        return Err(QuatError::Heegner { prime: p, reason: "p must be inert" });
    }
    let bad = o.n_minus() * o.n_plus() * field.d_k();
    for (l, _) in factorize(c * p) {
        if bad.is_multiple_of(l) {
            return Err(QuatError::Heegner { prime: l, reason: "conductor not prime to N·D_K" });
        }
    }
    Ok(())
}

/// Gross points of conductor `c·p^k` for `k = 0..=n`.
pub fn gross_points(sys: &BrandtSystem, field: QuadField, c: u64, p: u64, n: u32) -> Result<GrossTower, QuatError> {
    heegner_check(sys, field, c, p)?;
    let p_neighbors = (0..sys.class_number()).map(|i| sys.neighbors(i, p)).collect::<Result<Vec<_>, _>>()?;
    let mut tower = GrossTower { sys: sys.clone(), field, c, p, p_neighbors, levels: Vec::new() };
    let base = tower.enumerate_optimal(c)?;
    let level0 = tower.assemble(0, c, base, None)?;
    tower.levels.push(level0);
    for k in 1..=n {
        tower.extend()?;
        debug_assert_eq!(tower.levels.len(), k as usize + 1);
    }
    Ok(tower)
}

impl GrossTower {
    pub fn system(&self) -> &BrandtSystem {
        &self.sys
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tame_conductor(&self) -> u64 {
        self.c
    }

    pub fn top(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn level(&self, n: u32) -> Result<&GrossLevel, QuatError> {
        self.levels.get(n as usize).ok_or(QuatError::LevelTooLow { have: self.top(), want: n })
    }

    /// `h(O_m)·∏_{ℓ|N}2`: Eichler's count of optimal embeddings for the Heegner case.
    pub fn expected_count(&self, m: u64) -> Result<usize, QuatError> {
        let h = RingClassGroup::new(self.field, m, None)?.full_group().order() as usize;
        let o = self.sys.order();
        let primes = factorize(o.n_minus()).len() + factorize(o.n_plus()).len();
        Ok(h << primes)
    }

    /// Every optimal embedding of `O_m` into some `O_i`, by bounded-norm search.
    pub fn enumerate_optimal(&self, m: u64) -> Result<BTreeSet<GrossPoint>, QuatError> {
        let order = self.sys.order();
        let omega = QuadInt::new(0, 1);
        let (t, nm) = (self.field.trace(omega) as i128, self.field.norm(omega));
        let mi = m as i128;
        let ells: Vec<i128> = factorize(m).into_iter().map(|(l, _)| l as i128).collect();
        let mut out = BTreeSet::new();
        for (k, cl) in self.sys.classes().iter().enumerate() {
            let (lat, d) = cl.left_order();
            let target = 2 * d * d * mi * mi * nm;
            for w in short_vectors(lat, order.gram(), target) {
                if eval_form(order.gram(), &w, &w) != target || order.trd(&w) != d * mi * t {
                    continue;
                }
                let refinable = ells.iter().any(|&l| w.iter().all(|c| c % l == 0) && lat.contains(&w.map(|c| c / l)));
                if refinable {
                    continue;
                }
                out.insert(self.canonical(k, RatQuat::new(w, d * mi)));
            }
        }
        Ok(out)
    }

    fn level_index(&self, mut m: u64) -> u32 {
        let mut n = 0;
        while m.is_multiple_of(self.p) {
            m /= self.p;
            n += 1;
        }
        n
    }

    /// Conductor of the embedding `x` relative to `O_class`.
    pub fn conductor_of(&self, pt: &GrossPoint) -> Option<u64> {
        let (lat, d) = self.sys.classes()[pt.class].left_order();
        self.sys.order().conductor_in(&pt.x, lat, d)
    }

    fn canonical(&self, class: usize, x: RatQuat) -> GrossPoint {
        let order = self.sys.order();
        let best = self.sys.classes()[class]
            .units()
            .iter()
            .map(|u| order.mul_rat(&order.mul_rat(&order.conj_rat(u), &x), u))
            .min()
            .unwrap_or(x);
        GrossPoint { class, x: best }
    }

    /// `(J, x)` with `J = (z/nrd(I_k))·I_k` becomes `(I_k, z̄xz/nrd(z))`.
    fn transport(&self, class: usize, z: &Vec4, x: &RatQuat) -> GrossPoint {
        let order = self.sys.order();
        let zq = RatQuat::integral(*z);
        let y = order.mul_rat(&order.mul_rat(&order.conj_rat(&zq), x), &zq);
        let nz = order.nrd(z);
        self.canonical(class, RatQuat::new(y.num, y.den * nz))
    }

    /// `[𝔞]·(I, φ) = (φ(𝔞)·I, φ)` for an invertible ideal of `O_m`.
    pub fn act(&self, pt: &GrossPoint, ideal: &QuadIdeal) -> Result<GrossPoint, QuatError> {
        let order = self.sys.order();
        let cl = &self.sys.classes()[pt.class];
        let mut gens = Vec::with_capacity(8);
        for a in ideal.basis() {
            let phi = order.affine(a.u as i128, a.v as i128, &pt.x);
            for r in cl.ideal().rows() {
                let v = order.mul_rat(&phi, &RatQuat::integral(*r));
                gens.push(v.as_integral().ok_or(QuatError::Unidentified)?);
            }
        }
        let j = Lattice::from_gens(&gens).ok_or(QuatError::Unidentified)?;
        let nj = cl.norm() * ideal.norm() as i128;
        let (k, z) = self.sys.identify(&j, nj).ok_or(QuatError::Unidentified)?;
        Ok(self.transport(k, &z, &pt.x))
    }

    /// The `p+1` neighbors of a point, split by conductor.
    pub fn neighbor_split(&self, pt: &GrossPoint) -> Result<NeighborSplit, QuatError> {
        let m = self.conductor_of(pt).ok_or(QuatError::Unidentified)?;
        let mut up = Vec::new();
        let mut down = Vec::new();
        for nb in &self.p_neighbors[pt.class] {
            let q = self.transport(nb.class, &nb.witness, &pt.x);
            let mq = self.conductor_of(&q).ok_or(QuatError::Unidentified)?;
            if mq == m * self.p {
                up.push(q);
            } else if mq * self.p == m {
                down.push(q);
            } else {
                return Err(QuatError::Neighbors(self.level_index(m)));
            }
        }
        Ok(NeighborSplit { up, down })
    }

    fn orbit_of(&self, base: &GrossPoint, ring: &RingClassGroup) -> Result<BTreeMap<GroupElem, GrossPoint>, QuatError> {
        let classes = ring.classes();
        let g = classes.group();
        let gens: Vec<(QuadIdeal, GroupElem)> = classes
            .generator_ideals()
            .into_iter()
            .map(|i| classes.class_of(&i).map(|c| (i, c)))
            .collect::<Result<_, _>>()?;
        let mut by_elem = BTreeMap::new();
        let mut by_point = BTreeMap::new();
        by_elem.insert(g.identity(), base.clone());
        by_point.insert(base.clone(), g.identity());
        let mut queue = VecDeque::from([(g.identity(), base.clone())]);
        while let Some((e, pt)) = queue.pop_front() {
            for (ideal, c) in &gens {
                let q = self.act(&pt, ideal)?;
                let f = g.op(&e, c);
                match (by_point.get(&q), by_elem.get(&f)) {
                    (Some(f0), _) if *f0 != f => return Err(QuatError::NotFree),
                    (Some(_), _) => {}
                    (None, Some(_)) => return Err(QuatError::NotFree),
                    (None, None) => {
                        by_point.insert(q.clone(), f.clone());
                        by_elem.insert(f.clone(), q.clone());
                        queue.push_back((f, q));
                    }
                }
            }
        }
        Ok(by_elem)
    }

    fn assemble(
        &self,
        n: u32,
        m: u64,
        all: BTreeSet<GrossPoint>,
        bases: Option<Vec<GrossPoint>>,
    ) -> Result<GrossLevel, QuatError> {
        let expected = self.expected_count(m)?;
        if all.len() != expected {
            return Err(QuatError::EmbeddingCount { found: all.len(), expected });
        }
        let ring = RingClassGroup::new(self.field, m, None)?;
        let h = ring.full_group().order() as usize;
        let points: Vec<GrossPoint> = all.iter().cloned().collect();
        let index: BTreeMap<GrossPoint, usize> = points.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut labels: Vec<Option<(usize, GroupElem)>> = alloc::vec![None; points.len()];
        let mut orbits = Vec::new();
        let mut pending: VecDeque<GrossPoint> = bases.unwrap_or_default().into();
        loop {
            let base = match pending.pop_front() {
                Some(b) => b,
                None => match labels.iter().position(|l| l.is_none()) {
                    Some(i) => points[i].clone(),
                    None => break,
                },
            };
            let orbit = self.orbit_of(&base, &ring)?;
            if orbit.len() != h {
                return Err(QuatError::NotFree);
            }
            let o = orbits.len();
            let mut table = BTreeMap::new();
            for (e, pt) in orbit {
                let i = *index.get(&pt).ok_or(QuatError::EmbeddingCount { found: all.len() + 1, expected })?;
                if labels[i].is_some() {
                    return Err(QuatError::NotFree);
                }
                labels[i] = Some((o, e.clone()));
                table.insert(e, i);
            }
            orbits.push(table);
        }
        let labels = labels.into_iter().map(|l| l.expect("every point lies in an orbit")).collect();
        let down = match self.levels.last() {
            Some(prev) if n > 0 => Some(ring_projection(&ring, &prev.ring)?),
            _ => None,
        };
        Ok(GrossLevel { n, conductor: m, ring, points, index, labels, orbits, down })
    }

    /// Natural map `Pic(O_{m'}) → Pic(O_m)` read off from split primes.
    /// Add level `top + 1` from the up-neighbors of the current top level.
    pub fn extend(&mut self) -> Result<(), QuatError> {
        let prev = self.levels.last().expect("level 0 exists");
        let n = prev.n + 1;
        let m = prev.conductor * self.p;
        let mut all = BTreeSet::new();
        for pt in &prev.points {
            let split = self.neighbor_split(pt)?;
            let (want_up, want_down) = if prev.n == 0 { (self.p as usize + 1, 0) } else { (self.p as usize, 1) };
            if split.up.len() != want_up || split.down.len() != want_down {
                return Err(QuatError::Neighbors(prev.n));
            }
            all.extend(split.up);
        }
        let bases = (0..prev.orbit_count())
            .map(|o| {
                let b = &prev.points[prev.base(o)];
                self.neighbor_split(b).map(|s| s.up.into_iter().min().expect("p ≥ 2 up-neighbors"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let level = self.assemble(n, m, all, Some(bases))?;
        self.levels.push(level);
        Ok(())
    }

    /// `a_p·v(x) = Σ_{up} v(x') + Σ_{down} v(x'')` at every level-`n` point, with the
    /// up-neighbors forming one coset of `ker(Pic_{n+1} → Pic_n)` inside level `n+1`.
    pub fn trace_relation_check(&self, n: u32, v: &[BigRational], a_p: i64) -> Result<TraceReport, QuatError> {
        let lvl = self.level(n)?;
        let above = self.level(n + 1)?;
        let pi = above.down.as_ref().expect("levels above 0 carry the down map");
        let kernel = above.ring.full_group().elements().into_iter().filter(|e| pi.dst.is_identity(&pi.apply(e))).count();
        let ap = BigRational::from_integer(BigInt::from(a_p));
        let mut failures = Vec::new();
        for (i, pt) in lvl.points.iter().enumerate() {
            let split = self.neighbor_split(pt)?;
            let mut ok = true;
            let mut rhs = BigRational::zero();
            for q in split.up.iter().chain(split.down.iter()) {
                rhs += &v[q.class];
            }
            ok &= &ap * &v[pt.class] == rhs;
            let labels: BTreeSet<&(usize, GroupElem)> =
                split.up.iter().filter_map(|q| above.position(q)).map(|j| &above.labels[j]).collect();
            ok &= labels.len() == split.up.len() && labels.len() == kernel;
            let orbits: BTreeSet<usize> = labels.iter().map(|l| l.0).collect();
            let images: BTreeSet<GroupElem> = labels.iter().map(|l| pi.apply(&l.1)).collect();
            ok &= orbits.len() == 1 && images.len() == 1;
            if ok {
                let (o, e) = &lvl.labels[i];
                ok &= orbits.contains(o) && images.contains(e);
            }
            if n > 0 {
                let below = self.level(n - 1)?;
                ok &= split.down.iter().all(|q| below.position(q).is_some());
            }
            if !ok {
                failures.push(i);
            }
        }
        Ok(TraceReport { level: n, checked: lvl.points.len(), failures })
    }
}
