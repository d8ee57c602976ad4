//! Finite abelian groups in Smith normal form.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::cyclo::CycInt;
use super::ExactError;

/// Result of a Smith reduction of an integer relation matrix.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries (length = number of columns; zeros mark free rank).
    pub diag: Vec<i128>,
    /// Column transform `V` with `U·R·V = D`.
    pub v: Vec<Vec<i128>>,
    /// Its inverse.
    pub v_inv: Vec<Vec<i128>>,
}

fn ck(x: Option<i128>) -> i128 {
    x.expect("integer overflow in Smith reduction")
}

/// Smith normal form of `rows × ncols`, tracking the column transform.
pub fn smith(rows: &[Vec<i64>], ncols: usize) -> Smith {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            v.resize(ncols, 0);
            v
        })
        .collect();
    let nr = a.len();
    let mut v: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| (i == j) as i128).collect()).collect();
    let mut vi = v.clone();
    let mut t = 0;
    while t < nr.min(ncols) {
        // pivot: smallest nonzero absolute value
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut vi, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &a[t][t]);
                    for j in t..ncols {
                        a[i][j] = ck(a[i][j].checked_sub(ck(q.checked_mul(a[t][j]))));
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &a[t][t]);
                    col_axpy(&mut a, &mut v, &mut vi, j, t, q);
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the smallest leftover to the pivot and retry
                let mut best = (t, t);
                for i in t..nr {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..ncols {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                swap_cols(&mut a, &mut v, &mut vi, t, best.1);
                continue;
            }
            // divisibility condition on the remaining block
            let p = a[t][t];
            let mut bad = None;
            'scan: for i in t + 1..nr {
                for j in t + 1..ncols {
                    if a[i][j] % p != 0 {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        a[t][j] = ck(a[t][j].checked_add(a[i][j]));
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
            for x in vi[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diag = (0..ncols).map(|i| if i < nr { a[i][i] } else { 0 }).collect();
    Smith { diag, v, v_inv: vi }
}

fn swap_cols(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in v.iter_mut() {
        row.swap(x, y);
    }
    vi.swap(x, y);
}

/// `col_j -= q·col_t`, mirrored on `V` and `V⁻¹`.
fn col_axpy(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    for row in a.iter_mut() {
        row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))));
    }
    for row in v.iter_mut() {
        row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))));
    }
    let rj = vi[j].clone();
    for (x, y) in vi[t].iter_mut().zip(rj.iter()) {
        *x = ck(x.checked_add(ck(q.checked_mul(*y))));
    }
}

/// Finite abelian group `⊕ Z/d_i` with `d_1 | d_2 | …`, all `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteAbelianGroup {
    invariants: Vec<u64>,
}

/// Element as reduced exponent vector.
pub type GroupElem = Vec<i64>;

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariants: Vec::new() }
    }

    /// Group with the given invariant factors (must form a divisibility chain).
    pub fn from_invariants(invariants: Vec<u64>) -> Result<Self, ExactError> {
        let inv: Vec<u64> = invariants.into_iter().filter(|&d| d != 1).collect();
        if inv.contains(&0) || inv.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(ExactError::BadInvariants);
        }
        Ok(FiniteAbelianGroup { invariants: inv })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_invariants(vec![n]).expect("cyclic group")
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElem {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, v: &[i64]) -> GroupElem {
        self.invariants
            .iter()
            .zip(v.iter())
            .map(|(&d, &x)| x.rem_euclid(d as i64))
            .collect()
    }

    pub fn op(&self, a: &[i64], b: &[i64]) -> GroupElem {
        let s: Vec<i64> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn inv(&self, a: &[i64]) -> GroupElem {
        let s: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, a: &[i64], k: i64) -> GroupElem {
        let s: Vec<i64> = self
            .invariants
            .iter()
            .zip(a.iter())
            .map(|(&d, &x)| ((x as i128 * k as i128).rem_euclid(d as i128)) as i64)
            .collect();
        s
    }

    pub fn is_identity(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Order of an element.
    pub fn elem_order(&self, a: &[i64]) -> u64 {
        self.invariants
            .iter()
            .zip(a.iter())
            .map(|(&d, &x)| d / (x.unsigned_abs()).gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Unique square root in an odd-order group.
    pub fn sqrt(&self, a: &[i64]) -> Result<GroupElem, ExactError> {
        let n = self.order();
        if n.is_multiple_of(2) {
            return Err(ExactError::EvenOrder(n));
        }
        Ok(self.scale(a, n.div_ceil(2) as i64))
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![self.identity()];
        for (i, &d) in self.invariants.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for k in 0..d as i64 {
                    let mut x = e.clone();
                    x[i] = k;
                    next.push(x);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// The standard generators `e_i`.
    pub fn generators(&self) -> Vec<GroupElem> {
        (0..self.rank())
            .map(|i| {
                let mut e = self.identity();
                e[i] = 1;
                e
            })
            .collect()
    }

    /// Maximal `p`-quotient: invariants `p^{v_p(d_i)}` and the projection.
    pub fn p_part(&self, p: u64) -> (FiniteAbelianGroup, Vec<u64>) {
        let mut inv = Vec::new();
        let mut idx = Vec::new();
        for (i, &d) in self.invariants.iter().enumerate() {
            let mut pp = 1;
            let mut dd = d;
            while dd % p == 0 {
                dd /= p;
                pp *= p;
            }
            inv.push(pp);
            idx.push(i as u64);
        }
        let g = FiniteAbelianGroup::from_invariants(inv.clone()).expect("p-power chain");
        let kept: Vec<u64> = inv.iter().zip(idx.iter()).filter(|(&d, _)| d != 1).map(|(_, &i)| i).collect();
        (g, kept)
    }

    /// Projection of an element onto the maximal `p`-quotient returned by [`Self::p_part`].
    pub fn project_p(&self, quotient: &FiniteAbelianGroup, kept: &[u64], a: &[i64]) -> GroupElem {
        let v: Vec<i64> = kept.iter().map(|&i| a[i as usize]).collect();
        quotient.reduce(&v)
    }
}

/// Group presented by generators and relations, with the coordinate change to SNF.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FiniteAbelianGroup,
    /// `ngens × ncols` transform; an exponent vector `x` maps to `x·V` restricted to `cols`.
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
    cols: Vec<usize>,
    ngens: usize,
}

impl Presentation {
    /// Quotient of `Z^ngens` by the row span of `relations`; must be finite.
    pub fn from_relations(ngens: usize, relations: &[Vec<i64>]) -> Result<Self, ExactError> {
        if ngens == 0 {
            return Ok(Presentation {
                group: FiniteAbelianGroup::trivial(),
                v: Vec::new(),
                v_inv: Vec::new(),
                cols: Vec::new(),
                ngens: 0,
            });
        }
        let s = smith(relations, ngens);
        if s.diag.contains(&0) {
            return Err(ExactError::InfiniteGroup);
        }
        let cols: Vec<usize> = (0..ngens).filter(|&i| s.diag[i] != 1).collect();
        let inv: Vec<u64> = cols.iter().map(|&i| s.diag[i] as u64).collect();
        Ok(Presentation {
            group: FiniteAbelianGroup::from_invariants(inv)?,
            v: s.v,
            v_inv: s.v_inv,
            cols,
            ngens,
        })
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// SNF coordinates of `Σ x_i g_i`.
    pub fn coords(&self, x: &[i64]) -> GroupElem {
        let raw: Vec<i64> = self
            .cols
            .iter()
            .zip(self.group.invariants().iter())
            .map(|(&c, &d)| {
                let mut acc: i128 = 0;
                for (i, &xi) in x.iter().enumerate() {
                    acc = (acc + (xi as i128) * self.v[i][c]).rem_euclid(d as i128);
                }
                acc as i64
            })
            .collect();
        raw
    }

    /// Exponents on the original generators of the `k`-th SNF generator.
    pub fn snf_generator_in_gens(&self, k: usize) -> Vec<i64> {
        let c = self.cols[k];
        self.v_inv[c].iter().map(|&x| x as i64).collect()
    }
}

/// Structure of a concrete finite abelian group given by elements and a product.
///
/// Greedily adds generators from `candidates` until `order` elements are reached;
/// the resulting table doubles as a discrete logarithm.
#[derive(Clone, Debug)]
pub struct DiscreteLog<T: Ord + Clone> {
    pub gens: Vec<T>,
    /// Row `k`: `e_k·g_k − Σ_{i<k} c_i g_i = 0`.
    pub relations: Vec<Vec<i64>>,
    pub presentation: Presentation,
    table: BTreeMap<T, Vec<i64>>,
}

impl<T: Ord + Clone> DiscreteLog<T> {
    pub fn build<I, F>(identity: T, candidates: I, order: usize, mul: F) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = T>,
        F: Fn(&T, &T) -> T,
    {
        let mut table: BTreeMap<T, Vec<i64>> = BTreeMap::new();
        table.insert(identity.clone(), Vec::new());
        let mut gens: Vec<T> = Vec::new();
        let mut rels: Vec<Vec<i64>> = Vec::new();
        for g in candidates {
            if table.len() >= order {
                break;
            }
            if table.contains_key(&g) {
                continue;
            }
            let k = gens.len();
            // smallest e with g^e in the current subgroup
            let mut powers = vec![identity.clone()];
            let mut cur = g.clone();
            let mut e = 1i64;
            while !table.contains_key(&cur) {
                powers.push(cur.clone());
                cur = mul(&cur, &g);
                e += 1;
            }
            let mut rel = table[&cur].clone();
            rel.resize(k + 1, 0);
            for x in rel.iter_mut() {
                *x = -*x;
            }
            rel[k] = e;
            rels.push(rel);
            let old: Vec<(T, Vec<i64>)> = table.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            for (j, pw) in powers.iter().enumerate().skip(1) {
                for (h, hv) in &old {
                    let mut v = hv.clone();
                    v.resize(k + 1, 0);
                    v[k] = j as i64;
                    table.insert(mul(pw, h), v);
                }
            }
            gens.push(g);
        }
        if table.len() != order {
            return Err(ExactError::GenerationFailed { got: table.len(), want: order });
        }
        let n = gens.len();
        for v in table.values_mut() {
            v.resize(n, 0);
        }
        let rels: Vec<Vec<i64>> = rels
            .into_iter()
            .map(|mut r| {
                r.resize(n, 0);
                r
            })
            .collect();
        let presentation = Presentation::from_relations(n, &rels)?;
        Ok(DiscreteLog { gens, relations: rels, presentation, table })
    }

    /// Exponents on `gens`.
    pub fn log_gens(&self, x: &T) -> Option<&Vec<i64>> {
        self.table.get(x)
    }

    /// SNF coordinates.
    pub fn log(&self, x: &T) -> Option<GroupElem> {
        self.table.get(x).map(|v| self.presentation.coords(v))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.presentation.group
    }

    pub fn elements(&self) -> impl Iterator<Item = &T> {
        self.table.keys()
    }
}

/// Homomorphism of finite abelian groups given by images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub src: FiniteAbelianGroup,
    pub dst: FiniteAbelianGroup,
    pub images: Vec<GroupElem>,
}

impl GroupHom {
    pub fn new(src: FiniteAbelianGroup, dst: FiniteAbelianGroup, images: Vec<GroupElem>) -> Result<Self, ExactError> {
        if images.len() != src.rank() {
            return Err(ExactError::BadInvariants);
        }
        // the image of e_i must be killed by d_i
        for (img, &d) in images.iter().zip(src.invariants()) {
            if !dst.is_identity(&dst.scale(img, d as i64)) {
                return Err(ExactError::NotWellDefined);
            }
        }
        let images = images.iter().map(|x| dst.reduce(x)).collect();
        Ok(GroupHom { src, dst, images })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        GroupHom { src: g.clone(), dst: g.clone(), images: g.generators() }
    }

    pub fn apply(&self, x: &[i64]) -> GroupElem {
        let mut acc = self.dst.identity();
        for (img, &k) in self.images.iter().zip(x.iter()) {
            acc = self.dst.op(&acc, &self.dst.scale(img, k));
        }
        acc
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        GroupHom { src: self.src.clone(), dst: other.dst.clone(), images }
    }

    /// Order of the cokernel, from the Smith form of the relation matrix of `dst` plus the images.
    pub fn cokernel_order(&self) -> u64 {
        let r = self.dst.rank();
        if r == 0 {
            return 1;
        }
        let mut rows: Vec<Vec<i64>> = self
            .dst
            .invariants()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut v = vec![0; r];
                v[i] = d as i64;
                v
            })
            .collect();
        rows.extend(self.images.iter().cloned());
        let s = smith(&rows, r);
        s.diag.iter().map(|&d| d as u64).product()
    }

    pub fn image_order(&self) -> u64 {
        self.dst.order() / self.cokernel_order()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_order() == 1
    }

    pub fn is_injective(&self) -> bool {
        self.image_order() == self.src.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijection, by enumerating the source.
    pub fn inverse(&self) -> Result<GroupHom, ExactError> {
        if !self.is_bijective() {
            return Err(ExactError::NotBijective);
        }
        let mut table = BTreeMap::new();
        for x in self.src.elements() {
            table.insert(self.apply(&x), x);
        }
        let images = self.dst.generators().iter().map(|g| table[g].clone()).collect();
        Ok(GroupHom { src: self.dst.clone(), dst: self.src.clone(), images })
    }
}

/// Direct product of finite abelian groups with coordinates converted to Smith form.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    factors: Vec<FiniteAbelianGroup>,
    pres: Presentation,
    group: FiniteAbelianGroup,
}

impl ProductGroup {
    pub fn new(factors: Vec<FiniteAbelianGroup>) -> Self {
        let n: usize = factors.iter().map(|g| g.rank()).sum();
        let mut rows = Vec::new();
        let mut off = 0;
        for g in &factors {
            for (i, &d) in g.invariants().iter().enumerate() {
                let mut v = vec![0; n];
                v[off + i] = d as i64;
                rows.push(v);
            }
            off += g.rank();
        }
        let pres = Presentation::from_relations(n, &rows).expect("finite factors");
        let group = pres.group.clone();
        ProductGroup { factors, pres, group }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn factors(&self) -> &[FiniteAbelianGroup] {
        &self.factors
    }

    pub fn combine(&self, parts: &[GroupElem]) -> GroupElem {
        let flat: Vec<i64> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        self.pres.coords(&flat)
    }

    pub fn split(&self, x: &[i64]) -> Vec<GroupElem> {
        let n: usize = self.factors.iter().map(|g| g.rank()).sum();
        let mut flat = vec![0i64; n];
        for (k, &xk) in x.iter().enumerate() {
            for (f, g) in flat.iter_mut().zip(self.pres.snf_generator_in_gens(k)) {
                *f += xk * g;
            }
        }
        let mut out = Vec::new();
        let mut off = 0;
        for g in &self.factors {
            out.push(g.reduce(&flat[off..off + g.rank()]));
            off += g.rank();
        }
        out
    }

    /// Hom from the product assembled from homs on each factor.
    pub fn hom_from_factors(&self, homs: &[GroupHom], dst: &FiniteAbelianGroup) -> GroupHom {
        let images = self
            .group
            .generators()
            .iter()
            .map(|e| {
                let parts = self.split(e);
                parts
                    .iter()
                    .zip(homs.iter())
                    .fold(dst.identity(), |acc, (x, h)| dst.op(&acc, &h.apply(x)))
            })
            .collect();
        GroupHom { src: self.group.clone(), dst: dst.clone(), images }
    }
}

/// Character of a finite abelian group, `e_i ↦ ζ_{d_i}^{x_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    group: FiniteAbelianGroup,
    exps: Vec<i64>,
}

impl Character {
    pub fn new(group: &FiniteAbelianGroup, exps: &[i64]) -> Self {
        Character { group: group.clone(), exps: group.reduce(exps) }
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Character { group: group.clone(), exps: group.identity() }
    }

    /// Every character of `group`, ordered by exponent vector.
    pub fn all(group: &FiniteAbelianGroup) -> Vec<Character> {
        group.elements().into_iter().map(|e| Character { group: group.clone(), exps: e }).collect()
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_identity(&self.exps)
    }

    pub fn order(&self) -> u64 {
        self.group.elem_order(&self.exps)
    }

    /// `t` with `χ(g) = ζ_E^t`, `E` the group exponent.
    pub fn value_exp(&self, g: &[i64]) -> i64 {
        let e = self.group.exponent() as i128;
        let t: i128 = self
            .group
            .invariants()
            .iter()
            .zip(self.exps.iter().zip(g.iter()))
            .map(|(&d, (&x, &y))| x as i128 * y as i128 * (e / d as i128))
            .sum();
        t.rem_euclid(e) as i64
    }

    pub fn value(&self, g: &[i64]) -> CycInt {
        CycInt::zeta(self.group.exponent(), self.value_exp(g))
    }

    pub fn mul(&self, other: &Character) -> Character {
        Character { group: self.group.clone(), exps: self.group.op(&self.exps, &other.exps) }
    }

    pub fn inv(&self) -> Character {
        Character { group: self.group.clone(), exps: self.group.inv(&self.exps) }
    }

    pub fn pow(&self, k: i64) -> Character {
        Character { group: self.group.clone(), exps: self.group.scale(&self.exps, k) }
    }

    /// `χ ∘ h` on `h.src`.
    pub fn pullback(&self, h: &GroupHom) -> Character {
        let e = self.group.exponent() as i64;
        let exps: Vec<i64> = h
            .src
            .invariants()
            .iter()
            .zip(h.images.iter())
            .map(|(&d, img)| self.value_exp(img) * d as i64 / e)
            .collect();
        Character::new(&h.src, &exps)
    }

    /// Character with prescribed values `ζ_m^{t_i}` on the standard generators.
    pub fn from_values(group: &FiniteAbelianGroup, m: u64, ts: &[i64]) -> Result<Self, ExactError> {
        let mut exps = Vec::with_capacity(ts.len());
        for (&d, &t) in group.invariants().iter().zip(ts.iter()) {
            let num = t as i128 * d as i128;
            if num.rem_euclid(m as i128) != 0 {
                return Err(ExactError::NotWellDefined);
            }
            exps.push((num / m as i128) as i64);
        }
        Ok(Character::new(group, &exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrix() {
        let s = smith(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let mut d: Vec<i128> = s.diag.clone();
        d.sort();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn presentation_z2_z4() {
        // Z^2 / <(2,0),(0,4)>
        let p = Presentation::from_relations(2, &[vec![2, 0], vec![0, 4]]).unwrap();
        assert_eq!(p.group.invariants(), &[2, 4]);
        assert!(p.group.is_identity(&p.coords(&[2, 4])));
        assert!(!p.group.is_identity(&p.coords(&[1, 0])));
    }

    #[test]
    fn units_mod_fifteen() {
        let mul = |a: &u64, b: &u64| a * b % 15;
        let cand: Vec<u64> = (1..15).filter(|x| x.gcd(&15) == 1).collect();
        let dl = DiscreteLog::build(1u64, cand, 8, mul).unwrap();
        assert_eq!(dl.group().invariants(), &[2, 4]);
        // homomorphism
        for a in [2u64, 4, 7, 11] {
            for b in [2u64, 8, 13, 14] {
                let la = dl.log(&a).unwrap();
                let lb = dl.log(&b).unwrap();
                assert_eq!(dl.log(&(a * b % 15)).unwrap(), dl.group().op(&la, &lb));
            }
        }
    }

    #[test]
    fn square_root_in_cyclic_five() {
        let g = FiniteAbelianGroup::cyclic(5);
        let ab = g.op(&[2], &[4]);
        assert_eq!(g.sqrt(&ab).unwrap(), vec![3]);
        assert!(FiniteAbelianGroup::cyclic(4).sqrt(&[1]).is_err());
    }

    #[test]
    fn characters_of_z2_z4() {
        let g = FiniteAbelianGroup::from_invariants(vec![2, 4]).unwrap();
        let chars = Character::all(&g);
        assert_eq!(chars.len(), 8);
        // orthogonality: Σ_g χ(g) = 0 unless χ trivial
        for chi in &chars {
            let s: i64 = g
                .elements()
                .iter()
                .map(|x| chi.value(x).to_complex().re.round() as i64)
                .sum();
            let s_im: f64 = g.elements().iter().map(|x| chi.value(x).to_complex().im).sum();
            assert!(s_im.abs() < 1e-9);
            assert_eq!(s, if chi.is_trivial() { 8 } else { 0 });
        }
        let h = GroupHom::new(FiniteAbelianGroup::cyclic(4), g.clone(), vec![vec![1, 1]]).unwrap();
        let chi = Character::new(&g, &[1, 1]);
        let pb = chi.pullback(&h);
        for x in FiniteAbelianGroup::cyclic(4).elements() {
            assert_eq!(pb.value(&x), chi.value(&h.apply(&x)));
        }
        let c = Character::from_values(&g, 8, &[4, 2]).unwrap();
        assert_eq!(c.exps(), &[1, 1]);
        assert!(Character::from_values(&g, 8, &[1, 0]).is_err());
    }

    #[test]
    fn product_and_homs() {
        let p = ProductGroup::new(vec![FiniteAbelianGroup::cyclic(4), FiniteAbelianGroup::cyclic(6)]);
        assert_eq!(p.group().invariants(), &[2, 12]);
        for x in p.group().elements() {
            assert_eq!(p.combine(&p.split(&x)), x);
        }
        let z5 = FiniteAbelianGroup::cyclic(5);
        let dbl = GroupHom::new(z5.clone(), z5.clone(), vec![vec![2]]).unwrap();
        assert!(dbl.is_bijective());
        assert_eq!(dbl.then(&dbl.inverse().unwrap()), GroupHom::identity(&z5));
        let z10 = FiniteAbelianGroup::cyclic(10);
        let m = GroupHom::new(z10.clone(), z5.clone(), vec![vec![1]]).unwrap();
        assert!(m.is_surjective() && !m.is_injective());
        assert!(GroupHom::new(z5, z10, vec![vec![1]]).is_err());
    }
}
