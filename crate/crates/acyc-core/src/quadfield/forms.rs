//! Positive definite binary quadratic forms and class groups of orders.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use super::{QuadError, QuadIdeal, QuadInt, QuadOrder};
use crate::exactnum::abelian::{DiscreteLog, FiniteAbelianGroup, GroupElem};

/// `a x² + b xy + c y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let BinaryForm { a, b, c } = *self;
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Principal form of discriminant `disc`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        BinaryForm::new(1, b, (b * b - disc) / 4)
    }

    /// Reduced form in the same proper equivalence class.
    pub fn reduce(&self) -> Self {
        let (a, b, c) = reduce_wide(self.a as i128, self.b as i128, self.c as i128);
        BinaryForm::new(a as i64, b as i64, c as i64)
    }

    /// Ideal `a·Z + (−b + √Δ)/2·Z` of the order of discriminant `Δ`.
    pub fn to_ideal(&self, order: QuadOrder) -> QuadIdeal {
        let f = order.conductor() as i64;
        let bb = (-self.b - f * order.field().disc()) / 2;
        QuadIdeal::from_basis(order, self.a, bb, f)
    }

    /// Form attached to the primitive part of an invertible ideal.
    pub fn from_ideal(ideal: &QuadIdeal) -> Result<Self, QuadError> {
        let order = ideal.order();
        let f = order.conductor() as i64;
        let (a, b, c) = ideal.hnf();
        let m = a.gcd(&b).gcd(&(c / f));
        let (a, b, c) = (a / m, b / m, c / m);
        if c != f {
            return Err(QuadError::NotInvertible(f as u64));
        }
        let disc = order.disc() as i128;
        let a = a as i128;
        let bf = -(2 * b as i128 + (f * order.field().disc()) as i128);
        // translate b into (−a, a] so the form stays small
        let bf = bf - 2 * a * (bf + a - 1).div_floor(&(2 * a));
        let num = bf * bf - disc;
        if num % (4 * a) != 0 {
            return Err(QuadError::NotInvertible(f as u64));
        }
        let (ra, rb, rc) = reduce_wide(a, bf, num / (4 * a));
        let form = BinaryForm::new(ra as i64, rb as i64, rc as i64);
        if !form.is_primitive() {
            return Err(QuadError::NotInvertible(f as u64));
        }
        Ok(form)
    }
}

fn reduce_wide(mut a: i128, mut b: i128, mut c: i128) -> (i128, i128, i128) {
    let disc = b * b - 4 * a * c;
    loop {
        let two_a = 2 * a;
        let k = (a - b).div_floor(&two_a);
        b += k * two_a;
        c = (b * b - disc) / (4 * a);
        if a > c {
            core::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// All primitive reduced forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<BinaryForm> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = BinaryForm::new(a, b, c);
            if c >= a && f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// `Pic(O_f)` realized on reduced forms.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    order: QuadOrder,
    dlog: DiscreteLog<BinaryForm>,
}

/// Class group of `order` with its ideal-to-class map.
pub fn class_group(order: QuadOrder) -> Result<ClassGroup, QuadError> {
    let disc = order.disc();
    let forms = reduced_forms(disc);
    let h = forms.len();
    let mul = |x: &BinaryForm, y: &BinaryForm| compose(order, x, y);
    let dlog = DiscreteLog::build(BinaryForm::principal(disc), forms, h, mul)?;
    Ok(ClassGroup { order, dlog })
}

pub(crate) fn compose(order: QuadOrder, x: &BinaryForm, y: &BinaryForm) -> BinaryForm {
    let i = x.to_ideal(order).mul(&y.to_ideal(order)).expect("same order");
    BinaryForm::from_ideal(&i).expect("invertible product").reduce()
}

impl ClassGroup {
    pub fn order(&self) -> QuadOrder {
        self.order
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.dlog.group()
    }

    pub fn class_number(&self) -> u64 {
        self.group().order()
    }

    /// Reduced forms used as generators, with exponents of each in terms of
    /// `gens` recoverable through [`ClassGroup::log_gens`].
    pub fn generator_forms(&self) -> &[BinaryForm] {
        &self.dlog.gens
    }

    pub fn generator_ideals(&self) -> Vec<QuadIdeal> {
        self.dlog.gens.iter().map(|f| f.to_ideal(self.order)).collect()
    }

    /// Exponents of the class on [`ClassGroup::generator_ideals`].
    pub fn log_gens(&self, ideal: &QuadIdeal) -> Result<Vec<i64>, QuadError> {
        let f = BinaryForm::from_ideal(ideal)?.reduce();
        Ok(self.dlog.log_gens(&f).expect("every reduced form is tabulated").clone())
    }

    /// Smith coordinates of the class of an invertible ideal.
    pub fn class_of(&self, ideal: &QuadIdeal) -> Result<GroupElem, QuadError> {
        if ideal.order() != self.order {
            return Err(QuadError::MixedOrders);
        }
        let f = BinaryForm::from_ideal(ideal)?.reduce();
        Ok(self.dlog.log(&f).expect("every reduced form is tabulated"))
    }

    /// Relation orders `e_j` of the generators (smallest power in the span of earlier ones).
    pub fn presentation(&self) -> &crate::exactnum::abelian::Presentation {
        &self.dlog.presentation
    }

    pub fn is_principal(&self, ideal: &QuadIdeal) -> Result<bool, QuadError> {
        Ok(self.group().is_identity(&self.class_of(ideal)?))
    }

    /// Principal generator of `ideal`.
    pub fn generator(&self, ideal: &QuadIdeal) -> Option<QuadInt> {
        ideal.generator()
    }
}
