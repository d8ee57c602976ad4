//! Central values of `L(f, s)`, `L(f ⊗ ε_K, s)` and `L(f/K, χ, s) = L(f × θ_χ, s)`
//! through the smoothed approximate functional equation.
//!
//! Coefficients are arithmetically normalized (weight 2 form, weight 1 theta series),
//! so every series here is centred at `s = 1` with gamma factor `Γ_C(s)^d`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::exactnum::arith::kronecker;
use crate::quadfield::{QuadField, QuadIdeal, Splitting};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LError {
    #[error("need {need} coefficients, have {have}")]
    ShortCoefficients { have: usize, need: usize },
    #[error("truncation tail {tail:e} exceeds tolerance {tol:e}")]
    TailTooLarge { tail: f64, tol: f64 },
    #[error("gamma shifts {0:?}: only Γ_C(s)^d with d ∈ {{1, 2}} is supported")]
    UnsupportedGamma(Vec<f64>),
    #[error("levels {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("|b_{0}| exceeds the Ramanujan window")]
    CoefficientBound(usize),
    #[error("every L-value in the batch vanishes")]
    Degenerate,
    #[error(transparent)]
    Quad(#[from] crate::quadfield::QuadError),
}

/// Dirichlet series with `Λ(s) = N^{s/2}·Π_j Γ_C(s + μ_j)·L(s) = ε·Λ̄(2 − s)`.
#[derive(Clone, Debug)]
pub struct LSeries {
    coeffs: Vec<Complex64>,
    conductor: f64,
    gamma_shifts: Vec<f64>,
    degree: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct CentralValue {
    pub value: Complex64,
    pub root_number: Complex64,
    /// Estimated contribution of the dropped terms `n > len`.
    pub tail: f64,
    /// `|Λ(1)` at `t = 1` minus `Λ(1)` at `t = 1.1|`, relative to the value.
    pub residual: f64,
}

/// Divisor-function bound `d_k(n)` from a smallest-prime-factor table.
fn divisor_bound(spf: &[usize], mut n: usize, k: usize) -> f64 {
    let mut out = 1.0;
    while n > 1 {
        let p = spf[n];
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        // C(e + k − 1, k − 1)
        let mut c = 1.0;
        for i in 1..k {
            c = c * (e + i) as f64 / i as f64;
        }
        out *= c;
    }
    out
}

fn spf_table(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    spf
}

/// `K_1(x)` from `∫_0^∞ e^{−x cosh t} cosh t dt` by the trapezoidal rule.
pub fn bessel_k1(x: f64) -> f64 {
    let h = 0.05;
    let mut s = 0.5 * Float::exp(-x);
    let mut t = h;
    loop {
        let c = Float::cosh(t);
        let e = x * c;
        if e > 745.0 {
            break;
        }
        s += Float::exp(-e) * c;
        t += h;
    }
    s * h
}

impl LSeries {
    /// `coeffs[n]` is `b_n`; `coeffs[0]` is ignored.
    pub fn new(coeffs: Vec<Complex64>, conductor: f64, degree: usize) -> Result<Self, LError> {
        LSeries::with_gamma(coeffs, conductor, vec![0.0; degree])
    }

    /// One `Γ_C(s + μ)` per shift; the cutoff functions only exist for zero shifts.
    pub fn with_gamma(coeffs: Vec<Complex64>, conductor: f64, gamma_shifts: Vec<f64>) -> Result<Self, LError> {
        let degree = gamma_shifts.len();
        if !(1..=2).contains(&degree) || gamma_shifts.iter().any(|&m| m != 0.0) {
            return Err(LError::UnsupportedGamma(gamma_shifts));
        }
        let spf = spf_table(coeffs.len());
        let window = if degree == 1 { 2 } else { 4 };
        for (n, b) in coeffs.iter().enumerate().skip(1) {
            let bound = divisor_bound(&spf, n, window) * Float::sqrt(n as f64);
            if b.norm() > bound * (1.0 + 1e-9) + 1e-9 {
                return Err(LError::CoefficientBound(n));
            }
        }
        Ok(LSeries { coeffs, conductor, gamma_shifts, degree })
    }

    /// `L(f, s)` for a weight-2 newform of level `level` with coefficients `a[n]`.
    pub fn newform(a: &[i64], level: u64) -> Result<Self, LError> {
        let coeffs = a.iter().enumerate().map(|(n, &x)| Complex64::new(if n == 0 { 0.0 } else { x as f64 }, 0.0)).collect();
        LSeries::new(coeffs, level as f64, 1)
    }

    /// `L(f ⊗ ε_K, s)` with `ε_K` the quadratic character of discriminant `−D_K`.
    pub fn quadratic_twist(a: &[i64], level: u64, field: QuadField) -> Result<Self, LError> {
        let d = field.d_k();
        if num_integer::gcd(level, d) != 1 {
            return Err(LError::NotCoprime(level, d));
        }
        let coeffs = a
            .iter()
            .enumerate()
            .map(|(n, &x)| {
                let e = if n == 0 { 0 } else { field.kronecker(n as u64) };
                Complex64::new((x * e as i64) as f64, 0.0)
            })
            .collect();
        LSeries::new(coeffs, (level * d * d) as f64, 1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn conductor(&self) -> f64 {
        self.conductor
    }

    pub fn gamma_shifts(&self) -> &[f64] {
        &self.gamma_shifts
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn scale(&self) -> f64 {
        Float::sqrt(self.conductor) / Float::powi(2.0 * PI, self.degree as i32)
    }

    /// Inverse Mellin transform of `Γ(1+u)^d / u`.
    fn cutoff_fn(&self, y: f64) -> f64 {
        match self.degree {
            1 => Float::exp(-y),
            _ => {
                let r = 2.0 * Float::sqrt(y);
                r * bessel_k1(r)
            }
        }
    }

    /// Length after which `V(n/A)` drops below `tol`.
    pub fn needed_length(&self, tol: f64) -> usize {
        let a = self.scale();
        let mut y = 1.0;
        while self.cutoff_fn(y) > tol {
            y *= 1.1;
        }
        (y * a) as usize + 1
    }

    fn partial(&self, t: f64, dual: bool) -> Complex64 {
        let a = self.scale();
        let mut s = Complex64::new(0.0, 0.0);
        // blocks of fixed size keep the summation order independent of the caller
        for block in self.coeffs.chunks(1024).enumerate() {
            let (bi, chunk) = block;
            let mut part = Complex64::new(0.0, 0.0);
            for (j, b) in chunk.iter().enumerate() {
                let n = bi * 1024 + j;
                if n == 0 || (b.re == 0.0 && b.im == 0.0) {
                    continue;
                }
                let w = self.cutoff_fn(n as f64 * t / a) / n as f64;
                let b = if dual { b.conj() } else { *b };
                part += b * w;
            }
            s += part;
        }
        s
    }

    fn tail_estimate(&self) -> f64 {
        let a = self.scale();
        let n0 = self.len().max(1);
        let window = (1..=n0).map(|n| self.coeffs[n].norm() / Float::sqrt(n as f64)).fold(0.0, f64::max).max(1.0);
        // ∫_{n0}^∞ window·x^{−1/2}·V(x/A) dx, by a coarse Riemann sum
        let mut tail = 0.0;
        let mut x = n0 as f64;
        let step = (n0 as f64 / 50.0).max(1.0);
        loop {
            let v = self.cutoff_fn(x / a);
            let term = window * v / Float::sqrt(x) * step;
            tail += term;
            if v < 1e-30 || term < 1e-30 * (tail + 1e-300) {
                break;
            }
            x += step;
        }
        tail
    }

    /// `ε = (S(t₁) − S(t₂)) / (S̄(1/t₂) − S̄(1/t₁))`, snapped to `±1` when within `1e-6`.
    pub fn root_number(&self) -> Complex64 {
        let (t1, t2) = (1.0, 1.1);
        let num = self.partial(t1, false) - self.partial(t2, false);
        let den = self.partial(1.0 / t2, true) - self.partial(1.0 / t1, true);
        let eps = num / den;
        for s in [1.0, -1.0] {
            if (eps - Complex64::new(s, 0.0)).norm() < 1e-6 {
                return Complex64::new(s, 0.0);
            }
        }
        eps
    }

    /// `L(1) = S(1) + ε·S̄(1)`, with `S(t) = Σ b_n/n·V(nt/A)`.
    pub fn central_value(&self, tol: f64) -> Result<CentralValue, LError> {
        let need = self.needed_length(tol);
        if self.len() < need {
            return Err(LError::ShortCoefficients { have: self.len(), need });
        }
        let tail = self.tail_estimate();
        if tail > tol {
            return Err(LError::TailTooLarge { tail, tol });
        }
        let eps = self.root_number();
        let value = self.partial(1.0, false) + eps * self.partial(1.0, true);
        let other = self.partial(1.1, false) + eps * self.partial(1.0 / 1.1, true);
        let residual = (value - other).norm() / value.norm().max(1.0);
        Ok(CentralValue { value, root_number: eps, tail, residual })
    }
}

/// Local factor `P_q(T)` of `L(f × θ_χ)` at `q`, as coefficients of `1, T, T², …`.
fn rankin_local(a_q: f64, q: f64, bad: bool, satake: &[Complex64], inert_square: Option<Complex64>) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut p = vec![one];
    let mul = |p: &[Complex64], r: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); p.len() + r.len() - 1];
        for (i, x) in p.iter().enumerate() {
            for (j, y) in r.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    for &g in satake {
        let f = if bad { vec![one, -g * a_q] } else { vec![one, -g * a_q, g * g * q] };
        p = mul(&p, &f);
    }
    if let Some(g2) = inert_square {
        // Satake {γ, −γ} with γ² = χ((q))
        let f = if bad {
            vec![one, Complex64::new(0.0, 0.0), -g2 * a_q * a_q]
        } else {
            let c = g2 * q;
            vec![one, Complex64::new(0.0, 0.0), c * 2.0 - g2 * a_q * a_q, Complex64::new(0.0, 0.0), c * c]
        };
        p = mul(&p, &f);
    }
    p
}

/// Power-series inverse of `p` up to `T^len`.
fn invert_series(p: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len + 1];
    out[0] = Complex64::new(1.0, 0.0) / p[0];
    for k in 1..=len {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..p.len().min(k + 1) {
            s += p[j] * out[k - j];
        }
        out[k] = -s / p[0];
    }
    out
}

/// Dirichlet coefficients `b_1..b_len` of `L(f × θ_χ, s)`.
///
/// `chi` gives the value of the Hecke character on a prime ideal of `O_K`, or `None`
/// where it is ramified; `a[n]` are the newform coefficients.
pub fn rankin_coeffs<F>(a: &[i64], level: u64, field: QuadField, chi: F, len: usize) -> Result<Vec<Complex64>, LError>
where
    F: Fn(&QuadIdeal) -> Option<Complex64>,
{
    if a.len() <= len {
        return Err(LError::ShortCoefficients { have: a.len().saturating_sub(1), need: len });
    }
    let spf = spf_table(len);
    let mut b = vec![Complex64::new(0.0, 0.0); len + 1];
    b[1] = Complex64::new(1.0, 0.0);
    let mut local: Vec<Vec<Complex64>> = vec![Vec::new(); len + 1];
    for q in 2..=len {
        if spf[q] != q {
            continue;
        }
        let mut k = 0;
        let mut pk = 1usize;
        while pk <= len / q {
            pk *= q;
            k += 1;
        }
        let aq = a[q] as f64;
        let bad = level.is_multiple_of(q as u64);
        let qf = q as f64;
        let split = field.splitting(q as u64)?;
        let poly = match &split {
            Splitting::Split(..) | Splitting::Ramified(..) => {
                let satake: Vec<Complex64> = split.primes().iter().filter_map(&chi).collect();
                rankin_local(aq, qf, bad, &satake, None)
            }
            Splitting::Inert(..) => {
                let ideal = &split.primes()[0];
                rankin_local(aq, qf, bad, &[], chi(ideal))
            }
        };
        local[q] = invert_series(&poly, k);
    }
    for n in 2..=len {
        let p = spf[n];
        let mut m = n;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        b[n] = b[m] * local[p][e];
    }
    Ok(b)
}

/// `L(f/K, χ, s)` with `θ_χ` of level `theta_level` prime to `level`.
pub fn rankin_series<F>(a: &[i64], level: u64, field: QuadField, chi: F, theta_level: u64, len: usize) -> Result<LSeries, LError>
where
    F: Fn(&QuadIdeal) -> Option<Complex64>,
{
    if num_integer::gcd(level, theta_level) != 1 {
        return Err(LError::NotCoprime(level, theta_level));
    }
    let coeffs = rankin_coeffs(a, level, field, chi, len)?;
    let n = (level * theta_level) as f64;
    LSeries::new(coeffs, n * n, 2)
}

/// Dirichlet convolution `Σ_{d|n} x_d·y_{n/d}`.
pub fn convolve(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let len = x.len().min(y.len());
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for d in 1..len {
        if x[d] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut n = d;
        let mut e = 1;
        while n < len {
            out[n] += x[d] * y[e];
            n += d;
            e += 1;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RatioRow {
    pub label: String,
    pub theta_abs2: f64,
    pub l_value: f64,
    /// `L / |ν(Θ)|²`, absent when both sides vanish.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    /// `(max − min)/max` over the defined ratios.
    pub spread: f64,
    /// Rows where exactly one side vanishes.
    pub mismatches: usize,
}

/// Compare `L(f/K, ν, 1)` with `|ν(Θ)|²` across a batch of characters of one conductor.
pub fn interpolation_ratio_check(rows: &[(String, f64, f64)], zero_tol: f64) -> Result<RatioReport, LError> {
    let scale_theta = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let scale_l = rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
    if scale_l <= zero_tol || scale_theta == 0.0 {
        return Err(LError::Degenerate);
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut mismatches = 0;
    for (label, th, l) in rows {
        let th_zero = *th <= zero_tol * scale_theta;
        let l_zero = l.abs() <= zero_tol * scale_l;
        let ratio = match (th_zero, l_zero) {
            (false, false) => Some(l / th),
            (true, true) => None,
            _ => {
                mismatches += 1;
                None
            }
        };
        out.push(RatioRow { label: label.clone(), theta_abs2: *th, l_value: *l, ratio });
    }
    let rs: Vec<f64> = out.iter().filter_map(|r| r.ratio).collect();
    let max = rs.iter().copied().fold(f64::MIN, f64::max);
    let min = rs.iter().copied().fold(f64::MAX, f64::min);
    let spread = if rs.is_empty() { f64::INFINITY } else { (max - min) / max.abs() };
    Ok(RatioReport { rows: out, spread, mismatches })
}

/// `ε_K(n)` for the field of discriminant `−D_K`.
pub fn quadratic_character(d_k: u64, n: u64) -> i32 {
    kronecker(-(d_k as i64), n)
}
