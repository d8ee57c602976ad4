//! Rank-4 integer lattices: Hermite normal form, LLL and Fincke–Pohst enumeration.

use alloc::vec::Vec;

use num_traits::Float;

pub type Vec4 = [i128; 4];
pub type Form4 = [[i128; 4]; 4];

/// Full-rank sublattice of `Z^4` stored by its upper-triangular Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    rows: [Vec4; 4],
}

impl Lattice {
    /// Span of `gens`, or `None` when they do not have rank 4.
    pub fn from_gens(gens: &[Vec4]) -> Option<Lattice> {
        hnf(gens).map(|rows| Lattice { rows })
    }

    pub fn standard() -> Lattice {
        let mut rows = [[0; 4]; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        Lattice { rows }
    }

    pub fn rows(&self) -> &[Vec4; 4] {
        &self.rows
    }

    /// Index in `Z^4`.
    pub fn det(&self) -> i128 {
        (0..4).map(|i| self.rows[i][i]).product()
    }

    pub fn coords(&self, v: &Vec4) -> Option<Vec4> {
        let mut w = *v;
        let mut c = [0; 4];
        for i in 0..4 {
            let d = self.rows[i][i];
            if w[i] % d != 0 {
                return None;
            }
            c[i] = w[i] / d;
            for (wk, rk) in w.iter_mut().zip(self.rows[i].iter()) {
                *wk -= c[i] * rk;
            }
        }
        Some(c)
    }

    pub fn contains(&self, v: &Vec4) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn combine(&self, c: &Vec4) -> Vec4 {
        let mut v = [0; 4];
        for (ci, r) in c.iter().zip(self.rows.iter()) {
            for k in 0..4 {
                v[k] += ci * r[k];
            }
        }
        v
    }

    pub fn scale(&self, k: i128) -> Lattice {
        let mut rows = self.rows;
        for r in rows.iter_mut() {
            for x in r.iter_mut() {
                *x *= k;
            }
        }
        Lattice::from_gens(&rows).expect("nonzero scale keeps rank")
    }

    /// `{v ∈ L : f(v) ≡ 0 mod ℓ}` for a linear map `f: Z^4 → Z^4`, given by the
    /// images of the Hermite rows.
    pub fn kernel_mod(&self, images: &[Vec4; 4], ell: i128) -> Lattice {
        let kernel = nullspace_mod(images, ell);
        let mut gens: Vec<Vec4> = self.rows.iter().map(|r| r.map(|x| x * ell)).collect();
        for c in kernel {
            gens.push(self.combine(&c));
        }
        Lattice::from_gens(&gens).expect("contains ℓL")
    }
}

fn hnf(gens: &[Vec4]) -> Option<[Vec4; 4]> {
    let mut work: Vec<Vec4> = gens.iter().filter(|v| v.iter().any(|&x| x != 0)).copied().collect();
    let mut out = [[0; 4]; 4];
    for col in 0..4 {
        loop {
            let pi = work
                .iter()
                .enumerate()
                .filter(|(_, v)| v[col] != 0)
                .min_by_key(|(_, v)| v[col].abs())
                .map(|(i, _)| i)?;
            let p = work[pi];
            let mut done = true;
            for (i, v) in work.iter_mut().enumerate() {
                if i != pi && v[col] != 0 {
                    let q = v[col].div_euclid(p[col]);
                    for k in 0..4 {
                        v[k] -= q * p[k];
                    }
                    if v[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut p = work.swap_remove(pi);
                if p[col] < 0 {
                    p = p.map(|x| -x);
                }
                out[col] = p;
                break;
            }
        }
        work.retain(|v| v.iter().any(|&x| x != 0));
    }
    for j in 1..4 {
        for i in 0..j {
            let q = out[i][j].div_euclid(out[j][j]);
            if q != 0 {
                let r = out[j];
                for k in 0..4 {
                    out[i][k] -= q * r[k];
                }
            }
        }
    }
    Some(out)
}

fn nullspace_mod(rows: &[Vec4; 4], ell: i128) -> Vec<Vec4> {
    // solve c·M ≡ 0: reduce the transpose
    let mut m = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[j][i] = rows[i][j].rem_euclid(ell);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        let Some(pr) = (r..4).find(|&i| m[i][col] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][col], ell);
        for x in m[r].iter_mut() {
            *x = (*x * inv).rem_euclid(ell);
        }
        for i in 0..4 {
            if i != r && m[i][col] != 0 {
                let f = m[i][col];
                let row = m[r];
                for k in 0..4 {
                    m[i][k] = (m[i][k] - f * row[k]).rem_euclid(ell);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..4).filter(|c| !pivots.contains(c)) {
        let mut v = [0; 4];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (-m[i][free]).rem_euclid(ell);
        }
        out.push(v);
    }
    out
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

pub fn eval_form(g: &Form4, u: &Vec4, v: &Vec4) -> i128 {
    let mut s = 0;
    for i in 0..4 {
        if u[i] == 0 {
            continue;
        }
        for j in 0..4 {
            s += u[i] * g[i][j] * v[j];
        }
    }
    s
}

fn gram_of(b: &[Vec4; 4], g: &Form4) -> Form4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            out[i][j] = eval_form(g, &b[i], &b[j]);
            out[j][i] = out[i][j];
        }
    }
    out
}

fn gso(m: &Form4) -> ([[f64; 4]; 4], [f64; 4]) {
    let mut mu = [[0.0; 4]; 4];
    let mut bstar = [0.0; 4];
    for i in 0..4 {
        for j in 0..i {
            let mut s = m[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut s = m[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = s;
    }
    (mu, bstar)
}

/// LLL-reduce `b` for the positive-definite form `g`.
pub fn lll(b: &mut [Vec4; 4], g: &Form4) {
    let mut k = 1;
    while k < 4 {
        for j in (0..k).rev() {
            let (mu, _) = gso(&gram_of(b, g));
            let q = mu[k][j].round() as i128;
            if q != 0 {
                let bj = b[j];
                for t in 0..4 {
                    b[k][t] -= q * bj[t];
                }
            }
        }
        let (mu, bstar) = gso(&gram_of(b, g));
        if bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            b.swap(k, k - 1);
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
}

/// Every `v ∈ L` with `g(v, v) ≤ bound`, in ambient coordinates.
pub fn short_vectors(lat: &Lattice, g: &Form4, bound: i128) -> Vec<Vec4> {
    let mut b = *lat.rows();
    lll(&mut b, g);
    let gb = gram_of(&b, g);
    let mut q = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            q[i][j] = gb[i][j] as f64;
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..4 {
            for l in k..4 {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = [0i128; 4];
    let slack = 1e-6 * (bound as f64 + 1.0);
    enumerate(&q, 3, &mut x, bound as f64 + slack, slack, &mut |x| {
        let mut v = [0; 4];
        for i in 0..4 {
            for k in 0..4 {
                v[k] += x[i] * b[i][k];
            }
        }
        if eval_form(g, &v, &v) <= bound {
            out.push(v);
        }
    });
    out
}

fn enumerate<F: FnMut(&[i128; 4])>(
    q: &[[f64; 4]; 4],
    i: usize,
    x: &mut [i128; 4],
    remaining: f64,
    slack: f64,
    emit: &mut F,
) {
    let mut center = 0.0;
    for j in i + 1..4 {
        center -= q[i][j] * x[j] as f64;
    }
    let r = Float::sqrt(Float::max(remaining, 0.0) / q[i][i]);
    let lo = Float::ceil(center - r - 1e-9) as i128;
    let hi = Float::floor(center + r + 1e-9) as i128;
    for xi in lo..=hi {
        let d = xi as f64 - center;
        let t = q[i][i] * d * d;
        if t > remaining + slack {
            continue;
        }
        x[i] = xi;
        if i == 0 {
            emit(x);
        } else {
            enumerate(q, i - 1, x, remaining - t, slack, emit);
        }
    }
    x[i] = 0;
}
