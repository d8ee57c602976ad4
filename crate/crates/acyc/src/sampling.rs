//! Seeded random local data for the norm-relation congruence batch.

use acyc_core::exactnum::arith::primes_up_to;
use acyc_core::exactnum::CycInt;
use acyc_core::normrel::{congruence_check_inert, congruence_check_split, HeckeDatum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn root(rng: &mut ChaCha8Rng) -> (u64, i64) {
    let n = rng.gen_range(1..=12u64);
    (n, rng.gen_range(0..n as i64))
}

fn zeta((n, t): (u64, i64)) -> CycInt {
    CycInt::zeta(n, t)
}

/// Balanced `(k, l, m)` with `k` even, `l ≡ m mod 2`, all at most 12.
fn weights(rng: &mut ChaCha8Rng) -> (i64, i64, i64) {
    loop {
        let k = 2 * rng.gen_range(1..=6);
        let l = rng.gen_range(2..=12);
        let m = rng.gen_range(2..=12);
        if (l - m) % 2 == 0 && k <= l + m && l <= k + m && m <= k + l {
            return (k, l, m);
        }
    }
}

/// `q ≤ 97`, roots of unity of order at most 12, `a_q` inside the Weil bound and
/// anticyclotomic `η`.
pub fn random_datum(rng: &mut ChaCha8Rng, split: bool) -> HeckeDatum {
    let primes = primes_up_to(97);
    let q = primes[rng.gen_range(0..primes.len())];
    let (k, l, m) = weights(rng);
    let bound = (2.0 * (q as f64).powf((k - 1) as f64 / 2.0)).floor().min(1e15) as i64 - 1;
    let a = rng.gen_range(-bound..=bound);
    let a_q = if rng.gen_bool(0.3) { &CycInt::from_int(a) * &zeta(root(rng)) } else { CycInt::from_int(a) };
    let e1 = root(rng);
    let e2 = root(rng);
    HeckeDatum {
        q,
        split,
        a_q,
        k,
        l,
        m,
        psi1_q: zeta(root(rng)),
        psi1_qbar: zeta(root(rng)),
        psi2_q: zeta(root(rng)),
        psi2_qbar: zeta(root(rng)),
        eta1_q: zeta(e1),
        eta1_qbar: zeta((e1.0, -e1.1)),
        eta2_q: zeta(e2),
        eta2_qbar: zeta((e2.0, -e2.1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchOutcome {
    pub split_ok: usize,
    pub split_total: usize,
    pub inert_ok: usize,
    pub inert_total: usize,
    /// `(sample index, error)` for every failure, in index order.
    pub failures: Vec<(usize, String)>,
}

impl BatchOutcome {
    pub fn certified(&self) -> usize {
        self.split_ok + self.inert_ok
    }

    pub fn total(&self) -> usize {
        self.split_total + self.inert_total
    }
}

/// Sample `i` uses ChaCha stream `i` of `seed`, so the outcome is independent of scheduling.
/// Even samples are split (slot 1 or 2 at random), odd samples inert.
pub fn congruence_batch(samples: usize, seed: u64) -> BatchOutcome {
    let results: Vec<(bool, Result<(), String>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let split = i % 2 == 0;
            let d = random_datum(&mut rng, split);
            let r = if split {
                let slot = rng.gen_range(1..=2u8);
                congruence_check_split(&d, slot).map(|_| ())
            } else {
                congruence_check_inert(&d).map(|_| ())
            };
            (split, r.map_err(|e| e.to_string()))
        })
        .collect();
    let mut out = BatchOutcome { split_ok: 0, split_total: 0, inert_ok: 0, inert_total: 0, failures: Vec::new() };
    for (i, (split, r)) in results.into_iter().enumerate() {
        let (ok, total) = if split { (&mut out.split_ok, &mut out.split_total) } else { (&mut out.inert_ok, &mut out.inert_total) };
        *total += 1;
        match r {
            Ok(()) => *ok += 1,
            Err(e) => out.failures.push((i, e)),
        }
    }
    out
}
