//! Dense linear algebra over a prime field `F_p`, `p < 2^31`.
//!
//! Generic points are realized as uniformly random points over `F_p`. The
//! random stream for trial `t` under seed `s` is ChaCha8 seeded with
//! `seed_from_u64(s)` on stream `t`; this choice is part of the
//! reproducibility contract and must not change between releases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 2_147_483_647;
const MIN_PRIME: u64 = 1_000_000;
const MAX_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(MIN_PRIME..=MAX_PRIME).contains(&p) {
            return Err(Error::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Uniform draw from `[0, p - 1]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

/// Trial division; `p` is at most `2^31`, so this is at most ~46 000 steps.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Deterministic RNG for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Mixes `parts` into `seed` (splitmix64 finalizer per part). Used to give
/// each grid cell or suite case its own seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(seed), |acc, &p| {
        mix(acc ^ mix(p.wrapping_add(0x5851_f42d)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Entries are reduced mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Precondition("ragged matrix rows".into()));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| field.reduce(x)).collect(),
        })
    }

    /// Builds from a row-major buffer whose entries are already reduced.
    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        debug_assert!(entries.iter().all(|&x| x < field.p));
        FpMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = vec![0; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        FpMatrix::from_raw(self.field, self.cols, self.rows, t)
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::Precondition("incompatible matrix product".into()));
        }
        let f = self.field;
        let mut out = vec![0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let o = &mut out[i * other.cols + j];
                    *o = f.add(*o, f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(FpMatrix::from_raw(f, self.rows, other.cols, out))
    }

    /// Exact rank, see [`rank`].
    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let entries = (0..rows * cols)
            .map(|_| field.random_element(rng))
            .collect();
        FpMatrix::from_raw(field, rows, cols, entries)
    }
}

/// Rank by fraction-free row reduction: the pivot is the first nonzero entry
/// in the current column, and each lower row is replaced by
/// `pivot * row - row[c] * pivot_row`.
pub fn rank(m: &FpMatrix) -> usize {
    let p = m.field.p;
    let cols = m.cols;
    let mut a = m.entries.clone();
    let mut rank = 0;
    for c in 0..cols {
        if rank == m.rows {
            break;
        }
        let Some(piv) = (rank..m.rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in c..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let pv = a[rank * cols + c];
        let (top, bottom) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &top[rank * cols..];
        for row in bottom.chunks_exact_mut(cols) {
            let lead = row[c];
            if lead == 0 {
                continue;
            }
            let neg = p - lead;
            row[c] = 0;
            for j in c + 1..cols {
                // both products < 2^62, so the sum fits in u64
                row[j] = (pv * row[j] + neg * pivot_row[j]) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Generic rank estimate: max over independent trials, plus what is needed
/// to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    pub per_trial_ranks: Vec<usize>,
}

impl RankResult {
    pub fn from_trials(field: PrimeField, seed: u64, per_trial_ranks: Vec<usize>) -> Self {
        RankResult {
            rank: per_trial_ranks.iter().copied().max().unwrap_or(0),
            prime: field.modulus(),
            seed,
            trials: per_trial_ranks.len() as u32,
            per_trial_ranks,
        }
    }
}

/// Runs `trial(t)` for `t = 0..trials`, and once more if the first `trials`
/// results disagree. A random specialization can only lower the rank, so
/// the maximum is the estimate.
pub fn max_over_trials<T, F>(trials: u32, mut trial: F) -> Result<Vec<T>>
where
    T: PartialEq,
    F: FnMut(u32) -> Result<T>,
{
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let mut out = Vec::with_capacity(trials as usize + 1);
    for t in 0..trials {
        out.push(trial(t)?);
    }
    if out.windows(2).any(|w| w[0] != w[1]) {
        out.push(trial(trials)?);
    }
    Ok(out)
}

/// Checks that a product of random `rows x r` and `r x cols` factors has
/// rank `r` for a few sizes.
pub fn self_test(field: PrimeField, seed: u64) -> bool {
    let mut rng = trial_rng(seed, 0);
    [(12, 3, 9), (20, 7, 30), (15, 15, 15), (8, 1, 40)]
        .iter()
        .all(|&(rows, r, cols)| {
            let a = FpMatrix::random(field, rows, r, &mut rng);
            let b = FpMatrix::random(field, r, cols, &mut rng);
            a.mul(&b).map(|m| m.rank() == r).unwrap_or(false)
        })
}
