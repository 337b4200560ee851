//! Concrete protocols and matrices: hash-based equality, inner-product
//! matrices and their signed variants, the all-ones-first-column matrix,
//! and seeded random instances for property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{BooleanMatrix, RealMatrix};
use crate::smp::{ClassicalSmp, CorrectnessThresholds, TargetFunction};

/// Parameters for the public-coin equality protocol.
///
/// Each coin value carries `t` random n-bit strings; a party's message is
/// the `t` inner-product hash bits of its input against those strings, and
/// the referee accepts iff the two messages are equal (`D_l = I`).
#[derive(Clone, Copy, Debug)]
pub struct EqualityParams {
    pub n: u32,
    pub coin_count: usize,
    pub hash_bits: u32,
    pub seed: u64,
}

impl EqualityParams {
    fn validate(&self) -> Result<()> {
        if self.hash_bits == 0 || self.hash_bits > 8 {
            return Err(Error::InvalidConfig(format!(
                "hash_bits = {} outside 1..=8",
                self.hash_bits
            )));
        }
        if self.coin_count == 0 {
            return Err(Error::InvalidConfig("coin_count must be at least 1".into()));
        }
        if self.n == 0 || self.n > 14 {
            return Err(Error::InvalidConfig(format!("n = {} outside 1..=14", self.n)));
        }
        Ok(())
    }
}

const RESEED_ATTEMPTS: usize = 20;

/// Build an equality protocol and validate it against the equality function.
///
/// Equal inputs always produce equal messages, so `p_acc(x, x) = 1`. For
/// `x != y` each coin collides with probability `2^-hash_bits`; if the drawn
/// hashes happen to miss the thresholds the builder re-seeds, up to 20
/// attempts, before giving up with [`Error::ValidationExhausted`].
pub fn build_equality_protocol(
    params: &EqualityParams,
    th: &CorrectnessThresholds,
) -> Result<ClassicalSmp> {
    params.validate()?;
    let inputs = 1usize << params.n;
    let t = params.hash_bits;
    let space = 1usize << t;
    let target = TargetFunction::equality(params.n);
    let mask = (1u64 << params.n) - 1;

    for attempt in 0..RESEED_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(attempt as u64));
        let mut table = Vec::with_capacity(inputs);
        for _ in 0..inputs {
            table.push(vec![0usize; params.coin_count]);
        }
        for l in 0..params.coin_count {
            let hashes: Vec<u64> =
                (0..t).map(|_| rng.random::<u64>() & mask).collect();
            for (x, row) in table.iter_mut().enumerate() {
                let mut msg = 0usize;
                for (i, r) in hashes.iter().enumerate() {
                    let bit = ((x as u64 & r).count_ones() % 2) as usize;
                    msg |= bit << i;
                }
                row[l] = msg;
            }
        }
        let referee = vec![BooleanMatrix::identity(space); params.coin_count];
        let p = ClassicalSmp::new(params.n, t, t, table.clone(), table, referee)?;
        if p.validate(&target, th)?.valid {
            return Ok(p);
        }
    }
    Err(Error::ValidationExhausted(RESEED_ATTEMPTS))
}

fn check_desk_scale(n: u32) -> Result<()> {
    if n == 0 || n > 7 {
        return Err(Error::InvalidConfig(format!("n = {n} outside 1..=7")));
    }
    Ok(())
}

/// Boolean inner-product matrix: entry `(x, y)` is `x . y mod 2`, with rows
/// and columns indexed by binary counting from 0.
pub fn ip_matrix(n: u32) -> Result<BooleanMatrix> {
    check_desk_scale(n)?;
    let m = 1usize << n;
    Ok(BooleanMatrix::from_fn(m, m, |x, y| (x & y).count_ones() % 2 == 1))
}

/// Signed inner-product matrix `2 D - J` with entries in `{-1, +1}`.
pub fn ip_signed_matrix(n: u32) -> Result<RealMatrix> {
    check_desk_scale(n)?;
    let m = 1usize << n;
    Ok(RealMatrix::from_fn(m, m, |x, y| {
        2.0 * (((x & y).count_ones() % 2) as f64) - 1.0
    }))
}

/// `M x M` matrix whose first column is all ones and every other entry zero.
pub fn first_column_ones(m: usize) -> Result<BooleanMatrix> {
    if m == 0 {
        return Err(Error::EmptyMatrix { rows: m, cols: m });
    }
    Ok(BooleanMatrix::from_fn(m, m, |_, c| c == 0))
}

/// Uniformly random protocol: random message tables and referee entries
/// drawn Bernoulli(`density`). Deterministic under `seed`.
pub fn random_protocol(
    n: u32,
    coin_count: usize,
    c_a: u32,
    c_b: u32,
    density: f64,
    seed: u64,
) -> Result<ClassicalSmp> {
    if n == 0 || n > 6 {
        return Err(Error::InvalidConfig(format!("n = {n} outside 1..=6")));
    }
    if coin_count == 0 || coin_count > 64 {
        return Err(Error::InvalidConfig(format!("coin_count = {coin_count} outside 1..=64")));
    }
    if c_a > 4 || c_b > 4 {
        return Err(Error::InvalidConfig("message lengths capped at 4 bits".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidConfig(format!("density = {density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs = 1usize << n;
    let (ma, mb) = (1usize << c_a, 1usize << c_b);
    let mut sample_table = |space: usize| -> Vec<Vec<usize>> {
        (0..inputs)
            .map(|_| (0..coin_count).map(|_| rng.random_range(0..space)).collect())
            .collect()
    };
    let alice = sample_table(ma);
    let bob = sample_table(mb);
    let referee = (0..coin_count)
        .map(|_| BooleanMatrix::from_fn(ma, mb, |_, _| rng.random::<f64>() < density))
        .collect();
    ClassicalSmp::new(n, c_a, c_b, alice, bob, referee)
}
