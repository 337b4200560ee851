//! Fingerprint states compiled from a classical protocol.
//!
//! The basic compilation sends, per party, a superposition over coin values
//! of the party's message. Bob's side applies the referee matrix column for
//! his message, so the inner product of the two states recovers the
//! classical acceptance probability divided by `sqrt(M_A)`. The
//! decomposition compilation routes the two factors of `D_l = E_l F_l` to
//! the two parties instead, changing the divisor to `rw * cw` of the chosen
//! decomposition.
//!
//! States are real vectors laid out as `flag x coin x payload`. Flag values
//! above 0 carry only normalization padding ("junk"), placed on different
//! flags for the two parties so padding never contributes to inner
//! products.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::smp::ClassicalSmp;
use crate::width::Decomposition;

/// Norm slack allowed on constructed states.
pub const NORM_TOL: f64 = 1e-12;

/// Real amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<f64>,
}

impl StateVector {
    /// Wrap amplitudes; the l2-norm must not exceed 1 beyond [`NORM_TOL`].
    pub fn new(amps: Vec<f64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyMatrix { rows: 0, cols: 1 });
        }
        let v = Self { amps };
        let norm = v.norm();
        if !norm.is_finite() || norm > 1.0 + NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> f64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// View as a `dim x 1` matrix, e.g. for the text format.
    pub fn to_matrix(&self) -> RealMatrix {
        RealMatrix::new(self.dim(), 1, self.amps.clone()).expect("finite amplitudes")
    }
}

/// Index layout `flag x coin x payload` shared by all fingerprints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerprintLayout {
    pub flag_dim: usize,
    pub coin_dim: usize,
    pub payload_dim: usize,
}

impl FingerprintLayout {
    /// Layout of the basic compilation: two flag values, payload is Alice's
    /// message space.
    pub fn basic(p: &ClassicalSmp) -> Self {
        Self { flag_dim: 2, coin_dim: p.coin_count(), payload_dim: p.ma() }
    }

    /// Layout of the decomposition compilation: four flag values (two flag
    /// qubits), payload is the decomposition's inner dimension.
    pub fn decomposition(d: &Decomposition) -> Self {
        Self { flag_dim: 4, coin_dim: d.family_size(), payload_dim: d.inner_dim() }
    }

    #[inline]
    pub fn index(&self, flag: usize, l: usize, a: usize) -> usize {
        debug_assert!(flag < self.flag_dim && l < self.coin_dim && a < self.payload_dim);
        flag * (self.coin_dim * self.payload_dim) + l * self.payload_dim + a
    }

    pub fn dim(&self) -> usize {
        self.flag_dim * self.coin_dim * self.payload_dim
    }

    /// Qubits needed to carry one state in this layout.
    pub fn qubits(&self) -> u64 {
        ceil_log2(self.flag_dim) + ceil_log2(self.coin_dim) + ceil_log2(self.payload_dim)
    }
}

pub(crate) fn ceil_log2(x: usize) -> u64 {
    debug_assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as u64
}

fn check_input(p: &ClassicalSmp, v: usize, who: &str) -> Result<()> {
    if v >= p.input_count() {
        return Err(Error::IndexOutOfRange(format!("{who} input {v} with n = {}", p.n())));
    }
    Ok(())
}

/// Alice's basic fingerprint: amplitude `1/sqrt(L)` at `(0, l, a(x, l))`
/// for every coin value. Always exactly unit, no junk needed.
pub fn alice_fingerprint_basic(p: &ClassicalSmp, x: usize) -> Result<StateVector> {
    check_input(p, x, "alice")?;
    let layout = FingerprintLayout::basic(p);
    let mut amps = vec![0.0; layout.dim()];
    let w = 1.0 / (p.coin_count() as f64).sqrt();
    for l in 0..p.coin_count() {
        amps[layout.index(0, l, p.alice_message(x, l))] += w;
    }
    StateVector::new(amps)
}

/// Bob's basic fingerprint: the flag-0 block holds the referee columns for
/// his messages scaled by `1/sqrt(L M_A)`; the deficit goes to a single
/// junk amplitude at `(1, 0, 0)`.
pub fn bob_fingerprint_basic(p: &ClassicalSmp, y: usize) -> Result<StateVector> {
    check_input(p, y, "bob")?;
    let layout = FingerprintLayout::basic(p);
    let mut amps = vec![0.0; layout.dim()];
    let w = 1.0 / ((p.coin_count() * p.ma()) as f64).sqrt();
    for l in 0..p.coin_count() {
        let b = p.bob_message(y, l);
        let d = p.referee_matrix(l);
        for a in 0..p.ma() {
            amps[layout.index(0, l, a)] = w * d.get(a, b);
        }
    }
    pad_with_junk(&mut amps, layout.index(1, 0, 0));
    StateVector::new(amps)
}

fn pad_with_junk(amps: &mut [f64], junk_index: usize) {
    let s2: f64 = amps.iter().map(|a| a * a).sum();
    amps[junk_index] = (1.0 - s2).max(0.0).sqrt();
}

fn check_decomposition(p: &ClassicalSmp, d: &Decomposition) -> Result<()> {
    if d.family_size() != p.coin_count() {
        return Err(Error::DecompositionMismatch(format!(
            "decomposition covers {} coin values, protocol has {}",
            d.family_size(),
            p.coin_count()
        )));
    }
    if d.matrix_size() != p.ma() || p.ma() != p.mb() {
        return Err(Error::DecompositionMismatch(format!(
            "decomposition is for {0}x{0} matrices, protocol referee is {1}x{2}",
            d.matrix_size(),
            p.ma(),
            p.mb()
        )));
    }
    for l in 0..p.coin_count() {
        if &d.family()[l] != p.referee_matrix(l).as_real() {
            return Err(Error::DecompositionMismatch(format!(
                "decomposition was built from a different referee matrix at coin {l}"
            )));
        }
    }
    Ok(())
}

/// Alice's decomposition fingerprint against the square-padded protocol:
/// the flag-0 block holds row `a(x, l)` of `E_l` scaled by
/// `1/(rw sqrt(L))`; junk sits on flag 1 (binary `01`).
pub fn alice_fingerprint_decomp(
    p: &ClassicalSmp,
    d: &Decomposition,
    x: usize,
) -> Result<StateVector> {
    check_input(p, x, "alice")?;
    let p = p.pad_to_square();
    check_decomposition(&p, d)?;
    if d.rw() == 0.0 {
        return Err(Error::DegenerateWidth);
    }
    let layout = FingerprintLayout::decomposition(d);
    let mut amps = vec![0.0; layout.dim()];
    let w = 1.0 / (d.rw() * (p.coin_count() as f64).sqrt());
    for l in 0..p.coin_count() {
        let (e, _) = &d.factors()[l];
        let a = p.alice_message(x, l);
        for k in 0..d.inner_dim() {
            amps[layout.index(0, l, k)] = w * e.get(a, k);
        }
    }
    pad_with_junk(&mut amps, layout.index(1, 0, 0));
    StateVector::new(amps)
}

/// Bob's decomposition fingerprint: the flag-0 block holds column
/// `b(y, l)` of `F_l` scaled by `1/(cw sqrt(L))`; junk sits on flag 2
/// (binary `10`), orthogonal to Alice's padding.
pub fn bob_fingerprint_decomp(
    p: &ClassicalSmp,
    d: &Decomposition,
    y: usize,
) -> Result<StateVector> {
    check_input(p, y, "bob")?;
    let p = p.pad_to_square();
    check_decomposition(&p, d)?;
    if d.cw() == 0.0 {
        return Err(Error::DegenerateWidth);
    }
    let layout = FingerprintLayout::decomposition(d);
    let mut amps = vec![0.0; layout.dim()];
    let w = 1.0 / (d.cw() * (p.coin_count() as f64).sqrt());
    for l in 0..p.coin_count() {
        let (_, f) = &d.factors()[l];
        let b = p.bob_message(y, l);
        for k in 0..d.inner_dim() {
            amps[layout.index(0, l, k)] = w * f.get(k, b);
        }
    }
    pad_with_junk(&mut amps, layout.index(2, 0, 0));
    StateVector::new(amps)
}

/// Euclidean inner product of two states of equal dimension.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(u.amps().iter().zip(v.amps()).map(|(a, b)| a * b).sum())
}
