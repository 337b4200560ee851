//! SWAP-test referee simulated at the outcome-distribution level.
//!
//! On a pair of pure product states the controlled-SWAP test returns
//! outcome 0 with probability `(1 + <u|v>^2) / 2`, independently per copy.
//! The referee never sees the inner product itself: it counts zero outcomes
//! over `copies` independent tests and thresholds the zero fraction at the
//! midpoint of the two promise values. Sampling i.i.d. Bernoulli outcomes is
//! therefore an exact simulation, not an approximation, and keeps
//! `g^4`-scale repetition counts tractable.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingerprint::{
    alice_fingerprint_basic, alice_fingerprint_decomp, bob_fingerprint_basic,
    bob_fingerprint_decomp, inner_product, FingerprintLayout, StateVector,
};
use crate::smp::ClassicalSmp;
use crate::width::Decomposition;

/// Norm slack tolerated by [`swap_accept_prob`].
pub const SWAP_NORM_TOL: f64 = 1e-9;

/// Which fingerprint compilation the referee receives.
#[derive(Clone, Copy, Debug)]
pub enum FingerprintMode<'a> {
    Basic,
    Decomposition(&'a Decomposition),
}

/// Promise gap and repetition parameters for the quantum referee.
///
/// `g` is the gap divisor between classical acceptance probabilities and
/// fingerprint inner products: `sqrt(M_A)` for the basic compilation,
/// `rw * cw` for a decomposition.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefereeConfig {
    g: f64,
    alpha0: f64,
    alpha1: f64,
    delta: f64,
    copies_override: Option<u64>,
}

impl RefereeConfig {
    pub fn new(g: f64, alpha0: f64, alpha1: f64, delta: f64) -> Result<Self> {
        if !(g.is_finite() && g >= 1.0) {
            return Err(Error::InvalidConfig(format!("gap divisor g = {g} must be >= 1")));
        }
        if !(alpha0 > 0.0 && alpha0 < alpha1 && alpha1 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "thresholds must satisfy 0 < {alpha0} < {alpha1} < 1"
            )));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidConfig(format!("delta = {delta} outside (0, 1/2)")));
        }
        Ok(Self { g, alpha0, alpha1, delta, copies_override: None })
    }

    /// Config for the basic compilation of `p`: `g = sqrt(M_A)`.
    pub fn basic(p: &ClassicalSmp, alpha0: f64, alpha1: f64, delta: f64) -> Result<Self> {
        Self::new((p.ma() as f64).sqrt(), alpha0, alpha1, delta)
    }

    /// Config for a decomposition compilation: `g = rw * cw`.
    pub fn for_decomposition(
        d: &Decomposition,
        alpha0: f64,
        alpha1: f64,
        delta: f64,
    ) -> Result<Self> {
        Self::new(d.rcw(), alpha0, alpha1, delta)
    }

    /// Fix the number of copies instead of deriving it from the gap.
    pub fn with_copies(mut self, copies: u64) -> Self {
        self.copies_override = Some(copies);
        self
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Half the gap between the two promise zero-outcome rates:
    /// `t = (alpha1^2 - alpha0^2) / (4 g^2)`.
    pub fn half_gap(&self) -> f64 {
        (self.alpha1 * self.alpha1 - self.alpha0 * self.alpha0) / (4.0 * self.g * self.g)
    }

    /// Hoeffding repetition count `ceil(ln(2/delta) / (2 t^2))`: enough
    /// copies for the empirical zero fraction to separate the promise cases
    /// with error at most `delta`.
    pub fn required_copies(&self) -> u64 {
        let t = self.half_gap();
        ((2.0 / self.delta).ln() / (2.0 * t * t)).ceil() as u64
    }

    /// Copies actually used: the override if set, otherwise the Hoeffding
    /// count.
    pub fn copies(&self) -> Result<u64> {
        let c = self.copies_override.unwrap_or_else(|| self.required_copies());
        if c == 0 {
            return Err(Error::InvalidConfig("copies must be at least 1".into()));
        }
        Ok(c)
    }

    /// Zero-fraction decision threshold `(1 + m) / 2` where `m` is the
    /// midpoint of the two squared promise inner products.
    pub fn decision_threshold(&self) -> f64 {
        let m = (self.alpha1 * self.alpha1 + self.alpha0 * self.alpha0) / (2.0 * self.g * self.g);
        (1.0 + m) / 2.0
    }
}

/// Probability that one controlled-SWAP test on `(u, v)` returns outcome 0.
pub fn swap_accept_prob(u: &StateVector, v: &StateVector) -> Result<f64> {
    for s in [u, v] {
        let norm = s.norm();
        if (norm - 1.0).abs() > SWAP_NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
    }
    let s = inner_product(u, v)?;
    Ok((1.0 + s * s) / 2.0)
}

/// Threshold rule on the observed zero fraction; ties round up to 1.
pub fn decide(zero_fraction: f64, cfg: &RefereeConfig) -> u8 {
    debug_assert!((0.0..=1.0).contains(&zero_fraction));
    u8::from(zero_fraction >= cfg.decision_threshold())
}

/// Outcome and cost accounting for one simulated protocol run.
///
/// `output` and `swap_zero_fraction` are absent for cost-only reports.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationStats {
    pub output: Option<u8>,
    pub swap_zero_fraction: Option<f64>,
    pub copies: u64,
    pub qubits_alice: u64,
    pub qubits_bob: u64,
    pub total_qubits: u64,
    /// `g^2 (c_A + c_B + ceil(log2 L) + 2)` for side-by-side comparison
    /// with the measured qubit count.
    pub bound_formula_value: f64,
}

fn build_states(
    p: &ClassicalSmp,
    mode: FingerprintMode<'_>,
    x: usize,
    y: usize,
) -> Result<(StateVector, StateVector, FingerprintLayout)> {
    match mode {
        FingerprintMode::Basic => Ok((
            alice_fingerprint_basic(p, x)?,
            bob_fingerprint_basic(p, y)?,
            FingerprintLayout::basic(p),
        )),
        FingerprintMode::Decomposition(d) => Ok((
            alice_fingerprint_decomp(p, d, x)?,
            bob_fingerprint_decomp(p, d, y)?,
            FingerprintLayout::decomposition(d),
        )),
    }
}

fn cost_fields(p: &ClassicalSmp, layout: &FingerprintLayout, cfg: &RefereeConfig, copies: u64) -> (u64, u64, u64, f64) {
    // both parties carry the same layout in this simulation
    let qubits_alice = layout.qubits();
    let qubits_bob = layout.qubits();
    let total = copies * (qubits_alice + qubits_bob);
    let bound = cfg.g() * cfg.g()
        * (p.c_a() as f64
            + p.c_b() as f64
            + crate::fingerprint::ceil_log2(p.coin_count()) as f64
            + 2.0);
    (qubits_alice, qubits_bob, total, bound)
}

/// Full referee run on one input pair: build both fingerprints, sample
/// `copies` SWAP outcomes, and threshold the zero fraction.
pub fn simulate_quantum_protocol(
    p: &ClassicalSmp,
    mode: FingerprintMode<'_>,
    x: usize,
    y: usize,
    cfg: &RefereeConfig,
    rng: &mut impl Rng,
) -> Result<SimulationStats> {
    let (u, v, layout) = build_states(p, mode, x, y)?;
    let p_zero = swap_accept_prob(&u, &v)?;
    let copies = cfg.copies()?;
    let mut zeros = 0u64;
    for _ in 0..copies {
        if rng.random::<f64>() < p_zero {
            zeros += 1;
        }
    }
    let zero_fraction = zeros as f64 / copies as f64;
    let (qubits_alice, qubits_bob, total_qubits, bound_formula_value) =
        cost_fields(p, &layout, cfg, copies);
    Ok(SimulationStats {
        output: Some(decide(zero_fraction, cfg)),
        swap_zero_fraction: Some(zero_fraction),
        copies,
        qubits_alice,
        qubits_bob,
        total_qubits,
        bound_formula_value,
    })
}

/// Cost accounting without sampling: copies, per-party qubits, and the
/// closed-form bound value.
pub fn cost_report(
    p: &ClassicalSmp,
    mode: FingerprintMode<'_>,
    cfg: &RefereeConfig,
) -> Result<SimulationStats> {
    let layout = match mode {
        FingerprintMode::Basic => FingerprintLayout::basic(p),
        FingerprintMode::Decomposition(d) => {
            let padded = p.pad_to_square();
            if d.family_size() != padded.coin_count() || d.matrix_size() != padded.ma() {
                return Err(Error::DecompositionMismatch(format!(
                    "decomposition is {}x{} over {} coins, protocol needs {}x{} over {}",
                    d.matrix_size(),
                    d.matrix_size(),
                    d.family_size(),
                    padded.ma(),
                    padded.ma(),
                    padded.coin_count()
                )));
            }
            FingerprintLayout::decomposition(d)
        }
    };
    let copies = cfg.copies()?;
    let (qubits_alice, qubits_bob, total_qubits, bound_formula_value) =
        cost_fields(p, &layout, cfg, copies);
    Ok(SimulationStats {
        output: None,
        swap_zero_fraction: None,
        copies,
        qubits_alice,
        qubits_bob,
        total_qubits,
        bound_formula_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::BooleanMatrix;
    use crate::smp::CorrectnessThresholds;
    use crate::width::trivial_decomposition;
    use crate::zoo::{build_equality_protocol, EqualityParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(g: f64, a0: f64, a1: f64, delta: f64) -> RefereeConfig {
        RefereeConfig::new(g, a0, a1, delta).unwrap()
    }

    #[test]
    fn swap_prob_extremes() {
        let u = StateVector::new(vec![1.0, 0.0]).unwrap();
        let v = StateVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(swap_accept_prob(&u, &u).unwrap(), 1.0);
        assert_eq!(swap_accept_prob(&u, &v).unwrap(), 0.5);
    }

    #[test]
    fn swap_prob_at_known_overlap() {
        // <u|v> = 1/sqrt(8): probability (1 + 1/8)/2 = 9/16
        let s = (1.0f64 / 8.0).sqrt();
        let u = StateVector::new(vec![1.0, 0.0]).unwrap();
        let v = StateVector::new(vec![s, (1.0 - s * s).sqrt()]).unwrap();
        assert!((swap_accept_prob(&u, &v).unwrap() - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn swap_prob_rejects_unnormalized() {
        let u = StateVector::new(vec![0.5, 0.5]).unwrap();
        let v = StateVector::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(swap_accept_prob(&u, &v), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn required_copies_worked_example() {
        // t = (4/9 - 1/9)/4 = 1/12; ceil(ln 8 * 72) = 150
        let c = cfg(1.0, 1.0 / 3.0, 2.0 / 3.0, 0.25);
        assert!((c.half_gap() - 1.0 / 12.0).abs() < 1e-15);
        let independent = (8.0f64.ln() * 2.0 * 144.0 / 4.0).ceil() as u64;
        assert_eq!(c.required_copies(), 150);
        assert_eq!(c.required_copies(), independent);
    }

    #[test]
    fn required_copies_scales_with_fourth_power_of_g() {
        let base = cfg(1.0, 1.0 / 3.0, 2.0 / 3.0, 0.25);
        let t = base.half_gap();
        let raw = (2.0f64 / 0.25).ln() / (2.0 * t * t);
        for g2 in [2.0f64, 4.0, 8.0] {
            let scaled = cfg(g2.sqrt(), 1.0 / 3.0, 2.0 / 3.0, 0.25);
            let got = scaled.required_copies() as f64;
            let expect = g2 * g2 * raw;
            assert!(
                (got - expect).abs() <= 1.0,
                "g^2 = {g2}: {got} vs raw {expect}"
            );
        }
    }

    #[test]
    fn required_copies_monotonicity() {
        let narrow = cfg(1.0, 0.45, 0.55, 0.25);
        let wide = cfg(1.0, 0.25, 0.75, 0.25);
        assert!(narrow.required_copies() >= wide.required_copies());
        let small_g = cfg(1.0, 0.25, 0.75, 0.25);
        let big_g = cfg(3.0, 0.25, 0.75, 0.25);
        assert!(big_g.required_copies() >= small_g.required_copies());
        let lax = cfg(1.0, 0.25, 0.75, 0.4);
        let strict = cfg(1.0, 0.25, 0.75, 0.01);
        assert!(strict.required_copies() >= lax.required_copies());
    }

    #[test]
    fn decision_threshold_worked_example() {
        let c = cfg(2.0, 0.25, 0.75, 0.25);
        let expect = (1.0 + 5.0 / 64.0) / 2.0;
        assert!((c.decision_threshold() - expect).abs() < 1e-15);
        assert_eq!(decide(1.0, &c), 1);
        assert_eq!(decide(0.5, &c), 0);
        assert_eq!(decide(expect, &c), 1); // tie rounds up
    }

    #[test]
    fn config_validation() {
        assert!(RefereeConfig::new(0.5, 0.25, 0.75, 0.25).is_err());
        assert!(RefereeConfig::new(1.0, 0.75, 0.25, 0.25).is_err());
        assert!(RefereeConfig::new(1.0, 0.25, 0.75, 0.6).is_err());
        let c = cfg(1.0, 0.25, 0.75, 0.25).with_copies(0);
        assert!(matches!(c.copies(), Err(Error::InvalidConfig(_))));
    }

    fn equality_protocol() -> ClassicalSmp {
        let params = EqualityParams { n: 3, coin_count: 32, hash_bits: 3, seed: 13 };
        build_equality_protocol(&params, &CorrectnessThresholds::new(0.3, 0.7).unwrap()).unwrap()
    }

    #[test]
    fn simulation_separates_promise_cases() {
        let p = equality_protocol();
        let cfg = RefereeConfig::basic(&p, 0.3, 0.7, 0.25).unwrap();
        let trials = 200;
        let slack = 3.0 * (0.25f64 * 0.75 / trials as f64).sqrt();

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut wrong_equal = 0;
        let mut wrong_unequal = 0;
        for _ in 0..trials {
            let s = simulate_quantum_protocol(&p, FingerprintMode::Basic, 5, 5, &cfg, &mut rng)
                .unwrap();
            if s.output != Some(1) {
                wrong_equal += 1;
            }
            let s = simulate_quantum_protocol(&p, FingerprintMode::Basic, 2, 6, &cfg, &mut rng)
                .unwrap();
            if s.output != Some(0) {
                wrong_unequal += 1;
            }
        }
        let err1 = wrong_equal as f64 / trials as f64;
        let err0 = wrong_unequal as f64 / trials as f64;
        assert!(err1 <= 0.25 + slack, "error on equal inputs {err1}");
        assert!(err0 <= 0.25 + slack, "error on unequal inputs {err0}");
    }

    #[test]
    fn simulation_is_deterministic_under_seed() {
        let p = equality_protocol();
        let cfg = RefereeConfig::basic(&p, 0.3, 0.7, 0.25).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            simulate_quantum_protocol(&p, FingerprintMode::Basic, 1, 4, &cfg, &mut rng).unwrap()
        };
        let a = run(7);
        let b = run(7);
        assert_eq!(a.swap_zero_fraction, b.swap_zero_fraction);
        assert_eq!(a.output, b.output);
        assert_eq!(a.total_qubits, b.total_qubits);
    }

    #[test]
    fn decomposition_mode_runs_with_unit_gap() {
        // identity referee family: trivial decomposition has rcw = 1, the
        // smallest legal gap divisor, so far fewer copies than basic mode
        let p = equality_protocol();
        let d = trivial_decomposition(p.referee_family()).unwrap();
        assert!((d.rcw() - 1.0).abs() < 1e-12);
        let dec_cfg = RefereeConfig::for_decomposition(&d, 0.3, 0.7, 0.25).unwrap();
        let basic_cfg = RefereeConfig::basic(&p, 0.3, 0.7, 0.25).unwrap();
        assert!(dec_cfg.required_copies() < basic_cfg.required_copies());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = simulate_quantum_protocol(
            &p,
            FingerprintMode::Decomposition(&d),
            3,
            3,
            &dec_cfg,
            &mut rng,
        )
        .unwrap();
        assert_eq!(s.output, Some(1));
    }

    #[test]
    fn cost_report_small_layout() {
        // L = 1, M_A = M_B = 2: one flag qubit + one payload qubit per party
        let referee = vec![BooleanMatrix::identity(2)];
        let p = ClassicalSmp::new(1, 1, 1, vec![vec![0], vec![1]], vec![vec![0], vec![1]], referee)
            .unwrap();
        let cfg = RefereeConfig::basic(&p, 0.25, 0.75, 0.25).unwrap().with_copies(10);
        let s = cost_report(&p, FingerprintMode::Basic, &cfg).unwrap();
        assert_eq!(s.qubits_alice, 2);
        assert_eq!(s.qubits_bob, 2);
        assert_eq!(s.copies, 10);
        assert_eq!(s.total_qubits, 40);
        assert!(s.output.is_none());
    }

    #[test]
    fn stats_serialize_with_documented_fields() {
        let referee = vec![BooleanMatrix::identity(2)];
        let p = ClassicalSmp::new(1, 1, 1, vec![vec![0], vec![1]], vec![vec![0], vec![1]], referee)
            .unwrap();
        let cfg = RefereeConfig::basic(&p, 0.25, 0.75, 0.25).unwrap().with_copies(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = simulate_quantum_protocol(&p, FingerprintMode::Basic, 0, 0, &cfg, &mut rng)
            .unwrap();
        let v = serde_json::to_value(&s).unwrap();
        for key in [
            "output",
            "swap_zero_fraction",
            "copies",
            "qubits_alice",
            "qubits_bob",
            "total_qubits",
            "bound_formula_value",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn copy_count_reacts_to_message_length() {
        // doubling M_A doubles g^2 and so quadruples the copy count
        let a = cfg(2f64.sqrt(), 0.25, 0.75, 0.25);
        let b = cfg(2.0, 0.25, 0.75, 0.25);
        let ratio = b.required_copies() as f64 / a.required_copies() as f64;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }
}
