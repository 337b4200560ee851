//! End-to-end referee simulation: fingerprints in, SWAP-test outcomes out,
//! with the Hoeffding copy count keeping the error below delta.
//!
//! Run: `cargo run --release --example swap_test_referee`

use qsmp::referee::{simulate_quantum_protocol, FingerprintMode, RefereeConfig};
use qsmp::smp::CorrectnessThresholds;
use qsmp::width::trivial_decomposition;
use qsmp::zoo::{build_equality_protocol, EqualityParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsmp::Result<()> {
    let params = EqualityParams { n: 4, coin_count: 64, hash_bits: 3, seed: 11 };
    let th = CorrectnessThresholds::new(0.25, 0.75)?;
    let p = build_equality_protocol(&params, &th)?;
    let delta = 0.25;

    let basic = RefereeConfig::basic(&p, 0.25, 0.75, delta)?;
    println!(
        "basic mode: g = sqrt(M_A) = {:.4}, required copies = {}",
        basic.g(),
        basic.required_copies()
    );

    // the identity referee family factors perfectly: rcw = 1
    let d = trivial_decomposition(p.referee_family())?;
    let dec = RefereeConfig::for_decomposition(&d, 0.25, 0.75, delta)?;
    println!(
        "decomposition mode: g = rw*cw = {:.4}, required copies = {}\n",
        dec.g(),
        dec.required_copies()
    );

    let trials = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (label, mode, cfg) in [
        ("basic", FingerprintMode::Basic, &basic),
        ("decomp:trivial", FingerprintMode::Decomposition(&d), &dec),
    ] {
        let mut wrong_eq = 0u32;
        let mut wrong_ne = 0u32;
        for _ in 0..trials {
            let s = simulate_quantum_protocol(&p, mode, 9, 9, cfg, &mut rng)?;
            if s.output != Some(1) {
                wrong_eq += 1;
            }
            let s = simulate_quantum_protocol(&p, mode, 4, 13, cfg, &mut rng)?;
            if s.output != Some(0) {
                wrong_ne += 1;
            }
        }
        println!(
            "{label:<15} error on x = y: {:.4}, error on x != y: {:.4}  (target <= {delta})",
            wrong_eq as f64 / trials as f64,
            wrong_ne as f64 / trials as f64,
        );
    }
    Ok(())
}
