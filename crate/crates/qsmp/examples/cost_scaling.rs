//! Cost accounting: the Hoeffding copy count grows as g^4 in the gap
//! divisor, and total qubits are copies x per-copy layout width.
//!
//! Run: `cargo run --example cost_scaling`

use qsmp::referee::{cost_report, FingerprintMode, RefereeConfig};
use qsmp::smp::CorrectnessThresholds;
use qsmp::zoo::{build_equality_protocol, EqualityParams};

fn main() -> qsmp::Result<()> {
    let base = RefereeConfig::new(1.0, 1.0 / 3.0, 2.0 / 3.0, 0.25)?;
    let base_copies = base.required_copies();
    println!("copies at g = 1: {base_copies}\n");
    println!("{:>8} {:>12} {:>14}", "g^2", "copies", "copies/g^4");
    for g2 in [1.0f64, 2.0, 4.0, 8.0, 16.0] {
        let cfg = RefereeConfig::new(g2.sqrt(), 1.0 / 3.0, 2.0 / 3.0, 0.25)?;
        let copies = cfg.required_copies();
        println!("{:>8} {:>12} {:>14.2}", g2, copies, copies as f64 / (g2 * g2));
    }

    // per-copy qubit layout for a concrete protocol
    let params = EqualityParams { n: 4, coin_count: 64, hash_bits: 3, seed: 3 };
    let p = build_equality_protocol(&params, &CorrectnessThresholds::new(0.25, 0.75)?)?;
    let cfg = RefereeConfig::basic(&p, 0.25, 0.75, 0.25)?;
    let s = cost_report(&p, FingerprintMode::Basic, &cfg)?;
    println!(
        "\nequality protocol n = 4, L = 64, t = 3: per party {} qubits/copy",
        s.qubits_alice
    );
    println!("copies = {}, total qubits = {}", s.copies, s.total_qubits);
    println!("closed-form comparison value g^2 (cA + cB + log2 L + 2) = {}", s.bound_formula_value);
    Ok(())
}
