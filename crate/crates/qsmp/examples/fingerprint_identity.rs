//! The basic compilation: fingerprint inner products recover classical
//! acceptance probabilities divided by sqrt(M_A).
//!
//! Run: `cargo run --example fingerprint_identity`

use qsmp::fingerprint::{alice_fingerprint_basic, bob_fingerprint_basic, inner_product};
use qsmp::smp::CorrectnessThresholds;
use qsmp::zoo::{build_equality_protocol, EqualityParams};

fn main() -> qsmp::Result<()> {
    let params = EqualityParams { n: 4, coin_count: 64, hash_bits: 3, seed: 7 };
    let th = CorrectnessThresholds::new(0.25, 0.75)?;
    let p = build_equality_protocol(&params, &th)?;
    let scale = (p.ma() as f64).sqrt();

    println!(
        "equality protocol: n = {}, L = {}, messages {} bits each",
        p.n(),
        p.coin_count(),
        p.c_a()
    );
    println!("gap divisor sqrt(M_A) = {scale:.6}\n");

    println!("  x   y   p_acc     <u|v>*sqrt(MA)   deviation");
    for (x, y) in [(3, 3), (3, 5), (12, 12), (0, 15)] {
        let u = alice_fingerprint_basic(&p, x)?;
        let v = bob_fingerprint_basic(&p, y)?;
        let ip = inner_product(&u, &v)?;
        let p_acc = p.acceptance_probability(x, y)?;
        println!(
            "{x:>3} {y:>3}   {p_acc:<8.5} {:<16.12} {:.3e}",
            ip * scale,
            (ip * scale - p_acc).abs()
        );
    }

    // exhaustive check over all 256 input pairs
    let mut worst = 0.0f64;
    for x in 0..p.input_count() {
        let u = alice_fingerprint_basic(&p, x)?;
        for y in 0..p.input_count() {
            let v = bob_fingerprint_basic(&p, y)?;
            let ip = inner_product(&u, &v)?;
            worst = worst.max((ip * scale - p.acceptance_probability(x, y)?).abs());
        }
    }
    println!("\nworst deviation over all pairs: {worst:.3e}");
    Ok(())
}
