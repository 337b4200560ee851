//! The decomposition compilation: choose a factorization D_l = E_l F_l,
//! send E-rows to Alice and F-columns to Bob, and the inner product divisor
//! becomes rw * cw instead of sqrt(M_A).
//!
//! Run: `cargo run --example decomposition_fingerprints`

use qsmp::fingerprint::{alice_fingerprint_decomp, bob_fingerprint_decomp, inner_product};
use qsmp::width::{balance_decomposition, svd_decomposition, trivial_decomposition};
use qsmp::zoo::random_protocol;

fn main() -> qsmp::Result<()> {
    let p = random_protocol(3, 8, 2, 3, 0.5, 42)?.pad_to_square();
    println!(
        "random protocol: n = {}, L = {}, padded referee {}x{}\n",
        p.n(),
        p.coin_count(),
        p.ma(),
        p.mb()
    );

    let generators: Vec<(&str, qsmp::Decomposition)> = vec![
        ("trivial", trivial_decomposition(p.referee_family())?),
        ("svd", svd_decomposition(p.referee_family())?),
        (
            "svd-balanced",
            balance_decomposition(&svd_decomposition(p.referee_family())?, 50),
        ),
    ];

    println!("{:<14} {:>8} {:>8} {:>8}   worst identity deviation", "method", "rw", "cw", "rcw");
    for (name, d) in &generators {
        let mut worst = 0.0f64;
        for x in 0..p.input_count() {
            let u = alice_fingerprint_decomp(&p, d, x)?;
            for y in 0..p.input_count() {
                let v = bob_fingerprint_decomp(&p, d, y)?;
                let got = inner_product(&u, &v)? * d.rcw();
                worst = worst.max((got - p.acceptance_probability(x, y)?).abs());
            }
        }
        let (rw, cw, rcw) = d.widths();
        println!("{name:<14} {rw:>8.4} {cw:>8.4} {rcw:>8.4}   {worst:.3e}");
    }

    println!(
        "\nsmaller rcw means a smaller gap divisor, and the referee's copy \
         count scales as (rw*cw)^4"
    );
    Ok(())
}
