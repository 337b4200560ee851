//! Width reports: run every decomposition generator on a matrix, collect
//! analytic bounds, and bracket the row-column width from both sides.
//!
//! Run: `cargo run --example width_bounds`

use qsmp::width::width_report;
use qsmp::zoo::{first_column_ones, ip_matrix};
use qsmp::BooleanMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn show(label: &str, family: &[BooleanMatrix]) -> qsmp::Result<()> {
    let r = width_report(family)?;
    println!("{label} (M = {})", r.m);
    for (method, value) in &r.bounds {
        println!("  {method:<18} rcw <= {value:.6}");
    }
    println!("  {:<18} {:.6}", "sqrt(M)", r.sqrt_m_bound);
    println!("  {:<18} {:.6}", "max column norm", r.column_norm_bound);
    println!("  {:<18} {:.6}", "max operator norm", r.operator_norm_bound);
    if let Some(rank) = r.rank {
        println!("  {:<18} {rank}", "rank");
    }
    if let Some(lower) = r.lower_bound_trace {
        println!("  certified bracket  {:.6} <= rcw <= {:.6}", lower, r.best_rcw_upper);
    } else {
        println!("  best upper bound   {:.6}", r.best_rcw_upper);
    }
    println!();
    Ok(())
}

fn main() -> qsmp::Result<()> {
    show("identity matrix", &[BooleanMatrix::identity(8)])?;

    // rank-1 matrix where the sum-of-permutations route is stuck at
    // sqrt(M) but the product route certifies 1
    show("first column ones", &[first_column_ones(16)?])?;

    show("inner-product matrix", &[ip_matrix(3)?])?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let family: Vec<BooleanMatrix> =
        (0..4).map(|_| BooleanMatrix::from_fn(8, 8, |_, _| rng.random::<f64>() < 0.5)).collect();
    show("random family of 4 referee matrices", &family)?;
    Ok(())
}
