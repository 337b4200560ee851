//! Cyclic diagonal decompositions: write any boolean matrix as a sum of M
//! (diagonal PSD) x (cyclic permutation) terms, validate the terms, and
//! convert the sum into a product decomposition with factor norms capped by
//! sqrt(W).
//!
//! Run: `cargo run --example cyclic_convw`

use qsmp::width::{convw_to_rcw, cyclic_diagonal_decomposition, validate_convw};
use qsmp::{BooleanMatrix, RealMatrix};

fn main() -> qsmp::Result<()> {
    let d = BooleanMatrix::new(RealMatrix::new(
        4,
        4,
        vec![
            1.0, 1.0, 0.0, 0.0, //
            0.0, 1.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, 1.0, //
            1.0, 0.0, 0.0, 1.0,
        ],
    )?)?;
    println!("matrix D:\n{}", d.to_text());

    let cd = cyclic_diagonal_decomposition(&d)?;
    println!("cyclic decomposition into W = {} terms:", cd.w());
    for (j, (g, _)) in cd.terms().iter().enumerate() {
        let diag: Vec<String> = (0..g.rows()).map(|i| format!("{}", g.get(i, i))).collect();
        println!("  G_{j} = diag({})  paired with cyclic shift by {j}", diag.join(", "));
    }
    println!("validation: {:?}", validate_convw(d.as_real(), &cd));

    let dec = convw_to_rcw(d.as_real(), &cd)?;
    let (e, f) = &dec.factors()[0];
    println!("\nconverted to one product with inner dimension K = {}", dec.inner_dim());
    println!("rn(E) = {:.6} (cap sqrt(W) = {:.6})", e.row_norm(), (cd.w() as f64).sqrt());
    println!("cn(F) = {:.6}", f.column_norm());
    println!("rcw from this certificate: {:.6}", dec.rcw());
    println!("reconstruction residual: {:.3e}", dec.reconstruction_residual());
    Ok(())
}
