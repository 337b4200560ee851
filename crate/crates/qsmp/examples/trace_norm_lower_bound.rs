//! Why sqrt(M) is the right order: the inner-product matrix has trace norm
//! at least (M^{3/2} - M)/2, which forces rcw >= (sqrt(M) - 1)/2 through
//! Hoelder's inequality.
//!
//! Run: `cargo run --release --example trace_norm_lower_bound`

use qsmp::width::{ip_lower_bound_check, width_report};
use qsmp::zoo::ip_matrix;

fn main() -> qsmp::Result<()> {
    println!(
        "{:>2} {:>4} {:>10} {:>12} {:>12} {:>12} {:>12}",
        "n", "M", "tn(D_pm)", "tn(D)", "rcw lower", "fact bound", "best upper"
    );
    for n in 1..=5 {
        let r = ip_lower_bound_check(n)?;
        assert!(r.hadamard_identity, "D_pm^2 = M*I must hold exactly");
        let upper = width_report(&[ip_matrix(n)?])?.best_rcw_upper;
        println!(
            "{:>2} {:>4} {:>10.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            r.n, r.m, r.trace_norm_signed, r.trace_norm_ip, r.rcw_lower_bound,
            r.fact_lower_bound, upper
        );
    }
    println!(
        "\nthe signed matrix squares to M*I, so all its singular values are \
         sqrt(M)\nand its trace norm is exactly M^(3/2); the bracket \
         [rcw lower, best upper]\ngrows like sqrt(M), matching the trivial \
         decomposition's upper bound"
    );
    Ok(())
}
