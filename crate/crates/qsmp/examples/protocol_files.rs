//! File formats: protocols and matrices round-trip through their text
//! formats, and validation reports serialize to JSON.
//!
//! Run: `cargo run --example protocol_files`

use qsmp::smp::{ClassicalSmp, CorrectnessThresholds, TargetFunction};
use qsmp::zoo::random_protocol;

fn main() -> qsmp::Result<()> {
    let p = random_protocol(2, 4, 1, 2, 0.5, 123)?;
    let text = p.to_text();
    println!("--- protocol text format (n L cA cB; tables; matrices) ---");
    print!("{text}");

    let back = ClassicalSmp::parse(&text)?;
    assert_eq!(back, p);
    println!("--- parses back identically ---\n");

    // validate against an arbitrary target and dump the JSON report
    let target = TargetFunction::from_fn(2, |x, y| x == y);
    let th = CorrectnessThresholds::new(0.25, 0.75)?;
    let report = p.validate(&target, &th)?;
    println!(
        "validation against equality, thresholds (0.25, 0.75): valid = {}",
        report.valid
    );
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
