//! Classical public-coin simultaneous message protocols.
//!
//! A protocol holds explicit message tables `a(x, l)` and `b(y, l)` plus one
//! boolean referee matrix per coin value. The coin is uniform over `[L]`;
//! acceptance probabilities are exact rationals `count / L` evaluated in
//! integer arithmetic. Everything is immutable after construction.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BooleanMatrix;

/// A public-coin simultaneous message protocol with uniform coin over `[L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalSmp {
    n: u32,
    coin_count: usize,
    c_a: u32,
    c_b: u32,
    alice_msg: Vec<Vec<usize>>,
    bob_msg: Vec<Vec<usize>>,
    referee: Vec<BooleanMatrix>,
}

impl ClassicalSmp {
    /// Build and validate a protocol.
    ///
    /// `alice_msg` and `bob_msg` are `2^n x L` tables of messages;
    /// `referee` holds exactly `L` matrices of shape `2^c_a x 2^c_b`.
    pub fn new(
        n: u32,
        c_a: u32,
        c_b: u32,
        alice_msg: Vec<Vec<usize>>,
        bob_msg: Vec<Vec<usize>>,
        referee: Vec<BooleanMatrix>,
    ) -> Result<Self> {
        if n == 0 || n > 14 {
            return Err(Error::InvalidConfig(format!("input length n={n} outside 1..=14")));
        }
        if c_a > 16 || c_b > 16 {
            return Err(Error::InvalidConfig("message length above 16 bits".into()));
        }
        if referee.is_empty() {
            return Err(Error::InvalidConfig("protocol needs at least one coin value".into()));
        }
        let coin_count = referee.len();
        let inputs = 1usize << n;
        let (ma, mb) = (1usize << c_a, 1usize << c_b);
        for d in &referee {
            if d.rows() != ma || d.cols() != mb {
                return Err(Error::DimensionMismatch(format!(
                    "referee matrix is {}x{}, expected {ma}x{mb}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        check_table("alice", &alice_msg, inputs, coin_count, ma)?;
        check_table("bob", &bob_msg, inputs, coin_count, mb)?;
        Ok(Self { n, coin_count, c_a, c_b, alice_msg, bob_msg, referee })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of public-coin values `L`.
    pub fn coin_count(&self) -> usize {
        self.coin_count
    }

    pub fn c_a(&self) -> u32 {
        self.c_a
    }

    pub fn c_b(&self) -> u32 {
        self.c_b
    }

    /// Alice's message-space size `2^c_a`.
    pub fn ma(&self) -> usize {
        1 << self.c_a
    }

    /// Bob's message-space size `2^c_b`.
    pub fn mb(&self) -> usize {
        1 << self.c_b
    }

    /// Number of possible inputs per party, `2^n`.
    pub fn input_count(&self) -> usize {
        1 << self.n
    }

    pub fn alice_message(&self, x: usize, l: usize) -> usize {
        self.alice_msg[x][l]
    }

    pub fn bob_message(&self, y: usize, l: usize) -> usize {
        self.bob_msg[y][l]
    }

    pub fn referee_matrix(&self, l: usize) -> &BooleanMatrix {
        &self.referee[l]
    }

    pub fn referee_family(&self) -> &[BooleanMatrix] {
        &self.referee
    }

    fn check_inputs(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.input_count() || y >= self.input_count() {
            return Err(Error::IndexOutOfRange(format!(
                "input pair ({x}, {y}) with n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Number of coin values on which the referee outputs 1 for `(x, y)`.
    pub fn accepting_coins(&self, x: usize, y: usize) -> Result<usize> {
        self.check_inputs(x, y)?;
        let mut count = 0usize;
        for l in 0..self.coin_count {
            let a = self.alice_msg[x][l];
            let b = self.bob_msg[y][l];
            count += self.referee[l].bit(a, b) as usize;
        }
        Ok(count)
    }

    /// `Pr_l[D_l(a(x,l), b(y,l)) = 1]`, exact up to the final division.
    pub fn acceptance_probability(&self, x: usize, y: usize) -> Result<f64> {
        Ok(self.accepting_coins(x, y)? as f64 / self.coin_count as f64)
    }

    /// Check the protocol against a target function: every `f = 1` pair must
    /// accept with probability at least `alpha1` and every `f = 0` pair with
    /// probability at most `alpha0`.
    pub fn validate(
        &self,
        f: &TargetFunction,
        th: &CorrectnessThresholds,
    ) -> Result<ValidationReport> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "target has n = {}, protocol has n = {}",
                f.n(),
                self.n
            )));
        }
        let mut violations = Vec::new();
        for x in 0..self.input_count() {
            for y in 0..self.input_count() {
                let p_acc = self.acceptance_probability(x, y)?;
                let fxy = f.value(x, y);
                let bad = match fxy {
                    1 => p_acc < th.alpha1(),
                    _ => p_acc > th.alpha0(),
                };
                if bad {
                    violations.push(Violation { x, y, f: fxy, p_acc });
                }
            }
        }
        Ok(ValidationReport { valid: violations.is_empty(), violations })
    }

    /// Zero-pad every referee matrix to `M x M` with `M = max(M_A, M_B)`.
    ///
    /// Message tables keep indexing the original ranges, so acceptance
    /// probabilities are unchanged on every input pair.
    pub fn pad_to_square(&self) -> ClassicalSmp {
        if self.c_a == self.c_b {
            return self.clone();
        }
        let c = self.c_a.max(self.c_b);
        let m = 1usize << c;
        let referee = self.referee.iter().map(|d| d.pad_to(m, m).expect("padding up")).collect();
        ClassicalSmp {
            n: self.n,
            coin_count: self.coin_count,
            c_a: c,
            c_b: c,
            alice_msg: self.alice_msg.clone(),
            bob_msg: self.bob_msg.clone(),
            referee,
        }
    }

    /// One classical run: draw a coin value and return the referee's bit.
    pub fn sample_run(&self, x: usize, y: usize, rng: &mut impl Rng) -> Result<u8> {
        self.check_inputs(x, y)?;
        let l = rng.random_range(0..self.coin_count);
        Ok(self.referee[l].bit(self.alice_msg[x][l], self.bob_msg[y][l]))
    }

    /// Parse the protocol text format: a header line `n L cA cB`, the two
    /// message tables (one row per input, `L` entries each), then `L`
    /// referee matrices in the matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines =
            text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing protocol header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("protocol header needs 'n L cA cB', got {header:?}")));
        }
        let n: u32 = parse_field(fields[0], "n")?;
        let coin_count: usize = parse_field(fields[1], "L")?;
        let c_a: u32 = parse_field(fields[2], "cA")?;
        let c_b: u32 = parse_field(fields[3], "cB")?;
        if n == 0 || n > 14 {
            return Err(Error::Parse(format!("n = {n} outside 1..=14")));
        }
        let inputs = 1usize << n;

        let mut read_table = |name: &str| -> Result<Vec<Vec<usize>>> {
            let mut table = Vec::with_capacity(inputs);
            for row in 0..inputs {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse(format!("{name} table truncated at row {row}")))?;
                let entries: Vec<usize> = line
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                    .collect::<Result<_>>()?;
                if entries.len() != coin_count {
                    return Err(Error::Parse(format!(
                        "{name} table row {row} has {} entries, expected {coin_count}",
                        entries.len()
                    )));
                }
                table.push(entries);
            }
            Ok(table)
        };
        let alice_msg = read_table("alice")?;
        let bob_msg = read_table("bob")?;

        let rest: Vec<&str> = lines.collect();
        let mut cursor = 0usize;
        let mut referee = Vec::with_capacity(coin_count);
        for i in 0..coin_count {
            if cursor >= rest.len() {
                return Err(Error::Parse(format!("missing referee matrix {i}")));
            }
            // each matrix block: header plus `rows` data lines
            let head: Vec<&str> = rest[cursor].split_whitespace().collect();
            if head.len() != 2 {
                return Err(Error::Parse(format!("bad matrix header {:?}", rest[cursor])));
            }
            let rows: usize = parse_field(head[0], "matrix rows")?;
            let end = cursor + 1 + rows;
            if end > rest.len() {
                return Err(Error::Parse(format!("referee matrix {i} truncated")));
            }
            let block = rest[cursor..end].join("\n");
            referee.push(BooleanMatrix::parse(&block)?);
            cursor = end;
        }
        if cursor != rest.len() {
            return Err(Error::Parse("trailing content after referee matrices".into()));
        }
        ClassicalSmp::new(n, c_a, c_b, alice_msg, bob_msg, referee)
    }

    /// Serialize to the protocol text format; `parse` round-trips this.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {}", self.n, self.coin_count, self.c_a, self.c_b);
        for table in [&self.alice_msg, &self.bob_msg] {
            for row in table {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        for d in &self.referee {
            out.push_str(&d.to_text());
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(tok: &str, name: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse(format!("bad {name}: {tok:?}")))
}

fn check_table(
    name: &str,
    table: &[Vec<usize>],
    inputs: usize,
    coin_count: usize,
    space: usize,
) -> Result<()> {
    if table.len() != inputs {
        return Err(Error::DimensionMismatch(format!(
            "{name} table has {} rows, expected {inputs}",
            table.len()
        )));
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != coin_count {
            return Err(Error::DimensionMismatch(format!(
                "{name} table row {x} has {} entries, expected {coin_count}",
                row.len()
            )));
        }
        for (l, &msg) in row.iter().enumerate() {
            if msg >= space {
                return Err(Error::IndexOutOfRange(format!(
                    "{name} message {msg} at (x={x}, l={l}) exceeds space {space}"
                )));
            }
        }
    }
    Ok(())
}

/// Target function as an explicit `2^n x 2^n` truth table.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetFunction {
    n: u32,
    table: Vec<u8>,
}

impl TargetFunction {
    pub fn from_fn(n: u32, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let inputs = 1usize << n;
        let mut table = Vec::with_capacity(inputs * inputs);
        for x in 0..inputs {
            for y in 0..inputs {
                table.push(f(x, y) as u8);
            }
        }
        Self { n, table }
    }

    /// Equality: `f(x, y) = 1` iff `x = y`.
    pub fn equality(n: u32) -> Self {
        Self::from_fn(n, |x, y| x == y)
    }

    pub fn from_matrix(m: &BooleanMatrix) -> Result<Self> {
        let inputs = m.rows();
        if !m.is_square() || !inputs.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "target table must be square with power-of-two size, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = inputs.trailing_zeros();
        Ok(Self::from_fn(n, |x, y| m.bit(x, y) == 1))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self, x: usize, y: usize) -> u8 {
        self.table[x * (1 << self.n) + y]
    }
}

/// Acceptance thresholds: `f = 0` pairs must accept with probability at most
/// `alpha0`, `f = 1` pairs with probability at least `alpha1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectnessThresholds {
    alpha0: f64,
    alpha1: f64,
}

impl CorrectnessThresholds {
    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0 < 0.5) {
            return Err(Error::InvalidConfig(format!("alpha0 = {alpha0} outside (0, 1/2)")));
        }
        if !(alpha1 > 0.5 && alpha1 < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha1 = {alpha1} outside (1/2, 1)")));
        }
        Ok(Self { alpha0, alpha1 })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
}

impl Default for CorrectnessThresholds {
    /// `(1/3, 2/3)`: the guarantee after reducing to a uniform coin.
    fn default() -> Self {
        Self { alpha0: 1.0 / 3.0, alpha1: 2.0 / 3.0 }
    }
}

/// Outcome of [`ClassicalSmp::validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// One input pair on which the protocol misses its threshold.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    pub f: u8,
    pub p_acc: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn const_protocol(n: u32, bit: bool) -> ClassicalSmp {
        let inputs = 1usize << n;
        let referee = vec![BooleanMatrix::from_fn(2, 2, |_, _| bit)];
        ClassicalSmp::new(
            n,
            1,
            1,
            vec![vec![0]; inputs],
            vec![vec![0]; inputs],
            referee,
        )
        .unwrap()
    }

    #[test]
    fn constant_protocols_have_constant_acceptance() {
        let ones = const_protocol(2, true);
        let zeros = const_protocol(2, false);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(ones.acceptance_probability(x, y).unwrap(), 1.0);
                assert_eq!(zeros.acceptance_probability(x, y).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn acceptance_rejects_out_of_range_inputs() {
        let p = const_protocol(2, true);
        assert!(matches!(p.acceptance_probability(4, 0), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn validate_all_ones_against_constant_targets() {
        let p = const_protocol(2, true);
        let th = CorrectnessThresholds::new(1.0 / 3.0, 2.0 / 3.0).unwrap();
        let f1 = TargetFunction::from_fn(2, |_, _| true);
        assert!(p.validate(&f1, &th).unwrap().valid);

        let f0 = TargetFunction::from_fn(2, |_, _| false);
        let report = p.validate(&f0, &th).unwrap();
        assert!(!report.valid);
        assert_eq!(report.violations.len(), 16); // every pair listed
    }

    #[test]
    fn validate_is_monotone_in_thresholds() {
        // loosening thresholds never turns a valid protocol invalid
        let p = const_protocol(2, true);
        let f1 = TargetFunction::from_fn(2, |_, _| true);
        let strict = CorrectnessThresholds::new(0.25, 0.75).unwrap();
        let loose = CorrectnessThresholds::new(0.4, 0.6).unwrap();
        assert!(p.validate(&f1, &strict).unwrap().valid);
        assert!(p.validate(&f1, &loose).unwrap().valid);
    }

    #[test]
    fn pad_to_square_preserves_acceptance() {
        // 2x4 referee with asymmetric message spaces
        let referee = vec![
            BooleanMatrix::from_fn(2, 4, |r, c| (r + c) % 2 == 0),
            BooleanMatrix::from_fn(2, 4, |r, c| r == 0 && c == 3),
        ];
        let p = ClassicalSmp::new(
            2,
            1,
            2,
            vec![vec![0, 1], vec![1, 0], vec![0, 0], vec![1, 1]],
            vec![vec![3, 0], vec![2, 1], vec![0, 2], vec![1, 3]],
            referee,
        )
        .unwrap();
        let sq = p.pad_to_square();
        assert_eq!(sq.ma(), 4);
        assert_eq!(sq.mb(), 4);
        for l in 0..2 {
            for r in 2..4 {
                for c in 0..4 {
                    assert_eq!(sq.referee_matrix(l).bit(r, c), 0);
                }
            }
        }
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(
                    p.acceptance_probability(x, y).unwrap(),
                    sq.acceptance_probability(x, y).unwrap()
                );
            }
        }
        // already-square protocols come back unchanged
        let square = const_protocol(2, true);
        assert_eq!(square.pad_to_square(), square);
    }

    #[test]
    fn sampling_matches_constant_referees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ones = const_protocol(2, true);
        let zeros = const_protocol(2, false);
        for _ in 0..100 {
            assert_eq!(ones.sample_run(1, 2, &mut rng).unwrap(), 1);
            assert_eq!(zeros.sample_run(1, 2, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn sampling_mean_tracks_acceptance_probability() {
        // two coins, referee accepts on exactly one of them for (0, 0)
        let referee = vec![
            BooleanMatrix::from_fn(2, 2, |r, c| r == 0 && c == 0),
            BooleanMatrix::from_fn(2, 2, |_, _| false),
        ];
        let p = ClassicalSmp::new(
            1,
            1,
            1,
            vec![vec![0, 0], vec![1, 1]],
            vec![vec![0, 0], vec![1, 1]],
            referee,
        )
        .unwrap();
        let p_acc = p.acceptance_probability(0, 0).unwrap();
        assert_eq!(p_acc, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let trials = 100_000;
        let mut hits = 0usize;
        for _ in 0..trials {
            hits += p.sample_run(0, 0, &mut rng).unwrap() as usize;
        }
        let mean = hits as f64 / trials as f64;
        assert!((mean - p_acc).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn protocol_text_round_trip() {
        let referee = vec![
            BooleanMatrix::from_fn(2, 4, |r, c| (r * 2 + c) % 3 == 0),
            BooleanMatrix::from_fn(2, 4, |r, c| r == 1 && c == 2),
        ];
        let p = ClassicalSmp::new(
            1,
            1,
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![3, 2], vec![0, 1]],
            referee,
        )
        .unwrap();
        let text = p.to_text();
        let q = ClassicalSmp::parse(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_text(), text);
    }

    #[test]
    fn parse_rejects_malformed_protocols() {
        assert!(matches!(ClassicalSmp::parse(""), Err(Error::Parse(_))));
        assert!(matches!(ClassicalSmp::parse("1 1 1"), Err(Error::Parse(_))));
        // truncated referee matrix
        let text = "1 1 1 1\n0\n1\n0\n1\n2 2\n1 0\n";
        assert!(matches!(ClassicalSmp::parse(text), Err(Error::Parse(_))));
        // message out of range
        let text = "1 1 1 1\n0\n3\n0\n1\n2 2\n1 0\n0 1\n";
        assert!(matches!(ClassicalSmp::parse(text), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn thresholds_are_validated() {
        assert!(CorrectnessThresholds::new(0.5, 0.75).is_err());
        assert!(CorrectnessThresholds::new(0.25, 0.5).is_err());
        assert!(CorrectnessThresholds::new(0.25, 0.75).is_ok());
    }
}
