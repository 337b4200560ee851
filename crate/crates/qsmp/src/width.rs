//! Row-column width machinery for referee matrix families.
//!
//! A decomposition writes every matrix of a family as a product
//! `D_l = E_l F_l` with a shared inner dimension `K`. Its row width is the
//! RMS of the factor row norms, `rw = sqrt(mean_l rn(E_l)^2)`, the column
//! width is `cw = sqrt(mean_l cn(F_l)^2)` over the `F_l`, and the
//! row-column width is their product. The true row-column width of a family
//! is the minimum over all decompositions; this module produces certified
//! upper bounds from explicit generators and a trace-norm lower bound, never
//! an exact minimizer.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{BooleanMatrix, RealMatrix};
use crate::svd::{self, DEFAULT_RANK_TOL};
use crate::zoo;

/// Max-abs residual allowed between `E_l F_l` and `D_l`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Default sweep count for [`balance_decomposition`].
pub const DEFAULT_BALANCE_ITERS: usize = 50;

/// A validated family decomposition `{D_l = E_l F_l}` with cached widths.
///
/// Constructor-enforced invariants: all factors share shapes `M x K` and
/// `K x M` with `K <= M^2`, and every product reconstructs its family
/// member within [`RECONSTRUCTION_TOL`] max-abs.
#[derive(Clone, Debug)]
pub struct Decomposition {
    family: Vec<RealMatrix>,
    factors: Vec<(RealMatrix, RealMatrix)>,
    k: usize,
    rw: f64,
    cw: f64,
}

impl Decomposition {
    pub fn new(family: Vec<RealMatrix>, factors: Vec<(RealMatrix, RealMatrix)>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidConfig("decomposition needs a nonempty family".into()));
        }
        if family.len() != factors.len() {
            return Err(Error::DecompositionMismatch(format!(
                "{} factor pairs for {} matrices",
                factors.len(),
                family.len()
            )));
        }
        let m = family[0].rows();
        for d in &family {
            if !d.is_square() || d.rows() != m {
                return Err(Error::DecompositionMismatch(format!(
                    "family member is {}x{}, expected {m}x{m}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        let k = factors[0].0.cols();
        if k > m * m {
            return Err(Error::DecompositionMismatch(format!(
                "inner dimension {k} exceeds M^2 = {}",
                m * m
            )));
        }
        for (l, (e, f)) in factors.iter().enumerate() {
            if e.rows() != m || e.cols() != k || f.rows() != k || f.cols() != m {
                return Err(Error::DecompositionMismatch(format!(
                    "factor pair {l} has shapes {}x{} and {}x{}, expected {m}x{k} and {k}x{m}",
                    e.rows(),
                    e.cols(),
                    f.rows(),
                    f.cols()
                )));
            }
            let residual = e.matmul(f)?.max_abs_diff(&family[l])?;
            if residual > RECONSTRUCTION_TOL {
                return Err(Error::DecompositionMismatch(format!(
                    "pair {l} reconstructs with residual {residual:e}"
                )));
            }
        }
        let (rw, cw) = widths_of(&factors);
        Ok(Self { family, factors, k, rw, cw })
    }

    pub fn from_boolean_family(
        family: &[BooleanMatrix],
        factors: Vec<(RealMatrix, RealMatrix)>,
    ) -> Result<Self> {
        Self::new(family.iter().map(|d| d.as_real().clone()).collect(), factors)
    }

    /// Number of coin values `L`.
    pub fn family_size(&self) -> usize {
        self.family.len()
    }

    /// Side length `M` of the (square) family members.
    pub fn matrix_size(&self) -> usize {
        self.family[0].rows()
    }

    /// Shared inner dimension `K`.
    pub fn inner_dim(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> &[RealMatrix] {
        &self.family
    }

    pub fn factors(&self) -> &[(RealMatrix, RealMatrix)] {
        &self.factors
    }

    pub fn rw(&self) -> f64 {
        self.rw
    }

    pub fn cw(&self) -> f64 {
        self.cw
    }

    pub fn rcw(&self) -> f64 {
        self.rw * self.cw
    }

    /// `(rw, cw, rcw)` in one call.
    pub fn widths(&self) -> (f64, f64, f64) {
        (self.rw, self.cw, self.rcw())
    }

    /// Worst max-abs residual over the family.
    pub fn reconstruction_residual(&self) -> f64 {
        self.factors
            .iter()
            .zip(&self.family)
            .map(|((e, f), d)| e.matmul(f).unwrap().max_abs_diff(d).unwrap())
            .fold(0.0, f64::max)
    }
}

fn widths_of(factors: &[(RealMatrix, RealMatrix)]) -> (f64, f64) {
    let l = factors.len() as f64;
    let rw2: f64 = factors.iter().map(|(e, _)| e.row_norm().powi(2)).sum::<f64>() / l;
    let cw2: f64 = factors.iter().map(|(_, f)| f.column_norm().powi(2)).sum::<f64>() / l;
    (rw2.sqrt(), cw2.sqrt())
}

fn square_family_size(family: &[BooleanMatrix]) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::InvalidConfig("family must be nonempty".into()));
    }
    let m = family[0].rows();
    for d in family {
        if !d.is_square() || d.rows() != m {
            return Err(Error::NotSquare { rows: d.rows(), cols: d.cols() });
        }
    }
    Ok(m)
}

/// `D_l = I * D_l`: row width exactly 1, column width the RMS of the
/// largest column norms, hence `rcw <= sqrt(M)` for boolean families.
pub fn trivial_decomposition(family: &[BooleanMatrix]) -> Result<Decomposition> {
    let m = square_family_size(family)?;
    let factors = family
        .iter()
        .map(|d| (RealMatrix::identity(m), d.as_real().clone()))
        .collect();
    Decomposition::from_boolean_family(family, factors)
}

/// Per-member SVD split `D_l = (U sqrt(S)) (sqrt(S) V^T)`.
///
/// Both factor norms are bounded by the square root of the largest singular
/// value, so the result never exceeds the largest operator norm in the
/// family.
pub fn svd_decomposition(family: &[BooleanMatrix]) -> Result<Decomposition> {
    let m = square_family_size(family)?;
    let mut factors = Vec::with_capacity(family.len());
    for d in family {
        let dec = svd::svd(d.as_real())?;
        let roots: Vec<f64> = dec.sigma.iter().map(|s| s.max(0.0).sqrt()).collect();
        let e = RealMatrix::from_fn(m, m, |i, j| dec.u.get(i, j) * roots[j]);
        let f = RealMatrix::from_fn(m, m, |i, j| roots[i] * dec.v.get(j, i));
        factors.push((e, f));
    }
    Decomposition::from_boolean_family(family, factors)
}

/// A sum-of-terms decomposition `D = sum_j G_j P_j` with permutation
/// matrices `P_j` and symmetric PSD nonnegative `G_j`.
#[derive(Clone, Debug)]
pub struct ConvwDecomposition {
    terms: Vec<(RealMatrix, BooleanMatrix)>,
}

impl ConvwDecomposition {
    pub fn new(terms: Vec<(RealMatrix, BooleanMatrix)>) -> Self {
        Self { terms }
    }

    /// Number of terms `W`.
    pub fn w(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(RealMatrix, BooleanMatrix)] {
        &self.terms
    }
}

/// Split `D` along cyclic diagonals: term `j` keeps the entries with
/// `b - a = j (mod M)`, written as `G_j P_j` where `P_j` is the cyclic
/// shift by `j` and `G_j` is diagonal boolean. Exhibits `convw(D) <= M`
/// for every boolean matrix.
pub fn cyclic_diagonal_decomposition(d: &BooleanMatrix) -> Result<ConvwDecomposition> {
    if !d.is_square() {
        return Err(Error::NotSquare { rows: d.rows(), cols: d.cols() });
    }
    let m = d.rows();
    let mut terms = Vec::with_capacity(m);
    for j in 0..m {
        let p = BooleanMatrix::from_fn(m, m, |a, b| b == (a + j) % m);
        let g = RealMatrix::from_fn(m, m, |a, b| {
            if a == b {
                d.get(a, (a + j) % m)
            } else {
                0.0
            }
        });
        terms.push((g, p));
    }
    Ok(ConvwDecomposition::new(terms))
}

/// First condition violated by a convex-width style decomposition.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvwViolation {
    ShapeMismatch(usize),
    NotPermutation(usize),
    NotSymmetric(usize),
    NotPsd(usize),
    NegativeEntry(usize),
    EigenFailure(usize),
    Reconstruction(f64),
}

impl fmt::Display for ConvwViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch(j) => write!(f, "term {j} has mismatched shape"),
            Self::NotPermutation(j) => write!(f, "P_{j} is not a permutation matrix"),
            Self::NotSymmetric(j) => write!(f, "G_{j} is not symmetric"),
            Self::NotPsd(j) => write!(f, "G_{j} is not positive semidefinite"),
            Self::NegativeEntry(j) => write!(f, "G_{j} has a negative entry"),
            Self::EigenFailure(j) => write!(f, "eigendecomposition failed on G_{j}"),
            Self::Reconstruction(r) => write!(f, "terms sum with residual {r:e}"),
        }
    }
}

/// Pass/fail outcome of [`validate_convw`].
#[derive(Clone, Debug, PartialEq)]
pub enum ConvwValidation {
    Pass,
    Fail(ConvwViolation),
}

impl ConvwValidation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Self::Pass)
    }
}

const CONVW_SYMMETRY_TOL: f64 = 1e-9;
const CONVW_PSD_TOL: f64 = 1e-9;
const CONVW_ENTRY_TOL: f64 = 1e-12;

/// Check every requirement on a convex-width style decomposition of `d`:
/// permutation property, symmetry, positive semidefiniteness, entry
/// non-negativity, and reconstruction. Reports the first violation.
pub fn validate_convw(d: &RealMatrix, cd: &ConvwDecomposition) -> ConvwValidation {
    use ConvwValidation::{Fail, Pass};
    let m = d.rows();
    if !d.is_square() {
        return Fail(ConvwViolation::ShapeMismatch(0));
    }
    for (j, (g, p)) in cd.terms().iter().enumerate() {
        if g.rows() != m || g.cols() != m || p.rows() != m || p.cols() != m {
            return Fail(ConvwViolation::ShapeMismatch(j));
        }
    }
    for (j, (_, p)) in cd.terms().iter().enumerate() {
        for r in 0..m {
            let row_sum: f64 = (0..m).map(|c| p.get(r, c)).sum();
            if row_sum != 1.0 {
                return Fail(ConvwViolation::NotPermutation(j));
            }
        }
        for c in 0..m {
            let col_sum: f64 = (0..m).map(|r| p.get(r, c)).sum();
            if col_sum != 1.0 {
                return Fail(ConvwViolation::NotPermutation(j));
            }
        }
    }
    for (j, (g, _)) in cd.terms().iter().enumerate() {
        if g.asymmetry() > CONVW_SYMMETRY_TOL {
            return Fail(ConvwViolation::NotSymmetric(j));
        }
    }
    for (j, (g, _)) in cd.terms().iter().enumerate() {
        match svd::symmetric_eigen(g) {
            Ok(eig) => {
                if eig.values.last().copied().unwrap_or(0.0) < -CONVW_PSD_TOL {
                    return Fail(ConvwViolation::NotPsd(j));
                }
            }
            Err(_) => return Fail(ConvwViolation::EigenFailure(j)),
        }
    }
    for (j, (g, _)) in cd.terms().iter().enumerate() {
        if g.entries().iter().any(|&v| v < -CONVW_ENTRY_TOL) {
            return Fail(ConvwViolation::NegativeEntry(j));
        }
    }
    let mut sum = RealMatrix::zeros(m, m);
    for (g, p) in cd.terms() {
        sum = sum.add(&g.matmul(p.as_real()).unwrap()).unwrap();
    }
    let residual = sum.max_abs_diff(d).unwrap();
    if residual > RECONSTRUCTION_TOL {
        return Fail(ConvwViolation::Reconstruction(residual));
    }
    Pass
}

/// Convert a `W`-term decomposition `D = sum_j G_j P_j` into a single
/// product decomposition with inner dimension `K = M W`: take
/// `T_j = sqrt(G_j)`, concatenate the `T_j^T` horizontally into `E` and
/// stack the `T_j P_j` vertically into `F`.
///
/// When every `G_j` entry lies in `[0, 1]` the blocks satisfy
/// `rn(E_j) = cn(F_j) = sqrt(max G_j)`, which caps both factor norms at
/// `sqrt(W)` and hence the row-column width at `W`.
pub fn convw_to_rcw(d: &RealMatrix, cd: &ConvwDecomposition) -> Result<Decomposition> {
    if let ConvwValidation::Fail(v) = validate_convw(d, cd) {
        return Err(Error::InvalidConfig(format!("convex-width decomposition invalid: {v}")));
    }
    let m = d.rows();
    let w = cd.w();
    let mut roots = Vec::with_capacity(w);
    for (g, _) in cd.terms() {
        roots.push(svd::psd_sqrt(g)?);
    }
    let e = RealMatrix::from_fn(m, m * w, |i, col| {
        let (j, inner) = (col / m, col % m);
        // E_j = T_j^T
        roots[j].get(inner, i)
    });
    let mut f = RealMatrix::zeros(m * w, m);
    for (j, (_, p)) in cd.terms().iter().enumerate() {
        let block = roots[j].matmul(p.as_real())?;
        for r in 0..m {
            for c in 0..m {
                f.set(j * m + r, c, block.get(r, c));
            }
        }
    }
    Decomposition::new(vec![d.clone()], vec![(e, f)])
}

/// Rebalance factor pairs with positive diagonal scalings: scaling column
/// `k` of `E_l` by `s` and row `k` of `F_l` by `1/s` never changes the
/// product, so each sweep equalizes the per-index masses geometrically.
/// Keeps the best iterate; the result never has larger `rcw` than the
/// input.
pub fn balance_decomposition(d: &Decomposition, iters: usize) -> Decomposition {
    let mut work = d.factors().to_vec();
    let mut best = d.clone();
    for _ in 0..iters {
        for (e, f) in work.iter_mut() {
            for k in 0..e.cols() {
                let en = e.column_norm_at(k);
                let fn_ = f.row_norm_at(k);
                if en > 0.0 && fn_ > 0.0 {
                    let s = (fn_ / en).sqrt();
                    for i in 0..e.rows() {
                        e.set(i, k, e.get(i, k) * s);
                    }
                    for j in 0..f.cols() {
                        f.set(k, j, f.get(k, j) / s);
                    }
                } else if en == 0.0 && fn_ > 0.0 {
                    // zero column in E: the matching F row cannot contribute
                    for j in 0..f.cols() {
                        f.set(k, j, 0.0);
                    }
                } else if fn_ == 0.0 && en > 0.0 {
                    for i in 0..e.rows() {
                        e.set(i, k, 0.0);
                    }
                }
            }
        }
        let (rw, cw) = widths_of(&work);
        // non-strict: adopt equally-good iterates so the returned factors
        // are the balanced ones even when rcw was already optimal
        if rw * cw <= best.rcw() {
            best = Decomposition {
                family: d.family().to_vec(),
                factors: work.clone(),
                k: d.inner_dim(),
                rw,
                cw,
            };
        }
    }
    best
}

/// Certified lower bound `trace_norm(D) / M <= rcw(D)` for a single square
/// matrix, from the Hoelder chain
/// `trace_norm(EF) <= fro(E) fro(F) <= M rn(E) cn(F)`.
pub fn rcw_lower_bound(d: &RealMatrix) -> Result<f64> {
    if !d.is_square() {
        return Err(Error::NotSquare { rows: d.rows(), cols: d.cols() });
    }
    Ok(svd::trace_norm(d)? / d.rows() as f64)
}

/// Values behind the sqrt(M)-optimality argument for the inner-product
/// matrix, evaluated at one instance size.
#[derive(Clone, Debug, Serialize)]
pub struct IpLowerBoundReport {
    pub n: u32,
    pub m: usize,
    /// `D_pm^2 = M I`, checked in exact integer arithmetic.
    pub hadamard_identity: bool,
    pub trace_norm_signed: f64,
    /// `M^{3/2}`
    pub trace_norm_signed_expected: f64,
    pub trace_norm_ip: f64,
    /// `(M^{3/2} - M) / 2`
    pub trace_norm_ip_lower: f64,
    /// `trace_norm(D) / M`
    pub rcw_lower_bound: f64,
    /// `(sqrt(M) - 1) / 2`
    pub fact_lower_bound: f64,
}

impl IpLowerBoundReport {
    /// All documented identities hold at their tolerances.
    pub fn all_checks_pass(&self) -> bool {
        self.hadamard_identity
            && (self.trace_norm_signed - self.trace_norm_signed_expected).abs()
                <= 1e-6 * self.trace_norm_signed_expected
            && self.trace_norm_ip >= self.trace_norm_ip_lower - 1e-6
            && self.rcw_lower_bound >= self.fact_lower_bound - 1e-6
    }
}

/// Build the inner-product matrix and its signed variant at size `2^n`,
/// verify the Hadamard-square identity exactly, and evaluate the trace-norm
/// lower bound chain.
pub fn ip_lower_bound_check(n: u32) -> Result<IpLowerBoundReport> {
    let d = zoo::ip_matrix(n)?;
    let signed = zoo::ip_signed_matrix(n)?;
    let m = d.rows();

    // integer check of D_pm^2 = M I
    let ints: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| signed.get(i, j) as i64).collect())
        .collect();
    let mut hadamard_identity = true;
    'outer: for i in 0..m {
        for j in 0..m {
            let mut acc = 0i64;
            for (k, row) in ints.iter().enumerate() {
                acc += ints[i][k] * row[j];
            }
            let expect = if i == j { m as i64 } else { 0 };
            if acc != expect {
                hadamard_identity = false;
                break 'outer;
            }
        }
    }

    let m_f = m as f64;
    let trace_norm_signed = svd::trace_norm(&signed)?;
    let trace_norm_ip = svd::trace_norm(d.as_real())?;
    Ok(IpLowerBoundReport {
        n,
        m,
        hadamard_identity,
        trace_norm_signed,
        trace_norm_signed_expected: m_f.powf(1.5),
        trace_norm_ip,
        trace_norm_ip_lower: (m_f.powf(1.5) - m_f) / 2.0,
        rcw_lower_bound: trace_norm_ip / m_f,
        fact_lower_bound: (m_f.sqrt() - 1.0) / 2.0,
    })
}

/// Width-bound survey of a referee matrix family.
#[derive(Clone, Debug, Serialize)]
pub struct WidthReport {
    #[serde(rename = "M")]
    pub m: usize,
    pub family_size: usize,
    /// Numeric rank; single-matrix families only.
    pub rank: Option<usize>,
    /// Upper bound achieved by each generator.
    pub bounds: BTreeMap<String, f64>,
    pub sqrt_m_bound: f64,
    pub column_norm_bound: f64,
    pub operator_norm_bound: f64,
    /// Trace-norm lower bound; single-matrix families only.
    pub lower_bound_trace: Option<f64>,
    pub best_rcw_upper: f64,
    pub notes: Vec<String>,
    /// Certificate file references, populated when reports are written out.
    #[serde(rename = "certificates")]
    pub certificate_files: BTreeMap<String, Vec<String>>,
    /// The certifying decompositions themselves.
    #[serde(skip)]
    pub certificates: BTreeMap<String, Decomposition>,
}

/// Run every applicable generator on the family, collect analytic bounds,
/// and bracket the row-column width from both sides.
///
/// Errors with [`Error::Consistency`] if the certified lower bound ever
/// exceeds the best upper bound beyond tolerance.
pub fn width_report(family: &[BooleanMatrix]) -> Result<WidthReport> {
    let m = square_family_size(family)?;
    let mut certificates = BTreeMap::new();

    let trivial = trivial_decomposition(family)?;
    certificates.insert("trivial-balanced".to_string(),
        balance_decomposition(&trivial, DEFAULT_BALANCE_ITERS));
    certificates.insert("trivial".to_string(), trivial);

    let by_svd = svd_decomposition(family)?;
    certificates.insert("svd-balanced".to_string(),
        balance_decomposition(&by_svd, DEFAULT_BALANCE_ITERS));
    certificates.insert("svd".to_string(), by_svd);

    if family.len() == 1 {
        let cd = cyclic_diagonal_decomposition(&family[0])?;
        certificates.insert("cyclic-convw".to_string(), convw_to_rcw(family[0].as_real(), &cd)?);
    }

    let bounds: BTreeMap<String, f64> =
        certificates.iter().map(|(name, d)| (name.clone(), d.rcw())).collect();
    let best_rcw_upper =
        bounds.values().copied().fold(f64::INFINITY, f64::min);

    let column_norm_bound =
        family.iter().map(|d| d.column_norm()).fold(0.0, f64::max);
    let mut operator_norm_bound = 0.0f64;
    for d in family {
        operator_norm_bound = operator_norm_bound.max(svd::operator_norm(d.as_real())?);
    }

    let (rank, lower_bound_trace) = if family.len() == 1 {
        (
            Some(svd::numeric_rank(family[0].as_real(), DEFAULT_RANK_TOL)?),
            Some(rcw_lower_bound(family[0].as_real())?),
        )
    } else {
        (None, None)
    };

    let mut notes = Vec::new();
    if let Some(r) = rank {
        if best_rcw_upper > r as f64 + 1e-6 {
            notes.push(format!(
                "no generator reached the rank bound: best {best_rcw_upper} > rank {r}"
            ));
        }
    }
    if let Some(lower) = lower_bound_trace {
        if lower > best_rcw_upper + 1e-6 {
            return Err(Error::Consistency { lower, upper: best_rcw_upper });
        }
    }

    Ok(WidthReport {
        m,
        family_size: family.len(),
        rank,
        bounds,
        sqrt_m_bound: (m as f64).sqrt(),
        column_norm_bound,
        operator_norm_bound,
        lower_bound_trace,
        best_rcw_upper,
        notes,
        certificate_files: BTreeMap::new(),
        certificates,
    })
}
