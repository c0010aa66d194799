//! Independent checks that do not go through the tail equation: finite
//! truncations of the tail, resolvents of finite paths, and the block
//! factorizations behind the Schur complement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{build_path, couple, Graph, GraphError};
use crate::numerics::{repeated_roots, sym_eigenvalues, Dd, Matrix, NumericsError, Scalar, SymMatrix, ROOT_TOL};
use crate::poly::charpoly;
use crate::tail::{full_spectrum_report, green_free, TailError};

/// Default distance beyond ±2 for a truncated eigenvalue to count as an outlier.
pub const OUTLIER_MARGIN: f64 = 0.02;

/// Tolerance for counting truncated eigenvalues at a Γ₁ eigenvalue.
pub const PROBE_TOL: f64 = 1e-8;

const MAX_CONDITION: f64 = 1e6;
const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Tail(#[from] TailError),
    #[error("tail length must be positive")]
    ZeroLength,
    #[error("lengths must be strictly increasing")]
    UnsortedLengths,
    #[error("index ({i}, {j}) outside 1..={len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
    #[error("no well-conditioned block matrix after {0} resamples")]
    IllConditioned(usize),
}

/// A(Γ₁ + P_L): the tail occupies labels n+1..=n+L, its first vertex bridged
/// to the anchor.
pub fn truncate(g: &Graph, length: usize) -> Result<SymMatrix, OracleError> {
    if length == 0 {
        return Err(OracleError::ZeroLength);
    }
    let tail = build_path(length)?.with_anchor(1)?;
    let coupled = couple(g, &tail)?;
    Ok(adjacency_matrix(&coupled))
}

pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    let mut m = SymMatrix::zeros(g.n());
    for (a, b) in g.edges() {
        m.set(a - 1, b - 1, 1.0);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub length: usize,
    pub total_dim: usize,
    pub eigenvalues: Vec<f64>,
    pub outliers: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Largest |outlier − predicted| over sorted pairs; `None` when the
    /// counts differ.
    pub max_abs_error: Option<f64>,
    /// Largest gap between consecutive eigenvalues inside [−2, 2].
    pub band_fill: f64,
}

impl TruncationReport {
    pub fn counts_match(&self) -> bool {
        self.outliers.len() == self.predicted.len()
    }

    /// Per-eigenvalue errors against the prediction, in sorted order.
    pub fn errors(&self) -> Vec<f64> {
        if !self.counts_match() {
            return Vec::new();
        }
        self.outliers
            .iter()
            .zip(&self.predicted)
            .map(|(a, b)| (a - b).abs())
            .collect()
    }
}

/// Eigenvalues of truncations at each length, with band outliers matched
/// against the tail-equation prediction. Lengths are processed on separate
/// threads; the result is in input order.
pub fn convergence_study(
    g: &Graph,
    lengths: &[usize],
    margin: f64,
) -> Result<Vec<TruncationReport>, OracleError> {
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OracleError::UnsortedLengths);
    }
    let predicted = full_spectrum_report(g)?.lambdas();
    let results: Vec<Result<TruncationReport, OracleError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = lengths
            .iter()
            .map(|&len| {
                let predicted = &predicted;
                scope.spawn(move || truncation_report(g, len, margin, predicted))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("truncation worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

pub fn truncation_report(
    g: &Graph,
    length: usize,
    margin: f64,
    predicted: &[f64],
) -> Result<TruncationReport, OracleError> {
    let m = truncate(g, length)?;
    let eigenvalues = sym_eigenvalues(&m)?;
    let outliers: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|v| v.abs() > 2.0 + margin)
        .collect();
    let max_abs_error = (outliers.len() == predicted.len()).then(|| {
        outliers
            .iter()
            .zip(predicted)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    });
    let inside: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|v| v.abs() <= 2.0)
        .collect();
    let band_fill = inside.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(TruncationReport {
        length,
        total_dim: m.dim(),
        eigenvalues,
        outliers,
        predicted: predicted.to_vec(),
        max_abs_error,
        band_fill,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventCheck {
    pub z: f64,
    pub lambda: f64,
    pub i: usize,
    pub j: usize,
    pub length: usize,
    pub numeric: f64,
    pub exact: f64,
    pub residual: f64,
}

fn check_resolvent_args(z: f64, i: usize, j: usize, length: usize) -> Result<(), OracleError> {
    if length == 0 {
        return Err(OracleError::ZeroLength);
    }
    if i == 0 || j == 0 || i > length || j > length {
        return Err(OracleError::IndexOutOfRange { i, j, len: length });
    }
    if !(z != 0.0 && z.abs() < 1.0) {
        return Err(TailError::InvalidZ(z.to_string()).into());
    }
    Ok(())
}

/// Compares entry (i, j) of (λI − A(P_L))⁻¹, λ = z + 1/z, obtained by a
/// dense solve, with the infinite-path closed form.
pub fn resolvent_check(z: f64, i: usize, j: usize, length: usize) -> Result<ResolventCheck, OracleError> {
    check_resolvent_args(z, i, j, length)?;
    let lambda = z + z.recip();
    let mut m = Matrix::zeros(length, length);
    for k in 0..length {
        m[(k, k)] = lambda;
        if k + 1 < length {
            m[(k, k + 1)] = -1.0;
            m[(k + 1, k)] = -1.0;
        }
    }
    let mut rhs = Matrix::zeros(length, 1);
    rhs[(j - 1, 0)] = 1.0;
    let numeric = m.solve(&rhs)?[(i - 1, 0)];
    let exact = green_free(z, i, j)?;
    Ok(ResolventCheck {
        z,
        lambda,
        i,
        j,
        length,
        numeric,
        exact,
        residual: (numeric - exact).abs(),
    })
}

/// The same comparison carried out in exact rational arithmetic for the
/// rational number nearest `z` (exact for dyadic z such as 0.5).
///
/// Floating-point residuals bottom out near 10⁻¹⁷; this variant measures the
/// truncation error itself at any length.
pub fn resolvent_residual_exact(z: f64, i: usize, j: usize, length: usize) -> Result<f64, OracleError> {
    check_resolvent_args(z, i, j, length)?;
    let zq = BigRational::from_float(z).expect("finite z");
    let lambda = &zq + zq.recip();
    // Tridiagonal solve (Thomas algorithm) for column j of the inverse.
    let n = length;
    let mut diag = vec![lambda.clone(); n];
    let mut rhs = vec![BigRational::zero(); n];
    rhs[j - 1] = BigRational::one();
    let off = -BigRational::one();
    for k in 1..n {
        let w = &off / &diag[k - 1];
        diag[k] = &diag[k] - &w * &off;
        let prev = rhs[k - 1].clone();
        rhs[k] = &rhs[k] - &w * prev;
    }
    let mut x = vec![BigRational::zero(); n];
    x[n - 1] = &rhs[n - 1] / &diag[n - 1];
    for k in (0..n - 1).rev() {
        x[k] = (&rhs[k] - &off * &x[k + 1]) / &diag[k];
    }
    // r_ij(z) = (z^{i+j} − z^{|i−j|}) / (z − 1/z)
    let pow = |e: usize| -> BigRational {
        (0..e).fold(BigRational::one(), |acc, _| acc * &zq)
    };
    let exact = (pow(i + j) - pow(i.abs_diff(j))) / (&zq - zq.recip());
    Ok(rational_to_f64(&(&x[i - 1] - exact).abs()))
}

/// Converts without underflowing through huge numerators and denominators.
fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    let shift = num_bits - den_bits - 60;
    let scaled = if shift >= 0 {
        q / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        q * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Relative residuals of the block identities for one block matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurResiduals {
    /// A = [I 0; A₂₁A₁₁⁻¹ I]·diag(A₁₁, C₂₂)·[I A₁₁⁻¹A₁₂; 0 I]
    pub factor_lower: f64,
    /// A = [I A₁₂A₂₂⁻¹; 0 I]·diag(C₁₁, A₂₂)·[I 0; A₂₂⁻¹A₂₁ I]
    pub factor_upper: f64,
    /// Block inverse written with C₁₁, against a direct inverse.
    pub inverse_c11: f64,
    /// Block inverse written with C₂₂, against a direct inverse.
    pub inverse_c22: f64,
    /// |det A − det A₁₁·det C₂₂| / |det A|
    pub det_c22: f64,
    /// |det A − det A₂₂·det C₁₁| / |det A|
    pub det_c11: f64,
}

impl SchurResiduals {
    pub fn max_factor(&self) -> f64 {
        self.factor_lower.max(self.factor_upper)
    }

    pub fn max_inverse(&self) -> f64 {
        self.inverse_c11.max(self.inverse_c22)
    }

    pub fn max_det(&self) -> f64 {
        self.det_c22.max(self.det_c11)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit<T = f64> {
    pub a11: Matrix<T>,
    pub a12: Matrix<T>,
    pub a21: Matrix<T>,
    pub a22: Matrix<T>,
}

impl<T: Scalar> BlockSplit<T> {
    pub fn new(a: &Matrix<T>, dim1: usize) -> Self {
        let n = a.rows();
        let dim2 = n - dim1;
        Self {
            a11: a.block(0, 0, dim1, dim1),
            a12: a.block(0, dim1, dim1, dim2),
            a21: a.block(dim1, 0, dim2, dim1),
            a22: a.block(dim1, dim1, dim2, dim2),
        }
    }

    /// C₁₁ = A₁₁ − A₁₂A₂₂⁻¹A₂₁
    pub fn c11(&self) -> Result<Matrix<T>, NumericsError> {
        let x = self.a22.solve(&self.a21)?;
        Ok(&self.a11 - &(&self.a12 * &x))
    }

    /// C₂₂ = A₂₂ − A₂₁A₁₁⁻¹A₁₂
    pub fn c22(&self) -> Result<Matrix<T>, NumericsError> {
        let x = self.a11.solve(&self.a12)?;
        Ok(&self.a22 - &(&self.a21 * &x))
    }
}

fn rel(diff: &Matrix<Dd>, scale: &Matrix<Dd>) -> f64 {
    diff.max_abs() / scale.max_abs().max(f64::MIN_POSITIVE)
}

/// Verifies both factorizations, both block-inverse formulas, and the two
/// determinant identities for `a` split after row/column `dim1`.
///
/// Everything downstream of `a` runs in double-double. In plain f64 the
/// reconstructed factorization picks up errors of order ε·κ(A₁₁)², which for
/// κ near the 10⁶ sampling cap swamps the 10⁻¹² target even though the
/// identities hold exactly.
pub fn schur_residuals(a: &Matrix, dim1: usize) -> Result<SchurResiduals, NumericsError> {
    let a: &Matrix<Dd> = &a.convert();
    let neg_one = Dd::from_f64(-1.0);
    let b = BlockSplit::new(a, dim1);
    let (d1, d2) = (b.a11.rows(), b.a22.rows());
    let i1 = Matrix::identity(d1);
    let i2 = Matrix::identity(d2);
    let z12 = Matrix::zeros(d1, d2);
    let z21 = Matrix::zeros(d2, d1);
    let a11_inv = b.a11.inverse()?;
    let a22_inv = b.a22.inverse()?;
    let c11 = b.c11()?;
    let c22 = b.c22()?;

    let lower = Matrix::from_blocks(&i1, &z12, &(&b.a21 * &a11_inv), &i2);
    let mid = Matrix::from_blocks(&b.a11, &z12, &z21, &c22);
    let upper = Matrix::from_blocks(&i1, &(&a11_inv * &b.a12), &z21, &i2);
    let factor_lower = rel(&(&(&(&lower * &mid) * &upper) - a), a);

    let upper2 = Matrix::from_blocks(&i1, &(&b.a12 * &a22_inv), &z21, &i2);
    let mid2 = Matrix::from_blocks(&c11, &z12, &z21, &b.a22);
    let lower2 = Matrix::from_blocks(&i1, &z12, &(&a22_inv * &b.a21), &i2);
    let factor_upper = rel(&(&(&(&upper2 * &mid2) * &lower2) - a), a);

    let direct = a.inverse()?;

    let c11_inv = c11.inverse()?;
    let t = &(&c11_inv * &b.a12) * &a22_inv;
    let s = &a22_inv * &b.a21;
    let inv1 = Matrix::from_blocks(
        &c11_inv,
        &t.scaled(neg_one),
        &(&s * &c11_inv).scaled(neg_one),
        &(&a22_inv + &(&(&s * &c11_inv) * &(&b.a12 * &a22_inv))),
    );
    let inverse_c11 = rel(&(&inv1 - &direct), &direct);

    let c22_inv = c22.inverse()?;
    let u = &a11_inv * &b.a12;
    let v = &b.a21 * &a11_inv;
    let inv2 = Matrix::from_blocks(
        &(&a11_inv + &(&(&u * &c22_inv) * &v)),
        &(&u * &c22_inv).scaled(neg_one),
        &(&c22_inv * &v).scaled(neg_one),
        &c22_inv,
    );
    let inverse_c22 = rel(&(&inv2 - &direct), &direct);

    let det = a.determinant();
    let det_c22 = ((det - b.a11.determinant() * c22.determinant()) / det).abs().to_f64();
    let det_c11 = ((det - b.a22.determinant() * c11.determinant()) / det).abs().to_f64();
    Ok(SchurResiduals {
        factor_lower,
        factor_upper,
        inverse_c11,
        inverse_c22,
        det_c22,
        det_c11,
    })
}

/// Random symmetric block matrix with entries uniform in [−1, 1], resampled
/// until A, A₁₁ and A₂₂ all have 1-norm condition number ≤ 10⁶.
pub fn random_block_matrix(dim1: usize, dim2: usize, seed: u64) -> Result<Matrix, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dim1 + dim2;
    for _ in 0..MAX_RESAMPLES {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.gen_range(-1.0..=1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let b = BlockSplit::new(&a, dim1);
        if [&a, &b.a11, &b.a22]
            .iter()
            .all(|m| m.condition1() <= MAX_CONDITION)
        {
            return Ok(a);
        }
    }
    Err(OracleError::IllConditioned(MAX_RESAMPLES))
}

pub fn schur_identity_check(dim1: usize, dim2: usize, seed: u64) -> Result<SchurResiduals, OracleError> {
    if dim1 == 0 || dim2 == 0 {
        return Err(NumericsError::Dimension("block dimensions must be positive".into()).into());
    }
    let a = random_block_matrix(dim1, dim2, seed)?;
    Ok(schur_residuals(&a, dim1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Truncated eigenvalues within [`PROBE_TOL`] of `eigenvalue`.
    pub persisted: usize,
}

/// For each eigenvalue of Γ₁ with multiplicity ≥ 3, counts how many
/// eigenvalues of the length-L truncation coincide with it. Returns an empty
/// list when Γ₁ is disconnected.
pub fn embedded_multiplicity_probe(g: &Graph, length: usize) -> Result<Vec<ProbeEntry>, OracleError> {
    g.require_anchor()?;
    if !g.is_connected() {
        return Ok(Vec::new());
    }
    let repeated = repeated_roots(&charpoly(g), 3, ROOT_TOL)?;
    if repeated.is_empty() {
        return Ok(Vec::new());
    }
    let eigenvalues = sym_eigenvalues(&truncate(g, length)?)?;
    Ok(repeated
        .into_iter()
        .map(|(eigenvalue, multiplicity)| ProbeEntry {
            eigenvalue,
            multiplicity,
            persisted: eigenvalues
                .iter()
                .filter(|v| (*v - eigenvalue).abs() <= PROBE_TOL)
                .count(),
        })
        .collect())
}
