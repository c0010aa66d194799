//! Spectrum of Γ₁ + P∞: a finite anchored graph with the one-sided infinite
//! path attached at its anchor.
//!
//! The essential spectrum is always the band [−2, 2]. Off the band, write
//! λ = x + 1/x with 0 < |x| < 1; the Green's function of the path at its
//! first vertex is then x, and λ is an eigenvalue exactly when
//! P(λ, Γ₁) − x·P(λ, Γ₁∖v₁) = 0. Clearing denominators turns this into an
//! integer polynomial in x whose roots in (−1, 0) ∪ (0, 1) are isolated
//! exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{delete_vertices, Graph, GraphError};
use crate::numerics::{real_roots, NumericsError, SymMatrix, ROOT_TOL};
use crate::poly::{charpoly, tail_equation_poly, IntPoly, PolyError};

/// The essential spectrum of the free path.
pub const BAND: [f64; 2] = [-2.0, 2.0];

/// Roots with |x| above this are flagged as near the band edge.
pub const NEAR_BAND_X: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TailError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("Green's function parameter must satisfy 0 < |z| < 1, got {0}")]
    InvalidZ(String),
    #[error("Green's function indices are 1-based, got ({0}, {1})")]
    InvalidIndex(usize, usize),
    #[error("lambda = {0} lies in the band [-2, 2]")]
    InsideBand(f64),
}

/// G(λ, Γ₂) for the graph attached at the anchor, on real λ off its spectrum.
pub trait TailGreen {
    fn green(&self, lambda: f64) -> Option<f64>;
}

/// The one-sided infinite path, G(λ) = x where λ = x + 1/x and |x| < 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreePath;

impl TailGreen for FreePath {
    fn green(&self, lambda: f64) -> Option<f64> {
        joukowski_inverse(lambda)
    }
}

/// The solution x of λ = x + 1/x with |x| < 1, for real |λ| > 2.
pub fn joukowski_inverse(lambda: f64) -> Option<f64> {
    if !(lambda.abs() > 2.0) {
        return None;
    }
    let root = ((lambda - 2.0) * (lambda + 2.0)).sqrt();
    Some(2.0 / (lambda + root.copysign(lambda)))
}

/// Entry (i, j) of (λI − J₀)⁻¹ with λ = z + 1/z:
/// (z^{i+j} − z^{|i−j|}) / (z − 1/z).
pub fn green_free(z: f64, i: usize, j: usize) -> Result<f64, TailError> {
    if !(z != 0.0 && z.abs() < 1.0) {
        return Err(TailError::InvalidZ(z.to_string()));
    }
    check_indices(i, j)?;
    let num = z.powi((i + j) as i32) - z.powi(i.abs_diff(j) as i32);
    Ok(num / (z - z.recip()))
}

pub fn green_free_complex(z: Complex64, i: usize, j: usize) -> Result<Complex64, TailError> {
    if !(z.norm() > 0.0 && z.norm() < 1.0) {
        return Err(TailError::InvalidZ(z.to_string()));
    }
    check_indices(i, j)?;
    let num = z.powi((i + j) as i32) - z.powi(i.abs_diff(j) as i32);
    Ok(num / (z - z.inv()))
}

fn check_indices(i: usize, j: usize) -> Result<(), TailError> {
    if i == 0 || j == 0 {
        return Err(TailError::InvalidIndex(i, j));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    AboveBand,
    BelowBand,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteEigenvalue {
    pub lambda: f64,
    pub x: f64,
    pub side: Side,
    /// |P(λ) − x·Pv(λ)| in floating point.
    pub residual: f64,
    /// |x| > 1 − 10⁻⁶: the eigenvalue sits close enough to ±2 that its
    /// separation from the band is not numerically meaningful.
    pub near_band: bool,
}

impl DiscreteEigenvalue {
    pub fn from_x(x: f64, p: &IntPoly, pv: &IntPoly) -> Self {
        let lambda = x + x.recip();
        Self {
            lambda,
            x,
            side: if x > 0.0 { Side::AboveBand } else { Side::BelowBand },
            residual: (p.eval_f64(lambda) - x * pv.eval_f64(lambda)).abs(),
            near_band: x.abs() > NEAR_BAND_X,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub stripped_x_power: usize,
    pub s_degree: usize,
    /// Distinct roots of S at x = ±1 (λ = ±2), which are band edges.
    pub discarded_band_edge_roots: usize,
    pub charpoly: IntPoly,
    pub charpoly_without_anchor: IntPoly,
    pub tail_poly: IntPoly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub band: [f64; 2],
    pub eigenvalues: Vec<DiscreteEigenvalue>,
    pub diagnostics: Diagnostics,
}

impl SpectrumReport {
    pub fn lambdas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.lambda).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub root_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { root_tol: ROOT_TOL }
    }
}

/// Discrete spectrum of `g` + P∞, ordered by x.
pub fn discrete_spectrum(g: &Graph) -> Result<SpectrumReport, TailError> {
    discrete_spectrum_with(g, &SolverOptions::default())
}

pub fn discrete_spectrum_with(g: &Graph, opts: &SolverOptions) -> Result<SpectrumReport, TailError> {
    let anchor = g.require_anchor()?;
    let p = charpoly(g);
    let pv = charpoly(&delete_vertices(g, &[anchor])?);
    let tail = tail_equation_poly(&p, &pv)?;

    let one = BigRational::from_integer(BigInt::from(1));
    let minus_one = -one.clone();
    let zero = BigRational::from_integer(BigInt::from(0));
    let discarded = [&one, &minus_one]
        .iter()
        .filter(|x| tail.poly.eval_rational(x) == zero)
        .count();

    let mut eigenvalues = Vec::new();
    if tail.poly.degree().unwrap_or(0) > 0 {
        // S(0) ≠ 0 once powers of x are stripped, so (−1, 1) loses nothing.
        for root in real_roots(&tail.poly, &minus_one, &one, opts.root_tol)? {
            let x = root.refined.expect("real_roots refines").value;
            eigenvalues.push(DiscreteEigenvalue::from_x(x, &p, &pv));
        }
    }
    Ok(SpectrumReport {
        band: BAND,
        eigenvalues,
        diagnostics: Diagnostics {
            stripped_x_power: tail.stripped_x_power,
            s_degree: tail.poly.degree().unwrap_or(0),
            discarded_band_edge_roots: discarded,
            charpoly: p,
            charpoly_without_anchor: pv,
            tail_poly: tail.poly,
        },
    })
}

/// [`discrete_spectrum`] with eigenvalues sorted by λ ascending.
pub fn full_spectrum_report(g: &Graph) -> Result<SpectrumReport, TailError> {
    full_spectrum_report_with(g, &SolverOptions::default())
}

pub fn full_spectrum_report_with(
    g: &Graph,
    opts: &SolverOptions,
) -> Result<SpectrumReport, TailError> {
    let mut report = discrete_spectrum_with(g, opts)?;
    report
        .eigenvalues
        .sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(report)
}

/// C₁₁(λ) = λI − A(Γ₁) − G(λ)·E, E having a single 1 at the anchor.
pub fn schur_complement_matrix(g: &Graph, lambda: f64) -> Result<SymMatrix, TailError> {
    schur_complement_matrix_with(g, lambda, &FreePath)
}

pub fn schur_complement_matrix_with<G: TailGreen>(
    g: &Graph,
    lambda: f64,
    tail: &G,
) -> Result<SymMatrix, TailError> {
    let anchor = g.require_anchor()?;
    let green = tail.green(lambda).ok_or(TailError::InsideBand(lambda))?;
    let n = g.n();
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, lambda);
    }
    for (a, b) in g.edges() {
        m.set(a - 1, b - 1, -1.0);
    }
    m.set(anchor - 1, anchor - 1, lambda - green);
    Ok(m)
}
