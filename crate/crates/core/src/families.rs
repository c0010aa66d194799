//! Closed-form solvers for two rooted families with a tail at the root:
//! the multiple star S(κ) and the flower with petals κ.
//!
//! With x = ±e^{−t} and Q(λ, m) = U_m(λ/2), each eigenvalue condition turns
//! into φ(t) = eᵗ for a strictly decreasing φ built from ratios of sinh.
//!
//! * star, either side: φ(t) = Σ sinh(kⱼt) / sinh((kⱼ+1)t)
//! * flower, above the band: φ(t) = 2Σ [sinh(kⱼt) + sinh t] / sinh((kⱼ+1)t)
//! * flower, below the band: φ(t) = 2Σ [sinh(kⱼt) + (−1)^{kⱼ+1} sinh t] / sinh((kⱼ+1)t)
//!
//! A side has an eigenvalue exactly when φ(0⁺) > 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Family, FamilySpec, GraphError};
use crate::numerics::{real_roots, solve_monotone_with, NumericsError, MIN_BRACKET_START, MONOTONE_TOL, ROOT_TOL};
use crate::poly::{chebyshev_table, IntPoly};
use crate::tail::{DiscreteEigenvalue, BAND};

/// Below this t the sinh ratios are replaced by their series.
const SERIES_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("uniform star needs n >= 2 and p >= 1, got n = {n}, p = {p}")]
    InvalidUniform { n: u32, p: u32 },
    #[error("expected a {expected:?} spec")]
    WrongFamily { expected: Family },
}

/// sinh(a·t) / sinh(b·t) for 0 ≤ a, 0 < b, t ≥ 0, without overflow.
pub fn sinh_ratio(a: f64, b: f64, t: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if t < SERIES_CUTOFF {
        return a / b * (1.0 + (a * a - b * b) * t * t / 6.0);
    }
    // e^{(a−b)t} · (1 − e^{−2at}) / (1 − e^{−2bt})
    ((a - b) * t).exp() * (-(-2.0 * a * t).exp_m1()) / (-(-2.0 * b * t).exp_m1())
}

/// The left-hand side φ of one of the family equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi<'a> {
    Star(&'a [u32]),
    FlowerAbove(&'a [u32]),
    FlowerBelow(&'a [u32]),
}

impl Phi<'_> {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Phi::Star(kappa) => kappa
                .iter()
                .map(|&k| sinh_ratio(k as f64, k as f64 + 1.0, t))
                .sum(),
            Phi::FlowerAbove(kappa) => {
                2.0 * kappa
                    .iter()
                    .map(|&k| {
                        let k = k as f64;
                        sinh_ratio(k, k + 1.0, t) + sinh_ratio(1.0, k + 1.0, t)
                    })
                    .sum::<f64>()
            }
            Phi::FlowerBelow(kappa) => {
                2.0 * kappa
                    .iter()
                    .map(|&k| {
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        let k = k as f64;
                        sinh_ratio(k, k + 1.0, t) + sign * sinh_ratio(1.0, k + 1.0, t)
                    })
                    .sum::<f64>()
            }
        }
    }

    /// lim_{t→0⁺} φ(t).
    pub fn zero_limit(&self) -> f64 {
        match *self {
            Phi::Star(kappa) => kappa.iter().map(|&k| k as f64 / (k as f64 + 1.0)).sum(),
            Phi::FlowerAbove(kappa) => 2.0 * kappa.len() as f64,
            Phi::FlowerBelow(kappa) => {
                2.0 * kappa
                    .iter()
                    .map(|&k| {
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        (k as f64 + sign) / (k as f64 + 1.0)
                    })
                    .sum::<f64>()
            }
        }
    }

    /// The root t of φ(t) = eᵗ, or `None` when φ(0⁺) ≤ 1.
    pub fn solve(&self, tol: f64) -> Option<f64> {
        if self.zero_limit() <= 1.0 {
            return None;
        }
        solve_monotone_with(|t| self.eval(t) - t.exp(), MIN_BRACKET_START, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiLimits {
    pub above: f64,
    pub below: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub spec: FamilySpec,
    pub band: [f64; 2],
    pub t_plus: Option<f64>,
    pub t_minus: Option<f64>,
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
    pub phi_zero_limit: PhiLimits,
    /// Same records as the generic solver emits, sorted by λ.
    pub eigenvalues: Vec<DiscreteEigenvalue>,
}

impl FamilyReport {
    fn assemble(
        spec: &FamilySpec,
        t_plus: Option<f64>,
        t_minus: Option<f64>,
        phi_zero_limit: PhiLimits,
    ) -> Result<Self, FamilyError> {
        let (p, pv) = family_charpoly(spec)?;
        let lambda_plus = t_plus.map(|t| 2.0 * t.cosh());
        let lambda_minus = t_minus.map(|t| -2.0 * t.cosh());
        let mut eigenvalues = Vec::new();
        if let Some(t) = t_minus {
            eigenvalues.push(DiscreteEigenvalue::from_x(-(-t).exp(), &p, &pv));
        }
        if let Some(t) = t_plus {
            eigenvalues.push(DiscreteEigenvalue::from_x((-t).exp(), &p, &pv));
        }
        Ok(Self {
            spec: spec.clone(),
            band: BAND,
            t_plus,
            t_minus,
            lambda_plus,
            lambda_minus,
            phi_zero_limit,
            eigenvalues,
        })
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.lambda).collect()
    }
}

pub fn star_spectrum(spec: &FamilySpec) -> Result<FamilyReport, FamilyError> {
    star_spectrum_with(spec, MONOTONE_TOL)
}

/// S(κ) + P∞. The star is bipartite, so the equation is the same on both
/// sides and σ_d = {±2cosh t⁺}.
pub fn star_spectrum_with(spec: &FamilySpec, tol: f64) -> Result<FamilyReport, FamilyError> {
    if spec.family != Family::Star {
        return Err(FamilyError::WrongFamily { expected: Family::Star });
    }
    let phi = Phi::Star(&spec.kappa);
    let limit = phi.zero_limit();
    let t = if spec.is_trivial() { None } else { phi.solve(tol) };
    FamilyReport::assemble(spec, t, t, PhiLimits { above: limit, below: limit })
}

pub fn flower_spectrum(spec: &FamilySpec) -> Result<FamilyReport, FamilyError> {
    flower_spectrum_with(spec, MONOTONE_TOL)
}

pub fn flower_spectrum_with(spec: &FamilySpec, tol: f64) -> Result<FamilyReport, FamilyError> {
    if spec.family != Family::Flower {
        return Err(FamilyError::WrongFamily { expected: Family::Flower });
    }
    let above = Phi::FlowerAbove(&spec.kappa);
    let below = Phi::FlowerBelow(&spec.kappa);
    FamilyReport::assemble(
        spec,
        above.solve(tol),
        below.solve(tol),
        PhiLimits {
            above: above.zero_limit(),
            below: below.zero_limit(),
        },
    )
}

/// Dispatches on the family tag.
pub fn family_spectrum(spec: &FamilySpec, tol: f64) -> Result<FamilyReport, FamilyError> {
    match spec.family {
        Family::Star => star_spectrum_with(spec, tol),
        Family::Flower => flower_spectrum_with(spec, tol),
    }
}

/// The uniform star kⱼ = p with n rays: (n−1)x^{2p+2} − n·x² + 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformStar {
    pub poly: IntPoly,
    /// Roots in (−1, 0) ∪ (0, 1), ascending.
    pub roots: Vec<f64>,
    /// x + 1/x for each root.
    pub lambdas: Vec<f64>,
}

pub fn star_uniform_poly(n: u32, p: u32) -> Result<UniformStar, FamilyError> {
    if n < 2 || p < 1 {
        return Err(FamilyError::InvalidUniform { n, p });
    }
    let top = IntPoly::monomial(BigInt::from(n - 1), 2 * p as usize + 2);
    let mid = IntPoly::monomial(BigInt::from(n), 2);
    let poly = &(&top - &mid) + &IntPoly::one();
    let one = BigRational::from_integer(BigInt::from(1));
    let roots: Vec<f64> = real_roots(&poly, &-one.clone(), &one, ROOT_TOL)?
        .iter()
        .filter_map(|r| r.refined.map(|v| v.value))
        .filter(|&x| x != 0.0)
        .collect();
    let lambdas = roots.iter().map(|x| x + x.recip()).collect();
    Ok(UniformStar { poly, roots, lambdas })
}

/// (P(λ, Γ₁), P(λ, Γ₁∖root)) assembled from path polynomials.
///
/// With Q = ∏ Q(λ, kⱼ) and Q̂ⱼ = ∏_{i≠j} Q(λ, kᵢ):
/// star P = λQ − Σ Q(λ, kⱼ−1)·Q̂ⱼ, flower P = λQ − 2Σ (Q(λ, kⱼ−1) + 1)·Q̂ⱼ,
/// and in both cases P(Γ₁∖root) = Q.
pub fn family_charpoly(spec: &FamilySpec) -> Result<(IntPoly, IntPoly), FamilyError> {
    FamilySpec::new(spec.family, spec.kappa.clone())?;
    let kmax = *spec.kappa.iter().max().expect("validated non-empty") as usize;
    let q = chebyshev_table(kmax);
    let factors: Vec<&IntPoly> = spec.kappa.iter().map(|&k| &q[k as usize]).collect();
    let product = |skip: Option<usize>| {
        factors
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .fold(IntPoly::one(), |acc, (_, f)| &acc * f)
    };
    let full = product(None);
    let mut p = full.shift(1);
    for (j, &k) in spec.kappa.iter().enumerate() {
        let others = product(Some(j));
        let numerator = match spec.family {
            Family::Star => q[k as usize - 1].clone(),
            Family::Flower => (&q[k as usize - 1] + &IntPoly::one()).scale(&BigInt::from(2)),
        };
        p = &p - &(&numerator * &others);
    }
    Ok((p, full))
}
