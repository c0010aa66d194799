//! Dense univariate polynomials with arbitrary-precision integer
//! coefficients, and the characteristic-polynomial machinery built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{delete_vertices, simple_cycles_through, Graph, GraphError};

/// Largest graph [`schwenk_expand`] accepts; cycle enumeration is exponential.
pub const SCHWENK_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("graph has {n} vertices; Schwenk expansion is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("degree mismatch: P has degree {p}, Pv has degree {pv}; expected deg Pv = deg P - 1")]
    DegreeMismatch { p: i64, pv: i64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Integer polynomial, lowest power first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate λ (or x).
    pub fn var() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: BigInt, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by λ^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Number of leading (lowest-power) zero coefficients.
    pub fn low_order_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out the largest power of λ dividing `self`.
    pub fn strip_var_powers(&self) -> (Self, usize) {
        let k = self.low_order_zeros();
        (Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()), k)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// `self` with its sign chosen so the leading coefficient is positive.
    pub fn with_positive_leading(self) -> Self {
        match self.leading() {
            Some(c) if c.is_negative() => -self,
            _ => self,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..len)
                .map(|k| {
                    let a = self.coeffs.get(k);
                    let b = rhs.coeffs.get(k);
                    match (a, b) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => b.clone(),
                        (None, None) => BigInt::zero(),
                    }
                })
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs.clone())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// det(λI − A(g)) by the Faddeev–LeVerrier recursion over the integers.
///
/// With M₀ = 0 and c_n = 1, each step computes M_k = A·M_{k−1} + c_{n−k+1}I
/// and c_{n−k} = −tr(A·M_k)/k; the division is exact for integer A.
pub fn charpoly(g: &Graph) -> IntPoly {
    let n = g.n();
    if n == 0 {
        return IntPoly::one();
    }
    let adj = g.neighbours();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // m holds M_k; a_m holds A·M_k
    let mut m = vec![vec![BigInt::zero(); n]; n];
    let mut a_m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = std::mem::take(&mut a_m[i][j]);
            }
            m[i][i] += &c_prev;
        }
        // A is 0/1, so A·M row i is the sum of rows of M over neighbours of i.
        for i in 0..n {
            for &w in &adj[i + 1] {
                for j in 0..n {
                    a_m[i][j] += &m[w - 1][j];
                }
            }
        }
        let trace: BigInt = (0..n).map(|i| &a_m[i][i]).sum();
        coeffs[n - k] = -(trace / BigInt::from(k));
    }
    IntPoly::new(coeffs)
}

/// Q(λ, m) = U_m(λ/2), the characteristic polynomial of the path Pₘ.
pub fn chebyshev_q(m: usize) -> IntPoly {
    chebyshev_table(m).pop().expect("table has m + 1 entries")
}

/// [Q(λ,0), …, Q(λ,m)].
pub fn chebyshev_table(m: usize) -> Vec<IntPoly> {
    let mut out = vec![IntPoly::one()];
    if m >= 1 {
        out.push(IntPoly::var());
    }
    for k in 2..=m {
        let next = &out[k - 1].shift(1) - &out[k - 2];
        out.push(next);
    }
    out
}

/// Schwenk's vertex expansion of P(λ, g) at vertex `v`:
/// λP(g∖v) − Σ_{v'∼v} P(g∖{v,v'}) − 2Σ_{Z∋v} P(g∖Z).
pub fn schwenk_expand(g: &Graph, v: usize) -> Result<IntPoly, PolyError> {
    if g.n() > SCHWENK_MAX_VERTICES {
        return Err(PolyError::TooLarge {
            n: g.n(),
            max: SCHWENK_MAX_VERTICES,
        });
    }
    let cycles = simple_cycles_through(g, v)?;
    let mut acc = charpoly(&delete_vertices(g, &[v])?).shift(1);
    for w in g.neighbours()[v].iter().copied() {
        acc = &acc - &charpoly(&delete_vertices(g, &[v, w])?);
    }
    let two = BigInt::from(2);
    for cycle in &cycles {
        acc = &acc - &charpoly(&delete_vertices(g, cycle)?).scale(&two);
    }
    Ok(acc)
}

/// S(x) from the tail equation, together with the stripped power of x.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailPoly {
    pub poly: IntPoly,
    pub stripped_x_power: usize,
}

/// Clears λ = x + 1/x from P(λ) − x·Pv(λ).
///
/// Returns S(x) = ±xⁿ[P(x+1/x) − x·Pv(x+1/x)] with every factor of x divided
/// out and the sign fixed so the leading coefficient is positive. Roots of S
/// in (−1,0)∪(0,1) are exactly the x-parameters of discrete eigenvalues.
pub fn tail_equation_poly(p: &IntPoly, pv: &IntPoly) -> Result<TailPoly, PolyError> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        other => {
            return Err(PolyError::DegreeMismatch {
                p: other.map_or(-1, |d| d as i64),
                pv: pv.degree().map_or(-1, |d| d as i64),
            })
        }
    };
    if !pv.is_zero() && pv.degree() != Some(n - 1) {
        return Err(PolyError::DegreeMismatch {
            p: n as i64,
            pv: pv.degree().map_or(-1, |d| d as i64),
        });
    }
    // xⁿ·λᵏ = x^{n−k}(x²+1)ᵏ, and xⁿ·x·λᵏ = x^{n+1−k}(x²+1)ᵏ.
    let x2p1 = IntPoly::from_i64(&[1, 0, 1]);
    let powers: Vec<IntPoly> = std::iter::successors(Some(IntPoly::one()), |q| Some(q * &x2p1))
        .take(n + 1)
        .collect();
    let mut s = IntPoly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            s = &s + &powers[k].shift(n - k).scale(c);
        }
    }
    for (k, c) in pv.coeffs().iter().enumerate() {
        if !c.is_zero() {
            s = &s - &powers[k].shift(n + 1 - k).scale(c);
        }
    }
    let (poly, stripped_x_power) = s.strip_var_powers();
    Ok(TailPoly {
        poly: poly.with_positive_leading(),
        stripped_x_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_flower, build_multistar, build_path};

    /// Determinant by cofactor expansion over the integers.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn det_at(g: &Graph, lambda: i64) -> i64 {
        let mut m = g.adjacency();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if i == j { lambda } else { 0 } - *v;
            }
        }
        cofactor_det(&m)
    }

    #[test]
    fn charpoly_small_graphs() {
        assert_eq!(charpoly(&Graph::empty()), IntPoly::one());
        let tri = build_flower(&[2]).unwrap();
        assert_eq!(charpoly(&tri), IntPoly::from_i64(&[-2, -3, 0, 1]));
        let k13 = build_multistar(&[1, 1, 1]).unwrap();
        assert_eq!(charpoly(&k13), IntPoly::from_i64(&[0, 0, -3, 0, 1]));
        // cofactor oracle at several integer points
        for g in [&tri, &k13] {
            let p = charpoly(g);
            for lambda in -3..=3 {
                assert_eq!(p.eval(&BigInt::from(lambda)), BigInt::from(det_at(g, lambda)));
            }
        }
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_q(0), IntPoly::one());
        assert_eq!(chebyshev_q(2), IntPoly::from_i64(&[-1, 0, 1]));
        let q5 = chebyshev_q(5);
        assert_eq!(q5, IntPoly::from_i64(&[0, 3, 0, -4, 0, 1]));
        let factored = &(&IntPoly::var() * &IntPoly::from_i64(&[-1, 0, 1])) * &IntPoly::from_i64(&[-3, 0, 1]);
        assert_eq!(q5, factored);
        assert_eq!(q5, charpoly(&build_path(5).unwrap()));
    }

    #[test]
    fn schwenk_examples() {
        let tri = build_flower(&[2]).unwrap();
        assert_eq!(schwenk_expand(&tri, 1).unwrap(), IntPoly::from_i64(&[-2, -3, 0, 1]));
        let k13 = build_multistar(&[1, 1, 1]).unwrap();
        assert_eq!(schwenk_expand(&k13, 1).unwrap(), IntPoly::from_i64(&[0, 0, -3, 0, 1]));
        let p2 = build_path(2).unwrap();
        assert_eq!(schwenk_expand(&p2, 1).unwrap(), IntPoly::from_i64(&[-1, 0, 1]));
        let big = build_path(21).unwrap();
        assert!(matches!(schwenk_expand(&big, 1), Err(PolyError::TooLarge { .. })));
    }

    #[test]
    fn tail_poly_triangle() {
        let p = IntPoly::from_i64(&[-2, -3, 0, 1]);
        let pv = IntPoly::from_i64(&[-1, 0, 1]);
        let t = tail_equation_poly(&p, &pv).unwrap();
        assert_eq!(t.poly, IntPoly::from_i64(&[-1, 0, 1, 2, 1]));
        assert_eq!(t.stripped_x_power, 0);
        let factors = &IntPoly::from_i64(&[-1, 1, 1]) * &IntPoly::from_i64(&[1, 1, 1]);
        assert_eq!(t.poly, factors);
    }

    #[test]
    fn tail_poly_k13_and_p5() {
        let t = tail_equation_poly(&IntPoly::from_i64(&[0, 0, -3, 0, 1]), &IntPoly::from_i64(&[0, 0, 0, 1])).unwrap();
        // λ²(λ² − xλ − 3) clears to (x²+1)²·x² ... with λ² − xλ − 3 = x⁻² − 2
        let expected = &IntPoly::from_i64(&[1, 0, 1]).pow(2) * &IntPoly::from_i64(&[-1, 0, 2]);
        assert_eq!(t.poly, expected.with_positive_leading());
        assert_eq!(t.stripped_x_power, 0);

        let p5 = chebyshev_q(5);
        let pv = chebyshev_q(2).pow(2);
        let t = tail_equation_poly(&p5, &pv).unwrap();
        let quartic = IntPoly::from_i64(&[-1, 0, 1, 0, 1]);
        // S must be divisible by x⁴ + x² − 1; check via rational evaluation at its roots' defining relation
        let (q, r) = div_rem_exact(&t.poly, &quartic);
        assert!(r.is_zero(), "remainder {r}");
        assert!(!q.is_zero());
    }

    #[test]
    fn tail_poly_rejects_bad_degrees() {
        let p = IntPoly::from_i64(&[0, 0, 1]);
        assert!(tail_equation_poly(&p, &IntPoly::from_i64(&[0, 0, 1])).is_err());
        assert!(tail_equation_poly(&IntPoly::one(), &IntPoly::zero()).is_err());
        // single vertex: P = λ, Pv = 1 gives S = 1
        let t = tail_equation_poly(&IntPoly::var(), &IntPoly::one()).unwrap();
        assert_eq!(t.poly, IntPoly::one());
    }

    /// Long division by a monic divisor.
    fn div_rem_exact(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(b.leading().unwrap().is_one());
        let db = b.degree().unwrap();
        let mut r = a.clone();
        let mut q = IntPoly::zero();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.leading().unwrap().clone();
            let term = IntPoly::monomial(c, dr - db);
            r = &r - &(&term * b);
            q = &q + &term;
        }
        (q, r)
    }

    #[test]
    fn display_and_json() {
        let p = IntPoly::from_i64(&[-2, -3, 0, 1]);
        assert_eq!(p.to_string(), "x^3 - 3x - 2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["-2","-3","0","1"]"#);
        assert_eq!(serde_json::from_str::<IntPoly>(&json).unwrap(), p);
    }
}
