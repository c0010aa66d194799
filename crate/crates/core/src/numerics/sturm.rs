//! Exact real-root isolation by Sturm sequences, with floating-point polish.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ratpoly::RatPoly;
use super::NumericsError;
use crate::poly::IntPoly;

/// Default absolute tolerance on refined roots.
pub const ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinedRoot {
    pub value: f64,
    /// |p(value)| for the isolated square-free polynomial, in floating point.
    pub residual: f64,
}

/// An open interval holding exactly one root of `poly`.
///
/// `poly` is the primitive square-free part of the polynomial that was
/// isolated, and it has opposite, non-zero signs at `lo` and `hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub poly: IntPoly,
    pub refined: Option<RefinedRoot>,
}

impl RootInterval {
    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::INFINITY)
    }

    /// Refines in place and returns the refined value.
    pub fn refine(&mut self, tol: f64) -> f64 {
        let r = refine_root(self, tol);
        self.refined = Some(r);
        r.value
    }
}

struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    fn new(square_free: RatPoly) -> Self {
        let mut chain = vec![square_free.clone()];
        let d = square_free.derivative();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let k = chain.len();
            let (_, r) = chain[k - 2].div_rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        Self { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last: Option<bool> = None;
        let mut count = 0;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    fn is_root(&self, x: &BigRational) -> bool {
        self.chain[0].eval(x).is_zero()
    }

    /// Distinct roots in the open interval (a, b).
    fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        // V(a) − V(b) counts roots in (a, b]
        let half_open = self.variations(a) - self.variations(b);
        half_open - usize::from(self.is_root(b))
    }

    /// A point strictly inside (a, b) that is not a root.
    fn split_point(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let width = b - a;
        let mut denom = 2i64;
        loop {
            for num in 1..denom {
                let r = BigRational::new(BigInt::from(num), BigInt::from(denom));
                let m = a + &width * r;
                if !self.is_root(&m) {
                    return m;
                }
            }
            denom += 1;
        }
    }
}

/// Isolates every distinct real root of `p` in the open interval (lo, hi).
///
/// Repeated roots are removed first by dividing out gcd(p, p′). The returned
/// intervals are disjoint, sorted, and each contains exactly one root.
pub fn sturm_isolate(
    p: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<Vec<RootInterval>, NumericsError> {
    if p.is_zero() {
        return Err(NumericsError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(NumericsError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let sf = RatPoly::from_int(p).square_free();
    if sf.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let primitive = sf.to_primitive();
    let chain = SturmChain::new(sf);

    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match chain.count_open(&a, &b) {
            0 => {}
            1 => {
                let (a, b) = shrink_off_roots(&chain, a, b);
                out.push(RootInterval {
                    lo: a,
                    hi: b,
                    poly: primitive.clone(),
                    refined: None,
                });
            }
            _ => {
                let m = chain.split_point(&a, &b);
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Narrows a single-root interval until neither endpoint is itself a root.
fn shrink_off_roots(
    chain: &SturmChain,
    mut a: BigRational,
    mut b: BigRational,
) -> (BigRational, BigRational) {
    while chain.is_root(&a) || chain.is_root(&b) {
        let m = chain.split_point(&a, &b);
        if chain.count_open(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}

/// Bisects exactly to width ≤ `tol`, then polishes with Newton steps that
/// are discarded as soon as an iterate leaves the bracket.
pub fn refine_root(r: &RootInterval, tol: f64) -> RefinedRoot {
    let sf = RatPoly::from_int(&r.poly);
    let mut a = r.lo.clone();
    let mut b = r.hi.clone();
    let sign_a = sf.eval(&a).is_positive();
    let two = BigRational::from_integer(BigInt::from(2));
    let tol = tol.max(f64::EPSILON);
    while (&b - &a).to_f64().unwrap_or(0.0) > tol {
        let m = (&a + &b) / &two;
        let v = sf.eval(&m);
        if v.is_zero() {
            let value = m.to_f64().unwrap_or(f64::NAN);
            return RefinedRoot {
                value,
                residual: r.poly.eval_f64(value).abs(),
            };
        }
        if v.is_positive() == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    let lo = a.to_f64().unwrap_or(f64::NAN);
    let hi = b.to_f64().unwrap_or(f64::NAN);
    let mid = ((&a + &b) / &two).to_f64().unwrap_or(f64::NAN);
    let value = newton_polish(&r.poly, mid, lo, hi);
    RefinedRoot {
        value,
        residual: r.poly.eval_f64(value).abs(),
    }
}

fn newton_polish(p: &IntPoly, start: f64, lo: f64, hi: f64) -> f64 {
    let dp = p.derivative();
    let mut x = start;
    let mut best = (p.eval_f64(x).abs(), x);
    for _ in 0..8 {
        let fx = p.eval_f64(x);
        let dfx = dp.eval_f64(x);
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let next = x - fx / dfx;
        if !(lo..=hi).contains(&next) {
            break;
        }
        let fnext = p.eval_f64(next).abs();
        if fnext < best.0 {
            best = (fnext, next);
        }
        if next == x {
            break;
        }
        x = next;
    }
    best.1
}

/// Isolates and refines all distinct roots in (lo, hi).
pub fn real_roots(
    p: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
    tol: f64,
) -> Result<Vec<RootInterval>, NumericsError> {
    let mut roots = sturm_isolate(p, lo, hi)?;
    for r in &mut roots {
        r.refine(tol);
    }
    Ok(roots)
}

/// Real roots of `p` whose multiplicity is at least `min_multiplicity`,
/// with their exact multiplicities.
pub fn repeated_roots(
    p: &IntPoly,
    min_multiplicity: usize,
    tol: f64,
) -> Result<Vec<(f64, usize)>, NumericsError> {
    if p.is_zero() {
        return Err(NumericsError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (factor, mult) in RatPoly::from_int(p).square_free_decomposition() {
        if mult < min_multiplicity {
            continue;
        }
        let f = factor.to_primitive();
        let bound = cauchy_bound(&f);
        for root in real_roots(&f, &-bound.clone(), &bound, tol)? {
            let value = root.refined.map_or(f64::NAN, |r| r.value);
            out.push((value, mult));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// 1 + max |aₖ/aₙ|; all roots lie strictly inside (−B, B).
fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading().expect("non-zero").abs();
    let max = p.coeffs().iter().map(Signed::abs).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}
