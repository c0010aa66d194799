//! Polynomials over Q, used for gcds and Sturm chains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (k, dc) in d.coeffs.iter().enumerate() {
                    rem[top - dd + k] -= &c * dc;
                }
            }
            quot[top - dd] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lead) => Self {
                coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
            },
            None => self.clone(),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn to_primitive(&self) -> IntPoly {
        let denom_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let ints = if content.is_zero() || content.is_one() {
            ints
        } else {
            ints.into_iter().map(|c| c / &content).collect()
        };
        IntPoly::new(ints).with_positive_leading()
    }

    /// Square-free part p / gcd(p, p').
    pub fn square_free(&self) -> Self {
        let g = Self::gcd(self, &self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Yun's square-free decomposition: returns (factor, multiplicity) pairs
    /// with square-free, pairwise coprime, non-constant factors.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = Self::gcd(self, &d);
        let mut b = self.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dd = sub(&c, &b.derivative());
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = Self::gcd(&b, &dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = sub(&c, &b.derivative());
            k += 1;
        }
        out
    }
}

fn sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let len = a.coeffs.len().max(b.coeffs.len());
    RatPoly::new(
        (0..len)
            .map(|k| {
                let x = a.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                let y = b.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                x - y
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::from_int(&IntPoly::from_i64(c))
    }

    #[test]
    fn gcd_and_square_free() {
        // (x-1)^2 (x+2)
        let p = rp(&[2, -3, 0, 1]);
        assert_eq!(RatPoly::gcd(&p, &p.derivative()), rp(&[-1, 1]));
        assert_eq!(p.square_free().to_primitive(), IntPoly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // x^3 (x^2 - 4): the K_{1,4} characteristic polynomial
        let p = rp(&[0, 0, 0, -4, 0, 1]);
        let parts = p.square_free_decomposition();
        let mut got: Vec<(IntPoly, usize)> = parts.iter().map(|(f, m)| (f.to_primitive(), *m)).collect();
        got.sort_by_key(|(_, m)| *m);
        assert_eq!(got, vec![(IntPoly::from_i64(&[-4, 0, 1]), 1), (IntPoly::from_i64(&[0, 1]), 3)]);
    }
}
