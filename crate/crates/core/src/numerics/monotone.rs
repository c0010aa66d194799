//! Zero of a strictly decreasing function on t > 0.

/// Smallest bracket start used when probing for existence.
pub const MIN_BRACKET_START: f64 = 1e-8;

/// Default bracket width at which bisection stops.
pub const MONOTONE_TOL: f64 = 1e-14;

const MAX_DOUBLINGS: usize = 2048;

/// Solves f(t) = 0 for a strictly decreasing f with f(t) → −∞.
///
/// Returns `None` when f(t_lo) ≤ 0, meaning there is no zero to the right of
/// `t_lo`. Otherwise doubles an upper bracket until f changes sign and
/// bisects to width [`MONOTONE_TOL`].
pub fn solve_monotone<F: Fn(f64) -> f64>(f: F, t_lo: f64) -> Option<f64> {
    solve_monotone_with(f, t_lo, MONOTONE_TOL)
}

pub fn solve_monotone_with<F: Fn(f64) -> f64>(f: F, t_lo: f64, tol: f64) -> Option<f64> {
    let mut lo = t_lo.max(MIN_BRACKET_START);
    if f(lo).is_nan() || f(lo) <= 0.0 {
        return None;
    }
    let mut hi = (2.0 * lo).max(1.0);
    let mut doublings = 0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return None;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_k13_reduction() {
        let t = solve_monotone(|t: f64| 3.0 / (2.0 * t.cosh()) - t.exp(), MIN_BRACKET_START).unwrap();
        assert!((t - 0.5 * 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn boundary_and_simple_cases() {
        assert_eq!(solve_monotone(|t: f64| 1.0 - t.exp(), MIN_BRACKET_START), None);
        let t = solve_monotone(|t: f64| 2.0 - t.exp(), MIN_BRACKET_START).unwrap();
        assert!((t - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn far_zero_needs_bracket_doubling() {
        let t = solve_monotone(|t: f64| 100.0 - t, 1e-3).unwrap();
        assert!((t - 100.0).abs() < 1e-12);
    }

    #[test]
    fn independent_of_start() {
        let f = |t: f64| 1.7 / (1.0 + t) - t.exp();
        let a = solve_monotone(f, 1e-8).unwrap();
        let b = solve_monotone(f, 1e-3).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
