//! Eigenvalues of a dense symmetric matrix: Householder reduction to
//! tridiagonal form followed by implicit-shift QL.

use super::{NumericsError, SymMatrix};

const MAX_QL_ITERATIONS: usize = 60;

/// All eigenvalues of `m`, sorted ascending.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, NumericsError> {
    let n = m.dim();
    if n == 0 {
        return Err(NumericsError::Dimension("empty matrix".into()));
    }
    // row i holds a[i][0..=i]
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..=i).map(|j| m.get(i, j)).collect()).collect();
    let (mut d, mut e) = tridiagonalize(&mut a);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Reduces the lower triangle in place; returns (diagonal, off-diagonal)
/// with e[i] coupling rows i−1 and i.
fn tridiagonalize(a: &mut [Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        // A row that is already tridiagonal needs no reflection.
        if l == 0 || a[i][..l].iter().all(|&v| v == 0.0) {
            e[i] = a[i][l];
            continue;
        }
        let scale: f64 = a[i][..=l].iter().map(|v| v.abs()).sum();
        let mut h = 0.0;
        for k in 0..=l {
            a[i][k] /= scale;
            h += a[i][k] * a[i][k];
        }
        let f = a[i][l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[i][l] = f - g;
        let mut f = 0.0;
        for j in 0..=l {
            let mut g = 0.0;
            for k in 0..=j {
                g += a[j][k] * a[i][k];
            }
            for k in j + 1..=l {
                g += a[k][j] * a[i][k];
            }
            e[j] = g / h;
            f += e[j] * a[i][j];
        }
        let hh = f / (h + h);
        for j in 0..=l {
            let f = a[i][j];
            let g = e[j] - hh * f;
            e[j] = g;
            for k in 0..=j {
                a[j][k] -= f * e[k] + g * a[i][k];
            }
        }
    }
    e[0] = 0.0;
    let d = (0..n).map(|i| a[i][i]).collect();
    (d, e)
}

fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<(), NumericsError> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(NumericsError::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
