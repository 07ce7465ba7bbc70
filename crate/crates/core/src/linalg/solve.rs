use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, Svd, Tolerance, ZERO};

/// Solves `M · X = B` by LU with partial pivoting.
///
/// `M` is first screened by its singular values: if the smallest one is at or
/// below `tol.threshold(σ_max)` the call fails with [`LinalgError::Singular`].
pub fn solve(
    m: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!(
            "solve needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if b.rows() != m.rows() {
        return Err(LinalgError::Shape(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows(),
            m.rows()
        )));
    }
    let n = m.rows();
    let svd = Svd::compute(m);
    let sigma_min = svd.singular_values.last().copied().unwrap_or(0.0);
    if n > 0 && sigma_min <= tol.threshold(svd.sigma_max()) {
        return Err(LinalgError::Singular { sigma_min });
    }

    let mut lu = m.clone();
    let mut x = b.clone();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap_or(k);
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = ZERO;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut s: Complex64 = x[(i, j)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}
