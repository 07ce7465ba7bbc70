use num_complex::Complex64;

use super::{ComplexMatrix, Tolerance};

const MAX_SWEEPS: usize = 100;

/// Thin SVD from one-sided (Hestenes) Jacobi: `M · V = U · diag(σ)`.
///
/// Singular values are sorted in descending order; `v` is square unitary and
/// the columns of `u` belonging to zero singular values are left as zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn compute(m: &ComplexMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        // Column-major working copies keep the column rotations cache friendly.
        let mut w: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
        let mut v: Vec<Vec<Complex64>> = (0..cols)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); cols];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in p + 1..cols {
                    let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(a, b)| a.conj() * b).sum();
                    let g = gamma.norm();
                    if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let (c, s) = jacobi_angle(alpha, beta, g);
                    let phase_conj = (gamma / g).conj();
                    rotate_pair(&mut w, p, q, c, s, phase_conj);
                    rotate_pair(&mut v, p, q, c, s, phase_conj);
                }
            }
            if !rotated {
                break;
            }
        }

        let norms: Vec<f64> = w
            .iter()
            .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let mut order: Vec<usize> = (0..cols).collect();
        order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

        let mut u = ComplexMatrix::zeros(rows, cols);
        let mut vm = ComplexMatrix::zeros(cols, cols);
        let mut singular_values = Vec::with_capacity(cols);
        for (k, &j) in order.iter().enumerate() {
            let s = norms[j];
            singular_values.push(s);
            for i in 0..rows {
                u[(i, k)] = if s > 0.0 {
                    w[j][i] / s
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            for i in 0..cols {
                vm[(i, k)] = v[j][i];
            }
        }
        Self {
            singular_values,
            u,
            v: vm,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Numerical rank: singular values strictly above `max(abs, rel·σ_max)`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let thr = tol.threshold(self.sigma_max());
        self.singular_values.iter().filter(|&&s| s > thr).count()
    }
}

/// Real Jacobi rotation `(c, s)` annihilating the off-diagonal of `[[a, g], [g, b]]`.
pub(crate) fn jacobi_angle(a: f64, b: f64, g: f64) -> (f64, f64) {
    let zeta = (b - a) / (2.0 * g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

// Columns p, q ← [p, q] · [[c, s], [−s·ū, c·ū]] where ū = phase_conj.
fn rotate_pair(
    cols: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    phase_conj: Complex64,
) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yp = *y * phase_conj;
        let nx = *x * c - yp * s;
        let ny = *x * s + yp * c;
        *x = nx;
        *y = ny;
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    Svd::compute(m).singular_values
}

pub fn rank_tol(m: &ComplexMatrix, tol: &Tolerance) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    Svd::compute(m).rank(tol)
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    if m.rows() == 0 {
        return ComplexMatrix::identity(m.cols());
    }
    let svd = Svd::compute(m);
    let r = svd.rank(tol);
    let idx: Vec<usize> = (r..m.cols()).collect();
    svd.v.select_columns(&idx)
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn orthonormal_range(m: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    if m.cols() == 0 {
        return ComplexMatrix::zeros(m.rows(), 0);
    }
    let svd = Svd::compute(m);
    let r = svd.rank(tol);
    let idx: Vec<usize> = (0..r).collect();
    svd.u.select_columns(&idx)
}
