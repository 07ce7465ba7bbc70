use num_complex::Complex64;

use super::svd::jacobi_angle;
use super::{ComplexMatrix, LinalgError, Tolerance, CLUSTER_REL, ZERO};

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix: `H · V = V · diag(values)`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Cyclic complex Jacobi on the Hermitian part of `h`.
///
/// Fails if `h` is not square or if `‖h − h†‖_F > tol.rel · ‖h‖_F` (with the
/// absolute floor for tiny matrices).
pub fn hermitian_eigen(h: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::Shape(format!(
            "hermitian_eigen needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let scale = h.norm_fro();
    let defect = h.hermitian_defect();
    let bound = tol.abs.max(tol.rel * scale);
    if defect > bound {
        return Err(LinalgError::NotHermitian { defect, bound });
    }

    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&a) <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let hpq = a[(p, q)];
                let g = hpq.norm();
                if g == 0.0 {
                    continue;
                }
                let (c, s) = jacobi_angle(a[(p, p)].re, a[(q, q)].re, g);
                let phase_conj = (hpq / g).conj();
                // Unitary block on (p, q): [[c, s], [−s·ū, c·ū]].
                let r = [
                    [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
                    [-phase_conj * s, phase_conj * c],
                ];
                // a ← a · R
                for i in 0..n {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = x * r[0][0] + y * r[1][0];
                    a[(i, q)] = x * r[0][1] + y * r[1][1];
                }
                // a ← R† · a
                for j in 0..n {
                    let (x, y) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = r[0][0].conj() * x + r[1][0].conj() * y;
                    a[(q, j)] = r[0][1].conj() * x + r[1][1].conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * r[0][0] + y * r[1][0];
                    v[(i, q)] = x * r[0][1] + y * r[1][1];
                }
            }
        }
    }
    if !converged && off(&a) > 1e3 * f64::EPSILON * scale {
        return Err(LinalgError::NoConvergence("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}

/// All eigenvalues of a square matrix, unclustered, from Hessenberg reduction
/// and single-shift complex QR on the active window.
pub fn eigenvalues_raw(m: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut h = m.clone();
    hessenberg_in_place(&mut h);

    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let cap = 60 * n.max(1);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let floor = if diag == 0.0 {
                f64::MIN_POSITIVE
            } else {
                f64::EPSILON * diag
            };
            if sub <= floor {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > cap {
            return Err(LinalgError::NoConvergence("Hessenberg QR eigensolver"));
        }
        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), 0.75 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(eig)
}

fn hessenberg_in_place(h: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = super::vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = super::vec_norm(&v);
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h ← (I − 2vv†) h on rows k+1..n
        for j in 0..n {
            let s: Complex64 = (0..v.len()).map(|t| v[t].conj() * h[(k + 1 + t, j)]).sum();
            for t in 0..v.len() {
                h[(k + 1 + t, j)] -= v[t] * s * 2.0;
            }
        }
        // h ← h (I − 2vv†) on columns k+1..n
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|t| h[(i, k + 1 + t)] * v[t]).sum();
            for t in 0..v.len() {
                h[(i, k + 1 + t)] -= s * v[t].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // Eigenvalue of [[a, b], [c, d]] closest to d.
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

// One implicit-in-spirit shifted QR step on the window [lo, hi], via Givens.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            (x / r, y / r)
        };
        // rows k, k+1 ← [[c̄, s̄], [−s, c]] · rows
        for j in k..=hi {
            let (u, w) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c.conj() * u + s.conj() * w;
            h[(k + 1, j)] = -s * u + c * w;
        }
        rots.push((c, s));
    }
    for (off, &(c, s)) in rots.iter().enumerate() {
        let k = lo + off;
        // columns k, k+1 ← cols · [[c, −s̄], [s, c̄]]
        for i in lo..=(k + 1).min(hi) {
            let (u, w) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = u * c + w * s;
            h[(i, k + 1)] = -u * s.conj() + w * c.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Groups raw eigenvalues whose pairwise distance is within `radius`
/// (single linkage) and reports each cluster by its mean and size.
///
/// Output is sorted by real part, then imaginary part.
pub fn cluster_eigenvalues(raw: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (raw[i] - raw[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &z) in raw.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += z;
                g.2 += 1;
            }
            None => groups.push((r, z, 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

/// Eigenvalues with algebraic multiplicities, clustered at radius
/// `CLUSTER_REL · max(1, ‖M‖_F)`.
pub fn complex_eigen(
    m: &ComplexMatrix,
    _tol: &Tolerance,
) -> Result<Vec<(Complex64, usize)>, LinalgError> {
    let raw = eigenvalues_raw(m)?;
    let radius = CLUSTER_REL * m.norm_fro().max(1.0);
    Ok(cluster_eigenvalues(&raw, radius))
}
