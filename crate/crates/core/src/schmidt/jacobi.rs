//! One-sided (Hestenes) Jacobi SVD for small complex matrices.
//!
//! Column pairs are rotated until mutually orthogonal. Each complex rotation
//! is a phase shift of the second column followed by a real Givens rotation.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 80;
const ORTHO_TOL: f64 = 1e-15;

/// `A = U diag(σ) V^H` with `k = min(rows, cols)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Columns of `U`, each of length `rows`.
    pub u: Vec<Vec<Complex64>>,
    /// Nonincreasing.
    pub sigma: Vec<f64>,
    /// Columns of `V`, each of length `cols`.
    pub v: Vec<Vec<Complex64>>,
    /// Largest remaining column coupling `|a_p^H a_q| / ‖A‖_F²`.
    pub residual: f64,
}

/// SVD of the row-major `rows × cols` matrix `a`.
pub fn svd(a: &[Complex64], rows: usize, cols: usize) -> Svd {
    assert_eq!(a.len(), rows * cols);
    if rows >= cols {
        tall_svd(a, rows, cols)
    } else {
        // Aᵀ = U' Σ V'^H  ⇒  A = conj(V') Σ conj(U')^H
        let mut at = vec![Complex64::new(0.0, 0.0); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                at[c * rows + r] = a[r * cols + c];
            }
        }
        let t = tall_svd(&at, cols, rows);
        let conj_all = |m: Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
            m.into_iter()
                .map(|col| col.into_iter().map(|z| z.conj()).collect())
                .collect()
        };
        Svd {
            u: conj_all(t.v),
            sigma: t.sigma,
            v: conj_all(t.u),
            residual: t.residual,
        }
    }
}

fn tall_svd(a: &[Complex64], rows: usize, cols: usize) -> Svd {
    let zero = Complex64::new(0.0, 0.0);
    let mut w: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| a[r * cols + c]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| {
            (0..cols)
                .map(|r| {
                    if r == c {
                        Complex64::new(1.0, 0.0)
                    } else {
                        zero
                    }
                })
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let unphase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, unphase, c, s);
                rotate(&mut v, p, q, unphase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let frob: f64 = w.iter().map(|c| norm_sqr(c)).sum();
    let mut residual: f64 = 0.0;
    if frob > 0.0 {
        for p in 0..cols {
            for q in p + 1..cols {
                residual = residual.max(dot(&w[p], &w[q]).norm() / frob);
            }
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let sigma_raw: Vec<f64> = w.iter().map(|c| norm_sqr(c).sqrt()).collect();
    order.sort_by(|&i, &j| sigma_raw[j].total_cmp(&sigma_raw[i]));
    let cutoff = sigma_raw.iter().copied().fold(0.0, f64::max) * 1e-14;

    let mut u = Vec::with_capacity(cols);
    let mut sigma = Vec::with_capacity(cols);
    let mut vv = Vec::with_capacity(cols);
    for &j in &order {
        let s = sigma_raw[j];
        if s > cutoff && s > 0.0 {
            u.push(w[j].iter().map(|z| z / s).collect::<Vec<_>>());
            sigma.push(s);
        } else {
            u.push(vec![zero; rows]);
            sigma.push(0.0);
        }
        vv.push(v[j].clone());
    }
    complete_basis(&mut u, &sigma);
    Svd {
        u,
        sigma,
        v: vv,
        residual,
    }
}

/// `w_p ← c w_p − s e^{−iφ} w_q`, `w_q ← s w_p + c e^{−iφ} w_q`.
fn rotate(m: &mut [Vec<Complex64>], p: usize, q: usize, unphase: Complex64, c: f64, s: f64) {
    let (lo, hi) = m.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * unphase;
        let xp = *x;
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Replaces the columns belonging to zero singular values by an orthonormal
/// completion of the others.
fn complete_basis(u: &mut [Vec<Complex64>], sigma: &[f64]) {
    let n = u.first().map_or(0, Vec::len);
    let mut candidate = 0;
    for k in 0..u.len() {
        if sigma[k] > 0.0 {
            continue;
        }
        while candidate < n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            for (j, col) in u.iter().enumerate() {
                if j == k {
                    continue;
                }
                let proj = dot(col, &e);
                for (ei, uj) in e.iter_mut().zip(col) {
                    *ei -= proj * uj;
                }
            }
            let norm = norm_sqr(&e).sqrt();
            if norm > 1e-8 {
                u[k] = e.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `a^H b`.
fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
