use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{OperatorSum, StateVector};
use crate::{Error, Result};

const ADJOINT_TOL: f64 = 1e-8;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Krylov approximation of `exp(W)u` for skew-Hermitian `W`.
///
/// Runs Lanczos with full reorthogonalisation on the Hermitian `−iW` and
/// exponentiates the tridiagonal projection exactly. Stops early on breakdown,
/// where the Krylov result is exact.
pub fn lanczos_expmv(w: &OperatorSum, u: &StateVector, iters: usize) -> Result<StateVector> {
    if iters == 0 {
        return Err(Error::Domain("Lanczos needs at least one iteration".into()));
    }
    if w.grid() != u.grid() {
        return Err(Error::Shape("operator and state live on different grids".into()));
    }
    let beta0 = norm(u.data());
    if w.is_zero() || beta0 == 0.0 {
        return Ok(u.clone());
    }
    let defect = w.adjoint_defect();
    if defect > ADJOINT_TOL {
        return Err(Error::Domain(format!("operator is not skew-Hermitian (defect {defect:.2e})")));
    }
    let m = u.data().len();
    let iters = iters.min(m);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut basis: Vec<Vec<Complex64>> = vec![u.data().iter().map(|z| z / beta0).collect()];
    let mut alpha = Vec::with_capacity(iters);
    let mut beta: Vec<f64> = Vec::with_capacity(iters);
    for j in 0..iters {
        let mut r: Vec<Complex64> = w.apply_slice(&basis[j]).into_iter().map(|z| z * minus_i).collect();
        let a = dot(&basis[j], &r).re;
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &r);
                for (x, y) in r.iter_mut().zip(v) {
                    *x -= c * y;
                }
            }
        }
        let b = norm(&r);
        let scale = a.abs() + beta.last().copied().unwrap_or(0.0);
        if j + 1 == iters || b <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        beta.push(b);
        basis.push(r.into_iter().map(|z| z / b).collect());
    }
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for j in 0..k {
        t[(j, j)] = alpha[j];
        if j + 1 < k {
            t[(j, j + 1)] = beta[j];
            t[(j + 1, j)] = beta[j];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut coeff = vec![Complex64::new(0.0, 0.0); k];
    for (l, lam) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::new(0.0, *lam).exp() * eig.eigenvectors[(0, l)];
        for (j, c) in coeff.iter_mut().enumerate() {
            *c += phase * eig.eigenvectors[(j, l)];
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (c, v) in coeff.iter().zip(&basis) {
        let c = c * beta0;
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    StateVector::new(u.grid().clone(), out)
}
