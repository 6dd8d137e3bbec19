use nalgebra::DMatrix;
use num_complex::Complex64;

use super::OperatorSum;
use crate::{Error, Result};

/// Largest grid the dense oracle accepts.
pub const DENSE_LIMIT: usize = 512;

/// Dense matrix of an operator sum.
///
/// Each `Kᵏ` is built from its circulant generating column with the parity
/// `c_{−j} = (−1)ᵏ c_j` imposed, so symmetry or skew-symmetry is exact.
pub fn dense_assemble(op: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let grid = op.grid();
    let m = grid.len();
    if m > DENSE_LIMIT {
        return Err(Error::Unsupported(format!("dense assembly at M={m} (limit {DENSE_LIMIT})")));
    }
    let mut out = DMatrix::zeros(m, m);
    for term in op.ops() {
        let c = grid.diff_column(term.k);
        let half = term.scalar * 0.5;
        for i in 0..m {
            for j in 0..m {
                let cij = c[(i + m - j) % m];
                if cij != 0.0 {
                    out[(i, j)] += half * ((term.f[i] + term.f[j]) * cij);
                }
            }
        }
    }
    Ok(out)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(dt·H)` by scaling and squaring with the degree-13 Padé approximant.
pub fn dense_expm(h: &DMatrix<Complex64>, dt: f64) -> Result<DMatrix<Complex64>> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::Shape(format!("expm of a {}x{} matrix", n, h.ncols())));
    }
    if n > DENSE_LIMIT {
        return Err(Error::Unsupported(format!("dense expm at size {n} (limit {DENSE_LIMIT})")));
    }
    let a = h * Complex64::new(dt, 0.0);
    let norm = one_norm(&a);
    if !norm.is_finite() {
        return Err(Error::Domain("expm of a non-finite matrix".into()));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::new(0.5f64.powi(s), 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9)) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8)) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Domain("Padé denominator is singular".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
