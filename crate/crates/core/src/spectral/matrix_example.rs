//! Block matrices `𝒞 = {[[aI, A], [0, aI]]}` and an idealiser element
//! `d = [[E¹¹, E¹²], [0, E²²]]`, checked against the commutator expansion in
//! exact rational arithmetic.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::coefficients::{format_rational, lambda_coeff, rat, Rational};
use crate::{Error, Result};

/// Dense square rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMat {
    n: usize,
    data: Vec<Rational>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            (0..n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * o.get(k, j))
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Block `(r, c)` of size `b`.
    pub fn block(&self, b: usize, r: usize, c: usize) -> Self {
        Self::from_fn(b, |i, j| self.get(r * b + i, c * b + j).clone())
    }

    /// `[[p, q], [s, t]]` from equal-sized blocks.
    pub fn from_blocks(p: &Self, q: &Self, s: &Self, t: &Self) -> Self {
        let b = p.n;
        Self::from_fn(2 * b, |i, j| {
            let m = match (i < b, j < b) {
                (true, true) => p,
                (true, false) => q,
                (false, true) => s,
                (false, false) => t,
            };
            m.get(i % b, j % b).clone()
        })
    }
}

impl fmt::Display for RMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format_rational(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A commutative element `(a, A)` and an idealiser element `(E¹¹, E¹², E²²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrixExample {
    pub n: usize,
    pub a: Rational,
    pub big_a: RMat,
    pub e11: RMat,
    pub e12: RMat,
    pub e22: RMat,
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_block<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    RMat::from_fn(n, |_, _| random_rational(rng))
}

/// `[[aI, A], [0, aI]]`.
pub fn commutative_element(a: &Rational, big_a: &RMat) -> RMat {
    let n = big_a.size();
    let diag = RMat::identity(n).scale(a);
    RMat::from_blocks(&diag, big_a, &RMat::zeros(n), &diag)
}

impl BlockMatrixExample {
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            n,
            a: random_rational(rng),
            big_a: random_block(n, rng),
            e11: random_block(n, rng),
            e12: random_block(n, rng),
            e22: random_block(n, rng),
        }
    }

    pub fn x(&self) -> RMat {
        commutative_element(&self.a, &self.big_a)
    }

    pub fn d(&self) -> RMat {
        RMat::from_blocks(&self.e11, &self.e12, &RMat::zeros(self.n), &self.e22)
    }

    /// Whether `m` has the shape `[[cI, B], [0, cI]]`.
    pub fn in_commutative(&self, m: &RMat) -> bool {
        let n = self.n;
        let c = m.get(0, 0).clone();
        let diag = RMat::identity(n).scale(&c);
        m.block(n, 0, 0) == diag && m.block(n, 1, 1) == diag && m.block(n, 1, 0).is_zero()
    }

    /// `½(x dᵏ + dᵏ x)`.
    pub fn ang(&self, x: &RMat, k: u32) -> RMat {
        let dk = self.d().pow(k);
        x.mul(&dk).add(&dk.mul(x)).scale(&rat(1, 2))
    }

    /// `ad_d^i(x)`.
    pub fn derive(&self, x: &RMat, i: u32) -> RMat {
        let d = self.d();
        (0..i).fold(x.clone(), |acc, _| d.commutator(&acc))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub n: usize,
    pub k: u32,
    pub l: u32,
    pub trials: usize,
    pub idealiser_ok: usize,
    pub expansion_ok: usize,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.idealiser_ok == self.trials && self.expansion_ok == self.trials
    }
}

/// Checks `[d, x] ∈ 𝒞` and the commutator expansion for `trials` random
/// pairs `x, y ∈ 𝒞`; the first pair uses the example's own `(a, A)` as `x`.
pub fn matrix_example_verify<R: Rng + ?Sized>(
    example: &BlockMatrixExample,
    k: u32,
    l: u32,
    trials: usize,
    rng: &mut R,
) -> Result<MatrixReport> {
    let n = example.n;
    if n == 0 || n > 4 || k + l > 8 {
        return Err(Error::Domain(format!("matrix example needs 1 <= n <= 4 and k+l <= 8, got n={n}, k+l={}", k + l)));
    }
    let mut report = MatrixReport {
        n,
        k,
        l,
        trials,
        idealiser_ok: 0,
        expansion_ok: 0,
    };
    let d = example.d();
    let mut dpow = vec![RMat::identity(2 * n)];
    for j in 1..=(k + l) as usize {
        dpow.push(dpow[j - 1].mul(&d));
    }
    let ang = |x: &RMat, h: u32| {
        let dh = &dpow[h as usize];
        x.mul(dh).add(&dh.mul(x)).scale(&rat(1, 2))
    };
    let chain = |x: &RMat| {
        let mut out = vec![x.clone()];
        for j in 1..=(k + l).max(1) as usize {
            out.push(d.commutator(&out[j - 1]));
        }
        out
    };
    for trial in 0..trials {
        let x = if trial == 0 {
            example.x()
        } else {
            commutative_element(&random_rational(rng), &random_block(n, rng))
        };
        let y = commutative_element(&random_rational(rng), &random_block(n, rng));
        let (dx, dy) = (chain(&x), chain(&y));
        if example.in_commutative(&dx[1]) {
            report.idealiser_ok += 1;
        }
        let lhs = ang(&x, k).commutator(&ang(&y, l));
        let mut rhs = RMat::zeros(2 * n);
        let mut m = 0u32;
        while 2 * m < k + l {
            let mut inner = RMat::zeros(2 * n);
            for i in 0..=2 * m + 1 {
                let c = lambda_coeff(k, l, m, i)?;
                if !c.is_zero() {
                    inner = inner.add(&dx[i as usize].mul(&dy[(2 * m + 1 - i) as usize]).scale(&c));
                }
            }
            rhs = rhs.add(&ang(&inner, k + l - 2 * m - 1));
            m += 1;
        }
        if lhs == rhs {
            report.expansion_ok += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar(v: i64) -> RMat {
        RMat::from_fn(1, |_, _| int(v))
    }

    #[test]
    fn two_by_two_example() {
        let ex = BlockMatrixExample {
            n: 1,
            a: int(0),
            big_a: scalar(1),
            e11: scalar(2),
            e12: scalar(0),
            e22: scalar(3),
        };
        let c = ex.d().commutator(&ex.x());
        assert_eq!(c, RMat::from_blocks(&scalar(0), &scalar(-1), &scalar(0), &scalar(0)));
        assert!(ex.in_commutative(&c));
    }

    #[test]
    fn zero_heights_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ex = BlockMatrixExample::random(2, &mut rng);
        let y = commutative_element(&int(3), &random_block(2, &mut rng));
        assert!(ex.ang(&ex.x(), 0).commutator(&ex.ang(&y, 0)).is_zero());
        let r = matrix_example_verify(&ex, 0, 0, 5, &mut rng).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn expansion_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=2 {
            let ex = BlockMatrixExample::random(n, &mut rng);
            let r = matrix_example_verify(&ex, 2, 1, 20, &mut rng).unwrap();
            assert!(r.passed(), "{r:?}");
            let r = matrix_example_verify(&ex, 3, 2, 4, &mut rng).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let ex = BlockMatrixExample::random(5, &mut rng);
        assert!(matrix_example_verify(&ex, 1, 1, 1, &mut rng).is_err());
        let ex = BlockMatrixExample::random(1, &mut rng);
        assert!(matrix_example_verify(&ex, 5, 4, 1, &mut rng).is_err());
    }

    #[test]
    fn outside_idealiser() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ex = BlockMatrixExample::random(2, &mut rng);
        let x = ex.x();
        let bad_d = RMat::from_blocks(&ex.e11, &ex.e12, &RMat::identity(2), &ex.e22);
        assert!(!ex.in_commutative(&bad_d.commutator(&x)));
    }
}
