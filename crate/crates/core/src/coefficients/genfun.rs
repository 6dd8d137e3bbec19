use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{factorial, int, rat, Rational};
use crate::{Error, Result};

/// Exponents of `u, w, y, x`, in that order.
pub type Exp4 = [u32; 4];

/// Truncated power series in four variables with rational coefficients.
///
/// Terms whose exponent in any variable exceeds its bound are discarded, so
/// every operation closes over the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Series4 {
    bounds: Exp4,
    coeffs: BTreeMap<Exp4, Rational>,
}

impl Series4 {
    pub fn zero(bounds: Exp4) -> Self {
        Self {
            bounds,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(bounds: Exp4, c: Rational) -> Self {
        let mut s = Self::zero(bounds);
        s.insert([0; 4], c);
        s
    }

    /// `c · u^a w^b y^c x^d`, or zero if outside the bounds.
    pub fn monomial(bounds: Exp4, exp: Exp4, c: Rational) -> Self {
        let mut s = Self::zero(bounds);
        s.insert(exp, c);
        s
    }

    pub fn bounds(&self) -> Exp4 {
        self.bounds
    }

    fn fits(&self, e: &Exp4) -> bool {
        e.iter().zip(self.bounds.iter()).all(|(a, b)| a <= b)
    }

    fn insert(&mut self, e: Exp4, c: Rational) {
        if c.is_zero() || !self.fits(&e) {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: Exp4) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp4, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.bounds);
        for (e, v) in &self.coeffs {
            out.insert(*e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Exp4, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                if !self.fits(&e) {
                    continue;
                }
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Self {
            bounds: self.bounds,
            coeffs: acc,
        }
    }

    fn constant_term(&self) -> Rational {
        self.coeff([0; 4])
    }

    /// `Σ cₘ zᵐ` for a series `z` without constant term; stops once the
    /// power truncates to zero.
    fn compose(z: &Self, coeff: impl Fn(u32) -> Rational) -> Result<Self> {
        if !z.constant_term().is_zero() {
            return Err(Error::Domain("composition needs zero constant term".into()));
        }
        let mut out = Self::constant(z.bounds, coeff(0));
        let mut power = Self::constant(z.bounds, Rational::one());
        let mut m = 0;
        loop {
            m += 1;
            power = power.mul(z);
            if power.is_empty() {
                return Ok(out);
            }
            out = out.add(&power.scale(&coeff(m)));
        }
    }

    pub fn exp(&self) -> Result<Self> {
        Self::compose(self, |m| Rational::new(1.into(), factorial(m)))
    }

    pub fn cosh(&self) -> Result<Self> {
        Self::compose(self, |m| {
            if m % 2 == 0 {
                Rational::new(1.into(), factorial(m))
            } else {
                Rational::zero()
            }
        })
    }

    /// Multiplicative inverse via the geometric series around the constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::Domain("series inverse needs a unit constant term".into()));
        }
        let inv0 = c0.recip();
        let mut rest = self.scale(&inv0);
        rest.coeffs.remove(&[0; 4]);
        let geo = Self::compose(&rest, |m| if m % 2 == 0 { int(1) } else { int(-1) })?;
        Ok(geo.scale(&inv0))
    }
}

/// Expansion of
/// `exp((wy − uxy)/2) / (1 − (w+u)) · cosh(uy/2) cosh(wxy/2) / cosh(y(u+w)(1+x)/2)`
/// truncated at the given per-variable degrees.
///
/// The coefficient of `uˡ wᵏ yⁿ xⁱ` is `(k+l−n)! π_{n,i}^{k,l} / (l! k!)`.
pub fn genfun_series(deg_u: u32, deg_w: u32, deg_y: u32, deg_x: u32) -> Series4 {
    let b = [deg_u, deg_w, deg_y, deg_x];
    let mono = |e: Exp4, c: Rational| Series4::monomial(b, e, c);
    let half = rat(1, 2);

    let front = mono([0, 1, 1, 0], half.clone())
        .add(&mono([1, 0, 1, 1], -half.clone()))
        .exp()
        .expect("no constant term");
    let geometric = Series4::constant(b, int(1))
        .add(&mono([0, 1, 0, 0], int(-1)))
        .add(&mono([1, 0, 0, 0], int(-1)))
        .inverse()
        .expect("unit constant term");
    let cosh_u = mono([1, 0, 1, 0], half.clone()).cosh().expect("no constant term");
    let cosh_w = mono([0, 1, 1, 1], half.clone()).cosh().expect("no constant term");
    // y(u+w)(1+x)/2
    let z = mono([1, 0, 1, 0], half.clone())
        .add(&mono([0, 1, 1, 0], half.clone()))
        .add(&mono([1, 0, 1, 1], half.clone()))
        .add(&mono([0, 1, 1, 1], half));
    let denom = z.cosh().expect("no constant term").inverse().expect("unit");

    front
        .mul(&geometric)
        .mul(&cosh_u)
        .mul(&cosh_w)
        .mul(&denom)
}

/// Reads `π_{n,i}^{k,l}` off a generating-function expansion.
pub fn pi_from_genfun(series: &Series4, k: u32, l: u32, n: u32, i: u32) -> Result<Rational> {
    let [bu, bw, by, bx] = series.bounds();
    if l > bu || k > bw || n > by || i > bx {
        return Err(Error::Range(format!(
            "({k},{l},{n},{i}) lies outside the series truncation {:?}",
            series.bounds()
        )));
    }
    if n > k + l || i > n {
        return Err(Error::Range(format!("need i <= n <= k+l, got ({k},{l},{n},{i})")));
    }
    let c = series.coeff([l, k, n, i]);
    let scale = Rational::new(factorial(l) * factorial(k), factorial(k + l - n));
    Ok(c * scale)
}
