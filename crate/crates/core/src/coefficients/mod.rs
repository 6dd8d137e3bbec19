//! Structure coefficients π, λ, μ, γ of the algebra of symmetrised terms.
//!
//! The product `⟨x⟩ₖ·⟨y⟩ₗ = Σₙ ⟨zₙ⟩_{k+l−n}` with `zₙ = Σᵢ π_{n,i}^{k,l} Dⁱx Dⁿ⁻ⁱy`
//! is fully determined by the rationals π. They are computed here in two
//! independent ways (a triangular recursion and a closed form weighted by
//! Bernoulli numbers), and [`genfun`] provides a third route through the
//! generating function. The recursion is the production path and is cached
//! per `(k, l)` block; the other two exist to cross-check it.

mod genfun;
mod identities;
pub mod reference;
mod table;

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub use genfun::{genfun_series, pi_from_genfun, Series4};
pub use identities::{
    factorial_sum_lhs, factorial_sum_rhs, weight_sum_lhs, weight_sum_rhs, bernoulli_sum_lhs, bernoulli_sum_rhs, verify_coefficient_identities,
    IdentityOutcome, IdentityReport,
};
pub use table::{CoeffEntry, CoeffKind, CoeffTable};

/// Exact rational scalar. Always reduced, denominator positive.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `"num/den"`, or `"num"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"num"` or `"num/den"` (optional sign on the numerator).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Format(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Binomial coefficient, zero whenever `m < 0`, `m > n` or `n < 0`.
pub fn binomial(n: i64, m: i64) -> BigInt {
    if n < 0 || m < 0 || m > n {
        return BigInt::zero();
    }
    let m = m.min(n - m);
    let mut acc = BigInt::one();
    for j in 0..m {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn binomial_q(n: i64, m: i64) -> Rational {
    Rational::from_integer(binomial(n, m))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

static BERNOULLI: LazyLock<RwLock<Vec<Rational>>> =
    LazyLock::new(|| RwLock::new(vec![Rational::one()]));

/// Bernoulli number `Bᵣ` with the convention `B₁ = −1/2`.
///
/// Generated by `Σ_{j=0}^{r} C(r+1, j) Bⱼ = 0` and memoised.
pub fn bernoulli(r: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().unwrap().get(r) {
        return b.clone();
    }
    let mut cache = BERNOULLI.write().unwrap();
    while cache.len() <= r {
        let m = cache.len() as i64;
        let s = cache
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, b)| {
                acc + binomial_q(m + 1, j as i64) * b
            });
        cache.push(-s / int(m + 1));
    }
    cache[r].clone()
}

/// `Pᵣ = (−1)ʳ (2ʳ − 1) Bᵣ`.
pub fn p_r(r: usize) -> Rational {
    let two_r = BigInt::one() << r;
    let v = Rational::from_integer(two_r - 1) * bernoulli(r);
    if r % 2 == 1 {
        -v
    } else {
        v
    }
}

fn l_value_total(k: i64, l: i64, a: i64, p: i64) -> Rational {
    let mut v = BigInt::zero();
    if p == 0 {
        v += binomial(k, a) + binomial(k + l, a);
    }
    v += binomial(k, p) * (binomial(k - p, a - p) + binomial(k + l - p, a - p));
    Rational::from_integer(v)
}

/// Right-hand side `L_{a,p}^{k,l}` of the coefficient-matching equations.
pub fn l_value(k: u32, l: u32, a: u32, p: u32) -> Result<Rational> {
    if a > k + l || p > a {
        return Err(Error::Range(format!(
            "L needs p <= a <= k+l, got k={k} l={l} a={a} p={p}"
        )));
    }
    Ok(l_value_total(k as i64, l as i64, a as i64, p as i64))
}

/// Index `(k, l, n, i)` of a structure coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffKey {
    pub k: u32,
    pub l: u32,
    pub n: u32,
    pub i: u32,
}

impl CoeffKey {
    pub fn new(k: u32, l: u32, n: u32, i: u32) -> Self {
        Self { k, l, n, i }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > self.k + self.l || self.i > self.n {
            return Err(Error::Range(format!(
                "need i <= n <= k+l, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// All `π_{n,i}^{k,l}` for one `(k, l)`, indexed `[n][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiBlock {
    pub k: u32,
    pub l: u32,
    rows: Vec<Vec<Rational>>,
}

impl PiBlock {
    pub fn get(&self, n: usize, i: usize) -> Option<&Rational> {
        self.rows.get(n).and_then(|r| r.get(i))
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

fn pi_block_recursive(k: u32, l: u32) -> PiBlock {
    let (ki, li) = (k as i64, l as i64);
    let q = ki + li;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(q as usize + 1);
    for a in 0..=q {
        let mut row = Vec::with_capacity(a as usize + 1);
        for p in 0..=a {
            let mut s = Rational::zero();
            for (n, prev) in rows.iter().enumerate() {
                let n = n as i64;
                let outer = binomial(q - n, a - n);
                if outer.is_zero() {
                    continue;
                }
                let inner = prev
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .fold(BigRational::zero(), |acc, (i, v)| {
                        acc + v * binomial_q(a - n, p - i as i64)
                    });
                s += Rational::from_integer(outer) * inner;
            }
            row.push((l_value_total(ki, li, a, p) - s * int(2)) / int(4));
        }
        rows.push(row);
    }
    PiBlock { k, l, rows }
}

type PiCache = RwLock<HashMap<(u32, u32), Arc<PiBlock>>>;

static PI_CACHE: LazyLock<PiCache> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Cached block of recursive coefficients for `(k, l)`.
pub fn pi_block(k: u32, l: u32) -> Arc<PiBlock> {
    if let Some(b) = PI_CACHE.read().unwrap().get(&(k, l)) {
        return Arc::clone(b);
    }
    let block = Arc::new(pi_block_recursive(k, l));
    let mut cache = PI_CACHE.write().unwrap();
    Arc::clone(cache.entry((k, l)).or_insert(block))
}

/// `π_{n,i}^{k,l}` from the triangular recursion, starting at `π_{0,0} = 1`.
pub fn pi_recursive(key: CoeffKey) -> Result<Rational> {
    key.validate()?;
    Ok(pi_block(key.k, key.l).rows[key.n as usize][key.i as usize].clone())
}

/// `π_{n,i}^{k,l}`, zero outside the valid index range.
pub fn pi_total(k: u32, l: u32, n: u32, i: u32) -> Rational {
    if n > k + l || i > n {
        return Rational::zero();
    }
    pi_block(k, l).rows[n as usize][i as usize].clone()
}

/// `π_{n,i}^{k,l}` from the closed form `½ Σ_{s,j} A_{(n,i),(s,j)} L_{s,j}`,
/// where `A` is lower triangular with `Pᵣ`-weighted off-diagonal entries.
pub fn pi_explicit(key: CoeffKey) -> Result<Rational> {
    key.validate()?;
    let (k, l) = (key.k as i64, key.l as i64);
    let (n, i) = (key.n as i64, key.i as i64);
    let q = k + l;
    let mut acc = Rational::zero();
    for s in 0..=n {
        let r = n - s + 1;
        let weight = p_r(r as usize) / int(r) * binomial_q(q - s, n - s);
        for j in 0..=i.min(s) {
            let lv = l_value_total(k, l, s, j);
            if lv.is_zero() {
                continue;
            }
            let mut a = -(&weight * binomial_q(n - s, i - j));
            if s == n && j == i {
                a += Rational::one();
            }
            acc += a * lv;
        }
    }
    Ok(acc / int(2))
}

fn check_lambda(k: u32, l: u32, n: u32, i: u32) -> Result<()> {
    if 2 * n + 1 > k + l || i > 2 * n + 1 {
        return Err(Error::Range(format!(
            "lambda needs 2n+1 <= k+l and i <= 2n+1, got k={k} l={l} n={n} i={i}"
        )));
    }
    Ok(())
}

/// `λ_{n,i}^{k,l} = 2 π_{2n+1,i}^{k,l}`, the commutator coefficients.
pub fn lambda_coeff(k: u32, l: u32, n: u32, i: u32) -> Result<Rational> {
    check_lambda(k, l, n, i)?;
    Ok(pi_total(k, l, 2 * n + 1, i) * int(2))
}

/// `μ_{n,i}^{k,l} = π_{n,i}^{k,l} − π_{n,n−i}^{l,k}`.
pub fn mu_coeff(k: u32, l: u32, n: u32, i: u32) -> Result<Rational> {
    CoeffKey::new(k, l, n, i).validate()?;
    Ok(pi_total(k, l, n, i) - pi_total(l, k, n, n - i))
}

/// `γ_{n,i}^{k,l} = (π_{n,i}^{k,l} + π_{n,n−i}^{l,k}) / 2`, the Jordan coefficients.
pub fn gamma_coeff(k: u32, l: u32, n: u32, i: u32) -> Result<Rational> {
    CoeffKey::new(k, l, n, i).validate()?;
    Ok((pi_total(k, l, n, i) + pi_total(l, k, n, n - i)) / int(2))
}

/// Smallest integer not below `q`.
pub fn ceil_rational(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}
