//! Exact checks of the three summation identities behind the closed form of π.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{bernoulli, binomial_q, factorial, format_rational, p_r, rat, Rational};

fn inv_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(1), factorial(n as u32))
    }
}

/// `Σ_{i=0}^{P} 1 / ((P−i)! (A−P+i)! i! (N−i)!)`.
///
/// The four-factorial sum depends on its indices only through
/// `A = a−n`, `N = n−s` and `P = p−j`, so those are its parameters.
pub fn factorial_sum_lhs(a: u32, n: u32, p: u32) -> Rational {
    let (a, n, p) = (a as i64, n as i64, p as i64);
    (0..=p).fold(Rational::zero(), |acc, i| {
        acc + inv_factorial(p - i) * inv_factorial(a - p + i) * inv_factorial(i) * inv_factorial(n - i)
    })
}

/// `C(A+N, P) / (A! N!)`.
pub fn factorial_sum_rhs(a: u32, n: u32, p: u32) -> Rational {
    binomial_q((a + n) as i64, p as i64) * inv_factorial(a as i64) * inv_factorial(n as i64)
}

/// `Σ_{n=0}^{b} C(b+1, n+1) (2^{n+1} − 1) B_{n+1}`.
pub fn bernoulli_sum_lhs(b: u32) -> Rational {
    (0..=b as usize).fold(Rational::zero(), |acc, n| {
        let pow = Rational::from_integer((BigInt::from(1) << (n + 1)) - 1);
        acc + binomial_q(b as i64 + 1, n as i64 + 1) * pow * bernoulli(n + 1)
    })
}

/// `−½ δ_{b,0} − δ_{b>0} P_{b+1}`.
pub fn bernoulli_sum_rhs(b: u32) -> Rational {
    if b == 0 {
        rat(-1, 2)
    } else {
        -p_r(b as usize + 1)
    }
}

/// `Σ_{n=0}^{b} P_{n+1} / ((n+1)! (b−n)!)`.
pub fn weight_sum_lhs(b: u32) -> Rational {
    (0..=b as i64).fold(Rational::zero(), |acc, n| {
        acc + p_r(n as usize + 1) * inv_factorial(n + 1) * inv_factorial(b as i64 - n)
    })
}

/// `1/b! − ½ δ_{b,0} − δ_{b>0} P_{b+1} / (b+1)!`.
pub fn weight_sum_rhs(b: u32) -> Rational {
    let base = inv_factorial(b as i64);
    if b == 0 {
        base - rat(1, 2)
    } else {
        base - p_r(b as usize + 1) * inv_factorial(b as i64 + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub b_max: u32,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }
}

fn run(
    name: &'static str,
    cases: impl Iterator<Item = (String, Rational, Rational)>,
) -> IdentityOutcome {
    let mut checked = 0;
    for (label, lhs, rhs) in cases {
        checked += 1;
        if lhs != rhs {
            return IdentityOutcome {
                name,
                checked,
                counterexample: Some(format!(
                    "{label}: lhs {} != rhs {}",
                    format_rational(&lhs),
                    format_rational(&rhs)
                )),
            };
        }
    }
    IdentityOutcome {
        name,
        checked,
        counterexample: None,
    }
}

/// Checks all three identities exactly for every parameter up to `b_max`.
///
/// For the four-factorial sum this means all `A + N ≤ b_max` and
/// `P ≤ A + N + 1` (one past the support, where both sides vanish).
pub fn verify_coefficient_identities(b_max: u32) -> IdentityReport {
    let factorial = run(
        "factorial-sum",
        (0..=b_max).flat_map(move |total| {
            (0..=total).flat_map(move |a| {
                let n = total - a;
                (0..=total + 1).map(move |p| {
                    (format!("A={a} N={n} P={p}"), factorial_sum_lhs(a, n, p), factorial_sum_rhs(a, n, p))
                })
            })
        }),
    );
    let bernoulli = run(
        "bernoulli-sum",
        (0..=b_max).map(|b| (format!("b={b}"), bernoulli_sum_lhs(b), bernoulli_sum_rhs(b))),
    );
    let weight = run(
        "weight-sum",
        (0..=b_max).map(|b| (format!("b={b}"), weight_sum_lhs(b), weight_sum_rhs(b))),
    );
    IdentityReport {
        b_max,
        outcomes: vec![factorial, bernoulli, weight],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_sum_at_zero() {
        assert_eq!(bernoulli_sum_lhs(0), rat(-1, 2));
    }

    #[test]
    fn weight_sum_at_one_by_direct_summation() {
        // P₁/(1!·1!) + P₂/(2!·0!) = 1/2 + 1/4; rhs 1/1! − P₂/2! = 1 − 1/4.
        assert_eq!(weight_sum_lhs(1), rat(3, 4));
        assert_eq!(weight_sum_rhs(1), rat(3, 4));
    }

    #[test]
    fn small_report_passes() {
        let r = verify_coefficient_identities(6);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.outcomes.len(), 3);
    }
}
