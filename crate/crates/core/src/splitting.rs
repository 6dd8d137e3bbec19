//! Truncated exponential calculus on 𝔉, the symmetric BCH exponent, symmetric
//! Zassenhaus splittings of the semiclassical Hamiltonian, graded Magnus
//! integrands and the FFT cost count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::coefficients::{ceil_rational, format_rational, int, parse_rational, rat, Rational};
use crate::falgebra::{FTerm, Grade, ScaledScalar};
use crate::symfunc::{DiffPoly, Symbol};
use crate::{Error, Result};

/// Series in the time variable `t`, truncated above degree `n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSeries {
    n_max: u32,
    terms: BTreeMap<u32, FTerm>,
}

impl ExpSeries {
    pub fn zero(n_max: u32) -> Self {
        Self {
            n_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_max: u32) -> Self {
        Self::from_fterm(&FTerm::component(0, Grade::ONE, DiffPoly::one()), n_max)
    }

    pub fn from_fterm(a: &FTerm, n_max: u32) -> Self {
        let mut out = Self::zero(n_max);
        for d in a.t_degrees() {
            if d <= n_max {
                out.terms.insert(d, a.t_part(d));
            }
        }
        out
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn degree(&self, d: u32) -> FTerm {
        self.terms.get(&d).cloned().unwrap_or_default()
    }

    pub fn to_fterm(&self) -> FTerm {
        self.terms.values().fold(FTerm::zero(), |acc, t| acc.add(t))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, d: u32, t: FTerm) {
        if d > self.n_max || t.is_zero() {
            return;
        }
        let slot = self.terms.entry(d).or_default();
        slot.add_assign(&t);
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_max.min(other.n_max));
        for (d, t) in self.terms.iter().chain(other.terms.iter()) {
            out.insert_add(*d, t.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n_max);
        for (d, t) in &self.terms {
            out.insert_add(*d, t.scale(c));
        }
        out
    }

    /// Truncated product; degrees above `n_max` are never formed.
    pub fn mul(&self, other: &Self) -> Self {
        let n_max = self.n_max.min(other.n_max);
        let mut out = Self::zero(n_max);
        for (da, ta) in &self.terms {
            for (db, tb) in &other.terms {
                if da + db <= n_max {
                    out.insert_add(da + db, ta.assoc_mul(tb));
                }
            }
        }
        out
    }

    fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }
}

/// `Σ aᵐ/m!`; `a` must have no degree-zero part.
pub fn exp_series(a: &ExpSeries) -> Result<ExpSeries> {
    if a.min_degree() == Some(0) {
        return Err(Error::Domain("exp_series needs a series without t^0 term".into()));
    }
    let mut out = ExpSeries::identity(a.n_max);
    let mut power = ExpSeries::identity(a.n_max);
    let mut fact = Rational::one();
    for m in 1..=a.n_max {
        power = power.mul(a);
        if power.is_zero() {
            break;
        }
        fact *= int(m as i64);
        out = out.add(&power.scale(&fact.recip()));
    }
    Ok(out)
}

/// `Σ (−1)ᵐ⁺¹ (e−1)ᵐ/m`; the degree-zero part of `e` must be the identity.
pub fn log_series(e: &ExpSeries) -> Result<ExpSeries> {
    let id = ExpSeries::identity(e.n_max);
    if e.degree(0) != id.degree(0) {
        return Err(Error::Domain("log_series needs the identity as t^0 term".into()));
    }
    let x = e.sub(&id);
    let mut out = ExpSeries::zero(e.n_max);
    let mut power = ExpSeries::identity(e.n_max);
    for m in 1..=e.n_max {
        power = power.mul(&x);
        if power.is_zero() {
            break;
        }
        let c = if m % 2 == 1 { rat(1, m as i64) } else { rat(-1, m as i64) };
        out = out.add(&power.scale(&c));
    }
    Ok(out)
}

/// `log(exp(w/2) exp(x) exp(w/2))` truncated at `n_max`.
fn symmetric_product_log(w: &FTerm, x: &FTerm, n_max: u32) -> Result<FTerm> {
    let half = exp_series(&ExpSeries::from_fterm(&w.scale(&rat(1, 2)), n_max))?;
    let mid = exp_series(&ExpSeries::from_fterm(x, n_max))?;
    Ok(log_series(&half.mul(&mid).mul(&half))?.to_fterm())
}

/// Symmetric BCH exponent `log(exp(a/2) exp(b) exp(a/2))` up to `t^n_max`.
/// Both inputs must be linear in `t`.
pub fn sbch(a: &FTerm, b: &FTerm, n_max: u32) -> Result<FTerm> {
    for (name, v) in [("a", a), ("b", b)] {
        if v.components().any(|(_, g, _)| g.t != 1) {
            return Err(Error::Domain(format!("sbch: {name} must carry t^1 on every component")));
        }
    }
    symmetric_product_log(a, b, n_max)
}

/// `itε⟨1⟩₂`, the kinetic exponent of the semiclassical Hamiltonian.
pub fn kinetic_exponent() -> FTerm {
    FTerm::ang_scaled(&ScaledScalar::new(int(1), 1, 1, 1), DiffPoly::one(), 2)
}

/// `−itε⁻¹⟨V⟩₀` for the named potential symbol.
pub fn potential_exponent(sym: &Symbol) -> FTerm {
    FTerm::ang_scaled(&ScaledScalar::new(int(-1), 1, 1, -1), DiffPoly::var(sym), 0)
}

/// Exponents `W⁰ … Wⁿ⁺¹` of a symmetric Zassenhaus splitting
/// `e^{½W⁰}⋯e^{½Wⁿ}e^{Wⁿ⁺¹}e^{½Wⁿ}⋯e^{½W⁰}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub n: u32,
    pub sigma: Rational,
    pub exponents: Vec<FTerm>,
}

impl Splitting {
    /// `(2n+3)σ − 1`, the σ-order of the local error.
    pub fn order_target(&self) -> Rational {
        &self.sigma * int(2 * self.n as i64 + 3) - int(1)
    }

    /// Highest derivative order needed per symbol, over all exponents.
    pub fn manifest(&self) -> BTreeMap<Symbol, BTreeSet<u32>> {
        let mut out: BTreeMap<Symbol, BTreeSet<u32>> = BTreeMap::new();
        for w in &self.exponents {
            for (_, _, p) in w.components() {
                for (s, d) in p.derivative_orders() {
                    out.entry(s).or_default().insert(d);
                }
            }
        }
        out
    }

    /// The palindromic product, expanded as a series up to `t^n_max`.
    pub fn recompose(&self, n_max: u32) -> Result<ExpSeries> {
        let half = rat(1, 2);
        let last = self.exponents.len() - 1;
        let mut factors = Vec::with_capacity(2 * last + 1);
        for w in &self.exponents[..last] {
            factors.push(exp_series(&ExpSeries::from_fterm(&w.scale(&half), n_max))?);
        }
        let middle = exp_series(&ExpSeries::from_fterm(&self.exponents[last], n_max))?;
        let mut out = ExpSeries::identity(n_max);
        for f in &factors {
            out = out.mul(f);
        }
        out = out.mul(&middle);
        for f in factors.iter().rev() {
            out = out.mul(f);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let exps: Vec<ExponentJson> = self
            .exponents
            .iter()
            .enumerate()
            .map(|(idx, w)| {
                let mut heights: Vec<u32> = w.components().map(|(k, _, _)| k).collect();
                heights.sort_unstable();
                heights.dedup();
                ExponentJson {
                    index: idx as u32,
                    heights,
                    sigma_order: w.sigma_order(&self.sigma).map(|q| format_rational(&q)),
                    formula: w.to_string(),
                    terms: w.to_json(),
                }
            })
            .collect();
        let manifest = self
            .manifest()
            .into_iter()
            .map(|(s, orders)| ManifestJson {
                sym: s.to_string(),
                orders: orders.into_iter().collect(),
            })
            .collect();
        serde_json::to_value(SplittingJson {
            n: self.n,
            sigma: format_rational(&self.sigma),
            order_target: format_rational(&self.order_target()),
            exponents: exps,
            manifest,
        })
        .expect("splitting serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: SplittingJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Format(e.to_string()))?;
        if doc.exponents.len() != doc.n as usize + 2 {
            return Err(Error::Format(format!(
                "splitting with n={} needs {} exponents, got {}",
                doc.n,
                doc.n + 2,
                doc.exponents.len()
            )));
        }
        let mut exponents = Vec::with_capacity(doc.exponents.len());
        for (idx, e) in doc.exponents.iter().enumerate() {
            if e.index as usize != idx {
                return Err(Error::Format(format!("exponent {idx} has index {}", e.index)));
            }
            exponents.push(FTerm::from_json(&e.terms)?);
        }
        Ok(Self {
            n: doc.n,
            sigma: parse_rational(&doc.sigma)?,
            exponents,
        })
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, w) in self.exponents.iter().enumerate() {
            writeln!(f, "W[{idx}] = {w}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ExponentJson {
    index: u32,
    heights: Vec<u32>,
    sigma_order: Option<String>,
    formula: String,
    terms: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct ManifestJson {
    sym: String,
    orders: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SplittingJson {
    n: u32,
    sigma: String,
    order_target: String,
    exponents: Vec<ExponentJson>,
    manifest: Vec<ManifestJson>,
}

/// Symmetric Zassenhaus splitting of `exp(a + b)`.
///
/// `W⁰ = a`, `W¹ = b`. The running exponent is then conjugated symmetrically,
/// `X_{k+1} = log(e^{−½W^k} e^{X_k} e^{−½W^k})`, and `W^k` for `2 ≤ k ≤ n` is
/// the `t^{2k−1}` part of `X_k`. The last exponent is `X_{n+1}` cut at
/// `t^{2n+1}`, so the product reproduces `exp(a+b)` through `t^{2n+2}`.
pub fn zassenhaus(a: &FTerm, b: &FTerm, n: u32, sigma: &Rational) -> Result<Splitting> {
    if !sigma.is_positive() {
        return Err(Error::Domain(format!("sigma must be positive, got {}", format_rational(sigma))));
    }
    for (name, v) in [("a", a), ("b", b)] {
        if v.is_zero() || v.components().any(|(_, g, _)| g.t != 1) {
            return Err(Error::Domain(format!("zassenhaus: {name} must be nonzero and linear in t")));
        }
    }
    let n_max = 2 * n + 1;
    let mut exponents = vec![a.clone(), b.clone()];
    if n == 0 {
        return Ok(Splitting {
            n,
            sigma: sigma.clone(),
            exponents,
        });
    }
    let x0 = a.add(b);
    let x1 = symmetric_product_log(&a.neg(), &x0, n_max)?;
    let mut x = symmetric_product_log(&b.neg(), &x1, n_max)?;
    for k in 2..=n {
        let w = x.t_part(2 * k - 1);
        x = symmetric_product_log(&w.neg(), &x, n_max)?;
        exponents.push(w);
    }
    exponents.push(x.truncate_t(n_max));
    Ok(Splitting {
        n,
        sigma: sigma.clone(),
        exponents,
    })
}

/// One simplified integrand of the graded Magnus expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusTerm {
    /// Time arguments `ξ₁ … ξₘ`.
    pub labels: Vec<String>,
    /// Integration limits, outermost first, e.g. `["t", "ξ1", "ξ2"]`.
    pub limits: Vec<String>,
    pub coefficient: Rational,
    /// The bracket as written, e.g. `[A(ξ2),A(ξ1)]`.
    pub bracket: String,
    /// The bracket expanded without commutators, not yet multiplied by `coefficient`.
    pub integrand: FTerm,
}

impl MagnusTerm {
    pub fn depth(&self) -> usize {
        self.labels.len()
    }

    pub fn weighted(&self) -> FTerm {
        self.integrand.scale(&self.coefficient)
    }
}

/// `A(ξ) = itε⟨1⟩₂ − itε⁻¹⟨V_ξ⟩₀` with the potential symbol `V{idx}`.
pub fn magnus_generator(idx: usize) -> FTerm {
    let v = Symbol::new(&format!("V{idx}")).expect("valid symbol");
    kinetic_exponent().add(&potential_exponent(&v))
}

/// Integrands of the graded Magnus expansion through `depth` nested integrals.
pub fn magnus_symbolic(depth: u32) -> Result<Vec<MagnusTerm>> {
    if depth == 0 {
        return Err(Error::Domain("Magnus depth starts at 1".into()));
    }
    if depth > 3 {
        return Err(Error::Unsupported(format!("Magnus depth {depth} (only 1..=3)")));
    }
    let a = magnus_generator;
    let labels = |m: usize| (1..=m).map(|j| format!("ξ{j}")).collect::<Vec<_>>();
    let lim = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut out = vec![MagnusTerm {
        labels: labels(1),
        limits: lim(&["t"]),
        coefficient: int(1),
        bracket: "A(ξ1)".into(),
        integrand: a(1),
    }];
    if depth >= 2 {
        out.push(MagnusTerm {
            labels: labels(2),
            limits: lim(&["t", "ξ1"]),
            coefficient: rat(-1, 2),
            bracket: "[A(ξ2),A(ξ1)]".into(),
            integrand: a(2).commutator(&a(1)),
        });
    }
    if depth >= 3 {
        out.push(MagnusTerm {
            labels: labels(3),
            limits: lim(&["t", "ξ1", "ξ1"]),
            coefficient: rat(1, 12),
            bracket: "[A(ξ2),[A(ξ3),A(ξ1)]]".into(),
            integrand: a(2).commutator(&a(3).commutator(&a(1))),
        });
        out.push(MagnusTerm {
            labels: labels(3),
            limits: lim(&["t", "ξ1", "ξ2"]),
            coefficient: rat(1, 4),
            bracket: "[[A(ξ3),A(ξ2)],A(ξ1)]".into(),
            integrand: a(3).commutator(&a(2)).commutator(&a(1)),
        });
    }
    Ok(out)
}

/// Number of FFTs per step of the order-`n` splitting under `t = O(ε^σ)`:
/// `4 + 2 Σ_{k=2}^{n} 4(k−1)⌈r/((2k−1)σ−1)⌉ + 4n⌈r/((2n+1)σ−1)⌉`, `r = (2n+3)σ−1`.
pub fn cost(n: u32, sigma: &Rational) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("cost needs n >= 1".into()));
    }
    if !sigma.is_positive() {
        return Err(Error::Domain("sigma must be positive".into()));
    }
    let target = sigma * int(2 * n as i64 + 3) - int(1);
    let ceil_ratio = |k: u32| -> Result<u64> {
        let den = sigma * int(2 * k as i64 - 1) - int(1);
        if !den.is_positive() {
            return Err(Error::Domain(format!(
                "(2k-1)sigma-1 = {} is not positive at k={k}",
                format_rational(&den)
            )));
        }
        ceil_rational(&(&target / den))
            .to_u64()
            .ok_or_else(|| Error::Domain("cost overflows u64".into()))
    };
    let mut total: u64 = 4;
    for k in 2..=n {
        total += 8 * (k as u64 - 1) * ceil_ratio(k)?;
    }
    total += 4 * n as u64 * ceil_ratio(n + 1)?;
    Ok(total)
}

/// Default Lanczos iteration count for exponent `k` of an order-`n` splitting,
/// `⌈((2n+3)σ−1)/((2k−1)σ−1)⌉`.
pub fn lanczos_iterations(n: u32, k: u32, sigma: &Rational) -> Result<usize> {
    let target = sigma * int(2 * n as i64 + 3) - int(1);
    let den = sigma * int(2 * k as i64 - 1) - int(1);
    if !den.is_positive() {
        return Err(Error::Domain(format!("no iteration count for k={k} at this sigma")));
    }
    Ok(ceil_rational(&(target / den)).to_usize().unwrap_or(usize::MAX))
}

/// Parses `"p/q"` or `"p"` as a positive rational.
pub fn parse_sigma(text: &str) -> Result<Rational> {
    let q = parse_rational(text)?;
    if !q.is_positive() {
        return Err(Error::Domain(format!("sigma must be positive, got {text:?}")));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::falgebra::Parity;
    use proptest::prelude::*;

    fn v() -> Symbol {
        Symbol::new("V").unwrap()
    }

    fn dv(d: u32) -> DiffPoly {
        DiffPoly::deriv_var(&v(), d)
    }

    fn scaled(q: Rational, i: u32, t: u32, e: i32, p: DiffPoly, k: u32) -> FTerm {
        FTerm::ang_scaled(&ScaledScalar::new(q, i, t, e), p, k)
    }

    fn tdse_sbch_expected() -> FTerm {
        kinetic_exponent()
            .add(&potential_exponent(&v()))
            .add(&scaled(rat(-1, 6), 1, 3, 1, dv(2), 2))
            .add(&scaled(rat(1, 24), 1, 3, 1, dv(4), 0))
            .add(&scaled(rat(-1, 6), 1, 3, -1, dv(1).mul(&dv(1)), 0))
    }

    #[test]
    fn exp_series_examples() {
        let a = scaled(int(1), 0, 1, 0, DiffPoly::sym("f"), 1);
        let s = ExpSeries::from_fterm(&a, 2);
        let e = exp_series(&s).unwrap();
        let expect = ExpSeries::identity(2)
            .add(&s)
            .add(&s.mul(&s).scale(&rat(1, 2)));
        assert_eq!(e, expect);
        let inv = exp_series(&s.scale(&int(-1))).unwrap();
        assert_eq!(e.mul(&inv), ExpSeries::identity(2));
        assert!(exp_series(&ExpSeries::identity(2)).is_err());
        assert!(log_series(&s).is_err());
    }

    #[test]
    fn sbch_degree_three_matches_commutator_form() {
        let a = scaled(int(1), 0, 1, 0, DiffPoly::sym("f"), 2)
            .add(&scaled(int(2), 0, 1, 0, DiffPoly::sym("g"), 1));
        let b = scaled(int(1), 0, 1, 0, DiffPoly::sym("h"), 0)
            .add(&scaled(int(-1), 0, 1, 0, DiffPoly::sym("f"), 1));
        let ba = b.commutator(&a);
        let expect = a
            .add(&b)
            .sub(&ba.commutator(&a).scale(&rat(1, 24)))
            .sub(&ba.commutator(&b).scale(&rat(1, 12)));
        assert_eq!(sbch(&a, &b, 3).unwrap(), expect);
        assert_eq!(sbch(&a, &FTerm::zero(), 5).unwrap(), a);
    }

    #[test]
    fn tdse_sbch_through_t4() {
        let s = sbch(&kinetic_exponent(), &potential_exponent(&v()), 4).unwrap();
        assert_eq!(s, tdse_sbch_expected());
        assert!(s.skew_hermitian_check());
        assert!(sbch(&kinetic_exponent().t_part(7), &FTerm::zero(), 3).is_ok());
        assert!(sbch(&kinetic_exponent().assoc_mul(&kinetic_exponent()), &FTerm::zero(), 3).is_err());
    }

    #[test]
    fn sbch_only_odd_degrees() {
        let s = sbch(&kinetic_exponent(), &potential_exponent(&v()), 7).unwrap();
        assert!(s.t_degrees().iter().all(|d| d % 2 == 1), "{:?}", s.t_degrees());
        assert!(s.t_degrees().contains(&7));
        assert!(s.skew_hermitian_check());
    }

    #[test]
    fn zassenhaus_n0_and_n1() {
        let (a, b) = (kinetic_exponent(), potential_exponent(&v()));
        let s0 = zassenhaus(&a, &b, 0, &int(1)).unwrap();
        assert_eq!(s0.exponents, vec![a.clone(), b.clone()]);
        let s1 = zassenhaus(&a, &b, 1, &int(1)).unwrap();
        assert_eq!(s1.exponents.len(), 3);
        assert_eq!(s1.exponents[2], tdse_sbch_expected().t_part(3).neg());
        assert!(zassenhaus(&a, &b, 1, &int(0)).is_err());
    }

    #[test]
    fn zassenhaus_structure_and_recomposition() {
        let (a, b) = (kinetic_exponent(), potential_exponent(&v()));
        for n in 1..=2 {
            for sigma in [rat(1, 2), int(1)] {
                let s = zassenhaus(&a, &b, n, &sigma).unwrap();
                for (k, w) in s.exponents.iter().enumerate() {
                    assert!(w.skew_hermitian_check(), "W{k}");
                    if k >= 2 {
                        assert_eq!(w.parity(), Parity::Even);
                        assert!(w.height() <= 2 * k as i64 - 2);
                    }
                    if k >= 1 {
                        let expect = &sigma * int(2 * k as i64 - 1) - int(1);
                        assert_eq!(w.sigma_order(&sigma), Some(expect), "n={n} k={k}");
                    }
                }
            }
            let s = zassenhaus(&a, &b, n, &int(1)).unwrap();
            let n_max = 2 * n + 2;
            let lhs = s.recompose(n_max).unwrap();
            let rhs = exp_series(&ExpSeries::from_fterm(&a.add(&b), n_max)).unwrap();
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn splitting_json_roundtrip() {
        let s = zassenhaus(&kinetic_exponent(), &potential_exponent(&v()), 2, &rat(1, 2)).unwrap();
        let j = s.to_json();
        assert_eq!(Splitting::from_json(&j).unwrap(), s);
        assert_eq!(j["order_target"], "5/2");
        let orders = &j["manifest"][0]["orders"];
        assert_eq!(orders[0], 0);
        assert!(Splitting::from_json(&serde_json::json!({"n": 1})).is_err());
        let m = s.manifest();
        assert!(m[&v()].contains(&4));
    }

    #[test]
    fn magnus_terms() {
        let t = magnus_symbolic(1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].integrand, magnus_generator(1));

        let t = magnus_symbolic(2).unwrap();
        let d = |j: usize, o: u32| DiffPoly::deriv_var(&Symbol::new(&format!("V{j}")).unwrap(), o);
        let expect = scaled(int(2), 0, 2, 0, d(1, 1).sub(&d(2, 1)), 1);
        assert_eq!(t[1].integrand, expect);
        assert_eq!(t[1].weighted(), expect.scale(&rat(-1, 2)));

        let t = magnus_symbolic(3).unwrap();
        assert_eq!(t.len(), 4);
        for m in &t {
            assert!(m.integrand.skew_hermitian_check(), "{}", m.bracket);
        }
        assert!(matches!(magnus_symbolic(4), Err(Error::Unsupported(_))));
        assert!(magnus_symbolic(0).is_err());
    }

    #[test]
    fn cost_examples() {
        assert_eq!(cost(1, &int(1)).unwrap(), 12);
        assert_eq!(cost(2, &int(1)).unwrap(), 44);
        for n in 1..=50 {
            let c = cost(n, &int(1)).unwrap();
            assert!(c <= 12 * (n as u64).pow(2) + 4 * n as u64 - 4, "n={n}");
        }
        for n in 5..=50u64 {
            let r = cost(n as u32, &int(1)).unwrap() as f64 / (n * n) as f64;
            assert!((8.0..=13.0).contains(&r), "n={n} ratio {r}");
        }
        assert!(cost(2, &rat(1, 3)).is_err());
        assert!(cost(1, &int(0)).is_err());
        assert_eq!(lanczos_iterations(1, 2, &int(1)).unwrap(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn log_inverts_exp(c1 in -3i64..4, c2 in -3i64..4, k in 0u32..3) {
            let a = scaled(int(c1), 0, 1, 0, DiffPoly::sym("f"), k)
                .add(&scaled(int(c2), 1, 2, 0, DiffPoly::sym("g"), 1));
            let s = ExpSeries::from_fterm(&a, 4);
            prop_assert_eq!(log_series(&exp_series(&s).unwrap()).unwrap(), s);
        }
    }
}
