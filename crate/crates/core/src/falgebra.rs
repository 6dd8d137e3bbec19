//! The algebra 𝔉 of symmetrised terms `⟨f⟩ₖ = ½(f·dᵏ + dᵏ·f)`.
//!
//! An [`FTerm`] is a finite sum of such terms. Each component also carries a
//! monomial weight `iᵃ tᵇ εᶜ` so that time-step and semiclassical scalings can
//! be tracked exactly alongside the rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coefficients::{
    format_rational, gamma_coeff, int, lambda_coeff, parse_rational, pi_block, Rational,
};
use crate::symfunc::{pretty_magnitude, superscript, DiffPoly, Symbol};
use crate::{Error, Result};

/// The monomial part `iᵃ tᵇ εᶜ` of a scalar, with `a ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Grade {
    pub i: u8,
    pub t: u32,
    pub eps: i32,
}

impl Grade {
    pub const ONE: Grade = Grade { i: 0, t: 0, eps: 0 };

    pub fn new(i: u8, t: u32, eps: i32) -> Self {
        debug_assert!(i < 2);
        Self { i, t, eps }
    }

    /// Product of grades and the sign produced by `i² = −1`.
    fn mul(self, other: Grade) -> (Grade, bool) {
        let i = self.i + other.i;
        (
            Grade {
                i: i % 2,
                t: self.t + other.t,
                eps: self.eps + other.eps,
            },
            i >= 2,
        )
    }
}

/// `q · i^i_pow · t^t_pow · ε^eps_pow`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledScalar {
    pub q: Rational,
    pub i_pow: u8,
    pub t_pow: u32,
    pub eps_pow: i32,
}

impl ScaledScalar {
    /// Folds `i_pow` into `{0, 1}`, moving `i² = −1` into the sign of `q`.
    pub fn new(q: Rational, i_pow: u32, t_pow: u32, eps_pow: i32) -> Self {
        let i_pow = i_pow % 4;
        let q = if i_pow >= 2 { -q } else { q };
        Self {
            q,
            i_pow: (i_pow % 2) as u8,
            t_pow,
            eps_pow,
        }
    }

    pub fn rational(q: Rational) -> Self {
        Self::new(q, 0, 0, 0)
    }

    pub fn grade(&self) -> Grade {
        Grade::new(self.i_pow, self.t_pow, self.eps_pow)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (g, flip) = self.grade().mul(other.grade());
        let q = &self.q * &other.q;
        Self {
            q: if flip { -q } else { q },
            i_pow: g.i,
            t_pow: g.t,
            eps_pow: g.eps,
        }
    }
}

/// `i t³ ε⁻¹`-style rendering of a grade; empty for the unit grade.
fn grade_symbols(g: Grade) -> String {
    let mut s = String::new();
    if g.i == 1 {
        s.push('i');
    }
    match g.t {
        0 => {}
        1 => s.push('t'),
        t => {
            s.push('t');
            s.push_str(&superscript(t as i64));
        }
    }
    match g.eps {
        0 => {}
        1 => s.push('ε'),
        e => {
            s.push('ε');
            s.push_str(&superscript(e as i64));
        }
    }
    s
}

impl fmt::Display for ScaledScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = grade_symbols(self.grade());
        if sym.is_empty() {
            return f.write_str(&format_rational(&self.q));
        }
        if self.q == -Rational::one() {
            write!(f, "−{sym}")
        } else if self.q.is_one() {
            f.write_str(&sym)
        } else {
            write!(f, "{} {sym}", format_rational(&self.q))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Component key, ordered by time degree first so that truncated series
/// read naturally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    t: u32,
    k: u32,
    eps: i32,
    i: u8,
}

impl Key {
    fn new(k: u32, g: Grade) -> Self {
        Self {
            t: g.t,
            k,
            eps: g.eps,
            i: g.i,
        }
    }

    fn grade(&self) -> Grade {
        Grade::new(self.i, self.t, self.eps)
    }
}

/// `Σ g ⟨f⟩ₖ` over heights `k` and grades `g`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FTerm {
    comps: BTreeMap<Key, DiffPoly>,
}

impl FTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `⟨f⟩ₖ`. `ang(1, k)` is `dᵏ` and `ang(f, 0)` is multiplication by `f`.
    pub fn ang(f: DiffPoly, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::Range(format!("height must be non-negative, got {k}")));
        }
        Ok(Self::component(k as u32, Grade::ONE, f))
    }

    /// `s ⟨f⟩ₖ` for a scaled scalar `s`.
    pub fn ang_scaled(s: &ScaledScalar, f: DiffPoly, k: u32) -> Self {
        Self::component(k, s.grade(), f.scale(&s.q))
    }

    pub fn component(k: u32, g: Grade, f: DiffPoly) -> Self {
        let mut out = Self::zero();
        out.add_component(k, g, f);
        out
    }

    fn add_component(&mut self, k: u32, g: Grade, f: DiffPoly) {
        if f.is_zero() {
            return;
        }
        let key = Key::new(k, g);
        match self.comps.get_mut(&key) {
            Some(p) => {
                p.add_assign(&f);
                if p.is_zero() {
                    self.comps.remove(&key);
                }
            }
            None => {
                self.comps.insert(key, f);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// `(height, grade, coefficient)` triples.
    pub fn components(&self) -> impl Iterator<Item = (u32, Grade, &DiffPoly)> {
        self.comps.iter().map(|(key, p)| (key.k, key.grade(), p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (key, p) in &other.comps {
            self.add_component(key.k, key.grade(), p.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            comps: self
                .comps
                .iter()
                .map(|(key, p)| (*key, p.scale(c)))
                .collect(),
        }
    }

    /// Multiplies every component by a scaled scalar.
    pub fn scale_by(&self, s: &ScaledScalar) -> Self {
        let mut out = Self::zero();
        for (key, p) in &self.comps {
            let (g, flip) = key.grade().mul(s.grade());
            let c = if flip { -s.q.clone() } else { s.q.clone() };
            out.add_component(key.k, g, p.scale(&c));
        }
        out
    }

    fn bilinear<F>(&self, other: &Self, mut pair: F) -> Self
    where
        F: FnMut(u32, u32, &DiffPoly, &DiffPoly) -> Vec<(u32, DiffPoly)>,
    {
        let mut out = Self::zero();
        for (ka, pa) in &self.comps {
            for (kb, pb) in &other.comps {
                let (g, flip) = ka.grade().mul(kb.grade());
                for (h, z) in pair(ka.k, kb.k, pa, pb) {
                    let z = if flip { z.neg() } else { z };
                    out.add_component(h, g, z);
                }
            }
        }
        out
    }

    /// The associative product, `⟨x⟩ₖ·⟨y⟩ₗ = Σₙ ⟨Σᵢ π_{n,i}^{k,l} Dⁱx Dⁿ⁻ⁱy⟩_{k+l−n}`.
    pub fn assoc_mul(&self, other: &Self) -> Self {
        self.bilinear(other, |k, l, x, y| {
            let q = k + l;
            let block = pi_block(k, l);
            let dx = x.derivatives(q);
            let dy = y.derivatives(q);
            (0..=q)
                .map(|n| {
                    let mut z = DiffPoly::zero();
                    for i in 0..=n {
                        let c = block.get(n as usize, i as usize).expect("in range");
                        if !c.is_zero() {
                            z.add_scaled(c, &dx[i as usize].mul(&dy[(n - i) as usize]));
                        }
                    }
                    (q - n, z)
                })
                .collect()
        })
    }

    /// The Lie bracket from the λ coefficients:
    /// `[⟨x⟩ₖ,⟨y⟩ₗ] = Σₙ Σᵢ λ_{n,i}^{k,l} ⟨Dⁱx D²ⁿ⁺¹⁻ⁱy⟩_{k+l−2n−1}`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.bilinear(other, |k, l, x, y| {
            let q = k + l;
            if q == 0 {
                return Vec::new();
            }
            let dx = x.derivatives(q);
            let dy = y.derivatives(q);
            (0..=(q - 1) / 2)
                .map(|n| {
                    let m = 2 * n + 1;
                    let mut z = DiffPoly::zero();
                    for i in 0..=m {
                        let c = lambda_coeff(k, l, n, i).expect("in range");
                        if !c.is_zero() {
                            z.add_scaled(&c, &dx[i as usize].mul(&dy[(m - i) as usize]));
                        }
                    }
                    (q - m, z)
                })
                .collect()
        })
    }

    /// `a • b = ½(ab + ba)`, from the γ coefficients (only even `n` survive).
    pub fn jordan(&self, other: &Self) -> Self {
        self.bilinear(other, |k, l, x, y| {
            let q = k + l;
            let dx = x.derivatives(q);
            let dy = y.derivatives(q);
            (0..=q)
                .step_by(2)
                .map(|n| {
                    let mut z = DiffPoly::zero();
                    for i in 0..=n {
                        let c = gamma_coeff(k, l, n, i).expect("in range");
                        if !c.is_zero() {
                            z.add_scaled(&c, &dx[i as usize].mul(&dy[(n - i) as usize]));
                        }
                    }
                    (q - n, z)
                })
                .collect()
        })
    }

    /// Largest height present, `−1` for zero.
    pub fn height(&self) -> i64 {
        self.comps.keys().map(|k| k.k as i64).max().unwrap_or(-1)
    }

    /// Zero counts as even.
    pub fn parity(&self) -> Parity {
        let even = self.comps.keys().all(|k| k.k % 2 == 0);
        let odd = self.comps.keys().all(|k| k.k % 2 == 1);
        match (even, odd) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    /// True iff the term lies in `⊕ i^{k+1}⟨f⟩ₖ` with real `f`.
    pub fn skew_hermitian_check(&self) -> bool {
        self.comps.keys().all(|k| (k.i as u32) % 2 == (k.k + 1) % 2)
    }

    /// `min (t·σ + eps − k)` over components; `None` for zero.
    pub fn sigma_order(&self, sigma: &Rational) -> Option<Rational> {
        self.comps
            .keys()
            .map(|k| sigma * int(k.t as i64) + int(k.eps as i64) - int(k.k as i64))
            .min()
    }

    /// Components of σ-order exactly `order`.
    pub fn sigma_part(&self, sigma: &Rational, order: &Rational) -> Self {
        self.filter(|k| &(sigma * int(k.t as i64) + int(k.eps as i64) - int(k.k as i64)) == order)
    }

    fn filter(&self, keep: impl Fn(&Key) -> bool) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }

    /// Components of time degree exactly `d`.
    pub fn t_part(&self, d: u32) -> Self {
        self.filter(|k| k.t == d)
    }

    /// Drops components of time degree above `max`.
    pub fn truncate_t(&self, max: u32) -> Self {
        self.filter(|k| k.t <= max)
    }

    pub fn t_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.comps.keys().map(|k| k.t).collect();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<ComponentJson> = self
            .comps
            .iter()
            .map(|(key, p)| ComponentJson {
                k: key.k,
                scalar: ScalarJson {
                    q: "1".into(),
                    i: key.i as u32,
                    t: key.t,
                    eps: key.eps,
                },
                poly: p.to_json(),
            })
            .collect();
        serde_json::to_value(items).expect("fterm serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let items: Vec<ComponentJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Format(e.to_string()))?;
        let mut out = Self::zero();
        for c in items {
            if c.scalar.i > 3 {
                return Err(Error::Format(format!("i exponent {} not in 0..4", c.scalar.i)));
            }
            let s = ScaledScalar::new(parse_rational(&c.scalar.q)?, c.scalar.i, c.scalar.t, c.scalar.eps);
            let p = DiffPoly::from_json(&c.poly)?;
            out.add_assign(&Self::ang_scaled(&s, p, c.k));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    q: String,
    i: u32,
    t: u32,
    eps: i32,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    k: u32,
    scalar: ScalarJson,
    poly: serde_json::Value,
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: u32) -> String {
    n.to_string()
        .chars()
        .map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Rendering in bracket notation, e.g. `−2⟨DV⟩₁` or `⟨−½ f D³g − Df D²g⟩₀ + ⟨2 f Dg − Df g⟩₂`.
/// A single-term coefficient is pulled in front of the bracket.
impl fmt::Display for FTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (key, p)) in self.comps.iter().enumerate() {
            let sym = grade_symbols(key.grade());
            let single = (p.len() == 1).then(|| p.terms().next().unwrap());
            let (neg, mag, body) = match single {
                Some((m, c)) => {
                    let inner = DiffPoly::term(Rational::one(), m.clone());
                    (c.is_negative(), c.abs(), inner.to_string())
                }
                None => (false, Rational::one(), p.to_string()),
            };
            match (idx, neg) {
                (0, true) => f.write_str("−")?,
                (0, false) => {}
                (_, true) => f.write_str(" − ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                f.write_str(&pretty_magnitude(&mag))?;
                if !sym.is_empty() {
                    f.write_str(" ")?;
                }
            }
            write!(f, "{sym}⟨{body}⟩{}", subscript(key.k))?;
        }
        Ok(())
    }
}

/// Checks the two reconstruction identities behind the equality of the free
/// Lie algebra with 𝔉, for heights `2n` and `2n−1`:
///
/// `⟨Dx⟩ₕ = (1/λ₀) [dʰ⁺¹, ⟨x⟩₀] − Σ_{s≥1} (λₛ/λ₀) ⟨D²ˢ⁺¹x⟩_{h−2s}`, with
/// `λₛ = λ_{s,0}^{h+1,0}`. Both brackets must also match the product difference.
pub fn fla_reconstruct_check(x: &DiffPoly, n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("reconstruction needs n >= 1".into()));
    }
    let ax = FTerm::component(0, Grade::ONE, x.clone());
    for h in [2 * n, 2 * n - 1] {
        let d = FTerm::component(h + 1, Grade::ONE, DiffPoly::one());
        let bracket = d.commutator(&ax);
        if bracket != d.assoc_mul(&ax).sub(&ax.assoc_mul(&d)) {
            return Ok(false);
        }
        let l0 = lambda_coeff(h + 1, 0, 0, 0)?;
        let mut rhs = bracket.scale(&l0.recip());
        for s in 1..=h / 2 {
            let ls = lambda_coeff(h + 1, 0, s, 0)?;
            let term = FTerm::component(h - 2 * s, Grade::ONE, x.derive_n(2 * s + 1));
            rhs = rhs.sub(&term.scale(&(ls / &l0)));
        }
        if rhs != FTerm::component(h, Grade::ONE, x.derive()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest height accepted by [`parse_ang_spec`].
pub const SPEC_MAX_HEIGHT: u32 = 12;

/// Parses `"f:k"` into `⟨f⟩ₖ`; the symbol `1` stands for the ring unit.
pub fn parse_ang_spec(text: &str) -> Result<FTerm> {
    let (sym, height) = text
        .rsplit_once(':')
        .ok_or_else(|| Error::Format(format!("expected sym:k, got {text:?}")))?;
    let k: u32 = height
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad height in {text:?}")))?;
    if k > SPEC_MAX_HEIGHT {
        return Err(Error::Range(format!("height {k} exceeds {SPEC_MAX_HEIGHT}")));
    }
    let f = match sym.trim() {
        "1" => DiffPoly::one(),
        name => DiffPoly::var(&Symbol::new(name).map_err(|e| Error::Format(e.to_string()))?),
    };
    FTerm::ang(f, k as i64)
}
