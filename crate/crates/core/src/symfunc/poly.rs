use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coefficients::{binomial_q, format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Name of a generator of the differential ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// `"1"` is reserved for the ring unit; names must be identifiers.
    pub fn new(name: &str) -> Result<Self> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => {
                chars.all(|c| c.is_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Domain(format!("invalid symbol name {name:?}")));
        }
        Ok(Self(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `(Dᵈ s)ᵉ` inside a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub sym: Symbol,
    pub d: u32,
    pub e: u32,
}

/// Product of factors, sorted by symbol then derivative order, with each
/// `(symbol, order)` appearing once. The empty product is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn from_factors(factors: impl IntoIterator<Item = Factor>) -> Self {
        factors
            .into_iter()
            .filter(|f| f.e > 0)
            .fold(Self::unit(), |m, f| m.mul(&Self(vec![f])))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.e).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let ka = (&a[i].sym, a[i].d);
            let kb = (&b[j].sym, b[j].d);
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(Factor {
                        e: a[i].e + b[j].e,
                        ..a[i].clone()
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    /// Leibniz rule; each term is `(multiplicity, monomial)`.
    fn derive(&self) -> Vec<(u32, Monomial)> {
        let mut out = Vec::with_capacity(self.0.len());
        for (idx, f) in self.0.iter().enumerate() {
            let mut rest: Vec<Factor> = Vec::with_capacity(self.0.len() + 1);
            rest.extend(self.0.iter().take(idx).cloned());
            if f.e > 1 {
                rest.push(Factor { e: f.e - 1, ..f.clone() });
            }
            rest.extend(self.0.iter().skip(idx + 1).cloned());
            let bumped = Monomial(vec![Factor {
                sym: f.sym.clone(),
                d: f.d + 1,
                e: 1,
            }]);
            out.push((f.e, Monomial(rest).mul(&bumped)));
        }
        out
    }
}

/// Element of the free commutative differential ring over `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::unit())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The generator `s`.
    pub fn var(sym: &Symbol) -> Self {
        Self::deriv_var(sym, 0)
    }

    /// `Dᵈ s`.
    pub fn deriv_var(sym: &Symbol, d: u32) -> Self {
        Self::term(
            Rational::one(),
            Monomial(vec![Factor {
                sym: sym.clone(),
                d,
                e: 1,
            }]),
        )
    }

    /// Shorthand for tests and examples; panics on an invalid name.
    pub fn sym(name: &str) -> Self {
        Self::var(&Symbol::new(name).expect("valid symbol"))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Constant value if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .get(&Monomial::unit())
                .cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// The derivation `D`, extended from `D(Dᵈ s) = Dᵈ⁺¹ s` by Leibniz.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (mult, dm) in m.derive() {
                out.add_term(dm, c * Rational::from_integer(mult.into()));
            }
        }
        out
    }

    pub fn derive_n(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derive())
    }

    /// `[p, Dp, D²p, …, Dⁿp]`.
    pub fn derivatives(&self, n: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(self.clone());
        for j in 0..n as usize {
            let next = out[j].derive();
            out.push(next);
        }
        out
    }

    /// `Dᵏ(p·q)` by the binomial expansion `Σᵢ C(k,i) Dⁱp Dᵏ⁻ⁱq`.
    pub fn leibniz_power(p: &Self, q: &Self, k: u32) -> Self {
        let dp = p.derivatives(k);
        let dq = q.derivatives(k);
        let mut out = Self::zero();
        for i in 0..=k as usize {
            out.add_scaled(
                &binomial_q(k as i64, i as i64),
                &dp[i].mul(&dq[k as usize - i]),
            );
        }
        out
    }

    /// Highest derivative order of `sym` appearing, if any.
    pub fn max_order_of(&self, sym: &Symbol) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .filter(|f| &f.sym == sym)
            .map(|f| f.d)
            .max()
    }

    /// All `(symbol, derivative order)` pairs used.
    pub fn derivative_orders(&self) -> std::collections::BTreeSet<(Symbol, u32)> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .map(|f| (f.sym.clone(), f.d))
            .collect()
    }

    /// Evaluate pointwise, given samples of every `Dᵈ s` that occurs.
    pub fn eval_samples<'a, F>(&self, len: usize, mut lookup: F) -> Result<Vec<f64>>
    where
        F: FnMut(&Symbol, u32) -> Option<&'a [f64]>,
    {
        let mut out = vec![0.0; len];
        for (m, c) in &self.terms {
            let c = to_f64(c);
            let mut vals = vec![c; len];
            for f in &m.0 {
                let s = lookup(&f.sym, f.d).ok_or_else(|| {
                    Error::Config(format!("no samples bound for D^{}[{}]", f.d, f.sym))
                })?;
                if s.len() != len {
                    return Err(Error::Shape(format!(
                        "samples for D^{}[{}] have length {}, expected {len}",
                        f.d,
                        f.sym,
                        s.len()
                    )));
                }
                for (v, x) in vals.iter_mut().zip(s) {
                    *v *= x.powi(f.e as i32);
                }
            }
            for (o, v) in out.iter_mut().zip(vals) {
                *o += v;
            }
        }
        Ok(out)
    }

    /// Text form with derivatives as `D^i[f]`, e.g. `2*D^1[f]*g^2 - 1/2*h`.
    pub fn to_ascii(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_unit() {
                parts.push(format_rational(&mag));
            }
            for f in &m.0 {
                let base = if f.d == 0 {
                    f.sym.to_string()
                } else {
                    format!("D^{}[{}]", f.d, f.sym)
                };
                if f.e == 1 {
                    parts.push(base);
                } else {
                    parts.push(format!("{base}^{}", f.e));
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<PolyTermJson> = self
            .terms
            .iter()
            .map(|(m, c)| PolyTermJson {
                coeff: format_rational(c),
                factors: m
                    .0
                    .iter()
                    .map(|f| FactorJson {
                        sym: f.sym.to_string(),
                        d: f.d,
                        e: f.e,
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_value(terms).expect("poly serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let terms: Vec<PolyTermJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Format(e.to_string()))?;
        let mut out = Self::zero();
        for t in terms {
            let c = parse_rational(&t.coeff)?;
            let mut factors = Vec::with_capacity(t.factors.len());
            for f in t.factors {
                if f.e == 0 {
                    return Err(Error::Format("factor with zero exponent".into()));
                }
                factors.push(Factor {
                    sym: Symbol::new(&f.sym)?,
                    d: f.d,
                    e: f.e,
                });
            }
            out.add_term(Monomial::from_factors(factors), c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    sym: String,
    d: u32,
    e: u32,
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    coeff: String,
    factors: Vec<FactorJson>,
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

pub(crate) fn superscript(n: i64) -> String {
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for ch in n.unsigned_abs().to_string().chars() {
        s.push(SUPERSCRIPTS[ch.to_digit(10).unwrap() as usize]);
    }
    s
}

/// Magnitude in the compact notation: `½` for one half, `p/q` otherwise.
pub(crate) fn pretty_magnitude(q: &Rational) -> String {
    if *q == Rational::new(1.into(), 2.into()) {
        "½".into()
    } else {
        format_rational(q)
    }
}

fn pretty_monomial(m: &Monomial) -> String {
    m.0.iter()
        .map(|f| {
            let mut s = match f.d {
                0 => f.sym.to_string(),
                1 => format!("D{}", f.sym),
                d => format!("D{}{}", superscript(d as i64), f.sym),
            };
            if f.e > 1 {
                if f.d > 0 {
                    s = format!("({s})");
                }
                s.push_str(&superscript(f.e as i64));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Compact notation, e.g. `2 f Dg − Df g` or `−½ f D³g`.
impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("−")?,
                (0, false) => {}
                (_, true) => f.write_str(" − ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let body = pretty_monomial(m);
            if m.is_unit() {
                f.write_str(&pretty_magnitude(&mag))?;
            } else if mag.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{} {}", pretty_magnitude(&mag), body)?;
            }
        }
        Ok(())
    }
}
