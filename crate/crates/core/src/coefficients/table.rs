use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    format_rational, gamma_coeff, lambda_coeff, mu_coeff, parse_rational, pi_total, CoeffKey,
    Rational,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffKind {
    Pi,
    Lambda,
    Mu,
    Gamma,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::Pi => "pi",
            CoeffKind::Lambda => "lambda",
            CoeffKind::Mu => "mu",
            CoeffKind::Gamma => "gamma",
        }
    }

    /// Valid `(n, i)` pairs for a given `(k, l)`.
    fn indices(self, k: u32, l: u32) -> Vec<(u32, u32)> {
        match self {
            CoeffKind::Lambda => {
                if k + l == 0 {
                    return Vec::new();
                }
                (0..=(k + l - 1) / 2)
                    .flat_map(|n| (0..=2 * n + 1).map(move |i| (n, i)))
                    .collect()
            }
            _ => (0..=k + l)
                .flat_map(|n| (0..=n).map(move |i| (n, i)))
                .collect(),
        }
    }

    /// Whether `(k, l, n, i)` indexes a coefficient of this kind.
    pub fn admits(self, k: u32, l: u32, n: u32, i: u32) -> bool {
        let (k, l, n, i) = (k as u64, l as u64, n as u64, i as u64);
        match self {
            CoeffKind::Lambda => 2 * n < k + l && i <= 2 * n + 1,
            _ => i <= n && n <= k + l,
        }
    }

    pub fn value(self, k: u32, l: u32, n: u32, i: u32) -> Result<Rational> {
        match self {
            CoeffKind::Pi => {
                CoeffKey::new(k, l, n, i).validate()?;
                Ok(pi_total(k, l, n, i))
            }
            CoeffKind::Lambda => lambda_coeff(k, l, n, i),
            CoeffKind::Mu => mu_coeff(k, l, n, i),
            CoeffKind::Gamma => gamma_coeff(k, l, n, i),
        }
    }
}

impl FromStr for CoeffKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(CoeffKind::Pi),
            "lambda" => Ok(CoeffKind::Lambda),
            "mu" => Ok(CoeffKind::Mu),
            "gamma" => Ok(CoeffKind::Gamma),
            other => Err(Error::Domain(format!("unknown coefficient kind {other:?}"))),
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One JSON entry; the value is a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub k: u32,
    pub l: u32,
    pub n: u32,
    pub i: u32,
    pub value: String,
}

#[derive(Serialize, Deserialize)]
struct CoeffTableJson {
    kind: CoeffKind,
    entries: Vec<CoeffEntry>,
}

/// Values of one block, keyed by `n`.
type Rows<'a> = BTreeMap<u32, Vec<&'a Rational>>;

/// A materialised table of one coefficient family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub kind: CoeffKind,
    pub entries: BTreeMap<CoeffKey, Rational>,
}

impl CoeffTable {
    pub const MAX_ORDER: u32 = 12;

    /// All coefficients with `k + l ≤ kmax`.
    pub fn build(kind: CoeffKind, kmax: u32) -> Result<Self> {
        if kmax > Self::MAX_ORDER {
            return Err(Error::Domain(format!(
                "kmax {kmax} exceeds {}",
                Self::MAX_ORDER
            )));
        }
        let mut entries = BTreeMap::new();
        for q in 0..=kmax {
            for k in 0..=q {
                let l = q - k;
                for (n, i) in kind.indices(k, l) {
                    entries.insert(CoeffKey::new(k, l, n, i), kind.value(k, l, n, i)?);
                }
            }
        }
        Ok(Self { kind, entries })
    }

    pub fn get(&self, k: u32, l: u32, n: u32, i: u32) -> Option<&Rational> {
        self.entries.get(&CoeffKey::new(k, l, n, i))
    }

    pub fn to_json(&self) -> String {
        let doc = CoeffTableJson {
            kind: self.kind,
            entries: self
                .entries
                .iter()
                .map(|(key, v)| CoeffEntry {
                    k: key.k,
                    l: key.l,
                    n: key.n,
                    i: key.i,
                    value: format_rational(v),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("table serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CoeffTableJson =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for e in doc.entries {
            let key = CoeffKey::new(e.k, e.l, e.n, e.i);
            if !doc.kind.admits(e.k, e.l, e.n, e.i) {
                return Err(Error::Format(format!("{} has no entry {key:?}", doc.kind)));
            }
            if entries.insert(key, parse_rational(&e.value)?).is_some() {
                return Err(Error::Format(format!("duplicate entry {key:?}")));
            }
        }
        Ok(Self {
            kind: doc.kind,
            entries,
        })
    }

    /// Block layout: one block per `(k, l)`, one line per `n`, columns by `i`.
    /// Blocks run by `k + l`, then by decreasing `k`.
    pub fn render_text(&self) -> String {
        let mut blocks: BTreeMap<(u32, Reverse<u32>), Rows<'_>> = BTreeMap::new();
        for (key, v) in &self.entries {
            blocks
                .entry((key.k + key.l, Reverse(key.k)))
                .or_default()
                .entry(key.n)
                .or_default()
                .push(v);
        }
        let width = self
            .entries
            .values()
            .map(|v| format_rational(v).len())
            .max()
            .unwrap_or(1)
            .max(6);
        let max_i = self.entries.keys().map(|k| k.i).max().unwrap_or(0);
        let mut out = String::new();
        let _ = write!(out, "{:<8}{:>3}", "(k,l)", "n");
        for i in 0..=max_i {
            let _ = write!(out, "  {:>width$}", format!("i={i}"));
        }
        out.push('\n');
        for ((q, Reverse(k)), rows) in &blocks {
            let l = q - k;
            for (idx, (n, vals)) in rows.iter().enumerate() {
                let label = if idx == 0 {
                    format!("({k},{l})")
                } else {
                    String::new()
                };
                let _ = write!(out, "{label:<8}{n:>3}");
                for v in vals {
                    let _ = write!(out, "  {:>width$}", format_rational(v));
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kmax_zero_is_single_unit() {
        let t = CoeffTable::build(CoeffKind::Pi, 0).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get(0, 0, 0, 0), Some(&super::super::int(1)));
        assert!(CoeffTable::build(CoeffKind::Lambda, 0).unwrap().entries.is_empty());
    }

    #[test]
    fn kmax_bound_enforced() {
        assert!(matches!(
            CoeffTable::build(CoeffKind::Pi, 13),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn json_shape() {
        let t = CoeffTable::build(CoeffKind::Pi, 2).unwrap();
        let json = t.to_json();
        assert!(json.starts_with(r#"{"kind":"pi","entries":[{"k":0,"l":0,"n":0,"i":0,"value":"1"}"#));
        assert!(json.contains(r#"{"k":1,"l":1,"n":2,"i":1,"value":"-3/4"}"#));
        assert_eq!(CoeffTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn json_rejects_bad_entries() {
        let bad = r#"{"kind":"pi","entries":[{"k":0,"l":0,"n":1,"i":0,"value":"1"}]}"#;
        assert!(CoeffTable::from_json(bad).is_err());
        let bad = r#"{"kind":"pi","entries":[{"k":0,"l":0,"n":0,"i":0,"value":"1/0"}]}"#;
        assert!(CoeffTable::from_json(bad).is_err());
        assert!(CoeffTable::from_json("{").is_err());
    }

    #[test]
    fn admitted_indices_match_enumeration() {
        for kind in [CoeffKind::Pi, CoeffKind::Lambda, CoeffKind::Mu, CoeffKind::Gamma] {
            for k in 0..5 {
                for l in 0..5 {
                    let listed = kind.indices(k, l);
                    for n in 0..12 {
                        for i in 0..12 {
                            assert_eq!(kind.admits(k, l, n, i), listed.contains(&(n, i)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn text_layout_contains_rows() {
        let text = CoeffTable::build(CoeffKind::Pi, 2).unwrap().render_text();
        let row = text.lines().find(|l| l.starts_with("(1,1)")).unwrap();
        assert!(row.trim_end().ends_with('1'));
        assert!(text.contains("-1/4    -3/4    -1/4"));
    }
}
