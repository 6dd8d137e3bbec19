//! Reference tables of π and λ.
//!
//! Each row string holds the coefficients for one `n`, ordered by `i`.

use super::{parse_rational, Rational};

#[derive(Debug, Clone, Copy)]
pub struct TableBlock {
    pub k: u32,
    pub l: u32,
    pub rows: &'static [&'static str],
}

impl TableBlock {
    /// `(n, i, value)` triples of the block.
    pub fn cells(&self) -> Vec<(u32, u32, Rational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| {
                row.split_whitespace().enumerate().map(move |(i, v)| {
                    (n as u32, i as u32, parse_rational(v).expect("fixture cell"))
                })
            })
            .collect()
    }
}

/// `π_{n,i}^{k,l}` for `1 ≤ k+l ≤ 4`, `k ≥ l`.
pub const TABLE_PI: &[TableBlock] = &[
    TableBlock { k: 1, l: 0, rows: &["1", "1/2 0"] },
    TableBlock { k: 2, l: 0, rows: &["1", "1 0", "0 -1/2 0"] },
    TableBlock { k: 1, l: 1, rows: &["1", "1/2 -1/2", "-1/4 -3/4 -1/4"] },
    TableBlock { k: 3, l: 0, rows: &["1", "3/2 0", "0 -3/2 0", "-1/4 -3/4 0 0"] },
    TableBlock { k: 2, l: 1, rows: &["1", "1 -1/2", "-1/2 2 -1/2", "-1/4 -1/2 0 0"] },
    TableBlock {
        k: 4,
        l: 0,
        rows: &["1", "2 0", "0 -3 0", "-1 -3 0 0", "0 1/2 3/2 1/2 0"],
    },
    TableBlock {
        k: 3,
        l: 1,
        rows: &["1", "3/2 -1/2", "-3/4 -15/4 -3/4", "-1 -9/4 0 0", "1/8 1 15/8 7/8 1/8"],
    },
    TableBlock {
        k: 2,
        l: 2,
        rows: &["1", "1 -1", "-1 -4 -1", "-1/2 -1 1 1/2", "1/4 5/4 9/4 5/4 1/4"],
    },
];

/// `λ_{n,i}^{k,l}` for `1 ≤ k+l ≤ 6`, `k ≥ l`.
pub const TABLE_LAMBDA: &[TableBlock] = &[
    TableBlock { k: 1, l: 0, rows: &["1 0"] },
    TableBlock { k: 2, l: 0, rows: &["2 0"] },
    TableBlock { k: 1, l: 1, rows: &["1 -1"] },
    TableBlock { k: 3, l: 0, rows: &["3 0", "-1/2 -3/2 0 0"] },
    TableBlock { k: 2, l: 1, rows: &["2 -1", "-1/2 -1 0 0"] },
    TableBlock { k: 4, l: 0, rows: &["4 0", "-2 6 0 0"] },
    TableBlock { k: 3, l: 1, rows: &["3 -1", "-2 -9/2 0 0"] },
    TableBlock { k: 2, l: 2, rows: &["2 -2", "-1 -2 2 1"] },
    TableBlock { k: 5, l: 0, rows: &["5 0", "-5 -15 0 0", "1 5 15/2 5/2 0 0"] },
    TableBlock { k: 4, l: 1, rows: &["4 -1", "-5 -12 0 0", "1 9/2 6 2 0 0"] },
    TableBlock { k: 3, l: 2, rows: &["3 -2", "-7/2 -15/2 3 3/2", "3/4 3 7/2 0 -1 -1/4"] },
    TableBlock { k: 6, l: 0, rows: &["6 0", "-10 -30 0 0", "6 30 45 15 0 0"] },
    TableBlock { k: 5, l: 1, rows: &["5 -1", "-10 -25 0 0", "6 55/2 75/2 25/2 0 0"] },
    TableBlock { k: 4, l: 2, rows: &["4 -2", "-8 -18 4 2", "5 21 26 4 -4 -1"] },
    TableBlock {
        k: 3,
        l: 3,
        rows: &["3 -3", "-5 -21/2 21/2 5", "3 12 21/2 -21/2 -12 -3"],
    },
];

/// A reference cell that disagrees with every method of computing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub table: &'static str,
    pub k: u32,
    pub l: u32,
    pub n: u32,
    pub i: u32,
    pub printed: &'static str,
    pub corrected: &'static str,
}

/// Sign misprints. The λ cell contradicts the π table it is doubled from;
/// the π cell is fixed by solving the product expansion directly.
pub const ERRATA: &[Erratum] = &[
    Erratum { table: "pi", k: 2, l: 1, n: 2, i: 1, printed: "2", corrected: "-2" },
    Erratum { table: "lambda", k: 4, l: 0, n: 1, i: 1, printed: "6", corrected: "-6" },
];

pub fn erratum(table: &str, k: u32, l: u32, n: u32, i: u32) -> Option<&'static Erratum> {
    ERRATA
        .iter()
        .find(|e| e.table == table && (e.k, e.l, e.n, e.i) == (k, l, n, i))
}
