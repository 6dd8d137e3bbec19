//! Fourier pseudospectral backend on the periodic interval `[−1, 1)`.
//!
//! `⟨f⟩ₖ` is discretised as `½(D_f Kᵏ + Kᵏ D_f)` where `K` is spectral
//! differentiation and `D_f` is pointwise multiplication by samples of `f`.

mod dense;
mod dump;
mod lanczos;
mod matrix_example;
mod stepper;
mod study;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::falgebra::FTerm;
use crate::symfunc::{expr_derivative, ClosedExpr, Symbol};
use crate::{Error, Result};

pub use dense::{dense_assemble, dense_expm, DENSE_LIMIT};
pub use dump::{read_state_dump, write_state_dump, DUMP_MAGIC};
pub use lanczos::lanczos_expmv;
pub use matrix_example::{matrix_example_verify, BlockMatrixExample, MatrixReport, RMat};
pub use stepper::{step_strang, step_zassenhaus, LanczosPolicy, StrangStepper, ZassenhausStepper};
pub use study::{
    convergence_study, observed_orders, reference_solution, run_scheme, write_csv, ErrorRow, Scheme,
    SolveConfig,
};

/// Uniform periodic grid `xⱼ = −1 + 2j/M`.
#[derive(Clone)]
pub struct Grid {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 4 || !m.is_power_of_two() {
            return Err(Error::Domain(format!("grid size must be a power of two >= 4, got {m}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|j| -1.0 + 2.0 * j as f64 / self.m as f64).collect()
    }

    /// Fourier mode of FFT bin `j`, in `−M/2 .. M/2−1`.
    pub fn mode(&self, j: usize) -> i64 {
        let h = self.m / 2;
        if j < h {
            j as i64
        } else {
            j as i64 - self.m as i64
        }
    }

    /// Samples of `e` at the nodes; rejects non-finite values.
    pub fn sample(&self, e: &ClosedExpr) -> Result<Vec<f64>> {
        let out: Vec<f64> = self.nodes().into_iter().map(|x| e.eval(x)).collect();
        if let Some(j) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("'{e}' is not finite at node {j}")));
        }
        Ok(out)
    }

    /// Multiplies FFT bin `j` of `u` by `mult[j]`, in place.
    pub fn fourier_multiply(&self, u: &mut [Complex64], mult: &[Complex64]) {
        self.fwd.process(u);
        let scale = 1.0 / self.m as f64;
        for (x, c) in u.iter_mut().zip(mult) {
            *x *= c * scale;
        }
        self.inv.process(u);
    }

    /// Symbol of `Kᵏ` per FFT bin, Nyquist zeroed for odd `k`.
    pub fn diff_symbol(&self, k: u32) -> Vec<Complex64> {
        (0..self.m)
            .map(|j| {
                let m = self.mode(j);
                if k % 2 == 1 && j == self.m / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, std::f64::consts::PI * m as f64).powu(k)
                }
            })
            .collect()
    }

    /// First column of the circulant `Kᵏ`, with `c_{M−j} = (−1)ᵏ c_j` exact.
    pub fn diff_column(&self, k: u32) -> Vec<f64> {
        let mut c = self.diff_symbol(k);
        self.inv.process(&mut c);
        let mut c: Vec<f64> = c.iter().map(|z| z.re / self.m as f64).collect();
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        for j in 0..=self.m / 2 {
            let p = (self.m - j) % self.m;
            let v = 0.5 * (c[j] + sign * c[p]);
            c[j] = v;
            c[p] = sign * v;
        }
        c
    }

    fn check(&self, other: &Grid) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Shape(format!("grid size {} vs {}", self.m, other.m)));
        }
        Ok(())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid({})", self.m)
    }
}

/// Wavefunction samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    grid: Grid,
    data: Vec<Complex64>,
}

impl StateVector {
    pub fn new(grid: Grid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Shape(format!("{} samples on a grid of {}", data.len(), grid.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("state has non-finite entries".into()));
        }
        Ok(Self { grid, data })
    }

    pub fn from_expr(grid: &Grid, e: &ClosedExpr) -> Result<Self> {
        let data = grid.sample(e)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Ok(Self {
            grid: grid.clone(),
            data,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// `√(2/M Σ|uⱼ|²)`.
    pub fn norm(&self) -> f64 {
        weighted_norm(&self.data)
    }

    /// `2/M Σ conj(uⱼ) vⱼ`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.grid.check(&other.grid)?;
        let w = 2.0 / self.data.len() as f64;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum::<Complex64>() * w)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check(&other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.check(&other.grid)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn weighted_norm(u: &[Complex64]) -> f64 {
    (2.0 / u.len() as f64 * u.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// `Kᵏ u` via the FFT.
pub fn diff_apply(u: &StateVector, k: u32) -> StateVector {
    let mut data = u.data.clone();
    if k > 0 {
        u.grid.fourier_multiply(&mut data, &u.grid.diff_symbol(k));
    }
    StateVector {
        grid: u.grid.clone(),
        data,
    }
}

/// `scalar · ½(D_f Kᵏ + Kᵏ D_f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteAngOp {
    pub k: u32,
    pub f: Vec<f64>,
    pub scalar: Complex64,
}

impl DiscreteAngOp {
    pub fn new(k: u32, f: Vec<f64>, scalar: Complex64) -> Self {
        Self { k, f, scalar }
    }

    fn apply_into(&self, grid: &Grid, u: &[Complex64], out: &mut [Complex64]) {
        if self.k == 0 {
            for ((o, x), f) in out.iter_mut().zip(u).zip(&self.f) {
                *o += self.scalar * f * x;
            }
            return;
        }
        let sym = grid.diff_symbol(self.k);
        let mut ku = u.to_vec();
        grid.fourier_multiply(&mut ku, &sym);
        let mut kfu: Vec<Complex64> = u.iter().zip(&self.f).map(|(x, f)| x * f).collect();
        grid.fourier_multiply(&mut kfu, &sym);
        let half = self.scalar * 0.5;
        for j in 0..u.len() {
            out[j] += half * (self.f[j] * ku[j] + kfu[j]);
        }
    }
}

/// Applies one discretised `⟨f⟩ₖ` term.
pub fn ang_apply(op: &DiscreteAngOp, u: &StateVector) -> Result<StateVector> {
    if op.f.len() != u.grid.len() {
        return Err(Error::Shape(format!(
            "operator sampled on {} nodes, state has {}",
            op.f.len(),
            u.grid.len()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); u.data.len()];
    op.apply_into(&u.grid, &u.data, &mut out);
    Ok(StateVector {
        grid: u.grid.clone(),
        data: out,
    })
}

/// A finite sum of discretised terms on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    grid: Grid,
    ops: Vec<DiscreteAngOp>,
}

impl OperatorSum {
    pub fn new(grid: &Grid, ops: Vec<DiscreteAngOp>) -> Result<Self> {
        if let Some(op) = ops.iter().find(|op| op.f.len() != grid.len()) {
            return Err(Error::Shape(format!("operator sampled on {} nodes", op.f.len())));
        }
        Ok(Self {
            grid: grid.clone(),
            ops,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ops(&self) -> &[DiscreteAngOp] {
        &self.ops
    }

    pub fn is_zero(&self) -> bool {
        self.ops.iter().all(|op| op.scalar == Complex64::new(0.0, 0.0) || op.f.iter().all(|v| *v == 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let ops = self
            .ops
            .iter()
            .map(|op| DiscreteAngOp::new(op.k, op.f.clone(), op.scalar * c))
            .collect();
        Self {
            grid: self.grid.clone(),
            ops,
        }
    }

    pub(crate) fn apply_slice(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
        for op in &self.ops {
            op.apply_into(&self.grid, u, &mut out);
        }
        out
    }

    pub fn apply(&self, u: &StateVector) -> Result<StateVector> {
        self.grid.check(&u.grid)?;
        Ok(StateVector {
            grid: u.grid.clone(),
            data: self.apply_slice(&u.data),
        })
    }

    /// `|⟨Wu,v⟩ + ⟨u,Wv⟩|` relative to `‖W‖`-scale, on two fixed probe vectors.
    pub fn adjoint_defect(&self) -> f64 {
        let m = self.grid.len();
        let u: Vec<Complex64> = (0..m)
            .map(|j| Complex64::new((0.7 * j as f64).sin() + 0.3, (1.3 * j as f64).cos()))
            .collect();
        let v: Vec<Complex64> = (0..m)
            .map(|j| Complex64::new((2.1 * j as f64).cos(), (0.4 * j as f64).sin() - 0.2))
            .collect();
        let wu = self.apply_slice(&u);
        let wv = self.apply_slice(&v);
        let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        let scale = (dot(&wu, &wu).re.sqrt() * dot(&v, &v).re.sqrt()).max(f64::MIN_POSITIVE);
        (dot(&wu, &v) + dot(&u, &wv)).norm() / scale
    }
}

/// Concrete functions for the symbols of an `FTerm`.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    map: BTreeMap<Symbol, ClosedExpr>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn potential(v: ClosedExpr) -> Self {
        let mut b = Self::new();
        b.bind(Symbol::new("V").expect("valid symbol"), v);
        b
    }

    pub fn bind(&mut self, sym: Symbol, e: ClosedExpr) {
        self.map.insert(sym, e);
    }

    pub fn get(&self, sym: &Symbol) -> Option<&ClosedExpr> {
        self.map.get(sym)
    }
}

/// Discretises `w` with concrete `t` and `ε`, sampling every `Dʲ` of a bound symbol.
pub fn discretize(w: &FTerm, grid: &Grid, bindings: &Bindings, t: f64, eps: f64) -> Result<OperatorSum> {
    let mut cache: BTreeMap<(Symbol, u32), Vec<f64>> = BTreeMap::new();
    for (_, _, p) in w.components() {
        for (s, d) in p.derivative_orders() {
            if cache.contains_key(&(s.clone(), d)) {
                continue;
            }
            let e = bindings
                .get(&s)
                .ok_or_else(|| Error::Config(format!("no function bound to symbol {s}")))?;
            let samples = grid.sample(&expr_derivative(e, d))?;
            cache.insert((s, d), samples);
        }
    }
    let mut ops = Vec::new();
    for (k, g, p) in w.components() {
        let f = p.eval_samples(grid.len(), |s, d| cache.get(&(s.clone(), d)).map(Vec::as_slice))?;
        let mut scalar = Complex64::new(t.powi(g.t as i32) * eps.powi(g.eps), 0.0);
        if g.i == 1 {
            scalar *= Complex64::i();
        }
        ops.push(DiscreteAngOp::new(k, f, scalar));
    }
    OperatorSum::new(grid, ops)
}
