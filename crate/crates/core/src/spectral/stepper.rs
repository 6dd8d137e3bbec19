use num_complex::Complex64;

use super::{discretize, lanczos_expmv, Bindings, Grid, OperatorSum, StateVector};
use crate::splitting::{lanczos_iterations, Splitting};
use crate::symfunc::ClosedExpr;
use crate::{Error, Result};

fn check_positive(eps: f64, dt: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    Ok(())
}

/// `exp(½iΔtεK²) exp(−iΔtε⁻¹D_V) exp(½iΔtεK²)`.
#[derive(Debug, Clone)]
pub struct StrangStepper {
    grid: Grid,
    half_kinetic: Vec<Complex64>,
    potential: Vec<Complex64>,
}

impl StrangStepper {
    pub fn new(grid: &Grid, v: &ClosedExpr, eps: f64, dt: f64) -> Result<Self> {
        check_positive(eps, dt)?;
        let samples = grid.sample(v)?;
        let half_kinetic = grid
            .diff_symbol(2)
            .into_iter()
            .map(|s| (Complex64::new(0.0, 0.5 * dt * eps) * s).exp())
            .collect();
        let potential = samples
            .iter()
            .map(|v| Complex64::new(0.0, -dt * v / eps).exp())
            .collect();
        Ok(Self {
            grid: grid.clone(),
            half_kinetic,
            potential,
        })
    }

    pub fn step(&self, u: &StateVector) -> Result<StateVector> {
        if u.grid() != &self.grid {
            return Err(Error::Shape("state is on a different grid".into()));
        }
        let mut d = u.data().to_vec();
        self.grid.fourier_multiply(&mut d, &self.half_kinetic);
        for (x, p) in d.iter_mut().zip(&self.potential) {
            *x *= p;
        }
        self.grid.fourier_multiply(&mut d, &self.half_kinetic);
        StateVector::new(self.grid.clone(), d)
    }
}

/// One Strang step.
pub fn step_strang(u: &StateVector, v: &ClosedExpr, eps: f64, dt: f64) -> Result<StateVector> {
    StrangStepper::new(u.grid(), v, eps, dt)?.step(u)
}

/// How many Lanczos iterations each exponent `W^[k]`, `k ≥ 2`, receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanczosPolicy {
    /// `⌈((2n+3)σ−1)/((2k−1)σ−1)⌉`.
    OrderMatched,
    Fixed(usize),
}

#[derive(Debug, Clone)]
enum Factor {
    Fourier(Vec<Complex64>),
    Pointwise(Vec<Complex64>),
    Krylov(OperatorSum, usize),
    Identity,
}

/// `e^{½W⁰}⋯e^{½Wⁿ}e^{Wⁿ⁺¹}e^{½Wⁿ}⋯e^{½W⁰}` with concrete `t = Δt`.
#[derive(Debug, Clone)]
pub struct ZassenhausStepper {
    grid: Grid,
    factors: Vec<Factor>,
}

impl ZassenhausStepper {
    pub fn new(
        grid: &Grid,
        splitting: &Splitting,
        bindings: &Bindings,
        eps: f64,
        dt: f64,
        policy: LanczosPolicy,
    ) -> Result<Self> {
        check_positive(eps, dt)?;
        for sym in splitting.manifest().keys() {
            if bindings.get(sym).is_none() {
                return Err(Error::Config(format!("splitting needs symbol {sym}, which is not bound")));
            }
        }
        let last = splitting.exponents.len() - 1;
        let mut factors = Vec::with_capacity(splitting.exponents.len());
        for (k, w) in splitting.exponents.iter().enumerate() {
            let h = if k == last { 1.0 } else { 0.5 };
            let op = discretize(w, grid, bindings, dt, eps)?.scaled(Complex64::new(h, 0.0));
            let iters = match policy {
                LanczosPolicy::Fixed(n) => n.max(1),
                LanczosPolicy::OrderMatched if k >= 2 => lanczos_iterations(splitting.n, k as u32, &splitting.sigma)?,
                LanczosPolicy::OrderMatched => 1,
            };
            factors.push(classify(grid, op, iters));
        }
        Ok(Self {
            grid: grid.clone(),
            factors,
        })
    }

    fn apply(&self, f: &Factor, d: Vec<Complex64>) -> Result<Vec<Complex64>> {
        Ok(match f {
            Factor::Identity => d,
            Factor::Fourier(mult) => {
                let mut d = d;
                self.grid.fourier_multiply(&mut d, mult);
                d
            }
            Factor::Pointwise(p) => d.into_iter().zip(p).map(|(x, p)| x * p).collect(),
            Factor::Krylov(op, iters) => {
                let u = StateVector::new(self.grid.clone(), d)?;
                lanczos_expmv(op, &u, *iters)?.into_data()
            }
        })
    }

    pub fn step(&self, u: &StateVector) -> Result<StateVector> {
        if u.grid() != &self.grid {
            return Err(Error::Shape("state is on a different grid".into()));
        }
        let mut d = u.data().to_vec();
        for f in &self.factors {
            d = self.apply(f, d)?;
        }
        for f in self.factors.iter().rev().skip(1) {
            d = self.apply(f, d)?;
        }
        StateVector::new(self.grid.clone(), d)
    }
}

fn classify(grid: &Grid, op: OperatorSum, iters: usize) -> Factor {
    if op.is_zero() {
        return Factor::Identity;
    }
    let ops = op.ops();
    if ops.iter().all(|o| o.k == 0) {
        let mut s = vec![Complex64::new(0.0, 0.0); grid.len()];
        for o in ops {
            for (x, f) in s.iter_mut().zip(&o.f) {
                *x += o.scalar * f;
            }
        }
        return Factor::Pointwise(s.into_iter().map(|z| z.exp()).collect());
    }
    if ops.iter().all(|o| o.f.iter().all(|v| *v == o.f[0])) {
        let mut s = vec![Complex64::new(0.0, 0.0); grid.len()];
        for o in ops {
            for (x, d) in s.iter_mut().zip(grid.diff_symbol(o.k)) {
                *x += o.scalar * o.f[0] * d;
            }
        }
        return Factor::Fourier(s.into_iter().map(|z| z.exp()).collect());
    }
    Factor::Krylov(op, iters)
}

/// One step of a Zassenhaus splitting whose potential symbol `V` is bound to `v`.
pub fn step_zassenhaus(
    u: &StateVector,
    splitting: &Splitting,
    v: &ClosedExpr,
    eps: f64,
    dt: f64,
) -> Result<StateVector> {
    ZassenhausStepper::new(u.grid(), splitting, &Bindings::potential(v.clone()), eps, dt, LanczosPolicy::OrderMatched)?
        .step(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::int;
    use crate::splitting::{kinetic_exponent, potential_exponent, zassenhaus};
    use crate::symfunc::{parse_expr, Symbol};

    fn split(n: u32) -> Splitting {
        let v = Symbol::new("V").unwrap();
        zassenhaus(&kinetic_exponent(), &potential_exponent(&v), n, &int(1)).unwrap()
    }

    fn init(g: &Grid) -> StateVector {
        StateVector::from_expr(g, &parse_expr("exp(-50*x^2)").unwrap()).unwrap()
    }

    #[test]
    fn strang_basics() {
        let g = Grid::new(64).unwrap();
        let v = parse_expr("cos(pi*x)").unwrap();
        let u = init(&g);
        let tiny = step_strang(&u, &v, 1.0 / 16.0, 1e-10).unwrap();
        assert!(tiny.max_abs_diff(&u).unwrap() < 1e-8);
        let s = step_strang(&u, &v, 1.0 / 16.0, 0.01).unwrap();
        assert!((s.norm() - u.norm()).abs() < 1e-12);
        assert!(step_strang(&u, &v, 0.0, 0.01).is_err());
    }

    #[test]
    fn zassenhaus_n0_is_strang() {
        let g = Grid::new(64).unwrap();
        let v = parse_expr("cos(pi*x)").unwrap();
        let u = init(&g);
        let a = step_zassenhaus(&u, &split(0), &v, 0.0625, 0.02).unwrap();
        let b = step_strang(&u, &v, 0.0625, 0.02).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
    }

    #[test]
    fn zassenhaus_unitary_over_many_steps() {
        let g = Grid::new(64).unwrap();
        let b = Bindings::potential(parse_expr("cos(pi*x)").unwrap());
        let st = ZassenhausStepper::new(&g, &split(1), &b, 0.0625, 0.01, LanczosPolicy::Fixed(8)).unwrap();
        let mut u = init(&g);
        let n0 = u.norm();
        for _ in 0..100 {
            let next = st.step(&u).unwrap();
            assert!((next.norm() - u.norm()).abs() < 1e-12);
            u = next;
        }
        assert!((u.norm() - n0).abs() < 1e-11);
    }

    #[test]
    fn manifest_mismatch() {
        let g = Grid::new(16).unwrap();
        let mut b = Bindings::new();
        b.bind(Symbol::new("W").unwrap(), parse_expr("x").unwrap());
        let r = ZassenhausStepper::new(&g, &split(1), &b, 1.0, 0.1, LanczosPolicy::OrderMatched);
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
