use std::fmt;
use std::io::Write;
use std::time::Instant;

use nalgebra::DVector;
use serde::Serialize;

use super::{
    dense_assemble, dense_expm, discretize, weighted_norm, Bindings, Grid, LanczosPolicy, StateVector,
    StrangStepper, ZassenhausStepper, DENSE_LIMIT,
};
use crate::coefficients::Rational;
use crate::splitting::{kinetic_exponent, potential_exponent, zassenhaus};
use crate::symfunc::{ClosedExpr, Symbol};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Strang,
    Zassenhaus { n: u32, sigma: Rational },
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Strang => write!(f, "strang"),
            Scheme::Zassenhaus { n, .. } => write!(f, "zassenhaus-n{n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub m: usize,
    pub eps: f64,
    pub dt: f64,
    pub steps: usize,
    pub potential: ClosedExpr,
    pub initial: ClosedExpr,
    pub scheme: Scheme,
    pub lanczos: LanczosPolicy,
}

/// One line of the error table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub eps: f64,
    pub dt: f64,
    pub steps: usize,
    pub scheme: String,
    /// Against the dense oracle; `NaN` when the grid is too large for it.
    pub error_l2: f64,
    /// Largest `|‖uₙ‖ − ‖u₀‖|` over the run.
    pub norm_drift: f64,
    pub wall_ms: f64,
}

/// `exp(T(iεK² − iε⁻¹D_V)) u₀` from the dense oracle.
pub fn reference_solution(u0: &StateVector, potential: &ClosedExpr, eps: f64, t_final: f64) -> Result<StateVector> {
    let grid = u0.grid();
    let v = Symbol::new("V").expect("valid symbol");
    let h = kinetic_exponent().add(&potential_exponent(&v));
    let op = discretize(&h, grid, &Bindings::potential(potential.clone()), 1.0, eps)?;
    let e = dense_expm(&dense_assemble(&op)?, t_final)?;
    let out = e * DVector::from_column_slice(u0.data());
    StateVector::new(grid.clone(), out.iter().copied().collect())
}

enum Stepper {
    Strang(StrangStepper),
    Zassenhaus(Box<ZassenhausStepper>),
}

impl Stepper {
    fn step(&self, u: &StateVector) -> Result<StateVector> {
        match self {
            Stepper::Strang(s) => s.step(u),
            Stepper::Zassenhaus(s) => s.step(u),
        }
    }
}

fn build(cfg: &SolveConfig, grid: &Grid) -> Result<Stepper> {
    Ok(match &cfg.scheme {
        Scheme::Strang => Stepper::Strang(StrangStepper::new(grid, &cfg.potential, cfg.eps, cfg.dt)?),
        Scheme::Zassenhaus { n, sigma } => {
            let v = Symbol::new("V").expect("valid symbol");
            let split = zassenhaus(&kinetic_exponent(), &potential_exponent(&v), *n, sigma)?;
            let b = Bindings::potential(cfg.potential.clone());
            Stepper::Zassenhaus(Box::new(ZassenhausStepper::new(grid, &split, &b, cfg.eps, cfg.dt, cfg.lanczos)?))
        }
    })
}

fn integrate(cfg: &SolveConfig, reference: Option<&StateVector>) -> Result<(ErrorRow, StateVector)> {
    let grid = Grid::new(cfg.m)?;
    let u0 = StateVector::from_expr(&grid, &cfg.initial)?;
    let stepper = build(cfg, &grid)?;
    let n0 = u0.norm();
    let start = Instant::now();
    let mut u = u0.clone();
    let mut drift: f64 = 0.0;
    for _ in 0..cfg.steps {
        u = stepper.step(&u)?;
        drift = drift.max((u.norm() - n0).abs());
    }
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let owned;
    let reference = match reference {
        Some(r) => Some(r),
        None if cfg.m <= DENSE_LIMIT => {
            owned = reference_solution(&u0, &cfg.potential, cfg.eps, cfg.dt * cfg.steps as f64)?;
            Some(&owned)
        }
        None => None,
    };
    let error_l2 = match reference {
        Some(r) => weighted_norm(u.sub(r)?.data()),
        None => f64::NAN,
    };
    let row = ErrorRow {
        m: cfg.m,
        eps: cfg.eps,
        dt: cfg.dt,
        steps: cfg.steps,
        scheme: cfg.scheme.to_string(),
        error_l2,
        norm_drift: drift,
        wall_ms,
    };
    Ok((row, u))
}

/// Runs one integration and measures it against the dense oracle when `M ≤ 512`.
pub fn run_scheme(cfg: &SolveConfig) -> Result<(ErrorRow, StateVector)> {
    integrate(cfg, None)
}

/// Runs `cfg` once per time step in `dts` up to `t_final`, sharing one oracle.
pub fn convergence_study(cfg: &SolveConfig, dts: &[f64], t_final: f64) -> Result<Vec<ErrorRow>> {
    let grid = Grid::new(cfg.m)?;
    let u0 = StateVector::from_expr(&grid, &cfg.initial)?;
    let reference = reference_solution(&u0, &cfg.potential, cfg.eps, t_final)?;
    let configs = dts
        .iter()
        .map(|&dt| {
            let steps = (t_final / dt).round();
            if steps < 1.0 || (steps * dt - t_final).abs() > 1e-12 * t_final.max(1.0) {
                return Err(Error::Domain(format!("dt={dt} does not divide T={t_final}")));
            }
            Ok(SolveConfig {
                dt,
                steps: steps as usize,
                ..cfg.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(|| integrate(c, Some(&reference)).map(|(row, _)| row)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// `log(eᵢ/eᵢ₊₁)/log(dtᵢ/dtᵢ₊₁)` for consecutive rows.
pub fn observed_orders(rows: &[ErrorRow]) -> Vec<f64> {
    rows.windows(2)
        .map(|w| (w[0].error_l2 / w[1].error_l2).ln() / (w[0].dt / w[1].dt).ln())
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[ErrorRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::int;
    use crate::symfunc::parse_expr;

    fn cfg(scheme: Scheme, m: usize) -> SolveConfig {
        SolveConfig {
            m,
            eps: 1.0 / 16.0,
            dt: 0.01,
            steps: 10,
            potential: parse_expr("cos(pi*x)").unwrap(),
            initial: parse_expr("exp(-50*x^2)").unwrap(),
            scheme,
            lanczos: LanczosPolicy::Fixed(12),
        }
    }

    #[test]
    fn csv_layout() {
        let (row, _) = run_scheme(&cfg(Scheme::Strang, 32)).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("M,eps,dt,steps,scheme,error_l2,norm_drift,wall_ms\n32,0.0625,0.01,10,strang,"));
    }

    #[test]
    fn small_study_orders() {
        let z = Scheme::Zassenhaus { n: 1, sigma: int(1) };
        for (scheme, want) in [(Scheme::Strang, 1.9), (z, 3.8)] {
            let rows = convergence_study(&cfg(scheme, 64), &[1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0], 0.25).unwrap();
            let orders = observed_orders(&rows);
            assert!(orders.iter().all(|o| *o > want), "{orders:?}");
            assert!(rows.iter().all(|r| r.norm_drift < 1e-10));
        }
        assert!(convergence_study(&cfg(Scheme::Strang, 32), &[0.3], 1.0).is_err());
    }
}
