//! `∂u/∂t = Σ_β a_β(x) D^β u`, `u(0, x) = φ(x)` as the ODE `u' = Au` on `A_ρ`.

use crate::analytic_space::AnalyticFunction;
use crate::cauchy_solver::{build_solution, SeriesSolution};
use crate::error::{Error, Result};
use crate::operators::{DifferentialOperator, LinearOperator};
use crate::padic_arith::{LogNorm, PadicNumber};
use crate::spaces::Disk;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeProblem {
    pub operator: DifferentialOperator,
    pub initial: AnalyticFunction,
    pub time_depth: usize,
}

impl PdeProblem {
    pub fn new(
        operator: DifferentialOperator,
        initial: AnalyticFunction,
        time_depth: usize,
    ) -> Result<Self> {
        if initial.space() != operator.space() {
            return Err(Error::SpaceMismatch(
                "initial data and coefficients live in different A_rho".into(),
            ));
        }
        Ok(PdeProblem {
            operator,
            initial,
            time_depth,
        })
    }
}

/// `u(t, x) = Σ_k u_k(x) t^k`.
#[derive(Clone, Debug)]
pub struct PdeSolution {
    series: SeriesSolution<DifferentialOperator>,
    disk: Disk,
}

impl PdeSolution {
    pub fn time_coefficients(&self) -> &[AnalyticFunction] {
        self.series.coefficients()
    }

    /// `|t| < p^{-1/(p-1)} / max_β ρ^{-|β|} ‖a_β‖_ρ`.
    pub fn disk(&self) -> &Disk {
        &self.disk
    }

    pub fn series(&self) -> &SeriesSolution<DifferentialOperator> {
        &self.series
    }

    /// `deg φ + k · max_β deg a_β`, the degree `u_k` cannot exceed.
    pub fn degree_bound(&self, k: usize) -> Option<u32> {
        let phi = self.series.initial().degree()?;
        Some(phi + k as u32 * self.series.operator().max_coefficient_degree())
    }
}

pub fn convergence_disk(op: &DifferentialOperator) -> Disk {
    Disk::open(LogNorm::exp_radius(op.prime()).div(&op.operator_norm_bound()))
}

pub fn solve_pde(prob: &PdeProblem) -> Result<PdeSolution> {
    let series = build_solution(&prob.operator, &prob.initial, prob.time_depth)?;
    Ok(PdeSolution {
        series,
        disk: convergence_disk(&prob.operator),
    })
}

/// `Σ_{k ≤ K} u_k t^k` with the truncation error folded into the
/// function's discarded-mass bound.
pub fn evaluate_in_time(sol: &PdeSolution, t: &PadicNumber) -> Result<AnalyticFunction> {
    if !sol.disk.contains(t) {
        return Err(Error::OutsideDisk {
            norm: t.norm().exponent_string(),
            radius: sol.disk.radius.exponent_string(),
        });
    }
    Ok(sol.series.evaluate(t)?.value)
}
