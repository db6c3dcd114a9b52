//! Order verification and well-posedness proxies: a manufactured-solution
//! forcing that makes the exact semidiscrete solution known (isolating the
//! temporal error), dt- and grid-refinement ladders, and the
//! perturbed-initial-data divergence pair.

use crate::error::{Error, Result};
use crate::grid::{GridRef, SpectralField};
use crate::integrator::{run, Forcing, RunHooks, RunStatus, StepControl};
use crate::model::{rhs, FieldPair, ModelParams};

/// Discrete H¹ norm sqrt(∫ f² + f_x²).
pub fn h1_norm(f: &SpectralField) -> Result<f64> {
    let fx = f.derivative()?;
    let dx = f.grid().spacing();
    Ok((dx
        * f.values()
            .iter()
            .zip(fx.values().iter())
            .map(|(&v, &w)| v * v + w * w)
            .sum::<f64>())
    .sqrt())
}

fn l2_norm(f: &SpectralField) -> f64 {
    let dx = f.grid().spacing();
    (dx * f.values().iter().map(|&v| v * v).sum::<f64>()).sqrt()
}

/// Manufactured solution u*(x,t) = ρ*(x,t) = e^{-t} sech(x). The forcing
/// F(t) = ∂t(exact) - R_h(exact) is built from the discrete operator R_h,
/// so the exact fields solve the semidiscrete system exactly and the
/// remaining error is purely temporal.
pub struct ManufacturedSolution {
    params: ModelParams,
    grid: GridRef,
}

impl ManufacturedSolution {
    pub fn new(params: ModelParams, grid: GridRef) -> Self {
        ManufacturedSolution { params, grid }
    }

    pub fn exact(&self, t: f64) -> FieldPair {
        let amp = (-t).exp();
        FieldPair {
            u: SpectralField::from_fn(&self.grid, |x| amp / x.cosh()),
            rho: SpectralField::from_fn(&self.grid, |x| amp / x.cosh()),
            time: t,
        }
    }
}

impl Forcing for ManufacturedSolution {
    fn eval(&self, t: f64) -> Result<(SpectralField, SpectralField)> {
        let exact = self.exact(t);
        let (ru, rr) = rhs(&self.params, &exact)?;
        // d/dt of e^{-t} sech(x) is minus itself
        Ok((&(&exact.u * -1.0) - &ru, &(&exact.rho * -1.0) - &rr))
    }
}

/// One dt-refinement ladder: errors at t_end and observed orders between
/// consecutive levels.
#[derive(Debug, Clone)]
pub struct LadderResult {
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

fn fixed_dt_run(
    params: &ModelParams,
    init: FieldPair,
    dt: f64,
    t_end: f64,
    forcing: Option<&dyn Forcing>,
) -> Result<FieldPair> {
    let ctrl = StepControl {
        fixed_dt: Some(dt),
        ..StepControl::new(t_end)?
    };
    let outcome = run(
        params,
        init,
        &ctrl,
        RunHooks {
            forcing,
            ..Default::default()
        },
    )?;
    if outcome.status != RunStatus::Completed {
        return Err(Error::Config(format!(
            "fixed-dt run halted early ({}): {}; use a shorter horizon or smoother data",
            outcome.status.as_str(),
            outcome.halt_reason
        )));
    }
    Ok(outcome.final_state)
}

fn state_error(a: &FieldPair, b: &FieldPair) -> Result<f64> {
    let du = h1_norm(&(&a.u - &b.u))?;
    let dr = l2_norm(&(&a.rho - &b.rho));
    Ok((du * du + dr * dr).sqrt())
}

/// Temporal order of RK4 against the manufactured solution, over `levels`
/// successive halvings of dt0.
pub fn manufactured_temporal_ladder(
    params: &ModelParams,
    grid: &GridRef,
    t_end: f64,
    dt0: f64,
    levels: usize,
) -> Result<LadderResult> {
    let mms = ManufacturedSolution::new(params.clone(), grid.clone());
    let exact_end = mms.exact(t_end);
    let mut dts = Vec::new();
    let mut errors = Vec::new();
    for level in 0..levels {
        let dt = dt0 / (1 << level) as f64;
        let final_state = fixed_dt_run(params, mms.exact(0.0), dt, t_end, Some(&mms))?;
        dts.push(dt);
        errors.push(state_error(&final_state, &exact_end)?);
    }
    let orders = errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    Ok(LadderResult { dts, errors, orders })
}

/// Spatial refinement study: the same localized scenario on n, 2n, and a
/// 4n reference grid with one small fixed dt; errors measured at the
/// shared grid points of the coarse grids.
#[derive(Debug, Clone)]
pub struct SpatialResult {
    pub n_values: Vec<usize>,
    pub errors: Vec<f64>,
    /// errors[0] / errors[1]; spectral accuracy makes this large.
    pub ratio: f64,
}

pub fn spatial_refinement(
    params: &ModelParams,
    half_length: f64,
    n_coarse: usize,
    initial: &dyn Fn(&GridRef) -> Result<FieldPair>,
    t_end: f64,
    dt: f64,
) -> Result<SpatialResult> {
    let n_ref = n_coarse * 4;
    let mut finals = Vec::new();
    for n in [n_coarse, n_coarse * 2, n_ref] {
        let grid = crate::grid::SpectralGrid::new(n, half_length)?;
        let init = initial(&grid)?;
        finals.push(fixed_dt_run(params, init, dt, t_end, None)?);
    }
    let reference = &finals[2];
    let mut errors = Vec::new();
    for (idx, n) in [n_coarse, n_coarse * 2].iter().enumerate() {
        let stride = n_ref / n;
        let coarse = &finals[idx];
        let mut err = 0.0_f64;
        for j in 0..*n {
            err = err.max((coarse.u.values()[j] - reference.u.values()[j * stride]).abs());
            err = err.max((coarse.rho.values()[j] - reference.rho.values()[j * stride]).abs());
        }
        errors.push(err);
    }
    let ratio = errors[0] / errors[1].max(f64::MIN_POSITIVE);
    Ok(SpatialResult {
        n_values: vec![n_coarse, n_coarse * 2],
        errors,
        ratio,
    })
}

/// Divergence of two runs whose initial data differ by `delta` in the
/// discrete H¹ norm (the numeric proxy for continuous dependence).
#[derive(Debug, Clone)]
pub struct PerturbationResult {
    pub delta_initial: f64,
    pub delta_final: f64,
}

pub fn perturbation_divergence(
    params: &ModelParams,
    init: &FieldPair,
    ctrl: &StepControl,
    delta: f64,
) -> Result<PerturbationResult> {
    let grid = init.u.grid();
    let bump = SpectralField::from_fn(grid, |x| (-x * x).exp());
    let scale = delta / h1_norm(&bump)?;
    let perturbed = FieldPair {
        u: &init.u + &(&bump * scale),
        rho: init.rho.clone(),
        time: init.time,
    };
    let delta_initial = h1_norm(&(&perturbed.u - &init.u))?;

    let mut finals = Vec::new();
    for state in [init.clone(), perturbed] {
        let outcome = run(params, state, ctrl, RunHooks::default())?;
        if outcome.status != RunStatus::Completed {
            return Err(Error::Config(format!(
                "perturbation run halted early ({}): shorten the horizon",
                outcome.status.as_str()
            )));
        }
        finals.push(outcome.final_state);
    }
    Ok(PerturbationResult {
        delta_initial,
        delta_final: state_error(&finals[0], &finals[1])?,
    })
}
