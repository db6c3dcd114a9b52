//! Explicit RK4 time stepping under a CFL constraint tied to the
//! transport speed k·u², with clean halts on detected wave breaking.
//!
//! Breaking is declared when min_x k·u·u_x falls below the configured
//! threshold or when the CFL time step collapses below dt_min, never on
//! NaN alone; non-finite states are reported as a separate corrupt-state
//! outcome so parameter sweeps survive individual blow-ups.

use crate::characteristics::TrajectorySet;
use crate::diagnostics::breaking_monitor;
use crate::error::{Error, Result};
use crate::grid::SpectralField;
use crate::model::{rhs, FieldPair, ModelParams};

/// Time-stepping controls.
#[derive(Debug, Clone)]
pub struct StepControl {
    pub cfl: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub t_end: f64,
    pub breaking_threshold: f64,
    /// When set, bypasses the CFL policy and steps with this dt
    /// (clamped to the remaining horizon). Used by order studies.
    pub fixed_dt: Option<f64>,
}

impl StepControl {
    pub fn new(t_end: f64) -> Result<Self> {
        let ctrl = StepControl {
            cfl: 0.3,
            dt_min: 1e-10,
            dt_max: 0.05,
            t_end,
            breaking_threshold: -1e6,
            fixed_dt: None,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must be in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt_max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < dt_min < dt_max, got {} and {}",
                self.dt_min, self.dt_max
            )));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if !(self.breaking_threshold < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "breaking_threshold must be negative, got {}",
                self.breaking_threshold
            )));
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BreakingDetected,
    CorruptState,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::BreakingDetected => "breaking_detected",
            RunStatus::CorruptState => "corrupt_state",
        }
    }
}

/// Terminal report of one run.
#[derive(Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub final_state: FieldPair,
    pub halt_time: f64,
    pub halt_reason: String,
    pub steps: usize,
}

/// External forcing added to the right-hand side, used for manufactured
/// solutions.
pub trait Forcing {
    fn eval(&self, t: f64) -> Result<(SpectralField, SpectralField)>;
}

/// Per-step callback. Observers see accepted states and cannot mutate
/// them; invocation order is the order of registration.
pub trait Observer {
    fn on_step(&mut self, params: &ModelParams, state: &FieldPair) -> Result<()>;
}

/// The four RK4 stage states of one step, exposed so companion ODEs
/// (characteristics) can advance in lockstep with the PDE.
pub struct StepStages {
    /// State at t.
    pub s1: FieldPair,
    /// First midpoint state at t + dt/2.
    pub s2: FieldPair,
    /// Second midpoint state at t + dt/2.
    pub s3: FieldPair,
    /// Endpoint state at t + dt.
    pub s4: FieldPair,
}

fn lincomb(state: &FieldPair, du: &SpectralField, drho: &SpectralField, h: f64, t: f64) -> FieldPair {
    FieldPair {
        u: &state.u + &(du * h),
        rho: &state.rho + &(drho * h),
        time: t,
    }
}

fn rhs_forced(
    params: &ModelParams,
    state: &FieldPair,
    forcing: Option<&dyn Forcing>,
) -> Result<(SpectralField, SpectralField)> {
    let (mut du, mut drho) = rhs(params, state)?;
    if let Some(f) = forcing {
        let (fu, frho) = f.eval(state.time)?;
        du = &du + &fu;
        drho = &drho + &frho;
    }
    Ok((du, drho))
}

fn attach_stage(result: Result<(SpectralField, SpectralField)>, stage: usize) -> Result<(SpectralField, SpectralField)> {
    result.map_err(|e| match e {
        Error::CorruptState { context } => Error::CorruptState {
            context: format!("{context} (RK4 stage {stage})"),
        },
        other => other,
    })
}

/// One classical RK4 step; returns the new state and the stage states.
pub fn step_with_stages(
    params: &ModelParams,
    state: &FieldPair,
    dt: f64,
    forcing: Option<&dyn Forcing>,
) -> Result<(FieldPair, StepStages)> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let t = state.time;
    let (k1u, k1r) = attach_stage(rhs_forced(params, state, forcing), 1)?;
    let s2 = lincomb(state, &k1u, &k1r, dt / 2.0, t + dt / 2.0);
    let (k2u, k2r) = attach_stage(rhs_forced(params, &s2, forcing), 2)?;
    let s3 = lincomb(state, &k2u, &k2r, dt / 2.0, t + dt / 2.0);
    let (k3u, k3r) = attach_stage(rhs_forced(params, &s3, forcing), 3)?;
    let s4 = lincomb(state, &k3u, &k3r, dt, t + dt);
    let (k4u, k4r) = attach_stage(rhs_forced(params, &s4, forcing), 4)?;

    let du = &(&(&k1u + &(&k2u * 2.0)) + &(&(&k3u * 2.0) + &k4u)) * (dt / 6.0);
    let drho = &(&(&k1r + &(&k2r * 2.0)) + &(&(&k3r * 2.0) + &k4r)) * (dt / 6.0);
    let next = FieldPair {
        u: &state.u + &du,
        rho: &state.rho + &drho,
        time: t + dt,
    };
    next.u.ensure_finite("u after RK4 step")?;
    next.rho.ensure_finite("rho after RK4 step")?;
    let stages = StepStages {
        s1: state.clone(),
        s2,
        s3,
        s4,
    };
    Ok((next, stages))
}

/// One RK4 step (stage states discarded).
pub fn step(params: &ModelParams, state: &FieldPair, dt: f64) -> Result<FieldPair> {
    step_with_stages(params, state, dt, None).map(|(next, _)| next)
}

/// Optional companions to a run.
#[derive(Default)]
pub struct RunHooks<'a> {
    pub observers: Vec<&'a mut dyn Observer>,
    /// Characteristics advanced in lockstep with the PDE steps.
    pub trajectories: Option<&'a mut TrajectorySet>,
    pub forcing: Option<&'a dyn Forcing>,
}

/// Advance from `init` to `ctrl.t_end` under the adaptive CFL policy
/// dt = min(dt_max, cfl·Δx / max(|k|·u² + ε)).
///
/// Physics failures (breaking, non-finite states) are reported in the
/// outcome, not as errors; `Err` is reserved for invalid inputs and
/// observer I/O failures.
pub fn run(
    params: &ModelParams,
    init: FieldPair,
    ctrl: &StepControl,
    mut hooks: RunHooks,
) -> Result<RunOutcome> {
    ctrl.validate()?;
    if !init.is_finite() {
        return Err(Error::corrupt("initial state"));
    }

    let dx = init.u.grid().spacing();
    let mut state = init;
    let mut steps = 0usize;

    for obs in hooks.observers.iter_mut() {
        obs.on_step(params, &state)?;
    }

    loop {
        let remaining = ctrl.t_end - state.time;
        if remaining <= ctrl.dt_min {
            return Ok(RunOutcome {
                status: RunStatus::Completed,
                halt_time: state.time,
                halt_reason: format!("reached t_end = {}", ctrl.t_end),
                final_state: state,
                steps,
            });
        }

        let dt = match ctrl.fixed_dt {
            Some(fixed) => fixed.min(remaining),
            None => {
                let speed = state
                    .u
                    .values()
                    .iter()
                    .map(|&u| params.k().abs() * u * u)
                    .fold(0.0_f64, f64::max)
                    + 1e-12;
                let dt_cfl = ctrl.dt_max.min(ctrl.cfl * dx / speed);
                if dt_cfl < ctrl.dt_min {
                    return Ok(RunOutcome {
                        status: RunStatus::BreakingDetected,
                        halt_time: state.time,
                        halt_reason: format!(
                            "CFL time step collapsed below dt_min = {}",
                            ctrl.dt_min
                        ),
                        final_state: state,
                        steps,
                    });
                }
                dt_cfl.min(remaining)
            }
        };

        match step_with_stages(params, &state, dt, hooks.forcing) {
            Ok((next, stages)) => {
                if let Some(ts) = hooks.trajectories.as_deref_mut() {
                    if let Err(e) = ts.advance_with_stages(&stages, params, dt) {
                        return Ok(RunOutcome {
                            status: RunStatus::CorruptState,
                            halt_time: state.time,
                            halt_reason: format!("trajectory advance failed: {e}"),
                            final_state: state,
                            steps,
                        });
                    }
                }
                state = next;
                steps += 1;
            }
            Err(e) => {
                return Ok(RunOutcome {
                    status: RunStatus::CorruptState,
                    halt_time: state.time,
                    halt_reason: e.to_string(),
                    final_state: state,
                    steps,
                });
            }
        }

        for obs in hooks.observers.iter_mut() {
            obs.on_step(params, &state)?;
        }

        let monitor = match breaking_monitor(params, &state) {
            Ok(m) => m,
            Err(e) => {
                return Ok(RunOutcome {
                    status: RunStatus::CorruptState,
                    halt_time: state.time,
                    halt_reason: e.to_string(),
                    final_state: state,
                    steps,
                });
            }
        };
        if monitor < ctrl.breaking_threshold {
            return Ok(RunOutcome {
                status: RunStatus::BreakingDetected,
                halt_time: state.time,
                halt_reason: format!(
                    "min k u u_x = {monitor:.6e} fell below threshold {}",
                    ctrl.breaking_threshold
                ),
                final_state: state,
                steps,
            });
        }
    }
}
