//! Explicit method-of-lines integration with CFL step control and blow-up
//! detection.
//!
//! The solver uses fixed-stage classical RK4; the step sequence for a given
//! configuration is deterministic, which keeps regression outputs bit-stable.
//! The underlying solutions live on `[0, T)` with possibly finite `T`, so a
//! blow-up is reported gracefully with the last good state attached.

use serde::{Deserialize, Serialize};

use crate::dynamics::{self, int_pow, ModelParams};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::spectral::DealiasRule;

#[derive(Debug, Clone)]
pub struct SolverState {
    pub time: f64,
    pub u: Field,
    pub params: ModelParams,
    pub dealias: DealiasRule,
    pub dt: f64,
    pub step_count: u64,
}

impl SolverState {
    pub fn new(u: Field, params: ModelParams, dealias: DealiasRule) -> Self {
        Self {
            time: 0.0,
            u,
            params,
            dealias,
            dt: 0.0,
            step_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepControl {
    /// CFL safety factor in (0, 1].
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Max-norm cap beyond which the run is declared blown up.
    #[serde(default = "default_blowup_threshold")]
    pub blowup_threshold: f64,
}

fn default_cfl() -> f64 {
    0.2
}
fn default_dt_max() -> f64 {
    0.05
}
fn default_t_end() -> f64 {
    1.0
}
fn default_blowup_threshold() -> f64 {
    1e3
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!(
                "cfl must be in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::Config(format!(
                "dt_max must be positive, got {}",
                self.dt_max
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        Ok(())
    }
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            cfl: default_cfl(),
            dt_max: default_dt_max(),
            t_end: default_t_end(),
            blowup_threshold: default_blowup_threshold(),
        }
    }
}

/// One classical RK4 step of `u' = f(u)` (generic so tests can stub the
/// right-hand side).
pub fn rk4_step(u: &Field, dt: f64, f: impl Fn(&Field) -> Result<Field>) -> Result<Field> {
    let k1 = f(u)?;
    let k2 = f(&u.add(&k1.scale(0.5 * dt)))?;
    let k3 = f(&u.add(&k2.scale(0.5 * dt)))?;
    let k4 = f(&u.add(&k3.scale(dt)))?;
    let mut out = u.clone();
    for i in 0..out.len() {
        out.values_mut()[i] += dt / 6.0
            * (k1.values()[i] + 2.0 * k2.values()[i] + 2.0 * k3.values()[i] + k4.values()[i]);
    }
    Ok(out)
}

/// Advances the state by one RK4 step of the model right-hand side.
pub fn step_rk4(state: &SolverState, dt: f64) -> Result<SolverState> {
    assert!(dt > 0.0, "dt must be positive");
    state.u.check_finite("step_rk4 input")?;
    let params = state.params;
    let rule = state.dealias;
    let u = rk4_step(&state.u, dt, |v| dynamics::rhs(v, &params, rule)).map_err(|e| match e {
        Error::NonFinite { .. } => Error::BlowUp {
            time: state.time,
            step: state.step_count,
            reason: "non-finite value in an RK4 stage".into(),
        },
        other => other,
    })?;
    Ok(SolverState {
        time: state.time + dt,
        u,
        params,
        dealias: rule,
        dt,
        step_count: state.step_count + 1,
    })
}

const CFL_FLOOR: f64 = 1e-12;

/// Advective CFL step: `dt = min(dt_max, cfl * dx / max(eps, max|u|^n))`.
pub fn choose_dt(state: &SolverState, ctl: &StepControl) -> f64 {
    let speed = int_pow(state.u.max_abs(), state.params.n).max(CFL_FLOOR);
    (ctl.cfl * state.u.grid().spacing() / speed).min(ctl.dt_max)
}

/// Steps from `state.time` to `ctl.t_end` (final step shortened to land
/// exactly), invoking `observer` after every accepted step. On blow-up the
/// error carries the last good time and step; the last good state is what
/// the observer saw most recently.
pub fn evolve(
    mut state: SolverState,
    ctl: &StepControl,
    mut observer: impl FnMut(&SolverState),
) -> Result<SolverState> {
    ctl.validate()?;
    while state.time < ctl.t_end - 1e-14 {
        let dt = choose_dt(&state, ctl).min(ctl.t_end - state.time);
        let next = step_rk4(&state, dt)?;
        if next.u.max_abs() > ctl.blowup_threshold {
            return Err(Error::BlowUp {
                time: next.time,
                step: next.step_count,
                reason: format!(
                    "max-norm {:.3e} exceeded blow-up threshold {:.3e}",
                    next.u.max_abs(),
                    ctl.blowup_threshold
                ),
            });
        }
        state = next;
        observer(&state);
    }
    Ok(state)
}
