//! The canned experiments behind each scenario name.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convolve::{self, BoundaryPolicy, KernelKind};
use crate::diagnostics::{self, DiagnosticsRecord, TailSide};
use crate::dynamics::{self, ModelParams};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::profiles::{self, ProfileKind};
use crate::spectral;
use crate::timestep::{self, SolverState, StepControl};

use super::config::{ExperimentConfig, Scenario};
use super::result::{RunResult, Verdict, VerdictStatus};

pub fn dispatch(config: &ExperimentConfig) -> Result<RunResult> {
    match config.scenario {
        Scenario::Conservation => conservation(config),
        Scenario::PeakonSpeed => peakon_speed(config),
        Scenario::DecayPersistence => decay_persistence(config),
        Scenario::VanishingProbe => vanishing_probe(config),
        Scenario::CompactSupport => compact_support(config),
        Scenario::IdentitySuite => identity_suite(config),
        Scenario::ConvergenceStudy => convergence_study(config),
        Scenario::Custom => custom(config),
    }
}

/// Evolution trace sampled on the output-time ladder.
struct Trace {
    records: Vec<DiagnosticsRecord>,
    states: Vec<(f64, Field)>,
    final_state: SolverState,
    blowup: Option<String>,
}

fn initial_state(config: &ExperimentConfig) -> Result<SolverState> {
    let grid = config.grid.build()?;
    let profile = config.require_profile()?;
    let u0 = profiles::sample_profile(profile, &grid, config.model.n, config.strict)?;
    // start on the resolved band so later dealiasing removes nothing new
    let u0 = spectral::dealias(&u0, config.dealias);
    Ok(SolverState::new(u0, config.model, config.dealias))
}

/// Steps the state through `t = k * output_interval` up to `t_end`,
/// measuring a diagnostics record at each ladder point. A detected blow-up
/// ends the trace early with the last good state retained.
fn evolve_recorded(config: &ExperimentConfig) -> Result<Trace> {
    let mut state = initial_state(config)?;
    let plan = &config.diagnostics;
    let mut records = vec![DiagnosticsRecord::measure(0.0, &state.u, plan)?];
    let mut states = vec![(0.0, state.u.clone())];
    let mut blowup = None;
    let t_end = config.control.t_end;
    let dt_out = config.output_interval;
    let n_out = (t_end / dt_out).ceil() as usize;
    for k in 1..=n_out {
        let target = (k as f64 * dt_out).min(t_end);
        let ctl = StepControl {
            t_end: target,
            ..config.control
        };
        match timestep::evolve(state.clone(), &ctl, |_| {}) {
            Ok(next) => {
                state = next;
                records.push(DiagnosticsRecord::measure(state.time, &state.u, plan)?);
                states.push((state.time, state.u.clone()));
            }
            Err(Error::BlowUp { time, step, reason }) => {
                blowup = Some(format!("blow-up at t = {time:.6} (step {step}): {reason}"));
                let _ = step;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trace {
        records,
        states,
        final_state: state,
        blowup,
    })
}

fn finish(result: &mut RunResult, trace: Trace, config: &ExperimentConfig) -> Result<()> {
    let s = &trace.final_state;
    result.final_summary.time = s.time;
    result.final_summary.steps = s.step_count;
    result.final_summary.sup_norm = s.u.max_abs();
    result.final_summary.h1 = diagnostics::conserved_h1(&s.u);
    result.final_summary.h = diagnostics::conserved_h(&s.u)?;
    result.final_summary.blowup = trace.blowup.clone();
    match &trace.blowup {
        Some(msg) => {
            result.verdicts.insert(
                "no_blowup".into(),
                Verdict {
                    status: VerdictStatus::Fail,
                    measured: s.time,
                    tolerance: config.control.t_end,
                    anchor: format!("run reaches t_end without blow-up ({msg})"),
                },
            );
        }
        None => {
            result.verdicts.insert(
                "no_blowup".into(),
                Verdict::at_least(s.time, config.control.t_end - 1e-12, "run reaches t_end without blow-up"),
            );
        }
    }
    result.records = trace.records;
    if config.output.snapshots {
        result.snapshots = trace.states;
    }
    Ok(())
}

fn relative_drift(series: impl Iterator<Item = f64>, base: f64) -> f64 {
    let scale = base.abs().max(1e-12);
    series
        .map(|v| (v - base).abs() / scale)
        .fold(0.0, f64::max)
}

fn conservation(config: &ExperimentConfig) -> Result<RunResult> {
    let mut result = RunResult::new(config);
    let trace = evolve_recorded(config)?;
    let h1_0 = trace.records[0].h1;
    let h_0 = trace.records[0].h;
    let h1_drift = relative_drift(trace.records.iter().map(|r| r.h1), h1_0);
    let h_drift = relative_drift(trace.records.iter().map(|r| r.h), h_0);
    result.verdicts.insert(
        "h1_drift".into(),
        Verdict::at_most(h1_drift, 1e-6, "mean of u is constant along the flow"),
    );
    result.verdicts.insert(
        "h_drift".into(),
        Verdict::at_most(
            h_drift,
            1e-6,
            "energy 1/2 int (u^2 + u_x^2) is constant along the flow",
        ),
    );
    finish(&mut result, trace, config)?;
    Ok(result)
}

/// Apex position and height by quadratic interpolation through the maximum
/// node and its neighbours.
pub fn apex_of(u: &Field) -> (f64, f64) {
    let v = u.values();
    let n = v.len();
    let (mut im, mut vm) = (0usize, f64::NEG_INFINITY);
    for (i, &val) in v.iter().enumerate() {
        if val > vm {
            im = i;
            vm = val;
        }
    }
    let left = v[(im + n - 1) % n];
    let right = v[(im + 1) % n];
    let curv = left - 2.0 * vm + right;
    if curv.abs() < 1e-300 {
        return (u.grid().node(im), vm);
    }
    let delta = 0.5 * (left - right) / curv;
    let x = u.grid().node(im) + delta * u.grid().spacing();
    let amp = vm - 0.125 * (left - right) * (left - right) / curv;
    (x, amp)
}

fn least_squares_slope(ts: &[f64], xs: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let mx = xs.iter().sum::<f64>() / n;
    let stt: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    let stx: f64 = ts.iter().zip(xs).map(|(t, x)| (t - mt) * (x - mx)).sum();
    stx / stt
}

fn peakon_speed(config: &ExperimentConfig) -> Result<RunResult> {
    let mut result = RunResult::new(config);
    let trace = evolve_recorded(config)?;
    let profile = config.require_profile()?;
    let c = profile.c;
    let amp_expect = c.powf(1.0 / config.model.n as f64);
    let two_l = 2.0 * config.grid.half_length;

    let mut ts = Vec::new();
    let mut xs = Vec::new();
    let mut amp_err = 0.0f64;
    let mut prev_raw = None;
    let mut unwrapped = 0.0;
    for (t, u) in &trace.states {
        let (x, amp) = apex_of(u);
        match prev_raw {
            None => unwrapped = x,
            Some(p) => {
                let mut d: f64 = x - p;
                if d > config.grid.half_length {
                    d -= two_l;
                }
                if d < -config.grid.half_length {
                    d += two_l;
                }
                unwrapped += d;
            }
        }
        prev_raw = Some(x);
        ts.push(*t);
        xs.push(unwrapped);
        amp_err = amp_err.max((amp - amp_expect).abs() / amp_expect);
    }
    let speed = least_squares_slope(&ts, &xs);
    result.verdicts.insert(
        "apex_speed".into(),
        Verdict::at_most(
            (speed - c).abs() / c,
            0.02,
            "peaked traveling wave moves at speed c",
        ),
    );
    result.verdicts.insert(
        "apex_amplitude".into(),
        Verdict::at_most(
            amp_err,
            0.02,
            "peaked traveling wave keeps apex height c^(1/n)",
        ),
    );
    finish(&mut result, trace, config)?;
    Ok(result)
}

fn decay_persistence(config: &ExperimentConfig) -> Result<RunResult> {
    let mut config = config.clone();
    if config.diagnostics.tail_window.is_none() {
        let l = config.grid.half_length;
        config.diagnostics.tail_window = Some((l / 6.0, l / 2.5));
    }
    let mut result = RunResult::new(&config);
    let trace = evolve_recorded(&config)?;
    let profile = config.require_profile()?;
    let theta_ref = if profile.kind == ProfileKind::ExpDecay {
        profile.theta
    } else {
        config.diagnostics.weight_theta
    };

    let fitted: Vec<f64> = trace
        .records
        .iter()
        .filter_map(|r| r.tail_fit.as_ref().map(|f| f.theta_hat))
        .collect();
    if fitted.len() == trace.records.len() {
        let min_theta = fitted.iter().copied().fold(f64::INFINITY, f64::min);
        result.verdicts.insert(
            "tail_exponent_persists".into(),
            Verdict::at_least(
                min_theta,
                theta_ref - 0.05,
                "exponential decay rate of the right tail persists in time",
            ),
        );
    } else {
        result.verdicts.insert(
            "tail_exponent_persists".into(),
            Verdict::inconclusive(
                theta_ref - 0.05,
                "exponential decay rate of the right tail persists in time \
                 (tail fit lacked usable nodes at some output times)",
            ),
        );
    }

    // boundedness of the weighted sup-norm ladder: no growth beyond 10%
    // of the max over the first half of the run
    let half = trace
        .records
        .iter()
        .filter(|r| r.time <= config.control.t_end / 2.0 + 1e-12)
        .count()
        .max(1);
    for (j, &(nw, _)) in trace.records[0].weighted_sup.iter().enumerate() {
        let series: Vec<f64> = trace.records.iter().map(|r| r.weighted_sup[j].1).collect();
        let base = series[..half].iter().copied().fold(0.0, f64::max);
        let peak = series.iter().copied().fold(0.0, f64::max);
        let name = format!("weighted_sup_bounded_{nw}");
        let anchor = "weighted sup-norm stays bounded along the run";
        if base == 0.0 {
            let v = if peak == 0.0 {
                Verdict::at_most(0.0, 1.10, anchor)
            } else {
                Verdict::at_most(f64::INFINITY, 1.10, anchor)
            };
            result.verdicts.insert(name, v);
        } else {
            result
                .verdicts
                .insert(name, Verdict::at_most(peak / base, 1.10, anchor));
        }
    }
    finish(&mut result, trace, &config)?;
    Ok(result)
}

fn local_l2_mass(u: &Field, a: f64, b: f64) -> f64 {
    let dx = u.grid().spacing();
    dx * u
        .grid()
        .nodes()
        .iter()
        .zip(u.values())
        .filter(|(&x, _)| x >= a && x <= b)
        .map(|(_, &v)| v * v)
        .sum::<f64>()
}

fn vanishing_probe(config: &ExperimentConfig) -> Result<RunResult> {
    let mut config = config.clone();
    let mut result = RunResult::new(&config);

    // the run may steepen toward blow-up before t_1; auto-reduce and report
    let mut trace = evolve_recorded(&config)?;
    let mut reductions = 0;
    while trace.blowup.is_some() && reductions < 3 {
        config.control.t_end /= 2.0;
        reductions += 1;
        trace = evolve_recorded(&config)?;
    }
    if reductions > 0 {
        result.verdicts.insert(
            "probe_time_reduced".into(),
            Verdict {
                status: VerdictStatus::Inconclusive,
                measured: config.control.t_end,
                tolerance: config.control.t_end * (1 << reductions) as f64,
                anchor: format!(
                    "probe time auto-reduced {reductions} time(s) to avoid blow-up"
                ),
            },
        );
    }

    // a super-exponential tail cannot persist: at t_1 the far right tail
    // must have relaxed onto the kernel rate e^{-x}
    let u1 = &trace.final_state.u;
    let l = config.grid.half_length;
    let base = config.diagnostics.tail_window.unwrap_or((l / 4.0, l / 4.0 + 8.0));
    let width = base.1 - base.0;
    let mut theta_far = None;
    for shift in [3, 2, 1, 0] {
        let w = (base.0 + shift as f64 * width / 2.0, base.1 + shift as f64 * width / 2.0);
        if w.1 > 0.85 * l {
            continue;
        }
        if let Ok(fit) = diagnostics::fit_tail(u1, w, TailSide::Right) {
            theta_far = Some(fit.theta_hat);
            break;
        }
    }
    match theta_far {
        Some(theta) => {
            result.verdicts.insert(
                "tail_relaxes_to_kernel_rate".into(),
                Verdict::at_most(
                    (theta - 1.0).abs(),
                    0.1,
                    "faster-than-kernel initial decay gives way to an e^{-x} tail",
                ),
            );
        }
        None => {
            result.verdicts.insert(
                "tail_relaxes_to_kernel_rate".into(),
                Verdict::inconclusive(
                    0.1,
                    "faster-than-kernel initial decay gives way to an e^{-x} tail \
                     (no sliding window had usable nodes)",
                ),
            );
        }
    }

    // no open interval of zeros appears where the data was supported
    let u0 = &trace.states[0].1;
    let mut min_mass = f64::INFINITY;
    let mut checked = 0;
    let mut a = -l / 2.0;
    while a + 1.0 <= l / 2.0 {
        if local_l2_mass(u0, a, a + 1.0) > 1e-8 {
            min_mass = min_mass.min(local_l2_mass(u1, a, a + 1.0));
            checked += 1;
        }
        a += 0.5;
    }
    if checked > 0 {
        result.verdicts.insert(
            "no_zero_rectangle".into(),
            Verdict::at_least(
                min_mass,
                f64::MIN_POSITIVE,
                "local mass stays positive wherever the data was supported",
            ),
        );
    } else {
        // zero data: u = 0 is the one solution allowed to vanish
        result.verdicts.insert(
            "no_zero_rectangle".into(),
            Verdict::at_most(
                u1.max_abs(),
                0.0,
                "identically zero data stays identically zero",
            ),
        );
    }
    finish(&mut result, trace, &config)?;
    Ok(result)
}

fn compact_support(config: &ExperimentConfig) -> Result<RunResult> {
    let mut config = config.clone();
    let profile = config.require_profile()?.clone();
    if config.diagnostics.support_outside.is_none() {
        config.diagnostics.support_outside =
            Some((profile.support.0 - 1.0, profile.support.1 + 1.0));
    }
    if config.diagnostics.tail_window.is_none() {
        config.diagnostics.tail_window = Some((8.0, 24.0_f64.min(0.8 * config.grid.half_length)));
    }
    let mut result = RunResult::new(&config);
    let trace = evolve_recorded(&config)?;
    let last = trace.records.last().expect("at least the t = 0 record");
    let mass = last.support_mass.unwrap_or(f64::NAN);
    result.verdicts.insert(
        "support_leaks".into(),
        Verdict::at_least(
            mass,
            1e-10,
            "compactly supported data develops mass outside its support instantly",
        ),
    );
    match &last.tail_fit {
        Some(fit) => {
            result.verdicts.insert(
                "far_tail_at_kernel_rate".into(),
                Verdict::at_most(
                    (fit.theta_hat - 1.0).abs(),
                    0.1,
                    "the leaked far field decays at the kernel rate e^{-x}",
                ),
            );
        }
        None => {
            result.verdicts.insert(
                "far_tail_at_kernel_rate".into(),
                Verdict::inconclusive(
                    0.1,
                    "the leaked far field decays at the kernel rate e^{-x} \
                     (tail fit lacked usable nodes)",
                ),
            );
        }
    }
    finish(&mut result, trace, &config)?;
    Ok(result)
}

/// Worst-case tracker for one named identity across the random suite.
struct Worst {
    value: f64,
    samples: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            samples: 0,
        }
    }
    fn push(&mut self, v: f64) {
        self.value = self.value.max(v);
        self.samples += 1;
    }
}

fn identity_suite(config: &ExperimentConfig) -> Result<RunResult> {
    let mut result = RunResult::new(config);
    let grid = config.grid.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let policy = if config.strict {
        BoundaryPolicy::Strict
    } else {
        BoundaryPolicy::Warn
    };
    let orders = [1u32, 2, 3, 5];
    let l3 = grid.half_length() / 3.0;

    let mut helmholtz = Worst::new();
    let mut dx_helmholtz = Worst::new();
    let mut kernel_identity = Worst::new();
    let mut flux_derivative = Worst::new();
    let mut sign_property = Worst::new();
    let mut s_positivity: f64 = f64::INFINITY;

    for trial in 0..32 {
        let n = orders[trial % orders.len()];
        let params = ModelParams::new(n)?;
        // random sum of three Gaussians, decaying well inside the domain
        let mut terms = Vec::new();
        for _ in 0..3 {
            let amp: f64 = rng.gen_range(-1.0..1.0);
            let center: f64 = rng.gen_range(-l3..l3);
            let width: f64 = rng.gen_range(0.8..2.0);
            terms.push((amp, center, width));
        }
        let u = Field::from_fn(grid.clone(), |x| {
            terms
                .iter()
                .map(|&(a, c, w)| a * (-(x - c) * (x - c) / (2.0 * w * w)).exp())
                .sum()
        })?;

        // spectral Helmholtz operators against the Green-kernel quadrature
        let spec = spectral::helmholtz_inverse(&u)?;
        let oracle = convolve::green_convolve(&u, KernelKind::Green, policy)?;
        helmholtz.push(spec.max_abs_diff(&oracle) / spec.max_abs().max(1e-14));
        let spec = spectral::dx_helmholtz_inverse(&u)?;
        let oracle = convolve::green_convolve(&u, KernelKind::GreenDx, policy)?;
        dx_helmholtz.push(spec.max_abs_diff(&oracle) / spec.max_abs().max(1e-14));

        // flux identities
        let f = dynamics::compute_f(&u, &params)?;
        let flux = dynamics::compute_flux(&f)?;
        let a: f64 = rng.gen_range(-5.0..-0.5);
        let b: f64 = rng.gen_range(0.5..5.0);
        let resid = diagnostics::kernel_identity_residual(&u, &params, a, b)?;
        kernel_identity.push(resid / flux.max_abs().max(1e-14));
        let lhs = spectral::spectral_derivative(&flux)?;
        let rhs = spectral::helmholtz_inverse(&f)?.sub(&f);
        flux_derivative.push(lhs.max_abs_diff(&rhs));

        // pointwise sign of the convolution source, odd orders only
        if n % 2 == 1 {
            let min_f = f.values().iter().copied().fold(f64::INFINITY, f64::min);
            sign_property.push((-min_f).max(0.0));
        }

        // comparison kernel positivity off the interval
        for &y in grid.nodes() {
            if y < a - 1e-9 || y > b + 1e-9 {
                s_positivity = s_positivity.min(diagnostics::s_kernel(a, b, y));
            }
        }
    }

    result.verdicts.insert(
        "helmholtz_oracle".into(),
        Verdict::at_most(
            helmholtz.value,
            1e-6,
            "spectral (1 - d_xx)^{-1} matches direct kernel quadrature",
        ),
    );
    result.verdicts.insert(
        "dx_helmholtz_oracle".into(),
        Verdict::at_most(
            dx_helmholtz.value,
            1e-6,
            "spectral d_x (1 - d_xx)^{-1} matches direct kernel quadrature",
        ),
    );
    result.verdicts.insert(
        "kernel_identity".into(),
        Verdict::at_most(
            kernel_identity.value,
            1e-6,
            "flux difference F(b) - F(a) equals the S-kernel integral of f",
        ),
    );
    result.verdicts.insert(
        "flux_derivative_identity".into(),
        Verdict::at_most(
            flux_derivative.value,
            1e-10,
            "d_x F = (1 - d_xx)^{-1} f - f",
        ),
    );
    result.verdicts.insert(
        "sign_property_odd_n".into(),
        if sign_property.samples > 0 {
            Verdict::at_most(
                sign_property.value,
                0.0,
                "convolution source f is pointwise nonnegative for odd n",
            )
        } else {
            Verdict::inconclusive(
                0.0,
                "convolution source f is pointwise nonnegative for odd n \
                 (no odd orders in the suite)",
            )
        },
    );
    result.verdicts.insert(
        "s_kernel_positive_outside".into(),
        Verdict::at_least(
            s_positivity,
            0.0,
            "comparison kernel S_{a,b} is positive outside [a, b]",
        ),
    );
    Ok(result)
}

fn convergence_study(config: &ExperimentConfig) -> Result<RunResult> {
    let mut result = RunResult::new(config);
    let state0 = initial_state(config)?;
    let t_end = config.control.t_end;
    let steps0 = (t_end / config.control.dt_max).ceil().max(2.0) as u64;

    let mut solutions = Vec::new();
    for level in 0..5u32 {
        let steps = steps0 << level;
        let dt = t_end / steps as f64;
        let mut s = state0.clone();
        for _ in 0..steps {
            s = timestep::step_rk4(&s, dt)?;
        }
        solutions.push(s.u);
    }
    let errors: Vec<f64> = solutions
        .windows(2)
        .map(|w| w[0].max_abs_diff(&w[1]))
        .collect();
    let orders: Vec<f64> = errors
        .windows(2)
        .map(|e| (e[0] / e[1]).log2())
        .collect();
    let mut sorted = orders.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    result.verdicts.insert(
        "rk4_order".into(),
        Verdict::at_least(
            median,
            3.8,
            "dt-halving error ratios show fourth-order time stepping",
        ),
    );
    // expose the raw ladder in the result file
    for (k, e) in errors.iter().enumerate() {
        result.verdicts.insert(
            format!("dt_halving_error_{k}"),
            Verdict {
                status: VerdictStatus::Pass,
                measured: *e,
                tolerance: f64::INFINITY,
                anchor: format!("informational: max-norm gap between levels {k} and {}", k + 1),
            },
        );
    }
    result.final_summary.time = t_end;
    result.final_summary.sup_norm = solutions.last().unwrap().max_abs();
    result.final_summary.h1 = diagnostics::conserved_h1(solutions.last().unwrap());
    result.final_summary.h = diagnostics::conserved_h(solutions.last().unwrap())?;
    Ok(result)
}

fn custom(config: &ExperimentConfig) -> Result<RunResult> {
    let mut result = RunResult::new(config);
    let trace = evolve_recorded(config)?;
    finish(&mut result, trace, config)?;
    Ok(result)
}
