//! Dormand–Prince 5(4) embedded Runge–Kutta integrator with adaptive steps.
//!
//! Mass-action systems are autonomous, so only the stage weights are
//! needed, not the stage times.

use super::SimError;
use crate::ir::OdeSystem;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// What the step observer wants after seeing an accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Debug)]
pub(crate) struct Tolerances {
    pub rel: f64,
    /// Absolute tolerance per state component.
    pub abs: Vec<f64>,
    pub max_step: f64,
    pub max_steps: usize,
    pub overflow: f64,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    /// Smallest component value seen before negative clamping.
    pub min_before_clamp: f64,
}

pub(crate) struct Integrator<'a> {
    ode: &'a OdeSystem,
    tol: Tolerances,
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    next: Vec<f64>,
    /// Whether `k[0]` holds the derivative at the current state.
    fresh: bool,
    /// Step size proposed for the next attempt.
    pub h: f64,
    pub stats: Stats,
}

impl<'a> Integrator<'a> {
    pub fn new(ode: &'a OdeSystem, tol: Tolerances) -> Self {
        let n = ode.dimension();
        let h = tol.max_step.min(1e-3);
        Self {
            ode,
            tol,
            k: std::array::from_fn(|_| vec![0.0; n]),
            stage: vec![0.0; n],
            next: vec![0.0; n],
            fresh: false,
            h,
            stats: Stats { min_before_clamp: f64::INFINITY, ..Stats::default() },
        }
    }

    /// Forgets the cached derivative, e.g. after the gate values change.
    pub fn invalidate(&mut self) {
        self.fresh = false;
    }

    /// Advances `y` from `t0` to `t1` with gate values `exo`, calling
    /// `observe` after every accepted step. Returns the time reached, which
    /// is `t1` unless the observer stopped early.
    // Stage arithmetic walks several arrays in lockstep by species index.
    #[allow(clippy::needless_range_loop)]
    pub fn integrate(
        &mut self,
        t0: f64,
        t1: f64,
        y: &mut [f64],
        exo: &[f64],
        mut observe: impl FnMut(f64, &[f64]) -> Control,
    ) -> Result<f64, SimError> {
        let n = y.len();
        let mut t = t0;
        if n == 0 {
            observe(t1, y);
            return Ok(t1);
        }
        while t < t1 {
            if self.stats.accepted + self.stats.rejected >= self.tol.max_steps {
                return Err(SimError::TooManySteps { time: t, steps: self.tol.max_steps });
            }
            if !self.fresh {
                self.ode.derivative_with(y, exo, &mut self.k[0]);
                self.fresh = true;
            }
            let remaining = t1 - t;
            let mut h = self.h.min(self.tol.max_step);
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            let min_step = 1e-14 * t.abs().max(1.0);
            if h < min_step {
                return Err(SimError::StepUnderflow { time: t, step: h });
            }

            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, a) in A[s][..s].iter().enumerate() {
                        acc += a * self.k[j][i];
                    }
                    self.stage[i] = y[i] + h * acc;
                }
                if s == 6 {
                    self.next.copy_from_slice(&self.stage);
                }
                self.ode.derivative_with(&self.stage, exo, &mut self.k[s]);
            }

            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, w) in E.iter().enumerate() {
                    e += w * self.k[j][i];
                }
                let scale = self.tol.abs[i] + self.tol.rel * y[i].abs().max(self.next[i].abs());
                let ratio = (h * e).abs() / scale;
                err = if ratio.is_nan() { f64::INFINITY } else { err.max(ratio) };
            }

            if err <= 1.0 {
                t = if last { t1 } else { t + h };
                let mut clamped = false;
                for i in 0..n {
                    let v = self.next[i];
                    if !v.is_finite() || v > self.tol.overflow {
                        return Err(self.divergence(i, t, v, exo));
                    }
                    self.stats.min_before_clamp = self.stats.min_before_clamp.min(v);
                    if v < 0.0 {
                        self.next[i] = 0.0;
                        clamped = true;
                    }
                }
                y.copy_from_slice(&self.next);
                if clamped {
                    self.fresh = false;
                } else {
                    let (first, rest) = self.k.split_at_mut(1);
                    first[0].copy_from_slice(&rest[5]);
                }
                self.stats.accepted += 1;
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    self.h = h * factor;
                }
                if observe(t, y) == Control::Stop {
                    return Ok(t);
                }
            } else {
                self.stats.rejected += 1;
                let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                self.h = h * factor;
            }
        }
        Ok(t)
    }

    /// Names the reaction contributing the largest flux to the diverging
    /// species.
    fn divergence(&self, index: usize, time: f64, value: f64, exo: &[f64]) -> SimError {
        let fluxes = self.ode.fluxes(&self.next, exo);
        let dominant = fluxes
            .iter()
            .enumerate()
            .map(|(term, f)| (term, (f * self.ode.delta(term, index)).abs()))
            .filter(|(_, f)| *f > 0.0 || f.is_nan())
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(term, _)| self.ode.provenance(term).to_string());
        SimError::Divergence {
            species: self.ode.species()[index].to_string(),
            time,
            value,
            provenance: dominant.unwrap_or_else(|| "unknown".into()),
        }
    }
}
