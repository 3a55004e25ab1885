//! Adaptive Dormand-Prince 5(4) integrator for complex-valued state vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A first-order system `dy/dt = f(t, y)` over a complex state vector.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);

    /// Hook run on every accepted state, before the next step is attempted.
    fn accepted(&self, _t: f64, _y: &mut [Complex64]) {}
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on a single step, seconds.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-8, atol: 1e-10, max_step: f64::INFINITY, max_steps: 5_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th- and embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct Work {
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    y_new: Vec<Complex64>,
}

fn rms_norm(v: &[Complex64], scale: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let s: f64 = v.iter().zip(scale).map(|(x, s)| (x.norm() / s).powi(2)).sum();
    (s / v.len() as f64).sqrt()
}

fn initial_step<S: OdeSystem>(
    sys: &S,
    t: f64,
    y: &[Complex64],
    f0: &[Complex64],
    ctl: &StepControl,
    work: &mut Work,
) -> f64 {
    let scale: Vec<f64> = y.iter().map(|x| ctl.atol + ctl.rtol * x.norm()).collect();
    let d0 = rms_norm(y, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(ctl.max_step);
    for i in 0..y.len() {
        work.tmp[i] = y[i] + f0[i] * h0;
    }
    let mut f1 = core::mem::take(&mut work.y_new);
    sys.rhs(t + h0, &work.tmp, &mut f1);
    let diff: Vec<Complex64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_norm(&diff, &scale) / h0;
    work.y_new = f1;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * h0)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(ctl.max_step)
}

/// Integrate `sys` from `t0` to `t1`, overwriting `y` with the final state.
pub fn integrate<S: OdeSystem>(
    sys: &S,
    t0: f64,
    t1: f64,
    y: &mut [Complex64],
    ctl: &StepControl,
    mut observe: impl FnMut(f64, &[Complex64]),
) -> Result<StepStats> {
    let n = sys.dim();
    debug_assert_eq!(y.len(), n);
    let mut stats = StepStats::default();
    if t1 <= t0 {
        return Ok(stats);
    }

    let mut work = Work {
        k: core::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]),
        tmp: vec![Complex64::new(0.0, 0.0); n],
        y_new: vec![Complex64::new(0.0, 0.0); n],
    };
    let mut err = vec![Complex64::new(0.0, 0.0); n];
    let mut scale = vec![0.0; n];

    let mut t = t0;
    sys.rhs(t, y, &mut work.k[0]);
    stats.evaluations += 1;
    let f0 = work.k[0].clone();
    let mut h = initial_step(sys, t, y, &f0, ctl, &mut work);
    stats.evaluations += 1;

    while t < t1 {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::Integration { time: t, reason: "step budget exhausted" });
        }
        let remaining = t1 - t;
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(t1.abs()) {
            return Err(Error::Integration { time: t, reason: "step size underflow" });
        }

        let Work { k, tmp, y_new } = &mut work;
        let [k1, k2, k3, k4, k5, k6, k7] = k;

        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h * A21);
        }
        sys.rhs(t + C2 * h, tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        sys.rhs(t + C3 * h, tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        sys.rhs(t + C4 * h, tmp, k4);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        sys.rhs(t + C5 * h, tmp, k5);
        for i in 0..n {
            tmp[i] = y[i]
                + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        sys.rhs(t + h, tmp, k6);
        for i in 0..n {
            y_new[i] = y[i]
                + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        sys.rhs(t + h, y_new, k7);
        stats.evaluations += 6;

        for i in 0..n {
            err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * h;
            scale[i] = ctl.atol + ctl.rtol * y[i].norm().max(y_new[i].norm());
        }
        let err_norm = rms_norm(&err, &scale);

        if err_norm <= 1.0 {
            stats.accepted += 1;
            t = if last { t1 } else { t + h };
            y.copy_from_slice(y_new);
            sys.accepted(t, y);
            observe(t, y);
            // first-same-as-last
            core::mem::swap(k1, k7);
            let factor = if err_norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h = (h * factor).min(ctl.max_step);
        } else {
            stats.rejected += 1;
            let factor = (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            h *= factor;
        }
    }
    Ok(stats)
}
