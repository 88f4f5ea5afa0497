//! Explicit Runge–Kutta integration with blow-up detection.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub type RhsFn = Arc<dyn Fn(f64, &[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// `y' = f(t, y)` on `R^dim`.
#[derive(Clone)]
pub struct OdeSystem {
    dim: usize,
    rhs: RhsFn,
    description: String,
}

impl fmt::Debug for OdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeSystem").field("dim", &self.dim).field("description", &self.description).finish()
    }
}

impl OdeSystem {
    pub fn new<F>(dim: usize, description: impl Into<String>, rhs: F) -> Self
    where
        F: Fn(f64, &[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        Self { dim, rhs: Arc::new(rhs), description: description.into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        (self.rhs)(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with a fixed step.
    Rk4,
    /// Dormand–Prince 5(4) with adaptive steps.
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub initial_step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub blowup_threshold: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45,
            initial_step: 1e-3,
            rtol: 1e-9,
            atol: 1e-12,
            blowup_threshold: 1e12,
            min_step: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64) -> Self {
        Self { method: Method::Rk4, initial_step: step, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.min_step > 0.0 && self.min_step < self.initial_step) {
            return bad("need 0 < min_step < initial_step");
        }
        if !(self.blowup_threshold > 0.0) {
            return bad("blow-up threshold must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Status {
    Completed,
    /// The state norm reached the blow-up threshold.
    BlowUp { last_time: f64, norm: f64 },
    /// The step size fell below `min_step` (or the step budget ran out).
    StepUnderflow { last_time: f64 },
}

impl Status {
    pub fn is_completed(&self) -> bool {
        matches!(self, Self::Completed)
    }

    pub fn is_breakdown(&self) -> bool {
        !self.is_completed()
    }
}

/// Sampled solution. Times are strictly monotone in the direction of
/// integration (decreasing for backward runs).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub status: Status,
    /// Size of the last accepted step.
    pub last_step: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has its initial point")
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has its initial point")
    }

    fn direction(&self) -> f64 {
        if self.times.len() > 1 && self.final_time() < self.times[0] {
            -1.0
        } else {
            1.0
        }
    }

    /// Estimate of the breakdown time: last accepted time plus half the final
    /// step, in the direction of integration.
    pub fn breakdown_estimate(&self) -> f64 {
        self.final_time() + self.direction() * 0.5 * self.last_step
    }

    /// CSV with a `# {json}` first line carrying `header`, then `t,y0,y1,...`.
    pub fn to_csv(&self, header: &serde_json::Value) -> String {
        let mut out = format!("# {}\n", serde_json::to_string(header).unwrap_or_default());
        let dim = self.states.first().map_or(0, Vec::len);
        out.push('t');
        for i in 0..dim {
            out.push_str(&format!(",y{i}"));
        }
        out.push('\n');
        for (t, y) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t:e}"));
            for v in y {
                out.push_str(&format!(",{v:e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn norm(y: &[f64]) -> f64 {
    let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n.is_finite() {
        n
    } else {
        f64::INFINITY
    }
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        for (o, kv) in out.iter_mut().zip(k.iter()) {
            *o += h * c * kv;
        }
    }
    out
}

struct StepResult {
    y: Vec<f64>,
    /// Scaled error norm, `None` for fixed-step methods.
    err: Option<f64>,
}

fn rk4_step(sys: &OdeSystem, t: f64, y: &[f64], h: f64) -> Result<StepResult> {
    let k1 = sys.eval(t, y)?;
    let k2 = sys.eval(t + h / 2.0, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = sys.eval(t + h / 2.0, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = sys.eval(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    let y = axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
    Ok(StepResult { y, err: None })
}

// Dormand–Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dp45_step(sys: &OdeSystem, t: f64, y: &[f64], h: f64, cfg: &IntegratorConfig) -> Result<StepResult> {
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let terms: Vec<(f64, &[f64])> = (0..s).map(|j| (A[s][j], k[j].as_slice())).collect();
        let ys = axpy(y, h, &terms);
        k.push(sys.eval(t + C[s] * h, &ys)?);
    }
    let y5 = axpy(y, h, &(0..7).map(|j| (B5[j], k[j].as_slice())).collect::<Vec<_>>());
    // max-norm of the scaled error estimate
    let mut acc: f64 = 0.0;
    for i in 0..y.len() {
        let e: f64 = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
        let sc = cfg.atol + cfg.rtol * y[i].abs().max(y5[i].abs());
        acc = f64::max(acc, (e / sc).abs());
    }
    let err = acc;
    Ok(StepResult { y: y5, err: Some(if err.is_finite() { err } else { f64::INFINITY }) })
}

/// Integrates `sys` from `t_span.0` to `t_span.1` (either direction).
///
/// An rhs error inside a trial step rejects the step and retries with a
/// smaller one; an rhs error at the initial state is returned.
pub fn integrate(sys: &OdeSystem, y0: &[f64], t_span: (f64, f64), cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if y0.len() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), got: y0.len() });
    }
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::InvalidConfig("time span must be finite".into()));
    }
    sys.eval(t0, y0)?;
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![y0.to_vec()],
        status: Status::Completed,
        last_step: 0.0,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = cfg.initial_step.min((t1 - t0).abs());
    let start_norm = norm(&y);
    if start_norm >= cfg.blowup_threshold {
        traj.status = Status::BlowUp { last_time: t, norm: start_norm };
        return Ok(traj);
    }

    while dir * (t1 - t) > 0.0 {
        if traj.accepted_steps + traj.rejected_steps >= cfg.max_steps {
            traj.status = Status::StepUnderflow { last_time: t };
            return Ok(traj);
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        if step < cfg.min_step && !last {
            traj.status = Status::StepUnderflow { last_time: t };
            return Ok(traj);
        }
        let trial = match cfg.method {
            Method::Rk4 => rk4_step(sys, t, &y, dir * step),
            Method::Rk45 => dp45_step(sys, t, &y, dir * step, cfg),
        };
        let accepted = match trial {
            Ok(StepResult { y: y_new, err }) => match err {
                Some(e) if e > 1.0 => {
                    h = step * (0.9 * e.powf(-0.2)).clamp(0.1, 0.9);
                    None
                }
                Some(e) => {
                    let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                    Some((y_new, step * grow))
                }
                None => Some((y_new, h)),
            },
            Err(_) => {
                h = step * 0.25;
                None
            }
        };
        match accepted {
            None => {
                traj.rejected_steps += 1;
                if h < cfg.min_step {
                    traj.status = Status::StepUnderflow { last_time: t };
                    return Ok(traj);
                }
            }
            Some((y_new, h_next)) => {
                t = if last { t1 } else { t + dir * step };
                y = y_new;
                traj.accepted_steps += 1;
                traj.last_step = step;
                traj.times.push(t);
                traj.states.push(y.clone());
                let n = norm(&y);
                if n >= cfg.blowup_threshold {
                    traj.status = Status::BlowUp { last_time: t, norm: n };
                    return Ok(traj);
                }
                if cfg.method == Method::Rk45 {
                    h = h_next;
                }
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_solution() {
        let sys = OdeSystem::new(2, "zero", |_, _| Ok(vec![0.0, 0.0]));
        let tr = integrate(&sys, &[1.0, -2.0], (0.0, 3.0), &IntegratorConfig::default()).unwrap();
        assert!(tr.status.is_completed());
        assert_eq!(tr.final_state(), &[1.0, -2.0]);
        assert_eq!(tr.final_time(), 3.0);
    }

    #[test]
    fn quadratic_blows_up_near_one() {
        let sys = OdeSystem::new(1, "y' = y^2", |_, y| Ok(vec![y[0] * y[0]]));
        // With the default threshold 1e12 the step size collapses first: steps
        // shrink like the distance to the singularity, reaching 1e-12 near y ~ 1e10.
        let tr = integrate(&sys, &[1.0], (0.0, 2.0), &IntegratorConfig::default()).unwrap();
        assert!(matches!(tr.status, Status::StepUnderflow { .. }), "{:?}", tr.status);
        assert!((tr.final_time() - 1.0).abs() < 1e-3);
        let cfg = IntegratorConfig { blowup_threshold: 1e8, ..Default::default() };
        let tr = integrate(&sys, &[1.0], (0.0, 2.0), &cfg).unwrap();
        let Status::BlowUp { last_time, norm } = tr.status else { panic!("{:?}", tr.status) };
        assert!(norm >= 1e8);
        assert!((last_time - 1.0).abs() < 1e-3);
        assert!((tr.breakdown_estimate() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rotation_conserves_norm() {
        let sys = OdeSystem::new(2, "rotation", |_, y| Ok(vec![-y[1], y[0]]));
        let tr = integrate(&sys, &[1.0, 0.0], (0.0, 100.0), &IntegratorConfig::default()).unwrap();
        assert!(tr.status.is_completed());
        let y = tr.final_state();
        assert!((y[0].hypot(y[1]) - 1.0).abs() < 1e-8, "drift {} steps {}", y[0].hypot(y[1]) - 1.0, tr.accepted_steps);
        assert!((y[0] - 100f64.cos()).abs() < 1e-7);
    }

    #[test]
    fn backward_and_fixed_step() {
        let sys = OdeSystem::new(1, "y' = y", |_, y| Ok(vec![y[0]]));
        let tr = integrate(&sys, &[1.0], (0.0, -2.0), &IntegratorConfig::default()).unwrap();
        assert!((tr.final_state()[0] - (-2f64).exp()).abs() < 1e-9);
        assert!(tr.times.windows(2).all(|w| w[1] < w[0]));
        let tr = integrate(&sys, &[1.0], (0.0, 1.0), &IntegratorConfig::rk4(1e-3)).unwrap();
        assert!((tr.final_state()[0] - 1f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn domain_errors_shrink_steps_then_underflow() {
        let sys = OdeSystem::new(1, "wall at 1", |_, y| {
            if y[0] >= 1.0 {
                Err(Error::Domain { chart: "test".into(), point: y.to_vec() })
            } else {
                Ok(vec![1.0])
            }
        });
        let tr = integrate(&sys, &[0.0], (0.0, 5.0), &IntegratorConfig::default()).unwrap();
        assert!(matches!(tr.status, Status::StepUnderflow { .. }));
        assert!((tr.final_time() - 1.0).abs() < 1e-6);
        assert!(integrate(&sys, &[2.0], (0.0, 1.0), &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn invalid_configs() {
        let sys = OdeSystem::new(1, "id", |_, y| Ok(y.to_vec()));
        let cfg = IntegratorConfig { rtol: 0.0, ..Default::default() };
        assert!(integrate(&sys, &[1.0], (0.0, 1.0), &cfg).is_err());
        assert!(integrate(&sys, &[1.0, 2.0], (0.0, 1.0), &IntegratorConfig::default()).is_err());
    }
}
