//! One-dimensional check of the boundary-to-source translation.
//!
//! `w_tt - w_xx = f` on `(0, pi)` with Neumann data `b0`, `b_pi` and zero
//! initial data is solved twice: by Runge-Kutta integration of the cosine
//! coefficients with the boundary data as explicit forcing, and by Duhamel
//! convolution with the boundary data written as surface delta sources.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perturbation::{duhamel, Oscillator};
use crate::special::cached_rule;

/// RK4 is stable on the imaginary axis for `|lambda dt| < 2.83`.
pub const STABILITY_LIMIT: f64 = 2.8;

/// Nodes of the Gauss-Legendre rule projecting the source onto modes.
const PROJECTION_NODES: usize = 128;

/// Interior margin excluded from comparisons because of Gibbs oscillations.
pub const GIBBS_MARGIN: f64 = 0.05;

type Signal = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type Field = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

pub struct OneDProblem {
    pub b0: Signal,
    pub b_pi: Signal,
    pub source: Field,
    /// Cosine modes `n = 0..modes`.
    pub modes: usize,
    pub t_end: f64,
    pub dt: f64,
    /// Output every this many steps.
    pub output_stride: usize,
    /// Sample positions.
    pub xs: Vec<f64>,
}

impl OneDProblem {
    /// Problem with step `min(0.01, 0.1 / modes)`, about 100 output times and
    /// 64 interior sample points.
    pub fn new(b0: Signal, b_pi: Signal, source: Field, modes: usize, t_end: f64) -> Self {
        let dt = 0.01_f64.min(0.1 / modes.max(1) as f64);
        let steps = (t_end / dt).round() as usize;
        let xs = (0..64)
            .map(|i| GIBBS_MARGIN + (PI - 2.0 * GIBBS_MARGIN) * i as f64 / 63.0)
            .collect();
        Self { b0, b_pi, source, modes, t_end, dt, output_stride: (steps / 100).max(1), xs }
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::EmptyTruncation("1-D problem needs at least one mode".into()));
        }
        if !(self.dt > 0.0 && self.t_end > 0.0) || self.output_stride == 0 {
            return Err(Error::invalid("1-D problem needs dt, t_end and stride > 0"));
        }
        let top = (self.modes - 1) as f64;
        if self.dt * top > STABILITY_LIMIT {
            return Err(Error::Stability(format!(
                "dt * n_max = {} exceeds {STABILITY_LIMIT}",
                self.dt * top
            )));
        }
        Ok(())
    }

    /// `int_0^pi f(t, x) cos(n x) dx` for every mode.
    fn source_moments(&self, t: f64, table: &CosTable) -> Vec<f64> {
        let values: Vec<f64> = table.nodes.iter().map(|&x| (self.source)(t, x)).collect();
        table
            .cos
            .iter()
            .map(|row| row.iter().zip(&values).zip(&table.weights).map(|((c, v), w)| c * v * w).sum())
            .collect()
    }
}

struct CosTable {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    cos: Vec<Vec<f64>>,
}

impl CosTable {
    fn new(modes: usize) -> Self {
        let rule = cached_rule(PROJECTION_NODES);
        let (nodes, weights): (Vec<f64>, Vec<f64>) = rule.mapped(0.0, PI).unzip();
        let cos = (0..modes)
            .map(|n| nodes.iter().map(|x| (n as f64 * x).cos()).collect())
            .collect();
        Self { nodes, weights, cos }
    }
}

/// Sampled solution `values[time][x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneDSolution {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn synthesize(coeffs: &[f64], basis: impl Fn(usize, f64) -> f64, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| coeffs.iter().enumerate().map(|(n, c)| c * basis(n, x)).sum())
        .collect()
}

/// Cosine-coefficient ODEs `w_n'' = -n^2 w_n + g_n(t)` integrated with RK4,
/// where `g_n` carries the boundary data explicitly.
pub fn solve_modal(problem: &OneDProblem) -> Result<OneDSolution> {
    problem.validate()?;
    let table = CosTable::new(problem.modes);
    let forcing = |t: f64| -> Vec<f64> {
        let m = problem.source_moments(t, &table);
        let (b0, bp) = ((problem.b0)(t), (problem.b_pi)(t));
        (0..problem.modes)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let scale = if n == 0 { 1.0 / PI } else { 2.0 / PI };
                scale * (b0 + sign * bp + m[n])
            })
            .collect()
    };
    let n = problem.modes;
    let k2: Vec<f64> = (0..n).map(|i| (i * i) as f64).collect();
    let mut w = vec![0.0; n];
    let mut v = vec![0.0; n];
    let dt = problem.dt;
    let mut out = OneDSolution { times: vec![0.0], xs: problem.xs.clone(), values: vec![vec![0.0; problem.xs.len()]] };
    let mut g_now = forcing(0.0);
    for step in 0..problem.steps() {
        let t = step as f64 * dt;
        let g_mid = forcing(t + 0.5 * dt);
        let g_next = forcing(t + dt);
        for i in 0..n {
            let acc = |wi: f64, g: f64| -k2[i] * wi + g;
            let (w0, v0) = (w[i], v[i]);
            let (a1, b1) = (v0, acc(w0, g_now[i]));
            let (a2, b2) = (v0 + 0.5 * dt * b1, acc(w0 + 0.5 * dt * a1, g_mid[i]));
            let (a3, b3) = (v0 + 0.5 * dt * b2, acc(w0 + 0.5 * dt * a2, g_mid[i]));
            let (a4, b4) = (v0 + dt * b3, acc(w0 + dt * a3, g_next[i]));
            w[i] = w0 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            v[i] = v0 + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
        g_now = g_next;
        if (step + 1) % problem.output_stride == 0 {
            out.times.push(t + dt);
            out.values.push(synthesize(&w, |n, x| (n as f64 * x).cos(), &problem.xs));
        }
    }
    Ok(out)
}

fn orthonormal(n: usize, x: f64) -> f64 {
    if n == 0 {
        1.0 / PI.sqrt()
    } else {
        (2.0 / PI).sqrt() * (n as f64 * x).cos()
    }
}

/// Homogeneous Neumann problem with sources `f + delta(x) b0 + delta(x - pi) b_pi`,
/// solved per orthonormal mode by Duhamel convolution with `sin(n t)/n`
/// (`t` for `n = 0`).
pub fn solve_delta_source(problem: &OneDProblem) -> Result<OneDSolution> {
    problem.validate()?;
    let table = CosTable::new(problem.modes);
    let steps = problem.steps();
    let dt = problem.dt;
    let n = problem.modes;
    let mut forcing = vec![vec![Complex64::new(0.0, 0.0); steps + 1]; n];
    for j in 0..=steps {
        let t = j as f64 * dt;
        let m = problem.source_moments(t, &table);
        let (b0, bp) = ((problem.b0)(t), (problem.b_pi)(t));
        for (i, series) in forcing.iter_mut().enumerate() {
            let e0 = orthonormal(i, 0.0);
            let value = e0 * m[i] + e0 * b0 + orthonormal(i, PI) * bp;
            series[j] = Complex64::new(value, 0.0);
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    for (i, series) in forcing.iter().enumerate() {
        let osc = Oscillator::new(0.0, (i * i) as f64);
        coeffs.push(duhamel(&osc, dt, series)?.0);
    }
    let mut out = OneDSolution { times: Vec::new(), xs: problem.xs.clone(), values: Vec::new() };
    for j in (0..=steps).step_by(problem.output_stride) {
        let c: Vec<f64> = coeffs.iter().map(|s| s[j].re).collect();
        out.times.push(j as f64 * dt);
        out.values.push(synthesize(&c, orthonormal, &problem.xs));
    }
    Ok(out)
}

/// `||a - b|| / ||a||` over all samples.
pub fn relative_l2(a: &OneDSolution, b: &OneDSolution) -> Result<f64> {
    if a.times.len() != b.times.len() || a.xs != b.xs {
        return Err(Error::invalid("solutions are sampled differently"));
    }
    let (mut diff, mut norm) = (0.0, 0.0);
    for (ra, rb) in a.values.iter().zip(&b.values) {
        for (x, y) in ra.iter().zip(rb) {
            diff += (x - y) * (x - y);
            norm += x * x;
        }
    }
    Ok(if norm == 0.0 { diff.sqrt() } else { (diff / norm).sqrt() })
}

/// Random smooth data: low-order trigonometric polynomials in `t` and `x`.
pub fn random_problem(seed: u64, modes: usize, t_end: f64) -> OneDProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wave = |terms: usize| -> Vec<(f64, f64, f64)> {
        (0..terms)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.2..3.0), rng.gen_range(0.0..2.0 * PI)))
            .collect()
    };
    let b0 = wave(3);
    let bp = wave(3);
    let time_part = wave(4);
    let space: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let eval = |terms: &[(f64, f64, f64)], t: f64| -> f64 {
        terms.iter().map(|(a, w, p)| a * (w * t + p).sin()).sum()
    };
    let b0_fn = move |t: f64| eval(&b0, t);
    let bp_fn = move |t: f64| eval(&bp, t);
    let source = move |t: f64, x: f64| -> f64 {
        time_part
            .iter()
            .zip(&space)
            .enumerate()
            .map(|(m, ((a, w, p), (c, s)))| {
                let mx = m as f64 * x;
                a * (w * t + p).sin() * (c * mx.cos() + s * mx.sin())
            })
            .sum()
    };
    OneDProblem::new(Box::new(b0_fn), Box::new(bp_fn), Box::new(source), modes, t_end)
}

/// Relative interior L2 mismatch of the two solvers on `count` random data
/// sets derived from `seed`.
pub fn equivalence_errors(seed: u64, count: usize, modes: usize, t_end: f64) -> Result<Vec<f64>> {
    (0..count as u64)
        .map(|i| {
            let p = random_problem(seed.wrapping_add(i), modes, t_end);
            relative_l2(&solve_modal(&p)?, &solve_delta_source(&p)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> Signal {
        Box::new(|_| 0.0)
    }

    #[test]
    fn zero_data_gives_zero() {
        let p = OneDProblem::new(zero(), zero(), Box::new(|_, _| 0.0), 8, 1.0);
        for s in [solve_modal(&p).unwrap(), solve_delta_source(&p).unwrap()] {
            assert!(s.values.iter().flatten().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn resonant_mode_one() {
        // f = cos(x) sin(t) drives only mode 1: w_1'' + w_1 = sin t gives
        // w_1 = (sin t - t cos t) / 2.
        let p = OneDProblem::new(zero(), zero(), Box::new(|t, x| x.cos() * t.sin()), 6, 4.0);
        let s = solve_modal(&p).unwrap();
        for (t, row) in s.times.iter().zip(&s.values) {
            let w1 = (t.sin() - t * t.cos()) / 2.0;
            for (x, v) in p.xs.iter().zip(row) {
                assert!((v - w1 * x.cos()).abs() < 1e-8, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn boundary_forcing_excites_every_mode() {
        // b0 = sin t: w_n'' + n^2 w_n = (2/pi) sin t, so
        // w_n = (2/pi) (n sin t - sin(n t)) / (n (n^2 - 1)) for n >= 2.
        let p = OneDProblem::new(Box::new(|t: f64| t.sin()), zero(), Box::new(|_, _| 0.0), 5, 3.0);
        let s = solve_delta_source(&p).unwrap();
        let t = *s.times.last().unwrap();
        let expected = |x: f64| -> f64 {
            let w0 = (t - t.sin()) / PI;
            let w1 = (t.sin() - t * t.cos()) / PI;
            let rest: f64 = (2..5)
                .map(|n| {
                    let nf = n as f64;
                    2.0 / PI * (nf * t.sin() - (nf * t).sin()) / (nf * (nf * nf - 1.0)) * (nf * x).cos()
                })
                .sum();
            w0 + w1 * x.cos() + rest
        };
        for (x, v) in p.xs.iter().zip(s.values.last().unwrap()) {
            assert!((v - expected(*x)).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn unstable_step_rejected() {
        let mut p = OneDProblem::new(zero(), zero(), Box::new(|_, _| 0.0), 32, 1.0);
        p.dt = 0.1;
        assert!(matches!(solve_modal(&p), Err(Error::Stability(_))));
    }
}
