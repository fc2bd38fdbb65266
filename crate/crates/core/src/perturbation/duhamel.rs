//! Zero-initial-data solutions of `y'' + 2 alpha y' + stiffness y = f` on a
//! uniform grid.
//!
//! Each step applies the exact two-by-two propagator of the homogeneous
//! oscillator and adds the Duhamel integral over the step with `f` replaced by
//! its cubic Lagrange interpolant on four neighbouring samples. The kernel is
//! treated exactly, so the only error is the interpolation of `f`.

use num_complex::Complex64;

use super::kernel::Oscillator;
use crate::error::{Error, Result};
use crate::special::cached_rule;

/// Sample offsets of the interpolation stencil relative to the left end of the
/// step: first step, interior steps, last step.
const STENCILS: [[i64; 4]; 3] = [[0, 1, 2, 3], [-1, 0, 1, 2], [-2, -1, 0, 1]];

pub(crate) struct Propagator {
    c: f64,
    c_dot: f64,
    g: f64,
    g_dot: f64,
    /// `int_0^h G(h - s) l_m(s) ds` per stencil.
    w: [[f64; 4]; 3],
    /// `int_0^h G'(h - s) l_m(s) ds` per stencil.
    w_dot: [[f64; 4]; 3],
}

fn lagrange(nodes: &[i64; 4], m: usize, x: f64) -> f64 {
    let xm = nodes[m] as f64;
    nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != m)
        .map(|(_, &xi)| (x - xi as f64) / (xm - xi as f64))
        .product()
}

impl Propagator {
    pub(crate) fn new(osc: &Oscillator, h: f64) -> Self {
        let g = osc.green(h);
        let g_dot = osc.green_dot(h);
        let rule = cached_rule(16);
        let mut w = [[0.0; 4]; 3];
        let mut w_dot = [[0.0; 4]; 3];
        for (s, nodes) in STENCILS.iter().enumerate() {
            for (sigma, weight) in rule.mapped(0.0, 1.0) {
                let lag_time = h - h * sigma;
                let (kernel, kernel_dot) = (osc.green(lag_time), osc.green_dot(lag_time));
                for m in 0..4 {
                    let l = lagrange(nodes, m, sigma) * weight * h;
                    w[s][m] += kernel * l;
                    w_dot[s][m] += kernel_dot * l;
                }
            }
        }
        Self {
            c: g_dot + 2.0 * osc.alpha * g,
            c_dot: -osc.stiffness * g,
            g,
            g_dot,
            w,
            w_dot,
        }
    }

    /// `(y, y')` at every grid point for forcing samples `f`.
    pub(crate) fn solve(&self, f: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let n = f.len();
        if n < 4 {
            return Err(Error::invalid(format!("time grid needs at least 4 samples, got {n}")));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut y = vec![zero; n];
        let mut yd = vec![zero; n];
        for j in 0..n - 1 {
            let s = if j == 0 {
                0
            } else if j + 2 < n {
                1
            } else {
                2
            };
            let mut acc = zero;
            let mut acc_dot = zero;
            for (m, &off) in STENCILS[s].iter().enumerate() {
                let fj = f[(j as i64 + off) as usize];
                acc += fj * self.w[s][m];
                acc_dot += fj * self.w_dot[s][m];
            }
            y[j + 1] = y[j] * self.c + yd[j] * self.g + acc;
            yd[j + 1] = y[j] * self.c_dot + yd[j] * self.g_dot + acc_dot;
        }
        Ok((y, yd))
    }
}

/// Convolution `int_0^t G(t - s) f(s) ds` of samples `f` spaced by `h`,
/// together with its time derivative.
pub fn duhamel(osc: &Oscillator, h: f64, f: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("time step must be > 0, got {h}")));
    }
    Propagator::new(osc, h).solve(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_forcing_of_undamped_oscillator() {
        // y'' + w^2 y = 1, y(0) = y'(0) = 0  =>  y = (1 - cos w t) / w^2.
        let w = 3.0;
        let osc = Oscillator::new(0.0, w * w);
        let h = 0.01;
        let f = vec![Complex64::new(1.0, 0.0); 401];
        let (y, yd) = duhamel(&osc, h, &f).unwrap();
        for (j, (v, d)) in y.iter().zip(&yd).enumerate() {
            let t = j as f64 * h;
            assert!((v.re - (1.0 - (w * t).cos()) / (w * w)).abs() < 1e-13);
            assert!((d.re - (w * t).sin() / w).abs() < 1e-13);
        }
    }

    #[test]
    fn harmonic_forcing_of_damped_oscillator() {
        // Compare with the closed form of the driven damped oscillator.
        let (alpha, k2, om) = (0.7, 16.0, 2.5);
        let osc = Oscillator::new(alpha, k2);
        let h = 2.0 * std::f64::consts::PI / 4.0_f64.max(om) / 20.0;
        let n = 600;
        let f: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, om * j as f64 * h)).collect();
        let (y, _) = duhamel(&osc, h, &f).unwrap();
        let a = 1.0 / Complex64::new(k2 - om * om, 2.0 * alpha * om);
        let wr = (k2 - alpha * alpha).sqrt();
        let exact = |t: f64| {
            let tk = Complex64::new((wr * t).cos(), 0.0) + Complex64::new(alpha, om) * ((wr * t).sin() / wr);
            a * (Complex64::from_polar(1.0, om * t) - tk * (-alpha * t).exp())
        };
        let scale = a.norm();
        for (j, v) in y.iter().enumerate() {
            let t = j as f64 * h;
            assert!((v - exact(t)).norm() < 5e-5 * scale, "t={t}");
        }
    }

    #[test]
    fn rejects_short_grids() {
        let osc = Oscillator::new(0.0, 1.0);
        assert!(duhamel(&osc, 0.1, &[Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(duhamel(&osc, 0.0, &[Complex64::new(1.0, 0.0); 8]).is_err());
    }
}
