use crate::geometry::{CavityMode, MaterialParams, MembraneMode};

/// Damped oscillator `y'' + 2 alpha y' + stiffness y = f`.
///
/// The undamped-envelope pair `C(t), S(t)` is `cos(w t), sin(w t)/w` with
/// `w^2 = stiffness - alpha^2`, continued to `cosh, sinh/k` when `w^2 < 0` and
/// to `1, t` when `w^2 = 0`. The Green's function is `e^{-alpha t} S(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub alpha: f64,
    pub stiffness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Underdamped(f64),
    Critical,
    Overdamped(f64),
}

impl Oscillator {
    pub fn new(alpha: f64, stiffness: f64) -> Self {
        Self { alpha, stiffness }
    }

    /// Undamped cavity kernel `G_n` with `stiffness = omega_n^2`.
    pub fn cavity(n: &CavityMode, c: f64) -> Self {
        Self::new(0.0, -c * c * n.lambda)
    }

    /// Damped membrane kernel `H_k`.
    pub fn membrane(k: &MembraneMode, mat: &MaterialParams) -> Self {
        Self::new(mat.alpha, k.stiffness(mat.c_m))
    }

    /// Reduced frequency squared `stiffness - alpha^2`.
    pub fn reduced_sq(&self) -> f64 {
        self.stiffness - self.alpha * self.alpha
    }

    pub fn regime(&self) -> Regime {
        let w2 = self.reduced_sq();
        if w2 > 0.0 {
            Regime::Underdamped(w2.sqrt())
        } else if w2 < 0.0 {
            Regime::Overdamped((-w2).sqrt())
        } else {
            Regime::Critical
        }
    }

    /// Oscillation period `2 pi / w` of an underdamped oscillator.
    pub fn period(&self) -> Option<f64> {
        match self.regime() {
            Regime::Underdamped(w) => Some(std::f64::consts::TAU / w),
            _ => None,
        }
    }

    /// `(C(t), S(t))`.
    pub fn pair(&self, t: f64) -> (f64, f64) {
        match self.regime() {
            Regime::Underdamped(w) => {
                let (s, c) = (w * t).sin_cos();
                (c, s / w)
            }
            Regime::Overdamped(k) => ((k * t).cosh(), (k * t).sinh() / k),
            Regime::Critical => (1.0, t),
        }
    }

    /// Green's function `Theta(t) e^{-alpha t} S(t)`.
    pub fn green(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        (-self.alpha * t).exp() * self.pair(t).1
    }

    /// Time derivative of [`Oscillator::green`] for `t >= 0`.
    pub fn green_dot(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let (c, s) = self.pair(t);
        (-self.alpha * t).exp() * (c - self.alpha * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(o: &Oscillator, t: f64) -> f64 {
        // Fourth-order central differences.
        let h = 1e-3 / (o.stiffness.abs().sqrt() + o.alpha + 1.0);
        let g = |s| o.green(s);
        let (m2, m1, z, p1, p2) = (g(t - 2.0 * h), g(t - h), g(t), g(t + h), g(t + 2.0 * h));
        let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        d2 + 2.0 * o.alpha * d1 + o.stiffness * g(t)
    }

    #[test]
    fn kernels_solve_their_equations() {
        for o in [
            Oscillator::new(0.0, 4.0),
            Oscillator::new(0.0, 0.0),
            Oscillator::new(0.5, 9.0),
            Oscillator::new(3.0, 4.0),
            Oscillator::new(2.0, 4.0),
        ] {
            assert_eq!(o.green(0.0), 0.0);
            assert!((o.green_dot(0.0) - 1.0).abs() < 1e-15);
            for t in [0.3, 1.1, 2.7] {
                let r = residual(&o, t);
                assert!(r.abs() < 1e-8, "{o:?} t={t}: {r}");
            }
        }
    }

    #[test]
    fn causal() {
        let o = Oscillator::new(0.1, 1.0);
        assert_eq!(o.green(-0.5), 0.0);
        assert_eq!(o.green_dot(-0.5), 0.0);
    }
}
