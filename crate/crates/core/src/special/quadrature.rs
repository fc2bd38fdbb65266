use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 2;
pub const MAX_NODES: usize = 512;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes mapped onto `[a, b]` paired with scaled weights.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Standard `n`-point Gauss-Legendre rule, `2 <= n <= 512`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if !(MIN_NODES..=MAX_NODES).contains(&n) {
        return Err(Error::invalid(format!(
            "Gauss-Legendre node count must lie in [{MIN_NODES}, {MAX_NODES}], got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

pub(crate) fn cached_rule(n: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(gauss_legendre(n).expect("node count in range")))
        .clone()
}

/// Node counts tried by the converged integrators: 64, 128, 256, 512.
const DOUBLING: [usize; 4] = [64, 128, 256, 512];

/// Gauss-Legendre integral over `[a, b]`, doubling the node count from 64
/// until successive values agree to `tol` times the integral of `|f|`.
pub fn integrate_converged<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut previous: Option<f64> = None;
    for &n in &DOUBLING {
        let rule = cached_rule(n);
        let (mut value, mut magnitude) = (0.0, 0.0);
        for (x, w) in rule.mapped(a, b) {
            let fx = f(x);
            value += w * fx;
            magnitude += w * fx.abs();
        }
        if let Some(prev) = previous {
            if (value - prev).abs() <= tol * magnitude.max(f64::MIN_POSITIVE) {
                return Ok(value);
            }
        }
        previous = Some(value);
    }
    Err(Error::Quadrature(format!(
        "integral over [{a}, {b}] not converged to {tol} with {MAX_NODES} nodes"
    )))
}

pub fn integrate_converged_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    let mut previous: Option<Complex64> = None;
    for &n in &DOUBLING {
        let rule = cached_rule(n);
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (x, w) in rule.mapped(a, b) {
            let fx = f(x);
            value += fx * w;
            magnitude += w * fx.norm();
        }
        if let Some(prev) = previous {
            if (value - prev).norm() <= tol * magnitude.max(f64::MIN_POSITIVE) {
                return Ok(value);
            }
        }
        previous = Some(value);
    }
    Err(Error::Quadrature(format!(
        "complex integral over [{a}, {b}] not converged to {tol} with {MAX_NODES} nodes"
    )))
}
