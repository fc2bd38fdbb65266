//! First order in the coupling strength: quasi-stationary membrane response,
//! resonance functions, the driven cavity pressure and the Picard iteration
//! that reproduces them by direct time-domain convolution.

mod duhamel;
mod kernel;
mod picard;
mod snapshot;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    unit_projection, CavityGeometry, CavityMode, End, MaterialParams, MembraneMode, ModeBasis, Stimulus,
};

pub use duhamel::duhamel;
pub use kernel::{Oscillator, Regime};
pub use picard::{
    membrane_response, picard_iterate, pressure_response, required_step, FieldHistory, MembraneHistory,
    TimeGrid,
};
pub use snapshot::{evaluate_membrane, evaluate_pressure, FieldSnapshot};

/// Relative width `|omega^2 - omega_n^2| < RESONANCE_GUARD omega^2` inside which
/// the resonance factor switches to its cancellation-free form.
pub const RESONANCE_GUARD: f64 = 1e-6;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Membrane denominator `-omega^2 - c_m^2 gamma + 2 i alpha omega`.
pub fn membrane_denominator(k: &MembraneMode, mat: &MaterialParams, omega: f64) -> Complex64 {
    Complex64::new(k.stiffness(mat.c_m) - omega * omega, 2.0 * mat.alpha * omega)
}

/// Quasi-stationary displacement amplitude (m) of membrane mode `k` at `end`.
pub fn membrane_amplitude_qs(
    geom: &CavityGeometry,
    mat: &MaterialParams,
    stim: &Stimulus,
    k: &MembraneMode,
    end: End,
) -> Result<Complex64> {
    let projection = unit_projection(geom, k)?;
    Ok(qs_amplitude(geom, mat, stim, k, projection, end))
}

fn qs_amplitude(
    geom: &CavityGeometry,
    mat: &MaterialParams,
    stim: &Stimulus,
    k: &MembraneMode,
    projection: f64,
    end: End,
) -> Complex64 {
    -stim.end_pressure(geom, end) * (mat.load_factor() * projection) / membrane_denominator(k, mat, stim.omega)
}

/// Quasi-stationary amplitudes of every membrane mode in a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStationary {
    pub membrane0: Vec<Complex64>,
    pub membrane_l: Vec<Complex64>,
}

impl QuasiStationary {
    pub fn new(basis: &ModeBasis, mat: &MaterialParams, stim: &Stimulus) -> Self {
        let geom = basis.geometry();
        let amp = |end| {
            basis
                .membrane()
                .iter()
                .enumerate()
                .map(|(j, k)| qs_amplitude(geom, mat, stim, k, basis.unit_projection(j), end))
                .collect()
        };
        Self { membrane0: amp(End::Zero), membrane_l: amp(End::Length) }
    }

    pub fn at(&self, end: End) -> &[Complex64] {
        match end {
            End::Zero => &self.membrane0,
            End::Length => &self.membrane_l,
        }
    }

    /// `W_{n,k} = A_{0,k} <n|k>_0 + A_{L,k} <n|k>_L` for cavity mode `i`.
    pub fn pair_weight(&self, basis: &ModeBasis, i: usize, j: usize) -> Complex64 {
        self.membrane0[j] * basis.overlap(i, j, End::Zero) + self.membrane_l[j] * basis.overlap(i, j, End::Length)
    }

    /// `S_n = sum_k W_{n,k}`, the projected membrane displacement.
    pub fn source(&self, basis: &ModeBasis, i: usize) -> Complex64 {
        (0..basis.membrane().len()).map(|j| self.pair_weight(basis, i, j)).sum()
    }
}

/// `R_n(t) = cos(w_n t) + i omega sin(w_n t) / w_n`, and `1 + i omega t` for
/// `w_n = 0`.
pub fn resonance_function(n: &CavityMode, mat: &MaterialParams, stim: &Stimulus, t: f64) -> Complex64 {
    resonance(n.omega(mat.c), stim.omega, t)
}

pub(crate) fn resonance(omega_n: f64, omega: f64, t: f64) -> Complex64 {
    if omega_n == 0.0 {
        return Complex64::new(1.0, omega * t);
    }
    let (s, c) = (omega_n * t).sin_cos();
    Complex64::new(c, omega * s / omega_n)
}

/// `(e^z - 1) / z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)))
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `Q(t) = (e^{i omega t} - R_n(t)) / (omega^2 - omega_n^2)` and its time
/// derivative. Finite at `omega = omega_n`.
pub fn resonance_factor(omega: f64, omega_n: f64, t: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, omega * t);
    let denom = omega * omega - omega_n * omega_n;
    if omega_n == 0.0 {
        let q = (e - Complex64::new(1.0, omega * t)) / denom;
        let qd = (i() * omega * (e - 1.0)) / denom;
        return (q, qd);
    }
    if denom.abs() >= RESONANCE_GUARD * omega * omega {
        let (s, c) = (omega_n * t).sin_cos();
        let r = Complex64::new(c, omega * s / omega_n);
        let r_dot = Complex64::new(-omega_n * s, omega * c);
        return ((e - r) / denom, (i() * omega * e - r_dot) / denom);
    }
    // Partial fractions of the two poles, each written as t phi1(i delta t).
    let a = phi1(i() * ((omega_n - omega) * t));
    let b = phi1(-i() * ((omega_n + omega) * t));
    let q = i() * t * e * (a - b) / (2.0 * omega_n);
    let qd = -0.5 * t * e * (a + b);
    (q, qd)
}

fn check_basis(basis: &ModeBasis, qs: &QuasiStationary, i: usize) -> Result<()> {
    if basis.membrane().is_empty() || basis.cavity().is_empty() {
        return Err(Error::EmptyTruncation("pressure needs cavity and membrane modes".into()));
    }
    if qs.membrane0.len() != basis.membrane().len() || qs.membrane_l.len() != basis.membrane().len() {
        return Err(Error::invalid("membrane amplitudes do not match the basis"));
    }
    if i >= basis.cavity().len() {
        return Err(Error::invalid(format!("cavity mode index {i} out of range")));
    }
    Ok(())
}

/// Quasi-stationary cavity pressure amplitude (Pa m^{3/2}) of cavity mode `i`
/// driven by the membranes, with zero initial data.
pub fn pressure_amplitude(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    i: usize,
    t: f64,
) -> Result<Complex64> {
    Ok(pressure_amplitude_with_rate(basis, mat, stim, qs, i, t)?.0)
}

/// [`pressure_amplitude`] and its time derivative.
pub fn pressure_amplitude_with_rate(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    i: usize,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    check_basis(basis, qs, i)?;
    let n = &basis.cavity()[i];
    let pre = qs.source(basis, i) * (mat.rho0 * mat.c * mat.c * stim.omega * stim.omega);
    let (q, qd) = resonance_factor(stim.omega, n.omega(mat.c), t);
    Ok((pre * q, pre * qd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Preset, Truncation};

    #[test]
    fn resonance_function_initial_identities() {
        for (wn, w) in [(0.0, 3.0), (2.0, 3.0), (3.0, 3.0)] {
            let r = resonance(wn, w, 0.0);
            assert_eq!(r, Complex64::new(1.0, 0.0));
            let (q, qd) = resonance_factor(w, wn, 0.0);
            assert_eq!(q.norm(), 0.0);
            assert!(qd.norm() < 1e-15);
        }
        assert_eq!(resonance(0.0, 2.0, 1.5), Complex64::new(1.0, 3.0));
    }

    #[test]
    fn guarded_and_direct_branches_agree() {
        let (w, t) = (1000.0, 2.3e-3);
        for rel in [1e-3, 1e-5, 2e-6] {
            let wn = w * (1.0 + rel);
            let direct = {
                let r = resonance(wn, w, t);
                (Complex64::from_polar(1.0, w * t) - r) / (w * w - wn * wn)
            };
            let a = phi1(i() * ((wn - w) * t));
            let b = phi1(-i() * ((wn + w) * t));
            let series = i() * t * Complex64::from_polar(1.0, w * t) * (a - b) / (2.0 * wn);
            assert!((direct - series).norm() < 1e-9 * series.norm(), "rel={rel}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for (w, wn) in [(10.0, 0.0), (10.0, 7.0), (10.0, 10.0)] {
            let t = 0.37;
            let h = 1e-6;
            let fd = (resonance_factor(w, wn, t + h).0 - resonance_factor(w, wn, t - h).0) / (2.0 * h);
            let (_, qd) = resonance_factor(w, wn, t);
            assert!((fd - qd).norm() < 1e-7 * qd.norm().max(1e-3), "wn={wn}");
        }
    }

    #[test]
    fn qs_amplitude_scales_with_stimulus() {
        let p = Preset::gecko().unwrap();
        let b = ModeBasis::new(
            p.geometry,
            Truncation { cavity_n1: 1, cavity_n2: 0, cavity_n3: 1, membrane_k1: 2, membrane_k2: 2 },
        )
        .unwrap();
        let a = QuasiStationary::new(&b, &p.material, &p.stimulus);
        let s2 = Stimulus { p0: 2.0 * p.stimulus.p0, ..p.stimulus };
        let a2 = QuasiStationary::new(&b, &p.material, &s2);
        for (x, y) in a.membrane0.iter().zip(&a2.membrane0) {
            assert_eq!(*y, *x * 2.0);
        }
        let direct = membrane_amplitude_qs(&p.geometry, &p.material, &p.stimulus, &b.membrane()[0], End::Zero).unwrap();
        assert!((direct - a.membrane0[0]).norm() <= 1e-14 * direct.norm());
        let d = membrane_denominator(&b.membrane()[0], &p.material, p.stimulus.omega);
        assert!(d.norm() >= 2.0 * p.material.alpha * p.stimulus.omega);
    }
}
