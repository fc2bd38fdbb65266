//! Start-up transients: decay of the membrane relaxation terms, the transient
//! pressure they radiate, and the time after which the quasi-stationary
//! description is accurate to the coupling strength.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{membrane_eigenfunction, End, MaterialParams, MembraneMode, ModeBasis, Stimulus};
use crate::perturbation::{
    pressure_amplitude_with_rate, FieldSnapshot, Oscillator, QuasiStationary, Regime,
};

/// Transient coupling strength `g e^{-alpha t}`.
pub fn transient_coupling(mat: &MaterialParams, t: f64) -> f64 {
    mat.coupling() * (-mat.alpha * t).exp()
}

/// `T_eq = -ln(g) / alpha`, where the transient coupling drops to `g^2`.
pub fn relaxation_time(mat: &MaterialParams) -> Result<f64> {
    let g = mat.coupling();
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::domain(format!("coupling must lie in (0, 1), got {g}")));
    }
    if mat.alpha.is_nan() || mat.alpha <= 0.0 {
        return Err(Error::domain(format!("damping must be > 0, got {}", mat.alpha)));
    }
    Ok(-g.ln() / mat.alpha)
}

/// `t_k(t) = C(t) + (alpha + i omega) S(t)` with the membrane envelope pair
/// (`cos(w_r t)`, `sin(w_r t)/w_r` and their continuations).
pub fn relaxation_function(mat: &MaterialParams, k: &MembraneMode, stim: &Stimulus, t: f64) -> Complex64 {
    relaxation(&Oscillator::membrane(k, mat), stim.omega, t)
}

fn relaxation(osc: &Oscillator, omega: f64, t: f64) -> Complex64 {
    let (c, s) = osc.pair(t);
    Complex64::new(c + osc.alpha * s, omega * s)
}

/// Relaxation envelope `e^{-alpha t} t_k(t)`.
fn envelope(osc: &Oscillator, omega: f64, t: f64) -> Complex64 {
    relaxation(osc, omega, t) * (-osc.alpha * t).exp()
}

/// Total first-order amplitude `A (e^{i omega t} - e^{-alpha t} t_k(t))` of a
/// membrane mode with quasi-stationary amplitude `a`.
pub fn total_membrane_amplitude(
    a: Complex64,
    mat: &MaterialParams,
    k: &MembraneMode,
    stim: &Stimulus,
    t: f64,
) -> Complex64 {
    let osc = Oscillator::membrane(k, mat);
    a * (Complex64::from_polar(1.0, stim.omega * t) - envelope(&osc, stim.omega, t))
}

/// Membrane displacement including the start-up transient at a membrane point
/// (sector-local angle).
pub fn total_membrane(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    end: End,
    point: (f64, f64),
    t: f64,
) -> Result<Complex64> {
    let geom = basis.geometry();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in basis.membrane().iter().zip(qs.at(end)) {
        acc += total_membrane_amplitude(*a, mat, k, stim, t) * membrane_eigenfunction(geom, k, point)?;
    }
    Ok(acc)
}

/// Particular responses of `P'' + w_n^2 P` to the cos-like and sin-like
/// membrane envelopes, with their time derivatives:
/// `(Rc, Rs, Rc', Rs')`.
fn envelope_response(osc: &Oscillator, omega_n: f64, t: f64) -> Result<[f64; 4]> {
    let a = osc.alpha;
    let wn2 = omega_n * omega_n;
    let guard = |d: f64, scale: f64| -> Result<()> {
        if d.abs() < 1e-9 * scale {
            return Err(Error::Resonance(format!(
                "damped membrane frequency coincides with cavity frequency {omega_n}"
            )));
        }
        Ok(())
    };
    match osc.regime() {
        Regime::Underdamped(w) => {
            let s = Complex64::new(-a, w);
            let d = s * s + wn2;
            guard(d.norm(), s.norm_sqr() + wn2)?;
            let e = Complex64::from_polar((-a * t).exp(), w * t) / d;
            let ed = s * e;
            Ok([e.re, e.im / w, ed.re, ed.im / w])
        }
        Regime::Overdamped(k) => {
            let (sp, sm) = (-a + k, -a - k);
            let (dp, dm) = (sp * sp + wn2, sm * sm + wn2);
            guard(dp, sp * sp + wn2)?;
            guard(dm, sm * sm + wn2)?;
            let (ep, em) = ((sp * t).exp() / dp, (sm * t).exp() / dm);
            Ok([
                0.5 * (ep + em),
                (ep - em) / (2.0 * k),
                0.5 * (sp * ep + sm * em),
                (sp * ep - sm * em) / (2.0 * k),
            ])
        }
        Regime::Critical => {
            let d = a * a + wn2;
            guard(d, d.max(f64::MIN_POSITIVE))?;
            let e = (-a * t).exp();
            let rs = e * (t / d + 2.0 * a / (d * d));
            Ok([e / d, rs, -a * e / d, e / d - a * rs])
        }
    }
}

/// Particular transient pressure of cavity mode `i` forced by the membrane
/// relaxation terms, and its time derivative.
pub fn transient_pressure_with_rate(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    i: usize,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    let n = basis
        .cavity()
        .get(i)
        .ok_or_else(|| Error::invalid(format!("cavity mode index {i} out of range")))?;
    let omega_n = n.omega(mat.c);
    let iw = Complex64::new(mat.alpha, stim.omega);
    let mut p = Complex64::new(0.0, 0.0);
    let mut pd = Complex64::new(0.0, 0.0);
    for (j, k) in basis.membrane().iter().enumerate() {
        let osc = Oscillator::membrane(k, mat);
        let w2 = osc.reduced_sq();
        let a = osc.alpha;
        let c_even = Complex64::new(a * a - w2, 0.0) - iw * (2.0 * a);
        let c_odd = iw * (a * a - w2) + 2.0 * a * w2;
        let [rc, rs, rcd, rsd] = envelope_response(&osc, omega_n, t)?;
        let w = qs.pair_weight(basis, i, j);
        p += w * (c_even * rc + c_odd * rs);
        pd += w * (c_even * rcd + c_odd * rsd);
    }
    let scale = -mat.rho0 * mat.c * mat.c;
    Ok((p * scale, pd * scale))
}

/// Transient pressure amplitude of cavity mode `i`; decays like `e^{-alpha t}`.
pub fn transient_pressure(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    i: usize,
    t: f64,
) -> Result<Complex64> {
    Ok(transient_pressure_with_rate(basis, mat, stim, qs, i, t)?.0)
}

/// Total first-order pressure amplitude of cavity mode `i`: quasi-stationary
/// part, transient part, and the free oscillation that restores zero initial
/// pressure and pressure rate.
pub fn total_pressure_amplitude(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    i: usize,
    t: f64,
) -> Result<Complex64> {
    let (p_qs, _) = pressure_amplitude_with_rate(basis, mat, stim, qs, i, t)?;
    let (p_tr, _) = transient_pressure_with_rate(basis, mat, stim, qs, i, t)?;
    let (p0, pd0) = transient_pressure_with_rate(basis, mat, stim, qs, i, 0.0)?;
    let (c, s) = Oscillator::cavity(&basis.cavity()[i], mat.c).pair(t);
    Ok(p_qs + p_tr - (p0 * c + pd0 * s))
}

/// Modal amplitudes of the total first-order solution at time `t`.
pub fn closed_form_snapshot(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    t: f64,
) -> Result<FieldSnapshot> {
    let mut snap = FieldSnapshot::zeros(basis, t);
    for i in 0..basis.cavity().len() {
        snap.pressure[i] = total_pressure_amplitude(basis, mat, stim, qs, i, t)?;
    }
    for (j, k) in basis.membrane().iter().enumerate() {
        snap.membrane0[j] = total_membrane_amplitude(qs.membrane0[j], mat, k, stim, t);
        snap.membrane_l[j] = total_membrane_amplitude(qs.membrane_l[j], mat, k, stim, t);
    }
    Ok(snap)
}

/// Unit-amplitude decomposition `e^{i omega t} - e^{-alpha t} t_k(t)` of one
/// membrane mode on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientProfile {
    pub times: Vec<f64>,
    pub harmonic: Vec<Complex64>,
    pub transient: Vec<Complex64>,
    pub total: Vec<Complex64>,
    pub relaxation_time: f64,
}

impl TransientProfile {
    pub fn new(mat: &MaterialParams, k: &MembraneMode, stim: &Stimulus, times: &[f64]) -> Result<Self> {
        let osc = Oscillator::membrane(k, mat);
        let harmonic: Vec<Complex64> = times.iter().map(|&t| Complex64::from_polar(1.0, stim.omega * t)).collect();
        let transient: Vec<Complex64> = times.iter().map(|&t| envelope(&osc, stim.omega, t)).collect();
        let total = harmonic.iter().zip(&transient).map(|(h, e)| h - e).collect();
        Ok(Self {
            times: times.to_vec(),
            harmonic,
            transient,
            total,
            relaxation_time: relaxation_time(mat)?,
        })
    }

    /// First sampled time after which `|total - harmonic| < threshold` at every
    /// later sample.
    pub fn settling_time(&self, threshold: f64) -> Option<f64> {
        let last_bad = self
            .total
            .iter()
            .zip(&self.harmonic)
            .rposition(|(t, h)| (t - h).norm() >= threshold);
        match last_bad {
            None => self.times.first().copied(),
            Some(j) => self.times.get(j + 1).copied(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Preset, Truncation};

    fn material(alpha: f64) -> MaterialParams {
        MaterialParams { c: 343.0, c_m: 5.0, rho0: 1.2, rho_m: 1200.0, thickness: 1e-5, alpha }
    }

    #[test]
    fn relaxation_time_values() {
        assert!((relaxation_time(&material(2611.0)).unwrap() - 2.6457e-3).abs() < 1e-7);
        assert!((relaxation_time(&material(347.0)).unwrap() - 1.9907e-2).abs() < 1e-6);
        let m = MaterialParams { rho0: 1.0, rho_m: std::f64::consts::E, alpha: 1.0, ..material(1.0) };
        assert!((relaxation_time(&m).unwrap() - 1.0).abs() < 1e-15);
        let bad = MaterialParams { rho_m: 1.0, ..material(1.0) };
        assert!(relaxation_time(&bad).is_err());
    }

    #[test]
    fn coupling_at_relaxation_time_is_squared() {
        let m = material(2611.0);
        let t = relaxation_time(&m).unwrap();
        assert!((transient_coupling(&m, t) - 1e-6).abs() < 1e-18);
        assert_eq!(transient_coupling(&m, 0.0), m.coupling());
    }

    #[test]
    fn relaxation_function_limits() {
        let osc = Oscillator::new(0.0, 25.0);
        for t in [0.0, 0.4, 1.3] {
            let v = relaxation(&osc, 0.0, t);
            assert!((v - Complex64::new((5.0 * t).cos(), 0.0)).norm() < 1e-15);
        }
        let osc = Oscillator::new(3.0, 4.0);
        assert_eq!(relaxation(&osc, 2.0, 0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn envelope_response_solves_forced_equation() {
        let wn = 7.0;
        for osc in [Oscillator::new(0.8, 30.0), Oscillator::new(4.0, 9.0), Oscillator::new(3.0, 9.0)] {
            let h = 1e-3;
            let t = 0.9;
            let f = |s: f64| envelope_response(&osc, wn, s).unwrap();
            let (m, z, p) = (f(t - h), f(t), f(t + h));
            let (c, s) = osc.pair(t);
            let e = (-osc.alpha * t).exp();
            for (idx, forcing) in [(0, e * c), (1, e * s)] {
                let d2 = (m[idx] - 2.0 * z[idx] + p[idx]) / (h * h);
                assert!((d2 + wn * wn * z[idx] - forcing).abs() < 1e-5, "{osc:?} idx={idx}");
                let d1 = (p[idx] - m[idx]) / (2.0 * h);
                assert!((d1 - z[idx + 2]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn total_pressure_starts_from_rest() {
        let p = Preset::gecko().unwrap();
        let t = Truncation { cavity_n1: 2, cavity_n2: 1, cavity_n3: 2, membrane_k1: 2, membrane_k2: 2 };
        let b = ModeBasis::new(p.geometry, t).unwrap();
        let qs = QuasiStationary::new(&b, &p.material, &p.stimulus);
        for i in 0..b.cavity().len() {
            let v = total_pressure_amplitude(&b, &p.material, &p.stimulus, &qs, i, 0.0).unwrap();
            let later = total_pressure_amplitude(&b, &p.material, &p.stimulus, &qs, i, 1e-3).unwrap();
            assert!(v.norm() <= 1e-10 * later.norm().max(1e-300));
        }
    }

    #[test]
    fn settling_time_picks_last_violation() {
        let prof = TransientProfile {
            times: vec![0.0, 1.0, 2.0, 3.0],
            harmonic: vec![Complex64::new(0.0, 0.0); 4],
            transient: vec![],
            total: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.01, 0.0),
            ],
            relaxation_time: 0.0,
        };
        assert_eq!(prof.settling_time(0.1), Some(3.0));
        assert_eq!(prof.settling_time(2.0), Some(0.0));
        assert_eq!(prof.settling_time(0.001), None);
    }
}
