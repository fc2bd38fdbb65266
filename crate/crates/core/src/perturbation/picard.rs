use std::f64::consts::TAU;

use num_complex::Complex64;

use super::duhamel::Propagator;
use super::kernel::Oscillator;
use super::snapshot::FieldSnapshot;
use crate::error::{Error, Result};
use crate::geometry::{End, MaterialParams, ModeBasis, Stimulus, Truncation};

/// Minimum number of samples per oscillation period.
pub const SAMPLES_PER_PERIOD: f64 = 20.0;

/// Uniform grid `t_j = j * step`, `j = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    /// `samples` points spanning `[0, window]`.
    pub fn new(window: f64, samples: usize) -> Result<Self> {
        if !(window > 0.0 && window.is_finite()) || samples < 4 {
            return Err(Error::invalid(format!(
                "time grid needs window > 0 and at least 4 samples, got {window} and {samples}"
            )));
        }
        Ok(Self { step: window / (samples - 1) as f64, len: samples })
    }

    /// Coarsest grid over `[0, window]` whose step does not exceed `max_step`.
    pub fn covering(window: f64, max_step: f64) -> Result<Self> {
        let intervals = (window / max_step).ceil().max(3.0) as usize;
        Self::new(window, intervals + 1)
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.time(j)).collect()
    }

    pub fn window(&self) -> f64 {
        self.time(self.len - 1)
    }
}

/// Largest step giving [`SAMPLES_PER_PERIOD`] samples per period of the
/// stimulus, every cavity mode and every underdamped membrane mode.
pub fn required_step(basis: &ModeBasis, mat: &MaterialParams, stim: &Stimulus) -> f64 {
    let mut fastest = stim.omega;
    for n in basis.cavity() {
        fastest = fastest.max(n.omega(mat.c));
    }
    for k in basis.membrane() {
        let w2 = Oscillator::membrane(k, mat).reduced_sq();
        if w2 > 0.0 {
            fastest = fastest.max(w2.sqrt());
        }
    }
    TAU / fastest / SAMPLES_PER_PERIOD
}

fn check_grid(basis: &ModeBasis, mat: &MaterialParams, stim: &Stimulus, grid: &TimeGrid) -> Result<()> {
    let limit = required_step(basis, mat, stim);
    if grid.step > limit * (1.0 + 1e-12) {
        return Err(Error::GridResolution(format!(
            "step {:.3e} s exceeds {:.3e} s ({SAMPLES_PER_PERIOD} samples per shortest period)",
            grid.step, limit
        )));
    }
    Ok(())
}

/// Amplitude histories on a time grid, indexed `[mode][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub grid: TimeGrid,
    pub truncation: Truncation,
    pub pressure: Vec<Vec<Complex64>>,
    pub membrane0: Vec<Vec<Complex64>>,
    pub membrane_l: Vec<Vec<Complex64>>,
}

impl FieldHistory {
    pub fn zeros(basis: &ModeBasis, grid: TimeGrid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len];
        Self {
            grid,
            truncation: *basis.truncation(),
            pressure: vec![z.clone(); basis.cavity().len()],
            membrane0: vec![z.clone(); basis.membrane().len()],
            membrane_l: vec![z; basis.membrane().len()],
        }
    }

    pub fn membrane(&self, end: End) -> &[Vec<Complex64>] {
        match end {
            End::Zero => &self.membrane0,
            End::Length => &self.membrane_l,
        }
    }

    pub fn snapshot(&self, j: usize) -> FieldSnapshot {
        let pick = |v: &[Vec<Complex64>]| v.iter().map(|s| s[j]).collect();
        FieldSnapshot {
            time: self.grid.time(j),
            truncation: self.truncation,
            pressure: pick(&self.pressure),
            membrane0: pick(&self.membrane0),
            membrane_l: pick(&self.membrane_l),
        }
    }
}

/// Membrane displacement and acceleration histories, indexed `[mode][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneHistory {
    pub displacement0: Vec<Vec<Complex64>>,
    pub displacement_l: Vec<Vec<Complex64>>,
    pub acceleration0: Vec<Vec<Complex64>>,
    pub acceleration_l: Vec<Vec<Complex64>>,
}

/// Membranes driven by the stimulus minus the cavity pressure `pressure`
/// (`None` for a silent cavity), starting at rest.
pub fn membrane_response(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    grid: &TimeGrid,
    pressure: Option<&[Vec<Complex64>]>,
) -> Result<MembraneHistory> {
    check_grid(basis, mat, stim, grid)?;
    let geom = basis.geometry();
    let load = mat.load_factor();
    let carrier: Vec<Complex64> = (0..grid.len).map(|j| Complex64::from_polar(1.0, stim.omega * grid.time(j))).collect();
    let mut out = MembraneHistory {
        displacement0: Vec::new(),
        displacement_l: Vec::new(),
        acceleration0: Vec::new(),
        acceleration_l: Vec::new(),
    };
    for end in End::BOTH {
        let p_end = stim.end_pressure(geom, end);
        for (j, k) in basis.membrane().iter().enumerate() {
            let external = p_end * basis.unit_projection(j);
            let mut force: Vec<Complex64> = carrier.iter().map(|e| -external * e * load).collect();
            if let Some(p) = pressure {
                // <k|p> = sum_n P_n conj(<n|k>) because Phi_k is real.
                for (i, series) in p.iter().enumerate() {
                    let w = basis.overlap(i, j, end).conj() * load;
                    for (f, v) in force.iter_mut().zip(series) {
                        *f += v * w;
                    }
                }
            }
            let osc = Oscillator::membrane(k, mat);
            let (u, ud) = Propagator::new(&osc, grid.step).solve(&force)?;
            let acc = force
                .iter()
                .zip(u.iter().zip(&ud))
                .map(|(f, (y, yd))| f - yd * (2.0 * osc.alpha) - y * osc.stiffness)
                .collect();
            match end {
                End::Zero => {
                    out.displacement0.push(u);
                    out.acceleration0.push(acc);
                }
                End::Length => {
                    out.displacement_l.push(u);
                    out.acceleration_l.push(acc);
                }
            }
        }
    }
    Ok(out)
}

/// Cavity pressure histories `rho0 c^2 int G_n(t - s) <n|u''(s)> ds` for given
/// membrane accelerations.
pub fn pressure_response(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    grid: &TimeGrid,
    acceleration0: &[Vec<Complex64>],
    acceleration_l: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>> {
    check_grid(basis, mat, stim, grid)?;
    let m = basis.membrane().len();
    if acceleration0.len() != m || acceleration_l.len() != m {
        return Err(Error::invalid("membrane histories do not match the basis"));
    }
    let scale = mat.rho0 * mat.c * mat.c;
    let mut out = Vec::with_capacity(basis.cavity().len());
    for (i, n) in basis.cavity().iter().enumerate() {
        let mut force = vec![Complex64::new(0.0, 0.0); grid.len];
        for j in 0..m {
            for (end, acc) in [(End::Zero, &acceleration0[j]), (End::Length, &acceleration_l[j])] {
                let w = basis.overlap(i, j, end) * scale;
                for (f, a) in force.iter_mut().zip(acc) {
                    *f += a * w;
                }
            }
        }
        let osc = Oscillator::cavity(n, mat.c);
        out.push(Propagator::new(&osc, grid.step).solve(&force)?.0);
    }
    Ok(out)
}

/// Picard iterate of the given order, starting from the all-zero state.
///
/// Each order first drives the membranes with the previous pressure and then
/// drives the cavity with the new membrane accelerations.
pub fn picard_iterate(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    grid: TimeGrid,
    order: u32,
) -> Result<FieldHistory> {
    if order > 2 {
        return Err(Error::invalid(format!("Picard order must be 0, 1 or 2, got {order}")));
    }
    check_grid(basis, mat, stim, &grid)?;
    let mut state = FieldHistory::zeros(basis, grid);
    for level in 1..=order {
        let feedback = (level > 1).then_some(state.pressure.as_slice());
        let membranes = membrane_response(basis, mat, stim, &grid, feedback)?;
        let pressure =
            pressure_response(basis, mat, stim, &grid, &membranes.acceleration0, &membranes.acceleration_l)?;
        state.pressure = pressure;
        state.membrane0 = membranes.displacement0;
        state.membrane_l = membranes.displacement_l;
    }
    Ok(state)
}
