//! Cylinder, membranes, materials and stimulus, plus the cavity and membrane
//! eigenbases built on them.

mod basis;
mod modes;
mod preset;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use basis::{ModeBasis, Truncation};
pub use modes::{
    cavity_eigenfunction, cavity_eigenvalue, cavity_mode, membrane_eigenfunction,
    membrane_eigenvalue, membrane_mode, overlap_full, overlap_radial, unit_projection, CavityMode,
    MembraneMode,
};
pub(crate) use modes::{cavity_lambda, radial_overlap_raw};
pub use preset::{membrane_speed_for, Preset, PRESET_NAMES};

/// End cap of the cylinder carrying a membrane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    /// `x = 0`
    Zero,
    /// `x = L`
    Length,
}

impl End {
    pub const BOTH: [End; 2] = [End::Zero, End::Length];

    pub fn label(self) -> &'static str {
        match self {
            End::Zero => "0",
            End::Length => "L",
        }
    }
}

/// Cylinder of length `length` and radius `a_cyl` with a membrane sector of
/// radius `a_tymp` and half-gap angle `beta` at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    pub length: f64,
    pub a_cyl: f64,
    pub a_tymp: f64,
    pub beta: f64,
}

impl CavityGeometry {
    pub fn new(length: f64, a_cyl: f64, a_tymp: f64, beta: f64) -> Result<Self> {
        let g = Self { length, a_cyl, a_tymp, beta };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.length, self.a_cyl, self.a_tymp, self.beta]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("geometry values must be finite"));
        }
        if self.length <= 0.0 {
            return Err(Error::invalid(format!("cavity length must be > 0, got {}", self.length)));
        }
        if !(self.a_tymp > 0.0 && self.a_tymp <= self.a_cyl) {
            return Err(Error::invalid(format!(
                "need 0 < a_tymp <= a_cyl, got a_tymp={} a_cyl={}",
                self.a_tymp, self.a_cyl
            )));
        }
        if !(0.0..PI).contains(&self.beta) {
            return Err(Error::invalid(format!("beta must lie in [0, pi), got {}", self.beta)));
        }
        Ok(())
    }

    /// Angular span `2 pi - 2 beta` of the membrane sector.
    pub fn sector_span(&self) -> f64 {
        2.0 * PI - 2.0 * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Speed of sound in air, m/s.
    pub c: f64,
    /// Membrane wave speed, m/s.
    pub c_m: f64,
    pub rho0: f64,
    pub rho_m: f64,
    /// Membrane thickness, m.
    pub thickness: f64,
    /// Membrane damping, 1/s.
    pub alpha: f64,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c, self.c_m, self.rho0, self.rho_m, self.thickness, self.alpha];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid(format!("material parameters must be finite and > 0: {self:?}")));
        }
        let g = self.coupling();
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::invalid(format!("coupling rho0/rho_m must lie in (0, 1), got {g}")));
        }
        Ok(())
    }

    /// Coupling strength `rho0 / rho_m`.
    pub fn coupling(&self) -> f64 {
        self.rho0 / self.rho_m
    }

    /// Prefactor `rho0 / (rho_m d)` multiplying the pressure load on a membrane.
    pub fn load_factor(&self) -> f64 {
        self.coupling() / (self.rho0 * self.thickness)
    }
}

/// Plane wave `p0 exp(i omega t)` hitting both end caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stimulus {
    pub p0: f64,
    pub omega: f64,
    pub k_axial: f64,
}

impl Stimulus {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::invalid(format!("stimulus omega must be > 0, got {}", self.omega)));
        }
        if !self.p0.is_finite() || !self.k_axial.is_finite() {
            return Err(Error::invalid("stimulus p0 and k_axial must be finite"));
        }
        Ok(())
    }

    /// Complex pressure amplitude at an end cap: phase `+kL/2` at `x = 0` and
    /// `-kL/2` at `x = L`.
    pub fn end_pressure(&self, geom: &CavityGeometry, end: End) -> Complex64 {
        let phase = 0.5 * self.k_axial * geom.length;
        let sign = match end {
            End::Zero => 1.0,
            End::Length => -1.0,
        };
        Complex64::from_polar(self.p0, sign * phase)
    }
}
