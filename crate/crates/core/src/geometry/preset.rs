use std::f64::consts::PI;

use super::{CavityGeometry, MaterialParams, Stimulus};
use crate::error::{Error, Result};
use crate::special::{find_zeros, BesselOrder};

pub const PRESET_NAMES: [&str; 2] = ["gecko", "varanus"];

const SOUND_SPEED: f64 = 343.0;
const AIR_DENSITY: f64 = 1.2;
const MEMBRANE_DENSITY: f64 = 1200.0;
const THICKNESS: f64 = 1e-5;

/// Named parameter bundle for one animal.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub geometry: CavityGeometry,
    pub material: MaterialParams,
    pub stimulus: Stimulus,
    /// Fundamental membrane frequency `omega_11 / 2 pi`, Hz.
    pub fundamental_hz: f64,
    /// Default simulation window, s.
    pub window: f64,
}

impl Preset {
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gecko" => Self::gecko(),
            "varanus" => Self::varanus(),
            other => Err(Error::invalid(format!(
                "unknown preset '{other}', expected one of {PRESET_NAMES:?}"
            ))),
        }
    }

    /// Gecko gekko.
    pub fn gecko() -> Result<Self> {
        Self::build("gecko", 0.022, 0.0066, 0.0026, 750.0, 2611.0, 1050.0, 5e-3)
    }

    /// Varanus salvator.
    pub fn varanus() -> Result<Self> {
        Self::build("varanus", 0.0155, 0.006, 0.0026, 200.0, 347.0, 550.0, 25e-3)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        name: &'static str,
        length: f64,
        a_cyl: f64,
        a_tymp: f64,
        freq: f64,
        alpha: f64,
        fundamental_hz: f64,
        window: f64,
    ) -> Result<Self> {
        let geometry = CavityGeometry::new(length, a_cyl, a_tymp, PI / 30.0)?;
        let omega = 2.0 * PI * freq;
        let material = MaterialParams {
            c: SOUND_SPEED,
            c_m: membrane_speed_for(&geometry, fundamental_hz)?,
            rho0: AIR_DENSITY,
            rho_m: MEMBRANE_DENSITY,
            thickness: THICKNESS,
            alpha,
        };
        let stimulus = Stimulus { p0: 1.0, omega, k_axial: omega / SOUND_SPEED };
        Ok(Self { name, geometry, material, stimulus, fundamental_hz, window })
    }
}

/// Membrane wave speed putting the undamped `(1,1)` mode at `freq_hz`.
pub fn membrane_speed_for(geom: &CavityGeometry, freq_hz: f64) -> Result<f64> {
    let nu11 = find_zeros(BesselOrder::sector(1, geom.beta)?, 1)?[0];
    Ok(2.0 * PI * freq_hz * geom.a_tymp / nu11)
}
