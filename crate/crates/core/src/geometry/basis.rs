use num_complex::Complex64;

use super::modes::{
    assemble_overlap, build_cavity_mode, build_membrane_mode, radial_overlap_raw, unit_projection,
    CavityMode, MembraneMode,
};
use super::{CavityGeometry, End};
use crate::error::{Error, Result};
use crate::special::{find_extrema, find_zeros, BesselOrder};

/// Largest mode indices kept in the modal sums.
///
/// Cavity modes run over `n1 = 1..=cavity_n1`, `n2 = -cavity_n2..=cavity_n2`
/// and `n3 = 0..=cavity_n3`; membrane modes over `k1 = 1..=membrane_k1` and
/// `k2 = 1..=membrane_k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub cavity_n1: u32,
    pub cavity_n2: u32,
    pub cavity_n3: u32,
    pub membrane_k1: u32,
    pub membrane_k2: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { cavity_n1: 5, cavity_n2: 5, cavity_n3: 8, membrane_k1: 5, membrane_k2: 5 }
    }
}

impl Truncation {
    pub fn validate(&self) -> Result<()> {
        if self.cavity_n1 == 0 || self.membrane_k1 == 0 || self.membrane_k2 == 0 {
            return Err(Error::EmptyTruncation(format!(
                "radial and membrane indices count from 1: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn cavity_count(&self) -> usize {
        (self.cavity_n1 * (2 * self.cavity_n2 + 1) * (self.cavity_n3 + 1)) as usize
    }

    pub fn membrane_count(&self) -> usize {
        (self.membrane_k1 * self.membrane_k2) as usize
    }
}

/// Truncated cavity and membrane eigenbases with their cross overlaps.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    geometry: CavityGeometry,
    truncation: Truncation,
    cavity: Vec<CavityMode>,
    membrane: Vec<MembraneMode>,
    /// `<n|k>` at `x = 0`, row-major over (cavity, membrane).
    overlap0: Vec<Complex64>,
    unit: Vec<f64>,
}

impl ModeBasis {
    pub fn new(geometry: CavityGeometry, truncation: Truncation) -> Result<Self> {
        geometry.validate()?;
        truncation.validate()?;
        let t = truncation;

        let mut membrane = Vec::with_capacity(t.membrane_count());
        let mut zeros = Vec::with_capacity(t.membrane_k2 as usize);
        for k2 in 1..=t.membrane_k2 {
            let order = BesselOrder::sector(k2, geometry.beta)?;
            zeros.push((order.value(), find_zeros(order, t.membrane_k1 as usize)?));
        }
        for k1 in 1..=t.membrane_k1 {
            for k2 in 1..=t.membrane_k2 {
                let (q, roots) = &zeros[(k2 - 1) as usize];
                membrane.push(build_membrane_mode(&geometry, k1, k2, *q, roots[(k1 - 1) as usize])?);
            }
        }
        let unit = membrane
            .iter()
            .map(|k| unit_projection(&geometry, k))
            .collect::<Result<Vec<_>>>()?;

        let mut extrema = Vec::with_capacity(t.cavity_n2 as usize + 1);
        for m in 0..=t.cavity_n2 {
            extrema.push(find_extrema(BesselOrder::integer(m), t.cavity_n1 as usize)?);
        }
        // Radial overlaps depend on (n1, |n2|) only.
        let mut radial = vec![vec![0.0; membrane.len()]; extrema.len() * t.cavity_n1 as usize];
        for (m, roots) in extrema.iter().enumerate() {
            for (i1, &mu) in roots.iter().enumerate() {
                let row = &mut radial[m * t.cavity_n1 as usize + i1];
                for (j, k) in membrane.iter().enumerate() {
                    row[j] = radial_overlap_raw(&geometry, m as f64, mu, k.q, k.nu)?;
                }
            }
        }

        let mut cavity = Vec::with_capacity(t.cavity_count());
        let mut overlap0 = Vec::with_capacity(t.cavity_count() * membrane.len());
        let n2_max = t.cavity_n2 as i32;
        for n1 in 1..=t.cavity_n1 {
            for n2 in -n2_max..=n2_max {
                let m = n2.unsigned_abs() as usize;
                let mu = extrema[m][(n1 - 1) as usize];
                let row = &radial[m * t.cavity_n1 as usize + (n1 - 1) as usize];
                for n3 in 0..=t.cavity_n3 {
                    let n = build_cavity_mode(&geometry, n1, n2, n3, mu)?;
                    for (j, k) in membrane.iter().enumerate() {
                        overlap0.push(assemble_overlap(&geometry, &n, k, row[j], End::Zero));
                    }
                    cavity.push(n);
                }
            }
        }
        Ok(Self { geometry, truncation, cavity, membrane, overlap0, unit })
    }

    pub fn geometry(&self) -> &CavityGeometry {
        &self.geometry
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn cavity(&self) -> &[CavityMode] {
        &self.cavity
    }

    pub fn membrane(&self) -> &[MembraneMode] {
        &self.membrane
    }

    /// `<n|k>` on the given end cap for cavity mode `i` and membrane mode `j`.
    pub fn overlap(&self, i: usize, j: usize, end: End) -> Complex64 {
        self.overlap0[i * self.membrane.len() + j] * self.cavity[i].end_sign(end)
    }

    /// `int_Gamma Phi_j dS`.
    pub fn unit_projection(&self, j: usize) -> f64 {
        self.unit[j]
    }

    pub fn cavity_index(&self, n1: u32, n2: i32, n3: u32) -> Option<usize> {
        self.cavity.iter().position(|m| m.n1 == n1 && m.n2 == n2 && m.n3 == n3)
    }

    pub fn membrane_index(&self, k1: u32, k2: u32) -> Option<usize> {
        self.membrane.iter().position(|m| m.k1 == k1 && m.k2 == k2)
    }

    /// Copy of the basis keeping only the cavity modes selected by `keep`.
    pub fn filter_cavity<F: Fn(&CavityMode) -> bool>(&self, keep: F) -> Result<Self> {
        let mut cavity = Vec::new();
        let mut overlap0 = Vec::new();
        let width = self.membrane.len();
        for (i, n) in self.cavity.iter().enumerate() {
            if keep(n) {
                cavity.push(*n);
                overlap0.extend_from_slice(&self.overlap0[i * width..(i + 1) * width]);
            }
        }
        if cavity.is_empty() {
            return Err(Error::EmptyTruncation("cavity filter removed every mode".into()));
        }
        Ok(Self {
            geometry: self.geometry,
            truncation: self.truncation,
            cavity,
            membrane: self.membrane.clone(),
            overlap0,
            unit: self.unit.clone(),
        })
    }
}
