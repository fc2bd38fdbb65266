use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{cavity_eigenfunction, membrane_eigenfunction, End, ModeBasis, Truncation};

/// Modal amplitudes at one instant, ordered like the basis they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub truncation: Truncation,
    pub pressure: Vec<Complex64>,
    pub membrane0: Vec<Complex64>,
    pub membrane_l: Vec<Complex64>,
}

impl FieldSnapshot {
    pub fn zeros(basis: &ModeBasis, time: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            time,
            truncation: *basis.truncation(),
            pressure: vec![z; basis.cavity().len()],
            membrane0: vec![z; basis.membrane().len()],
            membrane_l: vec![z; basis.membrane().len()],
        }
    }

    pub fn membrane(&self, end: End) -> &[Complex64] {
        match end {
            End::Zero => &self.membrane0,
            End::Length => &self.membrane_l,
        }
    }

    fn check(&self, basis: &ModeBasis) -> Result<()> {
        if self.pressure.len() != basis.cavity().len()
            || self.membrane0.len() != basis.membrane().len()
            || self.membrane_l.len() != basis.membrane().len()
        {
            return Err(Error::invalid("snapshot does not match the basis"));
        }
        if self.pressure.is_empty() {
            return Err(Error::EmptyTruncation("snapshot has no cavity modes".into()));
        }
        Ok(())
    }
}

/// Pressure `sum_n P_n Psi_n(r, phi, x)`.
pub fn evaluate_pressure(basis: &ModeBasis, snap: &FieldSnapshot, point: (f64, f64, f64)) -> Result<Complex64> {
    snap.check(basis)?;
    let geom = basis.geometry();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, p) in basis.cavity().iter().zip(&snap.pressure) {
        acc += p * cavity_eigenfunction(geom, n, point)?;
    }
    Ok(acc)
}

/// Membrane displacement `sum_k U_k Phi_k(r, phi')` at sector-local angle `phi'`.
pub fn evaluate_membrane(
    basis: &ModeBasis,
    snap: &FieldSnapshot,
    end: End,
    point: (f64, f64),
) -> Result<Complex64> {
    snap.check(basis)?;
    let geom = basis.geometry();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, u) in basis.membrane().iter().zip(snap.membrane(end)) {
        acc += u * membrane_eigenfunction(geom, k, point)?;
    }
    Ok(acc)
}
