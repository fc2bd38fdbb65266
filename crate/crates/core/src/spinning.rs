//! Spinning-mode analysis: how strongly non-axial cavity modes propagate at
//! the stimulus frequency, the rank-ordered coupling census, and the piston
//! approximation that keeps only axial modes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    cavity_lambda, radial_overlap_raw, CavityGeometry, CavityMode, MaterialParams, ModeBasis, Stimulus,
};
use crate::perturbation::{resonance_factor, QuasiStationary, RESONANCE_GUARD};
use crate::special::{find_extrema, find_zeros, BesselOrder};

/// Radial and angular census sizes: `n1, n2, k1, k2 = 1..=CENSUS`.
pub const CENSUS: u32 = 5;

/// Spinning parameter `(-w^2 - c^2 lambda_axial) / (-w^2 - c^2 lambda_n)`.
pub fn spinning_parameter(mat: &MaterialParams, stim: &Stimulus, n: &CavityMode) -> Result<f64> {
    if n.is_axial() {
        return Ok(1.0);
    }
    let w2 = stim.omega * stim.omega;
    let c2 = mat.c * mat.c;
    let denom = -w2 - c2 * n.lambda;
    if denom.abs() < RESONANCE_GUARD * w2 {
        return Err(Error::Resonance(format!(
            "stimulus resonates with cavity mode ({}, {}, {})",
            n.n1, n.n2, n.n3
        )));
    }
    Ok((-w2 - c2 * n.lambda_axial) / denom)
}

/// Count of strictly smaller values for each entry.
pub fn rank_values(values: &[f64]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for w in order.windows(2) {
        let (a, b) = (values[w[0]], values[w[1]]);
        if (b - a).abs() <= 1e-9 * a.abs().max(1.0) {
            return Err(Error::Tie(format!("values {a} and {b} coincide")));
        }
    }
    let mut ranks = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r;
    }
    Ok(ranks)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityCensus {
    pub n1: u32,
    pub n2: u32,
    pub mu: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneCensus {
    pub k1: u32,
    pub k2: u32,
    pub q: f64,
    pub nu: f64,
    pub rank: usize,
}

/// Rank maps of the 30 cavity extrema (the `n2 = 0` column including the
/// axial `mu = 0`, plus `n1, n2 = 1..5`) and the 25 membrane zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOrdering {
    pub cavity: Vec<CavityCensus>,
    pub membrane: Vec<MembraneCensus>,
}

impl ModeOrdering {
    pub fn new(geom: &CavityGeometry) -> Result<Self> {
        let mut cavity = Vec::new();
        for n2 in 0..=CENSUS {
            let roots = find_extrema(BesselOrder::integer(n2), CENSUS as usize)?;
            for (i, &mu) in roots.iter().enumerate() {
                cavity.push(CavityCensus { n1: i as u32 + 1, n2, mu, rank: 0 });
            }
        }
        let ranks = rank_values(&cavity.iter().map(|c| c.mu).collect::<Vec<_>>())?;
        for (c, r) in cavity.iter_mut().zip(ranks) {
            c.rank = r;
        }

        let mut membrane = Vec::new();
        for k2 in 1..=CENSUS {
            let order = BesselOrder::sector(k2, geom.beta)?;
            let roots = find_zeros(order, CENSUS as usize)?;
            for (i, &nu) in roots.iter().enumerate() {
                membrane.push(MembraneCensus { k1: i as u32 + 1, k2, q: order.value(), nu, rank: 0 });
            }
        }
        let ranks = rank_values(&membrane.iter().map(|m| m.nu).collect::<Vec<_>>())?;
        for (m, r) in membrane.iter_mut().zip(ranks) {
            m.rank = r;
        }
        Ok(Self { cavity, membrane })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingEntry {
    pub n3: u32,
    pub rank_n: usize,
    pub rank_k: usize,
    pub n1: u32,
    pub n2: u32,
    pub k1: u32,
    pub k2: u32,
    pub spin: f64,
    pub overlap: f64,
    /// `spin * overlap / a_cyl^2`.
    pub value: f64,
}

/// Coupling census for one axial index, sorted by `(rank_n, rank_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinningReport {
    pub omega: f64,
    pub n3: u32,
    pub entries: Vec<CouplingEntry>,
}

impl SpinningReport {
    /// Entry with the largest `|value|`.
    pub fn argmax(&self) -> Option<&CouplingEntry> {
        self.entries.iter().max_by(|a, b| a.value.abs().total_cmp(&b.value.abs()))
    }
}

/// Coupling values `s(n) <n1|k1> / a_cyl^2` over the census at axial index `n3`.
pub fn coupling_matrix(
    geom: &CavityGeometry,
    mat: &MaterialParams,
    stim: &Stimulus,
    n3: u32,
) -> Result<SpinningReport> {
    let ordering = ModeOrdering::new(geom)?;
    coupling_matrix_with(geom, mat, stim, n3, &ordering)
}

/// [`coupling_matrix`] reusing a precomputed ordering.
pub fn coupling_matrix_with(
    geom: &CavityGeometry,
    mat: &MaterialParams,
    stim: &Stimulus,
    n3: u32,
    ordering: &ModeOrdering,
) -> Result<SpinningReport> {
    let axial = f64::from(n3) * PI / geom.length;
    let mut entries = Vec::with_capacity(ordering.cavity.len() * ordering.membrane.len());
    for c in &ordering.cavity {
        let n = CavityMode {
            n1: c.n1,
            n2: c.n2 as i32,
            n3,
            mu: c.mu,
            lambda: cavity_lambda(geom, c.mu, n3),
            lambda_axial: -axial * axial,
            norm: 1.0,
        };
        let spin = spinning_parameter(mat, stim, &n)?;
        for m in &ordering.membrane {
            let overlap = radial_overlap_raw(geom, f64::from(c.n2), c.mu, m.q, m.nu)?;
            entries.push(CouplingEntry {
                n3,
                rank_n: c.rank,
                rank_k: m.rank,
                n1: c.n1,
                n2: c.n2,
                k1: m.k1,
                k2: m.k2,
                spin,
                overlap,
                value: spin * overlap / (geom.a_cyl * geom.a_cyl),
            });
        }
    }
    entries.sort_by_key(|e| (e.rank_n, e.rank_k));
    Ok(SpinningReport { omega: stim.omega, n3, entries })
}

/// Pressure at `(r, phi, x)` keeping only the axial cavity modes
/// `n3 = 0..=N3` of the basis truncation, written with disc-averaged membrane
/// displacements. Independent of `r` and `phi`.
pub fn piston_pressure(
    basis: &ModeBasis,
    mat: &MaterialParams,
    stim: &Stimulus,
    qs: &QuasiStationary,
    t: f64,
    point: (f64, f64, f64),
) -> Result<Complex64> {
    let geom = basis.geometry();
    let (r, phi, x) = point;
    if !(0.0..=geom.a_cyl).contains(&r) || !(0.0..2.0 * PI).contains(&phi) || !(0.0..=geom.length).contains(&x) {
        return Err(Error::OutOfDomain(format!("cavity point (r={r}, phi={phi}, x={x})")));
    }
    if qs.membrane0.len() != basis.membrane().len() {
        return Err(Error::invalid("membrane amplitudes do not match the basis"));
    }
    let disc = PI * geom.a_cyl * geom.a_cyl;
    // Disc averages of each membrane displacement.
    let mut avg0 = Complex64::new(0.0, 0.0);
    let mut avg_l = Complex64::new(0.0, 0.0);
    for j in 0..basis.membrane().len() {
        let area_integral = basis.unit_projection(j);
        avg0 += qs.membrane0[j] * area_integral / disc;
        avg_l += qs.membrane_l[j] * area_integral / disc;
    }
    let w2 = stim.omega * stim.omega;
    let mut acc = Complex64::new(0.0, 0.0);
    for n3 in 0..=basis.truncation().cavity_n3 {
        let kz = f64::from(n3) * PI / geom.length;
        let omega_n = mat.c * kz;
        let weight = if n3 == 0 { 1.0 / geom.length } else { 2.0 / geom.length };
        let (q, _) = resonance_factor(stim.omega, omega_n, t);
        let shape = avg0 * (kz * x).cos() + avg_l * (kz * (geom.length - x)).cos();
        acc += shape * q * weight;
    }
    Ok(acc * (mat.rho0 * mat.c * mat.c * w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cavity_mode, Preset};

    #[test]
    fn ranks_are_a_permutation() {
        let r = rank_values(&[3.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(r, vec![3, 1, 2, 0]);
        assert!(matches!(rank_values(&[1.0, 1.0 + 1e-12]), Err(Error::Tie(_))));
    }

    #[test]
    fn census_sizes_and_axial_rank() {
        let p = Preset::gecko().unwrap();
        let o = ModeOrdering::new(&p.geometry).unwrap();
        assert_eq!(o.cavity.len(), 30);
        assert_eq!(o.membrane.len(), 25);
        let axial = o.cavity.iter().find(|c| c.mu == 0.0).unwrap();
        assert_eq!(axial.rank, 0);
        let mut ranks: Vec<usize> = o.cavity.iter().map(|c| c.rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..30).collect::<Vec<_>>());
    }

    #[test]
    fn spinning_parameter_properties() {
        let p = Preset::gecko().unwrap();
        let g = p.geometry;
        let axial = cavity_mode(&g, 1, 0, 3).unwrap();
        assert_eq!(spinning_parameter(&p.material, &p.stimulus, &axial).unwrap(), 1.0);
        let mut last = 1.0;
        for n1 in 2..=5 {
            let n = cavity_mode(&g, n1, 0, 2).unwrap();
            let s = spinning_parameter(&p.material, &p.stimulus, &n).unwrap();
            assert!(s.abs() < last);
            last = s.abs();
        }
        assert!(last < 0.05);
    }

    #[test]
    fn piston_is_plane_wave() {
        let p = Preset::gecko().unwrap();
        let t = crate::geometry::Truncation { cavity_n1: 1, cavity_n2: 0, cavity_n3: 3, membrane_k1: 2, membrane_k2: 2 };
        let b = ModeBasis::new(p.geometry, t).unwrap();
        let qs = QuasiStationary::new(&b, &p.material, &p.stimulus);
        let a = piston_pressure(&b, &p.material, &p.stimulus, &qs, 1e-3, (0.0, 0.0, 0.005)).unwrap();
        let c = piston_pressure(&b, &p.material, &p.stimulus, &qs, 1e-3, (0.006, 4.0, 0.005)).unwrap();
        assert_eq!(a, c);
        let z = piston_pressure(&b, &p.material, &p.stimulus, &qs, 0.0, (0.0, 0.0, 0.005)).unwrap();
        assert_eq!(z.norm(), 0.0);
    }
}
