use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CavityGeometry, End};
use crate::error::{Error, Result};
use crate::special::{find_extrema, find_zeros, integrate_converged, jq, BesselOrder};

/// Relative tolerance for every radial and axial quadrature in this module.
pub(crate) const QUAD_TOL: f64 = 1e-10;

/// Cavity eigenmode `J_|n2|(mu r / a_cyl) e^{i n2 phi} cos(n3 pi x / L) / norm`.
///
/// `n1` counts non-negative extrema of `J_|n2|` from 1, so `(1, 0, n3)` is the
/// transversally constant (axial) family with `mu = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    pub n1: u32,
    pub n2: i32,
    pub n3: u32,
    pub mu: f64,
    /// Eigenvalue `-(mu^2 / a_cyl^2 + (n3 pi / L)^2)`, 1/m^2.
    pub lambda: f64,
    /// Eigenvalue `-(n3 pi / L)^2` of the axial mode with the same `n3`.
    pub lambda_axial: f64,
    pub norm: f64,
}

impl CavityMode {
    pub fn is_axial(&self) -> bool {
        self.mu == 0.0
    }

    /// Angular eigenfrequency `c sqrt(-lambda)`.
    pub fn omega(&self, c: f64) -> f64 {
        c * (-self.lambda).sqrt()
    }

    /// End-cap factor `cos(n3 pi x / L)` at `x = 0` or `x = L`.
    pub fn end_sign(&self, end: End) -> f64 {
        match end {
            End::Zero => 1.0,
            End::Length if self.n3 % 2 == 1 => -1.0,
            End::Length => 1.0,
        }
    }
}

/// Membrane eigenmode `J_q(nu r / a_tymp) sin(k2 pi phi' / span) / norm` on the
/// sector, `phi'` measured from the sector edge at `phi = beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneMode {
    pub k1: u32,
    pub k2: u32,
    pub q: f64,
    pub nu: f64,
    /// Eigenvalue `-nu^2 / a_tymp^2`, 1/m^2.
    pub gamma: f64,
    pub norm: f64,
}

impl MembraneMode {
    /// Undamped angular frequency squared, `-c_m^2 gamma`.
    pub fn stiffness(&self, c_m: f64) -> f64 {
        -c_m * c_m * self.gamma
    }
}

/// `int_0^a r g(r) dr` through `r = a s^2`, which smooths fractional powers at
/// the origin.
pub(crate) fn radial_integral<F: Fn(f64) -> f64>(a: f64, g: F) -> Result<f64> {
    integrate_converged(
        |s| {
            let r = a * s * s;
            2.0 * a * a * s * s * s * g(r)
        },
        0.0,
        1.0,
        QUAD_TOL,
    )
}

fn check_index(name: &str, value: u32) -> Result<()> {
    if value == 0 {
        return Err(Error::invalid(format!("{name} counts from 1")));
    }
    Ok(())
}

/// `(mu, lambda)` for cavity mode `(n1, n2, n3)`.
pub fn cavity_eigenvalue(geom: &CavityGeometry, n1: u32, n2: i32, n3: u32) -> Result<(f64, f64)> {
    check_index("n1", n1)?;
    let extrema = find_extrema(BesselOrder::integer(n2.unsigned_abs()), n1 as usize)?;
    let mu = extrema[n1 as usize - 1];
    Ok((mu, cavity_lambda(geom, mu, n3)))
}

pub(crate) fn cavity_lambda(geom: &CavityGeometry, mu: f64, n3: u32) -> f64 {
    let axial = f64::from(n3) * PI / geom.length;
    -((mu / geom.a_cyl).powi(2) + axial * axial)
}

/// `(q, nu, gamma)` for membrane mode `(k1, k2)`.
pub fn membrane_eigenvalue(geom: &CavityGeometry, k1: u32, k2: u32) -> Result<(f64, f64, f64)> {
    check_index("k1", k1)?;
    check_index("k2", k2)?;
    let order = BesselOrder::sector(k2, geom.beta)?;
    let zeros = find_zeros(order, k1 as usize)?;
    let nu = zeros[k1 as usize - 1];
    Ok((order.value(), nu, -(nu / geom.a_tymp).powi(2)))
}

pub(crate) fn build_cavity_mode(geom: &CavityGeometry, n1: u32, n2: i32, n3: u32, mu: f64) -> Result<CavityMode> {
    let order = f64::from(n2.unsigned_abs());
    let radial = radial_integral(geom.a_cyl, |r| jq(order, mu * r / geom.a_cyl).powi(2))?;
    let kz = f64::from(n3) * PI / geom.length;
    let axial = integrate_converged(|x| (kz * x).cos().powi(2), 0.0, geom.length, QUAD_TOL)?;
    let norm = (radial * 2.0 * PI * axial).sqrt();
    Ok(CavityMode {
        n1,
        n2,
        n3,
        mu,
        lambda: cavity_lambda(geom, mu, n3),
        lambda_axial: -kz * kz,
        norm,
    })
}

pub(crate) fn build_membrane_mode(geom: &CavityGeometry, k1: u32, k2: u32, q: f64, nu: f64) -> Result<MembraneMode> {
    let radial = radial_integral(geom.a_tymp, |r| jq(q, nu * r / geom.a_tymp).powi(2))?;
    let span = geom.sector_span();
    let kappa = f64::from(k2) * PI / span;
    let angular = integrate_converged(|p| (kappa * p).sin().powi(2), 0.0, span, QUAD_TOL)?;
    Ok(MembraneMode {
        k1,
        k2,
        q,
        nu,
        gamma: -(nu / geom.a_tymp).powi(2),
        norm: (radial * angular).sqrt(),
    })
}

/// Normalised cavity mode `(n1, n2, n3)`.
pub fn cavity_mode(geom: &CavityGeometry, n1: u32, n2: i32, n3: u32) -> Result<CavityMode> {
    let (mu, _) = cavity_eigenvalue(geom, n1, n2, n3)?;
    build_cavity_mode(geom, n1, n2, n3, mu)
}

/// Normalised membrane mode `(k1, k2)`.
pub fn membrane_mode(geom: &CavityGeometry, k1: u32, k2: u32) -> Result<MembraneMode> {
    let (q, nu, _) = membrane_eigenvalue(geom, k1, k2)?;
    build_membrane_mode(geom, k1, k2, q, nu)
}

/// Value of the cavity eigenfunction at `(r, phi, x)`.
pub fn cavity_eigenfunction(geom: &CavityGeometry, n: &CavityMode, point: (f64, f64, f64)) -> Result<Complex64> {
    let (r, phi, x) = point;
    if !(0.0..=geom.a_cyl).contains(&r) || !(0.0..2.0 * PI).contains(&phi) || !(0.0..=geom.length).contains(&x) {
        return Err(Error::OutOfDomain(format!("cavity point (r={r}, phi={phi}, x={x})")));
    }
    let radial = jq(f64::from(n.n2.unsigned_abs()), n.mu * r / geom.a_cyl);
    let axial = (f64::from(n.n3) * PI * x / geom.length).cos();
    Ok(Complex64::from_polar(1.0, f64::from(n.n2) * phi) * (radial * axial / n.norm))
}

/// Radial derivative of the cavity eigenfunction; vanishes at the wall.
#[cfg(test)]
pub(crate) fn cavity_radial_derivative(geom: &CavityGeometry, n: &CavityMode, r: f64) -> f64 {
    let order = f64::from(n.n2.unsigned_abs());
    n.mu / geom.a_cyl * crate::special::jq_prime(order, n.mu * r / geom.a_cyl) / n.norm
}

/// Value of the membrane eigenfunction at radius `r` and sector-local angle
/// `phi_local` in `[0, 2 pi - 2 beta]`.
pub fn membrane_eigenfunction(geom: &CavityGeometry, k: &MembraneMode, point: (f64, f64)) -> Result<f64> {
    let (r, phi_local) = point;
    let span = geom.sector_span();
    if !(0.0..=geom.a_tymp).contains(&r) || !(0.0..=span).contains(&phi_local) {
        return Err(Error::OutOfDomain(format!("membrane point (r={r}, phi'={phi_local})")));
    }
    let radial = jq(k.q, k.nu * r / geom.a_tymp);
    let angular = (f64::from(k.k2) * PI * phi_local / span).sin();
    Ok(radial * angular / k.norm)
}

/// `int_0^{a_tymp} r J_q(nu r / a_tymp) J_|n2|(mu r / a_cyl) dr`.
pub fn overlap_radial(geom: &CavityGeometry, n: &CavityMode, k: &MembraneMode) -> Result<f64> {
    radial_overlap_raw(geom, f64::from(n.n2.unsigned_abs()), n.mu, k.q, k.nu)
}

pub(crate) fn radial_overlap_raw(geom: &CavityGeometry, order: f64, mu: f64, q: f64, nu: f64) -> Result<f64> {
    radial_integral(geom.a_tymp, |r| {
        jq(q, nu * r / geom.a_tymp) * jq(order, mu * r / geom.a_cyl)
    })
}

/// `int_0^T e^{i a phi} dphi`.
fn phase_integral(a: f64, span: f64) -> Complex64 {
    if (a * span).abs() < 1e-8 {
        // Series of (e^{i a T} - 1)/(i a) about a = 0.
        let z = Complex64::new(0.0, a * span);
        return span * (1.0 + z / 2.0 + z * z / 6.0);
    }
    (Complex64::from_polar(1.0, a * span) - 1.0) / Complex64::new(0.0, a)
}

/// `int_beta^{2 pi - beta} e^{-i n2 phi} sin(k2 pi (phi - beta) / span) dphi`.
pub(crate) fn angular_overlap(geom: &CavityGeometry, n2: i32, k2: u32) -> Complex64 {
    let span = geom.sector_span();
    let kappa = f64::from(k2) * PI / span;
    let m = f64::from(n2);
    let inner = (phase_integral(kappa - m, span) - phase_integral(-(kappa + m), span)) / Complex64::new(0.0, 2.0);
    Complex64::from_polar(1.0, -m * geom.beta) * inner
}

/// Surface inner product `int_Gamma conj(Psi_n) Phi_k dS` on the chosen end cap.
pub fn overlap_full(geom: &CavityGeometry, n: &CavityMode, k: &MembraneMode, end: End) -> Result<Complex64> {
    let radial = overlap_radial(geom, n, k)?;
    Ok(assemble_overlap(geom, n, k, radial, end))
}

pub(crate) fn assemble_overlap(geom: &CavityGeometry, n: &CavityMode, k: &MembraneMode, radial: f64, end: End) -> Complex64 {
    angular_overlap(geom, n.n2, k.k2) * (radial * n.end_sign(end) / (n.norm * k.norm))
}

/// `int_Gamma Phi_k dS`, the projection of a uniform load onto mode `k`.
pub fn unit_projection(geom: &CavityGeometry, k: &MembraneMode) -> Result<f64> {
    let radial = radial_integral(geom.a_tymp, |r| jq(k.q, k.nu * r / geom.a_tymp))?;
    let span = geom.sector_span();
    let angular = if k.k2 % 2 == 1 { 2.0 * span / (f64::from(k.k2) * PI) } else { 0.0 };
    Ok(radial * angular / k.norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gecko() -> CavityGeometry {
        CavityGeometry::new(0.022, 0.0066, 0.0026, PI / 30.0).unwrap()
    }

    #[test]
    fn axial_constant_mode() {
        let g = gecko();
        let n = cavity_mode(&g, 1, 0, 0).unwrap();
        assert_eq!(n.lambda, 0.0);
        let want = 1.0 / (PI * g.a_cyl * g.a_cyl * g.length).sqrt();
        let v = cavity_eigenfunction(&g, &n, (0.003, 1.0, 0.01)).unwrap();
        assert!((v.re - want).abs() < 1e-10 * want && v.im.abs() < 1e-12 * want);
    }

    #[test]
    fn first_axial_eigenvalue() {
        let g = gecko();
        let (mu, lambda) = cavity_eigenvalue(&g, 1, 0, 1).unwrap();
        assert_eq!(mu, 0.0);
        assert!((lambda + (PI / 0.022).powi(2)).abs() < 1e-9);
        assert!((lambda + 2.0392e4).abs() < 1.0);
    }

    #[test]
    fn odd_axial_index_flips_sign_at_far_end() {
        let g = gecko();
        let n = cavity_mode(&g, 2, 1, 1).unwrap();
        let a = cavity_eigenfunction(&g, &n, (0.002, 0.4, 0.0)).unwrap();
        let b = cavity_eigenfunction(&g, &n, (0.002, 0.4, g.length)).unwrap();
        assert!((a + b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn membrane_clamped_on_boundary() {
        let g = gecko();
        for (k1, k2) in [(1, 1), (2, 3), (4, 2)] {
            let k = membrane_mode(&g, k1, k2).unwrap();
            assert!(k.gamma < 0.0);
            let rim = membrane_eigenfunction(&g, &k, (g.a_tymp, 1.3)).unwrap();
            assert!(rim.abs() < 1e-9, "rim {rim}");
            assert_eq!(membrane_eigenfunction(&g, &k, (0.001, 0.0)).unwrap(), 0.0);
            let edge = membrane_eigenfunction(&g, &k, (0.001, g.sector_span())).unwrap();
            assert!(edge.abs() < 1e-12 * k.norm.recip());
        }
    }

    #[test]
    fn out_of_domain_points() {
        let g = gecko();
        let n = cavity_mode(&g, 1, 0, 0).unwrap();
        assert!(cavity_eigenfunction(&g, &n, (0.007, 0.0, 0.0)).is_err());
        assert!(cavity_eigenfunction(&g, &n, (0.001, 2.0 * PI, 0.0)).is_err());
        assert!(cavity_eigenfunction(&g, &n, (0.001, 0.0, -1e-9)).is_err());
        let k = membrane_mode(&g, 1, 1).unwrap();
        assert!(membrane_eigenfunction(&g, &k, (0.001, g.sector_span() + 1e-6)).is_err());
    }

    #[test]
    fn sector_order_and_root() {
        let g = gecko();
        let (q, nu, gamma) = membrane_eigenvalue(&g, 1, 1).unwrap();
        assert!((q - 0.517_241_379_310_344_8).abs() < 1e-12);
        assert!(jq(q, nu).abs() < 1e-12);
        assert!((gamma + (nu / g.a_tymp).powi(2)).abs() < 1e-6);
    }

    #[test]
    fn angular_overlap_matches_quadrature() {
        let g = gecko();
        let span = g.sector_span();
        for n2 in -3..=3 {
            for k2 in 1..=4u32 {
                let kappa = f64::from(k2) * PI / span;
                let re = integrate_converged(
                    |p| (f64::from(n2) * p).cos() * (kappa * (p - g.beta)).sin(),
                    g.beta,
                    2.0 * PI - g.beta,
                    1e-13,
                )
                .unwrap();
                let im = integrate_converged(
                    |p| -(f64::from(n2) * p).sin() * (kappa * (p - g.beta)).sin(),
                    g.beta,
                    2.0 * PI - g.beta,
                    1e-13,
                )
                .unwrap();
                let got = angular_overlap(&g, n2, k2);
                assert!((got - Complex64::new(re, im)).norm() < 1e-11, "n2={n2} k2={k2}");
            }
        }
    }

    #[test]
    fn angular_overlap_on_full_circle_has_symmetric_zeros() {
        let g = CavityGeometry::new(0.02, 0.006, 0.003, 0.0).unwrap();
        // sin(k2 phi / 2) with even k2 is orthogonal to constants on [0, 2 pi].
        assert!(angular_overlap(&g, 0, 2).norm() < 1e-14);
        assert!(angular_overlap(&g, 0, 4).norm() < 1e-14);
        // k2 = 2 m hits the resonant branch of the phase integral.
        assert!((angular_overlap(&g, 1, 2).norm() - PI).abs() < 1e-12);
    }

    #[test]
    fn wall_is_neumann() {
        let g = gecko();
        for (n1, n2) in [(2, 0), (1, 1), (3, 2), (2, -4)] {
            let n = cavity_mode(&g, n1, n2, 0).unwrap();
            let scale = n.mu / g.a_cyl / n.norm;
            assert!(cavity_radial_derivative(&g, &n, g.a_cyl).abs() <= 1e-8 * scale);
        }
    }
}
