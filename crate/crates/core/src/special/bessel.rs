//! Bessel functions of the first kind for real, non-negative order.
//!
//! Small arguments (`x <= max(12, 2q)`) use the ascending power series. Larger
//! arguments use Miller's backward recurrence normalised by the Neumann-type
//! sum `(x/2)^q = sum_k (q+2k) Gamma(q+k)/k! J_{q+2k}(x)`, which holds for
//! every real `q >= 0` and is well conditioned up to the `x ~ 200` range used
//! here.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Order `q >= 0` of a Bessel function `J_q`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q < 0.0 {
            return Err(Error::domain(format!("Bessel order must be finite and >= 0, got {q}")));
        }
        Ok(Self(q))
    }

    pub fn integer(n: u32) -> Self {
        Self(f64::from(n))
    }

    /// Order `k2 * pi / (2 (pi - beta))` of the angular membrane mode `k2` on a
    /// sector of span `2 pi - 2 beta`.
    pub fn sector(k2: u32, beta: f64) -> Result<Self> {
        if !(0.0..PI).contains(&beta) {
            return Err(Error::domain(format!("half-gap angle must lie in [0, pi), got {beta}")));
        }
        Self::new(f64::from(k2) * PI / (2.0 * (PI - beta)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(z)` for `z >= 0.5` (Lanczos, g = 7).
pub(crate) fn ln_gamma(z: f64) -> f64 {
    debug_assert!(z >= 0.5);
    let z = z - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

fn series_crossover(q: f64) -> f64 {
    (2.0 * q).max(12.0)
}

/// `(x/2)^q / Gamma(q+1)`, with the `x = 0` limit.
fn leading_power(q: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if q == 0.0 { 1.0 } else { 0.0 };
    }
    (q * (0.5 * x).ln() - ln_gamma(q + 1.0)).exp()
}

fn series(q: f64, x: f64) -> f64 {
    let mut term = leading_power(q, x);
    if term == 0.0 {
        return 0.0;
    }
    let quarter_x2 = 0.25 * x * x;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -quarter_x2 / (k * (k + q));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 0.5 * x {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Backward recurrence returning `(J_q(x), J_{q+1}(x))` for `x > 0`.
fn miller(q: f64, x: f64) -> (f64, f64) {
    let mut top = (x + 30.0 + 12.0 * x.cbrt()).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }
    // Normalisation weights divided by Gamma(q+1): w_0 = 1, w_k = (q+2k) g_k,
    // g_1 = 1, g_{k+1} = g_k (q+k)/(k+1).
    let half = top / 2;
    let mut weights = Vec::with_capacity(half + 1);
    weights.push(1.0);
    let mut g = 1.0;
    for k in 1..=half {
        let kf = k as f64;
        weights.push((q + 2.0 * kf) * g);
        g *= (q + kf) / (kf + 1.0);
    }

    let mut upper = 0.0; // f_{m+1}
    let mut current = 1e-30; // f_m
    let mut sum = weights[half] * current;
    let mut f1 = 0.0;
    for m in (1..=top).rev() {
        let lower = 2.0 * (q + m as f64) / x * current - upper;
        upper = current;
        current = lower;
        let idx = m - 1;
        if idx % 2 == 0 {
            sum += weights[idx / 2] * current;
        }
        if idx == 1 {
            f1 = current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            sum *= 1e-250;
            f1 *= 1e-250;
        }
    }
    let f0 = current;
    let scale = leading_power(q, x) / sum;
    (f0 * scale, f1 * scale)
}

/// `(J_q(x), J_{q+1}(x))` without argument validation.
pub(crate) fn j_pair(q: f64, x: f64) -> (f64, f64) {
    if x <= series_crossover(q) {
        (series(q, x), series(q + 1.0, x))
    } else {
        miller(q, x)
    }
}

pub(crate) fn jq(q: f64, x: f64) -> f64 {
    if x <= series_crossover(q) {
        series(q, x)
    } else {
        miller(q, x).0
    }
}

/// Derivative `J_q'(x)`; requires `x > 0` unless `q` is 0 or 1.
pub(crate) fn jq_prime(q: f64, x: f64) -> f64 {
    if q == 0.0 {
        return -jq(1.0, x);
    }
    if x == 0.0 {
        return if q == 1.0 { 0.5 } else if q > 1.0 { 0.0 } else { f64::INFINITY };
    }
    if q >= 1.0 {
        0.5 * (jq(q - 1.0, x) - jq(q + 1.0, x))
    } else {
        let (j, j_next) = j_pair(q, x);
        q / x * j - j_next
    }
}

/// `J_q''(x)` from Bessel's equation, `x > 0`.
pub(crate) fn jq_second(q: f64, x: f64) -> f64 {
    let j = jq(q, x);
    let jp = jq_prime(q, x);
    -jp / x - (1.0 - q * q / (x * x)) * j
}

/// Bessel function of the first kind `J_q(x)` for `x >= 0`.
pub fn bessel_j(q: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("bessel_j needs x >= 0, got {x}")));
    }
    Ok(jq(q.value(), x))
}

/// Derivative `J_q'(x)`.
///
/// `J_0' = -J_1`, `J_q' = (J_{q-1} - J_{q+1})/2` for `q >= 1` and
/// `J_q' = (q/x) J_q - J_{q+1}` for fractional `0 < q < 1`. At `x = 0` only
/// orders with a finite, non-singular formula are accepted.
pub fn bessel_j_prime(q: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("bessel_j_prime needs x >= 0, got {x}")));
    }
    if x == 0.0 && !(q.value() == 0.0 || q.is_integer()) {
        return Err(Error::domain(format!(
            "J_q'(0) is singular for fractional order q = {}",
            q.value()
        )));
    }
    Ok(jq_prime(q.value(), x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_factorials() {
        let mut fact = 1.0_f64;
        for n in 1..15 {
            fact *= n as f64;
            let got = ln_gamma(n as f64 + 1.0).exp();
            assert!((got - fact).abs() <= 1e-13 * fact, "n={n}: {got} vs {fact}");
        }
        let half = ln_gamma(0.5).exp();
        assert!((half - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn trivial_values_at_origin() {
        assert_eq!(bessel_j(BesselOrder::integer(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(BesselOrder::integer(1), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(BesselOrder::new(0.3).unwrap(), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(BesselOrder::integer(0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(BesselOrder::new(-0.5).is_err());
        assert!(bessel_j(BesselOrder::integer(0), -1.0).is_err());
        assert!(bessel_j_prime(BesselOrder::new(0.5).unwrap(), 0.0).is_err());
        assert!(BesselOrder::sector(1, PI).is_err());
    }

    #[test]
    fn half_integer_order_is_elementary() {
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x
        let q = BesselOrder::new(0.5).unwrap();
        for &x in &[0.3, 2.0, 11.0, 13.0, 40.0, 150.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(q, x).unwrap();
            assert!((got - want).abs() < 1e-11, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_across_crossover() {
        for &q in &[0.0, 0.5172413793103449, 1.0, 3.0] {
            for &x in &[8.0, 10.0, 12.0] {
                let s = series(q, x);
                let m = miller(q, x).0;
                assert!((s - m).abs() < 1e-11, "q={q} x={x}: {s} vs {m}");
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        for &q in &[0.0, 0.5172413793103449, 1.0, 2.0, 2.5] {
            for &x in &[0.7, 3.1, 9.9, 12.5, 33.0] {
                let h = 1e-5;
                let fd = (jq(q, x + h) - jq(q, x - h)) / (2.0 * h);
                let d = bessel_j_prime(BesselOrder::new(q).unwrap(), x).unwrap();
                assert!((fd - d).abs() < 1e-7, "q={q} x={x}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn sector_order_for_gecko_gap() {
        let q = BesselOrder::sector(1, PI / 30.0).unwrap();
        assert!((q.value() - 15.0 / 29.0).abs() < 1e-15);
    }
}
