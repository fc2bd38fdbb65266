//! Zeros and extrema of `J_q` by fixed-step scanning, bisection and a Newton
//! polish.

use std::f64::consts::PI;

use super::bessel::{jq, jq_prime, jq_second, BesselOrder};
use crate::error::{Error, Result};

/// Default scan step; consecutive roots of `J_q` and `J_q'` are roughly `pi` apart.
pub const DEFAULT_SCAN_STEP: f64 = PI / 8.0;

fn scan_limit(q: f64, count: usize) -> f64 {
    (count as f64 + 0.5 * q + 3.0) * PI + q + 20.0
}

fn refine<F, D>(f: &F, df: &D, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-9 * mid.max(1.0) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish, kept inside the bracket.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if !(lo..=hi).contains(&next) {
            break;
        }
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

fn scan<F, D>(f: F, df: D, q: f64, count: usize, step: f64, what: &str) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if count == 0 {
        return Err(Error::invalid("root count must be at least 1"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("scan step must be positive, got {step}")));
    }
    let limit = scan_limit(q, count);
    let mut roots = Vec::with_capacity(count);
    let mut x_prev = 1e-3 * step;
    let mut f_prev = f(x_prev);
    let mut k = 1usize;
    while roots.len() < count {
        let x = k as f64 * step;
        k += 1;
        if x > limit {
            return Err(Error::Convergence(format!(
                "found only {} of {count} {what} of J_{q} below x = {limit}",
                roots.len()
            )));
        }
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if (fx < 0.0) != (f_prev < 0.0) && f_prev != 0.0 {
            roots.push(refine(&f, &df, x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(roots)
}

/// First `count` positive zeros of `J_q` in increasing order.
pub fn find_zeros(q: BesselOrder, count: usize) -> Result<Vec<f64>> {
    find_zeros_with_step(q, count, DEFAULT_SCAN_STEP)
}

pub fn find_zeros_with_step(q: BesselOrder, count: usize, step: f64) -> Result<Vec<f64>> {
    let order = q.value();
    scan(|x| jq(order, x), |x| jq_prime(order, x), order, count, step, "zeros")
}

/// First `count` non-negative extrema of `J_q`, i.e. roots of `J_q'`.
///
/// For `q = 0` the list starts with `0`, which carries the transversally
/// constant cavity mode.
pub fn find_extrema(q: BesselOrder, count: usize) -> Result<Vec<f64>> {
    find_extrema_with_step(q, count, DEFAULT_SCAN_STEP)
}

pub fn find_extrema_with_step(q: BesselOrder, count: usize, step: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("root count must be at least 1"));
    }
    let order = q.value();
    if order == 0.0 {
        let mut roots = vec![0.0];
        if count > 1 {
            roots.extend(scan(
                |x| jq_prime(0.0, x),
                |x| jq_second(0.0, x),
                order,
                count - 1,
                step,
                "extrema",
            )?);
        }
        return Ok(roots);
    }
    scan(|x| jq_prime(order, x), |x| jq_second(order, x), order, count, step, "extrema")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_count() {
        assert!(find_zeros(BesselOrder::integer(0), 0).is_err());
        assert!(find_extrema(BesselOrder::integer(0), 0).is_err());
    }

    #[test]
    fn zero_order_extrema_begin_at_origin() {
        let e = find_extrema(BesselOrder::integer(0), 1).unwrap();
        assert_eq!(e, vec![0.0]);
        let e = find_extrema(BesselOrder::integer(0), 2).unwrap();
        assert_eq!(e[0], 0.0);
        assert!((e[1] - 3.831_705_970_207_512).abs() < 1e-12);
    }

    #[test]
    fn zero_spacing_tends_to_pi() {
        let z = find_zeros(BesselOrder::integer(0), 12).unwrap();
        let gaps: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
        for g in gaps.windows(2) {
            assert!((g[1] - PI).abs() < (g[0] - PI).abs());
        }
        assert!((gaps.last().unwrap() - PI).abs() < 2e-3);
    }

    #[test]
    fn residuals_meet_tolerance() {
        for &q in &[0.0, 15.0 / 29.0, 1.0, 75.0 / 29.0, 5.0] {
            let order = BesselOrder::new(q).unwrap();
            for z in find_zeros(order, 6).unwrap() {
                let scale = jq_prime(q, z).abs().max(1.0);
                assert!(jq(q, z).abs() <= 1e-10 * scale, "q={q} zero {z}");
            }
        }
    }
}
