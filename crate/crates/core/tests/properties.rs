use ice_core::cli::{emit_config, parse_config, RunConfig};
use ice_core::geometry::{MaterialParams, ModeBasis, Preset, Stimulus, Truncation};
use ice_core::perturbation::{duhamel, resonance_factor, Oscillator, QuasiStationary, TimeGrid};
use ice_core::special::{bessel_j, BesselOrder};
use ice_core::spinning::rank_values;
use ice_core::transient::{relaxation_time, transient_coupling};
use num_complex::Complex64;
use proptest::prelude::*;

fn direct_factor(omega: f64, omega_n: f64, t: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, omega * t);
    let r = Complex64::new((omega_n * t).cos(), omega * (omega_n * t).sin() / omega_n);
    (e - r) / (omega * omega - omega_n * omega_n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_three_term_recurrence(q in 1.0f64..8.0, x in 0.2f64..40.0) {
        let j = |v: f64| bessel_j(BesselOrder::new(v).unwrap(), x).unwrap();
        let res = j(q - 1.0) + j(q + 1.0) - 2.0 * q / x * j(q);
        prop_assert!(res.abs() <= 1e-10 * (1.0 + 2.0 * q / x));
    }

    #[test]
    fn relaxation_time_hits_squared_coupling(g in 1e-6f64..0.5, alpha in 1.0f64..1e4) {
        let mat = MaterialParams { c: 343.0, c_m: 5.0, rho0: g, rho_m: 1.0, thickness: 1e-5, alpha };
        let t = relaxation_time(&mat).unwrap();
        prop_assert!(t > 0.0);
        prop_assert!((transient_coupling(&mat, t) - g * g).abs() <= 1e-12 * g * g);
    }

    #[test]
    fn resonance_factor_vanishes_at_start(omega in 10.0f64..1e5, ratio in 0.0f64..3.0) {
        let (q, qd) = resonance_factor(omega, ratio * omega, 0.0);
        prop_assert_eq!(q.norm(), 0.0);
        prop_assert!(qd.norm() <= 1e-15 * omega);
    }

    #[test]
    fn guarded_resonance_factor_matches_direct_form(
        omega in 100.0f64..1e4,
        offset in 1e-7f64..4e-7,
        sign in prop::bool::ANY,
        t in 1e-4f64..1e-2,
    ) {
        let omega_n = omega * (1.0 + if sign { offset } else { -offset });
        let (q, _) = resonance_factor(omega, omega_n, t);
        let reference = direct_factor(omega, omega_n, t);
        prop_assert!((q - reference).norm() <= 1e-7 * (t / omega + t * t));
    }

    #[test]
    fn ranks_form_a_permutation(values in prop::collection::hash_set(-1000i32..1000, 1..40)) {
        let v: Vec<f64> = values.iter().map(|&x| f64::from(x)).collect();
        let mut r = rank_values(&v).unwrap();
        for (i, j) in (0..v.len()).flat_map(|i| (0..v.len()).map(move |j| (i, j))) {
            prop_assert_eq!(v[i] < v[j], r[i] < r[j]);
        }
        r.sort_unstable();
        prop_assert_eq!(r, (0..v.len()).collect::<Vec<_>>());
    }

    #[test]
    fn duhamel_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, alpha in 0.0f64..50.0, w in 1.0f64..100.0) {
        let osc = Oscillator::new(alpha, w * w);
        let h = 1e-3;
        let f: Vec<Complex64> = (0..200).map(|j| Complex64::new((j as f64 * h * 7.0).sin(), 0.0)).collect();
        let g: Vec<Complex64> = (0..200).map(|j| Complex64::new(0.0, (j as f64 * h * 3.0).cos())).collect();
        let mix: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| x * a + y * b).collect();
        let (yf, _) = duhamel(&osc, h, &f).unwrap();
        let (yg, _) = duhamel(&osc, h, &g).unwrap();
        let (ym, _) = duhamel(&osc, h, &mix).unwrap();
        let scale = yf.iter().chain(&yg).map(|z| z.norm()).fold(1e-300, f64::max);
        for j in 0..ym.len() {
            prop_assert!((ym[j] - (yf[j] * a + yg[j] * b)).norm() <= 1e-12 * scale * (a.abs() + b.abs() + 1.0));
        }
    }

    #[test]
    fn covering_grid_respects_step(window in 1e-4f64..1.0, step in 1e-6f64..1e-2) {
        let grid = TimeGrid::covering(window, step).unwrap();
        prop_assert!(grid.step <= step * (1.0 + 1e-12) || grid.len == 4);
        prop_assert!((grid.window() - window).abs() <= 1e-12 * window);
    }

    #[test]
    fn config_round_trip(
        length in 0.005f64..0.05,
        shrink in 0.1f64..1.0,
        beta in 0.0f64..3.0,
        omega in 1.0f64..1e5,
        p0 in -10.0f64..10.0,
        samples in 4usize..5000,
        n in 1u32..6,
    ) {
        let mut c = RunConfig::from_preset("varanus").unwrap();
        c.preset = None;
        c.geometry.length = length;
        c.geometry.a_tymp = c.geometry.a_cyl * shrink;
        c.geometry.beta = beta;
        c.stimulus.omega = omega;
        c.stimulus.p0 = p0;
        c.samples = samples;
        c.truncation = Truncation { cavity_n1: n, cavity_n2: n - 1, cavity_n3: n + 1, membrane_k1: n, membrane_k2: 1 };
        let back = parse_config(&emit_config(&c), true).unwrap();
        prop_assert_eq!(back.config, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn membrane_response_is_linear_in_stimulus(p0 in -5.0f64..5.0) {
        let p = Preset::gecko().unwrap();
        let t = Truncation { cavity_n1: 1, cavity_n2: 0, cavity_n3: 1, membrane_k1: 2, membrane_k2: 2 };
        let basis = ModeBasis::new(p.geometry, t).unwrap();
        let unit = QuasiStationary::new(&basis, &p.material, &p.stimulus);
        let scaled = QuasiStationary::new(&basis, &p.material, &Stimulus { p0: p.stimulus.p0 * p0, ..p.stimulus });
        for (u, s) in unit.membrane0.iter().chain(&unit.membrane_l).zip(scaled.membrane0.iter().chain(&scaled.membrane_l)) {
            prop_assert!((u * p0 - s).norm() <= 1e-14 * u.norm() * (1.0 + p0.abs()));
        }
    }
}
