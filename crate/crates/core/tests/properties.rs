use std::f64::consts::PI;

use magnetogas::gas_finite_t::{
    convolve_from_t0, i_z_fourier, i_z_quadrature, oscillation_envelope_t, ConvolutionSpec, GasPointT, OscSeriesSpec,
};
use magnetogas::gas_zero_t::{
    fermi_energy_from_density, magnetization, magnetization_envelope_t0, number_density, GasPointT0, Method,
};
use magnetogas::hfamily::{h_z, landau_sum};
use magnetogas::hurwitz::{hurwitz_zeta, ZetaEngineConfig};
use proptest::prelude::*;

fn off_integer(q: f64) -> bool {
    let f = q - q.floor();
    f > 1e-6 && f < 1.0 - 1e-6
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn zeta_finite_sum(z in -4.5f64..3.0, q in 0.05f64..40.0, n in 1usize..30) {
        prop_assume!((z - 1.0).abs() > 1e-3);
        let cfg = ZetaEngineConfig::DEFAULT;
        let a = hurwitz_zeta(z, q, &cfg).unwrap();
        let b = hurwitz_zeta(z, q + n as f64, &cfg).unwrap();
        let head: f64 = (0..n).map(|k| (q + k as f64).powf(-z)).sum();
        let scale = a.value.abs() + b.value.abs() + head.abs();
        let lhs = a.value - b.value;
        prop_assert!((lhs - head).abs() <= a.abs_error_estimate + b.abs_error_estimate + 1e-13 * scale,
            "z={z} q={q} n={n}: {lhs} vs {head}");
    }

    #[test]
    fn h_family_equals_landau_sum(zi in 0usize..4, q in 0.01f64..60.0) {
        let z = [-2.5, -1.5, -0.5, 0.5][zi];
        prop_assume!(off_integer(q));
        let h = h_z(z, q).unwrap();
        let l = landau_sum(z, q).unwrap();
        let scale = (q + 1.0).powf(1.0 - z);
        prop_assert!((h.total - l).abs() <= 1e-11 * scale, "z={z} q={q}: {} vs {l}", h.total);
    }

    #[test]
    fn density_inversion_round_trip(eps in 1.05f64..5.0, lb in -2.5f64..0.3) {
        let b = 10f64.powf(lb);
        let pt = GasPointT0::new(eps, b).unwrap();
        prop_assume!(!pt.at_threshold() && off_integer(pt.filling()));
        let n = number_density(&pt, Method::Quadrature).unwrap().value;
        let inv = fermi_energy_from_density(n, b).unwrap();
        prop_assert!((inv.eps_f - eps).abs() < 1e-10 * eps, "eps={eps} b={b}: {}", inv.eps_f);
    }

    #[test]
    fn convolution_is_linear(mu in 1.5f64..4.0, lt in -4.0f64..-1.0, a in -3.0f64..3.0) {
        let pt = GasPointT::new(mu, 10f64.powf(lt), 0.1).unwrap();
        let spec = ConvolutionSpec::default();
        let f = |e: f64| (e * e - 1.0).powf(1.5);
        let g = |e: f64| (1.3 * e).sin();
        let cf = convolve_from_t0(f, &pt, &spec).unwrap();
        let cg = convolve_from_t0(g, &pt, &spec).unwrap();
        let cfg = convolve_from_t0(|e| a * f(e) + g(e), &pt, &spec).unwrap();
        let expect = a * cf.value + cg.value;
        let tol = 4.0 * (a.abs() * cf.abs_error + cg.abs_error + cfg.abs_error) + 1e-12 * (1.0 + expect.abs());
        prop_assert!((cfg.value - expect).abs() <= tol);
    }

    #[test]
    fn convolution_reproduces_hump_moments(mu in 1.5f64..4.0, lt in -4.0f64..-2.3) {
        let t = 10f64.powf(lt);
        let pt = GasPointT::new(mu, t, 0.1).unwrap();
        let c = convolve_from_t0(|e| e * e, &pt, &ConvolutionSpec::default()).unwrap();
        prop_assert!(!c.nondegenerate);
        let exact = mu * mu + PI * PI * t * t / 3.0;
        prop_assert!((c.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn magnetization_stays_inside_envelope(eps in 1.5f64..6.0, lb in -3.0f64..-1.3) {
        let b = 10f64.powf(lb);
        let pt = GasPointT0::new(eps, b).unwrap();
        prop_assume!(off_integer(pt.filling()));
        let m = magnetization(&pt, Method::Quadrature).unwrap().value;
        let env = magnetization_envelope_t0(eps, b).unwrap();
        // the envelope keeps only the leading oscillatory term
        let slack = 0.011 * b.powf(1.5) + 1e-12;
        prop_assert!(m >= env.lower - slack && m <= env.upper + slack,
            "eps={eps} b={b}: {m} not in [{}, {}]", env.lower, env.upper);
    }

    #[test]
    fn envelope_decreases_with_temperature(mu in 1.01f64..50.0, lb in -3.0f64..1.0, lt in -7.0f64..-1.0) {
        let b = 10f64.powf(lb);
        let t = 10f64.powf(lt);
        let spec = OscSeriesSpec::default();
        let lo = oscillation_envelope_t(&GasPointT::new(mu, t, b).unwrap(), &spec).unwrap();
        let hi = oscillation_envelope_t(&GasPointT::new(mu, 1.5 * t, b).unwrap(), &spec).unwrap();
        prop_assert!(hi <= lo * (1.0 + 1e-12), "mu={mu} b={b} t={t}: {hi} > {lo}");
    }
}

#[test]
fn i_z_fourier_matches_quadrature() {
    let spec = OscSeriesSpec::default();
    for z in [-1.5, -2.5, -3.5] {
        for alpha in [0.13, 0.5, 2.91] {
            for beta in [0.05, 0.12, 0.3] {
                let f = i_z_fourier(z, alpha, beta, &spec).unwrap();
                let q = i_z_quadrature(z, alpha, beta).unwrap();
                assert!((f - q).abs() < 1e-10, "z={z} alpha={alpha} beta={beta}: {f} vs {q}");
            }
        }
    }
}
