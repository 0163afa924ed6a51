//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Tolerances and runtime budgets are pinned below.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use magnetogas::cli::{figure, RunConfig, Table};
use magnetogas::gas_finite_t::{
    self as ft, convolve_from_t0, hump, ConvolutionSpec, GasPointT, OscSeriesSpec,
};
use magnetogas::gas_zero_t::{self as zt, GasPointT0, Method};
use magnetogas::hfamily::{h_z, landau_sum_inverse_sqrt};
use magnetogas::hurwitz::{hurwitz_zeta, hurwitz_zeta_fourier, hurwitz_zeta_hermite, zeta, ZetaEngineConfig};
use magnetogas::numerics::{integrate, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Bernoulli polynomials B_1..B_5, written out.
fn bernoulli_poly(n: usize, q: f64) -> f64 {
    match n {
        1 => q - 0.5,
        2 => q * q - q + 1.0 / 6.0,
        3 => q * q * q - 1.5 * q * q + 0.5 * q,
        4 => q.powi(4) - 2.0 * q.powi(3) + q * q - 1.0 / 30.0,
        5 => q.powi(5) - 2.5 * q.powi(4) + 5.0 / 3.0 * q.powi(3) - q / 6.0,
        _ => unreachable!(),
    }
}

fn ac1() -> Outcome {
    const TOL: f64 = 1e-13;
    let mut r = rng(1);
    let cfg = ZetaEngineConfig::DEFAULT;
    let mut worst = 0.0f64;
    for m in 0..=4usize {
        for _ in 0..100 {
            let q: f64 = 10.0 - r.random_range(0.0..10.0);
            let want = -bernoulli_poly(m + 1, q) / (m + 1) as f64;
            let got = hurwitz_zeta(-(m as f64), q, &cfg).unwrap().value;
            // scaled to the magnitude of the result once it exceeds 1
            worst = worst.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    outcome(worst < TOL, format!("max scaled error {worst:.2e} (tol {TOL:.0e})"))
}

fn ac2() -> Outcome {
    const TOL: f64 = 1e-9;
    const TOL_FOURIER: f64 = 1e-8;
    let cfg = ZetaEngineConfig::DEFAULT;
    let zs = [-3.5, -2.5, -1.5, -0.5, 0.5, 2.0];
    let qs = [0.1, 0.5, 1.0, 3.0, 10.0, 100.0];
    let (mut worst, mut worst_f) = (0.0f64, 0.0f64);
    for &z in &zs {
        for &q in &qs {
            let a = hurwitz_zeta(z, q, &cfg).unwrap().value;
            let h = hurwitz_zeta_hermite(z, q, &cfg).unwrap().value;
            worst = worst.max((a - h).abs());
            if z < 0.0 && q < 1.0 {
                let f = hurwitz_zeta_fourier(z, q, 1e-15).unwrap().value;
                worst_f = worst_f.max((f - a).abs()).max((f - h).abs());
            }
        }
    }
    outcome(
        worst < TOL && worst_f < TOL_FOURIER,
        format!("engine vs Hermite {worst:.2e} (tol {TOL:.0e}); Fourier {worst_f:.2e} (tol {TOL_FOURIER:.0e})"),
    )
}

fn ac3() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 200 {
        let q: f64 = 50.0 - r.random_range(0.0..50.0);
        if q == q.floor() {
            continue;
        }
        let brute = landau_sum_inverse_sqrt(q).unwrap();
        let closed = 2.0 * h_z(0.5, q).unwrap().total;
        worst = worst.max(rel(closed, brute));
        n += 1;
    }
    outcome(worst < TOL, format!("max relative error {worst:.2e} over 200 fillings (tol {TOL:.0e})"))
}

fn random_point(r: &mut ChaCha8Rng, eps: (f64, f64), b_log: (f64, f64)) -> GasPointT0 {
    loop {
        let e = r.random_range(eps.0..eps.1);
        let b = 10f64.powf(r.random_range(b_log.0..b_log.1));
        let pt = GasPointT0::new(e, b).unwrap();
        if !pt.at_threshold() {
            return pt;
        }
    }
}

fn ac4() -> Outcome {
    const TOL_OMEGA: f64 = 1e-7;
    const TOL_N: f64 = 1e-10;
    let mut r = rng(4);
    let (mut w_worst, mut n_worst) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let pt = random_point(&mut r, (1.05, 6.0), (-2.0, 0.3));
        let wq = zt::grand_potential(&pt, Method::Quadrature).unwrap().value;
        let wb = zt::grand_potential(&pt, Method::BruteForce).unwrap().value;
        w_worst = w_worst.max(rel(wq, wb));
        let nq = zt::number_density(&pt, Method::Quadrature).unwrap().value;
        let nb = zt::number_density_levels(&pt);
        n_worst = n_worst.max(rel(nq, nb));
    }
    outcome(
        w_worst < TOL_OMEGA && n_worst < TOL_N,
        format!("omega {w_worst:.2e} (tol {TOL_OMEGA:.0e}); n {n_worst:.2e} (tol {TOL_N:.0e})"),
    )
}

fn ac5() -> Outcome {
    const TOL_C: f64 = 1e-9;
    const TOL_M: f64 = 1e-10;
    let z32 = zeta(-1.5, 1.0).unwrap();
    let z52 = zeta(-2.5, 1.0).unwrap();
    let (c0, c1) = zt::residual_constants().unwrap();
    // −∫ζ̃₃ = ⅔ζ(−3/2) + 1/60 and ½∫qζ̃₃ = (2/15)ζ(−5/2) − 1/1260
    let d0 = (-c0 - (2.0 / 3.0 * z32 + 1.0 / 60.0)).abs();
    let d1 = (0.5 * c1 - (2.0 / 15.0 * z52 - 1.0 / 1260.0)).abs();
    let moments = [0.0, 2.0 / 3.0 * z32, 2.0 / 3.0 * z32 - 8.0 / 15.0 * z52];
    let dm = (0..3).map(|k| (zt::zeta_minus_half_moment(k as i32).unwrap() - moments[k]).abs()).fold(0.0, f64::max);
    outcome(
        d0.max(d1) < TOL_C && dm < TOL_M,
        format!("constants {:.2e} (tol {TOL_C:.0e}); moments {dm:.2e} (tol {TOL_M:.0e})", d0.max(d1)),
    )
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn ac6() -> Outcome {
    const MIN_SLOPE: f64 = 3.9;
    const PHASE: f64 = 0.37;
    let mut slopes = Vec::new();
    for &e in &[1.5, 2.0, 4.0] {
        let p2 = (e - 1.0) * (e + 1.0);
        let (mut lx, mut ly) = (Vec::new(), Vec::new());
        for k in 0..9 {
            let target = 10f64.powf(-3.0 + 2.0 * k as f64 / 8.0);
            // snap to a fixed fractional filling, staying inside [1e−3, 1e−1]
            let n = (p2 / target).floor();
            let b = p2 / (n + PHASE);
            let b = if b > 0.1 { p2 / (n + 1.0 + PHASE) } else { b };
            let pt = GasPointT0::new(e, b).unwrap();
            let s = zt::grand_potential_field_part(&pt, Method::SmallBExpansion).unwrap().value;
            let q = zt::grand_potential_field_part(&pt, Method::Quadrature).unwrap().value;
            lx.push(b.ln());
            ly.push((s - q).abs().ln());
        }
        slopes.push(slope(&lx, &ly));
    }
    let min = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(min >= MIN_SLOPE, format!("log-log slopes {slopes:.3?} (min {MIN_SLOPE})"))
}

fn ac7() -> Outcome {
    const TOL_U: f64 = 1e-9;
    const TOL_N: f64 = 1e-5;
    let mut r = rng(7);
    let (mut u_worst, mut n_worst) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < 50 {
        let pt = random_point(&mut r, (1.1, 5.0), (-1.7, 0.0));
        let (e, b) = (pt.eps_f(), pt.b());
        let h = 1e-6;
        // threshold-free: no Landau threshold within the difference stencil
        let q_lo = ((e - 2.0 * h).powi(2) - 1.0) / b;
        let q_hi = ((e + 2.0 * h).powi(2) - 1.0) / b;
        if q_lo.floor() != q_hi.floor() {
            continue;
        }
        let w = zt::grand_potential(&pt, Method::Quadrature).unwrap().value;
        let n = zt::number_density(&pt, Method::Quadrature).unwrap().value;
        let u = zt::energy_density(&pt, Method::BruteForce).unwrap().value;
        u_worst = u_worst.max(rel(w + 2.0 * e * n, u));
        let wq = |x: f64| zt::grand_potential(&GasPointT0::new(x, b).unwrap(), Method::Quadrature).unwrap().value;
        let dw = (-wq(e + 2.0 * h) + 8.0 * wq(e + h) - 8.0 * wq(e - h) + wq(e - 2.0 * h)) / (12.0 * h);
        // n = −(1/m)∂Ω/∂μ reads n = −½∂ω/∂ε in the m⁴/4π², m³/2π² units
        n_worst = n_worst.max(rel(-0.5 * dw, n));
        done += 1;
    }
    outcome(
        u_worst < TOL_U && n_worst < TOL_N,
        format!("u = omega + 2 eps n: {u_worst:.2e} (tol {TOL_U:.0e}); n = -d omega/d eps / 2: {n_worst:.2e} (tol {TOL_N:.0e})"),
    )
}

fn ac8() -> Outcome {
    const TOL_FRACTION: f64 = 0.01;
    const TOL_KERNEL: f64 = 1e-10;
    // max |ζ(−3/2, x)| on [0, 1], sets the T = 0 oscillation amplitude scale
    let zeta_scale = zeta(-1.5, 1.0).unwrap().abs();
    let spec = OscSeriesSpec::default();
    let mu = 2.0;
    let cases = [
        (1e-4, 0.5),
        (1e-3, 0.5),
        (1e-2, 0.5),
        (1e-3, 0.47),
        (1e-2, 0.2),
        (1e-2, 0.1),
        (1e-2, 0.2 / 3.0),
        (1e-2, 0.02),
        (1e-2, 0.02 / 3.0),
    ];
    let mut worst = 0.0f64;
    let mut in_band = 0;
    for &(t, b) in &cases {
        let pt = GasPointT::new(mu, t, b).unwrap();
        let w0 = |e: f64| {
            GasPointT0::new(e, b).and_then(|p| zt::grand_potential(&p, Method::Quadrature)).map(|r| r.value).unwrap_or(f64::NAN)
        };
        let conv = convolve_from_t0(w0, &pt, &ConvolutionSpec::for_field(b)).unwrap().value;
        let series = ft::grand_potential_finite_t(&pt, &spec).unwrap().value;
        let amp = 2.0 / 3.0 * b.powf(2.5) / mu * zeta_scale;
        worst = worst.max((conv - series).abs() / amp);
        let r = pt.damping_ratio();
        if (0.1 - 1e-12..=3.0 + 1e-12).contains(&r) {
            in_band += 1;
        }
    }
    let mut kernel = 0.0f64;
    for &a in &[0.1f64, 1.0, 5.0] {
        let qs = QuadratureSpec::new(1e-14, 1e-13).with_breakpoints(vec![0.0]);
        let re = integrate(|x| (a * x).cos() * hump(x), -80.0, 80.0, &qs).unwrap().value;
        kernel = kernel.max((re - PI * a / (PI * a).sinh()).abs());
    }
    outcome(
        worst < TOL_FRACTION && kernel < TOL_KERNEL && in_band >= 5,
        format!(
            "max |conv - series| / osc amplitude {worst:.2e} (tol {TOL_FRACTION}) over {} points, {in_band} with muT/b in [0.1, 3]; kernel {kernel:.2e} (tol {TOL_KERNEL:.0e})",
            cases.len()
        ),
    )
}

fn ac9() -> Outcome {
    const MIN_SUPPRESSION: f64 = 100.0;
    let spec = OscSeriesSpec::default();
    let (mu, b) = (100.0, 1.0);
    let env = |r: f64| ft::oscillation_envelope_t(&GasPointT::new(mu, r * b / mu, b).unwrap(), &spec).unwrap();
    let ratios: Vec<f64> = (0..=40).map(|k| 0.1 * 30f64.powf(k as f64 / 40.0)).collect();
    let vals: Vec<f64> = ratios.iter().map(|&r| env(r)).collect();
    let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    let suppression = vals[0] / vals[vals.len() - 1];
    outcome(
        decreasing && suppression > MIN_SUPPRESSION,
        format!("strictly decreasing: {decreasing}; envelope(0.1)/envelope(3) = {suppression:.3e} (min {MIN_SUPPRESSION})"),
    )
}

fn ac10() -> Outcome {
    const TOL_LANDAU: f64 = 1e-3;
    let spec = OscSeriesSpec::default();
    let mu = 1.0 + 5e-4;
    let mut worst = 0.0f64;
    for &(t, b) in &[(1e-5, 1e-3), (1e-5, 2.3e-4), (2e-6, 1.1e-4)] {
        for k in 0..8 {
            let b = b * (1.0 + 0.01 * k as f64);
            let pt = GasPointT::new(mu, t, b).unwrap();
            let r = ft::magnetization_osc_finite_t(&pt, &spec).unwrap();
            let l = ft::magnetization_nonrel_landau(&pt, &spec).unwrap();
            // normalized by the oscillation envelope so zero crossings do not blow up the ratio
            let scale = ft::oscillation_envelope_t(&pt, &spec).unwrap();
            worst = worst.max((r - l).abs() / scale);
        }
    }
    const FILLING: f64 = 3.37;
    let mut devs = Vec::new();
    for &p in &[0.05, 0.02, 0.01] {
        let p2: f64 = p * p;
        let e = (1.0 + p2).sqrt();
        let b = p2 / FILLING;
        let w = zt::grand_potential(&GasPointT0::new(e, b).unwrap(), Method::BruteForce).unwrap().value;
        let w_nr = zt::nonrelativistic_grand_potential(e - 1.0, b).unwrap().value;
        devs.push(((w / w_nr - 1.0).abs(), p2));
    }
    let order_ok = devs.iter().all(|&(d, p2)| d < 2.0 * p2) && devs.windows(2).all(|w| w[1].0 < w[0].0);
    outcome(
        worst < TOL_LANDAU && order_ok,
        format!(
            "Landau series {worst:.2e} of envelope (tol {TOL_LANDAU:.0e}); |omega/omega_nr - 1| = {:.2e}, {:.2e}, {:.2e} vs p_F^2 = 2.5e-3, 4e-4, 1e-4",
            devs[0].0, devs[1].0, devs[2].0
        ),
    )
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn count_local_max(v: &[f64]) -> usize {
    v.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

fn ac11() -> Outcome {
    let cfg = RunConfig::default();
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // Fig. 1: n rises with ε_F; one slope spike per Landau threshold crossed,
    // and much sharper steps at b = 0.5 than at b = 0.1
    let f1 = figure(1, None, &cfg).unwrap();
    let e = col(&f1, "eps_f");
    let mut roughness = Vec::new();
    for (name, b) in [("n_b0.1", 0.1), ("n_b0.5", 0.5)] {
        let n = col(&f1, name);
        let s: Vec<f64> = (1..e.len()).map(|i| (n[i] - n[i - 1]) / (e[i] - e[i - 1])).collect();
        check(s.iter().all(|&x| x >= 0.0), "fig1 monotone");
        let q = |x: f64| (x * x - 1.0) / b;
        let crossings = (q(e[e.len() - 1]).ceil() - 1.0 - q(e[0]).floor()) as usize;
        check(count_local_max(&s) == crossings, "fig1 step count");
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        roughness.push(s.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max) / mean);
    }
    check(roughness[1] > 3.0 * roughness[0], "fig1 b=0.5 steps sharper than b=0.1");

    // Fig. 2: ε_F = 1.5 above 1.3; one minimum per integer crossing of
    // p_F²/b wherever the grid resolves the period
    let f2 = figure(2, None, &cfg).unwrap();
    let b = col(&f2, "b");
    let (lo, hi) = (col(&f2, "n_eps1.3"), col(&f2, "n_eps1.5"));
    check(lo.iter().zip(&hi).all(|(l, h)| h > l), "fig2 ordering");
    for (n, eps) in [(&lo, 1.3f64), (&hi, 1.5)] {
        let p2 = eps * eps - 1.0;
        let q: Vec<f64> = b.iter().map(|x| p2 / x).collect();
        let start = (1..q.len()).find(|&i| q[i - 1] - q[i] < 0.1).unwrap();
        let minima = (start.max(1)..n.len() - 1).filter(|&i| n[i] < n[i - 1] && n[i] < n[i + 1]).count();
        // crossings from the first resolved step onwards, that step included
        let crossings = (q[start - 1].floor() - q[q.len() - 1].floor()) as usize;
        check(minima == crossings && minima > 0, "fig2 period count");
    }

    // Fig. 3: M inside its envelopes up to the next oscillatory order;
    // upper envelopes ordered by ε_F
    let f3 = figure(3, None, &cfg).unwrap();
    let b = col(&f3, "b");
    let (m, l4, u4, u8, u16) =
        (col(&f3, "m_eps4"), col(&f3, "lower_eps4"), col(&f3, "upper_eps4"), col(&f3, "upper_eps8"), col(&f3, "upper_eps16"));
    let zeta_32_max = 0.0316;
    for i in 0..b.len() {
        let next = b[i].powf(1.5) * (4.0 * 16.0 + 1.0) / (3.0 * 64.0) * zeta_32_max;
        check(m[i] <= u4[i] + next && m[i] >= l4[i] - next, "fig3 envelope bracket");
        check(u8[i] > u4[i] && u16[i] > u8[i], "fig3 envelope ordering");
    }
    check(count_local_max(&m) >= 10, "fig3 oscillation");

    // Fig. 4: b = 10 above b = 1 above b = 0.1, each non-increasing in T
    let f4 = figure(4, None, &cfg).unwrap();
    let (a, c, d) = (col(&f4, "upper_b0.1"), col(&f4, "upper_b1"), col(&f4, "upper_b10"));
    check((0..a.len()).all(|i| d[i] > c[i] && c[i] > a[i]), "fig4 ordering");
    for v in [&a, &c, &d] {
        check(v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "fig4 monotone in T");
    }

    // Fig. 5: colder curve above, both rising with b, sphere line linear in b
    let f5 = figure(5, None, &cfg).unwrap();
    let b = col(&f5, "b");
    let (hot, cold, line) = (col(&f5, "upper_t1e-5"), col(&f5, "upper_t1e-7"), col(&f5, "sphere_line"));
    check(hot.iter().zip(&cold).all(|(h, c)| c >= h), "fig5 ordering");
    check(cold.windows(2).all(|w| w[1] > w[0]) && hot.windows(2).all(|w| w[1] > w[0]), "fig5 rising");
    check(b.iter().zip(&line).all(|(x, y)| (y / x - line[0] / b[0]).abs() < 1e-12 * y / x), "fig5 sphere line");

    // Fig. 6: amplitudes ordered z = −1/2 > −3/2 > −5/2, period 1 in q
    let f6 = figure(6, Some(401), &cfg).unwrap();
    let amp = |name: &str| col(&f6, name).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    check(amp("zeta_m0.5") > amp("zeta_m1.5") && amp("zeta_m1.5") > amp("zeta_m2.5"), "fig6 amplitude ordering");
    for name in ["zeta_m0.5", "zeta_m1.5", "zeta_m2.5"] {
        let v = col(&f6, name);
        check((0..300).all(|i| (v[i] - v[i + 100]).abs() < 1e-10), "fig6 period");
    }

    outcome(failures.is_empty(), if failures.is_empty() { "all figure checks hold".into() } else { failures.join("; ") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("AC1", ac1, 1),
        ("AC2", ac2, 10),
        ("AC3", ac3, 5),
        ("AC4", ac4, 60),
        ("AC5", ac5, 10),
        ("AC6", ac6, 60),
        ("AC7", ac7, 60),
        ("AC8", ac8, 120),
        ("AC9", ac9, 30),
        ("AC10", ac10, 10),
        ("AC11", ac11, 120),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{name} {} {} [{:.2}s of {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
