//! Quadrature, root bracketing, bounded series summation and finite-difference
//! stencils used by the rest of the crate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

// 15-point Kronrod extension of the 7-point Gauss rule. Odd indices of XGK
// are the Gauss abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and forced subdivision points for [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Points where the integrand may be non-smooth. Points outside the open
    /// integration interval are ignored; order does not matter.
    pub breakpoints: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 4000, breakpoints: Vec::new() }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidInput("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    /// Number of panels in the final partition.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by position so refinement order is
    // independent of heap internals.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { x })
        }
    };

    let fc = eval(centr)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * EPS) {
        error = error.max(50.0 * EPS * resabs);
    }
    Ok(Panel { a, b, value, error, resabs })
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// `b` may be `f64::INFINITY`; the half line is then mapped onto `(0, 1]` by
/// `u = 1/(1 + x - a)`. Reversed limits flip the sign.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    spec.validate()?;
    if a.is_nan() || b.is_nan() || a == f64::INFINITY || a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return Err(Error::InvalidInput(format!("unsupported integration limits [{a}, {b}]")));
    }
    if b == f64::INFINITY {
        let g = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = a + (1.0 - u) / u;
            f(x) / (u * u)
        };
        let mapped: Vec<f64> = spec
            .breakpoints
            .iter()
            .filter(|&&x| x > a && x.is_finite())
            .map(|&x| 1.0 / (1.0 + (x - a)))
            .collect();
        let inner = QuadratureSpec { breakpoints: mapped, ..spec.clone() };
        return integrate_finite(&g, 0.0, 1.0, &inner);
    }
    if b < a {
        let q = integrate_finite(&f, b, a, spec)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    integrate_finite(&f, a, b, spec)
}

fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0, subdivisions: 0 });
    }
    let mut cuts: Vec<f64> = spec.breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::with_capacity(edges.len() * 4);
    let mut frozen: Vec<Panel> = Vec::new();
    for w in edges.windows(2) {
        heap.push(gk15(f, w[0], w[1])?);
    }

    loop {
        let (value, error, resabs) = heap
            .iter()
            .chain(frozen.iter())
            .fold((0.0, 0.0, 0.0), |acc, p| (acc.0 + p.value, acc.1 + p.error, acc.2 + p.resabs));
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        let panels = heap.len() + frozen.len();
        if error <= target || heap.is_empty() {
            // Frozen panels are at rounding resolution; their error is the
            // best attainable and is accepted when it dominates.
            if error <= target || error <= 100.0 * EPS * resabs.max(value.abs()) + target {
                return Ok(Quadrature { value, abs_error: error, subdivisions: panels });
            }
            return Err(Error::ToleranceFailure { best: value, error });
        }
        if panels >= spec.max_subdivisions {
            return Err(Error::ToleranceFailure { best: value, error });
        }
        let worst = heap.pop().expect("heap checked non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width <= 1e3 * EPS * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE) || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        heap.push(gk15(f, worst.a, mid)?);
        heap.push(gk15(f, mid, worst.b)?);
    }
}

/// Scan bracket and bisection tolerance for [`find_roots_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub bracket: (f64, f64),
    pub tol: f64,
    pub max_iter: usize,
}

impl RootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { bracket: (lo, hi), tol: 1e-12 * lo.abs().max(hi.abs()).max(1.0), max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `f(x)`; large when the sign change is a jump.
    pub residual: f64,
    /// Set when the sign change is a discontinuity rather than a zero. `x` is
    /// then the lower edge of the jump.
    pub discontinuous: bool,
}

/// All sign changes of `f` on a uniform `n_scan`-cell grid over the bracket,
/// each refined by bisection, in increasing order.
pub fn find_roots_scan<F: Fn(f64) -> f64>(f: F, n_scan: usize, spec: &RootSpec) -> Result<Vec<Root>> {
    let (lo, hi) = spec.bracket;
    if n_scan < 2 {
        return Err(Error::InvalidInput("n_scan must be at least 2".into()));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid root bracket ({lo}, {hi})")));
    }
    let step = (hi - lo) / n_scan as f64;
    let mut roots = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n_scan {
        let xb = if i == n_scan { hi } else { lo + step * i as f64 };
        let fb = f(xb);
        if fa == 0.0 {
            roots.push(Root { x: xa, residual: 0.0, discontinuous: false });
        } else if fa.is_finite() && fb.is_finite() && fb != 0.0 && fa.signum() != fb.signum() {
            roots.push(bisect(&f, xa, xb, fa, fb, spec));
        }
        xa = xb;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(Root { x: xa, residual: 0.0, discontinuous: false });
    }
    Ok(roots)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, spec: &RootSpec) -> Root {
    let cell = b - a;
    let scale = fa.abs() + fb.abs();
    for _ in 0..spec.max_iter {
        if b - a <= spec.tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Root { x: m, residual: 0.0, discontinuous: false };
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // A continuous crossing shrinks |f| in proportion to the bracket; a jump
    // keeps it at the size of the step.
    let shrink = (fa.abs() + fb.abs()) / scale;
    let discontinuous = shrink > (100.0 * (b - a) / cell).max(1e-6);
    if discontinuous {
        Root { x: a, residual: fa, discontinuous }
    } else {
        let x = if fa.abs() <= fb.abs() { a } else { b };
        Root { x, residual: fa.abs().min(fb.abs()), discontinuous }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Value of the tail bound at the first omitted index.
    pub tail_bound: f64,
}

/// Sums `term(n)` for `n = 1, 2, ...` and stops at the first `n` whose
/// `bound(n)` (a bound on the tail from `n` on) falls below `tail_tol`.
pub fn sum_with_bound<T, B>(term: T, bound: B, tail_tol: f64, max_terms: usize) -> Result<SeriesSum>
where
    T: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidInput("tail_tol must be positive".into()));
    }
    let mut value = 0.0;
    let mut comp = 0.0;
    for n in 1..=max_terms + 1 {
        let tail = bound(n);
        if tail < tail_tol {
            return Ok(SeriesSum { value, terms: n - 1, tail_bound: tail });
        }
        if n > max_terms {
            break;
        }
        // Kahan summation keeps long slowly-decaying sums clean.
        let y = term(n) - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
    }
    Err(Error::Truncation { terms: max_terms, partial: value })
}

/// Second-order central first derivative.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fourth-order five-point first derivative.
pub fn five_point_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order five-point second derivative.
pub fn second_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}

/// Fourth-order seven-point fourth derivative.
pub fn fourth_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let s = -(f(x - 3.0 * h) + f(x + 3.0 * h)) + 12.0 * (f(x - 2.0 * h) + f(x + 2.0 * h))
        - 39.0 * (f(x - h) + f(x + h))
        + 56.0 * f(x);
    s / (6.0 * h.powi(4))
}

/// Second-order one-sided first derivative. A positive `h` samples to the
/// right of `x`, a negative one to the left.
pub fn one_sided_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
}
