//! Complex-path numerical integration for integrands `t^p * exp(P0(t))`:
//! finite straight segments and rays to `+infinity * omega_l`, plus a gamma
//! evaluator for origin-value cross-checks.
//!
//! The kernel is an embedded 7/15 Gauss-Kronrod pair applied to the complex
//! integrand of a real path parameter, driven globally adaptively: the
//! worst-error subinterval is bisected until the summed error estimate meets
//! `max(rel_tol * |result|, abs_floor)`.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::algebra::NormalizedP0;
use crate::error::{Error, Result};

/// Tolerance and budget knobs for the adaptive integrator.
#[derive(Clone, Debug)]
pub struct QuadConfig {
    /// Relative tolerance target on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor (wins near zero results).
    pub abs_floor: f64,
    /// Bisection depth cap per subinterval.
    pub max_subdivisions: u32,
    /// Ray truncation tolerance: the analytic tail bound must fall below it.
    pub tail_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_floor: 1e-14,
            max_subdivisions: 60,
            tail_tol: 1e-16,
        }
    }
}

impl QuadConfig {
    fn validate(&self) -> Result<()> {
        if self.rel_tol <= 0.0 || self.abs_floor <= 0.0 || self.tail_tol <= 0.0 {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// One ray integral `int_0^{+inf*omega_l} t^power exp(P0(t)) dt`.
///
/// `power` is the exponent of `t`; the period `Omega_{k,l}` uses `power = k - 1`
/// with `k = 1..=d` and `direction_index = l` selecting the root of unity
/// `omega_l = exp(2 pi i (l-1)/d)`.
#[derive(Clone, Debug)]
pub struct RayIntegralSpec {
    pub p0: NormalizedP0,
    pub power: u32,
    pub direction_index: usize,
}

impl RayIntegralSpec {
    pub fn new(p0: NormalizedP0, power: u32, direction_index: usize) -> Result<Self> {
        if direction_index < 1 || direction_index > p0.degree() {
            return Err(Error::InvalidInput(format!(
                "direction index {} out of 1..={}",
                direction_index,
                p0.degree()
            )));
        }
        Ok(RayIntegralSpec {
            p0,
            power,
            direction_index,
        })
    }
}

/// Value together with its accumulated error estimate and node count.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub est_error: f64,
    pub nodes: u64,
}

/// `omega_l = exp(2 pi i (l-1)/d)`, `l = 1..=d`.
pub fn root_of_unity(d: usize, l: usize) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (l - 1) as f64 / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

// 15-point Kronrod nodes on [-1, 1]; odd indices are the embedded 7-point
// Gauss nodes. Standard QUADPACK abscissae and weights.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.000_000_000_000_000_000_000_000_000_000_00,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// QUADPACK-style error rescaling from the raw `|K - G|` difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 7/15 Gauss-Kronrod evaluation of a complex integrand on `[a, b]`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, nodes: &mut u64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    let fc = f(center);
    fv[7] = fc;
    let mut res_g = fc * WG7[3];
    let mut res_k = fc * WGK15[7];
    let mut res_abs = res_k.norm();
    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        if j % 2 == 1 {
            res_g += sum * WG7[j / 2];
        }
        res_k += sum * WGK15[j];
        res_abs += WGK15[j] * (f1.norm() + f2.norm());
    }
    *nodes += 15;
    let mean = res_k * 0.5;
    let mut res_asc = WGK15[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let err = (res_k - res_g).norm() * half.abs();
    (
        res_k * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    )
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap by error; tie-break on position for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

const MAX_SEGMENTS: usize = 100_000;

/// Globally adaptive integration of a complex integrand over `[a, b]`.
fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    cfg.validate()?;
    if a == b {
        return Ok(Quadrature {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            nodes: 0,
        });
    }
    let mut nodes = 0u64;
    let (value, err) = gk15(f, a, b, &mut nodes);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        err,
        depth: 0,
    });
    let mut total_value = value;
    let mut total_err = err;
    loop {
        let tol = (cfg.rel_tol * total_value.norm()).max(cfg.abs_floor);
        if total_err <= tol {
            break;
        }
        let worst = heap.pop().expect("heap cannot be empty");
        if worst.depth >= cfg.max_subdivisions || heap.len() + 2 > MAX_SEGMENTS {
            return Err(Error::ToleranceNotMet {
                value: total_value,
                est_error: total_err,
                requested: tol,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(f, worst.a, mid, &mut nodes);
        let (rv, re) = gk15(f, mid, worst.b, &mut nodes);
        total_value += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
            depth: worst.depth + 1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
            depth: worst.depth + 1,
        });
    }
    Ok(Quadrature {
        value: total_value,
        est_error: total_err,
        nodes,
    })
}

/// `int_{z_from}^{z_to} t^power exp(P0(t)) dt` along the straight segment.
pub fn integrate_between(
    p0: &NormalizedP0,
    power: u32,
    z_from: Complex64,
    z_to: Complex64,
    cfg: &QuadConfig,
) -> Result<Quadrature> {
    let delta = z_to - z_from;
    if delta == Complex64::new(0.0, 0.0) {
        return Ok(Quadrature {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            nodes: 0,
        });
    }
    let f = |t: f64| {
        let z = z_from + delta * t;
        z.powu(power) * p0.eval(z).exp() * delta
    };
    adaptive(&f, 0.0, 1.0, cfg)
}

/// `int_0^{z_end} t^power exp(P0(t)) dt` along the straight segment from the origin.
pub fn integrate_segment(
    p0: &NormalizedP0,
    power: u32,
    z_end: Complex64,
    cfg: &QuadConfig,
) -> Result<Quadrature> {
    integrate_between(p0, power, Complex64::new(0.0, 0.0), z_end, cfg)
}

/// Log-modulus envelope of the ray integrand at radius `r`:
/// `power*ln r - r^d/d + sum_j |a_j| r^j`, an upper bound for
/// `ln |r^power exp(P0(r omega))|` since `omega^d = 1`.
fn envelope(p0: &NormalizedP0, power: u32, r: f64) -> f64 {
    let d = p0.degree() as f64;
    let mut h = -r.powf(d) / d;
    if power > 0 {
        h += power as f64 * r.ln();
    }
    let mut rj = 1.0;
    for a in p0.lower_coeffs() {
        h += a.norm() * rj;
        rj *= r;
    }
    h
}

/// Derivative of the envelope in `r`. `r * envelope'(r)` has exactly one
/// positive-real sign change, so the envelope rises to a single hump and then
/// decreases monotonically.
fn envelope_slope(p0: &NormalizedP0, power: u32, r: f64) -> f64 {
    let d = p0.degree();
    let mut s = -r.powi(d as i32 - 1);
    if power > 0 {
        s += power as f64 / r;
    }
    let mut rj = 1.0 / r;
    for (j, a) in p0.lower_coeffs().iter().enumerate() {
        if j > 0 {
            s += j as f64 * a.norm() * rj;
        }
        rj *= r;
    }
    s
}

/// Smallest radius (scanning by doubling, then bisecting) where `g(r) <= goal`,
/// valid because `g` is eventually decreasing.
fn descend_to<G: Fn(f64) -> f64>(g: G, mut lo: f64, goal: f64, r_cap: f64) -> Option<f64> {
    if g(lo) <= goal {
        return Some(lo);
    }
    let mut hi = lo * 2.0;
    while g(hi) > goal {
        lo = hi;
        hi *= 2.0;
        if hi > 4.0 * r_cap {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Pick a truncation radius so the analytic tail bound stays below
/// `tail_tol`, plus a 20 percent margin, and return it with the tail estimate.
fn truncation_radius(p0: &NormalizedP0, power: u32, cfg: &QuadConfig) -> Result<(f64, f64)> {
    let d = p0.degree() as f64;
    let r_cap = 10.0 * (d * (1.0 / cfg.tail_tol).ln()).powf(1.0 / d) + 50.0;
    let fail = || Error::TailBoundFailure { r_cap };

    // past the single hump: slope <= -1/2 makes exp(envelope)/|slope| a tail bound
    let r_slope = descend_to(|r| envelope_slope(p0, power, r), 1.0, -0.5, r_cap).ok_or_else(fail)?;
    // envelope below the tolerance target (the ln 2 absorbs the 1/|slope| factor)
    let target = cfg.tail_tol.ln() - std::f64::consts::LN_2;
    let r_env = descend_to(|r| envelope(p0, power, r), r_slope, target, r_cap).ok_or_else(fail)?;
    let radius = 1.2 * r_env.max(r_slope);
    if radius > r_cap {
        return Err(fail());
    }
    let slope = envelope_slope(p0, power, radius);
    let tail_est = envelope(p0, power, radius).exp() / slope.abs().max(0.5);
    Ok((radius, tail_est))
}

/// `int_0^{+inf*omega_l} t^power exp(P0(t)) dt`, computed on the truncated
/// straight ray `t = r*omega_l`, `r in [0, R]`, with the tail bounded
/// analytically and folded into the error estimate.
pub fn integrate_ray(spec: &RayIntegralSpec, cfg: &QuadConfig) -> Result<Quadrature> {
    cfg.validate()?;
    let d = spec.p0.degree();
    let omega = root_of_unity(d, spec.direction_index);
    let (radius, tail_est) = truncation_radius(&spec.p0, spec.power, cfg)?;
    let p0 = spec.p0.clone();
    let power = spec.power;
    let f = |r: f64| {
        let rp = if power == 0 { 1.0 } else { r.powi(power as i32) };
        p0.eval(r * omega).exp() * rp
    };
    let inner = adaptive(&f, 0.0, radius, cfg)?;
    Ok(Quadrature {
        value: inner.value * omega.powu(spec.power + 1),
        est_error: inner.est_error + tail_est,
        nodes: inner.nodes,
    })
}

const LANCZOS_G: f64 = 4.742_187_5; // 607/128
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// `Gamma(x)` for `x > 0` by the Lanczos approximation (reflection below 1/2),
/// good to better than 12 significant digits across the domain.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::GammaDomain { x });
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return Ok(pi / ((pi * x).sin() * gamma_fn(1.0 - x)?));
    }
    let xx = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xx + k as f64);
    }
    let t = xx + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(xx + 0.5) * (-t).exp() * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NormalizedP0;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn segment_zero_endpoint() {
        let p0 = NormalizedP0::from_real(2, &[0.0, 0.0]).unwrap();
        let q = integrate_segment(&p0, 0, c(0.0, 0.0), &QuadConfig::default()).unwrap();
        assert_eq!(q.value, c(0.0, 0.0));
        assert_eq!(q.nodes, 0);
    }

    #[test]
    fn segment_elementary_d1() {
        // P0 = -t, k = 0, z = 1: 1 - exp(-1)
        let p0 = NormalizedP0::from_real(1, &[0.0]).unwrap();
        let q = integrate_segment(&p0, 0, c(1.0, 0.0), &QuadConfig::default()).unwrap();
        assert!((q.value.re - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!(q.value.im.abs() < 1e-14);
    }

    #[test]
    fn segment_elementary_d2() {
        // P0 = -t^2/2, k = 1, z = 2: 1 - exp(-2)
        let p0 = NormalizedP0::from_real(2, &[0.0, 0.0]).unwrap();
        let q = integrate_segment(&p0, 1, c(2.0, 0.0), &QuadConfig::default()).unwrap();
        assert!((q.value.re - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn ray_elementary_values() {
        let cfg = QuadConfig::default();
        // d=2, a=0, power=1: int r exp(-r^2/2) dr = 1, for both directions
        let p0 = NormalizedP0::from_real(2, &[0.0, 0.0]).unwrap();
        for l in 1..=2 {
            let spec = RayIntegralSpec::new(p0.clone(), 1, l).unwrap();
            let q = integrate_ray(&spec, &cfg).unwrap();
            // omega^{power+1} = omega^2 = 1 for both square roots of unity
            assert!((q.value - c(1.0, 0.0)).norm() < 1e-10, "l={l}: {}", q.value);
        }
        // d=2, a=0, power=0, l=1: sqrt(pi/2)
        let spec = RayIntegralSpec::new(p0, 0, 1).unwrap();
        let q = integrate_ray(&spec, &cfg).unwrap();
        let expect = (std::f64::consts::PI / 2.0).sqrt();
        assert!((q.value - c(expect, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn ray_gamma_lemma_value() {
        // d=3, a=0, power=0, l=2: omega_2 * 3^{-2/3} * Gamma(1/3)
        let cfg = QuadConfig::default();
        let p0 = NormalizedP0::from_real(3, &[0.0, 0.0, 0.0]).unwrap();
        let spec = RayIntegralSpec::new(p0, 0, 2).unwrap();
        let q = integrate_ray(&spec, &cfg).unwrap();
        let omega2 = root_of_unity(3, 2);
        let expect = omega2 * 3.0f64.powf(-2.0 / 3.0) * gamma_fn(1.0 / 3.0).unwrap();
        assert!((q.value - expect).norm() < 1e-10, "{} vs {}", q.value, expect);
    }

    #[test]
    fn ray_index_corrected_origin_periods() {
        // Omega_{kl}(0) = omega_l^k d^{k/d - 1} Gamma(k/d), power = k - 1
        let cfg = QuadConfig::default();
        for d in 1..=4usize {
            let p0 = NormalizedP0::from_real(d, &vec![0.0; d]).unwrap();
            for k in 1..=d {
                for l in 1..=d {
                    let spec = RayIntegralSpec::new(p0.clone(), (k - 1) as u32, l).unwrap();
                    let q = integrate_ray(&spec, &cfg).unwrap();
                    let expect = root_of_unity(d, l).powu(k as u32)
                        * (d as f64).powf(k as f64 / d as f64 - 1.0)
                        * gamma_fn(k as f64 / d as f64).unwrap();
                    assert!(
                        (q.value - expect).norm() < 1e-9 * expect.norm().max(1.0),
                        "d={d} k={k} l={l}: {} vs {}",
                        q.value,
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn path_independence_two_legs() {
        // integrand is entire, so the straight path 0 -> z equals 0 -> w -> z
        let cfg = QuadConfig::default();
        let p0 = NormalizedP0::new(
            3,
            vec![c(0.2, -0.1), c(-0.3, 0.2), c(0.1, 0.4)],
        )
        .unwrap();
        let cases = [
            (c(1.3, 0.7), c(0.4, -0.9)),
            (c(-0.8, 1.1), c(1.0, 1.0)),
            (c(2.0, -0.3), c(-1.2, -0.5)),
        ];
        for (z, w) in cases {
            let direct = integrate_segment(&p0, 2, z, &cfg).unwrap();
            let leg1 = integrate_segment(&p0, 2, w, &cfg).unwrap();
            let leg2 = integrate_between(&p0, 2, w, z, &cfg).unwrap();
            let bent = leg1.value + leg2.value;
            let tol = 10.0 * cfg.rel_tol * direct.value.norm().max(1.0);
            assert!((direct.value - bent).norm() <= tol, "path dependence at z={z}, w={w}");
        }
    }

    #[test]
    fn tail_doubling_radius_is_stable() {
        // doubling the truncation radius moves the result by < 10*tail_tol*|value|
        let cfg = QuadConfig::default();
        let p0 = NormalizedP0::from_real(2, &[0.3, -0.2]).unwrap();
        let (radius, _) = truncation_radius(&p0, 1, &cfg).unwrap();
        let omega = root_of_unity(2, 1);
        let f = |r: f64| p0.eval(r * omega).exp() * r;
        let a = adaptive(&f, 0.0, radius, &cfg).unwrap();
        let b = adaptive(&f, 0.0, 2.0 * radius, &cfg).unwrap();
        assert!((a.value - b.value).norm() <= 10.0 * cfg.tail_tol * a.value.norm().max(1.0));
    }

    #[test]
    fn asymptotic_ratio_along_growth_direction() {
        // F_j(z) P0'(z) / (z^j exp(P0(z))) -> 1 along z = R * d^{1/d} e^{i pi/d}
        let cfg = QuadConfig::default();
        for d in 1..=3usize {
            let p0 = NormalizedP0::from_real(d, &vec![0.05; d]).unwrap();
            let dir = Complex64::from_polar(
                (d as f64).powf(1.0 / d as f64),
                std::f64::consts::PI / d as f64,
            );
            // largest R keeping |P0(z)| <= 600
            let mut r = 1.0f64;
            while p0.eval(dir * (r * 1.05)).norm() <= 600.0 {
                r *= 1.05;
                if r > 1e6 {
                    break;
                }
            }
            let z = dir * r;
            let dp = p0.derivative();
            for j in 0..d as u32 {
                let f = integrate_segment(&p0, j, z, &cfg).unwrap();
                let ratio = f.value * dp.eval(z) / (z.powu(j) * p0.eval(z).exp());
                assert!(
                    (ratio - c(1.0, 0.0)).norm() <= 0.05,
                    "d={d} j={j}: ratio {ratio}"
                );
            }
        }
    }

    #[test]
    fn tolerance_not_met_reports_payload() {
        let p0 = NormalizedP0::from_real(2, &[0.0, 0.0]).unwrap();
        let cfg = QuadConfig {
            rel_tol: 1e-300,
            abs_floor: 1e-300,
            max_subdivisions: 2,
            tail_tol: 1e-16,
        };
        match integrate_segment(&p0, 0, c(3.0, 1.0), &cfg) {
            Err(Error::ToleranceNotMet { value, est_error, .. }) => {
                assert!(value.norm() > 0.0);
                assert!(est_error > 0.0);
            }
            other => panic!("expected ToleranceNotMet, got {other:?}"),
        }
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((gamma_fn(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
        // 12+ significant digits at 1/3
        let g13 = 2.678_938_534_707_747_6;
        assert!((gamma_fn(1.0 / 3.0).unwrap() - g13).abs() < g13 * 1e-12);
        assert!(matches!(gamma_fn(0.0), Err(Error::GammaDomain { .. })));
        assert!(matches!(gamma_fn(-1.5), Err(Error::GammaDomain { .. })));
    }

    #[test]
    fn gamma_matches_quadrature_integral() {
        // Gamma(1/3) = int_0^inf u^{-2/3} e^{-u} du, checked through the ray
        // machinery with d=3, power=0: that integral equals 3^{-2/3}Gamma(1/3).
        let cfg = QuadConfig::default();
        let p0 = NormalizedP0::from_real(3, &[0.0, 0.0, 0.0]).unwrap();
        let spec = RayIntegralSpec::new(p0, 0, 1).unwrap();
        let q = integrate_ray(&spec, &cfg).unwrap();
        let gamma_from_quad = q.value.re * 3.0f64.powf(2.0 / 3.0);
        assert!((gamma_from_quad - gamma_fn(1.0 / 3.0).unwrap()).abs() < 1e-9);
    }
}
