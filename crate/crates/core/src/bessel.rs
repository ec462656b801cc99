//! Bessel functions of the first kind `J_v(t)` for real order `v >= 0` and
//! real argument `t >= 0`, together with derivatives, positive zeros and the
//! band-limited radial integral `integral_0^K J_v(a k) J_v(b k) k dk`.
//!
//! Evaluation picks one of three methods:
//!
//! * the ascending power series while its terms decrease from the start
//!   (`t <= 2 sqrt(v + 1)`),
//! * Hankel's large-argument expansion when `t` is large against both a
//!   fixed floor and `v^2`, provided the series actually converges there,
//! * Miller's backward recurrence otherwise, normalized with the Neumann
//!   series `(t/2)^mu = sum_j c_j J_{mu+2j}(t)`.
//!
//! Ladders `J_{v0}, J_{v0+1}, ...` at a single argument come out of one
//! backward sweep and are what the kernel and concentration modules use.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::sum::CompensatedSum;

/// A validated Bessel order `v >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(v: f64) -> Result<Self> {
        ensure_finite("Bessel order", v)?;
        if v < 0.0 {
            return Err(Error::Domain(format!("Bessel order must be >= 0, got {v}")));
        }
        Ok(Self(v))
    }

    /// The order `l + (d - 2)/2` attached to harmonic degree `l` in `R^d`.
    pub fn for_degree(d: u32, l: usize) -> Result<Self> {
        crate::error::ensure_dimension(d)?;
        Ok(Self(l as f64 + 0.5 * (d as f64 - 2.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The first positive zeros of `J_v`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    pub order: BesselOrder,
    pub zeros: Vec<f64>,
}

fn check_argument(t: f64) -> Result<()> {
    ensure_finite("Bessel argument", t)?;
    if t < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {t}")));
    }
    Ok(())
}

/// `J_v(t)`.
pub fn bessel_j(order: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    Ok(jv(order.0, t))
}

/// `J_{v0 + l}(t)` for `l = 0 .. count`.
pub fn bessel_j_ladder(order: BesselOrder, t: f64, count: usize) -> Result<Vec<f64>> {
    check_argument(t)?;
    Ok(ladder(order.0, t, count))
}

/// `J_v'(t)`, from `J_v' = (v/t) J_v - J_{v+1}`.
pub fn bessel_j_prime(order: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    let v = order.0;
    if t == 0.0 {
        return if v == 0.0 {
            Ok(0.0)
        } else if v == 1.0 {
            Ok(0.5)
        } else {
            Err(Error::Domain(format!(
                "J_v'(0) is only defined here for v = 0 or v = 1, got v = {v}"
            )))
        };
    }
    let pair = ladder(v, t, 2);
    Ok(derivative_from_pair(v, t, pair[0], pair[1]))
}

pub(crate) fn derivative_from_pair(v: f64, t: f64, jv: f64, jv1: f64) -> f64 {
    if v == 0.0 {
        -jv1
    } else {
        v / t * jv - jv1
    }
}

pub(crate) fn jv(v: f64, t: f64) -> f64 {
    if t == 0.0 {
        return if v == 0.0 { 1.0 } else { 0.0 };
    }
    if t <= 2.0 * (v + 1.0).sqrt() {
        return series(v, t);
    }
    if t >= 25.0f64.max(v * v / 8.0) {
        if let Some(value) = hankel(v, t) {
            return value;
        }
    }
    ladder(v, t, 1)[0]
}

fn series(v: f64, t: f64) -> f64 {
    let half = 0.5 * t;
    let lead = if v <= 20.0 {
        half.powf(v) / libm::tgamma(v + 1.0)
    } else {
        (v * half.ln() - libm::lgamma(v + 1.0)).exp()
    };
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + v));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Hankel's expansion; `None` when the asymptotic series stalls before
/// reaching double precision.
fn hankel(v: f64, t: f64) -> Option<f64> {
    let mu = 4.0 * v * v;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut peak: f64 = 1.0;
    let mut converged = false;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (8.0 * kf * t);
        if next.abs() > term.abs() && k > 2 {
            break;
        }
        term = next;
        peak = peak.max(term.abs());
        // Signs: P takes a_0 - a_2 + a_4 ..., Q takes a_1 - a_3 + ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged || peak > 10.0 {
        return None;
    }
    // chi = t - phase, phase = (v/2 + 1/4) pi reduced modulo 2 pi.
    let phase = (0.5 * v + 0.25).rem_euclid(2.0) * PI;
    let (st, ct) = t.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = ct * cp + st * sp;
    let sin_chi = st * cp - ct * sp;
    Some((FRAC_2_PI / t).sqrt() * (p * cos_chi - q * sin_chi))
}

/// Miller's backward recurrence for `J_{v0+l}(t)`, `l < count`.
pub(crate) fn ladder(v0: f64, t: f64, count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if t == 0.0 {
        return (0..count)
            .map(|l| if v0 + l as f64 == 0.0 { 1.0 } else { 0.0 })
            .collect();
    }
    let base = v0.floor();
    let mu = v0 - base;
    let n0 = base as usize;
    let top = n0 + count - 1;
    let start = top.max(t.ceil() as usize) + 30 + (15.0 * t.cbrt()).ceil() as usize;

    let mut out = vec![0.0; count];
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-300; // f_k
    // Neumann normalization weights: c_0 = Gamma(mu+1), c_j = (mu+2j) g_j,
    // g_j = Gamma(mu+j)/j!. Generated downwards from the start index.
    let jmax = start / 2;
    let gamma_mu1 = libm::tgamma(mu + 1.0);
    let mut weights = vec![0.0; jmax + 1];
    weights[0] = gamma_mu1;
    let mut g = gamma_mu1;
    for (j, w) in weights.iter_mut().enumerate().skip(1) {
        if j > 1 {
            g *= (mu + j as f64 - 1.0) / j as f64;
        }
        *w = (mu + 2.0 * j as f64) * g;
    }
    let mut norm = 0.0;
    let mut k = start;
    loop {
        if k <= top && k >= n0 {
            out[k - n0] = cur;
        }
        if k.is_multiple_of(2) {
            norm += weights[k / 2] * cur;
        }
        if k == 0 {
            break;
        }
        let prev = 2.0 * (mu + k as f64) / t * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for x in out.iter_mut() {
                *x *= 1e-250;
            }
        }
    }
    let target = if mu == 0.0 { 1.0 } else { (0.5 * t).powf(mu) };
    let scale = target / norm;
    for x in out.iter_mut() {
        *x *= scale;
    }
    out
}

/// Bracket-guarded Newton iteration on a sign change of `f` in `[lo, hi]`.
/// `f` returns the value and derivative.
pub(crate) fn refine_root<F: Fn(f64) -> (f64, f64)>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    guess: Option<f64>,
) -> f64 {
    let mut f_lo = f(lo).0;
    let mut x = match guess {
        Some(g) if g > lo && g < hi => g,
        _ => 0.5 * (lo + hi),
    };
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (f_lo > 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        let mut step_ok = dfx != 0.0;
        let mut next = x - fx / dfx;
        if !step_ok || !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
            step_ok = false;
        }
        let dx = (next - x).abs();
        x = next;
        if (step_ok && dx <= 4.0 * f64::EPSILON * x.abs()) || hi - lo <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

fn mcmahon(v: f64, n: usize) -> f64 {
    let mu = 4.0 * v * v;
    let beta = (n as f64 + 0.5 * v - 0.25) * PI;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e)
}

fn value_and_slope(v: f64, t: f64) -> (f64, f64) {
    let pair = ladder(v, t, 2);
    let j = if t <= 2.0 * (v + 1.0).sqrt() { series(v, t) } else { pair[0] };
    (j, derivative_from_pair(v, t, j, pair[1]))
}

/// Scan for zeros of `J_v` in steps of `pi/2`, stopping when `stop` says so.
fn scan_zeros<S: Fn(&[f64], f64) -> bool>(v: f64, stop: S) -> Vec<f64> {
    let step = 0.5 * PI;
    let mut zeros = Vec::new();
    let mut lo = v.max(1e-3);
    let mut f_lo = jv(v, lo);
    loop {
        let hi = lo + step;
        if stop(&zeros, lo) {
            break;
        }
        let f_hi = jv(v, hi);
        if f_lo == 0.0 {
            zeros.push(lo);
        } else if (f_lo > 0.0) != (f_hi > 0.0) && f_hi != 0.0 {
            let guess = mcmahon(v, zeros.len() + 1);
            zeros.push(refine_root(|x| value_and_slope(v, x), lo, hi, Some(guess)));
        }
        lo = hi;
        f_lo = f_hi;
    }
    zeros
}

/// The first `count` positive zeros of `J_v`.
pub fn bessel_zeros(order: BesselOrder, count: usize) -> Result<ZeroList> {
    if count == 0 {
        return Err(Error::InvalidInput("zero count must be >= 1".into()));
    }
    let zeros = scan_zeros(order.0, |found, _| found.len() >= count);
    Ok(ZeroList { order, zeros })
}

/// All positive zeros of `J_v` that are `<= limit`.
pub fn bessel_zeros_below(order: BesselOrder, limit: f64) -> Result<ZeroList> {
    ensure_finite("zero limit", limit)?;
    let mut zeros = scan_zeros(order.0, |_, lo| lo > limit);
    zeros.retain(|&z| z <= limit);
    Ok(ZeroList { order, zeros })
}

/// Zeros of `J_v` up to and including the first one beyond `limit`.
pub(crate) fn scan_zeros_through(v: f64, limit: f64) -> Vec<f64> {
    scan_zeros(v, |found, _| found.last().is_some_and(|&z| z > limit))
}

/// Relative separation below which two radii are treated as coincident.
pub const COINCIDENCE_THRESHOLD: f64 = 1e-7;

/// `integral_0^K J_v(a k) J_v(b k) k dk` in Lommel's closed form.
pub fn bandlimited_radial_integral(order: BesselOrder, a: f64, b: f64, k: f64) -> Result<f64> {
    for (name, x) in [("a", a), ("b", b), ("K", k)] {
        ensure_finite(name, x)?;
        if x <= 0.0 {
            return Err(Error::Domain(format!("{name} must be positive, got {x}")));
        }
    }
    let v = order.0;
    if coincident(a, b) {
        let m = 0.5 * (a + b);
        let p = ladder(v, m * k, 2);
        return Ok(lommel_diagonal(v, m * k, k, p[0], p[1]));
    }
    let pa = ladder(v, a * k, 2);
    let pb = ladder(v, b * k, 2);
    Ok(lommel_cross(a, b, k, pa[0], pa[1], pb[0], pb[1]))
}

pub(crate) fn coincident(a: f64, b: f64) -> bool {
    (a - b).abs() <= COINCIDENCE_THRESHOLD * a.max(b)
}

/// Off-diagonal Lommel form from `J_v` and `J_{v+1}` at `aK` and `bK`.
pub(crate) fn lommel_cross(a: f64, b: f64, k: f64, ja: f64, ja1: f64, jb: f64, jb1: f64) -> f64 {
    k * (b * ja * jb1 - a * ja1 * jb) / ((b - a) * (b + a))
}

/// Diagonal Lommel form `integral_0^K J_v(r k)^2 k dk` with `x = rK`.
pub(crate) fn lommel_diagonal(v: f64, x: f64, k: f64, j: f64, j1: f64) -> f64 {
    if x == 0.0 {
        return if v == 0.0 { 0.5 * k * k } else { 0.0 };
    }
    0.5 * k * k * (j * j + j1 * j1 - 2.0 * v / x * j * j1)
}

/// `sum_{l=0}^{L} J_{v0+l}(x)^2`.
pub fn bessel_sum_squares(v0: BesselOrder, l_max: usize, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(ladder(v0.0, x, l_max + 1)
        .iter()
        .map(|j| j * j)
        .collect::<CompensatedSum>()
        .value())
}
