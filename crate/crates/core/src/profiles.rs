//! Limit profiles of band-limited kernel diagonals.
//!
//! * `U(r)`: the arcsecant step, `1/2` on `[0, 1]` and `1/2 - arcsec(r)/pi`
//!   beyond. It is the limit of `sum_{l<=L} J_l(L r)^2`.
//! * `U^(d)(r)`: the dimension-weighted version, the limit of the
//!   `harm_dim`-weighted sum of squared Bessel functions.
//! * `W^(d)(r)`: the radial average `c_d r^{-d} integral_0^r U^(d)(t) t dt`,
//!   which is the limit of `K^{-d} K_{L,K}(x, x)` for `L = K`.
//!
//! Dilation by `kappa` means `f_kappa(r) = f(r / kappa)`.

use std::f64::consts::{FRAC_1_PI, PI};

use crate::bessel::ladder;
use crate::error::{ensure_dimension, ensure_finite, Error, Result};
use crate::harmonic::{dim_f64, harm_dim, sphere_volume};
use crate::quadrature::{gauss_legendre_unit, integrate_adaptive, Tolerance};
use crate::sum::CompensatedSum;

fn check_radius(r: f64) -> Result<()> {
    ensure_finite("radius", r)?;
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    Ok(())
}

fn check_kappa(kappa: f64) -> Result<()> {
    ensure_finite("kappa", kappa)?;
    if kappa <= 0.0 {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    Ok(())
}

/// `U(r)`.
pub fn profile_u(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(u(r))
}

pub(crate) fn u(r: f64) -> f64 {
    if r <= 1.0 {
        0.5
    } else {
        0.5 - (1.0 / r).acos() * FRAC_1_PI
    }
}

/// `U^(d)(r)`.
pub fn profile_u_d(d: u32, r: f64) -> Result<f64> {
    ensure_dimension(d)?;
    check_radius(r)?;
    Ok(u_d(d, r))
}

/// Both branches of `U^(d)` reduce, under `t = 1/sin(phi)`, to
/// `(r^{d-2}/pi) integral_0^{phi0} sin^{d-2}(phi) dphi` with
/// `phi0 = arcsin(min(1, 1/r))`, an entire integrand.
pub(crate) fn u_d(d: u32, r: f64) -> f64 {
    match d {
        2 => u(r),
        3 => {
            if r <= 1.0 {
                r * FRAC_1_PI
            } else {
                // r - sqrt(r^2 - 1), written without cancellation.
                FRAC_1_PI / (r + (r * r - 1.0).sqrt())
            }
        }
        _ => {
            let m = (d - 2) as i32;
            let phi0 = if r <= 1.0 { 0.5 * PI } else { (1.0 / r).asin() };
            let (x, w) = sine_power_rule();
            let half = 0.5 * phi0;
            let integral: f64 = x
                .iter()
                .zip(w)
                .map(|(xi, wi)| wi * (half * (1.0 + xi)).sin().powi(m))
                .sum::<f64>()
                * half;
            r.powi(m) * integral * FRAC_1_PI
        }
    }
}

fn sine_power_rule() -> (&'static [f64], &'static [f64]) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = RULE.get_or_init(|| gauss_legendre_unit(48));
    (x, w)
}

fn w_scale(d: u32) -> f64 {
    2.0 / (libm::tgamma(d as f64 - 1.0) * sphere_volume(d).expect("d >= 2"))
}

/// `W^(d)` on `[0, 1]`, where it is constant.
pub fn w_plateau(d: u32) -> Result<f64> {
    ensure_dimension(d)?;
    Ok(w_scale(d) * u_d(d, 1.0) / d as f64)
}

/// `W^(d)(r / kappa)`.
pub fn profile_w_d(d: u32, r: f64, kappa: f64) -> Result<f64> {
    ensure_dimension(d)?;
    check_radius(r)?;
    check_kappa(kappa)?;
    w_d(d, r / kappa)
}

pub(crate) fn w_d(d: u32, rho: f64) -> Result<f64> {
    let plateau_integral = u_d(d, 1.0) / d as f64;
    if rho <= 1.0 {
        return Ok(w_scale(d) * plateau_integral);
    }
    // integral_1^rho U^(d)(t) t dt with t = 1 + s^2 to absorb the square-root
    // behaviour of U^(d) at t = 1.
    let tail = integrate_adaptive(
        |s: f64| {
            let t = 1.0 + s * s;
            2.0 * s * t * u_d(d, t)
        },
        0.0,
        (rho - 1.0).sqrt(),
        &[],
        Tolerance::new(1e-15, 1e-13),
    )?;
    Ok(w_scale(d) * (plateau_integral + tail) / rho.powi(d as i32))
}

/// Which profile a [`ProfileSpec`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    U,
    UD,
    WD,
}

/// A profile with its dimension and dilation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    d: u32,
    kind: ProfileKind,
    kappa: f64,
}

impl ProfileSpec {
    pub fn new(d: u32, kind: ProfileKind, kappa: f64) -> Result<Self> {
        ensure_dimension(d)?;
        check_kappa(kappa)?;
        Ok(Self { d, kind, kappa })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let rho = r / self.kappa;
        match self.kind {
            ProfileKind::U => Ok(u(rho)),
            ProfileKind::UD => Ok(u_d(self.d, rho)),
            ProfileKind::WD => w_d(self.d, rho),
        }
    }
}

/// `(U^(d)(R) R, W^(d)(R) R^{d-1})` at `R = 10^4`, to compare with the tail
/// limits `1/((d-1) pi)` and `2/(Gamma(d) pi vol(S^{d-1}))`.
pub fn profile_tail_check(d: u32) -> Result<(f64, f64)> {
    ensure_dimension(d)?;
    let big = 1e4;
    Ok((u_d(d, big) * big, w_d(d, big)? * big.powi(d as i32 - 1)))
}

/// The analytic tail limits matching [`profile_tail_check`].
pub fn profile_tail_limits(d: u32) -> Result<(f64, f64)> {
    ensure_dimension(d)?;
    let df = d as f64;
    Ok((
        1.0 / ((df - 1.0) * PI),
        2.0 / (libm::tgamma(df) * PI * sphere_volume(d)?),
    ))
}

/// `sum_{l=0}^{L} harm_dim(d, l) J_{l+(d-2)/2}(L r)^2 / harm_dim(d, L)`.
pub fn weighted_bessel_sum(d: u32, l_max: usize, r: f64) -> Result<f64> {
    ensure_dimension(d)?;
    if d < 3 {
        return Err(Error::Domain("the weighted Bessel sum needs d >= 3".into()));
    }
    if l_max == 0 {
        return Err(Error::InvalidInput("the weighted Bessel sum needs L >= 1".into()));
    }
    ensure_finite("radius", r)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let nu0 = 0.5 * (d as f64 - 2.0);
    let js = ladder(nu0, l_max as f64 * r, l_max + 1);
    let mut acc = CompensatedSum::new();
    for (l, j) in js.iter().enumerate() {
        acc.add(dim_f64(d, l)? * j * j);
    }
    Ok(acc.value() / dim_f64(d, l_max)?)
}

/// A bounded function on `(0, inf)` with a finite limit at infinity.
pub trait RadialFunction: Sync {
    fn value(&self, r: f64) -> f64;

    fn at_infinity(&self) -> f64;

    /// Arguments where the function has kinks or jumps.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `U` as a [`RadialFunction`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ProfileU;

impl RadialFunction for ProfileU {
    fn value(&self, r: f64) -> f64 {
        u(r)
    }

    fn at_infinity(&self) -> f64 {
        0.0
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![1.0]
    }
}

/// A constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl RadialFunction for Constant {
    fn value(&self, _r: f64) -> f64 {
        self.0
    }

    fn at_infinity(&self) -> f64 {
        self.0
    }
}

/// The indicator of `(0, upper]`.
#[derive(Debug, Clone, Copy)]
pub struct Indicator {
    pub upper: f64,
}

impl RadialFunction for Indicator {
    fn value(&self, r: f64) -> f64 {
        if r > 0.0 && r <= self.upper {
            1.0
        } else {
            0.0
        }
    }

    fn at_infinity(&self) -> f64 {
        if self.upper.is_infinite() {
            1.0
        } else {
            0.0
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        if self.upper.is_finite() {
            vec![self.upper]
        } else {
            Vec::new()
        }
    }
}

/// A closure with an explicitly supplied limit at infinity.
pub struct FnRadial<F> {
    pub f: F,
    pub limit: f64,
    pub breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> RadialFunction for FnRadial<F> {
    fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    fn at_infinity(&self) -> f64 {
        self.limit
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

fn check_functional_args(d: u32, r: f64) -> Result<()> {
    ensure_dimension(d)?;
    if d < 3 {
        return Err(Error::Domain("the summation functionals need d >= 3".into()));
    }
    ensure_finite("radius", r)?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `A_N(f) = sum_{l=0}^{N-1} (C_{l+1} - C_l)/C_N f(N r / l)`, with
/// `C_l = harm_dim(d, l)` and the `l = 0` term taken at infinity.
pub fn appendix_functional_a(d: u32, n: usize, r: f64, f: &dyn RadialFunction) -> Result<f64> {
    check_functional_args(d, r)?;
    if n == 0 {
        return Err(Error::InvalidInput("N must be >= 1".into()));
    }
    let c_n = harm_dim(d, n)? as f64;
    let mut acc = CompensatedSum::new();
    let mut c_prev = harm_dim(d, 0)?;
    for l in 0..n {
        let c_next = harm_dim(d, l + 1)?;
        let weight = (c_next - c_prev) as f64 / c_n;
        let value = if l == 0 {
            f.at_infinity()
        } else {
            f.value(n as f64 * r / l as f64)
        };
        acc.add(weight * value);
        c_prev = c_next;
    }
    Ok(acc.value())
}

/// `B(f) = integral_1^inf f(t r) (d-2) t^{1-d} dt`, evaluated as
/// `(d-2) integral_0^1 f(r/s) s^{d-3} ds`.
pub fn appendix_functional_b(d: u32, r: f64, f: &dyn RadialFunction) -> Result<f64> {
    check_functional_args(d, r)?;
    let m = d as i32 - 3;
    let cuts: Vec<f64> = f.breakpoints().iter().map(|&x| r / x).collect();
    let integral = integrate_adaptive(
        |s: f64| {
            let fv = if s == 0.0 { f.at_infinity() } else { f.value(r / s) };
            fv * s.powi(m)
        },
        0.0,
        1.0,
        &cuts,
        Tolerance::new(1e-13, 1e-12),
    )?;
    Ok((d as f64 - 2.0) * integral)
}
