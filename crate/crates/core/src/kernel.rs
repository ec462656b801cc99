//! The reproducing kernel of the SFB band-limited space `B_{L,K}` in `R^d`.
//!
//! By the addition theorem,
//!
//! ```text
//! K(x, y) = (r1 r2)^{(2-d)/2} sum_{l<=L} I_l(r1, r2) dim_l / vol(S^{d-1}) P_l(gamma)
//! ```
//!
//! where `I_l` is the band-limited radial integral of order `l + (d-2)/2`
//! and `gamma` the cosine of the angle between `x` and `y`.

use std::f64::consts::PI;

use crate::bessel::{coincident, jv, ladder, lommel_cross, lommel_diagonal};
use crate::error::{ensure_dimension, ensure_finite, Error, Result};
use crate::harmonic::{dim_f64, legendre_pd_all, sphere_volume};
use crate::sum::CompensatedSum;

/// Degree cap `L`, Bessel bandwidth `K` and dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandlimit {
    d: u32,
    l_max: usize,
    k: f64,
}

impl Bandlimit {
    pub fn new(d: u32, l_max: usize, k: f64) -> Result<Self> {
        ensure_dimension(d)?;
        ensure_finite("K", k)?;
        if k <= 0.0 {
            return Err(Error::Domain(format!("Bessel bandwidth K must be positive, got {k}")));
        }
        Ok(Self { d, l_max, k })
    }

    /// `L = round(kappa K)`.
    pub fn from_kappa(d: u32, kappa: f64, k: f64) -> Result<Self> {
        ensure_finite("kappa", kappa)?;
        if kappa < 0.0 {
            return Err(Error::Domain(format!("kappa must be >= 0, got {kappa}")));
        }
        ensure_finite("K", k)?;
        Self::new(d, (kappa * k).round() as usize, k)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kappa(&self) -> f64 {
        self.l_max as f64 / self.k
    }

    /// The Bessel order of degree `l`.
    pub fn order(&self, l: usize) -> f64 {
        l as f64 + self.nu0()
    }

    pub(crate) fn nu0(&self) -> f64 {
        0.5 * (self.d as f64 - 2.0)
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    ensure_finite(name, x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `K_{L,K}(x, y)` for `|x| = r1`, `|y| = r2` and direction cosine `gamma`.
pub fn kernel_full(bl: &Bandlimit, r1: f64, r2: f64, gamma: f64) -> Result<f64> {
    check_positive("r1", r1)?;
    check_positive("r2", r2)?;
    let d = bl.d;
    let k = bl.k;
    let count = bl.l_max + 1;
    let p = legendre_pd_all(d, bl.l_max, gamma)?;
    let vol = sphere_volume(d)?;
    let nu0 = bl.nu0();
    let mut acc = CompensatedSum::new();
    if coincident(r1, r2) {
        let m = 0.5 * (r1 + r2);
        let j = ladder(nu0, m * k, count + 1);
        for l in 0..count {
            let radial = lommel_diagonal(nu0 + l as f64, m * k, k, j[l], j[l + 1]);
            acc.add(radial * dim_f64(d, l)? * p[l]);
        }
    } else {
        let ja = ladder(nu0, r1 * k, count + 1);
        let jb = ladder(nu0, r2 * k, count + 1);
        for l in 0..count {
            let radial = lommel_cross(r1, r2, k, ja[l], ja[l + 1], jb[l], jb[l + 1]);
            acc.add(radial * dim_f64(d, l)? * p[l]);
        }
    }
    Ok((r1 * r2).powf(0.5 * (2.0 - d as f64)) * acc.value() / vol)
}

/// Value of the diagonal at the origin, where only `l = 0` survives.
pub fn kernel_diag_origin(d: u32, k: f64) -> Result<f64> {
    ensure_dimension(d)?;
    let df = d as f64;
    let g = libm::tgamma(0.5 * df);
    Ok(k.powi(d as i32) / (2f64.powf(df - 2.0) * g * g * df * sphere_volume(d)?))
}

/// `K_{L,K}(x, x)` for `|x| = r`.
pub fn kernel_diag(bl: &Bandlimit, r: f64) -> Result<f64> {
    ensure_finite("radius", r)?;
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    let d = bl.d;
    let k = bl.k;
    let x = k * r;
    if x < 1e-6 {
        return kernel_diag_origin(d, k);
    }
    let count = bl.l_max + 1;
    let nu0 = bl.nu0();
    let j = ladder(nu0, x, count + 1);
    let mut acc = CompensatedSum::new();
    for l in 0..count {
        acc.add(dim_f64(d, l)? * lommel_diagonal(nu0 + l as f64, x, k, j[l], j[l + 1]));
    }
    Ok(r.powf(2.0 - d as f64) * acc.value() / sphere_volume(d)?)
}

/// `K^{-d} K_{L,K}(x, x)`.
pub fn kernel_diag_normalized(bl: &Bandlimit, r: f64) -> Result<f64> {
    Ok(kernel_diag(bl, r)? / bl.k.powi(bl.d as i32))
}

/// The Paley-Wiener kernel for the ball of radius `K` in frequency space,
/// `K^d (2 pi)^{-d/2} J_{d/2}(K dist) / (K dist)^{d/2}`.
pub fn pw_kernel(d: u32, k: f64, dist: f64) -> Result<f64> {
    ensure_dimension(d)?;
    check_positive("K", k)?;
    ensure_finite("distance", dist)?;
    if dist < 0.0 {
        return Err(Error::Domain(format!("distance must be >= 0, got {dist}")));
    }
    let h = 0.5 * d as f64;
    let kd = k.powi(d as i32);
    let x = k * dist;
    if x < 1e-8 {
        return Ok(kd / (2f64.powf(2.0 * h) * PI.powf(h) * libm::tgamma(h + 1.0)));
    }
    Ok(kd / (2.0 * PI).powf(h) * jv(h, x) / x.powf(h))
}

/// `2^a Gamma(a+1) J_a(t) / t^a`, the Bessel profile normalized to 1 at 0.
pub fn normalized_bessel_profile(alpha: f64, t: f64) -> f64 {
    let t = t.abs();
    if t < 1e-8 {
        return 1.0;
    }
    2f64.powf(alpha) * libm::tgamma(alpha + 1.0) * jv(alpha, t) / t.powf(alpha)
}

/// One sample of the near-diagonal explorer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearDiagSample {
    /// `K(x, x + y/K) / K(x, x)`.
    pub ratio: f64,
    /// The rotation-invariant comparison `Lambda_{d/2}(|y|)`.
    pub radial_form: f64,
    /// The product comparison
    /// `sinc(|y| cos theta) Lambda_{(d-1)/2}(|y| sin theta kappa / |x|)`.
    pub product_form: f64,
}

/// Kernel ratio near the diagonal for `|x| = r` and an offset `y` of length
/// `y_len` at angle `theta` to `x`, together with the two comparison
/// profiles. Nothing here asserts that the ratio approaches either one.
pub fn near_diag_ratio(bl: &Bandlimit, r: f64, y_len: f64, theta: f64) -> Result<NearDiagSample> {
    check_positive("radius", r)?;
    ensure_finite("offset length", y_len)?;
    ensure_finite("angle", theta)?;
    if y_len < 0.0 {
        return Err(Error::Domain(format!("offset length must be >= 0, got {y_len}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("angle must lie in [0, pi], got {theta}")));
    }
    let d = bl.d as f64;
    let (s, c) = theta.sin_cos();
    let radial_form = normalized_bessel_profile(0.5 * d, y_len);
    let perp = y_len * s * bl.kappa() / r;
    let product_form = normalized_bessel_profile(0.5, y_len * c) * normalized_bessel_profile(0.5 * (d - 1.0), perp);
    if y_len == 0.0 {
        return Ok(NearDiagSample { ratio: 1.0, radial_form, product_form });
    }
    let h = y_len / bl.k;
    let r2 = (r * r + 2.0 * r * h * c + h * h).sqrt();
    if r2 == 0.0 {
        return Err(Error::Domain("offset lands on the origin".into()));
    }
    let gamma = ((r + h * c) / r2).clamp(-1.0, 1.0);
    let ratio = kernel_full(bl, r, r2, gamma)? / kernel_diag(bl, r)?;
    Ok(NearDiagSample { ratio, radial_form, product_form })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let k: f64 = 7.5;
        for l in [0usize, 3, 20] {
            let bl = Bandlimit::new(2, l, k).unwrap();
            assert!((kernel_diag(&bl, 0.0).unwrap() - k * k / (4.0 * PI)).abs() < 1e-13);
            let bl = Bandlimit::new(3, l, k).unwrap();
            assert!((kernel_diag(&bl, 0.0).unwrap() - k.powi(3) / (6.0 * PI * PI)).abs() < 1e-12);
        }
        // The l = 0 term is continuous into the analytic limit.
        let bl = Bandlimit::new(3, 4, k).unwrap();
        let near = kernel_diag(&bl, 2e-6).unwrap();
        assert!((near / kernel_diag(&bl, 0.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn full_matches_diag_on_the_diagonal() {
        let bl = Bandlimit::new(3, 17, 23.0).unwrap();
        for &r in &[0.1, 0.7, 1.9] {
            let a = kernel_full(&bl, r, r, 1.0).unwrap();
            let b = kernel_diag(&bl, r).unwrap();
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn symmetry() {
        let bl = Bandlimit::new(4, 9, 12.0).unwrap();
        let a = kernel_full(&bl, 0.4, 0.9, 0.3).unwrap();
        let b = kernel_full(&bl, 0.9, 0.4, 0.3).unwrap();
        assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
    }

    #[test]
    fn paley_wiener_values() {
        assert!((pw_kernel(2, 3.0, 0.0).unwrap() - 9.0 / (4.0 * PI)).abs() < 1e-14);
        assert!((pw_kernel(3, 1.0, PI).unwrap() - 0.005_132_991_127_342_167_594_6).abs() < 1e-15);
        assert!((pw_kernel(2, 40.0, 0.3).unwrap() + 4.741_694_826_567_283_783).abs() < 1e-12);
        let at_zero = pw_kernel(3, 2.0, 0.0).unwrap();
        assert!((pw_kernel(3, 2.0, 1e-7).unwrap() / at_zero - 1.0).abs() < 1e-12);
    }

    #[test]
    fn large_degree_cap_approaches_paley_wiener() {
        let bl = Bandlimit::new(2, 400, 40.0).unwrap();
        // Two points at radius 1 separated by a chord of length 0.3.
        let half_angle = (0.15f64).asin();
        let gamma = (2.0 * half_angle).cos();
        let sfb = kernel_full(&bl, 1.0, 1.0 + 1e-3, gamma).unwrap();
        let dist = (1.0f64 + (1.0 + 1e-3f64).powi(2) - 2.0 * (1.0 + 1e-3) * gamma).sqrt();
        let pw = pw_kernel(2, 40.0, dist).unwrap();
        assert!((sfb - pw).abs() <= 0.02 * pw.abs(), "{sfb} vs {pw}");
    }

    #[test]
    fn normalized_profile() {
        assert_eq!(normalized_bessel_profile(1.5, 0.0), 1.0);
        let t: f64 = 0.83;
        assert!((normalized_bessel_profile(0.5, t) - t.sin() / t).abs() < 1e-15);
        assert!((normalized_bessel_profile(1.5, 2.0) - 0.653_096_662_469_987_426).abs() < 1e-14);
    }

    #[test]
    fn near_diag_identity_at_zero_offset() {
        let bl = Bandlimit::from_kappa(3, 1.0, 32.0).unwrap();
        let s = near_diag_ratio(&bl, 0.5, 0.0, 1.0).unwrap();
        assert_eq!(s.ratio, 1.0);
        assert_eq!(s.radial_form, 1.0);
        let s = near_diag_ratio(&bl, 0.5, 1e-9, 1.0).unwrap();
        assert!((s.ratio - 1.0).abs() < 1e-9);
        assert!(near_diag_ratio(&bl, 0.5, 1.0, 4.0).is_err());
    }

    #[test]
    fn bandlimit_construction() {
        let bl = Bandlimit::from_kappa(2, 0.5, 64.0).unwrap();
        assert_eq!(bl.l_max(), 32);
        assert_eq!(bl.kappa(), 0.5);
        assert!(Bandlimit::new(2, 3, 0.0).is_err());
        assert!(Bandlimit::new(1, 3, 1.0).is_err());
    }
}
