//! Spherical-harmonic bookkeeping on `S^{d-1}`: the dimension of each degree
//! space, the normalized Gegenbauer polynomials that appear in the addition
//! theorem, and sphere volumes.

use crate::error::{ensure_dimension, ensure_finite, Error, Result};

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Dimension of the space of degree-`l` spherical harmonics on `S^{d-1}`,
/// `C(l+d-1, l) - C(l+d-3, l-2)`.
pub fn harm_dim(d: u32, l: usize) -> Result<u128> {
    ensure_dimension(d)?;
    let overflow = || Error::Overflow(format!("harm_dim(d = {d}, l = {l})"));
    let l = l as u64;
    let d = d as u64;
    let first = binomial(l + d - 1, l).ok_or_else(overflow)?;
    let second = if l >= 2 {
        binomial(l + d - 3, l - 2).ok_or_else(overflow)?
    } else {
        0
    };
    Ok(first - second)
}

/// `sum_{l <= L} harm_dim(d, l)`.
pub fn harm_dim_cumulative(d: u32, l_max: usize) -> Result<u128> {
    let mut total: u128 = 0;
    for l in 0..=l_max {
        total = total
            .checked_add(harm_dim(d, l)?)
            .ok_or_else(|| Error::Overflow(format!("harm_dim_cumulative(d = {d}, L = {l_max})")))?;
    }
    Ok(total)
}

/// `harm_dim` as a float, for use as a weight.
pub(crate) fn dim_f64(d: u32, l: usize) -> Result<f64> {
    harm_dim(d, l).map(|n| n as f64)
}

fn check_cosine(t: f64) -> Result<()> {
    ensure_finite("direction cosine", t)?;
    if t.abs() > 1.0 {
        return Err(Error::Domain(format!("direction cosine must lie in [-1, 1], got {t}")));
    }
    Ok(())
}

/// The Legendre polynomial `P_l^(d)` on `S^{d-1}`, normalized to `P(1) = 1`.
/// For `d = 2` this is the Chebyshev polynomial `T_l`.
pub fn legendre_pd(d: u32, l: usize, t: f64) -> Result<f64> {
    ensure_dimension(d)?;
    check_cosine(t)?;
    Ok(*legendre_ladder(d, l, t).last().expect("ladder is never empty"))
}

/// `P_0^(d)(t), ..., P_L^(d)(t)`.
pub fn legendre_pd_all(d: u32, l_max: usize, t: f64) -> Result<Vec<f64>> {
    ensure_dimension(d)?;
    check_cosine(t)?;
    Ok(legendre_ladder(d, l_max, t))
}

fn legendre_ladder(d: u32, l_max: usize, t: f64) -> Vec<f64> {
    let alpha = 0.5 * (d as f64 - 2.0);
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(1.0);
    if l_max >= 1 {
        out.push(t);
    }
    for l in 2..=l_max {
        let lf = l as f64;
        let den = lf + 2.0 * alpha - 1.0;
        let next = 2.0 * (lf + alpha - 1.0) / den * t * out[l - 1] - (lf - 1.0) / den * out[l - 2];
        out.push(next);
    }
    out
}

/// Surface measure of the unit sphere `S^{d-1}`, `2 pi^{d/2} / Gamma(d/2)`.
pub fn sphere_volume(d: u32) -> Result<f64> {
    ensure_dimension(d)?;
    let h = 0.5 * d as f64;
    Ok(2.0 * std::f64::consts::PI.powf(h) / libm::tgamma(h))
}

/// Volume of the unit ball in `R^d`.
pub fn ball_volume(d: u32) -> Result<f64> {
    Ok(sphere_volume(d)? / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dimensions() {
        assert_eq!(harm_dim(3, 2).unwrap(), 5);
        assert_eq!(harm_dim(2, 0).unwrap(), 1);
        assert_eq!(harm_dim(2, 7).unwrap(), 2);
        assert_eq!(harm_dim(4, 3).unwrap(), 16);
        assert!(harm_dim(1, 3).is_err());
        for l in 0..50 {
            assert_eq!(harm_dim(3, l).unwrap(), 2 * l as u128 + 1);
            assert_eq!(harm_dim(4, l).unwrap(), (l as u128 + 1).pow(2));
        }
    }

    #[test]
    fn cumulative_dimensions() {
        assert_eq!(harm_dim_cumulative(2, 5).unwrap(), 11);
        assert_eq!(harm_dim_cumulative(3, 3).unwrap(), 16);
        assert_eq!(harm_dim_cumulative(4, 2).unwrap(), 14);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(harm_dim(200, 1_000_000), Err(Error::Overflow(_))));
    }

    #[test]
    fn legendre_values() {
        for d in 2..7 {
            for l in 0..20 {
                assert!((legendre_pd(d, l, 1.0).unwrap() - 1.0).abs() < 1e-13);
            }
        }
        assert!((legendre_pd(2, 3, (PI / 3.0).cos()).unwrap() + 1.0).abs() < 1e-14);
        assert!((legendre_pd(3, 2, 0.0).unwrap() + 0.5).abs() < 1e-15);
        let t: f64 = 0.37;
        let p3 = 0.5 * (5.0 * t.powi(3) - 3.0 * t);
        assert!((legendre_pd(3, 3, t).unwrap() - p3).abs() < 1e-15);
        assert!(legendre_pd(3, 2, 1.5).is_err());
    }

    #[test]
    fn chebyshev_in_the_plane() {
        for l in 0..40 {
            for &theta in &[0.1, 0.7, 1.3, 2.9] {
                let got = legendre_pd(2, l, f64::cos(theta)).unwrap();
                assert!((got - (l as f64 * theta).cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn volumes() {
        assert!((sphere_volume(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(4).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!((ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(sphere_volume(1).is_err());
    }
}
