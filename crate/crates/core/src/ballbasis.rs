//! SFB orthonormal bases of the unit ball with Dirichlet or Neumann
//! boundary conditions.
//!
//! A mode of degree `l` has radial profile `C r^{(2-d)/2} J_nu(k r)` with
//! `nu = l + (d-2)/2`. Dirichlet wavenumbers are the zeros of `J_nu`;
//! Neumann wavenumbers are the roots of `l J_nu(k) - k J_{nu+1}(k)`, plus the
//! constant mode `k = 0` at `l = 0`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bessel::{jv, ladder, lommel_diagonal, refine_root, scan_zeros_through};
use crate::error::{ensure_dimension, ensure_finite, Error, Result};
use crate::harmonic::{ball_volume, dim_f64, sphere_volume};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(Self::Dirichlet),
            "neumann" => Ok(Self::Neumann),
            other => Err(Error::InvalidInput(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// One radial mode of the ball basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallMode {
    pub d: u32,
    pub l: usize,
    pub k: f64,
    pub norm_const: f64,
}

impl BallMode {
    pub fn is_constant(&self) -> bool {
        self.k == 0.0
    }
}

fn order(d: u32, l: usize) -> f64 {
    l as f64 + 0.5 * (d as f64 - 2.0)
}

fn check_bandwidth(k: f64) -> Result<()> {
    ensure_finite("K", k)?;
    if k <= 0.0 {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    Ok(())
}

/// The Neumann characteristic function `l J_nu(k) - k J_{nu+1}(k)` and its
/// derivative `(l nu / k - k) J_nu + (nu - l) J_{nu+1}`.
fn neumann_characteristic(l: usize, nu: f64, k: f64) -> (f64, f64) {
    let j = ladder(nu, k, 2);
    let lf = l as f64;
    (lf * j[0] - k * j[1], (lf * nu / k - k) * j[0] + (nu - lf) * j[1])
}

/// Dirichlet modes of degree `l` with `k <= K`.
pub fn dirichlet_wavenumbers(d: u32, l: usize, k_max: f64) -> Result<Vec<BallMode>> {
    ensure_dimension(d)?;
    check_bandwidth(k_max)?;
    let nu = order(d, l);
    let zeros = scan_zeros_through(nu, k_max);
    zeros
        .into_iter()
        .filter(|&k| k <= k_max)
        .map(|k| {
            Ok(BallMode {
                d,
                l,
                k,
                norm_const: radial_norm_constant(d, l, k, BoundaryCondition::Dirichlet)?,
            })
        })
        .collect()
}

/// Neumann modes of degree `l` with `k <= K`; the constant mode comes first
/// when `l = 0`.
pub fn neumann_wavenumbers(d: u32, l: usize, k_max: f64) -> Result<Vec<BallMode>> {
    ensure_dimension(d)?;
    check_bandwidth(k_max)?;
    let nu = order(d, l);
    let mut modes = Vec::new();
    if l == 0 {
        modes.push(BallMode { d, l, k: 0.0, norm_const: radial_norm_constant(d, 0, 0.0, BoundaryCondition::Neumann)? });
    }
    // Exactly one root between consecutive zeros of J_nu, and one below the
    // first zero when l >= 1.
    let zeros = scan_zeros_through(nu, k_max);
    let mut brackets = Vec::new();
    if l >= 1 {
        let first = zeros[0];
        let mut lo = (0.5 * l as f64 * (nu + 1.0)).sqrt().min(0.5 * first);
        while neumann_characteristic(l, nu, lo).0 <= 0.0 {
            lo = 0.5 * (lo + first);
        }
        brackets.push((lo, first));
    }
    brackets.extend(zeros.windows(2).map(|w| (w[0], w[1])));
    for (lo, hi) in brackets {
        if lo > k_max {
            break;
        }
        let k = refine_root(|x| neumann_characteristic(l, nu, x), lo, hi, None);
        if k <= k_max {
            modes.push(BallMode { d, l, k, norm_const: radial_norm_constant(d, l, k, BoundaryCondition::Neumann)? });
        }
    }
    Ok(modes)
}

/// `C` with `integral_0^1 C^2 J_nu(k r)^2 r dr = 1`; for the constant Neumann
/// mode, the value of the constant function of unit norm on the ball.
pub fn radial_norm_constant(d: u32, l: usize, k: f64, bc: BoundaryCondition) -> Result<f64> {
    ensure_dimension(d)?;
    ensure_finite("wavenumber", k)?;
    let nu = order(d, l);
    if k == 0.0 {
        return match (bc, l) {
            (BoundaryCondition::Neumann, 0) => Ok(1.0 / ball_volume(d)?.sqrt()),
            _ => Err(Error::InvalidInput(format!("k = 0 is not a {bc} mode of degree {l}"))),
        };
    }
    if k < 0.0 {
        return Err(Error::Domain(format!("wavenumber must be >= 0, got {k}")));
    }
    let j = ladder(nu, k, 2);
    let tol = 1e-10 * k.max(1.0);
    match bc {
        BoundaryCondition::Dirichlet => {
            if j[0].abs() > tol {
                return Err(Error::InvalidInput(format!("k = {k} is not a zero of J_{nu}")));
            }
            Ok(std::f64::consts::SQRT_2 / j[1].abs())
        }
        BoundaryCondition::Neumann => {
            if (l as f64 * j[0] - k * j[1]).abs() > tol {
                return Err(Error::InvalidInput(format!("k = {k} is not a Neumann root of degree {l}")));
            }
            // Lommel: integral_0^1 J_nu(k r)^2 r dr in closed form.
            Ok(1.0 / lommel_diagonal(nu, k, 1.0, j[0], j[1]).sqrt())
        }
    }
}

/// All modes with `l <= L` and `k <= K` for one boundary condition.
#[derive(Debug, Clone)]
pub struct BallBasis {
    d: u32,
    l_max: usize,
    k_max: f64,
    bc: BoundaryCondition,
    modes: Vec<Vec<BallMode>>,
}

impl BallBasis {
    pub fn new(d: u32, l_max: usize, k_max: f64, bc: BoundaryCondition) -> Result<Self> {
        ensure_dimension(d)?;
        check_bandwidth(k_max)?;
        let modes = (0..=l_max)
            .into_par_iter()
            .map(|l| match bc {
                BoundaryCondition::Dirichlet => dirichlet_wavenumbers(d, l, k_max),
                BoundaryCondition::Neumann => neumann_wavenumbers(d, l, k_max),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { d, l_max, k_max, bc, modes })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc
    }

    /// Modes of degree `l`.
    pub fn modes(&self, l: usize) -> &[BallMode] {
        self.modes.get(l).map_or(&[], Vec::as_slice)
    }

    /// Total number of basis functions, counting harmonic multiplicity.
    pub fn dimension(&self) -> Result<f64> {
        let mut n = 0.0;
        for (l, m) in self.modes.iter().enumerate() {
            n += dim_f64(self.d, l)? * m.len() as f64;
        }
        Ok(n)
    }

    /// Diagonal of the reproducing kernel at radius `r`.
    pub fn diag(&self, r: f64) -> Result<f64> {
        ensure_finite("radius", r)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!("radius must lie in [0, 1], got {r}")));
        }
        let d = self.d;
        let nu0 = 0.5 * (d as f64 - 2.0);
        let vol = sphere_volume(d)?;
        let mut acc = CompensatedSum::new();
        for (l, modes) in self.modes.iter().enumerate() {
            let weight = dim_f64(d, l)? / vol;
            let nu = l as f64 + nu0;
            for m in modes {
                if m.is_constant() {
                    acc.add(m.norm_const * m.norm_const);
                    continue;
                }
                let radial = if r < 1e-12 {
                    // r^{2-d} J_nu(k r)^2 -> (k/2)^{d-2} / Gamma(d/2)^2 for l = 0.
                    if l == 0 {
                        (0.5 * m.k).powf(d as f64 - 2.0) / libm::tgamma(0.5 * d as f64).powi(2)
                    } else {
                        0.0
                    }
                } else {
                    let j = jv(nu, m.k * r);
                    r.powf(2.0 - d as f64) * j * j
                };
                acc.add(weight * m.norm_const * m.norm_const * radial);
            }
        }
        Ok(acc.value())
    }
}

/// Diagonal of the ball reproducing kernel, `l <= L`, `k <= K`.
pub fn ball_kernel_diag(d: u32, l_max: usize, k_max: f64, r: f64, bc: BoundaryCondition) -> Result<f64> {
    BallBasis::new(d, l_max, k_max, bc)?.diag(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dirichlet_examples() {
        let m = dirichlet_wavenumbers(2, 0, 3.0).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].k - 2.404_825_557_695_772_768_6).abs() < 1e-13);
        assert!(dirichlet_wavenumbers(2, 0, 2.0).unwrap().is_empty());
        let m = dirichlet_wavenumbers(4, 1, 30.0).unwrap();
        assert_eq!(m.len(), 8);
        assert!(m.iter().all(|x| x.k > 2.0 && jv(2.0, x.k).abs() < 1e-10));
    }

    #[test]
    fn neumann_examples() {
        let m = neumann_wavenumbers(2, 0, 4.0).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].k, 0.0);
        assert!((m[1].k - 3.831_705_970_207_512_315_6).abs() < 1e-13);
        let m = neumann_wavenumbers(3, 0, 1.0).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].is_constant());
        let m = neumann_wavenumbers(2, 3, 10.0).unwrap();
        assert!((m[0].k - 4.201_188_941_210_528_496_2).abs() < 1e-12);
    }

    #[test]
    fn norm_constants() {
        let j01 = 2.404_825_557_695_772_768_6;
        let c = radial_norm_constant(2, 0, j01, BoundaryCondition::Dirichlet).unwrap();
        assert!((c - 2f64.sqrt() / jv(1.0, j01).abs()).abs() < 1e-13);
        let c = radial_norm_constant(3, 0, 0.0, BoundaryCondition::Neumann).unwrap();
        assert!((c - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        assert!(radial_norm_constant(3, 1, 0.0, BoundaryCondition::Neumann).is_err());
        assert!(radial_norm_constant(2, 0, 2.0, BoundaryCondition::Dirichlet).is_err());
    }

    #[test]
    fn dirichlet_vanishes_on_the_boundary() {
        let basis = BallBasis::new(2, 20, 20.0, BoundaryCondition::Dirichlet).unwrap();
        assert!(basis.diag(1.0).unwrap().abs() < 1e-18 * basis.dimension().unwrap().max(1.0) + 1e-20);
        assert!(basis.diag(1.5).is_err());
    }

    #[test]
    fn origin_limit_is_continuous() {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let basis = BallBasis::new(3, 6, 15.0, bc).unwrap();
            let a = basis.diag(0.0).unwrap();
            let b = basis.diag(1e-9).unwrap();
            assert!((a - b).abs() < 1e-6 * a, "{bc}: {a} vs {b}");
        }
    }

    #[test]
    fn boundary_condition_parsing() {
        assert_eq!("Neumann".parse::<BoundaryCondition>().unwrap(), BoundaryCondition::Neumann);
        assert!("robin".parse::<BoundaryCondition>().is_err());
    }
}
