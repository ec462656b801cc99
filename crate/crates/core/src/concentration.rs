//! Spectra of the concentration operator `S_D B_{L,K} S_D` on a ball or
//! shell `D = {a <= |x| <= b}`.
//!
//! For rotationally symmetric `D` the operator splits into one radial block
//! per degree `l`, repeated `harm_dim(d, l)` times. Each block is the integral
//! operator on `L^2([a, b], r dr)` with kernel `I_l(r, s)`, the band-limited
//! radial integral of order `l + (d-2)/2`. A Gauss-Legendre Nystrom scheme
//! turns it into the symmetric matrix
//!
//! ```text
//! M_ij = sqrt(w_i w_j r_i r_j) I_l(r_i, r_j).
//! ```

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{ladder, lommel_cross, lommel_diagonal};
use crate::error::{ensure_dimension, ensure_finite, Error, Result};
use crate::harmonic::{harm_dim, sphere_volume};
use crate::kernel::{kernel_diag, Bandlimit};
use crate::profiles::{w_d, w_plateau};
use crate::quadrature::{integrate_adaptive, RadialQuadrature, Tolerance};
use crate::sum::CompensatedSum;

/// The spherical shell `a <= |x| <= b`; a ball when `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialDomain {
    pub inner: f64,
    pub outer: f64,
}

impl RadialDomain {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        ensure_finite("inner radius", inner)?;
        ensure_finite("outer radius", outer)?;
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::Domain(format!(
                "radial domain needs 0 <= inner < outer, got [{inner}, {outer}]"
            )));
        }
        Ok(Self { inner, outer })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        Self::new(0.0, radius)
    }

    pub fn is_ball(&self) -> bool {
        self.inner == 0.0
    }

    pub fn width(&self) -> f64 {
        self.outer - self.inner
    }

    /// Lebesgue measure of the domain in `R^d`.
    pub fn volume(&self, d: u32) -> Result<f64> {
        let n = d as i32;
        Ok(sphere_volume(d)? * (self.outer.powi(n) - self.inner.powi(n)) / d as f64)
    }
}

/// Default Nystrom node count, `max(64, ceil(1.5 K (b - a) / pi) + 16)`.
pub fn default_node_count(k: f64, domain: &RadialDomain) -> usize {
    let n = (1.5 * k * domain.width() / std::f64::consts::PI).ceil() as usize + 16;
    n.max(64)
}

/// Nodes with their Nystrom scale factors `sqrt(w_i r_i)`.
struct NystromGrid {
    nodes: Vec<f64>,
    scale: Vec<f64>,
}

impl NystromGrid {
    fn new(domain: &RadialDomain, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("Nystrom discretization needs n >= 2, got {n}")));
        }
        let q = RadialQuadrature::gauss_legendre(n, domain.inner, domain.outer)?;
        let scale = q.nodes().iter().zip(q.weights()).map(|(r, w)| (w * r).sqrt()).collect();
        Ok(Self { nodes: q.nodes().to_vec(), scale })
    }

    /// Assemble the block from `J_nu(K r_i)` and `J_{nu+1}(K r_i)`.
    fn assemble(&self, nu: f64, k: f64, j: &[f64], j1: &[f64]) -> DMatrix<f64> {
        let n = self.nodes.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let ri = self.nodes[i];
            m[(i, i)] = self.scale[i] * self.scale[i] * lommel_diagonal(nu, k * ri, k, j[i], j1[i]);
            for c in (i + 1)..n {
                let rc = self.nodes[c];
                let v = self.scale[i] * self.scale[c] * lommel_cross(ri, rc, k, j[i], j1[i], j[c], j1[c]);
                m[(i, c)] = v;
                m[(c, i)] = v;
            }
        }
        m
    }
}

/// The Nystrom matrix of degree block `l`.
pub fn block_matrix(d: u32, l: usize, k: f64, domain: &RadialDomain, n: usize) -> Result<DMatrix<f64>> {
    ensure_dimension(d)?;
    ensure_finite("K", k)?;
    if k <= 0.0 {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    let grid = NystromGrid::new(domain, n)?;
    let nu = l as f64 + 0.5 * (d as f64 - 2.0);
    let (j, j1): (Vec<f64>, Vec<f64>) = grid
        .nodes
        .iter()
        .map(|&r| {
            let p = ladder(nu, k * r, 2);
            (p[0], p[1])
        })
        .unzip();
    Ok(grid.assemble(nu, k, &j, &j1))
}

/// Eigenvalues of one degree block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeBlock {
    pub degree: usize,
    pub multiplicity: u64,
    /// Raw eigenvalues, descending.
    pub raw: Vec<f64>,
    /// The same values clamped to `[0, 1]`.
    pub clamped: Vec<f64>,
    /// True when the block was dropped for having negligible trace.
    pub skipped: bool,
}

/// One entry of the merged spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    /// Clamped to `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    pub multiplicity: u64,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// `sum mult * lambda` over clamped eigenvalues.
    pub trace: f64,
    /// `sum mult * lambda^2` over clamped eigenvalues.
    pub hs_norm_sq: f64,
    /// `sum mult * (lambda - lambda^2)`.
    pub delta_k: f64,
    /// `sum mult * lambda` over raw eigenvalues.
    pub raw_trace: f64,
    /// Smallest and largest raw eigenvalue.
    pub raw_min: f64,
    pub raw_max: f64,
    /// True when some raw eigenvalue leaves `[-1e-8, 1 + 1e-8]`.
    pub out_of_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub d: u32,
    pub l_max: usize,
    pub k: f64,
    pub domain: RadialDomain,
    pub nodes: usize,
    pub blocks: Vec<DegreeBlock>,
    /// All eigenvalues, descending by value, ties by ascending degree.
    pub merged: Vec<Eigenvalue>,
    pub summary: SpectrumSummary,
}

impl Spectrum {
    pub fn bandlimit(&self) -> Result<Bandlimit> {
        Bandlimit::new(self.d, self.l_max, self.k)
    }

    /// Total number of eigenvalues counted with multiplicity.
    pub fn total_count(&self) -> u64 {
        self.merged.iter().map(|e| e.multiplicity).sum()
    }

    /// Raw eigenvalues repeated by multiplicity, descending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_count() as usize);
        for e in &self.merged {
            out.extend(std::iter::repeat_n(e.raw, e.multiplicity as usize));
        }
        out
    }

    /// Number of eigenvalues (with multiplicity) whose clamped value is at
    /// least `threshold`.
    pub fn count_at_least(&self, threshold: f64) -> u64 {
        self.merged.iter().filter(|e| e.value >= threshold).map(|e| e.multiplicity).sum()
    }
}

const RAW_SLACK: f64 = 1e-8;

/// Eigenvalues of every degree block `l <= L`, with `n` Nystrom nodes (the
/// default heuristic when `None`).
pub fn spectrum(bl: &Bandlimit, domain: &RadialDomain, n: Option<usize>) -> Result<Spectrum> {
    let d = bl.d();
    let k = bl.k();
    let n = n.unwrap_or_else(|| default_node_count(k, domain));
    let grid = NystromGrid::new(domain, n)?;
    let nu0 = 0.5 * (d as f64 - 2.0);
    let count = bl.l_max() + 1;
    // table[i][l] = J_{nu0 + l}(K r_i), l = 0 ..= L + 1.
    let table: Vec<Vec<f64>> = grid.nodes.par_iter().map(|&r| ladder(nu0, k * r, count + 1)).collect();
    let skip_below = 1e-14 * k.powi(d as i32);

    let blocks = (0..count)
        .into_par_iter()
        .map(|l| -> Result<DegreeBlock> {
            let multiplicity = u64::try_from(harm_dim(d, l)?)
                .map_err(|_| Error::Overflow(format!("multiplicity of degree {l}")))?;
            let nu = nu0 + l as f64;
            let j: Vec<f64> = table.iter().map(|row| row[l]).collect();
            let j1: Vec<f64> = table.iter().map(|row| row[l + 1]).collect();
            let trace: f64 = grid
                .nodes
                .iter()
                .enumerate()
                .map(|(i, &r)| grid.scale[i].powi(2) * lommel_diagonal(nu, k * r, k, j[i], j1[i]))
                .sum();
            if trace < skip_below {
                return Ok(DegreeBlock { degree: l, multiplicity, raw: Vec::new(), clamped: Vec::new(), skipped: true });
            }
            let m = grid.assemble(nu, k, &j, &j1);
            let eig = SymmetricEigen::try_new(m, f64::EPSILON, 100_000).ok_or(Error::Eigen { block: l })?;
            let mut raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            if raw.iter().any(|x| !x.is_finite()) {
                return Err(Error::Eigen { block: l });
            }
            raw.sort_by(|a, b| b.total_cmp(a));
            let clamped = raw.iter().map(|x| x.clamp(0.0, 1.0)).collect();
            Ok(DegreeBlock { degree: l, multiplicity, raw, clamped, skipped: false })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut merged: Vec<Eigenvalue> = blocks
        .iter()
        .flat_map(|b| {
            b.raw.iter().zip(&b.clamped).map(move |(&raw, &value)| Eigenvalue {
                value,
                raw,
                multiplicity: b.multiplicity,
                degree: b.degree,
            })
        })
        .collect();
    merged.sort_by(|a, b| b.value.total_cmp(&a.value).then(b.raw.total_cmp(&a.raw)).then(a.degree.cmp(&b.degree)));

    let summary = summarize(&merged);
    Ok(Spectrum { d, l_max: bl.l_max(), k, domain: *domain, nodes: n, blocks, merged, summary })
}

fn summarize(merged: &[Eigenvalue]) -> SpectrumSummary {
    let mut trace = CompensatedSum::new();
    let mut hs = CompensatedSum::new();
    let mut delta = CompensatedSum::new();
    let mut raw_trace = CompensatedSum::new();
    let mut raw_min = f64::INFINITY;
    let mut raw_max = f64::NEG_INFINITY;
    for e in merged {
        let m = e.multiplicity as f64;
        trace.add(m * e.value);
        hs.add(m * e.value * e.value);
        delta.add(m * (e.value - e.value * e.value));
        raw_trace.add(m * e.raw);
        raw_min = raw_min.min(e.raw);
        raw_max = raw_max.max(e.raw);
    }
    if merged.is_empty() {
        raw_min = 0.0;
        raw_max = 0.0;
    }
    SpectrumSummary {
        trace: trace.value(),
        hs_norm_sq: hs.value(),
        delta_k: delta.value(),
        raw_trace: raw_trace.value(),
        raw_min,
        raw_max,
        out_of_range: raw_min < -RAW_SLACK || raw_max > 1.0 + RAW_SLACK,
    }
}

/// `sum mult * lambda^2`.
pub fn hs_norm_sq(spectrum: &Spectrum) -> f64 {
    spectrum.summary.hs_norm_sq
}

/// Eigenvalue counts with multiplicity, split at `epsilon` and `1 - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BimodalCounts {
    pub epsilon: f64,
    /// `lambda >= 1 - epsilon`.
    pub high: u64,
    /// `epsilon < lambda < 1 - epsilon`.
    pub mid: u64,
    pub low: u64,
    /// `high / K^d`.
    pub high_scaled: f64,
    /// `mid / K^d`.
    pub mid_scaled: f64,
}

pub fn bimodal_counts(spectrum: &Spectrum, epsilon: f64) -> Result<BimodalCounts> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let (mut high, mut mid, mut low) = (0u64, 0u64, 0u64);
    for e in &spectrum.merged {
        if e.value >= 1.0 - epsilon {
            high += e.multiplicity;
        } else if e.value > epsilon {
            mid += e.multiplicity;
        } else {
            low += e.multiplicity;
        }
    }
    let kd = spectrum.k.powi(spectrum.d as i32);
    Ok(BimodalCounts {
        epsilon,
        high,
        mid,
        low,
        high_scaled: high as f64 / kd,
        mid_scaled: mid as f64 / kd,
    })
}

/// `integral_D W^(d)(|x| / kappa) dx`.
pub fn plateau_prediction(d: u32, kappa: f64, domain: &RadialDomain) -> Result<f64> {
    ensure_dimension(d)?;
    ensure_finite("kappa", kappa)?;
    if kappa <= 0.0 {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    let vol = sphere_volume(d)?;
    let n = d as i32;
    let (a, b) = (domain.inner, domain.outer);
    let knee = kappa.clamp(a, b);
    let flat = w_plateau(d)? * (knee.powi(n) - a.powi(n)) / d as f64;
    let decay = if b > knee {
        integrate_adaptive(
            |r: f64| w_d(d, r / kappa).unwrap_or(f64::NAN) * r.powi(n - 1),
            knee,
            b,
            &[],
            Tolerance::new(1e-14, 1e-12),
        )?
    } else {
        0.0
    };
    Ok(vol * (flat + decay))
}

/// `integral_D K_{L,K}(x, x) dx` by adaptive quadrature of the diagonal.
pub fn diagonal_integral(bl: &Bandlimit, domain: &RadialDomain) -> Result<f64> {
    let d = bl.d();
    let n = d as i32;
    let integral = integrate_adaptive(
        |r: f64| kernel_diag(bl, r).unwrap_or(f64::NAN) * r.powi(n - 1),
        domain.inner,
        domain.outer,
        &[],
        Tolerance::new(0.0, 1e-12),
    )?;
    Ok(sphere_volume(d)? * integral)
}

/// Measured Shannon number (the trace) next to its asymptotic prediction
/// `K^d integral_D W^(d)_kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShannonNumber {
    pub measured: f64,
    pub predicted: f64,
}

impl ShannonNumber {
    pub fn ratio(&self) -> f64 {
        self.measured / self.predicted
    }
}

pub fn shannon_number(bl: &Bandlimit, domain: &RadialDomain, n: Option<usize>) -> Result<ShannonNumber> {
    let s = spectrum(bl, domain, n)?;
    shannon_from_spectrum(&s)
}

pub fn shannon_from_spectrum(s: &Spectrum) -> Result<ShannonNumber> {
    let bl = s.bandlimit()?;
    Ok(ShannonNumber {
        measured: s.summary.trace,
        predicted: s.k.powi(s.d as i32) * plateau_prediction(s.d, bl.kappa(), &s.domain)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn domain_validation() {
        assert!(RadialDomain::new(1.0, 1.0).is_err());
        assert!(RadialDomain::new(-0.1, 1.0).is_err());
        assert!(RadialDomain::ball(2.0).unwrap().is_ball());
        assert_eq!(default_node_count(10.0, &RadialDomain::ball(1.0).unwrap()), 64);
        assert_eq!(default_node_count(40.0, &RadialDomain::ball(2.0).unwrap()), 64);
        assert_eq!(default_node_count(100.0, &RadialDomain::ball(2.0).unwrap()), 96 + 16);
    }

    #[test]
    fn block_is_symmetric_with_quadrature_trace() {
        let dom = RadialDomain::ball(1.0).unwrap();
        let m = block_matrix(2, 0, 10.0, &dom, 64).unwrap();
        assert_eq!(m, m.transpose());
        let q = RadialQuadrature::gauss_legendre(64, 0.0, 1.0).unwrap();
        let want = q.integrate(|r| {
            let p = ladder(0.0, 10.0 * r, 2);
            r * lommel_diagonal(0.0, 10.0 * r, 10.0, p[0], p[1])
        });
        assert!((m.trace() - want).abs() < 1e-10 * want);
        let eig = SymmetricEigen::new(m);
        assert!(eig.eigenvalues.iter().all(|&x| x <= 1.0 + 1e-8));
        assert!(block_matrix(2, 0, 10.0, &dom, 1).is_err());
    }

    #[test]
    fn plateau_predictions() {
        let p = plateau_prediction(3, 1.0, &RadialDomain::ball(1.0).unwrap()).unwrap();
        assert!((p - 2.0 / (9.0 * PI)).abs() < 1e-14);
        let p = plateau_prediction(2, 1.0, &RadialDomain::ball(1.0).unwrap()).unwrap();
        assert!((p - 0.25).abs() < 1e-14);
        let p = plateau_prediction(2, 1.0, &RadialDomain::ball(0.5).unwrap()).unwrap();
        assert!((p - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn small_spectrum_is_consistent() {
        let bl = Bandlimit::from_kappa(2, 1.0, 8.0).unwrap();
        let dom = RadialDomain::ball(1.0).unwrap();
        let s = spectrum(&bl, &dom, None).unwrap();
        assert!(s.merged.windows(2).all(|w| w[0].value >= w[1].value));
        assert!(!s.summary.out_of_range);
        assert!(s.summary.delta_k >= 0.0);
        let c = bimodal_counts(&s, 0.1).unwrap();
        assert_eq!(c.high + c.mid + c.low, s.total_count());
        assert!(bimodal_counts(&s, 0.5).is_err());
        assert!(bimodal_counts(&s, 0.0).is_err());
        let exact = diagonal_integral(&bl, &dom).unwrap();
        assert!((s.summary.raw_trace - exact).abs() < 1e-8 * exact);
    }
}
