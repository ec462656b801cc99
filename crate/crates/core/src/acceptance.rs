//! End-to-end verification experiments.
//!
//! Each criterion runs a finite, desk-scale version of one asymptotic
//! statement and reports pass or fail together with the measured numbers and
//! its wall-clock time. Exceeding the time budget counts as a failure.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::ballbasis::{BallBasis, BoundaryCondition};
use crate::bessel::{bessel_sum_squares, bessel_zeros, jv, BesselOrder};
use crate::concentration::{
    bimodal_counts, default_node_count, diagonal_integral, plateau_prediction, spectrum, RadialDomain, Spectrum,
};
use crate::kernel::{kernel_diag_normalized, Bandlimit};
use crate::profiles::{
    appendix_functional_a, appendix_functional_b, profile_u, profile_u_d, profile_w_d, weighted_bessel_sum,
    ProfileU,
};
use crate::quadrature::integrate_panels;
use crate::Result;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2} s of {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// A registered criterion.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
    check: fn() -> Result<(bool, String)>,
}

impl Criterion {
    pub fn run(&self) -> CriterionReport {
        let start = Instant::now();
        let outcome = (self.check)();
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        if elapsed > self.limit {
            passed = false;
            detail.push_str("; time budget exceeded");
        }
        CriterionReport { id: self.id, name: self.name, passed, detail, elapsed, limit: self.limit }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "profile closed forms", limit: secs(5), check: closed_forms },
        Criterion { id: 2, name: "Bessel square sum -> U", limit: secs(30), check: plain_square_sum },
        Criterion { id: 3, name: "weighted Bessel square sum -> U^(3)", limit: secs(60), check: weighted_square_sum },
        Criterion { id: 4, name: "kernel diagonal -> K^d W", limit: secs(300), check: kernel_diagonal },
        Criterion { id: 5, name: "trace and Hilbert-Schmidt identities", limit: secs(120), check: trace_identities },
        Criterion { id: 6, name: "bimodal eigenvalue distribution", limit: secs(300), check: bimodality },
        Criterion { id: 7, name: "spectra monotone in L", limit: secs(120), check: loewner },
        Criterion { id: 8, name: "unit-ball bases", limit: secs(180), check: ball_bases },
        Criterion { id: 9, name: "Bessel function suite", limit: secs(30), check: bessel_suite },
        Criterion { id: 10, name: "summation functionals", limit: secs(30), check: functionals },
    ]
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    criteria().iter().map(Criterion::run).collect()
}

/// Run one criterion by id.
pub fn run_criterion(id: u8) -> Option<CriterionReport> {
    criteria().into_iter().find(|c| c.id == id).map(|c| c.run())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Each error at most `slack` times the previous one.
fn non_increasing(errors: &[f64], slack: f64) -> bool {
    errors.windows(2).all(|w| w[1] <= slack * w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn closed_forms() -> Result<(bool, String)> {
    let w2 = |r: f64| {
        if r <= 1.0 {
            1.0 / (4.0 * PI)
        } else {
            1.0 / (4.0 * PI) + (r * r - 1.0).sqrt() / (2.0 * PI * PI * r * r) - (1.0 / r).acos() / (2.0 * PI * PI)
        }
    };
    let w3 = |r: f64| {
        if r <= 1.0 {
            1.0 / (6.0 * PI * PI)
        } else {
            (1.0 - (r * r - 1.0).powf(1.5) / r.powi(3)) / (6.0 * PI * PI)
        }
    };
    let mut worst2: f64 = 0.0;
    let mut worst3: f64 = 0.0;
    for r in linspace(0.05, 5.0, 200) {
        worst2 = worst2.max((profile_w_d(2, r, 1.0)? - w2(r)).abs());
        worst3 = worst3.max((profile_w_d(3, r, 1.0)? - w3(r)).abs());
    }
    let passed = worst2 <= 1e-9 && worst3 <= 1e-9;
    Ok((passed, format!("max |err| d=2 {worst2:.2e}, d=3 {worst3:.2e} (tol 1e-9)")))
}

const SUM_RADII: [f64; 5] = [0.3, 0.5, 0.8, 1.5, 2.5];
const SUM_LADDER: [usize; 4] = [64, 128, 256, 512];

fn square_sum_protocol<F>(target: fn(f64) -> Result<f64>, sum: F, tol: f64) -> Result<(bool, String)>
where
    F: Fn(usize, f64) -> Result<f64> + Sync,
{
    let rows: Vec<Result<Vec<f64>>> = SUM_RADII
        .par_iter()
        .map(|&r| {
            let t = target(r)?;
            SUM_LADDER.iter().map(|&l| Ok((sum(l, r)? - t).abs())).collect()
        })
        .collect();
    let mut monotone = Vec::new();
    let mut within = true;
    let mut detail = Vec::new();
    for (r, row) in SUM_RADII.iter().zip(rows) {
        let row = row?;
        if !non_increasing(&row, 1.1) {
            monotone.push(format!("{r}"));
        }
        within &= row[row.len() - 1] <= tol;
        detail.push(format!("r={r}: {}", fmt_list(&row)));
    }
    let passed = monotone.is_empty() && within;
    let verdict = format!(
        "final tol {tol} {}; not non-increasing at r = [{}]",
        if within { "met" } else { "missed" },
        monotone.join(", ")
    );
    Ok((passed, format!("{} ({verdict})", detail.join("; "))))
}

fn plain_square_sum() -> Result<(bool, String)> {
    let v0 = BesselOrder::new(0.0)?;
    square_sum_protocol(profile_u, |l, r| bessel_sum_squares(v0, l, l as f64 * r), 0.02)
}

fn weighted_square_sum() -> Result<(bool, String)> {
    square_sum_protocol(|r| profile_u_d(3, r), |l, r| weighted_bessel_sum(3, l, r), 0.03)
}

/// `sup_r |K^{-d} K(x, x) - W_kappa(r)|` over 60 radii in `[0.1 kappa, 3 kappa]`.
fn kernel_sup_error(d: u32, kappa: f64, k: f64) -> Result<f64> {
    let bl = Bandlimit::from_kappa(d, kappa, k)?;
    let errs: Vec<Result<f64>> = linspace(0.1 * kappa, 3.0 * kappa, 60)
        .into_par_iter()
        .map(|r| Ok((kernel_diag_normalized(&bl, r)? - profile_w_d(d, r, kappa)?).abs()))
        .collect();
    errs.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
}

fn kernel_diagonal() -> Result<(bool, String)> {
    let cases: [(u32, f64, &[f64]); 3] = [
        (2, 0.5, &[32.0, 64.0, 128.0, 256.0]),
        (2, 1.0, &[32.0, 64.0, 128.0, 256.0]),
        (3, 1.0, &[16.0, 32.0, 64.0]),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (d, kappa, ladder) in cases {
        let errs = ladder.iter().map(|&k| kernel_sup_error(d, kappa, k)).collect::<Result<Vec<_>>>()?;
        let tol = 0.02 * profile_w_d(d, 0.0, kappa)?;
        let ok = non_increasing(&errs, 1.1) && errs[errs.len() - 1] <= tol;
        passed &= ok;
        detail.push(format!("d={d} kappa={kappa}: {} (tol {tol:.3e})", fmt_list(&errs)));
    }
    Ok((passed, detail.join("; ")))
}

fn ball_of_radius_two_spectrum(k: f64, l_max: Option<usize>, nodes: Option<usize>) -> Result<Spectrum> {
    let bl = match l_max {
        Some(l) => Bandlimit::new(2, l, k)?,
        None => Bandlimit::from_kappa(2, 1.0, k)?,
    };
    spectrum(&bl, &RadialDomain::ball(2.0)?, nodes)
}

fn trace_identities() -> Result<(bool, String)> {
    let k = 40.0;
    let domain = RadialDomain::ball(2.0)?;
    let bl = Bandlimit::from_kappa(2, 1.0, k)?;
    let s = spectrum(&bl, &domain, None)?;
    let exact = diagonal_integral(&bl, &domain)?;
    let identity = (s.summary.raw_trace - exact).abs() / exact;
    let target = plateau_prediction(2, 1.0, &domain)?;
    let k2 = k * k;
    let trace_ratio = s.summary.trace / k2 / target;
    let hs_ratio = s.summary.hs_norm_sq / k2 / target;
    let passed = identity <= 1e-8 && (trace_ratio - 1.0).abs() <= 0.1 && (hs_ratio - 1.0).abs() <= 0.1;
    Ok((
        passed,
        format!(
            "trace vs integral of diagonal rel {identity:.2e} (tol 1e-8); trace/K^2/prediction {trace_ratio:.4}; \
             HS/K^2/prediction {hs_ratio:.4} (tol 10%)"
        ),
    ))
}

fn bimodality() -> Result<(bool, String)> {
    let ks = [20.0, 40.0, 60.0];
    let target = plateau_prediction(2, 1.0, &RadialDomain::ball(2.0)?)?;
    let spectra = ks.iter().map(|&k| ball_of_radius_two_spectrum(k, None, None)).collect::<Result<Vec<_>>>()?;
    let mut mids = Vec::new();
    for (k, s) in ks.iter().zip(&spectra) {
        mids.push(bimodal_counts(s, 0.05)?.mid as f64 / (k * k));
    }
    let last = &spectra[spectra.len() - 1];
    let high = last.count_at_least(0.5) as f64 / (ks[2] * ks[2]);
    let high_ratio = high / target;
    let decreasing = mids.windows(2).all(|w| w[1] < w[0]);
    let passed = (high_ratio - 1.0).abs() <= 0.1 && decreasing;
    Ok((
        passed,
        format!(
            "#(lambda >= 0.5)/K^2 / prediction at K=60: {high_ratio:.4} (tol 10%); \
             #(0.05 < lambda < 0.95)/K^2 over K=20,40,60: {}",
            fmt_list(&mids)
        ),
    ))
}

fn loewner() -> Result<(bool, String)> {
    let k = 40.0;
    let n = default_node_count(k, &RadialDomain::ball(2.0)?);
    let lists = [10usize, 20, 40]
        .iter()
        .map(|&l| ball_of_radius_two_spectrum(k, Some(l), Some(n)).map(|s| s.expanded()))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for pair in lists.windows(2) {
        let (small, large) = (&pair[0], &pair[1]);
        for i in 0..small.len().max(large.len()) {
            let a = small.get(i).copied().unwrap_or(0.0);
            let b = large.get(i).copied().unwrap_or(0.0);
            worst = worst.max(a - b);
        }
    }
    Ok((worst <= 1e-9, format!("largest decrease of an ordered eigenvalue {worst:.2e} (slack 1e-9), n = {n}")))
}

fn ball_bases() -> Result<(bool, String)> {
    let ks = [50.0f64, 100.0, 200.0];
    let target = 1.0 / (4.0 * PI);
    let radii = linspace(0.1, 0.8, 36);
    let mut passed = true;
    let mut detail = Vec::new();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let mut errs = Vec::new();
        let mut boundary = 0.0;
        for &k in &ks {
            let basis = BallBasis::new(2, k.round() as usize, k, bc)?;
            let e: Vec<Result<f64>> =
                radii.par_iter().map(|&r| Ok((basis.diag(r)? / (k * k) - target).abs())).collect();
            errs.push(e.into_iter().try_fold(0.0f64, |m, x| Ok::<f64, crate::Error>(m.max(x?)))?);
            if bc == BoundaryCondition::Dirichlet {
                boundary = basis.diag(1.0)? / (k * k);
            }
        }
        let mut ok = non_increasing(&errs, 1.1) && errs[errs.len() - 1] <= 0.05 * target;
        let mut line = format!("{bc}: {} (tol {:.3e})", fmt_list(&errs), 0.05 * target);
        if bc == BoundaryCondition::Dirichlet {
            ok &= boundary.abs() < 1e-3;
            line.push_str(&format!(", diagonal at r=1 over K^2 {boundary:.2e}"));
        }
        passed &= ok;
        detail.push(line);
    }
    Ok((passed, detail.join("; ")))
}

fn bessel_suite() -> Result<(bool, String)> {
    let mut passed = true;
    let mut detail = Vec::new();

    // First zero of J_0 against bisection on a plain power series.
    let series_j0 = |t: f64| {
        let q = -0.25 * t * t;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= q / (k * k) as f64;
            sum += term;
        }
        sum
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if series_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let zero_err = (bessel_zeros(BesselOrder::new(0.0)?, 1)?.zeros[0] - 0.5 * (lo + hi)).abs();
    passed &= zero_err <= 1e-10;
    detail.push(format!("j_0,1 err {zero_err:.1e}"));

    // Three-term recurrence.
    let mut residual: f64 = 0.0;
    for &v in &[1.0, 1.5, 2.0, 4.5, 10.0, 25.25, 60.0, 100.0] {
        for t in linspace(0.1, 200.0, 250) {
            let r = (jv(v - 1.0, t) + jv(v + 1.0, t) - 2.0 * v / t * jv(v, t)).abs() / jv(v, t).abs().max(1.0);
            residual = residual.max(r);
        }
    }
    passed &= residual <= 1e-10;
    detail.push(format!("recurrence residual {residual:.1e}"));

    // Monotone up to the turning point, with J_v(v) <= 0.44731 v^{-1/3}.
    let mut bound_ok = true;
    for &v in &[1.0, 2.0, 5.0, 10.0, 50.0] {
        let peak = jv(v, v);
        let grid_max = linspace(0.0, v, 2001).iter().map(|&t| jv(v, t).abs()).fold(0.0, f64::max);
        bound_ok &= grid_max <= peak * (1.0 + 1e-12) && peak <= 0.44731 * v.powf(-1.0 / 3.0);
    }
    passed &= bound_ok;
    detail.push(format!("turning-point bound {}", if bound_ok { "ok" } else { "violated" }));

    // integral_0^2000 J_1(2t) J_1(t) / t dt = 1/4.
    let ortho = integrate_panels(
        |t| if t == 0.0 { 0.0 } else { jv(1.0, 2.0 * t) * jv(1.0, t) / t },
        0.0,
        2000.0,
        2000,
        16,
    );
    passed &= (ortho - 0.25).abs() <= 1e-4;
    detail.push(format!("orthogonality integral {ortho:.8}"));

    // Integrated recurrence identity at v0 = 1, L = 50, x = 80, integrals cut
    // at T = 5000 with the leading asymptotic tail added back.
    let (v0, l, x, big_t) = (1.0, 50usize, 80.0, 5000.0);
    let tail_integral = |v: f64| {
        let body = integrate_panels(|t| jv(v, t).powi(2) / t, x, big_t, 2460, 16);
        let tail = 1.0 / (PI * big_t) + (2.0 * big_t - v * PI).cos() / (2.0 * PI * big_t * big_t);
        body + tail
    };
    let vl = v0 + l as f64;
    let lhs = 0.5 * jv(v0, x).powi(2) + 0.5 * jv(vl, x).powi(2) - v0 * tail_integral(v0) + vl * tail_integral(vl);
    let rhs = bessel_sum_squares(BesselOrder::new(v0)?, l, x)?;
    let identity = (lhs - rhs).abs();
    passed &= identity <= 1e-4;
    detail.push(format!("integrated identity residual {identity:.1e}"));

    Ok((passed, detail.join("; ")))
}

fn functionals() -> Result<(bool, String)> {
    let b = appendix_functional_b(3, 0.7, &ProfileU)?;
    let errs = [250usize, 500, 1000, 2000]
        .iter()
        .map(|&n| Ok((appendix_functional_a(3, n, 0.7, &ProfileU)? - b).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst: f64 = 0.0;
    for r in linspace(0.1, 5.0, 50) {
        let want = profile_u(r)? - profile_u_d(3, r)?;
        worst = worst.max((appendix_functional_b(3, r, &ProfileU)? - want).abs());
    }
    let passed = non_increasing(&errs, 1.0) && errs[3] <= 0.01 && worst <= 1e-8;
    Ok((
        passed,
        format!("|A_N(U) - B(U)| over N=250..2000: {} (tol 0.01); B(U) vs U - U^(3) max {worst:.1e}", fmt_list(&errs)),
    ))
}
