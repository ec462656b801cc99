use std::f64::consts::PI;

use proptest::prelude::*;
use sfb_core::ballbasis::{ball_kernel_diag, dirichlet_wavenumbers, neumann_wavenumbers, BallMode, BoundaryCondition};
use sfb_core::bessel::{bessel_j, BesselOrder};
use sfb_core::concentration::{spectrum, RadialDomain, Spectrum};
use sfb_core::harmonic::{harm_dim, sphere_volume};
use sfb_core::kernel::{kernel_diag, Bandlimit};
use sfb_core::profiles::{profile_u, profile_u_d, profile_w_d};
use sfb_core::quadrature::integrate_panels;

fn j(v: f64, t: f64) -> f64 {
    bessel_j(BesselOrder::new(v).unwrap(), t).unwrap()
}

#[test]
fn bessel_peak_bound_beyond_turning_point() {
    for v in [10.0, 20.0, 50.0, 100.0, 400.0] {
        let step = 0.005;
        let n = (3.0 * v / step) as usize;
        let peak = (1..=n).map(|i| j(v, i as f64 * step).abs()).fold(0.0, f64::max);
        let bound = 0.675 * f64::powf(v, -1.0 / 3.0) * (1.0 + 1e-3);
        assert!(peak <= bound, "v={v} peak={peak} bound={bound}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// The diagonal as a frequency integral,
    /// `sum_l dim_l / |S| r^{2-d} integral_0^K J_{nu_l}(k r)^2 k dk`.
    #[test]
    fn kernel_diag_matches_frequency_integral(
        d in 2u32..=4,
        l_max in 0usize..=32,
        k in 1.0f64..40.0,
        r in 0.05f64..2.0,
    ) {
        let bl = Bandlimit::new(d, l_max, k).unwrap();
        let nu0 = 0.5 * (d as f64 - 2.0);
        let mut direct = 0.0;
        for l in 0..=l_max {
            let nu = nu0 + l as f64;
            let radial = integrate_panels(|q| j(nu, q * r).powi(2) * q, 0.0, k, 200, 16);
            direct += harm_dim(d, l).unwrap() as f64 * radial;
        }
        direct *= r.powf(2.0 - d as f64) / sphere_volume(d).unwrap();
        let lommel = kernel_diag(&bl, r).unwrap();
        prop_assert!((lommel - direct).abs() <= 1e-8 * direct, "lommel={lommel} direct={direct}");
    }
}

fn radial_inner_product(nu: f64, a: &BallMode, b: &BallMode) -> f64 {
    a.norm_const * b.norm_const * integrate_panels(|r| j(nu, a.k * r) * j(nu, b.k * r) * r, 0.0, 1.0, 64, 16)
}

#[test]
fn ball_modes_are_orthonormal() {
    for d in [2u32, 3] {
        for l in [0usize, 1, 4, 9] {
            let nu = l as f64 + 0.5 * (d as f64 - 2.0);
            for modes in [dirichlet_wavenumbers(d, l, 40.0).unwrap(), neumann_wavenumbers(d, l, 40.0).unwrap()] {
                let modes: Vec<_> = modes.into_iter().filter(|m| !m.is_constant()).collect();
                // Ten pairs spread over the list, diagonal ones included.
                for p in 0..10 {
                    let i = (3 * p) % modes.len();
                    let k = (5 * p + 1) % modes.len();
                    for (a, b) in [(i, i), (i, k)] {
                        let got = radial_inner_product(nu, &modes[a], &modes[b]);
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((got - want).abs() < 1e-8, "d={d} l={l} pair=({a},{b}) got {got}");
                    }
                }
            }
        }
    }
}

#[test]
fn ball_kernel_diag_nonnegative() {
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        for d in [2u32, 3] {
            for i in 0..=40 {
                let r = i as f64 / 40.0;
                assert!(ball_kernel_diag(d, 20, 20.0, r, bc).unwrap() >= 0.0);
            }
        }
    }
}

#[test]
fn u_in_the_plane_is_u() {
    for i in 0..200 {
        let r = 5.0 * i as f64 / 199.0;
        assert!((profile_u_d(2, r).unwrap() - profile_u(r).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn profiles_flat_then_strictly_decreasing() {
    for d in 2u32..=5 {
        let scaled_u = |r: f64| r.powf(2.0 - d as f64) * profile_u_d(d, r).unwrap();
        let w = |r: f64| profile_w_d(d, r, 1.0).unwrap();
        let inside: Vec<f64> = (1..=50).map(|i| i as f64 / 50.0).collect();
        let (u0, w0) = (scaled_u(1.0), w(0.0));
        for &r in &inside {
            assert!((scaled_u(r) - u0).abs() < 1e-9, "d={d} r={r}");
            assert!((w(r) - w0).abs() < 1e-9, "d={d} r={r}");
        }
        let outside: Vec<f64> = (0..=190).map(|i| 1.0 + 0.1 * i as f64).collect();
        for pair in outside.windows(2) {
            assert!(scaled_u(pair[1]) < scaled_u(pair[0]), "d={d} r={}", pair[1]);
            assert!(w(pair[1]) < w(pair[0]), "d={d} r={}", pair[1]);
        }
    }
}

#[test]
fn plateau_height_from_profile_at_one() {
    for d in 2u32..=5 {
        let df = d as f64;
        let scale = 2.0 / (integer_gamma(df - 1.0) * sphere_volume(d).unwrap() * df);
        let want = scale * profile_u_d(d, 1.0).unwrap();
        assert!((profile_w_d(d, 0.0, 1.0).unwrap() - want).abs() < 1e-9, "d={d}");
    }
}

/// Gamma at the small positive integers needed above.
fn integer_gamma(x: f64) -> f64 {
    (1..x.round() as u32).map(f64::from).product()
}

fn radius_two_spectrum(k: f64, nodes: Option<usize>) -> Spectrum {
    let bl = Bandlimit::from_kappa(2, 1.0, k).unwrap();
    spectrum(&bl, &RadialDomain::ball(2.0).unwrap(), nodes).unwrap()
}

#[test]
fn nystrom_spectrum_stable_under_refinement() {
    for k in [20.0, 40.0, 60.0] {
        let coarse = radius_two_spectrum(k, None);
        let fine = radius_two_spectrum(k, Some(2 * coarse.nodes));
        let (a, b) = (coarse.expanded(), fine.expanded());
        for i in 0..25 {
            assert!((a[i] - b[i]).abs() < 1e-6, "K={k} i={i}: {} vs {}", a[i], b[i]);
        }
    }
}

#[test]
fn spectrum_in_range_and_identities_hold() {
    let s = radius_two_spectrum(30.0, None);
    assert!(!s.summary.out_of_range);
    assert!(s.summary.raw_max <= 1.0 + 1e-8 && s.summary.raw_min >= -1e-8);
    let trace: f64 = s.merged.iter().map(|e| e.multiplicity as f64 * e.value).sum();
    let hs: f64 = s.merged.iter().map(|e| e.multiplicity as f64 * e.value * e.value).sum();
    assert!((trace - s.summary.trace).abs() < 1e-9 * trace);
    assert!((hs - s.summary.hs_norm_sq).abs() < 1e-9 * hs);
    assert!((s.summary.delta_k - (trace - hs)).abs() < 1e-9 * trace);
}

#[test]
fn spectrum_json_round_trip() {
    let s = spectrum(&Bandlimit::new(3, 6, 9.0).unwrap(), &RadialDomain::new(0.5, 1.5).unwrap(), Some(40)).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: Spectrum = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
}

#[test]
fn plateau_value_in_the_plane() {
    assert!((profile_w_d(2, 0.5, 1.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-14);
}
