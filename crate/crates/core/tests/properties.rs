use proptest::prelude::*;
use sfb_core::ballbasis::{dirichlet_wavenumbers, neumann_wavenumbers};
use sfb_core::bessel::{bessel_j, bessel_zeros, BesselOrder};
use sfb_core::harmonic::{harm_dim, legendre_pd_all};
use sfb_core::kernel::{kernel_diag, kernel_full, Bandlimit};
use sfb_core::profiles::profile_w_d;

fn j(v: f64, t: f64) -> f64 {
    bessel_j(BesselOrder::new(v).unwrap(), t).unwrap()
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn three_term_recurrence(v in 1.0f64..150.0, t in 0.1f64..200.0) {
        let lhs = j(v - 1.0, t) + j(v + 1.0, t);
        let mid = j(v, t);
        let residual = (lhs - 2.0 * v / t * mid).abs();
        prop_assert!(residual <= 1e-10 * mid.abs().max(1.0), "v={v} t={t} residual={residual:e}");
    }

    #[test]
    fn zeros_interlace(v in 0.0f64..40.0) {
        let a = bessel_zeros(BesselOrder::new(v).unwrap(), 21).unwrap().zeros;
        let b = bessel_zeros(BesselOrder::new(v + 1.0).unwrap(), 20).unwrap().zeros;
        for k in 0..20 {
            prop_assert!(a[k] < b[k] && b[k] < a[k + 1], "v={v} k={k}");
        }
    }

    #[test]
    fn normalized_legendre_bounded(d in 2u32..=6, t in -1.0f64..=1.0) {
        for p in legendre_pd_all(d, 64, t).unwrap() {
            prop_assert!(p.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn harmonic_dimension_increments(d in 3u32..=9, l in 0usize..300) {
        let lhs = harm_dim(d, l + 1).unwrap() - harm_dim(d, l).unwrap();
        let (lu, du) = (l as u128, d as u128);
        let rhs = binomial(lu + du - 2, du - 3) + binomial(lu + du - 3, du - 3);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_diagonal_consistent_and_nonnegative(
        d in 2u32..=5,
        l in 0usize..=32,
        k in 1.0f64..40.0,
        r in 0.0f64..3.0,
    ) {
        let bl = Bandlimit::new(d, l, k).unwrap();
        let diag = kernel_diag(&bl, r).unwrap();
        prop_assert!(diag >= 0.0);
        if r > 1e-3 {
            let full = kernel_full(&bl, r, r, 1.0).unwrap();
            prop_assert!((full - diag).abs() <= 1e-12 * diag, "full={full} diag={diag}");
        }
    }

    #[test]
    fn dilation_is_exact(d in 2u32..=5, r in 0.0f64..10.0, kappa in 0.1f64..5.0) {
        prop_assert_eq!(profile_w_d(d, r, kappa).unwrap(), profile_w_d(d, r / kappa, 1.0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wavenumbers_solve_their_equations(d in 2u32..=4, l in 0usize..=12, k_max in 5.0f64..60.0) {
        let nu = l as f64 + 0.5 * (d as f64 - 2.0);
        for m in dirichlet_wavenumbers(d, l, k_max).unwrap() {
            prop_assert!(m.k <= k_max);
            prop_assert!(j(nu, m.k).abs() <= 1e-10);
        }
        for m in neumann_wavenumbers(d, l, k_max).unwrap() {
            if m.is_constant() {
                continue;
            }
            let residual = l as f64 * j(nu, m.k) - m.k * j(nu + 1.0, m.k);
            prop_assert!(residual.abs() <= 1e-10 * m.k.max(1.0), "k={} residual={residual:e}", m.k);
        }
    }
}

#[test]
fn harmonic_dimension_growth() {
    for d in 3u32..=6 {
        let l = 10_000usize;
        let gamma: f64 = (1..d - 1).map(f64::from).product();
        let ratio = harm_dim(d, l).unwrap() as f64 * gamma / (2.0 * (l as f64).powi(d as i32 - 2));
        assert!((ratio - 1.0).abs() < 1e-2, "d={d} ratio={ratio}");
    }
}
