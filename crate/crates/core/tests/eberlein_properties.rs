mod common;

use common::*;
use eberlein_core::correlate::{cross_correlate_direct, cross_correlate_fft};
use eberlein_core::eberlein::{
    bilinear_expansion, finite_autocorrelation, finite_eberlein, identity_reflection,
    identity_tilde_swap,
};
use eberlein_core::fourier_bohr::besicovitch_seminorm;
use eberlein_core::generators::catalog;
use eberlein_core::ConvolutionPath;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..400)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

proptest! {
    #[test]
    fn kernels_agree_on_raw_sequences(a in samples(), g in samples(), l in 0usize..80) {
        let d = cross_correlate_direct(&a, &g, l);
        let f = cross_correlate_fft(&a, &g, l);
        for (x, y) in d.iter().zip(&f) {
            prop_assert!((x - y).norm() <= 1e-9);
        }
    }

    #[test]
    fn kernels_agree_on_combs(
        m in catalog_spec(),
        v in catalog_spec(),
        (fam, n) in family_and_n(),
        l in 0usize..64,
    ) {
        let fam = family(fam);
        let d = finite_eberlein(&comb(m), &comb(v), &fam, n, l, ConvolutionPath::Direct).unwrap();
        let f = finite_eberlein(&comb(m), &comb(v), &fam, n, l, ConvolutionPath::Fft).unwrap();
        prop_assert!(d.max_deviation(&f) <= 1e-9);
    }

    #[test]
    fn finite_identities_are_exact(
        m in catalog_spec(),
        v in catalog_spec(),
        (fam, n) in family_and_n(),
        l in 0usize..24,
        a in (-2.0f64..2.0, -2.0f64..2.0),
        b in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let (mu, nu, fam) = (comb(m), comb(v), family(fam));
        let reports = [
            identity_tilde_swap(&mu, &nu, &fam, n, l).unwrap(),
            identity_reflection(&mu, &nu, &fam, n, l).unwrap(),
            bilinear_expansion(Complex64::new(a.0, a.1), &mu, Complex64::new(b.0, b.1), &nu, &fam, n, l).unwrap(),
        ];
        for r in reports {
            prop_assert!(r.max_deviation <= 1e-12, "{} {}", r.name, r.max_deviation);
        }
    }

    #[test]
    fn profiles_are_bounded(m in catalog_spec(), v in catalog_spec(), (fam, n) in family_and_n(), l in 0usize..40) {
        let (mu, nu, fam) = (comb(m), comb(v), family(fam));
        let p = finite_eberlein(&mu, &nu, &fam, n, l, ConvolutionPath::Auto).unwrap();
        let declared = mu.declared_bound() * nu.declared_bound();
        let cs = besicovitch_seminorm(&mu, 2.0, &fam, n).unwrap()
            * besicovitch_seminorm(&nu.tilde(), 2.0, &fam, n).unwrap();
        for (_, x) in p.lags() {
            prop_assert!(x.norm() <= declared + 1e-12);
            prop_assert!(x.norm() <= cs + 1e-12);
        }
    }
}

#[test]
fn kernels_agree_on_a_million_point_window() {
    let fam = family("sym");
    for (m, v) in [("tm_pm", "fib_rot"), ("bern", "paper_mu")] {
        let d = finite_eberlein(&comb(m), &comb(v), &fam, 1 << 20, 6, ConvolutionPath::Direct).unwrap();
        let f = finite_eberlein(&comb(m), &comb(v), &fam, 1 << 20, 6, ConvolutionPath::Fft).unwrap();
        assert!(d.max_deviation(&f) <= 1e-9);
    }
}

/// Smallest eigenvalue of the Hermitian Toeplitz matrix `[gamma(t_i - t_j)]`
/// for `t` in `[-5, 5]`.
fn toeplitz_min_eigenvalue(spec: &str, fam: &str, n: u64) -> f64 {
    let p = finite_autocorrelation(&comb(spec), &family(fam), n, 10, ConvolutionPath::Auto).unwrap();
    let m = DMatrix::from_fn(11, 11, |i, j| p.value(i as i64 - j as i64));
    m.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[test]
fn autocorrelation_matrix_is_positive_semidefinite() {
    for spec in catalog() {
        for fam in ["sym", "onesided", "pow:1,2"] {
            for n in [1u64 << 10, 1 << 12] {
                let n = if fam == "pow:1,2" { n >> 5 } else { n };
                let lam = toeplitz_min_eigenvalue(spec, fam, n);
                assert!(lam >= -1e-6, "{spec} {fam} {n}: {lam}");
            }
        }
    }
}

#[test]
fn real_combs_have_real_symmetric_autocorrelation() {
    for spec in catalog() {
        let mu = comb(spec);
        if !mu.is_real_valued() {
            continue;
        }
        let p = finite_autocorrelation(&mu, &family("sym"), 1 << 10, 20, ConvolutionPath::Direct).unwrap();
        for (t, v) in p.lags() {
            assert_eq!(v.im, 0.0, "{spec}");
            assert_eq!(v, p.value(-t), "{spec}");
        }
    }
}
