mod common;

use common::*;
use eberlein_core::fourier_bohr::{
    besicovitch_seminorm, character_convolution, fb_coefficient, fb_conjugation_suite,
    trig_poly_fit, trig_poly_residual,
};
use eberlein_core::frequency::farey_grid;
use eberlein_core::generators::catalog;
use eberlein_core::Frequency;
use proptest::prelude::*;

proptest! {
    #[test]
    fn coefficient_is_bounded_by_mean_modulus(spec in catalog_spec(), (fam, n) in family_and_n(), f in frequency()) {
        let fam = family(fam);
        let mu = comb(spec);
        let c = fb_coefficient(&mu, f, &fam, n, 0).unwrap().value.norm();
        let b1 = besicovitch_seminorm(&mu, 1.0, &fam, n).unwrap();
        prop_assert!(c <= b1 * (1.0 + 1e-12));
        prop_assert!(b1 <= besicovitch_seminorm(&mu, 2.0, &fam, n).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn conjugation_and_character_identities(spec in catalog_spec(), (fam, n) in family_and_n(), f in frequency(), l in 0usize..20) {
        let fam = family(fam);
        let mu = comb(spec);
        for r in fb_conjugation_suite(&mu, f, &fam, n).unwrap() {
            prop_assert!(r.max_deviation <= 1e-12, "{} {}", r.name, r.max_deviation);
        }
        let cc = character_convolution(&mu, f, &fam, n, l).unwrap();
        prop_assert!(cc.factorization_deviation <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// On `[0, n - 1]` with `n` divisible by every denominator, characters
    /// are exactly orthogonal and the residual is `sqrt(||mu||^2 - sum |c|^2)`.
    #[test]
    fn residual_nonincreasing_under_orthogonality(
        spec in catalog_spec(),
        k in 1u64..4,
        order in Just(farey_grid(12)).prop_shuffle(),
        take in 1usize..20,
    ) {
        let fam = family("onesided");
        let n = 27_720 * k;
        let mut prev = f64::INFINITY;
        for m in 1..=take.min(order.len()) {
            let r = trig_poly_residual(&comb(spec), &order[..m], &fam, n).unwrap();
            prop_assert!(r <= prev + 1e-9, "{m}: {r} > {prev}");
            prev = r;
        }
    }
}

#[test]
fn bessel_inequality_and_parseval_split() {
    let fam = family("onesided");
    let n = 27_720;
    let freqs = farey_grid(12);
    for spec in catalog() {
        let mu = comb(spec);
        let fit = trig_poly_fit(&mu, &freqs, &fam, n).unwrap();
        let energy: f64 = fit.terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        let b2 = besicovitch_seminorm(&mu, 2.0, &fam, n).unwrap();
        assert!(energy <= b2 * b2 + 1e-12, "{spec}");
        assert!((fit.residual.powi(2) + energy - b2 * b2).abs() <= 1e-9, "{spec}");
    }
}

#[test]
fn coefficients_match_exact_sums_for_periodic_combs() {
    let mu = comb("periodic:3:1,2,-1");
    let fam = family("onesided");
    for p in 0..3 {
        let f = Frequency::rational(p, 3).unwrap();
        let c = fb_coefficient(&mu, f, &fam, 3000, 0).unwrap().value;
        let exact: num_complex::Complex64 = [1.0, 2.0, -1.0]
            .iter()
            .enumerate()
            .map(|(j, w)| f.character(j as i64).conj() * *w)
            .sum::<num_complex::Complex64>()
            / 3.0;
        assert!((c - exact).norm() <= 1e-12);
    }
}
