mod common;

use common::*;
use eberlein_core::generators::catalog;
use eberlein_core::orthogonality::{
    besicovitch_orthogonality, fb_product_check, golden_frequencies, orthogonality_run, OrthoConfig,
};
use eberlein_core::{Frequency, VanHoveFamily};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn directions_agree(m in catalog_spec(), v in catalog_spec(), base in 4u64..400, l in 0usize..30) {
        let r = orthogonality_run(&comb(m), &comb(v), &VanHoveFamily::symmetric(), &[base, 2 * base, 4 * base], l, &OrthoConfig::default()).unwrap();
        prop_assert!(r.directions_agree());
        for s in &r.scales {
            prop_assert!(s.forward >= 0.0 && (s.forward - s.backward).abs() <= 1e-12);
        }
    }

    #[test]
    fn aux_bound_is_never_exceeded(
        m in catalog_spec(),
        v in catalog_spec(),
        (fam, n) in family_and_n(),
        k in 0i64..8,
        rationals in prop::collection::btree_set((1i64..12, 2i64..12), 0..4),
        l in 0usize..30,
    ) {
        let mut freqs = golden_frequencies(k);
        for (p, q) in rationals {
            let f = Frequency::rational(p, q).unwrap();
            if !freqs.iter().any(|g| g.same_character(&f)) {
                freqs.push(f);
            }
        }
        let r = besicovitch_orthogonality(&comb(m), &comb(v), &freqs, &family(fam), n, l).unwrap();
        prop_assert!(r.measured_sup <= r.bound, "{} > {}", r.measured_sup, r.bound);
    }
}

#[test]
fn product_rule_at_zero_for_every_catalog_pair() {
    let fam = VanHoveFamily::symmetric();
    for a in catalog() {
        for b in catalog() {
            let r = fb_product_check(&comb(a), &comb(b), Frequency::ZERO, &fam, 1 << 14, 200).unwrap();
            assert!(r.residual <= 0.05, "{a} {b}: {}", r.residual);
        }
    }
}
