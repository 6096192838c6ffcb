#![allow(dead_code)]

use eberlein_core::generators::{catalog, make};
use eberlein_core::{Frequency, VanHoveFamily, WeightedComb, GOLDEN};
use proptest::prelude::*;

pub const FAMILIES: [&str; 6] = ["sym", "onesided", "pow:1,2", "pow:2,1", "refl:onesided", "shift:-13:sym"];

pub fn comb(spec: &str) -> WeightedComb {
    make(spec).unwrap()
}

pub fn family(spec: &str) -> VanHoveFamily {
    spec.parse().unwrap()
}

/// Scale cap keeping `|A_n|` below a few thousand for every family above.
pub fn small_n(family: &str) -> u64 {
    if family.starts_with("pow") {
        40
    } else {
        3000
    }
}

pub fn catalog_spec() -> impl Strategy<Value = &'static str> {
    prop::sample::select(catalog())
}

pub fn family_spec() -> impl Strategy<Value = &'static str> {
    prop::sample::select(FAMILIES.to_vec())
}

pub fn frequency() -> impl Strategy<Value = Frequency> {
    prop_oneof![
        (-40i64..40, 1i64..40).prop_map(|(p, q)| Frequency::rational(p, q).unwrap()),
        (0.0f64..1.0).prop_map(|x| Frequency::real(x).unwrap()),
        (-6i64..=6).prop_map(|k| Frequency::multiple_of(GOLDEN, k)),
    ]
}

/// Family spec with a scale valid for it.
pub fn family_and_n() -> impl Strategy<Value = (&'static str, u64)> {
    family_spec().prop_flat_map(|f| (Just(f), 1..=small_n(f)))
}
