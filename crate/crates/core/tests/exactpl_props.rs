mod common;

use common::*;
use ordercert_core::exactpl::{delta0, gamma0, int, rat, PLMap};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_associative(f in pl_map(), g in pl_map(), h in pl_map()) {
        associativity(&f, &g, &h)?;
    }

    #[test]
    fn composition_applies_left_first(f in pl_map(), g in pl_map(), x in rational()) {
        composition_order(&f, &g, &x)?;
    }

    #[test]
    fn inverse_is_two_sided(f in pl_map(), x in rational()) {
        inverse(&f, &x)?;
    }

    #[test]
    fn maps_and_cocycles_are_equivariant(f in pl_map(), c in cocycle(), x in rational(), k in -5i64..5) {
        equivariance(&f, &c, &x, k)?;
    }

    #[test]
    fn canonicalization_is_idempotent(f in pl_map(), c in cocycle()) {
        idempotence(&f, &c)?;
    }

    #[test]
    fn pullback_is_precomposition(c in cocycle(), f in pl_map(), x in rational()) {
        pullback(&c, &f, &x)?;
    }

    #[test]
    fn cocycles_form_a_group(a in cocycle(), b in cocycle(), x in rational()) {
        cocycle_laws(&a, &b, &x)?;
    }

    #[test]
    fn translations_stay_single_points(t in rational()) {
        let m = PLMap::translation(t.clone());
        prop_assert_eq!(m.as_translation(), Some(t.clone()));
        prop_assert!(m.compose(&PLMap::translation(-t)).is_identity());
    }
}

#[test]
fn interpolation_oracle_matches_known_values() {
    assert_eq!(interpolate(delta0().breakpoints(), 1, &rat(1, 3)), rat(1, 6));
    assert_eq!(interpolate(delta0().breakpoints(), 1, &int(-2)), int(-2));
    assert_eq!(interpolate(gamma0().breakpoints(), 0, &rat(1, 4)), gamma0().eval(&rat(1, 4)));
}
