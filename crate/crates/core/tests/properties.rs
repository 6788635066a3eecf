mod support;

use proptest::prelude::*;
use support::{coprime, mirror, sum, torus};
use upsilon_core::complex::direct_sum_with_box;
use upsilon_core::upsilon::{gamma_at, upsilon, SectorData};
use upsilon_core::upsilon2::Upsilon2Context;
use upsilon_core::{BifilteredComplex, Rational};

/// Generator budget for tensor products so debug runs stay quick.
const MAX_GENERATORS: usize = 120;

fn knot() -> impl Strategy<Value = (u64, u64, bool)> {
    (2u64..=8, 3u64..=9, any::<bool>())
        .prop_filter("coprime p < q", |(p, q, _)| p < q && coprime(*p, *q))
}

fn build((p, q, mirrored): (u64, u64, bool)) -> BifilteredComplex {
    let c = torus(p, q);
    if mirrored {
        mirror(&c)
    } else {
        c
    }
}

fn complex() -> impl Strategy<Value = BifilteredComplex> {
    prop_oneof![
        knot().prop_map(build),
        (knot(), knot())
            .prop_filter("bounded size", |(a, b)| build(*a).len() * build(*b).len() <= MAX_GENERATORS)
            .prop_map(|(a, b)| sum(&build(a), &build(b))),
    ]
}

fn unit_t() -> impl Strategy<Value = Rational> {
    (1i64..=30).prop_flat_map(|d| (0..=2 * d).prop_map(move |n| Rational::new(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn upsilon_is_additive(a in knot(), b in knot()) {
        let (c, d) = (build(a), build(b));
        prop_assume!(c.len() * d.len() <= MAX_GENERATORS);
        let lhs = upsilon(&sum(&c, &d)).unwrap();
        let rhs = upsilon(&c).unwrap().add(&upsilon(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mirror_negates(c in complex()) {
        prop_assert_eq!(upsilon(&mirror(&c)).unwrap(), upsilon(&c).unwrap().negate());
    }

    #[test]
    fn upsilon_vanishes_at_zero(c in complex()) {
        prop_assert!(upsilon(&c).unwrap().eval(&Rational::zero()).unwrap().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero(c in complex()) {
        for g in 0..c.len() {
            prop_assert!(c.boundary_of(c.boundary(g)).is_empty());
        }
    }

    #[test]
    fn gamma_certificates_verify(c in complex(), t in unit_t()) {
        let data = SectorData::new(&c);
        gamma_at(&c, &t).unwrap().verify(&data).unwrap();
    }

    #[test]
    fn boxes_leave_both_invariants_unchanged(
        k in knot(),
        corner in (-6i64..=8, -6i64..=8),
        sides in (1u64..=4, 1u64..=4),
        top in -1i64..=2,
    ) {
        let c = build(k);
        let boxed = direct_sum_with_box(&c, corner.0, corner.1, sides.0, sides.1, top).unwrap();
        let plain = Upsilon2Context::new(&c).unwrap();
        let extra = Upsilon2Context::new(&boxed).unwrap();
        prop_assert_eq!(&plain.upsilon, &extra.upsilon);
        for (t0, jump) in plain.upsilon.singularities() {
            if jump.is_positive() {
                prop_assert_eq!(plain.upsilon2_at(&t0).unwrap(), extra.upsilon2_at(&t0).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn gamma2_search_strategies_agree(c in complex()) {
        let ctx = Upsilon2Context::new(&c).unwrap();
        for (t0, jump) in ctx.upsilon.singularities() {
            if jump.is_positive() {
                let fast = ctx.gamma2_at(&t0).unwrap();
                let slow = ctx.gamma2_linear_scan(&t0).unwrap();
                prop_assert_eq!(&fast.gamma2, &slow.gamma2);
                ctx.verify(&fast).unwrap();
            }
        }
    }
}
