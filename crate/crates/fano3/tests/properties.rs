//! Randomised invariants of the calculi, shrunk by proptest.

use proptest::prelude::*;

use fano3::numring::{seed_space, CurveData, DivisorClass};
use fano3::surfaces::{Base, SurfaceClass};
use fano3::transform::{transform, TransformInput};

fn arb_base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::P2), Just(Base::P1xP1), Just(Base::F1)]
}

fn arb_class() -> impl Strategy<Value = SurfaceClass> {
    (arb_base(), -6i64..=6, -6i64..=6).prop_map(|(b, x, y)| match b {
        Base::P2 => SurfaceClass::p2(x),
        Base::P1xP1 => SurfaceClass::p1xp1(x, y),
        Base::F1 => SurfaceClass::f1(x, y),
    })
}

proptest! {
    #[test]
    fn transform_involution(
        curve in arb_class(),
        deg_y in -60i64..=60,
        k_yb in -40i64..=40,
        pa in 0i64..=5,
    ) {
        let input = TransformInput { deg_y, k_yb, curve, pa };
        let out = transform(&input);
        let back = transform(&TransformInput {
            deg_y: out.deg_yp,
            k_yb: out.k_ypbp,
            curve,
            pa,
        });
        prop_assert_eq!((back.deg_yp, back.k_ypbp), (deg_y, k_yb));
        // the two relative pairings always split the self-intersection
        prop_assert_eq!(out.rel_k + back.rel_k, curve.self_int());
        // degree of the blowup agrees from both sides
        prop_assert_eq!(
            deg_y - 2 * k_yb,
            out.deg_yp - 2 * out.k_ypbp
        );
    }

    #[test]
    fn adjunction_parity_never_trips(curve in arb_class()) {
        // genus() asserts internally that adjunction is even
        let _ = curve.genus();
    }

    #[test]
    fn triple_is_symmetric_and_additive(
        coords in proptest::collection::vec(-9i64..=9, 12),
        seed_pick in 0usize..25,
    ) {
        let names = fano3::numring::seed_names();
        let ring = seed_space(&names[seed_pick]).unwrap();
        let n = ring.rank();
        let take = |k: usize| DivisorClass(coords[k * n..(k + 1) * n].to_vec());
        let (a, b, c) = (take(0), take(1), take(2));
        let t = |x: &DivisorClass, y: &DivisorClass, z: &DivisorClass| {
            ring.triple(x, y, z).unwrap()
        };
        let v = t(&a, &b, &c);
        prop_assert_eq!(v, t(&a, &c, &b));
        prop_assert_eq!(v, t(&c, &b, &a));
        prop_assert_eq!(v, t(&b, &a, &c));
        let sum = DivisorClass(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        prop_assert_eq!(t(&sum, &b, &c), v + t(&b, &b, &c));
    }

    #[test]
    fn blowup_ring_matches_closed_formula(
        seed_pick in 0usize..25,
        dot in proptest::collection::vec(-5i64..=5, 3),
        pa in 0i64..=5,
    ) {
        let names = fano3::numring::seed_names();
        let ring = seed_space(&names[seed_pick]).unwrap();
        let c = CurveData::new(pa, dot[..ring.rank()].to_vec());
        let kc = ring.dot_curve(&ring.anticanonical(), &c).unwrap();
        let up = ring.blowup_ring(&c).unwrap();
        let expected = fano3::blowup::blowup_invariants(ring.anticanonical_degree(), kc, pa);
        prop_assert_eq!(up.anticanonical_degree(), expected.deg_x);
        // exceptional identities, straight off the new ring
        let mk = up.anticanonical();
        let mut e = vec![0i64; up.rank()];
        e[up.rank() - 1] = 1;
        let e = DivisorClass(e);
        prop_assert_eq!(up.triple(&mk, &mk, &e).unwrap(), expected.k2e);
        prop_assert_eq!(up.triple(&mk, &e, &e).unwrap(), expected.ke2);
        prop_assert_eq!(up.triple(&e, &e, &e).unwrap(), expected.e3);
    }
}
