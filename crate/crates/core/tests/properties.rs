use hypershift::certify::{Certificate, Relation};
use hypershift::constructions::{
    build_schedule, hypercyclic_prefix, orbit_visit, periodic_fixpoint_check, periodic_point, periodic_point_distance,
    DenseEnumeration,
};
use hypershift::operators::{ShiftOperator, WeightSequence};
use hypershift::scalars::{Rational, Scalar};
use hypershift::spaces::{CoordVector, SpaceSpec};
use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn real_scalar() -> impl Strategy<Value = Scalar> {
    rational().prop_map(Scalar::Real)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![real_scalar(), (rational(), rational()).prop_map(|(a, b)| Scalar::complex(a, b))]
}

fn sparse(coeff: impl Strategy<Value = Scalar>) -> impl Strategy<Value = CoordVector> {
    prop::collection::vec((1usize..=14, coeff), 0..6)
        .prop_map(|pairs| {
            let mut v = CoordVector::zero();
            for (k, x) in pairs {
                v.set(k, x).unwrap();
            }
            v
        })
}

fn weights() -> impl Strategy<Value = WeightSequence> {
    prop_oneof![
        (2i64..=5, 1i64..=3).prop_filter_map("base above one", |(p, q)| {
            (p > q).then(|| format!("exp:{p}/{q}").parse().unwrap())
        }),
        Just("exp:1+1*i".parse().unwrap()),
        Just("exp:2-1*i".parse().unwrap()),
        Just("table:[1,2,2,3];tail=geometric:3/2".parse().unwrap()),
    ]
}

fn rational_pow(r: &Rational, n: u32) -> Rational {
    Pow::pow(r, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_display_round_trips(z in scalar()) {
        prop_assert_eq!(z.to_string().parse::<Scalar>().unwrap(), z);
    }

    #[test]
    fn vector_display_round_trips(v in sparse(scalar())) {
        prop_assert_eq!(v.to_string().parse::<CoordVector>().unwrap(), v);
    }

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).modulus_squared(), a.modulus_squared() * b.modulus_squared());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn modulus_enclosure(z in scalar(), bits in 4u32..80) {
        let iv = z.modulus_interval(bits);
        let msq = z.modulus_squared();
        prop_assert!(&iv.lo * &iv.lo <= msq && msq <= &iv.hi * &iv.hi);
        prop_assert!(iv.meets_width(bits));
    }

    /// `lo^p ≤ Σ|x_k|^p ≤ hi^p` exactly for integer `p`, and the sup norms
    /// bracket the largest modulus.
    #[test]
    fn norm_enclosures(v in sparse(real_scalar()), p in 1u32..=4, bits in 8u32..48) {
        let spec: SpaceSpec = format!("l{p}").parse().unwrap();
        let iv = spec.clone().with_precision(bits).norm(&v);
        let sum: Rational = v.iter().map(|(_, x)| rational_pow(&x.re().abs(), p)).sum();
        prop_assert!(rational_pow(&iv.lo, p) <= sum && sum <= rational_pow(&iv.hi, p));
        prop_assert!(iv.meets_width(bits));
        let max = v.iter().map(|(_, x)| x.re().abs()).max().unwrap_or_else(Rational::zero);
        prop_assert_eq!(SpaceSpec::c0().norm(&v).hi, max);
    }

    #[test]
    fn complex_norm_enclosures(v in sparse(scalar()), bits in 8u32..48) {
        let iv = SpaceSpec::l2().with_precision(bits).norm(&v);
        let sum: Rational = v.iter().map(|(_, x)| x.modulus_squared()).sum();
        prop_assert!(&iv.lo * &iv.lo <= sum && sum <= &iv.hi * &iv.hi);
        let l1 = SpaceSpec::l1().with_precision(bits).norm(&v);
        prop_assert!(iv.lo <= l1.hi);
    }

    #[test]
    fn shift_identities(w in weights(), x in sparse(scalar()), n in 0usize..=6) {
        prop_assert_eq!(w.apply_shift(&w.right_inverse(&x)), x.clone());
        let mut a = x.clone();
        let mut b = x.clone();
        for _ in 0..n {
            a = w.apply_shift(&a);
            b = w.right_inverse(&b);
        }
        prop_assert_eq!(w.apply_power(n, &x), a);
        prop_assert_eq!(w.right_inverse_power(n, &x), b);
        // B A only loses the first coordinate.
        let mut tail = x.clone();
        tail.set(1, Scalar::zero()).unwrap();
        prop_assert_eq!(w.right_inverse(&w.apply_shift(&x)), tail);
    }

    #[test]
    fn shift_is_linear(w in weights(), x in sparse(scalar()), y in sparse(scalar()), c in scalar()) {
        let lhs = w.apply_shift(&(&x.scale(&c) + &y));
        let rhs = &w.apply_shift(&x).scale(&c) + &w.apply_shift(&y);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reciprocal_tail_is_nonincreasing(w in weights(), n in 1usize..40) {
        let t0 = w.reciprocal_tail(n).unwrap();
        let t1 = w.reciprocal_tail(n + 1).unwrap();
        prop_assert!(t1 <= t0);
        prop_assert!(w.reciprocal_modulus_upper(n) <= t0);
    }

    #[test]
    fn periodic_points_are_fixed(
        w in weights(),
        head in prop::collection::vec(scalar(), 1..=5),
        blocks in 2usize..=10,
    ) {
        let pp = periodic_point(&w, head, blocks).unwrap();
        let cert = periodic_fixpoint_check(&w, &pp);
        prop_assert!(cert.passed() && cert.recheck());
        prop_assert!(pp.block_mass_certificates(&w).iter().all(Certificate::passed));
    }

    #[test]
    fn distance_bound_holds(w in weights(), y in sparse(real_scalar()), extra in 0usize..6) {
        let op = ShiftOperator::new(w, SpaceSpec::l1());
        let n = y.max_support().max(1) + extra;
        let d = periodic_point_distance(&op, &y, n, 4).unwrap();
        prop_assert!(d.certificate.passed());
        let d2 = periodic_point_distance(&op, &y, n + 1, 4).unwrap();
        prop_assert!(d2.bound <= d.bound);
    }

    #[test]
    fn enumeration_round_trip(m in 1u64..=50_000) {
        let e = DenseEnumeration::real();
        prop_assert_eq!(e.index_of(&e.element(m)), Some(m));
    }

    #[test]
    fn every_small_vector_is_enumerated(v in sparse(real_scalar())) {
        let e = DenseEnumeration::real();
        if let Some(m) = e.index_of(&v) {
            prop_assert_eq!(e.element(m), v);
        }
    }

    #[test]
    fn certificates_recheck(a in rational(), b in rational()) {
        for rel in [Relation::Le, Relation::Ge, Relation::Lt, Relation::Gt, Relation::Eq] {
            let c = Certificate::compare("p", "", a.clone(), rel, b.clone());
            prop_assert!(c.is_consistent());
            let json = serde_json::to_string(&c).unwrap();
            let back: Certificate = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.recheck(), c.passed());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Schedules built from arbitrary targets re-verify, and every orbit visit
    /// decomposes exactly with the residual inside its bound.
    #[test]
    fn orbit_decomposition(
        w in weights(),
        targets in prop::collection::vec(sparse(real_scalar()), 1..=5),
    ) {
        let schedule = build_schedule(&w, &targets, 10_000).unwrap();
        prop_assert!(schedule.reverify(&w));
        for space in [SpaceSpec::l1(), SpaceSpec::l2(), SpaceSpec::c0()] {
            let op = ShiftOperator::new(w.clone(), space);
            let prefix = hypercyclic_prefix(&op, &schedule, targets.len()).unwrap();
            prop_assert!(prefix.disjoint_supports());
            for m in 1..=targets.len() {
                let visit = orbit_visit(&op, &prefix, m).unwrap();
                prop_assert!(visit.passed(), "{:?}", visit.certificates.iter().find(|c| !c.passed()));
            }
        }
    }
}
