use krein_core::classify::from_boundary_operator;
use krein_core::*;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rational::frac(p, q))
}

fn square(dim: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(rat(), dim * dim).prop_map(move |v| {
        RationalMatrix::from_fn(dim, dim, |i, j| v[i * dim + j].clone())
    })
}

fn symmetric(dim: usize) -> impl Strategy<Value = RationalMatrix> {
    square(dim).prop_map(|m| &m + &m.transpose())
}

fn low_rank_symmetric(dim: usize) -> impl Strategy<Value = RationalMatrix> {
    // Sum of a few rank-one terms, so zero eigenvalues actually occur.
    (1..=dim, proptest::collection::vec((rat(), proptest::collection::vec(rat(), dim)), dim)).prop_map(
        move |(terms, parts)| {
            let mut m = RationalMatrix::zeros(dim, dim);
            for (w, v) in parts.into_iter().take(terms) {
                m = &m + &RationalMatrix::from_fn(dim, dim, |i, j| &w * &v[i] * &v[j]);
            }
            m
        },
    )
}

fn nonsingular(dim: usize) -> impl Strategy<Value = RationalMatrix> {
    square(dim).prop_filter("singular", move |m| m.rank() == dim)
}

fn interval() -> impl Strategy<Value = (Rational, Rational)> {
    (rat(), (1i64..=30, 1i64..=7)).prop_map(|(a, (p, q))| {
        let b = &a + &rational::frac(p, q);
        (a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inertia_is_congruence_invariant(
        (s, p) in (1usize..=5).prop_flat_map(|d| (low_rank_symmetric(d), nonsingular(d)))
    ) {
        let congruent = &(&p * &s) * &p.transpose();
        prop_assert_eq!(inertia(&congruent).unwrap(), inertia(&s).unwrap());
    }
}

proptest! {
    #[test]
    fn inverse_is_an_involution(m in (1usize..=6).prop_flat_map(nonsingular)) {
        let inv = m.invert().unwrap();
        prop_assert_eq!(&m * &inv, RationalMatrix::identity(m.rows()));
        prop_assert_eq!(inv.invert().unwrap(), m);
    }

    #[test]
    fn negation_swaps_signs(m in (1usize..=6).prop_flat_map(symmetric)) {
        let plus = inertia(&m).unwrap();
        let minus = inertia(&-&m).unwrap();
        prop_assert_eq!((minus.n_neg, minus.n_zero, minus.n_pos), (plus.n_pos, plus.n_zero, plus.n_neg));
    }

    #[test]
    fn nullity_matches_rank(m in (1usize..=6).prop_flat_map(low_rank_symmetric)) {
        let i = inertia(&m).unwrap();
        prop_assert_eq!(i.n_zero, m.rows() - m.rank());
        prop_assert_eq!(i.dim(), m.rows());
    }

    #[test]
    fn transport_is_a_semigroup(n in 1usize..=5, l1 in (1i64..=9, 1i64..=4), l2 in (1i64..=9, 1i64..=4), a in rat()) {
        let (l1, l2) = (rational::frac(l1.0, l1.1), rational::frac(l2.0, l2.1));
        let t = |x: &Rational, len: &Rational| build_t(&TripletSpec::new(n, x.clone(), x + len).unwrap());
        let zero = rational::int(0);
        prop_assert_eq!(&t(&zero, &l1) * &t(&zero, &l2), t(&zero, &(&l1 + &l2)));
        prop_assert_eq!(t(&a, &l1), t(&zero, &l1));
    }

    #[test]
    fn transport_is_unit_lower_toeplitz(n in 1usize..=6, (a, b) in interval()) {
        let t = build_t(&TripletSpec::new(n, a, b).unwrap());
        for i in 0..t.rows() {
            for j in 0..t.cols() {
                if j > i {
                    prop_assert_eq!(&t[(i, j)], &rational::int(0));
                } else if i > 0 && j > 0 {
                    prop_assert_eq!(&t[(i, j)], &t[(i - 1, j - 1)]);
                }
            }
            prop_assert_eq!(&t[(i, i)], &rational::int(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_operator_is_symmetric(n in 1usize..=10, (a, b) in interval()) {
        let bk = build_bk(&TripletSpec::new(n, a, b).unwrap()).unwrap();
        prop_assert!(bk.is_symmetric());
    }

    #[test]
    fn shifted_krein_has_full_negative_squares(n in 1usize..=4, (a, b) in interval(), t in (1i64..=20, 1i64..=4)) {
        let spec = TripletSpec::new(n, a, b).unwrap();
        let bk = build_bk(&spec).unwrap();
        let shift = RationalMatrix::identity(spec.dim()).scale(&rational::frac(t.0, t.1));
        let report = negative_squares(&from_boundary_operator(&bk - &shift), &spec).unwrap();
        prop_assert_eq!(report.kappa, spec.dim());
    }

    #[test]
    fn kappa_ignores_left_multiplication(
        (n, g) in (1usize..=2).prop_flat_map(|n| (Just(n), nonsingular(2 * n))),
        shift in -4i64..=4,
    ) {
        let spec = TripletSpec::unit(n).unwrap();
        let bk = build_bk(&spec).unwrap();
        let params = from_boundary_operator(&bk + &RationalMatrix::identity(spec.dim()).scale(&rational::int(shift)));
        let moved = ExtensionParams::new(&g * &params.c, &g * &params.d);
        prop_assert_eq!(
            negative_squares(&moved, &spec).unwrap().kappa,
            negative_squares(&params, &spec).unwrap().kappa
        );
    }
}
