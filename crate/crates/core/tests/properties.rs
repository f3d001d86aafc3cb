use bimoment::bounds::{self, sweep, Comparison, SweepFamily};
use bimoment::oracle::{exact_tail, expected_complementary_moment};
use bimoment::transforms::{
    complementary_moment, moment_matrix_from_tails, moment_series_eval, pgf_eval,
    pmf_from_moment_matrix, tails_from_moments, TailTable,
};
use bimoment::{
    bonferroni_sums, complement_pmf, counting_pmf, moments_from_pmf, ratio, Atom, Events, Pmf,
    Rational, Scalar,
};
use proptest::prelude::*;

fn pmf_strategy(max_dim: usize) -> impl Strategy<Value = Pmf> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
        prop::collection::vec(0u32..=9, (m + 1) * (n + 1))
            .prop_filter("some mass", |w| w.iter().any(|&x| x > 0))
            .prop_map(move |w| {
                let total: u32 = w.iter().sum();
                let p = w
                    .into_iter()
                    .map(|x| ratio(x.into(), total.into()))
                    .collect();
                Pmf::from_flat(m, n, p).unwrap()
            })
    })
}

fn events_strategy() -> impl Strategy<Value = Events> {
    (1..=3usize, 1..=3usize, 1..=6usize).prop_flat_map(|(m, n, count)| {
        prop::collection::vec(
            (
                1u32..=5,
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(any::<bool>(), n),
            ),
            count,
        )
        .prop_map(move |raw| {
            let total: u32 = raw.iter().map(|r| r.0).sum();
            let atoms = raw
                .into_iter()
                .map(|(w, a, b)| Atom::new(ratio(w.into(), total.into()), a, b))
                .collect();
            Events::new(m, n, atoms).unwrap()
        })
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(a, b)| ratio(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_survives_moment_round_trip(pmf in pmf_strategy(4)) {
        let mm = moments_from_pmf(&pmf);
        prop_assert_eq!(pmf_from_moment_matrix(&mm).unwrap(), pmf);
    }

    #[test]
    fn tails_and_moments_determine_each_other(pmf in pmf_strategy(4)) {
        let mm = moments_from_pmf(&pmf);
        let tails = TailTable::from_pmf(&pmf);
        prop_assert_eq!(&moment_matrix_from_tails(&tails).unwrap(), &mm);
        for u in 0..=pmf.m() {
            for v in 0..=pmf.n() {
                prop_assert_eq!(tails_from_moments(&mm, u, v).unwrap(), exact_tail(&pmf, u, v).unwrap());
            }
        }
    }

    #[test]
    fn bonferroni_sums_are_binomial_moments(es in events_strategy()) {
        let sums = bonferroni_sums(&es, es.m(), es.n()).unwrap();
        prop_assert_eq!(sums, moments_from_pmf(&counting_pmf(&es)));
    }

    #[test]
    fn generating_function_matches_moment_series(pmf in pmf_strategy(4), t in small_rational(), s in small_rational()) {
        let one = Rational::from_int(1);
        let mm = moments_from_pmf(&pmf);
        prop_assert_eq!(pgf_eval(&pmf, &(one.clone() + &t), &(one + &s)), moment_series_eval(&mm, &t, &s).unwrap());
    }

    #[test]
    fn complementary_moment_matches_complement_law(pmf in pmf_strategy(4)) {
        let mm = moments_from_pmf(&pmf);
        let flipped = moments_from_pmf(&complement_pmf(&pmf));
        for k in 1..=pmf.m() {
            for l in 1..=pmf.n() {
                let lin = complementary_moment(&mm, k, l).unwrap();
                prop_assert_eq!(&lin, &expected_complementary_moment(&pmf, k, l));
                // E binom(m-S,k) binom(n-T,l) is the (k,l) moment of the complement law.
                let b = |d: usize, r: usize| mm.binom(d as i64, r as i64);
                let mixed = b(pmf.m(), k) * flipped.moment(0, l).unwrap() + b(pmf.n(), l) * flipped.moment(k, 0).unwrap()
                    - flipped.moment(k, l).unwrap();
                prop_assert_eq!(lin, mixed);
            }
        }
    }

    #[test]
    fn every_bound_brackets_the_tail(pmf in pmf_strategy(4)) {
        let mm = moments_from_pmf(&pmf);
        let (m, n) = (pmf.m(), pmf.n());
        for u in 1..=m {
            for v in 1..=n {
                let exact = exact_tail(&pmf, u, v).unwrap();
                for k in 0..=(m + n) / 2 {
                    let (lo, up) = bounds::bonferroni_pair(&mm, u, v, k).unwrap();
                    prop_assert!(lo.value <= exact && exact <= up.value);
                }
                for k in 1..=m {
                    for l in 1..=n {
                        let pair = bounds::frechet_gumbel_type(&mm, u, v, k, l).unwrap();
                        if let Ok(b) = pair.lower { prop_assert!(b.value <= exact); }
                        if let Ok(b) = pair.upper { prop_assert!(exact <= b.value); }
                        if k >= u && l >= v {
                            prop_assert!(exact <= bounds::chung_bound(&mm, u, v, k, l).unwrap().value);
                        }
                    }
                }
            }
        }
        if m >= 2 && n >= 2 {
            let exact = exact_tail(&pmf, 1, 1).unwrap();
            for which in [Comparison::C1GalambosXu, Comparison::C3ChenSeneta, Comparison::C6MadiNagyPrekopa] {
                prop_assert!(bounds::comparison_bound(&mm, which, None, None).unwrap().holds_for(&exact));
            }
        }
    }

    #[test]
    fn sweeps_report_no_shape_violations(pmf in pmf_strategy(4)) {
        let mm = moments_from_pmf(&pmf);
        for family in [SweepFamily::Frechet, SweepFamily::Gumbel] {
            prop_assert!(sweep(&mm, family, 1, 1).unwrap().violations().is_empty());
        }
        for u in 1..=pmf.m() {
            for v in 1..=pmf.n() {
                prop_assert!(sweep(&mm, SweepFamily::Chung, u, v).unwrap().violations().is_empty());
            }
        }
    }

    #[test]
    fn float_inversion_tracks_exact(pmf in pmf_strategy(3)) {
        let approx = bimoment::PmfF64::new(
            pmf.m(),
            pmf.n(),
            pmf.rows().iter().map(|r| r.iter().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap()).collect()).collect(),
        )
        .unwrap();
        let back = pmf_from_moment_matrix(&moments_from_pmf(&approx));
        // Rounding can push tiny cells slightly negative, which construction rejects.
        if let Ok(back) = back {
            for (u, v, p) in back.cells() {
                prop_assert!(p.approx_eq(&approx.prob(u, v)));
            }
        }
    }
}
