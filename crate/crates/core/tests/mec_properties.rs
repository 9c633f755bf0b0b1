use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use proptest::prelude::*;
use twistlab::catalog::{cp_hypersurface, fermat_pair, ExampleRecord};
use twistlab::mec::{
    bad_orbit_pairs, build_e1_strata_bw, chi_m_brieskorn, chi_m_bw, chi_m_cover, chi_m_from_e1,
    chi_m_periodic, chi_m_subcritical, chi_m_window, e1_page, graded_from_e1, tensor_cp_infinity,
    BWData, GradedDims, Tail,
};
use twistlab::Rational;

fn tail_strategy() -> impl Strategy<Value = GradedDims> {
    (1usize..=4, -10i64..10)
        .prop_flat_map(|(half, start)| (prop::collection::vec(0u64..=3, 2 * half), Just(start)))
        .prop_map(|(pattern, start)| {
            GradedDims::new(
                BTreeMap::new(),
                Some(Tail {
                    start_degree: start,
                    period: pattern.len(),
                    pattern,
                }),
            )
            .unwrap()
        })
}

fn finite_strategy() -> impl Strategy<Value = GradedDims> {
    prop::collection::btree_map(-6i64..12, 0u64..5, 1..6).prop_map(GradedDims::finite)
}

fn sign(n: u64) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

proptest! {
    #[test]
    fn window_converges_to_periodic_value(g in tail_strategy()) {
        // Partial sums are χ_m(N − s + 1) plus at most one partial period,
        // so every a_N with N ≥ 3w/4 is within this distance of χ_m.
        let t = g.tail.as_ref().unwrap();
        let exact = chi_m_periodic(&g).unwrap().to_f64();
        let max = *t.pattern.iter().max().unwrap() as f64;
        let offset = exact.abs() * (1 - t.start_degree).abs() as f64 + t.period as f64 * max;
        let w = 2000usize;
        let est = chi_m_window(&g, w).unwrap();
        prop_assert!((est - exact).abs() <= offset / (0.75 * w as f64), "{est} vs {exact}");
        if t.start_degree.abs() <= 1 && t.period == 2 {
            prop_assert!((est - exact).abs() <= 10.0 / w as f64);
        }
    }

    #[test]
    fn subcritical_model(finite in finite_strategy(), n in 2u64..=6) {
        let chi = finite.chi().unwrap();
        let shift = n as i64 - 1;
        let tensored = tensor_cp_infinity(&finite, shift).unwrap();
        let value = chi_m_periodic(&tensored).unwrap();
        // Shifting by n − 1 multiplies the Euler characteristic by (−1)^{n−1}.
        prop_assert_eq!(value.clone(), Rational::new(BigInt::from(-sign(n)) * &chi, 2));
        prop_assert_eq!(value, chi_m_subcritical(n, &chi));
    }

    #[test]
    fn subcritical_is_half_integer(n in 2u64..=20, chi in -1000i64..1000) {
        let v = chi_m_subcritical(n, &BigInt::from(chi));
        prop_assert!(v.is_half_integer());
        prop_assert!(*v.denom() == BigInt::from(1) || *v.denom() == BigInt::from(2));
    }

    #[test]
    fn cover_one_is_the_orbibundle_value(
        n in 3u64..=8, chi_m in -50i64..50, chi_h in -50i64..50, c in -3i64..8, k in 1u64..=5, big_n in 1u64..=6,
    ) {
        let d = BWData::new(n, chi_m, chi_h, c, k, big_n).unwrap();
        match (chi_m_cover(&d, 1), chi_m_bw(&d)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(a.is_err() && b.is_err()),
        }
    }

    #[test]
    fn principal_index_is_even_when_ell_is_one(c in -3i64..8, k in 1u64..=6, big_n in 1u64..=12) {
        let d = BWData::new(4, 0, 0, c, k, big_n).unwrap();
        prop_assume!(d.ell() == 1);
        prop_assert_eq!(d.mu_p() % 2, BigInt::from(0));
    }
}

#[test]
fn brieskorn_values_are_injective() {
    for n in [2u64, 4, 6, 8] {
        let values: BTreeSet<Rational> = (1..=999u64)
            .step_by(2)
            .map(|big_n| chi_m_brieskorn(n, big_n).unwrap())
            .collect();
        assert_eq!(values.len(), 500, "n = {n}");
    }
}

fn catalog_data() -> Vec<ExampleRecord> {
    let mut out = Vec::new();
    for n in 4..=6 {
        out.push(cp_hypersurface(n, 1).unwrap());
        for d in 2..=n {
            out.push(fermat_pair(n, d).unwrap());
        }
    }
    out
}

#[test]
fn e1_page_reproduces_the_orbibundle_formula() {
    for rec in catalog_data() {
        for c in 2..=6 {
            for big_n in 1..=4 {
                let mut d = rec.data.clone();
                d.c = c;
                d.big_n = big_n;
                let strata = build_e1_strata_bw(&d, &rec.betti_h, &rec.betti_m, 1).unwrap();
                let page = e1_page(&strata).unwrap();
                let expected = chi_m_bw(&d).unwrap();
                assert_eq!(
                    chi_m_from_e1(&page, &d.mu_p()).unwrap(),
                    expected,
                    "{} c={c} N={big_n}",
                    rec.name
                );
                let g = graded_from_e1(&page, &d.mu_p()).unwrap();
                assert_eq!(chi_m_periodic(&g).unwrap(), expected);
            }
        }
    }
}

#[test]
fn no_bad_orbits_in_orbibundle_strata() {
    let mut pairs = 0;
    for c in 2..=6 {
        for big_n in 1..=4 {
            let d = BWData::new(4, 4, 3, c, 1, big_n).unwrap();
            let strata = build_e1_strata_bw(&d, &[3], &[4], 2).unwrap();
            for check in bad_orbit_pairs(&strata).unwrap() {
                assert!(!check.bad, "{check:?}");
                pairs += 1;
            }
        }
    }
    assert!(pairs > 20);
}
