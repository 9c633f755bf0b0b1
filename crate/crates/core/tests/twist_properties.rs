use num_bigint::BigInt;
use proptest::prelude::*;
use twistlab::catalog::{cp_hypersurface, fermat_nonvanishing_scan, fermat_pair};
use twistlab::mec::BWData;
use twistlab::twist::{decide_triviality, subcritical_crosscheck, theorem_equation, Status};

fn lattice() -> Vec<BWData> {
    let mut out = Vec::new();
    for n in 4..=5 {
        for c in -1..=6 {
            for k in 1..=4 {
                for big_n in 1..=6 {
                    for (chi_m, chi_h) in [
                        (0, 0),
                        (4, 3),
                        (4, 4),
                        (5, 0),
                        (6, 2),
                        (-6, 9),
                        (20, 15),
                        (0, 7),
                    ] {
                        out.push(BWData::new(n, chi_m, chi_h, c, k, big_n).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn verdicts_agree_with_the_comparison_equation() {
    for d in lattice() {
        let v = decide_triviality(&d).unwrap();
        let e1 = theorem_equation(&d, 1).unwrap();
        let e2 = theorem_equation(&d, 1 + d.k).unwrap();
        assert_eq!(e1.gcd, e2.gcd);
        let both_hold = e1.holds() && e2.holds();
        assert_eq!(
            v.status.is_nontrivial(),
            d.c < d.k as i64 || !both_hold,
            "{d:?}"
        );
    }
}

#[test]
fn consistency_passes_to_multiples() {
    for d in lattice() {
        if decide_triviality(&d).unwrap().status.is_nontrivial() {
            continue;
        }
        for m in [2, 3] {
            let mut e = d.clone();
            e.big_n *= m;
            assert!(
                !decide_triviality(&e).unwrap().status.is_nontrivial(),
                "{e:?}"
            );
        }
    }
}

#[test]
fn crosscheck_agrees_with_verdicts() {
    for d in lattice() {
        let Ok(x) = subcritical_crosscheck(&d) else {
            assert_eq!(d.principal_sum(), BigInt::from(0));
            continue;
        };
        let v = decide_triviality(&d).unwrap();
        if !v.status.is_nontrivial() {
            assert!(x.equal, "{d:?}");
        }
        if v.status == Status::NontrivialChiMismatch && d.big_n % d.k == 0 {
            assert!(!x.equal, "{d:?}");
        }
    }
}

#[test]
fn projective_hypersurfaces() {
    for n in 4..=8 {
        assert!(!decide_triviality(&cp_hypersurface(n, 1).unwrap().data)
            .unwrap()
            .status
            .is_nontrivial());
        for k in 2..=6 {
            let v = decide_triviality(&cp_hypersurface(n, k).unwrap().data).unwrap();
            assert!(v.status.is_nontrivial(), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn fermat_pairs_are_all_obstructed() {
    fermat_nonvanishing_scan(12).unwrap();
    for n in 4..=12 {
        for d in 2..=n + 3 {
            let rec = fermat_pair(n, d).unwrap();
            let v = decide_triviality(&rec.data).unwrap();
            let expected = if d > n {
                Status::NontrivialIndexNegative
            } else {
                Status::NontrivialChiMismatch
            };
            assert_eq!(v.status, expected, "n = {n}, d = {d}");
        }
    }
}

proptest! {
    #[test]
    fn verdict_json_roundtrips(
        n in 4u64..=9, chi_m in -100i64..100, chi_h in -100i64..100, c in -2i64..9, k in 1u64..=6, big_n in 1u64..=9,
    ) {
        let v = decide_triviality(&BWData::new(n, chi_m, chi_h, c, k, big_n).unwrap()).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<twistlab::twist::Verdict>(&text).unwrap(), v);
    }
}
