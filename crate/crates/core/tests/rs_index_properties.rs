use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use twistlab::rs_index::{
    bw_exceptional_model, bw_principal_model, catenate, complex_structure,
    exceptional_index_formula, flow_path, iterate, mean_index, principal_index_formula,
    rotation_path, rs_index_with, IndexError, SymplecticMatrix, SymplecticPath, Tolerances,
};
use twistlab::HalfInteger;

fn index(path: &SymplecticPath) -> Result<HalfInteger, IndexError> {
    Ok(rs_index_with(path, &Tolerances::default())?.index)
}

fn symmetric(n: usize, entries: &[f64]) -> DMatrix<f64> {
    let d = 2 * n;
    let mut s = DMatrix::zeros(d, d);
    let mut it = entries.iter();
    for i in 0..d {
        for j in i..d {
            let v = *it.next().unwrap();
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    let d = 2 * n;
    prop::collection::vec(-3.0..3.0f64, d * (d + 1) / 2)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, max_global_rejects: 4096, ..ProptestConfig::default() })]

    #[test]
    fn catenation_is_additive(
        n in 1usize..=2,
        seed in any::<u64>(),
        t1 in 0.5..2.0f64,
        t2 in 0.5..2.0f64,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = 2 * n;
        let mut draw = || -> Vec<f64> { (0..d * (d + 1) / 2).map(|_| rng.random_range(-1.5..1.5)).collect() };
        let j0 = complex_structure(n);
        let a = &j0 * symmetric(n, &draw());
        let b = &j0 * symmetric(n, &draw());
        let p = flow_path(&a, &SymplecticMatrix::identity(n), t1, 96).unwrap();
        let mid = SymplecticMatrix::new(p.end().clone()).unwrap();
        let q = flow_path(&b, &mid, t2, 96).unwrap();
        let (ip, iq) = match (index(&p), index(&q)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return Err(TestCaseError::reject("degenerate or clustered crossing")),
        };
        let joined = catenate(&p, &q).unwrap();
        prop_assert_eq!(index(&joined).unwrap(), ip + iq);
    }

    #[test]
    fn rotation_iterates_are_linear(w in -4i64..=4, m in 1usize..=16) {
        let path = rotation_path(w as f64, 2.0 * PI, 64).unwrap();
        let it = iterate(&path, m).unwrap();
        prop_assert_eq!(index(&it).unwrap(), HalfInteger::from_integer(2 * w * m as i64));
    }

    #[test]
    fn refinement_does_not_change_the_index(
        n in 3u64..=5, c in 0i64..=6, k in 1u64..=4, big_n in 1u64..=5,
    ) {
        let coarse = bw_principal_model(n, c, k, big_n, 64).unwrap();
        let fine = bw_principal_model(n, c, k, big_n, 128).unwrap();
        prop_assert_eq!(index(&coarse).unwrap(), index(&fine).unwrap());
    }

    #[test]
    fn exceptional_indices_are_odd(c in 2i64..=5, big_n in 2u64..=4, m in 1u64..=8) {
        prop_assume!(m % big_n != 0);
        let mu = index(&bw_exceptional_model(4, c, big_n, m, 128).unwrap()).unwrap();
        let v = mu.to_i64().unwrap();
        prop_assert_eq!(v.rem_euclid(2), 1);
        prop_assert_eq!(v, exceptional_index_formula(c, big_n as i64, m as i64));
    }

    #[test]
    fn mean_index_bound_on_principal_loops(n in 3u64..=4, c in 0i64..=5, k in 1u64..=3, big_n in 1u64..=3) {
        let path = bw_principal_model(n, c, k, big_n, 64).unwrap();
        let est = mean_index(&path, 8).unwrap();
        let expected = principal_index_formula(c, k as i64, big_n as i64);
        prop_assert_eq!(est, twistlab::Rational::from_integer(expected));
    }
}

#[test]
fn symmetric_entries_strategy_is_well_formed() {
    let s = symmetric(2, &(0..10).map(f64::from).collect::<Vec<_>>());
    assert_eq!(s, s.transpose());
    let _ = entries(1);
}
