mod common;

use std::sync::Arc;

use hyperlab_core::cohomology::{coboundary, h2, is_cocycle, CochainTable, FiniteModule};
use hyperlab_core::hyperspace::{hausdorff_distance, SampleSet};
use hyperlab_core::integer_rep::{examples, glz_conjugate};
use hyperlab_core::linalg::IntMatrix;
use hyperlab_core::{build_semidirect, Element, FiniteGroup, SamplableGroup, TorusPoint};
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn torus_set(points: &[(i64, i64)], n: i64) -> Vec<Element> {
    points.iter().map(|&(a, b)| Element::Torus(TorusPoint::grid(&[a, b], n))).collect()
}

fn pow_mod(u: i64, e: usize, k: i64) -> i64 {
    (0..e).fold(1, |acc, _| (acc * u).rem_euclid(k))
}

/// `H²(C_n; M) ≅ M^F / N·M` with `N = 1 + g + … + gⁿ⁻¹`; returns `(d, |·[d]|)`.
fn cyclic_formula(module: &FiniteModule, n: usize) -> Vec<(i64, u64)> {
    let elems = module.elements();
    let fixed: Vec<&Vec<i64>> = elems.iter().filter(|x| module.act(1, x) == **x).collect();
    let norm = |x: &[i64]| (0..n).fold(module.zero(), |acc, i| module.add(&acc, &module.act(i, x)));
    let mut image: Vec<Vec<i64>> = elems.iter().map(|x| norm(x)).collect();
    image.sort();
    image.dedup();
    common::divisors(module.exponent())
        .into_iter()
        .map(|d| {
            let count = fixed.iter().filter(|x| image.binary_search(&module.scale(d, x)).is_ok()).count() as u64;
            (d, count / image.len() as u64)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_is_a_metric_on_finite_sets(
        a in prop::collection::vec((0i64..12, 0i64..12), 1..12),
        b in prop::collection::vec((0i64..12, 0i64..12), 1..12),
        c in prop::collection::vec((0i64..12, 0i64..12), 1..12),
    ) {
        let (a, b, c) = (torus_set(&a, 12), torus_set(&b, 12), torus_set(&c, 12));
        let d = |x: &[Element], y: &[Element]| hausdorff_distance(&SampleSet::exact(x.to_vec()), &SampleSet::exact(y.to_vec())).estimate;
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert_eq!(d(&a, &b).to_bits(), common::brute_hausdorff(&a, &b).to_bits());
    }

    #[test]
    fn cyclic_h2_matches_the_norm_formula(n in 2usize..=12, k in 2i64..=27, u in 1i64..27) {
        prop_assume!(u < k && u.gcd(&k) == 1 && pow_mod(u, n, k) == 1);
        let module = FiniteModule::from_generators(FiniteGroup::cyclic(n), vec![k], &[(1, IntMatrix::from_rows(&[[u]]))]).unwrap();
        let invariants = h2(&module).unwrap();
        for (d, count) in cyclic_formula(&module, n) {
            prop_assert_eq!(common::torsion_count(&invariants, d), count, "d = {}", d);
        }
    }

    #[test]
    fn coboundaries_are_cocycles(n in 2usize..=6, k in 2i64..=9, seed in 0u64..1000) {
        let module = FiniteModule::from_generators(FiniteGroup::cyclic(n), vec![k, k], &[(1, IntMatrix::from_rows(&[[0, 1], [1, 0]]))]);
        prop_assume!(module.is_ok());
        let module = module.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Vec<i64>> = (0..n).map(|g| if g == 0 { vec![0, 0] } else { vec![rand::Rng::random_range(&mut rng, 0..k), rand::Rng::random_range(&mut rng, 0..k)] }).collect();
        let a = CochainTable::new(&module, 1, values).unwrap();
        prop_assert!(is_cocycle(&module, &coboundary(&module, &a).unwrap()));
    }

    #[test]
    fn semidirect_product_is_associative(seed in 0u64..500) {
        let g = SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::beta()).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
        let left = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let inv = g.invert(&x).unwrap();
        prop_assert_eq!(g.multiply(&x, &inv).unwrap(), g.identity());
    }

    #[test]
    fn conjugated_reps_are_recognized(a in -2i64..=2, b in -2i64..=2) {
        // P = [[1, a], [b, 1 + ab]] has determinant 1
        let p = IntMatrix::from_rows(&[[1, a], [b, 1 + a * b]]);
        let p_inv = IntMatrix::from_rows(&[[1 + a * b, -a], [-b, 1]]);
        let rep = examples::beta().conjugated_by(&p, &p_inv).unwrap();
        prop_assert!(glz_conjugate(&rep, &examples::beta(), 6).unwrap().is_found());
        prop_assert!(!glz_conjugate(&rep, &examples::alpha(), 6).unwrap().is_found());
    }
}
