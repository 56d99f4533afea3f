//! Property tests for the zero-dimensional solver: degree conservation for
//! univariate inputs, point-count agreement on systems with known distinct
//! roots, and stability of the count under tiny exact perturbations.

use proptest::prelude::*;
use symdef_core::ideal::{parse_ideal, Budget, IdealHandle};
use symdef_core::poly::{rat, rat_int, Monomial, Polynomial, Ring};
use symdef_core::solve::{count_with_multiplicity, solve};
use std::collections::HashSet;


proptest! {
    #![proptest_config(ProptestConfig { cases: 40, .. ProptestConfig::default() })]

    /// The multiplicity-weighted root count of a degree-k univariate
    /// polynomial is exactly k.
    #[test]
    fn univariate_count_equals_degree(deg in 1u32..=6, seed_poly in prop::collection::vec(-6i64..=6, 6)) {
        let ring = Ring::new(["x"]);
        let mut terms = vec![(Monomial::from_exps(vec![deg]), rat_int(1))];
        for (i, &c) in seed_poly.iter().take(deg as usize).enumerate() {
            terms.push((Monomial::from_exps(vec![i as u32]), rat_int(c)));
        }
        let p = Polynomial::from_terms(&ring, terms);
        let ideal = IdealHandle::new(&ring, vec![p]);
        let count = count_with_multiplicity(&ideal, &Budget::unlimited()).unwrap();
        prop_assert_eq!(count, deg as u64);
    }

    /// Systems built from distinct linear factors have as many points as
    /// the factor count, all simple, and an exact 1e-12 perturbation of the
    /// line does not change the count.
    #[test]
    fn distinct_roots_count_and_survive_perturbation(
        roots in prop::collection::hash_set(-5i64..=5, 2..=4),
        slope in -3i64..=3,
        intercept in -3i64..=3,
    ) {
        let roots: HashSet<i64> = roots;
        let ring = Ring::new(["x", "y"]);
        // f(x) = prod (x - r); g = y - slope*x - intercept.
        let x = Polynomial::variable(&ring, 0);
        let y = Polynomial::variable(&ring, 1);
        let mut f = Polynomial::one(&ring);
        for &r in &roots {
            f = &f * &(&x - &Polynomial::constant(&ring, rat_int(r)));
        }
        let g = &(&y - &x.scale(&rat_int(slope))) - &Polynomial::constant(&ring, rat_int(intercept));

        let ideal = IdealHandle::new(&ring, vec![f.clone(), g.clone()]);
        let set = solve(&ideal, &Budget::unlimited()).unwrap();
        prop_assert_eq!(set.total_multiplicity, roots.len() as u64);
        prop_assert_eq!(set.points.len(), roots.len());
        prop_assert!(set.points.iter().all(|p| p.multiplicity == 1));

        // Shift the line by 10^-12: roots stay distinct, count unchanged.
        let g_shift = &g + &Polynomial::constant(&ring, rat(1, 1_000_000_000_000));
        let perturbed = IdealHandle::new(&ring, vec![f, g_shift]);
        let count = count_with_multiplicity(&perturbed, &Budget::unlimited()).unwrap();
        prop_assert_eq!(count, roots.len() as u64);
    }
}

#[test]
fn residual_tolerance_is_respected_on_benign_input() {
    let ring = Ring::new(["x", "y"]);
    let ideal = parse_ideal("x^2 + y^2 - 4\nx - y - 1", &ring).unwrap();
    let set = solve(&ideal, &Budget::unlimited()).unwrap();
    assert_eq!(set.total_multiplicity, 2);
    assert!(set.warnings.is_empty(), "unexpected warnings: {:?}", set.warnings);
    for p in &set.points {
        for g in ideal.generators() {
            assert!(g.normalized_residual(&p.coordinates) <= 1e-8);
        }
    }
}
