//! Target points reachable along source sequences escaping to infinity.
//!
//! For a generically finite dominant map `F` from an affine variety `V`, the
//! set of points `z` with a sequence `x_k in V`, `|x_k| -> infinity`,
//! `F(x_k) -> z` is computed through the closure of the graph of `F` in
//! `P^s x C^k`: homogenize the source block with a fresh variable `t`,
//! saturate away the spurious components the generator-wise homogenization
//! introduces at `t = 0`, intersect with the hyperplane at infinity, remove
//! the cone vertex, and project to the target coordinates.

use super::critical::{midpoint_coordinates, surplus_locus, target_names, PairEmbedding};
use super::MidpointProblem;
use crate::ideal::{eliminate, saturate, saturate_by_element, Budget, IdealError, IdealHandle};
use crate::poly::{fresh_var_name, Polynomial, Ring};
use std::sync::Arc;

/// Ideal of the limit points of `map` along escaping sequences in the source
/// variety, expressed in a fresh ring named by `target_names`.
///
/// The empty set comes back as the unit ideal.  The construction is exact
/// for the ideal of the graph closure: saturating the generator-wise partial
/// homogenization by `t` yields precisely the homogenized ideal, and the
/// projection `P^s x C^k -> C^k` is closed, so elimination computes the true
/// image of the part at infinity once the irrelevant cone vertex has been
/// saturated away.
pub fn nonproperness_set(
    variety: &IdealHandle,
    map: &[Polynomial],
    names: &[String],
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let source = variety.ring().clone();
    let s = source.var_count();
    let k = map.len();
    assert_eq!(names.len(), k, "one target name per map coordinate");
    assert!(
        names.iter().all(|n| source.var_names().iter().all(|v| v != n)),
        "target names must not collide with source variables"
    );
    for coord in map {
        assert!(
            crate::poly::same_ring(coord.ring(), &source),
            "map coordinates must live in the source ring"
        );
    }

    let mut all_names: Vec<String> = source.var_names().to_vec();
    all_names.extend(names.iter().cloned());
    let t_name = fresh_var_name("t", &all_names);
    let ext = source.appended(names.iter().map(String::as_str).chain([t_name.as_str()]));
    let t_index = s + k;
    let t = Polynomial::variable(&ext, t_index);
    let source_map: Vec<usize> = (0..s).collect();

    // Graph of the map over the variety.
    let mut gens: Vec<Polynomial> = variety
        .generators()
        .iter()
        .map(|g| g.embed(&ext, &source_map))
        .collect();
    for (j, coord) in map.iter().enumerate() {
        gens.push(&Polynomial::variable(&ext, s + j) - &coord.embed(&ext, &source_map));
    }

    // Homogenize the source block, leaving target coordinates affine.
    let mask: Vec<bool> = (0..ext.var_count()).map(|i| i < s).collect();
    let homogenized: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.homogenize_masked(&mask, t_index))
        .collect();
    let closure = saturate_by_element(&IdealHandle::new(&ext, homogenized), &t, budget)?;

    // Slice with the hyperplane at infinity.  Since `t` now belongs to the
    // ideal, the other generators can be reduced modulo `t` up front.
    let mut at_infinity: Vec<Polynomial> = closure
        .generators()
        .iter()
        .map(|g| g.set_var_zero(t_index))
        .collect();
    at_infinity.push(t.clone());
    let sliced = IdealHandle::new(&ext, at_infinity);

    // Remove components supported on the cone vertex `x = 0`, which are
    // artifacts of reading a projective set through its affine cone.
    let irrelevant = IdealHandle::new(
        &ext,
        (0..s).map(|i| Polynomial::variable(&ext, i)).collect::<Vec<_>>(),
    );
    let cleaned = saturate(&sliced, &irrelevant, budget)?;

    // Project away the source block and the homogenizing variable.
    let drop: Vec<usize> = (0..s).chain([t_index]).collect();
    eliminate(&cleaned, &drop, budget)
}

/// Ideal, in fresh target coordinates, of the points reachable from infinity
/// along the surplus critical locus under the midpoint map.
///
/// When the surplus locus is empty the result is the unit ideal in the
/// target ring without further computation.
pub fn l_infinity(problem: &MidpointProblem, budget: &Budget) -> Result<IdealHandle, IdealError> {
    let surplus = surplus_locus(problem, budget)?;
    l_infinity_of_surplus(problem, &surplus, budget)
}

/// Same as [`l_infinity`], reusing an already-computed surplus locus.
pub fn l_infinity_of_surplus(
    problem: &MidpointProblem,
    surplus: &IdealHandle,
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let emb = PairEmbedding::new(problem);
    assert!(
        crate::poly::same_ring(surplus.ring(), emb.ring()),
        "surplus locus must live in the doubled ring of the problem"
    );
    let names = target_names(&emb);
    if surplus.has_constant_generator() {
        let zring: Arc<Ring> = Ring::new(names);
        return Ok(IdealHandle::unit(&zring));
    }
    let phi = midpoint_coordinates(&emb);
    // Re-anchor the surplus ideal on the embedding's own ring object so the
    // extended ring is built consistently.
    let anchored = IdealHandle::new(emb.ring(), surplus.generators().to_vec());
    nonproperness_set(&anchored, &phi, &names, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{groebner, MonomialOrder};
    use crate::poly::parse_polynomial;
    use crate::variety::VarietySpec;

    fn znames(k: usize) -> Vec<String> {
        (1..=k).map(|j| format!("z{j}")).collect()
    }

    #[test]
    fn identity_map_is_proper() {
        let ring = Ring::new(["x", "y"]);
        let plane = IdealHandle::zero(&ring);
        let map = vec![
            Polynomial::variable(&ring, 0),
            Polynomial::variable(&ring, 1),
        ];
        let result =
            nonproperness_set(&plane, &map, &znames(2), &Budget::unlimited()).unwrap();
        assert!(result.has_constant_generator());
    }

    #[test]
    fn shear_by_a_coordinate_fails_properness_over_a_line() {
        let ring = Ring::new(["x", "y"]);
        let plane = IdealHandle::zero(&ring);
        let x = Polynomial::variable(&ring, 0);
        let y = Polynomial::variable(&ring, 1);
        let map = vec![x.clone(), &x * &y];
        let result =
            nonproperness_set(&plane, &map, &znames(2), &Budget::unlimited()).unwrap();
        assert_eq!(result.render(), "z1");
    }

    #[test]
    fn parabola_projection_is_proper() {
        let ring = Ring::new(["x", "y"]);
        let parabola = IdealHandle::new(
            &ring,
            vec![parse_polynomial("y - x^2", &ring).unwrap()],
        );
        let map = vec![Polynomial::variable(&ring, 0)];
        let result =
            nonproperness_set(&parabola, &map, &znames(1), &Budget::unlimited()).unwrap();
        assert!(result.has_constant_generator());
    }

    fn quadric_problem_with_l() -> MidpointProblem {
        let ring = Ring::new(["x1", "x2", "x3"]);
        let x = VarietySpec::new(
            "X",
            &ring,
            2,
            vec![parse_polynomial("x3 - x1^2 - x2^2", &ring).unwrap()],
        )
        .unwrap();
        let y = VarietySpec::new(
            "Y",
            &ring,
            2,
            vec![parse_polynomial("x3 - x1^2 - 2*x2^2 + 1", &ring).unwrap()],
        )
        .unwrap();
        let l = crate::variety::LinearForm::new(vec![
            crate::poly::rat_int(0),
            crate::poly::rat_int(0),
            crate::poly::rat_int(1),
        ])
        .unwrap();
        MidpointProblem::new(x, y, 2).unwrap().with_l(l)
    }

    #[test]
    fn linear_pair_reaches_nothing_from_infinity() {
        let ring = Ring::new(["x1", "x2", "x3"]);
        let x = VarietySpec::new("X", &ring, 2, vec![parse_polynomial("x3", &ring).unwrap()])
            .unwrap();
        let y = VarietySpec::new("Y", &ring, 2, vec![parse_polynomial("x1", &ring).unwrap()])
            .unwrap();
        let l = crate::variety::LinearForm::new(vec![
            crate::poly::rat_int(0),
            crate::poly::rat_int(1),
            crate::poly::rat_int(0),
        ])
        .unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap().with_l(l);
        let result = l_infinity(&problem, &Budget::unlimited()).unwrap();
        assert!(result.has_constant_generator());
        assert_eq!(result.ring().var_names(), &["z1", "z2", "z3"]);
    }

    #[test]
    fn quadric_pair_reaches_nothing_from_infinity() {
        let problem = quadric_problem_with_l();
        let result = l_infinity(&problem, &Budget::unlimited()).unwrap();
        let gb = groebner(&result, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        assert!(gb.is_unit(), "expected empty locus, got {}", result.render());
    }
}
