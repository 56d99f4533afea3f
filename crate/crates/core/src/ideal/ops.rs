//! Ideal-level operations built on elimination: variable elimination,
//! intersection, and saturation.

use super::{groebner, Budget, IdealError, IdealHandle, MonomialOrder};
use crate::poly::{fresh_var_name, Polynomial, Ring};
use std::sync::Arc;

/// Sum of ideals in the same ring (concatenated generators).
pub fn ideal_sum(a: &IdealHandle, b: &IdealHandle) -> IdealHandle {
    let mut gens = a.generators().to_vec();
    gens.extend_from_slice(b.generators());
    IdealHandle::new(a.ring(), gens)
}

/// Eliminates the variables with the given indices.
///
/// Computes a Groebner basis under a block order that ranks the dropped
/// variables highest, keeps the basis elements free of them, and returns the
/// result in the smaller ring spanned by the surviving variables.
pub fn eliminate(
    ideal: &IdealHandle,
    drop: &[usize],
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let ring = ideal.ring();
    let dropped = |i: usize| drop.contains(&i);
    let kept: Vec<usize> = (0..ring.var_count()).filter(|i| !dropped(*i)).collect();
    assert!(!kept.is_empty(), "cannot eliminate every variable");

    let order = MonomialOrder::eliminating(ring, drop);
    let gb = groebner(ideal, order, budget)?;

    let small = Ring::new(
        kept.iter()
            .map(|&i| ring.var_name(i))
            .collect::<Vec<_>>(),
    );
    // Map each kept old index to its position in the smaller ring.
    let var_map: Vec<usize> = kept.clone();
    let survivors: Vec<Polynomial> = gb
        .elements()
        .iter()
        .filter(|g| (0..ring.var_count()).all(|i| !dropped(i) || g.degree_in_var(i) == 0))
        .map(|g| g.restrict(&small, &var_map))
        .collect();
    Ok(IdealHandle::new(&small, survivors))
}

/// Intersection of two ideals in the same ring.
///
/// Uses the one-tag construction: with a fresh variable `u`, the ideal
/// generated by `u*a_i` and `(1-u)*b_j` meets the original ring exactly in
/// the intersection.
pub fn intersect(
    a: &IdealHandle,
    b: &IdealHandle,
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let ring = a.ring();
    assert!(
        crate::poly::same_ring(ring, b.ring()),
        "intersection across rings"
    );
    if a.is_zero_ideal() || b.is_zero_ideal() {
        return Ok(IdealHandle::zero(ring));
    }
    let u_name = fresh_var_name("u", ring.var_names());
    let big = ring.appended([u_name.as_str()]);
    let u_idx = big.var_count() - 1;
    let u = Polynomial::variable(&big, u_idx);
    let one_minus_u = &Polynomial::one(&big) - &u;
    let identity: Vec<usize> = (0..ring.var_count()).collect();

    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&g.embed(&big, &identity) * &u);
    }
    for g in b.generators() {
        gens.push(&g.embed(&big, &identity) * &one_minus_u);
    }
    let tagged = IdealHandle::new(&big, gens);
    let eliminated = eliminate(&tagged, &[u_idx], budget)?;
    // The survivor ring has the same variable names in the same order;
    // re-anchor on the caller's ring object.
    Ok(reanchor(&eliminated, ring))
}

/// Saturation `I : J^infinity`: the ideal of functions vanishing on the
/// closure of `V(I) \ V(J)`.
///
/// Computed as the intersection over the generators `j` of `J` of the
/// single-element saturations `I : j^infinity`, each obtained by eliminating
/// a fresh inverse variable `w` from `I + (1 - w*j)`. The intersection
/// identity is exact: a polynomial is in `I : J^infinity` precisely when it
/// is in `I : j^infinity` for every generator `j` (with a common power,
/// which exists by taking the maximum).
pub fn saturate(
    ideal: &IdealHandle,
    by: &IdealHandle,
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let ring = ideal.ring();
    assert!(
        crate::poly::same_ring(ring, by.ring()),
        "saturation across rings"
    );
    if by.is_zero_ideal() {
        // Everything times zero lies in the ideal, so the quotient is the
        // whole ring.
        return Ok(IdealHandle::unit(ring));
    }
    let mut acc: Option<IdealHandle> = None;
    for j in by.generators().iter().filter(|j| !j.is_zero()) {
        let part = saturate_by_element(ideal, j, budget)?;
        acc = Some(match acc {
            None => part,
            Some(prev) => intersect(&prev, &part, budget)?,
        });
    }
    Ok(acc.expect("nonzero generator exists"))
}

/// `I : j^infinity` for a single polynomial via the inverse-variable trick.
pub fn saturate_by_element(
    ideal: &IdealHandle,
    j: &Polynomial,
    budget: &Budget,
) -> Result<IdealHandle, IdealError> {
    let ring = ideal.ring();
    if j.is_constant() && !j.is_zero() {
        return Ok(ideal.clone());
    }
    let w_name = fresh_var_name("w", ring.var_names());
    let big = ring.appended([w_name.as_str()]);
    let w_idx = big.var_count() - 1;
    let identity: Vec<usize> = (0..ring.var_count()).collect();

    let w = Polynomial::variable(&big, w_idx);
    let relation = &Polynomial::one(&big) - &(&w * &j.embed(&big, &identity));
    let mut gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| g.embed(&big, &identity))
        .collect();
    gens.push(relation);
    let extended = IdealHandle::new(&big, gens);
    let eliminated = eliminate(&extended, &[w_idx], budget)?;
    Ok(reanchor(&eliminated, ring))
}

/// Re-expresses an ideal in an identically-shaped ring object (same variable
/// names, same order) so callers can keep comparing against their own ring.
fn reanchor(ideal: &IdealHandle, ring: &Arc<Ring>) -> IdealHandle {
    assert_eq!(ideal.ring().var_names(), ring.var_names());
    let identity: Vec<usize> = (0..ring.var_count()).collect();
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.embed(ring, &identity))
        .collect();
    IdealHandle::new(ring, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;
    use crate::poly::parse_polynomial;

    fn ideal_of(ring: &Arc<Ring>, gens: &[&str]) -> IdealHandle {
        parse_ideal(&gens.join("\n"), ring).unwrap()
    }

    #[test]
    fn eliminate_substitutes_linear_constraints() {
        // x = 1 forced, so dropping x from (y - x^2, x - 1) leaves y = 1.
        let ring = Ring::new(["x", "y"]);
        let ideal = ideal_of(&ring, &["y - x^2", "x - 1"]);
        let out = eliminate(&ideal, &[0], &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "y - 1");
        assert_eq!(out.ring().var_names(), &["y".to_string()]);
    }

    #[test]
    fn eliminate_projects_circle_line_intersection() {
        let ring = Ring::new(["x", "y"]);
        let ideal = ideal_of(&ring, &["x^2 + y^2 - 1", "x - y"]);
        let out = eliminate(&ideal, &[0], &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "2*y^2 - 1");
    }

    #[test]
    fn saturation_strips_a_component() {
        let ring = Ring::new(["x", "y"]);
        // (xy) : x^inf = (y): removing the x = 0 plane leaves the y = 0 line.
        let ideal = ideal_of(&ring, &["x*y"]);
        let x = parse_polynomial("x", &ring).unwrap();
        let out = saturate_by_element(&ideal, &x, &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "y");
    }

    #[test]
    fn saturation_of_embedded_multiplicity_is_unit() {
        let ring = Ring::new(["x", "y"]);
        // (x^2) : x^inf = (1): the variety is contained in x = 0 entirely.
        let ideal = ideal_of(&ring, &["x^2"]);
        let x = parse_polynomial("x", &ring).unwrap();
        let out = saturate_by_element(&ideal, &x, &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "1");
    }

    #[test]
    fn saturation_keeps_the_other_factor() {
        let ring = Ring::new(["x"]);
        // (x(x-1)) : (x-1)^inf = (x).
        let ideal = ideal_of(&ring, &["x^2 - x"]);
        let by = ideal_of(&ring, &["x - 1"]);
        let out = saturate(&ideal, &by, &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "x");
    }

    #[test]
    fn intersect_lines() {
        let ring = Ring::new(["x", "y"]);
        // V(x) union V(y) is the coordinate cross: ideal (xy).
        let a = ideal_of(&ring, &["x"]);
        let b = ideal_of(&ring, &["y"]);
        let out = intersect(&a, &b, &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "x*y");
    }

    #[test]
    fn intersect_with_zero_ideal_is_zero() {
        let ring = Ring::new(["x", "y"]);
        let a = ideal_of(&ring, &["x"]);
        let out = intersect(&a, &IdealHandle::zero(&ring), &Budget::unlimited()).unwrap();
        assert!(out.is_zero_ideal());
    }

    #[test]
    fn saturate_by_multi_generator_ideal() {
        let ring = Ring::new(["x", "y", "z"]);
        // (x*z, y*z) : (x, y)^inf = (z): away from the z-axis the variety
        // is the plane z = 0.
        let ideal = ideal_of(&ring, &["x*z", "y*z"]);
        let by = ideal_of(&ring, &["x", "y"]);
        let out = saturate(&ideal, &by, &Budget::unlimited()).unwrap();
        assert_eq!(out.render(), "z");
    }

    #[test]
    fn sum_concatenates() {
        let ring = Ring::new(["x", "y"]);
        let a = ideal_of(&ring, &["x"]);
        let b = ideal_of(&ring, &["y"]);
        let s = ideal_sum(&a, &b);
        assert_eq!(s.render(), "x\ny");
    }
}
