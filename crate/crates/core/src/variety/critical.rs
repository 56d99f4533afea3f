//! Critical loci of the midpoint map on a product of two varieties.
//!
//! Everything here works in the product ring `C[x, y]` obtained by doubling
//! the ambient variables: the first block keeps the original names, the
//! second block gets a `__y` suffix.  The midpoint map sends `(x, y)` to
//! `(x + y)/2`; its critical points are found through maximal minors of a
//! stacked Jacobian, its critical values through elimination.

use super::MidpointProblem;
use crate::ideal::{eliminate, saturate, Budget, IdealError, IdealHandle};
use crate::poly::{fresh_var_name, rat, PolyMatrix, Polynomial, Ring};
use std::sync::Arc;

/// The product ring `C[x_1..x_m, y_1..y_m]` for a pair of varieties in `C^m`,
/// with embeddings of polynomials from the single-copy ring into each block.
#[derive(Debug, Clone)]
pub struct PairEmbedding {
    source: Arc<Ring>,
    ring: Arc<Ring>,
    m: usize,
}

impl PairEmbedding {
    /// Doubles the ambient ring of the problem.
    pub fn new(problem: &MidpointProblem) -> PairEmbedding {
        let source = problem.ring().clone();
        let m = source.var_count();
        let y_names: Vec<String> = source
            .var_names()
            .iter()
            .map(|n| format!("{n}__y"))
            .collect();
        let ring = source.appended(y_names.iter().map(String::as_str));
        PairEmbedding { source, ring, m }
    }

    /// The doubled ring.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Number of ambient variables `m` in one factor.
    pub fn block_size(&self) -> usize {
        self.m
    }

    /// Embeds a polynomial in the single-copy ring into the `x` block.
    pub fn embed_x(&self, p: &Polynomial) -> Polynomial {
        assert!(crate::poly::same_ring(p.ring(), &self.source));
        let map: Vec<usize> = (0..self.m).collect();
        p.embed(&self.ring, &map)
    }

    /// Embeds a polynomial in the single-copy ring into the `y` block.
    pub fn embed_y(&self, p: &Polynomial) -> Polynomial {
        assert!(crate::poly::same_ring(p.ring(), &self.source));
        let map: Vec<usize> = (self.m..2 * self.m).collect();
        p.embed(&self.ring, &map)
    }

    /// Indices of the `x` block.
    pub fn x_vars(&self) -> Vec<usize> {
        (0..self.m).collect()
    }

    /// Indices of the `y` block.
    pub fn y_vars(&self) -> Vec<usize> {
        (self.m..2 * self.m).collect()
    }
}

/// The coordinate functions `(x_j + y_j)/2` of the midpoint map, in the
/// doubled ring.
pub fn midpoint_coordinates(embedding: &PairEmbedding) -> Vec<Polynomial> {
    let ring = embedding.ring();
    let m = embedding.block_size();
    (0..m)
        .map(|j| {
            (&Polynomial::variable(ring, j) + &Polynomial::variable(ring, m + j)).scale(&rat(1, 2))
        })
        .collect()
}

/// Fresh target coordinate names `z1, z2, ...` guaranteed not to collide
/// with the doubled ring's variables.
pub fn target_names(embedding: &PairEmbedding) -> Vec<String> {
    let mut taken: Vec<String> = embedding.ring().var_names().to_vec();
    let mut out = Vec::with_capacity(embedding.block_size());
    for j in 1..=embedding.block_size() {
        let name = fresh_var_name(&format!("z{j}"), &taken);
        taken.push(name.clone());
        out.push(name);
    }
    out
}

/// Rows of the Jacobian of the midpoint map restricted to the product:
/// the `x`-equations' gradients, the `y`-equations' gradients, and the
/// constant rows `[I/2 | I/2]`, optionally extended by a final row with the
/// slicing form's gradient `[dL | 0]`.
fn stacked_jacobian(problem: &MidpointProblem, with_l: bool) -> (PairEmbedding, PolyMatrix) {
    let emb = PairEmbedding::new(problem);
    let ring = emb.ring().clone();
    let m = emb.block_size();
    let cols = 2 * m;
    let zero = Polynomial::zero(&ring);

    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    for eq in problem.x().equations() {
        let e = emb.embed_x(eq);
        rows.push((0..cols).map(|v| e.partial_derivative(v)).collect());
    }
    for eq in problem.y().equations() {
        let e = emb.embed_y(eq);
        rows.push((0..cols).map(|v| e.partial_derivative(v)).collect());
    }
    let half = Polynomial::constant(&ring, rat(1, 2));
    for j in 0..m {
        let mut row = vec![zero.clone(); cols];
        row[j] = half.clone();
        row[m + j] = half.clone();
        rows.push(row);
    }
    if with_l {
        let l = problem
            .l()
            .expect("sliced critical locus requires a chosen linear form");
        let mut row = vec![zero.clone(); cols];
        for (j, c) in l.coefficients().iter().enumerate() {
            row[j] = Polynomial::constant(&ring, c.clone());
        }
        rows.push(row);
    }
    (emb, PolyMatrix::from_rows(&ring, rows))
}

/// Shared construction for the two critical-locus ideals: the defining
/// equations of both factors plus all maximal minors of the stacked Jacobian.
fn critical_ideal(problem: &MidpointProblem, with_l: bool) -> IdealHandle {
    let (emb, matrix) = stacked_jacobian(problem, with_l);
    let mut gens: Vec<Polynomial> = problem
        .x()
        .equations()
        .iter()
        .map(|eq| emb.embed_x(eq))
        .collect();
    gens.extend(problem.y().equations().iter().map(|eq| emb.embed_y(eq)));
    gens.extend(
        matrix
            .maximal_minors()
            .into_iter()
            .map(|p| p.integer_normalized()),
    );
    IdealHandle::new(emb.ring(), gens)
}

/// Ideal of the critical points of the midpoint map on `X x Y`.
///
/// Generators: `f(x)`, `g(y)`, and the maximal minors of the stacked matrix
/// `[df(x) 0; 0 dg(y); I/2 I/2]`, which vanish exactly where the differential
/// restricted to the product's tangent space drops rank.
pub fn sing_phi(problem: &MidpointProblem) -> IdealHandle {
    critical_ideal(problem, false)
}

/// Ideal of the critical points of the sliced map `(midpoint, L)` on `X x Y`.
///
/// Same construction with the extra row `[dL | 0]`; the matrix becomes
/// square, so the minor condition is a single determinant.
pub fn sing_phi_l(problem: &MidpointProblem) -> IdealHandle {
    critical_ideal(problem, true)
}

/// Ideal of the surplus critical locus: the closure of the sliced critical
/// points that are not critical for the midpoint map itself, computed by
/// saturation.
pub fn surplus_locus(problem: &MidpointProblem, budget: &Budget) -> Result<IdealHandle, IdealError> {
    let sliced = sing_phi_l(problem);
    let unsliced = sing_phi(problem);
    saturate(&sliced, &unsliced, budget)
}

/// Ideal of the closure of the critical values of the midpoint map, in fresh
/// target coordinates `z`.
///
/// Adjoins the graph equations `z_j - (x_j + y_j)/2` to the critical-point
/// ideal and eliminates both source blocks.
pub fn k0_closure(problem: &MidpointProblem, budget: &Budget) -> Result<IdealHandle, IdealError> {
    let emb = PairEmbedding::new(problem);
    let m = emb.block_size();
    let znames = target_names(&emb);
    let ext = emb.ring().appended(znames.iter().map(String::as_str));
    let ext_map: Vec<usize> = (0..2 * m).collect();

    let critical = sing_phi(problem);
    let mut gens: Vec<Polynomial> = critical
        .generators()
        .iter()
        .map(|g| g.embed(&ext, &ext_map))
        .collect();
    let phi = midpoint_coordinates(&emb);
    for (j, coord) in phi.iter().enumerate() {
        gens.push(&Polynomial::variable(&ext, 2 * m + j) - &coord.embed(&ext, &ext_map));
    }

    let graph = IdealHandle::new(&ext, gens);
    let drop: Vec<usize> = (0..2 * m).collect();
    eliminate(&graph, &drop, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{degree_of_variety, dimension, groebner, MonomialOrder};
    use crate::poly::parse_polynomial;
    use crate::variety::VarietySpec;
    use num_complex::Complex64;

    fn quadric_problem(g_text: &str) -> MidpointProblem {
        let ring = Ring::new(["x1", "x2", "x3"]);
        let x = VarietySpec::new(
            "X",
            &ring,
            2,
            vec![parse_polynomial("x3 - x1^2 - x2^2", &ring).unwrap()],
        )
        .unwrap();
        let y = VarietySpec::new("Y", &ring, 2, vec![parse_polynomial(g_text, &ring).unwrap()])
            .unwrap();
        MidpointProblem::new(x, y, 11).unwrap()
    }

    fn pair_a() -> MidpointProblem {
        let l = crate::variety::LinearForm::new(vec![
            crate::poly::rat_int(0),
            crate::poly::rat_int(0),
            crate::poly::rat_int(1),
        ])
        .unwrap();
        quadric_problem("x3 - x1^2 - 2*x2^2 + 1").with_l(l)
    }

    fn linear_pair() -> MidpointProblem {
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
        MidpointProblem::new(x, y, 3).unwrap().with_l(l)
    }

    #[test]
    fn product_ring_doubles_names_with_a_suffix() {
        let problem = pair_a();
        let emb = PairEmbedding::new(&problem);
        assert_eq!(
            emb.ring().var_names(),
            &["x1", "x2", "x3", "x1__y", "x2__y", "x3__y"]
        );
        let f = &problem.x().equations()[0];
        assert_eq!(emb.embed_y(f).to_string(), "-x1__y^2 - x2__y^2 + x3__y");
    }

    #[test]
    fn target_names_avoid_collisions() {
        let ring = Ring::new(["z1", "x2", "x3"]);
        let x = VarietySpec::new(
            "X",
            &ring,
            2,
            vec![parse_polynomial("x3 - z1^2 - x2^2", &ring).unwrap()],
        )
        .unwrap();
        let y = VarietySpec::new(
            "Y",
            &ring,
            2,
            vec![parse_polynomial("x3 - z1^2 - 2*x2^2 + 1", &ring).unwrap()],
        )
        .unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap();
        let emb = PairEmbedding::new(&problem);
        let names = target_names(&emb);
        assert_eq!(names[0], "z1_0");
        assert_eq!(names[1], "z2");
    }

    #[test]
    fn critical_ideal_keeps_the_defining_equations_as_generators() {
        let problem = pair_a();
        let ideal = sing_phi(&problem);
        let emb = PairEmbedding::new(&problem);
        let f = emb.embed_x(&problem.x().equations()[0]);
        let g = emb.embed_y(&problem.y().equations()[0]);
        assert!(ideal.generators().contains(&f));
        assert!(ideal.generators().contains(&g));
    }

    #[test]
    fn tangency_minors_vanish_where_tangent_planes_coincide() {
        let problem = pair_a();
        let ideal = sing_phi(&problem);
        // Tangent planes of the two paraboloids at x = (0,0,0), y = (0,0,1)
        // are both horizontal, so every minor vanishes there even though the
        // second point is not on Y.
        let point = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        for minor in &ideal.generators()[2..] {
            assert!(minor.normalized_residual(&point) < 1e-12);
        }
        // The honest critical point above the same tangent direction.
        let on_variety = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ];
        for gen in ideal.generators() {
            assert!(gen.normalized_residual(&on_variety) < 1e-12);
        }
    }

    #[test]
    fn linear_pair_has_no_critical_points() {
        let problem = linear_pair();
        let budget = Budget::unlimited();
        let unsliced = groebner(&sing_phi(&problem), MonomialOrder::GrevLex, &budget).unwrap();
        assert!(unsliced.is_unit());
        let sliced = groebner(&sing_phi_l(&problem), MonomialOrder::GrevLex, &budget).unwrap();
        assert!(sliced.is_unit());
        let surplus = surplus_locus(&problem, &budget).unwrap();
        assert!(groebner(&surplus, MonomialOrder::GrevLex, &budget)
            .unwrap()
            .is_unit());
        let k0 = k0_closure(&problem, &budget).unwrap();
        assert!(groebner(&k0, MonomialOrder::GrevLex, &budget)
            .unwrap()
            .is_unit());
    }

    #[test]
    fn sliced_critical_locus_contains_the_unsliced_one() {
        let problem = pair_a();
        let budget = Budget::unlimited();
        let unsliced = groebner(&sing_phi(&problem), MonomialOrder::GrevLex, &budget).unwrap();
        for gen in sing_phi_l(&problem).generators() {
            assert!(
                unsliced.normal_form(gen).is_zero(),
                "sliced generator `{gen}` is not in the unsliced critical ideal"
            );
        }
    }

    #[test]
    fn quadric_surplus_is_a_threefold_of_degree_eight() {
        let problem = pair_a();
        let budget = Budget::unlimited();
        let surplus = surplus_locus(&problem, &budget).unwrap();
        assert!(!groebner(&surplus, MonomialOrder::GrevLex, &budget)
            .unwrap()
            .is_unit());
        assert_eq!(dimension(&surplus, &budget).unwrap(), 3);
        assert_eq!(degree_of_variety(&surplus, &budget, 5).unwrap(), 8);
        // The chord-direction minor survives the saturation.
        let gb = groebner(&surplus, MonomialOrder::GrevLex, &budget).unwrap();
        let chord = parse_polynomial("2*x1*x2__y - x2*x1__y", surplus.ring()).unwrap();
        assert!(gb.normal_form(&chord).is_zero());
    }

    #[test]
    fn quadric_critical_values_form_the_expected_paraboloid() {
        let problem = pair_a();
        let k0 = k0_closure(&problem, &Budget::unlimited()).unwrap();
        assert_eq!(k0.ring().var_names(), &["z1", "z2", "z3"]);
        assert_eq!(k0.generators().len(), 1);
        let expected = parse_polynomial("z3 - z1^2 - 4/3*z2^2 + 1/2", k0.ring())
            .unwrap()
            .integer_normalized();
        assert_eq!(k0.generators()[0].integer_normalized(), expected);
    }

    #[test]
    fn second_quadric_pair_critical_values() {
        let problem = quadric_problem("x3 - 2*x1^2 - 3*x2^2 + 1");
        let k0 = k0_closure(&problem, &Budget::unlimited()).unwrap();
        assert_eq!(k0.generators().len(), 1);
        let expected = parse_polynomial("z3 - 4/3*z1^2 - 3/2*z2^2 + 1/2", k0.ring())
            .unwrap()
            .integer_normalized();
        assert_eq!(k0.generators()[0].integer_normalized(), expected);
    }
}
