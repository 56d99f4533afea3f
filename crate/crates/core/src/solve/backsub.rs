//! Numeric back-substitution through a lexicographic Groebner basis of a
//! zero-dimensional system.
//!
//! A zero-dimensional lex basis contains, for every variable, exactly one
//! element whose leading monomial is a pure power of it; that element
//! involves only this variable and later ones, and its pure-power
//! coefficient is exactly 1. Substituting known tail values therefore always
//! yields a monic univariate polynomial of predictable degree — the pivot —
//! whose roots extend partial solutions one variable at a time. The
//! remaining basis elements act as filters discarding inconsistent branches.

use super::aberth;
use crate::ideal::GroebnerBasis;
use crate::poly::{rational_to_f64, Polynomial};
use num_complex::Complex64;

/// A basis element in numeric form: sparse terms with float coefficients,
/// plus the smallest variable index appearing anywhere in it.
struct NumPoly {
    terms: Vec<(Vec<u32>, f64)>,
    min_var: usize,
    scale: f64,
}

impl NumPoly {
    fn from_polynomial(p: &Polynomial) -> NumPoly {
        let nvars = p.ring().var_count();
        let mut terms = Vec::new();
        let mut min_var = nvars;
        let mut scale = 0.0f64;
        for (m, c) in p.terms() {
            let coeff = rational_to_f64(c);
            scale += coeff.abs();
            if let Some(v) = m.support().next() {
                min_var = min_var.min(v);
            }
            terms.push((m.exps().to_vec(), coeff));
        }
        NumPoly { terms, min_var, scale }
    }

    /// Substitutes `tail[k]` for variable `var + 1 + k` and collects the
    /// result as dense univariate coefficients in `var`. The polynomial
    /// must not involve variables before `var`.
    fn collapse(&self, var: usize, tail: &[Complex64]) -> Vec<Complex64> {
        let deg = self
            .terms
            .iter()
            .map(|(e, _)| e[var])
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (exps, c) in &self.terms {
            debug_assert!(exps[..var].iter().all(|&e| e == 0));
            let mut v = Complex64::new(*c, 0.0);
            for (k, &t) in tail.iter().enumerate() {
                let e = exps[var + 1 + k];
                if e > 0 {
                    v *= t.powu(e);
                }
            }
            out[exps[var] as usize] += v;
        }
        out
    }

    /// Evaluates at a full assignment for variables `min_var..`.
    fn residual(&self, assignment: &[Complex64], offset: usize) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, c) in &self.terms {
            let mut v = Complex64::new(*c, 0.0);
            for (k, &t) in assignment.iter().enumerate() {
                let e = exps[offset + k];
                if e > 0 {
                    v *= t.powu(e);
                }
            }
            acc += v;
        }
        acc.norm() / (1.0 + self.scale)
    }
}

/// The back-substitution view of a zero-dimensional lex basis.
pub struct TriangularSystem {
    elements: Vec<NumPoly>,
    /// For each variable, the index of its pure-power pivot element.
    pivots: Vec<usize>,
    nvars: usize,
}

impl TriangularSystem {
    /// Builds the view; `None` when some variable lacks a pure-power
    /// leading monomial (the system is not zero-dimensional).
    pub fn build(gb: &GroebnerBasis) -> Option<TriangularSystem> {
        let nvars = gb.ring().var_count();
        let mut pivots = vec![usize::MAX; nvars];
        for (idx, lm) in gb.leading_monomials().iter().enumerate() {
            let sup: Vec<usize> = lm.support().collect();
            if sup.len() == 1 && pivots[sup[0]] == usize::MAX {
                pivots[sup[0]] = idx;
            }
        }
        if pivots.iter().any(|&p| p == usize::MAX) {
            return None;
        }
        let elements = gb.elements().iter().map(NumPoly::from_polynomial).collect();
        Some(TriangularSystem { elements, pivots, nvars })
    }

    /// Index of the basis element that is univariate in the last variable.
    pub fn eliminant_index(&self) -> usize {
        self.pivots[self.nvars - 1]
    }

    /// All full solution vectors extending `alpha` as the value of the last
    /// variable. Branches are deduplicated within `cluster_radius` per
    /// level and filtered by the non-pivot equations at `filter_tol`
    /// (scale-normalized residual).
    pub fn branches_over(
        &self,
        alpha: Complex64,
        filter_tol: f64,
        cluster_radius: f64,
    ) -> Vec<Vec<Complex64>> {
        let m = self.nvars;
        // A tail holds values for variables v+1..m in ascending order.
        let mut tails: Vec<Vec<Complex64>> = vec![vec![alpha]];
        for v in (0..m - 1).rev() {
            let mut next: Vec<Vec<Complex64>> = Vec::new();
            for tail in &tails {
                let pivot = &self.elements[self.pivots[v]];
                let coeffs = pivot.collapse(v, tail);
                let mut level_roots = aberth::roots(&coeffs);
                dedupe(&mut level_roots, cluster_radius);
                for root in level_roots {
                    let mut assignment = Vec::with_capacity(m - v);
                    assignment.push(root);
                    assignment.extend_from_slice(tail);
                    let consistent = self
                        .elements
                        .iter()
                        .enumerate()
                        .filter(|(idx, e)| *idx != self.pivots[v] && e.min_var >= v)
                        .all(|(_, e)| {
                            e.residual(&assignment[e.min_var - v..], e.min_var) <= filter_tol
                        });
                    if consistent {
                        next.push(assignment);
                    }
                }
            }
            tails = next;
        }
        tails
    }
}

/// Collapses values closer than `radius` to their first representative.
fn dedupe(roots: &mut Vec<Complex64>, radius: f64) {
    let mut kept: Vec<Complex64> = Vec::new();
    for r in roots.iter() {
        if !kept.iter().any(|k| (k - r).norm() <= radius) {
            kept.push(*r);
        }
    }
    *roots = kept;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{groebner, parse_ideal, Budget, MonomialOrder};
    use crate::poly::Ring;

    fn triangular(vars: &[&str], gens: &str) -> TriangularSystem {
        let ring = Ring::new(vars.to_vec());
        let ideal = parse_ideal(gens, &ring).unwrap();
        let gb = groebner(&ideal, MonomialOrder::Lex, &Budget::unlimited()).unwrap();
        TriangularSystem::build(&gb).expect("zero-dimensional")
    }

    #[test]
    fn branches_of_two_circles_point() {
        // x^2 + y^2 = 1, x = y: over y = 1/sqrt(2) the single branch has
        // x = y.
        let tri = triangular(&["x", "y"], "x^2 + y^2 - 1\nx - y");
        let alpha = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let branches = tri.branches_over(alpha, 1e-6, 1e-7);
        assert_eq!(branches.len(), 1);
        assert!((branches[0][0] - alpha).norm() < 1e-10);
        assert!((branches[0][1] - alpha).norm() < 1e-10);
    }

    #[test]
    fn branch_fan_out() {
        // x^2 = y over y = 4: two branches x = ±2.
        let tri = triangular(&["x", "y"], "x^2 - y\ny - 4");
        let branches = tri.branches_over(Complex64::new(4.0, 0.0), 1e-6, 1e-7);
        let mut xs: Vec<f64> = branches.iter().map(|b| b[0].re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(branches.len(), 2);
        assert!((xs[0] + 2.0).abs() < 1e-10 && (xs[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn inconsistent_branches_are_filtered() {
        // (y^2 - 1, x - y): over y = 1 only x = 1 survives even though the
        // x-pivot x - y substitutes to a linear polynomial with one root;
        // sanity: exactly one branch, matching the line.
        let tri = triangular(&["x", "y"], "y^2 - 1\nx - y");
        let branches = tri.branches_over(Complex64::new(1.0, 0.0), 1e-6, 1e-7);
        assert_eq!(branches.len(), 1);
        assert!((branches[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
