//! Numerical solver for zero-dimensional polynomial systems, with
//! multiplicities.
//!
//! Pipeline: a graded Groebner basis decides dimension and the quotient
//! vector-space dimension (the multiplicity total); a lexicographic basis
//! triangularizes the system; the univariate eliminant is deflated exactly
//! by squarefree decomposition, its roots found by the Aberth–Ehrlich
//! iteration, and full points recovered by numeric back-substitution.
//!
//! Multiplicity is attributed per eliminant root: a root of exact
//! multiplicity `k` carrying a single branch is a point of multiplicity
//! `k`; a simple root distributes multiplicity 1 to each branch. The
//! assignment is accepted only when the attributed total matches the
//! quotient dimension — a sharp certificate, since attribution can never
//! overcount. On mismatch the last coordinate is sheared by a seeded random
//! linear change and the solve retried; generic coordinates make the
//! attribution exact almost surely.

mod aberth;
mod backsub;
mod univar;

pub use univar::UniPoly;

use crate::ideal::{
    dimension_of_basis, groebner, quotient_dimension, Budget, IdealError, IdealHandle,
    MonomialOrder,
};
use crate::poly::Polynomial;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tunables for the numeric stage.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Points closer than twice this radius are merged into one cluster.
    pub clustering_radius: f64,
    /// Scale-normalized residual bound every reported point must meet.
    pub residual_tolerance: f64,
    /// Maximum number of seeded coordinate-shear retries.
    pub max_retries: u32,
    /// Seed for the shear coefficients.
    pub retry_seed: u64,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            clustering_radius: 1e-7,
            residual_tolerance: 1e-8,
            max_retries: 3,
            retry_seed: 0x5eed_0d5e,
        }
    }
}

/// One solution with its multiplicity.
#[derive(Debug, Clone)]
pub struct SolutionPoint {
    pub coordinates: Vec<Complex64>,
    pub multiplicity: u64,
}

/// The full solution set of a zero-dimensional system.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub var_names: Vec<String>,
    pub points: Vec<SolutionPoint>,
    pub total_multiplicity: u64,
    pub clustering_radius: f64,
    pub warnings: Vec<String>,
}

impl SolutionSet {
    /// CSV rendering: one row per point, real and imaginary columns per
    /// coordinate, multiplicity last.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for name in &self.var_names {
            out.push_str(&format!("re_{name},im_{name},"));
        }
        out.push_str("multiplicity\n");
        for p in &self.points {
            for z in &p.coordinates {
                out.push_str(&format!("{:e},{:e},", z.re, z.im));
            }
            out.push_str(&format!("{}\n", p.multiplicity));
        }
        out
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SolveError {
    #[error("system is {dimension}-dimensional, not zero-dimensional")]
    PositiveDimensional { dimension: i64 },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("solver internal failure: {0}")]
    Internal(String),
}

/// Solves with default options.
pub fn solve(ideal: &IdealHandle, budget: &Budget) -> Result<SolutionSet, SolveError> {
    solve_with_options(ideal, budget, &SolveOptions::default())
}

/// Numeric roots of one dense univariate polynomial, coefficients in
/// ascending degree order. Exposed for in-crate callers that already hold
/// plain coefficient vectors.
pub(crate) fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    aberth::roots(coeffs)
}

/// Total multiplicity (= quotient algebra dimension on success).
pub fn count_with_multiplicity(
    ideal: &IdealHandle,
    budget: &Budget,
) -> Result<u64, SolveError> {
    Ok(solve(ideal, budget)?.total_multiplicity)
}

pub fn solve_with_options(
    ideal: &IdealHandle,
    budget: &Budget,
    options: &SolveOptions,
) -> Result<SolutionSet, SolveError> {
    let ring = ideal.ring().clone();
    let m = ring.var_count();

    let graded = groebner(ideal, MonomialOrder::GrevLex, budget)?;
    let dim = dimension_of_basis(&graded);
    if dim > 0 {
        return Err(SolveError::PositiveDimensional { dimension: dim });
    }
    let q = quotient_dimension(&graded)
        .ok_or_else(|| SolveError::Internal("quotient dimension unavailable at dimension <= 0".into()))?;
    if q == 0 {
        return Ok(SolutionSet {
            var_names: ring.var_names().to_vec(),
            points: Vec::new(),
            total_multiplicity: 0,
            clustering_radius: options.clustering_radius,
            warnings: Vec::new(),
        });
    }

    let mut last_attempt: Option<Attempt> = None;
    for attempt in 0..=options.max_retries {
        let shear = if attempt == 0 {
            None
        } else {
            Some(draw_shear(m, options.retry_seed, attempt))
        };
        let work = match &shear {
            None => ideal.clone(),
            Some(lambda) => shear_last_coordinate(ideal, lambda),
        };
        let mut run = run_attempt(&work, budget, options)?;
        if let Some(lambda) = &shear {
            unshear_points(&mut run.points, lambda);
        }
        let clean = run.ambiguous_groups == 0 && run.attributed == q;
        if clean {
            return Ok(finalize(ring.var_names(), run.points, q, options, ideal, Vec::new()));
        }
        last_attempt = Some(run);
    }

    // Retries exhausted: fall back to quotient-dimension bookkeeping.
    let run = last_attempt.expect("at least one attempt ran");
    let mut warnings = Vec::new();
    let mut points = run.points;
    let clustered = cluster(points.clone(), 2.0 * options.clustering_radius);
    if clustered.len() == 1 {
        // A single distinct point must carry the whole quotient dimension.
        points = vec![(clustered[0].0.clone(), q)];
    } else if run.ambiguous_groups == 0
        && run.curvilinear_points == 1
        && run.attributed < q
        && run.curvilinear_index < points.len()
    {
        // Exactly one degenerate cluster: it absorbs the deficit.
        let deficit = q - run.attributed;
        points[run.curvilinear_index].1 += deficit;
        warnings.push(format!(
            "multiplicity deficit of {deficit} assigned to the unique degenerate cluster \
             by quotient-dimension bookkeeping"
        ));
    } else {
        let attributed = run.attributed;
        warnings.push(format!(
            "multiplicity attribution incomplete: attributed {attributed}, \
             quotient dimension {q}"
        ));
    }
    let total = points.iter().map(|p| p.1).sum();
    Ok(finalize(ring.var_names(), points, total, options, ideal, warnings))
}

struct Attempt {
    points: Vec<(Vec<Complex64>, u64)>,
    attributed: u64,
    ambiguous_groups: usize,
    curvilinear_points: usize,
    curvilinear_index: usize,
}

fn run_attempt(
    ideal: &IdealHandle,
    budget: &Budget,
    options: &SolveOptions,
) -> Result<Attempt, SolveError> {
    let lex = groebner(ideal, MonomialOrder::Lex, budget)?;
    let tri = backsub::TriangularSystem::build(&lex).ok_or_else(|| {
        SolveError::Internal("lex basis lost zero-dimensionality".into())
    })?;
    let eliminant = univariate_in_last(&lex.elements()[tri.eliminant_index()]);

    let mut points: Vec<(Vec<Complex64>, u64)> = Vec::new();
    let mut attributed = 0u64;
    let mut ambiguous_groups = 0usize;
    let mut curvilinear_points = 0usize;
    let mut curvilinear_index = usize::MAX;

    for (factor, k) in eliminant.squarefree_decomposition() {
        for alpha in aberth::roots(&factor.complex_coeffs()) {
            let branches =
                tri.branches_over(alpha, 1e-6, options.clustering_radius.max(1e-9));
            let b = branches.len();
            if b == 0 {
                continue; // lost numerically; the total check will notice
            }
            if k == 1 {
                for br in branches {
                    points.push((br, 1));
                    attributed += 1;
                }
            } else if b == 1 {
                curvilinear_points += 1;
                curvilinear_index = points.len();
                points.push((branches.into_iter().next().unwrap(), k as u64));
                attributed += k as u64;
            } else {
                ambiguous_groups += 1;
                for br in branches {
                    points.push((br, 1));
                    attributed += 1;
                }
            }
        }
    }

    Ok(Attempt { points, attributed, ambiguous_groups, curvilinear_points, curvilinear_index })
}

/// Extracts the univariate polynomial in the last ring variable.
fn univariate_in_last(p: &Polynomial) -> UniPoly {
    let last = p.ring().var_count() - 1;
    let deg = p.degree_in_var(last) as usize;
    let mut coeffs = vec![crate::poly::Rational::from_integer(0.into()); deg + 1];
    for (mono, c) in p.terms() {
        assert!(
            mono.support().all(|v| v == last),
            "eliminant involves more than the last variable"
        );
        coeffs[mono.exps()[last] as usize] = c.clone();
    }
    UniPoly::new(coeffs)
}

fn draw_shear(m: usize, seed: u64, attempt: u32) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(attempt as u64 + 1)));
    (0..m - 1)
        .map(|_| {
            let magnitude = rng.gen_range(1..=4i64);
            if rng.gen::<bool>() {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect()
}

/// Applies the substitution x_last -> x_last - sum(lambda_i x_i), i.e.
/// works in coordinates where the new last variable is
/// `x_last + sum(lambda_i x_i)`.
fn shear_last_coordinate(ideal: &IdealHandle, lambda: &[i64]) -> IdealHandle {
    let ring = ideal.ring();
    let m = ring.var_count();
    let mut images: Vec<Polynomial> = (0..m).map(|i| Polynomial::variable(ring, i)).collect();
    let mut last_image = Polynomial::variable(ring, m - 1);
    for (i, &l) in lambda.iter().enumerate() {
        let term = Polynomial::variable(ring, i).scale(&crate::poly::rat_int(l));
        last_image = &last_image - &term;
    }
    images[m - 1] = last_image;
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.compose(&images))
        .collect();
    IdealHandle::new(ring, gens)
}

/// Maps sheared-coordinate points back: x_last = u_last - sum(lambda_i u_i).
fn unshear_points(points: &mut [(Vec<Complex64>, u64)], lambda: &[i64]) {
    for (coords, _) in points.iter_mut() {
        let m = coords.len();
        let mut correction = Complex64::new(0.0, 0.0);
        for (i, &l) in lambda.iter().enumerate() {
            correction += Complex64::new(l as f64, 0.0) * coords[i];
        }
        coords[m - 1] -= correction;
    }
}

/// Greedy clustering at the given merge radius; representatives keep their
/// first-seen coordinates and accumulate multiplicity.
fn cluster(
    points: Vec<(Vec<Complex64>, u64)>,
    merge_radius: f64,
) -> Vec<(Vec<Complex64>, u64)> {
    let mut reps: Vec<(Vec<Complex64>, u64)> = Vec::new();
    for (coords, mult) in points {
        match reps
            .iter_mut()
            .find(|(rc, _)| distance(rc, &coords) <= merge_radius)
        {
            Some(rep) => rep.1 += mult,
            None => reps.push((coords, mult)),
        }
    }
    reps
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn finalize(
    var_names: &[String],
    raw_points: Vec<(Vec<Complex64>, u64)>,
    total: u64,
    options: &SolveOptions,
    ideal: &IdealHandle,
    mut warnings: Vec<String>,
) -> SolutionSet {
    let mut merged = cluster(raw_points, 2.0 * options.clustering_radius);
    merged.sort_by(|a, b| {
        for (x, y) in a.0.iter().zip(&b.0) {
            match x
                .re
                .partial_cmp(&y.re)
                .unwrap()
                .then(x.im.partial_cmp(&y.im).unwrap())
            {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });

    for i in 0..merged.len() {
        for j in (i + 1)..merged.len() {
            let d = distance(&merged[i].0, &merged[j].0);
            if d < 10.0 * options.clustering_radius {
                warnings.push(format!(
                    "ill-conditioned cluster pair: separation {d:.3e} is within 10x \
                     the clustering radius"
                ));
            }
        }
    }

    for (idx, (coords, _)) in merged.iter().enumerate() {
        let worst = ideal
            .generators()
            .iter()
            .map(|g| g.normalized_residual(coords))
            .fold(0.0f64, f64::max);
        if worst > options.residual_tolerance {
            warnings.push(format!(
                "point {idx} exceeds the residual tolerance: {worst:.3e}"
            ));
        }
    }

    SolutionSet {
        var_names: var_names.to_vec(),
        points: merged
            .into_iter()
            .map(|(coordinates, multiplicity)| SolutionPoint { coordinates, multiplicity })
            .collect(),
        total_multiplicity: total,
        clustering_radius: options.clustering_radius,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;
    use crate::poly::Ring;

    fn solved(vars: &[&str], gens: &str) -> SolutionSet {
        let ring = Ring::new(vars.to_vec());
        let ideal = parse_ideal(gens, &ring).unwrap();
        solve(&ideal, &Budget::unlimited()).unwrap()
    }

    fn real_close(z: Complex64, x: f64) -> bool {
        (z - Complex64::new(x, 0.0)).norm() < 1e-9
    }

    #[test]
    fn two_simple_real_roots() {
        let s = solved(&["x"], "x^2 - 1");
        assert_eq!(s.total_multiplicity, 2);
        assert_eq!(s.points.len(), 2);
        assert!(real_close(s.points[0].coordinates[0], -1.0));
        assert!(real_close(s.points[1].coordinates[0], 1.0));
        assert!(s.points.iter().all(|p| p.multiplicity == 1));
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn double_point_on_a_line() {
        let s = solved(&["x", "y"], "x^2\ny - x");
        assert_eq!(s.total_multiplicity, 2);
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].multiplicity, 2);
        assert!(real_close(s.points[0].coordinates[0], 0.0));
        assert!(real_close(s.points[0].coordinates[1], 0.0));
    }

    #[test]
    fn two_double_points_need_the_shear_retry() {
        // 2x1^2 + 3x2^2 = 1 and x1^2 + x2^2 = 1/2 force x2^2 = 0 and
        // x1^2 = 1/2: two tangential intersection points of multiplicity 2.
        let s = solved(&["x1", "x2"], "2*x1^2 + 3*x2^2 - 1\nx1^2 + x2^2 - 1/2");
        assert_eq!(s.total_multiplicity, 4);
        assert_eq!(s.points.len(), 2);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!(real_close(s.points[0].coordinates[0], -inv_sqrt2));
        assert!(real_close(s.points[1].coordinates[0], inv_sqrt2));
        for p in &s.points {
            assert_eq!(p.multiplicity, 2);
            assert!(p.coordinates[1].norm() < 1e-6);
        }
    }

    #[test]
    fn fat_point_total_comes_from_quotient_dimension() {
        // (x^2, y^2) is a single point of multiplicity 4 that no shear can
        // attribute through the eliminant; the single-cluster fallback
        // settles it.
        let s = solved(&["x", "y"], "x^2\ny^2");
        assert_eq!(s.total_multiplicity, 4);
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].multiplicity, 4);
    }

    #[test]
    fn empty_system_has_no_points() {
        let s = solved(&["x"], "x^2 + 1\nx - 1");
        assert_eq!(s.total_multiplicity, 0);
        assert!(s.points.is_empty());
    }

    #[test]
    fn counts_match_univariate_degree() {
        let ring = Ring::new(["x"]);
        let triple = parse_ideal("x^3 - x", &ring).unwrap();
        assert_eq!(count_with_multiplicity(&triple, &Budget::unlimited()).unwrap(), 3);
        let double = parse_ideal("x^2", &ring).unwrap();
        assert_eq!(count_with_multiplicity(&double, &Budget::unlimited()).unwrap(), 2);
    }

    #[test]
    fn positive_dimension_is_rejected() {
        let ring = Ring::new(["x", "y"]);
        let curve = parse_ideal("y - x^2", &ring).unwrap();
        match solve(&curve, &Budget::unlimited()) {
            Err(SolveError::PositiveDimensional { dimension: 1 }) => {}
            other => panic!("expected positive-dimension error, got {other:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let s = solved(&["x"], "x - 3");
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "re_x,im_x,multiplicity");
        let row = lines.next().unwrap();
        assert!(row.starts_with("3e0,") && row.ends_with(",1"), "row was {row}");
    }

    #[test]
    fn complex_points_are_found() {
        // x^2 + 1 over the reals has no zeros; over C it has two.
        let s = solved(&["x"], "x^2 + 1");
        assert_eq!(s.total_multiplicity, 2);
        let mut ims: Vec<f64> = s.points.iter().map(|p| p.coordinates[0].im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
    }
}
