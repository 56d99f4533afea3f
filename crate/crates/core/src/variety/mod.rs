//! Geometric setup for midpoint problems on pairs of complete intersections.
//!
//! A [`VarietySpec`] holds one complete intersection `X = {f_1 = ... = f_{m-n} = 0}`
//! in `C^m`; [`check_strong_ci`] validates that it is smooth and that its
//! leading forms cut a cone of the expected dimension.  A [`MidpointProblem`]
//! pairs two such varieties of dimension `n` inside `C^{2n-1}` and studies the
//! midpoint map `(x, y) -> (x + y)/2` on `X x Y`, together with an auxiliary
//! linear form `L` used to slice its fibers.  The submodules compute the
//! critical loci of that map, the closure of its critical values, and the set
//! of target points reachable from sequences escaping to infinity.

mod critical;
mod properness;

pub use critical::{
    k0_closure, midpoint_coordinates, sing_phi, sing_phi_l, surplus_locus, target_names,
    PairEmbedding,
};
pub use properness::{l_infinity, l_infinity_of_surplus, nonproperness_set};

use crate::ideal::{dimension, groebner, Budget, IdealError, IdealHandle, MonomialOrder};
use crate::poly::{rat_int, Polynomial, Rational, Ring};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// Errors raised while assembling or validating the geometric setup.
#[derive(Debug, thiserror::Error)]
pub enum VarietyError {
    /// A spec or problem failed a structural precondition.
    #[error("invalid variety data: {0}")]
    InvalidSpec(String),
    /// No admissible linear form was found within the retry allowance.
    #[error(
        "no admissible linear form found in {attempts} attempts; \
         the cone at infinity may have dimension greater than one"
    )]
    AdmissibleRetriesExhausted {
        /// Number of random draws tried.
        attempts: usize,
    },
    /// Every random matrix drawn for a coordinate change was singular.
    #[error("no invertible coordinate change found in {attempts} attempts")]
    SingularMatrixRetriesExhausted {
        /// Number of random draws tried.
        attempts: usize,
    },
    /// An underlying Groebner computation failed.
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// One complete intersection `{f_1 = ... = f_{m-n} = 0}` of dimension `n`
/// inside `C^m`, with `m - n` defining equations.
#[derive(Debug, Clone)]
pub struct VarietySpec {
    name: String,
    ring: Arc<Ring>,
    n: usize,
    equations: Vec<Polynomial>,
    multi_degree: Vec<u32>,
}

impl VarietySpec {
    /// Validates counts and degrees and records the multi-degree.
    ///
    /// Requires `ring` to have `m` variables with `m - n` nonconstant
    /// equations, all in `ring`.
    pub fn new(
        name: &str,
        ring: &Arc<Ring>,
        n: usize,
        equations: Vec<Polynomial>,
    ) -> Result<VarietySpec, VarietyError> {
        let m = ring.var_count();
        if n == 0 || n >= m + 1 {
            return Err(VarietyError::InvalidSpec(format!(
                "variety dimension {n} does not fit in ambient dimension {m}"
            )));
        }
        if equations.len() != m - n {
            return Err(VarietyError::InvalidSpec(format!(
                "expected {} defining equations for a {n}-fold in C^{m}, got {}",
                m - n,
                equations.len()
            )));
        }
        let mut multi_degree = Vec::with_capacity(equations.len());
        for (i, eq) in equations.iter().enumerate() {
            if !crate::poly::same_ring(eq.ring(), ring) {
                return Err(VarietyError::InvalidSpec(format!(
                    "equation {} lives in a different ring",
                    i + 1
                )));
            }
            match eq.total_degree() {
                Some(d) if d >= 1 => multi_degree.push(d),
                _ => {
                    return Err(VarietyError::InvalidSpec(format!(
                        "equation {} is constant; each equation must have degree >= 1",
                        i + 1
                    )))
                }
            }
        }
        Ok(VarietySpec {
            name: name.to_string(),
            ring: ring.clone(),
            n,
            equations,
            multi_degree,
        })
    }

    /// Display name used in reports.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ambient polynomial ring (with `m` variables).
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Ambient dimension `m`.
    pub fn ambient_dimension(&self) -> usize {
        self.ring.var_count()
    }

    /// Dimension `n` of the variety.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Defining equations (length `m - n`).
    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    /// Total degrees of the defining equations.
    pub fn multi_degree(&self) -> &[u32] {
        &self.multi_degree
    }

    /// Highest homogeneous components of the defining equations.
    ///
    /// These cut out the cone of directions along which the variety escapes
    /// to infinity.
    pub fn leading_forms(&self) -> Vec<Polynomial> {
        self.equations
            .iter()
            .map(|eq| {
                eq.highest_homogeneous_component()
                    .expect("validated equations are nonzero")
            })
            .collect()
    }
}

/// Validation verdicts for one [`VarietySpec`].
///
/// `smooth` certifies that the Jacobian of the defining equations has full
/// rank everywhere on the variety (the equations together with all maximal
/// minors generate the unit ideal).  `leading_dimension` is the dimension of
/// the zero set of the highest homogeneous components; for an `n`-fold cut by
/// `m - n` equations in `C^m` the expected value is `n`, since each leading
/// form can drop the dimension of the ambient space at most by one.  The
/// report also records the comparison against the codimension `m - n`, an
/// alternative reading that only agrees with the first in the balanced case
/// `m = 2n`; the verdict used everywhere is the comparison with `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongCiReport {
    /// Unit-ideal certificate for the rank of the Jacobian on the variety.
    pub smooth: bool,
    /// Dimension of the vanishing locus of the leading forms.
    pub leading_dimension: i64,
    /// Expected dimension `n` of that locus.
    pub expected_leading_dimension: i64,
    /// The codimension `m - n`, recorded for comparison.
    pub codimension: i64,
}

impl StrongCiReport {
    /// True when the leading-form locus has the expected dimension `n`.
    pub fn leading_dimension_ok(&self) -> bool {
        self.leading_dimension == self.expected_leading_dimension
    }

    /// Overall verdict: smooth and with leading forms of expected dimension.
    pub fn passed(&self) -> bool {
        self.smooth && self.leading_dimension_ok()
    }
}

impl fmt::Display for StrongCiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "smoothness (Jacobian full rank on the variety): {}",
            if self.smooth { "pass" } else { "FAIL" }
        )?;
        write!(
            f,
            "leading-form cone dimension: {} (expected {}; codimension reading would expect {}): {}",
            self.leading_dimension,
            self.expected_leading_dimension,
            self.codimension,
            if self.leading_dimension_ok() {
                "pass"
            } else {
                "FAIL"
            }
        )
    }
}

/// Checks smoothness and the dimension of the leading-form cone.
///
/// Verdicts are reported as data; only budget exhaustion is an error.
pub fn check_strong_ci(spec: &VarietySpec, budget: &Budget) -> Result<StrongCiReport, IdealError> {
    let ring = spec.ring();
    let m = spec.ambient_dimension();
    let codim = m - spec.n();

    let all_vars: Vec<usize> = (0..m).collect();
    let jac = crate::poly::jacobian(spec.equations(), &all_vars);
    let mut gens = spec.equations().to_vec();
    gens.extend(jac.maximal_minors());
    let smooth = groebner(
        &IdealHandle::new(ring, gens),
        MonomialOrder::GrevLex,
        budget,
    )?
    .is_unit();

    let leading = IdealHandle::new(ring, spec.leading_forms());
    let leading_dimension = dimension(&leading, budget)?;

    Ok(StrongCiReport {
        smooth,
        leading_dimension,
        expected_leading_dimension: spec.n() as i64,
        codimension: codim as i64,
    })
}

/// A linear form `L(x) = c_1 x_1 + ... + c_m x_m` with no constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    coefficients: Vec<Rational>,
}

impl LinearForm {
    /// Builds a linear form from its coefficient vector (must be nonzero).
    pub fn new(coefficients: Vec<Rational>) -> Result<LinearForm, VarietyError> {
        if coefficients.iter().all(Rational::is_zero) {
            return Err(VarietyError::InvalidSpec(
                "a linear form must have at least one nonzero coefficient".into(),
            ));
        }
        Ok(LinearForm { coefficients })
    }

    /// Reads the coefficients off a degree-one polynomial without constant term.
    pub fn from_polynomial(p: &Polynomial) -> Result<LinearForm, VarietyError> {
        if p.total_degree() != Some(1) {
            return Err(VarietyError::InvalidSpec(format!(
                "expected a homogeneous linear polynomial, got `{p}`"
            )));
        }
        if !p.constant_term().is_zero() {
            return Err(VarietyError::InvalidSpec(format!(
                "a linear form must not have a constant term, got `{p}`"
            )));
        }
        let ring = p.ring();
        let coefficients = (0..ring.var_count())
            .map(|i| {
                p.terms()
                    .find(|(m, _)| m.exps()[i] == 1 && m.degree() == 1)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        LinearForm::new(coefficients)
    }

    /// Coefficient vector.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// The polynomial `sum_i c_i x_i` in the given ring.
    ///
    /// The ring may have more variables than there are coefficients (the
    /// extra ones get coefficient zero), which is how the form is applied to
    /// the first factor of a product ring.
    pub fn to_polynomial(&self, ring: &Arc<Ring>) -> Polynomial {
        assert!(
            ring.var_count() >= self.coefficients.len(),
            "ring has too few variables for this linear form"
        );
        let mut out = Polynomial::zero(ring);
        for (i, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &Polynomial::variable(ring, i).scale(c);
            }
        }
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*x{}", i + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A midpoint problem: two `n`-folds `X, Y` in `C^{2n-1}` together with the
/// cone of their common directions at infinity and an optional slicing form.
#[derive(Debug, Clone)]
pub struct MidpointProblem {
    x: VarietySpec,
    y: VarietySpec,
    l: Option<LinearForm>,
    cone_at_infinity: IdealHandle,
    seed: u64,
}

impl MidpointProblem {
    /// Pairs two validated specs; both must share the ambient ring of
    /// dimension `2n - 1` and have equal dimension `n`.
    pub fn new(x: VarietySpec, y: VarietySpec, seed: u64) -> Result<MidpointProblem, VarietyError> {
        if x.n() != y.n() {
            return Err(VarietyError::InvalidSpec(format!(
                "the two varieties must have equal dimension, got {} and {}",
                x.n(),
                y.n()
            )));
        }
        if !crate::poly::same_ring(x.ring(), y.ring()) {
            return Err(VarietyError::InvalidSpec(
                "the two varieties must live in the same ambient ring".into(),
            ));
        }
        let m = x.ambient_dimension();
        if m != 2 * x.n() - 1 {
            return Err(VarietyError::InvalidSpec(format!(
                "midpoint problems need ambient dimension 2n-1 = {}, got {m}",
                2 * x.n() - 1
            )));
        }
        let cone_at_infinity = cone_at_infinity(&x, &y);
        Ok(MidpointProblem {
            x,
            y,
            l: None,
            cone_at_infinity,
            seed,
        })
    }

    /// First variety `X`.
    pub fn x(&self) -> &VarietySpec {
        &self.x
    }

    /// Second variety `Y`.
    pub fn y(&self) -> &VarietySpec {
        &self.y
    }

    /// Shared ambient ring.
    pub fn ring(&self) -> &Arc<Ring> {
        self.x.ring()
    }

    /// Ambient dimension `m = 2n - 1`.
    pub fn ambient_dimension(&self) -> usize {
        self.x.ambient_dimension()
    }

    /// Common dimension `n` of the two varieties.
    pub fn n(&self) -> usize {
        self.x.n()
    }

    /// The slicing linear form, once chosen.
    pub fn l(&self) -> Option<&LinearForm> {
        self.l.as_ref()
    }

    /// Returns the same problem with the slicing form installed.
    pub fn with_l(mut self, l: LinearForm) -> MidpointProblem {
        assert_eq!(
            l.coefficients().len(),
            self.ambient_dimension(),
            "linear form length must match the ambient dimension"
        );
        self.l = Some(l);
        self
    }

    /// Ideal of the cone of common directions at infinity.
    pub fn cone_at_infinity(&self) -> &IdealHandle {
        &self.cone_at_infinity
    }

    /// Base seed for randomized subroutines.
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Ideal generated by the leading forms of both varieties' equations.
///
/// Its zero set is the cone of directions along which `X` and `Y` both reach
/// infinity; the pair is in general position exactly when this cone is a
/// finite union of lines through the origin.
pub fn cone_at_infinity(x: &VarietySpec, y: &VarietySpec) -> IdealHandle {
    assert!(
        crate::poly::same_ring(x.ring(), y.ring()),
        "cone of a pair needs a shared ambient ring"
    );
    let mut gens = x.leading_forms();
    gens.extend(y.leading_forms());
    IdealHandle::new(x.ring(), gens)
}

/// True when the cone at infinity has dimension one (a union of lines).
pub fn check_general_position(
    problem: &MidpointProblem,
    budget: &Budget,
) -> Result<bool, IdealError> {
    Ok(dimension(problem.cone_at_infinity(), budget)? == 1)
}

/// Certificate that `L` is admissible: the cone at infinity meets `{L = 0}`
/// in dimension at most zero, i.e. only at the origin.
pub fn admissibility_certificate(
    problem: &MidpointProblem,
    l: &LinearForm,
    budget: &Budget,
) -> Result<bool, IdealError> {
    let ring = problem.ring();
    let mut gens = problem.cone_at_infinity().generators().to_vec();
    gens.push(l.to_polynomial(ring));
    let with_l = IdealHandle::new(ring, gens);
    Ok(dimension(&with_l, budget)? <= 0)
}

/// Draws a random integer linear form that is nonzero on every line of the
/// cone at infinity, re-verifying the certificate before returning.
///
/// Coefficients are integers in `[-10, 10]`; up to 20 draws are attempted.
pub fn choose_admissible_l(
    problem: &MidpointProblem,
    seed: u64,
    budget: &Budget,
) -> Result<LinearForm, VarietyError> {
    const ATTEMPTS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xad3155ab1e_u64);
    let m = problem.ambient_dimension();
    for _ in 0..ATTEMPTS {
        let coeffs: Vec<Rational> = (0..m).map(|_| rat_int(rng.gen_range(-10..=10))).collect();
        if coeffs.iter().all(Rational::is_zero) {
            continue;
        }
        let l = LinearForm::new(coeffs).expect("nonzero by the check above");
        if admissibility_certificate(problem, &l, budget)? {
            return Ok(l);
        }
    }
    Err(VarietyError::AdmissibleRetriesExhausted { attempts: ATTEMPTS })
}

/// Degree bookkeeping for the hypersurface containing the target points
/// reachable from infinity.
///
/// `product_bound` is `prod(a_i) * prod(b_i) * sum(a_i + b_i - 2) - 1` in the
/// multi-degrees of the two varieties.  `refined_bound = D + d - mu` combines
/// the degree `D` of the surplus critical locus, the geometric degree `d` of
/// the sliced midpoint map, and the generic fiber Euler characteristic `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBoundReport {
    /// Multi-degree of the first variety.
    pub a: Vec<u32>,
    /// Multi-degree of the second variety.
    pub b: Vec<u32>,
    /// Closed-form bound from the multi-degrees alone.
    pub product_bound: i64,
    /// Degree `D` of the surplus critical locus, when computed.
    pub surplus_degree: Option<u64>,
    /// Geometric degree `d` of the sliced midpoint map, when computed.
    pub geometric_degree: Option<u64>,
    /// Generic fiber Euler characteristic `mu`, when computed.
    pub generic_euler: Option<i64>,
    /// `D + d - mu`, when all three ingredients are available.
    pub refined_bound: Option<i64>,
    /// Degree of the computed hypersurface at infinity, when available.
    pub l_infinity_degree: Option<u64>,
}

impl DegreeBoundReport {
    /// The bound every computed degree must respect: the smaller of the two
    /// available bounds.
    pub fn effective_bound(&self) -> i64 {
        match self.refined_bound {
            Some(r) => r.min(self.product_bound),
            None => self.product_bound,
        }
    }

    /// Checks `l_infinity_degree <= min(product_bound, refined_bound)`
    /// whenever all quantities are present; vacuously true otherwise.
    pub fn consistent(&self) -> bool {
        match self.l_infinity_degree {
            Some(deg) => deg as i64 <= self.effective_bound(),
            None => true,
        }
    }
}

impl fmt::Display for DegreeBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "multi-degrees: a = {:?}, b = {:?}", self.a, self.b)?;
        if self.product_bound < 0 {
            writeln!(
                f,
                "product bound: {} (escape to infinity impossible; the locus is empty)",
                self.product_bound
            )?;
        } else {
            writeln!(f, "product bound: {}", self.product_bound)?;
        }
        match (self.surplus_degree, self.geometric_degree, self.generic_euler) {
            (Some(d_surplus), Some(d_geom), Some(mu)) => {
                writeln!(
                    f,
                    "refined bound: D + d - mu = {d_surplus} + {d_geom} - {mu} = {}",
                    self.refined_bound.expect("filled when inputs are present")
                )?;
            }
            _ => writeln!(f, "refined bound: not computed")?,
        }
        match self.l_infinity_degree {
            Some(deg) => write!(
                f,
                "degree at infinity: {deg} (bound {}): {}",
                self.effective_bound(),
                if self.consistent() { "pass" } else { "FAIL" }
            ),
            None => write!(f, "degree at infinity: not computed"),
        }
    }
}

/// Fills the degree-bound report from the multi-degrees and any computed
/// quantities.
pub fn degree_bounds(
    problem: &MidpointProblem,
    surplus_degree: Option<u64>,
    geometric_degree: Option<u64>,
    generic_euler: Option<i64>,
    l_infinity_degree: Option<u64>,
) -> DegreeBoundReport {
    let a = problem.x().multi_degree().to_vec();
    let b = problem.y().multi_degree().to_vec();
    let prod_a: i64 = a.iter().map(|&d| d as i64).product();
    let prod_b: i64 = b.iter().map(|&d| d as i64).product();
    let corner_sum: i64 = a
        .iter()
        .zip(&b)
        .map(|(&ai, &bi)| ai as i64 + bi as i64 - 2)
        .sum();
    let product_bound = prod_a * prod_b * corner_sum - 1;
    let refined_bound = match (surplus_degree, geometric_degree, generic_euler) {
        (Some(d_surplus), Some(d_geom), Some(mu)) => {
            Some(d_surplus as i64 + d_geom as i64 - mu)
        }
        _ => None,
    };
    DegreeBoundReport {
        a,
        b,
        product_bound,
        surplus_degree,
        geometric_degree,
        generic_euler,
        refined_bound,
        l_infinity_degree,
    }
}

/// A square matrix of rationals representing a linear change of coordinates.
pub type RationalMatrix = Vec<Vec<Rational>>;

/// Exact determinant by fraction-free Gaussian elimination on a copy.
fn rational_determinant(m: &RationalMatrix) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rational::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            let factor = &a[r][col] / &p;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact inverse by Gauss-Jordan elimination; `None` for singular input.
pub fn rational_matrix_inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: RationalMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                    let sub = &factor * &inv[col][c];
                    inv[r][c] -= sub;
                }
            }
        }
    }
    Some(inv)
}

/// Draws a random invertible integer matrix with entries in `[-5, 5]`.
///
/// Redraws on a singular matrix, up to 10 times.
pub fn random_linear_map_h(
    dimension: usize,
    seed: u64,
) -> Result<RationalMatrix, VarietyError> {
    const ATTEMPTS: usize = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11a9_0f0f_u64);
    for _ in 0..ATTEMPTS {
        let h: RationalMatrix = (0..dimension)
            .map(|_| {
                (0..dimension)
                    .map(|_| rat_int(rng.gen_range(-5..=5)))
                    .collect()
            })
            .collect();
        if !rational_determinant(&h).is_zero() {
            return Ok(h);
        }
    }
    Err(VarietyError::SingularMatrixRetriesExhausted { attempts: ATTEMPTS })
}

/// Transforms a variety by the linear map `H`: the result cuts out `H(V)`.
///
/// Each equation `g` becomes `g o H^{-1}`, so the zero set is exactly the
/// image of the old one; total degrees are preserved because `H` is
/// invertible and linear.
pub fn apply_h(spec: &VarietySpec, h: &RationalMatrix) -> Result<VarietySpec, VarietyError> {
    let m = spec.ambient_dimension();
    if h.len() != m || h.iter().any(|row| row.len() != m) {
        return Err(VarietyError::InvalidSpec(format!(
            "coordinate change must be a {m} x {m} matrix"
        )));
    }
    let inv = rational_matrix_inverse(h).ok_or(VarietyError::InvalidSpec(
        "coordinate change matrix is singular".into(),
    ))?;
    let ring = spec.ring();
    let images: Vec<Polynomial> = (0..m)
        .map(|i| {
            let mut row = Polynomial::zero(ring);
            for (j, c) in inv[i].iter().enumerate() {
                if !c.is_zero() {
                    row = &row + &Polynomial::variable(ring, j).scale(c);
                }
            }
            row
        })
        .collect();
    let equations: Vec<Polynomial> = spec
        .equations()
        .iter()
        .map(|eq| eq.compose(&images))
        .collect();
    let moved = VarietySpec::new(
        &format!("{}_moved", spec.name()),
        ring,
        spec.n(),
        equations,
    )?;
    debug_assert_eq!(
        moved.multi_degree(),
        spec.multi_degree(),
        "invertible linear maps preserve total degrees"
    );
    Ok(moved)
}

/// Convenience check used by tests and reports: `|c|` bounded by `limit`
/// for every coefficient of the form.
pub fn coefficients_bounded(l: &LinearForm, limit: i64) -> bool {
    let bound = rat_int(limit);
    l.coefficients().iter().all(|c| c.abs() <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    fn r3() -> Arc<Ring> {
        Ring::new(["x1", "x2", "x3"])
    }

    fn p(ring: &Arc<Ring>, s: &str) -> Polynomial {
        parse_polynomial(s, ring).unwrap()
    }

    fn quadric_x(ring: &Arc<Ring>) -> VarietySpec {
        VarietySpec::new("X", ring, 2, vec![p(ring, "x3 - x1^2 - x2^2")]).unwrap()
    }

    fn quadric_y(ring: &Arc<Ring>) -> VarietySpec {
        VarietySpec::new("Y", ring, 2, vec![p(ring, "x3 - x1^2 - 2*x2^2 + 1")]).unwrap()
    }

    fn quadric_problem() -> MidpointProblem {
        let ring = r3();
        MidpointProblem::new(quadric_x(&ring), quadric_y(&ring), 7).unwrap()
    }

    #[test]
    fn paraboloid_is_a_smooth_strong_complete_intersection() {
        let ring = r3();
        let report = check_strong_ci(&quadric_x(&ring), &Budget::unlimited()).unwrap();
        assert!(report.smooth);
        assert_eq!(report.leading_dimension, 2);
        assert!(report.leading_dimension_ok());
        assert!(report.passed());
    }

    #[test]
    fn double_plane_fails_the_smoothness_check() {
        let ring = r3();
        let spec = VarietySpec::new("D", &ring, 2, vec![p(&ring, "x1^2")]).unwrap();
        let report = check_strong_ci(&spec, &Budget::unlimited()).unwrap();
        assert!(!report.smooth);
    }

    #[test]
    fn shared_leading_forms_fail_the_dimension_check() {
        let ring = Ring::new(["x1", "x2", "x3", "x4", "x5"]);
        let spec = VarietySpec::new(
            "S",
            &ring,
            3,
            vec![p(&ring, "x1 + x3^2"), p(&ring, "x2 + x3^2")],
        )
        .unwrap();
        let report = check_strong_ci(&spec, &Budget::unlimited()).unwrap();
        assert!(report.smooth);
        assert_eq!(report.leading_dimension, 4);
        assert!(!report.leading_dimension_ok());
        assert!(!report.passed());
    }

    #[test]
    fn quadric_pair_cone_is_the_vertical_axis() {
        let problem = quadric_problem();
        let cone = problem.cone_at_infinity();
        let rendered = cone.render();
        assert!(rendered.contains("x1^2 + x2^2"));
        assert!(rendered.contains("x1^2 + 2*x2^2"));
        assert!(check_general_position(&problem, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn coincident_varieties_fail_general_position() {
        let ring = r3();
        let x = quadric_x(&ring);
        let y = VarietySpec::new("Y", &ring, 2, vec![p(&ring, "x3 - x1^2 - x2^2 + 5")]).unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap();
        assert!(!check_general_position(&problem, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn parallel_planes_fail_general_position() {
        let ring = r3();
        let x = VarietySpec::new("X", &ring, 2, vec![p(&ring, "x3")]).unwrap();
        let y = VarietySpec::new("Y", &ring, 2, vec![p(&ring, "x3 - 1")]).unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap();
        assert!(!check_general_position(&problem, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn transverse_planes_are_in_general_position() {
        let ring = r3();
        let x = VarietySpec::new("X", &ring, 2, vec![p(&ring, "x3")]).unwrap();
        let y = VarietySpec::new("Y", &ring, 2, vec![p(&ring, "x1")]).unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap();
        assert!(check_general_position(&problem, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn vertical_form_is_admissible_for_the_quadric_pair() {
        let problem = quadric_problem();
        let l = LinearForm::new(vec![rat_int(0), rat_int(0), rat_int(1)]).unwrap();
        assert!(admissibility_certificate(&problem, &l, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn horizontal_form_vanishes_on_the_cone_and_is_rejected() {
        let problem = quadric_problem();
        let l = LinearForm::new(vec![rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        assert!(!admissibility_certificate(&problem, &l, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn random_admissible_form_has_nonzero_vertical_coefficient() {
        let problem = quadric_problem();
        for seed in 0..5 {
            let l = choose_admissible_l(&problem, seed, &Budget::unlimited()).unwrap();
            assert!(!l.coefficients()[2].is_zero());
            assert!(coefficients_bounded(&l, 10));
        }
    }

    #[test]
    fn product_bound_matches_the_closed_form() {
        let problem = quadric_problem();
        let report = degree_bounds(&problem, None, None, None, None);
        assert_eq!(report.product_bound, 7);
        assert_eq!(report.refined_bound, None);
        assert!(report.consistent());
    }

    #[test]
    fn linear_pair_forces_an_empty_locus_at_infinity() {
        let ring = r3();
        let x = VarietySpec::new("X", &ring, 2, vec![p(&ring, "x3")]).unwrap();
        let y = VarietySpec::new("Y", &ring, 2, vec![p(&ring, "x1")]).unwrap();
        let problem = MidpointProblem::new(x, y, 0).unwrap();
        let report = degree_bounds(&problem, None, None, None, None);
        assert_eq!(report.product_bound, -1);
        let text = report.to_string();
        assert!(text.contains("empty"));
    }

    #[test]
    fn refined_bound_combines_all_three_ingredients() {
        let problem = quadric_problem();
        let report = degree_bounds(&problem, Some(8), Some(4), Some(0), Some(0));
        assert_eq!(report.refined_bound, Some(12));
        assert_eq!(report.effective_bound(), 7);
        assert!(report.consistent());
    }

    #[test]
    fn degree_bound_violations_are_detected() {
        let problem = quadric_problem();
        let report = degree_bounds(&problem, Some(8), Some(4), Some(0), Some(9));
        assert!(!report.consistent());
    }

    #[test]
    fn identity_coordinate_change_keeps_the_equations() {
        let ring = r3();
        let spec = quadric_y(&ring);
        let h: RationalMatrix = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        let moved = apply_h(&spec, &h).unwrap();
        assert_eq!(moved.equations()[0], spec.equations()[0]);
    }

    #[test]
    fn diagonal_stretch_rescales_the_vertical_coordinate()
    {
        let ring = r3();
        let spec = quadric_x(&ring);
        let mut h: RationalMatrix = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        h[2][2] = rat_int(2);
        let moved = apply_h(&spec, &h).unwrap();
        let expected = p(&ring, "1/2*x3 - x1^2 - x2^2");
        assert_eq!(moved.equations()[0], expected);
    }

    #[test]
    fn random_coordinate_changes_are_invertible_and_seeded() {
        let h1 = random_linear_map_h(3, 42).unwrap();
        let h2 = random_linear_map_h(3, 42).unwrap();
        assert_eq!(h1, h2);
        assert!(!rational_determinant(&h1).is_zero());
        let inv = rational_matrix_inverse(&h1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Rational::zero();
                for (k, inv_row) in inv.iter().enumerate() {
                    s += &h1[i][k] * &inv_row[j];
                }
                let expect = if i == j { Rational::one() } else { Rational::zero() };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn most_random_moves_of_a_self_pair_restore_general_position() {
        let ring = r3();
        let x = quadric_x(&ring);
        let mut good = 0;
        for seed in 0..10 {
            let h = random_linear_map_h(3, seed).unwrap();
            let y = apply_h(&x, &h).unwrap();
            let problem = MidpointProblem::new(x.clone(), y, seed).unwrap();
            if check_general_position(&problem, &Budget::unlimited()).unwrap() {
                good += 1;
            }
        }
        assert!(good >= 9, "only {good} of 10 coordinate changes worked");
    }

    #[test]
    fn spec_validation_rejects_bad_counts_and_constants() {
        let ring = r3();
        assert!(VarietySpec::new("B", &ring, 2, vec![]).is_err());
        assert!(VarietySpec::new("B", &ring, 2, vec![p(&ring, "3")]).is_err());
        assert!(VarietySpec::new(
            "B",
            &ring,
            1,
            vec![p(&ring, "x1"), p(&ring, "x2")]
        )
        .is_ok());
        let x = quadric_x(&ring);
        let skew = VarietySpec::new("S", &ring, 1, vec![p(&ring, "x1"), p(&ring, "x2")]).unwrap();
        assert!(MidpointProblem::new(x, skew, 0).is_err());
    }

    #[test]
    fn linear_form_parsing_and_rejection() {
        let ring = r3();
        let l = LinearForm::from_polynomial(&p(&ring, "2*x1 - x3")).unwrap();
        assert_eq!(l.coefficients()[0], rat_int(2));
        assert_eq!(l.coefficients()[2], rat_int(-1));
        assert!(LinearForm::from_polynomial(&p(&ring, "x1 + 1")).is_err());
        assert!(LinearForm::from_polynomial(&p(&ring, "x1^2")).is_err());
        assert!(LinearForm::new(vec![rat(0, 1); 3]).is_err());
    }
}
