//! Chord-fiber analysis of a sliced midpoint problem.
//!
//! For a problem with varieties `X`, `Y` in the same ambient space and a
//! slicing linear form `L`, the fiber over a target point `p` is the set of
//! chords of `X × Y` with midpoint `p`, encoded by the system
//! `f(x) = 0, g(2p - x) = 0` in the ambient variables.  This module computes,
//! per target point:
//!
//! * the slice degree `d` (points of the fiber on a generic level set of `L`),
//! * the branch points of `L` restricted to the fiber and their local
//!   multiplicities,
//! * the fiber Euler characteristic `chi = d - sum (rho_i - 1)`,
//!
//! together with bulk operations: sampling the generic Euler characteristic,
//! invariance checks across slicing forms, escape-to-infinity probes, grid
//! scans, and numeric continuation of fiber points between target points.

mod experiment;
mod rho;
mod scan;
mod transport;

pub use experiment::{generic_h_experiment, HExperimentReport, HTrial, HTrialOutcome};
pub use scan::{scan, GridAxis, GridSpec, ScanCell, ScanResult};
pub use transport::{transport_fiber_point, TransportResult};

use crate::ideal::{Budget, IdealError, IdealHandle};
use crate::poly::{jacobian, rat_int, rational_to_f64, PolyMatrix, Polynomial, Rational};
use crate::report::KvReport;
use crate::seed::{subseed, text_tag};
use crate::solve::{solve, SolutionSet, SolveError};
use crate::variety::{choose_admissible_l, k0_closure, l_infinity_of_surplus, surplus_locus, LinearForm, MidpointProblem, VarietyError};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

/// Residual below which a target point is treated as lying on the closure of
/// the branch-value locus.
pub const ON_LOCUS_RESIDUAL: f64 = 1e-8;

/// Residual below which a *randomly drawn* sample point is rejected as too
/// close to a bad locus (much stricter than the on-locus gate).
pub const SAMPLE_REJECT_RESIDUAL: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum ChordError {
    #[error("the problem carries no slicing linear form")]
    MissingLinearForm,
    #[error("slice counts disagree across random level sets: {counts:?}")]
    DegreeDisagreement { counts: Vec<u64> },
    #[error("fiber Euler characteristic is undefined at this point: {status}")]
    NotGeneric { status: FiberStatus },
    #[error("generic Euler characteristic disagrees across sample points: {details}")]
    MuDisagreement { details: String },
    #[error("no acceptable sample point found after {attempts} draws")]
    SampleDrawExhausted { attempts: usize },
    #[error("branch points could not be separated after {attempts} projection attempts")]
    BranchSeparationFailed { attempts: usize },
    #[error("all {trials} random moves were skipped ({reason})")]
    AllTrialsSkipped { trials: usize, reason: String },
    #[error("Euler characteristics disagree across random moves: {values:?}")]
    MuMismatchAcrossH { values: Vec<i64> },
    #[error("level set {value} of the slicing form misses the fiber")]
    EmptySlice { value: f64 },
    #[error("start point residual {residual:.3e} exceeds the transport tolerance")]
    BadStartPoint { residual: f64 },
    #[error("linear system singular during transport at t = {t:.4}")]
    SingularTransport { t: f64 },
    #[error("transport residual {residual:.3e} blew up at t = {t:.4}")]
    ResidualBlowUp { t: f64, residual: f64 },
    #[error("transport path passes within residual {residual:.3e} of the branch-value locus at t = {t:.4}")]
    PathHitsBranchLocus { t: f64, residual: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// Classification of one fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberStatus {
    /// Off the branch-value locus: degree and Euler characteristic computed.
    Generic,
    /// On (or numerically indistinguishable from) the closure of the
    /// branch-value locus; the generic-fiber invariants do not apply.
    OnBranchLocus,
}

impl fmt::Display for FiberStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberStatus::Generic => write!(f, "generic"),
            FiberStatus::OnBranchLocus => write!(f, "on_k0_closure"),
        }
    }
}

/// Everything computed about the fiber over one target point.
#[derive(Debug, Clone)]
pub struct ChordFiberReport {
    /// The target point, in the coordinates of the target space.
    pub point: Vec<Rational>,
    pub status: FiberStatus,
    /// Normalized residual of the point against the branch-value hypersurface.
    pub branch_locus_residual: f64,
    /// Slice degree `d` of `L` restricted to the fiber.
    pub degree: Option<u64>,
    /// Branch points of `L` on the fiber, in ambient coordinates.
    pub branch_points: Option<SolutionSet>,
    /// Distinct critical values of `L` on the fiber.
    pub branch_values: Vec<Complex64>,
    /// Local multiplicity of `L` at each branch point (same order as
    /// `branch_points`); each entry is at least 2.
    pub multiplicities: Vec<u64>,
    /// `d - sum (rho_i - 1)`; `None` unless the status is generic.
    pub euler: Option<i64>,
}

impl ChordFiberReport {
    /// Number of branch points.
    pub fn branch_count(&self) -> usize {
        self.branch_points.as_ref().map_or(0, |s| s.points.len())
    }

    /// Appends the report fields to a key/value report.
    pub fn write_kv(&self, kv: &mut KvReport) {
        let coords: Vec<String> = self.point.iter().map(|c| c.to_string()).collect();
        kv.push("point", coords.join(","));
        kv.push("status", &self.status);
        kv.push("k0_residual", format!("{:.6e}", self.branch_locus_residual));
        if let Some(d) = self.degree {
            kv.push("slice_degree", d);
        }
        if self.status == FiberStatus::Generic {
            kv.push("branch_point_count", self.branch_count());
            let values: Vec<String> = self
                .branch_values
                .iter()
                .map(|v| format!("{:.9}{:+.9}i", v.re, v.im))
                .collect();
            kv.push("branch_values", values.join(";"));
            let rho: Vec<String> = self.multiplicities.iter().map(u64::to_string).collect();
            kv.push("branch_multiplicities", rho.join(","));
        }
        if let Some(chi) = self.euler {
            kv.push("euler_characteristic", chi);
        }
    }
}

/// Outcome of sampling the Euler characteristic at random generic points.
#[derive(Debug, Clone)]
pub struct MuReport {
    /// The common Euler characteristic of all sampled fibers.
    pub mu: i64,
    pub points: Vec<Vec<Rational>>,
    pub eulers: Vec<i64>,
}

/// Euler characteristics of one fiber under several slicing forms.
#[derive(Debug, Clone)]
pub struct LInvarianceReport {
    /// The forms tried, starting with the analyzer's own.
    pub forms: Vec<LinearForm>,
    pub eulers: Vec<i64>,
    pub consistent: bool,
}

/// One step of the escape-to-infinity probe.
#[derive(Debug, Clone)]
pub struct ProbeStep {
    /// The level-set value of the slicing form.
    pub slice_value: f64,
    /// Number of fiber points on the level set, counted with multiplicity.
    pub count: u64,
    /// Largest coordinate norm among those points.
    pub max_coordinate_norm: f64,
}

/// Escape-to-infinity probe along a doubling sequence of slice values.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub point: Vec<Rational>,
    pub steps: Vec<ProbeStep>,
    /// Whether the largest coordinate norm never decreased (up to a relative
    /// slack of 1e-6) from the first level whose slice value exceeds the
    /// starting norm.  Earlier levels are dominated by the base point's own
    /// scale and may rebalance slightly before the slice takes over.
    pub max_norm_monotone: bool,
    /// The last (largest) slice value visited.
    pub final_slice_value: f64,
}

/// The system cutting out the fiber over `p`: the equations of `X` in the
/// ambient variables together with the equations of `Y` composed with the
/// point reflection `x -> 2p - x`.
pub fn fiber_ideal(problem: &MidpointProblem, p: &[Rational]) -> IdealHandle {
    let ring = problem.ring();
    let m = ring.var_count();
    assert_eq!(p.len(), m, "target point must have {m} coordinates");
    let images: Vec<Polynomial> = (0..m)
        .map(|j| {
            let two_p = Polynomial::constant(ring, &p[j] + &p[j]);
            &two_p - &Polynomial::variable(ring, j)
        })
        .collect();
    let mut gens = problem.x().equations().to_vec();
    for g in problem.y().equations() {
        gens.push(g.compose(&images));
    }
    IdealHandle::new(ring, gens)
}

/// Largest normalized residual of the ideal's generators at a point; small
/// exactly when the point is (numerically) a common zero.
pub fn ideal_residual(ideal: &IdealHandle, point: &[Complex64]) -> f64 {
    ideal
        .generators()
        .iter()
        .map(|g| g.normalized_residual(point))
        .fold(0.0, f64::max)
}

fn complex_point(p: &[Rational]) -> Vec<Complex64> {
    p.iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect()
}

fn point_tag(p: &[Rational]) -> u64 {
    let rendered: Vec<String> = p.iter().map(Rational::to_string).collect();
    text_tag(&rendered.join(","))
}

/// True when a generator list contains a nonzero constant, i.e. the ideal is
/// the whole ring.  Our elimination outputs reduce the unit ideal to `{1}`,
/// so this check is exact for them.
fn is_unit_presentation(ideal: &IdealHandle) -> bool {
    ideal.generators().iter().any(|g| g.total_degree() == Some(0))
}

/// Precomputed loci and settings for per-point fiber analysis.
///
/// Construction computes, once: the branch-value hypersurface (closure of the
/// critical values of the midpoint map), the surplus critical locus of the
/// sliced map, and the non-properness locus at infinity.  Every subsequent
/// operation draws a fresh work budget so that one expensive call cannot
/// starve later ones.
pub struct ChordAnalyzer {
    problem: MidpointProblem,
    l_form: LinearForm,
    l_poly: Polynomial,
    k0: IdealHandle,
    surplus: IdealHandle,
    l_infinity: IdealHandle,
    budget_limit: Option<u64>,
}

impl ChordAnalyzer {
    /// Builds the analyzer; `budget_limit` caps the Groebner work per
    /// operation (`None` means unlimited).
    pub fn new(problem: MidpointProblem, budget_limit: Option<u64>) -> Result<ChordAnalyzer, ChordError> {
        let l_form = problem.l().ok_or(ChordError::MissingLinearForm)?.clone();
        let l_poly = l_form.to_polynomial(problem.ring());
        let budget = make_budget(budget_limit);
        let k0 = k0_closure(&problem, &budget)?;
        let budget = make_budget(budget_limit);
        let surplus = surplus_locus(&problem, &budget)?;
        let budget = make_budget(budget_limit);
        let l_infinity = l_infinity_of_surplus(&problem, &surplus, &budget)?;
        Ok(ChordAnalyzer {
            problem,
            l_form,
            l_poly,
            k0,
            surplus,
            l_infinity,
            budget_limit,
        })
    }

    pub fn problem(&self) -> &MidpointProblem {
        &self.problem
    }

    pub fn slicing_form(&self) -> &LinearForm {
        &self.l_form
    }

    /// Closure of the branch-value locus in the target space.
    pub fn branch_value_locus(&self) -> &IdealHandle {
        &self.k0
    }

    /// Critical points of the sliced map that are not critical for the
    /// unsliced midpoint map.
    pub fn surplus_locus(&self) -> &IdealHandle {
        &self.surplus
    }

    /// Non-properness locus of the sliced map in the target space.
    pub fn infinity_locus(&self) -> &IdealHandle {
        &self.l_infinity
    }

    pub fn budget_limit(&self) -> Option<u64> {
        self.budget_limit
    }

    fn budget(&self) -> Budget {
        make_budget(self.budget_limit)
    }

    /// Normalized residual of a target point against the branch-value locus.
    pub fn branch_locus_residual(&self, p: &[Complex64]) -> f64 {
        ideal_residual(&self.k0, p)
    }

    /// Slice degree of the fiber over `p`: the number of fiber points (with
    /// multiplicity) on a random level set of `L`, majority-voted over
    /// `trials` independent level values.
    pub fn slice_degree(&self, p: &[Rational], trials: usize, seed: u64) -> Result<u64, ChordError> {
        self.slice_degree_with_l(p, &self.l_poly, trials, seed)
    }

    fn slice_degree_with_l(
        &self,
        p: &[Rational],
        l_poly: &Polynomial,
        trials: usize,
        seed: u64,
    ) -> Result<u64, ChordError> {
        assert!(trials >= 1);
        let fiber = fiber_ideal(&self.problem, p);
        let ring = fiber.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0x51ce));
        let mut counts = Vec::with_capacity(trials);
        for _ in 0..trials {
            let c = loop {
                let num = rng.gen_range(-60i64..=60);
                let den = rng.gen_range(1i64..=9);
                if num != 0 {
                    break Rational::new(num.into(), den.into());
                }
            };
            let mut gens = fiber.generators().to_vec();
            gens.push(l_poly - &Polynomial::constant(ring, c));
            let sliced = IdealHandle::new(ring, gens);
            counts.push(crate::solve::count_with_multiplicity(&sliced, &self.budget())?);
        }
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        let majority = sorted[sorted.len() / 2];
        if counts.iter().filter(|&&c| c == majority).count() * 2 > counts.len() {
            Ok(majority)
        } else {
            Err(ChordError::DegreeDisagreement { counts })
        }
    }

    /// The system whose solutions are the branch points of `L` on the fiber
    /// over `p`: the fiber equations plus the determinant of the Jacobian of
    /// (fiber equations, L).
    pub fn branch_system(&self, p: &[Rational]) -> IdealHandle {
        self.branch_system_with_l(p, &self.l_poly)
    }

    fn branch_system_with_l(&self, p: &[Rational], l_poly: &Polynomial) -> IdealHandle {
        let fiber = fiber_ideal(&self.problem, p);
        let ring = fiber.ring();
        let m = ring.var_count();
        let mut system = fiber.generators().to_vec();
        system.push(l_poly.clone());
        let vars: Vec<usize> = (0..m).collect();
        let jac: PolyMatrix = jacobian(&system, &vars);
        let det = jac.determinant().integer_normalized();
        let mut gens = fiber.generators().to_vec();
        gens.push(det);
        IdealHandle::new(ring, gens)
    }

    /// Full per-point analysis.  The derived per-point randomness makes the
    /// result a pure function of the analyzer inputs and `p`.
    pub fn fiber_report(&self, p: &[Rational]) -> Result<ChordFiberReport, ChordError> {
        let seed = subseed(self.problem.seed(), point_tag(p));
        self.fiber_report_with_l(p, &self.l_form, seed)
    }

    /// Per-point analysis under an alternative slicing form.  The
    /// branch-value locus is a property of the unsliced map, so the
    /// precomputed locus still applies.
    pub fn fiber_report_with_l(
        &self,
        p: &[Rational],
        l: &LinearForm,
        seed: u64,
    ) -> Result<ChordFiberReport, ChordError> {
        let l_poly = l.to_polynomial(self.problem.ring());
        let pf = complex_point(p);
        let residual = self.branch_locus_residual(&pf);
        if residual < ON_LOCUS_RESIDUAL {
            return Ok(ChordFiberReport {
                point: p.to_vec(),
                status: FiberStatus::OnBranchLocus,
                branch_locus_residual: residual,
                degree: None,
                branch_points: None,
                branch_values: Vec::new(),
                multiplicities: Vec::new(),
                euler: None,
            });
        }

        let d = self.slice_degree_with_l(p, &l_poly, 3, subseed(seed, 1))?;
        let branch = self.branch_system_with_l(p, &l_poly);
        let solutions = match solve(&branch, &self.budget()) {
            Ok(s) => s,
            // A positive-dimensional branch system means the slicing form is
            // constant on a component of the fiber, which only happens over
            // the branch-value locus.
            Err(SolveError::PositiveDimensional { .. }) => {
                return Ok(ChordFiberReport {
                    point: p.to_vec(),
                    status: FiberStatus::OnBranchLocus,
                    branch_locus_residual: residual,
                    degree: Some(d),
                    branch_points: None,
                    branch_values: Vec::new(),
                    multiplicities: Vec::new(),
                    euler: None,
                });
            }
            Err(e) => return Err(e.into()),
        };

        let values: Vec<Complex64> = solutions
            .points
            .iter()
            .map(|pt| {
                l_poly
                    .evaluate_complex(&pt.coordinates)
                    .expect("branch point has ambient dimension")
            })
            .collect();
        let distinct = dedup_values(&values, 1e-6);

        let fiber = fiber_ideal(&self.problem, p);
        let rho = if solutions.points.is_empty() {
            Vec::new()
        } else {
            rho::branch_multiplicities(
                &fiber,
                &l_poly,
                &solutions.points,
                &values,
                d,
                subseed(seed, 2),
                &self.budget(),
            )?
        };
        let ramification: u64 = rho.iter().map(|&r| r - 1).sum();
        let chi = d as i64 - ramification as i64;

        Ok(ChordFiberReport {
            point: p.to_vec(),
            status: FiberStatus::Generic,
            branch_locus_residual: residual,
            degree: Some(d),
            branch_points: Some(solutions),
            branch_values: distinct,
            multiplicities: rho,
            euler: Some(chi),
        })
    }

    /// Euler characteristic of the fiber over `p`; errors when the point lies
    /// on the branch-value locus.
    pub fn euler_characteristic(&self, p: &[Rational]) -> Result<i64, ChordError> {
        let report = self.fiber_report(p)?;
        match report.euler {
            Some(chi) => Ok(chi),
            None => Err(ChordError::NotGeneric { status: report.status }),
        }
    }

    /// Draws a random rational target point that is comfortably away from the
    /// branch-value locus and the locus at infinity.
    fn draw_generic_point(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>, ChordError> {
        const ATTEMPTS: usize = 200;
        let m = self.problem.ambient_dimension();
        let linf_is_unit = is_unit_presentation(&self.l_infinity);
        for _ in 0..ATTEMPTS {
            let p: Vec<Rational> = (0..m)
                .map(|_| {
                    let num = rng.gen_range(-255i64..=255);
                    let den = rng.gen_range(1i64..=255);
                    Rational::new(num.into(), den.into())
                })
                .collect();
            let pf = complex_point(&p);
            if self.branch_locus_residual(&pf) < SAMPLE_REJECT_RESIDUAL {
                continue;
            }
            if !linf_is_unit && ideal_residual(&self.l_infinity, &pf) < SAMPLE_REJECT_RESIDUAL {
                continue;
            }
            return Ok(p);
        }
        Err(ChordError::SampleDrawExhausted { attempts: ATTEMPTS })
    }

    /// Samples `samples` random generic target points and checks that the
    /// fiber Euler characteristic is the same at all of them; that common
    /// value is the generic-fiber invariant of the problem.
    pub fn mu_invariant(&self, samples: usize, seed: u64) -> Result<MuReport, ChordError> {
        assert!(samples >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(subseed(self.problem.seed(), seed));
        let mut points = Vec::with_capacity(samples);
        let mut eulers = Vec::with_capacity(samples);
        for s in 0..samples {
            let p = self.draw_generic_point(&mut rng)?;
            let report = self.fiber_report_with_l(&p, &self.l_form, subseed(seed, 500 + s as u64))?;
            let chi = report
                .euler
                .ok_or(ChordError::NotGeneric { status: report.status })?;
            points.push(p);
            eulers.push(chi);
        }
        let mu = eulers[0];
        if eulers.iter().all(|&chi| chi == mu) {
            Ok(MuReport { mu, points, eulers })
        } else {
            let details: Vec<String> = points
                .iter()
                .zip(&eulers)
                .map(|(p, chi)| {
                    let coords: Vec<String> = p.iter().map(Rational::to_string).collect();
                    format!("({}) -> {chi}", coords.join(","))
                })
                .collect();
            Err(ChordError::MuDisagreement { details: details.join("; ") })
        }
    }

    /// Recomputes the Euler characteristic of the fiber over `p` under
    /// `trials` further admissible slicing forms and reports whether all
    /// values (including the analyzer's own form) agree.
    pub fn l_invariance_check(
        &self,
        p: &[Rational],
        trials: usize,
        seed: u64,
    ) -> Result<LInvarianceReport, ChordError> {
        let mut forms = vec![self.l_form.clone()];
        let mut eulers = vec![self.euler_characteristic(p)?];
        for t in 0..trials {
            let l = choose_admissible_l(&self.problem, subseed(seed, 7700 + t as u64), &self.budget())?;
            let report = self.fiber_report_with_l(p, &l, subseed(seed, 7800 + t as u64))?;
            let chi = report
                .euler
                .ok_or(ChordError::NotGeneric { status: report.status })?;
            forms.push(l);
            eulers.push(chi);
        }
        let consistent = eulers.iter().all(|&chi| chi == eulers[0]);
        Ok(LInvarianceReport { forms, eulers, consistent })
    }

    /// Follows the level sets `L = c` for a doubling sequence of values `c`
    /// past 1e6, recording the point count and the largest coordinate norm at
    /// each level.  On a fiber that escapes to infinity the norm grows
    /// monotonically without bound.
    pub fn properness_probe(&self, seed: u64) -> Result<ProbeReport, ChordError> {
        let mut rng = ChaCha8Rng::seed_from_u64(subseed(self.problem.seed(), seed ^ 0x9806e));
        let p = self.draw_generic_point(&mut rng)?;
        let fiber = fiber_ideal(&self.problem, &p);
        let ring = fiber.ring();

        let mut steps = Vec::new();
        let mut c = rat_int(rng.gen_range(3i64..=9));
        loop {
            let c_f64 = rational_to_f64(&c);
            let mut gens = fiber.generators().to_vec();
            gens.push(&self.l_poly - &Polynomial::constant(ring, c.clone()));
            let sliced = IdealHandle::new(ring, gens);
            let sols = solve(&sliced, &self.budget())?;
            if sols.points.is_empty() {
                return Err(ChordError::EmptySlice { value: c_f64 });
            }
            let max_norm = sols
                .points
                .iter()
                .flat_map(|pt| pt.coordinates.iter())
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            steps.push(ProbeStep {
                slice_value: c_f64,
                count: sols.total_multiplicity,
                max_coordinate_norm: max_norm,
            });
            if c_f64 > 1e6 {
                break;
            }
            c = &c + &c;
        }

        let start_norm = steps.first().map_or(0.0, |s| s.max_coordinate_norm);
        let tail_from = steps
            .iter()
            .position(|s| s.slice_value >= start_norm)
            .unwrap_or(0);
        let max_norm_monotone = steps[tail_from..].windows(2).all(|w| {
            w[1].max_coordinate_norm >= w[0].max_coordinate_norm * (1.0 - 1e-6)
        });
        let final_slice_value = steps.last().map_or(0.0, |s| s.slice_value);
        Ok(ProbeReport { point: p, steps, max_norm_monotone, final_slice_value })
    }
}

pub(crate) fn make_budget(limit: Option<u64>) -> Budget {
    match limit {
        Some(n) => Budget::new(n),
        None => Budget::unlimited(),
    }
}

/// Greedy clustering of complex values with an absolute tolerance.
fn dedup_values(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut distinct: Vec<Complex64> = Vec::new();
    for &v in values {
        if !distinct.iter().any(|&w| (v - w).norm() <= tol) {
            distinct.push(v);
        }
    }
    distinct
}
