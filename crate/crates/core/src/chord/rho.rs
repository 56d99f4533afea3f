//! Local multiplicities of the slicing form at branch points.
//!
//! Near a branch point the slicing form `L`, restricted to the fiber curve,
//! behaves like `c_i + (unit) * s^rho` in a local coordinate `s`; `rho` is the
//! number of fiber points over a nearby level set that merge into the branch
//! point.  We read `rho` off a plane projection of the curve: eliminate the
//! ambient variables from the fiber system together with `L - c` and
//! `u - gamma . x` for a random integer covector `gamma`.  The result is a
//! plane curve `R(c, u) = 0` through which every fiber point passes at
//! `(c, u) = (L(z), gamma . z)`; specializing `c` to a branch value and
//! counting the roots of `R(c_i, u)` that cluster at `u = gamma . z_i` gives
//! the multiplicity, provided `gamma` separates the points over each branch
//! value.  A draw of `gamma` is rejected (and retried) unless the clusters
//! are cleanly separated and the counts pass basic sanity checks.
//!
//! Root finding happens in the rescaled variable `w = u / s`, where `s` is
//! the magnitude of the group's `u`-coordinates: branch points can sit at
//! coordinates of size 1e2-1e3, and comparing or trimming raw coefficients at
//! that scale silently discards terms that still dominate near the roots.
//!
//! Clustering uses two radii.  Roots within the tight `CLUSTER_RADIUS` of a
//! branch point's `w`-coordinate are counted as merging there; the annulus
//! out to `GUARD_RADIUS` must be empty of roots, because a root in that
//! in-between zone (a stray sheet of the same level set that `gamma` happened
//! to project nearby) would make the count ambiguous.  Ambiguity rejects the
//! draw rather than risking a miscount.

use super::ChordError;
use crate::ideal::{eliminate, Budget, IdealHandle};
use crate::poly::{fresh_var_name, rat_int, rational_to_f64, Polynomial, Ring};
use crate::seed::subseed;
use crate::solve::SolutionPoint;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ATTEMPTS: usize = 5;
/// Relative threshold below which trailing coefficients of the rescaled
/// specialized polynomial are treated as exactly zero.
const COEFF_TRIM: f64 = 1e-10;
/// Tolerance for grouping branch points by their branch value.
const VALUE_TOL: f64 = 1e-6;
/// Roots of the rescaled section within this distance of a branch point's
/// `w`-coordinate belong to its cluster.  Clusters of a true `rho`-fold root
/// have observed diameters well under 1e-5, so this leaves headroom.
const CLUSTER_RADIUS: f64 = 3e-4;
/// No root may lie between `CLUSTER_RADIUS` and this distance: such a root
/// would sit too close to tell whether it merges at the branch point.
const GUARD_RADIUS: f64 = 1e-2;

/// Computes the local multiplicity of the slicing form at each branch point.
///
/// `values[i]` must be the slicing-form value at `points[i]`, and `degree` is
/// the slice degree of the fiber (an upper bound for any cluster sum).
pub(crate) fn branch_multiplicities(
    fiber: &IdealHandle,
    l_poly: &Polynomial,
    points: &[SolutionPoint],
    values: &[Complex64],
    degree: u64,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<u64>, ChordError> {
    assert_eq!(points.len(), values.len());
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let ring = fiber.ring();
    let m = ring.var_count();

    // Group point indices by (approximately) equal branch value.
    let mut groups: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.iter_mut().find(|(w, _)| (v - *w).norm() <= VALUE_TOL) {
            Some((_, idxs)) => idxs.push(i),
            None => groups.push((v, vec![i])),
        }
    }

    'attempt: for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 40 + attempt as u64));
        // Every component of gamma is nonzero: branch points that differ in a
        // single coordinate (common under coordinate symmetry) would project
        // on top of each other whenever that component vanished.
        let gamma: Vec<i64> = (0..m)
            .map(|_| loop {
                let g = rng.gen_range(-3i64..=3);
                if g != 0 {
                    break g;
                }
            })
            .collect();

        // Plane projection: eliminate the ambient variables from
        // {fiber, L - c, u - gamma . x}.
        let mut names: Vec<String> = ring.var_names().to_vec();
        let c_name = fresh_var_name("c", &names);
        names.push(c_name);
        let u_name = fresh_var_name("u", &names);
        names.push(u_name);
        let ext = Ring::new(names);
        let id_map: Vec<usize> = (0..m).collect();
        let c_var = Polynomial::variable(&ext, m);
        let u_var = Polynomial::variable(&ext, m + 1);

        let mut gens: Vec<Polynomial> = fiber
            .generators()
            .iter()
            .map(|g| g.embed(&ext, &id_map))
            .collect();
        gens.push(&l_poly.embed(&ext, &id_map) - &c_var);
        let mut gamma_dot = Polynomial::zero(&ext);
        for (j, &g) in gamma.iter().enumerate() {
            if g != 0 {
                gamma_dot = &gamma_dot + &Polynomial::variable(&ext, j).scale(&rat_int(g));
            }
        }
        gens.push(&u_var - &gamma_dot);
        let graph = IdealHandle::new(&ext, gens);
        let plane = eliminate(&graph, &id_map, budget)?;

        // Pick the lowest-degree generator that actually involves u.
        let curve = plane
            .generators()
            .iter()
            .filter(|g| g.degree_in_var(1) >= 1)
            .min_by_key(|g| (g.total_degree().unwrap_or(0), g.degree_in_var(1)));
        let curve = match curve {
            Some(c) => c,
            None => continue 'attempt,
        };
        let max_u = curve.degree_in_var(1) as usize;

        // Projected u-coordinate of each branch point.
        let u_of: Vec<Complex64> = points
            .iter()
            .map(|pt| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &g) in gamma.iter().enumerate() {
                    acc += Complex64::new(g as f64, 0.0) * pt.coordinates[j];
                }
                acc
            })
            .collect();

        let mut rho = vec![0u64; points.len()];
        for (value, idxs) in &groups {
            // Work in w = u / scale so that the branch points of this group
            // sit at magnitude about one.
            let scale = idxs.iter().map(|&i| u_of[i].norm()).fold(1.0, f64::max);
            let w_of: Vec<(usize, Complex64)> =
                idxs.iter().map(|&i| (i, u_of[i] / scale)).collect();

            // Cluster and guard radii, capped by the smallest separation
            // gamma achieves within the group so sibling clusters stay
            // disjoint (guard balls of radius w_sep/3 cannot overlap).
            let mut w_sep = f64::INFINITY;
            for a in 0..w_of.len() {
                for b in (a + 1)..w_of.len() {
                    w_sep = w_sep.min((w_of[a].1 - w_of[b].1).norm());
                }
            }
            if w_sep < 1e-6 {
                continue 'attempt; // gamma fails to separate this group
            }
            let (r_in, r_out) = if w_sep.is_finite() {
                ((w_sep / 30.0).min(CLUSTER_RADIUS), (w_sep / 3.0).min(GUARD_RADIUS))
            } else {
                (CLUSTER_RADIUS, GUARD_RADIUS)
            };

            // Specialize c to the branch value and pass to the w variable:
            // the coefficient of w^j picks up a factor scale^j.
            let mut coeffs = vec![Complex64::new(0.0, 0.0); max_u + 1];
            for (mono, coef) in curve.terms() {
                let exps = mono.exps();
                let (c_exp, u_exp) = (exps[0], exps[1] as usize);
                coeffs[u_exp] += Complex64::new(rational_to_f64(coef), 0.0) * value.powu(c_exp);
            }
            let mut power = 1.0;
            for c in coeffs.iter_mut() {
                *c *= Complex64::new(power, 0.0);
                power *= scale;
            }
            let max_abs = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if max_abs == 0.0 {
                continue 'attempt;
            }
            let top = match coeffs.iter().rposition(|c| c.norm() > COEFF_TRIM * max_abs) {
                Some(t) if t >= 1 => t,
                _ => continue 'attempt,
            };
            coeffs.truncate(top + 1);
            let roots = crate::solve::complex_roots(&coeffs);

            // Count roots clustering at each branch point's w-coordinate,
            // requiring disjoint clusters and an empty isolation annulus.
            let mut used = vec![false; roots.len()];
            let mut cluster_sum = 0u64;
            for &(i, w_i) in &w_of {
                let mut count = 0u64;
                for (k, &root) in roots.iter().enumerate() {
                    let dist = (root - w_i).norm();
                    if dist <= r_in {
                        if used[k] {
                            continue 'attempt; // overlapping clusters
                        }
                        used[k] = true;
                        count += 1;
                    } else if dist <= r_out {
                        continue 'attempt; // stray root too close to call
                    }
                }
                if count < 2 {
                    continue 'attempt; // a branch point must absorb >= 2 sheets
                }
                rho[i] = count;
                cluster_sum += count;
            }
            if cluster_sum > degree {
                continue 'attempt; // clusters caught unrelated roots
            }
        }
        return Ok(rho);
    }
    Err(ChordError::BranchSeparationFailed { attempts: ATTEMPTS })
}
