//! Krull dimension of the variety cut out by an ideal, the quotient
//! vector-space dimension in the zero-dimensional case, and the degree of
//! the variety via random linear slicing.

use super::{groebner, Budget, GroebnerBasis, IdealError, IdealHandle, MonomialOrder};
use crate::poly::{rat_int, Monomial, Polynomial};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dimension of `V(ideal)` as an affine variety, where the empty variety has
/// dimension `-1` and the whole space (zero ideal) has the full dimension.
///
/// Computed from any graded Groebner basis as the size of the largest set
/// `S` of variables such that no leading monomial involves only variables
/// from `S` (a maximal independent set modulo the leading-term ideal).
pub fn dimension(ideal: &IdealHandle, budget: &Budget) -> Result<i64, IdealError> {
    let gb = groebner(ideal, MonomialOrder::GrevLex, budget)?;
    Ok(dimension_of_basis(&gb))
}

/// Dimension from an already-computed graded basis.
pub fn dimension_of_basis(gb: &GroebnerBasis) -> i64 {
    if gb.is_unit() {
        return -1;
    }
    let n = gb.ring().var_count();
    assert!(n <= 64, "dimension search uses 64-bit variable masks");
    let supports: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.support().fold(0u64, |acc, v| acc | (1u64 << v)))
        .collect();

    // Depth-first search over subsets of variables, largest first thanks to
    // the prune: a set is independent iff it contains no full support.
    fn dfs(idx: usize, mask: u64, size: usize, n: usize, supports: &[u64], best: &mut usize) {
        if size + (n - idx) <= *best {
            return;
        }
        if idx == n {
            *best = (*best).max(size);
            return;
        }
        let with = mask | (1u64 << idx);
        if supports.iter().all(|s| s & !with != 0) {
            dfs(idx + 1, with, size + 1, n, supports, best);
        }
        dfs(idx + 1, mask, size, n, supports, best);
    }

    let mut best = 0usize;
    dfs(0, 0, 0, n, &supports, &mut best);
    best as i64
}

/// Number of standard monomials (monomials outside the leading-term ideal),
/// i.e. the dimension of the quotient ring as a vector space. `None` when
/// the ideal is not zero-dimensional, `Some(0)` for the unit ideal.
///
/// For a zero-dimensional ideal this counts the solutions with
/// multiplicity.
pub fn quotient_dimension(gb: &GroebnerBasis) -> Option<u64> {
    if gb.is_unit() {
        return Some(0);
    }
    let n = gb.ring().var_count();
    let lms = gb.leading_monomials();
    // Zero-dimensional iff some pure power of every variable leads.
    let mut bound = vec![None::<u32>; n];
    for m in lms {
        let sup: Vec<usize> = m.support().collect();
        if sup.len() == 1 {
            let v = sup[0];
            let e = m.exps()[v];
            bound[v] = Some(bound[v].map_or(e, |b: u32| b.min(e)));
        }
    }
    let bound: Option<Vec<u32>> = bound.into_iter().collect();
    let bound = bound?;

    // Walk the exponent box under the pure-power bounds and count monomials
    // no leading monomial divides.
    let mut count = 0u64;
    let mut exps = vec![0u32; n];
    loop {
        let mono = Monomial::from_exps(exps.clone());
        if !lms.iter().any(|m| m.divides(&mono)) {
            count += 1;
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            exps[i] += 1;
            if exps[i] < bound[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Degree of the affine variety `V(ideal)`: the multiplicity-counted number
/// of intersection points with `dim(V)` random affine-linear hyperplanes.
///
/// Two independent slices are drawn and must agree; on disagreement the
/// draw repeats (fresh randomness each time, seeded) up to three attempts
/// before reporting the conflicting counts.
pub fn degree_of_variety(
    ideal: &IdealHandle,
    budget: &Budget,
    seed: u64,
) -> Result<u64, IdealError> {
    let dim = dimension(ideal, budget)?;
    if dim < 0 {
        return Ok(0);
    }
    let count_sliced = |slice_seed: u64| -> Result<u64, IdealError> {
        let mut sliced = ideal.clone();
        if dim > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(slice_seed);
            let mut gens = ideal.generators().to_vec();
            for _ in 0..dim {
                gens.push(random_affine_form(ideal, &mut rng));
            }
            sliced = IdealHandle::new(ideal.ring(), gens);
        }
        crate::solve::count_with_multiplicity(&sliced, budget).map_err(|e| match e {
            crate::solve::SolveError::Ideal(inner) => inner,
            other => IdealError::SolveFailed(other.to_string()),
        })
    };

    const ATTEMPTS: usize = 3;
    let mut counts = Vec::new();
    for attempt in 0..ATTEMPTS {
        let base = seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(attempt as u64 * 2);
        let a = count_sliced(base)?;
        let b = count_sliced(base + 1)?;
        if a == b {
            return Ok(a);
        }
        counts.push(a);
        counts.push(b);
    }
    Err(IdealError::SliceDisagreement { attempts: ATTEMPTS, counts })
}

/// An affine-linear form with small random integer coefficients, at least
/// one of them nonzero.
fn random_affine_form(ideal: &IdealHandle, rng: &mut ChaCha8Rng) -> Polynomial {
    let ring = ideal.ring();
    loop {
        let coeffs: Vec<i64> = (0..ring.var_count()).map(|_| rng.gen_range(-5..=5)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let constant = rng.gen_range(-5..=5i64);
        let mut form = Polynomial::constant(ring, rat_int(constant));
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                form = &form + &Polynomial::variable(ring, i).scale(&rat_int(c));
            }
        }
        return form;
    }
}
