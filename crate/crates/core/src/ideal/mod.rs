//! Polynomial ideals: Groebner bases, normal forms, elimination, saturation,
//! dimension and degree of the associated varieties.
//!
//! All Groebner computations run under an explicit [`Budget`] measured in
//! leading-term reduction steps, so callers can bound worst-case blowups and
//! receive a structured error (with partial-progress statistics) instead of a
//! hang. Returned bases are always fully reduced and monic, which makes them
//! canonical for the given generators and order: two runs over the same input
//! produce byte-identical output.

mod buchberger;
mod dimension;
mod ops;

pub use dimension::{degree_of_variety, dimension, dimension_of_basis, quotient_dimension};
pub use ops::{eliminate, ideal_sum, intersect, saturate, saturate_by_element};

use crate::poly::{same_ring, Monomial, ParseError, Polynomial, Ring};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

/// Term orders understood by the Groebner engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic: the general-purpose order.
    GrevLex,
    /// Pure lexicographic (variable 0 largest): triangularizes
    /// zero-dimensional systems.
    Lex,
    /// Elimination order: monomials are compared first on the flagged block
    /// (by graded reverse lex within it), then on the remaining variables.
    /// Basis elements free of the flagged block generate the elimination
    /// ideal.
    Block { eliminated: Vec<bool> },
}

impl MonomialOrder {
    /// Block order eliminating exactly the listed variable indices.
    pub fn eliminating(ring: &Ring, drop: &[usize]) -> MonomialOrder {
        let mut mask = vec![false; ring.var_count()];
        for &i in drop {
            mask[i] = true;
        }
        MonomialOrder::Block { eliminated: mask }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self {
            MonomialOrder::GrevLex => a.cmp(b),
            MonomialOrder::Lex => {
                for (ea, eb) in a.exps().iter().zip(b.exps()) {
                    match ea.cmp(eb) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { eliminated } => {
                match grevlex_masked(a, b, eliminated, true) {
                    Ordering::Equal => grevlex_masked(a, b, eliminated, false),
                    o => o,
                }
            }
        }
    }
}

/// Graded reverse lex restricted to the variables where `mask == select`.
fn grevlex_masked(
    a: &Monomial,
    b: &Monomial,
    mask: &[bool],
    select: bool,
) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da: u32 = a
        .exps()
        .iter()
        .zip(mask)
        .filter(|(_, m)| **m == select)
        .map(|(e, _)| *e)
        .sum();
    let db: u32 = b
        .exps()
        .iter()
        .zip(mask)
        .filter(|(_, m)| **m == select)
        .map(|(e, _)| *e)
        .sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.exps().len()).rev() {
        if mask[i] != select {
            continue;
        }
        match a.exps()[i].cmp(&b.exps()[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Errors from ideal-level computations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum IdealError {
    #[error(
        "computation budget exhausted after {steps_used} reduction steps \
         (basis size {basis_size}, {pairs_pending} pairs pending)"
    )]
    BudgetExceeded {
        steps_used: u64,
        basis_size: usize,
        pairs_pending: usize,
    },
    #[error("operation requires a proper ideal, got the unit ideal")]
    UnitIdeal,
    #[error("random slices disagreed on the degree after {attempts} attempts: counts {counts:?}")]
    SliceDisagreement { attempts: usize, counts: Vec<u64> },
    #[error("zero-dimensional solve failed during degree computation: {0}")]
    SolveFailed(String),
}

/// A shared step allowance for symbolic computation.
///
/// One unit is charged per leading-term cancellation inside polynomial
/// reduction (plus one per S-polynomial formed), which tracks actual work
/// closely. Clones share the same counter, so a budget can be threaded
/// through nested eliminations and saturations.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: Arc<AtomicU64>,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: Arc::new(AtomicU64::new(0)) }
    }

    /// A budget that will not run out in practice.
    pub fn unlimited() -> Budget {
        Budget::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used.load(AtomicOrdering::Relaxed)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Charges `n` steps; `false` means the budget is spent.
    pub(crate) fn charge(&self, n: u64) -> bool {
        let prev = self.used.fetch_add(n, AtomicOrdering::Relaxed);
        prev.saturating_add(n) <= self.limit
    }
}

/// A list of generators in a fixed ring. The generator list is never empty:
/// the zero ideal is represented by a single zero generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealHandle {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
}

impl IdealHandle {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> IdealHandle {
        let mut kept: Vec<Polynomial> = gens
            .into_iter()
            .inspect(|g| {
                assert!(
                    same_ring(g.ring(), ring),
                    "generator from a different ring"
                )
            })
            .filter(|g| !g.is_zero())
            .collect();
        if kept.is_empty() {
            kept.push(Polynomial::zero(ring));
        }
        IdealHandle { ring: ring.clone(), gens: kept }
    }

    pub fn unit(ring: &Arc<Ring>) -> IdealHandle {
        IdealHandle::new(ring, vec![Polynomial::one(ring)])
    }

    pub fn zero(ring: &Arc<Ring>) -> IdealHandle {
        IdealHandle::new(ring, Vec::new())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    /// True if some generator is a nonzero constant (cheap sufficient check;
    /// use a Groebner basis for the complete test).
    pub fn has_constant_generator(&self) -> bool {
        self.gens.iter().any(|g| !g.is_zero() && g.is_constant())
    }

    /// Renders the generators, one per line, with integer-normalized
    /// coefficients and terms in descending graded-reverse-lex order.
    /// `parse_ideal` accepts this format back.
    pub fn render(&self) -> String {
        let mut lines: Vec<String> = self
            .gens
            .iter()
            .map(|g| g.integer_normalized().to_string())
            .collect();
        lines.sort();
        lines.dedup();
        lines.join("\n")
    }
}

/// Parses a newline-separated generator list (the `render` format).
pub fn parse_ideal(text: &str, ring: &Arc<Ring>) -> Result<IdealHandle, ParseError> {
    let mut gens = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        gens.push(crate::poly::parse_polynomial(line, ring)?);
    }
    Ok(IdealHandle::new(ring, gens))
}

/// A reduced, monic Groebner basis together with its order.
///
/// Reduced means: no leading monomial divides another, and no term of any
/// element is divisible by the leading monomial of a different element. Such
/// a basis is unique for the ideal and order, hence deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    /// True when the basis is `{1}`, i.e. the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0] == Polynomial::one(&self.ring)
    }

    pub fn to_ideal(&self) -> IdealHandle {
        IdealHandle::new(&self.ring, self.elements.clone())
    }

    /// Ideal membership: true iff the normal form of `p` vanishes.
    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Remainder of `p` under multivariate division by the basis.
    ///
    /// For a reduced basis the result is the canonical representative of
    /// `p` modulo the ideal: no term of the output is divisible by any
    /// basis leading monomial.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        assert!(same_ring(p.ring(), &self.ring), "normal form across rings");
        let mut work: Vec<(Monomial, crate::poly::Rational)> = {
            let mut v: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            v.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
            v
        };
        let mut remainder: Vec<(Monomial, crate::poly::Rational)> = Vec::new();
        while let Some((lm, lc)) = work.first().cloned() {
            let reducer = self
                .leading
                .iter()
                .position(|g_lm| g_lm.divides(&lm));
            match reducer {
                None => {
                    remainder.push((lm, lc));
                    work.remove(0);
                }
                Some(gi) => {
                    let shift = self.leading[gi].quotient_of(&lm);
                    // work -= lc * x^shift * g   (g is monic)
                    let mut delta: Vec<(Monomial, crate::poly::Rational)> = self.elements[gi]
                        .terms()
                        .map(|(m, c)| (m.mul(&shift), c * &lc))
                        .collect();
                    delta.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
                    work = merge_sub(work, delta, &self.order);
                }
            }
        }
        Polynomial::from_terms(&self.ring, remainder)
    }
}

/// Sorted-merge computation of `a - b` (both descending in `order`).
fn merge_sub(
    a: Vec<(Monomial, crate::poly::Rational)>,
    b: Vec<(Monomial, crate::poly::Rational)>,
    order: &MonomialOrder,
) -> Vec<(Monomial, crate::poly::Rational)> {
    use num_traits::Zero;
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if i == a.len() {
            out.push((b[j].0.clone(), -b[j].1.clone()));
            j += 1;
        } else if j == b.len() {
            out.push(a[i].clone());
            i += 1;
        } else {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), -b[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 - &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

/// Computes the reduced Groebner basis of `ideal` under `order`.
pub fn groebner(
    ideal: &IdealHandle,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis, IdealError> {
    buchberger::run(ideal, order, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn setup(vars: &[&str], gens: &[&str]) -> (Arc<Ring>, IdealHandle) {
        let ring = Ring::new(vars.to_vec());
        let gens = gens
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        (ring.clone(), IdealHandle::new(&ring, gens))
    }

    #[test]
    fn already_a_basis_stays_put() {
        let (ring, ideal) = setup(&["x", "y"], &["x^2", "x*y"]);
        let gb = groebner(&ideal, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        let rendered = gb.to_ideal().render();
        assert_eq!(rendered, "x*y\nx^2");
        let _ = ring;
    }

    #[test]
    fn linear_pair_reduces_to_coordinates() {
        let (ring, ideal) = setup(&["x", "y"], &["x + y", "x - y"]);
        let gb = groebner(&ideal, MonomialOrder::Lex, &Budget::unlimited()).unwrap();
        let want: Vec<Polynomial> = ["y", "x"]
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        assert_eq!(gb.elements(), &want[..]);
    }

    #[test]
    fn univariate_singleton() {
        let (ring, ideal) = setup(&["x"], &["x^2 - 1"]);
        let gb = groebner(&ideal, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        assert_eq!(gb.elements(), &[parse_polynomial("x^2 - 1", &ring).unwrap()]);
    }

    #[test]
    fn normal_form_examples() {
        let (ring, ideal) = setup(&["x", "y"], &["x^2", "x*y"]);
        let gb = groebner(&ideal, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        let nf = gb.normal_form(&parse_polynomial("x^2*y + x + 1", &ring).unwrap());
        assert_eq!(nf, parse_polynomial("x + 1", &ring).unwrap());
        let member = gb.normal_form(&parse_polynomial("x^3 + x^2*y", &ring).unwrap());
        assert!(member.is_zero());
    }

    #[test]
    fn budget_exhaustion_reports_stats() {
        let (_, ideal) = setup(
            &["x", "y", "z"],
            &["x^4*y - z^3 + 1", "x*z^3 - y^2 - 2", "y^4*z - x^2 - x"],
        );
        let err = groebner(&ideal, MonomialOrder::Lex, &Budget::new(3)).unwrap_err();
        match err {
            IdealError::BudgetExceeded { steps_used, .. } => assert!(steps_used >= 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_ideal_detected() {
        let (_, ideal) = setup(&["x", "y"], &["x", "x + 1"]);
        let gb = groebner(&ideal, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn zero_ideal_has_empty_basis() {
        let ring = Ring::new(["x", "y"]);
        let ideal = IdealHandle::zero(&ring);
        let gb = groebner(&ideal, MonomialOrder::GrevLex, &Budget::unlimited()).unwrap();
        assert!(gb.elements().is_empty());
        assert!(!gb.is_unit());
    }

    #[test]
    fn render_and_parse_round_trip() {
        let (ring, ideal) = setup(&["x", "y"], &["3/2*x^2 - y", "x*y + 1/3"]);
        let text = ideal.render();
        assert_eq!(text, "3*x*y + 1\n3*x^2 - 2*y");
        let back = parse_ideal(&text, &ring).unwrap();
        // Re-rendering is stable even though coefficients were rescaled.
        assert_eq!(back.render(), text);
    }
}
