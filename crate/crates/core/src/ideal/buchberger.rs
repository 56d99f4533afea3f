//! Buchberger's algorithm with the sugar selection strategy and both
//! classical pair-discarding criteria.
//!
//! Internally the engine works over integer-coefficient polynomials with the
//! content (gcd of coefficients) stripped after every reduction. This keeps
//! coefficient growth far below what naive rational arithmetic produces and
//! is the difference between finishing and thrashing on the larger
//! elimination problems this crate generates.

use super::{Budget, GroebnerBasis, IdealError, IdealHandle, MonomialOrder};
use crate::poly::{Monomial, Polynomial, Rational, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::sync::Arc;

/// Integer polynomial with terms sorted descending under the active order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> &(Monomial, BigInt) {
        &self.terms[0]
    }

    fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Divides out the coefficient gcd and makes the leading coefficient
    /// positive.
    fn normalize_content(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut content = BigInt::zero();
        for (_, c) in &self.terms {
            content = content.gcd(c);
        }
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        for (_, c) in &mut self.terms {
            *c = &*c / &content;
        }
    }

    /// Clears denominators and sorts under `order`.
    fn from_polynomial(p: &Polynomial, order: &MonomialOrder) -> IPoly {
        let mut denom_lcm = BigInt::one();
        for (_, c) in p.terms() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| (m.clone(), c.numer() * (&denom_lcm / c.denom())))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out = IPoly { terms };
        out.normalize_content();
        out
    }

    /// Converts to a monic rational polynomial.
    fn to_monic_polynomial(&self, ring: &Arc<Ring>) -> Polynomial {
        let lead = self.terms[0].1.clone();
        let terms = self.terms.iter().map(|(m, c)| {
            (m.clone(), Rational::new(c.clone(), lead.clone()))
        });
        Polynomial::from_terms(ring, terms)
    }
}

/// `a*p - b*x^shift*q` by sorted merge; both inputs descending in `order`.
fn combine(
    p: &IPoly,
    a: &BigInt,
    q: &IPoly,
    b: &BigInt,
    shift: &Monomial,
    order: &MonomialOrder,
) -> IPoly {
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(p.terms.len() + q.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < p.terms.len() || j < q.terms.len() {
        if i == p.terms.len() {
            let (m, c) = &q.terms[j];
            out.push((m.mul(shift), -(b * c)));
            j += 1;
        } else if j == q.terms.len() {
            let (m, c) = &p.terms[i];
            out.push((m.clone(), a * c));
            i += 1;
        } else {
            let qm = q.terms[j].0.mul(shift);
            match order.cmp(&p.terms[i].0, &qm) {
                Ordering::Greater => {
                    out.push((p.terms[i].0.clone(), a * &p.terms[i].1));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((qm, -(b * &q.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a * &p.terms[i].1 - b * &q.terms[j].1;
                    if !c.is_zero() {
                        out.push((qm, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    IPoly { terms: out }
}

/// Fully reduces `p` modulo `basis`, tracking the sugar degree. Charges one
/// budget unit per leading-term cancellation. Returns `None` when the budget
/// runs out.
fn reduce_full(
    mut p: IPoly,
    mut sugar: u32,
    basis: &[BasisElem],
    order: &MonomialOrder,
    budget: &Budget,
) -> Option<(IPoly, u32)> {
    let mut remainder: Vec<(Monomial, BigInt)> = Vec::new();
    while !p.is_zero() {
        let (lm, lc) = p.leading().clone();
        let hit = basis.iter().find(|g| g.lm().divides(&lm));
        match hit {
            None => {
                remainder.push((lm, lc));
                p.terms.remove(0);
            }
            Some(g) => {
                if !budget.charge(1) {
                    return None;
                }
                let shift = g.lm().quotient_of(&lm);
                sugar = sugar.max(g.sugar + shift.degree());
                let g_lc = &g.poly.terms[0].1;
                let theta = lc.gcd(g_lc);
                let a = g_lc / &theta;
                let b = &lc / &theta;
                if !a.magnitude().is_one() {
                    for (_, c) in &mut remainder {
                        *c = &*c * &a;
                    }
                }
                p = combine(&p, &a, &g.poly, &b, &shift, order);
            }
        }
    }
    let mut out = IPoly { terms: remainder };
    out.normalize_content();
    Some((out, sugar))
}

struct BasisElem {
    poly: IPoly,
    sugar: u32,
}

impl BasisElem {
    fn lm(&self) -> &Monomial {
        &self.poly.terms[0].0
    }
}

/// Pending S-pair, ordered by (sugar, lcm degree, lcm, indices) so that the
/// binary heap pops the lowest-sugar pair first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: u32,
    lcm_degree: u32,
    lcm_exps: Vec<u32>,
    i: usize,
    j: usize,
}

fn make_pair(basis: &[BasisElem], i: usize, j: usize) -> Pair {
    let lcm = basis[i].lm().lcm(basis[j].lm());
    let sugar_i = basis[i].sugar + lcm.degree() - basis[i].lm().degree();
    let sugar_j = basis[j].sugar + lcm.degree() - basis[j].lm().degree();
    Pair {
        sugar: sugar_i.max(sugar_j),
        lcm_degree: lcm.degree(),
        lcm_exps: lcm.exps().to_vec(),
        i,
        j,
    }
}

pub(super) fn run(
    ideal: &IdealHandle,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis, IdealError> {
    let ring = ideal.ring().clone();

    // Deterministic starting basis: drop zeros, sort, dedupe.
    let mut inputs: Vec<IPoly> = ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| IPoly::from_polynomial(g, &order))
        .collect();
    inputs.sort_by(|p, q| {
        let key = |t: &IPoly| {
            t.terms
                .iter()
                .map(|(m, c)| (Reverse(m.exps().to_vec()), c.clone()))
                .collect::<Vec<_>>()
        };
        order
            .cmp(&q.terms[0].0, &p.terms[0].0)
            .then_with(|| key(p).cmp(&key(q)))
    });
    inputs.dedup();

    let mut basis: Vec<BasisElem> = Vec::new();
    let mut heap: BinaryHeap<Reverse<Pair>> = BinaryHeap::new();
    let mut retired: BTreeSet<(usize, usize)> = BTreeSet::new();

    let add_element = |elem: IPoly,
                           sugar: u32,
                           basis: &mut Vec<BasisElem>,
                           heap: &mut BinaryHeap<Reverse<Pair>>| {
        let t = basis.len();
        basis.push(BasisElem { poly: elem, sugar });
        for i in 0..t {
            heap.push(Reverse(make_pair(basis, i, t)));
        }
    };

    for p in inputs {
        let sugar = p.total_degree();
        // Interreduce inputs on the way in so redundant generators vanish.
        match reduce_full(p, sugar, &basis, &order, budget) {
            None => return Err(exhausted(budget, &basis, &heap)),
            Some((r, s)) => {
                if !r.is_zero() {
                    add_element(r, s, &mut basis, &mut heap);
                }
            }
        }
    }

    while let Some(Reverse(pair)) = heap.pop() {
        let (i, j) = (pair.i, pair.j);
        retired.insert((i, j));

        // Coprime leading monomials: the S-polynomial reduces to zero.
        if basis[i].lm().coprime(basis[j].lm()) {
            continue;
        }
        // Chain criterion: a third element divides the lcm and both side
        // pairs are already handled.
        let lcm = Monomial::from_exps(pair.lcm_exps.clone());
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && retired.contains(&(i.min(k), i.max(k)))
                && retired.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }

        if !budget.charge(1) {
            return Err(exhausted(budget, &basis, &heap));
        }
        let shift_i = basis[i].lm().quotient_of(&lcm);
        let shift_j = basis[j].lm().quotient_of(&lcm);
        let lc_i = &basis[i].poly.terms[0].1;
        let lc_j = &basis[j].poly.terms[0].1;
        let theta = lc_i.gcd(lc_j);
        // S = (lc_j/theta) x^{shift_i} g_i - (lc_i/theta) x^{shift_j} g_j.
        let scaled_i = IPoly {
            terms: basis[i]
                .poly
                .terms
                .iter()
                .map(|(m, c)| (m.mul(&shift_i), c.clone()))
                .collect(),
        };
        let s_poly = combine(
            &scaled_i,
            &(lc_j / &theta),
            &basis[j].poly,
            &(lc_i / &theta),
            &shift_j,
            &order,
        );
        if s_poly.is_zero() {
            continue;
        }
        let sugar = make_pair(&basis, i, j).sugar;
        match reduce_full(s_poly, sugar, &basis, &order, budget) {
            None => return Err(exhausted(budget, &basis, &heap)),
            Some((r, s)) => {
                if !r.is_zero() {
                    add_element(r, s, &mut basis, &mut heap);
                }
            }
        }
    }

    Ok(finalize(ring, order, basis))
}

fn exhausted(
    budget: &Budget,
    basis: &[BasisElem],
    heap: &BinaryHeap<Reverse<Pair>>,
) -> IdealError {
    IdealError::BudgetExceeded {
        steps_used: budget.used(),
        basis_size: basis.len(),
        pairs_pending: heap.len(),
    }
}

/// Minimalizes, tail-reduces and sorts the raw basis into the unique reduced
/// monic form.
fn finalize(ring: Arc<Ring>, order: MonomialOrder, basis: Vec<BasisElem>) -> GroebnerBasis {
    // Minimal basis: ascending by leading monomial, keep elements whose
    // leading monomial no kept element divides (a proper divisor is always
    // smaller in any monomial order, so one ascending pass suffices).
    let mut raw: Vec<IPoly> = basis.into_iter().map(|b| b.poly).collect();
    raw.sort_by(|p, q| order.cmp(&p.terms[0].0, &q.terms[0].0));
    let mut minimal: Vec<IPoly> = Vec::new();
    for p in raw {
        if !minimal.iter().any(|k| k.terms[0].0.divides(&p.terms[0].0)) {
            minimal.push(p);
        }
    }

    let monic: Vec<Polynomial> = minimal.iter().map(|p| p.to_monic_polynomial(&ring)).collect();
    let leading: Vec<Monomial> = minimal.iter().map(|p| p.terms[0].0.clone()).collect();

    // Tail reduction: rewrite every element modulo the others. Leading terms
    // are untouched because the basis is already minimal.
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(monic.len());
    for (idx, g) in monic.iter().enumerate() {
        let others = GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            elements: monic
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != idx)
                .map(|(_, p)| p.clone())
                .collect(),
            leading: leading
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != idx)
                .map(|(_, m)| m.clone())
                .collect(),
        };
        reduced.push(others.normal_form(g));
    }

    GroebnerBasis { ring, order, elements: reduced, leading }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn content_is_stripped_and_sign_fixed() {
        let ring = Ring::new(["x", "y"]);
        let p = parse_polynomial("-4*x^2 - 6*y", &ring).unwrap();
        let ip = IPoly::from_polynomial(&p, &MonomialOrder::GrevLex);
        assert_eq!(
            ip.terms,
            vec![
                (Monomial::from_exps(vec![2, 0]), BigInt::from(2)),
                (Monomial::from_exps(vec![0, 1]), BigInt::from(3)),
            ]
        );
    }

    #[test]
    fn lex_order_ranks_first_variable_highest() {
        let ring = Ring::new(["x", "y"]);
        let p = parse_polynomial("y^5 + x", &ring).unwrap();
        let ip = IPoly::from_polynomial(&p, &MonomialOrder::Lex);
        assert_eq!(ip.terms[0].0, Monomial::from_exps(vec![1, 0]));
    }

    #[test]
    fn block_order_prioritizes_eliminated_variables() {
        // Eliminating t: any monomial containing t beats any without it.
        let ring = Ring::new(["t", "x"]);
        let order = MonomialOrder::eliminating(&ring, &[0]);
        let t = Monomial::from_exps(vec![1, 0]);
        let x5 = Monomial::from_exps(vec![0, 5]);
        assert_eq!(order.cmp(&t, &x5), std::cmp::Ordering::Greater);
    }
}
