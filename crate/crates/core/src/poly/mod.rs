//! Sparse multivariate polynomials over exact rational coefficients.
//!
//! Every polynomial carries a shared ring context (an ordered list of variable
//! names); all arithmetic checks that both operands live in the same ring.
//! Terms are stored in a canonical graded-reverse-lexicographic order, so
//! equality, hashing of rendered forms, and printed output are deterministic.

mod parse;
pub use parse::{parse_polynomial, ParseError};

pub mod matrix;
pub use matrix::{jacobian, PolyMatrix};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exact rational scalar used for all symbolic computation.
///
/// Kept in lowest terms with a positive denominator by construction
/// (the backing implementation canonicalizes on every operation).
pub type Rational = num_rational::BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Errors produced by polynomial-level operations.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    /// The zero polynomial has no highest homogeneous component.
    #[error("the zero polynomial has no highest homogeneous component")]
    ZeroPolynomial,
    /// A point of the wrong length was supplied to an evaluation routine.
    #[error("point has {got} coordinates but the ring has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
}

/// An ordered list of variable names; the context shared by polynomials.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    /// Builds a ring with the given variable names (order is significant).
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        assert!(!vars.is_empty(), "a ring needs at least one variable");
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable name {v:?}");
        }
        Arc::new(Ring { vars })
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// New ring with extra variables appended after the existing ones.
    pub fn appended<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> Arc<Ring> {
        let mut vars = self.vars.clone();
        vars.extend(extra.into_iter().map(Into::into));
        Ring::new(vars)
    }
}

/// Picks a variable name based on `base` that does not collide with `taken`.
pub fn fresh_var_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    for k in 0.. {
        let cand = format!("{base}_{k}");
        if !taken.iter().any(|t| t == &cand) {
            return cand;
        }
    }
    unreachable!()
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn assert_same_ring(a: &Arc<Ring>, b: &Arc<Ring>) {
    assert!(
        same_ring(a, b),
        "ring mismatch: {:?} vs {:?}",
        a.var_names(),
        b.var_names()
    );
}

/// A monomial: one exponent per ring variable.
///
/// The intrinsic `Ord` is graded reverse lexicographic (total degree first;
/// ties broken by the *last* differing exponent, smaller exponent winning).
/// This fixed order is what makes term storage canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Total degree counting only the variables selected by `mask`.
    pub fn degree_masked(&self, mask: &[bool]) -> u32 {
        self.exps
            .iter()
            .zip(mask)
            .filter(|(_, m)| **m)
            .map(|(e, _)| *e)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables appearing with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        debug_assert_eq!(self.exps.len(), other.exps.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // Reverse-lex tie break: scan from the last variable; whichever
        // monomial has the smaller exponent at the last difference is greater.
        for i in (0..self.exps.len()).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero, and all monomials have exactly
/// one exponent slot per ring variable. The zero polynomial has an empty term
/// map and reports `None` as its total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.var_count()), c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn variable(ring: &Arc<Ring>, i: usize) -> Polynomial {
        assert!(i < ring.var_count());
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.var_count(), i), Rational::one());
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        it: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        for (m, c) in it {
            assert_eq!(m.nvars(), ring.var_count());
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ring.var_count()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical (grevlex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Total degree; `None` encodes the degree of the zero polynomial
    /// (conventionally minus infinity).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Total degree counting only the variables selected by `mask`.
    pub fn degree_masked(&self, mask: &[bool]) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_masked(mask)).max()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The sum of the terms of maximal total degree.
    ///
    /// This is the initial form that controls behaviour at infinity; it is
    /// undefined (an error) for the zero polynomial.
    pub fn highest_homogeneous_component(&self) -> Result<Polynomial, PolyError> {
        let d = self.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.ring.var_count());
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] = e - 1;
            out.add_term(Monomial { exps }, c * Rational::from(BigInt::from(e)));
        }
        out
    }

    /// Evaluates with double-precision complex arithmetic, reusing cached
    /// variable powers across terms.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        if point.len() != self.ring.var_count() {
            return Err(PolyError::DimensionMismatch {
                expected: self.ring.var_count(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Complex64>> = point.iter().map(|&z| vec![Complex64::new(1.0, 0.0), z]).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &e) in m.exps.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let last = *powers[i].last().unwrap();
                    let p1 = powers[i][1];
                    powers[i].push(last * p1);
                }
                t *= powers[i][e];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.ring.var_count() {
            return Err(PolyError::DimensionMismatch {
                expected: self.ring.var_count(),
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// |p(v)| divided by the sum of term magnitudes at v (plus one), a scale
    /// that makes "vanishes at v" thresholds meaningful across magnitudes.
    pub fn normalized_residual(&self, point: &[Complex64]) -> f64 {
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 1.0f64;
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &e) in m.exps.iter().enumerate() {
                t *= point[i].powu(e);
            }
            value += t;
            scale += t.norm();
        }
        value.norm() / scale
    }

    /// Substitutes `images[i]` for variable `i`; all images must share one
    /// target ring. Powers of each image are cached and reused.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.var_count());
        let target = images
            .first()
            .map(|p| p.ring().clone())
            .expect("composition needs at least one image");
        for im in images {
            assert_same_ring(&target, im.ring());
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &powers[i][1];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-indexes this polynomial into `target`, sending variable `i` of the
    /// current ring to variable `var_map[i]` of the target.
    pub fn embed(&self, target: &Arc<Ring>, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.var_count());
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.var_count()];
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    exps[var_map[i]] += e;
                }
            }
            out.add_term(Monomial { exps }, c.clone());
        }
        out
    }

    /// Projects into a smaller ring. `kept[k]` is the index in the current
    /// ring of the target's variable `k`; the polynomial must not involve
    /// any unlisted variable.
    pub fn restrict(&self, target: &Arc<Ring>, kept: &[usize]) -> Polynomial {
        assert_eq!(kept.len(), target.var_count());
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.var_count()];
            for (k, &src) in kept.iter().enumerate() {
                exps[k] = m.exps[src];
            }
            let carried: u32 = exps.iter().sum();
            assert_eq!(
                carried,
                m.degree(),
                "restriction would drop a variable still in use"
            );
            out.add_term(Monomial { exps }, c.clone());
        }
        out
    }

    /// Largest exponent of variable `var` in any term.
    pub fn degree_in_var(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[var]).max().unwrap_or(0)
    }

    /// Drops every term containing variable `var` (substitutes zero for it).
    pub fn set_var_zero(&self, var: usize) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps[var] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogenizes with respect to the variables selected by `mask`, using
    /// ring variable `t` (which must not be in the mask) to absorb the
    /// degree deficit of each term.
    pub fn homogenize_masked(&self, mask: &[bool], t: usize) -> Polynomial {
        assert!(!mask[t], "homogenization variable cannot be in the mask");
        let d = match self.degree_masked(mask) {
            Some(d) => d,
            None => return self.clone(),
        };
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps[t] += d - m.degree_masked(mask);
            out.add_term(Monomial { exps }, c.clone());
        }
        out
    }

    /// Multiplies through by the least common denominator and divides out the
    /// integer content, making the leading (grevlex-greatest) coefficient
    /// positive. Returns the zero polynomial unchanged.
    pub fn integer_normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut nums: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for n in &nums {
            content = content.gcd(n);
        }
        if content.is_zero() {
            content = BigInt::one();
        }
        // The last stored term is the grevlex-greatest one.
        if nums.last().unwrap().is_negative() {
            content = -content;
        }
        for n in &mut nums {
            *n = &*n / &content;
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .keys()
                .cloned()
                .zip(nums.into_iter().map(Rational::from))
                .collect(),
        }
    }

    /// Leading coefficient and monomial under the canonical grevlex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Extremely large numerator/denominator pairs can overflow the direct
        // conversion; fall back to a quotient of big-float approximations.
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_same_ring(&self.ring, &rhs.ring);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_same_ring(&self.ring, &rhs.ring);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_same_ring(&self.ring, &rhs.ring);
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Canonical rendering: terms in descending grevlex order, explicit `*`
    /// between every pair of factors, exponents via `^`, rationals as `a/b`.
    /// The output parses back to an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let coeff_is_one = abs.is_one();
            let mono = render_monomial(m, &self.ring);
            match (coeff_is_one, mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{}", render_rational(&abs))?,
                (false, false) => write!(f, "{}*{mono}", render_rational(&abs))?,
            }
        }
        Ok(())
    }
}

fn render_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_monomial(m: &Monomial, ring: &Ring) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.var_name(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.var_name(i), e)),
        }
    }
    parts.join("*")
}
