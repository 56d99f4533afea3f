//! Property tests for the Groebner layer: the defining S-polynomial
//! criterion, elimination soundness, agreement with Sylvester resultants,
//! saturation containment/idempotence, and dimension monotonicity.

use proptest::prelude::*;
use symdef_core::ideal::{
    dimension, eliminate, groebner, ideal_sum, saturate_by_element, Budget, GroebnerBasis,
    IdealError, IdealHandle, MonomialOrder,
};
use symdef_core::poly::{rat_int, Monomial, PolyMatrix, Polynomial, Ring};
use std::sync::Arc;

/// A random sparse polynomial with small support and coefficients.
fn arb_poly(ring: Arc<Ring>, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let n = ring.var_count();
    let term = (
        prop::collection::vec(0..=max_deg, n).prop_filter("bounded degree", move |e| {
            e.iter().sum::<u32>() <= max_deg
        }),
        -5i64..=5,
    );
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        Polynomial::from_terms(
            &ring,
            terms
                .into_iter()
                .map(|(exps, c)| (Monomial::from_exps(exps), rat_int(c))),
        )
    })
}

fn arb_ideal(vars: usize, gens: usize, max_deg: u32) -> impl Strategy<Value = IdealHandle> {
    let names: Vec<String> = (0..vars).map(|i| format!("x{}", i + 1)).collect();
    let ring = Ring::new(names);
    let r = ring.clone();
    prop::collection::vec(arb_poly(ring, max_deg), 1..=gens)
        .prop_map(move |gens| IdealHandle::new(&r, gens))
}

/// Runs a basis computation, discarding the test case if it blows the
/// budget (rare at these sizes, but unbounded worst cases exist).
fn try_groebner(
    ideal: &IdealHandle,
    order: MonomialOrder,
) -> Result<GroebnerBasis, TestCaseError> {
    groebner(ideal, order, &Budget::new(200_000)).map_err(|e| match e {
        IdealError::BudgetExceeded { .. } => TestCaseError::reject("budget exceeded"),
        other => TestCaseError::fail(format!("{other}")),
    })
}

/// S-polynomial of two monic basis elements.
fn s_polynomial(gb: &GroebnerBasis, i: usize, j: usize) -> Polynomial {
    let (gi, gj) = (&gb.elements()[i], &gb.elements()[j]);
    let (mi, mj) = (&gb.leading_monomials()[i], &gb.leading_monomials()[j]);
    let lcm = mi.lcm(mj);
    let shift = |m: &Monomial| {
        Polynomial::from_terms(gb.ring(), [(m.quotient_of(&lcm), rat_int(1))])
    };
    &(&shift(mi) * gi) - &(&shift(mj) * gj)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, .. ProptestConfig::default() })]

    /// The output basis satisfies Buchberger's criterion and contains the
    /// input generators.
    #[test]
    fn basis_satisfies_s_polynomial_criterion(ideal in arb_ideal(3, 3, 3)) {
        let gb = try_groebner(&ideal, MonomialOrder::GrevLex)?;
        for g in ideal.generators() {
            prop_assert!(gb.normal_form(g).is_zero(), "generator escaped its own basis");
        }
        for i in 0..gb.elements().len() {
            for j in (i + 1)..gb.elements().len() {
                let s = s_polynomial(&gb, i, j);
                prop_assert!(gb.normal_form(&s).is_zero(), "S-polynomial ({i},{j}) did not reduce");
            }
        }
    }

    /// Repeating the computation on its own output is a fixed point, and
    /// lex bases satisfy the criterion too.
    #[test]
    fn reduced_basis_is_a_fixed_point(ideal in arb_ideal(2, 3, 3)) {
        let gb = try_groebner(&ideal, MonomialOrder::Lex)?;
        let again = try_groebner(&gb.to_ideal(), MonomialOrder::Lex)?;
        prop_assert_eq!(gb.elements(), again.elements());
    }

    /// Eliminated generators, viewed back in the big ring, still belong to
    /// the original ideal.
    #[test]
    fn elimination_is_sound(ideal in arb_ideal(3, 3, 3)) {
        let ring = ideal.ring().clone();
        let gb = try_groebner(&ideal, MonomialOrder::GrevLex)?;
        let projected = eliminate(&ideal, &[0], &Budget::new(200_000))
            .map_err(|_| TestCaseError::reject("budget exceeded"))?;
        for g in projected.generators() {
            if g.is_zero() {
                continue;
            }
            let back = g.embed(&ring, &[1, 2]);
            prop_assert!(gb.normal_form(&back).is_zero(), "projected generator left the ideal");
        }
    }

    /// Saturation contains the ideal and is idempotent.
    #[test]
    fn saturation_grows_and_stabilizes(ideal in arb_ideal(2, 2, 3), divisor in arb_poly(Ring::new(["x1", "x2"]), 2)) {
        let budget = Budget::new(200_000);
        let ring = ideal.ring().clone();
        let identity = [0usize, 1];
        let d = divisor.embed(&ring, &identity);
        let sat = saturate_by_element(&ideal, &d, &budget)
            .map_err(|_| TestCaseError::reject("budget exceeded"))?;
        let sat_gb = try_groebner(&sat, MonomialOrder::GrevLex)?;
        for g in ideal.generators() {
            prop_assert!(sat_gb.normal_form(g).is_zero(), "saturation lost a generator");
        }
        let sat2 = saturate_by_element(&sat, &d, &budget)
            .map_err(|_| TestCaseError::reject("budget exceeded"))?;
        let sat2_gb = try_groebner(&sat2, MonomialOrder::GrevLex)?;
        prop_assert_eq!(sat_gb.elements(), sat2_gb.elements());
    }

    /// Adding equations can only cut the variety down: dim(I + J) is at
    /// most min(dim I, dim J).
    #[test]
    fn dimension_shrinks_under_sum(a in arb_ideal(3, 2, 3), b in arb_ideal(3, 2, 3)) {
        let budget = Budget::new(200_000);
        let reanchored = IdealHandle::new(
            a.ring(),
            b.generators().iter().map(|g| g.embed(a.ring(), &[0, 1, 2])).collect(),
        );
        let res = (
            dimension(&a, &budget),
            dimension(&reanchored, &budget),
            dimension(&ideal_sum(&a, &reanchored), &budget),
        );
        match res {
            (Ok(da), Ok(db), Ok(dsum)) => {
                prop_assert!(dsum <= da.min(db), "sum dimension {dsum} exceeds min({da},{db})");
            }
            _ => return Err(TestCaseError::reject("budget exceeded")),
        }
    }
}

/// Coefficient of `x^i` in a bivariate polynomial, as a polynomial in `y`.
fn coeff_in_x(f: &Polynomial, i: u32, yring: &Arc<Ring>) -> Polynomial {
    Polynomial::from_terms(
        yring,
        f.terms().filter_map(|(m, c)| {
            (m.exps()[0] == i).then(|| (Monomial::from_exps(vec![m.exps()[1]]), c.clone()))
        }),
    )
}

/// Sylvester resultant of `f` and `g` with respect to `x`, for exact
/// x-degrees `dx_f` and `dx_g`.
fn sylvester_resultant(
    f: &Polynomial,
    g: &Polynomial,
    dx_f: usize,
    dx_g: usize,
    yring: &Arc<Ring>,
) -> Polynomial {
    let size = dx_f + dx_g;
    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    for shift in 0..dx_g {
        let mut row = vec![Polynomial::zero(yring); size];
        for (k, cell) in row.iter_mut().skip(shift).take(dx_f + 1).enumerate() {
            *cell = coeff_in_x(f, (dx_f - k) as u32, yring);
        }
        rows.push(row);
    }
    for shift in 0..dx_f {
        let mut row = vec![Polynomial::zero(yring); size];
        for (k, cell) in row.iter_mut().skip(shift).take(dx_g + 1).enumerate() {
            *cell = coeff_in_x(g, (dx_g - k) as u32, yring);
        }
        rows.push(row);
    }
    PolyMatrix::from_rows(yring, rows).determinant()
}

/// A random bivariate polynomial with exact x-degree `dx`.
fn arb_bivariate_exact(ring: Arc<Ring>, dx: u32) -> impl Strategy<Value = Polynomial> {
    let lead = (1i64..=4, 0u32..=2u32);
    let tail_term = (0..dx, 0u32..=2u32, -4i64..=4);
    (lead, prop::collection::vec(tail_term, 0..4)).prop_map(move |((lc, ly), tail)| {
        let mut terms = vec![(Monomial::from_exps(vec![dx, ly]), rat_int(lc))];
        for (ex, ey, c) in tail {
            terms.push((Monomial::from_exps(vec![ex, ey]), rat_int(c)));
        }
        Polynomial::from_terms(&ring, terms)
    })
}

/// A pair of bivariate polynomials with known exact x-degrees.
fn arb_resultant_case() -> impl Strategy<Value = (Polynomial, Polynomial, u32, u32)> {
    (1u32..=2, 1u32..=2).prop_flat_map(|(dxf, dxg)| {
        let ring = Ring::new(["x", "y"]);
        (
            arb_bivariate_exact(ring.clone(), dxf),
            arb_bivariate_exact(ring, dxg),
            Just(dxf),
            Just(dxg),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, .. ProptestConfig::default() })]

    /// The Sylvester resultant of `f` and `g` with respect to `x` lies in
    /// the elimination ideal; and when the resultant is a nonzero constant,
    /// the projection is empty (unit ideal).
    #[test]
    fn elimination_agrees_with_resultant((f, g, dxf, dxg) in arb_resultant_case()) {
        let ring = f.ring().clone();
        let yring = Ring::new(["y"]);

        let res = sylvester_resultant(&f, &g, dxf as usize, dxg as usize, &yring);
        let ideal = IdealHandle::new(&ring, vec![f, g]);
        let projected = eliminate(&ideal, &[0], &Budget::new(200_000))
            .map_err(|_| TestCaseError::reject("budget exceeded"))?;
        let proj_gb = try_groebner(&projected, MonomialOrder::GrevLex)?;

        prop_assert!(
            proj_gb.normal_form(&res).is_zero(),
            "resultant escaped the elimination ideal"
        );
        if res.is_constant() && !res.is_zero() {
            prop_assert!(proj_gb.is_unit(), "nonzero constant resultant forces empty projection");
        }
    }
}
