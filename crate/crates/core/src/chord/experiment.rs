//! Invariance of the generic fiber Euler characteristic under random linear
//! moves of the second variety.
//!
//! The generic-fiber invariant depends only on the pair of varieties, not on
//! their relative position, as long as the moved pair stays in general
//! position.  This experiment draws random invertible integer matrices `H`,
//! replaces `Y` by `H(Y)`, and checks that every successfully analyzed move
//! produces the same invariant.  Moves that land outside general position are
//! recorded as skipped rather than failing the experiment.

use super::{make_budget, ChordAnalyzer, ChordError};
use crate::seed::subseed;
use crate::variety::{
    apply_h, check_general_position, choose_admissible_l, random_linear_map_h, MidpointProblem,
    RationalMatrix, VarietySpec,
};

/// What happened to one random move.
#[derive(Debug, Clone)]
pub enum HTrialOutcome {
    /// The move was rejected before analysis (with the reason).
    Skipped { reason: String },
    /// The invariant computed for the moved pair.
    Computed { mu: i64 },
}

#[derive(Debug, Clone)]
pub struct HTrial {
    pub trial: usize,
    pub matrix: RationalMatrix,
    pub outcome: HTrialOutcome,
}

#[derive(Debug, Clone)]
pub struct HExperimentReport {
    pub trials: Vec<HTrial>,
    /// The common invariant of all computed trials.
    pub mu: i64,
    /// Number of trials that were actually analyzed.
    pub computed: usize,
}

/// Runs `trials` random moves of `y`, sampling the Euler characteristic at
/// `samples` random generic points per successful move, and checks that the
/// computed invariants agree.
pub fn generic_h_experiment(
    x: &VarietySpec,
    y: &VarietySpec,
    trials: usize,
    samples: usize,
    seed: u64,
    budget_limit: Option<u64>,
) -> Result<HExperimentReport, ChordError> {
    assert!(trials >= 1);
    let m = x.ambient_dimension();
    let mut records = Vec::with_capacity(trials);
    let mut values = Vec::new();

    for t in 0..trials {
        let h = random_linear_map_h(m, subseed(seed, t as u64))?;
        let skip = |records: &mut Vec<HTrial>, matrix: RationalMatrix, reason: String| {
            records.push(HTrial {
                trial: t,
                matrix,
                outcome: HTrialOutcome::Skipped { reason },
            });
        };

        let moved = match apply_h(y, &h) {
            Ok(spec) => spec,
            Err(e) => {
                skip(&mut records, h, format!("move failed: {e}"));
                continue;
            }
        };
        let problem = match MidpointProblem::new(x.clone(), moved, subseed(seed, 1000 + t as u64)) {
            Ok(p) => p,
            Err(e) => {
                skip(&mut records, h, format!("pair rejected: {e}"));
                continue;
            }
        };
        if !check_general_position(&problem, &make_budget(budget_limit))? {
            skip(&mut records, h, "moved pair is not in general position".into());
            continue;
        }
        let l = match choose_admissible_l(&problem, subseed(seed, 2000 + t as u64), &make_budget(budget_limit)) {
            Ok(l) => l,
            Err(e) => {
                skip(&mut records, h, format!("no admissible slicing form: {e}"));
                continue;
            }
        };
        let analyzer = ChordAnalyzer::new(problem.with_l(l), budget_limit)?;
        let report = analyzer.mu_invariant(samples, subseed(seed, 3000 + t as u64))?;
        values.push(report.mu);
        records.push(HTrial {
            trial: t,
            matrix: h,
            outcome: HTrialOutcome::Computed { mu: report.mu },
        });
    }

    if values.is_empty() {
        let reasons: Vec<&str> = records
            .iter()
            .filter_map(|r| match &r.outcome {
                HTrialOutcome::Skipped { reason } => Some(reason.as_str()),
                HTrialOutcome::Computed { .. } => None,
            })
            .collect();
        return Err(ChordError::AllTrialsSkipped { trials, reason: reasons.join("; ") });
    }
    if values.iter().any(|&v| v != values[0]) {
        return Err(ChordError::MuMismatchAcrossH { values });
    }
    Ok(HExperimentReport { mu: values[0], computed: values.len(), trials: records })
}
