//! Failure classification for process exit codes.
//!
//! Every failure the tool can hit maps to one of three classes:
//! unusable input (exit 2), a mathematical failure or disagreement (exit 1),
//! or an exhausted symbolic computation budget (exit 3).  Success is exit 0.

use symdef_core::chord::ChordError;
use symdef_core::ideal::IdealError;
use symdef_core::solve::SolveError;
use symdef_core::variety::VarietyError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed file, flag, point, or grid: exit 2.
    Input(String),
    /// A check failed, a quantity disagreed, or a solve broke down: exit 1.
    Math(String),
    /// The step budget for symbolic computation ran out: exit 3.
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> CliError {
        match e {
            IdealError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> CliError {
        match e {
            SolveError::Ideal(inner) => inner.into(),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> CliError {
        match e {
            VarietyError::Ideal(inner) => inner.into(),
            VarietyError::InvalidSpec(m) => CliError::Input(m),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<ChordError> for CliError {
    fn from(e: ChordError) -> CliError {
        match e {
            ChordError::Ideal(inner) => inner.into(),
            ChordError::Solve(inner) => inner.into(),
            ChordError::Variety(inner) => inner.into(),
            ChordError::InvalidGrid(m) => CliError::Input(m),
            other => CliError::Math(other.to_string()),
        }
    }
}
