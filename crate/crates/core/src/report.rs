//! Validation reports: itemized structural-assumption violations.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifies one checkable assumption clause. Validators tag every
/// violation with the clause that failed so callers (and the mutation
/// sensitivity suite) can match findings mechanically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Clause {
    // Frame structure.
    FrameSpaceEmpty,
    FrameStateNameClash,
    FrameProjectionMissing,
    FrameProjectionNotSurjective,
    FrameProjectionPathDependent,
    // FH models.
    FhWorldsEmpty,
    FhPartitionCover,
    FhPartitionDisjoint,
    FhAwarenessConstancy,
    FhAwarenessDomain,
    FhValuationDomain,
    // Bounded morphisms.
    MorphismSurjectivity,
    MorphismAtomicHarmony,
    MorphismAwarenessConsistency,
    MorphismHomomorphism,
    MorphismBack,
    // Categories.
    CategoryIdentity,
    CategoryComposition,
    CategoryEquivalence,
    // Explicit possibility correspondence Π.
    PiConfinement,
    PiGeneralizedReflexivity,
    PiStationarity,
    PiProjectionsPreserveIgnorance,
    PiProjectionsPreserveKnowledge,
    /// Derived diagnostic: a possibility set two levels down must already
    /// appear at the intermediate projection.
    PiCoincidence,
    // Implicit possibility correspondence Λ.
    LambdaReflexivity,
    LambdaStationarity,
    LambdaProjectionsPreserveImplicitKnowledge,
    LambdaExplicitMeasurability,
    LambdaImplicitMeasurability,
    /// Derived diagnostic: up-closures of implicit possibility sets grow
    /// along projections.
    LambdaProjectionsPreserveImplicitIgnorance,
    /// Derived diagnostic: on explicit possibility sets the implicit and
    /// explicit correspondences coincide.
    LambdaPiCoincidence,
    /// Derived diagnostic: projecting the implicit set onto the explicit
    /// target space yields the explicit set.
    LambdaCoherence,
    // Awareness function α.
    AlphaLackOfConception,
    AlphaAwarenessMeasurability,
    AlphaProjectionBelowLevel,
    AlphaProjectionAboveLevel,
    AlphaMonotone,
    // Valuation and events.
    ValuationNotEvent,
    ValuationBaseSpaceWarning,
    OperatorNotEvent,
    // Derived explicit correspondence audit.
    PiStarAudit,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::FrameSpaceEmpty => "frame: space empty",
            Clause::FrameStateNameClash => "frame: state name clash",
            Clause::FrameProjectionMissing => "frame: projection missing",
            Clause::FrameProjectionNotSurjective => "frame: projection not surjective",
            Clause::FrameProjectionPathDependent => "frame: projection path dependent",
            Clause::FhWorldsEmpty => "fh: worlds empty",
            Clause::FhPartitionCover => "fh: partition does not cover",
            Clause::FhPartitionDisjoint => "fh: partition blocks overlap",
            Clause::FhAwarenessConstancy => "fh: agents know what they are aware of",
            Clause::FhAwarenessDomain => "fh: awareness outside vocabulary",
            Clause::FhValuationDomain => "fh: valuation outside worlds",
            Clause::MorphismSurjectivity => "morphism: surjectivity",
            Clause::MorphismAtomicHarmony => "morphism: atomic harmony",
            Clause::MorphismAwarenessConsistency => "morphism: awareness consistency",
            Clause::MorphismHomomorphism => "morphism: homomorphism",
            Clause::MorphismBack => "morphism: back",
            Clause::CategoryIdentity => "category: identity morphism",
            Clause::CategoryComposition => "category: composition commutes",
            Clause::CategoryEquivalence => "category: modal equivalence",
            Clause::PiConfinement => "pi: confinement",
            Clause::PiGeneralizedReflexivity => "pi: generalized reflexivity",
            Clause::PiStationarity => "pi: stationarity",
            Clause::PiProjectionsPreserveIgnorance => "pi: projections preserve ignorance",
            Clause::PiProjectionsPreserveKnowledge => "pi: projections preserve knowledge",
            Clause::PiCoincidence => "pi: possibility sets agree across comparable spaces",
            Clause::LambdaReflexivity => "lambda: reflexivity",
            Clause::LambdaStationarity => "lambda: stationarity",
            Clause::LambdaProjectionsPreserveImplicitKnowledge => {
                "lambda: projections preserve implicit knowledge"
            }
            Clause::LambdaExplicitMeasurability => "lambda: explicit measurability",
            Clause::LambdaImplicitMeasurability => "lambda: implicit measurability",
            Clause::LambdaProjectionsPreserveImplicitIgnorance => {
                "lambda: projections preserve implicit ignorance"
            }
            Clause::LambdaPiCoincidence => "lambda: coincides with pi on explicit sets",
            Clause::LambdaCoherence => "lambda: coherence with pi",
            Clause::AlphaLackOfConception => "alpha: lack of conception",
            Clause::AlphaAwarenessMeasurability => "alpha: awareness measurability",
            Clause::AlphaProjectionBelowLevel => "alpha: projections below the awareness level",
            Clause::AlphaProjectionAboveLevel => "alpha: projections above the awareness level",
            Clause::AlphaMonotone => "alpha: monotone along projections",
            Clause::ValuationNotEvent => "valuation: not an event",
            Clause::ValuationBaseSpaceWarning => "valuation: base-space above the atom's own space",
            Clause::OperatorNotEvent => "operator: output not a base-space event",
            Clause::PiStarAudit => "derived pi: defining equation audit",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single violation: which clause failed, for which agent (if any), and a
/// human-readable locus ("state pq", "worlds w1,w2", ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: Clause,
    pub agent: Option<usize>,
    pub detail: String,
    /// Warnings do not make a model invalid.
    pub warning: bool,
}

impl Violation {
    pub fn new(clause: Clause, agent: Option<usize>, detail: impl Into<String>) -> Self {
        Violation { clause, agent, detail: detail.into(), warning: false }
    }

    pub fn warning(clause: Clause, agent: Option<usize>, detail: impl Into<String>) -> Self {
        Violation { clause, agent, detail: detail.into(), warning: true }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.warning {
            write!(f, "warning: ")?;
        }
        write!(f, "{}", self.clause)?;
        if let Some(i) = self.agent {
            write!(f, " [agent {}]", i + 1)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Collected violations; an empty report (modulo warnings) means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn add(&mut self, clause: Clause, agent: Option<usize>, detail: impl Into<String>) {
        self.push(Violation::new(clause, agent, detail));
    }

    pub fn warn(&mut self, clause: Clause, agent: Option<usize>, detail: impl Into<String>) {
        self.push(Violation::warning(clause, agent, detail));
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Valid means no hard violations; warnings are allowed.
    pub fn is_valid(&self) -> bool {
        self.violations.iter().all(|v| v.warning)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.warning)
    }

    /// Distinct clauses with at least one hard violation.
    pub fn failed_clauses(&self) -> Vec<Clause> {
        let mut cs: Vec<Clause> = self.errors().map(|v| v.clause).collect();
        cs.sort();
        cs.dedup();
        cs
    }

    pub fn flags(&self, clause: Clause) -> bool {
        self.errors().any(|v| v.clause == clause)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
