//! The model layer on top of a frame: valuation plus whichever possibility
//! correspondences and awareness functions are present.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{AgentId, AtomId, AtomSet};

use super::event::Event;
use super::frame::{HmsFrame, StateId};

#[derive(Debug, Clone, Error)]
pub enum HmsError {
    #[error("model file malformed: {0}")]
    Format(String),
    #[error("no state named `{0}`")]
    UnknownState(String),
    #[error("agent index {0} out of range (model has {1} agents)")]
    UnknownAgent(usize, usize),
    #[error("model lacks the `{0}` correspondence required here")]
    MissingCorrespondence(&'static str),
    #[error("operator output is not an event ({0}); the model violates its structural assumptions")]
    NotAnEvent(String),
    #[error("formula undefined at `{state}`: atoms {atoms} have no truth value there")]
    Undefined { state: String, atoms: String },
    #[error("{0}")]
    Invalid(String),
}

/// The explicit possibility correspondence: per agent, each state maps to a
/// non-empty set of states within a single (weakly less expressive) space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiTarget {
    pub space: AtomSet,
    pub mask: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ExplicitPc {
    /// Per agent: state → possibility set.
    pub map: Vec<BTreeMap<StateId, PiTarget>>,
}

impl ExplicitPc {
    pub fn get(&self, agent: AgentId, s: StateId) -> Option<PiTarget> {
        self.map.get(agent).and_then(|m| m.get(&s)).copied()
    }
}

/// The implicit possibility correspondence, stored as one partition per
/// space and agent. Reflexivity and stationarity hold by construction once
/// the blocks partition each space; the loader records coverage/disjointness
/// defects instead of failing so the validator can report them as clause
/// violations.
#[derive(Debug, Clone, Default)]
pub struct ImplicitPc {
    /// Per agent, per space: block mask for each state index.
    pub block: Vec<BTreeMap<AtomSet, Vec<u64>>>,
    /// States (per agent) not covered by any block.
    pub uncovered: Vec<Vec<StateId>>,
    /// States (per agent) claimed by more than one block.
    pub overlapping: Vec<Vec<StateId>>,
}

impl ImplicitPc {
    /// The block of `s`, including `s` itself (empty mask if uncovered).
    pub fn block_of(&self, agent: AgentId, s: StateId) -> u64 {
        self.block
            .get(agent)
            .and_then(|m| m.get(&s.space))
            .map(|v| v[s.idx as usize])
            .unwrap_or(0)
    }

    pub fn is_partition(&self, agent: AgentId) -> bool {
        self.uncovered[agent].is_empty() && self.overlapping[agent].is_empty()
    }
}

/// The awareness function: per agent, each state maps to a space of the
/// lattice (the agent's awareness level there).
#[derive(Debug, Clone, Default)]
pub struct AwarenessFn {
    pub map: Vec<BTreeMap<StateId, AtomSet>>,
}

impl AwarenessFn {
    pub fn get(&self, agent: AgentId, s: StateId) -> Option<AtomSet> {
        self.map.get(agent).and_then(|m| m.get(&s)).copied()
    }
}

/// Which correspondences a model carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmsKind {
    /// Explicit correspondence only.
    Plain,
    /// Explicit plus implicit correspondences.
    Complemented,
    /// Implicit correspondence plus awareness function.
    ImplicitKnowledgeBased,
    /// All three.
    ComplementedIkb,
}

#[derive(Debug, Clone)]
pub struct HmsModel {
    pub frame: HmsFrame,
    pub agents: usize,
    /// Valuation: each atom maps to an event.
    pub valuation: Vec<Option<Event>>,
    pub pi: Option<ExplicitPc>,
    pub lambda: Option<ImplicitPc>,
    pub alpha: Option<AwarenessFn>,
}

impl HmsModel {
    pub fn kind(&self) -> Result<HmsKind, HmsError> {
        match (&self.pi, &self.lambda, &self.alpha) {
            (Some(_), None, None) => Ok(HmsKind::Plain),
            (Some(_), Some(_), None) => Ok(HmsKind::Complemented),
            (None, Some(_), Some(_)) => Ok(HmsKind::ImplicitKnowledgeBased),
            (Some(_), Some(_), Some(_)) => Ok(HmsKind::ComplementedIkb),
            _ => Err(HmsError::Invalid(
                "model must carry pi, pi+lambda, lambda+alpha, or all three".into(),
            )),
        }
    }

    pub fn pi(&self) -> Result<&ExplicitPc, HmsError> {
        self.pi.as_ref().ok_or(HmsError::MissingCorrespondence("pi"))
    }

    pub fn lambda(&self) -> Result<&ImplicitPc, HmsError> {
        self.lambda.as_ref().ok_or(HmsError::MissingCorrespondence("lambda"))
    }

    pub fn alpha(&self) -> Result<&AwarenessFn, HmsError> {
        self.alpha.as_ref().ok_or(HmsError::MissingCorrespondence("alpha"))
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<(), HmsError> {
        if agent >= self.agents {
            Err(HmsError::UnknownAgent(agent, self.agents))
        } else {
            Ok(())
        }
    }

    pub fn valuation_event(&self, atom: AtomId) -> Option<Event> {
        self.valuation.get(atom.0 as usize).copied().flatten()
    }

    pub fn state(&self, name: &str) -> Result<StateId, HmsError> {
        self.frame.find_state(name).ok_or_else(|| HmsError::UnknownState(name.to_string()))
    }
}
