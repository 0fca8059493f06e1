//! FH awareness models: partitional Kripke models with an awareness
//! atom-set per agent and world.
//!
//! Accessibility relations are stored as partitions, which makes
//! reflexivity, transitivity, and Euclideaness unfalsifiable by
//! construction; the validator checks block coverage and awareness
//! constancy instead. Awareness sets are stored by their generating atom
//! set: the agent is aware of a formula iff she is aware of each of its
//! atoms, so the (infinite) set of formulas is represented by the finite
//! atom set.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Clause, ValidationReport};
use crate::syntax::{AgentId, AtomId, AtomSet, Formula, Vocab};

/// Worlds are indexed internally; sets of worlds are bitmasks, so a model
/// holds at most 64 worlds.
pub const MAX_WORLDS: usize = 64;

pub type WorldMask = u64;

#[derive(Debug, Clone, Error)]
pub enum FhError {
    #[error("model has no world named `{0}`")]
    UnknownWorld(String),
    #[error("agent index {0} out of range (model has {1} agents)")]
    UnknownAgent(usize, usize),
    #[error("formula uses atoms outside the model's sublanguage: {0}")]
    OutsideSublanguage(String),
    #[error("model file malformed: {0}")]
    Format(String),
    #[error("models are not comparable: {0}")]
    Incompatible(String),
}

/// A partitional, propositionally determined FH model over the sublanguage
/// indexed by `atoms` within a shared vocabulary.
#[derive(Debug, Clone)]
pub struct FhModel {
    pub vocab: Vocab,
    /// The sub-vocabulary this model is for; equals the full vocabulary for
    /// standalone models and a subset for members of a category.
    pub atoms: AtomSet,
    pub agents: usize,
    pub worlds: Vec<String>,
    /// Per agent, the block id of every world.
    pub(crate) block_of: Vec<Vec<u32>>,
    /// Per agent, per world, the world-mask of its block.
    pub(crate) block_mask: Vec<Vec<WorldMask>>,
    /// Per agent and world, the generating atom set of the awareness set.
    pub(crate) awareness: Vec<Vec<AtomSet>>,
    /// Per atom id, the worlds where it holds; `None` outside `atoms`.
    pub(crate) valuation: Vec<Option<WorldMask>>,
}

impl FhModel {
    pub fn new(
        vocab: Vocab,
        atoms: AtomSet,
        agents: usize,
        worlds: Vec<String>,
        blocks: Vec<Vec<Vec<usize>>>,
        awareness: Vec<Vec<AtomSet>>,
        valuation: Vec<Option<WorldMask>>,
    ) -> Result<Self, FhError> {
        if worlds.len() > MAX_WORLDS {
            return Err(FhError::Format(format!(
                "{} worlds exceed the limit of {MAX_WORLDS}",
                worlds.len()
            )));
        }
        if agents == 0 {
            return Err(FhError::Format("a model needs at least one agent".into()));
        }
        let n = worlds.len();
        let mut block_of = Vec::with_capacity(agents);
        let mut block_mask = Vec::with_capacity(agents);
        for per_agent in &blocks {
            let mut ids = vec![u32::MAX; n];
            let mut masks = vec![0u64; n];
            for (bi, block) in per_agent.iter().enumerate() {
                let mut mask = 0u64;
                for &w in block {
                    mask |= 1 << w;
                }
                for &w in block {
                    ids[w] = bi as u32;
                    masks[w] = mask;
                }
            }
            block_of.push(ids);
            block_mask.push(masks);
        }
        Ok(FhModel { vocab, atoms, agents, worlds, block_of, block_mask, awareness, valuation })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn full_mask(&self) -> WorldMask {
        if self.worlds.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.worlds.len()) - 1
        }
    }

    pub fn world_index(&self, name: &str) -> Result<usize, FhError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| FhError::UnknownWorld(name.to_string()))
    }

    pub fn block_mask_of(&self, agent: AgentId, world: usize) -> WorldMask {
        self.block_mask[agent][world]
    }

    pub fn block_id_of(&self, agent: AgentId, world: usize) -> u32 {
        self.block_of[agent][world]
    }

    pub fn awareness_of(&self, agent: AgentId, world: usize) -> AtomSet {
        self.awareness[agent][world]
    }

    pub fn valuation_mask(&self, atom: AtomId) -> Option<WorldMask> {
        self.valuation.get(atom.0 as usize).copied().flatten()
    }

    fn check_agent(&self, agent: AgentId) -> Result<(), FhError> {
        if agent >= self.agents {
            Err(FhError::UnknownAgent(agent, self.agents))
        } else {
            Ok(())
        }
    }

    /// Worlds where `f` holds, as a bitmask. Requires `f` within the
    /// model's sublanguage.
    pub fn truth_mask(&self, f: &Formula) -> Result<WorldMask, FhError> {
        if !f.in_sublanguage(self.atoms) {
            return Err(FhError::OutsideSublanguage(format!(
                "{:?} not within {}",
                f,
                self.vocab.set_label(self.atoms)
            )));
        }
        if let Some(i) = f.max_agent() {
            self.check_agent(i)?;
        }
        Ok(self.truth_mask_unchecked(f))
    }

    pub(crate) fn truth_mask_unchecked(&self, f: &Formula) -> WorldMask {
        match f {
            Formula::Top => self.full_mask(),
            Formula::Atom(a) => self.valuation[a.0 as usize].unwrap_or(0),
            Formula::Not(g) => !self.truth_mask_unchecked(g) & self.full_mask(),
            Formula::And(l, r) => self.truth_mask_unchecked(l) & self.truth_mask_unchecked(r),
            Formula::L(i, g) => {
                let inner = self.truth_mask_unchecked(g);
                self.box_mask(*i, inner)
            }
            Formula::A(i, g) => self.aware_mask(*i, g.atoms()),
            Formula::K(i, g) => {
                let inner = self.truth_mask_unchecked(g);
                self.box_mask(*i, inner) & self.aware_mask(*i, g.atoms())
            }
        }
    }

    /// Worlds whose whole accessibility block lies inside `target`.
    pub fn box_mask(&self, agent: AgentId, target: WorldMask) -> WorldMask {
        let mut out = 0u64;
        for w in 0..self.worlds.len() {
            let b = self.block_mask[agent][w];
            if b & !target == 0 {
                out |= 1 << w;
            }
        }
        out
    }

    /// Worlds where the agent is aware of every atom in `atoms`.
    pub fn aware_mask(&self, agent: AgentId, atoms: AtomSet) -> WorldMask {
        let mut out = 0u64;
        for w in 0..self.worlds.len() {
            if atoms.is_subset(self.awareness[agent][w]) {
                out |= 1 << w;
            }
        }
        out
    }
}

/// True iff the agent's awareness set at `world` contains `f`: awareness is
/// generated by atoms, so this is an atom-set inclusion.
pub fn aw_contains(
    model: &FhModel,
    agent: AgentId,
    world: &str,
    f: &Formula,
) -> Result<bool, FhError> {
    model.check_agent(agent)?;
    let w = model.world_index(world)?;
    Ok(f.atoms().is_subset(model.awareness[agent][w]))
}

/// Satisfaction at a named world. `T` is true everywhere; atoms by the
/// valuation; `¬`/`∧` classically; `ℓ_i` universally over the agent's
/// block; `a_i` by awareness; `k_i` as `ℓ_i` plus `a_i`.
pub fn fh_sat(model: &FhModel, world: &str, f: &Formula) -> Result<bool, FhError> {
    let w = model.world_index(world)?;
    let mask = model.truth_mask(f)?;
    Ok(mask & (1 << w) != 0)
}

/// Structural validation: partitions cover and are disjoint, awareness is
/// constant on blocks and stays inside the sublanguage, valuations range
/// over worlds.
pub fn validate_fh(model: &FhModel) -> ValidationReport {
    let mut rep = ValidationReport::new();
    if model.worlds.is_empty() {
        rep.add(Clause::FhWorldsEmpty, None, "model has no worlds");
        return rep;
    }
    let mut seen = HashSet::new();
    for w in &model.worlds {
        if !seen.insert(w) {
            rep.add(Clause::FhWorldsEmpty, None, format!("duplicate world id `{w}`"));
        }
    }
    for i in 0..model.agents {
        for w in 0..model.worlds.len() {
            if model.block_of[i][w] == u32::MAX {
                rep.add(
                    Clause::FhPartitionCover,
                    Some(i),
                    format!("world `{}` lies in no block", model.worlds[w]),
                );
            } else if model.block_mask[i][w] & (1 << w) == 0 {
                rep.add(
                    Clause::FhPartitionDisjoint,
                    Some(i),
                    format!("world `{}` assigned to a block not containing it", model.worlds[w]),
                );
            }
        }
        // Overlap shows up as two worlds sharing a member but with
        // different block ids.
        for w in 0..model.worlds.len() {
            for t in 0..model.worlds.len() {
                if model.block_mask[i][w] & (1 << t) != 0 && model.block_of[i][w] != model.block_of[i][t]
                {
                    rep.add(
                        Clause::FhPartitionDisjoint,
                        Some(i),
                        format!(
                            "worlds `{}` and `{}` share a block member but not a block",
                            model.worlds[w], model.worlds[t]
                        ),
                    );
                }
            }
        }
        for w in 0..model.worlds.len() {
            if !model.awareness[i][w].is_subset(model.atoms) {
                rep.add(
                    Clause::FhAwarenessDomain,
                    Some(i),
                    format!(
                        "awareness at `{}` mentions atoms outside the sublanguage",
                        model.worlds[w]
                    ),
                );
            }
            let b = model.block_mask[i][w];
            for t in (w + 1)..model.worlds.len() {
                if b & (1 << t) != 0 && model.awareness[i][w] != model.awareness[i][t] {
                    rep.add(
                        Clause::FhAwarenessConstancy,
                        Some(i),
                        format!(
                            "worlds `{}` and `{}` share a block but differ in awareness",
                            model.worlds[w], model.worlds[t]
                        ),
                    );
                }
            }
        }
    }
    let full = model.full_mask();
    for a in model.atoms.iter() {
        match model.valuation.get(a.0 as usize).copied().flatten() {
            Some(mask) => {
                if mask & !full != 0 {
                    rep.add(
                        Clause::FhValuationDomain,
                        None,
                        format!("valuation of `{}` mentions unknown worlds", model.vocab.name(a)),
                    );
                }
            }
            None => rep.add(
                Clause::FhValuationDomain,
                None,
                format!("no valuation for atom `{}`", model.vocab.name(a)),
            ),
        }
    }
    for a in model.vocab.atoms() {
        if !model.atoms.contains(a) && model.valuation.get(a.0 as usize).copied().flatten().is_some()
        {
            rep.add(
                Clause::FhValuationDomain,
                None,
                format!("valuation given for `{}` outside the sublanguage", model.vocab.name(a)),
            );
        }
    }
    rep
}

/// Modal-equivalence witness: a formula and a world name where the two
/// models disagree.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub formula: Formula,
    pub world: String,
}

/// Exhaustive bounded-depth modal-equivalence check between two models
/// under a total world pairing, over the shared sublanguage.
///
/// Internally formulas are explored by semantic signature — the pair of
/// truth masks plus the formula's atom set — rather than as raw trees.
/// Satisfaction of every connective is a function of its operands'
/// signatures, so checking one representative per signature class decides
/// the full quantified statement exactly.
pub fn fh_find_inequivalence(
    k1: &FhModel,
    k2: &FhModel,
    pairing: &BTreeMap<String, String>,
    depth: usize,
) -> Result<Option<EquivalenceWitness>, FhError> {
    if k1.agents != k2.agents {
        return Err(FhError::Incompatible(format!(
            "agent counts differ: {} vs {}",
            k1.agents, k2.agents
        )));
    }
    let mut pair = Vec::with_capacity(k1.worlds.len());
    for w in &k1.worlds {
        let target = pairing
            .get(w)
            .ok_or_else(|| FhError::Incompatible(format!("pairing missing world `{w}`")))?;
        pair.push(k2.world_index(target)?);
    }
    let shared = k1.atoms.intersect(k2.atoms);

    type Sig = (AtomSet, WorldMask, WorldMask);
    let mut seen: HashSet<Sig> = HashSet::new();

    let check = |sig: &Sig, f: &Formula, pair: &[usize]| -> Option<EquivalenceWitness> {
        for (w, &t) in pair.iter().enumerate() {
            let b1 = sig.1 & (1 << w) != 0;
            let b2 = sig.2 & (1 << t) != 0;
            if b1 != b2 {
                return Some(EquivalenceWitness {
                    formula: f.clone(),
                    world: k1.worlds[w].clone(),
                });
            }
        }
        None
    };

    let mut level: Vec<(Formula, Sig)> = Vec::new();
    let push = |f: Formula,
                    sig: Sig,
                    seen: &mut HashSet<Sig>,
                    level: &mut Vec<(Formula, Sig)>|
     -> Option<EquivalenceWitness> {
        if seen.insert(sig) {
            let w = check(&sig, &f, &pair);
            level.push((f, sig));
            w
        } else {
            None
        }
    };

    let t_sig = (AtomSet::EMPTY, k1.full_mask(), k2.full_mask());
    if let Some(w) = push(Formula::Top, t_sig, &mut seen, &mut level) {
        return Ok(Some(w));
    }
    for a in shared.iter() {
        let sig = (
            AtomSet::singleton(a),
            k1.valuation_mask(a).unwrap_or(0),
            k2.valuation_mask(a).unwrap_or(0),
        );
        if let Some(w) = push(Formula::Atom(a), sig, &mut seen, &mut level) {
            return Ok(Some(w));
        }
    }

    let mut all: Vec<(Formula, Sig)> = Vec::new();
    for _ in 0..depth {
        if level.is_empty() {
            break;
        }
        all.extend(level.iter().cloned());
        let prev = std::mem::take(&mut level);
        for (f, (atoms, m1, m2)) in &prev {
            let neg = (
                *atoms,
                !m1 & k1.full_mask(),
                !m2 & k2.full_mask(),
            );
            if let Some(w) = push(Formula::not(f.clone()), neg, &mut seen, &mut level) {
                return Ok(Some(w));
            }
            for i in 0..k1.agents {
                let lsig = (*atoms, k1.box_mask(i, *m1), k2.box_mask(i, *m2));
                if let Some(w) = push(Formula::l(i, f.clone()), lsig, &mut seen, &mut level) {
                    return Ok(Some(w));
                }
                let asig = (*atoms, k1.aware_mask(i, *atoms), k2.aware_mask(i, *atoms));
                if let Some(w) = push(Formula::a(i, f.clone()), asig, &mut seen, &mut level) {
                    return Ok(Some(w));
                }
                let ksig = (*atoms, lsig.1 & asig.1, lsig.2 & asig.2);
                if let Some(w) = push(Formula::k(i, f.clone()), ksig, &mut seen, &mut level) {
                    return Ok(Some(w));
                }
            }
        }
        for (lf, (la, lm1, lm2)) in all.iter().chain(prev.iter()) {
            for (rf, (ra, rm1, rm2)) in &prev {
                let sig = (la.union(*ra), lm1 & rm1, lm2 & rm2);
                if let Some(w) =
                    push(Formula::and(lf.clone(), rf.clone()), sig, &mut seen, &mut level)
                {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// True iff the two models agree on every formula of the shared
/// sublanguage up to the given depth, world by paired world.
pub fn fh_modally_equivalent(
    k1: &FhModel,
    k2: &FhModel,
    pairing: &BTreeMap<String, String>,
    depth: usize,
) -> Result<bool, FhError> {
    Ok(fh_find_inequivalence(k1, k2, pairing, depth)?.is_none())
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Serialize, Deserialize)]
struct RawFhModel {
    kind: String,
    atoms: Vec<String>,
    agents: usize,
    worlds: Vec<String>,
    valuation: BTreeMap<String, Vec<String>>,
    relations: Vec<Vec<Vec<String>>>,
    awareness: Vec<BTreeMap<String, Vec<String>>>,
}

pub fn fh_from_json(text: &str) -> Result<FhModel, FhError> {
    let raw: RawFhModel =
        serde_json::from_str(text).map_err(|e| FhError::Format(e.to_string()))?;
    if raw.kind != "fh" {
        return Err(FhError::Format(format!("expected kind `fh`, got `{}`", raw.kind)));
    }
    fh_from_raw(raw)
}

fn fh_from_raw(raw: RawFhModel) -> Result<FhModel, FhError> {
    let vocab = Vocab::new(raw.atoms).map_err(|e| FhError::Format(e.to_string()))?;
    let atoms = vocab.full_set();
    if raw.worlds.len() > MAX_WORLDS {
        return Err(FhError::Format(format!("more than {MAX_WORLDS} worlds")));
    }
    let index: HashMap<&str, usize> =
        raw.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    if index.len() != raw.worlds.len() {
        return Err(FhError::Format("duplicate world ids".into()));
    }
    let widx = |name: &str| -> Result<usize, FhError> {
        index.get(name).copied().ok_or_else(|| FhError::UnknownWorld(name.to_string()))
    };
    if raw.relations.len() != raw.agents || raw.awareness.len() != raw.agents {
        return Err(FhError::Format(
            "`relations` and `awareness` must list one entry per agent".into(),
        ));
    }
    let mut blocks = Vec::with_capacity(raw.agents);
    for per_agent in &raw.relations {
        let mut agent_blocks = Vec::new();
        for block in per_agent {
            let mut b = Vec::new();
            for w in block {
                b.push(widx(w)?);
            }
            agent_blocks.push(b);
        }
        blocks.push(agent_blocks);
    }
    let mut awareness = vec![vec![AtomSet::EMPTY; raw.worlds.len()]; raw.agents];
    for (i, per_agent) in raw.awareness.iter().enumerate() {
        for (w, atom_names) in per_agent {
            let wi = widx(w)?;
            let mut set = AtomSet::EMPTY;
            for name in atom_names {
                let a = vocab
                    .lookup(name)
                    .ok_or_else(|| FhError::Format(format!("unknown atom `{name}` in awareness")))?;
                set.insert(a);
            }
            awareness[i][wi] = set;
        }
    }
    let mut valuation = vec![None; vocab.len()];
    for (atom_name, worlds) in &raw.valuation {
        let a = vocab
            .lookup(atom_name)
            .ok_or_else(|| FhError::Format(format!("unknown atom `{atom_name}` in valuation")))?;
        let mut mask = 0u64;
        for w in worlds {
            mask |= 1 << widx(w)?;
        }
        valuation[a.0 as usize] = Some(mask);
    }
    for a in vocab.atoms() {
        if valuation[a.0 as usize].is_none() {
            valuation[a.0 as usize] = Some(0);
        }
    }
    FhModel::new(vocab, atoms, raw.agents, raw.worlds, blocks, awareness, valuation)
}

pub fn fh_to_json(model: &FhModel) -> serde_json::Value {
    let mut valuation = BTreeMap::new();
    for a in model.atoms.iter() {
        let mask = model.valuation_mask(a).unwrap_or(0);
        let worlds: Vec<&String> = model
            .worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| w)
            .collect();
        valuation.insert(model.vocab.name(a).to_string(), worlds);
    }
    let mut relations = Vec::new();
    for i in 0..model.agents {
        let mut seen = HashSet::new();
        let mut agent_blocks = Vec::new();
        for w in 0..model.worlds.len() {
            let b = model.block_of[i][w];
            if b != u32::MAX && seen.insert(b) {
                let members: Vec<&String> = model
                    .worlds
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| model.block_mask[i][*t] == model.block_mask[i][w])
                    .map(|(_, n)| n)
                    .collect();
                agent_blocks.push(members);
            }
        }
        relations.push(agent_blocks);
    }
    let mut awareness = Vec::new();
    for i in 0..model.agents {
        let mut per_agent = BTreeMap::new();
        for (w, name) in model.worlds.iter().enumerate() {
            let atoms: Vec<String> = {
                let mut v: Vec<String> =
                    model.awareness[i][w].iter().map(|a| model.vocab.name(a).to_string()).collect();
                v.sort();
                v
            };
            per_agent.insert(name.clone(), atoms);
        }
        awareness.push(per_agent);
    }
    // Standalone files carry only the model's own sublanguage.
    let atom_names: Vec<String> =
        model.atoms.iter().map(|a| model.vocab.name(a).to_string()).collect();
    serde_json::json!({
        "kind": "fh",
        "atoms": atom_names,
        "agents": model.agents,
        "worlds": model.worlds,
        "valuation": valuation,
        "relations": relations,
        "awareness": awareness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn single_world_model() -> FhModel {
        let vocab = Vocab::new(vec!["p".into()]).unwrap();
        FhModel::new(
            vocab.clone(),
            vocab.full_set(),
            1,
            vec!["w".into()],
            vec![vec![vec![0]]],
            vec![vec![AtomSet(0b1)]],
            vec![Some(0b1)],
        )
        .unwrap()
    }

    #[test]
    fn validates_single_world() {
        assert!(validate_fh(&single_world_model()).is_valid());
    }

    #[test]
    fn flags_awareness_constancy() {
        let vocab = Vocab::new(vec!["p".into(), "q".into()]).unwrap();
        let m = FhModel::new(
            vocab.clone(),
            vocab.full_set(),
            1,
            vec!["w".into(), "t".into()],
            vec![vec![vec![0, 1]]],
            vec![vec![AtomSet(0b01), AtomSet(0b11)]],
            vec![Some(0b01), Some(0b10)],
        )
        .unwrap();
        let rep = validate_fh(&m);
        assert!(rep.flags(Clause::FhAwarenessConstancy));
    }

    #[test]
    fn aw_contains_by_atoms() {
        let m = single_world_model();
        let vocab = &m.vocab;
        let p = Formula::Atom(AtomId(0));
        // p ∧ ¬p has atoms {p}.
        let contradiction = Formula::and(p.clone(), Formula::not(p.clone()));
        assert!(aw_contains(&m, 0, "w", &contradiction).unwrap());
        assert!(aw_contains(&m, 0, "w", &Formula::Top).unwrap());
        assert!(aw_contains(&m, 0, "w", &parse_formula("p", vocab).unwrap()).unwrap());
        assert!(aw_contains(&m, 1, "w", &p).is_err());
        assert!(aw_contains(&m, 0, "missing", &p).is_err());
    }

    #[test]
    fn sat_basic_clauses() {
        let m = single_world_model();
        let v = &m.vocab;
        assert!(fh_sat(&m, "w", &parse_formula("L1 p", v).unwrap()).unwrap());
        assert!(fh_sat(&m, "w", &parse_formula("K1 p", v).unwrap()).unwrap());
        assert!(!fh_sat(&m, "w", &parse_formula("~p", v).unwrap()).unwrap());
    }

    #[test]
    fn explicit_needs_awareness() {
        let vocab = Vocab::new(vec!["p".into()]).unwrap();
        let m = FhModel::new(
            vocab.clone(),
            vocab.full_set(),
            1,
            vec!["w".into()],
            vec![vec![vec![0]]],
            vec![vec![AtomSet::EMPTY]],
            vec![Some(0b1)],
        )
        .unwrap();
        let v = &m.vocab;
        assert!(fh_sat(&m, "w", &parse_formula("L1 p", v).unwrap()).unwrap());
        assert!(!fh_sat(&m, "w", &parse_formula("K1 p", v).unwrap()).unwrap());
    }

    #[test]
    fn k_equals_expansion() {
        let m = two_world_model();
        let v = &m.vocab;
        for w in ["w1", "w2"] {
            for text in ["K1 p", "K1 (p & q)", "K1 L1 q"] {
                let f = parse_formula(text, v).unwrap();
                assert_eq!(
                    fh_sat(&m, w, &f).unwrap(),
                    fh_sat(&m, w, &f.expand_k()).unwrap(),
                    "{text} at {w}"
                );
            }
        }
    }

    fn two_world_model() -> FhModel {
        let vocab = Vocab::new(vec!["p".into(), "q".into()]).unwrap();
        FhModel::new(
            vocab.clone(),
            vocab.full_set(),
            1,
            vec!["w1".into(), "w2".into()],
            vec![vec![vec![0, 1]]],
            vec![vec![AtomSet(0b01), AtomSet(0b01)]],
            vec![Some(0b11), Some(0b01)],
        )
        .unwrap()
    }

    #[test]
    fn box_semantics_and_truth() {
        let m = two_world_model();
        let v = &m.vocab;
        let lp = parse_formula("L1 p", v).unwrap();
        // p holds at both worlds, so L1 p holds; q only at w1.
        assert!(fh_sat(&m, "w1", &lp).unwrap());
        assert!(fh_sat(&m, "w2", &lp).unwrap());
        assert!(!fh_sat(&m, "w1", &parse_formula("L1 q", v).unwrap()).unwrap());
        // Truth: L1 p -> p at every world.
        for w in ["w1", "w2"] {
            assert!(fh_sat(&m, w, &parse_formula("L1 p -> p", v).unwrap()).unwrap());
            // Introspection comes with partition storage.
            assert!(fh_sat(&m, w, &parse_formula("L1 p -> L1 L1 p", v).unwrap()).unwrap());
            assert!(fh_sat(&m, w, &parse_formula("~L1 q -> L1 ~L1 q", v).unwrap()).unwrap());
        }
    }

    #[test]
    fn awareness_depends_only_on_atoms() {
        let m = two_world_model();
        let v = &m.vocab;
        let a1 = parse_formula("A1 q", v).unwrap();
        let a2 = parse_formula("A1 ~(q & q)", v).unwrap();
        for w in ["w1", "w2"] {
            assert_eq!(fh_sat(&m, w, &a1).unwrap(), fh_sat(&m, w, &a2).unwrap());
        }
    }

    #[test]
    fn json_roundtrip() {
        let m = two_world_model();
        let text = serde_json::to_string(&fh_to_json(&m)).unwrap();
        let back = fh_from_json(&text).unwrap();
        assert!(validate_fh(&back).is_valid());
        assert_eq!(back.worlds, m.worlds);
        assert_eq!(back.awareness, m.awareness);
        assert_eq!(back.valuation, m.valuation);
    }

    #[test]
    fn modal_equivalence_identity() {
        let m = two_world_model();
        let pairing: BTreeMap<String, String> =
            m.worlds.iter().map(|w| (w.clone(), w.clone())).collect();
        assert!(fh_modally_equivalent(&m, &m, &pairing, 3).unwrap());
    }

    #[test]
    fn modal_equivalence_detects_corruption() {
        let m = two_world_model();
        let mut corrupted = m.clone();
        corrupted.valuation[0] = Some(0b01); // p no longer true at w2
        let pairing: BTreeMap<String, String> =
            m.worlds.iter().map(|w| (w.clone(), w.clone())).collect();
        let witness = fh_find_inequivalence(&m, &corrupted, &pairing, 3).unwrap();
        assert!(witness.is_some());
    }
}
