//! Transformations between FH models (and their categories) and lattice
//! models, with class-membership guarantees and state-correspondence
//! traces.
//!
//! * category → implicit-knowledge-based lattice model: spaces are the
//!   member world sets, projections the morphisms, implicit blocks the
//!   accessibility blocks, awareness levels the awareness atom sets;
//! * FH model → complemented lattice model: build the category, apply the
//!   previous step, derive the explicit correspondence, drop the awareness
//!   function (a truncated variant stops before the derivation);
//! * complemented (resp. implicit-knowledge-based) lattice model → FH
//!   model over the top space, with awareness read off the explicit
//!   correspondence (resp. the awareness function).
//!
//! Outputs tag all states freshly; the correspondences live in the trace,
//! never in state identity.

use std::collections::BTreeMap;

use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::category::{build_category, FhCategory, RestrictionMode};
use crate::fh::{fh_to_json, FhError, FhModel, WorldMask};
use crate::hms::{
    hms_to_json, AwarenessFn, Event, HmsError, HmsFrame, HmsModel, ImplicitPc,
    StateId,
};
use crate::semantics::EvalCtx;
use crate::syntax::{AtomSet, Formula};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Fh(#[from] FhError),
    #[error(transparent)]
    Hms(#[from] HmsError),
    #[error("transform input invalid: {0}")]
    Input(String),
}

/// State correspondences recorded by a transform, by name.
#[derive(Debug, Clone, Default)]
pub struct TransformTrace {
    /// Hex digest of the serialized source model.
    pub source_digest: String,
    /// Lattice outputs: per space label, source world name → state name.
    pub world_to_state: BTreeMap<String, BTreeMap<String, String>>,
    /// FH outputs: top-space state name → world name.
    pub state_to_world: BTreeMap<String, String>,
    pub log: Vec<String>,
}

impl TransformTrace {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source": self.source_digest,
            "world_to_state": self.world_to_state,
            "state_to_world": self.state_to_world,
            "log": self.log,
        })
    }
}

fn digest_of(value: &serde_json::Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(value.to_string().as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Turn a category into an implicit-knowledge-based lattice model: member
/// worlds become spaces, morphisms become projections, accessibility
/// blocks become implicit blocks, awareness atom sets become awareness
/// levels, and each atom's valuation is collected across members and
/// canonicalized at the atom's own space.
pub fn t_transform(cat: &FhCategory) -> Result<(HmsModel, TransformTrace), TransformError> {
    let top = cat.model(cat.top_atoms);
    let vocab = top.vocab.clone();
    let agents = top.agents;

    let mut spaces = BTreeMap::new();
    for (set, model) in cat.models() {
        spaces.insert(set, model.worlds.clone());
    }
    let mut covering = BTreeMap::new();
    for (set, _) in cat.models() {
        for a in set.iter() {
            let below = set.remove(a);
            let map: Vec<u32> =
                cat.morphism_map(set, below).iter().map(|&t| t as u32).collect();
            covering.insert((set, a), map);
        }
    }
    let frame = HmsFrame::new(vocab, spaces, covering);

    let mut lambda = ImplicitPc::default();
    for i in 0..agents {
        let mut per_space = BTreeMap::new();
        for (set, model) in cat.models() {
            let masks: Vec<u64> =
                (0..model.world_count()).map(|w| model.block_mask_of(i, w)).collect();
            per_space.insert(set, masks);
        }
        lambda.block.push(per_space);
        lambda.uncovered.push(Vec::new());
        lambda.overlapping.push(Vec::new());
    }

    let mut alpha = AwarenessFn::default();
    for i in 0..agents {
        let mut per_agent = BTreeMap::new();
        for (set, model) in cat.models() {
            for w in 0..model.world_count() {
                per_agent
                    .insert(StateId { space: set, idx: w as u32 }, model.awareness_of(i, w));
            }
        }
        alpha.map.push(per_agent);
    }

    let mut valuation = vec![None; frame.vocab.len()];
    for p in cat.top_atoms.iter() {
        let mut raw = crate::hms::StateSet::new();
        for (set, model) in cat.models() {
            if !set.contains(p) {
                continue;
            }
            let mask = model.valuation_mask(p).unwrap_or(0);
            raw.set_mask(set, mask);
        }
        let own = AtomSet::singleton(p);
        let ev = crate::hms::canonicalize_event(&frame, &raw, own)
            .map_err(|e| TransformError::Input(format!("valuation of an atom is not an event: {e}")))?;
        valuation[p.0 as usize] = Some(ev);
    }

    let model = HmsModel { frame, agents, valuation, pi: None, lambda: Some(lambda), alpha: Some(alpha) };

    let mut trace =
        trace_with_world_names(cat, &cat.original_worlds, digest_of(&fh_to_json(top)));
    trace.log.push("category folded into a lattice model".into());
    Ok((model, trace))
}

fn trace_with_world_names(
    cat: &FhCategory,
    top_worlds: &[String],
    source_digest: String,
) -> TransformTrace {
    let mut trace = TransformTrace { source_digest, ..Default::default() };
    for (set, member) in cat.models() {
        let label = member.vocab.set_label(set);
        let mut map = BTreeMap::new();
        for (orig_idx, &member_idx) in cat.original_map(set).iter().enumerate() {
            map.insert(top_worlds[orig_idx].clone(), member.worlds[member_idx].clone());
        }
        trace.world_to_state.insert(label, map);
    }
    trace
}

/// FH model → complemented lattice model: category, fold, derive the
/// explicit correspondence, erase the awareness function.
pub fn hms_transform(
    top: &FhModel,
    mode: RestrictionMode,
) -> Result<(HmsModel, TransformTrace), TransformError> {
    let cat = build_category(top, mode)?;
    let (mut model, _) = t_transform(&cat)?;
    let pi = crate::hms::derive_pi_star(&model)?;
    model.pi = Some(pi);
    model.alpha = None;
    let mut trace = trace_with_world_names(&cat, &top.worlds, digest_of(&fh_to_json(top)));
    trace.log.push(format!("category built in {mode:?} mode, folded, explicit correspondence derived"));
    Ok((model, trace))
}

/// FH model → implicit-knowledge-based lattice model: the first two steps
/// only.
pub fn truncated_hms_transform(
    top: &FhModel,
    mode: RestrictionMode,
) -> Result<(HmsModel, TransformTrace), TransformError> {
    let cat = build_category(top, mode)?;
    let (model, _) = t_transform(&cat)?;
    let mut trace = trace_with_world_names(&cat, &top.worlds, digest_of(&fh_to_json(top)));
    trace.log.push(format!("category built in {mode:?} mode and folded; no explicit correspondence"));
    Ok((model, trace))
}

fn fh_from_lattice(
    m: &HmsModel,
    awareness_at: impl Fn(usize, StateId) -> Result<AtomSet, TransformError>,
) -> Result<(FhModel, TransformTrace), TransformError> {
    let lambda = m.lambda()?;
    let frame = &m.frame;
    let top_set = frame.full_set();
    let top_names = frame.space(top_set);
    let worlds: Vec<String> = top_names.to_vec();

    let mut blocks = Vec::with_capacity(m.agents);
    let mut awareness = Vec::with_capacity(m.agents);
    for i in 0..m.agents {
        let mut seen = std::collections::HashSet::new();
        let mut agent_blocks = Vec::new();
        for w in 0..worlds.len() {
            let s = StateId { space: top_set, idx: w as u32 };
            let mask = lambda.block_of(i, s);
            if mask == 0 {
                return Err(TransformError::Input(format!(
                    "implicit correspondence does not cover `{}`",
                    frame.state_name(s)
                )));
            }
            if seen.insert(mask) {
                agent_blocks
                    .push((0..worlds.len()).filter(|t| mask & (1 << t) != 0).collect::<Vec<_>>());
            }
        }
        blocks.push(agent_blocks);
        let mut aw = Vec::with_capacity(worlds.len());
        for w in 0..worlds.len() {
            aw.push(awareness_at(i, StateId { space: top_set, idx: w as u32 })?);
        }
        awareness.push(aw);
    }

    let mut valuation = vec![None; frame.vocab.len()];
    for p in frame.vocab.atoms() {
        let ev = m
            .valuation_event(p)
            .ok_or_else(|| TransformError::Input("missing valuation".into()))?;
        let up = ev.up_closure(frame);
        valuation[p.0 as usize] = Some(up.mask(top_set));
    }

    let model = FhModel::new(
        frame.vocab.clone(),
        top_set,
        m.agents,
        worlds.clone(),
        blocks,
        awareness,
        valuation,
    )?;
    let mut trace = TransformTrace {
        source_digest: digest_of(&hms_to_json(m)),
        ..Default::default()
    };
    for name in &worlds {
        trace.state_to_world.insert(name.clone(), name.clone());
    }
    trace.log.push("top space copied into an FH model".into());
    Ok((model, trace))
}

/// Complemented lattice model → FH model: worlds are the top space,
/// accessibility the implicit blocks there, awareness the language of the
/// explicit target space, valuation the top-space slice.
pub fn fh_transform(m: &HmsModel) -> Result<(FhModel, TransformTrace), TransformError> {
    let pi = m.pi()?.clone();
    fh_from_lattice(m, move |i, s| {
        pi.get(i, s)
            .map(|t| t.space)
            .ok_or_else(|| TransformError::Input("explicit correspondence not total".into()))
    })
}

/// Implicit-knowledge-based lattice model → FH model: like the previous
/// transform, but awareness comes from the awareness function.
pub fn fh_star_transform(m: &HmsModel) -> Result<(FhModel, TransformTrace), TransformError> {
    let alpha = m.alpha()?.clone();
    fh_from_lattice(m, move |i, s| {
        alpha
            .get(i, s)
            .ok_or_else(|| TransformError::Input("awareness function not total".into()))
    })
}

/// A disagreement found by a transform equivalence check.
#[derive(Debug, Clone)]
pub struct TransferWitness {
    pub formula: Formula,
    pub world: String,
    pub space: Option<AtomSet>,
}

/// Check that an FH model and a lattice transform of it satisfy the same
/// formulas: for every formula up to `depth`, every world, and every space
/// whose index contains the formula's atoms, satisfaction at the world
/// matches satisfaction at the traced state. Exhaustive via signature
/// classes (formula atoms, truth mask, extension event).
pub fn check_fh_to_hms_equivalence(
    top: &FhModel,
    m: &HmsModel,
    trace: &TransformTrace,
    depth: usize,
) -> Result<Option<TransferWitness>, TransformError> {
    let mut ctx = EvalCtx::new(m)?;
    // Resolve the trace into state ids per (space, world index).
    let mut per_space: BTreeMap<AtomSet, Vec<StateId>> = BTreeMap::new();
    for (label, map) in &trace.world_to_state {
        let set = m
            .frame
            .vocab
            .parse_set_label(label)
            .map_err(|e| TransformError::Input(e.to_string()))?;
        let mut states = Vec::with_capacity(top.world_count());
        for w in &top.worlds {
            let name = map.get(w).ok_or_else(|| {
                TransformError::Input(format!("trace misses world `{w}` at `{label}`"))
            })?;
            states.push(m.state(name)?);
        }
        per_space.insert(set, states);
    }

    type Sig = (AtomSet, WorldMask, Event);
    let mut seen = std::collections::HashSet::new();

    let check = |f: &Formula,
                 sig: &Sig,
                 ctx: &mut EvalCtx<'_>|
     -> Result<Option<TransferWitness>, TransformError> {
        let up = sig.2.up_closure(&ctx.model.frame);
        for (set, states) in &per_space {
            if !sig.0.is_subset(*set) {
                continue;
            }
            for (w, state) in states.iter().enumerate() {
                let here = sig.1 & (1 << w) != 0;
                let there = up.contains(*state);
                if here != there {
                    return Ok(Some(TransferWitness {
                        formula: f.clone(),
                        world: top.worlds[w].clone(),
                        space: Some(*set),
                    }));
                }
            }
        }
        Ok(None)
    };

    let mut level: Vec<(Formula, Sig)> = Vec::new();
    let mut start = vec![Formula::Top];
    start.extend(top.atoms.iter().map(Formula::Atom));
    for f in start {
        let sig = (f.atoms(), top.truth_mask(&f)?, ctx.extension(&f)?);
        if seen.insert(sig) {
            if let Some(w) = check(&f, &sig, &mut ctx)? {
                return Ok(Some(w));
            }
            level.push((f, sig));
        }
    }

    let mut all: Vec<(Formula, Sig)> = Vec::new();
    for _ in 0..depth {
        if level.is_empty() {
            break;
        }
        all.extend(level.iter().cloned());
        let prev = std::mem::take(&mut level);
        let mut candidates: Vec<Formula> = Vec::new();
        for (f, _) in &prev {
            candidates.push(Formula::not(f.clone()));
            for i in 0..top.agents {
                candidates.push(Formula::l(i, f.clone()));
                candidates.push(Formula::a(i, f.clone()));
                candidates.push(Formula::k(i, f.clone()));
            }
        }
        for (lf, _) in all.iter().chain(prev.iter()) {
            for (rf, _) in &prev {
                candidates.push(Formula::and(lf.clone(), rf.clone()));
            }
        }
        for f in candidates {
            let sig = (f.atoms(), top.truth_mask(&f)?, ctx.extension(&f)?);
            if seen.insert(sig) {
                if let Some(w) = check(&f, &sig, &mut ctx)? {
                    return Ok(Some(w));
                }
                level.push((f, sig));
            }
        }
    }
    Ok(None)
}

/// Check that a lattice model and an FH transform of it satisfy the same
/// formulas at every top-space state.
pub fn check_hms_to_fh_equivalence(
    m: &HmsModel,
    k: &FhModel,
    trace: &TransformTrace,
    depth: usize,
) -> Result<Option<TransferWitness>, TransformError> {
    let mut ctx = EvalCtx::new(m)?;
    let top_set = m.frame.full_set();
    let mut pairing = Vec::with_capacity(m.frame.space_len(top_set));
    for name in m.frame.space(top_set) {
        let world = trace.state_to_world.get(name).ok_or_else(|| {
            TransformError::Input(format!("trace misses state `{name}`"))
        })?;
        pairing.push(k.world_index(world)?);
    }

    type Sig = (AtomSet, Event, WorldMask);
    let mut seen = std::collections::HashSet::new();
    let mut level: Vec<(Formula, Sig)> = Vec::new();
    let mut all: Vec<(Formula, Sig)> = Vec::new();

    let check = |f: &Formula, sig: &Sig, ctx: &mut EvalCtx<'_>| -> Option<TransferWitness> {
        let up = sig.1.up_closure(&ctx.model.frame);
        for (idx, &w) in pairing.iter().enumerate() {
            let state = StateId { space: top_set, idx: idx as u32 };
            let here = up.contains(state);
            let there = sig.2 & (1 << w) != 0;
            if here != there {
                return Some(TransferWitness {
                    formula: f.clone(),
                    world: ctx.model.frame.state_name(state).to_string(),
                    space: None,
                });
            }
        }
        None
    };

    let mut start = vec![Formula::Top];
    start.extend(k.atoms.iter().map(Formula::Atom));
    for f in start {
        let sig = (f.atoms(), ctx.extension(&f)?, k.truth_mask(&f)?);
        if seen.insert(sig) {
            if let Some(w) = check(&f, &sig, &mut ctx) {
                return Ok(Some(w));
            }
            level.push((f, sig));
        }
    }

    for _ in 0..depth {
        if level.is_empty() {
            break;
        }
        all.extend(level.iter().cloned());
        let prev = std::mem::take(&mut level);
        let mut candidates: Vec<Formula> = Vec::new();
        for (f, _) in &prev {
            candidates.push(Formula::not(f.clone()));
            for i in 0..k.agents {
                candidates.push(Formula::l(i, f.clone()));
                candidates.push(Formula::a(i, f.clone()));
                candidates.push(Formula::k(i, f.clone()));
            }
        }
        for (lf, _) in all.iter().chain(prev.iter()) {
            for (rf, _) in &prev {
                candidates.push(Formula::and(lf.clone(), rf.clone()));
            }
        }
        for f in candidates {
            let sig = (f.atoms(), ctx.extension(&f)?, k.truth_mask(&f)?);
            if seen.insert(sig) {
                if let Some(w) = check(&f, &sig, &mut ctx) {
                    return Ok(Some(w));
                }
                level.push((f, sig));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fh::{fh_from_json, fh_modally_equivalent, validate_fh};
    use crate::hms::testutil::{fig1_left, fig1_right, fig1_right_ikb};
    use crate::hms::{validate_alpha, validate_lambda, validate_pi};
    use crate::syntax::parse_formula;

    fn top_two_worlds() -> FhModel {
        fh_from_json(
            r#"{
  "kind": "fh",
  "atoms": ["p", "q"],
  "agents": 1,
  "worlds": ["w1", "w2"],
  "valuation": {"p": ["w1", "w2"], "q": ["w1"]},
  "relations": [[["w1"], ["w2"]]],
  "awareness": [{"w1": ["p"], "w2": ["p"]}]
}"#,
        )
        .unwrap()
    }

    #[test]
    fn t_transform_of_copy_category_counts() {
        let top = top_two_worlds();
        let cat = build_category(&top, RestrictionMode::Copy).unwrap();
        let (m, _) = t_transform(&cat).unwrap();
        // Four spaces, two states each.
        assert_eq!(m.frame.space_sets().count(), 4);
        for set in m.frame.space_sets() {
            assert_eq!(m.frame.space_len(set), 2);
        }
        assert!(validate_lambda(&m).unwrap().is_valid());
        assert!(validate_alpha(&m).unwrap().is_valid());
        assert!(crate::hms::validate_frame(&m.frame).is_valid());
    }

    #[test]
    fn t_transform_awareness_levels_follow_atom_sets() {
        let top = top_two_worlds();
        let cat = build_category(&top, RestrictionMode::Copy).unwrap();
        let (m, trace) = t_transform(&cat).unwrap();
        let alpha = m.alpha.as_ref().unwrap();
        let p_space = m.frame.vocab.parse_set_label("p").unwrap();
        // Awareness {p} at the top worlds becomes the p-space level.
        let top_label = m.frame.vocab.set_label(m.frame.full_set());
        for state_name in trace.world_to_state[&top_label].values() {
            let s = m.state(state_name).unwrap();
            assert_eq!(alpha.get(0, s), Some(p_space));
        }
    }

    #[test]
    fn single_world_empty_vocab_transform() {
        let top = fh_from_json(
            r#"{
  "kind": "fh",
  "atoms": [],
  "agents": 1,
  "worlds": ["w"],
  "valuation": {},
  "relations": [[["w"]]],
  "awareness": [{"w": []}]
}"#,
        )
        .unwrap();
        let cat = build_category(&top, RestrictionMode::Copy).unwrap();
        let (m, _) = t_transform(&cat).unwrap();
        assert_eq!(m.frame.space_sets().count(), 1);
        assert_eq!(m.frame.state_count(), 1);
    }

    #[test]
    fn hms_transform_is_complemented_and_equivalent() {
        let top = top_two_worlds();
        let (m, trace) = hms_transform(&top, RestrictionMode::Copy).unwrap();
        assert_eq!(m.kind().unwrap(), crate::hms::HmsKind::Complemented);
        assert!(validate_pi(&m).unwrap().is_valid());
        assert!(validate_lambda(&m).unwrap().is_valid());
        let w = check_fh_to_hms_equivalence(&top, &m, &trace, 3).unwrap();
        assert!(w.is_none(), "witness: {w:?}");
    }

    #[test]
    fn full_awareness_makes_explicit_equal_implicit() {
        let top = fh_from_json(
            r#"{
  "kind": "fh",
  "atoms": ["p"],
  "agents": 1,
  "worlds": ["w1", "w2"],
  "valuation": {"p": ["w1"]},
  "relations": [[["w1", "w2"]]],
  "awareness": [{"w1": ["p"], "w2": ["p"]}]
}"#,
        )
        .unwrap();
        let (m, _) = hms_transform(&top, RestrictionMode::Copy).unwrap();
        let pi = m.pi.as_ref().unwrap();
        let lambda = m.lambda.as_ref().unwrap();
        for s in m.frame.states() {
            let t = pi.get(0, s).unwrap();
            assert_eq!(t.space, s.space);
            assert_eq!(t.mask, lambda.block_of(0, s));
        }
    }

    #[test]
    fn truncated_transform_is_ikb() {
        let top = top_two_worlds();
        let (m, trace) = truncated_hms_transform(&top, RestrictionMode::Quotient).unwrap();
        assert_eq!(m.kind().unwrap(), crate::hms::HmsKind::ImplicitKnowledgeBased);
        assert!(validate_lambda(&m).unwrap().is_valid());
        assert!(validate_alpha(&m).unwrap().is_valid());
        let w = check_fh_to_hms_equivalence(&top, &m, &trace, 3).unwrap();
        assert!(w.is_none(), "witness: {w:?}");
    }

    #[test]
    fn fh_transform_of_left_model() {
        let m = fig1_left();
        let (k, trace) = fh_transform(&m).unwrap();
        assert!(validate_fh(&k).is_valid());
        // Awareness at the top worlds is the explicit target space: {p}.
        let p_set = k.vocab.parse_set_label("p").unwrap();
        for w in 0..k.world_count() {
            assert_eq!(k.awareness_of(0, w), p_set);
        }
        let witness = check_hms_to_fh_equivalence(&m, &k, &trace, 3).unwrap();
        assert!(witness.is_none(), "witness: {witness:?}");
        // Explicit knowledge of p carries over to the FH side at pq.
        let f = parse_formula("K1 p & ~A1 q", &k.vocab).unwrap();
        assert!(crate::fh::fh_sat(&k, "pq", &f).unwrap());
    }

    #[test]
    fn fh_transform_of_right_model_keeps_implicit_knowledge() {
        let m = fig1_right();
        let (k, trace) = fh_transform(&m).unwrap();
        assert!(validate_fh(&k).is_valid());
        let witness = check_hms_to_fh_equivalence(&m, &k, &trace, 3).unwrap();
        assert!(witness.is_none(), "witness: {witness:?}");
        let f = parse_formula("L1 q & ~A1 q & ~K1 q", &k.vocab).unwrap();
        assert!(crate::fh::fh_sat(&k, "pq", &f).unwrap());
    }

    #[test]
    fn fh_star_transform_uses_awareness_levels() {
        let m = fig1_right_ikb();
        let (k, trace) = fh_star_transform(&m).unwrap();
        assert!(validate_fh(&k).is_valid());
        let p_set = k.vocab.parse_set_label("p").unwrap();
        for w in 0..k.world_count() {
            assert_eq!(k.awareness_of(0, w), p_set);
        }
        let witness = check_hms_to_fh_equivalence(&m, &k, &trace, 3).unwrap();
        assert!(witness.is_none(), "witness: {witness:?}");
    }

    #[test]
    fn one_space_model_gives_full_awareness() {
        let m = crate::hms::hms_from_json(
            r#"{
  "kind": "hms",
  "atoms": [],
  "agents": 1,
  "spaces": {"": ["s", "t"]},
  "projections": {},
  "valuation": {},
  "pi": [{"s": ["s", "t"], "t": ["s", "t"]}],
  "lambda": [[["s", "t"]]]
}"#,
        )
        .unwrap();
        let (k, _) = fh_transform(&m).unwrap();
        for w in 0..k.world_count() {
            assert_eq!(k.awareness_of(0, w), AtomSet::EMPTY);
        }
    }

    #[test]
    fn round_trip_modal_equivalence() {
        let top = top_two_worlds();
        let (m, t1) = hms_transform(&top, RestrictionMode::Copy).unwrap();
        let (k, t2) = fh_transform(&m).unwrap();
        // Compose the two traces into a world pairing.
        let top_label = top.vocab.set_label(top.atoms);
        let mut pairing = BTreeMap::new();
        for w in &top.worlds {
            let state = &t1.world_to_state[&top_label][w];
            pairing.insert(w.clone(), t2.state_to_world[state].clone());
        }
        assert!(fh_modally_equivalent(&top, &k, &pairing, 3).unwrap());
    }
}
