//! The lattice-model file format.
//!
//! ```json
//! {"kind":"hms","atoms":["p","q"],"agents":1,
//!  "spaces":{"p,q":["pq"],"p":["p"],"q":["q"],"":["*"]},
//!  "projections":{"p,q->p":{"pq":"p"}, "...": {}},
//!  "valuation":{"p":{"space":"p","base":["p"]}},
//!  "pi":[{"pq":["p"]}],
//!  "lambda":[[["pq"],["p"]]],
//!  "alpha":[{"pq":"p"}]}
//! ```
//!
//! Space keys are comma-joined lexicographically sorted atom names, `""`
//! for the empty set. Projections are stored for covering pairs only
//! (dropping a single atom); all other projections are compositions.
//! `pi`, `lambda`, and `alpha` are optional; each lists one entry per
//! agent. Empty valuation bases are allowed and denote the tagged vacuous
//! event.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::json;

use crate::syntax::{AtomSet, Vocab};

use super::event::Event;
use super::frame::{HmsFrame, StateId, MAX_SPACE_STATES};
use super::model::{AwarenessFn, ExplicitPc, HmsError, HmsModel, ImplicitPc, PiTarget};

#[derive(Debug, Deserialize)]
struct RawHms {
    kind: String,
    atoms: Vec<String>,
    agents: usize,
    spaces: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    projections: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    valuation: BTreeMap<String, RawEvent>,
    #[serde(default)]
    pi: Option<Vec<BTreeMap<String, Vec<String>>>>,
    #[serde(default)]
    lambda: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    alpha: Option<Vec<BTreeMap<String, String>>>,
}

#[derive(Debug, Deserialize)]
struct RawEvent {
    space: String,
    base: Vec<String>,
}

fn fmt_err(msg: impl Into<String>) -> HmsError {
    HmsError::Format(msg.into())
}

pub fn hms_from_json(text: &str) -> Result<HmsModel, HmsError> {
    let raw: RawHms = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
    if raw.kind != "hms" {
        return Err(fmt_err(format!("expected kind `hms`, got `{}`", raw.kind)));
    }
    if raw.agents == 0 {
        return Err(fmt_err("a model needs at least one agent"));
    }
    let vocab = Vocab::new(raw.atoms).map_err(|e| fmt_err(e.to_string()))?;

    let mut spaces_by_set: BTreeMap<AtomSet, Vec<String>> = BTreeMap::new();
    for (key, names) in &raw.spaces {
        let set = vocab.parse_set_label(key).map_err(|e| fmt_err(e.to_string()))?;
        if names.len() > MAX_SPACE_STATES {
            return Err(fmt_err(format!(
                "space `{key}` has more than {MAX_SPACE_STATES} states"
            )));
        }
        if spaces_by_set.insert(set, names.clone()).is_some() {
            return Err(fmt_err(format!("space `{key}` listed twice")));
        }
    }

    let mut covering = BTreeMap::new();
    let empty_frame = HmsFrame::new(vocab.clone(), spaces_by_set.clone(), BTreeMap::new());
    for (key, map) in &raw.projections {
        let (from_key, to_key) = key
            .split_once("->")
            .ok_or_else(|| fmt_err(format!("projection key `{key}` is not `from->to`")))?;
        let from = vocab.parse_set_label(from_key).map_err(|e| fmt_err(e.to_string()))?;
        let to = vocab.parse_set_label(to_key).map_err(|e| fmt_err(e.to_string()))?;
        if !to.is_subset(from) || from.minus(to).len() != 1 {
            return Err(fmt_err(format!(
                "projection `{key}` is not a covering pair; only single-atom drops are stored"
            )));
        }
        let drop = from.minus(to).iter().next().unwrap();
        let from_names = empty_frame.space(from);
        let to_names = empty_frame.space(to);
        let mut v = vec![u32::MAX; from_names.len()];
        for (src, dst) in map {
            let si = from_names
                .iter()
                .position(|n| n == src)
                .ok_or_else(|| fmt_err(format!("projection `{key}`: `{src}` not in source")))?;
            let di = to_names
                .iter()
                .position(|n| n == dst)
                .ok_or_else(|| fmt_err(format!("projection `{key}`: `{dst}` not in target")))?;
            v[si] = di as u32;
        }
        if v.iter().any(|&d| d == u32::MAX) {
            return Err(fmt_err(format!("projection `{key}` is not total")));
        }
        covering.insert((from, drop), v);
    }

    let frame = HmsFrame::new(vocab, spaces_by_set, covering);

    let find = |name: &str| -> Result<StateId, HmsError> {
        frame.find_state(name).ok_or_else(|| HmsError::UnknownState(name.to_string()))
    };

    let mut valuation = vec![None; frame.vocab.len()];
    for (atom_name, ev) in &raw.valuation {
        let a = frame
            .vocab
            .lookup(atom_name)
            .ok_or_else(|| fmt_err(format!("unknown atom `{atom_name}` in valuation")))?;
        let space =
            frame.vocab.parse_set_label(&ev.space).map_err(|e| fmt_err(e.to_string()))?;
        let mut base = 0u64;
        for name in &ev.base {
            let s = find(name)?;
            if s.space != space {
                return Err(fmt_err(format!(
                    "valuation of `{atom_name}`: `{name}` is not in space `{}`",
                    ev.space
                )));
            }
            base |= 1 << s.idx;
        }
        valuation[a.0 as usize] = Some(Event { base_space: space, base });
    }
    for a in frame.vocab.atoms() {
        if valuation[a.0 as usize].is_none() {
            return Err(fmt_err(format!(
                "no valuation for atom `{}`",
                frame.vocab.name(a)
            )));
        }
    }

    let pi = match &raw.pi {
        None => None,
        Some(per_agent) => {
            if per_agent.len() != raw.agents {
                return Err(fmt_err("`pi` must list one map per agent"));
            }
            let mut pc = ExplicitPc::default();
            for m in per_agent {
                let mut agent_map = BTreeMap::new();
                for (src, targets) in m {
                    let s = find(src)?;
                    if targets.is_empty() {
                        return Err(fmt_err(format!("`pi` at `{src}`: possibility set empty")));
                    }
                    let mut space = None;
                    let mut mask = 0u64;
                    for t in targets {
                        let ts = find(t)?;
                        match space {
                            None => space = Some(ts.space),
                            Some(sp) if sp != ts.space => {
                                return Err(fmt_err(format!(
                                    "`pi` at `{src}`: possibility set spans two spaces"
                                )))
                            }
                            _ => {}
                        }
                        mask |= 1 << ts.idx;
                    }
                    agent_map.insert(s, PiTarget { space: space.unwrap(), mask });
                }
                for s in frame.states() {
                    if !agent_map.contains_key(&s) {
                        return Err(fmt_err(format!(
                            "`pi` is not total: no entry for `{}`",
                            frame.state_name(s)
                        )));
                    }
                }
                pc.map.push(agent_map);
            }
            Some(pc)
        }
    };

    let lambda = match &raw.lambda {
        None => None,
        Some(per_agent) => {
            if per_agent.len() != raw.agents {
                return Err(fmt_err("`lambda` must list one block list per agent"));
            }
            let mut pc = ImplicitPc::default();
            for blocks in per_agent {
                let mut per_space: BTreeMap<AtomSet, Vec<u64>> = BTreeMap::new();
                for set in frame.space_sets() {
                    per_space.insert(set, vec![0u64; frame.space_len(set)]);
                }
                let mut overlapping = Vec::new();
                for block in blocks {
                    if block.is_empty() {
                        continue;
                    }
                    let mut space = None;
                    let mut mask = 0u64;
                    let mut members = Vec::new();
                    for name in block {
                        let s = find(name)?;
                        match space {
                            None => space = Some(s.space),
                            Some(sp) if sp != s.space => {
                                return Err(fmt_err(format!(
                                    "`lambda` block containing `{name}` spans two spaces"
                                )))
                            }
                            _ => {}
                        }
                        mask |= 1 << s.idx;
                        members.push(s);
                    }
                    let space = space.unwrap();
                    let slot = per_space.get_mut(&space).unwrap();
                    for s in members {
                        if slot[s.idx as usize] != 0 {
                            overlapping.push(s);
                        }
                        slot[s.idx as usize] |= mask;
                    }
                }
                let mut uncovered = Vec::new();
                for s in frame.states() {
                    if per_space[&s.space][s.idx as usize] == 0 {
                        uncovered.push(s);
                    }
                }
                pc.block.push(per_space);
                pc.uncovered.push(uncovered);
                pc.overlapping.push(overlapping);
            }
            Some(pc)
        }
    };

    let alpha = match &raw.alpha {
        None => None,
        Some(per_agent) => {
            if per_agent.len() != raw.agents {
                return Err(fmt_err("`alpha` must list one map per agent"));
            }
            let mut af = AwarenessFn::default();
            for m in per_agent {
                let mut agent_map = BTreeMap::new();
                for (src, level) in m {
                    let s = find(src)?;
                    let set =
                        frame.vocab.parse_set_label(level).map_err(|e| fmt_err(e.to_string()))?;
                    agent_map.insert(s, set);
                }
                for s in frame.states() {
                    if !agent_map.contains_key(&s) {
                        return Err(fmt_err(format!(
                            "`alpha` is not total: no entry for `{}`",
                            frame.state_name(s)
                        )));
                    }
                }
                af.map.push(agent_map);
            }
            Some(af)
        }
    };

    let model = HmsModel { frame, agents: raw.agents, valuation, pi, lambda, alpha };
    model.kind()?;
    Ok(model)
}

pub fn hms_to_json(m: &HmsModel) -> serde_json::Value {
    let frame = &m.frame;
    let vocab = &frame.vocab;
    let mut spaces = BTreeMap::new();
    for set in frame.space_sets() {
        spaces.insert(vocab.set_label(set), frame.space(set).to_vec());
    }
    let mut projections = BTreeMap::new();
    for set in frame.space_sets() {
        for a in set.iter() {
            let below = set.remove(a);
            if let Some(map) = frame.covering_map(set, a) {
                let key = format!("{}->{}", vocab.set_label(set), vocab.set_label(below));
                let entries: BTreeMap<String, String> = map
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| {
                        (
                            frame.space(set)[i].clone(),
                            frame.space(below)[d as usize].clone(),
                        )
                    })
                    .collect();
                projections.insert(key, entries);
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for a in vocab.atoms() {
        if let Some(ev) = m.valuation_event(a) {
            let base: Vec<String> = super::frame::iter_mask(ev.base)
                .map(|i| frame.space(ev.base_space)[i as usize].clone())
                .collect();
            valuation.insert(
                vocab.name(a).to_string(),
                json!({"space": vocab.set_label(ev.base_space), "base": base}),
            );
        }
    }
    let pi = m.pi.as_ref().map(|pc| {
        pc.map
            .iter()
            .map(|agent_map| {
                let mut out = BTreeMap::new();
                for (s, t) in agent_map {
                    let targets: Vec<String> = super::frame::iter_mask(t.mask)
                        .map(|i| frame.space(t.space)[i as usize].clone())
                        .collect();
                    out.insert(frame.state_name(*s).to_string(), targets);
                }
                out
            })
            .collect::<Vec<_>>()
    });
    let lambda = m.lambda.as_ref().map(|pc| {
        pc.block
            .iter()
            .map(|per_space| {
                let mut blocks: Vec<Vec<String>> = Vec::new();
                for (space, masks) in per_space {
                    let mut seen = std::collections::HashSet::new();
                    for (idx, &mask) in masks.iter().enumerate() {
                        if mask != 0 && seen.insert(mask) && mask & (1 << idx) != 0 {
                            blocks.push(
                                super::frame::iter_mask(mask)
                                    .map(|i| frame.space(*space)[i as usize].clone())
                                    .collect(),
                            );
                        }
                    }
                }
                blocks
            })
            .collect::<Vec<_>>()
    });
    let alpha = m.alpha.as_ref().map(|af| {
        af.map
            .iter()
            .map(|agent_map| {
                agent_map
                    .iter()
                    .map(|(s, level)| {
                        (frame.state_name(*s).to_string(), vocab.set_label(*level))
                    })
                    .collect::<BTreeMap<_, _>>()
            })
            .collect::<Vec<_>>()
    });
    let mut value = json!({
        "kind": "hms",
        "atoms": vocab.names(),
        "agents": m.agents,
        "spaces": spaces,
        "projections": projections,
        "valuation": valuation,
    });
    let obj = value.as_object_mut().unwrap();
    if let Some(pi) = pi {
        obj.insert("pi".into(), json!(pi));
    }
    if let Some(lambda) = lambda {
        obj.insert("lambda".into(), json!(lambda));
    }
    if let Some(alpha) = alpha {
        obj.insert("alpha".into(), json!(alpha));
    }
    value
}

#[cfg(test)]
mod tests {
    use super::super::testutil;
    use super::*;

    #[test]
    fn loads_figure_fixtures() {
        let left = hms_from_json(testutil::FIG1_LEFT).unwrap();
        assert_eq!(left.kind().unwrap(), super::super::model::HmsKind::Complemented);
        assert_eq!(left.frame.state_count(), 9);
        let ikb = hms_from_json(testutil::FIG1_RIGHT_IKB).unwrap();
        assert_eq!(ikb.kind().unwrap(), super::super::model::HmsKind::ImplicitKnowledgeBased);
    }

    #[test]
    fn roundtrips_through_json() {
        let left = testutil::fig1_left();
        let text = serde_json::to_string(&hms_to_json(&left)).unwrap();
        let again = hms_from_json(&text).unwrap();
        assert_eq!(serde_json::to_string(&hms_to_json(&again)).unwrap(), text);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(hms_from_json("{}").is_err());
        // Possibility set spanning two spaces.
        let bad = testutil::FIG1_LEFT.replace(r#""pq": ["p"]"#, r#""pq": ["p", "q"]"#);
        assert!(hms_from_json(&bad).is_err());
        // Missing valuation.
        let bad = testutil::FIG1_LEFT.replace(r#""p": {"space": "p", "base": ["p"]},"#, "");
        assert!(hms_from_json(&bad).is_err());
    }
}
