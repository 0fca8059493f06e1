//! The lattice of state spaces and its projections.
//!
//! Spaces are indexed by subsets of the vocabulary; the lattice is complete
//! by construction because a frame stores one space per subset. Projections
//! are stored only for covering pairs `Φ → Φ∖{x}`; general projections are
//! composed on demand, and path independence across compositions is
//! validated once per frame (adjacent covering squares commuting is enough
//! for all paths to agree).

use std::collections::BTreeMap;

use crate::report::{Clause, ValidationReport};
use crate::syntax::{AtomId, AtomSet, Vocab};

/// Per-space sets of states fit in one word.
pub const MAX_SPACE_STATES: usize = 64;

/// A state, identified by its space and its index within that space.
/// Disjointness of spaces is built into the representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    pub space: AtomSet,
    pub idx: u32,
}

#[derive(Debug, Clone)]
pub struct HmsFrame {
    pub vocab: Vocab,
    /// State names per space, indexed by the space's atom-set bitmask.
    spaces: Vec<Vec<String>>,
    /// For each (space, dropped atom): the covering projection as an index
    /// map into the space one atom below.
    covering: BTreeMap<(AtomSet, AtomId), Vec<u32>>,
}

impl HmsFrame {
    pub fn new(
        vocab: Vocab,
        spaces_by_set: BTreeMap<AtomSet, Vec<String>>,
        covering: BTreeMap<(AtomSet, AtomId), Vec<u32>>,
    ) -> Self {
        let n = 1usize << vocab.len();
        let mut spaces = vec![Vec::new(); n];
        for (set, names) in spaces_by_set {
            spaces[set.0 as usize] = names;
        }
        HmsFrame { vocab, spaces, covering }
    }

    pub fn full_set(&self) -> AtomSet {
        self.vocab.full_set()
    }

    /// All space indices, ascending in the bitmask order.
    pub fn space_sets(&self) -> impl Iterator<Item = AtomSet> + '_ {
        (0..self.spaces.len()).map(|i| AtomSet(i as u16))
    }

    pub fn space(&self, set: AtomSet) -> &[String] {
        &self.spaces[set.0 as usize]
    }

    pub fn space_len(&self, set: AtomSet) -> usize {
        self.spaces[set.0 as usize].len()
    }

    pub fn space_mask(&self, set: AtomSet) -> u64 {
        let n = self.space_len(set);
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.spaces[s.space.0 as usize][s.idx as usize]
    }

    pub fn state_count(&self) -> usize {
        self.spaces.iter().map(|s| s.len()).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.space_sets().flat_map(move |set| {
            (0..self.space_len(set) as u32).map(move |idx| StateId { space: set, idx })
        })
    }

    /// Look a state up by name, across all spaces.
    pub fn find_state(&self, name: &str) -> Option<StateId> {
        for set in self.space_sets() {
            if let Some(idx) = self.space(set).iter().position(|n| n == name) {
                return Some(StateId { space: set, idx: idx as u32 });
            }
        }
        None
    }

    pub fn covering_map(&self, space: AtomSet, drop: AtomId) -> Option<&Vec<u32>> {
        self.covering.get(&(space, drop))
    }

    /// Project a state to the space indexed by `target ⊆ space(ω)`,
    /// composing covering projections in ascending atom order.
    pub fn project_state(&self, state: StateId, target: AtomSet) -> StateId {
        debug_assert!(target.is_subset(state.space));
        let mut cur = state;
        for a in state.space.minus(target).iter() {
            let map = &self.covering[&(cur.space, a)];
            cur = StateId { space: cur.space.remove(a), idx: map[cur.idx as usize] };
        }
        cur
    }

    /// Project a set of states (mask within `space`) onto `target`.
    pub fn project_mask(&self, space: AtomSet, mask: u64, target: AtomSet) -> u64 {
        let mut out = 0u64;
        for idx in iter_mask(mask) {
            let s = self.project_state(StateId { space, idx }, target);
            out |= 1 << s.idx;
        }
        out
    }

    /// Inverse image of a set under the projection from `space ⊇ target`.
    pub fn inverse_mask(&self, target: AtomSet, mask: u64, space: AtomSet) -> u64 {
        let mut out = 0u64;
        for idx in 0..self.space_len(space) as u32 {
            let s = self.project_state(StateId { space, idx }, target);
            if mask & (1 << s.idx) != 0 {
                out |= 1 << idx;
            }
        }
        out
    }
}

pub(crate) fn iter_mask(mask: u64) -> impl Iterator<Item = u32> {
    (0..64u32).filter(move |b| mask & (1 << b) != 0)
}

/// Frame-level validation: all spaces present and non-empty, state names
/// globally unique, covering projections present, surjective, and
/// path-independent on every covering square.
pub fn validate_frame(frame: &HmsFrame) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let mut names: BTreeMap<&str, AtomSet> = BTreeMap::new();
    for set in frame.space_sets() {
        let space = frame.space(set);
        if space.is_empty() {
            rep.add(
                Clause::FrameSpaceEmpty,
                None,
                format!("space `{}` is empty or missing", frame.vocab.set_label(set)),
            );
        }
        for n in space {
            if let Some(other) = names.insert(n, set) {
                rep.add(
                    Clause::FrameStateNameClash,
                    None,
                    format!(
                        "state `{n}` appears in spaces `{}` and `{}`",
                        frame.vocab.set_label(other),
                        frame.vocab.set_label(set)
                    ),
                );
            }
        }
    }
    for set in frame.space_sets() {
        for a in set.iter() {
            let below = set.remove(a);
            match frame.covering_map(set, a) {
                None => rep.add(
                    Clause::FrameProjectionMissing,
                    None,
                    format!(
                        "no projection `{} -> {}`",
                        frame.vocab.set_label(set),
                        frame.vocab.set_label(below)
                    ),
                ),
                Some(map) => {
                    if map.len() != frame.space_len(set) {
                        rep.add(
                            Clause::FrameProjectionMissing,
                            None,
                            format!(
                                "projection `{} -> {}` is not total",
                                frame.vocab.set_label(set),
                                frame.vocab.set_label(below)
                            ),
                        );
                        continue;
                    }
                    let mut hit = 0u64;
                    for &t in map {
                        if (t as usize) < frame.space_len(below) {
                            hit |= 1 << t;
                        } else {
                            rep.add(
                                Clause::FrameProjectionMissing,
                                None,
                                format!(
                                    "projection `{} -> {}` maps outside the target space",
                                    frame.vocab.set_label(set),
                                    frame.vocab.set_label(below)
                                ),
                            );
                        }
                    }
                    if hit != frame.space_mask(below) {
                        rep.add(
                            Clause::FrameProjectionNotSurjective,
                            None,
                            format!(
                                "projection `{} -> {}` misses states",
                                frame.vocab.set_label(set),
                                frame.vocab.set_label(below)
                            ),
                        );
                    }
                }
            }
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    // Covering squares commute: dropping x then y agrees with y then x.
    for set in frame.space_sets() {
        let atoms: Vec<AtomId> = set.iter().collect();
        for (i, &x) in atoms.iter().enumerate() {
            for &y in &atoms[i + 1..] {
                for idx in 0..frame.space_len(set) as u32 {
                    let s = StateId { space: set, idx };
                    let via_x = frame.project_state(
                        StateId { space: set.remove(x), idx: frame.covering[&(set, x)][idx as usize] },
                        set.remove(x).remove(y),
                    );
                    let via_y = frame.project_state(
                        StateId { space: set.remove(y), idx: frame.covering[&(set, y)][idx as usize] },
                        set.remove(y).remove(x),
                    );
                    if via_x != via_y {
                        rep.add(
                            Clause::FrameProjectionPathDependent,
                            None,
                            format!(
                                "state `{}`: dropping `{}` then `{}` disagrees with the reverse order",
                                frame.state_name(s),
                                frame.vocab.name(x),
                                frame.vocab.name(y)
                            ),
                        );
                    }
                }
            }
        }
    }
    rep
}
