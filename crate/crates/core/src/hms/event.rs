//! The event algebra.
//!
//! An event is canonically a pair of a base-space and a base set of states
//! in that space; its extension is the up-closure, i.e. every state in a
//! more expressive space that projects into the base. Vacuous events carry
//! their base-space tag. Negation complements the base within its space;
//! conjunction intersects extensions and is based at the join of the
//! base-spaces; disjunction is defined from those two by De Morgan.

use std::collections::BTreeMap;

use crate::syntax::AtomSet;

use super::frame::{iter_mask, HmsFrame, StateId};

/// A set of states across spaces: one mask per space. Absent spaces are
/// empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateSet {
    masks: BTreeMap<AtomSet, u64>,
}

impl StateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: StateId) {
        *self.masks.entry(s.space).or_insert(0) |= 1 << s.idx;
    }

    pub fn set_mask(&mut self, space: AtomSet, mask: u64) {
        if mask != 0 {
            self.masks.insert(space, mask);
        } else {
            self.masks.remove(&space);
        }
    }

    pub fn mask(&self, space: AtomSet) -> u64 {
        self.masks.get(&space).copied().unwrap_or(0)
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.mask(s.space) & (1 << s.idx) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.masks.values().all(|m| *m == 0)
    }

    pub fn len(&self) -> usize {
        self.masks.values().map(|m| m.count_ones() as usize).sum()
    }

    pub fn spaces(&self) -> impl Iterator<Item = AtomSet> + '_ {
        self.masks.iter().filter(|(_, m)| **m != 0).map(|(s, _)| *s)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.masks.iter().flat_map(|(space, mask)| {
            iter_mask(*mask).map(move |idx| StateId { space: *space, idx })
        })
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.masks.iter().all(|(s, m)| m & !other.mask(*s) == 0)
    }

    pub fn intersect(&self, other: &StateSet) -> StateSet {
        let mut out = StateSet::new();
        for (s, m) in &self.masks {
            out.set_mask(*s, m & other.mask(*s));
        }
        out
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        for (s, m) in &other.masks {
            out.set_mask(*s, out.mask(*s) | m);
        }
        out
    }
}

/// A canonical event: base-space tag plus base mask. Two events are equal
/// iff they have the same base-space and base; for non-empty events this
/// coincides with equality of extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub base_space: AtomSet,
    pub base: u64,
}

impl Event {
    pub fn empty(base_space: AtomSet) -> Self {
        Event { base_space, base: 0 }
    }

    pub fn full(frame: &HmsFrame, base_space: AtomSet) -> Self {
        Event { base_space, base: frame.space_mask(base_space) }
    }

    /// The whole union of spaces, as the event based at the least space.
    pub fn omega(frame: &HmsFrame) -> Self {
        Event::full(frame, AtomSet::EMPTY)
    }

    pub fn is_empty(self) -> bool {
        self.base == 0
    }

    /// The extension: all states in spaces at least as expressive as the
    /// base-space that project into the base.
    pub fn up_closure(self, frame: &HmsFrame) -> StateSet {
        let mut out = StateSet::new();
        if self.base == 0 {
            return out;
        }
        for space in frame.space_sets() {
            if self.base_space.is_subset(space) {
                out.set_mask(space, frame.inverse_mask(self.base_space, self.base, space));
            }
        }
        out
    }

    pub fn contains(self, frame: &HmsFrame, s: StateId) -> bool {
        if self.base == 0 || !self.base_space.is_subset(s.space) {
            return false;
        }
        let p = frame.project_state(s, self.base_space);
        self.base & (1 << p.idx) != 0
    }
}

/// Negation keeps the base-space and complements the base.
pub fn event_negate(frame: &HmsFrame, e: Event) -> Event {
    Event { base_space: e.base_space, base: frame.space_mask(e.base_space) & !e.base }
}

/// Conjunction: based at the join of the base-spaces; the base is the
/// intersection of the inverse-projected bases. Equals the set
/// intersection of the extensions; empty results keep the join tag.
pub fn event_intersect(frame: &HmsFrame, events: &[Event]) -> Event {
    assert!(!events.is_empty(), "event conjunction needs at least one operand");
    let join = events.iter().fold(AtomSet::EMPTY, |acc, e| acc.union(e.base_space));
    let mut base = frame.space_mask(join);
    for e in events {
        if e.base == 0 {
            return Event::empty(join);
        }
        base &= frame.inverse_mask(e.base_space, e.base, join);
    }
    Event { base_space: join, base }
}

/// Disjunction by De Morgan from negation and conjunction; also based at
/// the join of the base-spaces.
pub fn event_union(frame: &HmsFrame, events: &[Event]) -> Event {
    assert!(!events.is_empty(), "event disjunction needs at least one operand");
    let negated: Vec<Event> = events.iter().map(|e| event_negate(frame, *e)).collect();
    event_negate(frame, event_intersect(frame, &negated))
}

/// All events of the frame: every (base-space, base) pair, each canonical
/// by construction, in ascending space then ascending base order.
pub fn enumerate_events(frame: &HmsFrame) -> impl Iterator<Item = Event> + '_ {
    frame.space_sets().flat_map(move |space| {
        let n = frame.space_len(space);
        (0..(1u128 << n)).map(move |base| Event { base_space: space, base: base as u64 })
    })
}

/// Canonicalize a raw state set as an event based at `expected`: the base is
/// read off in the expected base-space and the up-closure must reproduce the
/// set exactly. The empty set canonicalizes to the tagged vacuous event.
pub fn canonicalize(
    frame: &HmsFrame,
    raw: &StateSet,
    expected: AtomSet,
) -> Result<Event, String> {
    if raw.is_empty() {
        return Ok(Event::empty(expected));
    }
    let ev = Event { base_space: expected, base: raw.mask(expected) };
    if &ev.up_closure(frame) == raw {
        Ok(ev)
    } else {
        Err(format!(
            "set is not a `{}`-based event",
            frame.vocab.set_label(expected)
        ))
    }
}

/// Canonicalize a raw state set at its least populated space. Used where no
/// particular base-space is promised, e.g. for valuations.
pub fn canonicalize_minimal(frame: &HmsFrame, raw: &StateSet) -> Result<Event, String> {
    if raw.is_empty() {
        return Err("empty set carries no base-space".into());
    }
    let min = raw.spaces().fold(frame.full_set(), |acc, s| acc.intersect(s));
    canonicalize(frame, raw, min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hms::io::hms_from_json;
    use crate::hms::testutil::fig1_left;

    fn frame() -> HmsFrame {
        fig1_left().frame
    }

    #[test]
    fn up_closure_of_least_space_is_everything() {
        let f = frame();
        let omega = Event::omega(&f).up_closure(&f);
        assert_eq!(omega.len(), f.state_count());
    }

    #[test]
    fn up_closure_of_vacuous_event_is_empty() {
        let f = frame();
        for space in f.space_sets() {
            assert!(Event::empty(space).up_closure(&f).is_empty());
        }
    }

    #[test]
    fn up_closure_of_p_base() {
        let f = frame();
        let p_space = f.vocab.parse_set_label("p").unwrap();
        let e = Event { base_space: p_space, base: 0b01 }; // state `p`
        let up = e.up_closure(&f);
        let names: Vec<&str> = up.states().map(|s| f.state_name(s)).collect();
        assert_eq!(names.len(), 3);
        for n in ["p", "pq", "p~q"] {
            assert!(names.contains(&n), "missing {n}");
        }
    }

    #[test]
    fn negation_is_involutive() {
        let f = frame();
        for e in enumerate_events(&f) {
            assert_eq!(event_negate(&f, event_negate(&f, e)), e);
        }
    }

    #[test]
    fn excluded_middle_only_at_the_least_space() {
        let f = frame();
        let p_space = f.vocab.parse_set_label("p").unwrap();
        let e = Event { base_space: p_space, base: 0b01 };
        let lem = event_union(&f, &[e, event_negate(&f, e)]);
        // E ∪ ¬E is the whole p-space lifted, a proper subset of Ω.
        assert_eq!(lem, Event::full(&f, p_space));
        assert!(lem.up_closure(&f).len() < f.state_count());
        let bottom = Event { base_space: AtomSet::EMPTY, base: 0b1 };
        let lem0 = event_union(&f, &[bottom, event_negate(&f, bottom)]);
        assert_eq!(lem0.up_closure(&f).len(), f.state_count());
    }

    #[test]
    fn intersection_lands_in_join_space() {
        // Brute-force oracle: intersect the up-closures directly.
        let f = frame();
        let p_space = f.vocab.parse_set_label("p").unwrap();
        let q_space = f.vocab.parse_set_label("q").unwrap();
        let ep = Event { base_space: p_space, base: 0b01 };
        let eq = Event { base_space: q_space, base: 0b01 };
        let both = event_intersect(&f, &[ep, eq]);
        assert_eq!(both.base_space, f.vocab.parse_set_label("p,q").unwrap());
        let oracle = ep.up_closure(&f).intersect(&eq.up_closure(&f));
        assert_eq!(both.up_closure(&f), oracle);
        let names: Vec<&str> = both.up_closure(&f).states().map(|s| f.state_name(s)).collect();
        assert_eq!(names, vec!["pq"]);
    }

    #[test]
    fn set_extension_homomorphism() {
        let f = frame();
        let events: Vec<Event> = enumerate_events(&f).collect();
        for &a in &events {
            for &b in &events {
                let meet = event_intersect(&f, &[a, b]);
                assert_eq!(
                    meet.up_closure(&f),
                    a.up_closure(&f).intersect(&b.up_closure(&f)),
                    "{a:?} ∩ {b:?}"
                );
                let join_space = a.base_space.union(b.base_space);
                let joined = event_union(&f, &[a, b]);
                let expected = a
                    .up_closure(&f)
                    .union(&b.up_closure(&f))
                    .intersect(&Event::full(&f, join_space).up_closure(&f));
                assert_eq!(joined.up_closure(&f), expected, "{a:?} ∪ {b:?}");
            }
        }
    }

    // Count frozen from the enumeration itself: 2^4 + 2^2 + 2^2 + 2^1
    // (base,space) pairs, all distinct as tagged events.
    #[test]
    fn event_count_of_two_atom_frame() {
        let f = frame();
        let events: Vec<Event> = enumerate_events(&f).collect();
        assert_eq!(events.len(), 16 + 4 + 4 + 2);
        let set: std::collections::HashSet<Event> = events.iter().copied().collect();
        assert_eq!(set.len(), 26);
    }

    #[test]
    fn single_space_frame_has_two_events() {
        let model = hms_from_json(
            r#"{
  "kind": "hms",
  "atoms": [],
  "agents": 1,
  "spaces": {"": ["*"]},
  "projections": {},
  "valuation": {},
  "pi": [{"*": ["*"]}]
}"#,
        )
        .unwrap();
        let events: Vec<Event> = enumerate_events(&model.frame).collect();
        assert_eq!(events.len(), 2);
    }

    #[test]
    fn canonicalize_detects_non_events() {
        let f = frame();
        let pq = f.vocab.parse_set_label("p,q").unwrap();
        let p_space = f.vocab.parse_set_label("p").unwrap();
        // {pq, p~q} with its projection p is an event based at S_p ...
        let mut ok = StateSet::new();
        ok.insert(StateId { space: pq, idx: 0 });
        ok.insert(StateId { space: pq, idx: 1 });
        ok.insert(StateId { space: p_space, idx: 0 });
        assert!(canonicalize(&f, &ok, p_space).is_ok());
        assert_eq!(canonicalize_minimal(&f, &ok).unwrap().base_space, p_space);
        // ... but without p it is not S_p-based, and not an event at all.
        let mut bad = StateSet::new();
        bad.insert(StateId { space: pq, idx: 0 });
        bad.insert(StateId { space: pq, idx: 1 });
        assert!(canonicalize(&f, &bad, p_space).is_err());
        assert!(canonicalize(&f, &bad, pq).is_ok());
    }
}
