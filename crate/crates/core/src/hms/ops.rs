//! Knowledge and awareness operators on events.
//!
//! Each operator computes its raw satisfying set over the whole union of
//! spaces and then canonicalizes it as an event based at the operand's
//! base-space. For structurally valid models the raw set always is such an
//! event; a canonicalization failure is therefore surfaced as a model
//! defect rather than silently accepted.

use crate::syntax::AgentId;

use super::event::{canonicalize, Event, StateSet};
use super::model::{HmsError, HmsModel};

/// Explicit knowledge: the states whose explicit possibility set is
/// contained in the event.
pub fn k_op(m: &HmsModel, agent: AgentId, e: Event) -> Result<Event, HmsError> {
    m.check_agent(agent)?;
    let pi = m.pi()?;
    let ext = e.up_closure(&m.frame);
    let mut raw = StateSet::new();
    for s in m.frame.states() {
        if let Some(t) = pi.get(agent, s) {
            if t.mask != 0 && t.mask & !ext.mask(t.space) == 0 {
                raw.insert(s);
            }
        }
    }
    canonicalize(&m.frame, &raw, e.base_space).map_err(HmsError::NotAnEvent)
}

/// Awareness: the states whose explicit possibility set lives in a space at
/// least as expressive as the event's base-space.
pub fn a_op(m: &HmsModel, agent: AgentId, e: Event) -> Result<Event, HmsError> {
    m.check_agent(agent)?;
    let pi = m.pi()?;
    let mut raw = StateSet::new();
    for s in m.frame.states() {
        if let Some(t) = pi.get(agent, s) {
            if e.base_space.is_subset(t.space) {
                raw.insert(s);
            }
        }
    }
    canonicalize(&m.frame, &raw, e.base_space).map_err(HmsError::NotAnEvent)
}

/// Unawareness: the negation of awareness.
pub fn u_op(m: &HmsModel, agent: AgentId, e: Event) -> Result<Event, HmsError> {
    Ok(super::event::event_negate(&m.frame, a_op(m, agent, e)?))
}

/// Implicit knowledge: the states whose implicit possibility set is
/// contained in the event.
pub fn l_op(m: &HmsModel, agent: AgentId, e: Event) -> Result<Event, HmsError> {
    m.check_agent(agent)?;
    let lambda = m.lambda()?;
    let ext = e.up_closure(&m.frame);
    let mut raw = StateSet::new();
    for s in m.frame.states() {
        let block = lambda.block_of(agent, s);
        if block != 0 && block & !ext.mask(s.space) == 0 {
            raw.insert(s);
        }
    }
    canonicalize(&m.frame, &raw, e.base_space).map_err(HmsError::NotAnEvent)
}

/// Awareness from the awareness function: the states whose awareness level
/// is at least the event's base-space.
pub fn a_star_op(m: &HmsModel, agent: AgentId, e: Event) -> Result<Event, HmsError> {
    m.check_agent(agent)?;
    let alpha = m.alpha()?;
    let mut raw = StateSet::new();
    for s in m.frame.states() {
        if let Some(level) = alpha.get(agent, s) {
            if e.base_space.is_subset(level) {
                raw.insert(s);
            }
        }
    }
    canonicalize(&m.frame, &raw, e.base_space).map_err(HmsError::NotAnEvent)
}

#[cfg(test)]
mod tests {
    use super::super::event::{enumerate_events, event_negate, Event};
    use super::super::model::HmsModel;
    use super::super::testutil::{fig1_left, fig1_right};
    use super::*;

    fn v(m: &HmsModel, atom: &str) -> Event {
        let a = m.frame.vocab.lookup(atom).unwrap();
        m.valuation_event(a).unwrap()
    }

    #[test]
    fn left_model_at_pq_knows_p_unaware_of_q() {
        let m = fig1_left();
        let pq = m.state("pq").unwrap();
        let kp = k_op(&m, 0, v(&m, "p")).unwrap();
        assert!(kp.contains(&m.frame, pq));
        let uq = u_op(&m, 0, v(&m, "q")).unwrap();
        assert!(uq.contains(&m.frame, pq));
    }

    #[test]
    fn necessitation() {
        let m = fig1_left();
        let omega = Event::omega(&m.frame);
        assert_eq!(k_op(&m, 0, omega).unwrap(), omega);
    }

    #[test]
    fn ku_introspection_on_unaware_event() {
        let m = fig1_left();
        let uq = u_op(&m, 0, v(&m, "q")).unwrap();
        let kuq = k_op(&m, 0, uq).unwrap();
        assert_eq!(kuq, Event::empty(v(&m, "q").base_space));
    }

    #[test]
    fn right_model_implicitly_knows_q_while_unaware() {
        let m = fig1_right();
        let pq = m.state("pq").unwrap();
        let lq = l_op(&m, 0, v(&m, "q")).unwrap();
        assert!(lq.contains(&m.frame, pq));
        let uq = u_op(&m, 0, v(&m, "q")).unwrap();
        assert!(uq.contains(&m.frame, pq));
    }

    #[test]
    fn l_necessitation_per_space() {
        let m = fig1_left();
        for space in m.frame.space_sets() {
            let e = Event::full(&m.frame, space);
            assert_eq!(l_op(&m, 0, e).unwrap(), e);
        }
    }

    // Oracle: with the left model's implicit blocks no block of the top
    // space sits inside [q]'s extension, and the q-space block {q,~q}
    // doesn't either, so L([q]) is the tagged vacuous event.
    #[test]
    fn left_model_l_of_q_is_vacuous() {
        let m = fig1_left();
        let lq = l_op(&m, 0, v(&m, "q")).unwrap();
        assert_eq!(lq, Event::empty(v(&m, "q").base_space));
    }

    #[test]
    fn a_star_matches_a_on_figure_models() {
        // Attach the awareness levels induced by pi, then compare operators.
        let mut m = fig1_right();
        let pi = m.pi.clone().unwrap();
        let mut alpha = super::super::model::AwarenessFn::default();
        let mut per_agent = std::collections::BTreeMap::new();
        for s in m.frame.states() {
            per_agent.insert(s, pi.get(0, s).unwrap().space);
        }
        alpha.map.push(per_agent);
        m.alpha = Some(alpha);
        for e in enumerate_events(&m.frame) {
            assert_eq!(a_star_op(&m, 0, e).unwrap(), a_op(&m, 0, e).unwrap(), "{e:?}");
        }
    }

    #[test]
    fn a_star_of_least_based_event_is_omega() {
        let mut m = fig1_right();
        let mut alpha = super::super::model::AwarenessFn::default();
        let mut per_agent = std::collections::BTreeMap::new();
        for s in m.frame.states() {
            per_agent.insert(s, crate::syntax::AtomSet::EMPTY);
        }
        alpha.map.push(per_agent);
        m.alpha = Some(alpha);
        let bottom = Event { base_space: crate::syntax::AtomSet::EMPTY, base: 0b1 };
        assert_eq!(a_star_op(&m, 0, bottom).unwrap(), Event::omega(&m.frame));
    }

    #[test]
    fn weak_necessitation_and_symmetry() {
        let m = fig1_left();
        for e in enumerate_events(&m.frame) {
            let a = a_op(&m, 0, e).unwrap();
            let kfull = k_op(&m, 0, Event::full(&m.frame, e.base_space)).unwrap();
            assert_eq!(a, kfull, "weak necessitation at {e:?}");
            assert_eq!(a, a_op(&m, 0, event_negate(&m.frame, e)).unwrap(), "symmetry at {e:?}");
        }
    }
}
