//! Model checking the modal language over lattice models.
//!
//! The extension of a formula is computed bottom-up as an event: atoms by
//! the valuation, negation and conjunction by the event algebra, the
//! modalities by the knowledge/awareness operators of the model's kind.
//! A formula only has a truth value at states where each of its atoms (or
//! its negation) is expressible; evaluation elsewhere is a hard error, and
//! validity quantifies over defined states only.

use std::collections::HashMap;

use crate::category::FhCategory;
use crate::fh::fh_sat;
use crate::hms::{
    a_op, a_star_op, event_intersect, event_negate, k_op, l_op, Event, HmsError, HmsKind,
    HmsModel, StateId, StateSet,
};
use crate::syntax::{AtomSet, Formula};

/// Evaluation context with a per-model extension cache. The cache is sound
/// because extensions are determined by the (immutable) model alone.
pub struct EvalCtx<'m> {
    pub model: &'m HmsModel,
    kind: HmsKind,
    cache: HashMap<Formula, Event>,
}

impl<'m> EvalCtx<'m> {
    pub fn new(model: &'m HmsModel) -> Result<Self, HmsError> {
        Ok(EvalCtx { model, kind: model.kind()?, cache: HashMap::new() })
    }

    /// The event `[φ]`.
    pub fn extension(&mut self, f: &Formula) -> Result<Event, HmsError> {
        if let Some(e) = self.cache.get(f) {
            return Ok(*e);
        }
        let m = self.model;
        let ev = match f {
            Formula::Top => Event::omega(&m.frame),
            Formula::Atom(a) => m
                .valuation_event(*a)
                .ok_or_else(|| HmsError::Invalid(format!("no valuation for atom id {}", a.0)))?,
            Formula::Not(g) => event_negate(&m.frame, self.extension(g)?),
            Formula::And(l, r) => {
                let le = self.extension(l)?;
                let re = self.extension(r)?;
                event_intersect(&m.frame, &[le, re])
            }
            Formula::L(i, g) => {
                let inner = self.extension(g)?;
                l_op(m, *i, inner)?
            }
            Formula::A(i, g) => {
                let inner = self.extension(g)?;
                match self.kind {
                    HmsKind::Plain | HmsKind::Complemented | HmsKind::ComplementedIkb => {
                        a_op(m, *i, inner)?
                    }
                    HmsKind::ImplicitKnowledgeBased => a_star_op(m, *i, inner)?,
                }
            }
            Formula::K(i, g) => {
                let inner = self.extension(g)?;
                match self.kind {
                    HmsKind::Plain | HmsKind::Complemented | HmsKind::ComplementedIkb => {
                        k_op(m, *i, inner)?
                    }
                    HmsKind::ImplicitKnowledgeBased => {
                        let l = l_op(m, *i, inner)?;
                        let a = a_star_op(m, *i, inner)?;
                        event_intersect(&m.frame, &[l, a])
                    }
                }
            }
        };
        self.cache.insert(f.clone(), ev);
        Ok(ev)
    }

    /// States where every atom of `atoms` has a truth value: the
    /// intersection over the atoms of `v(p) ∪ ¬v(p)`.
    pub fn defined_set(&mut self, atoms: AtomSet) -> StateSet {
        let m = self.model;
        let mut out: Option<StateSet> = None;
        for a in atoms.iter() {
            let ev = m.valuation_event(a).unwrap_or(Event::empty(AtomSet::singleton(a)));
            let both = ev
                .up_closure(&m.frame)
                .union(&event_negate(&m.frame, ev).up_closure(&m.frame));
            out = Some(match out {
                None => both,
                Some(acc) => acc.intersect(&both),
            });
        }
        out.unwrap_or_else(|| Event::omega(&m.frame).up_closure(&m.frame))
    }
}

/// The event `[φ]` in the given model.
pub fn extension(model: &HmsModel, f: &Formula) -> Result<Event, HmsError> {
    EvalCtx::new(model)?.extension(f)
}

/// True iff every atom of `f` is expressible at `state`.
pub fn defined_at(model: &HmsModel, state: StateId, f: &Formula) -> Result<bool, HmsError> {
    let mut ctx = EvalCtx::new(model)?;
    Ok(ctx.defined_set(f.atoms()).contains(state))
}

/// Satisfaction at a state: membership of the state in the up-closure of
/// the extension. Errors if the formula is undefined at the state, naming
/// the inexpressible atoms.
pub fn hms_sat(model: &HmsModel, state: StateId, f: &Formula) -> Result<bool, HmsError> {
    let mut ctx = EvalCtx::new(model)?;
    hms_sat_ctx(&mut ctx, state, f)
}

pub fn hms_sat_ctx(ctx: &mut EvalCtx<'_>, state: StateId, f: &Formula) -> Result<bool, HmsError> {
    let model = ctx.model;
    if !ctx.defined_set(f.atoms()).contains(state) {
        let mut missing: Vec<&str> = Vec::new();
        for a in f.atoms().iter() {
            if !ctx.defined_set(AtomSet::singleton(a)).contains(state) {
                missing.push(model.frame.vocab.name(a));
            }
        }
        return Err(HmsError::Undefined {
            state: model.frame.state_name(state).to_string(),
            atoms: missing.join(","),
        });
    }
    let ev = ctx.extension(f)?;
    Ok(ev.up_closure(&model.frame).contains(state))
}

/// Validity in a lattice model: satisfaction at every state where the
/// formula is defined.
pub fn valid_in(model: &HmsModel, f: &Formula) -> Result<bool, HmsError> {
    let mut ctx = EvalCtx::new(model)?;
    let defined = ctx.defined_set(f.atoms());
    let ext = ctx.extension(f)?.up_closure(&model.frame);
    for s in defined.states() {
        if !ext.contains(s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validity in a category: satisfaction at every world of every member
/// model whose sublanguage contains the formula's atoms.
pub fn valid_in_category(cat: &FhCategory, f: &Formula) -> Result<bool, crate::fh::FhError> {
    let atoms = f.atoms();
    for (set, model) in cat.models() {
        if !atoms.is_subset(set) {
            continue;
        }
        let mask = model.truth_mask(f)?;
        if mask != model.full_mask() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validity in a single FH model: satisfaction at every world, defined
/// when the formula lies in the model's sublanguage.
pub fn valid_in_fh(model: &crate::fh::FhModel, f: &Formula) -> Result<bool, crate::fh::FhError> {
    let _ = fh_sat(model, &model.worlds[0], f)?;
    Ok(model.truth_mask(f)? == model.full_mask())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hms::testutil::{fig1_left, fig1_right, fig1_right_ikb};
    use crate::syntax::parse_formula;

    fn sat(m: &HmsModel, state: &str, text: &str) -> bool {
        let f = parse_formula(text, &m.frame.vocab).unwrap();
        hms_sat(m, m.state(state).unwrap(), &f).unwrap()
    }

    #[test]
    fn top_extension_is_everything() {
        let m = fig1_left();
        let f = parse_formula("T", &m.frame.vocab).unwrap();
        let e = extension(&m, &f).unwrap();
        assert_eq!(e, Event::omega(&m.frame));
    }

    #[test]
    fn left_model_satisfaction_at_pq() {
        let m = fig1_left();
        assert!(sat(&m, "pq", "K1 p"));
        assert!(sat(&m, "pq", "~A1 q"));
        assert!(!sat(&m, "pq", "L1 q"));
        assert!(!sat(&m, "pq", "K1 q"));
    }

    #[test]
    fn right_model_satisfaction_at_pq() {
        let m = fig1_right();
        assert!(sat(&m, "pq", "K1 p"));
        assert!(sat(&m, "pq", "L1 q"));
        assert!(!sat(&m, "pq", "A1 q"));
        assert!(!sat(&m, "pq", "K1 q"));
    }

    #[test]
    fn ikb_awareness_clause_uses_alpha() {
        let m = fig1_right_ikb();
        assert!(sat(&m, "pq", "A1 p"));
        assert!(!sat(&m, "pq", "A1 q"));
        assert!(sat(&m, "pq", "L1 q"));
        assert!(!sat(&m, "pq", "K1 q"));
        assert!(sat(&m, "pq", "K1 p"));
    }

    #[test]
    fn definedness() {
        let m = fig1_left();
        let p = parse_formula("p", &m.frame.vocab).unwrap();
        let star = m.state("*").unwrap();
        assert!(!defined_at(&m, star, &p).unwrap());
        let top = m.state("pq").unwrap();
        assert!(defined_at(&m, top, &p).unwrap());
        let q_state = m.state("q").unwrap();
        let k1p = parse_formula("K1 p", &m.frame.vocab).unwrap();
        assert!(!defined_at(&m, q_state, &k1p).unwrap());
        match hms_sat(&m, star, &p) {
            Err(HmsError::Undefined { atoms, .. }) => assert_eq!(atoms, "p"),
            other => panic!("expected undefined error, got {other:?}"),
        }
    }

    #[test]
    fn monotone_definedness() {
        let m = fig1_left();
        let v = &m.frame.vocab;
        let big = parse_formula("K1 (p & q)", v).unwrap();
        let small = parse_formula("L1 p", v).unwrap();
        for s in m.frame.states() {
            if defined_at(&m, s, &big).unwrap() {
                assert!(defined_at(&m, s, &small).unwrap());
            }
        }
    }

    #[test]
    fn explicit_equals_implicit_plus_awareness() {
        for m in [fig1_left(), fig1_right()] {
            let v = &m.frame.vocab;
            for text in ["p", "q", "p & q", "~p"] {
                let f = parse_formula(text, v).unwrap();
                let k = Formula::k(0, f.clone());
                let la = Formula::and(Formula::l(0, f.clone()), Formula::a(0, f.clone()));
                let equiv = Formula::iff(k, la);
                assert!(valid_in(&m, &equiv).unwrap(), "{text}");
            }
        }
    }

    #[test]
    fn truth_axiom_is_valid() {
        let m = fig1_left();
        let f = parse_formula("L1 p -> p", &m.frame.vocab).unwrap();
        assert!(valid_in(&m, &f).unwrap());
        // At every defined state of the left model the agent's possibility
        // set targets the p-space, so awareness of p is valid there while
        // awareness of q fails at pq.
        let ap = parse_formula("A1 p", &m.frame.vocab).unwrap();
        assert!(valid_in(&m, &ap).unwrap());
        let aq = parse_formula("A1 q", &m.frame.vocab).unwrap();
        assert!(!valid_in(&m, &aq).unwrap());
        assert!(!hms_sat(&m, m.state("pq").unwrap(), &aq).unwrap());
    }

    #[test]
    fn extensions_are_events() {
        let m = fig1_right();
        let v = &m.frame.vocab;
        for text in ["K1 q", "L1 (p & q)", "~K1 ~p", "A1 (p & ~q)", "K1 L1 A1 p"] {
            let f = parse_formula(text, v).unwrap();
            let e = extension(&m, &f).unwrap();
            let up = e.up_closure(&m.frame);
            assert_eq!(up.mask(e.base_space), e.base, "{text}");
        }
    }
}
