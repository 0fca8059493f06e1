//! Validators for the structural assumptions on possibility
//! correspondences and awareness functions, and the derivation of the
//! explicit correspondence from the implicit one plus awareness.

use std::collections::BTreeMap;

use crate::report::{Clause, ValidationReport};
use crate::syntax::AtomSet;

pub use super::frame::validate_frame;
use super::event::Event;
use super::frame::StateId;
use super::model::{ExplicitPc, HmsError, HmsModel, PiTarget};

fn state_label(m: &HmsModel, s: StateId) -> String {
    m.frame.state_name(s).to_string()
}

fn subsets_of(set: AtomSet) -> Vec<AtomSet> {
    let mask = set.0;
    let mut out = Vec::with_capacity(1 << set.len());
    let mut sub = 0u16;
    loop {
        out.push(AtomSet(sub));
        if sub == mask {
            break;
        }
        sub = (sub.wrapping_sub(mask)) & mask;
    }
    out
}

/// Check the explicit possibility correspondence: confinement, generalized
/// reflexivity, stationarity, and preservation of ignorance and knowledge
/// along projections, plus the derived cross-space coincidence diagnostic.
pub fn validate_pi(m: &HmsModel) -> Result<ValidationReport, HmsError> {
    let pi = m.pi()?;
    let mut rep = ValidationReport::new();
    for i in 0..m.agents {
        for s in m.frame.states() {
            let t = match pi.get(i, s) {
                Some(t) => t,
                None => continue,
            };
            let confined = t.space.is_subset(s.space);
            if !confined {
                rep.add(
                    Clause::PiConfinement,
                    Some(i),
                    format!(
                        "possibility set at `{}` lies in `{}`, not below `{}`",
                        state_label(m, s),
                        m.frame.vocab.set_label(t.space),
                        m.frame.vocab.set_label(s.space)
                    ),
                );
            }
            let as_event = Event { base_space: t.space, base: t.mask };
            if !as_event.contains(&m.frame, s) {
                rep.add(
                    Clause::PiGeneralizedReflexivity,
                    Some(i),
                    format!("`{}` is outside the up-closure of its possibility set", state_label(m, s)),
                );
            }
            for idx in super::frame::iter_mask(t.mask) {
                let member = StateId { space: t.space, idx };
                if pi.get(i, member) != Some(t) {
                    rep.add(
                        Clause::PiStationarity,
                        Some(i),
                        format!(
                            "`{}` is possible at `{}` but carries a different possibility set",
                            state_label(m, member),
                            state_label(m, s)
                        ),
                    );
                }
            }
            if confined {
                // Ignorance is preserved: the up-closure can only grow when
                // stepping down to a projection.
                let up = as_event.up_closure(&m.frame);
                for psi in subsets_of(s.space) {
                    if psi == s.space {
                        continue;
                    }
                    let below = m.frame.project_state(s, psi);
                    if let Some(bt) = pi.get(i, below) {
                        let bup =
                            Event { base_space: bt.space, base: bt.mask }.up_closure(&m.frame);
                        if !up.is_subset(&bup) {
                            rep.add(
                                Clause::PiProjectionsPreserveIgnorance,
                                Some(i),
                                format!(
                                    "possibility up-closure at `{}` is not contained in the one at `{}`",
                                    state_label(m, s),
                                    state_label(m, below)
                                ),
                            );
                        }
                    }
                }
                // Knowledge is preserved: projecting the possibility set
                // matches the possibility set at the projected state.
                for upsilon in subsets_of(t.space) {
                    let below = m.frame.project_state(s, upsilon);
                    let projected = m.frame.project_mask(t.space, t.mask, upsilon);
                    match pi.get(i, below) {
                        Some(bt) if bt.space == upsilon && bt.mask == projected => {}
                        _ => rep.add(
                            Clause::PiProjectionsPreserveKnowledge,
                            Some(i),
                            format!(
                                "projection of the possibility set at `{}` onto `{}` differs from the one at `{}`",
                                state_label(m, s),
                                m.frame.vocab.set_label(upsilon),
                                state_label(m, below)
                            ),
                        ),
                    }
                }
                // Derived diagnostic: when the possibility set lives two or
                // more levels down, intermediate projections carry the same
                // set.
                for psi in subsets_of(s.space) {
                    if !t.space.is_subset(psi) || psi == s.space {
                        continue;
                    }
                    let below = m.frame.project_state(s, psi);
                    if pi.get(i, below) != Some(t) {
                        rep.add(
                            Clause::PiCoincidence,
                            Some(i),
                            format!(
                                "possibility set at `{}` differs from the one at `{}`",
                                state_label(m, below),
                                state_label(m, s)
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Check the implicit possibility correspondence: that the stored blocks
/// partition every space (reflexivity and stationarity), that projections
/// preserve implicit knowledge, and — when the explicit correspondence is
/// present — the two measurability conditions plus the derived coincidence
/// and coherence diagnostics.
pub fn validate_lambda(m: &HmsModel) -> Result<ValidationReport, HmsError> {
    let lambda = m.lambda()?;
    let mut rep = ValidationReport::new();
    for i in 0..m.agents {
        for &s in &lambda.uncovered[i] {
            rep.add(
                Clause::LambdaReflexivity,
                Some(i),
                format!("`{}` lies in no implicit block", state_label(m, s)),
            );
        }
        for &s in &lambda.overlapping[i] {
            rep.add(
                Clause::LambdaStationarity,
                Some(i),
                format!("`{}` lies in more than one implicit block", state_label(m, s)),
            );
        }
        if !lambda.is_partition(i) {
            continue;
        }
        for s in m.frame.states() {
            let block = lambda.block_of(i, s);
            for psi in subsets_of(s.space) {
                if psi == s.space {
                    continue;
                }
                let below = m.frame.project_state(s, psi);
                let projected = m.frame.project_mask(s.space, block, psi);
                if projected != lambda.block_of(i, below) {
                    rep.add(
                        Clause::LambdaProjectionsPreserveImplicitKnowledge,
                        Some(i),
                        format!(
                            "implicit block at `{}` projects onto `{}` differently from the block at `{}`",
                            state_label(m, s),
                            m.frame.vocab.set_label(psi),
                            state_label(m, below)
                        ),
                    );
                }
                // Derived diagnostic: implied by strong confinement plus
                // preservation of implicit knowledge.
                let up = Event { base_space: s.space, base: block }.up_closure(&m.frame);
                let bup = Event { base_space: psi, base: lambda.block_of(i, below) }
                    .up_closure(&m.frame);
                if !up.is_subset(&bup) {
                    rep.add(
                        Clause::LambdaProjectionsPreserveImplicitIgnorance,
                        Some(i),
                        format!(
                            "implicit up-closure at `{}` is not contained in the one at `{}`",
                            state_label(m, s),
                            state_label(m, below)
                        ),
                    );
                }
            }
        }
        if let Some(pi) = &m.pi {
            for s in m.frame.states() {
                let block = lambda.block_of(i, s);
                let t = match pi.map[i].get(&s) {
                    Some(t) => *t,
                    None => continue,
                };
                for idx in super::frame::iter_mask(block) {
                    let member = StateId { space: s.space, idx };
                    if pi.map[i].get(&member) != Some(&t) {
                        rep.add(
                            Clause::LambdaExplicitMeasurability,
                            Some(i),
                            format!(
                                "`{}` and `{}` share an implicit block but differ in explicit possibility",
                                state_label(m, s),
                                state_label(m, member)
                            ),
                        );
                    }
                }
                if !t.space.is_subset(s.space) {
                    continue;
                }
                let lambda_proj = m.frame.project_mask(s.space, block, t.space);
                for idx in super::frame::iter_mask(t.mask) {
                    let member = StateId { space: t.space, idx };
                    if lambda.block_of(i, member) != lambda_proj {
                        rep.add(
                            Clause::LambdaImplicitMeasurability,
                            Some(i),
                            format!(
                                "implicit block at `{}` differs from the projected implicit block at `{}`",
                                state_label(m, member),
                                state_label(m, s)
                            ),
                        );
                    }
                    // Derived: implicit and explicit possibility coincide on
                    // explicit possibility sets.
                    if lambda.block_of(i, member) != t.mask {
                        rep.add(
                            Clause::LambdaPiCoincidence,
                            Some(i),
                            format!(
                                "at `{}` the implicit and explicit possibility sets differ",
                                state_label(m, member)
                            ),
                        );
                    }
                }
                // Derived: projecting the implicit set onto the explicit
                // target space recovers the explicit set.
                if lambda_proj != t.mask {
                    rep.add(
                        Clause::LambdaCoherence,
                        Some(i),
                        format!(
                            "implicit set at `{}` projected onto `{}` differs from the explicit set",
                            state_label(m, s),
                            m.frame.vocab.set_label(t.space)
                        ),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Check the awareness function: lack of conception, measurability with
/// respect to the implicit correspondence, and the three projection
/// consistency clauses.
pub fn validate_alpha(m: &HmsModel) -> Result<ValidationReport, HmsError> {
    let alpha = m.alpha()?;
    let mut rep = ValidationReport::new();
    for i in 0..m.agents {
        for s in m.frame.states() {
            let level = match alpha.get(i, s) {
                Some(l) => l,
                None => continue,
            };
            if !level.is_subset(s.space) {
                rep.add(
                    Clause::AlphaLackOfConception,
                    Some(i),
                    format!(
                        "awareness level `{}` at `{}` is not below the state's space",
                        m.frame.vocab.set_label(level),
                        state_label(m, s)
                    ),
                );
            }
            if let Some(lambda) = &m.lambda {
                let block = lambda.block_of(i, s);
                for idx in super::frame::iter_mask(block) {
                    let member = StateId { space: s.space, idx };
                    if alpha.get(i, member) != Some(level) {
                        rep.add(
                            Clause::AlphaAwarenessMeasurability,
                            Some(i),
                            format!(
                                "`{}` and `{}` share an implicit block but differ in awareness level",
                                state_label(m, s),
                                state_label(m, member)
                            ),
                        );
                    }
                }
            }
            for psi in subsets_of(s.space) {
                let below = m.frame.project_state(s, psi);
                let below_level = match alpha.get(i, below) {
                    Some(l) => l,
                    None => continue,
                };
                if psi.is_subset(level) && below_level != psi {
                    rep.add(
                        Clause::AlphaProjectionBelowLevel,
                        Some(i),
                        format!(
                            "awareness level at `{}` should be its own space `{}`, found `{}`",
                            state_label(m, below),
                            m.frame.vocab.set_label(psi),
                            m.frame.vocab.set_label(below_level)
                        ),
                    );
                }
                if level.is_subset(psi) && below_level != level {
                    rep.add(
                        Clause::AlphaProjectionAboveLevel,
                        Some(i),
                        format!(
                            "awareness level at `{}` should equal the level `{}` at `{}`, found `{}`",
                            state_label(m, below),
                            m.frame.vocab.set_label(level),
                            state_label(m, s),
                            m.frame.vocab.set_label(below_level)
                        ),
                    );
                }
                if !below_level.is_subset(level) {
                    rep.add(
                        Clause::AlphaMonotone,
                        Some(i),
                        format!(
                            "awareness level grows from `{}` at `{}` to `{}` at `{}`",
                            m.frame.vocab.set_label(level),
                            state_label(m, s),
                            m.frame.vocab.set_label(below_level),
                            state_label(m, below)
                        ),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Valuation well-formedness. Event-hood is structural after loading; a
/// base-space other than the atom's own singleton space is flagged as a
/// warning, not an error.
pub fn validate_valuation(m: &HmsModel) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for a in m.frame.vocab.atoms() {
        match m.valuation_event(a) {
            None => rep.add(
                Clause::ValuationNotEvent,
                None,
                format!("atom `{}` has no valuation", m.frame.vocab.name(a)),
            ),
            Some(ev) => {
                if !ev.base_space.is_subset(AtomSet::singleton(a)) {
                    rep.warn(
                        Clause::ValuationBaseSpaceWarning,
                        None,
                        format!(
                            "valuation of `{}` is based at `{}` rather than its own space",
                            m.frame.vocab.name(a),
                            m.frame.vocab.set_label(ev.base_space)
                        ),
                    );
                }
            }
        }
    }
    rep
}

/// Full validation for whatever the model carries: frame, valuation, and
/// the per-kind assumption validators.
pub fn validate_hms(m: &HmsModel) -> ValidationReport {
    let mut rep = validate_frame(&m.frame);
    rep.merge(validate_valuation(m));
    if m.pi.is_some() {
        rep.merge(validate_pi(m).expect("pi present"));
    }
    if m.lambda.is_some() {
        rep.merge(validate_lambda(m).expect("lambda present"));
    }
    if m.alpha.is_some() {
        rep.merge(validate_alpha(m).expect("alpha present"));
    }
    rep
}

/// Derive the explicit possibility correspondence from the implicit one and
/// the awareness function: pointwise, the implicit set projected onto the
/// state's awareness level. A full audit re-checks the defining equation
/// over every (state, subset) pair and reports the clause whose premise
/// broke if the inputs were invalid.
pub fn derive_pi_star(m: &HmsModel) -> Result<ExplicitPc, HmsError> {
    let lambda = m.lambda()?;
    let alpha = m.alpha()?;
    let mut out = ExplicitPc::default();
    for i in 0..m.agents {
        if !lambda.is_partition(i) {
            return Err(HmsError::Invalid(format!(
                "implicit correspondence of agent {} does not partition every space",
                i + 1
            )));
        }
        let mut agent_map: BTreeMap<StateId, PiTarget> = BTreeMap::new();
        for s in m.frame.states() {
            let level = alpha
                .get(i, s)
                .ok_or_else(|| HmsError::Invalid(format!("no awareness level at `{}`", state_label(m, s))))?;
            if !level.is_subset(s.space) {
                return Err(HmsError::Invalid(format!(
                    "lack of conception fails at `{}`; cannot project onto `{}`",
                    state_label(m, s),
                    m.frame.vocab.set_label(level)
                )));
            }
            let block = lambda.block_of(i, s);
            let mask = m.frame.project_mask(s.space, block, level);
            agent_map.insert(s, PiTarget { space: level, mask });
        }
        // Audit the defining equation at every projection of every state.
        for s in m.frame.states() {
            let block = lambda.block_of(i, s);
            for psi in subsets_of(s.space) {
                let below = m.frame.project_state(s, psi);
                let level = alpha.get(i, below).unwrap();
                if !level.is_subset(s.space) {
                    return Err(HmsError::Invalid(format!(
                        "awareness level at `{}` is not expressible from `{}`",
                        state_label(m, below),
                        state_label(m, s)
                    )));
                }
                let expect = m.frame.project_mask(s.space, block, level);
                let got = agent_map[&below];
                if got.space != level || got.mask != expect {
                    return Err(HmsError::Invalid(format!(
                        "derived correspondence audit fails at `{}` from `{}`: the implicit \
                         correspondence or awareness function violates its assumptions",
                        state_label(m, below),
                        state_label(m, s)
                    )));
                }
            }
        }
        out.map.push(agent_map);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{fig1_left, fig1_right, fig1_right_ikb};
    use super::*;

    #[test]
    fn figure_models_validate() {
        for m in [fig1_left(), fig1_right()] {
            assert!(validate_frame(&m.frame).is_valid());
            assert!(validate_pi(&m).unwrap().is_valid(), "{}", validate_pi(&m).unwrap());
            assert!(validate_lambda(&m).unwrap().is_valid(), "{}", validate_lambda(&m).unwrap());
            assert!(validate_valuation(&m).is_valid());
        }
        let ikb = fig1_right_ikb();
        assert!(validate_lambda(&ikb).unwrap().is_valid());
        assert!(validate_alpha(&ikb).unwrap().is_valid(), "{}", validate_alpha(&ikb).unwrap());
    }

    #[test]
    fn single_space_partition_validates_as_pi() {
        // One space only: the explicit correspondence reduces to an
        // ordinary partition.
        let m = super::super::io::hms_from_json(
            r#"{
  "kind": "hms",
  "atoms": [],
  "agents": 1,
  "spaces": {"": ["s", "t"]},
  "projections": {},
  "valuation": {},
  "pi": [{"s": ["s", "t"], "t": ["s", "t"]}]
}"#,
        )
        .unwrap();
        assert!(validate_pi(&m).unwrap().is_valid());
    }

    #[test]
    fn ppk_violation_detected() {
        // Full possibility set at the top but collapsed to the least space
        // one level down: knowledge is not preserved under projection.
        let mut m = fig1_left();
        let pi = m.pi.as_mut().unwrap();
        let frame = m.frame.clone();
        let top = frame.vocab.parse_set_label("p,q").unwrap();
        let p_space = frame.vocab.parse_set_label("p").unwrap();
        let empty = crate::syntax::AtomSet::EMPTY;
        for (s, t) in pi.map[0].iter_mut() {
            if s.space == top {
                *t = PiTarget { space: top, mask: 1 << s.idx };
            } else if s.space == p_space {
                *t = PiTarget { space: empty, mask: 0b1 };
            }
        }
        let rep = validate_pi(&m).unwrap();
        assert!(rep.flags(Clause::PiProjectionsPreserveKnowledge), "{rep}");
        assert!(!rep.flags(Clause::PiConfinement));
        assert!(!rep.flags(Clause::PiGeneralizedReflexivity));
        assert!(!rep.flags(Clause::PiStationarity));
        assert!(!rep.flags(Clause::PiProjectionsPreserveIgnorance));
    }

    #[test]
    fn ppik_violation_detected() {
        // Splitting the q-space block while the top blocks still project
        // onto the whole of it breaks preservation of implicit knowledge.
        let m = super::super::io::hms_from_json(
            &super::super::testutil::FIG1_LEFT.replace(
                r#"[["pq", "p~q"], ["~pq", "~p~q"], ["p"], ["~p"], ["q", "~q"], ["*"]]"#,
                r#"[["pq", "p~q"], ["~pq", "~p~q"], ["p"], ["~p"], ["q"], ["~q"], ["*"]]"#,
            ),
        )
        .unwrap();
        let rep = validate_lambda(&m).unwrap();
        assert!(rep.flags(Clause::LambdaProjectionsPreserveImplicitKnowledge), "{rep}");
    }

    #[test]
    fn derive_pi_star_on_awareness_fixture() {
        let m = fig1_right_ikb();
        let pi = derive_pi_star(&m).unwrap();
        // At the top state the implicit singleton projected to the p-space
        // is exactly the explicit set of the worked example.
        let pq = m.state("pq").unwrap();
        let p_space = m.frame.vocab.parse_set_label("p").unwrap();
        assert_eq!(pi.get(0, pq), Some(PiTarget { space: p_space, mask: 0b01 }));
        // The derived correspondence satisfies the explicit assumptions.
        let mut with_pi = m.clone();
        with_pi.pi = Some(pi);
        assert!(validate_pi(&with_pi).unwrap().is_valid());
        assert!(validate_lambda(&with_pi).unwrap().is_valid());
    }

    #[test]
    fn derive_pi_star_identity_under_full_awareness() {
        let mut m = fig1_right_ikb();
        let alpha = m.alpha.as_mut().unwrap();
        for (s, level) in alpha.map[0].iter_mut() {
            *level = s.space;
        }
        let pi = derive_pi_star(&m).unwrap();
        let lambda = m.lambda.as_ref().unwrap();
        for s in m.frame.states() {
            assert_eq!(
                pi.get(0, s),
                Some(PiTarget { space: s.space, mask: lambda.block_of(0, s) })
            );
        }
    }
}
