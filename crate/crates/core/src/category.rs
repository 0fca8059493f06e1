//! The category of FH models: one model per subset of the vocabulary,
//! connected by commuting surjective bounded morphisms.
//!
//! Two constructions are offered. Copy mode reproduces the top model's
//! worlds in every sublanguage, restricting valuation and awareness; it
//! satisfies every morphism clause trivially and keeps redundancies.
//! Quotient mode contracts each restriction to its modal-equivalence
//! classes, computed by partition refinement on the restricted valuation,
//! restricted awareness, and per-agent blocks (exact on finite partitional
//! models). Worlds are tagged with their space so the category's world
//! sets are pairwise disjoint.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::fh::{EquivalenceWitness, FhError, FhModel, WorldMask};
use crate::report::{Clause, ValidationReport};
use crate::syntax::{AtomSet, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RestrictionMode {
    Copy,
    Quotient,
}

/// A surjective bounded morphism between two FH models, as a total map on
/// world indices.
#[derive(Debug, Clone)]
pub struct BoundedMorphism {
    pub source_atoms: AtomSet,
    pub target_atoms: AtomSet,
    /// `map[w]` is the target world index of source world `w`.
    pub map: Vec<usize>,
}

/// Check the five morphism clauses: surjectivity, atomic harmony,
/// awareness consistency (as atom-set intersection), homomorphism, and
/// back.
pub fn validate_bounded_morphism(
    source: &FhModel,
    target: &FhModel,
    morphism: &BoundedMorphism,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let psi = morphism.target_atoms;
    if !psi.is_subset(morphism.source_atoms) {
        rep.add(Clause::MorphismSurjectivity, None, "target vocabulary not below the source's");
        return rep;
    }
    if morphism.map.len() != source.world_count()
        || morphism.map.iter().any(|&t| t >= target.world_count())
    {
        rep.add(Clause::MorphismSurjectivity, None, "map is not total into the target worlds");
        return rep;
    }
    let mut hit = vec![false; target.world_count()];
    for &t in &morphism.map {
        hit[t] = true;
    }
    if !hit.iter().all(|&h| h) {
        rep.add(Clause::MorphismSurjectivity, None, "map misses target worlds");
    }
    for p in psi.iter() {
        let vs = source.valuation_mask(p).unwrap_or(0);
        let vt = target.valuation_mask(p).unwrap_or(0);
        for (w, &fw) in morphism.map.iter().enumerate() {
            if (vs >> w) & 1 != (vt >> fw) & 1 {
                rep.add(
                    Clause::MorphismAtomicHarmony,
                    None,
                    format!(
                        "`{}` and `{}` disagree on `{}`",
                        source.worlds[w],
                        target.worlds[fw],
                        source.vocab.name(p)
                    ),
                );
            }
        }
    }
    for i in 0..source.agents {
        for (w, &fw) in morphism.map.iter().enumerate() {
            if source.awareness_of(i, w).intersect(psi) != target.awareness_of(i, fw) {
                rep.add(
                    Clause::MorphismAwarenessConsistency,
                    Some(i),
                    format!(
                        "awareness at `{}` restricted to the target language differs from `{}`",
                        source.worlds[w], target.worlds[fw]
                    ),
                );
            }
        }
        for (w, &fw) in morphism.map.iter().enumerate() {
            let block = source.block_mask_of(i, w);
            for t in 0..source.world_count() {
                if block & (1 << t) != 0 {
                    let ft = morphism.map[t];
                    if target.block_mask_of(i, fw) & (1 << ft) == 0 {
                        rep.add(
                            Clause::MorphismHomomorphism,
                            Some(i),
                            format!(
                                "edge `{}`-`{}` has no image edge",
                                source.worlds[w], source.worlds[t]
                            ),
                        );
                    }
                }
            }
            // Back: every target edge from f(w) lifts to an edge from w.
            let tblock = target.block_mask_of(i, fw);
            for ft in 0..target.world_count() {
                if tblock & (1 << ft) != 0 {
                    let lifted = (0..source.world_count()).any(|t| {
                        morphism.map[t] == ft && block & (1 << t) != 0
                    });
                    if !lifted {
                        rep.add(
                            Clause::MorphismBack,
                            Some(i),
                            format!(
                                "edge `{}`-`{}` does not lift through `{}`",
                                target.worlds[fw], target.worlds[ft], source.worlds[w]
                            ),
                        );
                    }
                }
            }
        }
    }
    rep
}

fn tag(world: &str, vocab: &crate::syntax::Vocab, set: AtomSet) -> String {
    format!("{world}@{}", vocab.set_label(set))
}

/// Restrict a model to the sublanguage `phi`, returning the restricted
/// model together with the bounded morphism from the original onto it.
pub fn restrict_model(
    top: &FhModel,
    phi: AtomSet,
    mode: RestrictionMode,
) -> Result<(FhModel, BoundedMorphism), FhError> {
    if !phi.is_subset(top.atoms) {
        return Err(FhError::Incompatible(format!(
            "`{}` is not a sublanguage of `{}`",
            top.vocab.set_label(phi),
            top.vocab.set_label(top.atoms)
        )));
    }
    match mode {
        RestrictionMode::Copy => {
            let worlds: Vec<String> =
                top.worlds.iter().map(|w| tag(w, &top.vocab, phi)).collect();
            let blocks = copy_blocks(top);
            let awareness: Vec<Vec<AtomSet>> = (0..top.agents)
                .map(|i| {
                    (0..top.world_count())
                        .map(|w| top.awareness_of(i, w).intersect(phi))
                        .collect()
                })
                .collect();
            let mut valuation = vec![None; top.vocab.len()];
            for p in phi.iter() {
                valuation[p.0 as usize] = Some(top.valuation_mask(p).unwrap_or(0));
            }
            let model =
                FhModel::new(top.vocab.clone(), phi, top.agents, worlds, blocks, awareness, valuation)?;
            let map = (0..top.world_count()).collect();
            let morphism =
                BoundedMorphism { source_atoms: top.atoms, target_atoms: phi, map };
            Ok((model, morphism))
        }
        RestrictionMode::Quotient => {
            let classes = equivalence_classes(top, phi);
            let class_count = classes.iter().copied().max().map_or(0, |m| m as usize + 1);
            // Representative: the least world index in each class.
            let mut rep_world = vec![usize::MAX; class_count];
            for (w, &c) in classes.iter().enumerate() {
                if rep_world[c as usize] == usize::MAX {
                    rep_world[c as usize] = w;
                }
            }
            let worlds: Vec<String> =
                rep_world.iter().map(|&w| tag(&top.worlds[w], &top.vocab, phi)).collect();
            let mut blocks = Vec::with_capacity(top.agents);
            for i in 0..top.agents {
                // Class blocks: classes reachable from a member's block;
                // identical reach sets form one block.
                let mut reach: Vec<std::collections::BTreeSet<u32>> =
                    vec![Default::default(); class_count];
                for (c, &w) in rep_world.iter().enumerate() {
                    let block = top.block_mask_of(i, w);
                    for t in 0..top.world_count() {
                        if block & (1 << t) != 0 {
                            reach[c].insert(classes[t]);
                        }
                    }
                }
                let mut by_reach: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
                for (c, r) in reach.iter().enumerate() {
                    by_reach.entry(r.iter().copied().collect()).or_default().push(c);
                }
                blocks.push(by_reach.into_values().collect::<Vec<_>>());
            }
            let awareness: Vec<Vec<AtomSet>> = (0..top.agents)
                .map(|i| {
                    rep_world.iter().map(|&w| top.awareness_of(i, w).intersect(phi)).collect()
                })
                .collect();
            let mut valuation = vec![None; top.vocab.len()];
            for p in phi.iter() {
                let vm = top.valuation_mask(p).unwrap_or(0);
                let mut mask = 0u64;
                for (c, &w) in rep_world.iter().enumerate() {
                    if vm & (1 << w) != 0 {
                        mask |= 1 << c;
                    }
                }
                valuation[p.0 as usize] = Some(mask);
            }
            let model = FhModel::new(
                top.vocab.clone(),
                phi,
                top.agents,
                worlds,
                blocks,
                awareness,
                valuation,
            )?;
            let map: Vec<usize> = classes.iter().map(|&c| c as usize).collect();
            let morphism =
                BoundedMorphism { source_atoms: top.atoms, target_atoms: phi, map };
            Ok((model, morphism))
        }
    }
}

fn copy_blocks(top: &FhModel) -> Vec<Vec<Vec<usize>>> {
    (0..top.agents)
        .map(|i| {
            let mut seen: HashSet<WorldMask> = HashSet::new();
            let mut out = Vec::new();
            for w in 0..top.world_count() {
                let b = top.block_mask_of(i, w);
                if seen.insert(b) {
                    out.push((0..top.world_count()).filter(|t| b & (1 << t) != 0).collect());
                }
            }
            out
        })
        .collect()
}

/// Modal-equivalence classes of the top model's worlds with respect to the
/// sublanguage `phi`: partition refinement to a fixpoint on the restricted
/// valuation, restricted awareness, and per-agent block signatures.
pub fn equivalence_classes(top: &FhModel, phi: AtomSet) -> Vec<u32> {
    let n = top.world_count();
    let mut class: Vec<u32> = {
        let mut key_ids: HashMap<(u64, Vec<AtomSet>), u32> = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for w in 0..n {
            let mut bits = 0u64;
            for (k, p) in phi.iter().enumerate() {
                if top.valuation_mask(p).unwrap_or(0) & (1 << w) != 0 {
                    bits |= 1 << k;
                }
            }
            let aw: Vec<AtomSet> =
                (0..top.agents).map(|i| top.awareness_of(i, w).intersect(phi)).collect();
            let next = key_ids.len() as u32;
            out.push(*key_ids.entry((bits, aw)).or_insert(next));
        }
        out
    };
    loop {
        let mut key_ids: HashMap<(u32, Vec<Vec<u32>>), u32> = HashMap::new();
        let mut next_class = Vec::with_capacity(n);
        for w in 0..n {
            let mut sig = Vec::with_capacity(top.agents);
            for i in 0..top.agents {
                let block = top.block_mask_of(i, w);
                let mut reach: Vec<u32> =
                    (0..n).filter(|t| block & (1 << t) != 0).map(|t| class[t]).collect();
                reach.sort_unstable();
                reach.dedup();
                sig.push(reach);
            }
            let next = key_ids.len() as u32;
            next_class.push(*key_ids.entry((class[w], sig)).or_insert(next));
        }
        if next_class == class {
            return class;
        }
        class = next_class;
    }
}

/// The category: one model per subset of the top model's vocabulary and
/// one morphism per comparable pair.
#[derive(Debug, Clone)]
pub struct FhCategory {
    pub mode: RestrictionMode,
    pub top_atoms: AtomSet,
    models: BTreeMap<AtomSet, FhModel>,
    /// Morphism world maps keyed by (source set, target set), target ⊆ source.
    morphisms: BTreeMap<(AtomSet, AtomSet), Vec<usize>>,
    /// For each set, the image of each original top-model world in the
    /// member model (the restriction morphism from the build input).
    from_original: BTreeMap<AtomSet, Vec<usize>>,
    /// The build input's world names, indexing `from_original`.
    pub original_worlds: Vec<String>,
}

impl FhCategory {
    pub fn model(&self, set: AtomSet) -> &FhModel {
        &self.models[&set]
    }

    pub fn models(&self) -> impl Iterator<Item = (AtomSet, &FhModel)> {
        self.models.iter().map(|(s, m)| (*s, m))
    }

    pub fn morphism_map(&self, from: AtomSet, to: AtomSet) -> &[usize] {
        &self.morphisms[&(from, to)]
    }

    /// Member-world index of each original top world under restriction.
    pub fn original_map(&self, set: AtomSet) -> &[usize] {
        &self.from_original[&set]
    }

    pub fn space_sets(&self) -> impl Iterator<Item = AtomSet> + '_ {
        self.models.keys().copied()
    }
}

/// Build the full category over every subset of the top model's
/// vocabulary.
pub fn build_category(top: &FhModel, mode: RestrictionMode) -> Result<FhCategory, FhError> {
    if top.atoms != top.vocab.full_set() {
        return Err(FhError::Incompatible(
            "the top model must span its whole vocabulary".into(),
        ));
    }
    let n = top.vocab.len();
    let mut models = BTreeMap::new();
    let mut to_top: BTreeMap<AtomSet, Vec<usize>> = BTreeMap::new();
    for bits in 0..(1u32 << n) {
        let set = AtomSet(bits as u16);
        let (model, morphism) = restrict_model(top, set, mode)?;
        to_top.insert(set, morphism.map);
        models.insert(set, model);
    }
    let mut morphisms = BTreeMap::new();
    for (&phi, phi_map) in &to_top {
        for (&psi, psi_map) in &to_top {
            if !psi.is_subset(phi) {
                continue;
            }
            // f^Φ_Ψ sends the image of w in K_Φ to the image of w in K_Ψ;
            // well-defined because the Φ-equivalence refines the Ψ-one.
            let phi_model = &models[&phi];
            let mut map = vec![usize::MAX; phi_model.world_count()];
            for (w, &cphi) in phi_map.iter().enumerate() {
                map[cphi] = psi_map[w];
            }
            debug_assert!(map.iter().all(|&t| t != usize::MAX));
            morphisms.insert((phi, psi), map);
        }
    }
    Ok(FhCategory {
        mode,
        top_atoms: top.atoms,
        models,
        morphisms,
        from_original: to_top,
        original_worlds: top.worlds.clone(),
    })
}

/// Check the category laws: identities, pairwise composition over all
/// chains, and validity of every morphism.
pub fn validate_category(cat: &FhCategory) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for (set, model) in cat.models() {
        let idmap = cat.morphism_map(set, set);
        if idmap.iter().enumerate().any(|(w, &t)| w != t) {
            rep.add(
                Clause::CategoryIdentity,
                None,
                format!("morphism `{0}`->`{0}` is not the identity", model.vocab.set_label(set)),
            );
        }
    }
    for (phi, source) in cat.models() {
        for (psi, target) in cat.models() {
            if !psi.is_subset(phi) {
                continue;
            }
            let morphism = BoundedMorphism {
                source_atoms: phi,
                target_atoms: psi,
                map: cat.morphism_map(phi, psi).to_vec(),
            };
            rep.merge(validate_bounded_morphism(source, target, &morphism));
            for (upsilon, _) in cat.models() {
                if !upsilon.is_subset(psi) {
                    continue;
                }
                let direct = cat.morphism_map(phi, upsilon);
                let via = cat.morphism_map(psi, upsilon);
                let first = cat.morphism_map(phi, psi);
                for w in 0..source.world_count() {
                    if direct[w] != via[first[w]] {
                        rep.add(
                            Clause::CategoryComposition,
                            None,
                            format!(
                                "composition through `{}` disagrees at `{}`",
                                source.vocab.set_label(psi),
                                source.worlds[w]
                            ),
                        );
                    }
                }
            }
        }
    }
    rep
}

/// A failure of modal equivalence along a morphism.
#[derive(Debug, Clone)]
pub struct EquivalenceFailure {
    pub sup: AtomSet,
    pub sub: AtomSet,
    pub witness: EquivalenceWitness,
}

/// Check, for every comparable pair and every formula of the smaller
/// sublanguage up to `depth`, that satisfaction transfers along the
/// morphism. Exhaustive via signature classes: a formula's satisfaction
/// pattern across the whole category is a function of its operands'
/// patterns and atom set, so one representative per class decides all.
pub fn check_category_equivalence(cat: &FhCategory, depth: usize) -> Vec<EquivalenceFailure> {
    let sets: Vec<AtomSet> = cat.space_sets().collect();
    let models: Vec<&FhModel> = sets.iter().map(|s| cat.model(*s)).collect();
    let agents = models[0].agents;

    // A signature: the formula's atoms plus its truth mask in every model
    // whose sublanguage contains those atoms (in ascending set order).
    type Sig = (AtomSet, Vec<WorldMask>);
    let masks_of = |atoms: AtomSet, f: &dyn Fn(usize) -> WorldMask| -> Vec<WorldMask> {
        sets.iter()
            .enumerate()
            .filter(|(_, s)| atoms.is_subset(**s))
            .map(|(i, _)| f(i))
            .collect()
    };
    let defined_models = |atoms: AtomSet| -> Vec<usize> {
        sets.iter().enumerate().filter(|(_, s)| atoms.is_subset(**s)).map(|(i, _)| i).collect()
    };

    let mut failures = Vec::new();
    let check = |f: &Formula, sig: &Sig, failures: &mut Vec<EquivalenceFailure>| {
        let dm = defined_models(sig.0);
        for (pos_phi, &mi) in dm.iter().enumerate() {
            for (pos_psi, &mj) in dm.iter().enumerate() {
                if !sets[mj].is_subset(sets[mi]) || mi == mj {
                    continue;
                }
                let map = cat.morphism_map(sets[mi], sets[mj]);
                let m_phi = sig.1[pos_phi];
                let m_psi = sig.1[pos_psi];
                for w in 0..models[mi].world_count() {
                    let here = m_phi & (1 << w) != 0;
                    let there = m_psi & (1 << map[w]) != 0;
                    if here != there {
                        failures.push(EquivalenceFailure {
                            sup: sets[mi],
                            sub: sets[mj],
                            witness: EquivalenceWitness {
                                formula: f.clone(),
                                world: models[mi].worlds[w].clone(),
                            },
                        });
                        break;
                    }
                }
            }
        }
    };

    let mut seen: HashSet<Sig> = HashSet::new();
    let mut level: Vec<(Formula, Sig)> = Vec::new();
    let push = |f: Formula,
                    sig: Sig,
                    seen: &mut HashSet<Sig>,
                    level: &mut Vec<(Formula, Sig)>,
                    failures: &mut Vec<EquivalenceFailure>| {
        if seen.insert(sig.clone()) {
            check(&f, &sig, failures);
            level.push((f, sig));
        }
    };

    let top_sig: Sig = (AtomSet::EMPTY, masks_of(AtomSet::EMPTY, &|i| models[i].full_mask()));
    push(Formula::Top, top_sig, &mut seen, &mut level, &mut failures);
    for a in cat.top_atoms.iter() {
        let atoms = AtomSet::singleton(a);
        let sig = (atoms, masks_of(atoms, &|i| models[i].valuation_mask(a).unwrap_or(0)));
        push(Formula::Atom(a), sig, &mut seen, &mut level, &mut failures);
    }

    let mut all: Vec<(Formula, Sig)> = Vec::new();
    for _ in 0..depth {
        if level.is_empty() {
            break;
        }
        all.extend(level.iter().cloned());
        let prev = std::mem::take(&mut level);
        for (f, (atoms, masks)) in &prev {
            let dm = defined_models(*atoms);
            let neg: Vec<WorldMask> = dm
                .iter()
                .enumerate()
                .map(|(pos, &mi)| !masks[pos] & models[mi].full_mask())
                .collect();
            push(Formula::not(f.clone()), (*atoms, neg), &mut seen, &mut level, &mut failures);
            for i in 0..agents {
                let lmask: Vec<WorldMask> = dm
                    .iter()
                    .enumerate()
                    .map(|(pos, &mi)| models[mi].box_mask(i, masks[pos]))
                    .collect();
                push(
                    Formula::l(i, f.clone()),
                    (*atoms, lmask.clone()),
                    &mut seen,
                    &mut level,
                    &mut failures,
                );
                let amask: Vec<WorldMask> =
                    dm.iter().map(|&mi| models[mi].aware_mask(i, *atoms)).collect();
                push(
                    Formula::a(i, f.clone()),
                    (*atoms, amask.clone()),
                    &mut seen,
                    &mut level,
                    &mut failures,
                );
                let kmask: Vec<WorldMask> =
                    lmask.iter().zip(&amask).map(|(l, a)| l & a).collect();
                push(Formula::k(i, f.clone()), (*atoms, kmask), &mut seen, &mut level, &mut failures);
            }
        }
        for (lf, (la, lm)) in all.iter().chain(prev.iter()) {
            for (rf, (ra, rm)) in &prev {
                let atoms = la.union(*ra);
                let dm = defined_models(atoms);
                let ldm = defined_models(*la);
                let rdm = defined_models(*ra);
                let masks: Vec<WorldMask> = dm
                    .iter()
                    .map(|mi| {
                        let lp = ldm.iter().position(|x| x == mi).unwrap();
                        let rp = rdm.iter().position(|x| x == mi).unwrap();
                        lm[lp] & rm[rp]
                    })
                    .collect();
                push(
                    Formula::and(lf.clone(), rf.clone()),
                    (atoms, masks),
                    &mut seen,
                    &mut level,
                    &mut failures,
                );
            }
        }
        if !failures.is_empty() {
            break;
        }
    }
    failures
}

/// Join/meet structure over families of sublanguages: the morphisms into
/// the union's model factor through every member, and the member's
/// morphisms factor through the intersection's model.
pub fn check_lattice_families(cat: &FhCategory, max_family: usize) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let sets: Vec<AtomSet> = cat.space_sets().collect();
    let mut families: Vec<Vec<AtomSet>> = Vec::new();
    let mut grow: Vec<Vec<usize>> = (0..sets.len()).map(|i| vec![i]).collect();
    for _ in 0..max_family {
        families.extend(grow.iter().map(|f| f.iter().map(|&i| sets[i]).collect()));
        let mut next = Vec::new();
        for fam in &grow {
            let last = *fam.last().unwrap();
            for i in (last + 1)..sets.len() {
                let mut f = fam.clone();
                f.push(i);
                next.push(f);
            }
        }
        grow = next;
    }
    for fam in &families {
        let join = fam.iter().fold(AtomSet::EMPTY, |a, s| a.union(*s));
        let meet = fam.iter().fold(cat.top_atoms, |a, s| a.intersect(*s));
        for &psi in fam {
            let via_psi = cat.morphism_map(join, psi);
            let down = cat.morphism_map(psi, meet);
            let direct = cat.morphism_map(join, meet);
            for w in 0..cat.model(join).world_count() {
                if down[via_psi[w]] != direct[w] {
                    rep.add(
                        Clause::CategoryComposition,
                        None,
                        format!(
                            "join-to-meet factorization through `{}` fails",
                            cat.model(psi).vocab.set_label(psi)
                        ),
                    );
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fh::{fh_from_json, fh_modally_equivalent, validate_fh};

    fn two_world_top() -> FhModel {
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
    fn copy_restriction_to_full_vocab_is_isomorphic() {
        let top = two_world_top();
        let (copy, morphism) = restrict_model(&top, top.atoms, RestrictionMode::Copy).unwrap();
        assert!(validate_fh(&copy).is_valid());
        assert!(validate_bounded_morphism(&top, &copy, &morphism).is_valid());
        let pairing: std::collections::BTreeMap<String, String> = top
            .worlds
            .iter()
            .zip(&copy.worlds)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        assert!(fh_modally_equivalent(&top, &copy, &pairing, 3).unwrap());
    }

    #[test]
    fn restriction_to_empty_vocabulary() {
        let top = two_world_top();
        let (m, f) = restrict_model(&top, AtomSet::EMPTY, RestrictionMode::Quotient).unwrap();
        assert_eq!(m.world_count(), 1);
        assert!(validate_bounded_morphism(&top, &m, &f).is_valid());
        assert_eq!(m.awareness_of(0, 0), AtomSet::EMPTY);
    }

    #[test]
    fn quotient_merges_q_difference() {
        // Two worlds differing only in q with equal restricted awareness
        // collapse once q is dropped. Oracle: partition refinement classes.
        let top = two_world_top();
        let p_only = top.vocab.parse_set_label("p").unwrap();
        let classes = equivalence_classes(&top, p_only);
        assert_eq!(classes[0], classes[1]);
        let (m, f) = restrict_model(&top, p_only, RestrictionMode::Quotient).unwrap();
        assert_eq!(m.world_count(), 1);
        assert!(validate_bounded_morphism(&top, &m, &f).is_valid());
    }

    #[test]
    fn quotient_never_exceeds_copy() {
        let top = two_world_top();
        for bits in 0..4u16 {
            let set = AtomSet(bits);
            let (c, _) = restrict_model(&top, set, RestrictionMode::Copy).unwrap();
            let (q, _) = restrict_model(&top, set, RestrictionMode::Quotient).unwrap();
            assert!(q.world_count() <= c.world_count());
        }
    }

    #[test]
    fn category_sizes_for_one_atom() {
        let top = fh_from_json(
            r#"{
  "kind": "fh",
  "atoms": ["p"],
  "agents": 1,
  "worlds": ["w"],
  "valuation": {"p": ["w"]},
  "relations": [[["w"]]],
  "awareness": [{"w": ["p"]}]
}"#,
        )
        .unwrap();
        let cat = build_category(&top, RestrictionMode::Copy).unwrap();
        assert_eq!(cat.models().count(), 2);
        assert_eq!(cat.morphisms.len(), 3);
        assert!(validate_category(&cat).is_valid());
    }

    #[test]
    fn category_validates_and_composes() {
        let top = two_world_top();
        for mode in [RestrictionMode::Copy, RestrictionMode::Quotient] {
            let cat = build_category(&top, mode).unwrap();
            let rep = validate_category(&cat);
            assert!(rep.is_valid(), "{mode:?}: {rep}");
            // Pointwise composition through the middle layer.
            let full = top.atoms;
            let p_only = top.vocab.parse_set_label("p").unwrap();
            let via: Vec<usize> = (0..cat.model(full).world_count())
                .map(|w| {
                    cat.morphism_map(p_only, AtomSet::EMPTY)
                        [cat.morphism_map(full, p_only)[w]]
                })
                .collect();
            assert_eq!(via.as_slice(), cat.morphism_map(full, AtomSet::EMPTY));
        }
    }

    #[test]
    fn equivalence_holds_on_built_categories() {
        let top = two_world_top();
        for mode in [RestrictionMode::Copy, RestrictionMode::Quotient] {
            let cat = build_category(&top, mode).unwrap();
            let failures = check_category_equivalence(&cat, 3);
            assert!(failures.is_empty(), "{mode:?}: {:?}", failures.first());
        }
    }

    #[test]
    fn equivalence_detects_corrupted_member() {
        let top = two_world_top();
        let mut cat = build_category(&top, RestrictionMode::Copy).unwrap();
        let p_only = top.vocab.parse_set_label("p").unwrap();
        let member = cat.models.get_mut(&p_only).unwrap();
        member.valuation[0] = Some(0b01); // drop p at the second world copy
        let failures = check_category_equivalence(&cat, 3);
        assert!(!failures.is_empty());
        // The witness mentions a concrete formula and world.
        let f = &failures[0];
        assert!(f.sub.is_subset(f.sup));
    }

    #[test]
    fn lattice_families_commute() {
        let top = two_world_top();
        let cat = build_category(&top, RestrictionMode::Quotient).unwrap();
        assert!(check_lattice_families(&cat, 3).is_valid());
    }

    #[test]
    fn repointed_morphism_breaks_commutation() {
        let top = two_world_top();
        let mut cat = build_category(&top, RestrictionMode::Copy).unwrap();
        let full = top.atoms;
        let map = cat.morphisms.get_mut(&(full, AtomSet::EMPTY)).unwrap();
        map.swap(0, 1);
        let rep = validate_category(&cat);
        assert!(!rep.is_valid());
    }
}
