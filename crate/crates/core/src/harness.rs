//! Seeded model generators, the property regression suite quantifying the
//! operator laws over every event of a model, and mutation fixtures that
//! prove each validator clause non-vacuous.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::category::{
    check_category_equivalence, check_lattice_families, validate_category, FhCategory,
    RestrictionMode,
};
use crate::fh::{FhError, FhModel};
use crate::hms::{
    a_op, a_star_op, derive_pi_star, enumerate_events, event_intersect, event_negate,
    event_union, k_op, l_op, Event, HmsError, HmsModel, StateSet,
};
use crate::report::Clause;
use crate::syntax::{AtomSet, Vocab};
use crate::transforms::{truncated_hms_transform, TransformError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("generator parameters out of range: {0}")]
    Params(String),
    #[error(transparent)]
    Fh(#[from] FhError),
    #[error(transparent)]
    Hms(#[from] HmsError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Caps keep full-lattice property suites in the seconds range: every law
/// is quantified over all events, and event counts grow as `2^|space|` per
/// space.
#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub atoms: usize,
    pub worlds: usize,
    pub agents: usize,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.atoms > 3 || self.worlds > 4 || self.agents > 2 || self.worlds == 0 || self.agents == 0
        {
            return Err(HarnessError::Params(format!(
                "need 1..=4 worlds, 0..=3 atoms, 1..=2 agents, got {self:?}"
            )));
        }
        Ok(())
    }
}

const ATOM_NAMES: [&str; 3] = ["p", "q", "r"];

/// Deterministic random FH model: uniform-ish valuation, random
/// partitions, random per-block awareness sets. Valid by construction.
pub fn gen_fh(params: GenParams, seed: u64) -> Result<FhModel, HarnessError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = Vocab::new(ATOM_NAMES[..params.atoms].iter().map(|s| s.to_string()).collect())
        .expect("fixed names are valid");
    let n = params.worlds;
    let worlds: Vec<String> = (0..n).map(|w| format!("w{}", w + 1)).collect();
    let mut blocks = Vec::with_capacity(params.agents);
    let mut awareness = Vec::with_capacity(params.agents);
    for _ in 0..params.agents {
        let block_count = rng.gen_range(1..=n);
        let mut assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..block_count)).collect();
        // Renumber so block ids are dense.
        let mut remap: HashMap<usize, usize> = HashMap::new();
        for b in assignment.iter_mut() {
            let next = remap.len();
            *b = *remap.entry(*b).or_insert(next);
        }
        let count = remap.len();
        let mut agent_blocks = vec![Vec::new(); count];
        for (w, &b) in assignment.iter().enumerate() {
            agent_blocks[b].push(w);
        }
        let levels: Vec<AtomSet> =
            (0..count).map(|_| AtomSet(rng.gen_range(0..(1u32 << params.atoms)) as u16)).collect();
        let mut by_world = vec![AtomSet::EMPTY; n];
        for (b, members) in agent_blocks.iter().enumerate() {
            for &w in members {
                by_world[w] = levels[b];
            }
        }
        blocks.push(agent_blocks);
        awareness.push(by_world);
    }
    let mut valuation = vec![None; params.atoms];
    for a in 0..params.atoms {
        valuation[a] = Some(rng.gen_range(0..(1u64 << n)));
    }
    Ok(FhModel::new(
        vocab.clone(),
        vocab.full_set(),
        params.agents,
        worlds,
        blocks,
        awareness,
        valuation,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenStrategy {
    /// Generate an FH model and fold it through the lattice transform;
    /// valid by construction.
    ViaTransform,
    /// Build a random lattice frame directly and draw correspondences,
    /// retrying until the validators pass; falls back to the transform
    /// route when retries are exhausted.
    Direct { retries: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct GenOutcome {
    pub fallback: bool,
    pub attempts: usize,
}

/// Deterministic random complemented lattice model.
pub fn gen_hms(
    params: GenParams,
    seed: u64,
    strategy: GenStrategy,
) -> Result<(HmsModel, GenOutcome), HarnessError> {
    let (mut model, outcome) = gen_hms_ikb(params, seed, strategy)?;
    let pi = derive_pi_star(&model)?;
    model.pi = Some(pi);
    model.alpha = None;
    Ok((model, outcome))
}

/// Deterministic random implicit-knowledge-based lattice model.
pub fn gen_hms_ikb(
    params: GenParams,
    seed: u64,
    strategy: GenStrategy,
) -> Result<(HmsModel, GenOutcome), HarnessError> {
    params.validate()?;
    match strategy {
        GenStrategy::ViaTransform => {
            let top = gen_fh(params, seed)?;
            let (model, _) = truncated_hms_transform(&top, RestrictionMode::Copy)?;
            Ok((model, GenOutcome { fallback: false, attempts: 1 }))
        }
        GenStrategy::Direct { retries } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
            for attempt in 0..retries {
                if let Some(model) = try_direct(params, &mut rng) {
                    let lambda_ok =
                        crate::hms::validate_lambda(&model).map(|r| r.is_valid()).unwrap_or(false);
                    let alpha_ok =
                        crate::hms::validate_alpha(&model).map(|r| r.is_valid()).unwrap_or(false);
                    if lambda_ok && alpha_ok && crate::hms::validate_frame(&model.frame).is_valid()
                    {
                        return Ok((model, GenOutcome { fallback: false, attempts: attempt + 1 }));
                    }
                }
            }
            let top = gen_fh(params, seed)?;
            let (model, _) = truncated_hms_transform(&top, RestrictionMode::Copy)?;
            Ok((model, GenOutcome { fallback: true, attempts: retries + 1 }))
        }
    }
}

/// One direct draw: a frame from per-atom equivalences on a top set of
/// states (projections commute by construction), implicit blocks pushed
/// down from a random top partition, and one awareness level per agent.
fn try_direct(params: GenParams, rng: &mut ChaCha8Rng) -> Option<HmsModel> {
    let vocab = Vocab::new(ATOM_NAMES[..params.atoms].iter().map(|s| s.to_string()).collect())
        .expect("fixed names are valid");
    let n = params.worlds;
    let full = vocab.full_set();
    // Coordinates per atom; the class of a state in the space indexed by a
    // set is its coordinate tuple restricted to that set, except at the
    // top, which stays discrete.
    let coords: Vec<Vec<u8>> = (0..params.atoms)
        .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
        .collect();
    let class_of = |set: AtomSet, t: usize| -> Vec<u8> {
        if set == full {
            vec![t as u8, u8::MAX]
        } else {
            set.iter().map(|a| coords[a.0 as usize][t]).collect()
        }
    };
    let mut spaces = std::collections::BTreeMap::new();
    let mut members: HashMap<AtomSet, Vec<Vec<usize>>> = HashMap::new();
    for bits in 0..(1u16 << params.atoms) {
        let set = AtomSet(bits);
        let mut seen: Vec<(Vec<u8>, Vec<usize>)> = Vec::new();
        for t in 0..n {
            let key = class_of(set, t);
            match seen.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(t),
                None => seen.push((key, vec![t])),
            }
        }
        let label = vocab.set_label(set);
        let names: Vec<String> = (0..seen.len())
            .map(|i| if set == full { format!("t{}", i + 1) } else { format!("{label}|{}", i + 1) })
            .collect();
        members.insert(set, seen.into_iter().map(|(_, v)| v).collect());
        spaces.insert(set, names);
    }
    let class_index = |set: AtomSet, t: usize| -> u32 {
        members[&set].iter().position(|v| v.contains(&t)).unwrap() as u32
    };
    let mut covering = std::collections::BTreeMap::new();
    for bits in 0..(1u16 << params.atoms) {
        let set = AtomSet(bits);
        for a in set.iter() {
            let below = set.remove(a);
            let map: Vec<u32> = members[&set]
                .iter()
                .map(|block| class_index(below, block[0]))
                .collect();
            covering.insert((set, a), map);
        }
    }
    let frame = crate::hms::HmsFrame::new(vocab, spaces, covering);

    // Implicit blocks: a random partition of the top states pushed down by
    // transitive closure of projected blocks.
    let mut lambda = crate::hms::ImplicitPc::default();
    let mut alpha = crate::hms::AwarenessFn::default();
    for _ in 0..params.agents {
        let block_count = rng.gen_range(1..=n);
        let top_block: Vec<usize> = (0..n).map(|_| rng.gen_range(0..block_count)).collect();
        let mut per_space = std::collections::BTreeMap::new();
        for bits in 0..(1u16 << params.atoms) {
            let set = AtomSet(bits);
            let k = members[&set].len();
            // Union-find over classes seeded by projected top blocks.
            let mut parent: Vec<usize> = (0..k).collect();
            fn find(parent: &mut Vec<usize>, x: usize) -> usize {
                if parent[x] != x {
                    let r = find(parent, parent[x]);
                    parent[x] = r;
                }
                parent[x]
            }
            for b in 0..block_count {
                let classes: Vec<usize> = (0..n)
                    .filter(|t| top_block[*t] == b)
                    .map(|t| class_index(set, t) as usize)
                    .collect();
                for w in classes.windows(2) {
                    let (a, b2) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b2 {
                        parent[a] = b2;
                    }
                }
            }
            let mut masks = vec![0u64; k];
            for c in 0..k {
                let root = find(&mut parent, c);
                for d in 0..k {
                    if find(&mut parent, d) == root {
                        masks[c] |= 1 << d;
                    }
                }
            }
            per_space.insert(set, masks);
        }
        lambda.block.push(per_space);
        lambda.uncovered.push(Vec::new());
        lambda.overlapping.push(Vec::new());

        // One global awareness level intersected with each state's space.
        let level = AtomSet(rng.gen_range(0..(1u32 << params.atoms)) as u16);
        let mut per_agent = std::collections::BTreeMap::new();
        for s in frame.states() {
            per_agent.insert(s, level.intersect(s.space));
        }
        alpha.map.push(per_agent);
    }

    // Valuation: a random base in each atom's own space.
    let mut valuation = vec![None; frame.vocab.len()];
    for a in frame.vocab.atoms() {
        let own = AtomSet::singleton(a);
        let size = frame.space_len(own);
        let base = rng.gen_range(0..(1u64 << size));
        valuation[a.0 as usize] = Some(Event { base_space: own, base });
    }
    Some(HmsModel { frame, agents: params.agents, valuation, pi: None, lambda: Some(lambda), alpha: Some(alpha) })
}

// ---------------------------------------------------------------------------
// Property suite

#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: String,
    pub instances: u64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct PropertyReport {
    pub entries: Vec<PropertyResult>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.failures.is_empty())
    }

    fn push(&mut self, name: &str, instances: u64, failures: Vec<String>) {
        self.entries.push(PropertyResult { name: name.to_string(), instances, failures });
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Largest family size for the conjunction laws (2 or 3).
    pub max_family: usize,
    /// Formula depth for category equivalence checks.
    pub depth: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_family: 3, depth: 3 }
    }
}

pub enum SuiteTarget<'a> {
    Hms(&'a HmsModel),
    Category(&'a FhCategory),
}

/// Run every operator law over all agents and all enumerated events of a
/// lattice model (conjunction laws over all families up to
/// `options.max_family`), or the equivalence laws of a category. The
/// report lists one entry per law with instance counts and any witnesses.
pub fn property_suite(
    target: &SuiteTarget<'_>,
    options: &SuiteOptions,
) -> Result<PropertyReport, HarnessError> {
    match target {
        SuiteTarget::Hms(m) => hms_suite(m, options),
        SuiteTarget::Category(c) => {
            let mut report = PropertyReport::default();
            let rep = validate_category(c);
            report.push(
                "category laws",
                1,
                rep.errors().map(|v| v.to_string()).collect(),
            );
            let failures = check_category_equivalence(c, options.depth);
            report.push(
                "modal equivalence along morphisms",
                1,
                failures
                    .iter()
                    .map(|f| {
                        format!(
                            "world `{}` of `{}` vs `{}`",
                            f.witness.world,
                            c.model(f.sup).vocab.set_label(f.sup),
                            c.model(f.sub).vocab.set_label(f.sub)
                        )
                    })
                    .collect(),
            );
            let lattice = check_lattice_families(c, options.max_family);
            report.push(
                "join/meet factorization",
                1,
                lattice.errors().map(|v| v.to_string()).collect(),
            );
            Ok(report)
        }
    }
}

struct OpTables {
    events: Vec<Event>,
    index: HashMap<Event, usize>,
    up: Vec<StateSet>,
    /// Per agent: operator outputs per event index.
    k: Vec<Vec<Event>>,
    a: Vec<Vec<Event>>,
    l: Vec<Vec<Event>>,
    astar: Vec<Vec<Event>>,
}

fn hms_suite(m: &HmsModel, options: &SuiteOptions) -> Result<PropertyReport, HarnessError> {
    let kind = m.kind()?;
    let has_pi = m.pi.is_some();
    let has_lambda = m.lambda.is_some();
    let has_alpha = m.alpha.is_some();
    let frame = &m.frame;
    let events: Vec<Event> = enumerate_events(frame).collect();
    let index: HashMap<Event, usize> = events.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let up: Vec<StateSet> = events.iter().map(|e| e.up_closure(frame)).collect();
    let mut tables = OpTables {
        events: events.clone(),
        index,
        up,
        k: Vec::new(),
        a: Vec::new(),
        l: Vec::new(),
        astar: Vec::new(),
    };
    for i in 0..m.agents {
        if has_pi {
            tables.k.push(events.iter().map(|e| k_op(m, i, *e)).collect::<Result<_, _>>()?);
            tables.a.push(events.iter().map(|e| a_op(m, i, *e)).collect::<Result<_, _>>()?);
        }
        if has_lambda {
            tables.l.push(events.iter().map(|e| l_op(m, i, *e)).collect::<Result<_, _>>()?);
        }
        if has_alpha {
            tables
                .astar
                .push(events.iter().map(|e| a_star_op(m, i, *e)).collect::<Result<_, _>>()?);
        }
    }

    let mut report = PropertyReport::default();
    if has_pi {
        explicit_knowledge_laws(m, &tables, options, &mut report);
        knowledge_awareness_laws(m, &tables, options, &mut report);
        pi_coincidence_law(m, &mut report);
    }
    if has_lambda {
        implicit_knowledge_laws(m, &tables, options, &mut report);
    }
    if has_pi && has_lambda {
        interaction_laws(m, &tables, &mut report);
    }
    if has_alpha && has_lambda {
        derived_correspondence_laws(m, &tables, kind, &mut report)?;
    }
    Ok(report)
}

fn describe(m: &HmsModel, e: Event) -> String {
    format!(
        "event base `{}` mask {:#b}",
        m.frame.vocab.set_label(e.base_space),
        e.base
    )
}

fn families(count: usize, max_family: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..count {
        for j in (i + 1)..count {
            out.push(vec![i, j]);
        }
    }
    if max_family >= 3 {
        for i in 0..count {
            for j in (i + 1)..count {
                for k in (j + 1)..count {
                    out.push(vec![i, j, k]);
                }
            }
        }
    }
    out
}

fn explicit_knowledge_laws(
    m: &HmsModel,
    t: &OpTables,
    options: &SuiteOptions,
    report: &mut PropertyReport,
) {
    let frame = &m.frame;
    let omega = Event::omega(frame);
    let mut necessitation = Vec::new();
    let mut truth = Vec::new();
    let mut pos = Vec::new();
    let mut wni = Vec::new();
    let mut mono = Vec::new();
    let mut conj = Vec::new();
    let mut singles = 0u64;
    let mut mono_n = 0u64;
    let mut conj_n = 0u64;
    for agent in 0..m.agents {
        let k = &t.k[agent];
        if k[t.index[&omega]] != omega {
            necessitation.push(format!("agent {}", agent + 1));
        }
        for (ei, e) in t.events.iter().enumerate() {
            singles += 1;
            let ke = k[ei];
            if !t.up[t.index[&ke]].is_subset(&t.up[ei]) {
                truth.push(describe(m, *e));
            }
            let kke = k[t.index[&ke]];
            if !t.up[t.index[&ke]].is_subset(&t.up[t.index[&kke]]) {
                pos.push(describe(m, *e));
            }
            // ¬K(E) ∩ ¬K¬K(E) ⊆ ¬K¬K¬K(E)
            let nk = event_negate(frame, ke);
            let knk = k[t.index[&nk]];
            let nknk = event_negate(frame, knk);
            let knknk = k[t.index[&nknk]];
            let lhs = event_intersect(frame, &[nk, nknk]);
            let rhs = event_negate(frame, knknk);
            if !lhs.up_closure(frame).is_subset(&rhs.up_closure(frame)) {
                wni.push(describe(m, *e));
            }
        }
        for (ei, e) in t.events.iter().enumerate() {
            for (fi, f) in t.events.iter().enumerate() {
                if ei == fi {
                    continue;
                }
                if t.up[ei].is_subset(&t.up[fi]) {
                    mono_n += 1;
                    if !t.up[t.index[&t.k[agent][ei]]].is_subset(&t.up[t.index[&t.k[agent][fi]]]) {
                        mono.push(format!("{} within {}", describe(m, *e), describe(m, *f)));
                    }
                }
            }
        }
        for fam in families(t.events.len(), options.max_family) {
            conj_n += 1;
            let evs: Vec<Event> = fam.iter().map(|&i| t.events[i]).collect();
            let meet = event_intersect(frame, &evs);
            let lhs = t.k[agent][t.index[&meet]];
            let kevs: Vec<Event> = fam.iter().map(|&i| t.k[agent][i]).collect();
            let rhs = event_intersect(frame, &kevs);
            if lhs != rhs {
                conj.push(describe(m, meet));
                break;
            }
        }
    }
    report.push("K necessitation", m.agents as u64, necessitation);
    report.push("K conjunction", conj_n, conj);
    report.push("K truth", singles, truth);
    report.push("K positive introspection", singles, pos);
    report.push("K monotonicity", mono_n, mono);
    report.push("K weak negative introspection I", singles, wni);
}

fn knowledge_awareness_laws(
    m: &HmsModel,
    t: &OpTables,
    options: &SuiteOptions,
    report: &mut PropertyReport,
) {
    let frame = &m.frame;
    let state_count = frame.state_count();
    let mut ku = Vec::new();
    let mut au = Vec::new();
    let mut weak_nec = Vec::new();
    let mut plaus = Vec::new();
    let mut strong = Vec::new();
    let mut wni2 = Vec::new();
    let mut sym = Vec::new();
    let mut aconj = Vec::new();
    let mut ak = Vec::new();
    let mut aa = Vec::new();
    let mut aintro = Vec::new();
    let mut singles = 0u64;
    let mut conj_n = 0u64;
    for agent in 0..m.agents {
        let k = &t.k[agent];
        let a = &t.a[agent];
        for (ei, e) in t.events.iter().enumerate() {
            singles += 1;
            let ae = a[ei];
            let ue = event_negate(frame, ae);
            // K(U(E)) is the tagged vacuous event.
            if k[t.index[&ue]] != Event::empty(e.base_space) {
                ku.push(describe(m, *e));
            }
            // U(E) = U(U(E))
            let uue = event_negate(frame, a[t.index[&ue]]);
            if ue != uue {
                au.push(describe(m, *e));
            }
            // A(E) = K(full event at the base-space)
            let full = Event::full(frame, e.base_space);
            if ae != k[t.index[&full]] {
                weak_nec.push(describe(m, *e));
            }
            // A(E) = K(E) ∪ K(¬K(E))
            let nk = event_negate(frame, k[ei]);
            let knk = k[t.index[&nk]];
            if ae != event_union(frame, &[k[ei], knk]) {
                plaus.push(describe(m, *e));
            }
            // U(E) as the intersection of iterated non-knowledge: the
            // operator sequence lives on a finite lattice, so it must
            // enter a cycle within |Ω| steps; the truncated intersection
            // then equals the infinite one.
            {
                let mut y = event_negate(frame, k[ei]);
                let mut inter = y.base;
                let mut seen = vec![y.base];
                let mut stabilized = false;
                for _ in 0..state_count {
                    y = event_negate(frame, k[t.index[&y]]);
                    if seen.contains(&y.base) {
                        stabilized = true;
                        break;
                    }
                    seen.push(y.base);
                    inter &= y.base;
                }
                if !stabilized {
                    strong.push(format!("sequence did not stabilize for {}", describe(m, *e)));
                } else if (Event { base_space: e.base_space, base: inter }) != ue {
                    strong.push(describe(m, *e));
                }
            }
            // ¬K(E) ∩ A(¬K(E)) = K(¬K(E))
            let ank = a[t.index[&nk]];
            if event_intersect(frame, &[nk, ank]) != knk {
                wni2.push(describe(m, *e));
            }
            // A(E) = A(¬E)
            if ae != a[t.index[&event_negate(frame, *e)]] {
                sym.push(describe(m, *e));
            }
            // A(E) = A(K(E)) = A(A(E)) = K(A(E))
            if ae != a[t.index[&k[ei]]] {
                ak.push(describe(m, *e));
            }
            if ae != a[t.index[&ae]] {
                aa.push(describe(m, *e));
            }
            if ae != k[t.index[&ae]] {
                aintro.push(describe(m, *e));
            }
        }
        for fam in families(t.events.len(), options.max_family) {
            conj_n += 1;
            let evs: Vec<Event> = fam.iter().map(|&i| t.events[i]).collect();
            let meet = event_intersect(frame, &evs);
            let lhs = event_intersect(
                frame,
                &fam.iter().map(|&i| a[i]).collect::<Vec<_>>(),
            );
            if lhs != a[t.index[&meet]] {
                aconj.push(describe(m, meet));
                break;
            }
        }
    }
    report.push("KU introspection", singles, ku);
    report.push("AU introspection", singles, au);
    report.push("weak necessitation", singles, weak_nec);
    report.push("plausibility", singles, plaus);
    report.push("strong plausibility", singles, strong);
    report.push("weak negative introspection II", singles, wni2);
    report.push("A symmetry", singles, sym);
    report.push("A conjunction", conj_n, aconj);
    report.push("AK self reflection", singles, ak);
    report.push("AA self reflection", singles, aa);
    report.push("A introspection", singles, aintro);
}

fn implicit_knowledge_laws(
    m: &HmsModel,
    t: &OpTables,
    options: &SuiteOptions,
    report: &mut PropertyReport,
) {
    let frame = &m.frame;
    let mut nec = Vec::new();
    let mut conj = Vec::new();
    let mut mono = Vec::new();
    let mut truth = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut singles = 0u64;
    let mut mono_n = 0u64;
    let mut conj_n = 0u64;
    let mut nec_n = 0u64;
    for agent in 0..m.agents {
        let l = &t.l[agent];
        for set in frame.space_sets() {
            nec_n += 1;
            let full = Event::full(frame, set);
            if l[t.index[&full]] != full {
                nec.push(format!("space `{}`", frame.vocab.set_label(set)));
            }
        }
        for (ei, e) in t.events.iter().enumerate() {
            singles += 1;
            let le = l[ei];
            if !t.up[t.index[&le]].is_subset(&t.up[ei]) {
                truth.push(describe(m, *e));
            }
            let lle = l[t.index[&le]];
            if !t.up[t.index[&le]].is_subset(&t.up[t.index[&lle]]) {
                pos.push(describe(m, *e));
            }
            let nl = event_negate(frame, le);
            let lnl = l[t.index[&nl]];
            if !t.up[t.index[&nl]].is_subset(&t.up[t.index[&lnl]]) {
                neg.push(describe(m, *e));
            }
        }
        for (ei, e) in t.events.iter().enumerate() {
            for (fi, f) in t.events.iter().enumerate() {
                if ei != fi && t.up[ei].is_subset(&t.up[fi]) {
                    mono_n += 1;
                    if !t.up[t.index[&l[ei]]].is_subset(&t.up[t.index[&l[fi]]]) {
                        mono.push(format!("{} within {}", describe(m, *e), describe(m, *f)));
                    }
                }
            }
        }
        for fam in families(t.events.len(), options.max_family) {
            conj_n += 1;
            let evs: Vec<Event> = fam.iter().map(|&i| t.events[i]).collect();
            let meet = event_intersect(frame, &evs);
            let rhs = event_intersect(frame, &fam.iter().map(|&i| l[i]).collect::<Vec<_>>());
            if l[t.index[&meet]] != rhs {
                conj.push(describe(m, meet));
                break;
            }
        }
    }
    report.push("L necessitation per space", nec_n, nec);
    report.push("L conjunction", conj_n, conj);
    report.push("L monotonicity", mono_n, mono);
    report.push("L truth", singles, truth);
    report.push("L positive introspection", singles, pos);
    report.push("L negative introspection", singles, neg);
}

fn interaction_laws(m: &HmsModel, t: &OpTables, report: &mut PropertyReport) {
    let frame = &m.frame;
    let mut kla = Vec::new();
    let mut ul = Vec::new();
    let mut al = Vec::new();
    let mut aofl = Vec::new();
    let mut singles = 0u64;
    for agent in 0..m.agents {
        let k = &t.k[agent];
        let a = &t.a[agent];
        let l = &t.l[agent];
        for (ei, e) in t.events.iter().enumerate() {
            singles += 1;
            if k[ei] != event_intersect(frame, &[l[ei], a[ei]]) {
                kla.push(describe(m, *e));
            }
            let ue = event_negate(frame, a[ei]);
            if ue != l[t.index[&ue]] {
                ul.push(describe(m, *e));
            }
            if a[ei] != l[t.index[&a[ei]]] {
                al.push(describe(m, *e));
            }
            if a[t.index[&l[ei]]] != a[ei] {
                aofl.push(describe(m, *e));
            }
        }
    }
    report.push("K equals L and A", singles, kla);
    report.push("U implicitly known", singles, ul);
    report.push("A implicitly known", singles, al);
    report.push("A of L equals A", singles, aofl);
}

/// The explicit possibility set at a projection equals the one at the
/// state whenever the possibility set already lives weakly below the
/// projection level.
fn pi_coincidence_law(m: &HmsModel, report: &mut PropertyReport) {
    let pi = m.pi.as_ref().unwrap();
    let frame = &m.frame;
    let mut failures = Vec::new();
    let mut instances = 0u64;
    for agent in 0..m.agents {
        for s in frame.states() {
            let t = match pi.get(agent, s) {
                Some(t) => t,
                None => continue,
            };
            if !t.space.is_subset(s.space) {
                continue;
            }
            for bits in 0..(1u16 << frame.vocab.len()) {
                let psi = AtomSet(bits);
                if !t.space.is_subset(psi) || !psi.is_subset(s.space) {
                    continue;
                }
                instances += 1;
                let below = frame.project_state(s, psi);
                if pi.get(agent, below) != Some(t) {
                    failures.push(format!(
                        "state `{}` at level `{}`",
                        frame.state_name(s),
                        frame.vocab.set_label(psi)
                    ));
                }
            }
        }
    }
    report.push("pi agrees across comparable spaces", instances, failures);
}

/// Laws of the derived explicit correspondence on implicit-knowledge-based
/// models: the pointwise definition and its two projection cases, plus
/// the operator-level equalities against the awareness function.
fn derived_correspondence_laws(
    m: &HmsModel,
    t: &OpTables,
    kind: crate::hms::HmsKind,
    report: &mut PropertyReport,
) -> Result<(), HarnessError> {
    let frame = &m.frame;
    // Work on a copy carrying the derived correspondence.
    let derived;
    let with_pi: &HmsModel = match kind {
        crate::hms::HmsKind::ComplementedIkb => m,
        _ => {
            let pi = derive_pi_star(m)?;
            derived = HmsModel {
                frame: m.frame.clone(),
                agents: m.agents,
                valuation: m.valuation.clone(),
                pi: Some(pi),
                lambda: m.lambda.clone(),
                alpha: m.alpha.clone(),
            };
            &derived
        }
    };
    let pi = with_pi.pi.as_ref().unwrap();
    let lambda = m.lambda.as_ref().unwrap();
    let alpha = m.alpha.as_ref().unwrap();

    let mut pointwise = Vec::new();
    let mut below = Vec::new();
    let mut above = Vec::new();
    let mut point_n = 0u64;
    let mut below_n = 0u64;
    let mut above_n = 0u64;
    for agent in 0..m.agents {
        for s in frame.states() {
            let level = alpha.get(agent, s).unwrap();
            let block = lambda.block_of(agent, s);
            point_n += 1;
            let want =
                crate::hms::PiTarget { space: level, mask: frame.project_mask(s.space, block, level) };
            if pi.get(agent, s) != Some(want) {
                pointwise.push(frame.state_name(s).to_string());
            }
            for bits in 0..(1u16 << frame.vocab.len()) {
                let phi = AtomSet(bits);
                if !phi.is_subset(s.space) {
                    continue;
                }
                let proj = frame.project_state(s, phi);
                if phi.is_subset(level) {
                    below_n += 1;
                    let want = crate::hms::PiTarget {
                        space: phi,
                        mask: frame.project_mask(s.space, block, phi),
                    };
                    if pi.get(agent, proj) != Some(want) {
                        below.push(frame.state_name(proj).to_string());
                    }
                } else if level.is_subset(phi) {
                    above_n += 1;
                    let want = crate::hms::PiTarget {
                        space: level,
                        mask: frame.project_mask(s.space, block, level),
                    };
                    if pi.get(agent, proj) != Some(want) {
                        above.push(frame.state_name(proj).to_string());
                    }
                }
            }
        }
    }
    report.push("derived pi pointwise", point_n, pointwise);
    report.push("derived pi below the awareness level", below_n, below);
    report.push("derived pi above the awareness level", above_n, above);

    // Operator equalities: awareness from the function equals awareness
    // from the derived correspondence; explicit knowledge splits into
    // implicit knowledge plus awareness.
    let mut a_eq = Vec::new();
    let mut k_eq = Vec::new();
    let mut n = 0u64;
    for agent in 0..m.agents {
        for (ei, e) in t.events.iter().enumerate() {
            n += 1;
            let astar = t.astar[agent][ei];
            let a = a_op(with_pi, agent, *e)?;
            if astar != a {
                a_eq.push(describe(m, *e));
            }
            let k = k_op(with_pi, agent, *e)?;
            let l = t.l[agent][ei];
            if k != event_intersect(frame, &[l, astar]) {
                k_eq.push(describe(m, *e));
            }
        }
    }
    report.push("A from levels equals A from derived pi", n, a_eq);
    report.push("K equals L and A from levels", n, k_eq);
    Ok(())
}

// ---------------------------------------------------------------------------
// Mutation fixtures

/// A model with exactly one assumption clause broken, paired with the
/// valid base it was derived from. One fixture exists per checkable
/// clause, demonstrating that no validator clause is vacuous.
pub struct MutationFixture {
    pub name: &'static str,
    pub clause: Clause,
    pub base_json: String,
    pub mutated_json: String,
}

fn fig1_left_json() -> String {
    include_str!("../tests/fixtures/fig1-left.json").to_string()
}

fn fig1_right_ikb_json() -> String {
    include_str!("../tests/fixtures/fig1-right-ikb.json").to_string()
}

fn two_state_bottom(pi: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":[],"agents":1,"spaces":{{"":["s","t"]}},"projections":{{}},
"valuation":{{}},"pi":[{pi}]}}"#
    )
}

fn fig1_pi(pi: &str) -> String {
    // The worked-example frame with an explicit correspondence only.
    format!(
        r#"{{"kind":"hms","atoms":["p","q"],"agents":1,
"spaces":{{"p,q":["pq","p~q","~pq","~p~q"],"p":["p","~p"],"q":["q","~q"],"":["*"]}},
"projections":{{"p,q->p":{{"pq":"p","p~q":"p","~pq":"~p","~p~q":"~p"}},
"p,q->q":{{"pq":"q","p~q":"~q","~pq":"q","~p~q":"~q"}},
"p->":{{"p":"*","~p":"*"}},"q->":{{"q":"*","~q":"*"}}}},
"valuation":{{"p":{{"space":"p","base":["p"]}},"q":{{"space":"q","base":["q"]}}}},
"pi":[{pi}]}}"#
    )
}

fn fig1_complemented(pi: &str, lambda: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":["p","q"],"agents":1,
"spaces":{{"p,q":["pq","p~q","~pq","~p~q"],"p":["p","~p"],"q":["q","~q"],"":["*"]}},
"projections":{{"p,q->p":{{"pq":"p","p~q":"p","~pq":"~p","~p~q":"~p"}},
"p,q->q":{{"pq":"q","p~q":"~q","~pq":"q","~p~q":"~q"}},
"p->":{{"p":"*","~p":"*"}},"q->":{{"q":"*","~q":"*"}}}},
"valuation":{{"p":{{"space":"p","base":["p"]}},"q":{{"space":"q","base":["q"]}}}},
"pi":[{pi}],"lambda":[{lambda}]}}"#
    )
}

fn one_atom_ikb(alpha: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":["p"],"agents":1,
"spaces":{{"p":["w1","w2"],"":["s"]}},
"projections":{{"p->":{{"w1":"s","w2":"s"}}}},
"valuation":{{"p":{{"space":"p","base":["w1"]}}}},
"lambda":[[["w1","w2"],["s"]]],
"alpha":[{alpha}]}}"#
    )
}

fn fig1_ikb_full_awareness(alpha: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":["p","q"],"agents":1,
"spaces":{{"p,q":["pq","p~q","~pq","~p~q"],"p":["p","~p"],"q":["q","~q"],"":["*"]}},
"projections":{{"p,q->p":{{"pq":"p","p~q":"p","~pq":"~p","~p~q":"~p"}},
"p,q->q":{{"pq":"q","p~q":"~q","~pq":"q","~p~q":"~q"}},
"p->":{{"p":"*","~p":"*"}},"q->":{{"q":"*","~q":"*"}}}},
"valuation":{{"p":{{"space":"p","base":["p"]}},"q":{{"space":"q","base":["q"]}}}},
"lambda":[[["pq"],["p~q"],["~pq"],["~p~q"],["p"],["~p"],["q"],["~q"],["*"]]],
"alpha":[{alpha}]}}"#
    )
}

fn three_atom_chain(alpha: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":["p","q","r"],"agents":1,
"spaces":{{"p,q,r":["spqr"],"p,q":["spq"],"p,r":["spr"],"q,r":["sqr"],
"p":["sp"],"q":["sq"],"r":["sr"],"":["s0"]}},
"projections":{{
"p,q,r->p,q":{{"spqr":"spq"}},"p,q,r->p,r":{{"spqr":"spr"}},"p,q,r->q,r":{{"spqr":"sqr"}},
"p,q->p":{{"spq":"sp"}},"p,q->q":{{"spq":"sq"}},
"p,r->p":{{"spr":"sp"}},"p,r->r":{{"spr":"sr"}},
"q,r->q":{{"sqr":"sq"}},"q,r->r":{{"sqr":"sr"}},
"p->":{{"sp":"s0"}},"q->":{{"sq":"s0"}},"r->":{{"sr":"s0"}}}},
"valuation":{{"p":{{"space":"p","base":["sp"]}},"q":{{"space":"q","base":["sq"]}},
"r":{{"space":"r","base":["sr"]}}}},
"lambda":[[["spqr"],["spq"],["spr"],["sqr"],["sp"],["sq"],["sr"],["s0"]]],
"alpha":[{alpha}]}}"#
    )
}

const FIG1_LEFT_PI: &str = r#"{"pq":["p"],"p~q":["p"],"~pq":["~p"],"~p~q":["~p"],
"p":["p"],"~p":["~p"],"q":["*"],"~q":["*"],"*":["*"]}"#;
const FIG1_LEFT_LAMBDA: &str =
    r#"[["pq","p~q"],["~pq","~p~q"],["p"],["~p"],["q","~q"],["*"]]"#;

/// The fifteen assumption-clause fixtures: five for the explicit
/// correspondence, five for the implicit one, five for the awareness
/// function.
pub fn mutation_fixtures() -> Vec<MutationFixture> {
    vec![
        MutationFixture {
            name: "pi confinement",
            clause: Clause::PiConfinement,
            base_json: fig1_pi(FIG1_LEFT_PI),
            // The p-state's possibility set sits in the incomparable
            // q-space.
            mutated_json: fig1_pi(
                r#"{"pq":["p"],"p~q":["p"],"~pq":["~p"],"~p~q":["~p"],
"p":["q"],"~p":["~p"],"q":["q"],"~q":["*"],"*":["*"]}"#,
            ),
        },
        MutationFixture {
            name: "pi generalized reflexivity",
            clause: Clause::PiGeneralizedReflexivity,
            base_json: two_state_bottom(r#"{"s":["s","t"],"t":["s","t"]}"#),
            mutated_json: two_state_bottom(r#"{"s":["t"],"t":["t"]}"#),
        },
        MutationFixture {
            name: "pi stationarity",
            clause: Clause::PiStationarity,
            base_json: two_state_bottom(r#"{"s":["s","t"],"t":["s","t"]}"#),
            mutated_json: two_state_bottom(r#"{"s":["s","t"],"t":["t"]}"#),
        },
        MutationFixture {
            name: "pi projections preserve ignorance",
            clause: Clause::PiProjectionsPreserveIgnorance,
            base_json: fig1_pi(FIG1_LEFT_PI),
            // Fresh awareness of q down in the q-space shrinks the
            // up-closure below the one at the top.
            mutated_json: fig1_pi(
                r#"{"pq":["p"],"p~q":["p"],"~pq":["~p"],"~p~q":["~p"],
"p":["p"],"~p":["~p"],"q":["q"],"~q":["~q"],"*":["*"]}"#,
            ),
        },
        MutationFixture {
            name: "pi projections preserve knowledge",
            clause: Clause::PiProjectionsPreserveKnowledge,
            base_json: fig1_pi(
                r#"{"pq":["pq"],"p~q":["p~q"],"~pq":["~pq"],"~p~q":["~p~q"],
"p":["p"],"~p":["~p"],"q":["q"],"~q":["~q"],"*":["*"]}"#,
            ),
            // Full awareness on top but total ignorance one level down.
            mutated_json: fig1_pi(
                r#"{"pq":["pq"],"p~q":["p~q"],"~pq":["~pq"],"~p~q":["~p~q"],
"p":["*"],"~p":["*"],"q":["*"],"~q":["*"],"*":["*"]}"#,
            ),
        },
        MutationFixture {
            name: "lambda reflexivity",
            clause: Clause::LambdaReflexivity,
            base_json: fig1_left_json(),
            mutated_json: fig1_complemented(
                FIG1_LEFT_PI,
                r#"[["pq","p~q"],["~pq","~p~q"],["p"],["~p"],["q","~q"]]"#,
            ),
        },
        MutationFixture {
            name: "lambda stationarity",
            clause: Clause::LambdaStationarity,
            base_json: fig1_left_json(),
            mutated_json: fig1_complemented(
                FIG1_LEFT_PI,
                r#"[["pq","p~q"],["p~q","~pq","~p~q"],["p"],["~p"],["q","~q"],["*"]]"#,
            ),
        },
        MutationFixture {
            name: "lambda projections preserve implicit knowledge",
            clause: Clause::LambdaProjectionsPreserveImplicitKnowledge,
            base_json: fig1_left_json(),
            // Splitting the q-space while the top still projects onto the
            // whole of it.
            mutated_json: fig1_complemented(
                FIG1_LEFT_PI,
                r#"[["pq","p~q"],["~pq","~p~q"],["p"],["~p"],["q"],["~q"],["*"]]"#,
            ),
        },
        MutationFixture {
            name: "lambda explicit measurability",
            clause: Clause::LambdaExplicitMeasurability,
            base_json: fig1_left_json(),
            // One implicit block across worlds with different explicit
            // possibility sets.
            mutated_json: fig1_complemented(
                FIG1_LEFT_PI,
                r#"[["pq","p~q","~pq","~p~q"],["p","~p"],["q","~q"],["*"]]"#,
            ),
        },
        MutationFixture {
            name: "lambda implicit measurability",
            clause: Clause::LambdaImplicitMeasurability,
            // Coarse explicit sets: the agent never distinguishes p from
            // not-p.
            base_json: fig1_complemented(
                r#"{"pq":["p","~p"],"p~q":["p","~p"],"~pq":["p","~p"],"~p~q":["p","~p"],
"p":["p","~p"],"~p":["p","~p"],"q":["*"],"~q":["*"],"*":["*"]}"#,
                r#"[["pq","p~q","~pq","~p~q"],["p","~p"],["q","~q"],["*"]]"#,
            ),
            // Implicit blocks finer than the explicit set's projection.
            mutated_json: fig1_complemented(
                r#"{"pq":["p","~p"],"p~q":["p","~p"],"~pq":["p","~p"],"~p~q":["p","~p"],
"p":["p","~p"],"~p":["p","~p"],"q":["*"],"~q":["*"],"*":["*"]}"#,
                FIG1_LEFT_LAMBDA,
            ),
        },
        MutationFixture {
            name: "alpha lack of conception",
            clause: Clause::AlphaLackOfConception,
            base_json: fig1_right_ikb_json(),
            mutated_json: fig1_ikb_awareness(
                r#"{"pq":"p","p~q":"p","~pq":"p","~p~q":"p","p":"p","~p":"p","q":"p","~q":"","*":""}"#,
            ),
        },
        MutationFixture {
            name: "alpha awareness measurability",
            clause: Clause::AlphaAwarenessMeasurability,
            base_json: one_atom_ikb(r#"{"w1":"p","w2":"p","s":""}"#),
            mutated_json: one_atom_ikb(r#"{"w1":"p","w2":"","s":""}"#),
        },
        MutationFixture {
            name: "alpha projections below the level",
            clause: Clause::AlphaProjectionBelowLevel,
            base_json: fig1_ikb_full_awareness(
                r#"{"pq":"p,q","p~q":"p,q","~pq":"p,q","~p~q":"p,q",
"p":"p","~p":"p","q":"q","~q":"q","*":""}"#,
            ),
            mutated_json: fig1_ikb_full_awareness(
                r#"{"pq":"p,q","p~q":"p,q","~pq":"p,q","~p~q":"p,q",
"p":"","~p":"p","q":"q","~q":"q","*":""}"#,
            ),
        },
        MutationFixture {
            name: "alpha projections above the level",
            clause: Clause::AlphaProjectionAboveLevel,
            base_json: three_atom_chain(
                r#"{"spqr":"p","spq":"p","spr":"p","sqr":"","sp":"p","sq":"","sr":"","s0":""}"#,
            ),
            mutated_json: three_atom_chain(
                r#"{"spqr":"p","spq":"","spr":"p","sqr":"","sp":"p","sq":"","sr":"","s0":""}"#,
            ),
        },
        MutationFixture {
            name: "alpha monotone along projections",
            clause: Clause::AlphaMonotone,
            base_json: fig1_right_ikb_json(),
            mutated_json: fig1_ikb_awareness(
                r#"{"pq":"p","p~q":"p","~pq":"p","~p~q":"p","p":"p","~p":"p","q":"q","~q":"","*":""}"#,
            ),
        },
    ]
}

fn fig1_ikb_awareness(alpha: &str) -> String {
    format!(
        r#"{{"kind":"hms","atoms":["p","q"],"agents":1,
"spaces":{{"p,q":["pq","p~q","~pq","~p~q"],"p":["p","~p"],"q":["q","~q"],"":["*"]}},
"projections":{{"p,q->p":{{"pq":"p","p~q":"p","~pq":"~p","~p~q":"~p"}},
"p,q->q":{{"pq":"q","p~q":"~q","~pq":"q","~p~q":"~q"}},
"p->":{{"p":"*","~p":"*"}},"q->":{{"q":"*","~q":"*"}}}},
"valuation":{{"p":{{"space":"p","base":["p"]}},"q":{{"space":"q","base":["q"]}}}},
"lambda":[[["pq"],["p~q"],["~pq"],["~p~q"],["p"],["~p"],["q"],["~q"],["*"]]],
"alpha":[{alpha}]}}"#
    )
}

/// Run the validator family that owns a clause against a model.
pub fn validator_for_clause(
    model: &HmsModel,
    clause: Clause,
) -> Result<crate::report::ValidationReport, HmsError> {
    use Clause::*;
    match clause {
        PiConfinement | PiGeneralizedReflexivity | PiStationarity
        | PiProjectionsPreserveIgnorance | PiProjectionsPreserveKnowledge | PiCoincidence => {
            crate::hms::validate_pi(model)
        }
        LambdaReflexivity | LambdaStationarity | LambdaProjectionsPreserveImplicitKnowledge
        | LambdaExplicitMeasurability | LambdaImplicitMeasurability
        | LambdaProjectionsPreserveImplicitIgnorance | LambdaPiCoincidence | LambdaCoherence => {
            crate::hms::validate_lambda(model)
        }
        AlphaLackOfConception | AlphaAwarenessMeasurability | AlphaProjectionBelowLevel
        | AlphaProjectionAboveLevel | AlphaMonotone => crate::hms::validate_alpha(model),
        _ => Ok(crate::hms::validate_hms(model)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fh::validate_fh;
    use crate::hms::hms_from_json;

    #[test]
    fn generator_is_deterministic_and_valid() {
        let params = GenParams { atoms: 2, worlds: 3, agents: 2 };
        let a = gen_fh(params, 7).unwrap();
        let b = gen_fh(params, 7).unwrap();
        assert_eq!(a.worlds, b.worlds);
        assert_eq!(a.awareness, b.awareness);
        assert_eq!(a.valuation, b.valuation);
        assert_eq!(a.block_of, b.block_of);
        for seed in 0..50 {
            let m = gen_fh(params, seed).unwrap();
            assert!(validate_fh(&m).is_valid(), "seed {seed}");
        }
    }

    #[test]
    fn generator_rejects_oversized_params() {
        assert!(gen_fh(GenParams { atoms: 4, worlds: 2, agents: 1 }, 0).is_err());
        assert!(gen_fh(GenParams { atoms: 1, worlds: 5, agents: 1 }, 0).is_err());
    }

    #[test]
    fn via_transform_models_always_validate() {
        let params = GenParams { atoms: 2, worlds: 3, agents: 2 };
        for seed in 0..20 {
            let (m, out) = gen_hms(params, seed, GenStrategy::ViaTransform).unwrap();
            assert!(!out.fallback);
            assert!(crate::hms::validate_pi(&m).unwrap().is_valid(), "seed {seed}");
            assert!(crate::hms::validate_lambda(&m).unwrap().is_valid(), "seed {seed}");
        }
    }

    #[test]
    fn direct_with_no_retries_falls_back() {
        let params = GenParams { atoms: 2, worlds: 2, agents: 1 };
        let (m, out) = gen_hms(params, 3, GenStrategy::Direct { retries: 0 }).unwrap();
        assert!(out.fallback);
        assert!(crate::hms::validate_pi(&m).unwrap().is_valid());
    }

    #[test]
    fn direct_generates_valid_models() {
        let params = GenParams { atoms: 2, worlds: 3, agents: 1 };
        let mut direct_hits = 0;
        for seed in 0..20 {
            let (m, out) = gen_hms_ikb(params, seed, GenStrategy::Direct { retries: 8 }).unwrap();
            if !out.fallback {
                direct_hits += 1;
            }
            assert!(crate::hms::validate_lambda(&m).unwrap().is_valid(), "seed {seed}");
            assert!(crate::hms::validate_alpha(&m).unwrap().is_valid(), "seed {seed}");
        }
        assert!(direct_hits > 0, "direct strategy never succeeded");
    }

    #[test]
    fn awareness_levels_vary_across_seeds() {
        let params = GenParams { atoms: 2, worlds: 3, agents: 2 };
        let mut levels = std::collections::HashSet::new();
        for seed in 0..100 {
            let m = gen_fh(params, seed).unwrap();
            for i in 0..m.agents {
                for w in 0..m.world_count() {
                    levels.insert(m.awareness_of(i, w));
                }
            }
        }
        assert!(levels.len() >= 2);
    }

    #[test]
    fn property_suite_passes_on_figure_models() {
        for m in
            [crate::hms::testutil::fig1_left(), crate::hms::testutil::fig1_right()]
        {
            let report =
                property_suite(&SuiteTarget::Hms(&m), &SuiteOptions::default()).unwrap();
            for entry in &report.entries {
                assert!(entry.failures.is_empty(), "{}: {:?}", entry.name, entry.failures);
            }
        }
    }

    #[test]
    fn property_suite_passes_on_ikb_fixture() {
        let m = crate::hms::testutil::fig1_right_ikb();
        let report = property_suite(&SuiteTarget::Hms(&m), &SuiteOptions::default()).unwrap();
        assert!(report.passed());
        let names: Vec<&str> = report.entries.iter().map(|e| e.name.as_str()).collect();
        assert!(names.contains(&"A from levels equals A from derived pi"));
    }

    #[test]
    fn property_suite_catches_incoherent_lambda() {
        // The left model's explicit sets with an implicit correspondence
        // coarser than they allow.
        let m = hms_from_json(&fig1_complemented(
            FIG1_LEFT_PI,
            r#"[["pq","p~q","~pq","~p~q"],["p","~p"],["q","~q"],["*"]]"#,
        ))
        .unwrap();
        let report = property_suite(&SuiteTarget::Hms(&m), &SuiteOptions::default()).unwrap();
        let kla = report.entries.iter().find(|e| e.name == "K equals L and A").unwrap();
        assert!(!kla.failures.is_empty());
    }

    #[test]
    fn mutation_fixtures_caught_by_their_clause() {
        let fixtures = mutation_fixtures();
        assert_eq!(fixtures.len(), 15);
        for fixture in fixtures {
            let base = hms_from_json(&fixture.base_json)
                .unwrap_or_else(|e| panic!("{}: base does not load: {e}", fixture.name));
            let base_report = validator_for_clause(&base, fixture.clause).unwrap();
            assert!(
                base_report.is_valid(),
                "{}: base model is not valid: {base_report}",
                fixture.name
            );
            let mutated = hms_from_json(&fixture.mutated_json)
                .unwrap_or_else(|e| panic!("{}: mutation does not load: {e}", fixture.name));
            let report = validator_for_clause(&mutated, fixture.clause).unwrap();
            assert!(
                report.flags(fixture.clause),
                "{}: expected {:?} to be flagged, got: {report}",
                fixture.name,
                fixture.clause
            );
        }
    }
}
