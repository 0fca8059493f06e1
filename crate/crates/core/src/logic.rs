//! The LPA axiom system: schema instantiation, soundness testing against
//! models, Hilbert-style proof checking, and bounded countermodel search.
//!
//! Implication and biconditional in axiom patterns are encoded with the
//! primitive connectives exactly as the parser desugars them, so schema
//! instances, proof lines, and parsed formulas compare structurally.

use std::collections::HashMap;

use serde::Deserialize;
use thiserror::Error;

use crate::category::FhCategory;
use crate::fh::{FhError, FhModel};
use crate::hms::{HmsError, HmsModel};
use crate::semantics::{valid_in_category, valid_in_fh, EvalCtx};
use crate::syntax::{parse_formula, AgentId, AtomSet, Formula, ParseError, Vocab};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("tautology check needs more than 16 distinct letters")]
    TooManyLetters,
    #[error("search bounds exceeded: {0}")]
    BoundExceeded(String),
    #[error("proof file malformed: {0}")]
    ProofFormat(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Fh(#[from] FhError),
    #[error(transparent)]
    Hms(#[from] HmsError),
}

/// The twelve axiom schemas, keyed by their customary tags. Substitution
/// instances of propositional logic are handled separately (`PL` in proof
/// files) by [`is_tautology_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemaName {
    /// (K) `(ℓiφ ∧ (ℓiφ → ℓiψ)) → ℓiψ`
    KDist,
    /// `kiφ ↔ (ℓiφ ∧ aiφ)`
    ExplicitKnowledge,
    /// (A1) `ai(φ∧ψ) ↔ (aiφ ∧ aiψ)`
    A1,
    /// (A2) `ai¬φ ↔ aiφ`
    A2,
    /// (A3) `aikjφ ↔ aiφ`
    A3,
    /// (A4) `aiajφ ↔ aiφ`
    A4,
    /// (A5) `aiℓjφ ↔ aiφ`
    A5,
    /// (A11) `aiφ → ℓiaiφ`
    A11,
    /// (A12) `¬aiφ → ℓi¬aiφ`
    A12,
    /// (T) `ℓiφ → φ`
    T,
    /// (4) `ℓiφ → ℓiℓiφ`
    Four,
    /// (5) `¬ℓiφ → ℓi¬ℓiφ`
    Five,
}

pub const ALL_SCHEMAS: [SchemaName; 12] = [
    SchemaName::KDist,
    SchemaName::ExplicitKnowledge,
    SchemaName::A1,
    SchemaName::A2,
    SchemaName::A3,
    SchemaName::A4,
    SchemaName::A5,
    SchemaName::A11,
    SchemaName::A12,
    SchemaName::T,
    SchemaName::Four,
    SchemaName::Five,
];

impl SchemaName {
    pub fn tag(self) -> &'static str {
        match self {
            SchemaName::KDist => "K",
            SchemaName::ExplicitKnowledge => "EK",
            SchemaName::A1 => "A1",
            SchemaName::A2 => "A2",
            SchemaName::A3 => "A3",
            SchemaName::A4 => "A4",
            SchemaName::A5 => "A5",
            SchemaName::A11 => "A11",
            SchemaName::A12 => "A12",
            SchemaName::T => "T",
            SchemaName::Four => "4",
            SchemaName::Five => "5",
        }
    }

    pub fn from_tag(tag: &str) -> Option<SchemaName> {
        ALL_SCHEMAS.iter().copied().find(|s| s.tag() == tag)
    }

    /// Whether the schema mentions the second formula metavariable.
    pub fn uses_psi(self) -> bool {
        matches!(self, SchemaName::KDist | SchemaName::A1)
    }

    /// Whether the schema mentions the second agent metavariable.
    pub fn uses_j(self) -> bool {
        matches!(self, SchemaName::A3 | SchemaName::A4 | SchemaName::A5)
    }

    /// The schema instance under the given substitution.
    pub fn instantiate(self, phi: &Formula, psi: &Formula, i: AgentId, j: AgentId) -> Formula {
        let p = || phi.clone();
        let q = || psi.clone();
        match self {
            SchemaName::KDist => Formula::implies(
                Formula::and(
                    Formula::l(i, p()),
                    Formula::implies(Formula::l(i, p()), Formula::l(i, q())),
                ),
                Formula::l(i, q()),
            ),
            SchemaName::ExplicitKnowledge => Formula::iff(
                Formula::k(i, p()),
                Formula::and(Formula::l(i, p()), Formula::a(i, p())),
            ),
            SchemaName::A1 => Formula::iff(
                Formula::a(i, Formula::and(p(), q())),
                Formula::and(Formula::a(i, p()), Formula::a(i, q())),
            ),
            SchemaName::A2 => Formula::iff(Formula::a(i, Formula::not(p())), Formula::a(i, p())),
            SchemaName::A3 => Formula::iff(Formula::a(i, Formula::k(j, p())), Formula::a(i, p())),
            SchemaName::A4 => Formula::iff(Formula::a(i, Formula::a(j, p())), Formula::a(i, p())),
            SchemaName::A5 => Formula::iff(Formula::a(i, Formula::l(j, p())), Formula::a(i, p())),
            SchemaName::A11 => {
                Formula::implies(Formula::a(i, p()), Formula::l(i, Formula::a(i, p())))
            }
            SchemaName::A12 => Formula::implies(
                Formula::not(Formula::a(i, p())),
                Formula::l(i, Formula::not(Formula::a(i, p()))),
            ),
            SchemaName::T => Formula::implies(Formula::l(i, p()), p()),
            SchemaName::Four => {
                Formula::implies(Formula::l(i, p()), Formula::l(i, Formula::l(i, p())))
            }
            SchemaName::Five => Formula::implies(
                Formula::not(Formula::l(i, p())),
                Formula::l(i, Formula::not(Formula::l(i, p()))),
            ),
        }
    }
}

/// Every schema instantiated with every combination of pool formulas and
/// agents that its metavariables mention.
pub fn instantiate_axioms(pool: &[Formula], agents: usize) -> Vec<(SchemaName, Formula)> {
    let mut out = Vec::new();
    let unit = [Formula::Top];
    for schema in ALL_SCHEMAS {
        let psis: &[Formula] = if schema.uses_psi() { pool } else { &unit };
        let js = if schema.uses_j() { 0..agents } else { 0..1 };
        for phi in pool {
            for psi in psis {
                for i in 0..agents {
                    for j in js.clone() {
                        out.push((schema, schema.instantiate(phi, psi, i, j)));
                    }
                }
            }
        }
    }
    out
}

/// True iff the formula is a substitution instance of a propositional
/// tautology: maximal modal subformulas and atoms are abstracted as
/// propositional letters and the abstraction checked by truth table.
pub fn is_tautology_instance(f: &Formula) -> Result<bool, LogicError> {
    let mut letters: HashMap<&Formula, usize> = HashMap::new();
    collect_letters(f, &mut letters)?;
    let n = letters.len();
    for assign in 0u32..(1 << n) {
        if !taut_eval(f, assign, &letters) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_letters<'f>(
    f: &'f Formula,
    letters: &mut HashMap<&'f Formula, usize>,
) -> Result<(), LogicError> {
    match f {
        Formula::Top => Ok(()),
        Formula::Not(g) => collect_letters(g, letters),
        Formula::And(l, r) => {
            collect_letters(l, letters)?;
            collect_letters(r, letters)
        }
        Formula::Atom(_) | Formula::L(..) | Formula::A(..) | Formula::K(..) => {
            if !letters.contains_key(f) {
                let next = letters.len();
                if next >= 16 {
                    return Err(LogicError::TooManyLetters);
                }
                letters.insert(f, next);
            }
            Ok(())
        }
    }
}

fn taut_eval(f: &Formula, assign: u32, letters: &HashMap<&Formula, usize>) -> bool {
    match f {
        Formula::Top => true,
        Formula::Not(g) => !taut_eval(g, assign, letters),
        Formula::And(l, r) => taut_eval(l, assign, letters) && taut_eval(r, assign, letters),
        other => assign & (1 << letters[other]) != 0,
    }
}

/// What the soundness suite runs against.
pub enum SoundnessTarget<'a> {
    Hms(&'a HmsModel),
    Fh(&'a FhModel),
    Category(&'a FhCategory),
}

#[derive(Debug, Clone)]
pub struct SchemaResult {
    pub name: String,
    /// Instances covered, counted over the full pool.
    pub instances: u64,
    /// Distinct semantic classes actually evaluated.
    pub checked: u64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub entries: Vec<SchemaResult>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.failures.is_empty())
    }

    pub fn total_instances(&self) -> u64 {
        self.entries.iter().map(|e| e.instances).sum()
    }
}

/// Test the soundness direction of the axiom system against one model or
/// category: every schema instance over the pool must be valid (relative
/// to definedness), a sample of propositional tautology shapes must be
/// valid, and the two inference rules must preserve validity.
///
/// Validity of an instance depends only on the extensions of the
/// substituted formulas, so the pool is first partitioned into semantic
/// classes and one representative per class is evaluated; reported
/// instance counts cover the whole pool.
pub fn soundness_suite(
    target: &SoundnessTarget<'_>,
    pool: &[Formula],
    agents: usize,
) -> Result<SoundnessReport, LogicError> {
    let mut hms_ctx = match target {
        SoundnessTarget::Hms(m) => Some(EvalCtx::new(m)?),
        _ => None,
    };

    // Semantic class key of a pool formula in the target.
    let class_key = |f: &Formula, ctx: &mut Option<EvalCtx<'_>>| -> Result<String, LogicError> {
        Ok(match target {
            SoundnessTarget::Hms(_) => {
                let e = ctx.as_mut().unwrap().extension(f)?;
                format!("{:?}|{:?}|{}", f.atoms(), e.base_space, e.base)
            }
            SoundnessTarget::Fh(m) => format!("{:?}|{}", f.atoms(), m.truth_mask(f)?),
            SoundnessTarget::Category(c) => {
                let mut key = format!("{:?}", f.atoms());
                for (set, member) in c.models() {
                    if f.atoms().is_subset(set) {
                        key.push_str(&format!("|{}", member.truth_mask(f)?));
                    }
                }
                key
            }
        })
    };

    let mut reps: Vec<(Formula, u64)> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    for f in pool {
        let key = class_key(f, &mut hms_ctx)?;
        match by_key.get(&key) {
            Some(&idx) => reps[idx].1 += 1,
            None => {
                by_key.insert(key, reps.len());
                reps.push((f.clone(), 1));
            }
        }
    }

    let mut valid = |f: &Formula| -> Result<bool, LogicError> {
        Ok(match target {
            SoundnessTarget::Hms(_) => {
                let ctx = hms_ctx.as_mut().unwrap();
                let defined = ctx.defined_set(f.atoms());
                let ext = ctx.extension(f)?.up_closure(&ctx.model.frame);
                let ok = defined.states().all(|s| ext.contains(s));
                ok
            }
            SoundnessTarget::Fh(m) => valid_in_fh(m, f)?,
            SoundnessTarget::Category(c) => valid_in_category(c, f)?,
        })
    };

    let mut report = SoundnessReport::default();
    let describe = |f: &Formula| format!("{f:?}");

    for schema in ALL_SCHEMAS {
        let mut failures = Vec::new();
        let mut covered = 0u64;
        let mut checked = 0u64;
        let js: u64 = if schema.uses_j() { agents as u64 } else { 1 };
        for (phi, phi_n) in &reps {
            let psi_iter: Vec<(Formula, u64)> = if schema.uses_psi() {
                reps.clone()
            } else {
                vec![(Formula::Top, 1)]
            };
            for (psi, psi_n) in &psi_iter {
                for i in 0..agents {
                    for j in 0..(if schema.uses_j() { agents } else { 1 }) {
                        let inst = schema.instantiate(phi, psi, i, j);
                        checked += 1;
                        covered += phi_n * psi_n;
                        if !valid(&inst)? {
                            failures.push(describe(&inst));
                        }
                    }
                }
            }
        }
        let _ = js;
        report.entries.push(SchemaResult {
            name: schema.tag().to_string(),
            instances: covered,
            checked,
            failures,
        });
    }

    // Derived validity: the usual distribution form of K. It is not one of
    // the axiom schemas but must hold in every model all the same.
    {
        let mut failures = Vec::new();
        let mut covered = 0u64;
        let mut checked = 0u64;
        for (phi, phi_n) in &reps {
            for (psi, psi_n) in &reps {
                for i in 0..agents {
                    let inst = Formula::implies(
                        Formula::l(i, Formula::implies(phi.clone(), psi.clone())),
                        Formula::implies(Formula::l(i, phi.clone()), Formula::l(i, psi.clone())),
                    );
                    checked += 1;
                    covered += phi_n * psi_n;
                    if !valid(&inst)? {
                        failures.push(describe(&inst));
                    }
                }
            }
        }
        report.entries.push(SchemaResult {
            name: "K-std (derived)".into(),
            instances: covered,
            checked,
            failures,
        });
    }

    // Propositional tautology sample.
    {
        let mut failures = Vec::new();
        let mut covered = 0u64;
        let mut checked = 0u64;
        for (phi, phi_n) in &reps {
            for (psi, psi_n) in &reps {
                let shapes = [
                    Formula::or(phi.clone(), Formula::not(phi.clone())),
                    Formula::implies(
                        Formula::and(Formula::implies(phi.clone(), psi.clone()), phi.clone()),
                        psi.clone(),
                    ),
                    Formula::iff(Formula::not(Formula::not(phi.clone())), phi.clone()),
                    Formula::implies(Formula::and(phi.clone(), psi.clone()), phi.clone()),
                ];
                for inst in shapes {
                    debug_assert!(is_tautology_instance(&inst).unwrap());
                    checked += 1;
                    covered += phi_n * psi_n;
                    if !valid(&inst)? {
                        failures.push(describe(&inst));
                    }
                }
            }
        }
        report.entries.push(SchemaResult {
            name: "PL (sample)".into(),
            instances: covered,
            checked,
            failures,
        });
    }

    // Rule preservation: modus ponens and knowledge generalization keep
    // validity.
    {
        let mut failures = Vec::new();
        let mut checked = 0u64;
        for (phi, _) in &reps {
            if !valid(phi)? {
                continue;
            }
            for i in 0..agents {
                checked += 1;
                if !valid(&Formula::l(i, phi.clone()))? {
                    failures.push(format!("generalization breaks validity of {phi:?}"));
                }
            }
            for (psi, _) in &reps {
                checked += 1;
                if valid(&Formula::implies(phi.clone(), psi.clone()))? && !valid(psi)? {
                    failures.push(format!("modus ponens breaks validity at {psi:?}"));
                }
            }
        }
        report.entries.push(SchemaResult {
            name: "rules (MP, K-inference)".into(),
            instances: checked,
            checked,
            failures,
        });
    }

    Ok(report)
}

// ---------------------------------------------------------------------------
// Proofs

/// One justified line of a Hilbert-style proof.
#[derive(Debug, Clone)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone)]
pub enum Justification {
    /// A schema instance with an explicit substitution.
    Schema { name: SchemaName, phi: Formula, psi: Option<Formula>, i: AgentId, j: Option<AgentId> },
    /// A substitution instance of propositional logic.
    Tautology,
    /// Modus ponens from two earlier lines (antecedent, implication).
    Mp(usize, usize),
    /// Knowledge generalization of an earlier line.
    KInference(usize, AgentId),
}

#[derive(Debug, Clone)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone)]
pub struct ProofOutcome {
    pub ok: bool,
    /// One entry per line: `None` when certified.
    pub diagnostics: Vec<Option<String>>,
}

/// Check every line of a proof: schema lines must match their pattern
/// under the recorded substitution, tautology lines must pass the truth
/// table, rule lines must reference strictly earlier lines of matching
/// shape.
pub fn check_proof(proof: &Proof) -> ProofOutcome {
    let mut diagnostics = Vec::with_capacity(proof.lines.len());
    for (idx, line) in proof.lines.iter().enumerate() {
        let diag: Option<String> = match &line.justification {
            Justification::Schema { name, phi, psi, i, j } => {
                let inst = name.instantiate(
                    phi,
                    psi.as_ref().unwrap_or(&Formula::Top),
                    *i,
                    j.unwrap_or(0),
                );
                if inst == line.formula {
                    None
                } else {
                    Some(format!("line {}: not an instance of schema {}", idx + 1, name.tag()))
                }
            }
            Justification::Tautology => match is_tautology_instance(&line.formula) {
                Ok(true) => None,
                Ok(false) => Some(format!("line {}: not a propositional tautology", idx + 1)),
                Err(e) => Some(format!("line {}: {e}", idx + 1)),
            },
            Justification::Mp(a, b) => {
                if *a >= idx || *b >= idx {
                    Some(format!("line {}: modus ponens must reference earlier lines", idx + 1))
                } else {
                    let want =
                        Formula::implies(proof.lines[*a].formula.clone(), line.formula.clone());
                    if proof.lines[*b].formula == want {
                        None
                    } else {
                        Some(format!(
                            "line {}: line {} is not the implication from line {}",
                            idx + 1,
                            b + 1,
                            a + 1
                        ))
                    }
                }
            }
            Justification::KInference(a, agent) => {
                if *a >= idx {
                    Some(format!("line {}: generalization must reference an earlier line", idx + 1))
                } else if line.formula == Formula::l(*agent, proof.lines[*a].formula.clone()) {
                    None
                } else {
                    Some(format!(
                        "line {}: not the generalization of line {} for agent {}",
                        idx + 1,
                        a + 1,
                        agent + 1
                    ))
                }
            }
        };
        diagnostics.push(diag);
    }
    ProofOutcome { ok: diagnostics.iter().all(|d| d.is_none()), diagnostics }
}

#[derive(Debug, Deserialize)]
struct RawProof {
    #[serde(default)]
    atoms: Option<Vec<String>>,
    #[serde(default)]
    agents: Option<usize>,
    lines: Vec<RawLine>,
}

#[derive(Debug, Deserialize)]
struct RawLine {
    formula: String,
    by: serde_json::Value,
}

/// Parse a proof file. The vocabulary may be given under `atoms`; when
/// absent, atom names are collected from the formulas in order of first
/// appearance.
pub fn proof_from_json(text: &str) -> Result<Proof, LogicError> {
    let raw: RawProof =
        serde_json::from_str(text).map_err(|e| LogicError::ProofFormat(e.to_string()))?;
    let vocab = match &raw.atoms {
        Some(names) => Vocab::new(names.clone())?,
        None => {
            let mut names: Vec<String> = Vec::new();
            for line in &raw.lines {
                for tok in
                    line.formula.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                {
                    if !tok.is_empty()
                        && tok.chars().next().unwrap().is_ascii_lowercase()
                        && !names.iter().any(|n| n == tok)
                    {
                        names.push(tok.to_string());
                    }
                }
            }
            Vocab::new(names)?
        }
    };
    let _ = raw.agents;
    let mut lines = Vec::with_capacity(raw.lines.len());
    for (idx, line) in raw.lines.iter().enumerate() {
        let formula = parse_formula(&line.formula, &vocab)?;
        let by = &line.by;
        let justification = if let Some(tag) = by.get("schema").and_then(|v| v.as_str()) {
            if tag == "PL" {
                Justification::Tautology
            } else {
                let name = SchemaName::from_tag(tag).ok_or_else(|| {
                    LogicError::ProofFormat(format!("line {}: unknown schema `{tag}`", idx + 1))
                })?;
                let subst = by.get("subst").cloned().unwrap_or(serde_json::json!({}));
                let get_formula = |key: &str| -> Result<Option<Formula>, LogicError> {
                    match subst.get(key).and_then(|v| v.as_str()) {
                        Some(text) => Ok(Some(parse_formula(text, &vocab)?)),
                        None => Ok(None),
                    }
                };
                let phi = get_formula("phi")?.ok_or_else(|| {
                    LogicError::ProofFormat(format!("line {}: schema needs `phi`", idx + 1))
                })?;
                let psi = get_formula("psi")?;
                let agent = |key: &str| -> Result<Option<AgentId>, LogicError> {
                    match subst.get(key).and_then(|v| v.as_u64()) {
                        Some(0) => Err(LogicError::ProofFormat(format!(
                            "line {}: agent numbers start at 1",
                            idx + 1
                        ))),
                        Some(n) => Ok(Some(n as usize - 1)),
                        None => Ok(None),
                    }
                };
                let i = agent("i")?.ok_or_else(|| {
                    LogicError::ProofFormat(format!("line {}: schema needs `i`", idx + 1))
                })?;
                let j = agent("j")?;
                if name.uses_psi() && psi.is_none() {
                    return Err(LogicError::ProofFormat(format!(
                        "line {}: schema {} needs `psi`",
                        idx + 1,
                        tag
                    )));
                }
                if name.uses_j() && j.is_none() {
                    return Err(LogicError::ProofFormat(format!(
                        "line {}: schema {} needs `j`",
                        idx + 1,
                        tag
                    )));
                }
                Justification::Schema { name, phi, psi, i, j }
            }
        } else if let Some(mp) = by.get("mp").and_then(|v| v.as_array()) {
            let nums: Vec<usize> = mp
                .iter()
                .map(|v| v.as_u64().map(|n| n as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| {
                    LogicError::ProofFormat(format!("line {}: malformed `mp`", idx + 1))
                })?;
            if nums.len() != 2 || nums.contains(&0) {
                return Err(LogicError::ProofFormat(format!(
                    "line {}: `mp` needs two 1-based line numbers",
                    idx + 1
                )));
            }
            Justification::Mp(nums[0] - 1, nums[1] - 1)
        } else if let Some(k) = by.get("kinf") {
            let lineno = k.get("line").and_then(|v| v.as_u64()).ok_or_else(|| {
                LogicError::ProofFormat(format!("line {}: `kinf` needs `line`", idx + 1))
            })?;
            let agent = k.get("agent").and_then(|v| v.as_u64()).ok_or_else(|| {
                LogicError::ProofFormat(format!("line {}: `kinf` needs `agent`", idx + 1))
            })?;
            if lineno == 0 || agent == 0 {
                return Err(LogicError::ProofFormat(format!(
                    "line {}: line and agent numbers start at 1",
                    idx + 1
                )));
            }
            Justification::KInference(lineno as usize - 1, agent as usize - 1)
        } else {
            return Err(LogicError::ProofFormat(format!(
                "line {}: justification must be `schema`, `mp`, or `kinf`",
                idx + 1
            )));
        };
        lines.push(ProofLine { formula, justification });
    }
    Ok(Proof { lines })
}

// ---------------------------------------------------------------------------
// Countermodel search

/// Exhaustively enumerate partitional, propositionally determined models
/// over the formula's own atoms, up to `max_worlds` worlds, and return the
/// first model and world falsifying the formula, if any. Deterministic;
/// bounds are capped at 4 worlds and 2 atoms.
pub fn bounded_countermodel_search(
    f: &Formula,
    vocab: &Vocab,
    max_worlds: usize,
    max_atoms: usize,
    agents: usize,
) -> Result<Option<(FhModel, String)>, LogicError> {
    if max_worlds > 4 || max_atoms > 2 {
        return Err(LogicError::BoundExceeded(format!(
            "at most 4 worlds and 2 atoms supported, asked for {max_worlds} and {max_atoms}"
        )));
    }
    let atoms = f.atoms();
    if atoms.len() > max_atoms {
        return Err(LogicError::BoundExceeded(format!(
            "formula uses {} atoms, more than the bound {max_atoms}",
            atoms.len()
        )));
    }
    let agents = agents.max(f.max_agent().map_or(1, |m| m + 1));
    let atom_list: Vec<_> = atoms.iter().collect();
    for n in 1..=max_worlds {
        let worlds: Vec<String> = (0..n).map(|w| format!("w{}", w + 1)).collect();
        let partitions = set_partitions(n);
        // Per-agent choices: a partition plus an awareness set per block.
        let mut agent_choices: Vec<(usize, Vec<AtomSet>)> = Vec::new();
        for (pi, blocks) in partitions.iter().enumerate() {
            for aw in all_awareness(atoms, blocks.len()) {
                agent_choices.push((pi, aw));
            }
        }
        let mut choice_idx = vec![0usize; agents];
        loop {
            for val_bits in 0u32..(1 << (n * atom_list.len())) {
                let mut valuation = vec![None; vocab.len()];
                for (k, a) in atom_list.iter().enumerate() {
                    let mask = ((val_bits >> (k * n)) & ((1 << n) - 1)) as u64;
                    valuation[a.0 as usize] = Some(mask);
                }
                let mut blocks = Vec::with_capacity(agents);
                let mut awareness = Vec::with_capacity(agents);
                for &ci in &choice_idx {
                    let (pi, aw) = &agent_choices[ci];
                    let part = &partitions[*pi];
                    blocks.push(part.clone());
                    let mut by_world = vec![AtomSet::EMPTY; n];
                    for (bi, block) in part.iter().enumerate() {
                        for &w in block {
                            by_world[w] = aw[bi];
                        }
                    }
                    awareness.push(by_world);
                }
                let model = FhModel::new(
                    vocab.clone(),
                    atoms,
                    agents,
                    worlds.clone(),
                    blocks,
                    awareness,
                    valuation,
                )?;
                let mask = model.truth_mask(f)?;
                if mask != model.full_mask() {
                    let w = (0..n).find(|w| mask & (1 << w) == 0).unwrap();
                    let world = model.worlds[w].clone();
                    return Ok(Some((model, world)));
                }
            }
            // Advance the per-agent choice counter.
            let mut pos = 0;
            loop {
                if pos == agents {
                    break;
                }
                choice_idx[pos] += 1;
                if choice_idx[pos] < agent_choices.len() {
                    break;
                }
                choice_idx[pos] = 0;
                pos += 1;
            }
            if pos == agents {
                break;
            }
        }
    }
    Ok(None)
}

/// All set partitions of `{0..n}`, as restricted-growth strings turned
/// into block lists; canonical and deterministic.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut part = vec![Vec::new(); blocks];
        for (w, &b) in rgs.iter().enumerate() {
            part[b].push(w);
        }
        out.push(part);
        // Next restricted-growth string.
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if k == 0 {
                return out;
            }
            let max_prefix = rgs[..k].iter().copied().max().unwrap_or(0);
            if rgs[k] <= max_prefix {
                rgs[k] += 1;
                for r in rgs.iter_mut().skip(k + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// All assignments of an awareness subset of `atoms` to each of `blocks`
/// blocks.
fn all_awareness(atoms: AtomSet, blocks: usize) -> Vec<Vec<AtomSet>> {
    let subsets: Vec<AtomSet> = {
        let mut out = Vec::new();
        let mask = atoms.0;
        let mut sub = 0u16;
        loop {
            out.push(AtomSet(sub));
            if sub == mask {
                break;
            }
            sub = (sub.wrapping_sub(mask)) & mask;
        }
        out
    };
    let mut out: Vec<Vec<AtomSet>> = vec![Vec::new()];
    for _ in 0..blocks {
        let mut next = Vec::new();
        for prefix in &out {
            for &s in &subsets {
                let mut p = prefix.clone();
                p.push(s);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab_pq() -> Vocab {
        Vocab::new(vec!["p".into(), "q".into()]).unwrap()
    }

    #[test]
    fn instantiation_examples() {
        let v = vocab_pq();
        let p = parse_formula("p", &v).unwrap();
        let t = SchemaName::T.instantiate(&p, &Formula::Top, 0, 0);
        assert_eq!(t, parse_formula("L1 p -> p", &v).unwrap());
        let a2 = SchemaName::A2.instantiate(&p, &Formula::Top, 0, 0);
        assert_eq!(a2, parse_formula("A1 ~p <-> A1 p", &v).unwrap());
    }

    #[test]
    fn instance_counts() {
        let v = vocab_pq();
        let p = parse_formula("p", &v).unwrap();
        let all = instantiate_axioms(&[p], 2);
        let a5: Vec<_> = all.iter().filter(|(s, _)| *s == SchemaName::A5).collect();
        assert_eq!(a5.len(), 4); // i, j range over both agents
        let t: Vec<_> = all.iter().filter(|(s, _)| *s == SchemaName::T).collect();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn tautology_recognition() {
        let v = vocab_pq();
        for text in ["p | ~p", "L1 p | ~L1 p", "(p & q) -> p", "~~p <-> p"] {
            let f = parse_formula(text, &v).unwrap();
            assert!(is_tautology_instance(&f).unwrap(), "{text}");
        }
        for text in ["L1 p", "p -> q", "L1 p -> p"] {
            let f = parse_formula(text, &v).unwrap();
            assert!(!is_tautology_instance(&f).unwrap(), "{text}");
        }
    }

    #[test]
    fn proof_checking() {
        let text = r#"{
  "atoms": ["p"],
  "lines": [
    {"formula": "K1 p <-> (L1 p & A1 p)", "by": {"schema": "EK", "subst": {"phi": "p", "i": 1}}},
    {"formula": "(K1 p <-> (L1 p & A1 p)) -> (K1 p -> L1 p)", "by": {"schema": "PL"}},
    {"formula": "K1 p -> L1 p", "by": {"mp": [1, 2]}}
  ]
}"#;
        let proof = proof_from_json(text).unwrap();
        let outcome = check_proof(&proof);
        assert!(outcome.ok, "{:?}", outcome.diagnostics);
    }

    #[test]
    fn proof_rejects_wrong_mp() {
        let text = r#"{
  "atoms": ["p", "q"],
  "lines": [
    {"formula": "p | ~p", "by": {"schema": "PL"}},
    {"formula": "q | ~q", "by": {"schema": "PL"}},
    {"formula": "q", "by": {"mp": [1, 2]}}
  ]
}"#;
        let proof = proof_from_json(text).unwrap();
        let outcome = check_proof(&proof);
        assert!(!outcome.ok);
        assert!(outcome.diagnostics[2].is_some());
        assert!(outcome.diagnostics[0].is_none());
    }

    #[test]
    fn proof_accepts_kinf_and_prefix_monotone() {
        let text = r#"{
  "atoms": ["p"],
  "lines": [
    {"formula": "p | ~p", "by": {"schema": "PL"}},
    {"formula": "L2 (p | ~p)", "by": {"kinf": {"line": 1, "agent": 2}}}
  ]
}"#;
        let proof = proof_from_json(text).unwrap();
        assert!(check_proof(&proof).ok);
        // Every prefix of a certified proof is certified.
        for cut in 1..=proof.lines.len() {
            let prefix = Proof { lines: proof.lines[..cut].to_vec() };
            assert!(check_proof(&prefix).ok);
        }
    }

    #[test]
    fn countermodel_search_examples() {
        let v = vocab_pq();
        let taut = parse_formula("L1 p -> p", &v).unwrap();
        assert!(bounded_countermodel_search(&taut, &v, 3, 2, 1).unwrap().is_none());
        let p = parse_formula("p", &v).unwrap();
        let (m, w) = bounded_countermodel_search(&p, &v, 3, 2, 1).unwrap().unwrap();
        assert_eq!(m.world_count(), 1);
        assert!(!crate::fh::fh_sat(&m, &w, &p).unwrap());
        let ap = parse_formula("A1 p", &v).unwrap();
        let (m, w) = bounded_countermodel_search(&ap, &v, 3, 2, 1).unwrap().unwrap();
        assert!(!crate::fh::fh_sat(&m, &w, &ap).unwrap());
        assert_eq!(m.awareness_of(0, m.world_index(&w).unwrap()), AtomSet::EMPTY);
    }

    #[test]
    fn countermodel_respects_bounds() {
        let v = vocab_pq();
        let f = parse_formula("p & q", &v).unwrap();
        assert!(matches!(
            bounded_countermodel_search(&f, &v, 5, 2, 1),
            Err(LogicError::BoundExceeded(_))
        ));
    }

    #[test]
    fn countermodels_are_valid_models() {
        let v = vocab_pq();
        for text in ["K1 p", "A1 q -> K1 q", "L1 (p & q) -> K1 p"] {
            let f = parse_formula(text, &v).unwrap();
            if let Some((m, _)) = bounded_countermodel_search(&f, &v, 2, 2, 1).unwrap() {
                assert!(crate::fh::validate_fh(&m).is_valid(), "{text}");
            }
        }
    }

    #[test]
    fn set_partition_counts_follow_bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
    }
}
