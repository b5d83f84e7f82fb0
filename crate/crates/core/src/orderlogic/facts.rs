//! Atoms, their realizations, and the algebraic facts derivations may cite.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::plane::{equal_or_unknown, HGen, PlaneWord, Verdict, WitnessConfig};
use crate::skew::{verify_relations_for, Generators, RelationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactKind {
    /// `u t = t u`.
    Commute { u: Word, t: Word },
    /// `lhs = rhs`.
    IdentityEq { lhs: Word, rhs: Word },
    /// `u ≠ 1`.
    NonIdentity { u: Word },
    /// `u ∉ {v, v⁻¹}`.
    NotInSet { u: Word, v: Word },
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactKind::Commute { u, t } => write!(f, "({u})({t}) = ({t})({u})"),
            FactKind::IdentityEq { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            FactKind::NonIdentity { u } => write!(f, "{u} != 1"),
            FactKind::NotInSet { u, v } => write!(f, "{u} not in {{{v}, ({v})^-1}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactStatus {
    /// Checked by exact computation on the realizations.
    Verified,
    /// A hypothesis of an abstract statement.
    Assumed,
    /// Exact computation shows the fact is false.
    Refuted,
    /// Neither proved nor refuted.
    Unknown,
}

impl FactStatus {
    pub fn citable(self) -> bool {
        matches!(self, FactStatus::Verified | FactStatus::Assumed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub id: String,
    pub kind: FactKind,
    /// Which algebra check backs the fact, e.g. a relation-report id.
    pub justification: String,
    pub status: FactStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    Abstract,
    Plane(PlaneWord),
}

/// Named atoms with realizations, plus the fact base over them.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    atoms: BTreeMap<String, Realization>,
    facts: Vec<Fact>,
}

impl AtomTable {
    pub fn new() -> Self {
        AtomTable::default()
    }

    pub fn add_atom(&mut self, name: &str, r: Realization) {
        self.atoms.insert(name.to_string(), r);
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&str, &Realization)> {
        self.atoms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn add_fact(&mut self, id: &str, kind: FactKind, justification: &str, status: FactStatus) {
        self.facts.push(Fact { id: id.to_string(), kind, justification: justification.to_string(), status });
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.id == id)
    }

    pub fn remove_facts(&mut self, pred: impl Fn(&Fact) -> bool) {
        self.facts.retain(|f| !pred(f));
    }

    /// Product of the atoms' realizations, or `None` if an atom is abstract or unknown.
    pub fn ground(&self, w: &Word) -> Option<PlaneWord> {
        let mut out = PlaneWord::identity();
        for (a, e) in w.syllables() {
            match self.atoms.get(a)? {
                Realization::Plane(p) => out = out.concat(&p.power(*e)),
                Realization::Abstract => return None,
            }
        }
        Some(out.simplify())
    }

    fn decide(&self, kind: &FactKind, cfg: &WitnessConfig) -> FactStatus {
        let verdict = |x: &Word, y: &Word| -> Option<Verdict> {
            Some(equal_or_unknown(&self.ground(x)?, &self.ground(y)?, cfg))
        };
        let as_status = |v: Option<Verdict>, want_equal: bool| match v {
            Some(Verdict::Equal) if want_equal => FactStatus::Verified,
            Some(Verdict::Distinct { .. }) if !want_equal => FactStatus::Verified,
            Some(Verdict::Equal) | Some(Verdict::Distinct { .. }) => FactStatus::Refuted,
            _ => FactStatus::Unknown,
        };
        match kind {
            FactKind::Commute { u, t } => as_status(verdict(&u.mul(t), &t.mul(u)), true),
            FactKind::IdentityEq { lhs, rhs } => as_status(verdict(lhs, rhs), true),
            FactKind::NonIdentity { u } => as_status(verdict(u, &Word::identity()), false),
            FactKind::NotInSet { u, v } => {
                let a = as_status(verdict(u, v), false);
                let b = as_status(verdict(u, &v.inverse()), false);
                match (a, b) {
                    (FactStatus::Verified, FactStatus::Verified) => FactStatus::Verified,
                    (FactStatus::Refuted, _) | (_, FactStatus::Refuted) => FactStatus::Refuted,
                    _ => FactStatus::Unknown,
                }
            }
        }
    }

    /// Re-decides every fact whose atoms are all realized.
    pub fn verify_facts(&mut self, cfg: &WitnessConfig) {
        let statuses: Vec<Option<FactStatus>> = self
            .facts
            .iter()
            .map(|f| {
                let words = fact_words(&f.kind);
                let realized = words.iter().all(|w| self.ground(w).is_some());
                realized.then(|| self.decide(&f.kind, cfg))
            })
            .collect();
        for (f, s) in self.facts.iter_mut().zip(statuses) {
            if let Some(s) = s {
                f.status = s;
            }
        }
    }
}

fn fact_words(k: &FactKind) -> Vec<&Word> {
    match k {
        FactKind::Commute { u, t } => vec![u, t],
        FactKind::IdentityEq { lhs, rhs } => vec![lhs, rhs],
        FactKind::NonIdentity { u } => vec![u],
        FactKind::NotInSet { u, v } => vec![u, v],
    }
}

/// The word `c^d c^(da) ... c^(da^5)`.
pub fn conjugate_product(a: &Word, c: &Word, d: &Word) -> Word {
    (0..6).fold(Word::identity(), |acc, k| acc.mul(&c.conj(&d.mul(&a.pow(k)))))
}

/// Atom names of the four roles in the key inequality lemma.
#[derive(Debug, Clone)]
pub struct LemmaAtoms {
    pub a: Word,
    pub b: Word,
    pub c: Word,
    pub d: Word,
}

impl LemmaAtoms {
    pub fn named(a: &str, b: &str, c: &str, d: &str) -> Self {
        LemmaAtoms { a: Word::atom(a), b: Word::atom(b), c: Word::atom(c), d: Word::atom(d) }
    }

    pub fn product(&self) -> Word {
        conjugate_product(&self.a, &self.c, &self.d)
    }
}

/// Fact ids that one instance of the lemma cites.
#[derive(Debug, Clone)]
pub struct LemmaFacts {
    pub commute_ab: String,
    pub commute_bc: String,
    pub commute_bd: String,
    pub conj_c: String,
    pub conj_d: String,
    pub nonid_c: String,
}

fn lemma_fact_kinds(at: &LemmaAtoms) -> [FactKind; 6] {
    let a3 = at.a.pow(3);
    [
        FactKind::Commute { u: at.a.clone(), t: at.b.clone() },
        FactKind::Commute { u: at.b.clone(), t: at.c.clone() },
        FactKind::Commute { u: at.b.clone(), t: at.d.clone() },
        FactKind::IdentityEq { lhs: at.c.conj(&a3), rhs: at.c.inverse() },
        FactKind::IdentityEq { lhs: at.d.conj(&a3), rhs: at.d.inverse() },
        FactKind::NonIdentity { u: at.c.clone() },
    ]
}

/// Abstract atoms `a, b, c, d` under the lemma's hypotheses.
pub fn lemma_table() -> (AtomTable, LemmaAtoms, LemmaFacts) {
    let at = LemmaAtoms::named("a", "b", "c", "d");
    let mut t = AtomTable::new();
    for n in ["a", "b", "c", "d"] {
        t.add_atom(n, Realization::Abstract);
    }
    let ids = ["H1", "H2", "H3", "H4", "H5", "H7c"];
    for (id, kind) in ids.iter().zip(lemma_fact_kinds(&at)) {
        t.add_fact(id, kind, "hypothesis", FactStatus::Assumed);
    }
    for (id, n) in [("H7a", "a"), ("H7b", "b"), ("H7d", "d")] {
        t.add_fact(id, FactKind::NonIdentity { u: Word::atom(n) }, "hypothesis", FactStatus::Assumed);
    }
    let facts = LemmaFacts {
        commute_ab: "H1".into(),
        commute_bc: "H2".into(),
        commute_bd: "H3".into(),
        conj_c: "H4".into(),
        conj_d: "H5".into(),
        nonid_c: "H7c".into(),
    };
    (t, at, facts)
}

pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const GAMMA: &str = "gamma";
pub const DELTA: &str = "delta";
pub const GAMMA_ETA: &str = "gamma_eta";
pub const DELTA_ETA: &str = "delta_eta";

pub fn primary_atoms() -> LemmaAtoms {
    LemmaAtoms::named(ALPHA, BETA, GAMMA, DELTA)
}

pub fn mirrored_atoms() -> LemmaAtoms {
    LemmaAtoms::named(BETA, ALPHA, GAMMA_ETA, DELTA_ETA)
}

pub fn primary_facts() -> LemmaFacts {
    LemmaFacts {
        commute_ab: "F1".into(),
        commute_bc: "F2".into(),
        commute_bd: "F3".into(),
        conj_c: "F4".into(),
        conj_d: "F5".into(),
        nonid_c: "F7.gamma".into(),
    }
}

pub fn mirrored_facts() -> LemmaFacts {
    LemmaFacts {
        commute_ab: "M1".into(),
        commute_bc: "M2".into(),
        commute_bd: "M3".into(),
        conj_c: "M4".into(),
        conj_d: "M5".into(),
        nonid_c: "M7.gamma_eta".into(),
    }
}

/// The fact base for `H`: atoms realized by the six generators, every fact
/// decided by exact computation, and the two relation reports it rests on.
#[derive(Debug, Clone)]
pub struct TheoremBase {
    pub table: AtomTable,
    pub relations: RelationReport,
    pub mirrored: RelationReport,
}

impl TheoremBase {
    pub fn all_verified(&self) -> bool {
        self.relations.all_hold()
            && self.mirrored.all_hold()
            && self.table.facts().iter().all(|f| f.status == FactStatus::Verified)
    }
}

pub fn theorem_table() -> TheoremBase {
    theorem_table_for(&Generators::standard(), &WitnessConfig::default())
}

pub fn theorem_table_for(gens: &Generators, cfg: &WitnessConfig) -> TheoremBase {
    let relations = verify_relations_for(gens);
    let mirrored = crate::plane::verify_mirrored_relations_for(gens, cfg);

    let mut t = AtomTable::new();
    for (name, g) in [
        (ALPHA, HGen::Alpha),
        (BETA, HGen::Beta),
        (GAMMA, HGen::Gamma),
        (DELTA, HGen::Delta),
        (GAMMA_ETA, HGen::GammaEta),
        (DELTA_ETA, HGen::DeltaEta),
    ] {
        t.add_atom(name, Realization::Plane(g.word_with(gens)));
    }

    let p = primary_atoms();
    let m = mirrored_atoms();
    for (ids, just, at, tail) in [
        (["F1", "F2", "F3", "F4", "F5"], ["F1", "F2", "F3", "F4", "F5"], &p, "F6"),
        (["M1", "M2", "M3", "M4", "M5"], ["M1", "M2", "M3", "M4", "M5"], &m, "M6"),
    ] {
        let kinds = lemma_fact_kinds(at);
        for ((id, j), kind) in ids.iter().zip(just).zip(kinds.into_iter().take(5)) {
            t.add_fact(id, kind, j, FactStatus::Unknown);
        }
        let rhs = at.b.pow(-36);
        t.add_fact(tail, FactKind::IdentityEq { lhs: at.product(), rhs }, tail, FactStatus::Unknown);
    }
    for n in [ALPHA, BETA, GAMMA, DELTA] {
        t.add_fact(&format!("F7.{n}"), FactKind::NonIdentity { u: Word::atom(n) }, "F7", FactStatus::Unknown);
    }
    for n in [GAMMA_ETA, DELTA_ETA] {
        t.add_fact(&format!("M7.{n}"), FactKind::NonIdentity { u: Word::atom(n) }, "M7", FactStatus::Unknown);
    }
    t.add_fact("F8", FactKind::NotInSet { u: Word::atom(ALPHA), v: Word::atom(BETA) }, "F8", FactStatus::Unknown);
    t.verify_facts(cfg);
    TheoremBase { table: t, relations, mirrored }
}
