//! Single-token mutations of derivations, used to test that the checker
//! rejects broken proofs at the right place.

use std::fmt;

use super::check::{check_derivation, Verdict};
use super::derivation::{Block, Derivation, Judgment, Rule, Split, Step};
use super::facts::AtomTable;
use super::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    FlipDirection,
    Exponent,
    DropFact,
    DropBranch,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationKind::FlipDirection => "flip",
            MutationKind::Exponent => "exponent",
            MutationKind::DropFact => "drop-fact",
            MutationKind::DropBranch => "drop-branch",
        })
    }
}

/// One token changed in a derivation, located by step or split id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    Conclusion { step: String, judgment: Judgment },
    Argument { step: String, index: usize, delta: i64 },
    DropFact { step: String, index: usize },
    DropBranch { split: String, branch: usize },
    FlipAssumption { split: String, branch: usize, index: usize },
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub kind: MutationKind,
    /// Step or split id where the checker must report the failure.
    pub target: String,
    pub description: String,
    pub edit: Edit,
}

impl Mutation {
    /// The mutated copy of `d`.
    pub fn apply(&self, d: &Derivation) -> Derivation {
        match &self.edit {
            Edit::Conclusion { step, judgment } => with_step(d, step, |s| s.conclusion = judgment.clone()),
            Edit::Argument { step, index, delta } => with_step(d, step, |s| {
                if let Some((_, v)) = int_args(&mut s.rule).into_iter().nth(*index) {
                    *v += delta;
                }
            }),
            Edit::DropFact { step, index } => with_step(d, step, |s| {
                s.facts.remove(*index);
            }),
            Edit::DropBranch { split, branch } => with_split(d, split, |x| {
                x.branches.remove(*branch);
            }),
            Edit::FlipAssumption { split, branch, index } => with_split(d, split, |x| {
                let a = &mut x.branches[*branch].assume[*index];
                if let Judgment::Less { lhs, rhs } = &a.judgment {
                    a.judgment = Judgment::less(rhs.clone(), lhs.clone());
                }
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MutationOutcome {
    pub kind: MutationKind,
    pub target: String,
    pub description: String,
    pub verdict: Verdict,
}

impl MutationOutcome {
    /// Rejected, and at the mutated location.
    pub fn caught(&self) -> bool {
        matches!(&self.verdict, Verdict::Invalid { at, .. } if *at == self.target)
    }
}

impl fmt::Display for MutationOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Valid => write!(f, "[{}] {}: ACCEPTED", self.kind, self.description),
            Verdict::Invalid { at, reason } => write!(f, "[{}] {}: rejected at {at}: {reason}", self.kind, self.description),
        }
    }
}

fn find_step<'a>(b: &'a mut Block, id: &str) -> Option<&'a mut Step> {
    if let Some(i) = b.steps.iter().position(|s| s.id == id) {
        return b.steps.get_mut(i);
    }
    let sp = b.split.as_deref_mut()?;
    sp.branches.iter_mut().find_map(|br| find_step(&mut br.body, id))
}

fn find_split<'a>(b: &'a mut Block, id: &str) -> Option<&'a mut Split> {
    let sp = b.split.as_deref_mut()?;
    if sp.id == id {
        return Some(sp);
    }
    sp.branches.iter_mut().find_map(|br| find_split(&mut br.body, id))
}

fn bump(w: &Word, syllable: usize, delta: i64) -> Word {
    Word::from_syllables(
        w.syllables().iter().enumerate().map(|(i, (a, e))| (a.clone(), if i == syllable { e + delta } else { *e })),
    )
}

fn int_args(rule: &mut Rule) -> Vec<(&'static str, &mut i64)> {
    match rule {
        Rule::Invert { m, .. } => vec![("m", m)],
        Rule::Product { m, n, .. } => vec![("m", m), ("n", n)],
        Rule::ConjugateWindow { m, n1, n2, .. } => vec![("m", m), ("n1", n1), ("n2", n2)],
        Rule::FlipBound { n1, n2, .. } => vec![("n1", n1), ("n2", n2)],
        _ => vec![],
    }
}

fn with_step(d: &Derivation, id: &str, f: impl FnOnce(&mut Step)) -> Derivation {
    let mut out = d.clone();
    if let Some(s) = find_step(&mut out.root, id) {
        f(s);
    }
    out
}

fn with_split(d: &Derivation, id: &str, f: impl FnOnce(&mut Split)) -> Derivation {
    let mut out = d.clone();
    if let Some(s) = find_split(&mut out.root, id) {
        f(s);
    }
    out
}

/// Every single-token mutation of `d`, in checking order.
pub fn generate_mutations(d: &Derivation) -> Vec<Mutation> {
    let mut out = Vec::new();
    for s in d.steps() {
        let id = s.id.clone();
        if let Judgment::Less { lhs, rhs } = &s.conclusion {
            if lhs != rhs {
                let flipped = Judgment::less(rhs.clone(), lhs.clone());
                out.push(Mutation {
                    kind: MutationKind::FlipDirection,
                    target: id.clone(),
                    description: format!("{id}: `{}` -> `{flipped}`", s.conclusion),
                    edit: Edit::Conclusion { step: id.clone(), judgment: flipped },
                });
            }
            for (side, w) in [("lhs", lhs), ("rhs", rhs)] {
                for i in 0..w.syllables().len() {
                    for delta in [-1, 1] {
                        let nw = bump(w, i, delta);
                        let nj = if side == "lhs" {
                            Judgment::less(nw.clone(), rhs.clone())
                        } else {
                            Judgment::less(lhs.clone(), nw.clone())
                        };
                        out.push(Mutation {
                            kind: MutationKind::Exponent,
                            target: id.clone(),
                            description: format!("{id}: conclusion {side} `{w}` -> `{nw}`"),
                            edit: Edit::Conclusion { step: id.clone(), judgment: nj },
                        });
                    }
                }
            }
        }
        let mut probe = s.rule.clone();
        let names: Vec<&'static str> = int_args(&mut probe).into_iter().map(|(n, _)| n).collect();
        for (k, name) in names.into_iter().enumerate() {
            for delta in [-1i64, 1] {
                out.push(Mutation {
                    kind: MutationKind::Exponent,
                    target: id.clone(),
                    description: format!("{id}: {} argument {name} {delta:+}", s.rule.name()),
                    edit: Edit::Argument { step: id.clone(), index: k, delta },
                });
            }
        }
        for (k, f) in s.facts.iter().enumerate() {
            out.push(Mutation {
                kind: MutationKind::DropFact,
                target: id.clone(),
                description: format!("{id}: drop citation {f}"),
                edit: Edit::DropFact { step: id.clone(), index: k },
            });
        }
    }
    for sp in d.splits() {
        for (k, br) in sp.branches.iter().enumerate() {
            out.push(Mutation {
                kind: MutationKind::DropBranch,
                target: sp.id.clone(),
                description: format!("{}: drop branch {}", sp.id, br.id),
                edit: Edit::DropBranch { split: sp.id.clone(), branch: k },
            });
            for (j, a) in br.assume.iter().enumerate() {
                if matches!(a.judgment, Judgment::Less { .. }) {
                    out.push(Mutation {
                        kind: MutationKind::FlipDirection,
                        target: sp.id.clone(),
                        description: format!("{}: flip assumption {} `{}`", sp.id, a.id, a.judgment),
                        edit: Edit::FlipAssumption { split: sp.id.clone(), branch: k, index: j },
                    });
                }
            }
        }
    }
    out
}

/// Up to `per_kind` mutations of each kind, spread evenly over the full list.
pub fn sample_mutations(all: Vec<Mutation>, per_kind: usize) -> Vec<Mutation> {
    let mut by_kind: std::collections::BTreeMap<MutationKind, Vec<Mutation>> = Default::default();
    for m in all {
        by_kind.entry(m.kind).or_default().push(m);
    }
    let mut out = Vec::new();
    for (_, ms) in by_kind {
        if ms.len() <= per_kind {
            out.extend(ms);
            continue;
        }
        let len = ms.len();
        let picks: std::collections::BTreeSet<usize> = (0..per_kind).map(|i| i * len / per_kind).collect();
        out.extend(ms.into_iter().enumerate().filter(|(i, _)| picks.contains(i)).map(|(_, m)| m));
    }
    out
}

pub fn run_mutations(d: &Derivation, muts: &[Mutation], table: &AtomTable) -> Vec<MutationOutcome> {
    muts.iter()
        .map(|m| MutationOutcome {
            kind: m.kind,
            target: m.target.clone(),
            description: m.description.clone(),
            verdict: check_derivation(&m.apply(d), table),
        })
        .collect()
}
