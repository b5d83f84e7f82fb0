//! The derivation checker.
//!
//! Every rule instance is matched syntactically: the checker rebuilds the
//! premises a rule expects from the step's arguments, compares them with the
//! cited judgments, discharges side conditions against the cited facts only,
//! and compares the recomputed conclusion with the claimed one.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::derivation::{Block, Bound, Derivation, Goal, Hypothesis, Judgment, Rule, Side, Split, SplitRule, Step};
use super::facts::{AtomTable, Fact, FactKind};
use super::word::Word;

/// Widest window a split may open.
pub const MAX_WINDOW: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("premise {0:?} is not in scope")]
    UnknownPremise(String),
    #[error("expected {expected} premise(s), found {found}")]
    PremiseCount { expected: usize, found: usize },
    #[error("premise {index} should be `{expected}` but is `{found}`")]
    PremiseMismatch { index: usize, expected: String, found: String },
    #[error("fact {0:?} is not in the fact base")]
    UnknownFact(String),
    #[error("fact {0:?} is not verified")]
    UnverifiedFact(String),
    #[error("cited facts do not show that `{u}` commutes with `{t}` (missing {missing})")]
    MissingCommute { u: String, t: String, missing: String },
    #[error("no cited fact gives the identity `{0}`")]
    MissingIdentity(String),
    #[error("no cited fact separates `{0}` from `{1}`")]
    MissingSeparation(String, String),
    #[error("claimed conclusion `{found}` does not follow; rule gives `{expected}`")]
    ConclusionMismatch { expected: String, found: String },
    #[error("malformed rule instance: {0}")]
    Shape(String),
    #[error("hypothesis {0:?} not found")]
    UnknownHypothesis(String),
    #[error("split branches do not match: expected {expected}, found {found}")]
    BranchMismatch { expected: String, found: String },
    #[error("branch is not closed: {0}")]
    OpenBranch(String),
}

impl CheckError {
    /// Failures caused by the fact base rather than the derivation itself.
    pub fn is_fact_problem(&self) -> bool {
        matches!(self, CheckError::UnknownFact(_) | CheckError::UnverifiedFact(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { at: String, reason: CheckError },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn less(l: Word, r: Word) -> Judgment {
    Judgment::less(l, r)
}

fn show(ws: &[Judgment]) -> String {
    ws.iter().map(|j| format!("`{j}`")).collect::<Vec<_>>().join(" or ")
}

fn expect_premises(premises: &[&Judgment], expected: &[Judgment]) -> Result<(), CheckError> {
    if premises.len() != expected.len() {
        return Err(CheckError::PremiseCount { expected: expected.len(), found: premises.len() });
    }
    for (i, (p, e)) in premises.iter().zip(expected).enumerate() {
        if *p != e {
            return Err(CheckError::PremiseMismatch { index: i, expected: e.to_string(), found: p.to_string() });
        }
    }
    Ok(())
}

fn is_atom_pair(f: &Fact, x: &str, y: &str) -> bool {
    let single = |w: &Word| -> Option<String> {
        match w.syllables() {
            [(a, 1)] => Some(a.clone()),
            _ => None,
        }
    };
    match &f.kind {
        FactKind::Commute { u, t } => match (single(u), single(t)) {
            (Some(p), Some(q)) => (p == x && q == y) || (p == y && q == x),
            _ => false,
        },
        _ => false,
    }
}

/// `u` commutes with `t` if every atom of `u` commutes with every atom of
/// `t` by a cited atom-level fact, or a cited fact states it outright.
/// This is the closure of `Commute(u,t), Commute(v,t) ⊢ Commute(uv,t), Commute(u⁻¹,t)`.
pub fn commute_holds(u: &Word, t: &Word, facts: &[&Fact]) -> Result<(), CheckError> {
    let direct = facts.iter().any(|f| match &f.kind {
        FactKind::Commute { u: p, t: q } => (p == u && q == t) || (p == t && q == u),
        _ => false,
    });
    if direct {
        return Ok(());
    }
    for x in u.atoms() {
        for y in t.atoms() {
            if x != y && !facts.iter().any(|f| is_atom_pair(f, x, y)) {
                return Err(CheckError::MissingCommute {
                    u: u.to_string(),
                    t: t.to_string(),
                    missing: format!("{x} <-> {y}"),
                });
            }
        }
    }
    Ok(())
}

fn in_pm(w: &Word, x: &Word) -> bool {
    w == x || *w == x.inverse()
}

/// Every conclusion `rule` licenses from `premises`; the claimed conclusion
/// must be one of them.
pub fn apply_rule(
    rule: &Rule,
    premises: &[&Judgment],
    facts: &[&Fact],
    hypotheses: &[Hypothesis],
) -> Result<Vec<Judgment>, CheckError> {
    match rule {
        Rule::Invert { u, t, m, bound } => {
            commute_holds(u, t, facts)?;
            let tm = t.pow(*m);
            let (expected, out) = match bound {
                Bound::Upper => (less(u.clone(), tm), less(t.pow(-m), u.inverse())),
                Bound::Lower => (less(tm, u.clone()), less(u.inverse(), t.pow(-m))),
            };
            expect_premises(premises, &[expected])?;
            Ok(vec![out])
        }
        Rule::Product { u, v, t, m, n, bound } => {
            commute_holds(u, t, facts)?;
            commute_holds(v, t, facts)?;
            let (e1, e2, out) = match bound {
                Bound::Upper => (
                    less(u.clone(), t.pow(*m)),
                    less(v.clone(), t.pow(*n)),
                    less(u.mul(v), t.pow(m + n)),
                ),
                Bound::Lower => (
                    less(t.pow(*m), u.clone()),
                    less(t.pow(*n), v.clone()),
                    less(t.pow(m + n), u.mul(v)),
                ),
            };
            expect_premises(premises, &[e1, e2])?;
            Ok(vec![out])
        }
        Rule::ConjugateWindow { u, v, t, m, n1, n2 } => {
            if n1 >= n2 {
                return Err(CheckError::Shape(format!("window needs n1 < n2, got {n1} >= {n2}")));
            }
            commute_holds(u, t, facts)?;
            commute_holds(v, t, facts)?;
            expect_premises(
                premises,
                &[
                    less(t.pow(m - 1), u.clone()),
                    less(u.clone(), t.pow(*m)),
                    less(t.pow(*n1), v.clone()),
                    less(v.clone(), t.pow(*n2)),
                ],
            )?;
            let uv = u.conj(v);
            Ok(vec![less(t.pow(m - 2), uv.clone()), less(uv, t.pow(m + 1))])
        }
        Rule::FlipBound { u, v, t, n1, n2 } => {
            if n1 >= n2 {
                return Err(CheckError::Shape(format!("window needs n1 < n2, got {n1} >= {n2}")));
            }
            let uv = u.conj(v);
            let ui = u.inverse();
            let has_identity = facts.iter().any(|f| match &f.kind {
                FactKind::IdentityEq { lhs, rhs } => (*lhs == uv && *rhs == ui) || (*lhs == ui && *rhs == uv),
                _ => false,
            });
            if !has_identity {
                return Err(CheckError::MissingIdentity(format!("{uv} = {ui}")));
            }
            commute_holds(u, t, facts)?;
            commute_holds(v, t, facts)?;
            expect_premises(
                premises,
                &[less(t.pow(*n1), v.clone()), less(v.clone(), t.pow(*n2)), less(Word::identity(), t.clone())],
            )?;
            Ok(vec![less(t.inverse(), u.clone()), less(u.clone(), t.clone())])
        }
        Rule::Transitivity => match premises {
            [Judgment::Less { lhs: a, rhs: b }, Judgment::Less { lhs: c, rhs: d }] => {
                if b != c {
                    return Err(CheckError::PremiseMismatch {
                        index: 1,
                        expected: format!("{b} < _"),
                        found: format!("{c} < {d}"),
                    });
                }
                Ok(vec![less(a.clone(), d.clone())])
            }
            [_, _] => Err(CheckError::Shape("transitivity needs two strict inequalities".into())),
            _ => Err(CheckError::PremiseCount { expected: 2, found: premises.len() }),
        },
        Rule::LeftMultiply { w } => match premises {
            [Judgment::Less { lhs, rhs }] => Ok(vec![less(w.mul(lhs), w.mul(rhs))]),
            [_] => Err(CheckError::Shape("left multiplication needs a strict inequality".into())),
            _ => Err(CheckError::PremiseCount { expected: 1, found: premises.len() }),
        },
        Rule::Substitute { side, at, reverse } => {
            let (pattern, replacement) = match facts {
                [f] => match &f.kind {
                    FactKind::IdentityEq { lhs, rhs } if *reverse => (rhs, lhs),
                    FactKind::IdentityEq { lhs, rhs } => (lhs, rhs),
                    _ => return Err(CheckError::Shape("substitution cites a non-identity fact".into())),
                },
                _ => return Err(CheckError::Shape(format!("substitution cites {} facts, needs 1", facts.len()))),
            };
            let (l, r, is_less) = match premises {
                [Judgment::Less { lhs, rhs }] => (lhs, rhs, true),
                [Judgment::Equal { lhs, rhs }] => (lhs, rhs, false),
                [Judgment::Contradiction] => return Err(CheckError::Shape("cannot rewrite a contradiction".into())),
                _ => return Err(CheckError::PremiseCount { expected: 1, found: premises.len() }),
            };
            let target = if *side == Side::Left { l } else { r };
            let rewritten = target.replace_at(*at, pattern, replacement).ok_or_else(|| {
                CheckError::Shape(format!("`{pattern}` does not occur at letter {at} of `{target}`"))
            })?;
            let (nl, nr) = if *side == Side::Left { (rewritten, r.clone()) } else { (l.clone(), rewritten) };
            Ok(vec![if is_less { less(nl, nr) } else { Judgment::equal(nl, nr) }])
        }
        Rule::Absurd => match premises {
            [Judgment::Less { lhs, rhs }] if lhs == rhs => Ok(vec![Judgment::Contradiction]),
            [j] => Err(CheckError::Shape(format!("`{j}` is not of the form u < u"))),
            _ => Err(CheckError::PremiseCount { expected: 1, found: premises.len() }),
        },
        Rule::Distinct => match premises {
            [Judgment::Equal { lhs, rhs }] => {
                let separated = facts.iter().any(|f| match &f.kind {
                    FactKind::NonIdentity { u } => in_pm(&lhs.mul(&rhs.inverse()), u),
                    FactKind::NotInSet { u, v } => (in_pm(lhs, u) && in_pm(rhs, v)) || (in_pm(rhs, u) && in_pm(lhs, v)),
                    _ => false,
                });
                if separated {
                    Ok(vec![Judgment::Contradiction])
                } else {
                    Err(CheckError::MissingSeparation(lhs.to_string(), rhs.to_string()))
                }
            }
            [j] => Err(CheckError::Shape(format!("`{j}` is not an equality"))),
            _ => Err(CheckError::PremiseCount { expected: 1, found: premises.len() }),
        },
        Rule::AbsUnpack { hypothesis } => {
            let h = hypotheses
                .iter()
                .find(|h| &h.id == hypothesis)
                .ok_or_else(|| CheckError::UnknownHypothesis(hypothesis.clone()))?;
            match premises {
                [Judgment::Less { lhs, rhs: s }] if lhs.is_identity() && in_pm(s, &h.rhs) => {
                    Ok(vec![less(h.lhs.clone(), s.clone()), less(h.lhs.inverse(), s.clone())])
                }
                [j] => Err(CheckError::PremiseMismatch {
                    index: 0,
                    expected: format!("1 < ({})^±1", h.rhs),
                    found: j.to_string(),
                }),
                _ => Err(CheckError::PremiseCount { expected: 1, found: premises.len() }),
            }
        }
    }
}

/// Branch assumptions a split must open, in order.
pub fn split_branches(rule: &SplitRule, premises: &[&Judgment]) -> Result<Vec<Vec<Judgment>>, CheckError> {
    match rule {
        SplitRule::Trichotomy { lhs, rhs } => {
            if !premises.is_empty() {
                return Err(CheckError::PremiseCount { expected: 0, found: premises.len() });
            }
            Ok(vec![
                vec![less(lhs.clone(), rhs.clone())],
                vec![Judgment::equal(lhs.clone(), rhs.clone())],
                vec![less(rhs.clone(), lhs.clone())],
            ])
        }
        SplitRule::Window { v, t, n1, n2 } => {
            if n1 >= n2 {
                return Err(CheckError::Shape(format!("window needs n1 < n2, got {n1} >= {n2}")));
            }
            if n2 - n1 > MAX_WINDOW {
                return Err(CheckError::Shape(format!("window width {} exceeds {MAX_WINDOW}", n2 - n1)));
            }
            expect_premises(premises, &[less(t.pow(*n1), v.clone()), less(v.clone(), t.pow(*n2))])?;
            let mut out = Vec::new();
            for k in *n1..*n2 {
                if k > *n1 {
                    out.push(vec![Judgment::equal(v.clone(), t.pow(k))]);
                }
                out.push(vec![less(t.pow(k), v.clone()), less(v.clone(), t.pow(k + 1))]);
            }
            Ok(out)
        }
    }
}

struct Checker<'a> {
    table: &'a AtomTable,
    hypotheses: &'a [Hypothesis],
    goal: &'a Goal,
    seen: HashSet<String>,
}

type Scope = HashMap<String, Judgment>;

fn fail<T>(at: &str, reason: CheckError) -> Result<T, (String, CheckError)> {
    Err((at.to_string(), reason))
}

impl<'a> Checker<'a> {
    fn claim_id(&mut self, id: &str) -> Result<(), (String, CheckError)> {
        if !self.seen.insert(id.to_string()) {
            return fail(id, CheckError::DuplicateId(id.to_string()));
        }
        Ok(())
    }

    fn lookup<'s>(&self, scope: &'s Scope, at: &str, ids: &[String]) -> Result<Vec<&'s Judgment>, (String, CheckError)> {
        ids.iter()
            .map(|p| scope.get(p).ok_or_else(|| (at.to_string(), CheckError::UnknownPremise(p.clone()))))
            .collect()
    }

    fn cite(&self, at: &str, ids: &[String]) -> Result<Vec<&'a Fact>, (String, CheckError)> {
        ids.iter()
            .map(|id| {
                let f = self.table.fact(id).ok_or_else(|| (at.to_string(), CheckError::UnknownFact(id.clone())))?;
                if !f.status.citable() {
                    return fail(at, CheckError::UnverifiedFact(id.clone()));
                }
                Ok(f)
            })
            .collect()
    }

    fn step(&mut self, scope: &mut Scope, s: &Step) -> Result<(), (String, CheckError)> {
        self.claim_id(&s.id)?;
        let premises = self.lookup(scope, &s.id, &s.premises)?;
        let facts = self.cite(&s.id, &s.facts)?;
        let allowed = apply_rule(&s.rule, &premises, &facts, self.hypotheses).map_err(|e| (s.id.clone(), e))?;
        if !allowed.contains(&s.conclusion) {
            return fail(&s.id, CheckError::ConclusionMismatch { expected: show(&allowed), found: s.conclusion.to_string() });
        }
        scope.insert(s.id.clone(), s.conclusion.clone());
        Ok(())
    }

    fn split(&mut self, scope: &Scope, sp: &Split) -> Result<(), (String, CheckError)> {
        self.claim_id(&sp.id)?;
        let premises = self.lookup(scope, &sp.id, &sp.premises)?;
        let expected = split_branches(&sp.rule, &premises).map_err(|e| (sp.id.clone(), e))?;
        let found: Vec<Vec<Judgment>> =
            sp.branches.iter().map(|b| b.assume.iter().map(|a| a.judgment.clone()).collect()).collect();
        if expected != found {
            let render = |bs: &[Vec<Judgment>]| {
                bs.iter()
                    .map(|b| b.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(", "))
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            return fail(&sp.id, CheckError::BranchMismatch { expected: render(&expected), found: render(&found) });
        }
        for br in &sp.branches {
            self.claim_id(&br.id)?;
            let mut inner = scope.clone();
            for a in &br.assume {
                self.claim_id(&a.id)?;
                inner.insert(a.id.clone(), a.judgment.clone());
            }
            self.block(inner, &br.body, &br.id)?;
        }
        Ok(())
    }

    fn block(&mut self, mut scope: Scope, b: &Block, label: &str) -> Result<(), (String, CheckError)> {
        for s in &b.steps {
            self.step(&mut scope, s)?;
        }
        match &b.split {
            Some(sp) => self.split(&scope, sp),
            None => self.leaf(&scope, label),
        }
    }

    fn leaf(&self, scope: &Scope, label: &str) -> Result<(), (String, CheckError)> {
        if scope.values().any(|j| *j == Judgment::Contradiction) {
            return Ok(());
        }
        match self.goal {
            Goal::Contradiction => fail(label, CheckError::OpenBranch("no contradiction derived".into())),
            Goal::AbsLess { lhs, rhs } => {
                let met = [rhs.clone(), rhs.inverse()].iter().any(|s| {
                    let a = less(lhs.clone(), s.clone());
                    let b = less(lhs.inverse(), s.clone());
                    scope.values().any(|j| *j == a) && scope.values().any(|j| *j == b)
                });
                if met {
                    Ok(())
                } else {
                    fail(label, CheckError::OpenBranch(format!("|{lhs}| < |{rhs}| not established")))
                }
            }
        }
    }
}

/// Checks every step and split in depth-first order and reports the first
/// failure. `Valid` iff every branch reaches the derivation's goal.
pub fn check_derivation(d: &Derivation, table: &AtomTable) -> Verdict {
    let mut c = Checker { table, hypotheses: &d.hypotheses, goal: &d.goal, seen: HashSet::new() };
    let run = |c: &mut Checker| -> Result<(), (String, CheckError)> {
        for h in &d.hypotheses {
            c.claim_id(&h.id)?;
        }
        c.block(Scope::new(), &d.root, "root")
    };
    match run(&mut c) {
        Ok(()) => Verdict::Valid,
        Err((at, reason)) => Verdict::Invalid { at, reason },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderlogic::facts::FactStatus;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn lt(a: &str, b: &str) -> Judgment {
        less(w(a), w(b))
    }

    fn fact(id: &str, kind: FactKind) -> Fact {
        Fact { id: id.into(), kind, justification: "test".into(), status: FactStatus::Assumed }
    }

    fn commute(id: &str, u: &str, t: &str) -> Fact {
        fact(id, FactKind::Commute { u: w(u), t: w(t) })
    }

    #[test]
    fn r1_examples() {
        let f2 = commute("F2", "b", "c");
        let r = Rule::Invert { u: w("c"), t: w("b"), m: 2, bound: Bound::Upper };
        assert_eq!(apply_rule(&r, &[&lt("c", "b^2")], &[&f2], &[]), Ok(vec![lt("b^-2", "c^-1")]));
        let r = Rule::Invert { u: w("1"), t: w("b"), m: 1, bound: Bound::Upper };
        assert_eq!(apply_rule(&r, &[&lt("1", "b")], &[], &[]), Ok(vec![lt("b^-1", "1")]));
        let r = Rule::Invert { u: w("c"), t: w("a"), m: 2, bound: Bound::Upper };
        assert!(matches!(
            apply_rule(&r, &[&lt("c", "a^2")], &[], &[]),
            Err(CheckError::MissingCommute { .. })
        ));
        let r = Rule::Invert { u: w("c"), t: w("b"), m: 2, bound: Bound::Lower };
        assert_eq!(apply_rule(&r, &[&lt("b^2", "c")], &[&f2], &[]), Ok(vec![lt("c^-1", "b^-2")]));
    }

    #[test]
    fn r2_examples() {
        let fs = [commute("F2", "b", "c"), commute("F3", "b", "d"), commute("F1", "a", "b")];
        let fr: Vec<&Fact> = fs.iter().collect();
        let r = Rule::Product { u: w("c"), v: w("d"), t: w("b"), m: 1, n: 1, bound: Bound::Upper };
        assert_eq!(apply_rule(&r, &[&lt("c", "b"), &lt("d", "b")], &fr, &[]), Ok(vec![lt("c d", "b^2")]));
        let r = Rule::Product { u: w("a"), v: w("a^3"), t: w("b"), m: -1, n: -3, bound: Bound::Lower };
        assert_eq!(
            apply_rule(&r, &[&lt("b^-1", "a"), &lt("b^-3", "a^3")], &fr, &[]),
            Ok(vec![lt("b^-4", "a^4")])
        );
        // 1 < b doubled repeatedly.
        let mut j = lt("1", "b");
        let mut m = 1;
        for _ in 0..4 {
            let r = Rule::Product { u: w("1"), v: w("1"), t: w("b"), m, n: m, bound: Bound::Upper };
            j = apply_rule(&r, &[&j, &j], &[], &[]).unwrap().remove(0);
            m *= 2;
        }
        assert_eq!(j, lt("1", "b^16"));
        let r = Rule::Product { u: w("c"), v: w("d"), t: w("b"), m: 1, n: 1, bound: Bound::Upper };
        assert!(apply_rule(&r, &[&lt("c", "b"), &lt("d", "b")], &fr[..1], &[]).is_err());
    }

    #[test]
    fn r3_examples() {
        let fs = [commute("F1", "a", "b"), commute("F2", "b", "c"), commute("F3", "b", "d")];
        let fr: Vec<&Fact> = fs.iter().collect();
        let r = Rule::ConjugateWindow { u: w("c"), v: w("d a^2"), t: w("b"), m: 1, n1: -2, n2: 3 };
        let out = apply_rule(&r, &[&lt("1", "c"), &lt("c", "b"), &lt("b^-2", "d a^2"), &lt("d a^2", "b^3")], &fr, &[]);
        assert_eq!(out, Ok(vec![lt("b^-1", "a^-2 d^-1 c d a^2"), lt("a^-2 d^-1 c d a^2", "b^2")]));
        // Conjugation by the identity still only gives the weakened window.
        let r = Rule::ConjugateWindow { u: w("c"), v: w("1"), t: w("b"), m: 1, n1: -1, n2: 1 };
        let out = apply_rule(&r, &[&lt("1", "c"), &lt("c", "b"), &lt("b^-1", "1"), &lt("1", "b")], &fr, &[]);
        assert_eq!(out.unwrap()[0], lt("b^-1", "c"));
        // Width-2 window for u is rejected.
        let r = Rule::ConjugateWindow { u: w("c"), v: w("d"), t: w("b"), m: 1, n1: -1, n2: 1 };
        let out = apply_rule(&r, &[&lt("b^-1", "c"), &lt("c", "b"), &lt("b^-1", "d"), &lt("d", "b")], &fr, &[]);
        assert!(matches!(out, Err(CheckError::PremiseMismatch { index: 0, .. })));
    }

    #[test]
    fn r4_examples() {
        let f4 = fact("F4", FactKind::IdentityEq { lhs: w("c").conj(&w("a^3")), rhs: w("c^-1") });
        let fs = [f4, commute("F1", "a", "b"), commute("F2", "b", "c")];
        let fr: Vec<&Fact> = fs.iter().collect();
        let r = Rule::FlipBound { u: w("c"), v: w("a^3"), t: w("b"), n1: -3, n2: 3 };
        let p = [lt("b^-3", "a^3"), lt("a^3", "b^3"), lt("1", "b")];
        let pr: Vec<&Judgment> = p.iter().collect();
        assert_eq!(apply_rule(&r, &pr, &fr, &[]), Ok(vec![lt("b^-1", "c"), lt("c", "b")]));
        // Same step with t = a: c does not commute with a.
        let r = Rule::FlipBound { u: w("c"), v: w("a^3"), t: w("a"), n1: -3, n2: 3 };
        let p = [lt("a^-3", "a^3"), lt("a^3", "a^3"), lt("1", "a")];
        let pr: Vec<&Judgment> = p.iter().collect();
        assert!(matches!(apply_rule(&r, &pr, &fr, &[]), Err(CheckError::MissingCommute { .. })));
        // Without the identity fact.
        let r = Rule::FlipBound { u: w("c"), v: w("a^3"), t: w("b"), n1: -3, n2: 3 };
        let p = [lt("b^-3", "a^3"), lt("a^3", "b^3"), lt("1", "b")];
        let pr: Vec<&Judgment> = p.iter().collect();
        assert!(matches!(apply_rule(&r, &pr, &fr[1..], &[]), Err(CheckError::MissingIdentity(_))));
    }

    #[test]
    fn structural_rules() {
        assert_eq!(apply_rule(&Rule::Transitivity, &[&lt("a", "b"), &lt("b", "c")], &[], &[]), Ok(vec![lt("a", "c")]));
        assert!(apply_rule(&Rule::Transitivity, &[&lt("a", "b"), &lt("c", "d")], &[], &[]).is_err());
        assert_eq!(
            apply_rule(&Rule::LeftMultiply { w: w("b^-1") }, &[&lt("b", "1")], &[], &[]),
            Ok(vec![lt("1", "b^-1")])
        );
        assert_eq!(apply_rule(&Rule::Absurd, &[&lt("b^2", "b^2")], &[], &[]), Ok(vec![Judgment::Contradiction]));
        assert!(apply_rule(&Rule::Absurd, &[&lt("b", "b^2")], &[], &[]).is_err());

        let f6 = fact("F6", FactKind::IdentityEq { lhs: w("x y"), rhs: w("b^-36") });
        let r = Rule::Substitute { side: Side::Right, at: 0, reverse: false };
        assert_eq!(apply_rule(&r, &[&lt("b^-12", "x y")], &[&f6], &[]), Ok(vec![lt("b^-12", "b^-36")]));
        let r = Rule::Substitute { side: Side::Left, at: 1, reverse: false };
        assert_eq!(apply_rule(&r, &[&lt("z x y", "1")], &[&f6], &[]), Ok(vec![lt("z b^-36", "1")]));
        assert!(apply_rule(&r, &[&lt("x y", "1")], &[&f6], &[]).is_err());
    }

    #[test]
    fn distinct_rule() {
        let f8 = fact("F8", FactKind::NotInSet { u: w("alpha"), v: w("beta") });
        let f7 = fact("F7", FactKind::NonIdentity { u: w("beta") });
        let eq = |a: &str, b: &str| Judgment::equal(w(a), w(b));
        for (a, b) in [("alpha", "beta"), ("alpha^-1", "beta"), ("beta^-1", "alpha^-1")] {
            assert_eq!(apply_rule(&Rule::Distinct, &[&eq(a, b)], &[&f8], &[]), Ok(vec![Judgment::Contradiction]));
        }
        assert_eq!(apply_rule(&Rule::Distinct, &[&eq("beta", "1")], &[&f7], &[]), Ok(vec![Judgment::Contradiction]));
        assert!(apply_rule(&Rule::Distinct, &[&eq("beta", "1")], &[&f8], &[]).is_err());
        assert!(apply_rule(&Rule::Distinct, &[&eq("alpha", "1")], &[&f7], &[]).is_err());
    }

    #[test]
    fn window_split_shapes() {
        let rule = SplitRule::Window { v: w("v"), t: w("b"), n1: -1, n2: 1 };
        let p = [lt("b^-1", "v"), lt("v", "b")];
        let pr: Vec<&Judgment> = p.iter().collect();
        let got = split_branches(&rule, &pr).unwrap();
        assert_eq!(
            got,
            vec![
                vec![lt("b^-1", "v"), lt("v", "1")],
                vec![Judgment::equal(w("v"), w("1"))],
                vec![lt("1", "v"), lt("v", "b")],
            ]
        );
        assert!(split_branches(&rule, &pr[..1]).is_err());
        let wide = SplitRule::Window { v: w("v"), t: w("b"), n1: 0, n2: MAX_WINDOW + 1 };
        let p = [lt("1", "v"), less(w("v"), w("b").pow(MAX_WINDOW + 1))];
        let pr: Vec<&Judgment> = p.iter().collect();
        assert!(matches!(split_branches(&wide, &pr), Err(CheckError::Shape(_))));
    }

    #[test]
    fn empty_derivation_claiming_contradiction_is_invalid() {
        let d = Derivation { name: "empty".into(), goal: Goal::Contradiction, hypotheses: vec![], root: Block::default() };
        assert!(matches!(
            check_derivation(&d, &AtomTable::new()),
            Verdict::Invalid { reason: CheckError::OpenBranch(_), .. }
        ));
    }
}
