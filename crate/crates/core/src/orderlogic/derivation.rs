//! Judgments, inference steps, and case-split trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;

/// A statement inside one branch of an assumed left-order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Judgment {
    Less { lhs: Word, rhs: Word },
    Equal { lhs: Word, rhs: Word },
    Contradiction,
}

impl Judgment {
    pub fn less(lhs: Word, rhs: Word) -> Self {
        Judgment::Less { lhs, rhs }
    }

    pub fn equal(lhs: Word, rhs: Word) -> Self {
        Judgment::Equal { lhs, rhs }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Less { lhs, rhs } => write!(f, "{lhs} < {rhs}"),
            Judgment::Equal { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Judgment::Contradiction => write!(f, "contradiction"),
        }
    }
}

/// Which side of `u` the power of `t` sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `u < t^m`
    Upper,
    /// `t^m < u`
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `u < tᵐ ⊢ t⁻ᵐ < u⁻¹` (and the mirrored form), given `ut = tu`.
    Invert { u: Word, t: Word, m: i64, bound: Bound },
    /// `u < tᵐ, v < tⁿ ⊢ uv < tᵐ⁺ⁿ` (and the mirrored form), given `ut = tu`, `vt = tv`.
    Product { u: Word, v: Word, t: Word, m: i64, n: i64, bound: Bound },
    /// `tᵐ⁻¹ < u < tᵐ, t^n1 < v < t^n2 ⊢ tᵐ⁻² < uᵛ < tᵐ⁺¹`.
    ConjugateWindow { u: Word, v: Word, t: Word, m: i64, n1: i64, n2: i64 },
    /// `uᵛ = u⁻¹, t^n1 < v < t^n2, 1 < t ⊢ t⁻¹ < u < t`.
    FlipBound { u: Word, v: Word, t: Word, n1: i64, n2: i64 },
    Transitivity,
    /// `u < v ⊢ wu < wv`.
    LeftMultiply { w: Word },
    /// Rewrites one occurrence of a cited identity inside a judgment.
    Substitute { side: Side, at: usize, reverse: bool },
    /// `u < u ⊢ ⊥`.
    Absurd,
    /// `u = v ⊢ ⊥` given a cited fact separating them.
    Distinct,
    /// `1 < s ⊢ x < s` or `x⁻¹ < s`, from a hypothesis `|x| < |y|` with `s ∈ {y, y⁻¹}`.
    AbsUnpack { hypothesis: String },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Invert { .. } => "R1 invert",
            Rule::Product { .. } => "R2 product",
            Rule::ConjugateWindow { .. } => "R3 conjugate-window",
            Rule::FlipBound { .. } => "R4 flip-bound",
            Rule::Transitivity => "transitivity",
            Rule::LeftMultiply { .. } => "left-multiply",
            Rule::Substitute { .. } => "substitute",
            Rule::Absurd => "absurd",
            Rule::Distinct => "distinct",
            Rule::AbsUnpack { .. } => "abs-unpack",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub id: String,
    #[serde(flatten)]
    pub rule: Rule,
    pub premises: Vec<String>,
    pub facts: Vec<String>,
    pub conclusion: Judgment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "split", rename_all = "snake_case")]
pub enum SplitRule {
    /// Branches `lhs < rhs`, `lhs = rhs`, `rhs < lhs`.
    Trichotomy { lhs: Word, rhs: Word },
    /// From `t^n1 < v < t^n2`: open windows `tᵏ < v < tᵏ⁺¹` for `n1 ≤ k < n2`,
    /// interleaved with the points `v = tᵏ` for `n1 < k < n2`.
    Window { v: Word, t: Word, n1: i64, n2: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub id: String,
    pub judgment: Judgment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub id: String,
    pub assume: Vec<Assumption>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub id: String,
    #[serde(flatten)]
    pub rule: SplitRule,
    pub premises: Vec<String>,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Block {
    pub steps: Vec<Step>,
    pub split: Option<Box<Split>>,
}

/// `|lhs| < |rhs|`, available as a root assumption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: String,
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "goal", rename_all = "snake_case")]
pub enum Goal {
    /// Every branch ends in a contradiction.
    Contradiction,
    /// Every branch derives `lhs < s` and `lhs⁻¹ < s` for one `s ∈ {rhs, rhs⁻¹}`.
    AbsLess { lhs: Word, rhs: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub name: String,
    pub goal: Goal,
    pub hypotheses: Vec<Hypothesis>,
    pub root: Block,
}

impl Derivation {
    /// Steps in checking order.
    pub fn steps(&self) -> Vec<&Step> {
        fn walk<'a>(b: &'a Block, out: &mut Vec<&'a Step>) {
            out.extend(b.steps.iter());
            if let Some(s) = &b.split {
                for br in &s.branches {
                    walk(&br.body, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn splits(&self) -> Vec<&Split> {
        fn walk<'a>(b: &'a Block, out: &mut Vec<&'a Split>) {
            if let Some(s) = &b.split {
                out.push(s);
                for br in &s.branches {
                    walk(&br.body, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Number of leaf branches.
    pub fn leaf_count(&self) -> usize {
        fn count(b: &Block) -> usize {
            match &b.split {
                None => 1,
                Some(s) => s.branches.iter().map(|br| count(&br.body)).sum(),
            }
        }
        count(&self.root)
    }
}
