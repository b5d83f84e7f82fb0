//! The group `H = ⟨α, β, γ, δ, γ^η, δ^η⟩` where `η(x, y) = (y, x)`.
//!
//! `η` is never an element here. A horizontal letter `H(g)` stands for
//! `η g η`, which acts by `(x, y) ↦ (x + ψ(y), φ(y))` when `g = (φ, ψ)`.
//! Words mix vertical and horizontal letters; there is no general decision
//! procedure for equality of mixed words, so [`equal_or_unknown`] may answer
//! `Unknown`.

use std::fmt;

use num::{BigInt, Integer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactpl::Rational;
use crate::skew::{Gen, Generators, Point, RelationReport, SkewElement, UnknownGenerator};

fn swap(p: &Point) -> Point {
    (p.1.clone(), p.0.clone())
}

/// `η g η` for `g = inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HSkewElement {
    pub inner: SkewElement,
}

impl HSkewElement {
    pub fn eval_point(&self, p: &Point) -> Point {
        swap(&self.inner.eval_point(&swap(p)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    V(SkewElement),
    H(SkewElement),
}

impl Letter {
    pub fn eval_point(&self, p: &Point) -> Point {
        match self {
            Letter::V(g) => g.eval_point(p),
            Letter::H(g) => swap(&g.eval_point(&swap(p))),
        }
    }

    pub fn invert(&self) -> Letter {
        match self {
            Letter::V(g) => Letter::V(g.invert()),
            Letter::H(g) => Letter::H(g.invert()),
        }
    }

    pub fn eta(&self) -> Letter {
        match self {
            Letter::V(g) => Letter::H(g.clone()),
            Letter::H(g) => Letter::V(g.clone()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Letter::V(g) | Letter::H(g) => g.is_identity(),
        }
    }

    fn is_h(&self) -> bool {
        matches!(self, Letter::H(_))
    }

    /// Translations are stored as vertical letters.
    fn canonical(self) -> Letter {
        match self {
            Letter::H(g) => match g.as_translation() {
                Some((dx, dy)) => Letter::V(SkewElement::translation(dy, dx)),
                None => Letter::H(g),
            },
            v => v,
        }
    }

    /// The same plane map written as a horizontal letter, when possible.
    fn as_h_inner(&self) -> Option<SkewElement> {
        match self {
            Letter::H(g) => Some(g.clone()),
            Letter::V(g) => g.as_translation().map(|(dx, dy)| SkewElement::translation(dy, dx)),
        }
    }

    fn is_translation(&self) -> bool {
        match self {
            Letter::V(g) | Letter::H(g) => g.as_translation().is_some(),
        }
    }
}

fn merge_blocks(letters: &[Letter]) -> Vec<Letter> {
    // (is_h, members); is_h is None while a block holds only translations.
    let mut blocks: Vec<(Option<bool>, Vec<&Letter>)> = Vec::new();
    for l in letters.iter().filter(|l| !l.is_identity()) {
        let kind = if l.is_translation() { None } else { Some(l.is_h()) };
        match (blocks.last_mut(), kind) {
            (Some(block), None) => block.1.push(l),
            (Some(block), Some(k)) if block.0.is_none() || block.0 == Some(k) => {
                block.0 = Some(k);
                block.1.push(l);
            }
            _ => blocks.push((kind, vec![l])),
        }
    }
    blocks
        .into_iter()
        .filter_map(|(kind, members)| {
            let merged = if kind == Some(true) {
                let g = members
                    .iter()
                    .map(|l| l.as_h_inner().expect("horizontal or translation"))
                    .fold(SkewElement::identity(), |acc, h| acc.compose(&h));
                Letter::H(g)
            } else {
                let g = members
                    .iter()
                    .map(|l| match l {
                        Letter::V(g) => g.clone(),
                        Letter::H(_) => unreachable!("canonical translations are vertical"),
                    })
                    .fold(SkewElement::identity(), |acc, h| acc.compose(&h));
                Letter::V(g)
            };
            let merged = merged.canonical();
            (!merged.is_identity()).then_some(merged)
        })
        .collect()
}

/// A product of vertical and horizontal letters, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PlaneWord {
    letters: Vec<Letter>,
}

impl PlaneWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        PlaneWord { letters }
    }

    pub fn identity() -> Self {
        PlaneWord::default()
    }

    pub fn vertical(g: SkewElement) -> Self {
        PlaneWord::new(vec![Letter::V(g)])
    }

    pub fn horizontal(g: SkewElement) -> Self {
        PlaneWord::new(vec![Letter::H(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &PlaneWord) -> PlaneWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        PlaneWord::new(letters)
    }

    pub fn invert(&self) -> PlaneWord {
        PlaneWord::new(self.letters.iter().rev().map(Letter::invert).collect())
    }

    pub fn power(&self, n: i64) -> PlaneWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend(base.letters.iter().cloned());
        }
        PlaneWord::new(letters).simplify()
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &PlaneWord) -> PlaneWord {
        by.invert().concat(self).concat(by)
    }

    pub fn eval(&self, p: &Point) -> Point {
        self.letters.iter().fold(p.clone(), |q, l| l.eval_point(&q))
    }

    /// Normal form: letters are grouped into maximal blocks of one kind, where
    /// a translation (which is both kinds at once) joins the block on its left,
    /// or the first block if it leads. Each block is composed into one letter,
    /// translations are stored as vertical letters, identities are dropped, and
    /// the pass repeats until nothing changes. Commutes with [`Self::eta_conjugate`].
    pub fn simplify(&self) -> PlaneWord {
        let mut letters: Vec<Letter> = self.letters.iter().cloned().map(Letter::canonical).collect();
        loop {
            let merged = merge_blocks(&letters);
            if merged == letters {
                return PlaneWord { letters };
            }
            letters = merged;
        }
    }

    /// Conjugation by `η`: swaps the kind of every letter.
    pub fn eta_conjugate(&self) -> PlaneWord {
        PlaneWord::new(self.letters.iter().map(Letter::eta).collect()).simplify()
    }
}

impl fmt::Display for PlaneWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " · ")?;
            }
            match l {
                Letter::V(g) => write!(f, "V{g:?}")?,
                Letter::H(g) => write!(f, "H{g:?}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HGen {
    Alpha,
    Beta,
    Gamma,
    Delta,
    GammaEta,
    DeltaEta,
}

impl HGen {
    pub const ALL: [HGen; 6] = [HGen::Alpha, HGen::Beta, HGen::Gamma, HGen::Delta, HGen::GammaEta, HGen::DeltaEta];

    pub fn ascii(self) -> &'static str {
        match self {
            HGen::Alpha => "a",
            HGen::Beta => "b",
            HGen::Gamma => "c",
            HGen::Delta => "d",
            HGen::GammaEta => "ch",
            HGen::DeltaEta => "dh",
        }
    }

    pub fn parse(s: &str) -> Result<HGen, UnknownGenerator> {
        match s {
            "ch" | "γη" | "γ^η" | "gamma_eta" => Ok(HGen::GammaEta),
            "dh" | "δη" | "δ^η" | "delta_eta" => Ok(HGen::DeltaEta),
            other => Ok(match Gen::parse(other)? {
                Gen::Alpha => HGen::Alpha,
                Gen::Beta => HGen::Beta,
                Gen::Gamma => HGen::Gamma,
                Gen::Delta => HGen::Delta,
            }),
        }
    }

    pub fn word_with(self, gens: &Generators) -> PlaneWord {
        match self {
            HGen::Alpha => PlaneWord::vertical(gens.alpha.clone()),
            HGen::Beta => PlaneWord::vertical(gens.beta.clone()),
            HGen::Gamma => PlaneWord::vertical(gens.gamma.clone()),
            HGen::Delta => PlaneWord::vertical(gens.delta.clone()),
            HGen::GammaEta => PlaneWord::horizontal(gens.gamma.clone()),
            HGen::DeltaEta => PlaneWord::horizontal(gens.delta.clone()),
        }
    }
}

/// One of the six generators of `H` as a one-letter word.
pub fn h_generator(g: HGen) -> PlaneWord {
    g.word_with(&Generators::standard())
}

pub const DEFAULT_SEED: u64 = 0x6f72_6465_7263_6572;

/// Where [`equal_or_unknown`] looks for a point separating two words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessConfig {
    /// Grid of rationals with denominator up to this bound on `[-2, 2]²`.
    pub max_denominator: u32,
    /// Extra random points with denominator at most 1000.
    pub random_points: usize,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig { max_denominator: 24, random_points: 64, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// `point` is sent to `left` by the first word and to `right` by the second.
    Distinct { point: Point, left: Point, right: Point },
    Unknown,
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, Verdict::Distinct { .. })
    }
}

fn reduced_with_denominator(q: i64) -> Vec<Rational> {
    (-2 * q..=2 * q)
        .filter(|p| p.gcd(&q) == 1)
        .map(|p| Rational::new(BigInt::from(p), BigInt::from(q)))
        .collect()
}

/// Grid points in order of increasing denominator, then the seeded random points.
pub fn witness_points(cfg: &WitnessConfig) -> impl Iterator<Item = Point> + '_ {
    let grid = (1..=cfg.max_denominator as i64).flat_map(|q| {
        let older: Vec<Rational> = (1..q).flat_map(reduced_with_denominator).collect();
        let newer = reduced_with_denominator(q);
        let all: Vec<Rational> = older.iter().chain(newer.iter()).cloned().collect();
        let a: Vec<Point> = newer
            .iter()
            .flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone())))
            .collect();
        let b: Vec<Point> = older
            .iter()
            .flat_map(|x| newer.iter().map(move |y| (x.clone(), y.clone())))
            .collect();
        a.into_iter().chain(b)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random: Vec<Point> = (0..cfg.random_points)
        .map(|_| {
            let mut coord = || {
                let q: i64 = rng.gen_range(1..=1000);
                let p: i64 = rng.gen_range(-4 * q..=4 * q);
                Rational::new(BigInt::from(p), BigInt::from(q))
            };
            let x = coord();
            let y = coord();
            (x, y)
        })
        .collect();
    grid.chain(random)
}

/// `Equal` only from identical simplified forms; `Distinct` only with a
/// checked witness point.
pub fn equal_or_unknown(w1: &PlaneWord, w2: &PlaneWord, cfg: &WitnessConfig) -> Verdict {
    let s1 = w1.simplify();
    let s2 = w2.simplify();
    if s1 == s2 {
        return Verdict::Equal;
    }
    for p in witness_points(cfg) {
        let left = s1.eval(&p);
        let right = s2.eval(&p);
        if left != right {
            return Verdict::Distinct { point: p, left, right };
        }
    }
    Verdict::Unknown
}

pub fn verify_mirrored_relations() -> RelationReport {
    verify_mirrored_relations_for(&Generators::standard(), &WitnessConfig::default())
}

/// The η-images of `F1`–`F8`, computed directly on horizontal letters.
pub fn verify_mirrored_relations_for(gens: &Generators, cfg: &WitnessConfig) -> RelationReport {
    let a = HGen::Alpha.word_with(gens);
    let b = HGen::Beta.word_with(gens);
    let ch = HGen::GammaEta.word_with(gens);
    let dh = HGen::DeltaEta.word_with(gens);
    let eq = |x: &PlaneWord, y: &PlaneWord| equal_or_unknown(x, y, cfg).is_equal();
    let ne = |x: &PlaneWord, y: &PlaneWord| equal_or_unknown(x, y, cfg).is_distinct();
    let commute = |x: &PlaneWord, y: &PlaneWord| eq(&x.concat(y), &y.concat(x));

    let b3 = b.power(3);
    let factors: Vec<PlaneWord> = (0..6).map(|k| ch.conjugate(&dh.concat(&b.power(k)))).collect();
    let eps_eta = factors.iter().fold(PlaneWord::identity(), |acc, g| acc.concat(g));
    let one = PlaneWord::identity();

    let mut r = RelationReport::default();
    r.push("M1", "ba = ab", commute(&b, &a));
    r.push("M2", "a ch = ch a", commute(&a, &ch));
    r.push("M3", "a dh = dh a", commute(&a, &dh));
    r.push("M4", "ch^(b^3) = ch^-1", eq(&ch.conjugate(&b3), &ch.invert()));
    r.push("M5", "dh^(b^3) = dh^-1", eq(&dh.conjugate(&b3), &dh.invert()));
    r.push("M6", "ch^dh ch^(dh b) ... ch^(dh b^5) = a^-36", eq(&eps_eta, &a.power(-36)));
    r.push("M6a", "ch^(dh b^6) = ch^dh", eq(&ch.conjugate(&dh.concat(&b.power(6))), &factors[0]));
    let pairwise = factors
        .iter()
        .enumerate()
        .all(|(i, x)| factors[i + 1..].iter().all(|y| commute(x, y)));
    r.push("M6b", "the six conjugates ch^(dh b^k) pairwise commute", pairwise);
    r.push("M7", "ch, dh are each non-identity", ne(&ch, &one) && ne(&dh, &one));
    r.push("M8", "b is neither a nor a^-1", ne(&b, &a) && ne(&b, &a.invert()));
    r
}
