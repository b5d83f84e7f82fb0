//! Vertical skew products: plane maps `(x, y) ↦ (φ(x), y + ψ(x))`.
//!
//! Every such map sends the vertical line over `x` onto the vertical line over
//! `φ(x)` by a translation. The four generators `α, β, γ, δ` live here, along
//! with the exact computation of `ε` and the relation report `F1`–`F8`.
//!
//! Products are postfix: `g.compose(h)` applies `g` first, and
//! `g.conjugate(h)` is `h⁻¹ g h`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpl::{delta0, gamma0, rat, PLCocycle, PLMap, Rational};

pub type Point = (Rational, Rational);

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewElement {
    pub x_part: PLMap,
    pub shift: PLCocycle,
}

impl SkewElement {
    pub fn new(x_part: PLMap, shift: PLCocycle) -> Self {
        SkewElement { x_part, shift }
    }

    pub fn identity() -> Self {
        SkewElement::new(PLMap::identity(), PLCocycle::zero())
    }

    /// `(x, y) ↦ (x + dx, y + dy)`.
    pub fn translation(dx: Rational, dy: Rational) -> Self {
        SkewElement::new(PLMap::translation(dx), PLCocycle::constant(dy))
    }

    pub fn is_identity(&self) -> bool {
        self.x_part.is_identity() && self.shift.is_zero()
    }

    /// `Some((dx, dy))` if this element is a translation of the plane.
    pub fn as_translation(&self) -> Option<(Rational, Rational)> {
        Some((self.x_part.as_translation()?, self.shift.as_constant()?))
    }

    /// Apply `self`, then `next`.
    pub fn compose(&self, next: &SkewElement) -> SkewElement {
        SkewElement {
            x_part: self.x_part.compose(&next.x_part),
            shift: self.shift.add(&next.shift.pullback(&self.x_part)),
        }
    }

    pub fn invert(&self) -> SkewElement {
        let inv = self.x_part.invert();
        let shift = self.shift.pullback(&inv).negate();
        SkewElement { x_part: inv, shift }
    }

    pub fn power(&self, n: i64) -> SkewElement {
        let mut base = if n < 0 { self.invert() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = SkewElement::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &SkewElement) -> SkewElement {
        by.invert().compose(self).compose(by)
    }

    pub fn commutes(&self, other: &SkewElement) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn eval_point(&self, p: &Point) -> Point {
        let (x, y) = p;
        (self.x_part.eval(x), y + self.shift.eval(x))
    }

    /// x-coordinates (mod 1) at which the element fails to be differentiable.
    pub fn breakpoint_xs(&self) -> Vec<Rational> {
        let mut xs = self.x_part.breakpoint_xs();
        xs.extend(self.shift.breakpoint_xs());
        xs.sort();
        xs.dedup();
        xs
    }
}

impl fmt::Debug for SkewElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skew(x: {}, shift: {})", self.x_part, self.shift)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown generator {0:?}")]
pub struct UnknownGenerator(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::Alpha, Gen::Beta, Gen::Gamma, Gen::Delta];

    pub fn ascii(self) -> &'static str {
        match self {
            Gen::Alpha => "a",
            Gen::Beta => "b",
            Gen::Gamma => "c",
            Gen::Delta => "d",
        }
    }

    pub fn parse(s: &str) -> Result<Gen, UnknownGenerator> {
        match s {
            "a" | "α" | "alpha" => Ok(Gen::Alpha),
            "b" | "β" | "beta" => Ok(Gen::Beta),
            "c" | "γ" | "gamma" => Ok(Gen::Gamma),
            "d" | "δ" | "delta" => Ok(Gen::Delta),
            _ => Err(UnknownGenerator(s.to_string())),
        }
    }
}

/// `α: (x,y) ↦ (x + 1/6, y)`, `β: (x,y) ↦ (x, y + 1/6)`,
/// `γ: (x,y) ↦ (x, y + γ₀(x))`, `δ: (x,y) ↦ (δ₀(x), y)`.
pub fn generator(g: Gen) -> SkewElement {
    match g {
        Gen::Alpha => SkewElement::new(PLMap::translation(rat(1, 6)), PLCocycle::zero()),
        Gen::Beta => SkewElement::new(PLMap::identity(), PLCocycle::constant(rat(1, 6))),
        Gen::Gamma => SkewElement::new(PLMap::identity(), gamma0()),
        Gen::Delta => SkewElement::new(delta0(), PLCocycle::zero()),
    }
}

/// A concrete choice of the four generators. [`Generators::standard`] is the
/// construction itself; other values exist so perturbed copies can be checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub alpha: SkewElement,
    pub beta: SkewElement,
    pub gamma: SkewElement,
    pub delta: SkewElement,
}

impl Generators {
    pub fn standard() -> Self {
        Generators {
            alpha: generator(Gen::Alpha),
            beta: generator(Gen::Beta),
            gamma: generator(Gen::Gamma),
            delta: generator(Gen::Delta),
        }
    }

    pub fn get(&self, g: Gen) -> &SkewElement {
        match g {
            Gen::Alpha => &self.alpha,
            Gen::Beta => &self.beta,
            Gen::Gamma => &self.gamma,
            Gen::Delta => &self.delta,
        }
    }

    pub fn set(&mut self, g: Gen, value: SkewElement) {
        match g {
            Gen::Alpha => self.alpha = value,
            Gen::Beta => self.beta = value,
            Gen::Gamma => self.gamma = value,
            Gen::Delta => self.delta = value,
        }
    }

    pub fn eval_word(&self, w: &GeneratorWord) -> SkewElement {
        w.letters()
            .iter()
            .fold(SkewElement::identity(), |acc, &(g, e)| acc.compose(&self.get(g).power(e)))
    }

    /// The six conjugates `γ^(δα^k)`, `k = 0..5`.
    pub fn epsilon_factors(&self) -> Vec<SkewElement> {
        (0..6)
            .map(|k| self.gamma.conjugate(&self.delta.compose(&self.alpha.power(k))))
            .collect()
    }

    /// `ε = γ^δ γ^(δα) γ^(δα²) γ^(δα³) γ^(δα⁴) γ^(δα⁵)`.
    pub fn epsilon(&self) -> SkewElement {
        self.epsilon_factors()
            .iter()
            .fold(SkewElement::identity(), |acc, g| acc.compose(g))
    }
}

/// A freely reduced word in `α, β, γ, δ`: nonzero exponents, no two adjacent
/// letters with the same symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GeneratorWord {
    letters: Vec<(Gen, i64)>,
}

impl GeneratorWord {
    pub fn new(letters: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut out: Vec<(Gen, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        GeneratorWord { letters: out }
    }

    pub fn letters(&self) -> &[(Gen, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e == 1 { g.ascii().to_string() } else { format!("{}^{e}", g.ascii()) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn word_to_element(w: &GeneratorWord) -> SkewElement {
    Generators::standard().eval_word(w)
}

pub fn compute_epsilon() -> SkewElement {
    Generators::standard().epsilon()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub id: String,
    pub statement: String,
    pub holds: bool,
}

/// Named, ordered list of verified relations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RelationReport {
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn push(&mut self, id: &str, statement: &str, holds: bool) {
        self.entries.push(RelationEntry { id: id.to_string(), statement: statement.to_string(), holds });
    }

    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn get(&self, id: &str) -> Option<bool> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{:<5} {:<6} {}", e.id, if e.holds { "ok" } else { "FAILED" }, e.statement)?;
        }
        Ok(())
    }
}

pub fn verify_relations() -> RelationReport {
    verify_relations_for(&Generators::standard())
}

pub fn verify_relations_for(g: &Generators) -> RelationReport {
    let (a, b, c, d) = (&g.alpha, &g.beta, &g.gamma, &g.delta);
    let a3 = a.power(3);
    let factors = g.epsilon_factors();
    let eps = g.epsilon();

    let mut r = RelationReport::default();
    r.push("F1", "ab = ba", a.commutes(b));
    r.push("F2", "bc = cb", b.commutes(c));
    r.push("F3", "bd = db", b.commutes(d));
    r.push("F4", "c^(a^3) = c^-1", c.conjugate(&a3) == c.invert());
    r.push("F5", "d^(a^3) = d^-1", d.conjugate(&a3) == d.invert());
    r.push("F6", "c^d c^(da) c^(da^2) c^(da^3) c^(da^4) c^(da^5) = b^-36", eps == b.power(-36));
    r.push("F6a", "c^(d a^6) = c^d", c.conjugate(&d.compose(&a.power(6))) == factors[0]);
    let pairwise = factors
        .iter()
        .enumerate()
        .all(|(i, x)| factors[i + 1..].iter().all(|y| x.commutes(y)));
    r.push("F6b", "the six conjugates c^(da^k) pairwise commute", pairwise);
    r.push(
        "F7",
        "a, b, c, d are each non-identity",
        [a, b, c, d].iter().all(|x| !x.is_identity()),
    );
    r.push("F8", "a is neither b nor b^-1", a != b && *a != b.invert());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpl::int;

    fn pt(x: Rational, y: Rational) -> Point {
        (x, y)
    }

    #[test]
    fn generator_actions() {
        let c = generator(Gen::Gamma);
        assert_eq!(c.eval_point(&pt(int(0), int(0))), pt(int(0), int(3)));
        let b = generator(Gen::Beta);
        assert_eq!(b.eval_point(&pt(rat(2, 7), rat(-1, 3))), pt(rat(2, 7), rat(-1, 3) + rat(1, 6)));
        let d = generator(Gen::Delta);
        assert_eq!(d.eval_point(&pt(rat(1, 3), int(5))), pt(rat(1, 6), int(5)));
        assert!(Gen::parse("e").is_err());
        assert_eq!(Gen::parse("δ"), Ok(Gen::Delta));
    }

    #[test]
    fn group_law_examples() {
        let g = Generators::standard();
        let a3 = g.alpha.power(3);
        assert_eq!(g.gamma.conjugate(&a3), g.gamma.invert());
        assert_eq!(g.delta.conjugate(&a3), g.delta.invert());
        let b36 = g.beta.power(-36);
        assert_eq!(b36.eval_point(&pt(rat(1, 5), int(2))), pt(rat(1, 5), int(-4)));
        let cd = g.gamma.conjugate(&g.delta);
        assert_eq!(cd.eval_point(&pt(int(0), rat(7, 3))), pt(int(0), rat(7, 3) + int(3)));
        assert_eq!(g.beta.power(0), SkewElement::identity());
    }

    #[test]
    fn conjugate_point_images() {
        let g = Generators::standard();
        let cd = g.gamma.conjugate(&g.delta);
        assert_eq!(cd.eval_point(&pt(rat(1, 2), int(0))), pt(rat(1, 2), int(-3)));
        let p = (rat(3, 11), rat(-5, 4));
        assert_eq!(SkewElement::identity().eval_point(&p), p);
        let cda2 = cd.conjugate(&g.alpha.power(2));
        assert_eq!(cda2.eval_point(&pt(int(0), int(1))), pt(int(0), int(-1)));
    }

    #[test]
    fn words() {
        use Gen::*;
        let w = GeneratorWord::new([(Alpha, 1), (Beta, 1), (Alpha, -1), (Beta, -1)]);
        assert!(word_to_element(&w).is_identity());
        assert!(word_to_element(&GeneratorWord::default()).is_identity());
        let w = GeneratorWord::new([(Delta, -1), (Gamma, 1), (Delta, 1)]);
        assert_eq!(word_to_element(&w).eval_point(&pt(rat(5, 6), int(0))), pt(rat(5, 6), int(-1)));
        let reduced = GeneratorWord::new([(Alpha, 2), (Alpha, -2), (Beta, 0), (Gamma, 1)]);
        assert_eq!(reduced.letters(), &[(Gamma, 1)]);
        assert_eq!(reduced.to_string(), "c");
    }

    #[test]
    fn commutation_examples() {
        let g = Generators::standard();
        assert!(g.beta.commutes(&g.gamma));
        assert!(g.delta.commutes(&g.delta));
        assert!(!g.alpha.commutes(&g.gamma));
        // Witness: αγ sends (0,0) to (1/6, γ₀(1/6)) = (1/6, 1); γα sends it to (1/6, 3).
        let o = pt(int(0), int(0));
        assert_eq!(g.alpha.compose(&g.gamma).eval_point(&o), pt(rat(1, 6), int(1)));
        assert_eq!(g.gamma.compose(&g.alpha).eval_point(&o), pt(rat(1, 6), int(3)));
    }

    #[test]
    fn breakpoints() {
        let g = Generators::standard();
        let cd = g.gamma.conjugate(&g.delta);
        assert_eq!(cd.breakpoint_xs(), vec![int(0), rat(1, 6), rat(1, 2), rat(5, 6)]);
        assert!(SkewElement::identity().breakpoint_xs().is_empty());
        assert_eq!(g.delta.breakpoint_xs(), vec![rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn epsilon_is_beta_power() {
        let eps = compute_epsilon();
        let g = Generators::standard();
        assert_eq!(eps, g.beta.power(-36));
        assert_eq!(eps.eval_point(&pt(int(0), rat(1, 9))), pt(int(0), rat(1, 9) - int(6)));
        assert!(eps.commutes(&g.alpha));
    }

    #[test]
    fn report_all_true() {
        let r = verify_relations();
        assert!(r.all_hold(), "{r}");
        assert_eq!(r.entries.len(), 10);
    }

    #[test]
    fn perturbed_delta_breaks_f5_only_where_expected() {
        let mut g = Generators::standard();
        let perturbed = g.delta.compose(&g.beta);
        g.set(Gen::Delta, perturbed);
        let r = verify_relations_for(&g);
        assert_eq!(r.get("F3"), Some(true));
        assert_eq!(r.get("F5"), Some(false));
        // Brute-force cross-check at a point: (δβ)^(α³) and (δβ)⁻¹ differ at (0,0).
        let a3 = g.alpha.power(3);
        let o = pt(int(0), int(0));
        assert_ne!(g.delta.conjugate(&a3).eval_point(&o), g.delta.invert().eval_point(&o));
    }

    #[test]
    fn f8_witness() {
        let g = Generators::standard();
        let o = pt(int(0), int(0));
        assert_eq!(g.alpha.eval_point(&o), pt(rat(1, 6), int(0)));
        assert_eq!(g.beta.eval_point(&o), pt(int(0), rat(1, 6)));
        assert_eq!(g.beta.invert().eval_point(&o), pt(int(0), rat(-1, 6)));
    }
}
