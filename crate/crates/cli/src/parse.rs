//! Command-line syntax for generator words and points.
//!
//! ```text
//! word    := factor*
//! factor  := primary ('^' suffix)*
//! primary := name | '1' | '(' word ')'
//! suffix  := ['-'] digits | 'eta' | 'η' | name | '(' word ')'
//! ```
//!
//! `x^k` is a power, `x^y` the conjugate `y⁻¹xy`, and `x^eta` the
//! η-conjugate. Names are `a b c d ch dh`, their Greek forms, or the
//! spelled-out `alpha … delta_eta`; runs of names may be written without
//! spaces (`da` is `d a`).

use ordercert_core::exactpl::{parse_rational, Rational};
use ordercert_core::plane::{HGen, PlaneWord};
use ordercert_core::skew::{Generators, Point, SkewElement};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error in {input:?} at offset {offset}: {reason}")]
pub struct SyntaxError {
    pub input: String,
    pub offset: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(HGen),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
    Conjugate(Box<Expr>, Box<Expr>),
    Eta(Box<Expr>),
}

const NAMES: &[(&str, HGen)] = &[
    ("gamma_eta", HGen::GammaEta),
    ("delta_eta", HGen::DeltaEta),
    ("alpha", HGen::Alpha),
    ("beta", HGen::Beta),
    ("gamma", HGen::Gamma),
    ("delta", HGen::Delta),
    ("γη", HGen::GammaEta),
    ("δη", HGen::DeltaEta),
    ("ch", HGen::GammaEta),
    ("dh", HGen::DeltaEta),
    ("α", HGen::Alpha),
    ("β", HGen::Beta),
    ("γ", HGen::Gamma),
    ("δ", HGen::Delta),
    ("a", HGen::Alpha),
    ("b", HGen::Beta),
    ("c", HGen::Gamma),
    ("d", HGen::Delta),
];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> SyntaxError {
        SyntaxError { input: self.src.to_string(), offset: self.pos, reason: reason.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Option<HGen> {
        let rest = self.rest();
        NAMES.iter().find(|(n, _)| rest.starts_with(n)).map(|(n, g)| {
            self.pos += n.len();
            *g
        })
    }

    fn word(&mut self, nested: bool) -> Result<Expr, SyntaxError> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.rest().chars().next() {
                None if nested => return Err(self.err("unclosed parenthesis")),
                None => break,
                Some(')') if nested => break,
                Some(_) => factors.push(self.factor()?),
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat("(") {
            let e = self.word(true)?;
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        if self.eat("1") {
            return Ok(Expr::Product(vec![]));
        }
        self.name().map(Expr::Gen).ok_or_else(|| self.err("expected a generator name"))
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.primary()?;
        while self.eat("^") {
            if self.eat("eta") || self.eat("η") {
                e = Expr::Eta(Box::new(e));
                continue;
            }
            let digits_at = self.pos;
            let neg = self.eat("-");
            let len = self.rest().chars().take_while(char::is_ascii_digit).count();
            if len > 0 {
                let k: i64 = self.rest()[..len].parse().map_err(|_| self.err("exponent out of range"))?;
                self.pos += len;
                e = Expr::Power(Box::new(e), if neg { -k } else { k });
                continue;
            }
            if neg {
                self.pos = digits_at;
                return Err(self.err("expected digits after '-'"));
            }
            let by = if self.rest().starts_with('(') { self.primary()? } else { Expr::Gen(self.name().ok_or_else(|| self.err("expected exponent"))?) };
            e = Expr::Conjugate(Box::new(e), Box::new(by));
        }
        Ok(e)
    }
}

pub fn parse_word(s: &str) -> Result<Expr, SyntaxError> {
    Parser { src: s, pos: 0 }.word(false)
}

impl Expr {
    pub fn to_plane(&self, gens: &Generators) -> PlaneWord {
        match self {
            Expr::Gen(g) => g.word_with(gens),
            Expr::Product(fs) => fs.iter().fold(PlaneWord::identity(), |acc, f| acc.concat(&f.to_plane(gens))),
            Expr::Power(e, k) => e.to_plane(gens).power(*k),
            Expr::Conjugate(e, by) => e.to_plane(gens).conjugate(&by.to_plane(gens)),
            Expr::Eta(e) => e.to_plane(gens).eta_conjugate(),
        }
    }

    /// Exact skew element, or `None` if the word leaves `⟨α, β, γ, δ⟩`
    /// syntactically (uses `ch`, `dh` or `^eta`).
    pub fn to_skew(&self, gens: &Generators) -> Option<SkewElement> {
        use ordercert_core::skew::Gen;
        Some(match self {
            Expr::Gen(HGen::Alpha) => gens.get(Gen::Alpha).clone(),
            Expr::Gen(HGen::Beta) => gens.get(Gen::Beta).clone(),
            Expr::Gen(HGen::Gamma) => gens.get(Gen::Gamma).clone(),
            Expr::Gen(HGen::Delta) => gens.get(Gen::Delta).clone(),
            Expr::Gen(_) | Expr::Eta(_) => return None,
            Expr::Product(fs) => {
                let mut acc = SkewElement::identity();
                for f in fs {
                    acc = acc.compose(&f.to_skew(gens)?);
                }
                acc
            }
            Expr::Power(e, k) => e.to_skew(gens)?.power(*k),
            Expr::Conjugate(e, by) => e.to_skew(gens)?.conjugate(&by.to_skew(gens)?),
        })
    }
}

/// `"p/q,p/q"`.
pub fn parse_point(s: &str) -> Result<Point, SyntaxError> {
    let err = |reason: &str| SyntaxError { input: s.to_string(), offset: 0, reason: reason.to_string() };
    let (x, y) = s.split_once(',').ok_or_else(|| err("expected 'x,y'"))?;
    let q = |t: &str| -> Result<Rational, SyntaxError> { parse_rational(t.trim()).map_err(|e| err(&e.to_string())) };
    Ok((q(x)?, q(y)?))
}

/// `"p/q,p/q"` in lowest terms.
pub fn format_point(p: &Point) -> String {
    use ordercert_core::exactpl::format_rational;
    format!("{},{}", format_rational(&p.0), format_rational(&p.1))
}

/// `SPEC` for `--perturb`: `g:=word`, e.g. `d:=d b` or `δ:=δβ`.
pub fn parse_perturbation(spec: &str) -> Result<Generators, SyntaxError> {
    use ordercert_core::skew::Gen;
    let err = |reason: &str| SyntaxError { input: spec.to_string(), offset: 0, reason: reason.to_string() };
    let (lhs, rhs) = spec.split_once(":=").ok_or_else(|| err("expected 'generator:=word'"))?;
    let g = Gen::parse(lhs.trim()).map_err(|e| err(&e.to_string()))?;
    let standard = Generators::standard();
    let value = parse_word(rhs)?.to_skew(&standard).ok_or_else(|| err("perturbation must be a word in a, b, c, d"))?;
    let mut gens = standard;
    gens.set(g, value);
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ordercert_core::exactpl::rat;
    use ordercert_core::plane::h_generator;

    fn eval(w: &str, p: &str) -> String {
        format_point(&parse_word(w).unwrap().to_plane(&Generators::standard()).eval(&parse_point(p).unwrap()))
    }

    #[test]
    fn conjugate_offset() {
        assert_eq!(eval("c^d", "0,0"), "0,3");
        assert_eq!(eval("", "1/2,1/2"), "1/2,1/2");
        assert_eq!(eval("γ^δ", "0,0"), "0,3");
        assert_eq!(eval("a^6", "0,0"), "1,0");
        assert_eq!(eval("b^-36", "0,0"), "0,-6");
    }

    #[test]
    fn grammar() {
        let g = Generators::standard();
        let same = |x: &str, y: &str| parse_word(x).unwrap().to_plane(&g).simplify() == parse_word(y).unwrap().to_plane(&g).simplify();
        assert!(same("c^(d a)", "a^-1 d^-1 c d a"));
        assert!(same("da", "d a"));
        assert!(same("c^eta", "ch"));
        assert!(same("(a b)^-1", "b^-1 a^-1"));
        assert!(same("a^2^3", "a^6"));
        assert!(same("1", ""));
        assert_eq!(parse_word("ch").unwrap(), Expr::Gen(HGen::GammaEta));
        assert_eq!(parse_word("dh").unwrap().to_plane(&g), h_generator(HGen::DeltaEta));
        for bad in ["x", "a^", "(a", "a)", "a^-", "a^-b"] {
            assert!(parse_word(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn skew_words() {
        let g = Generators::standard();
        assert!(parse_word("ch").unwrap().to_skew(&g).is_none());
        assert!(parse_word("a^eta").unwrap().to_skew(&g).is_none());
        let e = parse_word("c^d c^(d a) c^(d a^2) c^(d a^3) c^(d a^4) c^(d a^5)").unwrap().to_skew(&g).unwrap();
        assert_eq!(e, parse_word("b^-36").unwrap().to_skew(&g).unwrap());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("1/2, -3").unwrap(), (rat(1, 2), rat(-3, 1)));
        assert_eq!(parse_point("2/4,0").unwrap().0, rat(1, 2));
        assert!(parse_point("1/2").is_err());
        assert!(parse_point("a,0").is_err());
        assert!(parse_point("1/0,0").is_err());
        assert_eq!(format_point(&(rat(-2, 4), rat(3, 1))), "-1/2,3");
    }

    #[test]
    fn perturbation() {
        let g = parse_perturbation("d:=d b").unwrap();
        let s = Generators::standard();
        assert_eq!(g.delta, s.delta.compose(&s.beta));
        assert_eq!(parse_perturbation("δ:=δβ").unwrap().delta, g.delta);
        assert!(parse_perturbation("d=d b").is_err());
        assert!(parse_perturbation("d:=ch").is_err());
    }
}
