//! Bounded search for non-left-orderability witnesses.
//!
//! A witness is a list of non-identity atoms together with, for each of the
//! 2ⁿ ways of choosing a sign for every atom, a nonempty product of the
//! signed atoms that equals the identity. No positive cone can contain all
//! signed atoms of such a product, so no left-order exists.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane::{equal_or_unknown, PlaneWord, Verdict, WitnessConfig};
use crate::skew::SkewElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle could not decide whether `{0}` is the identity")]
    Undecided(String),
    #[error("atom index {0} out of range")]
    BadAtom(usize),
}

/// One atom raised to `±1`.
pub type SignedAtom = (usize, i8);

/// Decides whether a product of signed atoms is the identity.
pub trait IdentityOracle {
    fn atom_count(&self) -> usize;
    fn is_identity(&self, word: &[SignedAtom]) -> Result<bool, OracleError>;
}

fn render(word: &[SignedAtom]) -> String {
    word.iter().map(|(i, s)| format!("x{i}^{s}")).collect::<Vec<_>>().join(" ")
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct CayleyOracle {
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub atoms: Vec<usize>,
}

impl CayleyOracle {
    /// ℤ/2 with the single atom `g`, `g² = 1`.
    pub fn z2() -> Self {
        CayleyOracle { table: vec![vec![0, 1], vec![1, 0]], identity: 0, atoms: vec![1] }
    }

    /// ℤ/n with the single atom `1`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        CayleyOracle { table, identity: 0, atoms: vec![1 % n] }
    }

    fn inverse(&self, g: usize) -> usize {
        (0..self.table.len()).find(|&h| self.table[g][h] == self.identity).unwrap_or(self.identity)
    }
}

impl IdentityOracle for CayleyOracle {
    fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    fn is_identity(&self, word: &[SignedAtom]) -> Result<bool, OracleError> {
        let mut g = self.identity;
        for &(i, s) in word {
            let a = *self.atoms.get(i).ok_or(OracleError::BadAtom(i))?;
            let a = if s < 0 { self.inverse(a) } else { a };
            g = self.table[g][a];
        }
        Ok(g == self.identity)
    }
}

/// Atoms in the free abelian group ℤⁿ.
#[derive(Debug, Clone)]
pub struct LatticeOracle {
    pub atoms: Vec<Vec<i64>>,
}

impl LatticeOracle {
    /// The standard basis of ℤⁿ.
    pub fn standard(n: usize) -> Self {
        LatticeOracle { atoms: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }
}

impl IdentityOracle for LatticeOracle {
    fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    fn is_identity(&self, word: &[SignedAtom]) -> Result<bool, OracleError> {
        let dim = self.atoms.iter().map(Vec::len).max().unwrap_or(0);
        let mut sum = vec![0i64; dim];
        for &(i, s) in word {
            let a = self.atoms.get(i).ok_or(OracleError::BadAtom(i))?;
            for (k, x) in a.iter().enumerate() {
                sum[k] += i64::from(s) * x;
            }
        }
        Ok(sum.iter().all(|&x| x == 0))
    }
}

/// Atoms realized as skew elements; equality is exact and total.
#[derive(Debug, Clone)]
pub struct SkewOracle {
    pub atoms: Vec<SkewElement>,
}

impl IdentityOracle for SkewOracle {
    fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    fn is_identity(&self, word: &[SignedAtom]) -> Result<bool, OracleError> {
        let mut g = SkewElement::identity();
        for &(i, s) in word {
            let a = self.atoms.get(i).ok_or(OracleError::BadAtom(i))?;
            g = if s < 0 { g.compose(&a.invert()) } else { g.compose(a) };
        }
        Ok(g.is_identity())
    }
}

/// Atoms realized as plane words; `Unknown` verdicts surface as errors.
#[derive(Debug, Clone)]
pub struct PlaneOracle {
    pub atoms: Vec<PlaneWord>,
    pub config: WitnessConfig,
}

impl IdentityOracle for PlaneOracle {
    fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    fn is_identity(&self, word: &[SignedAtom]) -> Result<bool, OracleError> {
        let mut g = PlaneWord::identity();
        for &(i, s) in word {
            let a = self.atoms.get(i).ok_or(OracleError::BadAtom(i))?;
            g = g.concat(&a.power(i64::from(s)));
        }
        match equal_or_unknown(&g, &PlaneWord::identity(), &self.config) {
            Verdict::Equal => Ok(true),
            Verdict::Distinct { .. } => Ok(false),
            Verdict::Unknown => Err(OracleError::Undecided(render(word))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    /// Longest product tried.
    pub max_len: usize,
    /// Cap on products tried per sign vector.
    pub max_products: usize,
}

impl SearchBound {
    pub fn depth(max_len: usize) -> Self {
        SearchBound { max_len, max_products: 1 << 20 }
    }
}

/// The identity product found for one sign vector. `product` lists atom
/// indices; each occurrence is raised to that atom's sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCase {
    pub signs: Vec<i8>,
    pub product: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonLoWitness {
    pub atoms: Vec<String>,
    pub cases: Vec<SignCase>,
}

fn sign_vector(n: usize, mask: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

fn signed(signs: &[i8], product: &[usize]) -> Vec<SignedAtom> {
    product.iter().map(|&i| (i, signs[i])).collect()
}

/// Shortest identity product in the semigroup generated by the signed atoms,
/// enumerated breadth-first by length.
fn search_one<O: IdentityOracle + ?Sized>(
    signs: &[i8],
    oracle: &O,
    bound: SearchBound,
) -> Result<Option<Vec<usize>>, OracleError> {
    let n = signs.len();
    let mut tried = 0usize;
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..bound.max_len {
        let mut next = Vec::with_capacity(frontier.len() * n);
        for w in &frontier {
            for i in 0..n {
                if tried >= bound.max_products {
                    return Ok(None);
                }
                tried += 1;
                let mut p = w.clone();
                p.push(i);
                if oracle.is_identity(&signed(signs, &p))? {
                    return Ok(Some(p));
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Tries every sign vector; `Some` only if each has an identity product
/// within `bound`. Inconclusive searches return `None`.
pub fn sign_search<O: IdentityOracle + ?Sized>(
    labels: &[String],
    oracle: &O,
    bound: SearchBound,
) -> Result<Option<NonLoWitness>, OracleError> {
    let n = oracle.atom_count();
    for i in 0..n {
        if oracle.is_identity(&[(i, 1)])? {
            return Ok(None);
        }
    }
    let mut cases = Vec::new();
    for mask in 0..1usize << n {
        let signs = sign_vector(n, mask);
        match search_one(&signs, oracle, bound)? {
            Some(product) => cases.push(SignCase { signs, product }),
            None => return Ok(None),
        }
    }
    let atoms = (0..n).map(|i| labels.get(i).cloned().unwrap_or_else(|| format!("x{i}"))).collect();
    Ok(Some(NonLoWitness { atoms, cases }))
}

/// Re-checks a witness from scratch.
pub fn verify_nonlo_witness<O: IdentityOracle + ?Sized>(w: &NonLoWitness, oracle: &O) -> bool {
    let n = oracle.atom_count();
    if w.atoms.len() != n || n >= usize::BITS as usize {
        return false;
    }
    let atoms_ok = (0..n).all(|i| matches!(oracle.is_identity(&[(i, 1)]), Ok(false)));
    let mut covered = std::collections::BTreeSet::new();
    for c in &w.cases {
        if c.signs.len() != n || c.signs.iter().any(|s| s.abs() != 1) {
            return false;
        }
        if c.product.is_empty() || c.product.iter().any(|&i| i >= n) {
            return false;
        }
        if !matches!(oracle.is_identity(&signed(&c.signs, &c.product)), Ok(true)) {
            return false;
        }
        covered.insert(c.signs.clone());
    }
    atoms_ok && covered.len() == 1 << n
}

impl NonLoWitness {
    /// One line per sign vector, e.g. `+g : g g`.
    pub fn lines(&self) -> Vec<String> {
        self.cases
            .iter()
            .map(|c| {
                let signs: Vec<String> = c
                    .signs
                    .iter()
                    .zip(&self.atoms)
                    .map(|(s, a)| format!("{}{a}", if *s > 0 { '+' } else { '-' }))
                    .collect();
                let prod: Vec<String> = c
                    .product
                    .iter()
                    .map(|&i| if c.signs[i] > 0 { self.atoms[i].clone() } else { format!("{}^-1", self.atoms[i]) })
                    .collect();
                format!("{} : {} = 1", signs.join(" "), prod.join(" "))
            })
            .collect()
    }
}
