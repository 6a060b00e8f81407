//! Symbolic conditional structures.
//!
//! Each conditional of a knowledge base owns a pair of abstract generators
//! `a<i>+` / `a<i>-`. The structure map sends a world to the product of the
//! generators of the conditionals it verifies or falsifies; extended over
//! formal products of worlds it becomes a homomorphism between two free
//! abelian groups. Group elements are exponent mappings (the groups are
//! isomorphic to `Z^2n` and `Z^|Omega|`); there is no symbolic rewriting and
//! no floating point anywhere in this module.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::linalg::integer_kernel;
use crate::logic::{Indicator, KnowledgeBase, Signature, World};

/// Sign of a conditional's generator: `Plus` records verification, `Minus`
/// falsification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    fn symbol(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

/// Element of the free abelian group generated by `a<i>+`, `a<i>-`;
/// an exponent mapping with zero exponents omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupWord {
    exps: BTreeMap<(usize, Polarity), i64>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(index: usize, polarity: Polarity) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert((index, polarity), 1);
        GroupWord { exps }
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, index: usize, polarity: Polarity) -> i64 {
        self.exps.get(&(index, polarity)).copied().unwrap_or(0)
    }

    /// Nonzero factors in canonical order (by index, `+` before `-`).
    pub fn factors(&self) -> impl Iterator<Item = (usize, Polarity, i64)> + '_ {
        self.exps.iter().map(|(&(i, p), &e)| (i, p, e))
    }

    /// Adds `k` copies of `other` to this word (exponent arithmetic).
    pub fn scaled_mul_assign(&mut self, other: &GroupWord, k: i64) {
        if k == 0 {
            return;
        }
        for (&g, &e) in &other.exps {
            let entry = self.exps.entry(g).or_insert(0);
            *entry += k * e;
            if *entry == 0 {
                self.exps.remove(&g);
            }
        }
    }

    pub fn times(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        out.scaled_mul_assign(other, 1);
        out
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let mut out = GroupWord::identity();
        out.scaled_mul_assign(self, k);
        out
    }

    pub fn inverse(&self) -> GroupWord {
        self.pow(-1)
    }
}

impl fmt::Display for GroupWord {
    /// Canonical rendering: `a1+ a2-`, exponents appended as `^e` when not 1,
    /// identity rendered `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&(i, p), &e) in &self.exps {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "a{}{}", i + 1, p.symbol())?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Element of the free abelian group generated by the worlds; an exponent
/// mapping with zero exponents omitted. Worlds with positive exponents act
/// like a multiset, negative exponents divide.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WorldWord {
    exps: BTreeMap<World, i64>,
}

impl WorldWord {
    pub fn identity() -> Self {
        WorldWord::default()
    }

    pub fn world(w: World) -> Self {
        WorldWord::from_factors([(w, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (World, i64)>>(factors: I) -> Self {
        let mut word = WorldWord::default();
        for (w, e) in factors {
            word.mul_world(w, e);
        }
        word
    }

    pub fn mul_world(&mut self, w: World, e: i64) {
        if e == 0 {
            return;
        }
        let entry = self.exps.entry(w).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.exps.remove(&w);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, w: World) -> i64 {
        self.exps.get(&w).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (World, i64)> + '_ {
        self.exps.iter().map(|(&w, &e)| (w, e))
    }

    /// Sum of all exponents: the generator count the `⊤`-structure sees.
    pub fn total_exponent(&self) -> i64 {
        self.exps.values().sum()
    }

    pub fn times(&self, other: &WorldWord) -> WorldWord {
        let mut out = self.clone();
        for (&w, &e) in &other.exps {
            out.mul_world(w, e);
        }
        out
    }

    pub fn pow(&self, k: i64) -> WorldWord {
        let mut out = WorldWord::identity();
        for (&w, &e) in &self.exps {
            out.mul_world(w, e * k);
        }
        out
    }

    pub fn inverse(&self) -> WorldWord {
        self.pow(-1)
    }

    /// `numerator / denominator` as a single word.
    pub fn quotient(numerator: &WorldWord, denominator: &WorldWord) -> WorldWord {
        numerator.times(&denominator.inverse())
    }

    /// Renders factors in world enumeration order, `^e` appended when not 1,
    /// identity rendered `1`.
    pub fn render(&self, sig: &Signature) -> String {
        if self.exps.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (&w, &e) in &self.exps {
            if e == 1 {
                parts.push(sig.render_world(w));
            } else {
                parts.push(format!("{}^{}", sig.render_world(w), e));
            }
        }
        parts.join(" ")
    }
}

/// `sigma_i`: how conditional `i` of `kb` applies to `w` — its positive
/// generator on verification, its negative one on falsification, the
/// identity when not applicable.
pub fn sigma_i(kb: &KnowledgeBase, i: usize, w: World) -> GroupWord {
    assert!(i < kb.len(), "conditional index {i} out of range");
    match kb.conditional(i).indicator(w, kb.signature()) {
        Indicator::Verifies => GroupWord::generator(i, Polarity::Plus),
        Indicator::Falsifies => GroupWord::generator(i, Polarity::Minus),
        Indicator::NotApplicable => GroupWord::identity(),
    }
}

/// The conditional structure of `w`: the product of `sigma_i(w)` over all
/// conditionals of `kb`.
pub fn sigma(kb: &KnowledgeBase, w: World) -> GroupWord {
    let mut out = GroupWord::identity();
    for i in 0..kb.len() {
        out.scaled_mul_assign(&sigma_i(kb, i, w), 1);
    }
    out
}

/// Homomorphic extension of the structure map to formal products of worlds.
pub fn sigma_hat(kb: &KnowledgeBase, word: &WorldWord) -> GroupWord {
    let mut out = GroupWord::identity();
    for (w, e) in word.factors() {
        out.scaled_mul_assign(&sigma(kb, w), e);
    }
    out
}

/// `⊤`-equivalence: both words are a cancelled product of the same number of
/// generators.
pub fn top_equivalent(w1: &WorldWord, w2: &WorldWord) -> bool {
    w1.total_exponent() == w2.total_exponent()
}

/// Structure equivalence: both words have the same conditional structure.
pub fn structure_equivalent(kb: &KnowledgeBase, w1: &WorldWord, w2: &WorldWord) -> bool {
    sigma_hat(kb, w1) == sigma_hat(kb, w2)
}

/// The structure map as an integer matrix: one 0/1 row per generator
/// (`a1+, a1-, a2+, ...`), one all-ones `⊤` row at the bottom, one column
/// per world.
#[derive(Debug, Clone)]
pub struct StructureMatrix {
    worlds: Vec<World>,
    /// `2n + 1` rows, last one is the `⊤` row.
    entries: Vec<Vec<BigInt>>,
}

impl StructureMatrix {
    /// Matrix over all worlds of the signature.
    pub fn new(kb: &KnowledgeBase) -> Self {
        Self::restricted(kb, kb.signature().worlds().collect())
    }

    /// Matrix over the given column worlds only.
    pub fn restricted(kb: &KnowledgeBase, worlds: Vec<World>) -> Self {
        let n = kb.len();
        let mut entries = vec![vec![BigInt::from(0); worlds.len()]; 2 * n + 1];
        for (col, &w) in worlds.iter().enumerate() {
            for i in 0..n {
                match kb.conditional(i).indicator(w, kb.signature()) {
                    Indicator::Verifies => entries[2 * i][col] = BigInt::from(1),
                    Indicator::Falsifies => entries[2 * i + 1][col] = BigInt::from(1),
                    Indicator::NotApplicable => {}
                }
            }
            entries[2 * n][col] = BigInt::from(1);
        }
        StructureMatrix { worlds, entries }
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// Generator rows only, or generator rows plus the `⊤` row.
    fn rows(&self, include_top: bool) -> &[Vec<BigInt>] {
        if include_top {
            &self.entries
        } else {
            &self.entries[..self.entries.len() - 1]
        }
    }
}

/// Canonical integer basis of the kernel of the structure homomorphism:
/// all formal products of worlds with neutral conditional structure,
/// additionally `⊤`-balanced when `include_top` is set.
///
/// The basis is the Hermite normal form of the kernel lattice of the
/// structure matrix, so the output is deterministic.
pub fn kernel_basis(kb: &KnowledgeBase, include_top: bool) -> Vec<WorldWord> {
    kernel_basis_restricted(kb, kb.signature().worlds().collect(), include_top)
}

/// Kernel basis over a subset of worlds (the words use only those worlds).
pub fn kernel_basis_restricted(
    kb: &KnowledgeBase,
    worlds: Vec<World>,
    include_top: bool,
) -> Vec<WorldWord> {
    let matrix = StructureMatrix::restricted(kb, worlds);
    let ncols = matrix.worlds().len();
    let kernel = integer_kernel(matrix.rows(include_top), ncols);
    kernel
        .into_iter()
        .map(|vector| {
            WorldWord::from_factors(vector.into_iter().enumerate().map(|(col, e)| {
                let e = i64::try_from(e).expect("kernel exponent exceeds i64");
                (matrix.worlds()[col], e)
            }))
        })
        .collect()
}

/// One `(world, structure)` row per world, in enumeration order.
pub fn structure_table(kb: &KnowledgeBase) -> Vec<(World, GroupWord)> {
    kb.signature().worlds().map(|w| (w, sigma(kb, w))).collect()
}
