//! Propositional language, worlds, conditionals, and knowledge bases.
//!
//! A [`Signature`] fixes a finite, ordered list of atoms. Worlds are the
//! complete interpretations of that signature, totally ordered so that the
//! all-true world comes first and the last atom toggles fastest. Formulas are
//! plain syntax trees; conditionals `(B|A)` pair a consequent with an
//! antecedent. Everything here is immutable and model-set based: the two
//! inter-conditional relations (subconditional, perpendicular) are decided by
//! world enumeration, not syntactically.

mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::{parse_conditional, parse_formula, parse_kb, parse_kb_with_cap};

/// Default upper bound on the number of atoms (2^24 worlds).
pub const DEFAULT_ATOM_CAP: usize = 24;

/// Hard bound: world indices must fit comfortably in a `u32` and sets in memory.
const MAX_ATOM_CAP: usize = 30;

/// A finite, ordered alphabet of propositional atoms.
///
/// The order is significant: it fixes world enumeration and rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    atoms: Vec<String>,
}

impl Signature {
    /// Builds a signature with the default atom cap.
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_cap(atoms, DEFAULT_ATOM_CAP)
    }

    /// Builds a signature with an explicit atom cap (at most 30).
    pub fn with_cap<I, S>(atoms: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::EmptySignature);
        }
        let cap = cap.min(MAX_ATOM_CAP);
        if atoms.len() > cap {
            return Err(Error::TooManyAtoms {
                count: atoms.len(),
                cap,
            });
        }
        for (i, a) in atoms.iter().enumerate() {
            if !is_valid_atom_name(a) {
                return Err(Error::InvalidAtomName(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(Error::DuplicateAtom(a.clone()));
            }
        }
        Ok(Signature { atoms })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_name(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Number of worlds, `2^atom_count`.
    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    /// All worlds in enumeration order (all-true first, last atom fastest).
    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_count() as u32).map(World)
    }

    /// The world with the given truth value per atom, in signature order.
    pub fn world(&self, values: &[bool]) -> World {
        assert_eq!(values.len(), self.atoms.len(), "wrong assignment length");
        let n = self.atoms.len();
        let mut idx = 0u32;
        for (k, &v) in values.iter().enumerate() {
            if !v {
                idx |= 1 << (n - 1 - k);
            }
        }
        World(idx)
    }

    /// Renders a world: atoms in order, `!` before each false one.
    pub fn render_world(&self, w: World) -> String {
        let mut out = String::new();
        for k in 0..self.atoms.len() {
            if !w.truth(k, self.atoms.len()) {
                out.push('!');
            }
            out.push_str(&self.atoms[k]);
        }
        out
    }

    /// Parses the rendering produced by [`Signature::render_world`].
    pub fn parse_world(&self, text: &str) -> Result<World> {
        let mut rest = text;
        let mut values = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            let truth = if let Some(r) = rest.strip_prefix('!') {
                rest = r;
                false
            } else {
                true
            };
            rest = rest.strip_prefix(atom.as_str()).ok_or_else(|| {
                Error::InvalidOcf(format!("world `{text}` does not match the signature"))
            })?;
            values.push(truth);
        }
        if !rest.is_empty() {
            return Err(Error::InvalidOcf(format!(
                "trailing input in world `{text}`"
            )));
        }
        Ok(self.world(&values))
    }
}

fn is_valid_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    first.is_ascii_lowercase()
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && s != "top"
        && s != "bot"
}

/// One propositional interpretation, identified by its enumeration index.
///
/// Atom 0 is the most significant position; a set bit means the atom is
/// false, so index 0 is the all-true world and the all-false world comes
/// last. Comparing worlds compares their enumeration indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub(crate) u32);

impl World {
    /// The world with the given enumeration index; only meaningful below the
    /// signature's world count.
    pub fn from_index(index: usize) -> World {
        World(index as u32)
    }

    /// Enumeration index of this world.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Truth value of atom `k` in a signature of `n` atoms.
    pub fn truth(self, k: usize, n: usize) -> bool {
        debug_assert!(k < n);
        (self.0 >> (n - 1 - k)) & 1 == 0
    }
}

/// A set of worlds over one signature, stored as a bitset in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSet {
    blocks: Vec<u64>,
    len: usize,
}

impl WorldSet {
    pub fn empty(world_count: usize) -> Self {
        WorldSet {
            blocks: vec![0; world_count.div_ceil(64)],
            len: world_count,
        }
    }

    pub fn full(world_count: usize) -> Self {
        let mut s = Self::empty(world_count);
        for (i, b) in s.blocks.iter_mut().enumerate() {
            *b = !0u64;
            let hi = (i + 1) * 64;
            if hi > world_count {
                *b >>= hi - world_count;
            }
        }
        s
    }

    pub fn world_count(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, w: World) {
        let i = w.index();
        debug_assert!(i < self.len);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, w: World) -> bool {
        let i = w.index();
        i < self.len && self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn card(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
            len: self.len,
        }
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = WorldSet {
            blocks: self.blocks.iter().map(|b| !b).collect(),
            len: self.len,
        };
        // mask off the bits past the last world
        let last = self.len.div_ceil(64);
        if last > 0 {
            let hi = last * 64;
            if hi > self.len {
                out.blocks[last - 1] &= !0u64 >> (hi - self.len);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.len as u32)
            .map(World)
            .filter(move |w| self.contains(*w))
    }
}

/// Propositional formula over a signature; atoms are stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bottom,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(index: usize) -> Self {
        Formula::Atom(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of all given formulas; `Top` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(fs: I) -> Self {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Renders the formula in the concrete grammar (`!`, `,`, `;`, `top`, `bot`).
    pub fn render(&self, sig: &Signature) -> String {
        self.render_prec(sig, 0)
    }

    // prec: 0 = disjunction context, 1 = conjunction, 2 = unary
    fn render_prec(&self, sig: &Signature, prec: u8) -> String {
        match self {
            Formula::Top => "top".into(),
            Formula::Bottom => "bot".into(),
            Formula::Atom(k) => sig.atom_name(*k).into(),
            Formula::Not(f) => format!("!{}", f.render_prec(sig, 2)),
            Formula::And(a, b) => {
                let s = format!("{}, {}", a.render_prec(sig, 1), b.render_prec(sig, 1));
                if prec >= 2 {
                    format!("({s})")
                } else {
                    s
                }
            }
            Formula::Or(a, b) => {
                let s = format!("{}; {}", a.render_prec(sig, 0), b.render_prec(sig, 0));
                if prec >= 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }
}

/// Classical truth of `f` in world `w`.
pub fn eval(f: &Formula, w: World, sig: &Signature) -> bool {
    let n = sig.atom_count();
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Atom(k) => w.truth(*k, n),
        Formula::Not(g) => !eval(g, w, sig),
        Formula::And(a, b) => eval(a, w, sig) && eval(b, w, sig),
        Formula::Or(a, b) => eval(a, w, sig) || eval(b, w, sig),
    }
}

/// Exact set of worlds satisfying `f`.
pub fn models(f: &Formula, sig: &Signature) -> WorldSet {
    match f {
        Formula::Top => WorldSet::full(sig.world_count()),
        Formula::Bottom => WorldSet::empty(sig.world_count()),
        Formula::Atom(k) => {
            let mut s = WorldSet::empty(sig.world_count());
            for w in sig.worlds() {
                if w.truth(*k, sig.atom_count()) {
                    s.insert(w);
                }
            }
            s
        }
        Formula::Not(g) => models(g, sig).complement(),
        Formula::And(a, b) => models(a, sig).intersection(&models(b, sig)),
        Formula::Or(a, b) => models(a, sig).union(&models(b, sig)),
    }
}

pub fn is_satisfiable(f: &Formula, sig: &Signature) -> bool {
    !models(f, sig).is_empty()
}

/// How a world relates to a conditional `(B|A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    /// `w |= A B`
    Verifies,
    /// `w |= A !B`
    Falsifies,
    /// `w |= !A`
    NotApplicable,
}

/// A conditional `(B|A)`: "if A then B".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditional {
    pub antecedent: Formula,
    pub consequent: Formula,
    pub label: Option<String>,
}

impl Conditional {
    pub fn new(consequent: Formula, antecedent: Formula) -> Self {
        Conditional {
            antecedent,
            consequent,
            label: None,
        }
    }

    pub fn labeled(consequent: Formula, antecedent: Formula, label: impl Into<String>) -> Self {
        Conditional {
            antecedent,
            consequent,
            label: Some(label.into()),
        }
    }

    /// Indicator value of this conditional on `w`.
    pub fn indicator(&self, w: World, sig: &Signature) -> Indicator {
        if !eval(&self.antecedent, w, sig) {
            Indicator::NotApplicable
        } else if eval(&self.consequent, w, sig) {
            Indicator::Verifies
        } else {
            Indicator::Falsifies
        }
    }

    /// Worlds satisfying `A B`.
    pub fn verifying_set(&self, sig: &Signature) -> WorldSet {
        let mut s = WorldSet::empty(sig.world_count());
        for w in sig.worlds() {
            if self.indicator(w, sig) == Indicator::Verifies {
                s.insert(w);
            }
        }
        s
    }

    /// Worlds satisfying `A !B`.
    pub fn falsifying_set(&self, sig: &Signature) -> WorldSet {
        let mut s = WorldSet::empty(sig.world_count());
        for w in sig.worlds() {
            if self.indicator(w, sig) == Indicator::Falsifies {
                s.insert(w);
            }
        }
        s
    }

    /// The same conditional with its consequent negated, `(!B|A)`.
    pub fn negated(&self) -> Conditional {
        Conditional {
            antecedent: self.antecedent.clone(),
            consequent: Formula::not(self.consequent.clone()),
            label: None,
        }
    }

    pub fn render(&self, sig: &Signature) -> String {
        format!(
            "({} | {})",
            self.consequent.render(sig),
            self.antecedent.render(sig)
        )
    }
}

/// `d ⊑ c`: every world verifying `d` verifies `c`, and every world
/// falsifying `d` falsifies `c`. Decided semantically over the signature.
pub fn is_subconditional(d: &Conditional, c: &Conditional, sig: &Signature) -> bool {
    sig.worlds().all(|w| match d.indicator(w, sig) {
        Indicator::Verifies => c.indicator(w, sig) == Indicator::Verifies,
        Indicator::Falsifies => c.indicator(w, sig) == Indicator::Falsifies,
        Indicator::NotApplicable => true,
    })
}

/// `d ⊥ c`: `c` behaves uniformly on all worlds where `d` applies, i.e.
/// the antecedent of `d` entails `A B`, `A !B`, or `!A` for `c = (B|A)`.
pub fn is_perpendicular(d: &Conditional, c: &Conditional, sig: &Signature) -> bool {
    let mut seen = [false; 3];
    for w in sig.worlds() {
        if eval(&d.antecedent, w, sig) {
            seen[match c.indicator(w, sig) {
                Indicator::Verifies => 0,
                Indicator::Falsifies => 1,
                Indicator::NotApplicable => 2,
            }] = true;
        }
    }
    seen.iter().filter(|s| **s).count() <= 1
}

/// An ordered list of conditionals over one signature.
///
/// The position of a conditional is its stable index `i`, the subscript of
/// the group generators associated with it. Construction rejects
/// unsatisfiable antecedents and assigns `r<k>` labels to unlabeled rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    signature: Signature,
    conditionals: Vec<Conditional>,
}

impl KnowledgeBase {
    pub fn new(signature: Signature, conditionals: Vec<Conditional>) -> Result<Self> {
        let mut conditionals = conditionals;
        for (i, c) in conditionals.iter_mut().enumerate() {
            if c.label.is_none() {
                c.label = Some(format!("r{}", i + 1));
            }
        }
        for (i, c) in conditionals.iter().enumerate() {
            let label = c.label.clone().unwrap();
            if conditionals[..i]
                .iter()
                .any(|p| p.label.as_deref() == c.label.as_deref())
            {
                return Err(Error::DuplicateLabel(label));
            }
            if !is_satisfiable(&c.antecedent, &signature) {
                return Err(Error::UnsatisfiableAntecedent { label });
            }
        }
        Ok(KnowledgeBase {
            signature,
            conditionals,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn conditionals(&self) -> &[Conditional] {
        &self.conditionals
    }

    pub fn len(&self) -> usize {
        self.conditionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditionals.is_empty()
    }

    pub fn conditional(&self, i: usize) -> &Conditional {
        &self.conditionals[i]
    }

    pub fn label(&self, i: usize) -> &str {
        self.conditionals[i].label.as_deref().unwrap_or("?")
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indicator::Verifies => write!(f, "verifies"),
            Indicator::Falsifies => write!(f, "falsifies"),
            Indicator::NotApplicable => write!(f, "not applicable"),
        }
    }
}
