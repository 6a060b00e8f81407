//! Conditional indifference and the principle of conditional preservation.
//!
//! A ranking is indifferent with respect to a knowledge base when its value
//! on every world decomposes additively into one rational constant per
//! generator: `rank(w) = k0 + Σ k_i+ (w verifies i) + Σ k_i- (w falsifies i)`.
//! Deciding that is an exact rational solvability question, so no tolerance
//! parameter exists here. An independent cross-check evaluates the ranking's
//! homomorphic extension on the kernel of the structure map: indifference
//! holds exactly when it vanishes there.
//!
//! A revision satisfies the principle of conditional preservation when its
//! relative change function is indifferent in the same sense.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::solve_rational;
use crate::logic::{Indicator, KnowledgeBase, World};
use crate::ranking::{relative_change, Rank, OCF};
use crate::structures::{kernel_basis_restricted, sigma};

/// The constants of an additive decomposition: `kappa0`, one `plus` constant
/// per conditional (verification impact), one `minus` constant
/// (falsification impact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantVector {
    pub kappa0: BigRational,
    pub plus: Vec<BigRational>,
    pub minus: Vec<BigRational>,
}

impl ConstantVector {
    pub fn zero(n: usize) -> Self {
        ConstantVector {
            kappa0: BigRational::zero(),
            plus: vec![BigRational::zero(); n],
            minus: vec![BigRational::zero(); n],
        }
    }

    pub fn from_integers(kappa0: i64, plus: Vec<i64>, minus: Vec<i64>) -> Self {
        assert_eq!(plus.len(), minus.len());
        let q = |x: i64| BigRational::from(BigInt::from(x));
        ConstantVector {
            kappa0: q(kappa0),
            plus: plus.into_iter().map(q).collect(),
            minus: minus.into_iter().map(q).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// `minus` as plain integers, if integral (solver outputs always are).
    pub fn minus_integers(&self) -> Option<Vec<i64>> {
        self.minus.iter().map(rational_to_i64).collect()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "kappa0": rational_to_json(&self.kappa0),
            "plus": self.plus.iter().map(rational_to_json).collect::<Vec<_>>(),
            "minus": self.minus.iter().map(rational_to_json).collect::<Vec<_>>(),
        })
    }
}

fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if q.denom().is_one() {
        i64::try_from(q.numer()).ok()
    } else {
        None
    }
}

fn rational_to_json(q: &BigRational) -> Value {
    match rational_to_i64(q) {
        Some(v) => json!(v),
        None => json!(q.to_string()),
    }
}

/// Searches for a constant vector reproducing `k` on every finite-rank world
/// by exact rational elimination; `None` when the system is unsolvable or
/// some antecedent has infinite rank. Infinite worlds do not enter the
/// system. The result is one witness (free variables are set to zero), not a
/// unique decomposition.
pub fn decompose(k: &OCF, kb: &KnowledgeBase) -> Option<ConstantVector> {
    if !antecedents_finite(k, kb) {
        return None;
    }
    solve_additive_system(kb, |w| k.rank(w).finite().map(|r| r as i64))
}

/// Solves `value(w) = k0 + Σ plus_i + Σ minus_i` over the worlds where
/// `value` is defined. Unknowns are ordered `k0, minus.., plus..` so the
/// canonical solution (free variables zero) prefers pure falsification
/// impacts, matching the construction heuristic.
fn solve_additive_system(
    kb: &KnowledgeBase,
    value: impl Fn(World) -> Option<i64>,
) -> Option<ConstantVector> {
    let n = kb.len();
    let sig = kb.signature();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for w in sig.worlds() {
        let Some(v) = value(w) else {
            continue;
        };
        let mut row = vec![BigRational::zero(); 1 + 2 * n];
        row[0] = BigRational::one();
        for (i, c) in kb.conditionals().iter().enumerate() {
            match c.indicator(w, sig) {
                Indicator::Falsifies => row[1 + i] = BigRational::one(),
                Indicator::Verifies => row[1 + n + i] = BigRational::one(),
                Indicator::NotApplicable => {}
            }
        }
        rows.push(row);
        rhs.push(BigRational::from(BigInt::from(v)));
    }
    let solution = solve_rational(rows, rhs)?;
    Some(ConstantVector {
        kappa0: solution[0].clone(),
        minus: solution[1..1 + n].to_vec(),
        plus: solution[1 + n..].to_vec(),
    })
}

fn antecedents_finite(k: &OCF, kb: &KnowledgeBase) -> bool {
    kb.conditionals()
        .iter()
        .all(|c| k.rank_formula(&c.antecedent).is_finite())
}

/// The infinite-world condition of conditional indifference: every world of
/// infinite rank is pinned by some conditional — the world verifies or
/// falsifies it, and every world doing the same is infinite too.
pub fn infinity_condition(k: &OCF, kb: &KnowledgeBase) -> bool {
    infinity_condition_with_escape(k, kb, |_| false)
}

fn infinity_condition_with_escape(
    k: &OCF,
    kb: &KnowledgeBase,
    escape: impl Fn(World) -> bool,
) -> bool {
    let sig = kb.signature();
    // per conditional: are all verifying / all falsifying worlds infinite?
    let pinned: Vec<(bool, bool)> = kb
        .conditionals()
        .iter()
        .map(|c| {
            let mut all_v = true;
            let mut all_f = true;
            for w in sig.worlds() {
                match c.indicator(w, sig) {
                    Indicator::Verifies => all_v &= !k.rank(w).is_finite(),
                    Indicator::Falsifies => all_f &= !k.rank(w).is_finite(),
                    Indicator::NotApplicable => {}
                }
            }
            (all_v, all_f)
        })
        .collect();
    sig.worlds().filter(|w| !k.rank(*w).is_finite()).all(|w| {
        escape(w)
            || kb
                .conditionals()
                .iter()
                .enumerate()
                .any(|(i, c)| match c.indicator(w, sig) {
                    Indicator::Verifies => pinned[i].0,
                    Indicator::Falsifies => pinned[i].1,
                    Indicator::NotApplicable => false,
                })
    })
}

/// Conditional indifference of `k` with respect to `kb`: the infinite-world
/// condition holds, every antecedent has finite rank, and the additive
/// decomposition exists.
pub fn is_indifferent(k: &OCF, kb: &KnowledgeBase) -> bool {
    infinity_condition(k, kb) && antecedents_finite(k, kb) && decompose(k, kb).is_some()
}

/// Independent cross-check of the decomposition: the homomorphic extension
/// of `k` must vanish on the canonical kernel basis of the structure map,
/// restricted to finite-rank worlds and intersected with the `⊤`-balanced
/// words.
pub fn kernel_vanishing_check(k: &OCF, kb: &KnowledgeBase) -> bool {
    let basis = kernel_basis_restricted(kb, k.finite_worlds(), true);
    basis.iter().all(|word| k.eval_word(word) == Some(0))
}

/// Revision indifference: the posterior is κ-consistent with the prior, its
/// infinite worlds are pinned (or were already infinite), and the relative
/// change decomposes additively on the finite worlds.
pub fn is_revision_indifferent(prior: &OCF, posterior: &OCF, kb: &KnowledgeBase) -> bool {
    assert_eq!(
        prior.signature(),
        posterior.signature(),
        "prior and posterior must share a signature"
    );
    let Ok(change) = relative_change(prior, posterior) else {
        return false; // not κ-consistent
    };
    let infinite_in_prior = |w: World| !prior.rank(w).is_finite();
    if !infinity_condition_with_escape(posterior, kb, infinite_in_prior) {
        return false;
    }
    delta_decompose(&change, posterior, kb).is_some()
}

/// Additive decomposition of a relative change on the posterior-finite worlds.
fn delta_decompose(
    change: &crate::ranking::RelativeChange,
    posterior: &OCF,
    kb: &KnowledgeBase,
) -> Option<ConstantVector> {
    solve_additive_system(kb, |w| {
        posterior
            .rank(w)
            .is_finite()
            .then(|| change.delta(w).expect("finite posterior has finite delta"))
    })
}

/// The principle of conditional preservation: revision indifference with the
/// presupposition enforced that the posterior keeps every antecedent at
/// finite rank.
pub fn satisfies_conditional_preservation(
    prior: &OCF,
    posterior: &OCF,
    kb: &KnowledgeBase,
) -> Result<bool> {
    for c in kb.conditionals() {
        if !posterior.rank_formula(&c.antecedent).is_finite() {
            return Err(Error::PresuppositionViolated {
                label: c.label.clone().unwrap_or_else(|| "?".into()),
            });
        }
    }
    Ok(is_revision_indifferent(prior, posterior, kb))
}

/// Why a ranking fails (or how it passes) the indifference check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Some antecedent has infinite rank under the ranking.
    InfiniteAntecedent { label: String },
    /// An infinite-rank world not pinned by any conditional.
    UnpinnedInfiniteWorld { world: String },
    /// Two worlds with identical conditional structure but different ranks.
    WorldPair {
        world1: String,
        world2: String,
        rank1: Rank,
        rank2: Rank,
    },
    /// A kernel element on which the ranking's extension does not vanish.
    KernelElement { element: String, value: i64 },
}

impl Witness {
    pub fn to_json_value(&self) -> Value {
        match self {
            Witness::InfiniteAntecedent { label } => {
                json!({"kind": "infinite_antecedent", "label": label})
            }
            Witness::UnpinnedInfiniteWorld { world } => {
                json!({"kind": "unpinned_infinite_world", "world": world})
            }
            Witness::WorldPair {
                world1,
                world2,
                rank1,
                rank2,
            } => json!({
                "kind": "world_pair",
                "world1": world1,
                "world2": world2,
                "rank1": rank1.to_string(),
                "rank2": rank2.to_string(),
            }),
            Witness::KernelElement { element, value } => {
                json!({"kind": "kernel_element", "element": element, "value": value})
            }
        }
    }
}

/// Full indifference verdict: the boolean, the constants on success, and a
/// concrete witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndifferenceVerdict {
    pub indifferent: bool,
    pub constants: Option<ConstantVector>,
    pub witness: Option<Witness>,
}

impl IndifferenceVerdict {
    pub fn to_json_value(&self) -> Value {
        json!({
            "indifferent": self.indifferent,
            "constants": self.constants.as_ref().map(|c| c.to_json_value()),
            "witness": self.witness.as_ref().map(|w| w.to_json_value()),
        })
    }
}

/// Decides indifference and produces a witness explaining a failure:
/// an infinite antecedent, an unpinned infinite world, a pair of
/// structure-equal worlds with different ranks, or a kernel element with a
/// nonzero value under the ranking's extension.
pub fn indifference_verdict(k: &OCF, kb: &KnowledgeBase) -> IndifferenceVerdict {
    let sig = kb.signature();
    for c in kb.conditionals() {
        if !k.rank_formula(&c.antecedent).is_finite() {
            return IndifferenceVerdict {
                indifferent: false,
                constants: None,
                witness: Some(Witness::InfiniteAntecedent {
                    label: c.label.clone().unwrap_or_else(|| "?".into()),
                }),
            };
        }
    }
    if !infinity_condition(k, kb) {
        let world = sig
            .worlds()
            .find(|w| !k.rank(*w).is_finite() && !world_is_pinned(k, kb, *w))
            .expect("a violating world exists");
        return IndifferenceVerdict {
            indifferent: false,
            constants: None,
            witness: Some(Witness::UnpinnedInfiniteWorld {
                world: sig.render_world(world),
            }),
        };
    }
    if let Some(cv) = decompose(k, kb) {
        return IndifferenceVerdict {
            indifferent: true,
            constants: Some(cv),
            witness: None,
        };
    }
    // cheap witness first: two structure-equal worlds with different ranks
    let worlds = k.finite_worlds();
    for (a, &w1) in worlds.iter().enumerate() {
        for &w2 in &worlds[a + 1..] {
            if sigma(kb, w1) == sigma(kb, w2) && k.rank(w1) != k.rank(w2) {
                return IndifferenceVerdict {
                    indifferent: false,
                    constants: None,
                    witness: Some(Witness::WorldPair {
                        world1: sig.render_world(w1),
                        world2: sig.render_world(w2),
                        rank1: k.rank(w1),
                        rank2: k.rank(w2),
                    }),
                };
            }
        }
    }
    let witness = kernel_basis_restricted(kb, worlds, true)
        .into_iter()
        .find_map(|word| match k.eval_word(&word) {
            Some(0) => None,
            Some(v) => Some(Witness::KernelElement {
                element: word.render(sig),
                value: v,
            }),
            None => None,
        })
        .expect("an unsolvable system has a nonvanishing kernel element");
    IndifferenceVerdict {
        indifferent: false,
        constants: None,
        witness: Some(witness),
    }
}

fn world_is_pinned(k: &OCF, kb: &KnowledgeBase, w: World) -> bool {
    let sig = kb.signature();
    kb.conditionals().iter().any(|c| match c.indicator(w, sig) {
        Indicator::NotApplicable => false,
        ind => sig
            .worlds()
            .filter(|v| c.indicator(*v, sig) == ind)
            .all(|v| !k.rank(v).is_finite()),
    })
}
