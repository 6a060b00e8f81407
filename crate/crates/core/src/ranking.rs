//! Ordinal conditional functions: integer degrees of disbelief over worlds.
//!
//! An [`OCF`] maps every world to a rank in `N ∪ {∞}`, normalized so the
//! minimum finite rank is 0. Rank of a formula is the minimum over its
//! models, a conditional `(B|A)` is accepted when `AB` ranks strictly below
//! `A!B` (the Ramsey test), and revision by a proposition is full
//! conditionalization: shift the models of `A` down by `rank(A)` and
//! everything else to infinity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{eval, Conditional, Formula, KnowledgeBase, Signature, World, WorldSet};
use crate::structures::WorldWord;

/// A degree of disbelief: a non-negative integer or infinity.
///
/// `Finite` orders below `Infinite`; addition is absorbing at infinity; the
/// minimum over an empty set of ranks is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub const ZERO: Rank = Rank::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(v) => Some(v),
            Rank::Infinite => None,
        }
    }

    pub fn plus(self, other: Rank) -> Rank {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a + b),
            _ => Rank::Infinite,
        }
    }

    /// `self - other` for `other` finite and not above `self`; infinity stays
    /// infinite.
    fn minus(self, other: u64) -> Rank {
        match self {
            Rank::Finite(a) => Rank::Finite(a - other),
            Rank::Infinite => Rank::Infinite,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(v) => write!(f, "{v}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// An ordinal conditional function over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OCF {
    sig: Signature,
    ranks: Vec<Rank>,
}

impl OCF {
    /// Builds an OCF from per-world ranks in enumeration order, normalizing
    /// so the minimum finite rank is 0. Rejects the all-infinite function.
    pub fn new(sig: Signature, ranks: Vec<Rank>) -> Result<Self> {
        if ranks.len() != sig.world_count() {
            return Err(Error::InvalidOcf(format!(
                "expected {} ranks, got {}",
                sig.world_count(),
                ranks.len()
            )));
        }
        let min = ranks
            .iter()
            .filter_map(|r| r.finite())
            .min()
            .ok_or(Error::AllInfinite)?;
        let ranks = ranks.into_iter().map(|r| r.minus(min)).collect();
        Ok(OCF { sig, ranks })
    }

    /// The uniform OCF: every world has rank 0.
    pub fn uniform(sig: Signature) -> Self {
        let ranks = vec![Rank::ZERO; sig.world_count()];
        OCF { sig, ranks }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn rank(&self, w: World) -> Rank {
        self.ranks[w.index()]
    }

    /// Ranks in world enumeration order.
    pub fn ranks(&self) -> &[Rank] {
        &self.ranks
    }

    /// Worlds with finite rank, in enumeration order.
    pub fn finite_worlds(&self) -> Vec<World> {
        self.sig
            .worlds()
            .filter(|w| self.rank(*w).is_finite())
            .collect()
    }

    /// Rank of a formula: the minimum rank of its models, infinite for an
    /// unsatisfiable formula.
    pub fn rank_formula(&self, f: &Formula) -> Rank {
        self.sig
            .worlds()
            .filter(|w| eval(f, *w, &self.sig))
            .map(|w| self.rank(w))
            .min()
            .unwrap_or(Rank::Infinite)
    }

    /// Rank of a conditional, `rank(AB) - rank(A)`; errors when the
    /// antecedent has infinite rank.
    pub fn rank_conditional(&self, c: &Conditional) -> Result<Rank> {
        let ante = self.rank_formula(&c.antecedent);
        let Some(base) = ante.finite() else {
            return Err(Error::InfiniteAntecedent {
                label: c.label.clone().unwrap_or_else(|| "?".into()),
            });
        };
        let both = self.rank_formula(&Formula::and(c.antecedent.clone(), c.consequent.clone()));
        Ok(both.minus(base))
    }

    /// Ramsey test: `(B|A)` is accepted iff `rank(AB) < rank(A!B)`.
    pub fn accepts(&self, c: &Conditional) -> bool {
        let verified = self
            .sig
            .worlds()
            .filter(|w| c.indicator(*w, &self.sig) == crate::logic::Indicator::Verifies)
            .map(|w| self.rank(w))
            .min()
            .unwrap_or(Rank::Infinite);
        let falsified = self
            .sig
            .worlds()
            .filter(|w| c.indicator(*w, &self.sig) == crate::logic::Indicator::Falsifies)
            .map(|w| self.rank(w))
            .min()
            .unwrap_or(Rank::Infinite);
        verified < falsified
    }

    pub fn accepts_all(&self, kb: &KnowledgeBase) -> bool {
        kb.conditionals().iter().all(|c| self.accepts(c))
    }

    /// The worlds believed possible: those of rank 0.
    pub fn beliefs(&self) -> WorldSet {
        let mut s = WorldSet::empty(self.sig.world_count());
        for w in self.sig.worlds() {
            if self.rank(w) == Rank::ZERO {
                s.insert(w);
            }
        }
        s
    }

    /// Revision by a proposition: models of `f` shift down by `rank(f)`,
    /// all other worlds become infinite.
    pub fn conditionalize(&self, f: &Formula) -> Result<OCF> {
        let Some(base) = self.rank_formula(f).finite() else {
            return Err(Error::InfiniteCondition);
        };
        let ranks = self
            .sig
            .worlds()
            .map(|w| {
                if eval(f, w, &self.sig) {
                    self.rank(w).minus(base)
                } else {
                    Rank::Infinite
                }
            })
            .collect();
        OCF::new(self.sig.clone(), ranks)
    }

    /// Homomorphic extension to formal products of worlds:
    /// `Σ e_k · rank(w_k)`. `None` when the word touches an infinite world.
    pub fn eval_word(&self, word: &WorldWord) -> Option<i64> {
        let mut total = 0i64;
        for (w, e) in word.factors() {
            total += e * self.rank(w).finite()? as i64;
        }
        Some(total)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("OCF serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.wire()).expect("OCF serialization cannot fail")
    }

    fn wire(&self) -> OcfWire {
        OcfWire {
            signature: self.sig.atoms().to_vec(),
            ranks: self
                .sig
                .worlds()
                .map(|w| WorldRankWire {
                    world: self.sig.render_world(w),
                    rank: match self.rank(w) {
                        Rank::Finite(v) => RankWire::Finite(v),
                        Rank::Infinite => RankWire::Inf("inf".into()),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<OCF> {
        let wire: OcfWire = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let sig = Signature::new(wire.signature)?;
        let mut ranks = vec![None; sig.world_count()];
        for wr in wire.ranks {
            let w = sig.parse_world(&wr.world)?;
            let rank = match wr.rank {
                RankWire::Finite(v) => Rank::Finite(v),
                RankWire::Inf(s) if s == "inf" => Rank::Infinite,
                RankWire::Inf(s) => {
                    return Err(Error::InvalidOcf(format!("invalid rank `{s}`")));
                }
            };
            if ranks[w.index()].replace(rank).is_some() {
                return Err(Error::InvalidOcf(format!(
                    "world `{}` listed twice",
                    wr.world
                )));
            }
        }
        let ranks = ranks
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::InvalidOcf(format!(
                        "missing rank for world `{}`",
                        sig.render_world(World(i as u32))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OCF::new(sig, ranks)
    }
}

#[derive(Serialize, Deserialize)]
struct OcfWire {
    signature: Vec<String>,
    ranks: Vec<WorldRankWire>,
}

#[derive(Serialize, Deserialize)]
struct WorldRankWire {
    world: String,
    rank: RankWire,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RankWire {
    Finite(u64),
    Inf(String),
}

/// Per-world change from a prior to a posterior ranking: an integer where
/// the posterior is finite, infinity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeChange {
    sig: Signature,
    deltas: Vec<Option<i64>>,
}

impl RelativeChange {
    /// `None` encodes an infinite change (posterior infinite).
    pub fn delta(&self, w: World) -> Option<i64> {
        self.deltas[w.index()]
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// True when every finite delta is zero.
    pub fn is_zero(&self) -> bool {
        self.deltas.iter().flatten().all(|d| *d == 0)
    }
}

/// The relative change `posterior - prior`. The posterior must be
/// κ-consistent with the prior: no world may go from infinite back to
/// finite.
pub fn relative_change(prior: &OCF, posterior: &OCF) -> Result<RelativeChange> {
    if prior.signature() != posterior.signature() {
        return Err(Error::SignatureMismatch);
    }
    let sig = prior.signature().clone();
    let mut deltas = Vec::with_capacity(sig.world_count());
    for w in sig.worlds() {
        match (prior.rank(w), posterior.rank(w)) {
            (_, Rank::Infinite) => deltas.push(None),
            (Rank::Finite(p), Rank::Finite(q)) => deltas.push(Some(q as i64 - p as i64)),
            (Rank::Infinite, Rank::Finite(_)) => {
                return Err(Error::NotKappaConsistent {
                    world: sig.render_world(w),
                });
            }
        }
    }
    Ok(RelativeChange { sig, deltas })
}
