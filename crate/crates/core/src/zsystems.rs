//! System-Z and system-Z*.
//!
//! System-Z layers a consistent knowledge base by tolerance: layer 0 holds
//! the conditionals tolerated by the whole base, and each following layer is
//! computed on the remainder. The Z-rank of a conditional is its layer
//! index; a world ranks 0 when it falsifies nothing and otherwise one above
//! the highest Z-rank it falsifies. Replacing that maximum by a sum turns
//! the Z-ranks into impact constants and yields a ranking that is additive
//! in the falsified conditionals. System-Z* instead derives per-conditional
//! ranks from a balance equation and sums those; the equation is solvable in
//! positive integers only for minimal-core bases.

use crate::error::{Error, Result};
use crate::logic::{KnowledgeBase, World};
use crate::ranking::{Rank, OCF};

/// Tolerance layering of a consistent knowledge base. `z_rank(i)` is the
/// layer index of conditional `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TolerancePartition {
    layers: Vec<Vec<usize>>,
    z: Vec<usize>,
}

impl TolerancePartition {
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn z_rank(&self, i: usize) -> usize {
        self.z[i]
    }

    /// Z-ranks by conditional index.
    pub fn z_ranks(&self) -> &[usize] {
        &self.z
    }

    pub fn max_layer(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }
}

/// Greedy tolerance layering; `None` exactly when the base is inconsistent
/// (some nonempty remainder tolerates none of its members).
pub fn tolerance_partition(kb: &KnowledgeBase) -> Option<TolerancePartition> {
    let sig = kb.signature();
    let n = kb.len();
    let verifying: Vec<_> = kb
        .conditionals()
        .iter()
        .map(|c| c.verifying_set(sig))
        .collect();
    let falsifying: Vec<_> = kb
        .conditionals()
        .iter()
        .map(|c| c.falsifying_set(sig))
        .collect();

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut layers = Vec::new();
    let mut z = vec![0usize; n];
    while !remaining.is_empty() {
        let mut forbidden = crate::logic::WorldSet::empty(sig.world_count());
        for &j in &remaining {
            forbidden = forbidden.union(&falsifying[j]);
        }
        let allowed = forbidden.complement();
        let layer: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !verifying[i].intersection(&allowed).is_empty())
            .collect();
        if layer.is_empty() {
            return None;
        }
        for &i in &layer {
            z[i] = layers.len();
        }
        remaining.retain(|i| !layer.contains(i));
        layers.push(layer);
    }
    Some(TolerancePartition { layers, z })
}

fn falsified_indices(kb: &KnowledgeBase, w: World) -> Vec<usize> {
    let sig = kb.signature();
    (0..kb.len())
        .filter(|&i| kb.conditional(i).indicator(w, sig) == crate::logic::Indicator::Falsifies)
        .collect()
}

/// The system-Z ranking: 0 on worlds falsifying nothing, otherwise one above
/// the maximum Z-rank among the falsified conditionals.
pub fn kappa_z(kb: &KnowledgeBase) -> Result<OCF> {
    let partition = tolerance_partition(kb).ok_or(Error::InconsistentKb)?;
    let sig = kb.signature();
    let ranks = sig
        .worlds()
        .map(|w| {
            let falsified = falsified_indices(kb, w);
            match falsified.iter().map(|&i| partition.z_rank(i)).max() {
                None => Rank::ZERO,
                Some(m) => Rank::Finite(1 + m as u64),
            }
        })
        .collect();
    OCF::new(sig.clone(), ranks)
}

/// The additive ranking derived from the Z-ranks: the sum of `Z(r_i) + 1`
/// over the falsified conditionals.
pub fn kappa_z_c(kb: &KnowledgeBase) -> Result<OCF> {
    let partition = tolerance_partition(kb).ok_or(Error::InconsistentKb)?;
    let sig = kb.signature();
    let ranks = sig
        .worlds()
        .map(|w| {
            let total: u64 = falsified_indices(kb, w)
                .iter()
                .map(|&i| partition.z_rank(i) as u64 + 1)
                .sum();
            Rank::Finite(total)
        })
        .collect();
    OCF::new(sig.clone(), ranks)
}

/// Per-conditional Z*-ranks, positive integers satisfying the balance
/// equation exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZStarRanks {
    ranks: Vec<u64>,
}

impl ZStarRanks {
    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> u64 {
        self.ranks[i]
    }
}

/// Solves the Z* balance equation
/// `Z*(r_i) + min over falsifiers of Σ_{j≠i} Z*(r_j) = 1 + min over
/// verifiers of Σ_{j≠i} Z*(r_j)` by fixed-point iteration from all-ones.
/// Returns `None` when no positive integer solution is reached within the
/// cap — in particular for bases that are not minimal-core.
pub fn z_star(kb: &KnowledgeBase) -> Result<Option<ZStarRanks>> {
    let partition = tolerance_partition(kb).ok_or(Error::InconsistentKb)?;
    let n = kb.len();
    if n == 0 {
        return Ok(Some(ZStarRanks { ranks: Vec::new() }));
    }
    let sig = kb.signature();
    let verifying: Vec<Vec<Vec<usize>>> = kb
        .conditionals()
        .iter()
        .map(|c| {
            c.verifying_set(sig)
                .iter()
                .map(|w| falsified_indices(kb, w))
                .collect()
        })
        .collect();
    let falsifying: Vec<Vec<Vec<usize>>> = kb
        .conditionals()
        .iter()
        .map(|c| {
            c.falsifying_set(sig)
                .iter()
                .map(|w| falsified_indices(kb, w))
                .collect()
        })
        .collect();
    if verifying.iter().any(Vec::is_empty) || falsifying.iter().any(Vec::is_empty) {
        // the balance equation needs both world sets; degenerate rules have none
        return Ok(None);
    }

    let side_sum = |falsified: &[usize], i: usize, x: &[i64]| -> i64 {
        falsified.iter().filter(|&&j| j != i).map(|&j| x[j]).sum()
    };
    let mut x = vec![1i64; n];
    let cap = 10 * n * (partition.max_layer() + 2);
    let mut steps = 0usize;
    loop {
        let mut changed = false;
        for i in 0..n {
            let min_conf = verifying[i]
                .iter()
                .map(|f| side_sum(f, i, &x))
                .min()
                .unwrap();
            let min_ref = falsifying[i]
                .iter()
                .map(|f| side_sum(f, i, &x))
                .min()
                .unwrap();
            let next = 1 + min_conf - min_ref;
            if next != x[i] {
                x[i] = next;
                changed = true;
            }
            steps += 1;
        }
        if !changed {
            break;
        }
        if steps >= cap {
            return Ok(None);
        }
    }
    if x.iter().all(|&v| v >= 1) {
        Ok(Some(ZStarRanks {
            ranks: x.into_iter().map(|v| v as u64).collect(),
        }))
    } else {
        Ok(None)
    }
}

/// The system-Z* ranking: the sum of Z*-ranks over the falsified
/// conditionals. `None` when no Z*-ranks exist.
pub fn kappa_star(kb: &KnowledgeBase) -> Result<Option<OCF>> {
    let Some(zs) = z_star(kb)? else {
        return Ok(None);
    };
    let sig = kb.signature();
    let ranks = sig
        .worlds()
        .map(|w| {
            let total: u64 = falsified_indices(kb, w).iter().map(|&i| zs.rank(i)).sum();
            Rank::Finite(total)
        })
        .collect();
    OCF::new(sig.clone(), ranks).map(Some)
}

/// Whether the base is minimal-core (the Z* equation has a solution), with a
/// structural diagnosis when it is not: a conditional refuted only by worlds
/// that also refute other rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalCoreReport {
    pub minimal_core: bool,
    /// Label of a diagnosed conditional, when one exists.
    pub witness: Option<String>,
}

pub fn minimal_core(kb: &KnowledgeBase) -> MinimalCoreReport {
    match z_star(kb) {
        Ok(Some(_)) => MinimalCoreReport {
            minimal_core: true,
            witness: None,
        },
        Ok(None) => MinimalCoreReport {
            minimal_core: false,
            witness: structural_witness(kb),
        },
        Err(_) => MinimalCoreReport {
            minimal_core: false,
            witness: None,
        },
    }
}

pub fn is_minimal_core(kb: &KnowledgeBase) -> bool {
    minimal_core(kb).minimal_core
}

/// First conditional whose falsifiers all falsify some other rule too (or
/// that has no falsifiers at all).
fn structural_witness(kb: &KnowledgeBase) -> Option<String> {
    let sig = kb.signature();
    (0..kb.len())
        .find(|&i| {
            kb.conditional(i)
                .falsifying_set(sig)
                .iter()
                .all(|w| falsified_indices(kb, w).iter().any(|&j| j != i))
        })
        .map(|i| kb.label(i).to_string())
}
