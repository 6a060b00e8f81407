//! Shared fixtures: the example bases and their published rankings.
#![allow(dead_code)]

use crank::logic::{parse_kb, KnowledgeBase, World};
use crank::ranking::{Rank, OCF};

pub fn penguin_kb() -> KnowledgeBase {
    parse_kb(include_str!("../../../../kb/penguin.ckb")).unwrap()
}

pub fn swedes_kb() -> KnowledgeBase {
    parse_kb(include_str!("../../../../kb/swedes.ckb")).unwrap()
}

pub fn nonmincore_kb() -> KnowledgeBase {
    parse_kb(include_str!("../../../../kb/nonmincore.ckb")).unwrap()
}

/// System-Z ranks of the penguin base, world enumeration order.
pub const PENGUIN_KAPPA_Z: [u64; 32] = [
    2, 2, 2, 2, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, //
    0, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0,
];

/// Additive ranks derived from the Z-ranks, world enumeration order.
pub const PENGUIN_KAPPA_Z_C: [u64; 32] = [
    2, 3, 3, 4, 1, 1, 2, 2, 4, 5, 4, 5, 2, 2, 2, 2, //
    0, 1, 1, 2, 1, 1, 2, 2, 0, 1, 0, 1, 0, 0, 0, 0,
];

/// Rankings for the non-minimal-core base: minus constants (1,1,0) and
/// (1,1,1), world enumeration order over a, b, c.
pub const NONMINCORE_KAPPA: [u64; 8] = [0, 1, 1, 1, 0, 1, 0, 0];
pub const NONMINCORE_KAPPA_1: [u64; 8] = [0, 2, 1, 2, 0, 1, 0, 0];

pub fn ocf_from_ranks(kb: &KnowledgeBase, ranks: &[u64]) -> OCF {
    OCF::new(
        kb.signature().clone(),
        ranks.iter().map(|&r| Rank::Finite(r)).collect(),
    )
    .unwrap()
}

pub fn world(kb: &KnowledgeBase, name: &str) -> World {
    kb.signature().parse_world(name).unwrap()
}
