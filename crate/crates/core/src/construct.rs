//! Construction of c-representations and c-revisions.
//!
//! The acceptance condition for conditional `i` under an additive ranking is
//! a strict inequality between two world minima. With all verification
//! impacts pinned to zero, solving the system means choosing one
//! non-negative integer per conditional, and a fixed-point sweep over the
//! base usually reaches the componentwise least choice. The sweep is not
//! guaranteed to converge (the right-hand side is not monotone), so a capped
//! iteration backed by bounded exhaustive search decides the remaining
//! cases; cap exhaustion means "no solution found", never "no solution
//! exists". A brute-force searcher doubles as the test oracle for
//! minimality.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::indifference::ConstantVector;
use crate::logic::{Indicator, KnowledgeBase, World};
use crate::ranking::{Rank, OCF};
use crate::zsystems::tolerance_partition;

/// How the impact constants are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    /// Minus constants at least 0.
    #[default]
    NonNegative,
    /// Minus constants at least 1, protecting every conditional's influence
    /// against numerical cancellation.
    StrictlyPositive,
    /// Minus constants fixed to `Z(r_i) + 1`; no iteration.
    FromZRanks,
}

impl SolverMode {
    fn lower_bound(self) -> i64 {
        match self {
            SolverMode::StrictlyPositive => 1,
            _ => 0,
        }
    }
}

/// Options for the constant solver.
#[derive(Debug, Clone, Default)]
pub struct SolverOptions {
    pub mode: SolverMode,
    /// Cap on single-conditional update steps; default `10 * n * (n + 1)`.
    pub iteration_cap: Option<usize>,
    /// Prior ranking; uniform when absent.
    pub prior: Option<OCF>,
}

pub fn default_iteration_cap(n: usize) -> usize {
    10 * n * (n + 1)
}

/// Composes a ranking from a prior and impact constants:
/// `prior(w) + kappa0 + Σ plus_i (w verifies i) + Σ minus_i (w falsifies i)`,
/// with `kappa0` overridden so the minimum finite rank is 0 and infinity
/// absorbing. Errors when some resulting rank is not an integer.
pub fn compose(prior: &OCF, cv: &ConstantVector, kb: &KnowledgeBase) -> Result<OCF> {
    assert_eq!(cv.len(), kb.len(), "constant vector length mismatch");
    assert_eq!(
        prior.signature(),
        kb.signature(),
        "prior and base must share a signature"
    );
    let sig = kb.signature();
    let raw: Vec<Option<BigRational>> = sig
        .worlds()
        .map(|w| {
            let base = prior.rank(w).finite()?;
            let mut total = BigRational::from(BigInt::from(base)) + &cv.kappa0;
            for (i, c) in kb.conditionals().iter().enumerate() {
                match c.indicator(w, sig) {
                    Indicator::Verifies => total += &cv.plus[i],
                    Indicator::Falsifies => total += &cv.minus[i],
                    Indicator::NotApplicable => {}
                }
            }
            Some(total)
        })
        .collect();
    let min = raw
        .iter()
        .flatten()
        .min()
        .cloned()
        .ok_or(Error::AllInfinite)?;
    let ranks = raw
        .into_iter()
        .zip(sig.worlds())
        .map(|(value, w)| match value {
            None => Ok(Rank::Infinite),
            Some(v) => {
                let shifted = v - &min;
                if !shifted.is_integer() {
                    return Err(Error::NonIntegralRank {
                        world: sig.render_world(w),
                    });
                }
                let value =
                    u64::try_from(shifted.to_integer()).expect("normalized rank is non-negative");
                Ok(Rank::Finite(value))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    OCF::new(sig.clone(), ranks)
}

/// Acceptance slack of conditional `i` under the constants and prior:
/// `(minus_i - plus_i) - (min over verifiers - min over falsifiers)`, each
/// minimum taken over finite-prior worlds and including the prior rank and
/// the impacts of the other conditionals. Positive exactly when the composed
/// ranking accepts conditional `i`.
pub fn acceptance_gap(
    kb: &KnowledgeBase,
    cv: &ConstantVector,
    prior: &OCF,
    i: usize,
) -> Result<BigRational> {
    assert!(i < kb.len(), "conditional index {i} out of range");
    let min_conf = side_min(kb, cv, prior, i, Indicator::Verifies)?;
    let min_ref = side_min(kb, cv, prior, i, Indicator::Falsifies)?;
    Ok(&cv.minus[i] - &cv.plus[i] - (min_conf - min_ref))
}

fn side_min(
    kb: &KnowledgeBase,
    cv: &ConstantVector,
    prior: &OCF,
    i: usize,
    which: Indicator,
) -> Result<BigRational> {
    let sig = kb.signature();
    let mut best: Option<BigRational> = None;
    for w in sig.worlds() {
        let Some(base) = prior.rank(w).finite() else {
            continue;
        };
        if kb.conditional(i).indicator(w, sig) != which {
            continue;
        }
        let mut total = BigRational::from(BigInt::from(base));
        for (j, c) in kb.conditionals().iter().enumerate() {
            if j == i {
                continue;
            }
            match c.indicator(w, sig) {
                Indicator::Verifies => total += &cv.plus[j],
                Indicator::Falsifies => total += &cv.minus[j],
                Indicator::NotApplicable => {}
            }
        }
        best = Some(match best {
            None => total,
            Some(b) => b.min(total),
        });
    }
    best.ok_or_else(|| Error::EmptyWorldSet {
        label: kb.label(i).to_string(),
        side: match which {
            Indicator::Verifies => "verification",
            _ => "falsification",
        },
    })
}

/// Diagnostics of one solver run.
#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub constants: Option<ConstantVector>,
    /// The sweep converged on its own (no cap exhaustion).
    pub converged: bool,
    /// No update ever decreased a constant.
    pub monotone: bool,
    /// The bounded exhaustive fallback produced the result.
    pub used_fallback: bool,
}

/// One world as the sweep sees it: its prior rank and the conditionals it
/// falsifies.
type SideWorld = (i64, Vec<usize>);

/// Per-conditional data for the sweep: verifier and falsifier worlds with
/// finite prior rank.
struct Arena {
    lists: Vec<(Vec<SideWorld>, Vec<SideWorld>)>,
}

impl Arena {
    fn build(kb: &KnowledgeBase, prior: &OCF) -> Result<Self> {
        let sig = kb.signature();
        let falsified_of: Vec<(World, i64, Vec<usize>)> = sig
            .worlds()
            .filter_map(|w| {
                let base = prior.rank(w).finite()?;
                let falsified: Vec<usize> = (0..kb.len())
                    .filter(|&j| kb.conditional(j).indicator(w, sig) == Indicator::Falsifies)
                    .collect();
                Some((w, base as i64, falsified))
            })
            .collect();
        let mut lists = Vec::with_capacity(kb.len());
        for (i, c) in kb.conditionals().iter().enumerate() {
            let mut verifiers = Vec::new();
            let mut falsifiers = Vec::new();
            for (w, base, falsified) in &falsified_of {
                match c.indicator(*w, sig) {
                    Indicator::Verifies => verifiers.push((*base, falsified.clone())),
                    Indicator::Falsifies => falsifiers.push((*base, falsified.clone())),
                    Indicator::NotApplicable => {}
                }
            }
            if verifiers.is_empty() {
                return Err(Error::EmptyWorldSet {
                    label: kb.label(i).to_string(),
                    side: "verification",
                });
            }
            lists.push((verifiers, falsifiers));
        }
        Ok(Arena { lists })
    }

    fn side_min(&self, i: usize, falsifiers: bool, x: &[i64]) -> Option<i64> {
        let side = if falsifiers {
            &self.lists[i].1
        } else {
            &self.lists[i].0
        };
        side.iter()
            .map(|(base, falsified)| {
                base + falsified
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| x[j])
                    .sum::<i64>()
            })
            .min()
    }

    /// All acceptance gaps strictly positive at `x` (empty falsifier sets
    /// count as accepted).
    fn feasible(&self, x: &[i64]) -> bool {
        (0..x.len()).all(|i| {
            let conf = self.side_min(i, false, x).expect("verifiers are nonempty");
            match self.side_min(i, true, x) {
                Some(refm) => x[i] > conf - refm,
                None => true,
            }
        })
    }
}

/// Solves for non-negative integer minus constants (plus constants are
/// always zero) making every acceptance gap strictly positive, by an
/// ascending fixed-point sweep in base order with a bounded exhaustive
/// fallback. `Ok(None)` means no solution was found within the caps.
/// Requires a consistent base; the prior comes from the options.
pub fn solve_constants(kb: &KnowledgeBase, opts: &SolverOptions) -> Result<Option<ConstantVector>> {
    solve_constants_detailed(kb, opts).map(|d| d.constants)
}

pub fn solve_constants_detailed(
    kb: &KnowledgeBase,
    opts: &SolverOptions,
) -> Result<SolveDiagnostics> {
    let partition = tolerance_partition(kb).ok_or(Error::InconsistentKb)?;
    let n = kb.len();
    if n == 0 {
        return Ok(SolveDiagnostics {
            constants: Some(ConstantVector::zero(0)),
            converged: true,
            monotone: true,
            used_fallback: false,
        });
    }
    if opts.mode == SolverMode::FromZRanks {
        let minus = (0..n).map(|i| partition.z_rank(i) as i64 + 1).collect();
        return Ok(SolveDiagnostics {
            constants: Some(ConstantVector::from_integers(0, vec![0; n], minus)),
            converged: true,
            monotone: true,
            used_fallback: false,
        });
    }
    let uniform;
    let prior = match &opts.prior {
        Some(p) => {
            if p.signature() != kb.signature() {
                return Err(Error::SignatureMismatch);
            }
            p
        }
        None => {
            uniform = OCF::uniform(kb.signature().clone());
            &uniform
        }
    };
    let arena = Arena::build(kb, prior)?;
    let lb = opts.mode.lower_bound();
    // at least one full pass
    let cap = opts
        .iteration_cap
        .unwrap_or_else(|| default_iteration_cap(n))
        .max(n);

    let mut x = vec![lb; n];
    let mut steps = 0usize;
    let mut monotone = true;
    let converged = loop {
        let mut changed = false;
        for i in 0..n {
            let conf = arena.side_min(i, false, &x).expect("verifiers nonempty");
            let next = match arena.side_min(i, true, &x) {
                Some(refm) => (1 + conf - refm).max(lb),
                None => lb, // never falsified: accepted for free
            };
            if next != x[i] {
                if next < x[i] {
                    monotone = false;
                }
                x[i] = next;
                changed = true;
            }
            steps += 1;
        }
        if !changed {
            break true;
        }
        if steps >= cap {
            break false;
        }
    };
    if converged {
        debug_assert!(arena.feasible(&x));
        return Ok(SolveDiagnostics {
            constants: Some(ConstantVector::from_integers(0, vec![0; n], x)),
            converged: true,
            monotone,
            used_fallback: false,
        });
    }
    // bounded exhaustive fallback with growing bound
    let mut bound = lb + 2;
    while search_size(lb, bound, n) <= BRUTE_FORCE_GUARD {
        if let Some(found) = exhaustive_search(&arena, lb, bound) {
            return Ok(SolveDiagnostics {
                constants: Some(ConstantVector::from_integers(0, vec![0; n], found)),
                converged: false,
                monotone,
                used_fallback: true,
            });
        }
        bound *= 2;
    }
    Ok(SolveDiagnostics {
        constants: None,
        converged: false,
        monotone,
        used_fallback: false,
    })
}

const BRUTE_FORCE_GUARD: u128 = 10_000_000;

fn search_size(lb: i64, bound: i64, n: usize) -> u128 {
    let width = (bound - lb + 1).max(0) as u128;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(width);
        if total > BRUTE_FORCE_GUARD {
            break;
        }
    }
    total
}

/// First feasible vector in ascending lexicographic order over
/// `{lb..=bound}^n`, or `None`.
fn exhaustive_search(arena: &Arena, lb: i64, bound: i64) -> Option<Vec<i64>> {
    let n = arena.lists.len();
    let mut x = vec![lb; n];
    loop {
        if arena.feasible(&x) {
            return Some(x);
        }
        // odometer, last component fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = lb;
        }
    }
}

/// Exhaustively searches `{lb..=bound}^n` in lexicographic order for the
/// first constant vector making every acceptance gap positive. Guarded
/// against oversized search spaces; the oracle against which the solver's
/// minimality is checked.
pub fn brute_force_constants(
    kb: &KnowledgeBase,
    opts: &SolverOptions,
    bound: i64,
) -> Result<Option<ConstantVector>> {
    let n = kb.len();
    if n == 0 {
        return Ok(Some(ConstantVector::zero(0)));
    }
    let lb = opts.mode.lower_bound();
    if search_size(lb, bound, n) > BRUTE_FORCE_GUARD {
        return Err(Error::SearchSpaceExceeded(format!(
            "({} options)^{n}",
            bound - lb + 1
        )));
    }
    let uniform;
    let prior = match &opts.prior {
        Some(p) => {
            if p.signature() != kb.signature() {
                return Err(Error::SignatureMismatch);
            }
            p
        }
        None => {
            uniform = OCF::uniform(kb.signature().clone());
            &uniform
        }
    };
    let arena = Arena::build(kb, prior)?;
    Ok(exhaustive_search(&arena, lb, bound)
        .map(|x| ConstantVector::from_integers(0, vec![0; n], x)))
}

/// A c-representation: the composition of the uniform prior with solved
/// constants. The result is indifferent to the base and accepts every
/// conditional in it.
pub fn c_representation(kb: &KnowledgeBase, opts: &SolverOptions) -> Result<OCF> {
    let opts = SolverOptions {
        prior: None,
        ..opts.clone()
    };
    let cv = solve_constants(kb, &opts)?.ok_or(Error::NoConstantsFound)?;
    compose(&OCF::uniform(kb.signature().clone()), &cv, kb)
}

/// A c-revision: the composition of the given prior with constants solved
/// against it. The result preserves the prior's conditional structure and
/// accepts every conditional in the base.
pub fn c_revision(prior: &OCF, kb: &KnowledgeBase, opts: &SolverOptions) -> Result<OCF> {
    let opts = SolverOptions {
        prior: Some(prior.clone()),
        ..opts.clone()
    };
    let cv = solve_constants(kb, &opts)?.ok_or(Error::NoConstantsFound)?;
    let revised = compose(prior, &cv, kb)?;
    debug_assert!(crate::ranking::relative_change(prior, &revised).is_ok());
    Ok(revised)
}

/// Both constants and the composed ranking, as the CLI reports them.
pub struct Construction {
    pub constants: ConstantVector,
    pub ocf: OCF,
}

/// Like [`c_representation`]/[`c_revision`] but returning the constants too.
pub fn construct(kb: &KnowledgeBase, opts: &SolverOptions) -> Result<Construction> {
    let cv = solve_constants(kb, opts)?.ok_or(Error::NoConstantsFound)?;
    let uniform;
    let prior = match &opts.prior {
        Some(p) => p,
        None => {
            uniform = OCF::uniform(kb.signature().clone());
            &uniform
        }
    };
    let ocf = compose(prior, &cv, kb)?;
    Ok(Construction { constants: cv, ocf })
}
