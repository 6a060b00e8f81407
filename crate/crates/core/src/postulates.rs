//! The qualitative conditional-preservation postulates CR5–CR8.
//!
//! The postulates quantify over all conditionals `(D|C)` standing in the
//! subconditional or perpendicularity relation to the revising conditional.
//! The checker works against a finite probe set: every conditional whose
//! antecedent and consequent are consistent conjunctions of at most
//! `max_literals` literals over distinct atoms, filtered so that both the
//! verifying and the falsifying world set are nonempty. Violations at small
//! scale are already witnessed by such probes because both relations are
//! semantic; arbitrary-formula probes would add nothing but size.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::logic::{
    is_perpendicular, is_subconditional, Conditional, Formula, Indicator, Signature,
};
use crate::ranking::{relative_change, OCF};

/// A deterministic, finite stand-in for "all conditionals `(D|C)`".
#[derive(Debug, Clone)]
pub struct ProbeSet {
    probes: Vec<Conditional>,
}

impl ProbeSet {
    pub fn probes(&self) -> &[Conditional] {
        &self.probes
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    /// A probe set containing only the given conditionals (used to check the
    /// monotonicity of the report in the probe set).
    pub fn from_conditionals(probes: Vec<Conditional>) -> Self {
        ProbeSet { probes }
    }
}

/// Enumerates all probes `(D|C)` with `C`, `D` consistent conjunctions of
/// 1..=`max_literals` literals over distinct atoms, keeping those whose
/// verifying and falsifying sets are both nonempty. Order is deterministic:
/// antecedents outermost, conjunction size innermost-first, atom
/// combinations lexicographic, sign patterns with positives first.
pub fn probe_set(sig: &Signature, max_literals: usize) -> Result<ProbeSet> {
    if max_literals > sig.atom_count() {
        return Err(Error::TooManyLiterals {
            given: max_literals,
            atoms: sig.atom_count(),
        });
    }
    let conjunctions = literal_conjunctions(sig, max_literals);
    let mut probes = Vec::new();
    for antecedent in &conjunctions {
        for consequent in &conjunctions {
            let probe = Conditional::new(consequent.clone(), antecedent.clone());
            if !probe.verifying_set(sig).is_empty() && !probe.falsifying_set(sig).is_empty() {
                probes.push(probe);
            }
        }
    }
    Ok(ProbeSet { probes })
}

fn literal_conjunctions(sig: &Signature, max_literals: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for size in 1..=max_literals {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            // all sign patterns for this atom combination, positives first
            for mask in 0..(1u32 << size) {
                let formula = Formula::conj(combo.iter().enumerate().map(|(pos, &atom)| {
                    if mask >> pos & 1 == 0 {
                        Formula::Atom(atom)
                    } else {
                        Formula::not(Formula::Atom(atom))
                    }
                }));
                out.push(formula);
            }
            // next combination of `size` atom indices, lexicographic
            let n = sig.atom_count();
            let mut k = size;
            loop {
                if k == 0 {
                    combo.clear();
                    break;
                }
                k -= 1;
                if combo[k] < n - (size - k) {
                    combo[k] += 1;
                    for j in k + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
            if combo.is_empty() {
                break;
            }
        }
    }
    out
}

/// Verdict for one postulate, with the violating probes when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateVerdict {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

impl PostulateVerdict {
    fn new() -> Self {
        PostulateVerdict {
            holds: true,
            witnesses: Vec::new(),
        }
    }

    fn violate(&mut self, witness: String) {
        self.holds = false;
        self.witnesses.push(witness);
    }

    fn to_json_value(&self) -> Value {
        json!({"holds": self.holds, "witnesses": self.witnesses})
    }
}

/// Report over one revision `(prior, posterior, rev)` and a probe set.
/// CR8 exceeds conditional preservation proper and is reported separately
/// from the core verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateReport {
    pub cr5: PostulateVerdict,
    pub cr6: PostulateVerdict,
    pub cr7: PostulateVerdict,
    pub cr8: PostulateVerdict,
}

impl PostulateReport {
    /// CR5–CR7 all hold.
    pub fn core_holds(&self) -> bool {
        self.cr5.holds && self.cr6.holds && self.cr7.holds
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "CR5": self.cr5.to_json_value(),
            "CR6": self.cr6.to_json_value(),
            "CR7": self.cr7.to_json_value(),
            "CR8": self.cr8.to_json_value(),
        })
    }
}

/// Checks CR5–CR8 for a revision of `prior` into `posterior` by `rev`
/// against every probe:
///
/// * CR5: a probe perpendicular to `rev` is accepted before iff after.
/// * CR6: a subconditional of `rev` accepted before stays accepted.
/// * CR7: a subconditional of the negated `rev` accepted after was
///   accepted before.
/// * CR8: a subconditional of `rev` whose negation was not accepted before
///   is accepted after.
pub fn check_cr(
    prior: &OCF,
    posterior: &OCF,
    rev: &Conditional,
    probes: &ProbeSet,
) -> Result<PostulateReport> {
    if prior.signature() != posterior.signature() {
        return Err(Error::SignatureMismatch);
    }
    let sig = prior.signature();
    let negated_rev = rev.negated();
    let mut report = PostulateReport {
        cr5: PostulateVerdict::new(),
        cr6: PostulateVerdict::new(),
        cr7: PostulateVerdict::new(),
        cr8: PostulateVerdict::new(),
    };
    for probe in probes.probes() {
        let before = prior.accepts(probe);
        let after = posterior.accepts(probe);
        let rendering = probe.render(sig);
        if is_perpendicular(probe, rev, sig) && before != after {
            report.cr5.violate(rendering.clone());
        }
        let sub_of_rev = is_subconditional(probe, rev, sig);
        if sub_of_rev && before && !after {
            report.cr6.violate(rendering.clone());
        }
        if is_subconditional(probe, &negated_rev, sig) && after && !before {
            report.cr7.violate(rendering.clone());
        }
        if sub_of_rev && !prior.accepts(&probe.negated()) && !after {
            report.cr8.violate(rendering);
        }
    }
    Ok(report)
}

/// Single-conditional reduction of the preservation principle: the relative
/// change is constant on each of the three indicator classes of `rev`,
/// restricted to worlds of finite posterior rank. Errors when the posterior
/// is not κ-consistent with the prior.
pub fn single_conditional_indifference(
    prior: &OCF,
    posterior: &OCF,
    rev: &Conditional,
) -> Result<bool> {
    let change = relative_change(prior, posterior)?;
    let sig = prior.signature();
    let mut class_delta: [Option<i64>; 3] = [None; 3];
    for w in sig.worlds() {
        let Some(delta) = change.delta(w) else {
            continue;
        };
        let class = match rev.indicator(w, sig) {
            Indicator::Verifies => 0,
            Indicator::Falsifies => 1,
            Indicator::NotApplicable => 2,
        };
        match class_delta[class] {
            None => class_delta[class] = Some(delta),
            Some(seen) if seen != delta => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}
