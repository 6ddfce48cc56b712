//! Strategy synthesis for sets with a colourable prefix.
//!
//! The bases are split into a prefix `0..p`, the longest colourable one,
//! and `k` residual bases. A flip set `M` of vectors that occur in both
//! parts gets two variables per vector: one for prefix contexts and one for
//! residual contexts. A0 is a solution where the two disagree on every
//! M-vector; A1 is a solution with both of them complemented. Bob's tables
//! then take each M-vector's residual value from the other Alice table.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::{verify_quad, AliceKsStrategy, BobKsStrategy, StrategyQuad};
use crate::kscolour::{Incidence, KsSet};

/// Largest number of admissible flip sets tried before giving up.
pub const FLIP_SET_BUDGET: usize = 4096;
/// Largest number of A0 candidates tried per flip set.
const A0_BUDGET: usize = 1 << 16;
/// Largest number of search nodes spent enumerating flip sets.
const SUBSET_NODE_BUDGET: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    /// Each residual basis holds at most one flip vector, and exactly one
    /// when it cannot be satisfied as the prefix left it.
    A,
    /// Each flip vector also occurs in a prefix basis.
    B,
    /// The two Alice tables exist.
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub clause: Clause,
    /// Basis where the clause fails, when one can be named.
    pub basis: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficientCondition {
    pub prefix_len: usize,
    pub residual: usize,
    pub residual_bases: Vec<usize>,
    pub flip_set: Vec<usize>,
}

impl SufficientCondition {
    /// No residual bases: the set has a classical winning strategy.
    pub fn is_classical(&self) -> bool {
        self.residual == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConditionOutcome {
    Satisfied(SufficientCondition),
    NotSatisfied(Diagnosis),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("sufficient condition fails on clause {:?}: {}", .0.clause, .0.detail)]
    NotSatisfied(Diagnosis),
    #[error("internal error: synthesized strategies lose {failures} cases")]
    Verification { failures: usize },
}

/// A successful search, in terms of the split incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Found {
    prefix_len: usize,
    flip: Vec<usize>,
    split: Incidence,
    a0: Vec<u8>,
    a1: Vec<u8>,
}

pub fn check_sufficient_condition(set: &KsSet) -> ConditionOutcome {
    match search(&Incidence::of_set(set)) {
        Ok(found) => ConditionOutcome::Satisfied(SufficientCondition {
            prefix_len: found.prefix_len,
            residual: set.basis_count() - found.prefix_len,
            residual_bases: (found.prefix_len..set.basis_count()).collect(),
            flip_set: found.flip,
        }),
        Err(d) => ConditionOutcome::NotSatisfied(d),
    }
}

/// Builds a winning quad and checks it exhaustively before returning it.
/// A colourable set yields the degenerate quad with A0 = A1 and B0 = B1.
pub fn synthesize_quad(set: &KsSet) -> Result<StrategyQuad, SynthesisError> {
    let found = search(&Incidence::of_set(set)).map_err(SynthesisError::NotSatisfied)?;
    let n = set.vector_count();
    let rows = |values: &[u8]| -> Vec<Vec<u8>> {
        found.split.bases.iter().map(|b| b.iter().map(|&v| values[v]).collect()).collect()
    };
    let mut b0 = found.a0[..n].to_vec();
    let mut b1 = found.a1[..n].to_vec();
    let mut flip = vec![false; n];
    for (j, &v) in found.flip.iter().enumerate() {
        b0[v] = found.a1[n + j];
        b1[v] = found.a0[n + j];
        flip[v] = true;
    }
    let residual = (0..set.basis_count()).map(|b| b >= found.prefix_len).collect();
    let invalid = "search returns valid tables";
    let quad = StrategyQuad::new(
        AliceKsStrategy::new(set, rows(&found.a0)).expect(invalid),
        AliceKsStrategy::new(set, rows(&found.a1)).expect(invalid),
        BobKsStrategy::new(set, b0).expect(invalid),
        BobKsStrategy::new(set, b1).expect(invalid),
        residual,
        flip,
    )
    .expect(invalid);
    let report = verify_quad(set, &quad);
    if !report.all_won() {
        return Err(SynthesisError::Verification {
            failures: report.failures.len(),
        });
    }
    Ok(quad)
}

fn search(inc: &Incidence) -> Result<Found, Diagnosis> {
    let (p, witness) = inc.prefix_maximal();
    let r = inc.bases.len();
    if p == r {
        let values = complete(&witness);
        return Ok(Found {
            prefix_len: p,
            flip: Vec::new(),
            split: inc.clone(),
            a0: values.clone(),
            a1: values,
        });
    }

    let mut in_prefix = vec![false; inc.vars];
    for b in &inc.bases[..p] {
        for &v in b {
            in_prefix[v] = true;
        }
    }
    // A residual basis needs a flip when the prefix values alone break it.
    let needs_flip: Vec<bool> = inc.bases[p..]
        .iter()
        .map(|b| {
            let ones = b.iter().filter(|&&v| witness[v] == Some(1)).count();
            ones > 1 || (ones == 0 && b.iter().all(|&v| witness[v].is_some()))
        })
        .collect();
    let prefs = preference_order(inc, p, &witness, &in_prefix);
    if prefs.is_empty() {
        return Err(Diagnosis {
            clause: Clause::B,
            basis: Some(p),
            detail: "no residual vector occurs in a prefix basis".into(),
        });
    }

    let mut enumerator = FlipSets::new(inc, p, &prefs, &needs_flip);
    let mut tried = 0;
    let mut exhausted = true;
    for size in 1..=prefs.len() {
        let flow = enumerator.run(size, &mut |m| {
            tried += 1;
            if let Some(found) = construct(inc, p, m) {
                return ControlFlow::Break(Some(found));
            }
            if tried >= FLIP_SET_BUDGET {
                return ControlFlow::Break(None);
            }
            ControlFlow::Continue(())
        });
        match flow {
            ControlFlow::Break(Some(found)) => return Ok(found),
            ControlFlow::Break(None) => {
                exhausted = false;
                break;
            }
            ControlFlow::Continue(()) => {}
        }
        if enumerator.out_of_budget() {
            exhausted = false;
            break;
        }
    }

    if tried == 0 && exhausted {
        let basis = enumerator.first_collision.unwrap_or(p);
        return Err(Diagnosis {
            clause: Clause::A,
            basis: Some(basis),
            detail: format!("every flip set repairing the residual puts two flip vectors in basis {basis}"),
        });
    }
    let detail = if exhausted {
        format!("no admissible flip set among {tried} admits both Alice tables")
    } else {
        format!("search budget exhausted after {tried} admissible flip sets")
    };
    Err(Diagnosis {
        clause: Clause::C,
        basis: (p..r).find(|&b| needs_flip[b - p]),
        detail,
    })
}

/// Flip candidates in preference order. Each residual basis contributes
/// its failure point first (the second member valued 1, or the last member
/// when none is), then its other shared members in position order.
fn preference_order(inc: &Incidence, p: usize, witness: &[Option<u8>], in_prefix: &[bool]) -> Vec<usize> {
    let mut first = Vec::new();
    let mut rest = Vec::new();
    for b in &inc.bases[p..] {
        let ones: Vec<usize> = b.iter().copied().filter(|&v| witness[v] == Some(1)).collect();
        let point = match ones.len() {
            0 => b.last().copied(),
            1 => None,
            _ => Some(ones[1]),
        };
        if let Some(v) = point.filter(|&v| in_prefix[v]) {
            first.push(v);
        }
        rest.extend(b.iter().copied().filter(|&v| in_prefix[v]));
    }
    let mut seen = vec![false; inc.vars];
    first
        .into_iter()
        .chain(rest)
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect()
}

/// Combinations of the preference list, lexicographic per size, that give
/// every residual basis at most one flip vector and every broken basis
/// exactly one.
struct FlipSets<'a> {
    prefs: &'a [usize],
    needs_flip: &'a [bool],
    /// Residual bases (offsets from the prefix) containing each candidate.
    contexts: Vec<Vec<usize>>,
    nodes: usize,
    first_collision: Option<usize>,
    p: usize,
}

impl<'a> FlipSets<'a> {
    fn new(inc: &Incidence, p: usize, prefs: &'a [usize], needs_flip: &'a [bool]) -> Self {
        let contexts = prefs
            .iter()
            .map(|&v| (0..inc.bases.len() - p).filter(|&i| inc.bases[p + i].contains(&v)).collect())
            .collect();
        FlipSets {
            prefs,
            needs_flip,
            contexts,
            nodes: 0,
            first_collision: None,
            p,
        }
    }

    fn out_of_budget(&self) -> bool {
        self.nodes >= SUBSET_NODE_BUDGET
    }

    fn run<T>(&mut self, size: usize, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<T>) -> ControlFlow<T> {
        let mut chosen = Vec::with_capacity(size);
        let mut hits = vec![0u8; self.needs_flip.len()];
        self.descend(0, size, &mut chosen, &mut hits, visit)
    }

    fn descend<T>(
        &mut self,
        from: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        hits: &mut [u8],
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<T>,
    ) -> ControlFlow<T> {
        if chosen.len() == size {
            if hits.iter().zip(self.needs_flip).all(|(&h, &need)| !need || h == 1) {
                let m: Vec<usize> = chosen.iter().map(|&i| self.prefs[i]).collect();
                return visit(&m);
            }
            return ControlFlow::Continue(());
        }
        for i in from..self.prefs.len() {
            if self.prefs.len() - i < size - chosen.len() || self.out_of_budget() {
                break;
            }
            self.nodes += 1;
            if let Some(&c) = self.contexts[i].iter().find(|&&c| hits[c] > 0) {
                self.first_collision.get_or_insert(self.p + c);
                continue;
            }
            for &c in &self.contexts[i] {
                hits[c] += 1;
            }
            chosen.push(i);
            let flow = self.descend(i + 1, size, chosen, hits, visit);
            chosen.pop();
            for &c in &self.contexts[i] {
                hits[c] -= 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Tries to build both Alice tables for flip set `m`.
fn construct(inc: &Incidence, p: usize, m: &[usize]) -> Option<Found> {
    let n = inc.vars;
    let residual_var: BTreeMap<usize, usize> = m.iter().enumerate().map(|(j, &v)| (v, n + j)).collect();
    let mut split = Incidence {
        vars: n + m.len(),
        bases: inc.bases.clone(),
    };
    for b in &mut split.bases[p..] {
        for v in b.iter_mut() {
            if let Some(&q) = residual_var.get(v) {
                *v = q;
            }
        }
    }

    let mut tried = 0;
    let mut result = None;
    let _ = split.for_each_solution(&vec![None; split.vars], |a0| {
        tried += 1;
        if m.iter().enumerate().all(|(j, &v)| a0[v] != a0[n + j]) {
            let mut fixed = vec![None; split.vars];
            for (j, &v) in m.iter().enumerate() {
                fixed[v] = a0[n + j];
                fixed[n + j] = a0[v];
            }
            if let Some(a1) = split.first_solution(&fixed) {
                result = Some((complete(a0), complete(&a1)));
                return ControlFlow::Break(());
            }
        }
        if tried >= A0_BUDGET {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    let (a0, a1) = result?;
    Some(Found {
        prefix_len: p,
        flip: m.to_vec(),
        split,
        a0,
        a1,
    })
}

/// Unconstrained variables (possible only at the incidence level) take 0.
fn complete(values: &[Option<u8>]) -> Vec<u8> {
    values.iter().map(|v| v.unwrap_or(0)).collect()
}
