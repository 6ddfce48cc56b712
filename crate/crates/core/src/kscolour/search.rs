//! Exact-one colouring searches over basis/variable incidence structures.
//!
//! The solver walks bases in stored order. At each basis it either
//! propagates zeros (one member already valued 1) or branches on which
//! unassigned member takes the value 1, trying members in position order.
//! Solutions therefore appear in lexicographic (basis, position) order and
//! every complete assignment is produced exactly once.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::{Colouring, KsSet, PartialColouring};
use crate::exec::Exec;

/// Largest vector count accepted by the 2^n enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 30;

/// A colouring problem: `vars` unknowns and bases listing variable ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub vars: usize,
    pub bases: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn of_set(set: &KsSet) -> Self {
        Self::of_prefix(set, set.basis_count())
    }

    /// Variables are vector ids; only the first `len` bases constrain them.
    pub fn of_prefix(set: &KsSet, len: usize) -> Self {
        Incidence {
            vars: set.vector_count(),
            bases: set.bases()[..len].iter().map(|b| b.members().to_vec()).collect(),
        }
    }

    /// Visits every valid assignment extending `fixed`, in lexicographic
    /// order. Variables outside every basis keep their `fixed` value.
    pub fn for_each_solution<F>(&self, fixed: &[Option<u8>], mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[Option<u8>]) -> ControlFlow<()>,
    {
        assert_eq!(fixed.len(), self.vars, "fixed assignment has the wrong length");
        let mut values = fixed.to_vec();
        self.descend(0, &mut values, &mut visit)
    }

    fn descend<F>(&self, basis: usize, values: &mut Vec<Option<u8>>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Option<u8>]) -> ControlFlow<()>,
    {
        let Some(members) = self.bases.get(basis) else {
            return visit(values);
        };
        let ones = members.iter().filter(|&&m| values[m] == Some(1)).count();
        if ones > 1 {
            return ControlFlow::Continue(());
        }
        let open: Vec<usize> = members.iter().copied().filter(|&m| values[m].is_none()).collect();
        if ones == 1 {
            for &m in &open {
                values[m] = Some(0);
            }
            let flow = self.descend(basis + 1, values, visit);
            for &m in &open {
                values[m] = None;
            }
            return flow;
        }
        for &chosen in &open {
            for &m in &open {
                values[m] = Some(0);
            }
            values[chosen] = Some(1);
            let flow = self.descend(basis + 1, values, visit);
            for &m in &open {
                values[m] = None;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    pub fn first_solution(&self, fixed: &[Option<u8>]) -> Option<Vec<Option<u8>>> {
        let mut found = None;
        let _ = self.for_each_solution(fixed, |s| {
            found = Some(s.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn is_satisfiable(&self) -> bool {
        self.first_solution(&vec![None; self.vars]).is_some()
    }

    /// Longest satisfiable prefix of `bases` and its first solution.
    pub fn prefix_maximal(&self) -> (usize, Vec<Option<u8>>) {
        let mut witness = vec![None; self.vars];
        let mut p = 0;
        while p < self.bases.len() {
            let prefix = Incidence {
                vars: self.vars,
                bases: self.bases[..p + 1].to_vec(),
            };
            match prefix.first_solution(&vec![None; self.vars]) {
                Some(s) => {
                    witness = s;
                    p += 1;
                }
                None => break,
            }
        }
        (p, witness)
    }

    pub fn count_solutions(&self) -> u64 {
        let mut n = 0;
        let _ = self.for_each_solution(&vec![None; self.vars], |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Enumeration {
    /// 2^n bitmask enumeration; refuses sets above [`EXHAUSTIVE_LIMIT`].
    #[default]
    Exhaustive,
    /// Basis-indexed backtracking; any size.
    Backtrack,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColourError {
    #[error("{vectors} vectors exceed the exhaustive enumeration limit of {limit}; use backtracking")]
    TooLarge { vectors: usize, limit: usize },
}

/// Number of colourings giving every basis exactly one vector valued 1.
pub fn count_valid_colourings(set: &KsSet, mode: Enumeration) -> Result<u64, ColourError> {
    count_valid_colourings_with(Exec::default(), set, mode)
}

pub fn count_valid_colourings_with(exec: Exec, set: &KsSet, mode: Enumeration) -> Result<u64, ColourError> {
    match mode {
        Enumeration::Backtrack => Ok(Incidence::of_set(set).count_solutions()),
        Enumeration::Exhaustive => {
            let n = set.vector_count();
            if n > EXHAUSTIVE_LIMIT {
                return Err(ColourError::TooLarge {
                    vectors: n,
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            let masks: Vec<u64> = set
                .bases()
                .iter()
                .map(|b| b.members().iter().fold(0u64, |m, &v| m | (1 << v)))
                .collect();
            Ok(exec.sum_range(0..1u64 << n, 1 << 14, |bits| {
                masks.iter().all(|m| (bits & m).count_ones() == 1) as u64
            }))
        }
    }
}

/// Every valid colouring, in solver order.
pub fn valid_colourings(set: &KsSet) -> Vec<Colouring> {
    let inc = Incidence::of_set(set);
    let mut out = Vec::new();
    let _ = inc.for_each_solution(&vec![None; inc.vars], |s| {
        out.push(Colouring::from_values(s.iter().map(|v| v.expect("every vector lies in a basis")).collect()));
        ControlFlow::Continue(())
    });
    out
}

/// Parity obstruction: every vector occurs an even number of times and the
/// number of bases is odd. Summing the exactly-one constraints then gives
/// an even left side and an odd right side, so no colouring exists.
pub fn parity_obstruction(set: &KsSet) -> bool {
    let mut counts = vec![0usize; set.vector_count()];
    for b in set.bases() {
        for &m in b.members() {
            counts[m] += 1;
        }
    }
    set.basis_count() % 2 == 1 && counts.iter().all(|c| c % 2 == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vectors", rename_all = "kebab-case")]
pub enum RepairOutcome {
    /// The set already has a valid non-contextual colouring.
    AlreadyColourable,
    /// Vectors that become colourable when each of their occurrences may
    /// take its own value. May be empty.
    Candidates(Vec<usize>),
}

/// Finds every vector whose contextual treatment repairs the colouring.
pub fn contextual_repair_search(set: &KsSet) -> RepairOutcome {
    contextual_repair_search_with(Exec::default(), set)
}

pub fn contextual_repair_search_with(exec: Exec, set: &KsSet) -> RepairOutcome {
    if Incidence::of_set(set).is_satisfiable() {
        return RepairOutcome::AlreadyColourable;
    }
    let candidates: Vec<usize> = (0..set.vector_count()).filter(|&v| set.occurrences(v).len() >= 2).collect();
    let repairable = exec.map(&candidates, |&v| split_occurrences(set, v).is_satisfiable());
    RepairOutcome::Candidates(
        candidates
            .into_iter()
            .zip(repairable)
            .filter_map(|(v, ok)| ok.then_some(v))
            .collect(),
    )
}

/// Gives every occurrence of `vector` after the first its own variable.
pub fn split_occurrences(set: &KsSet, vector: usize) -> Incidence {
    let mut inc = Incidence::of_set(set);
    for (basis, pos) in set.occurrences(vector).into_iter().skip(1) {
        inc.bases[basis][pos] = inc.vars;
        inc.vars += 1;
    }
    inc
}

/// Longest colourable prefix of the basis list and its first witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixColouring {
    pub prefix_len: usize,
    pub residual: usize,
    pub witness: PartialColouring,
}

impl PrefixColouring {
    pub fn is_complete(&self) -> bool {
        self.residual == 0
    }
}

/// Largest `p` such that bases `0..p` (stored order) admit a valid
/// colouring of the vectors they contain. Colourability is monotone in the
/// prefix, so the scan stops at the first failure.
pub fn colour_prefix_maximal(set: &KsSet) -> PrefixColouring {
    let (p, witness) = Incidence::of_set(set).prefix_maximal();
    PrefixColouring {
        prefix_len: p,
        residual: set.basis_count() - p,
        witness: PartialColouring::from_values(witness),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kscolour::{cabello18, KsVector};

    fn toy(bases: Vec<Vec<usize>>, dim: usize) -> KsSet {
        // Disjoint bases of scaled unit vectors: basis b uses scale b+1.
        let mut vectors = Vec::new();
        for (b, members) in bases.iter().enumerate() {
            for (pos, _) in members.iter().enumerate() {
                let mut c = vec![0; dim];
                c[pos] = b as i64 + 1;
                vectors.push(KsVector::new(c));
            }
        }
        KsSet::new(dim, vectors, bases).unwrap()
    }

    fn two_disjoint_bases() -> KsSet {
        toy(vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], 4)
    }

    #[test]
    fn single_basis_has_one_colouring_per_member() {
        let set = toy(vec![vec![0, 1, 2, 3]], 4);
        assert_eq!(count_valid_colourings(&set, Enumeration::Exhaustive), Ok(4));
        assert_eq!(count_valid_colourings(&set, Enumeration::Backtrack), Ok(4));
    }

    #[test]
    fn disjoint_bases_multiply() {
        let set = two_disjoint_bases();
        assert_eq!(count_valid_colourings(&set, Enumeration::Exhaustive), Ok(16));
        assert_eq!(count_valid_colourings(&set, Enumeration::Backtrack), Ok(16));
        assert_eq!(contextual_repair_search(&set), RepairOutcome::AlreadyColourable);
        let prefix = colour_prefix_maximal(&set);
        assert_eq!((prefix.prefix_len, prefix.residual), (2, 0));
    }

    #[test]
    fn cabello_has_no_colouring_by_either_route() {
        let set = cabello18();
        assert!(parity_obstruction(&set));
        assert_eq!(count_valid_colourings(&set, Enumeration::Exhaustive), Ok(0));
        assert_eq!(count_valid_colourings(&set, Enumeration::Backtrack), Ok(0));
        assert!(valid_colourings(&set).is_empty());
    }

    #[test]
    fn size_guard_refuses_large_exhaustive_runs() {
        let bases: Vec<Vec<usize>> = (0..8).map(|b| (4 * b..4 * b + 4).collect()).collect();
        let set = toy(bases, 4);
        assert_eq!(
            count_valid_colourings(&set, Enumeration::Exhaustive),
            Err(ColourError::TooLarge { vectors: 32, limit: 30 })
        );
        assert_eq!(count_valid_colourings(&set, Enumeration::Backtrack), Ok(4u64.pow(8)));
    }

    #[test]
    fn sequential_and_parallel_counts_agree() {
        let seq = count_valid_colourings_with(Exec::Sequential, &two_disjoint_bases(), Enumeration::Exhaustive);
        let par = count_valid_colourings_with(Exec::Parallel, &two_disjoint_bases(), Enumeration::Exhaustive);
        assert_eq!(seq, par);
    }

    #[test]
    fn cabello_prefix_stops_before_last_basis() {
        let set = cabello18();
        let prefix = colour_prefix_maximal(&set);
        assert_eq!((prefix.prefix_len, prefix.residual), (8, 1));
        let inc = Incidence::of_prefix(&set, 8);
        for b in &inc.bases {
            let ones = b.iter().filter(|&&v| prefix.witness.get(v) == Some(1)).count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn split_vector_gets_a_fresh_variable() {
        let set = cabello18();
        let v = set.find_vector(&[0, 1, -1, 0]).unwrap();
        let inc = split_occurrences(&set, v);
        assert_eq!(inc.vars, 19);
        assert_eq!(inc.bases[5][3], v);
        assert_eq!(inc.bases[8][3], 18);
    }
}
