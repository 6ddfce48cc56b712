//! Kochen-Specker sets: exact integer vectors, orthogonal bases and
//! {0,1} colouring searches.
//!
//! A colouring is valid when every basis has exactly one member valued 1.
//! Colourings here are non-contextual: one value per vector.

mod search;
mod set;

pub use search::{
    colour_prefix_maximal, contextual_repair_search, contextual_repair_search_with, count_valid_colourings,
    count_valid_colourings_with, parity_obstruction, split_occurrences, valid_colourings, ColourError, Enumeration,
    Incidence, PrefixColouring, RepairOutcome, EXHAUSTIVE_LIMIT,
};
pub use set::{load_ks_set, KsBasis, KsSet, KsSetDocument, KsSetError, KsVector, LoadError};

/// A value for every vector of a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Colouring {
    values: Vec<u8>,
}

impl Colouring {
    pub fn from_values(values: Vec<u8>) -> Self {
        Colouring { values }
    }

    pub fn value(&self, vector: usize) -> u8 {
        self.values[vector]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// True when every basis of `set` has exactly one member valued 1.
    pub fn is_valid_for(&self, set: &KsSet) -> bool {
        self.values.len() == set.vector_count()
            && set
                .bases()
                .iter()
                .all(|b| b.members().iter().filter(|&&v| self.values[v] == 1).count() == 1)
    }
}

/// Values for the vectors seen so far; `None` for the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialColouring {
    values: Vec<Option<u8>>,
}

impl PartialColouring {
    pub fn from_values(values: Vec<Option<u8>>) -> Self {
        PartialColouring { values }
    }

    pub fn get(&self, vector: usize) -> Option<u8> {
        self.values[vector]
    }

    pub fn values(&self) -> &[Option<u8>] {
        &self.values
    }

    /// Checks bases `0..len` of `set`: all members valued, exactly one 1.
    pub fn is_valid_on_prefix(&self, set: &KsSet, len: usize) -> bool {
        set.bases()[..len].iter().all(|b| {
            b.members().iter().all(|&v| self.values[v].is_some())
                && b.members().iter().filter(|&&v| self.values[v] == Some(1)).count() == 1
        })
    }
}

/// The 18-vector, 9-basis set in four dimensions, in printed order.
///
/// Vector ids follow first appearance when the nine bases are read in
/// order, so id 0 is `(0, 0, 0, 1)` and id 14 is `(0, 1, -1, 0)`.
pub fn cabello18() -> KsSet {
    const BASES: [[[i64; 4]; 4]; 9] = [
        [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
        [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
        [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
        [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
        [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
        [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
        [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
        [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
        [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
    ];
    let mut vectors: Vec<KsVector> = Vec::new();
    let mut bases = Vec::new();
    for basis in BASES {
        let ids = basis
            .iter()
            .map(|c| match vectors.iter().position(|v| v.components() == c) {
                Some(id) => id,
                None => {
                    vectors.push(KsVector::new(*c));
                    vectors.len() - 1
                }
            })
            .collect();
        bases.push(ids);
    }
    KsSet::new(4, vectors, bases).expect("built-in set is valid")
}
