use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A nonzero integer vector. Identity is exact component equality, so `v`
/// and `-v` are different vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KsVector(Vec<i64>);

impl KsVector {
    pub fn new(components: impl Into<Vec<i64>>) -> Self {
        KsVector(components.into())
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, other: &KsVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for KsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Indices of `dimension` pairwise orthogonal vectors, in stored order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KsBasis(Vec<usize>);

impl KsBasis {
    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, vector: usize) -> bool {
        self.0.contains(&vector)
    }

    pub fn position_of(&self, vector: usize) -> Option<usize> {
        self.0.iter().position(|&m| m == vector)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KsSetError {
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("vector {vector} has {found} components, expected {expected}")]
    VectorDimension { vector: usize, expected: usize, found: usize },
    #[error("vector {vector} is the zero vector")]
    ZeroVector { vector: usize },
    #[error("vector {second} duplicates vector {first}")]
    DuplicateVector { first: usize, second: usize },
    #[error("the set has no bases")]
    NoBases,
    #[error("basis {basis} lists {found} vectors, expected {expected}")]
    BasisArity { basis: usize, expected: usize, found: usize },
    #[error("basis {basis} position {position} refers to vector {index}, but only {count} vectors exist")]
    DanglingIndex { basis: usize, position: usize, index: usize, count: usize },
    #[error("basis {basis} lists vector {index} more than once")]
    RepeatedMember { basis: usize, index: usize },
    #[error("basis {basis} is not orthogonal: vectors {first} and {second} have dot product {dot}")]
    NotOrthogonal { basis: usize, first: usize, second: usize, dot: i64 },
    #[error("vector {vector} does not appear in any basis")]
    UnusedVector { vector: usize },
    #[error("permutation must list every basis index 0..{count} exactly once")]
    BadPermutation { count: usize },
}

/// A finite set of integer vectors grouped into orthogonal bases.
///
/// Construction validates every invariant, so a `KsSet` value is always
/// well formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsSet {
    dimension: usize,
    vectors: Vec<KsVector>,
    bases: Vec<KsBasis>,
}

impl KsSet {
    pub fn new(dimension: usize, vectors: Vec<KsVector>, bases: Vec<Vec<usize>>) -> Result<Self, KsSetError> {
        if dimension < 3 {
            return Err(KsSetError::DimensionTooSmall(dimension));
        }
        let mut seen: HashMap<&KsVector, usize> = HashMap::new();
        for (i, v) in vectors.iter().enumerate() {
            if v.dimension() != dimension {
                return Err(KsSetError::VectorDimension {
                    vector: i,
                    expected: dimension,
                    found: v.dimension(),
                });
            }
            if v.is_zero() {
                return Err(KsSetError::ZeroVector { vector: i });
            }
            if let Some(&first) = seen.get(v) {
                return Err(KsSetError::DuplicateVector { first, second: i });
            }
            seen.insert(v, i);
        }
        if bases.is_empty() {
            return Err(KsSetError::NoBases);
        }
        let mut used = vec![false; vectors.len()];
        for (b, members) in bases.iter().enumerate() {
            if members.len() != dimension {
                return Err(KsSetError::BasisArity {
                    basis: b,
                    expected: dimension,
                    found: members.len(),
                });
            }
            for (pos, &idx) in members.iter().enumerate() {
                if idx >= vectors.len() {
                    return Err(KsSetError::DanglingIndex {
                        basis: b,
                        position: pos,
                        index: idx,
                        count: vectors.len(),
                    });
                }
                if members[..pos].contains(&idx) {
                    return Err(KsSetError::RepeatedMember { basis: b, index: idx });
                }
                used[idx] = true;
            }
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    let dot = vectors[u].dot(&vectors[v]);
                    if dot != 0 {
                        return Err(KsSetError::NotOrthogonal {
                            basis: b,
                            first: u,
                            second: v,
                            dot,
                        });
                    }
                }
            }
        }
        if let Some(vector) = used.iter().position(|u| !u) {
            return Err(KsSetError::UnusedVector { vector });
        }
        Ok(KsSet {
            dimension,
            vectors,
            bases: bases.into_iter().map(KsBasis).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vectors(&self) -> &[KsVector] {
        &self.vectors
    }

    pub fn vector(&self, id: usize) -> &KsVector {
        &self.vectors[id]
    }

    pub fn bases(&self) -> &[KsBasis] {
        &self.bases
    }

    pub fn basis(&self, id: usize) -> &KsBasis {
        &self.bases[id]
    }

    pub fn vector_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    pub fn find_vector(&self, components: &[i64]) -> Option<usize> {
        self.vectors.iter().position(|v| v.components() == components)
    }

    /// The vector at `position` of basis `basis` (both 0-based).
    pub fn vector_at(&self, basis: usize, position: usize) -> Option<usize> {
        self.bases.get(basis)?.members().get(position).copied()
    }

    /// `(basis, position)` of every occurrence of `vector`, in basis order.
    pub fn occurrences(&self, vector: usize) -> Vec<(usize, usize)> {
        self.bases
            .iter()
            .enumerate()
            .filter_map(|(b, basis)| basis.position_of(vector).map(|p| (b, p)))
            .collect()
    }

    /// The same set with bases listed in `order` (`order[i]` is the old
    /// index of the new basis `i`).
    pub fn permuted(&self, order: &[usize]) -> Result<KsSet, KsSetError> {
        let count = self.bases.len();
        let mut seen = vec![false; count];
        if order.len() != count {
            return Err(KsSetError::BadPermutation { count });
        }
        for &i in order {
            if i >= count || seen[i] {
                return Err(KsSetError::BadPermutation { count });
            }
            seen[i] = true;
        }
        Ok(KsSet {
            dimension: self.dimension,
            vectors: self.vectors.clone(),
            bases: order.iter().map(|&i| self.bases[i].clone()).collect(),
        })
    }

    pub fn to_document(&self) -> KsSetDocument {
        KsSetDocument {
            dimension: self.dimension,
            vectors: self.vectors.iter().map(|v| v.0.clone()).collect(),
            bases: self.bases.iter().map(|b| b.0.clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }
}

/// On-disk form of a [`KsSet`]: JSON with 0-based basis indices.
///
/// ```json
/// { "dimension": 3,
///   "vectors": [[1,0,0],[0,1,0],[0,0,1]],
///   "bases": [[0,1,2]] }
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsSetDocument {
    pub dimension: usize,
    pub vectors: Vec<Vec<i64>>,
    pub bases: Vec<Vec<usize>>,
}

impl KsSetDocument {
    pub fn into_set(self) -> Result<KsSet, KsSetError> {
        KsSet::new(self.dimension, self.vectors.into_iter().map(KsVector).collect(), self.bases)
    }

    /// One vector or basis per line, so fixtures diff cleanly.
    pub fn to_json(&self) -> String {
        let list = |rows: Vec<String>| format!("[\n    {}\n  ]", rows.join(",\n    "));
        let vectors = list(self.vectors.iter().map(|v| serde_json::to_string(v).unwrap()).collect());
        let bases = list(self.bases.iter().map(|b| serde_json::to_string(b).unwrap()).collect());
        format!(
            "{{\n  \"dimension\": {},\n  \"vectors\": {},\n  \"bases\": {}\n}}\n",
            self.dimension, vectors, bases
        )
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed KS-set document at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid KS set")]
    Invalid(#[from] KsSetError),
}

/// Parses and validates a KS-set JSON document.
pub fn load_ks_set(text: &str) -> Result<KsSet, LoadError> {
    let doc: KsSetDocument = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(doc.into_set()?)
}
