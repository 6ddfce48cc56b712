//! The impossible-colouring game over a Kochen-Specker set.
//!
//! Alice receives a basis and answers with one bit per member; Bob receives
//! a single vector of that basis and answers with one bit. They win when
//! Alice's row has exactly one 1 and her bit for Bob's vector equals his.
//!
//! A [`StrategyQuad`] holds two strategies per party and a PR-box wiring:
//! Alice feeds 1 into the box iff her basis is residual, Bob feeds 1 iff
//! his vector is in the flip set, and each party then plays the table
//! selected by its box output.

mod synth;

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::game::{BoxWiring, Game, Strategy, Violation, WiredPrBox};
use crate::kscolour::{cabello18, KsSet};
use crate::nlbox::PrBoxBranch;
use crate::verify::{verify_exhaustive, VerificationReport};

pub use synth::{
    check_sufficient_condition, synthesize_quad, Clause, ConditionOutcome, Diagnosis, SufficientCondition,
    SynthesisError, FLIP_SET_BUDGET,
};

pub const EXACTLY_ONE: Violation = Violation("exactly-one");
pub const VALUE_MISMATCH: Violation = Violation("value-mismatch");
pub const ARITY: Violation = Violation("arity");

/// The game built from a KS set. Alice's inputs are basis ids, Bob's are
/// vector ids; the promise is membership.
#[derive(Clone, Copy, Debug)]
pub struct KsGame<'a> {
    set: &'a KsSet,
}

impl<'a> KsGame<'a> {
    pub fn new(set: &'a KsSet) -> Self {
        KsGame { set }
    }

    pub fn set(&self) -> &'a KsSet {
        self.set
    }
}

/// Rules of [`KsGame`] for a given set.
pub fn ks_game_spec(set: &KsSet) -> KsGame<'_> {
    KsGame::new(set)
}

impl Game for KsGame<'_> {
    type AliceInput = usize;
    type BobInput = usize;
    type AliceOutput = Vec<u8>;
    type BobOutput = u8;

    fn name(&self) -> String {
        "impossible-colouring".into()
    }

    fn parameters(&self) -> BTreeMap<String, Value> {
        BTreeMap::from([
            ("dimension".to_owned(), json!(self.set.dimension())),
            ("vectors".to_owned(), json!(self.set.vector_count())),
            ("bases".to_owned(), json!(self.set.basis_count())),
        ])
    }

    fn alice_inputs(&self) -> Vec<usize> {
        (0..self.set.basis_count()).collect()
    }

    fn bob_inputs(&self) -> Vec<usize> {
        (0..self.set.vector_count()).collect()
    }

    fn promise(&self, basis: &usize, vector: &usize) -> bool {
        self.set.basis(*basis).contains(*vector)
    }

    fn judge(&self, basis: &usize, vector: &usize, row: &Vec<u8>, value: &u8) -> Result<(), Violation> {
        if row.len() != self.set.dimension() || row.iter().any(|&b| b > 1) || *value > 1 {
            return Err(ARITY);
        }
        if row.iter().filter(|&&b| b == 1).count() != 1 {
            return Err(EXACTLY_ONE);
        }
        let pos = self.set.basis(*basis).position_of(*vector).expect("promise guarantees membership");
        if row[pos] != *value {
            return Err(VALUE_MISMATCH);
        }
        Ok(())
    }

    fn inputs_json(&self, basis: &usize, vector: &usize) -> Value {
        json!({
            "alice": { "basis": basis, "name": format!("S{}", basis + 1) },
            "bob": { "vector_id": vector, "vector": self.set.vector(*vector).components() },
        })
    }

    fn outputs_json(&self, row: &Vec<u8>, value: &u8) -> Value {
        json!({ "alice": row, "bob": value })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("Alice's table has {found} rows, the set has {expected} bases")]
    RowCount { expected: usize, found: usize },
    #[error("row for basis {basis} must have {expected} entries with exactly one 1")]
    BadRow { basis: usize, expected: usize },
    #[error("Bob's table has {found} values, the set has {expected} vectors")]
    ValueCount { expected: usize, found: usize },
    #[error("wiring tables do not match the set's size")]
    Wiring,
}

/// One row per basis, each with exactly one 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AliceKsStrategy {
    rows: Vec<Vec<u8>>,
}

impl AliceKsStrategy {
    pub fn new(set: &KsSet, rows: Vec<Vec<u8>>) -> Result<Self, StrategyError> {
        if rows.len() != set.basis_count() {
            return Err(StrategyError::RowCount {
                expected: set.basis_count(),
                found: rows.len(),
            });
        }
        for (basis, row) in rows.iter().enumerate() {
            let ones = row.iter().filter(|&&b| b == 1).count();
            if row.len() != set.dimension() || ones != 1 || row.iter().any(|&b| b > 1) {
                return Err(StrategyError::BadRow {
                    basis,
                    expected: set.dimension(),
                });
            }
        }
        Ok(AliceKsStrategy { rows })
    }

    pub fn row(&self, basis: usize) -> &[u8] {
        &self.rows[basis]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }
}

/// One value per vector: Bob only ever sees a vector, never a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BobKsStrategy {
    values: Vec<u8>,
}

impl BobKsStrategy {
    pub fn new(set: &KsSet, values: Vec<u8>) -> Result<Self, StrategyError> {
        if values.len() != set.vector_count() || values.iter().any(|&b| b > 1) {
            return Err(StrategyError::ValueCount {
                expected: set.vector_count(),
                found: values.len(),
            });
        }
        Ok(BobKsStrategy { values })
    }

    pub fn value(&self, vector: usize) -> u8 {
        self.values[vector]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Bob's values laid out per basis, for comparison with printed tables.
    pub fn rows(&self, set: &KsSet) -> Vec<Vec<u8>> {
        set.bases()
            .iter()
            .map(|b| b.members().iter().map(|&v| self.values[v]).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyQuad {
    pub a0: AliceKsStrategy,
    pub a1: AliceKsStrategy,
    pub b0: BobKsStrategy,
    pub b1: BobKsStrategy,
    residual: Vec<bool>,
    flip: Vec<bool>,
}

impl StrategyQuad {
    /// `residual[b]`: Alice inputs 1 for basis `b`; `flip[v]`: Bob inputs 1
    /// for vector `v`.
    pub fn new(
        a0: AliceKsStrategy,
        a1: AliceKsStrategy,
        b0: BobKsStrategy,
        b1: BobKsStrategy,
        residual: Vec<bool>,
        flip: Vec<bool>,
    ) -> Result<Self, StrategyError> {
        if residual.len() != a0.rows.len()
            || a1.rows.len() != a0.rows.len()
            || flip.len() != b0.values.len()
            || b1.values.len() != b0.values.len()
        {
            return Err(StrategyError::Wiring);
        }
        Ok(StrategyQuad {
            a0,
            a1,
            b0,
            b1,
            residual,
            flip,
        })
    }

    pub fn alice_table(&self, box_output: u8) -> &AliceKsStrategy {
        if box_output == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }

    pub fn bob_table(&self, box_output: u8) -> &BobKsStrategy {
        if box_output == 0 {
            &self.b0
        } else {
            &self.b1
        }
    }

    pub fn residual_bases(&self) -> Vec<usize> {
        (0..self.residual.len()).filter(|&b| self.residual[b]).collect()
    }

    pub fn flip_set(&self) -> Vec<usize> {
        (0..self.flip.len()).filter(|&v| self.flip[v]).collect()
    }

    pub fn resource(&self) -> WiredPrBox<'_, Self> {
        WiredPrBox(self)
    }

    /// The same quad with Bob's two tables exchanged.
    pub fn with_bob_tables_swapped(&self) -> Self {
        StrategyQuad {
            b0: self.b1.clone(),
            b1: self.b0.clone(),
            ..self.clone()
        }
    }
}

impl BoxWiring<KsGame<'_>> for StrategyQuad {
    fn alice_box_input(&self, basis: &usize) -> u8 {
        self.residual[*basis] as u8
    }

    fn bob_box_input(&self, vector: &usize) -> u8 {
        self.flip[*vector] as u8
    }
}

impl Strategy<KsGame<'_>, u8, u8> for StrategyQuad {
    fn alice(&self, basis: &usize, a: &u8) -> Vec<u8> {
        self.alice_table(*a).row(*basis).to_vec()
    }

    fn bob(&self, vector: &usize, b: &u8) -> u8 {
        self.bob_table(*b).value(*vector)
    }
}

/// The four printed strategy tables for [`cabello18`], wired so that only
/// basis S9 and vector (0, 1, -1, 0) feed 1 into the box.
pub fn builtin_quad_4d() -> StrategyQuad {
    let set = cabello18();
    let rows = |t: [[u8; 4]; 9]| t.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let a0 = rows([
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 1, 0],
    ]);
    let a1 = rows([
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
    ]);
    // Bob's values in vector-id order (order of first appearance).
    let b0 = vec![1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0];
    let b1 = vec![1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0];
    let contextual = set.find_vector(&[0, 1, -1, 0]).expect("built-in vector");
    let mut residual = vec![false; 9];
    residual[8] = true;
    let mut flip = vec![false; 18];
    flip[contextual] = true;
    StrategyQuad::new(
        AliceKsStrategy::new(&set, a0).expect("printed table A0"),
        AliceKsStrategy::new(&set, a1).expect("printed table A1"),
        BobKsStrategy::new(&set, b0).expect("printed table B0"),
        BobKsStrategy::new(&set, b1).expect("printed table B1"),
        residual,
        flip,
    )
    .expect("printed tables are consistent")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoundError {
    #[error("vector {vector} is not a member of basis {basis}")]
    Promise { basis: usize, vector: usize },
    #[error("branch has box inputs ({got_x}, {got_y}) but the wiring gives ({want_x}, {want_y})")]
    Wiring { want_x: u8, want_y: u8, got_x: u8, got_y: u8 },
    #[error("branch outputs ({a}, {b}) violate a xor b = x and y")]
    Branch { a: u8, b: u8 },
}

/// One round of the box protocol: Alice's row and Bob's value.
pub fn ks_play_round(
    quad: &StrategyQuad,
    set: &KsSet,
    basis: usize,
    vector: usize,
    branch: &PrBoxBranch,
) -> Result<(Vec<u8>, u8), RoundError> {
    let game = KsGame::new(set);
    if basis >= set.basis_count() || vector >= set.vector_count() || !game.promise(&basis, &vector) {
        return Err(RoundError::Promise { basis, vector });
    }
    let want_x = BoxWiring::<KsGame>::alice_box_input(quad, &basis);
    let want_y = BoxWiring::<KsGame>::bob_box_input(quad, &vector);
    if (branch.x, branch.y) != (want_x, want_y) {
        return Err(RoundError::Wiring {
            want_x,
            want_y,
            got_x: branch.x,
            got_y: branch.y,
        });
    }
    if !branch.is_consistent() {
        return Err(RoundError::Branch { a: branch.a, b: branch.b });
    }
    Ok((
        Strategy::<KsGame, u8, u8>::alice(quad, &basis, &branch.a),
        Strategy::<KsGame, u8, u8>::bob(quad, &vector, &branch.b),
    ))
}

/// Exhaustive check of `quad` on every promise pair and box branch.
pub fn verify_quad(set: &KsSet, quad: &StrategyQuad) -> VerificationReport {
    let game = KsGame::new(set);
    verify_exhaustive(&game, quad, &quad.resource()).expect("PR box weights are exact halves")
}
