//! The odd-size magic-square game.
//!
//! Alice gets a row index and answers with an even-parity row; Bob gets a
//! column index and answers with an odd-parity column. They win when the
//! two agree on the shared cell. Indices are 1-based throughout the public
//! API.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::Exec;
use crate::game::{BoxWiring, Game, Strategy, Violation, WiredPrBox};
use crate::nlbox::PrBoxBranch;
use crate::verify::{verify_exhaustive_with, VerificationReport};

pub const ROW_PARITY: Violation = Violation("row-parity");
pub const COLUMN_PARITY: Violation = Violation("column-parity");
pub const INTERSECTION: Violation = Violation("intersection");
pub const LENGTH: Violation = Violation("length");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagicError {
    #[error("n = {0} is even; the even-size magic square game has a classical winning strategy")]
    Even(usize),
    #[error("n = {0} is too small; the game needs an odd n >= 3")]
    TooSmall(usize),
    #[error("index {index} is outside 1..={n}")]
    Index { index: usize, n: usize },
    #[error("branch has box inputs ({got_x}, {got_y}) but the wiring gives ({want_x}, {want_y})")]
    Wiring { want_x: u8, want_y: u8, got_x: u8, got_y: u8 },
}

fn check_size(n: usize) -> Result<(), MagicError> {
    if n < 3 {
        Err(MagicError::TooSmall(n))
    } else if n % 2 == 0 {
        Err(MagicError::Even(n))
    } else {
        Ok(())
    }
}

fn check_index(n: usize, index: usize) -> Result<(), MagicError> {
    if (1..=n).contains(&index) {
        Ok(())
    } else {
        Err(MagicError::Index { index, n })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagicGame {
    n: usize,
}

impl MagicGame {
    pub fn new(n: usize) -> Result<Self, MagicError> {
        check_size(n)?;
        Ok(MagicGame { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Rules of the size-`n` game.
pub fn magic_game_spec(n: usize) -> Result<MagicGame, MagicError> {
    MagicGame::new(n)
}

fn parity(bits: &[u8]) -> u8 {
    bits.iter().fold(0, |p, &b| p ^ (b & 1))
}

impl Game for MagicGame {
    type AliceInput = usize;
    type BobInput = usize;
    type AliceOutput = Vec<u8>;
    type BobOutput = Vec<u8>;

    fn name(&self) -> String {
        "magic-square".into()
    }

    fn parameters(&self) -> BTreeMap<String, Value> {
        BTreeMap::from([("n".to_owned(), json!(self.n))])
    }

    fn alice_inputs(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    fn bob_inputs(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    fn promise(&self, _: &usize, _: &usize) -> bool {
        true
    }

    fn judge(&self, x_a: &usize, x_b: &usize, row: &Vec<u8>, col: &Vec<u8>) -> Result<(), Violation> {
        if row.len() != self.n || col.len() != self.n {
            return Err(LENGTH);
        }
        if parity(row) != 0 {
            return Err(ROW_PARITY);
        }
        if parity(col) != 1 {
            return Err(COLUMN_PARITY);
        }
        if row[x_b - 1] != col[x_a - 1] {
            return Err(INTERSECTION);
        }
        Ok(())
    }

    fn inputs_json(&self, x_a: &usize, x_b: &usize) -> Value {
        json!({ "alice": x_a, "bob": x_b })
    }

    fn outputs_json(&self, row: &Vec<u8>, col: &Vec<u8>) -> Value {
        json!({ "alice": row, "bob": col })
    }
}

/// The e, f, g and h vectors for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyVectorFamily {
    n: usize,
}

impl StrategyVectorFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All ones except a 0 at position `i`, for `i` in 1..=n.
    pub fn e(&self, i: usize) -> Vec<u8> {
        assert!((1..=self.n).contains(&i), "e_{i} out of range");
        (1..=self.n).map(|j| (j != i) as u8).collect()
    }

    /// All zeros.
    pub fn f1(&self) -> Vec<u8> {
        vec![0; self.n]
    }

    /// Ones exactly at positions n-1 and n.
    pub fn f2(&self) -> Vec<u8> {
        (1..=self.n).map(|j| (j >= self.n - 1) as u8).collect()
    }

    /// `e_i` with position n set to 0, for `i` in 1..n.
    pub fn g(&self, i: usize) -> Vec<u8> {
        assert!((1..self.n).contains(&i), "g_{i} out of range");
        let mut v = self.e(i);
        v[self.n - 1] = 0;
        v
    }

    /// All ones.
    pub fn h1(&self) -> Vec<u8> {
        vec![1; self.n]
    }
}

pub fn strategy_vectors(n: usize) -> Result<StrategyVectorFamily, MagicError> {
    check_size(n)?;
    Ok(StrategyVectorFamily { n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MagicTag {
    A0,
    A1,
    B0,
    B1,
}

/// Row (A tags) or column (B tags) played on 1-based input `index`.
pub fn magic_strategy(tag: MagicTag, n: usize, index: usize) -> Result<Vec<u8>, MagicError> {
    let fam = strategy_vectors(n)?;
    check_index(n, index)?;
    Ok(match tag {
        MagicTag::A0 if index == n => fam.f1(),
        MagicTag::A0 => fam.e(index),
        MagicTag::A1 if index == n => fam.f2(),
        MagicTag::A1 if index == n - 1 => fam.e(n),
        MagicTag::A1 => fam.e(index),
        MagicTag::B0 if index == n => fam.h1(),
        MagicTag::B0 => fam.g(index),
        MagicTag::B1 if index == n => fam.g(n - 1),
        MagicTag::B1 if index == n - 1 => fam.h1(),
        MagicTag::B1 => fam.g(index),
    })
}

/// Box input 1 iff the party's index is n; output 0 selects A0/B0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagicNlBox {
    n: usize,
}

impl MagicNlBox {
    pub fn new(n: usize) -> Result<Self, MagicError> {
        check_size(n)?;
        Ok(MagicNlBox { n })
    }

    pub fn resource(&self) -> WiredPrBox<'_, Self> {
        WiredPrBox(self)
    }

    fn box_input(&self, index: usize) -> u8 {
        (index == self.n) as u8
    }
}

impl BoxWiring<MagicGame> for MagicNlBox {
    fn alice_box_input(&self, x_a: &usize) -> u8 {
        self.box_input(*x_a)
    }

    fn bob_box_input(&self, x_b: &usize) -> u8 {
        self.box_input(*x_b)
    }
}

impl Strategy<MagicGame, u8, u8> for MagicNlBox {
    fn alice(&self, x_a: &usize, a: &u8) -> Vec<u8> {
        let tag = if *a == 0 { MagicTag::A0 } else { MagicTag::A1 };
        magic_strategy(tag, self.n, *x_a).expect("verifier passes in-range inputs")
    }

    fn bob(&self, x_b: &usize, b: &u8) -> Vec<u8> {
        let tag = if *b == 0 { MagicTag::B0 } else { MagicTag::B1 };
        magic_strategy(tag, self.n, *x_b).expect("verifier passes in-range inputs")
    }
}

/// One round of the box protocol.
pub fn magic_nlbox_round(
    n: usize,
    x_a: usize,
    x_b: usize,
    branch: &PrBoxBranch,
) -> Result<(Vec<u8>, Vec<u8>), MagicError> {
    let wiring = MagicNlBox::new(n)?;
    check_index(n, x_a)?;
    check_index(n, x_b)?;
    let (want_x, want_y) = (wiring.box_input(x_a), wiring.box_input(x_b));
    if (branch.x, branch.y) != (want_x, want_y) || !branch.is_consistent() {
        return Err(MagicError::Wiring {
            want_x,
            want_y,
            got_x: branch.x,
            got_y: branch.y,
        });
    }
    Ok((wiring.alice(&x_a, &branch.a), wiring.bob(&x_b, &branch.b)))
}

pub fn magic_verify_nlbox(n: usize) -> Result<VerificationReport, MagicError> {
    magic_verify_nlbox_with(Exec::default(), n)
}

pub fn magic_verify_nlbox_with(exec: Exec, n: usize) -> Result<VerificationReport, MagicError> {
    let game = MagicGame::new(n)?;
    let wiring = MagicNlBox::new(n)?;
    Ok(verify_exhaustive_with(exec, &game, &wiring, &wiring.resource())
        .expect("PR box weights are exact halves")
        .with_parameter("strategy", "nlbox"))
}

/// Exhaustive classical results for n = 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveVerdict {
    pub matrices: u32,
    pub valid_matrices: u32,
    pub strategy_pairs: u32,
    pub input_pairs: u32,
    /// Best number of input pairs won by one deterministic strategy pair.
    /// Computed here, not quoted from anywhere.
    pub best_wins: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalImpossibility {
    pub n: usize,
    /// Row parities sum to 0 and column parities to n mod 2 = 1, yet both
    /// sum the same entries; so no matrix meets both constraints.
    pub parity_contradiction: bool,
    pub exhaustive: Option<ExhaustiveVerdict>,
}

impl ClassicalImpossibility {
    pub fn impossible(&self) -> bool {
        self.parity_contradiction && self.exhaustive.as_ref().is_none_or(|e| e.valid_matrices == 0 && e.best_wins < e.input_pairs)
    }
}

pub fn classical_impossibility(n: usize) -> Result<ClassicalImpossibility, MagicError> {
    check_size(n)?;
    let row_total = 0;
    let column_total = n % 2;
    Ok(ClassicalImpossibility {
        n,
        parity_contradiction: row_total != column_total,
        exhaustive: (n == 3).then(exhaustive_n3),
    })
}

fn exhaustive_n3() -> ExhaustiveVerdict {
    let bit = |m: u32, r: usize, c: usize| (m >> (3 * r + c)) & 1;
    let valid_matrices = (0..512u32)
        .filter(|&m| {
            (0..3).all(|r| (0..3).map(|c| bit(m, r, c)).sum::<u32>() % 2 == 0)
                && (0..3).all(|c| (0..3).map(|r| bit(m, r, c)).sum::<u32>() % 2 == 1)
        })
        .count() as u32;

    let rows: Vec<u32> = (0..8).filter(|v: &u32| v.count_ones() % 2 == 0).collect();
    let cols: Vec<u32> = (0..8).filter(|v: &u32| v.count_ones() % 2 == 1).collect();
    let mut best = 0;
    let mut pairs = 0;
    for alice in 0..64u32 {
        let r: Vec<u32> = (0..3).map(|i| rows[((alice >> (2 * i)) & 3) as usize]).collect();
        for bob in 0..64u32 {
            let c: Vec<u32> = (0..3).map(|j| cols[((bob >> (2 * j)) & 3) as usize]).collect();
            pairs += 1;
            let wins = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .filter(|&(i, j)| (r[i] >> j) & 1 == (c[j] >> i) & 1)
                .count() as u32;
            best = best.max(wins);
        }
    }
    ExhaustiveVerdict {
        matrices: 512,
        valid_matrices,
        strategy_pairs: pairs,
        input_pairs: 9,
        best_wins: best,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlbox::pr_branches;

    fn branch(x: u8, y: u8, a: u8) -> PrBoxBranch {
        pr_branches(x, y)[a as usize]
    }

    #[test]
    fn judge_examples() {
        let g = MagicGame::new(3).unwrap();
        assert_eq!(g.judge(&1, &1, &vec![0, 1, 1], &vec![1, 0, 0]), Err(INTERSECTION));
        assert_eq!(g.judge(&3, &1, &vec![0, 0, 0], &vec![1, 0, 0]), Ok(()));
        assert_eq!(g.judge(&1, &1, &vec![1, 0, 0], &vec![1, 0, 0]), Err(ROW_PARITY));
        assert_eq!(g.judge(&1, &1, &vec![0, 0, 0], &vec![1, 1, 0]), Err(COLUMN_PARITY));
        assert_eq!(g.judge(&1, &1, &vec![0, 0], &vec![1, 0, 0]), Err(LENGTH));
    }

    #[test]
    fn sizes_rejected() {
        assert_eq!(MagicGame::new(4), Err(MagicError::Even(4)));
        assert_eq!(MagicGame::new(1), Err(MagicError::TooSmall(1)));
        assert!(MagicError::Even(4).to_string().contains("classical"));
    }

    #[test]
    fn family_examples() {
        assert_eq!(strategy_vectors(3).unwrap().g(1), vec![0, 1, 0]);
        assert_eq!(strategy_vectors(5).unwrap().f2(), vec![0, 0, 0, 1, 1]);
        assert_eq!(strategy_vectors(3).unwrap().e(2), vec![1, 0, 1]);
    }

    #[test]
    fn strategy_examples() {
        assert_eq!(magic_strategy(MagicTag::A0, 3, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(magic_strategy(MagicTag::B1, 3, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(magic_strategy(MagicTag::A1, 5, 4).unwrap(), vec![1, 1, 1, 1, 0]);
        assert_eq!(magic_strategy(MagicTag::A0, 3, 4), Err(MagicError::Index { index: 4, n: 3 }));
        assert_eq!(magic_strategy(MagicTag::A0, 3, 0), Err(MagicError::Index { index: 0, n: 3 }));
    }

    #[test]
    fn round_examples() {
        let (row, col) = magic_nlbox_round(3, 3, 3, &branch(1, 1, 0)).unwrap();
        assert_eq!((row.clone(), col.clone()), (vec![0, 0, 0], vec![1, 0, 0]));
        let g = MagicGame::new(3).unwrap();
        assert!(g.wins(&3, &3, &row, &col));

        let row = magic_strategy(MagicTag::A0, 3, 3).unwrap();
        let col = magic_strategy(MagicTag::B0, 3, 3).unwrap();
        assert_eq!(g.judge(&3, &3, &row, &col), Err(INTERSECTION));

        let g7 = MagicGame::new(7).unwrap();
        let (row, col) = magic_nlbox_round(7, 2, 5, &branch(0, 0, 1)).unwrap();
        assert_eq!(row, magic_strategy(MagicTag::A1, 7, 2).unwrap());
        assert_eq!(col, magic_strategy(MagicTag::B1, 7, 5).unwrap());
        assert!(g7.wins(&2, &5, &row, &col));

        assert!(matches!(
            magic_nlbox_round(3, 3, 3, &branch(0, 1, 0)),
            Err(MagicError::Wiring { .. })
        ));
    }

    #[test]
    fn verification_counts() {
        for (n, total) in [(3, 18), (5, 50), (21, 882)] {
            let r = magic_verify_nlbox(n).unwrap();
            assert_eq!((r.cases_total, r.cases_won), (total, total));
        }
    }

    #[test]
    fn parities_hold_by_construction() {
        for n in (3..=41).step_by(2) {
            for i in 1..=n {
                for tag in [MagicTag::A0, MagicTag::A1] {
                    assert_eq!(parity(&magic_strategy(tag, n, i).unwrap()), 0);
                }
                for tag in [MagicTag::B0, MagicTag::B1] {
                    assert_eq!(parity(&magic_strategy(tag, n, i).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn pairs_disagree_exactly_at_the_corner() {
        use MagicTag::*;
        for n in (3..=25).step_by(2) {
            let agree = |a: MagicTag, b: MagicTag, i: usize, j: usize| {
                magic_strategy(a, n, i).unwrap()[j - 1] == magic_strategy(b, n, j).unwrap()[i - 1]
            };
            for i in 1..=n {
                for j in 1..=n {
                    let corner = (i, j) == (n, n);
                    assert_eq!(agree(A0, B0, i, j), !corner, "n={n} ({i},{j})");
                    assert_eq!(agree(A1, B1, i, j), !corner, "n={n} ({i},{j})");
                }
            }
            assert!(agree(A0, B1, n, n));
            assert!(agree(A1, B0, n, n));
        }
    }

    #[test]
    fn classical_verdicts() {
        let c = classical_impossibility(3).unwrap();
        let e = c.exhaustive.clone().unwrap();
        assert_eq!((e.matrices, e.valid_matrices, e.strategy_pairs), (512, 0, 4096));
        assert!(c.impossible());
        let c5 = classical_impossibility(5).unwrap();
        assert!(c5.parity_contradiction && c5.exhaustive.is_none());
    }
}
