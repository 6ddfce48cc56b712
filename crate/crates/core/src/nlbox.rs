//! The Popescu-Rohrlich box and two-input correlation boxes.
//!
//! Probabilities are exact rationals. Correlators use the +/-1 encoding
//! `(-1)^a`, `(-1)^b`, so the PR box reaches CHSH value 4 and every local
//! deterministic box stays at or below 2.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::game::Party;

/// Largest CHSH value reachable by measurements on entangled quantum
/// states, `2 * sqrt(2)`. Documented for comparison only, never derived.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

/// CHSH bound for local hidden-variable models.
pub const LOCAL_BOUND: i64 = 2;

/// One deterministic branch of the PR box: `a ^ b == x & y`, weight 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrBoxBranch {
    pub x: u8,
    pub y: u8,
    pub a: u8,
    pub b: u8,
    pub weight: Rational64,
}

impl PrBoxBranch {
    pub fn is_consistent(&self) -> bool {
        self.a ^ self.b == self.x & self.y && self.a <= 1 && self.b <= 1
    }
}

/// The two output pairs of the PR box for inputs `(x, y)`, ordered by `a`.
///
/// # Panics
///
/// If `x` or `y` is not a bit.
pub fn pr_branches(x: u8, y: u8) -> [PrBoxBranch; 2] {
    assert!(x <= 1 && y <= 1, "PR box inputs must be bits, got ({x}, {y})");
    let half = Rational64::new(1, 2);
    let xy = x & y;
    [0u8, 1].map(|a| PrBoxBranch {
        x,
        y,
        a,
        b: a ^ xy,
        weight: half,
    })
}

#[derive(Debug, Error, PartialEq)]
pub enum BoxError {
    #[error("distribution for inputs (x={x}, y={y}) sums to {sum}, not 1")]
    NotNormalized { x: u8, y: u8, sum: Rational64 },
    #[error("negative probability {p} at (x={x}, y={y}, a={a}, b={b})")]
    Negative { x: u8, y: u8, a: u8, b: u8, p: Rational64 },
}

/// An offending marginal: `party`'s output distribution, for its own input
/// `own_input`, differs between the other party's inputs 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignallingWitness {
    pub party: Party,
    pub own_input: u8,
    /// `P(output = 0)` when the other party inputs 0 and 1 respectively.
    pub marginal_zero: [Rational64; 2],
}

impl fmt::Display for SignallingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} marginal for input {} depends on the other input: P(0)={} vs {}",
            self.party, self.own_input, self.marginal_zero[0], self.marginal_zero[1]
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoSignalling {
    Pass,
    Fail(SignallingWitness),
}

impl NoSignalling {
    pub fn passed(&self) -> bool {
        matches!(self, NoSignalling::Pass)
    }
}

/// Conditional distribution `P(a, b | x, y)` over bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationBox {
    table: [[[[Rational64; 2]; 2]; 2]; 2],
}

impl CorrelationBox {
    pub fn from_fn(mut p: impl FnMut(u8, u8, u8, u8) -> Rational64) -> Self {
        let mut table = [[[[Rational64::zero(); 2]; 2]; 2]; 2];
        for (x, tx) in table.iter_mut().enumerate() {
            for (y, ty) in tx.iter_mut().enumerate() {
                for (a, ta) in ty.iter_mut().enumerate() {
                    for (b, cell) in ta.iter_mut().enumerate() {
                        *cell = p(x as u8, y as u8, a as u8, b as u8);
                    }
                }
            }
        }
        CorrelationBox { table }
    }

    pub fn pr() -> Self {
        Self::from_fn(|x, y, a, b| {
            if a ^ b == x & y {
                Rational64::new(1, 2)
            } else {
                Rational64::zero()
            }
        })
    }

    /// `a = alice[x]`, `b = bob[y]`.
    pub fn local_deterministic(alice: [u8; 2], bob: [u8; 2]) -> Self {
        Self::from_fn(|x, y, a, b| {
            if a == alice[x as usize] && b == bob[y as usize] {
                Rational64::one()
            } else {
                Rational64::zero()
            }
        })
    }

    /// All 16 local deterministic boxes.
    pub fn all_local_deterministic() -> Vec<Self> {
        let fns = [[0, 0], [0, 1], [1, 0], [1, 1]];
        fns.iter()
            .flat_map(|&f| fns.iter().map(move |&g| Self::local_deterministic(f, g)))
            .collect()
    }

    pub fn uniform() -> Self {
        Self::from_fn(|_, _, _, _| Rational64::new(1, 4))
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: Rational64) -> Self {
        Self::from_fn(|x, y, a, b| lambda * self.prob(x, y, a, b) + (Rational64::one() - lambda) * other.prob(x, y, a, b))
    }

    pub fn prob(&self, x: u8, y: u8, a: u8, b: u8) -> Rational64 {
        self.table[x as usize][y as usize][a as usize][b as usize]
    }

    pub fn validate(&self) -> Result<(), BoxError> {
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = Rational64::zero();
                for a in 0..2 {
                    for b in 0..2 {
                        let p = self.prob(x, y, a, b);
                        if p.is_negative() {
                            return Err(BoxError::Negative { x, y, a, b, p });
                        }
                        sum += p;
                    }
                }
                if !sum.is_one() {
                    return Err(BoxError::NotNormalized { x, y, sum });
                }
            }
        }
        Ok(())
    }

    fn alice_zero(&self, x: u8, y: u8) -> Rational64 {
        self.prob(x, y, 0, 0) + self.prob(x, y, 0, 1)
    }

    fn bob_zero(&self, x: u8, y: u8) -> Rational64 {
        self.prob(x, y, 0, 0) + self.prob(x, y, 1, 0)
    }

    /// Alice's marginal must not depend on `y`, Bob's must not depend on `x`.
    pub fn check_no_signalling(&self) -> Result<NoSignalling, BoxError> {
        self.validate()?;
        for x in 0..2 {
            let m = [self.alice_zero(x, 0), self.alice_zero(x, 1)];
            if m[0] != m[1] {
                return Ok(NoSignalling::Fail(SignallingWitness {
                    party: Party::Alice,
                    own_input: x,
                    marginal_zero: m,
                }));
            }
        }
        for y in 0..2 {
            let m = [self.bob_zero(0, y), self.bob_zero(1, y)];
            if m[0] != m[1] {
                return Ok(NoSignalling::Fail(SignallingWitness {
                    party: Party::Bob,
                    own_input: y,
                    marginal_zero: m,
                }));
            }
        }
        Ok(NoSignalling::Pass)
    }

    /// `E(x, y) = sum over (a, b) of (-1)^(a xor b) P(a, b | x, y)`.
    pub fn correlator(&self, x: u8, y: u8) -> Rational64 {
        let mut e = Rational64::zero();
        for a in 0..2 {
            for b in 0..2 {
                let p = self.prob(x, y, a, b);
                if a ^ b == 0 {
                    e += p;
                } else {
                    e -= p;
                }
            }
        }
        e
    }

    /// `|E(0,0) + E(0,1) + E(1,0) - E(1,1)|`.
    pub fn chsh_value(&self) -> Result<Rational64, BoxError> {
        self.validate()?;
        let s = self.correlator(0, 0) + self.correlator(0, 1) + self.correlator(1, 0) - self.correlator(1, 1);
        Ok(s.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn branches_for_equal_inputs_zero() {
        let br = pr_branches(0, 0);
        assert_eq!([(br[0].a, br[0].b), (br[1].a, br[1].b)], [(0, 0), (1, 1)]);
    }

    #[test]
    fn branches_for_both_inputs_one_anticorrelate() {
        let br = pr_branches(1, 1);
        assert_eq!([(br[0].a, br[0].b), (br[1].a, br[1].b)], [(0, 1), (1, 0)]);
    }

    #[test]
    fn branch_weights_are_exact_halves() {
        for x in 0..2 {
            for y in 0..2 {
                let br = pr_branches(x, y);
                assert!(br.iter().all(|b| b.weight == Rational64::new(1, 2) && b.is_consistent()));
                assert_eq!(br.iter().map(|b| b.weight).sum::<Rational64>(), r(1));
                // Alice's output is uniform whatever y is.
                assert_eq!(br.iter().filter(|b| b.a == 0).count(), 1);
            }
        }
    }

    #[test]
    #[should_panic(expected = "must be bits")]
    fn non_bit_input_panics() {
        pr_branches(2, 0);
    }

    #[test]
    fn pr_box_is_no_signalling_with_chsh_four() {
        let pr = CorrelationBox::pr();
        assert_eq!(pr.check_no_signalling(), Ok(NoSignalling::Pass));
        assert_eq!(pr.chsh_value(), Ok(r(4)));
    }

    #[test]
    fn local_deterministic_boxes_peak_at_two() {
        let boxes = CorrelationBox::all_local_deterministic();
        assert_eq!(boxes.len(), 16);
        let values: Vec<Rational64> = boxes.iter().map(|b| b.chsh_value().unwrap()).collect();
        assert!(values.iter().all(|v| *v <= r(LOCAL_BOUND)));
        assert_eq!(values.iter().max(), Some(&r(2)));
        assert!(boxes.iter().all(|b| b.check_no_signalling().unwrap().passed()));
    }

    #[test]
    fn uniform_box_has_zero_chsh() {
        assert_eq!(CorrelationBox::uniform().chsh_value(), Ok(r(0)));
    }

    #[test]
    fn alice_copying_bob_input_signals() {
        // a = y, b = 0
        let b = CorrelationBox::from_fn(|_, y, a, b| if a == y && b == 0 { r(1) } else { r(0) });
        match b.check_no_signalling().unwrap() {
            NoSignalling::Fail(w) => {
                assert_eq!(w.party, Party::Alice);
                assert_eq!(w.marginal_zero, [r(1), r(0)]);
            }
            NoSignalling::Pass => panic!("signalling box passed"),
        }
    }

    #[test]
    fn malformed_box_is_distinct_from_signalling() {
        let b = CorrelationBox::from_fn(|_, _, _, _| Rational64::new(1, 3));
        assert!(matches!(b.check_no_signalling(), Err(BoxError::NotNormalized { .. })));
        assert!(matches!(b.chsh_value(), Err(BoxError::NotNormalized { .. })));
        let neg = CorrelationBox::from_fn(|_, _, a, b| match (a, b) {
            (0, 0) => r(2),
            (1, 1) => r(-1),
            _ => r(0),
        });
        assert!(matches!(neg.validate(), Err(BoxError::Negative { .. })));
    }

    #[test]
    fn tsirelson_sits_between_local_and_pr() {
        assert!(TSIRELSON_BOUND > 2.0 && TSIRELSON_BOUND < 4.0);
        assert!((TSIRELSON_BOUND * TSIRELSON_BOUND - 8.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn mixtures_of_no_signalling_boxes_stay_no_signalling(
            picks in prop::collection::vec((0usize..17, 1i64..20), 1..5)
        ) {
            let mut pool = CorrelationBox::all_local_deterministic();
            pool.push(CorrelationBox::pr());
            let mut acc = pool[picks[0].0].clone();
            let mut mass = picks[0].1;
            for &(i, w) in &picks[1..] {
                // acc carries weight mass/(mass+w)
                acc = acc.mix(&pool[i], Rational64::new(mass, mass + w));
                mass += w;
            }
            prop_assert_eq!(acc.check_no_signalling(), Ok(NoSignalling::Pass));
            prop_assert!(acc.chsh_value().unwrap() <= r(4));
        }
    }
}
