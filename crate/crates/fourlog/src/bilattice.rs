//! The four-valued truth algebra: Belnap's values under the truth and
//! knowledge orders, with all connective and aggregate operations.
//!
//! Binary operations are precomputed 4x4 tables. On first use the tables are
//! checked against glb/lub computed directly from the declared order
//! relations, and the implication table against the relative pseudocomplement
//! `x => y = lub { z | z /\ x <= y }`, so a transcription slip cannot survive
//! startup.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

/// One of the four truth values.
///
/// `False` and `True` are the classical values; `Unknown` (written `bot`)
/// carries no information and `Both` (written `top`) carries contradictory
/// information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum TruthValue {
    False = 0,
    Unknown = 1,
    Both = 2,
    True = 3,
}

use TruthValue::{Both as B, False as F, True as T, Unknown as U};

/// All four values, in table index order.
pub const ALL_VALUES: [TruthValue; 4] = [F, U, B, T];

/// Which of the two lattice orders an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// `f <= bot/top <= t`; meet and join are conjunction and disjunction.
    Truth,
    /// `bot <=k f/t <=k top`; join combines evidence from learning.
    Knowledge,
}

/// Meet or join, for [`agg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggKind {
    Meet,
    Join,
}

// Cover pairs of the two partial orders; reflexivity and transitivity are
// closed over by `leq_from_covers` in the validation oracle.
const TRUTH_COVERS: [(TruthValue, TruthValue); 4] = [(F, U), (F, B), (U, T), (B, T)];
const KNOWLEDGE_COVERS: [(TruthValue, TruthValue); 4] = [(U, F), (U, T), (F, B), (T, B)];

const TRUTH_MEET: [[TruthValue; 4]; 4] = [
    [F, F, F, F],
    [F, U, F, U],
    [F, F, B, B],
    [F, U, B, T],
];

const TRUTH_JOIN: [[TruthValue; 4]; 4] = [
    [F, U, B, T],
    [U, U, T, T],
    [B, T, B, T],
    [T, T, T, T],
];

const K_MEET: [[TruthValue; 4]; 4] = [
    [F, U, F, U],
    [U, U, U, U],
    [F, U, B, T],
    [U, U, T, T],
];

const K_JOIN: [[TruthValue; 4]; 4] = [
    [F, F, B, B],
    [F, U, B, T],
    [B, B, B, B],
    [B, T, B, T],
];

// Rows are the antecedent, columns the consequent.
const IMPLIES: [[TruthValue; 4]; 4] = [
    [T, T, T, T],
    [B, T, B, T],
    [U, U, T, T],
    [F, U, B, T],
];

/// Paraconsistent negation: switches `f` and `t`, leaves `bot` and `top`.
pub fn negate(a: TruthValue) -> TruthValue {
    match a {
        F => T,
        T => F,
        U => U,
        B => B,
    }
}

/// Greatest lower bound under the truth order (conjunction).
pub fn truth_meet(a: TruthValue, b: TruthValue) -> TruthValue {
    checked_tables().truth_meet[a as usize][b as usize]
}

/// Least upper bound under the truth order (disjunction).
pub fn truth_join(a: TruthValue, b: TruthValue) -> TruthValue {
    checked_tables().truth_join[a as usize][b as usize]
}

/// Greatest lower bound under the knowledge order.
pub fn k_meet(a: TruthValue, b: TruthValue) -> TruthValue {
    checked_tables().k_meet[a as usize][b as usize]
}

/// Least upper bound under the knowledge order; this is the operator that
/// combines learned evidence.
pub fn k_join(a: TruthValue, b: TruthValue) -> TruthValue {
    checked_tables().k_join[a as usize][b as usize]
}

/// Relative pseudocomplement implication of the truth lattice.
pub fn implies(a: TruthValue, b: TruthValue) -> TruthValue {
    checked_tables().implies[a as usize][b as usize]
}

/// Many-valued equivalence: `t` when the two values coincide, `f` otherwise.
pub fn equiv(a: TruthValue, b: TruthValue) -> TruthValue {
    if a == b {
        T
    } else {
        F
    }
}

/// Partial-order test under the chosen order.
pub fn leq(order: Order, a: TruthValue, b: TruthValue) -> bool {
    match order {
        Order::Truth => checked_tables().truth_leq[a as usize][b as usize],
        Order::Knowledge => checked_tables().k_leq[a as usize][b as usize],
    }
}

/// Iterated meet/join over a finite collection of values.
///
/// The empty collection yields the identity of the operation: the lattice top
/// for a meet and the lattice bottom for a join, so quantifiers over vacuous
/// ranges reduce to the body value.
pub fn agg(order: Order, kind: AggKind, values: impl IntoIterator<Item = TruthValue>) -> TruthValue {
    let (unit, op): (TruthValue, fn(TruthValue, TruthValue) -> TruthValue) = match (order, kind) {
        (Order::Truth, AggKind::Meet) => (T, truth_meet),
        (Order::Truth, AggKind::Join) => (F, truth_join),
        (Order::Knowledge, AggKind::Meet) => (B, k_meet),
        (Order::Knowledge, AggKind::Join) => (U, k_join),
    };
    values.into_iter().fold(unit, op)
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            T => "t",
            F => "f",
            U => "bot",
            B => "top",
        })
    }
}

/// Error for an unrecognized truth-value literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown truth value `{0}` (expected t, f, bot or top)")]
pub struct ParseTruthValueError(pub String);

impl FromStr for TruthValue {
    type Err = ParseTruthValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" => Ok(T),
            "f" => Ok(F),
            "bot" => Ok(U),
            "top" => Ok(B),
            other => Err(ParseTruthValueError(other.to_string())),
        }
    }
}

struct Tables {
    truth_meet: [[TruthValue; 4]; 4],
    truth_join: [[TruthValue; 4]; 4],
    k_meet: [[TruthValue; 4]; 4],
    k_join: [[TruthValue; 4]; 4],
    implies: [[TruthValue; 4]; 4],
    truth_leq: [[bool; 4]; 4],
    k_leq: [[bool; 4]; 4],
}

fn checked_tables() -> &'static Tables {
    static TABLES: LazyLock<Tables> = LazyLock::new(|| {
        let truth_leq = leq_from_covers(&TRUTH_COVERS);
        let k_leq = leq_from_covers(&KNOWLEDGE_COVERS);
        for a in ALL_VALUES {
            for b in ALL_VALUES {
                let (i, j) = (a as usize, b as usize);
                assert_eq!(TRUTH_MEET[i][j], bound(&truth_leq, a, b, true), "truth meet {a} {b}");
                assert_eq!(TRUTH_JOIN[i][j], bound(&truth_leq, a, b, false), "truth join {a} {b}");
                assert_eq!(K_MEET[i][j], bound(&k_leq, a, b, true), "knowledge meet {a} {b}");
                assert_eq!(K_JOIN[i][j], bound(&k_leq, a, b, false), "knowledge join {a} {b}");
                // x => y = lub { z | z /\ x <= y }
                let mut residual = F;
                for z in ALL_VALUES {
                    let m = bound(&truth_leq, z, a, true);
                    if truth_leq[m as usize][j] {
                        residual = bound(&truth_leq, residual, z, false);
                    }
                }
                assert_eq!(IMPLIES[i][j], residual, "implication {a} {b}");
            }
        }
        Tables {
            truth_meet: TRUTH_MEET,
            truth_join: TRUTH_JOIN,
            k_meet: K_MEET,
            k_join: K_JOIN,
            implies: IMPLIES,
            truth_leq,
            k_leq,
        }
    });
    &TABLES
}

fn leq_from_covers(covers: &[(TruthValue, TruthValue)]) -> [[bool; 4]; 4] {
    let mut leq = [[false; 4]; 4];
    for v in ALL_VALUES {
        leq[v as usize][v as usize] = true;
    }
    for &(a, b) in covers {
        leq[a as usize][b as usize] = true;
    }
    // transitive closure; 4 elements, so one pass per element suffices
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

/// Unique glb (`meet = true`) or lub of `a` and `b` in the given order.
fn bound(leq: &[[bool; 4]; 4], a: TruthValue, b: TruthValue, meet: bool) -> TruthValue {
    let below = |x: TruthValue, y: TruthValue| {
        if meet {
            leq[x as usize][y as usize]
        } else {
            leq[y as usize][x as usize]
        }
    };
    let mut best: Option<TruthValue> = None;
    for z in ALL_VALUES {
        if below(z, a) && below(z, b) {
            best = Some(match best {
                Some(w) if below(z, w) => w,
                _ => z,
            });
        }
    }
    let best = best.expect("lattice is complete");
    // the candidate must dominate every other bound, or the order is broken
    for z in ALL_VALUES {
        if below(z, a) && below(z, b) {
            assert!(below(z, best), "no unique bound for {a}, {b}");
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_corner_values() {
        assert_eq!(truth_meet(B, U), F);
        assert_eq!(truth_join(B, U), T);
        assert_eq!(k_meet(F, T), U);
        assert_eq!(k_join(F, T), B);
        assert_eq!(implies(T, U), U);
        assert_eq!(implies(U, F), B);
        assert_eq!(implies(B, U), U);
        for x in ALL_VALUES {
            assert_eq!(implies(F, x), T);
        }
        assert_eq!(equiv(B, B), T);
        assert_eq!(equiv(U, T), F);
    }

    #[test]
    fn negation_is_involutive_and_order_compatible() {
        for a in ALL_VALUES {
            assert_eq!(negate(negate(a)), a);
            for b in ALL_VALUES {
                if leq(Order::Truth, a, b) {
                    assert!(leq(Order::Truth, negate(b), negate(a)));
                }
                if leq(Order::Knowledge, a, b) {
                    assert!(leq(Order::Knowledge, negate(a), negate(b)));
                }
            }
        }
    }

    #[test]
    fn de_morgan_and_distributivity() {
        for a in ALL_VALUES {
            for b in ALL_VALUES {
                assert_eq!(negate(truth_meet(a, b)), truth_join(negate(a), negate(b)));
                assert_eq!(negate(truth_join(a, b)), truth_meet(negate(a), negate(b)));
                for c in ALL_VALUES {
                    assert_eq!(
                        truth_meet(a, truth_join(b, c)),
                        truth_join(truth_meet(a, b), truth_meet(a, c))
                    );
                    assert_eq!(
                        truth_join(a, truth_meet(b, c)),
                        truth_meet(truth_join(a, b), truth_join(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn residuation() {
        for x in ALL_VALUES {
            for y in ALL_VALUES {
                for z in ALL_VALUES {
                    assert_eq!(
                        leq(Order::Truth, truth_meet(z, x), y),
                        leq(Order::Truth, z, implies(x, y))
                    );
                }
                assert_eq!(implies(x, y) == T, leq(Order::Truth, x, y));
            }
        }
    }

    #[test]
    fn incomparable_pairs() {
        assert!(!leq(Order::Truth, U, B));
        assert!(!leq(Order::Truth, B, U));
        assert!(!leq(Order::Knowledge, F, T));
        assert!(!leq(Order::Knowledge, T, F));
    }

    #[test]
    fn agg_identities_and_examples() {
        assert_eq!(agg(Order::Truth, AggKind::Meet, []), T);
        assert_eq!(agg(Order::Truth, AggKind::Join, []), F);
        assert_eq!(agg(Order::Knowledge, AggKind::Meet, []), B);
        assert_eq!(agg(Order::Knowledge, AggKind::Join, []), U);
        assert_eq!(agg(Order::Truth, AggKind::Join, [F, U, B]), T);
        assert_eq!(agg(Order::Knowledge, AggKind::Join, [F, T]), B);
        for a in ALL_VALUES {
            assert_eq!(truth_meet(a, T), a);
            assert_eq!(k_join(a, U), a);
        }
    }

    #[test]
    fn value_literals_round_trip() {
        for a in ALL_VALUES {
            assert_eq!(a.to_string().parse::<TruthValue>().unwrap(), a);
        }
        assert!("Top".parse::<TruthValue>().is_err());
    }
}
