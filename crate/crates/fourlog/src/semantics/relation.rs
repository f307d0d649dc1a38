//! M-extensions: relations whose last column is a non-`bot` truth value,
//! functional in that column, with the extensional order and its expansion
//! mapping over a finite domain.

use std::collections::BTreeMap;
use std::fmt;

use crate::bilattice::{self, Order, TruthValue};

use super::DomainElement;

/// A relation in the m-extension space.
///
/// `arity` counts every column including the trailing truth value, so rows
/// are keyed by data prefixes of length `arity - 1`. Sentences yield arity-1
/// relations: the empty prefix mapped to the sentence value, or no row at all
/// when the sentence is unknown.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MRelation {
    arity: usize,
    rows: BTreeMap<Vec<DomainElement>, TruthValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("tuple value may not be bot")]
    UnknownValue,
    #[error("prefix length {got} does not match arity {arity}")]
    PrefixLength { arity: usize, got: usize },
    #[error("functional violation: prefix already mapped to {existing}, got {new}")]
    Functional { existing: TruthValue, new: TruthValue },
    #[error("cannot expand arity {arity} relation to smaller arity {target}")]
    ShrinkingExpand { arity: usize, target: usize },
    #[error("relation negation requires arity 1, got {0}")]
    NegArity(usize),
}

impl MRelation {
    pub fn new(arity: usize) -> Self {
        assert!(arity >= 1, "relations carry at least the truth column");
        Self {
            arity,
            rows: BTreeMap::new(),
        }
    }

    /// Arity-1 relation holding a single truth value, or empty for `bot`.
    pub fn from_sentence_value(value: TruthValue) -> Self {
        let mut rel = Self::new(1);
        if value != TruthValue::Unknown {
            rel.rows.insert(Vec::new(), value);
        }
        rel
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vec<DomainElement>, TruthValue)> {
        self.rows.iter().map(|(k, v)| (k, *v))
    }

    pub fn value_of(&self, prefix: &[DomainElement]) -> Option<TruthValue> {
        self.rows.get(prefix).copied()
    }

    pub fn insert(&mut self, prefix: Vec<DomainElement>, value: TruthValue) -> Result<(), RelationError> {
        if value == TruthValue::Unknown {
            return Err(RelationError::UnknownValue);
        }
        if prefix.len() != self.arity - 1 {
            return Err(RelationError::PrefixLength {
                arity: self.arity,
                got: prefix.len(),
            });
        }
        match self.rows.get(&prefix) {
            Some(&existing) if existing != value => {
                Err(RelationError::Functional { existing, new: value })
            }
            _ => {
                self.rows.insert(prefix, value);
                Ok(())
            }
        }
    }

    /// Drops the truth column, leaving the set of known data prefixes.
    pub fn project_known(&self) -> Vec<Vec<DomainElement>> {
        self.rows.keys().cloned().collect()
    }

    /// Expansion to arity `m`: every row `(u, a)` becomes
    /// `{u} x D^(m - arity) x {a}`. Expanding to the own arity is the
    /// identity; the empty relation stays empty.
    pub fn expand(&self, domain: &[DomainElement], m: usize) -> Result<MRelation, RelationError> {
        if m < self.arity {
            return Err(RelationError::ShrinkingExpand {
                arity: self.arity,
                target: m,
            });
        }
        if m == self.arity {
            return Ok(self.clone());
        }
        let mut out = MRelation::new(m);
        let pad = m - self.arity;
        for (prefix, value) in self.rows() {
            for suffix in cartesian(domain, pad) {
                let mut row = prefix.clone();
                row.extend(suffix);
                out.insert(row, value)?;
            }
        }
        Ok(out)
    }

    /// Negation of an arity-1 relation: the negated value, dropped when the
    /// negation is `bot` (which the involution never produces from a stored
    /// value), and empty for empty.
    pub fn negate(&self) -> Result<MRelation, RelationError> {
        if self.arity != 1 {
            return Err(RelationError::NegArity(self.arity));
        }
        let mut out = MRelation::new(1);
        if let Some(value) = self.value_of(&[]) {
            let neg = bilattice::negate(value);
            if neg != TruthValue::Unknown {
                out.insert(Vec::new(), neg)?;
            }
        }
        Ok(out)
    }

    /// Combination of two relations under a binary truth operation, with the
    /// shared index set identifying equal columns (1-based data positions of
    /// self and other). Result columns are self's data columns followed by
    /// other's unshared data columns; `ranges` supplies the candidate
    /// elements per result column. Absent rows count as `bot`, and rows whose
    /// combined value is `bot` are dropped, so the result agrees with
    /// pointwise valuation.
    pub fn combine(
        &self,
        other: &MRelation,
        shared: &[(usize, usize)],
        op: fn(TruthValue, TruthValue) -> TruthValue,
        ranges: &[Vec<DomainElement>],
    ) -> Result<MRelation, RelationError> {
        let left_cols = self.arity - 1;
        let right_cols = other.arity - 1;
        let right_unshared: Vec<usize> = (1..=right_cols)
            .filter(|j| !shared.iter().any(|(_, sj)| sj == j))
            .collect();
        let total = left_cols + right_unshared.len();
        assert_eq!(ranges.len(), total, "one element range per result column");

        let mut out = MRelation::new(total + 1);
        for row in cartesian_ranges(ranges) {
            let left_prefix: Vec<DomainElement> = row[..left_cols].to_vec();
            let mut right_prefix = vec![None; right_cols];
            for &(i, j) in shared {
                right_prefix[j - 1] = Some(row[i - 1].clone());
            }
            for (offset, &j) in right_unshared.iter().enumerate() {
                right_prefix[j - 1] = Some(row[left_cols + offset].clone());
            }
            let right_prefix: Vec<DomainElement> =
                right_prefix.into_iter().map(|e| e.expect("column filled")).collect();
            let a = self.value_of(&left_prefix).unwrap_or(TruthValue::Unknown);
            let b = other.value_of(&right_prefix).unwrap_or(TruthValue::Unknown);
            let value = op(a, b);
            if value != TruthValue::Unknown {
                out.insert(row, value)?;
            }
        }
        Ok(out)
    }
}

/// Extensional order: the empty relation is below everything; otherwise both
/// relations are expanded to the larger arity and every row of the first must
/// find the same data prefix in the second with a truth value at least as
/// high in the truth order.
pub fn ext_leq(domain: &[DomainElement], r1: &MRelation, r2: &MRelation) -> bool {
    if r1.is_empty() {
        return true;
    }
    if r2.is_empty() {
        return false;
    }
    let m = r1.arity.max(r2.arity);
    let e1 = r1.expand(domain, m).expect("expanding to max arity");
    let e2 = r2.expand(domain, m).expect("expanding to max arity");
    e1.rows().all(|(prefix, a)| {
        e2.value_of(prefix)
            .is_some_and(|b| bilattice::leq(Order::Truth, a, b))
    })
}

pub fn ext_equiv(domain: &[DomainElement], r1: &MRelation, r2: &MRelation) -> bool {
    ext_leq(domain, r1, r2) && ext_leq(domain, r2, r1)
}

fn cartesian(domain: &[DomainElement], n: usize) -> Vec<Vec<DomainElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |d| {
                    let mut row = prefix.clone();
                    row.push(d.clone());
                    row
                })
            })
            .collect();
    }
    out
}

pub(crate) fn cartesian_ranges(ranges: &[Vec<DomainElement>]) -> Vec<Vec<DomainElement>> {
    let mut out = vec![Vec::new()];
    for range in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                range.iter().map(move |d| {
                    let mut row = prefix.clone();
                    row.push(d.clone());
                    row
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for MRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        f.write_str("{")?;
        for (prefix, value) in self.rows() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            if prefix.is_empty() {
                write!(f, "{value}")?;
            } else {
                f.write_str("(")?;
                for (i, e) in prefix.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ", {value})")?;
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilattice::TruthValue::{Both as B, False as F, True as T};

    fn ind(name: &str) -> DomainElement {
        DomainElement::Individual(name.to_string())
    }

    fn dom() -> Vec<DomainElement> {
        vec![ind("a"), ind("b")]
    }

    #[test]
    fn functional_invariant_enforced() {
        let mut r = MRelation::new(2);
        r.insert(vec![ind("a")], T).unwrap();
        assert!(matches!(
            r.insert(vec![ind("a")], F),
            Err(RelationError::Functional { .. })
        ));
        assert!(matches!(
            r.insert(vec![ind("b")], TruthValue::Unknown),
            Err(RelationError::UnknownValue)
        ));
    }

    #[test]
    fn expansion_cases() {
        let single = MRelation::from_sentence_value(T);
        let expanded = single.expand(&dom(), 2).unwrap();
        assert_eq!(expanded.len(), 2);
        assert_eq!(expanded.value_of(&[ind("a")]), Some(T));
        assert_eq!(expanded.value_of(&[ind("b")]), Some(T));

        assert_eq!(single.expand(&dom(), 1).unwrap(), single);
        assert!(MRelation::new(1).expand(&dom(), 3).unwrap().is_empty());
        assert!(matches!(
            expanded.expand(&dom(), 1),
            Err(RelationError::ShrinkingExpand { .. })
        ));
    }

    #[test]
    fn extensional_order_and_tops() {
        let domain = dom();
        let empty = MRelation::new(2);
        let mut some = MRelation::new(2);
        some.insert(vec![ind("a")], B).unwrap();
        let mut truer = MRelation::new(2);
        truer.insert(vec![ind("a")], T).unwrap();
        let top = MRelation::from_sentence_value(T);

        assert!(ext_leq(&domain, &empty, &some));
        assert!(!ext_leq(&domain, &some, &empty));
        assert!(ext_leq(&domain, &some, &truer));
        assert!(!ext_leq(&domain, &truer, &some));
        for r in [&empty, &some, &truer] {
            assert!(ext_leq(&domain, r, &top), "everything sits below {{t}}");
        }
        assert!(ext_equiv(&domain, &some, &some));
    }

    #[test]
    fn negation_of_unary_relations() {
        let top = MRelation::from_sentence_value(B);
        assert_eq!(top.negate().unwrap(), top);
        let t = MRelation::from_sentence_value(T);
        assert_eq!(t.negate().unwrap(), MRelation::from_sentence_value(F));
        let empty = MRelation::new(1);
        assert!(empty.negate().unwrap().is_empty());
        assert!(MRelation::new(2).negate().is_err());
    }
}
