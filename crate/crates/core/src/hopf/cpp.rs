//! Non-negative linear combinations of convolutions of graded projections.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::{format_rational, multinomial, rational_string, Rational};
use crate::error::{Error, Result};

/// One summand `weight · Proj_{d1} * … * Proj_{da}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecTerm {
    pub composition: Vec<usize>,
    #[serde(with = "rational_string")]
    pub weight: Rational,
}

/// A validated descent operator on the degree-`n` piece.
///
/// Stored in normal form: compositions have no zero parts, equal compositions
/// are merged, zero weights are dropped and terms are sorted by composition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CppSpec {
    n: usize,
    terms: Vec<SpecTerm>,
}

#[derive(Deserialize)]
struct RawSpec {
    n: usize,
    terms: Vec<SpecTerm>,
}

impl CppSpec {
    /// Normalises and validates raw `(weak composition, weight)` pairs.
    pub fn new(n: usize, raw: impl IntoIterator<Item = (Vec<usize>, Rational)>) -> Result<Self> {
        normalize_spec(n, raw)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        normalize_spec(raw.n, raw.terms.into_iter().map(|t| (t.composition, t.weight)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "composition": t.composition,
                "weight": format_rational(&t.weight),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[SpecTerm] {
        &self.terms
    }

    /// `Σ weight · multinomial(n; composition)`: the row-sum normaliser.
    pub fn beta(&self) -> Rational {
        self.terms
            .iter()
            .map(|t| &t.weight * Rational::from_integer(multinomial(&t.composition)))
            .sum()
    }

    /// Probability of each composition in the cutting step; sums to exactly 1.
    pub fn composition_law(&self) -> BTreeMap<Vec<usize>, Rational> {
        let beta = self.beta();
        self.terms
            .iter()
            .map(|t| {
                let mass = &t.weight * Rational::from_integer(multinomial(&t.composition));
                (t.composition.clone(), mass / &beta)
            })
            .collect()
    }

    /// Same operator multiplied by a positive constant.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        normalize_spec(
            self.n,
            self.terms
                .iter()
                .map(|t| (t.composition.clone(), &t.weight * factor)),
        )
    }
}

/// Strips zero parts, merges equal compositions and checks the two positivity axioms:
/// all weights non-negative, and some positive weight on a composition with no part equal to `n`.
pub fn normalize_spec(n: usize, raw: impl IntoIterator<Item = (Vec<usize>, Rational)>) -> Result<CppSpec> {
    if n == 0 {
        return Err(Error::InvalidSpec("degree must be positive".into()));
    }
    let mut merged: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (composition, weight) in raw {
        if weight.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "negative weight {} on composition {:?}",
                format_rational(&weight),
                composition
            )));
        }
        let total: usize = composition.iter().sum();
        if total != n {
            return Err(Error::InvalidSpec(format!(
                "composition {composition:?} sums to {total}, not {n}"
            )));
        }
        if weight.is_zero() {
            continue;
        }
        let stripped: Vec<usize> = composition.into_iter().filter(|&d| d > 0).collect();
        *merged.entry(stripped).or_insert_with(Rational::zero) += weight;
    }
    let terms: Vec<SpecTerm> = merged
        .into_iter()
        .map(|(composition, weight)| SpecTerm { composition, weight })
        .collect();
    if !terms.iter().any(|t| t.composition != [n]) {
        return Err(Error::InvalidSpec(format!(
            "no positive weight on a composition of {n} with every part below {n}; \
             the operator would be a multiple of the identity"
        )));
    }
    Ok(CppSpec { n, terms })
}

impl SpecTerm {
    pub fn is_identity(&self, n: usize) -> bool {
        self.composition == [n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    #[test]
    fn zero_parts_are_stripped() {
        let s = CppSpec::new(3, [(vec![1, 0, 2], int(1))]).unwrap();
        assert_eq!(s.terms(), &[SpecTerm { composition: vec![1, 2], weight: int(1) }]);
    }

    #[test]
    fn identity_only_is_rejected() {
        let err = CppSpec::new(3, [(vec![3], int(1))]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
        assert!(CppSpec::new(2, [(vec![0, 2], int(1)), (vec![2, 0], int(1))]).is_err());
        let ok = CppSpec::new(2, [(vec![0, 2], int(1)), (vec![2, 0], int(1)), (vec![1, 1], int(1))]).unwrap();
        assert_eq!(ok.terms()[1], SpecTerm { composition: vec![2], weight: int(2) });
        assert!(CppSpec::new(2, [(vec![2], int(1)), (vec![1, 1], int(0))]).is_err());
    }

    #[test]
    fn negative_and_malformed_terms() {
        assert!(CppSpec::new(2, [(vec![1, 1], int(-1))]).is_err());
        assert!(CppSpec::new(3, [(vec![1, 1], int(1))]).is_err());
        assert!(CppSpec::new(0, [(vec![], int(1))]).is_err());
    }

    #[test]
    fn beta_and_law() {
        let riffle2 = CppSpec::new(2, [(vec![0, 2], int(1)), (vec![1, 1], int(1)), (vec![2, 0], int(1))]).unwrap();
        assert_eq!(riffle2.beta(), int(4));
        let law = riffle2.composition_law();
        assert_eq!(law[&vec![2]], rat(1, 2));
        assert_eq!(law[&vec![1, 1]], rat(1, 2));
        let ttr = CppSpec::new(5, [(vec![1, 4], int(1))]).unwrap();
        assert_eq!(ttr.beta(), int(5));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n": 4, "terms": [{"composition": [1,3], "weight": "1/2"}, {"composition": [3,1], "weight": "1/2"}]}"#;
        let s = CppSpec::from_json(text).unwrap();
        assert_eq!(s.beta(), int(4));
        let again = CppSpec::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(s, again);
        assert!(CppSpec::from_json(r#"{"n": 2, "terms": [{"composition": [2], "weight": 1}]}"#).is_err());
    }
}
