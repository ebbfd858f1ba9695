//! Words as decks of cards: the shuffle algebra (interleaving product,
//! deconcatenation coproduct), its dual free associative algebra
//! (concatenation, deshuffle), and the descent and peak statistics of a deck.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::{distinct_permutations, weak_compositions};
use crate::error::{Error, Result};
use crate::exactmath::{binomial, from_bigint, rpow, Rational};
use crate::hopf::{HopfAlgebra, LinComb, TensorComb};

/// Ordered set of card labels. Index order is the card order used for descents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Parameter("alphabet is empty".into()));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Parameter("alphabet labels must be distinct".into()));
        }
        if labels.iter().any(|l| l.is_empty() || l.contains(',')) {
            return Err(Error::Parameter("alphabet labels must be non-empty and comma-free".into()));
        }
        if labels.len() > u16::MAX as usize {
            return Err(Error::Parameter("alphabet too large".into()));
        }
        Ok(Alphabet { labels })
    }

    /// Labels `1 < 2 < … < n`.
    pub fn distinct(n: usize) -> Self {
        Alphabet {
            labels: (1..=n).map(|i| i.to_string()).collect(),
        }
    }

    /// Single-character labels in the given order.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from).collect())
    }

    /// The letters of `deck`, ordered lexicographically.
    pub fn of_deck(deck: &str) -> Result<Self> {
        let letters: BTreeSet<char> = deck.chars().collect();
        Self::new(letters.into_iter().map(String::from).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn single_chars(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }

    pub fn letter(&self, label: &str) -> Option<u16> {
        self.labels.iter().position(|l| l == label).map(|i| i as u16)
    }

    /// Words are written letter by letter when every label is one character,
    /// otherwise as comma-separated labels. The empty word is `""`.
    pub fn format_word(&self, w: &Word) -> String {
        let parts = w.0.iter().map(|&i| self.labels[i as usize].as_str());
        if self.single_chars() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let lookup = |label: &str| {
            self.letter(label)
                .ok_or_else(|| Error::Parse(format!("letter {label:?} is not in the alphabet")))
        };
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let letters = if self.single_chars() && !text.contains(',') {
            text.chars().map(|c| lookup(&c.to_string())).collect::<Result<Vec<_>>>()?
        } else {
            text.split(',').map(|l| lookup(l.trim())).collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }

    /// The ascending word with the given letter multiplicities.
    pub fn sorted_word(content: &[usize]) -> Word {
        Word(
            content
                .iter()
                .enumerate()
                .flat_map(|(i, &m)| std::iter::repeat_n(i as u16, m))
                .collect(),
        )
    }
}

/// A deck of cards, top card first; letters are alphabet indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    /// Multiplicity of each alphabet letter.
    pub fn content(&self, alphabet_size: usize) -> Vec<usize> {
        let mut counts = vec![0; alphabet_size];
        for &l in &self.0 {
            counts[l as usize] += 1;
        }
        counts
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

/// Visits every subset of `0..n` of size `k` as a bitmask over positions.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[bool])) {
    let mut chosen = vec![false; n];
    fn go(pos: usize, left: usize, chosen: &mut Vec<bool>, f: &mut dyn FnMut(&[bool])) {
        let n = chosen.len();
        if left == 0 {
            f(chosen);
            return;
        }
        if n - pos < left {
            return;
        }
        chosen[pos] = true;
        go(pos + 1, left - 1, chosen, f);
        chosen[pos] = false;
        go(pos + 1, left, chosen, f);
    }
    go(0, k, &mut chosen, &mut f);
}

/// Sum of all interleavings of `w` and `z`, counted with multiplicity.
pub fn shuffle_product(w: &Word, z: &Word) -> LinComb<Word> {
    let n = w.len() + z.len();
    let mut out = LinComb::zero();
    for_each_subset(n, w.len(), |mask| {
        let (mut i, mut j) = (0, 0);
        let mut v = Vec::with_capacity(n);
        for &from_w in mask {
            if from_w {
                v.push(w.0[i]);
                i += 1;
            } else {
                v.push(z.0[j]);
                j += 1;
            }
        }
        out.add_term(Word(v), Rational::one());
    });
    out
}

/// Sum of all deconcatenations `prefix ⊗ suffix`.
pub fn deconcat_coproduct(w: &Word) -> TensorComb<Word> {
    (0..=w.len())
        .map(|i| {
            (
                vec![Word(w.0[..i].to_vec()), Word(w.0[i..].to_vec())],
                Rational::one(),
            )
        })
        .collect()
}

/// Concatenation, the product of the dual free associative algebra.
pub fn concat_product(w: &Word, z: &Word) -> LinComb<Word> {
    LinComb::basis(w.concat(z))
}

/// Sum over position subsets `S` of `w|S ⊗ w|complement`.
pub fn deshuffle_coproduct(w: &Word) -> TensorComb<Word> {
    let n = w.len();
    let mut out = LinComb::zero();
    for k in 0..=n {
        for_each_subset(n, k, |mask| {
            let (mut left, mut right) = (Vec::with_capacity(k), Vec::with_capacity(n - k));
            for (&letter, &in_left) in w.0.iter().zip(mask) {
                if in_left {
                    left.push(letter);
                } else {
                    right.push(letter);
                }
            }
            out.add_term(vec![Word(left), Word(right)], Rational::one());
        });
    }
    out
}

fn words_of_length(alphabet_size: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    loop {
        out.push(Word(cur.clone()));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (cur[i] as usize) + 1 < alphabet_size {
                cur[i] += 1;
                for slot in cur.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

fn sector_words(content: &[usize]) -> Vec<Word> {
    distinct_permutations(&Alphabet::sorted_word(content).0)
        .into_iter()
        .map(Word)
        .collect()
}

macro_rules! word_algebra_common {
    () => {
        type Key = Word;

        fn unit(&self) -> Word {
            Word::empty()
        }

        fn degree(&self, key: &Word) -> usize {
            key.len()
        }

        fn basis(&self, n: usize) -> Vec<Word> {
            words_of_length(self.alphabet.len(), n)
        }

        fn encode(&self, key: &Word) -> String {
            self.alphabet.format_word(key)
        }

        fn decode(&self, text: &str) -> Result<Word> {
            self.alphabet.parse_word(text)
        }

        fn content(&self, key: &Word) -> Vec<usize> {
            key.content(self.alphabet.len())
        }

        fn contents(&self, n: usize) -> Vec<Vec<usize>> {
            weak_compositions(n, self.alphabet.len())
        }

        fn sector_basis(&self, content: &[usize]) -> Vec<Word> {
            sector_words(content)
        }
    };
}

/// Shuffle algebra on words over an ordered alphabet. Commutative.
#[derive(Clone, Debug)]
pub struct ShuffleAlgebra {
    alphabet: Alphabet,
}

impl ShuffleAlgebra {
    pub fn new(alphabet: Alphabet) -> Self {
        ShuffleAlgebra { alphabet }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

impl HopfAlgebra for ShuffleAlgebra {
    word_algebra_common!();

    fn name(&self) -> &str {
        "shuffle"
    }

    fn mul_basis(&self, a: &Word, b: &Word) -> LinComb<Word> {
        shuffle_product(a, b)
    }

    fn coproduct_basis(&self, x: &Word) -> TensorComb<Word> {
        deconcat_coproduct(x)
    }

    fn coproduct_split(&self, x: &Word, left_degree: usize) -> Vec<(Word, Word, Rational)> {
        if left_degree > x.len() {
            return Vec::new();
        }
        vec![(
            Word(x.0[..left_degree].to_vec()),
            Word(x.0[left_degree..].to_vec()),
            Rational::one(),
        )]
    }
}

/// Free associative algebra on an ordered alphabet: concatenation product and
/// deshuffle coproduct. Graded dual of [`ShuffleAlgebra`]; cocommutative.
#[derive(Clone, Debug)]
pub struct FreeAssocAlgebra {
    alphabet: Alphabet,
}

impl FreeAssocAlgebra {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeAssocAlgebra { alphabet }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

impl HopfAlgebra for FreeAssocAlgebra {
    word_algebra_common!();

    fn name(&self) -> &str {
        "free-associative"
    }

    fn mul_basis(&self, a: &Word, b: &Word) -> LinComb<Word> {
        concat_product(a, b)
    }

    fn coproduct_basis(&self, x: &Word) -> TensorComb<Word> {
        deshuffle_coproduct(x)
    }
}

/// Descent and peak positions, 1-indexed.
///
/// `i` is a descent when card `i` exceeds card `i+1`; `i` is a peak when
/// card `i+1` exceeds both neighbours, so peaks lie in `1..=n-2`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeckStatistics {
    pub descents: BTreeSet<usize>,
    pub peaks: BTreeSet<usize>,
}

pub fn descent_peak_sets(w: &Word) -> DeckStatistics {
    let l = &w.0;
    let descents = (1..l.len()).filter(|&i| l[i - 1] > l[i]).collect();
    let peaks = (1..l.len().saturating_sub(1))
        .filter(|&i| l[i - 1] < l[i] && l[i] > l[i + 1])
        .collect();
    DeckStatistics { descents, peaks }
}

fn weighted_sum(positions: &BTreeSet<usize>, span: usize, q: &Rational) -> Rational {
    // Σ_{i ∈ positions} C(span-1, i-1) q^{i-1} (1-q)^{span-i}
    let p = Rational::one() - q;
    positions
        .iter()
        .map(|&i| {
            from_bigint(binomial(span - 1, i - 1)) * rpow(q, i - 1) * rpow(&p, span - i)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `Σ_{i ∈ Des(w)} C(n-2, i-1) q^{i-1} (1-q)^{n-1-i}`.
pub fn weighted_descent_stat(w: &Word, q: &Rational) -> Rational {
    let n = w.len();
    if n < 2 {
        return Rational::zero();
    }
    weighted_sum(&descent_peak_sets(w).descents, n - 1, q)
}

/// `Σ_{i ∈ Peak(w)} C(n-3, i-1) q^{i-1} (1-q)^{n-2-i}`.
pub fn weighted_peak_stat(w: &Word, q: &Rational) -> Rational {
    let n = w.len();
    if n < 3 {
        return Rational::zero();
    }
    weighted_sum(&descent_peak_sets(w).peaks, n - 2, q)
}

pub fn descent_count(w: &Word) -> usize {
    descent_peak_sets(w).descents.len()
}

pub fn peak_count(w: &Word) -> usize {
    descent_peak_sets(w).peaks.len()
}

/// Number of words with the given letter multiplicities.
pub fn sector_size(content: &[usize]) -> BigInt {
    crate::exactmath::multinomial(content)
}
