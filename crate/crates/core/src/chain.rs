//! Transition matrices of descent-operator chains, their stationary
//! distributions, exact evolution of state laws, and lumpability checks.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinat::{distinct_permutations, multisets};
use crate::error::{Error, Result};
use crate::exactmath::{factorial, format_rational, from_bigint, parse_rational, RatMatrix, Rational};
use crate::hopf::{apply_cpp, eta, iterated_product, CppSpec, HopfAlgebra, LinComb};
use crate::par::Exec;

/// Default ceiling on the number of states a matrix may have.
pub const DEFAULT_STATE_CAP: usize = 1000;

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub cap: usize,
    pub exec: Exec,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cap: DEFAULT_STATE_CAP, exec: Exec::default() }
    }
}

/// Row-stochastic kernel `K[x][y] = c_xy η(y) / (β_n η(x))` on an ordered set
/// of degree-`n` basis elements, where `c_xy` is the coefficient of `y` in the
/// descent operator applied to `x`.
#[derive(Clone, Debug)]
pub struct TransitionMatrix<K: Clone + Eq + Hash> {
    states: Vec<K>,
    labels: Vec<String>,
    index: HashMap<K, usize>,
    kernel: RatMatrix,
    scalings: Vec<Rational>,
    beta: Rational,
}

/// All basis elements of degree `n`.
pub fn degree_states<A: HopfAlgebra>(alg: &A, n: usize) -> Vec<A::Key> {
    alg.basis(n)
}

/// Basis elements with a fixed content (for words: a fixed multiset of cards).
pub fn sector_states<A: HopfAlgebra>(alg: &A, content: &[usize]) -> Vec<A::Key> {
    alg.sector_basis(content)
}

pub fn build_transition_matrix<A: HopfAlgebra>(
    alg: &A,
    spec: &CppSpec,
    states: Vec<A::Key>,
) -> Result<TransitionMatrix<A::Key>> {
    build_transition_matrix_with(alg, spec, states, BuildOptions::default())
}

/// Builds the kernel row by row. `states` must be closed under the operator:
/// every basis element reached from a state must itself be a state.
pub fn build_transition_matrix_with<A: HopfAlgebra>(
    alg: &A,
    spec: &CppSpec,
    states: Vec<A::Key>,
    opts: BuildOptions,
) -> Result<TransitionMatrix<A::Key>> {
    let size = states.len();
    if size == 0 {
        return Err(Error::StateSpace("empty state space".into()));
    }
    if size > opts.cap {
        return Err(Error::TooLarge { size, cap: opts.cap });
    }
    let n = spec.degree();
    if let Some(bad) = states.iter().find(|s| alg.degree(s) != n) {
        return Err(Error::Degree { expected: n, found: alg.degree(bad) });
    }
    let mut index = HashMap::with_capacity(size);
    for (i, s) in states.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(Error::StateSpace(format!("state {} listed twice", alg.encode(s))));
        }
    }
    let scalings: Vec<Rational> = opts
        .exec
        .map(size, |i| eta(alg, &states[i]))
        .into_iter()
        .collect::<Result<_>>()?;
    let beta = spec.beta();

    let rows: Vec<Result<Vec<(usize, Rational)>>> = opts.exec.map(size, |i| {
        let image = apply_cpp(alg, &LinComb::basis(states[i].clone()), spec)?;
        let denom = &beta * &scalings[i];
        image
            .iter()
            .map(|(y, c)| {
                let j = *index.get(y).ok_or_else(|| {
                    Error::StateSpace(format!(
                        "{} leads to {}, which is not in the state space",
                        alg.encode(&states[i]),
                        alg.encode(y)
                    ))
                })?;
                Ok((j, c * &scalings[j] / &denom))
            })
            .collect()
    });

    let mut kernel = RatMatrix::zeros(size, size);
    for (i, row) in rows.into_iter().enumerate() {
        let mut sum = Rational::zero();
        for (j, p) in row? {
            if p.is_negative() {
                return Err(Error::StateSpace(format!(
                    "negative transition probability from {} to {}",
                    alg.encode(&states[i]),
                    alg.encode(&states[j])
                )));
            }
            sum += &p;
            kernel.set(i, j, p);
        }
        if !sum.is_one() {
            return Err(Error::RowSum { row: alg.encode(&states[i]), sum: format_rational(&sum) });
        }
    }
    let labels = states.iter().map(|s| alg.encode(s)).collect();
    Ok(TransitionMatrix { states, labels, index, kernel, scalings, beta })
}

impl<K: Clone + Eq + Hash> TransitionMatrix<K> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[K] {
        &self.states
    }

    /// Encodings of the states, in matrix order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, state: &K) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn kernel(&self) -> &RatMatrix {
        &self.kernel
    }

    /// `η(x)` for each state.
    pub fn scalings(&self) -> &[Rational] {
        &self.scalings
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn prob(&self, from: usize, to: usize) -> &Rational {
        self.kernel.get(from, to)
    }

    /// Non-zero entries of one row as `(state index, probability)`.
    pub fn row_support(&self, from: usize) -> Vec<(usize, Rational)> {
        self.kernel
            .row(from)
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, p)| (j, p.clone()))
            .collect()
    }

    /// Values of a statistic at every state, in matrix order.
    pub fn statistic(&self, f: impl Fn(&K) -> Rational) -> Vec<Rational> {
        self.states.iter().map(f).collect()
    }

    /// Header row of state encodings, then one row per state.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        let mut header = vec!["state".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend(self.kernel.row(i).iter().map(format_rational));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "states": self.labels,
            "beta": format_rational(&self.beta),
            "eta": self.scalings.iter().map(format_rational).collect::<Vec<_>>(),
            "kernel": (0..self.len())
                .map(|i| self.kernel.row(i).iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Reads a matrix written by [`TransitionMatrix::to_csv`]: state labels and kernel.
pub fn kernel_from_csv(text: &str) -> Result<(Vec<String>, RatMatrix)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Parse(format!("csv: {e}")))?.clone();
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv: {e}")))?;
        if rec.get(0) != labels.get(i).map(String::as_str) {
            return Err(Error::Parse(format!("row {i} label does not match the header")));
        }
        rows.push(rec.iter().skip(1).map(parse_rational).collect::<Result<Vec<_>>>()?);
    }
    if rows.len() != labels.len() {
        return Err(Error::Dimension(format!("{} rows for {} states", rows.len(), labels.len())));
    }
    Ok((labels, RatMatrix::from_rows(rows)?))
}

/// A probability law on the states of a chain, in matrix order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution(Vec<Rational>);

impl Distribution {
    pub fn point_mass(len: usize, at: usize) -> Result<Self> {
        if at >= len {
            return Err(Error::Dimension(format!("state {at} out of range for {len} states")));
        }
        let mut w = vec![Rational::zero(); len];
        w[at] = Rational::one();
        Ok(Distribution(w))
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Dimension("uniform law on no states".into()));
        }
        let p = Rational::new(1.into(), len.into());
        Ok(Distribution(vec![p; len]))
    }

    /// Checks non-negativity and total mass 1.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Parameter("distribution has a negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Parameter(format!(
                "distribution sums to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Distribution(weights))
    }

    /// Parses a JSON object mapping state labels to `"p/q"` strings; absent states get 0.
    pub fn from_json(text: &str, labels: &[String]) -> Result<Self> {
        let map: BTreeMap<String, Value> = serde_json::from_str(text)?;
        let mut w = vec![Rational::zero(); labels.len()];
        for (label, v) in map {
            let i = labels
                .iter()
                .position(|l| *l == label)
                .ok_or_else(|| Error::Parse(format!("unknown state {label:?}")))?;
            w[i] = match v {
                Value::String(s) => parse_rational(&s)?,
                Value::Number(n) if n.is_i64() => Rational::from_integer(n.as_i64().unwrap_or(0).into()),
                other => return Err(Error::Parse(format!("weight for {label:?} is not a rational: {other}"))),
            };
        }
        Distribution::from_weights(w)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Non-zero weights keyed by state label.
    pub fn to_json(&self, labels: &[String]) -> Value {
        let map: serde_json::Map<String, Value> = labels
            .iter()
            .zip(&self.0)
            .filter(|(_, w)| !w.is_zero())
            .map(|(l, w)| (l.clone(), Value::String(format_rational(w))))
            .collect();
        Value::Object(map)
    }
}

/// `start · K^t`.
pub fn evolve<K: Clone + Eq + Hash>(k: &TransitionMatrix<K>, start: &Distribution, t: usize) -> Result<Distribution> {
    if start.len() != k.len() {
        return Err(Error::Dimension(format!(
            "distribution on {} states, chain on {}",
            start.len(),
            k.len()
        )));
    }
    let mut v = start.0.clone();
    for _ in 0..t {
        v = k.kernel.left_mul_vec(&v)?;
    }
    Ok(Distribution(v))
}

fn pair(law: &Distribution, stat: &[Rational]) -> Result<Rational> {
    if stat.len() != law.len() {
        return Err(Error::Dimension(format!(
            "statistic has {} values for {} states",
            stat.len(),
            law.len()
        )));
    }
    Ok(law.0.iter().zip(stat).map(|(p, s)| p * s).sum())
}

/// `E[stat(X_t)]` for `X_0 ~ start`.
pub fn expectation<K: Clone + Eq + Hash>(
    k: &TransitionMatrix<K>,
    start: &Distribution,
    t: usize,
    stat: &[Rational],
) -> Result<Rational> {
    pair(&evolve(k, start, t)?, stat)
}

/// `E[stat(X_t)]` for every `t` in `0..=t_max`, one pass over the chain.
pub fn expectation_series<K: Clone + Eq + Hash>(
    k: &TransitionMatrix<K>,
    start: &Distribution,
    t_max: usize,
    stat: &[Rational],
) -> Result<Vec<Rational>> {
    let mut law = evolve(k, start, 0)?;
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            law = Distribution(k.kernel.left_mul_vec(&law.0)?);
        }
        out.push(pair(&law, stat)?);
    }
    Ok(out)
}

/// A stationary law attached to a multiset of degree-1 basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryLaw<K: Ord> {
    pub multiset: Vec<K>,
    pub weights: LinComb<K>,
}

impl<K: Ord + Clone + Eq + Hash> StationaryLaw<K> {
    /// The law as a vector over a chain's states. Fails if it charges a state outside the chain.
    pub fn on_states(&self, k: &TransitionMatrix<K>) -> Result<Distribution> {
        let mut w = vec![Rational::zero(); k.len()];
        for (x, p) in &self.weights {
            let i = k
                .index_of(x)
                .ok_or_else(|| Error::StateSpace("stationary law charges a state outside the chain".into()))?;
            w[i] = p.clone();
        }
        Ok(Distribution(w))
    }
}

/// `π(x) = η(x)/n!² · Σ_{σ ∈ S_n} [x] c_{σ(1)} ⋯ c_{σ(n)}` for one multiset of degree-1 elements.
pub fn stationary_for_multiset<A: HopfAlgebra>(alg: &A, multiset: &[A::Key]) -> Result<StationaryLaw<A::Key>> {
    let n = multiset.len();
    if n == 0 {
        return Err(Error::Parameter("empty multiset".into()));
    }
    if let Some(c) = multiset.iter().find(|c| alg.degree(c) != 1) {
        return Err(Error::Degree { expected: 1, found: alg.degree(c) });
    }
    let mut sorted = multiset.to_vec();
    sorted.sort();
    // Σ over S_n = (∏ m_i!) · Σ over distinct arrangements.
    let mut repeat = from_bigint(1.into());
    let mut run = 1;
    for i in 1..=n {
        if i < n && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            repeat *= from_bigint(factorial(run));
            run = 1;
        }
    }
    let mut total = LinComb::zero();
    for arrangement in distinct_permutations(&sorted) {
        total.add_scaled(&iterated_product(alg, &LinComb::basis(arrangement)), &repeat);
    }
    let nf = from_bigint(factorial(n));
    let norm = &nf * &nf;
    let mut weights = LinComb::zero();
    for (x, c) in &total {
        weights.add_term(x.clone(), c * eta(alg, x)? / &norm);
    }
    let mass = weights.coefficient_sum();
    if !mass.is_one() {
        return Err(Error::Verification(format!(
            "stationary weights sum to {}, not 1",
            format_rational(&mass)
        )));
    }
    Ok(StationaryLaw { multiset: sorted, weights })
}

/// One stationary law per multiset of `n` degree-1 basis elements.
pub fn stationary_distributions<A: HopfAlgebra>(alg: &A, n: usize) -> Result<Vec<StationaryLaw<A::Key>>> {
    let singles = alg.basis(1);
    if singles.is_empty() {
        return Err(Error::StateSpace("no degree-1 basis elements".into()));
    }
    multisets(singles.len(), n)
        .into_iter()
        .map(|m| {
            let keys: Vec<A::Key> = m.into_iter().map(|i| singles[i].clone()).collect();
            stationary_for_multiset(alg, &keys)
        })
        .collect()
}

/// The laws among [`stationary_distributions`] supported on a chain's states.
pub fn stationary_on_chain<A: HopfAlgebra>(
    alg: &A,
    k: &TransitionMatrix<A::Key>,
) -> Result<Vec<(StationaryLaw<A::Key>, Distribution)>> {
    let n = k.states.first().map_or(0, |s| alg.degree(s));
    let mut out = Vec::new();
    for law in stationary_distributions(alg, n)? {
        if law.weights.keys().all(|x| k.index_of(x).is_some()) {
            let d = law.on_states(k)?;
            out.push((law, d));
        }
    }
    Ok(out)
}

/// Lumped chain on the classes of a statistic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lumping<L> {
    pub classes: Vec<L>,
    /// Class index of every state.
    pub class_of: Vec<usize>,
    pub kernel: RatMatrix,
}

/// Two states with the same label whose mass into one class differs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LumpWitness {
    pub x: usize,
    pub x_prime: usize,
    pub class: usize,
    pub mass_x: Rational,
    pub mass_x_prime: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LumpingOutcome<L> {
    Lumpable(Lumping<L>),
    NotLumpable { classes: Vec<L>, witness: LumpWitness },
}

impl<L> LumpingOutcome<L> {
    pub fn is_lumpable(&self) -> bool {
        matches!(self, LumpingOutcome::Lumpable(_))
    }
}

/// Strong lumpability of `k` under `label`: every two states with equal labels
/// put equal total mass on every label class.
pub fn lumping_check<K: Clone + Eq + Hash, L: Ord + Clone>(
    k: &TransitionMatrix<K>,
    label: impl Fn(&K) -> L,
) -> LumpingOutcome<L> {
    let labels: Vec<L> = k.states.iter().map(label).collect();
    let mut classes = labels.clone();
    classes.sort();
    classes.dedup();
    let class_of: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("label is a class"))
        .collect();
    let c = classes.len();
    let mass_rows: Vec<Vec<Rational>> = (0..k.len())
        .map(|x| {
            let mut m = vec![Rational::zero(); c];
            for (y, p) in k.kernel.row(x).iter().enumerate() {
                if !p.is_zero() {
                    m[class_of[y]] += p;
                }
            }
            m
        })
        .collect();
    let mut representative: Vec<Option<usize>> = vec![None; c];
    for x in 0..k.len() {
        let cls = class_of[x];
        match representative[cls] {
            None => representative[cls] = Some(x),
            Some(r) => {
                if let Some(bad) = (0..c).find(|&j| mass_rows[x][j] != mass_rows[r][j]) {
                    return LumpingOutcome::NotLumpable {
                        classes,
                        witness: LumpWitness {
                            x: r,
                            x_prime: x,
                            class: bad,
                            mass_x: mass_rows[r][bad].clone(),
                            mass_x_prime: mass_rows[x][bad].clone(),
                        },
                    };
                }
            }
        }
    }
    let kernel = RatMatrix::from_fn(c, c, |i, j| {
        let r = representative[i].expect("every class has a member");
        mass_rows[r][j].clone()
    });
    LumpingOutcome::Lumpable(Lumping { classes, class_of, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::forest::{Forest, ForestAlgebra};
    use crate::presets::Preset;
    use crate::shuffle::{Alphabet, ShuffleAlgebra};

    fn deck(chars: &str) -> (ShuffleAlgebra, Vec<usize>) {
        let alphabet = Alphabet::of_deck(chars).unwrap();
        let word = alphabet.parse_word(chars).unwrap();
        let content = word.content(alphabet.len());
        (ShuffleAlgebra::new(alphabet), content)
    }

    #[test]
    fn top_to_random_rows() {
        let (alg, content) = deck("abc");
        let k = build_transition_matrix(&alg, &Preset::TopToRandom.expand(3).unwrap(), sector_states(&alg, &content)).unwrap();
        let abc = k.index_of_label("abc").unwrap();
        let row: Vec<(&str, Rational)> =
            k.row_support(abc).into_iter().map(|(j, p)| (k.labels()[j].as_str(), p)).collect();
        assert_eq!(row, vec![("abc", rat(1, 3)), ("bac", rat(1, 3)), ("bca", rat(1, 3))]);

        let (alg, content) = deck("aab");
        let k = build_transition_matrix(&alg, &Preset::TopToRandom.expand(3).unwrap(), sector_states(&alg, &content)).unwrap();
        let aab = k.index_of_label("aab").unwrap();
        let row: Vec<(&str, Rational)> =
            k.row_support(aab).into_iter().map(|(j, p)| (k.labels()[j].as_str(), p)).collect();
        assert_eq!(row, vec![("aab", rat(2, 3)), ("aba", rat(1, 3))]);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let (alg, content) = deck("abcd");
        let spec = Preset::Riffle { hands: 2 }.expand(4).unwrap();
        let states = sector_states(&alg, &content);
        let opts = |exec| BuildOptions { cap: 100, exec };
        let a = build_transition_matrix_with(&alg, &spec, states.clone(), opts(Exec::Serial)).unwrap();
        let b = build_transition_matrix_with(&alg, &spec, states.clone(), opts(Exec::Parallel)).unwrap();
        assert_eq!(a.kernel(), b.kernel());
        let capped = build_transition_matrix_with(&alg, &spec, states, BuildOptions { cap: 10, exec: Exec::Serial });
        assert!(matches!(capped, Err(Error::TooLarge { size: 24, cap: 10 })));
    }

    #[test]
    fn state_space_must_be_closed() {
        let (alg, _) = deck("abc");
        let spec = Preset::TopToRandom.expand(3).unwrap();
        let partial = vec![alg.decode("abc").unwrap()];
        assert!(matches!(build_transition_matrix(&alg, &spec, partial), Err(Error::StateSpace(_))));
    }

    #[test]
    fn stationary_laws() {
        let (alg, _) = deck("aab");
        let law = stationary_for_multiset(&alg, &[alg.decode("a").unwrap(), alg.decode("a").unwrap(), alg.decode("b").unwrap()]).unwrap();
        let w: Vec<Rational> = law.weights.iter().map(|(_, p)| p.clone()).collect();
        assert_eq!(w, vec![rat(1, 3); 3]);

        let laws = stationary_distributions(&ForestAlgebra, 2).unwrap();
        assert_eq!(laws.len(), 1);
        assert_eq!(laws[0].weights.coeff(&Forest::parse("()()").unwrap()), int(1));
        let spec = Preset::TopToRandom.expand(2).unwrap();
        let k = build_transition_matrix(&ForestAlgebra, &spec, degree_states(&ForestAlgebra, 2)).unwrap();
        let pi = laws[0].on_states(&k).unwrap();
        assert_eq!(evolve(&k, &pi, 3).unwrap(), pi);
    }

    #[test]
    fn evolution_and_expectation() {
        let (alg, content) = deck("abcd");
        let k = build_transition_matrix(&alg, &Preset::TopToRandom.expand(4).unwrap(), sector_states(&alg, &content)).unwrap();
        let start = Distribution::point_mass(k.len(), 0).unwrap();
        assert_eq!(evolve(&k, &start, 0).unwrap(), start);
        assert_eq!(evolve(&k, &start, 1).unwrap().weights(), k.kernel().row(0));
        let ones = vec![int(1); k.len()];
        assert_eq!(expectation_series(&k, &start, 4, &ones).unwrap(), vec![int(1); 5]);
        assert!(Distribution::from_weights(vec![rat(1, 2), rat(1, 3)]).is_err());
        let labels = k.labels().to_vec();
        let json = r#"{"abcd": "1/2", "dcba": "1/2"}"#;
        let d = Distribution::from_json(json, &labels).unwrap();
        assert_eq!(d.to_json(&labels), serde_json::from_str::<Value>(json).unwrap());
    }

    #[test]
    fn trivial_lumpings() {
        let (alg, content) = deck("abc");
        let k = build_transition_matrix(&alg, &Preset::Riffle { hands: 2 }.expand(3).unwrap(), sector_states(&alg, &content)).unwrap();
        match lumping_check(&k, |x| x.clone()) {
            LumpingOutcome::Lumpable(l) => assert_eq!(&l.kernel, k.kernel()),
            other => panic!("{other:?}"),
        }
        match lumping_check(&k, |_| ()) {
            LumpingOutcome::Lumpable(l) => assert_eq!(l.kernel, RatMatrix::identity(1)),
            other => panic!("{other:?}"),
        }
        // The top card alone is not a Markov statistic of top-to-random.
        let ttr = build_transition_matrix(&alg, &Preset::TopToRandom.expand(3).unwrap(), sector_states(&alg, &content)).unwrap();
        assert!(!lumping_check(&ttr, |x| x.0[0]).is_lumpable());
    }

    #[test]
    fn csv_round_trip() {
        let (alg, content) = deck("abc");
        let k = build_transition_matrix(&alg, &Preset::TopToRandom.expand(3).unwrap(), sector_states(&alg, &content)).unwrap();
        let (labels, m) = kernel_from_csv(&k.to_csv().unwrap()).unwrap();
        assert_eq!(labels, k.labels());
        assert_eq!(&m, k.kernel());
    }
}
