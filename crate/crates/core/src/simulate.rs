//! Seeded Monte Carlo for descent-operator chains: the cut-and-drop sampler
//! for card shuffles, a generic sampler for any built transition matrix, and
//! trajectory statistics that aggregate identically in serial and parallel.
//!
//! Cutting convention: for a composition `(d_1, …, d_a)` the top `d_1` cards
//! form pile 1, the next `d_2` pile 2, and so on, matching the order of the
//! deconcatenation coproduct.

use std::collections::BTreeMap;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, to_f64, Rational};
use crate::hopf::CppSpec;
use crate::par::Exec;
use crate::shuffle::Word;

/// Description of the cut convention, for output metadata.
pub const PILE_ORDER: &str = "pile i holds the next d_i cards from the top (top pile = d_1)";

/// ChaCha8 stream `stream` of seed `seed`.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { rng }
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "empty range");
        if let Some(b) = bound.to_u128() {
            return BigUint::from(self.rng.random_range(0..b));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let excess = words as u64 * 64 - bits;
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.rng.next_u64()).collect();
            if let Some(top) = digits.last_mut() {
                *top >>= excess;
            }
            let candidate = BigUint::from_slice(
                &digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }

    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }
}

/// Exact inverse-CDF sampler over finitely many outcomes with rational probabilities.
#[derive(Clone, Debug)]
pub struct DiscreteSampler<T> {
    outcomes: Vec<T>,
    cumulative: Vec<BigUint>,
    denom: BigUint,
}

impl<T: Clone> DiscreteSampler<T> {
    /// Probabilities must be non-negative and sum to 1.
    pub fn new(law: impl IntoIterator<Item = (T, Rational)>) -> Result<Self> {
        let law: Vec<(T, Rational)> = law.into_iter().collect();
        let denom = law
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
        let mut outcomes = Vec::new();
        let mut cumulative = Vec::new();
        let mut running = num_bigint::BigInt::zero();
        for (t, p) in law {
            let numer = (p * Rational::from_integer(denom.clone())).to_integer();
            if numer.sign() == num_bigint::Sign::Minus {
                return Err(Error::Parameter("negative probability".into()));
            }
            if numer.is_zero() {
                continue;
            }
            running += numer;
            outcomes.push(t);
            cumulative.push(running.to_biguint().expect("non-negative"));
        }
        if running != denom {
            return Err(Error::Parameter("probabilities do not sum to 1".into()));
        }
        Ok(DiscreteSampler { outcomes, cumulative, denom: denom.to_biguint().expect("positive") })
    }

    pub fn sample(&self, rng: &mut RngStream) -> &T {
        let u = rng.below(&self.denom);
        let i = self.cumulative.partition_point(|c| c <= &u);
        &self.outcomes[i]
    }
}

/// Draws the cut composition with the operator's composition law.
pub fn composition_sampler(spec: &CppSpec) -> Result<DiscreteSampler<Vec<usize>>> {
    DiscreteSampler::new(spec.composition_law())
}

pub fn sample_composition(sampler: &DiscreteSampler<Vec<usize>>, rng: &mut RngStream) -> Vec<usize> {
    sampler.sample(rng).clone()
}

/// Cuts `deck` into piles of the given sizes and drops cards one at a time
/// from the bottom of a pile chosen with probability proportional to its size.
pub fn riffle_piles(deck: &Word, composition: &[usize], rng: &mut RngStream) -> Word {
    debug_assert_eq!(composition.iter().sum::<usize>(), deck.len());
    let mut piles: Vec<&[u16]> = Vec::with_capacity(composition.len());
    let mut start = 0;
    for &d in composition {
        piles.push(&deck.0[start..start + d]);
        start += d;
    }
    let mut remaining = deck.len();
    let mut from_bottom = Vec::with_capacity(deck.len());
    while remaining > 0 {
        let mut u = rng.below_usize(remaining);
        let mut i = 0;
        while u >= piles[i].len() {
            u -= piles[i].len();
            i += 1;
        }
        let (last, rest) = piles[i].split_last().expect("chosen pile is non-empty");
        from_bottom.push(*last);
        piles[i] = rest;
        remaining -= 1;
    }
    from_bottom.reverse();
    Word(from_bottom)
}

/// One step of the shuffle chain: sample a cut, then riffle the piles.
pub fn gsr_step(deck: &Word, sampler: &DiscreteSampler<Vec<usize>>, rng: &mut RngStream) -> Word {
    let composition = sample_composition(sampler, rng);
    riffle_piles(deck, &composition, rng)
}

/// Samples one step of a built chain from its exact rows.
#[derive(Clone, Debug)]
pub struct RowSampler {
    rows: Vec<DiscreteSampler<usize>>,
}

impl RowSampler {
    pub fn new<K: Clone + Eq + Hash>(k: &TransitionMatrix<K>) -> Result<Self> {
        let rows = (0..k.len())
            .map(|i| DiscreteSampler::new(k.row_support(i)))
            .collect::<Result<_>>()?;
        Ok(RowSampler { rows })
    }

    pub fn step(&self, from: usize, rng: &mut RngStream) -> usize {
        *self.rows[from].sample(rng)
    }
}

/// A real-valued function of states, reported by name.
#[derive(Clone)]
pub struct NamedStatistic<K> {
    pub name: String,
    pub f: Arc<dyn Fn(&K) -> Rational + Send + Sync>,
}

impl<K> NamedStatistic<K> {
    pub fn new(name: impl Into<String>, f: impl Fn(&K) -> Rational + Send + Sync + 'static) -> Self {
        NamedStatistic { name: name.into(), f: Arc::new(f) }
    }
}

/// Exact running sums `Σ x` and `Σ x²`; merging is commutative and associative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Moments {
    pub count: u64,
    pub sum: Rational,
    pub sum_sq: Rational,
}

impl Moments {
    pub fn push(&mut self, x: &Rational) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += &other.sum;
        self.sum_sq += &other.sum_sq;
    }

    pub fn mean(&self) -> Rational {
        if self.count == 0 {
            return Rational::zero();
        }
        &self.sum / Rational::from_integer(self.count.into())
    }

    /// Unbiased sample variance; zero with fewer than two samples.
    pub fn variance(&self) -> Rational {
        if self.count < 2 {
            return Rational::zero();
        }
        let n = Rational::from_integer(self.count.into());
        (&self.sum_sq - &self.sum * &self.sum / &n) / (n - Rational::one())
    }

    /// Standard error of the mean, in floating point.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (to_f64(&self.variance()) / self.count as f64).sqrt()
    }
}

/// Per-statistic, per-time moments over many independent trajectories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectoryReport {
    pub seed: u64,
    pub trials: u64,
    pub steps: usize,
    pub names: Vec<String>,
    /// `moments[s][t]` for statistic `s` at time `t`.
    pub moments: Vec<Vec<Moments>>,
}

impl TrajectoryReport {
    fn empty(seed: u64, trials: u64, steps: usize, names: Vec<String>) -> Self {
        let moments = vec![vec![Moments::default(); steps + 1]; names.len()];
        TrajectoryReport { seed, trials, steps, names, moments }
    }

    fn merge(&mut self, other: &TrajectoryReport) {
        for (a, b) in self.moments.iter_mut().zip(&other.moments) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
    }

    pub fn statistic(&self, name: &str) -> Option<&[Moments]> {
        self.names.iter().position(|n| n == name).map(|i| self.moments[i].as_slice())
    }

    /// Floating-point summary; `exact[name][t]` targets are attached when given.
    pub fn to_json(&self, exact: &BTreeMap<String, Vec<Rational>>) -> Value {
        let stats: Vec<Value> = self
            .names
            .iter()
            .zip(&self.moments)
            .map(|(name, series)| {
                let points: Vec<Value> = series
                    .iter()
                    .enumerate()
                    .map(|(t, m)| {
                        let mut p = json!({
                            "t": t,
                            "mean": to_f64(&m.mean()),
                            "variance": to_f64(&m.variance()),
                            "std_error": m.std_error(),
                        });
                        if let Some(target) = exact.get(name).and_then(|v| v.get(t)) {
                            p["exact"] = Value::String(format_rational(target));
                            p["z"] = json!(z_score(to_f64(&m.mean()), to_f64(target), m.std_error()));
                        }
                        p
                    })
                    .collect();
                json!({ "name": name, "series": points })
            })
            .collect();
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "steps": self.steps,
            "pile_order": PILE_ORDER,
            "statistics": stats,
        })
    }
}

/// `(observed − expected) / se`, with a zero standard error treated as exact agreement or infinite deviation.
pub fn z_score(observed: f64, expected: f64, se: f64) -> f64 {
    if se > 0.0 {
        (observed - expected) / se
    } else if (observed - expected).abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Trials per work item; fixed so reports do not depend on the thread count.
pub const CHUNK: u64 = 1024;

/// Runs `trials` independent trajectories of `steps` steps from `start`.
/// Trial `i` draws from stream `i` of `seed`, so the report is the same for
/// any execution strategy.
pub fn run_trajectories<K, S>(
    start: &K,
    steps: usize,
    trials: u64,
    stepper: S,
    stats: &[NamedStatistic<K>],
    seed: u64,
    exec: Exec,
) -> TrajectoryReport
where
    K: Clone + Send + Sync,
    S: Fn(&K, &mut RngStream) -> K + Sync + Send,
{
    let names: Vec<String> = stats.iter().map(|s| s.name.clone()).collect();
    let chunks = trials.div_ceil(CHUNK) as usize;
    let partials = exec.map(chunks, |c| {
        let mut part = TrajectoryReport::empty(seed, trials, steps, names.clone());
        let lo = c as u64 * CHUNK;
        let hi = (lo + CHUNK).min(trials);
        for trial in lo..hi {
            let mut rng = RngStream::new(seed, trial);
            let mut state = start.clone();
            for t in 0..=steps {
                if t > 0 {
                    state = stepper(&state, &mut rng);
                }
                for (s, stat) in stats.iter().enumerate() {
                    part.moments[s][t].push(&(stat.f)(&state));
                }
            }
        }
        part
    });
    let mut report = TrajectoryReport::empty(seed, trials, steps, names);
    for p in &partials {
        report.merge(p);
    }
    report
}

/// Counts of one-step destinations from `start` over `draws` independent draws.
pub fn empirical_step<K, S>(start: &K, draws: u64, stepper: S, seed: u64, exec: Exec) -> BTreeMap<K, u64>
where
    K: Clone + Ord + Send + Sync,
    S: Fn(&K, &mut RngStream) -> K + Sync + Send,
{
    let chunks = draws.div_ceil(CHUNK) as usize;
    let partials = exec.map(chunks, |c| {
        let mut counts: BTreeMap<K, u64> = BTreeMap::new();
        let lo = c as u64 * CHUNK;
        for draw in lo..(lo + CHUNK).min(draws) {
            let mut rng = RngStream::new(seed, draw);
            *counts.entry(stepper(start, &mut rng)).or_default() += 1;
        }
        counts
    });
    let mut total = BTreeMap::new();
    for p in partials {
        for (k, c) in p {
            *total.entry(k).or_default() += c;
        }
    }
    total
}

/// One entry of an empirical-versus-exact row comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryComparison {
    pub state: usize,
    pub observed: u64,
    pub expected: Rational,
    /// Binomial z-score of the observed count.
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowComparison {
    pub draws: u64,
    pub entries: Vec<EntryComparison>,
    /// Draws that landed on states with exact probability zero.
    pub impossible: u64,
    /// Pearson statistic over the states of positive probability.
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
}

impl RowComparison {
    pub fn max_abs_z(&self) -> f64 {
        self.entries.iter().map(|e| e.z.abs()).fold(0.0, f64::max)
    }

    /// Every entry within `k` standard deviations and nothing impossible observed.
    pub fn within(&self, k: f64) -> bool {
        self.impossible == 0 && self.max_abs_z() <= k
    }
}

/// Compares per-state counts with an exact probability row.
pub fn compare_row(counts: &BTreeMap<usize, u64>, exact: &[Rational]) -> RowComparison {
    let draws: u64 = counts.values().sum();
    let n = draws as f64;
    let mut entries = Vec::new();
    let mut chi_square = 0.0;
    let mut impossible = 0;
    for (state, p) in exact.iter().enumerate() {
        let observed = counts.get(&state).copied().unwrap_or(0);
        if p.is_zero() {
            impossible += observed;
            continue;
        }
        let pf = to_f64(p);
        let mean = n * pf;
        let sd = (n * pf * (1.0 - pf)).sqrt();
        let z = z_score(observed as f64, mean, sd);
        chi_square += (observed as f64 - mean).powi(2) / mean;
        entries.push(EntryComparison { state, observed, expected: p.clone(), z });
    }
    let degrees_of_freedom = entries.len().saturating_sub(1);
    RowComparison { draws, entries, impossible, chi_square, degrees_of_freedom }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::presets::Preset;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let bound = BigUint::from(1_000_000u32);
        let draw = |seed, stream| {
            let mut r = RngStream::new(seed, stream);
            (0..5).map(|_| r.below(&bound)).collect::<Vec<_>>()
        };
        let (a, b, c) = (draw(7, 0), draw(7, 0), draw(7, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let huge = BigUint::one() << 200u32;
        let mut r = RngStream::new(1, 0);
        for _ in 0..20 {
            assert!(r.below(&huge) < huge);
        }
    }

    #[test]
    fn point_mass_composition() {
        let s = composition_sampler(&Preset::TopToRandom.expand(6).unwrap()).unwrap();
        let mut rng = RngStream::new(3, 0);
        for _ in 0..50 {
            assert_eq!(sample_composition(&s, &mut rng), vec![1, 5]);
        }
    }

    #[test]
    fn single_pile_keeps_the_deck() {
        let deck = Word(vec![2, 0, 1, 3]);
        let mut rng = RngStream::new(0, 0);
        assert_eq!(riffle_piles(&deck, &[4], &mut rng), deck);
    }

    #[test]
    fn sampler_rejects_bad_laws() {
        assert!(DiscreteSampler::new(vec![(0, rat(1, 2))]).is_err());
        assert!(DiscreteSampler::new(vec![(0, rat(3, 2)), (1, rat(-1, 2))]).is_err());
        let s = DiscreteSampler::new(vec![(0, int(0)), (1, int(1))]).unwrap();
        let mut rng = RngStream::new(0, 0);
        assert_eq!(*s.sample(&mut rng), 1);
    }

    #[test]
    fn reports_do_not_depend_on_execution() {
        let sampler = composition_sampler(&Preset::Riffle { hands: 2 }.expand(5).unwrap()).unwrap();
        let stats = vec![NamedStatistic::new("descents", |w: &Word| {
            int(crate::shuffle::descent_count(w) as i64)
        })];
        let start = Word(vec![0, 1, 2, 3, 4]);
        let step = |w: &Word, r: &mut RngStream| gsr_step(w, &sampler, r);
        let a = run_trajectories(&start, 3, 3000, step, &stats, 11, Exec::Serial);
        let b = run_trajectories(&start, 3, 3000, step, &stats, 11, Exec::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.moments[0][0].mean(), int(0));
        let one = run_trajectories(&start, 0, 1, step, &stats, 11, Exec::Serial);
        assert_eq!(one.moments[0][0].count, 1);
    }
}
