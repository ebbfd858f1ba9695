//! The computation subcommands.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Map, Value};

use hopfchain::chain::{
    build_transition_matrix_with, degree_states, evolve as step_law, expectation_series, sector_states,
    stationary_distributions, stationary_for_multiset, Distribution, StationaryLaw,
};
use hopfchain::exactmath::{format_rational, rat, Rational};
use hopfchain::forest::{Forest, ForestAlgebra};
use hopfchain::hopf::HopfAlgebra;
use hopfchain::presets::Preset;
use hopfchain::shuffle::{FreeAssocAlgebra, ShuffleAlgebra, Word};
use hopfchain::simulate::{
    composition_sampler, gsr_step, run_trajectories, NamedStatistic, RowSampler, TrajectoryReport,
};
use hopfchain::spectral::{
    build_e_j, eigenbasis, spectrum_for_degree, spectrum_for_sector, span_dimension, verify_spectrum, Spectrum,
};
use hopfchain::{CppSpec, Exec, TransitionMatrix};

use crate::config::Format;
use crate::stats::{forest_statistic, reference_series, word_statistic};
use crate::verify::{run_suite, SuiteOptions};
use crate::{
    CliError, EigvecsArgs, EvolveArgs, MatrixArgs, Output, RunConfig, SamplerKind, SimulateArgs, Space,
    SpectrumArgs, StatArgs, StationaryArgs, VerifyArgs, FORMAT_VERSION,
};

fn header(command: &str, run: &RunConfig, space: &Space, spec: Option<&CppSpec>) -> Result<Map<String, Value>, CliError> {
    let mut h = Map::new();
    h.insert("format_version".into(), json!(FORMAT_VERSION));
    h.insert("command".into(), json!(command));
    h.insert("space".into(), space.describe());
    if let Some(spec) = spec {
        let name = match run.preset()? {
            Some(p) => p.to_string(),
            None => run.spec.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        };
        h.insert("operator".into(), json!({ "name": name, "spec": spec.to_json() }));
    }
    Ok(h)
}

fn json_only(run: &RunConfig, command: &str) -> Result<(), CliError> {
    if run.format == Format::Csv {
        return Err(CliError::Usage(format!("{command} writes JSON only")));
    }
    Ok(())
}

fn has_operator(run: &RunConfig) -> bool {
    run.preset.is_some() || run.spec.is_some()
}

fn shuffle_chain(
    run: &RunConfig,
    alg: &ShuffleAlgebra,
    content: &[usize],
    spec: &CppSpec,
) -> Result<TransitionMatrix<Word>, CliError> {
    Ok(build_transition_matrix_with(alg, spec, sector_states(alg, content), run.build_options())?)
}

fn forest_chain(run: &RunConfig, n: usize, spec: &CppSpec) -> Result<TransitionMatrix<Forest>, CliError> {
    let alg = ForestAlgebra;
    Ok(build_transition_matrix_with(&alg, spec, degree_states(&alg, n), run.build_options())?)
}

fn render_matrix<K: Clone + Eq + std::hash::Hash>(
    run: &RunConfig,
    mut h: Map<String, Value>,
    k: &TransitionMatrix<K>,
) -> Result<Output, CliError> {
    if run.format == Format::Csv {
        return Ok(Output { text: k.to_csv()?, passed: true });
    }
    if let Value::Object(body) = k.to_json() {
        h.extend(body);
    }
    Ok(Output::json(&Value::Object(h), true))
}

pub fn matrix(a: &MatrixArgs) -> Result<Output, CliError> {
    let run = &a.run;
    let space = run.space()?;
    let spec = run.spec(space.degree())?;
    let h = header("matrix", run, &space, Some(&spec))?;
    match &space {
        Space::Shuffle { alg, content, .. } => render_matrix(run, h, &shuffle_chain(run, alg, content, &spec)?),
        Space::Forests { n, .. } => render_matrix(run, h, &forest_chain(run, *n, &spec)?),
    }
}

fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut s = String::from("partition,eigenvalue,multiplicity\n");
    for e in &spectrum.entries {
        let parts: Vec<String> = e.partition.iter().map(ToString::to_string).collect();
        s.push_str(&format!(
            "{},{},{}\n",
            parts.join(" "),
            format_rational(&e.eigenvalue),
            e.multiplicity
        ));
    }
    s
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let run = &a.run;
    let space = run.space()?;
    let spec = run.spec(space.degree())?;
    let spectrum = match &space {
        Space::Shuffle { alg, content, .. } => spectrum_for_sector(alg, &spec, content)?,
        Space::Forests { .. } => spectrum_for_degree(&ForestAlgebra, &spec)?,
    };
    let report = if a.verify_matrix {
        let kernel = match &space {
            Space::Shuffle { alg, content, .. } => shuffle_chain(run, alg, content, &spec)?.kernel().clone(),
            Space::Forests { n, .. } => forest_chain(run, *n, &spec)?.kernel().clone(),
        };
        Some(verify_spectrum(&kernel, &spectrum, run.exec())?)
    } else {
        None
    };
    let passed = report.as_ref().is_none_or(|r| r.passed());
    if run.format == Format::Csv {
        return Ok(Output { text: spectrum_csv(&spectrum), passed });
    }
    let mut h = header("spectrum", run, &space, Some(&spec))?;
    h.insert("spectrum".into(), spectrum.to_json());
    let by_value: Map<String, Value> = spectrum
        .eigenvalue_multiplicities()
        .iter()
        .map(|(l, m)| (format_rational(l), json!(m.to_string())))
        .collect();
    h.insert("eigenvalues".into(), Value::Object(by_value));
    if let Some(r) = report {
        h.insert("verification".into(), r.to_json());
    }
    Ok(Output::json(&Value::Object(h), passed))
}

fn law_json<K: Ord + Clone>(law: &StationaryLaw<K>, encode: impl Fn(&K) -> String) -> Value {
    let weights: Map<String, Value> = law
        .weights
        .iter()
        .map(|(k, p)| (encode(k), json!(format_rational(p))))
        .collect();
    json!({
        "multiset": law.multiset.iter().map(&encode).collect::<Vec<_>>(),
        "distribution": weights,
    })
}

/// `π K = π` for each law on the chain's states.
fn fixed_by<K: Clone + Ord + Eq + std::hash::Hash>(
    laws: &[StationaryLaw<K>],
    k: &TransitionMatrix<K>,
) -> Result<Vec<bool>, CliError> {
    laws.iter()
        .map(|law| {
            let d = law.on_states(k)?;
            Ok(step_law(k, &d, 1)? == d)
        })
        .collect()
}

pub fn stationary(a: &StationaryArgs) -> Result<Output, CliError> {
    let run = &a.run;
    json_only(run, "stationary")?;
    let space = run.space()?;
    let spec = if has_operator(run) { Some(run.spec(space.degree())?) } else { None };
    let mut h = header("stationary", run, &space, spec.as_ref())?;
    let (laws, fixed) = match &space {
        Space::Shuffle { alg, ascending, .. } => {
            let singles: Vec<Word> = ascending.0.iter().map(|&c| Word(vec![c])).collect();
            let law = stationary_for_multiset(alg, &singles)?;
            let fixed = match &spec {
                Some(s) => {
                    let k = shuffle_chain(run, alg, &ascending.content(alg.alphabet().len()), s)?;
                    Some(fixed_by(std::slice::from_ref(&law), &k)?)
                }
                None => None,
            };
            (vec![law_json(&law, |w| alg.encode(w))], fixed)
        }
        Space::Forests { n, .. } => {
            let laws = stationary_distributions(&ForestAlgebra, *n)?;
            let fixed = match &spec {
                Some(s) => Some(fixed_by(&laws, &forest_chain(run, *n, s)?)?),
                None => None,
            };
            (laws.iter().map(|l| law_json(l, |f| f.encoding().to_string())).collect(), fixed)
        }
    };
    let passed = fixed.as_ref().is_none_or(|f| f.iter().all(|&b| b));
    h.insert("distributions".into(), Value::Array(laws));
    if let Some(f) = fixed {
        h.insert("fixed_by_kernel".into(), json!(f));
    }
    Ok(Output::json(&Value::Object(h), passed))
}

pub fn eigvecs(a: &EigvecsArgs) -> Result<Output, CliError> {
    let run = &a.run;
    json_only(run, "eigvecs")?;
    let space = run.space()?;
    let Space::Shuffle { alg, content, .. } = &space else {
        return Err(CliError::Usage("eigvecs works on the shuffle algebra (its dual carries the vectors)".into()));
    };
    let dual = FreeAssocAlgebra::new(alg.alphabet().clone());
    let q = run.q.clone().unwrap_or_else(Rational::one);
    let n = space.degree();
    let vectors = match a.j {
        Some(j) => build_e_j(&dual, content, j, &q)?,
        None => eigenbasis(&dual, content, &q)?,
    };
    let sector = sector_states(&dual, content).len();
    let mut h = header("eigvecs", run, &space, None)?;
    h.insert(
        "operator".into(),
        json!({ "name": Preset::TopOrBottom { q: q.clone() }.to_string(), "algebra": "free associative" }),
    );
    h.insert("count".into(), json!(vectors.len()));
    h.insert("sector_size".into(), json!(sector));
    let mut passed = true;
    if a.j.is_none() {
        let lin: Vec<_> = vectors.iter().map(|v| v.vector.clone()).collect();
        let rank = span_dimension(&lin);
        passed = rank == sector && vectors.len() == sector;
        h.insert("span_dimension".into(), json!(rank));
        h.insert("full_basis".into(), json!(passed));
    }
    h.insert("degree".into(), json!(n));
    h.insert("verified".into(), json!(true));
    h.insert(
        "vectors".into(),
        Value::Array(vectors.iter().map(|v| v.to_json(|w| dual.encode(w))).collect()),
    );
    Ok(Output::json(&Value::Object(h), passed))
}

/// Weight for weighted descents and peaks: --stat-q, else the top-or-bottom
/// parameter, else --q, else 1/2.
fn stat_weight(run: &RunConfig, stat: &StatArgs) -> Result<Rational, CliError> {
    if let Some(q) = &stat.stat_q {
        return Ok(q.clone());
    }
    Ok(match run.preset()? {
        Some(Preset::TopOrBottom { q }) => q,
        Some(Preset::TopToRandom) => Rational::one(),
        _ => run.q.clone().unwrap_or_else(|| rat(1, 2)),
    })
}

fn stat_names(stat: &StatArgs, default: &str) -> Vec<String> {
    if stat.stats.is_empty() {
        vec![default.to_string()]
    } else {
        stat.stats.clone()
    }
}

fn word_stats(run: &RunConfig, stat: &StatArgs) -> Result<(Vec<NamedStatistic<Word>>, Rational), CliError> {
    let q = stat_weight(run, stat)?;
    let stats = stat_names(stat, "weighted-descents")
        .iter()
        .map(|n| word_statistic(n, &q))
        .collect::<Result<_, _>>()?;
    Ok((stats, q))
}

fn forest_stats(run: &RunConfig, stat: &StatArgs) -> Result<Vec<NamedStatistic<Forest>>, CliError> {
    let (q1, _, q3) = run.trinomial_params().ok_or_else(|| {
        CliError::Usage("forest statistics take their weights from --preset trinomial or --q1/--q2/--q3".into())
    })?;
    stat_names(stat, "f2").iter().map(|n| forest_statistic(n, &q1, &q3)).collect()
}

fn shuffle_start(alg: &ShuffleAlgebra, ascending: &Word, stat: &StatArgs) -> Result<Word, CliError> {
    let Some(text) = &stat.start else {
        return Ok(ascending.clone());
    };
    let w = alg.alphabet().parse_word(text)?;
    let k = alg.alphabet().len();
    if w.content(k) != ascending.content(k) {
        return Err(CliError::Usage(format!("start {text:?} is not a rearrangement of the deck")));
    }
    Ok(w)
}

fn forest_start(space: &Space, stat: &StatArgs) -> Result<Forest, CliError> {
    let Space::Forests { n, start } = space else { unreachable!("forest space") };
    let f = match (&stat.start, start) {
        (Some(text), _) => Forest::parse(text)?,
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(CliError::Usage("forest chains need a start: --start ENC or --forest ENC".into())),
    };
    if f.degree() != *n {
        return Err(CliError::Usage(format!("start forest has {} vertices, expected {n}", f.degree())));
    }
    Ok(f)
}

/// Exact expectation series for each statistic from a point mass.
fn exact_series<K: Clone + Eq + std::hash::Hash>(
    k: &TransitionMatrix<K>,
    start: &K,
    t: usize,
    stats: &[NamedStatistic<K>],
) -> Result<BTreeMap<String, Vec<Rational>>, CliError> {
    let i = k
        .index_of(start)
        .ok_or_else(|| CliError::Usage("start state is not in the chain".into()))?;
    let law = Distribution::point_mass(k.len(), i)?;
    stats
        .iter()
        .map(|s| Ok((s.name.clone(), expectation_series(k, &law, t, &k.statistic(|x| (s.f)(x)))?)))
        .collect()
}

/// Closed-form targets that apply to this run, keyed by statistic name.
fn references(
    run: &RunConfig,
    space: &Space,
    start_is_ascending: bool,
    names: &[String],
    stat_q: &Rational,
    t: usize,
) -> Result<BTreeMap<String, Vec<Rational>>, CliError> {
    let mut out = BTreeMap::new();
    let (Some(preset), Space::Shuffle { content, .. }) = (run.preset()?, space) else {
        return Ok(out);
    };
    if !start_is_ascending || content.iter().any(|&c| c != 1) {
        return Ok(out);
    }
    for name in names {
        if let Some(r) = reference_series(&preset, name, stat_q, space.degree(), t) {
            out.insert(name.clone(), r);
        }
    }
    Ok(out)
}

fn series_json(series: &BTreeMap<String, Vec<Rational>>) -> Value {
    series
        .iter()
        .map(|(k, v)| (k.clone(), json!(v.iter().map(format_rational).collect::<Vec<_>>())))
        .collect::<Map<_, _>>()
        .into()
}

pub fn evolve(a: &EvolveArgs) -> Result<Output, CliError> {
    let run = &a.run;
    let space = run.space()?;
    let spec = run.spec(space.degree())?;
    let (series, refs, start_label) = match &space {
        Space::Shuffle { alg, content, ascending } => {
            let (stats, q) = word_stats(run, &a.stat)?;
            let start = shuffle_start(alg, ascending, &a.stat)?;
            let k = shuffle_chain(run, alg, content, &spec)?;
            let series = exact_series(&k, &start, a.stat.t, &stats)?;
            let names: Vec<String> = stats.iter().map(|s| s.name.clone()).collect();
            let refs = references(run, &space, &start == ascending, &names, &q, a.stat.t)?;
            (series, refs, alg.encode(&start))
        }
        Space::Forests { n, .. } => {
            let stats = forest_stats(run, &a.stat)?;
            let start = forest_start(&space, &a.stat)?;
            let k = forest_chain(run, *n, &spec)?;
            (exact_series(&k, &start, a.stat.t, &stats)?, BTreeMap::new(), start.encoding().to_string())
        }
    };
    let passed = refs.iter().all(|(name, r)| series.get(name) == Some(r));
    if run.format == Format::Csv {
        let names: Vec<&String> = series.keys().collect();
        let mut text = format!("t,{}\n", names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
        for t in 0..=a.stat.t {
            let row: Vec<String> = names.iter().map(|n| format_rational(&series[*n][t])).collect();
            text.push_str(&format!("{t},{}\n", row.join(",")));
        }
        return Ok(Output { text, passed });
    }
    let mut h = header("evolve", run, &space, Some(&spec))?;
    h.insert("start".into(), json!(start_label));
    h.insert("t".into(), json!(a.stat.t));
    h.insert("expectations".into(), series_json(&series));
    if !refs.is_empty() {
        h.insert("reference".into(), series_json(&refs));
        h.insert("matches_reference".into(), json!(passed));
    }
    Ok(Output::json(&Value::Object(h), passed))
}

pub fn simulate(a: &SimulateArgs) -> Result<Output, CliError> {
    let run = &a.run;
    json_only(run, "simulate")?;
    let space = run.space()?;
    let spec = run.spec(space.degree())?;
    let exec = run.exec();
    let t = a.stat.t;
    let (report, exact, sampler): (TrajectoryReport, BTreeMap<String, Vec<Rational>>, SamplerKind) = match &space {
        Space::Shuffle { alg, content, ascending } => {
            let (stats, _) = word_stats(run, &a.stat)?;
            let start = shuffle_start(alg, ascending, &a.stat)?;
            // Exact targets only when the matrix fits under the cap.
            let chain = shuffle_chain(run, alg, content, &spec).ok();
            let exact = match &chain {
                Some(k) => exact_series(k, &start, t, &stats)?,
                None => BTreeMap::new(),
            };
            let kind = a.sampler.unwrap_or(SamplerKind::Gsr);
            let report = match kind {
                SamplerKind::Gsr => {
                    let cut = composition_sampler(&spec)?;
                    run_trajectories(&start, t, a.trials, |w, rng| gsr_step(w, &cut, rng), &stats, a.seed, exec)
                }
                SamplerKind::Rows => {
                    let k = chain.as_ref().ok_or_else(|| {
                        CliError::Usage("row sampling needs the matrix; raise --cap or use --sampler gsr".into())
                    })?;
                    by_rows(k, &start, t, a.trials, &stats, a.seed, run)?
                }
            };
            (report, exact, kind)
        }
        Space::Forests { n, .. } => {
            if a.sampler == Some(SamplerKind::Gsr) {
                return Err(CliError::Usage("the cut-and-riffle sampler applies to decks only".into()));
            }
            let stats = forest_stats(run, &a.stat)?;
            let start = forest_start(&space, &a.stat)?;
            let k = forest_chain(run, *n, &spec)?;
            let exact = exact_series(&k, &start, t, &stats)?;
            (by_rows(&k, &start, t, a.trials, &stats, a.seed, run)?, exact, SamplerKind::Rows)
        }
    };
    let mut h = header("simulate", run, &space, Some(&spec))?;
    h.insert("sampler".into(), json!(format!("{sampler:?}").to_lowercase()));
    if let Value::Object(body) = report.to_json(&exact) {
        h.extend(body);
    }
    Ok(Output::json(&Value::Object(h), true))
}

/// Trajectories sampled from the rows of a built chain, with statistics
/// evaluated on the states.
fn by_rows<K: Clone + Eq + std::hash::Hash + Send + Sync>(
    k: &TransitionMatrix<K>,
    start: &K,
    t: usize,
    trials: u64,
    stats: &[NamedStatistic<K>],
    seed: u64,
    run: &RunConfig,
) -> Result<TrajectoryReport, CliError> {
    let rows = RowSampler::new(k)?;
    let i = k
        .index_of(start)
        .ok_or_else(|| CliError::Usage("start state is not in the chain".into()))?;
    let on_index: Vec<NamedStatistic<usize>> = stats
        .iter()
        .map(|s| {
            let values = k.statistic(|x| (s.f)(x));
            NamedStatistic::new(s.name.clone(), move |&j: &usize| values[j].clone())
        })
        .collect();
    Ok(run_trajectories(&i, t, trials, |&x, rng| rows.step(x, rng), &on_index, seed, run.exec()))
}

pub fn verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let exec = if a.serial { Exec::Serial } else { Exec::default() };
    let opts = SuiteOptions { only: a.only.clone(), exec };
    let suite = run_suite(&opts);
    let passed = suite.passed();
    if a.json {
        return Ok(Output::json(&suite.to_json(), passed));
    }
    Ok(Output { text: suite.table(), passed })
}
