//! Command-line flags and their resolution into a state space and operator.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use hopfchain::chain::{BuildOptions, DEFAULT_STATE_CAP};
use hopfchain::exactmath::Rational;
use hopfchain::forest::Forest;
use hopfchain::hopf::HopfAlgebra;
use hopfchain::presets::Preset;
use hopfchain::shuffle::{Alphabet, ShuffleAlgebra, Word};
use hopfchain::{CppSpec, Exec};

use crate::{rational_arg, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraName {
    Shuffle,
    Forests,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every computation subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "shuffle")]
    pub algebra: AlgebraName,
    /// Deck of N distinct cards 1 < 2 < … < N.
    #[arg(long, value_name = "N", conflicts_with = "deck")]
    pub distinct: Option<usize>,
    /// Deck given as a word, e.g. aabb; its sorted form is the ascending deck.
    #[arg(long, value_name = "WORD")]
    pub deck: Option<String>,
    /// Degree (number of vertices) for the forest algebra.
    #[arg(long)]
    pub n: Option<usize>,
    /// Starting forest as a canonical bracket string, e.g. "((()))".
    #[arg(long, value_name = "ENC")]
    pub forest: Option<String>,
    #[arg(long, value_name = "NAME", conflicts_with = "spec")]
    pub preset: Option<String>,
    /// Positional preset parameters, as p/q rationals.
    #[arg(long, num_args = 1.., value_parser = rational_arg)]
    pub params: Vec<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub q: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub a: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub m: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub q1: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub q2: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub q3: Option<Rational>,
    /// Operator given as JSON: {"n": 4, "terms": [{"composition": [1,3], "weight": "1/2"}]}.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Run without data parallelism.
    #[arg(long)]
    pub serial: bool,
}

/// A shuffle state space (one content sector) or all forests of one degree.
#[derive(Clone, Debug)]
pub enum Space {
    Shuffle { alg: ShuffleAlgebra, content: Vec<usize>, ascending: Word },
    Forests { n: usize, start: Option<Forest> },
}

impl Space {
    pub fn degree(&self) -> usize {
        match self {
            Space::Shuffle { ascending, .. } => ascending.len(),
            Space::Forests { n, .. } => *n,
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        match self {
            Space::Shuffle { alg, ascending, .. } => serde_json::json!({
                "algebra": "shuffle",
                "alphabet": alg.alphabet().labels(),
                "deck": alg.encode(ascending),
            }),
            Space::Forests { n, .. } => serde_json::json!({ "algebra": "forests", "n": n }),
        }
    }
}

impl RunConfig {
    pub fn exec(&self) -> Exec {
        if self.serial {
            Exec::Serial
        } else {
            Exec::default()
        }
    }

    pub fn build_options(&self) -> BuildOptions {
        BuildOptions { cap: self.cap, exec: self.exec() }
    }

    pub fn space(&self) -> Result<Space, CliError> {
        match self.algebra {
            AlgebraName::Shuffle => {
                let (alphabet, deck) = match (&self.distinct, &self.deck) {
                    (Some(n), None) => {
                        let a = Alphabet::distinct(*n);
                        let w = Word((0..*n as u16).collect());
                        (a, w)
                    }
                    (None, Some(d)) => {
                        let a = Alphabet::of_deck(d)?;
                        let w = a.parse_word(d)?;
                        (a, w)
                    }
                    _ => return Err(CliError::Usage("shuffle needs exactly one of --distinct N or --deck WORD".into())),
                };
                if deck.is_empty() {
                    return Err(CliError::Usage("the deck is empty".into()));
                }
                let content = deck.content(alphabet.len());
                let ascending = Alphabet::sorted_word(&content);
                Ok(Space::Shuffle { alg: ShuffleAlgebra::new(alphabet), content, ascending })
            }
            AlgebraName::Forests => {
                let start = self.forest.as_deref().map(Forest::parse).transpose()?;
                let n = match (self.n, &start) {
                    (Some(n), Some(f)) if n != f.degree() => {
                        return Err(CliError::Usage(format!("--n {n} disagrees with the {}-vertex --forest", f.degree())))
                    }
                    (Some(n), _) => n,
                    (None, Some(f)) => f.degree(),
                    (None, None) => return Err(CliError::Usage("forests need --n N or --forest ENC".into())),
                };
                Ok(Space::Forests { n, start })
            }
        }
    }

    /// Parameters for the preset, from --params or the named flags.
    fn preset_params(&self, name: &str) -> Vec<Rational> {
        if !self.params.is_empty() {
            return self.params.clone();
        }
        let named: Vec<&Option<Rational>> = match name {
            "riffle" => vec![&self.a],
            "biased" => vec![&self.q],
            "top-m-ordered" | "top-m-unordered" => vec![&self.m],
            "top-or-bottom" => vec![&self.q],
            "trinomial" => vec![&self.q1, &self.q2, &self.q3],
            _ => vec![],
        };
        named.into_iter().flatten().cloned().collect()
    }

    pub fn preset(&self) -> Result<Option<Preset>, CliError> {
        match &self.preset {
            Some(name) => Ok(Some(Preset::parse(name, &self.preset_params(name))?)),
            None => Ok(None),
        }
    }

    /// The operator at degree `n`, from --preset or --spec.
    pub fn spec(&self, n: usize) -> Result<CppSpec, CliError> {
        if let Some(p) = self.preset()? {
            return Ok(p.expand(n)?);
        }
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let spec = CppSpec::from_json(&text)?;
            if spec.degree() != n {
                return Err(CliError::Usage(format!(
                    "spec has degree {}, the state space has degree {n}",
                    spec.degree()
                )));
            }
            return Ok(spec);
        }
        Err(CliError::Usage("give an operator with --preset NAME or --spec FILE".into()))
    }

    /// Trinomial parameters, from the preset or the --q1/--q2/--q3 flags.
    pub fn trinomial_params(&self) -> Option<(Rational, Rational, Rational)> {
        if let Ok(Some(Preset::Trinomial { q1, q2, q3 })) = self.preset() {
            return Some((q1, q2, q3));
        }
        match (&self.q1, &self.q2, &self.q3) {
            (Some(a), Some(b), Some(c)) => Some((a.clone(), b.clone(), c.clone())),
            _ => None,
        }
    }
}
