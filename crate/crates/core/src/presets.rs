//! Named shuffling schemes and their expansions into descent operators.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::combinat::weak_compositions;
use crate::error::{Error, Result};
use crate::exactmath::{factorial, format_rational, from_bigint, rpow, Rational};
use crate::hopf::CppSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `a`-handed riffle: weight 1 on every weak composition into `a` parts.
    Riffle { hands: usize },
    /// Cut sizes drawn from the multinomial with pile probabilities `q_1, …, q_a`.
    Biased { probs: Vec<Rational> },
    TopToRandom,
    /// Cut `m` cards and reinsert them keeping their relative order.
    TopMOrdered { m: usize },
    /// Cut `m` cards and reinsert them one at a time in any order.
    TopMUnordered { m: usize },
    /// Top-to-random with probability `q`, bottom-to-random otherwise.
    TopOrBottom { q: Rational },
    /// Top and bottom cards moved at rates `q1` and `q3`, middle kept with `q2`.
    Trinomial { q1: Rational, q2: Rational, q3: Rational },
}

pub const PRESET_NAMES: &[&str] = &[
    "riffle",
    "biased",
    "top-to-random",
    "top-m-ordered",
    "top-m-unordered",
    "top-or-bottom",
    "trinomial",
];

fn probability(name: &str, q: &Rational) -> Result<()> {
    if q.is_negative() || q > &Rational::one() {
        return Err(Error::Parameter(format!(
            "{name} must lie in [0, 1], got {}",
            format_rational(q)
        )));
    }
    Ok(())
}

fn count_param(name: &str, value: &Rational) -> Result<usize> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Parameter(format!(
            "{name} must be a non-negative integer, got {}",
            format_rational(value)
        )));
    }
    value
        .to_integer()
        .try_into()
        .map_err(|_| Error::Parameter(format!("{name} is too large")))
}

impl Preset {
    /// Builds a preset from its name and positional parameters.
    ///
    /// `riffle [a=2]`, `biased q_1 … q_{a-1}` (the last pile takes the
    /// remaining probability), `top-m-ordered m`, `top-m-unordered m`,
    /// `top-or-bottom [q=1/2]`, `trinomial q1 q2 q3`.
    pub fn parse(name: &str, params: &[Rational]) -> Result<Self> {
        let arity = |expected: usize| -> Result<()> {
            if params.len() > expected {
                Err(Error::Parameter(format!(
                    "preset {name} takes at most {expected} parameter(s), got {}",
                    params.len()
                )))
            } else {
                Ok(())
            }
        };
        let required = |i: usize, what: &str| -> Result<&Rational> {
            params
                .get(i)
                .ok_or_else(|| Error::Parameter(format!("preset {name} needs parameter {what}")))
        };
        let preset = match name {
            "riffle" => {
                arity(1)?;
                let hands = params.first().map_or(Ok(2), |a| count_param("a", a))?;
                Preset::Riffle { hands }
            }
            "biased" => {
                if params.is_empty() {
                    return Err(Error::Parameter("preset biased needs at least one probability".into()));
                }
                let mut probs = params.to_vec();
                let rest = Rational::one() - probs.iter().sum::<Rational>();
                for q in &probs {
                    probability("biased probability", q)?;
                }
                if rest.is_negative() {
                    return Err(Error::Parameter("biased probabilities sum to more than 1".into()));
                }
                probs.push(rest);
                Preset::Biased { probs }
            }
            "top-to-random" => {
                arity(0)?;
                Preset::TopToRandom
            }
            "top-m-ordered" => {
                arity(1)?;
                Preset::TopMOrdered { m: count_param("m", required(0, "m")?)? }
            }
            "top-m-unordered" => {
                arity(1)?;
                Preset::TopMUnordered { m: count_param("m", required(0, "m")?)? }
            }
            "top-or-bottom" => {
                arity(1)?;
                let q = params.first().cloned().unwrap_or_else(|| Rational::new(1.into(), 2.into()));
                probability("q", &q)?;
                Preset::TopOrBottom { q }
            }
            "trinomial" => {
                arity(3)?;
                let (q1, q2, q3) = (required(0, "q1")?, required(1, "q2")?, required(2, "q3")?);
                for (n, q) in [("q1", q1), ("q2", q2), ("q3", q3)] {
                    probability(n, q)?;
                }
                if q1 + q2 + q3 != Rational::one() {
                    return Err(Error::Parameter("trinomial parameters must sum to 1".into()));
                }
                Preset::Trinomial { q1: q1.clone(), q2: q2.clone(), q3: q3.clone() }
            }
            other => {
                return Err(Error::Parameter(format!(
                    "unknown preset {other:?}; known presets: {}",
                    PRESET_NAMES.join(", ")
                )))
            }
        };
        Ok(preset)
    }

    /// Raw `(weak composition, weight)` terms at degree `n`, before normalisation.
    pub fn raw_terms(&self, n: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
        let one = Rational::one;
        let terms = match self {
            Preset::Riffle { hands } => {
                if *hands < 2 {
                    return Err(Error::Parameter("riffle needs at least 2 hands".into()));
                }
                weak_compositions(n, *hands).into_iter().map(|d| (d, one())).collect()
            }
            Preset::Biased { probs } => weak_compositions(n, probs.len())
                .into_iter()
                .map(|d| {
                    let w = d.iter().zip(probs).map(|(&di, q)| rpow(q, di)).product();
                    (d, w)
                })
                .collect(),
            Preset::TopToRandom => vec![(vec![1, n.saturating_sub(1)], one())],
            Preset::TopMOrdered { m } | Preset::TopMUnordered { m } => {
                if *m == 0 || *m > n {
                    return Err(Error::Parameter(format!("m must lie in 1..={n}, got {m}")));
                }
                let head = if matches!(self, Preset::TopMOrdered { .. }) {
                    vec![*m]
                } else {
                    vec![1; *m]
                };
                let mut d = head;
                d.push(n - m);
                vec![(d, one())]
            }
            Preset::TopOrBottom { q } => vec![
                (vec![1, n.saturating_sub(1)], q.clone()),
                (vec![n.saturating_sub(1), 1], one() - q),
            ],
            Preset::Trinomial { q1, q2, q3 } => {
                let mut out = Vec::new();
                for m1 in 0..=n {
                    for m3 in 0..=(n - m1) {
                        let m2 = n - m1 - m3;
                        let mut d = vec![1; m1];
                        d.push(m2);
                        d.extend(std::iter::repeat_n(1, m3));
                        let w = rpow(q1, m1) * rpow(q2, m2) * rpow(q3, m3)
                            / from_bigint(factorial(m1) * factorial(m3));
                        out.push((d, w));
                    }
                }
                out
            }
        };
        Ok(terms)
    }

    pub fn expand(&self, n: usize) -> Result<CppSpec> {
        CppSpec::new(n, self.raw_terms(n)?)
    }

    /// The top-or-bottom parameter `q1 / (q1 + q3)` of a trinomial preset.
    pub fn trinomial_top_bias(&self) -> Option<Rational> {
        match self {
            Preset::Trinomial { q1, q3, .. } if !(q1 + q3).is_zero() => Some(q1 / (q1 + q3)),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            Preset::Riffle { hands } => write!(f, "riffle({hands})"),
            Preset::Biased { probs } => {
                let shown: Vec<String> = probs[..probs.len() - 1].iter().map(r).collect();
                write!(f, "biased({})", shown.join(","))
            }
            Preset::TopToRandom => write!(f, "top-to-random"),
            Preset::TopMOrdered { m } => write!(f, "top-m-ordered({m})"),
            Preset::TopMUnordered { m } => write!(f, "top-m-unordered({m})"),
            Preset::TopOrBottom { q } => write!(f, "top-or-bottom({})", r(q)),
            Preset::Trinomial { q1, q2, q3 } => write!(f, "trinomial({},{},{})", r(q1), r(q2), r(q3)),
        }
    }
}

/// Expands a named preset at degree `n`.
pub fn expand_preset(name: &str, params: &[Rational], n: usize) -> Result<CppSpec> {
    Preset::parse(name, params)?.expand(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    #[test]
    fn normalisers() {
        // Degree 1 admits no valid operator: every composition of 1 is (1).
        assert!(Preset::TopToRandom.expand(1).is_err());
        for n in 2..=6 {
            let riffle = Preset::Riffle { hands: 2 }.expand(n).unwrap();
            assert_eq!(riffle.beta(), int(1 << n));
            let riffle3 = Preset::Riffle { hands: 3 }.expand(n).unwrap();
            assert_eq!(riffle3.beta(), int(3i64.pow(n as u32)));
            assert_eq!(Preset::TopToRandom.expand(n).unwrap().beta(), int(n as i64));
            let biased = Preset::parse("biased", &[rat(1, 3)]).unwrap().expand(n).unwrap();
            assert_eq!(biased.beta(), int(1));
            let tri = Preset::parse("trinomial", &[rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap().expand(n).unwrap();
            assert_eq!(tri.beta(), int(1));
        }
    }

    #[test]
    fn composition_laws() {
        let tob = Preset::TopOrBottom { q: rat(1, 2) }.expand(4).unwrap().composition_law();
        assert_eq!(tob.len(), 2);
        assert_eq!(tob[&vec![1, 3]], rat(1, 2));
        assert_eq!(tob[&vec![3, 1]], rat(1, 2));
        let ttr = Preset::TopToRandom.expand(4).unwrap().composition_law();
        assert_eq!(ttr[&vec![1, 3]], int(1));
        let riffle = Preset::Riffle { hands: 2 }.expand(3).unwrap().composition_law();
        assert_eq!(riffle[&vec![3]], rat(1, 4));
        assert_eq!(riffle[&vec![1, 2]], rat(3, 8));
        assert_eq!(riffle[&vec![2, 1]], rat(3, 8));
    }

    #[test]
    fn special_cases() {
        let q1 = Preset::TopOrBottom { q: int(1) }.expand(5).unwrap();
        assert_eq!(q1, Preset::TopToRandom.expand(5).unwrap());
        let tri = Preset::parse("trinomial", &[rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap();
        assert_eq!(tri.trinomial_top_bias(), Some(rat(1, 2)));
        let tri = Preset::parse("trinomial", &[rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(tri.trinomial_top_bias(), Some(rat(2, 3)));
    }

    #[test]
    fn bad_parameters() {
        assert!(Preset::parse("shuffle-everything", &[]).is_err());
        assert!(Preset::parse("trinomial", &[rat(1, 2), rat(1, 2), rat(1, 2)]).is_err());
        assert!(Preset::parse("biased", &[rat(2, 3), rat(2, 3)]).is_err());
        assert!(Preset::parse("top-or-bottom", &[int(2)]).is_err());
        assert!(Preset::parse("top-m-ordered", &[]).is_err());
        assert!(Preset::parse("riffle", &[rat(3, 2)]).is_err());
        assert!(Preset::Riffle { hands: 1 }.expand(3).is_err());
        assert!(Preset::TopMOrdered { m: 3 }.expand(3).is_err());
    }
}
