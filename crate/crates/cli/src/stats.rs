//! Named statistics on decks and forests, and the closed forms their
//! expectations follow under particular shuffles.

use num_traits::One;

use hopfchain::exactmath::{int, rpow, Rational};
use hopfchain::forest::{f_j_statistic, Forest};
use hopfchain::presets::Preset;
use hopfchain::shuffle::{descent_count, peak_count, weighted_descent_stat, weighted_peak_stat, Word};
use hopfchain::simulate::NamedStatistic;

use crate::CliError;

pub const WORD_STATS: &[&str] = &["weighted-descents", "weighted-peaks", "descents", "peaks"];

pub fn word_statistic(name: &str, q: &Rational) -> Result<NamedStatistic<Word>, CliError> {
    let q = q.clone();
    let stat = match name {
        "weighted-descents" => NamedStatistic::new(name, move |w: &Word| weighted_descent_stat(w, &q)),
        "weighted-peaks" => NamedStatistic::new(name, move |w: &Word| weighted_peak_stat(w, &q)),
        "descents" => NamedStatistic::new(name, |w: &Word| int(descent_count(w) as i64)),
        "peaks" => NamedStatistic::new(name, |w: &Word| int(peak_count(w) as i64)),
        other => {
            return Err(CliError::Usage(format!(
                "unknown deck statistic {other:?}; known: {}",
                WORD_STATS.join(", ")
            )))
        }
    };
    Ok(stat)
}

/// `f<j>` for a positive integer `j`, e.g. `f2`.
pub fn forest_statistic(name: &str, q1: &Rational, q3: &Rational) -> Result<NamedStatistic<Forest>, CliError> {
    let j: usize = name
        .strip_prefix('f')
        .and_then(|s| s.parse().ok())
        .filter(|&j| j > 0)
        .ok_or_else(|| CliError::Usage(format!("unknown forest statistic {name:?}; use f<j>, e.g. f2")))?;
    let (q1, q3) = (q1.clone(), q3.clone());
    Ok(NamedStatistic::new(name, move |f: &Forest| f_j_statistic(f, j, &q1, &q3)))
}

fn frac(a: usize, b: usize) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Exact `E[stat(X_t)]`, `t = 0..=t_max`, from the ascending distinct deck of
/// size `n`, where a closed form is known:
///
/// * top-or-bottom(q) with the statistic weighted by the same `q`:
///   weighted descents `(1 − ((n−2)/n)^t)/2`, weighted peaks `(1 − ((n−3)/n)^t)/3`;
/// * riffle(a): descents `(1 − a^{−t})(n−1)/2`, peaks `(1 − a^{−2t})(n−2)/3`.
pub fn reference_series(
    preset: &Preset,
    stat: &str,
    stat_q: &Rational,
    n: usize,
    t_max: usize,
) -> Option<Vec<Rational>> {
    let one = Rational::one();
    let series = |ratio: Rational, scale: Rational| -> Vec<Rational> {
        (0..=t_max).map(|t| (&one - rpow(&ratio, t)) * &scale).collect()
    };
    let tob_q = match preset {
        Preset::TopOrBottom { q } => Some(q.clone()),
        Preset::TopToRandom => Some(one.clone()),
        _ => None,
    };
    if let Some(q) = tob_q {
        if &q != stat_q {
            return None;
        }
        return match stat {
            "weighted-descents" if n >= 2 => Some(series(frac(n - 2, n), frac(1, 2))),
            "weighted-peaks" if n >= 3 => Some(series(frac(n - 3, n), frac(1, 3))),
            _ => None,
        };
    }
    if let Preset::Riffle { hands } = preset {
        let a = int(*hands as i64);
        return match stat {
            "descents" if n >= 1 => Some(series(&one / &a, frac(n - 1, 2))),
            "peaks" if n >= 2 => Some(series(&one / (&a * &a), frac(n - 2, 3))),
            _ => None,
        };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use hopfchain::exactmath::rat;

    #[test]
    fn statistics_by_name() {
        let w = Word(vec![2, 0, 3, 1]);
        assert_eq!((word_statistic("descents", &rat(1, 2)).unwrap().f)(&w), int(2));
        assert_eq!((word_statistic("peaks", &rat(1, 2)).unwrap().f)(&w), int(1));
        assert!(word_statistic("inversions", &rat(1, 2)).is_err());
        let f = Forest::parse("(()())").unwrap();
        let f2 = forest_statistic("f2", &int(1), &int(1)).unwrap();
        assert_eq!((f2.f)(&f), int(3));
        assert!(forest_statistic("g2", &int(1), &int(1)).is_err());
        assert!(forest_statistic("f0", &int(1), &int(1)).is_err());
    }

    #[test]
    fn references_start_at_zero() {
        let r = reference_series(&Preset::Riffle { hands: 2 }, "descents", &rat(1, 2), 5, 3).unwrap();
        assert_eq!(r, vec![int(0), int(1), rat(3, 2), rat(7, 4)]);
        let tob = Preset::TopOrBottom { q: rat(1, 3) };
        assert!(reference_series(&tob, "weighted-descents", &rat(1, 2), 4, 2).is_none());
        let r = reference_series(&tob, "weighted-descents", &rat(1, 3), 4, 2).unwrap();
        assert_eq!(r, vec![int(0), rat(1, 4), rat(3, 8)]);
    }
}
