//! Library results against independent computations: closed-form shuffle
//! probabilities, brute-force enumerations and direct operator iteration.

use std::collections::BTreeSet;

use num_traits::{One, ToPrimitive, Zero};

use hopfchain::chain::{build_transition_matrix, degree_states};
use hopfchain::exactmath::{binomial, int, mat_pow, rat, Rational};
use hopfchain::forest::{enumerate_forests, enumerate_trees, Forest, ForestAlgebra};
use hopfchain::hopf::{apply_cpp, eta, HopfAlgebra, LinComb};
use hopfchain::presets::Preset;
use hopfchain::shuffle::{Alphabet, FreeAssocAlgebra, ShuffleAlgebra, Word};
use hopfchain::spectral::primitive_basis_sector;

fn permutations(n: usize) -> Vec<Vec<u16>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u16);
            out.push(q);
        }
    }
    out
}

/// Maximal runs of consecutive values appearing left to right.
fn rising_sequences(w: &[u16]) -> usize {
    let mut pos = vec![0; w.len()];
    for (i, &c) in w.iter().enumerate() {
        pos[c as usize] = i;
    }
    1 + (1..w.len()).filter(|&v| pos[v] < pos[v - 1]).count()
}

#[test]
fn riffle_rows_match_rising_sequence_formula() {
    for n in 3..=5 {
        let alg = ShuffleAlgebra::new(Alphabet::distinct(n));
        for hands in 2..=3usize {
            let spec = Preset::Riffle { hands }.expand(n).unwrap();
            let k = build_transition_matrix(&alg, &spec, alg.sector_basis(&vec![1; n])).unwrap();
            let start = k.index_of(&Word((0..n as u16).collect())).unwrap();
            let denom = int(hands.pow(n as u32) as i64);
            for p in permutations(n) {
                let r = rising_sequences(&p);
                let want = Rational::from_integer(binomial(n + hands - r, n)) / &denom;
                let to = k.index_of(&Word(p.clone())).unwrap();
                assert_eq!(k.prob(start, to), &want, "n={n} a={hands} {p:?}");
            }
        }
    }
}

#[test]
fn top_to_random_from_sorted_deck() {
    let n = 5;
    let alg = ShuffleAlgebra::new(Alphabet::distinct(n));
    let spec = Preset::TopToRandom.expand(n).unwrap();
    let k = build_transition_matrix(&alg, &spec, alg.sector_basis(&vec![1; n])).unwrap();
    let start = k.index_of(&Word((0..n as u16).collect())).unwrap();
    let mut reached = 0;
    for i in 0..n {
        let mut w: Vec<u16> = (1..n as u16).collect();
        w.insert(i, 0);
        let to = k.index_of(&Word(w)).unwrap();
        assert_eq!(k.prob(start, to), &rat(1, n as i64));
        reached += 1;
    }
    assert_eq!(k.row_support(start).len(), reached);
}

fn dyck_words(n: usize) -> Vec<String> {
    fn go(open: usize, close: usize, cur: &mut String, out: &mut Vec<String>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push('(');
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(')');
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut String::new(), &mut out);
    out
}

#[test]
fn forest_enumeration_matches_brute_force() {
    // Rooted forests on n unlabelled vertices: 1, 1, 2, 4, 9, 20, 48, 115.
    let known = [1usize, 1, 2, 4, 9, 20, 48, 115];
    for n in 0..known.len() {
        let brute: BTreeSet<Forest> = dyck_words(n).iter().map(|d| Forest::parse(d).unwrap()).collect();
        let listed: BTreeSet<Forest> = enumerate_forests(n).into_iter().collect();
        assert_eq!(listed.len(), enumerate_forests(n).len(), "duplicates at n={n}");
        assert_eq!(brute, listed, "n={n}");
        assert_eq!(listed.len(), known[n]);
        if n > 0 {
            assert_eq!(enumerate_trees(n).len(), known[n - 1]);
        }
    }
}

fn apply_twice<A: HopfAlgebra>(alg: &A, spec: &hopfchain::CppSpec, x: &A::Key) -> LinComb<A::Key> {
    let once = apply_cpp(alg, &LinComb::basis(x.clone()), spec).unwrap();
    apply_cpp(alg, &once, spec).unwrap()
}

#[test]
fn two_step_kernel_from_operator_square() {
    let alg = ForestAlgebra;
    let n = 4;
    let spec = Preset::Trinomial { q1: rat(1, 4), q2: rat(1, 2), q3: rat(1, 4) }.expand(n).unwrap();
    let k = build_transition_matrix(&alg, &spec, degree_states(&alg, n)).unwrap();
    let k2 = mat_pow(k.kernel(), 2).unwrap();
    let beta2 = spec.beta() * spec.beta();
    for (i, x) in k.states().iter().enumerate() {
        let image = apply_twice(&alg, &spec, x);
        let ex = eta(&alg, x).unwrap();
        for (j, y) in k.states().iter().enumerate() {
            let want = image.coeff(y) * eta(&alg, y).unwrap() / (&beta2 * &ex);
            assert_eq!(k2.get(i, j), &want, "{x} -> {y}");
        }
    }

    let words = ShuffleAlgebra::new(Alphabet::from_chars("ab").unwrap());
    let spec = Preset::TopOrBottom { q: rat(1, 3) }.expand(4).unwrap();
    let states = words.sector_basis(&[2, 2]);
    let k = build_transition_matrix(&words, &spec, states).unwrap();
    let k2 = mat_pow(k.kernel(), 2).unwrap();
    for (i, x) in k.states().iter().enumerate() {
        let image = apply_twice(&words, &spec, x);
        let ex = eta(&words, x).unwrap();
        let beta2 = spec.beta() * spec.beta();
        for (j, y) in k.states().iter().enumerate() {
            let want = image.coeff(y) * eta(&words, y).unwrap() / (&beta2 * &ex);
            assert_eq!(k2.get(i, j), &want);
        }
    }
}

/// Brute-force path sum over intermediate states.
#[test]
fn matrix_power_is_a_path_sum() {
    let alg = ShuffleAlgebra::new(Alphabet::from_chars("abc").unwrap());
    let spec = Preset::Riffle { hands: 2 }.expand(4).unwrap();
    let k = build_transition_matrix(&alg, &spec, alg.sector_basis(&[2, 1, 1])).unwrap();
    let k3 = mat_pow(k.kernel(), 3).unwrap();
    let n = k.len();
    for i in 0..n {
        for j in 0..n {
            let mut total = Rational::zero();
            for (a, p) in k.row_support(i) {
                for (b, r) in k.row_support(a) {
                    total += &p * &r * k.prob(b, j);
                }
            }
            assert_eq!(k3.get(i, j), &total);
        }
    }
}

fn mobius(n: usize) -> i64 {
    let (mut m, mut result, mut p) = (n, 1, 2);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of Lyndon words with the given letter counts (Witt's formula).
fn witt(content: &[usize]) -> i64 {
    let n: usize = content.iter().sum();
    let g = content.iter().fold(0, |g, &c| gcd(g, c));
    let mut total = 0i64;
    for d in 1..=g {
        if g % d == 0 {
            let parts: Vec<usize> = content.iter().map(|c| c / d).collect();
            let m = hopfchain::exactmath::multinomial(&parts).to_i64().unwrap();
            total += mobius(d) * m;
        }
    }
    total / n as i64
}

fn brute_lyndon(content: &[usize]) -> usize {
    let alg = ShuffleAlgebra::new(Alphabet::distinct(content.len()));
    alg.sector_basis(content)
        .into_iter()
        .filter(|w| {
            let l = &w.0;
            (1..l.len()).all(|r| {
                let rot: Vec<u16> = l[r..].iter().chain(&l[..r]).copied().collect();
                l < &rot
            })
        })
        .count()
}

#[test]
fn primitive_dimensions_count_lyndon_words() {
    let alg = FreeAssocAlgebra::new(Alphabet::from_chars("abc").unwrap());
    for content in [vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0], vec![2, 2, 0], vec![3, 1, 0], vec![1, 1, 1], vec![2, 1, 1], vec![3, 2, 0]] {
        let dim = primitive_basis_sector(&alg, &content).len();
        assert_eq!(dim as i64, witt(&content), "{content:?}");
        assert_eq!(dim, brute_lyndon(&content), "{content:?}");
    }
}

#[test]
fn eta_on_forests_counts_vertex_removal_orders() {
    // Removing roots one at a time: linear extensions of the forest poset,
    // n! / Π subtree sizes.
    fn subtree_sizes(enc: &str) -> Vec<usize> {
        let bytes = enc.as_bytes();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for &b in bytes {
            if b == b'(' {
                stack.push(out.len());
                out.push(1);
            } else {
                let me = stack.pop().unwrap();
                if let Some(&parent) = stack.last() {
                    out[parent] += out[me];
                }
            }
        }
        out
    }
    for n in 1..=6 {
        for f in enumerate_forests(n) {
            let prod: usize = subtree_sizes(f.encoding()).iter().product();
            let want = Rational::from_integer(hopfchain::exactmath::factorial(n)) / int(prod as i64);
            assert_eq!(eta(&ForestAlgebra, &f).unwrap(), want, "{f}");
        }
    }
    assert!(eta(&ForestAlgebra, &Forest::point()).unwrap().is_one());
}
