use num_traits::{One, Zero};
use proptest::prelude::*;

use hopfchain::chain::{build_transition_matrix_with, BuildOptions};
use hopfchain::exactmath::{mat_mul, mat_pow, nullspace, rank, rat, RatMatrix, Rational};
use hopfchain::forest::{enumerate_forests, ForestAlgebra};
use hopfchain::hopf::{apply_cpp, apply_proj_convolution, CppSpec, HopfAlgebra, LinComb};
use hopfchain::presets::Preset;
use hopfchain::shuffle::{concat_product, deconcat_coproduct, deshuffle_coproduct, shuffle_product, Alphabet, ShuffleAlgebra, Word};
use hopfchain::Exec;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u16..3, 0..=max_len).prop_map(Word)
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn shuffle_lin(a: &LinComb<Word>, b: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for (x, c) in a {
        for (y, d) in b {
            out.add_scaled(&shuffle_product(x, y), &(c * d));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_is_associative_and_commutative(u in word(3), v in word(3), w in word(2)) {
        let left = shuffle_lin(&shuffle_product(&u, &v), &LinComb::basis(w.clone()));
        let right = shuffle_lin(&LinComb::basis(u.clone()), &shuffle_product(&v, &w));
        prop_assert_eq!(left, right);
        prop_assert_eq!(shuffle_product(&u, &v), shuffle_product(&v, &u));
    }

    /// `<u ш v, w> = <u ⊗ v, Δ w>` for the deshuffle coproduct.
    #[test]
    fn shuffle_and_deshuffle_are_dual(u in word(3), v in word(3)) {
        let n = u.len() + v.len();
        let alg = ShuffleAlgebra::new(Alphabet::distinct(3));
        let product = shuffle_product(&u, &v);
        for w in alg.basis(n) {
            let pairing = deshuffle_coproduct(&w).coeff(&vec![u.clone(), v.clone()]);
            prop_assert_eq!(product.coeff(&w), pairing);
        }
    }

    /// `<u · v, w> = <u ⊗ v, Δ w>` for deconcatenation.
    #[test]
    fn concatenation_and_deconcatenation_are_dual(w in word(5), cut in 0usize..=5) {
        let cut = cut.min(w.len());
        let (u, v) = (Word(w.0[..cut].to_vec()), Word(w.0[cut..].to_vec()));
        prop_assert_eq!(concat_product(&u, &v), LinComb::basis(w.clone()));
        prop_assert_eq!(deconcat_coproduct(&w).coeff(&vec![u, v]), Rational::one());
    }

    #[test]
    fn rank_plus_nullity(entries in prop::collection::vec(small_rational(), 12), cols in 2usize..=4) {
        let rows = 12 / cols;
        let m = RatMatrix::from_fn(rows, cols, |r, c| entries[r * cols + c].clone());
        let null = nullspace(&m);
        prop_assert_eq!(rank(&m) + null.len(), cols);
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn matrix_powers_add(entries in prop::collection::vec(small_rational(), 9), s in 0u32..4, t in 0u32..4) {
        let m = RatMatrix::from_fn(3, 3, |r, c| entries[r * 3 + c].clone());
        let lhs = mat_pow(&m, s + t).unwrap();
        let rhs = mat_mul(&mat_pow(&m, s).unwrap(), &mat_pow(&m, t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn descent_operator_is_linear(a in small_rational(), b in small_rational(), i in 0usize..9, j in 0usize..9, q in 0i64..=4) {
        let alg = ForestAlgebra;
        let forests = enumerate_forests(4);
        let spec = Preset::TopOrBottom { q: rat(q, 4) }.expand(4).unwrap();
        let (x, y) = (LinComb::basis(forests[i].clone()), LinComb::basis(forests[j].clone()));
        let combo = &x.scaled(&a) + &y.scaled(&b);
        let lhs = apply_cpp(&alg, &combo, &spec).unwrap();
        let rhs = &apply_cpp(&alg, &x, &spec).unwrap().scaled(&a) + &apply_cpp(&alg, &y, &spec).unwrap().scaled(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_parts_do_not_change_the_operator(parts in prop::collection::vec(0usize..=2, 1..=5), w in prop::collection::vec(0u16..2, 4)) {
        let n: usize = parts.iter().sum();
        prop_assume!(n > 0 && n <= 4);
        let alg = ShuffleAlgebra::new(Alphabet::distinct(2));
        let x = LinComb::basis(Word(w[..n].to_vec()));
        let stripped: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        prop_assert_eq!(
            apply_proj_convolution(&alg, &x, &parts).unwrap(),
            apply_proj_convolution(&alg, &x, &stripped).unwrap()
        );
    }
}

#[test]
fn zero_parts_in_a_spec_give_the_same_chain() {
    let alg = ShuffleAlgebra::new(Alphabet::from_chars("ab").unwrap());
    let padded = CppSpec::new(3, [(vec![0, 1, 0, 2], rat(1, 2)), (vec![2, 0, 1], rat(1, 2))]).unwrap();
    let plain = CppSpec::new(3, [(vec![1, 2], rat(1, 2)), (vec![2, 1], rat(1, 2))]).unwrap();
    let opts = BuildOptions::default();
    let a = build_transition_matrix_with(&alg, &padded, alg.sector_basis(&[2, 1]), opts).unwrap();
    let b = build_transition_matrix_with(&alg, &plain, alg.sector_basis(&[2, 1]), opts).unwrap();
    assert_eq!(a.kernel(), b.kernel());
}

#[test]
fn serial_and_parallel_builds_agree() {
    let alg = ShuffleAlgebra::new(Alphabet::distinct(5));
    let spec = Preset::Riffle { hands: 2 }.expand(5).unwrap();
    let build = |exec| {
        let opts = BuildOptions { exec, ..BuildOptions::default() };
        build_transition_matrix_with(&alg, &spec, alg.sector_basis(&[1; 5]), opts).unwrap()
    };
    let (s, p) = (build(Exec::Serial), build(Exec::Parallel));
    assert_eq!(s.kernel(), p.kernel());
    assert_eq!(s.labels(), p.labels());
}
