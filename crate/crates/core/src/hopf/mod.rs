//! Graded connected Hopf algebras with a distinguished basis, and the descent
//! operators built from their graded projections.
//!
//! An algebra plugs in through [`HopfAlgebra`] by describing its basis in each
//! degree and the product and coproduct of basis elements. Everything else
//! (iterated products and coproducts, convolutions of projections, the
//! rescaling function `eta`, the state-space axioms) is generic.

mod cpp;
mod lincomb;

use std::fmt;
use std::hash::Hash;

use num_traits::{One, Signed, Zero};

pub use cpp::{normalize_spec, CppSpec, SpecTerm};
pub use lincomb::{LinComb, TensorComb};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// A graded connected Hopf algebra over the rationals, presented on a basis.
pub trait HopfAlgebra: Send + Sync {
    /// Canonical identifier of a basis element. Equal keys denote the same object.
    type Key: Clone + Ord + Hash + fmt::Debug + Send + Sync;

    fn name(&self) -> &str;

    /// The unique degree-0 basis element.
    fn unit(&self) -> Self::Key;

    fn degree(&self, key: &Self::Key) -> usize;

    /// All basis elements of degree `n`, sorted by key.
    fn basis(&self, n: usize) -> Vec<Self::Key>;

    fn mul_basis(&self, a: &Self::Key, b: &Self::Key) -> LinComb<Self::Key>;

    /// Coproduct of a basis element, as an arity-2 tensor.
    fn coproduct_basis(&self, x: &Self::Key) -> TensorComb<Self::Key>;

    fn encode(&self, key: &Self::Key) -> String;

    fn decode(&self, text: &str) -> Result<Self::Key>;

    /// Finer grading preserved by product and coproduct. Defaults to the degree alone.
    fn content(&self, key: &Self::Key) -> Vec<usize> {
        vec![self.degree(key)]
    }

    /// All contents occurring in degree `n`.
    fn contents(&self, n: usize) -> Vec<Vec<usize>> {
        vec![vec![n]]
    }

    /// Basis elements with the given content, sorted by key.
    fn sector_basis(&self, content: &[usize]) -> Vec<Self::Key> {
        let n = content.iter().sum();
        self.basis(n)
            .into_iter()
            .filter(|k| self.content(k) == content)
            .collect()
    }

    /// Coproduct terms `(left, right, coefficient)` whose left leg has degree `left_degree`.
    fn coproduct_split(&self, x: &Self::Key, left_degree: usize) -> Vec<(Self::Key, Self::Key, Rational)> {
        self.coproduct_basis(x)
            .iter()
            .filter(|(legs, _)| self.degree(&legs[0]) == left_degree)
            .map(|(legs, c)| (legs[0].clone(), legs[1].clone(), c.clone()))
            .collect()
    }
}

pub fn product<A: HopfAlgebra>(alg: &A, w: &LinComb<A::Key>, z: &LinComb<A::Key>) -> LinComb<A::Key> {
    let mut out = LinComb::zero();
    for (a, ca) in w {
        for (b, cb) in z {
            out.add_scaled(&alg.mul_basis(a, b), &(ca * cb));
        }
    }
    out
}

pub fn coproduct<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>) -> TensorComb<A::Key> {
    let mut out = LinComb::zero();
    for (k, c) in x {
        out.add_scaled(&alg.coproduct_basis(k), c);
    }
    out
}

/// Legwise product in the tensor-power algebra.
pub fn tensor_product<A: HopfAlgebra>(alg: &A, s: &TensorComb<A::Key>, t: &TensorComb<A::Key>) -> TensorComb<A::Key> {
    let mut out = LinComb::zero();
    for (ls, cs) in s {
        for (lt, ct) in t {
            debug_assert_eq!(ls.len(), lt.len());
            let mut partial: TensorComb<A::Key> = LinComb::term(Vec::new(), cs * ct);
            for (a, b) in ls.iter().zip(lt) {
                let leg = alg.mul_basis(a, b);
                let mut next = LinComb::zero();
                for (prefix, cp) in &partial {
                    for (k, ck) in &leg {
                        let mut key = prefix.clone();
                        key.push(k.clone());
                        next.add_term(key, cp * ck);
                    }
                }
                partial = next;
            }
            out.add_scaled(&partial, &Rational::one());
        }
    }
    out
}

/// `Δ^{[a]}`: `Δ^{[1]}` is the identity and `Δ^{[a]} = (ι ⊗ … ⊗ ι ⊗ Δ) Δ^{[a-1]}`.
pub fn iterated_coproduct<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>, arity: usize) -> Result<TensorComb<A::Key>> {
    if arity == 0 {
        return Err(Error::Parameter("iterated coproduct needs arity at least 1".into()));
    }
    let mut acc: TensorComb<A::Key> = x.map_keys(|k| vec![k.clone()]);
    for _ in 1..arity {
        let mut next = LinComb::zero();
        for (legs, c) in &acc {
            let (last, init) = legs.split_last().expect("non-empty tensor");
            for (split, cs) in &alg.coproduct_basis(last) {
                let mut key = init.to_vec();
                key.extend(split.iter().cloned());
                next.add_term(key, c * cs);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `m^{[a]}`: multiplies the tensor legs left to right.
pub fn iterated_product<A: HopfAlgebra>(alg: &A, t: &TensorComb<A::Key>) -> LinComb<A::Key> {
    let mut out = LinComb::zero();
    for (legs, c) in t {
        let mut acc = LinComb::basis(alg.unit());
        for leg in legs {
            acc = product(alg, &acc, &LinComb::basis(leg.clone()));
        }
        out.add_scaled(&acc, c);
    }
    out
}

fn require_degree<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>, n: usize) -> Result<()> {
    match x.keys().map(|k| alg.degree(k)).find(|&d| d != n) {
        Some(found) => Err(Error::Degree { expected: n, found }),
        None => Ok(()),
    }
}

fn convolve_basis<A: HopfAlgebra>(alg: &A, x: &A::Key, parts: &[usize]) -> LinComb<A::Key> {
    match parts {
        [] => LinComb::zero(),
        [d] => {
            if alg.degree(x) == *d {
                LinComb::basis(x.clone())
            } else {
                LinComb::zero()
            }
        }
        [d, rest @ ..] => {
            let mut out = LinComb::zero();
            for (left, right, c) in alg.coproduct_split(x, *d) {
                let tail = convolve_basis(alg, &right, rest);
                if tail.is_zero() {
                    continue;
                }
                out.add_scaled(&product(alg, &LinComb::basis(left), &tail), &c);
            }
            out
        }
    }
}

/// `Proj_{d1} * … * Proj_{da}` applied to a homogeneous element of degree `Σ d_i`.
/// Zero parts are allowed.
pub fn apply_proj_convolution<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>, composition: &[usize]) -> Result<LinComb<A::Key>> {
    if composition.is_empty() {
        return Err(Error::Parameter("empty composition".into()));
    }
    require_degree(alg, x, composition.iter().sum())?;
    let mut out = LinComb::zero();
    for (k, c) in x {
        out.add_scaled(&convolve_basis(alg, k, composition), c);
    }
    Ok(out)
}

/// The descent operator `Σ α_D Proj_{d1} * … * Proj_{da}` on a degree-`n` element.
pub fn apply_cpp<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>, spec: &CppSpec) -> Result<LinComb<A::Key>> {
    require_degree(alg, x, spec.degree())?;
    let mut out = LinComb::zero();
    for term in spec.terms() {
        out.add_scaled(&apply_proj_convolution(alg, x, &term.composition)?, &term.weight);
    }
    Ok(out)
}

/// Coefficient sum of `Proj_1^{⊗n} Δ^{[n]}(x)`: the number of ways (with
/// multiplicity) to break `x` into singletons. Zero is reported as an error.
pub fn eta<A: HopfAlgebra>(alg: &A, x: &A::Key) -> Result<Rational> {
    let value = eta_unchecked(alg, x);
    if value.is_zero() {
        return Err(Error::StateSpace(format!(
            "eta vanishes on {} (it cannot be broken into singletons)",
            alg.encode(x)
        )));
    }
    Ok(value)
}

fn eta_unchecked<A: HopfAlgebra>(alg: &A, x: &A::Key) -> Rational {
    if alg.degree(x) <= 1 {
        return Rational::one();
    }
    alg.coproduct_split(x, 1)
        .into_iter()
        .map(|(_, right, c)| c * eta_unchecked(alg, &right))
        .sum()
}

/// A failure of one of the three state-space basis conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NegativeProduct { left: String, right: String, term: String, coeff: String },
    NegativeCoproduct { element: String, term: String, coeff: String },
    PrimitiveBasisElement { element: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeProduct { left, right, term, coeff } => {
                write!(f, "product {left}·{right} has coefficient {coeff} on {term}")
            }
            Violation::NegativeCoproduct { element, term, coeff } => {
                write!(f, "coproduct of {element} has coefficient {coeff} on {term}")
            }
            Violation::PrimitiveBasisElement { element } => {
                write!(f, "basis element {element} of degree > 1 is primitive")
            }
        }
    }
}

/// Checks non-negative structure constants and the absence of primitive basis
/// elements above degree 1, for every basis element of degree at most `n_max`.
/// An empty result means the basis passes.
pub fn check_state_space_basis<A: HopfAlgebra>(alg: &A, n_max: usize) -> Vec<Violation> {
    let by_degree: Vec<Vec<A::Key>> = (0..=n_max).map(|n| alg.basis(n)).collect();
    let mut violations = Vec::new();
    for i in 0..=n_max {
        for j in 0..=(n_max - i) {
            for a in &by_degree[i] {
                for b in &by_degree[j] {
                    for (k, c) in &alg.mul_basis(a, b) {
                        if c.is_negative() {
                            violations.push(Violation::NegativeProduct {
                                left: alg.encode(a),
                                right: alg.encode(b),
                                term: alg.encode(k),
                                coeff: c.to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    let unit = alg.unit();
    for (n, keys) in by_degree.iter().enumerate() {
        for x in keys {
            let delta = alg.coproduct_basis(x);
            for (legs, c) in &delta {
                if c.is_negative() {
                    violations.push(Violation::NegativeCoproduct {
                        element: alg.encode(x),
                        term: legs.iter().map(|k| alg.encode(k)).collect::<Vec<_>>().join(" ⊗ "),
                        coeff: c.to_string(),
                    });
                }
            }
            if n > 1 {
                let mut primitive = LinComb::basis(vec![unit.clone(), x.clone()]);
                primitive.add_term(vec![x.clone(), unit.clone()], Rational::one());
                if delta == primitive {
                    violations.push(Violation::PrimitiveBasisElement { element: alg.encode(x) });
                }
            }
        }
    }
    violations
}

/// Basis pairs `(w, z)` of combined degree at most `n_max` with `Δ(wz) ≠ Δ(w)Δ(z)`.
pub fn bialgebra_violations<A: HopfAlgebra>(alg: &A, n_max: usize) -> Vec<(String, String)> {
    let by_degree: Vec<Vec<A::Key>> = (0..=n_max).map(|n| alg.basis(n)).collect();
    let mut bad = Vec::new();
    for i in 0..=n_max {
        for j in 0..=(n_max - i) {
            for w in &by_degree[i] {
                let dw = alg.coproduct_basis(w);
                for z in &by_degree[j] {
                    let lhs = coproduct(alg, &alg.mul_basis(w, z));
                    let rhs = tensor_product(alg, &dw, &alg.coproduct_basis(z));
                    if lhs != rhs {
                        bad.push((alg.encode(w), alg.encode(z)));
                    }
                }
            }
        }
    }
    bad
}

/// Basis elements of degree at most `n_max` with `(ι⊗Δ)Δ(x) ≠ (Δ⊗ι)Δ(x)`.
pub fn coassociativity_violations<A: HopfAlgebra>(alg: &A, n_max: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for n in 0..=n_max {
        for x in alg.basis(n) {
            let mut right = LinComb::zero();
            let mut left = LinComb::zero();
            for (legs, c) in &alg.coproduct_basis(&x) {
                for (split, d) in &alg.coproduct_basis(&legs[1]) {
                    right.add_term(vec![legs[0].clone(), split[0].clone(), split[1].clone()], c * d);
                }
                for (split, d) in &alg.coproduct_basis(&legs[0]) {
                    left.add_term(vec![split[0].clone(), split[1].clone(), legs[1].clone()], c * d);
                }
            }
            if left != right {
                bad.push(alg.encode(&x));
            }
        }
    }
    bad
}
