//! Closed-form spectra of descent-operator chains, Hilbert series inversion,
//! primitive subspaces, and explicit eigenvectors of top-or-bottom-to-random.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::combinat::{index_permutations, partitions};
use crate::error::{Error, Result};
use crate::exactmath::{
    annihilation_check_with, binomial, format_rational, from_bigint, multichoose, nullspace, rank_with, rpow,
    RatMatrix, Rational,
};
use crate::hopf::{apply_cpp, product, CppSpec, HopfAlgebra, LinComb};
use crate::par::Exec;
use crate::presets::Preset;

/// Weakly decreasing positive parts.
pub type Partition = Vec<usize>;

/// Number of maps from the part indices of `lambda` to the blocks of `d` under
/// which every block `i` receives parts summing to `d[i]`.
pub fn pairing_count(lambda: &[usize], d: &[usize]) -> Result<BigInt> {
    let (a, b): (usize, usize) = (lambda.iter().sum(), d.iter().sum());
    if a != b {
        return Err(Error::Dimension(format!("partition of {a} paired with composition of {b}")));
    }
    fn go(parts: &[usize], room: &mut [usize]) -> BigInt {
        let Some((&p, rest)) = parts.split_first() else {
            return BigInt::one();
        };
        let mut total = BigInt::zero();
        for i in 0..room.len() {
            if room[i] >= p {
                room[i] -= p;
                total += go(rest, room);
                room[i] += p;
            }
        }
        total
    }
    Ok(go(lambda, &mut d.to_vec()))
}

/// `β_λ / β_n` for every partition `λ` of `n`, in [`partitions`] order.
pub fn eigenvalue_table(spec: &CppSpec) -> Vec<(Partition, Rational)> {
    let beta = spec.beta();
    partitions(spec.degree())
        .into_iter()
        .map(|lambda| {
            let beta_lambda: Rational = spec
                .terms()
                .iter()
                .map(|t| {
                    let count = pairing_count(&lambda, &t.composition).expect("sizes agree");
                    &t.weight * from_bigint(count)
                })
                .sum();
            (lambda, beta_lambda / &beta)
        })
        .collect()
}

/// Distinct values of [`eigenvalue_table`].
pub fn eigenvalues(spec: &CppSpec) -> BTreeSet<Rational> {
    eigenvalue_table(spec).into_iter().map(|(_, v)| v).collect()
}

/// Degree dimensions and the exponents `b_i` with `Σ dims_n t^n = ∏ (1 − t^i)^{−b_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertProfile {
    pub dims: Vec<BigInt>,
    /// `b[i]` for `i ≥ 1`; `b[0]` is always zero.
    pub b: Vec<BigInt>,
}

/// Multiplies a truncated series by `(1 − t^i)^{−b}`.
fn times_inverse_power(series: &[BigInt], i: usize, b: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); series.len()];
    for (k, slot) in out.iter_mut().enumerate() {
        for m in 0..=k / i {
            let s = &series[k - m * i];
            if !s.is_zero() {
                *slot += multichoose(b, m) * s;
            }
        }
    }
    out
}

pub fn hilbert_invert(dims: &[BigInt]) -> Result<HilbertProfile> {
    if dims.first() != Some(&BigInt::one()) {
        return Err(Error::Parameter("dimension sequence must start with 1".into()));
    }
    let mut series = vec![BigInt::zero(); dims.len()];
    series[0] = BigInt::one();
    let mut b = vec![BigInt::zero(); dims.len()];
    for i in 1..dims.len() {
        b[i] = &dims[i] - &series[i];
        series = times_inverse_power(&series, i, &b[i]);
    }
    Ok(HilbertProfile { dims: dims.to_vec(), b })
}

impl HilbertProfile {
    /// Coefficients of `∏ (1 − t^i)^{−b_i}` up to the profile's length.
    pub fn reconstruct(&self) -> Vec<BigInt> {
        let mut series = vec![BigInt::zero(); self.dims.len()];
        series[0] = BigInt::one();
        for i in 1..self.b.len() {
            series = times_inverse_power(&series, i, &self.b[i]);
        }
        series
    }
}

/// Dimensions of an algebra's basis in degrees `0..=n_max`.
pub fn degree_profile<A: HopfAlgebra>(alg: &A, n_max: usize) -> Result<HilbertProfile> {
    let dims: Vec<BigInt> = (0..=n_max).map(|k| BigInt::from(alg.basis(k).len())).collect();
    hilbert_invert(&dims)
}

/// `∏_i multichoose(b_i, m_i)` where `m_i` counts the parts of `λ` equal to `i`.
pub fn multiplicity(lambda: &[usize], profile: &HilbertProfile) -> BigInt {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in lambda {
        *counts.entry(p).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(i, m)| match profile.b.get(i) {
            Some(b) => multichoose(b, m),
            None => BigInt::zero(),
        })
        .product()
}

/// Multigraded refinement of [`HilbertProfile`] for one content sector:
/// exponents `b_ν` for every content `ν ≤ μ`, defined by
/// `Σ_ν dim_ν y^ν = ∏_ν (1 − y^ν)^{−b_ν}` below `μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorProfile {
    pub content: Vec<usize>,
    pub b: BTreeMap<Vec<usize>, BigInt>,
}

fn boxes_below(mu: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &m in mu {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=m).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn add_scaled_vec(a: &[usize], b: &[usize], m: usize) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + m * y).collect()
}

fn fits(a: &[usize], mu: &[usize]) -> bool {
    a.iter().zip(mu).all(|(x, y)| x <= y)
}

pub fn sector_profile<A: HopfAlgebra>(alg: &A, content: &[usize]) -> SectorProfile {
    let mut boxes = boxes_below(content);
    boxes.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    let zero = vec![0; content.len()];
    let mut series: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    series.insert(zero.clone(), BigInt::one());
    let mut b = BTreeMap::new();
    let max_degree = content.iter().sum::<usize>();
    for d in 1..=max_degree {
        let level: Vec<&Vec<usize>> = boxes.iter().filter(|v| v.iter().sum::<usize>() == d).collect();
        let mut found = Vec::new();
        for nu in level {
            let dim = BigInt::from(alg.sector_basis(nu).len());
            let bn = dim - series.get(nu).cloned().unwrap_or_default();
            found.push((nu.clone(), bn));
        }
        for (nu, bn) in found {
            if !bn.is_zero() {
                let mut next = BTreeMap::new();
                for (kappa, c) in &series {
                    let mut m = 0;
                    loop {
                        let target = add_scaled_vec(kappa, &nu, m);
                        if !fits(&target, content) {
                            break;
                        }
                        let add = multichoose(&bn, m) * c;
                        *next.entry(target).or_insert_with(BigInt::zero) += add;
                        m += 1;
                    }
                }
                series = next;
            }
            b.insert(nu, bn);
        }
    }
    SectorProfile { content: content.to_vec(), b }
}

impl SectorProfile {
    /// Eigenvalue multiplicity of each partition type: the number of
    /// multisets of primitive basis elements with total content `μ` whose
    /// degrees form `λ`.
    pub fn multiplicities(&self) -> BTreeMap<Partition, BigInt> {
        let mut states: BTreeMap<(Vec<usize>, Partition), BigInt> = BTreeMap::new();
        states.insert((vec![0; self.content.len()], Vec::new()), BigInt::one());
        for (nu, bn) in &self.b {
            if bn.is_zero() {
                continue;
            }
            let deg: usize = nu.iter().sum();
            let mut next = states.clone();
            for ((kappa, lambda), c) in &states {
                let mut m = 1;
                loop {
                    let target = add_scaled_vec(kappa, nu, m);
                    if !fits(&target, &self.content) {
                        break;
                    }
                    let mut parts = lambda.clone();
                    parts.extend(std::iter::repeat_n(deg, m));
                    parts.sort_unstable_by(|x, y| y.cmp(x));
                    *next.entry((target, parts)).or_insert_with(BigInt::zero) += multichoose(bn, m) * c;
                    m += 1;
                }
            }
            states = next;
        }
        states
            .into_iter()
            .filter(|((kappa, _), c)| *kappa == self.content && !c.is_zero())
            .map(|((_, lambda), c)| (lambda, c))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub partition: Partition,
    pub eigenvalue: Rational,
    pub multiplicity: BigInt,
}

/// Formula spectrum: one entry per partition of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    fn assemble(spec: &CppSpec, mult: impl Fn(&Partition) -> BigInt) -> Spectrum {
        let entries = eigenvalue_table(spec)
            .into_iter()
            .map(|(partition, eigenvalue)| {
                let multiplicity = mult(&partition);
                SpectrumEntry { partition, eigenvalue, multiplicity }
            })
            .collect();
        Spectrum { entries }
    }

    /// Spectrum on the whole degree-`n` basis.
    pub fn for_degree(spec: &CppSpec, profile: &HilbertProfile) -> Spectrum {
        Spectrum::assemble(spec, |lambda| multiplicity(lambda, profile))
    }

    /// Spectrum on the content sector described by `profile`.
    pub fn for_sector(spec: &CppSpec, profile: &SectorProfile) -> Spectrum {
        let table = profile.multiplicities();
        Spectrum::assemble(spec, |lambda| table.get(lambda).cloned().unwrap_or_default())
    }

    /// Distinct eigenvalues with positive multiplicity, summed over partitions.
    pub fn eigenvalue_multiplicities(&self) -> BTreeMap<Rational, BigInt> {
        let mut out: BTreeMap<Rational, BigInt> = BTreeMap::new();
        for e in &self.entries {
            if !e.multiplicity.is_zero() {
                *out.entry(e.eigenvalue.clone()).or_insert_with(BigInt::zero) += &e.multiplicity;
            }
        }
        out
    }

    pub fn total_multiplicity(&self) -> BigInt {
        self.entries.iter().map(|e| &e.multiplicity).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "partition": e.partition,
                        "eigenvalue": format_rational(&e.eigenvalue),
                        "multiplicity": e.multiplicity.to_string(),
                    })
                })
                .collect(),
        )
    }
}

pub fn spectrum_for_sector<A: HopfAlgebra>(alg: &A, spec: &CppSpec, content: &[usize]) -> Result<Spectrum> {
    let n: usize = content.iter().sum();
    if n != spec.degree() {
        return Err(Error::Degree { expected: spec.degree(), found: n });
    }
    Ok(Spectrum::for_sector(spec, &sector_profile(alg, content)))
}

pub fn spectrum_for_degree<A: HopfAlgebra>(alg: &A, spec: &CppSpec) -> Result<Spectrum> {
    Ok(Spectrum::for_degree(spec, &degree_profile(alg, spec.degree())?))
}

/// Claimed against observed dimension of one eigenspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenspaceCheck {
    pub eigenvalue: Rational,
    pub claimed: BigInt,
    pub observed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub eigenspaces: Vec<EigenspaceCheck>,
    pub states: usize,
    pub claimed_total: BigInt,
    /// `∏ (K − λI) = 0` over the claimed eigenvalues.
    pub annihilated: bool,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.claimed_total == BigInt::from(self.states)
            && self.annihilated
            && self.eigenspaces.iter().all(|e| e.claimed == BigInt::from(e.observed))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "states": self.states,
            "claimed_total": self.claimed_total.to_string(),
            "annihilated": self.annihilated,
            "eigenspaces": self.eigenspaces.iter().map(|e| json!({
                "eigenvalue": format_rational(&e.eigenvalue),
                "claimed": e.claimed.to_string(),
                "observed": e.observed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compares a formula spectrum with the kernel: eigenspace dimensions by
/// rank, diagonalisability by the annihilating product.
pub fn verify_spectrum(kernel: &RatMatrix, spectrum: &Spectrum, exec: Exec) -> Result<SpectrumReport> {
    if !kernel.is_square() {
        return Err(Error::Dimension("transition matrix must be square".into()));
    }
    let states = kernel.rows();
    let claims = spectrum.eigenvalue_multiplicities();
    let values: Vec<Rational> = claims.keys().cloned().collect();
    let eigenspaces = claims
        .into_iter()
        .map(|(eigenvalue, claimed)| {
            let shifted = kernel.minus_scalar(&eigenvalue)?;
            let observed = states - rank_with(&shifted, exec);
            Ok(EigenspaceCheck { eigenvalue, claimed, observed })
        })
        .collect::<Result<Vec<_>>>()?;
    let annihilated = annihilation_check_with(kernel, &values, exec)?;
    Ok(SpectrumReport { eigenspaces, states, claimed_total: spectrum.total_multiplicity(), annihilated })
}

/// `Δ(x) − 1⊗x − x⊗1`, keeping only terms with both legs of positive degree.
pub fn reduced_coproduct<A: HopfAlgebra>(alg: &A, x: &LinComb<A::Key>) -> LinComb<Vec<A::Key>> {
    let mut out = LinComb::zero();
    for (k, c) in x {
        for (legs, d) in &alg.coproduct_basis(k) {
            if legs.iter().all(|l| alg.degree(l) > 0) {
                out.add_term(legs.clone(), c * d);
            }
        }
    }
    out
}

/// Basis of the primitive elements with a fixed content, as the kernel of the
/// reduced coproduct on that sector.
pub fn primitive_basis_sector<A: HopfAlgebra>(alg: &A, content: &[usize]) -> Vec<LinComb<A::Key>> {
    let basis = alg.sector_basis(content);
    if content.iter().sum::<usize>() == 1 {
        return basis.into_iter().map(LinComb::basis).collect();
    }
    let columns: Vec<LinComb<Vec<A::Key>>> = basis
        .iter()
        .map(|x| reduced_coproduct(alg, &LinComb::basis(x.clone())))
        .collect();
    let rows: Vec<Vec<A::Key>> = columns
        .iter()
        .flat_map(|c| c.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if rows.is_empty() {
        return basis.into_iter().map(LinComb::basis).collect();
    }
    let m = RatMatrix::from_fn(rows.len(), basis.len(), |r, c| columns[c].coeff(&rows[r]));
    nullspace(&m)
        .into_iter()
        .map(|v| {
            basis
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k.clone(), c))
                .collect()
        })
        .collect()
}

/// Basis of the degree-`n` primitive subspace: the union over content sectors.
pub fn primitive_basis<A: HopfAlgebra>(alg: &A, n: usize) -> Vec<LinComb<A::Key>> {
    alg.contents(n)
        .iter()
        .flat_map(|c| primitive_basis_sector(alg, c))
        .collect()
}

/// An eigenvector of a descent operator with the data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenvector<K: Ord> {
    pub vector: LinComb<K>,
    pub eigenvalue: Rational,
    /// Number of degree-1 primitives in the construction.
    pub j: usize,
    pub singles: Vec<K>,
    pub primitives: Vec<LinComb<K>>,
}

impl<K: Ord + Clone> Eigenvector<K> {
    pub fn to_json(&self, encode: impl Fn(&K) -> String) -> Value {
        let terms: serde_json::Map<String, Value> = self
            .vector
            .iter()
            .map(|(k, c)| (encode(k), Value::String(format_rational(c))))
            .collect();
        let prim = |p: &LinComb<K>| -> Value {
            Value::Object(p.iter().map(|(k, c)| (encode(k), Value::String(format_rational(c)))).collect())
        };
        json!({
            "eigenvalue": format_rational(&self.eigenvalue),
            "j": self.j,
            "singles": self.singles.iter().map(&encode).collect::<Vec<_>>(),
            "primitives": self.primitives.iter().map(prim).collect::<Vec<_>>(),
            "terms": terms,
        })
    }
}

/// `(1/n)(q Proj_1*ι + (1−q) ι*Proj_1)` as a descent operator: top-or-bottom-to-random.
pub fn top_or_bottom_operator(n: usize, q: &Rational) -> Result<CppSpec> {
    Preset::TopOrBottom { q: q.clone() }.expand(n)
}

fn sum_over_orders<A: HopfAlgebra>(alg: &A, items: &[LinComb<A::Key>]) -> LinComb<A::Key> {
    let mut total = LinComb::zero();
    for perm in index_permutations(items.len()) {
        let mut acc = LinComb::basis(alg.unit());
        for &i in &perm {
            acc = product(alg, &acc, &items[i]);
        }
        total.add_scaled(&acc, &Rational::one());
    }
    total
}

/// Multisets (as sorted index lists) of `items` whose contents add up to `target`.
fn content_multisets(contents: &[Vec<usize>], target: &[usize], from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if target.iter().all(|&t| t == 0) {
        out.push(acc.clone());
        return;
    }
    for i in from..contents.len() {
        if fits(&contents[i], target) {
            let rest: Vec<usize> = target.iter().zip(&contents[i]).map(|(t, c)| t - c).collect();
            acc.push(i);
            content_multisets(contents, &rest, i, acc, out);
            acc.pop();
        }
    }
}

/// The set `E_j` in the content sector `content`: for each multiset of `j`
/// degree-1 basis elements `c` and each multiset of higher-degree primitives
/// `p` filling the remaining content,
/// `Σ_i Σ_σ C(j,i) q^i (1−q)^{j−i} c_σ(1)…c_σ(i) (Σ_τ p_τ(1)…p_τ(k)) c_σ(i+1)…c_σ(j)`.
///
/// Every vector is checked against top-or-bottom-to-random with parameter `q`
/// before it is returned. `j = n − 1` always gives the empty set.
pub fn build_e_j<A: HopfAlgebra>(alg: &A, content: &[usize], j: usize, q: &Rational) -> Result<Vec<Eigenvector<A::Key>>> {
    let n: usize = content.iter().sum();
    if n < 2 {
        return Err(Error::Parameter("eigenvector sets need degree at least 2".into()));
    }
    if j > n {
        return Err(Error::Parameter(format!("j = {j} exceeds the degree {n}")));
    }
    let operator = top_or_bottom_operator(n, q)?;
    let eigenvalue = Rational::new(j.into(), n.into());

    let singles: Vec<A::Key> = alg.basis(1).into_iter().filter(|c| fits(&alg.content(c), content)).collect();
    let single_contents: Vec<Vec<usize>> = singles.iter().map(|c| alg.content(c)).collect();
    let mut higher: Vec<(Vec<usize>, LinComb<A::Key>)> = Vec::new();
    let mut boxes = boxes_below(content);
    boxes.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    for nu in boxes.iter().filter(|v| v.iter().sum::<usize>() >= 2) {
        for p in primitive_basis_sector(alg, nu) {
            higher.push((nu.clone(), p));
        }
    }
    let higher_contents: Vec<Vec<usize>> = higher.iter().map(|(c, _)| c.clone()).collect();

    let weight = |i: usize| -> Rational {
        from_bigint(binomial(j, i)) * rpow(q, i) * rpow(&(Rational::one() - q), j - i)
    };

    let mut single_choices = Vec::new();
    let mut tmp = Vec::new();
    // Multisets of degree-1 elements of size exactly j that fit inside the content.
    fn pick(contents: &[Vec<usize>], room: &[usize], left: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..contents.len() {
            if fits(&contents[i], room) {
                let rest: Vec<usize> = room.iter().zip(&contents[i]).map(|(r, c)| r - c).collect();
                acc.push(i);
                pick(contents, &rest, left - 1, i, acc, out);
                acc.pop();
            }
        }
    }
    pick(&single_contents, content, j, 0, &mut tmp, &mut single_choices);

    let mut out = Vec::new();
    for cs in single_choices {
        let mut rest = content.to_vec();
        for &i in &cs {
            for (r, c) in rest.iter_mut().zip(&single_contents[i]) {
                *r -= c;
            }
        }
        let mut prim_choices = Vec::new();
        content_multisets(&higher_contents, &rest, 0, &mut Vec::new(), &mut prim_choices);
        let c_vecs: Vec<LinComb<A::Key>> = cs.iter().map(|&i| LinComb::basis(singles[i].clone())).collect();
        for ps in prim_choices {
            let p_vecs: Vec<LinComb<A::Key>> = ps.iter().map(|&i| higher[i].1.clone()).collect();
            let middle = sum_over_orders(alg, &p_vecs);
            let mut v = LinComb::zero();
            for perm in index_permutations(j) {
                for i in 0..=j {
                    let w = weight(i);
                    if w.is_zero() {
                        continue;
                    }
                    let mut acc = LinComb::basis(alg.unit());
                    for &s in &perm[..i] {
                        acc = product(alg, &acc, &c_vecs[s]);
                    }
                    acc = product(alg, &acc, &middle);
                    for &s in &perm[i..] {
                        acc = product(alg, &acc, &c_vecs[s]);
                    }
                    v.add_scaled(&acc, &w);
                }
            }
            let image = apply_cpp(alg, &v, &operator)?;
            let expected = v.scaled(&(&eigenvalue * operator.beta()));
            if image != expected || v.is_zero() {
                return Err(Error::Verification(format!(
                    "E_{j} vector from singles {:?} and primitives {:?} is not an eigenvector",
                    cs.iter().map(|&i| alg.encode(&singles[i])).collect::<Vec<_>>(),
                    ps
                )));
            }
            out.push(Eigenvector {
                vector: v,
                eigenvalue: eigenvalue.clone(),
                j,
                singles: cs.iter().map(|&i| singles[i].clone()).collect(),
                primitives: p_vecs,
            });
        }
    }
    Ok(out)
}

/// Every `E_j` with `j ∈ {0, …, n−2} ∪ {n}`.
pub fn eigenbasis<A: HopfAlgebra>(alg: &A, content: &[usize], q: &Rational) -> Result<Vec<Eigenvector<A::Key>>> {
    let n: usize = content.iter().sum();
    let mut out = Vec::new();
    for j in (0..=n).filter(|&j| j + 1 != n) {
        out.extend(build_e_j(alg, content, j, q)?);
    }
    Ok(out)
}

/// `(1/β) op(v) = λ v` for some `λ`, or `None` when `v` is not an eigenvector.
pub fn operator_eigenvalue<A: HopfAlgebra>(alg: &A, op: &CppSpec, v: &LinComb<A::Key>) -> Result<Option<Rational>> {
    let Some((k, c)) = v.iter().next() else {
        return Ok(None);
    };
    let image = apply_cpp(alg, v, op)?.scaled(&(Rational::one() / op.beta()));
    let lambda = image.coeff(k) / c;
    Ok((image == v.scaled(&lambda)).then_some(lambda))
}

/// Expected against observed eigenvalue of one vector under one operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueObservation {
    pub j: usize,
    pub expected: Rational,
    pub observed: Option<Rational>,
}

impl EigenvalueObservation {
    pub fn holds(&self) -> bool {
        self.observed.as_ref() == Some(&self.expected)
    }
}

/// `(1/β) Proj_1^{*m} * ι` on vectors built with `q = 1`, expected eigenvalue `C(j,m)/C(n,m)`.
pub fn polynomial_eigenvalue_check<A: HopfAlgebra>(
    alg: &A,
    vs: &[Eigenvector<A::Key>],
    n: usize,
    m: usize,
) -> Result<Vec<EigenvalueObservation>> {
    let op = Preset::TopMUnordered { m }.expand(n)?;
    vs.iter()
        .map(|v| {
            let expected = from_bigint(binomial(v.j, m)) / from_bigint(binomial(n, m));
            Ok(EigenvalueObservation { j: v.j, expected, observed: operator_eigenvalue(alg, &op, &v.vector)? })
        })
        .collect()
}

/// Eigenvalues of the trinomial operator on vectors built with `q = q1/(q1+q3)`,
/// compared with `expected(j, n)`.
pub fn trinomial_eigenvalue_check<A: HopfAlgebra>(
    alg: &A,
    vs: &[Eigenvector<A::Key>],
    n: usize,
    params: (&Rational, &Rational, &Rational),
    expected: impl Fn(usize, usize) -> Rational,
) -> Result<Vec<EigenvalueObservation>> {
    let (q1, q2, q3) = params;
    let op = Preset::Trinomial { q1: q1.clone(), q2: q2.clone(), q3: q3.clone() }.expand(n)?;
    vs.iter()
        .map(|v| {
            Ok(EigenvalueObservation {
                j: v.j,
                expected: expected(v.j, n),
                observed: operator_eigenvalue(alg, &op, &v.vector)?,
            })
        })
        .collect()
}

/// Rank of a family of vectors over their joint support.
pub fn span_dimension<K: Ord + Clone>(vectors: &[LinComb<K>]) -> usize {
    let support: Vec<K> = vectors
        .iter()
        .flat_map(|v| v.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if support.is_empty() {
        return 0;
    }
    let m = RatMatrix::from_fn(vectors.len(), support.len(), |r, c| vectors[r].coeff(&support[c]));
    rank_with(&m, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::forest::ForestAlgebra;
    use crate::shuffle::{Alphabet, FreeAssocAlgebra};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pairings() {
        assert_eq!(pairing_count(&[2, 1, 1], &[1, 3]).unwrap(), BigInt::from(2));
        assert_eq!(pairing_count(&[2, 2], &[4]).unwrap(), BigInt::one());
        assert_eq!(pairing_count(&[1, 1, 1], &[1, 2]).unwrap(), BigInt::from(3));
        assert!(pairing_count(&[2], &[1]).is_err());
    }

    #[test]
    fn top_to_random_values() {
        let spec = Preset::TopToRandom.expand(5).unwrap();
        let vals: Vec<Rational> = eigenvalues(&spec).into_iter().collect();
        assert_eq!(vals, vec![int(0), rat(1, 5), rat(2, 5), rat(3, 5), int(1)]);
        let tob = Preset::TopOrBottom { q: rat(1, 7) }.expand(5).unwrap();
        assert_eq!(eigenvalue_table(&tob), eigenvalue_table(&spec));
    }

    #[test]
    fn hilbert_inversion() {
        let p = hilbert_invert(&ints(&[1, 2, 4, 8, 16])).unwrap();
        assert_eq!(p.b, ints(&[0, 2, 1, 2, 3]));
        assert_eq!(p.reconstruct(), p.dims);
        let one = hilbert_invert(&ints(&[1, 1, 1, 1])).unwrap();
        assert_eq!(one.b, ints(&[0, 1, 0, 0]));
        let forests = degree_profile(&ForestAlgebra, 5).unwrap();
        assert_eq!(forests.b, ints(&[0, 1, 1, 2, 4, 9]));
        assert!(hilbert_invert(&ints(&[2, 1])).is_err());
    }

    #[test]
    fn sector_multiplicities_count_cycle_types() {
        let alg = FreeAssocAlgebra::new(Alphabet::distinct(3));
        let profile = sector_profile(&alg, &[1, 1, 1]);
        let m = profile.multiplicities();
        assert_eq!(m[&vec![1, 1, 1]], BigInt::from(1));
        assert_eq!(m[&vec![2, 1]], BigInt::from(3));
        assert_eq!(m[&vec![3]], BigInt::from(2));
    }

    #[test]
    fn primitives_of_free_associative() {
        let alg = FreeAssocAlgebra::new(Alphabet::from_chars("ab").unwrap());
        let p = primitive_basis(&alg, 2);
        assert_eq!(p.len(), 1);
        let ab = alg.decode("ab").unwrap();
        let ba = alg.decode("ba").unwrap();
        assert_eq!(p[0].coeff(&ab), -p[0].coeff(&ba));
        for v in primitive_basis(&alg, 3) {
            assert!(reduced_coproduct(&alg, &v).is_zero());
        }
    }

    #[test]
    fn small_eigenvectors() {
        let alg = FreeAssocAlgebra::new(Alphabet::from_chars("ab").unwrap());
        let e0 = build_e_j(&alg, &[1, 1], 0, &rat(1, 3)).unwrap();
        assert_eq!(e0.len(), 1);
        assert_eq!(e0[0].eigenvalue, int(0));
        let e2 = build_e_j(&alg, &[1, 1], 2, &int(1)).unwrap();
        assert_eq!(e2.len(), 1);
        let v = &e2[0].vector;
        assert_eq!(v.coeff(&alg.decode("ab").unwrap()), v.coeff(&alg.decode("ba").unwrap()));
        assert!(build_e_j(&alg, &[1, 1], 1, &int(1)).unwrap().is_empty());
    }
}
