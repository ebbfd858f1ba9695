//! Unlabelled rooted forests under disjoint union, with the root-cut coproduct
//! `Δ(T) = Σ T∖S ⊗ S` over connected subtrees `S` that are empty or contain the root.
//!
//! A forest is stored as its canonical parenthesised encoding: a tree is
//! `(` followed by the sorted encodings of its child subtrees and `)`, and a
//! forest is the sorted concatenation of its trees. `"(()())"` is a root with
//! two leaves, `"()()"` two isolated roots, `""` the empty forest.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binomial, from_bigint, rpow, Rational};
use crate::hopf::{tensor_product, HopfAlgebra, LinComb, TensorComb};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Forest(String);

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({:?})", self.0)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug)]
struct Tree {
    children: Vec<Tree>,
}

impl Tree {
    fn encode(&self) -> String {
        let mut kids: Vec<String> = self.children.iter().map(Tree::encode).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
}

fn parse_trees(text: &str) -> Result<Vec<Tree>> {
    let bad = |msg: &str| Error::Parse(format!("invalid forest {text:?}: {msg}"));
    let mut stack: Vec<Vec<Tree>> = vec![Vec::new()];
    for ch in text.chars() {
        match ch {
            '(' => stack.push(Vec::new()),
            ')' => {
                if stack.len() < 2 {
                    return Err(bad("unbalanced ')'"));
                }
                let children = stack.pop().expect("checked depth");
                stack.last_mut().expect("checked depth").push(Tree { children });
            }
            c if c.is_whitespace() => {}
            _ => return Err(bad("only '(' and ')' are allowed")),
        }
    }
    if stack.len() != 1 {
        return Err(bad("unbalanced '('"));
    }
    Ok(stack.pop().expect("root level"))
}

fn join_trees(mut encodings: Vec<String>) -> Forest {
    encodings.sort();
    Forest(encodings.concat())
}

impl Forest {
    pub fn empty() -> Self {
        Forest(String::new())
    }

    /// A single isolated vertex.
    pub fn point() -> Self {
        Forest("()".into())
    }

    /// Parses any parenthesised forest and returns its canonical form.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(join_trees(parse_trees(text)?.iter().map(Tree::encode).collect()))
    }

    pub fn encoding(&self) -> &str {
        &self.0
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        self.0.bytes().filter(|&b| b == b'(').count()
    }

    fn trees(&self) -> Vec<Tree> {
        parse_trees(&self.0).expect("canonical forests always parse")
    }

    /// Encodings of the connected components.
    pub fn components(&self) -> Vec<Forest> {
        self.trees().iter().map(|t| Forest(t.encode())).collect()
    }

    pub fn is_tree(&self) -> bool {
        self.trees().len() == 1
    }

    /// The tree obtained by adding a new root above every component.
    pub fn graft(&self) -> Forest {
        Forest(format!("({})", self.0))
    }
}

/// Disjoint union.
pub fn forest_product(f: &Forest, g: &Forest) -> LinComb<Forest> {
    let mut encodings: Vec<String> = f.components().into_iter().map(|t| t.0).collect();
    encodings.extend(g.components().into_iter().map(|t| t.0));
    LinComb::basis(join_trees(encodings))
}

/// Every connected subtree containing the root: the cut-off pieces and the kept subtree.
fn root_cuts(t: &Tree) -> Vec<(Vec<String>, String)> {
    let mut options: Vec<(Vec<String>, Vec<String>)> = vec![(Vec::new(), Vec::new())];
    for child in &t.children {
        let child_enc = child.encode();
        let child_cuts = root_cuts(child);
        let mut next = Vec::with_capacity(options.len() * (child_cuts.len() + 1));
        for (pruned, kept) in &options {
            let mut p = pruned.clone();
            p.push(child_enc.clone());
            next.push((p, kept.clone()));
            for (cp, ck) in &child_cuts {
                let mut p = pruned.clone();
                p.extend(cp.iter().cloned());
                let mut k = kept.clone();
                k.push(ck.clone());
                next.push((p, k));
            }
        }
        options = next;
    }
    options
        .into_iter()
        .map(|(pruned, mut kept)| {
            kept.sort();
            (pruned, format!("({})", kept.concat()))
        })
        .collect()
}

fn tree_coproduct(t: &Tree) -> TensorComb<Forest> {
    let whole = Forest(t.encode());
    let mut out = LinComb::basis(vec![whole, Forest::empty()]);
    for (pruned, kept) in root_cuts(t) {
        out.add_term(vec![join_trees(pruned), Forest(kept)], Rational::one());
    }
    out
}

/// `Σ T∖S ⊗ S`, extended multiplicatively over the components of a forest.
pub fn rootcut_coproduct(f: &Forest) -> TensorComb<Forest> {
    let mut acc = LinComb::basis(vec![Forest::empty(), Forest::empty()]);
    for t in f.trees() {
        acc = tensor_product(&ForestAlgebra, &acc, &tree_coproduct(&t));
    }
    acc
}

fn enumerate_all(n_max: usize) -> (Vec<Vec<Forest>>, Vec<Vec<Forest>>) {
    // trees[m]: rooted trees with m vertices; forests[m]: forests with m vertices.
    let mut trees: Vec<Vec<Forest>> = vec![Vec::new()];
    let mut forests: Vec<Vec<Forest>> = vec![vec![Forest::empty()]];
    for m in 1..=n_max {
        let ts: Vec<Forest> = forests[m - 1].iter().map(Forest::graft).collect();
        trees.push(ts);
        let mut fs: BTreeSet<Forest> = BTreeSet::new();
        for first in 1..=m {
            for t in &trees[first] {
                for rest in &forests[m - first] {
                    let mut enc = rest.components().into_iter().map(|c| c.0).collect::<Vec<_>>();
                    enc.push(t.0.clone());
                    fs.insert(join_trees(enc));
                }
            }
        }
        forests.push(fs.into_iter().collect());
    }
    (trees, forests)
}

/// All rooted forests with `n` vertices, sorted by encoding.
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    enumerate_all(n).1.pop().expect("degree n present")
}

/// All rooted trees with `n ≥ 1` vertices, sorted by encoding.
pub fn enumerate_trees(n: usize) -> Vec<Forest> {
    let mut t = enumerate_all(n).0.pop().expect("degree n present");
    t.sort();
    t
}

/// Per-vertex descendant and ancestor counts (each including the vertex
/// itself) and component sizes, listed in preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexStats {
    pub desc: Vec<usize>,
    pub anc: Vec<usize>,
    pub component_size: Vec<usize>,
}

pub fn vertex_stats(f: &Forest) -> VertexStats {
    fn walk(t: &Tree, depth: usize, desc: &mut Vec<usize>, anc: &mut Vec<usize>) -> usize {
        let slot = desc.len();
        desc.push(0);
        anc.push(depth);
        let size = 1 + t.children.iter().map(|c| walk(c, depth + 1, desc, anc)).sum::<usize>();
        desc[slot] = size;
        size
    }
    let mut stats = VertexStats {
        desc: Vec::new(),
        anc: Vec::new(),
        component_size: Vec::new(),
    };
    for t in f.trees() {
        let size = walk(&t, 1, &mut stats.desc, &mut stats.anc);
        stats.component_size.extend(std::iter::repeat_n(size, size));
    }
    stats
}

/// `Σ_u q1^{desc(u)} q3^{anc(u)} C(desc(u), j)`.
pub fn f_j_statistic(f: &Forest, j: usize, q1: &Rational, q3: &Rational) -> Rational {
    let s = vertex_stats(f);
    s.desc
        .iter()
        .zip(&s.anc)
        .filter(|(&d, _)| d >= j)
        .map(|(&d, &a)| rpow(q1, d) * rpow(q3, a) * from_bigint(binomial(d, j)))
        .fold(Rational::zero(), |x, y| x + y)
}

/// The Connes–Kreimer algebra of rooted forests. Commutative.
#[derive(Clone, Copy, Debug, Default)]
pub struct ForestAlgebra;

impl HopfAlgebra for ForestAlgebra {
    type Key = Forest;

    fn name(&self) -> &str {
        "forests"
    }

    fn unit(&self) -> Forest {
        Forest::empty()
    }

    fn degree(&self, key: &Forest) -> usize {
        key.degree()
    }

    fn basis(&self, n: usize) -> Vec<Forest> {
        enumerate_forests(n)
    }

    fn mul_basis(&self, a: &Forest, b: &Forest) -> LinComb<Forest> {
        forest_product(a, b)
    }

    fn coproduct_basis(&self, x: &Forest) -> TensorComb<Forest> {
        rootcut_coproduct(x)
    }

    fn encode(&self, key: &Forest) -> String {
        key.0.clone()
    }

    fn decode(&self, text: &str) -> Result<Forest> {
        Forest::parse(text)
    }
}

/// Number of forests of each size `0..=n_max`.
pub fn forest_counts(n_max: usize) -> Vec<usize> {
    enumerate_all(n_max).1.iter().map(Vec::len).collect()
}

/// Number of rooted trees of each size `1..=n_max` (index 0 is unused and 0).
pub fn tree_counts(n_max: usize) -> Vec<usize> {
    enumerate_all(n_max).0.iter().map(Vec::len).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn f(s: &str) -> Forest {
        Forest::parse(s).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(f("(())()"), f("()(())"));
        assert_eq!(f("(()(()))").encoding(), "((())())");
        assert_eq!(f("(()())").degree(), 3);
        assert!(Forest::parse("(()").is_err());
        assert!(Forest::parse("())(").is_err());
        assert!(Forest::parse("(x)").is_err());
    }

    #[test]
    fn products() {
        assert_eq!(forest_product(&Forest::point(), &Forest::point()), LinComb::basis(f("()()")));
        assert_eq!(forest_product(&f("(())"), &Forest::empty()), LinComb::basis(f("(())")));
    }

    #[test]
    fn coproducts() {
        let point = Forest::point();
        let d = rootcut_coproduct(&point);
        assert_eq!(d.len(), 2);
        let path = f("(())");
        let d = rootcut_coproduct(&path);
        let expected: TensorComb<Forest> = [
            (vec![Forest::empty(), path.clone()], int(1)),
            (vec![point.clone(), point.clone()], int(1)),
            (vec![path.clone(), Forest::empty()], int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(d, expected);
        let two = rootcut_coproduct(&f("()()"));
        assert_eq!(two.coeff(&vec![point.clone(), point.clone()]), int(2));
        assert_eq!(two.len(), 3);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(forest_counts(6), vec![1, 1, 2, 4, 9, 20, 48]);
        assert_eq!(tree_counts(6), vec![0, 1, 1, 2, 4, 9, 20]);
        assert_eq!(enumerate_forests(2), vec![f("(())"), f("()()")]);
    }

    #[test]
    fn vertex_statistics() {
        let s = vertex_stats(&Forest::point());
        assert_eq!((s.desc[0], s.anc[0], s.component_size[0]), (1, 1, 1));
        let s = vertex_stats(&f("((()))"));
        assert_eq!(s.desc, vec![3, 2, 1]);
        assert_eq!(s.anc, vec![1, 2, 3]);
        let s = vertex_stats(&f("(()())"));
        assert_eq!(s.desc, vec![3, 1, 1]);
        assert_eq!(s.anc, vec![1, 2, 2]);
        assert_eq!(s.component_size, vec![3, 3, 3]);
    }

    #[test]
    fn f_j_values() {
        let one = int(1);
        assert_eq!(f_j_statistic(&f("()()()"), 2, &one, &one), int(0));
        assert_eq!(f_j_statistic(&f("((()))"), 2, &one, &one), int(4));
        assert_eq!(f_j_statistic(&f("((()))"), 2, &int(0), &rat(1, 2)), int(0));
        // root: desc 3 anc 1; middle: desc 2 anc 2
        let half = rat(1, 2);
        assert_eq!(f_j_statistic(&f("((()))"), 2, &half, &half), rat(3, 16) + rat(1, 16));
    }
}
