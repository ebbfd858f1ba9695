//! Small enumeration helpers: compositions, partitions, permutations, multisets.

/// All weak compositions of `n` into exactly `parts` non-negative parts, lexicographic.
pub fn weak_compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            go(n - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Integer partitions of `n` as weakly decreasing part lists, in reverse
/// lexicographic order (`(n)` first, `(1^n)` last).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Advances `v` to the next lexicographic permutation; false when `v` was the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Distinct rearrangements of a multiset, in lexicographic order.
pub fn distinct_permutations<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// All `n!` orderings of `0..n` (repeats are not merged).
pub fn index_permutations(n: usize) -> Vec<Vec<usize>> {
    distinct_permutations(&(0..n).collect::<Vec<_>>())
}

/// Multisets of size `k` from `0..m`, as non-decreasing index lists.
pub fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, k: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..m {
            prefix.push(i);
            go(m, k, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(weak_compositions(3, 2).len(), 4);
        assert_eq!(weak_compositions(4, 3).len(), 15);
        assert_eq!(weak_compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(weak_compositions(2, 0).is_empty());
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(4)[0], vec![4]);
        assert_eq!(partitions(4)[4], vec![1, 1, 1, 1]);
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(index_permutations(4).len(), 24);
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(0, 0), vec![Vec::<usize>::new()]);
    }
}
