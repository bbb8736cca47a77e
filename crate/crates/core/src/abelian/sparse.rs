//! Sparse coordinate vectors over a presented group: sorted `(generator, coefficient)`
//! pairs with coefficients reduced modulo the generator order and zeros dropped.

use super::group::AbGroup;
use super::numtheory::reduce;

pub type SparseVec = Vec<(usize, i64)>;

/// Sorts, merges duplicates, reduces modulo generator orders and drops zeros.
pub fn normalize(mut v: SparseVec, group: &AbGroup) -> SparseVec {
    v.sort_unstable_by_key(|&(i, _)| i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = reduce(*acc + c, group.order_of(i)),
            _ => out.push((i, reduce(c, group.order_of(i)))),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

/// `a + k * b`, both normalized.
pub fn add_scaled(a: &SparseVec, b: &SparseVec, k: i64, group: &AbGroup) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let g = b[j].0;
            let c = reduce(k * b[j].1, group.order_of(g));
            if c != 0 {
                out.push((g, c));
            }
            j += 1;
        } else {
            let g = a[i].0;
            let c = reduce(a[i].1 + k * b[j].1, group.order_of(g));
            if c != 0 {
                out.push((g, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<i64> {
    let mut d = vec![0; len];
    for &(i, c) in v {
        d[i] = c;
    }
    d
}

pub fn from_dense(d: &[i64], group: &AbGroup) -> SparseVec {
    normalize(d.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect(), group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_reduce() {
        let g = AbGroup::new(vec![4, 3, 0]);
        let v = normalize(vec![(1, 2), (0, 3), (1, 1), (2, -5), (0, 1)], &g);
        assert_eq!(v, vec![(2, -5)]);
        let a = vec![(0, 1), (2, 2)];
        let b = vec![(0, 1), (1, 1)];
        assert_eq!(add_scaled(&a, &b, 3, &g), vec![(2, 2)]);
    }
}
