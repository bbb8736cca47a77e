//! Subquotients `L / M` of `Z^n` for lattices `M ⊆ L`, with explicit generator lifts
//! and a coordinate map. Everything that turns "kernel modulo image" into an
//! invariant-factor group goes through here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{AbGroup, FinAb};
use super::matrix::IntMatrix;
use super::smith::{smith_decompose, Smith};
use super::sparse::SparseVec;
use crate::error::{Error, Result};

pub type Lattice = Vec<Vec<BigInt>>;

#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    group: FinAb,
    lifts: Vec<Vec<BigInt>>,
    numerator: Smith<BigInt>,
    rank: usize,
    quotient_u: IntMatrix<BigInt>,
    kept: Vec<usize>,
    moduli: Vec<BigInt>,
}

impl Subquotient {
    /// `span(numerator) / span(denominator)`. The denominator must lie inside the
    /// numerator.
    pub fn new(ambient: usize, numerator: &[Vec<BigInt>], denominator: &[Vec<BigInt>]) -> Result<Self> {
        let g = IntMatrix::from_columns(ambient, numerator);
        let numerator_snf = smith_decompose(&g);
        let rank = numerator_snf.rank;
        let mut coords = Vec::with_capacity(denominator.len());
        for v in denominator {
            let y = solve(&numerator_snf, rank, v)
                .ok_or_else(|| Error::Internal("denominator is not contained in numerator".into()))?;
            coords.push(y);
        }
        let y = IntMatrix::from_columns(rank, &coords);
        let q = smith_decompose(&y);
        let diag = q.diagonal();
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..rank {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept.push(i);
                moduli.push(d);
            }
        }
        let basis: Vec<Vec<BigInt>> = (0..rank)
            .map(|t| {
                let scale = numerator_snf.d[(t, t)].clone();
                numerator_snf.u_inv.column(t).into_iter().map(|x| x * scale.clone()).collect()
            })
            .collect();
        let lifts = kept
            .iter()
            .map(|&i| {
                let col = q.u_inv.column(i);
                let mut v = vec![BigInt::zero(); ambient];
                for (t, c) in col.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (k, b) in basis[t].iter().enumerate() {
                        v[k] += b * c;
                    }
                }
                v
            })
            .collect();
        let factors = moduli.iter().map(|m| m.to_u64().expect("invariant factor exceeds u64")).collect();
        Ok(Subquotient {
            ambient,
            group: FinAb::from_invariant_factors(factors),
            lifts,
            numerator: numerator_snf,
            rank,
            quotient_u: q.u,
            kept,
            moduli,
        })
    }

    /// The presented group itself, in canonical coordinates.
    pub fn of_group(group: &AbGroup) -> Result<Self> {
        let n = group.rank();
        Self::new(n, &unit_columns(n), &relation_columns(group))
    }

    pub fn group(&self) -> &FinAb {
        &self.group
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Representative in the ambient lattice of the `k`-th canonical generator.
    pub fn lift(&self, k: usize) -> &[BigInt] {
        &self.lifts[k]
    }

    pub fn lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    /// Coordinates of `v` in the canonical generators, reduced modulo the invariant
    /// factors. `None` if `v` is not in the numerator.
    pub fn classify(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = solve(&self.numerator, self.rank, v)?;
        let z = self.quotient_u.mul_vec(&y);
        Some(
            self.kept
                .iter()
                .zip(&self.moduli)
                .map(|(&i, m)| if m.is_zero() { z[i].clone() } else { z[i].mod_floor(m) })
                .collect(),
        )
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve(&self.numerator, self.rank, v).is_some()
    }

    pub fn classify_sparse(&self, v: &SparseVec) -> Option<Vec<i64>> {
        let dense = sparse_to_big(v, self.ambient);
        self.classify(&dense).map(|c| c.into_iter().map(|x| x.to_i64().expect("coordinate overflow")).collect())
    }

    /// Lift of generator `k` as a sparse vector reduced in `group` (the ambient
    /// presentation).
    pub fn lift_sparse(&self, k: usize, group: &AbGroup) -> SparseVec {
        big_to_sparse(&self.lifts[k], group)
    }
}

/// Solves `basis * y = v` using the Smith form of the generator matrix.
fn solve(s: &Smith<BigInt>, rank: usize, v: &[BigInt]) -> Option<Vec<BigInt>> {
    if s.u.rows() == 0 {
        return Some(Vec::new());
    }
    let w = s.u.mul_vec(v);
    let mut y = Vec::with_capacity(rank);
    for (i, wi) in w.iter().enumerate() {
        if i < rank {
            let (q, r) = wi.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        } else if !wi.is_zero() {
            return None;
        }
    }
    Some(y)
}

pub fn unit_columns(n: usize) -> Lattice {
    (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect()
}

/// `order_i * e_i` for every finite generator.
pub fn relation_columns(group: &AbGroup) -> Lattice {
    let n = group.rank();
    group
        .orders()
        .iter()
        .enumerate()
        .filter(|(_, &o)| o != 0)
        .map(|(i, &o)| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(o);
            v
        })
        .collect()
}

/// Basis of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix<BigInt>) -> Lattice {
    let s = smith_decompose(m);
    (s.rank..m.cols()).map(|j| s.v.column(j)).collect()
}

/// Generators of `{x in Z^n : m x ∈ relations(target)}` where `m` is `target.rank() x n`.
pub fn preimage_of_relations(m: &IntMatrix<BigInt>, target: &AbGroup) -> Lattice {
    let n = m.cols();
    let rel = IntMatrix::from_columns(m.rows(), &relation_columns(target));
    let full = if rel.cols() == 0 { m.clone() } else { m.hcat(&rel) };
    integer_kernel(&full).into_iter().map(|mut v| {
        v.truncate(n);
        v
    })
    .filter(|v| v.iter().any(|x| !x.is_zero()))
    .collect()
}

pub fn sparse_to_big(v: &SparseVec, len: usize) -> Vec<BigInt> {
    let mut d = vec![BigInt::zero(); len];
    for &(i, c) in v {
        d[i] = BigInt::from(c);
    }
    d
}

pub fn big_to_sparse(v: &[BigInt], group: &AbGroup) -> SparseVec {
    v.iter()
        .enumerate()
        .filter_map(|(i, x)| {
            let o = group.order_of(i);
            let r = if o == 0 { x.clone() } else { x.mod_floor(&BigInt::from(o)) };
            if r.is_zero() {
                None
            } else {
                Some((i, r.to_i64().expect("coefficient overflow")))
            }
        })
        .collect()
}

pub fn abs_is_one(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quotient_of_z2_by_diagonal() {
        // Z^2 / <(2,2), (0,4)> = Z/2 + Z/4
        let sq = Subquotient::new(2, &unit_columns(2), &[big(&[2, 2]), big(&[0, 4])]).unwrap();
        assert_eq!(sq.group(), &FinAb::from_orders(&[2, 4]));
        for k in 0..2 {
            let c = sq.classify(sq.lift(k)).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(*x, BigInt::from(u8::from(j == k)));
            }
        }
    }

    #[test]
    fn free_part_and_membership() {
        // 2Z + Z / 2Z  inside Z^2 -> Z (from the second coordinate) and Z/1 from first? first is 2Z/2Z = 0
        let sq = Subquotient::new(2, &[big(&[2, 0]), big(&[0, 1])], &[big(&[2, 0])]).unwrap();
        assert_eq!(sq.group(), &FinAb::free(1));
        assert!(sq.classify(&big(&[1, 0])).is_none());
        assert_eq!(sq.classify(&big(&[4, 3])).unwrap().len(), 1);
    }

    #[test]
    fn kernel_of_times_two_mod_four() {
        let z4 = AbGroup::cyclic(4);
        let m = IntMatrix::from_i64_rows(&[vec![2]]).unwrap();
        let k = preimage_of_relations(&m, &z4);
        let sq = Subquotient::new(1, &k, &relation_columns(&z4)).unwrap();
        assert_eq!(sq.group(), &FinAb::cyclic(2));
    }
}
