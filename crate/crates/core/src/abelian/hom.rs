use num_bigint::BigInt;

use super::group::{AbGroup, FinAb};
use super::lattice::{big_to_sparse, preimage_of_relations, relation_columns, unit_columns, Subquotient};
use super::matrix::IntMatrix;
use super::numtheory::reduce;
use super::sparse::{add_scaled, normalize, SparseVec};
use crate::error::{Error, Result};

/// Homomorphism between presented groups, stored as the images of the source
/// generators (sparse columns, normalized in the target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    source: AbGroup,
    target: AbGroup,
    columns: Vec<SparseVec>,
}

impl AbHom {
    pub fn new(source: AbGroup, target: AbGroup, columns: Vec<SparseVec>) -> Result<Self> {
        if columns.len() != source.rank() {
            return Err(Error::HomShape { expected: (target.rank(), source.rank()), found: (target.rank(), columns.len()) });
        }
        let mut normalized = Vec::with_capacity(columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            if let Some(&(i, _)) = col.iter().find(|&&(i, _)| i >= target.rank()) {
                return Err(Error::HomShape { expected: (target.rank(), source.rank()), found: (i + 1, source.rank()) });
            }
            let col = normalize(col, &target);
            let order = source.order_of(j);
            if order != 0 {
                for &(i, c) in &col {
                    let t = target.order_of(i);
                    let ok = t != 0 && (c as i128 * order as i128) % t as i128 == 0;
                    if !ok {
                        return Err(Error::NotWellDefined { source_gen: j, order, target_row: i });
                    }
                }
            }
            normalized.push(col);
        }
        Ok(AbHom { source, target, columns: normalized })
    }

    /// Builds from a dense `target.rank() x source.rank()` matrix.
    pub fn from_dense(source: AbGroup, target: AbGroup, rows: &[Vec<i64>]) -> Result<Self> {
        let shape = (rows.len(), rows.first().map_or(source.rank(), Vec::len));
        if shape.0 != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::HomShape { expected: (target.rank(), source.rank()), found: shape });
        }
        let columns =
            (0..source.rank()).map(|j| rows.iter().enumerate().map(|(i, r)| (i, r[j])).collect()).collect();
        Self::new(source, target, columns)
    }

    /// Skips validation; for internally generated maps that are correct by
    /// construction. Columns must already be normalized.
    pub(crate) fn new_unchecked(source: AbGroup, target: AbGroup, columns: Vec<SparseVec>) -> Self {
        debug_assert_eq!(columns.len(), source.rank());
        AbHom { source, target, columns }
    }

    pub fn zero(source: AbGroup, target: AbGroup) -> Self {
        let columns = vec![Vec::new(); source.rank()];
        AbHom { source, target, columns }
    }

    pub fn identity(group: AbGroup) -> Self {
        let columns =
            (0..group.rank()).map(|i| normalize(vec![(i, 1)], &group)).collect();
        AbHom { source: group.clone(), target: group, columns }
    }

    pub fn source(&self) -> &AbGroup {
        &self.source
    }

    pub fn target(&self) -> &AbGroup {
        &self.target
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut rows = vec![vec![0; self.source.rank()]; self.target.rank()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                rows[i][j] = c;
            }
        }
        rows
    }

    pub fn to_matrix(&self) -> IntMatrix<BigInt> {
        let mut m = IntMatrix::zeros(self.target.rank(), self.source.rank());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                m[(i, j)] = BigInt::from(c);
            }
        }
        m
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for &(j, c) in v {
            out = add_scaled(&out, &self.columns[j], c, &self.target);
        }
        out
    }

    pub fn apply_dense(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.target.rank()];
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(i, a) in &self.columns[j] {
                out[i] = reduce(out[i] + a * c, self.target.order_of(i));
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        if first.target != self.source {
            return Err(Error::IncompatibleMaps(format!(
                "{} generators into a map expecting {}",
                first.target.rank(),
                self.source.rank()
            )));
        }
        let columns = first.columns.iter().map(|c| self.apply(c)).collect();
        Ok(AbHom { source: first.source.clone(), target: self.target.clone(), columns })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::IncompatibleMaps("sum of maps with different shapes".into()));
        }
        let columns =
            self.columns.iter().zip(&other.columns).map(|(a, b)| add_scaled(a, b, 1, &self.target)).collect();
        Ok(AbHom { source: self.source.clone(), target: self.target.clone(), columns })
    }

    pub fn neg(&self) -> AbHom {
        let columns = self.columns.iter().map(|c| add_scaled(&Vec::new(), c, -1, &self.target)).collect();
        AbHom { source: self.source.clone(), target: self.target.clone(), columns }
    }

    pub fn kernel_lattice(&self) -> Subquotient {
        let k = preimage_of_relations(&self.to_matrix(), &self.target);
        let mut num = k;
        num.extend(relation_columns(&self.source));
        Subquotient::new(self.source.rank(), &num, &relation_columns(&self.source)).expect("relations lie in the kernel")
    }

    pub fn image_lattice(&self) -> Subquotient {
        let n = self.target.rank();
        let rel = relation_columns(&self.target);
        let mut num: Vec<Vec<BigInt>> =
            self.columns.iter().map(|c| super::lattice::sparse_to_big(c, n)).collect();
        num.extend(rel.iter().cloned());
        Subquotient::new(n, &num, &rel).expect("relations lie in the image lattice")
    }

    pub fn cokernel_lattice(&self) -> Subquotient {
        let n = self.target.rank();
        let mut den: Vec<Vec<BigInt>> =
            self.columns.iter().map(|c| super::lattice::sparse_to_big(c, n)).collect();
        den.extend(relation_columns(&self.target));
        Subquotient::new(n, &unit_columns(n), &den).expect("everything lies in the ambient lattice")
    }

    pub fn kernel(&self) -> FinAb {
        self.kernel_lattice().group().clone()
    }

    pub fn image(&self) -> FinAb {
        self.image_lattice().group().clone()
    }

    pub fn cokernel(&self) -> FinAb {
        self.cokernel_lattice().group().clone()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Generators of the kernel as sparse vectors of the source.
    pub fn kernel_generators(&self) -> Vec<SparseVec> {
        let k = self.kernel_lattice();
        (0..k.group().invariant_factors().len()).map(|i| big_to_sparse(k.lift(i), &self.source)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_definedness() {
        let z2 = AbGroup::cyclic(2);
        let z4 = AbGroup::cyclic(4);
        assert!(AbHom::from_dense(z2.clone(), z4.clone(), &[vec![2]]).is_ok());
        assert!(matches!(
            AbHom::from_dense(z2.clone(), z4.clone(), &[vec![1]]),
            Err(Error::NotWellDefined { source_gen: 0, order: 2, target_row: 0 })
        ));
        assert!(AbHom::from_dense(z4.clone(), z2.clone(), &[vec![1]]).is_ok());
        assert!(AbHom::from_dense(z2, AbGroup::free(1), &[vec![1]]).is_err());
        assert!(AbHom::from_dense(AbGroup::free(1), z4, &[vec![3]]).is_ok());
    }

    #[test]
    fn kernel_image_cokernel() {
        let z4 = AbGroup::cyclic(4);
        let twice = AbHom::from_dense(z4.clone(), z4.clone(), &[vec![2]]).unwrap();
        assert_eq!(twice.kernel(), FinAb::cyclic(2));
        assert_eq!(twice.image(), FinAb::cyclic(2));
        assert_eq!(twice.cokernel(), FinAb::cyclic(2));
        let z = AbGroup::free(1);
        let two = AbHom::from_dense(z.clone(), z.clone(), &[vec![2]]).unwrap();
        assert!(two.is_injective());
        assert!(!two.is_surjective());
        assert_eq!(two.cokernel(), FinAb::cyclic(2));
        assert!(AbHom::identity(z4).is_isomorphism());
    }

    #[test]
    fn composition() {
        let z4 = AbGroup::cyclic(4);
        let z2 = AbGroup::cyclic(2);
        let proj = AbHom::from_dense(z4.clone(), z2.clone(), &[vec![1]]).unwrap();
        let incl = AbHom::from_dense(z2.clone(), z4.clone(), &[vec![2]]).unwrap();
        assert!(proj.compose(&incl).unwrap().is_zero());
        assert_eq!(incl.compose(&proj).unwrap().to_dense(), vec![vec![2]]);
        assert!(proj.compose(&proj).is_err());
    }
}
