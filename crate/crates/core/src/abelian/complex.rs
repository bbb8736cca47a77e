use num_bigint::BigInt;

use super::group::{AbGroup, FinAb};
use super::hom::AbHom;
use super::lattice::{preimage_of_relations, relation_columns, sparse_to_big, Subquotient};
use super::reduce::Primary;
use super::sparse::SparseVec;
use crate::error::{Error, Result};

/// `C_0 <- C_1 <- ... <- C_L`; `diffs[l - 1]` is `d_l : C_l -> C_{l-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    groups: Vec<AbGroup>,
    diffs: Vec<AbHom>,
}

impl ChainComplex {
    /// Checks that adjacent maps chain and that `d_l ∘ d_{l+1} = 0`.
    pub fn new(groups: Vec<AbGroup>, diffs: Vec<AbHom>) -> Result<Self> {
        let c = Self::new_unverified(groups, diffs)?;
        for l in 1..c.diffs.len() {
            if !c.diffs[l - 1].compose(&c.diffs[l])?.is_zero() {
                return Err(Error::NotAComplex { degree: l });
            }
        }
        Ok(c)
    }

    /// Checks shapes only.
    pub fn new_unverified(groups: Vec<AbGroup>, diffs: Vec<AbHom>) -> Result<Self> {
        if groups.is_empty() || diffs.len() + 1 != groups.len() {
            return Err(Error::IncompatibleMaps(format!("{} groups but {} differentials", groups.len(), diffs.len())));
        }
        for (l, d) in diffs.iter().enumerate() {
            if d.source() != &groups[l + 1] || d.target() != &groups[l] {
                return Err(Error::IncompatibleMaps(format!("d_{} has the wrong source or target", l + 1)));
            }
        }
        Ok(ChainComplex { groups, diffs })
    }

    /// A single group in degree 0.
    pub fn concentrated(group: AbGroup) -> Self {
        ChainComplex { groups: vec![group], diffs: Vec::new() }
    }

    /// Top degree `L`.
    pub fn length(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, l: usize) -> AbGroup {
        self.groups.get(l).cloned().unwrap_or_default()
    }

    pub fn groups(&self) -> &[AbGroup] {
        &self.groups
    }

    pub fn diffs(&self) -> &[AbHom] {
        &self.diffs
    }

    /// `d_l`, with zero maps outside the stored range.
    pub fn differential(&self, l: usize) -> AbHom {
        if l >= 1 && l <= self.diffs.len() {
            self.diffs[l - 1].clone()
        } else {
            AbHom::zero(self.group(l), if l == 0 { AbGroup::trivial() } else { self.group(l - 1) })
        }
    }

    /// `H_n`; above the truncation the complex is read as zero.
    pub fn homology(&self, n: usize) -> Result<Homology> {
        complex_homology(&self.differential(n + 1), &self.differential(n))
    }
}

enum Classifier {
    Lattice(Subquotient),
    Primary(Primary),
}

/// `ker(d_out) / im(d_in)` with canonical generators, lifts of them to cycles, and a
/// classifier expressing cycles in those generators.
pub struct Homology {
    group: FinAb,
    ambient: AbGroup,
    lifts: Vec<SparseVec>,
    d_out: AbHom,
    classifier: Classifier,
}

impl std::fmt::Debug for Homology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Homology").field("group", &self.group).field("lifts", &self.lifts).finish_non_exhaustive()
    }
}

impl Homology {
    pub fn group(&self) -> &FinAb {
        &self.group
    }

    /// The chain group the cycles live in.
    pub fn ambient(&self) -> &AbGroup {
        &self.ambient
    }

    pub fn lifts(&self) -> &[SparseVec] {
        &self.lifts
    }

    pub fn is_cycle(&self, v: &SparseVec) -> bool {
        self.d_out.apply(v).is_empty()
    }

    /// Coordinates of the class of a cycle; `None` for non-cycles.
    pub fn classify(&self, v: &SparseVec) -> Option<Vec<i64>> {
        if !self.is_cycle(v) {
            return None;
        }
        match &self.classifier {
            Classifier::Lattice(sq) => sq.classify_sparse(v),
            Classifier::Primary(pr) => pr.classify(v),
        }
    }

    pub fn is_boundary(&self, v: &SparseVec) -> bool {
        self.classify(v).is_some_and(|c| c.iter().all(|&x| x == 0))
    }

    /// Induced map `H(source) -> H(self)` for a chain-level map sending cycles of
    /// `source` to cycles here.
    pub fn induced_from(&self, source: &Homology, f: &AbHom) -> Result<AbHom> {
        let mut columns = Vec::with_capacity(source.lifts.len());
        for z in &source.lifts {
            let image = f.apply(z);
            let c = self.classify(&image).ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))?;
            columns.push(c.into_iter().enumerate().filter(|&(_, x)| x != 0).collect());
        }
        AbHom::new(source.group.as_group(), self.group.as_group(), columns)
    }
}

/// Homology at the middle of `B --d_in--> A --d_out--> C`.
pub fn complex_homology(d_in: &AbHom, d_out: &AbHom) -> Result<Homology> {
    if d_in.target() != d_out.source() {
        return Err(Error::IncompatibleMaps("d_in does not land in the source of d_out".into()));
    }
    if !d_out.compose(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let ambient = d_out.source().clone();
    match Primary::build(d_in, d_out)? {
        Some(pr) => {
            let lifts = pr.lifts(&ambient);
            Ok(Homology {
                group: pr.group().clone(),
                ambient,
                lifts,
                d_out: d_out.clone(),
                classifier: Classifier::Primary(pr),
            })
        }
        None => lattice_homology(d_in, d_out),
    }
}

/// Same as [`complex_homology`] but always through one Smith form over the whole
/// middle group. Slow; serves as a cross-check.
pub fn complex_homology_lattice(d_in: &AbHom, d_out: &AbHom) -> Result<Homology> {
    if d_in.target() != d_out.source() {
        return Err(Error::IncompatibleMaps("d_in does not land in the source of d_out".into()));
    }
    if !d_out.compose(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    lattice_homology(d_in, d_out)
}

fn lattice_homology(d_in: &AbHom, d_out: &AbHom) -> Result<Homology> {
    let ambient = d_out.source().clone();
    let n = ambient.rank();
    let mut num = preimage_of_relations(&d_out.to_matrix(), d_out.target());
    let rel = relation_columns(&ambient);
    num.extend(rel.iter().cloned());
    let mut den: Vec<Vec<BigInt>> = d_in.columns().iter().map(|c| sparse_to_big(c, n)).collect();
    den.extend(rel);
    let sq = Subquotient::new(n, &num, &den)?;
    let lifts = (0..sq.group().invariant_factors().len()).map(|k| sq.lift_sparse(k, &ambient)).collect();
    Ok(Homology { group: sq.group().clone(), ambient, lifts, d_out: d_out.clone(), classifier: Classifier::Lattice(sq) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> AbGroup {
        AbGroup::free(1)
    }

    #[test]
    fn integer_examples() {
        let zero = AbHom::from_dense(z(), z(), &[vec![0]]).unwrap();
        let two = AbHom::from_dense(z(), z(), &[vec![2]]).unwrap();
        assert!(complex_homology(&zero, &two).unwrap().group().is_zero());
        assert_eq!(complex_homology(&two, &zero).unwrap().group(), &FinAb::cyclic(2));
    }

    #[test]
    fn times_two_on_z4() {
        let z4 = AbGroup::cyclic(4);
        let two = AbHom::from_dense(z4.clone(), z4.clone(), &[vec![2]]).unwrap();
        let h = complex_homology(&two, &two).unwrap();
        assert!(h.group().is_zero());
        assert!(h.is_boundary(&vec![(0, 2)]));
    }

    #[test]
    fn composition_nonzero_is_reported() {
        let z4 = AbGroup::cyclic(4);
        let id = AbHom::identity(z4);
        assert!(matches!(complex_homology(&id, &id), Err(Error::CompositionNonzero)));
    }

    #[test]
    fn lifts_classify_to_unit_vectors() {
        // Z/2 + Z/4 + Z/6 with zero differentials on both sides
        let a = AbGroup::new(vec![2, 4, 6]);
        let h = complex_homology(&AbHom::zero(AbGroup::trivial(), a.clone()), &AbHom::zero(a, AbGroup::trivial())).unwrap();
        assert_eq!(h.group(), &FinAb::from_orders(&[2, 4, 6]));
        for (k, z) in h.lifts().iter().enumerate() {
            let c = h.classify(z).unwrap();
            for (j, &x) in c.iter().enumerate() {
                assert_eq!(x, i64::from(j == k));
            }
        }
    }

    #[test]
    fn non_cycles_are_rejected() {
        let z4 = AbGroup::cyclic(4);
        let two = AbHom::from_dense(z4.clone(), z4.clone(), &[vec![2]]).unwrap();
        let h = complex_homology(&AbHom::zero(AbGroup::trivial(), z4), &two).unwrap();
        assert_eq!(h.group(), &FinAb::cyclic(2));
        assert!(h.classify(&vec![(0, 1)]).is_none());
        assert_eq!(h.classify(&vec![(0, 2)]).unwrap(), vec![1]);
    }
}
