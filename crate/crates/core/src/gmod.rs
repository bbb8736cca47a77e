//! Finite modules over finite groups.

use std::collections::VecDeque;

use crate::abelian::lattice::{relation_columns, sparse_to_big, unit_columns, Subquotient};
use crate::abelian::tower::{Arrow, Tower};
use crate::abelian::{AbGroup, AbHom, FinAb};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupTower, QuotientMap};

/// A finite abelian group with a left action; `action[g]` is the automorphism by `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    abgroup: AbGroup,
    action: Vec<AbHom>,
}

/// `generator_images[k]` is the dense matrix of the `k`-th generator of `group`.
pub fn make_module(group: &FiniteGroup, abgroup: AbGroup, generator_images: &[Vec<Vec<i64>>]) -> Result<GModule> {
    if !abgroup.is_finite() {
        return Err(Error::ModuleNotFinite);
    }
    let gens = group.generators();
    if generator_images.len() != gens.len() {
        return Err(Error::GeneratorCount { expected: gens.len(), given: generator_images.len() });
    }
    let mut gen_maps = Vec::with_capacity(gens.len());
    for (&g, m) in gens.iter().zip(generator_images) {
        let f = AbHom::from_dense(abgroup.clone(), abgroup.clone(), m)?;
        if !f.is_injective() {
            return Err(Error::ActionNotInvertible { g });
        }
        gen_maps.push(f);
    }
    extend_action(group, abgroup, gens, &gen_maps)
}

fn extend_action(group: &FiniteGroup, abgroup: AbGroup, gens: &[usize], gen_maps: &[AbHom]) -> Result<GModule> {
    let n = group.order();
    let mut action: Vec<Option<AbHom>> = vec![None; n];
    action[0] = Some(AbHom::identity(abgroup.clone()));
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (&g, f) in gens.iter().zip(gen_maps) {
            let y = group.mul(g, x);
            if action[y].is_none() {
                action[y] = Some(f.compose(action[x].as_ref().unwrap())?);
                queue.push_back(y);
            }
        }
    }
    let action: Vec<AbHom> = action.into_iter().map(|a| a.expect("generators generate")).collect();
    for (&g, f) in gens.iter().zip(gen_maps) {
        if &action[g] != f {
            let h = (0..n).find(|&h| action[group.mul(g, h)] != f.compose(&action[h]).unwrap()).unwrap_or(0);
            return Err(Error::ActionNotHomomorphic { g, h });
        }
    }
    for g in 0..n {
        for h in 0..n {
            if action[group.mul(g, h)] != action[g].compose(&action[h])? {
                return Err(Error::ActionNotHomomorphic { g, h });
            }
        }
    }
    Ok(GModule { group: group.clone(), abgroup, action })
}

impl GModule {
    pub fn trivial(group: &FiniteGroup, abgroup: AbGroup) -> Result<GModule> {
        if !abgroup.is_finite() {
            return Err(Error::ModuleNotFinite);
        }
        let id = AbHom::identity(abgroup.clone());
        Ok(GModule { group: group.clone(), action: vec![id; group.order()], abgroup })
    }

    /// Builds from the full table of automorphisms, checking the axioms.
    pub fn from_action(group: &FiniteGroup, abgroup: AbGroup, action: Vec<AbHom>) -> Result<GModule> {
        if !abgroup.is_finite() {
            return Err(Error::ModuleNotFinite);
        }
        if action.len() != group.order() {
            return Err(Error::GeneratorCount { expected: group.order(), given: action.len() });
        }
        for (g, f) in action.iter().enumerate() {
            if f.source() != &abgroup || f.target() != &abgroup {
                return Err(Error::GroupMismatch(format!("action of {g} has the wrong shape")));
            }
            if !f.is_injective() {
                return Err(Error::ActionNotInvertible { g });
            }
        }
        if action[0] != AbHom::identity(abgroup.clone()) {
            return Err(Error::ActionNotHomomorphic { g: 0, h: 0 });
        }
        let n = group.order();
        for g in 0..n {
            for h in 0..n {
                if action[group.mul(g, h)] != action[g].compose(&action[h])? {
                    return Err(Error::ActionNotHomomorphic { g, h });
                }
            }
        }
        Ok(GModule { group: group.clone(), abgroup, action })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn abgroup(&self) -> &AbGroup {
        &self.abgroup
    }

    pub fn action(&self, g: usize) -> &AbHom {
        &self.action[g]
    }

    pub fn is_trivial(&self) -> bool {
        let id = AbHom::identity(self.abgroup.clone());
        self.action.iter().all(|f| f == &id)
    }

    /// Dense matrices of the generators, in the order of `group().generators()`.
    pub fn generator_matrices(&self) -> Vec<Vec<Vec<i64>>> {
        self.group.generators().iter().map(|&g| self.action[g].to_dense()).collect()
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule> {
        if self.group != other.group {
            return Err(Error::GroupMismatch("direct sum over different groups".into()));
        }
        let abgroup = self.abgroup.direct_sum(&other.abgroup);
        let r = self.abgroup.rank();
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut cols: Vec<_> = a.columns().to_vec();
                cols.extend(b.columns().iter().map(|c| c.iter().map(|&(i, x)| (i + r, x)).collect()));
                AbHom::new(abgroup.clone(), abgroup.clone(), cols)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GModule { group: self.group.clone(), abgroup, action })
    }
}

/// `A / <a - g a>`.
pub fn coinvariants(m: &GModule) -> FinAb {
    let a = &m.abgroup;
    let n = a.rank();
    let mut den = relation_columns(a);
    for f in &m.action {
        for (j, col) in f.columns().iter().enumerate() {
            let mut v = sparse_to_big(col, n);
            v[j] -= 1;
            if v.iter().any(|x| x.sign() != num_bigint::Sign::NoSign) {
                den.push(v);
            }
        }
    }
    Subquotient::new(n, &unit_columns(n), &den).expect("quotient of the ambient lattice").group().clone()
}

/// Inflation along `q`: `g` acts through `q(g)`.
pub fn restrict_along(q: &QuotientMap, m: &GModule) -> Result<GModule> {
    if &m.group != q.target() {
        return Err(Error::GroupMismatch("module is not over the target of the quotient map".into()));
    }
    let action = (0..q.source().order()).map(|g| m.action[q.apply(g)].clone()).collect();
    Ok(GModule { group: q.source().clone(), abgroup: m.abgroup.clone(), action })
}

/// An equivariant map `M' -> M` over a quotient map: `f(g a) = q(g) f(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: GModule,
    target: GModule,
    quotient: QuotientMap,
    hom: AbHom,
}

impl ModuleMap {
    pub fn new(source: GModule, target: GModule, quotient: QuotientMap, hom: AbHom) -> Result<Self> {
        Self::new_at(source, target, quotient, hom, None)
    }

    pub(crate) fn new_at(
        source: GModule,
        target: GModule,
        quotient: QuotientMap,
        hom: AbHom,
        level: Option<usize>,
    ) -> Result<Self> {
        if quotient.source() != &source.group || quotient.target() != &target.group {
            return Err(Error::GroupMismatch(match level {
                Some(i) => format!("module transition {i} is not over the group transition"),
                None => "module map is not over the quotient map".into(),
            }));
        }
        if hom.source() != &source.abgroup || hom.target() != &target.abgroup {
            return Err(Error::IncompatibleMaps("module map has the wrong shape".into()));
        }
        if let Some(g) = equivariance_witness(&source, &target, &quotient, &hom) {
            return Err(Error::NotEquivariant { level, element: g });
        }
        Ok(ModuleMap { source, target, quotient, hom })
    }

    pub fn quotient(&self) -> &QuotientMap {
        &self.quotient
    }

    pub fn hom(&self) -> &AbHom {
        &self.hom
    }

    pub fn source_module(&self) -> &GModule {
        &self.source
    }

    pub fn target_module(&self) -> &GModule {
        &self.target
    }
}

/// First group element `g` with `f ∘ g ≠ q(g) ∘ f`.
pub fn equivariance_witness(source: &GModule, target: &GModule, q: &QuotientMap, f: &AbHom) -> Option<usize> {
    (0..source.group.order()).find(|&g| {
        let left = f.compose(&source.action[g]).expect("shapes checked");
        let right = target.action[q.apply(g)].compose(f).expect("shapes checked");
        left != right
    })
}

impl Arrow for ModuleMap {
    type Object = GModule;
    fn source(&self) -> &GModule {
        &self.source
    }
    fn target(&self) -> &GModule {
        &self.target
    }
}

pub type ModuleTower = Tower<ModuleMap>;

/// Pairs level `i` modules with the `i`-th group of `gt`; `homs[i] : A_{i+1} -> A_i`.
pub fn module_tower(gt: &GroupTower, modules: Vec<GModule>, homs: Vec<AbHom>) -> Result<ModuleTower> {
    if modules.len() != gt.depth() {
        return Err(Error::DepthMismatch { groups: gt.depth(), other: modules.len() });
    }
    if homs.len() + 1 != modules.len() {
        return Err(Error::TowerMismatch { index: homs.len() });
    }
    for (i, m) in modules.iter().enumerate() {
        if &m.group != gt.object(i) {
            return Err(Error::GroupMismatch(format!("module {i} is not over level {i} of the group tower")));
        }
    }
    let maps = homs
        .into_iter()
        .enumerate()
        .map(|(i, f)| ModuleMap::new_at(modules[i + 1].clone(), modules[i].clone(), gt.map(i).clone(), f, Some(i)))
        .collect::<Result<Vec<_>>>()?;
    let t = Tower::new(modules, maps)?;
    let constant = gt.stabilization() == Some(0) && t.maps().iter().all(|m| m.hom.is_isomorphism());
    Ok(if constant { t.with_stabilization_unchecked(0) } else { t })
}

/// Trivial action on `a` at every level, identity transitions.
pub fn constant_trivial_tower(gt: &GroupTower, a: &AbGroup) -> Result<ModuleTower> {
    let modules = gt.objects().iter().map(|g| GModule::trivial(g, a.clone())).collect::<Result<Vec<_>>>()?;
    let homs = vec![AbHom::identity(a.clone()); gt.depth() - 1];
    module_tower(gt, modules, homs)
}

/// The same module inflated to every level of `gt`, identity transitions. `m` must be
/// over level 0.
pub fn inflated_tower(gt: &GroupTower, m: &GModule) -> Result<ModuleTower> {
    let mut modules = vec![m.clone()];
    for i in 1..gt.depth() {
        let q = gt.map(i - 1);
        modules.push(restrict_along(q, &modules[i - 1])?);
    }
    let homs = vec![AbHom::identity(m.abgroup.clone()); gt.depth() - 1];
    module_tower(gt, modules, homs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_quotient;

    fn negation(n: u64) -> GModule {
        make_module(&FiniteGroup::cyclic(2), AbGroup::cyclic(n), &[vec![vec![-1]]]).unwrap()
    }

    #[test]
    fn construction() {
        assert!(!negation(4).is_trivial());
        let bad = make_module(&FiniteGroup::cyclic(2), AbGroup::cyclic(4), &[vec![vec![2]]]);
        assert!(matches!(bad, Err(Error::ActionNotInvertible { g: 1 })));
        let triv = make_module(&FiniteGroup::cyclic(3), AbGroup::cyclic(2), &[vec![vec![1]]]).unwrap();
        assert!(triv.is_trivial());
        let wrong_order = make_module(&FiniteGroup::cyclic(2), AbGroup::cyclic(5), &[vec![vec![2]]]);
        assert!(matches!(wrong_order, Err(Error::ActionNotHomomorphic { .. })));
        assert!(matches!(GModule::trivial(&FiniteGroup::cyclic(2), AbGroup::free(1)), Err(Error::ModuleNotFinite)));
    }

    #[test]
    fn coinvariant_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(coinvariants(&GModule::trivial(&z2, AbGroup::cyclic(4)).unwrap()), FinAb::cyclic(4));
        assert_eq!(coinvariants(&negation(4)), FinAb::cyclic(2));
        let perm = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        let m = make_module(&FiniteGroup::cyclic(3), AbGroup::new(vec![2, 2, 2]), &[perm]).unwrap();
        assert_eq!(coinvariants(&m), FinAb::cyclic(2));
    }

    #[test]
    fn restriction() {
        let z4 = FiniteGroup::cyclic(4);
        let (_, q) = make_quotient(&z4, &[0, 2]).unwrap();
        let m = negation(4);
        let r = restrict_along(&q, &m).unwrap();
        assert_eq!(r.action(1), m.action(1));
        assert_eq!(r.action(2), m.action(0));
        let id = QuotientMap::identity(&FiniteGroup::cyclic(2));
        assert_eq!(restrict_along(&id, &m).unwrap(), m);
        assert!(matches!(restrict_along(&q, &r), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn equivariance_is_checked() {
        let gt = crate::groups::cyclic_p_tower(2, 3).unwrap();
        assert!(constant_trivial_tower(&gt, &AbGroup::cyclic(2)).is_ok());
        // level 1: Z/2 negation on Z/4; level 2: trivial Z/4 over Z/4; identity transition is not equivariant
        let m0 = GModule::trivial(gt.object(0), AbGroup::cyclic(4)).unwrap();
        let m1 = make_module(gt.object(1), AbGroup::cyclic(4), &[vec![vec![-1]]]).unwrap();
        let m2 = GModule::trivial(gt.object(2), AbGroup::cyclic(4)).unwrap();
        let id = AbHom::identity(AbGroup::cyclic(4));
        let twice = AbHom::from_dense(AbGroup::cyclic(4), AbGroup::cyclic(4), &[vec![2]]).unwrap();
        let err = module_tower(&gt, vec![m0.clone(), m1.clone(), m2.clone()], vec![twice.clone(), id.clone()]);
        assert!(matches!(err, Err(Error::NotEquivariant { level: Some(1), element: 1 })));
        let err = module_tower(&gt, vec![m0.clone(), m1.clone()], vec![twice]);
        assert!(matches!(err, Err(Error::DepthMismatch { .. })));
        let err = module_tower(&gt, vec![m1.clone(), m0, m2], vec![id.clone(), id]);
        assert!(matches!(err, Err(Error::GroupMismatch(_))));
    }
}
