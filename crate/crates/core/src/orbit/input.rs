//! Towers of equivariant chain complexes and the bicomplex `C_q[(G/N_i)^p]`.

use super::bicomplex::{Bicomplex, BicomplexMap};
use crate::abelian::{complex_homology, AbGroup, AbHom, ChainComplex, Homology, SparseVec};
use crate::bar::{bar_chain_map, bar_differential, BarLayout, BarOptions};
use crate::error::{Error, Result};
use crate::gmod::{equivariance_witness, GModule};
use crate::groups::{FiniteGroup, GroupTower, QuotientMap};
use crate::profinite::TowerPair;

/// `C_0 <- C_1 <- ... <- C_Q`, each `C_q` a module over one finite group and each
/// differential equivariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComplex {
    group: FiniteGroup,
    modules: Vec<GModule>,
    diffs: Vec<AbHom>,
}

impl EquivariantComplex {
    /// `diffs[q - 1] : C_q -> C_{q-1}`.
    pub fn new(group: &FiniteGroup, modules: Vec<GModule>, diffs: Vec<AbHom>) -> Result<Self> {
        if modules.is_empty() || diffs.len() + 1 != modules.len() {
            return Err(Error::IncompatibleMaps("a complex needs one differential between consecutive degrees".into()));
        }
        for (q, m) in modules.iter().enumerate() {
            if m.group() != group {
                return Err(Error::GroupMismatch(format!("degree {q} is over another group")));
            }
        }
        let id = QuotientMap::identity(group);
        for (k, d) in diffs.iter().enumerate() {
            let q = k + 1;
            if d.source() != modules[q].abgroup() || d.target() != modules[q - 1].abgroup() {
                return Err(Error::IncompatibleMaps(format!("differential from degree {q} has the wrong shape")));
            }
            if let Some(g) = equivariance_witness(&modules[q], &modules[q - 1], &id, d) {
                return Err(Error::NotEquivariant { level: None, element: g });
            }
        }
        ChainComplex::new(modules.iter().map(|m| m.abgroup().clone()).collect(), diffs.clone())?;
        Ok(EquivariantComplex { group: group.clone(), modules, diffs })
    }

    pub fn concentrated(m: GModule) -> Self {
        EquivariantComplex { group: m.group().clone(), modules: vec![m], diffs: Vec::new() }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn top(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, q: usize) -> &GModule {
        &self.modules[q]
    }

    pub fn modules(&self) -> &[GModule] {
        &self.modules
    }

    /// `C_q -> C_{q-1}`, zero outside the range.
    pub fn differential(&self, q: usize) -> AbHom {
        if q == 0 {
            AbHom::zero(self.modules[0].abgroup().clone(), AbGroup::trivial())
        } else if q > self.top() {
            AbHom::zero(AbGroup::trivial(), self.modules[self.top()].abgroup().clone())
        } else {
            self.diffs[q - 1].clone()
        }
    }

    pub fn diffs(&self) -> &[AbHom] {
        &self.diffs
    }

    fn degree_homology(&self, q: usize) -> Result<Homology> {
        let d_in = if q < self.top() { self.diffs[q].clone() } else { AbHom::zero(AbGroup::trivial(), self.modules[q].abgroup().clone()) };
        complex_homology(&d_in, &self.differential(q))
    }

    /// `H_q(C)` with the induced action, for `q <= top`.
    pub fn homology_module(&self, q: usize) -> Result<(Homology, GModule)> {
        let h = self.degree_homology(q)?;
        let action = (0..self.group.order()).map(|g| h.induced_from(&h, self.modules[q].action(g))).collect::<Result<Vec<_>>>()?;
        let m = GModule::from_action(&self.group, h.group().as_group(), action)?;
        Ok((h, m))
    }
}

/// A group tower with an equivariant complex at each level and equivariant chain maps
/// `C_{i+1} -> C_i` over the quotient maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInput {
    groups: GroupTower,
    levels: Vec<EquivariantComplex>,
    /// `transitions[i][q] : C_{i+1,q} -> C_{i,q}`.
    transitions: Vec<Vec<AbHom>>,
}

impl OrbitInput {
    pub fn new(groups: &GroupTower, levels: Vec<EquivariantComplex>, transitions: Vec<Vec<AbHom>>) -> Result<Self> {
        if levels.len() != groups.depth() {
            return Err(Error::DepthMismatch { groups: groups.depth(), other: levels.len() });
        }
        if transitions.len() + 1 != levels.len() {
            return Err(Error::TowerMismatch { index: transitions.len() });
        }
        for (i, c) in levels.iter().enumerate() {
            if c.group() != groups.object(i) {
                return Err(Error::GroupMismatch(format!("complex {i} is not over level {i} of the group tower")));
            }
            if c.top() != levels[0].top() {
                return Err(Error::IncompatibleMaps(format!("complex {i} has a different length")));
            }
        }
        for (i, fs) in transitions.iter().enumerate() {
            let (src, tgt) = (&levels[i + 1], &levels[i]);
            if fs.len() != src.top() + 1 {
                return Err(Error::TowerMismatch { index: i });
            }
            for (q, f) in fs.iter().enumerate() {
                if f.source() != src.module(q).abgroup() || f.target() != tgt.module(q).abgroup() {
                    return Err(Error::TowerMismatch { index: i });
                }
                if let Some(g) = equivariance_witness(src.module(q), tgt.module(q), groups.map(i), f) {
                    return Err(Error::NotEquivariant { level: Some(i), element: g });
                }
                if q > 0 && tgt.differential(q).compose(f)? != fs[q - 1].compose(&src.differential(q))? {
                    return Err(Error::NotChainMap { level: i, degree: q });
                }
            }
        }
        Ok(OrbitInput { groups: groups.clone(), levels, transitions })
    }

    /// Each `A_i` concentrated in degree 0.
    pub fn eilenberg_mac_lane(pair: &TowerPair) -> Result<Self> {
        let levels = pair.modules().objects().iter().cloned().map(EquivariantComplex::concentrated).collect();
        let transitions = pair.modules().maps().iter().map(|f| vec![f.hom().clone()]).collect();
        OrbitInput::new(pair.groups(), levels, transitions)
    }

    pub fn groups(&self) -> &GroupTower {
        &self.groups
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &EquivariantComplex {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[EquivariantComplex] {
        &self.levels
    }

    pub fn transition(&self, i: usize, q: usize) -> &AbHom {
        &self.transitions[i][q]
    }

    pub fn transitions(&self) -> &[Vec<AbHom>] {
        &self.transitions
    }

    pub fn top(&self) -> usize {
        self.levels[0].top()
    }

    /// Group tower constant from level 0 and every chain-level transition invertible.
    pub fn is_constant(&self) -> bool {
        self.groups.stabilization() == Some(0) && self.transitions.iter().flatten().all(AbHom::is_isomorphism)
    }

    /// Replaces level complexes and transitions, keeping the group tower.
    pub fn with_levels(&self, levels: Vec<EquivariantComplex>, transitions: Vec<Vec<AbHom>>) -> Result<Self> {
        OrbitInput::new(&self.groups, levels, transitions)
    }
}

fn layouts(c: &EquivariantComplex, normalized: bool) -> Vec<BarLayout> {
    c.modules().iter().map(|m| BarLayout::new(c.group().order(), m.abgroup().rank(), normalized)).collect()
}

/// `B_{p,q} = C_{i,q}[(G/N_i)^p]` for `p <= p_max`: bar differential horizontally,
/// `(-1)^p` times the complex's differential vertically.
pub fn orbit_bicomplex(input: &OrbitInput, level: usize, p_max: usize, opts: BarOptions) -> Result<Bicomplex> {
    let c = input.level(level);
    let lay = layouts(c, opts.normalized);
    for l in &lay {
        for p in 0..=p_max {
            l.check(p, opts.cap)?;
        }
    }
    let top = c.top();
    let groups: Vec<Vec<AbGroup>> =
        (0..=p_max).map(|p| (0..=top).map(|q| lay[q].chain_group(c.module(q).abgroup(), p)).collect()).collect();
    let horizontal = (1..=p_max).map(|p| (0..=top).map(|q| bar_differential(c.module(q), &lay[q], p)).collect()).collect();
    let vertical = (0..=p_max)
        .map(|p| {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            (1..=top)
                .map(|q| {
                    let d = &c.diffs()[q - 1];
                    let (rs, rt) = (d.source().rank(), d.target().rank());
                    let mut columns: Vec<SparseVec> = Vec::with_capacity(groups[p][q].rank());
                    for t in 0..lay[q].tuple_count(p) as usize {
                        for j in 0..rs {
                            columns.push(d.column(j).iter().map(|&(i, x)| (t * rt + i, sign * x)).collect());
                        }
                    }
                    AbHom::new(groups[p][q].clone(), groups[p][q - 1].clone(), columns)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Bicomplex::new(groups, horizontal, vertical)?.truncated())
}

/// The map of orbit bicomplexes from level `i + 1` to level `i`.
pub fn orbit_transition(input: &OrbitInput, i: usize, source: &Bicomplex, target: &Bicomplex, opts: BarOptions) -> Result<BicomplexMap> {
    let (cs, ct) = (input.level(i + 1), input.level(i));
    let (ls, lt) = (layouts(cs, opts.normalized), layouts(ct, opts.normalized));
    let q_map = input.groups().map(i);
    let blocks = (0..=source.p_max())
        .map(|p| {
            (0..=source.q_max())
                .map(|q| bar_chain_map(q_map, input.transition(i, q), &ls[q], &lt[q], target.group(p, q), p))
                .collect()
        })
        .collect();
    BicomplexMap::new_unverified(source, target, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAb;
    use crate::gmod::constant_trivial_tower;
    use crate::groups::{constant_tower, cyclic_p_tower};
    use crate::orbit::{total_homology_through, BicomplexMap};
    use crate::profinite::validate_tower_pair;

    fn em(gt: &GroupTower, a: u64) -> OrbitInput {
        let mt = constant_trivial_tower(gt, &AbGroup::cyclic(a)).unwrap();
        OrbitInput::eilenberg_mac_lane(&validate_tower_pair(gt, &mt).unwrap()).unwrap()
    }

    #[test]
    fn em_rows_and_ranks() {
        let gt = constant_tower(&FiniteGroup::cyclic(2), 2).unwrap();
        let input = em(&gt, 2);
        let b = orbit_bicomplex(&input, 0, 3, BarOptions::moore()).unwrap();
        assert_eq!(b.q_max(), 0);
        assert_eq!((0..=3).map(|p| b.group(p, 0).rank()).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        let h = total_homology_through(&b, 2).unwrap();
        assert_eq!(h.groups, vec![FinAb::cyclic(2); 3]);
    }

    #[test]
    fn trivial_group_gives_homology_of_the_complex() {
        // Z/4 --2--> Z/4 over the trivial group
        let g = FiniteGroup::trivial();
        let z4 = AbGroup::cyclic(4);
        let m = GModule::trivial(&g, z4.clone()).unwrap();
        let two = AbHom::from_dense(z4.clone(), z4, &[vec![2]]).unwrap();
        let c = EquivariantComplex::new(&g, vec![m.clone(), m], vec![two]).unwrap();
        let gt = constant_tower(&g, 1).unwrap();
        let input = OrbitInput::new(&gt, vec![c], vec![]).unwrap();
        let b = orbit_bicomplex(&input, 0, 3, BarOptions::moore()).unwrap();
        let h = total_homology_through(&b, 2).unwrap();
        assert_eq!(h.groups, vec![FinAb::cyclic(2), FinAb::cyclic(2), FinAb::zero()]);
    }

    #[test]
    fn transitions_commute() {
        let gt = cyclic_p_tower(2, 3).unwrap();
        let input = em(&gt, 4);
        let opts = BarOptions::default();
        let b1 = orbit_bicomplex(&input, 1, 3, opts).unwrap();
        let b2 = orbit_bicomplex(&input, 2, 3, opts).unwrap();
        let f = orbit_transition(&input, 1, &b2, &b1, opts).unwrap();
        let blocks = (0..=3).map(|p| vec![f.block(p, 0).clone()]).collect();
        assert!(BicomplexMap::new(&b2, &b1, blocks).is_ok());
    }

    #[test]
    fn broken_chain_map_is_reported() {
        let g = FiniteGroup::trivial();
        let z2 = AbGroup::cyclic(2);
        let m = GModule::trivial(&g, z2.clone()).unwrap();
        let id = AbHom::identity(z2.clone());
        let c = EquivariantComplex::new(&g, vec![m.clone(), m], vec![id.clone()]).unwrap();
        let gt = constant_tower(&g, 2).unwrap();
        let zero = AbHom::zero(z2.clone(), z2);
        let err = OrbitInput::new(&gt, vec![c.clone(), c], vec![vec![id, zero]]);
        assert_eq!(err, Err(Error::NotChainMap { level: 0, degree: 1 }));
    }
}
