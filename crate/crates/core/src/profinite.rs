//! Continuous homology of a profinite group presented by a tower of finite quotients,
//! as the limit of finite-level group homology.

use crate::abelian::tower::{tower_lim_window, tower_lim1, DEFAULT_WINDOW};
use crate::abelian::{AbHom, AbTower, FinAb, LimResult, Tower};
use crate::bar::{bar_homology_range, induced_between, BarHomology, BarOptions};
use crate::error::{Error, Result};
use crate::gmod::{equivariance_witness, ModuleTower};
use crate::groups::GroupTower;

/// A group tower with a module tower over it, checked levelwise.
#[derive(Clone, Debug)]
pub struct TowerPair {
    groups: GroupTower,
    modules: ModuleTower,
}

impl TowerPair {
    pub fn groups(&self) -> &GroupTower {
        &self.groups
    }

    pub fn modules(&self) -> &ModuleTower {
        &self.modules
    }

    pub fn depth(&self) -> usize {
        self.groups.depth()
    }

    /// Both towers are constant from level 0.
    pub fn is_constant(&self) -> bool {
        self.groups.stabilization() == Some(0) && self.modules.stabilization() == Some(0)
    }

    /// The first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<TowerPair> {
        let depth = depth.clamp(1, self.depth());
        let g = truncate_tower(&self.groups, depth)?;
        let m = truncate_tower(&self.modules, depth)?;
        validate_tower_pair(&g, &m)
    }
}

fn truncate_tower<A: crate::abelian::Arrow + Clone>(t: &Tower<A>, depth: usize) -> Result<Tower<A>>
where
    A::Object: Clone,
{
    let out = Tower::new(t.objects()[..depth].to_vec(), t.maps()[..depth - 1].to_vec())?;
    Ok(match t.stabilization() {
        Some(s) if s < depth => out.with_stabilization_unchecked(s),
        _ => out,
    })
}

pub fn validate_tower_pair(gt: &GroupTower, mt: &ModuleTower) -> Result<TowerPair> {
    if gt.depth() != mt.depth() {
        return Err(Error::DepthMismatch { groups: gt.depth(), other: mt.depth() });
    }
    for (i, m) in mt.objects().iter().enumerate() {
        if m.group() != gt.object(i) {
            return Err(Error::GroupMismatch(format!("module {i} is not over level {i} of the group tower")));
        }
    }
    for (i, f) in mt.maps().iter().enumerate() {
        if f.quotient() != gt.map(i) {
            return Err(Error::GroupMismatch(format!("module transition {i} is not over group transition {i}")));
        }
        if let Some(g) = equivariance_witness(f.source_module(), f.target_module(), gt.map(i), f.hom()) {
            return Err(Error::NotEquivariant { level: Some(i), element: g });
        }
    }
    Ok(TowerPair { groups: gt.clone(), modules: mt.clone() })
}

/// `H_p(G/N_i, A_i)` along the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTower {
    pub degree: usize,
    pub tower: AbTower,
}

impl HomologyTower {
    pub fn values(&self) -> Vec<FinAb> {
        self.tower.objects().iter().map(|a| a.canonical()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousHomology {
    pub degree: usize,
    pub value: LimResult,
    pub tower: HomologyTower,
    pub lim1: FinAb,
    pub window: usize,
}

impl ContinuousHomology {
    /// `false` when the truncation neither stabilized nor settled; the tower is then
    /// only a pro-object and no value is claimed.
    pub fn is_conclusive(&self) -> bool {
        self.value.value().is_some()
    }
}

fn level_error(level: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::SizeOverflow { size, cap } => Error::LevelOverflow { level, size, cap },
        other => other,
    }
}

/// Bar homology in degrees `lo..=hi` at every level.
fn level_homology(pair: &TowerPair, lo: usize, hi: usize, opts: BarOptions) -> Result<Vec<Vec<BarHomology>>> {
    pair.modules.objects().iter().enumerate().map(|(i, m)| bar_homology_range(m, lo, hi, opts).map_err(level_error(i))).collect()
}

fn assemble(pair: &TowerPair, levels: &[Vec<BarHomology>], k: usize) -> Result<HomologyTower> {
    let degree = levels[0][k].degree();
    let objects = levels.iter().map(|l| l[k].group().as_group()).collect();
    let maps = pair
        .modules
        .maps()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            induced_between(f.quotient(), f.source_module(), f.target_module(), f.hom(), &levels[i + 1][k], &levels[i][k])
                .map_err(level_error(i))
        })
        .collect::<Result<Vec<AbHom>>>()?;
    let tower = Tower::new(objects, maps)?;
    let tower = if pair.is_constant() { tower.declare_stable(0)? } else { tower };
    Ok(HomologyTower { degree, tower })
}

pub fn homology_tower(pair: &TowerPair, p: usize) -> Result<HomologyTower> {
    homology_tower_with(pair, p, BarOptions::default())
}

pub fn homology_tower_with(pair: &TowerPair, p: usize, opts: BarOptions) -> Result<HomologyTower> {
    let levels = level_homology(pair, p, p, opts)?;
    assemble(pair, &levels, 0)
}

pub fn continuous_homology(pair: &TowerPair, p: usize) -> Result<ContinuousHomology> {
    Ok(continuous_homology_range(pair, p, p, BarOptions::default())?.pop().unwrap())
}

/// Degrees `lo..=hi`, sharing the bar complexes across degrees.
pub fn continuous_homology_range(pair: &TowerPair, lo: usize, hi: usize, opts: BarOptions) -> Result<Vec<ContinuousHomology>> {
    let levels = level_homology(pair, lo, hi, opts)?;
    (0..=hi - lo).map(|k| limit_of(assemble(pair, &levels, k)?)).collect()
}

/// `lim` and `lim^1` of a homology tower.
pub fn limit_of(tower: HomologyTower) -> Result<ContinuousHomology> {
    let value = tower_lim_window(&tower.tower, DEFAULT_WINDOW);
    let lim1 = tower_lim1(&tower.tower)?;
    if !lim1.is_zero() {
        return Err(Error::Internal(format!("lim^1 of a finite tower is {lim1}")));
    }
    Ok(ContinuousHomology { degree: tower.degree, value, tower, lim1, window: DEFAULT_WINDOW })
}
