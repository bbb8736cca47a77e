//! Orbit homology as a limit over levels, with the `E_2` page computed from the
//! bicomplex and from continuous homology of the homology tower.

use super::bicomplex::{total_homology_through, Bicomplex, TotalHomology};
use super::input::{orbit_bicomplex, orbit_transition, OrbitInput};
use super::pages::{ss_pages_with, EngineE2, SpectralPages};
use crate::abelian::{AbHom, FinAb, Tower};
use crate::bar::BarOptions;
use crate::error::{Error, Result};
use crate::gmod::{module_tower, GModule};
use crate::profinite::{continuous_homology_range, limit_of, validate_tower_pair, ContinuousHomology, HomologyTower, TowerPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitOptions {
    pub bar: BarOptions,
    /// Highest page reported.
    pub pages: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { bar: BarOptions::default(), pages: 3 }
    }
}

/// One `E_2^{p,q}` computed both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub bicomplex: ContinuousHomology,
    pub profinite: ContinuousHomology,
}

impl E2Entry {
    pub fn agrees(&self) -> bool {
        self.bicomplex.value.value() == self.profinite.value.value() && self.bicomplex.tower.values() == self.profinite.tower.values()
    }
}

/// Whether the transition from the working level to the one below is an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub working_level: usize,
    pub compared_with: Option<usize>,
    pub total: Vec<(usize, bool)>,
    pub e2: Vec<(usize, usize, bool)>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.compared_with.is_some() && self.total.iter().all(|t| t.1) && self.e2.iter().all(|e| e.2)
    }
}

#[derive(Debug)]
pub struct OrbitHomology {
    /// `degrees[n]`: the limit over levels of `H_n(Tot)`.
    pub degrees: Vec<ContinuousHomology>,
    pub e2: Vec<E2Entry>,
    pub stability: StabilityReport,
    /// Pages at the working level; `None` when the filtration route exceeded its cap.
    pub pages: Option<SpectralPages>,
    pub requested_depth: usize,
    pub p_max: usize,
}

impl OrbitHomology {
    pub fn values(&self) -> Vec<Option<FinAb>> {
        self.degrees.iter().map(|d| d.value.value().cloned()).collect()
    }

    pub fn working_depth(&self) -> usize {
        self.stability.working_level + 1
    }

    pub fn e2_agrees(&self) -> bool {
        self.e2.iter().all(E2Entry::agrees)
    }
}

struct Level {
    bicomplex: Bicomplex,
    total: TotalHomology,
    engine: EngineE2,
}

fn lim_of(degree: usize, objects: Vec<FinAb>, maps: Vec<AbHom>, constant: bool) -> Result<ContinuousHomology> {
    let tower = Tower::new(objects.iter().map(FinAb::as_group).collect(), maps)?;
    let tower = if constant { tower.declare_stable(0)? } else { tower };
    limit_of(HomologyTower { degree, tower })
}

/// Total homology through `n_max` as a limit over levels, using every level whose
/// bicomplex fits the caps.
pub fn orbit_homology(input: &OrbitInput, n_max: usize, opts: OrbitOptions) -> Result<OrbitHomology> {
    let p_max = n_max + 1;
    let mut levels: Vec<Level> = Vec::new();
    for i in 0..input.depth() {
        let b = match orbit_bicomplex(input, i, p_max, opts.bar) {
            Ok(b) => b,
            Err(Error::SizeOverflow { size, cap }) => {
                if i == 0 {
                    return Err(Error::LevelOverflow { level: 0, size, cap });
                }
                break;
            }
            Err(e) => return Err(e),
        };
        let total = total_homology_through(&b, n_max)?;
        let engine = EngineE2::new(&b, n_max)?;
        levels.push(Level { bicomplex: b, total, engine });
    }
    let depth = levels.len();

    let mut tot_maps: Vec<Vec<AbHom>> = vec![Vec::new(); n_max + 1];
    let mut e2_maps: Vec<Vec<Vec<Option<AbHom>>>> = Vec::new();
    for i in 0..depth.saturating_sub(1) {
        let (src, tgt) = (&levels[i + 1], &levels[i]);
        let f = orbit_transition(input, i, &src.bicomplex, &tgt.bicomplex, opts.bar)?;
        for (n, maps) in tot_maps.iter_mut().enumerate() {
            let chain = f.tot(&src.bicomplex, &tgt.bicomplex, n);
            maps.push(tgt.total.homology(n).induced_from(src.total.homology(n), &chain)?);
        }
        e2_maps.push(tgt.engine.induced(&src.engine, &f)?);
    }

    let (profinite, constant_rows) = e2_from_homology_towers(input, depth, n_max, opts.bar)?;
    let constant = constant_rows.iter().all(|&c| c);
    let degrees = (0..=n_max)
        .map(|n| lim_of(n, levels.iter().map(|l| l.total.group(n).clone()).collect(), tot_maps[n].clone(), constant))
        .collect::<Result<Vec<_>>>()?;

    let mut e2 = Vec::new();
    for q in 0..=n_max.min(input.top()) {
        for p in 0..=n_max - q {
            let objects = levels.iter().map(|l| l.engine.e2(p, q).expect("inside the triangle").clone()).collect();
            let maps = e2_maps.iter().map(|m| m[p][q].clone().expect("inside the triangle")).collect();
            let bicomplex = lim_of(p, objects, maps, constant_rows[q])?;
            let entry = E2Entry { p, q, bicomplex, profinite: profinite[q][p].clone() };
            if !entry.agrees() {
                return Err(Error::E2Mismatch {
                    p,
                    q,
                    bicomplex: describe(&entry.bicomplex),
                    profinite: describe(&entry.profinite),
                });
            }
            e2.push(entry);
        }
    }

    let working = depth - 1;
    let stability = StabilityReport {
        working_level: working,
        compared_with: working.checked_sub(1),
        total: if working > 0 { tot_maps.iter().enumerate().map(|(n, m)| (n, m[working - 1].is_isomorphism())).collect() } else { Vec::new() },
        e2: if working > 0 {
            e2.iter().map(|e| (e.p, e.q, e2_maps[working - 1][e.p][e.q].as_ref().is_some_and(AbHom::is_isomorphism))).collect()
        } else {
            Vec::new()
        },
    };
    let top = &levels[working];
    let pages = match ss_pages_with(&top.bicomplex, opts.pages, &top.engine, &top.total) {
        Ok(p) => Some(p),
        Err(Error::SizeOverflow { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(OrbitHomology { degrees, e2, stability, pages, requested_depth: input.depth(), p_max })
}

fn describe(c: &ContinuousHomology) -> String {
    let levels: Vec<String> = c.tower.values().iter().map(ToString::to_string).collect();
    match c.value.value() {
        Some(v) => format!("{v} (levels {})", levels.join(", ")),
        None => format!("no limit (levels {})", levels.join(", ")),
    }
}

/// `profinite[q][p]`: continuous homology of the tower `H_q(C_i)` in degree `p`, and
/// whether that tower is constant.
fn e2_from_homology_towers(
    input: &OrbitInput,
    depth: usize,
    n_max: usize,
    bar: BarOptions,
) -> Result<(Vec<Vec<ContinuousHomology>>, Vec<bool>)> {
    let gt = {
        let objects = input.groups().objects()[..depth].to_vec();
        let maps = input.groups().maps()[..depth - 1].to_vec();
        crate::groups::group_tower(objects, maps)?
    };
    let mut out = Vec::new();
    let mut constant = Vec::new();
    for q in 0..=n_max.min(input.top()) {
        let per_level: Vec<_> = (0..depth).map(|i| input.level(i).homology_module(q)).collect::<Result<_>>()?;
        let homs = (0..depth - 1)
            .map(|i| per_level[i].0.induced_from(&per_level[i + 1].0, input.transition(i, q)))
            .collect::<Result<Vec<_>>>()?;
        let modules: Vec<GModule> = per_level.into_iter().map(|(_, m)| m).collect();
        let mt = module_tower(&gt, modules, homs)?;
        let pair = validate_tower_pair(&gt, &mt)?;
        constant.push(pair.is_constant());
        out.push(continuous_homology_range(&pair, 0, n_max - q, bar)?);
    }
    Ok((out, constant))
}

#[derive(Debug)]
pub struct EmOrbitHomology {
    pub orbit: OrbitHomology,
    pub continuous: Vec<ContinuousHomology>,
}

/// Orbit homology of the levelwise Eilenberg-Mac Lane input, checked degree by degree
/// against continuous homology of the module tower.
pub fn em_orbit_homology(pair: &TowerPair, n_max: usize, opts: OrbitOptions) -> Result<EmOrbitHomology> {
    let input = OrbitInput::eilenberg_mac_lane(pair)?;
    let orbit = orbit_homology(&input, n_max, opts)?;
    let used = pair.truncate(orbit.working_depth())?;
    let continuous = continuous_homology_range(&used, 0, n_max, opts.bar)?;
    for (n, (o, c)) in orbit.degrees.iter().zip(&continuous).enumerate() {
        if o.value.value() != c.value.value() || o.tower.values() != c.tower.values() {
            return Err(Error::CollapseViolation { degree: n, orbit: describe(o), continuous: describe(c) });
        }
    }
    Ok(EmOrbitHomology { orbit, continuous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{AbGroup, LimResult};
    use crate::gmod::constant_trivial_tower;
    use crate::groups::{constant_tower, cyclic_p_tower, FiniteGroup};
    use crate::orbit::input::EquivariantComplex;

    fn pair(gt: &crate::groups::GroupTower, a: u64) -> TowerPair {
        validate_tower_pair(gt, &constant_trivial_tower(gt, &AbGroup::cyclic(a)).unwrap()).unwrap()
    }

    #[test]
    fn two_adic_collapse() {
        let gt = cyclic_p_tower(2, 4).unwrap();
        let r = em_orbit_homology(&pair(&gt, 2), 2, OrbitOptions::default()).unwrap();
        assert_eq!(r.orbit.values(), vec![Some(FinAb::cyclic(2)), Some(FinAb::cyclic(2)), Some(FinAb::zero())]);
        assert!(r.orbit.e2_agrees());
        let pages = r.orbit.pages.as_ref().unwrap();
        assert!(pages.collapses_at_e2() && pages.converges());
        assert_eq!(r.orbit.working_depth(), 4);
    }

    #[test]
    fn constant_z2_every_degree() {
        let gt = constant_tower(&FiniteGroup::cyclic(2), 3).unwrap();
        let r = em_orbit_homology(&pair(&gt, 2), 3, OrbitOptions::default()).unwrap();
        assert_eq!(r.orbit.values(), vec![Some(FinAb::cyclic(2)); 4]);
        assert!(r.orbit.degrees.iter().all(|d| matches!(d.value, LimResult::Stable { index: 0, .. })));
        assert!(r.orbit.stability.is_stable());
    }

    #[test]
    fn trivial_group_tower_takes_the_limit() {
        // Z/2 <- Z/4 <- Z/8 over trivial groups
        let g = FiniteGroup::trivial();
        let gt = constant_tower(&g, 3).unwrap();
        let modules: Vec<GModule> = [2u64, 4, 8].iter().map(|&n| GModule::trivial(&g, AbGroup::cyclic(n)).unwrap()).collect();
        let homs = vec![
            AbHom::from_dense(AbGroup::cyclic(4), AbGroup::cyclic(2), &[vec![1]]).unwrap(),
            AbHom::from_dense(AbGroup::cyclic(8), AbGroup::cyclic(4), &[vec![1]]).unwrap(),
        ];
        let p = validate_tower_pair(&gt, &module_tower(&gt, modules, homs).unwrap()).unwrap();
        let r = em_orbit_homology(&p, 1, OrbitOptions::default()).unwrap();
        assert!(matches!(&r.orbit.degrees[0].value, LimResult::Pro { effective_lim: None, .. }));
        assert_eq!(r.orbit.degrees[0].tower.values(), vec![FinAb::cyclic(2), FinAb::cyclic(4), FinAb::cyclic(8)]);
        assert_eq!(r.orbit.values()[1], Some(FinAb::zero()));
    }

    #[test]
    fn acyclic_levels_vanish() {
        let gt = cyclic_p_tower(2, 3).unwrap();
        let levels: Vec<EquivariantComplex> = gt
            .objects()
            .iter()
            .map(|g| {
                let m = GModule::trivial(g, AbGroup::cyclic(4)).unwrap();
                EquivariantComplex::new(g, vec![m.clone(), m], vec![AbHom::identity(AbGroup::cyclic(4))]).unwrap()
            })
            .collect();
        let id = AbHom::identity(AbGroup::cyclic(4));
        let input = OrbitInput::new(&gt, levels, vec![vec![id.clone(), id]; 2]).unwrap();
        let r = orbit_homology(&input, 2, OrbitOptions::default()).unwrap();
        assert!(r.values().iter().all(|v| v.as_ref().is_some_and(FinAb::is_zero)));
    }
}
