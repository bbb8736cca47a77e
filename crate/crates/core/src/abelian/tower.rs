//! Truncated towers `T_0 <- T_1 <- ... <- T_I` and their limits.

use num_bigint::BigInt;

use super::group::{AbGroup, FinAb};
use super::hom::AbHom;
use super::lattice::{relation_columns, sparse_to_big, Subquotient};
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 2;

/// A map with a source and a target, so towers can check adjacency.
pub trait Arrow {
    type Object: PartialEq;
    fn source(&self) -> &Self::Object;
    fn target(&self) -> &Self::Object;
}

impl Arrow for AbHom {
    type Object = AbGroup;
    fn source(&self) -> &AbGroup {
        AbHom::source(self)
    }
    fn target(&self) -> &AbGroup {
        AbHom::target(self)
    }
}

/// `maps[i] : objects[i + 1] -> objects[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower<A: Arrow> {
    objects: Vec<A::Object>,
    maps: Vec<A>,
    stabilization: Option<usize>,
}

impl<A: Arrow> Tower<A> {
    pub fn new(objects: Vec<A::Object>, maps: Vec<A>) -> Result<Self> {
        if objects.is_empty() || maps.len() + 1 != objects.len() {
            return Err(Error::TowerMismatch { index: maps.len() });
        }
        for (i, m) in maps.iter().enumerate() {
            if m.source() != &objects[i + 1] || m.target() != &objects[i] {
                return Err(Error::TowerMismatch { index: i });
            }
        }
        Ok(Tower { objects, maps, stabilization: None })
    }

    pub fn objects(&self) -> &[A::Object] {
        &self.objects
    }

    pub fn maps(&self) -> &[A] {
        &self.maps
    }

    pub fn object(&self, i: usize) -> &A::Object {
        &self.objects[i]
    }

    pub fn map(&self, i: usize) -> &A {
        &self.maps[i]
    }

    /// Number of objects, `I + 1`.
    pub fn depth(&self) -> usize {
        self.objects.len()
    }

    pub fn stabilization(&self) -> Option<usize> {
        self.stabilization
    }

    /// Records a declaration without checking it; see [`AbTower::declare_stable`] for
    /// the checked version on abelian towers.
    pub fn with_stabilization_unchecked(mut self, s: usize) -> Self {
        self.stabilization = Some(s);
        self
    }

    pub fn into_parts(self) -> (Vec<A::Object>, Vec<A>, Option<usize>) {
        (self.objects, self.maps, self.stabilization)
    }
}

pub type AbTower = Tower<AbHom>;

impl Tower<AbHom> {
    /// Declares that transitions from index `s` on are isomorphisms, verifying each
    /// stored one.
    pub fn declare_stable(mut self, s: usize) -> Result<Self> {
        for (i, m) in self.maps.iter().enumerate().skip(s) {
            if !m.is_isomorphism() {
                return Err(Error::StabilizationViolated { declared: s, index: i });
            }
        }
        self.stabilization = Some(s);
        Ok(self)
    }

    pub fn is_finite(&self) -> bool {
        self.objects.iter().all(AbGroup::is_finite)
    }

    /// `T_j -> T_i` for `j >= i`.
    pub fn composite(&self, j: usize, i: usize) -> AbHom {
        assert!(j >= i && j < self.objects.len());
        let mut f = AbHom::identity(self.objects[j].clone());
        for k in (i..j).rev() {
            f = self.maps[k].compose(&f).expect("tower maps chain");
        }
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimResult {
    /// Transitions are isomorphisms from `index` to the end of the truncation.
    Stable { value: FinAb, index: usize },
    /// No stabilization detected. `eventual_images[i]` is the image of the deepest
    /// object in `T_i`; `effective_lim` is set when those images settle.
    Pro { eventual_images: Vec<FinAb>, effective_lim: Option<FinAb> },
}

impl LimResult {
    pub fn is_stable(&self) -> bool {
        matches!(self, LimResult::Stable { .. })
    }

    /// The value the truncation certifies, if any.
    pub fn value(&self) -> Option<&FinAb> {
        match self {
            LimResult::Stable { value, .. } => Some(value),
            LimResult::Pro { effective_lim, .. } => effective_lim.as_ref(),
        }
    }
}

pub fn tower_lim(t: &AbTower) -> LimResult {
    tower_lim_window(t, DEFAULT_WINDOW)
}

pub fn tower_lim_window(t: &AbTower, window: usize) -> LimResult {
    let last = t.depth() - 1;
    let isos: Vec<bool> = t.maps.iter().map(AbHom::is_isomorphism).collect();
    let mut s = last;
    while s > 0 && isos[s - 1] {
        s -= 1;
    }
    if last - s >= window || t.stabilization.is_some_and(|d| d >= s) {
        return LimResult::Stable { value: t.objects[s].canonical(), index: s };
    }
    let eventual_images: Vec<FinAb> = (0..last).map(|i| t.composite(last, i).image()).collect();
    let effective_lim = if last >= window + 1 && t.is_finite() {
        let tail = &eventual_images[last - window - 1..];
        tail.windows(2).all(|w| w[0] == w[1]).then(|| tail[0].clone())
    } else {
        None
    };
    LimResult::Pro { eventual_images, effective_lim }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlCheck {
    pub holds: bool,
    /// For a failure, the index `i` whose image chain was still shrinking and the last
    /// depth `j` where it shrank.
    pub witness: Option<(usize, usize)>,
}

pub fn ml_check(t: &AbTower) -> MlCheck {
    ml_check_window(t, DEFAULT_WINDOW)
}

/// Finite towers satisfy Mittag-Leffler outright (descending chains of subgroups of a
/// finite group stop). For others, image chains in each `T_i` are compared as
/// sublattices; the last `window` steps must be equalities.
pub fn ml_check_window(t: &AbTower, window: usize) -> MlCheck {
    if t.is_finite() {
        return MlCheck { holds: true, witness: None };
    }
    let last = t.depth() - 1;
    for i in 0..=last {
        if last - i < window {
            break;
        }
        let chain: Vec<Vec<Vec<BigInt>>> = (i..=last).map(|j| image_lattice(&t.composite(j, i))).collect();
        let mut shrank_at = None;
        for k in 1..chain.len() {
            if !same_lattice(&chain[k - 1], &chain[k], t.objects[i].rank()) {
                shrank_at = Some(i + k);
            }
        }
        if let Some(j) = shrank_at {
            if j + window > last {
                return MlCheck { holds: false, witness: Some((i, j)) };
            }
        }
    }
    MlCheck { holds: true, witness: None }
}

pub fn tower_lim1(t: &AbTower) -> Result<FinAb> {
    if t.is_finite() {
        return Ok(FinAb::zero());
    }
    let ml = ml_check(t);
    if ml.holds && t.depth() > DEFAULT_WINDOW {
        Ok(FinAb::zero())
    } else {
        Err(Error::Indeterminate(match ml.witness {
            Some((i, j)) => format!("images in T_{i} still shrink at depth {j}"),
            None => "truncation too short".to_string(),
        }))
    }
}

fn image_lattice(f: &AbHom) -> Vec<Vec<BigInt>> {
    let n = f.target().rank();
    let mut cols: Vec<Vec<BigInt>> = f.columns().iter().map(|c| sparse_to_big(c, n)).collect();
    cols.extend(relation_columns(f.target()));
    cols
}

fn same_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>], n: usize) -> bool {
    let sa = Subquotient::new(n, a, &[]).expect("empty denominator");
    let sb = Subquotient::new(n, b, &[]).expect("empty denominator");
    a.iter().all(|v| sb.contains(v)) && b.iter().all(|v| sa.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_tower(orders: &[u64], entry: i64) -> AbTower {
        let objects: Vec<AbGroup> = orders.iter().map(|&o| AbGroup::cyclic(o)).collect();
        let maps = (0..orders.len() - 1)
            .map(|i| AbHom::from_dense(objects[i + 1].clone(), objects[i].clone(), &[vec![entry]]).unwrap())
            .collect();
        Tower::new(objects, maps).unwrap()
    }

    #[test]
    fn constant_tower_is_stable() {
        let t = cyclic_tower(&[2, 2, 2, 2], 1);
        assert_eq!(tower_lim(&t), LimResult::Stable { value: FinAb::cyclic(2), index: 0 });
    }

    #[test]
    fn two_adic_tower_is_pro() {
        let t = cyclic_tower(&[2, 4, 8, 16, 32], 1);
        match tower_lim(&t) {
            LimResult::Pro { effective_lim, eventual_images } => {
                assert!(effective_lim.is_none());
                assert_eq!(eventual_images[3], FinAb::cyclic(16));
            }
            other => panic!("expected Pro, got {other:?}"),
        }
    }

    #[test]
    fn zero_transitions_have_effective_lim_zero() {
        let t = cyclic_tower(&[2, 2, 2, 2, 2], 0);
        match tower_lim(&t) {
            LimResult::Pro { effective_lim, .. } => assert_eq!(effective_lim, Some(FinAb::zero())),
            other => panic!("expected Pro, got {other:?}"),
        }
        assert!(ml_check(&t).holds);
        assert_eq!(tower_lim1(&t).unwrap(), FinAb::zero());
    }

    #[test]
    fn times_two_on_z_fails_ml() {
        let t = cyclic_tower(&[0, 0, 0, 0, 0], 2);
        let ml = ml_check(&t);
        assert!(!ml.holds);
        assert!(ml.witness.is_some());
        assert!(matches!(tower_lim1(&t), Err(Error::Indeterminate(_))));
        let c = cyclic_tower(&[0, 0, 0, 0], 1);
        assert!(ml_check(&c).holds);
        assert_eq!(tower_lim1(&c).unwrap(), FinAb::zero());
    }

    #[test]
    fn declared_stabilization_is_checked() {
        let t = cyclic_tower(&[2, 4, 4], 1);
        assert!(t.clone().declare_stable(1).is_ok());
        assert!(matches!(t.declare_stable(0), Err(Error::StabilizationViolated { declared: 0, index: 0 })));
    }

    #[test]
    fn mismatched_maps_are_rejected() {
        let z2 = AbGroup::cyclic(2);
        let z4 = AbGroup::cyclic(4);
        let f = AbHom::identity(z2.clone());
        assert!(matches!(Tower::new(vec![z2, z4], vec![f]), Err(Error::TowerMismatch { index: 0 })));
    }
}
