//! Structured reports. Field names here are the documented output contract.

use hocolim::abelian::{AbGroup, AbHom, AbTower, FinAb, LimResult, Tower};
use hocolim::orbit::{OrbitHomology, Route, SpectralPages};
use hocolim::profinite::ContinuousHomology;
use serde::{Deserialize, Serialize};

use crate::schema::Matrix;

pub const FORMAT: &str = "hocolim-report/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub format: String,
    pub command: String,
    pub input: InputInfo,
    pub parameters: Parameters,
    pub result: serde_json::Value,
    pub verdicts: Verdicts,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Parameters {
    pub degrees: [usize; 2],
    pub depth: Option<usize>,
    pub cap: u64,
    pub normalized: bool,
    pub pages: usize,
    pub window: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Verdicts {
    pub conclusive: Option<bool>,
    pub lim1_vanishes: Option<bool>,
    pub e2_agrees: Option<bool>,
    pub stable_at_working_level: Option<bool>,
    pub collapse_holds: Option<bool>,
    pub collapses_at_e2: Option<bool>,
    pub converges: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupReport {
    pub name: String,
    pub invariant_factors: Vec<u64>,
}

impl GroupReport {
    pub fn of(a: &FinAb) -> Self {
        GroupReport { name: show(a), invariant_factors: a.invariant_factors().to_vec() }
    }
}

/// `Z/2 + Z/2 + Z/4` as `(Z/2)^2 + Z/4`.
pub fn show(a: &FinAb) -> String {
    let f = a.invariant_factors();
    if f.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < f.len() {
        let j = f[i..].iter().take_while(|&&d| d == f[i]).count();
        let base = if f[i] == 0 { "Z".to_string() } else { format!("Z/{}", f[i]) };
        parts.push(if j == 1 { base } else if f[i] == 0 { format!("Z^{j}") } else { format!("({base})^{j}") });
        i += j;
    }
    parts.join(" + ")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeGroup {
    pub degree: usize,
    pub group: GroupReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub group: GroupReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TransitionReport {
    pub source: usize,
    pub target: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TowerReport {
    pub levels: Vec<LevelReport>,
    pub transitions: Vec<TransitionReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LimitReport {
    /// `stable` or `pro`.
    pub kind: String,
    pub value: Option<GroupReport>,
    pub stabilization_index: Option<usize>,
    pub eventual_images: Option<Vec<GroupReport>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologyReport {
    pub degree: usize,
    pub tower: TowerReport,
    pub limit: LimitReport,
    pub lim1: GroupReport,
    pub window: usize,
}

pub fn tower_report(t: &AbTower) -> TowerReport {
    TowerReport {
        levels: t.objects().iter().enumerate().map(|(level, a)| LevelReport { level, group: GroupReport::of(&a.canonical()) }).collect(),
        transitions: t
            .maps()
            .iter()
            .enumerate()
            .map(|(i, f)| TransitionReport { source: i + 1, target: i, matrix: f.to_dense() })
            .collect(),
    }
}

/// Rebuilds the tower described by a report.
pub fn tower_from_report(r: &TowerReport) -> hocolim::Result<AbTower> {
    let objects: Vec<AbGroup> = r.levels.iter().map(|l| AbGroup::new(l.group.invariant_factors.clone())).collect();
    let maps = r
        .transitions
        .iter()
        .map(|t| AbHom::from_dense(objects[t.source].clone(), objects[t.target].clone(), &t.matrix))
        .collect::<hocolim::Result<Vec<_>>>()?;
    Tower::new(objects, maps)
}

pub fn limit_report(v: &LimResult) -> LimitReport {
    match v {
        LimResult::Stable { value, index } => {
            LimitReport { kind: "stable".into(), value: Some(GroupReport::of(value)), stabilization_index: Some(*index), eventual_images: None }
        }
        LimResult::Pro { eventual_images, effective_lim } => LimitReport {
            kind: "pro".into(),
            value: effective_lim.as_ref().map(GroupReport::of),
            stabilization_index: None,
            eventual_images: Some(eventual_images.iter().map(GroupReport::of).collect()),
        },
    }
}

pub fn homology_report(c: &ContinuousHomology) -> HomologyReport {
    HomologyReport {
        degree: c.degree,
        tower: tower_report(&c.tower.tower),
        limit: limit_report(&c.value),
        lim1: GroupReport::of(&c.lim1),
        window: c.window,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct E2Report {
    pub p: usize,
    pub q: usize,
    pub bicomplex: HomologyReport,
    pub profinite: HomologyReport,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StabilityJson {
    pub working_level: usize,
    pub compared_with: Option<usize>,
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrbitReport {
    pub requested_depth: usize,
    pub working_depth: usize,
    pub p_max: usize,
    pub degrees: Vec<HomologyReport>,
    pub e2: Vec<E2Report>,
    pub stability: StabilityJson,
    pub pages: Option<PagesReport>,
}

pub fn orbit_report(o: &OrbitHomology, lo: usize) -> OrbitReport {
    OrbitReport {
        requested_depth: o.requested_depth,
        working_depth: o.working_depth(),
        p_max: o.p_max,
        degrees: o.degrees.iter().skip(lo).map(homology_report).collect(),
        e2: o
            .e2
            .iter()
            .map(|e| E2Report {
                p: e.p,
                q: e.q,
                bicomplex: homology_report(&e.bicomplex),
                profinite: homology_report(&e.profinite),
                agrees: e.agrees(),
            })
            .collect(),
        stability: StabilityJson {
            working_level: o.stability.working_level,
            compared_with: o.stability.compared_with,
            stable: o.stability.is_stable(),
        },
        pages: o.pages.as_ref().map(pages_report),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DifferentialReport {
    pub p: usize,
    pub q: usize,
    pub target: [usize; 2],
    pub matrix: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PageReport {
    pub r: usize,
    /// `entries[p][q]`; `null` outside the computed range.
    pub entries: Vec<Vec<Option<String>>>,
    pub nonzero_differentials: Vec<DifferentialReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub degree: usize,
    pub graded_free_rank: usize,
    pub graded_torsion_order: String,
    pub total: GroupReport,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PagesReport {
    pub route: String,
    pub reliable_degree: Option<usize>,
    pub collapse_page: usize,
    pub pages: Vec<PageReport>,
    pub e_infinity: Vec<Vec<Option<String>>>,
    pub convergence: Vec<ConvergenceReport>,
}

fn grid(g: &[Vec<Option<FinAb>>]) -> Vec<Vec<Option<String>>> {
    g.iter().map(|c| c.iter().map(|e| e.as_ref().map(show)).collect()).collect()
}

pub fn pages_report(s: &SpectralPages) -> PagesReport {
    let pages = s
        .pages
        .iter()
        .map(|pg| {
            let mut nonzero = Vec::new();
            for (p, col) in pg.differentials.iter().enumerate() {
                for (q, d) in col.iter().enumerate() {
                    if let Some(d) = d.as_ref().filter(|d| !d.is_zero()) {
                        nonzero.push(DifferentialReport { p, q, target: [p - pg.r, q + pg.r - 1], matrix: d.to_dense() });
                    }
                }
            }
            PageReport { r: pg.r, entries: grid(&pg.entries), nonzero_differentials: nonzero }
        })
        .collect();
    PagesReport {
        route: match s.route {
            Route::Support => "support".into(),
            Route::Filtration => "filtration".into(),
        },
        reliable_degree: s.reliable,
        collapse_page: s.collapse_page,
        pages,
        e_infinity: grid(&s.e_infinity),
        convergence: s
            .convergence
            .iter()
            .map(|c| ConvergenceReport {
                degree: c.degree,
                graded_free_rank: c.graded.0,
                graded_torsion_order: c.graded.1.to_string(),
                total: GroupReport::of(&c.total),
                agrees: c.agrees,
            })
            .collect(),
    }
}
