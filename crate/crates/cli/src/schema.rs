//! Input documents (JSON) and their conversion into validated library objects.

use hocolim::abelian::{AbGroup, AbHom};
use hocolim::gmod::{make_module, module_tower, GModule};
use hocolim::groups::{from_permutations, group_tower, make_group, FiniteGroup, GroupTower, QuotientMap};
use hocolim::orbit::{Bicomplex, EquivariantComplex, OrbitInput};
use hocolim::profinite::{validate_tower_pair, TowerPair};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicomplex: Option<BicomplexSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
    /// Element indices; only with `table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub invariants: Vec<u64>,
    /// One matrix per group generator; absent means the trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Matrix>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub quotients: Vec<Vec<usize>>,
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub module_maps: Vec<Matrix>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub differentials: Vec<Matrix>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub quotients: Vec<Vec<usize>>,
    pub complexes: Vec<ComplexSpec>,
    #[serde(default)]
    pub chain_maps: Vec<Vec<Matrix>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BicomplexSpec {
    /// `groups[p][q]`: orders of the cyclic generators of `B_{p,q}`.
    pub groups: Vec<Vec<Vec<u64>>>,
    /// `horizontal[p-1][q] : B_{p,q} -> B_{p-1,q}`.
    #[serde(default)]
    pub horizontal: Vec<Vec<Matrix>>,
    /// `vertical[p][q-1] : B_{p,q} -> B_{p,q-1}`.
    #[serde(default)]
    pub vertical: Vec<Vec<Matrix>>,
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Schema { path, reason: e.into_inner().to_string() }
    })
}

fn validation(path: impl Into<String>) -> impl FnOnce(hocolim::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Validation { path, source }
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> CliError {
    CliError::Schema { path: path.into(), reason: reason.into() }
}

pub fn build_group(spec: &GroupSpec, path: &str) -> Result<FiniteGroup, CliError> {
    let given = [spec.cyclic.is_some(), spec.table.is_some(), spec.permutations.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(schema(path, "exactly one of `cyclic`, `table`, `permutations` is required"));
    }
    if spec.generators.is_some() && spec.table.is_none() {
        return Err(schema(format!("{path}.generators"), "`generators` only applies to `table`"));
    }
    if let Some(n) = spec.cyclic {
        if n == 0 {
            return Err(schema(format!("{path}.cyclic"), "order must be positive"));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    if let Some(perms) = &spec.permutations {
        let degree = perms.first().map_or(0, Vec::len);
        for (k, p) in perms.iter().enumerate() {
            if p.iter().enumerate().all(|(i, &x)| i == x) {
                return Err(schema(format!("{path}.permutations[{k}]"), "identity permutation as a generator"));
            }
        }
        return from_permutations(degree, perms).map_err(validation(format!("{path}.permutations")));
    }
    let table = spec.table.as_ref().unwrap();
    let g = make_group(table).map_err(validation(format!("{path}.table")))?;
    match &spec.generators {
        Some(gens) => g.with_generators(gens.clone()).map_err(validation(format!("{path}.generators"))),
        None => Ok(g),
    }
}

pub fn build_module(group: &FiniteGroup, spec: &ModuleSpec, path: &str) -> Result<GModule, CliError> {
    if spec.invariants.contains(&0) {
        return Err(schema(format!("{path}.invariants"), "modules are finite; 0 is not allowed"));
    }
    let a = AbGroup::new(spec.invariants.clone());
    match &spec.action {
        None => GModule::trivial(group, a).map_err(validation(path)),
        Some(mats) => make_module(group, a, mats).map_err(validation(format!("{path}.action"))),
    }
}

fn build_hom(source: &AbGroup, target: &AbGroup, m: &Matrix, path: &str) -> Result<AbHom, CliError> {
    AbHom::from_dense(source.clone(), target.clone(), m).map_err(validation(path))
}

fn build_group_tower(groups: &[GroupSpec], quotients: &[Vec<usize>], path: &str) -> Result<GroupTower, CliError> {
    if groups.is_empty() {
        return Err(schema(format!("{path}.groups"), "a tower needs at least one level"));
    }
    let gs = groups.iter().enumerate().map(|(i, g)| build_group(g, &format!("{path}.groups[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    if quotients.len() + 1 != gs.len() {
        return Err(schema(format!("{path}.quotients"), format!("expected {} maps, found {}", gs.len() - 1, quotients.len())));
    }
    let maps = quotients
        .iter()
        .enumerate()
        .map(|(i, m)| QuotientMap::new(gs[i + 1].clone(), gs[i].clone(), m.clone()).map_err(validation(format!("{path}.quotients[{i}]"))))
        .collect::<Result<Vec<_>, _>>()?;
    group_tower(gs, maps).map_err(validation(format!("{path}.groups")))
}

fn truncated<T: Clone>(v: &[T], depth: Option<usize>, maps: bool) -> Vec<T> {
    match depth {
        Some(d) => v.iter().take(if maps { d.saturating_sub(1) } else { d }).cloned().collect(),
        None => v.to_vec(),
    }
}

pub fn build_tower(spec: &TowerSpec, depth: Option<usize>) -> Result<TowerPair, CliError> {
    let path = "tower";
    let groups = truncated(&spec.groups, depth, false);
    let gt = build_group_tower(&groups, &truncated(&spec.quotients, depth, true), path)?;
    let modules_spec = truncated(&spec.modules, depth, false);
    if modules_spec.len() != gt.depth() {
        return Err(CliError::Validation {
            path: format!("{path}.modules"),
            source: hocolim::Error::DepthMismatch { groups: gt.depth(), other: modules_spec.len() },
        });
    }
    let modules = modules_spec
        .iter()
        .enumerate()
        .map(|(i, m)| build_module(gt.object(i), m, &format!("{path}.modules[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let maps_spec = truncated(&spec.module_maps, depth, true);
    if maps_spec.len() + 1 != modules.len() {
        return Err(schema(format!("{path}.module_maps"), format!("expected {} maps, found {}", modules.len() - 1, maps_spec.len())));
    }
    let homs = maps_spec
        .iter()
        .enumerate()
        .map(|(i, m)| build_hom(modules[i + 1].abgroup(), modules[i].abgroup(), m, &format!("{path}.module_maps[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mt = module_tower(&gt, modules, homs).map_err(validation(format!("{path}.module_maps")))?;
    validate_tower_pair(&gt, &mt).map_err(validation(path))
}

pub fn build_orbit(spec: &OrbitSpec, depth: Option<usize>) -> Result<OrbitInput, CliError> {
    let path = "orbit";
    let gt = build_group_tower(&truncated(&spec.groups, depth, false), &truncated(&spec.quotients, depth, true), path)?;
    let cs = truncated(&spec.complexes, depth, false);
    if cs.len() != gt.depth() {
        return Err(CliError::Validation {
            path: format!("{path}.complexes"),
            source: hocolim::Error::DepthMismatch { groups: gt.depth(), other: cs.len() },
        });
    }
    let mut levels = Vec::with_capacity(cs.len());
    for (i, c) in cs.iter().enumerate() {
        let cp = format!("{path}.complexes[{i}]");
        if c.modules.is_empty() {
            return Err(schema(format!("{cp}.modules"), "a complex needs at least one module"));
        }
        let g = gt.object(i);
        let modules =
            c.modules.iter().enumerate().map(|(q, m)| build_module(g, m, &format!("{cp}.modules[{q}]"))).collect::<Result<Vec<_>, _>>()?;
        if c.differentials.len() + 1 != modules.len() {
            return Err(schema(format!("{cp}.differentials"), format!("expected {} maps, found {}", modules.len() - 1, c.differentials.len())));
        }
        let diffs = c
            .differentials
            .iter()
            .enumerate()
            .map(|(k, m)| build_hom(modules[k + 1].abgroup(), modules[k].abgroup(), m, &format!("{cp}.differentials[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        levels.push(EquivariantComplex::new(g, modules, diffs).map_err(validation(cp))?);
    }
    let maps_spec = truncated(&spec.chain_maps, depth, true);
    if maps_spec.len() + 1 != levels.len() {
        return Err(schema(format!("{path}.chain_maps"), format!("expected {} chain maps, found {}", levels.len() - 1, maps_spec.len())));
    }
    let mut transitions = Vec::with_capacity(maps_spec.len());
    for (i, fs) in maps_spec.iter().enumerate() {
        let (src, tgt) = (&levels[i + 1], &levels[i]);
        if fs.len() != src.top() + 1 {
            return Err(schema(format!("{path}.chain_maps[{i}]"), format!("expected {} matrices, found {}", src.top() + 1, fs.len())));
        }
        let homs = fs
            .iter()
            .enumerate()
            .map(|(q, m)| build_hom(src.module(q).abgroup(), tgt.module(q).abgroup(), m, &format!("{path}.chain_maps[{i}][{q}]")))
            .collect::<Result<Vec<_>, _>>()?;
        transitions.push(homs);
    }
    OrbitInput::new(&gt, levels, transitions).map_err(validation(path))
}

pub fn build_bicomplex(spec: &BicomplexSpec) -> Result<Bicomplex, CliError> {
    let path = "bicomplex";
    let groups: Vec<Vec<AbGroup>> = spec.groups.iter().map(|c| c.iter().map(|o| AbGroup::new(o.clone())).collect()).collect();
    let cols = groups.len();
    let rows = groups.first().map_or(0, Vec::len);
    if cols == 0 || rows == 0 || groups.iter().any(|c| c.len() != rows) {
        return Err(schema(format!("{path}.groups"), "groups must be a non-empty rectangular grid"));
    }
    if spec.horizontal.len() != cols - 1 || spec.horizontal.iter().any(|c| c.len() != rows) {
        return Err(schema(format!("{path}.horizontal"), format!("expected {} columns of {rows} matrices", cols - 1)));
    }
    if spec.vertical.len() != cols || spec.vertical.iter().any(|c| c.len() != rows - 1) {
        return Err(schema(format!("{path}.vertical"), format!("expected {cols} columns of {} matrices", rows - 1)));
    }
    let mut horizontal = Vec::with_capacity(cols.saturating_sub(1));
    for (k, col) in spec.horizontal.iter().enumerate() {
        let p = k + 1;
        horizontal.push(
            col.iter()
                .enumerate()
                .map(|(q, m)| build_hom(&groups[p][q], &groups[p - 1][q], m, &format!("{path}.horizontal[{k}][{q}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let mut vertical = Vec::with_capacity(cols);
    for (p, col) in spec.vertical.iter().enumerate() {
        vertical.push(
            col.iter()
                .enumerate()
                .map(|(k, m)| build_hom(&groups[p][k + 1], &groups[p][k], m, &format!("{path}.vertical[{p}][{k}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Bicomplex::new(groups, horizontal, vertical).map_err(validation(path))
}
