//! Batch front end: read a JSON description, run one computation, print a table or a
//! structured report.

pub mod report;
pub mod schema;

use std::fmt::Write as _;
use std::path::PathBuf;

use hocolim::abelian::LimResult;
use hocolim::abelian::tower::DEFAULT_WINDOW;
use hocolim::bar::{bar_homology_range, BarOptions, DEFAULT_CAP};
use hocolim::orbit::{em_orbit_homology, orbit_bicomplex, orbit_homology, ss_pages, OrbitInput, OrbitOptions, SpectralPages};
use hocolim::profinite::{continuous_homology_range, ContinuousHomology};
use sha2::{Digest, Sha256};

use report::{DegreeGroup, GroupReport, InputInfo, Parameters, Report, Verdicts, FORMAT};
use schema::Document;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("invalid input at {path}: {source}")]
    Validation { path: String, source: hocolim::Error },
    #[error("{0}")]
    Compute(hocolim::Error),
}

pub mod exit {
    pub const IO: i32 = 1;
    pub const SCHEMA: i32 = 10;
    pub const VALIDATION: i32 = 11;
    pub const SIZE_OVERFLOW: i32 = 12;
    pub const E2_MISMATCH: i32 = 13;
    pub const COLLAPSE_VIOLATION: i32 = 14;
    pub const INTERNAL: i32 = 70;
}

fn core_code(e: &hocolim::Error) -> i32 {
    use hocolim::Error as E;
    match e {
        E::SizeOverflow { .. } | E::LevelOverflow { .. } => exit::SIZE_OVERFLOW,
        E::E2Mismatch { .. } => exit::E2_MISMATCH,
        E::CollapseViolation { .. } => exit::COLLAPSE_VIOLATION,
        E::Internal(_) => exit::INTERNAL,
        _ => exit::VALIDATION,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Schema { .. } => exit::SCHEMA,
            CliError::Validation { source, .. } | CliError::Compute(source) => core_code(source),
        }
    }
}

impl From<hocolim::Error> for CliError {
    fn from(e: hocolim::Error) -> Self {
        CliError::Compute(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    GroupHomology,
    ContinuousHomology,
    Orbit,
    EmOrbit,
    SsPages,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroupHomology => "group-homology",
            Command::ContinuousHomology => "continuous-homology",
            Command::Orbit => "orbit",
            Command::EmOrbit => "em-orbit",
            Command::SsPages => "ss-pages",
        }
    }

    fn default_degrees(self) -> (usize, usize) {
        match self {
            Command::GroupHomology => (0, 3),
            _ => (0, 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    pub degrees: Option<(usize, usize)>,
    pub depth: Option<usize>,
    pub cap: u64,
    pub moore: bool,
    pub pages: usize,
    pub format: Format,
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        JobSpec { command, input: input.into(), degrees: None, depth: None, cap: DEFAULT_CAP, moore: false, pages: 3, format: Format::Table }
    }

    fn bar(&self) -> BarOptions {
        let b = if self.moore { BarOptions::moore() } else { BarOptions::default() };
        b.with_cap(self.cap)
    }
}

/// `N` or `A..B` (inclusive).
pub fn parse_degrees(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad degree `{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty degree range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

struct Outcome {
    result: serde_json::Value,
    verdicts: Verdicts,
    table: String,
}

/// Runs a job and renders its output.
pub fn run(job: &JobSpec) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&job.input)
        .map_err(|e| CliError::Io { path: job.input.display().to_string(), reason: e.to_string() })?;
    run_text(job, &text)
}

/// As [`run`], on a document already in memory.
pub fn run_text(job: &JobSpec, text: &str) -> Result<String, CliError> {
    if job.cap == 0 {
        return Err(CliError::Schema { path: "--cap".into(), reason: "cap must be positive".into() });
    }
    if job.depth == Some(0) {
        return Err(CliError::Schema { path: "--depth".into(), reason: "depth must be positive".into() });
    }
    let doc = schema::parse_document(text)?;
    let (lo, hi) = job.degrees.unwrap_or_else(|| job.command.default_degrees());
    let out = match job.command {
        Command::GroupHomology => group_homology(job, &doc, lo, hi)?,
        Command::ContinuousHomology => continuous(job, &doc, lo, hi)?,
        Command::Orbit => orbit(job, &doc, lo, hi)?,
        Command::EmOrbit => em_orbit(job, &doc, lo, hi)?,
        Command::SsPages => pages(job, &doc, hi)?,
    };
    Ok(match job.format {
        Format::Table => out.table,
        Format::Structured => {
            let report = Report {
                format: FORMAT.into(),
                command: job.command.name().into(),
                input: InputInfo { path: job.input.display().to_string(), sha256: hex::encode(Sha256::digest(text.as_bytes())) },
                parameters: Parameters {
                    degrees: [lo, hi],
                    depth: job.depth,
                    cap: job.cap,
                    normalized: !job.moore,
                    pages: job.pages,
                    window: DEFAULT_WINDOW,
                },
                result: out.result,
                verdicts: out.verdicts,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s
        }
    })
}

fn missing(key: &str, command: Command) -> CliError {
    CliError::Schema { path: key.into(), reason: format!("`{}` needs a `{key}` entry", command.name()) }
}

fn json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn group_homology(job: &JobSpec, doc: &Document, lo: usize, hi: usize) -> Result<Outcome, CliError> {
    let g = schema::build_group(doc.group.as_ref().ok_or_else(|| missing("group", job.command))?, "group")?;
    let m = schema::build_module(&g, doc.module.as_ref().ok_or_else(|| missing("module", job.command))?, "module")?;
    let hs = bar_homology_range(&m, lo, hi, job.bar())?;
    let rows: Vec<DegreeGroup> = hs.iter().map(|h| DegreeGroup { degree: h.degree(), group: GroupReport::of(h.group()) }).collect();
    let mut table = String::new();
    for r in &rows {
        writeln!(table, "H_{} = {}", r.degree, r.group.name).unwrap();
    }
    Ok(Outcome { result: json(&rows), verdicts: Verdicts::default(), table })
}

fn limit_row(label: &str, c: &ContinuousHomology) -> String {
    match &c.value {
        LimResult::Stable { value, index } => format!("{label}={}: {} (stable at depth {})", c.degree, report::show(value), index + 1),
        LimResult::Pro { effective_lim: Some(v), .. } => {
            format!("{label}={}: {} (limit of eventual images; transitions not isomorphisms)", c.degree, report::show(v))
        }
        LimResult::Pro { effective_lim: None, .. } => {
            let levels: Vec<String> = c.tower.values().iter().map(report::show).collect();
            format!("{label}={}: undetermined (pro-object: {})", c.degree, levels.join(" <- "))
        }
    }
}

fn continuous_outcome(cs: &[ContinuousHomology]) -> Outcome {
    let mut table = String::new();
    for c in cs {
        writeln!(table, "{}", limit_row("p", c)).unwrap();
    }
    let lim1 = cs.iter().all(|c| c.lim1.is_zero());
    writeln!(table, "lim^1 = 0: {}", if lim1 { "yes" } else { "no" }).unwrap();
    let reports: Vec<_> = cs.iter().map(report::homology_report).collect();
    Outcome {
        result: json(&reports),
        verdicts: Verdicts { conclusive: Some(cs.iter().all(ContinuousHomology::is_conclusive)), lim1_vanishes: Some(lim1), ..Default::default() },
        table,
    }
}

fn continuous(job: &JobSpec, doc: &Document, lo: usize, hi: usize) -> Result<Outcome, CliError> {
    let pair = schema::build_tower(doc.tower.as_ref().ok_or_else(|| missing("tower", job.command))?, job.depth)?;
    let cs = continuous_homology_range(&pair, lo, hi, job.bar())?;
    Ok(continuous_outcome(&cs))
}

fn orbit_input(job: &JobSpec, doc: &Document) -> Result<OrbitInput, CliError> {
    if let Some(o) = &doc.orbit {
        return schema::build_orbit(o, job.depth);
    }
    if let Some(t) = &doc.tower {
        let pair = schema::build_tower(t, job.depth)?;
        return Ok(OrbitInput::eilenberg_mac_lane(&pair)?);
    }
    Err(missing("orbit", job.command))
}

fn orbit_table(o: &hocolim::orbit::OrbitHomology, lo: usize, table: &mut String) {
    for c in o.degrees.iter().skip(lo) {
        writeln!(table, "{}", limit_row("n", c)).unwrap();
    }
    writeln!(table, "working depth: {} of {}", o.working_depth(), o.requested_depth).unwrap();
    writeln!(table, "E_2 cross-check: {}", if o.e2_agrees() { "agree" } else { "disagree" }).unwrap();
    match &o.pages {
        Some(p) => writeln!(table, "{}", collapse_line(p)).unwrap(),
        None => writeln!(table, "pages: not computed (filtration cap exceeded)").unwrap(),
    }
}

fn orbit_verdicts(o: &hocolim::orbit::OrbitHomology) -> Verdicts {
    Verdicts {
        conclusive: Some(o.degrees.iter().all(ContinuousHomology::is_conclusive)),
        lim1_vanishes: Some(o.degrees.iter().all(|c| c.lim1.is_zero())),
        e2_agrees: Some(o.e2_agrees()),
        stable_at_working_level: Some(o.stability.is_stable()),
        collapses_at_e2: o.pages.as_ref().map(SpectralPages::collapses_at_e2),
        converges: o.pages.as_ref().map(SpectralPages::converges),
        ..Default::default()
    }
}

fn orbit_options(job: &JobSpec) -> OrbitOptions {
    OrbitOptions { bar: job.bar(), pages: job.pages }
}

fn orbit(job: &JobSpec, doc: &Document, lo: usize, hi: usize) -> Result<Outcome, CliError> {
    let input = orbit_input(job, doc)?;
    let o = orbit_homology(&input, hi, orbit_options(job))?;
    let mut table = String::new();
    orbit_table(&o, lo, &mut table);
    Ok(Outcome { result: json(&report::orbit_report(&o, lo)), verdicts: orbit_verdicts(&o), table })
}

fn em_orbit(job: &JobSpec, doc: &Document, lo: usize, hi: usize) -> Result<Outcome, CliError> {
    let pair = schema::build_tower(doc.tower.as_ref().ok_or_else(|| missing("tower", job.command))?, job.depth)?;
    let r = em_orbit_homology(&pair, hi, orbit_options(job))?;
    let mut table = String::new();
    orbit_table(&r.orbit, lo, &mut table);
    writeln!(table, "collapse: orbit homology equals continuous homology in degrees {lo}..{hi}").unwrap();
    let mut verdicts = orbit_verdicts(&r.orbit);
    verdicts.collapse_holds = Some(true);
    let result = serde_json::json!({
        "orbit": report::orbit_report(&r.orbit, lo),
        "continuous": r.continuous.iter().skip(lo).map(report::homology_report).collect::<Vec<_>>(),
    });
    Ok(Outcome { result, verdicts, table })
}

fn collapse_line(p: &SpectralPages) -> String {
    if p.collapses_at_e2() {
        "collapses at E_2".into()
    } else {
        format!("collapses at E_{}", p.collapse_page)
    }
}

fn pages(job: &JobSpec, doc: &Document, hi: usize) -> Result<Outcome, CliError> {
    let b = match &doc.bicomplex {
        Some(spec) => schema::build_bicomplex(spec)?,
        None => {
            let input = orbit_input(job, doc)?;
            orbit_bicomplex(&input, input.depth() - 1, hi + 1, job.bar())?
        }
    };
    let s = ss_pages(&b, job.pages)?;
    let mut table = String::new();
    for pg in s.pages.iter().filter(|pg| pg.r <= job.pages.max(2)) {
        writeln!(table, "E_{}:", pg.r).unwrap();
        write_grid(&mut table, &pg.entries);
    }
    writeln!(table, "E_inf:").unwrap();
    write_grid(&mut table, &s.e_infinity);
    writeln!(table, "{}", collapse_line(&s)).unwrap();
    for c in &s.convergence {
        writeln!(table, "H_{}(Tot) = {} ({})", c.degree, report::show(&c.total), if c.agrees { "matches E_inf" } else { "does not match E_inf" }).unwrap();
    }
    let verdicts = Verdicts { collapses_at_e2: Some(s.collapses_at_e2()), converges: Some(s.converges()), ..Default::default() };
    Ok(Outcome { result: json(&report::pages_report(&s)), verdicts, table })
}

/// Rows from `q = Q` down to `0`, columns `p = 0..=P`.
fn write_grid(out: &mut String, g: &[Vec<Option<hocolim::abelian::FinAb>>]) {
    let rows = g.first().map_or(0, Vec::len);
    for q in (0..rows).rev() {
        let cells: Vec<String> = g.iter().map(|c| c[q].as_ref().map_or(".".to_string(), report::show)).collect();
        writeln!(out, "  q={q}: {}", cells.join(" | ")).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("3"), Ok((3, 3)));
        assert_eq!(parse_degrees("0..2"), Ok((0, 2)));
        assert_eq!(parse_degrees("1..=4"), Ok((1, 4)));
        assert!(parse_degrees("3..1").is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            exit::IO,
            exit::SCHEMA,
            exit::VALIDATION,
            exit::SIZE_OVERFLOW,
            exit::E2_MISMATCH,
            exit::COLLAPSE_VIOLATION,
            exit::INTERNAL,
        ];
        let mut sorted = codes.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
        let e = CliError::Validation { path: "x".into(), source: hocolim::Error::SizeOverflow { size: 2, cap: 1 } };
        assert_eq!(e.exit_code(), exit::SIZE_OVERFLOW);
    }
}
