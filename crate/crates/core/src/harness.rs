//! Grid drivers behind the command-line tool: identity verification, sector
//! census, K-graph dumps and truncated `q`-series checks, with deterministic
//! JSON reports and a human-readable summary table.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::branching::{
    self, bosonic_b, corollary_check, fermionic_f, verify_identity, BranchingError, Verdict,
};
use crate::kgraphs::{brute_f, graph_from_path, KGraph, KGraphError};
use crate::paths::{
    brute_b, enumerate_paths, ground_state_path, IntegerSequence, Path, PathClass, PathError,
};
use crate::qseries::QPoly;
use crate::sectors::{self, parent_from_label, reduce, ParentLabel, SectorError};
use crate::Rat;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Branching(#[from] BranchingError),
    #[error(transparent)]
    Sector(#[from] SectorError),
    #[error(transparent)]
    KGraph(#[from] KGraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Ranks with their maximal lengths, optional class filters and run knobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// `(n, l_max)` pairs.
    pub ranks: Vec<(usize, usize)>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    /// Truncation order for the `q`-series checks; per-rank default if `None`.
    pub order: Option<Rat>,
    /// Largest `L` tried while waiting for the fermionic sum to stabilize.
    pub ceiling: usize,
    /// Worker threads; rayon's default if `None`.
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    /// `n ∈ {2, 3}` up to `L = 10` and `n = 4` up to `L = 6`.
    fn default() -> Self {
        Self {
            ranks: vec![(2, 10), (3, 10), (4, 6)],
            i: None,
            j: None,
            k: None,
            order: None,
            ceiling: 64,
            jobs: None,
        }
    }
}

impl RunConfig {
    pub fn with_ranks(ranks: Vec<(usize, usize)>) -> Self {
        Self {
            ranks,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.ranks.is_empty() {
            return Err(HarnessError::Config("no ranks selected".into()));
        }
        if let Some(&(n, _)) = self.ranks.iter().find(|(n, _)| *n < 2) {
            return Err(HarnessError::Config(format!("rank n = {n} is below 2")));
        }
        if self.jobs == Some(0) {
            return Err(HarnessError::Config("--jobs must be positive".into()));
        }
        if self.order.is_some_and(|o| o < Rat::from_integer(0)) {
            return Err(HarnessError::Config("--order must be non-negative".into()));
        }
        Ok(())
    }

    /// Order used for rank `n` when none is configured.
    pub fn order_for(&self, n: usize) -> Rat {
        self.order.unwrap_or_else(|| {
            Rat::from_integer(match n {
                2 => 8,
                3 => 6,
                _ => 3,
            })
        })
    }

    fn keeps(filter: Option<usize>, value: usize, n: usize) -> bool {
        filter.is_none_or(|f| f % n == value)
    }

    /// Sorted `(n, L, i, j, k)` cells with `i <= j`.
    pub fn cells(&self) -> Vec<(usize, usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for &(n, lmax) in &self.ranks {
            for length in 0..=lmax {
                for i in 0..n {
                    for j in i..n {
                        for k in 0..n {
                            if Self::keeps(self.i, i, n)
                                && Self::keeps(self.j, j, n)
                                && Self::keeps(self.k, k, n)
                            {
                                out.push((n, length, i, j, k));
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn pool(&self) -> Result<rayon::ThreadPool, HarnessError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(jobs) = self.jobs {
            builder = builder.num_threads(jobs);
        }
        builder
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
    }
}

/// A `q`-exponent as `[numerator, denominator]`.
pub type Exponent = (i64, i64);

fn exponent(r: Rat) -> Exponent {
    (*r.numer(), *r.denom())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleChecks {
    /// Closed bosonic form equals the energy sum over paths.
    pub bosonic: bool,
    /// Closed fermionic form equals the area sum over K-graphs.
    pub fermionic: bool,
    /// The prefactor turns the bosonic form into the fermionic one.
    pub bridge: bool,
}

impl OracleChecks {
    pub fn all(&self) -> bool {
        self.bosonic && self.fermionic && self.bridge
    }
}

/// One `(n, L, i, j, k)` cell of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub n: usize,
    pub length: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub path_count: usize,
    /// `F_L` in fermionic form.
    pub lhs: QPoly,
    /// Prefactored Weyl sum.
    pub rhs: QPoly,
    pub brute_b_min_exponent: Option<Exponent>,
    pub oracles: OracleChecks,
    pub verdict: Verdict,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CellRecord {
    pub fn passed(&self) -> bool {
        self.oracles.all() && self.verdict.is_equal()
    }
}

/// Runs every check on one cell. The fermionic side of a class `(i, j, k)`
/// is evaluated on the rotated class `(0, j−i, k−i)`.
pub fn verify_cell(
    n: usize,
    length: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<CellRecord, HarnessError> {
    let start = Instant::now();
    let class = PathClass::new(n, i as i64, j as i64, k as i64)?;
    let (jr, kr) = ((j + n - i) % n, (k + n - i) % n);
    let rotated = PathClass::new(n, 0, jr as i64, kr as i64)?;

    let brute = brute_b(&class, length);
    let bosonic = bosonic_b(&class, length)?;
    let fermionic = fermionic_f(n, length, jr, kr)?;
    let bridged = branching::b_to_f(n, jr, kr, &bosonic_b(&rotated, length)?)?;
    let identity = verify_identity(n, length, jr, kr)?;

    let oracles = OracleChecks {
        bosonic: bosonic == brute,
        fermionic: fermionic == brute_f(&class, length),
        bridge: bridged == fermionic,
    };
    Ok(CellRecord {
        n,
        length,
        i,
        j,
        k,
        path_count: enumerate_paths(&class, length).len(),
        brute_b_min_exponent: brute.min_exponent().map(exponent),
        lhs: identity.lhs,
        rhs: identity.rhs,
        oracles,
        verdict: identity.verdict,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorRecord {
    pub m: Vec<usize>,
    pub ell: Vec<i64>,
    pub count: usize,
    pub observed: QPoly,
    pub predicted: QPoly,
    pub holds: bool,
}

/// The sector census of one `(n, L, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub n: usize,
    pub length: usize,
    pub k: usize,
    pub path_count: usize,
    pub sector_total: usize,
    pub total: QPoly,
    pub sectors: Vec<SectorRecord>,
    pub holds: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn census_record(n: usize, length: usize, k: usize) -> Result<CensusRecord, HarnessError> {
    let start = Instant::now();
    let census = sectors::sector_census(n, length, k)?;
    let holds = census.holds();
    let sectors: Vec<SectorRecord> = census
        .rows
        .into_iter()
        .map(|row| SectorRecord {
            holds: row.holds(),
            m: row.label.m().to_vec(),
            ell: row.ell,
            count: row.count,
            observed: row.observed,
            predicted: row.predicted,
        })
        .collect();
    Ok(CensusRecord {
        n,
        length,
        k: census.k,
        path_count: census.path_count,
        sector_total: sectors.iter().map(|s| s.count).sum(),
        total: census.total,
        sectors,
        holds,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryRecord {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub order: Exponent,
    pub stable_length: usize,
    pub fermionic: QPoly,
    pub theta: QPoly,
    pub limit_agrees: bool,
    pub verdict: Verdict,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CorollaryRecord {
    pub fn passed(&self) -> bool {
        self.limit_agrees && self.verdict.is_equal()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Body {
    Verify { cells: Vec<CellRecord> },
    Census { censuses: Vec<CensusRecord> },
    Corollary { checks: Vec<CorollaryRecord> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cells: usize,
    pub failures: usize,
    /// Records whose identity verdict is not `equal`.
    pub identity_failures: usize,
    pub min_exponent: Option<Exponent>,
    pub max_exponent: Option<Exponent>,
    /// Smallest exponent seen in any energy sum over paths.
    pub brute_b_min_exponent: Option<Exponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: Body,
    pub summary: Summary,
}

impl Report {
    fn new(body: Body) -> Self {
        let summary = summarize(&body);
        Self {
            schema_version: SCHEMA_VERSION,
            body,
            summary,
        }
    }

    pub fn is_success(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes the JSON report to `out`, or to stdout when `out` is `None`.
    pub fn write_json(&self, out: Option<&std::path::Path>) -> Result<(), HarnessError> {
        let text = self.to_json()?;
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(())
    }

    /// Human-readable table, one line per record, with timings.
    pub fn table(&self) -> String {
        let mut s = String::new();
        match &self.body {
            Body::Verify { cells } => {
                let _ = writeln!(
                    s,
                    "{:>2} {:>3} {:>2} {:>2} {:>2} {:>7} {:>4} {:>4} {:>6}  {:<10} {:>9}",
                    "n", "L", "i", "j", "k", "paths", "B", "F", "bridge", "identity", "ms"
                );
                for c in cells {
                    let _ = writeln!(
                        s,
                        "{:>2} {:>3} {:>2} {:>2} {:>2} {:>7} {:>4} {:>4} {:>6}  {:<10} {:>9.2}",
                        c.n,
                        c.length,
                        c.i,
                        c.j,
                        c.k,
                        c.path_count,
                        mark(c.oracles.bosonic),
                        mark(c.oracles.fermionic),
                        mark(c.oracles.bridge),
                        c.verdict.to_string(),
                        ms(c.elapsed)
                    );
                }
            }
            Body::Census { censuses } => {
                let _ = writeln!(
                    s,
                    "{:>2} {:>3} {:>2} {:>7} {:>7} {:>5} {:>9}",
                    "n", "L", "k", "paths", "sectors", "law", "ms"
                );
                for c in censuses {
                    let _ = writeln!(
                        s,
                        "{:>2} {:>3} {:>2} {:>7} {:>7} {:>5} {:>9.2}",
                        c.n,
                        c.length,
                        c.k,
                        c.path_count,
                        c.sectors.len(),
                        mark(c.holds),
                        ms(c.elapsed)
                    );
                    for sec in &c.sectors {
                        let m: Vec<String> = sec.m.iter().map(ToString::to_string).collect();
                        let _ = writeln!(
                            s,
                            "      m=({}) count={} {} {}",
                            m.join(","),
                            sec.count,
                            mark(sec.holds),
                            sec.observed
                        );
                    }
                }
            }
            Body::Corollary { checks } => {
                let _ = writeln!(
                    s,
                    "{:>2} {:>2} {:>2} {:>6} {:>7} {:>6}  {:<10} {:>9}",
                    "n", "j", "k", "order", "stable", "limit", "identity", "ms"
                );
                for c in checks {
                    let _ = writeln!(
                        s,
                        "{:>2} {:>2} {:>2} {:>6} {:>7} {:>6}  {:<10} {:>9.2}",
                        c.n,
                        c.j,
                        c.k,
                        format!("{}/{}", c.order.0, c.order.1),
                        c.stable_length,
                        mark(c.limit_agrees),
                        c.verdict.to_string(),
                        ms(c.elapsed)
                    );
                }
            }
        }
        let sm = &self.summary;
        let _ = writeln!(
            s,
            "records: {}  failures: {}  identity failures: {}",
            sm.cells, sm.failures, sm.identity_failures
        );
        s
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn widen(range: &mut Option<(Rat, Rat)>, p: &QPoly) {
    if let (Some(lo), Some(hi)) = (p.min_exponent(), p.max_exponent()) {
        *range = Some(match *range {
            Some((a, b)) => (a.min(lo), b.max(hi)),
            None => (lo, hi),
        });
    }
}

fn summarize(body: &Body) -> Summary {
    let mut range = None;
    let mut s = Summary::default();
    match body {
        Body::Verify { cells } => {
            s.cells = cells.len();
            s.failures = cells.iter().filter(|c| !c.passed()).count();
            s.identity_failures = cells.iter().filter(|c| !c.verdict.is_equal()).count();
            for c in cells {
                widen(&mut range, &c.lhs);
                widen(&mut range, &c.rhs);
            }
            s.brute_b_min_exponent = cells
                .iter()
                .filter_map(|c| c.brute_b_min_exponent)
                .min_by_key(|&(a, b)| Rat::new(a, b));
        }
        Body::Census { censuses } => {
            s.cells = censuses.len();
            s.failures = censuses.iter().filter(|c| !c.holds).count();
            for c in censuses {
                widen(&mut range, &c.total);
            }
        }
        Body::Corollary { checks } => {
            s.cells = checks.len();
            s.failures = checks.iter().filter(|c| !c.passed()).count();
            s.identity_failures = checks.iter().filter(|c| !c.verdict.is_equal()).count();
            for c in checks {
                widen(&mut range, &c.fermionic);
                widen(&mut range, &c.theta);
            }
        }
    }
    s.min_exponent = range.map(|r| exponent(r.0));
    s.max_exponent = range.map(|r| exponent(r.1));
    s
}

/// Checks every cell of the grid: both closed forms against their brute-force
/// sums, the bosonic-to-fermionic bridge and the polynomial identity.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let cells = cfg.cells();
    let records = cfg.pool()?.install(|| {
        cells
            .par_iter()
            .map(|&(n, l, i, j, k)| verify_cell(n, l, i, j, k))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(Report::new(Body::Verify { cells: records }))
}

/// Sector census of `G_L(2Λ_0, Λ_k)` for every `L <= l_max` and every `k`
/// passing the filter.
pub fn cmd_census(cfg: &RunConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &(n, lmax) in &cfg.ranks {
        for length in 0..=lmax {
            for k in (0..n).filter(|&k| RunConfig::keeps(cfg.k, k, n)) {
                jobs.push((n, length, k));
            }
        }
    }
    jobs.sort_unstable();
    jobs.dedup();
    let records = cfg.pool()?.install(|| {
        jobs.par_iter()
            .map(|&(n, l, k)| census_record(n, l, k))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(Report::new(Body::Census { censuses: records }))
}

/// Truncated check of the `L → ∞` identity for every `(j, k)` passing the
/// filters, per rank, at the configured or default order.
pub fn cmd_corollary(cfg: &RunConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &(n, _) in &cfg.ranks {
        for j in (0..n).filter(|&j| RunConfig::keeps(cfg.j, j, n)) {
            for k in (0..n).filter(|&k| RunConfig::keeps(cfg.k, k, n)) {
                jobs.push((n, j, k));
            }
        }
    }
    jobs.sort_unstable();
    jobs.dedup();
    let records = cfg.pool()?.install(|| {
        jobs.par_iter()
            .map(|&(n, j, k)| {
                let start = Instant::now();
                let out = corollary_check(n, j, k, cfg.order_for(n), cfg.ceiling)?;
                Ok(CorollaryRecord {
                    n,
                    j: out.j,
                    k: out.k,
                    order: out.order,
                    stable_length: out.stable_length,
                    limit_agrees: out.limit_agrees,
                    verdict: out.verdict,
                    fermionic: out.fermionic,
                    theta: out.theta,
                    elapsed: start.elapsed(),
                })
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    })?;
    Ok(Report::new(Body::Corollary { checks: records }))
}

/// Which graphs `cmd_dump` renders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    /// The graph of the path with this step sequence.
    Iota(Vec<usize>),
    /// The parent graph with this label.
    Parent(Vec<usize>),
    /// The ground-state path, whose graph is empty.
    Ground,
    /// Every graph of the class.
    All,
}

fn describe_graph(out: &mut String, g: &KGraph) {
    let pairs: Vec<String> = g
        .matrix()
        .pairs()
        .iter()
        .map(|(w, h)| format!("({w},{h})"))
        .collect();
    let _ = writeln!(out, "matrix: [{}]", pairs.join(" "));
    let _ = writeln!(out, "nodes: {}", g.node_count());
    let heights: Vec<String> = g
        .matrix()
        .column_heights()
        .iter()
        .map(ToString::to_string)
        .collect();
    let _ = writeln!(out, "column heights: ({})", heights.join(","));
    out.push_str(&g.render_ascii());
}

fn describe_path(out: &mut String, p: &Path) -> Result<(), HarnessError> {
    let g = graph_from_path(p);
    let _ = writeln!(out, "iota: {}", p.iota());
    let _ = writeln!(out, "energy: {}", p.energy());
    if p.class().i() == 0 && p.class().j() == 0 {
        let red = reduce(&g)?;
        let _ = writeln!(out, "parent: {}  fill: {}", red.label, red.fill);
    }
    describe_graph(out, &g);
    Ok(())
}

/// Text dump of the selected K-graphs of the class `(Λ_i+Λ_j, Λ_k)` at
/// length `L`.
pub fn cmd_dump(
    n: usize,
    length: usize,
    (i, j, k): (usize, usize, usize),
    selector: &Selector,
) -> Result<String, HarnessError> {
    let class = PathClass::new(n, i as i64, j as i64, k as i64)?;
    let mut out = String::new();
    let _ = writeln!(out, "# {class}, L = {length}");
    match selector {
        Selector::Iota(entries) => {
            let iota = IntegerSequence::new(n, entries.clone())?;
            if iota.length() != length {
                return Err(HarnessError::Config(format!(
                    "sequence has length {}, expected L = {length}",
                    iota.length()
                )));
            }
            describe_path(&mut out, &Path::from_iota(class, iota)?)?;
        }
        Selector::Ground => describe_path(&mut out, &ground_state_path(&class, length))?,
        Selector::Parent(m) => {
            let label = ParentLabel::from_multiplicities(n, m.clone())?;
            let _ = writeln!(out, "parent: {label}  k = {}", label.k());
            describe_graph(&mut out, &parent_from_label(&label, length)?);
        }
        Selector::All => {
            for (idx, p) in enumerate_paths(&class, length).iter().enumerate() {
                let _ = writeln!(out, "\n## graph {idx}");
                describe_path(&mut out, p)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_respect_filters() {
        let mut cfg = RunConfig::with_ranks(vec![(3, 1)]);
        assert_eq!(cfg.cells().len(), 2 * 6 * 3);
        cfg.j = Some(0);
        cfg.k = Some(0);
        assert_eq!(cfg.cells(), vec![(3, 0, 0, 0, 0), (3, 1, 0, 0, 0)]);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(RunConfig::with_ranks(vec![(1, 3)]).validate().is_err());
        assert!(RunConfig::with_ranks(vec![]).validate().is_err());
    }

    #[test]
    fn small_verify_passes() {
        let report = cmd_verify(&RunConfig::with_ranks(vec![(2, 3)])).unwrap();
        assert!(report.is_success(), "{}", report.table());
        assert_eq!(report.summary.cells, 4 * 6);
    }

    #[test]
    fn dump_ground_is_empty() {
        let text = cmd_dump(3, 4, (0, 0, 0), &Selector::Ground).unwrap();
        assert!(text.contains("(empty)"));
    }
}
