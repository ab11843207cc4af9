//! Reproducible experiment driver: runs a tester repeatedly on a generated
//! instance and summarizes the trials.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{verify_certificate, Certificate, Verdict};
use crate::ck::{test_ck_minor_free, test_triangle_plus_edge, CkConfig};
use crate::cycle::{cycle_walker_params, test_cycle_free, test_cycle_free_direct, CycleConfig};
use crate::error::TestError;
use crate::generators::{generate, GenError, Instance, InstanceSpec};
use crate::graph::Graph;
use crate::oracle::{QueryError, QueryOracle};
use crate::pattern::{Pattern, RootedTree};
use crate::tree::{forest_tester_run, star_tester_run, test_pk_minor_free, tree_tester_run, TreeConfig};
use crate::unbounded::{test_cycle_free_unbounded, test_star_unbounded, UnboundedStarConfig};
use crate::walker::{test_2colorable, WalkerConfig};

/// Testers addressable from a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TesterKind {
    /// Cycle-freeness through the `G_tau` subdivision.
    Cycle,
    /// Cycle-freeness through random parity labels.
    CycleDirect,
    /// Bipartiteness of the input itself.
    Bipartite,
    /// `C_k`-minor-freeness.
    Ck,
    /// Freeness of the triangle with a pendant edge.
    TrianglePlusEdge,
    /// `P_k`-minor-freeness.
    Path,
    /// `K_{1,k}`-minor-freeness.
    Star,
    /// Spider-minor-freeness with legs `legs`.
    Tree,
    /// Minor-freeness of a forest of spiders.
    Forest,
    CycleUnbounded,
    StarUnbounded,
}

impl TesterKind {
    pub const ALL: [TesterKind; 11] = [
        TesterKind::Cycle,
        TesterKind::CycleDirect,
        TesterKind::Bipartite,
        TesterKind::Ck,
        TesterKind::TrianglePlusEdge,
        TesterKind::Path,
        TesterKind::Star,
        TesterKind::Tree,
        TesterKind::Forest,
        TesterKind::CycleUnbounded,
        TesterKind::StarUnbounded,
    ];
}

/// Tunable constants of every tester.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Calibration {
    pub cycle: CycleConfig,
    /// Walker constants of the bipartiteness tester.
    pub bipartite: WalkerConfig,
    pub ck_c_eps: Option<f64>,
    pub tree: TreeConfig,
    pub unbounded_star: UnboundedStarConfig,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            cycle: CycleConfig::default(),
            bipartite: WalkerConfig::direct(),
            ck_c_eps: None,
            tree: TreeConfig::default(),
            unbounded_star: UnboundedStarConfig::default(),
        }
    }
}

impl Calibration {
    fn ck(&self) -> CkConfig {
        let base = CkConfig { cycle: self.cycle, ..CkConfig::default() };
        match self.ck_c_eps {
            Some(c_eps) => CkConfig { c_eps, ..base },
            None => base,
        }
    }
}

fn default_k() -> usize {
    3
}

fn default_trials() -> usize {
    100
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub tester: TesterKind,
    /// Cycle length, path length or star size.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Legs of the spider for the tree tester.
    #[serde(default)]
    pub legs: Vec<usize>,
    /// Components of the forest tester, each a spider.
    #[serde(default)]
    pub forest: Vec<Vec<usize>>,
    pub instance: InstanceSpec,
    pub eps: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Total queries allowed per trial.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub calibration: Calibration,
}

impl ExperimentConfig {
    pub fn new(tester: TesterKind, instance: InstanceSpec, eps: f64, trials: usize) -> Self {
        ExperimentConfig {
            tester,
            k: default_k(),
            legs: Vec::new(),
            forest: Vec::new(),
            instance,
            eps,
            trials,
            seed: 0,
            budget: None,
            calibration: Calibration::default(),
        }
    }

    /// The forbidden pattern of the configured tester, if it has one.
    pub fn pattern(&self) -> Option<Pattern> {
        match self.tester {
            TesterKind::Cycle | TesterKind::CycleDirect | TesterKind::CycleUnbounded => Some(Pattern::cycle(3)),
            TesterKind::Bipartite => None,
            TesterKind::Ck => Some(Pattern::cycle(self.k)),
            TesterKind::TrianglePlusEdge => Some(Pattern::triangle_plus_edge()),
            TesterKind::Path => Some(Pattern::path(self.k)),
            TesterKind::Star | TesterKind::StarUnbounded => Some(Pattern::star(self.k)),
            TesterKind::Tree => Some(self.spider().to_pattern()),
            TesterKind::Forest => Some(self.forest_pattern()),
        }
    }

    fn spider(&self) -> RootedTree {
        RootedTree::spider(&self.legs)
    }

    fn forest_pattern(&self) -> Pattern {
        let parts: Vec<Pattern> = self.forest.iter().map(|l| RootedTree::spider(l).to_pattern()).collect();
        Pattern::union(&parts)
    }

    /// Walk length `L` of the cycle tester on `n` vertices.
    pub fn walk_length(&self, n: usize, d: usize) -> usize {
        cycle_walker_params(n, d, self.eps, &self.calibration.cycle).walk_length
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tester failed: {0}")]
    Tester(TestError),
    #[error("rejection certificate failed verification in trial {trial}: {fault}")]
    Unverified { trial: usize, fault: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Outcome column of a trial row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Accept,
    Reject,
    BudgetExhausted,
}

/// One row of the trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub outcome: Outcome,
    /// Present iff the outcome is a rejection.
    pub cert_kind: Option<String>,
    pub cert_size: Option<usize>,
    pub neighbor_queries: u64,
    pub degree_queries: u64,
    pub truncated: bool,
    /// The certificate was checked against the full instance.
    pub verified: Option<bool>,
    /// Microseconds, only filled when timings are requested.
    pub time_us: Option<u64>,
}

impl TrialRecord {
    pub fn total_queries(&self) -> u64 {
        self.neighbor_queries + self.degree_queries
    }
}

/// Five-point summary of a query counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: u64,
    pub p25: u64,
    pub median: u64,
    pub p75: u64,
    pub max: u64,
}

impl Quantiles {
    /// Lower quantiles of the sorted sample; zero for an empty sample.
    pub fn of(values: &[u64]) -> Self {
        if values.is_empty() {
            return Quantiles::default();
        }
        let mut v = values.to_vec();
        v.sort_unstable();
        let at = |num: usize| v[(v.len() - 1) * num / 4];
        Quantiles { min: v[0], p25: at(1), median: at(2), p75: at(3), max: v[v.len() - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub rejects: usize,
    pub budget_exhausted: usize,
    pub truncated: usize,
    pub reject_rate: f64,
    pub neighbor_queries: Quantiles,
    pub total_queries: Quantiles,
    pub max_certificate_size: Option<usize>,
    pub all_verified: bool,
}

impl Summary {
    pub fn from_records(config: &ExperimentConfig, g: &Graph, records: &[TrialRecord]) -> Self {
        let rejects = records.iter().filter(|r| r.outcome == Outcome::Reject).count();
        let nq: Vec<u64> = records.iter().map(|r| r.neighbor_queries).collect();
        let tq: Vec<u64> = records.iter().map(TrialRecord::total_queries).collect();
        Summary {
            config: config.clone(),
            n: g.n(),
            d: g.d(),
            trials: records.len(),
            rejects,
            budget_exhausted: records.iter().filter(|r| r.outcome == Outcome::BudgetExhausted).count(),
            truncated: records.iter().filter(|r| r.truncated).count(),
            reject_rate: if records.is_empty() { 0.0 } else { rejects as f64 / records.len() as f64 },
            neighbor_queries: Quantiles::of(&nq),
            total_queries: Quantiles::of(&tq),
            max_certificate_size: records.iter().filter_map(|r| r.cert_size).max(),
            all_verified: records.iter().all(|r| r.verified != Some(false)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub instance: Instance,
    pub records: Vec<TrialRecord>,
    /// Rejection certificates keyed by trial index.
    pub certificates: Vec<(usize, Certificate)>,
    pub summary: Summary,
}

/// Per-trial generator: stream `trial` of the ChaCha8 sequence keyed by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

struct RunOutput {
    verdict: Verdict,
    truncated: bool,
}

fn run_tester(cfg: &ExperimentConfig, oracle: &mut QueryOracle<'_>, rng: &mut ChaCha8Rng) -> Result<RunOutput, TestError> {
    let cal = &cfg.calibration;
    let plain = |verdict| RunOutput { verdict, truncated: false };
    let eps = cfg.eps;
    Ok(match cfg.tester {
        TesterKind::Cycle => plain(test_cycle_free(oracle, eps, &cal.cycle, rng)?),
        TesterKind::CycleDirect => plain(test_cycle_free_direct(oracle, eps, &cal.cycle, rng)?),
        TesterKind::Bipartite => plain(test_2colorable(oracle, eps, None, &cal.bipartite, rng)?),
        TesterKind::Ck => plain(test_ck_minor_free(oracle, cfg.k, eps, &cal.ck(), rng)?),
        TesterKind::TrianglePlusEdge => plain(test_triangle_plus_edge(oracle, eps, &cal.cycle, rng)?),
        TesterKind::Path => plain(test_pk_minor_free(oracle, cfg.k, eps, &cal.tree, rng)?),
        TesterKind::Star => {
            let r = star_tester_run(oracle, cfg.k, eps, &cal.tree, rng)?;
            RunOutput { verdict: r.verdict, truncated: r.truncated }
        }
        TesterKind::Tree => {
            let r = tree_tester_run(oracle, &cfg.spider(), eps, &cal.tree, rng)?;
            RunOutput { verdict: r.verdict, truncated: r.truncated }
        }
        TesterKind::Forest => {
            let r = forest_tester_run(oracle, &cfg.forest_pattern(), eps, &cal.tree, rng)?;
            RunOutput { verdict: r.verdict, truncated: r.truncated }
        }
        TesterKind::CycleUnbounded => plain(test_cycle_free_unbounded(oracle, eps, &cal.cycle, rng)?),
        TesterKind::StarUnbounded => plain(test_star_unbounded(oracle, cfg.k, eps, &cal.unbounded_star, rng)?),
    })
}

/// Runs one trial on `g`. Budget exhaustion becomes a row; other tester
/// errors abort.
pub fn run_trial(cfg: &ExperimentConfig, g: &Graph, trial: usize, timings: bool) -> Result<TrialRecord, ExperimentError> {
    Ok(run_trial_with_certificate(cfg, g, trial, timings)?.0)
}

pub fn run_trial_with_certificate(
    cfg: &ExperimentConfig,
    g: &Graph,
    trial: usize,
    timings: bool,
) -> Result<(TrialRecord, Option<Certificate>), ExperimentError> {
    let mut oracle = QueryOracle::with_budget(g, cfg.budget);
    let mut rng = trial_rng(cfg.seed, trial);
    let start = Instant::now();
    let result = run_tester(cfg, &mut oracle, &mut rng);
    let time_us = timings.then(|| start.elapsed().as_micros() as u64);
    let counts = oracle.counts();
    let mut rec = TrialRecord {
        trial,
        outcome: Outcome::Accept,
        cert_kind: None,
        cert_size: None,
        neighbor_queries: counts.neighbor,
        degree_queries: counts.degree,
        truncated: false,
        verified: None,
        time_us,
    };
    let mut certificate = None;
    match result {
        Ok(out) => {
            rec.truncated = out.truncated;
            if let Verdict::Reject(cert) = out.verdict {
                rec.outcome = Outcome::Reject;
                rec.cert_kind = Some(cert.kind().to_string());
                rec.cert_size = Some(cert.size());
                rec.verified = Some(verify_certificate(g, &cert).is_ok());
                certificate = Some(cert);
            }
        }
        Err(TestError::Query(QueryError::BudgetExhausted { .. })) => rec.outcome = Outcome::BudgetExhausted,
        Err(TestError::Precondition(m)) => return Err(ExperimentError::Precondition(m)),
        Err(e) => return Err(ExperimentError::Tester(e)),
    }
    Ok((rec, certificate))
}

/// Generates the instance and runs every trial in index order.
pub fn run_experiment(cfg: &ExperimentConfig, timings: bool) -> Result<ExperimentResult, ExperimentError> {
    if !(cfg.eps > 0.0 && cfg.eps <= 1.0) {
        return Err(ExperimentError::Precondition(format!("eps = {} outside (0, 1]", cfg.eps)));
    }
    let instance = generate(&cfg.instance)?;
    let mut records = Vec::with_capacity(cfg.trials);
    let mut certificates = Vec::new();
    for t in 0..cfg.trials {
        let (rec, cert) = run_trial_with_certificate(cfg, &instance.graph, t, timings)?;
        records.push(rec);
        certificates.extend(cert.map(|c| (t, c)));
    }
    let summary = Summary::from_records(cfg, &instance.graph, &records);
    Ok(ExperimentResult { instance, records, certificates, summary })
}

/// Column order of the trial CSV.
pub const TRIAL_COLUMNS: [&str; 9] = [
    "trial",
    "outcome",
    "cert_kind",
    "cert_size",
    "neighbor_queries",
    "degree_queries",
    "truncated",
    "verified",
    "time_us",
];

/// Writes trial rows. The `time_us` column is dropped unless `timings` is set
/// so that the bytes depend only on the config.
pub fn write_trials_csv<W: Write>(out: W, records: &[TrialRecord], timings: bool) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    let cols = if timings { &TRIAL_COLUMNS[..] } else { &TRIAL_COLUMNS[..8] };
    w.write_record(cols)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in records {
        let mut row = vec![
            r.trial.to_string(),
            serde_json::to_value(r.outcome).expect("outcome serializes").as_str().unwrap_or_default().to_string(),
            opt(r.cert_kind.clone()),
            opt(r.cert_size.map(|s| s.to_string())),
            r.neighbor_queries.to_string(),
            r.degree_queries.to_string(),
            r.truncated.to_string(),
            opt(r.verified.map(|v| v.to_string())),
        ];
        if timings {
            row.push(opt(r.time_us.map(|t| t.to_string())));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    N,
    Eps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub n: usize,
    pub eps: f64,
    pub reject_rate: f64,
    pub median_neighbor_queries: u64,
    pub median_total_queries: u64,
    pub max_certificate_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    /// Least-squares slope of log(median neighbor queries) against
    /// log(axis value); `None` with fewer than two usable points.
    pub slope: Option<f64>,
}

/// Least-squares slope of `ln y` on `ln x` over points with positive
/// coordinates.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Runs `template` once per axis value and fits the query scaling.
pub fn run_sweep(template: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepResult, ExperimentError> {
    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let mut cfg = template.clone();
        match axis {
            SweepAxis::N => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(ExperimentError::Precondition(format!("n = {value} is not a positive integer")));
                }
                cfg.instance.n = value as usize;
            }
            SweepAxis::Eps => cfg.eps = value,
        }
        let res = run_experiment(&cfg, false)?;
        let s = &res.summary;
        points.push(SweepPoint {
            value,
            n: s.n,
            eps: cfg.eps,
            reject_rate: s.reject_rate,
            median_neighbor_queries: s.neighbor_queries.median,
            median_total_queries: s.total_queries.median,
            max_certificate_size: s.max_certificate_size,
        });
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.value, p.median_neighbor_queries as f64)).collect();
    Ok(SweepResult { axis, slope: loglog_slope(&xy), points })
}

pub fn write_sweep_csv<W: Write>(out: W, sweep: &SweepResult) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for p in &sweep.points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Family;

    fn forest_cfg(trials: usize) -> ExperimentConfig {
        ExperimentConfig::new(TesterKind::Cycle, InstanceSpec::new(Family::Forest, 256), 0.2, trials)
    }

    #[test]
    fn quantiles_of_small_samples() {
        assert_eq!(Quantiles::of(&[]), Quantiles::default());
        let q = Quantiles::of(&[5, 1, 3, 2, 4]);
        assert_eq!((q.min, q.p25, q.median, q.p75, q.max), (1, 2, 3, 4, 5));
        assert_eq!(Quantiles::of(&[7, 1]).median, 1);
    }

    #[test]
    fn slope_fits_power_laws() {
        let pts: Vec<(f64, f64)> = (10..15).map(|e| (2f64.powi(e), 3.0 * 2f64.powf(e as f64 * 0.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
        assert_eq!(loglog_slope(&[(4.0, 1.0), (4.0, 2.0)]), None);
    }

    #[test]
    fn forest_is_never_rejected() {
        let res = run_experiment(&forest_cfg(10), false).unwrap();
        assert_eq!(res.summary.rejects, 0);
        assert_eq!(res.records.len(), 10);
        assert!(res.records.iter().all(|r| r.cert_kind.is_none() && r.verified.is_none()));
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = forest_cfg(5);
        let bytes = |c: &ExperimentConfig| {
            let mut buf = Vec::new();
            write_trials_csv(&mut buf, &run_experiment(c, false).unwrap().records, false).unwrap();
            buf
        };
        let a = bytes(&cfg);
        assert_eq!(a, bytes(&cfg));
        let header = String::from_utf8(a).unwrap();
        assert!(header.starts_with("trial,outcome,cert_kind,cert_size,neighbor_queries,degree_queries,truncated,verified\n"));
    }

    #[test]
    fn rejections_are_verified() {
        let mut spec = InstanceSpec::new(Family::CliquePlusCycle, 400);
        spec.seed = 3;
        let mut cfg = ExperimentConfig::new(TesterKind::StarUnbounded, spec, 0.1, 5);
        cfg.k = 4;
        let res = run_experiment(&cfg, false).unwrap();
        assert!(res.summary.rejects > 0);
        assert!(res.summary.all_verified);
        assert!(res.records.iter().all(|r| (r.outcome == Outcome::Reject) == r.cert_kind.is_some()));
    }

    #[test]
    fn budget_is_recorded_not_exceeded() {
        let mut cfg = forest_cfg(4);
        cfg.budget = Some(10);
        let res = run_experiment(&cfg, false).unwrap();
        assert_eq!(res.summary.budget_exhausted, 4);
        assert!(res.records.iter().all(|r| r.total_queries() <= 10));
    }

    #[test]
    fn bad_eps_is_a_precondition() {
        let mut cfg = forest_cfg(1);
        cfg.eps = 0.0;
        assert!(matches!(run_experiment(&cfg, false), Err(ExperimentError::Precondition(_))));
    }

    #[test]
    fn single_point_sweep_has_no_slope() {
        let s = run_sweep(&forest_cfg(2), SweepAxis::N, &[128.0]).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.slope, None);
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = forest_cfg(3);
        cfg.calibration.ck_c_eps = Some(100.0);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        let minimal: ExperimentConfig =
            serde_json::from_str(r#"{"tester":"star","eps":0.1,"instance":{"family":"star_free","n":50}}"#).unwrap();
        assert_eq!(minimal.trials, 100);
        assert_eq!(minimal.calibration, Calibration::default());
    }
}
