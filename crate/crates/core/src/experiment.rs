//! Experiment configurations, the runner behind every CLI command, and the
//! versioned JSON-lines / CSV record format.

use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimators::{
    alpha, check_bounds, conditional_probability, enumerate_distribution, enumerate_exact, exact_det_singular_prob,
    mc_probability, mc_value_counts, with_pool, BoundVerdict, Claim, Estimate, Event, ValueCounts, Verdict,
    Statistic,
};
use crate::field::make_field;
use crate::processes::{pick_growth_params, replay_growth, run_growth_process, GrowthOutcome, GrowthParams, GrowthTrace};
use crate::random::{make_distribution, uniform_distribution, EntryDistribution, RandomStream};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Directory for records when no explicit output path is given.
pub const LOG_DIR_ENV: &str = "PERMLAB_LOG_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Alpha,
    Enumerate,
    Mc,
    Growth,
    Chain,
    Bounds,
    Replay,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Alpha => "alpha",
            Command::Enumerate => "enumerate",
            Command::Mc => "mc",
            Command::Growth => "growth",
            Command::Chain => "chain",
            Command::Bounds => "bounds",
            Command::Replay => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything needed to run, and rerun, one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stat: Option<Statistic>,
    /// Value `z` for `per = z` / `det = z` events.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<Event>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Event>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims: Option<Vec<Claim>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    #[serde(default, with = "crate::index_serde::opt_set", skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// File of growth traces to write (growth) or of records/traces to check (replay).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            q: None,
            weights: None,
            n: None,
            s: None,
            ell: None,
            samples: None,
            seed: 0,
            workers: 1,
            stat: None,
            value: None,
            event: None,
            condition: None,
            claims: None,
            t: None,
            delta: None,
            epsilon: None,
            runs: None,
            target: None,
            tol: None,
            traces: None,
            out: None,
            format: None,
        }
    }

    /// SHA-256 of the canonical JSON form, ignoring where output goes.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.format = None;
        c.traces = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn need<T: Copy>(&self, v: Option<T>, flag: &str) -> Result<T> {
        v.ok_or_else(|| Error::BadConfig(format!("command {} needs --{flag}", self.command.name())))
    }

    pub fn distribution(&self) -> Result<EntryDistribution> {
        match (&self.weights, self.q) {
            (Some(w), q) => {
                let q = q.unwrap_or(w.len() as u64);
                make_distribution(&make_field(q)?, w)
            }
            (None, Some(q)) => Ok(uniform_distribution(&make_field(q)?)),
            (None, None) => Err(Error::BadConfig(format!("command {} needs --q or --weights", self.command.name()))),
        }
    }

    /// The Monte Carlo predicate implied by the event, stat/value, or s/ell fields.
    fn mc_event(&self) -> Option<Event> {
        if let Some(e) = &self.event {
            return Some(e.clone());
        }
        match (self.stat, self.value, self.s) {
            (Some(Statistic::Per), Some(value), _) => Some(Event::PerEquals { value }),
            (Some(Statistic::Det), Some(value), _) => Some(Event::DetEquals { value }),
            (None, _, Some(s)) => Some(Event::E { s, ell: self.ell.unwrap_or(1) }),
            _ => None,
        }
    }

    fn default_claims(&self, dist: &EntryDistribution, n: usize) -> Vec<Claim> {
        if dist.is_uniform() {
            let mut c = vec![Claim::TrivialLowerBound, Claim::SeparationAllP];
            if n >= 3 {
                c.push(Claim::AsymptoticP);
            }
            c
        } else {
            vec![Claim::SeparationGeneral, Claim::AsymptoticGeneral]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub n: usize,
    pub det_singular: f64,
    pub exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub n: usize,
    pub t: usize,
    pub delta: f64,
    pub t_prime: usize,
    #[serde(with = "crate::index_serde::set")]
    pub target: Vec<usize>,
    pub runs: u64,
    pub success_in_j: u64,
    pub success_not_in_j: u64,
    pub terminated: u64,
    pub success: Estimate,
    pub mean_bad_steps: f64,
    pub sd_bad_steps: f64,
    /// `ρ(T′ − T)`.
    pub bad_step_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecordResult {
    Alpha { q: u64, tol: f64, alpha: f64, ladder: Vec<LadderRow> },
    Enumeration {
        n: usize,
        q: u32,
        statistic: Statistic,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        counts: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        total: Option<u64>,
        probabilities: Vec<f64>,
    },
    Estimate {
        label: String,
        estimate: Estimate,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reference: Option<f64>,
    },
    ValueCounts { counts: ValueCounts, estimates: Vec<Estimate> },
    Growth { summary: GrowthSummary },
    Verdict { verdict: BoundVerdict },
    Replay { source: String, checked: usize, mismatches: Vec<String> },
}

/// One line of the experiment log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub schema: u32,
    pub version: String,
    pub command: Command,
    pub config_hash: String,
    pub seed: u64,
    pub workers: usize,
    pub config: ExperimentConfig,
    pub result: RecordResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub summary: String,
    /// Some bound verdict was VIOLATED.
    pub violated: bool,
    /// A replay found a mismatch.
    pub failed: bool,
}

fn record(config: &ExperimentConfig, result: RecordResult) -> Record {
    Record {
        schema: SCHEMA,
        version: VERSION.to_string(),
        command: config.command,
        config_hash: config.hash(),
        seed: config.seed,
        workers: config.workers,
        config: config.clone(),
        result,
    }
}

/// Runs one experiment.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let results = match config.command {
        Command::Alpha => run_alpha(config)?,
        Command::Enumerate => run_enumerate(config)?,
        Command::Mc => run_mc(config)?,
        Command::Growth => run_growth(config)?,
        Command::Chain => run_chain(config)?,
        Command::Bounds => run_bounds(config)?,
        Command::Replay => run_replay(config)?,
    };
    let records: Vec<Record> = results.into_iter().map(|r| record(config, r)).collect();
    let violated = records
        .iter()
        .any(|r| matches!(&r.result, RecordResult::Verdict { verdict } if verdict.verdict == Verdict::Violated));
    let failed = records.iter().any(|r| matches!(&r.result, RecordResult::Replay { mismatches, .. } if !mismatches.is_empty()));
    let summary = summarize(&records);
    Ok(Outcome { records, summary, violated, failed })
}

fn run_alpha(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let q = c.need(c.q, "q")?;
    make_field(q)?;
    let tol = c.tol.unwrap_or(1e-12);
    let ladder = (1..=c.n.unwrap_or(10))
        .map(|n| {
            let exact = exact_det_singular_prob(n, q);
            LadderRow { n, det_singular: exact.to_f64().unwrap(), exact: exact.to_string() }
        })
        .collect();
    Ok(vec![RecordResult::Alpha { q, tol, alpha: alpha(q, tol)?, ladder }])
}

fn run_enumerate(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let n = c.need(c.n, "n")?;
    let dist = c.distribution()?;
    let stat = c.stat.unwrap_or(Statistic::Per);
    let q = dist.field().q();
    let result = if dist.is_uniform() {
        let e = enumerate_exact(n, dist.field(), stat, c.workers)?;
        let probabilities = (0..q).map(|z| e.probability(z).to_f64().unwrap()).collect();
        RecordResult::Enumeration { n, q, statistic: stat, counts: Some(e.counts), total: Some(e.total), probabilities }
    } else {
        let probabilities = enumerate_distribution(n, &dist, stat, c.workers)?;
        RecordResult::Enumeration { n, q, statistic: stat, counts: None, total: None, probabilities }
    };
    Ok(vec![result])
}

fn run_mc(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let n = c.need(c.n, "n")?;
    let samples = c.need(c.samples, "N")?;
    let dist = c.distribution()?;
    match c.mc_event() {
        Some(event) => {
            let label = serde_json::to_string(&event).expect("event serializes");
            let estimate = match &c.condition {
                Some(cond) => conditional_probability(cond, &event, n, &dist, samples, c.seed, c.workers)?,
                None => mc_probability(&event, n, &dist, samples, c.seed, c.workers)?,
            };
            Ok(vec![RecordResult::Estimate { label, estimate, reference: None }])
        }
        None => {
            let stat = c.stat.unwrap_or(Statistic::Per);
            let counts = mc_value_counts(stat, n, &dist, samples, c.seed, c.workers)?;
            let estimates = (0..dist.field().q()).map(|z| counts.estimate(z)).collect();
            Ok(vec![RecordResult::ValueCounts { counts, estimates }])
        }
    }
}

/// The growth parameters a config asks for: explicit `T`/`δ`, or picked from `ε`.
pub fn growth_params(c: &ExperimentConfig, dist: &EntryDistribution) -> Result<GrowthParams> {
    match (c.t, c.delta, c.epsilon) {
        (Some(t), Some(delta), _) => Ok(GrowthParams { t, delta }),
        (None, None, Some(eps)) => pick_growth_params(dist, eps),
        _ => Err(Error::BadConfig("growth needs --T and --delta, or --epsilon".into())),
    }
}

/// Runs `runs` independent growth processes; run `r` uses `RandomStream::new(seed).split(r)`.
pub fn growth_traces(c: &ExperimentConfig) -> Result<Vec<GrowthTrace>> {
    let n = c.need(c.n, "n")?;
    let dist = c.distribution()?;
    let params = growth_params(c, &dist)?;
    let target = c.target.clone().unwrap_or_else(|| (0..2 * params.t).collect());
    let runs = c.runs.unwrap_or(1);
    let root = RandomStream::new(c.seed);
    with_pool(c.workers, || {
        (0..runs)
            .into_par_iter()
            .map(|r| run_growth_process(&dist, n, &target, params, &root.split(r)))
            .collect::<Result<Vec<_>>>()
    })?
}

fn run_growth(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let dist = c.distribution()?;
    let traces = growth_traces(c)?;
    if let Some(path) = &c.traces {
        let mut f = File::create(path).map_err(io_err(path))?;
        for t in &traces {
            writeln!(f, "{}", serde_json::to_string(t).expect("trace serializes")).map_err(io_err(path))?;
        }
    }
    let first = traces.first().ok_or_else(|| Error::BadConfig("growth needs --runs >= 1".into()))?;
    let runs = traces.len() as u64;
    let count = |o: GrowthOutcome| traces.iter().filter(|t| t.outcome == o).count() as u64;
    let success_in_j = count(GrowthOutcome::SuccessInJ);
    let bad: Vec<f64> = traces.iter().map(|t| t.bad_steps() as f64).collect();
    let mean = bad.iter().sum::<f64>() / runs as f64;
    let var = if runs > 1 { bad.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (runs - 1) as f64 } else { 0.0 };
    let summary = GrowthSummary {
        n: first.n,
        t: first.t,
        delta: first.delta,
        t_prime: first.t_prime,
        target: first.target.clone(),
        runs,
        success_in_j,
        success_not_in_j: count(GrowthOutcome::SuccessNotInJ),
        terminated: count(GrowthOutcome::Terminated),
        success: Estimate::from_counts(success_in_j, runs, c.seed, c.workers),
        mean_bad_steps: mean,
        sd_bad_steps: var.sqrt(),
        bad_step_reference: dist.rho() * (first.t_prime - first.t) as f64,
    };
    Ok(vec![RecordResult::Growth { summary }])
}

fn run_chain(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let n = c.need(c.n, "n")?;
    let samples = c.need(c.samples, "N")?;
    let dist = c.distribution()?;
    let q = dist.field().q() as f64;
    let top = c.s.unwrap_or(n.min(3));
    if top == 0 || top > n {
        return Err(Error::BadConfig(format!("chain needs 1 <= s <= n, got s = {top}")));
    }
    let uniform = dist.is_uniform();
    let mut out = Vec::new();
    for s in 1..=top {
        let cond = Event::E { s, ell: 1 };
        let target = Event::E { s: s - 1, ell: 1 };
        let estimate = conditional_probability(&cond, &target, n, &dist, samples, c.seed, c.workers)?;
        out.push(RecordResult::Estimate {
            label: format!("Pr[E({}) | E({s})]", s - 1),
            estimate,
            reference: uniform.then(|| 1.0 - q.powi(-(s as i32))),
        });
        let estimate = mc_probability(&target, n, &dist, samples, c.seed, c.workers)?;
        out.push(RecordResult::Estimate {
            label: format!("Pr[E({})]", s - 1),
            estimate,
            reference: uniform.then(|| (s..=n).map(|i| 1.0 - q.powi(-(i as i32))).product()),
        });
    }
    Ok(out)
}

fn run_bounds(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let n = c.need(c.n, "n")?;
    let dist = c.distribution()?;
    let claims = c.claims.clone().unwrap_or_else(|| c.default_claims(&dist, n));
    let samples = c.samples.unwrap_or(100_000);
    let verdicts = check_bounds(&claims, n, &dist, samples, c.seed, c.workers)?;
    Ok(verdicts.into_iter().map(|verdict| RecordResult::Verdict { verdict }).collect())
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::BadConfig(format!("{}: {e}", path.display()))
}

/// One item of a replay file.
enum Replayable {
    Trace(Box<GrowthTrace>),
    Record(Box<Record>),
}

fn read_replayable(path: &Path) -> Result<Vec<Replayable>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    if let Ok(t) = serde_json::from_str::<GrowthTrace>(&text) {
        return Ok(vec![Replayable::Trace(Box::new(t))]);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let item = if let Ok(t) = serde_json::from_str::<GrowthTrace>(line) {
            Replayable::Trace(Box::new(t))
        } else {
            let r = serde_json::from_str::<Record>(line)
                .map_err(|e| Error::BadConfig(format!("{} line {}: {e}", path.display(), i + 1)))?;
            Replayable::Record(Box::new(r))
        };
        out.push(item);
    }
    Ok(out)
}

/// Re-executes a logged record and compares the result bit for bit.
pub fn replay_record(rec: &Record) -> Result<std::result::Result<(), String>> {
    if rec.schema != SCHEMA {
        return Ok(Err(format!("unsupported schema {}", rec.schema)));
    }
    if rec.config.hash() != rec.config_hash {
        return Ok(Err("config hash does not match the recorded config".into()));
    }
    if rec.command == Command::Replay {
        return Ok(Err("replay records cannot be replayed".into()));
    }
    let mut config = rec.config.clone();
    config.traces = None;
    let again = run(&config)?;
    let same = again.records.iter().any(|r| r.result == rec.result);
    Ok(if same { Ok(()) } else { Err(format!("{} record {} did not reproduce", rec.command.name(), &rec.config_hash[..12])) })
}

fn run_replay(c: &ExperimentConfig) -> Result<Vec<RecordResult>> {
    let path = c.traces.as_ref().ok_or_else(|| Error::BadConfig("replay needs --replay <file>".into()))?;
    let items = read_replayable(path)?;
    let mut mismatches = Vec::new();
    // records from one run share a config; rerun it once
    let mut verified: Vec<(String, Vec<RecordResult>)> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let verdict = match item {
            Replayable::Trace(t) => replay_growth(t)?,
            Replayable::Record(r) => {
                if let Some((_, results)) = verified.iter().find(|(h, _)| *h == r.config_hash) {
                    if results.contains(&r.result) {
                        Ok(())
                    } else {
                        Err(format!("record {} did not reproduce", &r.config_hash[..12]))
                    }
                } else {
                    let v = replay_record(r)?;
                    if v.is_ok() {
                        let mut config = r.config.clone();
                        config.traces = None;
                        verified.push((r.config_hash.clone(), run(&config)?.records.into_iter().map(|x| x.result).collect()));
                    }
                    v
                }
            }
        };
        if let Err(msg) = verdict {
            mismatches.push(format!("item {}: {msg}", i + 1));
        }
    }
    Ok(vec![RecordResult::Replay { source: path.display().to_string(), checked: items.len(), mismatches }])
}

/// Where records go: `--out`, else `$PERMLAB_LOG_DIR/permlab.{jsonl,csv}`.
pub fn output_path(config: &ExperimentConfig) -> Option<PathBuf> {
    if let Some(p) = &config.out {
        return Some(p.clone());
    }
    let dir = std::env::var_os(LOG_DIR_ENV)?;
    let ext = match config.format.unwrap_or_default() {
        Format::Json => "jsonl",
        Format::Csv => "csv",
    };
    Some(PathBuf::from(dir).join(format!("permlab.{ext}")))
}

pub const CSV_HEADER: &str = "config_hash,seed,workers,command,record,field,value";

/// Flattens JSON leaves into `(dotted.path, text)` pairs.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rows (without header) for the results of `records`, one per JSON leaf.
pub fn csv_rows(records: &[Record]) -> Vec<String> {
    let mut rows = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let mut leaves = Vec::new();
        flatten("", &serde_json::to_value(&r.result).expect("result serializes"), &mut leaves);
        for (field, value) in leaves {
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                r.config_hash,
                r.seed,
                r.workers,
                r.command.name(),
                i,
                csv_field(&field),
                csv_field(&value)
            ));
        }
    }
    rows
}

/// Appends records to `path` as JSON lines or CSV.
pub fn write_records(records: &[Record], path: &Path, format: Format) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io_err(path))?;
    let mut text = String::new();
    match format {
        Format::Json => {
            for r in records {
                text.push_str(&serde_json::to_string(r).expect("record serializes"));
                text.push('\n');
            }
        }
        Format::Csv => {
            if fresh {
                text.push_str(CSV_HEADER);
                text.push('\n');
            }
            for row in csv_rows(records) {
                text.push_str(&row);
                text.push('\n');
            }
        }
    }
    f.write_all(text.as_bytes()).map_err(io_err(path))
}

/// Reads a JSON-lines record log.
pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let f = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?);
    }
    Ok(out)
}

fn fmt_estimate(e: &Estimate) -> String {
    format!("{:.6}  [{:.6}, {:.6}]  {}/{}", e.point, e.lo, e.hi, e.successes, e.samples)
}

/// Human-readable table for a batch of records.
pub fn summarize(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        match &r.result {
            RecordResult::Alpha { q, alpha, ladder, .. } => {
                let _ = writeln!(s, "alpha_{q} = {alpha:.10}");
                let _ = writeln!(s, "{:>4}  {:>14}  exact", "n", "Pr[det=0]");
                for row in ladder {
                    let _ = writeln!(s, "{:>4}  {:>14.10}  {}", row.n, row.det_singular, row.exact);
                }
            }
            RecordResult::Enumeration { n, q, statistic, counts, total, probabilities } => {
                let _ = writeln!(s, "exact {statistic:?} distribution, n = {n}, q = {q}");
                let _ = writeln!(s, "{:>6}  {:>12}  {:>14}", "value", "count", "probability");
                for (z, p) in probabilities.iter().enumerate() {
                    let c = counts.as_ref().map(|c| c[z].to_string()).unwrap_or_else(|| "-".into());
                    let _ = writeln!(s, "{z:>6}  {c:>12}  {p:>14.10}");
                }
                if let Some(t) = total {
                    let _ = writeln!(s, "total {t}");
                }
            }
            RecordResult::Estimate { label, estimate, reference } => {
                let _ = write!(s, "{label}: {}", fmt_estimate(estimate));
                if let Some(d) = estimate.drawn {
                    let _ = write!(s, "  (accepted of {d})");
                }
                if let Some(r) = reference {
                    let _ = write!(s, "  reference {r:.6}");
                }
                s.push('\n');
            }
            RecordResult::ValueCounts { counts, estimates } => {
                let _ = writeln!(s, "{:?} value counts over {} samples", counts.statistic, counts.samples);
                for (z, e) in estimates.iter().enumerate() {
                    let _ = writeln!(s, "{z:>6}  {}", fmt_estimate(e));
                }
            }
            RecordResult::Growth { summary: g } => {
                let _ = writeln!(s, "growth n = {}, T = {}, delta = {}, T' = {}, runs = {}", g.n, g.t, g.delta, g.t_prime, g.runs);
                let _ = writeln!(s, "  success in J      {}", fmt_estimate(&g.success));
                let _ = writeln!(s, "  success not in J  {}", g.success_not_in_j);
                let _ = writeln!(s, "  terminated        {}", g.terminated);
                let _ = writeln!(
                    s,
                    "  bad steps         mean {:.4}  sd {:.4}  reference {:.4}",
                    g.mean_bad_steps, g.sd_bad_steps, g.bad_step_reference
                );
            }
            RecordResult::Verdict { verdict: v } => {
                let region = match (v.lower, v.upper) {
                    (Some(l), Some(u)) => format!("[{l:.6}, {u:.6}]"),
                    (Some(l), None) => format!(">= {l:.6}"),
                    (None, Some(u)) if v.strict => format!("< {u:.6}"),
                    (None, Some(u)) => format!("<= {u:.6}"),
                    (None, None) => "any".into(),
                };
                let _ = writeln!(
                    s,
                    "{:<20} z={} n={} q={}  {:<12} value {:.6}  claim {}  margin {:+.6}  ({:?})",
                    v.claim.name(),
                    v.z,
                    v.n,
                    v.q,
                    format!("{:?}", v.verdict).to_uppercase(),
                    v.value,
                    region,
                    v.margin,
                    v.method
                );
            }
            RecordResult::Replay { source, checked, mismatches } => {
                let _ = writeln!(s, "replayed {checked} item(s) from {source}: {} mismatch(es)", mismatches.len());
                for m in mismatches {
                    let _ = writeln!(s, "  {m}");
                }
            }
        }
    }
    s
}
