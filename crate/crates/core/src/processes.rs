//! The nested-set growth process and exact distributions of weighted sums.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{check_index_set, complement, MatrixFq, RYSER_CAP};
use crate::random::{sample_matrix, DistributionLiteral, EntryDistribution, RandomStream};

const DELTA_GRID_STEPS: u32 = 19;
const MAX_CONVOLUTIONS: usize = 100_000;

/// Growth process parameters: target size `T`, slack `δ`, and `T′ = 2T + ⌊δT⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub t: usize,
    pub delta: f64,
}

impl GrowthParams {
    pub fn t_prime(&self) -> usize {
        2 * self.t + (self.delta * self.t as f64).floor() as usize
    }
}

/// Picks `δ` from the grid `{0.05, 0.10, …, 0.95}` and then the smallest `T`.
///
/// `δ` is the first grid value with `1 − ρ(1+δ) > δ`. `T` is the smallest
/// integer with `T > 2(1+δ)/(εδ²)` and `ρ^{δT}/(1−ρ) < ε/4`.
pub fn pick_growth_params(dist: &EntryDistribution, epsilon: f64) -> Result<GrowthParams> {
    let rho = dist.rho();
    if dist.is_degenerate() || rho >= 1.0 {
        return Err(Error::DegenerateDistribution(rho));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadConfig(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let delta = (1..=DELTA_GRID_STEPS)
        .map(|k| k as f64 / 20.0)
        .find(|&d| 1.0 - rho * (1.0 + d) > d)
        .ok_or(Error::DegenerateDistribution(rho))?;
    let bound = 2.0 * (1.0 + delta) / (epsilon * delta * delta);
    // guard against the bound landing a rounding error below an integer
    let bound = bound * (1.0 + 1e-12);
    let mut t = bound.floor() as usize;
    while !(t as f64 > bound) {
        t += 1;
    }
    while !(rho.powf(delta * t as f64) / (1.0 - rho) < epsilon / 4.0) {
        t += 1;
    }
    Ok(GrowthParams { t, delta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GrowthOutcome {
    SuccessInJ,
    SuccessNotInJ,
    Terminated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthStep {
    /// Step number, 1-based.
    pub t: usize,
    #[serde(with = "crate::index_serde::single")]
    pub removed: usize,
    pub phase: u8,
    pub bad: bool,
}

/// Complete record of one growth run. Index sets serialize 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthTrace {
    pub n: usize,
    pub t: usize,
    pub delta: f64,
    pub t_prime: usize,
    #[serde(with = "crate::index_serde::set")]
    pub target: Vec<usize>,
    pub distribution: DistributionLiteral,
    pub seed: u64,
    pub path: Vec<u64>,
    pub counter: u64,
    pub steps: Vec<GrowthStep>,
    pub outcome: GrowthOutcome,
    /// Step at which no eligible removal remained, when terminated.
    pub terminated_at: Option<usize>,
    #[serde(with = "crate::index_serde::opt_set")]
    pub final_set: Option<Vec<usize>>,
}

impl GrowthTrace {
    pub fn bad_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.bad).count()
    }

    fn params(&self) -> GrowthParams {
        GrowthParams { t: self.t, delta: self.delta }
    }
}

fn check_growth_config(n: usize, target: &[usize], params: GrowthParams) -> Result<()> {
    let GrowthParams { t, delta } = params;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadConfig(format!("delta must lie in (0, 1), got {delta}")));
    }
    if t == 0 {
        return Err(Error::BadConfig("T must be positive".into()));
    }
    if target.len() != 2 * t {
        return Err(Error::BadConfig(format!("|J| = {} but 2T = {}", target.len(), 2 * t)));
    }
    let tp = params.t_prime();
    if n < tp {
        return Err(Error::BadConfig(format!("n = {n} is below T' = {tp}")));
    }
    check_index_set(target, n).map_err(|e| Error::BadConfig(format!("target set: {e}")))?;
    if n - t > RYSER_CAP {
        return Err(Error::SizeCap { what: "growth process permanent size n - T", size: (n - t) as u64, cap: RYSER_CAP as u64 });
    }
    Ok(())
}

/// `per(A; I \ {i})` on the first `t` rows, given the kept columns `kept = {0..n} \ I`.
fn per_after_removal(a: &MatrixFq, t: usize, kept: &[usize], i: usize) -> u32 {
    let mut cols = kept.to_vec();
    let pos = cols.partition_point(|&c| c < i);
    cols.insert(pos, i);
    let rows: Vec<usize> = (0..t).collect();
    a.per_rows_cols(&rows, &cols)
}

fn run_on_matrix(a: &MatrixFq, target: &[usize], params: GrowthParams) -> (Vec<GrowthStep>, GrowthOutcome, Option<usize>, Option<Vec<usize>>) {
    let n = a.rows();
    let tp = params.t_prime();
    let mut in_target = vec![false; n];
    for &j in target {
        in_target[j] = true;
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    for t in 1..=n - params.t {
        let phase = if t <= n - tp { 1 } else { 2 };
        let kept = complement(&current, n);
        let nonzero = |i: usize| per_after_removal(a, t, &kept, i) != 0;
        let outside: Vec<usize> = current.iter().copied().filter(|&i| !in_target[i]).collect();
        let mut choice = outside.iter().copied().find(|&i| nonzero(i));
        if choice.is_none() && phase == 2 {
            // everything outside J already failed
            choice = current.iter().copied().filter(|&i| in_target[i]).find(|&i| nonzero(i));
        }
        let Some(removed) = choice else {
            return (steps, GrowthOutcome::Terminated, Some(t), None);
        };
        let bad = phase == 2 && !outside.is_empty() && in_target[removed];
        steps.push(GrowthStep { t, removed, phase, bad });
        current.retain(|&i| i != removed);
    }
    let outcome = if current.iter().all(|&i| in_target[i]) {
        GrowthOutcome::SuccessInJ
    } else {
        GrowthOutcome::SuccessNotInJ
    };
    (steps, outcome, None, Some(current))
}

/// Runs the growth process on a fresh μ-matrix drawn from `stream`.
pub fn run_growth_process(
    dist: &EntryDistribution,
    n: usize,
    target: &[usize],
    params: GrowthParams,
    stream: &RandomStream,
) -> Result<GrowthTrace> {
    check_growth_config(n, target, params)?;
    let a = sample_matrix(n, dist, &mut stream.clone());
    let (steps, outcome, terminated_at, final_set) = run_on_matrix(&a, target, params);
    Ok(GrowthTrace {
        n,
        t: params.t,
        delta: params.delta,
        t_prime: params.t_prime(),
        target: target.to_vec(),
        distribution: dist.to_literal(),
        seed: stream.seed(),
        path: stream.path().to_vec(),
        counter: stream.counter(),
        steps,
        outcome,
        terminated_at,
        final_set,
    })
}

/// Regenerates the matrix behind `trace`.
pub fn trace_matrix(trace: &GrowthTrace) -> Result<MatrixFq> {
    let dist = EntryDistribution::from_literal(&trace.distribution)?;
    let mut stream = RandomStream::at(trace.seed, &trace.path, trace.counter);
    Ok(sample_matrix(trace.n, &dist, &mut stream))
}

/// Checks every recorded step of `trace` against direct `per(A;I)` evaluations
/// on the regenerated matrix. Returns a description of the first violation.
pub fn verify_trace(trace: &GrowthTrace) -> Result<std::result::Result<(), String>> {
    check_growth_config(trace.n, &trace.target, trace.params())?;
    if trace.t_prime != trace.params().t_prime() {
        return Ok(Err(format!("T' = {} but 2T + floor(dT) = {}", trace.t_prime, trace.params().t_prime())));
    }
    let a = trace_matrix(trace)?;
    let n = trace.n;
    let in_target = |i: usize| trace.target.contains(&i);
    let mut current: Vec<usize> = (0..n).collect();
    let per = |set: &[usize]| a.per_sub(set).map(|v| v.value());
    let last = trace.terminated_at.map_or(n - trace.t, |t| t - 1);
    if trace.steps.len() != last {
        return Ok(Err(format!("{} steps recorded, expected {last}", trace.steps.len())));
    }
    for (k, step) in trace.steps.iter().enumerate() {
        let t = k + 1;
        let phase = if t <= n - trace.t_prime { 1 } else { 2 };
        if step.t != t || step.phase != phase {
            return Ok(Err(format!("step {t}: recorded (t, phase) = ({}, {})", step.t, step.phase)));
        }
        let Some(pos) = current.iter().position(|&i| i == step.removed) else {
            return Ok(Err(format!("step {t}: index {} already removed", step.removed + 1)));
        };
        let removed_in_j = in_target(step.removed);
        if phase == 1 && removed_in_j {
            return Ok(Err(format!("step {t}: phase 1 removed {} from J", step.removed + 1)));
        }
        let outside_left = current.iter().any(|&i| !in_target(i));
        // every candidate preferred over the recorded choice must have been zero
        let preferred: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&i| if removed_in_j { !in_target(i) || i < step.removed } else { !in_target(i) && i < step.removed })
            .collect();
        for i in preferred {
            let mut rest = current.clone();
            rest.retain(|&x| x != i);
            if per(&rest)? != 0 {
                return Ok(Err(format!("step {t}: preferred index {} was available", i + 1)));
            }
        }
        current.remove(pos);
        if per(&current)? == 0 {
            return Ok(Err(format!("step {t}: per(A; I_t) = 0")));
        }
        if current.len() != n - t {
            return Ok(Err(format!("step {t}: |I_t| = {}", current.len())));
        }
        let bad = phase == 2 && outside_left && removed_in_j;
        if bad != step.bad {
            return Ok(Err(format!("step {t}: bad flag {} but expected {bad}", step.bad)));
        }
    }
    match (trace.outcome, trace.terminated_at) {
        (GrowthOutcome::Terminated, Some(t)) => {
            let phase = if t <= n - trace.t_prime { 1 } else { 2 };
            for &i in &current {
                if phase == 1 && in_target(i) {
                    continue;
                }
                let mut rest = current.clone();
                rest.retain(|&x| x != i);
                if per(&rest)? != 0 {
                    return Ok(Err(format!("terminated at {t} but removing {} was possible", i + 1)));
                }
            }
            if trace.final_set.is_some() {
                return Ok(Err("terminated trace carries a final set".into()));
            }
        }
        (GrowthOutcome::Terminated, None) | (_, Some(_)) => {
            return Ok(Err("outcome and termination step disagree".into()));
        }
        (outcome, None) => {
            if trace.final_set.as_deref() != Some(&current[..]) {
                return Ok(Err("final set does not match the replayed steps".into()));
            }
            let inside = current.iter().all(|&i| in_target(i));
            let expect = if inside { GrowthOutcome::SuccessInJ } else { GrowthOutcome::SuccessNotInJ };
            if outcome != expect {
                return Ok(Err(format!("outcome {outcome:?} but expected {expect:?}")));
            }
        }
    }
    Ok(Ok(()))
}

/// Re-derives a trace from its coordinates and checks it step by step.
pub fn replay_growth(trace: &GrowthTrace) -> Result<std::result::Result<(), String>> {
    if let Err(msg) = verify_trace(trace)? {
        return Ok(Err(msg));
    }
    let dist = EntryDistribution::from_literal(&trace.distribution)?;
    let stream = RandomStream::at(trace.seed, &trace.path, trace.counter);
    let again = run_growth_process(&dist, trace.n, &trace.target, trace.params(), &stream)?;
    if &again != trace {
        return Ok(Err("re-running the process produced a different trace".into()));
    }
    Ok(Ok(()))
}

/// Exact law of a weighted sum `h·x` over F_p.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDistribution {
    pub p: u32,
    pub exact: Vec<BigRational>,
    pub epsilon_exact: BigRational,
}

impl SumDistribution {
    pub fn probabilities(&self) -> Vec<f64> {
        self.exact.iter().map(|r| r.to_f64().unwrap()).collect()
    }

    /// `max_z |P(z) − 1/p|`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon_exact.to_f64().unwrap()
    }

    fn from_exact(p: u32, exact: Vec<BigRational>) -> Self {
        let uniform = BigRational::new(1.into(), p.into());
        let epsilon_exact = exact.iter().map(|x| (x - &uniform).abs()).max().unwrap_or_else(BigRational::zero);
        SumDistribution { p, exact, epsilon_exact }
    }
}

/// μ as exact rationals: each weight's binary value, renormalised to sum to 1.
pub fn exact_weights(dist: &EntryDistribution) -> Vec<BigRational> {
    let raw: Vec<BigRational> = dist.weights().iter().map(|&w| BigRational::from_f64(w).unwrap()).collect();
    let total: BigRational = raw.iter().sum();
    raw.into_iter().map(|w| w / &total).collect()
}

fn convolve_scaled(acc: &[BigRational], mu: &[BigRational], c: u32, p: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p as usize];
    for (z, a) in acc.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (y, m) in mu.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let target = (z as u64 + c as u64 * y as u64) % p as u64;
            out[target as usize] += a * m;
        }
    }
    out
}

fn require_prime(dist: &EntryDistribution) -> Result<u32> {
    let f = dist.field();
    if !f.is_prime() {
        return Err(Error::NonPrimeField(f.q()));
    }
    Ok(f.p())
}

/// Distribution of `h·x` for i.i.d. μ entries, one exact convolution per nonzero coefficient.
pub fn exact_sum_distribution(dist: &EntryDistribution, h: &[u32]) -> Result<SumDistribution> {
    let p = require_prime(dist)?;
    if let Some(&c) = h.iter().find(|&&c| c >= p) {
        return Err(Error::OutOfRange { index: c as usize, limit: p as usize });
    }
    let mu = exact_weights(dist);
    let mut acc = vec![BigRational::zero(); p as usize];
    acc[0] = BigRational::from_integer(1.into());
    for &c in h.iter().filter(|&&c| c != 0) {
        acc = convolve_scaled(&acc, &mu, c, p);
    }
    Ok(SumDistribution::from_exact(p, acc))
}

/// `max_{c ≠ 0} ε(c·(x_1 + … + x_k))` for the k-fold sum law `law`.
fn worst_class_epsilon(law: &[BigRational], p: u32) -> BigRational {
    (1..p)
        .map(|c| {
            let mut scaled = vec![BigRational::zero(); p as usize];
            for (z, v) in law.iter().enumerate() {
                scaled[(c as u64 * z as u64 % p as u64) as usize] = v.clone();
            }
            SumDistribution::from_exact(p, scaled).epsilon_exact
        })
        .max()
        .unwrap()
}

/// Smallest `Q` guaranteeing `h·x` is ε-almost-uniform once `h` has `Q` nonzero entries.
///
/// If μ itself is ε-almost-uniform every coefficient class already is, and
/// `Q = 1`. Otherwise `Q = k(p−1)` for the least `k` whose `k`-fold
/// same-coefficient sum is ε-almost-uniform in every coefficient class.
pub fn find_q(dist: &EntryDistribution, epsilon: f64) -> Result<u64> {
    let p = require_prime(dist)?;
    if dist.is_degenerate() {
        return Err(Error::DegenerateDistribution(dist.rho()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::BadConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    let eps = BigRational::from_f64(epsilon).unwrap();
    let mu = exact_weights(dist);
    if worst_class_epsilon(&mu, p) <= eps {
        return Ok(1);
    }
    let mut law = mu.clone();
    for k in 2..=MAX_CONVOLUTIONS {
        law = convolve_scaled(&law, &mu, 1, p);
        if worst_class_epsilon(&law, p) <= eps {
            return Ok(k as u64 * (p as u64 - 1));
        }
    }
    Err(Error::SizeCap { what: "find_Q convolutions", size: MAX_CONVOLUTIONS as u64 + 1, cap: MAX_CONVOLUTIONS as u64 })
}

/// Whether the `k`-fold same-coefficient criterion holds at ε.
pub fn same_coefficient_criterion(dist: &EntryDistribution, k: usize, epsilon: f64) -> Result<bool> {
    let p = require_prime(dist)?;
    let eps = BigRational::from_f64(epsilon).unwrap();
    let mu = exact_weights(dist);
    let mut law = vec![BigRational::zero(); p as usize];
    law[0] = BigRational::from_integer(1.into());
    for _ in 0..k {
        law = convolve_scaled(&law, &mu, 1, p);
    }
    Ok(worst_class_epsilon(&law, p) <= eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::random::{make_distribution, uniform_distribution};

    fn mu(w: &[f64]) -> EntryDistribution {
        make_distribution(&make_field(w.len() as u64).unwrap(), w).unwrap()
    }

    #[test]
    fn params_for_uniform_f3() {
        let d = uniform_distribution(&make_field(3).unwrap());
        let gp = pick_growth_params(&d, 0.2).unwrap();
        let rho = d.rho();
        assert!(1.0 - rho * (1.0 + gp.delta) > gp.delta);
        assert!(gp.t as f64 > 2.0 * (1.0 + gp.delta) / (0.2 * gp.delta * gp.delta));
        assert!(rho.powf(gp.delta * gp.t as f64) / (1.0 - rho) < 0.05);
        // first grid point already passes
        assert_eq!(gp.delta, 0.05);
        assert_eq!(gp.t, 4201);
        assert_eq!(gp.t_prime(), 2 * 4201 + 210);
    }

    #[test]
    fn params_reject_concentrated() {
        let d = mu(&[0.99, 0.01, 0.0]);
        assert!(matches!(pick_growth_params(&d, 0.2), Err(Error::DegenerateDistribution(_))));
        let d = mu(&[1.0, 0.0, 0.0]);
        assert!(matches!(pick_growth_params(&d, 0.2), Err(Error::DegenerateDistribution(_))));
        let d = mu(&[0.6, 0.3, 0.1]);
        assert!(pick_growth_params(&d, 1.5).is_err());
    }

    #[test]
    fn params_for_skewed_mu() {
        let d = mu(&[0.6, 0.3, 0.1]);
        let gp = pick_growth_params(&d, 0.1).unwrap();
        assert!(1.0 - 0.6 * (1.0 + gp.delta) > gp.delta);
        assert!(gp.t as f64 > 2.0 * (1.0 + gp.delta) / (0.1 * gp.delta * gp.delta));
        assert!(0.6f64.powf(gp.delta * gp.t as f64) / 0.4 < 0.025);
        assert!(!(1.0 - 0.6 * (1.0 + (gp.delta - 0.05)) > gp.delta - 0.05) || gp.delta == 0.05);
    }

    fn small_run(seed: u64) -> GrowthTrace {
        let d = uniform_distribution(&make_field(3).unwrap());
        let params = GrowthParams { t: 3, delta: 0.34 };
        let target: Vec<usize> = (6..12).collect();
        run_growth_process(&d, 12, &target, params, &RandomStream::new(seed)).unwrap()
    }

    #[test]
    fn growth_traces_verify() {
        for seed in 0..40 {
            let tr = small_run(seed);
            assert_eq!(tr.t_prime, 7);
            if tr.outcome != GrowthOutcome::Terminated {
                assert_eq!(tr.final_set.as_ref().unwrap().len(), 3);
            }
            assert_eq!(verify_trace(&tr).unwrap(), Ok(()), "seed {seed}");
            assert_eq!(replay_growth(&tr).unwrap(), Ok(()));
        }
    }

    #[test]
    fn tampered_trace_is_caught() {
        let tr = (0..40).map(small_run).find(|t| t.steps.len() > 3).unwrap();
        let mut bad = tr.clone();
        bad.steps[1].bad = !bad.steps[1].bad;
        assert!(verify_trace(&bad).unwrap().is_err());
        let mut bad = tr.clone();
        bad.seed += 1;
        assert!(replay_growth(&bad).unwrap().is_err());
    }

    #[test]
    fn termination_is_forced() {
        // the zero matrix can never start: per(A; I_0 \ {i}) is a 1x1 zero
        let d = mu(&[1.0, 0.0, 0.0]);
        let target: Vec<usize> = (4..8).collect();
        let tr = run_growth_process(&d, 8, &target, GrowthParams { t: 2, delta: 0.5 }, &RandomStream::new(0)).unwrap();
        assert_eq!(tr.outcome, GrowthOutcome::Terminated);
        assert_eq!(tr.terminated_at, Some(1));
        assert_eq!(verify_trace(&tr).unwrap(), Ok(()));
    }

    #[test]
    fn growth_config_errors() {
        let d = uniform_distribution(&make_field(3).unwrap());
        let s = RandomStream::new(0);
        let p = GrowthParams { t: 3, delta: 0.3 };
        assert!(run_growth_process(&d, 12, &[0, 1, 2], p, &s).is_err());
        assert!(run_growth_process(&d, 5, &[0, 1, 2, 3, 4, 5], p, &s).is_err());
        assert!(run_growth_process(&d, 12, &[0, 1, 2, 3, 4, 5], GrowthParams { t: 3, delta: 1.0 }, &s).is_err());
        assert!(run_growth_process(&d, 12, &[0, 1, 2, 3, 4, 12], p, &s).is_err());
    }

    #[test]
    fn trace_json_roundtrip() {
        let tr = small_run(3);
        let js = serde_json::to_string(&tr).unwrap();
        let back: GrowthTrace = serde_json::from_str(&js).unwrap();
        assert_eq!(back, tr);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["target"], serde_json::json!([7, 8, 9, 10, 11, 12]));
    }

    #[test]
    fn single_uniform_term_is_uniform() {
        let d = uniform_distribution(&make_field(5).unwrap());
        assert_eq!(exact_sum_distribution(&d, &[1]).unwrap().epsilon(), 0.0);
        assert_eq!(find_q(&d, 0.01).unwrap(), 1);
    }

    #[test]
    fn single_coefficient_permutes_mu() {
        let d = mu(&[0.5, 0.2, 0.2, 0.05, 0.05]);
        let w = exact_weights(&d);
        for c in 1..5u32 {
            let s = exact_sum_distribution(&d, &[0, c, 0]).unwrap();
            for y in 0..5usize {
                assert_eq!(s.exact[(c as usize * y) % 5], w[y]);
            }
        }
    }

    #[test]
    fn sums_normalised() {
        let d = mu(&[0.6, 0.3, 0.1]);
        let s = exact_sum_distribution(&d, &[1, 2, 0, 1, 1]).unwrap();
        let total: f64 = s.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(s.epsilon() >= 0.0 && s.epsilon() <= 1.0 - 1.0 / 3.0);
        let empty = exact_sum_distribution(&d, &[0, 0]).unwrap();
        assert_eq!(empty.probabilities(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn find_q_monotone_in_epsilon() {
        let d = mu(&[0.9, 0.1, 0.0]);
        let mut last = u64::MAX;
        for eps in [0.001, 0.01, 0.05, 0.1, 0.3, 0.6] {
            let q = find_q(&d, eps).unwrap();
            assert!(q <= last);
            last = q;
        }
        let q = find_q(&d, 0.01).unwrap();
        let k = (q / 2) as usize;
        assert!(same_coefficient_criterion(&d, k, 0.01).unwrap());
        assert!(!same_coefficient_criterion(&d, k - 1, 0.01).unwrap());
    }

    #[test]
    fn find_q_errors() {
        assert!(matches!(find_q(&mu(&[0.0, 1.0, 0.0]), 0.1), Err(Error::DegenerateDistribution(_))));
        let u9 = uniform_distribution(&make_field(9).unwrap());
        assert_eq!(find_q(&u9, 0.1).unwrap_err(), Error::NonPrimeField(9));
    }
}
