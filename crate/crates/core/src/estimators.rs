//! Exact enumeration, closed forms, Monte Carlo estimation, brute-force
//! linear-map laws and the bound checker.
//!
//! Monte Carlo sample `i` is always drawn from `RandomStream::new(seed).split(i)`,
//! so every count is independent of how many workers share the work.

use std::collections::HashMap;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{build_h, detect_e, SearchConfig};
use crate::field::FieldSpec;
use crate::matrix::MatrixFq;
use crate::processes::exact_weights;
use crate::random::{sample_matrix, DistributionLiteral, EntryDistribution, RandomStream};

/// Largest number of matrices `q^{n²}` swept by exact enumeration.
pub const ENUMERATION_CAP: u64 = 50_000_000;
/// Largest number of vectors `q^n` swept by the linear-map brute force.
pub const LINEAR_MAP_CAP: u64 = 10_000_000;
/// Fewest accepted draws a conditional estimate may rest on.
pub const MIN_ACCEPTED: u64 = 100;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_900_4;
/// Constant in the `1/p ± C/p³` windows.
pub const WINDOW_C: f64 = 11.0;

const MC_BLOCK: u64 = 1024;
const ENUM_CHUNKS: u64 = 256;

pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::BadConfig("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::BadConfig(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// `α_q = 1 − ∏_{i≥1}(1 − q^{−i})`, truncated once the tail `Σ_{i>m} q^{−i}` drops below `tol`.
pub fn alpha(q: u64, tol: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::BadConfig(format!("alpha needs q >= 2, got {q}")));
    }
    if !(tol > 0.0) {
        return Err(Error::BadConfig(format!("tolerance must be positive, got {tol}")));
    }
    let qf = q as f64;
    let mut prod = 1.0;
    let mut term = 1.0;
    loop {
        term /= qf;
        prod *= 1.0 - term;
        // tail after this factor is term / (q − 1)
        if term / (qf - 1.0) < tol {
            break;
        }
    }
    Ok(1.0 - prod)
}

/// `1 − ∏_{j=1}^{n}(1 − q^{−j})` exactly.
pub fn exact_det_singular_prob(n: usize, q: u64) -> BigRational {
    let q = BigInt::from(q);
    let mut prod = BigRational::one();
    let mut power = BigInt::one();
    for _ in 0..n {
        power *= &q;
        prod *= BigRational::one() - BigRational::new(BigInt::one(), power.clone());
    }
    BigRational::one() - prod
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Per,
    Det,
}

impl Statistic {
    pub fn eval(self, a: &MatrixFq) -> Result<u32> {
        Ok(match self {
            Statistic::Per => a.permanent()?.value(),
            Statistic::Det => a.determinant()?.value(),
        })
    }
}

/// Exact counts of `n×n` matrices over `F_q` by value of the statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCounts {
    pub q: u32,
    pub n: usize,
    pub statistic: Statistic,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ExactCounts {
    pub fn probability(&self, z: u32) -> BigRational {
        BigRational::new(self.counts[z as usize].into(), self.total.into())
    }

    /// True when every nonzero value is attained equally often.
    pub fn nonzero_equidistributed(&self) -> bool {
        self.counts[1..].windows(2).all(|w| w[0] == w[1])
    }
}

fn enumeration_size(n: usize, q: u32) -> Result<u64> {
    let cells = (n * n) as u32;
    match (q as u64).checked_pow(cells) {
        Some(v) if v <= ENUMERATION_CAP => Ok(v),
        other => Err(Error::SizeCap {
            what: "exact enumeration q^(n^2)",
            size: other.unwrap_or(u64::MAX),
            cap: ENUMERATION_CAP,
        }),
    }
}

/// Linear coefficients of the statistic in the last row, given the first `n−1` rows.
fn last_row_cofactors(prefix: &MatrixFq, stat: Statistic) -> Vec<u32> {
    let m = prefix.rows();
    let n = prefix.cols();
    let f = prefix.field();
    let rows: Vec<usize> = (0..m).collect();
    (0..n)
        .map(|j| {
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            match stat {
                Statistic::Per => prefix.per_rows_cols(&rows, &cols),
                Statistic::Det => {
                    let minor = prefix.submatrix_unchecked(&rows, &cols);
                    let d = minor.determinant().map(|d| d.value()).unwrap_or(0);
                    if (m + j) % 2 == 1 {
                        f.neg(d)
                    } else {
                        d
                    }
                }
            }
        })
        .collect()
}

/// Sweeps all last rows with an odometer, updating `Σ a_j c_j` one digit at a time.
fn sweep_last_row(f: &FieldSpec, cof: &[u32], mut visit: impl FnMut(&[u32], u32)) {
    let n = cof.len();
    let q = f.q();
    let mut digits = vec![0u32; n];
    let mut acc = 0u32;
    loop {
        visit(&digits, acc);
        let mut j = 0;
        loop {
            if j == n {
                return;
            }
            let old = digits[j];
            let new = if old + 1 == q { 0 } else { old + 1 };
            digits[j] = new;
            acc = f.add(acc, f.mul(f.sub(new, old), cof[j]));
            if new != 0 {
                break;
            }
            j += 1;
        }
    }
}

fn decode_digits(mut index: u64, q: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (index % q as u64) as u32;
        index /= q as u64;
    }
    out
}

fn increment_digits(digits: &mut [u32], q: u32) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return;
        }
        *d = 0;
    }
}

/// Runs `per_prefix` on every `(n−1)×n` prefix, chunked deterministically.
fn sweep_prefixes<T: Send>(
    n: usize,
    f: &FieldSpec,
    workers: usize,
    per_chunk: impl Fn() -> T + Sync,
    per_prefix: impl Fn(&mut T, &MatrixFq) + Sync,
) -> Result<Vec<T>> {
    let q = f.q();
    let len = (n - 1) * n;
    let prefixes = (q as u64).pow(len as u32);
    let chunks = ENUM_CHUNKS.min(prefixes);
    let ranges: Vec<Range<u64>> = (0..chunks).map(|c| c * prefixes / chunks..(c + 1) * prefixes / chunks).collect();
    with_pool(workers, || {
        ranges
            .par_iter()
            .map(|r| {
                let mut state = per_chunk();
                let mut digits = decode_digits(r.start, q, len);
                for _ in r.clone() {
                    let prefix = MatrixFq::from_raw(f, n - 1, n, digits.clone());
                    per_prefix(&mut state, &prefix);
                    increment_digits(&mut digits, q);
                }
                state
            })
            .collect()
    })
}

/// Exact value counts of the statistic over all `q^{n²}` uniform matrices.
pub fn enumerate_exact(n: usize, field: &FieldSpec, stat: Statistic, workers: usize) -> Result<ExactCounts> {
    let q = field.q();
    let total = enumeration_size(n, q)?;
    let mut counts = vec![0u64; q as usize];
    if n == 0 {
        counts[1] = 1;
    } else {
        let parts = sweep_prefixes(
            n,
            field,
            workers,
            || vec![0u64; q as usize],
            |hist, prefix| {
                let cof = last_row_cofactors(prefix, stat);
                sweep_last_row(field, &cof, |_, v| hist[v as usize] += 1);
            },
        )?;
        for part in parts {
            for (c, p) in counts.iter_mut().zip(part) {
                *c += p;
            }
        }
    }
    Ok(ExactCounts { q, n, statistic: stat, counts, total })
}

/// Exact law of the statistic for i.i.d. μ entries, summed in floating point.
pub fn enumerate_distribution(n: usize, dist: &EntryDistribution, stat: Statistic, workers: usize) -> Result<Vec<f64>> {
    let field = dist.field();
    let q = field.q();
    enumeration_size(n, q)?;
    let w = dist.weights();
    let mut law = vec![0.0; q as usize];
    if n == 0 {
        law[1] = 1.0;
        return Ok(law);
    }
    let parts = sweep_prefixes(
        n,
        field,
        workers,
        || vec![0.0; q as usize],
        |acc, prefix| {
            let pw: f64 = prefix.data().iter().map(|&v| w[v as usize]).product();
            if pw == 0.0 {
                return;
            }
            let cof = last_row_cofactors(prefix, stat);
            let mut row = vec![0.0; q as usize];
            sweep_last_row(field, &cof, |digits, v| {
                row[v as usize] += digits.iter().map(|&d| w[d as usize]).product::<f64>();
            });
            for (a, r) in acc.iter_mut().zip(row) {
                *a += pw * r;
            }
        },
    )?;
    for part in parts {
        for (l, p) in law.iter_mut().zip(part) {
            *l += p;
        }
    }
    Ok(law)
}

/// A Monte Carlo proportion with its Wilson 99% interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub point: f64,
    /// Samples the proportion is taken over (accepted draws for conditional estimates).
    pub samples: u64,
    pub successes: u64,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
    pub workers: usize,
    /// Total draws, when rejection sampling discarded some.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drawn: Option<u64>,
}

impl Estimate {
    pub fn from_counts(successes: u64, samples: u64, seed: u64, workers: usize) -> Self {
        let (lo, hi) = wilson_interval(successes, samples, Z99);
        let point = if samples == 0 { 0.0 } else { successes as f64 / samples as f64 };
        Estimate { point, samples, successes, lo: lo.min(point), hi: hi.max(point), seed, workers, drawn: None }
    }

    /// Binomial standard error at the point estimate.
    pub fn sigma(&self) -> f64 {
        (self.point * (1.0 - self.point) / self.samples as f64).sqrt()
    }

    /// Binomial standard error at a reference value.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Predicates on a sampled matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Event {
    Always,
    PerEquals { value: u32 },
    DetEquals { value: u32 },
    /// `E(s, ℓ)`.
    E { s: usize, ell: usize },
    RankHAtLeast { r: usize },
    And { of: Vec<Event> },
    Or { of: Vec<Event> },
    Not { of: Box<Event> },
}

impl Event {
    pub fn eval(&self, a: &MatrixFq) -> Result<bool> {
        Ok(match self {
            Event::Always => true,
            Event::PerEquals { value } => a.permanent()?.value() == *value,
            Event::DetEquals { value } => a.determinant()?.value() == *value,
            Event::E { s, ell } => detect_e(a, *s, *ell, &SearchConfig::default())?.holds,
            Event::RankHAtLeast { r } => build_h(a)?.rank() >= *r,
            Event::And { of } => {
                for e in of {
                    if !e.eval(a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Event::Or { of } => {
                for e in of {
                    if e.eval(a)? {
                        return Ok(true);
                    }
                }
                false
            }
            Event::Not { of } => !of.eval(a)?,
        })
    }

    /// Rejects values outside the field before any sampling happens.
    pub fn validate(&self, q: u32) -> Result<()> {
        match self {
            Event::PerEquals { value } | Event::DetEquals { value } if *value >= q => {
                Err(Error::OutOfRange { index: *value as usize, limit: q as usize })
            }
            Event::And { of } | Event::Or { of } => of.iter().try_for_each(|e| e.validate(q)),
            Event::Not { of } => of.validate(q),
            _ => Ok(()),
        }
    }
}

fn check_mc(samples: u64, dist: &EntryDistribution, events: &[&Event]) -> Result<()> {
    if samples == 0 {
        return Err(Error::BadConfig("N must be at least 1".into()));
    }
    events.iter().try_for_each(|e| e.validate(dist.field().q()))
}

/// Maps every sample block through `f` in parallel, preserving block order.
fn mc_blocks<T: Send>(
    samples: u64,
    workers: usize,
    f: impl Fn(Range<u64>) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    let blocks: Vec<Range<u64>> =
        (0..samples.div_ceil(MC_BLOCK)).map(|b| b * MC_BLOCK..((b + 1) * MC_BLOCK).min(samples)).collect();
    with_pool(workers, || blocks.into_par_iter().map(&f).collect::<Result<Vec<T>>>())?
}

/// Draws the `i`-th Monte Carlo matrix of the run rooted at `root`.
pub fn mc_sample(root: &RandomStream, i: u64, n: usize, dist: &EntryDistribution) -> MatrixFq {
    sample_matrix(n, dist, &mut root.split(i))
}

/// Estimates `Pr[event]` from `samples` matrices with i.i.d. μ entries.
pub fn mc_probability(
    event: &Event,
    n: usize,
    dist: &EntryDistribution,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    check_mc(samples, dist, &[event])?;
    let root = RandomStream::new(seed);
    let parts = mc_blocks(samples, workers, |r| {
        let mut hits = 0u64;
        for i in r {
            hits += event.eval(&mc_sample(&root, i, n, dist))? as u64;
        }
        Ok(hits)
    })?;
    Ok(Estimate::from_counts(parts.iter().sum(), samples, seed, workers))
}

/// Per-value sample counts of the statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueCounts {
    pub statistic: Statistic,
    pub counts: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl ValueCounts {
    pub fn estimate(&self, z: u32) -> Estimate {
        Estimate::from_counts(self.counts[z as usize], self.samples, self.seed, self.workers)
    }
}

pub fn mc_value_counts(
    stat: Statistic,
    n: usize,
    dist: &EntryDistribution,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ValueCounts> {
    check_mc(samples, dist, &[])?;
    let q = dist.field().q() as usize;
    let root = RandomStream::new(seed);
    let parts = mc_blocks(samples, workers, |r| {
        let mut hist = vec![0u64; q];
        for i in r {
            hist[stat.eval(&mc_sample(&root, i, n, dist))? as usize] += 1;
        }
        Ok(hist)
    })?;
    let mut counts = vec![0u64; q];
    for part in parts {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(ValueCounts { statistic: stat, counts, samples, seed, workers })
}

/// Estimates `Pr[target | cond]` by rejection: draws failing `cond` are discarded.
pub fn conditional_probability(
    cond: &Event,
    target: &Event,
    n: usize,
    dist: &EntryDistribution,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    check_mc(samples, dist, &[cond, target])?;
    let root = RandomStream::new(seed);
    let parts = mc_blocks(samples, workers, |r| {
        let (mut accepted, mut hits) = (0u64, 0u64);
        for i in r {
            let a = mc_sample(&root, i, n, dist);
            if cond.eval(&a)? {
                accepted += 1;
                hits += target.eval(&a)? as u64;
            }
        }
        Ok((accepted, hits))
    })?;
    let accepted: u64 = parts.iter().map(|p| p.0).sum();
    let hits: u64 = parts.iter().map(|p| p.1).sum();
    if accepted < MIN_ACCEPTED {
        return Err(Error::ConditioningTooRare { accepted, drawn: samples, required: MIN_ACCEPTED });
    }
    let mut est = Estimate::from_counts(hits, accepted, seed, workers);
    est.drawn = Some(samples);
    Ok(est)
}

/// Exact law of `Mx` for a random vector `x` with i.i.d. μ entries.
///
/// The preimages of each image `z` are tallied by composition, i.e. by how
/// often each field value occurs in `x`. Each composition's probability is
/// computed once with exact rational weights.
#[derive(Debug, Clone)]
pub struct LinearMapLaw {
    comp_weights: Vec<BigRational>,
    tallies: HashMap<Vec<u32>, Vec<(usize, u64)>>,
}

impl LinearMapLaw {
    pub fn new(m: &MatrixFq, dist: &EntryDistribution) -> Result<Self> {
        let f = m.field();
        if dist.field() != f {
            return Err(Error::FieldMismatch { left: f.q(), right: dist.field().q() });
        }
        let q = f.q();
        let cols = m.cols();
        let rows = m.rows();
        match (q as u64).checked_pow(cols as u32) {
            Some(v) if v <= LINEAR_MAP_CAP && cols < 256 => {}
            other => {
                return Err(Error::SizeCap {
                    what: "linear map brute force q^cols",
                    size: other.unwrap_or(u64::MAX),
                    cap: LINEAR_MAP_CAP,
                })
            }
        }
        let mut comp_ids: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut raw: HashMap<Vec<u32>, HashMap<usize, u64>> = HashMap::new();
        let mut x = vec![0u32; cols];
        let mut image = vec![0u32; rows];
        let mut comp = vec![0u8; q as usize];
        comp[0] = cols as u8;
        'sweep: loop {
            let next_id = comp_ids.len();
            let id = *comp_ids.entry(comp.clone()).or_insert(next_id);
            *raw.entry(image.clone()).or_default().entry(id).or_default() += 1;
            // odometer step with incremental update of Mx
            let mut j = 0;
            loop {
                if j == cols {
                    break 'sweep;
                }
                let old = x[j];
                let new = if old + 1 == q { 0 } else { old + 1 };
                x[j] = new;
                comp[old as usize] -= 1;
                comp[new as usize] += 1;
                let delta = f.sub(new, old);
                for (i, v) in image.iter_mut().enumerate() {
                    *v = f.add(*v, f.mul(m.get(i, j), delta));
                }
                if new != 0 {
                    break;
                }
                j += 1;
            }
        }
        let weights = exact_weights(dist);
        let mut comp_weights = vec![BigRational::zero(); comp_ids.len()];
        for (c, id) in comp_ids {
            comp_weights[id] = c
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| num_traits::pow(weights[v].clone(), k as usize))
                .product();
        }
        let tallies = raw.into_iter().map(|(z, t)| (z, t.into_iter().collect())).collect();
        Ok(LinearMapLaw { comp_weights, tallies })
    }

    fn combine(&self, counts: impl IntoIterator<Item = (usize, u64)>) -> BigRational {
        let mut per_comp = vec![0u64; self.comp_weights.len()];
        for (id, c) in counts {
            per_comp[id] += c;
        }
        per_comp
            .into_iter()
            .zip(&self.comp_weights)
            .filter(|(c, _)| *c > 0)
            .map(|(c, w)| w * BigRational::from_integer(c.into()))
            .sum()
    }

    pub fn probability(&self, z: &[u32]) -> BigRational {
        self.tallies.get(z).map(|t| self.combine(t.iter().copied())).unwrap_or_else(BigRational::zero)
    }

    /// Every attained image with its exact probability.
    pub fn support(&self) -> Vec<(Vec<u32>, BigRational)> {
        let mut out: Vec<_> = self.tallies.iter().map(|(z, t)| (z.clone(), self.combine(t.iter().copied()))).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn max_probability(&self) -> BigRational {
        self.tallies.values().map(|t| self.combine(t.iter().copied())).max().unwrap_or_else(BigRational::zero)
    }

    /// `Pr[Mx has at most ℓ nonzero entries]`.
    pub fn hamming_tail(&self, ell: usize) -> BigRational {
        self.combine(
            self.tallies
                .iter()
                .filter(|(z, _)| z.iter().filter(|&&v| v != 0).count() <= ell)
                .flat_map(|(_, t)| t.iter().copied()),
        )
    }
}

/// Exact `Pr[Mx = z]` by enumerating every `x`.
pub fn brute_force_linear_map(m: &MatrixFq, dist: &EntryDistribution, z: &[u32]) -> Result<BigRational> {
    if z.len() != m.rows() {
        return Err(Error::BadConfig(format!("z has length {} but M has {} rows", z.len(), m.rows())));
    }
    Ok(LinearMapLaw::new(m, dist)?.probability(z))
}

/// `ρ^r` as an exact rational.
pub fn rho_power(dist: &EntryDistribution, r: usize) -> BigRational {
    let rho = exact_weights(dist).into_iter().max().unwrap_or_else(BigRational::zero);
    num_traits::pow(rho, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// `Pr[per = 0] ≥ 1/q` for every `n`, uniform entries.
    TrivialLowerBound,
    /// `limsup Pr[per = 0] < α_q`, uniform entries.
    SeparationAllP,
    /// `Pr[per = 0] ≤ 1/q + C/q³` for `n ≥ 3`, uniform entries.
    AsymptoticP,
    /// `limsup Pr[per = z] ≤ α_p − δ_p`, μ entries over a prime field.
    SeparationGeneral,
    /// `1/p − C/p³ ≤ lim Pr[per = z] ≤ 1/p + C/p³`, μ entries over a prime field.
    AsymptoticGeneral,
}

impl Claim {
    pub const ALL: [Claim; 5] = [
        Claim::TrivialLowerBound,
        Claim::SeparationAllP,
        Claim::AsymptoticP,
        Claim::SeparationGeneral,
        Claim::AsymptoticGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::TrivialLowerBound => "trivial-lower-bound",
            Claim::SeparationAllP => "separation-all-p",
            Claim::AsymptoticP => "asymptotic-p",
            Claim::SeparationGeneral => "separation-general",
            Claim::AsymptoticGeneral => "asymptotic-general",
        }
    }

    pub fn parse(s: &str) -> Result<Claim> {
        Claim::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::BadConfig(format!("unknown claim '{s}'")))
    }

    fn uniform_only(self) -> bool {
        matches!(self, Claim::TrivialLowerBound | Claim::SeparationAllP | Claim::AsymptoticP)
    }

    /// Claims about a limit cannot be refuted at finite `n`.
    fn asymptotic(self) -> bool {
        matches!(self, Claim::SeparationAllP | Claim::SeparationGeneral | Claim::AsymptoticGeneral)
    }

    /// Whether a Monte Carlo interval alone may refute the claim.
    fn refutable_by_sampling(self) -> bool {
        self == Claim::TrivialLowerBound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Supported,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// Outcome of testing one claim at one value `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub claim: Claim,
    pub n: usize,
    pub q: u32,
    pub weights: Vec<f64>,
    pub z: u32,
    pub verdict: Verdict,
    /// Signed distance from the measured value to the nearest edge of the
    /// claimed region; positive inside.
    pub margin: f64,
    /// Claimed region `[lower, upper]` (either side may be open-ended).
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// The upper edge is excluded.
    pub strict: bool,
    pub method: Method,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Estimate>,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_p: Option<f64>,
}

/// `δ_p = (1 − 2α_p)p^{−2}/10`.
pub fn delta_p(p: u32) -> Result<f64> {
    let a = alpha(p as u64, 1e-12)?;
    Ok((1.0 - 2.0 * a) / (p as f64 * p as f64) / 10.0)
}

fn rational_f64(num: i64, den: i64) -> f64 {
    BigRational::new(num.into(), den.into()).to_f64().unwrap()
}

struct Region {
    lower: Option<f64>,
    upper: Option<f64>,
    strict: bool,
}

impl Region {
    fn contains_value(&self, v: f64) -> bool {
        self.lower.map_or(true, |l| v >= l) && self.upper.map_or(true, |u| if self.strict { v < u } else { v <= u })
    }

    fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        self.contains_value(lo) && self.contains_value(hi)
    }

    fn disjoint_from(&self, lo: f64, hi: f64) -> bool {
        self.lower.is_some_and(|l| hi < l) || self.upper.is_some_and(|u| if self.strict { lo >= u } else { lo > u })
    }

    fn margin(&self, v: f64) -> f64 {
        let a = self.lower.map_or(f64::INFINITY, |l| v - l);
        let b = self.upper.map_or(f64::INFINITY, |u| u - v);
        a.min(b)
    }
}

fn validate_claims(claims: &[Claim], n: usize, dist: &EntryDistribution) -> Result<()> {
    let f = dist.field();
    if f.p() == 2 {
        return Err(Error::CharacteristicTwo(format!("claims about F_{} need odd characteristic", f.q())));
    }
    for &c in claims {
        if c.uniform_only() && !dist.is_uniform() {
            return Err(Error::BadConfig(format!("claim {} concerns uniformly random entries", c.name())));
        }
        if c == Claim::AsymptoticP && n < 3 {
            return Err(Error::BadN { claim: c.name().into(), n, min: 3 });
        }
        if !c.uniform_only() {
            if !f.is_prime() {
                return Err(Error::NonPrimeField(f.q()));
            }
            if dist.is_degenerate() {
                return Err(Error::DegenerateDistribution(dist.rho()));
            }
        }
    }
    Ok(())
}

/// Evaluates each claim at size `n`, exactly when `q^{n²}` is enumerable and
/// otherwise from `samples` Monte Carlo draws.
pub fn check_bounds(
    claims: &[Claim],
    n: usize,
    dist: &EntryDistribution,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<BoundVerdict>> {
    validate_claims(claims, n, dist)?;
    let f = dist.field();
    let q = f.q();
    let p = f.p();
    let exact = enumeration_size(n, q).is_ok();
    let (values, counts) = if exact {
        let law = if dist.is_uniform() {
            let c = enumerate_exact(n, f, Statistic::Per, workers)?;
            (0..q).map(|z| c.probability(z).to_f64().unwrap()).collect()
        } else {
            enumerate_distribution(n, dist, Statistic::Per, workers)?
        };
        (law, None)
    } else {
        let c = mc_value_counts(Statistic::Per, n, dist, samples, seed, workers)?;
        ((0..q).map(|z| c.estimate(z).point).collect(), Some(c))
    };
    let dp = if claims.contains(&Claim::SeparationGeneral) { Some(delta_p(p)?) } else { None };
    let (qi, pi) = (q as i64, p as i64);
    let mut out = Vec::new();
    for &claim in claims {
        let (region, zs): (Region, Vec<u32>) = match claim {
            Claim::TrivialLowerBound => (Region { lower: Some(rational_f64(1, qi)), upper: None, strict: false }, vec![0]),
            Claim::SeparationAllP => (Region { lower: None, upper: Some(alpha(q as u64, 1e-12)?), strict: true }, vec![0]),
            Claim::AsymptoticP => {
                (Region { lower: None, upper: Some(rational_f64(qi * qi + 11, qi * qi * qi)), strict: false }, vec![0])
            }
            Claim::SeparationGeneral => {
                (Region { lower: None, upper: Some(alpha(p as u64, 1e-12)? - dp.unwrap()), strict: false }, (0..q).collect())
            }
            Claim::AsymptoticGeneral => (
                Region {
                    lower: Some(rational_f64(pi * pi - 11, pi * pi * pi)),
                    upper: Some(rational_f64(pi * pi + 11, pi * pi * pi)),
                    strict: false,
                },
                (0..q).collect(),
            ),
        };
        for z in zs {
            let value = values[z as usize];
            let estimate = counts.as_ref().map(|c| c.estimate(z));
            let verdict = match &estimate {
                None if region.contains_value(value) => Verdict::Supported,
                None if claim.asymptotic() => Verdict::Inconclusive,
                None => Verdict::Violated,
                Some(e) if region.contains_interval(e.lo, e.hi) => Verdict::Supported,
                Some(e) if region.disjoint_from(e.lo, e.hi) && claim.refutable_by_sampling() => Verdict::Violated,
                Some(_) => Verdict::Inconclusive,
            };
            out.push(BoundVerdict {
                claim,
                n,
                q,
                weights: dist.weights().to_vec(),
                z,
                verdict,
                margin: region.margin(value),
                lower: region.lower,
                upper: region.upper,
                strict: region.strict,
                method: if exact { Method::Exact } else { Method::MonteCarlo },
                value,
                estimate,
                c: WINDOW_C,
                delta_p: if claim == Claim::SeparationGeneral { dp } else { None },
            });
        }
    }
    Ok(out)
}

/// The distribution literal a verdict was computed under.
pub fn verdict_distribution(v: &BoundVerdict) -> DistributionLiteral {
    DistributionLiteral { q: v.q as u64, weights: v.weights.clone() }
}
