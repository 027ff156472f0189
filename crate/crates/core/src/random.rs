//! Entry distributions and reproducible, splittable random streams.
//!
//! `RandomStream` is counter based: output `i` (1-based) of a stream with key
//! `k` is `mix(k + i·γ)` where `mix` is the SplitMix64 finalizer and
//! `γ = 0x9e3779b97f4a7c15`. A root stream's key is its seed, so the root
//! sequence coincides with the reference SplitMix64 generator. A child created
//! by `split(index)` has key `mix(mix(parent_key ^ SPLIT_SALT) + (index + 1)·γ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::MatrixFq;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const SPLIT_SALT: u64 = 0x6a09_e667_f3bc_c909;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    path: Vec<u64>,
    counter: u64,
    key: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { seed, path: Vec::new(), counter: 0, key: seed }
    }

    /// Rebuilds a stream from its recorded coordinates.
    pub fn at(seed: u64, path: &[u64], counter: u64) -> Self {
        let mut s = path.iter().fold(Self::new(seed), |s, &i| s.split(i));
        s.counter = counter;
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn path(&self) -> &[u64] {
        &self.path
    }
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent child stream; does not advance `self`.
    pub fn split(&self, index: u64) -> Self {
        let key = mix64(mix64(self.key ^ SPLIT_SALT).wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)));
        let mut path = self.path.clone();
        path.push(index);
        RandomStream { seed: self.seed, path, counter: 0, key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` (Lemire's multiply-and-reject).
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let mut m = self.next_u64() as u128 * bound as u128;
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * bound as u128;
            }
        }
        (m >> 64) as u64
    }
}

/// JSON literal `{"q": 3, "weights": [0.6, 0.3, 0.1]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionLiteral {
    pub q: u64,
    pub weights: Vec<f64>,
}

/// A probability vector μ over the elements of a field.
#[derive(Debug, Clone)]
pub struct EntryDistribution {
    field: FieldSpec,
    weights: Vec<f64>,
    rho: f64,
    support_size: usize,
    uniform: bool,
    alias: AliasTable,
}

#[derive(Debug, Clone)]
struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    /// Vose's construction.
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut prob = vec![1.0; n];
        let mut alias: Vec<u32> = (0..n as u32).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
            prob[s] = scaled[s];
            alias[s] = l as u32;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        AliasTable { prob, alias }
    }

    #[inline]
    fn sample(&self, stream: &mut RandomStream) -> u32 {
        let i = stream.below(self.prob.len() as u64) as usize;
        if stream.next_f64() < self.prob[i] {
            i as u32
        } else {
            self.alias[i]
        }
    }
}

impl EntryDistribution {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    /// Maximum point mass.
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn support_size(&self) -> usize {
        self.support_size
    }
    pub fn is_degenerate(&self) -> bool {
        self.support_size <= 1
    }
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn to_literal(&self) -> DistributionLiteral {
        DistributionLiteral { q: self.field.q() as u64, weights: self.weights.clone() }
    }

    pub fn from_literal(lit: &DistributionLiteral) -> Result<Self> {
        make_distribution(&FieldSpec::new(lit.q)?, &lit.weights)
    }

    #[inline]
    pub fn sample(&self, stream: &mut RandomStream) -> u32 {
        if self.uniform {
            stream.below(self.field.q() as u64) as u32
        } else {
            self.alias.sample(stream)
        }
    }

    pub fn sample_vector(&self, len: usize, stream: &mut RandomStream) -> Vec<u32> {
        (0..len).map(|_| self.sample(stream)).collect()
    }
}

pub fn uniform_distribution(field: &FieldSpec) -> EntryDistribution {
    let q = field.q() as usize;
    let weights = vec![1.0 / q as f64; q];
    EntryDistribution {
        field: field.clone(),
        alias: AliasTable::new(&weights),
        rho: 1.0 / q as f64,
        support_size: q,
        uniform: true,
        weights,
    }
}

pub fn make_distribution(field: &FieldSpec, weights: &[f64]) -> Result<EntryDistribution> {
    let q = field.q() as usize;
    if weights.len() != q {
        return Err(Error::BadWeights(format!("expected {q} weights, got {}", weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::BadWeights(format!("invalid weight {w}")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(format!("weights sum to {sum}")));
    }
    let uniform = weights.iter().all(|&w| w == weights[0]);
    if !field.is_prime() && !uniform {
        return Err(Error::NonPrimeField(field.q()));
    }
    if uniform {
        return Ok(uniform_distribution(field));
    }
    Ok(EntryDistribution {
        field: field.clone(),
        rho: weights.iter().cloned().fold(0.0, f64::max),
        support_size: weights.iter().filter(|&&w| w > 0.0).count(),
        uniform: false,
        alias: AliasTable::new(weights),
        weights: weights.to_vec(),
    })
}

/// `n×n` matrix with i.i.d. μ entries drawn in row-major order.
pub fn sample_matrix(n: usize, dist: &EntryDistribution, stream: &mut RandomStream) -> MatrixFq {
    MatrixFq::from_raw(&dist.field, n, n, dist.sample_vector(n * n, stream))
}
