//! Slow, independent reference implementations used as test oracles.
#![allow(dead_code)]

use permlab::{FieldSpec, MatrixFq};

/// Schoolbook arithmetic on base-`p` digit vectors modulo the field's polynomial.
pub struct Oracle {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

impl Oracle {
    pub fn new(f: &FieldSpec) -> Self {
        Oracle { p: f.p() as u64, k: f.k() as usize, modulus: f.modulus().iter().map(|&c| c as u64).collect() }
    }

    fn digits(&self, mut v: u32) -> Vec<u64> {
        let mut out = vec![0; self.k];
        for d in out.iter_mut() {
            *d = v as u64 % self.p;
            v /= self.p as u32;
        }
        out
    }

    fn value(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.value(&s)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let s: Vec<u64> = self.digits(a).iter().map(|u| (self.p - u) % self.p).collect();
        self.value(&s)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p) as u32;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        // x^k = −(m_0 + … + m_{k−1} x^{k−1})
        for d in (self.k..2 * self.k).rev() {
            let c = prod[d];
            prod[d] = 0;
            for i in 0..self.k {
                let sub = c * self.modulus[i] % self.p;
                prod[d - self.k + i] = (prod[d - self.k + i] + self.p - sub) % self.p;
            }
        }
        self.value(&prod[..self.k])
    }
}

/// Calls `visit(perm, sign)` for every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], bool)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut odd = false;
    visit(&perm, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            visit(&perm, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn perm_sum(a: &MatrixFq, signed: bool) -> u32 {
    let o = Oracle::new(a.field());
    let n = a.rows();
    let mut acc = 0;
    for_each_permutation(n, |perm, odd| {
        let term = (0..n).fold(1, |t, i| o.mul(t, a.get(i, perm[i])));
        acc = o.add(acc, if signed && odd { o.neg(term) } else { term });
    });
    acc
}

/// Permanent as the sum over all `n!` permutations.
pub fn permanent(a: &MatrixFq) -> u32 {
    perm_sum(a, false)
}

/// Determinant by the Leibniz formula.
pub fn determinant(a: &MatrixFq) -> u32 {
    perm_sum(a, true)
}

/// All `q^{rows·cols}` matrices, in lexicographic order of their entries.
pub fn all_matrices(f: &FieldSpec, rows: usize, cols: usize) -> impl Iterator<Item = MatrixFq> + '_ {
    let q = f.q() as u64;
    let cells = (rows * cols) as u32;
    (0..q.pow(cells)).map(move |mut idx| {
        let mut data = vec![0u32; rows * cols];
        for d in data.iter_mut() {
            *d = (idx % q) as u32;
            idx /= q;
        }
        MatrixFq::new(f, rows, cols, data).unwrap()
    })
}

/// `per(A;I)` straight from the definition: top `n − |I|` rows, columns outside `I`.
pub fn per_sub(a: &MatrixFq, deleted: &[usize]) -> u32 {
    let n = a.rows();
    let rows: Vec<usize> = (0..n - deleted.len()).collect();
    let cols: Vec<usize> = (0..n).filter(|c| !deleted.contains(c)).collect();
    permanent(&a.submatrix(&rows, &cols).unwrap())
}
