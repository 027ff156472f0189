//! Witness events for nonzero sub-permanents, the H matrix and its graph,
//! triangle finding, and the linear-dependence matrices `M_j`.
//!
//! Terminology: for an `n×n` matrix `A` and a column set `I` with `|I| = s`,
//! `per(A;I)` is the permanent of the top `n−s` rows with the columns of `I`
//! removed. `E(s, ℓ)` holds when there are `ℓ` pairwise disjoint size-`s`
//! sets with nonzero `per(A;I)`; `E(s)` is `E(s, 1)`.

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::{check_index_set, MatrixFq};

/// Largest `C(n,s)` scanned exactly for `ℓ = 1`.
pub const EXACT_SINGLE_CAP: u128 = 1_000_000;
/// Largest `C(n,s)` for the exact disjoint-packing search (`ℓ > 1`).
pub const EXACT_PACKING_CAP: u128 = 100_000;
/// Backtracking node budget before the exact packing search gives up.
const PACKING_NODE_BUDGET: u64 = 10_000_000;
/// Largest `n` accepted by [`build_h`].
pub const H_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Fall back to first-fit search when exact search is too large.
    pub allow_greedy: bool,
    /// Number of cyclic column relabelings tried by the first-fit search.
    pub greedy_restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { allow_greedy: true, greedy_restarts: 1 }
    }
}

/// Outcome of an `E(s, ℓ)` search. Witness sets serialize 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventReport {
    pub s: usize,
    pub ell: usize,
    pub holds: bool,
    #[serde(with = "crate::index_serde::sets")]
    pub witnesses: Vec<Vec<usize>>,
    pub exhaustive: bool,
}

fn validate(a: &MatrixFq, s: usize, ell: usize) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if s > n {
        return Err(Error::OutOfRange { index: s, limit: n });
    }
    if ell == 0 {
        return Err(Error::BadConfig("ell must be at least 1".into()));
    }
    Ok(n)
}

/// Decides `E(s, ℓ)` for `A`, exactly when affordable.
pub fn detect_e(a: &MatrixFq, s: usize, ell: usize, cfg: &SearchConfig) -> Result<EventReport> {
    let n = validate(a, s, ell)?;
    let report = |holds, witnesses, exhaustive| EventReport { s, ell, holds, witnesses, exhaustive };

    if s == 0 {
        // the empty set is disjoint from itself
        let holds = a.per_sub_raw(&[]) != 0;
        let w = if holds { vec![Vec::new(); ell] } else { Vec::new() };
        return Ok(report(holds, w, true));
    }
    if s * ell > n {
        return Ok(report(false, Vec::new(), true));
    }
    let count = binomial(n as u64, s as u64);
    if ell == 1 {
        if count <= EXACT_SINGLE_CAP {
            let w: Vec<_> = Combinations::new(n, s).find(|set| a.per_sub_raw(set) != 0).into_iter().collect();
            return Ok(report(!w.is_empty(), w, true));
        }
    } else if count <= EXACT_PACKING_CAP {
        if let Some(found) = exact_packing(a, n, s, ell) {
            let holds = !found.is_empty();
            return Ok(report(holds, found, true));
        }
    }
    if !cfg.allow_greedy {
        return Err(Error::SizeCap {
            what: "exact E(s,ell) search (C(n,s))",
            size: count.min(u64::MAX as u128) as u64,
            cap: if ell == 1 { EXACT_SINGLE_CAP as u64 } else { EXACT_PACKING_CAP as u64 },
        });
    }
    let found = greedy_packing(a, n, s, ell, cfg.greedy_restarts.max(1));
    let holds = found.len() >= ell;
    Ok(report(holds, if holds { found } else { Vec::new() }, false))
}

/// `ℓ` disjoint witnesses, an empty vector if none exist, or `None` when the
/// node budget runs out.
fn exact_packing(a: &MatrixFq, n: usize, s: usize, ell: usize) -> Option<Vec<Vec<usize>>> {
    if n > 128 {
        return None;
    }
    let witnesses: Vec<Vec<usize>> = Combinations::new(n, s).filter(|set| a.per_sub_raw(set) != 0).collect();
    let masks: Vec<u128> = witnesses.iter().map(|w| w.iter().fold(0u128, |m, &i| m | 1 << i)).collect();

    struct Search<'a> {
        masks: &'a [u128],
        ell: usize,
        chosen: Vec<usize>,
        nodes: u64,
    }
    impl Search<'_> {
        fn go(&mut self, start: usize, used: u128) -> Option<bool> {
            if self.chosen.len() == self.ell {
                return Some(true);
            }
            for idx in start..self.masks.len() {
                // not enough candidates left to finish
                if self.masks.len() - idx < self.ell - self.chosen.len() {
                    break;
                }
                self.nodes += 1;
                if self.nodes > PACKING_NODE_BUDGET {
                    return None;
                }
                if self.masks[idx] & used != 0 {
                    continue;
                }
                self.chosen.push(idx);
                if self.go(idx + 1, used | self.masks[idx])? {
                    return Some(true);
                }
                self.chosen.pop();
            }
            Some(false)
        }
    }

    let mut search = Search { masks: &masks, ell, chosen: Vec::new(), nodes: 0 };
    match search.go(0, 0)? {
        true => Some(search.chosen.iter().map(|&i| witnesses[i].clone()).collect()),
        false => Some(Vec::new()),
    }
}

/// First-fit over lexicographic sets; each restart relabels columns by a cyclic shift.
fn greedy_packing(a: &MatrixFq, n: usize, s: usize, ell: usize, restarts: usize) -> Vec<Vec<usize>> {
    let mut best = Vec::new();
    for shift in 0..restarts.min(n) {
        let mut used = vec![false; n];
        let mut found: Vec<Vec<usize>> = Vec::new();
        for set in Combinations::new(n, s) {
            let mut real: Vec<usize> = set.iter().map(|&i| (i + shift) % n).collect();
            if real.iter().any(|&i| used[i]) {
                continue;
            }
            real.sort_unstable();
            if a.per_sub_raw(&real) != 0 {
                for &i in &real {
                    used[i] = true;
                }
                found.push(real);
                if found.len() == ell {
                    return found;
                }
            }
        }
        if found.len() > best.len() {
            best = found;
        }
    }
    best
}

/// Fast exact check of `E(s)`.
pub fn holds_e(a: &MatrixFq, s: usize) -> Result<bool> {
    Ok(detect_e(a, s, 1, &SearchConfig { allow_greedy: false, greedy_restarts: 1 })?.holds)
}

/// Symmetric hollow matrix with `h_ij = per(A; {i, j})` for `i ≠ j`.
pub fn build_h(a: &MatrixFq) -> Result<MatrixFq> {
    let n = validate(a, 0, 1)?;
    if n < 2 {
        return Err(Error::BadConfig(format!("H needs n >= 2, got {n}")));
    }
    if n > H_CAP {
        return Err(Error::SizeCap { what: "H matrix", size: n as u64, cap: H_CAP as u64 });
    }
    let mut h = MatrixFq::zeros(a.field(), n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = a.per_sub_raw(&[i, j]);
            h.set(i, j, v);
            h.set(j, i, v);
        }
    }
    Ok(h)
}

fn is_hollow_symmetric(b: &MatrixFq) -> bool {
    let n = b.rows();
    b.is_square()
        && (0..n).all(|i| b.get(i, i) == 0 && (0..i).all(|j| b.get(i, j) == b.get(j, i)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hollow3Certificate {
    pub rank3: bool,
    pub det: FieldElem,
}

/// For a symmetric zero-diagonal 3×3 `B`: `det B = 2·b12·b13·b23`.
pub fn hollow3_certificate(b: &MatrixFq) -> Result<Hollow3Certificate> {
    if b.rows() != 3 || !is_hollow_symmetric(b) {
        return Err(Error::NotHollowSymmetric);
    }
    let f = b.field();
    let prod = f.mul(f.mul(b.get(0, 1), b.get(0, 2)), b.get(1, 2));
    let det = f.add(prod, prod);
    Ok(Hollow3Certificate { rank3: det != 0, det: f.elem(det)? })
}

/// Simple graph on `0..n` stored as adjacency bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGraph {
    n: usize,
    adj: Vec<Vec<u64>>,
    h: Option<MatrixFq>,
}

impl PermGraph {
    pub fn empty(n: usize) -> Self {
        PermGraph { n, adj: vec![vec![0; n.div_ceil(64)]; n], h: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange { index: u.max(v), limit: n });
            }
            if u == v {
                return Err(Error::BadConfig(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Graph of the nonzero off-diagonal entries of a symmetric hollow `H`.
    pub fn from_h(h: &MatrixFq) -> Result<Self> {
        if !is_hollow_symmetric(h) {
            return Err(Error::NotHollowSymmetric);
        }
        let n = h.rows();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if h.get(i, j) != 0 {
                    g.add_edge(i, j);
                }
            }
        }
        g.h = Some(h.clone());
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u][v / 64] |= 1 << (v % 64);
        self.adj[v][u / 64] |= 1 << (u % 64);
    }

    fn remove_vertex(&mut self, u: usize) {
        for v in 0..self.n {
            self.adj[v][u / 64] &= !(1 << (u % 64));
        }
        self.adj[u].iter_mut().for_each(|w| *w = 0);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> Option<&MatrixFq> {
        self.h.as_ref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    wi * 64 + b
                })
            })
        })
    }
}

/// Some triangle `[a, b, c]` (sorted) of `g`, or `None` if `g` is triangle-free.
pub fn find_triangle(g: &PermGraph) -> Option<[usize; 3]> {
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(g.degree(u)));
    for &u in &order {
        for v in g.neighbors(u) {
            let common = g.adj[u].iter().zip(&g.adj[v]).enumerate().find_map(|(wi, (a, b))| {
                let w = a & b;
                (w != 0).then(|| wi * 64 + w.trailing_zeros() as usize)
            });
            if let Some(w) = common {
                let mut t = [u, v, w];
                t.sort_unstable();
                return Some(t);
            }
        }
    }
    None
}

/// Up to `max` vertex-disjoint triangles, found greedily with vertex deletion.
pub fn pack_disjoint_triangles(g: &PermGraph, max: usize) -> Vec<[usize; 3]> {
    let mut work = g.clone();
    let mut out = Vec::new();
    while out.len() < max {
        let Some(t) = find_triangle(&work) else { break };
        for &v in &t {
            work.remove_vertex(v);
        }
        out.push(t);
    }
    out
}

/// The `s×n` matrix `M_j` with `(M_j x̄)_i = per(A; I_j \ {i})`, where `x̄` is
/// row `n−s` (0-based) of `A` and rows follow the order of `set`.
pub fn build_mj(a: &MatrixFq, set: &[usize]) -> Result<MatrixFq> {
    let n = validate(a, set.len(), 1)?;
    check_index_set(set, n)?;
    if set.is_empty() {
        return Err(Error::BadConfig("M_j needs a nonempty column set".into()));
    }
    let s = set.len();
    let diag = a.per_sub_raw(set);
    let mut m = MatrixFq::zeros(a.field(), s, n);
    for (r, &i) in set.iter().enumerate() {
        for h in 0..n {
            let v = if h == i {
                diag
            } else if set.contains(&h) {
                0
            } else {
                let mut swapped: Vec<usize> = set.iter().map(|&x| if x == i { h } else { x }).collect();
                swapped.sort_unstable();
                a.per_sub_raw(&swapped)
            };
            m.set(r, h, v);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::random::{sample_matrix, uniform_distribution, RandomStream};

    fn random(q: u64, n: usize, seed: u64) -> MatrixFq {
        let f = make_field(q).unwrap();
        sample_matrix(n, &uniform_distribution(&f), &mut RandomStream::new(seed))
    }

    #[test]
    fn e_at_full_depth_always_holds() {
        for seed in 0..5 {
            let a = random(3, 5, seed);
            let r = detect_e(&a, 5, 1, &SearchConfig::default()).unwrap();
            assert!(r.holds && r.exhaustive);
            assert_eq!(r.witnesses, vec![vec![0, 1, 2, 3, 4]]);
        }
    }

    #[test]
    fn e0_is_nonzero_permanent() {
        for seed in 0..30 {
            let a = random(3, 4, seed);
            let r = detect_e(&a, 0, 1, &SearchConfig::default()).unwrap();
            assert_eq!(r.holds, a.permanent().unwrap().value() != 0);
        }
    }

    #[test]
    fn zero_matrix_has_no_witness() {
        let f = make_field(3).unwrap();
        let a = MatrixFq::zeros(&f, 4, 4);
        assert!(!detect_e(&a, 1, 1, &SearchConfig::default()).unwrap().holds);
    }

    #[test]
    fn witnesses_are_disjoint_and_valid() {
        for seed in 0..40 {
            let a = random(3, 8, seed);
            for (s, ell) in [(1, 3), (2, 2), (2, 4), (3, 2)] {
                let r = detect_e(&a, s, ell, &SearchConfig::default()).unwrap();
                assert!(r.exhaustive);
                if r.holds {
                    assert_eq!(r.witnesses.len(), ell);
                }
                let mut seen = vec![false; 8];
                for w in &r.witnesses {
                    assert_eq!(w.len(), s);
                    assert_ne!(a.per_sub(w).unwrap().value(), 0);
                    for &i in w {
                        assert!(!seen[i]);
                        seen[i] = true;
                    }
                }
            }
        }
    }

    #[test]
    fn packing_infeasible_by_size() {
        let a = random(5, 5, 1);
        let r = detect_e(&a, 2, 3, &SearchConfig::default()).unwrap();
        assert!(!r.holds && r.exhaustive);
    }

    #[test]
    fn greedy_is_one_sided() {
        for seed in 0..40 {
            let a = random(3, 8, seed);
            let exact = detect_e(&a, 2, 3, &SearchConfig::default()).unwrap();
            let greedy = greedy_packing(&a, 8, 2, 3, 4);
            if greedy.len() >= 3 {
                assert!(exact.holds);
            }
        }
    }

    #[test]
    fn size_cap_without_greedy() {
        let a = random(3, 26, 3);
        let cfg = SearchConfig { allow_greedy: false, greedy_restarts: 1 };
        assert!(matches!(detect_e(&a, 13, 1, &cfg), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn bad_arguments() {
        let a = random(3, 3, 0);
        assert!(detect_e(&a, 4, 1, &SearchConfig::default()).is_err());
        assert!(detect_e(&a, 1, 0, &SearchConfig::default()).is_err());
    }

    #[test]
    fn h_for_n2_is_swap() {
        let h = build_h(&random(5, 2, 0)).unwrap();
        assert_eq!(h.data(), &[0, 1, 1, 0]);
    }

    #[test]
    fn h_is_symmetric_hollow() {
        for seed in 0..200 {
            let h = build_h(&random(5, 6, seed)).unwrap();
            assert!(is_hollow_symmetric(&h));
        }
        assert!(matches!(build_h(&random(3, 17, 0)), Err(Error::SizeCap { .. })));
        assert!(build_h(&random(3, 1, 0)).is_err());
    }

    #[test]
    fn h_times_second_last_row() {
        for seed in 0..50 {
            let a = random(5, 6, seed);
            let h = build_h(&a).unwrap();
            let hx = h.mul_vec(a.row(4));
            for (i, &v) in hx.iter().enumerate() {
                assert_eq!(v, a.per_sub(&[i]).unwrap().value());
            }
            // E(1) holds exactly when H·x̄ is nonzero
            assert_eq!(holds_e(&a, 1).unwrap(), hx.iter().any(|&v| v != 0));
        }
    }

    #[test]
    fn hollow_certificate() {
        let f3 = make_field(3).unwrap();
        let b = MatrixFq::from_rows(&f3, &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let c = hollow3_certificate(&b).unwrap();
        assert_eq!(c.det.value(), 2);
        assert!(c.rank3);
        let f2 = make_field(2).unwrap();
        let b = MatrixFq::from_rows(&f2, &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let c = hollow3_certificate(&b).unwrap();
        assert_eq!(c.det.value(), 0);
        assert!(!c.rank3);
        let asym = MatrixFq::from_rows(&f3, &[vec![0, 1, 1], vec![2, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(hollow3_certificate(&asym).unwrap_err(), Error::NotHollowSymmetric);
        assert_eq!(hollow3_certificate(&MatrixFq::zeros(&f3, 2, 2)).unwrap_err(), Error::NotHollowSymmetric);
    }

    #[test]
    fn hollow_certificate_matches_elimination() {
        let f = make_field(7).unwrap();
        let mut s = RandomStream::new(5);
        for _ in 0..100 {
            let (x, y, z) = (s.below(7) as u32, s.below(7) as u32, s.below(7) as u32);
            let b = MatrixFq::from_rows(&f, &[vec![0, x, y], vec![x, 0, z], vec![y, z, 0]]).unwrap();
            let c = hollow3_certificate(&b).unwrap();
            assert_eq!(c.det, b.determinant().unwrap());
            assert_eq!(c.rank3, b.rank() == 3);
        }
    }

    #[test]
    fn triangles() {
        let k4: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let g = PermGraph::from_edges(4, &k4).unwrap();
        assert!(find_triangle(&g).is_some());
        let k33: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        let g = PermGraph::from_edges(6, &k33).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert_eq!(find_triangle(&g), None);
        assert!(pack_disjoint_triangles(&g, 2).is_empty());
    }

    #[test]
    fn k9_packs_three() {
        let k9: Vec<_> = (0..9).flat_map(|u| (u + 1..9).map(move |v| (u, v))).collect();
        let g = PermGraph::from_edges(9, &k9).unwrap();
        let ts = pack_disjoint_triangles(&g, 3);
        assert_eq!(ts.len(), 3);
        let mut all: Vec<usize> = ts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..9).collect::<Vec<_>>());
        assert_eq!(pack_disjoint_triangles(&g, 5).len(), 3);
    }

    #[test]
    fn graph_from_h() {
        let a = random(3, 6, 9);
        let h = build_h(&a).unwrap();
        let g = PermGraph::from_h(&h).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.has_edge(i, j), i != j && h.get(i, j) != 0);
            }
        }
        if let Some([i, j, k]) = find_triangle(&g) {
            let sub = h.submatrix(&[i, j, k], &[i, j, k]).unwrap();
            assert_eq!(sub.rank(), 3);
        }
    }

    #[test]
    fn mj_rows_and_diagonal() {
        for seed in 0..30 {
            let a = random(5, 6, seed);
            let set = [1, 3, 4];
            let m = build_mj(&a, &set).unwrap();
            let d = a.per_sub(&set).unwrap().value();
            let block = m.submatrix(&[0, 1, 2], &set).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    assert_eq!(block.get(r, c), if r == c { d } else { 0 });
                }
            }
            if d != 0 {
                assert_eq!(block.rank(), 3);
            }
            let mx = m.mul_vec(a.row(6 - 3));
            for (r, &i) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&x| x != i).collect();
                assert_eq!(mx[r], a.per_sub(&rest).unwrap().value());
            }
        }
    }

    #[test]
    fn mj_for_pairs_matches_h_rows() {
        for seed in 0..20 {
            let a = random(5, 6, seed);
            let h = build_h(&a).unwrap();
            for i in 0..6 {
                for j in i + 1..6 {
                    let m = build_mj(&a, &[i, j]).unwrap();
                    // row for i equals row j of H, row for j equals row i of H
                    assert_eq!(m.row(0), h.row(j));
                    assert_eq!(m.row(1), h.row(i));
                }
            }
        }
    }

    #[test]
    fn report_serializes_one_based() {
        let r = EventReport { s: 1, ell: 2, holds: true, witnesses: vec![vec![0], vec![3]], exhaustive: true };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["witnesses"], serde_json::json!([[1], [4]]));
    }
}
