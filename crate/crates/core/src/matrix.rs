//! Dense matrices over F_q, elimination, and the permanent kernels.
//!
//! Index sets passed to the Rust API are 0-based and strictly increasing.
//! Serialized records (JSON literals, event witnesses, growth traces) use
//! 1-based indices; conversion happens only at that boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// Largest size accepted by the minor-expansion kernel.
pub const EXPANSION_CAP: usize = 12;
/// Largest size accepted by the Gray-code inclusion-exclusion kernel.
pub const RYSER_CAP: usize = 30;
/// At or below this size [`MatrixFq::permanent`] uses minor expansion.
const EXPANSION_DEFAULT_MAX: usize = 4;

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    field: FieldSpec,
}

impl std::fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// JSON literal `{"q": 5, "rows": [[1, 2], [3, 4]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixLiteral {
    pub q: u64,
    pub rows: Vec<Vec<u32>>,
}

/// Checks a 0-based index set is strictly increasing and below `limit`.
pub fn check_index_set(set: &[usize], limit: usize) -> Result<()> {
    for (pos, &i) in set.iter().enumerate() {
        if i >= limit {
            return Err(Error::OutOfRange { index: i, limit });
        }
        if pos > 0 && set[pos - 1] >= i {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// `{0..n} \ set` for a valid index set.
pub fn complement(set: &[usize], n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.saturating_sub(set.len()));
    let mut it = set.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

impl MatrixFq {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadConfig(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&v) = data.iter().find(|&&v| v >= field.q()) {
            return Err(Error::OutOfRange { index: v as usize, limit: field.q() as usize });
        }
        Ok(MatrixFq { rows, cols, data, field: field.clone() })
    }

    pub(crate) fn from_raw(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MatrixFq { rows, cols, data, field: field.clone() }
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadConfig("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_raw(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// The 0x0 matrix.
    pub fn empty(field: &FieldSpec) -> Self {
        Self::zeros(field, 0, 0)
    }

    pub fn from_literal(lit: &MatrixLiteral) -> Result<Self> {
        let field = FieldSpec::new(lit.q)?;
        Self::from_rows(&field, &lit.rows)
    }

    pub fn to_literal(&self) -> MatrixLiteral {
        MatrixLiteral {
            q: self.field.q() as u64,
            rows: (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        FieldElem::from_raw(self.get(i, j), self.field.clone())
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self::from_raw(&self.field, self.cols, self.rows, data)
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    /// `A^{↑s}`: the matrix without its last `s` rows.
    pub fn delete_last_rows(&self, s: usize) -> Result<Self> {
        if s > self.rows {
            return Err(Error::OutOfRange { index: s, limit: self.rows });
        }
        let keep = self.rows - s;
        Ok(Self::from_raw(&self.field, keep, self.cols, self.data[..keep * self.cols].to_vec()))
    }

    /// `M[I×J]`, keeping the original row and column order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_index_set(rows, self.rows)?;
        check_index_set(cols, self.cols)?;
        Ok(self.submatrix_unchecked(rows, cols))
    }

    pub(crate) fn submatrix_unchecked(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            let r = self.row(i);
            data.extend(cols.iter().map(|&j| r[j]));
        }
        Self::from_raw(&self.field, rows.len(), cols.len(), data)
    }

    /// `M x` for a column vector of length `cols`.
    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Row-echelon reduction in place; returns (rank, number of row swaps).
    fn eliminate(&mut self) -> (usize, usize) {
        let f = self.field.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut swaps = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(piv) = (rank..m).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    self.data.swap(piv * n + j, rank * n + j);
                }
                swaps += 1;
            }
            let inv = f.inv(self.get(rank, col)).unwrap();
            for r in rank + 1..m {
                let a = self.get(r, col);
                if a == 0 {
                    continue;
                }
                let factor = f.neg(f.mul(a, inv));
                for j in col..n {
                    let v = f.add(self.get(r, j), f.mul(factor, self.get(rank, j)));
                    self.data[r * n + j] = v;
                }
            }
            rank += 1;
        }
        (rank, swaps)
    }

    pub fn determinant(&self) -> Result<FieldElem> {
        let n = self.require_square()?;
        let mut work = self.clone();
        let (rank, swaps) = work.eliminate();
        let f = &self.field;
        let value = if rank < n {
            0
        } else {
            let d = (0..n).fold(1, |acc, i| f.mul(acc, work.get(i, i)));
            if swaps % 2 == 1 {
                f.neg(d)
            } else {
                d
            }
        };
        Ok(FieldElem::from_raw(value, f.clone()))
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    /// Permanent by last-row expansion, memoized over column subsets.
    pub fn permanent_expansion(&self) -> Result<FieldElem> {
        let n = self.require_square()?;
        if n > EXPANSION_CAP {
            return Err(Error::SizeCap {
                what: "expansion permanent",
                size: n as u64,
                cap: EXPANSION_CAP as u64,
            });
        }
        let f = &self.field;
        // per_of[S] = permanent of rows 0..|S| restricted to columns S.
        let mut per_of = vec![0u32; 1 << n];
        per_of[0] = 1;
        for set in 1usize..1 << n {
            let row = set.count_ones() as usize - 1;
            let mut acc = 0;
            let mut rest = set;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let a = self.get(row, c);
                if a != 0 {
                    acc = f.add(acc, f.mul(a, per_of[set & !(1 << c)]));
                }
            }
            per_of[set] = acc;
        }
        Ok(FieldElem::from_raw(per_of[(1 << n) - 1], f.clone()))
    }

    /// Permanent by inclusion-exclusion over column subsets in Gray-code order.
    pub fn permanent_ryser(&self) -> Result<FieldElem> {
        let n = self.require_square()?;
        if n > RYSER_CAP {
            return Err(Error::SizeCap {
                what: "Gray-code permanent",
                size: n as u64,
                cap: RYSER_CAP as u64,
            });
        }
        Ok(FieldElem::from_raw(ryser(self), self.field.clone()))
    }

    /// Permanent with the default kernel for the size.
    pub fn permanent(&self) -> Result<FieldElem> {
        if self.rows <= EXPANSION_DEFAULT_MAX {
            self.permanent_expansion()
        } else {
            self.permanent_ryser()
        }
    }

    /// `per(A;I)`: permanent of `A^{↑s}` with the columns in `deleted` removed, `s = |deleted|`.
    pub fn per_sub(&self, deleted: &[usize]) -> Result<FieldElem> {
        let n = self.require_square()?;
        check_index_set(deleted, n)?;
        Ok(FieldElem::from_raw(self.per_sub_raw(deleted), self.field.clone()))
    }

    /// Unchecked [`per_sub`](Self::per_sub) for square `self` and a valid set.
    pub(crate) fn per_sub_raw(&self, deleted: &[usize]) -> u32 {
        let keep_rows: Vec<usize> = (0..self.rows - deleted.len()).collect();
        let keep_cols = complement(deleted, self.cols);
        self.per_rows_cols(&keep_rows, &keep_cols)
    }

    /// Permanent of `self[rows × cols]` for equal-length index lists.
    pub(crate) fn per_rows_cols(&self, rows: &[usize], cols: &[usize]) -> u32 {
        debug_assert_eq!(rows.len(), cols.len());
        let sub = self.submatrix_unchecked(rows, cols);
        if sub.rows <= EXPANSION_DEFAULT_MAX {
            sub.permanent_expansion().unwrap().value()
        } else {
            ryser(&sub)
        }
    }
}

/// Gray-code inclusion-exclusion: `per(A) = (-1)^n Σ_S (-1)^{|S|} Π_i Σ_{j∈S} a_ij`.
fn ryser(a: &MatrixFq) -> u32 {
    let n = a.rows;
    if n == 0 {
        return 1;
    }
    let f = &a.field;
    let mut row_sums = vec![0u32; n];
    let mut zeros = n;
    let mut in_set = vec![false; n];
    // accumulators for even-|S| and odd-|S| terms
    let (mut even, mut odd) = (0u32, 0u32);
    let prime = f.is_prime();
    let p = f.p() as u64;
    let mut size = 0usize;
    for k in 1u64..1 << n {
        let col = k.trailing_zeros() as usize;
        let adding = !in_set[col];
        in_set[col] = adding;
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        for (i, s) in row_sums.iter_mut().enumerate() {
            let x = a.data[i * n + col];
            if x == 0 {
                continue;
            }
            let was_zero = *s == 0;
            *s = if adding { f.add(*s, x) } else { f.sub(*s, x) };
            match (was_zero, *s == 0) {
                (true, false) => zeros -= 1,
                (false, true) => zeros += 1,
                _ => {}
            }
        }
        if zeros > 0 {
            continue;
        }
        let prod = if prime {
            let mut acc = 1u64;
            for &s in &row_sums {
                acc = acc * s as u64 % p;
            }
            acc as u32
        } else {
            row_sums.iter().fold(1, |acc, &s| f.mul(acc, s))
        };
        if size % 2 == 0 {
            even = f.add(even, prod);
        } else {
            odd = f.add(odd, prod);
        }
    }
    // (-1)^n (even - odd)
    let total = f.sub(even, odd);
    if n % 2 == 1 {
        f.neg(total)
    } else {
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn m(q: u64, rows: &[&[u32]]) -> MatrixFq {
        let f = make_field(q).unwrap();
        MatrixFq::from_rows(&f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Signed/unsigned permutation sum via Heap's algorithm.
    fn perm_sum(a: &MatrixFq, signed: bool) -> u32 {
        let n = a.rows();
        let f = a.field().clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut c = vec![0usize; n];
        let mut sign_neg = false;
        let term = |perm: &[usize], neg: bool| {
            let t = (0..n).fold(1, |acc, i| f.mul(acc, a.get(i, perm[i])));
            if neg && signed {
                f.neg(t)
            } else {
                t
            }
        };
        let mut total = term(&perm, sign_neg);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                sign_neg = !sign_neg;
                total = f.add(total, term(&perm, sign_neg));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        total
    }

    #[test]
    fn delete_rows() {
        let a = m(5, &[&[1, 2, 3], &[4, 0, 1], &[2, 2, 2]]);
        assert_eq!(a.delete_last_rows(0).unwrap(), a);
        let top = a.delete_last_rows(1).unwrap();
        assert_eq!((top.rows(), top.cols()), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(top.get(i, j), a.get(i, j));
            }
        }
        let none = a.delete_last_rows(3).unwrap();
        assert_eq!((none.rows(), none.cols()), (0, 3));
        assert!(matches!(a.delete_last_rows(4), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn submatrices() {
        let a = m(5, &[&[1, 2, 3], &[4, 0, 1], &[2, 2, 2]]);
        let s = a.submatrix(&[0, 2], &[1, 2]).unwrap();
        assert_eq!(s, m(5, &[&[2, 3], &[2, 2]]));
        let e = a.submatrix(&[], &[0, 1]).unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 2));
        let e = a.submatrix(&[1], &[]).unwrap();
        assert_eq!((e.rows(), e.cols()), (1, 0));
        assert!(matches!(a.submatrix(&[0, 3], &[0]), Err(Error::OutOfRange { index: 3, .. })));
        assert!(matches!(a.submatrix(&[1, 1], &[0]), Err(Error::DuplicateIndex(1))));
        assert!(matches!(a.submatrix(&[0], &[2, 1]), Err(Error::DuplicateIndex(1))));
    }

    #[test]
    fn determinant_examples() {
        let f7 = make_field(7).unwrap();
        assert_eq!(MatrixFq::identity(&f7, 5).determinant().unwrap().value(), 1);
        let b = m(3, &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(b.determinant().unwrap().value(), 2);
        assert_eq!(b.rank(), 3);
        assert_eq!(MatrixFq::empty(&f7).determinant().unwrap().value(), 1);
        assert!(matches!(
            MatrixFq::zeros(&f7, 2, 3).determinant(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn det_matches_signed_sum_random() {
        let f = make_field(5).unwrap();
        let mut state = 99u64;
        for _ in 0..200 {
            let data = (0..16)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 5) as u32
                })
                .collect();
            let a = MatrixFq::new(&f, 4, 4, data).unwrap();
            assert_eq!(a.determinant().unwrap().value(), perm_sum(&a, true));
            assert_eq!(a.permanent_ryser().unwrap().value(), perm_sum(&a, false));
        }
    }

    #[test]
    fn rank_examples() {
        let f = make_field(3).unwrap();
        assert_eq!(MatrixFq::identity(&f, 6).rank(), 6);
        assert_eq!(MatrixFq::empty(&f).rank(), 0);
        assert_eq!(MatrixFq::zeros(&f, 0, 4).rank(), 0);
        assert_eq!(MatrixFq::zeros(&f, 3, 4).rank(), 0);
        let a = m(3, &[&[1, 2, 0], &[2, 1, 0]]);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn permanent_examples() {
        let f = make_field(5).unwrap();
        assert_eq!(MatrixFq::empty(&f).permanent_expansion().unwrap().value(), 1);
        assert_eq!(MatrixFq::empty(&f).permanent_ryser().unwrap().value(), 1);
        let a = m(7, &[&[2, 3], &[4, 5]]);
        let expect = (2 * 5 + 3 * 4) % 7;
        assert_eq!(a.permanent_expansion().unwrap().value(), expect);
        assert_eq!(a.permanent_ryser().unwrap().value(), expect);
        let ones = MatrixFq::new(&f, 4, 4, vec![1; 16]).unwrap();
        assert_eq!(ones.permanent_expansion().unwrap().value(), 24 % 5);
        assert_eq!(ones.permanent_ryser().unwrap().value(), 24 % 5);
        let f3 = make_field(3).unwrap();
        assert_eq!(MatrixFq::identity(&f3, 8).permanent_ryser().unwrap().value(), 1);
    }

    #[test]
    fn permanent_caps() {
        let f = make_field(3).unwrap();
        assert!(matches!(
            MatrixFq::identity(&f, 13).permanent_expansion(),
            Err(Error::SizeCap { size: 13, cap: 12, .. })
        ));
        assert!(matches!(
            MatrixFq::identity(&f, 31).permanent_ryser(),
            Err(Error::SizeCap { size: 31, cap: 30, .. })
        ));
        assert!(matches!(MatrixFq::zeros(&f, 2, 3).permanent(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn per_sub_edges() {
        let a = m(3, &[&[1, 2, 0], &[2, 1, 1], &[1, 1, 1]]);
        assert_eq!(a.per_sub(&[0, 1, 2]).unwrap().value(), 1);
        assert_eq!(a.per_sub(&[]).unwrap().value(), a.permanent().unwrap().value());
        // I = {2}: top two rows, columns 0 and 1
        assert_eq!(a.per_sub(&[2]).unwrap().value(), (1 + 4) % 3);
        assert!(a.per_sub(&[3]).is_err());
    }

    #[test]
    fn literal_roundtrip() {
        let lit: MatrixLiteral = serde_json::from_str(r#"{"q": 9, "rows": [[1, 8], [0, 4]]}"#).unwrap();
        let a = MatrixFq::from_literal(&lit).unwrap();
        assert_eq!(a.field().q(), 9);
        assert_eq!(a.to_literal(), lit);
        assert!(serde_json::from_str::<MatrixLiteral>(r#"{"q": 3, "rows": [], "x": 1}"#).is_err());
        let bad = MatrixLiteral { q: 3, rows: vec![vec![3]] };
        assert!(MatrixFq::from_literal(&bad).is_err());
    }

    #[test]
    fn complement_basic() {
        assert_eq!(complement(&[1, 3], 5), vec![0, 2, 4]);
        assert_eq!(complement(&[], 2), vec![0, 1]);
    }
}
