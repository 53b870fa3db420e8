//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`. Elimination is fraction-free:
//! rows are scaled to primitive integer vectors and combined with integer
//! multipliers, pivoting on the entry of smallest magnitude in each column
//! (ties broken by the original row index) so that results are reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form used in every JSON report: `p` or `p/q`.
pub fn render(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Sparse matrix stored row by row; zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}) {{", self.rows, self.cols)?;
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                write!(f, " ({r},{c})={v}")?;
            }
        }
        write!(f, " }}")
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        let sum = row.get(&c).map_or_else(|| v.clone(), |x| x + v);
        if sum.is_zero() {
            row.remove(&c);
        } else {
            row.insert(c, sum);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Rational> {
        &self.data[r]
    }

    /// Iterates over stored entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, &-Rational::one())
    }

    /// `self + factor * other`.
    pub fn combine(&self, other: &SparseMatrix, factor: &Rational) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_to(r, c, &(v * factor));
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> SparseMatrix {
        if factor.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row.values_mut() {
                *v *= factor;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        self.data
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (c, a)| acc + a * &v[*c]))
            .collect()
    }

    /// Row-major vectorisation: entry (r, c) goes to index `r * cols + c`.
    pub fn vectorize(&self) -> BTreeMap<usize, Rational> {
        self.entries().map(|(r, c, v)| (r * self.cols + c, v.clone())).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    fn int_rows(&self) -> Vec<IntRow> {
        self.data.iter().map(|row| IntRow::from_rationals(row.iter().map(|(c, v)| (*c, v)))).collect()
    }
}

/// A primitive integer row: sorted by column, gcd of entries 1, leading entry positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRow(Vec<(usize, BigInt)>);

impl IntRow {
    pub fn from_rationals<'a>(entries: impl Iterator<Item = (usize, &'a Rational)>) -> IntRow {
        let entries: Vec<(usize, &Rational)> = entries.filter(|(_, v)| !v.is_zero()).collect();
        let lcm = entries.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut row: Vec<(usize, BigInt)> =
            entries.into_iter().map(|(c, v)| (c, v.numer() * (&lcm / v.denom()))).collect();
        row.sort_by_key(|(c, _)| *c);
        let mut out = IntRow(row);
        out.normalize();
        out
    }

    pub fn from_integers(mut entries: Vec<(usize, BigInt)>) -> IntRow {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(c, _)| *c);
        let mut out = IntRow(entries);
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let Some((_, lead)) = self.0.first() else { return };
        let mut g = self.0.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if lead.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, v) in &mut self.0 {
                *v = &*v / &g;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> Option<(usize, &BigInt)> {
        self.0.first().map(|(c, v)| (*c, v))
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.0
    }

    pub fn get(&self, col: usize) -> Option<&BigInt> {
        self.0.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &self.0[i].1)
    }

    /// Cancels the entry of `self` in the leading column of `pivot`.
    fn eliminate_with(&self, pivot: &IntRow) -> IntRow {
        let (col, p) = pivot.lead().expect("empty pivot");
        let Some(a) = self.get(col) else { return self.clone() };
        let g = p.gcd(a);
        let ps = p / &g;
        let as_ = a / &g;
        let mut out = Vec::with_capacity(self.0.len() + pivot.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < pivot.0.len() {
            let ci = self.0.get(i).map(|e| e.0);
            let cj = pivot.0.get(j).map(|e| e.0);
            match (ci, cj) {
                (Some(x), Some(y)) if x == y => {
                    let v = &ps * &self.0[i].1 - &as_ * &pivot.0[j].1;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push((x, &ps * &self.0[i].1));
                    i += 1;
                }
                (Some(x), None) => {
                    out.push((x, &ps * &self.0[i].1));
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y, -(&as_ * &pivot.0[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let mut row = IntRow(out);
        row.normalize();
        row
    }

    fn to_rational_map(&self) -> BTreeMap<usize, Rational> {
        let (_, lead) = self.lead().expect("empty row");
        self.0.iter().map(|(c, v)| (*c, Rational::new(v.clone(), lead.clone()))).collect()
    }
}

/// Row echelon form by bucketed elimination; returned rows have distinct,
/// increasing leading columns.
fn echelon(rows: Vec<IntRow>) -> Vec<IntRow> {
    let mut buckets: BTreeMap<usize, Vec<(usize, IntRow)>> = BTreeMap::new();
    for (i, row) in rows.into_iter().enumerate() {
        if let Some((c, _)) = row.lead() {
            buckets.entry(c).or_default().push((i, row));
        }
    }
    let mut pivots = Vec::new();
    while let Some((col, mut bucket)) = buckets.pop_first() {
        let best = bucket
            .iter()
            .enumerate()
            .min_by(|(_, (ia, ra)), (_, (ib, rb))| {
                let ma = ra.lead().unwrap().1.abs();
                let mb = rb.lead().unwrap().1.abs();
                ma.cmp(&mb).then(ia.cmp(ib))
            })
            .map(|(k, _)| k)
            .unwrap();
        let (_, pivot) = bucket.swap_remove(best);
        for (idx, row) in bucket {
            let reduced = row.eliminate_with(&pivot);
            if let Some((c, _)) = reduced.lead() {
                debug_assert!(c > col);
                buckets.entry(c).or_default().push((idx, reduced));
            }
        }
        pivots.push(pivot);
    }
    pivots
}

/// Reduced row echelon form over the rationals from an echelon form.
fn reduced(pivots: &[IntRow]) -> Vec<(usize, BTreeMap<usize, Rational>)> {
    let mut out: Vec<(usize, BTreeMap<usize, Rational>)> = Vec::with_capacity(pivots.len());
    for p in pivots.iter().rev() {
        let (lead_col, _) = p.lead().unwrap();
        let mut row = p.to_rational_map();
        // rows already in `out` have larger leading columns; walk them in increasing order
        for (c, r) in out.iter().rev() {
            if let Some(x) = row.get(c).cloned() {
                for (k, v) in r {
                    let e = row.entry(*k).or_insert_with(Rational::zero);
                    *e -= &x * v;
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
            }
        }
        out.push((lead_col, row));
    }
    out.reverse();
    out
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m.int_rows()).len()
}

pub fn rank_of_rows(rows: Vec<IntRow>) -> usize {
    echelon(rows).len()
}

/// Kernel basis as sparse vectors: one vector per free column, with a 1 in that column.
pub fn kernel_basis_sparse(rows: Vec<IntRow>, cols: usize) -> Vec<BTreeMap<usize, Rational>> {
    let pivots = echelon(rows);
    let rref = reduced(&pivots);
    let pivot_cols: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    // free column -> list of (pivot column, coefficient)
    let mut by_free: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
    for (pc, row) in &rref {
        for (c, v) in row {
            if *c != *pc {
                by_free.entry(*c).or_default().push((*pc, -v.clone()));
            }
        }
    }
    (0..cols)
        .filter(|c| !is_pivot[*c])
        .map(|f| {
            let mut v = BTreeMap::new();
            v.insert(f, Rational::one());
            if let Some(entries) = by_free.remove(&f) {
                for (pc, x) in entries {
                    v.insert(pc, x);
                }
            }
            v
        })
        .collect()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    kernel_basis_sparse(m.int_rows(), m.cols)
        .into_iter()
        .map(|sv| {
            let mut v = vec![Rational::zero(); m.cols];
            for (c, x) in sv {
                v[c] = x;
            }
            v
        })
        .collect()
}

/// Some exact solution of `m x = rhs`, or `None` if the system is inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rhs.len(), m.rows, "right-hand side has wrong length");
    let aug = m.cols;
    let rows: Vec<IntRow> = m
        .data
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            IntRow::from_rationals(row.iter().map(|(c, v)| (*c, v)).chain(std::iter::once((aug, b))))
        })
        .collect();
    let pivots = echelon(rows);
    if pivots.iter().any(|p| p.lead().unwrap().0 == aug) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (pc, row) in reduced(&pivots) {
        if let Some(v) = row.get(&aug) {
            x[pc] = v.clone();
        }
    }
    Some(x)
}

/// Incrementally maintained row space, used for span saturation.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    pivots: BTreeMap<usize, IntRow>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut v: IntRow) -> IntRow {
        while let Some((c, _)) = v.lead() {
            match self.pivots.get(&c) {
                Some(p) => v = v.eliminate_with(p),
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &IntRow) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v`; returns `true` when the span grew.
    pub fn insert(&mut self, v: IntRow) -> bool {
        let r = self.reduce(v);
        match r.lead() {
            Some((c, _)) => {
                self.pivots.insert(c, r);
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl3_unit(i: usize, j: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(3, 3);
        m.set(i, j, rat(1));
        m
    }

    /// ad(x) on gl_3 in the matrix-unit basis, built by hand from xy - yx.
    fn ad_gl3(x: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(9, 9);
        for a in 0..3 {
            for b in 0..3 {
                let y = gl3_unit(a, b);
                let br = x.mul(&y).sub(&y.mul(x));
                for (r, c, v) in br.entries() {
                    out.set(r * 3 + c, a * 3 + b, v.clone());
                }
            }
        }
        out
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(4)), 4);
        assert_eq!(rank(&ad_gl3(&gl3_unit(0, 2))), 4);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(5)).is_empty());
        let k = kernel_basis(&SparseMatrix::zeros(3, 3));
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, rat((i == j) as i64));
            }
        }
        // centralizer of E13 in gl_3: span{E11+E33, E22, E12, E23, E13}
        let ad = ad_gl3(&gl3_unit(0, 2));
        let k = kernel_basis(&ad);
        assert_eq!(k.len(), 5);
        let mut expected = SparseMatrix::zeros(5, 9);
        expected.set(0, 0, rat(1));
        expected.set(0, 8, rat(1));
        expected.set(1, 4, rat(1));
        expected.set(2, 1, rat(1));
        expected.set(3, 5, rat(1));
        expected.set(4, 2, rat(1));
        let found = SparseMatrix::from_dense(&k);
        assert_eq!(rank(&found), 5);
        let mut both = SparseMatrix::zeros(10, 9);
        for (r, c, v) in expected.entries() {
            both.set(r, c, v.clone());
        }
        for (r, c, v) in found.entries() {
            both.set(r + 5, c, v.clone());
        }
        assert_eq!(rank(&both), 5);
    }

    #[test]
    fn solve_examples() {
        let rhs = vec![rat(3), frac(-1, 2), rat(0)];
        assert_eq!(solve(&SparseMatrix::identity(3), &rhs), Some(rhs.clone()));
        assert_eq!(solve(&SparseMatrix::zeros(2, 2), &[rat(1), rat(0)]), None);
        let m = SparseMatrix::from_i64(&[
            vec![2, 1, 0, 0, 3],
            vec![1, 1, 1, 0, 0],
            vec![0, -1, 4, 1, 0],
            vec![5, 0, 0, 2, 1],
            vec![0, 0, 3, 0, -2],
        ]);
        assert_eq!(rank(&m), 5);
        let b = vec![rat(1), rat(-2), rat(7), rat(0), frac(1, 3)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rowspace_membership() {
        let mut rs = RowSpace::new();
        let a = IntRow::from_integers(vec![(0, 2.into()), (3, 4.into())]);
        let b = IntRow::from_integers(vec![(1, 1.into()), (3, 1.into())]);
        assert!(rs.insert(a));
        assert!(rs.insert(b));
        let c = IntRow::from_integers(vec![(0, 1.into()), (1, 3.into()), (3, 5.into())]);
        assert!(rs.contains(&c));
        assert!(!rs.insert(c));
        assert_eq!(rs.dim(), 2);
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(render(&frac(6, -4)), "-3/2");
        assert_eq!(render(&rat(5)), "5");
        assert_eq!(parse_rational("-3/2"), Some(frac(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
