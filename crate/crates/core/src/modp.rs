//! Dense linear algebra over `F_p`, `p = 2^61 - 1`.
//!
//! Used to bound dimensions of large matrix algebras: a rank over `F_p` of a
//! reduced rational system never exceeds its rank over `Q`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Rational, SparseMatrix};

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let lo = (t as u64) & P;
    let hi = (t >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero");
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced")
}

/// `None` when `p` divides the denominator.
pub fn from_rational(q: &Rational) -> Option<u64> {
    let d = reduce_int(q.denom());
    (d != 0).then(|| mul(reduce_int(q.numer()), inv(d)))
}

pub fn from_i64(x: i64) -> u64 {
    if x >= 0 {
        x as u64 % P
    } else {
        P - ((-x) as u64 % P)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_sparse(m: &SparseMatrix) -> Option<Self> {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for (r, c, v) in m.entries() {
            out.data[r * m.ncols() + c] = from_rational(v)?;
        }
        Some(out)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let mut out = FpMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = add(*o, mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &FpMat) -> FpMat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub(a, b)).collect();
        FpMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn add_scaled(&self, other: &FpMat, c: u64) -> FpMat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add(a, mul(b, c))).collect();
        FpMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn minus_scalar(&self, c: u64) -> FpMat {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = out.get(i, i);
            out.set(i, i, sub(v, c));
        }
        out
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FpMat {
        let mut out = FpMat::zeros(rows.len(), cols.len());
        for (i, r) in rows.enumerate() {
            let src = &self.data[r * self.cols + cols.start..r * self.cols + cols.end];
            out.data[i * out.cols..(i + 1) * out.cols].copy_from_slice(src);
        }
        out
    }

    pub fn commutes_with(&self, other: &FpMat) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c) == 0))
    }

    /// Row echelon form in place; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if p != r {
                for k in 0..self.cols {
                    self.data.swap(p * self.cols + k, r * self.cols + k);
                }
            }
            let iv = inv(self.get(r, c));
            for k in c..self.cols {
                let v = self.get(r, k);
                self.set(r, k, mul(v, iv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for k in c..self.cols {
                    let v = sub(self.get(i, k), mul(f, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Columns spanning the kernel.
    pub fn kernel(&self) -> FpMat {
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FpMat::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, sub(0, m.get(r, f)));
            }
        }
        out
    }

    /// Independent columns spanning the column space.
    pub fn column_space(&self) -> FpMat {
        let pivots = self.clone().echelon();
        let mut out = FpMat::zeros(self.rows, pivots.len());
        for (j, &c) in pivots.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<FpMat> {
        let n = self.rows;
        let mut aug = FpMat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.block(0..n, n..2 * n))
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows).fold(0, |t, i| add(t, self.get(i, i)))
    }

    /// Characteristic polynomial, low degree first, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<u64> {
        let n = self.rows;
        let mut c = vec![0u64; n + 1];
        c[n] = 1;
        let mut m = FpMat::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.get(i, i);
                next.set(i, i, add(v, c[n + 1 - k]));
            }
            m = next;
            let t = self.mul(&m).trace();
            c[n - k] = sub(0, mul(t, inv(k as u64)));
        }
        c
    }
}

type Poly = Vec<u64>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = inv(*b.last().unwrap());
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = mul(*r.last().unwrap(), lead);
        q[shift] = f;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(f, bi));
        }
        r = trim(r);
    }
    (q, r)
}

fn poly_mulmod(a: &Poly, b: &Poly, m: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(x, y));
        }
    }
    poly_divrem(&out, m).1
}

fn poly_powmod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut r = vec![1];
    let mut b = poly_divrem(base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, m);
        }
        b = poly_mulmod(&b, &b, m);
        e >>= 1;
    }
    r
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = poly_divrem(&a, &b).1;
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let il = inv(l);
        a.iter_mut().for_each(|x| *x = mul(*x, il));
    }
    a
}

fn split_roots(f: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    let f = trim(f.clone());
    match f.len() {
        0 | 1 => {}
        2 => out.push(mul(sub(0, f[0]), inv(f[1]))),
        _ => loop {
            let r = rng.gen_range(0..P);
            let mut h = poly_powmod(&vec![r, 1], (P - 1) / 2, &f);
            if h.is_empty() {
                h = vec![P - 1];
            } else {
                h[0] = sub(h[0], 1);
            }
            let g = poly_gcd(&f, &h);
            if g.len() > 1 && g.len() < f.len() {
                split_roots(&g, rng, out);
                split_roots(&poly_divrem(&f, &g).0, rng, out);
                break;
            }
        },
    }
}

/// Roots in `F_p` with multiplicities.
pub fn roots(f: &Poly) -> Vec<(u64, usize)> {
    let f = trim(f.clone());
    if f.len() <= 1 {
        return Vec::new();
    }
    let xp = poly_powmod(&vec![0, 1], P, &f);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = sub(xp_minus_x[1], 1);
    let g = poly_gcd(&f, &xp_minus_x);
    let mut rs = Vec::new();
    split_roots(&g, &mut ChaCha8Rng::seed_from_u64(5), &mut rs);
    rs.sort_unstable();
    rs.into_iter()
        .map(|c| {
            let lin = vec![sub(0, c), 1];
            let mut m = 0;
            let mut cur = f.clone();
            loop {
                let (q, r) = poly_divrem(&cur, &lin);
                if !r.is_empty() {
                    break;
                }
                cur = q;
                m += 1;
            }
            (c, m)
        })
        .collect()
}

/// Invariant subspaces of `a` whose direct sum is the whole space: the
/// generalised eigenspaces of its eigenvalues in `F_p`, and one more for
/// the rest of the spectrum. Columns are bases.
pub fn primary_decomposition(a: &FpMat) -> Vec<FpMat> {
    let n = a.rows;
    if n == 0 {
        return Vec::new();
    }
    let mut parts = Vec::new();
    let mut q = FpMat::identity(n);
    let mut found = 0;
    for (c, m) in roots(&a.charpoly()) {
        let shifted = a.minus_scalar(c);
        let mut pw = FpMat::identity(n);
        for _ in 0..m {
            pw = pw.mul(&shifted);
        }
        q = q.mul(&pw);
        let k = pw.kernel();
        found += k.cols;
        parts.push(k);
    }
    if found < n {
        parts.push(q.column_space());
    }
    parts
}

/// Row echelon form that grows one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    len: usize,
    rows: HashMap<usize, Vec<u64>>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Adds `v` if it is independent of the rows so far.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        for c in 0..self.len {
            let x = v[c];
            if x == 0 {
                continue;
            }
            match self.rows.get(&c) {
                Some(row) => {
                    for k in c..self.len {
                        if row[k] != 0 {
                            v[k] = sub(v[k], mul(x, row[k]));
                        }
                    }
                }
                None => {
                    let ix = inv(x);
                    for y in v[c..].iter_mut() {
                        *y = mul(*y, ix);
                    }
                    self.rows.insert(c, v);
                    return true;
                }
            }
        }
        false
    }
}

/// A basis of the whole space adapted to a direct sum of subspaces.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub basis: FpMat,
    pub inverse: FpMat,
    pub blocks: Vec<std::ops::Range<usize>>,
}

impl Decomposition {
    pub fn trivial(n: usize) -> Self {
        Decomposition { basis: FpMat::identity(n), inverse: FpMat::identity(n), blocks: vec![0..n] }
    }

    pub fn conjugate(&self, a: &FpMat) -> FpMat {
        self.inverse.mul(a).mul(&self.basis)
    }

    /// Refines by the primary decomposition of `a`, which must preserve
    /// every current block.
    pub fn refine(&self, a: &FpMat) -> Decomposition {
        let n = self.basis.rows;
        let conj = self.conjugate(a);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        let mut blocks = Vec::new();
        for r in &self.blocks {
            let sub = conj.block(r.clone(), r.clone());
            let local = self.basis.block(0..n, r.clone());
            for part in primary_decomposition(&sub) {
                let global = local.mul(&part);
                let start = cols.len();
                for j in 0..global.cols {
                    cols.push((0..n).map(|i| global.get(i, j)).collect());
                }
                blocks.push(start..cols.len());
            }
        }
        let mut basis = FpMat::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                basis.set(i, j, v);
            }
        }
        let inverse = basis.inverse().expect("direct sum decomposition");
        Decomposition { basis, inverse, blocks }
    }

    pub fn from_commuting(n: usize, ops: &[FpMat]) -> Decomposition {
        ops.iter().fold(Decomposition::trivial(n), |d, a| d.refine(a))
    }

    /// Nonzero blocks `(target, source, matrix)` of `a` in the adapted basis.
    pub fn split(&self, a: &FpMat) -> Vec<(usize, usize, FpMat)> {
        let conj = self.conjugate(a);
        let mut out = Vec::new();
        for (i, ri) in self.blocks.iter().enumerate() {
            for (j, rj) in self.blocks.iter().enumerate() {
                let b = conj.block(ri.clone(), rj.clone());
                if !b.is_zero() {
                    out.push((i, j, b));
                }
            }
        }
        out
    }
}

/// Dimension of the unital algebra generated by `gens` over `F_p`. The
/// `commuting` operators must lie in that algebra; their joint
/// generalised eigenspaces cut it into pieces `e_a A e_b` handled apart.
pub fn algebra_dim(n: usize, gens: &[FpMat], commuting: &[FpMat]) -> usize {
    if n == 0 {
        return 1;
    }
    let dec = Decomposition::from_commuting(n, commuting);
    let sizes: Vec<usize> = dec.blocks.iter().map(|r| r.len()).collect();
    let mut by_source: HashMap<usize, Vec<(usize, FpMat)>> = HashMap::new();
    for g in gens.iter().chain(commuting) {
        for (t, s, m) in dec.split(g) {
            by_source.entry(t).or_default().push((s, m));
        }
    }
    let mut spaces: HashMap<(usize, usize), Echelon> = HashMap::new();
    let mut queue: Vec<(usize, usize, FpMat)> = Vec::new();
    for (b, &k) in sizes.iter().enumerate() {
        let id = FpMat::identity(k);
        spaces.entry((b, b)).or_insert_with(|| Echelon::new(k * k)).insert(id.data.clone());
        queue.push((b, b, id));
    }
    while let Some((t, s, x)) = queue.pop() {
        for (s2, g) in by_source.get(&s).map(|v| v.as_slice()).unwrap_or(&[]) {
            let space = spaces.entry((t, *s2)).or_insert_with(|| Echelon::new(sizes[t] * sizes[*s2]));
            if space.is_full() {
                continue;
            }
            let y = x.mul(g);
            if space.insert(y.data.clone()) {
                queue.push((t, *s2, y));
            }
        }
    }
    spaces.values().map(|e| e.rank()).sum()
}

/// Dimension over `F_p` of the operators commuting with every element of
/// `ops`. The `commuting` operators must lie in the algebra generated by
/// `ops`, so that every solution is block diagonal for their joint
/// generalised eigenspaces.
pub fn commutant_dim(n: usize, ops: &[FpMat], commuting: &[FpMat]) -> usize {
    if n == 0 {
        return 1;
    }
    let dec = Decomposition::from_commuting(n, commuting);
    let sizes: Vec<usize> = dec.blocks.iter().map(|r| r.len()).collect();
    let mut offset = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &k in &sizes {
        offset.push(total);
        total += k * k;
    }
    let mut ech = Echelon::new(total);
    for g in ops.iter().chain(commuting) {
        for (a, b, m) in dec.split(g) {
            // X_a m - m X_b = 0
            let (da, db) = (sizes[a], sizes[b]);
            for r in 0..da {
                for c in 0..db {
                    let mut row = vec![0u64; total];
                    for k in 0..da {
                        let v = m.get(k, c);
                        if v != 0 {
                            let idx = offset[a] + r * da + k;
                            row[idx] = add(row[idx], v);
                        }
                    }
                    for k in 0..db {
                        let v = m.get(r, k);
                        if v != 0 {
                            let idx = offset[b] + k * db + c;
                            row[idx] = sub(row[idx], v);
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        ech.insert(row);
                        if ech.is_full() {
                            return 0;
                        }
                    }
                }
            }
        }
    }
    total - ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn field_ops() {
        assert_eq!(mul(inv(7), 7), 1);
        assert_eq!(from_rational(&(rat(1) / rat(2))).map(|h| mul(h, 2)), Some(1));
        assert_eq!(add(P - 1, 1), 0);
        assert_eq!(from_i64(-1), P - 1);
    }

    #[test]
    fn charpoly_and_roots() {
        // diag(2, 2, 5) plus a nilpotent part in the 2-block
        let m = SparseMatrix::from_i64(&[vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, 5]]);
        let a = FpMat::from_sparse(&m).unwrap();
        assert_eq!(roots(&a.charpoly()), vec![(2, 2), (5, 1)]);
        let parts = primary_decomposition(&a);
        assert_eq!(parts.iter().map(|p| p.cols).collect::<Vec<_>>(), vec![2, 1]);
        // x^2 + 1 has no root modulo 2^61 - 1
        let rot = FpMat::from_sparse(&SparseMatrix::from_i64(&[vec![0, -1], vec![1, 0]])).unwrap();
        assert!(roots(&rot.charpoly()).is_empty());
        assert_eq!(primary_decomposition(&rot).len(), 1);
    }

    #[test]
    fn small_dims() {
        let flip = FpMat::from_sparse(&SparseMatrix::from_i64(&[
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1],
        ]))
        .unwrap();
        assert_eq!(commutant_dim(4, &[flip.clone()], &[]), 10);
        assert_eq!(commutant_dim(4, &[flip.clone()], &[flip.clone()]), 10);
        assert_eq!(algebra_dim(4, &[flip.clone()], &[]), 2);
        assert_eq!(algebra_dim(4, &[flip.clone()], &[flip]), 2);
        assert_eq!(commutant_dim(3, &[], &[]), 9);
    }
}
