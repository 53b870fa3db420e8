//! Elements of gl_N, gradings, sl2-triples, centralizers and the subalgebras
//! `m` and `n` attached to a good grading.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, rat, render, Rational, SparseMatrix};
use crate::pyramid::Pyramid;

/// An exact `N x N` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GlElement {
    n: usize,
    m: SparseMatrix,
}

impl fmt::Debug for GlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, j, v) in self.m.entries() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if v.is_one() {
                write!(f, "E{},{}", i + 1, j + 1)?;
            } else {
                write!(f, "({v})E{},{}", i + 1, j + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for GlElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(usize, usize, String)> =
            self.m.entries().map(|(i, j, v)| (i + 1, j + 1, render(v))).collect();
        let mut st = s.serialize_struct("GlElement", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl GlElement {
    pub fn zero(n: usize) -> Self {
        GlElement { n, m: SparseMatrix::zeros(n, n) }
    }

    /// Matrix unit `E_ij` with 0-based indices.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut x = Self::zero(n);
        x.set(i, j, Rational::one());
        x
    }

    pub fn identity(n: usize) -> Self {
        GlElement { n, m: SparseMatrix::identity(n) }
    }

    pub fn from_matrix(m: SparseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::SizeMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(GlElement { n: m.nrows(), m })
    }

    /// Inverse of [`GlElement::coords`].
    pub fn from_coords(n: usize, coords: &BTreeMap<usize, Rational>) -> Self {
        let mut x = Self::zero(n);
        for (k, v) in coords {
            x.set(k / n, k % n, v.clone());
        }
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.m.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.m.set(i, j, v)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.m.entries()
    }

    /// Coordinates in the matrix-unit basis, `E_ij` at index `i * N + j`.
    pub fn coords(&self) -> BTreeMap<usize, Rational> {
        self.m.vectorize()
    }

    fn check(&self, other: &GlElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &GlElement) -> GlElement {
        GlElement { n: self.n, m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &GlElement) -> GlElement {
        GlElement { n: self.n, m: self.m.sub(&other.m) }
    }

    pub fn scale(&self, c: &Rational) -> GlElement {
        GlElement { n: self.n, m: self.m.scale(c) }
    }

    pub fn add_scaled(&self, other: &GlElement, c: &Rational) -> GlElement {
        GlElement { n: self.n, m: self.m.combine(&other.m, c) }
    }

    pub fn mul(&self, other: &GlElement) -> GlElement {
        GlElement { n: self.n, m: self.m.mul(&other.m) }
    }

    pub fn try_bracket(&self, other: &GlElement) -> Result<GlElement> {
        self.check(other)?;
        Ok(self.bracket(other))
    }

    /// `xy - yx`; panics on a size mismatch.
    pub fn bracket(&self, other: &GlElement) -> GlElement {
        assert_eq!(self.n, other.n, "bracket of matrices of different sizes");
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rational {
        self.m.trace()
    }

    /// `(x|y) = tr(xy)`.
    pub fn trace_form(&self, other: &GlElement) -> Rational {
        let mut acc = Rational::zero();
        for (i, j, v) in self.m.entries() {
            let w = other.m.get(j, i);
            if !w.is_zero() {
                acc += v * w;
            }
        }
        acc
    }

    pub fn pow(&self, k: usize) -> GlElement {
        let mut out = GlElement::identity(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// Diagonal grading: `E_ij` has degree `weights[i] - weights[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    weights: Vec<Rational>,
}

impl Serialize for Grading {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<String> = self.weights.iter().map(render).collect();
        w.serialize(s)
    }
}

impl Grading {
    pub fn new(weights: Vec<Rational>) -> Self {
        Grading { weights }
    }

    pub fn from_integers(weights: &[i64]) -> Self {
        Grading { weights: weights.iter().map(|&w| rat(w)).collect() }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn degree(&self, i: usize, j: usize) -> Rational {
        &self.weights[i] - &self.weights[j]
    }

    pub fn is_integral(&self) -> bool {
        (0..self.n()).all(|i| self.degree(i, 0).is_integer())
    }

    /// Same degrees, weights shifted so that the smallest is 0.
    pub fn canonical(&self) -> Grading {
        let Some(min) = self.weights.iter().min().cloned() else { return self.clone() };
        Grading { weights: self.weights.iter().map(|w| w - &min).collect() }
    }

    /// Degree of a homogeneous nonzero element.
    pub fn degree_of(&self, x: &GlElement) -> Option<Rational> {
        let mut degs = x.entries().map(|(i, j, _)| self.degree(i, j));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Matrix units `(i, j)` of the given degree, in lexicographic order.
    pub fn units_of_degree(&self, d: &Rational) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.degree(i, j) == *d)
            .collect()
    }

    pub fn units_where(&self, pred: impl Fn(&Rational) -> bool) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| pred(&self.degree(i, j)))
            .collect()
    }

    pub fn occupied_degrees(&self) -> BTreeSet<Rational> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.degree(i, j)).collect()
    }
}

/// Matrix of `ad x` restricted to the span of `sources`, written in the full
/// matrix-unit basis (row `i * N + j` is the coefficient of `E_ij`).
pub fn ad_matrix(x: &GlElement, sources: &[(usize, usize)]) -> SparseMatrix {
    let n = x.n();
    let mut out = SparseMatrix::zeros(n * n, sources.len());
    for (col, &(a, b)) in sources.iter().enumerate() {
        // [x, E_ab] = sum_i x_ia E_ib - sum_j x_bj E_aj
        for i in 0..n {
            let v = x.get(i, a);
            if !v.is_zero() {
                out.add_to(i * n + b, col, &v);
            }
        }
        for j in 0..n {
            let v = x.get(b, j);
            if !v.is_zero() {
                out.add_to(a * n + j, col, &-v);
            }
        }
    }
    out
}

fn all_units(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

/// Rows of `m` indexed by the given matrix units.
fn select_rows(m: &SparseMatrix, n: usize, targets: &[(usize, usize)]) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(targets.len(), m.ncols());
    for (r, &(i, j)) in targets.iter().enumerate() {
        for (c, v) in m.row(i * n + j) {
            out.set(r, *c, v.clone());
        }
    }
    out
}

pub fn centralizer_dim_of(e: &GlElement) -> usize {
    let n = e.n();
    n * n - rank(&ad_matrix(e, &all_units(n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodGradingReport {
    pub e_in_degree_two: bool,
    pub injective_below: bool,
    pub surjective_above: bool,
    pub centralizer_nonnegative: bool,
    pub pairing_orthogonal: bool,
    pub dimension_identity: bool,
    pub center_in_degree_zero: bool,
}

impl GoodGradingReport {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn checks(&self) -> [(&'static str, bool); 7] {
        [
            ("e_in_degree_two", self.e_in_degree_two),
            ("injective_below", self.injective_below),
            ("surjective_above", self.surjective_above),
            ("centralizer_nonnegative", self.centralizer_nonnegative),
            ("pairing_orthogonal", self.pairing_orthogonal),
            ("dimension_identity", self.dimension_identity),
            ("center_in_degree_zero", self.center_in_degree_zero),
        ]
    }
}

/// Checks the axioms of a good grading and the properties derived from them.
///
/// For real gradings the centralizer condition reads `g_e ⊆ g_{>-1}` and the
/// dimension identity `dim g_e = sum_{-1 < j <= 1} dim g_j`; both reduce to
/// the usual statements when all degrees are integers.
pub fn check_good(grading: &Grading, e: &GlElement) -> GoodGradingReport {
    let n = e.n();
    assert_eq!(grading.n(), n, "grading and element of different sizes");
    let two = rat(2);
    let minus_one = rat(-1);
    let e_in_degree_two = e.is_zero() || grading.degree_of(e) == Some(two.clone());

    let degrees = grading.occupied_degrees();
    let injective_below = degrees.iter().filter(|d| **d <= minus_one).all(|d| {
        let src = grading.units_of_degree(d);
        rank(&ad_matrix(e, &src)) == src.len()
    });
    let surjective_above = degrees.iter().filter(|t| *t - &two >= minus_one).all(|t| {
        let src = grading.units_of_degree(&(t - &two));
        let tgt = grading.units_of_degree(t);
        rank(&select_rows(&ad_matrix(e, &src), n, &tgt)) == tgt.len()
    });

    let ad = ad_matrix(e, &all_units(n));
    let centralizer_nonnegative = kernel_basis(&ad).iter().all(|v| {
        v.iter().enumerate().all(|(k, x)| x.is_zero() || grading.degree(k / n, k % n) > minus_one)
    });

    let mut pairing_orthogonal = true;
    for (i, j) in all_units(n) {
        for (k, l) in all_units(n) {
            let d = grading.degree(i, j) + grading.degree(k, l);
            if !d.is_zero() {
                let x = GlElement::unit(n, i, j);
                let y = GlElement::unit(n, k, l);
                pairing_orthogonal &= x.trace_form(&y).is_zero();
            }
        }
    }

    let dim_ge = n * n - rank(&ad);
    let dim_near_zero = grading.units_where(|d| *d > minus_one && *d <= Rational::one()).len();
    let dimension_identity = dim_ge == dim_near_zero;

    let center_in_degree_zero = GlElement::identity(n).entries().all(|(i, j, _)| grading.degree(i, j).is_zero());

    GoodGradingReport {
        e_in_degree_two,
        injective_below,
        surjective_above,
        centralizer_nonnegative,
        pairing_orthogonal,
        dimension_identity,
        center_in_degree_zero,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Triple {
    pub e: GlElement,
    pub h: GlElement,
    pub f: GlElement,
}

impl Sl2Triple {
    pub fn relations_hold(&self) -> bool {
        self.e.bracket(&self.f) == self.h
            && self.h.bracket(&self.e) == self.e.scale(&rat(2))
            && self.h.bracket(&self.f) == self.f.scale(&rat(-2))
    }
}

/// The sl2-triple through `e^P`, assembled row by row from the standard
/// triple of a single Jordan block.
pub fn sl2_complete(pyr: &Pyramid) -> Sl2Triple {
    let n = pyr.n();
    let lab = pyr.labeling();
    let mut h = GlElement::zero(n);
    let mut f = GlElement::zero(n);
    for r in 0..pyr.shape().len() {
        let boxes = lab.row(r);
        let k = boxes.len() as i64;
        for (t0, &b) in boxes.iter().enumerate() {
            let t = t0 as i64 + 1;
            h.set(b, b, rat(k + 1 - 2 * t));
            if t < k {
                f.set(boxes[t0 + 1], b, rat(t * (k - t)));
            }
        }
    }
    let triple = Sl2Triple { e: pyr.nilpotent(), h, f };
    debug_assert!(triple.relations_hold());
    debug_assert!(f_is_rigid(&triple));
    triple
}

/// Given `e` and `h`, `f` is unique: `ad e` is injective on the `-2`
/// eigenspace of `ad h`.
pub fn f_is_rigid(t: &Sl2Triple) -> bool {
    let n = t.e.n();
    let src: Vec<(usize, usize)> = all_units(n)
        .into_iter()
        .filter(|&(i, j)| t.h.get(i, i) - t.h.get(j, j) == rat(-2))
        .collect();
    rank(&ad_matrix(&t.e, &src)) == src.len()
}

/// Homogeneous basis of the centralizer of `e^P`, one element
/// `z_{j,i;k}` for each pair of rows and each admissible `k`.
pub fn centralizer_basis(pyr: &Pyramid) -> Vec<GlElement> {
    let n = pyr.n();
    let lab = pyr.labeling();
    let lam = pyr.shape().parts();
    let mut out = Vec::with_capacity(pyr.shape().centralizer_dim());
    for (i, &li) in lam.iter().enumerate() {
        for (j, &lj) in lam.iter().enumerate() {
            for k in lj.saturating_sub(li)..lj {
                let mut z = GlElement::zero(n);
                // e^t g_i -> e^{t+k} g_j, where e^t g_i is the box t steps left of the rightmost
                let mut t = 0;
                while t < li && t + k < lj {
                    z.set(lab.row(j)[lj - 1 - t - k], lab.row(i)[li - 1 - t], Rational::one());
                    t += 1;
                }
                out.push(z);
            }
        }
    }
    out
}

/// The linear form `x -> tr(x e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chi {
    e: GlElement,
}

impl Chi {
    pub fn new(e: GlElement) -> Self {
        Chi { e }
    }

    pub fn e(&self) -> &GlElement {
        &self.e
    }

    pub fn eval(&self, x: &GlElement) -> Rational {
        x.trace_form(&self.e)
    }
}

/// Gram matrix of `<x, y> = tr([x, y] e)` on the matrix units of `g_-1`,
/// taken in lexicographic order.
pub fn symplectic_form(grading: &Grading, e: &GlElement) -> SparseMatrix {
    let units = grading.units_of_degree(&rat(-1));
    let n = e.n();
    let k = units.len();
    let mut gram = SparseMatrix::zeros(k, k);
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(p, q)) in units.iter().enumerate() {
            let br = GlElement::unit(n, i, j).bracket(&GlElement::unit(n, p, q));
            gram.set(a, b, br.trace_form(e));
        }
    }
    gram
}

fn pair(gram: &SparseMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    let gy = gram.mul_vec(y);
    x.iter().zip(&gy).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Symplectic basis `(u_a, v_a)` with `<u_a, v_b> = delta_ab` and
/// `<u_a, u_b> = <v_a, v_b> = 0`, built greedily over the standard basis.
pub fn symplectic_basis(gram: &SparseMatrix) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let k = gram.nrows();
    let mut pool: Vec<Vec<Rational>> = (0..k)
        .map(|i| (0..k).map(|j| rat((i == j) as i64)).collect())
        .collect();
    let (mut us, mut vs) = (Vec::new(), Vec::new());
    loop {
        let found = (0..pool.len()).find_map(|a| {
            (0..pool.len()).find_map(|b| {
                let p = pair(gram, &pool[a], &pool[b]);
                (!p.is_zero()).then_some((a, b, p))
            })
        });
        let Some((a, b, p)) = found else { break };
        let u = pool[a].clone();
        let v: Vec<Rational> = pool[b].iter().map(|x| x / &p).collect();
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        pool.remove(hi);
        pool.remove(lo);
        for x in &mut pool {
            let xv = pair(gram, x, &v);
            let xu = pair(gram, x, &u);
            for t in 0..k {
                x[t] = &x[t] - &xv * &u[t] + &xu * &v[t];
            }
        }
        pool.retain(|x| x.iter().any(|c| !c.is_zero()));
        us.push(u);
        vs.push(v);
    }
    (us, vs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubalgebraKind {
    M,
    N,
    P,
    Centralizer,
    Lagrangian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subalgebra {
    pub kind: SubalgebraKind,
    pub basis: Vec<GlElement>,
}

impl Subalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `[a, b]` lies in the span for all basis elements.
    pub fn is_closed(&self) -> bool {
        let Some(first) = self.basis.first() else { return true };
        let n = first.n();
        let rows: Vec<Vec<Rational>> = self.basis.iter().map(|x| dense_coords(x, n)).collect();
        let r = rank(&SparseMatrix::from_dense(&rows));
        for a in &self.basis {
            for b in &self.basis {
                let mut ext = rows.clone();
                ext.push(dense_coords(&a.bracket(b), n));
                if rank(&SparseMatrix::from_dense(&ext)) != r {
                    return false;
                }
            }
        }
        true
    }
}

fn dense_coords(x: &GlElement, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n * n];
    for (k, c) in x.coords() {
        v[k] = c;
    }
    v
}

/// Everything attached to a good grading and an isotropic subspace of `g_-1`.
#[derive(Clone, Debug)]
pub struct WhittakerData {
    pub grading: Grading,
    pub e: GlElement,
    pub chi: Chi,
    /// Symplectic basis of `g_-1`: `l` is spanned by the first `rank` of the `u`s.
    pub u: Vec<GlElement>,
    pub v: Vec<GlElement>,
    pub rank: usize,
    pub m: Subalgebra,
    pub n: Subalgebra,
}

impl WhittakerData {
    pub fn half_dim_minus_one(&self) -> usize {
        self.u.len()
    }

    /// The `g_-1` basis vectors outside `l`.
    pub fn minus_one_complement(&self) -> Vec<GlElement> {
        self.u[self.rank..].iter().chain(&self.v).cloned().collect()
    }

    pub fn lagrangian(&self) -> Vec<GlElement> {
        self.u[..self.rank].to_vec()
    }
}

pub fn build_m_n(grading: &Grading, e: &GlElement, isotropic_rank: usize) -> Result<(Subalgebra, Subalgebra, Chi)> {
    let data = whittaker_data(grading, e, isotropic_rank)?;
    Ok((data.m, data.n, data.chi))
}

/// `m = l + g_{<=-2}`, `n = l' + g_{<=-2}` where `l` is the span of the
/// first `isotropic_rank` vectors `u_a` and `l'` its annihilator.
pub fn whittaker_data(grading: &Grading, e: &GlElement, isotropic_rank: usize) -> Result<WhittakerData> {
    let n = e.n();
    let gram = symplectic_form(grading, e);
    let (us, vs) = symplectic_basis(&gram);
    let half = us.len();
    if isotropic_rank > half {
        return Err(Error::IsotropicRankTooLarge { requested: isotropic_rank, max: half });
    }
    let units = grading.units_of_degree(&rat(-1));
    let to_gl = |c: &Vec<Rational>| {
        let mut x = GlElement::zero(n);
        for (k, &(i, j)) in units.iter().enumerate() {
            if !c[k].is_zero() {
                x.set(i, j, c[k].clone());
            }
        }
        x
    };
    let u: Vec<GlElement> = us.iter().map(to_gl).collect();
    let v: Vec<GlElement> = vs.iter().map(to_gl).collect();
    let low: Vec<GlElement> = grading
        .units_where(|d| *d <= rat(-2))
        .into_iter()
        .map(|(i, j)| GlElement::unit(n, i, j))
        .collect();
    let m_basis: Vec<GlElement> = u[..isotropic_rank].iter().chain(&low).cloned().collect();
    let n_basis: Vec<GlElement> = u.iter().chain(&v[isotropic_rank..]).chain(&low).cloned().collect();
    Ok(WhittakerData {
        grading: grading.clone(),
        e: e.clone(),
        chi: Chi::new(e.clone()),
        u,
        v,
        rank: isotropic_rank,
        m: Subalgebra { kind: SubalgebraKind::M, basis: m_basis },
        n: Subalgebra { kind: SubalgebraKind::N, basis: n_basis },
    })
}

pub fn lagrangian_data(grading: &Grading, e: &GlElement) -> WhittakerData {
    let half = grading.units_of_degree(&rat(-1)).len() / 2;
    whittaker_data(grading, e, half).expect("Lagrangian rank is always admissible")
}

/// Kazhdan degrees `2 - j` over a homogeneous basis of `g_f ∩ g_j`.
pub fn slodowy_degrees(pyr: &Pyramid) -> Vec<i64> {
    let grading = pyr.grading();
    let f = sl2_complete(pyr).f;
    let mut out = Vec::new();
    for d in grading.occupied_degrees() {
        let src = grading.units_of_degree(&d);
        let dim = src.len() - rank(&ad_matrix(&f, &src));
        let kaz = (rat(2) - &d).to_integer();
        let kaz: i64 = kaz.try_into().expect("small degree");
        out.extend(std::iter::repeat_n(kaz, dim));
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn u(n: usize, i: usize, j: usize) -> GlElement {
        GlElement::unit(n, i - 1, j - 1)
    }

    #[test]
    fn brackets() {
        assert_eq!(u(2, 1, 2).bracket(&u(2, 2, 1)), u(2, 1, 1).sub(&u(2, 2, 2)));
        let x = u(3, 1, 2).add(&u(3, 3, 1).scale(&rat(5)));
        assert!(x.bracket(&x).is_zero());
        let h = u(3, 1, 1).sub(&u(3, 3, 3));
        assert_eq!(h.bracket(&u(3, 1, 3)), u(3, 1, 3).scale(&rat(2)));
        assert!(u(2, 1, 1).try_bracket(&u(3, 1, 1)).is_err());
    }

    #[test]
    fn check_good_examples() {
        let e = u(3, 1, 3);
        let dynkin = Grading::from_integers(&[1, 0, -1]);
        assert!(check_good(&dynkin, &e).all_pass());
        let other = Grading::from_integers(&[1, 1, -1]);
        assert!(check_good(&other, &e).all_pass());
        assert!(other.units_of_degree(&rat(-1)).is_empty());
        let flat = Grading::from_integers(&[0, 0]);
        let r = check_good(&flat, &u(2, 1, 2));
        assert!(!r.e_in_degree_two);
        assert!(!r.all_pass());
    }

    #[test]
    fn injective_iff_surjective_for_row_shifts() {
        // weights making e homogeneous of degree 2 are exactly arbitrary row shifts
        let lam = part(&[3, 2, 1]);
        let base = Pyramid::french(&lam);
        let lab = base.labeling();
        for s1 in -4i64..=4 {
            for s2 in -4i64..=4 {
                let shift = [0, s1, s2];
                let w: Vec<Rational> =
                    (0..6).map(|i| rat(-lab.col(i) - shift[lab.box_of(i).row])).collect();
                let g = Grading::new(w);
                let r = check_good(&g, &base.nilpotent());
                assert!(r.e_in_degree_two);
                assert_eq!(r.injective_below, r.surjective_above);
                let left = vec![-2, -2 + s1, -2 + s2];
                assert_eq!(r.all_pass(), Pyramid::new(lam.clone(), left).is_ok());
            }
        }
    }

    #[test]
    fn sl2_examples() {
        let t = sl2_complete(&Pyramid::dynkin(&Partition::row(4)));
        assert!(t.relations_hold());
        assert_eq!(t.e, Partition::row(4).jordan_matrix());
        for i in 0..4 {
            assert_eq!(t.h.get(i, i), rat(3 - 2 * i as i64));
        }
        for i in 1..4 {
            assert_eq!(t.f.get(i, i - 1), rat((i * (4 - i)) as i64));
        }
        let t = sl2_complete(&Pyramid::dynkin(&part(&[2, 1])));
        assert_eq!(t.h, u(3, 1, 1).sub(&u(3, 3, 3)));
        assert_eq!(t.f, u(3, 3, 1));
        let t = sl2_complete(&Pyramid::french(&Partition::column(3)));
        assert!(t.e.is_zero() && t.h.is_zero() && t.f.is_zero());
    }

    #[test]
    fn sl2_graded_for_all_pyramids() {
        for n in 1..=5 {
            for lam in Partition::all(n) {
                for pyr in Pyramid::enumerate(&lam) {
                    let t = sl2_complete(&pyr);
                    let g = pyr.grading();
                    assert!(t.relations_hold());
                    assert!(f_is_rigid(&t));
                    assert!(t.h.is_zero() || g.degree_of(&t.h) == Some(rat(0)));
                    assert!(t.f.is_zero() || g.degree_of(&t.f) == Some(rat(-2)));
                }
            }
        }
    }

    #[test]
    fn centralizer_of_e13() {
        let pyr = Pyramid::dynkin(&part(&[2, 1]));
        let g = pyr.grading();
        let basis = centralizer_basis(&pyr);
        let mut by_degree: BTreeMap<Rational, Vec<GlElement>> = BTreeMap::new();
        for z in basis {
            by_degree.entry(g.degree_of(&z).unwrap()).or_default().push(z);
        }
        let expect = |xs: Vec<GlElement>| {
            let mut v = xs;
            v.sort_by_key(|x| format!("{x}"));
            v
        };
        let mut got0 = by_degree[&rat(0)].clone();
        got0.sort_by_key(|x| format!("{x}"));
        assert_eq!(got0, expect(vec![u(3, 1, 1).add(&u(3, 3, 3)), u(3, 2, 2)]));
        let mut got1 = by_degree[&rat(1)].clone();
        got1.sort_by_key(|x| format!("{x}"));
        assert_eq!(got1, expect(vec![u(3, 1, 2), u(3, 2, 3)]));
        assert_eq!(by_degree[&rat(2)], vec![u(3, 1, 3)]);
    }

    #[test]
    fn centralizer_of_zero() {
        let basis = centralizer_basis(&Pyramid::french(&Partition::column(3)));
        assert_eq!(basis.len(), 9);
        for i in 0..3 {
            for j in 0..3 {
                assert!(basis.contains(&GlElement::unit(3, i, j)));
            }
        }
    }

    #[test]
    fn symplectic_examples() {
        let pyr = Pyramid::dynkin(&part(&[2, 1]));
        let gram = symplectic_form(&pyr.grading(), &pyr.nilpotent());
        // <E21, E32> = tr([E21, E32] E13) = tr(-E31 E13) = -1
        assert_eq!(gram, SparseMatrix::from_i64(&[vec![0, -1], vec![1, 0]]));
        let reg = Pyramid::dynkin(&Partition::row(2));
        assert_eq!(symplectic_form(&reg.grading(), &reg.nilpotent()).nrows(), 0);
        let fr = Pyramid::french(&part(&[3, 2, 2]));
        assert_eq!(symplectic_form(&fr.grading(), &fr.nilpotent()).nrows(), 0);
    }

    #[test]
    fn symplectic_basis_is_symplectic() {
        for lam in [part(&[2, 1]), part(&[3, 2, 2]), part(&[4, 2]), part(&[3, 1, 1])] {
            let pyr = Pyramid::dynkin(&lam);
            let gram = symplectic_form(&pyr.grading(), &pyr.nilpotent());
            assert_eq!(rank(&gram), gram.nrows());
            let (us, vs) = symplectic_basis(&gram);
            assert_eq!(2 * us.len(), gram.nrows());
            for a in 0..us.len() {
                for b in 0..us.len() {
                    assert_eq!(pair(&gram, &us[a], &vs[b]), rat((a == b) as i64));
                    assert!(pair(&gram, &us[a], &us[b]).is_zero());
                    assert!(pair(&gram, &vs[a], &vs[b]).is_zero());
                }
            }
        }
    }

    #[test]
    fn m_and_n() {
        let reg = Pyramid::dynkin(&Partition::row(2));
        let (m, n, chi) = build_m_n(&reg.grading(), &reg.nilpotent(), 0).unwrap();
        assert_eq!(m.basis, vec![u(2, 2, 1)]);
        assert_eq!(n.basis, vec![u(2, 2, 1)]);
        assert_eq!(chi.eval(&u(2, 2, 1)), rat(1));
        let pyr = Pyramid::dynkin(&part(&[2, 1]));
        let (m, n, _) = build_m_n(&pyr.grading(), &pyr.nilpotent(), 0).unwrap();
        assert_eq!(m.basis, vec![u(3, 3, 1)]);
        assert_eq!(n.dim(), 3);
        assert!(m.is_closed() && n.is_closed());
        assert!(build_m_n(&pyr.grading(), &pyr.nilpotent(), 2).is_err());
        let (m, _, chi) = build_m_n(&pyr.grading(), &pyr.nilpotent(), 1).unwrap();
        assert_eq!(m.dim(), 2);
        for a in &m.basis {
            for b in &m.basis {
                assert!(chi.eval(&a.bracket(b)).is_zero());
            }
        }
    }

    #[test]
    fn slodowy_examples() {
        assert_eq!(slodowy_degrees(&Pyramid::dynkin(&Partition::row(4))), vec![2, 4, 6, 8]);
        assert_eq!(slodowy_degrees(&Pyramid::french(&Partition::column(3))), vec![2; 9]);
        assert_eq!(slodowy_degrees(&Pyramid::dynkin(&part(&[2, 1]))), vec![2, 2, 3, 3, 4]);
    }

    #[test]
    fn slodowy_matches_transposed_centralizer() {
        // g_f is the transpose of the centralizer of e for the Dynkin triple
        for lam in Partition::all(5) {
            let pyr = Pyramid::dynkin(&lam);
            let g = pyr.grading();
            let mut degs: Vec<i64> = centralizer_basis(&pyr)
                .iter()
                .map(|z| (rat(2) + g.degree_of(z).unwrap()).to_integer().try_into().unwrap())
                .collect();
            degs.sort_unstable();
            assert_eq!(slodowy_degrees(&pyr), degs);
        }
    }
}
