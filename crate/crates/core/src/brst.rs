//! The BRST complex `Λ(m*) ⊗ U(g) ⊗ Λ(m̂)` of an even good grading.
//!
//! Terms are stored in the normal order `f^F u b̂^B` with `F`, `B` subsets
//! of the chosen basis of `m` (bitmasks), all `f` before all `b̂`. `U(g)`
//! commutes with the odd generators and `{f^i, b̂_j} = δ_ij`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl::{GlElement, Grading};
use crate::linalg::{frac, rank, rat, Rational, SparseMatrix};
use crate::pbw::{Monomial, PbwElement, WContext};
use crate::pyramid::Pyramid;

pub type OddSet = u64;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BrstElement {
    terms: BTreeMap<(OddSet, Monomial, OddSet), Rational>,
}

impl BrstElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(OddSet, Monomial, OddSet), Rational> {
        &self.terms
    }

    pub fn add_term(&mut self, f: OddSet, m: Monomial, b: OddSet, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let key = (f, m, b);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &BrstElement, c: &Rational) {
        for ((f, m, b), v) in &other.terms {
            self.add_term(*f, m.clone(), *b, &(v * c));
        }
    }

    pub fn add(&self, other: &BrstElement) -> BrstElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &BrstElement) -> BrstElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> BrstElement {
        let mut out = BrstElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// `|F| - |B|` if every term has the same value.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|(f, _, b)| f.count_ones() as i64 - b.count_ones() as i64);
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Parity if homogeneous.
    pub fn parity(&self) -> Option<u32> {
        let mut ps = self.terms.keys().map(|(f, _, b)| (f.count_ones() + b.count_ones()) % 2);
        let p = ps.next()?;
        ps.all(|x| x == p).then_some(p)
    }
}

fn bits_above(set: OddSet, i: usize) -> u32 {
    (set >> (i + 1)).count_ones()
}

/// Generators of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// A symbol of the PBW basis of `U(g)`.
    Even(usize),
    F(usize),
    BHat(usize),
}

impl Generator {
    fn is_odd(self) -> bool {
        !matches!(self, Generator::Even(_))
    }
}

#[derive(Debug)]
pub struct BrstContext {
    pub ctx: WContext,
    /// Symbols of the basis `b_i` of `m`.
    m: Vec<usize>,
    /// `[b_i, b_j] = sum_k c_ij^k b_k`.
    structure: Vec<Vec<Vec<(usize, Rational)>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub d_squared_zero: bool,
    pub matches_phi: bool,
    pub raises_degree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BrstReport {
    pub generators: Vec<GeneratorCheck>,
    pub phi_basis_independent: bool,
    pub q_well_defined: bool,
}

impl BrstReport {
    pub fn all_pass(&self) -> bool {
        self.phi_basis_independent
            && self.q_well_defined
            && self.generators.iter().all(|g| g.d_squared_zero && g.matches_phi && g.raises_degree)
    }
}

impl BrstContext {
    pub fn new(grading: &Grading, e: &GlElement) -> Result<BrstContext> {
        if !grading.units_of_degree(&rat(-1)).is_empty() || !grading.is_integral() {
            return Err(Error::NotEven);
        }
        let ctx = WContext::new(grading, e, 0)?;
        let m: Vec<usize> = ctx.m_symbols().collect();
        if m.len() > 64 {
            return Err(Error::SizeMismatch { expected: 64, found: m.len() });
        }
        let basis = ctx.alg.basis();
        let pos = |s: usize| m.iter().position(|&x| x == s).expect("m is closed under brackets");
        let structure = m
            .iter()
            .map(|&a| m.iter().map(|&b| basis.bracket(a, b).iter().map(|(s, c)| (pos(*s), c.clone())).collect()).collect())
            .collect();
        Ok(BrstContext { ctx, m, structure })
    }

    pub fn for_pyramid(pyr: &Pyramid) -> Result<BrstContext> {
        Self::new(&pyr.grading(), &pyr.nilpotent())
    }

    pub fn dim_m(&self) -> usize {
        self.m.len()
    }

    pub fn m_element(&self, i: usize) -> &GlElement {
        self.ctx.alg.basis().element(self.m[i])
    }

    pub fn one(&self) -> BrstElement {
        self.even(&self.ctx.alg.one())
    }

    pub fn even(&self, u: &PbwElement) -> BrstElement {
        let mut out = BrstElement::zero();
        for (m, c) in u.terms() {
            out.add_term(0, m.clone(), 0, c);
        }
        out
    }

    pub fn generator(&self, g: Generator) -> BrstElement {
        let one = Rational::one();
        let mut out = BrstElement::zero();
        let unit = self.ctx.alg.unit_monomial();
        match g {
            Generator::Even(s) => return self.even(&self.ctx.alg.symbol(s)),
            Generator::F(i) => out.add_term(1 << i, unit, 0, &one),
            Generator::BHat(i) => out.add_term(0, unit, 1 << i, &one),
        }
        out
    }

    pub fn generators(&self) -> Vec<Generator> {
        let k = self.dim_m();
        (0..self.ctx.alg.dim())
            .map(Generator::Even)
            .chain((0..k).map(Generator::F))
            .chain((0..k).map(Generator::BHat))
            .collect()
    }

    pub fn label(&self, g: Generator) -> String {
        let basis = self.ctx.alg.basis();
        match g {
            Generator::Even(s) => basis.label(s).to_string(),
            Generator::F(i) => format!("f^({})", basis.label(self.m[i])),
            Generator::BHat(i) => format!("hat({})", basis.label(self.m[i])),
        }
    }

    fn times_generator(&self, x: &BrstElement, g: Generator) -> BrstElement {
        let mut out = BrstElement::zero();
        match g {
            Generator::Even(s) => {
                for ((f, m, b), c) in &x.terms {
                    let u = self.ctx.alg.mul_symbol(&PbwElement::from_terms([(m.clone(), Rational::one())]), s);
                    for (mm, cc) in u.terms() {
                        out.add_term(*f, mm.clone(), *b, &(c * cc));
                    }
                }
            }
            Generator::F(i) => {
                let bit = 1u64 << i;
                for ((f, m, b), c) in &x.terms {
                    if f & bit == 0 {
                        let sign = b.count_ones() + bits_above(*f, i);
                        let v = if sign.is_multiple_of(2) { c.clone() } else { -c };
                        out.add_term(f | bit, m.clone(), *b, &v);
                    }
                    if b & bit != 0 {
                        let v = if bits_above(*b, i).is_multiple_of(2) { c.clone() } else { -c };
                        out.add_term(*f, m.clone(), b & !bit, &v);
                    }
                }
            }
            Generator::BHat(j) => {
                let bit = 1u64 << j;
                for ((f, m, b), c) in &x.terms {
                    if b & bit == 0 {
                        let v = if bits_above(*b, j).is_multiple_of(2) { c.clone() } else { -c };
                        out.add_term(*f, m.clone(), b | bit, &v);
                    }
                }
            }
        }
        out
    }

    fn word(&self, f: OddSet, m: &Monomial, b: OddSet) -> Vec<Generator> {
        let k = self.dim_m();
        let mut w: Vec<Generator> = (0..k).filter(|i| f >> i & 1 == 1).map(Generator::F).collect();
        for (s, &e) in m.iter().enumerate() {
            w.extend(std::iter::repeat_n(Generator::Even(s), e as usize));
        }
        w.extend((0..k).filter(|i| b >> i & 1 == 1).map(Generator::BHat));
        w
    }

    /// Superalgebra product.
    pub fn mul(&self, x: &BrstElement, y: &BrstElement) -> BrstElement {
        let mut out = BrstElement::zero();
        for ((f, m, b), c) in &y.terms {
            let mut cur = x.clone();
            for g in self.word(*f, m, *b) {
                cur = self.times_generator(&cur, g);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    /// `[x, y] = xy - (-1)^{|x||y|} yx` for homogeneous `x`, `y`.
    pub fn supercommutator(&self, x: &BrstElement, y: &BrstElement) -> BrstElement {
        let both_odd = x.parity() == Some(1) && y.parity() == Some(1);
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        if both_odd {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }

    fn hat_of(&self, coords: &[(usize, Rational)]) -> BrstElement {
        let mut out = BrstElement::zero();
        for (k, c) in coords {
            out.add_scaled(&self.generator(Generator::BHat(*k)), c);
        }
        out
    }

    fn bracket_with_m(&self, i: usize, u: &PbwElement) -> PbwElement {
        self.ctx.alg.commutator(&self.ctx.alg.symbol(self.m[i]), u)
    }

    /// `φ = f^i (b_i - χ(b_i)) - ½ f^i f^j [b_i, b_j]^` for the basis
    /// `b'_i = sum_a rows[i][a] b_a` and its dual basis.
    pub fn phi_with_basis(&self, rows: &[Vec<Rational>]) -> Result<BrstElement> {
        let k = self.dim_m();
        let a = SparseMatrix::from_dense(rows);
        if a.nrows() != k || a.ncols() != k || rank(&a) != k {
            return Err(Error::SizeMismatch { expected: k, found: rank(&a) });
        }
        let inv = inverse(&a);
        let alg = &self.ctx.alg;
        // b'_i in U(g), f'^i and b̂'_i as odd elements, [b'_i, b'_j] in m coordinates
        let b_even: Vec<PbwElement> = (0..k)
            .map(|i| {
                let mut u = PbwElement::zero();
                for (a_, c) in a.row(i) {
                    u.add_scaled(&alg.symbol(self.m[*a_]), c);
                }
                u
            })
            .collect();
        let f_dual: Vec<BrstElement> = (0..k)
            .map(|i| {
                let mut out = BrstElement::zero();
                for a_ in 0..k {
                    out.add_scaled(&self.generator(Generator::F(a_)), &inv.get(a_, i));
                }
                out
            })
            .collect();
        let chi: Vec<Rational> = (0..k)
            .map(|i| a.row(i).iter().map(|(a_, c)| c * self.ctx.chi_of_symbol(self.m[*a_])).sum())
            .collect();
        let mut phi = BrstElement::zero();
        for i in 0..k {
            let lin = self.even(&b_even[i].sub(&alg.scalar(&chi[i])));
            phi = phi.add(&self.mul(&f_dual[i], &lin));
        }
        let half = frac(-1, 2);
        for i in 0..k {
            for j in 0..k {
                let mut coords: BTreeMap<usize, Rational> = BTreeMap::new();
                for (p, cp) in a.row(i) {
                    for (q, cq) in a.row(j) {
                        for (r, cr) in &self.structure[*p][*q] {
                            *coords.entry(*r).or_insert_with(Rational::zero) += cp * cq * cr;
                        }
                    }
                }
                let coords: Vec<(usize, Rational)> = coords.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if coords.is_empty() {
                    continue;
                }
                let ff = self.mul(&f_dual[i], &f_dual[j]);
                phi.add_scaled(&self.mul(&ff, &self.hat_of(&coords)), &half);
            }
        }
        Ok(phi)
    }

    pub fn phi(&self) -> BrstElement {
        let k = self.dim_m();
        let id: Vec<Vec<Rational>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        self.phi_with_basis(&id).expect("identity is invertible")
    }

    /// `d` on a generator.
    pub fn differential(&self, g: Generator) -> BrstElement {
        let k = self.dim_m();
        let alg = &self.ctx.alg;
        let mut out = BrstElement::zero();
        match g {
            Generator::Even(s) => {
                let x = alg.symbol(s);
                for i in 0..k {
                    let br = self.even(&self.bracket_with_m(i, &x));
                    out = out.add(&self.mul(&self.generator(Generator::F(i)), &br));
                }
            }
            Generator::F(t) => {
                let half = frac(-1, 2);
                for i in 0..k {
                    for j in 0..k {
                        for (r, c) in &self.structure[i][j] {
                            if *r == t {
                                let ff = self.mul(&self.generator(Generator::F(i)), &self.generator(Generator::F(j)));
                                out.add_scaled(&ff, &(c * &half));
                            }
                        }
                    }
                }
            }
            Generator::BHat(t) => {
                let b = alg.symbol(self.m[t]).sub(&alg.scalar(self.ctx.chi_of_symbol(self.m[t])));
                out = self.even(&b);
                for i in 0..k {
                    let h = self.hat_of(&self.structure[i][t]);
                    out = out.add(&self.mul(&self.generator(Generator::F(i)), &h));
                }
            }
        }
        out
    }

    /// `d` extended to all of `B` as an odd derivation.
    pub fn d(&self, x: &BrstElement) -> BrstElement {
        let diffs: Vec<BrstElement> = self.generators().into_iter().map(|g| self.differential(g)).collect();
        let index = |g: Generator| match g {
            Generator::Even(s) => s,
            Generator::F(i) => self.ctx.alg.dim() + i,
            Generator::BHat(i) => self.ctx.alg.dim() + self.dim_m() + i,
        };
        let mut out = BrstElement::zero();
        for ((f, m, b), c) in &x.terms {
            let w = self.word(*f, m, *b);
            let mut odd_before = 0;
            for (pos, &g) in w.iter().enumerate() {
                let mut prefix = self.one();
                for &h in &w[..pos] {
                    prefix = self.times_generator(&prefix, h);
                }
                let mut term = self.mul(&prefix, &diffs[index(g)]);
                for &h in &w[pos + 1..] {
                    term = self.times_generator(&term, h);
                }
                let sign = if odd_before % 2 == 0 { c.clone() } else { -c };
                out.add_scaled(&term, &sign);
                if g.is_odd() {
                    odd_before += 1;
                }
            }
        }
        out
    }

    fn check_generator(&self, phi: &BrstElement, g: Generator) -> GeneratorCheck {
        let x = self.generator(g);
        let dx = self.differential(g);
        let raises = dx.is_zero() || dx.degree() == x.degree().map(|d| d + 1);
        GeneratorCheck {
            generator: self.label(g),
            d_squared_zero: self.d(&dx).is_zero(),
            matches_phi: self.supercommutator(phi, &x) == dx,
            raises_degree: raises,
        }
    }

    /// Compares `φ` for the standard basis of `m` with `φ` for a random
    /// integral change of basis.
    pub fn phi_basis_independent(&self, seed: u64) -> bool {
        let k = self.dim_m();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = loop {
            let rows: Vec<Vec<Rational>> =
                (0..k).map(|_| (0..k).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect();
            if rank(&SparseMatrix::from_dense(&rows)) == k {
                break rows;
            }
        };
        self.phi_with_basis(&rows).expect("invertible") == self.phi()
    }

    /// `B⁰ -> U(g) -> Q_χ`: terms with odd factors lie in `m* B⁰ m̂`.
    pub fn q_project(&self, x: &BrstElement) -> Result<PbwElement> {
        if let Some(d) = x.degree().filter(|d| *d != 0) {
            return Err(Error::NonzeroDegree(d));
        }
        let mut u = PbwElement::zero();
        for ((f, m, b), c) in &x.terms {
            if *f == 0 && *b == 0 {
                u.add_term(m.clone(), c);
            }
        }
        Ok(self.ctx.q_reduce(&u))
    }

    /// `q(d(u b̂_k)) = 0` for the given `u`, and `d(y)` has all its `m*`
    /// coefficients in `I_χ` when `y` is Whittaker invariant.
    pub fn q_compatible(&self, samples: &[PbwElement]) -> bool {
        let k = self.dim_m();
        samples.iter().all(|u| {
            let ok_minus = (0..k).all(|t| {
                let x = self.mul(&self.even(u), &self.generator(Generator::BHat(t)));
                self.q_project(&self.d(&x)).map(|q| q.is_zero()).unwrap_or(false)
            });
            let invariant = self.ctx.is_whittaker_invariant(u);
            let dy = self.d(&self.even(u));
            let coeffs_in_ideal = (0..k).all(|i| {
                let mut part = PbwElement::zero();
                for ((f, m, b), c) in dy.terms() {
                    if *f == 1 << i && *b == 0 {
                        part.add_term(m.clone(), c);
                    }
                }
                self.ctx.q_reduce(&part).is_zero()
            });
            ok_minus && coeffs_in_ideal == invariant
        })
    }

    pub fn check(&self, seed: u64, samples: &[PbwElement]) -> BrstReport {
        let phi = self.phi();
        let generators = self.generators().into_par_iter().map(|g| self.check_generator(&phi, g)).collect();
        BrstReport {
            generators,
            phi_basis_independent: self.phi_basis_independent(seed),
            q_well_defined: self.q_compatible(samples),
        }
    }
}

fn inverse(a: &SparseMatrix) -> SparseMatrix {
    let k = a.nrows();
    let mut inv = SparseMatrix::zeros(k, k);
    for c in 0..k {
        let rhs: Vec<Rational> = (0..k).map(|r| if r == c { Rational::one() } else { Rational::zero() }).collect();
        let col = crate::linalg::solve(a, &rhs).expect("invertible");
        for (r, v) in col.into_iter().enumerate() {
            inv.set(r, c, v);
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn gl2_regular() -> BrstContext {
        BrstContext::for_pyramid(&Pyramid::french(&Partition::row(2))).unwrap()
    }

    #[test]
    fn clifford_relations() {
        let b = BrstContext::for_pyramid(&Pyramid::french(&Partition::row(3))).unwrap();
        assert_eq!(b.dim_m(), 3);
        for i in 0..3 {
            let fi = b.generator(Generator::F(i));
            assert!(b.mul(&fi, &fi).is_zero());
            for j in 0..3 {
                let bj = b.generator(Generator::BHat(j));
                let anti = b.mul(&fi, &bj).add(&b.mul(&bj, &fi));
                let expect = if i == j { b.one() } else { BrstElement::zero() };
                assert_eq!(anti, expect);
                let fj = b.generator(Generator::F(j));
                assert!(b.mul(&fi, &fj).add(&b.mul(&fj, &fi)).is_zero());
            }
        }
        let u = b.even(&b.ctx.alg.unit(0, 1));
        let v = b.even(&b.ctx.alg.unit(1, 0));
        assert_eq!(b.mul(&u, &v), b.even(&b.ctx.alg.mul(&b.ctx.alg.unit(0, 1), &b.ctx.alg.unit(1, 0))));
    }

    #[test]
    fn gl2_phi_and_differential() {
        let b = gl2_regular();
        assert_eq!(b.dim_m(), 1);
        let alg = &b.ctx.alg;
        let e21 = alg.unit(1, 0).sub(&alg.one());
        let expect = b.mul(&b.generator(Generator::F(0)), &b.even(&e21));
        assert_eq!(b.phi(), expect);
        assert_eq!(b.differential(Generator::BHat(0)), b.even(&e21));
        assert!(b.differential(Generator::F(0)).is_zero());
        assert_eq!(b.phi_with_basis(&[vec![rat(2)]]).unwrap(), b.phi());
        let id = b.even(&alg.unit(0, 0).add(&alg.unit(1, 1)));
        assert!(b.d(&id).is_zero());
    }

    #[test]
    fn zero_nilpotent_is_trivial() {
        let b = BrstContext::for_pyramid(&Pyramid::french(&Partition::column(2))).unwrap();
        assert_eq!(b.dim_m(), 0);
        assert!(b.phi().is_zero());
        assert!(b.check(1, &[]).all_pass());
    }

    #[test]
    fn phi_has_cubic_term_iff_m_not_abelian() {
        let cubic = |b: &BrstContext| b.phi().terms().keys().any(|(f, _, _)| f.count_ones() == 2);
        assert!(cubic(&BrstContext::for_pyramid(&Pyramid::french(&Partition::row(3))).unwrap()));
        assert!(!cubic(&gl2_regular()));
    }

    #[test]
    fn gl3_even_pyramids_pass() {
        for lam in Partition::all(3) {
            for pyr in Pyramid::enumerate(&lam).into_iter().filter(|p| p.is_even()) {
                let b = BrstContext::for_pyramid(&pyr).unwrap();
                let report = b.check(11, &[b.ctx.alg.one()]);
                assert!(report.all_pass(), "{pyr:?}: {report:?}");
            }
        }
    }

    #[test]
    fn odd_grading_rejected() {
        let p = Pyramid::dynkin(&Partition::new(vec![2, 1]).unwrap());
        assert!(matches!(BrstContext::for_pyramid(&p), Err(Error::NotEven)));
    }

    #[test]
    fn q_projection() {
        let b = gl2_regular();
        let alg = &b.ctx.alg;
        let w = alg.unit(0, 0).add(&alg.unit(1, 1));
        assert_eq!(b.q_project(&b.even(&w)).unwrap(), w);
        let x = b.mul(&b.mul(&b.generator(Generator::F(0)), &b.even(&alg.unit(0, 1))), &b.generator(Generator::BHat(0)));
        assert!(b.q_project(&x).unwrap().is_zero());
        assert!(b.q_project(&b.generator(Generator::F(0))).is_err());
        assert!(b.q_compatible(&[w, alg.unit(0, 0)]));
    }
}
