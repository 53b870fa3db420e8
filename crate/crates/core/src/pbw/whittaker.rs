//! Reduction modulo `I_chi`, Whittaker invariance and the degree-truncated
//! W-algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Enveloping, LieBasis, Monomial, PbwElement};
use crate::error::{Error, Result};
use crate::gl::{whittaker_data, GlElement, Grading, WhittakerData};
use crate::linalg::{kernel_basis_sparse, rat, IntRow, Rational};
use crate::pyramid::Pyramid;

/// `U(g)` over a basis adapted to `(Gamma, e, l)`: first `p` (matrix units
/// of degree >= 0, by degree then index), then the rest of `g_-1`, then `m`.
#[derive(Debug)]
pub struct WContext {
    pub data: WhittakerData,
    pub alg: Enveloping,
    m_start: usize,
    chi: Vec<Rational>,
    n_symbols: Vec<usize>,
    kazhdan: Vec<i64>,
}

fn label_of(x: &GlElement) -> String {
    let entries: Vec<_> = x.entries().collect();
    match entries.as_slice() {
        [(i, j, c)] if c.is_one() => format!("E{},{}", i + 1, j + 1),
        _ => format!("({x})"),
    }
}

impl WContext {
    pub fn new(grading: &Grading, e: &GlElement, isotropic_rank: usize) -> Result<WContext> {
        if !grading.is_integral() {
            return Err(Error::NotIntegral);
        }
        let data = whittaker_data(grading, e, isotropic_rank)?;
        let n = e.n();
        let deg = |i: usize, j: usize| -> i64 { grading.degree(i, j).to_integer().try_into().expect("small degree") };
        let mut p_units = grading.units_where(|d| !d.is_negative_rational());
        p_units.sort_by_key(|&(i, j)| (deg(i, j), i, j));
        let mut low = grading.units_where(|d| *d <= rat(-2));
        low.sort_by_key(|&(i, j)| (deg(i, j), i, j));

        let mut elements: Vec<GlElement> = p_units.iter().map(|&(i, j)| GlElement::unit(n, i, j)).collect();
        let mut kazhdan: Vec<i64> = p_units.iter().map(|&(i, j)| deg(i, j) + 2).collect();
        let comp = data.minus_one_complement();
        kazhdan.extend(std::iter::repeat_n(1, comp.len()));
        elements.extend(comp);
        let m_start = elements.len();
        let lag = data.lagrangian();
        kazhdan.extend(std::iter::repeat_n(1, lag.len()));
        elements.extend(lag);
        kazhdan.extend(low.iter().map(|&(i, j)| deg(i, j) + 2));
        elements.extend(low.iter().map(|&(i, j)| GlElement::unit(n, i, j)));

        let labels = elements.iter().map(label_of).collect();
        let chi = elements.iter().map(|x| data.chi.eval(x)).collect();
        let basis = LieBasis::new(elements, labels).expect("adapted elements form a basis");

        // n = l' + g_{<=-2}: every m symbol, and the u_a, v_a with a >= rank
        let r = data.half_dim_minus_one();
        let k = data.rank;
        let comp_start = p_units.len();
        let mut n_symbols: Vec<usize> = (0..r - k).map(|a| comp_start + a).collect();
        n_symbols.extend((k..r).map(|b| comp_start + (r - k) + b));
        n_symbols.extend(m_start..basis.dim());
        n_symbols.sort_unstable();

        Ok(WContext { data, alg: Enveloping::new(Arc::new(basis)), m_start, chi, n_symbols, kazhdan })
    }

    pub fn for_pyramid(pyr: &Pyramid, isotropic_rank: usize) -> Result<WContext> {
        Self::new(&pyr.grading(), &pyr.nilpotent(), isotropic_rank)
    }

    /// Lagrangian choice, `l = l'`.
    pub fn lagrangian(pyr: &Pyramid) -> WContext {
        let half = pyr.grading().units_of_degree(&rat(-1)).len() / 2;
        Self::for_pyramid(pyr, half).expect("Lagrangian rank is admissible")
    }

    pub fn m_symbols(&self) -> std::ops::Range<usize> {
        self.m_start..self.alg.dim()
    }

    pub fn n_symbols(&self) -> &[usize] {
        &self.n_symbols
    }

    /// Symbols outside `m`; their monomials form a basis of `Q_chi`.
    pub fn complement_symbols(&self) -> std::ops::Range<usize> {
        0..self.m_start
    }

    pub fn chi_of_symbol(&self, s: usize) -> &Rational {
        &self.chi[s]
    }

    pub fn kazhdan_of_symbol(&self, s: usize) -> i64 {
        self.kazhdan[s]
    }

    pub fn kazhdan_of_monomial(&self, m: &Monomial) -> i64 {
        m.iter().zip(&self.kazhdan).map(|(&e, d)| e as i64 * d).sum()
    }

    /// Class in `Q_chi = U(g)/I_chi`: since `m` symbols sit rightmost in
    /// every monomial, each is replaced by its value under `chi`.
    pub fn q_reduce(&self, u: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (m, c) in u.terms() {
            let mut coeff = c.clone();
            let mut head = m.clone();
            for s in self.m_start..m.len() {
                let e = m[s];
                if e > 0 {
                    let v = &self.chi[s];
                    if v.is_zero() {
                        coeff = Rational::zero();
                        break;
                    }
                    for _ in 0..e {
                        coeff *= v;
                    }
                    head[s] = 0;
                }
            }
            out.add_term(head, &coeff);
        }
        out
    }

    /// Whether `[a, y]` lies in `I_chi` for every `a` in the given symbols.
    pub fn is_invariant_under(&self, symbols: &[usize], y: &PbwElement) -> bool {
        symbols.iter().all(|&a| self.q_reduce(&self.alg.commutator(&self.alg.symbol(a), y)).is_zero())
    }

    /// Invariance under `m`.
    pub fn is_whittaker_invariant(&self, y: &PbwElement) -> bool {
        let m: Vec<usize> = self.m_symbols().collect();
        self.is_invariant_under(&m, y)
    }

    /// Monomials in the complement symbols of Kazhdan degree at most `max`.
    pub fn complement_monomials(&self, max: i64) -> Vec<Monomial> {
        let dim = self.alg.dim();
        let mut out = Vec::new();
        fn rec(ctx: &WContext, s: usize, budget: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if s == ctx.m_start {
                out.push(cur.clone());
                return;
            }
            let d = ctx.kazhdan[s];
            let mut e = 0;
            loop {
                cur[s] = e;
                rec(ctx, s + 1, budget - d * e as i64, cur, out);
                if d * (e as i64 + 1) > budget {
                    break;
                }
                e += 1;
            }
            cur[s] = 0;
        }
        assert!(self.kazhdan[..self.m_start].iter().all(|&d| d >= 1), "complement degrees are positive");
        rec(self, 0, max, &mut vec![0; dim], &mut out);
        out
    }

    /// Basis of `F_max W`, the ad n-invariant classes in `Q_chi` of Kazhdan
    /// degree at most `max`, grouped by degree.
    pub fn w_space(&self, max: i64) -> WSpace {
        let mut monos = self.complement_monomials(max);
        monos.sort_by_key(|m| self.kazhdan_of_monomial(m));
        let cols = monos.len();
        let columns: Vec<Vec<((usize, Monomial), Rational)>> = monos
            .par_iter()
            .map(|mono| {
                let y = PbwElement::from_terms([(mono.clone(), Rational::one())]);
                let mut entries = Vec::new();
                for &a in &self.n_symbols {
                    let r = self.q_reduce(&self.alg.commutator(&self.alg.symbol(a), &y));
                    for (m, c) in r.terms() {
                        entries.push(((a, m.clone()), c.clone()));
                    }
                }
                entries
            })
            .collect();
        let mut rows: HashMap<(usize, Monomial), Vec<(usize, Rational)>> = HashMap::new();
        for (c, entries) in columns.into_iter().enumerate() {
            for (key, v) in entries {
                rows.entry(key).or_default().push((c, v));
            }
        }
        let mut keys: Vec<_> = rows.keys().cloned().collect();
        keys.sort();
        let int_rows: Vec<IntRow> =
            keys.iter().map(|k| IntRow::from_rationals(rows[k].iter().map(|(c, v)| (*c, v)))).collect();
        let kernel = kernel_basis_sparse(int_rows, cols);
        let mut by_degree: BTreeMap<i64, Vec<PbwElement>> = (0..=max).map(|d| (d, Vec::new())).collect();
        for v in kernel {
            // the free column is the last nonzero one, and has the top degree
            let top = *v.keys().next_back().expect("kernel vectors are nonzero");
            let d = self.kazhdan_of_monomial(&monos[top]);
            let el = PbwElement::from_terms(v.into_iter().map(|(c, x)| (monos[c].clone(), x)));
            by_degree.entry(d).or_default().push(el);
        }
        WSpace { max_degree: max, by_degree }
    }
}

trait NonNegative {
    fn is_negative_rational(&self) -> bool;
}

impl NonNegative for Rational {
    fn is_negative_rational(&self) -> bool {
        *self < Rational::zero()
    }
}

/// Filtered piece of the W-algebra: basis elements sorted by their top
/// Kazhdan degree.
#[derive(Clone, Debug)]
pub struct WSpace {
    pub max_degree: i64,
    pub by_degree: BTreeMap<i64, Vec<PbwElement>>,
}

impl WSpace {
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.by_degree.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = &PbwElement> {
        self.by_degree.values().flatten()
    }

    pub fn dim(&self) -> usize {
        self.by_degree.values().map(|v| v.len()).sum()
    }
}

/// Number of monomials of each total degree `0..=max` in commuting
/// variables of the given positive degrees.
pub fn monomial_counts(degrees: &[i64], max: i64) -> BTreeMap<i64, usize> {
    let mut counts = vec![0usize; max as usize + 1];
    counts[0] = 1;
    for &d in degrees {
        assert!(d > 0, "generator degrees are positive");
        for t in d as usize..=max as usize {
            counts[t] += counts[t - d as usize];
        }
    }
    counts.into_iter().enumerate().map(|(d, c)| (d as i64, c)).collect()
}

/// Shift `lambda_1 - sum_{c >= col(j)} lambda'_c` added to `E_jj`, with
/// columns of the French diagram numbered from 1.
pub fn eta_shifts(pyr: &Pyramid) -> Result<Vec<Rational>> {
    if !pyr.is_french() {
        return Err(Error::InvalidPyramid("the twist is defined for the French diagram".into()));
    }
    let lam = pyr.shape();
    let conj = lam.conjugate();
    let lab = pyr.labeling();
    let left = pyr.left()[0];
    Ok((0..pyr.n())
        .map(|j| {
            let col = ((lab.col(j) - left) / 2) as usize + 1;
            let tail: usize = conj.parts()[col - 1..].iter().sum();
            rat(lam.first() as i64 - tail as i64)
        })
        .collect())
}

fn shift_diagonal(alg: &Enveloping, pyr: &Pyramid, u: &PbwElement, sign: i64) -> Result<PbwElement> {
    let shifts = eta_shifts(pyr)?;
    let grading = pyr.grading();
    let basis = alg.basis();
    let mut images: Vec<Option<PbwElement>> = vec![None; alg.dim()];
    for m in u.terms().keys() {
        for (s, &e) in m.iter().enumerate() {
            if e == 0 || images[s].is_some() {
                continue;
            }
            let (i, j) = basis
                .unit_of(s)
                .filter(|&(i, j)| grading.degree(i, j) >= Rational::zero())
                .ok_or_else(|| Error::OutsideParabolic(basis.label(s).to_string()))?;
            let mut img = alg.symbol(s);
            if i == j {
                img = img.add(&alg.scalar(&(&shifts[i] * rat(sign))));
            }
            images[s] = Some(img);
        }
    }
    let mut out = PbwElement::zero();
    for (m, c) in u.terms() {
        let mut term = alg.scalar(c);
        for (s, &e) in m.iter().enumerate() {
            for _ in 0..e {
                term = alg.mul(&term, images[s].as_ref().unwrap());
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// The automorphism `E_ij -> E_ij + delta_ij shift_j` of `U(p)`.
pub fn eta_twist(alg: &Enveloping, pyr: &Pyramid, u: &PbwElement) -> Result<PbwElement> {
    shift_diagonal(alg, pyr, u, 1)
}

pub fn eta_untwist(alg: &Enveloping, pyr: &Pyramid, u: &PbwElement) -> Result<PbwElement> {
    shift_diagonal(alg, pyr, u, -1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::slodowy_degrees;
    use crate::linalg::frac;
    use crate::partition::Partition;
    use crate::pbw::regular_w;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn adapted_order_gl2() {
        let ctx = WContext::for_pyramid(&Pyramid::dynkin(&Partition::row(2)), 0).unwrap();
        let b = ctx.alg.basis();
        let labels: Vec<&str> = (0..4).map(|a| b.label(a)).collect();
        assert_eq!(labels, vec!["E1,1", "E2,2", "E1,2", "E2,1"]);
        assert_eq!(ctx.m_symbols(), 3..4);
    }

    #[test]
    fn q_reduce_examples() {
        let ctx = WContext::for_pyramid(&Pyramid::dynkin(&Partition::row(2)), 0).unwrap();
        let alg = &ctx.alg;
        let (e11, e22, e12, e21) = (alg.unit(0, 0), alg.unit(1, 1), alg.unit(0, 1), alg.unit(1, 0));
        assert_eq!(ctx.q_reduce(&e21), alg.one());
        let u = alg.mul(&e11, &e12).add(&e22);
        assert_eq!(ctx.q_reduce(&u), u);
        assert_eq!(ctx.q_reduce(&alg.mul(&e12, &e21)), e12);
        let expect = e12.sub(&e11).add(&e22);
        assert_eq!(ctx.q_reduce(&alg.mul(&e21, &e12)), expect);
    }

    #[test]
    fn regular_gl2_invariants() {
        let ctx = WContext::for_pyramid(&Pyramid::dynkin(&Partition::row(2)), 0).unwrap();
        let alg = &ctx.alg;
        let (e11, e22, e12) = (alg.unit(0, 0), alg.unit(1, 1), alg.unit(0, 1));
        assert!(ctx.is_whittaker_invariant(&e11.add(&e22)));
        let h = e11.sub(&e22);
        let c = e12.add(&alg.mul(&h, &h).scale(&frac(1, 4))).sub(&h.scale(&frac(1, 2)));
        assert!(ctx.is_whittaker_invariant(&c));
        assert!(!ctx.is_whittaker_invariant(&e11));
        for w in regular_w(alg, 2) {
            assert!(ctx.is_whittaker_invariant(&w));
        }
    }

    #[test]
    fn counts() {
        assert_eq!(monomial_counts(&[2, 4], 4), BTreeMap::from([(0, 1), (1, 0), (2, 1), (3, 0), (4, 2)]));
        assert_eq!(monomial_counts(&[], 2), BTreeMap::from([(0, 1), (1, 0), (2, 0)]));
    }

    fn check_dims(pyr: &Pyramid, rank: usize, max: i64) {
        let ctx = WContext::for_pyramid(pyr, rank).unwrap();
        let ws = ctx.w_space(max);
        assert_eq!(ws.graded_dims(), monomial_counts(&slodowy_degrees(pyr), max), "{pyr:?} rank {rank}");
        for y in ws.all() {
            assert!(ctx.is_invariant_under(ctx.n_symbols(), y));
        }
    }

    #[test]
    fn w_space_small() {
        check_dims(&Pyramid::french(&Partition::column(2)), 0, 2);
        let ws = WContext::for_pyramid(&Pyramid::french(&Partition::column(2)), 0).unwrap().w_space(2);
        assert_eq!(ws.graded_dims()[&2], 4);
        check_dims(&Pyramid::dynkin(&Partition::row(2)), 0, 4);
        check_dims(&Pyramid::dynkin(&part(&[2, 1])), 0, 4);
        check_dims(&Pyramid::dynkin(&part(&[2, 1])), 1, 4);
    }

    #[test]
    fn eta_examples() {
        let alg = Enveloping::gl(3);
        let col = Pyramid::french(&Partition::column(3));
        assert_eq!(eta_shifts(&col).unwrap(), vec![rat(-2); 3]);
        let x = alg.mul(&alg.unit(0, 0), &alg.unit(0, 1)).add(&alg.unit(2, 2));
        let t = eta_twist(&alg, &col, &x).unwrap();
        assert_eq!(eta_untwist(&alg, &col, &t).unwrap(), x);
        assert_eq!(eta_twist(&alg, &col, &alg.unit(0, 1)).unwrap(), alg.unit(0, 1));
        let fr = Pyramid::french(&part(&[2, 1]));
        assert!(eta_twist(&alg, &fr, &alg.unit(2, 0)).is_err());
        assert!(eta_shifts(&Pyramid::dynkin(&part(&[2, 1]))).is_err());
        // columns of (2,1) have lengths 2 and 1: shifts 2 - 3 and 2 - 1
        assert_eq!(eta_shifts(&fr).unwrap(), vec![rat(-1), rat(-1), rat(1)]);
    }
}
