//! Degenerate affine Hecke algebra operators on `V^{⊗d}`, the W-algebra
//! action on the same space, and the double centralizer dimensions.
//!
//! Basis vectors `v_i = v_{i_1} ⊗ ... ⊗ v_{i_d}` are indexed with `i_1`
//! most significant; letters are 0-based.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl::slodowy_degrees;
use crate::linalg::{kernel_basis_sparse, rat, IntRow, Rational, RowSpace, SparseMatrix};
use crate::modp::{self, FpMat};
use crate::partition::Partition;
use crate::pbw::{eta_shifts, regular_w, PbwElement, WContext};
use crate::pyramid::Pyramid;

#[derive(Clone, Debug)]
pub struct DualitySetting {
    pub shape: Partition,
    pub pyramid: Pyramid,
    pub d: usize,
}

impl DualitySetting {
    pub fn new(shape: &Partition, d: usize) -> Self {
        DualitySetting { shape: shape.clone(), pyramid: Pyramid::french(shape), d }
    }

    pub fn n(&self) -> usize {
        self.shape.size()
    }

    pub fn level(&self) -> usize {
        self.shape.first()
    }

    pub fn dim(&self) -> usize {
        self.n().pow(self.d as u32)
    }

    pub fn word(&self, mut idx: usize) -> Vec<usize> {
        let n = self.n();
        let mut w = vec![0; self.d];
        for k in (0..self.d).rev() {
            w[k] = idx % n;
            idx /= n;
        }
        w
    }

    pub fn index(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &l| acc * self.n() + l)
    }

    /// Flip of the tensor factors `j`, `j + 1` (1-based).
    pub fn s_op(&self, j: usize) -> Result<SparseMatrix> {
        if j == 0 || j >= self.d {
            return Err(Error::IndexOutOfRange { index: j, max: self.d.saturating_sub(1) });
        }
        let mut m = SparseMatrix::zeros(self.dim(), self.dim());
        for idx in 0..self.dim() {
            let mut w = self.word(idx);
            w.swap(j - 1, j);
            m.set(self.index(&w), idx, Rational::one());
        }
        Ok(m)
    }

    /// `x_1 v_i = v_{L(i_1) i_2 ...} + (λ'_{col(i_1)} - λ_1) v_i -
    /// sum_{k > 1, col(i_k) < col(i_1)} v_{i (1 k)}`, with columns of the
    /// French diagram numbered from 1.
    pub fn x1_op(&self) -> SparseMatrix {
        let lab = self.pyramid.labeling();
        let conj = self.shape.conjugate();
        let col = |l: usize| lab.box_of(l).pos + 1;
        let lam1 = self.level() as i64;
        let mut m = SparseMatrix::zeros(self.dim(), self.dim());
        if self.d == 0 {
            return m;
        }
        for idx in 0..self.dim() {
            let w = self.word(idx);
            let c1 = col(w[0]);
            if let Some(l) = lab.left_of(w[0]) {
                let mut v = w.clone();
                v[0] = l;
                m.add_to(self.index(&v), idx, &Rational::one());
            }
            m.add_to(idx, idx, &rat(conj.parts()[c1 - 1] as i64 - lam1));
            for k in 1..self.d {
                if col(w[k]) < c1 {
                    let mut v = w.clone();
                    v.swap(0, k);
                    m.add_to(self.index(&v), idx, &-Rational::one());
                }
            }
        }
        m
    }

    /// `x_1, ..., x_d` from `x_{i+1} = s_i x_i s_i + s_i`.
    pub fn x_ops(&self) -> Vec<SparseMatrix> {
        let mut out = Vec::with_capacity(self.d);
        if self.d == 0 {
            return out;
        }
        out.push(self.x1_op());
        for i in 1..self.d {
            let s = self.s_op(i).expect("valid index");
            let next = s.mul(&out[i - 1]).mul(&s).add(&s);
            out.push(next);
        }
        out
    }

    /// `x_i` (1-based).
    pub fn xi_op(&self, i: usize) -> Result<SparseMatrix> {
        if i == 0 || i > self.d {
            return Err(Error::IndexOutOfRange { index: i, max: self.d });
        }
        Ok(self.x_ops().swap_remove(i - 1))
    }

    pub fn s_ops(&self) -> Vec<SparseMatrix> {
        (1..self.d).map(|j| self.s_op(j).expect("valid index")).collect()
    }

    pub fn verify_daha(&self) -> DahaReport {
        let s = self.s_ops();
        let x = self.x_ops();
        let id = SparseMatrix::identity(self.dim());
        let comm = |a: &SparseMatrix, b: &SparseMatrix| a.mul(b) == b.mul(a);
        let involutions = s.iter().all(|si| si.mul(si) == id);
        let braid = (0..s.len().saturating_sub(1))
            .all(|i| s[i].mul(&s[i + 1]).mul(&s[i]) == s[i + 1].mul(&s[i]).mul(&s[i + 1]));
        let distant = (0..s.len()).all(|i| (i + 2..s.len()).all(|j| comm(&s[i], &s[j])));
        let polynomial = (0..x.len()).all(|i| (i + 1..x.len()).all(|j| comm(&x[i], &x[j])));
        let mixed_far = (0..s.len()).all(|i| (0..x.len()).filter(|&j| j != i && j != i + 1).all(|j| comm(&s[i], &x[j])));
        let mixed_near = (0..s.len()).all(|i| s[i].mul(&x[i + 1]).sub(&x[i].mul(&s[i])) == id);
        DahaReport { involutions, braid, distant, polynomial, mixed_far, mixed_near }
    }

    /// `prod_{i=1}^{λ_1} (x_1 - (λ'_i - λ_1)) = 0`.
    pub fn cyclotomic_check(&self) -> bool {
        let x1 = self.x1_op();
        let lam1 = self.level() as i64;
        let id = SparseMatrix::identity(self.dim());
        let mut prod = id.clone();
        for &c in self.shape.conjugate().parts() {
            let factor = x1.sub(&id.scale(&rat(c as i64 - lam1)));
            prod = prod.mul(&factor);
        }
        prod.is_zero()
    }

    /// `Δ(E_ij) = sum_k 1 ⊗ ... ⊗ E_ij ⊗ ... ⊗ 1`.
    pub fn unit_action(&self, i: usize, j: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(self.dim(), self.dim());
        for idx in 0..self.dim() {
            let w = self.word(idx);
            for k in 0..self.d {
                if w[k] == j {
                    let mut v = w.clone();
                    v[k] = i;
                    m.add_to(self.index(&v), idx, &Rational::one());
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DahaReport {
    pub involutions: bool,
    pub braid: bool,
    pub distant: bool,
    pub polynomial: bool,
    pub mixed_far: bool,
    pub mixed_near: bool,
}

impl DahaReport {
    pub fn all_pass(&self) -> bool {
        self.involutions && self.braid && self.distant && self.polynomial && self.mixed_far && self.mixed_near
    }
}

/// How `W ⊆ U(p)` acts: through `η` (`E_jj -> E_jj + shift_j`) or its
/// inverse, followed by the tensor power of the natural representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EtaConvention {
    Twist,
    #[default]
    Untwist,
}

impl std::str::FromStr for EtaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twist" => Ok(EtaConvention::Twist),
            "untwist" => Ok(EtaConvention::Untwist),
            other => Err(Error::Parse(format!("unknown convention {other}"))),
        }
    }
}

/// Filtered piece of the W-algebra of the French pyramid that contains a
/// generating set.
#[derive(Debug)]
pub struct WGenerators {
    pub ctx: WContext,
    pub gens: Vec<PbwElement>,
    pub max_degree: i64,
}

impl WGenerators {
    /// Row determinant generators for a single row, otherwise a basis of
    /// `F_D W` with `D` the top degree of the Slodowy slice.
    pub fn new(shape: &Partition) -> Self {
        if shape.len() == 1 {
            Self::from_rdet(shape.size())
        } else {
            Self::from_w_space(shape)
        }
    }

    pub fn from_w_space(shape: &Partition) -> Self {
        let pyr = Pyramid::french(shape);
        let ctx = WContext::for_pyramid(&pyr, 0).expect("French pyramids are even");
        let max_degree = slodowy_degrees(&pyr).into_iter().max().unwrap_or(0);
        let ws = ctx.w_space(max_degree);
        let gens = ws.by_degree.iter().filter(|(d, _)| **d > 0).flat_map(|(_, v)| v.iter().cloned()).collect();
        WGenerators { ctx, gens, max_degree }
    }

    /// `w_1, ..., w_n` for the regular nilpotent of gl_n.
    pub fn from_rdet(n: usize) -> Self {
        let ctx = WContext::for_pyramid(&Pyramid::french(&Partition::row(n)), 0).expect("even");
        let gens = regular_w(&ctx.alg, n);
        WGenerators { ctx, gens, max_degree: 2 * n as i64 }
    }

    fn symbol_actions(&self, setting: &DualitySetting, conv: EtaConvention) -> Result<Vec<Option<SparseMatrix>>> {
        let basis = self.ctx.alg.basis();
        let shifts = eta_shifts(&setting.pyramid)?;
        let sign = match conv {
            EtaConvention::Twist => rat(1),
            EtaConvention::Untwist => rat(-1),
        };
        let id = SparseMatrix::identity(setting.dim());
        Ok(self
            .ctx
            .complement_symbols()
            .map(|s| {
                basis.unit_of(s).map(|(i, j)| {
                    let a = setting.unit_action(i, j);
                    if i == j {
                        a.add(&id.scale(&(&shifts[i] * &sign)))
                    } else {
                        a
                    }
                })
            })
            .collect())
    }

    /// `Φ_d(y)`; `y` must be Whittaker invariant and supported on `U(p)`.
    pub fn action(&self, setting: &DualitySetting, y: &PbwElement, conv: EtaConvention) -> Result<SparseMatrix> {
        if !self.ctx.is_whittaker_invariant(y) {
            return Err(Error::NotInvariant);
        }
        let acts = self.symbol_actions(setting, conv)?;
        self.apply(setting, &acts, y)
    }

    fn apply(&self, setting: &DualitySetting, acts: &[Option<SparseMatrix>], y: &PbwElement) -> Result<SparseMatrix> {
        let dim = setting.dim();
        let mut out = SparseMatrix::zeros(dim, dim);
        for (m, c) in y.terms() {
            let mut op = SparseMatrix::identity(dim);
            for (s, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let a = acts
                    .get(s)
                    .and_then(|a| a.as_ref())
                    .ok_or_else(|| Error::OutsideParabolic(self.ctx.alg.basis().label(s).to_string()))?;
                for _ in 0..e {
                    op = op.mul(a);
                }
            }
            out = out.combine(&op, c);
        }
        Ok(out)
    }

    /// Images of all generators.
    pub fn images(&self, setting: &DualitySetting, conv: EtaConvention) -> Result<Vec<SparseMatrix>> {
        let acts = self.symbol_actions(setting, conv)?;
        self.gens.par_iter().map(|y| self.apply(setting, &acts, y)).collect()
    }
}

/// Dimension of `{A : AB = BA for all B in ops}`, by an exact kernel.
pub fn commutant_dim(size: usize, ops: &[SparseMatrix]) -> Result<usize> {
    for op in ops {
        if op.nrows() != size || op.ncols() != size {
            return Err(Error::SizeMismatch { expected: size, found: op.nrows() });
        }
    }
    let var = |r: usize, c: usize| r * size + c;
    let mut rows = Vec::new();
    for b in ops {
        let bt = b.transpose();
        for r in 0..size {
            for c in 0..size {
                // (AB - BA)_{rc} = sum_k A_rk B_kc - B_rk A_kc
                let mut entries: Vec<(usize, Rational)> = Vec::new();
                for (k, v) in bt.row(c) {
                    entries.push((var(r, *k), v.clone()));
                }
                for (k, v) in b.row(r) {
                    entries.push((var(*k, c), -v));
                }
                let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
                for (k, v) in entries {
                    *merged.entry(k).or_insert_with(Rational::zero) += v;
                }
                let row = IntRow::from_rationals(merged.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v)));
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Ok(kernel_basis_sparse(rows, size * size).len())
}

/// Dimension of the unital algebra generated by `ops`, by exact span
/// saturation under right multiplication.
pub fn algebra_dim(size: usize, ops: &[SparseMatrix]) -> usize {
    let vec_of = |m: &SparseMatrix| IntRow::from_rationals(m.entries().map(|(r, c, v)| (r * size + c, v)));
    let mut space = RowSpace::new();
    let id = SparseMatrix::identity(size);
    space.insert(vec_of(&id));
    let mut queue = vec![id];
    let cap = size.pow(4).max(1);
    let mut steps = 0;
    while let Some(x) = queue.pop() {
        for g in ops {
            steps += 1;
            if steps > cap || space.dim() == size * size {
                return space.dim();
            }
            let y = x.mul(g);
            if space.insert(vec_of(&y)) {
                queue.push(y);
            }
        }
    }
    space.dim()
}

/// Dimension of the algebra generated by the images of `gens`.
pub fn phi_image_dim(
    setting: &DualitySetting,
    w: &WGenerators,
    gens: &[PbwElement],
    conv: EtaConvention,
) -> Result<usize> {
    let imgs: Vec<SparseMatrix> = gens.iter().map(|y| w.action(setting, y, conv)).collect::<Result<_>>()?;
    Ok(algebra_dim(setting.dim(), &imgs))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DualityDims {
    pub w_image: usize,
    pub hecke_commutant: usize,
    pub hecke_image: usize,
    pub w_commutant: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub shape: Vec<usize>,
    pub d: usize,
    pub convention: EtaConvention,
    pub daha: bool,
    pub cyclotomic: bool,
    /// Every W image commutes with every Hecke generator, exactly.
    pub images_commute: bool,
    pub dims: DualityDims,
    pub certified: bool,
}

impl DualityReport {
    pub fn all_pass(&self) -> bool {
        self.daha && self.cyclotomic && self.images_commute && self.certified
    }
}

fn to_fp(ops: &[SparseMatrix]) -> Vec<FpMat> {
    ops.iter().map(|m| FpMat::from_sparse(m).expect("denominators prime to p")).collect()
}

fn commuting_subset(ops: &[FpMat]) -> Vec<FpMat> {
    let mut order: Vec<usize> = (0..ops.len()).collect();
    order.sort_by_key(|&i| !ops[i].is_diagonal());
    let mut chosen: Vec<FpMat> = Vec::new();
    for i in order {
        if chosen.iter().all(|c| c.commutes_with(&ops[i])) {
            chosen.push(ops[i].clone());
        }
    }
    chosen
}

/// Both double centralizer equalities. The image dimensions are lower
/// bounds and the commutant dimensions upper bounds (ranks modulo a prime
/// never exceed ranks over `Q`); the images are contained in the opposite
/// commutants exactly, so agreeing bounds certify the equalities.
pub fn double_centralizer_check(setting: &DualitySetting, w: &WGenerators, conv: EtaConvention) -> Result<DualityReport> {
    let n = setting.dim();
    let w_imgs = w.images(setting, conv)?;
    let s = setting.s_ops();
    let x = setting.x_ops();
    let mut hecke: Vec<SparseMatrix> = s.clone();
    hecke.extend(x.first().cloned());
    let images_commute =
        w_imgs.par_iter().all(|a| hecke.iter().all(|b| a.mul(b) == b.mul(a)));

    let w_fp = to_fp(&w_imgs);
    let h_fp = to_fp(&hecke);
    let x_fp = to_fp(&x);
    let w_comm = commuting_subset(&w_fp);
    let dims = DualityDims {
        w_image: modp::algebra_dim(n, &w_fp, &w_comm),
        hecke_commutant: modp::commutant_dim(n, &h_fp, &x_fp),
        hecke_image: modp::algebra_dim(n, &h_fp, &x_fp),
        w_commutant: modp::commutant_dim(n, &w_fp, &w_comm),
    };
    let certified = images_commute && dims.w_image == dims.hecke_commutant && dims.hecke_image == dims.w_commutant;
    let daha = setting.d < 2 || setting.verify_daha().all_pass();
    Ok(DualityReport {
        shape: setting.shape.parts().to_vec(),
        d: setting.d,
        convention: conv,
        daha,
        cyclotomic: setting.cyclotomic_check(),
        images_commute,
        dims,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn flips() {
        let st = DualitySetting::new(&Partition::row(2), 2);
        let s = st.s_op(1).unwrap();
        assert_eq!(s, SparseMatrix::from_i64(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]));
        assert!(st.s_op(2).is_err() && st.s_op(0).is_err());
        // Ω = sum E_ij ⊗ E_ji is the flip
        let mut omega = SparseMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for idx in 0..4 {
                    let w = st.word(idx);
                    if w[0] == i && w[1] == j {
                        omega.add_to(st.index(&[j, i]), idx, &Rational::one());
                    }
                }
            }
        }
        assert_eq!(omega, s);
        let st3 = DualitySetting::new(&part(&[2, 1]), 3);
        assert!(st3.verify_daha().all_pass());
    }

    #[test]
    fn x1_examples() {
        let st = DualitySetting::new(&Partition::column(3), 2);
        assert_eq!(st.x1_op(), SparseMatrix::identity(9).scale(&rat(2)));
        let st = DualitySetting::new(&Partition::row(3), 1);
        let expect = SparseMatrix::from_i64(&[vec![-2, 1, 0], vec![0, -2, 1], vec![0, 0, -2]]);
        assert_eq!(st.x1_op(), expect);
        for lam in [part(&[2, 1]), Partition::row(3), Partition::column(2)] {
            for d in 1..=2 {
                assert!(DualitySetting::new(&lam, d).cyclotomic_check(), "{lam} {d}");
            }
        }
    }

    #[test]
    fn daha_relations_small() {
        for n in 1..=3 {
            for lam in Partition::all(n) {
                for d in 2..=3 {
                    let st = DualitySetting::new(&lam, d);
                    assert!(st.verify_daha().all_pass(), "{lam} {d}");
                }
            }
        }
    }

    #[test]
    fn exact_dims() {
        assert_eq!(commutant_dim(3, &[SparseMatrix::identity(3)]).unwrap(), 9);
        let st = DualitySetting::new(&Partition::column(2), 2);
        assert_eq!(commutant_dim(4, &st.s_ops()).unwrap(), 10);
        let units: Vec<SparseMatrix> =
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| st.unit_action(i, j)).collect();
        assert_eq!(commutant_dim(4, &units).unwrap(), 2);
        assert_eq!(algebra_dim(4, &units), 10);
        assert!(commutant_dim(3, &units).is_err());
    }

    #[test]
    fn level_one_schur_algebra() {
        let lam = Partition::column(2);
        let w = WGenerators::new(&lam);
        let st = DualitySetting::new(&lam, 2);
        for conv in [EtaConvention::Twist, EtaConvention::Untwist] {
            assert_eq!(phi_image_dim(&st, &w, &w.gens, conv).unwrap(), 10);
            let r = double_centralizer_check(&st, &w, conv).unwrap();
            assert!(r.all_pass(), "{r:?}");
            assert_eq!(r.dims, DualityDims { w_image: 10, hecke_commutant: 10, hecke_image: 2, w_commutant: 2 });
        }
        let st0 = DualitySetting::new(&lam, 0);
        assert_eq!(phi_image_dim(&st0, &w, &w.gens, EtaConvention::Untwist).unwrap(), 1);
    }

    #[test]
    fn regular_gl2_one_factor() {
        let lam = Partition::row(2);
        let w = WGenerators::new(&lam);
        let st = DualitySetting::new(&lam, 1);
        assert_eq!(phi_image_dim(&st, &w, &w.gens, EtaConvention::Untwist).unwrap(), 2);
        let ctx = &w.ctx;
        assert!(matches!(w.action(&st, &ctx.alg.unit(0, 0), EtaConvention::Untwist), Err(Error::NotInvariant)));
    }

    #[test]
    fn row_determinants_generate_the_same_image() {
        for n in 2..=4 {
            let a = WGenerators::from_rdet(n);
            let b = WGenerators::from_w_space(&Partition::row(n));
            assert_eq!(a.ctx.alg.basis().dim(), b.ctx.alg.basis().dim());
            for d in 1..=2 {
                let st = DualitySetting::new(&Partition::row(n), d);
                let ia = a.images(&st, EtaConvention::Untwist).unwrap();
                let ib = b.images(&st, EtaConvention::Untwist).unwrap();
                let da = algebra_dim(st.dim(), &ia);
                assert_eq!(da, algebra_dim(st.dim(), &ib));
                let both: Vec<SparseMatrix> = ia.into_iter().chain(ib).collect();
                assert_eq!(algebra_dim(st.dim(), &both), da);
            }
        }
    }

    #[test]
    fn untwisted_action_commutes() {
        for lam in [Partition::row(2), part(&[2, 1])] {
            let w = WGenerators::new(&lam);
            for d in 1..=2 {
                let st = DualitySetting::new(&lam, d);
                let r = double_centralizer_check(&st, &w, EtaConvention::Untwist).unwrap();
                assert!(r.all_pass(), "{r:?}");
                let t = double_centralizer_check(&st, &w, EtaConvention::Twist).unwrap();
                assert!(!t.images_commute);
            }
        }
        let st = DualitySetting::new(&Partition::row(2), 2);
        let r = double_centralizer_check(&st, &WGenerators::new(&Partition::row(2)), EtaConvention::Untwist).unwrap();
        assert_eq!(r.dims, DualityDims { w_image: 3, hecke_commutant: 3, hecke_image: 6, w_commutant: 6 });
    }
}
