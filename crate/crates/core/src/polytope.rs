//! The polytope of good gradings for a nilpotent of Jordan type `lambda`.
//!
//! A toral point `p` has one rational coordinate per Jordan row; it acts on
//! every basis vector of row `r` by `p_r`. The grading `Gamma^p` is given by
//! `ad(h + p)` with `h` the Dynkin element, written in the labelling of the
//! Dynkin pyramid. Representatives are normalised by `p_0 = 0`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl::{symplectic_basis, GlElement, Grading};
use crate::linalg::{rank, rat, Rational, SparseMatrix};
use crate::partition::Partition;
use crate::pyramid::Pyramid;

pub type ToralPoint = Vec<Rational>;

/// The weight `p -> p_target - p_source` of `t_e` on `Hom(row source, row target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RestrictedWeight {
    pub source: usize,
    pub target: usize,
}

impl RestrictedWeight {
    pub fn eval(&self, p: &[Rational]) -> Rational {
        &p[self.target] - &p[self.source]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub weight: RestrictedWeight,
    pub d: usize,
}

/// Dynkin eigenvalue of `h` on each box, indexed by (row, position).
fn dynkin_h(lam: &Partition) -> Vec<Vec<i64>> {
    lam.parts().iter().map(|&k| (0..k as i64).map(|t| k as i64 - 1 - 2 * t).collect()).collect()
}

/// For each ordered pair of rows, the minimal dimension of a simple
/// constituent of the weight space under the principal sl2, found from the
/// eigenvalue multiplicities of `ad h`.
pub fn weights_and_d(lam: &Partition) -> Vec<WeightData> {
    let h = dynkin_h(lam);
    let rows = lam.len();
    let mut out = Vec::new();
    for source in 0..rows {
        for target in 0..rows {
            if source == target {
                continue;
            }
            // E_ij with i in the target row and j in the source row
            let mut mult = std::collections::BTreeMap::<i64, usize>::new();
            for &a in &h[target] {
                for &b in &h[source] {
                    *mult.entry(a - b).or_default() += 1;
                }
            }
            let m = |k: i64| mult.get(&k).copied().unwrap_or(0);
            let k = (0..).find(|&k| m(k) > m(k + 2)).expect("weight space is nonzero");
            out.push(WeightData { weight: RestrictedWeight { source, target }, d: 1 + k as usize });
        }
    }
    out
}

fn check_len(lam: &Partition, p: &[Rational]) -> Result<()> {
    if p.len() != lam.len() {
        return Err(Error::SizeMismatch { expected: lam.len(), found: p.len() });
    }
    Ok(())
}

pub fn is_good_point(lam: &Partition, p: &[Rational]) -> Result<bool> {
    check_len(lam, p)?;
    Ok(weights_and_d(lam).iter().all(|w| w.weight.eval(p).abs() < rat(w.d as i64)))
}

/// Representative with `p_0 = 0`.
pub fn normalize(p: &[Rational]) -> ToralPoint {
    p.iter().map(|x| x - &p[0]).collect()
}

/// All integral good points with `p_0 = 0`, in lexicographic order.
pub fn integral_points(lam: &Partition) -> Vec<ToralPoint> {
    let rows = lam.len();
    let ws = weights_and_d(lam);
    // |p_r - p_0| < d bounds each coordinate
    let bound: Vec<i64> = (0..rows)
        .map(|r| {
            ws.iter()
                .find(|w| w.weight.source == 0 && w.weight.target == r)
                .map_or(0, |w| w.d as i64 - 1)
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; rows];
    fn rec(r: usize, bound: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if r == bound.len() {
            out.push(cur.clone());
            return;
        }
        for v in -bound[r]..=bound[r] {
            cur[r] = v;
            rec(r + 1, bound, cur, out);
        }
    }
    let mut all = Vec::new();
    rec(1, &bound, &mut cur, &mut all);
    for v in all {
        let p: ToralPoint = v.iter().map(|&x| rat(x)).collect();
        if is_good_point(lam, &p).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

/// `Gamma^p` in the labelling of the Dynkin pyramid of `lambda`.
pub fn point_grading(lam: &Partition, p: &[Rational]) -> Result<Grading> {
    check_len(lam, p)?;
    let pyr = Pyramid::dynkin(lam);
    let lab = pyr.labeling();
    let weights = (0..pyr.n())
        .map(|i| {
            let b = lab.box_of(i);
            rat(-b.col) + &p[b.row]
        })
        .collect();
    Ok(Grading::new(weights))
}

/// The nilpotent all `Gamma^p` are good for.
pub fn point_nilpotent(lam: &Partition) -> GlElement {
    Pyramid::dynkin(lam).nilpotent()
}

/// Row shifts of a pyramid relative to the symmetric one.
pub fn point_of_pyramid(pyr: &Pyramid) -> ToralPoint {
    let lam = pyr.shape().parts();
    pyr.left().iter().zip(lam).map(|(&l, &k)| rat(-(l - (1 - k as i64)))).collect()
}

pub fn pyramid_of_point(lam: &Partition, p: &[Rational]) -> Result<Pyramid> {
    check_len(lam, p)?;
    if p.iter().any(|x| !x.is_integer()) {
        return Err(Error::NotIntegral);
    }
    if !is_good_point(lam, p)? {
        return Err(Error::NotGood(format!("{p:?}")));
    }
    let q = normalize(p);
    let left = q
        .iter()
        .zip(lam.parts())
        .map(|(x, &k)| {
            let x: i64 = x.to_integer().try_into().map_err(|_| Error::NotIntegral)?;
            Ok(1 - k as i64 - x)
        })
        .collect::<Result<Vec<i64>>>()?;
    Pyramid::new(lam.clone(), left).map_err(|e| Error::NotGood(e.to_string()))
}

fn straddles_unit_interval(x: &Rational, y: &Rational) -> bool {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    hi.ceil().to_integer() - lo.floor().to_integer() <= 1.into()
}

/// Whether the degrees of every matrix unit under `Gamma^p` and
/// `Gamma^{p'}` lie in a common closed unit interval.
pub fn adjacent(lam: &Partition, p: &[Rational], q: &[Rational]) -> Result<bool> {
    for x in [p, q] {
        if !is_good_point(lam, x)? {
            return Err(Error::NotGood(format!("{x:?}")));
        }
    }
    let g = point_grading(lam, p)?;
    let h = point_grading(lam, q)?;
    let n = lam.size();
    Ok((0..n).all(|i| (0..n).all(|j| straddles_unit_interval(&g.degree(i, j), &h.degree(i, j)))))
}

/// Chain from `p` to `q` of pairwise adjacent good points: the two ends and
/// every point where the segment between them meets a wall `alpha = k`.
pub fn adjacency_chain(lam: &Partition, p: &[Rational], q: &[Rational]) -> Result<Vec<ToralPoint>> {
    for x in [p, q] {
        if !is_good_point(lam, x)? {
            return Err(Error::NotGood(format!("{x:?}")));
        }
    }
    if p == q {
        return Ok(vec![p.to_vec()]);
    }
    let mut ts: Vec<Rational> = Vec::new();
    for w in weights_and_d(lam) {
        let a0 = w.weight.eval(p);
        let a1 = w.weight.eval(q);
        let delta = &a1 - &a0;
        if delta.is_zero() {
            continue;
        }
        let (lo, hi) = if a0 < a1 { (&a0, &a1) } else { (&a1, &a0) };
        let mut k: num_bigint::BigInt = lo.floor().to_integer() + 1;
        while Rational::from_integer(k.clone()) < *hi {
            ts.push((Rational::from_integer(k.clone()) - &a0) / &delta);
            k += 1;
        }
    }
    ts.sort();
    ts.dedup();
    let mut chain = vec![p.to_vec()];
    for t in ts {
        chain.push(p.iter().zip(q).map(|(a, b)| a + &t * (b - a)).collect());
    }
    chain.push(q.to_vec());
    Ok(chain)
}

#[derive(Clone, Debug)]
pub struct MatchingLagrangians {
    pub l: Vec<GlElement>,
    pub l_prime: Vec<GlElement>,
    pub m: Vec<GlElement>,
    pub m_prime: Vec<GlElement>,
}

impl MatchingLagrangians {
    pub fn m_equal(&self) -> bool {
        same_span(&self.m, &self.m_prime)
    }
}

fn same_span(a: &[GlElement], b: &[GlElement]) -> bool {
    let Some(first) = a.first().or(b.first()) else { return true };
    let n = first.n();
    let dense = |xs: &[GlElement]| -> Vec<Vec<Rational>> {
        xs.iter()
            .map(|x| {
                let mut v = vec![Rational::zero(); n * n];
                for (k, c) in x.coords() {
                    v[k] = c;
                }
                v
            })
            .collect()
    };
    let ra = if a.is_empty() { 0 } else { rank(&SparseMatrix::from_dense(&dense(a))) };
    let rb = if b.is_empty() { 0 } else { rank(&SparseMatrix::from_dense(&dense(b))) };
    let both: Vec<GlElement> = a.iter().chain(b).cloned().collect();
    let rab = rank(&SparseMatrix::from_dense(&dense(&both)));
    ra == rb && ra == rab
}

/// Lagrangians `l` of `g_-1` and `l'` of `g'_-1` with equal `m` for two
/// adjacent integral points.
pub fn matching_lagrangians(lam: &Partition, p: &[Rational], q: &[Rational]) -> Result<MatchingLagrangians> {
    if !adjacent(lam, p, q)? {
        return Err(Error::NotGood("points are not adjacent".into()));
    }
    let g = point_grading(lam, p)?;
    let h = point_grading(lam, q)?;
    if !g.is_integral() || !h.is_integral() {
        return Err(Error::NotIntegral);
    }
    let e = point_nilpotent(lam);
    let n = e.n();
    let m1 = rat(-1);
    let both: Vec<(usize, usize)> =
        g.units_where(|d| *d == m1).into_iter().filter(|&(i, j)| h.degree(i, j) == m1).collect();
    let mut gram = SparseMatrix::zeros(both.len(), both.len());
    for (a, &(i, j)) in both.iter().enumerate() {
        for (b, &(k, l)) in both.iter().enumerate() {
            let br = GlElement::unit(n, i, j).bracket(&GlElement::unit(n, k, l));
            gram.set(a, b, br.trace_form(&e));
        }
    }
    let (us, _) = symplectic_basis(&gram);
    let k: Vec<GlElement> = us
        .iter()
        .map(|c| {
            let mut x = GlElement::zero(n);
            for (t, &(i, j)) in both.iter().enumerate() {
                x.set(i, j, c[t].clone());
            }
            x
        })
        .collect();
    let units = |pred: &dyn Fn(&Rational, &Rational) -> bool| -> Vec<GlElement> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| pred(&g.degree(i, j), &h.degree(i, j)))
            .map(|(i, j)| GlElement::unit(n, i, j))
            .collect()
    };
    let l: Vec<GlElement> = k.iter().cloned().chain(units(&|a, b| *a == m1 && *b < m1)).collect();
    let l_prime: Vec<GlElement> = k.iter().cloned().chain(units(&|a, b| *a < m1 && *b == m1)).collect();
    let m: Vec<GlElement> = l.iter().cloned().chain(units(&|a, _| *a < m1)).collect();
    let m_prime: Vec<GlElement> = l_prime.iter().cloned().chain(units(&|_, b| *b < m1)).collect();
    Ok(MatchingLagrangians { l, l_prime, m, m_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::check_good;
    use crate::linalg::frac;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn pt(v: &[i64]) -> ToralPoint {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn d_values() {
        assert!(weights_and_d(&Partition::row(4)).is_empty());
        let w = weights_and_d(&part(&[2, 1]));
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|x| x.d == 2));
        assert!(weights_and_d(&part(&[1, 1])).iter().all(|x| x.d == 1));
        for n in 2..=7 {
            for lam in Partition::all(n) {
                for w in weights_and_d(&lam) {
                    let a = lam.parts()[w.weight.source];
                    let b = lam.parts()[w.weight.target];
                    assert_eq!(w.d, a.abs_diff(b) + 1);
                }
            }
        }
    }

    #[test]
    fn good_points() {
        for lam in Partition::all(5) {
            assert!(is_good_point(&lam, &vec![Rational::zero(); lam.len()]).unwrap());
        }
        let col = Partition::column(3);
        assert!(is_good_point(&col, &pt(&[2, 2, 2])).unwrap());
        assert!(!is_good_point(&col, &pt(&[0, 1, 0])).unwrap());
        assert_eq!(integral_points(&part(&[4, 1])).len(), 7);
        assert!(is_good_point(&col, &pt(&[0, 0])).is_err());
    }

    #[test]
    fn pyramid_round_trip() {
        for n in 1..=5 {
            for lam in Partition::all(n) {
                for pyr in Pyramid::enumerate(&lam) {
                    let p = point_of_pyramid(&pyr);
                    assert_eq!(pyramid_of_point(&lam, &p).unwrap(), pyr);
                }
                assert_eq!(point_of_pyramid(&Pyramid::dynkin(&lam)), vec![Rational::zero(); lam.len()]);
            }
        }
        let lam = part(&[2, 1]);
        assert_eq!(pyramid_of_point(&lam, &pt(&[5, 5])).unwrap(), Pyramid::dynkin(&lam));
        assert!(pyramid_of_point(&lam, &pt(&[0, 2])).is_err());
        assert!(pyramid_of_point(&lam, &[rat(0), frac(1, 2)]).is_err());
    }

    #[test]
    fn second_322_pyramid_point() {
        let lam = part(&[3, 2, 2]);
        let pyrs = Pyramid::enumerate(&lam);
        assert_eq!(point_of_pyramid(&pyrs[0]), pt(&[0, 1, 1]));
        assert_eq!(point_of_pyramid(&pyrs[2]), pt(&[0, -1, -1]));
    }

    #[test]
    fn pyramid_grading_matches_point_grading() {
        // compare degrees box by box, since the two labellings differ
        for lam in Partition::all(5) {
            let sym = Pyramid::dynkin(&lam).labeling();
            for pyr in Pyramid::enumerate(&lam) {
                let lab = pyr.labeling();
                let gp = pyr.grading();
                let gq = point_grading(&lam, &point_of_pyramid(&pyr)).unwrap();
                for a in 0..lam.size() {
                    for b in 0..lam.size() {
                        let (ba, bb) = (sym.box_of(a), sym.box_of(b));
                        let i = lab.label_of(ba.row, ba.pos);
                        let j = lab.label_of(bb.row, bb.pos);
                        assert_eq!(gq.degree(a, b), gp.degree(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn adjacency_examples() {
        let lam = part(&[2, 1]);
        let p = pt(&[0, 0]);
        assert!(adjacent(&lam, &p, &p).unwrap());
        assert!(adjacent(&lam, &p, &pt(&[0, 1])).unwrap());
        assert!(!adjacent(&lam, &pt(&[0, -1]), &pt(&[0, 1])).unwrap());
        assert!(adjacent(&lam, &pt(&[0, 3]), &p).is_err());
        assert_eq!(adjacency_chain(&lam, &p, &p).unwrap(), vec![p.clone()]);
        let chain = adjacency_chain(&lam, &pt(&[0, -1]), &pt(&[0, 1])).unwrap();
        assert_eq!(chain, vec![pt(&[0, -1]), pt(&[0, 0]), pt(&[0, 1])]);
    }

    #[test]
    fn chains_between_integral_points() {
        for n in 1..=4 {
            for lam in Partition::all(n) {
                let pts = integral_points(&lam);
                for p in &pts {
                    for q in &pts {
                        let chain = adjacency_chain(&lam, p, q).unwrap();
                        assert_eq!(chain.first(), Some(p));
                        assert_eq!(chain.last(), Some(q));
                        for w in chain.windows(2) {
                            assert!(adjacent(&lam, &w[0], &w[1]).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rational_grid_soundness() {
        let lam = part(&[3, 1]);
        let e = point_nilpotent(&lam);
        for k in -12..=12 {
            let p = vec![rat(0), frac(k, 4)];
            let good = is_good_point(&lam, &p).unwrap();
            let g = point_grading(&lam, &p).unwrap();
            assert_eq!(check_good(&g, &e).all_pass(), good, "p_1 = {k}/4 {:?}", check_good(&g, &e));
        }
    }

    #[test]
    fn lagrangians_match() {
        for lam in [part(&[2, 1]), part(&[3, 1]), part(&[2, 2]), part(&[2, 1, 1])] {
            let pts = integral_points(&lam);
            for p in &pts {
                for q in &pts {
                    if adjacent(&lam, p, q).unwrap() {
                        let ml = matching_lagrangians(&lam, p, q).unwrap();
                        assert!(ml.m_equal(), "{lam} {p:?} {q:?}");
                    }
                }
            }
        }
    }
}
