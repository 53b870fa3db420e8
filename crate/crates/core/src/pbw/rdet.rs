//! Row determinants of matrices over `U(g)[u]` with `u` central.

use num_traits::One;

use super::{Enveloping, PbwElement};
use crate::linalg::{rat, Rational};

/// Polynomial in a central variable; entry `k` is the coefficient of `u^k`.
pub type UPoly = Vec<PbwElement>;

fn upoly_mul(alg: &Enveloping, a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![PbwElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&alg.mul(x, y));
            }
        }
    }
    out
}

fn upoly_is_zero(p: &UPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// `sum_pi sgn(pi) a_{1,pi(1)} ... a_{n,pi(n)}`, products taken row by row
/// from the left. Returns the coefficients of `u^{n-1}, ..., u^0`, i.e.
/// `w_1, ..., w_n` when every diagonal entry is monic in `u`.
pub fn rdet(alg: &Enveloping, omega: &[Vec<UPoly>]) -> Vec<PbwElement> {
    let n = omega.len();
    let mut total: UPoly = Vec::new();
    let mut used = vec![false; n];
    fn rec(
        alg: &Enveloping,
        omega: &[Vec<UPoly>],
        row: usize,
        used: &mut [bool],
        sign: i64,
        acc: UPoly,
        total: &mut UPoly,
    ) {
        let n = omega.len();
        if row == n {
            if total.len() < acc.len() {
                total.resize(acc.len(), PbwElement::zero());
            }
            for (k, c) in acc.into_iter().enumerate() {
                total[k] = total[k].add(&c.scale(&rat(sign)));
            }
            return;
        }
        for col in 0..n {
            if used[col] || upoly_is_zero(&omega[row][col]) {
                continue;
            }
            // moving to column `col` passes the unused columns to its left
            let passed = (0..col).filter(|&c| !used[c]).count();
            let s = if passed % 2 == 0 { sign } else { -sign };
            used[col] = true;
            let next = upoly_mul(alg, &acc, &omega[row][col]);
            rec(alg, omega, row + 1, used, s, next, total);
            used[col] = false;
        }
    }
    rec(alg, omega, 0, &mut used, 1, vec![alg.one()], &mut total);
    total.resize(n + 1, PbwElement::zero());
    (1..=n).map(|i| total[n - i].clone()).collect()
}

/// The matrix with `E_ii + u + i` on the diagonal, `E_ij` above it and `1`
/// below it (indices 1-based), whose row determinant gives the generators
/// of the W-algebra of a regular nilpotent.
pub fn regular_omega(alg: &Enveloping, n: usize) -> Vec<Vec<UPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![alg.unit(i, i).add(&alg.scalar(&rat(i as i64 + 1))), alg.one()]
                    } else if j > i {
                        vec![alg.unit(i, j)]
                    } else if i == j + 1 {
                        vec![alg.scalar(&Rational::one())]
                    } else {
                        vec![PbwElement::zero()]
                    }
                })
                .collect()
        })
        .collect()
}

pub fn regular_w(alg: &Enveloping, n: usize) -> Vec<PbwElement> {
    rdet(alg, &regular_omega(alg, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let alg = Enveloping::gl(1);
        assert_eq!(regular_w(&alg, 1), vec![alg.unit(0, 0).add(&alg.one())]);
        let alg = Enveloping::gl(2);
        let w = regular_w(&alg, 2);
        let w1 = alg.unit(0, 0).add(&alg.unit(1, 1)).add(&alg.scalar(&rat(3)));
        let a = alg.unit(0, 0).add(&alg.one());
        let b = alg.unit(1, 1).add(&alg.scalar(&rat(2)));
        let w2 = alg.mul(&a, &b).sub(&alg.unit(0, 1));
        assert_eq!(w, vec![w1, w2]);
    }

    #[test]
    fn commuting_entries_give_the_determinant() {
        // with scalar entries the row determinant is the determinant
        let alg = Enveloping::gl(1);
        let c = |v: i64| vec![alg.scalar(&rat(v))];
        let m = vec![vec![c(2), c(1), c(0)], vec![c(1), c(3), c(1)], vec![c(0), c(1), c(4)]];
        let d = rdet(&alg, &m);
        assert_eq!(d[2], alg.scalar(&rat(18)));
        assert!(d[0].is_zero() && d[1].is_zero());
    }
}
