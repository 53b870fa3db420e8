//! Partitions of `N`, i.e. Jordan types of nilpotent matrices in gl_N.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl::GlElement;

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Partition { parts: vec![n] }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// All partitions of `n`, in reverse lexicographic order starting from `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `N`, the sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, the number of columns.
    pub fn first(&self) -> usize {
        self.parts[0]
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.first()).map(|k| self.parts.iter().filter(|&&p| p >= k).count()).collect();
        Partition { parts }
    }

    /// `sum_{i,j} min(lambda_i, lambda_j)`.
    pub fn centralizer_dim(&self) -> usize {
        self.parts
            .iter()
            .map(|a| self.parts.iter().map(|b| (*a).min(*b)).sum::<usize>())
            .sum()
    }

    /// `diag(J_{lambda_1}, J_{lambda_2}, ...)` with ones on the superdiagonal.
    pub fn jordan_matrix(&self) -> GlElement {
        let n = self.size();
        let mut e = GlElement::zero(n);
        let mut start = 0;
        for &p in &self.parts {
            for k in 0..p - 1 {
                e.set(start + k, start + k + 1, crate::linalg::rat(1));
            }
            start += p;
        }
        e
    }

    /// Dominance order, which is the closure order on nilpotent orbits.
    pub fn closure_leq(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { expected: self.size(), found: other.size() });
        }
        let (mut a, mut b) = (0, 0);
        for k in 0..self.len().max(other.len()) {
            a += self.parts.get(k).copied().unwrap_or(0);
            b += other.parts.get(k).copied().unwrap_or(0);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma separated parts, e.g. `3,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!("3, 2,2".parse::<Partition>().unwrap(), p(&[3, 2, 2]));
        assert!("3,x".parse::<Partition>().is_err());
    }

    #[test]
    fn counts_of_all() {
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 2, 2]).conjugate(), p(&[3, 3, 1]));
        assert_eq!(Partition::row(5).conjugate(), Partition::column(5));
        assert_eq!(p(&[4, 1]).conjugate(), p(&[2, 1, 1, 1]));
    }

    #[test]
    fn centralizer_dims() {
        assert_eq!(Partition::column(4).centralizer_dim(), 16);
        assert_eq!(Partition::row(6).centralizer_dim(), 6);
        assert_eq!(p(&[3, 2, 2]).centralizer_dim(), 19);
        let sq: usize = p(&[3, 2, 2]).conjugate().parts().iter().map(|c| c * c).sum();
        assert_eq!(sq, 19);
    }

    #[test]
    fn jordan_matrices() {
        let e = Partition::row(2).jordan_matrix();
        assert_eq!(e, GlElement::unit(2, 0, 1));
        assert!(Partition::column(2).jordan_matrix().is_zero());
        assert_eq!(p(&[2, 1]).jordan_matrix(), GlElement::unit(3, 0, 1));
    }

    #[test]
    fn dominance() {
        for lam in Partition::all(5) {
            assert!(lam.closure_leq(&Partition::row(5)).unwrap());
            assert!(Partition::column(5).closure_leq(&lam).unwrap());
        }
        assert!(p(&[2, 2]).closure_leq(&p(&[3, 1])).unwrap());
        assert!(!p(&[3, 1]).closure_leq(&p(&[2, 2])).unwrap());
        assert!(p(&[3, 1]).closure_leq(&p(&[2, 2, 1])).is_err());
    }
}
