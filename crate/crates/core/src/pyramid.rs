//! Pyramids of shape `lambda` and the good gradings they define.
//!
//! Rows are numbered from the bottom starting at 0. Row `r` has `lambda_r`
//! boxes at columns `left[r], left[r] + 2, ...`. Boxes are labelled `0..N`
//! by increasing column, top box first within a column.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl::{GlElement, Grading};
use crate::linalg::rat;
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPyramid")]
pub struct Pyramid {
    shape: Partition,
    left: Vec<i64>,
}

#[derive(Deserialize)]
struct RawPyramid {
    shape: Partition,
    left: Vec<i64>,
}

impl TryFrom<RawPyramid> for Pyramid {
    type Error = Error;
    fn try_from(raw: RawPyramid) -> Result<Self> {
        Pyramid::new(raw.shape, raw.left)
    }
}

/// Position of one box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxPos {
    pub row: usize,
    /// Index within the row, counted from the left.
    pub pos: usize,
    pub col: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    boxes: Vec<BoxPos>,
    rows: Vec<Vec<usize>>,
}

impl Labeling {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn box_of(&self, label: usize) -> BoxPos {
        self.boxes[label]
    }

    pub fn label_of(&self, row: usize, pos: usize) -> usize {
        self.rows[row][pos]
    }

    /// Labels of row `r`, left to right.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn col(&self, label: usize) -> i64 {
        self.boxes[label].col
    }

    pub fn right_of(&self, label: usize) -> Option<usize> {
        let b = self.boxes[label];
        self.rows[b.row].get(b.pos + 1).copied()
    }

    pub fn left_of(&self, label: usize) -> Option<usize> {
        let b = self.boxes[label];
        b.pos.checked_sub(1).map(|p| self.rows[b.row][p])
    }
}

impl Pyramid {
    pub fn new(shape: Partition, left: Vec<i64>) -> Result<Self> {
        let lam = shape.parts();
        if left.len() != lam.len() {
            return Err(Error::InvalidPyramid(format!(
                "{} row offsets for {} rows",
                left.len(),
                lam.len()
            )));
        }
        if left[0] != 1 - lam[0] as i64 {
            return Err(Error::InvalidPyramid(format!(
                "bottom row must start at column {}",
                1 - lam[0] as i64
            )));
        }
        for r in 1..lam.len() {
            let right_below = left[r - 1] + 2 * (lam[r - 1] as i64 - 1);
            let right_here = left[r] + 2 * (lam[r] as i64 - 1);
            if left[r] < left[r - 1] || right_here > right_below {
                return Err(Error::InvalidPyramid(format!(
                    "row {} does not sit on the row below",
                    r + 1
                )));
            }
        }
        Ok(Pyramid { shape, left })
    }

    /// All pyramids of the given shape, in lexicographic order of `left`.
    pub fn enumerate(shape: &Partition) -> Vec<Pyramid> {
        fn rec(lam: &[usize], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            let r = cur.len();
            if r == lam.len() {
                out.push(cur.clone());
                return;
            }
            let lo = cur[r - 1];
            let hi = cur[r - 1] + 2 * (lam[r - 1] as i64 - lam[r] as i64);
            for l in lo..=hi {
                cur.push(l);
                rec(lam, cur, out);
                cur.pop();
            }
        }
        let lam = shape.parts();
        let mut out = Vec::new();
        rec(lam, &mut vec![1 - lam[0] as i64], &mut out);
        out.into_iter().map(|left| Pyramid { shape: shape.clone(), left }).collect()
    }

    /// Young diagram in French fashion: all rows left justified.
    pub fn french(shape: &Partition) -> Pyramid {
        let l = 1 - shape.first() as i64;
        Pyramid { shape: shape.clone(), left: vec![l; shape.len()] }
    }

    /// The centred pyramid, giving the Dynkin grading.
    pub fn dynkin(shape: &Partition) -> Pyramid {
        let left = shape.parts().iter().map(|&p| 1 - p as i64).collect();
        Pyramid { shape: shape.clone(), left }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn left(&self) -> &[i64] {
        &self.left
    }

    pub fn right(&self, r: usize) -> i64 {
        self.left[r] + 2 * (self.shape.parts()[r] as i64 - 1)
    }

    pub fn n(&self) -> usize {
        self.shape.size()
    }

    pub fn labeling(&self) -> Labeling {
        let lam = self.shape.parts();
        let mut boxes: Vec<BoxPos> = Vec::with_capacity(self.n());
        for (row, &len) in lam.iter().enumerate() {
            for pos in 0..len {
                boxes.push(BoxPos { row, pos, col: self.left[row] + 2 * pos as i64 });
            }
        }
        boxes.sort_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)));
        let mut rows: Vec<Vec<usize>> = lam.iter().map(|&l| vec![0; l]).collect();
        for (label, b) in boxes.iter().enumerate() {
            rows[b.row][b.pos] = label;
        }
        Labeling { boxes, rows }
    }

    /// `e = sum_i E_{i, R(i)}`.
    pub fn nilpotent(&self) -> GlElement {
        let lab = self.labeling();
        let mut e = GlElement::zero(self.n());
        for i in 0..self.n() {
            if let Some(j) = lab.right_of(i) {
                e.set(i, j, rat(1));
            }
        }
        e
    }

    /// Weights `-col_i`, so that `E_ij` has degree `col_j - col_i`.
    pub fn grading(&self) -> Grading {
        let lab = self.labeling();
        Grading::new((0..self.n()).map(|i| rat(-lab.col(i))).collect())
    }

    pub fn is_even(&self) -> bool {
        let p = self.left[0].rem_euclid(2);
        self.left.iter().all(|l| l.rem_euclid(2) == p)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.left.len()).all(|r| self.left[r] == -self.right(r))
    }

    pub fn is_french(&self) -> bool {
        self.left.iter().all(|&l| l == self.left[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn degree_matrix(pyr: &Pyramid) -> Vec<Vec<i64>> {
        let g = pyr.grading();
        let n = pyr.n();
        (0..n)
            .map(|i| (0..n).map(|j| g.degree(i, j).to_integer().try_into().unwrap()).collect())
            .collect()
    }

    #[test]
    fn counts() {
        assert_eq!(Pyramid::enumerate(&p(&[3, 2, 2])).len(), 3);
        assert_eq!(Pyramid::enumerate(&p(&[4, 1])).len(), 7);
        assert_eq!(Pyramid::enumerate(&p(&[3, 2])).len(), 3);
        for n in 1..=8 {
            assert_eq!(Pyramid::enumerate(&Partition::row(n)).len(), 1);
            assert_eq!(Pyramid::enumerate(&Partition::column(n)).len(), 1);
        }
    }

    #[test]
    fn enumeration_is_valid_and_sorted() {
        for n in 1..=6 {
            for lam in Partition::all(n) {
                let all = Pyramid::enumerate(&lam);
                for w in all.windows(2) {
                    assert!(w[0].left < w[1].left);
                }
                for pyr in &all {
                    assert!(Pyramid::new(lam.clone(), pyr.left.clone()).is_ok());
                }
                let sym: Vec<_> = all.iter().filter(|q| q.is_symmetric()).collect();
                assert_eq!(sym, vec![&Pyramid::dynkin(&lam)]);
                assert!(all.contains(&Pyramid::french(&lam)));
                assert!(Pyramid::french(&lam).is_even());
            }
        }
    }

    #[test]
    fn rejects_bad_offsets() {
        assert!(Pyramid::new(p(&[2, 1]), vec![0, 0]).is_err());
        assert!(Pyramid::new(p(&[2, 1]), vec![-1, 2]).is_err());
        assert!(Pyramid::new(p(&[2, 1]), vec![-1]).is_err());
        let json = r#"{"shape":[2,1],"left":[-1,3]}"#;
        assert!(serde_json::from_str::<Pyramid>(json).is_err());
        let json = r#"{"shape":[2,1],"left":[-1,0]}"#;
        assert_eq!(serde_json::from_str::<Pyramid>(json).unwrap(), Pyramid::dynkin(&p(&[2, 1])));
    }

    #[test]
    fn shape_322() {
        let lam = p(&[3, 2, 2]);
        let all = Pyramid::enumerate(&lam);
        let lefts: Vec<&[i64]> = all.iter().map(|q| q.left()).collect();
        assert_eq!(lefts, vec![&[-2, -2, -2][..], &[-2, -1, -1], &[-2, 0, 0]]);
        let french = &all[0];
        let lab = french.labeling();
        let cols: Vec<i64> = (0..7).map(|i| lab.col(i)).collect();
        assert_eq!(cols, vec![-2, -2, -2, 0, 0, 0, 2]);
        assert_eq!(lab.box_of(0).row, 2);
        assert_eq!(lab.box_of(2).row, 0);
        let mut e = GlElement::zero(7);
        for (i, j) in [(0, 3), (1, 4), (2, 5), (5, 6)] {
            e.set(i, j, rat(1));
        }
        assert_eq!(french.nilpotent(), e);
        assert!(all[0].is_even());
        assert!(!all[1].is_even());
        assert!(all[2].is_even());
        assert!(all[1].is_symmetric());
    }

    #[test]
    fn labels_of_rows() {
        let lab = Pyramid::dynkin(&Partition::row(4)).labeling();
        assert_eq!(lab.row(0), &[0, 1, 2, 3]);
        let lab = Pyramid::french(&p(&[2, 1])).labeling();
        assert_eq!(lab.row(1), &[0]);
        assert_eq!(lab.row(0), &[1, 2]);
        assert_eq!((lab.col(0), lab.col(1), lab.col(2)), (-1, -1, 1));
        assert_eq!(lab.left_of(2), Some(1));
        assert_eq!(lab.left_of(1), None);
        assert_eq!(lab.right_of(0), None);
    }

    #[test]
    fn nilpotents() {
        assert!(Pyramid::french(&Partition::column(4)).nilpotent().is_zero());
        assert_eq!(Pyramid::dynkin(&Partition::row(3)).nilpotent(), Partition::row(3).jordan_matrix());
    }

    #[test]
    fn gradings_of_gl3() {
        let french = Pyramid::french(&p(&[2, 1]));
        assert_eq!(degree_matrix(&french), vec![vec![0, 0, 2], vec![0, 0, 2], vec![-2, -2, 0]]);
        let sym = Pyramid::dynkin(&p(&[2, 1]));
        assert_eq!(degree_matrix(&sym), vec![vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]]);
        assert_eq!(sym.nilpotent(), GlElement::unit(3, 0, 2));
        let zero = Pyramid::french(&Partition::column(3));
        assert!(degree_matrix(&zero).iter().flatten().all(|&d| d == 0));
    }
}
