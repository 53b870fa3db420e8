//! PBW normal forms in the universal enveloping algebra of gl_N.
//!
//! An [`Enveloping`] is built over an ordered basis of gl_N (a
//! [`LieBasis`]); monomials are exponent vectors over that basis, read as
//! ordered products `x_0^{a_0} x_1^{a_1} ...`. Products are straightened
//! with memoised monomial-times-symbol rules.

mod rdet;
mod whittaker;

pub use rdet::{rdet, regular_omega, regular_w, UPoly};
pub use whittaker::{eta_shifts, eta_twist, eta_untwist, monomial_counts, WContext, WSpace};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::gl::{GlElement, Grading};
use crate::linalg::{render, solve, Rational, SparseMatrix};

/// Exponent vector over the ordered basis.
pub type Monomial = Vec<u16>;

/// Exact linear combination of PBW monomials; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct PbwElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PbwElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> PbwElement {
        let mut out = PbwElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Largest total PBW degree of a monomial.
    pub fn pbw_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.iter().map(|&e| e as usize).sum()).max()
    }
}

/// An ordered basis of gl_N with its structure constants.
#[derive(Clone, Debug)]
pub struct LieBasis {
    n: usize,
    elements: Vec<GlElement>,
    labels: Vec<String>,
    /// Matrix unit `(i, j)` when the basis element is one.
    units: Vec<Option<(usize, usize)>>,
    /// `[x_a, x_b]` in basis coordinates.
    brackets: Vec<Vec<Vec<(usize, Rational)>>>,
    /// Coordinates of `E_ij` (index `i * N + j`) in the basis.
    unit_coords: Vec<Vec<(usize, Rational)>>,
}

impl LieBasis {
    /// Matrix units in the default order: by `j - i`, then lexicographically.
    pub fn units(n: usize) -> LieBasis {
        let mut order: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        order.sort_by_key(|&(i, j)| (j as i64 - i as i64, i, j));
        Self::from_units(n, &order)
    }

    pub fn from_units(n: usize, order: &[(usize, usize)]) -> LieBasis {
        let elements: Vec<GlElement> = order.iter().map(|&(i, j)| GlElement::unit(n, i, j)).collect();
        let labels = order.iter().map(|&(i, j)| format!("E{},{}", i + 1, j + 1)).collect();
        Self::new(elements, labels).expect("matrix units form a basis")
    }

    /// Any basis of gl_N; `None` if the elements are not a basis.
    pub fn new(elements: Vec<GlElement>, labels: Vec<String>) -> Option<LieBasis> {
        let n = elements.first()?.n();
        let dim = n * n;
        if elements.len() != dim || labels.len() != dim {
            return None;
        }
        let mut units = Vec::with_capacity(dim);
        for x in &elements {
            let entries: Vec<_> = x.entries().collect();
            units.push(match entries.as_slice() {
                [(i, j, c)] if c.is_one() => Some((*i, *j)),
                _ => None,
            });
        }
        let unit_coords = if units.iter().all(|u| u.is_some()) {
            let mut uc = vec![Vec::new(); dim];
            for (a, u) in units.iter().enumerate() {
                let (i, j) = u.unwrap();
                uc[i * n + j] = vec![(a, Rational::one())];
            }
            uc
        } else {
            // columns of `b` are the basis vectors
            let mut b = SparseMatrix::zeros(dim, dim);
            for (a, x) in elements.iter().enumerate() {
                for (k, c) in x.coords() {
                    b.set(k, a, c);
                }
            }
            let mut uc = Vec::with_capacity(dim);
            for k in 0..dim {
                let mut rhs = vec![Rational::zero(); dim];
                rhs[k] = Rational::one();
                let x = solve(&b, &rhs)?;
                uc.push(x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
            }
            if crate::linalg::rank(&b) != dim {
                return None;
            }
            uc
        };
        let mut basis = LieBasis { n, elements, labels, units, brackets: Vec::new(), unit_coords };
        let brackets = (0..dim)
            .map(|a| (0..dim).map(|b| basis.coords_of(&basis.elements[a].bracket(&basis.elements[b]))).collect())
            .collect();
        basis.brackets = brackets;
        Some(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, a: usize) -> &GlElement {
        &self.elements[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn unit_of(&self, a: usize) -> Option<(usize, usize)> {
        self.units[a]
    }

    /// Symbol index of the matrix unit `E_ij`, if it is a basis element.
    pub fn symbol_of_unit(&self, i: usize, j: usize) -> Option<usize> {
        self.units.iter().position(|u| *u == Some((i, j)))
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.brackets[a][b]
    }

    /// Coordinates of `x` in this basis.
    pub fn coords_of(&self, x: &GlElement) -> Vec<(usize, Rational)> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, j, c) in x.entries() {
            for (a, v) in &self.unit_coords[i * self.n + j] {
                *acc.entry(*a).or_insert_with(Rational::zero) += c * v;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// `U(gl_N)` over a fixed ordered basis.
pub struct Enveloping {
    basis: Arc<LieBasis>,
    memo: Mutex<HashMap<(Monomial, usize), Arc<PbwElement>>>,
}

impl fmt::Debug for Enveloping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enveloping(gl_{}, {:?})", self.basis.n, self.basis.labels)
    }
}

impl Clone for Enveloping {
    fn clone(&self) -> Self {
        Enveloping::new(self.basis.clone())
    }
}

impl Enveloping {
    pub fn new(basis: Arc<LieBasis>) -> Self {
        Enveloping { basis, memo: Mutex::new(HashMap::new()) }
    }

    pub fn gl(n: usize) -> Self {
        Self::new(Arc::new(LieBasis::units(n)))
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn unit_monomial(&self) -> Monomial {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> PbwElement {
        self.scalar(&Rational::one())
    }

    pub fn scalar(&self, c: &Rational) -> PbwElement {
        PbwElement::from_terms([(self.unit_monomial(), c.clone())])
    }

    pub fn symbol(&self, a: usize) -> PbwElement {
        let mut m = self.unit_monomial();
        m[a] = 1;
        PbwElement::from_terms([(m, Rational::one())])
    }

    /// `E_ij` with 0-based indices.
    pub fn unit(&self, i: usize, j: usize) -> PbwElement {
        self.from_gl(&GlElement::unit(self.basis.n, i, j))
    }

    pub fn from_gl(&self, x: &GlElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (a, c) in self.basis.coords_of(x) {
            let mut m = self.unit_monomial();
            m[a] = 1;
            out.add_term(m, &c);
        }
        out
    }

    fn mono_times_symbol(&self, m: &Monomial, s: usize) -> Arc<PbwElement> {
        let Some(t) = m.iter().rposition(|&e| e > 0) else {
            return Arc::new(self.symbol(s));
        };
        if t <= s {
            let mut out = m.clone();
            out[s] += 1;
            return Arc::new(PbwElement::from_terms([(out, Rational::one())]));
        }
        let key = (m.clone(), s);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        // m s = rest t s = (rest s) t + rest [t, s]
        let mut rest = m.clone();
        rest[t] -= 1;
        let mut out = PbwElement::zero();
        let rs = self.mono_times_symbol(&rest, s);
        for (mm, c) in &rs.terms {
            out.add_scaled(&self.mono_times_symbol(mm, t), c);
        }
        for (u, c) in self.basis.bracket(t, s) {
            out.add_scaled(&self.mono_times_symbol(&rest, *u), c);
        }
        let out = Arc::new(out);
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn mul_symbol(&self, u: &PbwElement, s: usize) -> PbwElement {
        let mut out = PbwElement::zero();
        for (m, c) in &u.terms {
            out.add_scaled(&self.mono_times_symbol(m, s), c);
        }
        out
    }

    /// Product in PBW normal form.
    pub fn mul(&self, u: &PbwElement, v: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (mv, cv) in &v.terms {
            let mut cur = u.clone();
            for (s, &e) in mv.iter().enumerate() {
                for _ in 0..e {
                    cur = self.mul_symbol(&cur, s);
                }
            }
            out.add_scaled(&cur, cv);
        }
        out
    }

    pub fn commutator(&self, u: &PbwElement, v: &PbwElement) -> PbwElement {
        self.mul(u, v).sub(&self.mul(v, u))
    }

    /// `x u - u x`.
    pub fn ad_action(&self, x: &GlElement, u: &PbwElement) -> PbwElement {
        self.commutator(&self.from_gl(x), u)
    }

    pub fn pow(&self, u: &PbwElement, k: usize) -> PbwElement {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, u);
        }
        out
    }

    /// Maximal Kazhdan degree of a monomial, where a symbol of degree `j`
    /// counts `j + 2`; `None` for the zero element or an inhomogeneous symbol.
    pub fn kazhdan_degree(&self, grading: &Grading, u: &PbwElement) -> Option<i64> {
        let degs: Option<Vec<i64>> = (0..self.dim())
            .map(|a| {
                let d = grading.degree_of(self.basis.element(a))?;
                d.is_integer().then(|| i64::try_from(d.to_integer()).ok()).flatten().map(|d| d + 2)
            })
            .collect();
        let degs = degs?;
        u.terms
            .keys()
            .map(|m| m.iter().zip(&degs).map(|(&e, d)| e as i64 * d).sum::<i64>())
            .max()
    }

    /// Human readable form, e.g. `E2,1*E1,2 + E1,1 - E2,2`.
    pub fn display(&self, u: &PbwElement) -> String {
        if u.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in u.terms.iter().rev() {
            let mut factors = Vec::new();
            for (a, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.basis.label(a).to_string()),
                    _ => factors.push(format!("{}^{}", self.basis.label(a), e)),
                }
            }
            let word = factors.join("*");
            parts.push(match (word.is_empty(), c.is_one()) {
                (true, _) => format!("{c}"),
                (false, true) => word,
                (false, false) => format!("({c})*{word}"),
            });
        }
        parts.join(" + ")
    }

    /// `[{monomial: [[i, j, exp], ...], coeff: "p/q"}, ...]`, 1-based indices;
    /// symbols that are not matrix units appear as `[label, exp]`.
    pub fn to_json(&self, u: &PbwElement) -> Value {
        let terms: Vec<Value> = u
            .terms
            .iter()
            .map(|(m, c)| {
                let factors: Vec<Value> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(a, &e)| match self.basis.unit_of(a) {
                        Some((i, j)) => json!([i + 1, j + 1, e]),
                        None => json!([self.basis.label(a), e]),
                    })
                    .collect();
                json!({"monomial": factors, "coeff": render(c)})
            })
            .collect();
        Value::Array(terms)
    }
}
