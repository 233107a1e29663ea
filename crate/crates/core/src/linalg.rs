//! Sparse exact linear algebra over the rationals.
//!
//! Row spaces are kept in fully reduced echelon form: each row has leading
//! coefficient 1 at its pivot (the smallest column it touches) and every other
//! row is zero in that column. The reduced form is unique, so two subspaces are
//! equal iff their row lists are equal.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::text::Q;

/// A sparse vector: column index to nonzero rational.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVec(pub BTreeMap<usize, Q>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = SparseVec::new();
        v.0.insert(i, Q::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in pairs {
            v.add_at(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn pivot(&self) -> Option<usize> {
        self.0.keys().next().copied()
    }

    pub fn add_at(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: &Q, other: &SparseVec) {
        if s.is_zero() {
            return;
        }
        for (i, c) in &other.0 {
            self.add_at(*i, s * c);
        }
    }

    pub fn scale(&mut self, s: &Q) {
        for c in self.0.values_mut() {
            *c *= s;
        }
    }
}

/// A subspace in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn from_vectors<I: IntoIterator<Item = SparseVec>>(vs: I) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot column.
    pub fn rows(&self) -> Vec<&SparseVec> {
        self.pivots.values().map(|&r| &self.rows[r]).collect()
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        let mut rows: Vec<Option<SparseVec>> = self.rows.into_iter().map(Some).collect();
        self.pivots
            .values()
            .map(|&r| rows[r].take().unwrap())
            .collect()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (col, c) in v.0.iter() {
            if let Some(&r) = self.pivots.get(col) {
                out.axpy(&-c.clone(), &self.rows[r]);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; true if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.pivot() else {
            return false;
        };
        let inv = v.get(p).recip();
        v.scale(&inv);
        for row in self.rows.iter_mut() {
            let c = row.get(p);
            if !c.is_zero() {
                row.axpy(&-c, &v);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn is_subspace_of(&self, other: &Echelon) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

impl PartialEq for Echelon {
    fn eq(&self, other: &Self) -> bool {
        self.rows() == other.rows()
    }
}

impl Eq for Echelon {}

/// Column-by-column elimination of a linear map that remembers which
/// combination of inputs produced each reduced row. Used for kernels and
/// for solving `A x = b`.
#[derive(Clone, Debug, Default)]
pub struct TrackedElimination {
    images: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl TrackedElimination {
    pub fn new() -> Self {
        TrackedElimination::default()
    }

    fn reduce_pair(&self, image: &SparseVec, combo: &mut SparseVec) -> SparseVec {
        let mut out = image.clone();
        for (col, c) in image.0.iter() {
            if let Some(&r) = self.pivots.get(col) {
                let s = -c.clone();
                out.axpy(&s, &self.images[r]);
                combo.axpy(&s, &self.combos[r]);
            }
        }
        out
    }

    /// Feeds the image of input vector `combo`. Returns a kernel element when
    /// the image is already in the span of earlier images.
    pub fn push(&mut self, image: &SparseVec, combo: SparseVec) -> Option<SparseVec> {
        let mut combo = combo;
        let mut img = self.reduce_pair(image, &mut combo);
        let Some(p) = img.pivot() else {
            return Some(combo);
        };
        let inv = img.get(p).recip();
        img.scale(&inv);
        combo.scale(&inv);
        for r in 0..self.images.len() {
            let c = self.images[r].get(p);
            if !c.is_zero() {
                let s = -c;
                let (a, b) = (img.clone(), combo.clone());
                self.images[r].axpy(&s, &a);
                self.combos[r].axpy(&s, &b);
            }
        }
        self.pivots.insert(p, self.images.len());
        self.images.push(img);
        self.combos.push(combo);
        None
    }

    /// Some `x` (as an input combination) whose image is `b`, if one exists.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut combo = SparseVec::new();
        let rest = self.reduce_pair(b, &mut combo);
        if rest.is_zero() {
            combo.scale(&-Q::one());
            Some(combo)
        } else {
            None
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }
}

/// Reduced echelon basis of the kernel of the map sending unit vector `j`
/// to `columns[j]`.
pub fn kernel(columns: &[SparseVec]) -> Echelon {
    let mut t = TrackedElimination::new();
    let mut ker = Echelon::new();
    for (j, c) in columns.iter().enumerate() {
        if let Some(k) = t.push(c, SparseVec::unit(j)) {
            ker.insert(k);
        }
    }
    ker
}

/// Inverse of a square dense matrix, `None` if singular.
pub fn invert_matrix(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map(Vec::len).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}
