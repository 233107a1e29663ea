//! Lower central series of the free algebra.
//!
//! `L_1 = A`, `L_k = [A, L_{k-1}]`, and `M_k = A·L_k·A`, which equals the
//! left ideal `A·L_k`. Every slice is a [`GradedSubspace`] of the degree-`d`
//! word space. `N_k` denotes the graded quotient `M_k / M_{k+1}`.

use serde::{Deserialize, Serialize};

use crate::comm::Monomial;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::limits::{check_cap, enumeration_cap, words_in_degree};
use crate::linalg::{Echelon, SparseVec};
use crate::series::NCSeries;
use crate::word::Word;

/// A subspace of the span of degree-`d` words in `n` letters.
///
/// Column `j` is the `j`-th word of degree `d` in lex order
/// ([`Word::rank_in_degree`]); the basis is in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    n: usize,
    degree: usize,
    basis: Echelon,
}

impl GradedSubspace {
    pub fn zero(n: usize, degree: usize) -> Self {
        GradedSubspace {
            n,
            degree,
            basis: Echelon::new(),
        }
    }

    pub fn full(n: usize, degree: usize) -> Self {
        let count = n.pow(degree as u32);
        GradedSubspace {
            n,
            degree,
            basis: Echelon::from_vectors((0..count).map(SparseVec::unit)),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = SparseVec>>(n: usize, degree: usize, vs: I) -> Self {
        GradedSubspace {
            n,
            degree,
            basis: Echelon::from_vectors(vs),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.basis
    }

    pub fn rows(&self) -> Vec<&SparseVec> {
        self.basis.rows()
    }

    pub fn column_count(&self) -> usize {
        self.n.pow(self.degree as u32)
    }

    /// Basis rows as homogeneous series at truncation `trunc`.
    pub fn basis_series(&self, trunc: usize) -> Vec<NCSeries> {
        self.rows()
            .into_iter()
            .map(|r| vector_to_series(r, self.n, self.degree, trunc))
            .collect()
    }

    /// Membership of the degree-`d` component of `s`.
    pub fn contains_series(&self, s: &NCSeries) -> bool {
        self.basis
            .contains(&series_to_vector(&s.homogeneous(self.degree), self.n))
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.basis.is_subspace_of(&other.basis)
    }
}

/// Coordinates of a homogeneous series over the word basis of its degree.
pub fn series_to_vector(s: &NCSeries, n: usize) -> SparseVec {
    SparseVec::from_pairs(
        s.terms()
            .iter()
            .map(|(w, c)| (w.rank_in_degree(n), c.clone())),
    )
}

pub fn vector_to_series(v: &SparseVec, n: usize, degree: usize, trunc: usize) -> NCSeries {
    NCSeries::from_terms(
        n,
        trunc,
        v.0.iter()
            .map(|(&j, c)| (Word::unrank(j, degree, n), c.clone())),
    )
    .expect("letters in range")
}

/// Rows indexed by `k`, columns by degree `d = 1..=dmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub n: usize,
    pub rows: Vec<DimensionRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub k: usize,
    pub dims: Vec<usize>,
}

impl DimensionTable {
    pub fn row(&self, k: usize) -> Option<&[usize]> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.dims.as_slice())
    }

    /// Aligned plain-text rendering, one line per `k`.
    pub fn to_text(&self) -> String {
        let dmax = self.rows.first().map(|r| r.dims.len()).unwrap_or(0);
        let width = self
            .rows
            .iter()
            .flat_map(|r| r.dims.iter())
            .map(|v| v.to_string().len())
            .chain((1..=dmax).map(|d| d.to_string().len()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        out.push_str(&format!("n={}\n", self.n));
        let header: Vec<String> = (1..=dmax).map(|d| format!("{d:>width$}")).collect();
        out.push_str(&format!("  d: {}\n", header.join("  ")));
        for r in &self.rows {
            let cells: Vec<String> = r.dims.iter().map(|v| format!("{v:>width$}")).collect();
            out.push_str(&format!("k={}: {}\n", r.k, cells.join(", ")));
        }
        out
    }
}

/// All `L_k` and `M_k` slices for `k <= kmax`, `1 <= d <= dmax`.
#[derive(Clone, Debug)]
pub struct Lcs {
    n: usize,
    kmax: usize,
    dmax: usize,
    l: Vec<Vec<GradedSubspace>>,
    m: Vec<Vec<GradedSubspace>>,
}

fn commutator_vector(w: &Word, v: &SparseVec, n: usize, vdeg: usize) -> SparseVec {
    let e = w.degree();
    let rw = w.rank_in_degree(n);
    let shift_v = n.pow(vdeg as u32);
    let shift_w = n.pow(e as u32);
    let mut out = SparseVec::new();
    for (&u, c) in &v.0 {
        out.add_at(rw * shift_v + u, c.clone());
        out.add_at(u * shift_w + rw, -c.clone());
    }
    out
}

fn left_multiple(w: &Word, v: &SparseVec, n: usize, vdeg: usize) -> SparseVec {
    let rw = w.rank_in_degree(n);
    let shift_v = n.pow(vdeg as u32);
    SparseVec::from_pairs(v.0.iter().map(|(&u, c)| (rw * shift_v + u, c.clone())))
}

impl Lcs {
    pub fn compute(n: usize, kmax: usize, dmax: usize, exec: Execution) -> Result<Lcs> {
        Lcs::compute_with_cap(n, kmax, dmax, exec, enumeration_cap())
    }

    pub fn compute_with_cap(
        n: usize,
        kmax: usize,
        dmax: usize,
        exec: Execution,
        cap: usize,
    ) -> Result<Lcs> {
        if n == 0 || kmax == 0 {
            return Err(Error::Invalid("n and kmax must be positive".into()));
        }
        check_cap(words_in_degree(n, dmax), cap)?;
        // index 0 of each row is the degree-0 slice, always zero for k >= 2
        let mut l: Vec<Vec<GradedSubspace>> = Vec::with_capacity(kmax);
        l.push((0..=dmax).map(|d| GradedSubspace::full(n, d)).collect());
        for k in 2..=kmax {
            let prev = &l[k - 2];
            let row = exec.map_range(dmax + 1, |d| {
                let mut gens = Vec::new();
                for e in 1..d {
                    let rest = d - e;
                    for v in prev[rest].rows() {
                        for w in Word::all_of_degree(n, e) {
                            gens.push(commutator_vector(&w, v, n, rest));
                        }
                    }
                }
                GradedSubspace::from_vectors(n, d, gens)
            });
            l.push(row);
        }
        let cells: Vec<(usize, usize)> = (1..=kmax)
            .flat_map(|k| (0..=dmax).map(move |d| (k, d)))
            .collect();
        let flat = exec.map(&cells, |&(k, d)| {
            if k == 1 {
                return GradedSubspace::full(n, d);
            }
            let mut gens = Vec::new();
            for e in 0..d {
                let rest = d - e;
                for v in l[k - 1][rest].rows() {
                    for w in Word::all_of_degree(n, e) {
                        gens.push(left_multiple(&w, v, n, rest));
                    }
                }
            }
            GradedSubspace::from_vectors(n, d, gens)
        });
        let mut m: Vec<Vec<GradedSubspace>> = vec![Vec::new(); kmax];
        for ((k, _), s) in cells.into_iter().zip(flat) {
            m[k - 1].push(s);
        }
        Ok(Lcs { n, kmax, dmax, l, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn lower(&self, k: usize, d: usize) -> &GradedSubspace {
        &self.l[k - 1][d]
    }

    pub fn ideal(&self, k: usize, d: usize) -> &GradedSubspace {
        &self.m[k - 1][d]
    }

    /// Whether every homogeneous component of `s` of degree `<= dmax` lies
    /// in the corresponding `M_k` slice.
    pub fn ideal_contains(&self, k: usize, s: &NCSeries) -> bool {
        if k == 1 {
            return true;
        }
        if !num_traits::Zero::is_zero(&s.constant_term()) {
            return false;
        }
        (1..=self.dmax.min(s.trunc())).all(|d| self.ideal(k, d).contains_series(s))
    }

    pub fn ideal_table(&self) -> DimensionTable {
        DimensionTable {
            n: self.n,
            rows: (1..=self.kmax)
                .map(|k| DimensionRow {
                    k,
                    dims: (1..=self.dmax).map(|d| self.ideal(k, d).dim()).collect(),
                })
                .collect(),
        }
    }

    /// `dim M_k − dim M_{k+1}` for `k < kmax`.
    pub fn quotient_table(&self) -> DimensionTable {
        DimensionTable {
            n: self.n,
            rows: (1..self.kmax)
                .map(|k| DimensionRow {
                    k,
                    dims: (1..=self.dmax)
                        .map(|d| self.ideal(k, d).dim() - self.ideal(k + 1, d).dim())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Degree-`d` slice of `L_k` in `n` generators.
pub fn lcs_component(k: usize, d: usize, n: usize) -> Result<GradedSubspace> {
    Ok(Lcs::compute(n, k, d, Execution::Sequential)?.lower(k, d).clone())
}

/// Degree-`d` slice of `M_k` in `n` generators.
pub fn lcs_ideal_component(k: usize, d: usize, n: usize) -> Result<GradedSubspace> {
    Ok(Lcs::compute(n, k, d, Execution::Sequential)?.ideal(k, d).clone())
}

/// Table of `dim N_k` slices, `N_k = M_k / M_{k+1}`, for `k <= kmax`.
pub fn lcs_quotient_table(kmax: usize, dmax: usize, n: usize) -> Result<DimensionTable> {
    lcs_quotient_table_with(kmax, dmax, n, Execution::default())
}

pub fn lcs_quotient_table_with(
    kmax: usize,
    dmax: usize,
    n: usize,
    exec: Execution,
) -> Result<DimensionTable> {
    Ok(Lcs::compute(n, kmax + 1, dmax, exec)?.quotient_table())
}

/// Table of `dim M_k` slices for `k <= kmax`.
pub fn lcs_ideal_table(kmax: usize, dmax: usize, n: usize) -> Result<DimensionTable> {
    Ok(Lcs::compute(n, kmax, dmax, Execution::default())?.ideal_table())
}

/// Column offset of degree `d` in the graded-lex basis of all words up to
/// some degree.
fn degree_offset(n: usize, d: usize) -> usize {
    (0..d).map(|e| n.pow(e as u32)).sum()
}

fn global_vector(s: &NCSeries) -> SparseVec {
    let n = s.n();
    SparseVec::from_pairs(s.terms().iter().map(|(w, c)| {
        (degree_offset(n, w.degree()) + w.rank_in_degree(n), c.clone())
    }))
}

fn global_degree(n: usize, col: usize) -> usize {
    let mut d = 0;
    while degree_offset(n, d + 1) <= col {
        d += 1;
    }
    d
}

/// The two-sided ideal generated by `generators` inside `A / m^{N+1}`.
///
/// Columns run over all words of degree `<= N` in graded-lex order, so each
/// reduced row's pivot is the leading word of its lowest-degree part.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    n: usize,
    trunc: usize,
    span: Echelon,
}

impl TruncatedIdeal {
    pub fn generate(n: usize, trunc: usize, generators: &[NCSeries]) -> Result<TruncatedIdeal> {
        let cap = enumeration_cap();
        check_cap(words_in_degree(n, trunc), cap)?;
        for g in generators {
            if g.n() != n || g.trunc() != trunc {
                return Err(Error::DimensionMismatch(format!(
                    "generator (n={}, N={}) in ideal of (n={n}, N={trunc})",
                    g.n(),
                    g.trunc()
                )));
            }
        }
        let mut span = Echelon::new();
        let mut queue: Vec<NCSeries> = Vec::new();
        for g in generators {
            if span.insert(global_vector(g)) {
                queue.push(g.clone());
            }
        }
        let letters: Vec<NCSeries> = (0..n).map(|i| NCSeries::generator(n, trunc, i)).collect();
        while let Some(v) = queue.pop() {
            for x in &letters {
                for p in [x.mul(&v)?, v.mul(x)?] {
                    if !p.is_zero() && span.insert(global_vector(&p)) {
                        queue.push(p);
                    }
                }
            }
        }
        Ok(TruncatedIdeal { n, trunc, span })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Number of reduced rows whose pivot sits in degree `d`.
    pub fn leading_count(&self, d: usize) -> usize {
        self.span
            .pivot_columns()
            .filter(|&c| global_degree(self.n, c) == d)
            .count()
    }

    /// The span of degree-`d` leading forms.
    pub fn slice(&self, d: usize) -> GradedSubspace {
        let off = degree_offset(self.n, d);
        let width = self.n.pow(d as u32);
        let rows = self.span.rows().into_iter().filter_map(|r| {
            let p = r.pivot()?;
            if p < off || p >= off + width {
                return None;
            }
            Some(SparseVec::from_pairs(
                r.0.range(off..off + width).map(|(&c, q)| (c - off, q.clone())),
            ))
        });
        GradedSubspace::from_vectors(self.n, d, rows)
    }

    pub fn contains(&self, s: &NCSeries) -> bool {
        self.span.contains(&global_vector(s))
    }
}

/// Degree-`d` slice of the two-sided ideal generated by `generators`.
///
/// For homogeneous generators this is the ordinary graded slice; in general
/// it is the slice of leading (lowest-degree) forms. The generators' own
/// truncation order bounds the computation, and an empty list needs `n`.
pub fn ideal_closure(generators: &[NCSeries], n: usize, d: usize) -> Result<GradedSubspace> {
    let trunc = generators.first().map(|g| g.trunc()).unwrap_or(d).max(d);
    let gens: Vec<NCSeries> = generators
        .iter()
        .map(|g| {
            if g.trunc() == trunc {
                g.clone()
            } else {
                NCSeries::from_terms(n, trunc, g.terms().iter().map(|(w, c)| (w.clone(), c.clone())))
                    .expect("letters in range")
            }
        })
        .collect();
    Ok(TruncatedIdeal::generate(n, trunc, &gens)?.slice(d))
}

/// Graded dimensions of a truncated complete-intersection thickening.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThickeningDims {
    pub n: usize,
    /// `dim (A / <f>)_d` for `d = 0..=dmax`.
    pub dims: Vec<usize>,
    /// `dim (O / <ab f>)_d` for `d = 0..=dmax`.
    pub abelian: Vec<usize>,
}

/// Leading-monomial counts of the commutative ideal generated by `gens` in
/// `k[x] / m^{dmax+1}`.
fn commutative_leading_counts(n: usize, dmax: usize, gens: &[crate::comm::CommPoly]) -> Vec<usize> {
    let monos = Monomial::all_up_to(n, dmax);
    let index: std::collections::HashMap<&Monomial, usize> =
        monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let to_vec = |p: &crate::comm::CommPoly| {
        SparseVec::from_pairs(
            p.terms()
                .iter()
                .filter(|(m, _)| m.degree() <= dmax)
                .map(|(m, c)| (index[m], c.clone())),
        )
    };
    let mut span = Echelon::new();
    let mut queue = Vec::new();
    for g in gens {
        let g = g.truncate(dmax);
        if span.insert(to_vec(&g)) {
            queue.push(g);
        }
    }
    while let Some(v) = queue.pop() {
        for i in 0..n {
            let p = v.mul_trunc(&crate::comm::CommPoly::var(n, i), Some(dmax));
            if !p.is_zero() && span.insert(to_vec(&p)) {
                queue.push(p);
            }
        }
    }
    let mut counts = vec![0; dmax + 1];
    for c in span.pivot_columns() {
        counts[monos[c].degree()] += 1;
    }
    counts
}

/// Dimensions of `A_n / <f̃>` and of its abelianization, degree by degree.
///
/// Each relation must already be recentred (zero constant term), and their
/// abelianized linear parts must be independent.
pub fn ci_thickening_dims(f_tilde: &[NCSeries], n: usize, dmax: usize) -> Result<ThickeningDims> {
    check_cap(words_in_degree(n, dmax), enumeration_cap())?;
    let mut rels = Vec::with_capacity(f_tilde.len());
    for (i, f) in f_tilde.iter().enumerate() {
        if f.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "relation {} has n={}, expected {n}",
                i + 1,
                f.n()
            )));
        }
        if f.trunc() < dmax {
            return Err(Error::DimensionMismatch(format!(
                "relation {} is truncated at {} < {dmax}",
                i + 1,
                f.trunc()
            )));
        }
        if !num_traits::Zero::is_zero(&f.constant_term()) {
            return Err(Error::NonRecentred { index: i + 1 });
        }
        rels.push(f.truncate(dmax));
    }
    let linear = Echelon::from_vectors(rels.iter().map(|f| series_to_vector(&f.homogeneous(1), n)));
    if linear.rank() < rels.len() {
        return Err(Error::NotSmooth);
    }
    let ideal = TruncatedIdeal::generate(n, dmax, &rels)?;
    let dims = (0..=dmax)
        .map(|d| n.pow(d as u32) - ideal.leading_count(d))
        .collect();
    let ab: Vec<_> = rels.iter().map(|f| f.abelianize().poly().clone()).collect();
    let counts = commutative_leading_counts(n, dmax, &ab);
    let abelian = (0..=dmax)
        .map(|d| Monomial::all_of_degree(n, d).len() - counts[d])
        .collect();
    Ok(ThickeningDims { n, dims, abelian })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_central_examples() {
        assert_eq!(lcs_component(1, 2, 2).unwrap().dim(), 4);
        let l2 = lcs_component(2, 2, 2).unwrap();
        assert_eq!(l2.dim(), 1);
        let c = NCSeries::parse("x1*x2 - x2*x1", 2, 2).unwrap();
        assert!(l2.contains_series(&c));
        assert_eq!(lcs_component(3, 2, 2).unwrap().dim(), 0);
    }

    #[test]
    fn ideal_examples() {
        assert_eq!(lcs_ideal_component(2, 3, 2).unwrap().dim(), 4);
        assert_eq!(lcs_ideal_component(1, 3, 2).unwrap().dim(), 8);
        assert_eq!(lcs_ideal_component(2, 1, 2).unwrap().dim(), 0);
    }

    #[test]
    fn quotient_examples() {
        let t = lcs_quotient_table(2, 3, 2).unwrap();
        assert_eq!(t.row(1).unwrap()[0], 2);
        assert_eq!(t.row(1).unwrap()[1], 3);
    }

    #[test]
    fn closure_examples() {
        let x1 = NCSeries::parse("x1", 2, 2).unwrap();
        assert_eq!(ideal_closure(&[x1], 2, 2).unwrap().dim(), 3);
        assert_eq!(ideal_closure(&[], 2, 3).unwrap().dim(), 0);
        let c = NCSeries::parse("x1*x2 - x2*x1", 2, 3).unwrap();
        let i = ideal_closure(&[c], 2, 3).unwrap();
        assert_eq!(i, lcs_ideal_component(2, 3, 2).unwrap());
    }

    #[test]
    fn thickening_examples() {
        let free = ci_thickening_dims(&[], 2, 4).unwrap();
        assert_eq!(free.dims, vec![1, 2, 4, 8, 16]);
        let x1 = NCSeries::parse("x1", 2, 4).unwrap();
        let t = ci_thickening_dims(&[x1], 2, 4).unwrap();
        assert_eq!(t.dims, vec![1, 1, 1, 1, 1]);
        assert_eq!(t.abelian, vec![1, 1, 1, 1, 1]);
        let bad = NCSeries::parse("1 + x1", 2, 4).unwrap();
        assert!(matches!(ci_thickening_dims(&[bad], 2, 4), Err(Error::NonRecentred { index: 1 })));
        let sing = NCSeries::parse("x1*x2", 2, 4).unwrap();
        assert!(matches!(ci_thickening_dims(&[sing], 2, 4), Err(Error::NotSmooth)));
    }
}
