//! Truncated series in the completed free associative algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::comm::{CommPoly, CommSeries, Monomial};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::text::{self, Q};
use crate::word::Word;

/// Products with more term pairs than this fan out over threads.
const PAR_MUL_THRESHOLD: usize = 2048;

/// An element of `k<<x1..xn>>` modulo words of degree `> trunc`.
///
/// Terms are kept sparse with no zero coefficients, so equality of series is
/// equality of term maps. Every binary operation checks that both operands
/// carry the same `n` and `trunc`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCSeries {
    n: usize,
    trunc: usize,
    terms: BTreeMap<Word, Q>,
}

pub(crate) fn add_to(map: &mut BTreeMap<Word, Q>, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl NCSeries {
    pub fn zero(n: usize, trunc: usize) -> Self {
        NCSeries {
            n,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, trunc: usize, c: Q) -> Self {
        NCSeries::monomial(n, trunc, Word::empty(), c)
    }

    pub fn one(n: usize, trunc: usize) -> Self {
        NCSeries::constant(n, trunc, Q::one())
    }

    /// The generator `x_{i+1}` (0-based `i`).
    pub fn generator(n: usize, trunc: usize, i: usize) -> Self {
        assert!(i < n, "generator index out of range");
        NCSeries::monomial(n, trunc, Word::letter(i), Q::one())
    }

    /// A single term; dropped if the word is longer than `trunc`.
    pub fn monomial(n: usize, trunc: usize, w: Word, c: Q) -> Self {
        let mut s = NCSeries::zero(n, trunc);
        if w.degree() <= trunc {
            add_to(&mut s.terms, w, c);
        }
        s
    }

    /// Builds a series from terms, projecting away words of degree `> trunc`.
    pub fn from_terms<I>(n: usize, trunc: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Q)>,
    {
        let mut s = NCSeries::zero(n, trunc);
        for (w, c) in terms {
            if let Some(l) = w.max_letter() {
                if l >= n {
                    return Err(Error::IndexOutOfRange { index: l + 1, max: n });
                }
            }
            if w.degree() <= trunc {
                add_to(&mut s.terms, w, c);
            }
        }
        Ok(s)
    }

    pub(crate) fn from_map(n: usize, trunc: usize, terms: BTreeMap<Word, Q>) -> Self {
        debug_assert!(terms.iter().all(|(w, c)| w.degree() <= trunc && !c.is_zero()));
        NCSeries { n, trunc, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::empty())
    }

    /// Lowest degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::degree)
    }

    /// The degree-`d` component.
    pub fn homogeneous(&self, d: usize) -> NCSeries {
        NCSeries {
            n: self.n,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Components of degree `>= d`.
    pub fn degree_at_least(&self, d: usize) -> NCSeries {
        NCSeries {
            n: self.n,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() >= d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The same element viewed at a lower truncation order.
    pub fn truncate(&self, trunc: usize) -> NCSeries {
        NCSeries {
            n: self.n,
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() <= trunc)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn check(&self, other: &NCSeries) -> Result<()> {
        if self.n != other.n || self.trunc != other.trunc {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, N={}) vs (n={}, N={})",
                self.n, self.trunc, other.n, other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_to(&mut terms, w.clone(), c.clone());
        }
        Ok(NCSeries::from_map(self.n, self.trunc, terms))
    }

    pub fn sub(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_to(&mut terms, w.clone(), -c.clone());
        }
        Ok(NCSeries::from_map(self.n, self.trunc, terms))
    }

    pub fn neg(&self) -> NCSeries {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> NCSeries {
        if s.is_zero() {
            return NCSeries::zero(self.n, self.trunc);
        }
        NCSeries {
            n: self.n,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &NCSeries, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            add_to(&mut self.terms, w.clone(), c * s);
        }
    }

    /// Concatenation product, truncated at `trunc`.
    pub fn mul(&self, other: &NCSeries) -> Result<NCSeries> {
        let exec = if self.len() * other.len() > PAR_MUL_THRESHOLD {
            Execution::Parallel
        } else {
            Execution::Sequential
        };
        self.mul_with(other, exec)
    }

    /// [`NCSeries::mul`] with an explicit execution policy.
    pub fn mul_with(&self, other: &NCSeries, exec: Execution) -> Result<NCSeries> {
        self.check(other)?;
        let left: Vec<(&Word, &Q)> = self.terms.iter().collect();
        let right: Vec<(&Word, &Q)> = other.terms.iter().collect();
        let trunc = self.trunc;
        let partial = |chunk: &[(&Word, &Q)]| {
            let mut acc = BTreeMap::new();
            for (wa, ca) in chunk {
                for (wb, cb) in &right {
                    // right terms are sorted by degree, so stop at the first overflow
                    if wa.degree() + wb.degree() > trunc {
                        break;
                    }
                    add_to(&mut acc, wa.concat(wb), *ca * *cb);
                }
            }
            acc
        };
        let terms = if exec.is_parallel() && left.len() > 1 {
            let chunk = left.len().div_ceil(rayon_chunks());
            let chunks: Vec<&[(&Word, &Q)]> = left.chunks(chunk.max(1)).collect();
            let parts = exec.map(&chunks, |c| partial(c));
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for p in it {
                for (w, c) in p {
                    add_to(&mut acc, w, c);
                }
            }
            acc
        } else {
            partial(&left)
        };
        Ok(NCSeries {
            n: self.n,
            trunc,
            terms,
        })
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &NCSeries) -> Result<NCSeries> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Applies the continuous algebra map `x_i ↦ images[i]`.
    pub fn substitute(&self, images: &[NCSeries]) -> Result<NCSeries> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                self.n
            )));
        }
        for (i, img) in images.iter().enumerate() {
            self.check(img)?;
            if !img.constant_term().is_zero() {
                return Err(Error::DivergentSubstitution { index: i + 1 });
            }
        }
        // products of images along word prefixes, shared between terms
        let mut memo: HashMap<Word, NCSeries> = HashMap::new();
        memo.insert(Word::empty(), NCSeries::one(self.n, self.trunc));
        let mut out = NCSeries::zero(self.n, self.trunc);
        for (w, c) in &self.terms {
            let p = prefix_product(&mut memo, w, images)?;
            out.add_scaled_assign(&p, c);
        }
        Ok(out)
    }

    pub fn abelianize(&self) -> CommSeries {
        let mut p = CommPoly::zero(self.n);
        for (w, c) in &self.terms {
            p.add_term(Monomial(w.exponents(self.n)), c.clone());
        }
        CommSeries::from_poly(p, self.trunc)
    }

    /// Parses the `x<i>` grammar. Terms of degree above `trunc` are dropped,
    /// which reads the text as an element of the truncated algebra.
    pub fn parse(src: &str, n: usize, trunc: usize) -> Result<NCSeries> {
        let terms = text::parse_sum(src, None)?;
        let mut s = NCSeries::zero(n, trunc);
        for t in &terms {
            text::reject_groups_and_forms(t)?;
            let mut letters = Vec::with_capacity(t.vars.len());
            for (prefix, idx, pos) in &t.vars {
                text::check_prefix(prefix, &["x"], *pos)?;
                letters.push(text::check_index(*idx, n)?);
            }
            let w = Word::from_letters(letters);
            if w.degree() <= trunc {
                add_to(&mut s.terms, w, t.coeff.clone());
            }
        }
        Ok(s)
    }

    /// Canonical text form, with a custom variable prefix.
    pub fn to_text(&self, prefix: &str) -> String {
        text::join_terms(
            self.terms
                .iter()
                .map(|(w, c)| (c, text::format_letters(prefix, w.letters()))),
        )
    }
}

fn rayon_chunks() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1) * 4
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn prefix_product(
    memo: &mut HashMap<Word, NCSeries>,
    w: &Word,
    images: &[NCSeries],
) -> Result<NCSeries> {
    if let Some(p) = memo.get(w) {
        return Ok(p.clone());
    }
    let d = w.degree();
    let head = prefix_product(memo, &w.prefix(d - 1), images)?;
    let p = head.mul(&images[w.at(d - 1)])?;
    memo.insert(w.clone(), p.clone());
    Ok(p)
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}
