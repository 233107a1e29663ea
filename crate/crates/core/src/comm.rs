//! Commutative polynomials over the rationals.
//!
//! [`CommPoly`] backs both the abelianized series of the formal disk
//! ([`CommSeries`], variables `x1..xn`) and the polynomial coefficients of
//! the affine chart ([`BasePoly`], variables `b1..bm`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::text::{self, Q};

/// Exponent vector of a commutative monomial.
///
/// Ordered by total degree, then lexicographically on the sorted letter
/// sequence (`x1^2 < x1*x2 < x2^2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
    }

    /// All monomials in `nvars` variables of total degree exactly `d`.
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(nvars: usize, left: usize, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if acc.len() + 1 == nvars {
                acc.push(left as u32);
                out.push(Monomial(acc.clone()));
                acc.pop();
                return;
            }
            for e in (0..=left).rev() {
                acc.push(e as u32);
                rec(nvars, left - e, acc, out);
                acc.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(nvars, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_up_to(nvars: usize, d: usize) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::all_of_degree(nvars, k)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                match b.cmp(a) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` commuting variables; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

/// Polynomial coefficient on the affine chart, in base variables `b1..bm`.
pub type BasePoly = CommPoly;

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = CommPoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        CommPoly::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = CommPoly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Q::one());
        p
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = CommPoly::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Highest total degree present, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign(&mut self, other: &CommPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &CommPoly, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &CommPoly) -> CommPoly {
        let mut r = self.clone();
        r.add_scaled(other, &-Q::one());
        r
    }

    pub fn neg(&self) -> CommPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> CommPoly {
        if s.is_zero() {
            return CommPoly::zero(self.nvars);
        }
        CommPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Product, dropping monomials of total degree above `max_degree`.
    pub fn mul_trunc(&self, other: &CommPoly, max_degree: Option<usize>) -> CommPoly {
        let mut r = CommPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(d) = max_degree {
                    if ma.degree() + mb.degree() > d {
                        continue;
                    }
                }
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        self.mul_trunc(other, None)
    }

    pub fn truncate(&self, max_degree: usize) -> CommPoly {
        CommPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative in variable `i` (0-based).
    pub fn derivative(&self, i: usize) -> CommPoly {
        let mut r = CommPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            r.add_term(m2, c * Q::from_integer(e.into()));
        }
        r
    }

    /// Substitutes `images[i]` for variable `i`, truncating at `max_degree`.
    pub fn substitute(&self, images: &[CommPoly], max_degree: Option<usize>) -> CommPoly {
        let nv = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut r = CommPoly::zero(nv);
        let mut powers: Vec<Vec<CommPoly>> = images.iter().map(|p| vec![CommPoly::one(nv), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut acc = CommPoly::constant(nv, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_trunc(&images[i], max_degree);
                    powers[i].push(next);
                }
                acc = acc.mul_trunc(&powers[i][e as usize], max_degree);
                if acc.is_zero() {
                    break;
                }
            }
            r.add_assign(&acc);
        }
        r
    }

    pub fn to_text(&self, prefix: &str) -> String {
        text::join_terms(
            self.terms
                .iter()
                .map(|(m, c)| (c, text::format_letters(prefix, m.letters()))),
        )
    }

    /// Parses a commutative polynomial with variables `<prefix>1..<prefix>nvars`.
    pub fn parse(src: &str, prefix: &'static str, nvars: usize) -> Result<CommPoly> {
        let terms = text::parse_sum(src, None)?;
        let mut p = CommPoly::zero(nvars);
        for t in &terms {
            p.add_assign(&CommPoly::from_term(t, prefix, nvars)?);
        }
        Ok(p)
    }

    pub(crate) fn from_term(t: &text::Term, prefix: &str, nvars: usize) -> Result<CommPoly> {
        if let Some((_, pos)) = t.forms.first() {
            return Err(Error::Syntax {
                pos: *pos,
                msg: "forms are not allowed in a polynomial".into(),
            });
        }
        let mut m = Monomial::one(nvars);
        for (p, idx, pos) in &t.vars {
            text::check_prefix(p, &[prefix], *pos)?;
            let i = text::check_index(*idx, nvars)?;
            m.0[i] += 1;
        }
        let mut acc = CommPoly::monomial(m, t.coeff.clone());
        for (g, _) in &t.groups {
            let mut sum = CommPoly::zero(nvars);
            for inner in g {
                sum.add_assign(&CommPoly::from_term(inner, prefix, nvars)?);
            }
            acc = acc.mul(&sum);
        }
        Ok(acc)
    }
}

/// A truncated power series in `n` commuting variables: an element of the
/// commutative formal disk's coordinate ring at order `trunc`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommSeries {
    trunc: usize,
    poly: CommPoly,
}

impl CommSeries {
    pub fn zero(n: usize, trunc: usize) -> Self {
        CommSeries {
            trunc,
            poly: CommPoly::zero(n),
        }
    }

    pub fn from_poly(poly: CommPoly, trunc: usize) -> Self {
        CommSeries {
            trunc,
            poly: poly.truncate(trunc),
        }
    }

    pub fn generator(n: usize, trunc: usize, i: usize) -> Self {
        CommSeries::from_poly(CommPoly::var(n, i), trunc)
    }

    pub fn n(&self) -> usize {
        self.poly.nvars()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn poly(&self) -> &CommPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn check(&self, other: &CommSeries) -> Result<()> {
        if self.n() != other.n() || self.trunc != other.trunc {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, N={}) vs (n={}, N={})",
                self.n(),
                self.trunc,
                other.n(),
                other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &CommSeries) -> Result<CommSeries> {
        self.check(other)?;
        Ok(CommSeries {
            trunc: self.trunc,
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn sub(&self, other: &CommSeries) -> Result<CommSeries> {
        self.check(other)?;
        Ok(CommSeries {
            trunc: self.trunc,
            poly: self.poly.sub(&other.poly),
        })
    }

    pub fn mul(&self, other: &CommSeries) -> Result<CommSeries> {
        self.check(other)?;
        Ok(CommSeries {
            trunc: self.trunc,
            poly: self.poly.mul_trunc(&other.poly, Some(self.trunc)),
        })
    }

    /// Substitutes images (zero constant term required) for the variables.
    pub fn substitute(&self, images: &[CommSeries]) -> Result<CommSeries> {
        if images.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.n()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            self.check(img)?;
            if !img.poly.constant_term().is_zero() {
                return Err(Error::DivergentSubstitution { index: i + 1 });
            }
        }
        let polys: Vec<CommPoly> = images.iter().map(|s| s.poly.clone()).collect();
        Ok(CommSeries {
            trunc: self.trunc,
            poly: self.poly.substitute(&polys, Some(self.trunc)),
        })
    }

    pub fn parse(src: &str, n: usize, trunc: usize) -> Result<CommSeries> {
        Ok(CommSeries::from_poly(CommPoly::parse(src, "x", n)?, trunc))
    }
}

impl fmt::Display for CommSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.to_text("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn monomial_counts() {
        // C(n+d-1, d)
        assert_eq!(Monomial::all_of_degree(3, 4).len(), 15);
        assert_eq!(Monomial::all_of_degree(2, 5).len(), 6);
        assert_eq!(Monomial::all_of_degree(1, 7).len(), 1);
    }

    #[test]
    fn order_is_graded_then_letter_lex() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 1]);
        let c = Monomial(vec![0, 2]);
        assert!(a < b && b < c);
        assert!(Monomial(vec![0, 1]) < a);
    }

    #[test]
    fn derivative_and_substitute() {
        let p = CommPoly::parse("b1^2*b2 + 3*b2", "b", 2).unwrap();
        assert_eq!(p.derivative(0), CommPoly::parse("2*b1*b2", "b", 2).unwrap());
        let img = vec![
            CommPoly::parse("b1 + b2", "b", 2).unwrap(),
            CommPoly::parse("b2", "b", 2).unwrap(),
        ];
        let s = p.substitute(&img, None);
        assert_eq!(
            s,
            CommPoly::parse("b1^2*b2 + 2*b1*b2^2 + b2^3 + 3*b2", "b", 2).unwrap()
        );
        assert_eq!(s.constant_term(), q(0));
    }

    #[test]
    fn text_roundtrip() {
        let p = CommPoly::parse("-1/2*b2^2 + b1 - 7", "b", 2).unwrap();
        assert_eq!(p.to_text("b"), "-7 + b1 - 1/2*b2^2");
        assert_eq!(CommPoly::parse(&p.to_text("b"), "b", 2).unwrap(), p);
    }
}
