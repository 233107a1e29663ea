//! Elements of `Ω•(base) ⊗ T̂(Ω¹)` over an affine chart.
//!
//! A term is `p(b) · db_I · ξ_w`: forms sit to the left of the fiber word and
//! fiber generators are even, so only forms pick up Koszul signs. Fiber words
//! are truncated at `fiber_trunc`, base polynomials at total degree
//! `base_trunc`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::comm::{BasePoly, Monomial};
use crate::error::{Error, Result};
use crate::form::{format_coefficient, join_signed, FormIdx};
use crate::text::{self, Q};
use crate::word::Word;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgaElement {
    n: usize,
    fiber_trunc: usize,
    base_trunc: usize,
    terms: BTreeMap<(FormIdx, Word), BasePoly>,
}

impl DgaElement {
    pub fn zero(n: usize, fiber_trunc: usize, base_trunc: usize) -> Self {
        DgaElement {
            n,
            fiber_trunc,
            base_trunc,
            terms: BTreeMap::new(),
        }
    }

    /// Zero element with the same shape as `self`.
    pub fn zero_like(&self) -> Self {
        DgaElement::zero(self.n, self.fiber_trunc, self.base_trunc)
    }

    pub fn monomial(
        n: usize,
        fiber_trunc: usize,
        base_trunc: usize,
        form: FormIdx,
        word: Word,
        p: BasePoly,
    ) -> Self {
        let mut e = DgaElement::zero(n, fiber_trunc, base_trunc);
        e.add_term(form, word, p);
        e
    }

    pub fn constant(n: usize, fiber_trunc: usize, base_trunc: usize, c: Q) -> Self {
        DgaElement::function(n, fiber_trunc, base_trunc, BasePoly::constant(n, c))
    }

    pub fn function(n: usize, fiber_trunc: usize, base_trunc: usize, p: BasePoly) -> Self {
        DgaElement::monomial(n, fiber_trunc, base_trunc, FormIdx::ONE, Word::empty(), p)
    }

    /// The base coordinate `b_{i+1}`.
    pub fn base_var(n: usize, fiber_trunc: usize, base_trunc: usize, i: usize) -> Self {
        DgaElement::function(n, fiber_trunc, base_trunc, BasePoly::var(n, i))
    }

    /// The fiber generator `ξ_{i+1}`.
    pub fn fiber_gen(n: usize, fiber_trunc: usize, base_trunc: usize, i: usize) -> Self {
        DgaElement::monomial(
            n,
            fiber_trunc,
            base_trunc,
            FormIdx::ONE,
            Word::letter(i),
            BasePoly::one(n),
        )
    }

    /// The one-form `db_{i+1}`.
    pub fn db(n: usize, fiber_trunc: usize, base_trunc: usize, i: usize) -> Self {
        DgaElement::monomial(
            n,
            fiber_trunc,
            base_trunc,
            FormIdx::single(i),
            Word::empty(),
            BasePoly::one(n),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fiber_trunc(&self) -> usize {
        self.fiber_trunc
    }

    pub fn base_trunc(&self) -> usize {
        self.base_trunc
    }

    pub fn terms(&self) -> &BTreeMap<(FormIdx, Word), BasePoly> {
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

    pub fn coeff(&self, form: FormIdx, word: &Word) -> BasePoly {
        self.terms
            .get(&(form, word.clone()))
            .cloned()
            .unwrap_or_else(|| BasePoly::zero(self.n))
    }

    /// Adds `p · db_form · ξ_word`, applying both truncations.
    pub fn add_term(&mut self, form: FormIdx, word: Word, p: BasePoly) {
        if word.degree() > self.fiber_trunc || p.is_zero() {
            return;
        }
        let p = p.truncate(self.base_trunc);
        if p.is_zero() {
            return;
        }
        let key = (form, word);
        let slot = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| BasePoly::zero(self.n));
        slot.add_assign(&p);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn form_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().map(|(f, _)| f.degree())
    }

    /// Highest fiber degree present.
    pub fn max_fiber_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(_, w)| w.degree()).max()
    }

    pub(crate) fn check(&self, other: &DgaElement) -> Result<()> {
        if self.n != other.n
            || self.fiber_trunc != other.fiber_trunc
            || self.base_trunc != other.base_trunc
        {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, N={}, B={}) vs (n={}, N={}, B={})",
                self.n,
                self.fiber_trunc,
                self.base_trunc,
                other.n,
                other.fiber_trunc,
                other.base_trunc
            )));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &DgaElement) {
        for ((f, w), p) in &other.terms {
            self.add_term(*f, w.clone(), p.clone());
        }
    }

    pub fn add(&self, other: &DgaElement) -> Result<DgaElement> {
        self.check(other)?;
        let mut r = self.clone();
        r.add_assign(other);
        Ok(r)
    }

    pub fn sub(&self, other: &DgaElement) -> Result<DgaElement> {
        self.check(other)?;
        let mut r = self.clone();
        r.add_assign(&other.neg());
        Ok(r)
    }

    pub fn neg(&self) -> DgaElement {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> DgaElement {
        let mut r = self.zero_like();
        if s.is_zero() {
            return r;
        }
        r.terms = self
            .terms
            .iter()
            .map(|(k, p)| (k.clone(), p.scale(s)))
            .collect();
        r
    }

    /// Multiplies every coefficient by a base polynomial.
    pub fn scale_poly(&self, q: &BasePoly) -> DgaElement {
        let mut r = self.zero_like();
        for ((f, w), p) in &self.terms {
            r.add_term(*f, w.clone(), p.mul_trunc(q, Some(self.base_trunc)));
        }
        r
    }

    /// Product into an element with the given bounds.
    pub fn mul_into(&self, other: &DgaElement, fiber_trunc: usize, base_trunc: usize) -> DgaElement {
        let mut r = DgaElement::zero(self.n, fiber_trunc, base_trunc);
        for ((fa, wa), pa) in &self.terms {
            for ((fb, wb), pb) in &other.terms {
                if wa.degree() + wb.degree() > fiber_trunc {
                    continue;
                }
                let Some((f, neg)) = fa.wedge(*fb) else {
                    continue;
                };
                let mut p = pa.mul_trunc(pb, Some(base_trunc));
                if neg {
                    p = p.neg();
                }
                r.add_term(f, wa.concat(wb), p);
            }
        }
        r
    }

    /// Graded product: forms wedge (with Koszul sign), fiber words concatenate.
    pub fn mul(&self, other: &DgaElement) -> Result<DgaElement> {
        self.check(other)?;
        Ok(self.mul_into(other, self.fiber_trunc, self.base_trunc))
    }

    /// Re-expresses the element at other bounds (projection when smaller).
    pub fn retruncate(&self, fiber_trunc: usize, base_trunc: usize) -> DgaElement {
        let mut r = DgaElement::zero(self.n, fiber_trunc, base_trunc);
        for ((f, w), p) in &self.terms {
            r.add_term(*f, w.clone(), p.clone());
        }
        r
    }

    /// Terms with the given form index, as a form-degree-0 element.
    pub fn form_component(&self, form: FormIdx) -> DgaElement {
        let mut r = self.zero_like();
        for ((f, w), p) in &self.terms {
            if *f == form {
                r.add_term(FormIdx::ONE, w.clone(), p.clone());
            }
        }
        r
    }

    pub fn fiber_component(&self, d: usize) -> DgaElement {
        let mut r = self.zero_like();
        for ((f, w), p) in &self.terms {
            if w.degree() == d {
                r.add_term(*f, w.clone(), p.clone());
            }
        }
        r
    }

    /// Terms of fiber degree `<= fiber_max` and base monomials of degree
    /// `<= base_max`.
    pub fn window(&self, fiber_max: usize, base_max: usize) -> DgaElement {
        let mut r = self.zero_like();
        for ((f, w), p) in &self.terms {
            if w.degree() <= fiber_max {
                r.add_term(*f, w.clone(), p.truncate(base_max));
            }
        }
        r
    }

    /// Substitutes `ξ_i ↦ images[i]` (form degree 0, no fiber-constant part).
    pub fn substitute_fiber(&self, images: &[DgaElement]) -> Result<DgaElement> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} fiber generators",
                images.len(),
                self.n
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.terms.keys().any(|(f, w)| *f != FormIdx::ONE || w.is_empty()) {
                return Err(Error::DivergentSubstitution { index: i + 1 });
            }
        }
        let (nt, bt) = (self.fiber_trunc, self.base_trunc);
        let mut memo: std::collections::HashMap<Word, DgaElement> = std::collections::HashMap::new();
        memo.insert(
            Word::empty(),
            DgaElement::constant(self.n, nt, bt, Q::one()),
        );
        let mut out = self.zero_like();
        for ((f, w), p) in &self.terms {
            let mut prod = memo_product(&mut memo, w, images, nt, bt);
            prod = prod.scale_poly(p);
            for ((_, u), q) in prod.terms {
                out.add_term(*f, u, q);
            }
        }
        Ok(out)
    }

    /// Applies `q ↦ q(images)` to every base coefficient.
    pub fn substitute_base(&self, images: &[BasePoly]) -> DgaElement {
        let mut out = self.zero_like();
        for ((f, w), p) in &self.terms {
            out.add_term(*f, w.clone(), p.substitute(images, Some(self.base_trunc)));
        }
        out
    }

    /// Parses `(poly)*db1^db2*xi1*xi2 + …` with base variables `b`, forms
    /// `db` and fiber generators `xi`.
    pub fn parse(src: &str, n: usize, fiber_trunc: usize, base_trunc: usize) -> Result<DgaElement> {
        let terms = text::parse_sum(src, Some("db"))?;
        let mut r = DgaElement::zero(n, fiber_trunc, base_trunc);
        for t in &terms {
            let mut form = FormIdx::ONE;
            let mut neg = false;
            for (chain, pos) in &t.forms {
                for &idx in chain {
                    let i = text::check_index(idx, n)?;
                    match form.wedge(FormIdx::single(i)) {
                        Some((f, s)) => {
                            form = f;
                            neg ^= s;
                        }
                        None => {
                            return Err(Error::Syntax {
                                pos: *pos,
                                msg: "repeated form index".into(),
                            })
                        }
                    }
                }
            }
            let mut letters = Vec::new();
            let mut mono = Monomial::one(n);
            for (prefix, idx, pos) in &t.vars {
                text::check_prefix(prefix, &["b", "xi"], *pos)?;
                let i = text::check_index(*idx, n)?;
                if prefix == "xi" {
                    letters.push(i);
                } else {
                    mono.0[i] += 1;
                }
            }
            let mut p = BasePoly::monomial(mono, t.coeff.clone());
            for (g, _) in &t.groups {
                let mut sum = BasePoly::zero(n);
                for inner in g {
                    sum.add_assign(&BasePoly::from_term(inner, "b", n)?);
                }
                p = p.mul(&sum);
            }
            if neg {
                p = p.neg();
            }
            r.add_term(form, Word::from_letters(letters), p);
        }
        Ok(r)
    }
}

fn memo_product(
    memo: &mut std::collections::HashMap<Word, DgaElement>,
    w: &Word,
    images: &[DgaElement],
    nt: usize,
    bt: usize,
) -> DgaElement {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let d = w.degree();
    let head = memo_product(memo, &w.prefix(d - 1), images, nt, bt);
    let p = head.mul_into(&images[w.at(d - 1)], nt, bt);
    memo.insert(w.clone(), p.clone());
    p
}

impl fmt::Display for DgaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_signed(self.terms.iter().map(|((form, w), p)| {
            let mut tail = form.to_text();
            let word = text::format_letters("xi", w.letters());
            if !word.is_empty() {
                if !tail.is_empty() {
                    tail.push('*');
                }
                tail.push_str(&word);
            }
            format_coefficient(p, &tail)
        }));
        write!(f, "{s}")
    }
}
