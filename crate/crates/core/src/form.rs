//! Differential forms on the polynomial base `k[b1..bm]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::comm::BasePoly;
use crate::error::{Error, Result};
use crate::text::{self, Q};

/// A basis form `db_{i1} ∧ … ∧ db_{ip}` as a bitmask of indices.
///
/// Ordered by form degree, then lexicographically on the sorted indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct FormIdx(pub u32);

impl FormIdx {
    pub const ONE: FormIdx = FormIdx(0);

    pub fn single(i: usize) -> FormIdx {
        FormIdx(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> FormIdx {
        FormIdx(idx.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// `self ∧ other` as a basis form and sign, or `None` if they overlap.
    pub fn wedge(self, other: FormIdx) -> Option<(FormIdx, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // each index of `other` passes over the larger indices of `self`
        let swaps: u32 = other
            .indices()
            .map(|j| (self.0 >> (j + 1)).count_ones())
            .sum();
        Some((FormIdx(self.0 | other.0), swaps % 2 == 1))
    }

    pub fn to_text(self) -> String {
        self.indices()
            .map(|i| format!("db{}", i + 1))
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl Ord for FormIdx {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for FormIdx {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial differential form `Σ p_I(b) db_I` on the `m`-dimensional base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseForm {
    m: usize,
    terms: BTreeMap<FormIdx, BasePoly>,
}

impl BaseForm {
    pub fn zero(m: usize) -> Self {
        BaseForm {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(p: BasePoly) -> Self {
        let mut f = BaseForm::zero(p.nvars());
        f.add_term(FormIdx::ONE, p);
        f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<FormIdx, BasePoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, f: FormIdx, p: BasePoly) {
        let slot = self.terms.entry(f).or_insert_with(|| BasePoly::zero(self.m));
        slot.add_assign(&p);
        if slot.is_zero() {
            self.terms.remove(&f);
        }
    }

    pub fn add(&self, other: &BaseForm) -> Result<BaseForm> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!("m={} vs m={}", self.m, other.m)));
        }
        let mut r = self.clone();
        for (f, p) in &other.terms {
            r.add_term(*f, p.clone());
        }
        Ok(r)
    }

    pub fn wedge(&self, other: &BaseForm) -> Result<BaseForm> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!("m={} vs m={}", self.m, other.m)));
        }
        let mut r = BaseForm::zero(self.m);
        for (fa, pa) in &self.terms {
            for (fb, pb) in &other.terms {
                if let Some((f, neg)) = fa.wedge(*fb) {
                    let p = pa.mul(pb);
                    r.add_term(f, if neg { p.neg() } else { p });
                }
            }
        }
        Ok(r)
    }

    /// Exterior derivative.
    pub fn de_rham(&self) -> BaseForm {
        let mut r = BaseForm::zero(self.m);
        for (f, p) in &self.terms {
            for i in 0..self.m {
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                if let Some((g, neg)) = FormIdx::single(i).wedge(*f) {
                    r.add_term(g, if neg { dp.neg() } else { dp });
                }
            }
        }
        r
    }

    pub fn parse(src: &str, m: usize) -> Result<BaseForm> {
        let terms = text::parse_sum(src, Some("db"))?;
        let mut r = BaseForm::zero(m);
        for t in &terms {
            let mut form = FormIdx::ONE;
            let mut neg = false;
            for (chain, pos) in &t.forms {
                for &idx in chain {
                    let i = text::check_index(idx, m)?;
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
            let stripped = text::Term {
                forms: Vec::new(),
                ..t.clone()
            };
            let mut p = BasePoly::from_term(&stripped, "b", m)?;
            if neg {
                p = p.neg();
            }
            r.add_term(form, p);
        }
        Ok(r)
    }
}

/// Renders `coefficient * tail`, pulling a single-term coefficient's sign
/// out front. Returns `(negative, text)`.
pub(crate) fn format_coefficient(p: &BasePoly, tail: &str) -> (bool, String) {
    if p.len() == 1 {
        let (m, c) = p.terms().iter().next().unwrap();
        let mono = text::format_letters("b", m.letters());
        let neg = c < &Q::from_integer(0.into());
        let abs = if neg { -c.clone() } else { c.clone() };
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() || (mono.is_empty() && tail.is_empty()) {
            parts.push(text::format_rational(&abs));
        }
        if !mono.is_empty() {
            parts.push(mono);
        }
        if !tail.is_empty() {
            parts.push(tail.to_string());
        }
        return (neg, parts.join("*"));
    }
    let inner = p.to_text("b");
    if tail.is_empty() {
        (false, format!("({inner})"))
    } else {
        (false, format!("({inner})*{tail}"))
    }
}

pub(crate) fn join_signed<I: IntoIterator<Item = (bool, String)>>(parts: I) -> String {
    let mut out = String::new();
    for (i, (neg, s)) in parts.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_signed(
            self.terms
                .iter()
                .map(|(form, p)| format_coefficient(p, &form.to_text())),
        );
        write!(f, "{s}")
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &str, m: usize) -> BaseForm {
        BaseForm::parse(t, m).unwrap()
    }

    #[test]
    fn form_order_and_sign() {
        let a = FormIdx::single(0);
        let b = FormIdx::single(1);
        assert_eq!(a.wedge(b), Some((FormIdx(3), false)));
        assert_eq!(b.wedge(a), Some((FormIdx(3), true)));
        assert_eq!(a.wedge(a), None);
        assert!(FormIdx::single(2) < FormIdx::from_indices([0, 1]));
        assert!(FormIdx::from_indices([0, 2]) < FormIdx::from_indices([1, 2]));
    }

    #[test]
    fn de_rham_examples() {
        assert_eq!(f("b1", 2).de_rham(), f("db1", 2));
        assert_eq!(f("b1*db2", 2).de_rham(), f("db1^db2", 2));
        let g = f("b1^3*b2 - 2*b2^2 + 5", 2);
        assert!(g.de_rham().de_rham().is_zero());
    }

    #[test]
    fn text_roundtrip() {
        let g = f("(b1 + b2)*db2 - 3*b1*db1^db2 + db1 + 2", 2);
        assert_eq!(g.to_string(), "2 + db1 + (b1 + b2)*db2 - 3*b1*db1^db2");
        assert_eq!(f(&g.to_string(), 2), g);
        assert_eq!(f("db2^db1", 2), f("-db1^db2", 2));
    }
}
