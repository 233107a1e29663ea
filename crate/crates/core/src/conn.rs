//! Twisted NC-connections over an affine chart.
//!
//! A connection is the degree-1 derivation `D` of `Ω•(base) ⊗ T̂(Ω¹)` that
//! is de Rham on base forms and sends each fiber generator to
//!
//! ```text
//! D(ξ_i) = db_i + ∇_0(ξ_i) + ∇_1(ξ_i) + …,   ∇_k(ξ_i) of fiber degree k + 1.
//! ```
//!
//! The stored data is `D(ξ_i)` itself, leading term included, so that a
//! malformed leading term can be represented and detected.

use std::collections::HashMap;

use num_traits::One;

use crate::comm::{BasePoly, Monomial};
use crate::dga::DgaElement;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::form::FormIdx;
use crate::limits::{check_cap, enumeration_cap};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::text::Q;
use crate::word::{count_up_to, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionData {
    n: usize,
    fiber_trunc: usize,
    base_trunc: usize,
    d_xi: Vec<DgaElement>,
}

/// Outcome of [`ConnectionData::flatness_check`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Flatness {
    Pass,
    /// `D²` of `generator` is nonzero inside the reliable window.
    Counterexample { generator: String, value: DgaElement },
}

impl Flatness {
    pub fn is_pass(&self) -> bool {
        matches!(self, Flatness::Pass)
    }
}

/// Outcome of [`ConnectionData::validate_twisted_shape`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TwistedShape {
    Pass,
    Violation { generator: String, reason: String },
}

impl TwistedShape {
    pub fn is_pass(&self) -> bool {
        matches!(self, TwistedShape::Pass)
    }
}

impl ConnectionData {
    /// Wraps the images `D(ξ_i)`; each must be a pure one-form.
    pub fn new(d_xi: Vec<DgaElement>) -> Result<Self> {
        let first = d_xi
            .first()
            .ok_or_else(|| Error::Invalid("a connection needs at least one generator".into()))?;
        let (n, nt, bt) = (first.n(), first.fiber_trunc(), first.base_trunc());
        if d_xi.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {n} fiber generators",
                d_xi.len()
            )));
        }
        for (i, e) in d_xi.iter().enumerate() {
            first.check(e)?;
            if e.form_degrees().any(|p| p != 1) {
                return Err(Error::Invalid(format!("D(xi{}) is not a one-form", i + 1)));
            }
        }
        Ok(ConnectionData {
            n,
            fiber_trunc: nt,
            base_trunc: bt,
            d_xi,
        })
    }

    /// `D(ξ_i) = db_i`: all `∇_k` vanish.
    pub fn tautological(n: usize, fiber_trunc: usize, base_trunc: usize) -> Self {
        let d_xi = (0..n)
            .map(|i| DgaElement::db(n, fiber_trunc, base_trunc, i))
            .collect();
        ConnectionData {
            n,
            fiber_trunc,
            base_trunc,
            d_xi,
        }
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

    /// `D(ξ_i)` for every generator.
    pub fn images(&self) -> &[DgaElement] {
        &self.d_xi
    }

    /// The fiber-degree-0 part of `D(ξ_i)`.
    pub fn leading(&self, i: usize) -> DgaElement {
        self.d_xi[i].fiber_component(0)
    }

    /// `∇_k(ξ_i)`, the fiber-degree `k + 1` part of `D(ξ_i)`.
    pub fn nabla(&self, k: usize, i: usize) -> DgaElement {
        self.d_xi[i].fiber_component(k + 1)
    }

    /// Adds `delta` to `D(ξ_i)`.
    pub fn perturbed(&self, i: usize, delta: &DgaElement) -> Result<ConnectionData> {
        let mut d_xi = self.d_xi.clone();
        d_xi[i] = d_xi[i].add(delta)?;
        ConnectionData::new(d_xi)
    }

    /// Applies `D`. The input may carry larger bounds than the connection;
    /// the output is truncated at the connection's `(N, B)`.
    pub fn apply_d(&self, e: &DgaElement) -> Result<DgaElement> {
        if e.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "element has n={}, connection has n={}",
                e.n(),
                self.n
            )));
        }
        let (nt, bt) = (self.fiber_trunc, self.base_trunc);
        let mut out = DgaElement::zero(self.n, nt, bt);
        for ((form, w), p) in e.terms() {
            if w.degree() > nt + 1 {
                continue;
            }
            for j in 0..self.n {
                let dp = p.derivative(j);
                if dp.is_zero() {
                    continue;
                }
                if let Some((f, neg)) = FormIdx::single(j).wedge(*form) {
                    out.add_term(f, w.clone(), if neg { dp.neg() } else { dp });
                }
            }
            let odd = form.degree() % 2 == 1;
            for pos in 0..w.degree() {
                for ((g, u), q) in self.d_xi[w.at(pos)].terms() {
                    if w.degree() - 1 + u.degree() > nt {
                        continue;
                    }
                    let Some((f, neg)) = form.wedge(*g) else {
                        continue;
                    };
                    let c = p.mul_trunc(q, Some(bt));
                    out.add_term(f, w.splice(pos, pos + 1, u), if neg ^ odd { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Checks `D² = 0` on every `ξ_i` and `b_i`.
    ///
    /// Truncation makes `D²` exact only for fiber degree `<= N − 1` and base
    /// degree `<= B − 1`; only that window is inspected, so `N = 0` or
    /// `B = 0` passes vacuously.
    pub fn flatness_check(&self) -> Flatness {
        if self.fiber_trunc == 0 || self.base_trunc == 0 {
            return Flatness::Pass;
        }
        let (fw, bw) = (self.fiber_trunc - 1, self.base_trunc - 1);
        let (nt, bt) = (self.fiber_trunc, self.base_trunc);
        let gens = (0..self.n)
            .map(|i| (format!("xi{}", i + 1), DgaElement::fiber_gen(self.n, nt, bt, i)))
            .chain((0..self.n).map(|i| (format!("b{}", i + 1), DgaElement::base_var(self.n, nt, bt, i))));
        for (name, g) in gens {
            let dd = self
                .apply_d(&self.apply_d(&g).expect("shapes agree"))
                .expect("shapes agree")
                .window(fw, bw);
            if !dd.is_zero() {
                return Flatness::Counterexample {
                    generator: name,
                    value: dd,
                };
            }
        }
        Flatness::Pass
    }

    /// Checks that `D(ξ_i) ≡ db_i` modulo positive fiber degree.
    pub fn validate_twisted_shape(&self) -> TwistedShape {
        for i in 0..self.n {
            let lead = self.leading(i);
            let want = DgaElement::db(self.n, self.fiber_trunc, self.base_trunc, i);
            if lead != want {
                return TwistedShape::Violation {
                    generator: format!("xi{}", i + 1),
                    reason: format!("leading term is {lead}, expected {want}"),
                };
            }
        }
        for i in 0..self.n {
            // b_i itself needs one more base degree than the connection keeps
            let b = DgaElement::base_var(self.n, self.fiber_trunc, self.base_trunc + 1, i);
            let db = DgaElement::db(self.n, self.fiber_trunc, self.base_trunc, i);
            if self.apply_d(&b).ok() != Some(db) {
                return TwistedShape::Violation {
                    generator: format!("b{}", i + 1),
                    reason: "D does not restrict to the de Rham differential".into(),
                };
            }
        }
        TwistedShape::Pass
    }

    /// Kernel of `D` on form-degree-0 elements with fiber degree
    /// `<= fiber_max` and base degree `<= base_max`.
    pub fn flat_sections(&self, fiber_max: usize, base_max: usize) -> Result<FlatSections> {
        self.flat_sections_with(fiber_max, base_max, Execution::default())
    }

    pub fn flat_sections_with(
        &self,
        fiber_max: usize,
        base_max: usize,
        exec: Execution,
    ) -> Result<FlatSections> {
        if fiber_max > self.fiber_trunc || base_max > self.base_trunc {
            return Err(Error::Invalid(format!(
                "bounds ({fiber_max}, {base_max}) exceed the connection's ({}, {})",
                self.fiber_trunc, self.base_trunc
            )));
        }
        let monos = Monomial::all_up_to(self.n, base_max);
        let words = count_up_to(self.n, fiber_max);
        check_cap(words.checked_mul(monos.len()), enumeration_cap())?;
        let mut columns: Vec<(Word, Monomial)> = Vec::new();
        for d in (0..=fiber_max).rev() {
            for w in Word::all_of_degree(self.n, d) {
                for m in &monos {
                    columns.push((w.clone(), m.clone()));
                }
            }
        }
        let (nt, bt) = (self.fiber_trunc, self.base_trunc);
        let images = exec.map(&columns, |(w, m)| {
            let e = DgaElement::monomial(
                self.n,
                nt,
                bt,
                FormIdx::ONE,
                w.clone(),
                BasePoly::monomial(m.clone(), Q::one()),
            );
            self.apply_d(&e).expect("shapes agree")
        });
        let mut index: HashMap<(FormIdx, Word, Monomial), usize> = HashMap::new();
        let vectors: Vec<SparseVec> = images
            .iter()
            .map(|img| {
                let mut v = SparseVec::new();
                for ((f, w), p) in img.terms() {
                    for (m, c) in p.terms() {
                        let next = index.len();
                        let row = *index.entry((*f, w.clone(), m.clone())).or_insert(next);
                        v.add_at(row, c.clone());
                    }
                }
                v
            })
            .collect();
        let ker = kernel(&vectors);
        let column_index = columns
            .iter()
            .enumerate()
            .map(|(j, (w, m))| ((w.clone(), m.clone()), j))
            .collect();
        Ok(FlatSections {
            n: self.n,
            fiber_trunc: nt,
            base_trunc: bt,
            columns,
            column_index,
            kernel: ker,
        })
    }
}

/// A reduced echelon basis of flat sections inside a bounded box.
///
/// Unknowns are ordered by fiber degree (highest first), then word, then base
/// monomial, so each basis element's pivot is its leading top-fiber-degree
/// term.
#[derive(Clone, Debug)]
pub struct FlatSections {
    n: usize,
    fiber_trunc: usize,
    base_trunc: usize,
    columns: Vec<(Word, Monomial)>,
    column_index: HashMap<(Word, Monomial), usize>,
    kernel: Echelon,
}

impl FlatSections {
    pub fn dim(&self) -> usize {
        self.kernel.rank()
    }

    pub fn basis(&self) -> Vec<DgaElement> {
        self.kernel
            .rows()
            .into_iter()
            .map(|r| self.element(r))
            .collect()
    }

    fn element(&self, v: &SparseVec) -> DgaElement {
        let mut e = DgaElement::zero(self.n, self.fiber_trunc, self.base_trunc);
        for (&j, c) in &v.0 {
            let (w, m) = &self.columns[j];
            e.add_term(FormIdx::ONE, w.clone(), BasePoly::monomial(m.clone(), c.clone()));
        }
        e
    }

    /// Fiber degree of each basis element's pivot, in basis order.
    pub fn pivot_fiber_degrees(&self) -> Vec<usize> {
        self.kernel
            .pivot_columns()
            .map(|j| self.columns[j].0.degree())
            .collect()
    }

    /// Number of basis elements whose pivot has fiber degree `d`.
    pub fn count_with_fiber_degree(&self, d: usize) -> usize {
        self.pivot_fiber_degrees().into_iter().filter(|&x| x == d).count()
    }

    /// Membership in the span; false for elements outside the box.
    pub fn contains(&self, e: &DgaElement) -> bool {
        let mut v = SparseVec::new();
        for ((f, w), p) in e.terms() {
            if *f != FormIdx::ONE {
                return false;
            }
            for (m, c) in p.terms() {
                match self.column_index.get(&(w.clone(), m.clone())) {
                    Some(&j) => v.add_at(j, c.clone()),
                    None => return false,
                }
            }
        }
        self.kernel.contains(&v)
    }
}
