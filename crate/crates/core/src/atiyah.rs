//! The second-order part `ω₂` of a connection and chart-level coboundaries.
//!
//! Entry `(i, [j, k], l)` of a [`BilinearMapForm`] is the coefficient of
//! `db_i ⊗ ξ_j ξ_k` in `D(ξ_l)`: a one-form valued in maps
//! `T ⊗ T → T` sending `∂_j ⊗ ∂_k` to `∂_l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::comm::{BasePoly, Monomial};
use crate::conn::ConnectionData;
use crate::error::{Error, Result};
use crate::exec::Execution;

use crate::limits::{check_cap, enumeration_cap};
use crate::linalg::{SparseVec, TrackedElimination};

/// `(base form index, (from_j, from_k), to)`, all 0-based.
pub type EntryKey = (usize, (usize, usize), usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearMapForm {
    n: usize,
    base_trunc: usize,
    entries: BTreeMap<EntryKey, BasePoly>,
}

/// A `Hom(T⊗T, T)`-valued function: `g[(j, k), l]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearMapFunction {
    n: usize,
    entries: BTreeMap<((usize, usize), usize), BasePoly>,
}

impl BilinearMapFunction {
    pub fn zero(n: usize) -> Self {
        BilinearMapFunction {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn entries(&self) -> &BTreeMap<((usize, usize), usize), BasePoly> {
        &self.entries
    }

    pub fn set(&mut self, from: (usize, usize), to: usize, p: BasePoly) {
        if p.is_zero() {
            self.entries.remove(&(from, to));
        } else {
            self.entries.insert((from, to), p);
        }
    }

    /// Entrywise de Rham differential, truncated at `base_trunc`.
    pub fn differential(&self, base_trunc: usize) -> BilinearMapForm {
        let mut out = BilinearMapForm::zero(self.n, base_trunc);
        for (&(from, to), p) in &self.entries {
            for i in 0..self.n {
                out.add(i, from, to, &p.derivative(i).truncate(base_trunc));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearEntryJson {
    pub base: usize,
    pub from: [usize; 2],
    pub to: usize,
    pub coeff_poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearMapFormJson {
    pub n: usize,
    pub base_trunc: usize,
    pub entries: Vec<BilinearEntryJson>,
}

impl BilinearMapForm {
    pub fn zero(n: usize, base_trunc: usize) -> Self {
        BilinearMapForm {
            n,
            base_trunc,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_trunc(&self) -> usize {
        self.base_trunc
    }

    pub fn entries(&self) -> &BTreeMap<EntryKey, BasePoly> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, base: usize, from: (usize, usize), to: usize) -> BasePoly {
        self.entries
            .get(&(base, from, to))
            .cloned()
            .unwrap_or_else(|| BasePoly::zero(self.n))
    }

    pub fn add(&mut self, base: usize, from: (usize, usize), to: usize, p: &BasePoly) {
        if p.is_zero() {
            return;
        }
        let key = (base, from, to);
        let slot = self
            .entries
            .entry(key)
            .or_insert_with(|| BasePoly::zero(self.n));
        slot.add_assign(p);
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    fn check(&self, other: &BilinearMapForm) -> Result<()> {
        if self.n != other.n || self.base_trunc != other.base_trunc {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, B={}) vs (n={}, B={})",
                self.n, self.base_trunc, other.n, other.base_trunc
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &BilinearMapForm) -> Result<BilinearMapForm> {
        self.check(other)?;
        let mut r = self.clone();
        for (&(i, from, to), p) in &other.entries {
            r.add(i, from, to, p);
        }
        Ok(r)
    }

    pub fn to_json(&self) -> BilinearMapFormJson {
        BilinearMapFormJson {
            n: self.n,
            base_trunc: self.base_trunc,
            entries: self
                .entries
                .iter()
                .map(|(&(i, (j, k), l), p)| BilinearEntryJson {
                    base: i + 1,
                    from: [j + 1, k + 1],
                    to: l + 1,
                    coeff_poly: p.to_text("b"),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &BilinearMapFormJson) -> Result<Self> {
        let mut r = BilinearMapForm::zero(j.n, j.base_trunc);
        for e in &j.entries {
            let idx = |v: usize| crate::text::check_index(v, j.n);
            let p = BasePoly::parse(&e.coeff_poly, "b", j.n)?.truncate(j.base_trunc);
            r.add(idx(e.base)?, (idx(e.from[0])?, idx(e.from[1])?), idx(e.to)?, &p);
        }
        Ok(r)
    }
}

/// Reads off the fiber-degree-2 part of `D(ξ_l)` for every `l`.
pub fn omega2_extract(c: &ConnectionData) -> BilinearMapForm {
    let mut out = BilinearMapForm::zero(c.n(), c.base_trunc());
    for l in 0..c.n() {
        for ((f, w), p) in c.nabla(1, l).terms() {
            debug_assert_eq!(f.degree(), 1);
            let i = f.indices().next().expect("one-form");
            out.add(i, (w.at(0), w.at(1)), l, p);
        }
    }
    out
}

/// `a − b`, entrywise.
pub fn cech_difference(a: &BilinearMapForm, b: &BilinearMapForm) -> Result<BilinearMapForm> {
    a.check(b)?;
    let mut r = a.clone();
    for (&(i, from, to), p) in &b.entries {
        r.add(i, from, to, &p.neg());
    }
    Ok(r)
}

/// Verdict of [`coboundary_solve`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coboundary {
    Witness(BilinearMapFunction),
    /// No `g` with entries of degree `<= bound` has `dg = δ`.
    NotCoboundaryWithinBounds { bound: usize },
}

/// Solves `dg = δ` for `g` with polynomial entries of degree
/// `<= base_deg_max`. Each `(from, to)` block is an independent system.
pub fn coboundary_solve(delta: &BilinearMapForm, base_deg_max: usize) -> Result<Coboundary> {
    coboundary_solve_with(delta, base_deg_max, Execution::default())
}

/// `(from, to)` pair of a bilinear-map entry.
type Block = ((usize, usize), usize);

pub fn coboundary_solve_with(
    delta: &BilinearMapForm,
    base_deg_max: usize,
    exec: Execution,
) -> Result<Coboundary> {
    let n = delta.n;
    let monos = Monomial::all_up_to(n, base_deg_max);
    check_cap(Some(monos.len()), enumeration_cap())?;
    let mut blocks: BTreeMap<Block, Vec<(usize, &BasePoly)>> = BTreeMap::new();
    for (&(i, from, to), p) in &delta.entries {
        blocks.entry((from, to)).or_default().push((i, p));
    }
    let blocks: Vec<_> = blocks.into_iter().collect();
    // equation rows are (form index i, monomial) pairs
    let row_of = |i: usize, m: &Monomial, index: &mut BTreeMap<(usize, Monomial), usize>| {
        let next = index.len();
        *index.entry((i, m.clone())).or_insert(next)
    };
    let solved = exec.map(&blocks, |(key, rhs)| {
        let mut index = BTreeMap::new();
        let mut elim = TrackedElimination::new();
        for (j, m) in monos.iter().enumerate() {
            let p = BasePoly::monomial(m.clone(), num_traits::One::one());
            let mut col = SparseVec::new();
            for i in 0..n {
                for (dm, c) in p.derivative(i).terms() {
                    let r = row_of(i, dm, &mut index);
                    col.add_at(r, c.clone());
                }
            }
            elim.push(&col, SparseVec::unit(j));
        }
        let mut b = SparseVec::new();
        for (i, p) in rhs {
            for (m, c) in p.terms() {
                let r = row_of(*i, m, &mut index);
                b.add_at(r, c.clone());
            }
        }
        elim.solve(&b).map(|x| {
            let mut g = BasePoly::zero(n);
            for (j, c) in &x.0 {
                g.add_term(monos[*j].clone(), c.clone());
            }
            (*key, g)
        })
    });
    let mut g = BilinearMapFunction::zero(n);
    for s in solved {
        match s {
            Some(((from, to), p)) => g.set(from, to, p),
            None => {
                return Ok(Coboundary::NotCoboundaryWithinBounds {
                    bound: base_deg_max,
                })
            }
        }
    }
    if !verify_witness(&g, delta) {
        return Err(Error::Invalid("coboundary witness failed re-verification".into()));
    }
    Ok(Coboundary::Witness(g))
}

/// Re-checks `dg = δ` by direct differentiation.
pub fn verify_witness(g: &BilinearMapFunction, delta: &BilinearMapForm) -> bool {
    let dg = g.differential(usize::MAX);
    let mut full = BilinearMapForm::zero(delta.n, usize::MAX);
    for (&(i, from, to), p) in &delta.entries {
        full.add(i, from, to, p);
    }
    dg.entries == full.entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{gauge_connection, Gauge};
    use crate::dga::DgaElement;

    fn poly(t: &str, n: usize) -> BasePoly {
        BasePoly::parse(t, "b", n).unwrap()
    }

    #[test]
    fn tautological_is_zero() {
        assert!(omega2_extract(&ConnectionData::tautological(2, 3, 3)).is_zero());
    }

    #[test]
    fn gauged_has_entry_and_witness() {
        let c = ConnectionData::tautological(1, 4, 3);
        let g = Gauge::new(
            vec![poly("b1 + b1^2", 1)],
            vec![DgaElement::parse("xi1^2", 1, 5, 4).unwrap()],
        )
        .unwrap();
        let w = omega2_extract(&gauge_connection(&c, &g).unwrap());
        assert!(!w.is_zero());
        let diff = cech_difference(&w, &BilinearMapForm::zero(1, 3)).unwrap();
        assert_eq!(diff, w);
        match coboundary_solve(&w, 4).unwrap() {
            Coboundary::Witness(g) => assert!(verify_witness(&g, &w)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_and_exact_inputs() {
        let z = BilinearMapForm::zero(2, 3);
        assert_eq!(coboundary_solve(&z, 2).unwrap(), Coboundary::Witness(BilinearMapFunction::zero(2)));
        let mut g0 = BilinearMapFunction::zero(2);
        g0.set((0, 1), 1, poly("b1^2*b2 - 3*b2", 2));
        let d = g0.differential(3);
        match coboundary_solve(&d, 3).unwrap() {
            Coboundary::Witness(g) => assert_eq!(g.differential(3), d),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_closed_form_has_no_witness() {
        let mut d = BilinearMapForm::zero(2, 3);
        d.add(0, (0, 0), 0, &poly("b2", 2));
        assert_eq!(
            coboundary_solve(&d, 3).unwrap(),
            Coboundary::NotCoboundaryWithinBounds { bound: 3 }
        );
    }

    #[test]
    fn antisymmetry() {
        let mut a = BilinearMapForm::zero(2, 2);
        a.add(1, (0, 1), 0, &poly("b1", 2));
        let mut b = BilinearMapForm::zero(2, 2);
        b.add(0, (1, 1), 1, &poly("2", 2));
        let ab = cech_difference(&a, &b).unwrap();
        let ba = cech_difference(&b, &a).unwrap();
        assert!(ab.sum(&ba).unwrap().is_zero());
    }
}
