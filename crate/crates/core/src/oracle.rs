//! Brute-force reference implementations for cross-checking.
//!
//! Everything here is dense, single-threaded and deliberately naive: words
//! are plain `Vec<usize>`, vectors are dense `Vec<Q>`, and elimination is
//! textbook Gaussian elimination. Nothing here calls the sparse kernels it
//! is used to check. Sizes are capped at [`ORACLE_CAP`] words per degree.

use num_traits::{One, Zero};

use crate::comm::CommPoly;
use crate::der::NCDerivation;
use crate::error::{Error, Result};
use crate::lcs::{DimensionRow, DimensionTable};
use crate::limits::ORACLE_CAP;
use crate::series::NCSeries;
use crate::text::Q;

/// A dense vector over all `n^d` words of degree `d`, in lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseSlice {
    pub n: usize,
    pub degree: usize,
    pub coords: Vec<Q>,
}

fn power(n: usize, d: usize) -> usize {
    let mut p = 1usize;
    for _ in 0..d {
        p *= n;
    }
    p
}

fn guard(n: usize, d: usize) -> Result<()> {
    let mut p = 1usize;
    for _ in 0..d {
        p = p.saturating_mul(n);
    }
    if p > ORACLE_CAP {
        return Err(Error::CapExceeded {
            needed: p,
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

/// Letters of the `r`-th word of degree `d`.
fn word_at(n: usize, d: usize, r: usize) -> Vec<usize> {
    let mut letters = vec![0; d];
    let mut r = r;
    for k in (0..d).rev() {
        letters[k] = r % n;
        r /= n;
    }
    letters
}

fn index_of(n: usize, letters: &[usize]) -> usize {
    let mut idx = 0;
    for &l in letters {
        idx = idx * n + l;
    }
    idx
}

/// Index among all words of degree `<= max`, degree blocks in order.
fn graded_index(n: usize, letters: &[usize]) -> usize {
    let mut offset = 0;
    for e in 0..letters.len() {
        offset += power(n, e);
    }
    offset + index_of(n, letters)
}

impl DenseSlice {
    pub fn zero(n: usize, degree: usize) -> Self {
        DenseSlice {
            n,
            degree,
            coords: vec![Q::zero(); power(n, degree)],
        }
    }

    pub fn unit(n: usize, letters: &[usize]) -> Self {
        let mut s = DenseSlice::zero(n, letters.len());
        s.coords[index_of(n, letters)] = Q::one();
        s
    }

    /// Concatenation product of homogeneous elements.
    pub fn times(&self, other: &DenseSlice) -> DenseSlice {
        let mut out = DenseSlice::zero(self.n, self.degree + other.degree);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let wa = word_at(self.n, self.degree, i);
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend(word_at(self.n, other.degree, j));
                out.coords[index_of(self.n, &w)] += a * b;
            }
        }
        out
    }

    pub fn minus(&self, other: &DenseSlice) -> DenseSlice {
        DenseSlice {
            n: self.n,
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Reduces `rows` to a list of independent rows spanning the same space.
pub fn dense_basis(rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows {
        for (b, &p) in basis.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone() / &b[p];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            basis.push(r);
            pivots.push(p);
        }
    }
    basis
}

pub fn dense_rank(rows: Vec<Vec<Q>>) -> usize {
    dense_basis(rows).len()
}

fn span_of(slices: Vec<DenseSlice>) -> Vec<DenseSlice> {
    let (n, degree) = match slices.first() {
        Some(s) => (s.n, s.degree),
        None => return Vec::new(),
    };
    dense_basis(slices.into_iter().map(|s| s.coords).collect())
        .into_iter()
        .map(|coords| DenseSlice { n, degree, coords })
        .collect()
}

/// `dim M_k` slices by two-sided closure: `M_k(d)` is spanned by `L_k(d)`,
/// `x_i · M_k(d−1)` and `M_k(d−1) · x_i`.
pub fn oracle_ideal_dims(n: usize, kmax: usize, dmax: usize) -> Result<Vec<Vec<usize>>> {
    guard(n, dmax)?;
    let words_of = |d: usize| -> Vec<DenseSlice> {
        (0..power(n, d))
            .map(|r| DenseSlice::unit(n, &word_at(n, d, r)))
            .collect()
    };
    let letters: Vec<DenseSlice> = (0..n).map(|i| DenseSlice::unit(n, &[i])).collect();
    // lower[d] holds a basis of L_k(d) for the current k
    let mut lower: Vec<Vec<DenseSlice>> = (0..=dmax).map(words_of).collect();
    let mut out = Vec::new();
    for k in 1..=kmax {
        if k > 1 {
            let prev = lower.clone();
            for d in 0..=dmax {
                let mut gens = Vec::new();
                for e in 1..d {
                    for w in words_of(e) {
                        for v in &prev[d - e] {
                            gens.push(w.times(v).minus(&v.times(&w)));
                        }
                    }
                }
                lower[d] = span_of(gens);
            }
        }
        let mut ideal: Vec<Vec<DenseSlice>> = Vec::new();
        let mut dims = Vec::new();
        for d in 0..=dmax {
            let mut gens = lower[d].clone();
            if d > 0 {
                for m in &ideal[d - 1] {
                    for x in &letters {
                        gens.push(x.times(m));
                        gens.push(m.times(x));
                    }
                }
            }
            let basis = span_of(gens);
            if d > 0 {
                dims.push(basis.len());
            }
            ideal.push(basis);
        }
        out.push(dims);
    }
    Ok(out)
}

/// Reference `N_k = M_k / M_{k+1}` table, same layout as the fast one.
pub fn oracle_lcs_dims(n: usize, kmax: usize, dmax: usize) -> Result<DimensionTable> {
    let m = oracle_ideal_dims(n, kmax + 1, dmax)?;
    Ok(DimensionTable {
        n,
        rows: (0..kmax)
            .map(|k| DimensionRow {
                k: k + 1,
                dims: m[k].iter().zip(&m[k + 1]).map(|(a, b)| a - b).collect(),
            })
            .collect(),
    })
}

/// `δ(word)` by substituting each letter's image in turn, as a dense vector
/// over all words of degree `<= trunc` (degree blocks, lex inside).
pub fn oracle_leibniz_apply(delta: &NCDerivation, word: &[usize]) -> Result<Vec<Q>> {
    let n = delta.n();
    let trunc = delta.trunc();
    guard(n, trunc)?;
    let len: usize = (0..=trunc).map(|e| power(n, e)).sum();
    let mut out = vec![Q::zero(); len];
    for pos in 0..word.len() {
        let image = &delta.images()[word[pos]];
        for (u, c) in image.terms() {
            let mut w: Vec<usize> = word[..pos].to_vec();
            w.extend(u.letters());
            w.extend_from_slice(&word[pos + 1..]);
            if w.len() <= trunc {
                out[graded_index(n, &w)] += c;
            }
        }
    }
    Ok(out)
}

/// A series as a dense vector in the layout of [`oracle_leibniz_apply`].
pub fn dense_series(s: &NCSeries) -> Vec<Q> {
    let n = s.n();
    let len: usize = (0..=s.trunc()).map(|e| power(n, e)).sum();
    let mut out = vec![Q::zero(); len];
    for (w, c) in s.terms() {
        let letters: Vec<usize> = w.letters().collect();
        out[graded_index(n, &letters)] += c;
    }
    out
}

/// Expands `a·b` term by term over explicit letter lists.
pub fn oracle_product(a: &NCSeries, b: &NCSeries) -> Vec<Q> {
    let n = a.n();
    let trunc = a.trunc();
    let len: usize = (0..=trunc).map(|e| power(n, e)).sum();
    let mut out = vec![Q::zero(); len];
    for (wa, ca) in a.terms() {
        for (wb, cb) in b.terms() {
            let mut w: Vec<usize> = wa.letters().collect();
            w.extend(wb.letters());
            if w.len() <= trunc {
                out[graded_index(n, &w)] += ca * cb;
            }
        }
    }
    out
}

/// Dimensions of `k[x1..xn] / (gens)` in degrees `0..=dmax`, from the span
/// of all monomial multiples of the generators.
pub fn oracle_commutative_quotient_dims(n: usize, gens: &[CommPoly], dmax: usize) -> Vec<usize> {
    // exponent vectors of total degree <= dmax, listed degree by degree
    let mut monos: Vec<Vec<u32>> = Vec::new();
    for d in 0..=dmax {
        let mut cur = vec![0u32; n];
        fn fill(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                fill(i + 1, left - e, cur, out);
            }
        }
        if n > 0 {
            fill(0, d as u32, &mut cur, &mut monos);
        }
    }
    let pos = |e: &[u32]| monos.iter().position(|m| m.as_slice() == e);
    let mut rows = Vec::new();
    for g in gens {
        for shift in &monos {
            let mut row = vec![Q::zero(); monos.len()];
            for (m, c) in g.terms() {
                let e: Vec<u32> = m.0.iter().zip(shift).map(|(a, b)| a + b).collect();
                if e.iter().sum::<u32>() as usize <= dmax {
                    row[pos(&e).expect("listed")] += c;
                }
            }
            rows.push(row);
        }
    }
    // pivots of an echelon basis sit at each row's lowest-degree term
    let basis = dense_basis(rows);
    let mut dims: Vec<usize> = (0..=dmax)
        .map(|d| monos.iter().filter(|m| m.iter().sum::<u32>() as usize == d).count())
        .collect();
    for r in &basis {
        let p = r.iter().position(|x| !x.is_zero()).expect("nonzero row");
        dims[monos[p].iter().sum::<u32>() as usize] -= 1;
    }
    dims
}

/// `D(ξ_w)` for the tautological connection: each letter in turn becomes
/// its one-form. Returns `(form index, remaining letters, coefficient)`.
pub fn oracle_tautological_d(word: &[usize]) -> Vec<(usize, Vec<usize>, Q)> {
    let mut out: Vec<(usize, Vec<usize>, Q)> = Vec::new();
    for pos in 0..word.len() {
        let mut rest = word[..pos].to_vec();
        rest.extend_from_slice(&word[pos + 1..]);
        match out.iter_mut().find(|(f, w, _)| *f == word[pos] && *w == rest) {
            Some(entry) => entry.2 += Q::one(),
            None => out.push((word[pos], rest, Q::one())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_generator_is_commutative() {
        let m = oracle_ideal_dims(1, 2, 5).unwrap();
        assert_eq!(m[1], vec![0; 5]);
    }

    #[test]
    fn commutator_line() {
        let m = oracle_ideal_dims(2, 2, 2).unwrap();
        assert_eq!(m[1][1], 1);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(oracle_ideal_dims(2, 2, 13), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn commutative_quotient() {
        let x1 = CommPoly::var(2, 0);
        assert_eq!(oracle_commutative_quotient_dims(2, &[x1], 4), vec![1; 5]);
        assert_eq!(oracle_commutative_quotient_dims(2, &[], 3), vec![1, 2, 3, 4]);
    }
}
