//! Derivations of the truncated free algebra.
//!
//! A derivation is determined by the images of the generators and acts on
//! words by the Leibniz rule. Constant terms are allowed; they make the
//! derivation lower degree and rule out exponentiation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::aut::NCAutomorphism;
use crate::error::{Error, Result};
use crate::linalg::mat_mul;
use crate::series::{add_to, NCSeries};
use crate::text::Q;
use crate::word::{count_up_to, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCDerivation {
    images: Vec<NCSeries>,
}

impl NCDerivation {
    pub fn new(images: Vec<NCSeries>) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::Invalid("a derivation needs at least one image".into()))?;
        if images.len() != first.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                first.n()
            )));
        }
        for img in &images {
            first.check(img)?;
        }
        Ok(NCDerivation { images })
    }

    pub fn zero(n: usize, trunc: usize) -> Self {
        NCDerivation {
            images: vec![NCSeries::zero(n, trunc); n],
        }
    }

    /// The basis derivation `x_i ↦ w`, other generators to zero.
    pub fn elementary(n: usize, trunc: usize, i: usize, w: Word) -> Self {
        let mut d = NCDerivation::zero(n, trunc);
        d.images[i] = NCSeries::monomial(n, trunc, w, Q::one());
        d
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn trunc(&self) -> usize {
        self.images[0].trunc()
    }

    pub fn images(&self) -> &[NCSeries] {
        &self.images
    }

    /// True when no image has a constant term.
    pub fn is_augmented(&self) -> bool {
        self.images.iter().all(|s| s.constant_term().is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(NCSeries::is_zero)
    }

    /// The weight-`m` part: image components of degree `m + 1`.
    pub fn weight_component(&self, m: usize) -> NCDerivation {
        NCDerivation {
            images: self.images.iter().map(|s| s.homogeneous(m + 1)).collect(),
        }
    }

    fn check(&self, other: &NCDerivation) -> Result<()> {
        self.images[0].check(&other.images[0])
    }

    pub fn add(&self, other: &NCDerivation) -> Result<NCDerivation> {
        self.check(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(NCDerivation { images })
    }

    pub fn scale(&self, s: &Q) -> NCDerivation {
        NCDerivation {
            images: self.images.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// Leibniz extension applied to `a`, truncated.
    pub fn apply(&self, a: &NCSeries) -> Result<NCSeries> {
        self.images[0].check(a)?;
        let trunc = a.trunc();
        let mut out = BTreeMap::new();
        for (w, c) in a.terms() {
            for pos in 0..w.degree() {
                for (u, cu) in self.images[w.at(pos)].terms() {
                    if w.degree() - 1 + u.degree() > trunc {
                        break;
                    }
                    add_to(&mut out, w.splice(pos, pos + 1, u), c * cu);
                }
            }
        }
        Ok(NCSeries::from_map(a.n(), trunc, out))
    }

    /// `[δ, ε](x_i) = δ(ε(x_i)) − ε(δ(x_i))`.
    pub fn bracket(&self, other: &NCDerivation) -> Result<NCDerivation> {
        self.check(other)?;
        let images = (0..self.n())
            .map(|i| self.apply(&other.images[i])?.sub(&other.apply(&self.images[i])?))
            .collect::<Result<_>>()?;
        Ok(NCDerivation { images })
    }

    /// `exp(δ)(x_i) = Σ δ^m(x_i) / m!`.
    ///
    /// Requires zero constant terms and a nilpotent linear part; then `δ` is
    /// nilpotent on the truncated algebra and the sum is finite.
    pub fn exp(&self) -> Result<NCAutomorphism> {
        let (n, trunc) = (self.n(), self.trunc());
        if let Some(i) = self.images.iter().position(|s| !s.constant_term().is_zero()) {
            return Err(Error::NonNilpotentAtTruncation(format!(
                "image {} has a constant term",
                i + 1
            )));
        }
        let lin: Vec<Vec<Q>> = self
            .images
            .iter()
            .map(|s| (0..n).map(|j| s.coeff(&Word::letter(j))).collect())
            .collect();
        let mut pow = lin.clone();
        for _ in 1..n {
            pow = mat_mul(&pow, &lin);
        }
        if pow.iter().flatten().any(|c| !c.is_zero()) {
            return Err(Error::NonNilpotentAtTruncation(
                "linear part is not nilpotent".into(),
            ));
        }
        let max_steps = count_up_to(n, trunc) + 1;
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut term = NCSeries::generator(n, trunc, i);
            let mut sum = term.clone();
            let mut m = 1u64;
            while !term.is_zero() {
                if m as usize > max_steps {
                    return Err(Error::NonNilpotentAtTruncation(format!(
                        "powers on x{} do not vanish",
                        i + 1
                    )));
                }
                term = self.apply(&term)?.scale(&Q::new(1.into(), m.into()));
                sum = sum.add(&term)?;
                m += 1;
            }
            images.push(sum);
        }
        NCAutomorphism::new(images)
    }

    /// One series per line.
    pub fn parse(text: &str, n: usize, trunc: usize) -> Result<Self> {
        NCDerivation::new(crate::aut::parse_lines(text, n, trunc)?)
    }
}

impl fmt::Display for NCDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{img}")?;
        }
        Ok(())
    }
}

/// Basis of the weight-`m` derivations: `x_i ↦ w` for every generator `i` and
/// word `w` of degree `m + 1`.
pub fn weight_basis(n: usize, m: usize, trunc: usize) -> Vec<NCDerivation> {
    let words = Word::all_of_degree(n, m + 1);
    (0..n)
        .flat_map(|i| {
            words
                .iter()
                .map(move |w| NCDerivation::elementary(n, trunc, i, w.clone()))
        })
        .collect()
}

/// Dimension of the weight-`m` derivations, by enumerating their basis.
pub fn der_graded_dim(n: usize, m: usize) -> usize {
    weight_basis(n, m, m + 1).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn der(text: &str, n: usize, trunc: usize) -> NCDerivation {
        NCDerivation::parse(text, n, trunc).unwrap()
    }

    fn s(t: &str, n: usize, trunc: usize) -> NCSeries {
        NCSeries::parse(t, n, trunc).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(der("1\n0", 2, 3).apply(&s("x1*x2", 2, 3)).unwrap(), s("x2", 2, 3));
        assert_eq!(der("x1^2", 1, 4).apply(&s("x1^2", 1, 4)).unwrap(), s("2*x1^3", 1, 4));
        assert_eq!(
            der("x2\n0", 2, 3).apply(&s("x1*x2*x1", 2, 3)).unwrap(),
            s("x2^2*x1 + x1*x2^2", 2, 3)
        );
    }

    #[test]
    fn bracket_examples() {
        let d = der("x1^2 + 1", 1, 4);
        assert!(d.bracket(&d).unwrap().is_zero());
        let b = der("1", 1, 4).bracket(&der("x1", 1, 4)).unwrap();
        assert_eq!(b, der("1", 1, 4));
    }

    #[test]
    fn exp_examples() {
        assert!(NCDerivation::zero(2, 3).exp().unwrap().is_identity());
        assert_eq!(
            der("x1^2", 1, 4).exp().unwrap(),
            NCAutomorphism::parse("x1 + x1^2 + x1^3 + x1^4", 1, 4).unwrap()
        );
        assert!(matches!(der("1", 1, 4).exp(), Err(Error::NonNilpotentAtTruncation(_))));
        assert!(matches!(der("x1", 1, 4).exp(), Err(Error::NonNilpotentAtTruncation(_))));
        // nilpotent linear part x1 ↦ x2
        let e = der("x2\n0", 2, 3).exp().unwrap();
        assert_eq!(e, NCAutomorphism::parse("x1 + x2\nx2", 2, 3).unwrap());
    }

    #[test]
    fn graded_dims() {
        assert_eq!(der_graded_dim(1, 0), 1);
        assert_eq!(der_graded_dim(2, 0), 4);
        assert_eq!(der_graded_dim(2, 1), 8);
        assert_eq!(der_graded_dim(3, 2), 81);
    }
}
