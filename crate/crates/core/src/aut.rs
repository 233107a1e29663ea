//! Augmented automorphisms of the truncated NC disk and of its commutative
//! shadow.

use std::fmt;

use num_traits::{One, Zero};

use crate::comm::{CommPoly, CommSeries, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{invert_matrix, mat_mul};
use crate::series::NCSeries;
use crate::text::Q;
use crate::word::Word;

/// An endomorphism `x_i ↦ images[i]` with zero constant terms and
/// invertible linear part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCAutomorphism {
    images: Vec<NCSeries>,
    linear: Vec<Vec<Q>>,
}

fn shared_shape(images: &[NCSeries]) -> Result<(usize, usize)> {
    let first = images
        .first()
        .ok_or_else(|| Error::Invalid("an automorphism needs at least one image".into()))?;
    let (n, trunc) = (first.n(), first.trunc());
    if images.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} images for {n} generators",
            images.len()
        )));
    }
    for img in images {
        first.check(img)?;
    }
    Ok((n, trunc))
}

impl NCAutomorphism {
    /// Validates and wraps generator images.
    pub fn new(images: Vec<NCSeries>) -> Result<Self> {
        let (n, _) = shared_shape(&images)?;
        for (i, img) in images.iter().enumerate() {
            if !img.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: i + 1 });
            }
        }
        let linear: Vec<Vec<Q>> = images
            .iter()
            .map(|img| (0..n).map(|j| img.coeff(&Word::letter(j))).collect())
            .collect();
        if invert_matrix(&linear).is_none() {
            return Err(Error::SingularLinearPart);
        }
        Ok(NCAutomorphism { images, linear })
    }

    pub fn identity(n: usize, trunc: usize) -> Self {
        NCAutomorphism::new((0..n).map(|i| NCSeries::generator(n, trunc, i)).collect())
            .expect("identity is valid")
    }

    /// `x_i ↦ Σ_j m[i][j] x_j`.
    pub fn linear(m: &[Vec<Q>], trunc: usize) -> Result<Self> {
        let n = m.len();
        let images = m
            .iter()
            .map(|row| {
                NCSeries::from_terms(
                    n,
                    trunc,
                    row.iter().enumerate().map(|(j, c)| (Word::letter(j), c.clone())),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        NCAutomorphism::new(images)
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

    /// Row `i` holds the degree-1 coefficients of image `i`.
    pub fn linear_part(&self) -> &[Vec<Q>] {
        &self.linear
    }

    pub fn apply(&self, a: &NCSeries) -> Result<NCSeries> {
        a.substitute(&self.images)
    }

    /// `compose(g, h).images[i] = h.images[i](g.images)`.
    pub fn compose(&self, h: &NCAutomorphism) -> Result<NCAutomorphism> {
        self.images[0].check(&h.images[0])?;
        let images = h
            .images
            .iter()
            .map(|img| img.substitute(&self.images))
            .collect::<Result<Vec<_>>>()?;
        Ok(NCAutomorphism {
            images,
            linear: mat_mul(&h.linear, &self.linear),
        })
    }

    /// Two-sided inverse, solved one degree at a time.
    pub fn invert(&self) -> Result<NCAutomorphism> {
        let (n, trunc) = (self.n(), self.trunc());
        let linv = invert_matrix(&self.linear).ok_or(Error::SingularLinearPart)?;
        let higher: Vec<NCSeries> = self.images.iter().map(|g| g.degree_at_least(2)).collect();
        let apply_linv = |v: &[NCSeries]| -> Vec<NCSeries> {
            (0..n)
                .map(|i| {
                    let mut acc = NCSeries::zero(n, trunc);
                    for (j, vj) in v.iter().enumerate() {
                        acc.add_scaled_assign(vj, &linv[i][j]);
                    }
                    acc
                })
                .collect()
        };
        let gens: Vec<NCSeries> = (0..n).map(|i| NCSeries::generator(n, trunc, i)).collect();
        let mut h = apply_linv(&gens);
        // g(h) = x needs L h + G(h) = x; degree d of G(h) only sees h below d
        for d in 2..=trunc {
            let tail: Vec<NCSeries> = higher
                .iter()
                .map(|g| g.substitute(&h).map(|s| s.homogeneous(d)))
                .collect::<Result<_>>()?;
            let corr = apply_linv(&tail);
            for (hi, ci) in h.iter_mut().zip(&corr) {
                hi.add_scaled_assign(ci, &-Q::one());
            }
        }
        Ok(NCAutomorphism { images: h, linear: linv })
    }

    pub fn abelianize(&self) -> CommAutomorphism {
        CommAutomorphism {
            images: self.images.iter().map(NCSeries::abelianize).collect(),
            linear: self.linear.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == NCAutomorphism::identity(self.n(), self.trunc())
    }

    /// One series per line.
    pub fn parse(text: &str, n: usize, trunc: usize) -> Result<Self> {
        NCAutomorphism::new(parse_lines(text, n, trunc)?)
    }
}

/// Non-empty lines of `text`, each parsed as a series.
pub fn parse_lines(text: &str, n: usize, trunc: usize) -> Result<Vec<NCSeries>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| NCSeries::parse(l, n, trunc))
        .collect()
}

impl fmt::Display for NCAutomorphism {
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

/// An augmented automorphism of the commutative truncated disk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommAutomorphism {
    images: Vec<CommSeries>,
    linear: Vec<Vec<Q>>,
}

impl CommAutomorphism {
    pub fn new(images: Vec<CommSeries>) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::Invalid("an automorphism needs at least one image".into()))?;
        let (n, trunc) = (first.n(), first.trunc());
        if images.len() != n || images.iter().any(|s| s.n() != n || s.trunc() != trunc) {
            return Err(Error::DimensionMismatch("inconsistent images".into()));
        }
        for (i, img) in images.iter().enumerate() {
            if !img.poly().constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: i + 1 });
            }
        }
        let linear: Vec<Vec<Q>> = images
            .iter()
            .map(|img| (0..n).map(|j| img.poly().coeff(&Monomial::var(n, j))).collect())
            .collect();
        if invert_matrix(&linear).is_none() {
            return Err(Error::SingularLinearPart);
        }
        Ok(CommAutomorphism { images, linear })
    }

    pub fn identity(n: usize, trunc: usize) -> Self {
        CommAutomorphism::new((0..n).map(|i| CommSeries::generator(n, trunc, i)).collect())
            .expect("identity is valid")
    }

    pub fn images(&self) -> &[CommSeries] {
        &self.images
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn trunc(&self) -> usize {
        self.images[0].trunc()
    }

    pub fn linear_part(&self) -> &[Vec<Q>] {
        &self.linear
    }

    pub fn compose(&self, h: &CommAutomorphism) -> Result<CommAutomorphism> {
        let images = h
            .images
            .iter()
            .map(|img| img.substitute(&self.images))
            .collect::<Result<Vec<_>>>()?;
        Ok(CommAutomorphism {
            images,
            linear: mat_mul(&h.linear, &self.linear),
        })
    }

    pub fn invert(&self) -> Result<CommAutomorphism> {
        let (n, trunc) = (self.n(), self.trunc());
        let linv = invert_matrix(&self.linear).ok_or(Error::SingularLinearPart)?;
        let higher: Vec<CommPoly> = self
            .images
            .iter()
            .map(|g| {
                let mut p = g.poly().clone();
                for j in 0..n {
                    p.add_term(Monomial::var(n, j), -g.poly().coeff(&Monomial::var(n, j)));
                }
                p
            })
            .collect();
        let apply_linv = |v: &[CommPoly]| -> Vec<CommPoly> {
            (0..n)
                .map(|i| {
                    let mut acc = CommPoly::zero(n);
                    for (j, vj) in v.iter().enumerate() {
                        acc.add_scaled(vj, &linv[i][j]);
                    }
                    acc
                })
                .collect()
        };
        let gens: Vec<CommPoly> = (0..n).map(|i| CommPoly::var(n, i)).collect();
        let base = apply_linv(&gens);
        let mut h = base.clone();
        for _ in 1..trunc {
            let tail: Vec<CommPoly> = higher.iter().map(|g| g.substitute(&h, Some(trunc))).collect();
            let corr = apply_linv(&tail);
            h = base.iter().zip(&corr).map(|(b, c)| b.sub(c)).collect();
        }
        Ok(CommAutomorphism {
            images: h.into_iter().map(|p| CommSeries::from_poly(p, trunc)).collect(),
            linear: linv,
        })
    }
}

impl fmt::Display for CommAutomorphism {
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
