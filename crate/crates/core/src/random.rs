//! Seeded random inputs for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aut::NCAutomorphism;
use crate::chart::Gauge;
use crate::comm::{BasePoly, Monomial};
use crate::der::NCDerivation;
use crate::dga::DgaElement;
use crate::form::FormIdx;
use crate::linalg::invert_matrix;
use crate::series::NCSeries;
use crate::text::Q;
use crate::word::Word;

pub const DEFAULT_SEED: u64 = 0x5eed_d15c;

/// Deterministic generator of small random algebraic objects.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn coefficient(&mut self) -> Q {
        let num: i64 = *[-3, -2, -1, 1, 2, 3].choose(&mut self.rng).unwrap();
        let den: i64 = *[1, 1, 1, 2, 3].choose(&mut self.rng).unwrap();
        Q::new(num.into(), den.into())
    }

    pub fn word(&mut self, n: usize, min_degree: usize, max_degree: usize) -> Word {
        let d = self.rng.gen_range(min_degree..=max_degree);
        Word::from_letters((0..d).map(|_| self.rng.gen_range(0..n)))
    }

    /// About `terms` random terms with degrees in `min_degree..=trunc`.
    pub fn series(&mut self, n: usize, trunc: usize, min_degree: usize, terms: usize) -> NCSeries {
        let mut s = NCSeries::zero(n, trunc);
        if min_degree > trunc {
            return s;
        }
        for _ in 0..terms {
            let w = self.word(n, min_degree, trunc);
            let c = self.coefficient();
            s = s
                .add(&NCSeries::monomial(n, trunc, w, c))
                .expect("same shape");
        }
        s
    }

    pub fn invertible_matrix(&mut self, n: usize) -> Vec<Vec<Q>> {
        loop {
            let m: Vec<Vec<Q>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Q::from_integer(self.rng.gen_range(-2i64..=2).into()))
                        .collect()
                })
                .collect();
            if invert_matrix(&m).is_some() {
                return m;
            }
        }
    }

    /// Random invertible linear part plus a random tail of degree `>= 2`.
    pub fn automorphism(&mut self, n: usize, trunc: usize, tail_terms: usize) -> NCAutomorphism {
        let lin = self.invertible_matrix(n);
        let images = (0..n)
            .map(|i| {
                let mut s = self.series(n, trunc, 2, tail_terms);
                for (j, c) in lin[i].iter().enumerate() {
                    s = s
                        .add(&NCSeries::monomial(n, trunc, Word::letter(j), c.clone()))
                        .expect("same shape");
                }
                s
            })
            .collect();
        NCAutomorphism::new(images).expect("linear part is invertible")
    }

    /// Images with degrees in `min_degree..=trunc`.
    pub fn derivation(&mut self, n: usize, trunc: usize, min_degree: usize, terms: usize) -> NCDerivation {
        NCDerivation::new((0..n).map(|_| self.series(n, trunc, min_degree, terms)).collect())
            .expect("same shape")
    }

    /// Images of degree `<= max_degree`, stored at truncation `trunc`.
    pub fn polynomial_derivation(
        &mut self,
        n: usize,
        trunc: usize,
        max_degree: usize,
        terms: usize,
    ) -> NCDerivation {
        let images = (0..n)
            .map(|_| {
                let s = self.series(n, max_degree, 0, terms);
                NCSeries::from_terms(n, trunc, s.terms().iter().map(|(w, c)| (w.clone(), c.clone())))
                    .expect("letters in range")
            })
            .collect();
        NCDerivation::new(images).expect("same shape")
    }

    pub fn poly(&mut self, n: usize, min_degree: usize, max_degree: usize, terms: usize) -> BasePoly {
        let mut p = BasePoly::zero(n);
        for _ in 0..terms {
            let d = self.rng.gen_range(min_degree..=max_degree);
            let mut m = Monomial::one(n);
            for _ in 0..d {
                m.0[self.rng.gen_range(0..n)] += 1;
            }
            p.add_term(m, self.coefficient());
        }
        p
    }

    /// `φ_i = b_i +` quadratic terms; tails are fiber-degree-2 terms with
    /// coefficients of base degree `<= 1`.
    pub fn gauge(&mut self, n: usize) -> Gauge {
        let phi = (0..n)
            .map(|i| {
                let mut p = self.poly(n, 2, 2, 2);
                p.add_term(Monomial::var(n, i), Q::from_integer(1.into()));
                p
            })
            .collect();
        let tail = (0..n)
            .map(|_| {
                let mut e = DgaElement::zero(n, 2, 1);
                for _ in 0..2 {
                    let w = self.word(n, 2, 2);
                    let p = self.poly(n, 0, 1, 2);
                    e.add_term(FormIdx::ONE, w, p);
                }
                e
            })
            .collect();
        Gauge::new(phi, tail).expect("Jacobian at the origin is the identity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let a = Sampler::new(7).automorphism(2, 4, 3);
        let b = Sampler::new(7).automorphism(2, 4, 3);
        assert_eq!(a, b);
    }
}
