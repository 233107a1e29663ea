//! Gelfand–Kazhdan forms on an affine chart and their gauge transforms.
//!
//! A [`GkForm`] assigns to each base direction `∂/∂b_j` a fiber derivation
//! `θ_j` with polynomial base coefficients; the induced connection is
//! `D = Σ_j db_j (∂/∂b_j + θ_j)`, i.e. `D(ξ_i) = Σ_j db_j · θ_j(ξ_i)`.
//!
//! A [`Gauge`] is a change of trivialization: new base coordinates
//! `b' = φ(b)` with `φ(0) = 0`, and new fiber coordinates
//! `η_i = Σ_k J_ik(b) ξ_k + tail_i(b, ξ)` where `J = ∂φ/∂b` and every tail
//! term has fiber degree at least 2. Tying the linear part to `J` keeps the
//! leading term of `D` equal to `db'_i`.

use num_traits::Zero;

use crate::aut::CommAutomorphism;
use crate::comm::{BasePoly, CommSeries, Monomial};
use crate::conn::ConnectionData;
use crate::dga::DgaElement;
use crate::error::{Error, Result};
use crate::form::FormIdx;
use crate::linalg::invert_matrix;
use crate::text::Q;
use crate::word::Word;

/// `θ[j][i] = θ_j(ξ_i)`, form-degree-0 elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GkForm {
    n: usize,
    fiber_trunc: usize,
    base_trunc: usize,
    theta: Vec<Vec<DgaElement>>,
}

impl GkForm {
    pub fn new(theta: Vec<Vec<DgaElement>>) -> Result<Self> {
        let n = theta.len();
        let first = theta
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::MalformedGk("empty form".into()))?;
        let (nt, bt) = (first.fiber_trunc(), first.base_trunc());
        for (j, row) in theta.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedGk(format!(
                    "each derivation needs {n} images"
                )));
            }
            for (i, e) in row.iter().enumerate() {
                first.check(e)?;
                if e.form_degrees().any(|p| p != 0) {
                    return Err(Error::MalformedGk("derivation images must be functions".into()));
                }
                let expected = if i == j { BasePoly::one(n) } else { BasePoly::zero(n) };
                if e.coeff(FormIdx::ONE, &Word::empty()) != expected {
                    return Err(Error::MalformedGk(format!(
                        "constant part of theta_{}(xi{}) must be {}",
                        j + 1,
                        i + 1,
                        u8::from(i == j)
                    )));
                }
            }
        }
        Ok(GkForm {
            n,
            fiber_trunc: nt,
            base_trunc: bt,
            theta,
        })
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

    /// `θ_j(ξ_i)`.
    pub fn theta(&self, j: usize, i: usize) -> &DgaElement {
        &self.theta[j][i]
    }

    pub fn rows(&self) -> &[Vec<DgaElement>] {
        &self.theta
    }
}

/// `θ_j = (ξ_i ↦ δ_ij)`: fiber translation matching base translation.
pub fn tautological_gk(n: usize, fiber_trunc: usize, base_trunc: usize) -> GkForm {
    let theta = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        DgaElement::constant(n, fiber_trunc, base_trunc, Q::from_integer(1.into()))
                    } else {
                        DgaElement::zero(n, fiber_trunc, base_trunc)
                    }
                })
                .collect()
        })
        .collect();
    GkForm {
        n,
        fiber_trunc,
        base_trunc,
        theta,
    }
}

/// `D(ξ_i) = Σ_j db_j θ_j(ξ_i)`; the constant parts must be `δ_ij`.
pub fn connection_from_gk(theta: &GkForm) -> Result<ConnectionData> {
    let (n, nt, bt) = (theta.n, theta.fiber_trunc, theta.base_trunc);
    for j in 0..n {
        for i in 0..n {
            let c = theta.theta[j][i].coeff(FormIdx::ONE, &Word::empty());
            let want = if i == j {
                BasePoly::one(n).truncate(bt)
            } else {
                BasePoly::zero(n)
            };
            if c != want {
                return Err(Error::MalformedGk(format!(
                    "constant part of theta_{}(xi{}) is {}, expected {}",
                    j + 1,
                    i + 1,
                    c.to_text("b"),
                    want.to_text("b")
                )));
            }
        }
    }
    let d_xi = (0..n)
        .map(|i| {
            let mut e = DgaElement::zero(n, nt, bt);
            for j in 0..n {
                let dbj = DgaElement::db(n, nt, bt, j);
                e.add_assign(&dbj.mul(&theta.theta[j][i]).expect("shapes agree"));
            }
            e
        })
        .collect();
    ConnectionData::new(d_xi)
}

/// Reads `θ_j(ξ_i)` back off as the `db_j` coefficient of `D(ξ_i)`.
pub fn gk_from_connection(c: &ConnectionData) -> GkForm {
    let n = c.n();
    let theta = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| c.images()[i].form_component(FormIdx::single(j)))
                .collect()
        })
        .collect();
    GkForm {
        n,
        fiber_trunc: c.fiber_trunc(),
        base_trunc: c.base_trunc(),
        theta,
    }
}

/// A change of trivialization `(φ, tail)`; see the module docs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gauge {
    phi: Vec<BasePoly>,
    tail: Vec<DgaElement>,
}

type PolyMatrix = Vec<Vec<BasePoly>>;

impl Gauge {
    pub fn new(phi: Vec<BasePoly>, tail: Vec<DgaElement>) -> Result<Self> {
        let n = phi.len();
        if n == 0 || tail.len() != n {
            return Err(Error::InvalidGauge(format!(
                "{} base images and {} fiber tails",
                n,
                tail.len()
            )));
        }
        for (i, p) in phi.iter().enumerate() {
            if p.nvars() != n {
                return Err(Error::InvalidGauge(format!("phi_{} has wrong variable count", i + 1)));
            }
            if !p.constant_term().is_zero() {
                return Err(Error::InvalidGauge(format!("phi_{} moves the origin", i + 1)));
            }
        }
        for (i, t) in tail.iter().enumerate() {
            if t.n() != n {
                return Err(Error::InvalidGauge(format!("tail_{} has wrong n", i + 1)));
            }
            if t.terms().keys().any(|(f, w)| *f != FormIdx::ONE || w.degree() < 2) {
                return Err(Error::InvalidGauge(format!(
                    "tail_{} must be a function of fiber degree >= 2",
                    i + 1
                )));
            }
        }
        let g = Gauge { phi, tail };
        let j0: Vec<Vec<Q>> = g
            .jacobian()
            .iter()
            .map(|r| r.iter().map(BasePoly::constant_term).collect())
            .collect();
        if invert_matrix(&j0).is_none() {
            return Err(Error::SingularJacobian);
        }
        Ok(g)
    }

    /// Base change only, fiber coordinates moved by the Jacobian.
    pub fn linear_lift(phi: Vec<BasePoly>) -> Result<Self> {
        let n = phi.len();
        let tail = vec![DgaElement::zero(n, 0, 0); n];
        Gauge::new(phi, tail)
    }

    pub fn identity(n: usize) -> Self {
        Gauge::linear_lift((0..n).map(|i| BasePoly::var(n, i)).collect()).expect("identity")
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[BasePoly] {
        &self.phi
    }

    pub fn tail(&self) -> &[DgaElement] {
        &self.tail
    }

    /// `J_ik = ∂φ_i/∂b_k`.
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.n();
        self.phi
            .iter()
            .map(|p| (0..n).map(|k| p.derivative(k)).collect())
            .collect()
    }

    /// The new fiber coordinates `η_i` as elements with the given bounds.
    pub fn psi(&self, fiber_trunc: usize, base_trunc: usize) -> Vec<DgaElement> {
        let n = self.n();
        let jac = self.jacobian();
        (0..n)
            .map(|i| {
                let mut e = self.tail[i].retruncate(fiber_trunc, base_trunc);
                for (k, jik) in jac[i].iter().enumerate() {
                    e.add_term(FormIdx::ONE, Word::letter(k), jik.clone());
                }
                e
            })
            .collect()
    }

    /// The gauge "first `self`, then `h`", exact to the precision needed for
    /// transforming connections truncated at `(fiber_trunc, base_trunc)`.
    pub fn then(&self, h: &Gauge, fiber_trunc: usize, base_trunc: usize) -> Result<Gauge> {
        if h.n() != self.n() {
            return Err(Error::DimensionMismatch("gauges of different rank".into()));
        }
        let (nt, bt) = (fiber_trunc + 1, base_trunc + 1);
        let phi: Vec<BasePoly> = h
            .phi
            .iter()
            .map(|p| p.substitute(&self.phi, Some(bt + 1)))
            .collect();
        let inner = self.psi(nt, bt);
        let psi: Vec<DgaElement> = h
            .psi(nt, bt)
            .iter()
            .map(|e| e.substitute_base(&self.phi).substitute_fiber(&inner))
            .collect::<Result<_>>()?;
        let n = self.n();
        let tail = psi
            .into_iter()
            .zip(&phi)
            .map(|(mut e, p)| {
                for k in 0..n {
                    e.add_term(FormIdx::ONE, Word::letter(k), p.derivative(k).neg());
                }
                e
            })
            .collect();
        Gauge::new(phi, tail)
    }
}

fn poly_mat_mul(a: &PolyMatrix, b: &PolyMatrix, bt: usize) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = BasePoly::zero(a[i][0].nvars());
                    for k in 0..n {
                        acc.add_assign(&a[i][k].mul_trunc(&b[k][j], Some(bt)));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse of a polynomial matrix with invertible constant part, as power
/// series truncated at base degree `bt`.
fn invert_poly_matrix(m: &PolyMatrix, bt: usize) -> Result<PolyMatrix> {
    let n = m.len();
    let nv = m[0][0].nvars();
    let c: Vec<Vec<Q>> = m
        .iter()
        .map(|r| r.iter().map(BasePoly::constant_term).collect())
        .collect();
    let cinv = invert_matrix(&c).ok_or(Error::SingularJacobian)?;
    let cinv_p: PolyMatrix = cinv
        .iter()
        .map(|r| r.iter().map(|q| BasePoly::constant(nv, q.clone())).collect())
        .collect();
    // m = c (1 + k) with k of positive base order; m^{-1} = Σ (−k)^t c^{-1}
    let higher: PolyMatrix = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|p| {
                    let mut q = p.clone();
                    q.add_term(Monomial::one(nv), -p.constant_term());
                    q
                })
                .collect()
        })
        .collect();
    let neg_k: PolyMatrix = poly_mat_mul(&cinv_p, &higher, bt)
        .into_iter()
        .map(|r| r.into_iter().map(|p| p.neg()).collect())
        .collect();
    let mut term = cinv_p.clone();
    let mut sum = cinv_p;
    for _ in 0..bt {
        term = poly_mat_mul(&neg_k, &term, bt);
        for i in 0..n {
            for j in 0..n {
                sum[i][j].add_assign(&term[i][j]);
            }
        }
    }
    Ok(sum)
}

/// The same flat structure expressed in the trivialization `g`.
pub fn gauge_connection(c: &ConnectionData, g: &Gauge) -> Result<ConnectionData> {
    let n = c.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "gauge of rank {} on a connection of rank {n}",
            g.n()
        )));
    }
    let (nt, bt) = (c.fiber_trunc(), c.base_trunc());
    let psi = g.psi(nt + 1, bt + 1);
    let jac: PolyMatrix = g
        .jacobian()
        .into_iter()
        .map(|r| r.into_iter().map(|p| p.truncate(bt)).collect())
        .collect();
    let jinv = invert_poly_matrix(&jac, bt)?;
    // ξ = χ(b, η) with ψ(b, χ) = η, solved by fixed point on the tail
    let tail: Vec<DgaElement> = g.tail.iter().map(|t| t.retruncate(nt, bt)).collect();
    let apply_jinv = |v: &[DgaElement]| -> Vec<DgaElement> {
        (0..n)
            .map(|i| {
                let mut acc = DgaElement::zero(n, nt, bt);
                for (k, vk) in v.iter().enumerate() {
                    acc.add_assign(&vk.scale_poly(&jinv[i][k]));
                }
                acc
            })
            .collect()
    };
    let eta: Vec<DgaElement> = (0..n).map(|i| DgaElement::fiber_gen(n, nt, bt, i)).collect();
    let mut chi = apply_jinv(&eta);
    for _ in 1..nt.max(1) {
        let t: Vec<DgaElement> = tail
            .iter()
            .map(|ti| ti.substitute_fiber(&chi))
            .collect::<Result<_>>()?;
        let rhs: Vec<DgaElement> = eta
            .iter()
            .zip(&t)
            .map(|(e, ti)| e.sub(ti))
            .collect::<Result<_>>()?;
        chi = apply_jinv(&rhs);
    }
    let phi_series: Vec<CommSeries> = g
        .phi
        .iter()
        .map(|p| CommSeries::from_poly(p.clone(), bt))
        .collect();
    let phi_inv: Vec<BasePoly> = CommAutomorphism::new(phi_series)?
        .invert()?
        .images()
        .iter()
        .map(|s| s.poly().clone())
        .collect();
    let mut d_eta = Vec::with_capacity(n);
    for psi_k in &psi {
        let dpsi = c.apply_d(psi_k)?;
        let h: Vec<DgaElement> = (0..n)
            .map(|l| dpsi.form_component(FormIdx::single(l)).substitute_fiber(&chi))
            .collect::<Result<_>>()?;
        let mut out = DgaElement::zero(n, nt, bt);
        #[allow(clippy::needless_range_loop)]
        for m in 0..n {
            let mut coeff = DgaElement::zero(n, nt, bt);
            for (l, hl) in h.iter().enumerate() {
                coeff.add_assign(&hl.scale_poly(&jinv[l][m]));
            }
            let coeff = coeff.substitute_base(&phi_inv);
            out.add_assign(&DgaElement::db(n, nt, bt, m).mul(&coeff)?);
        }
        d_eta.push(out);
    }
    ConnectionData::new(d_eta)
}

/// Gauge transform at the level of GK forms.
pub fn gauge_gk(theta: &GkForm, g: &Gauge) -> Result<GkForm> {
    let c = connection_from_gk(theta)?;
    Ok(gk_from_connection(&gauge_connection(&c, g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conn::Flatness;

    fn poly(t: &str, n: usize) -> BasePoly {
        BasePoly::parse(t, "b", n).unwrap()
    }

    fn el(t: &str, n: usize) -> DgaElement {
        DgaElement::parse(t, n, 6, 6).unwrap()
    }

    #[test]
    fn tautological_round_trip() {
        let t = tautological_gk(2, 3, 3);
        let c = connection_from_gk(&t).unwrap();
        assert_eq!(c, ConnectionData::tautological(2, 3, 3));
        assert_eq!(gk_from_connection(&c), t);
    }

    #[test]
    fn missing_constant_part_is_malformed() {
        let mut rows = tautological_gk(1, 3, 3).rows().to_vec();
        rows[0][0] = DgaElement::parse("xi1", 1, 3, 3).unwrap();
        assert!(matches!(GkForm::new(rows), Err(Error::MalformedGk(_))));
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let t = tautological_gk(2, 3, 3);
        assert_eq!(gauge_gk(&t, &Gauge::identity(2)).unwrap(), t);
    }

    #[test]
    fn base_change_with_linear_lift() {
        let c = ConnectionData::tautological(1, 4, 3);
        let g = Gauge::linear_lift(vec![poly("b1 + b1^2", 1)]).unwrap();
        let gc = gauge_connection(&c, &g).unwrap();
        assert!(gc.validate_twisted_shape().is_pass());
        assert_eq!(gc.flatness_check(), Flatness::Pass);
        assert!(!gc.nabla(0, 0).is_zero());
        assert!(gc.nabla(1, 0).is_zero());
    }

    #[test]
    fn quadratic_tail_gives_second_order_term() {
        let c = ConnectionData::tautological(1, 4, 3);
        let g = Gauge::new(vec![poly("b1 + b1^2", 1)], vec![el("xi1^2", 1)]).unwrap();
        let gc = gauge_connection(&c, &g).unwrap();
        assert!(gc.validate_twisted_shape().is_pass());
        assert_eq!(gc.flatness_check(), Flatness::Pass);
        assert!(!gc.nabla(1, 0).is_zero());
    }

    #[test]
    fn gauges_compose() {
        let c = ConnectionData::tautological(2, 3, 2);
        let g = Gauge::new(
            vec![poly("b1 + b2^2", 2), poly("b2 - b1*b2", 2)],
            vec![el("b2*xi1*xi2", 2), el("xi1^2", 2)],
        )
        .unwrap();
        let h = Gauge::new(
            vec![poly("2*b1", 2), poly("b2 + b1^2", 2)],
            vec![el("xi2*xi1", 2), el("0", 2)],
        )
        .unwrap();
        let step = gauge_connection(&gauge_connection(&c, &g).unwrap(), &h).unwrap();
        let once = gauge_connection(&c, &g.then(&h, 3, 2).unwrap()).unwrap();
        assert_eq!(step, once);
        assert_eq!(step.flatness_check(), Flatness::Pass);
    }

    #[test]
    fn singular_jacobian_rejected() {
        assert!(matches!(
            Gauge::linear_lift(vec![poly("b1^2", 1)]),
            Err(Error::SingularJacobian)
        ));
        assert!(matches!(
            Gauge::linear_lift(vec![poly("1 + b1", 1)]),
            Err(Error::InvalidGauge(_))
        ));
    }
}
