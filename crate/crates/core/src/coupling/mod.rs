//! Yukawa couplings: the `C_d` coefficient, the coupling ODE, its
//! normalization, the change of frame to `q` and instanton extraction.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{log_psi, q_param, socle, RecurrenceSpec, ThetaOperator};
use crate::series::{is_integral, moebius, rat, Poly, Rat, Series1};

/// `C_d = A_d / A_{d+1}` expanded to order `n`, where `d + 1` is the operator
/// order.
pub fn cd_series(op: &ThetaOperator, n: usize) -> Result<Series1> {
    if !op.classify().is_picard_fuchs {
        return Err(Error::NotPicardFuchs);
    }
    let z = op.to_zform();
    let d1 = z.order();
    if d1 == 0 {
        return Err(Error::Domain("operator has order 0".into()));
    }
    let num = Series1::from_poly(z.a(d1 - 1), n);
    let den = Series1::from_poly(z.a(d1), n);
    num.div(&den)
}

/// `W = W0 · exp(-(2/(d+1)) ∫ C_d dz/z)`, the solution of
/// `Θ W + (2/(d+1)) C_d W = 0` with `W(0) = W0`.
pub fn yukawa_w(op: &ThetaOperator, w0: &Rat, n: usize) -> Result<Series1> {
    if w0.is_zero() {
        return Err(Error::Domain("W0 must be nonzero".into()));
    }
    let c = cd_series(op, n)?;
    if !c.coeff(0).is_zero() {
        return Err(Error::Domain(format!(
            "C_d(0) = {} is nonzero; the operator is not MU",
            c.coeff(0)
        )));
    }
    let k = Rat::new((-2).into(), (op.order() as i64).into());
    Ok(c.integrate_dlog()?.scale(&k).exp()?.scale(w0))
}

/// `K_z = W / Φ_0²`.
pub fn k_z(w: &Series1, phi0: &Series1) -> Result<Series1> {
    w.div(&(phi0 * phi0))
}

/// `K_q = (K_z ∘ z(q)) · J^d` with `J = (Θ_q z)/z`, and `J` itself.
pub fn to_q_frame(kz: &Series1, z_of_q: &Series1, d: usize) -> Result<(Series1, Series1)> {
    let j = z_of_q.theta().div_z()?.div(&z_of_q.div_z()?)?;
    let composed = kz.compose(z_of_q)?;
    let order = composed.order().min(j.order());
    let kq = &composed.truncate(order) * &j.truncate(order).pow(d as u32);
    Ok((kq, j))
}

/// Every stage of the one-parameter pipeline for an MU operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YukawaFrame {
    pub dim: usize,
    pub phi0: Series1,
    pub psi: Series1,
    pub q_of_z: Series1,
    pub z_of_q: Series1,
    pub w: Series1,
    pub k_z: Series1,
    pub k_q: Series1,
    pub j: Series1,
}

impl YukawaFrame {
    /// Runs socle, logarithmic solution, mirror map, coupling and frame
    /// change. All outputs are valid to order `n`.
    pub fn compute(spec: &RecurrenceSpec, w0: &Rat, n: usize) -> Result<Self> {
        let op = spec.to_theta();
        let class = op.classify();
        if !class.is_picard_fuchs {
            return Err(Error::NotPicardFuchs);
        }
        let order = op.order();
        if order == 0 {
            return Err(Error::Domain("operator has order 0".into()));
        }
        let phi0 = socle(spec, Rat::one(), n)?;
        let psi = log_psi(spec, &phi0, n)?;
        let q = q_param(&phi0, &psi)?;
        let w = yukawa_w(&op, w0, n)?;
        let kz = k_z(&w, &phi0)?;
        let (kq, j) = to_q_frame(&kz, &q.z_of_q, order - 1)?;
        Ok(YukawaFrame {
            dim: order - 1,
            phi0,
            psi,
            q_of_z: q.q_of_z.truncate(n),
            z_of_q: q.z_of_q.truncate(n),
            w,
            k_z: kz,
            k_q: kq.truncate(n),
            j: j.truncate(n),
        })
    }
}

/// Instanton numbers read off `K_q = n_0 + Σ n_e e³ q^e / (1 - q^e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstantonReport {
    #[serde(serialize_with = "ser_rat")]
    pub n0: Rat,
    #[serde(serialize_with = "ser_rats")]
    pub gamma: Vec<Rat>,
    #[serde(serialize_with = "ser_rats")]
    pub n: Vec<Rat>,
    pub integral: Vec<bool>,
    pub nonnegative: Vec<bool>,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rats<S: serde::Serializer>(rs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

impl InstantonReport {
    pub fn all_integral(&self) -> bool {
        self.integral.iter().all(|&b| b)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.nonnegative.iter().all(|&b| b)
    }
}

/// Möbius inversion of the Lambert expansion up to degree `max_degree`.
/// Integrality and sign are recorded per entry, never raised.
pub fn instanton(kq: &Series1, d: usize, max_degree: usize) -> Result<InstantonReport> {
    if d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if max_degree > kq.order() {
        return Err(Error::Domain(format!(
            "K_q is known to order {} but degree {max_degree} was requested",
            kq.order()
        )));
    }
    let mut gamma = Vec::with_capacity(max_degree);
    let mut n = Vec::with_capacity(max_degree);
    for e in 1..=max_degree {
        let mut g = Rat::zero();
        for f in (1..=e).filter(|f| e % f == 0) {
            let mu = moebius((e / f) as u64);
            if mu != 0 {
                g += kq.coeff(f) * rat(mu);
            }
        }
        n.push(&g / rat((e * e * e) as i64));
        gamma.push(g);
    }
    Ok(InstantonReport {
        n0: kq.coeff(0).clone(),
        integral: n.iter().map(is_integral).collect(),
        nonnegative: n.iter().map(|x| !x.is_negative()).collect(),
        gamma,
        n,
    })
}

/// `n_0 + Σ_e Γ_e q^e/(1 - q^e)` to order `order`.
pub fn lambert_resum(report: &InstantonReport, order: usize) -> Series1 {
    let mut c = vec![Rat::zero(); order + 1];
    c[0] = report.n0.clone();
    for (i, g) in report.gamma.iter().enumerate() {
        let e = i + 1;
        if g.is_zero() {
            continue;
        }
        let mut k = e;
        while k <= order {
            c[k] += g;
            k += e;
        }
    }
    Series1::new(c)
}

/// Outcome of comparing a series with a printed closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMatch {
    Exact,
    Negated,
    Mismatch,
}

/// Compares `s` with the expansion of `num / den`, allowing a global sign.
pub fn compare_closed_form(s: &Series1, num: &Poly, den: &Poly) -> Result<SignMatch> {
    let n = s.order();
    let expansion = Series1::from_poly(num, n).div(&Series1::from_poly(den, n))?;
    Ok(if &expansion == s {
        SignMatch::Exact
    } else if expansion.scale(&-Rat::one()) == *s {
        SignMatch::Negated
    } else {
        SignMatch::Mismatch
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CIModel;

    fn quintic() -> RecurrenceSpec {
        CIModel::ordinary(vec![5]).unwrap().ci_recurrence().unwrap()
    }

    #[test]
    fn trivial_theta4() {
        let op = ThetaOperator::parse("T^4").unwrap();
        assert!(cd_series(&op, 6).unwrap().is_zero());
        assert_eq!(yukawa_w(&op, &rat(7), 6).unwrap(), Series1::constant(rat(7), 6));
        assert_eq!(
            cd_series(&ThetaOperator::parse("z*T^4").unwrap(), 3),
            Err(Error::NotPicardFuchs)
        );
    }

    #[test]
    fn two_term_w_is_geometric() {
        let w = yukawa_w(&quintic().to_theta(), &rat(5), 8).unwrap();
        let oracle = Series1::from_fn(8, |n| rat(5) * num_traits::pow(rat(3125), n));
        assert_eq!(w, oracle);
    }

    #[test]
    fn non_mu_coupling_is_rejected() {
        let op = ThetaOperator::parse("T^4 + T^3 - z").unwrap();
        assert!(matches!(yukawa_w(&op, &rat(1), 4), Err(Error::Domain(_))));
    }

    #[test]
    fn ode_residual_vanishes() {
        let op = quintic().to_theta();
        let w = yukawa_w(&op, &rat(5), 10).unwrap();
        let c = cd_series(&op, 10).unwrap();
        let res = &w.theta() + &(&c * &w).scale(&Rat::new(2.into(), 4.into()));
        assert!(res.is_zero());
    }

    #[test]
    fn quintic_frame_and_instantons() {
        let f = YukawaFrame::compute(&quintic(), &rat(5), 6).unwrap();
        assert_eq!(f.k_q.coeff(0), &rat(5));
        assert_eq!(f.j.coeff(0), &rat(1));
        // K_z Φ0² (1 - 5^5 z) = 5
        let lhs = &(&f.k_z * &(&f.phi0 * &f.phi0)) * &Series1::from_poly(&Poly::from_ints(&[1, -3125]), 6);
        assert_eq!(lhs.truncate(6), Series1::constant(rat(5), 6));
        let r = instanton(&f.k_q, 3, 3).unwrap();
        assert_eq!(r.n, vec![rat(2875), rat(609250), rat(317206375)]);
        assert!(r.all_integral() && r.all_nonnegative());
        assert_eq!(lambert_resum(&r, 3), f.k_q.truncate(3));
    }

    #[test]
    fn trivial_q_frame() {
        let kz = Series1::from_ints(&[3, 1, 4, 1]);
        let (kq, j) = to_q_frame(&kz, &Series1::var(4), 3).unwrap();
        assert_eq!(kq, kz);
        assert_eq!(j, Series1::one(3));
    }

    #[test]
    fn lambert_trivial_cases() {
        let one = InstantonReport {
            n0: rat(0),
            gamma: vec![rat(1), rat(0)],
            n: vec![rat(1), rat(0)],
            integral: vec![true; 2],
            nonnegative: vec![true; 2],
        };
        assert_eq!(lambert_resum(&one, 5), Series1::from_ints(&[0, 1, 1, 1, 1, 1]));
        let zero = InstantonReport {
            n0: rat(162),
            gamma: vec![rat(0); 3],
            n: vec![rat(0); 3],
            integral: vec![true; 3],
            nonnegative: vec![true; 3],
        };
        assert_eq!(lambert_resum(&zero, 3), Series1::constant(rat(162), 3));
        let r = instanton(&Series1::constant(rat(162), 10), 3, 10).unwrap();
        assert!(r.n.iter().all(Zero::is_zero));
        assert_eq!(instanton(&Series1::one(3), 4, 2), Err(Error::UnsupportedDimension(4)));
    }

    #[test]
    fn closed_form_sign() {
        let s = Series1::from_ints(&[48, 3840, 258048]);
        let num = Poly::from_ints(&[48]);
        let den = &Poly::from_ints(&[1, -64]) * &Poly::from_ints(&[1, -16]);
        assert_eq!(compare_closed_form(&s, &num, &den).unwrap(), SignMatch::Exact);
        let neg = &Poly::from_ints(&[-1, 64]) * &Poly::from_ints(&[1, -16]);
        assert_eq!(compare_closed_form(&s, &num, &neg).unwrap(), SignMatch::Negated);
        assert_eq!(
            compare_closed_form(&s, &Poly::from_ints(&[47]), &den).unwrap(),
            SignMatch::Mismatch
        );
    }
}
