use num_traits::Zero;

use super::RecurrenceSpec;
use crate::error::{Error, Result};
use crate::series::{Rat, Series1};

/// Power-series solution of the recurrence with `a_0` given, to order `n`.
///
/// Solves forward with `a_n = -(1/P_m(n)) Σ_{i=1}^m P_{m-i}(n-i) a_{n-i}`.
/// For an MU recurrence `P_m(n) = n^{d+1}` never vanishes for `n >= 1`;
/// otherwise the first offending index is reported.
pub fn socle(spec: &RecurrenceSpec, a0: Rat, order: usize) -> Result<Series1> {
    socle_extend(spec, vec![a0], order)
}

/// Continues the forward solve from known coefficients `a_0..a_k`.
pub fn socle_extend(spec: &RecurrenceSpec, prefix: Vec<Rat>, order: usize) -> Result<Series1> {
    assert!(!prefix.is_empty(), "prefix must contain a_0");
    let m = spec.m();
    let lead = spec.leading();
    let start = prefix.len();
    let mut a = prefix;
    a.truncate(order + 1);
    for n in start..=order {
        let pn = lead.eval_int(n as i64);
        if pn.is_zero() {
            return Err(Error::NonsolvableRecurrence { n });
        }
        let mut acc = Rat::zero();
        for i in 1..=m.min(n) {
            let p = spec.poly(m - i);
            if !p.is_zero() && !a[n - i].is_zero() {
                acc += p.eval_int((n - i) as i64) * &a[n - i];
            }
        }
        a.push(-acc / pn);
    }
    Ok(Series1::new(a))
}

/// Regular part `Ψ` of the logarithmic solution `log z · Φ_0 + Ψ`, with
/// `Ψ(0) = 0`. Coefficients follow from
///
/// `P_m(n) b_n + Σ_{i=1}^m P_{m-i}(n-i) b_{n-i} + Σ_{i=0}^m P'_{m-i}(n-i) a_{n-i} = 0`.
pub fn log_psi(spec: &RecurrenceSpec, phi0: &Series1, order: usize) -> Result<Series1> {
    let order = order.min(phi0.order());
    let m = spec.m();
    let lead = spec.leading();
    let derivs: Vec<_> = spec.polys().iter().map(|p| p.derivative()).collect();
    let mut b: Vec<Rat> = Vec::with_capacity(order + 1);
    b.push(Rat::zero());
    for n in 1..=order {
        let pn = lead.eval_int(n as i64);
        if pn.is_zero() {
            return Err(Error::NonsolvableRecurrence { n });
        }
        let mut acc = Rat::zero();
        for i in 1..=m.min(n) {
            let p = spec.poly(m - i);
            if !p.is_zero() && !b[n - i].is_zero() {
                acc += p.eval_int((n - i) as i64) * &b[n - i];
            }
        }
        for i in 0..=m.min(n) {
            let dp = &derivs[m - i];
            let a = phi0.coeff(n - i);
            if !dp.is_zero() && !a.is_zero() {
                acc += dp.eval_int((n - i) as i64) * a;
            }
        }
        b.push(-acc / pn);
    }
    Ok(Series1::new(b))
}

/// The mirror map and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QParam {
    pub q_of_z: Series1,
    pub z_of_q: Series1,
}

/// `q = z·exp(Ψ/Φ_0)` and its compositional inverse `z(q)`.
pub fn q_param(phi0: &Series1, psi: &Series1) -> Result<QParam> {
    if !psi.coeff(0).is_zero() {
        return Err(Error::Domain("q-parameter needs Ψ(0) = 0".into()));
    }
    let q_of_z = psi.div(phi0)?.exp()?.mul_z();
    let z_of_q = q_of_z.revert()?;
    Ok(QParam { q_of_z, z_of_q })
}
