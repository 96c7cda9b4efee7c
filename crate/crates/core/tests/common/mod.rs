//! Independent oracles and property checks shared by the integration tests
//! and the acceptance runner.

#![allow(dead_code)]

use cymirror::coupling::{instanton, lambert_resum};
use cymirror::models::{extract_params, Extracted, HypergeomParams};
use cymirror::operator::{log_psi, socle, socle_extend, RecurrenceSpec, ThetaOperator};
use cymirror::series::{rat, ratio, Poly, Rat, Series1};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const ORDER: usize = 20;
pub const CASES: u32 = 100;

// ---- oracles written without the library's series code ----

pub fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

pub fn binom(n: u64, k: u64) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

/// `Σ_k C(n,k)^3`.
pub fn franel(n: u64) -> BigInt {
    (0..=n).map(|k| binom(n, k).pow(3)).sum()
}

/// Diagonal coefficient of a product model by direct enumeration:
/// `Σ_{|l|=n} Π_i (Σ_j M_ij l_j)! / Π_j (l_j!)^{n_j+1}`.
pub fn product_diagonal(dims: &[u32], matrix: &[Vec<u32>], n: u64) -> BigInt {
    fn rec(dims: &[u32], matrix: &[Vec<u32>], l: &mut Vec<u64>, left: u64, out: &mut BigInt) {
        if l.len() + 1 == dims.len() {
            l.push(left);
            let mut num = BigInt::one();
            for row in matrix {
                let s: u64 = row.iter().zip(l.iter()).map(|(&m, &x)| m as u64 * x).sum();
                num *= fact(s);
            }
            let den = dims
                .iter()
                .zip(l.iter())
                .fold(BigInt::one(), |a, (&d, &x)| a * fact(x).pow(d + 1));
            assert!((&num % &den).is_zero());
            *out += num / den;
            l.pop();
            return;
        }
        for x in 0..=left {
            l.push(x);
            rec(dims, matrix, l, left - x, out);
            l.pop();
        }
    }
    let mut out = BigInt::zero();
    rec(dims, matrix, &mut Vec::new(), n, &mut out);
    out
}

pub fn harmonic(n: u64) -> Rat {
    (1..=n as i64).map(|k| ratio(1, k)).sum()
}

/// `K = n0 + Σ_e n_e e³ q^e / (1 - q^e)` summed term by term.
pub fn lambert_oracle(n0: i64, n: &[i64], order: usize) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); order + 1];
    c[0] = rat(n0);
    for (i, &ne) in n.iter().enumerate() {
        let e = i + 1;
        let g = rat(ne * (e * e * e) as i64);
        let mut k = e;
        while k <= order {
            c[k] += &g;
            k += e;
        }
    }
    c
}

pub fn ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

// ---- strategies ----

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

pub fn series(order: usize) -> impl Strategy<Value = Series1> {
    prop::collection::vec(small_rat(), order + 1).prop_map(Series1::new)
}

/// `f` with `f(0) = 0`.
pub fn series0(order: usize) -> impl Strategy<Value = Series1> {
    series(order).prop_map(|s| {
        let mut c = s.coeffs().to_vec();
        c[0] = Rat::zero();
        Series1::new(c)
    })
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Any recurrence with nonzero `P_0` and `P_m`.
pub fn any_spec() -> impl Strategy<Value = RecurrenceSpec> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(m, k)| {
        (nonzero_poly(k), prop::collection::vec(small_poly(k), m - 1), nonzero_poly(k)).prop_map(
            |(p0, mid, pm)| {
                let mut polys = vec![p0];
                polys.extend(mid);
                polys.push(pm);
                RecurrenceSpec::new(polys).unwrap()
            },
        )
    })
}

/// MU recurrence: `P_m = y^k`, the others random of degree `<= k`.
pub fn mu_spec() -> impl Strategy<Value = RecurrenceSpec> {
    (1usize..=2, 2usize..=4).prop_flat_map(|(m, k)| {
        (nonzero_poly(k), prop::collection::vec(small_poly(k), m - 1)).prop_map(move |(p0, mid)| {
            let mut polys = vec![p0];
            polys.extend(mid);
            polys.push(Poly::monomial(Rat::one(), k));
            RecurrenceSpec::new(polys).unwrap()
        })
    })
}

/// Hypergeometric parameters with small denominators.
pub fn params() -> impl Strategy<Value = HypergeomParams> {
    (
        prop::collection::vec((1i64..=9, 1i64..=6), 2..=4),
        (-8i64..=8).prop_filter("nonzero", |m| *m != 0),
    )
        .prop_map(|(a, mu)| HypergeomParams::new(a.into_iter().map(|(n, d)| ratio(n, d)).collect(), rat(mu), rat(1)))
}

// ---- properties ----

pub fn exp_log_round_trip(f: &Series1) -> Result<(), TestCaseError> {
    let e = f.exp().unwrap();
    prop_assert_eq!(&e.log().unwrap(), f);
    let one_plus = &Series1::one(f.order()) + f;
    prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
    Ok(())
}

/// `f` must have `f(0) = 0`; its linear coefficient is forced to be nonzero.
pub fn compose_revert_round_trip(f: &Series1, lin: &Rat) -> Result<(), TestCaseError> {
    let mut c = f.coeffs().to_vec();
    c[1] = lin.clone();
    let f = Series1::new(c);
    let g = f.revert().unwrap();
    let z = Series1::var(f.order());
    prop_assert_eq!(&f.compose(&g).unwrap(), &z);
    prop_assert_eq!(&g.compose(&f).unwrap(), &z);
    Ok(())
}

/// `[Θ, z] = z`, on series and through operator application.
pub fn theta_z_commutator(f: &Series1, op: &ThetaOperator) -> Result<(), TestCaseError> {
    let zf = f.mul_z();
    let lhs = &zf.theta() - &f.theta().mul_z();
    prop_assert_eq!(lhs, zf.clone());
    // L(z f) = z L'(f) with every Θ replaced by Θ + 1
    let shifted = ThetaOperator::new(op.terms().iter().map(|p| p.shift(&Rat::one())).collect());
    let a = op.apply(&zf);
    let b = shifted.apply(f).mul_z();
    let n = a.order().min(b.order());
    prop_assert_eq!(a.truncate(n), b.truncate(n));
    Ok(())
}

pub fn operator_forms_round_trip(spec: &RecurrenceSpec) -> Result<(), TestCaseError> {
    let op = spec.to_theta();
    prop_assert_eq!(&op.to_recurrence().unwrap(), spec);
    prop_assert_eq!(&spec.to_zform().to_theta(), &op);
    prop_assert_eq!(&ThetaOperator::parse(&op.to_string()).unwrap(), &op);
    Ok(())
}

/// The socle solution is annihilated, fixed by `a_0`, and changing any
/// later coefficient breaks the recurrence.
pub fn socle_uniqueness(spec: &RecurrenceSpec, k: usize) -> Result<(), TestCaseError> {
    let a = socle(spec, Rat::one(), ORDER).unwrap();
    prop_assert!(spec.annihilates(&a));
    let twice = socle(spec, rat(2), ORDER).unwrap();
    prop_assert_eq!(twice, a.scale(&rat(2)));
    let k = 1 + k % ORDER;
    let resumed = socle_extend(spec, a.coeffs()[..k].to_vec(), ORDER).unwrap();
    prop_assert_eq!(&resumed, &a);
    let mut c = a.coeffs().to_vec();
    c[k] += Rat::one();
    prop_assert!(!spec.annihilates(&Series1::new(c)));
    Ok(())
}

/// `L(log z · Φ_0 + Ψ) = 0` in the form `L Ψ + (∂L/∂Θ) Φ_0 = 0`.
pub fn psi_identity(spec: &RecurrenceSpec) -> Result<(), TestCaseError> {
    let phi0 = socle(spec, Rat::one(), ORDER).unwrap();
    let psi = log_psi(spec, &phi0, ORDER).unwrap();
    prop_assert!(psi.coeff(0).is_zero());
    let op = spec.to_theta();
    let total = &op.apply(&psi) + &op.theta_partial().apply(&phi0);
    prop_assert!(total.is_zero(), "residual {}", total);
    Ok(())
}

pub fn instanton_lambert_round_trip(n0: i64, n: &[i64]) -> Result<(), TestCaseError> {
    let kq = Series1::new(lambert_oracle(n0, n, ORDER));
    let r = instanton(&kq, 3, ORDER).unwrap();
    prop_assert_eq!(&r.n[..n.len()], &ints(n)[..]);
    prop_assert!(r.n[n.len()..].iter().all(Zero::is_zero));
    prop_assert_eq!(lambert_resum(&r, ORDER), kq);
    Ok(())
}

pub fn extract_two_term_round_trip(p: &HypergeomParams) -> Result<(), TestCaseError> {
    let spec = p.two_term_ops().to_recurrence().unwrap();
    match extract_params(&spec, p.w0.clone()).unwrap() {
        Extracted::Params(q) => prop_assert_eq!(&q, p),
        other => prop_assert!(false, "not extracted: {:?}", other),
    }
    Ok(())
}
