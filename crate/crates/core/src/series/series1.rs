use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{rat, Poly, Rat};
use crate::error::{Error, Result};

/// Dense truncated power series `a_0 + a_1 z + ... + a_N z^N + O(z^{N+1})`.
///
/// The truncation order `N` travels with the value. Binary operations take
/// the smaller order of their operands, so nothing ever claims validity it
/// does not have.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series1 {
    coeffs: Vec<Rat>,
}

impl Series1 {
    /// Series from coefficients `a_0..=a_N`; the order is `len - 1`.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Series1 { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rat) -> Self {
        Series1::new((0..=order).map(f).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Series1::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series1::new(vec![Rat::zero(); order + 1])
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Series1::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series1::constant(Rat::one(), order)
    }

    /// The identity series `z`.
    pub fn var(order: usize) -> Self {
        let mut s = Series1::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    /// Expansion of an exact polynomial, truncated at `order`.
    pub fn from_poly(p: &Poly, order: usize) -> Self {
        Series1::from_fn(order, |k| p.coeff(k))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `z^n`. Panics past the truncation order.
    pub fn coeff(&self, n: usize) -> &Rat {
        assert!(
            n <= self.order(),
            "coefficient z^{n} requested from a series valid to order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drops coefficients past `order`. Never extends.
    pub fn truncate(&self, order: usize) -> Series1 {
        let order = order.min(self.order());
        Series1::new(self.coeffs[..=order].to_vec())
    }

    pub fn scale(&self, c: &Rat) -> Series1 {
        Series1::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `z·f`, valid one order further than `f`.
    pub fn mul_z(&self) -> Series1 {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series1::new(coeffs)
    }

    /// `f / z` for `f(0) = 0`; loses one order.
    pub fn div_z(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("division by z needs f(0) = 0".into()));
        }
        if self.order() == 0 {
            return Err(Error::Domain("division by z of an order-0 series".into()));
        }
        Ok(Series1::new(self.coeffs[1..].to_vec()))
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Series1> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rat> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Series1::new(out))
    }

    pub fn div(&self, rhs: &Series1) -> Result<Series1> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, k: u32) -> Series1 {
        (0..k).fold(Series1::one(self.order()), |acc, _| &acc * self)
    }

    /// `Θ f = z f'`: multiplies the coefficient of `z^n` by `n`.
    pub fn theta(&self) -> Series1 {
        Series1::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * rat(n as i64))
                .collect(),
        )
    }

    /// `∫_0^z f(v) dv / v` for `f(0) = 0`; inverse of [`Series1::theta`] on
    /// series without constant term.
    pub fn integrate_dlog(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "integrate_dlog needs a vanishing constant term".into(),
            ));
        }
        Ok(Series1::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n == 0 { Rat::zero() } else { c / rat(n as i64) })
                .collect(),
        ))
    }

    /// `exp f` for `f(0) = 0`, from `Θ g = g·Θ f`.
    pub fn exp(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs f(0) = 0".into()));
        }
        let n = self.order();
        let df = self.theta();
        let mut g: Vec<Rat> = Vec::with_capacity(n + 1);
        g.push(Rat::one());
        for k in 1..=n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if !df.coeffs[j].is_zero() {
                    acc += &df.coeffs[j] * &g[k - j];
                }
            }
            g.push(acc / rat(k as i64));
        }
        Ok(Series1::new(g))
    }

    /// `log f` for `f(0) = 1`, from `Θ log f = Θ f / f`.
    pub fn log(&self) -> Result<Series1> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs f(0) = 1".into()));
        }
        let ratio = self.theta().div(self)?;
        ratio.integrate_dlog()
    }

    /// `self ∘ g` for `g(0) = 0` (Horner scheme).
    pub fn compose(&self, g: &Series1) -> Result<Series1> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::Domain("composition needs g(0) = 0".into()));
        }
        let order = self.order().min(g.order());
        let g = g.truncate(order);
        let mut acc = Series1::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &g;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse `h` with `f(h(q)) = q`, for `f(0) = 0` and
    /// `f'(0) != 0`, by Lagrange inversion:
    /// `[q^n] h = (1/n) [w^{n-1}] (w / f(w))^n`.
    pub fn revert(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("revert needs f(0) = 0".into()));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Series1::zero(0));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::Domain("revert needs f'(0) != 0".into()));
        }
        let phi = self.div_z()?.inverse()?;
        let mut out = vec![Rat::zero(); n + 1];
        let mut power = Series1::one(n - 1);
        // Lagrange inversion: [z^k] g = [z^{k-1}] φ^k / k
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            power = &power * &phi;
            *slot = power.coeffs[k - 1].clone() / rat(k as i64);
        }
        Ok(Series1::new(out))
    }

    /// Human-readable rendering in variable `var`.
    pub fn display_in(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&format!("{mag}*"));
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(&format!(" + O({var}^{})", self.order() + 1));
        out
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl Add for &Series1 {
    type Output = Series1;
    fn add(self, rhs: &Series1) -> Series1 {
        let n = self.order().min(rhs.order());
        Series1::from_fn(n, |k| &self.coeffs[k] + &rhs.coeffs[k])
    }
}

impl Sub for &Series1 {
    type Output = Series1;
    fn sub(self, rhs: &Series1) -> Series1 {
        let n = self.order().min(rhs.order());
        Series1::from_fn(n, |k| &self.coeffs[k] - &rhs.coeffs[k])
    }
}

impl Neg for &Series1 {
    type Output = Series1;
    fn neg(self) -> Series1 {
        Series1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Series1 {
    type Output = Series1;
    fn mul(self, rhs: &Series1) -> Series1 {
        let n = self.order().min(rhs.order());
        let mut out = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series1::new(out)
    }
}
