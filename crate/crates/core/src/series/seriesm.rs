use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{is_integral, rat, Rat, Series1};
use crate::error::{Error, Result};

/// Sparse multivariate power series in `t` variables, truncated by total
/// degree: every stored exponent vector has component sum `<= bound`, and a
/// missing key means a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesM {
    nvars: usize,
    bound: u32,
    terms: BTreeMap<Vec<u32>, Rat>,
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl SeriesM {
    pub fn zero(nvars: usize, bound: u32) -> Self {
        SeriesM {
            nvars,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat, nvars: usize, bound: u32) -> Self {
        let mut s = SeriesM::zero(nvars, bound);
        s.set(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, bound: u32) -> Self {
        SeriesM::constant(Rat::one(), nvars, bound)
    }

    /// The coordinate series `z_j`.
    pub fn var(j: usize, nvars: usize, bound: u32) -> Self {
        let mut s = SeriesM::zero(nvars, bound);
        let mut e = vec![0; nvars];
        e[j] = 1;
        s.set(e, Rat::one());
        s
    }

    pub fn from_terms(
        nvars: usize,
        bound: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Self {
        let mut s = SeriesM::zero(nvars, bound);
        for (e, c) in terms {
            s.set(e, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    /// Sets a coefficient. Exponents past the degree bound are dropped, zero
    /// coefficients are not stored.
    pub fn set(&mut self, e: Vec<u32>, c: Rat) {
        assert_eq!(e.len(), self.nvars, "exponent vector has wrong length");
        if total(&e) > self.bound {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn with_bound(&self, bound: u32) -> SeriesM {
        let bound = bound.min(self.bound);
        SeriesM {
            nvars: self.nvars,
            bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SeriesM {
        SeriesM::from_terms(
            self.nvars,
            self.bound,
            self.terms.iter().map(|(e, a)| (e.clone(), a * c)),
        )
    }

    /// `z_j · f`; the result is valid to `bound + 1` but kept at `bound`.
    pub fn mul_var(&self, j: usize) -> SeriesM {
        SeriesM::from_terms(
            self.nvars,
            self.bound,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e[j] += 1;
                (e, c.clone())
            }),
        )
    }

    /// Euler operator `Σ Θ_i`: multiplies each term by its total degree.
    fn euler(&self) -> SeriesM {
        SeriesM::from_terms(
            self.nvars,
            self.bound,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c * rat(total(e) as i64))),
        )
    }

    /// `Θ_j f`.
    pub fn theta(&self, j: usize) -> SeriesM {
        SeriesM::from_terms(
            self.nvars,
            self.bound,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c * rat(e[j] as i64))),
        )
    }

    /// Homogeneous components by total degree, indices `0..=bound`.
    fn graded(&self) -> Vec<Vec<(&Vec<u32>, &Rat)>> {
        let mut parts = vec![Vec::new(); self.bound as usize + 1];
        for (e, c) in &self.terms {
            parts[total(e) as usize].push((e, c));
        }
        parts
    }

    fn check_compatible(&self, rhs: &SeriesM) {
        assert_eq!(self.nvars, rhs.nvars, "series have different variable counts");
    }

    /// Inverse of a series with nonzero constant term, degree by degree.
    pub fn inverse(&self) -> Result<SeriesM> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.recip();
        let parts = self.graded();
        let mut out: Vec<BTreeMap<Vec<u32>, Rat>> = Vec::with_capacity(parts.len());
        out.push(BTreeMap::from([(vec![0; self.nvars], inv0.clone())]));
        for k in 1..parts.len() {
            let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
            for j in 1..=k {
                mul_into(&mut acc, parts[j].iter().copied(), out[k - j].iter(), -&inv0);
            }
            out.push(acc);
        }
        Ok(SeriesM::from_terms(
            self.nvars,
            self.bound,
            out.into_iter().flatten(),
        ))
    }

    pub fn div(&self, rhs: &SeriesM) -> Result<SeriesM> {
        Ok(self * &rhs.inverse()?)
    }

    /// `exp f` for `f(0) = 0`, from `E g = g · E f` with `E` the Euler
    /// operator, solved degree by degree.
    pub fn exp(&self) -> Result<SeriesM> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp needs f(0) = 0".into()));
        }
        let ef = self.euler();
        let parts = ef.graded();
        let mut out: Vec<BTreeMap<Vec<u32>, Rat>> = Vec::with_capacity(parts.len());
        out.push(BTreeMap::from([(vec![0; self.nvars], Rat::one())]));
        for k in 1..parts.len() {
            let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
            let inv_k = Rat::one() / rat(k as i64);
            for j in 1..=k {
                mul_into(&mut acc, parts[j].iter().copied(), out[k - j].iter(), inv_k.clone());
            }
            out.push(acc);
        }
        Ok(SeriesM::from_terms(
            self.nvars,
            self.bound,
            out.into_iter().flatten(),
        ))
    }

    /// Restriction to `z_i = z^{w_i}`: the coefficient of `z^n` sums every
    /// term with `Σ w_i e_i = n`. The output order is the largest `n` whose
    /// contributing exponent vectors all lie inside the degree bound.
    pub fn diagonal_restrict(&self, weights: &[u32]) -> Series1 {
        assert_eq!(weights.len(), self.nvars, "one weight per variable");
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        let wmin = *weights.iter().min().unwrap() as usize;
        let order = self.bound as usize * wmin + wmin - 1;
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (e, c) in &self.terms {
            let n: usize = e
                .iter()
                .zip(weights)
                .map(|(&k, &w)| k as usize * w as usize)
                .sum();
            if n <= order {
                coeffs[n] += c;
            }
        }
        Series1::new(coeffs)
    }

    /// Exponent vectors whose coefficient is not an integer.
    pub fn non_integral_terms(&self) -> Vec<(Vec<u32>, Rat)> {
        self.terms
            .iter()
            .filter(|(_, c)| !is_integral(c))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }
}

fn mul_into<'a>(
    acc: &mut BTreeMap<Vec<u32>, Rat>,
    lhs: impl Iterator<Item = (&'a Vec<u32>, &'a Rat)> + Clone,
    rhs: impl Iterator<Item = (&'a Vec<u32>, &'a Rat)>,
    factor: Rat,
) {
    for (eb, cb) in rhs {
        let cb = cb * &factor;
        for (ea, ca) in lhs.clone() {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            *acc.entry(e).or_insert_with(Rat::zero) += ca * &cb;
        }
    }
}

impl Add for &SeriesM {
    type Output = SeriesM;
    fn add(self, rhs: &SeriesM) -> SeriesM {
        self.check_compatible(rhs);
        let mut out = self.with_bound(rhs.bound);
        for (e, c) in &rhs.terms {
            if total(e) <= out.bound {
                let v = out.coeff(e) + c;
                out.set(e.clone(), v);
            }
        }
        out
    }
}

impl Neg for &SeriesM {
    type Output = SeriesM;
    fn neg(self) -> SeriesM {
        self.scale(&-Rat::one())
    }
}

impl Sub for &SeriesM {
    type Output = SeriesM;
    fn sub(self, rhs: &SeriesM) -> SeriesM {
        self + &(-rhs)
    }
}

impl Mul for &SeriesM {
    type Output = SeriesM;
    fn mul(self, rhs: &SeriesM) -> SeriesM {
        self.check_compatible(rhs);
        let bound = self.bound.min(rhs.bound);
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = total(ea);
            if da > bound {
                continue;
            }
            for (eb, cb) in &rhs.terms {
                if da + total(eb) > bound {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        SeriesM::from_terms(self.nvars, bound, acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    #[test]
    fn monomial_restriction() {
        let f = SeriesM::from_terms(2, 4, [(vec![1, 1], rat(1))]);
        let d = f.diagonal_restrict(&[1, 1]);
        assert_eq!(d.order(), 4);
        assert_eq!(d, Series1::from_ints(&[0, 0, 1, 0, 0]));
    }

    #[test]
    fn weighted_restriction_order() {
        let f = SeriesM::from_terms(2, 3, [(vec![1, 0], rat(2)), (vec![0, 1], rat(5))]);
        let d = f.diagonal_restrict(&[2, 3]);
        // every term of weight <= 2*3+1 = 7 has total degree <= 3
        assert_eq!(d.order(), 7);
        assert_eq!(d.coeff(2), &rat(2));
        assert_eq!(d.coeff(3), &rat(5));
    }

    #[test]
    fn inverse_round_trip() {
        let f = SeriesM::from_terms(
            2,
            5,
            [
                (vec![0, 0], rat(2)),
                (vec![1, 0], rat(3)),
                (vec![1, 2], ratio(-1, 2)),
            ],
        );
        let prod = &f * &f.inverse().unwrap();
        assert_eq!(prod, SeriesM::one(2, 5));
        assert_eq!(SeriesM::zero(2, 3).inverse(), Err(Error::NotAUnit));
    }

    #[test]
    fn exp_of_sum_factorizes() {
        let z1 = SeriesM::var(0, 2, 6);
        let z2 = SeriesM::var(1, 2, 6);
        let lhs = (&z1 + &z2).exp().unwrap();
        let rhs = &z1.exp().unwrap() * &z2.exp().unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.coeff(&[2, 1]), ratio(1, 2));
    }
}
