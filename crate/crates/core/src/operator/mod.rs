//! Holonomic recurrences and logarithmic differential operators.
//!
//! One operator has three interchangeable views:
//!
//! * [`RecurrenceSpec`]: polynomials `P_0..P_m` with
//!   `Σ_j P_j(n+j) a_{n+j} = 0` for every integer `n` (and `a_k = 0` for `k < 0`);
//! * [`ThetaOperator`]: `D = z^m P_0(Θ) + z^{m-1} P_1(Θ) + ... + P_m(Θ)`, with
//!   every power of `z` standing to the left of `Θ = z d/dz`;
//! * [`ZForm`]: `D = Σ_i A_i(z) Θ^i`.

mod fit;
mod parse;
mod solve;

pub use fit::{fit_recurrence, fit_recurrence_auto, min_fit_terms, solve_linear, LinearSolution};
pub use solve::{log_psi, q_param, socle, socle_extend, QParam};

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{rat, Poly, Rat, Series1};

/// Recurrence `P_0(n) a_n + P_1(n+1) a_{n+1} + ... + P_m(n+m) a_{n+m} = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    polys: Vec<Poly>,
}

impl RecurrenceSpec {
    /// `polys[j]` is `P_j`. At least one of `P_0`, `P_m` must be nonzero.
    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::Domain("a recurrence needs at least one polynomial".into()));
        }
        if polys[0].is_zero() && polys[polys.len() - 1].is_zero() {
            return Err(Error::Domain("P_0 and P_m are both zero".into()));
        }
        Ok(RecurrenceSpec { polys })
    }

    /// Number of back-terms `m` (the recurrence has `m + 1` terms).
    pub fn m(&self) -> usize {
        self.polys.len() - 1
    }

    /// Operator order `d + 1`: the largest degree among the `P_j`.
    pub fn order(&self) -> usize {
        self.polys.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn poly(&self, j: usize) -> &Poly {
        &self.polys[j]
    }

    /// `P_m`, the polynomial multiplying the newest coefficient.
    pub fn leading(&self) -> &Poly {
        &self.polys[self.m()]
    }

    /// `P_m(y) = y^{d+1}` exactly.
    pub fn is_mu(&self) -> bool {
        *self.leading() == Poly::monomial(Rat::one(), self.order())
    }

    pub fn to_theta(&self) -> ThetaOperator {
        ThetaOperator::new(self.polys.iter().rev().cloned().collect())
    }

    pub fn to_zform(&self) -> ZForm {
        self.to_theta().to_zform()
    }

    /// Rescales so that `P_m` is monic when `P_m = c·y^k`; `None` otherwise.
    pub fn mu_normalized(&self) -> Option<RecurrenceSpec> {
        let lead = self.leading();
        let k = lead.degree()?;
        if *lead != Poly::monomial(lead.leading(), k) {
            return None;
        }
        let inv = lead.leading().recip();
        Some(RecurrenceSpec {
            polys: self.polys.iter().map(|p| p.scale(&inv)).collect(),
        })
    }

    /// Residuals `Σ_j P_j(n+j) a_{n+j}` for `n = -m ..= N - m`; all zero iff
    /// the coefficients satisfy the recurrence wherever they are known.
    pub fn residuals(&self, a: &Series1) -> Vec<Rat> {
        let m = self.m() as i64;
        let top = a.order() as i64;
        (-m..=top - m)
            .map(|n| {
                let mut acc = Rat::zero();
                for (j, p) in self.polys.iter().enumerate() {
                    let idx = n + j as i64;
                    if idx >= 0 && !p.is_zero() {
                        acc += p.eval_int(idx) * a.coeff(idx as usize);
                    }
                }
                acc
            })
            .collect()
    }

    /// Index of the first residual that does not vanish, reported as the
    /// recurrence shift `n`.
    pub fn first_violation(&self, a: &Series1) -> Option<i64> {
        self.residuals(a)
            .iter()
            .position(|r| !r.is_zero())
            .map(|i| i as i64 - self.m() as i64)
    }

    pub fn annihilates(&self, a: &Series1) -> bool {
        self.first_violation(a).is_none()
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.polys.iter().enumerate() {
            if j > 0 {
                f.write_str("; ")?;
            }
            write!(f, "P_{j}(y) = {p}")?;
        }
        Ok(())
    }
}

/// Outcome of [`ThetaOperator::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_picard_fuchs: bool,
    pub is_mu: bool,
}

/// `Σ_j z^j Q_j(Θ)` with `z^j` to the left of `Θ`. `Q_j = P_{m-j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaOperator {
    terms: Vec<Poly>,
}

impl ThetaOperator {
    /// `terms[j]` multiplies `z^j`. Trailing zero terms are dropped.
    pub fn new(mut terms: Vec<Poly>) -> Self {
        while terms.len() > 1 && terms.last().is_some_and(Poly::is_zero) {
            terms.pop();
        }
        if terms.is_empty() {
            terms.push(Poly::zero());
        }
        ThetaOperator { terms }
    }

    /// The operator `Θ`.
    pub fn theta() -> Self {
        ThetaOperator::new(vec![Poly::var()])
    }

    /// Builds `Σ_j Q_j(Θ) ∘ z^j` (z to the right) in normal order, using
    /// `Θ^i ∘ z^j = z^j (Θ + j)^i`.
    pub fn from_theta_left(terms: Vec<Poly>) -> Self {
        ThetaOperator::new(
            terms
                .iter()
                .enumerate()
                .map(|(j, q)| q.shift(&rat(j as i64)))
                .collect(),
        )
    }

    /// Parses text such as `T^4 - 5z(5T+1)(5T+2)(5T+3)(5T+4)`; `z` is read
    /// as standing to the left of every `Θ` (accepted spellings: `T`, `Θ`,
    /// `theta`).
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_operator(text).map(ThetaOperator::new)
    }

    pub fn terms(&self) -> &[Poly] {
        &self.terms
    }

    /// Parses a polynomial in `z` alone, e.g. `(1-64z)(1-16z)` or `2^5*3^6`.
    pub fn parse_z_polynomial(text: &str) -> Result<Poly> {
        let terms = parse::parse_operator(text)?;
        let mut coeffs = Vec::with_capacity(terms.len());
        for p in &terms {
            if p.degree().unwrap_or(0) > 0 {
                return Err(Error::Parse(format!("`{text}` is not a polynomial in z alone")));
            }
            coeffs.push(p.coeff(0));
        }
        Ok(Poly::new(coeffs))
    }

    /// Highest power of `z`.
    pub fn m(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn order(&self) -> usize {
        self.terms.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Poly::is_zero)
    }

    pub fn to_recurrence(&self) -> Result<RecurrenceSpec> {
        RecurrenceSpec::new(self.terms.iter().rev().cloned().collect())
    }

    pub fn to_zform(&self) -> ZForm {
        let order = self.order();
        let a = (0..=order)
            .map(|i| Poly::new(self.terms.iter().map(|q| q.coeff(i)).collect()))
            .collect();
        ZForm { a }
    }

    pub fn classify(&self) -> Classification {
        let order = self.order();
        let lead0 = self.terms[0].coeff(order);
        let is_picard_fuchs = !self.is_zero() && !lead0.is_zero();
        let is_mu = is_picard_fuchs && self.terms[0] == Poly::monomial(Rat::one(), order);
        Classification {
            is_picard_fuchs,
            is_mu,
        }
    }

    /// Exact truncated application; the result is reported to order
    /// `order(f) - m`.
    pub fn apply(&self, f: &Series1) -> Series1 {
        let top = f.order().saturating_sub(self.m());
        Series1::from_fn(top, |n| {
            let mut acc = Rat::zero();
            for (j, q) in self.terms.iter().enumerate() {
                if j > n || q.is_zero() {
                    continue;
                }
                let k = n - j;
                let a = f.coeff(k);
                if !a.is_zero() {
                    acc += q.eval_int(k as i64) * a;
                }
            }
            acc
        })
    }

    /// Formal derivative in `Θ`: `Σ_j z^j Q_j'(Θ)`.
    pub fn theta_partial(&self) -> ThetaOperator {
        ThetaOperator::new(self.terms.iter().map(Poly::derivative).collect())
    }

    /// Divides by the leading `Θ`-coefficient of the `z^0` term so that the
    /// operator starts with a monic `Θ^{d+1}`. Unchanged when that
    /// coefficient is zero.
    pub fn normalized(&self) -> ThetaOperator {
        let lead = self.terms[0].coeff(self.order());
        if lead.is_zero() {
            return self.clone();
        }
        let inv = lead.recip();
        ThetaOperator::new(self.terms.iter().map(|q| q.scale(&inv)).collect())
    }
}

impl fmt::Display for ThetaOperator {
    /// ASCII rendering with `T` for `Θ`, re-readable by [`ThetaOperator::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, q) in self.terms.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let body = q.display_in("T");
            let zpow = match j {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{j}"),
            };
            let nterms = q.coeffs().iter().filter(|c| !c.is_zero()).count();
            let (neg, text) = if j == 0 {
                if let Some(rest) = body.strip_prefix('-') {
                    (true, rest.to_string())
                } else {
                    (false, body)
                }
            } else if nterms == 1 {
                let c = q.leading();
                let k = q.degree().unwrap();
                let mag = c.abs();
                let mono = Poly::monomial(Rat::one(), k).display_in("T");
                let text = match (mag.is_one(), k) {
                    (true, 0) => zpow.clone(),
                    (true, _) => format!("{zpow}*{mono}"),
                    (false, 0) => format!("{mag}*{zpow}"),
                    (false, _) => format!("{mag}*{zpow}*{mono}"),
                };
                (c.is_negative(), text)
            } else {
                (false, format!("{zpow}*({body})"))
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&text)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `D = Σ_i A_i(z) Θ^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZForm {
    a: Vec<Poly>,
}

impl ZForm {
    /// `a[i]` is `A_i(z)`.
    pub fn new(a: Vec<Poly>) -> Self {
        ZForm { a }
    }

    pub fn a(&self, i: usize) -> &Poly {
        &self.a[i]
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.a
    }

    pub fn order(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// `C_i = A_i / A_{d+1}` as a (numerator, denominator) pair.
    pub fn ratio(&self, i: usize) -> (Poly, Poly) {
        (self.a[i].clone(), self.a[self.order()].clone())
    }

    pub fn to_theta(&self) -> ThetaOperator {
        let zdeg = self.a.iter().filter_map(Poly::degree).max().unwrap_or(0);
        ThetaOperator::new(
            (0..=zdeg)
                .map(|j| Poly::new(self.a.iter().map(|p| p.coeff(j)).collect()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quintic() -> RecurrenceSpec {
        let p0 = [1, 2, 3, 4]
            .iter()
            .fold(Poly::constant(rat(-5)), |acc, &k| &acc * &Poly::linear(rat(5), rat(k)));
        RecurrenceSpec::new(vec![p0, Poly::monomial(rat(1), 4)]).unwrap()
    }

    #[test]
    fn quintic_theta_form() {
        let op = quintic().to_theta();
        let printed = ThetaOperator::parse("Θ^4 - 5z(5Θ+1)(5Θ+2)(5Θ+3)(5Θ+4)").unwrap();
        assert_eq!(op, printed);
        assert_eq!(
            op.classify(),
            Classification {
                is_picard_fuchs: true,
                is_mu: true
            }
        );
        assert_eq!(op.to_recurrence().unwrap(), quintic());
    }

    #[test]
    fn theta_alone_in_zform() {
        let z = ThetaOperator::theta().to_zform();
        assert_eq!(z.a(1), &Poly::one());
        assert!(z.a(0).is_zero());
        assert_eq!(z.to_theta(), ThetaOperator::theta());
    }

    #[test]
    fn classify_counterexamples() {
        // P_m = y^4 + 1: Picard-Fuchs but not MU.
        let op = ThetaOperator::new(vec![Poly::from_ints(&[1, 0, 0, 0, 1]), Poly::monomial(rat(-1), 4)]);
        assert_eq!(
            op.classify(),
            Classification {
                is_picard_fuchs: true,
                is_mu: false
            }
        );
        // z·Θ^2: A_2(0) = 0.
        let op = ThetaOperator::parse("z*T^2").unwrap();
        assert_eq!(
            op.classify(),
            Classification {
                is_picard_fuchs: false,
                is_mu: false
            }
        );
    }

    #[test]
    fn apply_trivial_cases() {
        let one = Series1::one(5);
        assert!(ThetaOperator::theta().apply(&one).is_zero());
        let op = ThetaOperator::parse("T - 1").unwrap();
        assert!(op.apply(&Series1::var(5)).is_zero());
    }

    #[test]
    fn theta_partial_examples() {
        let op = ThetaOperator::parse("T^4").unwrap();
        assert_eq!(op.theta_partial(), ThetaOperator::parse("4T^3").unwrap());
        let c = ThetaOperator::parse("1").unwrap();
        assert!(c.theta_partial().is_zero());
        // d/dΘ of (5Θ+1)(5Θ+2)(5Θ+3)(5Θ+4) by the product rule
        let product_rule = "4T^3 - 5z(5(5T+2)(5T+3)(5T+4) + 5(5T+1)(5T+3)(5T+4) \
                            + 5(5T+1)(5T+2)(5T+4) + 5(5T+1)(5T+2)(5T+3))";
        assert_eq!(
            quintic().to_theta().theta_partial(),
            ThetaOperator::parse(product_rule).unwrap()
        );
    }

    #[test]
    fn theta_left_reordering() {
        // Θ ∘ z = z(Θ + 1)
        let op = ThetaOperator::from_theta_left(vec![Poly::zero(), Poly::var()]);
        assert_eq!(op, ThetaOperator::parse("z(T+1)").unwrap());
        let f = Series1::from_ints(&[3, 1, 4, 1, 5, 9]);
        // Θ(z f) computed directly
        let direct = f.mul_z().theta().truncate(4);
        assert_eq!(op.apply(&f), direct);
    }

    #[test]
    fn display_round_trips_through_parser() {
        let op = quintic().to_theta();
        let text = op.to_string();
        assert_eq!(ThetaOperator::parse(&text).unwrap(), op);
        assert_eq!(ThetaOperator::parse("T^4 - z*T^2 + 3*z^2").unwrap().to_string(), "T^4 - z*T^2 + 3*z^2");
    }

    #[test]
    fn mu_normalization() {
        let r = RecurrenceSpec::new(vec![Poly::from_ints(&[1, 1]), Poly::monomial(rat(3), 1)]).unwrap();
        let n = r.mu_normalized().unwrap();
        assert!(n.is_mu());
        assert_eq!(n.poly(0), &Poly::new(vec![crate::series::ratio(1, 3), crate::series::ratio(1, 3)]));
        let r = RecurrenceSpec::new(vec![Poly::one(), Poly::from_ints(&[1, 1])]).unwrap();
        assert!(r.mu_normalized().is_none());
    }
}
