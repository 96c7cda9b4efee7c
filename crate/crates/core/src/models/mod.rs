//! Coefficient generators and recurrence constructors for the model
//! families: (weighted) projective complete intersections, products of
//! projective spaces, toric data and bare two-term hypergeometric
//! parameters.

mod product;

pub use product::{ProductProjModel, ToricModel};
pub(crate) use product::compositions_up_to;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::operator::{RecurrenceSpec, ThetaOperator};
use crate::series::{rat, rat_int, Factorials, Poly, Rat, Series1};

/// Complete intersection of hypersurfaces of degrees `d_1..d_r` in the
/// weighted projective space `ℙ(w_0, ..., w_N)`; ordinary projective space
/// has all weights 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIModel {
    degrees: Vec<u32>,
    weights: Vec<u32>,
    w0: Rat,
}

impl CIModel {
    /// Ordinary projective space: `N + 1 = Σ d_i`.
    pub fn ordinary(degrees: Vec<u32>) -> Result<Self> {
        let n: u32 = degrees.iter().sum();
        CIModel::weighted(degrees, vec![1; n as usize])
    }

    /// Weighted case with the default normalization `Π d_i / Π w_j`.
    pub fn weighted(degrees: Vec<u32>, weights: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::Model("degrees: need at least one positive degree".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Model("weights: weights must be positive".into()));
        }
        let sd: u32 = degrees.iter().sum();
        let sw: u32 = weights.iter().sum();
        if sd != sw {
            return Err(Error::Model(format!(
                "degrees: Calabi-Yau condition fails, sum of degrees {sd} != sum of weights {sw}"
            )));
        }
        if weights.len() < degrees.len() + 2 {
            return Err(Error::Model(format!(
                "degrees: {} hypersurfaces leave no positive-dimensional intersection in a space with {} coordinates",
                degrees.len(),
                weights.len()
            )));
        }
        let num = degrees.iter().fold(Rat::one(), |acc, &d| acc * rat(d as i64));
        let den = weights.iter().fold(Rat::one(), |acc, &w| acc * rat(w as i64));
        Ok(CIModel {
            degrees,
            weights,
            w0: num / den,
        })
    }

    pub fn with_w0(mut self, w0: Rat) -> Result<Self> {
        if !w0.is_positive() {
            return Err(Error::Model(format!("w0: normalization must be positive, got {w0}")));
        }
        self.w0 = w0;
        Ok(self)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn w0(&self) -> &Rat {
        &self.w0
    }

    /// Dimension `N - r` of the complete intersection.
    pub fn dim(&self) -> usize {
        self.weights.len() - 1 - self.degrees.len()
    }

    /// `Π (d_i n)! / Π (w_j n)!`.
    pub fn coefficient(&self, n: u64, fact: &mut Factorials) -> Rat {
        let num = self
            .degrees
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &d| acc * fact.get(d as u64 * n));
        let den = self
            .weights
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &w| acc * fact.get(w as u64 * n));
        rat_int(num) / rat_int(den)
    }

    pub fn ci_series(&self, order: usize) -> Series1 {
        let mut fact = Factorials::new();
        Series1::from_fn(order, |n| self.coefficient(n as u64, &mut fact))
    }

    /// `μ = Π d_i^{d_i} / Π w_j^{w_j}`, the leading constant of the
    /// coefficient ratio `a_{n+1}/a_n`.
    pub fn mu(&self) -> Rat {
        let p = |xs: &[u32]| {
            xs.iter()
                .fold(Rat::one(), |acc, &x| acc * num_traits::pow(rat(x as i64), x as usize))
        };
        p(&self.degrees) / p(&self.weights)
    }

    /// Two-term recurrence `(n+1)^{d+1} a_{n+1} = μ Π(n + α_i) a_n` obtained by
    /// cancelling the common roots of `Π_i Π_k (d_i n + k)` and
    /// `Π_j Π_k (w_j n + k)`.
    pub fn ci_recurrence(&self) -> Result<RecurrenceSpec> {
        let roots = |xs: &[u32]| -> Vec<Rat> {
            xs.iter()
                .flat_map(|&x| (1..=x).map(move |k| Rat::new((k as i64).into(), (x as i64).into())))
                .collect()
        };
        let mut num = roots(&self.degrees);
        let mut den = roots(&self.weights);
        num.sort();
        den.sort();
        let (mut alpha, mut rest) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        while i < num.len() || j < den.len() {
            match (num.get(i), den.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    alpha.push(a.clone());
                    i += 1;
                }
                (Some(a), None) => {
                    alpha.push(a.clone());
                    i += 1;
                }
                (_, Some(b)) => {
                    rest.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        if rest.iter().any(|r| !r.is_one()) || rest.len() != self.dim() + 1 {
            return Err(Error::Model(format!(
                "weights: coefficient ratio does not reduce to an MU recurrence (denominator shifts {})",
                rest.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        HypergeomParams::new(alpha, self.mu(), self.w0.clone())
            .two_term_ops()
            .to_recurrence()
    }

    pub fn params(&self) -> Result<HypergeomParams> {
        match extract_params(&self.ci_recurrence()?, self.w0.clone())? {
            Extracted::Params(p) => Ok(p),
            Extracted::Unfactorable { .. } => unreachable!("constructed from linear factors"),
        }
    }
}

/// `Θ^{k} - μ z Π_i (Θ + α_i)` with normalization `W0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomParams {
    pub alpha: Vec<Rat>,
    pub mu: Rat,
    pub w0: Rat,
}

impl HypergeomParams {
    /// `alpha` is stored sorted.
    pub fn new(mut alpha: Vec<Rat>, mu: Rat, w0: Rat) -> Self {
        alpha.sort();
        HypergeomParams { alpha, mu, w0 }
    }

    pub fn two_term_ops(&self) -> ThetaOperator {
        let k = self.alpha.len();
        let p = Poly::from_shifts(&self.alpha).scale(&-self.mu.clone());
        ThetaOperator::new(vec![Poly::monomial(Rat::one(), k), p])
    }

    /// `α_i + α_{k+1-i} = 1` for all `i`.
    pub fn is_reflexive(&self) -> bool {
        let k = self.alpha.len();
        (0..k).all(|i| (&self.alpha[i] + &self.alpha[k - 1 - i]).is_one())
    }
}

/// Outcome of [`extract_params`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extracted {
    Params(HypergeomParams),
    /// `P_0` has an irreducible factor of degree >= 2 over ℚ.
    Unfactorable { roots: Vec<Rat>, remainder: Poly },
}

/// Reads `α` and `μ` off a two-term MU recurrence
/// `P_1 = y^{d+1}`, `P_0 = -μ Π (y + α_i)`.
pub fn extract_params(spec: &RecurrenceSpec, w0: Rat) -> Result<Extracted> {
    if spec.m() != 1 || !spec.is_mu() {
        return Err(Error::Domain(
            "parameter extraction needs a two-term MU recurrence".into(),
        ));
    }
    let p0 = spec.poly(0);
    if p0.is_zero() {
        return Err(Error::Domain("P_0 vanishes".into()));
    }
    let mu = -p0.leading();
    let (roots, cofactor) = p0
        .rational_roots()
        .ok_or_else(|| Error::Domain("P_0 vanishes".into()))?;
    if cofactor.degree().unwrap_or(0) > 0 {
        return Ok(Extracted::Unfactorable {
            roots,
            remainder: cofactor,
        });
    }
    let alpha = roots.iter().map(|r| -r.clone()).collect();
    Ok(Extracted::Params(HypergeomParams::new(alpha, mu, w0)))
}
