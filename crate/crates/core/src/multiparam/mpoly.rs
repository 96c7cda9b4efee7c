use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::series::{rat, Rat};

/// Sparse polynomial over ℚ in a fixed number of variables. Terms are keyed
/// by exponent vector in a `BTreeMap`, so equal polynomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

/// Bivariate polynomial in `x, y`.
pub type Poly2 = MPoly;

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat, nvars: usize) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(j: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated exponents add.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, a)| (e.clone(), a * c)))
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::constant(Rat::one(), self.nvars), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Substitutes `x_j ↦ polys[j]`.
    pub fn substitute(&self, polys: &[MPoly]) -> MPoly {
        assert_eq!(polys.len(), self.nvars);
        let target = polys.first().map_or(0, MPoly::nvars);
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone(), target);
            for (p, &k) in polys.iter().zip(e) {
                term = &term * &p.pow(k);
            }
            out = &out + &term;
        }
        out
    }

    /// The polynomial with variables `i` and `j` exchanged.
    pub fn swap_vars(&self, i: usize, j: usize) -> MPoly {
        MPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            }),
        )
    }
}

/// Determinant by cofactor expansion along the first row, skipping zeros.
/// Fine for the small Sylvester matrices used here.
pub fn determinant(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::constant(Rat::one(), nvars);
    }
    let mut out = MPoly::zero(nvars);
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = entry * &determinant(&minor, nvars);
        out = if c % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// Resultant of `Σ f_i t^{p-i}` and `Σ g_i t^{q-i}` (coefficients listed
/// from the top degree down) as the Sylvester determinant.
pub fn resultant(f: &[MPoly], g: &[MPoly], nvars: usize) -> MPoly {
    let p = f.len() - 1;
    let q = g.len() - 1;
    let size = p + q;
    let zero = MPoly::zero(nvars);
    let mut rows = Vec::with_capacity(size);
    for s in 0..q {
        let mut row = vec![zero.clone(); size];
        for (i, c) in f.iter().enumerate() {
            row[s + i] = c.clone();
        }
        rows.push(row);
    }
    for s in 0..p {
        let mut row = vec![zero.clone(); size];
        for (i, c) in g.iter().enumerate() {
            row[s + i] = c.clone();
        }
        rows.push(row);
    }
    determinant(&rows, nvars)
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        MPoly::from_terms(self.nvars, acc)
    }
}

const NAMES: [&str; 3] = ["x", "y", "w"];

impl fmt::Display for MPoly {
    /// Graded order (by total degree, then lexicographically descending).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
            sa.cmp(&sb).then_with(|| b.cmp(a))
        });
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    let name = NAMES.get(j).map_or_else(|| format!("x{j}"), |s| s.to_string());
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            match (mono.is_empty(), mag == rat(1)) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
