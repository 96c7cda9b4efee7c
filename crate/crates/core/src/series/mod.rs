//! Exact truncated power series over the rationals.
//!
//! Everything in this crate is computed over [`Rat`] (arbitrary precision
//! rationals). [`Series1`] is a dense univariate series carrying its own
//! truncation order; [`SeriesM`] is a sparse multivariate series truncated by
//! total degree; [`Poly`] is an exact univariate polynomial.

mod poly;
mod series1;
mod seriesm;

pub use poly::Poly;
pub use series1::Series1;
pub use seriesm::SeriesM;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient field of every series and polynomial.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Big integer as a rational.
pub fn rat_int(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(rat_int(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `numerator/denominator`, e.g. `5/1`; used by the cache format.
pub fn format_rat_full(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Table of factorials 0!..=n!, grown on demand.
#[derive(Clone, Debug)]
pub struct Factorials {
    table: Vec<BigInt>,
}

impl Factorials {
    pub fn new() -> Self {
        Factorials {
            table: vec![BigInt::one()],
        }
    }

    pub fn get(&mut self, n: u64) -> BigInt {
        let n = n as usize;
        while self.table.len() <= n {
            let k = self.table.len();
            let next = &self.table[k - 1] * BigInt::from(k);
            self.table.push(next);
        }
        self.table[n].clone()
    }
}

impl Default for Factorials {
    fn default() -> Self {
        Self::new()
    }
}

/// Möbius function.
pub fn moebius(mut n: u64) -> i64 {
    assert!(n > 0, "moebius(0) is undefined");
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors of |n| (n != 0), by trial division. Returns `None` when
/// a cofactor above `limit` survives and might be composite.
pub fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        if p > limit {
            return None;
        }
        let bp = BigInt::from(p);
        let mut e = 0;
        while n.is_multiple_of(&bp) {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            primes.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rat(" 17 ").unwrap(), rat(17));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat_full(&rat(5)), "5/1");
    }

    #[test]
    fn moebius_small() {
        let got: Vec<i64> = (1..=12).map(moebius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn divisor_lists() {
        let d = divisors(&BigInt::from(-120), 1000).unwrap();
        assert_eq!(d.len(), 16);
        assert_eq!(d[0], BigInt::from(1));
        assert_eq!(d[15], BigInt::from(120));
        assert_eq!(divisors(&BigInt::from(97), 1000).unwrap().len(), 2);
    }

    #[test]
    fn factorial_table_matches_direct() {
        let mut f = Factorials::new();
        for n in [0, 1, 5, 20, 7] {
            assert_eq!(f.get(n), factorial(n));
        }
    }
}
