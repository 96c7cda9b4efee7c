use num_traits::{One, Zero};

use super::RecurrenceSpec;
use crate::error::{Error, Result};
use crate::series::{rat, Poly, Rat, Series1};

/// Extra equations demanded beyond the unknown count.
const SAFETY_MARGIN: usize = 10;

/// Coefficients `a_0..=a_N` needed to fit an `(m + 1)`-term recurrence with
/// polynomials of degree `order`.
pub fn min_fit_terms(m: usize, order: usize) -> usize {
    (m + 1) * (order + 1) + m + SAFETY_MARGIN
}

/// Solution set of `A x = b` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// A solution with all free variables zero; `None` if inconsistent.
    pub particular: Option<Vec<Rat>>,
    /// Basis of the kernel of `A`.
    pub nullspace: Vec<Vec<Rat>>,
}

/// Exact Gauss-Jordan elimination on `[A | b]` with `ncols` unknowns.
pub fn solve_linear(mut rows: Vec<Vec<Rat>>, rhs: Vec<Rat>, ncols: usize) -> LinearSolution {
    assert_eq!(rows.len(), rhs.len());
    for (row, b) in rows.iter_mut().zip(rhs) {
        assert_eq!(row.len(), ncols);
        row.push(b);
    }
    let nrows = rows.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let consistent = rows[r..].iter().all(|row| row[ncols].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rat::zero(); ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = rows[i][ncols].clone();
        }
        x
    });
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][f].clone();
            }
            v
        })
        .collect();
    LinearSolution {
        particular,
        nullspace,
    }
}

fn powers(x: i64, order: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(order + 1);
    let mut acc = Rat::one();
    let x = rat(x);
    for _ in 0..=order {
        out.push(acc.clone());
        acc *= &x;
    }
    out
}

fn spec_from_vector(v: &[Rat], m: usize, order: usize) -> Vec<Poly> {
    (0..=m)
        .map(|j| Poly::new(v[j * (order + 1)..(j + 1) * (order + 1)].to_vec()))
        .collect()
}

/// Finds polynomials `P_0..P_m` of degree `<= order` with
/// `Σ_j P_j(n+j) a_{n+j} = 0` for every `n <= N - m`.
///
/// The MU normalization `P_m = y^order` is imposed first; if no such
/// solution exists but a one-dimensional family of general ones does, that
/// one is returned scaled to a monic `P_m` (or monic last nonzero
/// polynomial). The result is re-checked against every supplied
/// coefficient.
pub fn fit_recurrence(coeffs: &Series1, m: usize, order: usize) -> Result<RecurrenceSpec> {
    fit_impl(coeffs, m, order, true)
}

fn fit_impl(coeffs: &Series1, m: usize, order: usize, allow_general: bool) -> Result<RecurrenceSpec> {
    let need = min_fit_terms(m, order);
    let have = coeffs.order() + 1;
    if have < need {
        return Err(Error::NoFit {
            m,
            order,
            min_terms: Some(need),
        });
    }
    let top = coeffs.order() as i64;
    let mi = m as i64;
    let width = order + 1;

    // One equation per shift n = -m ..= N - m.
    let mut full_rows: Vec<Vec<Rat>> = Vec::new();
    for n in -mi..=top - mi {
        let mut row = vec![Rat::zero(); (m + 1) * width];
        for j in 0..=m {
            let idx = n + j as i64;
            if idx < 0 {
                continue;
            }
            let a = coeffs.coeff(idx as usize);
            if a.is_zero() {
                continue;
            }
            for (k, p) in powers(idx, order).into_iter().enumerate() {
                row[j * width + k] = p * a;
            }
        }
        full_rows.push(row);
    }

    // MU-normalized: P_m = y^order moved to the right-hand side.
    let reduced_cols = m * width;
    let (rows, rhs): (Vec<Vec<Rat>>, Vec<Rat>) = full_rows
        .iter()
        .map(|row| {
            (
                row[..reduced_cols].to_vec(),
                -row[reduced_cols + order].clone(),
            )
        })
        .unzip();
    let mu = solve_linear(rows, rhs, reduced_cols);
    let polys = if let Some(x) = mu.particular {
        if !mu.nullspace.is_empty() {
            return Err(Error::AmbiguousFit {
                m,
                order,
                dim: mu.nullspace.len() + 1,
            });
        }
        let mut v = x;
        v.extend((0..width).map(|k| if k == order { Rat::one() } else { Rat::zero() }));
        spec_from_vector(&v, m, order)
    } else if !allow_general {
        return Err(Error::NoFit {
            m,
            order,
            min_terms: None,
        });
    } else {
        let nrows = full_rows.len();
        let general = solve_linear(full_rows, vec![Rat::zero(); nrows], (m + 1) * width);
        match general.nullspace.len() {
            0 => {
                return Err(Error::NoFit {
                    m,
                    order,
                    min_terms: None,
                })
            }
            1 => {
                let polys = spec_from_vector(&general.nullspace[0], m, order);
                let lead = polys
                    .iter()
                    .rev()
                    .find(|p| !p.is_zero())
                    .map(Poly::leading)
                    .unwrap();
                let inv = lead.recip();
                polys.iter().map(|p| p.scale(&inv)).collect()
            }
            dim => return Err(Error::AmbiguousFit { m, order, dim }),
        }
    };
    let spec = RecurrenceSpec::new(polys)?;
    if let Some(n) = spec.first_violation(coeffs) {
        return Err(Error::Domain(format!(
            "fitted recurrence fails re-verification at n = {n}"
        )));
    }
    Ok(spec)
}

/// Tries `m = 1, 2, ..., max_m` at fixed `order`. MU-normalized fits are
/// preferred at every `m`; a general fit is only accepted on a second pass.
pub fn fit_recurrence_auto(coeffs: &Series1, order: usize, max_m: usize) -> Result<RecurrenceSpec> {
    for allow_general in [false, true] {
        for m in 1..=max_m {
            match fit_impl(coeffs, m, order, allow_general) {
                Ok(spec) => return Ok(spec),
                Err(Error::NoFit { min_terms: None, .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::NoFit {
        m: max_m,
        order,
        min_terms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{socle, ThetaOperator};
    use crate::series::ratio;

    #[test]
    fn linear_solver_basics() {
        // x + y = 3, x - y = 1
        let rows = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let s = solve_linear(rows, vec![rat(3), rat(1)], 2);
        assert_eq!(s.particular, Some(vec![rat(2), rat(1)]));
        assert!(s.nullspace.is_empty());
        // x + y = 1, 2x + 2y = 3: inconsistent, one-dimensional kernel
        let rows = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let s = solve_linear(rows, vec![rat(1), rat(3)], 2);
        assert_eq!(s.particular, None);
        assert_eq!(s.nullspace, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn geometric_series_fit() {
        let geo = Series1::from_fn(20, |_| rat(1));
        let spec = fit_recurrence(&geo, 1, 1).unwrap();
        assert_eq!(spec.poly(1), &Poly::var());
        assert_eq!(spec.poly(0), &Poly::from_ints(&[-1, -1]));
    }

    #[test]
    fn quintic_fit_recovers_operator() {
        let printed = ThetaOperator::parse("T^4 - 5z(5T+1)(5T+2)(5T+3)(5T+4)").unwrap();
        let spec = printed.to_recurrence().unwrap();
        let phi = socle(&spec, rat(1), 30).unwrap();
        assert_eq!(fit_recurrence(&phi, 1, 4).unwrap(), spec);
        assert_eq!(fit_recurrence_auto(&phi, 4, 5).unwrap(), spec);
    }

    #[test]
    fn too_few_terms_reports_minimum() {
        let geo = Series1::from_fn(5, |_| rat(1));
        assert_eq!(
            fit_recurrence(&geo, 1, 4),
            Err(Error::NoFit {
                m: 1,
                order: 4,
                min_terms: Some(21)
            })
        );
    }

    #[test]
    fn overparametrized_fit_is_ambiguous() {
        let geo = Series1::from_fn(40, |_| rat(1));
        assert!(matches!(
            fit_recurrence(&geo, 2, 1),
            Err(Error::AmbiguousFit { .. })
        ));
    }

    #[test]
    fn non_mu_fit_is_returned_normalized() {
        // a_n = 1/(n+1): P_1(y) = y(y+1), P_0(y) = -(y+1)^2
        let s = Series1::from_fn(20, |n| ratio(1, n as i64 + 1));
        let spec = fit_recurrence(&s, 1, 2).unwrap();
        assert!(!spec.is_mu());
        assert!(spec.annihilates(&s));
        assert_eq!(spec.poly(1), &Poly::from_ints(&[0, 1, 1]));
        assert_eq!(spec.poly(0), &Poly::from_ints(&[-1, -2, -1]));
    }
}
