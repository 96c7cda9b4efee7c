//! Multi-parameter systems for products of projective spaces: one
//! two-term rule per variable, the socle and logarithmic solutions, the
//! `q_j` coordinates with integrality diagnostics, and the discriminant of
//! the `ℙ²×ℙ²` family via a resultant.

mod mpoly;

pub use mpoly::{determinant, resultant, MPoly, Poly2};

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::models::ProductProjModel;
use crate::series::{rat, Rat, SeriesM};

/// `⟨c, l⟩ + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LinearForm {
    coeffs: Vec<i64>,
    shift: i64,
}

impl LinearForm {
    fn eval(&self, l: &[i64]) -> i64 {
        self.coeffs.iter().zip(l).map(|(c, x)| c * x).sum::<i64>() + self.shift
    }
}

/// One rule per variable `k`:
/// `Q_k(l) a_l = R_k(l - e_k) a_{l - e_k}` with `Q_k(l) = l_k^{n_k+1}` and
/// `R_k(l) = Π_i Π_{s=1}^{M_ik} (⟨M_i, l⟩ + s)`.
///
/// Equivalently `D_k = Θ_k^{n_k+1} - z_k R_k(Θ)` annihilates the socle
/// series. Despite the name the construction works for any number of
/// factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiRecurrence {
    q_exp: Vec<u32>,
    r: Vec<Vec<LinearForm>>,
}

impl BiRecurrence {
    pub fn from_product(model: &ProductProjModel) -> Self {
        let t = model.nfactors();
        let q_exp = model.dims().iter().map(|&n| n + 1).collect();
        let r = (0..t)
            .map(|k| {
                let mut forms = Vec::new();
                for row in model.matrix() {
                    let coeffs: Vec<i64> = row.iter().map(|&m| m as i64).collect();
                    for s in 1..=row[k] as i64 {
                        forms.push(LinearForm {
                            coeffs: coeffs.clone(),
                            shift: s,
                        });
                    }
                }
                forms
            })
            .collect();
        BiRecurrence { q_exp, r }
    }

    pub fn nvars(&self) -> usize {
        self.q_exp.len()
    }

    fn q(&self, k: usize, l: &[i64]) -> Rat {
        rat(l[k].pow(self.q_exp[k]))
    }

    /// `∂Q_k/∂Θ_j` at `l`.
    fn dq(&self, k: usize, j: usize, l: &[i64]) -> Rat {
        if j != k {
            return Rat::zero();
        }
        let e = self.q_exp[k];
        rat(e as i64 * l[k].pow(e - 1))
    }

    fn r_at(&self, k: usize, l: &[i64]) -> Rat {
        rat(self.r[k].iter().map(|f| f.eval(l)).product())
    }

    /// `∂R_k/∂Θ_j` at `l`, by the product rule.
    fn dr(&self, k: usize, j: usize, l: &[i64]) -> Rat {
        let vals: Vec<i64> = self.r[k].iter().map(|f| f.eval(l)).collect();
        let mut acc = 0i64;
        for (f, form) in self.r[k].iter().enumerate() {
            let c = form.coeffs[j];
            if c == 0 {
                continue;
            }
            let rest: i64 = vals
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .map(|(_, v)| v)
                .product();
            acc += c * rest;
        }
        rat(acc)
    }

    /// Residual of rule `k` at `l` applied to the coefficient array `a`.
    fn residual(&self, k: usize, l: &[u32], a: &SeriesM) -> Rat {
        let li: Vec<i64> = l.iter().map(|&x| x as i64).collect();
        let mut res = self.q(k, &li) * a.coeff(l);
        if l[k] > 0 {
            let mut prev = l.to_vec();
            prev[k] -= 1;
            let pi: Vec<i64> = prev.iter().map(|&x| x as i64).collect();
            res -= self.r_at(k, &pi) * a.coeff(&prev);
        }
        res
    }

    /// Every rule `D_k` annihilates `a` on all indices inside its bound.
    pub fn annihilates(&self, a: &SeriesM) -> bool {
        indices(self.nvars(), a.bound())
            .iter()
            .all(|l| (0..self.nvars()).all(|k| self.residual(k, l, a).is_zero()))
    }

    /// Checks `D_k Ψ_j + (∂_{Θ_j} D_k) Φ_0 = 0` for every rule `k`.
    pub fn log_identity_holds(&self, j: usize, phi0: &SeriesM, psi: &SeriesM) -> bool {
        let bound = phi0.bound().min(psi.bound());
        indices(self.nvars(), bound).iter().all(|l| {
            (0..self.nvars()).all(|k| {
                let li: Vec<i64> = l.iter().map(|&x| x as i64).collect();
                let mut res = self.residual(k, l, psi) + self.dq(k, j, &li) * phi0.coeff(l);
                if l[k] > 0 {
                    let mut prev = l.clone();
                    prev[k] -= 1;
                    let pi: Vec<i64> = prev.iter().map(|&x| x as i64).collect();
                    res -= self.dr(k, j, &pi) * phi0.coeff(&prev);
                }
                res.is_zero()
            })
        })
    }
}

fn indices(t: usize, bound: u32) -> Vec<Vec<u32>> {
    crate::models::compositions_up_to(t, bound)
}

/// Socle and logarithmic solutions of a [`BiRecurrence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSolution {
    pub phi0: SeriesM,
    /// `psi[j]` is the regular part of `(log z_j) Φ_0 + Ψ_j`.
    pub psi: Vec<SeriesM>,
}

/// Solves for `Φ_0` (with `a_0 = 1`) and each `Ψ_j` (with `Ψ_j(0) = 0`) in
/// increasing total degree. Each coefficient is computed from every rule
/// that can determine it; disagreement is an [`Error::InconsistentSystem`].
pub fn biv_solve(rec: &BiRecurrence, bound: u32) -> Result<BiSolution> {
    let t = rec.nvars();
    let order = indices(t, bound);
    let mut a: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    a.insert(vec![0; t], Rat::one());
    let mut b: Vec<BTreeMap<Vec<u32>, Rat>> = vec![BTreeMap::new(); t];
    for l in order.iter().skip(1) {
        let li: Vec<i64> = l.iter().map(|&x| x as i64).collect();
        let mut value: Option<Rat> = None;
        for k in (0..t).filter(|&k| l[k] > 0) {
            let mut prev = l.clone();
            prev[k] -= 1;
            let pi: Vec<i64> = prev.iter().map(|&x| x as i64).collect();
            let ap = a.get(&prev).cloned().unwrap_or_else(Rat::zero);
            let v = rec.r_at(k, &pi) * ap / rec.q(k, &li);
            agree(&mut value, v, l, "socle")?;
        }
        a.insert(l.clone(), value.expect("nonzero index has a positive entry"));
        for (j, bj) in b.iter_mut().enumerate() {
            let mut value: Option<Rat> = None;
            for k in (0..t).filter(|&k| l[k] > 0) {
                let mut prev = l.clone();
                prev[k] -= 1;
                let pi: Vec<i64> = prev.iter().map(|&x| x as i64).collect();
                let ap = a.get(&prev).cloned().unwrap_or_else(Rat::zero);
                let bp = bj.get(&prev).cloned().unwrap_or_else(Rat::zero);
                let num = rec.r_at(k, &pi) * bp - rec.dq(k, j, &li) * &a[l] + rec.dr(k, j, &pi) * ap;
                agree(&mut value, num / rec.q(k, &li), l, &format!("Ψ_{}", j + 1))?;
            }
            bj.insert(l.clone(), value.expect("nonzero index has a positive entry"));
        }
    }
    Ok(BiSolution {
        phi0: SeriesM::from_terms(t, bound, a),
        psi: b.into_iter().map(|m| SeriesM::from_terms(t, bound, m)).collect(),
    })
}

fn agree(slot: &mut Option<Rat>, v: Rat, l: &[u32], what: &str) -> Result<()> {
    match slot {
        Some(prev) if *prev != v => Err(Error::InconsistentSystem {
            index: l.to_vec(),
            detail: format!("{what}: rules give {prev} and {v}"),
        }),
        Some(_) => Ok(()),
        None => {
            *slot = Some(v);
            Ok(())
        }
    }
}

/// `q_j = z_j exp(Ψ_j / Φ_0)` with integrality diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiQ {
    /// `q[j]`, valid to total degree `bound + 1`.
    pub q: Vec<SeriesM>,
    /// `q[j] / z_j`, whose coefficients are the `c^{(j)}_l`.
    pub ratio: Vec<SeriesM>,
    pub all_integral: bool,
    /// `(j, index into q_j, coefficient)` for every non-integral entry.
    pub failures: Vec<(usize, Vec<u32>, Rat)>,
}

pub fn biv_q(phi0: &SeriesM, psi: &[SeriesM]) -> Result<BiQ> {
    let t = phi0.nvars();
    let mut q = Vec::with_capacity(psi.len());
    let mut ratio = Vec::with_capacity(psi.len());
    let mut failures = Vec::new();
    for (j, p) in psi.iter().enumerate() {
        let r = p.div(phi0)?.exp()?;
        let shifted = SeriesM::from_terms(
            t,
            r.bound() + 1,
            r.terms().iter().map(|(e, c)| {
                let mut e = e.clone();
                e[j] += 1;
                (e, c.clone())
            }),
        );
        for (e, c) in shifted.non_integral_terms() {
            failures.push((j, e, c));
        }
        q.push(shifted);
        ratio.push(r);
    }
    Ok(BiQ {
        q,
        ratio,
        all_integral: failures.is_empty(),
        failures,
    })
}

/// Resultant in `(A : B)` of `x(A+B)³ - A³` and `y(A+B)³ - B³`, normalized
/// to constant term 1. Here `x = 27 z_1`, `y = 27 z_2`.
pub fn discriminant_p2p2() -> Poly2 {
    let x = MPoly::var(0, 2);
    let y = MPoly::var(1, 2);
    let one = MPoly::constant(Rat::one(), 2);
    let three = |p: &MPoly| p.scale(&rat(3));
    // coefficients of A³, A²B, AB², B³
    let f = [&x - &one, three(&x), three(&x), x.clone()];
    let g = [y.clone(), three(&y), three(&y), &y - &one];
    let r = resultant(&f, &g, 2);
    let c0 = r.constant_term();
    r.scale(&c0.recip())
}

/// The printed closed form `1 - (x+y) + 3(x² - 7xy + y²) - (x+y)³`.
pub fn printed_discriminant() -> Poly2 {
    let x = MPoly::var(0, 2);
    let y = MPoly::var(1, 2);
    let one = MPoly::constant(Rat::one(), 2);
    let s = &x + &y;
    let quad = &(&x.pow(2) - &(&x * &y).scale(&rat(7))) + &y.pow(2);
    &(&(&one - &s) + &quad.scale(&rat(3))) - &s.pow(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::factorial;

    fn p2p2() -> BiRecurrence {
        BiRecurrence::from_product(&ProductProjModel::new(vec![2, 2], vec![vec![3, 3]], rat(18)).unwrap())
    }

    #[test]
    fn socle_matches_closed_form() {
        let sol = biv_solve(&p2p2(), 6).unwrap();
        for l in indices(2, 6) {
            let (k, m) = (l[0] as u64, l[1] as u64);
            let direct = Rat::new(
                factorial(3 * k + 3 * m),
                factorial(k).pow(3) * factorial(m).pow(3),
            );
            assert_eq!(sol.phi0.coeff(&l), direct);
        }
        assert_eq!(sol.phi0.coeff(&[2, 1]), rat(45360));
        assert!(p2p2().annihilates(&sol.phi0));
    }

    #[test]
    fn first_log_coefficient_and_symmetry() {
        let rec = p2p2();
        let sol = biv_solve(&rec, 6).unwrap();
        assert_eq!(sol.psi[0].coeff(&[1, 0]), rat(15));
        for l in indices(2, 6) {
            assert_eq!(sol.psi[0].coeff(&l), sol.psi[1].coeff(&[l[1], l[0]]));
        }
        assert!(rec.log_identity_holds(0, &sol.phi0, &sol.psi[0]));
        assert!(rec.log_identity_holds(1, &sol.phi0, &sol.psi[1]));
        assert!(!rec.log_identity_holds(0, &sol.phi0, &sol.psi[1]));
    }

    #[test]
    fn q_coordinates() {
        let sol = biv_solve(&p2p2(), 5).unwrap();
        let q = biv_q(&sol.phi0, &sol.psi).unwrap();
        assert_eq!(q.ratio[0].constant_term(), rat(1));
        assert_eq!(q.q[1].coeff(&[0, 1]), rat(1));
        assert!(q.all_integral, "{:?}", q.failures);
    }

    #[test]
    fn discriminant_properties() {
        let d = discriminant_p2p2();
        assert_eq!(d.swap_vars(0, 1), d);
        assert_eq!(d.constant_term(), rat(1));
        // (1 - x - y)^3 - 27xy
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        let one = MPoly::constant(rat(1), 2);
        let expected = &(&(&one - &x) - &y).pow(3) - &(&x * &y).scale(&rat(27));
        assert_eq!(d, expected);
    }

    #[test]
    fn inconsistent_rules_are_reported() {
        // Rules that do not commute: Q = l^2, R_1 = ⟨(1,1),l⟩+1, R_2 = ⟨(2,0),l⟩+1
        let rec = BiRecurrence {
            q_exp: vec![2, 2],
            r: vec![
                vec![LinearForm { coeffs: vec![1, 1], shift: 1 }],
                vec![LinearForm { coeffs: vec![2, 0], shift: 1 }],
            ],
        };
        assert!(matches!(
            biv_solve(&rec, 3),
            Err(Error::InconsistentSystem { .. })
        ));
    }
}
