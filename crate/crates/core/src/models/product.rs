use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::series::{rat_int, Factorials, Rat, Series1, SeriesM};

/// Complete intersection in `ℙ^{n_1} × ... × ℙ^{n_s}`; row `i` of `matrix`
/// is the multidegree of hypersurface `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductProjModel {
    dims: Vec<u32>,
    matrix: Vec<Vec<u32>>,
    w0: Rat,
}

impl ProductProjModel {
    pub fn new(dims: Vec<u32>, matrix: Vec<Vec<u32>>, w0: Rat) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Model("dims: need at least one factor of positive dimension".into()));
        }
        if matrix.is_empty() {
            return Err(Error::Model("matrix: need at least one hypersurface".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != dims.len() {
                return Err(Error::Model(format!(
                    "matrix: row {i} has {} entries for {} factors",
                    row.len(),
                    dims.len()
                )));
            }
            if row.iter().all(|&x| x == 0) {
                return Err(Error::Model(format!("matrix: row {i} is zero")));
            }
        }
        for (j, &n) in dims.iter().enumerate() {
            let col: u32 = matrix.iter().map(|row| row[j]).sum();
            if col != n + 1 {
                return Err(Error::Model(format!(
                    "matrix: Calabi-Yau condition fails in factor {j}, column sum {col} != {}",
                    n + 1
                )));
            }
        }
        let total: u32 = dims.iter().sum();
        if total as usize <= matrix.len() {
            return Err(Error::Model("matrix: too many hypersurfaces for the ambient space".into()));
        }
        if !w0.is_positive() {
            return Err(Error::Model(format!("w0: normalization must be positive, got {w0}")));
        }
        Ok(ProductProjModel { dims, matrix, w0 })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn w0(&self) -> &Rat {
        &self.w0
    }

    pub fn nfactors(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum::<u32>() as usize - self.matrix.len()
    }

    /// `Π_i (Σ_j M_ij l_j)! / Π_j (l_j!)^{n_j+1}`.
    pub fn coefficient(&self, l: &[u32], fact: &mut Factorials) -> Rat {
        let mut num = BigInt::one();
        for row in &self.matrix {
            let k: u64 = row.iter().zip(l).map(|(&m, &x)| m as u64 * x as u64).sum();
            num *= fact.get(k);
        }
        let mut den = BigInt::one();
        for (&n, &x) in self.dims.iter().zip(l) {
            den *= fact.get(x as u64).pow(n + 1);
        }
        rat_int(num) / rat_int(den)
    }

    pub fn product_series(&self, bound: u32) -> SeriesM {
        let mut fact = Factorials::new();
        let t = self.nfactors();
        let terms: Vec<_> = compositions_up_to(t, bound)
            .into_iter()
            .map(|l| {
                let c = self.coefficient(&l, &mut fact);
                (l, c)
            })
            .collect();
        SeriesM::from_terms(t, bound, terms)
    }

    /// Restriction to `z_1 = ... = z_s = z`, computed index by index.
    pub fn diagonal_coefficient(&self, n: u32, fact: &mut Factorials) -> Rat {
        compositions_of(self.nfactors(), n)
            .iter()
            .map(|l| self.coefficient(l, fact))
            .sum()
    }

    pub fn diagonal_series(&self, order: usize) -> Series1 {
        let mut fact = Factorials::new();
        Series1::from_fn(order, |n| self.diagonal_coefficient(n as u32, &mut fact))
    }

    /// Toric data of the product: factor `j` contributes generators
    /// `e_1, ..., e_{n_j}, -Σ e` and hypersurface `i` takes `M_ij` of them.
    /// The Mori basis is the factor indicator vectors.
    pub fn to_toric(&self) -> ToricModel {
        let rank: usize = self.dims.iter().sum::<u32>() as usize;
        let mut generators = Vec::new();
        let mut factor_of = Vec::new();
        let mut offset = 0;
        for (j, &n) in self.dims.iter().enumerate() {
            let n = n as usize;
            for k in 0..n {
                let mut v = vec![0i64; rank];
                v[offset + k] = 1;
                generators.push(v);
                factor_of.push(j);
            }
            let mut v = vec![0i64; rank];
            for x in &mut v[offset..offset + n] {
                *x = -1;
            }
            generators.push(v);
            factor_of.push(j);
            offset += n;
        }
        let mut partition = vec![Vec::new(); self.matrix.len()];
        let mut next = vec![0usize; self.dims.len()];
        let starts: Vec<usize> = self
            .dims
            .iter()
            .scan(0usize, |acc, &n| {
                let s = *acc;
                *acc += n as usize + 1;
                Some(s)
            })
            .collect();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    partition[i].push(starts[j] + next[j]);
                    next[j] += 1;
                }
            }
        }
        let mori = (0..self.dims.len())
            .map(|j| factor_of.iter().map(|&f| i64::from(f == j)).collect())
            .collect();
        ToricModel::new(generators, partition, mori, self.w0.clone())
            .expect("product data always satisfies the toric invariants")
    }
}

/// All `l ∈ ℕ^t` with `Σ l = n`, in lexicographic order.
pub(crate) fn compositions_of(t: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; t];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if t == 0 {
        return out;
    }
    rec(0, n, &mut cur, &mut out);
    out
}

pub(crate) fn compositions_up_to(t: usize, bound: u32) -> Vec<Vec<u32>> {
    (0..=bound).flat_map(|n| compositions_of(t, n)).collect()
}

/// Toric complete-intersection data: fan generators `v_1..v_k`, the
/// partition `E_1..E_r` of their indices and a Mori basis of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModel {
    generators: Vec<Vec<i64>>,
    partition: Vec<Vec<usize>>,
    mori: Vec<Vec<i64>>,
    w0: Rat,
}

impl ToricModel {
    pub fn new(
        generators: Vec<Vec<i64>>,
        partition: Vec<Vec<usize>>,
        mori: Vec<Vec<i64>>,
        w0: Rat,
    ) -> Result<Self> {
        let k = generators.len();
        let rank = generators.first().map_or(0, Vec::len);
        if k == 0 || rank == 0 {
            return Err(Error::Model("generators: need at least one nonzero-rank generator".into()));
        }
        if generators.iter().any(|v| v.len() != rank) {
            return Err(Error::Model("generators: vectors have different lengths".into()));
        }
        let mut seen = vec![false; k];
        for (i, part) in partition.iter().enumerate() {
            for &j in part {
                if j >= k || seen[j] {
                    return Err(Error::Model(format!(
                        "partition: part {i} repeats or overruns generator index {j}"
                    )));
                }
                seen[j] = true;
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::Model(format!("partition: generator {j} is in no part")));
        }
        if mori.is_empty() {
            return Err(Error::Model("mori: need at least one basis relation".into()));
        }
        for (s, lambda) in mori.iter().enumerate() {
            if lambda.len() != k {
                return Err(Error::Model(format!(
                    "mori: relation {s} has {} entries for {k} generators",
                    lambda.len()
                )));
            }
            for c in 0..rank {
                let sum: i64 = lambda.iter().zip(&generators).map(|(l, v)| l * v[c]).sum();
                if sum != 0 {
                    return Err(Error::Model(format!(
                        "mori: relation {s} is not a linear relation among the generators"
                    )));
                }
            }
        }
        if !w0.is_positive() {
            return Err(Error::Model(format!("w0: normalization must be positive, got {w0}")));
        }
        Ok(ToricModel {
            generators,
            partition,
            mori,
            w0,
        })
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn mori(&self) -> &[Vec<i64>] {
        &self.mori
    }

    pub fn w0(&self) -> &Rat {
        &self.w0
    }

    pub fn nvars(&self) -> usize {
        self.mori.len()
    }

    /// Lattice rank minus the number of parts.
    pub fn dim(&self) -> usize {
        self.generators[0].len().saturating_sub(self.partition.len())
    }

    /// `λ = Σ_s c_s λ^(s)`, or `None` when a component is negative.
    fn relation(&self, c: &[u32]) -> Option<Vec<u64>> {
        (0..self.generators.len())
            .map(|j| {
                let v: i64 = self.mori.iter().zip(c).map(|(l, &cs)| l[j] * cs as i64).sum();
                u64::try_from(v).ok()
            })
            .collect()
    }

    /// `Π_i (Σ_{j∈E_i} λ_j)! / Π_j λ_j!`, zero when `λ` leaves `R⁺(E)`.
    pub fn coefficient(&self, c: &[u32], fact: &mut Factorials) -> Rat {
        let Some(lambda) = self.relation(c) else {
            return Rat::from_integer(0.into());
        };
        let mut num = BigInt::one();
        for part in &self.partition {
            num *= fact.get(part.iter().map(|&j| lambda[j]).sum());
        }
        let den = lambda.iter().fold(BigInt::one(), |acc, &x| acc * fact.get(x));
        rat_int(num) / rat_int(den)
    }

    /// Series in the Mori coordinates, enumerated to total degree `bound`.
    pub fn toric_series(&self, bound: u32) -> SeriesM {
        let mut fact = Factorials::new();
        let t = self.nvars();
        let terms: Vec<_> = compositions_up_to(t, bound)
            .into_iter()
            .map(|c| {
                let v = self.coefficient(&c, &mut fact);
                (c, v)
            })
            .collect();
        SeriesM::from_terms(t, bound, terms)
    }

    /// Restriction of the toric series to equal Mori coordinates.
    pub fn diagonal_coefficient(&self, n: u32, fact: &mut Factorials) -> Rat {
        compositions_of(self.nvars(), n)
            .iter()
            .map(|c| self.coefficient(c, fact))
            .sum()
    }

    pub fn diagonal_series(&self, order: usize) -> Series1 {
        let mut fact = Factorials::new();
        Series1::from_fn(order, |n| self.diagonal_coefficient(n as u32, &mut fact))
    }

    /// Text dump of the mirror Laurent polynomials
    /// `P_i(X) = 1 - Σ_{j∈E_i} X^{v_j}`; no evaluation semantics.
    pub fn laurent_dump(&self) -> String {
        let mut out = String::new();
        for (i, part) in self.partition.iter().enumerate() {
            let monos: Vec<String> = part
                .iter()
                .map(|&j| {
                    let factors: Vec<String> = self.generators[j]
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e != 0)
                        .map(|(c, &e)| {
                            if e == 1 {
                                format!("X{}", c + 1)
                            } else {
                                format!("X{}^{e}", c + 1)
                            }
                        })
                        .collect();
                    if factors.is_empty() {
                        "1".to_string()
                    } else {
                        factors.join("*")
                    }
                })
                .collect();
            out.push_str(&format!("P_{}(X) = 1 - ({})\n", i + 1, monos.join(" + ")));
        }
        out
    }
}
