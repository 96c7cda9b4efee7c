//! Model configuration files and the built-in catalog.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{CIModel, HypergeomParams, ProductProjModel, ToricModel};
use crate::operator::{RecurrenceSpec, ThetaOperator};
use crate::series::{parse_rat, Poly, Rat};

const CATALOG: &str = include_str!("../../catalog/models.json");

/// Default number of recurrence terms tried when fitting.
pub const DEFAULT_MAX_M: usize = 5;

/// One model as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    /// Dimension of the Calabi-Yau; checked against the model when derivable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Normalization `W(0)` as `"p"` or `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<String>,
    /// Default truncation order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Largest number of recurrence terms tried when fitting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_m: Option<usize>,
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Printed>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelKind {
    CompleteIntersection {
        degrees: Vec<u32>,
    },
    WeightedCi {
        degrees: Vec<u32>,
        weights: Vec<u32>,
    },
    /// `matrix[i][j]` is the degree of hypersurface `i` in factor `j`.
    ProductProjective {
        dims: Vec<u32>,
        matrix: Vec<Vec<u32>>,
    },
    Toric {
        generators: Vec<Vec<i64>>,
        partition: Vec<Vec<usize>>,
        mori: Vec<Vec<i64>>,
    },
    /// Exactly one of `operator`, `polys` or `coefficients`.
    ExplicitRecurrence {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        operator: Option<String>,
        /// `polys[j]` lists the coefficients of `P_j` from the constant up.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        polys: Option<Vec<Vec<String>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coefficients: Option<Vec<String>>,
    },
    TwoTerm {
        alpha: Vec<String>,
        mu: String,
    },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::CompleteIntersection { .. } => "complete_intersection",
            ModelKind::WeightedCi { .. } => "weighted_ci",
            ModelKind::ProductProjective { .. } => "product_projective",
            ModelKind::Toric { .. } => "toric",
            ModelKind::ExplicitRecurrence { .. } => "explicit_recurrence",
            ModelKind::TwoTerm { .. } => "two_term",
        }
    }
}

/// `num / den` with both sides polynomials in `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedForm {
    pub num: String,
    pub den: String,
}

/// Published values used by `--compare-printed`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Printed {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_z: Option<ClosedForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_of_q: Option<Vec<String>>,
    /// `n_1, n_2, ...`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instantons: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<String>,
    /// Integer expression such as `2^5*3^6`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Where the coefficients of `Φ_0` come from.
#[derive(Clone, Debug)]
pub enum Source {
    Ci(CIModel),
    Product(ProductProjModel),
    Toric(ToricModel),
    /// A recurrence given directly; `Φ_0` is its socle solution.
    Recurrence(RecurrenceSpec),
    /// Raw coefficients; the operator has to be fitted.
    Coefficients(Vec<Rat>),
    TwoTerm(HypergeomParams),
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Model {
    pub config: ModelConfig,
    pub source: Source,
    pub w0: Rat,
    pub dim: usize,
    pub max_m: usize,
}

impl Model {
    /// Whether the operator is obtained by fitting rather than construction.
    pub fn is_fitted(&self) -> bool {
        matches!(
            self.source,
            Source::Product(_) | Source::Toric(_) | Source::Coefficients(_)
        )
    }

    /// Recurrence order used by fits.
    pub fn fit_order(&self) -> usize {
        self.dim + 1
    }
}

fn cfg(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn field_rat(field: &str, s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| cfg(field, e))
}

/// Re-labels model construction failures as named-field config errors.
fn model_err(e: Error) -> Error {
    match e {
        Error::Model(m) if m.starts_with("w0:") => Error::Config(m),
        Error::Model(m) => Error::Config(format!("model.{m}")),
        other => other,
    }
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        ModelConfig::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Checks the payload and builds the model.
    pub fn resolve(&self) -> Result<Model> {
        if self.name.trim().is_empty() {
            return Err(cfg("name", "must not be empty"));
        }
        let w0 = match &self.w0 {
            Some(s) => {
                let v = field_rat("w0", s)?;
                if v <= Rat::from_integer(0.into()) {
                    return Err(cfg("w0", format!("must be positive, got {v}")));
                }
                Some(v)
            }
            None => None,
        };
        let need_w0 = || w0.clone().ok_or_else(|| cfg("w0", format!("required for kind {}", self.model.name())));
        let max_m = self.max_m.unwrap_or(DEFAULT_MAX_M);
        if max_m == 0 {
            return Err(cfg("max_m", "must be at least 1"));
        }
        if self.terms == Some(0) {
            return Err(cfg("terms", "must be at least 1"));
        }
        let (source, w0, derived_dim) = match &self.model {
            ModelKind::CompleteIntersection { degrees } => {
                let mut m = CIModel::ordinary(degrees.clone()).map_err(model_err)?;
                if let Some(w) = &w0 {
                    m = m.with_w0(w.clone()).map_err(model_err)?;
                }
                let (w, d) = (m.w0().clone(), m.dim());
                (Source::Ci(m), w, Some(d))
            }
            ModelKind::WeightedCi { degrees, weights } => {
                let mut m = CIModel::weighted(degrees.clone(), weights.clone()).map_err(model_err)?;
                if let Some(w) = &w0 {
                    m = m.with_w0(w.clone()).map_err(model_err)?;
                }
                let (w, d) = (m.w0().clone(), m.dim());
                (Source::Ci(m), w, Some(d))
            }
            ModelKind::ProductProjective { dims, matrix } => {
                let w = need_w0()?;
                let m = ProductProjModel::new(dims.clone(), matrix.clone(), w.clone()).map_err(model_err)?;
                let d = m.dim();
                (Source::Product(m), w, Some(d))
            }
            ModelKind::Toric {
                generators,
                partition,
                mori,
            } => {
                let w = need_w0()?;
                let m = ToricModel::new(generators.clone(), partition.clone(), mori.clone(), w.clone())
                    .map_err(model_err)?;
                let d = m.dim();
                (Source::Toric(m), w, Some(d))
            }
            ModelKind::ExplicitRecurrence {
                operator,
                polys,
                coefficients,
            } => {
                let w = need_w0()?;
                let given = [operator.is_some(), polys.is_some(), coefficients.is_some()];
                if given.iter().filter(|&&b| b).count() != 1 {
                    return Err(cfg(
                        "model.operator",
                        "exactly one of operator, polys or coefficients must be given",
                    ));
                }
                if let Some(text) = operator {
                    let op = ThetaOperator::parse(text).map_err(|e| cfg("model.operator", e))?;
                    let spec = op.to_recurrence().map_err(|e| cfg("model.operator", e))?;
                    let d = spec.order().checked_sub(1).ok_or_else(|| cfg("model.operator", "order 0"))?;
                    (Source::Recurrence(spec), w, Some(d))
                } else if let Some(ps) = polys {
                    let mut out = Vec::with_capacity(ps.len());
                    for (j, p) in ps.iter().enumerate() {
                        let field = format!("model.polys[{j}]");
                        let c = p.iter().map(|s| field_rat(&field, s)).collect::<Result<Vec<_>>>()?;
                        out.push(Poly::new(c));
                    }
                    let spec = RecurrenceSpec::new(out).map_err(|e| cfg("model.polys", e))?;
                    let d = spec.order().checked_sub(1).ok_or_else(|| cfg("model.polys", "order 0"))?;
                    (Source::Recurrence(spec), w, Some(d))
                } else {
                    let cs = coefficients.as_ref().expect("checked above");
                    let c = cs
                        .iter()
                        .enumerate()
                        .map(|(i, s)| field_rat(&format!("model.coefficients[{i}]"), s))
                        .collect::<Result<Vec<_>>>()?;
                    if c.is_empty() || c[0] != Rat::from_integer(1.into()) {
                        return Err(cfg("model.coefficients", "the first coefficient must be 1"));
                    }
                    (Source::Coefficients(c), w, None)
                }
            }
            ModelKind::TwoTerm { alpha, mu } => {
                let w = need_w0()?;
                let a = alpha
                    .iter()
                    .enumerate()
                    .map(|(i, s)| field_rat(&format!("model.alpha[{i}]"), s))
                    .collect::<Result<Vec<_>>>()?;
                if a.len() < 2 {
                    return Err(cfg("model.alpha", "need at least two parameters"));
                }
                let mu = field_rat("model.mu", mu)?;
                if mu == Rat::from_integer(0.into()) {
                    return Err(cfg("model.mu", "must be nonzero"));
                }
                let d = a.len() - 1;
                (Source::TwoTerm(HypergeomParams::new(a, mu, w.clone())), w, Some(d))
            }
        };
        let dim = match (derived_dim, self.dim) {
            (Some(d), Some(given)) if d != given => {
                return Err(cfg("dim", format!("model has dimension {d}, config says {given}")));
            }
            (Some(d), _) => d,
            (None, Some(given)) => given,
            (None, None) => return Err(cfg("dim", "required when only coefficients are given")),
        };
        if dim == 0 {
            return Err(cfg("dim", "must be positive"));
        }
        Ok(Model {
            config: self.clone(),
            source,
            w0,
            dim,
            max_m,
        })
    }
}

/// Every built-in model, in catalog order.
pub fn catalog() -> Vec<ModelConfig> {
    serde_json::from_str(CATALOG).expect("built-in catalog is valid JSON")
}

pub fn catalog_entry(name: &str) -> Result<ModelConfig> {
    catalog()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::Config(format!("model: no built-in model named `{name}`")))
}
