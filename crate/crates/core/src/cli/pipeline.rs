//! The computation behind each command, shared by the CLI and the tests.

use num_traits::One;
use serde_json::{json, Value};

use crate::coupling::{compare_closed_form, instanton, InstantonReport, SignMatch, YukawaFrame};
use crate::error::{Error, Result};
use crate::models::{extract_params, Extracted};
use crate::operator::{fit_recurrence_auto, min_fit_terms, socle_extend, RecurrenceSpec, ThetaOperator};
use crate::series::{is_integral, parse_rat, Factorials, Poly, Rat, Series1};

use super::cache::{config_hash, Cache, CacheStatus};
use super::config::{Model, Printed, Source};

/// `Φ_0` together with how the cache was used.
#[derive(Clone, Debug)]
pub struct Phi0 {
    pub series: Series1,
    pub cache: CacheStatus,
}

/// Coefficients `a_0..a_order` of `Φ_0`, reusing and extending any cached
/// prefix.
pub fn phi0(model: &Model, order: usize, cache: Option<&Cache>) -> Result<Phi0> {
    let name = &model.config.name;
    let hash = config_hash(&model.config);
    let (prefix, status) = match cache {
        Some(c) => c.load(name, &hash),
        None => (Vec::new(), CacheStatus::Disabled),
    };
    if prefix.len() > order {
        let series = Series1::new(prefix[..=order].to_vec());
        return Ok(Phi0 { series, cache: status });
    }
    let reused = prefix.len();
    log::info!("{name}: computing a_{reused}..a_{order}");
    let coeffs = extend(model, prefix, order)?;
    if let Some(c) = cache {
        c.store(name, &hash, &coeffs)?;
    }
    let status = match status {
        CacheStatus::Hit => CacheStatus::Extended { reused },
        other => other,
    };
    Ok(Phi0 {
        series: Series1::new(coeffs),
        cache: status,
    })
}

fn extend(model: &Model, mut a: Vec<Rat>, order: usize) -> Result<Vec<Rat>> {
    let mut fact = Factorials::new();
    let start = a.len() as u64;
    match &model.source {
        Source::Ci(m) => a.extend((start..=order as u64).map(|n| m.coefficient(n, &mut fact))),
        Source::Product(m) => a.extend((start..=order as u64).map(|n| m.diagonal_coefficient(n as u32, &mut fact))),
        Source::Toric(m) => a.extend((start..=order as u64).map(|n| m.diagonal_coefficient(n as u32, &mut fact))),
        Source::Recurrence(spec) => return forward(spec, a, order),
        Source::TwoTerm(p) => return forward(&p.two_term_ops().to_recurrence()?, a, order),
        Source::Coefficients(c) => {
            if c.len() > a.len() {
                a = c.clone();
            }
            if a.len() > order {
                a.truncate(order + 1);
                return Ok(a);
            }
            return forward(&operator(model, None)?.spec, a, order);
        }
    }
    Ok(a)
}

fn forward(spec: &RecurrenceSpec, mut a: Vec<Rat>, order: usize) -> Result<Vec<Rat>> {
    if a.is_empty() {
        a.push(Rat::one());
    }
    Ok(socle_extend(spec, a, order)?.coeffs().to_vec())
}

/// The operator used downstream, MU-normalized whenever possible.
#[derive(Clone, Debug)]
pub struct OperatorStage {
    pub spec: RecurrenceSpec,
    pub fitted: bool,
    /// Number of coefficients the fit was run on.
    pub fit_terms: Option<usize>,
}

pub fn operator(model: &Model, cache: Option<&Cache>) -> Result<OperatorStage> {
    let order = model.fit_order();
    let (spec, fit_terms) = match &model.source {
        Source::Ci(m) => (m.ci_recurrence()?, None),
        Source::TwoTerm(p) => (p.two_term_ops().to_recurrence()?, None),
        Source::Recurrence(spec) => (spec.clone(), None),
        Source::Coefficients(c) => {
            log::info!("{}: fitting on {} given coefficients", model.config.name, c.len());
            let data = Series1::new(c.clone());
            (fit_recurrence_auto(&data, order, model.max_m)?, Some(c.len()))
        }
        Source::Product(_) | Source::Toric(_) => {
            let need = min_fit_terms(model.max_m, order);
            log::info!("{}: fitting order {order}, up to {} terms, on {need} coefficients", model.config.name, model.max_m + 1);
            let data = phi0(model, need - 1, cache)?.series;
            (fit_recurrence_auto(&data, order, model.max_m)?, Some(need))
        }
    };
    let spec = spec.mu_normalized().unwrap_or(spec);
    Ok(OperatorStage {
        spec,
        fitted: fit_terms.is_some(),
        fit_terms,
    })
}

/// Everything `report` prints, computed to order `terms`.
#[derive(Clone, Debug)]
pub struct FullRun {
    pub phi0: Phi0,
    pub operator: OperatorStage,
    pub frame: YukawaFrame,
    /// `None` when the model is not a 3-fold.
    pub instantons: Option<InstantonReport>,
}

pub fn full_run(model: &Model, terms: usize, max_degree: usize, cache: Option<&Cache>) -> Result<FullRun> {
    let op = operator(model, cache)?;
    let phi = phi0(model, terms, cache)?;
    let frame = YukawaFrame::compute(&op.spec, &model.w0, terms)?;
    let instantons = match frame.dim {
        3 => Some(instanton(&frame.k_q, 3, max_degree.min(terms))?),
        _ => None,
    };
    Ok(FullRun {
        phi0: phi,
        operator: op,
        frame,
        instantons,
    })
}

pub fn series_json(s: &Series1) -> Value {
    Value::Array(s.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn rats_json(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn cache_json(s: &CacheStatus) -> Value {
    match s {
        CacheStatus::Disabled => json!("disabled"),
        CacheStatus::Miss => json!("miss"),
        CacheStatus::Hit => json!("hit"),
        CacheStatus::Extended { reused } => json!({ "extended": { "reused": reused } }),
        CacheStatus::Invalidated => json!("invalidated"),
        CacheStatus::Corrupt(why) => json!({ "corrupt": why }),
    }
}

pub fn operator_json(stage: &OperatorStage) -> Result<Value> {
    let spec = &stage.spec;
    let op = spec.to_theta();
    let class = op.classify();
    let zform = spec.to_zform();
    let params = if spec.m() == 1 && spec.is_mu() {
        match extract_params(spec, Rat::one())? {
            Extracted::Params(p) => json!({ "alpha": rats_json(&p.alpha), "mu": p.mu.to_string() }),
            Extracted::Unfactorable { .. } => Value::Null,
        }
    } else {
        Value::Null
    };
    Ok(json!({
        "fitted": stage.fitted,
        "fit_terms": stage.fit_terms,
        "recurrence": {
            "m": spec.m(),
            "order": spec.order(),
            "polys": spec.polys().iter().map(|p| p.display_in("n")).collect::<Vec<_>>(),
        },
        "theta": op.to_string(),
        "zform": zform.coefficients().iter().map(|p| p.display_in("z")).collect::<Vec<_>>(),
        "picard_fuchs": class.is_picard_fuchs,
        "mu": class.is_mu,
        "two_term": params,
    }))
}

pub fn instantons_json(r: &InstantonReport) -> Value {
    let rows: Vec<Value> = (0..r.n.len())
        .map(|i| {
            json!({
                "degree": i + 1,
                "n": r.n[i].to_string(),
                "gamma": r.gamma[i].to_string(),
                "integral": r.integral[i],
                "nonnegative": r.nonnegative[i],
            })
        })
        .collect();
    json!({
        "n0": r.n0.to_string(),
        "degrees": rows,
        "all_integral": r.all_integral(),
        "all_nonnegative": r.all_nonnegative(),
    })
}

fn all_integral(s: &Series1) -> bool {
    s.coeffs().iter().all(is_integral)
}

/// Integrality and consistency checks that need no published data.
pub fn basic_diagnostics(run: &FullRun) -> Value {
    let f = &run.frame;
    json!({
        "phi0_integral": all_integral(&run.phi0.series),
        "operator_annihilates_phi0": run.operator.spec.annihilates(&run.phi0.series),
        "q_integral": all_integral(&f.q_of_z),
        "z_of_q_integral": all_integral(&f.z_of_q),
        "k_q_integral": all_integral(&f.k_q),
        "instantons_integral": run.instantons.as_ref().map(InstantonReport::all_integral),
        "instantons_nonnegative": run.instantons.as_ref().map(InstantonReport::all_nonnegative),
    })
}

fn parse_list(field: &str, xs: &[String]) -> Result<Vec<Rat>> {
    xs.iter()
        .map(|s| parse_rat(s).map_err(|e| Error::Config(format!("printed.{field}: {e}"))))
        .collect()
}

fn parse_const(field: &str, s: &str) -> Result<Rat> {
    let p = ThetaOperator::parse_z_polynomial(s).map_err(|e| Error::Config(format!("printed.{field}: {e}")))?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(Error::Config(format!("printed.{field}: expected a constant")));
    }
    Ok(p.coeff(0))
}

fn sign_json(s: SignMatch) -> Value {
    serde_json::to_value(s).expect("serializes")
}

/// Compares a computed coefficient list with a printed one.
pub fn prefix_json(computed: &[Rat], printed: &[Rat]) -> Value {
    let n = computed.len().min(printed.len());
    let first = (0..n).find(|&i| computed[i] != printed[i]);
    json!({
        "printed": rats_json(printed),
        "compared": n,
        "complete": n == printed.len(),
        "matches": first.is_none() && n == printed.len(),
        "first_mismatch": first,
    })
}

/// Checks of the printed operator against the computed one.
pub fn printed_operator_json(text: &str, stage: &OperatorStage, phi0: &Series1) -> Value {
    let parsed = ThetaOperator::parse(text).and_then(|op| op.to_recurrence().map(|r| (op, r)));
    match parsed {
        Err(e) => json!({ "parsed": false, "error": e.to_string() }),
        Ok((op, rec)) => json!({
            "parsed": true,
            "annihilates_phi0": rec.annihilates(phi0),
            "first_violation": rec.first_violation(phi0),
            "matches_computed": op.normalized() == stage.spec.to_theta().normalized(),
        }),
    }
}

/// Golden comparisons for `--compare-printed`.
pub fn printed_diagnostics(model: &Model, run: &FullRun, printed: &Printed) -> Result<Value> {
    let f = &run.frame;
    let mut out = serde_json::Map::new();
    if let Some(text) = &printed.operator {
        out.insert("operator".into(), printed_operator_json(text, &run.operator, &run.phi0.series));
    }
    if let Some(cf) = &printed.k_z {
        let num = ThetaOperator::parse_z_polynomial(&cf.num).map_err(|e| Error::Config(format!("printed.k_z.num: {e}")))?;
        let den = ThetaOperator::parse_z_polynomial(&cf.den).map_err(|e| Error::Config(format!("printed.k_z.den: {e}")))?;
        // The published closed forms are rational, i.e. they describe the
        // coupling before division by Φ_0², which is W.
        out.insert("k_z".into(), sign_json(compare_closed_form(&f.w, &num, &den)?));
    }
    if let Some(xs) = &printed.k_q {
        out.insert("k_q".into(), prefix_json(f.k_q.coeffs(), &parse_list("k_q", xs)?));
    }
    if let Some(xs) = &printed.z_of_q {
        out.insert("z_of_q".into(), prefix_json(f.z_of_q.coeffs(), &parse_list("z_of_q", xs)?));
    }
    if let (Some(xs), Some(r)) = (&printed.instantons, &run.instantons) {
        out.insert("instantons".into(), prefix_json(&r.n, &parse_list("instantons", xs)?));
    }
    if let Some(w0) = &printed.w0 {
        let w0 = parse_const("w0", w0)?;
        out.insert("w0".into(), json!({ "printed": w0.to_string(), "matches": w0 == model.w0 }));
        if let Some(mu) = &printed.mu {
            // W = W(0) / (1 - μ z)
            let mu = parse_const("mu", mu)?;
            let den = Poly::new(vec![Rat::one(), -mu]);
            let num = Poly::constant(w0);
            out.insert("w".into(), sign_json(compare_closed_form(&f.w, &num, &den)?));
        }
    }
    if printed.mu.is_some() || printed.alpha.is_some() {
        out.insert("params".into(), params_json(&run.operator.spec, printed)?);
    }
    Ok(Value::Object(out))
}

fn params_json(spec: &RecurrenceSpec, printed: &Printed) -> Result<Value> {
    let extracted = if spec.m() == 1 && spec.is_mu() {
        Some(extract_params(spec, Rat::one())?)
    } else {
        None
    };
    let Some(Extracted::Params(p)) = extracted else {
        return Ok(json!({ "extracted": false }));
    };
    let mut out = serde_json::Map::new();
    out.insert("extracted".into(), json!(true));
    out.insert("alpha".into(), rats_json(&p.alpha));
    out.insert("mu".into(), json!(p.mu.to_string()));
    out.insert("reflexive".into(), json!(p.is_reflexive()));
    if let Some(mu) = &printed.mu {
        let mu = parse_const("mu", mu)?;
        out.insert("printed_mu".into(), json!(mu.to_string()));
        out.insert("mu_matches".into(), json!(mu == p.mu));
    }
    if let Some(alpha) = &printed.alpha {
        let mut a = parse_list("alpha", alpha)?;
        a.sort();
        let k = a.len();
        let reflexive = (0..k).all(|i| (&a[i] + &a[k - 1 - i]).is_one());
        out.insert("printed_alpha".into(), rats_json(&a));
        out.insert("printed_alpha_reflexive".into(), json!(reflexive));
        out.insert("alpha_matches".into(), json!(a == p.alpha));
    }
    Ok(Value::Object(out))
}
