use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;
use walgebra::brst::BrstContext;
use walgebra::gl::{centralizer_basis, check_good, slodowy_degrees};
use walgebra::hecke::{double_centralizer_check, DualitySetting, EtaConvention, WGenerators};
use walgebra::linalg::{parse_rational, rat, render, Rational};
use walgebra::pbw::{monomial_counts, regular_w, WContext};
use walgebra::polytope::{adjacency_chain, adjacent, integral_points, pyramid_of_point, weights_and_d};
use walgebra::{selftest as suite, Partition, Pyramid};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] walgebra::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub struct Report {
    pub value: Value,
    pub pass: bool,
}

impl Report {
    fn new(pass: bool, mut value: Value) -> Report {
        value["pass"] = json!(pass);
        Report { value, pass }
    }
}

/// `3,2,2` or `[3,2,2]`.
fn parse_shape(s: &str) -> Result<Partition, CliError> {
    let s = s.trim();
    if s.starts_with('[') {
        Ok(serde_json::from_str(s)?)
    } else {
        Ok(s.parse()?)
    }
}

/// Inline JSON, or the path of a file holding it.
fn parse_pyramid(s: &str) -> Result<Pyramid, CliError> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).map_err(|source| CliError::Read { path: s.to_string(), source })?
    };
    Ok(serde_json::from_str(&text)?)
}

fn parse_point(s: &str) -> Result<Vec<Rational>, CliError> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| parse_rational(t.trim_matches('"')).ok_or_else(|| CliError::Usage(format!("not a rational: {t:?}"))))
        .collect()
}

fn render_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(render).collect()
}

fn pyramid_json(p: &Pyramid) -> Value {
    json!({
        "shape": p.shape(),
        "left": p.left(),
        "even": p.is_even(),
        "symmetric": p.is_symmetric(),
        "french": p.is_french(),
    })
}

pub fn pyramids(shape: &str) -> Result<Report, CliError> {
    let lam = parse_shape(shape)?;
    let all = Pyramid::enumerate(&lam);
    Ok(Report::new(
        true,
        json!({"shape": lam, "count": all.len(), "pyramids": all.iter().map(pyramid_json).collect::<Vec<_>>()}),
    ))
}

pub fn grading_check(pyramid: &str) -> Result<Report, CliError> {
    let p = parse_pyramid(pyramid)?;
    let grading = p.grading();
    let report = check_good(&grading, &p.nilpotent());
    Ok(Report::new(report.all_pass(), json!({"pyramid": p, "grading": grading, "e": p.nilpotent(), "report": report})))
}

pub fn centralizer(pyramid: &str) -> Result<Report, CliError> {
    let p = parse_pyramid(pyramid)?;
    let grading = p.grading();
    let e = p.nilpotent();
    let basis = centralizer_basis(&p);
    let commute = basis.iter().all(|z| e.bracket(z).is_zero());
    let full = basis.len() == p.shape().centralizer_dim();
    let elements: Vec<Value> = basis
        .iter()
        .map(|z| json!({"matrix": z, "degree": grading.degree_of(z).map(|d| render(&d))}))
        .collect();
    Ok(Report::new(
        commute && full,
        json!({"pyramid": p, "dim": basis.len(), "slodowy_degrees": slodowy_degrees(&p), "elements": elements}),
    ))
}

pub fn polytope(shape: &str) -> Result<Report, CliError> {
    let lam = parse_shape(shape)?;
    let weights: Vec<Value> = weights_and_d(&lam)
        .iter()
        .map(|w| json!({"source": w.weight.source, "target": w.weight.target, "d": w.d}))
        .collect();
    let points = integral_points(&lam);
    let pyrs = points.iter().map(|p| pyramid_of_point(&lam, p)).collect::<Result<Vec<_>, _>>()?;
    let pass = pyrs.len() == Pyramid::enumerate(&lam).len();
    let listed: Vec<Value> =
        points.iter().zip(&pyrs).map(|(p, q)| json!({"point": render_point(p), "left": q.left()})).collect();
    Ok(Report::new(
        pass,
        json!({"shape": lam, "weights": weights, "integral_point_count": points.len(), "integral_points": listed}),
    ))
}

pub fn adjacency(shape: &str, p: &str, q: &str) -> Result<Report, CliError> {
    let lam = parse_shape(shape)?;
    let (p, q) = (parse_point(p)?, parse_point(q)?);
    let chain = adjacency_chain(&lam, &p, &q)?;
    let mut links = true;
    for w in chain.windows(2) {
        links &= adjacent(&lam, &w[0], &w[1])?;
    }
    Ok(Report::new(
        links,
        json!({
            "shape": lam,
            "adjacent": adjacent(&lam, &p, &q)?,
            "chain": chain.iter().map(|x| render_point(x)).collect::<Vec<_>>(),
        }),
    ))
}

pub fn w_generators(n: usize) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let ctx = WContext::lagrangian(&Pyramid::french(&Partition::row(n)));
    let w = regular_w(&ctx.alg, n);
    let invariant = w.iter().all(|y| ctx.is_whittaker_invariant(y));
    let commute = (0..n).all(|i| (i + 1..n).all(|j| ctx.alg.commutator(&w[i], &w[j]).is_zero()));
    Ok(Report::new(
        invariant && commute,
        json!({
            "n": n,
            "generators": w.iter().map(|y| ctx.alg.to_json(y)).collect::<Vec<_>>(),
            "invariant": invariant,
            "commute": commute,
        }),
    ))
}

pub fn w_search(pyramid: &str, max_degree: i64, isotropic_rank: Option<usize>) -> Result<Report, CliError> {
    let p = parse_pyramid(pyramid)?;
    if max_degree < 0 {
        return Err(CliError::Usage("max degree must be nonnegative".into()));
    }
    let half = p.grading().units_of_degree(&rat(-1)).len() / 2;
    let rank = isotropic_rank.unwrap_or(half);
    let ctx = WContext::for_pyramid(&p, rank)?;
    let ws = ctx.w_space(max_degree);
    let dims = ws.graded_dims();
    let expected = monomial_counts(&slodowy_degrees(&p), max_degree);
    let keyed = |m: &BTreeMap<i64, usize>| -> BTreeMap<String, usize> { m.iter().map(|(d, c)| (d.to_string(), *c)).collect() };
    let basis: BTreeMap<String, Vec<Value>> = ws
        .by_degree
        .iter()
        .map(|(d, v)| (d.to_string(), v.iter().map(|y| ctx.alg.to_json(y)).collect()))
        .collect();
    let symbols: Vec<&str> = (0..ctx.alg.dim()).map(|a| ctx.alg.basis().label(a)).collect();
    Ok(Report::new(
        dims == expected,
        json!({
            "pyramid": p,
            "isotropic_rank": rank,
            "max_degree": max_degree,
            "symbols": symbols,
            "graded_dims": keyed(&dims),
            "expected": keyed(&expected),
            "basis": basis,
        }),
    ))
}

pub fn brst_check(pyramid: &str) -> Result<Report, CliError> {
    let p = parse_pyramid(pyramid)?;
    let b = BrstContext::for_pyramid(&p)?;
    let samples = [b.ctx.alg.one(), b.ctx.alg.symbol(0)];
    let report = b.check(7, &samples);
    let per_generator = |f: fn(&walgebra::brst::GeneratorCheck) -> bool| -> BTreeMap<String, bool> {
        report.generators.iter().map(|g| (g.generator.clone(), f(g))).collect()
    };
    Ok(Report::new(
        report.all_pass(),
        json!({
            "pyramid": p,
            "dim_m": b.dim_m(),
            "d_squared": per_generator(|g| g.d_squared_zero),
            "matches_phi": per_generator(|g| g.matches_phi),
            "raises_degree": per_generator(|g| g.raises_degree),
            "phi_basis_independent": report.phi_basis_independent,
            "q_well_defined": report.q_well_defined,
        }),
    ))
}

pub fn schur_duality(shape: &str, d: usize, conv: EtaConvention) -> Result<Report, CliError> {
    let lam = parse_shape(shape)?;
    let setting = DualitySetting::new(&lam, d);
    let w = WGenerators::new(&lam);
    let report = double_centralizer_check(&setting, &w, conv)?;
    Ok(Report::new(report.all_pass(), serde_json::to_value(&report)?))
}

pub fn selftest(criterion: Option<u8>) -> Result<Report, CliError> {
    let results = match criterion {
        Some(id) => vec![suite::run(id).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?],
        None => suite::run_all(),
    };
    for r in &results {
        eprintln!("criterion {:>2} {} {} ({:.2}s)", r.id, if r.pass { "PASS" } else { "FAIL" }, r.name, r.seconds);
    }
    let pass = results.iter().all(|r| r.pass);
    let listed: Vec<Value> =
        results.iter().map(|r| json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail})).collect();
    Ok(Report::new(pass, json!({"criteria": listed})))
}
