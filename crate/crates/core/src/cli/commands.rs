use std::path::Path;

use serde_json::json;

use super::render::{num, opt_num, Format, Output, Table};
use super::{Cli, CliError, Command, EXIT_ADMISSIBILITY, EXIT_INPUT};
use crate::constants::{
    bh_envelope, bh_lower_real, bh_upper, hl_lower_real, hl_threshold, hl_upper_best,
    hl_upper_p_dependent, hl_upper_p_free, hl_upper_sqrt2, BoundReport, FormulaId,
};
use crate::error::Error;
use crate::exponents::{
    gen_bh_upper_prior, gen_bh_upper_tol, gen_hl_upper_tol, gen_legacy_upper,
    interpolation_weights_tol, max_q_threshold, MultiExponent,
};
use crate::khinchine::ScalarField;
use crate::scalar::ExtendedReal;
use crate::verifier::search::CEILING_SLACK;
use crate::verifier::{
    applicable_upper_bound, certified_ratio, search_extremal, sup_norm_ascent, AscentConfig,
    CoefficientTensor, NormKind,
};

type CmdResult = Result<Output, CliError>;

const MAX_SCAN_ROWS: f64 = 1e6;

pub(super) fn dispatch(cli: &Cli) -> Result<(Output, Format), CliError> {
    let out = match &cli.command {
        Command::BhConst { m, field } => bh_const(*m, *field)?,
        Command::HlConst { m, p, field } => hl_const(*m, *p, *field)?,
        Command::GenConst { q, p, field } => gen_const(&q.0, *p, *field, cli.tol)?,
        Command::Interpolate { q, p, s } => interpolate(&q.0, *p, *s, cli.tol)?,
        Command::Verify { tensor, q, p } => verify(tensor, &q.0, *p, cli.cap, cli.seed, cli.tol)?,
        Command::Scan {
            m,
            p_min,
            p_max,
            step,
            field,
        } => return Ok((scan(*m, *p_min, *p_max, *step, *field)?, Format::Csv)),
        Command::Search { m, n, p, q, iters } => search(
            *m as usize,
            *n as usize,
            *p,
            &q.0,
            *iters,
            cli.seed,
            cli.cap,
        )?,
    };
    Ok((out, Format::Table))
}

fn field_str(f: Option<ScalarField>) -> String {
    f.map(|f| f.to_string()).unwrap_or_else(|| "any".into())
}

fn p_str(p: Option<ExtendedReal>) -> String {
    p.map(|p| p.to_string()).unwrap_or_default()
}

fn bounds_table(bounds: &[BoundReport]) -> Table {
    let mut t = Table::new(&["formula", "field", "m", "p", "value", "valid", "note"]);
    for b in bounds {
        t.push([
            b.formula.as_str().to_string(),
            field_str(b.field),
            b.m.to_string(),
            p_str(b.p),
            num(b.value),
            b.valid.to_string(),
            b.note.clone(),
        ]);
    }
    t
}

fn q_str(q: &[f64]) -> String {
    let parts: Vec<String> = q.iter().map(|&x| num(x)).collect();
    format!("({})", parts.join(", "))
}

fn bh_const(m: u32, field: ScalarField) -> CmdResult {
    let mut bounds = vec![bh_upper(m, field)?, bh_envelope(m, field)?];
    if field == ScalarField::Real {
        bounds.push(bh_lower_real(m)?);
    }
    let json = json!({ "command": "bh-const", "m": m, "field": field, "bounds": bounds });
    Ok(Output::new(json, vec![bounds_table(&bounds)]))
}

fn hl_const(m: u32, p: ExtendedReal, field: ScalarField) -> CmdResult {
    let best = hl_upper_best(m, p, field)?;
    let mut bounds = vec![hl_upper_sqrt2(m)?, hl_upper_p_dependent(m, p, field)?];
    if p.gt(2.0 * m as f64) {
        bounds.push(hl_upper_p_free(m, p, field)?);
    }
    bounds.push(best.clone());
    if field == ScalarField::Real {
        bounds.push(match p {
            ExtendedReal::Infinity => bh_lower_real(m)?,
            ExtendedReal::Finite(_) => hl_lower_real(m, p)?,
        });
    }
    let threshold = hl_threshold(m);
    let above = p.gt(threshold as f64);
    let json = json!({
        "command": "hl-const",
        "m": m,
        "p": p,
        "field": field,
        "threshold": threshold,
        "above_threshold": above,
        "winner": best.note,
        "best": best.value,
        "bounds": bounds,
    });
    let mut summary = Table::key_value();
    summary.kv("m", m.to_string());
    summary.kv("p", p.to_string());
    summary.kv("field", field.to_string());
    summary.kv("threshold", threshold.to_string());
    summary.kv("above_threshold", above.to_string());
    summary.kv("winner", best.note.clone());
    summary.kv("best", num(best.value));
    Ok(Output::new(json, vec![summary, bounds_table(&bounds)]))
}

fn gen_const(qv: &[f64], p: ExtendedReal, field: ScalarField, tol: f64) -> CmdResult {
    let q = MultiExponent::new(qv.to_vec())?;
    let m = q.m() as u32;
    let bound = match p {
        ExtendedReal::Infinity => gen_bh_upper_tol(&q, field, tol)?,
        ExtendedReal::Finite(_) => gen_hl_upper_tol(&q, p, field, tol)?,
    };
    let case = if bound.formula == FormulaId::GenCaseI {
        "i"
    } else {
        "ii"
    };
    let legacy = gen_legacy_upper(m, field)?;
    let prior = if field == ScalarField::Complex && p.is_infinite() && case == "i" {
        gen_bh_upper_prior(&q).ok()
    } else {
        None
    };
    let cutoff = max_q_threshold(m);
    let json = json!({
        "command": "gen-const",
        "m": m,
        "p": p,
        "field": field,
        "q": q.as_slice(),
        "case": case,
        "max_q": q.max(),
        "cutoff": cutoff,
        "bound": bound,
        "legacy": legacy,
        "prior": prior,
    });
    let mut summary = Table::key_value();
    summary.kv("m", m.to_string());
    summary.kv("p", p.to_string());
    summary.kv("field", field.to_string());
    summary.kv("q", q_str(q.as_slice()));
    summary.kv("case", case);
    summary.kv("max_q", num(q.max()));
    summary.kv("cutoff", num(cutoff));
    summary.kv("bound", num(bound.value));
    let mut rows = vec![bound, legacy];
    rows.extend(prior);
    Ok(Output::new(json, vec![summary, bounds_table(&rows)]))
}

fn interpolate(qv: &[f64], p: ExtendedReal, s: Option<f64>, tol: f64) -> CmdResult {
    // every failed precondition here is reported as an admissibility failure
    let as_adm = |e: Error| CliError::new(EXIT_ADMISSIBILITY, e.to_string());
    let q = MultiExponent::new(qv.to_vec()).map_err(as_adm)?;
    let d = interpolation_weights_tol(&q, p, s, tol).map_err(as_adm)?;
    let residuals = d.residuals(&q);
    let json = json!({
        "command": "interpolate",
        "m": q.m(),
        "p": p,
        "q": q.as_slice(),
        "s": d.s,
        "s_default": s.is_none(),
        "lambda": d.lambda,
        "thetas": d.thetas,
        "theta_sum": d.theta_sum(),
        "vertices": d.vertices,
        "residuals": residuals,
    });
    let mut summary = Table::key_value();
    summary.kv("m", q.m().to_string());
    summary.kv("p", p.to_string());
    summary.kv("s", num(d.s));
    summary.kv("s_source", if s.is_none() { "default" } else { "given" });
    summary.kv("lambda", num(d.lambda));
    summary.kv("theta_sum", num(d.theta_sum()));
    let mut slots = Table::new(&["j", "q_j", "theta_j", "vertex_j", "residual_j"]);
    for (j, ((&qj, &theta), (vertex, &res))) in q
        .as_slice()
        .iter()
        .zip(&d.thetas)
        .zip(d.vertices.iter().zip(&residuals))
        .enumerate()
    {
        slots.push([
            (j + 1).to_string(),
            num(qj),
            num(theta),
            q_str(vertex),
            num(res),
        ]);
    }
    Ok(Output::new(json, vec![summary, slots]))
}

fn verify(path: &Path, qv: &[f64], p: ExtendedReal, cap: usize, seed: u64, tol: f64) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    let t = CoefficientTensor::from_json(&text)?;
    if qv.len() != t.m() {
        return Err(Error::DimensionMismatch(format!(
            "tensor has m = {} slots but {} exponents were given",
            t.m(),
            qv.len()
        ))
        .into());
    }
    if t.is_zero() {
        return Err(Error::InvalidTensor("tensor is identically zero".into()).into());
    }
    let q = MultiExponent::new(qv.to_vec())?;
    let field = t.field();
    let bound = applicable_upper_bound(&q, p, field, tol)?;
    let r = certified_ratio(&t, &q, p, cap)?;
    let exact = r.denominator.kind == NormKind::Exact;
    let (lower, lower_method) = if exact {
        (r.denominator.value, r.denominator.method.clone())
    } else {
        let a = sup_norm_ascent(&t, p, &AscentConfig::default(), seed)?;
        (a.value, a.method)
    };
    let pass = r.ratio <= bound.value + CEILING_SLACK;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let json = json!({
        "command": "verify",
        "m": t.m(),
        "n": t.n(),
        "field": field,
        "p": p,
        "q": q.as_slice(),
        "mixed_norm": r.numerator,
        "norm": {
            "lower": lower,
            "upper": r.denominator.value,
            "exact": exact,
            "lower_method": lower_method,
            "upper_method": r.denominator.method,
        },
        "denominator": r.denominator,
        "ratio": r.ratio,
        "bound": bound,
        "verdict": verdict,
        "seed": seed,
    });
    let mut tb = Table::key_value();
    tb.kv("m", t.m().to_string());
    tb.kv("n", t.n().to_string());
    tb.kv("field", field.to_string());
    tb.kv("p", p.to_string());
    tb.kv("q", q_str(q.as_slice()));
    tb.kv("mixed_norm", num(r.numerator));
    if exact {
        tb.kv("norm", format!("{} (exact, {})", num(lower), lower_method));
    } else {
        tb.kv(
            "norm",
            format!(
                "[{}, {}] ({}, {})",
                num(lower),
                num(r.denominator.value),
                lower_method,
                r.denominator.method
            ),
        );
    }
    tb.kv("ratio", num(r.ratio));
    tb.kv("bound", num(bound.value));
    tb.kv("bound_formula", bound.formula.as_str());
    tb.kv("verdict", verdict);
    tb.kv("seed", seed.to_string());
    Ok(Output::new(json, vec![tb]))
}

fn scan(m: u32, p_min: f64, p_max: f64, step: f64, field: ScalarField) -> CmdResult {
    let two_m = 2.0 * m as f64;
    if p_min < two_m {
        return Err(Error::Domain(format!("--p-min must be >= 2m = {two_m}, got {p_min}")).into());
    }
    if !(p_max > p_min) || !(step > 0.0) {
        return Err(Error::Domain(format!(
            "need p-min < p-max and step > 0, got {p_min}, {p_max}, {step}"
        ))
        .into());
    }
    let count = ((p_max - p_min) / step * (1.0 + 1e-12)).floor();
    if count >= MAX_SCAN_ROWS {
        return Err(
            Error::Domain(format!("scan would produce more than {MAX_SCAN_ROWS} rows")).into(),
        );
    }
    let threshold = hl_threshold(m);
    let mut table = Table::new(&[
        "m",
        "p",
        "legacy",
        "p_dependent",
        "p_free",
        "best",
        "lower",
        "above_threshold",
    ]);
    let mut rows = Vec::new();
    for k in 0..=count as u64 {
        let pv = p_min + k as f64 * step;
        let p = ExtendedReal::finite(pv)?;
        let legacy = hl_upper_sqrt2(m)?.value;
        let dep = hl_upper_p_dependent(m, p, field)?.value;
        let free = if p.gt(two_m) {
            let r = hl_upper_p_free(m, p, field)?;
            r.valid.then_some(r.value)
        } else {
            None
        };
        let best = hl_upper_best(m, p, field)?.value;
        let lower = match field {
            ScalarField::Real => Some(hl_lower_real(m, p)?.value),
            ScalarField::Complex => None,
        };
        let above = p.gt(threshold as f64);
        table.push([
            m.to_string(),
            num(pv),
            num(legacy),
            num(dep),
            opt_num(free),
            num(best),
            opt_num(lower),
            above.to_string(),
        ]);
        rows.push(json!({
            "m": m,
            "p": pv,
            "legacy": legacy,
            "p_dependent": dep,
            "p_free": free,
            "best": best,
            "lower": lower,
            "above_threshold": above,
        }));
    }
    let json = json!({
        "command": "scan",
        "m": m,
        "field": field,
        "threshold": threshold,
        "rows": rows,
    });
    Ok(Output::new(json, vec![table]))
}

fn search(
    m: usize,
    n: usize,
    p: ExtendedReal,
    qv: &[f64],
    iters: usize,
    seed: u64,
    cap: usize,
) -> CmdResult {
    if qv.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "m = {m} but {} exponents were given",
            qv.len()
        ))
        .into());
    }
    let q = MultiExponent::new(qv.to_vec())?;
    let r = search_extremal(m, n, p, &q, iters, seed, cap)?;
    let tensor = r.tensor.to_json();
    let json = json!({
        "command": "search",
        "m": m,
        "n": n,
        "p": p,
        "q": q.as_slice(),
        "iters": iters,
        "seed": seed,
        "ratio": r.ratio,
        "bound": r.bound,
        "gap": r.gap(),
        "accepted": r.accepted,
        "tensor": tensor,
    });
    let mut tb = Table::key_value();
    tb.kv("m", m.to_string());
    tb.kv("n", n.to_string());
    tb.kv("p", p.to_string());
    tb.kv("q", q_str(q.as_slice()));
    tb.kv("iters", iters.to_string());
    tb.kv("seed", seed.to_string());
    tb.kv("ratio", num(r.ratio));
    tb.kv("bound", num(r.bound.value));
    tb.kv("bound_formula", r.bound.formula.as_str());
    tb.kv("gap", num(r.gap()));
    tb.kv("accepted", r.accepted.to_string());
    tb.kv("tensor", tensor.to_string());
    Ok(Output::new(json, vec![tb]))
}
