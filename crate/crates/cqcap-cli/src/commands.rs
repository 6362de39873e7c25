//! The five subcommands: divergence, capacity, bounds, simulate, brute.

use std::path::Path;

use serde_json::{json, Value};

use cqcap::capacities::{
    chernoff_capacity_seeded, hoeffding_capacity_seeded, holevo_capacity, max_capacity_seeded,
    CapacityResult,
};
use cqcap::channel::WeightedEnsemble;
use cqcap::coding::{
    brute_force_capacity_commuting, exp_capacity_lower_bound_seeded, monte_carlo_errors,
    n_shot_lower_bound_seeded, one_shot_lower_bound_seeded, one_shot_lower_bound_scan,
    one_shot_upper_bound, positivity_threshold_seeded, random_coding_bound, summarize_errors,
    BoundReport,
};
use cqcap::divergences::{
    chernoff, hoeffding_direct, max_relative_entropy, psi, relative_entropy, renyi,
    renyi_infinity, DivergenceValue,
};

use crate::report::{csv_row, fmt17, json_value, LogBase};
use crate::schema::{read_channel, read_state};
use crate::CliError;

pub struct Ctx {
    pub base: LogBase,
    pub tol: f64,
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// divergence
// ---------------------------------------------------------------------------

fn divergence_record(
    name: &str,
    value: f64,
    method: &str,
    params: Value,
    base: LogBase,
) -> Value {
    json!({
        "divergence": name,
        "value": json_value(value * base.factor()),
        "finite": value.is_finite(),
        "method": method,
        "params": params,
    })
}

fn dv_record(name: &str, dv: DivergenceValue, params: Value, base: LogBase) -> Value {
    divergence_record(name, dv.value, &dv.method.to_string(), params, base)
}

/// Parse `"a:step:b"` into an inclusive sweep.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "sweep {text:?} is not of the form start:step:end"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| CliError::Validation(format!("sweep part {p:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, step, end) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || end < start {
        return Err(CliError::Validation(format!(
            "sweep {text:?} must have positive step and end ≥ start"
        )));
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + step * k as f64;
        if v > end + 1e-12 {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_divergence(
    ctx: &Ctx,
    state_a: &Path,
    state_b: &Path,
    which: &[String],
    t: f64,
    r: f64,
    r_sweep: Option<&str>,
) -> Result<(), CliError> {
    let rho = read_state(state_a, ctx.tol)?;
    let sigma = read_state(state_b, ctx.tol)?;
    let rates = match r_sweep {
        Some(text) => parse_sweep(text)?,
        None => vec![r],
    };
    let mut records = Vec::new();
    for name in which {
        match name.as_str() {
            "psi" => {
                let v = psi(&rho, &sigma, t)?;
                records.push(divergence_record("psi", v, "spectral", json!({"t": t}), ctx.base));
            }
            "renyi" => {
                let dv = renyi(&rho, &sigma, t)?;
                records.push(dv_record("renyi", dv, json!({"t": t}), ctx.base));
            }
            "relent" => {
                let dv = relative_entropy(&rho, &sigma)?;
                records.push(dv_record("relent", dv, json!({}), ctx.base));
            }
            "chernoff" => {
                let dv = chernoff(&rho, &sigma)?;
                records.push(dv_record("chernoff", dv, json!({}), ctx.base));
            }
            "hoeffding" => {
                for &rate in &rates {
                    let dv = hoeffding_direct(&rho, &sigma, rate)?;
                    records.push(dv_record("hoeffding", dv, json!({"r": rate}), ctx.base));
                }
            }
            "smax" => {
                let dv = max_relative_entropy(&rho, &sigma)?;
                records.push(dv_record("smax", dv, json!({}), ctx.base));
            }
            "sinf" => {
                let dv = renyi_infinity(&rho, &sigma)?;
                records.push(dv_record("sinf", dv, json!({}), ctx.base));
            }
            other => {
                return Err(CliError::Validation(format!(
                    "unknown divergence {other:?} (expected psi, renyi, relent, chernoff, hoeffding, smax, sinf)"
                )));
            }
        }
    }
    let report = json!({"base": ctx.base.label(), "records": records});
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// capacity
// ---------------------------------------------------------------------------

fn capacity_json(which: &str, res: &CapacityResult, base: LogBase, r: Option<f64>) -> Value {
    json!({
        "capacity": which,
        "base": base.label(),
        "value": json_value(res.value * base.factor()),
        "argmax_weights": res.weights,
        "certified": res.certified,
        "optimizer": {
            "iterations": res.iterations,
            "residual": json_value(res.residual),
        },
        "params": match r {
            Some(r) => json!({"r": r}),
            None => json!({}),
        },
    })
}

pub fn cmd_capacity(
    ctx: &Ctx,
    channel: &Path,
    which: &str,
    r: f64,
) -> Result<(), CliError> {
    let ch = read_channel(channel, ctx.tol)?;
    let (res, r_used) = match which {
        "holevo" => (holevo_capacity(&ch)?, None),
        "hoeffding" => (hoeffding_capacity_seeded(&ch, r, ctx.seed)?, Some(r)),
        "chernoff" => (chernoff_capacity_seeded(&ch, ctx.seed)?, None),
        "max" => (max_capacity_seeded(&ch, ctx.seed)?, None),
        other => {
            return Err(CliError::Validation(format!(
                "unknown capacity {other:?} (expected holevo, hoeffding, chernoff, max)"
            )));
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&capacity_json(which, &res, ctx.base, r_used))
            .expect("serializable")
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

fn bound_row(report: &BoundReport, base: LogBase, name_override: Option<&str>) -> String {
    let name = match name_override {
        Some(n) => n.to_string(),
        None => report.bound.to_string(),
    };
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    csv_row(&[
        name,
        fmt17(report.value * base.factor()),
        report.clamped.to_string(),
        opt(report.params.epsilon),
        opt(report.params.c),
        opt(report.params.r),
        report
            .params
            .n
            .map(|n| n.to_string())
            .unwrap_or_default(),
    ])
}

pub fn cmd_bounds(
    ctx: &Ctx,
    channel: &Path,
    epsilon: f64,
    c: Option<f64>,
    r: Option<f64>,
    n: Option<u32>,
) -> Result<(), CliError> {
    let ch = read_channel(channel, ctx.tol)?;
    let mut rows = vec!["bound,value,clamped,epsilon,c,r,n".to_string()];
    match c {
        Some(c) => {
            let rep = one_shot_lower_bound_seeded(&ch, epsilon, c, ctx.seed)?;
            rows.push(bound_row(&rep, ctx.base, None));
        }
        None => {
            let (best, grid) = one_shot_lower_bound_scan(&ch, epsilon, ctx.seed)?;
            for rep in &grid {
                rows.push(bound_row(rep, ctx.base, None));
            }
            rows.push(bound_row(&best, ctx.base, Some("oneshot_lower_best")));
        }
    }
    if let Some(n) = n {
        let rep = n_shot_lower_bound_seeded(&ch, epsilon, c.unwrap_or(1.0), n, ctx.seed)?;
        rows.push(bound_row(&rep, ctx.base, None));
    }
    if let Some(r) = r {
        let rep = exp_capacity_lower_bound_seeded(&ch, r, ctx.seed)?;
        rows.push(bound_row(&rep, ctx.base, None));
    }
    let upper = one_shot_upper_bound(&ch, epsilon)?;
    rows.push(bound_row(&upper, ctx.base, None));
    // the threshold is a probability, not a logarithmic quantity: no rescale
    let threshold = positivity_threshold_seeded(&ch, ctx.seed)?;
    rows.push(bound_row(&threshold, LogBase::Two, None));
    println!("{}", rows.join("\n"));
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    ctx: &Ctx,
    channel: &Path,
    messages: usize,
    uses: usize,
    c: f64,
    t_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<(), CliError> {
    let base_channel = read_channel(channel, ctx.tol)?;
    let ch = base_channel.product_extension(uses)?;
    let ensemble = WeightedEnsemble::uniform(&ch);
    let errors = monte_carlo_errors(&ensemble, messages, c, trials, seed)?;
    let (mean, std, min) = summarize_errors(&errors);
    let stderr = std / (trials as f64).sqrt();

    let mut rows = vec!["record,param,value".to_string()];
    for (i, pe) in errors.iter().enumerate() {
        rows.push(csv_row(&["trial".into(), i.to_string(), fmt17(*pe)]));
    }
    rows.push(csv_row(&["mean".into(), String::new(), fmt17(mean)]));
    rows.push(csv_row(&["std".into(), String::new(), fmt17(std)]));
    rows.push(csv_row(&["min".into(), String::new(), fmt17(min)]));
    let mut best: Option<(f64, f64)> = None;
    for &t in t_list {
        let bound = random_coding_bound(&ensemble, messages, c, t)?;
        rows.push(csv_row(&["bound".into(), t.to_string(), fmt17(bound)]));
        if best.map(|(_, b)| bound < b).unwrap_or(true) {
            best = Some((t, bound));
        }
    }
    let (t_best, bound_min) = best.ok_or_else(|| {
        CliError::Validation("simulate needs at least one exponent t".into())
    })?;
    rows.push(csv_row(&[
        "bound_min".into(),
        t_best.to_string(),
        fmt17(bound_min),
    ]));
    let ok = mean <= bound_min + 3.0 * stderr;
    rows.push(csv_row(&[
        "check".into(),
        String::new(),
        if ok { "PASS".into() } else { "FAIL".into() },
    ]));
    println!("{}", rows.join("\n"));
    Ok(())
}

// ---------------------------------------------------------------------------
// brute
// ---------------------------------------------------------------------------

pub fn cmd_brute(
    ctx: &Ctx,
    channel: &Path,
    epsilon: f64,
    m_max: usize,
) -> Result<(), CliError> {
    let ch = read_channel(channel, ctx.tol)?;
    let outcome = brute_force_capacity_commuting(&ch, epsilon, m_max)?;
    let labels = |codebook: &[usize]| -> Vec<String> {
        codebook.iter().map(|&x| ch.labels()[x].clone()).collect()
    };
    let per_m: Vec<Value> = outcome
        .per_m
        .iter()
        .map(|rec| {
            json!({
                "m": rec.m,
                "best_error": rec.best_error,
                "codebook": labels(&rec.best_codebook),
            })
        })
        .collect();
    let report = json!({
        "base": ctx.base.label(),
        "epsilon": epsilon,
        "capacity_bits": json_value(outcome.capacity_bits * ctx.base.factor()),
        "best_m": outcome.best_m,
        "per_m": per_m,
        "witness": {
            "encoding": labels(outcome.witness.encoding()),
        },
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

/// Parse a comma-separated list of floats.
pub fn parse_float_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("list entry {p:?}: {e}")))
        })
        .collect()
}

