//! The subcommands, each returning a JSON report and an exit status.

use std::fs;

use serde_json::{json, Value};

use qicops_core::analysis::{bigon_thinness_scan, hd};
use qicops_core::engine::replay::{recheck_reach, replay};
use qicops_core::engine::{run, Outcome, RunConfig, Trace, Variant};
use qicops_core::homothety::{verify_family, Q, SampleSpec, Sampling, VerificationReport};
use qicops_core::space::BALL_LIMIT;

use crate::codec::{outcome_json, params_json, path_json, read_trace, write_trace};
use crate::error::{bad, exit, CliError};
use crate::specs::{build_robber, parse_space, CopSpec, EvaderSettings};

pub fn parse_variant(s: &str) -> Result<Variant, CliError> {
    Variant::parse(s).ok_or_else(|| bad(format!("variant must be weak or strong, not {s}")))
}

/// Exit status classifying a finished game.
pub fn outcome_status(trace: &Trace) -> i32 {
    match trace.outcome {
        Outcome::Captured { .. } => exit::CAPTURED,
        Outcome::AssertionFailed { .. } => exit::ASSERTION,
        Outcome::Forfeit { .. } => exit::FORFEIT,
        Outcome::HorizonReached { .. } if trace.assertions.iter().any(|a| !a.pass) => exit::ASSERTION,
        Outcome::HorizonReached { .. } => exit::OK,
    }
}

pub fn summary(trace: &Trace) -> Value {
    json!({
        "outcome": outcome_json(&trace.outcome),
        "params": params_json(&trace.params),
        "failedAssertions": trace.assertions.iter().filter(|a| !a.pass).count(),
    })
}

#[derive(Clone, Debug)]
pub struct RunArgs {
    pub space: String,
    pub variant: String,
    pub cops: String,
    pub robber: String,
    pub horizon: u64,
    pub seed: u64,
    pub trace: Option<String>,
    pub fail_fast: bool,
    pub sigma: u64,
    pub rho: u64,
    pub evader: EvaderSettings,
}

pub fn cmd_run(a: &RunArgs) -> Result<(Value, i32), CliError> {
    let space = parse_space(&a.space)?;
    let variant = parse_variant(&a.variant)?;
    let (mut cop, cops) = CopSpec::parse(&a.cops)?.build(a.sigma, a.rho)?;
    let mut robber = build_robber(&a.robber, a.evader)?;
    let config = RunConfig { cops, horizon: a.horizon, seed: a.seed, fail_fast: a.fail_fast };
    let mut trace = run(&space, variant, &mut *cop, &mut *robber, &config)?;
    trace.cop_agent = a.cops.clone();
    trace.robber_agent = a.robber.clone();
    if let Some(path) = &a.trace {
        fs::write(path, write_trace(&a.space, &trace))?;
    }
    Ok((summary(&trace), outcome_status(&trace)))
}

/// Re-simulates a trace file and re-scans captures; `recheck` re-scans with
/// another reach as well.
pub fn cmd_replay(path: &str, recheck: Option<u64>) -> Result<(Value, i32), CliError> {
    let text = fs::read_to_string(path)?;
    let (_, space, trace) = read_trace(&text)?;
    if let Err(d) = replay(&space, &trace)? {
        return Ok((json!({"divergence": {"stage": d.stage, "what": d.what}}), exit::DIVERGENCE));
    }
    let scan = recheck_reach(&space, &trace, trace.params.rho).map_err(|e| bad(e.to_string()))?;
    let recorded = match &trace.outcome {
        Outcome::Captured { stage, cop_index, .. } => Some((*stage, *cop_index)),
        _ => None,
    };
    if scan != recorded && !matches!(trace.outcome, Outcome::AssertionFailed { .. }) {
        let what = format!("capture re-scan found {scan:?}, trace records {recorded:?}");
        return Ok((json!({"divergence": {"stage": scan.or(recorded).map_or(0, |s| s.0), "what": what}}), exit::DIVERGENCE));
    }
    let mut report = summary(&trace);
    report["replayed"] = json!(true);
    if let Some(r) = recheck {
        let hit = recheck_reach(&space, &trace, r).map_err(|e| bad(e.to_string()))?;
        report["recheck"] = json!({"reach": r, "capture": hit.map(|(s, i)| json!({"stage": s, "copIndex": i}))});
        if hit.is_some() && recorded.is_none() {
            return Ok((report, exit::CAPTURED));
        }
    }
    Ok((report, outcome_status(&trace)))
}

fn ratio(q: &Q) -> Value {
    if *q.denom() == 1 {
        json!(q.numer())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

fn sampling_json(s: &Sampling) -> Value {
    match s {
        Sampling::Exhaustive { radius, vertices } => json!({"kind": "exhaustive", "radius": radius, "vertices": vertices}),
        Sampling::RandomWalk { radius, pairs, seed } => {
            json!({"kind": "random-walk", "radius": radius, "pairs": pairs, "seed": seed})
        }
    }
}

pub fn verification_json(r: &VerificationReport) -> Value {
    let indices: Vec<Value> = r
        .indices
        .iter()
        .map(|idx| {
            let entries: Vec<Value> = idx
                .entries
                .iter()
                .map(|e| {
                    let witnesses: Vec<Value> = e
                        .violations
                        .iter()
                        .map(|w| json!({"x": w.x, "y": w.y, "lhs": ratio(&w.lhs), "mid": ratio(&w.mid), "rhs": ratio(&w.rhs)}))
                        .collect();
                    json!({
                        "name": e.name,
                        "checked": e.checked,
                        "worstSlack": e.worst_slack.as_ref().map(ratio),
                        "violationCount": e.violation_count,
                        "violations": witnesses,
                    })
                })
                .collect();
            json!({
                "j": idx.j,
                "rho": idx.rho,
                "deltaSampling": sampling_json(&idx.delta_sampling),
                "gammaSampling": sampling_json(&idx.gamma_sampling),
                "entries": entries,
            })
        })
        .collect();
    json!({"family": r.family, "violations": r.violation_count(), "indices": indices})
}

pub fn cmd_verify(family: &str, js: &[usize], spec: &SampleSpec) -> Result<(Value, i32), CliError> {
    let fam = crate::specs::parse_family(family)?;
    let report = verify_family(&*fam, js, spec).map_err(|e| bad(e.to_string()))?;
    let status = if report.violation_count() == 0 { exit::OK } else { exit::ASSERTION };
    Ok((verification_json(&report), status))
}

pub fn cmd_scan(space_spec: &str, radius: u64) -> Result<(Value, i32), CliError> {
    let space = parse_space(space_spec)?;
    let (width, witness) = bigon_thinness_scan(&space, radius, BALL_LIMIT).map_err(|e| bad(e.to_string()))?;
    let witness = witness.map(|w| {
        json!({
            "gamma": path_json(&qicops_core::engine::MovePath(w.gamma)),
            "gammaPrime": path_json(&qicops_core::engine::MovePath(w.gamma_prime)),
            "delta": w.delta,
            "t": w.t,
        })
    });
    Ok((json!({"space": space_spec, "radius": radius, "maxWidth": width, "witness": witness}), exit::OK))
}

pub fn cmd_hd(space_spec: &str, height: u64, reach: u64) -> Result<(Value, i32), CliError> {
    let space = parse_space(space_spec)?;
    let v = hd(&space, height, reach).map_err(|e| bad(e.to_string()))?;
    Ok((json!({"space": space_spec, "H": height, "reach": reach, "hd": v}), exit::OK))
}

/// `H,reach,hd` rows for every `H ≤ max_height` and `1 ≤ reach ≤ max_reach`.
pub fn hd_table(space_spec: &str, max_height: u64, max_reach: u64) -> Result<String, CliError> {
    let space = parse_space(space_spec)?;
    let mut out = String::from("H,reach,hd\n");
    for h in 0..=max_height {
        for r in 1..=max_reach {
            let v = hd(&space, h, r).map_err(|e| bad(e.to_string()))?;
            out.push_str(&format!("{h},{r},{v}\n"));
        }
    }
    Ok(out)
}
