//! JSON encodings of vertices, outcomes and JSON-lines trace files.

use num_bigint::BigInt;
use serde_json::{json, Value};

use qicops_core::engine::{
    AssertionRecord, ForfeitReason, GameParams, MovePath, Outcome, Side, StageRecord, Trace, Variant,
};
use qicops_core::space::{BsVertex, LampVertex, Space, SpaceKind, Vertex, Word};

use crate::error::{bad, CliError};
use crate::specs::parse_space;

pub fn vertex_json(v: &Vertex) -> Value {
    serde_json::from_str(&v.canonical()).expect("canonical encodings are JSON")
}

fn int(v: &Value) -> Option<i64> {
    v.as_i64()
}

/// Decodes a vertex of `space`; the result is validated against the space.
pub fn parse_vertex(space: &Space, v: &Value) -> Result<Vertex, CliError> {
    let fail = || bad(format!("{v} is not a vertex of {}", space.describe()));
    let vertex = match space.kind() {
        SpaceKind::Grid { .. } | SpaceKind::Line => {
            let coords = v.as_array().ok_or_else(fail)?;
            Vertex::Grid(coords.iter().map(int).collect::<Option<_>>().ok_or_else(fail)?)
        }
        SpaceKind::GridVar { .. } => match v.as_array().map(|a| a.as_slice()) {
            Some([a, b]) => Vertex::GridVar(int(a).ok_or_else(fail)?, int(b).ok_or_else(fail)?),
            _ => return Err(fail()),
        },
        SpaceKind::Lamplighter { .. } => {
            let pos = v.get("pos").and_then(int).ok_or_else(fail)?;
            let mut l = LampVertex { pos, ..Default::default() };
            for entry in v.get("lamps").and_then(Value::as_array).ok_or_else(fail)? {
                match entry.as_array().map(|a| a.as_slice()) {
                    Some([p, s]) => {
                        let s = s.as_u64().and_then(|s| u32::try_from(s).ok()).ok_or_else(fail)?;
                        l.set_lamp(int(p).ok_or_else(fail)?, s);
                    }
                    _ => return Err(fail()),
                }
            }
            Vertex::Lamp(l)
        }
        SpaceKind::Bs { .. } => {
            let num: BigInt = v.get("num").and_then(Value::as_str).and_then(|s| s.parse().ok()).ok_or_else(fail)?;
            let exp = v.get("exp").and_then(Value::as_u64).and_then(|e| u32::try_from(e).ok()).ok_or_else(fail)?;
            let k = v.get("k").and_then(int).ok_or_else(fail)?;
            Vertex::Bs(BsVertex { num, exp, k })
        }
        SpaceKind::FreeTree { .. } => Vertex::Tree(v.as_str().and_then(Word::from_letters).ok_or_else(fail)?),
    };
    space.validate(&vertex).map_err(|e| bad(format!("{v}: {e}")))?;
    Ok(vertex)
}

pub fn path_json(p: &MovePath) -> Value {
    Value::Array(p.0.iter().map(vertex_json).collect())
}

pub fn parse_path(space: &Space, v: &Value) -> Result<MovePath, CliError> {
    let items = v.as_array().filter(|a| !a.is_empty()).ok_or_else(|| bad(format!("{v} is not a nonempty path")))?;
    Ok(MovePath(items.iter().map(|x| parse_vertex(space, x)).collect::<Result<_, _>>()?))
}

pub fn params_json(p: &GameParams) -> Value {
    json!({"n": p.n, "sigma": p.sigma, "psi": p.psi, "rho": p.rho, "R": p.radius, "horizon": p.horizon})
}

pub fn outcome_json(o: &Outcome) -> Value {
    match o {
        Outcome::Captured { stage, cop_index, at } => {
            json!({"kind": "captured", "stage": stage, "copIndex": cop_index, "at": vertex_json(at)})
        }
        Outcome::HorizonReached { stages, ball_visit_stages, last_in_ball } => {
            json!({"kind": "horizon", "stages": stages, "ballVisitStages": ball_visit_stages, "lastInBall": last_in_ball})
        }
        Outcome::Forfeit { stage, side, reason, detail } => json!({
            "kind": "forfeit", "stage": stage, "side": side.as_str(), "reason": reason.as_str(), "detail": detail
        }),
        Outcome::AssertionFailed { stage, name } => json!({"kind": "assertion-failed", "stage": stage, "name": name}),
    }
}

fn field<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Trace { line, what: format!("missing {key}") })
}

fn uint(v: &Value, key: &str, line: usize) -> Result<u64, CliError> {
    field(v, key, line)?.as_u64().ok_or_else(|| CliError::Trace { line, what: format!("{key} is not a count") })
}

fn text<'a>(v: &'a Value, key: &str, line: usize) -> Result<&'a str, CliError> {
    field(v, key, line)?.as_str().ok_or_else(|| CliError::Trace { line, what: format!("{key} is not a string") })
}

fn flag(v: &Value, key: &str, line: usize) -> Result<bool, CliError> {
    field(v, key, line)?.as_bool().ok_or_else(|| CliError::Trace { line, what: format!("{key} is not a boolean") })
}

fn parse_outcome(space: &Space, v: &Value, line: usize) -> Result<Outcome, CliError> {
    let bad_field = |what: &str| CliError::Trace { line, what: what.to_owned() };
    Ok(match text(v, "kind", line)? {
        "captured" => Outcome::Captured {
            stage: uint(v, "stage", line)?,
            cop_index: uint(v, "copIndex", line)? as usize,
            at: parse_vertex(space, field(v, "at", line)?)?,
        },
        "horizon" => Outcome::HorizonReached {
            stages: uint(v, "stages", line)?,
            ball_visit_stages: field(v, "ballVisitStages", line)?
                .as_array()
                .and_then(|a| a.iter().map(Value::as_u64).collect())
                .ok_or_else(|| bad_field("ballVisitStages"))?,
            last_in_ball: flag(v, "lastInBall", line)?,
        },
        "forfeit" => Outcome::Forfeit {
            stage: uint(v, "stage", line)?,
            side: match text(v, "side", line)? {
                "cop" => Side::Cop,
                "robber" => Side::Robber,
                _ => return Err(bad_field("side")),
            },
            reason: ForfeitReason::parse(text(v, "reason", line)?).ok_or_else(|| bad_field("reason"))?,
            detail: text(v, "detail", line)?.to_owned(),
        },
        "assertion-failed" => {
            Outcome::AssertionFailed { stage: uint(v, "stage", line)?, name: text(v, "name", line)?.to_owned() }
        }
        _ => return Err(bad_field("outcome kind")),
    })
}

/// Header, one line per stage, then the outcome and assertion log.
pub fn write_trace(space_spec: &str, trace: &Trace) -> String {
    let mut out = String::new();
    let header = json!({
        "space": space_spec,
        "variant": trace.variant.as_str(),
        "params": params_json(&trace.params),
        "seed": trace.seed,
        "copAgent": trace.cop_agent,
        "robberAgent": trace.robber_agent,
    });
    out.push_str(&header.to_string());
    out.push('\n');
    for s in &trace.stages {
        let line = json!({
            "stage": s.stage,
            "copMoves": s.cop_moves.iter().map(path_json).collect::<Vec<_>>(),
            "robberMove": path_json(&s.robber_move),
            "minCopDist": s.min_cop_dist,
            "inBall": s.in_ball,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    let assertions: Vec<Value> = trace
        .assertions
        .iter()
        .map(|a| json!({"stage": a.stage, "name": a.name, "pass": a.pass, "detail": a.detail}))
        .collect();
    out.push_str(&json!({"outcome": outcome_json(&trace.outcome), "assertions": assertions}).to_string());
    out.push('\n');
    out
}

/// Parses a trace file; returns the space spec, the space and the trace.
pub fn read_trace(text_in: &str) -> Result<(String, Space, Trace), CliError> {
    let mut lines = text_in.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let parse = |i: usize, l: &str| -> Result<Value, CliError> {
        serde_json::from_str(l).map_err(|e| CliError::Trace { line: i + 1, what: e.to_string() })
    };
    let (i, first) = lines.next().ok_or(CliError::Trace { line: 1, what: "empty trace".into() })?;
    let header = parse(i, first)?;
    let line = i + 1;
    let spec = text(&header, "space", line)?.to_owned();
    let space = parse_space(&spec)?;
    let variant = Variant::parse(text(&header, "variant", line)?)
        .ok_or(CliError::Trace { line, what: "unknown variant".into() })?;
    let p = field(&header, "params", line)?;
    let params = GameParams {
        n: uint(p, "n", line)? as usize,
        treasure: space.base(),
        sigma: uint(p, "sigma", line)?,
        psi: uint(p, "psi", line)?,
        rho: uint(p, "rho", line)?,
        radius: uint(p, "R", line)?,
        horizon: uint(p, "horizon", line)?,
    };
    let mut stages = Vec::new();
    let mut tail = None;
    for (i, l) in lines {
        let line = i + 1;
        if tail.is_some() {
            return Err(CliError::Trace { line, what: "content after the outcome line".into() });
        }
        let v = parse(i, l)?;
        if v.get("outcome").is_some() {
            tail = Some((line, v));
            continue;
        }
        let moves = field(&v, "copMoves", line)?
            .as_array()
            .ok_or(CliError::Trace { line, what: "copMoves is not a list".into() })?;
        let min = field(&v, "minCopDist", line)?;
        stages.push(StageRecord {
            stage: uint(&v, "stage", line)?,
            cop_moves: moves.iter().map(|m| parse_path(&space, m)).collect::<Result<_, _>>()?,
            robber_move: parse_path(&space, field(&v, "robberMove", line)?)?,
            min_cop_dist: if min.is_null() { None } else { Some(uint(&v, "minCopDist", line)?) },
            in_ball: flag(&v, "inBall", line)?,
        });
    }
    let (line, tail) = tail.ok_or(CliError::Trace { line: 0, what: "missing outcome line".into() })?;
    let outcome = parse_outcome(&space, field(&tail, "outcome", line)?, line)?;
    let assertions = field(&tail, "assertions", line)?
        .as_array()
        .ok_or(CliError::Trace { line, what: "assertions is not a list".into() })?
        .iter()
        .map(|a| {
            Ok(AssertionRecord {
                stage: uint(a, "stage", line)?,
                name: text(a, "name", line)?.to_owned(),
                pass: flag(a, "pass", line)?,
                detail: text(a, "detail", line)?.to_owned(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let trace = Trace {
        space: space.describe(),
        variant,
        params,
        seed: uint(&header, "seed", 1)?,
        cop_agent: text(&header, "copAgent", 1)?.to_owned(),
        robber_agent: text(&header, "robberAgent", 1)?.to_owned(),
        stages,
        outcome,
        assertions,
    };
    Ok((spec, space, trace))
}
