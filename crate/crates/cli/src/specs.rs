//! Parsing of space, agent and family spec strings.

use std::fs;

use serde_json::Value;

use qicops_core::agents::{
    BigonEvader, BottleneckEvader, BsSheetEvader, GreedyCop, GreedyEvader, LamplighterEvader, ProjectionEvader,
    PusherCop, RandomCop, ScriptedCop, ScriptedRobber,
};
use qicops_core::engine::{CopAgent, RobberAgent};
use qicops_core::homothety::{LamplighterFamily, QuasiHomothetyFamily, Z2ScalingFamily};
use qicops_core::metagame::{lamplighter_meta_robber, z2_meta_robber, MetaRobber};
use qicops_core::space::{FiniteGroup, Space, Vertex};

use crate::error::{bad, CliError};

/// `grid:<n>`, `gridvar:<m>`, `lamp:<q>[:<j>]`, `bs:<m>`, `line`,
/// `free-tree:<rank>`, or `lamptable:<file>[:<j>]` for a lamp group given by
/// its multiplication table (`{"order": q, "table": [q·q entries]}`).
pub fn parse_space(spec: &str) -> Result<Space, CliError> {
    if let Some(rest) = spec.strip_prefix("lamptable:") {
        let (path, power) = match rest.rsplit_once(':') {
            Some((p, j)) if j.parse::<u32>().is_ok() => (p, j.parse().expect("checked")),
            _ => (rest, 1),
        };
        let v = read_json(path)?;
        let order = v.get("order").and_then(Value::as_u64).and_then(|o| u32::try_from(o).ok());
        let table: Option<Vec<u32>> = v
            .get("table")
            .and_then(Value::as_array)
            .and_then(|t| t.iter().map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok())).collect());
        let (Some(order), Some(table)) = (order, table) else {
            return Err(bad(format!("{path}: expected {{\"order\": q, \"table\": [...]}}")));
        };
        let group = FiniteGroup::from_table(order, table).map_err(|e| bad(format!("{path}: {e}")))?;
        return Space::lamplighter(group, power).map_err(|e| bad(e.to_string()));
    }
    Space::parse(spec).map_err(|e| bad(e.to_string()))
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{path}: {e}")))
}

fn count(spec: &str, arg: &str) -> Result<usize, CliError> {
    match arg.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(bad(format!("{spec}: cop count must be a positive integer"))),
    }
}

fn trace_file(path: &str) -> Result<qicops_core::engine::Trace, CliError> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
    Ok(crate::codec::read_trace(&text)?.2)
}

/// Cop side as parsed from `greedy:<n>`, `random:<n>`, `pusher:<n>`,
/// `scripted:<trace>` or `remote[:<n>]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopSpec {
    Greedy(usize),
    Random(usize),
    Pusher(usize),
    Scripted(String),
    Remote(usize),
}

impl CopSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
        match head {
            "greedy" => Ok(CopSpec::Greedy(count(spec, arg)?)),
            "random" => Ok(CopSpec::Random(count(spec, arg)?)),
            "pusher" => Ok(CopSpec::Pusher(count(spec, arg)?)),
            "scripted" if !arg.is_empty() => Ok(CopSpec::Scripted(arg.to_owned())),
            "remote" if arg.is_empty() => Ok(CopSpec::Remote(1)),
            "remote" => Ok(CopSpec::Remote(count(spec, arg)?)),
            _ => Err(bad(format!("unknown cop agent {spec}"))),
        }
    }

    /// Builds a local agent and its cop count. Remote cops are built by the server.
    pub fn build(&self, sigma: u64, rho: u64) -> Result<(Box<dyn CopAgent>, usize), CliError> {
        Ok(match self {
            CopSpec::Greedy(n) => (Box::new(GreedyCop::new(sigma, rho)), *n),
            CopSpec::Random(n) => (Box::new(RandomCop::new(sigma, rho)), *n),
            CopSpec::Pusher(n) => (Box::new(PusherCop::new(sigma, rho)), *n),
            CopSpec::Scripted(path) => {
                let t = trace_file(path)?;
                let n = t.params.n;
                (Box::new(ScriptedCop::from_trace(&t).stay_when_exhausted()), n)
            }
            CopSpec::Remote(_) => return Err(bad("remote cops only exist under serve")),
        })
    }
}

/// Settings of the greedy evader that its spec does not carry.
#[derive(Clone, Copy, Debug)]
pub struct EvaderSettings {
    pub psi: u64,
    pub radius: u64,
}

impl Default for EvaderSettings {
    fn default() -> Self {
        Self { psi: 3, radius: 10 }
    }
}

/// `greedy-evader:<margin>`, `lamplighter`, `bs-sheet`, `bigon`,
/// `bottleneck`, `projection:<planar robber>`, `scripted:<trace>`,
/// `meta:z2`, `meta:lamplighter:<q>`, `meta:custom:<family file>`.
pub fn build_robber(spec: &str, settings: EvaderSettings) -> Result<Box<dyn RobberAgent>, CliError> {
    let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let none = |r: Box<dyn RobberAgent>| -> Result<Box<dyn RobberAgent>, CliError> {
        if arg.is_empty() {
            Ok(r)
        } else {
            Err(bad(format!("{head} takes no argument")))
        }
    };
    match head {
        "greedy-evader" => {
            let margin = arg.parse().map_err(|_| bad(format!("{spec}: margin must be an integer")))?;
            Ok(Box::new(GreedyEvader::new(margin, settings.psi, settings.radius)))
        }
        "lamplighter" => none(Box::new(LamplighterEvader::new())),
        "bs-sheet" => none(Box::new(BsSheetEvader::new())),
        "bigon" => none(Box::new(BigonEvader::new())),
        "bottleneck" => none(Box::new(BottleneckEvader::new())),
        "projection" if !arg.is_empty() => Ok(Box::new(ProjectionEvader::new(build_robber(arg, settings)?, (0, 1)))),
        "scripted" if !arg.is_empty() => Ok(Box::new(ScriptedRobber::from_trace(&trace_file(arg)?))),
        "meta" => Ok(Box::new(build_meta(arg)?)),
        _ => Err(bad(format!("unknown robber agent {spec}"))),
    }
}

fn build_meta(arg: &str) -> Result<MetaRobber, CliError> {
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    match (kind, rest) {
        ("z2", "") => Ok(z2_meta_robber()),
        ("lamplighter", q) => {
            let q = q.parse().map_err(|_| bad(format!("meta:lamplighter:{q}: lamp group order expected")))?;
            lamplighter_meta_robber(q).map_err(|e| bad(e.to_string()))
        }
        ("custom", path) if !path.is_empty() => {
            let v = read_json(path)?;
            let family = family_from_json(&v, path)?;
            let oracle = v.get("oracle").cloned().unwrap_or(Value::Null);
            match v.get("kind").and_then(Value::as_str) {
                Some("lamplighter") => Ok(MetaRobber::new(family, Box::new(|| Box::new(LamplighterEvader::new())))),
                _ => {
                    let get = |k: &str, d: u64| oracle.get(k).and_then(Value::as_u64).unwrap_or(d);
                    let (margin, psi, radius) = (get("margin", 8), get("psi", 20), get("radius", 40));
                    Ok(MetaRobber::new(
                        family,
                        Box::new(move || {
                            let base = Vertex::Grid(vec![0, 0]);
                            Box::new(GreedyEvader::new(margin, psi, radius).confined_to(base, radius))
                        }),
                    ))
                }
            }
        }
        _ => Err(bad(format!("unknown meta preset meta:{arg}"))),
    }
}

/// `{"kind": "z2", "rhos": [...]}` or `{"kind": "lamplighter", "order": q}`.
fn family_from_json(v: &Value, origin: &str) -> Result<Box<dyn QuasiHomothetyFamily>, CliError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("z2") => {
            let rhos: Option<Vec<u64>> = v.get("rhos").and_then(Value::as_array).and_then(|a| a.iter().map(Value::as_u64).collect());
            let rhos = rhos.ok_or_else(|| bad(format!("{origin}: z2 family needs \"rhos\"")))?;
            Ok(Box::new(Z2ScalingFamily::new(rhos).map_err(|e| bad(format!("{origin}: {e}")))?))
        }
        Some("lamplighter") => {
            let q = v.get("order").and_then(Value::as_u64).and_then(|q| u32::try_from(q).ok());
            let q = q.ok_or_else(|| bad(format!("{origin}: lamplighter family needs \"order\"")))?;
            Ok(Box::new(LamplighterFamily::cyclic(q).map_err(|e| bad(format!("{origin}: {e}")))?))
        }
        _ => Err(bad(format!("{origin}: \"kind\" must be z2 or lamplighter"))),
    }
}

/// `z2:<ρ₁>,<ρ₂>,...`, `lamplighter:<q>`, or a family JSON file.
pub fn parse_family(spec: &str) -> Result<Box<dyn QuasiHomothetyFamily>, CliError> {
    if let Some(list) = spec.strip_prefix("z2:") {
        let rhos: Result<Vec<u64>, _> = list.split(',').map(str::parse).collect();
        let rhos = rhos.map_err(|_| bad(format!("{spec}: scales must be integers")))?;
        return Ok(Box::new(Z2ScalingFamily::new(rhos).map_err(|e| bad(e.to_string()))?));
    }
    if let Some(q) = spec.strip_prefix("lamplighter:") {
        let q = q.parse().map_err(|_| bad(format!("{spec}: lamp group order expected")))?;
        return Ok(Box::new(LamplighterFamily::cyclic(q).map_err(|e| bad(e.to_string()))?));
    }
    family_from_json(&read_json(spec)?, spec)
}
