//! Interactive sessions: a remote client plays the cops over newline-delimited
//! JSON while a local strategy plays the robber.
//!
//! Server messages carry an `expect` field naming the next client message:
//! `params` (weak order, σ and ρ together or in either order), `sigma`, `rho`,
//! `place` or `move`.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};

use qicops_core::engine::{
    run, AgentError, CopAgent, Ctx, GameParams, GameState, MovePath, Outcome, RhoView, RunConfig, Table, Trace, Variant,
};
use qicops_core::space::{PathError, Space, Vertex};

use crate::codec::{outcome_json, params_json, parse_path, parse_vertex, vertex_json, write_trace};
use crate::error::{bad, CliError};
use crate::specs::{build_robber, parse_space, EvaderSettings};

/// Consecutive rejected messages after which the client forfeits.
pub const MAX_ILLEGAL: usize = 3;
/// Largest reach ball sent to the client; larger ones are flagged truncated.
pub const REACH_BALL_LIMIT: usize = 4096;

/// The cop side of a session; every client answer is validated before the
/// engine sees it.
pub struct RemoteCop<R, W> {
    reader: R,
    writer: W,
    space_spec: String,
    horizon: u64,
    illegal_streak: usize,
    sigma: Option<u64>,
    rho: Option<u64>,
    /// Client name from the `hello` message.
    pub name: Option<String>,
}

fn protocol(what: impl Into<String>) -> AgentError {
    AgentError::Protocol(what.into())
}

/// Why a client message was refused, and which cop it concerned.
struct Rejection {
    reason: String,
    cop: Option<usize>,
}

impl Rejection {
    fn cop(i: usize, reason: impl ToString) -> Self {
        Self { reason: reason.to_string(), cop: Some(i) }
    }
}

impl From<String> for Rejection {
    fn from(reason: String) -> Self {
        Self { reason, cop: None }
    }
}

impl From<&str> for Rejection {
    fn from(reason: &str) -> Self {
        reason.to_owned().into()
    }
}

fn path_reason(e: &PathError) -> String {
    match e {
        PathError::TooLong { length, speed } => format!("path length {length} > sigma {speed}"),
        other => other.to_string(),
    }
}

impl<R: BufRead, W: Write> RemoteCop<R, W> {
    pub fn new(reader: R, writer: W, space_spec: &str, horizon: u64) -> Self {
        Self {
            reader,
            writer,
            space_spec: space_spec.to_owned(),
            horizon,
            illegal_streak: 0,
            sigma: None,
            rho: None,
            name: None,
        }
    }

    fn send(&mut self, msg: &Value) -> Result<(), AgentError> {
        writeln!(self.writer, "{msg}")
            .and_then(|()| self.writer.flush())
            .map_err(|e| protocol(format!("write failed: {e}")))
    }

    fn read(&mut self) -> Result<String, AgentError> {
        let mut line = String::new();
        loop {
            line.clear();
            match self.reader.read_line(&mut line) {
                Ok(0) => return Err(protocol("client disconnected")),
                Ok(_) if line.trim().is_empty() => continue,
                Ok(_) => return Ok(line),
                Err(e) => return Err(protocol(format!("read failed: {e}"))),
            }
        }
    }

    /// Sends an `illegal` message; the streak limit turns it into a forfeit.
    fn reject(&mut self, r: Rejection) -> Result<(), AgentError> {
        self.illegal_streak += 1;
        let mut msg = json!({"type": "illegal", "reason": r.reason});
        if let Some(i) = r.cop {
            msg["cop"] = json!(i);
        }
        self.send(&msg)?;
        let reason = r.reason;
        if self.illegal_streak >= MAX_ILLEGAL {
            return Err(protocol(format!("{MAX_ILLEGAL} consecutive illegal messages, last: {reason}")));
        }
        Ok(())
    }

    /// Reads until a well-formed message of type `kind` arrives and `accept`
    /// takes it; everything else is rejected.
    fn expect<T>(
        &mut self,
        kind: &str,
        mut accept: impl FnMut(&mut Self, &Value) -> Result<T, Rejection>,
    ) -> Result<T, AgentError> {
        loop {
            let line = self.read()?;
            let reason = match serde_json::from_str::<Value>(&line) {
                Err(e) => format!("malformed message: {e}").into(),
                Ok(v) => match v.get("type").and_then(Value::as_str) {
                    Some(t) if t == kind => match accept(self, &v) {
                        Ok(x) => {
                            self.illegal_streak = 0;
                            return Ok(x);
                        }
                        Err(reason) => reason,
                    },
                    Some(t) => format!("expected a {kind} message, got {t}").into(),
                    None => "message has no type".into(),
                },
            };
            self.reject(reason)?;
        }
    }

    fn take_params(&mut self, v: &Value) -> Result<(), Rejection> {
        let field = |k: &str| match v.get(k) {
            None => Ok(None),
            Some(x) => x.as_u64().filter(|&x| x > 0).map(Some).ok_or(Rejection::from(format!("{k} must be a positive integer"))),
        };
        let (sigma, rho) = (field("sigma")?, field("rho")?);
        if sigma.is_none() && rho.is_none() {
            return Err("param message carries neither sigma nor rho".into());
        }
        if sigma.is_some() {
            self.sigma = sigma;
        }
        if rho.is_some() {
            self.rho = rho;
        }
        Ok(())
    }

    fn reach_balls(&self, space: &Space, cops: &[Vertex], rho: u64) -> (Vec<Value>, bool) {
        let mut truncated = false;
        let balls = cops
            .iter()
            .map(|c| match space.ball(c, rho, REACH_BALL_LIMIT) {
                Ok(b) => Value::Array(b.iter().map(vertex_json).collect()),
                Err(_) => {
                    truncated = true;
                    Value::Array(Vec::new())
                }
            })
            .collect();
        (balls, truncated)
    }
}

impl<R: BufRead, W: Write> CopAgent for RemoteCop<R, W> {
    fn choose_sigma(&mut self, t: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let name = self.expect("hello", |_, v| Ok(v.get("name").and_then(Value::as_str).map(str::to_owned)))?;
        self.name = name;
        let expect = match t.variant {
            Variant::Weak => "params",
            Variant::Strong => "sigma",
        };
        let hello = json!({
            "type": "config",
            "space": self.space_spec,
            "variant": t.variant.as_str(),
            "cops": t.cops,
            "treasure": vertex_json(t.treasure),
            "horizon": self.horizon,
            "expect": expect,
        });
        self.send(&hello)?;
        while self.sigma.is_none() || (t.variant == Variant::Weak && self.rho.is_none()) {
            self.expect("param", Self::take_params)?;
        }
        Ok(self.sigma.expect("loop exits once sigma is set"))
    }

    fn choose_rho(&mut self, _: &Table<'_>, view: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        if let RhoView::Strong { sigma, psi } = view {
            self.rho = None;
            self.send(&json!({"type": "config", "sigma": sigma, "psi": psi, "expect": "rho"}))?;
        }
        while self.rho.is_none() {
            self.expect("param", Self::take_params)?;
        }
        Ok(self.rho.expect("loop exits once rho is set"))
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        self.send(&json!({"type": "config", "params": params_json(params), "expect": "place"}))?;
        let (space, n) = (t.space, params.n);
        self.expect("place", |_, v| {
            let cops = v.get("cops").and_then(Value::as_array).ok_or("place message needs a cops list")?;
            if cops.len() != n {
                return Err(format!("{} cops placed, expected {n}", cops.len()).into());
            }
            let parsed = cops.iter().enumerate().map(|(i, c)| parse_vertex(space, c).map_err(|e| Rejection::cop(i, e)));
            parsed.collect()
        })
    }

    fn moves(
        &mut self,
        t: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        _: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        let (balls, truncated) = self.reach_balls(t.space, &state.cops, params.rho);
        let mut msg = json!({
            "type": "state",
            "stage": state.stage,
            "cops": state.cops.iter().map(vertex_json).collect::<Vec<_>>(),
            "robber": vertex_json(&state.robber),
            "reachBalls": balls,
            "expect": "move",
        });
        if truncated {
            msg["reachBallsTruncated"] = json!(true);
        }
        self.send(&msg)?;
        let space = t.space;
        self.expect("move", |_, v| {
            let paths = v.get("paths").and_then(Value::as_array).ok_or("move message needs a paths list")?;
            if paths.len() != state.cops.len() {
                return Err(format!("{} paths sent, expected {}", paths.len(), state.cops.len()).into());
            }
            let mut out = Vec::with_capacity(paths.len());
            for (i, (p, at)) in paths.iter().zip(&state.cops).enumerate() {
                let path = parse_path(space, p).map_err(|e| Rejection::cop(i, e))?;
                if path.start() != at {
                    return Err(Rejection::cop(i, format!("path starts at {}, cop is at {at}", path.start())));
                }
                space.check_path(&path.0, params.sigma).map_err(|e| Rejection::cop(i, path_reason(&e)))?;
                out.push(path);
            }
            Ok(out)
        })
    }

    fn finish(&mut self, _: &Table<'_>, state: &GameState, outcome: &Outcome) {
        // The client may already be gone; the trace still records the outcome.
        let _ = self.send(&json!({"type": "outcome", "stage": state.stage, "outcome": outcome_json(outcome)}));
    }
}

#[derive(Clone, Debug)]
pub struct ServeArgs {
    pub addr: String,
    pub space: String,
    pub variant: Variant,
    pub cops: usize,
    pub robber: String,
    pub horizon: u64,
    pub seed: u64,
    /// `{conn}` is replaced by the 1-based connection number.
    pub trace: Option<String>,
    pub evader: EvaderSettings,
    pub timeout: Option<Duration>,
    pub once: bool,
}

/// Plays one game over an already-connected byte stream.
pub fn play_session<R: BufRead, W: Write>(a: &ServeArgs, reader: R, writer: W) -> Result<Trace, CliError> {
    let space = parse_space(&a.space)?;
    let mut robber = build_robber(&a.robber, a.evader)?;
    let mut cop = RemoteCop::new(reader, writer, &a.space, a.horizon);
    let config = RunConfig { cops: a.cops, horizon: a.horizon, seed: a.seed, fail_fast: false };
    let mut trace = run(&space, a.variant, &mut cop, &mut robber, &config)?;
    trace.cop_agent = format!("remote:{}", a.cops);
    trace.robber_agent = a.robber.clone();
    Ok(trace)
}

fn serve_connection(a: &ServeArgs, stream: TcpStream, conn: usize) -> Result<Trace, CliError> {
    stream.set_read_timeout(a.timeout)?;
    let reader = BufReader::new(stream.try_clone()?);
    let trace = play_session(a, reader, stream)?;
    if let Some(path) = &a.trace {
        fs::write(path.replace("{conn}", &conn.to_string()), write_trace(&a.space, &trace))?;
    }
    Ok(trace)
}

/// Binds, announces `listening on <addr>` on stdout, and plays one game per
/// connection on its own thread. With `once`, returns after the first game.
pub fn serve(a: ServeArgs) -> Result<Option<Trace>, CliError> {
    // Fail on bad specs before accepting anyone.
    parse_space(&a.space)?;
    build_robber(&a.robber, a.evader)?;
    if a.cops == 0 {
        return Err(bad("at least one cop is required"));
    }
    let listener = TcpListener::bind(&a.addr)?;
    println!("listening on {}", listener.local_addr()?);
    std::io::stdout().flush()?;
    if a.once {
        let (stream, _) = listener.accept()?;
        return serve_connection(&a, stream, 1).map(Some);
    }
    let args = Arc::new(a);
    let counter = Arc::new(AtomicUsize::new(0));
    for stream in listener.incoming() {
        let stream = stream?;
        let (args, conn) = (Arc::clone(&args), counter.fetch_add(1, Ordering::SeqCst) + 1);
        thread::spawn(move || {
            if let Err(e) = serve_connection(&args, stream, conn) {
                eprintln!("connection {conn}: {e}");
            }
        });
    }
    Ok(None)
}
