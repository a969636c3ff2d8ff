//! Job descriptions and the dispatcher behind the `fibratrix` binary.
//!
//! A job is read from a JSON document or from flat `key = value` lines:
//!
//! ```text
//! ring = triangular
//! field = q
//! f0 = s0^2+s1^2+s2^2
//! f1 = 2*s0*s2
//! f2 = 2*s0*s1
//! f3 = s0^2-s1^2-s2^2
//! command = fiber
//! point = 1:0:0:-1
//! ```

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use fibratrix::error::Error;
use fibratrix::fiber::{self, PointSpace, ProjPoint};
use fibratrix::field::Field;
use fibratrix::fitting::{fitting_generators, pullback_fitting, MinorRequest};
use fibratrix::matrix_rep::{validate, Parameterization};
use fibratrix::poly::{DegIndex, RingSpec};
use fibratrix::report;
use fibratrix::sample::{self, DEFAULT_SEED};
use fibratrix::surface::Surface;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_MATH: i32 = 4;

/// Source points drawn by `stratify` when none are given.
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Matrix,
    Nu0,
    Membership,
    Fiber,
    Preimage,
    FiberCurve,
    SatElements,
    Stratify,
    Minors,
    PullbackMinors,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Validate,
        Command::Matrix,
        Command::Nu0,
        Command::Membership,
        Command::Fiber,
        Command::Preimage,
        Command::FiberCurve,
        Command::SatElements,
        Command::Stratify,
        Command::Minors,
        Command::PullbackMinors,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Matrix => "matrix",
            Command::Nu0 => "nu0",
            Command::Membership => "membership",
            Command::Fiber => "fiber",
            Command::Preimage => "preimage",
            Command::FiberCurve => "fiber-curve",
            Command::SatElements => "sat-elements",
            Command::Stratify => "stratify",
            Command::Minors => "minors",
            Command::PullbackMinors => "pullback-minors",
        }
    }

    fn needs_target_point(&self) -> bool {
        matches!(
            self,
            Command::Membership | Command::Fiber | Command::Preimage | Command::FiberCurve
        )
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = JobError;

    fn from_str(s: &str) -> Result<Self, JobError> {
        let s = s.trim().replace('_', "-");
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| JobError::parse(format!("unknown command `{s}`")))
    }
}

/// Failure of a job, carrying its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub code: i32,
    pub message: String,
}

impl JobError {
    pub fn parse(message: impl Into<String>) -> Self {
        JobError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::UnknownVariable { .. }
        | Error::ExponentOverflow { .. }
        | Error::BadField(_)
        | Error::Arity { .. }
        | Error::BadPoint(_) => EXIT_PARSE,
        Error::DegreeMismatch(_)
        | Error::RingMismatch(_)
        | Error::DependentForms { .. }
        | Error::BaseCurve { .. }
        | Error::NotASurface(_) => EXIT_VALIDATION,
        _ => EXIT_MATH,
    }
}

/// A fully resolved job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub ring: RingSpec,
    pub field: Field,
    pub polynomials: [String; 4],
    pub command: Command,
    pub nu: Option<DegIndex>,
    pub points: Vec<String>,
    pub fitting_index: usize,
    pub limit: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    /// Run even if validation fails; failures become warnings.
    pub force: bool,
}

/// Values supplied on the command line; they take precedence over the document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub command: Option<String>,
    pub nu: Option<u32>,
    pub nu1: Option<u32>,
    pub nu2: Option<u32>,
    pub points: Vec<String>,
    pub fitting_index: Option<usize>,
    pub limit: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub field: Option<String>,
    pub force: bool,
}

/// Reads a JSON object, or `key = value` / `key: value` lines (`#` starts a comment).
pub fn parse_document(text: &str) -> Result<Map<String, Value>, JobError> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| JobError::parse(format!("invalid JSON: {e}")))?;
        let Value::Object(mut map) = v else { unreachable!() };
        // Arguments may be nested under "args".
        if let Some(Value::Object(args)) = map.remove("args") {
            for (k, v) in args {
                map.entry(k).or_insert(v);
            }
        }
        return Ok(map);
    }
    let mut map = Map::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=').or_else(|| line.split_once(':').filter(|(k, _)| !k.contains(' '))) else {
            return Err(JobError::parse(format!("line {}: expected `key = value`", n + 1)));
        };
        map.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
    }
    Ok(map)
}

fn get_str(map: &Map<String, Value>, key: &str) -> Result<Option<String>, JobError> {
    match map.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(Value::Bool(b)) => Ok(Some(b.to_string())),
        Some(_) => Err(JobError::parse(format!("`{key}` must be a string"))),
    }
}

fn get_num<T: FromStr>(map: &Map<String, Value>, key: &str) -> Result<Option<T>, JobError> {
    get_str(map, key)?
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| JobError::parse(format!("`{key}` must be a non-negative integer")))
        })
        .transpose()
}

fn get_list(map: &Map<String, Value>, key: &str) -> Result<Vec<String>, JobError> {
    match map.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                _ => Err(JobError::parse(format!("`{key}` must be a list of strings"))),
            })
            .collect(),
        // Flat text: entries separated by `|`.
        Some(Value::String(s)) => Ok(s.split('|').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()),
        Some(_) => Err(JobError::parse(format!("`{key}` must be a list"))),
    }
}

impl JobSpec {
    pub fn from_document(map: &Map<String, Value>, o: &Overrides) -> Result<JobSpec, JobError> {
        let ring: RingSpec = get_str(map, "ring")?
            .unwrap_or_else(|| "triangular".into())
            .parse()
            .map_err(|e: Error| JobError::parse(e.to_string()))?;
        let field_text = match &o.field {
            Some(f) => f.clone(),
            None => get_str(map, "field")?.unwrap_or_else(|| "q".into()),
        };
        let field: Field = field_text.parse().map_err(|e: Error| JobError::parse(e.to_string()))?;
        let mut polys = get_list(map, "polynomials")?;
        if polys.is_empty() {
            for i in 0..4 {
                if let Some(f) = get_str(map, &format!("f{i}"))? {
                    polys.push(f);
                }
            }
        } else if map.get("polynomials").is_some_and(Value::is_string) {
            // Flat text lists polynomials separated by `;`.
            polys = get_str(map, "polynomials")?
                .unwrap()
                .split(';')
                .map(|p| p.trim().to_string())
                .collect();
        }
        let polynomials: [String; 4] = polys
            .try_into()
            .map_err(|v: Vec<String>| JobError::parse(format!("expected 4 polynomials, got {}", v.len())))?;
        let command: Command = match &o.command {
            Some(c) => c.parse()?,
            None => get_str(map, "command")?
                .ok_or_else(|| JobError::parse("no command given"))?
                .parse()?,
        };
        let nu1 = o.nu1.or(get_num(map, "nu1")?);
        let nu2 = o.nu2.or(get_num(map, "nu2")?);
        let nu = match (o.nu.or(get_num(map, "nu")?), nu1, nu2) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(JobError::parse("give either nu or nu1/nu2, not both"))
            }
            (Some(n), None, None) => Some(DegIndex::Single(n)),
            (None, Some(a), Some(b)) => Some(DegIndex::Pair(a, b)),
            (None, None, None) => None,
            _ => return Err(JobError::parse("nu1 and nu2 must be given together")),
        };
        if let Some(nu) = nu {
            if nu.ring() != ring {
                return Err(JobError::parse(format!("index {nu} does not fit the {} ring", ring.name())));
            }
        }
        let mut points = o.points.clone();
        if points.is_empty() {
            points = get_list(map, "points")?;
            if let Some(p) = get_str(map, "point")? {
                points.insert(0, p);
            }
        }
        let force = o.force
            || match get_str(map, "force")? {
                Some(s) => s == "true",
                None => false,
            };
        Ok(JobSpec {
            ring,
            field,
            polynomials,
            command,
            nu,
            points,
            fitting_index: o.fitting_index.or(get_num(map, "fitting_index")?).unwrap_or(0),
            limit: o.limit.or(get_num(map, "limit")?),
            seed: o.seed.or(get_num(map, "seed")?).unwrap_or(DEFAULT_SEED),
            samples: o.samples.or(get_num(map, "samples")?).unwrap_or(DEFAULT_SAMPLES),
            force,
        })
    }

    fn echo(&self) -> Value {
        json!({
            "ring": self.ring.name(),
            "field": self.field.to_string(),
            "polynomials": self.polynomials,
            "nu": self.nu.map(|n| n.to_string()),
            "points": self.points,
            "fitting_index": self.fitting_index,
            "limit": self.limit,
            "seed": self.seed,
            "samples": self.samples,
            "force": self.force,
        })
    }
}

/// Output document of one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: Value,
    pub code: i32,
}

/// Skeleton document for a job that failed before it could be resolved.
pub fn failure_document(command: Option<&str>, err: &JobError) -> Outcome {
    Outcome {
        document: json!({
            "command": command,
            "input_echo": Value::Null,
            "nu0": Value::Null,
            "results": [],
            "warnings": [],
            "timing_ms": 0,
            "error": { "code": err.code, "message": err.message },
        }),
        code: err.code,
    }
}

/// Runs a job. With `timing` off, `timing_ms` is 0 so identical jobs give identical bytes.
pub fn run(job: &JobSpec, timing: bool) -> Outcome {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let mut nu0 = Value::Null;
    let mut results = Vec::new();
    let result = execute(job, &mut warnings, &mut nu0, &mut results);
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let mut doc = json!({
        "command": job.command.name(),
        "input_echo": job.echo(),
        "nu0": nu0,
        "results": results,
        "warnings": warnings,
        "timing_ms": ms,
    });
    let code = match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            doc["error"] = json!({ "code": e.code, "message": e.message });
            e.code
        }
    };
    Outcome { document: doc, code }
}

fn target_points(job: &JobSpec) -> Result<Vec<ProjPoint>, JobError> {
    if job.points.is_empty() {
        return Err(JobError::parse(format!("`{}` needs --point", job.command)));
    }
    job.points
        .iter()
        .map(|p| ProjPoint::parse(p, PointSpace::Target, job.field).map_err(JobError::from))
        .collect()
}

fn execute(job: &JobSpec, warnings: &mut Vec<String>, nu0: &mut Value, results: &mut Vec<Value>) -> Result<(), JobError> {
    let texts: [&str; 4] = std::array::from_fn(|i| job.polynomials[i].as_str());
    let phi = Parameterization::parse(job.ring, job.field, &texts)?;
    // Points are parsed before any heavy work so bad input fails fast.
    let points = if job.command.needs_target_point() {
        target_points(job)?
    } else {
        Vec::new()
    };

    let validation = validate(&phi, job.seed);
    warnings.extend(validation.warnings());
    if job.command == Command::Validate {
        results.extend(report::validation(&validation));
        return match validation.error {
            Some(e) => Err(JobError {
                code: EXIT_VALIDATION,
                message: e.to_string(),
            }),
            None => Ok(()),
        };
    }
    if let Some(e) = validation.error {
        if job.force {
            warnings.push(format!("validation failed (forced): {e}"));
        } else {
            return Err(JobError {
                code: EXIT_VALIDATION,
                message: format!("{e} (use --force to run anyway)"),
            });
        }
    }

    let mut surface = Surface::new(phi)?;
    if let Some(nu) = job.nu {
        surface = surface.with_working_index(nu)?;
    }
    *nu0 = surface.nu0().map_or(Value::Null, |n| json!(n));
    let field = job.field;
    let working = surface.working_index();
    if !surface.is_admissible(working) {
        warnings.push(format!("index {working} is below the threshold; results carry no guarantee"));
    }

    match job.command {
        Command::Validate => unreachable!(),
        Command::Matrix => {
            let m = surface.rep(working);
            results.push(report::matrix_rep(&m, surface.is_admissible(working)));
        }
        Command::Nu0 => {
            let mut entry = match surface.sat_info() {
                Some(s) => report::sat_info(s, field),
                None => json!({ "nu0": Value::Null }),
            };
            entry["working_index"] = json!(working.to_string());
            results.push(entry);
        }
        Command::Membership => {
            for p in &points {
                let corank = fiber::corank_at(&surface, working, p)?;
                results.push(json!({
                    "point": p.to_string(),
                    "index": working.to_string(),
                    "corank": corank,
                    "on_surface": corank > 0,
                }));
            }
        }
        Command::Fiber => {
            for p in &points {
                let r = fiber::classify(&surface, p)?;
                results.push(report::fiber(p, &r, field));
            }
        }
        Command::Preimage => {
            for p in &points {
                let s = fiber::unique_preimage(&surface, p)?;
                results.push(json!({
                    "point": p.to_string(),
                    "index": fiber::preimage_index(surface.parameterization()).to_string(),
                    "preimage": s.to_string(),
                }));
            }
        }
        Command::FiberCurve => {
            for p in &points {
                let h = fiber::fiber_curve(surface.parameterization(), p)?;
                results.push(json!({
                    "point": p.to_string(),
                    "degree": h.degree.to_string(),
                    "curve_equation": h.to_multi(field).render(),
                }));
            }
        }
        Command::SatElements => {
            let s = fiber::low_degree_sat_elements(&surface)?;
            results.extend(report::low_degree_sat(&s, field));
        }
        Command::Stratify => {
            let space = PointSpace::source_of(job.ring);
            let sources = if job.points.is_empty() {
                sample::source_points(job.ring, field, job.samples, job.seed, 10)
            } else {
                job.points
                    .iter()
                    .map(|p| ProjPoint::parse(p, space, field))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let out = fiber::stratify(&surface, sources.clone());
            for (s, r) in sources.iter().zip(out) {
                let entry = match r {
                    Ok((p, rep)) => {
                        let mut e = report::fiber(&p, &rep, field);
                        e["source"] = json!(s.to_string());
                        e["label"] = json!(report::fiber_label(&rep));
                        e
                    }
                    Err(Error::BasePoint(_)) => json!({ "source": s.to_string(), "label": "base_point" }),
                    Err(e) => return Err(e.into()),
                };
                results.push(entry);
            }
        }
        Command::Minors | Command::PullbackMinors => {
            let m = surface.rep(working);
            let mut req = MinorRequest::new(&m, job.fitting_index).seed(job.seed);
            req.limit = job.limit;
            let g = if job.command == Command::Minors {
                fitting_generators(&req)?
            } else {
                pullback_fitting(surface.parameterization(), &req)?
            };
            let mut entry = report::fitting(&g);
            entry["index"] = json!(working.to_string());
            entry["fitting_index"] = json!(job.fitting_index);
            results.push(entry);
        }
    }
    Ok(())
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A few human-readable lines describing a document.
pub fn summary(doc: &Value) -> String {
    let mut lines = Vec::new();
    let cmd = doc["command"].as_str().unwrap_or("?");
    if let Some(err) = doc.get("error") {
        lines.push(format!("{cmd}: error (exit {}): {}", err["code"], err["message"].as_str().unwrap_or("")));
    }
    if !doc["nu0"].is_null() {
        lines.push(format!("nu0 = {}", doc["nu0"]));
    }
    for r in doc["results"].as_array().into_iter().flatten() {
        let line = if let Some(kind) = r.get("label").or_else(|| r.get("kind")) {
            let mut s = format!("{} -> {}", plain(r.get("source").or(r.get("point")).unwrap_or(&Value::Null)), plain(kind));
            if let Some(d) = r.get("degree") {
                s.push_str(&format!(" degree {d}"));
            }
            if let Some(d) = r.get("delta") {
                s.push_str(&format!(" delta {d}"));
            }
            s
        } else if let Some(check) = r.get("check") {
            format!("{}: {}", check.as_str().unwrap_or(""), r["status"].as_str().unwrap_or(""))
        } else if let Some(c) = r.get("corank") {
            format!("{}: corank {c}", plain(&r["point"]))
        } else if let Some(pre) = r.get("preimage") {
            format!("{} <- {}", plain(&r["point"]), plain(pre))
        } else if let Some(m) = r.get("minors") {
            format!("{} nonzero minors of size {}", m.as_array().map_or(0, Vec::len), r["size"])
        } else if r.get("rows").is_some() {
            format!("M_{} is {} x {}", plain(&r["index"]), r["rows"], r["cols"])
        } else {
            r.to_string()
        };
        lines.push(line);
    }
    for w in doc["warnings"].as_array().into_iter().flatten() {
        lines.push(format!("warning: {}", w.as_str().unwrap_or("")));
    }
    lines.join("\n")
}
