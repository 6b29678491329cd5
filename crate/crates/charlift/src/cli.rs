//! Command-line front end: `eval`, `table`, `verify` and `chambers`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cartan::{self, CartanLabel, CoveredTorusPoint};
use crate::characters::{self, CharacterSpec, LiftConstants, Normalization};
use crate::error::Error;
use crate::oracles::{self, QuadratureParams};
use crate::rootsys;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "charlift", version, about = "Theta-lift character formulas and their numerical oracles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: CHARLIFT_THREADS, else all cores).
    #[arg(long, global = true, env = "CHARLIFT_THREADS")]
    pub threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one character value.
    Eval(EvalArgs),
    /// Sweep up to three coordinates over a grid.
    Table(TableArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Sign scan of the δ-term denominator over Weyl chambers.
    Chambers(ChamberArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// Lift of the U(1) character to U(p,q).
    Upq,
    /// Double lift to U(n, n+1).
    Lift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum, default_value = "upq")]
    pub group: Group,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
}

impl SpecArgs {
    fn dim(&self) -> usize {
        match self.group {
            Group::Upq => self.p + self.q,
            Group::Lift => 2 * self.n + 1,
        }
    }

    fn point(&self, coords: Vec<f64>) -> Result<CoveredTorusPoint, Error> {
        match self.group {
            Group::Upq => CoveredTorusPoint::new(self.p, self.q, CartanLabel::new(self.t), coords),
            Group::Lift => CoveredTorusPoint::unn1(self.n, self.t, coords),
        }
    }

    fn evaluate(&self, point: &CoveredTorusPoint) -> Result<(Complex64, Normalization), Error> {
        let value = match self.group {
            Group::Upq => characters::theta_upq(&CharacterSpec::lift_upq(self.p, self.q, self.m, self.t), point)?,
            Group::Lift => characters::theta_lift_unn1(
                &CharacterSpec::double_lift(self.n, self.m, self.t),
                point,
                &LiftConstants::default(),
            )?,
        };
        Ok((value.value, value.normalization))
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Coordinate bindings, e.g. X1=0.3,X2=1.0 (radians for angles).
    #[arg(long, allow_hyphen_values = true)]
    pub coords: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Fixed coordinates; swept ones may be omitted.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub coords: String,
    /// Swept coordinate, e.g. X2=-1:1:101 (start:stop:steps). Repeatable, at most 3.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Contour,
    Upq,
    Lift,
    Chambers,
    Invariants,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Tolerance; each suite has its own default.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random points per oracle case.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    /// Wall-clock budget in seconds; cases not started in time time out.
    #[arg(long, default_value_t = 300.0)]
    pub budget: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ChamberArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Split rank; all of 1..=n when omitted.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Parse `X1=0.3,X2=-1` into (1-based index, value) bindings.
pub fn parse_bindings(text: &str) -> Result<Vec<(usize, f64)>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (key, value) = item.split_once('=').ok_or_else(|| Error::Invalid(format!("binding `{item}` lacks `=`")))?;
            let index = parse_key(key)?;
            let value = value.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("bad number in `{item}`")))?;
            Ok((index, value))
        })
        .collect()
}

fn parse_key(key: &str) -> Result<usize, Error> {
    let key = key.trim();
    key.strip_prefix(['X', 'x'])
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::Invalid(format!("coordinate name `{key}` is not X1, X2, ...")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub index: usize,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn parse(text: &str) -> Result<Sweep, Error> {
        let bad = || Error::Invalid(format!("sweep `{text}` is not X<k>=start:stop:steps"));
        let (key, range) = text.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let stop = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let steps = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        if steps == 0 {
            return Err(Error::Invalid(format!("sweep `{text}` needs at least one step")));
        }
        Ok(Sweep { index: parse_key(key)?, start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.stop } else { self.start + h * k as f64 }).collect()
    }
}

fn bind(dim: usize, bindings: &[(usize, f64)]) -> Result<Vec<Option<f64>>, Error> {
    let mut coords = vec![None; dim];
    for &(k, v) in bindings {
        if k > dim {
            return Err(Error::Invalid(format!("coordinate X{k} does not exist; the group has {dim}")));
        }
        coords[k - 1] = Some(v);
    }
    Ok(coords)
}

fn open_out(path: &Option<String>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads.filter(|&k| k > 0) {
        builder = builder.num_threads(k);
    }
    builder.build().expect("thread pool")
}

fn fail(code: i32, msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    code
}

pub fn run(cli: Cli) -> i32 {
    let pool = thread_pool(cli.threads);
    let out = cli.out.clone();
    pool.install(|| match &cli.command {
        Command::Eval(a) => run_eval(a, &out),
        Command::Table(a) => run_table(a, &out),
        Command::Verify(a) => run_verify(a, &out),
        Command::Chambers(a) => run_chambers(a, &out),
    })
}

#[derive(Debug, Serialize)]
struct EvalRecord<'a> {
    group: Group,
    m: i64,
    t: usize,
    coords: &'a [f64],
    value_re: f64,
    value_im: f64,
    normalization_tag: &'static str,
    chamber_id: String,
}

pub fn run_eval(args: &EvalArgs, out: &Option<String>) -> i32 {
    let spec = &args.spec;
    let bindings = match parse_bindings(&args.coords).and_then(|b| bind(spec.dim(), &b)) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_INVALID, e),
    };
    if let Some(k) = bindings.iter().position(Option::is_none) {
        return fail(EXIT_INVALID, format!("coordinate X{} is not bound", k + 1));
    }
    let coords: Vec<f64> = bindings.into_iter().flatten().collect();
    let result = spec.point(coords).and_then(|pt| {
        let (value, norm) = spec.evaluate(&pt)?;
        let chamber = cartan::chamber_id(&pt)?;
        Ok((pt, value, norm, chamber))
    });
    let (pt, value, norm, chamber) = match result {
        Ok(r) => r,
        Err(e) => return fail(EXIT_INVALID, e),
    };
    let record = EvalRecord {
        group: spec.group,
        m: spec.m,
        t: spec.t,
        coords: pt.coords(),
        value_re: value.re,
        value_im: value.im,
        normalization_tag: norm.tag(),
        chamber_id: chamber,
    };
    let written = open_out(out).and_then(|mut w| {
        match args.format {
            Format::Json => writeln!(w, "{}", serde_json::to_string(&record).map_err(io::Error::other)?)?,
            Format::Csv => {
                let mut header: Vec<String> = vec!["group".into(), "m".into(), "t".into()];
                header.extend((1..=pt.dim()).map(|k| format!("X{k}")));
                header.extend(["re", "im", "normalization_tag", "chamber_id"].map(String::from));
                let group = match spec.group {
                    Group::Upq => "upq",
                    Group::Lift => "lift",
                };
                let mut row: Vec<String> = vec![group.into(), spec.m.to_string(), spec.t.to_string()];
                row.extend(pt.coords().iter().map(f64::to_string));
                row.extend([value.re.to_string(), value.im.to_string(), norm.tag().into(), record.chamber_id.clone()]);
                let mut csv = csv::Writer::from_writer(&mut w);
                csv.write_record(&header)?;
                csv.write_record(&row)?;
                csv.flush()?;
            }
        }
        w.flush()
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => fail(EXIT_INVALID, format!("cannot write output: {e}")),
    }
}

struct Row {
    coords: Vec<f64>,
    value: Option<Complex64>,
    status: String,
}

pub fn run_table(args: &TableArgs, out: &Option<String>) -> i32 {
    let spec = &args.spec;
    let setup = (|| -> Result<(Vec<Option<f64>>, Vec<Sweep>), Error> {
        let fixed = bind(spec.dim(), &parse_bindings(&args.coords)?)?;
        let sweeps: Vec<Sweep> = args.sweep.iter().map(|s| Sweep::parse(s)).collect::<Result<_, _>>()?;
        if sweeps.len() > 3 {
            return Err(Error::Invalid("at most 3 coordinates can be swept".into()));
        }
        for s in &sweeps {
            if s.index > spec.dim() {
                return Err(Error::Invalid(format!("coordinate X{} does not exist", s.index)));
            }
        }
        if !sweeps.iter().map(|s| s.index).all_unique() {
            return Err(Error::Invalid("a coordinate is swept twice".into()));
        }
        for (k, v) in fixed.iter().enumerate() {
            if v.is_none() && !sweeps.iter().any(|s| s.index == k + 1) {
                return Err(Error::Invalid(format!("coordinate X{} is neither bound nor swept", k + 1)));
            }
        }
        spec.point(vec![0.0; spec.dim()])?;
        Ok((fixed, sweeps))
    })();
    let (fixed, sweeps) = match setup {
        Ok(s) => s,
        Err(e) => return fail(EXIT_INVALID, e),
    };
    let grids: Vec<Vec<f64>> = sweeps.iter().map(Sweep::values).collect();
    let combos: Vec<Vec<f64>> = grids.iter().map(|g| g.iter().copied()).multi_cartesian_product().collect();
    let combos = if sweeps.is_empty() { vec![vec![]] } else { combos };
    let rows: Vec<Row> = combos
        .par_iter()
        .map(|vals| {
            let mut coords: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
            for (s, &v) in sweeps.iter().zip(vals) {
                coords[s.index - 1] = v;
            }
            match spec.point(coords.clone()).and_then(|pt| spec.evaluate(&pt)) {
                Ok((value, _)) => Row { coords, value: Some(value), status: "ok".into() },
                Err(e) if e.is_singular() => Row { coords, value: None, status: "singular".into() },
                Err(e) => Row { coords, value: None, status: format!("error: {e}") },
            }
        })
        .collect();
    let written = open_out(out).and_then(|mut w| {
        match args.format {
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(&mut w);
                let mut header: Vec<String> = (1..=spec.dim()).map(|k| format!("X{k}")).collect();
                header.extend(["re", "im", "status"].map(String::from));
                csv.write_record(&header)?;
                for row in &rows {
                    let mut rec: Vec<String> = row.coords.iter().map(f64::to_string).collect();
                    match row.value {
                        Some(v) => rec.extend([v.re.to_string(), v.im.to_string()]),
                        None => rec.extend([String::new(), String::new()]),
                    }
                    rec.push(row.status.clone());
                    csv.write_record(&rec)?;
                }
                csv.flush()?;
            }
            Format::Json => {
                for row in &rows {
                    let rec = json!({
                        "coords": row.coords,
                        "value_re": row.value.map(|v| v.re),
                        "value_im": row.value.map(|v| v.im),
                        "status": row.status,
                    });
                    writeln!(w, "{rec}")?;
                }
            }
        }
        w.flush()
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => fail(EXIT_INVALID, format!("cannot write output: {e}")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub suite: &'static str,
    pub case: String,
    pub status: &'static str,
    pub error: Option<f64>,
    pub detail: String,
}

impl CaseResult {
    fn new(suite: &'static str, case: String, pass: bool, error: Option<f64>, detail: String) -> Self {
        CaseResult { suite, case, status: if pass { "pass" } else { "fail" }, error, detail }
    }
}

/// Cases are built lazily so the budget can cut them off.
type Case<'a> = Box<dyn Fn() -> Vec<CaseResult> + Send + Sync + 'a>;

fn contour_cases(args: &VerifyArgs) -> Vec<Case<'_>> {
    let tol = args.tol.unwrap_or(1e-10);
    let params = QuadratureParams::default().with_nodes(args.nodes);
    let mut cases: Vec<Case> = Vec::new();
    for k in [-2i64, 0, 3] {
        for a in [Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.5), Complex64::new(2.0, 0.0)] {
            let params = params.clone();
            cases.push(Box::new(move || {
                let name = format!("k={k} a={a}");
                vec![match oracles::contour_unit_circle_moment(k, a, &params) {
                    Ok(v) => {
                        let err = (v - oracles::contour_moment_exact(k, a)).norm();
                        CaseResult::new("contour", name, err < tol, Some(err), String::new())
                    }
                    Err(e) => CaseResult::new("contour", name, false, None, e.to_string()),
                }]
            }));
        }
    }
    cases
}

fn report_result(suite: &'static str, r: crate::error::Result<oracles::VerificationReport>, name: String) -> CaseResult {
    match r {
        Ok(rep) => CaseResult::new(suite, rep.case.clone(), rep.pass, Some(rep.relative_error), rep.notes.join("; ")),
        Err(e) => CaseResult::new(suite, name, false, None, e.to_string()),
    }
}

fn upq_cases(args: &VerifyArgs) -> Vec<Case<'_>> {
    let shapes: Vec<(usize, usize)> = match (args.p, args.q) {
        (None, None) => vec![(1, 1), (1, 2), (2, 2)],
        (p, q) => vec![(p.unwrap_or(1), q.unwrap_or(1))],
    };
    let ms: Vec<i64> = args.m.map_or(vec![-3, 0, 2], |m| vec![m]);
    let params = QuadratureParams::default().with_nodes(args.nodes).with_tolerance(args.tol.unwrap_or(1e-5));
    let mut cases: Vec<Case> = Vec::new();
    for (p, q) in shapes {
        let ts: Vec<usize> = args.t.map_or((0..=p.min(q)).collect(), |t| vec![t]);
        for t in ts {
            for &m in &ms {
                let params = params.clone();
                cases.push(Box::new(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (p as u64) << 8 ^ (q as u64) << 16 ^ (t as u64) << 24 ^ (m as u64) << 32);
                    (0..args.points)
                        .map(|_| {
                            let name = format!("upq p={p} q={q} m={m} t={t}");
                            let r = oracles::random_regular_point(p, q, CartanLabel::new(t), &mut rng)
                                .and_then(|pt| oracles::verify_theta_upq(p, q, m, t, &pt, &params));
                            report_result("upq", r, name)
                        })
                        .collect()
                }));
            }
        }
    }
    cases
}

fn lift_cases(args: &VerifyArgs) -> Vec<Case<'_>> {
    let ns: Vec<usize> = args.n.map_or(vec![1, 2], |n| vec![n]);
    let ms: Vec<i64> = args.m.map_or(vec![-2, 0, 3], |m| vec![m]);
    let params = QuadratureParams::default().with_nodes(args.nodes).with_tolerance(args.tol.unwrap_or(1e-4));
    let mut cases: Vec<Case> = Vec::new();
    for n in ns {
        let ts: Vec<usize> = args.t.map_or((0..=n).collect(), |t| vec![t]);
        for t in ts {
            for &m in &ms {
                let params = params.clone();
                cases.push(Box::new(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (n as u64) << 8 ^ (t as u64) << 24 ^ (m as u64) << 32);
                    (0..args.points)
                        .map(|_| {
                            let name = format!("lift n={n} m={m} t={t}");
                            let r = oracles::random_regular_point(n, n + 1, CartanLabel::nested(t), &mut rng)
                                .and_then(|pt| oracles::verify_theta_lift(n, m, t, &pt, &params));
                            report_result("lift", r, name)
                        })
                        .collect()
                }));
            }
        }
    }
    cases
}

fn chamber_cases(args: &VerifyArgs) -> Vec<Case<'_>> {
    let ns: Vec<usize> = args.n.map_or(vec![1, 2, 3], |n| vec![n]);
    let mut cases: Vec<Case> = Vec::new();
    for n in ns {
        let ts: Vec<usize> = args.t.map_or((1..=n).collect(), |t| vec![t]);
        for t in ts {
            cases.push(Box::new(move || {
                let name = format!("chambers n={n} t={t}");
                vec![match oracles::chamber_sign_scan(n, t, 200, args.seed) {
                    Ok(r) => CaseResult::new(
                        "chambers",
                        name,
                        r.pass,
                        None,
                        format!("{} chambers, {} violations, {} resampled", r.chambers.len(), r.violations, r.resampled),
                    ),
                    Err(e) => CaseResult::new("chambers", name, false, None, e.to_string()),
                }]
            }));
        }
    }
    cases
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn invariant_cases(args: &VerifyArgs) -> Vec<Case<'_>> {
    let seed = args.seed;
    let mut cases: Vec<Case> = Vec::new();
    cases.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0f64;
        for (p, q) in [(1, 2), (2, 2)] {
            for _ in 0..20 {
                let pt = oracles::random_regular_point(p, q, CartanLabel::new(0), &mut rng).unwrap();
                let spec = CharacterSpec::lift_upq(p, q, 1, 0);
                let base = characters::theta_upq(&spec, &pt).unwrap().value;
                let mut x = pt.coords().to_vec();
                x[..p].rotate_left(1);
                x[p..].reverse();
                let moved = characters::theta_upq(&spec, &pt.with_coords(x).unwrap()).unwrap().value;
                worst = worst.max(rel(base, moved));
            }
        }
        vec![CaseResult::new("invariants", "weyl invariance".into(), worst < 1e-12, Some(worst), String::new())]
    }));
    cases.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1);
        let mut worst = 0f64;
        for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            for t in 0..=p.min(q) {
                for _ in 0..10 {
                    let pt = oracles::random_regular_point(p, q, CartanLabel::new(t), &mut rng).unwrap();
                    let c = cartan::cayley_of(&pt);
                    let g = cartan::embed_in_group(&pt);
                    let back = c.adjoint() * &g * &c;
                    worst = worst.max((back - cartan::torus_matrix(&pt)).norm());
                    let j = cartan::signature_matrix(p, q);
                    worst = worst.max((g.adjoint() * &j * &g - &j).norm());
                }
            }
        }
        vec![CaseResult::new("invariants", "cayley consistency".into(), worst < 1e-12, Some(worst), String::new())]
    }));
    cases.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 2);
        let mut worst = 0f64;
        for _ in 0..10 {
            let pt = oracles::random_regular_point(1, 2, CartanLabel::nested(0), &mut rng).unwrap();
            let logs = pt.logs();
            for sigma in (1..=3).permutations(3) {
                let dq = rootsys::delta_quotient(1, sigma[0], sigma[2], &pt).unwrap().value;
                worst = worst.max(rel(dq, rootsys::centralizer_quotient(&sigma, 1, 1, &logs)));
            }
        }
        vec![CaseResult::new("invariants", "delta quotient".into(), worst < 1e-12, Some(worst), String::new())]
    }));
    cases.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 3);
        let mut worst = 0f64;
        for _ in 0..100 {
            let d = rng.random_range(1..=3);
            let u = random_unitary(d, &mut rng);
            if let Ok(e) = characters::epsilon_character(&u, 0) {
                worst = worst.max((e - Complex64::new(e.re.signum(), 0.0)).norm());
            }
        }
        vec![CaseResult::new("invariants", "epsilon on unitary blocks".into(), worst < 1e-9, Some(worst), String::new())]
    }));
    cases
}

/// Random d×d unitary matrix: the Q factor of a random complex matrix.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    a.qr().q()
}

pub fn run_verify(args: &VerifyArgs, out: &Option<String>) -> i32 {
    if let Err(e) = QuadratureParams::default().with_nodes(args.nodes).validate_nodes() {
        return fail(EXIT_INVALID, e);
    }
    let suites = match args.suite {
        Suite::All => vec![Suite::Contour, Suite::Upq, Suite::Lift, Suite::Chambers, Suite::Invariants],
        s => vec![s],
    };
    let mut cases: Vec<(&'static str, Case)> = Vec::new();
    for s in suites {
        let (name, list) = match s {
            Suite::Contour => ("contour", contour_cases(args)),
            Suite::Upq => ("upq", upq_cases(args)),
            Suite::Lift => ("lift", lift_cases(args)),
            Suite::Chambers => ("chambers", chamber_cases(args)),
            Suite::Invariants => ("invariants", invariant_cases(args)),
            Suite::All => unreachable!(),
        };
        cases.extend(list.into_iter().map(|c| (name, c)));
    }
    let start = Instant::now();
    let budget = Duration::from_secs_f64(args.budget.max(0.0));
    let results: Vec<Vec<CaseResult>> = cases
        .par_iter()
        .enumerate()
        .map(|(k, (suite, case))| {
            if start.elapsed() > budget {
                vec![CaseResult {
                    suite,
                    case: format!("case {k}"),
                    status: "timeout",
                    error: None,
                    detail: "budget exhausted before start".into(),
                }]
            } else {
                case()
            }
        })
        .collect();
    let results: Vec<CaseResult> = results.into_iter().flatten().collect();
    let written = open_out(out).and_then(|mut w| {
        for r in &results {
            writeln!(w, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?;
        }
        w.flush()
    });
    if let Err(e) = written {
        return fail(EXIT_INVALID, format!("cannot write output: {e}"));
    }
    if results.iter().any(|r| r.status == "fail") {
        EXIT_FAILED
    } else if results.iter().any(|r| r.status == "timeout") {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    }
}

pub fn run_chambers(args: &ChamberArgs, out: &Option<String>) -> i32 {
    if args.n == 0 || args.t.is_some_and(|t| t > args.n) {
        return fail(EXIT_INVALID, format!("need n >= 1 and t <= n, got n={} t={:?}", args.n, args.t));
    }
    let ts: Vec<usize> = args.t.map_or((1..=args.n).collect(), |t| vec![t]);
    let mut reports = Vec::new();
    for t in ts {
        match oracles::chamber_sign_scan(args.n, t, args.samples, args.seed) {
            Ok(r) => reports.push(r),
            Err(e) => return fail(EXIT_INVALID, e),
        }
    }
    let written = open_out(out).and_then(|mut w| {
        for r in &reports {
            writeln!(w, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?;
        }
        w.flush()
    });
    if let Err(e) = written {
        return fail(EXIT_INVALID, format!("cannot write output: {e}"));
    }
    if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
