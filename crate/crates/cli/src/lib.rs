//! Command-line front end: argument parsing, report rendering and the catalog
//! cache.

pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use sdlab_core::catalog::{IndecCatalog, CACHE_FORMAT_VERSION};
use sdlab_core::curve::curve_inf_scan;
use sdlab_core::derived::QuiverCategory;
use sdlab_core::entropy::{category_for_series, sdim_estimate, volume, EntropySeries};
use sdlab_core::quiver::{classify_dynkin, parse_quiver, positive_roots, EulerData, Quiver};
use sdlab_core::stability::{
    certify_collection, extract_exceptional_collection, gepner_check, gepner_construct, gldim, make_stability,
    mass_growth, restrict_to_subquiver, sample_batch, SigmaJson, StabilityCondition,
};

pub use report::{Format, Report, Table};

/// Errors surfaced by the command line, each with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sdlab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Core(e) => e.kind(),
        }
    }

    /// `{"error": kind, "message": text}`.
    pub fn to_json(&self) -> Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Everything a single invocation needs.
#[derive(Debug, Parser)]
#[command(name = "sdlab", version, about = "Serre dimensions, entropy and stability conditions")]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report format; JSON is canonical.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler form, Coxeter data and Dynkin type of a quiver.
    Quiver(QuiverArgs),
    /// Entropy of the Serre functor on a grid of t.
    Entropy(EntropyArgs),
    /// Upper and lower Serre dimensions.
    Sdim(SeriesArgs),
    /// Volumes V_lambda = exp(h_{log lambda}(S)).
    Volume(VolumeArgs),
    /// Stability conditions on the standard heart of a Dynkin quiver.
    #[command(subcommand)]
    Stab(StabCommand),
    /// Gepner point of a Dynkin quiver.
    Gepner(GepnerArgs),
    /// Global dimension bounds for sigma_{beta,H} on a curve.
    Curve(CurveArgs),
    /// Runs every consistency check on a list of presets.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum StabCommand {
    /// Global dimension and semistable indecomposables.
    Gldim(SigmaArgs),
    /// Seeded random stability conditions.
    Sample(SampleArgs),
    /// Gepner point and its check.
    Gepner(GepnerArgs),
    /// Full strong exceptional collection from a stability condition with gldim < 1.
    Fec(SigmaArgs),
    /// Restriction to a full connected subquiver.
    Restrict(RestrictArgs),
    /// Mass growth of the Serre functor.
    Mass(MassArgs),
}

#[derive(Debug, Args)]
pub struct QuiverArgs {
    /// Preset name or `vertices:n; arrows:s->t,...`.
    #[arg(long)]
    pub quiver: String,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub quiver: String,
    /// Number of Serre iterations.
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub quiver: String,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-2,-1,0,1,2")]
    pub t_grid: Vec<f64>,
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
    /// Emit the graded dimensions `n,m,dim` instead of the profile.
    #[arg(long)]
    pub series: bool,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub quiver: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    #[arg(long)]
    pub quiver: String,
    /// JSON file `{"quiver": ..., "z_simples": [[re, im], ...]}`.
    #[arg(long, conflicts_with = "z")]
    pub sigma: Option<PathBuf>,
    /// Charges of the simples as `re,im,re,im,...`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub quiver: String,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct GepnerArgs {
    #[arg(long)]
    pub quiver: String,
    /// Also report the check `S.sigma = sigma.mu`.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct RestrictArgs {
    #[command(flatten)]
    pub sigma: SigmaArgs,
    /// 1-based vertices of the subquiver.
    #[arg(long, value_delimiter = ',', required = true)]
    pub subset: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    #[command(flatten)]
    pub sigma: SigmaArgs,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-2,0,2")]
    pub t_grid: Vec<f64>,
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub genus: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub h_grid: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "A2,A3,D4")]
    pub quivers: Vec<String>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

/// Directory of the catalog cache: `$SDLAB_CACHE`, else `./.sdlab-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("SDLAB_CACHE").map_or_else(|| PathBuf::from(".sdlab-cache"), PathBuf::from)
}

/// Cache file of a preset.
pub fn cache_path(dir: &Path, preset: &str) -> PathBuf {
    dir.join(format!("{preset}-v{CACHE_FORMAT_VERSION}.json"))
}

/// Dynkin category, with the catalog of a named preset read from or written
/// to the cache.
pub fn dynkin_category(q: &Quiver) -> CliResult<Arc<QuiverCategory>> {
    if classify_dynkin(q)?.is_none() {
        return Err(sdlab_core::Error::CatalogIncomplete.into());
    }
    let catalog = match q.name() {
        Some(name) => {
            let path = cache_path(&cache_dir(), name);
            match IndecCatalog::load(q, &path) {
                Ok(c) => c,
                Err(_) => {
                    let c = IndecCatalog::dynkin(q)?;
                    // An unwritable cache only costs a rebuild next time.
                    let _ = c.save(&path);
                    c
                }
            }
        }
        None => IndecCatalog::dynkin(q)?,
    };
    Ok(Arc::new(QuiverCategory::from_catalog(catalog)?))
}

fn sigma_from(args: &SigmaArgs, cat: &Arc<QuiverCategory>) -> CliResult<StabilityCondition> {
    if let Some(path) = &args.sigma {
        let text = std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
        let s: SigmaJson = serde_json::from_str(&text).map_err(|e| config(format!("{}: {e}", path.display())))?;
        return Ok(s.build(cat)?);
    }
    if let Some(z) = &args.z {
        if z.len() % 2 != 0 {
            return Err(config("--z needs an even number of values (re,im pairs)"));
        }
        let z: Vec<Complex64> = z.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        return Ok(make_stability(cat, &z)?);
    }
    Ok(gepner_construct(cat)?)
}

#[derive(Serialize)]
struct SemistableRow {
    root: Vec<i64>,
    phase: f64,
    stable: bool,
}

fn semistable_rows(s: &StabilityCondition) -> Vec<SemistableRow> {
    let cat = s.category();
    s.semistable_indecomposables()
        .into_iter()
        .map(|(id, phase)| SemistableRow { root: cat.catalog().entry(id).dim_vector.clone(), phase, stable: s.is_stable(id) })
        .collect()
}

fn root_string(d: &[i64]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn sigma_report(s: &StabilityCondition) -> Report {
    let rows = semistable_rows(s);
    let table = Table::new(
        &["root", "phase", "stable"],
        rows.iter().map(|r| vec![root_string(&r.root), r.phase.to_string(), r.stable.to_string()]).collect(),
    );
    Report::new(json!({ "sigma": s.to_json(), "gldim": gldim(s), "semistable": rows }), table)
}

fn gepner_report(q: &Quiver, check: bool) -> CliResult<Report> {
    let cat = dynkin_category(q)?;
    let h = cat.dynkin_class().expect("Dynkin category").coxeter_number as i64;
    let s = gepner_construct(&cat)?;
    let mu = (h - 2) as f64 / h as f64;
    let mut out = sigma_report(&s);
    out.json["mu"] = json!(mu);
    out.json["mu_exact"] = json!(format!("{}/{}", (h - 2) / gcd(h - 2, h), h / gcd(h - 2, h)));
    if check {
        let r = gepner_check(&s, mu)?;
        out.json["check"] = serde_json::to_value(&r).expect("report serializes");
        out.json["verdict"] = json!(r.verdict);
    }
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs().max(1) } else { gcd(b, a % b) }
}

fn quiver_report(q: &Quiver) -> CliResult<Report> {
    let data = EulerData::new(q);
    let class = classify_dynkin(q)?;
    let arrows: Vec<[usize; 2]> = q.arrows().iter().map(|&(s, t)| [s + 1, t + 1]).collect();
    let dynkin = class.map(|c| {
        json!({ "type": c.name(), "coxeter_number": c.coxeter_number, "fcy": c.fcy_pair() })
    });
    let roots = if class.is_some() { Some(positive_roots(q)?) } else { None };
    let table = match &roots {
        Some(r) => Table::new(&["root"], r.iter().map(|d| vec![root_string(d)]).collect()),
        None => Table::default(),
    };
    Ok(Report::new(
        json!({
            "quiver": q.label(),
            "text": q.to_string(),
            "vertices": q.vertex_count(),
            "arrows": arrows,
            "euler_matrix": data.matrix.rows(),
            "coxeter_matrix": data.coxeter.rows(),
            "dynkin": dynkin,
            "positive_roots": roots,
        }),
        table,
    ))
}

fn entropy_report(args: &EntropyArgs) -> CliResult<Report> {
    let q = parse_quiver(&args.quiver)?;
    if args.t_grid.is_empty() {
        return Err(sdlab_core::Error::EmptyGrid.into());
    }
    if args.nmax < 4 {
        return Err(config("--nmax must be at least 4"));
    }
    let cat = category_for_series(&q, args.nmax)?;
    let series = EntropySeries::compute(&cat, args.nmax)?;
    if args.series {
        let table = Table::from_csv(&series.to_csv());
        return Ok(Report::new(json!({ "quiver": q.label(), "series": table.to_records() }), table));
    }
    let samples: Vec<(f64, f64)> = args.t_grid.iter().map(|&t| (t, series.entropy(t))).collect();
    let table = Table::new(&["t", "h_t"], samples.iter().map(|(t, h)| vec![t.to_string(), h.to_string()]).collect());
    let mut body = json!({
        "quiver": q.label(),
        "nmax": args.nmax,
        "samples": samples.iter().map(|&(t, h)| json!({ "t": t, "h_t": h })).collect::<Vec<_>>(),
    });
    if samples.len() >= 3 {
        let p = sdlab_core::entropy::entropy_profile(&q, &args.t_grid, args.nmax)?;
        body["slope"] = json!(p.slope);
        body["intercept"] = json!(p.intercept);
        body["residual"] = json!(p.residual);
        body["c_hat"] = json!([p.c_hat.re, p.c_hat.im]);
    }
    Ok(Report::new(body, table))
}

fn volume_report(args: &VolumeArgs) -> CliResult<Report> {
    let q = parse_quiver(&args.quiver)?;
    let rows = args
        .lambda
        .iter()
        .map(|&l| Ok((l, volume(&q, l, args.nmax)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let table = Table::new(&["lambda", "volume"], rows.iter().map(|(l, v)| vec![l.to_string(), v.to_string()]).collect());
    Ok(Report::new(
        json!({ "quiver": q.label(), "volumes": rows.iter().map(|&(l, v)| json!({ "lambda": l, "volume": v })).collect::<Vec<_>>() }),
        table,
    ))
}

fn stab_report(cmd: &StabCommand, seed: u64) -> CliResult<Report> {
    match cmd {
        StabCommand::Gldim(args) => {
            let cat = dynkin_category(&parse_quiver(&args.quiver)?)?;
            Ok(sigma_report(&sigma_from(args, &cat)?))
        }
        StabCommand::Sample(args) => {
            let cat = dynkin_category(&parse_quiver(&args.quiver)?)?;
            let batch = sample_batch(&cat, seed, args.count)?;
            let rows: Vec<Value> = batch
                .iter()
                .enumerate()
                .map(|(k, s)| json!({ "seed": seed.wrapping_add(k as u64), "z_simples": s.to_json().z_simples, "gldim": gldim(s) }))
                .collect();
            let table = Table::new(
                &["seed", "gldim"],
                batch.iter().enumerate().map(|(k, s)| vec![seed.wrapping_add(k as u64).to_string(), gldim(s).to_string()]).collect(),
            );
            Ok(Report::new(json!({ "quiver": cat.quiver().label(), "samples": rows }), table))
        }
        StabCommand::Gepner(args) => gepner_report(&parse_quiver(&args.quiver)?, args.check),
        StabCommand::Fec(args) => {
            let cat = dynkin_category(&parse_quiver(&args.quiver)?)?;
            let s = sigma_from(args, &cat)?;
            let coll = extract_exceptional_collection(&s)?;
            let cert = certify_collection(&cat, &coll);
            let objects: Vec<Value> = coll
                .iter()
                .map(|o| {
                    json!({
                        "root": cat.catalog().entry(o.id).dim_vector,
                        "shift": o.shift,
                        "phase": s.object_phase(o.id, o.shift),
                    })
                })
                .collect();
            let table = Table::new(
                &["root", "shift"],
                coll.iter().map(|o| vec![root_string(&cat.catalog().entry(o.id).dim_vector), o.shift.to_string()]).collect(),
            );
            let full_strong = cert.is_full_strong(cat.quiver().vertex_count());
            Ok(Report::new(json!({ "collection": objects, "certificate": cert, "full_strong": full_strong }), table))
        }
        StabCommand::Restrict(args) => {
            let cat = dynkin_category(&parse_quiver(&args.sigma.quiver)?)?;
            let s = sigma_from(&args.sigma, &cat)?;
            if args.subset.contains(&0) {
                return Err(config("--subset vertices are 1-based"));
            }
            let subset: Vec<usize> = args.subset.iter().map(|v| v - 1).collect();
            let r = restrict_to_subquiver(&s, &subset)?;
            let mut out = sigma_report(&r);
            out.json["gldim_original"] = json!(gldim(&s));
            out.json["subquiver"] = json!(r.quiver().to_string());
            Ok(out)
        }
        StabCommand::Mass(args) => {
            let cat = dynkin_category(&parse_quiver(&args.sigma.quiver)?)?;
            let s = sigma_from(&args.sigma, &cat)?;
            let growth = mass_growth(&s, &args.t_grid, args.nmax)?;
            let series = EntropySeries::compute(&cat, args.nmax)?;
            let rows: Vec<(f64, f64, f64)> = growth.samples.iter().map(|&(t, hs)| (t, hs, series.entropy(t))).collect();
            let table = Table::new(
                &["t", "h_sigma_t", "h_t"],
                rows.iter().map(|(t, a, b)| vec![t.to_string(), a.to_string(), b.to_string()]).collect(),
            );
            Ok(Report::new(
                json!({
                    "samples": rows.iter().map(|&(t, a, b)| json!({ "t": t, "h_sigma_t": a, "h_t": b })).collect::<Vec<_>>(),
                    "phase_upper": growth.phase_upper,
                    "phase_lower": growth.phase_lower,
                }),
                table,
            ))
        }
    }
}

fn curve_report(args: &CurveArgs) -> CliResult<Report> {
    let rows = curve_inf_scan(args.genus, &args.h_grid, args.beta)?;
    let table = Table::from_csv(&sdlab_core::curve::scan_to_csv(&rows));
    Ok(Report::new(json!({ "genus": args.genus, "beta": args.beta, "rows": rows }), table))
}

/// Produces the report of a command; `verify` reports failures through
/// [`Report::failed`].
pub fn run_report(cfg: &RunConfig) -> CliResult<Report> {
    match &cfg.command {
        Command::Quiver(a) => quiver_report(&parse_quiver(&a.quiver)?),
        Command::Entropy(a) => entropy_report(a),
        Command::Sdim(a) => {
            let q = parse_quiver(&a.quiver)?;
            let d = sdim_estimate(&q, a.nmax)?;
            Ok(Report::new(serde_json::to_value(&d).expect("sdim serializes"), Table::default()))
        }
        Command::Volume(a) => volume_report(a),
        Command::Stab(c) => stab_report(c, cfg.seed),
        Command::Gepner(a) => gepner_report(&parse_quiver(&a.quiver)?, a.check),
        Command::Curve(a) => curve_report(a),
        Command::Verify(a) => verify::verify_suite(&a.quivers, cfg.seed, a.samples).map(|s| s.into_report()),
    }
}

/// Parses arguments, runs the command, writes the report and returns the exit
/// status. Errors go to stderr as JSON.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => return fail(&config(e.to_string().trim().to_string())),
    };
    let report = match run_report(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let format = cfg.format.unwrap_or(match cfg.command {
        Command::Verify(_) => Format::Text,
        _ => Format::Json,
    });
    let text = report.render(format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(&config(format!("{}: {e}", path.display())));
            }
        }
        None => print!("{text}"),
    }
    if report.failed { 1 } else { 0 }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}
