//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 nothing reachable under
//! `--require-reachable`, 4 a bound violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::amplitude::{trace, uniform_grid, CorrelationTrace};
use crate::bounds::{tau_ent, BoundReport, PairStatus};
use crate::drive::{effective_time, DEFAULT_PANELS};
use crate::report::{fmt_num, snapshot_csv, sweep_csv, to_json, trace_csv, verify_csv};
use crate::scenario::{load_scenario, LoadedScenario};
use crate::schmidt::heisenberg::{heisenberg_demo, Initial};
use crate::schmidt::{
    classify_on_labels, classify_trajectory, schmidt_trace, PersistenceReport, SchmidtSnapshot,
};
use crate::search::{
    annotate_report, first_full_orthogonality, first_orthogonality, verify_with, SearchResult,
    SearchSettings, VerifyRow, DEFAULT_EPSILON,
};
use crate::sweep::{random_campaign, run_sweep, Axis, CampaignStats, SweepRow, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNREACHABLE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "oracle-qsl",
    version,
    about = "Entanglement speed limits for quantum oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-pair bounds, the entanglement time, energy statistics and comparison bounds.
    Bound(BoundArgs),
    /// Sampled overlaps D(t) and correlation amplitudes z(t).
    Trace(TraceArgs),
    /// First time |z| drops below epsilon.
    Search(SearchArgs),
    /// Checks the tolerance-adjusted bound on a scenario, or on a random campaign.
    Verify(VerifyArgs),
    /// Evaluates a parameter family.
    Sweep(SweepArgs),
    /// Randomized soundness campaign.
    Campaign(CampaignArgs),
    /// Schmidt snapshots and persistence classification.
    Schmidt(SchmidtArgs),
    /// Two-qubit Heisenberg example of nonpersistent entanglement.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SearchFlags {
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    horizon: Option<f64>,
    /// Grid step override.
    #[arg(long)]
    dt: Option<f64>,
}

impl SearchFlags {
    fn settings(&self) -> SearchSettings {
        SearchSettings {
            epsilon: self.epsilon,
            horizon: self.horizon,
            dt: self.dt,
        }
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchFlags,
    /// Quadrature panels for driven couplings.
    #[arg(long, default_value_t = DEFAULT_PANELS)]
    panels: usize,
    #[arg(long)]
    require_reachable: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 201)]
    n_samples: usize,
    /// One file per pair, named `<out stem>_<x>_<x'>.csv`.
    #[arg(long, conflicts_with = "long")]
    split: bool,
    /// Single file with a leading `pair` column.
    #[arg(long)]
    long: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchFlags,
    /// Search full-state orthogonality instead of per-pair.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    require_reachable: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Scenario to verify; without it a random campaign is run.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long)]
    require_reachable: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long)]
    axis: Axis,
    /// Comma-separated, strictly monotone.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    values: Vec<f64>,
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args, Debug)]
struct SchmidtArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 101)]
    n_samples: usize,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "plus_up")]
    initial: Initial,
    /// Largest accumulated coupling K.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    k_max: f64,
    #[arg(long, default_value_t = 65)]
    n_samples: usize,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: e.to_string(),
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Bound(a) => cmd_bound(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Search(a) => cmd_search(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Schmidt(a) => cmd_schmidt(a),
        Command::Demo(a) => cmd_demo(a),
    }
}

fn load(path: &Path) -> Result<LoadedScenario, Failure> {
    load_scenario(path).map_err(invalid)
}

/// Writes via a sibling temporary file and a rename, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(invalid)
        }
        Some(path) => write_atomic(path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    scenario_digest: &'a str,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct DrivenTimes {
    profile: crate::drive::DriveProfile,
    /// Wall-clock times at which the accumulated coupling reaches each
    /// constant-coupling time; `None` when the profile saturates first.
    tau_ent_wall: Option<f64>,
    pairs: Vec<DrivenPair>,
}

#[derive(Serialize)]
struct DrivenPair {
    pair: [String; 2],
    tau_pair_wall: Option<f64>,
    tau_hat_wall: Option<f64>,
}

#[derive(Serialize)]
struct BoundOutput {
    #[serde(flatten)]
    report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    driven: Option<DrivenTimes>,
}

fn cmd_bound(a: BoundArgs) -> Result<i32, Failure> {
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let mut report = tau_ent(s).map_err(invalid)?;
    annotate_report(&mut report, s, &a.search.settings()).map_err(invalid)?;
    let profile = &s.coupling().profile;
    let driven = if profile.is_constant() {
        None
    } else {
        let wall = |g: Option<f64>| -> Result<Option<f64>, Failure> {
            match g {
                Some(g) => effective_time(profile, g, a.panels).map_err(invalid),
                None => Ok(None),
            }
        };
        let mut pairs = Vec::new();
        for r in &report.pairs {
            pairs.push(DrivenPair {
                pair: r.pair.clone(),
                tau_pair_wall: wall(r.tau_pair)?,
                tau_hat_wall: wall(r.tau_hat)?,
            });
        }
        Some(DrivenTimes {
            profile: profile.clone(),
            tau_ent_wall: wall(Some(report.tau_ent))?,
            pairs,
        })
    };
    let reachable = report.pairs.iter().any(|r| r.tau_hat.is_some());
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&Tagged {
            scenario_digest: &loaded.digest,
            body: BoundOutput { report, driven },
        }),
        Format::Csv => bound_csv(&report),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(if a.require_reachable && !reachable {
        EXIT_UNREACHABLE
    } else {
        EXIT_OK
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "unreachable".into(), fmt_num)
}

fn bound_csv(report: &BoundReport) -> String {
    let mut out =
        String::from("pair,delta_a,alpha_used,orientation,tau_pair,floor22,tau_hat,status\n");
    for r in &report.pairs {
        let orientation = match r.orientation {
            Some(crate::bounds::Orientation::Direct) => "direct",
            Some(crate::bounds::Orientation::Conjugate) => "conjugate",
            None => "",
        };
        let status = match r.status {
            PairStatus::Bounded => "bounded",
            PairStatus::Unreachable => "unreachable",
        };
        out.push_str(&format!(
            "{}|{},{},{},{},{},{},{},{}\n",
            r.pair[0],
            r.pair[1],
            fmt_num(r.delta_a),
            r.alpha_used.map_or_else(String::new, fmt_num),
            orientation,
            opt(r.tau_pair),
            opt(r.floor22),
            opt(r.tau_hat),
            status
        ));
    }
    out
}

fn cmd_trace(a: TraceArgs) -> Result<i32, Failure> {
    if !(a.t_max > 0.0 && a.t_max.is_finite()) || a.n_samples < 2 {
        return Err(invalid(
            "--t-max must be positive and --n-samples at least 2",
        ));
    }
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let times = uniform_grid(a.t_max, a.n_samples);
    let traces: Vec<CorrelationTrace> = s
        .pairs()
        .iter()
        .map(|&p| trace(s, p, &times))
        .collect::<Result<_, _>>()
        .map_err(invalid)?;
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Json) {
        #[derive(Serialize)]
        struct Entry<'a> {
            pair: String,
            #[serde(flatten)]
            trace: &'a CorrelationTrace,
        }
        let entries: Vec<Entry> = traces
            .iter()
            .map(|t| Entry {
                pair: s.pair_label(t.pair),
                trace: t,
            })
            .collect();
        emit(
            out,
            &to_json(&Tagged {
                scenario_digest: &loaded.digest,
                body: serde_json::json!({ "traces": entries }),
            }),
        )?;
        return Ok(EXIT_OK);
    }
    if a.split {
        let base = out.ok_or_else(|| invalid("--split needs --out"))?;
        let stem = base
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trace".into());
        for t in &traces {
            let labels = s.input().labels();
            let path = base.with_file_name(format!(
                "{stem}_{}_{}.csv",
                labels[t.pair.x], labels[t.pair.y]
            ));
            emit(Some(&path), &trace_csv(t, None, true))?;
        }
        return Ok(EXIT_OK);
    }
    let long = a.long || traces.len() > 1;
    let mut text = String::new();
    for (k, t) in traces.iter().enumerate() {
        let label = s.pair_label(t.pair);
        text.push_str(&trace_csv(t, long.then_some(label.as_str()), k == 0));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SearchRow {
    pair: Option<String>,
    #[serde(flatten)]
    result: SearchResult,
}

fn cmd_search(a: SearchArgs) -> Result<i32, Failure> {
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let settings = a.search.settings();
    let results: Vec<SearchResult> = if a.full {
        vec![first_full_orthogonality(s, &settings).map_err(invalid)?]
    } else {
        s.pairs()
            .iter()
            .map(|&p| first_orthogonality(s, p, &settings))
            .collect::<Result<_, _>>()
            .map_err(invalid)?
    };
    let reachable = results.iter().any(|r| r.tau_hat.is_some());
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let rows: Vec<SearchRow> = results
                .iter()
                .map(|r| SearchRow {
                    pair: r.pair.map(|p| s.pair_label(p)),
                    result: *r,
                })
                .collect();
            to_json(&Tagged {
                scenario_digest: &loaded.digest,
                body: serde_json::json!({ "results": rows }),
            })
        }
        Format::Csv => {
            let mut out = String::from("pair,tau_hat,epsilon,horizon,t_lo,t_hi\n");
            for r in &results {
                let (lo, hi) = r.bracket.map_or((None, None), |(l, h)| (Some(l), Some(h)));
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.pair.map_or_else(|| "full".into(), |p| s.pair_label(p)),
                    opt(r.tau_hat),
                    fmt_num(r.epsilon),
                    fmt_num(r.horizon),
                    lo.map_or_else(String::new, fmt_num),
                    hi.map_or_else(String::new, fmt_num)
                ));
            }
            out
        }
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(if a.require_reachable && !reachable {
        EXIT_UNREACHABLE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct LabeledVerify {
    pair: String,
    tau_pair: Option<f64>,
    adjusted_bound: Option<f64>,
    tau_hat: Option<f64>,
    ok: bool,
}

fn cmd_verify(a: VerifyArgs) -> Result<i32, Failure> {
    let settings = a.search.settings();
    let Some(path) = a.scenario.as_deref() else {
        let stats = random_campaign(a.seed, a.n, settings.epsilon).map_err(invalid)?;
        return finish_campaign(
            &a.common,
            a.seed,
            settings.epsilon,
            &stats,
            a.require_reachable,
        );
    };
    let loaded = load(path)?;
    let s = &loaded.scenario;
    let rows: Vec<VerifyRow> = verify_with(s, &settings).map_err(invalid)?;
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => verify_csv(s, &rows),
        Format::Json => {
            let labeled: Vec<LabeledVerify> = rows
                .iter()
                .map(|r| LabeledVerify {
                    pair: s.pair_label(r.pair),
                    tau_pair: r.tau_pair,
                    adjusted_bound: r.adjusted_bound,
                    tau_hat: r.tau_hat,
                    ok: r.ok,
                })
                .collect();
            to_json(&Tagged {
                scenario_digest: &loaded.digest,
                body: serde_json::json!({ "rows": labeled }),
            })
        }
    };
    emit(a.common.out.as_deref(), &text)?;
    if rows.iter().any(|r| !r.ok) {
        return Ok(EXIT_VIOLATION);
    }
    let reachable = rows.iter().any(|r| r.tau_hat.is_some());
    Ok(if a.require_reachable && !reachable {
        EXIT_UNREACHABLE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct CampaignOutput<'a> {
    seed: u64,
    epsilon: f64,
    #[serde(flatten)]
    stats: &'a CampaignStats,
}

fn finish_campaign(
    common: &Common,
    seed: u64,
    epsilon: f64,
    stats: &CampaignStats,
    require_reachable: bool,
) -> Result<i32, Failure> {
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&CampaignOutput { seed, epsilon, stats }),
        Format::Csv => format!(
            "seed,epsilon,scenarios,checked,reachable,unreachable,violations,min_margin\n{seed},{},{},{},{},{},{},{}\n",
            fmt_num(epsilon),
            stats.scenarios,
            stats.checked,
            stats.reachable,
            stats.unreachable,
            stats.violations,
            stats.min_margin.map_or_else(String::new, fmt_num)
        ),
    };
    emit(common.out.as_deref(), &text)?;
    if stats.violations > 0 {
        return Ok(EXIT_VIOLATION);
    }
    Ok(if require_reachable && stats.reachable == 0 {
        EXIT_UNREACHABLE
    } else {
        EXIT_OK
    })
}

fn cmd_sweep(a: SweepArgs) -> Result<i32, Failure> {
    let loaded = load(&a.scenario)?;
    let spec = SweepSpec {
        base: loaded.scenario.clone(),
        axis: a.axis,
        values: a.values,
        search: a.search.settings(),
    };
    let rows: Vec<SweepRow> = run_sweep(&spec).map_err(invalid)?;
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&Tagged {
            scenario_digest: &loaded.digest,
            body: serde_json::json!({ "axis": a.axis.name(), "rows": rows }),
        }),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_campaign(a: CampaignArgs) -> Result<i32, Failure> {
    if a.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let stats = random_campaign(a.seed, a.n, a.epsilon).map_err(invalid)?;
    finish_campaign(&a.common, a.seed, a.epsilon, &stats, false)
}

#[derive(Serialize)]
struct SnapshotsOutput<'a> {
    snapshots: &'a [SchmidtSnapshot],
    persistence: PersistenceReport,
}

fn cmd_schmidt(a: SchmidtArgs) -> Result<i32, Failure> {
    if !(a.t_max > 0.0 && a.t_max.is_finite()) || a.n_samples < 2 {
        return Err(invalid(
            "--t-max must be positive and --n-samples at least 2",
        ));
    }
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let snapshots = schmidt_trace(s, &uniform_grid(a.t_max, a.n_samples)).map_err(invalid)?;
    let persistence = classify_on_labels(&snapshots);
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => snapshot_csv(&snapshots),
        Format::Json => to_json(&Tagged {
            scenario_digest: &loaded.digest,
            body: SnapshotsOutput {
                snapshots: &snapshots,
                persistence,
            },
        }),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_demo(a: DemoArgs) -> Result<i32, Failure> {
    if !a.k_max.is_finite() || a.n_samples < 2 {
        return Err(invalid("--k-max must be finite and --n-samples at least 2"));
    }
    let demo = heisenberg_demo(&uniform_grid(a.k_max, a.n_samples), a.initial);
    debug_assert_eq!(demo.persistence, classify_trajectory(&demo.snapshots));
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => snapshot_csv(&demo.snapshots),
        Format::Json => to_json(&demo),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}
