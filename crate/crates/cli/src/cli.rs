//! Command-line entry points.
//!
//! Exit codes: 0 success, 1 when some inputs failed (a partial report is still
//! written), 2 for usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use topocheck_core::audit::PhaseSet;
use topocheck_core::{
    remove_small_components, BinaryMask, Connectivity, ConnectivityCounts, ConnectivityPair,
    ImageSusceptibility, LogBase, Phase, RemovalMode, RemovalReport, Scope, TieMethod,
};

use crate::error::Error;
use crate::manifest::{item_name, list_masks, DatasetManifest};
use crate::metric::{evaluate_pair, EvalOptions, MetricKey};
use crate::report::{
    finish_csv, to_json, write_report, write_text, FileError, Header, MetricReport, ReportFormat,
};
use crate::scores::{auto_pairs, compare, RankReport, ScoreTable};
use crate::{io, WORKERS_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "topocheck",
    version,
    about = "Topology-aware segmentation evaluation with explicit connectivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare predictions with ground truth masks.
    Eval(EvalArgs),
    /// Count components under both settings and the effect of small-component removal.
    Audit(AuditArgs),
    /// Per-image change of metrics between the D and A settings.
    Susceptibility(SusceptibilityArgs),
    /// Rank agreement of method scores between two tables.
    Rankcmp(RankcmpArgs),
    /// Remove small components from every mask of a directory.
    Clean(CleanArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConnArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
}

impl From<ConnArg> for Connectivity {
    fn from(c: ConnArg) -> Self {
        match c {
            ConnArg::A => Connectivity::A,
            ConnArg::D => Connectivity::D,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::E => LogBase::E,
            BaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ScopeArg {
    Full,
    Fg,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Simultaneous,
    Sequential,
}

impl From<ModeArg> for RemovalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Simultaneous => RemovalMode::Simultaneous,
            ModeArg::Sequential => RemovalMode::Sequential,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PhaseArg {
    Fg,
    Bg,
    Both,
}

impl From<PhaseArg> for PhaseSet {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Fg => PhaseSet::FG,
            PhaseArg::Bg => PhaseSet::BG,
            PhaseArg::Both => PhaseSet::BOTH,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum TiesArg {
    Average,
    Ordinal,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Directory of predicted masks, paired with --gt by file name.
    #[arg(long, requires = "gt", conflicts_with = "data")]
    pred: Option<PathBuf>,
    /// Directory of ground truth masks.
    #[arg(long, requires = "pred")]
    gt: Option<PathBuf>,
    /// Manifest listing labels and predictions.
    #[arg(long, required_unless_present = "pred")]
    data: Option<PathBuf>,
    /// Connectivity setting; there is no default.
    #[arg(long, value_enum)]
    connectivity: ConnArg,
    /// Comma separated metrics, e.g. dice,b0,b1,bm0,bm1,voi,are.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long, value_enum, default_value = "e")]
    voi_base: BaseArg,
    /// Pixels entering VOI and the Rand scores.
    #[arg(long, value_enum, default_value = "full")]
    scope: ScopeArg,
    /// Values above this are foreground.
    #[arg(long, default_value_t = 0)]
    threshold: u8,
    /// Report path (.json or .csv); CSV goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Manifest file or directory of label masks.
    #[arg(long)]
    data: PathBuf,
    /// Removal sizes; components with at most this many pixels are flipped.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5")]
    removal_sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "simultaneous")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "both")]
    phase: PhaseArg,
    /// Setting for the removal table; defaults to the manifest's.
    #[arg(long, value_enum)]
    connectivity: Option<ConnArg>,
    /// Directory receiving connectivity_counts.csv, removal_effect.csv and audit.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SusceptibilityArgs {
    /// Manifest file or directory of label masks.
    #[arg(long)]
    data: PathBuf,
    /// Any of b0,b1,voi,are.
    #[arg(long, default_value = "b0,b1,voi,are")]
    metrics: String,
    #[arg(long, value_enum, default_value = "e")]
    voi_base: BaseArg,
    /// Report path (.json or .csv); CSV goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RankcmpArgs {
    /// Score table of the first setting (or corrected labels).
    #[arg(long)]
    scores_a: PathBuf,
    /// Score table of the second setting (or original labels).
    #[arg(long)]
    scores_b: PathBuf,
    /// Explicit column pairs `X:Y`; by default columns with equal metric names are paired.
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    /// Rank assignment for tied scores in Spearman's rho.
    #[arg(long, value_enum, default_value = "average")]
    ties: TiesArg,
    /// Report path (.json or .csv); CSV goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CleanArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Components with at most this many pixels are flipped.
    #[arg(long)]
    min_size: usize,
    #[arg(long, value_enum, default_value = "both")]
    phase: PhaseArg,
    #[arg(long, value_enum)]
    connectivity: ConnArg,
    #[arg(long, value_enum, default_value = "simultaneous")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    threshold: u8,
}

enum Failure {
    Usage(String),
    Fatal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Fatal(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Whether any input failed.
type Outcome = Result<bool, Failure>;

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = worker_pool().and_then(|pool| {
        pool.install(|| match cli.command {
            Command::Eval(a) => eval(a),
            Command::Audit(a) => audit(a),
            Command::Susceptibility(a) => susceptibility(a),
            Command::Rankcmp(a) => rankcmp(a),
            Command::Clean(a) => clean(a),
        })
    });
    match result {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Fatal(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn worker_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(usage(format!(
                    "{WORKERS_ENV} must be a positive integer, got {v:?}"
                )))
            }
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))
}

fn report_errors(errors: &[FileError]) {
    for e in errors {
        eprintln!("warning: {}: {}", e.name, e.message);
    }
}

fn emit(
    out: Option<&Path>,
    json: impl FnOnce() -> crate::Result<String>,
    csv: impl FnOnce() -> crate::Result<String>,
) -> Result<(), Failure> {
    match out {
        None => {
            let text = csv()?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Fatal(Error::io("<stdout>", e)))
        }
        Some(path) => {
            let text = match ReportFormat::from_path(path) {
                Some(ReportFormat::Json) => json()?,
                Some(ReportFormat::Csv) => csv()?,
                None => {
                    return Err(usage(format!(
                        "{}: --out must end in .json or .csv",
                        path.display()
                    )))
                }
            };
            Ok(write_text(path, &text)?)
        }
    }
}

fn check_out_extension(out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) if ReportFormat::from_path(p).is_none() => Err(usage(format!(
            "{}: --out must end in .json or .csv",
            p.display()
        ))),
        _ => Ok(()),
    }
}

fn open_dataset(path: &Path) -> Result<DatasetManifest, Failure> {
    if !path.exists() {
        return Err(usage(format!("{} does not exist", path.display())));
    }
    DatasetManifest::open(path).map_err(|e| usage(e.to_string()))
}

struct Pair {
    name: String,
    pred: Option<PathBuf>,
    gt: Option<PathBuf>,
}

fn pairs_from_dirs(pred: &Path, gt: &Path) -> Result<Vec<Pair>, Failure> {
    for d in [pred, gt] {
        if !d.is_dir() {
            return Err(usage(format!("{} is not a directory", d.display())));
        }
    }
    let gts = list_masks(gt)?;
    let preds = list_masks(pred)?;
    let mut pairs: Vec<Pair> = gts
        .iter()
        .map(|g| {
            let p = pred.join(g.file_name().expect("listed files have names"));
            Pair {
                name: item_name(g),
                pred: p.is_file().then_some(p),
                gt: Some(g.clone()),
            }
        })
        .collect();
    for p in preds {
        if !gt
            .join(p.file_name().expect("listed files have names"))
            .is_file()
        {
            pairs.push(Pair {
                name: item_name(&p),
                pred: Some(p),
                gt: None,
            });
        }
    }
    if pairs.is_empty() {
        return Err(usage("no mask files found in --pred or --gt"));
    }
    Ok(pairs)
}

fn eval(args: EvalArgs) -> Outcome {
    check_out_extension(args.out.as_deref())?;
    let conn: Connectivity = args.connectivity.into();
    let (dataset_name, pairs, threshold, declared) = match (&args.pred, &args.gt, &args.data) {
        (Some(p), Some(g), None) => (item_name(g), pairs_from_dirs(p, g)?, args.threshold, None),
        (None, None, Some(d)) => {
            let m = open_dataset(d)?;
            let preds = m
                .predictions
                .clone()
                .ok_or_else(|| usage(format!("{} lists no predictions", d.display())))?;
            let pairs = m
                .labels
                .iter()
                .zip(preds)
                .map(|(g, p)| Pair {
                    name: item_name(g),
                    pred: Some(p),
                    gt: Some(g.clone()),
                })
                .collect();
            (m.name.clone(), pairs, m.binarize_threshold, m.connectivity)
        }
        _ => return Err(usage("give either --pred and --gt, or --data")),
    };
    if let Some(d) = declared.filter(|&d| d != conn) {
        eprintln!("warning: the dataset declares connectivity {d}, evaluating with {conn}");
    }

    let metrics = match &args.metrics {
        Some(list) => MetricKey::parse_list(list, conn).map_err(|e| usage(e.to_string()))?,
        None => {
            let ndim = pairs
                .iter()
                .filter_map(|p| p.gt.as_deref())
                .find_map(|g| io::load_mask(g, threshold).ok())
                .map_or(2, |m| m.ndim());
            MetricKey::defaults(ndim, conn)
        }
    };
    let opts = EvalOptions {
        connectivity: conn,
        voi_base: args.voi_base.into(),
        scope: match args.scope {
            ScopeArg::Full => Scope::Full,
            ScopeArg::Fg => Scope::FgOnly,
        },
    };

    let results: Vec<crate::Result<Vec<Option<f64>>>> = pairs
        .par_iter()
        .map(|pair| {
            let missing = |what: &str| Error::Metric(format!("no {what} mask with this name"));
            let gt_path = pair.gt.as_deref().ok_or_else(|| missing("ground truth"))?;
            let pred_path = pair.pred.as_deref().ok_or_else(|| missing("predicted"))?;
            let gt = io::load_mask(gt_path, threshold)?;
            let pred = io::load_mask(pred_path, threshold)?;
            evaluate_pair(&pred, &gt, &metrics, opts)
        })
        .collect();

    let header = Header::new("eval")
        .with("connectivity", conn.to_string())
        .with("voi_base", base_name(opts.voi_base))
        .with("scope", scope_name(opts.scope))
        .with("binarize_threshold", threshold);
    let names = metrics.iter().map(|m| m.to_string()).collect();
    let mut report = MetricReport::new(header, &dataset_name, names)?;
    for (pair, res) in pairs.iter().zip(results) {
        match res {
            Ok(v) => report.push_image(pair.name.clone(), v),
            Err(e) => report.push_error(pair.name.clone(), e.to_string()),
        }
    }
    report.finish();
    finish_metric_report(&report, args.out.as_deref())
}

fn finish_metric_report(report: &MetricReport, out: Option<&Path>) -> Outcome {
    report_errors(&report.errors);
    match out {
        Some(path) => write_report(
            report,
            path,
            ReportFormat::from_path(path).expect("checked"),
        )?,
        None => emit(None, || to_json(report), || report.to_csv())?,
    }
    Ok(!report.errors.is_empty())
}

fn base_name(b: LogBase) -> &'static str {
    match b {
        LogBase::E => "e",
        LogBase::Two => "2",
    }
}

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::Full => "full",
        Scope::FgOnly => "fg",
    }
}

fn phases_name(p: PhaseSet) -> &'static str {
    match (p.foreground, p.background) {
        (true, true) => "both",
        (true, false) => "fg",
        _ => "bg",
    }
}

fn mode_name(m: RemovalMode) -> &'static str {
    match m {
        RemovalMode::Simultaneous => "simultaneous",
        RemovalMode::Sequential => "sequential",
    }
}

#[derive(Serialize)]
struct PhaseCounts {
    #[serde(rename = "FG")]
    fg: usize,
    #[serde(rename = "BG")]
    bg: usize,
}

#[derive(Serialize)]
struct PhaseRatio {
    #[serde(rename = "FG")]
    fg: f64,
    #[serde(rename = "BG")]
    bg: f64,
}

#[derive(Serialize)]
struct CountsTable {
    #[serde(rename = "A")]
    a: PhaseCounts,
    #[serde(rename = "D")]
    d: PhaseCounts,
    ratio_percent: PhaseRatio,
}

#[derive(Serialize)]
struct RemovalRowOut {
    /// `null` for the untouched labels.
    max_size: Option<usize>,
    #[serde(rename = "FG")]
    fg: usize,
    #[serde(rename = "BG")]
    bg: usize,
}

#[derive(Serialize)]
struct RemovalTable {
    connectivity: String,
    rows: Vec<RemovalRowOut>,
    ratio_percent: PhaseRatio,
}

#[derive(Serialize)]
struct AuditImage {
    name: String,
    #[serde(rename = "A")]
    a: PhaseCounts,
    #[serde(rename = "D")]
    d: PhaseCounts,
    removal: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct AuditReport {
    #[serde(flatten)]
    header: Header,
    dataset: String,
    image_count: usize,
    connectivity_counts: CountsTable,
    removal: RemovalTable,
    images: Vec<AuditImage>,
    errors: Vec<FileError>,
}

fn counts_csv(c: &ConnectivityCounts) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["setting", "FG", "BG"])?;
    for setting in Connectivity::BOTH {
        let (fg, bg) = c.get(setting);
        w.write_record([setting.to_string(), fg.to_string(), bg.to_string()])?;
    }
    w.write_record([
        "ratio_percent".to_string(),
        format!("{:.1}", c.ratio(Phase::Foreground)),
        format!("{:.1}", c.ratio(Phase::Background)),
    ])?;
    finish_csv(w)
}

fn removal_csv(r: &RemovalReport) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["removal", "FG", "BG"])?;
    for row in &r.rows {
        let label = row.threshold.map_or("none".to_string(), |t| t.to_string());
        w.write_record([
            label,
            row.foreground.to_string(),
            row.background.to_string(),
        ])?;
    }
    w.write_record([
        "ratio_percent".to_string(),
        format!("{:.1}", r.ratio(Phase::Foreground)),
        format!("{:.1}", r.ratio(Phase::Background)),
    ])?;
    finish_csv(w)
}

type AuditCounts = (ConnectivityCounts, Vec<(usize, usize)>);

fn audit(args: AuditArgs) -> Outcome {
    let data = open_dataset(&args.data)?;
    let conn: Connectivity = match (args.connectivity, data.connectivity) {
        (Some(c), _) => c.into(),
        (None, Some(c)) => c,
        (None, None) => return Err(usage("a directory input needs --connectivity")),
    };
    let phases: PhaseSet = args.phase.into();
    let mode: RemovalMode = args.mode.into();
    let mut removal = RemovalReport::new(conn.into(), &args.removal_sizes, phases, mode)
        .map_err(|e| usage(format!("--removal-sizes: {e}")))?;

    let results: Vec<crate::Result<AuditCounts>> = data
        .labels
        .par_iter()
        .map(|path| {
            let mask = data.load(path)?;
            Ok((
                ConnectivityCounts::of_mask(&mask),
                removal.counts_for(&mask),
            ))
        })
        .collect();

    let mut totals = ConnectivityCounts::default();
    let mut images = Vec::new();
    let mut errors = Vec::new();
    for (path, res) in data.labels.iter().zip(results) {
        match res {
            Ok((counts, rows)) => {
                totals.accumulate(&counts);
                removal.accumulate(&rows);
                images.push(AuditImage {
                    name: item_name(path),
                    a: PhaseCounts {
                        fg: counts.a.0,
                        bg: counts.a.1,
                    },
                    d: PhaseCounts {
                        fg: counts.d.0,
                        bg: counts.d.1,
                    },
                    removal: rows.iter().map(|&(f, b)| [f, b]).collect(),
                });
            }
            Err(e) => errors.push(FileError {
                name: item_name(path),
                message: e.to_string(),
            }),
        }
    }
    report_errors(&errors);

    let removal_text = removal_csv(&removal)?;
    print!("{removal_text}");
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_text(&dir.join("connectivity_counts.csv"), &counts_csv(&totals)?)?;
        write_text(&dir.join("removal_effect.csv"), &removal_text)?;
        let header = Header::new("audit")
            .with("connectivity", conn.to_string())
            .with("removal_sizes", args.removal_sizes.clone())
            .with("removal_mode", mode_name(mode))
            .with("removal_phases", phases_name(phases))
            .with("binarize_threshold", data.binarize_threshold);
        let report = AuditReport {
            header,
            dataset: data.name.clone(),
            image_count: images.len(),
            connectivity_counts: CountsTable {
                a: PhaseCounts {
                    fg: totals.a.0,
                    bg: totals.a.1,
                },
                d: PhaseCounts {
                    fg: totals.d.0,
                    bg: totals.d.1,
                },
                ratio_percent: PhaseRatio {
                    fg: totals.ratio(Phase::Foreground),
                    bg: totals.ratio(Phase::Background),
                },
            },
            removal: RemovalTable {
                connectivity: conn.to_string(),
                rows: removal
                    .rows
                    .iter()
                    .map(|r| RemovalRowOut {
                        max_size: r.threshold,
                        fg: r.foreground,
                        bg: r.background,
                    })
                    .collect(),
                ratio_percent: PhaseRatio {
                    fg: removal.ratio(Phase::Foreground),
                    bg: removal.ratio(Phase::Background),
                },
            },
            images,
            errors: errors.clone(),
        };
        write_text(&dir.join("audit.json"), &to_json(&report)?)?;
    }
    Ok(!errors.is_empty())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SuscMetric {
    B0,
    B1,
    Voi,
    Are,
}

impl SuscMetric {
    fn parse(token: &str) -> Result<Self, Failure> {
        match token.trim().to_ascii_lowercase().as_str() {
            "b0" => Ok(SuscMetric::B0),
            "b1" => Ok(SuscMetric::B1),
            "voi" => Ok(SuscMetric::Voi),
            "are" => Ok(SuscMetric::Are),
            t if t.contains('+') || t == "b" => Err(usage(format!(
                "{token:?}: susceptibility is reported per Betti dimension; use b0,b1"
            ))),
            _ => Err(usage(format!(
                "unknown susceptibility metric {token:?}; known: b0,b1,voi,are"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SuscMetric::B0 => "B0_D_vs_A",
            SuscMetric::B1 => "B1_D_vs_A",
            SuscMetric::Voi => "VOI_D_vs_A",
            SuscMetric::Are => "ARE_D_vs_A",
        }
    }

    fn value(self, s: &ImageSusceptibility) -> Option<f64> {
        match self {
            SuscMetric::B0 => Some(s.beta0),
            SuscMetric::B1 => Some(s.beta1),
            SuscMetric::Voi => Some(s.voi),
            SuscMetric::Are => s.are,
        }
    }
}

fn susceptibility(args: SusceptibilityArgs) -> Outcome {
    check_out_extension(args.out.as_deref())?;
    let mut metrics: Vec<SuscMetric> = Vec::new();
    for t in args.metrics.split(',').filter(|t| !t.trim().is_empty()) {
        let m = SuscMetric::parse(t)?;
        if metrics.contains(&m) {
            return Err(usage(format!("metric {t:?} requested twice")));
        }
        metrics.push(m);
    }
    if metrics.is_empty() {
        return Err(usage("empty metric list"));
    }
    let data = open_dataset(&args.data)?;
    let base: LogBase = args.voi_base.into();

    let results: Vec<crate::Result<ImageSusceptibility>> = data
        .labels
        .par_iter()
        .map(|path| {
            let mask = data.load(path)?;
            Ok(ImageSusceptibility::compute(item_name(path), &mask, base))
        })
        .collect();

    let header = Header::new("susceptibility")
        .with("voi_base", base_name(base))
        .with("binarize_threshold", data.binarize_threshold);
    let names = metrics.iter().map(|m| m.name().to_string()).collect();
    let mut report = MetricReport::new(header, &data.name, names)?;
    for (path, res) in data.labels.iter().zip(results) {
        match res {
            Ok(s) => report.push_image(
                s.name.clone(),
                metrics.iter().map(|m| m.value(&s)).collect(),
            ),
            Err(e) => report.push_error(item_name(path), e.to_string()),
        }
    }
    report.finish();
    finish_metric_report(&report, args.out.as_deref())
}

fn rankcmp(args: RankcmpArgs) -> Outcome {
    check_out_extension(args.out.as_deref())?;
    let read = |p: &Path| {
        if !p.is_file() {
            return Err(usage(format!("{} does not exist", p.display())));
        }
        ScoreTable::read(p).map_err(|e| usage(e.to_string()))
    };
    let a = read(&args.scores_a)?;
    let b = read(&args.scores_b)?;
    let pairs: Vec<(String, String)> = if args.pairs.is_empty() {
        auto_pairs(&a, &b)
    } else {
        args.pairs
            .iter()
            .map(|p| {
                p.split_once(':')
                    .map(|(x, y)| (x.trim().to_string(), y.trim().to_string()))
                    .ok_or_else(|| usage(format!("--pairs entry {p:?} is not of the form X:Y")))
            })
            .collect::<Result<_, _>>()?
    };
    if pairs.is_empty() {
        return Err(usage("the two tables share no metric columns; use --pairs"));
    }
    let ties = match args.ties {
        TiesArg::Average => TieMethod::Average,
        TiesArg::Ordinal => TieMethod::Ordinal,
    };
    let comparisons = compare(&a, &b, &pairs, ties).map_err(|e| usage(e.to_string()))?;
    let header = Header::new("rankcmp").with(
        "ties",
        match ties {
            TieMethod::Average => "average",
            TieMethod::Ordinal => "ordinal",
        },
    );
    let report = RankReport {
        header,
        methods: a.methods.clone(),
        pairs: comparisons,
    };
    emit(args.out.as_deref(), || to_json(&report), || report.to_csv())?;
    Ok(false)
}

fn clean(args: CleanArgs) -> Outcome {
    if !args.input.is_dir() {
        return Err(usage(format!(
            "{} is not a directory",
            args.input.display()
        )));
    }
    if args.min_size == 0 {
        return Err(usage("--min-size must be at least 1"));
    }
    let same = match (fs::canonicalize(&args.input), fs::canonicalize(&args.out)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    if same {
        return Err(usage("--out must differ from --in"));
    }
    let inputs = list_masks(&args.input)?;
    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let conn = ConnectivityPair::from(Connectivity::from(args.connectivity));
    let phases: PhaseSet = args.phase.into();
    let mode: RemovalMode = args.mode.into();

    let results: Vec<crate::Result<(String, usize)>> = inputs
        .par_iter()
        .map(|path| {
            let mask = io::load_mask(path, args.threshold)?;
            let cleaned = remove_small_components(&mask, conn, args.min_size, phases, mode)?;
            let mut target = args
                .out
                .join(path.file_name().expect("listed files have names"));
            if io::MaskFormat::from_path(&target) == Some(io::MaskFormat::Gif) {
                target.set_extension("png");
            }
            io::save_mask(&cleaned, &target)?;
            Ok((item_name(&target), flipped(&mask, &cleaned)))
        })
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["image", "flipped_pixels"])
        .map_err(Error::from)?;
    let mut errors = Vec::new();
    for (path, res) in inputs.iter().zip(results) {
        match res {
            Ok((name, n)) => w.write_record([name, n.to_string()]).map_err(Error::from)?,
            Err(e) => errors.push(FileError {
                name: item_name(path),
                message: e.to_string(),
            }),
        }
    }
    print!("{}", finish_csv(w)?);
    report_errors(&errors);
    Ok(!errors.is_empty())
}

fn flipped(a: &BinaryMask, b: &BinaryMask) -> usize {
    a.data()
        .iter()
        .zip(b.data())
        .filter(|(x, y)| x != y)
        .count()
}
