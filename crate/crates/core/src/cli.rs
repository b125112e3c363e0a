//! The `arr2kirby` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arrangement::{normalize, Arrangement, ChamberTable, Point};
use crate::corpus::{builtin_corpus, check_calibration, check_entry, Corpus};
use crate::diagram::{project_link, simplify_diagram, Diagram};
use crate::divide::DivideWithCusps;
use crate::invariants::invariant_report;
use crate::lift::{fs_circle, geometrize_and_lift, lift_with_pushoffs, on_square_sphere, project_round, PLLink, PLLoop};
use crate::pipeline::{kirby_divide, prepare, PipelineConfig};
use crate::rational::{parse_rat, Rat};
use crate::render::{render_diagram_svg, render_divide_svg, RenderStyle};

#[derive(Debug, Parser)]
#[command(name = "arr2kirby", version, about = "Kirby diagrams of line arrangement complements")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Sampling of lifted loops: pieces per half turn.
    #[arg(long, global = true, default_value_t = 64)]
    pub resolution: usize,
    /// Projection pole index (0..34).
    #[arg(long, global = true)]
    pub pole: Option<usize>,
    /// First projection direction index.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed_direction: usize,
    /// Machine-readable output where a command has a text form.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize an arrangement.
    Normalize { input: PathBuf, #[arg(short)] o: Option<PathBuf> },
    /// Count chambers and fiber chambers.
    Chambers { input: PathBuf },
    /// Divide with cusps for an arrangement.
    Kirby {
        input: PathBuf,
        #[arg(long, conflicts_with = "reduced")]
        full: bool,
        #[arg(long)]
        reduced: bool,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Lift a divide to a link in the 3-sphere.
    Lift { input: PathBuf, #[arg(short)] o: Option<PathBuf> },
    /// Project a link to a diagram.
    Diagram {
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
        /// Write PD code instead of JSON.
        #[arg(long)]
        pd: bool,
    },
    /// Invariant report of a diagram.
    Invariants {
        input: PathBuf,
        #[arg(short, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        p: Vec<u64>,
        #[arg(long, default_value_t = crate::invariants::DEFAULT_BRACKET_CAP)]
        bracket_cap: usize,
    },
    /// SVG of a divide, a link or a diagram.
    Render { input: PathBuf, #[arg(short)] o: Option<PathBuf> },
    /// A single four-edge attaching circle.
    Fsdemo {
        /// First endpoint, `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        /// Second endpoint, `x,y`, at the same height.
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(short = 'R', default_value = "5")]
        r: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Run the built-in corpus.
    Selftest {
        /// Corpus file to use instead of the built-in one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .or_else(|e| if e.kind() == std::io::ErrorKind::BrokenPipe { Ok(()) } else { Err(e) })
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn parse_point(s: &str) -> Result<Point, CliError> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected x,y but got {s:?}")))?;
    let p = |t: &str| parse_rat(t).map_err(|e| CliError::Usage(e.to_string()));
    Ok(Point::new(p(x)?, p(y)?))
}

fn config(g: &Global) -> PipelineConfig {
    let mut cfg = PipelineConfig {
        resolution: g.resolution,
        ..PipelineConfig::default()
    };
    cfg.projection.pole = g.pole;
    cfg.projection.direction = g.seed_direction;
    cfg
}

/// What a JSON input file holds, by its top-level keys.
enum Input {
    Divide(Box<DivideWithCusps>),
    Link(PLLink),
    Diagram(Diagram),
}

fn classify(text: &str) -> Result<Input, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(fail)?;
    if v.get("loops").is_some() {
        Ok(Input::Link(PLLink::from_json(text).map_err(fail)?))
    } else if v.get("passes").is_some() {
        Ok(Input::Diagram(Diagram::from_json(text).map_err(fail)?))
    } else if v.get("curves").is_some() {
        Ok(Input::Divide(Box::new(DivideWithCusps::from_json(text).map_err(fail)?)))
    } else {
        Err(fail("input is not a divide, link or diagram"))
    }
}

fn selftest(corpus: &Corpus, cfg: &PipelineConfig, json: bool) -> (String, bool) {
    let mut rows = Vec::new();
    let mut ok = true;
    let outcomes = check_calibration(&corpus.calibration, cfg)
        .into_iter()
        .chain(corpus.entries.iter().map(|e| check_entry(e, cfg)));
    let mut out = String::new();
    for o in outcomes {
        ok &= o.passed();
        if json {
            let checks: Vec<serde_json::Value> = o
                .checks
                .iter()
                .map(|c| serde_json::json!({ "check": c.name, "found": c.shown, "pass": c.pass }))
                .collect();
            rows.push(serde_json::json!({ "name": o.name, "pass": o.passed(), "checks": checks }));
        } else {
            out.push_str(&o.row());
            out.push('\n');
        }
    }
    if json {
        out = pretty(&serde_json::json!({ "pass": ok, "entries": rows }));
    } else {
        out.push_str(if ok { "selftest: PASS\n" } else { "selftest: FAIL\n" });
    }
    (out, ok)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config(&cli.global);
    let json = cli.global.json;
    match cli.command {
        Command::Normalize { input, o } => {
            let arr = Arrangement::from_json(&read(&input)?).map_err(fail)?;
            let norm = normalize(&arr).map_err(fail)?;
            emit(o.as_deref(), &pretty(&norm.to_json_value()))
        }
        Command::Chambers { input } => {
            let arr = Arrangement::from_json(&read(&input)?).map_err(fail)?;
            let norm = normalize(&arr).map_err(fail)?;
            let table = ChamberTable::build(&norm).map_err(fail)?;
            if json {
                emit(None, &pretty(&table.to_json_value()))
            } else {
                emit(None, &format!("chambers={}, ch_F={}", table.chambers.len(), table.fiber.len()))
            }
        }
        Command::Kirby { input, full: _, reduced, o } => {
            let arr = Arrangement::from_json(&read(&input)?).map_err(fail)?;
            let p = prepare(&arr).map_err(fail)?;
            let d = kirby_divide(&p, reduced).map_err(fail)?;
            emit(o.as_deref(), &pretty(&d.to_json_value()))
        }
        Command::Lift { input, o } => {
            let d = DivideWithCusps::from_json(&read(&input)?).map_err(fail)?;
            let link = if d.arrangement.is_some() {
                lift_with_pushoffs(&d, cfg.lift_options())
            } else {
                geometrize_and_lift(&d, cfg.lift_options())
            }
            .map_err(fail)?;
            emit(o.as_deref(), &link.to_json())
        }
        Command::Diagram { input, o, pd } => {
            let link = PLLink::from_json(&read(&input)?).map_err(fail)?;
            let dg = project_link(&link, &cfg.projection).map_err(fail)?;
            let text = if pd { dg.pd_text() } else { dg.to_json() };
            emit(o.as_deref(), &text)
        }
        Command::Invariants { input, p, bracket_cap } => {
            let dg = Diagram::from_json(&read(&input)?).map_err(fail)?;
            let cfg = PipelineConfig { primes: p, bracket_cap, ..cfg };
            let report = invariant_report(&dg, cfg.report_options()).map_err(fail)?;
            emit(None, &report.to_json())
        }
        Command::Render { input, o } => {
            let style = RenderStyle::default();
            let svg = match classify(&read(&input)?)? {
                Input::Divide(d) => render_divide_svg(&d, &style),
                Input::Diagram(dg) => render_diagram_svg(&dg, &style),
                Input::Link(link) => {
                    let dg = project_link(&link, &cfg.projection).map_err(fail)?;
                    render_diagram_svg(&dg, &style)
                }
            }
            .map_err(fail)?;
            emit(o.as_deref(), &svg)
        }
        Command::Fsdemo { a1, a2, r, o } => {
            let (a1, a2) = (parse_point(&a1)?, parse_point(&a2)?);
            let r: Rat = parse_rat(&r).map_err(|e| CliError::Usage(e.to_string()))?;
            if a1.y != a2.y || a1.x >= a2.x {
                return Err(CliError::Usage("need a1 left of a2 at the same height".into()));
            }
            let circle = fs_circle(&a1, &a2);
            if !on_square_sphere(&r, &circle) {
                return Err(CliError::Usage(format!("endpoints too close to the edge of the rectangle of half width {r}")));
            }
            let link = PLLink::new(vec![PLLoop {
                label: "attaching:1".into(),
                points: project_round(&circle, cfg.resolution),
            }]);
            let dg = simplify_diagram(&project_link(&link, &cfg.projection).map_err(fail)?);
            eprintln!("crossings after simplification: {}", dg.crossing_count());
            emit(o.as_deref(), &link.to_json())
        }
        Command::Selftest { corpus } => {
            let corpus = match corpus {
                Some(p) => Corpus::from_json(&read(&p)?).map_err(fail)?,
                None => builtin_corpus(),
            };
            let (text, ok) = selftest(&corpus, &cfg, json);
            emit(None, &text)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Failed("selftest failed".into()))
            }
        }
    }
}

/// Parses `args` and runs; returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("arr2kirby: {e}");
            e.exit_code()
        }
    }
}
