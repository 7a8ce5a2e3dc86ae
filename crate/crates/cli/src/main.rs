//! `mpm`: distances between persistence modules from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad input data, 3 computation
//! failure (for example the subdivision depth limit).

use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::json;

use mpm_core::cellular::{filtration_distance, homology_presentation, lift_presentations, FilteredComplex};
use mpm_core::grade::{format_rational, parse_rational};
use mpm_core::invariants::{hilbert_dim, label_grid};
use mpm_core::lines::{barcode_along_line, restrict_presentation, AdmissibleLine};
use mpm_core::matchdist::{approx_matching_distance_with, DistanceReport, MatchOptions};
use mpm_core::presdist::{bounds, label_distance, PairedPresentations};
use mpm_core::wasserstein::wasserstein;
use mpm_core::{gen, io, onepar, Barcode, Error, Grade, NormValue, PExponent, PrimeField, Presentation};

#[derive(Parser, Debug)]
#[command(name = "mpm", version, about = "Distances between finitely presented persistence modules")]
struct Cli {
    /// Significant digits for decimal output.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PArg {
    /// Exponent p >= 1, or `inf`.
    #[arg(long = "p", value_parser = parse_p)]
    p: PExponent,
}

#[derive(Args, Debug)]
struct Output {
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Print exact rationals where the value is rational.
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p-Wasserstein distance between two barcodes (`.bc`).
    Wasserstein {
        #[command(flatten)]
        p: PArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Barcode of a 1-parameter presentation, or of a 2-parameter one along a line.
    Barcode {
        /// Admissible line `v1,v2;w1,w2` (2-parameter input only).
        #[arg(long, value_parser = parse_line)]
        line: Option<AdmissibleLine>,
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Restriction of a 2-parameter presentation to a line, as a 1-parameter `.fpm`.
    Restrict {
        #[arg(long, value_parser = parse_line)]
        line: AdmissibleLine,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certified bounds on the p-matching distance.
    Matchdist {
        #[command(flatten)]
        p: PArg,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Maximal subdivision depth before giving up.
        #[arg(long, default_value_t = 24)]
        max_depth: usize,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Label distance between two presentations with the same matrix.
    Labeldist {
        #[command(flatten)]
        p: PArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Lower and upper bounds on the presentation distance.
    Bounds {
        #[command(flatten)]
        p: PArg,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Presentation of the degree-j homology of a filtered cell complex (`.cwf`).
    Homology {
        #[arg(long)]
        deg: usize,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Two filtrations of one complex whose first homology recovers the inputs.
    Lift {
        a: PathBuf,
        b: PathBuf,
        /// Destination of the first filtration.
        #[arg(long)]
        out_a: PathBuf,
        /// Destination of the second filtration.
        #[arg(long)]
        out_b: PathBuf,
    },
    /// Dimensions of the presented module, on the label grid or at given grades.
    Hilbert {
        input: PathBuf,
        /// Grade `x` or `x,y`; may be repeated.
        #[arg(long = "at")]
        at: Vec<String>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Comma-separated rows with a header line.
        #[arg(long)]
        csv: bool,
    },
    /// Random fixtures.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        params: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        /// Largest coordinate.
        #[arg(long, default_value_t = 6)]
        max: i64,
        /// Output files; pairs need two, single objects print to stdout when omitted.
        #[arg(short, long)]
        output: Vec<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    /// One presentation.
    Presentation,
    /// Two presentations sharing a matrix.
    Pair,
    /// One barcode with `rows` bars.
    Barcode,
    /// A simplicial complex with a filtration and a perturbed copy.
    Complex,
}

fn parse_p(s: &str) -> Result<PExponent, String> {
    PExponent::parse(s).map_err(|e| e.to_string())
}

fn parse_line(s: &str) -> Result<AdmissibleLine, String> {
    AdmissibleLine::parse(s).map_err(|e| e.to_string())
}

/// A problem with how the command was invoked, detected after parsing.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    io::parse_presentation(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_barcode(path: &Path) -> anyhow::Result<Barcode> {
    io::parse_barcode(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_complex(path: &Path) -> anyhow::Result<FilteredComplex> {
    io::parse_complex(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(sink: &mut String, path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            sink.push_str(text);
            Ok(())
        }
    }
}

/// Decimal with `digits` significant digits, without exponent notation.
fn decimal(x: f64, digits: u8) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits as usize - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mantissa.starts_with('-');
    let ds: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), ds)
    } else if point as usize >= ds.len() {
        format!("{}{}", ds, "0".repeat(point as usize - ds.len()))
    } else {
        format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact rendering of a norm value: a rational, or `(S)^(1/p)` with `S` the
/// exact p-th power sum.
fn exact_text(v: &NormValue) -> Option<String> {
    match v {
        NormValue::Infinite => Some("inf".into()),
        _ => match (v.exact(), v) {
            (Some(r), _) => Some(format_rational(&r)),
            (None, NormValue::PowerSum { p, sum }) => Some(format!("({})^(1/{p})", format_rational(sum))),
            _ => None,
        },
    }
}

fn value_text(v: &NormValue, out: &Output, digits: u8) -> String {
    if out.exact {
        if let Some(s) = exact_text(v) {
            return s;
        }
    }
    decimal(v.to_f64(), digits)
}

fn json_number(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!("inf")
    }
}

fn report_text(r: &DistanceReport, digits: u8) -> String {
    format!(
        "lower {}\nupper {}\nlines {}\n",
        decimal(r.lower, digits),
        decimal(r.upper, digits),
        r.lines_evaluated
    )
}

fn parse_grade(s: &str, n: usize) -> anyhow::Result<Grade> {
    let coords = s
        .split(',')
        .map(|c| parse_rational(c).ok_or_else(|| usage(format!("bad coordinate {c:?} in {s:?}"))))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if coords.len() != n {
        return Err(usage(format!("grade {s:?} needs {n} coordinates")));
    }
    Ok(Grade::new(coords))
}

fn run(cli: Cli, sink: &mut String) -> anyhow::Result<()> {
    let digits = cli.digits;
    match cli.command {
        Command::Wasserstein { p, a, b, out } => {
            let (ba, bb) = (read_barcode(&a)?, read_barcode(&b)?);
            let r = wasserstein(&ba, &bb, &p.p);
            if out.json {
                let v = json!({
                    "p": p.p,
                    "value": json_number(r.value.to_f64()),
                    "exact": exact_text(&r.value),
                    "matching": r.matching.pairs,
                });
                writeln!(sink, "{v}")?;
            } else {
                writeln!(sink, "{}", value_text(&r.value, &out, digits))?;
            }
        }
        Command::Barcode { line, input, json } => {
            let m = read_presentation(&input)?;
            let bc = match (m.n_params(), line) {
                (1, None) => onepar::barcode_of(&m)?,
                (1, Some(_)) => return Err(usage("--line applies to 2-parameter input only")),
                (2, Some(l)) => barcode_along_line(&m, &l)?,
                (2, None) => return Err(usage("2-parameter input needs --line")),
                (n, _) => return Err(Error::ParamCount { expected: 2, found: n }.into()),
            };
            if json {
                let bars: Vec<_> = bc
                    .bars()
                    .iter()
                    .map(|b| {
                        let death = b.death.finite().map(format_rational);
                        json!([format_rational(&b.birth), death])
                    })
                    .collect();
                writeln!(sink, "{}", json!(bars))?;
            } else {
                write!(sink, "{}", io::write_barcode(&bc))?;
            }
        }
        Command::Restrict { line, input, output } => {
            let m = read_presentation(&input)?;
            let r = restrict_presentation(&m, &line)?;
            emit(sink, output.as_deref(), &io::write_presentation(&r))?;
        }
        Command::Matchdist { p, eps, max_depth, a, b, json } => {
            if !(eps > 0.0) {
                return Err(usage("--eps must be positive"));
            }
            let (ma, mb) = (read_presentation(&a)?, read_presentation(&b)?);
            let opts = MatchOptions { max_depth, ..MatchOptions::default() };
            match approx_matching_distance_with(&ma, &mb, &p.p, eps, &opts) {
                Ok(r) => {
                    if json {
                        writeln!(sink, "{}", serde_json::to_string(&r)?)?;
                    } else {
                        write!(sink, "{}", report_text(&r, digits))?;
                    }
                }
                Err(Error::MaxDepth(r)) => {
                    if json {
                        writeln!(sink, "{}", serde_json::to_string(&*r)?)?;
                    } else {
                        write!(sink, "{}", report_text(&r, digits))?;
                    }
                    return Err(Error::MaxDepth(r).into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Labeldist { p, a, b, out } => {
            let pp = PairedPresentations::new(read_presentation(&a)?, read_presentation(&b)?)?;
            let d = label_distance(&pp, &p.p);
            if out.json {
                writeln!(sink, "{}", json!({ "p": p.p, "value": json_number(d.to_f64()), "exact": exact_text(&d) }))?;
            } else {
                writeln!(sink, "{}", value_text(&d, &out, digits))?;
            }
        }
        Command::Bounds { p, eps, a, b, json } => {
            if !(eps > 0.0) {
                return Err(usage("--eps must be positive"));
            }
            let r = bounds(&read_presentation(&a)?, &read_presentation(&b)?, &p.p, eps)?;
            if json {
                writeln!(sink, "{}", serde_json::to_string(&r)?)?;
            } else {
                let method = r.upper_method.map_or("none".to_string(), |m| m.to_string());
                writeln!(sink, "lower {}", decimal(r.lower, digits))?;
                writeln!(sink, "upper {} ({method})", decimal(r.upper, digits))?;
            }
        }
        Command::Homology { deg, input, output } => {
            let x = read_complex(&input)?;
            emit(sink, output.as_deref(), &io::write_presentation(&homology_presentation(&x, deg)))?;
        }
        Command::Lift { a, b, out_a, out_b } => {
            let lift = lift_presentations(&read_presentation(&a)?, &read_presentation(&b)?)?;
            emit(sink, Some(&out_a), &io::write_complex(&lift.f))?;
            emit(sink, Some(&out_b), &io::write_complex(&lift.g))?;
        }
        Command::Hilbert { input, at, json, csv } => {
            let m = read_presentation(&input)?;
            let points = if at.is_empty() {
                label_grid(&[&m])
            } else {
                at.iter().map(|s| parse_grade(s, m.n_params())).collect::<anyhow::Result<_>>()?
            };
            let rows: Vec<(Vec<String>, usize)> = points
                .iter()
                .map(|g| (g.coords().iter().map(format_rational).collect(), hilbert_dim(&m, g)))
                .collect();
            if json {
                let v: Vec<_> = rows.iter().map(|(c, d)| json!({ "grade": c, "dim": d })).collect();
                writeln!(sink, "{}", json!(v))?;
            } else if csv {
                let axes = ["x", "y"];
                writeln!(sink, "{},dim", axes[..m.n_params()].join(","))?;
                for (c, d) in rows {
                    writeln!(sink, "{},{d}", c.join(","))?;
                }
            } else {
                for (c, d) in rows {
                    writeln!(sink, "{} {d}", c.join(" "))?;
                }
            }
        }
        Command::Gen { kind, seed, params, field, rows, cols, max, output } => {
            let f = PrimeField::new(field).map_err(|e| usage(e.to_string()))?;
            if !(1..=2).contains(&params) {
                return Err(usage("--params must be 1 or 2"));
            }
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let texts: Vec<String> = match kind {
                GenKind::Presentation => {
                    vec![io::write_presentation(&gen::random_presentation(&mut rng, f, params, rows, cols, max))]
                }
                GenKind::Pair => {
                    let (a, b) = gen::random_pair(&mut rng, f, params, rows, cols, max);
                    vec![io::write_presentation(&a), io::write_presentation(&b)]
                }
                GenKind::Barcode => vec![io::write_barcode(&gen::random_barcode(&mut rng, rows, max, 0.2))],
                GenKind::Complex => {
                    let cx = gen::random_simplicial(&mut rng, f, rows.max(1), cols, 0.5, 40);
                    let fg = gen::random_filtration(&mut rng, &cx, params, max);
                    let gg = gen::perturb_filtration(&mut rng, &cx, &fg, 1);
                    let xf = FilteredComplex::new(cx.clone(), params, fg)?;
                    let xg = FilteredComplex::new(cx, params, gg)?;
                    let d = filtration_distance(&xf, &xg, &PExponent::Infinity)?;
                    eprintln!("sup distance between the filtrations: {}", decimal(d.to_f64(), digits));
                    vec![io::write_complex(&xf), io::write_complex(&xg)]
                }
            };
            match (texts.len(), output.len()) {
                (1, 0) => sink.push_str(&texts[0]),
                (n, k) if n == k => {
                    for (t, path) in texts.iter().zip(&output) {
                        emit(sink, Some(path), t)?;
                    }
                }
                (n, _) => return Err(usage(format!("this kind writes {n} files; pass -o {n} times"))),
            }
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::MaxDepth(_)) | Some(Error::TooLarge { .. }) => 3,
        _ => 2,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MPM_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("MPM_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut sink = String::new();
    let result = configure_threads().and_then(|()| run(cli, &mut sink));
    // A reader that hangs up early (`| head`) is not an error.
    let _ = std::io::stdout().lock().write_all(sink.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
