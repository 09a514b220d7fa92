mod config;
mod orbit;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use wkdyn::certify::{self, IntGrid, RunMethod};
use wkdyn::ladder::Ladder;
use wkdyn::relations::{self, Label, PairVerdict, View};
use wkdyn::scalar::{parse_ratio, ratio_to_string, ExactInt};
use wkdyn::{sequence, window_io, Error, Rational, Schedule};

use config::{Format, RunConfig};
use orbit::OrbitSpec;

#[derive(Parser, Debug)]
#[command(name = "wkdyn", version, about = "Exact weakly mixing Bebutov sequences, certificates and pair witnesses")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Explicit ladder schedule file (one L[n] per line), overriding the config.
    #[arg(long, global = true)]
    schedule: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Emit alpha(from), ..., alpha(from + len - 1).
    Gen(GenArgs),
    /// Emit a full-shift fixture window.
    Fixture(FixtureArgs),
    /// Run a certificate and print its JSON report.
    Verify {
        #[command(subcommand)]
        lemma: Lemma,
    },
    /// Search finite witnesses for pair relations.
    Relations {
        #[command(subcommand)]
        op: RelOp,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Add a decimal column with this many digits.
    #[arg(long)]
    decimals: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value = "0")]
    from: BigUint,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    len: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    #[arg(value_enum)]
    kind: FixtureKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    len: u64,
    /// Half-period of the rigidity witness.
    #[arg(long, default_value_t = 1)]
    q: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FixtureKind {
    /// All binary words in length-lex order.
    FullShift,
    /// `(0^q 1^q)^inf`.
    Rigid,
}

#[derive(Subcommand, Debug)]
enum Lemma {
    /// max |alpha(j + 2p[n]) - alpha(j)| over j < J against 1/n.
    Rigidity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        j: u64,
    },
    /// Both return identities of a_inf on [-p[n], p[n]].
    Returns {
        #[arg(long)]
        n: usize,
        /// Spread this many points instead of the full integer grid.
        #[arg(long, conflicts_with = "points")]
        sample: Option<u64>,
        /// Comma-separated integer points.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<BigInt>>,
    },
    /// Syndetic runs of p[n]/9 exact 1s in alpha[0, window].
    Ones {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window: BigInt,
        /// Defaults to a scan for windows up to 10^7, plateau arithmetic beyond.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Coordinate-exact double return behind weak mixing.
    Wm {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
    },
    /// max |b_m(t + 2p[n]) - b_m(t)| on a grid of [-p[m], p[m]].
    ShiftDefect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        step: Rational,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Exhaustive,
    Plateau,
}

#[derive(Args, Debug, Clone)]
struct Search {
    /// Last searched time H.
    #[arg(long)]
    horizon: u64,
    /// Compared prefix length.
    #[arg(long, default_value_t = 16)]
    k: usize,
    #[arg(long, value_parser = parse_rational, default_value = "1/16384")]
    tau: Rational,
    /// Labels that must be witnessed for exit status 0.
    #[arg(long = "require", value_parser = parse_label)]
    require: Vec<Label>,
}

#[derive(Subcommand, Debug)]
enum RelOp {
    /// Proximality, separation and pair recurrence of (sigma^sa a, sigma^sb b).
    Classify {
        #[arg(long)]
        a: OrbitSpec,
        #[arg(long)]
        b: OrbitSpec,
        #[arg(long, default_value_t = 0)]
        shift_a: u64,
        #[arg(long, default_value_t = 0)]
        shift_b: u64,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        delta: Rational,
        /// First searched time N.
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[command(flatten)]
        search: Search,
    },
    /// Joint approach of (sigma^m x, sigma^n x) to a fixed point.
    #[command(name = "fixed-point")]
    FixedPoint {
        #[arg(long)]
        x: OrbitSpec,
        #[arg(long)]
        fixed: OrbitSpec,
        /// `m,n` with m != n; repeatable.
        #[arg(long = "pair", value_parser = parse_pair, required = true)]
        pairs: Vec<(u64, u64)>,
        #[command(flatten)]
        search: Search,
    },
    /// Separation of (x, sigma^q x) on an occurrence of (0^q 1^q)^inf.
    #[command(name = "shift-pair")]
    ShiftPair {
        #[arg(long)]
        x: OrbitSpec,
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_rational, default_value = "2")]
        delta: Rational,
        #[command(flatten)]
        search: Search,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    parse_ratio(s)
}

fn parse_label(s: &str) -> std::result::Result<Label, String> {
    s.parse::<Label>().map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(u64, u64), String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected m,n, got {s:?}"))?;
    let m = m.trim().parse().map_err(|_| format!("bad shift {m:?}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad shift {n:?}"))?;
    Ok((m, n))
}

/// A certificate or witness search that ran but did not succeed.
const EXIT_FAIL: u8 = 1;
/// Bad parameters, input or configuration.
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(path) = &cli.schedule {
        cfg.schedule = config::load_schedule(path)?;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global()?;
    }
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(&cfg, &args),
        Cmd::Fixture(args) => cmd_fixture(&cfg, &args),
        Cmd::Verify { lemma } => cmd_verify(&cfg, &lemma),
        Cmd::Relations { op } => cmd_relations(&cfg, &op),
    }
}

/// Run `$body` with `$l` bound to an `i64` ladder, retrying with `i128`
/// and then `BigInt` when a fixed width overflows. Results are exact in
/// every width, so only speed differs.
macro_rules! widest {
    ($schedule:expr, |$l:ident| $body:expr) => {{
        let schedule: &Schedule = $schedule;
        let r = {
            let $l = Ladder::<i64>::new(schedule.clone(), 0)?;
            $body
        };
        match r {
            Err(Error::Overflow(_)) => {
                let r = {
                    let $l = Ladder::<i128>::new(schedule.clone(), 0)?;
                    $body
                };
                match r {
                    Err(Error::Overflow(_)) => {
                        let $l = Ladder::<BigInt>::new(schedule.clone(), 0)?;
                        $body
                    }
                    r => r,
                }
            }
            r => r,
        }
    }};
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn render_window(cfg: &RunConfig, output: &Output, w: &wkdyn::Window) -> String {
    match output.format.unwrap_or(cfg.format) {
        Format::Csv => window_io::to_csv(w, output.decimals.or(cfg.precision)),
        Format::Json => window_io::to_json(w) + "\n",
    }
}

fn cmd_gen(cfg: &RunConfig, args: &GenArgs) -> Result<ExitCode> {
    let len = usize::try_from(args.len)?;
    let w = widest!(&cfg.schedule, |ladder| sequence::alpha_window(&ladder, &args.from, len)
        .and_then(|w| window_io::convert::<_, BigInt>(&w)))?;
    emit(args.output.out.as_ref(), &render_window(cfg, &args.output, &w))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixture(cfg: &RunConfig, args: &FixtureArgs) -> Result<ExitCode> {
    let len = usize::try_from(args.len)?;
    let w = match args.kind {
        FixtureKind::FullShift => sequence::full_shift_transitive_point::<BigInt>(len)?,
        FixtureKind::Rigid => sequence::full_shift_rigidity_witness::<BigInt>(args.q, len)?,
    };
    emit(args.output.out.as_ref(), &render_window(cfg, &args.output, &w))?;
    Ok(ExitCode::SUCCESS)
}

fn print_json(v: &Value) -> Result<()> {
    emit(None, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn verdict_exit(pass: Option<bool>) -> ExitCode {
    match pass {
        Some(false) => ExitCode::from(EXIT_FAIL),
        _ => ExitCode::SUCCESS,
    }
}

fn cmd_verify(cfg: &RunConfig, lemma: &Lemma) -> Result<ExitCode> {
    let (name, params, pass, report) = match lemma {
        Lemma::Rigidity { n, j } => {
            let r = widest!(&cfg.schedule, |l| certify::check_rigidity(&l, *n, *j))?;
            ("rigidity", json!({"n": n, "J": j}), r.pass, serde_json::to_value(&r)?)
        }
        Lemma::Returns { n, sample, points } => {
            let grid = match (sample, points) {
                (Some(c), _) => IntGrid::Sampled(*c),
                (None, Some(p)) => IntGrid::Points(p.clone()),
                (None, None) => IntGrid::Full,
            };
            let r = widest!(&cfg.schedule, |l| certify::check_returns(&l, *n, &grid))?;
            let grid_desc = match &grid {
                IntGrid::Full => json!("full"),
                IntGrid::Sampled(c) => json!({"sampled": c}),
                IntGrid::Points(p) => json!(p.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
            };
            ("returns", json!({"n": n, "grid": grid_desc}), Some(r.all_equal), serde_json::to_value(&r)?)
        }
        Lemma::Ones { n, window, method } => {
            let method = match method {
                Some(Method::Exhaustive) => RunMethod::Exhaustive,
                Some(Method::Plateau) => RunMethod::Plateau,
                None if *window <= BigInt::from(10_000_000) => RunMethod::Exhaustive,
                None => RunMethod::Plateau,
            };
            let r = widest!(&cfg.schedule, |l| certify::check_ones_runs(&l, *n, window, method))?;
            let params = json!({"n": n, "window": window.to_string(), "method": method});
            ("ones", params, Some(r.pass), serde_json::to_value(&r)?)
        }
        Lemma::Wm { n, eps } => {
            let r = widest!(&cfg.schedule, |l| certify::check_wm_returns(&l, *n, eps.clone()))?;
            let params = json!({"n": n, "eps": eps.as_ref().map(ratio_to_string)});
            ("wm", params, Some(r.pass), serde_json::to_value(&r)?)
        }
        Lemma::ShiftDefect { n, m, step } => {
            let r = widest!(&cfg.schedule, |l| l
                .extend_to(*m)
                .and_then(|_| certify::check_shift_defect(&l, *n, *m, step)))?;
            let params = json!({"n": n, "m": m, "step": ratio_to_string(step)});
            ("shift-defect", params, r.pass, serde_json::to_value(&r)?)
        }
    };
    print_json(&certify::report_json(name, params, pass, &report))?;
    Ok(verdict_exit(pass))
}

fn relations_report(op: &str, params: Value, verdicts: &[PairVerdict], require: &[Label]) -> Result<(Value, bool)> {
    let ok = verdicts.iter().all(|v| require.iter().all(|l| v.has(*l)));
    let v = json!({
        "schema": certify::SCHEMA,
        "relation": op,
        "params": params,
        "required": require.iter().map(|l| l.as_str()).collect::<Vec<_>>(),
        "pass": ok,
        "verdicts": verdicts,
    });
    Ok((v, ok))
}

fn search_params(s: &Search) -> Value {
    json!({"horizon": s.horizon, "k": s.k, "tau": ratio_to_string(&s.tau)})
}

fn run_relations<I: ExactInt>(cfg: &RunConfig, op: &RelOp) -> Result<std::result::Result<Vec<PairVerdict>, Error>> {
    Ok(match op {
        RelOp::Classify { a, b, shift_a, shift_b, delta, from, search } => {
            let (sa, sb) = (a.build::<I>(&cfg.schedule)?, b.build::<I>(&cfg.schedule)?);
            relations::classify_pair(
                View::shifted(sa.as_ref(), *shift_a),
                View::shifted(sb.as_ref(), *shift_b),
                delta,
                *from,
                search.horizon,
                search.k,
                &search.tau,
            )
            .map(|v| vec![v])
        }
        RelOp::FixedPoint { x, fixed, pairs, search } => {
            let (sx, sp) = (x.build::<I>(&cfg.schedule)?, fixed.build::<I>(&cfg.schedule)?);
            relations::fixed_point_pair_witnesses(sx.as_ref(), sp.as_ref(), pairs, search.horizon, search.k, &search.tau)
        }
        RelOp::ShiftPair { x, q, delta, search } => {
            let sx = x.build::<I>(&cfg.schedule)?;
            relations::shift_pair_witnesses(sx.as_ref(), *q, delta, search.horizon, search.k, &search.tau).map(|v| vec![v])
        }
    })
}

fn cmd_relations(cfg: &RunConfig, op: &RelOp) -> Result<ExitCode> {
    let mut result = run_relations::<i64>(cfg, op)?;
    if matches!(result, Err(Error::Overflow(_))) {
        result = run_relations::<i128>(cfg, op)?;
    }
    if matches!(result, Err(Error::Overflow(_))) {
        result = run_relations::<BigInt>(cfg, op)?;
    }
    let (name, params, search) = match op {
        RelOp::Classify { a, b, shift_a, shift_b, delta, from, search } => (
            "classify",
            json!({
                "a": a.to_string(), "b": b.to_string(), "shift_a": shift_a, "shift_b": shift_b,
                "delta": ratio_to_string(delta), "from": from, "search": search_params(search),
            }),
            search,
        ),
        RelOp::FixedPoint { x, fixed, pairs, search } => (
            "fixed-point",
            json!({"x": x.to_string(), "fixed": fixed.to_string(), "pairs": pairs, "search": search_params(search)}),
            search,
        ),
        RelOp::ShiftPair { x, q, delta, search } => (
            "shift-pair",
            json!({"x": x.to_string(), "q": q, "delta": ratio_to_string(delta), "search": search_params(search)}),
            search,
        ),
    };
    let verdicts = match result {
        Ok(v) => v,
        Err(Error::NotFoundInHorizon { horizon }) => {
            eprintln!("no witness within horizon {horizon}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
        Err(e) => return Err(e.into()),
    };
    let (report, ok) = relations_report(name, params, &verdicts, &search.require)?;
    print_json(&report)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}
