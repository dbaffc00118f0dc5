//! The `connbound` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bott::{bott_dimension, bound_profile, m_x, profile_pn, BottQuery, RegularityProfile};
use crate::bounds::{
    fano_expected_dim, BoundKey, Engine, EngineError, Kind, Limits, RuleSet, CACHE_ENV,
    DEFAULT_MAX_M,
};
use crate::combinatorics::{FieldClass, Multidegree};
use crate::nori::{n_of_e_bruteforce, n_of_e_closed_form, nori_certificate, NoriQuery};
use crate::report::{connectivity_report, hodge_level, ReportError, ReportOptions};

#[derive(Parser, Debug)]
#[command(
    name = "connbound",
    version,
    about = "Regularity, Nori thresholds and linear-subspace bounds for complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// dim H^q(P^n, Omega^p(k))
    Bott {
        n: u32,
        p: u32,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        q: u32,
    },
    /// Regularity indices m_0..m_n of the differentials on P^n
    Regularity {
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Nori threshold N(e) by exhaustive enumeration
    Nori(NoriArgs),
    /// Upper bound for n(d; m; k) or l(d; m; k)
    Bound(BoundArgs),
    /// Expected dimension of the m-planes on an intersection in P^n
    Fano {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        degrees: Multidegree,
        #[arg(long)]
        m: u64,
    },
    /// Hodge level floor((n - d_2 - ... - d_r) / d_1)
    HodgeLevel {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        degrees: Multidegree,
    },
    /// Full connectivity report
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct NoriArgs {
    #[arg(long)]
    dim_x: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    e: u32,
    /// JSON regularity profile {"dim": .., "m": [..]}
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Ambient P^N of X when X is not projective space
    #[arg(long, requires = "x_degrees")]
    ambient_dim: Option<u32>,
    /// Multidegree of X inside P^N
    #[arg(long, requires = "ambient_dim")]
    x_degrees: Option<Multidegree>,
    /// Multidegree of Y, for the certificate
    #[arg(long)]
    degrees: Option<Multidegree>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct EngineArgs {
    /// Drop the expected-dimension base over algebraically closed fields
    #[arg(long)]
    no_predonzan: bool,
    /// Enable l(d; 0; C_0) <= d_1 + ... + d_r
    #[arg(long)]
    roitman: bool,
    /// Printed polar inequality without the projectivisation shift (unsound)
    #[arg(long)]
    literal_polar: bool,
    /// Largest linear-space dimension the engine evaluates
    #[arg(long, default_value_t = DEFAULT_MAX_M)]
    max_m: u64,
    /// Memo cache file (defaults to $CONNBOUND_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    N,
    L,
}

#[derive(Args, Debug)]
struct BoundArgs {
    kind: KindArg,
    #[arg(long)]
    degrees: Multidegree,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    c_level: u32,
    /// Field is a universal domain (c-level 0)
    #[arg(long)]
    universal_domain: bool,
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    degrees: Multidegree,
    #[arg(long)]
    c_level: u32,
    /// Comma-separated values of e for the Nori certificate
    #[arg(long, value_delimiter = ',')]
    e: Vec<u32>,
    #[arg(long)]
    universal_domain: bool,
    /// Fail if the Chow conclusions cannot be stated for this field
    #[arg(long)]
    require_chow: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Engine(inner) => inner.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<(), Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            2
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Bott { n, p, k, q } => {
            let query = BottQuery::new(n, p, k, q).map_err(input)?;
            let h = bott_dimension(query);
            emit(out, &format!("h^{q}(P^{n}, Omega^{p}({k})) = {h}\n"))
        }
        Command::Regularity { n, json } => {
            let profile = profile_pn(n);
            let mx = m_x(&profile);
            if json {
                let doc = json!({"dim": n, "m": profile.values(), "m_x": mx});
                emit(out, &format!("{doc}\n"))
            } else {
                let mut text = String::new();
                for (c, v) in profile.values().iter().enumerate() {
                    text.push_str(&format!("m_{c} = {v}\n"));
                }
                text.push_str(&format!("m_X = {mx}\n"));
                emit(out, &text)
            }
        }
        Command::Nori(args) => nori(args, out, err),
        Command::Bound(args) => bound(args, out, err),
        Command::Fano { n, degrees, m } => {
            if n < m {
                return Err(Failure::Input(format!("need n >= m (n={n}, m={m})")));
            }
            let delta = fano_expected_dim(n, &degrees, m);
            emit(out, &format!("delta = {delta}\n"))
        }
        Command::HodgeLevel { n, degrees } => {
            let k = hodge_level(n, &degrees)?;
            emit(out, &format!("hodge level = {k}\n"))
        }
        Command::Report(args) => report(args, out, err),
    }
}

fn nori(args: NoriArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let profile = if let Some(path) = &args.profile {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        RegularityProfile::from_json(&text).map_err(input)?
    } else if let (Some(ambient), Some(xd)) = (args.ambient_dim, &args.x_degrees) {
        let bounded = bound_profile(ambient, xd.len() as u32, xd).map_err(input)?;
        let mut text = format!(
            "X of multidegree {xd} in P^{ambient} (dim {}): known regularity bounds\n",
            bounded.dim_x
        );
        for (c, u) in bounded.upper.iter().enumerate() {
            match u {
                Some(u) => text.push_str(&format!("  m_{c} <= {u}\n")),
                None => text.push_str(&format!("  m_{c} unknown\n")),
            }
        }
        let _ = write!(err, "{text}");
        return Err(Failure::Input(
            "a complete regularity profile is required for X other than projective space; pass --profile".into(),
        ));
    } else {
        profile_pn(args.dim_x)
    };
    let query = NoriQuery::new(args.dim_x, args.r, args.e, profile.clone()).map_err(input)?;
    let max = n_of_e_bruteforce(&query).map_err(input)?;
    let closed = n_of_e_closed_form(query.dim_y() as i64, args.e as i64, m_x(&profile));
    let cert = match &args.degrees {
        Some(d) => Some(nori_certificate(&query, d).map_err(input)?),
        None => None,
    };
    if args.json {
        let doc = json!({
            "dim_x": args.dim_x,
            "r": args.r,
            "e": args.e,
            "profile": profile.values(),
            "maximum": max,
            "threshold": max.threshold(),
            "closed_form": closed,
            "certificate": cert,
        });
        return emit(out, &format!("{doc}\n"));
    }
    let w = &max.witness;
    let mut text = format!(
        "max (m + m_c - k)/l = {} at (a,b,k,l,m,c) = ({},{},{},{},{},{})\n",
        max.value, w.a, w.b, w.k, w.l, w.m, w.c
    );
    text.push_str(&format!("N({}) = {}\n", args.e, max.threshold()));
    text.push_str(&format!("closed form dim Y + e + 1 + m_X = {closed}\n"));
    if !max.k_zero_tuples.is_empty() {
        text.push_str(&format!(
            "note: {} feasible tuples with k = 0 excluded from the maximum\n",
            max.k_zero_tuples.len()
        ));
    }
    if let Some(c) = cert {
        if c.certified {
            text.push_str(&format!(
                "certified: d_1 = {} >= {}; cohomological {}-equivalence",
                c.smallest_degree, c.threshold, c.cohomological_degree
            ));
            if let Some(cc) = c.max_cycle_codim {
                text.push_str(&format!("; conjecturally cycle-theoretic for c <= {cc}"));
            }
            text.push('\n');
        } else {
            text.push_str(&format!(
                "not certified: d_1 = {} < {}\n",
                c.smallest_degree, c.threshold
            ));
        }
    }
    emit(out, &text)
}

fn engine_for(args: &EngineArgs, err: &mut dyn Write) -> (Engine, Option<PathBuf>) {
    let rules = RuleSet {
        predonzan: !args.no_predonzan,
        roitman: args.roitman,
        literal_polar: args.literal_polar,
    };
    let mut engine = Engine::new(rules, Limits { max_m: args.max_m });
    let path = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    if let Some(p) = &path {
        if p.exists() {
            if let Err(e) = engine.load_cache(p) {
                let _ = writeln!(err, "warning: ignoring cache {}: {e}", p.display());
            }
        }
    }
    (engine, path)
}

fn save(engine: &Engine, path: Option<PathBuf>, err: &mut dyn Write) {
    if let Some(p) = path {
        if let Err(e) = engine.save_cache(&p) {
            let _ = writeln!(err, "warning: could not write cache {}: {e}", p.display());
        }
    }
}

fn field_for(c_level: u32, universal: bool) -> Result<FieldClass, Failure> {
    FieldClass::new(c_level, universal).map_err(input)
}

fn bound(args: BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let field = field_for(args.c_level, args.universal_domain)?;
    let (mut engine, cache) = engine_for(&args.engine, err);
    let key = match args.kind {
        KindArg::N => BoundKey::n(args.degrees, args.m, field),
        KindArg::L => BoundKey::l_for_field(args.degrees, args.m, field),
    };
    let result = engine.bound(&key)?;
    save(&engine, cache, err);
    if args.json {
        let doc = json!({
            "key": key,
            "value": result.value,
            "derivation": result.derivation,
        });
        return emit(out, &format!("{doc}\n"));
    }
    let name = match key.kind() {
        Kind::N => "n",
        Kind::L => "l",
    };
    let mut text = format!(
        "{name}({}; {}; {}) <= {}\n",
        key.degrees(),
        key.m(),
        key.field(),
        result.value
    );
    if args.trace {
        text.push_str(&result.derivation.render());
    }
    emit(out, &text)
}

fn report(args: ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let field = field_for(args.c_level, args.universal_domain)?;
    let (mut engine, cache) = engine_for(&args.engine, err);
    let options = ReportOptions {
        e_values: (!args.e.is_empty()).then_some(args.e),
        require_chow: args.require_chow,
    };
    let rep = connectivity_report(args.n, &args.degrees, field, &options, &mut engine)?;
    save(&engine, cache, err);
    if args.json {
        let text = serde_json::to_string_pretty(&rep).map_err(|e| Failure::Internal(e.to_string()))?;
        emit(out, &format!("{text}\n"))
    } else {
        emit(out, &rep.render())
    }
}
