use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use obfol::foliation::{be_check, find_ot_witness, ot_disc_report, FoliatedSurface};
use obfol::io::{parse_coords, BraidDoc, OpenBookDoc};
use obfol::mapclass::MappingClass;
use obfol::morita::pullback_k;
use obfol::movie::{compile, parse_movie};
use obfol::slcalc::{c_value, self_linking, solve_a};
use obfol::surface::{rel_from_rho_prime_coords, RelClass};
use obfol::{props, Error, Result};

#[derive(Parser)]
#[command(name = "obfol", version, about = "Self-linking numbers in open books and open book foliations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct BookArgs {
    #[arg(long)]
    openbook: PathBuf,
    #[arg(long)]
    braid: Option<PathBuf>,
    /// Arc-basis coordinates of a, e.g. "1,0,-2".
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
}

#[derive(clap::Args)]
struct SurfaceArgs {
    /// Foliation JSON or movie script.
    file: Option<PathBuf>,
    #[arg(long)]
    foliation: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Then {
    Validate,
    Chi,
    OtCheck,
    BeCheck,
}

#[derive(Subcommand)]
enum Command {
    /// Self-linking number of a braid closure.
    Sl(BookArgs),
    /// The correction term c(φ, a).
    C(BookArgs),
    /// Morita's k(φ, a), pulled back when the page has several boundary components.
    K(BookArgs),
    Validate(SurfaceArgs),
    Chi(SurfaceArgs),
    OtCheck(SurfaceArgs),
    BeCheck(SurfaceArgs),
    /// Compile a movie script to foliation JSON, or analyse the result.
    MovieCompile {
        file: PathBuf,
        #[arg(long, value_enum)]
        then: Option<Then>,
    },
    /// Run the randomized property suites.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        suite: Option<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn book(args: &BookArgs) -> Result<MappingClass> {
    OpenBookDoc::parse(&read(&args.openbook)?)?.monodromy()
}

/// `a` from `--a`, or solved from the braid.
fn class_a(args: &BookArgs, phi: &MappingClass) -> Result<RelClass> {
    if let Some(a) = &args.a {
        return rel_from_rho_prime_coords(phi.sig(), &parse_coords(a)?);
    }
    let Some(b) = &args.braid else {
        return Err(Error::parse("arguments", "give --a or --braid"));
    };
    let braid = BraidDoc::parse(&read(b)?)?.braid(phi.sig())?;
    Ok(solve_a(&braid, phi)?.a)
}

fn load_surface(text: &str) -> Result<FoliatedSurface> {
    let movie = match serde_json::from_str::<Value>(text) {
        Ok(v) => v.get("leaves").is_some(),
        Err(_) => true,
    };
    if movie {
        compile(&parse_movie(text)?)
    } else {
        FoliatedSurface::from_json(text)
    }
}

fn surface(args: &SurfaceArgs) -> Result<FoliatedSurface> {
    let path = args
        .foliation
        .as_ref()
        .or(args.file.as_ref())
        .ok_or_else(|| Error::parse("arguments", "give a foliation file"))?;
    load_surface(&read(path)?)
}

fn analyse(fs: &FoliatedSurface, what: Then) -> Result<Value> {
    let cx = fs.validate()?;
    let counts = fs.counts()?;
    Ok(match what {
        Then::Validate => json!({
            "valid": true,
            "chi": cx.chi,
            "boundary_components": cx.boundary_components,
            "counts": counts,
        }),
        Then::Chi => json!({ "chi": fs.euler_char()?, "counts": counts }),
        Then::OtCheck => {
            let report = ot_disc_report(fs)?;
            let witness = if cx.boundary_components > 0 { find_ot_witness(fs)? } else { None };
            json!({ "ot_disc": report.ot_disc, "reasons": report.reasons, "witness": witness })
        }
        Then::BeCheck => {
            let be = be_check(fs)?;
            json!({
                "sl": be.sl,
                "chi": be.chi,
                "slack": be.slack,
                "violated": be.violated,
                "identity_check": be.identity_check,
                "ot_disc": ot_disc_report(fs)?.ot_disc,
            })
        }
    })
}

/// The report and whether the run succeeded.
fn run(cli: &Cli) -> Result<(Value, bool)> {
    let v = match &cli.command {
        Command::Sl(args) => {
            let phi = book(args)?;
            let Some(b) = &args.braid else {
                return Err(Error::parse("arguments", "sl needs --braid"));
            };
            let braid = BraidDoc::parse(&read(b)?)?.braid(phi.sig())?;
            let a = args.a.as_deref().map(|a| rel_from_rho_prime_coords(phi.sig(), &parse_coords(a)?)).transpose()?;
            serde_json::to_value(self_linking(&phi, &braid, a.as_ref())?).expect("report serializes")
        }
        Command::C(args) => {
            let phi = book(args)?;
            let a = class_a(args, &phi)?;
            json!({ "c": c_value(&phi, &a)?, "a": obfol::surface::rho_prime_coords(&a) })
        }
        Command::K(args) => {
            let phi = book(args)?;
            let a = class_a(args, &phi)?;
            json!({ "k": pullback_k(&phi, &a)?, "a": obfol::surface::rho_prime_coords(&a) })
        }
        Command::Validate(s) => analyse(&surface(s)?, Then::Validate)?,
        Command::Chi(s) => analyse(&surface(s)?, Then::Chi)?,
        Command::OtCheck(s) => analyse(&surface(s)?, Then::OtCheck)?,
        Command::BeCheck(s) => analyse(&surface(s)?, Then::BeCheck)?,
        Command::MovieCompile { file, then } => {
            let fs = compile(&parse_movie(&read(file)?)?)?;
            match then {
                Some(t) => analyse(&fs, *t)?,
                None => serde_json::to_value(&fs).expect("surface serializes"),
            }
        }
        Command::Props { seed, suite } => {
            let reports = props::run_suites(*seed, suite.as_deref())?;
            let ok = reports.iter().all(|r| r.passed());
            return Ok((json!({ "seed": seed, "passed": ok, "suites": reports }), ok));
        }
    };
    Ok((v, true))
}

fn error_value(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    if let Error::Invalid(v) = e {
        m.insert("violations".into(), json!(v));
    }
    json!({ "error": m })
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}"),
                Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                    let body: Vec<String> = items.iter().map(|i| format!("  {}", i)).collect();
                    format!("{k}:\n{}", body.join("\n"))
                }
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(&cli) {
        Ok((v, ok)) => (v, if ok { 0 } else { 1 }),
        Err(e) => (error_value(&e), if e.is_input_error() { 2 } else { 1 }),
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out).expect("values serialize"),
        Format::Text => render_text(&out),
    };
    if code == 0 || cli.format == Format::Json {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    ExitCode::from(code)
}
