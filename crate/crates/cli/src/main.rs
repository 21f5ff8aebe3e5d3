//! Batch front end: parse a problem file, dispatch to the library, emit
//! JSON, text, or SVG. Exit codes: 0 for success or a passing verdict, 1
//! for a mathematically negative verdict (not good, not strict, suite
//! failures), 2 for usage or input errors. Diagnostics go to stderr only.

mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latticework::bilattice::GroupShape;
use latticework::harness::{run_all, run_suite, FieldChoice, TrialConfig, SUITE_NAMES};
use latticework::json as wire;
use latticework::polygon::{self, BasicScope};
use latticework::{filtration, Error, Fp, Prime, Rat};

#[derive(Parser)]
#[command(name = "latticework", version, about = "Exact lattice and polygon invariants over K((t))")]
struct Cli {
    /// Coefficient field: Q or Fp:<prime>
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Input file with the JSON payload; stdin when omitted
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,

    /// Seed for verification suites (the LATTICEWORK_SEED environment
    /// variable overrides this flag)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan type of a lattice pair {"dim", "l1", "l2"}
    Type,
    /// Residue filtration of a pair; --side 1 filters the residue of l1
    Bb {
        #[arg(long, default_value_t = 2)]
        side: u8,
    },
    /// Canonical lattice of a flag {"dim", "steps": [{"jump", "basis"}]}
    Rees,
    /// Goodness report for a block-triangular element; --shape n1,n2,...
    Good {
        #[arg(long)]
        shape: String,
    },
    /// Unipotent factorization report for {"u": matrix, "mu": [ints]}
    Borel,
    /// Strictness of {"f": matrix, "a": pair, "b": pair}
    Strict,
    /// Dominance report for {"s", "v", "q": pairs, "incl", "proj": matrices}
    Extcheck,
    /// Slope dominance for {"nu": [rationals], "mu": [ints]}
    Mazur,
    /// Straight-line slope vector of {"mu": [ints]}
    Basic,
    /// Degree and dominance conditions for {"nu", "etale_type"}
    Admreport,
    /// Rank-one twist anchors
    Tate {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Cumulative polygon of {"slopes": [...]} or {"type": [...]}
    Polygon,
    /// Run named verification suites
    Verify {
        /// One suite by name; see --list
        #[arg(long)]
        suite: Option<String>,
        /// Run every suite
        #[arg(long)]
        all: bool,
        /// List suite names and exit
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 500)]
        trials: u32,
        #[arg(long = "dim-max", default_value_t = 4)]
        dim_max: usize,
        /// Bound on t-exponents in generated entries
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Verdict-bearing output: the exit code reflects the mathematical answer.
struct Outcome {
    value: Value,
    ok: bool,
    text: String,
}

impl Outcome {
    fn info(value: Value, text: String) -> Self {
        Outcome {
            value,
            ok: true,
            text,
        }
    }

    fn verdict(value: Value, ok: bool, text: String) -> Self {
        Outcome { value, ok, text }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let field = parse_field(&cli.field)?;
    let seed = seed_override(cli.seed)?;
    let outcome = match &cli.command {
        Command::Verify {
            suite,
            all,
            list,
            trials,
            dim_max,
            window,
        } => {
            if *list {
                let names: Vec<Value> =
                    SUITE_NAMES.iter().map(|s| Value::String(s.to_string())).collect();
                Outcome::info(
                    json!({ "suites": names }),
                    SUITE_NAMES.join("\n"),
                )
            } else {
                let cfg = TrialConfig {
                    seed,
                    trials: *trials,
                    dim_max: *dim_max,
                    valuation_window: *window,
                    field,
                };
                let reports = if *all {
                    run_all(&cfg)?
                } else {
                    let name = suite.as_deref().ok_or_else(|| {
                        Error::InvalidInput("pass --suite <name> or --all".into())
                    })?;
                    vec![run_suite(name, &cfg)?]
                };
                let ok = reports.iter().all(|r| r.pass());
                let text = reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{}: {} ({} trials, {} ms)",
                            r.suite,
                            if r.pass() { "pass" } else { "FAIL" },
                            r.trials_run,
                            r.elapsed_ms
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                let value = json!({
                    "pass": ok,
                    "reports": reports.iter().map(|r| r.to_value()).collect::<Vec<_>>(),
                });
                Outcome::verdict(value, ok, text)
            }
        }
        Command::Tate { k } => {
            let anchor = polygon::tate_anchor(*k);
            let value = json!({
                "nu": wire::slopes_to_value(&anchor.nu)["slopes"],
                "etale_type": wire::cochar_to_value(&anchor.etale_type),
                "hodge_degree": anchor.hodge_degree,
                "hodge_tate_degree": anchor.hodge_tate_degree,
            });
            let text = format!(
                "twist {k}: hodge degree {}, hodge-tate degree {}",
                anchor.hodge_degree, anchor.hodge_tate_degree
            );
            Outcome::info(value, text)
        }
        other => {
            let payload = read_payload(&cli.input)?;
            match field {
                FieldChoice::Rationals => execute::<Rat>((), other, &payload)?,
                FieldChoice::Prime(p) => {
                    let prime = Prime::new(p)?;
                    execute::<Fp>(prime, other, &payload)?
                }
            }
        }
    };
    emit(&cli, outcome)
}

fn parse_field(text: &str) -> Result<FieldChoice, Error> {
    if text == "Q" {
        return Ok(FieldChoice::Rationals);
    }
    if let Some(rest) = text.strip_prefix("Fp:") {
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad prime {rest:?}")))?;
        Prime::new(p)?;
        return Ok(FieldChoice::Prime(p));
    }
    Err(Error::InvalidInput(format!(
        "unknown field {text:?}: use Q or Fp:<prime>"
    )))
}

fn seed_override(flag: u64) -> Result<u64, Error> {
    match std::env::var("LATTICEWORK_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad LATTICEWORK_SEED {text:?}"))),
        Err(_) => Ok(flag),
    }
}

fn read_payload(input: &Option<PathBuf>) -> Result<Value, Error> {
    let bytes = match input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&bytes).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}

fn execute<F: latticework::Field>(
    ctx: F::Ctx,
    command: &Command,
    payload: &Value,
) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Type => {
            let pair = wire::pair_from_value::<F>(ctx, payload)?;
            let ty = pair.bl_type()?;
            Outcome::info(json!({ "type": wire::cochar_to_value(&ty) }), format!("type {ty}"))
        }
        Command::Bb { side } => {
            let pair = wire::pair_from_value::<F>(ctx, payload)?;
            let flag = pair.bb_side(*side)?;
            let ty = flag.flag_type();
            Outcome::info(
                wire::flag_to_value(&flag),
                format!("side {side} filtration of type {ty}"),
            )
        }
        Command::Rees => {
            let flag = wire::flag_from_value::<F>(ctx, payload)?;
            let basis = filtration::rees_lattice(&flag);
            Outcome::info(
                wire::lattice_to_value(&basis),
                format!("canonical lattice in dimension {}", flag.ambient_dim()),
            )
        }
        Command::Good { shape } => {
            let shape = parse_shape(shape)?;
            let g = wire::matrix_from_value::<F>(ctx, payload)?;
            let report = latticework::is_good(&g, &shape)?;
            let ok = report.is_good;
            let text = format!(
                "{}: full type {}, levi type {}",
                if ok { "good" } else { "not good" },
                report.full_type,
                report.levi_type
            );
            let value = serde_json::to_value(&report)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Outcome::verdict(value, ok, text)
        }
        Command::Borel => {
            let u = wire::matrix_from_value::<F>(
                ctx,
                payload
                    .get("u")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"u\"".into()))?,
            )?;
            let mu = wire::cochar_from_value(
                payload
                    .get("mu")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"mu\"".into()))?,
            )?;
            let report = latticework::borel_unipotent_report(&u, &mu)?;
            let value = json!({
                "mu": wire::cochar_to_value(&report.mu),
                "positive_part": wire::matrix_to_value(&report.positive_part),
                "weight_zero_part": wire::matrix_to_value(&report.weight_zero_part),
                "negative_part": wire::matrix_to_value(&report.negative_part),
                "positive_integral": report.positive_integral,
                "weight_zero_integral": report.weight_zero_integral,
                "conjugated_negative_integral": report.conjugated_negative_integral,
                "verdict": report.verdict,
            });
            let text = format!(
                "conditions: positive {}, weight-zero {}, conjugated negative {} => {}",
                report.positive_integral,
                report.weight_zero_integral,
                report.conjugated_negative_integral,
                if report.verdict { "good" } else { "not good" }
            );
            Outcome::verdict(value, report.verdict, text)
        }
        Command::Strict => {
            let f = wire::matrix_from_value::<F>(
                ctx,
                payload
                    .get("f")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"f\"".into()))?,
            )?;
            let a = wire::pair_from_value::<F>(
                ctx,
                payload
                    .get("a")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"a\"".into()))?,
            )?;
            let b = wire::pair_from_value::<F>(
                ctx,
                payload
                    .get("b")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"b\"".into()))?,
            )?;
            let strict = latticework::is_strict_bl_map(&f, &a, &b)?;
            Outcome::verdict(
                json!({ "strict": strict }),
                strict,
                format!("strict: {strict}"),
            )
        }
        Command::Extcheck => {
            let grab = |key: &str| {
                payload
                    .get(key)
                    .ok_or_else(|| Error::InvalidInput(format!("payload needs \"{key}\"")))
            };
            let s = wire::pair_from_value::<F>(ctx, grab("s")?)?;
            let v = wire::pair_from_value::<F>(ctx, grab("v")?)?;
            let q = wire::pair_from_value::<F>(ctx, grab("q")?)?;
            let incl = wire::matrix_from_value::<F>(ctx, grab("incl")?)?;
            let proj = wire::matrix_from_value::<F>(ctx, grab("proj")?)?;
            let report = latticework::check_extension_dominance(&s, &v, &q, &incl, &proj)?;
            let ok = report.dominance_holds;
            let text = format!(
                "graded type {} {} total type {}",
                report.graded_type,
                if ok { "<=" } else { "!<=" },
                report.total_type
            );
            let value = serde_json::to_value(&report)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Outcome::verdict(value, ok, text)
        }
        Command::Mazur => {
            let nu = wire::slopes_from_value(
                payload
                    .get("nu")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"nu\"".into()))?,
            )?;
            let mu = wire::cochar_from_value(
                payload
                    .get("mu")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"mu\"".into()))?,
            )?;
            let member = polygon::mazur_member(&nu, &mu)?;
            Outcome::verdict(
                json!({ "member": member }),
                member,
                format!("member: {member}"),
            )
        }
        Command::Basic => {
            let mu = wire::cochar_from_value(
                payload
                    .get("mu")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"mu\"".into()))?,
            )?;
            let nu = polygon::basic_element(&mu);
            let compact = polygon::is_compact_mod_center(&nu);
            let basic_for_borel = polygon::is_basic_for_shape(
                &nu,
                &GroupShape::borel(mu.len()),
                BasicScope::FullGroup,
            )?;
            let value = json!({
                "nu": wire::slopes_to_value(&nu)["slopes"],
                "compact_mod_center": compact,
                "basic_for_full_group": basic_for_borel,
            });
            Outcome::info(value, format!("basic element of {mu}"))
        }
        Command::Admreport => {
            let nu = wire::slopes_from_value(
                payload
                    .get("nu")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"nu\"".into()))?,
            )?;
            let etale = wire::cochar_from_value(
                payload
                    .get("etale_type")
                    .ok_or_else(|| Error::InvalidInput("payload needs \"etale_type\"".into()))?,
            )?;
            let report = polygon::admissibility_report(&nu, &etale)?;
            let value = json!({
                "newton": wire::slopes_to_value(&report.newton)["slopes"],
                "etale_type": wire::cochar_to_value(&report.etale_type),
                "de_rham_type": wire::cochar_to_value(&report.de_rham_type),
                "bundle_slopes": wire::slopes_to_value(&report.bundle_slopes)["slopes"],
                "modified_degree": polygon::rational_to_string(&report.modified_degree),
                "weight": polygon::rational_to_string(&report.weight),
                "degree_zero": report.degree_zero,
                "mazur_ok": report.mazur_ok,
                "verdict_necessary": report.verdict_necessary,
            });
            let text = format!(
                "degree {} ({}), dominance {} => necessary conditions {}",
                polygon::rational_to_string(&report.modified_degree),
                report.degree_zero,
                report.mazur_ok,
                report.verdict_necessary
            );
            Outcome::verdict(value, report.verdict_necessary, text)
        }
        Command::Polygon => {
            let poly = if let Some(slopes) = payload.get("slopes") {
                polygon::polygon_of_slopes(&wire::slopes_from_value(slopes)?)
            } else if let Some(ty) = payload.get("type") {
                polygon::polygon_of_type(&wire::cochar_from_value(ty)?)
            } else {
                return Err(Error::InvalidInput(
                    "payload needs \"slopes\" or \"type\"".into(),
                ));
            };
            let text = poly
                .vertices()
                .iter()
                .map(|(x, y)| {
                    format!(
                        "({}, {})",
                        polygon::rational_to_string(x),
                        polygon::rational_to_string(y)
                    )
                })
                .collect::<Vec<_>>()
                .join(" ");
            Outcome::info(wire::polygon_to_value(&poly), text)
        }
        Command::Verify { .. } | Command::Tate { .. } => unreachable!("handled above"),
    })
}

fn parse_shape(text: &str) -> Result<GroupShape, Error> {
    let blocks = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad block size {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupShape::new(blocks)
}

fn emit(cli: &Cli, outcome: Outcome) -> Result<ExitCode, Error> {
    match cli.format {
        Format::Json => println!("{}", wire::to_canonical_string(&outcome.value)),
        Format::Text => println!("{}", outcome.text),
        Format::Svg => {
            let vertices = outcome
                .value
                .get("vertices")
                .ok_or_else(|| Error::InvalidInput("svg output needs a polygon".into()))?;
            println!("{}", render::polygon_svg(vertices)?);
        }
    }
    Ok(if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
