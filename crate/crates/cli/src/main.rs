//! `period-engine` command-line front end.

mod formats;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use period_engine::continuation::{
    cayley_fixed_point, change_basis, determinant, expected_determinant, fricke_check, frobenius_at, identity,
    log_normalized, monodromy, taylor_continue, Matrix,
};
use period_engine::diffop::{is_symmetric_square, pullback, symmetric_square, Substitution};
use period_engine::frobenius::{frobenius_basis, indicial_roots, Point};
use period_engine::mirror::{mirror_map_gauged, prepotential_from_yukawa, yukawa_flat_gauged};
use period_engine::numeric::{ComplexPoint, Ctx};
use period_engine::toric::{anticanonical_sections, lattice_points, polar_dual, Vec2};
use period_engine::{Poly, Rational, ThetaOperator};

use formats::*;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or input files.
    Schema(String),
    /// Input parses but violates a mathematical precondition.
    Math(period_engine::Error),
    Internal(String),
    /// `identity-suite` ran and at least one identity failed.
    IdentityFailed(Vec<String>),
}

impl From<period_engine::Error> for CliError {
    fn from(e: period_engine::Error) -> Self {
        CliError::Math(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Math(_) => 3,
            CliError::Internal(_) | CliError::IdentityFailed(_) => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Schema(m) => ("schema", m.clone()),
            CliError::Math(e) => ("math", e.to_string()),
            CliError::Internal(m) => ("internal", m.clone()),
            CliError::IdentityFailed(ids) => ("identity_failed", format!("failed: {}", ids.join(", "))),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

#[derive(Parser)]
#[command(name = "period-engine", version, about = "Periods, mirror maps and monodromy of Picard-Fuchs operators")]
struct Cli {
    /// Working precision in decimal digits (at least 16).
    #[arg(long, global = true, env = "PERIOD_ENGINE_PRECISION", default_value_t = 50)]
    precision: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct OpArgs {
    /// Operator file.
    #[arg(long)]
    op: PathBuf,
    /// Number of series terms (at least 4).
    #[arg(long, default_value_t = 20)]
    order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Frobenius basis at a point.
    Frobenius {
        #[command(flatten)]
        op: OpArgs,
        /// Rational point or "inf".
        #[arg(long, default_value = "0")]
        point: String,
    },
    /// Mirror map q(z) and its inverse z(q).
    MirrorMap {
        #[command(flatten)]
        op: OpArgs,
        /// Gauge constant dividing q.
        #[arg(long, default_value = "1")]
        gauge_shift: String,
    },
    /// Yukawa coupling in algebraic and flat coordinates.
    Yukawa {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value = "1")]
        gauge_shift: String,
    },
    /// Prepotential from the flat Yukawa coupling.
    Prepotential {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value = "1")]
        gauge_shift: String,
        /// Classical triple intersection; defaults to the constant term of the coupling.
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Symmetric square: build it, or detect one.
    Symsq {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, conflicts_with = "detect", required_unless_present = "detect")]
        construct: bool,
        #[arg(long)]
        detect: bool,
    },
    /// Operator annihilating f(phi(z)).
    Pullback {
        #[arg(long)]
        op: PathBuf,
        /// "affine:a,b" (a z + b), "reciprocal" (1/z) or "poly:c0,c1,..".
        #[arg(long)]
        map: String,
    },
    /// Monodromy matrix of a loop.
    Monodromy {
        #[arg(long)]
        op: PathBuf,
        /// Singular point to encircle ("inf" allowed).
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        around: Option<String>,
        /// Closed path file.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Basepoint "re,im" of a generated loop.
        #[arg(long, default_value = "1/2,0", conflicts_with = "input")]
        basepoint: String,
        #[arg(long, value_enum, default_value_t = Basis::Standard)]
        basis: Basis,
    },
    /// tau(1-a) tau(a) = -1/3 at rational points of the unit interval.
    FrickeCheck {
        #[arg(long)]
        op: PathBuf,
        /// Comma-separated rationals in (0, 1).
        #[arg(long, default_value = "1/5,1/3,2/5")]
        alphas: String,
        #[arg(long, default_value = "27")]
        gauge_shift: String,
    },
    /// Fixed point tau* and the Cayley disk coordinate.
    Cayley {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value = "27")]
        gauge_shift: String,
    },
    /// Two-dimensional lattice polytopes.
    Toric {
        #[command(subcommand)]
        action: Toric,
    },
    /// Run named identities and report pass or fail.
    IdentitySuite {
        /// Identity id, repeatable; all when omitted.
        #[arg(long)]
        name: Vec<String>,
        /// List the identities without running them.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Standard,
    Frobenius,
}

#[derive(Subcommand)]
enum Toric {
    /// Polar dual polytope.
    Polar {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lattice points.
    Points {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Anticanonical section monomials.
    Sections {
        #[arg(long = "in")]
        input: PathBuf,
        /// Rays "x,y;x,y;..", otherwise the file's "rays" or the facet normals.
        #[arg(long)]
        rays: Option<String>,
        #[arg(long, default_value = "z")]
        var: String,
    },
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn load_op(path: &Path) -> Result<ThetaOperator, CliError> {
    operator_from_json(&read_json(path)?)
}

fn check_order(order: usize) -> Result<usize, CliError> {
    if order < 4 {
        return Err(CliError::Schema(format!("--order must be at least 4, got {order}")));
    }
    Ok(order)
}

fn parse_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(parse_rational).collect()
}

fn parse_map(text: &str) -> Result<Substitution, CliError> {
    let (kind, args) = text.split_once(':').unwrap_or((text, ""));
    match kind.trim() {
        "reciprocal" => Ok(Substitution::Reciprocal),
        "affine" => match parse_list(args)?.as_slice() {
            [a, b] => Ok(Substitution::Affine(a.clone(), b.clone())),
            _ => Err(CliError::Schema("affine map takes two coefficients a,b".into())),
        },
        "poly" => Ok(Substitution::Polynomial(Poly::new(parse_list(args)?))),
        other => Err(CliError::Schema(format!("unknown map kind \"{other}\""))),
    }
}

fn parse_point_arg(text: &str) -> Result<Point, CliError> {
    text.parse().map_err(|e: period_engine::Error| CliError::Schema(e.to_string()))
}

fn parse_rays(text: &str) -> Result<Vec<Vec2>, CliError> {
    text.split(';')
        .map(|pair| {
            let bad = || CliError::Schema(format!("ray \"{pair}\" is not x,y"));
            let (x, y) = pair.split_once(',').ok_or_else(bad)?;
            Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn new_ctx(digits: usize) -> Result<Ctx, CliError> {
    if digits < 16 {
        return Err(CliError::Schema(format!("precision must be at least 16 digits, got {digits}")));
    }
    Ok(Ctx::with_digits(digits)?)
}

fn indicial_json(op: &ThetaOperator, point: &Point) -> Result<Value, CliError> {
    let data = indicial_roots(op, point)?;
    Ok(Value::Array(
        data.roots.iter().map(|(r, m)| json!({ "root": rational_json(r), "multiplicity": m })).collect(),
    ))
}

fn run_monodromy(
    cli: &Cli,
    op_path: &Path,
    around: Option<&str>,
    input: Option<&Path>,
    basepoint: &str,
    basis: Basis,
) -> Result<Value, CliError> {
    let op = load_op(op_path)?;
    let path_file = input.map(read_json).transpose()?;
    let digits = match &path_file {
        Some(v) => path_precision(v)?.unwrap_or(cli.precision),
        None => cli.precision,
    };
    let mut ctx = new_ctx(digits)?;
    let (m, b, budget, point) = match (&path_file, around) {
        (Some(v), _) => {
            let path = path_from_json(v, &mut ctx)?;
            if ctx.distance_f64(path.start(), path.end()) != 0.0 {
                return Err(CliError::Schema("monodromy path must be closed".into()));
            }
            let run = taylor_continue(&op, &path, &identity(op.order(), &ctx), &mut ctx)?;
            (run.end, path.start().clone(), run.error_budget, None)
        }
        (None, Some(p)) => {
            let point = parse_point_arg(p)?;
            let b = parse_point(basepoint, &mut ctx)?;
            let m = monodromy(&op, &b, &point, &mut ctx)?;
            (m.entries, b, m.error_budget, Some(point))
        }
        (None, None) => return Err(CliError::Schema("give --around or --in".into())),
    };
    let matrix: Matrix = match basis {
        Basis::Standard => m,
        Basis::Frobenius => {
            let Some(point) = &point else {
                return Err(CliError::Schema("--basis frobenius needs --around".into()));
            };
            let (fb, y) = frobenius_at(&op, point, &b, &mut ctx)?;
            let local = change_basis(&m, &y, &ctx)?;
            log_normalized(&local, &fb, &mut ctx)?
        }
    };
    let det = determinant(&matrix, &ctx);
    let mut out = vec![
        ("basepoint", point_json(&b, digits, &mut ctx)),
        ("matrix", matrix_json(&matrix, digits, &mut ctx)),
        ("determinant", point_json(&det, digits, &mut ctx)),
        ("error_budget", json!(budget)),
    ];
    if let Some(point) = &point {
        let expect: ComplexPoint = expected_determinant(&op, point, &mut ctx)?;
        let residual = ctx.distance_f64(&det, &expect);
        out.push(("around", json!(point.to_string())));
        out.push(("expected_determinant", point_json(&expect, digits, &mut ctx)));
        out.push(("determinant_residual", json!(residual)));
    }
    Ok(object(out))
}

fn run_suite(names: &[String], list: bool) -> Result<Value, CliError> {
    let all = suite::all();
    if list {
        return Ok(Value::Array(all.iter().map(|i| json!({ "id": i.id, "title": i.title })).collect()));
    }
    let chosen: Vec<&suite::Identity> = if names.is_empty() {
        all.iter().collect()
    } else {
        names
            .iter()
            .map(|n| {
                all.iter().find(|i| i.id == n).ok_or_else(|| CliError::Schema(format!("unknown identity \"{n}\"")))
            })
            .collect::<Result<_, _>>()?
    };
    // independent checks run side by side
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = chosen
            .iter()
            .map(|i| {
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(s, move || i.run())
                    .map_err(|e| CliError::Internal(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Internal("identity check panicked".into())))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    let report = json!({
        "results": outcomes
            .iter()
            .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
            .collect::<Vec<_>>(),
        "failed": failed,
    });
    Ok(report)
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Frobenius { op, point } => {
            let order = check_order(op.order)?;
            let l = load_op(&op.op)?;
            let point = parse_point_arg(point)?;
            let basis = frobenius_basis(&l, &point, order)?;
            Ok(json!({
                "operator": operator_json(&l),
                "point": point.to_string(),
                "indicial_roots": indicial_json(&l, &point)?,
                "basis": basis_json(&basis),
            }))
        }
        Command::MirrorMap { op, gauge_shift } => {
            let order = check_order(op.order)?;
            let l = load_op(&op.op)?;
            let m = mirror_map_gauged(&l, order, &parse_rational(gauge_shift)?)?;
            Ok(json!({
                "gauge": rational_json(&m.gauge),
                "q_of_z": series_json(&m.q_of_z),
                "z_of_q": series_json(&m.z_of_q),
            }))
        }
        Command::Yukawa { op, gauge_shift } => {
            let order = check_order(op.order)?;
            let l = load_op(&op.op)?;
            let y = yukawa_flat_gauged(&l, order, &parse_rational(gauge_shift)?)?;
            Ok(json!({
                "algebraic": algebraic_json(&y.algebraic, l.var()),
                "flat": series_json(&y.flat),
                "calibration": rational_json(&y.calibration),
            }))
        }
        Command::Prepotential { op, gauge_shift, kappa } => {
            let order = check_order(op.order)?;
            let l = load_op(&op.op)?;
            let y = yukawa_flat_gauged(&l, order, &parse_rational(gauge_shift)?)?;
            let kappa = kappa.as_deref().map(parse_rational).transpose()?.unwrap_or(y.calibration);
            let f = prepotential_from_yukawa(&y.flat, &kappa)?;
            Ok(prepotential_json(&f))
        }
        Command::Symsq { op, construct, .. } => {
            let l = load_op(op)?;
            if *construct {
                let sq = symmetric_square(&l.to_deriv())?;
                Ok(operator_json(&ThetaOperator::from_deriv(l.var(), &sq)?))
            } else {
                let w = is_symmetric_square(&l.to_deriv())?;
                let w = w.map(|w| ThetaOperator::from_deriv(l.var(), &w)).transpose()?;
                Ok(json!({
                    "is_symmetric_square": w.is_some(),
                    "witness": w.as_ref().map(operator_json),
                }))
            }
        }
        Command::Pullback { op, map } => {
            let l = load_op(op)?;
            Ok(operator_json(&pullback(&l, &parse_map(map)?)?))
        }
        Command::Monodromy { op, around, input, basepoint, basis } => {
            run_monodromy(cli, op, around.as_deref(), input.as_deref(), basepoint, *basis)
        }
        Command::FrickeCheck { op, alphas, gauge_shift } => {
            let l = load_op(op)?;
            let alphas = parse_list(alphas)?;
            let mut ctx = new_ctx(cli.precision)?;
            let d = cli.precision;
            let samples = fricke_check(&l, &alphas, &parse_rational(gauge_shift)?, &mut ctx)?;
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    json!({
                        "alpha": rational_json(&s.alpha),
                        "tau_alpha": point_json(&s.tau_alpha, d, &mut ctx),
                        "tau_one_minus_alpha": point_json(&s.tau_beta, d, &mut ctx),
                        "product": point_json(&s.product, d, &mut ctx),
                        "residual": s.residual,
                    })
                })
                .collect();
            Ok(json!({ "samples": rows }))
        }
        Command::Cayley { op, gauge_shift } => {
            let l = load_op(op)?;
            let mut ctx = new_ctx(cli.precision)?;
            let d = cli.precision;
            let cp = cayley_fixed_point(&l, &parse_rational(gauge_shift)?, &mut ctx)?;
            let samples: Vec<Value> = cp
                .samples
                .iter()
                .map(|(a, r)| json!({ "alpha": point_json(a, d, &mut ctx), "abs_tau_orb": r }))
                .collect();
            Ok(json!({
                "tau_star": point_json(&cp.tau_star, d, &mut ctx),
                "tau_star_alt": point_json(&cp.tau_star_alt, d, &mut ctx),
                "path_residual": cp.path_residual,
                "samples": samples,
            }))
        }
        Command::Toric { action } => match action {
            Toric::Polar { input } => {
                let p = polytope_from_json(&read_json(input)?)?;
                Ok(json!({ "vertices": vectors_json(polar_dual(&p)?.vertices()) }))
            }
            Toric::Points { input } => {
                let p = polytope_from_json(&read_json(input)?)?;
                let pts = lattice_points(&p);
                Ok(json!({ "count": pts.len(), "points": vectors_json(&pts) }))
            }
            Toric::Sections { input, rays, var } => {
                let v = read_json(input)?;
                let p = polytope_from_json(&v)?;
                let rays = match rays {
                    Some(r) => parse_rays(r)?,
                    None => rays_from_json(&v)?.unwrap_or_else(|| p.inner_normals()),
                };
                let list = anticanonical_sections(&p, &rays)?;
                let mut out = monomials_json(&list, var);
                out["degree"] = json!(list.common_degree());
                Ok(out)
            }
        },
        Command::IdentitySuite { name, list } => run_suite(name, *list),
    }
}

fn render(v: &Value, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))? + "\n",
        Format::Tsv => to_tsv(v),
    })
}

fn emit(cli: &Cli, v: &Value) -> Result<(), CliError> {
    let text = render(v, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Schema(e.to_string().trim().to_string())),
    };
    if cli.precision < 16 {
        return fail(&CliError::Schema(format!("precision must be at least 16 digits, got {}", cli.precision)));
    }
    let result = run(&cli).and_then(|v| {
        emit(&cli, &v)?;
        match v.get("failed").and_then(Value::as_array) {
            Some(f) if !f.is_empty() => {
                Err(CliError::IdentityFailed(f.iter().filter_map(|x| x.as_str().map(String::from)).collect()))
            }
            _ => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
