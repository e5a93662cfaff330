//! Command-line front end: build and complete quantum scattering diagrams,
//! extract BPS/GW tables, and run the cross-check suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 check failure, 3 internal
//! invariant violation.

use clap::{Args, Parser, Subcommand};
use qscatter::invariants::{self, CheckOutcome};
use qscatter::qtorus::{Context, LatticeVec, PIndex};
use qscatter::scatter::{json::DiagramJson, standard_diagram, to_twisted, ScatteringDiagram};
use qscatter::tropical::{build_perturbed, PartitionDatum};
use qscatter::Error;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "qscatter", version, about = "exact quantum scattering diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ContextArgs {
    /// m-tuple as "x1,y1;x2,y2;..."
    #[arg(long = "m")]
    m_tuple: Option<String>,

    /// orbifold orders as "r1,r2,..." (defaults to all ones)
    #[arg(long)]
    orbifold: Option<String>,

    /// truncation order N
    #[arg(long, default_value_t = 6)]
    order: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Complete the standard diagram and write it as JSON
    Scatter {
        #[command(flatten)]
        ctx: ContextArgs,

        /// output path (stdout when absent)
        #[arg(long)]
        output: Option<std::path::PathBuf>,

        /// coefficientwise quadratic-refinement twist before completion
        #[arg(long, default_value_t = false)]
        twisted: bool,
    },

    /// Tabulate (p, omega_bar, omega, verdict) rows, plus genus rows
    Bps {
        #[command(flatten)]
        ctx: ContextArgs,

        /// read a completed diagram from this JSON file instead of completing
        #[arg(long)]
        input: Option<std::path::PathBuf>,

        /// genus cutoff G for N_{0..G} columns (omitted: no GW rows)
        #[arg(long)]
        genus: Option<u32>,

        /// restrict to the outgoing ray along this primitive direction "x,y"
        #[arg(long)]
        direction: Option<String>,

        /// output format
        #[arg(long, default_value = "table")]
        format: String,
    },

    /// Run a named verification suite
    Check {
        /// one of: pentagon, propagation, tropical, degeneration, twist,
        /// dilog, dimlemma
        name: String,

        #[command(flatten)]
        ctx: ContextArgs,

        /// RNG seed for perturbed diagrams
        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// genus cutoff for series comparisons
        #[arg(long, default_value_t = 3)]
        genus: u32,

        /// maximum ord(p) for the dimension-lemma sweep
        #[arg(long = "max-ord", default_value_t = 6)]
        max_ord: u32,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QSCATTER_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_m_tuple(s: &str) -> Result<Vec<LatticeVec>, Error> {
    s.split(';')
        .map(|pair| {
            let mut it = pair.split(',');
            let x = it
                .next()
                .and_then(|v| v.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Precondition(format!("bad m entry: {pair}")))?;
            let y = it
                .next()
                .and_then(|v| v.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Precondition(format!("bad m entry: {pair}")))?;
            if it.next().is_some() {
                return Err(Error::Precondition(format!("bad m entry: {pair}")));
            }
            let v = LatticeVec::new(x, y);
            if !v.is_primitive() {
                return Err(Error::Precondition(format!("m entry not primitive: {pair}")));
            }
            Ok(v)
        })
        .collect()
}

fn parse_context(args: &ContextArgs) -> Result<Arc<Context>, Error> {
    let m = parse_m_tuple(
        args.m_tuple
            .as_deref()
            .ok_or_else(|| Error::Precondition("missing --m".into()))?,
    )?;
    let r = match &args.orbifold {
        None => vec![1; m.len()],
        Some(s) => s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| Error::Precondition(format!("bad orbifold order: {v}")))
            })
            .collect::<Result<_, _>>()?,
    };
    if r.len() != m.len() {
        return Err(Error::Precondition(
            "orbifold tuple length differs from m-tuple".into(),
        ));
    }
    if args.order < 1 {
        return Err(Error::Precondition("order must be >= 1".into()));
    }
    Ok(Context::new(m, r, args.order))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Scatter {
            ctx,
            output,
            twisted,
        } => {
            let ctx = parse_context(&ctx)?;
            let mut d = standard_diagram(&ctx)?;
            if twisted {
                d = to_twisted(&d);
            }
            let completed = d.complete()?;
            let encoded = serde_json::to_string_pretty(&DiagramJson::from(&completed))
                .map_err(|e| Error::Internal(e.to_string()))?;
            match output {
                Some(path) => std::fs::write(path, encoded + "\n")
                    .map_err(|e| Error::Precondition(e.to_string()))?,
                None => println!("{encoded}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Bps {
            ctx,
            input,
            genus,
            direction,
            format,
        } => {
            let completed = match input {
                Some(path) => {
                    let data = std::fs::read_to_string(path)
                        .map_err(|e| Error::Precondition(e.to_string()))?;
                    let decoded: DiagramJson = serde_json::from_str(&data)
                        .map_err(|e| Error::Precondition(e.to_string()))?;
                    decoded.into_diagram()?
                }
                None => standard_diagram(&parse_context(&ctx)?)?.complete()?,
            };
            let filter = match direction {
                None => None,
                Some(s) => {
                    let v = parse_m_tuple(&s)?;
                    Some(v[0])
                }
            };
            bps_command(&completed, filter, genus, &format)
        }

        Command::Check {
            name,
            ctx,
            seed,
            genus,
            max_ord,
        } => {
            let outcome = check_command(&name, &ctx, seed, genus, max_ord)?;
            if outcome {
                println!("check {name}: pass");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("check {name}: FAIL");
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn bps_command(
    completed: &ScatteringDiagram,
    filter: Option<LatticeVec>,
    genus: Option<u32>,
    format: &str,
) -> Result<ExitCode, Error> {
    let mut rows = Vec::new();
    for p in invariants::outgoing_support(completed) {
        if let Some(dir) = filter {
            if completed.ctx().r_of(&p).primitive() != dir {
                continue;
            }
        }
        let record = invariants::bps_record(completed, &p)?;
        let gw = match genus {
            Some(g) => Some(invariants::gw_series(completed, &p, g)?),
            None => None,
        };
        rows.push((record, gw));
    }
    match format {
        "json" => {
            let body: Vec<serde_json::Value> = rows
                .iter()
                .map(|(rec, gw)| {
                    let mut v = serde_json::json!({
                        "p": rec.p.0,
                        "omega_bar": rec.omega_bar,
                        "omega": rec.omega,
                        "verdict": rec.verdict,
                    });
                    if let Some(gw) = gw {
                        v["gw"] = serde_json::json!(gw.values);
                    }
                    v
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&body).map_err(|e| Error::Internal(e.to_string()))?
            );
        }
        "table" => {
            println!("{:<12} {:<40} {:<40} verdict", "p", "omega_bar", "omega");
            for (rec, gw) in &rows {
                println!(
                    "{:<12} {:<40} {:<40} {}",
                    rec.p.to_string(),
                    rec.omega_bar.to_string(),
                    rec.omega.to_string(),
                    if rec.verdict.passes() { "pass" } else { "FAIL" }
                );
                if let Some(gw) = gw {
                    let vals: Vec<String> = gw.values.iter().map(|v| v.to_string()).collect();
                    println!("{:<12}   N_0..N_{} = [{}]", "", gw.genus_cutoff, vals.join(", "));
                }
            }
        }
        other => {
            return Err(Error::Precondition(format!("unknown format: {other}")));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check_command(
    name: &str,
    ctx_args: &ContextArgs,
    seed: u64,
    genus: u32,
    max_ord: u32,
) -> Result<bool, Error> {
    match name {
        "pentagon" => {
            let ctx = Context::plain(
                vec![LatticeVec::new(1, 0), LatticeVec::new(0, 1)],
                ctx_args.order,
            );
            let completed = standard_diagram(&ctx)?.complete()?;
            let dirs: Vec<LatticeVec> =
                completed.outgoing_rays().map(|r| r.dir).collect();
            let ok = dirs.len() == 3
                && completed.is_consistent(ctx.order)?
                && !completed.get_ray(&LatticeVec::new(1, 1))?.is_zero();
            println!("pentagon: {} outgoing rays, consistent: {ok}", dirs.len());
            Ok(ok)
        }
        "propagation" => {
            let ctx = parse_context(ctx_args)?;
            let input = standard_diagram(&ctx)?;
            let completed = input.complete()?;
            let ok = completed.outgoing_rays().count() == input.ingoing_rays().count()
                && input.ingoing_rays().all(|r| {
                    completed
                        .get_ray(&r.dir.neg())
                        .map(|h| h == r.ham)
                        .unwrap_or(false)
                });
            println!("propagation reproduces the input Hamiltonians: {ok}");
            Ok(ok)
        }
        "tropical" | "degeneration" => {
            let ctx = parse_context(ctx_args)?;
            let completed = standard_diagram(&ctx)?.complete()?;
            let mut perturbed = build_perturbed(&ctx, seed)?;
            perturbed.propagate_to_order(ctx.order)?;
            let mut all_ok = true;
            for p in PIndex::all_up_to(ctx.n(), ctx.order) {
                if ctx.r_of(&p).is_zero() {
                    continue;
                }
                if name == "tropical" {
                    for k in PartitionDatum::enumerate(&p) {
                        let count = perturbed.extract_ntrop(&k)?;
                        println!("{}", count.to_json(perturbed.seed()));
                    }
                }
                let ok = if name == "tropical" {
                    invariants::cross_check_tropical(&completed, &perturbed, &p)?
                } else {
                    match invariants::degeneration_check(&completed, &perturbed, &p, genus)? {
                        CheckOutcome::Pass | CheckOutcome::Skipped => true,
                        CheckOutcome::Fail => false,
                    }
                };
                if !ok {
                    println!("  p = {p}: FAIL");
                    all_ok = false;
                }
            }
            println!("{name} identities at all ord(p) <= {}: {all_ok}", ctx.order);
            Ok(all_ok)
        }
        "twist" => {
            let ctx = parse_context(ctx_args)?;
            let input = standard_diagram(&ctx)?;
            let a = to_twisted(&input.complete()?);
            let b = to_twisted(&input).complete()?;
            let ok = a.rays().len() == b.rays().len()
                && a.rays().iter().all(|ray| {
                    if ray.ingoing {
                        b.ingoing_rays().any(|r| r.dir == ray.dir && r.ham == ray.ham)
                    } else {
                        b.get_ray(&ray.dir).map(|h| h == ray.ham).unwrap_or(false)
                    }
                });
            println!("twist commutes with completion: {ok}");
            Ok(ok)
        }
        "dilog" => {
            let mut ok = true;
            for n in 1..=8 {
                ok &= qscatter::qtorus::quantum_dilog_coeff(n)
                    == qscatter::qtorus::quantum_dilog_coeff_closed(n);
            }
            println!("dilogarithm exp-form equals product-form coefficients: {ok}");
            Ok(ok)
        }
        "dimlemma" => {
            let ctx = parse_context(ctx_args)?;
            let mut ok = true;
            for p in PIndex::all_up_to(ctx.n(), max_ord) {
                let total = ctx.r_of(&p);
                if total.is_zero() {
                    continue;
                }
                ok &= qscatter::classes::check_dim_lemma(&ctx.m_tuple, &p)?;
            }
            println!("dimension lemma on ord(p) <= {max_ord}: {ok}");
            Ok(ok)
        }
        other => Err(Error::Precondition(format!("unknown check name: {other}"))),
    }
}

