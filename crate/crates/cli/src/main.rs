//! Command line driver: Thomas decompositions, regularity decompositions
//! with JSON reports, point classification, power-series solutions and
//! plot data for generalized-solution directions.

use diffreg_cli::{parse, report};

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use diffreg::arith::{DiffPolynomial, Rat, VariableId};
use diffreg::jet::{aux_columns, jacobian_rows, kernel_basis, vessiot_rows};
use diffreg::regularity::{regdecomp_full, Classification, RegError, RegOptions};
use diffreg::thomas_alg::{sample_solutions, thomas_decompose, AlgebraicSystem};
use diffreg::thomas_diff::diff_thomas_decompose;
use num_traits::Zero;

use parse::{parse_point, parse_system, print_poly, SystemFile};

#[derive(Parser)]
#[command(
    name = "diffreg",
    about = "Exact regularity decomposition of polynomially nonlinear ODE/PDE systems"
)]
struct Cli {
    /// Number of worker threads; the output is identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThomasMode {
    Alg,
    Diff,
}

#[derive(Subcommand)]
enum Command {
    /// Thomas decomposition into simple systems.
    Thomas {
        /// System description file ('-' for stdin).
        file: String,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ThomasMode,
    },
    /// Regularity decomposition at a fixed jet order.
    Regdecomp {
        file: String,
        /// Jet order of the analysis.
        #[arg(long)]
        order: Option<u32>,
        /// Conflate equivalent components after the decomposition.
        #[arg(long)]
        merge: bool,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
        /// Total-degree bound for the factorization-based prime splitting.
        #[arg(long, default_value_t = diffreg::arith::DEFAULT_FACTOR_BOUND)]
        factor_bound: u32,
    },
    /// Classify a single jet point against the regularity decomposition.
    ClassifyPoint {
        file: String,
        #[arg(long)]
        order: Option<u32>,
        /// Point assignment, e.g. "x=-2, u=-3, u'=1".
        #[arg(long)]
        point: String,
        /// Print the evaluated Vessiot and Jacobian matrices.
        #[arg(long)]
        verbose: bool,
    },
    /// Truncated power-series solution at an expansion point.
    Series {
        file: String,
        /// Expansion point, e.g. "x=1, y=1".
        #[arg(long)]
        at: String,
        /// Seed coefficients, e.g. "u=1, u_x=2".
        #[arg(long, default_value = "")]
        seed: String,
        /// Truncation order.
        #[arg(long)]
        truncate: u32,
    },
    /// CSV of sampled generalized-solution tangent directions (n = 1).
    Plotdata {
        file: String,
        #[arg(long)]
        order: Option<u32>,
        /// Samples per regularity component.
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    if cli.jobs > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let result = match cli.command {
        Command::Thomas { file, mode } => cmd_thomas(&file, mode),
        Command::Regdecomp { file, order, merge, json, factor_bound } => {
            cmd_regdecomp(&file, order, merge, json, factor_bound)
        }
        Command::ClassifyPoint { file, order, point, verbose } => {
            cmd_classify(&file, order, &point, verbose)
        }
        Command::Series { file, at, seed, truncate } => cmd_series(&file, &at, &seed, truncate),
        Command::Plotdata { file, order, count } => cmd_plotdata(&file, order, count),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::OrderTooSmall(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

enum CliError {
    OrderTooSmall(String),
    Other(String),
}

impl From<RegError> for CliError {
    fn from(e: RegError) -> Self {
        match e {
            RegError::OrderTooSmall { requested, needed } => CliError::OrderTooSmall(format!(
                "order {requested} too small: the system contains order {needed}"
            )),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<parse::ParseError> for CliError {
    fn from(e: parse::ParseError) -> Self {
        CliError::Other(e.to_string())
    }
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(e.to_string())
}

fn load(file: &str) -> Result<SystemFile, CliError> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(other)?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| other(format!("{file}: {e}")))?
    };
    Ok(parse_system(&text)?)
}

fn resolve_order(sys: &SystemFile, order: Option<u32>) -> Result<u32, CliError> {
    match order {
        Some(k) => Ok(k),
        None => match sys.options.get("order") {
            Some(s) => s.parse().map_err(|_| other("invalid order option in the file")),
            None => Err(other("no --order given and the file sets no order option")),
        },
    }
}

fn cmd_thomas(file: &str, mode: ThomasMode) -> Result<(), CliError> {
    let sys = load(file)?;
    let ctx = &sys.context;
    let r = &sys.ranking;
    match mode {
        ThomasMode::Alg => {
            let alg = AlgebraicSystem::new(
                sys.equations.clone(),
                sys.inequations.clone(),
                sys.ranking.clone(),
            );
            let out = thomas_decompose(&alg).map_err(other)?;
            if out.is_empty() {
                println!("inconsistent system (no simple systems)");
            }
            for (i, b) in out.iter().enumerate() {
                println!("simple algebraic system {}", i + 1);
                for e in &b.equations {
                    println!("  eq   {} = 0", print_poly(ctx, r, e));
                }
                for q in &b.inequations {
                    println!("  ineq {} != 0", print_poly(ctx, r, q));
                }
            }
        }
        ThomasMode::Diff => {
            let out = diff_thomas_decompose(&sys.to_differential_system()).map_err(other)?;
            if out.is_empty() {
                println!("inconsistent system (no simple systems)");
            }
            for (i, b) in out.iter().enumerate() {
                println!("simple differential system {}", i + 1);
                for (e, mult) in b.equations.iter().zip(&b.multiplicative) {
                    let names: Vec<String> =
                        mult.iter().map(|k| ctx.indep[*k].clone()).collect();
                    println!(
                        "  eq   {} = 0   (multiplicative: {})",
                        print_poly(ctx, r, e),
                        if names.is_empty() { "-".to_string() } else { names.join(" ") }
                    );
                }
                for q in &b.inequations {
                    println!("  ineq {} != 0", print_poly(ctx, r, q));
                }
            }
        }
    }
    Ok(())
}

fn reg_options(merge: bool, factor_bound: u32) -> RegOptions {
    RegOptions { merge, factor_bound, include_lower_vessiot: false }
}

fn cmd_regdecomp(
    file: &str,
    order: Option<u32>,
    merge: bool,
    json: bool,
    factor_bound: u32,
) -> Result<(), CliError> {
    let sys = load(file)?;
    let order = resolve_order(&sys, order)?;
    let merge = merge || sys.options.get("merge").map(|v| v == "true").unwrap_or(false);
    let report =
        regdecomp_full(&sys.to_differential_system(), order, &reg_options(merge, factor_bound))?;
    if json {
        let json_report = report::build_report(&report, &sys.context, &sys.ranking);
        println!("{}", serde_json::to_string_pretty(&json_report).map_err(other)?);
    } else {
        print!("{}", report::render_text(&report, &sys.context, &sys.ranking));
    }
    Ok(())
}

fn cmd_classify(
    file: &str,
    order: Option<u32>,
    point: &str,
    verbose: bool,
) -> Result<(), CliError> {
    let sys = load(file)?;
    let order = resolve_order(&sys, order)?;
    let pt = parse_point(point, &sys.context)?;
    let report =
        regdecomp_full(&sys.to_differential_system(), order, &reg_options(false, diffreg::arith::DEFAULT_FACTOR_BOUND))?;
    let member = |eqs: &[DiffPolynomial], ineqs: &[DiffPolynomial]| -> bool {
        eqs.iter().all(|p| p.evaluate(&pt).map(|v| v.is_zero()).unwrap_or(false))
            && ineqs.iter().all(|p| p.evaluate(&pt).map(|v| !v.is_zero()).unwrap_or(false))
    };
    let mut found = None;
    for sysrep in &report.systems {
        for prime in &sysrep.primes {
            for c in &prime.components {
                if member(&c.equations, &c.inequations) {
                    found = Some((prime, c));
                }
            }
        }
    }
    let Some((prime, component)) = found else {
        return Err(other("the point lies on no regularity component at this order"));
    };
    match component.classification {
        Classification::IrregularSingular { purely } => {
            println!("irregular_singular, purely={purely}")
        }
        other => println!("{}", other.as_str()),
    }
    if verbose {
        let ctx = &sys.context;
        let r = &sys.ranking;
        let gens = prime.prime.ideal.groebner().to_vec();
        let n = sys.context.n();
        let m = sys.context.m();
        let vess = vessiot_rows(&gens, n, order, false).map_err(other)?;
        let jac = jacobian_rows(&gens, n, order);
        let (a_cols, b_cols, c_cols, d_cols) = aux_columns(n, m, order, r);
        let mut ab = a_cols.clone();
        ab.extend(b_cols);
        let mut cd = c_cols;
        cd.extend(d_cols);
        println!("vessiot rows over {:?}:", ab.iter().map(|v| ctx.var_name(v)).collect::<Vec<_>>());
        for row in &vess {
            let vals: Vec<String> = ab
                .iter()
                .map(|v| row.coefficient(v).evaluate(&pt).map(|x| x.to_string()))
                .collect::<Result<_, _>>()
                .map_err(other)?;
            println!("  [{}]", vals.join(", "));
        }
        println!("jacobian rows over {:?}:", cd.iter().map(|v| ctx.var_name(v)).collect::<Vec<_>>());
        for row in &jac {
            let vals: Vec<String> = cd
                .iter()
                .map(|v| row.coefficient(v).evaluate(&pt).map(|x| x.to_string()))
                .collect::<Result<_, _>>()
                .map_err(other)?;
            println!("  [{}]", vals.join(", "));
        }
        println!(
            "vessiot_dim {} symbol_dim {} complement_dim {}",
            component.vessiot_dim, component.symbol_dim, component.complement_dim
        );
    }
    Ok(())
}

fn cmd_series(file: &str, at: &str, seed: &str, truncate: u32) -> Result<(), CliError> {
    let sys = load(file)?;
    let ctx = &sys.context;
    let at_pt = parse_point(at, ctx)?;
    let mut x0 = Vec::new();
    for i in 0..ctx.n() {
        match at_pt.get(&VariableId::Indep(i)) {
            Some(v) => x0.push(v.clone()),
            None => return Err(other(format!("--at must assign {}", ctx.indep[i]))),
        }
    }
    let seed_pt: BTreeMap<VariableId, Rat> =
        if seed.trim().is_empty() { BTreeMap::new() } else { parse_point(seed, ctx)? };
    let simple = diff_thomas_decompose(&sys.to_differential_system()).map_err(other)?;
    if simple.is_empty() {
        return Err(other("inconsistent system"));
    }
    let mut last_err = None;
    for cand in &simple {
        match diffreg::series::series_solve(cand, &x0, &seed_pt, truncate) {
            Ok(series) => {
                for dep in 0..ctx.m() {
                    let mut entries: Vec<_> = series.coefficients[dep].iter().collect();
                    entries.sort_by(|a, b| a.0.cmp(b.0));
                    for (mu, c) in entries {
                        let v = VariableId::Jet { dep, idx: mu.clone() };
                        println!("{} = {}", parse::print_variable(ctx, &v), c);
                    }
                }
                return Ok(());
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(other(format!(
        "no simple system admits the seed: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

fn cmd_plotdata(file: &str, order: Option<u32>, count: usize) -> Result<(), CliError> {
    let sys = load(file)?;
    if sys.context.n() != 1 || sys.context.m() != 1 {
        return Err(other("plotdata requires one independent and one dependent variable"));
    }
    let order = order
        .or_else(|| sys.options.get("order").and_then(|s| s.parse().ok()))
        .unwrap_or(1);
    let r = &sys.ranking;
    let report = regdecomp_full(
        &sys.to_differential_system(),
        order,
        &reg_options(false, diffreg::arith::DEFAULT_FACTOR_BOUND),
    )?;
    println!("x,u,up,vx,vu,vup");
    let x = VariableId::Indep(0);
    let u = VariableId::jet(0, vec![0]);
    let up = VariableId::jet(0, vec![1]);
    for sysrep in &report.systems {
        for prime in &sysrep.primes {
            let gens = prime.prime.ideal.groebner().to_vec();
            let vess = vessiot_rows(&gens, 1, order, false).map_err(other)?;
            let (a_cols, b_cols, _, _) = aux_columns(1, 1, order, r);
            let mut ab = a_cols;
            ab.extend(b_cols);
            for c in &prime.components {
                for constituent in &c.constituents {
                    let sample = sample_solutions(constituent, count);
                    for pt in &sample.points {
                        let basis = kernel_basis(&vess, &ab, pt).map_err(other)?;
                        let Some(dir) = basis.first() else { continue };
                        let (a, b) = (&dir[0], &dir[1]);
                        let upv = &pt[&up];
                        println!(
                            "{},{},{},{},{},{}",
                            pt[&x],
                            pt[&u],
                            upv,
                            a,
                            a * upv,
                            b
                        );
                    }
                }
            }
        }
    }
    Ok(())
}
