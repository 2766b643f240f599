use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use opsw_core::experiments::{
    emit_csv, emit_long_csv, run_table, simulate_pool, verify_equivalences_with, SolutionSource, StdFormula,
    TableConfig, VerifyOptions,
};
use opsw_core::models::{
    build_dop, build_one_stage_ro, build_static_concurrent, build_static_sequential, MilpModel,
};
use opsw_core::solver::{
    branch_and_bound, evaluate_objective, parse_path, path_from_arcs, read_arc_assignment, SearchLimits,
    DEFAULT_NODE_LIMIT,
};
use opsw_core::uncertainty::scenario_pool;
use opsw_core::{ModelKind, Path, Policy, RobustSolution};

use crate::config::{self, FileConfig, Setup};
use crate::{
    CliError, ExportArgs, ImportArgs, ModelArg, SimulateArgs, SolveArgs, StdArg, TableArgs, ThetaArgs, VerifyArgs,
};

const DEFAULT_SCENARIOS: usize = 1000;
const DEFAULT_CAP: usize = 8;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn model_kind(model: ModelArg, theta: Option<f64>, relax: bool) -> Result<ModelKind, CliError> {
    let theta = if model == ModelArg::Dop { None } else { theta };
    ModelKind::from_tag(model.tag(), theta, relax).map_err(|e| usage(e.to_string()))
}

/// Thetas for `model`; the deterministic model takes none.
fn kinds(model: ModelArg, theta: &ThetaArgs, f: &FileConfig, relax: bool) -> Result<Vec<ModelKind>, CliError> {
    if model == ModelArg::Dop {
        return Ok(vec![ModelKind::Dop]);
    }
    config::thetas(theta, f, None)?.into_iter().map(|t| model_kind(model, Some(t), relax)).collect()
}

fn limits(flag: Option<u64>, f: &FileConfig) -> SearchLimits {
    SearchLimits { max_nodes: flag.or(f.limit_nodes).unwrap_or(DEFAULT_NODE_LIMIT) }
}

fn std_formula(flag: Option<StdArg>, f: &FileConfig) -> StdFormula {
    match flag.or(f.std) {
        Some(StdArg::Sample) => StdFormula::Sample,
        _ => StdFormula::Population,
    }
}

fn scenarios(flag: Option<usize>, f: &FileConfig) -> Result<usize, CliError> {
    match flag.or(f.scenarios).unwrap_or(DEFAULT_SCENARIOS) {
        0 => Err(usage("--scenarios must be at least 1")),
        n => Ok(n),
    }
}

fn theta_label(kind: ModelKind) -> String {
    kind.theta().map_or_else(String::new, |t| format!("_theta{t}"))
}

fn write_file(path: &FsPath, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Run(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))
}

fn out_requested(args_out: &Option<PathBuf>, f: &FileConfig) -> bool {
    args_out.is_some() || f.out.is_some()
}

pub fn solve(args: SolveArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let Setup { instance, weights, seed, out } = config::setup(&args.common, f)?;
    let model = args.model.or(f.model).ok_or_else(|| usage("--model is required"))?;
    let relax = args.relax || f.relax.unwrap_or(false);
    let limits = limits(args.limit_nodes, f);
    let save = out_requested(&args.common.out, f);
    for (k, kind) in kinds(model, &args.theta, f, relax)?.into_iter().enumerate() {
        let sol = branch_and_bound(&instance, &weights, kind, limits)?;
        if k > 0 {
            println!();
        }
        print!("{sol}");
        println!("seed = {seed}");
        if save {
            let file = out.join(format!("solution_{}{}.txt", kind.tag(), theta_label(kind)));
            write_file(&file, sol.to_record().as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(args: SimulateArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let solve = &args.solve;
    let Setup { instance, weights, seed, .. } = config::setup(&solve.common, f)?;
    let n = scenarios(args.scenarios, f)?;
    let path = match args.path.clone().or_else(|| f.path.clone()) {
        Some(text) => {
            let path = parse_path(&text).map_err(|e| usage(e.to_string()))?;
            Path::new(path.nodes().to_vec(), instance.len()).map_err(|e| usage(e.to_string()))?
        }
        None => {
            let model = solve.model.or(f.model).ok_or_else(|| usage("give --path or --model"))?;
            let relax = solve.relax || f.relax.unwrap_or(false);
            let kind = match kinds(model, &solve.theta, f, relax)?.as_slice() {
                [kind] => *kind,
                _ => return Err(usage("simulate takes a single --theta")),
            };
            let sol = branch_and_bound(&instance, &weights, kind, limits(solve.limit_nodes, f))?;
            println!("model = {kind}");
            println!("objective = {}", sol.objective);
            println!("optimal = {}", sol.optimal);
            sol.path
        }
    };
    let pool = scenario_pool(&weights, seed, n);
    let formula = std_formula(args.std, f);
    println!("path = {path}");
    println!("score = {}", path.score(&instance.scores()));
    println!("scenarios = {n}");
    println!("seed = {seed}");
    for policy in Policy::ALL {
        let summary = simulate_pool(&instance, &weights, &path, &pool, policy, formula)?;
        println!("{}_mean = {}", policy.name(), summary.mean);
        println!("{}_std = {}", policy.name(), summary.std);
    }
    Ok(ExitCode::SUCCESS)
}

fn load_solutions(dir: &FsPath) -> Result<Vec<RobustSolution>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Run(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| CliError::Run(format!("cannot read {}: {e}", p.display())))?;
            text.parse::<RobustSolution>().map_err(|e| CliError::Run(format!("{}: {e}", p.display())))
        })
        .collect()
}

pub fn table(args: TableArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let Setup { instance, weights, seed, out } = config::setup(&args.common, f)?;
    let source = match args.solutions.clone().or_else(|| f.solutions.clone()) {
        Some(dir) => SolutionSource::Imported(load_solutions(&dir)?),
        None => SolutionSource::BuiltIn(limits(args.limit_nodes, f)),
    };
    let cfg = TableConfig {
        theta_grid: config::thetas(&args.theta, f, Some(opsw_core::experiments::default_theta_grid()))?,
        n_scenarios: scenarios(args.scenarios, f)?,
        base_seed: seed,
        std: std_formula(args.std, f),
        source,
    };
    let rows = run_table(&instance, &weights, &cfg)?;
    let mut wide = Vec::new();
    emit_csv(&rows, &mut wide)?;
    let mut long = Vec::new();
    emit_long_csv(&rows, &mut long)?;
    let wide_path = out.join("table.csv");
    let long_path = out.join("table_long.csv");
    write_file(&wide_path, &wide)?;
    write_file(&long_path, &long)?;
    for row in rows.iter().filter(|r| !r.flags().is_empty()) {
        eprintln!("warning: theta {}: {}", row.theta, row.flags().join(", "));
    }
    println!("table = {}", wide_path.display());
    println!("long_table = {}", long_path.display());
    println!("scenarios = {}", cfg.n_scenarios);
    println!("seed = {seed}");
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let Setup { instance, weights, seed, .. } = config::setup(&args.common, f)?;
    let cap = args.cap.or(f.cap).unwrap_or(DEFAULT_CAP);
    if instance.len() > cap {
        return Err(usage(format!("instance has {} nodes, above the cap of {cap}", instance.len())));
    }
    let grid = config::thetas(&args.theta, f, Some(opsw_core::experiments::default_theta_grid()))?;
    let opts = VerifyOptions { size_cap: cap, big_m: args.big_m.or(f.big_m) };
    let report = verify_equivalences_with(&instance, &weights, &grid, opts)?;
    print!("{report}");
    println!("seed = {seed}");
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn build(instance: &opsw_core::Instance, w: &opsw_core::WeightModel, kind: ModelKind) -> Result<MilpModel, CliError> {
    Ok(match kind {
        ModelKind::Dop => build_dop(instance, w.dbar()),
        ModelKind::OneStageRo { theta } => build_one_stage_ro(instance, w, theta)?,
        ModelKind::StaticSequential { theta, relaxed } => build_static_sequential(instance, w, theta, relaxed)?,
        ModelKind::StaticConcurrent { theta } => build_static_concurrent(instance, w, theta)?,
        other => {
            return Err(usage(format!(
                "`{}` has no MILP of its own; export static-seq or static-conc, which share its optimum",
                other.tag()
            )))
        }
    })
}

pub fn export_lp(args: ExportArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let Setup { instance, weights, seed, out } = config::setup(&args.common, f)?;
    let model = args.model.or(f.model).ok_or_else(|| usage("--model is required"))?;
    let relax = args.relax || f.relax.unwrap_or(false);
    let alpha = weights.alpha().map_or_else(|| "none".to_string(), |a| a.to_string());
    for kind in kinds(model, &args.theta, f, relax)? {
        let lp = build(&instance, &weights, kind)?;
        let relaxed = if relax && matches!(kind, ModelKind::StaticSequential { .. }) { "_relaxed" } else { "" };
        let name =
            format!("{}{relaxed}{}_alpha{alpha}_L{}.lp", kind.tag(), theta_label(kind), instance.length_limit());
        let file = out.join(name);
        write_file(&file, opsw_core::models::export_lp(&lp).as_bytes())?;
        println!("{}", file.display());
    }
    println!("seed = {seed}");
    Ok(ExitCode::SUCCESS)
}

pub fn import_solution(args: ImportArgs, f: &FileConfig) -> Result<ExitCode, CliError> {
    let Setup { instance, weights, seed, out } = config::setup(&args.common, f)?;
    let model = args.model.or(f.model).ok_or_else(|| usage("--model is required"))?;
    let kind = match kinds(model, &args.theta, f, false)?.as_slice() {
        [kind] => *kind,
        _ => return Err(usage("import-solution takes a single --theta")),
    };
    let text = fs::read_to_string(&args.solution)
        .map_err(|e| CliError::Run(format!("cannot read {}: {e}", args.solution.display())))?;
    let arcs = read_arc_assignment(&text)?;
    let path = path_from_arcs(&arcs, instance.len())?;
    let objective = evaluate_objective(&instance, &weights, &path, kind)?;
    let sol = RobustSolution { path, kind, objective, optimal: true, nodes_explored: 0 };
    let file = out.join(format!("{}{}.txt", kind.tag(), theta_label(kind)));
    write_file(&file, sol.to_record().as_bytes())?;
    print!("{sol}");
    println!("seed = {seed}");
    println!("stored = {}", file.display());
    Ok(ExitCode::SUCCESS)
}
