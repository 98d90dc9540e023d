use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use energysched_core::datagen::{self, MachinePreset, STANDARD_MULTIPLES};
use energysched_core::io::{self, ScheduleFile, ScheduleStats};
use energysched_core::modelgen::{self, sidecar_path, VarMap};
use energysched_core::{
    assemble_schedule, brute_force_schedule, build_graph, compute_spaces, compute_tec,
    emit_ilp_spaces, solve_exact_with, validate_schedule, BenchRecord, Instance, SolveOptions,
    SolveResult, SolveStatus, SpacesTable,
};

/// Exit status for infeasible instances and failed validation.
const EXIT_INFEASIBLE: u8 = 1;
/// Exit status for unreadable or invalid input.
const EXIT_BAD_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "energysched",
    version,
    about = "Energy-cost scheduling on a single machine with power states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances.
    Gen(GenArgs),
    /// Compute the switching-cost table of an instance.
    Preprocess(PreprocessArgs),
    /// Solve an instance to optimality.
    Solve(SolveArgs),
    /// Check a schedule against an instance.
    Validate(ValidateArgs),
    /// Write the binary program in LP format.
    EmitLp(EmitLpArgs),
    /// Turn an external solver's solution into a schedule.
    ImportSolution(ImportArgs),
    /// Solve every instance in a directory and write a CSV report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    jobs: usize,
    /// `nosby`, `twosby`, or `custom FILE`.
    #[arg(long, num_args = 1..=2, value_names = ["PRESET", "FILE"])]
    preset: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Horizon multiple of the total processing time, e.g. 1.6.
    #[arg(long, conflicts_with = "family")]
    multiple: Option<f64>,
    /// One instance per standard multiple (the default).
    #[arg(long)]
    family: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PreprocessArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    no_prune: bool,
    /// Also write the interval-state graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dp,
    Bruteforce,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Precomputed table from `preprocess`.
    #[arg(long)]
    phi: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct EmitLpArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    phi: Option<PathBuf>,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    out: PathBuf,
    /// Variable map; defaults to the model path with `.map.json`.
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args)]
struct ImportArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    model_map: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Preprocess(a) => preprocess(a),
        Command::Solve(a) => solve(a),
        Command::Validate(a) => validate(a),
        Command::EmitLp(a) => emit_lp(a),
        Command::ImportSolution(a) => import(a),
        Command::Bench(a) => bench(a),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let inst = io::read_instance(path).with_context(|| format!("reading {}", path.display()))?;
    inst.check()
        .with_context(|| format!("checking {}", path.display()))?;
    Ok(inst)
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_table(inst: &Instance, phi: Option<&Path>, parallel: usize) -> Result<SpacesTable> {
    match phi {
        Some(path) => {
            let g = build_graph(inst)?;
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SpacesTable::from_csv(&g, &text).with_context(|| format!("parsing {}", path.display()))
        }
        None => Ok(SpacesTable::for_instance(inst, parallel)?),
    }
}

fn time_limit(secs: Option<f64>) -> Result<Option<Duration>> {
    secs.map(|s| Duration::try_from_secs_f64(s).context("invalid --time-limit"))
        .transpose()
}

fn gen(a: GenArgs) -> Result<u8> {
    let (preset, label) = match a.preset.as_slice() {
        [name] if name.eq_ignore_ascii_case("custom") => bail!("--preset custom needs a FILE"),
        [name] => (
            MachinePreset::by_name(name).with_context(|| format!("unknown preset `{name}`"))?,
            name.to_ascii_lowercase(),
        ),
        [name, file] if name.eq_ignore_ascii_case("custom") => {
            let preset = io::read_preset(Path::new(file))
                .with_context(|| format!("reading preset {file}"))?;
            (preset, "custom".to_string())
        }
        [] => bail!("--preset is required"),
        _ => bail!("only `--preset custom FILE` takes a file"),
    };
    let multiples = match a.multiple {
        Some(m) if m.is_finite() && m > 0.0 => vec![(m * 100.0).round() as u32],
        Some(m) => bail!("invalid multiple {m}"),
        None => STANDARD_MULTIPLES.to_vec(),
    };
    let family = datagen::generate_family_with(&preset, a.jobs, a.seed, &multiples);
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for inst in &family {
        let path = a.out.join(datagen::file_name(&label, inst, a.seed));
        io::write_instance(&path, inst).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn preprocess(a: PreprocessArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let g = build_graph(&inst)?;
    if let Some(dot) = &a.dot {
        write(dot, &g.to_dot(inst.states()))?;
    }
    let start = Instant::now();
    let mut table = match compute_spaces(&g, a.parallel) {
        Ok(t) => t,
        Err(energysched_core::Error::NoProcessingWindow) => {
            eprintln!("infeasible: no processing window");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };
    if !a.no_prune {
        table = table.apply_pruning(&inst);
    }
    let elapsed = start.elapsed();
    write(&a.out, &table.to_csv())?;
    let (t_on, t_off) = table.window();
    println!(
        "window {t_on}..{t_off}, {} pairs, {} pruned, {:.3}s",
        table.entries().count(),
        table.pruned_count(),
        elapsed.as_secs_f64()
    );
    Ok(0)
}

fn brute_force(inst: &Instance, table: &SpacesTable) -> Result<SolveResult> {
    let start = Instant::now();
    let found = brute_force_schedule(inst, table)?;
    let mut stats = energysched_core::solver::SolveStats::default();
    let Some((tec, placement)) = found else {
        stats.wall_time = start.elapsed();
        return Ok(SolveResult {
            tec: 0,
            lower_bound: 0,
            status: SolveStatus::Infeasible,
            schedule: None,
            placement: Vec::new(),
            stats,
        });
    };
    let schedule = assemble_schedule(inst, &placement, table)?;
    stats.wall_time = start.elapsed();
    Ok(SolveResult {
        tec,
        lower_bound: tec,
        status: SolveStatus::Optimal,
        schedule: Some(schedule),
        placement,
        stats,
    })
}

fn solve_with(
    inst: &Instance,
    table: &SpacesTable,
    method: Method,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    match method {
        Method::Dp => Ok(solve_exact_with(inst, table, opts)?),
        Method::Bruteforce => brute_force(inst, table),
    }
}

fn solve(a: SolveArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let table = match load_table(&inst, a.phi.as_deref(), a.threads) {
        Ok(t) => t,
        Err(e)
            if matches!(
                e.downcast_ref(),
                Some(energysched_core::Error::NoProcessingWindow)
            ) =>
        {
            eprintln!("infeasible: no processing window");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e),
    };
    let opts = SolveOptions {
        time_limit: time_limit(a.time_limit)?,
        threads: a.threads,
        ..Default::default()
    };
    let r = solve_with(&inst, &table, a.method, &opts)?;
    let Some(schedule) = &r.schedule else {
        eprintln!("infeasible: the jobs do not fit in the processing window");
        return Ok(EXIT_INFEASIBLE);
    };
    println!("TEC {}", r.tec);
    if r.status != SolveStatus::Optimal {
        println!("status {} lower bound {}", r.status.as_str(), r.lower_bound);
    }
    if let Some(out) = &a.out {
        let mut file = ScheduleFile::new(&inst, schedule, r.tec);
        file.status = Some(r.status.as_str().into());
        file.lower_bound = Some(r.lower_bound);
        file.stats = Some(ScheduleStats {
            states_expanded: r.stats.states_expanded,
            wall_seconds: r.stats.wall_time.as_secs_f64(),
        });
        write(out, &(file.to_json() + "\n"))?;
    }
    Ok(0)
}

fn validate(a: ValidateArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let text = fs::read_to_string(&a.schedule)
        .with_context(|| format!("reading {}", a.schedule.display()))?;
    let file = ScheduleFile::from_json(&text)
        .with_context(|| format!("parsing {}", a.schedule.display()))?;
    let sched = file.to_schedule(&inst)?;
    let violations = validate_schedule(&inst, &sched);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{v}");
        }
        println!("infeasible: {} violation(s)", violations.len());
        return Ok(EXIT_INFEASIBLE);
    }
    let tec = compute_tec(&inst, &sched)?;
    if tec != file.tec {
        eprintln!("recorded TEC {} but the schedule costs {tec}", file.tec);
        return Ok(EXIT_INFEASIBLE);
    }
    println!("feasible, TEC {tec}");
    Ok(0)
}

fn emit_lp(a: EmitLpArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let mut table = load_table(&inst, a.phi.as_deref(), 1)?;
    let prune = !a.no_prune;
    if prune && a.phi.is_none() {
        table = table.apply_pruning(&inst);
    }
    let model = match emit_ilp_spaces(&inst, &table, prune) {
        Ok(m) => m,
        Err(
            e @ (energysched_core::Error::InfeasibleWindow { .. }
            | energysched_core::Error::Uncoverable { .. }),
        ) => {
            eprintln!("infeasible: {e}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };
    let map = a.map.unwrap_or_else(|| sidecar_path(&a.out));
    write(&a.out, &model.lp_text)?;
    write(&map, &(model.varmap.to_json() + "\n"))?;
    println!(
        "{} variables, constant term {}; map in {}",
        model.varmap.variables.len(),
        model.varmap.constant_term,
        map.display()
    );
    Ok(0)
}

fn import(a: ImportArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let map_text = fs::read_to_string(&a.model_map)
        .with_context(|| format!("reading {}", a.model_map.display()))?;
    let varmap = VarMap::from_json(&map_text)
        .with_context(|| format!("parsing {}", a.model_map.display()))?;
    let sol_text = fs::read_to_string(&a.solution)
        .with_context(|| format!("reading {}", a.solution.display()))?;
    let assignment = modelgen::parse_solution(&sol_text);
    let table = SpacesTable::for_instance(&inst, 1)?;
    let r = match modelgen::import_solution(&inst, &table, &varmap, &assignment) {
        Ok(r) => r,
        Err(
            e @ (energysched_core::Error::CoverViolated { .. }
            | energysched_core::Error::AssignmentViolated { .. }
            | energysched_core::Error::NonIntegral { .. }
            | energysched_core::Error::TecMismatch { .. }),
        ) => {
            eprintln!("rejected: {e}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };
    let schedule = r.schedule.as_ref().expect("imported schedule");
    write(
        &a.out,
        &(ScheduleFile::new(&inst, schedule, r.tec).to_json() + "\n"),
    )?;
    println!("TEC {}", r.tec);
    Ok(0)
}

fn bench(a: BenchArgs) -> Result<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(&a.dir)
        .with_context(|| format!("reading {}", a.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && !p.to_string_lossy().ends_with(".map.json")
        })
        .collect();
    files.sort();
    let opts = SolveOptions {
        time_limit: time_limit(a.time_limit)?,
        ..Default::default()
    };
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["instance", "n", "h", "ub", "lb", "t", "gap"])?;
    for path in &files {
        let inst = read_instance(path)?;
        let start = Instant::now();
        let table = match SpacesTable::for_instance(&inst, a.parallel) {
            Ok(t) => t.apply_pruning(&inst),
            Err(energysched_core::Error::NoProcessingWindow) => {
                eprintln!("{}: no processing window, skipped", path.display());
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let r = solve_with(&inst, &table, a.method, &opts)?;
        let t = start.elapsed().as_secs_f64();
        let id = path.file_stem().unwrap_or_default().to_string_lossy();
        if r.status == SolveStatus::Infeasible {
            eprintln!("{id}: infeasible, skipped");
            continue;
        }
        let rec = BenchRecord::new(
            id.as_ref(),
            inst.jobs().len(),
            inst.horizon(),
            r.tec,
            r.lower_bound,
            t,
        );
        out.write_record([
            rec.instance.clone(),
            rec.n.to_string(),
            rec.h.to_string(),
            rec.ub.to_string(),
            rec.lb.to_string(),
            format!("{:.3}", rec.t),
            format!("{:.2}", rec.gap),
        ])?;
        println!("{id}: TEC {} gap {:.2}", rec.ub, rec.gap);
    }
    let bytes = out.into_inner().context("flushing CSV")?;
    write(&a.out, &String::from_utf8(bytes)?)?;
    Ok(0)
}
