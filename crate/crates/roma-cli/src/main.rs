//! `roma` command-line tool: checking, solving, counting, fewest-clue search,
//! SAT reduction, decoding, rendering and benchmarks.
//!
//! Exit codes: 0 solvable or ok, 1 unsolvable, 2 usage error, 3 input error,
//! 4 resource cap reached.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use roma::bench::{random_board, random_cnf, twobox_board, twobox_node_bound, BenchRow, CSV_HEADER};
use roma::board::{
    format_assignment, is_valid, parse_assignment, parse_board, render, Assignment, BoardSpec, RenderFormat,
};
use roma::dp::{dp_run_with, DpMode, DpOptions};
use roma::oracle::{fcp_bruteforce_capped, oracle_enumerate_capped, OracleError, DEFAULT_CAP};
use roma::prop::{search, SearchMode};
use roma::sat2roma::{compile, decode, parse_dimacs, VarMap};

#[derive(Parser)]
#[command(name = "roma", version, about = "Exact engines and a SAT reduction for the Roma arrow puzzle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Prop,
    Dp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Twobox,
    Reduction,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a board, or a solution of it
    Check {
        file: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Print one solution grid
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Prop)]
        method: Method,
        /// Largest number of empty cells the oracle enumerates
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Print the exact number of solutions
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Prop)]
        method: Method,
        /// Largest number of empty cells the oracle enumerates
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Print whether the board has exactly one solution
    Unique { file: PathBuf },
    /// Find at most K hint cells that leave exactly one solution
    Fcp {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Compile a DIMACS CNF file into a board and a variable map
    Reduce {
        cnf: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Variable map path; defaults to the output path with extension `varmap`
        #[arg(long)]
        varmap: Option<PathBuf>,
    },
    /// Read the truth assignment encoded in a solution of a compiled board
    Decode {
        file: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        varmap: PathBuf,
    },
    /// Draw a board, optionally filled with a solution
    Render {
        file: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Run an instance family and print CSV measurements
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        /// Empty cells (twobox), variables (reduction) or side length (random)
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Engines to run; the family's default when omitted
        #[arg(long, value_enum, value_delimiter = ',')]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per size for the generated families
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Unsolvable(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Unsolvable(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Cap(_) => 4,
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_board(path: &Path) -> Result<BoardSpec, Failure> {
    parse_board(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_solution(path: &Path, spec: &BoardSpec) -> Result<Assignment, Failure> {
    parse_assignment(&read(path)?, spec.n()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::CapExceeded { .. } => Failure::Cap(e.to_string()),
        OracleError::Unsatisfiable => Failure::Unsolvable("unsolvable".into()),
    }
}

/// Count (when `count`) and one witness with the chosen engine.
fn run_engine(
    spec: &BoardSpec,
    method: Method,
    count: bool,
    cap: usize,
) -> Result<(Option<u128>, Option<Assignment>, u64), Failure> {
    match method {
        Method::Oracle => {
            let s = oracle_enumerate_capped(spec, Some(1), cap).map_err(oracle_failure)?;
            Ok((Some(s.count), s.solutions.into_iter().next(), s.leaves))
        }
        Method::Prop => {
            let r = search(spec, if count { SearchMode::Count } else { SearchMode::First });
            Ok((r.count, r.witness, r.nodes))
        }
        Method::Dp => {
            let mode = if count { DpMode::Count } else { DpMode::Decide };
            let (r, stats) = dp_run_with(spec, mode, DpOptions::default()).map_err(|e| Failure::Cap(e.to_string()))?;
            let work = stats.configs_per_row.iter().map(|&c| c as u64).sum();
            Ok((r.count, r.witness, work))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file, solution } => {
            let spec = load_board(&file)?;
            match solution {
                None => Ok(format!("ok: n={} k={} boxes={}\n", spec.n(), spec.k(), spec.partition().num_boxes())),
                Some(s) => {
                    let a = load_solution(&s, &spec)?;
                    let v = is_valid(&spec, &a);
                    if v.is_empty() {
                        Ok("ok\n".into())
                    } else {
                        Err(Failure::Unsolvable(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")))
                    }
                }
            }
        }
        Command::Solve { file, method, cap } => {
            let spec = load_board(&file)?;
            match run_engine(&spec, method, false, cap)?.1 {
                Some(a) => Ok(format_assignment(&a)),
                None => Err(Failure::Unsolvable("unsolvable".into())),
            }
        }
        Command::Count { file, method, cap } => {
            let spec = load_board(&file)?;
            let c = run_engine(&spec, method, true, cap)?.0.unwrap_or(0);
            if c == 0 {
                println!("0");
                Err(Failure::Unsolvable("unsolvable".into()))
            } else {
                Ok(format!("{c}\n"))
            }
        }
        Command::Unique { file } => {
            let spec = load_board(&file)?;
            match search(&spec, SearchMode::AtMostTwo).count.unwrap_or(0) {
                0 => {
                    println!("no");
                    Err(Failure::Unsolvable("unsolvable".into()))
                }
                1 => Ok("yes\n".into()),
                _ => Ok("no\n".into()),
            }
        }
        Command::Fcp { file, k, cap } => {
            let spec = load_board(&file)?;
            match fcp_bruteforce_capped(&spec, k, cap).map_err(oracle_failure)? {
                None => Ok("none\n".into()),
                Some(h) if h.is_empty() => Ok("already unique\n".into()),
                Some(h) => Ok(h.iter().map(|(c, v)| format!("{} {} {}\n", c.x, c.y, v.ascii())).collect()),
            }
        }
        Command::Reduce { cnf, output, varmap } => {
            let f = parse_dimacs(&read(&cnf)?).map_err(|e| Failure::Input(format!("{}: {e}", cnf.display())))?;
            let (spec, vm) = compile(&f);
            let vm_path = varmap.unwrap_or_else(|| output.with_extension("varmap"));
            write(&output, &roma::board::serialize_board(&spec))?;
            write(&vm_path, &vm.to_text())?;
            Ok(format!("wrote {} (n={} k={}) and {}\n", output.display(), spec.n(), spec.k(), vm_path.display()))
        }
        Command::Decode { file, solution, varmap } => {
            let spec = load_board(&file)?;
            let a = load_solution(&solution, &spec)?;
            let vm =
                VarMap::parse(&read(&varmap)?).map_err(|e| Failure::Input(format!("{}: {e}", varmap.display())))?;
            let v = is_valid(&spec, &a);
            if let Some(first) = v.first() {
                return Err(Failure::Input(format!("{}: not a solution: {first}", solution.display())));
            }
            let values = decode(&spec, &vm, &a).map_err(|e| Failure::Input(e.to_string()))?;
            let lits: Vec<String> = values
                .iter()
                .enumerate()
                .map(|(i, &t)| if t { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                .collect();
            Ok(format!("v {} 0\n", lits.join(" ")))
        }
        Command::Render { file, solution, format } => {
            let spec = load_board(&file)?;
            let a = solution.map(|s| load_solution(&s, &spec)).transpose()?;
            let f = match format {
                Format::Ascii => RenderFormat::Ascii,
                Format::Svg => RenderFormat::Svg,
            };
            Ok(render(&spec, a.as_ref(), f))
        }
        Command::Bench { family, sizes, methods, seed, instances } => bench(family, &sizes, &methods, seed, instances),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Oracle => "oracle",
        Method::Prop => "prop",
        Method::Dp => "dp",
    }
}

fn bench(family: Family, sizes: &[usize], methods: &[Method], seed: u64, instances: usize) -> Outcome {
    let methods: Vec<Method> = if !methods.is_empty() {
        methods.to_vec()
    } else if family == Family::Random {
        vec![Method::Oracle, Method::Prop, Method::Dp]
    } else {
        vec![Method::Prop]
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let mut boards: Vec<(String, BoardSpec, Option<f64>)> = Vec::new();
    for &size in sizes {
        match family {
            Family::Twobox => {
                if size % 2 != 0 {
                    return Err(Failure::Usage(format!("twobox sizes must be even, got {size}")));
                }
                boards.push((format!("twobox-k{size}"), twobox_board(size / 2), Some(twobox_node_bound(size))));
            }
            Family::Reduction => {
                if size == 0 {
                    return Err(Failure::Usage("reduction sizes must be positive".into()));
                }
                for i in 0..instances {
                    let (spec, _) = compile(&random_cnf(size, size, &mut rng));
                    boards.push((format!("reduction-v{size}-{i}"), spec, None));
                }
            }
            Family::Random => {
                if size == 0 {
                    return Err(Failure::Usage("random sizes must be positive".into()));
                }
                for i in 0..instances {
                    boards.push((format!("random-n{size}-{i}"), random_board(size, 0.3, i % 2 == 0, &mut rng), None));
                }
            }
        }
    }
    let mut out = format!("{CSV_HEADER}\n");
    for (id, spec, bound) in &boards {
        for &m in &methods {
            let t = Instant::now();
            let r = run_engine(spec, m, true, DEFAULT_CAP);
            let wall_ms = t.elapsed().as_secs_f64() * 1000.0;
            match r {
                Ok((count, _, work)) => {
                    let row = BenchRow {
                        instance: id.clone(),
                        n: spec.n(),
                        k: spec.k(),
                        method: method_name(m).into(),
                        work,
                        wall_ms,
                        count,
                        ratio: bound.filter(|_| m == Method::Prop).map(|b| work as f64 / b),
                    };
                    out.push_str(&row.csv());
                    out.push('\n');
                }
                Err(e) => eprintln!("{id} {}: skipped: {e}", method_name(m)),
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("roma: {f}");
            ExitCode::from(f.code())
        }
    }
}
