use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pointpart::cycle_partition::{check_cycles, partition_cycles, CyclePartition, Polygon};
use pointpart::feasibility::{check_cycle_feasible, PartitionSpec};
use pointpart::oracle::{
    brute_force_clique_partition, brute_force_cycle_partition, brute_force_sat, OracleBudget, OracleOutcome,
};
use pointpart::sat_gadget::{audit_gadget, build_gadget, normalize_formula, parse_dimacs, Formula};
use pointpart::svg::{render_gadget, render_polygons};
use pointpart::visibility::build_pvg;
use pointpart::{Error, PointSet};

const OK: u8 = 0;
const NEGATIVE: u8 = 2;
const INPUT: u8 = 3;
const INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "pointpart", version, about = "Disjoint polygon partitions of planar point sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Point visibility graph as an edge list, with the blocker of each hidden pair.
    Pvg { points: PathBuf },
    /// Decide feasibility; prints a certificate when infeasible.
    Check {
        points: PathBuf,
        /// Comma-separated polygon sizes, or `triangles`.
        #[arg(long)]
        spec: String,
    },
    /// Build a partition and verify it before printing.
    Partition {
        points: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write an SVG picture here.
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Recheck a partition file against a point file.
    Verify { points: PathBuf, partition: PathBuf },
    /// Compile a DIMACS CNF into a clique-partition gadget.
    Gadget {
        cnf: PathBuf,
        #[arg(short, default_value_t = 5)]
        k: usize,
        /// Point file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Role map; defaults to `<output>.roles` when an output file is given.
        #[arg(long)]
        roles: Option<PathBuf>,
        /// Print the full audit report.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Exhaustive ground truth for small inputs.
    Oracle {
        input: PathBuf,
        /// Polygon partition with these sizes.
        #[arg(long, conflicts_with_all = ["clique", "sat"])]
        spec: Option<String>,
        /// Partition into k pairwise visible points.
        #[arg(long, conflicts_with = "sat")]
        clique: Option<usize>,
        /// Treat the input as DIMACS CNF and solve it.
        #[arg(long)]
        sat: bool,
        #[arg(long, default_value_t = 20_000_000)]
        max_nodes: u64,
    },
    /// SVG of a point set, optionally with a partition file drawn on it.
    Render {
        points: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) => NEGATIVE,
            Error::Audit(_) | Error::Construction(_) | Error::Exhausted | Error::MalformedPartition(_) => INTERNAL,
            _ => INPUT,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input_error(msg: String) -> Failure {
    Failure { code: INPUT, msg }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_points(path: &Path) -> Result<PointSet, Failure> {
    PointSet::parse(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_spec(s: &str, ps: &PointSet) -> Result<PartitionSpec, Failure> {
    if s.trim() == "triangles" {
        if ps.len() % 3 != 0 {
            return Err(input_error(format!("{} points do not split into triangles", ps.len())));
        }
        return Ok(PartitionSpec::triangles(ps.len() / 3)?);
    }
    Ok(PartitionSpec::parse(s)?)
}

fn format_partition(spec: &PartitionSpec, polys: &[Vec<usize>], tag: &str) -> String {
    let mut s = format!("# {tag}spec {spec}\n");
    for p in polys {
        let line: Vec<String> = p.iter().map(|i| i.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// One polygon per line; a `# spec` header is optional.
fn parse_partition(text: &str) -> Result<(Option<PartitionSpec>, Vec<Vec<usize>>), Failure> {
    let mut spec = None;
    let mut polys = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim().trim_start_matches("oracle:").trim();
            if let Some(s) = rest.strip_prefix("spec") {
                spec = Some(PartitionSpec::parse(s.trim()).map_err(|e| input_error(format!("line {}: {e}", n + 1)))?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let idx = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| input_error(format!("line {}: not an index: {t:?}", n + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        polys.push(idx);
    }
    Ok((spec, polys))
}

fn load_formula(path: &Path) -> Result<Formula, Failure> {
    parse_dimacs(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Pvg { points } => {
            let ps = load_points(&points)?;
            let g = build_pvg(&ps);
            let mut out = String::new();
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    match g.blocker(i, j) {
                        None => out.push_str(&format!("{i} {j}\n")),
                        Some(k) => out.push_str(&format!("# blocked {i} {j} by {k}\n")),
                    }
                }
            }
            print!("{out}");
            Ok(OK)
        }
        Cmd::Check { points, spec } => {
            let ps = load_points(&points)?;
            let spec = parse_spec(&spec, &ps)?;
            let v = check_cycle_feasible(&ps, &spec)?;
            if v.feasible {
                println!("feasible");
                Ok(OK)
            } else {
                println!("infeasible");
                println!("certificate {}", v.certificate);
                Ok(NEGATIVE)
            }
        }
        Cmd::Partition { points, spec, output, render } => {
            let ps = load_points(&points)?;
            let spec = parse_spec(&spec, &ps)?;
            let cp = partition_cycles(&ps, &spec)?;
            if let Err(d) = check_cycles(&ps, &cp) {
                return Err(Failure { code: INTERNAL, msg: format!("constructed partition failed verification: {d:?}") });
            }
            let polys: Vec<Vec<usize>> = cp.polygons.iter().map(|p| p.indices.clone()).collect();
            emit(output.as_deref(), &format_partition(&spec, &polys, ""))?;
            if let Some(r) = render {
                write(&r, &render_polygons(&ps, &polys))?;
            }
            Ok(OK)
        }
        Cmd::Verify { points, partition } => {
            let ps = load_points(&points)?;
            let (spec, polys) = parse_partition(&read(&partition)?)?;
            let spec = match spec {
                Some(s) => s,
                None => PartitionSpec::new(polys.iter().map(|p| p.len()).collect())?,
            };
            let cp = CyclePartition { polygons: polys.into_iter().map(|indices| Polygon { indices }).collect(), spec };
            match check_cycles(&ps, &cp) {
                Ok(()) => {
                    println!("valid");
                    Ok(OK)
                }
                Err(d) => {
                    println!("invalid: {d:?}");
                    Ok(NEGATIVE)
                }
            }
        }
        Cmd::Gadget { cnf, k, output, roles, verify, render } => {
            let f = load_formula(&cnf)?;
            let f = if f.check_normalized().is_ok() { f } else { normalize_formula(&f)?.formula };
            let g = build_gadget(&f, k)?;
            let mut text = format!("# K{k} gadget: {} clauses, {} variables\n", f.num_clauses(), f.num_vars);
            text.push_str(&g.points.to_text());
            emit(output.as_deref(), &text)?;
            let roles = roles.or_else(|| output.as_ref().map(|o| o.with_extension("roles")));
            if let Some(r) = roles {
                write(&r, &g.role_map())?;
            }
            if let Some(r) = render {
                write(&r, &render_gadget(&g, None))?;
            }
            if verify {
                let report = audit_gadget(&g);
                eprint!("{report}");
                if !report.passed() {
                    return Ok(INTERNAL);
                }
            }
            Ok(OK)
        }
        Cmd::Oracle { input, spec, clique, sat, max_nodes } => {
            let budget = OracleBudget { max_points: 4096, max_nodes };
            if sat {
                let f = load_formula(&input)?;
                return Ok(match brute_force_sat(&f)? {
                    Some(a) => {
                        let vals: Vec<String> =
                            a.iter().enumerate().map(|(i, &b)| format!("{}", if b { i as i64 + 1 } else { -(i as i64 + 1) })).collect();
                        println!("oracle: satisfiable");
                        println!("v {} 0", vals.join(" "));
                        OK
                    }
                    None => {
                        println!("oracle: unsatisfiable");
                        NEGATIVE
                    }
                });
            }
            let ps = load_points(&input)?;
            let (outcome, spec) = match (spec, clique) {
                (Some(s), _) => {
                    let spec = parse_spec(&s, &ps)?;
                    (brute_force_cycle_partition(&ps, &spec, budget)?, spec)
                }
                (None, Some(k)) => {
                    if k < 3 || ps.len() % k != 0 {
                        return Err(input_error(format!("{} points do not split into groups of {k}", ps.len())));
                    }
                    let spec = PartitionSpec::new(vec![k; ps.len() / k])?;
                    (brute_force_clique_partition(&ps, k, budget)?, spec)
                }
                (None, None) => return Err(input_error("oracle needs --spec, --clique or --sat".into())),
            };
            match outcome {
                OracleOutcome::Found(polys) => {
                    print!("{}", format_partition(&spec, &polys, "oracle: "));
                    Ok(OK)
                }
                OracleOutcome::NoSolution => {
                    println!("oracle: infeasible");
                    Ok(NEGATIVE)
                }
                OracleOutcome::Exhausted => {
                    println!("oracle: exhausted");
                    Ok(INTERNAL)
                }
            }
        }
        Cmd::Render { points, partition, output } => {
            let ps = load_points(&points)?;
            let polys = match partition {
                Some(p) => parse_partition(&read(&p)?)?.1,
                None => Vec::new(),
            };
            if let Some(bad) = polys.iter().flatten().find(|&&i| i >= ps.len()) {
                return Err(input_error(format!("index {bad} out of range")));
            }
            emit(output.as_deref(), &render_polygons(&ps, &polys))?;
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
