use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use levelmat::bounds;
use levelmat::constructions::{self, ConstructionError};
use levelmat::format::{parse_matrix, write_matrix};
use levelmat::irreducible::{self, EllError, HilbertError, SearchLimits};
use levelmat::polytope::{self, BasicFeasibleSolution};
use levelmat::vsp::{self, Irreducibility, Multipartition, VectorSpace};
use levelmat::{Int, KMatrix, Rat};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "levelmat", version, about = "Level k-matrices, irreducibility and leveler cones")]
struct Cli {
    /// Print {status, command, data} as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide levelness and reducibility of a matrix file.
    Check {
        file: PathBuf,
        /// Split into irreducible level blocks.
        #[arg(long)]
        decompose: bool,
        /// Fail with exit code 1 when the matrix is not level.
        #[arg(long)]
        require_level: bool,
    },
    /// Hilbert basis of the leveler cone of a matrix.
    Hilbert(HilbertArgs),
    /// Largest row count of an irreducible k-matrix with n columns.
    Ell {
        n: usize,
        k: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Evaluate every bound at (n, k).
    Bounds {
        n: u64,
        k: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Build a matrix: identity N | universal N K | prime-block X | a-of-h FILE | lambert K.
    Construct { kind: String, params: Vec<String> },
    /// Basic feasible solutions of {x >= 0 : A^T x = 1}, optionally decomposing a point.
    Bfs {
        file: PathBuf,
        /// Comma-separated rationals, e.g. 1/2,1/2,1/2.
        #[arg(long)]
        point: Option<String>,
    },
    /// Multipartitions of V(n, q).
    Vsp {
        #[command(subcommand)]
        command: VspCommand,
    },
}

#[derive(Args)]
struct HilbertArgs {
    file: Option<PathBuf>,
    /// Use the universal matrix U(N, K) instead of a file.
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with = "file")]
    universal: Option<Vec<u32>>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    max_nodes: Option<u64>,
}

#[derive(Subcommand)]
enum VspCommand {
    /// List the 1-dimensional subspaces.
    Lines { n: usize, q: u32 },
    /// Verify a partition file and classify it.
    Check {
        file: PathBuf,
        #[arg(long)]
        q: u32,
    },
    /// Every lambda-partition of V(n, q).
    Enumerate {
        n: usize,
        q: u32,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Bounds on irreducible multipartitions and level families.
    Bounds { n: u64, q: u32 },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Hilbert(_) => "hilbert",
            Command::Ell { .. } => "ell",
            Command::Bounds { .. } => "bounds",
            Command::Construct { .. } => "construct",
            Command::Bfs { .. } => "bfs",
            Command::Vsp { .. } => "vsp",
        }
    }
}

struct Output {
    text: String,
    data: Value,
}

enum Failure {
    /// Bad arguments or unparsable input; exit 2.
    Usage(String),
    /// Valid input the operation rejects; exit 1.
    Domain { text: String, data: Value },
}

fn domain(msg: impl ToString) -> Failure {
    let text = msg.to_string();
    Failure::Domain { data: json!({ "message": text }), text }
}

fn usage(msg: impl ToString) -> Failure {
    Failure::Usage(msg.to_string())
}

type CmdResult = Result<Output, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<KMatrix, Failure> {
    parse_matrix(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn matrix_json(m: &KMatrix) -> Value {
    json!({ "k": m.k(), "rows": m.to_rows() })
}

fn int_json(v: &Int) -> Value {
    Value::String(v.to_string())
}

fn rats_json(v: &[Rat]) -> Value {
    v.iter().map(|r| Value::String(r.to_string())).collect()
}

fn rats_text(v: &[Rat]) -> String {
    v.iter().map(Rat::to_string).collect::<Vec<_>>().join(",")
}

/// 1-based index set, e.g. `{1,3}`.
fn index_set(idx: &[usize]) -> String {
    format!("{{{}}}", idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn inline_matrix(m: &KMatrix) -> String {
    m.iter_rows()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" / ")
}

fn cmd_check(file: &Path, decompose: bool, require_level: bool) -> CmdResult {
    let m = read_matrix(file)?;
    let Some(t) = m.is_level() else {
        let sums = m.column_sums();
        let text = format!(
            "not level; column sums {}",
            sums.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        );
        let data = json!({ "level": false, "column_sums": sums });
        if require_level {
            return Err(Failure::Domain { text, data });
        }
        return Ok(Output { text, data });
    };
    let witness = irreducible::is_reducible(&m).map_err(domain)?;
    let mut text = format!("level t={t}; ");
    let mut data = json!({ "level": true, "sum": t, "rows": m.rows() });
    match &witness {
        None => {
            text.push_str("irreducible");
            data["reducible"] = json!(false);
        }
        Some(w) => {
            write!(text, "reducible; witness rows {} with sum {}", index_set(&w.rows), w.sum).unwrap();
            data["reducible"] = json!(true);
            data["witness"] = json!({ "rows": one_based(&w.rows), "sum": w.sum });
        }
    }
    if decompose {
        let blocks = irreducible::decompose_rows(&m).map_err(domain)?;
        write!(text, "\nblocks: {}", blocks.len()).unwrap();
        let mut jb = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            let sub = m.select_rows(b).map_err(domain)?;
            let sum = sub.is_level().unwrap_or(0);
            write!(text, "\nblock {}: rows {} sum {}: {}", i + 1, index_set(b), sum, inline_matrix(&sub)).unwrap();
            jb.push(json!({ "rows": one_based(b), "sum": sum }));
        }
        data["blocks"] = Value::Array(jb);
    }
    Ok(Output { text, data })
}

fn limits(max_nodes: Option<u64>) -> SearchLimits {
    max_nodes.map_or_else(SearchLimits::default, |max_nodes| SearchLimits { max_nodes })
}

fn cmd_hilbert(args: &HilbertArgs) -> CmdResult {
    let a = match (&args.file, &args.universal) {
        (Some(f), None) => read_matrix(f)?,
        (None, Some(nk)) => {
            let (n, k) = (nk[0] as usize, nk[1]);
            if n == 0 || k == 0 {
                return Err(usage("--universal needs N >= 1 and K >= 1"));
            }
            constructions::universal_matrix(n, k)
        }
        _ => return Err(usage("give a matrix file or --universal N K")),
    };
    let (budget, source) = match args.budget {
        Some(b) => (b, "user"),
        None => {
            let (b, src) = bounds::search_budget(a.cols() as u64, u64::from(a.k().max(1)));
            let b = u64::try_from(b).map_err(|_| domain("default budget is too large; pass --budget"))?;
            (b, src)
        }
    };
    let render = |basis: &irreducible::HilbertBasis, partial: bool| {
        let mut text = format!("budget {budget} ({source})");
        let mut gens = Vec::new();
        for g in &basis.generators {
            let x = g.x.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            write!(text, "\n{x} : {} : {}", g.alpha, g.row_count()).unwrap();
            gens.push(json!({ "x": g.x, "alpha": g.alpha, "rows": g.row_count() }));
        }
        write!(
            text,
            "\ngenerators: {}; max rowcount: {}{}",
            basis.generators.len(),
            basis.max_row_count(),
            if partial { "; partial" } else { "" }
        )
        .unwrap();
        let data = json!({
            "budget": budget,
            "budget_source": source,
            "matrix": matrix_json(&a),
            "generators": gens,
            "max_row_count": basis.max_row_count(),
            "partial": partial,
        });
        (text, data)
    };
    match irreducible::hilbert_basis_with(&a, budget, &limits(args.max_nodes)) {
        Ok(basis) => {
            let (text, data) = render(&basis, false);
            Ok(Output { text, data })
        }
        Err(HilbertError::NodeLimit { limit, partial }) => {
            let (mut text, mut data) = render(&partial, true);
            write!(text, "\nnode limit {limit} exceeded").unwrap();
            data["node_limit"] = json!(limit);
            Err(Failure::Domain { text, data })
        }
        Err(e) => Err(domain(e)),
    }
}

fn cmd_ell(n: usize, k: u32, budget: Option<u64>, max_nodes: Option<u64>) -> CmdResult {
    let r = match irreducible::ell_search_with(n, k, budget, &limits(max_nodes)) {
        Ok(r) => r,
        Err(e @ EllError::Parameters { .. }) => return Err(usage(e)),
        Err(EllError::Resource { nodes, budget, lower_bound }) => {
            return Err(Failure::Domain {
                text: format!("search incomplete after {nodes} nodes (budget {budget}); ell({n},{k}) >= {lower_bound}"),
                data: json!({ "n": n, "k": k, "budget": budget, "lower_bound": lower_bound, "partial": true }),
            })
        }
        Err(e) => return Err(domain(e)),
    };
    let mut text = format!(
        "ell({n},{k}) = {}; extremal classes: {}\nbudget {} ({}); generators: {}",
        r.value,
        r.extremal_classes.len(),
        r.budget,
        r.budget_source,
        r.generator_count
    );
    for (i, c) in r.extremal_classes.iter().enumerate() {
        write!(text, "\nclass {}: {}", i + 1, inline_matrix(&c.matrix)).unwrap();
    }
    let data = json!({
        "n": n,
        "k": k,
        "value": r.value,
        "budget": r.budget,
        "budget_source": r.budget_source,
        "generator_count": r.generator_count,
        "extremal_classes": r.extremal_classes.iter().map(|c| c.matrix.to_rows()).collect::<Vec<_>>(),
    });
    Ok(Output { text, data })
}

fn cmd_bounds(n: u64, k: u64, eps: f64) -> CmdResult {
    let r = bounds::report(n, k, eps).map_err(usage)?;
    let opt = |v: &Option<Int>| v.as_ref().map_or(Value::Null, int_json);
    let opt_text = |v: &Option<Int>| v.as_ref().map_or_else(|| "n/a".to_string(), Int::to_string);
    let mut text = String::new();
    writeln!(text, "n={n} k={k}").unwrap();
    writeln!(text, "ub_main = {}", opt_text(&r.ub_main)).unwrap();
    writeln!(text, "ub_lambert = {}", opt_text(&r.ub_lambert)).unwrap();
    writeln!(text, "ub_ub1 = {}", r.ub_ub1).unwrap();
    writeln!(text, "ub_ub2 = {}", opt_text(&r.ub_ub2)).unwrap();
    writeln!(text, "ub_lg = {}", r.ub_lg).unwrap();
    writeln!(text, "hadamard = {}", r.hadamard).unwrap();
    writeln!(text, "ah_row_count = {}", r.ah_row_count).unwrap();
    writeln!(text, "search_budget = {} ({})", r.search_budget, r.search_budget_source).unwrap();
    write!(text, "lb(eps={}) = {:.6e}", r.lb_eps, r.lb_value).unwrap();
    let data = json!({
        "n": n,
        "k": k,
        "ub_main": opt(&r.ub_main),
        "ub_lambert": opt(&r.ub_lambert),
        "ub_ub1": int_json(&r.ub_ub1),
        "ub_ub2": opt(&r.ub_ub2),
        "ub2_exponent": r.ub2_exponent,
        "ub_lg": int_json(&r.ub_lg),
        "hadamard": int_json(&r.hadamard),
        "ah_row_count": int_json(&r.ah_row_count),
        "search_budget": int_json(&r.search_budget),
        "search_budget_source": r.search_budget_source,
        "lb_eps": r.lb_eps,
        "lb_value": r.lb_value,
        "formulas": r.formulas_used,
    });
    Ok(Output { text, data })
}

fn param<T: FromStr>(params: &[String], i: usize, name: &str) -> Result<T, Failure> {
    let raw = params.get(i).ok_or_else(|| usage(format!("missing parameter {name}")))?;
    raw.parse().map_err(|_| usage(format!("bad {name} '{raw}'")))
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::Parameters(_) => usage(e),
        e => domain(e),
    }
}

fn matrix_output(m: &KMatrix, header: String, mut data: Value) -> Output {
    data["matrix"] = matrix_json(m);
    Output { text: format!("{header}{}", write_matrix(m).trim_end()), data }
}

fn cmd_construct(kind: &str, params: &[String]) -> CmdResult {
    let arity = match kind {
        "identity" | "prime-block" | "a-of-h" | "lambert" => 1,
        "universal" => 2,
        _ => return Err(usage(format!("unknown construction '{kind}'"))),
    };
    if params.len() != arity {
        return Err(usage(format!("{kind} takes {arity} parameter(s), got {}", params.len())));
    }
    match kind {
        "identity" => {
            let n: usize = param(params, 0, "N")?;
            if n == 0 {
                return Err(usage("N must be positive"));
            }
            let m = constructions::identity(n);
            Ok(matrix_output(&m, format!("# identity n={n}\n"), json!({ "kind": kind })))
        }
        "universal" => {
            let n: usize = param(params, 0, "N")?;
            let k: u32 = param(params, 1, "K")?;
            if n == 0 || k == 0 {
                return Err(usage("N and K must be positive"));
            }
            let m = constructions::universal_matrix(n, k);
            Ok(matrix_output(&m, format!("# universal n={n} k={k} rows={}\n", m.rows()), json!({ "kind": kind })))
        }
        "prime-block" => {
            let x: u64 = param(params, 0, "X")?;
            let (spec, m) = constructions::prime_block(x).map_err(construction_failure)?;
            let primes = spec.primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let header = format!(
                "# prime block x={x}: primes {primes}; n={}; m={}; column sum {}\n",
                spec.n, spec.m, spec.product
            );
            let data = json!({
                "kind": kind,
                "x": x,
                "primes": spec.primes,
                "n": spec.n,
                "m": int_json(&spec.m),
                "product": int_json(&spec.product),
            });
            Ok(matrix_output(&m, header, data))
        }
        "a-of-h" => {
            let h = read_matrix(Path::new(&params[0]))?;
            let s = constructions::a_of_h(&h).map_err(construction_failure)?;
            let header = format!(
                "# A(H): m={} (expected {}); r_h={}; h={}; round trip {}\n",
                s.matrix.rows(),
                s.expected_m,
                s.r_h,
                rats_text(&s.h),
                if s.round_trips() { "ok" } else { "FAILED" }
            );
            let data = json!({
                "kind": kind,
                "m": s.matrix.rows(),
                "expected_m": int_json(&s.expected_m),
                "r_h": int_json(&s.r_h),
                "h": rats_json(&s.h),
                "round_trips": s.round_trips(),
            });
            Ok(matrix_output(&s.matrix, header, data))
        }
        "lambert" => {
            let k: u32 = param(params, 0, "K")?;
            let classes = constructions::lambert_extremals(k).map_err(construction_failure)?;
            let mut text = format!("# {} classes of irreducible {k}-matrices with 2 columns and {} rows", classes.len(), 2 * k - 1);
            for (i, c) in classes.iter().enumerate() {
                write!(text, "\n\n# class {}\n{}", i + 1, write_matrix(&c.matrix).trim_end()).unwrap();
            }
            let data = json!({
                "kind": kind,
                "k": k,
                "classes": classes.iter().map(|c| c.matrix.to_rows()).collect::<Vec<_>>(),
            });
            Ok(Output { text, data })
        }
        _ => unreachable!(),
    }
}

fn bfs_json(b: &BasicFeasibleSolution) -> Value {
    json!({ "index_set": one_based(&b.index_set), "point": rats_json(&b.point), "scale": int_json(&b.scale) })
}

fn bfs_text(b: &BasicFeasibleSolution) -> String {
    format!("I={} point=({}) scale={}", index_set(&b.index_set), rats_text(&b.point), b.scale)
}

fn cmd_bfs(file: &Path, point: Option<&str>) -> CmdResult {
    let a = read_matrix(file)?;
    if let Some(raw) = point {
        let h = raw
            .split(',')
            .map(|t| Rat::from_str(t.trim()).map_err(|_| usage(format!("bad rational '{t}'"))))
            .collect::<Result<Vec<Rat>, _>>()?;
        let d = polytope::caratheodory_decompose(&a, &h).map_err(domain)?;
        let mut text = format!(
            "terms: {} (dimension {}, at most {}); exact: {}",
            d.terms.len(),
            d.dimension,
            d.dimension + 1,
            d.is_exact()
        );
        for (w, b) in &d.terms {
            write!(text, "\n{w} * {}", bfs_text(b)).unwrap();
        }
        let data = json!({
            "point": rats_json(&h),
            "dimension": d.dimension,
            "exact": d.is_exact(),
            "terms": d.terms.iter().map(|(w, b)| json!({ "weight": w.to_string(), "bfs": bfs_json(b) })).collect::<Vec<_>>(),
        });
        return Ok(Output { text, data });
    }
    let all = polytope::enumerate_bfs(&a).map_err(domain)?;
    let pts: Vec<Vec<Rat>> = all.iter().map(|b| b.point.clone()).collect();
    let dim = if all.is_empty() { None } else { Some(polytope::polytope_dimension(&pts).map_err(domain)?) };
    let mut text = format!(
        "basic feasible solutions: {}; dimension {}",
        all.len(),
        dim.map_or_else(|| "n/a (empty)".to_string(), |d| d.to_string())
    );
    for b in &all {
        write!(text, "\n{}", bfs_text(b)).unwrap();
    }
    let data = json!({ "dimension": dim, "solutions": all.iter().map(bfs_json).collect::<Vec<_>>() });
    Ok(Output { text, data })
}

fn partition_json(p: &Multipartition) -> Value {
    p.grouped()
        .iter()
        .map(|(c, s)| {
            json!({
                "multiplicity": c,
                "basis": s.basis.iter().map(|v| v.coords.clone()).collect::<Vec<_>>(),
                "lines": s.line_set,
            })
        })
        .collect()
}

fn partition_inline(p: &Multipartition) -> String {
    p.to_string().trim_end().replace('\n', " | ")
}

fn vsp_failure(e: vsp::VspError) -> Failure {
    match e {
        vsp::VspError::NotPrime(_) | vsp::VspError::Parameters(_) | vsp::VspError::Syntax { .. } => usage(e),
        e => domain(e),
    }
}

fn cmd_vsp(cmd: &VspCommand) -> CmdResult {
    match cmd {
        VspCommand::Lines { n, q } => {
            let space = VectorSpace::new(*n, *q).map_err(vsp_failure)?;
            let mut text = format!("V({n},{q}): {} lines", space.lines().len());
            for (i, l) in space.lines().iter().enumerate() {
                write!(text, "\n{}: {}", i + 1, l.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).unwrap();
            }
            Ok(Output { text, data: json!({ "n": n, "q": q, "lines": space.lines() }) })
        }
        VspCommand::Check { file, q } => {
            let p = vsp::parse_partition(&read_file(file)?, *q).map_err(vsp_failure)?;
            let bound = vsp::partition_bound(p.n as u64, *q).ok();
            let Some(lambda) = vsp::is_lambda_partition(&p) else {
                let sums = p.incidence_matrix().map_err(vsp_failure)?.column_sums();
                return Err(Failure::Domain {
                    text: format!(
                        "not a multipartition; line coverage {}",
                        sums.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
                    ),
                    data: json!({ "valid": false, "coverage": sums }),
                });
            };
            let mut data = json!({
                "valid": true,
                "n": p.n,
                "q": q,
                "lambda": lambda,
                "terms": p.len(),
                "partition": partition_json(&p),
                "partition_bound": bound.as_ref().map_or(Value::Null, int_json),
            });
            let mut text = format!("lambda={lambda}; ");
            match vsp::is_irreducible_partition(&p).map_err(vsp_failure)? {
                Irreducibility::Irreducible => {
                    text.push_str("irreducible");
                    data["irreducible"] = json!(true);
                }
                Irreducibility::Reducible(a, b) => {
                    write!(text, "reducible\nQ1: {}\nQ2: {}", partition_inline(&a), partition_inline(&b)).unwrap();
                    data["irreducible"] = json!(false);
                    data["split"] = json!([partition_json(&a), partition_json(&b)]);
                }
            }
            if let Some(b) = &bound {
                write!(text, "\nterms: {}; partition bound {b}", p.len()).unwrap();
            }
            Ok(Output { text, data })
        }
        VspCommand::Enumerate { n, q, lambda } => {
            let space = VectorSpace::new(*n, *q).map_err(vsp_failure)?;
            if space.all_subspaces().len() > 64 {
                return Err(usage(format!("V({n},{q}) has too many subspaces to enumerate")));
            }
            let ps = vsp::enumerate_lambda_partitions(&space, *lambda).map_err(vsp_failure)?;
            let mut text = format!("{lambda}-partitions of V({n},{q}): {}", ps.len());
            let mut items = Vec::new();
            for p in &ps {
                let irr = vsp::is_irreducible_partition(p).map_err(vsp_failure)?.is_irreducible();
                write!(
                    text,
                    "\n{} term(s), {}: {}",
                    p.len(),
                    if irr { "irreducible" } else { "reducible" },
                    partition_inline(p)
                )
                .unwrap();
                items.push(json!({ "terms": p.len(), "irreducible": irr, "partition": partition_json(p) }));
            }
            Ok(Output { text, data: json!({ "n": n, "q": q, "lambda": lambda, "partitions": items }) })
        }
        VspCommand::Bounds { n, q } => {
            let t = vsp::line_count(*n as usize, *q).map_err(vsp_failure)?;
            let pb = vsp::partition_bound(*n, *q).map_err(vsp_failure)?;
            let shown = vsp::displayed_partition_bound(*n, *q).ok();
            let fb = vsp::family_bound(*n).map_err(vsp_failure)?;
            let text = format!(
                "lines t = {t}\npartition_bound = {pb}\ndisplayed closed form = {} (not asserted)\nfamily_bound({n}) = {fb}",
                shown.as_ref().map_or_else(|| "n/a".to_string(), BigInt::to_string)
            );
            let data = json!({
                "n": n,
                "q": q,
                "lines": t,
                "partition_bound": int_json(&pb),
                "displayed_closed_form": shown.as_ref().map_or(Value::Null, int_json),
                "family_bound": int_json(&fb),
            });
            Ok(Output { text, data })
        }
    }
}

fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Check { file, decompose, require_level } => cmd_check(file, *decompose, *require_level),
        Command::Hilbert(args) => cmd_hilbert(args),
        Command::Ell { n, k, budget, max_nodes } => cmd_ell(*n, *k, *budget, *max_nodes),
        Command::Bounds { n, k, eps } => cmd_bounds(*n, *k, *eps),
        Command::Construct { kind, params } => cmd_construct(kind, params),
        Command::Bfs { file, point } => cmd_bfs(file, point.as_deref()),
        Command::Vsp { command } => cmd_vsp(command),
    }
}

fn configure_threads() {
    let Ok(raw) = std::env::var("LEVELMAT_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => eprintln!("warning: ignoring LEVELMAT_THREADS={raw}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let name = cli.command.name();
    let (status, text, data, code) = match run(&cli.command) {
        Ok(Output { text, data }) => ("ok", text, data, 0),
        Err(Failure::Domain { text, data }) => ("error", text, data, 1),
        Err(Failure::Usage(msg)) => ("error", msg.clone(), json!({ "message": msg }), 2),
    };
    if cli.json {
        let doc = json!({ "status": status, "command": name, "data": data });
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
    } else if code == 2 {
        eprintln!("error: {text}");
    } else {
        let _ = writeln!(std::io::stdout(), "{text}");
    }
    ExitCode::from(code)
}
