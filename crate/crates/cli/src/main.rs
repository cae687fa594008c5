use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use netsubsidy::enforce::{enforce_fractional, min_integral_subsidy_exact, EnforceError, DEFAULT_CAP};
use netsubsidy::game::{
    best_response_dynamics, is_equilibrium_broadcast, is_equilibrium_broadcast_f64, is_equilibrium_general,
    OrderPolicy, Verdict,
};
use netsubsidy::generators::dimacs::parse_dimacs;
use netsubsidy::generators::sat::default_k;
use netsubsidy::generators::{
    gen_3sat4, gen_aon_path, gen_binpack, gen_bypass, gen_cycle, gen_indepset, CubicGraph, GenError,
};
use netsubsidy::model::io::{load_game, load_subsidies, load_tree, save_game, save_subsidies, save_tree, to_dot, to_json_line};
use netsubsidy::model::{minimum_spanning_tree, Game, SpanningTree, State, SubsidyAssignment};
use netsubsidy::oracles::{best_equilibrium, price_of_stability, OracleError, DEFAULT_TREE_CAP};
use netsubsidy::rational::{format_rational, from_f64, parse_rational, to_decimal, Rational};
use netsubsidy::sne::{min_subsidy, min_subsidy_tree, Method, SneError};

const DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "netsubsidy", version, about = "Subsidies that enforce network designs as equilibria")]
struct Cli {
    /// Worker threads for oracles and enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance family.
    Gen(GenArgs),
    /// Check whether a tree is an equilibrium under given subsidies.
    Check(CheckArgs),
    /// Minimum fractional subsidies by linear programming.
    SolveSne(SolveSneArgs),
    /// Constructive subsidies for a minimum spanning tree.
    EnforceFrac(EnforceFracArgs),
    /// Cheapest all-or-nothing subsidies by exhaustive search.
    SolveAon(SolveAonArgs),
    /// Price of stability by spanning-tree enumeration.
    Pos(EnumArgs),
    /// Cheapest equilibrium tree by enumeration.
    BestEq(BestEqArgs),
    /// Best-response dynamics from the minimum spanning tree.
    Dynamics(DynamicsArgs),
}

#[derive(Args)]
struct Output {
    /// Main output file (stdout when omitted).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Graphviz rendering of the result.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    #[command(flatten)]
    out: Output,
    /// Where to write the designated tree.
    #[arg(long, global = true)]
    tree_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Gadget whose tree is stable only when beta reaches kappa.
    Bypass {
        #[arg(long)]
        kappa: u64,
        #[arg(long, default_value_t = 0)]
        beta: u64,
    },
    /// Game with an equilibrium tree iff the items pack exactly.
    Binpack {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        capacity: u64,
        /// Bin of each item, for the tree output.
        #[arg(long, value_delimiter = ',')]
        assign: Option<Vec<usize>>,
    },
    /// Game built on a cubic graph and an independent set.
    Indepset {
        /// Edges of the cubic graph as a-b pairs (K4 when omitted).
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<String>>,
        #[arg(long, default_value = "1/12")]
        delta: String,
        /// Independent set for the tree output.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Unit cycle on n players closed back to the root.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Path with shortcuts that is expensive to enforce all-or-nothing.
    AonPath {
        #[arg(long)]
        n: usize,
    },
    /// Reduction from a 3SAT-4 formula.
    Sat {
        /// DIMACS CNF file.
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        k: Option<String>,
    },
}

#[derive(Args)]
struct GameTree {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    tree: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: GameTree,
    #[arg(long)]
    subsidies: Option<PathBuf>,
    /// Compare in floating point with this slack instead of exactly.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct SolveSneArgs {
    #[command(flatten)]
    input: GameTree,
    #[arg(long, default_value = "lp3")]
    method: Method,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EnforceFracArgs {
    #[arg(long)]
    game: PathBuf,
    /// Target tree; the minimum spanning tree when omitted.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Candidates {
    Tree,
    Light,
}

#[derive(Args)]
struct SolveAonArgs {
    #[command(flatten)]
    input: GameTree,
    #[arg(long, value_enum, default_value = "tree")]
    candidates: Candidates,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BestEqArgs {
    #[command(flatten)]
    input: EnumArgs,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DynamicsArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    subsidies: Option<PathBuf>,
    /// Shuffle the move order with this seed (round robin when omitted).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn check(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn cap(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<netsubsidy::model::ModelError> for Failure {
    fn from(e: netsubsidy::model::ModelError) -> Self {
        Failure::usage(e)
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::usage(e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => Failure::cap(e),
            OracleError::NoEquilibrium => Failure::check(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<SneError> for Failure {
    fn from(e: SneError) -> Self {
        match e {
            SneError::RowgenCap { .. } => Failure::cap(e),
            SneError::Unverified | SneError::Solver(_) => Failure::check(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<EnforceError> for Failure {
    fn from(e: EnforceError) -> Self {
        match e {
            EnforceError::CapExceeded { .. } => Failure::cap(e),
            _ => Failure::usage(e),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Game, Failure> {
    Ok(load_game(&read(path)?)?)
}

fn root_of(game: &Game) -> usize {
    match game {
        Game::Broadcast(b) => b.root(),
        Game::General(_) => 0,
    }
}

fn load_target(input: &GameTree) -> Result<(Game, SpanningTree), Failure> {
    let game = load(&input.game)?;
    let tree = load_tree(&read(&input.tree)?, game.graph(), root_of(&game))?;
    Ok((game, tree))
}

fn state_of(game: &Game, tree: &SpanningTree) -> Result<State, Failure> {
    Ok(match game {
        Game::Broadcast(b) => State::from_tree(b.graph(), tree, b.players()),
        Game::General(g) => State::from_forest(g.graph(), g.pairs(), tree),
    })
}

fn broadcast(game: &Game) -> Result<&netsubsidy::model::BroadcastGame, Failure> {
    game.as_broadcast()
        .ok_or_else(|| Failure::usage("this command needs a broadcast game (a game file with a root)"))
}

#[derive(Serialize)]
struct Amount {
    total: String,
    decimal: String,
}

fn amount(v: &Rational) -> Amount {
    Amount {
        total: format_rational(v),
        decimal: to_decimal(v, DIGITS),
    }
}

fn write_dot(path: Option<&PathBuf>, game: &Game, tree: Option<&SpanningTree>, b: Option<&SubsidyAssignment>) -> Outcome {
    match path {
        Some(p) => write(p, &to_dot(game.graph(), tree, b)),
        None => Ok(()),
    }
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let (game, tree): (Game, Option<SpanningTree>) = match args.family {
        Family::Bypass { kappa, beta } => {
            let inst = gen_bypass(kappa, beta)?;
            (Game::Broadcast(inst.game), Some(inst.tree))
        }
        Family::Binpack {
            sizes,
            bins,
            capacity,
            assign,
        } => {
            let inst = gen_binpack(&sizes, bins, capacity)?;
            let tree = assign.map(|a| inst.tree_for(&a)).transpose()?;
            (Game::Broadcast(inst.game), tree)
        }
        Family::Indepset { edges, delta, set } => {
            let h = match edges {
                None => CubicGraph::complete4(),
                Some(list) => parse_pairs(&list)?,
            };
            let delta = parse_rational(&delta).map_err(Failure::usage)?;
            let inst = gen_indepset(&h, &delta)?;
            let tree = set.map(|s| inst.tree_for(&s)).transpose()?;
            (Game::Broadcast(inst.game), tree)
        }
        Family::Cycle { n } => {
            let inst = gen_cycle(n)?;
            (Game::Broadcast(inst.game), Some(inst.tree))
        }
        Family::AonPath { n } => {
            let inst = gen_aon_path(n)?;
            (Game::Broadcast(inst.game), Some(inst.tree))
        }
        Family::Sat { cnf, k } => {
            let text = String::from_utf8(read(&cnf)?).map_err(|e| Failure::usage(format!("{}: {e}", cnf.display())))?;
            let formula = parse_dimacs(&text)?;
            let k = match k {
                Some(k) => parse_rational(&k).map_err(Failure::usage)?,
                None => default_k(),
            };
            let inst = gen_3sat4(&formula, &k)?;
            inst.self_check().map_err(Failure::check)?;
            (Game::Broadcast(inst.game), Some(inst.tree))
        }
    };
    emit(args.out.output.as_ref(), &save_game(&game))?;
    if let Some(path) = &args.tree_out {
        let tree = tree
            .as_ref()
            .ok_or_else(|| Failure::usage("this family needs --assign or --set to produce a tree"))?;
        write(path, &save_tree(tree))?;
    }
    write_dot(args.out.dot.as_ref(), &game, tree.as_ref(), None)
}

fn parse_pairs(list: &[String]) -> Result<CubicGraph, Failure> {
    let mut edges = Vec::with_capacity(list.len());
    for item in list {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| Failure::usage(format!("edge {item:?} is not of the form a-b")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| Failure::usage(format!("bad node {s:?}")));
        edges.push((parse(a)?, parse(b)?));
    }
    let nodes = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    Ok(CubicGraph { nodes, edges })
}

fn cmd_check(args: CheckArgs) -> Outcome {
    let (game, tree) = load_target(&args.input)?;
    let b = match &args.subsidies {
        Some(p) => load_subsidies(&read(p)?, game.graph())?,
        None => SubsidyAssignment::zero(),
    };
    write_dot(args.dot.as_ref(), &game, Some(&tree), Some(&b))?;
    if let Some(eps) = args.tol {
        let bg = broadcast(&game)?;
        let values: Vec<f64> = (0..game.graph().edge_count())
            .map(|e| netsubsidy::rational::to_f64(&b.get(e)))
            .collect();
        let verdict = is_equilibrium_broadcast_f64(bg, &tree, &values, eps);
        #[derive(Serialize)]
        struct FloatReport {
            ok: bool,
            worst_gain: f64,
        }
        print!(
            "{}",
            to_json_line(&FloatReport {
                ok: verdict.ok,
                worst_gain: verdict.worst_gain
            })
        );
        return if verdict.ok {
            Ok(())
        } else {
            Err(Failure::check("equilibrium check failed"))
        };
    }
    let verdict = match &game {
        Game::Broadcast(bg) => is_equilibrium_broadcast(bg, &tree, &b),
        Game::General(g) => is_equilibrium_general(g, &state_of(&game, &tree)?, &b),
    };
    print!("{}", verdict.to_json(&game));
    match verdict {
        Verdict::Ok => Ok(()),
        Verdict::Violation { .. } => Err(Failure::check("equilibrium check failed")),
    }
}

fn cmd_solve_sne(args: SolveSneArgs) -> Outcome {
    let (game, tree) = load_target(&args.input)?;
    let solution = match &game {
        Game::Broadcast(bg) => min_subsidy_tree(bg, &tree, args.method)?,
        Game::General(_) => min_subsidy(&game, &state_of(&game, &tree)?, args.method)?,
    };
    emit(args.out.output.as_ref(), &save_subsidies(&solution.subsidies))?;
    write_dot(args.out.dot.as_ref(), &game, Some(&tree), Some(&solution.subsidies))?;
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        amount: Amount,
        rounds: usize,
    }
    if args.out.output.is_some() {
        print!(
            "{}",
            to_json_line(&Report {
                amount: amount(&solution.total),
                rounds: solution.rounds
            })
        );
    }
    Ok(())
}

fn cmd_enforce_frac(args: EnforceFracArgs) -> Outcome {
    let game = load(&args.game)?;
    let bg = broadcast(&game)?;
    let tree = match &args.tree {
        Some(p) => load_tree(&read(p)?, game.graph(), bg.root())?,
        None => minimum_spanning_tree(game.graph(), bg.root())?,
    };
    let result = enforce_fractional(bg, &tree)?;
    let verdict = is_equilibrium_broadcast_f64(bg, &tree, &result.values, args.tol);
    if !verdict.ok {
        return Err(Failure::check(format!(
            "constructed subsidies leave a detour gaining {}",
            verdict.worst_gain
        )));
    }
    let b = SubsidyAssignment::new(
        result
            .nonzero()
            .into_iter()
            .map(|(e, v)| (e, from_f64(v).expect("finite subsidy"))),
        false,
    );
    emit(args.out.output.as_ref(), &save_subsidies(&b))?;
    write_dot(args.out.dot.as_ref(), &game, Some(&tree), Some(&b))?;
    #[derive(Serialize)]
    struct Report {
        total: f64,
        tree_weight: String,
        bound: f64,
        worst_gain: f64,
    }
    if args.out.output.is_some() {
        let w = tree.weight(game.graph());
        print!(
            "{}",
            to_json_line(&Report {
                total: result.total,
                tree_weight: format_rational(&w),
                bound: netsubsidy::rational::to_f64(&w) / std::f64::consts::E,
                worst_gain: verdict.worst_gain,
            })
        );
    }
    Ok(())
}

fn cmd_solve_aon(args: SolveAonArgs) -> Outcome {
    let (game, tree) = load_target(&args.input)?;
    let bg = broadcast(&game)?;
    let graph = game.graph();
    let light: Vec<usize>;
    let candidates = match args.candidates {
        Candidates::Tree => None,
        Candidates::Light => {
            let one = netsubsidy::rational::int(1);
            light = tree.edges().iter().copied().filter(|&e| *graph.weight(e) == one).collect();
            Some(light.as_slice())
        }
    };
    let Some(solution) = min_integral_subsidy_exact(bg, &tree, candidates, args.cap)? else {
        return Err(Failure::check("no all-or-nothing assignment on the candidates enforces the tree"));
    };
    emit(args.out.output.as_ref(), &save_subsidies(&solution.subsidies))?;
    write_dot(args.out.dot.as_ref(), &game, Some(&tree), Some(&solution.subsidies))?;
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        amount: Amount,
        edges: Vec<usize>,
    }
    if args.out.output.is_some() {
        print!(
            "{}",
            to_json_line(&Report {
                amount: amount(&solution.total),
                edges: solution.edges
            })
        );
    }
    Ok(())
}

fn cmd_pos(args: EnumArgs) -> Outcome {
    let game = load(&args.game)?;
    let report = price_of_stability(broadcast(&game)?, args.cap)?;
    #[derive(Serialize)]
    struct Report {
        pos: String,
        best_eq_weight: String,
        mst_weight: String,
    }
    print!(
        "{}",
        to_json_line(&Report {
            pos: format_rational(&report.pos),
            best_eq_weight: format_rational(&report.best_eq_weight),
            mst_weight: format_rational(&report.mst_weight),
        })
    );
    Ok(())
}

fn cmd_best_eq(args: BestEqArgs) -> Outcome {
    let game = load(&args.input.game)?;
    let bg = broadcast(&game)?;
    let (tree, weight) = best_equilibrium(bg, args.input.cap)?.ok_or(OracleError::NoEquilibrium)?;
    if !is_equilibrium_broadcast(bg, &tree, &SubsidyAssignment::zero()).is_ok() {
        return Err(Failure::check("enumerated tree fails the equilibrium check"));
    }
    write_dot(args.out.dot.as_ref(), &game, Some(&tree), None)?;
    #[derive(Serialize)]
    struct Report {
        weight: String,
        decimal: String,
        edges: Vec<usize>,
    }
    if let Some(p) = &args.out.output {
        write(p, &save_tree(&tree))?;
    }
    print!(
        "{}",
        to_json_line(&Report {
            weight: format_rational(&weight),
            decimal: to_decimal(&weight, DIGITS),
            edges: tree.edges().to_vec(),
        })
    );
    Ok(())
}

fn cmd_dynamics(args: DynamicsArgs) -> Outcome {
    let game = load(&args.game)?;
    let general = game.to_general();
    let b = match &args.subsidies {
        Some(p) => load_subsidies(&read(p)?, game.graph())?,
        None => SubsidyAssignment::zero(),
    };
    let mst = minimum_spanning_tree(game.graph(), root_of(&game))?;
    let initial = State::from_forest(game.graph(), general.pairs(), &mst);
    let policy = match args.seed {
        Some(seed) => OrderPolicy::Shuffled { seed },
        None => OrderPolicy::RoundRobin,
    };
    let outcome = best_response_dynamics(&general, initial, &b, policy, args.max_rounds).map_err(Failure::cap)?;
    if !is_equilibrium_general(&general, &outcome.state, &b).is_ok() {
        return Err(Failure::check("dynamics stopped outside an equilibrium"));
    }
    #[derive(Serialize)]
    struct Report {
        rounds: usize,
        moves: usize,
        potential: Vec<String>,
        established: Vec<usize>,
        weight: String,
    }
    let established: BTreeSet<usize> = outcome.state.established().into_iter().collect();
    print!(
        "{}",
        to_json_line(&Report {
            rounds: outcome.rounds,
            moves: outcome.moves,
            potential: outcome.potential.iter().map(format_rational).collect(),
            weight: format_rational(&outcome.state.weight(game.graph())),
            established: established.into_iter().collect(),
        })
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
        Command::SolveSne(a) => cmd_solve_sne(a),
        Command::EnforceFrac(a) => cmd_enforce_frac(a),
        Command::SolveAon(a) => cmd_solve_aon(a),
        Command::Pos(a) => cmd_pos(a),
        Command::BestEq(a) => cmd_best_eq(a),
        Command::Dynamics(a) => cmd_dynamics(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
