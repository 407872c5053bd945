//! `qg`: command-line front end for the `quasigroup` library.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasigroup::congruences::{all_congruences_within, DEFAULT_CONGRUENCE_BOUND};
use quasigroup::decomposition::{decompose, member_classes, ClassSelector, DecompositionResult};
use quasigroup::error::Error;
use quasigroup::identities::{classify, loop_classify, Flag};
use quasigroup::morphisms::{automorphisms_within, autotopisms_within, DEFAULT_MORPHISM_BOUND};
use quasigroup::perm::is_bijection;
use quasigroup::search::{render_tables, search_with, ConstraintSet, SearchMode, SearchOptions, SearchOutcome};
use quasigroup::table::{image, is_constant, LocalMapKind, Quasigroup};
use quasigroup::verify::all_checks;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qg", version, about = "Finite quasigroup analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Overrides the order bounds of search, congruence and morphism routines.
    #[arg(long, global = true, env = "QG_MAX_ORDER")]
    max_order: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class flags, loop properties and local-map images.
    Analyze { paths: Vec<PathBuf> },
    /// Direct-product decomposition by class.
    Decompose {
        paths: Vec<PathBuf>,
        /// Class selector such as left-F, SM or CML; defaults to every class the table belongs to.
        #[arg(long)]
        class: Option<ClassSelector>,
    },
    /// Congruence lattice and simplicity.
    Congruences { paths: Vec<PathBuf> },
    /// Autotopism and automorphism group orders.
    Autotopisms {
        paths: Vec<PathBuf>,
        /// Print every automorphism in cycle notation.
        #[arg(long)]
        list: bool,
    },
    /// Backtracking search for Latin squares satisfying class identities.
    Search {
        #[arg(long)]
        order: usize,
        /// Comma-separated class flags, e.g. leftF,idempotent.
        #[arg(long, value_delimiter = ',')]
        require: Vec<Flag>,
        #[arg(long, value_enum, default_value_t = ModeArg::Count)]
        mode: ModeArg,
        /// Table limit for `enumerate`.
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Flag a counterexample must fail.
        #[arg(long)]
        fail: Option<Flag>,
        /// Fix the first row to 0 1 ... n-1.
        #[arg(long)]
        symmetry: bool,
    },
    /// Runs the built-in suite of worked examples.
    PaperVerify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Count,
    Enumerate,
    First,
    Counterexample,
}

/// Failure classes of one invocation, ordered by exit-code precedence.
#[derive(Debug)]
enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Module(String),
}

#[derive(Default)]
struct Outcome {
    text: String,
    json: Vec<Value>,
    failures: Vec<Failure>,
}

impl Outcome {
    fn fail(&mut self, f: Failure) {
        self.failures.push(f);
    }

    fn exit_code(&self) -> u8 {
        if self.failures.iter().any(|f| matches!(f, Failure::Usage(_))) {
            2
        } else if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

fn load(path: &Path) -> Result<Vec<Quasigroup>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Quasigroup::parse_many(&text).map_err(|e| match e {
        Error::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
        other => Failure::Module(format!("{}: {other}", path.display())),
    })
}

fn label(path: &Path, k: usize, total: usize) -> String {
    if total == 1 {
        path.display().to_string()
    } else {
        format!("{}#{}", path.display(), k + 1)
    }
}

/// Runs `f` on every table of every file.
fn for_each_table(paths: &[PathBuf], out: &mut Outcome, mut f: impl FnMut(&str, &Quasigroup, &mut Outcome)) {
    if paths.is_empty() {
        out.fail(Failure::Usage("no table files given".into()));
    }
    for p in paths {
        match load(p) {
            Ok(tables) => {
                for (k, q) in tables.iter().enumerate() {
                    f(&label(p, k, tables.len()), q, out);
                }
            }
            Err(e) => out.fail(e),
        }
    }
}

fn set(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn analyze(name: &str, q: &Quasigroup, out: &mut Outcome) {
    let report = classify(q);
    let loops = loop_classify(q).ok();
    let t = &mut out.text;
    let _ = writeln!(t, "== {name} (order {})", q.order());
    let (yes, no): (Vec<Flag>, Vec<Flag>) = Flag::ALL.into_iter().partition(|f| report.get(*f));
    let names = |fs: &[Flag]| fs.iter().map(|f| f.name()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(t, "holds: {}", names(&yes));
    let _ = writeln!(t, "fails: {}", names(&no));
    let mut maps = serde_json::Map::new();
    for kind in LocalMapKind::ALL {
        let m = q.local_map(kind);
        let shape = if is_bijection(&m) {
            "permutation"
        } else if is_constant(&m) {
            "constant"
        } else {
            "neither"
        };
        let _ = writeln!(t, "{}: {:?} image {} ({shape})", kind.name(), m, set(&image(&m)));
        maps.insert(
            kind.name().into(),
            json!({ "map": m, "image": image(&m), "permutation": shape == "permutation", "constant": shape == "constant" }),
        );
    }
    match &loops {
        Some(l) => {
            let _ = writeln!(
                t,
                "loop: identity {} group {} moufang {} CML {} leftM {} rightM {} leftS {} center {}",
                l.identity,
                l.group,
                l.moufang,
                l.cml,
                l.left_m,
                l.right_m,
                l.left_s,
                set(&l.center)
            );
        }
        None => {
            let _ = writeln!(t, "loop: no");
        }
    }
    out.json.push(json!({ "name": name, "order": q.order(), "classes": report, "localMaps": maps, "loop": loops }));
}

fn decomposition_text(t: &mut String, d: &DecompositionResult, indent: &str) {
    let _ = writeln!(
        t,
        "{indent}{}: {}-chain {} m = {}, |A| = {} (idempotent {}), |B| = {}, companion {:?} is {}",
        d.class,
        d.map.name(),
        d.chain.images.iter().map(|s| set(s)).collect::<Vec<_>>().join(" > "),
        d.m,
        d.a.order(),
        d.a_idempotent,
        d.b.order(),
        d.companion_kind,
        d.companion_law.name()
    );
    if let Some(r) = &d.refinement {
        decomposition_text(t, &r.a, &format!("{indent}  A: "));
        decomposition_text(t, &r.b, &format!("{indent}  B: "));
    }
}

fn decompose_cmd(name: &str, q: &Quasigroup, class: Option<ClassSelector>, out: &mut Outcome) {
    let classes = class.map(|c| vec![c]).unwrap_or_else(|| member_classes(q));
    let _ = writeln!(out.text, "== {name} (order {})", q.order());
    if classes.is_empty() {
        let _ = writeln!(out.text, "belongs to none of the decomposable classes");
    }
    let mut results = Vec::new();
    for c in classes {
        match decompose(q, c) {
            Ok(d) => {
                decomposition_text(&mut out.text, &d, "");
                let _ = writeln!(out.text, "  round trip exact: {}", d.round_trip_exact(q));
                results.push(json!({ "class": c, "roundTripExact": d.round_trip_exact(q), "result": d }));
            }
            Err(e) => out.fail(Failure::Module(format!("{name}: {c}: {e}"))),
        }
    }
    out.json.push(json!({ "name": name, "order": q.order(), "decompositions": results }));
}

fn congruences_cmd(name: &str, q: &Quasigroup, bound: usize, out: &mut Outcome) {
    match all_congruences_within(q, bound) {
        Ok(cs) => {
            let simple = cs.len() <= 2;
            let _ = writeln!(out.text, "== {name} (order {}): {} congruences, simple {simple}", q.order(), cs.len());
            for c in &cs {
                let blocks: Vec<String> = c.partition.blocks().iter().map(|b| set(b)).collect();
                let _ = writeln!(out.text, "  {} normal {}", blocks.join(" "), c.normal);
            }
            let list: Vec<Value> =
                cs.iter().map(|c| json!({ "blocks": c.partition.blocks(), "normal": c.normal })).collect();
            out.json.push(json!({ "name": name, "order": q.order(), "simple": simple, "congruences": list }));
        }
        Err(e) => out.fail(Failure::Module(format!("{name}: {e}"))),
    }
}

fn autotopisms_cmd(name: &str, q: &Quasigroup, bound: usize, list: bool, out: &mut Outcome) {
    let (auts, atps) = match (automorphisms_within(q, bound), autotopisms_within(q, bound)) {
        (Ok(a), Ok(t)) => (a, t),
        (Err(e), _) | (_, Err(e)) => return out.fail(Failure::Module(format!("{name}: {e}"))),
    };
    let _ = writeln!(out.text, "== {name} (order {}): {} autotopisms, {} automorphisms", q.order(), atps.len(), auts.len());
    if list {
        for a in &auts {
            let _ = writeln!(out.text, "  {a}");
        }
    }
    let mut doc = json!({ "name": name, "order": q.order(), "autotopisms": atps.len(), "automorphisms": auts.len() });
    if list {
        doc["automorphismList"] = json!(auts.iter().map(|a| a.images()).collect::<Vec<_>>());
    }
    out.json.push(doc);
}

#[allow(clippy::too_many_arguments)]
fn search_cmd(
    order: usize,
    require: &[Flag],
    mode: ModeArg,
    limit: usize,
    fail: Option<Flag>,
    symmetry: bool,
    g: &Global,
    out: &mut Outcome,
) {
    let mode = match (mode, fail) {
        (ModeArg::Count, _) => SearchMode::Count,
        (ModeArg::Enumerate, _) => SearchMode::Enumerate(limit),
        (ModeArg::First, _) => SearchMode::FirstWitness,
        (ModeArg::Counterexample, Some(f)) => SearchMode::FirstCounterexample(f),
        (ModeArg::Counterexample, None) => return out.fail(Failure::Usage("--mode counterexample needs --fail <flag>".into())),
    };
    let cs = ConstraintSet::require(require);
    let opts = SearchOptions { max_order: g.max_order, jobs: g.jobs, symmetry };
    match search_with(order, &cs, mode, &opts) {
        Ok(SearchOutcome::Count(c)) => {
            let _ = writeln!(out.text, "{c}");
            out.json.push(json!({ "order": order, "require": require, "count": c }));
        }
        Ok(SearchOutcome::Tables(ts)) => {
            out.text.push_str(&render_tables(&ts));
            out.json.push(json!({ "order": order, "require": require, "count": ts.len(), "tables": ts }));
        }
        Err(e @ Error::OrderBoundExceeded { .. }) => out.fail(Failure::Usage(e.to_string())),
        Err(e) => out.fail(Failure::Module(e.to_string())),
    }
}

fn paper_verify(out: &mut Outcome) {
    let checks = all_checks();
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() || c.passed {
            let _ = writeln!(out.text, "{tag} {}", c.name);
        } else {
            let _ = writeln!(out.text, "{tag} {} ({})", c.name, c.detail);
        }
    }
    let _ = writeln!(out.text, "{} checks, {} passed, {failed} failed", checks.len(), checks.len() - failed);
    if failed > 0 {
        out.fail(Failure::Module(format!("{failed} checks failed")));
    }
    out.json.push(json!({ "checks": checks, "passed": checks.len() - failed, "failed": failed }));
}

fn run(cli: &Cli) -> Outcome {
    let mut out = Outcome::default();
    let g = &cli.global;
    if let Some(j) = g.jobs {
        if j == 0 {
            out.fail(Failure::Usage("--jobs must be positive".into()));
            return out;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match &cli.command {
        Command::Analyze { paths } => for_each_table(paths, &mut out, analyze),
        Command::Decompose { paths, class } => {
            for_each_table(paths, &mut out, |n, q, o| decompose_cmd(n, q, *class, o))
        }
        Command::Congruences { paths } => {
            let bound = g.max_order.unwrap_or(DEFAULT_CONGRUENCE_BOUND);
            for_each_table(paths, &mut out, |n, q, o| congruences_cmd(n, q, bound, o))
        }
        Command::Autotopisms { paths, list } => {
            let bound = g.max_order.unwrap_or(DEFAULT_MORPHISM_BOUND);
            for_each_table(paths, &mut out, |n, q, o| autotopisms_cmd(n, q, bound, *list, o))
        }
        Command::Search { order, require, mode, limit, fail, symmetry } => {
            search_cmd(*order, require, *mode, *limit, *fail, *symmetry, g, &mut out)
        }
        Command::PaperVerify => paper_verify(&mut out),
    }
    out
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Decompose { .. } => "decompose",
        Command::Congruences { .. } => "congruences",
        Command::Autotopisms { .. } => "autotopisms",
        Command::Search { .. } => "search",
        Command::PaperVerify => "paper-verify",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let diagnostics: Vec<String> = out
        .failures
        .iter()
        .map(|f| match f {
            Failure::Usage(m) | Failure::Module(m) => m.clone(),
        })
        .collect();
    match cli.global.format {
        Format::Text => print!("{}", out.text),
        Format::Json => {
            let doc = json!({
                "command": command_name(&cli.command),
                "exitCode": out.exit_code(),
                "results": out.json,
                "errors": diagnostics,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
        }
    }
    for d in &diagnostics {
        eprintln!("qg: {d}");
    }
    ExitCode::from(out.exit_code())
}
