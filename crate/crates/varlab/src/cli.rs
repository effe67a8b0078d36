//! Command-line surface: argument parsing, subcommand dispatch, and report
//! rendering (human-readable or JSON).
//!
//! Exit codes are uniform across subcommands: 0 for success / a positive
//! verdict, 1 for a negative verdict (identity is not a law, system
//! unsolvable, classification `Neither`, κ not an isomorphism, no
//! obstruction), 2 for usage or input errors. Reports go to stdout,
//! diagnostics to stderr. JSON output is byte-stable for fixed inputs.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::coherence::{classify_alternating, solve_coherence, AlternatingClass, LAMBDA_TARGET, LAMBDA_TERMS};
use crate::fdalg::gray_counterexample;
use crate::flatkappa::{analyze_kappa, multidegree_json, standard_pair, DegreeBound};
use crate::poly::scalar_to_string;
use crate::tideal::Tables;
use crate::variety::{parse_identity, resolve_variety, VarietyPresentation};
use crate::words::{Multidegree, VarId};

#[derive(Parser)]
#[command(
    name = "varlab",
    version,
    about = "Exact-arithmetic engine for varieties of nonassociative algebras",
    long_about = "Decides, at bounded multidegree, identity-theoretic and categorical \
                  properties of varieties of nonassociative algebras: law checking, the \
                  eight-term coherence criterion, the Lie/antiassociative classification \
                  of alternating varieties, and the degreewise comparison map \u{3ba} on \
                  kernel coproducts."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print machine-readable JSON instead of the human report
    #[arg(long, global = true)]
    json: bool,
    /// Cache directory for consequence spaces (disk caching is off without it)
    #[arg(long, global = true, env = "VARLAB_CACHE", value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Disable all disk caching (overrides --cache-dir)
    #[arg(long, global = true)]
    no_cache: bool,
    /// Random seed, reserved for reproducibility plumbing; every current
    /// subcommand is deterministic, so the value is accepted and unused
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an identity is a law of a variety
    IsLaw {
        /// Variety: builtin:<key> or a path to a variety file
        #[arg(long)]
        variety: String,
        /// The identity, in the identity DSL (e.g. "x*y + y*x")
        #[arg(long)]
        identity: String,
    },
    /// Solve the eight-term rewriting system for z*(x*y) (algebraic coherence)
    Coherence {
        #[arg(long)]
        variety: String,
    },
    /// Classify an alternating variety by its Jacobi/antiassociativity laws
    Classify {
        #[arg(long)]
        variety: String,
    },
    /// Analyse the comparison map κ: B♭X + B♭Y → B♭(X+Y) degreewise
    Kappa {
        #[arg(long)]
        variety: String,
        /// Maximum total degree of the analysed components
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_degree: u32,
        /// Per-variable degree cap, repeatable (e.g. --cap b=1)
        #[arg(long = "cap", value_name = "VAR=N")]
        caps: Vec<String>,
        /// Number of operator variables in B
        #[arg(long, default_value_t = 1, value_name = "N")]
        b_vars: usize,
        /// Number of argument variables in X
        #[arg(long, default_value_t = 1, value_name = "N")]
        x_vars: usize,
        /// Number of argument variables in Y
        #[arg(long, default_value_t = 1, value_name = "N")]
        y_vars: usize,
    },
    /// Run the semidirect membership-obstruction fixture
    Gray {
        /// Replace m*p = p*m = q by 0 (negative control: no obstruction)
        #[arg(long)]
        mutated_fixture: bool,
    },
    /// Report consequence-space membership of x*(y*z) + (x*y)*z at (1,1,1)
    AuditLemma34 {
        /// Law generating the T-ideal to test against, repeatable; without
        /// it the two standard law sets are queried ("0" means no laws)
        #[arg(long = "law", value_name = "IDENTITY")]
        laws: Vec<String>,
    },
}

/// Entry point for the binary: parses `std::env::args_os` and returns the
/// process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Runs the CLI on explicit arguments (first element is the program name).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    if let Some(seed) = cli.seed {
        eprintln!("seed {seed} accepted; all current subcommands are deterministic");
    }
    let tables = if cli.no_cache {
        Tables::in_memory()
    } else {
        Tables::new(cli.cache_dir.clone())
    };
    match &cli.command {
        Command::IsLaw { variety, identity } => match load_variety(variety) {
            Ok(v) => cmd_is_law(&tables, &v, identity, cli.json),
            Err(code) => code,
        },
        Command::Coherence { variety } => match load_variety(variety) {
            Ok(v) => cmd_coherence(&tables, &v, cli.json),
            Err(code) => code,
        },
        Command::Classify { variety } => match load_variety(variety) {
            Ok(v) => cmd_classify(&tables, &v, cli.json),
            Err(code) => code,
        },
        Command::Kappa {
            variety,
            max_degree,
            caps,
            b_vars,
            x_vars,
            y_vars,
        } => match load_variety(variety) {
            Ok(v) => cmd_kappa(&tables, &v, *max_degree, caps, *b_vars, *x_vars, *y_vars, cli.json),
            Err(code) => code,
        },
        Command::Gray { mutated_fixture } => cmd_gray(*mutated_fixture, cli.json),
        Command::AuditLemma34 { laws } => cmd_audit(&tables, laws, cli.json),
    }
}

fn load_variety(spec: &str) -> Result<VarietyPresentation, i32> {
    resolve_variety(spec).map_err(|e| {
        eprintln!("error: {e}");
        2
    })
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn cmd_is_law(tables: &Tables, variety: &VarietyPresentation, identity_src: &str, json_mode: bool) -> i32 {
    let identity = match parse_identity(identity_src) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let check = tables.is_law(variety, identity.poly());
    let reduced = tables.reduce(variety, identity.poly());
    if json_mode {
        let components: Vec<Value> = check
            .components
            .iter()
            .map(|c| json!({ "multidegree": multidegree_json(&c.degree), "holds": c.holds }))
            .collect();
        print_json(&json!({
            "variety": variety.name(),
            "identity": identity.poly().to_string(),
            "law": check.holds,
            "components": components,
            "reduced": reduced.to_string(),
        }));
    } else {
        println!("variety: {}", variety.name());
        println!("identity: {}", identity.poly());
        for c in &check.components {
            println!("component {}: {}", c.degree, if c.holds { "holds" } else { "fails" });
        }
        println!("law: {}", check.holds);
        if !check.holds {
            println!("reduced: {}", reduced);
        }
    }
    if check.holds {
        0
    } else {
        1
    }
}

fn cmd_coherence(tables: &Tables, variety: &VarietyPresentation, json_mode: bool) -> i32 {
    let solution = solve_coherence(tables, variety);
    if json_mode {
        print_json(&json!({
            "variety": variety.name(),
            "target": LAMBDA_TARGET,
            "terms": LAMBDA_TERMS,
            "solvable": solution.solvable,
            "particular": solution
                .particular
                .as_ref()
                .map(|v| v.iter().map(scalar_to_string).collect::<Vec<String>>()),
            "freedom": solution
                .freedom
                .iter()
                .map(|row| row.iter().map(scalar_to_string).collect::<Vec<String>>())
                .collect::<Vec<Vec<String>>>(),
            "freedom_rank": solution.freedom_rank(),
        }));
    } else {
        println!("variety: {}", variety.name());
        println!("target: {}", LAMBDA_TARGET);
        println!("terms: {}", LAMBDA_TERMS.join(", "));
        println!("solvable: {}", solution.solvable);
        if let Some(p) = &solution.particular {
            let coords: Vec<String> = p.iter().map(scalar_to_string).collect();
            println!("particular: ({})", coords.join(", "));
        }
        println!("freedom rank: {}", solution.freedom_rank());
    }
    if solution.solvable {
        0
    } else {
        1
    }
}

fn cmd_classify(tables: &Tables, variety: &VarietyPresentation, json_mode: bool) -> i32 {
    let report = match classify_alternating(tables, variety) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if json_mode {
        print_json(&json!({
            "variety": variety.name(),
            "verdict": report.verdict.to_string(),
            "jacobi": report.jacobi,
            "antiassociative": report.antiassociative,
            "triple_products_vanish": report.triple_products_vanish,
            "coherent": report.coherent,
        }));
    } else {
        println!("variety: {}", variety.name());
        println!("jacobi law: {}", report.jacobi);
        println!("antiassociative law: {}", report.antiassociative);
        println!("triple products vanish: {}", report.triple_products_vanish);
        println!("coherent: {}", report.coherent);
        println!("verdict: {}", report.verdict);
        if report.verdict == AlternatingClass::Neither {
            println!("note: not algebraically coherent");
        }
    }
    if report.verdict == AlternatingClass::Neither {
        1
    } else {
        0
    }
}

fn parse_cap(s: &str) -> Result<(VarId, u32), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("--cap expects VAR=N, got {s:?}"))?;
    let var = VarId::new(name.trim()).map_err(|e| e.to_string())?;
    let n: u32 = value
        .trim()
        .parse()
        .map_err(|_| format!("bad cap value {value:?} in --cap {s:?}"))?;
    Ok((var, n))
}

#[allow(clippy::too_many_arguments)]
fn cmd_kappa(
    tables: &Tables,
    variety: &VarietyPresentation,
    max_degree: u32,
    caps: &[String],
    b_vars: usize,
    x_vars: usize,
    y_vars: usize,
    json_mode: bool,
) -> i32 {
    if max_degree < 1 {
        eprintln!("error: --max-degree must be at least 1");
        return 2;
    }
    if b_vars < 1 || x_vars < 1 || y_vars < 1 {
        eprintln!("error: alphabet sizes must be at least 1");
        return 2;
    }
    let mut bound = DegreeBound::by_total(max_degree);
    for cap in caps {
        match parse_cap(cap) {
            Ok((v, n)) => bound.set_cap(v, n),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    let pair = standard_pair(tables, variety, b_vars, x_vars, y_vars, bound);
    let analysis = analyze_kappa(tables, variety, &pair);
    if json_mode {
        print_json(&analysis.to_json(&pair));
    } else {
        println!("variety: {}", variety.name());
        println!("bound: {}", analysis.bound);
        for c in &analysis.components {
            println!(
                "component {}: dim_domain={} dim_codomain={} rank={} injective={} surjective={}",
                c.degree(),
                c.dim_domain(),
                c.dim_codomain(),
                c.rank(),
                c.injective(),
                c.surjective()
            );
            for witness in c.kernel_witnesses() {
                println!("  kernel witness: {}", pair.render_poly(witness));
            }
            for missing in c.missing() {
                println!("  missing: {}", missing);
            }
        }
        for degree in &analysis.indeterminate {
            println!("component {}: indeterminate at this bound", degree);
        }
        println!("verdict: {}", analysis.verdict);
    }
    if analysis.iso {
        0
    } else {
        1
    }
}

fn cmd_gray(mutated: bool, json_mode: bool) -> i32 {
    let report = gray_counterexample(mutated);
    if json_mode {
        print_json(&report.to_json());
    } else {
        println!("fixture: semidirect membership obstruction");
        println!("mutated: {}", report.mutated);
        println!("ambient laws hold: {}", report.ambient_laws_hold);
        println!("target laws hold: {}", report.target_laws_hold);
        println!("g is homomorphism: {}", report.g_is_homomorphism);
        println!("f(0,b) = {}", report.f_of_b);
        println!("g(f(0,b)) = {}", report.g_of_f);
        println!("obstruction g(f(0,b))*p = {}", report.obstruction);
        println!("required under trivial action = {}", report.required);
        for note in &report.notes {
            println!("note: {}", note);
        }
        println!("verdict: {}", report.verdict());
    }
    if report.counterexample {
        0
    } else {
        1
    }
}

fn cmd_audit(tables: &Tables, laws: &[String], json_mode: bool) -> i32 {
    let query = parse_identity("x*(y*z) + (x*y)*z").expect("fixed query parses");
    let degree = Multidegree::from_counts([
        (VarId::new("x").expect("valid"), 1),
        (VarId::new("y").expect("valid"), 1),
        (VarId::new("z").expect("valid"), 1),
    ]);
    let law_sets: Vec<Vec<String>> = if laws.is_empty() {
        vec![
            vec!["x*(x*y)".to_string()],
            vec!["x*x".to_string(), "x*(x*y)".to_string()],
        ]
    } else {
        vec![laws.to_vec()]
    };
    let mut results: Vec<(Vec<String>, bool)> = Vec::new();
    for set in &law_sets {
        let mut identities = Vec::new();
        for src in set {
            match parse_identity(src) {
                Ok(i) => identities.push(i),
                Err(e) => {
                    eprintln!("error in --law {src:?}: {e}");
                    return 2;
                }
            }
        }
        let variety = VarietyPresentation::new("audit", identities);
        let space = tables.consequence_space(&variety, &degree);
        results.push((set.clone(), space.contains(query.poly())));
    }
    if json_mode {
        let entries: Vec<Value> = results
            .iter()
            .map(|(set, member)| json!({ "laws": set, "member": member }))
            .collect();
        print_json(&json!({
            "query": query.poly().to_string(),
            "multidegree": multidegree_json(&degree),
            "results": entries,
        }));
    } else {
        println!("query: {} at {}", query.poly(), degree);
        for (set, member) in &results {
            println!("laws {{{}}}: member: {}", set.join(", "), member);
        }
    }
    0
}
