use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use hslnest::grammar::{reachable, Grammar, PropPath};
use hslnest::labelled::{check_labelled, LabelledProof, LabelledSequent, Mode, RelAtom};
use hslnest::models::{check_frame_conditions, check_model, extension, globally_true, random_model, sat_sequent, Interpretation, Model};
use hslnest::nested::{check_nested, prove_with_limits, NRule, NestedProof, NestedSequent, SearchLimits};
use hslnest::refine::{eliminate_structural, prop_graph_labelled};
use hslnest::syntax::{benchmark_formulas, hsl_formula, parse_formula, parse_hsl_pair, AxiomSet, Formula};
use hslnest::translate::{to_labelled, to_nested, translate_proof, AnyProof, Direction};

/// Proof tools for intuitionistic modal logics with seriality and
/// Horn-Scott-Lemmon axioms.
///
/// Exit status: 0 on success or a positive answer, 1 when the input is
/// invalid, unprovable within the budget or false, 2 on usage or IO errors.
#[derive(Parser)]
#[command(name = "hslnest", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct AxiomFlags {
    /// Axiom set such as "D; 1,1" or "T 4".
    #[arg(long)]
    axioms: Option<String>,
    /// An HSL pair n,k with n,k <= 9; repeatable.
    #[arg(long = "hsl", value_name = "N,K")]
    hsl: Vec<String>,
    /// Add the seriality axiom D.
    #[arg(long = "d")]
    d: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Formula,
    Nested,
    Labelled,
    Path,
    Axioms,
}

#[derive(Clone, Copy, ValueEnum)]
enum Calculus {
    Labelled,
    Refined,
    Either,
    Nested,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Nested,
    Labelled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula, sequent, path or axiom set and print it back.
    Parse {
        #[arg(long = "as", value_enum, default_value = "formula")]
        kind: Kind,
        text: String,
    },
    /// Find a propagation path between two labels of a relation list.
    Reach {
        #[command(flatten)]
        axioms: AxiomFlags,
        /// Relational atoms, e.g. "v R u, u R w".
        relations: String,
        from: String,
        to: String,
        /// Print the grammar as well.
        #[arg(long)]
        grammar: bool,
    },
    /// Check a JSON proof.
    Check {
        #[command(flatten)]
        axioms: AxiomFlags,
        #[arg(long, value_enum, default_value = "labelled")]
        calculus: Calculus,
        file: PathBuf,
    },
    /// Eliminate S(n,k) from a labelled proof.
    Refine {
        #[command(flatten)]
        axioms: AxiomFlags,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a sequent or proof between the labelled and nested forms.
    Translate {
        #[command(flatten)]
        axioms: AxiomFlags,
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a nested proof of a formula or nested sequent.
    Prove {
        #[command(flatten)]
        axioms: AxiomFlags,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 2_000_000)]
        max_expansions: usize,
        /// Read the goal as a nested sequent instead of a formula.
        #[arg(long)]
        sequent: bool,
        /// Print the proof as JSON.
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        goal: String,
    },
    /// Evaluate a formula or labelled sequent on a model.
    ModelEval {
        #[command(flatten)]
        axioms: AxiomFlags,
        /// Model file; omit to use random models.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, conflicts_with = "sequent")]
        formula: Option<String>,
        /// A labelled sequent; needs --interp.
        #[arg(long)]
        sequent: Option<String>,
        /// Label assignment such as "w=m0, u=m1".
        #[arg(long)]
        interp: Option<String>,
        /// Evaluate at one world only.
        #[arg(long)]
        world: Option<String>,
        /// Number of random models to test when no model file is given.
        #[arg(long, default_value_t = 200)]
        random_models: u64,
        #[arg(long, default_value_t = 5)]
        max_worlds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print benchmark formulas, HSL instances and grammars.
    Axioms {
        #[command(flatten)]
        axioms: AxiomFlags,
        #[arg(long)]
        grammar: bool,
    },
}

enum Fail {
    Usage(String),
    Invalid(String),
}

type Out = Result<(), Fail>;

fn usage(e: impl ToString) -> Fail {
    Fail::Usage(e.to_string())
}

fn invalid(e: impl ToString) -> Fail {
    Fail::Invalid(e.to_string())
}

impl AxiomFlags {
    fn resolve(&self) -> Result<AxiomSet, Fail> {
        let mut a: AxiomSet = match &self.axioms {
            Some(s) => s.parse().map_err(usage)?,
            None => AxiomSet::empty(),
        };
        for h in &self.hsl {
            let (n, k) = parse_hsl_pair(h).map_err(usage)?;
            a.hsl.insert((n, k));
        }
        a.has_d |= self.d;
        if let Some((n, k)) = a.hsl.iter().find(|(n, k)| *n > 9 || *k > 9) {
            return Err(usage(format!("HSL pair {n},{k} is out of range; n and k must be at most 9")));
        }
        Ok(a)
    }
}

fn read_input(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Out {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => match writeln!(io::stdout(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(usage(e)),
            _ => Ok(()),
        },
    }
}

fn parse_relations(text: &str) -> Result<Vec<RelAtom>, Fail> {
    let mut out = Vec::new();
    for item in text.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_whitespace().collect::<Vec<_>>()[..] {
            [x, "R", y] => out.push(RelAtom::new(x, y)),
            _ => return Err(invalid(format!("expected `x R y`, found {item:?}"))),
        }
    }
    Ok(out)
}

/// Position of the first node whose rule name does not parse.
fn bad_rule(v: &Value, names: &dyn Fn(&str) -> bool, pos: &mut Vec<usize>) -> Option<(Vec<usize>, String)> {
    match v.get("rule").and_then(Value::as_str) {
        Some(r) if names(r) => {}
        Some(r) => return Some((pos.clone(), format!("unknown rule {r:?}"))),
        None => return Some((pos.clone(), "missing rule".into())),
    }
    for (i, p) in v.get("premises").and_then(Value::as_array).into_iter().flatten().enumerate() {
        pos.push(i);
        if let Some(found) = bad_rule(p, names, pos) {
            return Some(found);
        }
        pos.pop();
    }
    None
}

fn load_proof<T: serde::de::DeserializeOwned>(text: &str, names: &dyn Fn(&str) -> bool) -> Result<T, Fail> {
    serde_json::from_str(text).map_err(|e| {
        let Ok(v) = serde_json::from_str::<Value>(text) else { return invalid(format!("malformed JSON: {e}")) };
        match bad_rule(&v, names, &mut Vec::new()) {
            Some((node, reason)) => invalid(format!("node {node:?}: {reason}")),
            None => invalid(format!("malformed proof: {e}")),
        }
    })
}

fn labelled_name(r: &str) -> bool {
    r.parse::<hslnest::labelled::LRule>().is_ok()
}

fn nested_name(r: &str) -> bool {
    r.parse::<NRule>().is_ok()
}

fn cmd_parse(kind: Kind, text: &str) -> Out {
    let shown = match kind {
        Kind::Formula => parse_formula(text).map_err(invalid)?.to_string(),
        Kind::Nested => text.parse::<NestedSequent>().map_err(invalid)?.to_string(),
        Kind::Labelled => text.parse::<LabelledSequent>().map_err(invalid)?.to_string(),
        Kind::Path => {
            let p: PropPath = text.parse().map_err(invalid)?;
            format!("{p}\nstring {}", p.word())
        }
        Kind::Axioms => text.parse::<AxiomSet>().map_err(invalid)?.to_string(),
    };
    println!("{shown}");
    Ok(())
}

fn cmd_reach(a: &AxiomSet, relations: &str, from: &str, to: &str, show_grammar: bool) -> Out {
    let rel = parse_relations(relations)?;
    let mut pg = prop_graph_labelled(&rel);
    pg.add_node(from);
    pg.add_node(to);
    let g = Grammar::from_axioms(a);
    if show_grammar {
        println!("grammar {g}");
    }
    match reachable(&pg, &g, from, to).map_err(invalid)? {
        Some(p) => {
            println!("{p}");
            println!("string {}", p.word());
            Ok(())
        }
        None => Err(invalid("unreachable")),
    }
}

fn cmd_check(a: &AxiomSet, calculus: Calculus, text: &str) -> Out {
    let (nodes, height) = match calculus {
        Calculus::Nested => {
            let p: NestedProof = load_proof(text, &nested_name)?;
            check_nested(&p, a).map_err(invalid)?;
            (p.size(), p.height())
        }
        c => {
            let p: LabelledProof = load_proof(text, &labelled_name)?;
            let mode = match c {
                Calculus::Labelled => Mode::Base,
                Calculus::Refined => Mode::Refined,
                _ => Mode::Either,
            };
            check_labelled(&p, a, mode).map_err(invalid)?;
            (p.size(), p.height())
        }
    };
    println!("ok: {nodes} nodes, height {height}");
    Ok(())
}

fn cmd_refine(a: &AxiomSet, text: &str, output: &Option<PathBuf>) -> Out {
    let p: LabelledProof = load_proof(text, &labelled_name)?;
    let q = eliminate_structural(&p, a).map_err(invalid)?;
    eprintln!("removed {} structural steps; height {} -> {}", p.structural_count(), p.height(), q.height());
    emit(&q.to_json(), output)
}

fn cmd_translate(a: &AxiomSet, to: Target, text: &str, output: &Option<PathBuf>) -> Out {
    let trimmed = text.trim();
    if !trimmed.starts_with('{') {
        let shown = if trimmed.contains("|-") || trimmed.contains('⊢') {
            let l: LabelledSequent = trimmed.parse().map_err(invalid)?;
            match to {
                Target::Nested => to_nested(&l).map_err(invalid)?.to_string(),
                Target::Labelled => l.to_string(),
            }
        } else {
            let n: NestedSequent = trimmed.parse().map_err(invalid)?;
            match to {
                Target::Labelled => to_labelled(&n).map_err(invalid)?.to_string(),
                Target::Nested => n.to_string(),
            }
        };
        return emit(&shown, output);
    }
    let proof = if let Ok(n) = serde_json::from_str::<NestedProof>(trimmed) {
        AnyProof::Nested(n)
    } else {
        AnyProof::Labelled(load_proof(trimmed, &labelled_name)?)
    };
    let dir = match to {
        Target::Nested => Direction::ToNested,
        Target::Labelled => Direction::ToLabelled,
    };
    let json = match translate_proof(&proof, dir, a).map_err(invalid)? {
        AnyProof::Nested(n) => n.to_json(),
        AnyProof::Labelled(l) => l.to_json(),
    };
    emit(&json, output)
}

fn cmd_prove(a: &AxiomSet, goal: &str, as_sequent: bool, limits: SearchLimits, json: bool, output: &Option<PathBuf>) -> Out {
    let s = if as_sequent {
        goal.parse::<NestedSequent>().map_err(invalid)?
    } else {
        NestedSequent::goal(parse_formula(goal).map_err(invalid)?)
    };
    if !s.is_full() {
        return Err(invalid("the goal must have exactly one output formula"));
    }
    let (found, stats) = prove_with_limits(&s, a, limits);
    let Some(p) = found else {
        let why = if stats.exhausted { "expansion budget exhausted" } else { "no proof within the depth bound" };
        return Err(invalid(format!("unproved: {why} ({} expansions)", stats.expansions)));
    };
    check_nested(&p, a).map_err(|e| invalid(format!("internal error, search produced a bad proof: {e}")))?;
    eprintln!("proved {s} with height {} ({} nodes, {} expansions)", p.height(), p.size(), stats.expansions);
    if json || output.is_some() {
        emit(&p.to_json(), output)?;
    } else {
        println!("proved");
    }
    Ok(())
}

fn parse_interp(m: &Model, text: &str) -> Result<Interpretation, Fail> {
    let mut i = Interpretation::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (l, w) = item.split_once('=').ok_or_else(|| usage(format!("expected label=world, found {item:?}")))?;
        i.insert(l.trim().to_string(), m.world(w.trim()).map_err(invalid)?);
    }
    Ok(i)
}

struct Eval<'a> {
    formula: Option<Formula>,
    sequent: Option<LabelledSequent>,
    interp: Option<&'a str>,
    world: Option<&'a str>,
}

/// Whether the formula or sequent holds on `m`, printing per-world detail.
fn eval_on(m: &Model, e: &Eval, verbose: bool) -> Result<bool, Fail> {
    if let Some(f) = &e.formula {
        if let Some(w) = e.world {
            let v = extension(m, f)[m.world(w).map_err(invalid)?];
            if verbose {
                println!("{w}: {v}");
            }
            return Ok(v);
        }
        if verbose {
            let ext = extension(m, f);
            for (w, v) in m.worlds.iter().zip(ext) {
                println!("{w}: {v}");
            }
        }
        return Ok(globally_true(m, f));
    }
    let seq = e.sequent.as_ref().ok_or_else(|| usage("give --formula or --sequent"))?;
    let i = parse_interp(m, e.interp.ok_or_else(|| usage("--sequent needs --interp"))?)?;
    sat_sequent(m, &i, seq).map_err(invalid)
}

fn cmd_model_eval(a: &AxiomSet, model: &Option<PathBuf>, e: &Eval, random_models: u64, max_worlds: usize, seed: u64) -> Out {
    if let Some(path) = model {
        let m: Model = read_input(path)?.parse().map_err(invalid)?;
        let mut problems: Vec<String> = check_model(&m).iter().map(|v| v.to_string()).collect();
        problems.extend(check_frame_conditions(&m, a).iter().map(|v| v.to_string()));
        if !problems.is_empty() {
            return Err(invalid(format!("not a model for {a}:\n  {}", problems.join("\n  "))));
        }
        return if eval_on(&m, e, true)? { Ok(()) } else { Err(invalid("false")) };
    }
    if e.sequent.is_some() {
        return Err(usage("random models only evaluate formulas"));
    }
    if max_worlds == 0 {
        return Err(usage("--max-worlds must be at least 1"));
    }
    for s in seed..seed + random_models {
        let m = random_model(a, max_worlds, s);
        if !eval_on(&m, e, false)? {
            println!("counter-model (seed {s}):\n{m}");
            return Err(invalid("false on a random model"));
        }
    }
    println!("true on {random_models} random models");
    Ok(())
}

fn cmd_axioms(a: &AxiomSet, show_grammar: bool) -> Out {
    let p = Formula::atom("p");
    if a.is_empty() {
        for (name, f) in benchmark_formulas() {
            println!("{name}\t{f}");
        }
    }
    if a.has_d {
        println!("D\t{}", Formula::imp(Formula::boxed(p.clone()), Formula::dia(p.clone())));
    }
    for &(n, k) in &a.hsl {
        println!("hsl({n},{k})\t{}", hsl_formula(n, k, &p));
    }
    if show_grammar {
        println!("grammar\t{}", Grammar::from_axioms(a));
    }
    Ok(())
}

fn run(cli: Cli) -> Out {
    match cli.cmd {
        Cmd::Parse { kind, text } => cmd_parse(kind, &text),
        Cmd::Reach { axioms, relations, from, to, grammar } => cmd_reach(&axioms.resolve()?, &relations, &from, &to, grammar),
        Cmd::Check { axioms, calculus, file } => cmd_check(&axioms.resolve()?, calculus, &read_input(&file)?),
        Cmd::Refine { axioms, file, output } => cmd_refine(&axioms.resolve()?, &read_input(&file)?, &output),
        Cmd::Translate { axioms, to, file, output } => cmd_translate(&axioms.resolve()?, to, &read_input(&file)?, &output),
        Cmd::Prove { axioms, depth, max_expansions, sequent, json, output, goal } => {
            let limits = SearchLimits { depth, max_expansions };
            cmd_prove(&axioms.resolve()?, &goal, sequent, limits, json, &output)
        }
        Cmd::ModelEval { axioms, model, formula, sequent, interp, world, random_models, max_worlds, seed } => {
            let e = Eval {
                formula: formula.map(|f| parse_formula(&f)).transpose().map_err(invalid)?,
                sequent: sequent.map(|s| s.parse::<LabelledSequent>()).transpose().map_err(invalid)?,
                interp: interp.as_deref(),
                world: world.as_deref(),
            };
            cmd_model_eval(&axioms.resolve()?, &model, &e, random_models, max_worlds, seed)
        }
        Cmd::Axioms { axioms, grammar } => cmd_axioms(&axioms.resolve()?, grammar),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
