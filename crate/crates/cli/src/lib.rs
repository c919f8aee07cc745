//! Command-line front end. [`run_cli`] returns the exit code and the report
//! text so it can be driven from tests without a subprocess.
//!
//! Exit codes: 0 success, 1 refuted or failing, 2 unknown, 3 input error.

use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use monoidlab::eqlogic::{derive_bounded, refute, replay, IdentityBasis, Verdict};
use monoidlab::finmon::{enumerate_monoids, parse_monoid_file, resolve_monoid_name, FiniteMonoid, Satisfaction};
use monoidlab::lab::{
    render_reports, run_grid, scenario_lemma2_with, scenario_special_elements, scenario_theorem_steps_with, Budgets,
    Registry, ScenarioReport, Status,
};
use monoidlab::lattice::{
    boolean_lattice, chain, classify_element, diamond, enumerate_lattices, find_pentagon_witness,
    mine_modular_lower_modular_not_standard, parse_lattice_file, pentagon, render_lattice, FiniteLattice,
    MAX_LATTICE_SIZE,
};
use monoidlab::varieties::{membership_in_join, FreeObject, IsotermVerdict, Membership, WordAutomaton};
use monoidlab::word::{parse_identities, Identity, Letter, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "monoidlab", version, about = "Finite monoids, identities, varieties and lattice elements")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a monoid satisfies an identity.
    Check {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        identity: String,
    },
    /// Search for a derivation of an identity from a basis.
    Derive {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Search small monoids for a model of a basis violating an identity.
    Refute {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Decide whether a monoid lies in the variety generated by others.
    Member {
        #[arg(long)]
        monoid: String,
        /// Generator of the ambient variety; repeat for a join.
        #[arg(long = "in", required = true)]
        ambient: Vec<String>,
    },
    /// Decide whether a word is an isoterm for the variety generated by a monoid.
    Isoterm {
        /// Repeat for a join.
        #[arg(long, required = true)]
        monoid: Vec<String>,
        #[arg(long)]
        word: String,
        /// Also list the words equal to `word` up to this length.
        #[arg(long)]
        class: Option<usize>,
    },
    /// Build the relatively free object of a given rank.
    Free {
        #[arg(long, required = true)]
        monoid: Vec<String>,
        #[arg(long)]
        rank: usize,
        /// Print at most this many representatives.
        #[arg(long, default_value_t = 50)]
        show: usize,
    },
    /// Lattice element classification, enumeration and mining.
    Lattice(LatticeArgs),
    /// Run a scenario.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
    /// List all monoids of a size up to isomorphism.
    Enumerate {
        size: usize,
        /// Print full tables.
        #[arg(long)]
        tables: bool,
    },
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[arg(long, conflicts_with_all = ["builtin", "enumerate"])]
    file: Option<String>,
    /// N5, M3, B<k> or chain<n>.
    #[arg(long, conflicts_with = "enumerate")]
    builtin: Option<String>,
    #[arg(long)]
    element: Option<usize>,
    #[arg(long)]
    classify: bool,
    #[arg(long)]
    pentagon: bool,
    #[arg(long)]
    enumerate: Option<usize>,
    /// Only `modular-lowermodular-not-standard` is supported.
    #[arg(long)]
    mine: Option<String>,
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    Lemma2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    Theorem {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    Special,
    /// The default parameter grid.
    Grid {
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Error)]
enum InputError {
    #[error("{0}")]
    Message(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn input(msg: impl std::fmt::Display) -> InputError {
    InputError::Message(msg.to_string())
}

struct Output {
    code: i32,
    text: String,
    json: Value,
}

impl Output {
    fn new(code: i32, text: String, json: Value) -> Output {
        Output { code, text, json }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json output") + "\n"
            } else {
                out.text
            };
            (out.code, text)
        }
        Err(e) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&json!({ "status": "input_error", "error": e.to_string() })).unwrap() + "\n"
            } else {
                format!("error: {e}\n")
            };
            (EXIT_INPUT, text)
        }
    }
}

fn dispatch(command: &Command) -> Result<Output, InputError> {
    let budgets = Budgets::from_env().map_err(input)?;
    match command {
        Command::Check { monoid, identity } => check(monoid, identity),
        Command::Derive { basis, goal, max_steps, max_len } => derive(basis, goal, *max_steps, *max_len, &budgets),
        Command::Refute { basis, goal, max_size } => refute_cmd(basis, goal, *max_size),
        Command::Member { monoid, ambient } => member(monoid, ambient, &budgets),
        Command::Isoterm { monoid, word, class } => isoterm_cmd(monoid, word, *class, &budgets),
        Command::Free { monoid, rank, show } => free(monoid, *rank, *show, &budgets),
        Command::Lattice(args) => lattice(args),
        Command::Scenario(s) => scenario(s, &budgets),
        Command::Enumerate { size, tables } => enumerate(*size, *tables),
    }
}

fn read(path: &str) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_string(), source })
}

/// A file of monoid blocks (first one used), a `construct ...` line, or a
/// built-in name.
fn load_monoid(spec: &str) -> Result<FiniteMonoid, InputError> {
    let spec = spec.trim();
    if Path::new(spec).is_file() {
        let ms = parse_monoid_file(&read(spec)?).map_err(input)?;
        return ms.into_iter().next().ok_or_else(|| input(format!("{spec}: no monoid")));
    }
    if spec.starts_with("construct ") || spec.contains('\n') {
        let ms = parse_monoid_file(spec).map_err(input)?;
        return ms.into_iter().last().ok_or_else(|| input("no monoid"));
    }
    resolve_monoid_name(spec).map_err(input)
}

fn load_monoids(specs: &[String]) -> Result<Vec<FiniteMonoid>, InputError> {
    specs.iter().map(|s| load_monoid(s)).collect()
}

/// A file of identities, a registry variety name, or identities separated
/// by `,`, `;` or newlines.
fn load_basis(spec: &str) -> Result<IdentityBasis, InputError> {
    if Path::new(spec).is_file() {
        return IdentityBasis::parse(&read(spec)?).map_err(input);
    }
    let registry = Registry::standard().map_err(input)?;
    if let Some(b) = registry.basis(spec.trim()) {
        return Ok(b.clone());
    }
    let text = spec.replace([',', ';'], "\n");
    parse_identities(&text).map(IdentityBasis::new).map_err(input)
}

fn parse_identity(text: &str) -> Result<Identity, InputError> {
    Identity::parse(text).map_err(input)
}

fn parse_word(text: &str) -> Result<Word, InputError> {
    Word::parse(text).map_err(input)
}

fn check(monoid: &str, identity: &str) -> Result<Output, InputError> {
    let m = load_monoid(monoid)?;
    let id = parse_identity(identity)?;
    Ok(match m.satisfies(&id) {
        Satisfaction::Holds => Output::new(
            EXIT_OK,
            format!("{}: {id}: holds\n", m.label()),
            json!({ "monoid": m.label(), "identity": id.to_string(), "status": "holds" }),
        ),
        Satisfaction::Fails(a) => {
            let l = m.evaluate(&a, &id.lhs).expect("total assignment");
            let r = m.evaluate(&a, &id.rhs).expect("total assignment");
            let witness = a.describe(&m);
            Output::new(
                EXIT_FAILS,
                format!(
                    "{}: {id}: fails [{witness}]\n  {} = {}, {} = {}\n",
                    m.label(),
                    id.lhs,
                    m.element_name(l),
                    id.rhs,
                    m.element_name(r)
                ),
                json!({
                    "monoid": m.label(),
                    "identity": id.to_string(),
                    "status": "fails",
                    "witness": witness,
                    "lhs_value": m.element_name(l),
                    "rhs_value": m.element_name(r),
                }),
            )
        }
    })
}

fn derive(
    basis: &str,
    goal: &str,
    max_steps: Option<usize>,
    max_len: Option<usize>,
    budgets: &Budgets,
) -> Result<Output, InputError> {
    let basis = load_basis(basis)?;
    let goal = parse_identity(goal)?;
    let mut budget = budgets.search(&goal);
    if let Some(s) = max_steps {
        budget.max_steps = s;
    }
    if let Some(l) = max_len {
        budget.max_word_len = l;
    }
    let result = derive_bounded(&basis, &goal, budget);
    let stats = json!({
        "expanded": result.stats.expanded,
        "visited": result.stats.visited,
        "exhausted": result.stats.exhausted,
    });
    Ok(match &result.verdict {
        Verdict::Proved { trace } => {
            replay(&basis, &goal, trace).map_err(|e| input(format!("internal: trace does not replay: {e}")))?;
            let mut text = format!("{goal}: proved in {} steps\n  {}\n", trace.len(), goal.lhs);
            for step in trace {
                text.push_str(&format!("  = {step}\n"));
            }
            let steps: Vec<Value> = trace
                .iter()
                .map(|s| {
                    json!({
                        "result": s.result.to_string(),
                        "identity": s.identity,
                        "direction": format!("{:?}", s.direction),
                        "position": s.position,
                        "substitution": s.substitution.to_string(),
                    })
                })
                .collect();
            Output::new(
                EXIT_OK,
                text,
                json!({ "goal": goal.to_string(), "status": "proved", "trace": steps, "stats": stats }),
            )
        }
        _ => Output::new(
            EXIT_UNKNOWN,
            format!(
                "{goal}: unknown (expanded {}, visited {}, exhausted {})\n",
                result.stats.expanded, result.stats.visited, result.stats.exhausted
            ),
            json!({ "goal": goal.to_string(), "status": "unknown", "stats": stats }),
        ),
    })
}

fn refute_cmd(basis: &str, goal: &str, max_size: usize) -> Result<Output, InputError> {
    let basis = load_basis(basis)?;
    let goal = parse_identity(goal)?;
    let result = refute(&basis, &goal, max_size).map_err(input)?;
    Ok(match result.verdict {
        Verdict::Refuted { model, assignment } => {
            let witness = assignment.describe(&model);
            Output::new(
                EXIT_FAILS,
                format!("{goal}: refuted by {} [{witness}]\n{model}", model.label()),
                json!({
                    "goal": goal.to_string(),
                    "status": "refuted",
                    "model": model.label(),
                    "size": model.size(),
                    "table": model.rows(),
                    "witness": witness,
                }),
            )
        }
        _ => Output::new(
            EXIT_UNKNOWN,
            format!("{goal}: unknown (no countermodel of size <= {max_size})\n"),
            json!({ "goal": goal.to_string(), "status": "unknown", "max_size": max_size }),
        ),
    })
}

fn member(monoid: &str, ambient: &[String], budgets: &Budgets) -> Result<Output, InputError> {
    let m = load_monoid(monoid)?;
    let factors = load_monoids(ambient)?;
    let names: Vec<&str> = factors.iter().map(|f| f.label()).collect();
    let target = names.join(" v ");
    Ok(match membership_in_join(&m, &factors, budgets.free_elements) {
        Membership::Member => Output::new(
            EXIT_OK,
            format!("{} in var {target}: member\n", m.label()),
            json!({ "monoid": m.label(), "variety": target, "status": "member" }),
        ),
        Membership::NonMember { identity, assignment } => {
            let witness = assignment.describe(&m);
            Output::new(
                EXIT_FAILS,
                format!("{} in var {target}: non_member [{identity} fails at {witness}]\n", m.label()),
                json!({
                    "monoid": m.label(),
                    "variety": target,
                    "status": "non_member",
                    "identity": identity.to_string(),
                    "witness": witness,
                }),
            )
        }
        Membership::Unknown(e) => Output::new(
            EXIT_UNKNOWN,
            format!("{} in var {target}: unknown ({e})\n", m.label()),
            json!({ "monoid": m.label(), "variety": target, "status": "unknown", "reason": e.to_string() }),
        ),
    })
}

fn isoterm_cmd(monoids: &[String], word: &str, class: Option<usize>, budgets: &Budgets) -> Result<Output, InputError> {
    let factors = load_monoids(monoids)?;
    let w = parse_word(word)?;
    if w.is_empty() {
        return Err(input("isoterms are non-empty words"));
    }
    let target = factors.iter().map(|f| f.label()).collect::<Vec<_>>().join(" v ");
    let automaton = match WordAutomaton::build(&factors, &w, budgets.free_elements) {
        Ok(a) => a,
        Err(e) => {
            return Ok(Output::new(
                EXIT_UNKNOWN,
                format!("{w} in var {target}: unknown ({e})\n"),
                json!({ "word": w.to_string(), "variety": target, "status": "unknown", "reason": e.to_string() }),
            ))
        }
    };
    let verdict = automaton.verdict();
    let (code, mut text, mut value) = match &verdict {
        IsotermVerdict::Isoterm => (
            EXIT_OK,
            format!("{w} in var {target}: isoterm\n"),
            json!({ "word": w.to_string(), "variety": target, "status": "isoterm" }),
        ),
        IsotermVerdict::NotIsoterm(v) => (
            EXIT_FAILS,
            format!("{w} in var {target}: not_isoterm [{w} = {v}]\n"),
            json!({ "word": w.to_string(), "variety": target, "status": "not_isoterm", "witness": v.to_string() }),
        ),
        IsotermVerdict::Unknown(_) => unreachable!("the automaton was built"),
    };
    value["states"] = json!(automaton.state_count());
    if let Some(cap) = class {
        let c = automaton.class(cap);
        let words: Vec<String> = c.words.iter().map(|v| v.to_string()).collect();
        text.push_str(&format!(
            "  class up to length {cap}: {}{}\n",
            words.join(", "),
            if c.infinite { " (infinite)" } else { "" }
        ));
        value["class"] = json!({ "length_cap": cap, "infinite": c.infinite, "words": words });
    }
    Ok(Output::new(code, text, value))
}

fn free(monoids: &[String], rank: usize, show: usize, budgets: &Budgets) -> Result<Output, InputError> {
    let factors = load_monoids(monoids)?;
    let letters: Vec<Letter> = Letter::variables().take(rank).collect();
    if letters.len() < rank {
        return Err(input(format!("rank {rank} exceeds the available letters")));
    }
    let target = factors.iter().map(|f| f.label()).collect::<Vec<_>>().join(" v ");
    Ok(match FreeObject::build(&factors, &letters, budgets.free_elements) {
        Ok(f) => {
            let reps: Vec<String> = f.representatives().iter().take(show).map(|r| r.to_string()).collect();
            let more = if f.size() > show { format!(" ... ({} more)", f.size() - show) } else { String::new() };
            Output::new(
                EXIT_OK,
                format!("free object of var {target} of rank {rank}: {} elements\n  {}{more}\n", f.size(), reps.join(", ")),
                json!({ "variety": target, "rank": rank, "status": "built", "size": f.size(), "representatives": reps }),
            )
        }
        Err(e) => Output::new(
            EXIT_UNKNOWN,
            format!("free object of var {target} of rank {rank}: unknown ({e})\n"),
            json!({ "variety": target, "rank": rank, "status": "unknown", "reason": e.to_string() }),
        ),
    })
}

fn builtin_lattice(name: &str) -> Result<FiniteLattice, InputError> {
    let upper = name.to_ascii_uppercase();
    match upper.as_str() {
        "N5" => return Ok(pentagon()),
        "M3" => return Ok(diamond()),
        _ => {}
    }
    let parse = |s: &str| s.parse::<usize>().ok();
    if let Some(k) = upper.strip_prefix('B').and_then(parse).filter(|&k| k <= 4) {
        return Ok(boolean_lattice(k));
    }
    if let Some(n) = upper.strip_prefix("CHAIN").and_then(parse).filter(|&n| (1..=64).contains(&n)) {
        return Ok(chain(n));
    }
    Err(input(format!("unknown lattice {name:?}; expected N5, M3, B<k> or chain<n>")))
}

fn lattice(args: &LatticeArgs) -> Result<Output, InputError> {
    if let Some(n) = args.enumerate {
        return lattice_enumerate(n, args.mine.as_deref());
    }
    if args.mine.is_some() {
        return Err(input("--mine needs --enumerate <max size>"));
    }
    let l = match (&args.file, &args.builtin) {
        (Some(f), _) => parse_lattice_file(&read(f)?)
            .map_err(input)?
            .into_iter()
            .next()
            .expect("parser rejects empty input"),
        (None, Some(b)) => builtin_lattice(b)?,
        (None, None) => return Err(input("lattice needs --file, --builtin or --enumerate")),
    };
    let elements: Vec<usize> = match args.element {
        Some(e) if e < l.size() => vec![e],
        Some(e) => return Err(input(format!("element {e} out of range for a lattice of size {}", l.size()))),
        None => l.elements().collect(),
    };
    let classify = args.classify || !args.pentagon;
    let mut text = format!("lattice {} of size {}\n", l.label(), l.size());
    let mut rows = Vec::new();
    for &x in &elements {
        let mut row = json!({ "element": x, "name": l.element_name(x) });
        if classify {
            let r = classify_element(&l, x).map_err(input)?;
            let flags: Vec<String> = monoidlab::lattice::Property::ALL
                .iter()
                .map(|&p| format!("{}={}", p.name(), r.get(p)))
                .collect();
            text.push_str(&format!("{}: {}\n", l.element_name(x), flags.join(" ")));
            for (p, (y, z)) in &r.witnesses {
                text.push_str(&format!("  {p} fails at (y, z) = ({}, {})\n", l.element_name(*y), l.element_name(*z)));
            }
            row["report"] = serde_json::to_value(&r).expect("report serializes");
        }
        if args.pentagon {
            match find_pentagon_witness(&l, x) {
                Some((u, w)) => {
                    let (sub, embedding) = l.sublattice_generated(&[u, w, x]);
                    text.push_str(&format!(
                        "{}: pentagon (u, w) = ({}, {}), sublattice {{{}}}\n",
                        l.element_name(x),
                        l.element_name(u),
                        l.element_name(w),
                        embedding.iter().map(|&e| l.element_name(e)).collect::<Vec<_>>().join(", ")
                    ));
                    row["pentagon"] = json!({ "u": u, "w": w, "sublattice": embedding, "sublattice_size": sub.size() });
                }
                None => {
                    text.push_str(&format!("{}: no pentagon (modular)\n", l.element_name(x)));
                    row["pentagon"] = Value::Null;
                }
            }
        }
        rows.push(row);
    }
    Ok(Output::new(
        EXIT_OK,
        text,
        json!({ "lattice": l.label(), "size": l.size(), "status": "classified", "elements": rows }),
    ))
}

fn lattice_enumerate(n: usize, mine: Option<&str>) -> Result<Output, InputError> {
    match mine {
        None => {
            let ls = enumerate_lattices(n).map_err(input)?;
            let mut text = format!("{} lattices of size {n}\n", ls.len());
            for l in ls {
                text.push_str(&render_lattice(l));
            }
            let list: Vec<Value> = ls
                .iter()
                .map(|l| json!({ "name": l.label(), "covers": l.covers() }))
                .collect();
            Ok(Output::new(EXIT_OK, text, json!({ "size": n, "count": ls.len(), "lattices": list })))
        }
        Some("modular-lowermodular-not-standard") => {
            if n > MAX_LATTICE_SIZE {
                return Err(input(format!("mining is limited to size {MAX_LATTICE_SIZE}")));
            }
            Ok(match mine_modular_lower_modular_not_standard(n).map_err(input)? {
                Some(found) => {
                    let (y, z) = found.standard_witness;
                    let verified = found.verify();
                    let text = format!(
                        "found: element {} of {} (size {})\n  standard fails at (y, z) = ({y}, {z})\n  certificate verified: {verified}\n{}",
                        found.element,
                        found.lattice.label(),
                        found.lattice.size(),
                        render_lattice(&found.lattice)
                    );
                    Output::new(
                        if verified { EXIT_OK } else { EXIT_FAILS },
                        text,
                        json!({
                            "status": "found",
                            "lattice": found.lattice.label(),
                            "size": found.lattice.size(),
                            "covers": found.lattice.covers(),
                            "element": found.element,
                            "standard_witness": [y, z],
                            "verified": verified,
                        }),
                    )
                }
                None => Output::new(
                    EXIT_UNKNOWN,
                    format!("no example up to size {n}\n"),
                    json!({ "status": "none", "max_size": n }),
                ),
            })
        }
        Some(other) => Err(input(format!("unknown mining target {other:?}"))),
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAILS,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn scenario(command: &ScenarioCommand, budgets: &Budgets) -> Result<Output, InputError> {
    let reports: Vec<ScenarioReport> = match *command {
        ScenarioCommand::Lemma2 { n, m } => vec![scenario_lemma2_with(n, m, budgets).map_err(input)?],
        ScenarioCommand::Theorem { r, s, t } => vec![scenario_theorem_steps_with(r, s, t, budgets).map_err(input)?],
        ScenarioCommand::Special => vec![scenario_special_elements().map_err(input)?],
        ScenarioCommand::Grid { sequential } => run_grid(!sequential, budgets).map_err(input)?,
    };
    let code = reports.iter().map(|r| status_code(r.status)).fold(EXIT_OK, |acc, c| match (acc, c) {
        (EXIT_FAILS, _) | (_, EXIT_FAILS) => EXIT_FAILS,
        (EXIT_UNKNOWN, _) | (_, EXIT_UNKNOWN) => EXIT_UNKNOWN,
        _ => EXIT_OK,
    });
    let value = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).expect("report serializes")
    } else {
        json!({ "reports": reports })
    };
    Ok(Output::new(code, render_reports(&reports), value))
}

fn enumerate(size: usize, tables: bool) -> Result<Output, InputError> {
    let ms = enumerate_monoids(size).map_err(input)?;
    let mut text = format!("{} monoids of size {size} up to isomorphism\n", ms.len());
    for m in ms {
        if tables {
            text.push_str(&m.to_string());
        } else {
            let rows: Vec<String> = m
                .rows()
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            text.push_str(&format!("{}: {}\n", m.label(), rows.join(" | ")));
        }
    }
    let list: Vec<Value> = ms.iter().map(|m| json!({ "name": m.label(), "table": m.rows() })).collect();
    Ok(Output::new(EXIT_OK, text, json!({ "size": size, "count": ms.len(), "monoids": list })))
}
