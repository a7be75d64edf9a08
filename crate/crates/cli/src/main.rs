use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mtrans::format::{deserialize, serialize, to_dot};
use mtrans::learner::{LearnEvent, Learner};
use mtrans::oracle::{
    brute_force_diff, equivalence, equivalence_oracle, membership_oracle, AbortingEquivalence,
    AdversarialOracle,
};
use mtrans::transducer::render_word;
use mtrans::{
    check_minimal, minimize, samples, EquivalenceVerdict, Error, LearnStats, Limits, StagedMinimization,
    Transducer,
};

const STATS_FORMAT_VERSION: u32 = 1;

const EXIT_DIFFERENT: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_UNDEFINED: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "mtrans", version, about = "Subsequential transducers with monoid outputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the value of a word (⊥ and exit code 3 when undefined).
    Eval {
        #[arg(long)]
        machine: PathBuf,
        /// Letters joined by `·`, or a bare string when all letters are single characters.
        word: String,
    },
    /// Write the minimal machine recognizing the same function.
    Minimize {
        #[arg(long)]
        machine: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Also write the reach, total and prefix stages and a witness report.
        #[arg(long)]
        emit_stages: bool,
        /// Also write a Graphviz rendering of the minimal machine.
        #[arg(long)]
        dot: bool,
    },
    /// Learn the minimal machine of a target through membership and equivalence queries.
    Learn {
        #[arg(long)]
        target: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Write the query and update counters to this file.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_q: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        max_iterations: u64,
    },
    /// Decide whether two machines recognize the same function.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Length bound of the exhaustive cross-check of an `equivalent` verdict.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Scripted demonstrations.
    Demo {
        #[command(subcommand)]
        scenario: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Learner against an adversarial teacher: diverges over the free monoid,
    /// terminates once α and β commute.
    Nontermination {
        /// Largest |Q| of the free-monoid run.
        #[arg(long, default_value_t = 25)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Eval { machine, word } => cmd_eval(&machine, &word),
        Command::Minimize {
            machine,
            output,
            emit_stages,
            dot,
        } => cmd_minimize(&machine, &output, emit_stages, dot),
        Command::Learn {
            target,
            output,
            stats,
            max_q,
            max_iterations,
        } => {
            let limits = Limits {
                max_q: max_q as usize,
                max_iterations: max_iterations as usize,
            };
            cmd_learn(&target, &output, stats.as_deref(), limits)
        }
        Command::Equiv { left, right, max_len } => cmd_equiv(&left, &right, max_len),
        Command::Demo {
            scenario: Demo::Nontermination { cap },
        } => cmd_demo_nontermination(cap),
    }
}

fn load(path: &Path) -> anyhow::Result<Transducer> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let loaded = deserialize(&text).with_context(|| format!("loading {}", path.display()))?;
    for warning in &loaded.warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }
    Ok(loaded.machine)
}

/// Fails early when an output path cannot be created.
fn check_writable(path: &Path) -> anyhow::Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    ensure!(parent.is_dir(), "output directory {} does not exist", parent.display());
    ensure!(!path.is_dir(), "output path {} is a directory", path.display());
    Ok(())
}

/// Writes every file or none: contents are computed before this is called,
/// and files already written are removed if a later write fails.
fn write_all(files: &[(PathBuf, String)]) -> anyhow::Result<()> {
    for (k, (path, contents)) in files.iter().enumerate() {
        if let Err(e) = fs::write(path, contents) {
            for (written, _) in &files[..k] {
                let _ = fs::remove_file(written);
            }
            return Err(e).with_context(|| format!("writing {}", path.display()));
        }
    }
    Ok(())
}

/// `out.json` with its extension replaced by `suffix`, e.g. `out.reach.json`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_eval(machine: &Path, word: &str) -> anyhow::Result<u8> {
    let t = load(machine)?;
    let w = t.parse_word(word)?;
    let value = t.eval(&w)?;
    println!("{}", t.monoid().render_partial(&value));
    Ok(if value.is_some() { 0 } else { EXIT_UNDEFINED })
}

fn cmd_minimize(machine: &Path, output: &Path, emit_stages: bool, dot: bool) -> anyhow::Result<u8> {
    check_writable(output)?;
    let t = load(machine)?;
    let staged = minimize(&t)?;
    if !check_minimal(&staged.minimal) {
        bail!(Error::InternalInconsistency("minimized machine fails the minimality check".into()));
    }

    let mut files = vec![(output.to_path_buf(), serialize(&staged.minimal))];
    if emit_stages {
        files.push((sibling(output, ".reach.json"), serialize(&staged.reach)));
        files.push((sibling(output, ".total.json"), serialize(&staged.total)));
        files.push((sibling(output, ".prefix.json"), serialize(&staged.prefix)));
        files.push((sibling(output, ".witnesses.json"), witness_report(&staged)));
    }
    if dot {
        files.push((output.with_extension("dot"), to_dot(&staged.minimal)));
    }
    write_all(&files)?;
    let counts = staged.state_counts();
    eprintln!(
        "states: input {}, reach {}, total {}, prefix {}, minimal {}",
        t.num_states(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );
    Ok(0)
}

/// For each state of the prefix stage, the state of the minimal machine it
/// was merged into and the invertible factor relating their functions.
fn witness_report(staged: &StagedMinimization) -> String {
    let m = staged.prefix.monoid();
    let witnesses: Vec<Value> = staged
        .state_witnesses
        .iter()
        .map(|w| {
            json!({
                "state": w.state,
                "representative": w.representative,
                "witness": m.to_json(&w.witness),
            })
        })
        .collect();
    let doc = json!({
        "format_version": STATS_FORMAT_VERSION,
        "state_counts": {
            "reach": staged.reach.num_states(),
            "total": staged.total.num_states(),
            "prefix": staged.prefix.num_states(),
            "minimal": staged.minimal.num_states(),
        },
        "witnesses": witnesses,
    });
    pretty(&doc)
}

fn pretty(doc: &Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("in-memory JSON serialization");
    text.push('\n');
    text
}

fn stats_document(stats: &LearnStats, outcome: &str) -> String {
    pretty(&json!({
        "format_version": STATS_FORMAT_VERSION,
        "outcome": outcome,
        "membership_queries": stats.membership_queries,
        "equivalence_queries": stats.equivalence_queries,
        "q_updates": stats.q_updates,
        "t_updates": stats.t_updates,
        "loop_iterations": stats.loop_iterations,
    }))
}

fn cmd_learn(target: &Path, output: &Path, stats_path: Option<&Path>, limits: Limits) -> anyhow::Result<u8> {
    check_writable(output)?;
    if let Some(p) = stats_path {
        check_writable(p)?;
    }
    let t = load(target)?;
    let mem = membership_oracle(t.clone());
    let eq = equivalence_oracle(t.clone());
    let mut learner = Learner::new(t.monoid().clone(), t.alphabet().to_vec(), &mem, &eq, limits)?;
    match learner.run() {
        Ok(learned) => {
            let stats = learner.stats();
            if !check_minimal(&learned) {
                bail!(Error::InternalInconsistency("learned machine is not minimal".into()));
            }
            let mut files = vec![(output.to_path_buf(), serialize(&learned))];
            if let Some(p) = stats_path {
                files.push((p.to_path_buf(), stats_document(&stats, "learned")));
            }
            write_all(&files)?;
            eprintln!(
                "learned {} states with {} membership and {} equivalence queries",
                learned.num_states(),
                stats.membership_queries,
                stats.equivalence_queries
            );
            Ok(0)
        }
        Err(Error::BudgetExceeded { stats }) => {
            let doc = stats_document(&stats, "budget_exceeded");
            match stats_path {
                Some(p) => write_all(&[(p.to_path_buf(), doc)])?,
                None => eprint!("{doc}"),
            }
            eprintln!(
                "error: budget exceeded (|Q| = {}, {} loop iterations); no machine written",
                learner.table().prefixes().len(),
                stats.loop_iterations
            );
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_equiv(left: &Path, right: &Path, max_len: usize) -> anyhow::Result<u8> {
    let l = load(left)?;
    let r = load(right)?;
    match equivalence(&l, &r)? {
        EquivalenceVerdict::Equivalent => {
            if let Some(w) = brute_force_diff(&l, &r, max_len)? {
                bail!(Error::InternalInconsistency(format!(
                    "machines judged equivalent differ on {}",
                    l.render_word(&w)
                )));
            }
            println!("equivalent");
            Ok(0)
        }
        EquivalenceVerdict::CounterExample { word, left: lv, right: rv } => {
            let m = l.monoid();
            println!("{}", l.render_word(&word));
            println!("left: {}", m.render_partial(&lv));
            println!("right: {}", m.render_partial(&rv));
            Ok(EXIT_DIFFERENT)
        }
    }
}

fn cmd_demo_nontermination(cap: usize) -> anyhow::Result<u8> {
    ensure!(cap >= 2, "--cap must be at least 2");
    let alphabet = AdversarialOracle::alphabet();
    let word = |w: &[mtrans::Letter]| render_word(&alphabet, w);

    let adversary = AdversarialOracle::free();
    let m = adversary.monoid().clone();
    println!("free monoid {{α, β, γ}}*, teacher answers aⁿ ↦ αⁿβⁿγ, cap |Q| ≤ {cap}");
    let limits = Limits {
        max_q: cap,
        ..Limits::default()
    };
    let mut learner = Learner::new(m.clone(), alphabet.clone(), &adversary, &AbortingEquivalence, limits)?;
    let stats = match learner.run() {
        Err(Error::BudgetExceeded { stats }) => stats,
        Ok(_) => bail!(Error::InternalInconsistency("free-monoid run terminated".into())),
        Err(e) => return Err(e.into()),
    };
    let table = learner.table();
    let repairs: Vec<String> = learner
        .events()
        .iter()
        .filter_map(|e| match e {
            LearnEvent::Defect(d) => Some(d.render(&alphabet)),
            _ => None,
        })
        .collect();
    println!("repairs: {}", repairs.join(", "));
    let suffixes: Vec<String> = table.suffixes().iter().map(|w| word(w)).collect();
    for (k, q) in table.prefixes().iter().enumerate() {
        println!(
            "C{k}: Q = {{a^k | k ≤ {k}}}, T = {{{}}}, Λ({}) = {}, R({}, ε) = {}",
            suffixes.join(", "),
            word(q),
            m.render_partial(table.lambda(k, None)),
            word(q),
            m.render_partial(&table.row(k, None)[0]),
        );
    }
    println!(
        "stopped: |Q| = {} > {cap} after {} loop iterations, {} membership queries, {} equivalence queries",
        table.prefixes().len(),
        stats.loop_iterations,
        stats.membership_queries,
        stats.equivalence_queries
    );

    println!();
    let trace = samples::alpha_beta_trace();
    println!("trace monoid {{α, β, γ}}* with αβ = βα, same teacher");
    let adversary = AdversarialOracle::new(trace.clone())?;
    let eq = equivalence_oracle(samples::ab_power(trace.clone()));
    let mut learner = Learner::new(trace.clone(), alphabet.clone(), &adversary, &eq, Limits::default())?;
    let learned = learner.run()?;
    let stats = learner.stats();
    println!(
        "learned {} state(s) after {} loop iterations, {} membership queries, {} equivalence queries",
        learned.num_states(),
        stats.loop_iterations,
        stats.membership_queries,
        stats.equivalence_queries
    );
    if let Some((v, s)) = learned.initial() {
        println!("initial: {} → {}", trace.render(v), learned.states()[*s]);
    }
    for (s, name) in learned.states().iter().enumerate() {
        println!("termination {name}: {}", trace.render_partial(learned.termination(s)));
    }
    for (s, a, tr) in learned.transitions() {
        println!(
            "{} --{} / {}--> {}",
            learned.states()[s],
            alphabet[a],
            trace.render(&tr.output),
            learned.states()[tr.target]
        );
    }
    Ok(0)
}
