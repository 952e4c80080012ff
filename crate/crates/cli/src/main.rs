//! `dkatl`: bounded model checking for strategic ability under imperfect
//! information, from the shell.
//!
//! Exit codes: 0 true / ok, 1 false / failed, 2 error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dkatl::format::{builtin, load_model, save_model, LoadError, BUILTINS};
use dkatl::formula::ParseError;
use dkatl::harness::{self, CampaignReport, Polarity, SuiteConfig, SuiteReport, SCHEMAS};
use dkatl::{parse, parse_history, resolve, Checker, EvalOptions, Model};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "dkatl",
    version,
    about = "Bounded model checker for ATL with imperfect information, perfect recall and distributed knowledge"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model for well-formedness.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a formula at a history.
    Check {
        #[command(flatten)]
        source: Source,
        /// History such as `q0 -(L,n,n)-> q1`.
        #[arg(long)]
        history: String,
        #[arg(long)]
        formula: String,
        /// Transition budget; defaults to 3 or the formula's nesting depth if larger.
        #[arg(long)]
        horizon: Option<u32>,
        /// Print a uniform strategy for a true coalition formula.
        #[arg(long)]
        witness: bool,
        /// Re-evaluate at horizon + 1 and report whether the verdict changed.
        #[arg(long)]
        stable_check: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the counterexample campaign for one schema.
    Falsify {
        /// Schema name; omit to list all schemata.
        schema: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full regression: built-in verdicts and every campaign.
    Suite {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the built-in models, or print one as a model file.
    Builtin {
        name: Option<String>,
        /// Print the canonical form instead of the annotated document.
        #[arg(long)]
        canonical: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in model name (M1 to M4).
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a model file.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut String) -> Result<u8, Failure> {
    match command {
        Command::Validate { source, format } => validate(&source, format, out),
        Command::Check { source, history, formula, horizon, witness, stable_check, format } => {
            let m = load(&source)?;
            check(&m, &history, &formula, horizon, EvalOptions { horizon: 0, witness, stable_check }, format, out)
        }
        Command::Falsify { schema: None, .. } => {
            for s in SCHEMAS {
                let _ = writeln!(out, "{:<30} {:<11} {}", s.name, polarity(s.polarity), s.text());
            }
            Ok(0)
        }
        Command::Falsify { schema: Some(name), trials, seed, format } => {
            let s = harness::schema(&name).ok_or_else(|| Failure(format!("unknown schema `{name}`")))?;
            let r = harness::check_schema(s, seed, trials);
            match format {
                Format::Structured => out.push_str(&(structured("dkatl-campaign/1", &r) + "\n")),
                Format::Text => out.push_str(&campaign_text(&r, true)),
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Suite { seed, trials, format } => {
            let r = harness::run_suite(SuiteConfig::scaled(seed, trials));
            match format {
                Format::Structured => out.push_str(&(serde_json::to_string_pretty(&r)? + "\n")),
                Format::Text => out.push_str(&suite_text(&r)),
            }
            Ok(if r.passed { 0 } else { 1 })
        }
        Command::Builtin { name: None, .. } => {
            for name in BUILTINS {
                let suite = builtin(name)?;
                let _ = writeln!(
                    out,
                    "{name}: {} agents, {} states, {} checks",
                    suite.model.agent_count(),
                    suite.model.state_count(),
                    suite.checks.len()
                );
                for c in &suite.checks {
                    let _ = writeln!(out, "  {c}");
                }
            }
            Ok(0)
        }
        Command::Builtin { name: Some(name), canonical } => {
            let suite = builtin(&name)?;
            if canonical {
                let _ = write!(out, "{}", save_model(&suite.model));
            } else {
                let _ = write!(out, "{}", suite.document);
            }
            Ok(0)
        }
    }
}

fn polarity(p: Polarity) -> &'static str {
    match p {
        Polarity::Valid => "valid",
        Polarity::Falsifiable => "falsifiable",
    }
}

fn structured(tag: &str, value: &impl serde::Serialize) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("format".into(), tag.into());
    }
    serde_json::to_string_pretty(&v).expect("reports serialize")
}

fn load(source: &Source) -> Result<Model, Failure> {
    match (&source.builtin, &source.model) {
        (Some(name), _) => Ok(builtin(name)?.model),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            load_model(&text).map_err(|e| Failure(format!("{}: {}", path.display(), load_error_text(&e))))
        }
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn load_error_text(e: &LoadError) -> String {
    match e {
        LoadError::Invalid(vs) => {
            let mut s = format!("{} violation(s)", vs.len());
            for v in vs {
                let _ = write!(s, "\n  {v}");
            }
            s
        }
        other => other.to_string(),
    }
}

fn validate(source: &Source, format: Format, out: &mut String) -> Result<u8, Failure> {
    let (name, violations) = match (&source.builtin, &source.model) {
        (Some(name), _) => (name.clone(), builtin(name)?.model.validate()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let violations = match load_model(&text) {
                Ok(m) => m.validate(),
                Err(LoadError::Invalid(vs)) => vs,
                Err(e) => return Err(Failure(format!("{}: {e}", path.display()))),
            };
            (path.display().to_string(), violations)
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let texts: Vec<String> = violations.iter().map(ToString::to_string).collect();
    match format {
        Format::Structured => {
            let v = json!({ "model": name, "ok": texts.is_empty(), "violations": texts });
            let _ = writeln!(out, "{}", structured("dkatl-validate/1", &v));
        }
        Format::Text if texts.is_empty() => out.push_str(&format!("{name}: ok\n")),
        Format::Text => {
            let _ = writeln!(out, "{name}: {} violation(s)", texts.len());
            for t in &texts {
                let _ = writeln!(out, "  {t}");
            }
        }
    }
    Ok(if texts.is_empty() { 0 } else { 1 })
}

fn caret(text: &str, e: &ParseError) -> String {
    format!("{e}\n  {text}\n  {}^", " ".repeat(e.column.saturating_sub(1)))
}

fn check(
    m: &Model,
    history: &str,
    formula: &str,
    horizon: Option<u32>,
    mut opts: EvalOptions,
    format: Format,
    out: &mut String,
) -> Result<u8, Failure> {
    let h = parse_history(m, history).map_err(|e| Failure(format!("history: {e}")))?;
    let f = parse(formula).map_err(|e| Failure(caret(formula, &e)))?;
    let f = resolve(&f, m)?;
    opts.horizon = horizon.unwrap_or(3.max(f.temporal_depth as u32));
    let r = Checker::new(m).eval(&h, &f, opts)?;
    let witness = r.witness.as_ref().map(|w| w.describe(m));
    match format {
        Format::Structured => {
            let v = json!({
                "history": h.display(m).to_string(),
                "formula": formula,
                "horizon": r.horizon,
                "verdict": r.verdict,
                "horizon_stable": r.horizon_stable,
                "witness": witness,
                "stats": r.stats,
            });
            let _ = writeln!(out, "{}", structured("dkatl-check/1", &v));
        }
        Format::Text => {
            let _ = writeln!(out, "{} at {} (H={}): {}", formula, h.display(m), r.horizon, r.verdict);
            if let Some(stable) = r.horizon_stable {
                let _ = writeln!(out, "stable at H={}: {}", r.horizon + 1, if stable { "yes" } else { "no" });
            }
            if let Some(entries) = &witness {
                let _ = writeln!(out, "witness:");
                for e in entries {
                    let acts: Vec<String> = e.actions.iter().map(|(a, x)| format!("{a}={x}")).collect();
                    let _ = writeln!(out, "  [{}] -> {}", e.class, acts.join(" "));
                }
            } else if opts.witness && r.verdict {
                let _ = writeln!(out, "witness: none (not a coalition formula)");
            }
            let _ =
                writeln!(out, "nodes explored: {}, classes built: {}", r.stats.nodes_explored, r.stats.classes_built);
        }
    }
    Ok(if r.verdict { 0 } else { 1 })
}

fn campaign_text(r: &CampaignReport, detail: bool) -> String {
    let mut s = format!(
        "{} {:<30} {:<11} points={} counterexamples={}",
        if r.passed() { "ok  " } else { "FAIL" },
        r.schema,
        polarity(r.polarity),
        r.points,
        r.counterexamples_found
    );
    if detail {
        let _ = write!(s, " trials={} time={:.2?}", r.trials, r.wall_time);
    }
    s.push('\n');
    let shown = if detail { r.counterexamples.len().min(5) } else { 0 };
    for c in &r.counterexamples[..shown] {
        let source = match &c.source {
            harness::ModelSource::Builtin(n) => n.clone(),
            harness::ModelSource::Random(p) => format!("random seed {}", p.seed),
        };
        let _ = writeln!(
            s,
            "  {source} at {} (H={}): phi={} psi={} G={{{}}} G2={{{}}}: lhs={} rhs={}",
            c.history,
            c.horizon,
            c.instantiation.phi,
            c.instantiation.psi,
            c.instantiation.first.join(","),
            c.instantiation.second.join(","),
            c.lhs,
            c.rhs
        );
    }
    for e in r.errors.iter().take(5) {
        let _ = writeln!(s, "  error: {e}");
    }
    s
}

fn suite_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "suite seed={} trials={}", c.seed, c.validity_trials);
    let _ = writeln!(s, "built-in verdicts:");
    for b in &r.builtin {
        let got = match &b.got {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(
            s,
            "{} {}: {} at {} (H={}) = {} (expected {})",
            if b.passed() { "ok  " } else { "FAIL" },
            b.model,
            b.formula,
            b.history,
            b.horizon,
            got,
            b.expected
        );
    }
    let _ = writeln!(s, "schemata:");
    for cr in &r.schemas {
        s.push_str(&campaign_text(cr, false));
    }
    let o = &r.oracle;
    let _ = writeln!(
        s,
        "{} oracle cross-check: models={} queries={} disagreements={}",
        if o.passed() { "ok  " } else { "FAIL" },
        o.models,
        o.queries,
        o.disagreements
    );
    let e = &r.epistemic;
    let _ = writeln!(
        s,
        "{} knowledge abbreviation: models={} points={} disagreements={}",
        if e.passed() { "ok  " } else { "FAIL" },
        e.models,
        e.points,
        e.disagreements
    );
    let w = &r.witness;
    let _ = writeln!(
        s,
        "{} witnesses: queries={} witnesses={} failures={}",
        if w.passed() { "ok  " } else { "FAIL" },
        w.queries,
        w.witnesses,
        w.failures
    );
    let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
    s
}
