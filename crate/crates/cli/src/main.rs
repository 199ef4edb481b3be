use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use capan_core::engine::{AnalysisOptions, Analyzer};
use capan_core::properties::{check_bounded, check_dead_code, check_linearity, soundness_audit, AuditOutcome};
use capan_core::report::{render_audit, trace_line, Report, TraceStep};
use capan_core::semantics::{Configuration, Program, DEFAULT_STATE_CAP};
use capan_core::syntax::parse_labeled;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_PROVED: u8 = 0;
const EXIT_NOT_PROVED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "capan", version, about = "Static analyzer for CAP actor terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the analysis post-fixpoint.
    Analyze(Common),
    /// Enumerate reachable transitions.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Pick transitions by number at a prompt.
        #[arg(long)]
        interactive: bool,
    },
    /// Check properties of the term.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// Cross-check the analysis against bounded exploration.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Args)]
struct Common {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, default_value_t = 2)]
    widen_delay: usize,
    #[arg(long)]
    no_narrow: bool,
    /// Apply each transition as soon as it is computed.
    #[arg(long)]
    chaotic: bool,
    /// Cap on explored states.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    budget: usize,
}

impl Common {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            max_iter: self.max_iter,
            widen_delay: self.widen_delay,
            narrow: !self.no_narrow,
            chaotic: self.chaotic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Linearity,
    Bounded,
    Deadcode,
    All,
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn load(common: &Common) -> Result<Program, Failure> {
    let src = std::fs::read_to_string(&common.file)
        .map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", common.file.display())))?;
    let lt = parse_labeled(&src).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", common.file.display())))?;
    Ok(Program::extract(&lt))
}

fn analyze(common: &Common) -> Result<capan_core::engine::Analysis, Failure> {
    let program = load(common)?;
    Analyzer::new(&program).analyze(&common.options()).map_err(|e| Failure(EXIT_LIMIT, e.to_string()))
}

fn use_color() -> bool {
    std::env::var("CAPAN_COLOR").map_or(true, |v| v != "0") && io::stdout().is_terminal()
}

fn colorize(text: &str) -> String {
    if !use_color() {
        return text.to_string();
    }
    text.lines()
        .map(|l| {
            if l.ends_with(": not proved") || l.ends_with(": violation") {
                format!("\x1b[31m{l}\x1b[0m")
            } else if l.ends_with(": proved") || l.ends_with(": passed") {
                format!("\x1b[32m{l}\x1b[0m")
            } else {
                l.to_string()
            }
        })
        .map(|l| l + "\n")
        .collect()
}

fn emit(format: Format, report: &Report, text: String) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", colorize(&text)),
    }
}

fn run_analyze(common: &Common) -> Outcome {
    let a = analyze(common)?;
    let report = Report::new(&a, Vec::new());
    emit(common.format, &report, report.to_string());
    Ok(EXIT_PROVED)
}

fn run_check(common: &Common, property: PropertyArg) -> Outcome {
    let a = analyze(common)?;
    let mut props = Vec::new();
    if matches!(property, PropertyArg::Linearity | PropertyArg::All) {
        props.push(check_linearity(&a));
    }
    if matches!(property, PropertyArg::Bounded | PropertyArg::All) {
        props.push(check_bounded(&a));
    }
    if matches!(property, PropertyArg::Deadcode | PropertyArg::All) {
        props.push(check_dead_code(&a));
    }
    let report = Report::new(&a, props);
    let text: String = report.properties.iter().map(|p| p.to_string()).collect();
    emit(common.format, &report, text);
    Ok(if report.all_proved() { EXIT_PROVED } else { EXIT_NOT_PROVED })
}

fn run_audit(common: &Common, depth: usize) -> Outcome {
    let a = analyze(common)?;
    let audit = soundness_audit(&a, depth, common.budget);
    let code = match audit.outcome {
        AuditOutcome::Passed => EXIT_PROVED,
        AuditOutcome::Violation { .. } => EXIT_NOT_PROVED,
        AuditOutcome::Inconclusive { .. } => EXIT_LIMIT,
    };
    let text = render_audit(&audit);
    let mut report = Report::new(&a, Vec::new());
    report.audit = Some(audit);
    emit(common.format, &report, text);
    Ok(code)
}

#[derive(Serialize)]
struct TreeNode {
    #[serde(flatten)]
    step: TraceStep,
    children: Vec<TreeNode>,
}

struct Walker<'a> {
    program: &'a Program,
    budget: usize,
    nodes: usize,
}

impl Walker<'_> {
    fn walk(&mut self, c: &Configuration, k: usize, depth: usize, out: &mut String) -> Result<Vec<TreeNode>, Failure> {
        if k > depth {
            return Ok(Vec::new());
        }
        let mut children = Vec::new();
        for i in self.program.enabled(c) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Failure(EXIT_LIMIT, format!("trace tree exceeds the budget of {} nodes", self.budget)));
            }
            let step = self.program.step(c, &i).expect("enabled interactions step");
            out.push_str(&"  ".repeat(k - 1));
            out.push_str(&trace_line(k, &step));
            out.push('\n');
            let sub = self.walk(&step.config, k + 1, depth, out)?;
            children.push(TreeNode { step: TraceStep::new(k, &step), children: sub });
        }
        Ok(children)
    }
}

fn show_config(program: &Program, c: &Configuration) -> String {
    let lt = program.labeled();
    let mut s = String::new();
    for t in c.threads() {
        let env: Vec<String> =
            t.env.iter().map(|(k, v)| format!("{k}->({},{})", lt.show_label(v.label), v.marker)).collect();
        s.push_str(&format!("  ({}, {}, {{{}}})\n", t.point, t.marker, env.join(", ")));
    }
    s
}

fn run_simulate(common: &Common, depth: usize, interactive: bool) -> Outcome {
    let program = load(common)?;
    if interactive {
        return interact(&program, depth);
    }
    let mut text = String::new();
    let mut w = Walker { program: &program, budget: common.budget, nodes: 0 };
    let tree = w.walk(&program.initial_config(), 1, depth, &mut text)?;
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&tree).expect("tree serializes")),
        Format::Text => {
            print!("initial configuration:\n{}", show_config(&program, &program.initial_config()));
            print!("{text}");
        }
    }
    Ok(EXIT_PROVED)
}

fn interact(program: &Program, depth: usize) -> Outcome {
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut c = program.initial_config();
    for k in 1..=depth {
        print!("configuration:\n{}", show_config(program, &c));
        let enabled = program.enabled(&c);
        if enabled.is_empty() {
            println!("no transition enabled");
            break;
        }
        for (n, i) in enabled.iter().enumerate() {
            println!("  [{n}] {}", program.label_of(&c, i));
        }
        print!("choice> ");
        io::stdout().flush().ok();
        let Some(Ok(line)) = lines.next() else { break };
        let line = line.trim();
        if line == "q" {
            break;
        }
        let Some(i) = line.parse::<usize>().ok().and_then(|n| enabled.get(n)) else {
            return Err(Failure(EXIT_USAGE, format!("invalid choice `{line}`")));
        };
        let step = program.step(&c, i).expect("enabled interactions step");
        println!("{}", trace_line(k, &step));
        c = step.config;
    }
    Ok(EXIT_PROVED)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(common) => run_analyze(common),
        Command::Simulate { common, depth, interactive } => run_simulate(common, *depth, *interactive),
        Command::Check { common, property } => run_check(common, *property),
        Command::Audit { common, depth } => run_audit(common, *depth),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("capan: {msg}");
            ExitCode::from(code)
        }
    }
}
