//! Command-line front end: file formats, reports and the subcommands.
//!
//! Exit codes: 0 for YES or success, 1 for NO, 2 for errors, 3 when an
//! oracle runs out of budget.

pub mod format;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use votekernel::gadgets::verify_reduction;
use votekernel::kernels::kernel_equivalence_check;
use votekernel::oracle::DEFAULT_BUDGET;
use votekernel::{
    generate, kernelize, majority_graph, solve_coalitional_manipulation, solve_possible_winner, winners,
    CMInstance, CandidateSet, Error, GadgetRule, KernelKind, LinearOrder, PWInstance, Rule, Witness,
};

use format::{parse_election, parse_set_cover, write_election, ElectionFile};
use report::{digest, Report};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "votekernel", version, about = "Winner determination, possible-winner and manipulation oracles, kernels and reductions")]
pub struct Cli {
    /// Print the report as one JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scores and winners of the complete votes in an election file.
    Winners {
        /// Overrides the file's `rule` directive.
        #[arg(long)]
        rule: Option<Rule>,
        file: PathBuf,
    },
    /// Possible winner.
    #[command(subcommand)]
    Pw(PwCommand),
    /// Coalitional manipulation.
    #[command(subcommand)]
    Cm(CmCommand),
    /// Instance generators.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Cross-checks between oracles.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Maximum number of leaves an oracle may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum PwCommand {
    /// Decides whether the distinguished candidate can win uniquely.
    Solve {
        file: PathBuf,
        #[arg(long)]
        rule: Option<Rule>,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Debug, Subcommand)]
pub enum CmCommand {
    /// Decides whether the manipulators can make the distinguished candidate win uniquely.
    Solve {
        file: PathBuf,
        #[arg(long)]
        manipulators: Option<u64>,
        #[arg(long)]
        rule: Option<Rule>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Applies the rule's kernel.
    Kernelize {
        file: PathBuf,
        #[arg(long)]
        rule: Option<Rule>,
        /// List every reduction-rule application.
        #[arg(long)]
        trace: bool,
        /// Write the reduced instance here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Builds the possible-winner instance for a set-cover instance.
    SetcoverToPw {
        file: PathBuf,
        #[arg(long)]
        rule: GadgetRule,
        /// Write the instance here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the preprocessing record here as JSON.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Solves a set-cover instance and its generated possible-winner instance.
    Reduction {
        file: PathBuf,
        #[arg(long)]
        rule: GadgetRule,
        #[command(flatten)]
        budget: Budget,
    },
    /// Solves a manipulation instance before and after kernelization.
    Kernel {
        file: PathBuf,
        #[arg(long)]
        rule: Option<Rule>,
        #[command(flatten)]
        budget: Budget,
    },
}

/// What a command produced: text for standard output and an exit code.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    let (mut report, code) = match dispatch(&cli.command) {
        Ok(Done::Report(r, code)) => (r, code),
        Ok(Done::Raw(stdout)) => return Ok(Output { stdout, code: EXIT_YES }),
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::BudgetExceeded { budget, needed }) => {
                let mut r = Report::new(command_name(&cli.command));
                r.set("status", "budget exceeded");
                r.set("budget", *budget);
                r.set("needed", needed.to_string());
                (r, EXIT_BUDGET)
            }
            _ => return Err(e),
        },
    };
    if cli.timings {
        report.set("elapsed_ms", start.elapsed().as_millis() as u64);
    }
    let stdout = if cli.json { report.json() } else { report.text() };
    Ok(Output { stdout, code })
}

enum Done {
    Report(Report, i32),
    Raw(String),
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Winners { .. } => "winners",
        Command::Pw(PwCommand::Solve { .. }) => "pw solve",
        Command::Cm(CmCommand::Solve { .. }) => "cm solve",
        Command::Cm(CmCommand::Kernelize { .. }) => "cm kernelize",
        Command::Reduce(ReduceCommand::SetcoverToPw { .. }) => "reduce setcover-to-pw",
        Command::Verify(VerifyCommand::Reduction { .. }) => "verify reduction",
        Command::Verify(VerifyCommand::Kernel { .. }) => "verify kernel",
    }
}

fn read(path: &Path) -> Result<(String, Report)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut r = Report::default();
    r.set("input", path.display().to_string());
    r.set("input_sha256", digest(text.as_bytes()));
    Ok((text, r))
}

fn load_election(path: &Path) -> Result<(ElectionFile, Report)> {
    let (text, r) = read(path)?;
    let f = parse_election(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((f, r))
}

fn start(command: &Command, input: Report) -> Report {
    let mut r = Report::new(command_name(command));
    for key in ["input", "input_sha256"] {
        if let Some(v) = input.get(key) {
            r.set(key, v.clone());
        }
    }
    r
}

fn pick_rule(flag: &Option<Rule>, file: &ElectionFile) -> Result<Rule> {
    flag.clone()
        .or_else(|| file.rule.clone())
        .ok_or_else(|| anyhow!("no rule given: pass --rule or add a `rule` directive"))
}

fn distinguished(file: &ElectionFile) -> Result<usize> {
    file.distinguished.ok_or_else(|| anyhow!("the file has no `distinguished` directive"))
}

fn names(c: &CandidateSet, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| c.name(x).to_string()).collect()
}

fn show_order(c: &CandidateSet, v: &LinearOrder) -> String {
    names(c, v.ranking()).join(">")
}

fn verdict(answer: bool) -> (&'static str, i32) {
    if answer {
        ("yes", EXIT_YES)
    } else {
        ("no", EXIT_NO)
    }
}

fn dispatch(command: &Command) -> Result<Done> {
    match command {
        Command::Winners { rule, file } => {
            let (f, input) = load_election(file)?;
            let rule = pick_rule(rule, &f)?;
            let w = winners(&f.profile, &rule)?;
            let c = f.profile.candidates();
            let mut r = start(command, input);
            r.set("rule", rule.to_string());
            r.set("candidates", c.len());
            r.set("votes", f.profile.num_votes());
            let scores: Vec<String> = (0..c.len()).map(|i| format!("{}:{}", c.name(i), w.scores[i])).collect();
            r.set("scores", scores.join(" "));
            r.set("cowinners", names(c, &w.cowinners).join(","));
            let unique = w.unique_winner.map(|x| c.name(x).to_string()).unwrap_or_else(|| "none".into());
            r.set("unique_winner", unique);
            Ok(Done::Report(r, if w.unique_winner.is_some() { EXIT_YES } else { EXIT_NO }))
        }
        Command::Pw(PwCommand::Solve { file, rule, budget }) => {
            let (f, input) = load_election(file)?;
            let inst = PWInstance::new(
                f.profile.candidates().clone(),
                f.partial.clone().unwrap_or_default(),
                f.profile.clone(),
                distinguished(&f)?,
                pick_rule(rule, &f)?,
            )?;
            let v = solve_possible_winner(&inst, budget.budget)?;
            let mut r = start(command, input);
            r.set("rule", inst.rule.to_string());
            r.set("distinguished", inst.candidates.name(inst.distinguished));
            r.set("partial_votes", inst.partial_votes.len());
            r.set("budget", budget.budget);
            let (answer, code) = verdict(v.answer);
            r.set("answer", answer);
            r.set("work", v.work.to_string());
            if let Some(Witness::Extensions(ext)) = &v.witness {
                let shown: Vec<String> = ext.iter().map(|e| show_order(&inst.candidates, e)).collect();
                r.set("witness", shown.join(" | "));
            }
            Ok(Done::Report(r, code))
        }
        Command::Cm(CmCommand::Solve { file, manipulators, rule, budget }) => {
            let (f, input) = load_election(file)?;
            let inst = cm_instance(&f, rule, *manipulators)?;
            let v = solve_coalitional_manipulation(&inst, budget.budget)?;
            let mut r = start(command, input);
            r.set("rule", inst.rule.to_string());
            r.set("distinguished", inst.candidates.name(inst.distinguished));
            r.set("manipulators", inst.manipulators);
            r.set("budget", budget.budget);
            let (answer, code) = verdict(v.answer);
            r.set("answer", answer);
            r.set("work", v.work.to_string());
            if let Some(Witness::Manipulation(votes)) = &v.witness {
                let shown: Vec<String> =
                    votes.iter().map(|(o, k)| format!("{k} x {}", show_order(&inst.candidates, o))).collect();
                r.set("witness", shown.join(" | "));
            }
            Ok(Done::Report(r, code))
        }
        Command::Cm(CmCommand::Kernelize { file, rule, trace, out }) => {
            let (f, input) = load_election(file)?;
            let inst = cm_instance(&f, rule, None)?;
            let k = kernelize(&inst)?;
            let mut r = start(command, input);
            r.set("rule", inst.rule.to_string());
            r.set("original_candidates", inst.num_candidates());
            r.set("original_votes", inst.nonmanipulators.num_votes());
            r.set("outcome", kind_name(k.kind));
            if let Some(red) = &k.reduced_instance {
                r.set("reduced_candidates", red.num_candidates());
                r.set("reduced_votes", red.nonmanipulators.num_votes());
                r.set("reduced_max_margin", majority_graph(&red.nonmanipulators).max_abs());
                if let Some(path) = out {
                    fs::write(path, write_election(&ElectionFile::from_cm(red)))
                        .with_context(|| format!("writing {}", path.display()))?;
                    r.set("output", path.display().to_string());
                }
            }
            if *trace {
                r.set("trace_len", k.trace.len());
                for (i, t) in k.trace.iter().enumerate() {
                    let mut line = t.rule.clone();
                    if let Some((a, b)) = t.edge {
                        line.push_str(&format!(" D({},{}) {} -> {}", a + 1, b + 1, t.old, t.new));
                    }
                    if let Some(c) = t.candidate {
                        line.push_str(&format!(" candidate {}", c + 1));
                    }
                    if let Some(n) = &t.note {
                        line.push_str(&format!(" {n}"));
                    }
                    r.set(&format!("trace.{}", i + 1), line);
                }
            }
            let code = match k.kind {
                KernelKind::DecidedNo => EXIT_NO,
                _ => EXIT_YES,
            };
            Ok(Done::Report(r, code))
        }
        Command::Reduce(ReduceCommand::SetcoverToPw { file, rule, out, provenance }) => {
            let (text, input) = read(file)?;
            let sc = parse_set_cover(&text).with_context(|| format!("parsing {}", file.display()))?;
            let gi = generate(&sc, *rule)?;
            if let Some(path) = provenance {
                fs::write(path, serde_json::to_string_pretty(&gi.provenance)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let body = write_election(&ElectionFile::from_pw(&gi.pw));
            let Some(path) = out else {
                return Ok(Done::Raw(body));
            };
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            let mut r = start(command, input);
            r.set("rule", rule.to_string());
            r.set("candidates", gi.pw.candidates.len());
            r.set("partial_votes", gi.pw.partial_votes.len());
            r.set("complete_votes", gi.pw.complete_votes.num_votes());
            r.set("preprocessing_steps", gi.provenance.steps.len());
            r.set("output", path.display().to_string());
            if let Some(p) = provenance {
                r.set("provenance", p.display().to_string());
            }
            Ok(Done::Report(r, EXIT_YES))
        }
        Command::Verify(VerifyCommand::Reduction { file, rule, budget }) => {
            let (text, input) = read(file)?;
            let sc = parse_set_cover(&text).with_context(|| format!("parsing {}", file.display()))?;
            let gi = generate(&sc, *rule)?;
            let rep = verify_reduction(&sc, &gi, budget.budget)?;
            let mut r = start(command, input);
            r.set("rule", rep.rule.clone());
            r.set("budget", budget.budget);
            r.set("set_cover", verdict(rep.set_cover).0);
            r.set("possible_winner", verdict(rep.possible_winner).0);
            r.set("equivalent", rep.equivalent());
            r.set("work", rep.work.to_string());
            if let Some(ok) = rep.forward_witness {
                r.set("forward_witness_valid", ok);
            }
            if let Some(c) = &rep.extracted_cover {
                let shown: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                r.set("extracted_cover", shown.join(" "));
            }
            if let Some(ok) = rep.extracted_cover_valid {
                r.set("extracted_cover_valid", ok);
            }
            r.set("passed", rep.passed());
            Ok(Done::Report(r, if rep.passed() { EXIT_YES } else { EXIT_NO }))
        }
        Command::Verify(VerifyCommand::Kernel { file, rule, budget }) => {
            let (f, input) = load_election(file)?;
            let inst = cm_instance(&f, rule, None)?;
            let k = kernelize(&inst)?;
            let rep = kernel_equivalence_check(&inst, &k, budget.budget)?;
            let mut r = start(command, input);
            r.set("rule", inst.rule.to_string());
            r.set("budget", budget.budget);
            r.set("outcome", kind_name(rep.kind));
            r.set("original", verdict(rep.original).0);
            if let Some(red) = rep.reduced {
                r.set("reduced", verdict(red).0);
            }
            r.set("equivalent", rep.equivalent);
            Ok(Done::Report(r, if rep.equivalent { EXIT_YES } else { EXIT_NO }))
        }
    }
}

fn kind_name(k: KernelKind) -> &'static str {
    match k {
        KernelKind::DecidedYes => "decided yes",
        KernelKind::DecidedNo => "decided no",
        KernelKind::Reduced => "reduced",
    }
}

fn cm_instance(f: &ElectionFile, rule: &Option<Rule>, manipulators: Option<u64>) -> Result<CMInstance> {
    if f.partial.as_ref().is_some_and(|p| !p.is_empty()) {
        bail!("manipulation instances take complete votes only");
    }
    let k = manipulators
        .or(f.manipulators)
        .ok_or_else(|| anyhow!("no manipulator count: pass --manipulators or add a `manipulators` directive"))?;
    Ok(CMInstance::new(f.profile.candidates().clone(), f.profile.clone(), k, distinguished(f)?, pick_rule(rule, f)?)?)
}
