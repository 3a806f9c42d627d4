//! Command-line frontend for the forgetting-automata workbench.
//!
//! Exit codes: 0 = all assertions pass, 1 = a check failed (rejection,
//! inequivalence, invalid certificate, failed report row), 2 = usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fla::bounds::{check_fooling, e_fooling_set, h_fooling_set, j_fooling_set, l_fooling_set};
use fla::classical::{determinize, equivalent, minimize};
use fla::families::{
    build_en_2dfa, build_h_family, build_j_2dfa, build_j_dfa, build_j_dfla, build_lnl_2dfa,
    build_lnl_2nfa, build_lnl_dfa, build_lnl_fla, build_lnl_nfa, build_mf,
};
use fla::numtheory::{landau, landau_bruteforce, landau_value};
use fla::report::{
    experiment_bounds, parse_config, report_emit, serialize_config, ExperimentConfig,
};
use fla::sim::{
    accepts_fla, accepts_oneway, accepts_twoway, predicate_e, predicate_h, predicate_j, predicate_l,
};
use fla::tables::{fla_to_dfa, fla_to_nfa, table_sequence};
use fla::{file, Error, Machine};

#[derive(Parser)]
#[command(
    name = "fla",
    version,
    about = "Workbench for forgetting 1-limited automata",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Mf,
    L,
    J,
    E,
    H,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Nfa,
    Dfa,
    #[value(name = "2nfa")]
    TwoNfa,
    #[value(name = "2dfa")]
    TwoDfa,
    Fla,
    Dfla,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Nfa,
    Dfa,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertSet {
    L,
    J,
    E,
    HFootnote,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    TextTable,
    Csv,
}

impl ReportFormat {
    fn name(self) -> &'static str {
        match self {
            ReportFormat::TextTable => "text-table",
            ReportFormat::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on a word; prints "accept" or "reject".
    Run {
        /// Path to a .mach machine file.
        machine: PathBuf,
        /// Input word (may be empty).
        word: String,
    },
    /// Build a witness-family machine and write it as a .mach file.
    Build {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convert a forgetting machine to a one-way automaton via the
    /// transition-table pipeline; prints the preperiod and period.
    Convert {
        machine: PathBuf,
        #[arg(long)]
        to: ConvertTarget,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Determinize a one-way automaton (subset construction).
    Determinize {
        machine: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimize a one-way automaton (determinizes first when needed).
    Minimize {
        machine: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide language equivalence of two one-way automata.
    Equiv { left: PathBuf, right: PathBuf },
    /// Landau's function F(n) with its prime-power decomposition.
    Landau {
        #[arg(long)]
        n: usize,
        /// Cross-check against the brute-force search (n <= 30).
        #[arg(long)]
        bruteforce: bool,
    },
    /// Check a fooling-set certificate; prints the certified lower bound.
    Certify {
        #[arg(long)]
        set: CertSet,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        ell: usize,
    },
    /// Run the experiment harness over a config of (family, n, ell) rows.
    Experiment {
        /// Config file; the shipped default config when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::TextTable)]
        format: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print the default config and exit.
        #[arg(long)]
        emit_default_config: bool,
    },
}

fn read_machine(path: &PathBuf) -> fla::Result<Machine> {
    let text = fs::read_to_string(path)?;
    file::parse(&text)
}

fn write_out(text: &str, output: &Option<PathBuf>) -> fla::Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// true = assertion passed (exit 0), false = failed (exit 1).
fn dispatch(cmd: Command) -> fla::Result<bool> {
    match cmd {
        Command::Run { machine, word } => {
            let m = read_machine(&machine)?;
            let accepted = match &m {
                Machine::OneWay(m) => accepts_oneway(m, &word)?,
                Machine::TwoWay(m) => accepts_twoway(m, &word)?,
                Machine::Fla(m) => accepts_fla(m, &word)?,
            };
            println!("{}", if accepted { "accept" } else { "reject" });
            Ok(accepted)
        }
        Command::Build {
            family,
            model,
            n,
            ell,
            output,
        } => {
            let machine = build_machine(family, model, n, ell)?;
            write_out(&file::serialize(&machine), &output)?;
            eprintln!("built {} with {} states", machine.kind(), machine.states());
            Ok(true)
        }
        Command::Convert {
            machine,
            to,
            output,
        } => {
            let m = match read_machine(&machine)? {
                Machine::Fla(m) => m,
                other => {
                    return Err(Error::BadParameter(format!(
                        "convert expects a forgetting machine, got kind {}",
                        other.kind()
                    )))
                }
            };
            let seq = table_sequence(&m)?;
            let result = match to {
                ConvertTarget::Nfa => fla_to_nfa(&m)?,
                ConvertTarget::Dfa => fla_to_dfa(&m)?,
            };
            println!(
                "input states: {}\npreperiod: {}\nperiod: {}\noutput states: {}",
                m.states, seq.lambda, seq.rho, result.states
            );
            write_out(&file::serialize(&Machine::OneWay(result)), &output)?;
            Ok(true)
        }
        Command::Determinize { machine, output } => {
            let m = expect_oneway(read_machine(&machine)?)?;
            let d = determinize(&m);
            println!("input states: {}\noutput states: {}", m.states, d.states);
            write_out(&file::serialize(&Machine::OneWay(d)), &output)?;
            Ok(true)
        }
        Command::Minimize { machine, output } => {
            let m = expect_oneway(read_machine(&machine)?)?;
            let d = if m.deterministic && m.is_complete() {
                m.clone()
            } else {
                determinize(&m)
            };
            let min = minimize(&d)?;
            println!("input states: {}\noutput states: {}", m.states, min.states);
            write_out(&file::serialize(&Machine::OneWay(min)), &output)?;
            Ok(true)
        }
        Command::Equiv { left, right } => {
            let m1 = expect_oneway(read_machine(&left)?)?;
            let m2 = expect_oneway(read_machine(&right)?)?;
            let (eq, witness) = equivalent(&m1, &m2)?;
            if eq {
                println!("equivalent");
            } else {
                println!(
                    "not equivalent; distinguished by {:?}",
                    witness.unwrap_or_default()
                );
            }
            Ok(eq)
        }
        Command::Landau { n, bruteforce } => {
            let (value, decomposition) = landau(n)?;
            let parts = decomposition.parts();
            let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            println!("F({n}) = {value} = lcm({})", parts.join(", "));
            if bruteforce {
                let check = landau_bruteforce(n)?;
                println!("bruteforce: {check}");
                return Ok(check == value);
            }
            Ok(true)
        }
        Command::Certify { set, n, ell } => {
            type Oracle = Box<dyn Fn(&str) -> bool + Sync>;
            let (fooling, oracle): (_, Oracle) = match set {
                CertSet::L => (
                    l_fooling_set(n, ell),
                    Box::new(move |w: &str| predicate_l(n, ell, w).unwrap_or(false)),
                ),
                CertSet::J => (
                    j_fooling_set(n, ell)?,
                    Box::new(move |w: &str| predicate_j(n, ell, w)),
                ),
                CertSet::E => (
                    e_fooling_set(n)?,
                    Box::new(move |w: &str| predicate_e(n, w)),
                ),
                CertSet::HFootnote => {
                    let ell = if ell == 0 { landau_value(n)? } else { ell };
                    (
                        h_fooling_set(n, ell)?,
                        Box::new(move |w: &str| predicate_h(n, ell, w)),
                    )
                }
            };
            let outcome = check_fooling(&fooling, |w| oracle(w));
            if outcome.valid {
                println!(
                    "valid {} fooling set: certified lower bound {} states",
                    fooling.kind.name(),
                    outcome.bound
                );
                Ok(true)
            } else {
                println!(
                    "invalid certificate: {}",
                    outcome
                        .violation
                        .unwrap_or_else(|| "unknown violation".into())
                );
                Ok(false)
            }
        }
        Command::Experiment {
            config,
            format,
            output,
            emit_default_config,
        } => {
            let cfg = match &config {
                Some(path) => parse_config(&fs::read_to_string(path)?)?,
                None => ExperimentConfig::default_config(),
            };
            if emit_default_config {
                write_out(
                    &serialize_config(&ExperimentConfig::default_config()),
                    &output,
                )?;
                return Ok(true);
            }
            let report = experiment_bounds(&cfg)?;
            let text = report_emit(&report, format.name())?;
            write_out(&text, &output)?;
            Ok(report.all_pass())
        }
    }
}

fn expect_oneway(m: Machine) -> fla::Result<fla::OneWayFa> {
    match m {
        Machine::OneWay(m) => Ok(m),
        other => Err(Error::BadParameter(format!(
            "expected a one-way automaton, got kind {}",
            other.kind()
        ))),
    }
}

fn build_machine(family: Family, model: Model, n: usize, ell: usize) -> fla::Result<Machine> {
    let unsupported = |fam: &str, model: &str| {
        Err(Error::BadParameter(format!(
            "family {fam} has no {model} builder"
        )))
    };
    match (family, model) {
        (Family::Mf, Model::Nfa) => Ok(Machine::OneWay(build_mf(n)?)),
        (Family::Mf, _) => unsupported("mf", "non-nfa"),
        (Family::L, Model::Nfa) => Ok(Machine::OneWay(build_lnl_nfa(n, ell)?)),
        (Family::L, Model::Dfa) => Ok(Machine::OneWay(build_lnl_dfa(n, ell)?)),
        (Family::L, Model::TwoNfa) => Ok(Machine::TwoWay(build_lnl_2nfa(n, ell)?)),
        (Family::L, Model::TwoDfa) => Ok(Machine::TwoWay(build_lnl_2dfa(n, ell)?)),
        (Family::L, Model::Fla) => Ok(Machine::Fla(build_lnl_fla(n, ell)?)),
        (Family::L, Model::Dfla) => unsupported("l", "dfla"),
        (Family::J, Model::Dfa) => Ok(Machine::OneWay(build_j_dfa(n, ell)?)),
        (Family::J, Model::TwoDfa) => Ok(Machine::TwoWay(build_j_2dfa(n, ell)?)),
        (Family::J, Model::Dfla) => Ok(Machine::Fla(build_j_dfla(n, ell)?)),
        (Family::J, _) => unsupported("j", "that"),
        (Family::E, Model::TwoDfa) => Ok(Machine::TwoWay(build_en_2dfa(n)?)),
        (Family::E, _) => unsupported("e", "non-2dfa"),
        (Family::H, Model::Dfla) => Ok(Machine::Fla(build_h_family(n)?.0)),
        (Family::H, _) => unsupported("h", "non-dfla"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::BadParameter(_) | Error::Parse(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
