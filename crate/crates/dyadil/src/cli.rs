//! Command-line front end: load a workspace file, run one evaluation,
//! dilatation, or verification command, render the result.
//!
//! Exit codes: 0 on success or PASS, 1 when a check FAILs, 2 on usage,
//! parse, validation, or domain errors.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automata::{check_isometry, check_nondegenerate, Transducer};
use crate::dilatation::{combine, DilatationStructure, Operator, WTable};
use crate::verify;
use crate::words::{DyadicScale, FiniteWord, Letter, OmegaWord};
use crate::workspace::{parse_workspace, write_machine, write_wfun, Workspace};

#[derive(Debug, Parser)]
#[command(name = "dyadil", version, about = "Exact dilatation arithmetic on the dyadic tree boundary")]
struct Cli {
    /// Workspace file with machine/wfun/structure declarations.
    #[arg(long, global = true)]
    file: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Args)]
struct StructureArg {
    /// Structure name from the workspace file.
    #[arg(long)]
    structure: String,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run a machine on an eventually periodic word.
    Eval {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        word: OmegaWord,
    },
    /// Contract a point toward a base by 2^-p.
    Dilate {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        base: OmegaWord,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        point: OmegaWord,
    },
    /// Expand a point of the base's cylinder by 2^p.
    Undilate {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        base: OmegaWord,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        point: OmegaWord,
    },
    /// Approximate difference at scale 2^-p.
    Delta {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        x: OmegaWord,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        u: OmegaWord,
        #[arg(long)]
        v: OmegaWord,
    },
    /// Approximate sum at scale 2^-p.
    Sigma {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        x: OmegaWord,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        u: OmegaWord,
        #[arg(long)]
        v: OmegaWord,
    },
    /// Approximate inverse at scale 2^-p.
    Inv {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        x: OmegaWord,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        u: OmegaWord,
    },
    /// Sweep an operator over p = 1..pmax and report stabilization.
    Stabilize {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        x: OmegaWord,
        #[arg(long)]
        u: OmegaWord,
        #[arg(long)]
        v: Option<OmegaWord>,
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        depth: usize,
    },
    /// Restart a machine after reading a prefix; prints the machine.
    Section {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        prefix: String,
    },
    /// Serial composition (second after first); prints the machine.
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Inverse of an isometry; prints the machine.
    Invert {
        #[arg(long)]
        machine: String,
    },
    /// Restriction of a structure to one subtree; prints its tables.
    Restrict {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        letter: char,
    },
    /// Assemble a structure from two operands shifted one level down;
    /// prints its tables.
    Combine {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        /// Level-one table, e.g. "0 -> flip , 1 -> flip"; identity when
        /// omitted.
        #[arg(long)]
        level1: Option<String>,
    },
    /// Verification suites.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Delta,
    Sigma,
    Inv,
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// All axiom checks on one structure.
    Axioms {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        pmax: usize,
    },
    /// Base-dependence of the attached isometries.
    Smooth {
        #[command(flatten)]
        st: StructureArg,
        /// Bound 2^-<eps-exp>.
        #[arg(long, default_value_t = 2)]
        eps_exp: u32,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Commutation with letter prepending.
    Selfsimilar {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Worst base-to-base isometry variation ratio.
    Lipschitz {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Commutation of a machine with contraction.
    Linear {
        #[command(flatten)]
        st: StructureArg,
        #[arg(long)]
        machine: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Per-state output permutation on the reachable part.
    Isometry {
        #[arg(long)]
        machine: String,
    },
    /// Absence of silent reachable cycles.
    Nondegenerate {
        #[arg(long)]
        machine: String,
    },
}

/// A command failure that maps onto the exit-code contract.
enum Failure {
    /// Exit 1: a check failed.
    Check,
    /// Exit 2: bad input of any kind.
    Input(String),
}

impl Failure {
    fn input(e: impl ToString) -> Failure {
        Failure::Input(e.to_string())
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(()) => {
            print!("{out}");
            0
        }
        Err(Failure::Check) => {
            print!("{out}");
            1
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn load(cli: &Cli) -> Result<Workspace, Failure> {
    let Some(path) = &cli.file else {
        return Ok(Workspace::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_workspace(&text).map_err(Failure::input)
}

fn machine(ws: &Workspace, name: &str) -> Result<Transducer, Failure> {
    ws.machine(name)
        .ok_or_else(|| Failure::Input(format!("unknown machine `{name}`")))
}

fn structure<'a>(ws: &'a Workspace, name: &str) -> Result<&'a DilatationStructure, Failure> {
    ws.structures
        .get(name)
        .ok_or_else(|| Failure::Input(format!("unknown structure `{name}`")))
}

fn parse_level1(spec: &str) -> Result<WTable, Failure> {
    let mut entries = std::collections::BTreeMap::new();
    let mut window = None;
    for part in spec.split(',') {
        let (key, iso) = part
            .split_once("->")
            .ok_or_else(|| Failure::Input(format!("bad table row `{}`", part.trim())))?;
        let key = FiniteWord::from_bits(key.trim()).map_err(Failure::input)?;
        if *window.get_or_insert(key.len()) != key.len() {
            return Err(Failure::Input("table keys have mixed lengths".into()));
        }
        if entries.insert(key.clone(), iso.trim().to_string()).is_some() {
            return Err(Failure::Input(format!("duplicate key `{key}`")));
        }
    }
    let window = window.ok_or_else(|| Failure::Input("empty table".into()))?;
    WTable::new(window, entries).map_err(Failure::input)
}

fn execute(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    use std::fmt::Write;
    let ws = load(cli)?;
    match &cli.cmd {
        Cmd::Eval { machine: name, word } => {
            let m = machine(&ws, name)?;
            writeln!(out, "{}", m.eval(word)).unwrap();
        }
        Cmd::Dilate { st, base, p, point } => {
            let d = structure(&ws, &st.structure)?;
            writeln!(out, "{}", d.dilate(base, *p, point)).unwrap();
        }
        Cmd::Undilate { st, base, p, point } => {
            let d = structure(&ws, &st.structure)?;
            let y = d.undilate(base, *p, point).map_err(Failure::input)?;
            writeln!(out, "{y}").unwrap();
        }
        Cmd::Delta { st, x, p, u, v } => {
            let d = structure(&ws, &st.structure)?;
            writeln!(out, "{}", d.delta_op(x, *p, u, v).map_err(Failure::input)?).unwrap();
        }
        Cmd::Sigma { st, x, p, u, v } => {
            let d = structure(&ws, &st.structure)?;
            writeln!(out, "{}", d.sigma_op(x, *p, u, v).map_err(Failure::input)?).unwrap();
        }
        Cmd::Inv { st, x, p, u } => {
            let d = structure(&ws, &st.structure)?;
            writeln!(out, "{}", d.inv_op(x, *p, u).map_err(Failure::input)?).unwrap();
        }
        Cmd::Stabilize {
            st,
            op,
            x,
            u,
            v,
            pmax,
            depth,
        } => {
            let d = structure(&ws, &st.structure)?;
            let op = match op {
                OpArg::Delta => Operator::Delta,
                OpArg::Sigma => Operator::Sigma,
                OpArg::Inv => Operator::Inv,
            };
            if op != Operator::Inv && v.is_none() {
                return Err(Failure::Input("this operator needs --v".into()));
            }
            if *pmax < 1 {
                return Err(Failure::Input("--pmax must be at least 1".into()));
            }
            let rep = crate::dilatation::stabilize(d, op, x, u, v.as_ref(), *pmax, *depth)
                .map_err(Failure::input)?;
            match cli.format {
                Format::Text => {
                    for (i, w) in rep.values.iter().enumerate() {
                        writeln!(out, "p={} {}", i + 1, w).unwrap();
                    }
                    match rep.stable_from {
                        Some(s) => writeln!(out, "stable_from {s}").unwrap(),
                        None => writeln!(out, "stable_from NONE").unwrap(),
                    }
                    writeln!(out, "limit {}", rep.limit_candidate).unwrap();
                }
                Format::Tsv => {
                    let s = rep
                        .stable_from
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "NONE".into());
                    writeln!(out, "stabilize\t{s}\t{}", rep.limit_candidate).unwrap();
                }
            }
        }
        Cmd::Section { machine: name, prefix } => {
            let m = machine(&ws, name)?;
            let q = FiniteWord::from_bits(prefix).map_err(Failure::input)?;
            let s = m.section(&q).map_err(Failure::input)?;
            out.push_str(&write_machine(&s));
        }
        Cmd::Compose { first, second } => {
            let m1 = machine(&ws, first)?;
            let m2 = machine(&ws, second)?;
            let c = m1.compose(&m2).map_err(Failure::input)?;
            out.push_str(&write_machine(&c));
        }
        Cmd::Invert { machine: name } => {
            let m = machine(&ws, name)?;
            out.push_str(&write_machine(&m.invert().map_err(Failure::input)?));
        }
        Cmd::Restrict { st, letter } => {
            let d = structure(&ws, &st.structure)?;
            let alpha = Letter::from_char(*letter)
                .ok_or_else(|| Failure::Input(format!("bad letter `{letter}`")))?;
            let r = d.restrict(alpha);
            out.push_str(&write_wfun(r.name(), r.wfun()));
        }
        Cmd::Combine {
            first,
            second,
            level1,
        } => {
            let d0 = structure(&ws, first)?;
            let d1 = structure(&ws, second)?;
            let t = level1.as_deref().map(parse_level1).transpose()?;
            let c = combine(d0, d1, t).map_err(Failure::input)?;
            out.push_str(&write_wfun(c.name(), c.wfun()));
        }
        Cmd::Check(check) => return run_check(cli, &ws, check, out),
    }
    Ok(())
}

fn render_report(fmt: Format, out: &mut String, r: &verify::CheckReport) -> bool {
    use std::fmt::Write;
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    match fmt {
        Format::Text => {
            write!(out, "{} {} cases={}", r.check, verdict, r.cases).unwrap();
            if let Some(w) = r.witnesses.first() {
                write!(out, " witness: {} | {} != {}", w.inputs, w.lhs, w.rhs).unwrap();
            }
            out.push('\n');
        }
        Format::Tsv => {
            let (i, l, h) = r
                .witnesses
                .first()
                .map(|w| (w.inputs.as_str(), w.lhs.as_str(), w.rhs.as_str()))
                .unwrap_or(("", "", ""));
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.check, verdict, r.cases, i, l, h).unwrap();
        }
    }
    r.pass
}

fn render_machine_report(
    fmt: Format,
    out: &mut String,
    r: &crate::automata::MachineReport,
) -> bool {
    use std::fmt::Write;
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    match fmt {
        Format::Text => {
            write!(out, "{} {} {}", r.check, r.machine, verdict).unwrap();
            if let Some(w) = &r.witness {
                write!(out, " witness: {w}").unwrap();
            }
            out.push('\n');
        }
        Format::Tsv => {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.check,
                r.machine,
                verdict,
                r.witness.as_deref().unwrap_or("")
            )
            .unwrap();
        }
    }
    r.pass
}

fn run_check(
    cli: &Cli,
    ws: &Workspace,
    check: &CheckCmd,
    out: &mut String,
) -> Result<(), Failure> {
    use std::fmt::Write;
    let fmt = cli.format;
    let mut all_pass = true;
    match check {
        CheckCmd::Axioms { st, depth, pmax } => {
            let d = structure(ws, &st.structure)?;
            all_pass &= render_report(fmt, out, &verify::check_a0_domains(d, *depth, *pmax));
            all_pass &= render_report(fmt, out, &verify::check_a1(d, *depth));
            all_pass &= render_report(fmt, out, &verify::check_a2(d, *depth, *pmax));
            all_pass &= render_report(fmt, out, &verify::check_a3_cone(d, *depth, *pmax));
            // The scale sweep must outlast the report depth: in the
            // u = v corner the value only reaches prefix-n agreement
            // from p = n on, and a window of variation can delay it
            // one more level.
            let p_limit = depth + d.wfun().max_window() + 1;
            all_pass &= render_report(fmt, out, &verify::check_a4(d, *depth, p_limit));
        }
        CheckCmd::Smooth { st, eps_exp, depth } => {
            let d = structure(ws, &st.structure)?;
            let eps = DyadicScale::power(-(*eps_exp as i32));
            let r = verify::check_smooth(d, eps, *depth);
            let verdict = if r.strict_pass { "PASS" } else { "FAIL" };
            let mu = r
                .empirical_mu
                .map(|m| m.to_string())
                .unwrap_or_else(|| "NONE".into());
            match fmt {
                Format::Text => {
                    writeln!(
                        out,
                        "smooth {verdict} eps={} mu={mu} some-reading={} cases={}",
                        r.epsilon,
                        if r.some_pass { "PASS" } else { "FAIL" },
                        r.cases
                    )
                    .unwrap();
                    if let Some(w) = r.witnesses.first() {
                        writeln!(out, "witness: {} | {} != {}", w.inputs, w.lhs, w.rhs).unwrap();
                    }
                }
                Format::Tsv => {
                    writeln!(out, "smooth\t{verdict}\t{}\t{mu}\t{}", r.cases, r.epsilon).unwrap();
                }
            }
            all_pass &= r.strict_pass;
        }
        CheckCmd::Selfsimilar { st, depth } => {
            let d = structure(ws, &st.structure)?;
            all_pass &= render_report(fmt, out, &verify::check_selfsimilar(d, *depth));
        }
        CheckCmd::Lipschitz { st, depth } => {
            let d = structure(ws, &st.structure)?;
            let r = verify::check_lipschitz(d, *depth).map_err(Failure::input)?;
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            match fmt {
                Format::Text => writeln!(
                    out,
                    "lipschitz {verdict} constant={} bound={} cases={}",
                    r.constant, r.bound, r.cases
                )
                .unwrap(),
                Format::Tsv => writeln!(
                    out,
                    "lipschitz\t{verdict}\t{}\t{}\t{}",
                    r.cases, r.constant, r.bound
                )
                .unwrap(),
            }
            all_pass &= r.pass;
        }
        CheckCmd::Linear { st, machine: name, depth } => {
            let d = structure(ws, &st.structure)?;
            let m = machine(ws, name)?;
            let r = verify::check_linear(d, &m, *depth).map_err(Failure::input)?;
            all_pass &= render_report(fmt, out, &r);
        }
        CheckCmd::Isometry { machine: name } => {
            let m = machine(ws, name)?;
            all_pass &= render_machine_report(fmt, out, &check_isometry(&m));
        }
        CheckCmd::Nondegenerate { machine: name } => {
            let m = machine(ws, name)?;
            all_pass &= render_machine_report(fmt, out, &check_nondegenerate(&m));
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
