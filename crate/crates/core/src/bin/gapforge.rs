use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use gapforge::codes::Rational;
use gapforge::enumerate::{Limits, DEFAULT_ENUMERATION_CAP};
use gapforge::format;
use gapforge::frontend::{circuit_to_quadratic, parse_circuit, Circuit};
use gapforge::oracle::{verify_instance, Instance};
use gapforge::pipeline::{self, CodeChoice, PipelineConfig};
use gapforge::reduction;

/// Exit status for usage and input errors.
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gapforge",
    version,
    about = "Gap instances for MDP/NCP from circuits, with exhaustive verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a .circ circuit into a QUADSYS file.
    CompileCircuit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a balanced (lemma) or Hadamard code and write a CODE file.
    BuildCode {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        /// Balancedness parameter, e.g. `1/18` or `0.25` (lemma code only).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value = "lemma")]
        code: String,
        /// Extension degree for the Reed-Solomon outer code.
        #[arg(long = "m-ext")]
        m_ext: Option<u32>,
        #[arg(long, env = "GAPFORGE_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a QUADSYS file to an MDP instance with the given CODE file.
    Reduce {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        distinguished: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor an MDP instance with itself `t` times.
    Amplify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slice a distinguished MDP instance to an NCP instance.
    ToNcp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum of an MDP or NCP instance.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, env = "GAPFORGE_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Check an instance against its thresholds (and optionally a circuit).
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, env = "GAPFORGE_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Run every stage on a circuit and verify the result.
    EndToEnd {
        #[arg(long, alias = "in")]
        circuit: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value = "hadamard")]
        code: String,
        #[arg(long = "m-ext")]
        m_ext: Option<u32>,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, env = "GAPFORGE_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    format::parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::CompileCircuit { input, q, out } => {
            let c = load_circuit(&input)?;
            let field = pipeline::field_of_size(q)?;
            emit(
                out.as_deref(),
                &format::write_quadsys(&circuit_to_quadratic(&c, &field)),
            )?;
        }
        Command::BuildCode {
            q,
            n,
            eps,
            code,
            m_ext,
            cap,
            out,
        } => {
            let choice: CodeChoice = code.parse()?;
            let field = pipeline::field_of_size(q)?;
            let eps = match eps {
                Some(e) => pipeline::parse_rational(&e)?,
                None => Rational::new(1, 9 * q as u64),
            };
            let limits = Limits::with_cap(cap);
            let c = pipeline::build_code(&field, n, choice, eps, m_ext, &limits)?;
            emit(out.as_deref(), &format::write_code(&c))?;
        }
        Command::Reduce {
            sys,
            code,
            distinguished,
            out,
        } => {
            let s = format::parse_quadsys(&read(&sys)?)
                .with_context(|| format!("parsing {}", sys.display()))?;
            let c = format::parse_code(&read(&code)?)
                .with_context(|| format!("parsing {}", code.display()))?;
            let inst = reduction::quad_to_mdp(&s, &c, distinguished, &Limits::default())?;
            emit(out.as_deref(), &format::write_mdp(&inst))?;
        }
        Command::Amplify { input, t, out } => {
            let inst = match load_instance(&input)? {
                Instance::Mdp(i) => i,
                Instance::Ncp(_) => bail!("amplify expects an MDP instance"),
            };
            let a = reduction::amplify(&inst, t, &Limits::default())?;
            emit(out.as_deref(), &format::write_mdp(&a))?;
        }
        Command::ToNcp { input, out } => {
            let inst = match load_instance(&input)? {
                Instance::Mdp(i) => i,
                Instance::Ncp(_) => bail!("to-ncp expects an MDP instance"),
            };
            emit(
                out.as_deref(),
                &format::write_ncp(&reduction::mdp_to_ncp(&inst)?),
            )?;
        }
        Command::Solve { input, cap } => {
            let inst = load_instance(&input)?;
            match inst.solve(cap)? {
                Some(w) => {
                    let idx: Vec<String> =
                        w.vector.as_slice().iter().map(|x| x.to_string()).collect();
                    println!("value={} witness={}", w.weight, idx.join(","));
                }
                None => println!("value=none witness=none"),
            }
        }
        Command::Verify {
            input,
            circuit,
            cap,
        } => {
            let inst = load_instance(&input)?;
            let c = circuit.as_deref().map(load_circuit).transpose()?;
            let mut rep = verify_instance(&inst, c.as_ref(), cap);
            rep.instance_id = input.display().to_string();
            print!("{}", format::write_report(&rep, true));
            return Ok(rep.exit_code() as u8);
        }
        Command::EndToEnd {
            circuit,
            q,
            eps,
            code,
            m_ext,
            t,
            cap,
            out,
        } => {
            let mut config = PipelineConfig::new(q, code.parse()?, out);
            config.eps = eps.as_deref().map(pipeline::parse_rational).transpose()?;
            config.m_ext = m_ext;
            config.t = t;
            config.limits = Limits::with_cap(cap);
            config.validate()?;
            let c = load_circuit(&circuit)?;
            let res = pipeline::run_end_to_end(&config, &c)?;
            print!("{}", format::write_report(&res.mdp_report, true));
            print!("{}", format::write_report(&res.ncp_report, true));
            println!("verdict={}", res.verdict);
            return Ok(res.exit_code() as u8);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
