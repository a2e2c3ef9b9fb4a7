//! Circuit -> quadratic system -> code -> MDP -> (amplified) -> NCP -> verdict.

use std::fs;
use std::path::{Path, PathBuf};

use crate::codes::{balanced_code, balanced_code_with_degree, hadamard, LinearCode, Rational};
use crate::enumerate::Limits;
use crate::error::{Error, Result};
use crate::field::{is_prime, make_field, FieldSpec};
use crate::format;
use crate::frontend::{circuit_to_quadratic, Circuit, QuadraticSystem};
use crate::oracle::{verify_mdp, verify_ncp, Verdict, VerifyReport};
use crate::reduction::{amplify, gap_open, mdp_to_ncp, quad_to_mdp, MdpInstance, NcpInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeChoice {
    /// Reed-Solomon concatenated with Hadamard.
    LemmaConstruction,
    /// Perfectly balanced Hadamard code of dimension `n_vars`.
    Hadamard,
}

impl std::str::FromStr for CodeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lemma" | "lemma_construction" | "balanced" => Ok(CodeChoice::LemmaConstruction),
            "hadamard" => Ok(CodeChoice::Hadamard),
            _ => Err(Error::InvalidParameter(format!(
                "unknown code `{s}` (expected `lemma` or `hadamard`)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub q: u32,
    /// Balancedness parameter; `None` picks `1/(9q)` for the lemma
    /// construction and `0` for Hadamard.
    pub eps: Option<Rational>,
    pub code: CodeChoice,
    /// Extension degree override for the lemma construction.
    pub m_ext: Option<u32>,
    pub t: u32,
    pub limits: Limits,
    pub out_dir: PathBuf,
}

impl PipelineConfig {
    pub fn new(q: u32, code: CodeChoice, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            q,
            eps: None,
            code,
            m_ext: None,
            t: 1,
            limits: Limits::default(),
            out_dir: out_dir.into(),
        }
    }

    pub fn effective_eps(&self) -> Rational {
        self.eps.unwrap_or_else(|| match self.code {
            CodeChoice::LemmaConstruction => Rational::new(1, 9 * self.q as u64),
            CodeChoice::Hadamard => Rational::from_integer(0),
        })
    }

    /// Checks `(1 + eps)^2 < 1 + 1/q` and the remaining parameters.
    pub fn validate(&self) -> Result<()> {
        field_of_size(self.q)?;
        if self.t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        let eps = self.effective_eps();
        if !gap_open(self.q, eps) {
            return Err(Error::GapClosed(format!(
                "(1 + {eps})^2 >= 1 + 1/{}",
                self.q
            )));
        }
        Ok(())
    }
}

/// `F_q` for a prime power `q`.
pub fn field_of_size(q: u32) -> Result<FieldSpec> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("field size {q} < 2")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    if r != 1 || !is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    make_field(p as u64, m)
}

/// Parses `a/b` or a plain decimal such as `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("invalid rational `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let f: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        return Ok(Rational::new(int * den + f, den));
    }
    Ok(Rational::from_integer(s.parse().map_err(|_| bad())?))
}

/// Builds the code used by the pipeline for a system with `n` variables.
pub fn build_code(
    field: &FieldSpec,
    n: usize,
    choice: CodeChoice,
    eps: Rational,
    m_ext: Option<u32>,
    limits: &Limits,
) -> Result<LinearCode> {
    match choice {
        CodeChoice::Hadamard => hadamard(field, n, limits),
        CodeChoice::LemmaConstruction => {
            let code = match m_ext {
                Some(m) => balanced_code_with_degree(field, n, eps, m, limits)?,
                None => balanced_code(field, n, eps, limits)?,
            };
            Ok(code.refine_distance(limits.enumeration_cap))
        }
    }
}

pub struct PipelineOutput {
    pub system: QuadraticSystem,
    pub code: LinearCode,
    pub mdp: MdpInstance,
    pub ncp: NcpInstance,
    pub mdp_report: VerifyReport,
    pub ncp_report: VerifyReport,
    pub verdict: Verdict,
    pub files: Vec<PathBuf>,
}

impl PipelineOutput {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::YesConfirmed | Verdict::NoConfirmed => 0,
            Verdict::GapViolation => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

/// Both reports must agree and be confirmed; any violation dominates.
pub fn combine_verdicts(a: Verdict, b: Verdict) -> Verdict {
    use Verdict::*;
    match (a, b) {
        (GapViolation, _) | (_, GapViolation) => GapViolation,
        (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
        (x, y) if x == y => x,
        _ => GapViolation,
    }
}

/// Runs every stage in memory, then writes `system.quadsys`, `code.code`,
/// `instance.mdp`, `instance.ncp`, `mdp.report` and `ncp.report` into
/// `config.out_dir`. Nothing is written if any stage fails.
pub fn run_end_to_end(config: &PipelineConfig, circuit: &Circuit) -> Result<PipelineOutput> {
    config.validate()?;
    let field = field_of_size(config.q)?;
    let limits = &config.limits;
    let system = circuit_to_quadratic(circuit, &field);
    let code = build_code(
        &field,
        system.n_vars(),
        config.code,
        config.effective_eps(),
        config.m_ext,
        limits,
    )?;
    let base = quad_to_mdp(&system, &code, true, limits)?;
    let mdp = amplify(&base, config.t, limits)?;
    let ncp = mdp_to_ncp(&mdp)?;

    let cap = limits.enumeration_cap;
    let mut mdp_report = verify_mdp(&mdp, Some(circuit), cap);
    let mut ncp_report = verify_ncp(&ncp, Some(circuit), cap);
    mdp_report.instance_id = "instance.mdp".into();
    ncp_report.instance_id = "instance.ncp".into();
    let verdict = combine_verdicts(mdp_report.verdict, ncp_report.verdict);

    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let outputs = [
        ("system.quadsys", format::write_quadsys(&system)),
        ("code.code", format::write_code(&code)),
        ("instance.mdp", format::write_mdp(&mdp)),
        ("instance.ncp", format::write_ncp(&ncp)),
        ("mdp.report", format::write_report(&mdp_report, false)),
        ("ncp.report", format::write_report(&ncp_report, false)),
    ];
    let mut files = Vec::new();
    for (name, text) in outputs {
        let path = dir.join(name);
        fs::write(&path, text).map_err(io_err(&path))?;
        files.push(path);
    }
    Ok(PipelineOutput {
        system,
        code,
        mdp,
        ncp,
        mdp_report,
        ncp_report,
        verdict,
        files,
    })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::InvalidParameter(format!("{}: {e}", path.display()))
}
