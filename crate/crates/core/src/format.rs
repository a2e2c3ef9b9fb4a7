//! Line-oriented text formats for codes, quadratic systems, MDP/NCP instances
//! and verification reports.
//!
//! ```text
//! MDP
//! FIELD p=2 m=1 modulus=0,1
//! L=65 dim=2 distinguished=65 yes=17 no=24 t=1 d=4 eps=0/1
//! PROVENANCE quad_to_mdp vars=3 equations=4 N=8 rank1_bound=17
//! MATRIX r=2 c=65
//! 0 0 1 ...
//! ```
//!
//! Coordinates and variable indices are 1-based in files. Blank lines and
//! lines starting with `#` are ignored by the readers; the writers never emit
//! them, so output is byte-stable.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use crate::codes::{LinearCode, Rational};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::frontend::QuadraticSystem;
use crate::linalg::{MatrixFq, VectorFq};
use crate::oracle::{Instance, InstanceKind, VerifyReport};
use crate::reduction::{GapMeta, MdpInstance, NcpInstance};

struct Reader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            line: self.last,
            reason: reason.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str> {
        for (i, l) in self.lines.by_ref() {
            self.last = i + 1;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok(t);
            }
        }
        Err(Error::Parse {
            line: self.last + 1,
            reason: "unexpected end of input".into(),
        })
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<&'a str> {
        let line = self.next()?;
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        if head != kw {
            return Err(self.err(format!("expected `{kw}`, found `{head}`")));
        }
        Ok(rest.trim())
    }

    fn finish(&mut self) -> Result<()> {
        match self.next() {
            Err(_) => Ok(()),
            Ok(l) => Err(self.err(format!("trailing content `{l}`"))),
        }
    }

    /// Next meaningful line without consuming it.
    fn peek(&mut self) -> Option<&'a str> {
        while let Some((i, l)) = self.lines.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.last = i + 1;
                self.lines.next();
                continue;
            }
            return Some(t);
        }
        None
    }
}

fn parse_kv<'t>(r: &Reader<'_>, text: &'t str) -> Result<HashMap<&'t str, &'t str>> {
    let mut map = HashMap::new();
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| r.err(format!("expected key=value, found `{tok}`")))?;
        if map.insert(k, v).is_some() {
            return Err(r.err(format!("duplicate key `{k}`")));
        }
    }
    Ok(map)
}

fn get<'t, T: FromStr>(r: &Reader<'_>, map: &HashMap<&'t str, &'t str>, key: &str) -> Result<T> {
    let raw = map
        .get(key)
        .ok_or_else(|| r.err(format!("missing `{key}`")))?;
    raw.parse()
        .map_err(|_| r.err(format!("invalid value `{raw}` for `{key}`")))
}

fn get_opt<'t, T: FromStr>(
    r: &Reader<'_>,
    map: &HashMap<&'t str, &'t str>,
    key: &str,
) -> Result<Option<T>> {
    match map.get(key) {
        None | Some(&"none") => Ok(None),
        Some(_) => get(r, map, key).map(Some),
    }
}

fn parse_rational(r: &Reader<'_>, s: &str) -> Result<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: u64 = n
        .parse()
        .map_err(|_| r.err(format!("invalid rational `{s}`")))?;
    let d: u64 = d
        .parse()
        .map_err(|_| r.err(format!("invalid rational `{s}`")))?;
    if d == 0 {
        return Err(r.err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn join(v: &[u32], sep: &str) -> String {
    let mut s = String::with_capacity(v.len() * 2);
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        write!(s, "{x}").unwrap();
    }
    s
}

// ---- field and matrix ----

fn read_field(r: &mut Reader<'_>) -> Result<FieldSpec> {
    let rest = r.expect_keyword("FIELD")?;
    let map = parse_kv(r, rest)?;
    let p: u64 = get(r, &map, "p")?;
    let m: u32 = get(r, &map, "m")?;
    let raw: &str = map
        .get("modulus")
        .ok_or_else(|| r.err("missing `modulus`"))?;
    let modulus: Vec<u32> = raw
        .split(',')
        .map(|c| {
            c.parse()
                .map_err(|_| r.err(format!("invalid modulus `{raw}`")))
        })
        .collect::<Result<_>>()?;
    if modulus.len() != m as usize + 1 {
        return Err(r.err("modulus degree does not match m"));
    }
    FieldSpec::with_modulus(p, &modulus).map_err(|e| r.err(e.to_string()))
}

fn write_matrix(out: &mut String, m: &MatrixFq) {
    writeln!(out, "MATRIX r={} c={}", m.rows(), m.cols()).unwrap();
    for i in 0..m.rows() {
        writeln!(out, "{}", join(m.row(i), " ")).unwrap();
    }
}

fn read_elems(r: &Reader<'_>, field: &FieldSpec, line: &str, expect: usize) -> Result<Vec<u32>> {
    let v: Vec<u32> = line
        .split_whitespace()
        .map(|t| {
            let x: u32 = t
                .parse()
                .map_err(|_| r.err(format!("invalid element `{t}`")))?;
            field.check(x).map_err(|e| r.err(e.to_string()))
        })
        .collect::<Result<_>>()?;
    if v.len() != expect {
        return Err(r.err(format!("expected {expect} elements, found {}", v.len())));
    }
    Ok(v)
}

fn read_matrix(r: &mut Reader<'_>, field: &FieldSpec) -> Result<MatrixFq> {
    let rest = r.expect_keyword("MATRIX")?;
    let map = parse_kv(r, rest)?;
    let rows: usize = get(r, &map, "r")?;
    let cols: usize = get(r, &map, "c")?;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let line = r.next()?;
        data.extend(read_elems(r, field, line, cols)?);
    }
    MatrixFq::new(field, rows, cols, data).map_err(|e| r.err(e.to_string()))
}

fn rows_of(field: &FieldSpec, m: &MatrixFq) -> Vec<VectorFq> {
    (0..m.rows())
        .map(|i| VectorFq::new(field, m.row(i).to_vec()).expect("validated"))
        .collect()
}

// ---- CODE ----

pub fn write_code(code: &LinearCode) -> String {
    let mut out = String::new();
    writeln!(out, "CODE").unwrap();
    writeln!(out, "{}", code.field().header()).unwrap();
    writeln!(
        out,
        "N={} n={} d={} eps={}",
        code.block_len(),
        code.dim(),
        code.d_claimed().map_or("none".into(), |d| d.to_string()),
        code.eps().map_or("none".into(), |e| fmt_rational(&e)),
    )
    .unwrap();
    write_matrix(&mut out, code.generator());
    out
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut r = Reader::new(text);
    r.expect_keyword("CODE")?;
    let field = read_field(&mut r)?;
    let line = r.next()?;
    let map = parse_kv(&r, line)?;
    let big_n: usize = get(&r, &map, "N")?;
    let n: usize = get(&r, &map, "n")?;
    let d: Option<u64> = get_opt(&r, &map, "d")?;
    let eps = match map.get("eps") {
        None | Some(&"none") => None,
        Some(s) => Some(parse_rational(&r, s)?),
    };
    let gen = read_matrix(&mut r, &field)?;
    if gen.rows() != big_n || gen.cols() != n {
        return Err(r.err("generator shape does not match N and n"));
    }
    r.finish()?;
    LinearCode::new(gen, d, eps)
}

// ---- QUADSYS ----

pub fn write_quadsys(sys: &QuadraticSystem) -> String {
    let mut out = String::new();
    writeln!(out, "QUADSYS").unwrap();
    writeln!(out, "{}", sys.field().header()).unwrap();
    writeln!(
        out,
        "n={} m={} distinguished={}",
        sys.n_vars(),
        sys.m(),
        sys.distinguished() + 1
    )
    .unwrap();
    for q in sys.qs() {
        write_matrix(&mut out, q);
    }
    out
}

pub fn parse_quadsys(text: &str) -> Result<QuadraticSystem> {
    let mut r = Reader::new(text);
    r.expect_keyword("QUADSYS")?;
    let field = read_field(&mut r)?;
    let line = r.next()?;
    let map = parse_kv(&r, line)?;
    let n: usize = get(&r, &map, "n")?;
    let m: usize = get(&r, &map, "m")?;
    let dist: usize = get(&r, &map, "distinguished")?;
    if dist == 0 || dist > n {
        return Err(r.err("distinguished index out of range"));
    }
    let qs = (0..m)
        .map(|_| read_matrix(&mut r, &field))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    QuadraticSystem::new(&field, n, qs, dist - 1)
}

// ---- MDP / NCP ----

fn write_meta_line(out: &mut String, len: usize, dim: usize, dist: Option<usize>, meta: &GapMeta) {
    writeln!(
        out,
        "L={len} dim={dim} distinguished={} yes={} no={} t={} d={} eps={}",
        dist.map_or("none".into(), |i| (i + 1).to_string()),
        meta.yes_threshold,
        meta.no_threshold,
        meta.t,
        meta.d,
        fmt_rational(&meta.eps),
    )
    .unwrap();
    writeln!(out, "PROVENANCE {}", meta.provenance.replace('\n', " ")).unwrap();
}

struct Header {
    len: usize,
    dim: usize,
    dist: Option<usize>,
    meta: GapMeta,
}

fn read_header(r: &mut Reader<'_>) -> Result<Header> {
    let line = r.next()?;
    let map = parse_kv(r, line)?;
    let len: usize = get(r, &map, "L")?;
    let dim: usize = get(r, &map, "dim")?;
    let dist: Option<usize> = get_opt(r, &map, "distinguished")?;
    let dist = match dist {
        Some(0) => return Err(r.err("distinguished index is 1-based")),
        Some(i) => Some(i - 1),
        None => None,
    };
    let eps = match map.get("eps") {
        None => Rational::from_integer(0),
        Some(s) => parse_rational(r, s)?,
    };
    let meta = GapMeta {
        yes_threshold: get(r, &map, "yes")?,
        no_threshold: get(r, &map, "no")?,
        t: get(r, &map, "t")?,
        d: get_opt(r, &map, "d")?.unwrap_or(0),
        eps,
        provenance: String::new(),
    };
    let mut h = Header {
        len,
        dim,
        dist,
        meta,
    };
    // optional provenance line
    if let Some(t) = r.peek() {
        if t == "PROVENANCE" || t.starts_with("PROVENANCE ") {
            let rest = r.expect_keyword("PROVENANCE")?;
            h.meta.provenance = rest.to_string();
        }
    }
    Ok(h)
}

pub fn write_mdp(inst: &MdpInstance) -> String {
    let mut out = String::new();
    writeln!(out, "MDP").unwrap();
    writeln!(out, "{}", inst.field().header()).unwrap();
    write_meta_line(
        &mut out,
        inst.len(),
        inst.dim(),
        inst.distinguished(),
        inst.meta(),
    );
    writeln!(out, "MATRIX r={} c={}", inst.dim(), inst.len()).unwrap();
    for b in inst.basis() {
        writeln!(out, "{}", join(b.as_slice(), " ")).unwrap();
    }
    out
}

fn parse_mdp_body(r: &mut Reader<'_>) -> Result<MdpInstance> {
    let field = read_field(r)?;
    let h = read_header(r)?;
    let m = read_matrix(r, &field)?;
    if m.rows() != h.dim || m.cols() != h.len {
        return Err(r.err("basis shape does not match L and dim"));
    }
    r.finish()?;
    MdpInstance::new(&field, h.len, rows_of(&field, &m), h.dist, h.meta)
}

pub fn parse_mdp(text: &str) -> Result<MdpInstance> {
    let mut r = Reader::new(text);
    r.expect_keyword("MDP")?;
    parse_mdp_body(&mut r)
}

pub fn write_ncp(inst: &NcpInstance) -> String {
    let mut out = String::new();
    writeln!(out, "NCP").unwrap();
    writeln!(out, "{}", inst.field().header()).unwrap();
    write_meta_line(
        &mut out,
        inst.len(),
        inst.dim(),
        inst.distinguished(),
        inst.meta(),
    );
    writeln!(out, "OFFSET {}", join(inst.offset().as_slice(), " ")).unwrap();
    writeln!(out, "MATRIX r={} c={}", inst.dim(), inst.len()).unwrap();
    for b in inst.hom_basis() {
        writeln!(out, "{}", join(b.as_slice(), " ")).unwrap();
    }
    out
}

fn parse_ncp_body(r: &mut Reader<'_>) -> Result<NcpInstance> {
    let field = read_field(r)?;
    let h = read_header(r)?;
    let rest = r.expect_keyword("OFFSET")?;
    let offset = VectorFq::new(&field, read_elems(r, &field, rest, h.len)?)?;
    let m = read_matrix(r, &field)?;
    if m.rows() != h.dim || m.cols() != h.len {
        return Err(r.err("basis shape does not match L and dim"));
    }
    r.finish()?;
    NcpInstance::new(&field, h.len, offset, rows_of(&field, &m), h.dist, h.meta)
}

pub fn parse_ncp(text: &str) -> Result<NcpInstance> {
    let mut r = Reader::new(text);
    r.expect_keyword("NCP")?;
    parse_ncp_body(&mut r)
}

/// Reads either an `MDP` or an `NCP` block.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut r = Reader::new(text);
    match r.next()? {
        "MDP" => Ok(Instance::Mdp(parse_mdp_body(&mut r)?)),
        "NCP" => Ok(Instance::Ncp(parse_ncp_body(&mut r)?)),
        other => Err(r.err(format!("expected `MDP` or `NCP`, found `{other}`"))),
    }
}

pub fn write_instance(inst: &Instance) -> String {
    match inst {
        Instance::Mdp(i) => write_mdp(i),
        Instance::Ncp(i) => write_ncp(i),
    }
}

// ---- VerifyReport ----

/// `key=value` lines; `elapsed_ms` only when `timing` is set.
pub fn write_report(rep: &VerifyReport, timing: bool) -> String {
    let mut out = String::new();
    let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
    writeln!(out, "instance={}", rep.instance_id).unwrap();
    writeln!(out, "kind={}", rep.kind).unwrap();
    writeln!(out, "verdict={}", rep.verdict).unwrap();
    writeln!(
        out,
        "oracle_value={}",
        opt(rep.oracle_value.map(|v| v.to_string()))
    )
    .unwrap();
    writeln!(out, "yes_threshold={}", rep.yes_threshold).unwrap();
    writeln!(out, "no_threshold={}", rep.no_threshold).unwrap();
    writeln!(
        out,
        "circuit_satisfiable={}",
        rep.circuit_satisfiable
            .map_or("unknown".into(), |b| b.to_string())
    )
    .unwrap();
    writeln!(
        out,
        "witness={}",
        opt(rep.witness.as_ref().map(|w| join(w, ",")))
    )
    .unwrap();
    writeln!(out, "note={}", opt(rep.note.clone())).unwrap();
    if timing {
        writeln!(out, "elapsed_ms={}", rep.elapsed.as_millis()).unwrap();
    }
    out
}

pub fn parse_report(text: &str) -> Result<VerifyReport> {
    let mut map = HashMap::new();
    for (i, l) in text.lines().enumerate() {
        if l.trim().is_empty() {
            continue;
        }
        let (k, v) = l.split_once('=').ok_or(Error::Parse {
            line: i + 1,
            reason: "expected key=value".into(),
        })?;
        map.insert(k.trim(), v.trim());
    }
    let field = |k: &str| {
        map.get(k).copied().ok_or(Error::Parse {
            line: 0,
            reason: format!("missing `{k}`"),
        })
    };
    let bad = |k: &str| Error::Parse {
        line: 0,
        reason: format!("invalid `{k}`"),
    };
    let none_or = |s: &str| {
        if s == "none" {
            None
        } else {
            Some(s.to_string())
        }
    };
    let kind = match field("kind")? {
        "MDP" => InstanceKind::Mdp,
        "NCP" => InstanceKind::Ncp,
        _ => return Err(bad("kind")),
    };
    let oracle_value = match field("oracle_value")? {
        "none" => None,
        s => Some(s.parse().map_err(|_| bad("oracle_value"))?),
    };
    let witness = match field("witness")? {
        "none" => None,
        "" => Some(Vec::new()),
        s => Some(
            s.split(',')
                .map(|t| t.parse().map_err(|_| bad("witness")))
                .collect::<Result<Vec<u32>>>()?,
        ),
    };
    let circuit_satisfiable = match field("circuit_satisfiable")? {
        "true" => Some(true),
        "false" => Some(false),
        "unknown" => None,
        _ => return Err(bad("circuit_satisfiable")),
    };
    let elapsed = match map.get("elapsed_ms") {
        Some(s) => Duration::from_millis(s.parse().map_err(|_| bad("elapsed_ms"))?),
        None => Duration::ZERO,
    };
    Ok(VerifyReport {
        instance_id: field("instance")?.to_string(),
        kind,
        oracle_value,
        yes_threshold: field("yes_threshold")?
            .parse()
            .map_err(|_| bad("yes_threshold"))?,
        no_threshold: field("no_threshold")?
            .parse()
            .map_err(|_| bad("no_threshold"))?,
        verdict: field("verdict")?.parse()?,
        witness,
        circuit_satisfiable,
        note: none_or(field("note")?),
        elapsed,
    })
}
