//! Gate-level circuits and their compilation to homogeneous quadratic systems.
//!
//! Circuit text format, one statement per line:
//!
//! ```text
//! # comment
//! g1 = INPUT
//! g2 = NOT g1
//! g3 = AND g1 g2
//! g4 = OR g2 g3
//! OUTPUT g4
//! ```
//!
//! Keywords are case-insensitive. Every operand must be defined on an earlier
//! line.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{quad_form, MatrixFq, VectorFq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    names: Vec<String>,
    gates: Vec<Gate>,
    output: usize,
}

impl Circuit {
    /// Builds a circuit from gates whose operands point strictly backward.
    pub fn new(gates: Vec<Gate>, output: usize) -> Result<Self> {
        let names = (1..=gates.len()).map(|i| format!("g{i}")).collect();
        Self::with_names(names, gates, output)
    }

    fn with_names(names: Vec<String>, gates: Vec<Gate>, output: usize) -> Result<Self> {
        for (k, g) in gates.iter().enumerate() {
            let ok = match *g {
                Gate::Input => true,
                Gate::Not(i) => i < k,
                Gate::And(i, j) | Gate::Or(i, j) => i < k && j < k,
            };
            if !ok {
                return Err(Error::ForwardReference {
                    line: k + 1,
                    name: names[k].clone(),
                });
            }
        }
        if output >= gates.len() {
            return Err(Error::NoOutput);
        }
        Ok(Self {
            names,
            gates,
            output,
        })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g, Gate::Input))
            .map(|(i, _)| i)
            .collect()
    }

    /// Values of every gate under an assignment to the INPUT gates (in
    /// definition order).
    pub fn gate_values(&self, assignment: &[bool]) -> Result<Vec<bool>> {
        let n_inputs = self.inputs().len();
        if assignment.len() != n_inputs {
            return Err(Error::ArityMismatch {
                expected: n_inputs,
                got: assignment.len(),
            });
        }
        let mut next_input = assignment.iter();
        let mut vals = Vec::<bool>::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input => *next_input.next().unwrap(),
                Gate::Not(i) => !vals[i],
                Gate::And(i, j) => vals[i] && vals[j],
                Gate::Or(i, j) => vals[i] || vals[j],
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        Ok(self.gate_values(assignment)?[self.output])
    }

    /// First satisfying input assignment in binary counting order, if any.
    pub fn find_satisfying(&self) -> Option<Vec<bool>> {
        let k = self.inputs().len();
        assert!(k < 32, "exhaustive satisfiability limited to < 32 inputs");
        (0u64..1 << k).find_map(|mask| {
            let a: Vec<bool> = (0..k).map(|b| mask >> b & 1 == 1).collect();
            self.eval(&a).unwrap().then_some(a)
        })
    }

    pub fn is_satisfiable(&self) -> bool {
        self.find_satisfying().is_some()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, g) in self.names.iter().zip(&self.gates) {
            let n = |i: usize| &self.names[i];
            match *g {
                Gate::Input => writeln!(out, "{name} = INPUT"),
                Gate::Not(i) => writeln!(out, "{name} = NOT {}", n(i)),
                Gate::And(i, j) => writeln!(out, "{name} = AND {} {}", n(i), n(j)),
                Gate::Or(i, j) => writeln!(out, "{name} = OR {} {}", n(i), n(j)),
            }
            .unwrap();
        }
        writeln!(out, "OUTPUT {}", self.names[self.output]).unwrap();
        out
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut gates = Vec::new();
    let mut output = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |reason: &str| Error::Parse {
            line,
            reason: reason.to_string(),
        };
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::ForwardReference {
                    line,
                    name: name.to_string(),
                })
        };

        if let Some((lhs, rhs)) = content.split_once('=') {
            let name = lhs.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(parse_err("invalid gate name"));
            }
            let toks: Vec<&str> = rhs.split_whitespace().collect();
            let Some(op) = toks.first() else {
                return Err(parse_err("missing gate type"));
            };
            let args = &toks[1..];
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(parse_err(&format!(
                        "{} expects {n} operand(s), got {}",
                        op.to_uppercase(),
                        args.len()
                    )))
                }
            };
            let gate = match op.to_ascii_uppercase().as_str() {
                "INPUT" => {
                    arity(0)?;
                    Gate::Input
                }
                "NOT" => {
                    arity(1)?;
                    Gate::Not(lookup(args[0])?)
                }
                "AND" => {
                    arity(2)?;
                    Gate::And(lookup(args[0])?, lookup(args[1])?)
                }
                "OR" => {
                    arity(2)?;
                    Gate::Or(lookup(args[0])?, lookup(args[1])?)
                }
                other => return Err(parse_err(&format!("unknown gate type `{other}`"))),
            };
            if index.contains_key(name) {
                return Err(Error::DuplicateName {
                    line,
                    name: name.to_string(),
                });
            }
            index.insert(name.to_string(), gates.len());
            names.push(name.to_string());
            gates.push(gate);
        } else {
            let toks: Vec<&str> = content.split_whitespace().collect();
            if !toks[0].eq_ignore_ascii_case("OUTPUT") {
                return Err(parse_err("expected `name = ...` or `OUTPUT name`"));
            }
            if toks.len() != 2 {
                return Err(parse_err("OUTPUT expects exactly one gate name"));
            }
            if output.is_some() {
                return Err(parse_err("multiple OUTPUT lines"));
            }
            output = Some(lookup(toks[1])?);
        }
    }
    let output = output.ok_or(Error::NoOutput)?;
    Circuit::with_names(names, gates, output)
}

pub fn eval_circuit(c: &Circuit, assignment: &[bool]) -> Result<bool> {
    c.eval(assignment)
}

/// Homogeneous quadratic system `Q_l(x x^T) = 0` with a distinguished
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    field: FieldSpec,
    n_vars: usize,
    qs: Vec<MatrixFq>,
    /// 0-based
    distinguished: usize,
}

impl QuadraticSystem {
    pub fn new(
        field: &FieldSpec,
        n_vars: usize,
        qs: Vec<MatrixFq>,
        distinguished: usize,
    ) -> Result<Self> {
        if distinguished >= n_vars {
            return Err(Error::InvalidParameter(format!(
                "distinguished variable {distinguished} out of range for {n_vars} variables"
            )));
        }
        for q in &qs {
            if q.field() != field {
                return Err(Error::FieldMismatch);
            }
            if q.rows() != n_vars || q.cols() != n_vars {
                return Err(Error::DimensionMismatch {
                    op: "quadratic system",
                    detail: format!("{}x{} matrix for {n_vars} variables", q.rows(), q.cols()),
                });
            }
        }
        Ok(Self {
            field: field.clone(),
            n_vars,
            qs,
            distinguished,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn m(&self) -> usize {
        self.qs.len()
    }

    pub fn qs(&self) -> &[MatrixFq] {
        &self.qs
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    /// Values `Q_l(x x^T)` for each equation.
    pub fn evaluate(&self, x: &[u32]) -> Result<Vec<u32>> {
        let v = VectorFq::new(&self.field, x.to_vec())?;
        let xx = v.outer(&v)?;
        self.qs.iter().map(|q| quad_form(q, &xx)).collect()
    }

    pub fn is_solution(&self, x: &[u32]) -> Result<bool> {
        Ok(self.evaluate(x)?.iter().all(|&v| v == 0))
    }
}

/// Accumulates integer coefficients of a quadratic form in upper-triangular
/// position.
struct QuadBuilder {
    n: usize,
    coeffs: Vec<i64>,
}

impl QuadBuilder {
    fn new(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![0; n * n],
        }
    }

    fn term(&mut self, c: i64, a: usize, b: usize) -> &mut Self {
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        self.coeffs[i * self.n + j] += c;
        self
    }

    fn finish(&self, field: &FieldSpec) -> MatrixFq {
        let data = self.coeffs.iter().map(|&c| field.from_int(c)).collect();
        MatrixFq::new(field, self.n, self.n, data).expect("prime subfield elements are valid")
    }
}

/// Compiles a circuit to quadratic equations over `x_1..x_n, z` (z last):
///
/// - `x_i (x_i - z) = 0` for every gate,
/// - AND `y_k = y_i & y_j`: `x_k^2 - x_i x_j = 0`,
/// - OR: `z^2 - x_k^2 - (z - x_i)(z - x_j) = 0`,
/// - NOT `y_k = !y_i`: `z^2 - x_k^2 - x_i^2 = 0`,
/// - output `y_k`: `z^2 - x_k^2 = 0`.
///
/// Each equation is stored as the upper-triangular matrix of its left side
/// minus its right side.
pub fn circuit_to_quadratic(c: &Circuit, field: &FieldSpec) -> QuadraticSystem {
    let n = c.len() + 1;
    let z = n - 1;
    let mut qs = Vec::new();
    for i in 0..c.len() {
        qs.push(
            QuadBuilder::new(n)
                .term(1, i, i)
                .term(-1, i, z)
                .finish(field),
        );
    }
    for (k, g) in c.gates().iter().enumerate() {
        let mut b = QuadBuilder::new(n);
        match *g {
            Gate::Input => continue,
            Gate::And(i, j) => {
                b.term(1, k, k).term(-1, i, j);
            }
            Gate::Or(i, j) => {
                // (z - x_i)(z - x_j) = z^2 - x_i z - x_j z + x_i x_j
                b.term(1, z, z)
                    .term(-1, k, k)
                    .term(-1, z, z)
                    .term(1, i, z)
                    .term(1, j, z)
                    .term(-1, i, j);
            }
            Gate::Not(i) => {
                b.term(1, z, z).term(-1, k, k).term(-1, i, i);
            }
        }
        qs.push(b.finish(field));
    }
    let out = c.output();
    qs.push(
        QuadBuilder::new(n)
            .term(1, z, z)
            .term(-1, out, out)
            .finish(field),
    );
    QuadraticSystem::new(field, n, qs, z).expect("well-formed by construction")
}

/// Every circuit with `1..=max_gates` gates over INPUT/NOT/AND/OR, all output
/// choices included. AND/OR operands are unordered pairs (repeats allowed).
pub fn enumerate_circuits(max_gates: usize) -> Vec<Circuit> {
    fn options(k: usize) -> Vec<Gate> {
        let mut v = vec![Gate::Input];
        for i in 0..k {
            v.push(Gate::Not(i));
        }
        for i in 0..k {
            for j in i..k {
                v.push(Gate::And(i, j));
                v.push(Gate::Or(i, j));
            }
        }
        v
    }
    let mut out = Vec::new();
    let mut prefixes: Vec<Vec<Gate>> = vec![vec![]];
    for size in 1..=max_gates {
        let mut next = Vec::new();
        for p in &prefixes {
            for g in options(size - 1) {
                let mut gates = p.clone();
                gates.push(g);
                next.push(gates);
            }
        }
        for gates in &next {
            for o in 0..size {
                out.push(Circuit::new(gates.clone(), o).unwrap());
            }
        }
        prefixes = next;
    }
    out
}
