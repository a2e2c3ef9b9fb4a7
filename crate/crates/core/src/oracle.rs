//! Brute-force ground truth and the instance verifier.
//!
//! Every search enumerates combination coefficients (dimension `D`) and never
//! the ambient space, so `L = N^2 + 1` may be large as long as `q^D` is not.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::enumerate::{check_cap, Span};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::frontend::{Circuit, QuadraticSystem};
use crate::linalg::VectorFq;
use crate::reduction::{GapMeta, MdpInstance, NcpInstance};

/// A minimum-weight vector together with the coefficients that produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightWitness {
    pub weight: usize,
    pub coeffs: Vec<u32>,
    pub vector: VectorFq,
}

fn span<'a>(
    field: &'a FieldSpec,
    len: usize,
    basis: &'a [VectorFq],
    offset: Option<&'a VectorFq>,
) -> Span<'a> {
    Span::new(
        field,
        len,
        basis.iter().map(|b| b.as_slice()).collect(),
        offset.map(|o| o.as_slice()),
    )
}

/// Exact minimum weight over nonzero vectors of `span(basis)`. `None` when the
/// basis is empty. Ties resolve to the smallest coefficient index.
pub fn subspace_min_weight(
    field: &FieldSpec,
    len: usize,
    basis: &[VectorFq],
    cap: u128,
) -> Result<Option<WeightWitness>> {
    check_cap(field.q(), basis.len(), cap)?;
    let s = span(field, len, basis, None);
    Ok(s.min_weight(true).map(|b| WeightWitness {
        weight: b.weight,
        vector: VectorFq::from_raw(field, s.combine(&b.coeffs)),
        coeffs: b.coeffs,
    }))
}

/// Exact minimum weight over the coset `offset + span(hom_basis)`.
pub fn affine_min_weight(
    offset: &VectorFq,
    hom_basis: &[VectorFq],
    cap: u128,
) -> Result<WeightWitness> {
    let field = offset.field();
    check_cap(field.q(), hom_basis.len(), cap)?;
    let s = span(field, offset.len(), hom_basis, Some(offset));
    let b = s.min_weight(false).expect("a coset is never empty");
    Ok(WeightWitness {
        weight: b.weight,
        vector: VectorFq::from_raw(field, s.combine(&b.coeffs)),
        coeffs: b.coeffs,
    })
}

fn digits(mut idx: u64, q: u32, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (idx % q as u64) as u32;
            idx /= q as u64;
            d
        })
        .collect()
}

/// First nonzero solution in index order (`index = sum x_i q^i`), restricted
/// to `x_z = 1` when `require_distinguished`.
pub fn quad_nonzero_solve(
    sys: &QuadraticSystem,
    require_distinguished: bool,
    cap: u128,
) -> Result<Option<Vec<u32>>> {
    let f = sys.field();
    let q = f.q();
    let n = sys.n_vars();
    let z = sys.distinguished();
    let free = if require_distinguished { n - 1 } else { n };
    let count = check_cap(q, free, cap)? as u64;
    // upper-triangular sparse terms per equation
    let terms: Vec<Vec<(usize, usize, u32)>> = sys
        .qs()
        .iter()
        .map(|m| {
            let mut t = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let c = m.get(i, j);
                    if c != 0 {
                        t.push((i, j, c));
                    }
                }
            }
            t
        })
        .collect();
    let solves = |x: &[u32]| {
        terms.iter().all(|eq| {
            eq.iter()
                .fold(0, |acc, &(i, j, c)| f.add(acc, f.mul(c, f.mul(x[i], x[j]))))
                == 0
        })
    };
    let build = |idx: u64| -> Vec<u32> {
        if require_distinguished {
            let mut rest = digits(idx, q, n - 1).into_iter();
            (0..n)
                .map(|i| if i == z { 1 } else { rest.next().unwrap() })
                .collect()
        } else {
            digits(idx, q, n)
        }
    };
    let start = if require_distinguished { 0 } else { 1 };
    Ok((start..count)
        .into_par_iter()
        .map(build)
        .find_first(|x| solves(x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    YesConfirmed,
    NoConfirmed,
    GapViolation,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::YesConfirmed => "YES_CONFIRMED",
            Verdict::NoConfirmed => "NO_CONFIRMED",
            Verdict::GapViolation => "GAP_VIOLATION",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "YES_CONFIRMED" => Verdict::YesConfirmed,
            "NO_CONFIRMED" => Verdict::NoConfirmed,
            "GAP_VIOLATION" => Verdict::GapViolation,
            "INCONCLUSIVE" => Verdict::Inconclusive,
            other => {
                return Err(Error::Parse {
                    line: 0,
                    reason: format!("unknown verdict `{other}`"),
                })
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Mdp,
    Ncp,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::Mdp => "MDP",
            InstanceKind::Ncp => "NCP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub instance_id: String,
    pub kind: InstanceKind,
    /// Exact optimum; `None` when the subspace is `{0}` (no nonzero vector).
    pub oracle_value: Option<usize>,
    pub yes_threshold: u64,
    pub no_threshold: u64,
    pub verdict: Verdict,
    pub witness: Option<Vec<u32>>,
    pub circuit_satisfiable: Option<bool>,
    pub note: Option<String>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn is_confirmed(&self) -> bool {
        matches!(self.verdict, Verdict::YesConfirmed | Verdict::NoConfirmed)
    }

    /// Exit status: 0 confirmed, 1 violation, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::YesConfirmed | Verdict::NoConfirmed => 0,
            Verdict::GapViolation => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Mdp(MdpInstance),
    Ncp(NcpInstance),
}

impl Instance {
    pub fn meta(&self) -> &GapMeta {
        match self {
            Instance::Mdp(i) => i.meta(),
            Instance::Ncp(i) => i.meta(),
        }
    }

    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::Mdp(_) => InstanceKind::Mdp,
            Instance::Ncp(_) => InstanceKind::Ncp,
        }
    }

    fn summary(&self) -> String {
        match self {
            Instance::Mdp(i) => format!("MDP L={} dim={} t={}", i.len(), i.dim(), i.meta().t),
            Instance::Ncp(i) => format!("NCP L={} dim={} t={}", i.len(), i.dim(), i.meta().t),
        }
    }

    /// Exact optimum of the instance.
    pub fn solve(&self, cap: u128) -> Result<Option<WeightWitness>> {
        match self {
            Instance::Mdp(i) => subspace_min_weight(i.field(), i.len(), i.basis(), cap),
            Instance::Ncp(i) => affine_min_weight(i.offset(), i.hom_basis(), cap).map(Some),
        }
    }

    /// Re-derives the witness from its coefficients and checks its weight and,
    /// for NCP, the distinguished coordinate.
    fn witness_valid(&self, w: &WeightWitness) -> bool {
        let (v, dist) = match self {
            Instance::Mdp(i) => (i.combine(&w.coeffs), None),
            Instance::Ncp(i) => (i.combine(&w.coeffs), i.distinguished()),
        };
        v == w.vector
            && v.weight() == w.weight
            && !v.is_zero()
            && dist.is_none_or(|d| v.get(d) == 1)
    }
}

/// Classifies an oracle value against the thresholds and, when given, the
/// satisfiability of the source circuit.
pub fn classify(value: Option<usize>, meta: &GapMeta, satisfiable: Option<bool>) -> Verdict {
    let base = match value {
        Some(v) if v as u64 <= meta.yes_threshold => Verdict::YesConfirmed,
        Some(v) if v as u64 >= meta.no_threshold => Verdict::NoConfirmed,
        None => Verdict::NoConfirmed,
        Some(_) => Verdict::GapViolation,
    };
    match (base, satisfiable) {
        (Verdict::YesConfirmed, Some(false)) | (Verdict::NoConfirmed, Some(true)) => {
            Verdict::GapViolation
        }
        (v, _) => v,
    }
}

pub fn verify_instance(inst: &Instance, ground_truth: Option<&Circuit>, cap: u128) -> VerifyReport {
    let start = Instant::now();
    let meta = inst.meta();
    let satisfiable = ground_truth.map(|c| c.is_satisfiable());
    let mut report = VerifyReport {
        instance_id: inst.summary(),
        kind: inst.kind(),
        oracle_value: None,
        yes_threshold: meta.yes_threshold,
        no_threshold: meta.no_threshold,
        verdict: Verdict::Inconclusive,
        witness: None,
        circuit_satisfiable: satisfiable,
        note: None,
        elapsed: Duration::ZERO,
    };
    match inst.solve(cap) {
        Err(e) => report.note = Some(e.to_string()),
        Ok(best) => {
            report.oracle_value = best.as_ref().map(|w| w.weight);
            report.verdict = classify(report.oracle_value, meta, satisfiable);
            if let Some(w) = best {
                if !inst.witness_valid(&w) {
                    report.verdict = Verdict::GapViolation;
                    report.note = Some("oracle witness failed re-check".into());
                }
                report.witness = Some(w.vector.into_inner());
            } else {
                report.note = Some("subspace is {0}".into());
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

pub fn verify_mdp(inst: &MdpInstance, ground_truth: Option<&Circuit>, cap: u128) -> VerifyReport {
    verify_instance(&Instance::Mdp(inst.clone()), ground_truth, cap)
}

pub fn verify_ncp(inst: &NcpInstance, ground_truth: Option<&Circuit>, cap: u128) -> VerifyReport {
    verify_instance(&Instance::Ncp(inst.clone()), ground_truth, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{hadamard, Rational};
    use crate::enumerate::Limits;
    use crate::frontend::{circuit_to_quadratic, parse_circuit};

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn v(f: &FieldSpec, d: &[u32]) -> VectorFq {
        VectorFq::new(f, d.to_vec()).unwrap()
    }

    fn meta(yes: u64, no: u64) -> GapMeta {
        GapMeta {
            yes_threshold: yes,
            no_threshold: no,
            d: 1,
            eps: Rational::from_integer(0),
            t: 1,
            provenance: String::new(),
        }
    }

    #[test]
    fn subspace_examples() {
        let f = f2();
        let b = [v(&f, &[1, 1, 0]), v(&f, &[0, 1, 1])];
        let w = subspace_min_weight(&f, 3, &b, 1 << 10).unwrap().unwrap();
        assert_eq!(w.weight, 2);
        // ties resolve to coefficient index 1 = (1, 0)
        assert_eq!(w.coeffs, vec![1, 0]);
        let e1 = [v(&f, &[1, 0, 0])];
        assert_eq!(
            subspace_min_weight(&f, 3, &e1, 8).unwrap().unwrap().weight,
            1
        );
        assert!(subspace_min_weight(&f, 3, &[], 8).unwrap().is_none());
        let h = hadamard(&f, 3, &Limits::default()).unwrap();
        let cols: Vec<VectorFq> = (0..3).map(|j| h.generator().column(j)).collect();
        assert_eq!(
            subspace_min_weight(&f, 8, &cols, 8)
                .unwrap()
                .unwrap()
                .weight,
            4
        );
        assert!(matches!(
            subspace_min_weight(&f, 8, &cols, 7),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn affine_examples() {
        let f = f2();
        let w = affine_min_weight(&v(&f, &[1, 1, 1]), &[], 8).unwrap();
        assert_eq!(w.weight, 3);
        let w = affine_min_weight(&v(&f, &[1, 0]), &[v(&f, &[0, 1])], 8).unwrap();
        assert_eq!(w.weight, 1);
        assert_eq!(w.vector.as_slice(), &[1, 0]);
    }

    #[test]
    fn quad_solver_examples() {
        let f = f2();
        let not = circuit_to_quadratic(
            &parse_circuit("a = INPUT\nb = NOT a\nOUTPUT b").unwrap(),
            &f,
        );
        assert_eq!(
            quad_nonzero_solve(&not, false, 1 << 10).unwrap(),
            Some(vec![0, 1, 1])
        );
        assert_eq!(
            quad_nonzero_solve(&not, true, 1 << 10).unwrap(),
            Some(vec![0, 1, 1])
        );
        let and_not = circuit_to_quadratic(
            &parse_circuit("a = INPUT\nb = NOT a\nc = AND a b\nOUTPUT c").unwrap(),
            &f,
        );
        assert_eq!(quad_nonzero_solve(&and_not, false, 1 << 10).unwrap(), None);
        assert!(quad_nonzero_solve(&and_not, false, 4).is_err());
    }

    #[test]
    fn classification() {
        let m = meta(17, 24);
        assert_eq!(classify(Some(16), &m, None), Verdict::YesConfirmed);
        assert_eq!(classify(Some(24), &m, None), Verdict::NoConfirmed);
        assert_eq!(classify(Some(20), &m, None), Verdict::GapViolation);
        assert_eq!(classify(None, &m, None), Verdict::NoConfirmed);
        assert_eq!(classify(Some(16), &m, Some(false)), Verdict::GapViolation);
        assert_eq!(classify(Some(30), &m, Some(true)), Verdict::GapViolation);
    }

    #[test]
    fn hand_built_gap_violation() {
        let f = f2();
        let inst = MdpInstance::new(&f, 4, vec![v(&f, &[1, 1, 1, 0])], None, meta(2, 4)).unwrap();
        let r = verify_mdp(&inst, None, 1 << 10);
        assert_eq!(r.oracle_value, Some(3));
        assert_eq!(r.verdict, Verdict::GapViolation);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn cap_gives_inconclusive() {
        let f = f2();
        let basis: Vec<VectorFq> = (0..5).map(|i| VectorFq::unit(&f, 5, i)).collect();
        let inst = MdpInstance::new(&f, 5, basis, None, meta(1, 2)).unwrap();
        let r = verify_mdp(&inst, None, 8);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.exit_code(), 2);
        assert!(r.note.is_some());
    }

    #[test]
    fn verdict_text_roundtrip() {
        for v in [
            Verdict::YesConfirmed,
            Verdict::NoConfirmed,
            Verdict::GapViolation,
            Verdict::Inconclusive,
        ] {
            assert_eq!(v.to_string().parse::<Verdict>().unwrap(), v);
        }
    }
}
