//! Quadratic system -> MDP -> amplified MDP -> NCP.

use crate::codes::{LinearCode, Rational};
use crate::enumerate::Limits;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::frontend::QuadraticSystem;
use crate::linalg::{rank_of, symmetric_solution_basis, MatrixFq, VectorFq};

/// Upper bound on `dim * L` entries held by an amplified basis.
pub const MAX_BASIS_ENTRIES: u128 = 1 << 28;

/// Gap metadata shared by MDP and NCP instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapMeta {
    /// YES: some vector has weight `<= yes_threshold`.
    pub yes_threshold: u64,
    /// NO: every vector has weight `>= no_threshold`.
    pub no_threshold: u64,
    /// Distance of the code used by the reduction, raised to the power `t`.
    pub d: u64,
    /// Balancedness of the (tensored) code.
    pub eps: Rational,
    /// Amplification level.
    pub t: u32,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdpInstance {
    field: FieldSpec,
    len: usize,
    basis: Vec<VectorFq>,
    /// 0-based coordinate; always the last one when set.
    distinguished: Option<usize>,
    meta: GapMeta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcpInstance {
    field: FieldSpec,
    len: usize,
    offset: VectorFq,
    hom_basis: Vec<VectorFq>,
    distinguished: Option<usize>,
    meta: GapMeta,
}

fn check_shape(field: &FieldSpec, len: usize, vs: &[VectorFq]) -> Result<()> {
    for v in vs {
        if v.field() != field {
            return Err(Error::FieldMismatch);
        }
        if v.len() != len {
            return Err(Error::DimensionMismatch {
                op: "instance basis",
                detail: format!("vector of length {} in ambient length {len}", v.len()),
            });
        }
    }
    Ok(())
}

fn check_vectors(field: &FieldSpec, len: usize, vs: &[VectorFq]) -> Result<()> {
    check_shape(field, len, vs)?;
    if rank_of(field, len, vs)? != vs.len() {
        return Err(Error::InvalidParameter(
            "basis vectors are linearly dependent".into(),
        ));
    }
    Ok(())
}

fn check_distinguished(len: usize, d: Option<usize>) -> Result<()> {
    match d {
        Some(i) if i >= len => Err(Error::InvalidParameter(format!(
            "distinguished coordinate {} outside 1..={len}",
            i + 1
        ))),
        _ => Ok(()),
    }
}

impl MdpInstance {
    pub fn new(
        field: &FieldSpec,
        len: usize,
        basis: Vec<VectorFq>,
        distinguished: Option<usize>,
        meta: GapMeta,
    ) -> Result<Self> {
        check_vectors(field, len, &basis)?;
        check_distinguished(len, distinguished)?;
        Ok(Self {
            field: field.clone(),
            len,
            basis,
            distinguished,
            meta,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Ambient length `L`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[VectorFq] {
        &self.basis
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn meta(&self) -> &GapMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut GapMeta {
        &mut self.meta
    }

    /// `sum coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[u32]) -> VectorFq {
        let mut v = VectorFq::zeros(&self.field, self.len);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                v.axpy(c, b.as_slice());
            }
        }
        v
    }
}

impl NcpInstance {
    pub fn new(
        field: &FieldSpec,
        len: usize,
        offset: VectorFq,
        hom_basis: Vec<VectorFq>,
        distinguished: Option<usize>,
        meta: GapMeta,
    ) -> Result<Self> {
        check_shape(field, len, std::slice::from_ref(&offset))?;
        check_vectors(field, len, &hom_basis)?;
        check_distinguished(len, distinguished)?;
        if let Some(i) = distinguished {
            if offset.get(i) != 1 {
                return Err(Error::InvalidParameter(
                    "offset must have distinguished coordinate 1".into(),
                ));
            }
            if hom_basis.iter().any(|h| h.get(i) != 0) {
                return Err(Error::InvalidParameter(
                    "homogeneous basis must vanish on the distinguished coordinate".into(),
                ));
            }
        }
        Ok(Self {
            field: field.clone(),
            len,
            offset,
            hom_basis,
            distinguished,
            meta,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.hom_basis.len()
    }

    pub fn offset(&self) -> &VectorFq {
        &self.offset
    }

    pub fn hom_basis(&self) -> &[VectorFq] {
        &self.hom_basis
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn meta(&self) -> &GapMeta {
        &self.meta
    }

    pub fn combine(&self, coeffs: &[u32]) -> VectorFq {
        let mut v = self.offset.clone();
        for (b, &c) in self.hom_basis.iter().zip(coeffs) {
            if c != 0 {
                v.axpy(c, b.as_slice());
            }
        }
        v
    }
}

/// True iff `(1 + eps)^2 < 1 + 1/q`.
pub fn gap_open(q: u32, eps: Rational) -> bool {
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    (den + num).pow(2) * (q as u128) < den * den * (q as u128 + 1)
}

/// `(floor((1 + eps)^2 d^2) [+ 1], ceil((1 + 1/q) d^2))`.
pub fn thresholds(q: u32, d: u64, eps: Rational, distinguished: bool) -> Result<(u64, u64)> {
    if !gap_open(q, eps) {
        return Err(Error::GapClosed(format!("(1 + {eps})^2 >= 1 + 1/{q}")));
    }
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    let d2 = d as u128 * d as u128;
    let yes = (den + num).pow(2) * d2 / (den * den) + distinguished as u128;
    let no = ((q as u128 + 1) * d2).div_ceil(q as u128);
    if no <= yes {
        return Err(Error::GapClosed(format!(
            "integer thresholds collapse: yes={yes}, no={no} at d={d}"
        )));
    }
    let to64 = |v: u128| {
        u64::try_from(v).map_err(|_| Error::InvalidParameter("threshold overflow".into()))
    };
    Ok((to64(yes)?, to64(no)?))
}

/// Builds the MDP instance spanned by `C X C^T` for `X` ranging over a basis
/// of the symmetric solutions of the system, optionally appending `X[z][z]`
/// as a last, distinguished coordinate. Also returns that basis of `X`s, in
/// the same order as the instance basis.
pub fn quad_to_mdp_with_preimages(
    sys: &QuadraticSystem,
    code: &LinearCode,
    distinguished: bool,
    limits: &Limits,
) -> Result<(MdpInstance, Vec<MatrixFq>)> {
    let field = sys.field();
    if code.field() != field {
        return Err(Error::FieldMismatch);
    }
    let n = sys.n_vars();
    if code.dim() != n {
        return Err(Error::DimensionMismatch {
            op: "quad_to_mdp",
            detail: format!("code dimension {} for {n} variables", code.dim()),
        });
    }
    let eps = code
        .eps()
        .ok_or_else(|| Error::InvalidParameter("code has no balancedness parameter".into()))?;
    let d = code
        .d_claimed()
        .ok_or_else(|| Error::InvalidParameter("code has no distance bound".into()))?;
    let q = field.q();
    let (yes, no) = thresholds(q, d, eps, distinguished)?;

    let big_n = code.block_len();
    let len = limits.check_len(
        "MDP ambient length",
        (big_n as u128).pow(2) + distinguished as u128,
    )?;
    let preimages = symmetric_solution_basis(field, sys.qs(), n)?;
    let c = code.generator();
    let ct = c.transpose();
    let z = sys.distinguished();
    let mut basis = Vec::with_capacity(preimages.len());
    for x in &preimages {
        let y = c.matmul(x)?.matmul(&ct)?;
        let mut flat = y.flatten().into_inner();
        if distinguished {
            flat.push(x.get(z, z));
        }
        basis.push(VectorFq::new(field, flat)?);
    }
    let rank1 = {
        let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
        let w = (den + num) * d as u128 / den;
        w * w + distinguished as u128
    };
    let meta = GapMeta {
        yes_threshold: yes,
        no_threshold: no,
        d,
        eps,
        t: 1,
        provenance: format!(
            "quad_to_mdp vars={n} equations={} N={big_n} rank1_bound={rank1}",
            sys.m()
        ),
    };
    let inst = MdpInstance::new(field, len, basis, distinguished.then_some(len - 1), meta)?;
    Ok((inst, preimages))
}

pub fn quad_to_mdp(
    sys: &QuadraticSystem,
    code: &LinearCode,
    distinguished: bool,
    limits: &Limits,
) -> Result<MdpInstance> {
    Ok(quad_to_mdp_with_preimages(sys, code, distinguished, limits)?.0)
}

/// `t`-fold tensor power of the instance: basis of all `t`-fold Kronecker
/// products (first factor most significant), thresholds raised to the `t`.
pub fn amplify(inst: &MdpInstance, t: u32, limits: &Limits) -> Result<MdpInstance> {
    if t == 0 {
        return Err(Error::InvalidParameter(
            "amplification level must be >= 1".into(),
        ));
    }
    if t == 1 {
        return Ok(inst.clone());
    }
    let len = inst.len as u128;
    let new_len = len.checked_pow(t).ok_or(Error::SizeCap {
        what: "amplified length",
        size: u128::MAX,
        cap: limits.max_len as u128,
    })?;
    let new_len = limits.check_len("amplified length", new_len)?;
    let entries = (inst.dim() as u128)
        .saturating_pow(t)
        .saturating_mul(new_len as u128);
    if entries > MAX_BASIS_ENTRIES {
        return Err(Error::SizeCap {
            what: "amplified basis storage",
            size: entries,
            cap: MAX_BASIS_ENTRIES,
        });
    }
    if let Some(i) = inst.distinguished {
        if i + 1 != inst.len {
            return Err(Error::InvalidParameter(
                "distinguished coordinate must be last to survive tensoring".into(),
            ));
        }
    }
    let mut basis = inst.basis.clone();
    for _ in 1..t {
        let mut next = Vec::with_capacity(basis.len() * inst.dim());
        for a in &basis {
            for b in &inst.basis {
                next.push(a.kron(b)?);
            }
        }
        basis = next;
    }
    let pow = |v: u64| {
        v.checked_pow(t)
            .ok_or_else(|| Error::InvalidParameter("threshold overflow under amplification".into()))
    };
    let one = Rational::from_integer(1);
    let mut growth = one;
    for _ in 0..t {
        growth *= one + inst.meta.eps;
    }
    let meta = GapMeta {
        yes_threshold: pow(inst.meta.yes_threshold)?,
        no_threshold: pow(inst.meta.no_threshold)?,
        d: pow(inst.meta.d)?,
        eps: growth - one,
        t: inst.meta.t * t,
        provenance: format!("{}; amplify t={t}", inst.meta.provenance),
    };
    Ok(MdpInstance {
        field: inst.field.clone(),
        len: new_len,
        basis,
        distinguished: inst.distinguished.map(|_| new_len - 1),
        meta,
    })
}

/// Affine slice `{x in V : x_dist = 1}`.
pub fn mdp_to_ncp(inst: &MdpInstance) -> Result<NcpInstance> {
    let dist = inst.distinguished.ok_or_else(|| {
        Error::InvalidParameter("instance has no distinguished coordinate".into())
    })?;
    let f = &inst.field;
    let pivot = inst
        .basis
        .iter()
        .position(|b| b.get(dist) != 0)
        .ok_or(Error::EmptySlice)?;
    let offset = inst.basis[pivot].scale(f.inv(inst.basis[pivot].get(dist))?);
    let hom_basis = inst
        .basis
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != pivot)
        .map(|(_, b)| {
            let mut h = b.clone();
            h.axpy(f.neg(b.get(dist)), offset.as_slice());
            h
        })
        .collect();
    let mut meta = inst.meta.clone();
    meta.provenance = format!("{}; mdp_to_ncp", meta.provenance);
    NcpInstance::new(f, inst.len, offset, hom_basis, Some(dist), meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hadamard;
    use crate::frontend::{circuit_to_quadratic, parse_circuit};

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn meta() -> GapMeta {
        GapMeta {
            yes_threshold: 1,
            no_threshold: 2,
            d: 1,
            eps: Rational::from_integer(0),
            t: 1,
            provenance: "test".into(),
        }
    }

    #[test]
    fn threshold_values() {
        let z = Rational::from_integer(0);
        assert_eq!(thresholds(2, 4, z, true).unwrap(), (17, 24));
        assert_eq!(thresholds(2, 4, z, false).unwrap(), (16, 24));
        assert_eq!(thresholds(2, 8, z, true).unwrap(), (65, 96));
        assert!(matches!(
            thresholds(2, 4, Rational::new(1, 2), false),
            Err(Error::GapClosed(_))
        ));
        assert!(matches!(
            thresholds(2, 1, z, true),
            Err(Error::GapClosed(_))
        ));
        // eps = 1/(9q) keeps the gap open for every q
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            assert!(gap_open(q, Rational::new(1, 9 * q as u64)));
        }
    }

    #[test]
    fn gap_ratio_formula() {
        // (1 + 1/q) / (1 + 1/(3q)) = 1 + 2/(3q + 1)
        for q in [2u64, 3, 4, 5] {
            let lhs = (Rational::from_integer(1) + Rational::new(1, q))
                / (Rational::from_integer(1) + Rational::new(1, 3 * q));
            assert_eq!(lhs, Rational::from_integer(1) + Rational::new(2, 3 * q + 1));
        }
        assert_eq!(
            Rational::from_integer(1) + Rational::new(2, 7),
            Rational::new(9, 7)
        );
    }

    #[test]
    fn not_circuit_mdp_shape() {
        let l = Limits::default();
        let f = f2();
        let sys = circuit_to_quadratic(
            &parse_circuit("a = INPUT\nb = NOT a\nOUTPUT b").unwrap(),
            &f,
        );
        let code = hadamard(&f, 3, &l).unwrap();
        let (inst, pre) = quad_to_mdp_with_preimages(&sys, &code, true, &l).unwrap();
        assert_eq!(inst.len(), 65);
        assert_eq!(inst.distinguished(), Some(64));
        assert_eq!(inst.dim(), pre.len());
        assert_eq!(inst.meta().yes_threshold, 17);
        assert_eq!(inst.meta().no_threshold, 24);
        for x in &pre {
            assert!(x.is_symmetric());
        }
        // witness (Cx)(Cx)^T with x = (0, 1, 1)
        let x = VectorFq::new(&f, vec![0, 1, 1]).unwrap();
        let cx = code.encode(&x).unwrap();
        assert_eq!(cx.kron(&cx).unwrap().weight(), 16);
    }

    #[test]
    fn dimension_and_gap_errors() {
        let l = Limits::default();
        let f = f2();
        let sys = circuit_to_quadratic(&parse_circuit("a = INPUT\nOUTPUT a").unwrap(), &f);
        let code = hadamard(&f, 3, &l).unwrap();
        assert!(matches!(
            quad_to_mdp(&sys, &code, false, &l),
            Err(Error::DimensionMismatch { .. })
        ));
        let g = MatrixFq::from_rows(&f, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let loose = LinearCode::new(g, Some(1), Some(Rational::from_integer(1))).unwrap();
        assert!(matches!(
            quad_to_mdp(&sys, &loose, false, &l),
            Err(Error::GapClosed(_))
        ));
    }

    #[test]
    fn amplify_identity_and_single_generator() {
        let l = Limits::default();
        let f = f2();
        let v = VectorFq::new(&f, vec![1, 1, 0]).unwrap();
        let inst = MdpInstance::new(&f, 3, vec![v], None, meta()).unwrap();
        assert_eq!(amplify(&inst, 1, &l).unwrap(), inst);
        let a = amplify(&inst, 2, &l).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(a.dim(), 1);
        assert_eq!(a.basis()[0].weight(), 4);
        assert_eq!(a.meta().t, 2);
        assert!(amplify(&inst, 0, &l).is_err());
        let tiny = Limits {
            max_len: 8,
            ..Limits::default()
        };
        assert!(matches!(
            amplify(&inst, 2, &tiny),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn ncp_slice() {
        let f = f2();
        let b0 = VectorFq::new(&f, vec![1, 1, 0, 1]).unwrap();
        let b1 = VectorFq::new(&f, vec![0, 1, 1, 1]).unwrap();
        let b2 = VectorFq::new(&f, vec![1, 0, 0, 0]).unwrap();
        let inst = MdpInstance::new(&f, 4, vec![b0.clone(), b1, b2], Some(3), meta()).unwrap();
        let ncp = mdp_to_ncp(&inst).unwrap();
        assert_eq!(ncp.offset(), &b0);
        assert_eq!(ncp.dim(), 2);
        assert_eq!(ncp.hom_basis()[0].as_slice(), &[1, 0, 1, 0]);
        for h in ncp.hom_basis() {
            assert_eq!(h.get(3), 0);
        }
    }

    #[test]
    fn ncp_empty_slice() {
        let f = f2();
        let v = VectorFq::new(&f, vec![1, 0]).unwrap();
        let inst = MdpInstance::new(&f, 2, vec![v], Some(1), meta()).unwrap();
        assert_eq!(mdp_to_ncp(&inst), Err(Error::EmptySlice));
        let plain = MdpInstance::new(&f, 2, vec![VectorFq::unit(&f, 2, 0)], None, meta()).unwrap();
        assert!(mdp_to_ncp(&plain).is_err());
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = f2();
        let v = VectorFq::new(&f, vec![1, 1]).unwrap();
        assert!(MdpInstance::new(&f, 2, vec![v.clone(), v], None, meta()).is_err());
    }
}
