//! Linear codes: Hadamard, Reed-Solomon, concatenated balanced codes and
//! tensor products, with exact distance computation by enumeration.

use num_rational::Ratio;

use crate::enumerate::{check_cap, Limits, Span};
use crate::error::{Error, Result};
use crate::field::{make_field, FieldSpec};
use crate::linalg::{MatrixFq, VectorFq};

pub type Rational = Ratio<u64>;

/// A linear code given by an `N x n` generator matrix whose columns span the
/// code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: MatrixFq,
    /// Lower bound on the minimum distance (exact once refined).
    d_claimed: Option<u64>,
    /// Balancedness: every nonzero weight lies in `[d, (1 + eps) d]`.
    eps: Option<Rational>,
}

impl LinearCode {
    /// Wraps a generator matrix; fails unless it has full column rank.
    pub fn new(gen: MatrixFq, d_claimed: Option<u64>, eps: Option<Rational>) -> Result<Self> {
        if gen.rank() != gen.cols() {
            return Err(Error::InvalidParameter(format!(
                "generator has rank {} < dimension {}",
                gen.rank(),
                gen.cols()
            )));
        }
        Ok(Self {
            gen,
            d_claimed,
            eps,
        })
    }

    pub fn generator(&self) -> &MatrixFq {
        &self.gen
    }

    pub fn field(&self) -> &FieldSpec {
        self.gen.field()
    }

    /// Block length `N`.
    pub fn block_len(&self) -> usize {
        self.gen.rows()
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.gen.cols()
    }

    pub fn d_claimed(&self) -> Option<u64> {
        self.d_claimed
    }

    pub fn eps(&self) -> Option<Rational> {
        self.eps
    }

    pub fn encode(&self, message: &VectorFq) -> Result<VectorFq> {
        self.gen.mul_vec(message)
    }

    fn span(&self) -> (Vec<Vec<u32>>, usize) {
        let cols = (0..self.dim())
            .map(|j| self.gen.column(j).into_inner())
            .collect();
        (cols, self.block_len())
    }

    /// Exact minimum distance over all `q^n - 1` nonzero messages.
    pub fn min_distance_exhaustive(&self, cap: u128) -> Result<u64> {
        check_cap(self.field().q(), self.dim(), cap)?;
        let (cols, len) = self.span();
        let span = Span::new(
            self.field(),
            len,
            cols.iter().map(|c| c.as_slice()).collect(),
            None,
        );
        Ok(span.min_weight(true).map_or(0, |b| b.weight as u64))
    }

    /// Weights of all nonzero codewords, sorted.
    pub fn weight_profile(&self, cap: u128) -> Result<Vec<usize>> {
        check_cap(self.field().q(), self.dim(), cap)?;
        let (cols, len) = self.span();
        let span = Span::new(
            self.field(),
            len,
            cols.iter().map(|c| c.as_slice()).collect(),
            None,
        );
        Ok(span.weights(true))
    }

    /// Replaces `d_claimed` by the exact distance when enumeration fits the
    /// cap; otherwise leaves the code unchanged.
    pub fn refine_distance(mut self, cap: u128) -> Self {
        if let Ok(d) = self.min_distance_exhaustive(cap) {
            self.d_claimed = Some(d);
        }
        self
    }

    /// `C (x) C` with generator `kron(G, G)`; distance `d^2` and balancedness
    /// `(1 + eps)^2 - 1`.
    pub fn tensor_square(&self, limits: &Limits) -> Result<LinearCode> {
        let n = self.block_len() as u128;
        limits.check_len("tensor block length", n * n)?;
        let gen = self.gen.kron(&self.gen)?;
        let eps = self.eps.map(|e| e * (Rational::from_integer(2) + e));
        Ok(LinearCode {
            gen,
            d_claimed: self.d_claimed.map(|d| d * d),
            eps,
        })
    }
}

/// Hadamard code `F_q^m -> F_q^{q^m}`: row `a` of the generator is `a^T`,
/// rows in index order of `a`.
pub fn hadamard(field: &FieldSpec, m: usize, limits: &Limits) -> Result<LinearCode> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "Hadamard dimension must be at least 1".into(),
        ));
    }
    let q = field.q();
    let n_rows = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let rows = limits.check_len("Hadamard block length", n_rows)?;
    let mut data = Vec::with_capacity(rows * m);
    for a in 0..rows {
        let mut x = a;
        for _ in 0..m {
            data.push((x % q as usize) as u32);
            x /= q as usize;
        }
    }
    let gen = MatrixFq::new(field, rows, m, data)?;
    let d = (q as u64 - 1) * (rows as u64 / q as u64);
    LinearCode::new(gen, Some(d), Some(Rational::from_integer(0)))
}

/// Reed-Solomon code with messages over a prime field `F_q` and symbols in
/// `F_Q`, `Q = q^m`: the coefficients of a polynomial of degree `< n` map to
/// its evaluations at every point of `F_Q`, in index order.
#[derive(Clone, Debug)]
pub struct ReedSolomonCode {
    base: FieldSpec,
    code: LinearCode,
}

impl ReedSolomonCode {
    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        self.code.field()
    }

    /// `Q x n` Vandermonde generator over `F_Q`.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Encodes a message over the base field.
    pub fn encode(&self, message: &VectorFq) -> Result<VectorFq> {
        if message.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        // prime-field elements embed as constant polynomials with the same index
        let lifted = VectorFq::new(self.ext(), message.as_slice().to_vec())?;
        self.code.encode(&lifted)
    }

    /// Minimum weight over all nonzero base-field messages.
    pub fn min_distance_exhaustive(&self, cap: u128) -> Result<u64> {
        let q = self.base.q();
        let n = self.code.dim();
        let count = check_cap(q, n, cap)?;
        let mut best = u64::MAX;
        for idx in 1..count {
            let mut x = idx;
            let msg: Vec<u32> = (0..n)
                .map(|_| {
                    let d = (x % q as u128) as u32;
                    x /= q as u128;
                    d
                })
                .collect();
            let w = self.encode(&VectorFq::new(&self.base, msg)?)?.weight() as u64;
            best = best.min(w);
        }
        Ok(best)
    }
}

pub fn reed_solomon(base: &FieldSpec, n: usize, m: u32) -> Result<ReedSolomonCode> {
    if !base.is_prime_field() {
        return Err(Error::InvalidParameter(
            "Reed-Solomon base field must be a prime field".into(),
        ));
    }
    let ext = make_field(base.p() as u64, m)?;
    let points = ext.q();
    if n > points as usize {
        return Err(Error::DegreeTooLarge { n, points });
    }
    let mut data = Vec::with_capacity(points as usize * n);
    for alpha in 0..points {
        for i in 0..n {
            data.push(ext.pow(alpha, i as u64));
        }
    }
    let gen = MatrixFq::new(&ext, points as usize, n, data)?;
    let d = (points as u64) - n as u64 + 1;
    Ok(ReedSolomonCode {
        base: base.clone(),
        code: LinearCode::new(gen, Some(d), None)?,
    })
}

/// Smallest `m >= 1` with `n <= eps * q^m`.
pub fn balanced_extension_degree(q: u32, n: usize, eps: Rational) -> u32 {
    let mut m = 1u32;
    let mut qm = q as u128;
    while (n as u128) * (*eps.denom() as u128) > (*eps.numer() as u128) * qm {
        m += 1;
        qm *= q as u128;
    }
    m
}

/// `ceil((1 - eps)(1 - 1/q) N)`.
pub fn balanced_distance_bound(q: u32, block_len: u64, eps: Rational) -> u64 {
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    let top = (den - num) * (q as u128 - 1) * block_len as u128;
    let bottom = den * q as u128;
    top.div_ceil(bottom) as u64
}

/// Reed-Solomon over `F_{q^m}` concatenated with the Hadamard code of
/// `F_q^m`, where `m` is the smallest degree with `n <= eps q^m`.
///
/// The block length is `N = Q^2`. Nonzero codeword weights lie in
/// `[(1 - eps)(1 - 1/q) N, (1 - 1/q) N]`, so the code is `2 eps`-balanced.
/// Requires `0 < eps <= 1/2` and a prime base field.
pub fn balanced_code(
    field: &FieldSpec,
    n: usize,
    eps: Rational,
    limits: &Limits,
) -> Result<LinearCode> {
    let m = balanced_extension_degree(field.q(), n, validate_eps(eps)?);
    balanced_code_with_degree(field, n, eps, m, limits)
}

fn validate_eps(eps: Rational) -> Result<Rational> {
    if *eps.numer() == 0 || eps > Rational::new(1, 2) {
        return Err(Error::InvalidParameter(format!(
            "eps must satisfy 0 < eps <= 1/2, got {eps}"
        )));
    }
    Ok(eps)
}

/// As [`balanced_code`] with an explicit extension degree `m`, which must be
/// at least the minimal one.
pub fn balanced_code_with_degree(
    field: &FieldSpec,
    n: usize,
    eps: Rational,
    m: u32,
    limits: &Limits,
) -> Result<LinearCode> {
    let eps = validate_eps(eps)?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "message length must be at least 1".into(),
        ));
    }
    if !field.is_prime_field() {
        return Err(Error::InvalidParameter(
            "balanced codes are built over prime fields only".into(),
        ));
    }
    let q = field.q();
    let min_m = balanced_extension_degree(q, n, eps);
    if m < min_m {
        return Err(Error::InvalidParameter(format!(
            "extension degree {m} below the minimum {min_m} for n={n}, eps={eps}"
        )));
    }
    let big_q = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    let block = limits.check_len("balanced code block length", big_q.saturating_mul(big_q))?;
    let rs = reed_solomon(field, n, m)?;
    let ext = rs.ext().clone();
    let big_q = big_q as usize;
    let m = m as usize;

    // coords[alpha][i] = coordinates of alpha^i over F_q
    let mut data = vec![0u32; block * n];
    let mut coords = vec![vec![0u32; m]; n];
    for alpha in 0..big_q as u32 {
        for (i, c) in coords.iter_mut().enumerate() {
            *c = ext.to_coords(field, ext.pow(alpha, i as u64))?;
        }
        for a in 0..big_q {
            let row = alpha as usize * big_q + a;
            let mut x = a;
            let digits: Vec<u32> = (0..m)
                .map(|_| {
                    let d = (x % q as usize) as u32;
                    x /= q as usize;
                    d
                })
                .collect();
            for (i, c) in coords.iter().enumerate() {
                let v = digits
                    .iter()
                    .zip(c)
                    .fold(0, |acc, (&u, &w)| field.add(acc, field.mul(u, w)));
                data[row * n + i] = v;
            }
        }
    }
    let gen = MatrixFq::new(field, block, n, data)?;
    let d = balanced_distance_bound(q, block as u64, eps);
    LinearCode::new(gen, Some(d), Some(eps * 2))
}

/// All Kronecker products `b_i (x) b_j`, `i` major.
pub fn tensor_square_basis(basis: &[VectorFq], limits: &Limits) -> Result<Vec<VectorFq>> {
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let len = first.len();
    if basis.iter().any(|b| b.len() != len) {
        return Err(Error::DimensionMismatch {
            op: "tensor_square_basis",
            detail: "basis vectors of different lengths".into(),
        });
    }
    limits.check_len("tensor length", len as u128 * len as u128)?;
    let mut out = Vec::with_capacity(basis.len() * basis.len());
    for a in basis {
        for b in basis {
            out.push(a.kron(b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn cap() -> u128 {
        Limits::default().enumeration_cap
    }

    #[test]
    fn hadamard_weights() {
        let l = Limits::default();
        for (p, m, n_len, w) in [(2, 2, 4, 2usize), (3, 1, 3, 2), (2, 3, 8, 4), (3, 2, 9, 6)] {
            let c = hadamard(&f(p), m, &l).unwrap();
            assert_eq!(c.block_len(), n_len);
            let prof = c.weight_profile(cap()).unwrap();
            assert_eq!(prof.len() as u64, p.pow(m as u32) - 1);
            assert!(prof.iter().all(|&x| x == w));
            assert_eq!(c.d_claimed(), Some(w as u64));
            assert_eq!(c.min_distance_exhaustive(cap()).unwrap(), w as u64);
        }
    }

    #[test]
    fn hadamard_size_cap() {
        let l = Limits {
            max_len: 16,
            ..Limits::default()
        };
        assert!(matches!(hadamard(&f(2), 5, &l), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn reed_solomon_examples() {
        let rs = reed_solomon(&f(2), 2, 2).unwrap();
        let msg = VectorFq::new(&f(2), vec![1, 1]).unwrap();
        let cw = rs.encode(&msg).unwrap();
        // 1 + X evaluated at 0, 1, x, x+1
        let ext = rs.ext();
        let expect: Vec<u32> = (0..4).map(|a| ext.add(1, a)).collect();
        assert_eq!(cw.as_slice(), expect.as_slice());
        assert_eq!(cw.weight(), 3);
        let zero = rs.encode(&VectorFq::zeros(&f(2), 2)).unwrap();
        assert!(zero.is_zero());
        assert!(rs.min_distance_exhaustive(cap()).unwrap() >= 3);
        assert!(matches!(
            reed_solomon(&f(2), 5, 2),
            Err(Error::DegreeTooLarge { n: 5, points: 4 })
        ));
    }

    #[test]
    fn extension_degree_choice() {
        assert_eq!(balanced_extension_degree(2, 2, Rational::new(1, 2)), 2);
        assert_eq!(balanced_extension_degree(2, 4, Rational::new(1, 5)), 5);
        assert_eq!(balanced_extension_degree(3, 4, Rational::new(1, 4)), 3);
    }

    #[test]
    fn balanced_small() {
        let l = Limits::default();
        let c = balanced_code(&f(2), 2, Rational::new(1, 2), &l).unwrap();
        assert_eq!(c.block_len(), 16);
        assert_eq!(c.eps(), Some(Rational::from_integer(1)));
        assert_eq!(c.d_claimed(), Some(4));
        let prof = c.weight_profile(cap()).unwrap();
        assert_eq!(prof.len(), 3);
        assert!(prof.iter().all(|&w| (4..=8).contains(&w)));
        assert!(c.min_distance_exhaustive(cap()).unwrap() >= 4);
    }

    #[test]
    fn balanced_matches_concatenation_by_hand() {
        // Encode each message through RS, then Hadamard on the coordinates.
        let l = Limits::default();
        let base = f(3);
        let eps = Rational::new(1, 2);
        let c = balanced_code(&base, 2, eps, &l).unwrap();
        let rs = reed_solomon(&base, 2, 2).unwrap();
        let had = hadamard(&base, 2, &l).unwrap();
        for idx in 0..9u32 {
            let msg = VectorFq::new(&base, vec![idx % 3, idx / 3]).unwrap();
            let outer = rs.encode(&msg).unwrap();
            let mut expect = Vec::new();
            for &s in outer.as_slice() {
                let coords = rs.ext().to_coords(&base, s).unwrap();
                let inner = had.encode(&VectorFq::new(&base, coords).unwrap()).unwrap();
                expect.extend_from_slice(inner.as_slice());
            }
            assert_eq!(c.encode(&msg).unwrap().as_slice(), expect.as_slice());
        }
    }

    #[test]
    fn balanced_rejects_bad_parameters() {
        let l = Limits::default();
        assert!(balanced_code(&f(2), 2, Rational::new(0, 1), &l).is_err());
        assert!(balanced_code(&f(2), 2, Rational::new(3, 4), &l).is_err());
        let f4 = make_field(2, 2).unwrap();
        assert!(balanced_code(&f4, 2, Rational::new(1, 2), &l).is_err());
        let small = Limits {
            max_len: 100,
            ..Limits::default()
        };
        assert!(matches!(
            balanced_code(&f(2), 4, Rational::new(1, 5), &small),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn enumeration_cap() {
        let c = hadamard(&f(2), 3, &Limits::default()).unwrap();
        assert!(matches!(
            c.min_distance_exhaustive(4),
            Err(Error::EnumerationCapExceeded { .. })
        ));
        let r = c.clone().refine_distance(4);
        assert_eq!(r.d_claimed(), Some(4));
    }

    #[test]
    fn tensor_square_single_generator() {
        let l = Limits::default();
        let v = VectorFq::new(&f(2), vec![1, 1, 0]).unwrap();
        let t = tensor_square_basis(&[v], &l).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].weight(), 4);
        assert!(tensor_square_basis(&[], &l).unwrap().is_empty());
    }

    #[test]
    fn tensor_square_code_generator_columns() {
        let l = Limits::default();
        let c = hadamard(&f(3), 1, &l).unwrap();
        let t = c.tensor_square(&l).unwrap();
        assert_eq!(t.block_len(), 9);
        assert_eq!(t.dim(), 1);
        assert_eq!(t.d_claimed(), Some(4));
        assert_eq!(t.min_distance_exhaustive(cap()).unwrap(), 4);
    }

    #[test]
    fn rank_deficient_generator_rejected() {
        let g = MatrixFq::from_rows(&f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(LinearCode::new(g, None, None).is_err());
    }
}
