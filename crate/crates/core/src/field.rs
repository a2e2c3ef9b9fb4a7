//! Exact arithmetic in prime fields F_p and extensions F_{p^m}.
//!
//! Elements are represented by their index in `0..q`: the coefficient vector
//! `(c_0, .., c_{m-1})` of the polynomial `c_0 + c_1 x + .. + c_{m-1} x^{m-1}`
//! is stored as `c_0 + c_1 p + .. + c_{m-1} p^{m-1}`. Multiplication goes
//! through exp/log tables built from a primitive element found at
//! construction time.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

struct FieldData {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i in 0..2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` unused.
    log: Vec<u32>,
}

/// A finite field F_{p^m} with an explicit monic irreducible modulus.
///
/// Cheap to clone; two specs are equal iff they have the same characteristic
/// and modulus.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.m > 1 {
            write!(f, "[modulus {:?}]", self.0.modulus)?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds F_{p^m} with the smallest monic irreducible modulus of degree `m`.
///
/// Candidates `x^m + c_{m-1} x^{m-1} + .. + c_0` are tried in increasing order
/// of the integer `c_0 + c_1 p + .. + c_{m-1} p^{m-1}`, i.e. lexicographically
/// on the coefficient list read from the top degree down.
pub fn make_field(p: u64, m: u32) -> Result<FieldSpec> {
    check_size(p, m)?;
    let p32 = p as u32;
    let count = (p as usize).pow(m);
    for low in 0..count {
        let mut modulus = index_to_digits(low as u32, p32, m as usize);
        modulus.push(1);
        if is_irreducible(&modulus, p32) {
            return FieldSpec::build(p32, modulus);
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn check_size(p: u64, m: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m < 1 {
        return Err(Error::DegreeZero);
    }
    let q = (p as u128).checked_pow(m);
    match q {
        Some(q) if q <= MAX_FIELD_SIZE as u128 => Ok(()),
        _ => Err(Error::FieldTooLarge { p, m }),
    }
}

impl FieldSpec {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        make_field(p, 1)
    }

    /// Builds a field from an explicit modulus (coefficients low to high).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::DegreeZero);
        }
        let m = (modulus.len() - 1) as u32;
        check_size(p, m)?;
        let p32 = p as u32;
        if modulus.iter().any(|&c| c >= p32) {
            return Err(Error::InvalidModulus(format!(
                "coefficient out of range for p={p}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(modulus, p32) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over F_{p}"
            )));
        }
        Self::build(p32, modulus.to_vec())
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let m = (modulus.len() - 1) as u32;
        let q = p.pow(m);
        let mut data = FieldData {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let order = (q - 1) as usize;
        let generator = (1..q)
            .find(|&g| multiplicative_order(&data, g) == order)
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = acc;
            log[acc as usize] = i as u32;
            acc = slow_mul(&data, acc, generator);
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }
        data.exp = exp;
        data.log = log;
        Ok(FieldSpec(Arc::new(data)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Extension degree over the prime field.
    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.0.q
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::InvalidElement {
                index: a as u64,
                q: self.0.q,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.m == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let d = &self.0;
        d.exp[(d.log[a as usize] + d.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = &self.0;
        let order = d.q - 1;
        Ok(d.exp[((order - d.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let d = &self.0;
        let order = (d.q - 1) as u64;
        d.exp[((d.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Element of the prime subfield with integer value `v mod p`.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        self.check(index)?;
        Ok(FieldElem {
            field: self.clone(),
            index,
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    /// Coordinates of `a` in the polynomial basis `1, x, .., x^{m-1}` over the
    /// prime subfield `base`.
    pub fn to_coords(&self, base: &FieldSpec, a: u32) -> Result<Vec<u32>> {
        self.check_base(base)?;
        self.check(a)?;
        Ok(index_to_digits(a, self.0.p, self.0.m as usize))
    }

    /// Inverse of [`FieldSpec::to_coords`].
    pub fn from_coords(&self, base: &FieldSpec, coords: &[u32]) -> Result<u32> {
        self.check_base(base)?;
        if coords.len() != self.0.m as usize {
            return Err(Error::DimensionMismatch {
                op: "from_coords",
                detail: format!("expected {} coordinates, got {}", self.0.m, coords.len()),
            });
        }
        let mut out = 0u32;
        for &c in coords.iter().rev() {
            base.check(c)?;
            out = out * self.0.p + c;
        }
        Ok(out)
    }

    fn check_base(&self, base: &FieldSpec) -> Result<()> {
        if !base.is_prime_field() || base.p() != self.p() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `FIELD p=<p> m=<m> modulus=<c0,..,cm>`
    pub fn header(&self) -> String {
        let coeffs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!(
            "FIELD p={} m={} modulus={}",
            self.0.p,
            self.0.m,
            coeffs.join(",")
        )
    }
}

/// A field element tagged with its field. Arithmetic is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: FieldSpec,
    index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

impl FieldElem {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn wrap(&self, index: u32) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            index,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.index, other.index)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.index, other.index)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.index, other.index)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.index, other.index)?))
    }

    pub fn neg(&self) -> FieldElem {
        self.wrap(self.field.neg(self.index))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.wrap(self.field.inv(self.index)?))
    }

    /// Coordinates over the prime subfield, as elements of `base`.
    pub fn to_coords(&self, base: &FieldSpec) -> Result<Vec<FieldElem>> {
        let coords = self.field.to_coords(base, self.index)?;
        Ok(coords
            .into_iter()
            .map(|index| FieldElem {
                field: base.clone(),
                index,
            })
            .collect())
    }

    pub fn from_coords(field: &FieldSpec, coords: &[FieldElem]) -> Result<FieldElem> {
        let base = match coords.first() {
            Some(c) => c.field.clone(),
            None => {
                return Err(Error::DimensionMismatch {
                    op: "from_coords",
                    detail: "empty coordinate vector".into(),
                })
            }
        };
        if coords.iter().any(|c| c.field != base) {
            return Err(Error::FieldMismatch);
        }
        let raw: Vec<u32> = coords.iter().map(|c| c.index).collect();
        field.elem(field.from_coords(&base, &raw)?)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

/// Binary or unary field operation; `b` is ignored for `Neg` and `Inv`.
pub fn field_arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Inv => a.inv(),
    }
}

// ---- polynomial helpers over F_p, coefficient lists low to high ----

fn index_to_digits(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(a % p);
        a /= p;
    }
    out
}

fn digits_to_index(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // Fermat
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo a nonzero `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = (r[dr] as u64 * lead_inv) % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            let sub = (factor * bc as u64) % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    for deg in 1..=m / 2 {
        let count = (p as usize).pow(deg as u32);
        for low in 0..count {
            let mut divisor = index_to_digits(low as u32, p, deg);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn slow_mul(d: &FieldData, a: u32, b: u32) -> u32 {
    let m = d.m as usize;
    let p = d.p;
    let ad = index_to_digits(a, p, m);
    let bd = index_to_digits(b, p, m);
    let mut prod = vec![0u32; 2 * m - 1];
    for (i, &x) in ad.iter().enumerate() {
        for (j, &y) in bd.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, &d.modulus, p);
    r.resize(m, 0);
    digits_to_index(&r, p)
}

fn multiplicative_order(d: &FieldData, g: u32) -> usize {
    let mut acc = g;
    let mut k = 1usize;
    while acc != 1 {
        acc = slow_mul(d, acc, g);
        k += 1;
        if k > d.q as usize {
            return 0;
        }
    }
    k
}
