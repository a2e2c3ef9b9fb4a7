//! Exhaustive enumeration of `offset + span(basis)`.
//!
//! Combinations are visited in q-ary modular Gray-code order: consecutive
//! coefficient vectors differ in one coordinate, so each step costs one sparse
//! `axpy` against a single basis vector. The position range `0..q^D` is cut
//! into contiguous chunks that are processed in parallel; reductions use
//! `(weight, coefficient index)` so the result does not depend on the
//! schedule.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::weight;

/// Enumeration limits shared by every exhaustive routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of combinations any single enumeration may visit.
    pub enumeration_cap: u128,
    /// Maximum length of any constructed vector (block length, `L`, ...).
    pub max_len: usize,
}

pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;
pub const DEFAULT_MAX_LEN: usize = 1 << 22;

impl Default for Limits {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl Limits {
    /// Defaults, with the enumeration cap taken from `GAPFORGE_CAP` when set.
    pub fn from_env() -> Self {
        let mut l = Self::default();
        if let Some(cap) = std::env::var("GAPFORGE_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
        {
            l.enumeration_cap = cap;
        }
        l
    }

    pub fn with_cap(cap: u128) -> Self {
        Self {
            enumeration_cap: cap,
            ..Self::default()
        }
    }

    pub fn check_len(&self, what: &'static str, len: u128) -> Result<usize> {
        if len > self.max_len as u128 {
            return Err(Error::SizeCap {
                what,
                size: len,
                cap: self.max_len as u128,
            });
        }
        Ok(len as usize)
    }
}

/// `q^dim`, saturating.
pub fn combination_count(q: u32, dim: usize) -> u128 {
    (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

pub fn check_cap(q: u32, dim: usize, cap: u128) -> Result<u128> {
    let count = combination_count(q, dim);
    if count > cap {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    Ok(count)
}

/// A basis plus its sparse supports, ready for walking.
pub struct Span<'a> {
    field: &'a FieldSpec,
    len: usize,
    offset: Option<&'a [u32]>,
    basis: Vec<&'a [u32]>,
    supports: Vec<Vec<usize>>,
}

/// The best combination found: smallest weight, ties broken by smallest
/// coefficient index `sum c_j q^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Best {
    pub weight: usize,
    pub index: u128,
    pub coeffs: Vec<u32>,
}

impl Best {
    fn better(self, other: Best) -> Best {
        if (other.weight, other.index) < (self.weight, self.index) {
            other
        } else {
            self
        }
    }
}

fn coeff_index(coeffs: &[u32], q: u32) -> u128 {
    coeffs
        .iter()
        .rev()
        .fold(0u128, |acc, &c| acc * q as u128 + c as u128)
}

/// Coefficient vector at Gray position `pos`: `g_j = n_j - n_{j+1} (mod q)`
/// on the base-q digits of `pos`, mapped to field elements `0..q` by index.
fn gray_digits(pos: u128, q: u32, dim: usize) -> Vec<u32> {
    let q128 = q as u128;
    let mut digits = Vec::with_capacity(dim + 1);
    let mut p = pos;
    for _ in 0..dim {
        digits.push((p % q128) as u32);
        p /= q128;
    }
    digits.push(0);
    (0..dim)
        .map(|j| (digits[j] + q - digits[j + 1]) % q)
        .collect()
}

impl<'a> Span<'a> {
    pub fn new(
        field: &'a FieldSpec,
        len: usize,
        basis: Vec<&'a [u32]>,
        offset: Option<&'a [u32]>,
    ) -> Self {
        debug_assert!(basis.iter().all(|b| b.len() == len));
        debug_assert!(offset.is_none_or(|o| o.len() == len));
        let supports = basis
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self {
            field,
            len,
            offset,
            basis,
            supports,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn count(&self) -> u128 {
        combination_count(self.field.q(), self.dim())
    }

    /// `offset + sum coeffs[j] * basis[j]`.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = match self.offset {
            Some(o) => o.to_vec(),
            None => vec![0; self.len],
        };
        for (j, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &t in &self.supports[j] {
                v[t] = f.add(v[t], f.mul(c, self.basis[j][t]));
            }
        }
        v
    }

    /// Visits Gray positions `range` in order, calling
    /// `visit(coeffs, vector, weight)`.
    pub fn walk<F>(&self, range: Range<u128>, mut visit: F)
    where
        F: FnMut(&[u32], &[u32], usize),
    {
        if range.start >= range.end {
            return;
        }
        let f = self.field;
        let q = f.q();
        let dim = self.dim();
        let mut coeffs = gray_digits(range.start, q, dim);
        let mut cur = self.combine(&coeffs);
        let mut w = weight(&cur);
        let mut pos = range.start;
        loop {
            visit(&coeffs, &cur, w);
            pos += 1;
            if pos >= range.end {
                break;
            }
            // The digit that increments when counting from pos-1 to pos.
            let mut k = 0;
            let mut p = pos;
            while p.is_multiple_of(q as u128) {
                p /= q as u128;
                k += 1;
            }
            let old = coeffs[k];
            let new = (old + 1) % q;
            coeffs[k] = new;
            let delta = f.sub(new, old);
            let b = self.basis[k];
            for &t in &self.supports[k] {
                let before = cur[t];
                let after = f.add(before, f.mul(delta, b[t]));
                cur[t] = after;
                w = w + (after != 0) as usize - (before != 0) as usize;
            }
        }
    }

    fn chunks(&self) -> Vec<Range<u128>> {
        let total = self.count();
        let threads = rayon::current_num_threads().max(1) as u128;
        let per = (total / (threads * 4)).max(1 << 12);
        let mut out = Vec::new();
        let mut s = 0;
        while s < total {
            let e = (s + per).min(total);
            out.push(s..e);
            s = e;
        }
        out
    }

    /// Minimum weight over the enumerated set. With `skip_zero`, the all-zero
    /// coefficient vector is excluded. Returns `None` when the set is empty.
    pub fn min_weight(&self, skip_zero: bool) -> Option<Best> {
        let q = self.field.q();
        self.chunks()
            .into_par_iter()
            .filter_map(|r| {
                let mut best: Option<Best> = None;
                self.walk(r, |coeffs, _, w| {
                    if skip_zero && coeffs.iter().all(|&c| c == 0) {
                        return;
                    }
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            w < b.weight || (w == b.weight && coeff_index(coeffs, q) < b.index)
                        }
                    };
                    if better {
                        best = Some(Best {
                            weight: w,
                            index: coeff_index(coeffs, q),
                            coeffs: coeffs.to_vec(),
                        });
                    }
                });
                best
            })
            .reduce_with(Best::better)
    }

    /// Weights of every enumerated vector, sorted ascending.
    pub fn weights(&self, skip_zero: bool) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .chunks()
            .into_par_iter()
            .flat_map_iter(|r| {
                let mut ws = Vec::new();
                self.walk(r, |coeffs, _, w| {
                    if !(skip_zero && coeffs.iter().all(|&c| c == 0)) {
                        ws.push(w);
                    }
                });
                ws
            })
            .collect();
        all.sort_unstable();
        all
    }
}
