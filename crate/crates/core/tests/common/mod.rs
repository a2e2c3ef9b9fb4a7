//! Brute-force reference computations shared by the integration tests.
//! They deliberately avoid the library's enumeration engine and use only
//! field arithmetic and plain loops.

#![allow(dead_code)]

use gapforge::frontend::{Circuit, QuadraticSystem};
use gapforge::{FieldSpec, LinearCode, MatrixFq};

pub const NOT_CIRCUIT: &str = "g1 = INPUT\ng2 = NOT g1\nOUTPUT g2\n";
pub const AND_NOT_CIRCUIT: &str = "g1 = INPUT\ng2 = NOT g1\ng3 = AND g1 g2\nOUTPUT g3\n";

/// All vectors of `F_q^n` in mixed-radix order, first coordinate fastest.
pub fn all_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % q as u64) as u32;
                idx /= q as u64;
                d
            })
            .collect()
    })
}

pub fn mat_vec(f: &FieldSpec, g: &MatrixFq, x: &[u32]) -> Vec<u32> {
    (0..g.rows())
        .map(|i| (0..g.cols()).fold(0, |acc, j| f.add(acc, f.mul(g.get(i, j), x[j]))))
        .collect()
}

pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Every codeword of `code`, zero included.
pub fn codewords(code: &LinearCode) -> Vec<Vec<u32>> {
    let f = code.field();
    all_vectors(f.q(), code.dim())
        .map(|m| mat_vec(f, code.generator(), &m))
        .collect()
}

pub fn naive_min_distance(code: &LinearCode) -> usize {
    codewords(code)
        .iter()
        .map(|c| weight(c))
        .filter(|&w| w > 0)
        .min()
        .unwrap()
}

/// Minimum weight over nonzero vectors of the span of `basis`.
pub fn naive_span_min(f: &FieldSpec, basis: &[Vec<u32>]) -> Option<usize> {
    let len = basis.first()?.len();
    all_vectors(f.q(), basis.len())
        .filter_map(|c| {
            let mut v = vec![0u32; len];
            for (coef, b) in c.iter().zip(basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = f.add(*vi, f.mul(*coef, *bi));
                }
            }
            let w = weight(&v);
            (w > 0).then_some(w)
        })
        .min()
}

/// `Q(x x^T) = sum_ij Q[i,j] x_i x_j` for every equation.
pub fn naive_is_solution(sys: &QuadraticSystem, x: &[u32]) -> bool {
    let f = sys.field();
    let n = sys.n_vars();
    sys.qs().iter().all(|q| {
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc = f.add(acc, f.mul(q.get(i, j), f.mul(x[i], x[j])));
            }
        }
        acc == 0
    })
}

/// Satisfiability by evaluating the circuit gate by gate on every input.
pub fn naive_satisfiable(c: &Circuit) -> bool {
    use gapforge::frontend::Gate;
    let n_in = c.inputs().len();
    (0..1u32 << n_in).any(|bits| {
        let mut next_input = 0;
        let mut vals: Vec<bool> = Vec::with_capacity(c.len());
        for g in c.gates() {
            let v = match *g {
                Gate::Input => {
                    let b = bits >> next_input & 1 == 1;
                    next_input += 1;
                    b
                }
                Gate::Not(a) => !vals[a],
                Gate::And(a, b) => vals[a] && vals[b],
                Gate::Or(a, b) => vals[a] || vals[b],
            };
            vals.push(v);
        }
        vals[c.output()]
    })
}

/// Rank by plain Gaussian elimination on row vectors.
pub fn naive_rank(f: &FieldSpec, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(m[rank][c]).unwrap();
        let pivot: Vec<u32> = m[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(k, pv));
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}
