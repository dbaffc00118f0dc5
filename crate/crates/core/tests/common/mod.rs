//! Independent oracles for the cohomology of `Ω^p(k)` on `P^n`.
//!
//! `Ω^p(k)` is resolved by the truncated Koszul complex
//! `∧^{p-j} V ⊗ O(k-p+j)`, `j = 0..p`. Only `H^0` and `H^n` of line bundles
//! survive, so the hypercohomology spectral sequence has two rows and
//! degenerates at `E_2`. Both rows are computed explicitly (polynomials for
//! `H^0`, inverse Laurent monomials for `H^n`) and ranks are taken mod a
//! prime.

#![allow(dead_code)]

use std::collections::HashMap;

const P: u64 = 1_000_000_007;

/// Non-negative exponent vectors in `vars` variables summing to `total`.
fn compositions(vars: usize, total: i64) -> Vec<Vec<i64>> {
    if vars == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(vars - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn subsets(size: usize, of: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, size: usize, of: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..of {
            cur.push(i);
            go(i + 1, size, of, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, size, of, &mut Vec::new(), &mut out);
    out
}

/// Monomial basis of `H^0(O(t))` (row 0) or `H^n(O(t))` (row n).
fn line_bundle_basis(n: usize, t: i64, top: bool) -> Vec<Vec<i64>> {
    let vars = n + 1;
    if top {
        // exponents <= -1 summing to t: negate and shift to >= 0
        compositions(vars, -t - vars as i64)
            .into_iter()
            .map(|v| v.into_iter().map(|e| -e - 1).collect())
            .collect()
    } else {
        compositions(vars, t)
    }
}

type Basis = Vec<(Vec<usize>, Vec<i64>)>;

fn term_basis(n: usize, wedge: usize, t: i64, top: bool) -> Basis {
    let mut out = Vec::new();
    for s in subsets(wedge, n + 1) {
        for mono in line_bundle_basis(n, t, top) {
            out.push((s.clone(), mono));
        }
    }
    out
}

/// Matrix of `e_I ⊗ x^a ↦ Σ_s (-1)^s e_{I \ i_s} ⊗ x_{i_s} x^a`.
fn koszul_matrix(src: &Basis, dst: &Basis, top: bool) -> Vec<Vec<u64>> {
    let index: HashMap<&(Vec<usize>, Vec<i64>), usize> =
        dst.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut mat = vec![vec![0u64; src.len()]; dst.len()];
    for (col, (set, mono)) in src.iter().enumerate() {
        for (s, &i) in set.iter().enumerate() {
            let mut m = mono.clone();
            m[i] += 1;
            if top && m[i] == 0 {
                continue;
            }
            let mut rest = set.clone();
            rest.remove(s);
            let row = index[&(rest, m)];
            let sign = if s % 2 == 0 { 1 } else { P - 1 };
            mat[row][col] = (mat[row][col] + sign) % P;
        }
    }
    mat
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn rank(mut mat: Vec<Vec<u64>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pivot);
        let inv = pow_mod(mat[r][c], P - 2);
        for j in c..cols {
            mat[r][j] = mat[r][j] * inv % P;
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let f = mat[i][c];
                for j in c..cols {
                    mat[i][j] = (mat[i][j] + P - f * mat[r][j] % P) % P;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Cohomology at position `j` of one row of the Koszul double complex.
fn row_cohomology(n: usize, p: usize, k: i64, j: usize, top: bool) -> usize {
    let term = |j: usize| term_basis(n, p - j, k - p as i64 + j as i64, top);
    let here = term(j);
    let out_rank = if j < p {
        rank(koszul_matrix(&here, &term(j + 1), top))
    } else {
        0
    };
    let in_rank = if j > 0 {
        rank(koszul_matrix(&term(j - 1), &here, top))
    } else {
        0
    };
    here.len() - out_rank - in_rank
}

/// `dim H^q(P^n, Ω^p(k))` from the Koszul resolution.
pub fn koszul_dimension(n: usize, p: usize, k: i64, q: usize) -> usize {
    assert!(p <= n && q <= n);
    let mut h = if q <= p { row_cohomology(n, p, k, q, false) } else { 0 };
    if q == n {
        h += row_cohomology(n, p, k, 0, true);
    }
    h
}

fn binom_i128(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc = 1i128;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `χ(O(t)) = (t+1)(t+2)...(t+n) / n!` as a polynomial in `t`.
pub fn chi_line_bundle(n: i128, t: i128) -> i128 {
    let mut num = 1i128;
    for j in 1..=n {
        num *= t + j;
    }
    let mut den = 1i128;
    for j in 1..=n {
        den *= j;
    }
    num / den
}

/// `χ(Ω^p(k)) = Σ_j (-1)^j C(n+1, p-j) χ(O(k-p+j))`.
pub fn chi_omega(n: i128, p: i128, k: i128) -> i128 {
    (0..=p)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binom_i128(n + 1, p - j) * chi_line_bundle(n, k - p + j)
        })
        .sum()
}
