//! The bounded polytope of exponent vectors that are modular for a fixed
//! `(p, a_0)`, its Smith-normal-form parameterization, and complete lattice
//! point enumeration.
//!
//! Enumeration works in cusp-order coordinates: writing `S = a_0 + 2 sum a_i
//! = 24 b` and `t_m` for the order of `f_a` at the cusp `alpha^{m-1}/p`, the
//! tuple `(b, t_1, ..., t_{(p-3)/2})` determines `a` by inverting a square
//! integer matrix `M`, and the polytope becomes the exact simplex
//! `b >= 0`, `t_m >= 0`, `sum_m t_m <= Theta(b)` (the remaining cusp's
//! order is `Theta - sum t_m`).  Integrality of `a = M^{-1} c(b,t)` is the
//! Smith-normal-form divisibility condition, which collapses to a stepped
//! congruence on the innermost loop.

use crate::error::QkError;
use crate::klein::{is_modular, is_prime, ExponentVector};
use crate::orbit;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Inequality and congruence rows describing the modularity system over
/// the tail variables `(a_1, ..., a_{(p-1)/2})` for fixed `(p, a_0)`.
#[derive(Clone, Debug)]
pub struct LinearCongruenceSystem {
    pub p: u64,
    pub a0: i64,
    /// Rows `(coeffs, rhs)` meaning `coeffs . x >= rhs`.
    pub ineq: Vec<(Vec<i64>, i64)>,
    /// Rows `(coeffs, rhs, modulus)` meaning `coeffs . x == rhs (mod modulus)`.
    pub cong: Vec<(Vec<i64>, i64, i64)>,
}

impl LinearCongruenceSystem {
    /// Exact membership test for a tail vector.
    pub fn contains(&self, tail: &[i64]) -> bool {
        let dot = |c: &[i64]| -> i64 { c.iter().zip(tail).map(|(a, b)| a * b).sum() };
        self.ineq.iter().all(|(c, rhs)| dot(c) >= *rhs)
            && self.cong.iter().all(|(c, rhs, m)| (dot(c) - rhs).rem_euclid(*m) == 0)
    }
}

/// `x (p - x)` for `x = i * mult mod p`.
fn twisted_weight(p: u64, i: u64, mult: u64) -> i64 {
    let x = (i * mult) % p;
    debug_assert!(x != 0);
    (x * (p - x)) as i64
}

/// Build the inequality/congruence system whose integer solutions are
/// exactly the modular tails for `(p, a0)`.  Inequality rows are the cusp
/// orders scaled by `24p` (plus the eta-exponent row); congruences are the
/// mod-24 eta condition and the mod-p index condition.
pub fn build_system(p: u64, a0: i64) -> Result<LinearCongruenceSystem> {
    if !is_prime(p) || p < 5 {
        return Err(QkError::UnsupportedPrime(p));
    }
    if a0 < 2 || a0 % 2 != 0 {
        return Err(QkError::InvalidArgument(format!(
            "a0 must be a positive even integer, got {a0}"
        )));
    }
    let half = (p - 1) / 2;
    let data = orbit::sigma(p)?;
    let mut ineq = Vec::new();
    // Eta exponent row: a0 + 2 sum a_i >= 0.
    ineq.push((vec![2i64; half as usize], -a0));
    // Cusp rows, scaled by 24p: p^2 a0 + sum (2p^2 - 12 x(p-x)) a_i >= 0.
    let p2 = (p * p) as i64;
    let mut mult: u64 = 1;
    for _ in 0..half {
        let coeffs: Vec<i64> =
            (1..=half).map(|i| 2 * p2 - 12 * twisted_weight(p, i, mult)).collect();
        ineq.push((coeffs, -p2 * a0));
        mult = mult * data.alpha % p;
    }
    let cong = vec![
        (vec![2i64; half as usize], -a0, 24),
        ((1..=half).map(|i| (i * i) as i64).collect(), 0, p as i64),
    ];
    Ok(LinearCongruenceSystem { p, a0, ineq, cong })
}

/// Smith normal form `D = L * A * R` with unimodular `L`, `R` and a
/// divisibility-chained nonnegative diagonal.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub d: Vec<Vec<BigInt>>,
    pub l: Vec<Vec<BigInt>>,
    pub r: Vec<Vec<BigInt>>,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d[0].len())).map(|i| self.d[i][i].clone()).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Integer row/column reduction with minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &[Vec<i64>]) -> SnfDecomposition {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<BigInt>> =
        a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut l = identity(n);
    let mut r = identity(m);
    let mut t = 0;
    while t < n.min(m) {
        // Minimal-absolute-value nonzero pivot in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if !d[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        l.swap(t, pi);
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in r.iter_mut() {
                row.swap(t, pj);
            }
        }
        // Clear row and column t; pivot choice keeps entries small.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in (t + 1)..n {
                if !d[i][t].is_zero() {
                    let q = rounded_div(&d[i][t], &d[t][t]);
                    if !q.is_zero() {
                        for j in 0..m {
                            let s = &d[t][j] * &q;
                            d[i][j] -= s;
                        }
                        for j in 0..n {
                            let s = &l[t][j] * &q;
                            l[i][j] -= s;
                        }
                    }
                    if !d[i][t].is_zero() {
                        d.swap(t, i);
                        l.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..m {
                if !d[t][j].is_zero() {
                    let q = rounded_div(&d[t][j], &d[t][t]);
                    if !q.is_zero() {
                        for row in d.iter_mut() {
                            let s = &row[t] * &q;
                            row[j] -= s;
                        }
                        for row in r.iter_mut() {
                            let s = &row[t] * &q;
                            row[j] -= s;
                        }
                    }
                    if !d[t][j].is_zero() {
                        for row in d.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in r.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
        }
        // Divisibility chain: fold in any non-divisible trailing entry.
        let mut fixed = false;
        'scan: for i in (t + 1)..n {
            for j in (t + 1)..m {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    for jj in 0..m {
                        let s = d[i][jj].clone();
                        d[t][jj] += s;
                    }
                    for jj in 0..n {
                        let s = l[i][jj].clone();
                        l[t][jj] += s;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        if d[t][t].is_negative() {
            for j in 0..m {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..n {
                l[t][j] = -l[t][j].clone();
            }
        }
        t += 1;
    }
    SnfDecomposition { d, l, r }
}

/// Division rounded to nearest, keeping remainders in `[-|b|/2, |b|/2]`.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if a.is_negative() != b.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Adjugate of a square integer matrix: `adj(M) * M = det(M) * I`.
fn adjugate(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = m.len();
    let det = bareiss_det(m);
    assert!(!det.is_zero());
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // Cofactor C_{ji}: delete row j and column i.
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let mut c = bareiss_det(&minor);
            if (i + j) % 2 == 1 {
                c = -c;
            }
            adj[i][j] = c;
        }
    }
    (adj, det)
}

/// The square coordinate matrix `M`: an all-ones row followed by the rows
/// `lambda_{m,i} = p^2 - 6 x(p-x)`, `x = i alpha^{m-1} mod p`, for
/// `m = 1..(p-3)/2`.
fn coordinate_matrix(p: u64) -> Result<Vec<Vec<i64>>> {
    let data = orbit::sigma(p)?;
    let half = ((p - 1) / 2) as usize;
    let p2 = (p * p) as i64;
    let mut rows = vec![vec![1i64; half]];
    let mut mult: u64 = 1;
    for _ in 1..half {
        rows.push((1..=half as u64).map(|i| p2 - 6 * twisted_weight(p, i, mult)).collect());
        mult = mult * data.alpha % p;
    }
    Ok(rows)
}

/// `Theta(b)`: the total of all cusp orders, `(p-1)((p+1) a0 - 24 b)/48`.
fn theta(p: u64, a0: i64, b: i64) -> i64 {
    let num = (p as i64 - 1) * ((p as i64 + 1) * a0 - 24 * b);
    debug_assert_eq!(num % 48, 0);
    num / 48
}

struct SnfEnumerator {
    p: u64,
    a0: i64,
    /// Conditions `(modulus, base, b coeff, t coeffs)`, all reduced mod modulus.
    conds: Vec<(i128, i128, i128, Vec<i128>)>,
    adj: Vec<Vec<i128>>,
    det: i128,
    tvars: usize,
}

impl SnfEnumerator {
    fn new(p: u64, a0: i64) -> Result<Self> {
        let m = coordinate_matrix(p)?;
        let mbig: Vec<Vec<BigInt>> =
            m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let (adjb, detb) = adjugate(&mbig);
        let snf = smith_normal_form(&m);
        let half = m.len();
        let tvars = half - 1;
        let p2 = (p * p) as i128;
        let to_i128 = |x: &BigInt| -> Result<i128> {
            x.to_i128().ok_or_else(|| QkError::Internal("SNF entry exceeds i128".into()))
        };
        let det = to_i128(&detb)?;
        let mut adj = vec![vec![0i128; half]; half];
        for i in 0..half {
            for j in 0..half {
                adj[i][j] = to_i128(&adjb[i][j])?;
            }
        }
        // c(b, t) = (12 b - a0/2, 12 p t_1 - p^2 a0/2, ...).
        // Condition i: (L c)_i == 0 (mod d_i) for each d_i > 1.
        let mut conds = Vec::new();
        for i in 0..half {
            let di = to_i128(&snf.d[i][i])?;
            if di.abs() <= 1 {
                continue;
            }
            let l_row: Vec<i128> = (0..half).map(|j| to_i128(&snf.l[i][j])).collect::<Result<_>>()?;
            let a0h = (a0 / 2) as i128;
            let base = -a0h * l_row[0] - p2 * a0h * l_row[1..].iter().sum::<i128>();
            let bcoef = 12 * l_row[0];
            let d = di.abs();
            conds.push((
                d,
                base.rem_euclid(d),
                bcoef.rem_euclid(d),
                (1..half).map(|j| (12 * p as i128 * l_row[j]).rem_euclid(d)).collect(),
            ));
        }
        Ok(SnfEnumerator { p, a0, conds, adj, det, tvars })
    }

    /// Reconstruct the full tail from `(b, t)`; `None` when non-integral.
    fn tail(&self, b: i64, t: &[i64]) -> Option<Vec<i64>> {
        let half = self.adj.len();
        let p2 = (self.p * self.p) as i128;
        let a0h = (self.a0 / 2) as i128;
        let mut c = vec![0i128; half];
        c[0] = 12 * b as i128 - a0h;
        for (m, &tm) in t.iter().enumerate() {
            c[m + 1] = 12 * self.p as i128 * tm as i128 - p2 * a0h;
        }
        let mut out = Vec::with_capacity(half);
        for row in &self.adj {
            let num: i128 = row.iter().zip(&c).map(|(a, b)| a * b).sum();
            if num % self.det != 0 {
                return None;
            }
            out.push(i64::try_from(num / self.det).ok()?);
        }
        Some(out)
    }

    fn run(&self) -> Vec<ExponentVector> {
        let mut out = Vec::new();
        let bmax = (self.p as i64 + 1) * self.a0 / 24;
        for b in 0..=bmax {
            let th = theta(self.p, self.a0, b);
            if th < 0 {
                continue;
            }
            let mut partials: Vec<i128> = self
                .conds
                .iter()
                .map(|(d, base, bc, _)| (base + bc * b as i128).rem_euclid(*d))
                .collect();
            let mut t = vec![0i64; self.tvars];
            self.dfs(b, 0, th, &mut partials, &mut t, &mut out);
        }
        out.sort_by(|a, b| a.tail().cmp(b.tail()));
        for w in out.windows(2) {
            assert!(w[0] != w[1], "duplicate lattice point");
        }
        out
    }

    fn dfs(
        &self,
        b: i64,
        level: usize,
        rem: i64,
        partials: &mut Vec<i128>,
        t: &mut Vec<i64>,
        out: &mut Vec<ExponentVector>,
    ) {
        if level + 1 == self.tvars {
            self.last_level(b, rem, partials, t, out);
            return;
        }
        let saved = partials.clone();
        for v in 0..=rem {
            if v > 0 {
                for (ci, (d, _, _, tc)) in self.conds.iter().enumerate() {
                    partials[ci] = (partials[ci] + tc[level]) % *d;
                }
            }
            t[level] = v;
            self.dfs(b, level + 1, rem - v, partials, t, out);
        }
        *partials = saved;
    }

    /// Solve the stacked congruences for the innermost variable and step
    /// through its residue class.
    fn last_level(
        &self,
        b: i64,
        rem: i64,
        partials: &[i128],
        t: &mut Vec<i64>,
        out: &mut Vec<ExponentVector>,
    ) {
        let last = self.tvars - 1;
        // Combine `g*t == -partial (mod d)` over all conditions.
        let mut t0: i128 = 0;
        let mut step: i128 = 1;
        for (ci, (d, _, _, tc)) in self.conds.iter().enumerate() {
            let g = tc[last];
            let rhs = (-partials[ci]).rem_euclid(*d);
            // Solve g*(t0 + step*u) == rhs (mod d) for u.
            let a = (g * step).rem_euclid(*d);
            let c = (rhs - g * t0).rem_euclid(*d);
            let gg = gcd_i128(a, *d);
            if c % gg != 0 {
                return;
            }
            let dd = d / gg;
            let u0 = if dd == 1 {
                0
            } else {
                (c / gg).rem_euclid(dd) * inv_mod_i128((a / gg).rem_euclid(dd), dd) % dd
            };
            t0 += step * u0;
            step *= dd;
            t0 %= step;
        }
        let mut v = t0;
        while v <= rem as i128 {
            t[last] = v as i64;
            if let Some(tail) = self.tail(b, t) {
                let mut full = Vec::with_capacity(tail.len() + 1);
                full.push(self.a0);
                full.extend_from_slice(&tail);
                let ev = ExponentVector::new(self.p, full).expect("shape");
                debug_assert!(is_modular(&ev).0, "enumerated point fails modularity: {ev}");
                out.push(ev);
            }
            v += step;
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod_i128(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m)
}

/// Complete, duplicate-free, lexicographically ordered list of exponent
/// vectors `(a0, a)` that are modular for `Gamma_1(p)`.
pub fn enumerate(p: u64, a0: i64) -> Result<Vec<ExponentVector>> {
    if a0 < 2 || a0 % 2 != 0 {
        return Err(QkError::InvalidArgument(format!(
            "a0 must be a positive even integer, got {a0}"
        )));
    }
    Ok(SnfEnumerator::new(p, a0)?.run())
}

/// Closed-form lattice point counts for `p = 5, 7`.
pub fn count_closed_form(p: u64, a0: i64) -> Result<i64> {
    match p {
        5 => Ok((a0 + 4) * (a0 + 4) / 16),
        7 => Ok(((a0 + 2).pow(3) + 3 * (a0 + 2).pow(2)) / 18),
        _ => Err(QkError::UnsupportedPrime(p)),
    }
}

/// Verify that the homogeneous (recession) system admits only the zero
/// vector: the cusp rows sum columnwise to `-p(p-1)` against the
/// nonnegative eta row, and the coordinate matrix is nonsingular.
pub fn recession_only_zero(p: u64) -> Result<bool> {
    let sys = build_system(p, 2)?;
    let half = ((p - 1) / 2) as usize;
    for i in 0..half {
        let col: i64 = sys.ineq[1..].iter().map(|(c, _)| c[i]).sum();
        if col != -((p * (p - 1)) as i64) {
            return Ok(false);
        }
    }
    let m = coordinate_matrix(p)?;
    let mbig: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Ok(!bareiss_det(&mbig).is_zero())
}

/// A parameterization of the lattice points for one `(p, a0)`.
pub enum Parameterization {
    /// `a1 = -3/2 a0 + 11b + 5t`, `a2 = a0 + b - 5t`.
    Closed5 { a0: i64 },
    /// The three-parameter closed form.
    Closed7 { a0: i64 },
    /// The fixed 5x6 rational matrix with a mod-5 integrality congruence.
    Closed11 { a0: i64 },
    /// General prime: Smith-normal-form route in cusp-order coordinates.
    Snf { p: u64, a0: i64, diagonal: Vec<BigInt> },
}

/// The point of the `p = 5` closed form at `(b, t)`.
pub fn closed5_point(a0: i64, b: i64, t: i64) -> Option<ExponentVector> {
    if (3 * a0) % 2 != 0 {
        return None;
    }
    let a1 = -(3 * a0) / 2 + 11 * b + 5 * t;
    let a2 = a0 + b - 5 * t;
    ExponentVector::new(5, vec![a0, a1, a2]).ok()
}

impl Parameterization {
    /// Generate the complete point set (parameter tuples violating the
    /// integrality congruence are skipped, not errors).
    pub fn points(&self) -> Result<Vec<ExponentVector>> {
        let mut out = match self {
            Parameterization::Closed5 { a0 } => {
                let mut v = Vec::new();
                for b in 0..=(a0 / 4) {
                    for t in 0..=((a0 - 4 * b) / 2) {
                        v.extend(closed5_point(*a0, b, t));
                    }
                }
                v
            }
            Parameterization::Closed7 { a0 } => {
                let mut v = Vec::new();
                for b in 0..=(a0 / 3) {
                    for t1 in 0..=(a0 - 3 * b) {
                        for t2 in 0..=(a0 - 3 * b - t1) {
                            let a1 = -a0 / 2 + 5 * b + 2 * t1 - t2;
                            let a2 = -3 * a0 / 2 + 8 * b + t1 + 3 * t2;
                            let a3 = 3 * a0 / 2 - b - 3 * t1 - 2 * t2;
                            v.push(ExponentVector::new(7, vec![*a0, a1, a2, a3])?);
                        }
                    }
                }
                v
            }
            Parameterization::Closed11 { a0 } => {
                const MAT: [[i64; 6]; 5] = [
                    [-16, 27, 7, 4, 1, 3],
                    [19, -8, -3, -6, -4, -7],
                    [-11, 22, 2, -1, 6, 3],
                    [4, 7, -3, -1, -4, 3],
                    [-1, 12, -3, 4, 1, -2],
                ];
                let mut v = Vec::new();
                let cap = 5 * a0 / 2;
                for b in 0..=(a0 / 2) {
                    let lim1 = cap - 5 * b;
                    if lim1 < 0 {
                        continue;
                    }
                    for t1 in 0..=lim1 {
                        for t2 in 0..=(lim1 - t1) {
                            for t3 in 0..=(lim1 - t1 - t2) {
                                for t4 in 0..=(lim1 - t1 - t2 - t3) {
                                    if (a0 / 2 - 12 * b + 3 * t1 - 4 * t2 - t3 + 2 * t4)
                                        .rem_euclid(5)
                                        != 0
                                    {
                                        continue;
                                    }
                                    let params = [a0 / 2, b, t1, t2, t3, t4];
                                    let mut tail = Vec::with_capacity(5);
                                    let mut ok = true;
                                    for row in MAT {
                                        let s: i64 =
                                            row.iter().zip(params).map(|(c, x)| c * x).sum();
                                        if s % 5 != 0 {
                                            ok = false;
                                            break;
                                        }
                                        tail.push(s / 5);
                                    }
                                    if ok {
                                        let mut full = vec![*a0];
                                        full.extend(tail);
                                        let ev = ExponentVector::new(11, full)?;
                                        if is_modular(&ev).0 {
                                            v.push(ev);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                v
            }
            Parameterization::Snf { p, a0, .. } => SnfEnumerator::new(*p, *a0)?.run(),
        };
        out.sort_by(|a, b| a.tail().cmp(b.tail()));
        out.dedup();
        Ok(out)
    }
}

/// Parameterization record for `(p, a0)`: printed closed forms for
/// `p = 5, 7, 11`, the Smith-normal-form route otherwise.
pub fn parameterize(p: u64, a0: i64) -> Result<Parameterization> {
    match p {
        5 => Ok(Parameterization::Closed5 { a0 }),
        7 => Ok(Parameterization::Closed7 { a0 }),
        11 => Ok(Parameterization::Closed11 { a0 }),
        _ => {
            let m = coordinate_matrix(p)?;
            let snf = smith_normal_form(&m);
            Ok(Parameterization::Snf { p, a0, diagonal: snf.diagonal() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn system_p5_rows() {
        let sys = build_system(5, 4).unwrap();
        // 25 a0 + 2 a1 - 22 a2 >= 0 restricted to the tail: (2, -22) >= -100.
        assert!(sys.ineq.contains(&(vec![2, -22], -100)));
        assert!(sys.ineq.contains(&(vec![-22, 2], -100)));
        assert!(sys.ineq.contains(&(vec![2, 2], -4)));
        assert!(sys.contains(&[-1, -1]));
        assert!(!sys.contains(&[1, 0]));
    }

    #[test]
    fn system_matches_is_modular_on_box() {
        for (p, a0, bound) in [(5u64, 4i64, 12i64), (7, 2, 6), (7, 4, 6)] {
            let sys = build_system(p, a0).unwrap();
            let half = ((p - 1) / 2) as usize;
            let mut tail = vec![-bound; half];
            'scan: loop {
                let mut full = vec![a0];
                full.extend_from_slice(&tail);
                let ev = ExponentVector::new(p, full).unwrap();
                assert_eq!(
                    sys.contains(&tail),
                    is_modular(&ev).0,
                    "system/is_modular disagree at {ev}"
                );
                let mut k = 0;
                loop {
                    if k == half {
                        break 'scan;
                    }
                    tail[k] += 1;
                    if tail[k] <= bound {
                        break;
                    }
                    tail[k] = -bound;
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn snf_identity() {
        let snf = smith_normal_form(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn snf_small_example() {
        let a = vec![vec![2i64, 4], vec![6, 8]];
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        check_snf(&a, &snf);
    }

    fn check_snf(a: &[Vec<i64>], snf: &SnfDecomposition) {
        // D = L A R
        let abig: Vec<Vec<BigInt>> =
            a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let lar = mat_mul(&mat_mul(&snf.l, &abig), &snf.r);
        assert_eq!(lar, snf.d);
        assert_eq!(bareiss_det(&snf.l).abs(), BigInt::one());
        assert_eq!(bareiss_det(&snf.r).abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero());
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
        }
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let k = b.len();
        let m = b[0].len();
        let mut out = vec![vec![BigInt::zero(); m]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..m {
                let mut s = BigInt::zero();
                for t in 0..k {
                    s += &a[i][t] * &b[t][j];
                }
                out[i][j] = s;
            }
        }
        out
    }

    #[test]
    fn snf_level11_reference_matrix() {
        // The 5x5 coordinate system at p = 11 has elementary divisors
        // (1, 12, 132, 132, 660).
        let a = vec![
            vec![1i64, 1, 1, 1, 1],
            vec![61, 13, -23, -47, -59],
            vec![13, -47, -59, -23, 61],
            vec![-47, -23, 61, -59, 13],
            vec![-23, -59, 13, 61, -47],
        ];
        let snf = smith_normal_form(&a);
        let want: Vec<BigInt> =
            [1i64, 12, 132, 132, 660].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(snf.diagonal(), want);
        check_snf(&a, &snf);
    }

    #[test]
    fn coordinate_matrix_is_level11_reference() {
        // Our cusp-order coordinates at p = 11 reproduce the same matrix.
        let m = coordinate_matrix(11).unwrap();
        assert_eq!(m[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(m[1], vec![61, 13, -23, -47, -59]);
    }

    #[test]
    fn enumerate_small_counts() {
        assert_eq!(enumerate(5, 2).unwrap().len(), 2);
        assert_eq!(enumerate(5, 4).unwrap().len(), 4);
        assert_eq!(enumerate(7, 6).unwrap().len(), 39);
        assert_eq!(enumerate(11, 2).unwrap().len(), 25);
        assert_eq!(enumerate(13, 2).unwrap().len(), 42);
    }

    #[test]
    fn enumerate_5_4_contents() {
        let got: Vec<Vec<i64>> =
            enumerate(5, 4).unwrap().iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![4, -6, 4], vec![4, -1, -1], vec![4, 4, -6], vec![4, 5, 5]]);
    }

    #[test]
    fn enumerate_matches_box_search() {
        // Every modular point in a generous box is enumerated, and vice versa.
        for (p, a0, bound) in [(5u64, 4i64, 15i64), (5, 6, 18), (7, 2, 8)] {
            let listed: BTreeSet<Vec<i64>> =
                enumerate(p, a0).unwrap().iter().map(|v| v.entries().to_vec()).collect();
            let half = ((p - 1) / 2) as usize;
            let mut found = BTreeSet::new();
            let mut tail = vec![-bound; half];
            'scan: loop {
                let mut full = vec![a0];
                full.extend_from_slice(&tail);
                let ev = ExponentVector::new(p, full.clone()).unwrap();
                if is_modular(&ev).0 {
                    found.insert(full);
                }
                let mut k = 0;
                loop {
                    if k == half {
                        break 'scan;
                    }
                    tail[k] += 1;
                    if tail[k] <= bound {
                        break;
                    }
                    tail[k] = -bound;
                    k += 1;
                }
            }
            assert_eq!(listed, found, "p={p} a0={a0}");
        }
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for a0 in (2..=12).step_by(2) {
            assert_eq!(count_closed_form(5, a0).unwrap(), enumerate(5, a0).unwrap().len() as i64);
            assert_eq!(count_closed_form(7, a0).unwrap(), enumerate(7, a0).unwrap().len() as i64);
        }
        assert_eq!(count_closed_form(5, 4).unwrap(), 4);
        assert_eq!(count_closed_form(7, 6).unwrap(), 39);
        assert_eq!(count_closed_form(5, 2).unwrap(), 2);
        assert!(count_closed_form(11, 2).is_err());
    }

    #[test]
    fn closed5_reference_points() {
        assert_eq!(closed5_point(4, 0, 0).unwrap().entries(), &[4, -6, 4]);
        assert_eq!(closed5_point(4, 0, 2).unwrap().entries(), &[4, 4, -6]);
    }

    #[test]
    fn parameterize_agrees_with_enumerate() {
        for (p, a0s) in
            [(5u64, vec![2i64, 4, 6]), (7, vec![2, 4, 6]), (11, vec![2, 4, 6]), (13, vec![2])]
        {
            for a0 in a0s {
                let pts = parameterize(p, a0).unwrap().points().unwrap();
                let listed = enumerate(p, a0).unwrap();
                assert_eq!(pts, listed, "p={p} a0={a0}");
            }
        }
    }

    #[test]
    fn recession_trivial() {
        for p in [5u64, 7, 11, 13, 17, 19] {
            assert!(recession_only_zero(p).unwrap(), "recession cone nontrivial for p={p}");
        }
    }
}
