//! The index permutation `sigma_p`, its orbits, and the sign `lambda` of
//! the weight-k slash action by the matrices `gamma_p`.
//!
//! `sigma_p` is the cycle `(1, [alpha], [alpha^2], ...)` on `{1..(p-1)/2}`,
//! where `alpha` is the least positive generator of the quotient
//! `(Z/pZ)^x / {+-1}` and `[m]` denotes the least positive representative
//! of the class of `m`.  Acting on an exponent vector it fixes `a_0` and
//! sends entry `i` to `a_{sigma(i)}`.

use crate::error::QkError;
use crate::klein::{is_modular, is_prime, ExponentVector};
use crate::Result;
use num_rational::Rational64;
use std::collections::BTreeSet;

/// Generator data for `(Z/pZ)^x / {+-1}` and the induced cycle.
#[derive(Clone, Debug)]
pub struct PrimitiveRootData {
    pub p: u64,
    /// Least positive generator of the quotient group.
    pub alpha: u64,
    /// `alpha^{-1} mod p`.
    pub alpha_inv: u64,
    /// `sigma[i]` for `1 <= i <= (p-1)/2`; `sigma[0]` is unused.
    pub sigma: Vec<usize>,
}

/// Least positive representative of the class of `m` in `{1..(p-1)/2}`.
pub fn half_class(m: u64, p: u64) -> u64 {
    let r = m % p;
    debug_assert!(r != 0);
    r.min(p - r)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    crate::klein::pow_mod(a, p - 2, p)
}

/// The permutation data for a prime `p >= 5`.
pub fn sigma(p: u64) -> Result<PrimitiveRootData> {
    if !is_prime(p) || p < 5 {
        return Err(QkError::UnsupportedPrime(p));
    }
    let half = ((p - 1) / 2) as usize;
    let mut alpha = 0;
    'cand: for a in 2..p {
        let mut seen = vec![false; half + 1];
        let mut x: u64 = 1;
        for _ in 0..half {
            let c = half_class(x, p) as usize;
            if seen[c] {
                continue 'cand;
            }
            seen[c] = true;
            x = x * a % p;
        }
        alpha = a;
        break;
    }
    if alpha == 0 {
        return Err(QkError::Internal(format!("no generator found for p={p}")));
    }
    // Cycle (c_0 = 1, c_1 = [alpha], ...): sigma(c_k) = c_{k+1}.
    let mut cycle = Vec::with_capacity(half);
    let mut x: u64 = 1;
    for _ in 0..half {
        cycle.push(half_class(x, p) as usize);
        x = x * alpha % p;
    }
    let mut perm = vec![0usize; half + 1];
    for k in 0..half {
        perm[cycle[k]] = cycle[(k + 1) % half];
    }
    Ok(PrimitiveRootData { p, alpha, alpha_inv: mod_inv(alpha, p), sigma: perm })
}

/// Apply `sigma_p^j`: `a_0` is fixed and entry `i` becomes `a_{sigma(i)}`.
pub fn apply_sigma(v: &ExponentVector, j: u64) -> ExponentVector {
    let data = sigma(v.p()).expect("valid prime");
    let half = v.tail().len();
    let mut cur: Vec<i64> = v.entries().to_vec();
    for _ in 0..(j % half as u64) {
        let prev = cur.clone();
        for i in 1..=half {
            cur[i] = prev[data.sigma[i]];
        }
    }
    ExponentVector::new(v.p(), cur).expect("same shape")
}

/// Full orbit of `v` under `<sigma_p>`, in visit order starting at `v`.
pub fn orbit(v: &ExponentVector) -> Vec<ExponentVector> {
    let mut out = vec![v.clone()];
    let mut cur = apply_sigma(v, 1);
    while &cur != v {
        out.push(cur.clone());
        cur = apply_sigma(&cur, 1);
    }
    out
}

/// Orbit size, computed both by iteration and by the stabilizer pattern
/// `a_i = a_{[alpha^m i]}`; the two must agree.  Always divides `(p-1)/2`.
pub fn orbit_size_class(v: &ExponentVector) -> Result<u64> {
    let by_iteration = orbit(v).len() as u64;
    let p = v.p();
    let data = sigma(p)?;
    let half = (p - 1) / 2;
    let mut by_pattern = half;
    for m in (1..=half).filter(|d| half % d == 0) {
        // sigma^m stabilizes v iff a_i = a_{[alpha^m i]} for all i.
        let am = crate::klein::pow_mod(data.alpha, m, p);
        let fixes = (1..=half).all(|i| {
            let j = half_class(am * i % p, p);
            v.tail()[(i - 1) as usize] == v.tail()[(j - 1) as usize]
        });
        if fixes {
            by_pattern = m;
            break;
        }
    }
    if by_iteration != by_pattern {
        return Err(QkError::Internal(format!(
            "orbit size mismatch for {v}: iteration {by_iteration}, pattern {by_pattern}"
        )));
    }
    Ok(by_iteration)
}

/// A chosen matrix `(alpha_inv, p; p*beta, delta)` of determinant one with
/// lower-left divisible by `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMatrix {
    pub p: u64,
    pub entries: [[i64; 2]; 2],
}

impl GammaMatrix {
    pub fn det(&self) -> i64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }
}

/// The pinned `gamma_p`: the minimal nonnegative `beta` completion of
/// `(alpha_inv, p; p beta, delta)` with determinant one.  Any valid choice
/// only flips bookkeeping signs; one is fixed for reproducibility, and for
/// `p = 13, 17, 19` it agrees with the reference matrices.
pub fn gamma_matrix(p: u64) -> Result<GammaMatrix> {
    let data = sigma(p)?;
    let ai = data.alpha_inv as i64;
    let pi = p as i64;
    // alpha_inv * delta - p^2 * beta = 1 with minimal beta >= 0.
    let mut beta = 0i64;
    loop {
        let num = 1 + pi * pi * beta;
        if num % ai == 0 {
            let delta = num / ai;
            let g = GammaMatrix { p, entries: [[ai, pi], [pi * beta, delta]] };
            debug_assert_eq!(g.det(), 1);
            return Ok(g);
        }
        beta += 1;
    }
}

/// Decompose `alpha_inv * i = q_i p + r_i` with `|r_i| <= (p-1)/2`.
fn balanced_div(p: u64, alpha_inv: u64, i: u64) -> (i64, i64) {
    let v = (alpha_inv * i) as i64;
    let pi = p as i64;
    let mut q = v.div_euclid(pi);
    let mut r = v.rem_euclid(pi);
    if r > (pi - 1) / 2 {
        q += 1;
        r -= pi;
    }
    (q, r)
}

/// The sign `lambda(gamma_p, a)` relating `f_a |_k gamma_p` to
/// `f_{sigma(a)}`: `prod_i sgn(r_i)^{a_i} * (-1)^A` with
/// `A = sum_i (q_i i + i + q_i + r_i i / p) a_i`.
///
/// Requires `v` modular (this makes `A` an integer); errors otherwise.
pub fn lambda_sign(g: &GammaMatrix, v: &ExponentVector) -> Result<i64> {
    let p = v.p();
    if g.p != p {
        return Err(QkError::InvalidArgument("gamma matrix is for a different prime".into()));
    }
    if !is_modular(v).0 {
        return Err(QkError::NotModular(format!("{v}")));
    }
    let alpha_inv = g.entries[0][0].rem_euclid(p as i64) as u64;
    let mut a_sum = Rational64::new(0, 1);
    let mut sign = 1i64;
    for (idx, &ai) in v.tail().iter().enumerate() {
        let i = idx as u64 + 1;
        let (q, r) = balanced_div(p, alpha_inv, i);
        if r < 0 && ai.rem_euclid(2) == 1 {
            sign = -sign;
        }
        let term = Rational64::from_integer(q * i as i64 + i as i64 + q)
            + Rational64::new(r * i as i64, p as i64);
        a_sum += term * Rational64::from_integer(ai);
    }
    if !a_sum.is_integer() {
        return Err(QkError::NotModular(format!("{v}: slash-action exponent not integral")));
    }
    if a_sum.to_integer().rem_euclid(2) == 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// `lambda(gamma_p, a)^p`, which is a sign even when `a` is not modular
/// for `Gamma_1(p)` (the fractional part of the slash-action exponent is
/// cleared by the p-th power).  Agrees with `lambda_sign` on modular
/// vectors since `p` is odd.
pub fn lambda_sign_pth(g: &GammaMatrix, v: &ExponentVector) -> Result<i64> {
    let p = v.p();
    if g.p != p {
        return Err(QkError::InvalidArgument("gamma matrix is for a different prime".into()));
    }
    let alpha_inv = g.entries[0][0].rem_euclid(p as i64) as u64;
    let mut par: i64 = 0;
    let mut sign = 1i64;
    for (idx, &ai) in v.tail().iter().enumerate() {
        let i = idx as u64 + 1;
        let (q, r) = balanced_div(p, alpha_inv, i);
        if r < 0 && ai.rem_euclid(2) == 1 {
            sign = -sign;
        }
        // p * A = sum (q i + i + q) p a_i + sum r i a_i, an integer.
        par += (q * i as i64 + i as i64 + q) * (p as i64) * ai + r * i as i64 * ai;
    }
    if par.rem_euclid(2) == 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// The residue permutation induced on dissection components:
/// `s(r) = alpha_inv^2 * r mod p`.  Fixes 0 and is a bijection on residues.
pub fn dissection_residue_map(p: u64, r: u64) -> Result<u64> {
    let data = sigma(p)?;
    Ok(data.alpha_inv * data.alpha_inv % p * (r % p) % p)
}

/// All distinct nonzero quadratic residues mod p.
pub fn quadratic_residues(p: u64) -> BTreeSet<u64> {
    (1..p).map(|x| x * x % p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(p: u64, a: &[i64]) -> ExponentVector {
        ExponentVector::from_slice(p, a).unwrap()
    }

    fn cycle_of(p: u64) -> Vec<usize> {
        let d = sigma(p).unwrap();
        let mut out = vec![1usize];
        let mut cur = d.sigma[1];
        while cur != 1 {
            out.push(cur);
            cur = d.sigma[cur];
        }
        out
    }

    #[test]
    fn sigma_cycles_match_reference() {
        assert_eq!(cycle_of(5), vec![1, 2]);
        assert_eq!(cycle_of(7), vec![1, 2, 3]);
        assert_eq!(cycle_of(11), vec![1, 2, 4, 3, 5]);
        assert_eq!(cycle_of(13), vec![1, 2, 4, 5, 3, 6]);
        assert_eq!(cycle_of(17), vec![1, 3, 8, 7, 4, 5, 2, 6]);
        assert_eq!(cycle_of(19), vec![1, 2, 4, 8, 3, 6, 7, 5, 9]);
    }

    #[test]
    fn sigma_order_is_half() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(cycle_of(p).len() as u64, (p - 1) / 2, "order for p={p}");
        }
    }

    #[test]
    fn apply_sigma_examples() {
        assert_eq!(apply_sigma(&ev(5, &[6, 1, -4]), 1), ev(5, &[6, -4, 1]));
        // sigma_7 orbit of (6,-4,1,0) contains (6,1,0,-4)
        let orb = orbit(&ev(7, &[6, -4, 1, 0]));
        assert!(orb.contains(&ev(7, &[6, 1, 0, -4])));
        // constant tail gives a singleton orbit
        assert_eq!(orbit(&ev(5, &[4, -1, -1])).len(), 1);
        // full power is the identity
        let v = ev(7, &[6, 2, -3, -2]);
        assert_eq!(apply_sigma(&v, 3), v);
    }

    #[test]
    fn orbit_size_classes() {
        assert_eq!(orbit_size_class(&ev(13, &[4, 1, -2, -2, 0, 1, 0])).unwrap(), 3);
        assert_eq!(orbit_size_class(&ev(13, &[4, 1, 1, 0, 0, -2, -2])).unwrap(), 6);
        assert_eq!(orbit_size_class(&ev(13, &[4, 1, 0, 0, -1, -2, 0])).unwrap(), 6);
        assert_eq!(orbit_size_class(&ev(5, &[4, -1, -1])).unwrap(), 1);
    }

    #[test]
    fn gamma_matrices() {
        assert_eq!(gamma_matrix(13).unwrap().entries, [[7, 13], [78, 145]]);
        assert_eq!(gamma_matrix(17).unwrap().entries, [[6, 17], [85, 241]]);
        assert_eq!(gamma_matrix(19).unwrap().entries, [[10, 19], [171, 325]]);
        let g5 = gamma_matrix(5).unwrap();
        assert_eq!(g5.entries, [[3, 5], [10, 17]]);
        assert_eq!(g5.det(), 1);
    }

    #[test]
    fn lambda_sign_examples() {
        let g5 = gamma_matrix(5).unwrap();
        assert_eq!(lambda_sign(&g5, &ev(5, &[2, -3, 2])).unwrap(), 1);
        // all-even exponents: positive sign
        assert_eq!(lambda_sign(&g5, &ev(5, &[24, 0, 0])).unwrap(), 1);
        // squares to one on a batch of modular vectors
        for a in [[4i64, -1, -1], [6, 1, -4], [8, 3, -7]] {
            let v = ev(5, &a);
            let s = lambda_sign(&g5, &v).unwrap();
            assert_eq!(s * s, 1);
        }
    }

    #[test]
    fn residue_map_examples() {
        assert_eq!(dissection_residue_map(11, 0).unwrap(), 0);
        // p = 11: alpha = 2, alpha_inv = 6, s(r) = 36 r = 3 r (mod 11)
        assert_eq!(dissection_residue_map(11, 1).unwrap(), 3);
        // the map permutes nonzero residues within quadratic-residue classes
        for p in [5u64, 7, 11, 13, 17, 19] {
            let qr = quadratic_residues(p);
            let mut seen = BTreeSet::new();
            for r in 1..p {
                let s = dissection_residue_map(p, r).unwrap();
                assert_eq!(qr.contains(&r), qr.contains(&s), "p={p} r={r}");
                seen.insert(s);
            }
            assert_eq!(seen.len() as u64, p - 1);
        }
    }
}
