//! Residue-arithmetic expansions of the eta/Klein products: coefficients
//! of `(q^p;q^p)^{a0} prod (q^i, q^{p-i}; q^p)^{a_i}` reduced mod `m`,
//! computed with u64 arithmetic.
//!
//! This is the screening workhorse: a congruence question about the first
//! N coefficients needs only their residues, and the binomial-pass
//! construction touches each coefficient O(total exponent weight) times.

use crate::klein::ExponentVector;

/// Coefficients of the unshifted product of `v` reduced mod `m`, for
/// exponents `0..len` relative to the leading term.  `m >= 2`; values fit
/// comfortably in u64 (moduli up to p^6 or so).
pub fn product_coeffs_mod(v: &ExponentVector, len: usize, m: u64) -> Vec<u64> {
    assert!(m >= 2);
    let p = v.p() as usize;
    let mut c = vec![0u64; len.max(1)];
    c[0] = 1 % m;
    // (q^a; q^p)^{+-1} passes: multiply or divide by (1 - q^{a+jp}).
    let mul_pass = |c: &mut Vec<u64>, a: usize| {
        let mut e = a;
        while e < c.len() {
            for k in (e..c.len()).rev() {
                let t = c[k - e];
                if t != 0 {
                    c[k] = if c[k] >= t { c[k] - t } else { c[k] + m - t };
                }
            }
            // A single binomial multiplies once per factor; factors are
            // applied one exponent at a time.
            e += p;
        }
    };
    let div_pass = |c: &mut Vec<u64>, a: usize| {
        let mut e = a;
        while e < c.len() {
            for k in e..c.len() {
                let t = c[k - e];
                if t != 0 {
                    let s = c[k] + t;
                    c[k] = if s >= m { s - m } else { s };
                }
            }
            e += p;
        }
    };
    let half = (p - 1) / 2;
    let mut passes: Vec<(usize, i64)> = Vec::new();
    if v.a0() != 0 {
        passes.push((p, v.a0()));
    }
    for (idx, &ai) in v.tail().iter().enumerate() {
        if ai != 0 {
            passes.push((idx + 1, ai));
            passes.push((p - (idx + 1), ai));
        }
    }
    let _ = half;
    for (a, e) in passes {
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                mul_pass(&mut c, a);
            } else {
                div_pass(&mut c, a);
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klein::product_series;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    #[test]
    fn matches_exact_series() {
        for (p, a, m) in [
            (5u64, vec![4i64, -1, -1], 5u64),
            (5, vec![6, 1, -4], 25),
            (7, vec![6, 3, 3, 3], 7),
            (11, vec![4, -2, 0, 1, -2, 1], 121),
        ] {
            let v = ExponentVector::new(p, a).unwrap();
            let len = 40usize;
            let fast = product_coeffs_mod(&v, len, m);
            let l = crate::klein::ell(&v);
            let exact = product_series(&v, l.ceil().to_integer() + len as i64 + 1).unwrap();
            for n in 0..len {
                let c = exact
                    .coeff_at(l + num_rational::Rational64::from_integer(n as i64))
                    .unwrap();
                assert!(c.is_integer());
                let want = c.to_integer().mod_floor(&num_bigint::BigInt::from(m));
                assert_eq!(
                    fast[n],
                    want.to_u64().unwrap(),
                    "coefficient {n} of {v} mod {m}"
                );
            }
        }
    }
}
