//! Klein forms `K_{p,i}`, the eta/Klein products `f_a`, the exponent-shift
//! invariant `l(a)`, and the modularity/cusp-order criteria.
//!
//! The central object is an [`ExponentVector`] `(a_0, ..., a_{(p-1)/2})`
//! attached to a prime `p >= 5`.  It indexes the product
//!
//! ```text
//! f_a(tau) = q^l * (q^p; q^p)^{a_0} * prod_i (q^i, q^{p-i}; q^p)^{a_i}
//! ```
//!
//! which is a holomorphic modular form of weight `a_0/2` for `Gamma_1(p)`
//! exactly when the linear system checked by [`is_modular`] holds.

use crate::error::QkError;
use crate::series::{apply_pochhammer_passes, pochhammer_product, FracSeries};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::RwLock;

/// Exponent tuple `(a_0, ..., a_{(p-1)/2})` attached to a prime `p >= 5`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    p: u64,
    a: Vec<i64>,
}

impl std::fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f[p={}; {}]", self.p, self)
    }
}

impl std::fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl ExponentVector {
    /// Build from `p` and the full tuple with `a_0` first.
    pub fn new(p: u64, a: Vec<i64>) -> Result<Self> {
        if !is_prime(p) || p < 5 {
            return Err(QkError::UnsupportedPrime(p));
        }
        if a.len() != ((p + 1) / 2) as usize {
            return Err(QkError::InvalidArgument(format!(
                "exponent vector for p={} must have {} entries, got {}",
                p,
                (p + 1) / 2,
                a.len()
            )));
        }
        Ok(ExponentVector { p, a })
    }

    pub fn from_slice(p: u64, a: &[i64]) -> Result<Self> {
        Self::new(p, a.to_vec())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a0(&self) -> i64 {
        self.a[0]
    }

    /// Full tuple, `a_0` first.
    pub fn entries(&self) -> &[i64] {
        &self.a
    }

    /// Tail `(a_1, ..., a_{(p-1)/2})`.
    pub fn tail(&self) -> &[i64] {
        &self.a[1..]
    }

    /// `a_0 + 2 * sum_i a_i`, the exponent of `eta(p tau)` in the product.
    pub fn eta_exponent(&self) -> i64 {
        self.a[0] + 2 * self.tail().iter().sum::<i64>()
    }

    /// Pointwise sum (products of `f_a`s multiply exponent vectors).
    pub fn combine(&self, other: &ExponentVector) -> ExponentVector {
        assert_eq!(self.p, other.p);
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        ExponentVector { p: self.p, a }
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// `x(p-x)/(2p)` for `x = i*a mod p`: the weight of index `i` in the order
/// formula at cusp `a/p`.
fn cusp_weight(p: u64, i: u64, a: u64) -> Rational64 {
    let x = (i * a) % p;
    debug_assert!(x != 0);
    Rational64::new((x * (p - x)) as i64, (2 * p) as i64)
}

/// The exponent shift `l(a) = (p/24)(a_0 + 2 sum a_i) - sum_i w_i(1) a_i`
/// as an exact rational (integrality is not assumed).
pub fn ell(v: &ExponentVector) -> Rational64 {
    ell_at_cusp(v, 1)
}

/// Order of `f_a` at the cusp `a/p` (the `l` formula with twisted weights).
pub fn ell_at_cusp(v: &ExponentVector, cusp: u64) -> Rational64 {
    let p = v.p;
    let mut acc = Rational64::new((p as i64) * v.eta_exponent(), 24);
    for (idx, &ai) in v.tail().iter().enumerate() {
        let i = idx as u64 + 1;
        acc -= cusp_weight(p, i, cusp) * Rational64::from_integer(ai);
    }
    acc
}

/// Order profile over the cusps `a/p`, `1 <= a <= (p-1)/2`.
#[derive(Clone, Debug)]
pub struct CuspOrderProfile {
    pub orders: BTreeMap<u64, Rational64>,
}

impl CuspOrderProfile {
    pub fn all_nonnegative(&self) -> bool {
        self.orders.values().all(|o| *o >= Rational64::zero())
    }
}

/// Orders of `f_a` at every cusp `a/p`, `1 <= a <= (p-1)/2`.
pub fn cusp_orders(v: &ExponentVector) -> CuspOrderProfile {
    let mut orders = BTreeMap::new();
    for a in 1..=(v.p - 1) / 2 {
        orders.insert(a, ell_at_cusp(v, a));
    }
    CuspOrderProfile { orders }
}

/// Modularity test: `f_a` lies in `M_{a_0/2}(Gamma_1(p))` iff
/// `0 <= a_0 + 2 sum a_i == 0 (mod 24)`, `sum i^2 a_i == 0 (mod p)`, and
/// every cusp order is nonnegative.  Returns the weight `a_0/2` when true.
///
/// The half-integrality condition on the Klein-quotient order is applied
/// in its equivalent integer form `sum i^2 a_i == 0 (mod p)`, keeping the
/// screening path in integer arithmetic.
pub fn is_modular(v: &ExponentVector) -> (bool, i64) {
    let a0 = v.a0();
    if a0 <= 0 || a0 % 2 != 0 {
        return (false, 0);
    }
    let s = v.eta_exponent();
    if s < 0 || s % 24 != 0 {
        return (false, 0);
    }
    let p = v.p as i64;
    let mut q: i64 = 0;
    for (idx, &ai) in v.tail().iter().enumerate() {
        let i = idx as i64 + 1;
        q = (q + (i * i % p) * ai.rem_euclid(p)) % p;
    }
    if q.rem_euclid(p) != 0 {
        return (false, 0);
    }
    if !cusp_orders(v).all_nonnegative() {
        return (false, 0);
    }
    (true, a0 / 2)
}

/// Process-wide cache of `(q^i, q^{p-i}; q^p)` coefficient prefixes, shared
/// across an enumeration run (read-mostly after warmup).
static POCH_CACHE: RwLock<Option<HashMap<(u64, u64), Vec<BigInt>>>> = RwLock::new(None);

fn pochhammer_cached(i: u64, p: u64, order: i64) -> Result<FracSeries> {
    let need = (order + 1).max(1) as usize;
    {
        let guard = POCH_CACHE.read().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(c) = map.get(&(p, i)) {
                if c.len() >= need {
                    return Ok(FracSeries::from_int_coeffs(1, 0, c[..need].to_vec()));
                }
            }
        }
    }
    let fresh = pochhammer_product(i, p, order)?;
    let coeffs: Vec<BigInt> = (0..need)
        .map(|n| {
            let c = fresh.coeff_int(n as i64).unwrap();
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    let mut guard = POCH_CACHE.write().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    let entry = map.entry((p, i)).or_default();
    if entry.len() < coeffs.len() {
        *entry = coeffs.clone();
    }
    Ok(FracSeries::from_int_coeffs(1, 0, coeffs))
}

/// The Klein-form value
/// `K_{p,i} = q^{i(i-p)/(2p)} (q^i, q^{p-i}; q^p) / (q^p; q^p)^2`,
/// with leading exponent `i(i-p)/(2p)` and leading coefficient 1; valid
/// through exponent `order` inclusive.
pub fn klein_series(p: u64, i: u64, order: i64) -> Result<FracSeries> {
    if i < 1 || i > (p - 1) / 2 {
        return Err(QkError::IndexRange(format!(
            "klein index {i} out of range 1..={}",
            (p - 1) / 2
        )));
    }
    // The leading exponent is negative; expand the unit part far enough
    // that the shifted window still covers `order`.
    let shift_num = i as i64 * (i as i64 - p as i64);
    let win = order + Integer::div_ceil(&-shift_num, &(2 * p as i64)) + 1;
    let mut unit = pochhammer_cached(i, p, win)?;
    apply_pochhammer_passes(&mut unit, &[p as i64], p as i64, -2);
    let grid = 2 * p as i64;
    Ok(unit
        .rescale_grid(grid)
        .shift(shift_num)
        .truncate_at_inclusive(Rational64::from_integer(order)))
}

/// The product `f_a` as a q-series, valid through exponent `order`
/// inclusive.  Works for non-modular vectors too, in which case the
/// leading exponent is a non-integral rational.
pub fn product_series(v: &ExponentVector, order: i64) -> Result<FracSeries> {
    let p = v.p;
    let l = ell(v);
    let l_floor = Integer::div_floor(l.numer(), l.denom());
    let win = (order - l_floor.min(0)) + 1;
    let mut s = FracSeries::one(win.max(1));
    // Alternate multiplying and dividing passes round-robin so partial
    // products stay close to the final, polynomially bounded coefficients.
    let mut live: Vec<(Vec<i64>, i64)> = Vec::new();
    if v.a0() != 0 {
        live.push((vec![p as i64], v.a0()));
    }
    for (idx, &ai) in v.tail().iter().enumerate() {
        let i = idx as i64 + 1;
        if ai != 0 {
            live.push((vec![i, p as i64 - i], ai));
        }
    }
    while !live.is_empty() {
        for (offsets, e) in &mut live {
            let step = e.signum();
            apply_pochhammer_passes(&mut s, offsets, p as i64, step);
            *e -= step;
        }
        live.retain(|(_, e)| *e != 0);
    }
    let den = *l.denom();
    let s = s.rescale_grid(den);
    Ok(s.shift(*l.numer()).truncate_at_inclusive(Rational64::from_integer(order)))
}

/// Coefficient `P_a(n)` of the unshifted product: the coefficient of
/// `q^{l(a)+n}` in `f_a`.
pub fn product_coefficient(v: &ExponentVector, n: i64) -> Result<BigRational> {
    let l = ell(v);
    let order = (l + Rational64::from_integer(n)).ceil().to_integer() + 1;
    let f = product_series(v, order)?;
    f.coeff_at(l + Rational64::from_integer(n))
}

/// The low-coefficient vanishing criterion for the eigenform families: for
/// each `2 <= j <= (p-1)/2`, expand `f_{sigma^j(v)}` and require
/// `b_j(p*s) = 0` for all `s < l_j` (exact zeros, not congruences).
pub fn check_low_coefficient_vanishing(v: &ExponentVector) -> Result<bool> {
    let (ok, _) = is_modular(v);
    if !ok {
        return Err(QkError::NotModular(format!("{v}")));
    }
    let p = v.p;
    let mut w = v.clone();
    for j in 1..=(p - 1) / 2 {
        w = crate::orbit::apply_sigma(&w, 1);
        if j < 2 {
            continue;
        }
        let lj = ell(&w);
        if !lj.is_integer() {
            return Err(QkError::Internal(format!("sigma-image {w} has non-integral shift")));
        }
        let lj = lj.to_integer();
        if lj <= 0 {
            continue;
        }
        let f = product_series(&w, (p as i64) * (lj - 1) + 1)?;
        for s in 0..lj {
            if !f.coeff_int((p as i64) * s)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ev(p: u64, a: &[i64]) -> ExponentVector {
        ExponentVector::from_slice(p, a).unwrap()
    }

    #[test]
    fn ell_examples() {
        // delta_5 = (25-1)/24 = 1 for the 5-core vector
        assert_eq!(ell(&ev(5, &[4, -1, -1])), Rational64::from_integer(1));
        assert_eq!(ell(&ev(5, &[2, -3, 2])), Rational64::zero());
        assert_eq!(ell(&ev(5, &[6, 1, -4])), Rational64::from_integer(2));
    }

    #[test]
    fn klein_leading_exponents() {
        let k1 = klein_series(5, 1, 3).unwrap();
        assert_eq!(k1.leading().unwrap().0, Rational64::new(-2, 5));
        assert_eq!(k1.leading().unwrap().1, BigRational::one());
        let k2 = klein_series(5, 2, 3).unwrap();
        assert_eq!(k2.leading().unwrap().0, Rational64::new(-3, 5));
        // K_{5,1} * K_{5,2} has leading exponent -2/5 - 3/5 = -1.
        let prod = k1.mul(&k2);
        assert_eq!(prod.leading().unwrap().0, Rational64::from_integer(-1));
        assert!(klein_series(5, 3, 3).is_err());
    }

    #[test]
    fn klein_pow_leading_exponent_cancels() {
        // pow(K_{5,1}, -3) * pow(K_{5,2}, 2): 3*(2/5) + 2*(-3/5) = 0
        let k1 = klein_series(5, 1, 6).unwrap();
        let k2 = klein_series(5, 2, 6).unwrap();
        let q = k1.pow(-3).unwrap().mul(&k2.pow(2).unwrap());
        assert_eq!(q.leading().unwrap().0, Rational64::zero());
        // and it equals the product series of (2,-3,2), which has l = 0
        let f = product_series(&ev(5, &[2, -3, 2]), 4).unwrap();
        assert!(f.eq_through(&q, Rational64::from_integer(3)).unwrap());
    }

    #[test]
    fn product_series_five_core() {
        // f_{4,-1,-1} = q (q^5;q^5)^5/(q;q): coefficients count 5-cores.
        let f = product_series(&ev(5, &[4, -1, -1]), 12).unwrap();
        assert_eq!(f.leading().unwrap().0, Rational64::from_integer(1));
        // Independent oracle: enumerate partitions, reject any with a hook
        // length divisible by 5.
        fn five_core_count(n: usize) -> i64 {
            fn hooks_ok(part: &[usize]) -> bool {
                let r = part.len();
                for i in 0..r {
                    for j in 0..part[i] {
                        let arm = part[i] - j - 1;
                        let mut leg = 0;
                        for k in (i + 1)..r {
                            if part[k] > j {
                                leg += 1;
                            }
                        }
                        if (arm + leg + 1) % 5 == 0 {
                            return false;
                        }
                    }
                }
                true
            }
            fn gen(n: usize, max: usize, cur: &mut Vec<usize>, acc: &mut i64) {
                if n == 0 {
                    if hooks_ok(cur) {
                        *acc += 1;
                    }
                    return;
                }
                for part in (1..=max.min(n)).rev() {
                    cur.push(part);
                    gen(n - part, part, cur, acc);
                    cur.pop();
                }
            }
            let mut acc = 0;
            gen(n, n.max(1), &mut Vec::new(), &mut acc);
            acc
        }
        for n in 0..=10i64 {
            assert_eq!(
                f.coeff_int(n + 1).unwrap(),
                BigRational::from_integer(five_core_count(n as usize).into()),
                "5-core count at {n}"
            );
        }
    }

    #[test]
    fn product_series_klein_quotient_normalization() {
        // f_{2,-3,2} = K_{5,2}^2 / K_{5,1}^3 = 1 + O(q)
        let f = product_series(&ev(5, &[2, -3, 2]), 6).unwrap();
        let (e, c) = f.leading().unwrap();
        assert_eq!(e, Rational64::zero());
        assert_eq!(c, BigRational::one());
    }

    #[test]
    fn is_modular_examples() {
        assert_eq!(is_modular(&ev(5, &[4, -1, -1])), (true, 2));
        assert!(!is_modular(&ev(5, &[2, 0, 0])).0);
        let v13 = ev(13, &[6, 1, 0, 0, 0, 0, -4]);
        assert_eq!(is_modular(&v13), (true, 3));
    }

    #[test]
    fn cusp_order_examples() {
        let prof = cusp_orders(&ev(5, &[2, -3, 2]));
        assert_eq!(prof.orders[&1], Rational64::zero());
        assert_eq!(prof.orders[&2], Rational64::from_integer(1));
        assert!(cusp_orders(&ev(5, &[4, -1, -1])).all_nonnegative());
        // all-zero tail with a0 = 24: every cusp order = p
        let v = ev(7, &[24, 0, 0, 0]);
        for a in 1..=3 {
            assert_eq!(cusp_orders(&v).orders[&a], Rational64::from_integer(7));
        }
    }

    #[test]
    fn product_leading_exponent_is_ell() {
        for (p, a) in [
            (5u64, vec![4i64, -1, -1]),
            (5, vec![2, -3, 2]),
            (7, vec![6, 1, 0, -4]),
            (7, vec![2, -2, 0, 1]),
            (11, vec![4, -2, 0, 0, 1, -1]),
        ] {
            let v = ev(p, &a);
            let f = product_series(&v, 6).unwrap();
            assert_eq!(f.leading().unwrap().0, ell(&v), "leading exponent for {v}");
            assert_eq!(f.leading().unwrap().1, BigRational::one());
        }
    }
}
