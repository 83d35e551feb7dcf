//! Truncated formal q-series with exponents on a rational grid and exact
//! rational coefficients.
//!
//! A [`FracSeries`] is supported on exponents `(start + k)/den` for
//! `0 <= k < trunc`, where `den >= 1` is the exponent denominator.  Every
//! exponent strictly below `start/den` is known to have coefficient zero,
//! and nothing is known from `(start + trunc)/den` on.  Coefficients are
//! stored as big-integer numerators over one shared positive denominator,
//! so the common all-integer case never leaves integer arithmetic.
//!
//! Binary operations align both operands to the lcm grid (lossless) and
//! return the minimal valid truncation window.  Comparisons past the known
//! window are errors, never silent passes.

use crate::error::QkError;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// Truncated formal series `sum_k c_k q^{(start+k)/den} + O(q^{(start+trunc)/den})`.
#[derive(Clone, Debug)]
pub struct FracSeries {
    den: i64,
    start: i64,
    /// Coefficient numerators; `coeffs.len() == trunc`.
    coeffs: Vec<BigInt>,
    /// Shared positive coefficient denominator.
    cden: BigInt,
}

impl FracSeries {
    /// Zero series known through exponent `end/den` (exclusive).
    pub fn zero(den: i64, end: i64) -> Self {
        assert!(den >= 1);
        FracSeries { den, start: end, coeffs: Vec::new(), cden: BigInt::one() }
    }

    /// Constant `1`, integer grid, valid through exponent `order` inclusive.
    pub fn one(order: i64) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// Constant series valid through integer exponent `order` inclusive.
    pub fn constant(c: BigRational, order: i64) -> Self {
        assert!(order >= 0);
        let mut coeffs = vec![BigInt::zero(); (order + 1) as usize];
        coeffs[0] = c.numer().clone();
        let mut s = FracSeries { den: 1, start: 0, coeffs, cden: c.denom().clone() };
        s.normalize();
        s
    }

    /// Series from integer coefficients `c_k` at exponents `(start+k)/den`.
    pub fn from_int_coeffs(den: i64, start: i64, coeffs: Vec<BigInt>) -> Self {
        assert!(den >= 1);
        let mut s = FracSeries { den, start, coeffs, cden: BigInt::one() };
        s.normalize();
        s
    }

    /// Series from small integer coefficients (test convenience).
    pub fn from_i64_coeffs(den: i64, start: i64, coeffs: &[i64]) -> Self {
        Self::from_int_coeffs(den, start, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Exponent denominator of the grid.
    pub fn den(&self) -> i64 {
        self.den
    }

    /// Leading exponent numerator: the series is supported on `q^{(start+k)/den}`.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Number of valid coefficients.
    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    /// One past the last valid exponent numerator, on the grid.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Exclusive upper bound of the valid window as a rational exponent.
    pub fn window_end(&self) -> Rational64 {
        Rational64::new(self.end(), self.den)
    }

    /// Shared coefficient denominator.
    pub fn coeff_den(&self) -> &BigInt {
        &self.cden
    }

    /// Raw coefficient numerator at grid index `k` (over `coeff_den`).
    pub fn coeff_numer(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    /// Leading exponent and coefficient, or `None` when zero on the window.
    pub fn leading(&self) -> Option<(Rational64, BigRational)> {
        if self.coeffs.is_empty() {
            return None;
        }
        Some((
            Rational64::new(self.start, self.den),
            BigRational::new(self.coeffs[0].clone(), self.cden.clone()),
        ))
    }

    /// True if every known coefficient is zero.
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Strip leading zeros (adjusting `start`) and reduce the shared
    /// coefficient denominator by the common gcd.
    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.cden.is_negative() {
            self.cden = -std::mem::take(&mut self.cden);
            for c in &mut self.coeffs {
                *c = -std::mem::take(c);
            }
        }
        if !self.cden.is_one() {
            let mut g = self.cden.clone();
            for c in &self.coeffs {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                self.cden = &self.cden / &g;
                for c in &mut self.coeffs {
                    *c = &*c / &g;
                }
            }
        }
    }

    /// Rescale to a grid with denominator `new_den` (a multiple of `den`).
    /// No information is lost: the window endpoint maps exactly.
    pub fn rescale_grid(&self, new_den: i64) -> Self {
        assert!(new_den % self.den == 0 && new_den >= self.den);
        let f = new_den / self.den;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() * f as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[k * f as usize] = c.clone();
            }
        }
        FracSeries { den: new_den, start: self.start * f, coeffs, cden: self.cden.clone() }
    }

    /// Reduce the grid denominator when every nonzero coefficient allows it.
    pub fn coarsen_grid(&self) -> Self {
        let mut first: Option<i64> = None;
        let mut step_gcd: i64 = 0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let num = self.start + k as i64;
                match first {
                    None => first = Some(num),
                    Some(f) => step_gcd = step_gcd.gcd(&(num - f)),
                }
            }
        }
        let first = match first {
            None => return self.clone(),
            Some(f) => f,
        };
        let d = step_gcd.gcd(&first).gcd(&self.den);
        if d <= 1 {
            return self.clone();
        }
        let new_den = self.den / d;
        let start = first / d;
        // Conservative window: only whole coarse steps below the old end.
        let end = Integer::div_floor(&self.end(), &d);
        let mut coeffs = vec![BigInt::zero(); (end - start).max(0) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let num = self.start + k as i64;
                let idx = num / d - start;
                if idx >= 0 && (idx as usize) < coeffs.len() {
                    coeffs[idx as usize] = c.clone();
                }
            }
        }
        let mut s = FracSeries { den: new_den, start, coeffs, cden: self.cden.clone() };
        s.normalize();
        s
    }

    fn aligned(a: &FracSeries, b: &FracSeries) -> (FracSeries, FracSeries) {
        let den = a.den.lcm(&b.den);
        (a.rescale_grid(den), b.rescale_grid(den))
    }

    /// Coefficient at rational exponent `e`.  Exponents below the leading
    /// term are zero by invariant; past the window is an error.
    pub fn coeff_at(&self, e: Rational64) -> Result<BigRational> {
        if e >= self.window_end() {
            return Err(QkError::TruncationTooShort {
                need: e.to_string(),
                have: self.window_end().to_string(),
            });
        }
        let scaled = e * Rational64::from_integer(self.den);
        if !scaled.is_integer() {
            return Ok(BigRational::zero());
        }
        let num = scaled.to_integer();
        if num < self.start {
            return Ok(BigRational::zero());
        }
        let k = (num - self.start) as usize;
        Ok(BigRational::new(self.coeffs[k].clone(), self.cden.clone()))
    }

    /// Coefficient at an integer exponent.
    pub fn coeff_int(&self, n: i64) -> Result<BigRational> {
        self.coeff_at(Rational64::from_integer(n))
    }

    /// Addition; the result window is the intersection of the operands'.
    pub fn add(&self, other: &FracSeries) -> FracSeries {
        let (a, b) = FracSeries::aligned(self, other);
        let start = a.start.min(b.start);
        let end = a.end().min(b.end());
        if end <= start {
            return FracSeries::zero(a.den, end);
        }
        let cden = a.cden.lcm(&b.cden);
        let fa = &cden / &a.cden;
        let fb = &cden / &b.cden;
        let mut coeffs = vec![BigInt::zero(); (end - start) as usize];
        for (k, c) in a.coeffs.iter().enumerate() {
            let num = a.start + k as i64;
            if num < end && !c.is_zero() {
                coeffs[(num - start) as usize] += c * &fa;
            }
        }
        for (k, c) in b.coeffs.iter().enumerate() {
            let num = b.start + k as i64;
            if num < end && !c.is_zero() {
                coeffs[(num - start) as usize] += c * &fb;
            }
        }
        let mut s = FracSeries { den: a.den, start, coeffs, cden };
        s.normalize();
        s
    }

    /// Negation.
    pub fn neg(&self) -> FracSeries {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = -std::mem::take(c);
        }
        s
    }

    /// Subtraction.
    pub fn sub(&self, other: &FracSeries) -> FracSeries {
        self.add(&other.neg())
    }

    /// Scale by an exact rational.
    pub fn scale(&self, c: &BigRational) -> FracSeries {
        if c.is_zero() {
            return FracSeries::zero(self.den, self.end());
        }
        let mut s = self.clone();
        for x in &mut s.coeffs {
            *x = &*x * c.numer();
        }
        s.cden = &s.cden * c.denom();
        s.normalize();
        s
    }

    /// Cauchy product on the common grid; leading exponents add, and the
    /// window is the minimum achievable from the operands.
    pub fn mul(&self, other: &FracSeries) -> FracSeries {
        let (a, b) = FracSeries::aligned(self, other);
        // Valid product exponents: everything below min(endA + startB, endB + startA).
        let end = (a.end() + b.start).min(b.end() + a.start);
        let start = a.start + b.start;
        if a.coeffs.is_empty() || b.coeffs.is_empty() || end <= start {
            return FracSeries::zero(a.den, end);
        }
        let n = (end - start) as usize;
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() || i >= n {
                continue;
            }
            let lim = (n - i).min(b.coeffs.len());
            for (j, cb) in b.coeffs.iter().take(lim).enumerate() {
                if !cb.is_zero() {
                    coeffs[i + j] += ca * cb;
                }
            }
        }
        let mut s = FracSeries { den: a.den, start, coeffs, cden: &a.cden * &b.cden };
        s.normalize();
        s
    }

    /// Multiplicative inverse to the window; errors when the leading
    /// coefficient is zero (or the window is empty).
    pub fn invert(&self) -> Result<FracSeries> {
        if self.coeffs.is_empty() || self.coeffs[0].is_zero() {
            return Err(QkError::NotInvertible);
        }
        let n = self.coeffs.len();
        let a: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::new(c.clone(), self.cden.clone()))
            .collect();
        let mut b: Vec<BigRational> = Vec::with_capacity(n);
        b.push(a[0].recip());
        for m in 1..n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if !a[k].is_zero() {
                    acc += &a[k] * &b[m - k];
                }
            }
            b.push(-acc / &a[0]);
        }
        Ok(Self::from_rationals(self.den, -self.start, b))
    }

    /// Build from a vector of exact rational coefficients.
    pub fn from_rationals(den: i64, start: i64, coeffs: Vec<BigRational>) -> FracSeries {
        let mut cden = BigInt::one();
        for c in &coeffs {
            cden = cden.lcm(c.denom());
        }
        let nums = coeffs.iter().map(|c| c.numer() * (&cden / c.denom())).collect();
        let mut s = FracSeries { den, start, coeffs: nums, cden };
        s.normalize();
        s
    }

    /// Integer power; negative exponents require invertibility.
    pub fn pow(&self, e: i64) -> Result<FracSeries> {
        if e == 0 {
            let order = (self.trunc() as i64 - 1).max(0);
            let mut one = FracSeries::one(order);
            one = one.rescale_grid(self.den);
            return Ok(one);
        }
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut result: Option<FracSeries> = None;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => sq.clone(),
                    Some(r) => r.mul(&sq),
                });
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result.unwrap())
    }

    /// In-place multiply by the sparse binomial `1 + sign*q^{c/den}` (`c` on
    /// this series' grid, `c >= 1`, `sign = +-1`).  O(trunc).
    pub fn mul_binomial(&mut self, c: i64, sign: i64) {
        assert!(c >= 1 && (sign == 1 || sign == -1));
        let n = self.coeffs.len();
        let c = c as usize;
        if c >= n {
            return;
        }
        for k in (c..n).rev() {
            if !self.coeffs[k - c].is_zero() {
                let t = self.coeffs[k - c].clone();
                if sign > 0 {
                    self.coeffs[k] += t;
                } else {
                    self.coeffs[k] -= t;
                }
            }
        }
    }

    /// In-place divide by the sparse binomial `1 + sign*q^{c/den}`.  O(trunc).
    pub fn div_binomial(&mut self, c: i64, sign: i64) {
        assert!(c >= 1 && (sign == 1 || sign == -1));
        let n = self.coeffs.len();
        let c = c as usize;
        for k in c..n {
            if !self.coeffs[k - c].is_zero() {
                let t = self.coeffs[k - c].clone();
                if sign > 0 {
                    self.coeffs[k] -= t;
                } else {
                    self.coeffs[k] += t;
                }
            }
        }
    }

    /// Shift all exponents by `delta/den` (on this series' grid).
    pub fn shift(&self, delta: i64) -> FracSeries {
        let mut s = self.clone();
        s.start += delta;
        s
    }

    /// Substitute `tau -> tau/m`: every exponent is divided by `m`.
    pub fn scale_exp_div(&self, m: i64) -> FracSeries {
        assert!(m >= 1);
        FracSeries {
            den: self.den * m,
            start: self.start,
            coeffs: self.coeffs.clone(),
            cden: self.cden.clone(),
        }
    }

    /// The dissection operator `U_{m,r}`: keep coefficients at integer
    /// exponents `n == r (mod m)` and send `q^n -> q^{n/m}`.
    ///
    /// Every nonzero coefficient of the input must sit at an integer
    /// exponent; otherwise the grid does not refine `1/m` coherently and
    /// this errors.
    pub fn dissect(&self, m: i64, r: i64) -> Result<FracSeries> {
        assert!(m >= 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && (self.start + k as i64).rem_euclid(self.den) != 0 {
                return Err(QkError::GridMismatch(format!(
                    "nonzero coefficient at non-integral exponent {}/{}",
                    self.start + k as i64,
                    self.den
                )));
            }
        }
        let r = r.rem_euclid(m);
        // Integer exponents n with known coefficients: lo <= n < hi.
        let lo = Rational64::new(self.start, self.den).ceil().to_integer();
        let hi = self.window_end().ceil().to_integer();
        let mut out: Vec<BigInt> = Vec::with_capacity((hi - lo).max(0) as usize);
        for n in lo..hi {
            if n.rem_euclid(m) != r {
                out.push(BigInt::zero());
                continue;
            }
            let on_grid = n * self.den;
            let c = if on_grid < self.start || on_grid >= self.end() {
                BigInt::zero()
            } else {
                self.coeffs[(on_grid - self.start) as usize].clone()
            };
            out.push(c);
        }
        // Output exponent n/m: grid m with numerators equal to the original
        // integer exponents.
        let mut s = FracSeries { den: m, start: lo, coeffs: out, cden: self.cden.clone() };
        s.normalize();
        Ok(s)
    }

    /// Keep only coefficients whose exponent numerator (on this grid) is
    /// congruent to `r` modulo `m`; exponents are unchanged.
    pub fn extract_class(&self, m: i64, r: i64) -> FracSeries {
        let r = r.rem_euclid(m);
        let mut s = self.clone();
        for (k, c) in s.coeffs.iter_mut().enumerate() {
            if (self.start + k as i64).rem_euclid(m) != r {
                *c = BigInt::zero();
            }
        }
        s.normalize();
        s
    }

    /// Reduce all coefficients into `[0, m)`.  Errors on a non-integral
    /// coefficient.
    pub fn reduce_mod(&self, m: &BigInt) -> Result<FracSeries> {
        assert!(m.is_positive());
        if !self.cden.is_one() {
            for (k, c) in self.coeffs.iter().enumerate() {
                if !(c % &self.cden).is_zero() {
                    return Err(QkError::NotIntegral(format!(
                        "{}/{}",
                        self.start + k as i64,
                        self.den
                    )));
                }
            }
        }
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c / &self.cden).mod_floor(m))
            .collect();
        let mut s = FracSeries { den: self.den, start: self.start, coeffs, cden: BigInt::one() };
        s.normalize();
        Ok(s)
    }

    /// Exact equality of coefficients through rational exponent `through`
    /// (inclusive).  Errors when either window is too short.
    pub fn eq_through(&self, other: &FracSeries, through: Rational64) -> Result<bool> {
        for s in [self, other] {
            if s.window_end() <= through {
                return Err(QkError::TruncationTooShort {
                    need: through.to_string(),
                    have: s.window_end().to_string(),
                });
            }
        }
        Ok(self.sub(other).truncate_at_inclusive(through).is_zero_on_window())
    }

    /// Drop information past `through` (inclusive bound).
    pub fn truncate_at_inclusive(&self, through: Rational64) -> FracSeries {
        let scaled = through * Rational64::from_integer(self.den);
        let num = scaled.floor().to_integer() + 1;
        let mut s = self.clone();
        if num <= s.start {
            return FracSeries::zero(s.den, num.min(s.start));
        }
        let len = ((num - s.start) as usize).min(s.coeffs.len());
        s.coeffs.truncate(len);
        s.normalize();
        s
    }

    /// True when all known coefficients through `through` (inclusive) vanish.
    pub fn is_zero_through(&self, through: Rational64) -> Result<bool> {
        if self.window_end() <= through {
            return Err(QkError::TruncationTooShort {
                need: through.to_string(),
                have: self.window_end().to_string(),
            });
        }
        Ok(self.truncate_at_inclusive(through).is_zero_on_window())
    }

    /// Nonzero coefficients as exact rationals with exponent numerators on
    /// this grid.
    pub fn terms(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| {
            (self.start + k as i64, BigRational::new(c.clone(), self.cden.clone()))
        })
    }
}

/// Expansion of the double Pochhammer factor `(q^i, q^{p-i}; q^p)_inf`,
/// integer grid, valid through exponent `order` inclusive.
pub fn pochhammer_product(i: u64, p: u64, order: i64) -> Result<FracSeries> {
    if i < 1 || i > (p - 1) / 2 {
        return Err(QkError::IndexRange(format!(
            "pochhammer index {i} out of range 1..={}",
            (p - 1) / 2
        )));
    }
    let mut s = FracSeries::one(order);
    apply_pochhammer_passes(&mut s, &[i as i64, (p - i) as i64], p as i64, 1);
    Ok(s)
}

/// `(q^a; q^p)`-type passes on an integer-grid series: multiply (`exp > 0`)
/// or divide (`exp < 0`) by `prod_j (1 - q^{a + j p})` for each offset `a`,
/// `|exp|` times.
pub(crate) fn apply_pochhammer_passes(s: &mut FracSeries, offsets: &[i64], p: i64, exp: i64) {
    assert_eq!(s.den(), 1, "pochhammer passes expect the integer grid");
    let len = s.trunc() as i64;
    for _ in 0..exp.unsigned_abs() {
        for &a in offsets {
            let mut c = a;
            while c < len {
                if exp > 0 {
                    s.mul_binomial(c, -1);
                } else {
                    s.div_binomial(c, -1);
                }
                c += p;
            }
        }
    }
}

/// `eta(p tau)^e` as a series: leading exponent `e*p/24`, grid 24, valid
/// through exponent `order` inclusive.
pub fn eta_power(p: u64, e: i64, order: i64) -> FracSeries {
    if e == 0 {
        return FracSeries::one(order);
    }
    let p = p as i64;
    let win = order + (e * p).abs() / 24 + 2;
    let mut s = FracSeries::one(win);
    apply_pochhammer_passes(&mut s, &[p], p, e);
    s.rescale_grid(24).shift(e * p).truncate_at_inclusive(Rational64::from_integer(order))
}
